//! Text notation for cluster pictures, following the usual diagrams: the top
//! cluster carries its absolute depth, every nested cluster its relative
//! depth.
//!
//! ```text
//! cluster  := '(' item (' ' item)* ')' '_' rational
//! item     := '*' | cluster
//! rational := int | int '/' posint
//! ```
//!
//! For example `(((* * *)_2 * * *)_4 (* * * *)_8 * *)_0`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::picture::{ClusterPicture, Shape};

/// Parses notation into an abstract picture with the given `v(c_f)`.
pub fn parse_picture(text: &str, vcf: Rational) -> Result<ClusterPicture> {
    let shape = parse_shape(text)?;
    ClusterPicture::from_shape(shape, vcf, None, None)
}

/// Parses notation into a [`Shape`] with absolute depths; leaves are numbered
/// in order of appearance.
pub fn parse_shape(text: &str) -> Result<Shape> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.peek() == Some(b'*') {
        return Err(p.error("top-level item must be a cluster"));
    }
    let raw = p.cluster()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    to_shape(raw, None, &mut 0)
}

/// Canonical text of a picture.
pub fn print_picture(picture: &ClusterPicture) -> String {
    picture.subtree_text(picture.top())
}

/// Renders a shape whose children are already in canonical order.
pub(crate) fn render(shape: &Shape, parent_depth: Option<&Rational>) -> String {
    let mut out = String::new();
    render_into(shape, parent_depth, &mut out);
    out
}

fn render_into(shape: &Shape, parent_depth: Option<&Rational>, out: &mut String) {
    match shape {
        Shape::Leaf(_) => out.push('*'),
        Shape::Cluster { depth, children } => {
            out.push('(');
            for (k, c) in children.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                render_into(c, Some(depth), out);
            }
            out.push_str(")_");
            match parent_depth {
                Some(pd) => out.push_str(&(depth - pd).to_string()),
                None => out.push_str(&depth.to_string()),
            }
        }
    }
}

enum Raw {
    Leaf,
    Cluster {
        sub: Rational,
        sub_pos: usize,
        items: Vec<Raw>,
    },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn cluster(&mut self) -> Result<Raw> {
        self.expect(b'(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    items.push(Raw::Leaf);
                }
                Some(b'(') => items.push(self.cluster()?),
                Some(b')') => break,
                _ => return Err(self.error("expected '*', '(' or ')'")),
            }
        }
        if items.len() < 2 {
            return Err(self.error("a cluster needs at least two items"));
        }
        self.pos += 1;
        self.skip_ws();
        self.expect(b'_')?;
        self.skip_ws();
        let sub_pos = self.pos;
        let sub = self.rational()?;
        Ok(Raw::Cluster {
            sub,
            sub_pos,
            items,
        })
    }

    fn rational(&mut self) -> Result<Rational> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.digits()?;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("bad depth {text:?}"),
        })
    }

    fn digits(&mut self) -> Result<()> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected digits"));
        }
        Ok(())
    }
}

fn to_shape(raw: Raw, parent_depth: Option<&Rational>, next_leaf: &mut usize) -> Result<Shape> {
    match raw {
        Raw::Leaf => {
            *next_leaf += 1;
            Ok(Shape::Leaf(*next_leaf - 1))
        }
        Raw::Cluster {
            sub,
            sub_pos,
            items,
        } => {
            let depth = match parent_depth {
                None => sub,
                Some(pd) => {
                    if sub <= Rational::zero() {
                        return Err(Error::Syntax {
                            pos: sub_pos,
                            msg: format!("relative depth {sub} is not positive"),
                        });
                    }
                    pd + &sub
                }
            };
            let children = items
                .into_iter()
                .map(|it| to_shape(it, Some(&depth), next_leaf))
                .collect::<Result<Vec<_>>>()?;
            Ok(Shape::Cluster { depth, children })
        }
    }
}

/// Abstract picture as exchanged in JSON: either the text notation or an
/// expanded tree where each node carries `depth` (absolute at the top,
/// relative below) and `children`, with `"*"` for a root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractPictureJson {
    #[serde(default)]
    pub vcf: Rational,
    pub picture: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeNode {
    Leaf(String),
    Cluster {
        depth: Rational,
        children: Vec<TreeNode>,
    },
}

impl TreeNode {
    /// Expanded tree form of a picture, children in canonical order.
    pub fn from_picture(picture: &ClusterPicture) -> TreeNode {
        fn go(shape: &Shape, parent: Option<&Rational>) -> TreeNode {
            match shape {
                Shape::Leaf(_) => TreeNode::Leaf("*".into()),
                Shape::Cluster { depth, children } => TreeNode::Cluster {
                    depth: parent.map_or_else(|| depth.clone(), |pd| depth - pd),
                    children: children.iter().map(|c| go(c, Some(depth))).collect(),
                },
            }
        }
        go(&picture.to_shape(), None)
    }

    pub fn to_shape(&self) -> Result<Shape> {
        fn go(node: &TreeNode, parent: Option<&Rational>, next: &mut usize) -> Result<Shape> {
            match node {
                TreeNode::Leaf(s) if s == "*" => {
                    *next += 1;
                    Ok(Shape::Leaf(*next - 1))
                }
                TreeNode::Leaf(s) => Err(Error::Input(format!("unexpected tree item {s:?}"))),
                TreeNode::Cluster { depth, children } => {
                    let depth = match parent {
                        None => depth.clone(),
                        Some(pd) if depth > &Rational::zero() => pd + depth,
                        Some(_) => {
                            return Err(Error::Input(format!(
                                "relative depth {depth} is not positive"
                            )))
                        }
                    };
                    let children = children
                        .iter()
                        .map(|c| go(c, Some(&depth), next))
                        .collect::<Result<_>>()?;
                    Ok(Shape::Cluster { depth, children })
                }
            }
        }
        if matches!(self, TreeNode::Leaf(_)) {
            return Err(Error::Input("top-level item must be a cluster".into()));
        }
        go(self, None, &mut 0)
    }
}

/// Reads an abstract picture from either JSON form. A top-level `vcf` field
/// is honoured in both; when absent `default_vcf` is used.
pub fn picture_from_json(value: &Value, default_vcf: Option<&Rational>) -> Result<ClusterPicture> {
    let vcf = match value.get("vcf") {
        Some(v) => serde_json::from_value::<Rational>(v.clone())?,
        None => default_vcf.cloned().unwrap_or_default(),
    };
    if let Some(text) = value.get("picture") {
        let text = text
            .as_str()
            .ok_or_else(|| Error::Input("\"picture\" must be a string".into()))?;
        return parse_picture(text, vcf);
    }
    if value.get("children").is_some() {
        let tree: TreeNode = serde_json::from_value(value.clone())?;
        return ClusterPicture::from_shape(tree.to_shape()?, vcf, None, None);
    }
    Err(Error::Input(
        "expected a \"picture\" string or a \"children\" tree".into(),
    ))
}

pub fn picture_to_json(picture: &ClusterPicture) -> AbstractPictureJson {
    AbstractPictureJson {
        vcf: picture.vcf().clone(),
        picture: print_picture(picture),
    }
}
