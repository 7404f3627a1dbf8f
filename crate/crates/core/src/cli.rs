//! The `clusterpic` command line. Kept in the library so it can be driven
//! from tests with in-memory streams.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::arith::Rational;
use crate::basis::{basis_sequence_with, BasisResult, TieBreak};
use crate::error::{Error, Result};
use crate::harness::{run_check, CheckReport, EnumSpec, DEFAULT_CAP};
use crate::input::{load_picture, Overrides};
use crate::notation::print_picture;
use crate::picture::{validate_integrality, ClusterPicture};
use crate::report::{basis_json, cluster_json, disc_json, lambda_json, transform_json};
use crate::transforms::{transform, TransformSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "clusterpic",
    version,
    about = "Integral differentials and v(lambda) from cluster pictures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Roots JSON, abstract-picture JSON, or picture notation; `-` for stdin
    #[arg(long, short, default_value = "-")]
    pub input: String,
    /// Prime for evaluating root expressions (overrides the input's "p")
    #[arg(long)]
    pub p: Option<u64>,
    /// v(c_f) for abstract pictures
    #[arg(long)]
    pub vcf: Option<Rational>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical picture with its depth / nu table
    Cluster(InputArgs),
    /// Greedy cluster sequence, exponents e_i and differentials mu_i
    Basis {
        #[command(flatten)]
        input: InputArgs,
        /// Print the objective of every cluster at every step
        #[arg(long)]
        trace: bool,
        /// Break incomparable ties at random with this seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// 8 v(lambda), v(lambda) and discriminant data
    Lambda(InputArgs),
    /// Discriminant valuation and hyperelliptic discriminant order (roots input)
    Disc(InputArgs),
    /// Apply a transform and compare the predicted and actual change of 8 v(lambda)
    Transform {
        #[command(flatten)]
        input: InputArgs,
        /// deepen:t | add-root | redistribute:<path>:t | scale-leading:m | rescale:t,s | shift:z
        #[arg(long)]
        op: TransformSpec,
    },
    /// Enumerate small pictures and cross-validate every identity
    Check(CheckArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 8)]
    pub max_roots: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub depths: Vec<i64>,
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub dr: Vec<i64>,
    #[arg(long, value_delimiter = ',', default_value = "0,2")]
    pub vcf: Vec<i64>,
    /// Check a uniform sample of this many pictures
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grids larger than this are sampled down to it
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl From<&CheckArgs> for EnumSpec {
    fn from(a: &CheckArgs) -> Self {
        EnumSpec {
            max_roots: a.max_roots,
            rel_depths: a.depths.clone(),
            top_depths: a.dr.clone(),
            vcfs: a.vcf.clone(),
            sample: a.sample,
            seed: a.seed,
            cap: a.cap,
        }
    }
}

/// What a subcommand produced: the rendered output and its exit status.
struct Outcome {
    out: String,
    code: i32,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { out, code: EXIT_OK }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, stdin) {
        Ok(o) => {
            let _ = stdout.write_all(o.out.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_INVALID
    } else {
        EXIT_INPUT
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Error::Input(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn load(args: &InputArgs, stdin: &mut dyn Read) -> Result<ClusterPicture> {
    let text = read_input(&args.input, stdin)?;
    load_picture(
        &text,
        &Overrides {
            p: args.p,
            vcf: args.vcf.clone(),
        },
    )
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn execute(cmd: &Command, stdin: &mut dyn Read) -> Result<Outcome> {
    match cmd {
        Command::Cluster(a) => {
            let p = load(a, stdin)?;
            Ok(Outcome::ok(match a.format {
                Format::Json => to_json(&cluster_json(&p)?),
                Format::Text => cluster_text(&p)?,
            }))
        }
        Command::Basis { input, trace, seed } => {
            let p = load(input, stdin)?;
            let tie = seed.map_or(TieBreak::Canonical, TieBreak::Seeded);
            let b = basis_sequence_with(&p, tie)?;
            Ok(Outcome::ok(match input.format {
                Format::Json => to_json(&basis_json(&p, &b, *trace)),
                Format::Text => basis_text(&p, &b, *trace),
            }))
        }
        Command::Lambda(a) => {
            let p = load(a, stdin)?;
            let v = lambda_json(&p)?;
            Ok(Outcome::ok(match a.format {
                Format::Json => to_json(&v),
                Format::Text => key_values(&v),
            }))
        }
        Command::Disc(a) => {
            let p = load(a, stdin)?;
            let v = disc_json(&p)?;
            let agree = v["v_disc"] == v["v_disc_from_roots"];
            let out = match a.format {
                Format::Json => to_json(&v),
                Format::Text => key_values(&v),
            };
            Ok(Outcome {
                out,
                code: if agree { EXIT_OK } else { EXIT_INVALID },
            })
        }
        Command::Transform { input, op } => {
            let p = load(input, stdin)?;
            let t = transform(&p, op)?;
            let v = transform_json(&p, op, &t);
            let out = match input.format {
                Format::Json => to_json(&v),
                Format::Text => key_values(&v),
            };
            Ok(Outcome {
                out,
                code: if t.consistent() {
                    EXIT_OK
                } else {
                    EXIT_INVALID
                },
            })
        }
        Command::Check(a) => {
            let report = run_check(&EnumSpec::from(a), a.jobs)?;
            let out = match a.format {
                Format::Json => to_json(&report),
                Format::Text => check_text(&report),
            };
            Ok(Outcome {
                out,
                code: if report.passed() {
                    EXIT_OK
                } else {
                    EXIT_INVALID
                },
            })
        }
    }
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn cluster_text(p: &ClusterPicture) -> Result<String> {
    let mut rows = vec![[
        "cluster",
        "size",
        "d",
        "delta",
        "nu",
        "nu/2 - d",
        "principal",
    ]
    .map(String::from)
    .to_vec()];
    for s in p.proper_clusters() {
        let nu = p.nu(s)?;
        let half = nu.checked_div(&Rational::from(2))? - p.depth(s);
        rows.push(vec![
            p.label(s).to_string(),
            p.node(s).size().to_string(),
            p.depth(s).to_string(),
            p.rel_depth(s)
                .map_or_else(|_| "-".to_string(), |d| d.to_string()),
            nu.to_string(),
            half.to_string(),
            if p.is_principal(s) { "yes" } else { "no" }.to_string(),
        ]);
    }
    let mut out = format!(
        "{}\nv(c_f) = {}\ngenus = {}\n\n",
        print_picture(p),
        p.vcf(),
        p.genus()
    );
    out.push_str(&table(&rows));
    for issue in validate_integrality(p).issues {
        let _ = writeln!(out, "warning: {issue}");
    }
    Ok(out)
}

fn basis_text(p: &ClusterPicture, b: &BasisResult, trace: bool) -> String {
    let mut out = String::new();
    for (s, mu) in b.steps.iter().zip(&b.differentials) {
        let _ = writeln!(
            out,
            "s_{i} = {label:<4} e_{i} = {e:<4} centre {c:<6} mu_{i} = {mu}",
            i = s.index,
            label = p.label(s.cluster),
            e = s.exponent.to_string(),
            c = s.centre.to_string(),
        );
    }
    let _ = writeln!(out, "sum e = {}", b.exponent_sum());
    if trace {
        let clusters: Vec<_> = p.proper_clusters().collect();
        let mut header = vec!["step".to_string()];
        header.extend(clusters.iter().map(|&s| p.label(s).to_string()));
        let mut rows = vec![header];
        for (i, values) in b.trace.iter().enumerate() {
            let mut row = vec![i.to_string()];
            row.extend(clusters.iter().zip(values).map(|(&s, v)| {
                // the chosen maximum is bracketed
                if s == b.steps[i].cluster {
                    format!("[{v}]")
                } else {
                    v.to_string()
                }
            }));
            rows.push(row);
        }
        out.push('\n');
        out.push_str(&table(&rows));
    }
    for w in &b.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

/// `key: value` lines; JSON strings are printed bare.
fn key_values(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, val) in map {
            let shown = match val {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k}: {shown}");
        }
    }
    out
}

fn check_text(r: &CheckReport) -> String {
    let mut out = format!(
        "pictures checked: {}\nfailures: {}\n",
        r.pictures_checked,
        r.failures.len()
    );
    for (identity, n) in r.by_identity() {
        let _ = writeln!(out, "  {identity}: {n}");
    }
    for f in &r.failures {
        let _ = writeln!(
            out,
            "FAIL {} [{}] expected {} got {}",
            f.picture, f.identity, f.expected, f.got
        );
    }
    out
}
