//! `polyext`: command-line access to the polyhedral-space analyses.
//!
//! Every run prints one JSON document. Exit status: 0 success, 2 invalid
//! input, 3 dimension cap or time budget refused, 4 internal inconsistency.

mod input;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand};
use polyext_core::global::{self, Limits};
use polyext_core::linalg::format_rational;
use polyext_core::{ConvertOptions, Error, DEFAULT_CAP};
use serde_json::{json, Map, Value};

use input::InputError;

#[derive(Parser)]
#[command(
    name = "polyext",
    version,
    about = "Extreme contractions between polyhedral normed spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Dimension cap for ball conversions and operator spaces.
    #[arg(long, global = true, env = "POLYEXT_CAP")]
    cap: Option<usize>,

    /// Wall-clock budget for enumerations.
    #[arg(long, global = true)]
    budget_seconds: Option<f64>,

    /// Human-readable summary on stderr.
    #[arg(long, global = true)]
    verbose: bool,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a space and print its canonical form.
    SpaceValidate {
        #[arg(long)]
        space: String,
    },
    /// The dual space.
    SpaceDual {
        #[arg(long)]
        space: String,
    },
    /// Supporting functionals and order of smoothness of a unit vector.
    PointSmoothness {
        #[arg(long)]
        space: String,
        #[arg(long)]
        point: String,
    },
    OpNorm {
        #[arg(long)]
        op: String,
    },
    OpExtreme {
        #[arg(long)]
        op: String,
    },
    /// Case tag for a norm-one map between planar spaces.
    OpClassify {
        #[arg(long)]
        op: String,
    },
    /// Extreme points of the image of the unit ball.
    OpImage {
        #[arg(long)]
        op: String,
    },
    /// All extreme contractions between two spaces.
    Enumerate {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        codomain: String,
    },
    Weaklp {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        codomain: String,
    },
    Lp {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        codomain: String,
    },
    CensusHexagon,
    /// Extreme contraction into linf2 hitting no vertex.
    #[command(name = "construct-26")]
    Construct26 {
        #[arg(long)]
        space: String,
    },
    /// Planar space with 2n vertices breaking weak L-P for the given domain.
    #[command(name = "construct-28")]
    Construct28 {
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: usize,
    },
}

impl Command {
    fn verb(&self) -> &'static str {
        match self {
            Command::SpaceValidate { .. } => "space-validate",
            Command::SpaceDual { .. } => "space-dual",
            Command::PointSmoothness { .. } => "point-smoothness",
            Command::OpNorm { .. } => "op-norm",
            Command::OpExtreme { .. } => "op-extreme",
            Command::OpClassify { .. } => "op-classify",
            Command::OpImage { .. } => "op-image",
            Command::Enumerate { .. } => "enumerate",
            Command::Weaklp { .. } => "weaklp",
            Command::Lp { .. } => "lp",
            Command::CensusHexagon => "census-hexagon",
            Command::Construct26 { .. } => "construct-26",
            Command::Construct28 { .. } => "construct-28",
        }
    }
}

struct Report {
    echo: Map<String, Value>,
    body: Map<String, Value>,
    summary: String,
}

impl Report {
    fn new() -> Self {
        Report {
            echo: Map::new(),
            body: Map::new(),
            summary: String::new(),
        }
    }

    fn echo(&mut self, key: &str, v: impl serde::Serialize) {
        self.echo.insert(key.into(), to_value(v));
    }

    fn set(&mut self, key: &str, v: impl serde::Serialize) {
        self.body.insert(key.into(), to_value(v));
    }

    fn merge(&mut self, v: impl serde::Serialize) {
        if let Value::Object(m) = to_value(v) {
            self.body.extend(m);
        }
    }
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn run(cmd: &Command, opts: &ConvertOptions, limits: &Limits) -> Result<Report, InputError> {
    let mut r = Report::new();
    match cmd {
        Command::SpaceValidate { space } => {
            let x = input::space(space, opts)?;
            r.echo("space", &x);
            r.set("valid", true);
            r.set("dim", x.dim());
            r.set("vertex_count", x.ball().len());
            r.set("facet_count", x.facets().len());
            r.set("excess", x.excess());
            r.summary = format!(
                "valid {}-dimensional space, {} vertices, {} facets",
                x.dim(),
                x.ball().len(),
                x.facets().len()
            );
        }
        Command::SpaceDual { space } => {
            let x = input::space(space, opts)?;
            let d = x.dual();
            r.echo("space", &x);
            r.summary = format!("dual ball has {} vertices", d.ball().len());
            r.set("dual", &d);
        }
        Command::PointSmoothness { space, point } => {
            let x = input::space(space, opts)?;
            let p = input::point(point)?;
            r.echo("space", &x);
            r.echo("point", &p);
            let order = x.smoothness_order(&p)?;
            let face = x.ext_j(&p)?;
            r.set("order", order);
            r.set("functionals", &face.functionals);
            r.set("extreme", x.is_extreme_point(&p)?);
            r.summary = format!("{p} is {order}-smooth");
        }
        Command::OpNorm { op } => {
            let t = input::operator(op, opts)?;
            r.echo("op", &t);
            let n = t.op_norm();
            r.summary = format!("norm {n}");
            r.set("norm", format_rational(&n));
        }
        Command::OpExtreme { op } => {
            let t = input::operator(op, opts)?;
            r.echo("op", &t);
            let n = t.op_norm();
            let extreme = t.is_extreme_contraction();
            r.set("norm", format_rational(&n));
            r.set("extreme", extreme);
            r.set("mn", t.domain().dim() * t.codomain().dim());
            match t.support() {
                Ok(s) => {
                    r.set("order", s.order);
                    r.set("attainers", s.attainer_count());
                    r.set("support", &s);
                }
                Err(_) => {
                    r.set("order", Value::Null);
                }
            }
            r.summary = format!("norm {n}, extreme contraction: {extreme}");
        }
        Command::OpClassify { op } => {
            let t = input::operator(op, opts)?;
            r.echo("op", &t);
            let case = t.classify_2d()?;
            r.set("case", case);
            r.summary = format!("case {case}");
        }
        Command::OpImage { op } => {
            let t = input::operator(op, opts)?;
            r.echo("op", &t);
            let img = t.image_extreme_points();
            r.set("count", img.len());
            r.set("image_vertices", img.vertices());
            r.set("rank_two_attaining", t.rank_two_attaining());
            r.summary = format!("image has {} extreme points", img.len());
        }
        Command::Enumerate { domain, codomain } => {
            let (x, y) = pair(&mut r, domain, codomain, opts)?;
            let c = global::enumerate_extreme_contractions(&x, &y, limits)?;
            r.summary = format!("{} extreme contractions", c.count());
            r.merge(&c);
        }
        Command::Weaklp { domain, codomain } => {
            let (x, y) = pair(&mut r, domain, codomain, opts)?;
            let v = global::check_weak_lp(&x, &y, limits)?;
            r.summary = match v.holds {
                Some(true) => format!("weak L-P holds ({} checked)", v.checked),
                Some(false) => format!("weak L-P fails ({} checked)", v.checked),
                None => format!("inconclusive within budget ({} checked)", v.checked),
            };
            r.merge(&v);
            r.set("sufficient_condition", global::weak_lp_sufficient(&x, &y));
        }
        Command::Lp { domain, codomain } => {
            let (x, y) = pair(&mut r, domain, codomain, opts)?;
            let v = global::check_lp(&x, &y, limits)?;
            r.summary = format!("L-P holds: {}", v.holds);
            r.merge(&v);
        }
        Command::CensusHexagon => {
            let c = global::hexagon_census(limits)?;
            r.summary = format!(
                "{} extreme contractions, {} isometries",
                c.count(),
                c.isometries().unwrap_or(0)
            );
            r.merge(&c);
        }
        Command::Construct26 { space } => {
            let x = Arc::new(input::space(space, opts)?);
            r.echo("space", x.as_ref());
            let t = global::vertex_avoiding_contraction(&x)?;
            r.summary = format!("witness {}", t.matrix());
            r.set("operator", &t);
        }
        Command::Construct28 { space, n } => {
            let x = Arc::new(input::space(space, opts)?);
            r.echo("space", x.as_ref());
            r.echo("n", n);
            let (y, cert) = global::vertex_avoiding_space(&x, *n)?;
            r.summary = format!("space with {} vertices", y.ball().len());
            r.set("space", &y);
            r.set("certificate", &cert);
        }
    }
    Ok(r)
}

fn pair(
    r: &mut Report,
    domain: &str,
    codomain: &str,
    opts: &ConvertOptions,
) -> Result<
    (
        Arc<polyext_core::PolyhedralSpace>,
        Arc<polyext_core::PolyhedralSpace>,
    ),
    InputError,
> {
    let x = Arc::new(input::space(domain, opts)?);
    let y = Arc::new(input::space(codomain, opts)?);
    r.echo("domain", x.as_ref());
    r.echo("codomain", y.as_ref());
    Ok((x, y))
}

fn failure(e: &InputError) -> (u8, &'static str, String) {
    match e {
        InputError::Io(m) => (2, "io", m.clone()),
        InputError::Json(m) => (2, "malformed-json", m.clone()),
        InputError::UnknownSpace(m) => (2, "unknown-space", m.clone()),
        InputError::Invalid(m) => (2, "validation", m.clone()),
        InputError::Core(e) => {
            let kind = match e {
                Error::CapExceeded { .. } => "cap-exceeded",
                Error::BudgetExhausted { .. } => "budget-exhausted",
                Error::Inconsistency(_) => "internal-inconsistency",
                Error::Inapplicable(_) => "inapplicable",
                _ => "validation",
            };
            let code = if e.is_limit() {
                3
            } else if matches!(e, Error::Inconsistency(_)) {
                4
            } else {
                2
            };
            (code, kind, e.to_string())
        }
    }
}

fn emit(out: Option<&PathBuf>, doc: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string(doc).expect("JSON values always serialize");
    match out {
        Some(path) => fs::write(path, text + "\n"),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let doc = json!({"error": {"kind": "usage", "message": e.to_string().trim_end()}});
            let _ = emit(None, &doc);
            return ExitCode::from(2);
        }
    };
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    let opts = ConvertOptions {
        cap,
        ..ConvertOptions::default()
    };
    let budget = match cli.budget_seconds {
        Some(s) if !(s.is_finite() && s >= 0.0) => {
            let doc = json!({"error": {"kind": "usage", "message": format!("bad budget {s}")}});
            let _ = emit(cli.out.as_ref(), &doc);
            return ExitCode::from(2);
        }
        s => s.map(Duration::from_secs_f64),
    };
    let limits = Limits { cap, budget };

    let (doc, code) = match run(&cli.command, &opts, &limits) {
        Ok(r) => {
            if cli.verbose {
                eprintln!("{}: {}", cli.command.verb(), r.summary);
            }
            let mut doc = Map::new();
            doc.insert("command".into(), cli.command.verb().into());
            doc.insert("inputs_echo".into(), Value::Object(r.echo));
            doc.extend(r.body);
            (Value::Object(doc), 0)
        }
        Err(e) => {
            let (code, kind, message) = failure(&e);
            if cli.verbose {
                eprintln!("{}: {kind}: {message}", cli.command.verb());
            }
            (json!({"error": {"kind": kind, "message": message}}), code)
        }
    };
    if let Err(e) = emit(cli.out.as_ref(), &doc) {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
