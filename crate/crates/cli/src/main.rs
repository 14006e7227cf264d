mod report;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use skewtower::{
    associated_graded_tower, erase_all, erase_top, haynal_report, parse_element, parse_tower_file, render_tower_file,
    root_of_unity_order, swap_adjacent, validate_tower, Error, OreTower, Verdict,
};

use report::*;

#[derive(Parser)]
#[command(
    name = "skewtower",
    version,
    about = "Iterated Ore extensions: validation, erasure of derivations, PI checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tower description file.
    #[arg(long, global = true)]
    tower: Option<PathBuf>,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 4)]
    search_degree: u32,
    #[arg(long, global = true, default_value_t = 4)]
    verify_degree: u32,
    #[arg(long, global = true, default_value_t = 64)]
    order_bound: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Ore relations and q-skew identities level by level.
    Validate,
    /// Multiply two elements.
    Mul { left: String, right: String },
    /// Test whether an element is central.
    Central { element: String },
    /// Orders of the base automorphisms and of the twists lambda_ij.
    Order {
        /// Also report the root-of-unity order of this scalar.
        #[arg(long)]
        scalar: Option<String>,
    },
    /// Erase the derivation of the top level.
    Erase,
    /// Erase every derivation, producing a tower of pure twists.
    EraseAll,
    /// Move the derivation-free level below its neighbour.
    Swap {
        /// 1-based level to move down; must be at least 2.
        #[arg(long)]
        level: usize,
    },
    /// Associated graded tower.
    Gr,
    /// Root-of-unity PI criteria.
    PiCheck,
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::NotDiagonal { .. }
            | Error::CompatibilityFailed { .. }
            | Error::UnsupportedErasure { .. }
            | Error::QEqualsOne { .. }
            | Error::HypothesisViolation(_) => Failure::Math(e.to_string()),
            Error::DivisionByZero
            | Error::ZeroInput
            | Error::FieldMismatch(_)
            | Error::InvalidField(_)
            | Error::TowerMismatch(_)
            | Error::SupportTooHigh { .. }
            | Error::Parse { .. }
            | Error::UnknownVariableReference { .. } => Failure::Usage(e.to_string()),
        }
    }
}

struct Outcome {
    json: String,
    text: String,
    success: bool,
}

fn outcome(report: &impl Serialize, text: String, success: bool) -> Result<Outcome, Failure> {
    let json = serde_json::to_string_pretty(report).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(Outcome { json, text, success })
}

fn load(cli: &Cli) -> Result<OreTower, Failure> {
    let path = cli.tower.as_ref().ok_or_else(|| Failure::Usage("--tower FILE is required".into()))?;
    let src = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_tower_file(&src).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn element(t: &OreTower, text: &str) -> Result<skewtower::SkewPoly, Failure> {
    parse_element(t, text).map_err(|e| Failure::Usage(format!("`{text}`: {e}")))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let t = load(cli)?;
    match &cli.command {
        Command::Validate => {
            let r = validate_tower(&t, 0);
            let mut text = String::new();
            for l in &r.levels {
                let status = if l.is_valid() { "ok" } else { "FAILED" };
                let _ = writeln!(text, "level {} ({}): {status}", l.level, l.name);
                for f in &l.failures {
                    let _ = writeln!(text, "  {}: {}  lhs = {}  rhs = {}", f.check.label(), f.identity, f.lhs, f.rhs);
                }
            }
            let _ = writeln!(text, "{}", if r.is_valid() { "tower is valid" } else { "tower is invalid" });
            outcome(&ValidateJson::new(&r), text, r.is_valid())
        }
        Command::Mul { left, right } => {
            let (p, q) = (element(&t, left)?, element(&t, right)?);
            let product = t.render(&t.mul(&p, &q)?);
            let report = MulJson { command: "mul", left: t.render(&p), right: t.render(&q), product };
            let text = format!("{}\n", report.product);
            outcome(&report, text, true)
        }
        Command::Central { element: e } => {
            let p = element(&t, e)?;
            let c = t.is_central(&p)?;
            let report = CentralJson::new(&t, &p, &c);
            let text = match &report.fails_with {
                None => "central\n".to_string(),
                Some(g) => format!("not central: does not commute with {g}\n"),
            };
            outcome(&report, text, true)
        }
        Command::Order { scalar } => {
            let h = haynal_report(&t, cli.order_bound);
            let fmt = |o: &Option<u64>| o.map_or("none within bound".to_string(), |n| n.to_string());
            let mut text = String::new();
            for (i, o) in &h.base_orders {
                let _ = writeln!(text, "sigma_{i} on base: {}", fmt(o));
            }
            for ((i, j), o) in &h.lambda_orders {
                let _ = writeln!(text, "lambda_{i}{j}: {}", fmt(o));
            }
            let (scalar_text, scalar_order) = match scalar {
                None => (None, None),
                Some(s) => {
                    let p = element(&OreTower::new(t.base().clone()), s)?;
                    let value = p
                        .as_constant()
                        .and_then(|b| b.as_scalar())
                        .ok_or_else(|| Failure::Usage(format!("`{s}` is not a scalar")))?;
                    let order = root_of_unity_order(&value)?;
                    let _ = writeln!(text, "order of {}: {}", t.render(&p), fmt(&order));
                    (Some(t.render(&p)), order)
                }
            };
            let report = OrderJson {
                command: "order",
                sigma_orders: h.base_orders.clone(),
                lambda_orders: h.lambda_orders.iter().map(|((i, j), o)| (format!("{i},{j}"), *o)).collect(),
                scalar: scalar_text,
                scalar_order,
            };
            outcome(&report, text, true)
        }
        Command::Erase => {
            let e = erase_top(&t, cli.search_degree)?;
            let report = EraseJson {
                command: "erase",
                y: t.render(&e.y),
                witness: WitnessJson::new(&t, &e.witness),
                tower: render_tower_file(&e.tower),
            };
            let text = format!("branch: {}\ny = {}\n\n{}", report.witness.branch, report.y, report.tower);
            outcome(&report, text, true)
        }
        Command::EraseAll => {
            let r = erase_all(&t, cli.search_degree, cli.verify_degree)?;
            let report = EraseAllJson::new(&t, &r);
            let mut text = String::new();
            for y in &report.y {
                let _ = writeln!(text, "{} = {}", y.name, y.value);
            }
            for w in &report.warnings {
                let _ = writeln!(text, "warning: {w}");
            }
            let v = &report.verification;
            let _ = writeln!(
                text,
                "verification: {} ({} relations, {} leading forms)",
                if v.passed { "passed" } else { "FAILED" },
                v.relations_checked,
                v.leading_checked
            );
            for f in &v.failures {
                let _ = writeln!(text, "  {f}");
            }
            let _ = write!(text, "\n{}", report.tower);
            let passed = v.passed;
            outcome(&report, text, passed)
        }
        Command::Swap { level } => {
            if *level < 2 || *level > t.height() {
                return Err(Failure::Usage(format!("--level must be between 2 and {}", t.height())));
            }
            let s = swap_adjacent(&t, level - 1)?;
            let report = SwapJson::new(&s);
            let mut text = String::new();
            for w in &report.warnings {
                let _ = writeln!(text, "warning: {w}");
            }
            text.push_str(&report.tower);
            outcome(&report, text, true)
        }
        Command::Gr => {
            let g = associated_graded_tower(&t)?;
            let report = GradedJson::new(&g);
            let mut text = String::new();
            for s in &report.steps {
                let _ = writeln!(text, "{s}");
            }
            let _ = write!(text, "\n{}", report.tower);
            outcome(&report, text, true)
        }
        Command::PiCheck => {
            let h = haynal_report(&t, cli.order_bound);
            let report = PiJson::new(&t, &h);
            let mut text = format!("verdict: {}\n", h.verdict);
            if h.verdict == Verdict::PI {
                for w in &report.witnesses {
                    let _ = writeln!(text, "{}^{} is central", w.var, w.exponent);
                }
            }
            for n in &report.notes {
                let _ = writeln!(text, "note: {n}");
            }
            outcome(&report, text, true)
        }
    }
}

fn emit(cli: &Cli, o: &Outcome) -> Result<(), Failure> {
    let pretty = &o.json;
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{pretty}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let body = if cli.json { format!("{pretty}\n") } else { o.text.clone() };
    let mut out = std::io::stdout().lock();
    match out.write_all(body.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn error_json(kind: &str, message: &str) -> String {
    let mut m = BTreeMap::new();
    m.insert("error", kind);
    m.insert("message", message);
    serde_json::to_string_pretty(&m).unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| emit(&cli, &o).map(|()| o.success));
    let (kind, message, code) = match result {
        Ok(true) => return ExitCode::SUCCESS,
        Ok(false) => return ExitCode::from(1),
        Err(Failure::Math(m)) => ("math", m, 1),
        Err(Failure::Usage(m)) => ("usage", m, 2),
    };
    if cli.json {
        println!("{}", error_json(kind, &message));
    }
    eprintln!("error: {message}");
    ExitCode::from(code)
}
