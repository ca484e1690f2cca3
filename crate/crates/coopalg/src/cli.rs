//! Command-line surface: compute Margolis homology tables, Ext charts,
//! generator tables, and run verification suites. The binary is a thin
//! dispatcher over the library.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::comod::{ModulePres, Ring};
use crate::ext::{ext_chart, rep_labels, v0_localize, v2_split};
use crate::margolis::{margolis, r_decomposition, submodule_s, submodule_sprime};
use crate::svg::{render_chart_svg, render_table_svg};
use crate::tables::inductive_table;
use crate::verify::run_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_BAD_SELECTOR: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;

#[derive(Parser)]
#[command(
    name = "coopalg",
    about = "Exact GF(2) computations for truncated Brown-Peterson cooperations",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum RingArg {
    E1,
    E2,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::E1 => Ring::E1,
            RingArg::E2 => Ring::E2,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Per-degree Margolis homology dimensions of a module.
    Margolis(MargolisArgs),
    /// Trigraded Ext chart of a module, optionally localized or drawn.
    Ext(ExtArgs),
    /// The inductive generator table of a Brown-Gitler comodule.
    Table(TableArgs),
    /// Run a named verification suite; exits nonzero on failure.
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct MargolisArgs {
    /// Module selector: trivial, ambient:N, bu:J, hz:K, bg2:J, m2:J,
    /// m1:J, S, Q, sprime, qbar, R, e2, e2e1
    #[arg(long)]
    pub module: String,
    /// Which Milnor primitive (0, 1, or 2).
    #[arg(long, default_value_t = 0)]
    pub q: u8,
    /// Degree window for infinite modules.
    #[arg(long)]
    pub max_degree: Option<i64>,
    /// Also report dimensions refined by the length grading.
    #[arg(long)]
    pub lengths: bool,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExtArgs {
    #[arg(long)]
    pub module: String,
    /// Ground ring for the chart.
    #[arg(long, value_enum, default_value_t = RingArg::E2)]
    pub ring: RingArg,
    /// Suspend the module before charting.
    #[arg(long, default_value_t = 0)]
    pub suspend: i64,
    #[arg(long, default_value_t = 12)]
    pub max_s: u32,
    #[arg(long)]
    pub max_t: Option<i64>,
    /// Degree window for infinite modules.
    #[arg(long)]
    pub max_degree: Option<i64>,
    /// Write an SVG chart here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Report stabilized v0-localized ranks per stem (exit 3 when a
    /// stem in range has not stabilized).
    #[arg(long)]
    pub localized: bool,
    /// Structural check to run on the chart: even-concentration
    #[arg(long)]
    pub check: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct TableArgs {
    #[arg(long)]
    pub j: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write an SVG rendering in the chart key (circle/triangle).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite: margolis, freeness, splitting, exactness, bockstein,
    /// tables, relations, covers, properties, crosscheck, all
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 8)]
    pub j_max: i64,
    #[arg(long, default_value_t = 12)]
    pub max_s: u32,
    #[arg(long, default_value_t = 40)]
    pub max_t: i64,
    #[arg(long, default_value_t = 48)]
    pub max_degree: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

enum SelectorError {
    Unknown(String),
    MissingWindow(String),
}

/// Resolve a module selector. Infinite families need `max_degree`.
fn resolve_module(
    selector: &str,
    max_degree: Option<i64>,
    ring: Ring,
) -> Result<ModulePres, SelectorError> {
    let lower = selector.to_ascii_lowercase();
    let (head, arg) = match lower.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (lower.as_str(), None),
    };
    let parse_idx = |a: Option<&str>| -> Result<i64, SelectorError> {
        a.and_then(|x| x.parse::<i64>().ok())
            .filter(|&x| x >= 0)
            .ok_or_else(|| SelectorError::Unknown(selector.to_string()))
    };
    let need_window = || -> Result<i64, SelectorError> {
        max_degree.ok_or_else(|| SelectorError::MissingWindow(selector.to_string()))
    };
    match head {
        "trivial" => Ok(ModulePres::trivial(ring)),
        "ambient" => {
            let n = parse_idx(arg)?;
            if !(1..=2).contains(&n) {
                return Err(SelectorError::Unknown(selector.to_string()));
            }
            Ok(ModulePres::ambient(n as u8, need_window()?, ring))
        }
        "bu" => Ok(ModulePres::brown_gitler(1, parse_idx(arg)?, ring)),
        "hz" => Ok(ModulePres::brown_gitler(0, parse_idx(arg)?, ring)),
        "bg2" => Ok(ModulePres::brown_gitler(2, parse_idx(arg)?, ring)),
        "m2" => Ok(ModulePres::weight_component(2, parse_idx(arg)?, ring)),
        "m1" => Ok(ModulePres::weight_component(1, parse_idx(arg)?, ring)),
        "s" => Ok(submodule_s(need_window()?).sub),
        "q" => Ok(submodule_s(need_window()?).quot),
        "sprime" => Ok(submodule_sprime(&submodule_s(need_window()?).quot).sub),
        "qbar" => Ok(submodule_sprime(&submodule_s(need_window()?).quot).quot),
        "r" => Ok(r_decomposition(need_window()?).r),
        "e2" => Ok(ModulePres::exterior(2, ring)),
        "e2e1" => ModulePres::span_closed(
            ring,
            crate::milnor::AlgebraId::Exterior(2),
            vec![crate::milnor::Monomial::one(), crate::milnor::Monomial::gen(3)],
            7,
            true,
        )
        .map_err(|_| SelectorError::Unknown(selector.to_string())),
        _ => Err(SelectorError::Unknown(selector.to_string())),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> i32 {
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, content) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_WINDOW;
            }
            EXIT_OK
        }
        None => {
            print!("{content}");
            EXIT_OK
        }
    }
}

fn cmd_margolis(args: &MargolisArgs) -> i32 {
    // S' and Qbar only carry the E(1) action
    let ring = if matches!(args.module.to_ascii_lowercase().as_str(), "sprime" | "qbar" | "r") {
        Ring::E1
    } else {
        Ring::E2
    };
    let module = match resolve_module(&args.module, args.max_degree, ring) {
        Ok(m) => m,
        Err(SelectorError::Unknown(s)) => {
            eprintln!("error: unknown module selector '{s}'");
            return EXIT_BAD_SELECTOR;
        }
        Err(SelectorError::MissingWindow(s)) => {
            eprintln!("error: module '{s}' needs --max-degree");
            return EXIT_WINDOW;
        }
    };
    if args.q as usize >= module.ring.q_count() {
        eprintln!("error: Q{} does not act on this module", args.q);
        return EXIT_BAD_SELECTOR;
    }
    let h = margolis(&module, args.q);
    let content = match args.format {
        Format::Tsv => {
            let mut s = String::from("degree\tdim\treliable");
            if args.lengths {
                s.push_str("\tby_length");
            }
            s.push('\n');
            for (d, entry) in &h.degrees {
                s.push_str(&format!("{d}\t{}\t{}", entry.dim, entry.reliable));
                if args.lengths {
                    let lens = entry
                        .by_length
                        .as_ref()
                        .map(|m| {
                            m.iter()
                                .map(|(l, n)| format!("{l}:{n}"))
                                .collect::<Vec<_>>()
                                .join(",")
                        })
                        .unwrap_or_default();
                    s.push('\t');
                    s.push_str(&lens);
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = h
                .degrees
                .iter()
                .map(|(d, e)| {
                    json!({
                        "degree": d,
                        "dim": e.dim,
                        "reliable": e.reliable,
                        "reps": e.reps,
                        "by_length": e.by_length,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "module": args.module,
                    "q": args.q,
                    "degrees": rows,
                }))
                .unwrap()
            )
        }
        Format::Text => {
            let mut s = format!("Margolis homology of {} under Q{}\n", args.module, args.q);
            for (d, e) in &h.degrees {
                if e.dim > 0 {
                    let flag = if e.reliable { "" } else { " (window edge)" };
                    s.push_str(&format!("  degree {d}: dim {}{flag}\n", e.dim));
                    for rep in &e.reps {
                        s.push_str(&format!("    {rep}\n"));
                    }
                }
            }
            s
        }
    };
    emit(&args.out, &content)
}

fn cmd_ext(args: &ExtArgs) -> i32 {
    let module = match resolve_module(&args.module, args.max_degree, Ring::E2) {
        Ok(m) => m.suspend(args.suspend),
        Err(SelectorError::Unknown(s)) => {
            eprintln!("error: unknown module selector '{s}'");
            return EXIT_BAD_SELECTOR;
        }
        Err(SelectorError::MissingWindow(s)) => {
            eprintln!("error: module '{s}' needs --max-degree");
            return EXIT_WINDOW;
        }
    };
    let ring: Ring = args.ring.into();
    let t_max = args.max_t.unwrap_or_else(|| {
        if module.complete {
            module.max_degree().unwrap_or(0) + 7 * (args.max_s as i64 + 1)
        } else {
            module.window
        }
    });
    let chart = match ext_chart(&module, ring, args.max_s, t_max) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_WINDOW;
        }
    };
    if let Some(check) = &args.check {
        match check.as_str() {
            "even-concentration" => {
                let bad: Vec<(u32, i64)> = chart
                    .cells
                    .iter()
                    .filter(|(&(s, t), c)| c.dim > 0 && (t - s as i64) % 2 != 0)
                    .map(|(&k, _)| k)
                    .collect();
                if !bad.is_empty() {
                    eprintln!("check failed: odd-stem classes at {bad:?}");
                    return EXIT_VERIFY_FAILED;
                }
                println!("check even-concentration: pass");
            }
            other => {
                eprintln!("error: unknown check '{other}'");
                return EXIT_BAD_SELECTOR;
            }
        }
    }
    if let Some(path) = &args.svg {
        let svg = render_chart_svg(&chart, &format!("Ext chart of {}", args.module));
        if let Err(e) = fs::write(path, svg) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_WINDOW;
        }
    }
    let mut doc = chart.to_json();
    if args.localized {
        let ranks = v0_localize(&chart);
        if let Some((n, _)) = ranks.iter().find(|(_, sr)| !sr.stabilized) {
            eprintln!("error: v0 localization not stabilized at stem {n}; enlarge the window");
            return EXIT_WINDOW;
        }
        doc["localized_ranks"] = json!(ranks
            .iter()
            .map(|(n, sr)| json!({"stem": n, "rank": sr.rank}))
            .collect::<Vec<_>>());
    }
    let content = match args.format {
        Format::Json | Format::Tsv => format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
        Format::Text => {
            let mut s = format!("Ext chart of {} over {} (s <= {}, t <= {})\n",
                args.module, ring, args.max_s, t_max);
            for (&(cs, ct), cell) in &chart.cells {
                if cell.dim > 0 {
                    let labels = rep_labels(&chart, &module, cs, ct).join(" ; ");
                    s.push_str(&format!("  ({cs},{ct}) stem {}: dim {}  [{labels}]\n",
                        ct - cs as i64, cell.dim));
                }
            }
            if args.ring == RingArg::E2 {
                let report = v2_split(&chart);
                s.push_str(&format!(
                    "v2-torsion at {} bidegrees, {} undecided at the window edge\n",
                    report.torsion.len(),
                    report.undecided.len()
                ));
            }
            s
        }
    };
    emit(&args.out, &content)
}

fn cmd_table(args: &TableArgs) -> i32 {
    if args.j < 0 {
        eprintln!("error: j must be nonnegative");
        return EXIT_BAD_SELECTOR;
    }
    let table = inductive_table(args.j);
    if let Some(path) = &args.svg {
        if let Err(e) = fs::write(path, render_table_svg(&table)) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_WINDOW;
        }
    }
    let content = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&table.to_json()).unwrap()),
        _ => table.render_text(),
    };
    emit(&args.out, &content)
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let Some(reports) = run_suite(
        &args.suite,
        args.j_max,
        args.max_s,
        args.max_t,
        args.max_degree.min(48),
    ) else {
        eprintln!("error: unknown suite '{}'", args.suite);
        return EXIT_BAD_SELECTOR;
    };
    let mut all_passed = true;
    for r in &reports {
        println!("{}", r.summary_line());
        for f in &r.failures {
            println!("    counterexample: {f}");
        }
        all_passed &= r.passed;
    }
    if let Some(path) = &args.out {
        let doc = json!({
            "suite": args.suite,
            "passed": all_passed,
            "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        });
        if let Err(e) = fs::write(path, format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_WINDOW;
        }
    }
    if all_passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

/// Entry point shared by the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Ok(threads) = std::env::var("COOPALG_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match &cli.command {
        Command::Margolis(args) => cmd_margolis(args),
        Command::Ext(args) => cmd_ext(args),
        Command::Table(args) => cmd_table(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors_resolve() {
        assert!(resolve_module("trivial", None, Ring::E2).is_ok());
        assert!(resolve_module("bu:3", None, Ring::E2).is_ok());
        assert!(resolve_module("HZ:2", None, Ring::E1).is_ok());
        assert!(resolve_module("m2:4", None, Ring::E2).is_ok());
        assert!(resolve_module("ambient:2", Some(20), Ring::E2).is_ok());
        assert!(matches!(
            resolve_module("ambient:2", None, Ring::E2),
            Err(SelectorError::MissingWindow(_))
        ));
        assert!(matches!(
            resolve_module("nonsense", None, Ring::E2),
            Err(SelectorError::Unknown(_))
        ));
    }

    #[test]
    fn margolis_command_runs() {
        let args = MargolisArgs {
            module: "m2:4".into(),
            q: 0,
            max_degree: None,
            lengths: true,
            format: Format::Tsv,
            out: None,
        };
        assert_eq!(cmd_margolis(&args), EXIT_OK);
    }

    #[test]
    fn ext_command_even_concentration() {
        let args = ExtArgs {
            module: "q".into(),
            ring: RingArg::E2,
            suspend: 0,
            max_s: 6,
            max_t: Some(24),
            max_degree: Some(24),
            svg: None,
            localized: false,
            check: Some("even-concentration".into()),
            format: Format::Json,
            out: Some(std::env::temp_dir().join("coopalg_test_chart.json")),
        };
        assert_eq!(cmd_ext(&args), EXIT_OK);
    }

    #[test]
    fn table_command_runs() {
        let args = TableArgs {
            j: 4,
            format: Format::Text,
            svg: Some(std::env::temp_dir().join("coopalg_test_table.svg")),
            out: Some(std::env::temp_dir().join("coopalg_test_table.txt")),
        };
        assert_eq!(cmd_table(&args), EXIT_OK);
        let text = fs::read_to_string(std::env::temp_dir().join("coopalg_test_table.txt")).unwrap();
        assert!(text.contains("Sigma^16 bu_4"));
    }

    #[test]
    fn verify_unknown_suite_is_selector_error() {
        let args = VerifyArgs {
            suite: "nope".into(),
            j_max: 2,
            max_s: 6,
            max_t: 20,
            max_degree: 20,
            out: None,
        };
        assert_eq!(cmd_verify(&args), EXIT_BAD_SELECTOR);
    }

    #[test]
    fn verify_tables_suite_passes() {
        let args = VerifyArgs {
            suite: "tables".into(),
            j_max: 7,
            max_s: 6,
            max_t: 20,
            max_degree: 20,
            out: Some(std::env::temp_dir().join("coopalg_verify_tables.json")),
        };
        assert_eq!(cmd_verify(&args), EXIT_OK);
        let doc: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(std::env::temp_dir().join("coopalg_verify_tables.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(doc["passed"], serde_json::Value::Bool(true));
    }
}
