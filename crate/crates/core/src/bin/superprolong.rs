//! Command-line front end: `run`, `verify`, `export`, `table`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use superprolong::ag2lab::{
    check_golden, experiment_bj, experiment_bj_partial, parse_golden, Experiment, ExperimentOptions, GoldenStatus,
    LabReport, Route, Variant, GOLDEN_TABLES,
};
use superprolong::checks::run_properties;
use superprolong::prolong::MaxDegree;
use superprolong::sc::ScTable;

#[derive(Parser)]
#[command(name = "superprolong", version, about = "Prolongs of ag(2) in k(1;N|7) over GF(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report.
    Run {
        #[command(flatten)]
        config: RunConfig,
        /// Report path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the structure constants (sc-v1).
        #[arg(long)]
        export: Option<PathBuf>,
        /// Include wall times in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Compare against the embedded tables or run the property suites.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Heights to check; 1 and 2 when omitted.
        #[arg(long = "N")]
        height: Vec<u32>,
        /// Allow N = 3.
        #[arg(long)]
        slow: bool,
        /// Golden table file to use instead of the embedded one.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Write structure constants in sc-v1.
    Export {
        #[command(flatten)]
        config: RunConfig,
        #[arg(long)]
        output: PathBuf,
        /// Export only the negative part.
        #[arg(long)]
        negative_only: bool,
        /// Re-export an existing sc-v1 file after checking it.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Pretty-print a report written by `run`.
    Table { report: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    PaperTables,
    Properties,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    Full,
    PartialPrime,
    PartialDoublePrime,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RouteArg {
    FullG0,
    TildeG0,
}

#[derive(Args, Clone, Serialize)]
struct RunConfig {
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long = "N", default_value_t = 1)]
    #[serde(rename = "N")]
    height: u32,
    /// Cartan matrix of ag(2); only matrix 1 is prolonged.
    #[arg(long, default_value_t = 1)]
    matrix: u8,
    /// Grading r; only 1,0,0 is supported.
    #[arg(long, default_value = "1,0,0")]
    grading: String,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    mode: Mode,
    /// Defaults to tilde-g0 at p = 3 and full-g0 otherwise.
    #[arg(long, value_enum)]
    route: Option<RouteArg>,
    /// `auto` or a degree.
    #[arg(long, default_value = "auto")]
    max_degree: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip module decomposition.
    #[arg(long)]
    no_decompose: bool,
    /// Allow N = 3.
    #[arg(long)]
    #[serde(skip)]
    slow: bool,
}

enum Failure {
    Usage(String),
    Engine(String),
}

impl From<superprolong::Error> for Failure {
    fn from(e: superprolong::Error) -> Self {
        Failure::Engine(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Engine(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

struct Job {
    route: Option<Route>,
    variant: Option<Variant>,
    options: ExperimentOptions,
}

impl RunConfig {
    /// Validates the combination before anything is computed.
    fn job(&self) -> Outcome<Job> {
        let usage = |m: String| Err(Failure::Usage(m));
        if ![3, 5, 7].contains(&self.p) {
            return usage(format!("--p must be 3, 5 or 7, got {}", self.p));
        }
        if !(1..=3).contains(&self.height) {
            return usage(format!("--N must be 1, 2 or 3, got {}", self.height));
        }
        if self.height == 3 && !self.slow {
            return usage("N = 3 takes minutes; pass --slow".into());
        }
        if self.matrix != 1 {
            return usage(format!("only Cartan matrix 1 is prolonged, got {}", self.matrix));
        }
        let r: Vec<&str> = self.grading.split(',').map(str::trim).collect();
        if r != ["1", "0", "0"] {
            return usage(format!("only the grading 1,0,0 is supported, got {}", self.grading));
        }
        let max_degree = match self.max_degree.as_str() {
            "auto" => MaxDegree::Auto,
            k => MaxDegree::Explicit(
                k.parse()
                    .map_err(|_| Failure::Usage(format!("--max-degree must be auto or an integer, got {k}")))?,
            ),
        };
        let options = ExperimentOptions {
            decompose: !self.no_decompose,
            seed: self.seed,
            max_degree,
            ..ExperimentOptions::default()
        };
        match self.mode {
            Mode::Full => {
                let route = match self.route {
                    Some(RouteArg::FullG0) => Route::FullG0,
                    Some(RouteArg::TildeG0) => Route::TildeG0,
                    None if self.p == 3 => Route::TildeG0,
                    None => Route::FullG0,
                };
                if route == Route::TildeG0 && self.p != 3 {
                    return usage("the tilde-g0 route needs --p 3".into());
                }
                Ok(Job {
                    route: Some(route),
                    variant: None,
                    options,
                })
            }
            Mode::PartialPrime | Mode::PartialDoublePrime => {
                if self.p != 3 {
                    return usage("partial prolongs need --p 3".into());
                }
                if self.route.is_some() {
                    return usage("--route applies to --mode full only".into());
                }
                let variant = if self.mode == Mode::PartialPrime {
                    Variant::Prime
                } else {
                    Variant::DoublePrime
                };
                Ok(Job {
                    route: None,
                    variant: Some(variant),
                    options,
                })
            }
        }
    }

    fn algebra_name(&self) -> String {
        match (self.mode, self.p) {
            (Mode::Full, 3) => format!("Bj(1;{}|7)", self.height),
            (Mode::Full, _) => "ag(2)".into(),
            (Mode::PartialPrime, _) => "partial-prime".into(),
            (Mode::PartialDoublePrime, _) => "bj".into(),
        }
    }
}

fn execute(config: &RunConfig) -> Outcome<Experiment> {
    let job = config.job()?;
    Ok(match (job.route, job.variant) {
        (Some(route), _) => experiment_bj(config.p, config.height, route, &job.options)?,
        (None, Some(variant)) => experiment_bj_partial(variant, config.height, &job.options)?,
        (None, None) => unreachable!("job has a route or a variant"),
    })
}

#[derive(Serialize)]
struct ReportFile<'a> {
    format: &'static str,
    config: &'a RunConfig,
    algebra: String,
    report: &'a LabReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

#[derive(Serialize)]
struct Timings {
    seconds: f64,
}

fn write_or_print(path: Option<&Path>, text: &str) -> Outcome<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_run(config: &RunConfig, output: Option<&Path>, export: Option<&Path>, timings: bool) -> Outcome<()> {
    let e = execute(config)?;
    let file = ReportFile {
        format: "superprolong-report-v1",
        config,
        algebra: config.algebra_name(),
        report: &e.report,
        timings: timings.then_some(Timings {
            seconds: e.report.seconds,
        }),
    };
    let mut text = serde_json::to_string_pretty(&file).map_err(|e| Failure::Engine(e.to_string()))?;
    text.push('\n');
    write_or_print(output, &text)?;
    if let Some(path) = export {
        let t = ScTable::from_algebra(&e.algebra, config.height, &config.algebra_name())?;
        fs::write(path, t.to_text())?;
    }
    eprintln!(
        "{}: total {}, simple {}, {:.2}s",
        config.algebra_name(),
        e.report.total,
        e.report.simple(),
        e.report.seconds
    );
    Ok(())
}

fn cmd_verify(suite: Suite, heights: &[u32], slow: bool, golden: Option<&Path>, seed: u64, samples: usize) -> Outcome<bool> {
    match suite {
        Suite::Properties => {
            let results = run_properties(seed, samples)?;
            for r in &results {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                println!("{mark}  {:<22} {:>6} cases  {}", r.name, r.cases, r.detail);
            }
            Ok(results.iter().all(|r| r.passed))
        }
        Suite::PaperTables => {
            let text = match golden {
                Some(p) => fs::read_to_string(p)
                    .map_err(|e| Failure::Engine(format!("golden file {}: {e}", p.display())))?,
                None => GOLDEN_TABLES.to_string(),
            };
            let rows = parse_golden(&text)?;
            let heights = if heights.is_empty() { vec![1, 2] } else { heights.to_vec() };
            if heights.contains(&3) && !slow {
                return Err(Failure::Usage("N = 3 takes minutes; pass --slow".into()));
            }
            let mut ok = true;
            for n in heights {
                let mine: Vec<_> = rows.iter().filter(|r| r.height == n).cloned().collect();
                if mine.is_empty() {
                    continue;
                }
                let opts = ExperimentOptions {
                    decompose: false,
                    verify: false,
                    ..ExperimentOptions::default()
                };
                let e = experiment_bj(3, n, Route::TildeG0, &opts)?;
                for c in check_golden(&e.model, &e.algebra, &mine)? {
                    let mark = match c.status {
                        GoldenStatus::Match => "PASS",
                        GoldenStatus::Relaxed => "WARN",
                        GoldenStatus::Mismatch => {
                            ok = false;
                            "FAIL"
                        }
                    };
                    println!("{mark}  N={n} degree {:>2} {:<12}", c.row.degree, c.row.variant.name());
                    if let Some(d) = c.difference {
                        println!("      printed minus computed: {d}");
                    }
                }
            }
            Ok(ok)
        }
    }
}

fn cmd_export(config: &RunConfig, output: &Path, negative_only: bool, input: Option<&Path>) -> Outcome<()> {
    let table = match input {
        Some(path) => {
            let t = ScTable::parse(&fs::read_to_string(path)?)?;
            t.verify()?;
            t
        }
        None => {
            let e = execute(config)?;
            if negative_only {
                ScTable::from_algebra(&e.algebra.restrict(..0), config.height, "negative")?
            } else {
                ScTable::from_algebra(&e.algebra, config.height, &config.algebra_name())?
            }
        }
    };
    fs::write(output, table.to_text())?;
    Ok(())
}

fn cmd_table(path: &Path) -> Outcome<()> {
    let text = fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Engine(format!("{}: {e}", path.display())))?;
    let report = &v["report"];
    println!(
        "{}  p={} N={} mode={}",
        v["algebra"].as_str().unwrap_or("?"),
        report["p"],
        report["height"],
        report["mode"].as_str().unwrap_or("?")
    );
    println!("{:>6}  {:>7}  lowest weight vectors", "degree", "sdim");
    for d in report["degrees"].as_array().into_iter().flatten() {
        let summands: Vec<String> = d["summands"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|s| format!("[{}] {}", s["dim"], s["lowest"].as_str().unwrap_or("")))
            .collect();
        println!(
            "{:>6}  {:>7}  {}",
            d["degree"].as_i64().unwrap_or(0),
            d["sdim"].as_str().unwrap_or("?"),
            summands.join("; ")
        );
    }
    println!("total {}", report["total"].as_str().unwrap_or("?"));
    let s = &report["simplicity"];
    for c in s["criterion"]["clauses"].as_array().into_iter().flatten() {
        let mark = if c["holds"].as_bool() == Some(true) { "yes" } else { "no" };
        println!("  {:<20} {mark}  {}", c["name"].as_str().unwrap_or(""), c["detail"].as_str().unwrap_or(""));
    }
    println!("criterion simple: {}", s["criterion"]["simple"]);
    println!("brute force simple: {}", s["bruteforce"]);
    if let Some(split) = report.get("even_split").filter(|v| !v.is_null()) {
        println!("even part ideals: {}", split["ideals"]);
    }
    if let Some(t) = v.get("timings") {
        println!("seconds: {}", t["seconds"]);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            config,
            output,
            export,
            timings,
        } => cmd_run(config, output.as_deref(), export.as_deref(), *timings).map(|_| true),
        Command::Verify {
            suite,
            height,
            slow,
            golden,
            seed,
            samples,
        } => cmd_verify(*suite, height, *slow, golden.as_deref(), *seed, *samples),
        Command::Export {
            config,
            output,
            negative_only,
            input,
        } => cmd_export(config, output, *negative_only, input.as_deref()).map(|_| true),
        Command::Table { report } => cmd_table(report).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(m)) => {
            eprintln!("error: {m}");
            ExitCode::FAILURE
        }
    }
}
