use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use whframe::catalog::Builtin;
use whframe::conditions::CheckSettings;
use whframe::ConditionId;
use whframe_cli::{emit, run, AnalysisReport, AnalysisRequest, Format, OracleSizes, RunError, WindowSource};

#[derive(Parser, Debug)]
#[command(name = "whframe", version, about = "Frame checks for Gabor and wavelet systems with piecewise windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a list of checks (all by default), optionally with oracle cross-checks
    Analyze {
        #[command(flatten)]
        window: WindowArgs,
        /// Comma separated condition ids, `ALL`, or `none`
        #[arg(long, default_value = "ALL")]
        checks: String,
        /// Also run the brute-force oracle
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run one check; an unmet precondition exits with status 3
    Check {
        /// Condition id, e.g. THM21 or PROP23
        id: ConditionId,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run only the oracle
    Oracle {
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reproduce a built-in example (or `all`) with every check and the oracle
    Demo {
        /// box, example-thm21, example-epsilon, example-orthonormal, shannon-spectral or all
        name: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in window name
    #[arg(long)]
    builtin: Option<String>,
    /// Window spec file (JSON)
    #[arg(long)]
    window: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WindowArgs {
    #[command(flatten)]
    source: Source,
    /// Translation step
    #[arg(long)]
    a: Option<f64>,
    /// Modulation step
    #[arg(long)]
    b: Option<f64>,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long, default_value_t = whframe::periodization::DEFAULT_RESOLUTION)]
    resolution: usize,
    #[arg(long, default_value_t = whframe::periodization::DEFAULT_TOL_ZERO)]
    tol_zero: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random span elements drawn by the ratio probe
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Upper bound tested by PROP24 (defaults to a computed bound)
    #[arg(long)]
    claimed_b: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Text,
    Structured,
}

fn parse_checks(text: &str) -> Result<Vec<ConditionId>, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("all") {
        return Ok(ConditionId::ALL.to_vec());
    }
    if t.is_empty() || t.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    t.split(',').map(|s| s.trim().parse::<ConditionId>().map_err(|e| e.to_string())).collect()
}

fn builtin(name: &str) -> Result<Builtin, String> {
    Builtin::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = Builtin::ALL.iter().map(|b| b.name()).collect();
        format!("unknown built-in `{name}` (known: {})", known.join(", "))
    })
}

fn request(window: &WindowArgs, common: &CommonArgs) -> Result<AnalysisRequest, String> {
    let source = match (&window.source.builtin, &window.source.window) {
        (Some(name), _) => WindowSource::Builtin(builtin(name)?),
        (None, Some(path)) => WindowSource::File(path.clone()),
        (None, None) => return Err("one of --builtin or --window is required".into()),
    };
    let lattice = match (window.a, window.b, &source) {
        (None, None, _) => None,
        (a, b, WindowSource::Builtin(bi)) => {
            let d = bi.default_lattice();
            Some((a.unwrap_or(d.a()), b.unwrap_or(d.b())))
        }
        (a, b, WindowSource::File(_)) => Some((a.unwrap_or(1.0), b.unwrap_or(1.0))),
    };
    Ok(AnalysisRequest {
        window_source: source,
        lattice,
        checks: Vec::new(),
        explicit: false,
        oracle: false,
        settings: settings(common),
        seed: common.seed,
        sizes: OracleSizes { trials: common.trials, ..OracleSizes::default() },
        claimed_b: common.claimed_b,
    })
}

fn settings(common: &CommonArgs) -> CheckSettings {
    CheckSettings { resolution: common.resolution, tol_zero: common.tol_zero, ..CheckSettings::default() }
}

fn format(common: &CommonArgs) -> Format {
    match common.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    }
}

/// Splits a run result into the report to print (if any) and the exit status.
fn settle(result: Result<AnalysisReport, RunError>, err: &mut impl Write) -> (Option<AnalysisReport>, u8) {
    match result {
        Ok(report) => (Some(report), 0),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let code = e.exit_code() as u8;
            match e {
                RunError::Precondition { report, .. } => (report.map(|r| *r), code),
                _ => (None, code),
            }
        }
    }
}

fn finish(result: Result<AnalysisReport, RunError>, fmt: Format, out: &mut impl Write, err: &mut impl Write) -> u8 {
    let (report, code) = settle(result, err);
    if let Some(report) = report {
        let _ = out.write_all(emit(&report, fmt).as_bytes());
    }
    code
}

fn usage(err: &mut impl Write, msg: String) -> u8 {
    let _ = writeln!(err, "error: {msg}");
    2
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit status.
fn run_cli<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return e.exit_code() as u8;
        }
    };
    match cli.command {
        Command::Analyze { window, checks, oracle, common } => {
            let mut req = match request(&window, &common) {
                Ok(r) => r,
                Err(e) => return usage(err, e),
            };
            req.checks = match parse_checks(&checks) {
                Ok(c) => c,
                Err(e) => return usage(err, e),
            };
            req.oracle = oracle;
            finish(run(&req), format(&common), out, err)
        }
        Command::Check { id, window, oracle, common } => {
            let mut req = match request(&window, &common) {
                Ok(r) => r,
                Err(e) => return usage(err, e),
            };
            req.checks = vec![id];
            req.explicit = true;
            req.oracle = oracle;
            finish(run(&req), format(&common), out, err)
        }
        Command::Oracle { window, common } => {
            let mut req = match request(&window, &common) {
                Ok(r) => r,
                Err(e) => return usage(err, e),
            };
            req.oracle = true;
            finish(run(&req), format(&common), out, err)
        }
        Command::Demo { name, common } => {
            let names: Vec<Builtin> = if name.eq_ignore_ascii_case("all") {
                Builtin::ALL.to_vec()
            } else {
                match builtin(&name) {
                    Ok(b) => vec![b],
                    Err(e) => return usage(err, e),
                }
            };
            let fmt = format(&common);
            let mut worst = 0;
            let mut reports = Vec::new();
            for (i, b) in names.into_iter().enumerate() {
                let req = AnalysisRequest {
                    oracle: true,
                    settings: settings(&common),
                    seed: common.seed,
                    sizes: OracleSizes { trials: common.trials, ..OracleSizes::default() },
                    claimed_b: common.claimed_b,
                    ..AnalysisRequest::builtin(b)
                };
                let (report, code) = settle(run(&req), err);
                worst = worst.max(code);
                let Some(report) = report else { continue };
                if fmt == Format::Text {
                    if i > 0 {
                        let _ = writeln!(out, "\n{}", "-".repeat(72));
                    }
                    let _ = out.write_all(emit(&report, fmt).as_bytes());
                } else {
                    reports.push(report);
                }
            }
            if fmt == Format::Structured {
                // one document: a single report, or an array for `all`
                let text = if reports.len() == 1 {
                    serde_json::to_string_pretty(&reports[0])
                } else {
                    serde_json::to_string_pretty(&reports)
                };
                let _ = writeln!(out, "{}", text.expect("reports serialize"));
            }
            worst
        }
    }
}

fn main() -> ExitCode {
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    ExitCode::from(run_cli(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock()))
}
