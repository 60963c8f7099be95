//! `nlbox`: generate, sweep and check behavior boxes from the command line.
//!
//! Exit codes: 0 success, 1 internal error or failed verification, 2 usage
//! or out-of-range input.

mod parse;

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use nlbox::analysis::{
    isotropy_residual, sweep_angle, sweep_n, SweepMode, DEFAULT_NO_SIGNALING_TOL,
};
use nlbox::io::{to_json, write_csv};
use nlbox::{
    bell_closed_form, born_oracle, chsh_observables_box, chsh_value, isotropy_check,
    joint_distribution, mc_sampler, no_signaling_report, pr_distance, solve_power_for_chsh,
    BehaviorBoxF64, Error, MeasurementConfigF64, ProbabilityRuleF64, TwoQubitStateF64,
};
use serde_json::json;

const ISOTROPY_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-10;
const MAX_Z: f64 = 4.0;

#[derive(Parser)]
#[command(
    name = "nlbox",
    version,
    about = "Behavior boxes from entangled qubits under a power-law outcome rule"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one box and print it with its analysis summary.
    #[command(group(ArgGroup::new("state").required(true).args(["bell", "alpha2", "chsh_observables"])))]
    Generate {
        /// Shared state (|↑↓⟩ + |↓↑⟩)/√2.
        #[arg(long)]
        bell: bool,
        /// Shared state √w|↑↓⟩ + √(1−w)|↓↑⟩ with w = ALPHA2.
        #[arg(long, value_name = "ALPHA2")]
        alpha2: Option<f64>,
        /// Bell state measured with the fixed CHSH observables.
        #[arg(long, conflicts_with_all = ["theta", "theta_tilde"])]
        chsh_observables: bool,
        /// Alice's tilted axis, radians or a multiple of pi.
        #[arg(long, allow_hyphen_values = true, value_parser = parse::angle,
              required_unless_present = "chsh_observables")]
        theta: Option<f64>,
        /// Bob's tilted axis, radians or a multiple of pi.
        #[arg(long, allow_hyphen_values = true, value_parser = parse::angle,
              required_unless_present = "chsh_observables")]
        theta_tilde: Option<f64>,
        /// Power of Bob's outcome rule, or `inf`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse::rule)]
        n: ProbabilityRuleF64,
        /// Emit the box as CSV (summary goes to stderr).
        #[arg(long)]
        csv: bool,
        /// Write the output to PATH instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// CHSH value against the power n. CSV header `n,chsh`.
    SweepN {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::angle, default_value = "pi/4")]
        theta: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse::angle, default_value = "11pi/8")]
        theta_tilde: f64,
        /// Comma list (`inf` allowed) or `start:stop:count`.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        n_grid: String,
        #[arg(long, value_enum, default_value_t = Mode::Bell)]
        mode: Mode,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// CHSH value of the Bell box against Bob's angle. CSV header `theta_tilde,chsh`.
    SweepAngle {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::angle)]
        theta: f64,
        /// Comma list of angles or `start:stop:count`.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        theta_tilde_grid: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse::rule)]
        n: ProbabilityRuleF64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Power at which the CHSH-observable box reaches a target value.
    Solve {
        /// A number in (0, 4), `tsirelson` or `trivial-cc`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse::target)]
        target: f64,
    },
    /// Cross-check the generator against the Born oracle and the sampler.
    Verify {
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Scenario::BellBorn)]
        scenario: Scenario,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Bell,
    ChshObservables,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    /// Bell state, (π/4, 11π/8), n = 2.
    BellBorn,
    /// Bell state, (π/4, 11π/8), n = 4.
    BellModified,
    /// |α|² = 0.8, (π/2, 3π/2), n = 4.
    Signaling,
}

enum Failure {
    Usage(String),
    Internal(String),
    /// Verification ran but a check failed; the report is already printed.
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfRange(_)
            | Error::NonFinite(_)
            | Error::InvalidPower(_)
            | Error::DegenerateAmplitudes
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                Failure::Internal(format!("{}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn summary(bx: &BehaviorBoxF64) -> serde_json::Value {
    let ns = no_signaling_report(bx, DEFAULT_NO_SIGNALING_TOL);
    json!({
        "status": if ns.passed { "NO-SIGNALING" } else { "SIGNALING" },
        "no_signaling": ns,
        "chsh": chsh_value(bx),
        "isotropic": isotropy_check(bx, ISOTROPY_TOL),
        "isotropy_residual": isotropy_residual(bx),
        "pr_distance": pr_distance(bx),
    })
}

#[allow(clippy::too_many_arguments)]
fn generate(
    bell: bool,
    alpha2: Option<f64>,
    observables: bool,
    theta: Option<f64>,
    theta_tilde: Option<f64>,
    rule: ProbabilityRuleF64,
    csv: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let bx = if observables {
        chsh_observables_box(&rule)
    } else {
        let cfg = MeasurementConfigF64::new(
            theta.expect("required by clap"),
            theta_tilde.expect("required by clap"),
        )?;
        match (bell, alpha2) {
            (true, _) => bell_closed_form(cfg.theta(), cfg.theta_tilde(), &rule),
            (_, Some(w)) => joint_distribution(&TwoQubitStateF64::from_weight(w)?, &cfg, &rule)?,
            _ => return Err(Failure::Usage("one of --bell, --alpha2 is required".into())),
        }
    };
    let mut summary = summary(&bx);
    summary["n"] = json!(rule.to_string());
    let mut w = output(&out)?;
    if csv {
        write_csv(&bx, &mut w)?;
        eprintln!("{summary}");
    } else {
        summary["box"] = serde_json::from_str(&to_json(&bx)?).expect("box JSON is valid");
        let text =
            serde_json::to_string_pretty(&summary).map_err(|e| Failure::Internal(e.to_string()))?;
        writeln!(w, "{text}")?;
    }
    w.flush()?;
    Ok(())
}

fn sweep_n_cmd(
    theta: f64,
    theta_tilde: f64,
    grid: &str,
    mode: Mode,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let grid = parse::rule_grid(grid).map_err(Failure::Usage)?;
    let mode = match mode {
        Mode::Bell => SweepMode::Bell,
        Mode::ChshObservables => SweepMode::ChshObservables,
    };
    let rows = sweep_n(theta, theta_tilde, &grid, mode);
    let mut w = output(&out)?;
    writeln!(w, "n,chsh")?;
    for (rule, v) in rows {
        writeln!(w, "{rule},{v}")?;
    }
    w.flush()?;
    Ok(())
}

fn sweep_angle_cmd(
    theta: f64,
    grid: &str,
    rule: ProbabilityRuleF64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let grid = parse::angle_grid(grid).map_err(Failure::Usage)?;
    let mut w = output(&out)?;
    writeln!(w, "theta_tilde,chsh")?;
    for (tt, v) in sweep_angle(theta, &grid, &rule) {
        writeln!(w, "{tt},{v}")?;
    }
    w.flush()?;
    Ok(())
}

fn verify(shots: u64, seed: u64, scenario: Scenario) -> Result<(), Failure> {
    let (state, theta, theta_tilde, n) = match scenario {
        Scenario::BellBorn => (TwoQubitStateF64::bell(), PI / 4.0, 11.0 * PI / 8.0, 2.0),
        Scenario::BellModified => (TwoQubitStateF64::bell(), PI / 4.0, 11.0 * PI / 8.0, 4.0),
        Scenario::Signaling => (
            TwoQubitStateF64::from_weight(0.8)?,
            PI / 2.0,
            3.0 * PI / 2.0,
            4.0,
        ),
    };
    let cfg = MeasurementConfigF64::new(theta, theta_tilde)?;
    let rule = ProbabilityRuleF64::Power(n);
    let mut passed = true;

    let born = joint_distribution(&state, &cfg, &ProbabilityRuleF64::born())?;
    let born_dev = born.max_abs_diff(&born_oracle(&state, &cfg)?);
    let ok = born_dev < ORACLE_TOL;
    passed &= ok;
    println!(
        "born oracle vs generator (n=2): max deviation {born_dev:e} [{}]",
        verdict(ok)
    );

    let reference = joint_distribution(&state, &cfg, &rule)?;
    if matches!(scenario, Scenario::BellBorn | Scenario::BellModified) {
        let dev = reference.max_abs_diff(&bell_closed_form(theta, theta_tilde, &rule));
        let ok = dev < ORACLE_TOL;
        passed &= ok;
        println!(
            "closed form vs generator (n={n}): max deviation {dev:e} [{}]",
            verdict(ok)
        );
    }

    let sampled = mc_sampler(&state, &cfg, &rule, shots, seed)?;
    let z = sampled.max_z_score(&reference);
    let ok = z <= MAX_Z;
    passed &= ok;
    println!(
        "sampler vs generator (n={n}, shots={shots}, seed={seed}): max z {z:.3} [{}]",
        verdict(ok)
    );

    let ns = no_signaling_report(&reference, DEFAULT_NO_SIGNALING_TOL);
    println!(
        "no-signaling (informational): max violation {:e} [{}]",
        ns.max_violation(),
        if ns.passed {
            "NO-SIGNALING"
        } else {
            "SIGNALING"
        }
    );
    println!("{}", verdict(passed));
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate {
            bell,
            alpha2,
            chsh_observables,
            theta,
            theta_tilde,
            n,
            csv,
            out,
        } => generate(
            bell,
            alpha2,
            chsh_observables,
            theta,
            theta_tilde,
            n,
            csv,
            out,
        ),
        Command::SweepN {
            theta,
            theta_tilde,
            n_grid,
            mode,
            out,
        } => sweep_n_cmd(theta, theta_tilde, &n_grid, mode, out),
        Command::SweepAngle {
            theta,
            theta_tilde_grid,
            n,
            out,
        } => sweep_angle_cmd(theta, &theta_tilde_grid, n, out),
        Command::Solve { target } => {
            let n = solve_power_for_chsh(target)?;
            println!("{n}");
            Ok(())
        }
        Command::Verify {
            shots,
            seed,
            scenario,
        } => verify(shots, seed, scenario),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}
