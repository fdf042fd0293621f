//! `rabi` — ground-state solvers for the quantum Rabi model.
//!
//! Subcommands:
//! * `ground` — single-point evaluation by any or all methods;
//! * `sweep`  — custom parameter sweep to CSV/JSON;
//! * `figure` — preset sweeps reproducing the published comparison
//!   figures (`figure_<id>.csv`);
//! * `check`  — the invariant self-check suite.
//!
//! Parameters are in units of ω unless `--absolute` is given (the
//! figures are all expressed in units of ω). Exit codes: 0 success,
//! 1 invalid parameters, 2 exact-solver non-convergence (or failed
//! checks).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rabi_core::checks::{self, CheckConfig};
use rabi_core::harness::{self, Axis, EmitFormat, Method, Observable, SweepSpec};
use rabi_core::{exact, grwa, gvm, ModelParams, TruncationConfig};

#[derive(Parser)]
#[command(name = "rabi", version, about = "Quantum Rabi model ground-state solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the ground state at a single parameter point.
    Ground(GroundArgs),
    /// Run a custom parameter sweep and emit a comparison table.
    Sweep(SweepArgs),
    /// Run a preset sweep reproducing one of the comparison figures.
    Figure(FigureArgs),
    /// Run the invariant self-check suite.
    Check(CheckArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Photon frequency ω.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Atomic resonant frequency Ω (units of ω unless --absolute).
    #[arg(long = "Omega", default_value_t = 0.0)]
    omega_a: f64,
    /// Coupling strength g (units of ω unless --absolute).
    #[arg(long, default_value_t = 0.0)]
    g: f64,
    /// Interpret Ω and g as raw energies instead of multiples of ω.
    #[arg(long)]
    absolute: bool,
}

impl ParamArgs {
    fn params(&self) -> rabi_core::Result<ModelParams> {
        let scale = if self.absolute { 1.0 } else { self.omega };
        ModelParams::new(self.omega, self.omega_a * scale, self.g * scale)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Gvm,
    GvmClosed,
    Grwa,
    All,
}

#[derive(Args)]
struct GroundArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Method(s) to evaluate.
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Fock cutoff for the exact solver (env RABI_GVM_NMAX overrides
    /// the built-in default).
    #[arg(long)]
    nmax: Option<usize>,
    /// Root/eigensolver tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    Omega,
    G,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ObservableArg {
    Energy,
    MeanPhoton,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl FormatArg {
    fn emit(self) -> EmitFormat {
        match self {
            FormatArg::Csv => EmitFormat::Csv,
            FormatArg::Json => EmitFormat::Json,
        }
    }

    fn extension(self) -> &'static str {
        match self {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SweepMethodArg {
    Ns,
    GvmClosed,
    GvmFull,
    Grwa,
}

impl SweepMethodArg {
    fn method(self) -> Method {
        match self {
            SweepMethodArg::Ns => Method::Ns,
            SweepMethodArg::GvmClosed => Method::GvmClosed,
            SweepMethodArg::GvmFull => Method::GvmFull,
            SweepMethodArg::Grwa => Method::Grwa,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep axis.
    #[arg(long, value_enum)]
    axis: AxisArg,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long)]
    stop: f64,
    #[arg(long, default_value_t = 41)]
    count: usize,
    /// Value of the parameter held constant (g when sweeping Ω and
    /// vice versa), in units of ω.
    #[arg(long)]
    fixed: f64,
    /// Photon frequency ω.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = [SweepMethodArg::Ns, SweepMethodArg::GvmClosed, SweepMethodArg::Grwa])]
    methods: Vec<SweepMethodArg>,
    #[arg(long, value_enum, default_value_t = ObservableArg::Energy)]
    observable: ObservableArg,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure id: 1a, 1b, 2a, 2b, 3, 4, 4-inset.
    #[arg(long)]
    id: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output directory for figure_<id>.<ext> (default: current).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    nmax: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// Fock cutoff for the exact-solver checks.
    #[arg(long)]
    nmax: Option<usize>,
    /// Eigensolver tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Restrict the coupling grid to a single value (units of ω).
    #[arg(long)]
    g: Option<f64>,
    /// Restrict the atomic-frequency grid to a single value (units of ω).
    #[arg(long = "Omega")]
    omega_a: Option<f64>,
}

fn default_n_max(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var("RABI_GVM_NMAX")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(TruncationConfig::DEFAULT_N_MAX)
}

/// 10 significant digits for human-readable output.
fn fmt10(value: f64) -> String {
    format!("{value:.9e}")
}

fn cmd_ground(args: &GroundArgs) -> rabi_core::Result<ExitCode> {
    let params = args.params.params()?;
    let n_max = default_n_max(args.nmax);
    let cutoff = TruncationConfig::new(n_max, args.tol, 1e-10 * params.omega)?;
    let want = |m: MethodArg| args.method == m || args.method == MethodArg::All;
    let mut ns_unconverged = false;

    println!(
        "parameters: omega = {}, Omega = {}, g = {}",
        fmt10(params.omega),
        fmt10(params.omega_a),
        fmt10(params.g)
    );
    if want(MethodArg::Exact) {
        let result = exact::ground_state(&params, &cutoff)?;
        ns_unconverged = !result.converged;
        println!("exact (NS):");
        println!("  energy            = {}", fmt10(result.ground_energy));
        println!(
            "  mean photon       = {}",
            fmt10(exact::mean_photon_exact(&result))
        );
        println!(
            "  mean sigma_x      = {}",
            fmt10(exact::mean_sigma_x_exact(&result))
        );
        println!("  n_max used        = {}", result.n_max_used);
        println!("  converged         = {}", result.converged);
        println!("  energy delta      = {}", fmt10(result.energy_delta));
    }
    if want(MethodArg::Gvm) {
        let solution = gvm::solve(&params, args.tol, gvm::SERIES_TOL)?;
        println!("gvm (full series):");
        println!("  lambda            = {}", fmt10(solution.lambda));
        println!("  F(lambda)         = {}", fmt10(solution.f_lambda));
        println!("  E0 unperturbed    = {}", fmt10(solution.e0_unperturbed));
        println!("  E0 second order   = {}", fmt10(solution.e0_second));
        println!("  energy            = {}", fmt10(solution.energy));
        println!(
            "  mean photon       = {}",
            fmt10(gvm::mean_photon_full(&solution))
        );
        println!("  series terms      = {}", solution.series_terms_used);
    }
    if want(MethodArg::GvmClosed) {
        println!("gvm (closed form):");
        println!(
            "  lambda            = {}",
            fmt10(gvm::lambda_closed_form(&params))
        );
        println!(
            "  energy            = {}",
            fmt10(gvm::energy_closed_form(&params))
        );
        println!(
            "  mean photon       = {}",
            fmt10(gvm::mean_photon_closed(&params))
        );
        println!(
            "  mean photon (weak Omega) = {}",
            fmt10(gvm::mean_photon_weak_atom(&params))
        );
    }
    if want(MethodArg::Grwa) {
        let result = grwa::evaluate(&params);
        println!("grwa:");
        println!("  energy            = {}", fmt10(result.energy));
        println!("  mean photon       = {}", fmt10(result.mean_photon));
    }
    Ok(if ns_unconverged {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn emit_rows(
    rows: &[harness::ComparisonRow],
    format: FormatArg,
    out: Option<&PathBuf>,
) -> rabi_core::Result<()> {
    match out {
        Some(path) => harness::emit_to_path(rows, format.emit(), path),
        None => harness::emit(rows, format.emit(), std::io::stdout().lock()),
    }
}

fn cmd_sweep(args: &SweepArgs) -> rabi_core::Result<ExitCode> {
    let spec = SweepSpec {
        axis: match args.axis {
            AxisArg::Omega => Axis::Omega,
            AxisArg::G => Axis::G,
        },
        start: args.start * args.omega,
        stop: args.stop * args.omega,
        count: args.count,
        fixed: args.fixed * args.omega,
        methods: args.methods.iter().map(|m| m.method()).collect(),
        observable: match args.observable {
            ObservableArg::Energy => Observable::Energy,
            ObservableArg::MeanPhoton => Observable::MeanPhoton,
        },
        omega: args.omega,
    };
    let cutoff = TruncationConfig::with_n_max(default_n_max(args.nmax))?;
    let rows = harness::run_sweep(&spec, &cutoff)?;
    emit_rows(&rows, args.format, args.out.as_ref())?;
    let unconverged = rows.iter().any(|r| r.ns_converged == Some(false));
    Ok(if unconverged {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_figure(args: &FigureArgs) -> rabi_core::Result<ExitCode> {
    let spec = harness::figure_preset(&args.id)?;
    let cutoff = TruncationConfig::with_n_max(default_n_max(args.nmax))?;
    let rows = harness::run_sweep(&spec, &cutoff)?;
    let path = args
        .out
        .join(format!("figure_{}.{}", args.id, args.format.extension()));
    harness::emit_to_path(&rows, args.format.emit(), &path)?;
    let max_gvm = rows.iter().filter_map(|r| r.err_gvm).fold(0.0, f64::max);
    let max_grwa = rows.iter().filter_map(|r| r.err_grwa).fold(0.0, f64::max);
    println!("wrote {}", path.display());
    println!("max |err_gvm|  = {}", fmt10(max_gvm));
    println!("max |err_grwa| = {}", fmt10(max_grwa));
    let unconverged = rows.iter().any(|r| r.ns_converged == Some(false));
    Ok(if unconverged {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_check(args: &CheckArgs) -> rabi_core::Result<ExitCode> {
    let cfg = CheckConfig {
        n_max: default_n_max(args.nmax),
        eig_tol: args.tol,
        omega: 1.0,
        omega_a: args.omega_a,
        g: args.g,
    };
    let outcomes = checks::run_checks(&cfg);
    let mut all_passed = true;
    for outcome in &outcomes {
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        all_passed &= outcome.passed;
        println!("[{status}] {} ({})", outcome.name, outcome.detail);
    }
    println!(
        "{} of {} checks passed",
        outcomes.iter().filter(|o| o.passed).count(),
        outcomes.len()
    );
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ground(args) => cmd_ground(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Figure(args) => cmd_figure(args),
        Command::Check(args) => cmd_check(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
