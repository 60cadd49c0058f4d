//! Command-line front end: each subcommand runs one verification campaign
//! and emits a machine-readable report.
//!
//! Reports are pure functions of the command line: anything nondeterministic
//! (timestamps, timings, map iteration order) is kept out of the output, so
//! repeated invocations are byte-identical.  Exit code 0 means every check
//! in the campaign stayed within tolerance, 1 means some check failed, and
//! 2 is a usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use blochlab_core as core;
use blochlab_core::tol;

#[derive(Parser)]
#[command(
    name = "blochlab",
    version,
    about = "Verification laboratory for multi-qubit systems described by binary questions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the complementarity graph and census its maximal cliques.
    Cliques(CliquesArgs),
    /// Sample random states and audit pentagon and clique charges.
    Charges(ChargesArgs),
    /// Construct the pentagon-swap generators and check their algebra.
    Generators(GeneratorsArgs),
    /// Evolve a random pure state and trace its conserved charges.
    Evolve(EvolveArgs),
    /// Check the classical identity and search for hidden variables.
    Logic(LogicArgs),
    /// Run ensemble tomography with a convergence campaign.
    Tomography(TomographyArgs),
    /// Demonstrate monogamy on a maximally entangled pair plus bystander.
    Monogamy(MonogamyArgs),
    /// Run the full twelve-criterion acceptance suite.
    VerifyAll(VerifyAllArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
        }
    }
}

#[derive(Args)]
struct CliquesArgs {
    /// Number of qubits.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Output format (json report or dot graph).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChargesArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random states to sample (half pure, half mixed).
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Override for the saturation tolerance (pure pentagon charges and
    /// the one-bit clique bound).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GeneratorsArgs {
    /// Skip the 63-dimensional three-qubit closure (the slowest check).
    #[arg(long)]
    skip_embedded: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Time grid: "start:end:steps" (inclusive) or a comma list of times.
    #[arg(long, default_value = "0:6.3:22")]
    t_grid: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LogicArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TomographyArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per question for the headline estimate.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Convergence grid as a comma list of sample counts.
    #[arg(long, default_value = "100,1000,10000,100000")]
    grid: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MonogamyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyAllArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Envelope<C: Serialize, R: Serialize> {
    command: &'static str,
    config: C,
    results: R,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Cliques(args) => run_cliques(args),
        Command::Charges(args) => run_charges(args),
        Command::Generators(args) => run_generators(args),
        Command::Evolve(args) => run_evolve(args),
        Command::Logic(args) => run_logic(args),
        Command::Tomography(args) => run_tomography(args),
        Command::Monogamy(args) => run_monogamy(args),
        Command::VerifyAll(args) => run_verify_all(args),
    };
    match outcome {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Run(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

enum CliError {
    /// Bad arguments or unsupported combinations: exit code 2.
    Usage(String),
    /// A campaign failed to run at all: exit code 1.
    Run(String),
}

impl From<core::Error> for CliError {
    fn from(e: core::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

type CliResult = Result<bool, CliError>;

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::Run(format!("cannot write to stdout: {e}")))
        }
    }
}

fn emit_json<C: Serialize, R: Serialize>(
    out: &Option<PathBuf>,
    envelope: &Envelope<C, R>,
) -> Result<(), CliError> {
    let rendered = serde_json::to_string_pretty(envelope)
        .map_err(|e| CliError::Run(format!("serialization failed: {e}")))?;
    emit(out, &format!("{rendered}\n"))
}

fn reject_format(command: &str, format: Format, supported: &[Format]) -> Result<(), CliError> {
    if supported.contains(&format) {
        Ok(())
    } else {
        let names: Vec<&str> = supported.iter().map(|f| f.name()).collect();
        Err(CliError::Usage(format!(
            "`{command}` supports --format {}, got {}",
            names.join("|"),
            format.name()
        )))
    }
}

// --- cliques ------------------------------------------------------------

#[derive(Serialize)]
struct CliquesConfig {
    n: usize,
    format: &'static str,
}

#[derive(Serialize)]
struct CliquesResults {
    census: core::CliqueCensus,
    structure_checks: Vec<String>,
}

fn run_cliques(args: CliquesArgs) -> CliResult {
    reject_format("cliques", args.format, &[Format::Json, Format::Dot])?;
    let graph = core::build_graph(args.n)?;
    if args.format == Format::Dot {
        emit(&args.out, &core::export_graph(&graph, "dot")?)?;
        return Ok(true);
    }
    let census = core::clique_census(&graph);
    let mut checks = Vec::new();
    let mut pass = true;

    let count_of = |size: &str| census.counts_by_size.get(size).copied().unwrap_or(0);
    match args.n {
        1 => {
            let ok = count_of("3") == 1 && census.cliques.len() == 1;
            pass &= ok;
            checks.push(format!("one maximal set of size 3: {ok}"));
        }
        2 => {
            let ok = count_of("5") == 6 && count_of("3") == 20 && census.cliques.len() == 26;
            pass &= ok;
            checks.push(format!("6 pentagons and 20 triangles: {ok}"));
            let lattice = core::pentagon_lattice();
            let mut shares_ok = true;
            for a in 1..=6 {
                for b in (a + 1)..=6 {
                    shares_ok &= lattice.shared_question(a, b).is_ok();
                }
            }
            pass &= shares_ok;
            checks.push(format!(
                "every pentagon pair shares exactly one question: {shares_ok}"
            ));
        }
        _ => {
            checks.push(format!(
                "{} maximal sets enumerated (no catalogued expectation at this size)",
                census.cliques.len()
            ));
        }
    }

    emit_json(
        &args.out,
        &Envelope {
            command: "cliques",
            config: CliquesConfig {
                n: args.n,
                format: args.format.name(),
            },
            results: CliquesResults {
                census,
                structure_checks: checks,
            },
            pass,
        },
    )?;
    Ok(pass)
}

// --- charges ------------------------------------------------------------

#[derive(Serialize)]
struct ChargesConfig {
    n: usize,
    seed: u64,
    samples: usize,
    saturation_tol: f64,
    sum_tol: f64,
}

#[derive(Serialize)]
struct ChargesResults {
    worst_pure_pentagon_deviation: Option<f64>,
    worst_sum_residual: Option<f64>,
    max_clique_charge: f64,
    audit_violations: usize,
    example_pentagon_report: Option<core::PentagonReport>,
}

fn run_charges(args: ChargesArgs) -> CliResult {
    reject_format("charges", args.format, &[Format::Json])?;
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let saturation_tol = args.tol.unwrap_or(tol::PURITY_TOL);
    let sum_tol = args.tol.unwrap_or(tol::ALGEBRAIC_TOL);

    let lattice = (args.n == 2).then(core::pentagon_lattice);
    let cliques = core::maximal_cliques(&core::build_graph(args.n)?);

    let mut worst_pure_deviation: Option<f64> = None;
    let mut worst_sum_residual: Option<f64> = None;
    let mut max_clique_charge = 0.0f64;
    let mut audit_violations = 0usize;
    let mut example = None;

    for k in 0..args.samples as u64 {
        let sub = core::mix_seed(args.seed, k);
        let s = if k % 2 == 0 {
            core::random_pure(args.n, sub)?
        } else {
            core::random_mixed(args.n, sub)?
        };

        if let Some(lattice) = &lattice {
            let report = core::pentagon_report_with(lattice, &s)?;
            let sum = worst_sum_residual.get_or_insert(0.0);
            *sum = sum.max(report.sum_residual.abs());
            if let Some(d) = report.max_pure_deviation {
                let worst = worst_pure_deviation.get_or_insert(0.0);
                *worst = worst.max(d);
            }
            if example.is_none() {
                example = Some(report);
            }
        }

        let audit = core::complementarity_audit_with(&cliques, &s)?;
        max_clique_charge = max_clique_charge.max(audit.max_charge);
        audit_violations += audit.violations.len();
    }

    let pass = worst_pure_deviation.is_none_or(|d| d <= saturation_tol)
        && worst_sum_residual.is_none_or(|r| r <= sum_tol)
        && audit_violations == 0
        && max_clique_charge <= 1.0 + saturation_tol;

    emit_json(
        &args.out,
        &Envelope {
            command: "charges",
            config: ChargesConfig {
                n: args.n,
                seed: args.seed,
                samples: args.samples,
                saturation_tol,
                sum_tol,
            },
            results: ChargesResults {
                worst_pure_pentagon_deviation: worst_pure_deviation,
                worst_sum_residual,
                max_clique_charge,
                audit_violations,
                example_pentagon_report: example,
            },
            pass,
        },
    )?;
    Ok(pass)
}

// --- generators ---------------------------------------------------------

#[derive(Serialize)]
struct GeneratorsConfig {
    skip_embedded: bool,
}

#[derive(Serialize)]
struct SwapEntry {
    pair: (usize, usize),
    shared_question: String,
    check: core::GeneratorCheck,
    adjoint_scale: f64,
    adjoint_match_residual: f64,
    generator: core::EvolutionGenerator,
}

#[derive(Serialize)]
struct GeneratorsResults {
    swaps: Vec<SwapEntry>,
    swap_closure_dimension: usize,
    embedded_generator_count: Option<usize>,
    embedded_closure_dimension: Option<usize>,
}

fn run_generators(args: GeneratorsArgs) -> CliResult {
    reject_format("generators", args.format, &[Format::Json])?;
    let lattice = core::pentagon_lattice();
    let mut swaps = Vec::new();
    let mut generators = Vec::new();
    let mut pass = true;
    for a in 1..=6usize {
        for b in (a + 1)..=6 {
            let g = core::pentagon_swap_with(&lattice, a, b)?;
            let check = core::check_generator(&g);
            let shared = lattice.shared_question(a, b)?;
            let adjoint =
                core::generator_from_hamiltonian(&core::Hamiltonian::pauli_word(&shared));
            let (scale, residual) = core::match_up_to_scale(&g, &adjoint)?;
            pass &= check.pass && residual <= 1e-10;
            swaps.push(SwapEntry {
                pair: (a, b),
                shared_question: shared.to_string(),
                check,
                adjoint_scale: scale,
                adjoint_match_residual: residual,
                generator: g.clone(),
            });
            generators.push(g);
        }
    }
    let swap_closure_dimension = core::lie_closure(&generators)?;
    pass &= swap_closure_dimension == 15;

    let (embedded_generator_count, embedded_closure_dimension) = if args.skip_embedded {
        (None, None)
    } else {
        let embedded = core::adjoint_generators_for_weights(3, &[1, 2])?;
        let dim = core::lie_closure(&embedded)?;
        pass &= embedded.len() == 36 && dim == 63;
        (Some(embedded.len()), Some(dim))
    };

    emit_json(
        &args.out,
        &Envelope {
            command: "generators",
            config: GeneratorsConfig {
                skip_embedded: args.skip_embedded,
            },
            results: GeneratorsResults {
                swaps,
                swap_closure_dimension,
                embedded_generator_count,
                embedded_closure_dimension,
            },
            pass,
        },
    )?;
    Ok(pass)
}

// --- evolve -------------------------------------------------------------

#[derive(Serialize)]
struct EvolveConfig {
    n: usize,
    seed: u64,
    t_grid: String,
}

#[derive(Serialize)]
struct EvolveResults {
    hamiltonian_coefficients: Vec<f64>,
    generator_check: core::GeneratorCheck,
    trajectory: core::TrajectoryReport,
    equivalence_deviation: f64,
}

fn parse_t_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Usage(format!("cannot parse --t-grid {spec:?}: {m}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:end:steps"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("bad start"))?;
        let end: f64 = parts[1].parse().map_err(|_| bad("bad end"))?;
        let steps: usize = parts[2].parse().map_err(|_| bad("bad step count"))?;
        if steps < 2 {
            return Err(bad("need at least 2 steps"));
        }
        let h = (end - start) / (steps - 1) as f64;
        Ok((0..steps).map(|k| start + h * k as f64).collect())
    } else {
        let times: Result<Vec<f64>, _> = spec.split(',').map(str::trim).map(str::parse).collect();
        let times = times.map_err(|_| bad("bad number in list"))?;
        if times.is_empty() {
            return Err(bad("empty list"));
        }
        Ok(times)
    }
}

fn run_evolve(args: EvolveArgs) -> CliResult {
    reject_format("evolve", args.format, &[Format::Json, Format::Csv])?;
    let times = parse_t_grid(&args.t_grid)?;
    let h = core::Hamiltonian::random(args.n, core::mix_seed(args.seed, 1))?;
    let s = core::random_pure(args.n, core::mix_seed(args.seed, 2))?;
    let g = core::generator_from_hamiltonian(&h);
    let check = core::check_generator(&g);
    let trajectory = core::trajectory(&g, &s, &times)?;
    // Cross-check the two evolution paths at the last grid time.
    let t_last = *times.last().expect("grid is nonempty");
    let equivalence_deviation = core::adjoint_equivalence_check(&h, &s, t_last)?;
    let pass = check.pass
        && trajectory.pass
        && equivalence_deviation <= tol::BLOCH_DENSITY_EQUIV_TOL;

    if args.format == Format::Csv {
        emit(&args.out, &core::trajectory_csv(&trajectory))?;
        return Ok(pass);
    }
    emit_json(
        &args.out,
        &Envelope {
            command: "evolve",
            config: EvolveConfig {
                n: args.n,
                seed: args.seed,
                t_grid: args.t_grid.clone(),
            },
            results: EvolveResults {
                hamiltonian_coefficients: h.coefficients().iter().copied().collect(),
                generator_check: check,
                trajectory,
                equivalence_deviation,
            },
            pass,
        },
    )?;
    Ok(pass)
}

// --- logic --------------------------------------------------------------

#[derive(Serialize)]
struct LogicConfig {
    format: &'static str,
}

#[derive(Serialize)]
struct LogicResults {
    classical_identity: core::ClassicalIdentityReport,
    correlation_table: Vec<core::ParityConstraint>,
    quantum_hidden_variable_count: usize,
    all_even_hidden_variable_count: usize,
}

fn run_logic(args: LogicArgs) -> CliResult {
    reject_format("logic", args.format, &[Format::Json, Format::Dot])?;
    if args.format == Format::Dot {
        emit(&args.out, &core::correlation_table_dot())?;
        return Ok(true);
    }
    let identity = core::classical_identity_check();
    let table = core::correlation_table();
    let quantum = core::hidden_variable_search(&table)?;
    let classical = core::hidden_variable_search(&core::all_even_table())?;
    let pass = identity.pass && quantum == 0 && classical > 0;
    emit_json(
        &args.out,
        &Envelope {
            command: "logic",
            config: LogicConfig {
                format: args.format.name(),
            },
            results: LogicResults {
                classical_identity: identity,
                correlation_table: table,
                quantum_hidden_variable_count: quantum,
                all_even_hidden_variable_count: classical,
            },
            pass,
        },
    )?;
    Ok(pass)
}

// --- tomography ---------------------------------------------------------

#[derive(Serialize)]
struct TomographyConfig {
    n: usize,
    seed: u64,
    samples: usize,
    grid: Vec<usize>,
}

#[derive(Serialize)]
struct TomographyResults {
    estimate_max_abs_error: f64,
    error_bound: f64,
    convergence: core::ConvergenceReport,
    slope_window: (f64, f64),
    slope_checked: bool,
}

fn run_tomography(args: TomographyArgs) -> CliResult {
    reject_format("tomography", args.format, &[Format::Json, Format::Csv])?;
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let grid: Result<Vec<usize>, _> =
        args.grid.split(',').map(str::trim).map(str::parse).collect();
    let grid =
        grid.map_err(|_| CliError::Usage(format!("cannot parse --grid {:?}", args.grid)))?;

    let s = core::random_pure(args.n, core::mix_seed(args.seed, 1))?;
    let estimate = core::multi_shot_tomography(&s, args.samples, core::mix_seed(args.seed, 2))?;
    let convergence = core::convergence_report(&s, &grid, core::mix_seed(args.seed, 3))?;

    // Binomial standard error on a Bloch component is at most 1/sqrt(M);
    // 6.5 sigma keeps false alarms out of reach at any grid size.
    let error_bound = 6.5 / (args.samples as f64).sqrt();
    let span = grid.last().copied().unwrap_or(1) as f64 / grid[0] as f64;
    let slope_checked = grid.len() >= 2 && span >= 100.0;
    let slope_ok = !slope_checked
        || convergence.slope.is_some_and(|m| {
            (tol::CONVERGENCE_SLOPE_MIN..=tol::CONVERGENCE_SLOPE_MAX).contains(&m)
        });
    let pass = estimate.max_abs_error < error_bound && slope_ok;

    if args.format == Format::Csv {
        emit(&args.out, &core::convergence_csv(&convergence))?;
        return Ok(pass);
    }
    emit_json(
        &args.out,
        &Envelope {
            command: "tomography",
            config: TomographyConfig {
                n: args.n,
                seed: args.seed,
                samples: args.samples,
                grid,
            },
            results: TomographyResults {
                estimate_max_abs_error: estimate.max_abs_error,
                error_bound,
                convergence,
                slope_window: (tol::CONVERGENCE_SLOPE_MIN, tol::CONVERGENCE_SLOPE_MAX),
                slope_checked,
            },
            pass,
        },
    )?;
    Ok(pass)
}

// --- monogamy -----------------------------------------------------------

#[derive(Serialize)]
struct MonogamyConfig {
    seed: u64,
}

fn run_monogamy(args: MonogamyArgs) -> CliResult {
    reject_format("monogamy", args.format, &[Format::Json])?;
    let report = core::monogamy_demo(args.seed)?;
    let pass = report.pass;
    emit_json(
        &args.out,
        &Envelope {
            command: "monogamy",
            config: MonogamyConfig { seed: args.seed },
            results: report,
            pass,
        },
    )?;
    Ok(pass)
}

// --- verify-all ---------------------------------------------------------

#[derive(Serialize)]
struct VerifyAllConfig {
    seed: u64,
}

fn run_verify_all(args: VerifyAllArgs) -> CliResult {
    reject_format("verify-all", args.format, &[Format::Json])?;
    let report = core::verify_all(args.seed);
    let pass = report.pass;
    emit_json(
        &args.out,
        &Envelope {
            command: "verify-all",
            config: VerifyAllConfig { seed: args.seed },
            results: report,
            pass,
        },
    )?;
    Ok(pass)
}
