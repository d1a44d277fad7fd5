use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::formats::{parse_game_file, parse_saddle_file};
use super::{default_seed, named_graph, run_figure1_detailed, write_rows_csv, write_trial_log, ExperimentConfig};
use crate::error::{Error, Result};
use crate::flows::{
    contraction_observed, default_dt, distributed_flow_incidence, distributed_flow_laplacian, integrate,
    primal_dual_flow, rate_incidence, rate_laplacian, DenseQuadratic, FlowSystem, QuadraticCost, VectorField,
};
use crate::games::{
    equivalence_check, gain_best_response, gain_best_response_discrete, gain_pseudogradient, interconnection_rate,
    simulate_best_response, simulate_pseudogradient,
};
use crate::graphs::Graph;
use crate::saddle::{
    quarter_rate_certificate_with, sharp_rate_certificate_with, small_tau_certificate_with, verify_certificate,
    ContractionCertificate, SaddleProblem,
};
use crate::spectra::{diagonal_lyapunov_weights, TOL_PSD};

#[derive(Debug, Parser)]
#[command(name = "semicontract", version, about = "Semicontraction certificates for saddle-matrix dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print all three certificates of a saddle problem and their verification.
    Certificate(CertificateArgs),
    /// Certified rates of the Laplacian- and incidence-constrained flows.
    Rates(RatesArgs),
    /// Integrate a flow, export the trajectory and check the contraction envelope.
    Simulate(SimulateArgs),
    /// Gain matrices, stability equivalence and optional simulation of a game.
    Game(GameArgs),
    /// Erdős–Rényi comparison of Laplacian and incidence constraints.
    Figure1(Figure1Args),
}

#[derive(Debug, Args)]
struct CertificateArgs {
    /// Saddle-problem file: `n m tau`, then n rows of Q and m rows of A.
    #[arg(long)]
    file: PathBuf,
    /// Split parameter of the small-τ certificate, in (0, 2).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = TOL_PSD)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Complete,
    Path,
    Cycle,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Edge-list file: `N M`, then M lines `i j`.
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    nodes: Option<usize>,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        match (&self.graph, self.family, self.nodes) {
            (Some(path), _, _) => Graph::parse_edge_list(&read(path)?),
            (None, Some(family), Some(n)) => {
                let name = match family {
                    Family::Complete => "complete",
                    Family::Path => "path",
                    Family::Cycle => "cycle",
                };
                named_graph(name, n)
            }
            _ => Err(Error::InvalidInput("give --graph FILE or --family with --nodes".into())),
        }
    }
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Cost weights q_i of Σ q_i (x_i − v_i)², one per node (default all 1).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FlowChoice {
    PrimalDual,
    Laplacian,
    Incidence,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantChoice {
    Quarter,
    SmallTau,
    Sharp,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    flow: FlowChoice,
    /// Saddle-problem file for the primal-dual flow (Q symmetric).
    #[arg(long)]
    file: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<f64>>,
    /// Targets v_i, one per node (default all 0).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    targets: Option<Vec<f64>>,
    /// Certificate used for the primal-dual envelope.
    #[arg(long, value_enum, default_value = "quarter")]
    variant: VariantChoice,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    /// Step size (default min(1e-2, 0.1/‖J‖)).
    #[arg(long)]
    dt: Option<f64>,
    /// Seed for the two random initial conditions.
    #[arg(long)]
    seed: Option<u64>,
    /// Trajectory CSV destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GameArgs {
    /// Key-value game file with players, mu, ell and optional K, b.
    #[arg(long)]
    file: PathBuf,
    /// Simulate pseudogradient and best-response play (needs K).
    #[arg(long)]
    simulate: bool,
    #[arg(long, default_value_t = 30.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-2)]
    dt: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x0: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct Figure1Args {
    #[arg(long, default_value_t = 40)]
    nodes: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    probs: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    tau: f64,
    /// Master seed (default from SEMICONTRACT_SEED, else 42).
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON-lines per-trial log destination.
    #[arg(long)]
    log: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code: 0 on success, 1 on input errors, 2 on
/// internal verification failures.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Certificate(args) => certificate(args, out),
        Command::Rates(args) => rates(args, out),
        Command::Simulate(args) => simulate(args, out),
        Command::Game(args) => game(args, out),
        Command::Figure1(args) => figure1(args, out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", path.display())))
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_matrix(out: &mut dyn Write, name: &str, m: &DMatrix<f64>) -> Result<()> {
    writeln!(out, "{name}:")?;
    for row in m.row_iter() {
        writeln!(out, "  {}", join(row.iter().copied()))?;
    }
    Ok(())
}

fn certificate(args: CertificateArgs, out: &mut dyn Write) -> Result<()> {
    let prob = parse_saddle_file(&read(&args.file)?)?;
    let bounds = prob.spectral_bounds()?;
    writeln!(out, "q_min={}", bounds.q_min)?;
    writeln!(out, "q_max={}", bounds.q_max)?;
    writeln!(out, "a_min={}", bounds.a_min)?;
    writeln!(out, "a_max={}", bounds.a_max)?;
    let certs = [
        ("quarter", quarter_rate_certificate_with(&prob, &bounds)?),
        ("small_tau", small_tau_certificate_with(&prob, &bounds, args.epsilon)?),
        ("sharp", sharp_rate_certificate_with(&prob, &bounds)?),
    ];
    let mut failed = Vec::new();
    for (name, cert) in &certs {
        let report = verify_certificate(&prob, cert, args.tol)?;
        writeln!(out, "c_{name}={}", cert.rate)?;
        writeln!(out, "alpha_{name}={}", cert.alpha)?;
        writeln!(out, "variant_{name}={}", cert.variant)?;
        writeln!(
            out,
            "verify_{name}: lmi_ok={} psd_ok={} kernel_invariant_ok={} lmi_worst={:e} lmi_scale={:e} kernel_dim={}",
            report.lmi_ok,
            report.psd_ok,
            report.kernel_invariant_ok,
            report.lmi_worst_eigenvalue,
            report.lmi_scale,
            report.kernel_dim
        )?;
        if !report.all_ok() {
            failed.push(*name);
        }
    }
    if !failed.is_empty() {
        return Err(Error::Verification(format!("certificate check failed for {}", failed.join(", "))));
    }
    Ok(())
}

fn scalar_cost(g: &Graph, weights: Option<Vec<f64>>, targets: Option<Vec<f64>>) -> Result<QuadraticCost> {
    let n = g.node_count();
    let weights = weights.unwrap_or_else(|| vec![1.0; n]);
    let targets = targets.unwrap_or_else(|| vec![0.0; n]);
    if weights.len() != n || targets.len() != n {
        return Err(Error::InvalidInput(format!(
            "graph has {n} nodes but {} weights and {} targets were given",
            weights.len(),
            targets.len()
        )));
    }
    QuadraticCost::scalar(weights, targets)
}

fn rates(args: RatesArgs, out: &mut dyn Write) -> Result<()> {
    let g = args.graph.load()?;
    let cost = scalar_cost(&g, args.weights, None)?;
    let (l2, ln) = g.spectral_gap()?;
    let (mu, ell) = crate::flows::Objective::curvature(&cost);
    writeln!(out, "nodes={} edges={}", g.node_count(), g.edge_count())?;
    writeln!(out, "lambda_2={l2}")?;
    writeln!(out, "lambda_n={ln}")?;
    writeln!(out, "mu={mu}")?;
    writeln!(out, "ell={ell}")?;
    writeln!(out, "rate_laplacian={}", rate_laplacian(&cost, &g, args.tau)?)?;
    writeln!(out, "rate_incidence={}", rate_incidence(&cost, &g, args.tau)?)?;
    Ok(())
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0))
}

fn simulate(args: SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let (system, cert): (FlowSystem, ContractionCertificate) = match args.flow {
        FlowChoice::PrimalDual => {
            let path = args
                .file
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("--flow primal-dual needs --file".into()))?;
            let prob = parse_saddle_file(&read(path)?)?;
            let n = prob.primal_dim();
            let objective = Arc::new(DenseQuadratic::new(prob.q().clone(), DVector::zeros(n))?);
            let system = primal_dual_flow(objective, prob.a().clone(), DVector::zeros(prob.dual_dim()), prob.tau())?;
            let cert = primal_dual_certificate(&prob, args.variant)?;
            (system, cert)
        }
        FlowChoice::Laplacian | FlowChoice::Incidence => {
            let g = args.graph.load()?;
            let cost = Arc::new(scalar_cost(&g, args.weights, args.targets)?);
            let system = match args.flow {
                FlowChoice::Laplacian => distributed_flow_laplacian(cost, &g, args.tau)?,
                _ => distributed_flow_incidence(cost, &g, args.tau)?,
            };
            let cert = system
                .certificate_hint()
                .cloned()
                .ok_or_else(|| Error::Verification("distributed flow without certificate".into()))?;
            (system, cert)
        }
    };
    let dim = system.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(match args.seed {
        Some(s) => s,
        None => default_seed()?,
    });
    let x0 = random_state(&mut rng, dim);
    let y0 = random_state(&mut rng, dim);
    let dt = args.dt.unwrap_or_else(|| default_dt(&system.jacobian(&x0)));

    let trajectory = integrate(&system, &x0, args.t_end, dt)?;
    if let Some(path) = &args.out {
        let mut file = create(path)?;
        trajectory.write_csv(&mut file)?;
        file.flush()?;
    }
    let (x_final, lambda_final) = system.split(&trajectory.final_state());
    writeln!(out, "flow={:?}", system.kind())?;
    writeln!(out, "dt={dt}")?;
    writeln!(out, "samples={}", trajectory.len())?;
    writeln!(out, "certified_rate={}", cert.rate)?;
    writeln!(out, "primal_final={}", join(x_final.iter().copied()))?;
    writeln!(out, "dual_final={}", join(lambda_final.iter().copied()))?;
    let report = contraction_observed(&system, &cert, &x0, &y0, args.t_end, dt)?;
    if let Some(rate) = report.fitted_rate {
        writeln!(out, "fitted_rate={rate}")?;
    }
    writeln!(out, "final_distance={:e}", report.distances.last().copied().unwrap_or(0.0))?;
    writeln!(out, "envelope: ok")?;
    Ok(())
}

fn primal_dual_certificate(prob: &SaddleProblem, variant: VariantChoice) -> Result<ContractionCertificate> {
    let bounds = prob.spectral_bounds()?;
    match variant {
        VariantChoice::Quarter => quarter_rate_certificate_with(prob, &bounds),
        VariantChoice::SmallTau => small_tau_certificate_with(prob, &bounds, None),
        VariantChoice::Sharp => sharp_rate_certificate_with(prob, &bounds),
    }
}

fn game(args: GameArgs, out: &mut dyn Write) -> Result<()> {
    let file = parse_game_file(&read(&args.file)?)?;
    let spec = &file.spec;
    let pseudo = gain_pseudogradient(spec);
    write_matrix(out, "gamma_pseudogradient", &pseudo)?;
    write_matrix(out, "gamma_best_response", &gain_best_response(spec))?;
    write_matrix(out, "gamma_best_response_discrete", &gain_best_response_discrete(spec))?;
    let report = equivalence_check(spec)?;
    writeln!(out, "pseudo_hurwitz: {}", report.pseudo_hurwitz)?;
    writeln!(out, "br_hurwitz: {}", report.br_hurwitz)?;
    writeln!(out, "brd_schur: {}", report.brd_schur)?;
    writeln!(out, "consistent: {}, hurwitz: {}", report.consistent, report.pseudo_hurwitz)?;
    if !report.consistent {
        return Err(Error::Verification("stability predicates disagree".into()));
    }
    if report.pseudo_hurwitz {
        let p = diagonal_lyapunov_weights(&pseudo)?;
        writeln!(out, "lyapunov_weights: {}", join(p.iter().copied()))?;
        writeln!(out, "interconnection_rate: {}", interconnection_rate(&pseudo, None)?)?;
    }
    if args.simulate {
        let game = file
            .game
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("--simulate needs K in the game file".into()))?;
        let n = game.players();
        let x0 = match args.x0 {
            Some(v) if v.len() == n => DVector::from_vec(v),
            Some(v) => {
                return Err(Error::InvalidInput(format!("--x0 has {} entries, need {n}", v.len())));
            }
            None => DVector::zeros(n),
        };
        if let Ok(ne) = game.nash_equilibrium() {
            writeln!(out, "nash_equilibrium: {}", join(ne.iter().copied()))?;
        }
        for (name, play) in [
            ("pseudogradient", simulate_pseudogradient(game, &x0, args.t_end, args.dt)?),
            ("best_response", simulate_best_response(game, &x0, args.t_end, args.dt)?),
        ] {
            match play.diverged_at {
                Some(t) => writeln!(out, "{name}: diverged at t={t}")?,
                None => writeln!(out, "{name}_final: {}", join(play.final_state().iter().copied()))?,
            }
        }
    }
    Ok(())
}

fn figure1(args: Figure1Args, out: &mut dyn Write) -> Result<()> {
    let cfg = ExperimentConfig {
        n_nodes: args.nodes,
        edge_probabilities: args.probs,
        trials_per_p: args.trials,
        tau: args.tau,
        master_seed: match args.seed {
            Some(s) => s,
            None => default_seed()?,
        },
        ..ExperimentConfig::default()
    };
    let result = run_figure1_detailed(&cfg)?;
    match &args.out {
        Some(path) => {
            let mut file = create(path)?;
            write_rows_csv(&result.rows, &mut file)?;
            file.flush()?;
        }
        None => write_rows_csv(&result.rows, &mut *out)?,
    }
    if let Some(path) = &args.log {
        let mut file = create(path)?;
        write_trial_log(&result.trials, &mut file)?;
        file.flush()?;
    }
    eprintln!(
        "seed={} tau={} ci=95% normal-approximation half-width 1.96*s/sqrt(trials)",
        cfg.master_seed, cfg.tau
    );
    let inconsistent = result.trials.iter().filter(|t| !t.consistent).count();
    if inconsistent > 0 {
        return Err(Error::Verification(format!(
            "{inconsistent} trials have a deflated abscissa above minus their certified rate"
        )));
    }
    Ok(())
}
