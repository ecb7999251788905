//! Command-line front end: planning, experiment runs, instance generation,
//! value-chain comparison, and plotting. Every subcommand is a thin shell
//! over the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use rsdp::algos::{compare_planners, Algorithm, IotaMode, LearnerConfig, LearnerState};
use rsdp::dist::RiskParam;
use rsdp::error::{Error, Result};
use rsdp::harness::{
    aggregate, emit_csv, emit_plot, read_csv, run_experiment, ExperimentConfig,
};
use rsdp::mdp::{
    load_mdp, make_hard_mdp, make_risky_mdp, mdp_from_value, save_mdp, HardInstanceSpec,
    TabularMDP,
};
use rsdp::planner::{rs_ddp_distributional, rs_ddp_scalar, DEFAULT_SUPPORT_CAP};

#[derive(Parser)]
#[command(name = "rsdp", version, about = "Risk-sensitive episodic RL toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact planning: print the optimal value and policy as JSON.
    Plan(PlanArgs),
    /// Multi-seed regret experiment; writes CSV and optionally an SVG plot.
    Run(RunArgs),
    /// Generate a built-in MDP instance as JSON.
    GenMdp(GenMdpArgs),
    /// Run every planner on a shared count snapshot and report the value
    /// ordering chain.
    CompareValues(CompareValuesArgs),
    /// Re-plot an existing results CSV.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Generator {
    Risky,
    Hard,
}

#[derive(Args)]
struct HardArgs {
    /// Tree branching factor (also the action count).
    #[arg(long, default_value_t = 2)]
    branching: usize,
    /// Tree depth parameter; the tree has (A^depth - 1)/(A - 1) nodes.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Waiting-phase length; the horizon is 3 * waiting.
    #[arg(long, default_value_t = 2)]
    waiting: usize,
    /// Step (1-based) at which the favored leaf transition is available.
    #[arg(long = "h-star", default_value_t = 3)]
    h_star: usize,
    /// Favored leaf index (0-based).
    #[arg(long = "leaf-star", default_value_t = 0)]
    leaf_star: usize,
    /// Favored action at the favored leaf.
    #[arg(long = "a-star", default_value_t = 0)]
    a_star: usize,
    /// Baseline success probability at the leaves.
    #[arg(long, default_value_t = 0.25)]
    p: f64,
    /// Extra success probability of the favored triple.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
}

impl HardArgs {
    fn spec(&self, beta: f64) -> HardInstanceSpec {
        HardInstanceSpec {
            branching: self.branching,
            depth: self.depth,
            waiting: self.waiting,
            horizon: 3 * self.waiting,
            h_star: self.h_star,
            leaf_star: self.leaf_star,
            a_star: self.a_star,
            p: self.p,
            epsilon: self.eps,
            // the layout does not depend on beta; substitute a valid value
            // when planning risk-neutrally
            beta: if beta == 0.0 { -1.0 } else { beta },
        }
    }
}

#[derive(Args)]
struct MdpSource {
    /// MDP JSON file.
    #[arg(long, conflicts_with = "gen", value_name = "FILE")]
    mdp: Option<PathBuf>,
    /// Built-in instance generator.
    #[arg(long, value_enum)]
    gen: Option<Generator>,
    #[command(flatten)]
    hard: HardArgs,
}

impl MdpSource {
    fn resolve(&self, beta: f64) -> Result<TabularMDP> {
        match (&self.mdp, self.gen) {
            (Some(path), None) => load_mdp(path),
            (None, Some(Generator::Risky)) => Ok(make_risky_mdp()),
            (None, Some(Generator::Hard)) => make_hard_mdp(&self.hard.spec(beta)),
            _ => Err(Error::invalid(
                "exactly one MDP source required: --mdp <file> or --gen <risky|hard>",
            )),
        }
    }
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    source: MdpSource,
    /// Risk parameter; 0 plans risk-neutrally.
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Use the full-distribution planner instead of the scalar one.
    #[arg(long)]
    distributional: bool,
    #[arg(long, default_value_t = DEFAULT_SUPPORT_CAP)]
    support_cap: usize,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: MdpSource,
    /// Comma-separated algorithm list.
    #[arg(
        long,
        default_value = "rodi-mb,rodi-mf,rovi,rodi-otp,rodi-pto,rsvi2,rsvi,ucbvi"
    )]
    algos: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.005)]
    delta: f64,
    #[arg(long, default_value_t = 2000)]
    episodes: usize,
    /// Number of seeds (master-seed, master-seed + 1, ...).
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    /// Output CSV path.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Optional SVG plot path.
    #[arg(long, value_name = "FILE")]
    plot: Option<PathBuf>,
    /// Confidence log term: log(2SAT/delta) or log(SAT/delta).
    #[arg(long, value_enum, default_value_t = IotaArg::TwoSat)]
    iota: IotaArg,
    #[arg(long, default_value_t = DEFAULT_SUPPORT_CAP)]
    support_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IotaArg {
    TwoSat,
    Sat,
}

impl From<IotaArg> for IotaMode {
    fn from(v: IotaArg) -> IotaMode {
        match v {
            IotaArg::TwoSat => IotaMode::LogTwoSat,
            IotaArg::Sat => IotaMode::LogSat,
        }
    }
}

#[derive(Args)]
struct GenMdpArgs {
    #[arg(value_enum)]
    kind: Generator,
    #[command(flatten)]
    hard: HardArgs,
    /// Structural validation only; the generated tensors are beta-free.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareValuesArgs {
    /// JSON snapshot: { "mdp": <MDP object>, "counts": [H][S][A][S] }.
    #[arg(long, value_name = "FILE")]
    counts: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.005)]
    delta: f64,
    /// Episode budget entering the confidence log term.
    #[arg(long, default_value_t = 2000)]
    episodes: usize,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

fn cmd_plan(args: PlanArgs) -> Result<()> {
    let beta = RiskParam::new(args.beta)?;
    let mdp = args.source.resolve(args.beta)?;
    let plan = if args.distributional {
        rs_ddp_distributional(&mdp, beta, args.support_cap)?
    } else {
        rs_ddp_scalar(&mdp, beta)?
    };
    let out = json!({
        "beta": args.beta,
        "initial_state": mdp.initial_state,
        "v_star_1": plan.v_star[0][mdp.initial_state],
        "policy": plan.policy.actions,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let beta = RiskParam::new(args.beta)?;
    let mut algorithms = Vec::new();
    for name in args.algos.split(',').filter(|s| !s.is_empty()) {
        algorithms.push(Algorithm::parse(name.trim())?);
    }
    if beta.is_risk_neutral() && algorithms.iter().any(|a| a.is_risk_sensitive()) {
        return Err(Error::invalid(
            "beta = 0 is only valid with the risk-neutral baseline (ucbvi)",
        ));
    }
    if args.seeds == 0 {
        return Err(Error::invalid("need at least one seed"));
    }
    let mdp = args.source.resolve(args.beta)?;
    let seeds: Vec<u64> = (0..args.seeds).map(|i| args.master_seed + i).collect();
    let mut cfg = ExperimentConfig::new(mdp, algorithms, beta, args.delta, args.episodes, seeds)?;
    cfg.iota_mode = args.iota.into();
    cfg.support_cap = args.support_cap;
    cfg.threads = threads_from_env()?;
    let records = run_experiment(&cfg)?;
    emit_csv(&records, &args.out)?;
    let agg = aggregate(&records)?;
    if let Some(plot) = &args.plot {
        emit_plot(&agg, plot)?;
    }
    for series in &agg {
        println!(
            "{}: final mean cumulative regret {:.6}",
            series.algo.id(),
            series.mean.last().copied().unwrap_or(0.0)
        );
    }
    Ok(())
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("RSDP_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::invalid(format!("RSDP_THREADS must be an integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn cmd_gen_mdp(args: GenMdpArgs) -> Result<()> {
    let mdp = match args.kind {
        Generator::Risky => make_risky_mdp(),
        Generator::Hard => make_hard_mdp(&args.hard.spec(args.beta))?,
    };
    save_mdp(&mdp, &args.out)?;
    println!(
        "wrote {} (S={}, A={}, H={})",
        args.out.display(),
        mdp.num_states,
        mdp.num_actions,
        mdp.horizon
    );
    Ok(())
}

#[derive(Deserialize)]
struct CountsFile {
    mdp: serde_json::Value,
    counts: Vec<Vec<Vec<Vec<u64>>>>,
}

fn cmd_compare_values(args: CompareValuesArgs) -> Result<()> {
    let beta = RiskParam::new(args.beta)?;
    if beta.is_risk_neutral() {
        return Err(Error::invalid("value comparison needs beta != 0"));
    }
    let text = std::fs::read_to_string(&args.counts).map_err(|source| Error::Io {
        path: args.counts.display().to_string(),
        source,
    })?;
    let file: CountsFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: args.counts.display().to_string(),
        message: e.to_string(),
    })?;
    let mdp = mdp_from_value(file.mdp)?;
    let state = LearnerState::from_transition_counts(file.counts)?;
    if state.shape() != (mdp.num_states, mdp.num_actions, mdp.horizon) {
        return Err(Error::Validation(
            "count tensor shape disagrees with the MDP".into(),
        ));
    }
    let cfg = LearnerConfig::for_mdp(&mdp, beta, args.delta, args.episodes)?;
    let cmp = compare_planners(&state, &cfg, &mdp)?;
    let tol = 1e-9;
    let ge = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| {
        a.iter()
            .zip(b)
            .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| x >= &(y - tol)))
    };
    let verdicts = [
        ("rsvi_ge_rsvi2", ge(&cmp.rsvi, &cmp.rsvi2)),
        ("rsvi2_ge_rodi_mf", ge(&cmp.rsvi2, &cmp.rodi_mf)),
        ("rodi_mf_ge_rodi_mb", ge(&cmp.rodi_mf, &cmp.rodi_mb)),
        ("rodi_mb_ge_v_star", ge(&cmp.rodi_mb, &cmp.v_star)),
        ("rodi_otp_le_rodi_pto", ge(&cmp.rodi_pto, &cmp.rodi_otp)),
        ("rodi_pto_le_rsvi2", ge(&cmp.rsvi2, &cmp.rodi_pto)),
    ];
    let s0 = mdp.initial_state;
    let out = json!({
        "beta": args.beta,
        "v1": {
            "rsvi": cmp.rsvi[0][s0],
            "rsvi2": cmp.rsvi2[0][s0],
            "rodi-mf": cmp.rodi_mf[0][s0],
            "rodi-mb": cmp.rodi_mb[0][s0],
            "rodi-otp": cmp.rodi_otp[0][s0],
            "rodi-pto": cmp.rodi_pto[0][s0],
            "v_star": cmp.v_star[0][s0],
        },
        "chain": verdicts
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect::<serde_json::Map<_, _>>(),
        "chain_holds": verdicts.iter().all(|(_, v)| *v),
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let records = read_csv(&args.input)?;
    let agg = aggregate(&records)?;
    emit_plot(&agg, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Plan(a) => cmd_plan(a),
        Command::Run(a) => cmd_run(a),
        Command::GenMdp(a) => cmd_gen_mdp(a),
        Command::CompareValues(a) => cmd_compare_values(a),
        Command::Plot(a) => cmd_plot(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
