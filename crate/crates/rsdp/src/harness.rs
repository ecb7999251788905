//! Multi-seed regret experiments: drives learners against an MDP, computes
//! per-episode EntRM regret via the exact planner, aggregates across seeds,
//! and emits CSV and SVG artifacts.
//!
//! (algorithm, seed) cells run in parallel; each episode draws from its own
//! counter-based stream keyed by (seed, episode), so results are
//! byte-identical regardless of thread count, and all algorithms see the same
//! environment randomness at a given seed.
//!
//! ```
//! use rsdp::algos::Algorithm;
//! use rsdp::dist::RiskParam;
//! use rsdp::harness::{aggregate, run_experiment, ExperimentConfig};
//! use rsdp::mdp::make_risky_mdp;
//!
//! let cfg = ExperimentConfig::new(
//!     make_risky_mdp(),
//!     vec![Algorithm::RodiMb, Algorithm::Ucbvi],
//!     RiskParam::new(-1.1).unwrap(),
//!     0.05,    // confidence level delta
//!     10,      // episodes per run
//!     vec![0, 1], // seeds
//! ).unwrap();
//! let records = run_experiment(&cfg).unwrap();
//! assert_eq!(records.len(), 2 * 2 * 10); // algo x seed x episode
//! let series = aggregate(&records).unwrap();
//! assert_eq!(series.len(), 2); // one mean/std curve per algorithm
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::algos::{plan, Algorithm, IotaMode, LearnerConfig, LearnerState, RadiusMode};
use crate::dist::RiskParam;
use crate::error::{Error, Result};
use crate::mdp::{simulate_episode, TabularMDP};
use crate::planner::{policy_eval, rs_ddp_scalar, DEFAULT_SUPPORT_CAP};
use crate::rng::episode_rng;

/// Everything one experiment needs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub mdp: TabularMDP,
    pub algorithms: Vec<Algorithm>,
    pub beta: RiskParam,
    pub delta: f64,
    pub episodes: usize,
    pub seeds: Vec<u64>,
    pub iota_mode: IotaMode,
    pub support_cap: usize,
    /// Worker threads for (algorithm, seed) cells; `None` uses all cores.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(
        mdp: TabularMDP,
        algorithms: Vec<Algorithm>,
        beta: RiskParam,
        delta: f64,
        episodes: usize,
        seeds: Vec<u64>,
    ) -> Result<Self> {
        let cfg = ExperimentConfig {
            mdp,
            algorithms,
            beta,
            delta,
            episodes,
            seeds,
            iota_mode: IotaMode::LogTwoSat,
            support_cap: DEFAULT_SUPPORT_CAP,
            threads: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.episodes < 1 {
            return Err(Error::invalid("need at least one episode"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("need at least one algorithm"));
        }
        let mut seen = self.seeds.clone();
        seen.sort_unstable();
        seen.dedup();
        if self.seeds.is_empty() || seen.len() != self.seeds.len() {
            return Err(Error::invalid("seeds must be nonempty and distinct"));
        }
        Ok(())
    }
}

/// One episode of one run: optimal value, deployed-policy value, and the gap.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretRecord {
    pub algo: Algorithm,
    pub seed: u64,
    pub episode: usize,
    pub v_star: f64,
    pub v_pik: f64,
    pub per_episode_regret: f64,
    pub cum_regret: f64,
}

fn run_cell(
    cfg: &ExperimentConfig,
    lcfg: &LearnerConfig,
    v_star: f64,
    algo: Algorithm,
    seed: u64,
) -> Result<Vec<RegretRecord>> {
    let mdp = &cfg.mdp;
    let mut state = LearnerState::new(mdp.num_states, mdp.num_actions, mdp.horizon);
    let mut cum = 0.0;
    let mut records = Vec::with_capacity(cfg.episodes);
    for k in 1..=cfg.episodes {
        let ctx = || format!("algo {}, seed {seed}, episode {k}", algo.id());
        let out = plan(algo, &state, lcfg, RadiusMode::Concentration)
            .map_err(|e| e.with_context(ctx()))?;
        let v_pik = policy_eval(mdp, &out.policy, cfg.beta)
            .map_err(|e| e.with_context(ctx()))?[0][mdp.initial_state];
        let per = v_star - v_pik;
        cum += per;
        records.push(RegretRecord {
            algo,
            seed,
            episode: k,
            v_star,
            v_pik,
            per_episode_regret: per,
            cum_regret: cum,
        });
        let mut rng = episode_rng(seed, k as u64);
        state.observe(&simulate_episode(mdp, &out.policy, &mut rng));
    }
    Ok(records)
}

/// Runs every (algorithm, seed) cell with a fresh learner and returns the
/// per-episode records, ordered by (algorithm list order, seed list order,
/// episode). Deterministic for a given config, independent of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RegretRecord>> {
    cfg.validate()?;
    let v_star = rs_ddp_scalar(&cfg.mdp, cfg.beta)?.v_star[0][cfg.mdp.initial_state];
    let mut lcfg = LearnerConfig::for_mdp(&cfg.mdp, cfg.beta, cfg.delta, cfg.episodes)?;
    lcfg.iota_mode = cfg.iota_mode;
    lcfg.support_cap = cfg.support_cap;
    let cells: Vec<(Algorithm, u64)> = cfg
        .algorithms
        .iter()
        .flat_map(|&a| cfg.seeds.iter().map(move |&s| (a, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let results: Vec<Result<Vec<RegretRecord>>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(algo, seed)| run_cell(cfg, &lcfg, v_star, algo, seed))
            .collect()
    });
    let mut records = Vec::with_capacity(cells.len() * cfg.episodes);
    for cell in results {
        records.extend(cell?);
    }
    Ok(records)
}

/// Mean and population standard deviation of cumulative regret across seeds,
/// per episode index, for one algorithm.
#[derive(Debug, Clone)]
pub struct AggregateSeries {
    pub algo: Algorithm,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// Aggregates records into per-algorithm mean/std curves. Algorithms are
/// ordered by id so the output is invariant to record order. Seeds must all
/// cover the same episode range.
pub fn aggregate(records: &[RegretRecord]) -> Result<Vec<AggregateSeries>> {
    use std::collections::BTreeMap;
    // (algo id, seed) -> episode-indexed cumulative regret
    let mut curves: BTreeMap<(&'static str, u64), Vec<(usize, f64)>> = BTreeMap::new();
    for r in records {
        curves
            .entry((r.algo.id(), r.seed))
            .or_default()
            .push((r.episode, r.cum_regret));
    }
    let mut by_algo: BTreeMap<&'static str, (Algorithm, Vec<Vec<f64>>)> = BTreeMap::new();
    let mut expected_len = None;
    for ((algo_id, _), mut curve) in curves {
        curve.sort_by_key(|&(k, _)| k);
        if curve.iter().enumerate().any(|(i, &(k, _))| k != i + 1) {
            return Err(Error::invalid(format!(
                "episode index gap in records for {algo_id}"
            )));
        }
        match expected_len {
            None => expected_len = Some(curve.len()),
            Some(len) if len != curve.len() => {
                return Err(Error::invalid(
                    "records mix different episode counts".to_string(),
                ))
            }
            _ => {}
        }
        let algo = Algorithm::parse(algo_id).expect("id round-trips");
        by_algo
            .entry(algo_id)
            .or_insert_with(|| (algo, Vec::new()))
            .1
            .push(curve.into_iter().map(|(_, v)| v).collect());
    }
    let mut out = Vec::new();
    for (_, (algo, seeds)) in by_algo {
        let k = seeds[0].len();
        let n = seeds.len() as f64;
        let mut mean = vec![0.0; k];
        let mut std = vec![0.0; k];
        for i in 0..k {
            let m: f64 = seeds.iter().map(|c| c[i]).sum::<f64>() / n;
            let var: f64 = seeds.iter().map(|c| (c[i] - m) * (c[i] - m)).sum::<f64>() / n;
            mean[i] = m;
            std[i] = var.sqrt();
        }
        out.push(AggregateSeries { algo, mean, std });
    }
    Ok(out)
}

fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// CSV header used by [`emit_csv`] and [`read_csv`].
pub const CSV_HEADER: &str = "algo,seed,episode,v_star,v_pik,per_episode_regret,cum_regret";

/// Renders records to CSV (12 significant digits, LF line endings).
pub fn csv_string(records: &[RegretRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.algo.id(),
            r.seed,
            r.episode,
            fmt_sig12(r.v_star),
            fmt_sig12(r.v_pik),
            fmt_sig12(r.per_episode_regret),
            fmt_sig12(r.cum_regret)
        );
    }
    out
}

pub fn emit_csv(records: &[RegretRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, csv_string(records)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a CSV produced by [`emit_csv`].
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<RegretRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != CSV_HEADER {
        return Err(Error::Parse {
            path: path.display().to_string(),
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.display().to_string(),
            message: format!("line {}: {message}", i + 2),
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(err(format!("expected 7 fields, got {}", fields.len())));
        }
        let algo = Algorithm::parse(fields[0])?;
        let parse_u = |f: &str| f.parse::<u64>().map_err(|e| err(e.to_string()));
        let parse_f = |f: &str| f.parse::<f64>().map_err(|e| err(e.to_string()));
        records.push(RegretRecord {
            algo,
            seed: parse_u(fields[1])?,
            episode: parse_u(fields[2])? as usize,
            v_star: parse_f(fields[3])?,
            v_pik: parse_f(fields[4])?,
            per_episode_regret: parse_f(fields[5])?,
            cum_regret: parse_f(fields[6])?,
        });
    }
    Ok(records)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn fmt_tick(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.abs() >= 1000.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.3}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    }
}

/// Renders aggregated curves as a self-contained SVG line chart with a
/// shaded +-1 std band per algorithm.
pub fn plot_svg(series: &[AggregateSeries]) -> String {
    let (width, height) = (960.0, 600.0);
    let (ml, mr, mt, mb) = (80.0, 170.0, 40.0, 60.0);
    let (pw, ph) = (width - ml - mr, height - mt - mb);
    let episodes = series.iter().map(|s| s.mean.len()).max().unwrap_or(0);
    let x_max = episodes.max(1) as f64;
    let mut y_max = 0.0f64;
    for s in series {
        for (m, sd) in s.mean.iter().zip(&s.std) {
            y_max = y_max.max(m + sd);
        }
    }
    if y_max <= 0.0 {
        y_max = 1.0;
    }
    y_max *= 1.05;
    let sx = |k: f64| ml + (k - 1.0) / (x_max - 1.0).max(1.0) * pw;
    let sy = |v: f64| mt + ph - v / y_max * ph;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"13\">\n\
         <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    );
    // axes and grid
    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let y = sy(v);
        let _ = write!(
            svg,
            "<line x1=\"{ml}\" y1=\"{y}\" x2=\"{:.2}\" y2=\"{y}\" stroke=\"#dddddd\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
            ml + pw,
            ml - 8.0,
            y + 4.0,
            fmt_tick(v)
        );
        let k = 1.0 + (x_max - 1.0) * i as f64 / 5.0;
        let x = sx(k);
        let _ = write!(
            svg,
            "<line x1=\"{x}\" y1=\"{mt}\" x2=\"{x}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>\n\
             <text x=\"{x}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
            mt + ph,
            mt + ph + 20.0,
            fmt_tick(k.round())
        );
    }
    let _ = write!(
        svg,
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{:.2}\" stroke=\"black\"/>\n\
         <line x1=\"{ml}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n\
         <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">episode</text>\n\
         <text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.2})\">mean cumulative regret</text>\n",
        mt + ph,
        mt + ph,
        ml + pw,
        mt + ph,
        ml + pw / 2.0,
        mt + ph + 42.0,
        mt + ph / 2.0,
        mt + ph / 2.0
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if s.mean.is_empty() {
            continue;
        }
        let mut band = String::new();
        for (j, (m, sd)) in s.mean.iter().zip(&s.std).enumerate() {
            let _ = write!(band, "{:.2},{:.2} ", sx(j as f64 + 1.0), sy((m + sd).min(y_max)));
        }
        for (j, (m, sd)) in s.mean.iter().zip(&s.std).enumerate().rev() {
            let _ = write!(band, "{:.2},{:.2} ", sx(j as f64 + 1.0), sy((m - sd).max(0.0)));
        }
        let _ = write!(
            svg,
            "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"none\"/>\n",
            band.trim_end()
        );
        let mut line = String::new();
        for (j, m) in s.mean.iter().enumerate() {
            let _ = write!(line, "{:.2},{:.2} ", sx(j as f64 + 1.0), sy(*m));
        }
        let _ = write!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            line.trim_end()
        );
        let ly = mt + 18.0 * i as f64 + 10.0;
        let _ = write!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"14\" height=\"4\" fill=\"{color}\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
            ml + pw + 16.0,
            ly - 2.0,
            ml + pw + 36.0,
            ly + 4.0,
            s.algo.id()
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_plot(series: &[AggregateSeries], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, plot_svg(series)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::make_risky_mdp;

    fn tiny_cfg() -> ExperimentConfig {
        ExperimentConfig::new(
            make_risky_mdp(),
            vec![Algorithm::Rovi, Algorithm::Ucbvi],
            RiskParam::new(-1.1).unwrap(),
            0.005,
            5,
            vec![0, 1],
        )
        .unwrap()
    }

    #[test]
    fn one_record_per_cell_and_episode() {
        let mut cfg = tiny_cfg();
        cfg.episodes = 1;
        let records = run_experiment(&cfg).unwrap();
        assert_eq!(records.len(), 2 * 2);
        for r in &records {
            assert_eq!(r.episode, 1);
            assert!(r.per_episode_regret >= -1e-9);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut cfg = tiny_cfg();
        cfg.threads = Some(1);
        let a = csv_string(&run_experiment(&cfg).unwrap());
        cfg.threads = Some(4);
        let b = csv_string(&run_experiment(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn regret_invariants_hold() {
        let records = run_experiment(&tiny_cfg()).unwrap();
        let mut last: std::collections::HashMap<(&str, u64), f64> = Default::default();
        for r in &records {
            assert!(r.per_episode_regret >= -1e-9);
            let prev = last.insert((r.algo.id(), r.seed), r.cum_regret);
            if let Some(p) = prev {
                assert!(r.cum_regret >= p - 1e-9);
            }
        }
    }

    #[test]
    fn aggregate_two_constant_curves() {
        let mk = |seed, cum: f64| RegretRecord {
            algo: Algorithm::Rovi,
            seed,
            episode: 1,
            v_star: 1.0,
            v_pik: 1.0 - cum,
            per_episode_regret: cum,
            cum_regret: cum,
        };
        let records = vec![mk(0, 2.0), mk(1, 4.0)];
        let agg = aggregate(&records).unwrap();
        assert_eq!(agg.len(), 1);
        assert!((agg[0].mean[0] - 3.0).abs() < 1e-12);
        assert!((agg[0].std[0] - 1.0).abs() < 1e-12);
        // order invariance
        let flipped = aggregate(&[records[1].clone(), records[0].clone()]).unwrap();
        assert_eq!(flipped[0].mean, agg[0].mean);
        // single seed: std 0
        let single = aggregate(&records[..1]).unwrap();
        assert_eq!(single[0].std, vec![0.0]);
    }

    #[test]
    fn aggregate_rejects_mixed_lengths() {
        let mk = |seed, episode| RegretRecord {
            algo: Algorithm::Rovi,
            seed,
            episode,
            v_star: 1.0,
            v_pik: 1.0,
            per_episode_regret: 0.0,
            cum_regret: 0.0,
        };
        let records = vec![mk(0, 1), mk(0, 2), mk(1, 1)];
        assert!(aggregate(&records).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let records = run_experiment(&tiny_cfg()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        emit_csv(&records, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert!(!text.contains('\r'));
        let back = read_csv(&path).unwrap();
        assert_eq!(back.len(), records.len());
        for (a, b) in back.iter().zip(&records) {
            assert_eq!(a.algo, b.algo);
            assert!((a.cum_regret - b.cum_regret).abs() < 1e-9);
        }
        // empty record list: header only
        emit_csv(&[], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), format!("{CSV_HEADER}\n"));
        assert!(read_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn plot_is_balanced_svg() {
        let records = run_experiment(&tiny_cfg()).unwrap();
        let svg = plot_svg(&aggregate(&records).unwrap());
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        // every tag closes: count self-closed + paired
        let opens = svg.matches('<').count();
        let closes = svg.matches('>').count();
        assert_eq!(opens, closes);
        assert!(svg.contains("rovi"));
        assert!(svg.contains("ucbvi"));
    }
}
