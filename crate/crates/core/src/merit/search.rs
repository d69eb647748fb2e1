//! Randomized search over generating matrices with uniform independent entries.
//!
//! Trial `t` draws its matrices from a ChaCha8 stream keyed by `(seed, t)`, so the
//! outcome does not depend on how trials are spread across worker threads.

use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basefield::{checked_pow, smallest_prime_factor};
use crate::error::{Error, Result};
use crate::nets::{generate_points, min_dual_weight, DualMode, GeneratingMatrices};
use crate::positions::WEIGHT_TOL;
use crate::weights::{vol, WeightSequence, DEFAULT_VOL_CAP};

use super::bounds::{lower_bound_n, BoundConstants, LogReal};
use super::wafom::wafom_pointwise;
use super::MeritReport;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// Smallest truncated dual sum.
    MinWafom,
    /// Largest minimal dual weight, succeeding once it reaches `M`.
    Delta(f64),
    /// Largest minimal dual weight, no threshold.
    MaxDelta,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-wafom" => Ok(Target::MinWafom),
            "max-delta" => Ok(Target::MaxDelta),
            _ => {
                let m = s
                    .strip_prefix("delta:")
                    .and_then(|m| m.parse::<f64>().ok())
                    .filter(|m| m.is_finite())
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "unknown target {s:?} (expected min-wafom, max-delta or delta:M)"
                        ))
                    })?;
                Ok(Target::Delta(m))
            }
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::MinWafom => write!(f, "min-wafom"),
            Target::MaxDelta => write!(f, "max-delta"),
            Target::Delta(m) => write!(f, "delta:{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub dim: usize,
    pub log_size: usize,
    pub precision: usize,
    pub weights: WeightSequence,
    pub target: Target,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub matrices: GeneratingMatrices,
    pub report: MeritReport,
    /// Index of the winning trial.
    pub trial: u64,
    pub target_met: bool,
    pub warnings: Vec<String>,
}

/// Matrices of trial `trial` under `seed`.
pub fn trial_matrices(b: u32, s: usize, l: usize, d: usize, seed: u64, trial: u64) -> Result<GeneratingMatrices> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    GeneratingMatrices::random(b, s, l, d, &mut rng)
}

/// Seed of grid cell `(s, d)` derived from a master seed.
pub fn cell_seed(master: u64, s: usize, d: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((s as u64) << 32) | d as u64);
    rng.next_u64()
}

/// Precision used by experiments: `d(d+1)/2 + 2` digits, capped so that digits stay
/// within double precision.
pub fn default_precision(d: usize, b: u32) -> usize {
    let cap = (52.0 / (b as f64).log2()).floor() as usize;
    (d * (d + 1) / 2 + 2).min(cap).max(d)
}

fn check_target(cfg: &SearchConfig, weights: &[f64], b: u32) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    if let Target::Delta(m) = cfg.target {
        let needed = m - weights[0] - 1.0;
        if (cfg.precision as f64) < needed - WEIGHT_TOL {
            return Err(Error::InvalidArgument(format!(
                "precision l = {} is below M - a_1 - 1 = {needed}",
                cfg.precision
            )));
        }
        let rho = smallest_prime_factor(b);
        let budget = checked_pow(rho, cfg.log_size).unwrap_or(u64::MAX);
        match vol(m, weights, b, DEFAULT_VOL_CAP) {
            Ok(v) if v <= budget => {}
            Ok(v) => warnings.push(format!(
                "vol({m}) = {v} exceeds rho_b^d = {budget}; success is not guaranteed"
            )),
            Err(_) => warnings.push(format!(
                "vol({m}) exceeds {DEFAULT_VOL_CAP}; success is not guaranteed"
            )),
        }
    }
    Ok(warnings)
}

/// Samples `trials` nets and keeps the best under the target criterion, ties going to
/// the lower trial index. Runs on the current rayon pool.
pub fn search_net(cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let b = cfg.weights.base() as u32;
    let (s, l, d) = (cfg.dim, cfg.precision, cfg.log_size);
    if s == 0 || d == 0 || d > l {
        return Err(Error::ShapeMismatch(format!("need s >= 1 and 1 <= d <= l, got s={s} d={d} l={l}")));
    }
    let weights = cfg.weights.walsh_weights(s)?;
    let warnings = check_target(cfg, &weights, b)?;
    trial_matrices(b, s, l, d, cfg.seed, 0)?.num_points()?;

    // lower key is better
    let score = |trial: u64| -> Result<f64> {
        let g = trial_matrices(b, s, l, d, cfg.seed, trial)?;
        match cfg.target {
            Target::MinWafom => wafom_pointwise(&generate_points(&g)?, &weights),
            Target::Delta(_) | Target::MaxDelta => {
                Ok(-min_dual_weight(&g, &weights, DualMode::Auto)?.delta)
            }
        }
    };
    let scores: Vec<f64> = (0..cfg.trials).into_par_iter().map(score).collect::<Result<_>>()?;
    let (trial, _) = scores
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1).then(x.0.cmp(&y.0)))
        .expect("at least one trial");
    let trial = trial as u64;
    let matrices = trial_matrices(b, s, l, d, cfg.seed, trial)?;
    let report = MeritReport::compute(&matrices, &cfg.weights)?;
    let target_met = match cfg.target {
        Target::Delta(m) => report.delta >= m - WEIGHT_TOL,
        Target::MinWafom | Target::MaxDelta => true,
    };
    Ok(SearchOutcome { matrices, report, trial, target_met, warnings })
}

/// One row of [`convergence_rate_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateRecord {
    pub dim: usize,
    pub log_size: usize,
    pub n: u64,
    pub seed: u64,
    pub delta: f64,
    pub wce_bound: LogReal,
    pub lower_bound: LogReal,
    /// `C̄ exp(-C''_s d^2)`.
    pub conv_target: LogReal,
    /// `C_bd exp(-C_help (log b)/2 d^{(2r+1)/(r+1)})`, for power rules with `a > 0`.
    pub trac_target: Option<LogReal>,
}

/// For each `(s, d)`: the best minimal dual weight found by random search, its error
/// bound, the lower bound at `n = b^d` and the two theoretical targets.
pub fn convergence_rate_table(
    seq: &WeightSequence,
    d_list: &[usize],
    s_list: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<RateRecord>> {
    let b = seq.base() as u32;
    let cells: Vec<(usize, usize)> =
        s_list.iter().flat_map(|&s| d_list.iter().map(move |&d| (s, d))).collect();
    cells
        .into_par_iter()
        .map(|(s, d)| {
            let cs = cell_seed(seed, s, d);
            let out = search_net(&SearchConfig {
                dim: s,
                log_size: d,
                precision: default_precision(d, b),
                weights: seq.clone(),
                target: Target::MaxDelta,
                trials,
                seed: cs,
            })?;
            let constants = BoundConstants::new(seq, s)?;
            let n = checked_pow(b, d).expect("net size checked by the search");
            Ok(RateRecord {
                dim: s,
                log_size: d,
                n,
                seed: cs,
                delta: out.report.delta,
                wce_bound: out.report.wce_bound,
                lower_bound: lower_bound_n(n, &seq.walsh_weights(s)?, b)?,
                conv_target: constants.conv_target(d),
                trac_target: constants.trac_target(d).ok(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::merit::Regime;

    fn cfg(target: Target, trials: u64, l: usize) -> SearchConfig {
        SearchConfig {
            dim: 1,
            log_size: 3,
            precision: l,
            weights: WeightSequence::parse("power:a=0,r=1,c=0", 2).unwrap(),
            target,
            trials,
            seed: 7,
        }
    }

    #[test]
    fn delta_target_example() {
        let out = search_net(&cfg(Target::Delta(3.0), 50, 8)).unwrap();
        assert!(out.target_met);
        assert!(out.report.delta >= 3.0);
        assert!(out.warnings.is_empty());
        assert_eq!(out.matrices.precision(), 8);
    }

    #[test]
    fn deterministic_under_seed() {
        let a = search_net(&cfg(Target::MinWafom, 1, 8)).unwrap();
        let b = search_net(&cfg(Target::MinWafom, 1, 8)).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = search_net(&cfg(Target::MinWafom, 20, 8)).unwrap();
        let single = pool.install(|| search_net(&cfg(Target::MinWafom, 20, 8))).unwrap();
        assert_eq!(many, single);
    }

    #[test]
    fn refusals() {
        assert!(search_net(&cfg(Target::MinWafom, 0, 8)).is_err());
        // M - a_1 - 1 = 5 > l = 4
        assert!(search_net(&cfg(Target::Delta(6.0), 5, 4)).is_err());
    }

    #[test]
    fn warns_when_volume_exceeds_budget() {
        let out = search_net(&cfg(Target::Delta(6.0), 5, 8)).unwrap();
        assert_eq!(out.warnings.len(), 1, "{:?}", out.warnings);
    }

    #[test]
    fn target_parsing() {
        for t in ["min-wafom", "max-delta", "delta:3", "delta:2.5"] {
            assert_eq!(t.parse::<Target>().unwrap().to_string(), t);
        }
        assert!("delta:x".parse::<Target>().is_err());
        assert!("best".parse::<Target>().is_err());
    }

    #[test]
    fn rate_rows_are_ordered() {
        let seq = WeightSequence::parse("power:a=1,r=1,c=0", 2).unwrap();
        let rows = convergence_rate_table(&seq, &[2, 3, 4, 5, 6], &[1, 2], 8, 3).unwrap();
        assert_eq!(rows.len(), 10);
        for r in &rows {
            assert!(r.lower_bound.ln() <= r.wce_bound.ln(), "{r:?}");
            assert!(r.trac_target.is_some());
        }
    }

    #[test]
    fn trac_rate_is_at_least_the_guaranteed_one() {
        let seq = WeightSequence::parse("power:a=1,r=1,c=0", 2).unwrap();
        let d_list = [2, 3, 4, 5, 6, 7, 8];
        for s in [1, 2] {
            let rows = convergence_rate_table(&seq, &d_list, &[s], 64, 7).unwrap();
            let constants = BoundConstants::new(&seq, s).unwrap();
            for r in &rows {
                assert!(r.delta >= constants.guaranteed_delta(r.log_size, Regime::Trac).unwrap());
            }
            let xs: Vec<f64> = rows.iter().map(|r| (r.log_size as f64).powf(1.5)).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r.wce_bound.ln()).collect();
            let (mx, my) = (xs.iter().sum::<f64>() / 7.0, ys.iter().sum::<f64>() / 7.0);
            let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
                / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
            let predicted = -constants.trac.unwrap().c_help * 2f64.ln() / 2.0;
            assert!(slope <= predicted, "s={s}: slope {slope} vs {predicted}");
        }
    }
}
