//! QMC evaluation over digital nets, closed-form test integrands and convergence
//! experiments.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::basefield::{checked_pow, MultiIndex};
use crate::error::{Error, Result};
use crate::merit::{
    cell_seed, default_precision, lower_bound_n, search_net, tail_sum, wafom_pointwise, BoundConstants,
    LogReal, Regime, SearchConfig, Target,
};
use crate::nets::{generate_points, min_dual_weight, DigitalNet, DualMode, GeneratingMatrices};
use crate::walsh::walsh_eval;
use crate::weights::{
    dick_weight, embed_smooth_to_walsh, neumaier_sum, norm_equivalence_factor, DickVariant,
    EmbeddingVariant, Space, WeightSequence,
};

/// Closed-form integrands on `[0,1)^s`.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `Π_j exp(c_j x_j)`.
    ExpLinear(Vec<f64>),
    /// `Π_j (1 + c_j cos(2π x_j))`.
    Cosine(Vec<f64>),
    /// `Re wal_k`.
    WalshPure(MultiIndex),
}

/// Function space in which a norm certificate is requested.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpace {
    /// Smooth space with weights `u_j` (a smooth-space [`WeightSequence`]).
    Smooth(WeightSequence),
    /// Walsh space with modified Dick weights (a Walsh-space [`WeightSequence`]).
    WalshBar(WeightSequence),
}

fn expm1_over(c: f64) -> f64 {
    if c == 0.0 {
        1.0
    } else {
        c.exp_m1() / c
    }
}

impl TestFunction {
    pub fn dim(&self) -> usize {
        match self {
            TestFunction::ExpLinear(c) | TestFunction::Cosine(c) => c.len(),
            TestFunction::WalshPure(k) => k.dim(),
        }
    }

    pub fn exact_integral(&self) -> f64 {
        match self {
            TestFunction::ExpLinear(c) => c.iter().map(|&cj| expm1_over(cj)).product(),
            TestFunction::Cosine(_) => 1.0,
            TestFunction::WalshPure(k) => {
                if k.is_zero() {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Value at point `n` of the net; Walsh integrands use the exact digits.
    fn eval_at(&self, net: &DigitalNet, n: usize) -> Result<f64> {
        match self {
            TestFunction::ExpLinear(c) => {
                let x = net.point_f64(n);
                Ok(c.iter().zip(&x).map(|(cj, xj)| cj * xj).sum::<f64>().exp())
            }
            TestFunction::Cosine(c) => {
                let x = net.point_f64(n);
                Ok(c.iter()
                    .zip(&x)
                    .map(|(cj, xj)| 1.0 + cj * (std::f64::consts::TAU * xj).cos())
                    .product())
            }
            TestFunction::WalshPure(k) => Ok(walsh_eval(k, &net.point(n))?.to_complex().re),
        }
    }

    /// Upper bound on the norm of `f` in `space`, when one is known.
    ///
    /// - exp-linear in the smooth space: `‖f^{(α)}‖_1 = Π |c_j|^{α_j} ∫f`, so the norm is
    ///   `∫f` once `|c_j| <= u_j`;
    /// - cosine in the smooth space: `Π (1 + |c_j|)` once `u_j >= 2π` wherever `c_j ≠ 0`;
    /// - `Re wal_k` in the Walsh space: `b^{μ̄_a(k)}`.
    pub fn norm_certificate(&self, space: &NormSpace) -> Result<Option<f64>> {
        let (seq, wanted) = match space {
            NormSpace::Smooth(u) => (u, Space::Smooth),
            NormSpace::WalshBar(a) => (a, Space::Walsh),
        };
        if seq.space() != wanted {
            return Err(Error::WeightRule("weight sequence does not match the norm space".into()));
        }
        let s = self.dim();
        match (self, space) {
            (TestFunction::ExpLinear(c), NormSpace::Smooth(u)) => {
                let u = u.terms(s)?;
                Ok(c.iter().zip(&u).all(|(cj, uj)| cj.abs() <= *uj).then(|| self.exact_integral()))
            }
            (TestFunction::Cosine(c), NormSpace::Smooth(u)) => {
                let u = u.terms(s)?;
                let ok = c.iter().zip(&u).all(|(cj, uj)| *cj == 0.0 || *uj >= std::f64::consts::TAU);
                Ok(ok.then(|| c.iter().map(|cj| 1.0 + cj.abs()).product()))
            }
            (TestFunction::WalshPure(k), NormSpace::WalshBar(a)) => {
                let b = k.base().unwrap_or(a.base()) as f64;
                let mu = dick_weight(k, &a.walsh_weights(s)?, DickVariant::Modified)?;
                Ok(Some(b.powf(mu)))
            }
            _ => Ok(None),
        }
    }
}

/// Equal-weight average of `f` over the net.
pub fn qmc(net: &DigitalNet, f: &TestFunction) -> Result<f64> {
    if f.dim() != net.dim() {
        return Err(Error::ShapeMismatch(format!(
            "integrand of dimension {} on a net of dimension {}",
            f.dim(),
            net.dim()
        )));
    }
    let values = (0..net.len()).map(|n| f.eval_at(net, n)).collect::<Result<Vec<_>>>()?;
    Ok(neumaier_sum(values) / net.len() as f64)
}

/// Observed error and the certified bound `‖f‖ (wafom + tail)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorCheck {
    pub empirical: f64,
    pub certified: f64,
}

impl ErrorCheck {
    pub fn holds(&self) -> bool {
        self.empirical <= self.certified
    }
}

/// Walsh weights for a norm space: smooth weights go through the loose embedding.
/// Returns the weights and the factor turning the space norm into a bound on the
/// modified-weight Walsh norm.
pub fn walsh_weights_for(space: &NormSpace, s: usize) -> Result<(WeightSequence, f64)> {
    match space {
        NormSpace::Smooth(u) => {
            let e = embed_smooth_to_walsh(u, EmbeddingVariant::Loose)?;
            let a = e.weights.walsh_weights(s)?;
            let factor = e.norm_factor(s) * norm_equivalence_factor(&a, u.base() as u32);
            Ok((e.weights, factor))
        }
        NormSpace::WalshBar(a) => Ok((a.clone(), 1.0)),
    }
}

pub fn error_vs_bound(g: &GeneratingMatrices, f: &TestFunction, space: &NormSpace) -> Result<ErrorCheck> {
    let cert = f
        .norm_certificate(space)?
        .ok_or_else(|| Error::InvalidArgument("integrand has no norm certificate in this space".into()))?;
    let net = generate_points(g)?;
    let s = g.dim();
    let (seq, factor) = walsh_weights_for(space, s)?;
    let a = seq.walsh_weights(s)?;
    let wafom = wafom_pointwise(&net, &a)?;
    let tail = tail_sum(&a, g.base() as u32, g.precision()).value();
    Ok(ErrorCheck {
        empirical: (qmc(&net, f)? - f.exact_integral()).abs(),
        certified: cert * factor * (wafom + tail),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    ExpLinear,
    Cosine,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp-linear" => Ok(Family::ExpLinear),
            "cosine" => Ok(Family::Cosine),
            other => Err(Error::InvalidArgument(format!(
                "unknown family {other:?} (expected exp-linear or cosine)"
            ))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::ExpLinear => "exp-linear",
            Family::Cosine => "cosine",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub dim: usize,
    pub n: u64,
    pub log_size: usize,
    pub seed: u64,
    pub delta: f64,
    pub wafom: f64,
    pub empirical: f64,
    /// `None` when the integrand has no norm certificate.
    pub certified: Option<f64>,
    pub lower_bound: LogReal,
    pub wce_bound: LogReal,
}

pub const CONVERGENCE_CSV_HEADER: &str = "s,n,d,seed,delta,wafom,empirical,certified,lower_bound";

impl ConvergenceRecord {
    pub fn to_csv_row(&self) -> String {
        let certified = self.certified.map_or(String::new(), |c| format!("{c:.16e}"));
        format!(
            "{},{},{},{},{:.16e},{:.16e},{:.16e},{},{:.16e}",
            self.dim,
            self.n,
            self.log_size,
            self.seed,
            self.delta,
            self.wafom,
            self.empirical,
            certified,
            self.lower_bound.value(),
        )
    }
}

pub fn to_csv(records: &[ConvergenceRecord]) -> String {
    let mut out = String::from(CONVERGENCE_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.to_csv_row());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Smooth-space weights `u`; the integrand uses `c_j = u_j`.
    pub smooth_weights: WeightSequence,
    pub s_list: Vec<usize>,
    pub d_list: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
}

/// For every `(s, d)`: search a net minimizing the truncated dual sum for the embedded
/// weights, integrate the test function and record error, certificate and lower bound.
/// Cells run in parallel; each is a pure function of `(config, s, d)`.
pub fn convergence_experiment(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    let u = &cfg.smooth_weights;
    if u.space() != Space::Smooth {
        return Err(Error::WeightRule("experiments need smooth-space weights u".into()));
    }
    let b = u.base() as u32;
    let cells: Vec<(usize, usize)> = cfg
        .s_list
        .iter()
        .flat_map(|&s| cfg.d_list.iter().map(move |&d| (s, d)))
        .collect();
    cells.into_par_iter().map(|(s, d)| run_cell(cfg, s, d, b)).collect()
}

fn run_cell(cfg: &ExperimentConfig, s: usize, d: usize, b: u32) -> Result<ConvergenceRecord> {
    let u = &cfg.smooth_weights;
    let space = NormSpace::Smooth(u.clone());
    let (walsh_seq, factor) = walsh_weights_for(&space, s)?;
    let a = walsh_seq.walsh_weights(s)?;
    let seed = cell_seed(cfg.seed, s, d);
    let out = search_net(&SearchConfig {
        dim: s,
        log_size: d,
        precision: default_precision(d, b),
        weights: walsh_seq.clone(),
        target: Target::MinWafom,
        trials: cfg.trials,
        seed,
    })?;
    let coeffs = u.terms(s)?;
    let f = match cfg.family {
        Family::ExpLinear => TestFunction::ExpLinear(coeffs),
        Family::Cosine => TestFunction::Cosine(coeffs),
    };
    let net = generate_points(&out.matrices)?;
    let empirical = (qmc(&net, &f)? - f.exact_integral()).abs();
    let certified = f
        .norm_certificate(&space)?
        .map(|cert| cert * factor * out.report.dual_sum_bound());
    let delta = min_dual_weight(&out.matrices, &a, DualMode::Auto)?.delta;
    let n = checked_pow(b, d).expect("net size checked by the search");
    Ok(ConvergenceRecord {
        dim: s,
        n,
        log_size: d,
        seed,
        delta,
        wafom: out.report.truncated_wafom,
        empirical,
        certified,
        lower_bound: lower_bound_n(n, &a, b)?,
        wce_bound: BoundConstants::new(&walsh_seq, s)?.wce_upper_bound(delta, Regime::Conv)?,
    })
}

/// Least-squares line with its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LineFit { slope, intercept: my - slope * mx, r_squared })
}

/// Errors at or below this are treated as floating-point noise.
pub const ERROR_FLOOR: f64 = 1e-15;

/// Fit of `ln(empirical)` against `d^2` over the rows of dimension `s` above `floor`.
pub fn fit_log_error_vs_d2(records: &[ConvergenceRecord], s: usize, floor: f64) -> Option<LineFit> {
    let rows: Vec<&ConvergenceRecord> =
        records.iter().filter(|r| r.dim == s && r.empirical > floor).collect();
    let xs: Vec<f64> = rows.iter().map(|r| (r.log_size * r.log_size) as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.empirical.ln()).collect();
    fit_line(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::MatrixZb;

    fn single(b: u32, rows: &[Vec<u8>]) -> GeneratingMatrices {
        GeneratingMatrices::new(vec![MatrixZb::from_rows(b, rows).unwrap()]).unwrap()
    }

    #[test]
    fn constant_integrand_is_exact() {
        let net = generate_points(&GeneratingMatrices::identity(2, 2, 3, 3).unwrap()).unwrap();
        let f = TestFunction::ExpLinear(vec![0.0, 0.0]);
        assert_eq!(qmc(&net, &f).unwrap(), 1.0);
        assert_eq!(f.exact_integral(), 1.0);
    }

    #[test]
    fn walsh_witnesses() {
        let g = single(2, &[vec![1], vec![0]]);
        let net = generate_points(&g).unwrap();
        let k = |v| TestFunction::WalshPure(MultiIndex::from_integers(&[v], 2, 2).unwrap());
        // k = 1 is not dual, k = 2 is
        assert_eq!(qmc(&net, &k(1)).unwrap(), 0.0);
        assert_eq!(qmc(&net, &k(2)).unwrap(), 1.0);

        let a = WeightSequence::parse("power:a=0,r=1,c=0", 2).unwrap();
        let check = error_vs_bound(&g, &k(2), &NormSpace::WalshBar(a)).unwrap();
        assert_eq!(check.empirical, 1.0);
        assert!(check.certified >= 1.0);
    }

    #[test]
    fn exp_linear_certificate() {
        let u = WeightSequence::parse("smooth-explicit:0.5", 2).unwrap();
        let f = TestFunction::ExpLinear(vec![0.5]);
        let cert = f.norm_certificate(&NormSpace::Smooth(u.clone())).unwrap().unwrap();
        assert!((cert - 2.0 * 0.5f64.exp_m1()).abs() < 1e-15);
        let too_big = TestFunction::ExpLinear(vec![0.6]);
        assert_eq!(too_big.norm_certificate(&NormSpace::Smooth(u.clone())).unwrap(), None);
        for rows in [vec![vec![1], vec![0], vec![1]], vec![vec![0, 1], vec![1, 1], vec![1, 0]]] {
            let g = single(2, &rows);
            let check = error_vs_bound(&g, &f, &NormSpace::Smooth(u.clone())).unwrap();
            assert!(check.holds(), "{check:?}");
        }
    }

    #[test]
    fn cosine_certificate_needs_wide_weights() {
        let f = TestFunction::Cosine(vec![0.3]);
        let narrow = WeightSequence::parse("smooth-explicit:1", 2).unwrap();
        assert_eq!(f.norm_certificate(&NormSpace::Smooth(narrow)).unwrap(), None);
        let wide = WeightSequence::parse("smooth-explicit:7", 2).unwrap();
        assert_eq!(f.norm_certificate(&NormSpace::Smooth(wide)).unwrap(), Some(1.3));
    }

    #[test]
    fn exp_linear_integral_matches_grid() {
        // midpoint rule on 2^16 cells per axis
        let c = [0.7, -0.4];
        let m = 1 << 16;
        let h = 1.0 / m as f64;
        let one_d = |cj: f64| neumaier_sum((0..m).map(|i| (cj * (i as f64 + 0.5) * h).exp())) * h;
        let grid: f64 = c.iter().map(|&cj| one_d(cj)).product();
        let exact = TestFunction::ExpLinear(c.to_vec()).exact_integral();
        assert!((grid - exact).abs() < 1e-10);
    }

    #[test]
    fn full_grid_net_integrates_cell_constants() {
        let net = generate_points(&GeneratingMatrices::identity(2, 1, 4, 4).unwrap()).unwrap();
        // wal_k with k < 16 is constant on cells of length 1/16
        for v in 1..16 {
            let f = TestFunction::WalshPure(MultiIndex::from_integers(&[v], 2, 4).unwrap());
            assert_eq!(qmc(&net, &f).unwrap(), 0.0);
        }
    }

    #[test]
    fn line_fit() {
        let fit = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-15 && (fit.intercept - 1.0).abs() < 1e-15);
        assert!((fit.r_squared - 1.0).abs() < 1e-15);
        assert!(fit_line(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn csv_layout() {
        let cfg = ExperimentConfig {
            family: Family::ExpLinear,
            smooth_weights: WeightSequence::parse("smooth-power:u0=0.5,q=0.5", 2).unwrap(),
            s_list: vec![1, 2],
            d_list: vec![2, 3],
            trials: 4,
            seed: 1,
        };
        let rows = convergence_experiment(&cfg).unwrap();
        let csv = to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CONVERGENCE_CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 9));
    }
}
