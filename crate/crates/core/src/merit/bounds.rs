//! Worst-case error bound constants and lower bounds.
//!
//! All quantities that can underflow are carried as natural logarithms in
//! [`LogReal`].

use std::fmt;

use crate::basefield::smallest_prime_factor;
use crate::error::{Error, Result};
use crate::weights::{c_vol, clamp_sum, WeightSequence};

/// Positive real stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogReal(pub f64);

impl LogReal {
    pub fn from_value(x: f64) -> Self {
        LogReal(x.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value();
        if self.0 == f64::NEG_INFINITY || (1e-4..1e16).contains(&v) {
            write!(f, "{v}")
        } else if v > 1e-300 {
            write!(f, "{v:e}")
        } else {
            write!(f, "exp({})", self.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Dimension-dependent constants; any weights.
    Conv,
    /// Dimension-independent constants; power-rule weights `a_j >= a j^r` for `j > A`.
    Trac,
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conv" => Ok(Regime::Conv),
            "trac" => Ok(Regime::Trac),
            other => Err(Error::Regime(format!("unknown regime {other:?} (expected conv or trac)"))),
        }
    }
}

/// Constants of the dimension-independent regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracConstants {
    pub r: f64,
    pub c_vol: f64,
    pub c_bd: f64,
    /// `((log ρ_b) / C_vol)^{(2r+1)/(r+1)}`
    pub c_help: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub s: usize,
    pub base: u32,
    pub rho_b: u32,
    /// `(b-1) Σ_{j<=s} n_j`
    pub sigma_bar: f64,
    /// `Σ̄ + 2 sqrt((b-1) s)`
    pub c_prime: f64,
    pub c_bar: f64,
    /// `(log ρ_b)^2 (log b) / (2 C'^2)`
    pub c_double_prime: f64,
    pub trac: Option<TracConstants>,
}

/// `exp(Σ̄ + (log b)/2 + 2(b-1)s/log b) / (1 - exp(-(log b)/2))`.
pub fn c_bar(weights: &[f64], b: u32) -> f64 {
    let lb = (b as f64).ln();
    let s = weights.len() as f64;
    (clamp_sum(weights, b) + lb / 2.0 + 2.0 * (b as f64 - 1.0) * s / lb).exp()
        / (1.0 - (-lb / 2.0).exp())
}

/// `exp((log b)/2 + C_vol r/(2r+1) (2 C_vol (r+1) / ((2r+1) log b))^{(r+1)/r}) / (1 - exp(-(log b)/2))`.
pub fn c_bd(c_vol: f64, r: f64, b: u32) -> f64 {
    let lb = (b as f64).ln();
    let inner = 2.0 * c_vol * (r + 1.0) / ((2.0 * r + 1.0) * lb);
    (lb / 2.0 + c_vol * r / (2.0 * r + 1.0) * inner.powf((r + 1.0) / r)).exp()
        / (1.0 - (-lb / 2.0).exp())
}

impl BoundConstants {
    /// Constants for the first `s` coordinates of a Walsh-space sequence. The
    /// dimension-independent block is filled in when the sequence admits it.
    pub fn new(seq: &WeightSequence, s: usize) -> Result<Self> {
        let b = seq.base() as u32;
        let weights = seq.walsh_weights(s)?;
        let rho = smallest_prime_factor(b);
        let sigma_bar = clamp_sum(&weights, b);
        let c_prime = sigma_bar + 2.0 * ((b as f64 - 1.0) * s as f64).sqrt();
        let lb = (b as f64).ln();
        let lrho = (rho as f64).ln();
        let trac = match seq.trac_params() {
            Ok(p) => {
                let cv = c_vol(seq)?;
                Some(TracConstants {
                    r: p.r,
                    c_vol: cv,
                    c_bd: c_bd(cv, p.r, b),
                    c_help: (lrho / cv).powf((2.0 * p.r + 1.0) / (p.r + 1.0)),
                })
            }
            Err(_) => None,
        };
        Ok(BoundConstants {
            s,
            base: b,
            rho_b: rho,
            sigma_bar,
            c_prime,
            c_bar: c_bar(&weights, b),
            c_double_prime: lrho * lrho * lb / (2.0 * c_prime * c_prime),
            trac,
        })
    }

    fn trac_or_err(&self) -> Result<TracConstants> {
        self.trac.ok_or_else(|| {
            Error::Regime("tractability regime needs a power rule with a > 0 and r > 0".into())
        })
    }

    /// Worst-case error bound `C exp(-δ (log b)/2)` with `C = C̄` or `C_bd`.
    pub fn wce_upper_bound(&self, delta: f64, regime: Regime) -> Result<LogReal> {
        let c = match regime {
            Regime::Conv => self.c_bar,
            Regime::Trac => self.trac_or_err()?.c_bd,
        };
        Ok(LogReal(c.ln() - delta * (self.base as f64).ln() / 2.0))
    }

    /// `C̄ exp(-C''_s d^2)`: guaranteed error for some net with `b^d` points.
    pub fn conv_target(&self, d: usize) -> LogReal {
        LogReal(self.c_bar.ln() - self.c_double_prime * (d * d) as f64)
    }

    /// `C_bd exp(-C_help (log b)/2 d^{(2r+1)/(r+1)})`.
    pub fn trac_target(&self, d: usize) -> Result<LogReal> {
        let t = self.trac_or_err()?;
        let lb = (self.base as f64).ln();
        let expo = (d as f64).powf((2.0 * t.r + 1.0) / (t.r + 1.0));
        Ok(LogReal(t.c_bd.ln() - t.c_help * lb / 2.0 * expo))
    }

    /// Dual weight that the existence argument guarantees for `b^d` points:
    /// `(d log ρ_b / C')^2` (conv) or `(d log ρ_b / C_vol)^{(2r+1)/(r+1)}` (trac).
    pub fn guaranteed_delta(&self, d: usize, regime: Regime) -> Result<f64> {
        let x = d as f64 * (self.rho_b as f64).ln();
        match regime {
            Regime::Conv => Ok((x / self.c_prime).powi(2)),
            Regime::Trac => {
                let t = self.trac_or_err()?;
                Ok((x / t.c_vol).powf((2.0 * t.r + 1.0) / (t.r + 1.0)))
            }
        }
    }
}

/// `b^{-Σ_j (d^2/2 + (a_j + 1/2) d)}`: lower bound on the minimal error for all `n < b^{s d}`.
pub fn lower_bound_box(d: usize, weights: &[f64], b: u32) -> Result<LogReal> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    if weights.iter().any(|&a| a < 0.0) {
        return Err(Error::InvalidArgument("box lower bound needs a_j >= 0".into()));
    }
    let d = d as f64;
    let expo: f64 = weights.iter().map(|&a| d * d / 2.0 + (a + 0.5) * d).sum();
    Ok(LogReal(-expo * (b as f64).ln()))
}

/// Lower bound on the n-th minimal worst-case error in dimension `s = weights.len()`:
/// `b^{-(log n)^2/(2s (log b)^2) - (3s/2 + Σa'_j)(log n)/(s log b) - (s + Σa'_j)}`, `a' = max(a, 0)`.
pub fn lower_bound_n(n: u64, weights: &[f64], b: u32) -> Result<LogReal> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let s = weights.len() as f64;
    let sum_pos: f64 = weights.iter().map(|&a| a.max(0.0)).sum();
    let ln_n = (n as f64).ln();
    let lb = (b as f64).ln();
    let expo = -ln_n * ln_n / (2.0 * s * lb * lb) - (1.5 * s + sum_pos) * ln_n / (s * lb) - (s + sum_pos);
    Ok(LogReal(expo * lb))
}

/// Illustrates that no dimension-independent rate `exp(-c (log n)^2)` exists: returns the
/// smallest `s` with `1/(2 s log b) < c`, i.e. the dimension at which the lower bound
/// decays more slowly than the candidate rate.
pub fn p2_counterexample_dimension(c: f64, b: u32) -> Result<usize> {
    if c <= 0.0 {
        return Err(Error::InvalidArgument("rate constant must be positive".into()));
    }
    let lb = (b as f64).ln();
    let mut s = (1.0 / (2.0 * c * lb)).floor().max(1.0) as usize;
    while 1.0 / (2.0 * s as f64 * lb) >= c {
        s += 1;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_rule(b: u32) -> WeightSequence {
        WeightSequence::parse("power:a=0,r=1,c=0", b).unwrap()
    }

    #[test]
    fn c_bar_single_coordinate() {
        let k = BoundConstants::new(&zero_rule(2), 1).unwrap();
        let l2 = 2f64.ln();
        let want = (1.0 + l2 / 2.0 + 2.0 / l2).exp() / (1.0 - 0.5f64.sqrt());
        assert!((k.c_bar - want).abs() < 1e-12 * want);
        let bound = k.wce_upper_bound(0.0, Regime::Conv).unwrap();
        assert!((bound.value() - want).abs() < 1e-12 * want);
        assert!(k.trac.is_none());
    }

    #[test]
    fn bound_halves_per_two_units() {
        let k = BoundConstants::new(&zero_rule(3), 2).unwrap();
        let a = k.wce_upper_bound(5.0, Regime::Conv).unwrap().value();
        let b = k.wce_upper_bound(7.0, Regime::Conv).unwrap().value();
        assert!((b / a - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn trac_requires_power_rule() {
        let k = BoundConstants::new(&zero_rule(2), 3).unwrap();
        assert!(k.wce_upper_bound(1.0, Regime::Trac).is_err());
        assert!(k.trac_target(3).is_err());
    }

    #[test]
    fn lower_box_examples() {
        assert!((lower_bound_box(1, &[0.0], 2).unwrap().value() - 0.5).abs() < 1e-15);
        assert!((lower_bound_box(1, &[0.0, 0.0], 2).unwrap().value() - 0.25).abs() < 1e-15);
        assert!((lower_bound_box(2, &[1.0], 2).unwrap().value() - 2f64.powi(-5)).abs() < 1e-16);
        assert!(lower_bound_box(1, &[-0.5], 2).is_err());
        assert!(lower_bound_box(0, &[0.0], 2).is_err());
    }

    #[test]
    fn lower_n_examples() {
        assert!((lower_bound_n(1, &[0.0], 2).unwrap().value() - 0.5).abs() < 1e-15);
        assert!(lower_bound_n(0, &[0.0], 2).is_err());
        let mut prev = f64::INFINITY;
        for n in 1..2000 {
            let v = lower_bound_n(n, &[0.0, 1.0, 2.0], 3).unwrap().ln();
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn p2_illustration() {
        for c in [1.0, 0.1, 1e-3] {
            let s = p2_counterexample_dimension(c, 2).unwrap();
            assert!(1.0 / (2.0 * s as f64 * 2f64.ln()) < c);
            assert!(s == 1 || 1.0 / (2.0 * (s - 1) as f64 * 2f64.ln()) >= c);
        }
    }

    #[test]
    fn log_real_display() {
        assert_eq!(LogReal::from_value(0.25).to_string(), "0.25");
        assert_eq!(LogReal(-1000.0).to_string(), "exp(-1000)");
        let small = LogReal::from_value(1.5e-7).to_string();
        assert!(small.ends_with("e-7"), "{small}");
        assert!((small.parse::<f64>().unwrap() / 1.5e-7 - 1.0).abs() < 1e-14);
    }
}
