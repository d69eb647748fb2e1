//! Weight sequences, Dick weights, volume counting and the analytic
//! ingredients shared by the error bounds.
//!
//! Two kinds of sequences appear: Walsh-space weights `a_1 <= a_2 <= ...` that
//! enter the (modified) Dick weight directly, and smooth-space weights
//! `u_1 >= u_2 >= ... > 0` that bound mixed partial derivatives. The latter are
//! mapped to the former with [`embed_smooth_to_walsh`].
//!
//! Real weights are compared with a slack of `1e-9`; integer weights are exact.

use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::gamma;

use crate::basefield::{check_base, MultiIndex};
use crate::error::{Error, Result};
use crate::positions::{count_weighted_subsets, positions_up_to, WEIGHT_TOL};

/// Default refusal threshold for exact volume enumeration.
pub const DEFAULT_VOL_CAP: u64 = 100_000_000;

/// `log_b(x)`, exact for powers of two when `b = 2`.
pub fn log_base(x: f64, b: u32) -> f64 {
    x.log2() / (b as f64).log2()
}

/// Closed-form or explicit weight rule.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule {
    /// Walsh-space weights given term by term.
    Explicit(Vec<f64>),
    /// Walsh-space weights `a_j = a * j^r + c`.
    Power { a: f64, r: f64, c: f64 },
    /// Smooth-space weights `u_j = u0 * q^(j-1)`.
    SmoothPower { u0: f64, q: f64 },
    /// Smooth-space weights given term by term.
    SmoothExplicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Walsh,
    Smooth,
}

/// Parameters `(a, r, A)` with `a_j >= a * j^r` for all `j > A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracParams {
    pub a: f64,
    pub r: f64,
    pub big_a: usize,
}

/// Three-valued answer for properties that are only decidable for closed-form rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    base: u8,
    rule: WeightRule,
}

impl WeightSequence {
    pub fn new(rule: WeightRule, b: u32) -> Result<Self> {
        let base = check_base(b)?;
        validate(&rule)?;
        Ok(WeightSequence { base, rule })
    }

    /// Parses `explicit:0,0.5,1`, `power:a=1,r=1,c=0`, `smooth-power:u0=0.5,q=0.5`
    /// or `smooth-explicit:1,0.5,0.25`.
    pub fn parse(spec: &str, b: u32) -> Result<Self> {
        Self::new(spec.parse()?, b)
    }

    /// Constant sequence `a_j = value`.
    pub fn constant(value: f64, b: u32) -> Result<Self> {
        Self::new(WeightRule::Power { a: 0.0, r: 1.0, c: value }, b)
    }

    pub fn explicit(values: Vec<f64>, b: u32) -> Result<Self> {
        Self::new(WeightRule::Explicit(values), b)
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn rule(&self) -> &WeightRule {
        &self.rule
    }

    pub fn space(&self) -> Space {
        match self.rule {
            WeightRule::Explicit(_) | WeightRule::Power { .. } => Space::Walsh,
            WeightRule::SmoothPower { .. } | WeightRule::SmoothExplicit(_) => Space::Smooth,
        }
    }

    /// `j`-th term (1-based) of the sequence, whichever space it lives in.
    pub fn term(&self, j: usize) -> Result<f64> {
        if j == 0 {
            return Err(Error::InvalidArgument("weights are indexed from 1".into()));
        }
        match &self.rule {
            WeightRule::Explicit(v) | WeightRule::SmoothExplicit(v) => {
                v.get(j - 1).copied().ok_or_else(|| {
                    Error::WeightRule(format!("explicit sequence has {} terms, need {j}", v.len()))
                })
            }
            WeightRule::Power { a, r, c } => Ok(a * (j as f64).powf(*r) + c),
            WeightRule::SmoothPower { u0, q } => Ok(u0 * q.powi(j as i32 - 1)),
        }
    }

    /// First `s` terms.
    pub fn terms(&self, s: usize) -> Result<Vec<f64>> {
        (1..=s).map(|j| self.term(j)).collect()
    }

    /// First `s` Walsh-space weights; errors for smooth-space sequences.
    pub fn walsh_weights(&self, s: usize) -> Result<Vec<f64>> {
        if self.space() != Space::Walsh {
            return Err(Error::WeightRule(
                "smooth-space sequence used where Walsh weights are required".into(),
            ));
        }
        self.terms(s)
    }

    /// Tractability parameters `(a, r, A)`; only power rules with `a > 0` have them.
    /// A negative offset `c` is absorbed by halving `a` and raising `A`.
    pub fn trac_params(&self) -> Result<TracParams> {
        match self.rule {
            WeightRule::Power { a, r, c } if a > 0.0 && r > 0.0 => {
                if c >= 0.0 {
                    Ok(TracParams { a, r, big_a: 0 })
                } else {
                    // a j^r + c >= (a/2) j^r  iff  j^r >= -2c/a
                    let threshold = (-2.0 * c / a).powf(1.0 / r);
                    Ok(TracParams { a: a / 2.0, r, big_a: threshold.ceil() as usize })
                }
            }
            WeightRule::Power { .. } => Err(Error::Regime(
                "tractability bounds need a power rule with a > 0 and r > 0".into(),
            )),
            _ => Err(Error::Regime("tractability bounds need a closed-form power rule".into())),
        }
    }

    /// Whether `liminf a_j / j^r > 0` (Walsh) or `liminf log(1/u_j) / j^r > 0` (smooth).
    pub fn liminf_positive(&self, r: f64) -> Decision {
        match self.rule {
            WeightRule::Power { a, r: rr, .. } => {
                if a > 0.0 && rr >= r {
                    Decision::Yes
                } else {
                    Decision::No
                }
            }
            WeightRule::SmoothPower { q, .. } => {
                // log(1/u_j) grows linearly in j when q < 1
                if q < 1.0 && r <= 1.0 {
                    Decision::Yes
                } else {
                    Decision::No
                }
            }
            WeightRule::Explicit(_) | WeightRule::SmoothExplicit(_) => Decision::Unknown,
        }
    }

    /// `n_j = |{i >= 1 : i + a_j <= 1}|`.
    pub fn clamp_count(&self, j: usize) -> Result<usize> {
        Ok(clamp_count(self.term(j)?))
    }

    /// `(b-1) Σ_{j<=s} n_j`.
    pub fn clamp_sum(&self, s: usize) -> Result<f64> {
        let w = self.walsh_weights(s)?;
        Ok(clamp_sum(&w, self.base as u32))
    }

    /// `(b-1) Σ_{j>=1} n_j`; finite when `a_j` grows without bound.
    pub fn clamp_sum_infinite(&self) -> Result<f64> {
        let b1 = self.base as f64 - 1.0;
        match &self.rule {
            WeightRule::Power { a, .. } if *a > 0.0 => {
                let mut total = 0usize;
                let mut j = 1;
                loop {
                    let n = self.clamp_count(j)?;
                    if n == 0 {
                        break;
                    }
                    total += n;
                    j += 1;
                }
                Ok(b1 * total as f64)
            }
            WeightRule::Explicit(v) => {
                let total: usize = v.iter().map(|&a| clamp_count(a)).sum();
                Ok(b1 * total as f64)
            }
            _ => Err(Error::Regime(
                "clamp sum over all coordinates needs an unbounded power rule".into(),
            )),
        }
    }
}

fn validate(rule: &WeightRule) -> Result<()> {
    let finite = |x: f64| x.is_finite();
    match rule {
        WeightRule::Explicit(v) => {
            if v.is_empty() || !v.iter().all(|&x| finite(x)) {
                return Err(Error::WeightRule("explicit weights must be finite and non-empty".into()));
            }
            if v.windows(2).any(|w| w[1] < w[0]) {
                return Err(Error::WeightRule("Walsh weights must be non-decreasing".into()));
            }
        }
        WeightRule::Power { a, r, c } => {
            if !(finite(*a) && finite(*r) && finite(*c)) || *a < 0.0 || *r <= 0.0 {
                return Err(Error::WeightRule("power rule needs a >= 0, r > 0".into()));
            }
        }
        WeightRule::SmoothPower { u0, q } => {
            if !(finite(*u0) && finite(*q)) || *u0 <= 0.0 || *q <= 0.0 || *q > 1.0 {
                return Err(Error::WeightRule("smooth-power rule needs u0 > 0, 0 < q <= 1".into()));
            }
        }
        WeightRule::SmoothExplicit(v) => {
            if v.is_empty() || v.iter().any(|&x| !finite(x) || x <= 0.0) {
                return Err(Error::WeightRule("smooth weights must be positive".into()));
            }
            if v.windows(2).any(|w| w[1] > w[0]) {
                return Err(Error::WeightRule("smooth weights must be non-increasing".into()));
            }
        }
    }
    Ok(())
}

impl FromStr for WeightRule {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (kind, body) = spec
            .split_once(':')
            .ok_or_else(|| Error::WeightRule(format!("missing ':' in {spec:?}")))?;
        let list = |body: &str| -> Result<Vec<f64>> {
            body.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::WeightRule(format!("bad number {t:?}")))
                })
                .collect()
        };
        let params = |body: &str, names: &[&str]| -> Result<Vec<f64>> {
            let mut out = vec![None; names.len()];
            for kv in body.split(',') {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::WeightRule(format!("expected key=value, got {kv:?}")))?;
                let slot = names
                    .iter()
                    .position(|n| *n == k.trim())
                    .ok_or_else(|| Error::WeightRule(format!("unknown parameter {k:?}")))?;
                let v = v
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::WeightRule(format!("bad number {v:?}")))?;
                out[slot] = Some(v);
            }
            names
                .iter()
                .zip(out)
                .map(|(n, v)| v.ok_or_else(|| Error::WeightRule(format!("missing parameter {n}"))))
                .collect()
        };
        match kind.trim() {
            "explicit" => Ok(WeightRule::Explicit(list(body)?)),
            "smooth-explicit" => Ok(WeightRule::SmoothExplicit(list(body)?)),
            "power" => {
                let p = params(body, &["a", "r", "c"])?;
                Ok(WeightRule::Power { a: p[0], r: p[1], c: p[2] })
            }
            "smooth-power" => {
                let p = params(body, &["u0", "q"])?;
                Ok(WeightRule::SmoothPower { u0: p[0], q: p[1] })
            }
            other => Err(Error::WeightRule(format!("unknown rule kind {other:?}"))),
        }
    }
}

impl fmt::Display for WeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            WeightRule::Explicit(v) => write!(f, "explicit:{}", join(v)),
            WeightRule::SmoothExplicit(v) => write!(f, "smooth-explicit:{}", join(v)),
            WeightRule::Power { a, r, c } => write!(f, "power:a={a},r={r},c={c}"),
            WeightRule::SmoothPower { u0, q } => write!(f, "smooth-power:u0={u0},q={q}"),
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rule.fmt(f)
    }
}

fn clamp_count(a: f64) -> usize {
    let bound = 1.0 - a + WEIGHT_TOL;
    if bound < 1.0 {
        0
    } else {
        bound.floor() as usize
    }
}

/// `(b-1) Σ_j n_j` for explicit weights.
pub fn clamp_sum(weights: &[f64], b: u32) -> f64 {
    (b as f64 - 1.0) * weights.iter().map(|&a| clamp_count(a)).sum::<usize>() as f64
}

/// Constants of the Walsh-coefficient decay for functions in the smooth space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingConstants {
    /// `2 sin(π/b)`
    pub m_b: f64,
    /// `2 sin(⌊b/2⌋ π/b)`
    pub big_m_b: f64,
    /// `2` for `b = 2`, else `M_b + b m_b / (b - M_b)`
    pub c_b: f64,
}

impl EmbeddingConstants {
    pub fn new(b: u32) -> Self {
        let pi = std::f64::consts::PI;
        let bf = b as f64;
        let m_b = 2.0 * (pi / bf).sin();
        let big_m_b = 2.0 * ((b / 2) as f64 * pi / bf).sin();
        let c_b = if b == 2 { 2.0 } else { big_m_b + bf * m_b / (bf - big_m_b) };
        EmbeddingConstants { m_b, big_m_b, c_b }
    }
}

/// Number of nonzero base-b digits of `k`.
pub fn hamming_weight(k: u64, b: u32) -> usize {
    let b = b as u64;
    let mut rest = k;
    let mut count = 0;
    while rest > 0 {
        if !rest.is_multiple_of(b) {
            count += 1;
        }
        rest /= b;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DickVariant {
    /// `Σ (i + a_j)` over nonzero digits.
    Generalized,
    /// `Σ max(i + a_j, 1)` over nonzero digits.
    Modified,
}

/// Generalized or modified Dick weight of `k` under weights `a_1..a_s`.
pub fn dick_weight(k: &MultiIndex, weights: &[f64], variant: DickVariant) -> Result<f64> {
    if weights.len() < k.dim() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for a {}-dimensional index",
            weights.len(),
            k.dim()
        )));
    }
    let mut total = 0.0;
    for (kj, &a) in k.coords().iter().zip(weights) {
        for (i, &digit) in kj.digits().iter().enumerate() {
            if digit != 0 {
                let w = i as f64 + 1.0 + a;
                total += match variant {
                    DickVariant::Generalized => w,
                    DickVariant::Modified => w.max(1.0),
                };
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingVariant {
    /// `a'_j = -log_b(C_b u_j / m_b)`, norm factor 1.
    Loose,
    /// `a''_j = -log_b(u_j / m_b)`, norm factor `C_b^s`.
    Tight,
}

/// Walsh weights obtained from smooth-space weights, with the per-coordinate norm factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub weights: WeightSequence,
    pub coord_norm_factor: f64,
}

impl Embedding {
    /// Factor `κ` with `‖f‖_W <= κ ‖f‖_S` in dimension `s`.
    pub fn norm_factor(&self, s: usize) -> f64 {
        self.coord_norm_factor.powi(s as i32)
    }
}

/// Maps smooth-space weights `u` to Walsh-space weights. Geometric `u` yields a
/// linear power rule; explicit `u` yields an explicit list.
pub fn embed_smooth_to_walsh(u: &WeightSequence, variant: EmbeddingVariant) -> Result<Embedding> {
    let b = u.base() as u32;
    let k = EmbeddingConstants::new(b);
    let (scale, factor) = match variant {
        EmbeddingVariant::Loose => (k.c_b / k.m_b, 1.0),
        EmbeddingVariant::Tight => (1.0 / k.m_b, k.c_b),
    };
    let rule = match u.rule() {
        WeightRule::SmoothPower { u0, q } => {
            // -log_b(scale u0 q^{j-1}) = log_b(1/q) j - log_b(scale u0) - log_b(1/q)
            let slope = log_base(1.0 / q, b);
            WeightRule::Power { a: slope, r: 1.0, c: -log_base(scale * u0, b) - slope }
        }
        WeightRule::SmoothExplicit(v) => {
            WeightRule::Explicit(v.iter().map(|&x| -log_base(scale * x, b)).collect())
        }
        _ => {
            return Err(Error::WeightRule("embedding needs smooth-space weights u_j > 0".into()))
        }
    };
    Ok(Embedding { weights: WeightSequence::new(rule, b)?, coord_norm_factor: factor })
}

/// Factor `b^{Σ_j Σ_{i : i + a_j <= 1} (1 - (i + a_j))}` bounding the modified-weight
/// norm by the generalized-weight norm.
pub fn norm_equivalence_factor(weights: &[f64], b: u32) -> f64 {
    let exponent: f64 = weights
        .iter()
        .map(|&a| (1..=clamp_count(a)).map(|i| 1.0 - (i as f64 + a)).sum::<f64>())
        .sum();
    (b as f64).powf(exponent.max(0.0))
}

/// Exact `|{k ∈ N_0^s : μ̄_a(k) <= M}|`, refusing once the count exceeds `cap`.
pub fn vol(m: f64, weights: &[f64], b: u32, cap: u64) -> Result<u64> {
    check_base(b)?;
    if !m.is_finite() {
        return Err(Error::InvalidArgument("volume radius must be finite".into()));
    }
    if m < 1.0 {
        return Ok(1);
    }
    let positions = positions_up_to(weights, m, None);
    count_weighted_subsets(&positions, m, b, cap).ok_or(Error::EnumerationCap { cap })
}

/// `exp(Σ̄ + 2 sqrt((b-1) s M))`.
pub fn vol_bound_conv(m: f64, weights: &[f64], b: u32) -> f64 {
    let s = weights.len() as f64;
    (clamp_sum(weights, b) + 2.0 * ((b as f64 - 1.0) * s * m.max(0.0)).sqrt()).exp()
}

/// `C_vol = (b-1)(A + Γ(1/r) / (r a^{1/r})) + Σ̄_∞ + 1`.
pub fn c_vol(seq: &WeightSequence) -> Result<f64> {
    let TracParams { a, r, big_a } = seq.trac_params()?;
    let b1 = seq.base() as f64 - 1.0;
    Ok(b1 * (big_a as f64 + gamma(1.0 / r) / r * a.powf(-1.0 / r)) + seq.clamp_sum_infinite()? + 1.0)
}

/// `exp(C_vol M^{(r+1)/(2r+1)})`; independent of the dimension.
pub fn vol_bound_trac(m: f64, seq: &WeightSequence) -> Result<f64> {
    let r = seq.trac_params()?.r;
    Ok((c_vol(seq)? * m.max(0.0).powf((r + 1.0) / (2.0 * r + 1.0))).exp())
}

/// Compensated (Neumaier) sum.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn x_pow(x: f64, e: f64) -> f64 {
    if x < 0.0 {
        x.powi(e.round() as i32)
    } else {
        x.powf(e)
    }
}

/// Both sides of the power-series identity truncated to `k_j < b^l`:
/// `(Σ_k X^{μ(k)}, Π_j Π_{i<=l} (1 + (b-1) X^{w_{j,i}}))`, with `μ` the generalized
/// or modified Dick weight. The sum side walks nonzero-digit patterns, each
/// contributing `(b-1)^{|pattern|}` equal terms.
pub fn power_series_check(
    x: f64,
    weights: &[f64],
    b: u32,
    l: usize,
    variant: DickVariant,
) -> Result<(f64, f64)> {
    check_base(b)?;
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::InvalidArgument(format!("|X| = {} must be below 1", x.abs())));
    }
    let exps: Vec<f64> = weights
        .iter()
        .flat_map(|&a| {
            (1..=l).map(move |i| {
                let w = i as f64 + a;
                match variant {
                    DickVariant::Generalized => w,
                    DickVariant::Modified => w.max(1.0),
                }
            })
        })
        .collect();
    if x < 0.0 && exps.iter().any(|e| (e - e.round()).abs() > WEIGHT_TOL) {
        return Err(Error::InvalidArgument("negative X requires integer weights".into()));
    }
    if exps.len() > 24 {
        return Err(Error::Infeasible(format!("{} digit positions in the sum side", exps.len())));
    }
    let b1 = b as f64 - 1.0;
    let n = exps.len();
    let sum = neumaier_sum((0u32..1 << n).map(|mask| {
        let mut mu = 0.0;
        let mut count = 0;
        for (p, e) in exps.iter().enumerate() {
            if mask >> p & 1 == 1 {
                mu += e;
                count += 1;
            }
        }
        b1.powi(count) * x_pow(x, mu)
    }));
    let product = exps.iter().map(|&e| 1.0 + b1 * x_pow(x, e)).product();
    Ok((sum, product))
}

/// `(Σ_{j<=s} X^{a j^r}, Γ(1/r) / r * (a log(1/X))^{-1/r})`; the first never exceeds the second.
pub fn gamma_sum_bound_check(x: f64, s: usize, a: f64, r: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && x < 1.0) || a <= 0.0 || r <= 0.0 {
        return Err(Error::InvalidArgument("need 0 < X < 1, a > 0, r > 0".into()));
    }
    let sum = (1..=s).map(|j| x.powf(a * (j as f64).powf(r))).sum();
    let bound = gamma(1.0 / r) / r * (a * (1.0 / x).ln()).powf(-1.0 / r);
    Ok((sum, bound))
}

/// Upper bound on `|f̂(k)|` for `f` in the smooth space with norm `f_norm` and weights `u`.
pub fn walsh_decay_bound(f_norm: f64, k: &MultiIndex, u: &[f64], b: u32) -> Result<f64> {
    if u.len() < k.dim() || u.iter().any(|&x| x <= 0.0) {
        return Err(Error::InvalidArgument("need positive u_j for every coordinate".into()));
    }
    let consts = EmbeddingConstants::new(b);
    let zeros = vec![0.0; k.dim()];
    let mu0 = dick_weight(k, &zeros, DickVariant::Generalized)?;
    let mut bound = f_norm * (b as f64).powf(-mu0);
    for (kj, &uj) in k.coords().iter().zip(u) {
        let v = kj.hamming_weight();
        if v > 0 {
            bound *= (uj / consts.m_b).powi(v as i32) * consts.c_b;
        }
    }
    Ok(bound)
}
