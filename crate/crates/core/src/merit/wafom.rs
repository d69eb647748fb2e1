//! Truncated dual sums `Σ_{k ∈ P^⊥ ∩ [0, b^l)^s, k ≠ 0} b^{-μ̄_a(k)}` and the tail outside the box.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::nets::{enumerate_dual, min_dual_weight, DigitalNet, DualMode, GeneratingMatrices};
use crate::nets::dual::{kernel_dual_sum, resolve_mode};
use crate::positions::{modified_cost, WEIGHT_TOL};
use crate::weights::{log_base, neumaier_sum};

use super::bounds::LogReal;

/// Largest `log2(b^E)` handled by the exact integer route of [`wafom_pointwise`].
pub const EXACT_BITS_LIMIT: f64 = 1024.0;

/// Result of the dual enumeration route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSum {
    pub value: f64,
    /// Number of dual elements summed.
    pub terms: usize,
    /// Weight cap of the enumeration; `None` when the whole box was walked.
    pub weight_cap: Option<f64>,
}

fn check_len(s: usize, weights: &[f64]) -> Result<()> {
    if weights.len() < s {
        return Err(Error::ShapeMismatch(format!("{} weights for {s} coordinates", weights.len())));
    }
    Ok(())
}

/// Truncated dual sum by enumeration. Small duals are walked completely, kernels up to
/// [`DUAL_STREAM_LIMIT`](crate::nets::DUAL_STREAM_LIMIT) are summed by streaming; otherwise the
/// walk stops at `min weight + 16 log_b 10`, dropping terms below `10^-16 b^{-min weight}`.
pub fn wafom_dual(g: &GeneratingMatrices, weights: &[f64], mode: DualMode) -> Result<DualSum> {
    check_len(g.dim(), weights)?;
    let b = g.base() as u32;
    let resolved = resolve_mode(g, mode)?;
    if matches!(mode, DualMode::Auto | DualMode::Kernel) && resolved != DualMode::BruteForce {
        if let Some((value, terms)) = kernel_dual_sum(g, weights)? {
            return Ok(DualSum { value, terms: terms as usize, weight_cap: None });
        }
    }
    let weight_cap = match resolved {
        DualMode::WeightOrdered => {
            let dw = min_dual_weight(g, weights, DualMode::WeightOrdered)?;
            let lightest = dw.delta_truncated.unwrap_or(dw.floor);
            Some(lightest + 16.0 * log_base(10.0, b))
        }
        _ => None,
    };
    let elements = enumerate_dual(g, weight_cap.unwrap_or(f64::INFINITY), weights, resolved)?;
    let bf = b as f64;
    // smallest terms first
    let value = neumaier_sum(elements.iter().rev().map(|e| bf.powf(-e.weight)));
    Ok(DualSum { value, terms: elements.len(), weight_cap })
}

/// Exponents `max(i + a_j, 1)` for `i = 1..=l`, coordinate-major.
fn exponents(weights: &[f64], s: usize, l: usize) -> Vec<f64> {
    weights[..s]
        .iter()
        .flat_map(|&a| (0..l).map(move |i| modified_cost(i, a)))
        .collect()
}

fn integer_exponents(exps: &[f64]) -> Option<Vec<u32>> {
    exps.iter()
        .map(|&e| {
            let r = e.round();
            ((e - r).abs() <= WEIGHT_TOL && r >= 1.0 && r <= u32::MAX as f64).then_some(r as u32)
        })
        .collect()
}

/// `-1 + (1/|P|) Σ_x Π_{j,i} (1 + b^{-max(i+a_j,1)} (b [ξ_{j,i} = 0] - 1))`.
///
/// Integer weights with a modest total exponent are evaluated in exact integer
/// arithmetic; everything else goes through [`wafom_pointwise_f64`].
pub fn wafom_pointwise(net: &DigitalNet, weights: &[f64]) -> Result<f64> {
    check_len(net.dim(), weights)?;
    let exps = exponents(weights, net.dim(), net.precision());
    if let Some(ints) = integer_exponents(&exps) {
        let bits = ints.iter().map(|&e| e as f64).sum::<f64>() * (net.base() as f64).log2();
        if bits <= EXACT_BITS_LIMIT {
            return Ok(exact_pointwise(net, &ints));
        }
    }
    Ok(float_pointwise(net, &exps))
}

/// Floating-point route: per-point `expm1(Σ log1p(..))`, compensated mean.
pub fn wafom_pointwise_f64(net: &DigitalNet, weights: &[f64]) -> Result<f64> {
    check_len(net.dim(), weights)?;
    Ok(float_pointwise(net, &exponents(weights, net.dim(), net.precision())))
}

fn float_pointwise(net: &DigitalNet, exps: &[f64]) -> f64 {
    let b = net.base() as f64;
    let l = net.precision();
    let ln_zero: Vec<f64> = exps.iter().map(|&e| ((b - 1.0) * b.powf(-e)).ln_1p()).collect();
    let ln_other: Vec<f64> = exps.iter().map(|&e| (-b.powf(-e)).ln_1p()).collect();
    let per_point = (0..net.len()).map(|n| {
        let mut acc = 0.0;
        for j in 0..net.dim() {
            for (i, &xi) in net.point_digits(n, j).iter().enumerate() {
                let p = j * l + i;
                acc += if xi == 0 { ln_zero[p] } else { ln_other[p] };
            }
        }
        acc.exp_m1()
    });
    neumaier_sum(per_point) / net.len() as f64
}

fn exact_pointwise(net: &DigitalNet, exps: &[u32]) -> f64 {
    let b = net.base() as u32;
    let l = net.precision();
    let powers: Vec<BigInt> = exps.iter().map(|&e| BigInt::from(b).pow(e)).collect();
    let zero_factor: Vec<BigInt> = powers.iter().map(|p| p + (b - 1)).collect();
    let other_factor: Vec<BigInt> = powers.iter().map(|p| p - 1u32).collect();
    let mut total = BigInt::zero();
    for n in 0..net.len() {
        let mut prod = BigInt::from(1u32);
        for j in 0..net.dim() {
            for (i, &xi) in net.point_digits(n, j).iter().enumerate() {
                let p = j * l + i;
                prod *= if xi == 0 { &zero_factor[p] } else { &other_factor[p] };
            }
        }
        total += prod;
    }
    let scale: BigInt = powers.iter().product::<BigInt>() * BigInt::from(net.len());
    let num = total - &scale;
    // the sum is a sum of positive terms; a negative numerator cannot occur
    match num.sign() {
        Sign::Minus | Sign::NoSign => 0.0,
        Sign::Plus => big_ratio(num.magnitude(), scale.magnitude()),
    }
}

fn top_bits(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 64 {
        (x.to_u64().expect("fits") as f64, 0)
    } else {
        let shift = bits - 64;
        ((x >> shift).to_u64().expect("fits") as f64, shift as i64)
    }
}

fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let (mn, en) = top_bits(num);
    let (md, ed) = top_bits(den);
    let e = en - ed;
    let e = e.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    // split the power to stay inside the normal range as long as possible
    let half = e / 2;
    (mn / md) * 2f64.powi(half) * 2f64.powi(e - half)
}

/// `ln Π_{j<=s} Π_{i<=l} (1 + (b-1) b^{-max(i+a_j,1)})`: the full box sum including `k = 0`.
fn ln_box_product(weights: &[f64], b: u32, l: usize) -> f64 {
    let bf = b as f64;
    let terms = weights
        .iter()
        .flat_map(|&a| (0..l).map(move |i| ((bf - 1.0) * bf.powf(-modified_cost(i, a))).ln_1p()));
    neumaier_sum(terms)
}

/// `ln Σ_{i>l} log1p((b-1) b^{-max(i+a,1)})` for one coordinate.
fn ln_coord_tail(a: f64, b: u32, l: usize) -> f64 {
    let bf = b as f64;
    let lb = bf.ln();
    let first = modified_cost(l, a);
    let ln_first = (bf - 1.0).ln() - first * lb;
    if ln_first < -30.0 {
        // log1p(x) = x to within 1e-13 relative; geometric in i once unclamped
        return ln_first - (1.0 - 1.0 / bf).ln();
    }
    let mut sum = 0.0;
    let mut i = l;
    loop {
        let t = ((bf - 1.0) * bf.powf(-modified_cost(i, a))).ln_1p();
        sum += t;
        if t < 1e-18 * sum {
            break;
        }
        i += 1;
    }
    sum.ln()
}

/// Exact `Σ b^{-μ̄_a(k)}` over all `k` with some `k_j >= b^l`.
pub fn tail_sum(weights: &[f64], b: u32, l: usize) -> LogReal {
    let parts: Vec<f64> = weights.iter().map(|&a| ln_coord_tail(a, b, l)).collect();
    if parts.is_empty() {
        return LogReal(f64::NEG_INFINITY);
    }
    let top = parts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ln_s = top + parts.iter().map(|&p| (p - top).exp()).sum::<f64>().ln();
    let s = ln_s.exp();
    // ln(expm1(S)), accurate for tiny S
    let ln_expm1 = if s < 1e-10 { ln_s + s / 2.0 } else { s.exp_m1().ln() };
    LogReal(ln_box_product(weights, b, l) + ln_expm1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::MatrixZb;
    use crate::nets::generate_points;

    fn single(b: u32, rows: &[Vec<u8>]) -> GeneratingMatrices {
        GeneratingMatrices::new(vec![MatrixZb::from_rows(b, rows).unwrap()]).unwrap()
    }

    fn both(g: &GeneratingMatrices, a: &[f64]) -> (f64, f64, f64) {
        let net = generate_points(g).unwrap();
        (
            wafom_dual(g, a, DualMode::Auto).unwrap().value,
            wafom_pointwise(&net, a).unwrap(),
            wafom_pointwise_f64(&net, a).unwrap(),
        )
    }

    #[test]
    fn examples() {
        let (d, p, f) = both(&single(2, &[vec![1]]), &[0.0]);
        assert_eq!((d, p), (0.0, 0.0));
        assert!(f.abs() < 1e-16);

        let (d, p, f) = both(&single(2, &[vec![1], vec![0]]), &[0.0]);
        assert_eq!((d, p), (0.25, 0.25));
        assert!((f - 0.25).abs() < 1e-15);

        let (d, p, f) = both(&single(2, &[vec![0]]), &[0.0]);
        assert_eq!((d, p), (0.5, 0.5));
        assert!((f - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fractional_weights_use_float_route() {
        let g = GeneratingMatrices::new(vec![
            MatrixZb::from_rows(3, &[vec![1, 2], vec![0, 1], vec![2, 2]]).unwrap(),
            MatrixZb::from_rows(3, &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap(),
        ])
        .unwrap();
        let a = [0.3, 1.7];
        let (d, p, _) = both(&g, &a);
        assert!((d - p).abs() <= 1e-13 * d.max(p), "{d} vs {p}");
    }

    #[test]
    fn weight_ordered_cap_is_reported() {
        let g = single(2, &[vec![1], vec![0], vec![1]]);
        let full = wafom_dual(&g, &[0.0], DualMode::BruteForce).unwrap();
        assert_eq!(full.weight_cap, None);
        let capped = wafom_dual(&g, &[0.0], DualMode::WeightOrdered).unwrap();
        assert!(capped.weight_cap.is_some());
        assert!((capped.value - full.value).abs() < 1e-15);
    }

    #[test]
    fn tail_matches_direct_sum() {
        // s = 1, a = 0, b = 2, l = 1: Σ_{k>=2} 2^{-μ̄(k)} = Π_{i>=1}(1 + 2^{-i}) - (1 + 1/2)
        let full: f64 = (1..200).map(|i| 1.0 + 0.5f64.powi(i)).product();
        let want = full - 1.5;
        let got = tail_sum(&[0.0], 2, 1).value();
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn tail_deep_precision_stays_finite() {
        let t = tail_sum(&[1.0, 2.0], 2, 2000);
        assert!(t.ln().is_finite());
        // leading terms 2^{-2001} + 2^{-2002}, times the box product
        let boxp: f64 = (1..200).map(|i| (1.0 + 0.5f64.powi(i + 1)) * (1.0 + 0.5f64.powi(i + 2))).product();
        let want = 1.5f64.ln() - 2001.0 * 2f64.ln() + boxp.ln();
        assert!((t.ln() - want).abs() < 1e-6, "{} vs {want}", t.ln());
    }
}
