//! b-adic Walsh functions.
//!
//! A Walsh value is always a b-th root of unity, so it is carried as an
//! exponent in Z_b and only turned into a complex number on request.

use num_complex::Complex64;

use crate::basefield::{check_base, checked_pow, Digits, MultiIndex};
use crate::error::{Error, Result};

/// Index of a multivariate Walsh function.
pub type WalshIndex = MultiIndex;

/// Point of `[0,1)^s` held as exact b-adic digits `(ξ_1, ..., ξ_l)` per coordinate,
/// where coordinate value is `Σ ξ_i b^{-i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointDigits {
    base: u8,
    coords: Vec<Vec<u8>>,
}

impl PointDigits {
    pub fn new(base: u32, coords: Vec<Vec<u8>>) -> Result<Self> {
        let base = check_base(base)?;
        if coords.iter().flatten().any(|&x| x >= base) {
            return Err(Error::InvalidArgument(format!("digit out of range for base {base}")));
        }
        Ok(PointDigits { base, coords })
    }

    /// Digit extraction by truncation toward zero. Each coordinate must lie in `[0,1)`.
    pub fn from_f64(x: &[f64], b: u32, l: usize) -> Result<Self> {
        let base = check_base(b)?;
        let mut coords = Vec::with_capacity(x.len());
        for &v in x {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("coordinate {v} not in [0,1)")));
            }
            let mut digits = Vec::with_capacity(l);
            let mut rest = v;
            for _ in 0..l {
                rest *= b as f64;
                let d = (rest.floor() as u32).min(b - 1);
                digits.push(d as u8);
                rest -= d as f64;
            }
            coords.push(digits);
        }
        Ok(PointDigits { base, coords })
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord_digits(&self, j: usize) -> &[u8] {
        &self.coords[j]
    }

    pub fn coord_f64(&self, j: usize) -> f64 {
        let b = self.base as f64;
        self.coords[j].iter().rev().fold(0.0, |acc, &d| (acc + d as f64) / b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.coord_f64(j)).collect()
    }
}

/// A b-th root of unity `ω_b^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    pub base: u8,
    pub exponent: u8,
}

impl RootOfUnity {
    pub fn to_complex(self) -> Complex64 {
        match (self.base, self.exponent) {
            (_, 0) => Complex64::new(1.0, 0.0),
            (2, _) => Complex64::new(-1.0, 0.0),
            (b, e) => Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / b as f64),
        }
    }

    pub fn conj(self) -> RootOfUnity {
        let b = self.base;
        RootOfUnity { base: b, exponent: (b - self.exponent) % b }
    }
}

/// Exponent `Σ_j Σ_i κ_{j,i} ξ_{j,i} mod b` of `wal_k(x)`.
pub fn walsh_exponent(k: &WalshIndex, x: &PointDigits) -> Result<u8> {
    if k.dim() != x.dim() {
        return Err(Error::ShapeMismatch(format!(
            "index of dimension {} against point of dimension {}",
            k.dim(),
            x.dim()
        )));
    }
    if let Some(kb) = k.base() {
        if kb != x.base {
            return Err(Error::ShapeMismatch(format!("index base {kb} against point base {}", x.base)));
        }
    }
    let b = x.base as u32;
    let mut acc = 0u32;
    for (kj, xj) in k.coords().iter().zip(&x.coords) {
        // digits past either precision multiply a zero digit
        for (&kappa, &xi) in kj.digits().iter().zip(xj) {
            acc = (acc + kappa as u32 * xi as u32) % b;
        }
    }
    Ok(acc as u8)
}

/// `wal_k(x)` as a root of unity.
pub fn walsh_eval(k: &WalshIndex, x: &PointDigits) -> Result<RootOfUnity> {
    Ok(RootOfUnity { base: x.base, exponent: walsh_exponent(k, x)? })
}

/// Approximates `∫ f(x) conj(wal_k(x)) dx` by averaging over the left endpoints of the
/// b-adic grid with `b^quad_level` cells per axis. Exact when `f` is constant on grid cells.
pub fn walsh_coefficient<F>(f: F, k: &WalshIndex, quad_level: usize) -> Result<Complex64>
where
    F: Fn(&PointDigits) -> Complex64,
{
    let b = k.base().ok_or_else(|| Error::InvalidArgument("empty index".into()))? as u32;
    let s = k.dim();
    let highest = k
        .coords()
        .iter()
        .filter_map(|c| c.digits().iter().rposition(|&x| x != 0))
        .max()
        .map_or(0, |p| p + 1);
    if quad_level < highest {
        return Err(Error::InvalidArgument(format!(
            "quadrature level {quad_level} below index precision {highest}"
        )));
    }
    let cells = checked_pow(b, s * quad_level)
        .filter(|&n| n <= 10_000_000)
        .ok_or_else(|| {
            Error::Infeasible(format!("b^(s*level) grid too large for s={s}, level={quad_level}"))
        })?;
    let per_axis = checked_pow(b, quad_level).unwrap_or(1);
    let mut sum = Complex64::new(0.0, 0.0);
    for cell in 0..cells {
        let mut rest = cell;
        let mut coords = Vec::with_capacity(s);
        for _ in 0..s {
            let c = rest % per_axis;
            rest /= per_axis;
            // integer c on the grid: x = c / b^level, so ξ_i is digit (level - i) of c
            let mut d = Digits::from_integer(c, b, quad_level.max(1))?.digits().to_vec();
            d.truncate(quad_level);
            d.reverse();
            coords.push(d);
        }
        let x = PointDigits { base: b as u8, coords };
        let w = walsh_eval(k, &x)?.conj().to_complex();
        sum += f(&x) * w;
    }
    Ok(sum / cells as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(ks: &[u64], b: u32, l: usize) -> WalshIndex {
        MultiIndex::from_integers(ks, b, l).unwrap()
    }

    #[test]
    fn eval_examples() {
        let x = PointDigits::from_f64(&[0.3, 0.7], 2, 3).unwrap();
        assert_eq!(walsh_eval(&idx(&[0, 0], 2, 3), &x).unwrap().exponent, 0);

        let half = PointDigits::from_f64(&[0.5], 2, 3).unwrap();
        let v = walsh_eval(&idx(&[1], 2, 3), &half).unwrap().to_complex();
        assert_eq!(v, Complex64::new(-1.0, 0.0));

        let x = PointDigits::new(3, vec![vec![1, 0], vec![2, 0]]).unwrap();
        assert_eq!(walsh_eval(&idx(&[1, 1], 3, 2), &x).unwrap().exponent, 0);
    }

    #[test]
    fn eval_rejects_mismatch() {
        let x = PointDigits::from_f64(&[0.5], 2, 3).unwrap();
        assert!(walsh_eval(&idx(&[1, 1], 2, 3), &x).is_err());
        assert!(walsh_eval(&idx(&[1], 3, 3), &x).is_err());
    }

    #[test]
    fn float_digit_extraction() {
        let x = PointDigits::from_f64(&[0.75, 0.0], 2, 4).unwrap();
        assert_eq!(x.coord_digits(0), &[1, 1, 0, 0]);
        assert_eq!(x.coord_f64(0), 0.75);
        let y = PointDigits::from_f64(&[1.0 / 3.0], 3, 3).unwrap();
        assert_eq!(y.coord_digits(0)[0], 1);
        assert!(PointDigits::from_f64(&[1.0], 2, 3).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let one = |_: &PointDigits| Complex64::new(1.0, 0.0);
        let c = walsh_coefficient(one, &idx(&[0], 2, 3), 3).unwrap();
        assert!((c - 1.0).norm() < 1e-15);
        let c = walsh_coefficient(one, &idx(&[1], 2, 3), 3).unwrap();
        assert!(c.norm() < 1e-15);

        let k3 = idx(&[3], 2, 3);
        let wal3 = |x: &PointDigits| walsh_eval(&k3, x).unwrap().to_complex();
        let c = walsh_coefficient(wal3, &k3, 3).unwrap();
        assert!((c - 1.0).norm() < 1e-15);
    }

    #[test]
    fn coefficient_level_too_small() {
        let one = |_: &PointDigits| Complex64::new(1.0, 0.0);
        assert!(walsh_coefficient(one, &idx(&[4], 2, 4), 2).is_err());
    }

    #[test]
    fn unit_modulus() {
        for b in [2u32, 3, 5, 6] {
            for e in 0..b as u8 {
                let z = RootOfUnity { base: b as u8, exponent: e }.to_complex();
                assert!((z.norm() - 1.0).abs() < 1e-15);
            }
        }
    }
}
