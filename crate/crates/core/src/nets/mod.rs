//! Digital nets over Z_b and their duals.

pub(crate) mod dual;
mod io;

pub use dual::{enumerate_dual, min_dual_weight, DualElement, DualMode, DualWeight, DUAL_STREAM_LIMIT, DUAL_WALK_LIMIT};
pub use io::{parse_matrices, read_matrices, write_matrices};

use rand::Rng;

use crate::basefield::{check_base, checked_pow, Digits, MatrixZb, MultiIndex};
use crate::error::{Error, Result};
use crate::walsh::PointDigits;

/// Largest net generated in memory.
pub const MAX_POINTS: u64 = 1 << 24;

/// `s` generating matrices `G_1..G_s ∈ Z_b^{l×d}` with `d <= l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratingMatrices {
    base: u8,
    precision: usize,
    log_size: usize,
    matrices: Vec<MatrixZb>,
}

impl GeneratingMatrices {
    pub fn new(matrices: Vec<MatrixZb>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidArgument("need at least one matrix".into()))?;
        let (base, l, d) = (first.base(), first.rows(), first.cols());
        if matrices
            .iter()
            .any(|m| m.base() != base || m.rows() != l || m.cols() != d)
        {
            return Err(Error::ShapeMismatch("matrices must share base and shape".into()));
        }
        if d == 0 || d > l {
            return Err(Error::ShapeMismatch(format!("need 1 <= d <= l, got d={d}, l={l}")));
        }
        Ok(GeneratingMatrices { base, precision: l, log_size: d, matrices })
    }

    /// Independent uniform entries over Z_b.
    pub fn random<R: Rng + ?Sized>(b: u32, s: usize, l: usize, d: usize, rng: &mut R) -> Result<Self> {
        check_base(b)?;
        let matrices = (0..s)
            .map(|_| {
                let entries = (0..l * d).map(|_| rng.random_range(0..b) as u8).collect();
                MatrixZb::new(b, l, d, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(matrices)
    }

    /// `G_j` equal to the `l × d` identity for every coordinate.
    pub fn identity(b: u32, s: usize, l: usize, d: usize) -> Result<Self> {
        Self::new((0..s).map(|_| MatrixZb::identity(b, l, d)).collect::<Result<_>>()?)
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn log_size(&self) -> usize {
        self.log_size
    }

    pub fn matrices(&self) -> &[MatrixZb] {
        &self.matrices
    }

    pub fn num_points(&self) -> Result<u64> {
        checked_pow(self.base as u32, self.log_size)
            .filter(|&n| n <= MAX_POINTS)
            .ok_or_else(|| Error::Infeasible(format!("b^d too large (d = {})", self.log_size)))
    }

    /// `d × (s l)` matrix `[G_1^T | ... | G_s^T]`; column `j l + i` pairs with digit `i` of `k_j`.
    pub fn dual_map(&self) -> MatrixZb {
        let mut iter = self.matrices.iter().map(MatrixZb::transpose);
        let first = iter.next().expect("at least one matrix");
        iter.fold(first, |acc, m| acc.hconcat(&m).expect("shapes agree"))
    }

    /// Whether `Σ_j G_j^T tr_l(k_j) = 0`.
    pub fn dual_contains(&self, k: &MultiIndex) -> Result<bool> {
        if k.dim() != self.dim() || k.base().is_some_and(|b| b != self.base) {
            return Err(Error::ShapeMismatch("index does not match the net".into()));
        }
        let b = self.base as u32;
        let mut syndrome = vec![0u32; self.log_size];
        for (kj, g) in k.coords().iter().zip(&self.matrices) {
            for (i, &kappa) in kj.digits().iter().take(self.precision).enumerate() {
                if kappa == 0 {
                    continue;
                }
                for (acc, &x) in syndrome.iter_mut().zip(g.row(i)) {
                    *acc = (*acc + kappa as u32 * x as u32) % b;
                }
            }
        }
        Ok(syndrome.iter().all(|&x| x == 0))
    }
}

/// The multiset of `b^d` points of a digital net, in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitalNet {
    matrices: GeneratingMatrices,
    // point-major, then coordinate, then digit ξ_1..ξ_l
    digits: Vec<u8>,
    len: usize,
}

impl DigitalNet {
    pub fn matrices(&self) -> &GeneratingMatrices {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn base(&self) -> u8 {
        self.matrices.base
    }

    pub fn dim(&self) -> usize {
        self.matrices.dim()
    }

    pub fn precision(&self) -> usize {
        self.matrices.precision
    }

    /// Digits `ξ_1..ξ_l` of coordinate `j` of point `n`.
    pub fn point_digits(&self, n: usize, j: usize) -> &[u8] {
        let l = self.precision();
        let start = (n * self.dim() + j) * l;
        &self.digits[start..start + l]
    }

    pub fn point(&self, n: usize) -> PointDigits {
        let coords = (0..self.dim()).map(|j| self.point_digits(n, j).to_vec()).collect();
        PointDigits::new(self.base() as u32, coords).expect("digits in range")
    }

    pub fn points(&self) -> impl Iterator<Item = PointDigits> + '_ {
        (0..self.len).map(|n| self.point(n))
    }

    pub fn point_f64(&self, n: usize) -> Vec<f64> {
        let b = self.base() as f64;
        (0..self.dim())
            .map(|j| self.point_digits(n, j).iter().rev().fold(0.0, |acc, &d| (acc + d as f64) / b))
            .collect()
    }
}

/// All `b^d` points `x_k`, `k = 0..b^d-1`, with `x_{k,j} = Σ_i (G_j tr_d(k))_i b^{-i}`.
pub fn generate_points(g: &GeneratingMatrices) -> Result<DigitalNet> {
    let n = g.num_points()? as usize;
    let (s, l, d, b) = (g.dim(), g.precision, g.log_size, g.base as u32);
    let mut digits = Vec::with_capacity(n * s * l);
    for k in 0..n {
        let tr = Digits::from_integer(k as u64, b, d)?;
        for m in &g.matrices {
            digits.extend_from_slice(m.mat_vec(&tr)?.digits());
        }
    }
    Ok(DigitalNet { matrices: g.clone(), digits, len: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(b: u32, rows: &[Vec<u8>]) -> GeneratingMatrices {
        GeneratingMatrices::new(vec![MatrixZb::from_rows(b, rows).unwrap()]).unwrap()
    }

    #[test]
    fn points_examples() {
        let net = generate_points(&single(2, &[vec![1]])).unwrap();
        let xs: Vec<f64> = (0..net.len()).map(|n| net.point_f64(n)[0]).collect();
        assert_eq!(xs, vec![0.0, 0.5]);

        let net = generate_points(&GeneratingMatrices::identity(2, 1, 2, 2).unwrap()).unwrap();
        let xs: Vec<f64> = (0..net.len()).map(|n| net.point_f64(n)[0]).collect();
        assert_eq!(xs, vec![0.0, 0.5, 0.25, 0.75]);

        let zero = GeneratingMatrices::new(vec![MatrixZb::zeros(3, 2, 2).unwrap(); 2]).unwrap();
        let net = generate_points(&zero).unwrap();
        assert_eq!(net.len(), 9);
        assert!((0..9).all(|n| net.point_f64(n) == vec![0.0, 0.0]));
    }

    #[test]
    fn dual_examples() {
        let g = single(2, &[vec![1], vec![0]]);
        let k = |v: u64| MultiIndex::from_integers(&[v], 2, 2).unwrap();
        assert!(g.dual_contains(&k(0)).unwrap());
        assert!(g.dual_contains(&k(2)).unwrap());
        assert!(!g.dual_contains(&k(1)).unwrap());
    }

    #[test]
    fn dual_truncates_long_indices() {
        let g = single(2, &[vec![1], vec![0]]);
        // k = 4 has its only nonzero digit beyond l = 2
        let k = MultiIndex::from_integers(&[4], 2, 5).unwrap();
        assert!(g.dual_contains(&k).unwrap());
    }

    #[test]
    fn rejects_bad_shapes() {
        let wide = MatrixZb::zeros(2, 2, 3).unwrap();
        assert!(GeneratingMatrices::new(vec![wide]).is_err());
        let a = MatrixZb::zeros(2, 3, 2).unwrap();
        let b = MatrixZb::zeros(3, 3, 2).unwrap();
        assert!(GeneratingMatrices::new(vec![a, b]).is_err());
    }
}
