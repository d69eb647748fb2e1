//! b-adic digit vectors and dense linear algebra over Z_b.
//!
//! Digits are stored little-endian by position: entry `i` holds the
//! coefficient of `b^i` (so entry 0 is the least significant digit).

use crate::error::{Error, Result};

/// Checks that `b` is a usable base and narrows it to a byte.
pub fn check_base(b: u32) -> Result<u8> {
    if (2..=255).contains(&b) {
        Ok(b as u8)
    } else {
        Err(Error::InvalidBase(b))
    }
}

/// Smallest prime factor of `b` (written rho_b in the bounds).
pub fn smallest_prime_factor(b: u32) -> u32 {
    let mut p = 2;
    while p * p <= b {
        if b.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    b
}

pub fn is_prime(b: u32) -> bool {
    b >= 2 && smallest_prime_factor(b) == b
}

/// `b^l` if it fits in a u64.
pub fn checked_pow(b: u32, l: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..l {
        acc = acc.checked_mul(b as u64)?;
    }
    Some(acc)
}

fn inverse_mod(x: u8, p: u8) -> u8 {
    // p is prime and small; Fermat would do too but a scan is exact and cheap.
    (1..p).find(|&y| (x as u32 * y as u32) % p as u32 == 1).unwrap_or(0)
}

/// Fixed-precision digit vector of a non-negative integer in base `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digits {
    base: u8,
    digits: Vec<u8>,
}

impl Digits {
    pub fn zero(base: u8, precision: usize) -> Self {
        Digits { base, digits: vec![0; precision] }
    }

    /// Builds a digit vector from raw digits, validating that each lies in `[0, b)`.
    pub fn from_digits(base: u32, digits: Vec<u8>) -> Result<Self> {
        let base = check_base(base)?;
        if let Some(&bad) = digits.iter().find(|&&x| x >= base) {
            return Err(Error::InvalidArgument(format!(
                "digit {bad} out of range for base {base}"
            )));
        }
        Ok(Digits { base, digits })
    }

    /// b-adic expansion of `k` with exactly `l` digits.
    pub fn from_integer(k: u64, b: u32, l: usize) -> Result<Self> {
        let base = check_base(b)?;
        if l == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        if let Some(limit) = checked_pow(b, l) {
            if k >= limit {
                return Err(Error::OutOfRange { value: k, base, precision: l });
            }
        }
        let mut digits = vec![0u8; l];
        let mut rest = k;
        for d in digits.iter_mut() {
            *d = (rest % b as u64) as u8;
            rest /= b as u64;
        }
        Ok(Digits { base, digits })
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&x| x == 0)
    }

    /// Reconstructs the integer value, or `None` on overflow.
    pub fn value(&self) -> Option<u64> {
        let mut acc: u64 = 0;
        for &d in self.digits.iter().rev() {
            acc = acc.checked_mul(self.base as u64)?.checked_add(d as u64)?;
        }
        Some(acc)
    }

    /// Keeps the first `m` digits (`tr_m`); pads with zeros when `m` exceeds the length.
    pub fn truncate(&self, m: usize) -> Digits {
        let mut digits = self.digits.clone();
        digits.resize(m, 0);
        Digits { base: self.base, digits }
    }

    /// Number of nonzero digits.
    pub fn hamming_weight(&self) -> usize {
        self.digits.iter().filter(|&&x| x != 0).count()
    }

    fn check_compatible(&self, other: &Digits) -> Result<()> {
        if self.base != other.base || self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "digit vectors (base {}, len {}) and (base {}, len {})",
                self.base,
                self.len(),
                other.base,
                other.len()
            )));
        }
        Ok(())
    }

    /// Digitwise addition modulo b.
    pub fn add(&self, other: &Digits) -> Result<Digits> {
        self.check_compatible(other)?;
        let b = self.base as u16;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&x, &y)| ((x as u16 + y as u16) % b) as u8)
            .collect();
        Ok(Digits { base: self.base, digits })
    }

    /// Digitwise subtraction modulo b.
    pub fn sub(&self, other: &Digits) -> Result<Digits> {
        self.check_compatible(other)?;
        let b = self.base as u16;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&x, &y)| ((x as u16 + b - y as u16) % b) as u8)
            .collect();
        Ok(Digits { base: self.base, digits })
    }
}

/// `k ⊕ k'` on plain integers, digit by digit in base `b`.
pub fn digitwise_add(k: u64, k2: u64, b: u32) -> Result<u64> {
    digitwise(k, k2, b, |x, y, b| (x + y) % b)
}

/// `k ⊖ k'` on plain integers, digit by digit in base `b`.
pub fn digitwise_sub(k: u64, k2: u64, b: u32) -> Result<u64> {
    digitwise(k, k2, b, |x, y, b| (x + b - y) % b)
}

fn digitwise(mut k: u64, mut k2: u64, b: u32, op: impl Fn(u64, u64, u64) -> u64) -> Result<u64> {
    check_base(b)?;
    let b = b as u64;
    let (mut out, mut scale) = (0u64, 1u64);
    while k > 0 || k2 > 0 {
        out += op(k % b, k2 % b, b) * scale;
        k /= b;
        k2 /= b;
        scale = scale.saturating_mul(b);
    }
    Ok(out)
}

/// Multi-index `k = (k_1, ..., k_s)` stored as one digit vector per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    coords: Vec<Digits>,
}

impl MultiIndex {
    pub fn new(coords: Vec<Digits>) -> Result<Self> {
        if let Some(first) = coords.first() {
            if coords
                .iter()
                .any(|c| c.base() != first.base() || c.len() != first.len())
            {
                return Err(Error::ShapeMismatch(
                    "all coordinates must share base and precision".into(),
                ));
            }
        }
        Ok(MultiIndex { coords })
    }

    pub fn zero(s: usize, base: u8, precision: usize) -> Self {
        MultiIndex { coords: vec![Digits::zero(base, precision); s] }
    }

    pub fn from_integers(ks: &[u64], b: u32, l: usize) -> Result<Self> {
        let coords = ks
            .iter()
            .map(|&k| Digits::from_integer(k, b, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiIndex { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn precision(&self) -> usize {
        self.coords.first().map_or(0, Digits::len)
    }

    pub fn base(&self) -> Option<u8> {
        self.coords.first().map(Digits::base)
    }

    pub fn coords(&self) -> &[Digits] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Digits::is_zero)
    }

    pub fn values(&self) -> Option<Vec<u64>> {
        self.coords.iter().map(Digits::value).collect()
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.zip_with(other, Digits::add)
    }

    pub fn sub(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.zip_with(other, Digits::sub)
    }

    fn zip_with(
        &self,
        other: &MultiIndex,
        op: impl Fn(&Digits, &Digits) -> Result<Digits>,
    ) -> Result<MultiIndex> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch(format!(
                "multi-indices of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(x, y)| op(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiIndex { coords })
    }
}

/// Dense `rows × cols` matrix over Z_b, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixZb {
    base: u8,
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl MatrixZb {
    pub fn new(base: u32, rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        let base = check_base(base)?;
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x >= base) {
            return Err(Error::InvalidArgument(format!(
                "entry {bad} out of range for base {base}"
            )));
        }
        Ok(MatrixZb { base, rows, cols, entries })
    }

    pub fn from_rows(base: u32, rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(base, rows.len(), cols, rows.concat())
    }

    pub fn zeros(base: u32, rows: usize, cols: usize) -> Result<Self> {
        Self::new(base, rows, cols, vec![0; rows * cols])
    }

    /// `rows × cols` matrix with ones on the main diagonal.
    pub fn identity(base: u32, rows: usize, cols: usize) -> Result<Self> {
        let mut m = Self::zeros(base, rows, cols)?;
        for i in 0..rows.min(cols) {
            m.entries[i * cols + i] = 1;
        }
        Ok(m)
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// `G v` over Z_b.
    pub fn mat_vec(&self, v: &Digits) -> Result<Digits> {
        if v.base() != self.base || v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix (base {}) times vector of length {} (base {})",
                self.rows,
                self.cols,
                self.base,
                v.len(),
                v.base()
            )));
        }
        let b = self.base as u32;
        let digits = (0..self.rows)
            .map(|r| {
                let acc: u32 = self
                    .row(r)
                    .iter()
                    .zip(v.digits())
                    .map(|(&g, &x)| g as u32 * x as u32)
                    .sum();
                (acc % b) as u8
            })
            .collect();
        Ok(Digits { base: self.base, digits })
    }

    pub fn transpose(&self) -> MatrixZb {
        let mut entries = vec![0u8; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.get(r, c);
            }
        }
        MatrixZb { base: self.base, rows: self.cols, cols: self.rows, entries }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &MatrixZb) -> Result<MatrixZb> {
        if self.base != other.base || self.rows != other.rows {
            return Err(Error::ShapeMismatch("hconcat of incompatible matrices".into()));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Ok(MatrixZb { base: self.base, rows: self.rows, cols, entries })
    }

    /// Reduced row echelon form over a prime field, with the pivot column of each nonzero row.
    fn rref(&self) -> Result<(MatrixZb, Vec<usize>)> {
        if !is_prime(self.base as u32) {
            return Err(Error::PrimeBaseRequired(self.base));
        }
        let p = self.base as u32;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.entries.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = inverse_mod(m.get(row, col), self.base) as u32;
            for c in 0..m.cols {
                let idx = row * m.cols + c;
                m.entries[idx] = ((m.entries[idx] as u32 * inv) % p) as u8;
            }
            for r in 0..m.rows {
                let factor = m.get(r, col) as u32;
                if r == row || factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let sub = (factor * m.get(row, c) as u32) % p;
                    let idx = r * m.cols + c;
                    m.entries[idx] = ((m.entries[idx] as u32 + p - sub) % p) as u8;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok((m, pivots))
    }

    /// Rank over Z_b for prime b.
    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Basis of `{v : A v = 0}` over a prime field; `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Result<Vec<Digits>> {
        let (r, pivots) = self.rref()?;
        let p = self.base as u32;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let basis = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u8; self.cols];
                v[free] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = ((p - r.get(row, free) as u32) % p) as u8;
                }
                Digits { base: self.base, digits: v }
            })
            .collect();
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_integer_examples() {
        assert_eq!(Digits::from_integer(6, 2, 4).unwrap().digits(), &[0, 1, 1, 0]);
        assert_eq!(Digits::from_integer(0, 3, 2).unwrap().digits(), &[0, 0]);
        assert_eq!(Digits::from_integer(7, 3, 3).unwrap().digits(), &[1, 2, 0]);
    }

    #[test]
    fn from_integer_rejects_bad_input() {
        assert_eq!(Digits::from_integer(1, 1, 3), Err(Error::InvalidBase(1)));
        assert!(matches!(
            Digits::from_integer(16, 2, 4),
            Err(Error::OutOfRange { .. })
        ));
        assert!(Digits::from_integer(15, 2, 4).is_ok());
    }

    #[test]
    fn digitwise_examples() {
        assert_eq!(digitwise_add(3, 1, 2).unwrap(), 2);
        assert_eq!(digitwise_add(5, 7, 3).unwrap(), 0);
        assert_eq!(digitwise_sub(5, 5, 3).unwrap(), 0);
        let a = Digits::from_integer(5, 3, 2).unwrap();
        let b = Digits::from_integer(7, 3, 2).unwrap();
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn digitwise_rejects_mismatch() {
        let a = Digits::from_integer(1, 2, 3).unwrap();
        let b = Digits::from_integer(1, 2, 4).unwrap();
        let c = Digits::from_integer(1, 3, 3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch(_))));
        assert!(matches!(a.sub(&c), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn mat_vec_examples() {
        let id = MatrixZb::identity(2, 3, 3).unwrap();
        let v = Digits::from_digits(2, vec![1, 0, 1]).unwrap();
        assert_eq!(id.mat_vec(&v).unwrap().digits(), &[1, 0, 1]);

        let zero = MatrixZb::zeros(5, 2, 2).unwrap();
        let v = Digits::from_digits(5, vec![3, 4]).unwrap();
        assert_eq!(zero.mat_vec(&v).unwrap().digits(), &[0, 0]);

        let g = MatrixZb::from_rows(2, &[vec![1, 1], vec![0, 1]]).unwrap();
        let v = Digits::from_digits(2, vec![1, 1]).unwrap();
        assert_eq!(g.mat_vec(&v).unwrap().digits(), &[0, 1]);
    }

    #[test]
    fn mat_vec_rejects_mismatch() {
        let g = MatrixZb::identity(2, 3, 2).unwrap();
        let v = Digits::from_digits(2, vec![1, 0, 1]).unwrap();
        assert!(g.mat_vec(&v).is_err());
        let v = Digits::from_digits(3, vec![1, 0]).unwrap();
        assert!(g.mat_vec(&v).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert!(MatrixZb::identity(2, 3, 3).unwrap().kernel_basis().unwrap().is_empty());
        assert_eq!(MatrixZb::zeros(3, 2, 3).unwrap().kernel_basis().unwrap().len(), 3);
        let a = MatrixZb::from_rows(2, &[vec![1, 1]]).unwrap();
        let k = a.kernel_basis().unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].digits(), &[1, 1]);
    }

    #[test]
    fn kernel_requires_prime_base() {
        let a = MatrixZb::identity(6, 2, 2).unwrap();
        assert_eq!(a.kernel_basis(), Err(Error::PrimeBaseRequired(6)));
    }

    #[test]
    fn small_primes() {
        assert_eq!(smallest_prime_factor(2), 2);
        assert_eq!(smallest_prime_factor(6), 2);
        assert_eq!(smallest_prime_factor(15), 3);
        assert_eq!(smallest_prime_factor(49), 7);
        assert!(is_prime(7) && !is_prime(9));
    }
}
