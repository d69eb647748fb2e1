//! Enumeration of dual-net elements inside the box `k_j < b^l` and the
//! minimal modified Dick weight of the dual.
//!
//! Three interchangeable routes are provided:
//! - `Kernel`: walk every Z_b-combination of a kernel basis of `[G_1^T | ... | G_s^T]`
//!   (prime `b` only);
//! - `BruteForce`: test every multi-index in the box;
//! - `WeightOrdered`: depth-first walk over digit positions sorted by cost,
//!   carrying the running syndrome, so only indices under the weight cap are
//!   visited. Works for any base.

use crate::basefield::{checked_pow, is_prime, Digits, MultiIndex};
use crate::error::{Error, Result};
use crate::positions::{modified_cost, positions_up_to, Position, WEIGHT_TOL};

use rayon::prelude::*;

use crate::weights::neumaier_sum;

use super::GeneratingMatrices;

/// Largest number of vectors walked by the kernel and brute-force routes.
pub const DUAL_WALK_LIMIT: u64 = 10_000_000;

/// Largest kernel summed by streaming, without storing its elements.
pub const DUAL_STREAM_LIMIT: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualMode {
    Auto,
    Kernel,
    BruteForce,
    WeightOrdered,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualElement {
    pub index: MultiIndex,
    /// Modified Dick weight `μ̄_a(k)`.
    pub weight: f64,
}

/// Minimal dual weight with its two ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualWeight {
    /// `min(delta_truncated, floor)`: the infimum over the whole dual.
    pub delta: f64,
    /// Minimum over nonzero dual elements with all `k_j < b^l`, searched up to `floor`;
    /// `None` if no such element weighs at most `floor`.
    pub delta_truncated: Option<f64>,
    /// `max(1, a_1 + l + 1)`, attained by `k = (b^l, 0, ..., 0)`.
    pub floor: f64,
}

fn check_weights(g: &GeneratingMatrices, weights: &[f64]) -> Result<()> {
    if weights.len() < g.dim() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} coordinates",
            weights.len(),
            g.dim()
        )));
    }
    Ok(())
}

/// Flat digit vector (coordinate-major, length `s l`) back to a multi-index.
fn to_index(flat: &[u8], b: u32, s: usize, l: usize) -> MultiIndex {
    let coords = (0..s)
        .map(|j| Digits::from_digits(b, flat[j * l..(j + 1) * l].to_vec()).expect("digits in range"))
        .collect();
    MultiIndex::new(coords).expect("uniform shape")
}

fn flat_weight(flat: &[u8], weights: &[f64], l: usize) -> f64 {
    flat.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(p, _)| modified_cost(p % l, weights[p / l]))
        .sum()
}

pub(crate) fn resolve_mode(g: &GeneratingMatrices, mode: DualMode) -> Result<DualMode> {
    let b = g.base() as u32;
    let sl = g.dim() * g.precision();
    let brute_ok = checked_pow(b, sl).is_some_and(|n| n <= DUAL_WALK_LIMIT);
    match mode {
        DualMode::Auto => {
            if is_prime(b) {
                let rank = g.dual_map().rank()?;
                if checked_pow(b, sl - rank).is_some_and(|n| n <= DUAL_WALK_LIMIT) {
                    return Ok(DualMode::Kernel);
                }
            }
            Ok(if brute_ok { DualMode::BruteForce } else { DualMode::WeightOrdered })
        }
        DualMode::Kernel => {
            if !is_prime(b) {
                return Err(Error::PrimeBaseRequired(b as u8));
            }
            let rank = g.dual_map().rank()?;
            if !checked_pow(b, sl - rank).is_some_and(|n| n <= DUAL_WALK_LIMIT) {
                return Err(Error::Infeasible(format!("kernel of dimension {} too large", sl - rank)));
            }
            Ok(mode)
        }
        DualMode::BruteForce => {
            if !brute_ok {
                return Err(Error::Infeasible(format!("b^(s l) = {b}^{sl} exceeds the walk limit")));
            }
            Ok(mode)
        }
        DualMode::WeightOrdered => Ok(mode),
    }
}

/// Calls `visit` with every vector of the kernel, zero included.
fn walk_kernel(g: &GeneratingMatrices, visit: impl FnMut(&[u8])) -> Result<()> {
    let basis = g.dual_map().kernel_basis()?;
    walk_combinations(&basis, g.base() as u32, vec![0u8; g.dim() * g.precision()], visit);
    Ok(())
}

/// `Σ_{v ∈ ker, v ≠ 0} b^{-μ̄_a(v)}` over the whole kernel, streamed. `None` when the base is
/// composite or the kernel exceeds [`DUAL_STREAM_LIMIT`]. The split into chunks is fixed, so
/// the result does not depend on the thread count.
pub(crate) fn kernel_dual_sum(g: &GeneratingMatrices, weights: &[f64]) -> Result<Option<(f64, u64)>> {
    check_weights(g, weights)?;
    let (b, l) = (g.base() as u32, g.precision());
    if !is_prime(b) {
        return Ok(None);
    }
    let basis = g.dual_map().kernel_basis()?;
    let Some(size) = checked_pow(b, basis.len()).filter(|&n| n <= DUAL_STREAM_LIMIT) else {
        return Ok(None);
    };
    let n = g.dim() * l;
    let factors: Vec<f64> =
        (0..n).map(|p| (b as f64).powf(-modified_cost(p % l, weights[p / l]))).collect();
    // products of the factors over every nonzero pattern of 8 consecutive positions
    let tables: Vec<Vec<f64>> = factors
        .chunks(8)
        .map(|fs| {
            (0..1usize << fs.len())
                .map(|m| fs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, f)| f).product())
                .collect()
        })
        .collect();
    let term = |mask: u64| -> f64 { tables.iter().enumerate().map(|(c, t)| t[(mask >> (8 * c)) as usize & 255]).product() };
    // the top `split` basis vectors pick the chunk, the rest are walked inside it
    let split = basis.len().min(6);
    let (inner, outer) = basis.split_at(basis.len() - split);
    let chunks = checked_pow(b, split).unwrap_or(1);
    let partial: Vec<Compensated> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut start = vec![0u8; n];
            let mut rest = chunk;
            for vec in outer {
                let c = (rest % b as u64) as u32;
                rest /= b as u64;
                for (x, &y) in start.iter_mut().zip(vec.digits()) {
                    *x = ((*x as u32 + c * y as u32) % b) as u8;
                }
            }
            let mut acc = Compensated::default();
            let mut visit = |mask: u64| {
                if mask != 0 {
                    acc.add(term(mask));
                }
            };
            match b {
                2 if n <= 64 => {
                    let basis: Vec<u64> = inner.iter().map(|d| pack(d.digits(), 1)).collect();
                    walk_packed(&basis, b, pack(&start, 1), |x, y| x ^ y, |x| x, &mut visit);
                }
                3 if n <= 64 => {
                    let basis: Vec<(u64, u64)> =
                        inner.iter().map(|d| (pack(d.digits(), 1), pack(d.digits(), 2))).collect();
                    walk_packed(&basis, b, (pack(&start, 1), pack(&start, 2)), add_gf3, |(x1, x2)| x1 | x2, &mut visit);
                }
                _ => walk_combinations(inner, b, start, |v| {
                    let mut t = 1.0;
                    let mut nonzero = false;
                    for (part, table) in v.chunks(8).zip(&tables) {
                        let m = part.iter().enumerate().fold(0usize, |m, (i, &x)| m | ((x != 0) as usize) << i);
                        nonzero |= m != 0;
                        t *= table[m];
                    }
                    if nonzero {
                        acc.add(t);
                    }
                }),
            }
            acc
        })
        .collect();
    let total = neumaier_sum(partial.into_iter().flat_map(|c| [c.sum, c.comp]));
    Ok(Some((total, size - 1)))
}

#[derive(Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        self.comp += if self.sum.abs() >= x.abs() { (self.sum - t) + x } else { (x - t) + self.sum };
        self.sum = t;
    }
}

/// Bit `p` set where digit `p` equals `digit`.
fn pack(v: &[u8], digit: u8) -> u64 {
    v.iter().enumerate().fold(0, |m, (p, &x)| m | ((x == digit) as u64) << p)
}

/// Digit-wise addition mod 3 on (ones, twos) bit planes.
fn add_gf3((a1, a2): (u64, u64), (b1, b2): (u64, u64)) -> (u64, u64) {
    let (a0, b0) = (!(a1 | a2), !(b1 | b2));
    ((a1 & b0) | (b1 & a0) | (a2 & b2), (a2 & b0) | (b2 & a0) | (a1 & b1))
}

/// Packed counterpart of [`walk_combinations`], reporting the nonzero-position mask.
fn walk_packed<P: Copy>(
    basis: &[P],
    b: u32,
    mut v: P,
    add: impl Fn(P, P) -> P,
    nonzero: impl Fn(P) -> u64,
    visit: &mut impl FnMut(u64),
) {
    let mut counter = vec![0u32; basis.len()];
    visit(nonzero(v));
    loop {
        let mut t = 0;
        loop {
            if t == basis.len() {
                return;
            }
            v = add(v, basis[t]);
            counter[t] += 1;
            if counter[t] < b {
                break;
            }
            counter[t] = 0;
            t += 1;
        }
        visit(nonzero(v));
    }
}

/// Visits `start + Σ c_t B_t` for every coefficient vector `c ∈ Z_b^{|basis|}`.
fn walk_combinations(basis: &[Digits], b: u32, mut v: Vec<u8>, mut visit: impl FnMut(&[u8])) {
    let mut counter = vec![0u32; basis.len()];
    visit(&v);
    loop {
        let mut t = 0;
        loop {
            if t == basis.len() {
                return;
            }
            for (x, &y) in v.iter_mut().zip(basis[t].digits()) {
                let z = *x + y;
                *x = if z >= b as u8 { z - b as u8 } else { z };
            }
            counter[t] += 1;
            if counter[t] < b {
                break;
            }
            counter[t] = 0;
            t += 1;
        }
        visit(&v);
    }
}

fn walk_box(g: &GeneratingMatrices, mut visit: impl FnMut(&[u8])) {
    let b = g.base() as u32;
    let n = g.dim() * g.precision();
    let mut v = vec![0u8; n];
    loop {
        if g.dual_contains(&to_index(&v, b, g.dim(), g.precision())).expect("shape") {
            visit(&v);
        }
        let mut p = 0;
        loop {
            if p == n {
                return;
            }
            v[p] += 1;
            if (v[p] as u32) < b {
                break;
            }
            v[p] = 0;
            p += 1;
        }
    }
}

struct Walker<'a> {
    g: &'a GeneratingMatrices,
    positions: Vec<Position>,
    flat: Vec<u8>,
    syndrome: Vec<u32>,
}

impl<'a> Walker<'a> {
    fn new(g: &'a GeneratingMatrices, weights: &[f64], cap: f64) -> Self {
        Walker {
            g,
            positions: positions_up_to(&weights[..g.dim()], cap, Some(g.precision())),
            flat: vec![0; g.dim() * g.precision()],
            syndrome: vec![0; g.log_size()],
        }
    }

    fn shift(&mut self, pos: Position, value: u32) {
        let b = self.g.base() as u32;
        let row = self.g.matrices()[pos.coord].row(pos.digit);
        for (acc, &x) in self.syndrome.iter_mut().zip(row) {
            *acc = (*acc + value * x as u32) % b;
        }
    }

    /// Depth-first walk; `cap` is re-read at each step so the visitor can tighten it.
    fn walk(&mut self, start: usize, used: f64, cap: &mut f64, visit: &mut dyn FnMut(&[u8], f64, &mut f64)) {
        let b = self.g.base() as u32;
        let l = self.g.precision();
        for p in start..self.positions.len() {
            let pos = self.positions[p];
            let cost = used + pos.cost;
            if cost > *cap + WEIGHT_TOL {
                break;
            }
            let slot = pos.coord * l + pos.digit;
            for value in 1..b {
                self.flat[slot] = value as u8;
                self.shift(pos, 1);
                if self.syndrome.iter().all(|&x| x == 0) {
                    visit(&self.flat, cost, cap);
                }
                self.walk(p + 1, cost, cap, visit);
            }
            // undo: the syndrome has moved by (b-1) rows; one more returns it to start
            self.shift(pos, 1);
            self.flat[slot] = 0;
        }
    }
}

/// Every nonzero dual element with all `k_j < b^l` and `μ̄_a(k) <= weight_cap`, each
/// exactly once, sorted by weight and then by digits.
pub fn enumerate_dual(
    g: &GeneratingMatrices,
    weight_cap: f64,
    weights: &[f64],
    mode: DualMode,
) -> Result<Vec<DualElement>> {
    check_weights(g, weights)?;
    let (b, s, l) = (g.base() as u32, g.dim(), g.precision());
    let mut flats: Vec<(Vec<u8>, f64)> = Vec::new();
    let mut keep = |flat: &[u8], w: f64| {
        if w <= weight_cap + WEIGHT_TOL && flat.iter().any(|&x| x != 0) {
            flats.push((flat.to_vec(), w));
        }
    };
    match resolve_mode(g, mode)? {
        DualMode::Kernel => walk_kernel(g, |v| keep(v, flat_weight(v, weights, l)))?,
        DualMode::BruteForce => walk_box(g, |v| keep(v, flat_weight(v, weights, l))),
        DualMode::WeightOrdered => {
            if !weight_cap.is_finite() {
                return Err(Error::Infeasible("weight-ordered walk needs a finite cap".into()));
            }
            let mut cap = weight_cap;
            let mut walker = Walker::new(g, weights, cap);
            walker.walk(0, 0.0, &mut cap, &mut |v, w, _| keep(v, w));
        }
        DualMode::Auto => unreachable!("resolved above"),
    }
    flats.sort_by(|x, y| x.1.total_cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
    Ok(flats
        .into_iter()
        .map(|(v, weight)| DualElement { index: to_index(&v, b, s, l), weight })
        .collect())
}

/// `δ = inf { μ̄_a(k) : k ∈ P^⊥ \ {0} }`, folding in the weight floor of indices outside the box.
pub fn min_dual_weight(g: &GeneratingMatrices, weights: &[f64], mode: DualMode) -> Result<DualWeight> {
    check_weights(g, weights)?;
    let l = g.precision();
    let floor = (weights[0] + l as f64 + 1.0).max(1.0);
    let delta_truncated = match mode {
        DualMode::Auto | DualMode::WeightOrdered => {
            // branch and bound: nothing heavier than the best hit so far can matter
            let mut best: Option<f64> = None;
            let mut cap = floor;
            let mut walker = Walker::new(g, weights, cap);
            walker.walk(0, 0.0, &mut cap, &mut |_, w, cap| {
                if best.is_none_or(|b| w < b) {
                    best = Some(w);
                    *cap = w - 2.0 * WEIGHT_TOL;
                }
            });
            best
        }
        explicit => {
            let mut best: Option<f64> = None;
            let mut consider = |v: &[u8]| {
                if v.iter().any(|&x| x != 0) {
                    let w = flat_weight(v, weights, l);
                    if w <= floor + WEIGHT_TOL && best.is_none_or(|b| w < b) {
                        best = Some(w);
                    }
                }
            };
            match resolve_mode(g, explicit)? {
                DualMode::Kernel => walk_kernel(g, &mut consider)?,
                DualMode::BruteForce => walk_box(g, &mut consider),
                _ => unreachable!("explicit walk modes"),
            }
            best
        }
    };
    let delta = delta_truncated.map_or(floor, |t| t.min(floor));
    Ok(DualWeight { delta, delta_truncated, floor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::MatrixZb;

    fn single(b: u32, rows: &[Vec<u8>]) -> GeneratingMatrices {
        GeneratingMatrices::new(vec![MatrixZb::from_rows(b, rows).unwrap()]).unwrap()
    }

    const MODES: [DualMode; 4] =
        [DualMode::Auto, DualMode::Kernel, DualMode::BruteForce, DualMode::WeightOrdered];

    #[test]
    fn identity_has_empty_box_dual() {
        let g = GeneratingMatrices::identity(2, 1, 3, 3).unwrap();
        for mode in MODES {
            assert!(enumerate_dual(&g, 10.0, &[0.0], mode).unwrap().is_empty());
        }
        let w = min_dual_weight(&g, &[0.0], DualMode::Auto).unwrap();
        assert_eq!(w.delta_truncated, None);
        assert_eq!(w.delta, 4.0);
    }

    #[test]
    fn single_column_example() {
        let g = single(2, &[vec![1], vec![0]]);
        for mode in MODES {
            let e = enumerate_dual(&g, 10.0, &[0.0], mode).unwrap();
            assert_eq!(e.len(), 1);
            assert_eq!(e[0].index.values().unwrap(), vec![2]);
            assert_eq!(e[0].weight, 2.0);
        }
        let w = min_dual_weight(&g, &[0.0], DualMode::Auto).unwrap();
        assert_eq!((w.delta, w.floor), (2.0, 3.0));
    }

    #[test]
    fn zero_matrix_example() {
        let g = single(2, &[vec![0]]);
        let e = enumerate_dual(&g, 10.0, &[0.0], DualMode::Auto).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].index.values().unwrap()[0], e[0].weight), (1, 1.0));
        assert_eq!(min_dual_weight(&g, &[0.0], DualMode::Auto).unwrap().delta, 1.0);
    }

    #[test]
    fn composite_base() {
        let g = GeneratingMatrices::new(vec![MatrixZb::from_rows(6, &[vec![2], vec![3]]).unwrap()])
            .unwrap();
        assert!(matches!(
            enumerate_dual(&g, 10.0, &[0.0], DualMode::Kernel),
            Err(Error::PrimeBaseRequired(6))
        ));
        let brute = enumerate_dual(&g, 100.0, &[0.0], DualMode::BruteForce).unwrap();
        let ordered = enumerate_dual(&g, 100.0, &[0.0], DualMode::WeightOrdered).unwrap();
        assert_eq!(brute, ordered);
        // 3 * 2 = 0 mod 6, so k = 3 (digit 3 at position 1) is dual with weight 1
        assert_eq!(min_dual_weight(&g, &[0.0], DualMode::Auto).unwrap().delta, 1.0);
    }

    #[test]
    fn weight_cap_filters() {
        let g = single(2, &[vec![0], vec![0], vec![0]]);
        let e = enumerate_dual(&g, 2.0, &[0.0], DualMode::Kernel).unwrap();
        assert_eq!(e.iter().map(|x| x.weight).collect::<Vec<_>>(), vec![1.0, 2.0]);
    }
}
