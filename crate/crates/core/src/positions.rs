//! Digit positions `(j, i)` ordered by their modified Dick cost `max(i + a_j, 1)`.
//!
//! Every nonzero digit costs at least 1, so the set of multi-indices under a
//! weight cap is finite and a depth-first walk over positions in increasing
//! cost order can stop as soon as the next position no longer fits.

/// Slack used when comparing accumulated real weights against a cap.
pub const WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub coord: usize,
    /// 0-based digit index; the digit multiplies `b^digit`.
    pub digit: usize,
    pub cost: f64,
}

pub fn modified_cost(digit: usize, a: f64) -> f64 {
    (digit as f64 + 1.0 + a).max(1.0)
}

/// All positions with cost `<= cap`, optionally limited to the first `max_digits`
/// digits of each coordinate, sorted by cost (ties by coordinate, then digit).
pub fn positions_up_to(weights: &[f64], cap: f64, max_digits: Option<usize>) -> Vec<Position> {
    let mut out = Vec::new();
    for (coord, &a) in weights.iter().enumerate() {
        let mut digit = 0;
        loop {
            if max_digits.is_some_and(|l| digit >= l) {
                break;
            }
            let cost = modified_cost(digit, a);
            if cost > cap + WEIGHT_TOL {
                break;
            }
            out.push(Position { coord, digit, cost });
            digit += 1;
        }
    }
    out.sort_by(|x, y| {
        x.cost
            .total_cmp(&y.cost)
            .then(x.coord.cmp(&y.coord))
            .then(x.digit.cmp(&y.digit))
    });
    out
}

/// Counts `Σ_S (b-1)^{|S|}` over position subsets `S` with total cost `<= cap`
/// (the empty set included). Stops with `None` once the count would exceed `limit`.
pub fn count_weighted_subsets(positions: &[Position], cap: f64, b: u32, limit: u64) -> Option<u64> {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        positions: &[Position],
        start: usize,
        used: f64,
        mult: u64,
        cap: f64,
        b1: u64,
        total: &mut u64,
        limit: u64,
    ) -> bool {
        for p in start..positions.len() {
            let cost = used + positions[p].cost;
            if cost > cap + WEIGHT_TOL {
                break;
            }
            let Some(m) = mult.checked_mul(b1) else { return false };
            *total = match total.checked_add(m) {
                Some(t) if t <= limit => t,
                _ => return false,
            };
            if !walk(positions, p + 1, cost, m, cap, b1, total, limit) {
                return false;
            }
        }
        true
    }
    let mut total = 1u64;
    if total > limit {
        return None;
    }
    walk(positions, 0, 0.0, 1, cap, b as u64 - 1, &mut total, limit).then_some(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_cap() {
        let p = positions_up_to(&[0.0, 1.0], 3.0, None);
        let costs: Vec<f64> = p.iter().map(|x| x.cost).collect();
        assert_eq!(costs, vec![1.0, 2.0, 2.0, 3.0, 3.0]);
        assert_eq!((p[1].coord, p[1].digit), (0, 1));
        assert_eq!((p[2].coord, p[2].digit), (1, 0));
    }

    #[test]
    fn negative_weights_clamp() {
        let p = positions_up_to(&[-2.5], 1.0, None);
        // i + a <= 1 for i = 1, 2, 3 (costs clamp to 1); i = 4 costs 1.5
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|x| x.cost == 1.0));
    }

    #[test]
    fn limited_digits() {
        assert_eq!(positions_up_to(&[0.0], 100.0, Some(4)).len(), 4);
    }

    #[test]
    fn counting() {
        let p = positions_up_to(&[0.0], 2.0, None);
        assert_eq!(count_weighted_subsets(&p, 2.0, 2, 100), Some(3));
        assert_eq!(count_weighted_subsets(&p, 2.0, 2, 2), None);
    }
}
