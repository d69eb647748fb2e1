//! Figures of merit for digital nets, error-bound constants, lower bounds and
//! randomized net search.

mod bounds;
mod search;
mod wafom;

pub use bounds::{
    c_bar, c_bd, lower_bound_box, lower_bound_n, p2_counterexample_dimension, BoundConstants, LogReal,
    Regime, TracConstants,
};
pub use search::{
    cell_seed, convergence_rate_table, default_precision, search_net, trial_matrices, RateRecord,
    SearchConfig, SearchOutcome, Target,
};
pub use wafom::{tail_sum, wafom_dual, wafom_pointwise, wafom_pointwise_f64, DualSum, EXACT_BITS_LIMIT};

use std::fmt::Write as _;

use crate::error::Result;
use crate::nets::{generate_points, min_dual_weight, DualMode, GeneratingMatrices};
use crate::weights::WeightSequence;

/// Merit of one net: truncated dual sum, minimal dual weight, exact tail outside the
/// box and the worst-case error bound `C̄ exp(-δ (log b)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeritReport {
    pub base: u8,
    pub dim: usize,
    pub precision: usize,
    pub log_size: usize,
    pub truncated_wafom: f64,
    pub delta: f64,
    pub delta_truncated: Option<f64>,
    pub floor: f64,
    /// `Σ b^{-μ̄(k)}` over every `k` outside the box, dual or not.
    pub tail_bound: LogReal,
    pub wce_bound: LogReal,
}

pub const REPORT_CSV_HEADER: &str =
    "b,s,l,d,wafom,delta,delta_truncated,floor,tail_bound,wce_bound,ln_wafom,ln_tail_bound,ln_wce_bound";

impl MeritReport {
    pub fn compute(g: &GeneratingMatrices, seq: &WeightSequence) -> Result<Self> {
        let weights = seq.walsh_weights(g.dim())?;
        let net = generate_points(g)?;
        let truncated_wafom = wafom_pointwise(&net, &weights)?;
        let dw = min_dual_weight(g, &weights, DualMode::Auto)?;
        let constants = BoundConstants::new(seq, g.dim())?;
        Ok(MeritReport {
            base: g.base(),
            dim: g.dim(),
            precision: g.precision(),
            log_size: g.log_size(),
            truncated_wafom,
            delta: dw.delta,
            delta_truncated: dw.delta_truncated,
            floor: dw.floor,
            tail_bound: tail_sum(&weights, g.base() as u32, g.precision()),
            wce_bound: constants.wce_upper_bound(dw.delta, Regime::Conv)?,
        })
    }

    pub fn ln_wafom(&self) -> f64 {
        self.truncated_wafom.ln()
    }

    /// `truncated_wafom + tail_bound`, the dual-sum factor of the error bound.
    pub fn dual_sum_bound(&self) -> f64 {
        self.truncated_wafom + self.tail_bound.value()
    }

    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let dt = self.delta_truncated.map_or("none".to_string(), |v| v.to_string());
        let _ = writeln!(out, "b={}", self.base);
        let _ = writeln!(out, "s={}", self.dim);
        let _ = writeln!(out, "l={}", self.precision);
        let _ = writeln!(out, "d={}", self.log_size);
        let _ = writeln!(out, "wafom={}", self.truncated_wafom);
        let _ = writeln!(out, "delta={}", self.delta);
        let _ = writeln!(out, "delta_truncated={dt}");
        let _ = writeln!(out, "floor={}", self.floor);
        let _ = writeln!(out, "tail_bound={}", self.tail_bound);
        let _ = writeln!(out, "wce_bound={}", self.wce_bound);
        let _ = writeln!(out, "ln_wafom={}", self.ln_wafom());
        let _ = writeln!(out, "ln_tail_bound={}", self.tail_bound.ln());
        let _ = writeln!(out, "ln_wce_bound={}", self.wce_bound.ln());
        out
    }

    pub fn to_csv_row(&self) -> String {
        let dt = self.delta_truncated.map_or(String::new(), |v| format!("{v:.16e}"));
        format!(
            "{},{},{},{},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.base,
            self.dim,
            self.precision,
            self.log_size,
            self.truncated_wafom,
            self.delta,
            dt,
            self.floor,
            self.tail_bound.value(),
            self.wce_bound.value(),
            self.ln_wafom(),
            self.tail_bound.ln(),
            self.wce_bound.ln(),
        )
    }
}
