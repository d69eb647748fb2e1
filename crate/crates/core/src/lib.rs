//! Digital nets over Z_b for quasi-Monte Carlo integration of smooth functions.
//!
//! The crate covers the whole chain from digit arithmetic to experiments:
//! [`basefield`] (digits and linear algebra over Z_b), [`walsh`] (Walsh
//! functions), [`weights`] (Dick weights, embeddings, volume counting),
//! [`nets`] (digital nets and dual nets), [`merit`] (WAFOM-style merit values,
//! error-bound constants, random net search), [`integrate`] (QMC evaluation and
//! convergence experiments) and [`cli`] (the command-line frontend).

pub mod basefield;
pub mod cli;
pub mod error;
pub mod integrate;
pub mod merit;
pub mod nets;
mod positions;
pub mod walsh;
pub mod weights;

pub use error::{Error, Result};
