//! Formula-to-formula translations between automata modalities, plus the
//! bounded equisatisfiability harnesses and the differential fuzzer.

mod equisat;
mod fk_to_rat;
pub mod fuzz;
mod rat_to_fk;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, FormulaError};
use crate::timedword::Interval;

pub use equisat::{
    enumerate_words, flatten_mutation_fixture, for_each_word, relativize_mutation_fixture,
    relativized_formula, verify_oversampled_equisat, verify_simple_equisat, EquisatReport,
    MutationFixture, Universe,
};
#[cfg(feature = "general-intervals")]
pub use fk_to_rat::fk_to_rat_general;
pub use fk_to_rat::{fk_to_rat, fk_to_rat_formula, fk_to_rat_unchecked};
pub use rat_to_fk::{rat_to_fk, rat_to_fk_any, rat_to_fk_formula, until_via_frat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("expected {expected} node, found `{found}`")]
    WrongNode {
        expected: &'static str,
        found: String,
    },
    #[error("interval {index} ({interval}) is not closed")]
    NotClosed { index: usize, interval: Interval },
    #[error("intervals are not sorted: sup({a}) > inf({b})")]
    Unsorted { a: Interval, b: Interval },
    #[error("external construction required at step {step}: {what}")]
    ExternalConstruction { step: usize, what: &'static str },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Summary of one translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    #[serde(skip)]
    pub input: Formula,
    #[serde(skip)]
    pub output: Formula,
    /// For each emitted disjunct, the boundary states `(automaton, state)`
    /// between consecutive windows (0-based automaton index).
    pub witness_states: Vec<Vec<(usize, usize)>>,
    /// The windows used, with the indices of the intervals covering each.
    pub windows: Vec<(String, Vec<usize>)>,
    /// `∏_{j≤k}|Q_j| · ∏_{j≥2}|Q_j|`, the unpruned state-tuple count.
    pub tuples_before_pruning: usize,
    pub input_size: usize,
    pub output_size: usize,
}

/// Steps of the NA⁻-1-TPTL to MTL pipeline that this crate can run.
pub fn pipeline_step(step: usize) -> Result<&'static str, ReductionError> {
    match step {
        4 => Ok("flattening (formula::flatten)"),
        8 => Ok("F^k to Rat (fk_to_rat)"),
        9 => Ok("Rat to F^k (rat_to_fk)"),
        1 => Err(ReductionError::ExternalConstruction {
            step,
            what: "1-TPTL to PnEMTL translation",
        }),
        2 | 3 => Err(ReductionError::ExternalConstruction {
            step,
            what: "PnEMTL normal forms",
        }),
        5..=7 => Err(ReductionError::ExternalConstruction {
            step,
            what: "EMITL oversampling lemmas",
        }),
        _ => Err(ReductionError::ExternalConstruction {
            step,
            what: "unknown pipeline step",
        }),
    }
}

/// Runs the pipeline on `f`; it halts at the first step whose construction
/// lives outside this crate.
pub fn run_pipeline(_f: &Formula) -> Result<Formula, ReductionError> {
    for step in 1..=9 {
        pipeline_step(step)?;
    }
    unreachable!("step 1 is external")
}
