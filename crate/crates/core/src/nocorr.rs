//! States with no N-partite correlations.
//!
//! A symmetric state has no N-partite correlations when every coordinate
//! with all indices nonzero vanishes. Through the contraction identity this
//! propagates to every level `n0 = 2, 4, …`; for even `N` it would force
//! `x_{0…0} = 0`, so such states only exist for odd `N`.

use serde::{Deserialize, Serialize};

use crate::symrep::{PauliCounts, SymTensor};

/// Default absolute tolerance on vanishing coordinates.
pub const SNC_TOL: f64 = 1e-10;

pub const REASON_SNC: &str = "no N-partite correlations";
pub const REASON_EVEN: &str = "even-N impossibility";
pub const REASON_CORRELATED: &str = "nonzero N-partite correlations";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelViolation {
    pub n0: usize,
    pub max_violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SncReport {
    pub is_snc: bool,
    pub levels: Vec<LevelViolation>,
    pub reason: String,
}

impl SncReport {
    /// Violation at level `n0 = 0`, the N-partite correlations themselves.
    pub fn max_violation(&self) -> f64 {
        self.levels.first().map_or(0.0, |l| l.max_violation)
    }
}

/// Largest `|x|` over the classes with exactly `n0` identity indices.
fn level_violation(x: &SymTensor, n0: usize) -> f64 {
    x.iter()
        .filter(|(c, _)| c.n0 == n0)
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max)
}

pub fn is_snc(x: &SymTensor, tol: f64) -> SncReport {
    let n = x.n_qubits();
    let levels: Vec<LevelViolation> = (0..n)
        .step_by(2)
        .map(|n0| LevelViolation {
            n0,
            max_violation: level_violation(x, n0),
        })
        .collect();
    if n.is_multiple_of(2) && (x.get(PauliCounts::identity(n)) - 1.0).abs() <= tol {
        return SncReport {
            is_snc: false,
            levels,
            reason: REASON_EVEN.to_string(),
        };
    }
    let is_snc = levels.first().is_some_and(|l| l.max_violation <= tol);
    let reason = if is_snc {
        REASON_SNC
    } else {
        REASON_CORRELATED
    };
    SncReport {
        is_snc,
        levels,
        reason: reason.to_string(),
    }
}

/// `⟨σ⟩ = 0` on the one-qubit reduced state.
pub fn is_anticoherent_1(x: &SymTensor, tol: f64) -> bool {
    let n = x.n_qubits();
    if n == 0 {
        return false;
    }
    (1..4).all(|a| x.get(PauliCounts::identity(n - 1).with_added(a, 1)).abs() <= tol)
}
