//! Symmetric N-qubit states in the tensor (correlator) representation.
//!
//! The crate converts between Dicke-basis density matrices and the
//! permutation-invariant Pauli correlators `x_{μ1…μN}`, recognizes states
//! with no N-partite correlations, builds antistate pairings, and certifies
//! genuine entanglement or separability of those states.
//!
//! Module map:
//!
//! - [`symrep`]: Dicke states, S-matrices, tensor coordinates, reductions.
//! - [`nocorr`]: membership tests for states without N-partite correlations.
//! - [`antistate`]: universal-NOT, antistate pairing, Majorana points.
//! - [`entcert`]: entanglement and separability certifiers.
//! - [`families`]: explicit entangled families and their analytic bounds.
//! - [`io`], [`scan`], [`selfcheck`]: state files, region scans, invariant runner.
//! - [`oracle`]: brute-force 2^N reference computations used by checks.

pub mod antistate;
pub mod entcert;
mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod nocorr;
pub mod oracle;
pub mod random;
pub mod scan;
pub mod selfcheck;
pub mod symrep;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use antistate::{antistate, majorana_roots, pair_decompose, purity_check, SpectralPairing};
pub use entcert::{
    a_matrix, alpha_condition, max_overlap, ppt_first_qubit, q_poly, rank2_certify,
    sufficient_criterion, three_qubit_exact, x_matrix_positivity, CertVerdict, CorrelationMatrixA,
    Verdict, Witness,
};
pub use families::{
    a_closed_form, dicke_superposition, exact_threshold_n3, mixture_state, rank2_state,
    sphere_bound, u_function, weighted_bound, MixtureSpec,
};
pub use nocorr::{is_anticoherent_1, is_snc, SncReport};
pub use symrep::{
    coherent_state, dicke_state, embed_one_qubit, from_tensor, reduce, s_matrix, to_tensor,
    BlochVector, DickeVector, PauliCounts, SymDensity, SymTensor,
};
