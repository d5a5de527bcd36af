//! Brute-force references in the full `2^N` computational space.
//!
//! Nothing here goes through S-matrices or the Dicke-space shortcuts; these
//! routines exist so tests and the self-check runner can compare the
//! symmetric-space implementation against the definition. Qubit 1 is the most
//! significant bit of a basis index.

use nalgebra::{DMatrix, DVector};

use crate::linalg::binom;
use crate::symrep::{DickeVector, SymDensity};
use crate::C64;

/// Largest qubit number the dense routines are meant for.
pub const MAX_DENSE_QUBITS: usize = 7;

/// Dicke amplitudes spread over the computational strings.
pub fn expand_pure(psi: &DickeVector) -> DVector<C64> {
    let n = psi.n_qubits();
    let amps = psi.amplitudes();
    DVector::from_fn(1 << n, |s, _| {
        let k = (s as u64).count_ones() as usize;
        amps[k] / binom(n, k).sqrt()
    })
}

pub fn expand_density(rho: &SymDensity) -> DMatrix<C64> {
    let n = rho.n_qubits();
    let m = rho.matrix();
    let dim = 1usize << n;
    let norm: Vec<f64> = (0..=n).map(|k| binom(n, k).sqrt()).collect();
    DMatrix::from_fn(dim, dim, |s, t| {
        let ks = (s as u64).count_ones() as usize;
        let kt = (t as u64).count_ones() as usize;
        m[(ks, kt)] / (norm[ks] * norm[kt])
    })
}

/// `tr(ρ σ_{μ1} ⊗ … ⊗ σ_{μN})` for a full-space `ρ`.
pub fn correlator(full: &DMatrix<C64>, tuple: &[u8]) -> C64 {
    let n = tuple.len();
    assert_eq!(
        full.nrows(),
        1 << n,
        "tuple length does not match the state"
    );
    let mut acc = C64::new(0.0, 0.0);
    // tr(ρP) = Σ_s ⟨s|ρ P|s⟩ and P|s⟩ = phase · |s'⟩
    for s in 0..(1usize << n) {
        let mut out = s;
        let mut phase = C64::new(1.0, 0.0);
        for (pos, &mu) in tuple.iter().enumerate() {
            let bit = 1usize << (n - 1 - pos);
            let one = s & bit != 0;
            match mu {
                0 => {}
                1 => out ^= bit,
                2 => {
                    out ^= bit;
                    phase *= if one {
                        C64::new(0.0, -1.0)
                    } else {
                        C64::new(0.0, 1.0)
                    };
                }
                3 => {
                    if one {
                        phase = -phase;
                    }
                }
                _ => panic!("Pauli index {mu} out of range"),
            }
        }
        acc += phase * full[(s, out)];
    }
    acc
}

/// Partial transpose on the first qubit.
pub fn partial_transpose_first(full: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = full.nrows();
    let half = dim / 2;
    DMatrix::from_fn(dim, dim, |r, c| {
        let (a, i) = (r / half, r % half);
        let (b, j) = (c / half, c % half);
        full[(b * half + i, a * half + j)]
    })
}

/// Partial transpose on the first `m` qubits.
pub fn partial_transpose_leading(full: &DMatrix<C64>, m: usize) -> DMatrix<C64> {
    let dim = full.nrows();
    let rest = dim >> m;
    DMatrix::from_fn(dim, dim, |r, c| {
        let (a, i) = (r / rest, r % rest);
        let (b, j) = (c / rest, c % rest);
        full[(b * rest + i, a * rest + j)]
    })
}

/// Traces out the last qubit.
pub fn partial_trace_last(full: &DMatrix<C64>) -> DMatrix<C64> {
    let half = full.nrows() / 2;
    DMatrix::from_fn(half, half, |r, c| {
        full[(2 * r, 2 * c)] + full[(2 * r + 1, 2 * c + 1)]
    })
}
