//! Seeded random states for checks and scans.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::antistate::{antistate, SpectralPairing, WeightedPair};
use crate::symrep::{DickeVector, SymDensity};
use crate::{Error, Result, C64};

pub type StateRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-random pure symmetric state.
pub fn random_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DickeVector {
    let v = DVector::from_fn(n + 1, |_, _| gaussian_c64(rng));
    DickeVector::new(v)
        .and_then(|d| d.normalized())
        .expect("gaussian vector is nonzero")
}

/// `G G† / tr` with `G` an `(N+1)×rank` complex Gaussian matrix.
pub fn random_density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> SymDensity {
    let g = DMatrix::from_fn(n + 1, rank.max(1), |_, _| gaussian_c64(rng));
    let mut m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    m /= C64::new(tr, 0.0);
    let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    SymDensity::new(herm).expect("normalized Gram matrix")
}

/// Random weights `λ_i ≥ 0` with `Σ λ_i = total`.
pub fn random_weights<R: Rng + ?Sized>(count: usize, total: f64, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..count).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|r| total * r / s).collect()
}

/// Random state without N-partite correlations built from `n_pairs`
/// orthonormal state/antistate pairs with random weights summing to 1/2.
pub fn random_snc_pairing<R: Rng + ?Sized>(
    n: usize,
    n_pairs: usize,
    rng: &mut R,
) -> Result<SpectralPairing> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenQubitNumber {
            op: "random_snc",
            n,
        });
    }
    let max_pairs = n.div_ceil(2);
    if n_pairs == 0 || n_pairs > max_pairs {
        return Err(Error::InvalidParameter(format!(
            "{n_pairs} pairs for {n} qubits"
        )));
    }
    let weights = random_weights(n_pairs, 0.5, rng);
    let mut taken: Vec<DVector<C64>> = Vec::new();
    let mut pairs = Vec::with_capacity(n_pairs);
    for w in weights {
        let psi = loop {
            let mut v = random_pure(n, rng).amplitudes().clone();
            for _ in 0..2 {
                for t in &taken {
                    let p = t.dotc(&v);
                    v -= t * p;
                }
            }
            if v.norm() > 1e-3 {
                break DickeVector::new(v)?.normalized()?;
            }
        };
        let psibar = antistate(&psi);
        taken.push(psi.amplitudes().clone());
        taken.push(psibar.amplitudes().clone());
        pairs.push(WeightedPair {
            weight: w,
            psi,
            psibar,
        });
    }
    Ok(SpectralPairing { n_qubits: n, pairs })
}

/// Random correlation-free state with a uniformly drawn number of pairs.
pub fn random_snc<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SymDensity> {
    let n_pairs = rng.random_range(1..=n.div_ceil(2));
    let pairing = random_snc_pairing(n, n_pairs, rng)?;
    let m = pairing.reconstruct();
    let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    SymDensity::new(herm)
}
