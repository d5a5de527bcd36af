//! Universal-NOT, antistates and the spectral pairing of correlation-free states.
//!
//! In the Dicke basis the qubit-wise universal-NOT sends `|D_N^(k)⟩` to
//! `(-1)^{N-k} |D_N^(N-k)⟩` and conjugates amplitudes, so the antistate of
//! `Σ c_k |D_N^(k)⟩` has amplitude `(-1)^j conj(c_{N-j})` at index `j`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, binom};
use crate::nocorr::{is_snc, SNC_TOL};
use crate::symrep::{to_tensor, BlochVector, DickeVector, SymDensity};
use crate::{Error, Result, C64};

/// Default width of an eigenvalue cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Largest tolerated excess of `tr ρ²` over 1/2.
pub const PURITY_TOL: f64 = 1e-10;
/// Relative size below which a leading Majorana coefficient counts as zero.
pub const MAJORANA_LEAD_TOL: f64 = 1e-12;

pub fn antistate(psi: &DickeVector) -> DickeVector {
    let n = psi.n_qubits();
    let c = psi.amplitudes();
    let out = DVector::from_fn(n + 1, |j, _| {
        let z = c[n - j].conj();
        if j % 2 == 0 {
            z
        } else {
            -z
        }
    });
    DickeVector::new(out).expect("nonempty")
}

/// `𝔑^{⊗N} ρ (𝔑^{⊗N})^{-1}` in the Dicke basis.
pub fn conjugate_by_universal_not(rho: &SymDensity) -> DMatrix<C64> {
    let n = rho.n_qubits();
    let m = rho.matrix();
    DMatrix::from_fn(n + 1, n + 1, |j, l| {
        let z = m[(n - j, n - l)].conj();
        if (j + l) % 2 == 0 {
            z
        } else {
            -z
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPair {
    pub weight: f64,
    pub psi: DickeVector,
    pub psibar: DickeVector,
}

/// `ρ = Σ λ_i (|ψ_i⟩⟨ψ_i| + |ψ̄_i⟩⟨ψ̄_i|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPairing {
    pub n_qubits: usize,
    pub pairs: Vec<WeightedPair>,
}

impl SpectralPairing {
    pub fn weight_sum(&self) -> f64 {
        self.pairs.iter().map(|p| p.weight).sum()
    }

    pub fn reconstruct(&self) -> DMatrix<C64> {
        let d = self.n_qubits + 1;
        let mut m = DMatrix::zeros(d, d);
        for p in &self.pairs {
            let w = C64::new(p.weight, 0.0);
            m += (linalg::outer(p.psi.amplitudes()) + linalg::outer(p.psibar.amplitudes())) * w;
        }
        m
    }

    /// Largest `|⟨u|v⟩|` over distinct vectors of the pairing.
    pub fn max_cross_overlap(&self) -> f64 {
        let vecs: Vec<&DickeVector> = self
            .pairs
            .iter()
            .flat_map(|p| [&p.psi, &p.psibar])
            .collect();
        let mut worst = 0.0_f64;
        for i in 0..vecs.len() {
            for j in (i + 1)..vecs.len() {
                worst = worst.max(vecs[i].inner(vecs[j]).norm());
            }
        }
        worst
    }
}

/// Splits the spectrum of a correlation-free state into state/antistate pairs.
///
/// Eigenvalues are grouped into clusters whose consecutive gaps are at most
/// `tol`; within a cluster a vector and its antistate are taken out together
/// and the rest of the cluster is re-orthonormalized against them. Clusters
/// at eigenvalue zero are checked for even dimension but not emitted.
pub fn pair_decompose(rho: &SymDensity, tol: f64) -> Result<SpectralPairing> {
    let n = rho.n_qubits();
    if n.is_multiple_of(2) {
        return Err(Error::EvenQubitNumber {
            op: "pair_decompose",
            n,
        });
    }
    let report = is_snc(&to_tensor(rho)?, SNC_TOL);
    if !report.is_snc {
        return Err(Error::NotSnc(report.max_violation()));
    }
    let (vals, vecs) = linalg::eigh(rho.matrix());
    let d = n + 1;
    let mut pairs = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && vals[end] - vals[end - 1] <= tol {
            end += 1;
        }
        let dim = end - start;
        let mean = vals[start..end].iter().sum::<f64>() / dim as f64;
        if dim % 2 == 1 {
            return Err(Error::OddCluster { value: mean, dim });
        }
        if mean.abs() > tol {
            let basis: Vec<DVector<C64>> =
                (start..end).map(|c| vecs.column(c).into_owned()).collect();
            pair_cluster(rho, basis, &mut pairs)?;
        }
        start = end;
    }
    pairs.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    Ok(SpectralPairing { n_qubits: n, pairs })
}

fn pair_cluster(
    rho: &SymDensity,
    mut basis: Vec<DVector<C64>>,
    out: &mut Vec<WeightedPair>,
) -> Result<()> {
    let m = rho.matrix();
    while !basis.is_empty() {
        let psi = DickeVector::new(basis.remove(0))?.normalized()?;
        let psibar = antistate(&psi);
        let rq = |v: &DickeVector| (v.amplitudes().adjoint() * m * v.amplitudes())[(0, 0)].re;
        let weight = 0.5 * (rq(&psi) + rq(&psibar));
        let keep = basis.len().saturating_sub(1);
        let projected: Vec<DVector<C64>> = basis
            .iter()
            .map(|v| {
                let a = psi.amplitudes();
                let b = psibar.amplitudes();
                v - a * a.dotc(v) - b * b.dotc(v)
            })
            .collect();
        basis = orthonormal_subset(projected, keep);
        out.push(WeightedPair {
            weight,
            psi,
            psibar,
        });
    }
    Ok(())
}

/// Modified Gram–Schmidt choosing the largest remaining residual at each step.
fn orthonormal_subset(mut vs: Vec<DVector<C64>>, keep: usize) -> Vec<DVector<C64>> {
    let mut out: Vec<DVector<C64>> = Vec::with_capacity(keep);
    while out.len() < keep && !vs.is_empty() {
        let (best, _) =
            vs.iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .fold(
                    (0, -1.0),
                    |acc, (i, nv)| if nv > acc.1 { (i, nv) } else { acc },
                );
        let v = vs.swap_remove(best);
        let q = &v / C64::new(v.norm(), 0.0);
        for w in vs.iter_mut() {
            let proj = q.dotc(w);
            *w -= &q * proj;
        }
        out.push(q);
    }
    out
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Purity {
    pub value: f64,
    /// `tr ρ² > 1/2 + PURITY_TOL`.
    pub exceeds_bound: bool,
}

pub fn purity_check(rho: &SymDensity) -> Purity {
    let value = rho.purity();
    Purity {
        value,
        exceeds_bound: value > 0.5 + PURITY_TOL,
    }
}

/// Majorana points of a pure symmetric state.
///
/// Roots of `p(z) = Σ_k (-1)^k √C(N,k) c_k z^k` are mapped to the sphere by
/// `z = cot(θ/2) e^{-iφ}`; a coherent state along `𝐧` then has an N-fold
/// root at `𝐧`. Roots lost to a vanishing leading coefficient sit at
/// infinity, i.e. the north pole `θ = 0`.
pub fn majorana_roots(psi: &DickeVector) -> Result<Vec<BlochVector>> {
    let n = psi.n_qubits();
    let c = psi.amplitudes();
    if c.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let coeffs: Vec<C64> = (0..=n)
        .map(|k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            c[k] * (s * binom(n, k).sqrt())
        })
        .collect();
    let roots = linalg::poly_roots(&coeffs, MAJORANA_LEAD_TOL);
    let mut points: Vec<BlochVector> = vec![BlochVector::new(0.0, 0.0); n - roots.len()];
    points.extend(roots.iter().map(|z| {
        let r = z.norm();
        BlochVector::new(2.0 * 1f64.atan2(r), -z.arg())
    }));
    Ok(points)
}

/// Largest distance between the Majorana points of `ψ̄` and the antipodes of
/// those of `ψ`, under a greedy nearest-point matching.
pub fn antipodality_error(psi: &DickeVector) -> Result<f64> {
    let a: Vec<BlochVector> = majorana_roots(psi)?
        .iter()
        .map(BlochVector::antipode)
        .collect();
    let mut b = majorana_roots(&antistate(psi))?;
    let mut worst = 0.0_f64;
    for p in &a {
        let (idx, dist) = b.iter().enumerate().map(|(i, q)| (i, p.distance(q))).fold(
            (0, f64::INFINITY),
            |acc, x| if x.1 < acc.1 { x } else { acc },
        );
        worst = worst.max(dist);
        b.swap_remove(idx);
    }
    Ok(worst)
}
