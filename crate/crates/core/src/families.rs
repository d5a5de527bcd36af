//! Explicit genuinely entangled families without N-partite correlations.
//!
//! Both families use `ψ_i = (|D_N^(i)⟩ + |D_N^(N-i)⟩)/√2` and its antistate,
//! for which `|ψ_i⟩⟨ψ_i| + |ψ̄_i⟩⟨ψ̄_i| = |D^(i)⟩⟨D^(i)| + |D^(N-i)⟩⟨D^(N-i)|`.
//! Mixtures with weights `λ_0 … λ_M` are therefore diagonal in the Dicke basis.

use serde::{Deserialize, Serialize};

use crate::entcert::{CorrelationMatrixA, Verdict};
use crate::linalg::binom;
use crate::symrep::{DickeVector, SymDensity};
use crate::{Error, Result, C64};

/// Tolerance on `Σ λ_i = 1/2`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Exact three-qubit threshold on `λ_1`.
pub const N3_THRESHOLD: f64 = 3.0 / 8.0;

const U_GRID: usize = 1000;
const GOLDEN_TOL: f64 = 1e-12;

fn check_odd_range(op: &'static str, n: usize, r: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenQubitNumber { op, n });
    }
    if r > n {
        return Err(Error::ExcitationOutOfRange { n, k: r });
    }
    Ok(())
}

/// `(|D_N^(r)⟩ + |D_N^(N-r)⟩)/√2`.
pub fn dicke_superposition(n: usize, r: usize) -> Result<DickeVector> {
    check_odd_range("dicke_superposition", n, r)?;
    let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let amps: Vec<C64> = (0..=n)
        .map(|k| {
            if k == r || k == n - r {
                a
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    DickeVector::from_slice(&amps)
}

/// `(|ψ⟩⟨ψ| + |ψ̄⟩⟨ψ̄|)/2` for the Dicke superposition, built diagonally.
pub fn rank2_state(n: usize, r: usize) -> Result<SymDensity> {
    check_odd_range("rank2_state", n, r)?;
    let mut w = vec![0.0; n + 1];
    w[r] = 0.5;
    w[n - r] = 0.5;
    SymDensity::diagonal(&w)
}

/// Two-body correlation matrix of the rank-2 family:
/// `diag(2r(N-r), 2r(N-r), (N-2r)² - N) / (N(N-1))`.
pub fn a_closed_form(n: usize, r: usize) -> Result<CorrelationMatrixA> {
    check_odd_range("a_closed_form", n, r)?;
    if n < 3 {
        return Err(Error::TooFewQubits {
            op: "a_closed_form",
            min: 3,
            n,
        });
    }
    let (nf, rf) = (n as f64, r as f64);
    let denom = nf * (nf - 1.0);
    let xy = 2.0 * rf * (nf - rf) / denom;
    let z = ((nf - 2.0 * rf).powi(2) - nf) / denom;
    Ok(CorrelationMatrixA::diagonal([xy, xy, z]))
}

/// Rank of `A` predicted for the rank-2 family.
pub fn predicted_rank(n: usize, r: usize) -> usize {
    if r == 0 || r == n {
        return 1;
    }
    let d = (n as i64 - 2 * r as i64).pow(2);
    if d == n as i64 {
        2
    } else {
        3
    }
}

/// Weights of a Dicke-pair mixture on `N = 2M + 1` qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub n_qubits: usize,
    pub weights: Vec<f64>,
}

impl MixtureSpec {
    pub fn new(n_qubits: usize, weights: Vec<f64>) -> Result<Self> {
        let spec = Self { n_qubits, weights };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        if n.is_multiple_of(2) {
            return Err(Error::EvenQubitNumber {
                op: "MixtureSpec",
                n,
            });
        }
        let m = n / 2;
        if self.weights.len() != m + 1 {
            return Err(Error::Dimension {
                expected: m + 1,
                got: self.weights.len(),
            });
        }
        if let Some(w) = self.weights.iter().find(|w| w.is_nan() || **w < 0.0) {
            return Err(Error::InvalidParameter(format!("negative weight {w}")));
        }
        let s: f64 = self.weights.iter().sum();
        if (s - 0.5).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {s}, expected 1/2"
            )));
        }
        Ok(())
    }

    /// Three-qubit spec `(1/2 - λ1, λ1)`.
    pub fn three_qubit(lambda1: f64) -> Result<Self> {
        Self::new(3, vec![0.5 - lambda1, lambda1])
    }

    fn sum_sq(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }
}

pub fn mixture_state(spec: &MixtureSpec) -> Result<SymDensity> {
    spec.validate()?;
    let n = spec.n_qubits;
    let mut d = vec![0.0; n + 1];
    for (i, &w) in spec.weights.iter().enumerate() {
        d[i] = w;
        d[n - i] = w;
    }
    SymDensity::diagonal(&d)
}

/// `⟨n|(|D^(i)⟩⟨D^(i)| + |D^(N-i)⟩⟨D^(N-i)|)|n⟩`:
/// `C(N,i) (sinθ/2)^{2i} ((1 - cosθ)^{N-2i} + (1 + cosθ)^{N-2i}) / 2^{N-2i}`.
pub fn u_function(n: usize, i: usize, theta: f64) -> Result<f64> {
    if 2 * i > n {
        return Err(Error::InvalidParameter(format!(
            "pair index {i} out of range for {n} qubits"
        )));
    }
    let (s, c) = theta.sin_cos();
    let k = (n - 2 * i) as i32;
    let tail = ((1.0 - c).powi(k) + (1.0 + c).powi(k)) / 2f64.powi(k);
    Ok(binom(n, i) * (s / 2.0).powi(2 * i as i32) * tail)
}

/// `max_θ u_i(θ)`: grid seed on `[0, π]` then golden-section refinement.
pub fn max_u(n: usize, i: usize) -> Result<f64> {
    u_function(n, i, 0.0)?;
    let u = |t: f64| u_function(n, i, t).expect("range checked");
    let h = std::f64::consts::PI / U_GRID as f64;
    let (best_j, best_v) =
        (0..=U_GRID)
            .map(|j| (j, u(j as f64 * h)))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
    let lo = (best_j as f64 - 1.0).max(0.0) * h;
    let hi = (best_j as f64 + 1.0).min(U_GRID as f64) * h;
    Ok(golden_max(u, lo, hi).max(best_v))
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > GOLDEN_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    f(0.5 * (a + b)).max(fc).max(fd)
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereBound {
    /// `Σ C(N,i) λ_i / 4^i < 2 Σ λ_i²`.
    pub holds: bool,
    /// `2 Σ λ_i² - Σ C(N,i) λ_i / 4^i`.
    pub margin: f64,
    /// Signed distance of `λ` from the sphere through the origin centered at
    /// [`sphere_center`]; positive outside.
    pub distance: f64,
}

/// Center `c_i = C(N,i) / 2^{2i+2}` of the sphere equivalent to the analytic bound.
pub fn sphere_center(n: usize) -> Vec<f64> {
    (0..=n / 2)
        .map(|i| binom(n, i) / 2f64.powi(2 * i as i32 + 2))
        .collect()
}

/// Analytic sufficient bound for the Dicke-pair mixture.
pub fn sphere_bound(spec: &MixtureSpec) -> SphereBound {
    let n = spec.n_qubits;
    let lhs: f64 = spec
        .weights
        .iter()
        .enumerate()
        .map(|(i, w)| binom(n, i) * w / 4f64.powi(i as i32))
        .sum();
    let margin = 2.0 * spec.sum_sq() - lhs;
    let c = sphere_center(n);
    let radius = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dist_center = spec
        .weights
        .iter()
        .zip(&c)
        .map(|(w, x)| (w - x).powi(2))
        .sum::<f64>()
        .sqrt();
    SphereBound {
        holds: margin > 0.0,
        margin,
        distance: dist_center - radius,
    }
}

/// Intersection of the bound's sphere with the plane `Σ λ = 1/2`, seen from
/// the vertex `E = (1/2) e_{i0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneBoundary {
    /// Point of the sphere–plane intersection closest to `E`.
    pub closest: Vec<f64>,
    /// Distance from `E` to that point.
    pub distance: f64,
}

pub fn plane_boundary_from_vertex(n: usize, i0: usize) -> Result<PlaneBoundary> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenQubitNumber {
            op: "plane_boundary_from_vertex",
            n,
        });
    }
    let dim = n / 2 + 1;
    if i0 >= dim {
        return Err(Error::InvalidParameter(format!(
            "vertex index {i0} out of range"
        )));
    }
    let c = sphere_center(n);
    let shift = (0.5 - c.iter().sum::<f64>()) / dim as f64;
    let c_plane: Vec<f64> = c.iter().map(|x| x + shift).collect();
    let r2 = c.iter().map(|x| x * x).sum::<f64>() - shift * shift * dim as f64;
    let radius = r2.max(0.0).sqrt();
    let mut e = vec![0.0; dim];
    e[i0] = 0.5;
    let diff: Vec<f64> = e.iter().zip(&c_plane).map(|(a, b)| a - b).collect();
    let dn = diff.iter().map(|x| x * x).sum::<f64>().sqrt();
    let closest = c_plane
        .iter()
        .zip(&diff)
        .map(|(cp, d)| cp + radius * d / dn)
        .collect();
    Ok(PlaneBoundary {
        closest,
        distance: (dn - radius).abs(),
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedBound {
    /// `Σ λ_i max_θ u_i(θ) < 2 Σ λ_i²`.
    pub holds: bool,
    pub margin: f64,
}

pub fn weighted_bound(spec: &MixtureSpec) -> Result<WeightedBound> {
    let n = spec.n_qubits;
    let mut lhs = 0.0;
    for (i, w) in spec.weights.iter().enumerate() {
        if *w != 0.0 {
            lhs += w * max_u(n, i)?;
        }
    }
    let margin = 2.0 * spec.sum_sq() - lhs;
    Ok(WeightedBound {
        holds: margin > 0.0,
        margin,
    })
}

/// Three-qubit Dicke-pair mixture: genuinely entangled iff `λ_1 > 3/8`.
pub fn exact_threshold_n3(lambda1: f64) -> Result<Verdict> {
    if !(0.0..=0.5).contains(&lambda1) {
        return Err(Error::InvalidParameter(format!(
            "λ1 = {lambda1} outside [0, 1/2]"
        )));
    }
    Ok(if lambda1 > N3_THRESHOLD {
        Verdict::GenuinelyEntangled
    } else {
        Verdict::Separable
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antistate::antistate;
    use approx::assert_abs_diff_eq;

    #[test]
    fn superposition_examples() {
        let s = dicke_superposition(3, 0).unwrap();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitudes()[0].re, a);
        assert_abs_diff_eq!(s.amplitudes()[3].re, a);
        let s = dicke_superposition(5, 2).unwrap();
        assert_eq!(s, dicke_superposition(5, 3).unwrap());
        assert_abs_diff_eq!(s.amplitudes()[2].re, a);
        assert!(s.inner(&antistate(&s)).norm() < 1e-15);
        assert!(dicke_superposition(4, 1).is_err());
        assert!(dicke_superposition(5, 6).is_err());
    }

    #[test]
    fn rank2_state_matches_projector_pair() {
        for (n, r) in [(3, 1), (3, 0), (5, 2), (7, 3)] {
            let psi = dicke_superposition(n, r).unwrap();
            let bar = antistate(&psi);
            let pair = (psi.projector().matrix() + bar.projector().matrix()) * C64::new(0.5, 0.0);
            let direct = rank2_state(n, r).unwrap();
            assert!(crate::linalg::max_abs_diff(&pair, direct.matrix()) < 1e-15);
        }
        let d = rank2_state(3, 1).unwrap();
        assert_eq!(d.matrix()[(1, 1)].re, 0.5);
        assert_eq!(d.matrix()[(0, 0)].re, 0.0);
    }

    #[test]
    fn closed_form_values() {
        let a = a_closed_form(3, 1).unwrap();
        assert_abs_diff_eq!(
            *a.matrix(),
            *CorrelationMatrixA::diagonal([2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0]).matrix(),
            epsilon = 1e-15
        );
        let a = a_closed_form(9, 3).unwrap();
        assert_abs_diff_eq!(
            *a.matrix(),
            *CorrelationMatrixA::diagonal([0.5, 0.5, 0.0]).matrix(),
            epsilon = 1e-15
        );
        assert_eq!(a.rank(), 2);
        assert_eq!(a_closed_form(7, 0).unwrap().rank(), 1);
        assert_eq!(predicted_rank(9, 6), 2);
        assert_eq!(predicted_rank(9, 4), 3);
    }

    #[test]
    fn mixture_examples() {
        let m = mixture_state(&MixtureSpec::new(3, vec![0.0, 0.5]).unwrap()).unwrap();
        assert_eq!(m, rank2_state(3, 1).unwrap());
        let m = mixture_state(&MixtureSpec::new(5, vec![0.0, 0.0, 0.5]).unwrap()).unwrap();
        assert_eq!(m, rank2_state(5, 2).unwrap());
        let m = mixture_state(&MixtureSpec::new(3, vec![0.25, 0.25]).unwrap()).unwrap();
        assert_abs_diff_eq!(m.purity(), 0.25, epsilon = 1e-15);
        assert!(MixtureSpec::new(3, vec![0.3, 0.3]).is_err());
        assert!(MixtureSpec::new(3, vec![0.6, -0.1]).is_err());
        assert!(MixtureSpec::new(4, vec![0.25, 0.25, 0.0]).is_err());
        assert!(MixtureSpec::new(5, vec![0.25, 0.25]).is_err());
    }

    #[test]
    fn u_values() {
        for n in [3, 5, 7] {
            assert_abs_diff_eq!(u_function(n, 0, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        }
        // N = 3: u_1 = 3 sin²θ / 4
        assert_abs_diff_eq!(max_u(3, 1).unwrap(), 0.75, epsilon = 1e-12);
        assert!(u_function(5, 3, 0.1).is_err());
    }

    #[test]
    fn sphere_bound_examples() {
        let t = sphere_bound(&MixtureSpec::new(3, vec![1.0 / 16.0, 7.0 / 16.0]).unwrap());
        assert_eq!(t.margin, 0.0);
        assert!(!t.holds);
        assert_abs_diff_eq!(t.distance, 0.0, epsilon = 1e-15);
        let e = sphere_bound(&MixtureSpec::new(3, vec![0.0, 0.5]).unwrap());
        assert!(e.holds);
        assert_abs_diff_eq!(e.margin, 0.5 - 0.375, epsilon = 1e-15);
        assert!(e.distance > 0.0);
        let f = sphere_bound(&MixtureSpec::new(3, vec![0.25, 0.25]).unwrap());
        assert!(!f.holds);
        assert_abs_diff_eq!(f.margin, 0.25 - 7.0 / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn closest_boundary_point_from_vertex_n3() {
        let b = plane_boundary_from_vertex(3, 1).unwrap();
        assert_abs_diff_eq!(b.closest[0], 1.0 / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.closest[1], 7.0 / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            b.distance,
            (2.0f64 * (1.0 / 16.0f64).powi(2)).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn weighted_bound_examples() {
        assert!(
            weighted_bound(&MixtureSpec::new(3, vec![0.0, 0.5]).unwrap())
                .unwrap()
                .holds
        );
        assert!(
            weighted_bound(&MixtureSpec::new(5, vec![0.0, 0.0, 0.5]).unwrap())
                .unwrap()
                .holds
        );
        assert!(
            !weighted_bound(&MixtureSpec::new(3, vec![0.25, 0.25]).unwrap())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(
            exact_threshold_n3(0.4).unwrap(),
            Verdict::GenuinelyEntangled
        );
        assert_eq!(exact_threshold_n3(0.3).unwrap(), Verdict::Separable);
        assert_eq!(
            exact_threshold_n3(7.0 / 16.0).unwrap(),
            Verdict::GenuinelyEntangled
        );
        assert_eq!(exact_threshold_n3(0.375).unwrap(), Verdict::Separable);
        assert!(exact_threshold_n3(0.6).is_err());
    }
}
