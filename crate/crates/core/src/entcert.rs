//! Entanglement and separability certifiers for symmetric states.
//!
//! Symmetric states are either fully separable or genuinely entangled, so
//! every certifier answers with a [`Verdict`]. Exact tests (three qubits,
//! rank two, partial transpose on `2 × 3`) can return `Separable`; the
//! sufficient tests only ever return `GenuinelyEntangled` or `Undetected`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::antistate::CLUSTER_TOL;
use crate::linalg;
use crate::nocorr::{is_snc, SNC_TOL};
use crate::symrep::{
    embed_one_qubit, to_tensor, BlochVector, PauliCounts, SymDensity, SymTensor, POSITIVITY_TOL,
};
use crate::{Error, Result, C64};

/// Polar rows of the default mesh; the azimuthal count is `2 (grid - 1)`.
pub const DEFAULT_GRID: usize = 181;
pub const DEFAULT_REFINE: usize = 40;
/// Strictness margin for `⟨n|ρ|n⟩ < tr ρ²`.
pub const SUFFICIENT_MARGIN: f64 = 1e-9;
/// Strictness margin for the rank-2 boundary `⟨n|ρ|n⟩ < 1/2`.
pub const RANK2_MARGIN: f64 = 1e-6;
/// Relative singular-value threshold for the rank of `A`.
pub const RANK_TOL: f64 = 1e-8;
/// Strictness margin for `max α < Σ α²`.
pub const ALPHA_MARGIN: f64 = 1e-12;
/// Tolerance of `tr A = 1` and `Σ α = 1`.
pub const TRACE_TOL: f64 = 1e-9;

const START_POINTS: usize = 10;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Separable,
    GenuinelyEntangled,
    Undetected,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Bloch { theta: f64, phi: f64, value: f64 },
    AEigenvalues { a_eigenvalues: [f64; 3] },
    Ppt { min_ppt_eigenvalue: f64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Signed distance from the decision boundary of the test that decided.
    pub margin: f64,
}

/// `A_ab = ⟨σ_a σ_b 1…1⟩`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CorrelationMatrixA(pub Matrix3<f64>);

impl CorrelationMatrixA {
    pub fn diagonal(a: [f64; 3]) -> Self {
        Self(Matrix3::from_diagonal(&a.into()))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut e: Vec<f64> = SymmetricEigen::new(self.0)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        e.sort_by(f64::total_cmp);
        [e[0], e[1], e[2]]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Number of singular values above `RANK_TOL` times the largest.
    pub fn rank(&self) -> usize {
        let sv = self.eigenvalues().map(f64::abs);
        let top = sv.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > RANK_TOL * top).count()
    }
}

/// `⟨n|ρ|n⟩` as a trigonometric polynomial in `φ` for each fixed `θ`.
struct OverlapFn<'a> {
    n: usize,
    rho: &'a DMatrix<C64>,
    binom_sqrt: Vec<f64>,
}

impl<'a> OverlapFn<'a> {
    fn new(rho: &'a SymDensity) -> Self {
        let n = rho.n_qubits();
        let binom_sqrt = (0..=n).map(|k| linalg::binom(n, k).sqrt()).collect();
        Self {
            n,
            rho: rho.matrix(),
            binom_sqrt,
        }
    }

    /// `g_d(θ) = Σ_k a_k a_{k+d} ρ_{k,k+d}` with `a_k = √C(N,k) sin^k(θ/2) cos^{N-k}(θ/2)`.
    fn row(&self, theta: f64) -> Vec<C64> {
        let n = self.n;
        let (s, c) = (theta / 2.0).sin_cos();
        let a: Vec<f64> = (0..=n)
            .map(|k| self.binom_sqrt[k] * s.powi(k as i32) * c.powi((n - k) as i32))
            .collect();
        (0..=n)
            .map(|d| {
                (0..=n - d)
                    .map(|k| self.rho[(k, k + d)] * (a[k] * a[k + d]))
                    .sum()
            })
            .collect()
    }

    fn eval_row(g: &[C64], phi: f64) -> f64 {
        let step = C64::from_polar(1.0, phi);
        let mut ph = C64::new(1.0, 0.0);
        let mut acc = g[0].re;
        for gd in &g[1..] {
            ph *= step;
            acc += 2.0 * (gd * ph).re;
        }
        acc
    }

    fn eval(&self, theta: f64, phi: f64) -> f64 {
        Self::eval_row(&self.row(theta), phi)
    }

    /// Evaluates at a point that may have left `θ ∈ [0, π]`.
    fn eval_wrapped(&self, theta: f64, phi: f64) -> f64 {
        let p = BlochVector::new(theta, phi);
        self.eval(p.theta, p.phi)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapMax {
    pub value: f64,
    pub n_star: BlochVector,
}

/// `max_𝐧 ⟨n|ρ|n⟩` over the sphere.
///
/// Evaluates a `grid × 2(grid - 1)` latitude–longitude mesh, then polishes
/// the ten best mesh points with coordinate-wise parabolic steps whose
/// bracket halves every round. Ties resolve to the smallest `θ`, then `φ`.
pub fn max_overlap(rho: &SymDensity, grid: usize, refine: usize) -> OverlapMax {
    let grid = grid.max(2);
    let n_phi = 2 * (grid - 1);
    let d_theta = PI / (grid - 1) as f64;
    let d_phi = 2.0 * PI / n_phi as f64;
    let f = OverlapFn::new(rho);

    let mut mesh: Vec<(f64, f64, f64)> = Vec::with_capacity(grid * n_phi);
    for i in 0..grid {
        let theta = i as f64 * d_theta;
        let g = f.row(theta);
        let cols = if i == 0 || i == grid - 1 { 1 } else { n_phi };
        for j in 0..cols {
            let phi = j as f64 * d_phi;
            mesh.push((OverlapFn::eval_row(&g, phi), theta, phi));
        }
    }
    mesh.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });

    let mut best = mesh[0];
    for &(v0, t0, p0) in mesh.iter().take(START_POINTS) {
        let cand = polish(&f, (v0, t0, p0), d_theta, d_phi, refine);
        if better(cand, best) {
            best = cand;
        }
    }
    let n_star = BlochVector::new(best.1, best.2);
    OverlapMax {
        value: best.0,
        n_star,
    }
}

fn better(a: (f64, f64, f64), b: (f64, f64, f64)) -> bool {
    a.0.total_cmp(&b.0)
        .then(b.1.total_cmp(&a.1))
        .then(b.2.total_cmp(&a.2))
        .is_gt()
}

fn polish(
    f: &OverlapFn,
    start: (f64, f64, f64),
    d_theta: f64,
    d_phi: f64,
    rounds: usize,
) -> (f64, f64, f64) {
    let (mut v, mut t, mut p) = start;
    let (mut ht, mut hp) = (d_theta, d_phi);
    for _ in 0..rounds {
        (v, t) = parabolic_step(v, t, ht, |x| f.eval_wrapped(x, p));
        (v, p) = parabolic_step(v, p, hp, |y| f.eval_wrapped(t, y));
        ht *= 0.5;
        hp *= 0.5;
    }
    let b = BlochVector::new(t, p);
    (v, b.theta, b.phi)
}

/// One bracketed parabolic move along a coordinate; never decreases `f`.
fn parabolic_step(f0: f64, x: f64, h: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let fm = f(x - h);
    let fp = f(x + h);
    let mut best = (f0, x);
    for cand in [(fm, x - h), (fp, x + h)] {
        if cand.0 > best.0 {
            best = cand;
        }
    }
    let curv = fm - 2.0 * f0 + fp;
    if curv < 0.0 {
        let off = (0.5 * h * (fm - fp) / curv).clamp(-h, h);
        let xv = x + off;
        let fv = f(xv);
        if fv > best.0 {
            best = (fv, xv);
        }
    }
    best
}

/// Genuine entanglement if `⟨n|ρ|n⟩ < tr ρ²` for every `𝐧`.
pub fn sufficient_criterion(rho: &SymDensity) -> CertVerdict {
    sufficient_criterion_with(rho, DEFAULT_GRID, DEFAULT_REFINE, SUFFICIENT_MARGIN)
}

pub fn sufficient_criterion_with(
    rho: &SymDensity,
    grid: usize,
    refine: usize,
    margin: f64,
) -> CertVerdict {
    let best = max_overlap(rho, grid, refine);
    let gap = rho.purity() - best.value;
    let verdict = if gap > margin {
        Verdict::GenuinelyEntangled
    } else {
        Verdict::Undetected
    };
    CertVerdict {
        verdict,
        witness: Some(Witness::Bloch {
            theta: best.n_star.theta,
            phi: best.n_star.phi,
            value: best.value,
        }),
        margin: gap,
    }
}

pub fn a_matrix(x: &SymTensor) -> Result<CorrelationMatrixA> {
    let n = x.n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits {
            op: "a_matrix",
            min: 2,
            n,
        });
    }
    let base = PauliCounts::identity(n - 2);
    let m = Matrix3::from_fn(|a, b| x.get(base.with_added(a + 1, 1).with_added(b + 1, 1)));
    Ok(CorrelationMatrixA(m))
}

fn require_snc(rho: &SymDensity) -> Result<SymTensor> {
    let x = to_tensor(rho)?;
    let report = is_snc(&x, SNC_TOL);
    if !report.is_snc {
        return Err(Error::NotSnc(report.max_violation()));
    }
    Ok(x)
}

/// Exact test for three-qubit correlation-free states: separable iff `A ⪰ 0`.
pub fn three_qubit_exact(rho: &SymDensity) -> Result<CertVerdict> {
    let n = rho.n_qubits();
    if n != 3 {
        return Err(Error::WrongQubitNumber {
            op: "three_qubit_exact",
            expected: 3,
            n,
        });
    }
    let a = a_matrix(&require_snc(rho)?)?;
    let eig = a.eigenvalues();
    let verdict = if eig[0] >= -POSITIVITY_TOL {
        Verdict::Separable
    } else {
        Verdict::GenuinelyEntangled
    };
    Ok(CertVerdict {
        verdict,
        witness: Some(Witness::AEigenvalues { a_eigenvalues: eig }),
        margin: eig[0],
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    /// `max α < Σ α²` inside the physical disk.
    pub detected: bool,
    /// `Σ α² ≤ 1`.
    pub physical: bool,
    pub max_alpha: f64,
    pub sum_sq: f64,
}

/// Sufficient criterion on the eigenvalues `α` of `A` for three qubits.
pub fn alpha_condition(alphas: [f64; 3]) -> Result<AlphaReport> {
    let sum: f64 = alphas.iter().sum();
    if (sum - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceA(sum));
    }
    let sum_sq: f64 = alphas.iter().map(|a| a * a).sum();
    let max_alpha = alphas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let physical = sum_sq <= 1.0 + ALPHA_MARGIN;
    let detected = physical && sum_sq - max_alpha > ALPHA_MARGIN;
    Ok(AlphaReport {
        detected,
        physical,
        max_alpha,
        sum_sq,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub min_eigenvalue: f64,
    pub verdict: Verdict,
}

/// Partial transpose of `ρ` embedded in `qubit ⊗ Sym_{N-1}`, transposed on the qubit.
pub fn partial_transpose_embedded(rho: &SymDensity) -> Result<DMatrix<C64>> {
    let e = embed_one_qubit(rho)?;
    let half = rho.n_qubits();
    Ok(DMatrix::from_fn(2 * half, 2 * half, |r, c| {
        let (q, j) = (r / half, r % half);
        let (qp, jp) = (c / half, c % half);
        e[(qp * half + j, q * half + jp)]
    }))
}

/// Peres–Horodecki test across one qubit versus the rest.
///
/// Exact for `N ≤ 3` (the cut is `2 × 2` or `2 × 3`); for larger `N` only a
/// negative eigenvalue is conclusive.
pub fn ppt_first_qubit(rho: &SymDensity) -> Result<PptReport> {
    let pt = partial_transpose_embedded(rho)?;
    let min_eigenvalue = linalg::min_eigenvalue(&pt);
    let negative = min_eigenvalue < -POSITIVITY_TOL;
    let verdict = match (negative, rho.n_qubits() <= 3) {
        (true, _) => Verdict::GenuinelyEntangled,
        (false, true) => Verdict::Separable,
        (false, false) => Verdict::Undetected,
    };
    Ok(PptReport {
        min_eigenvalue,
        verdict,
    })
}

/// `M[(μ1…μm), (μm+1…μ2m)] = x_{μ1…μ2m 0…0}`.
pub fn x_matrix(x: &SymTensor, m: usize) -> Result<DMatrix<f64>> {
    let n = x.n_qubits();
    if 2 * m > n {
        return Err(Error::InvalidParameter(format!(
            "x-matrix order {m} needs 2m ≤ N = {n}"
        )));
    }
    let dim = 4usize.pow(m as u32);
    let digits = |mut i: usize| {
        let mut c = [0usize; 4];
        for _ in 0..m {
            c[i % 4] += 1;
            i /= 4;
        }
        c
    };
    let counts: Vec<[usize; 4]> = (0..dim).map(digits).collect();
    Ok(DMatrix::from_fn(dim, dim, |r, c| {
        let (a, b) = (counts[r], counts[c]);
        x.get(PauliCounts::new(
            a[0] + b[0] + n - 2 * m,
            a[1] + b[1],
            a[2] + b[2],
            a[3] + b[3],
        ))
    }))
}

/// Smallest eigenvalue of the order-`m` x-matrix; negative certifies entanglement.
pub fn x_matrix_positivity(x: &SymTensor, m: usize) -> Result<f64> {
    Ok(linalg::eigvalsh_real(&x_matrix(x, m)?)[0])
}

/// Monic cubic `z³ + c2 z² + c1 z + c0`, stored descending.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicPoly {
    pub coeffs: [f64; 4],
}

impl CubicPoly {
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc * z + c)
    }

    pub fn roots(&self) -> Vec<C64> {
        let asc: Vec<C64> = self
            .coeffs
            .iter()
            .rev()
            .map(|&c| C64::new(c, 0.0))
            .collect();
        linalg::poly_roots(&asc, 0.0)
    }

    /// All roots have real part at least `-tol`.
    pub fn roots_nonnegative(&self, tol: f64) -> bool {
        self.roots().iter().all(|z| z.re >= -tol)
    }
}

/// The cubic whose roots decide positivity of the partially transposed
/// three-qubit state:
/// `q(z) = z³ - 2z² + 3((trA)² - trA²)/2 z - 2((trA)³ - 3(trA)² trA² + 2 trA³)/3`.
pub fn q_poly(a: &CorrelationMatrixA) -> Result<CubicPoly> {
    let t1 = a.trace();
    if (t1 - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceA(t1));
    }
    let a2 = a.0 * a.0;
    let t2 = a2.trace();
    let t3 = (a2 * a.0).trace();
    let c1 = 3.0 * (t1 * t1 - t2) / 2.0;
    let c0 = -2.0 * (t1.powi(3) - 3.0 * t1 * t1 * t2 + 2.0 * t3) / 3.0;
    Ok(CubicPoly {
        coeffs: [1.0, -2.0, c1, c0],
    })
}

/// Exact test for rank-2 correlation-free states.
///
/// Separable iff `ρ = (|n⟩⟨n| + |n̄⟩⟨n̄|)/2` for some `𝐧`. A rank of `A`
/// above one already rules that out; otherwise the sphere maximum of
/// `⟨n|ρ|n⟩` decides against the value 1/2.
pub fn rank2_certify(rho: &SymDensity) -> Result<CertVerdict> {
    let rank = rho.rank(CLUSTER_TOL);
    if rank != 2 {
        return Err(Error::Rank(rank));
    }
    let a = a_matrix(&require_snc(rho)?)?;
    if a.rank() >= 2 {
        let eig = a.eigenvalues();
        let mut sv = eig.map(f64::abs);
        sv.sort_by(|x, y| y.total_cmp(x));
        // distance from rank one: second singular value
        return Ok(CertVerdict {
            verdict: Verdict::GenuinelyEntangled,
            witness: Some(Witness::AEigenvalues { a_eigenvalues: eig }),
            margin: sv[1],
        });
    }
    let best = max_overlap(rho, DEFAULT_GRID, DEFAULT_REFINE);
    let gap = 0.5 - best.value;
    let verdict = if gap > RANK2_MARGIN {
        Verdict::GenuinelyEntangled
    } else {
        Verdict::Separable
    };
    Ok(CertVerdict {
        verdict,
        witness: Some(Witness::Bloch {
            theta: best.n_star.theta,
            phi: best.n_star.phi,
            value: best.value,
        }),
        margin: gap,
    })
}
