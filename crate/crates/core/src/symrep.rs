//! Dicke-basis states and the tensor (correlator) representation.
//!
//! A symmetric N-qubit density matrix is stored as an `(N+1)×(N+1)` matrix
//! indexed by the excitation number `k` of the Dicke state `|D_N^(k)⟩`. Its
//! tensor coordinates `x_{μ1…μN} = tr(ρ S_{μ1…μN})` depend only on how many
//! times each Pauli index occurs, so they are keyed by [`PauliCounts`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, binom};
use crate::{Error, Result, C64};

/// Imaginary residue allowed when projecting `tr(ρS)` to a real coordinate.
pub const IMAG_TOL: f64 = 1e-9;
/// Tolerance on the contraction identity accepted by [`from_tensor`].
pub const CONTRACTION_TOL: f64 = 1e-9;
/// Eigenvalues above `-POSITIVITY_TOL` count as nonnegative.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Hermiticity and trace tolerance of a [`SymDensity`].
pub const DENSITY_TOL: f64 = 1e-12;

/// Occupation counts `(n0, n1, n2, n3)` of the Pauli indices in a tuple `(μ1, …, μN)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliCounts {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl PauliCounts {
    pub const fn new(n0: usize, n1: usize, n2: usize, n3: usize) -> Self {
        Self { n0, n1, n2, n3 }
    }

    /// The all-identity class `x_{0…0}`.
    pub const fn identity(n: usize) -> Self {
        Self::new(n, 0, 0, 0)
    }

    pub fn from_array(c: [usize; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.n0, self.n1, self.n2, self.n3]
    }

    /// Counts of an ordered index tuple. Panics on indices above 3.
    pub fn from_tuple(tuple: &[u8]) -> Self {
        let mut c = [0usize; 4];
        for &mu in tuple {
            c[mu as usize] += 1;
        }
        Self::from_array(c)
    }

    /// The sorted representative tuple `0…0 1…1 2…2 3…3`.
    pub fn to_tuple(&self) -> Vec<u8> {
        let mut t = Vec::with_capacity(self.n_qubits());
        for (mu, &n) in self.as_array().iter().enumerate() {
            t.extend(std::iter::repeat_n(mu as u8, n));
        }
        t
    }

    pub fn n_qubits(&self) -> usize {
        self.n0 + self.n1 + self.n2 + self.n3
    }

    /// Number of nonzero indices, `c(μ1, …, μN)`.
    pub fn nonzero(&self) -> usize {
        self.n1 + self.n2 + self.n3
    }

    pub fn count(&self, mu: usize) -> usize {
        self.as_array()[mu]
    }

    /// Number of ordered tuples in this class, `N!/(n0! n1! n2! n3!)`.
    pub fn multiplicity(&self) -> f64 {
        let n = self.n_qubits();
        binom(n, self.n0) * binom(n - self.n0, self.n1) * binom(n - self.n0 - self.n1, self.n2)
    }

    pub fn with_added(&self, mu: usize, k: usize) -> Self {
        let mut c = self.as_array();
        c[mu] += k;
        Self::from_array(c)
    }

    /// Every class for `n` qubits in canonical order: lexicographic on
    /// `(n0, n1, n2, n3)`, descending, so the identity class comes first.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(class_count(n));
        for n0 in (0..=n).rev() {
            for n1 in (0..=n - n0).rev() {
                for n2 in (0..=n - n0 - n1).rev() {
                    out.push(Self::new(n0, n1, n2, n - n0 - n1 - n2));
                }
            }
        }
        out
    }

    /// Position of this class in [`PauliCounts::all`].
    pub fn canonical_index(&self) -> usize {
        let n = self.n_qubits();
        let mut idx = 0;
        for m in (self.n0 + 1)..=n {
            let r = n - m;
            idx += (r + 1) * (r + 2) / 2;
        }
        let r = n - self.n0;
        for m in (self.n1 + 1)..=r {
            idx += r - m + 1;
        }
        idx + (r - self.n1 - self.n2)
    }
}

/// `C(N+3, 3)`, the number of coordinate classes.
pub fn class_count(n: usize) -> usize {
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// Permutation-invariant tensor coordinates of an N-qubit symmetric state.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    n_qubits: usize,
    coords: Vec<f64>,
}

impl SymTensor {
    /// Tensor with `x_{0…0} = 1` and every other coordinate zero.
    pub fn maximally_mixed_like(n: usize) -> Self {
        let mut coords = vec![0.0; class_count(n)];
        coords[0] = 1.0;
        Self {
            n_qubits: n,
            coords,
        }
    }

    /// Builds a tensor from `(counts, value)` pairs. Missing classes are zero.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliCounts, f64)>,
    {
        let mut coords = vec![0.0; class_count(n)];
        for (c, v) in entries {
            if c.n_qubits() != n {
                return Err(Error::CountsMismatch {
                    counts: c.as_array(),
                    n,
                });
            }
            coords[c.canonical_index()] = v;
        }
        Ok(Self {
            n_qubits: n,
            coords,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, c: PauliCounts) -> f64 {
        debug_assert_eq!(c.n_qubits(), self.n_qubits);
        self.coords[c.canonical_index()]
    }

    pub fn set(&mut self, c: PauliCounts, v: f64) {
        debug_assert_eq!(c.n_qubits(), self.n_qubits);
        self.coords[c.canonical_index()] = v;
    }

    /// Coordinate of an ordered index tuple.
    pub fn get_tuple(&self, tuple: &[u8]) -> f64 {
        self.get(PauliCounts::from_tuple(tuple))
    }

    /// `(counts, value)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (PauliCounts, f64)> + '_ {
        PauliCounts::all(self.n_qubits)
            .into_iter()
            .zip(self.coords.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Largest violation of `Σ_a x[…aa] = x[…00]` over all base classes.
    pub fn contraction_residual(&self) -> f64 {
        let n = self.n_qubits;
        if n < 2 {
            return 0.0;
        }
        PauliCounts::all(n - 2)
            .into_iter()
            .map(|base| {
                let lhs: f64 = (1..4).map(|a| self.get(base.with_added(a, 2))).sum();
                (lhs - self.get(base.with_added(0, 2))).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Pure symmetric state as amplitudes on `|D_N^(0)⟩ … |D_N^(N)⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeVector {
    n_qubits: usize,
    amplitudes: DVector<C64>,
}

impl DickeVector {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                got: 0,
            });
        }
        Ok(Self {
            n_qubits: amplitudes.len() - 1,
            amplitudes,
        })
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let nrm = self.norm();
        if nrm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: &self.amplitudes / C64::new(nrm, 0.0),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn projector(&self) -> SymDensity {
        SymDensity {
            n_qubits: self.n_qubits,
            matrix: linalg::outer(&self.amplitudes),
        }
    }
}

/// Mixed symmetric state in the Dicke basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SymDensity {
    n_qubits: usize,
    matrix: DMatrix<C64>,
}

impl SymDensity {
    /// Checks shape, Hermiticity and unit trace. Positivity is checked
    /// separately by [`SymDensity::validate`].
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || matrix.ncols() != d {
            return Err(Error::Dimension {
                expected: d.max(1),
                got: matrix.ncols(),
            });
        }
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = linalg::trace(&matrix);
        if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::Trace(tr.re));
        }
        Ok(Self {
            n_qubits: d - 1,
            matrix,
        })
    }

    /// Skips validation; used for intermediate results known to be Hermitian.
    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<C64>) -> Self {
        Self {
            n_qubits: matrix.nrows() - 1,
            matrix,
        }
    }

    /// Diagonal state from real weights on the Dicke projectors.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        let d = weights.len();
        Self::new(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(weights[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > tol).count()
    }

    /// Rejects states with an eigenvalue below `-POSITIVITY_TOL`.
    pub fn validate(&self) -> Result<()> {
        let m = self.min_eigenvalue();
        if m < -POSITIVITY_TOL {
            return Err(Error::NotPositive(m));
        }
        Ok(())
    }

    /// `⟨n|ρ|n⟩` for the coherent state along `n`.
    pub fn overlap(&self, n: &BlochVector) -> f64 {
        let c = coherent_state(self.n_qubits, n);
        let v = c.amplitudes();
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }
}

/// Unit vector on the sphere given by polar and azimuthal angles.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub theta: f64,
    pub phi: f64,
}

impl BlochVector {
    /// Wraps the angles into `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(2.0 * PI);
        let mut phi = phi;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        let phi = v[1].atan2(v[0]);
        Self::new(theta, phi)
    }

    /// `(n1, n2, n3)`.
    pub fn cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// The 4-vector `(1, n1, n2, n3)`.
    pub fn four(&self) -> [f64; 4] {
        let [a, b, c] = self.cartesian();
        [1.0, a, b, c]
    }

    pub fn antipode(&self) -> Self {
        Self::new(PI - self.theta, self.phi + PI)
    }

    /// Euclidean distance between the two points on the unit sphere.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.cartesian();
        let b = other.cartesian();
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}

pub fn dicke_state(n: usize, k: usize) -> Result<DickeVector> {
    if k > n {
        return Err(Error::ExcitationOutOfRange { n, k });
    }
    let mut v = DVector::zeros(n + 1);
    v[k] = C64::new(1.0, 0.0);
    DickeVector::new(v)
}

/// `|n⟩ = |𝐧⟩^{⊗N}` with `c_k = √C(N,k) sin^k(θ/2) (cos(θ/2) e^{-iφ})^{N-k}`.
pub fn coherent_state(n: usize, dir: &BlochVector) -> DickeVector {
    let (s, c) = (dir.theta / 2.0).sin_cos();
    let amps = DVector::from_fn(n + 1, |k, _| {
        let mag = binom(n, k).sqrt() * s.powi(k as i32) * c.powi((n - k) as i32);
        C64::from_polar(mag, -((n - k) as f64) * dir.phi)
    });
    DickeVector {
        n_qubits: n,
        amplitudes: amps,
    }
}

/// `S_{μ1…μN}` restricted to the symmetric subspace.
///
/// Sums the action of one ordered tuple over all computational strings,
/// grouping strings by how many excitations sit under each Pauli type: a
/// string with `j_μ` ones among the `n_μ` slots of type `μ` maps to a single
/// string of weight `j0 + (n1 - j1) + (n2 - j2) + j3` with phase
/// `i^{n2} (-1)^{j2 + j3}`, and there are `Π C(n_μ, j_μ)` such strings.
pub fn s_matrix(n: usize, idx: PauliCounts) -> Result<DMatrix<C64>> {
    if idx.n_qubits() != n {
        return Err(Error::CountsMismatch {
            counts: idx.as_array(),
            n,
        });
    }
    let PauliCounts { n0, n1, n2, n3 } = idx;
    let base_phase = match n2 % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    };
    let mut s = DMatrix::<C64>::zeros(n + 1, n + 1);
    for j0 in 0..=n0 {
        let w0 = binom(n0, j0);
        for j1 in 0..=n1 {
            let w1 = w0 * binom(n1, j1);
            for j2 in 0..=n2 {
                let w2 = w1 * binom(n2, j2);
                for j3 in 0..=n3 {
                    let w = w2 * binom(n3, j3);
                    let k_in = j0 + j1 + j2 + j3;
                    let k_out = j0 + (n1 - j1) + (n2 - j2) + j3;
                    let sign = if (j2 + j3) % 2 == 0 { 1.0 } else { -1.0 };
                    s[(k_out, k_in)] += base_phase * (sign * w);
                }
            }
        }
    }
    normalize_dicke(&mut s, n);
    Ok(s)
}

/// Literal string-sum for an ordered tuple: every weight-`k'` string is
/// pushed through the Pauli string one factor at a time. Exponential in
/// `tuple.len()`; [`s_matrix`] is the production path.
pub fn s_matrix_from_tuple(tuple: &[u8]) -> DMatrix<C64> {
    let n = tuple.len();
    let mut s = DMatrix::<C64>::zeros(n + 1, n + 1);
    for bits in 0u64..(1u64 << n) {
        let mut out = bits;
        let mut phase = C64::new(1.0, 0.0);
        for (pos, &mu) in tuple.iter().enumerate() {
            let mask = 1u64 << (n - 1 - pos);
            let one = bits & mask != 0;
            match mu {
                0 => {}
                1 => out ^= mask,
                2 => {
                    out ^= mask;
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
        s[(out.count_ones() as usize, bits.count_ones() as usize)] += phase;
    }
    normalize_dicke(&mut s, n);
    s
}

fn normalize_dicke(s: &mut DMatrix<C64>, n: usize) {
    for k in 0..=n {
        for kp in 0..=n {
            s[(k, kp)] /= (binom(n, k) * binom(n, kp)).sqrt();
        }
    }
}

/// All S-matrices of an `n`-qubit system, in canonical class order.
#[derive(Clone, Debug)]
pub struct SBasis {
    n_qubits: usize,
    classes: Vec<PauliCounts>,
    matrices: Vec<DMatrix<C64>>,
}

impl SBasis {
    pub fn new(n: usize) -> Self {
        Self::with_generator(n, |c| s_matrix(n, c).expect("class built for n"))
    }

    /// Basis built from a caller-supplied S-matrix routine.
    pub fn with_generator<F>(n: usize, mut f: F) -> Self
    where
        F: FnMut(PauliCounts) -> DMatrix<C64>,
    {
        let classes = PauliCounts::all(n);
        let matrices = classes.iter().map(|&c| f(c)).collect();
        Self {
            n_qubits: n,
            classes,
            matrices,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn to_tensor(&self, rho: &SymDensity) -> Result<SymTensor> {
        if rho.n_qubits != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits + 1,
                got: rho.n_qubits + 1,
            });
        }
        let mut coords = Vec::with_capacity(self.classes.len());
        for (c, s) in self.classes.iter().zip(&self.matrices) {
            let v = linalg::trace_product(&rho.matrix, s);
            if v.im.abs() > IMAG_TOL {
                return Err(Error::ImaginaryCoordinate {
                    counts: c.as_array(),
                    imag: v.im,
                });
            }
            coords.push(v.re);
        }
        Ok(SymTensor {
            n_qubits: self.n_qubits,
            coords,
        })
    }

    pub fn from_tensor(&self, x: &SymTensor) -> Result<SymDensity> {
        let n = self.n_qubits;
        if x.n_qubits != n {
            return Err(Error::Dimension {
                expected: n + 1,
                got: x.n_qubits + 1,
            });
        }
        if (x.coords[0] - 1.0).abs() > CONTRACTION_TOL {
            return Err(Error::Normalization(x.coords[0]));
        }
        let res = x.contraction_residual();
        if res > CONTRACTION_TOL {
            return Err(Error::ContractionViolated(res));
        }
        let mut rho = DMatrix::<C64>::zeros(n + 1, n + 1);
        for ((c, s), &v) in self.classes.iter().zip(&self.matrices).zip(&x.coords) {
            if v != 0.0 {
                rho += s * C64::new(c.multiplicity() * v, 0.0);
            }
        }
        rho /= C64::new(2f64.powi(n as i32), 0.0);
        // enforce exact Hermiticity
        let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
        Ok(SymDensity::from_matrix_unchecked(herm))
    }
}

/// `x_{μ1…μN} = tr(ρ S_{μ1…μN})` for every coordinate class.
pub fn to_tensor(rho: &SymDensity) -> Result<SymTensor> {
    SBasis::new(rho.n_qubits).to_tensor(rho)
}

/// `ρ = 2^{-N} Σ x_{μ1…μN} S_{μ1…μN}`. Does not check positivity.
pub fn from_tensor(x: &SymTensor) -> Result<SymDensity> {
    SBasis::new(x.n_qubits).from_tensor(x)
}

/// Coordinates of the `k`-qubit reduced state: pad every class with `N - k` identities.
pub fn reduce(x: &SymTensor, k: usize) -> Result<SymTensor> {
    let n = x.n_qubits;
    if k > n {
        return Err(Error::ExcitationOutOfRange { n, k });
    }
    let coords = PauliCounts::all(k)
        .into_iter()
        .map(|c| x.get(c.with_added(0, n - k)))
        .collect();
    Ok(SymTensor {
        n_qubits: k,
        coords,
    })
}

/// Isometry from the symmetric N-qubit space into `qubit ⊗ Sym_{N-1}`.
///
/// Row `q·N + j` holds the amplitude on `|q⟩|D_{N-1}^(j)⟩`.
pub fn one_qubit_isometry(n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::TooFewQubits {
            op: "embed_one_qubit",
            min: 2,
            n,
        });
    }
    let nf = n as f64;
    let mut v = DMatrix::<f64>::zeros(2 * n, n + 1);
    for k in 0..=n {
        if k < n {
            v[(k, k)] = ((n - k) as f64 / nf).sqrt();
        }
        if k > 0 {
            v[(n + k - 1, k)] = (k as f64 / nf).sqrt();
        }
    }
    Ok(v)
}

/// `V ρ V†` on `qubit ⊗ Sym_{N-1}` (dimension `2N`).
pub fn embed_one_qubit(rho: &SymDensity) -> Result<DMatrix<C64>> {
    let v = one_qubit_isometry(rho.n_qubits)?.map(|a| C64::new(a, 0.0));
    Ok(&v * &rho.matrix * v.transpose())
}
