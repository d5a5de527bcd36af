//! Region scans over the eigenvalues of `A` (three qubits) and over the
//! weights of Dicke-pair mixtures.
//!
//! Rows are computed in parallel and collected in grid order, so the CSV
//! text is identical from run to run.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::entcert::{
    alpha_condition, sufficient_criterion_with, three_qubit_exact, Verdict, ALPHA_MARGIN,
};
use crate::families::{mixture_state, sphere_bound, MixtureSpec};
use crate::{Error, Result};

pub const MIN_FIG1_RESOLUTION: usize = 16;

/// One sample of the plane `α1 + α2 + α3 = 1`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Fig1Row {
    pub alpha: [f64; 3],
    /// `Σ α² ≤ 1`.
    pub physical: bool,
    /// All `α ≥ 0`.
    pub separable: bool,
    /// `max α < Σ α²` inside the physical disk.
    pub detected: bool,
}

impl Fig1Row {
    pub fn classify(alpha: [f64; 3]) -> Self {
        let rep = alpha_condition(alpha).expect("scan points lie on the trace-one plane");
        Fig1Row {
            alpha,
            physical: rep.physical,
            separable: alpha.iter().all(|&a| a >= -ALPHA_MARGIN),
            detected: rep.detected,
        }
    }
}

const DISK_CENTER: [f64; 3] = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];

/// Orthonormal basis of the plane directions `Σ v = 0`.
fn plane_basis() -> ([f64; 3], [f64; 3]) {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s6 = 1.0 / 6f64.sqrt();
    ([s2, -s2, 0.0], [s6, s6, -2.0 * s6])
}

fn on_circle(center: [f64; 3], radius: f64, t: f64) -> [f64; 3] {
    let (u, w) = plane_basis();
    let (s, c) = t.sin_cos();
    std::array::from_fn(|i| center[i] + radius * (c * u[i] + s * w[i]))
}

/// Barycentric grid over the triangle circumscribing the physical disk,
/// followed by the disk center and `3 · resolution` samples of the disk
/// boundary.
pub fn fig1_points(resolution: usize) -> Result<Vec<[f64; 3]>> {
    if resolution < MIN_FIG1_RESOLUTION {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} below {MIN_FIG1_RESOLUTION}"
        )));
    }
    let r = resolution as f64;
    let mut pts = Vec::new();
    for i in 0..=resolution {
        for j in 0..=resolution - i {
            let k = resolution - i - j;
            // vertices 2 e_a - (1/3, 1/3, 1/3)
            let b = [i as f64 / r, j as f64 / r, k as f64 / r];
            pts.push(std::array::from_fn(|a| 2.0 * b[a] - 1.0 / 3.0));
        }
    }
    pts.push(DISK_CENTER);
    let radius = (2.0f64 / 3.0).sqrt();
    let m = 3 * resolution;
    for s in 0..m {
        let t = 2.0 * std::f64::consts::PI * s as f64 / m as f64;
        pts.push(on_circle(DISK_CENTER, radius, t));
    }
    Ok(pts)
}

pub fn fig1_rows(resolution: usize) -> Result<Vec<Fig1Row>> {
    Ok(fig1_points(resolution)?
        .into_par_iter()
        .map(Fig1Row::classify)
        .collect())
}

/// Samples of `max α = Σ α²` on the lobe where `α_k` is largest.
pub fn trilobe_boundary(k: usize, samples: usize) -> Vec<[f64; 3]> {
    assert!(k < 3, "lobe index must be 0, 1 or 2");
    // sphere |α - e_k/2| = 1/2 cut by the plane Σα = 1
    let mut center = [1.0 / 6.0; 3];
    center[k] = 2.0 / 3.0;
    let radius = (1.0f64 / 6.0).sqrt();
    (0..samples)
        .map(|s| {
            on_circle(
                center,
                radius,
                2.0 * std::f64::consts::PI * s as f64 / samples as f64,
            )
        })
        .filter(|a| (0..3).all(|j| a[k] >= a[j]))
        .collect()
}

pub fn fig1_csv(rows: &[Fig1Row]) -> String {
    let mut out = String::from("alpha1,alpha2,alpha3,physical,separable,detected\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.alpha[0]),
            num(r.alpha[1]),
            num(r.alpha[2]),
            flag(r.physical),
            flag(r.separable),
            flag(r.detected)
        );
    }
    out
}

/// Numeric settings of the max-overlap criterion used by the weight scan.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct OverlapSettings {
    pub grid: usize,
    pub refine: usize,
    pub margin: f64,
}

impl Default for OverlapSettings {
    fn default() -> Self {
        Self {
            grid: crate::entcert::DEFAULT_GRID,
            refine: crate::entcert::DEFAULT_REFINE,
            margin: crate::entcert::SUFFICIENT_MARGIN,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fig2Row {
    pub weights: Vec<f64>,
    /// Exact verdict, three qubits only.
    pub exact: Option<bool>,
    pub numeric: bool,
    pub sphere: bool,
}

/// All weight vectors `(λ_0 … λ_M)` with `λ_i = k_i / (2 · resolution)`,
/// `Σ k_i = resolution`, in lexicographic order of `(k_1, …, k_M)`.
pub fn simplex_points(len: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn rec(prefix: &mut Vec<usize>, left: usize, slots: usize, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            let mut v = vec![left];
            v.extend_from_slice(prefix);
            out.push(v);
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(prefix, left - k, slots - 1, out);
            prefix.pop();
        }
    }
    let mut ks = Vec::new();
    rec(&mut Vec::new(), resolution, len - 1, &mut ks);
    let d = 2.0 * resolution as f64;
    ks.into_iter()
        .map(|k| {
            let mut w: Vec<f64> = k.iter().map(|&k| k as f64 / d).collect();
            // absorb rounding in λ_0 so the weights sum to 1/2
            let rest: f64 = w[1..].iter().sum();
            w[0] = 0.5 - rest;
            w
        })
        .collect()
}

pub fn fig2_rows(n: usize, resolution: usize, settings: OverlapSettings) -> Result<Vec<Fig2Row>> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenQubitNumber { op: "scan-fig2", n });
    }
    if resolution == 0 {
        return Err(Error::InvalidParameter(
            "resolution must be positive".into(),
        ));
    }
    let points = simplex_points(n / 2 + 1, resolution);
    points
        .into_par_iter()
        .map(|w| {
            let spec = MixtureSpec::new(n, w)?;
            let rho = mixture_state(&spec)?;
            let exact = if n == 3 {
                Some(three_qubit_exact(&rho)?.verdict == Verdict::GenuinelyEntangled)
            } else {
                None
            };
            let numeric =
                sufficient_criterion_with(&rho, settings.grid, settings.refine, settings.margin)
                    .verdict
                    == Verdict::GenuinelyEntangled;
            let sphere = sphere_bound(&spec).holds;
            Ok(Fig2Row {
                weights: spec.weights,
                exact,
                numeric,
                sphere,
            })
        })
        .collect()
}

pub fn fig2_csv(rows: &[Fig2Row]) -> String {
    let mut out = String::new();
    let Some(first) = rows.first() else {
        return out;
    };
    let mut header: Vec<String> = (0..first.weights.len())
        .map(|i| format!("lambda{i}"))
        .collect();
    if first.exact.is_some() {
        header.push("exact".into());
    }
    header.push("numeric".into());
    header.push("sphere".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for r in rows {
        let mut cells: Vec<String> = r.weights.iter().map(|&w| num(w)).collect();
        if let Some(e) = r.exact {
            cells.push(flag(e).into());
        }
        cells.push(flag(r.numeric).into());
        cells.push(flag(r.sphere).into());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Midpoint between the last `λ_1` where `flag` is false and the first
/// where it is true, for a three-qubit scan ordered by `λ_1`.
pub fn crossing_lambda1(rows: &[Fig2Row], flag: impl Fn(&Fig2Row) -> bool) -> Option<f64> {
    rows.windows(2)
        .find(|w| !flag(&w[0]) && flag(&w[1]))
        .map(|w| 0.5 * (w[0].weights[1] + w[1].weights[1]))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}
