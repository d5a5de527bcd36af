//! Seeded invariant suite behind `snc selfcheck`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::antistate::{antistate, pair_decompose, purity_check, CLUSTER_TOL};
use crate::entcert::{a_matrix, ppt_first_qubit, three_qubit_exact, x_matrix_positivity, Verdict};
use crate::families::{a_closed_form, rank2_state};
use crate::linalg::max_abs_diff;
use crate::nocorr::{is_snc, SNC_TOL};
use crate::oracle::{correlator, expand_density, MAX_DENSE_QUBITS};
use crate::random::{random_density, random_pure, random_snc, seeded, StateRng};
use crate::symrep::{s_matrix, SBasis, SymDensity, SymTensor};
use crate::{Error, Result, C64};

pub const ROUND_TRIP: &str = "round-trip";
pub const CONTRACTION: &str = "contraction";
pub const ORACLE_CORRELATOR: &str = "oracle-correlator";
pub const ANTISTATE_ORTHOGONALITY: &str = "antistate-orthogonality";
pub const PURITY_BOUND: &str = "purity-bound";
pub const PAIR_RECONSTRUCTION: &str = "pair-reconstruction";
pub const CERTIFIER_AGREEMENT: &str = "certifier-agreement";
pub const CLOSED_FORM_A: &str = "closed-form-a";

const STATES_PER_N: usize = 4;
const SNC_PER_N: usize = 8;
const AGREEMENT_SAMPLES: usize = 60;
/// Certifier values this close to zero are not compared.
const AGREEMENT_TOL: f64 = 1e-9;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Flip the sign of one entry of the all-`σ3` S-matrix.
    CorruptSMatrix,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Config {
    pub max_n: usize,
    pub seed: u64,
    pub fault: Fault,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            max_n: 7,
            seed: 42,
            fault: Fault::None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub notices: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    samples: usize,
    max_error: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            samples: 0,
            max_error: 0.0,
        }
    }

    fn record(&mut self, err: f64) {
        self.samples += 1;
        // NaN counts as a failure
        if err.is_nan() || err > self.max_error {
            self.max_error = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            passed: self.max_error <= self.tolerance,
            samples: self.samples,
            max_error: self.max_error,
            tolerance: self.tolerance,
        }
    }
}

fn basis(n: usize, fault: Fault) -> SBasis {
    match fault {
        Fault::None => SBasis::new(n),
        Fault::CorruptSMatrix => SBasis::with_generator(n, |c| {
            let mut s = s_matrix(n, c).expect("class built for n");
            if c.count(3) == n {
                s[(0, 0)] = -s[(0, 0)];
            }
            s
        }),
    }
}

fn random_states(n: usize, rng: &mut StateRng) -> Vec<SymDensity> {
    let mut out: Vec<SymDensity> = (0..STATES_PER_N / 2)
        .map(|_| random_pure(n, rng).projector())
        .collect();
    out.extend((0..STATES_PER_N / 2).map(|r| random_density(n, r + 2, rng)));
    out
}

fn tensor_oracle_error(x: &SymTensor, full: &DMatrix<C64>) -> f64 {
    x.iter()
        .map(|(c, v)| (correlator(full, &c.to_tuple()) - C64::new(v, 0.0)).norm())
        .fold(0.0, f64::max)
}

/// Runs every check; never stops early.
pub fn run(config: &Config) -> Result<Report> {
    if config.max_n < 3 || config.max_n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "max_n must be odd and at least 3, got {}",
            config.max_n
        )));
    }
    let mut rng = seeded(config.seed);
    let mut report = Report::default();

    let mut round_trip = Tally::new(ROUND_TRIP, 1e-10);
    let mut contraction = Tally::new(CONTRACTION, 1e-12);
    let mut oracle = Tally::new(ORACLE_CORRELATOR, 1e-10);
    for n in 1..=config.max_n {
        let b = basis(n, config.fault);
        for rho in random_states(n, &mut rng) {
            let x = b.to_tensor(&rho)?;
            contraction.record(x.contraction_residual());
            match b.from_tensor(&x) {
                Ok(back) => round_trip.record(max_abs_diff(back.matrix(), rho.matrix())),
                Err(_) => round_trip.record(f64::INFINITY),
            }
            if n <= MAX_DENSE_QUBITS {
                oracle.record(tensor_oracle_error(&x, &expand_density(&rho)));
            }
        }
    }
    if config.max_n > MAX_DENSE_QUBITS {
        report.notices.push(format!(
            "{ORACLE_CORRELATOR}: skipped for N > {MAX_DENSE_QUBITS} (2^N expansion too large)"
        ));
    }

    let mut orth = Tally::new(ANTISTATE_ORTHOGONALITY, 1e-12);
    let mut purity = Tally::new(PURITY_BOUND, 0.0);
    let mut pairs = Tally::new(PAIR_RECONSTRUCTION, 1e-9);
    let mut closed = Tally::new(CLOSED_FORM_A, 1e-12);
    for n in (3..=config.max_n).step_by(2) {
        for _ in 0..SNC_PER_N {
            let psi = random_pure(n, &mut rng);
            orth.record(psi.inner(&antistate(&psi)).norm());
            let rho = random_snc(n, &mut rng)?;
            // excess above 1/2 + tolerance; zero when the bound holds
            let p = purity_check(&rho);
            purity.record(if p.exceeds_bound { p.value - 0.5 } else { 0.0 });
            let x = basis(n, Fault::None).to_tensor(&rho)?;
            if !is_snc(&x, SNC_TOL).is_snc {
                purity.record(f64::INFINITY);
            }
            match pair_decompose(&rho, CLUSTER_TOL) {
                Ok(pd) => pairs.record(max_abs_diff(&pd.reconstruct(), rho.matrix())),
                Err(_) => pairs.record(f64::INFINITY),
            }
        }
        for r in 0..=n {
            let computed = a_matrix(&basis(n, Fault::None).to_tensor(&rank2_state(n, r)?)?)?;
            let expected = a_closed_form(n, r)?;
            closed.record((computed.0 - expected.0).abs().max());
        }
    }

    // exact test, one-qubit PPT and the m = 1 x-matrix agree on three qubits
    let mut agree = Tally::new(CERTIFIER_AGREEMENT, 0.0);
    for _ in 0..AGREEMENT_SAMPLES {
        let rho = random_snc(3, &mut rng)?;
        let exact = three_qubit_exact(&rho)?;
        let ppt = ppt_first_qubit(&rho)?.min_eigenvalue;
        let xm = x_matrix_positivity(&basis(3, Fault::None).to_tensor(&rho)?, 1)?;
        if [exact.margin, ppt, xm]
            .iter()
            .any(|v| v.abs() <= AGREEMENT_TOL)
        {
            continue;
        }
        let entangled = exact.verdict == Verdict::GenuinelyEntangled;
        agree.record(if (ppt < 0.0) == entangled && (xm < 0.0) == entangled {
            0.0
        } else {
            1.0
        });
    }

    report.checks = [
        round_trip,
        contraction,
        oracle,
        orth,
        purity,
        pairs,
        closed,
        agree,
    ]
    .into_iter()
    .map(Tally::finish)
    .collect();
    Ok(report)
}
