use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use snc_core::entcert::{self, DEFAULT_GRID, DEFAULT_REFINE, SUFFICIENT_MARGIN};
use snc_core::io::StateFile;
use snc_core::nocorr::SNC_TOL;
use snc_core::scan::{self, OverlapSettings};
use snc_core::selfcheck::{self, Fault};
use snc_core::{
    coherent_state, dicke_state, is_snc, mixture_state, rank2_state, to_tensor, BlochVector,
    CertVerdict, MixtureSpec, SymDensity, Verdict,
};

#[derive(Parser)]
#[command(
    name = "snc",
    version,
    about = "Symmetric multiqubit states without N-partite correlations"
)]
struct Cli {
    /// Tolerance for vanishing N-partite correlations
    #[arg(long, global = true, default_value_t = SNC_TOL)]
    tol: f64,
    /// Polar mesh size for the sphere maximization
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Seed for random states
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify entanglement or separability of a state file
    Certify { state_file: PathBuf },
    /// Write a state file for a named family
    Construct {
        #[command(subcommand)]
        kind: Kind,
        /// Representation of the written state
        #[arg(long, value_enum, global = true)]
        repr: Option<Repr>,
    },
    /// Region scan over the eigenvalues of A for three qubits (CSV)
    ScanFig1 {
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Region scan over Dicke-pair mixture weights (CSV)
    ScanFig2 {
        #[arg(long = "n")]
        n_qubits: usize,
        #[arg(long, default_value_t = 400)]
        resolution: usize,
    },
    /// Run the seeded invariant suite
    Selfcheck {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<InjectFault>,
    },
}

#[derive(Subcommand)]
enum Kind {
    /// Dicke state |D_N^(k)⟩
    Dicke(DickeArgs),
    /// Spin-coherent state along (θ, φ)
    Coherent(CoherentArgs),
    /// Equal mixture of (|D^(r)⟩ + |D^(N-r)⟩)/√2 and its antistate
    Rank2(Rank2Args),
    /// Dicke-pair mixture with weights λ_0 … λ_M summing to 1/2
    Mixture(MixtureArgs),
}

#[derive(Args)]
struct DickeArgs {
    #[arg(long = "n")]
    n_qubits: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct CoherentArgs {
    #[arg(long = "n")]
    n_qubits: usize,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, allow_hyphen_values = true)]
    phi: f64,
}

#[derive(Args)]
struct Rank2Args {
    #[arg(long = "n")]
    n_qubits: usize,
    #[arg(long)]
    r: usize,
}

#[derive(Args)]
struct MixtureArgs {
    #[arg(long = "n")]
    n_qubits: usize,
    /// Comma-separated weights; fractions such as 7/16 are accepted
    #[arg(long, value_delimiter = ',', value_parser = parse_number)]
    weights: Vec<f64>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Repr {
    DickePure,
    DickeMatrix,
    Tensor,
}

#[derive(Copy, Clone, ValueEnum)]
enum InjectFault {
    SMatrix,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            Ok(a / b)
        }
        None => s.parse().map_err(|e| format!("{s}: {e}")),
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| fail(1, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Outcome {
    name: &'static str,
    exact: bool,
    result: CertVerdict,
}

fn certify(cli: &Cli, path: &PathBuf) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let state = StateFile::parse(&text).map_err(|e| fail(2, e))?;
    let rho = state.density().map_err(|e| fail(3, e))?;
    let n = rho.n_qubits();
    let x = to_tensor(&rho).map_err(|e| fail(3, e))?;
    let snc = is_snc(&x, cli.tol);

    let mut outcomes: Vec<Outcome> = Vec::new();
    let mut details = serde_json::Map::new();
    if snc.is_snc && n == 3 {
        let r = entcert::three_qubit_exact(&rho).map_err(|e| fail(3, e))?;
        outcomes.push(Outcome {
            name: "three_qubit_exact",
            exact: true,
            result: r,
        });
    }
    if snc.is_snc && rho.rank(snc_core::antistate::CLUSTER_TOL) == 2 {
        let r = entcert::rank2_certify(&rho).map_err(|e| fail(3, e))?;
        outcomes.push(Outcome {
            name: "rank2",
            exact: true,
            result: r,
        });
    }
    if n >= 2 {
        let p = entcert::ppt_first_qubit(&rho).map_err(|e| fail(3, e))?;
        details.insert("ppt_first_qubit".into(), json!(p));
        outcomes.push(Outcome {
            name: "ppt_first_qubit",
            exact: n <= 3,
            result: CertVerdict {
                verdict: p.verdict,
                witness: Some(snc_core::Witness::Ppt {
                    min_ppt_eigenvalue: p.min_eigenvalue,
                }),
                margin: p.min_eigenvalue,
            },
        });
    }
    if snc.is_snc && n >= 3 {
        let xm = entcert::x_matrix_positivity(&x, 1).map_err(|e| fail(3, e))?;
        details.insert("x_matrix_m1_min_eigenvalue".into(), json!(xm));
    }
    let suff =
        entcert::sufficient_criterion_with(&rho, cli.grid, DEFAULT_REFINE, SUFFICIENT_MARGIN);
    outcomes.push(Outcome {
        name: "sufficient_criterion",
        exact: false,
        result: suff,
    });

    let says = |v: Verdict| outcomes.iter().filter(move |o| o.result.verdict == v);
    let separable: Vec<&str> = says(Verdict::Separable)
        .filter(|o| o.exact)
        .map(|o| o.name)
        .collect();
    let entangled: Vec<&str> = says(Verdict::GenuinelyEntangled).map(|o| o.name).collect();
    if !separable.is_empty() && !entangled.is_empty() {
        return Err(fail(
            4,
            format!(
                "certifiers disagree: {} separable, {} entangled",
                separable.join("+"),
                entangled.join("+")
            ),
        ));
    }
    let decided = outcomes
        .iter()
        .find(|o| o.exact)
        .or_else(|| {
            outcomes
                .iter()
                .find(|o| o.result.verdict == Verdict::GenuinelyEntangled)
        })
        .or_else(|| outcomes.last())
        .expect("sufficient criterion always runs");

    let tests: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "name": o.name, "exact": o.exact, "result": o.result }))
        .collect();
    let out = json!({
        "n_qubits": n,
        "snc": snc,
        "verdict": decided.result.verdict,
        "witness": decided.result.witness,
        "margin": decided.result.margin,
        "decided_by": decided.name,
        "tests": tests,
        "details": details,
    });
    Ok(serde_json::to_string_pretty(&out).expect("plain JSON") + "\n")
}

fn construct(kind: &Kind, repr: Option<Repr>) -> Result<String, Failure> {
    let bad = |e: snc_core::Error| fail(2, e);
    let (pure, rho): (Option<snc_core::DickeVector>, SymDensity) = match kind {
        Kind::Dicke(a) => {
            let v = dicke_state(a.n_qubits, a.k).map_err(bad)?;
            let p = v.projector();
            (Some(v), p)
        }
        Kind::Coherent(a) => {
            if !a.theta.is_finite() || !a.phi.is_finite() {
                return Err(fail(2, "angles must be finite"));
            }
            let v = coherent_state(a.n_qubits, &BlochVector::new(a.theta, a.phi));
            let p = v.projector();
            (Some(v), p)
        }
        Kind::Rank2(a) => (None, rank2_state(a.n_qubits, a.r).map_err(bad)?),
        Kind::Mixture(a) => {
            let spec = MixtureSpec::new(a.n_qubits, a.weights.clone()).map_err(bad)?;
            (None, mixture_state(&spec).map_err(bad)?)
        }
    };
    let file = match (repr, pure) {
        (Some(Repr::DickePure) | None, Some(v)) => StateFile::DickePure(v),
        (Some(Repr::DickePure), None) => {
            return Err(fail(2, "mixed state has no dicke_pure representation"))
        }
        (Some(Repr::Tensor), _) => StateFile::Tensor(to_tensor(&rho).map_err(bad)?),
        (Some(Repr::DickeMatrix) | None, _) => StateFile::from(&rho),
    };
    Ok(file.to_string_pretty() + "\n")
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Certify { state_file } => emit(&cli.output, &certify(cli, state_file)?),
        Command::Construct { kind, repr } => emit(&cli.output, &construct(kind, *repr)?),
        Command::ScanFig1 { resolution } => {
            let rows = scan::fig1_rows(*resolution).map_err(|e| fail(2, e))?;
            emit(&cli.output, &scan::fig1_csv(&rows))
        }
        Command::ScanFig2 {
            n_qubits,
            resolution,
        } => {
            if *n_qubits != 3 && *n_qubits != 5 {
                eprintln!("note: N = {n_qubits} is outside the tested range {{3, 5}}");
            }
            let settings = OverlapSettings {
                grid: cli.grid,
                ..OverlapSettings::default()
            };
            let rows = scan::fig2_rows(*n_qubits, *resolution, settings).map_err(|e| fail(2, e))?;
            emit(&cli.output, &scan::fig2_csv(&rows))
        }
        Command::Selfcheck {
            max_n,
            inject_fault,
        } => {
            let fault = match inject_fault {
                Some(InjectFault::SMatrix) => Fault::CorruptSMatrix,
                None => Fault::None,
            };
            let config = selfcheck::Config {
                max_n: *max_n,
                seed: cli.seed,
                fault,
            };
            let report = selfcheck::run(&config).map_err(|e| fail(2, e))?;
            let mut text = String::new();
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                text += &format!(
                    "{status} {:<24} samples={:<4} max_error={:.3e} tol={:.0e}\n",
                    c.name, c.samples, c.max_error, c.tolerance
                );
            }
            for n in &report.notices {
                text += &format!("note: {n}\n");
            }
            emit(&cli.output, &text)?;
            let failures = report.failures();
            if failures.is_empty() {
                Ok(())
            } else {
                Err(fail(
                    1,
                    format!("invariant failure: {}", failures.join(", ")),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
