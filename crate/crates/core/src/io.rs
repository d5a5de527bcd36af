//! JSON state files.
//!
//! ```json
//! { "n_qubits": 3, "repr": "dicke_pure", "data": [[0.7071, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071, 0.0]] }
//! ```
//!
//! `repr` is one of `dicke_pure` (amplitude list), `dicke_matrix` (list of
//! rows), `tensor` (list of `{"counts": [n0,n1,n2,n3], "value": x}` in
//! canonical order) or `pairing` (list of `{"weight", "psi", "psibar"}`).
//! Complex numbers are `[re, im]` pairs.

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::antistate::{SpectralPairing, WeightedPair};
use crate::symrep::{from_tensor, DickeVector, PauliCounts, SymDensity, SymTensor};
use crate::{Error, Result, C64};

/// Allowed deviation of a pure-state norm from 1.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum StateFile {
    DickePure(DickeVector),
    DickeMatrix(DMatrix<C64>),
    Tensor(SymTensor),
    Pairing(SpectralPairing),
}

impl StateFile {
    pub fn repr(&self) -> &'static str {
        match self {
            StateFile::DickePure(_) => "dicke_pure",
            StateFile::DickeMatrix(_) => "dicke_matrix",
            StateFile::Tensor(_) => "tensor",
            StateFile::Pairing(_) => "pairing",
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            StateFile::DickePure(v) => v.n_qubits(),
            StateFile::DickeMatrix(m) => m.nrows().saturating_sub(1),
            StateFile::Tensor(x) => x.n_qubits(),
            StateFile::Pairing(p) => p.n_qubits,
        }
    }

    /// Density matrix of the stored state, checked for Hermiticity, unit
    /// trace and positivity.
    pub fn density(&self) -> Result<SymDensity> {
        let rho = match self {
            StateFile::DickePure(v) => {
                let nrm = v.norm();
                if (nrm - 1.0).abs() > NORM_TOL {
                    return Err(Error::Trace(nrm * nrm));
                }
                v.projector()
            }
            StateFile::DickeMatrix(m) => SymDensity::new(m.clone())?,
            StateFile::Tensor(x) => from_tensor(x)?,
            StateFile::Pairing(p) => {
                let m = p.reconstruct();
                SymDensity::new((&m + m.adjoint()) * C64::new(0.5, 0.0))?
            }
        };
        rho.validate()?;
        Ok(rho)
    }

    pub fn to_json(&self) -> Value {
        let data = match self {
            StateFile::DickePure(v) => complex_list(v.amplitudes().iter()),
            StateFile::DickeMatrix(m) => Value::Array(
                (0..m.nrows())
                    .map(|r| complex_list(m.row(r).iter()))
                    .collect(),
            ),
            StateFile::Tensor(x) => Value::Array(
                x.iter()
                    .map(|(c, v)| json!({ "counts": c.as_array(), "value": v }))
                    .collect(),
            ),
            StateFile::Pairing(p) => Value::Array(
                p.pairs
                    .iter()
                    .map(|w| {
                        json!({
                            "weight": w.weight,
                            "psi": complex_list(w.psi.amplitudes().iter()),
                            "psibar": complex_list(w.psibar.amplitudes().iter()),
                        })
                    })
                    .collect(),
            ),
        };
        json!({ "n_qubits": self.n_qubits(), "repr": self.repr(), "data": data })
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain JSON values")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n_qubits")
            .and_then(Value::as_u64)
            .ok_or_else(|| fmt("missing or non-integer \"n_qubits\""))? as usize;
        let repr = v
            .get("repr")
            .and_then(Value::as_str)
            .ok_or_else(|| fmt("missing \"repr\""))?;
        let data = v.get("data").ok_or_else(|| fmt("missing \"data\""))?;
        let state = match repr {
            "dicke_pure" => StateFile::DickePure(parse_vector(data, n)?),
            "dicke_matrix" => {
                let rows = as_array(data, "data")?;
                if rows.len() != n + 1 {
                    return Err(fmt(format!("expected {} rows, got {}", n + 1, rows.len())));
                }
                let parsed: Vec<Vec<C64>> = rows
                    .iter()
                    .map(|r| parse_complex_list(r, n + 1))
                    .collect::<Result<_>>()?;
                StateFile::DickeMatrix(DMatrix::from_fn(n + 1, n + 1, |i, j| parsed[i][j]))
            }
            "tensor" => {
                let mut entries = Vec::new();
                for e in as_array(data, "data")? {
                    let counts = as_array(
                        e.get("counts")
                            .ok_or_else(|| fmt("entry without \"counts\""))?,
                        "counts",
                    )?;
                    let counts: Vec<usize> = counts
                        .iter()
                        .map(|c| {
                            c.as_u64()
                                .map(|c| c as usize)
                                .ok_or_else(|| fmt("non-integer count"))
                        })
                        .collect::<Result<_>>()?;
                    let counts: [usize; 4] = counts
                        .try_into()
                        .map_err(|_| fmt("\"counts\" must have four entries"))?;
                    let value = e
                        .get("value")
                        .and_then(Value::as_f64)
                        .ok_or_else(|| fmt("entry without numeric \"value\""))?;
                    let pc = PauliCounts::from_array(counts);
                    if pc.n_qubits() != n {
                        return Err(fmt(format!("counts {counts:?} do not sum to {n}")));
                    }
                    entries.push((pc, value));
                }
                StateFile::Tensor(SymTensor::from_entries(n, entries)?)
            }
            "pairing" => {
                let mut pairs = Vec::new();
                for e in as_array(data, "data")? {
                    let weight = e
                        .get("weight")
                        .and_then(Value::as_f64)
                        .ok_or_else(|| fmt("pair without numeric \"weight\""))?;
                    let psi =
                        parse_vector(e.get("psi").ok_or_else(|| fmt("pair without \"psi\""))?, n)?;
                    let psibar = parse_vector(
                        e.get("psibar")
                            .ok_or_else(|| fmt("pair without \"psibar\""))?,
                        n,
                    )?;
                    pairs.push(WeightedPair {
                        weight,
                        psi,
                        psibar,
                    });
                }
                StateFile::Pairing(SpectralPairing { n_qubits: n, pairs })
            }
            other => return Err(fmt(format!("unknown repr {other:?}"))),
        };
        Ok(state)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

impl From<&SymDensity> for StateFile {
    fn from(rho: &SymDensity) -> Self {
        StateFile::DickeMatrix(rho.matrix().clone())
    }
}

fn fmt(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn complex_list<'a>(it: impl Iterator<Item = &'a C64>) -> Value {
    Value::Array(it.map(|z| json!([z.re, z.im])).collect())
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| fmt(format!("\"{what}\" must be an array")))
}

fn parse_complex(v: &Value) -> Result<C64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(fmt("complex parts must be numbers")),
        },
        _ => Err(fmt("complex numbers are [re, im] pairs")),
    }
}

fn parse_complex_list(v: &Value, len: usize) -> Result<Vec<C64>> {
    let items = as_array(v, "data")?;
    if items.len() != len {
        return Err(fmt(format!(
            "expected {len} amplitudes, got {}",
            items.len()
        )));
    }
    items.iter().map(parse_complex).collect()
}

fn parse_vector(v: &Value, n: usize) -> Result<DickeVector> {
    DickeVector::from_slice(&parse_complex_list(v, n + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::rank2_state;
    use crate::random::{random_pure, random_snc_pairing, seeded};
    use crate::symrep::{dicke_state, to_tensor};

    fn round_trip(s: &StateFile) {
        let text = s.to_string_pretty();
        let back = StateFile::parse(&text).unwrap();
        assert_eq!(&back, s);
        assert_eq!(back.to_string_pretty(), text);
    }

    #[test]
    fn all_reprs_round_trip() {
        let mut rng = seeded(3);
        round_trip(&StateFile::DickePure(random_pure(4, &mut rng)));
        let rho = rank2_state(5, 1).unwrap();
        round_trip(&StateFile::from(&rho));
        round_trip(&StateFile::Tensor(to_tensor(&rho).unwrap()));
        round_trip(&StateFile::Pairing(
            random_snc_pairing(5, 2, &mut rng).unwrap(),
        ));
    }

    #[test]
    fn tensor_file_uses_canonical_order() {
        let x = to_tensor(&dicke_state(2, 1).unwrap().projector()).unwrap();
        let v = StateFile::Tensor(x).to_json();
        assert_eq!(v["repr"], "tensor");
        assert_eq!(v["data"][0]["counts"], json!([2, 0, 0, 0]));
        assert_eq!(v["data"][1]["counts"], json!([1, 1, 0, 0]));
        assert_eq!(v["data"][9]["counts"], json!([0, 0, 0, 2]));
    }

    #[test]
    fn densities_agree_across_reprs() {
        let rho = rank2_state(3, 1).unwrap();
        let a = StateFile::from(&rho).density().unwrap();
        let b = StateFile::Tensor(to_tensor(&rho).unwrap())
            .density()
            .unwrap();
        assert!(crate::linalg::max_abs_diff(a.matrix(), b.matrix()) < 1e-14);
    }

    #[test]
    fn parse_errors_are_format_errors() {
        for bad in [
            "not json",
            r#"{"repr": "tensor", "data": []}"#,
            r#"{"n_qubits": 1, "repr": "wave", "data": []}"#,
            r#"{"n_qubits": 1, "repr": "dicke_pure", "data": [[1, 0]]}"#,
            r#"{"n_qubits": 1, "repr": "dicke_pure", "data": [1, 0]}"#,
            r#"{"n_qubits": 1, "repr": "tensor", "data": [{"counts": [1, 1, 0, 0], "value": 1}]}"#,
        ] {
            assert!(StateFile::parse(bad).unwrap_err().is_format(), "{bad}");
        }
    }

    #[test]
    fn invalid_states_are_not_format_errors() {
        let unnormalized = r#"{"n_qubits": 1, "repr": "dicke_pure", "data": [[1, 0], [1, 0]]}"#;
        let e = StateFile::parse(unnormalized)
            .unwrap()
            .density()
            .unwrap_err();
        assert!(!e.is_format());
        let negative = r#"{"n_qubits": 1, "repr": "dicke_matrix", "data": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]}"#;
        let e = StateFile::parse(negative).unwrap().density().unwrap_err();
        assert!(matches!(e, Error::NotPositive(_)));
    }
}
