//! JSON spec files with 1-based indices:
//!
//! ```json
//! {"name": "w6", "n": 3, "labels": ["T1", "T2", "V"],
//!  "constants": [{"k": 1, "j": 2, "m": 3, "re": "-1/2", "im": "0"}]}
//! ```
//!
//! Each constant is `A^m_{kj}` in `[X̄_k, X_j] = Σ A^m_{kj} X_m − Σ conj(A^m_{jk}) X̄_m`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{parse_rational, rational_to_string, GaussianRational};
use crate::lie_algebra::{AlgebraError, AlgebraSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecIoError {
    #[error("malformed spec at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("constant #{index}: malformed rational {value:?} in field {field:?}")]
    MalformedRational {
        index: usize,
        field: &'static str,
        value: String,
    },
    #[error("constant #{index}: index {value} in field {field:?} is not in 1..={n}")]
    IndexOutOfRange {
        index: usize,
        field: &'static str,
        value: usize,
        n: usize,
    },
    #[error("n = {n} but {labels} labels given")]
    LabelCount { n: usize, labels: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    name: String,
    n: usize,
    labels: Vec<String>,
    constants: Vec<ConstantEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantEntry {
    k: usize,
    j: usize,
    m: usize,
    re: String,
    im: String,
}

/// Parses and structurally checks a spec file. Jacobi and nilpotency are
/// left to [`crate::lie_algebra::validate`].
pub fn parse_spec(text: &str) -> Result<AlgebraSpec, SpecIoError> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| SpecIoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.labels.len() != file.n {
        return Err(SpecIoError::LabelCount {
            n: file.n,
            labels: file.labels.len(),
        });
    }
    let mut constants = Vec::with_capacity(file.constants.len());
    for (index, c) in file.constants.iter().enumerate() {
        let index = index + 1;
        let mut idx = [0usize; 3];
        for (slot, (field, value)) in idx.iter_mut().zip([("k", c.k), ("j", c.j), ("m", c.m)]) {
            if value == 0 || value > file.n {
                return Err(SpecIoError::IndexOutOfRange {
                    index,
                    field,
                    value,
                    n: file.n,
                });
            }
            *slot = value - 1;
        }
        let part = |field: &'static str, value: &str| {
            parse_rational(value).map_err(|_| SpecIoError::MalformedRational {
                index,
                field,
                value: value.to_string(),
            })
        };
        let value = GaussianRational::new(part("re", &c.re)?, part("im", &c.im)?);
        constants.push(((idx[0], idx[1], idx[2]), value));
    }
    Ok(AlgebraSpec::new(file.name, file.labels, constants)?)
}

/// Canonical JSON text of `spec`; `parse_spec(emit_spec(s)) == s`.
pub fn emit_spec(spec: &AlgebraSpec) -> String {
    let file = SpecFile {
        name: spec.name().to_string(),
        n: spec.n(),
        labels: spec.labels().to_vec(),
        constants: spec
            .constants()
            .map(|(&(k, j, m), v)| ConstantEntry {
                k: k + 1,
                j: j + 1,
                m: m + 1,
                re: rational_to_string(v.re()),
                im: rational_to_string(v.im()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("spec serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogEntry;

    #[test]
    fn round_trip_catalog() {
        for name in ["w4n6:0", "p4n2:2", "double-heisenberg:2,1", "torus:3"] {
            let spec = name.parse::<CatalogEntry>().unwrap().build();
            let text = emit_spec(&spec);
            assert_eq!(parse_spec(&text).unwrap(), spec);
            assert_eq!(emit_spec(&parse_spec(&text).unwrap()), text);
        }
    }

    const HEAD: &str = r#"{"name": "x", "n": 3, "labels": ["A", "B", "C"], "constants": ["#;

    #[test]
    fn malformed_rational() {
        let text = format!(r#"{HEAD}{{"k": 1, "j": 2, "m": 3, "re": "0", "im": "1/0"}}]}}"#);
        assert!(matches!(
            parse_spec(&text),
            Err(SpecIoError::MalformedRational {
                index: 1,
                field: "im",
                ..
            })
        ));
    }

    #[test]
    fn duplicate_triple() {
        let c = r#"{"k": 1, "j": 2, "m": 3, "re": "1", "im": "0"}"#;
        let text = format!("{HEAD}{c}, {c}]}}");
        assert!(matches!(
            parse_spec(&text),
            Err(SpecIoError::Algebra(AlgebraError::DuplicateConstant { .. }))
        ));
    }

    #[test]
    fn structural_errors() {
        let text = r#"{"name": "x", "n": 2, "labels": ["A"], "constants": []}"#;
        assert!(matches!(
            parse_spec(text),
            Err(SpecIoError::LabelCount { n: 2, labels: 1 })
        ));
        let text = format!(r#"{HEAD}{{"k": 0, "j": 2, "m": 3, "re": "1", "im": "0"}}]}}"#);
        assert!(matches!(
            parse_spec(&text),
            Err(SpecIoError::IndexOutOfRange { field: "k", .. })
        ));
        let text = r#"{"name": "x", "n": 0, "labels": [], "constants": [], "center": 1}"#;
        assert!(matches!(parse_spec(text), Err(SpecIoError::Syntax { line: 1, .. })));
    }
}
