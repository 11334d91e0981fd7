//! Built-in example families of 2-step nilpotent algebras with abelian
//! complex structure and one-dimensional center (plus complex tori).
//!
//! Every family except the torus lists its `T`/`S` generators first and the
//! central `V` last, with all structure constants of the form
//! `A^V_{kj} = E_{kj}`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::GaussianRational;
use crate::lie_algebra::AlgebraSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog family {0:?}")]
    UnknownFamily(String),
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters { family: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Torus,
    HeisenbergExt,
    DoubleHeisenberg,
    PFamily,
    WFamily,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Torus,
        Family::HeisenbergExt,
        Family::DoubleHeisenberg,
        Family::PFamily,
        Family::WFamily,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Torus => "torus",
            Family::HeisenbergExt => "heisenberg-ext",
            Family::DoubleHeisenberg => "double-heisenberg",
            Family::PFamily => "p4n2",
            Family::WFamily => "w4n6",
        }
    }

    pub fn signature(self) -> &'static str {
        match self {
            Family::Torus => "torus:N          complex torus algebra, n = N >= 1",
            Family::HeisenbergExt => "heisenberg-ext:N central extension of h_(2N+1), real dim 2N+2, N >= 1",
            Family::DoubleHeisenberg => "double-heisenberg:M,N  h_(2M+1) + h_(2N+1), real dim 2M+2N+2, M,N >= 1",
            Family::PFamily => "p4n2:N           P_(4N+2), real dim 4N+2, N >= 1",
            Family::WFamily => "w4n6:N           W_(4N+6), real dim 4N+6, N >= 0",
        }
    }

    fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// A family with its parameters, e.g. `w4n6:0` or `double-heisenberg:2,1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CatalogEntry {
    pub family: Family,
    pub params: Vec<usize>,
}

impl CatalogEntry {
    pub fn new(family: Family, params: Vec<usize>) -> Result<Self, CatalogError> {
        let invalid = |reason: &str| CatalogError::InvalidParameters {
            family: family.name().to_string(),
            reason: reason.to_string(),
        };
        let arity = if family == Family::DoubleHeisenberg { 2 } else { 1 };
        if params.len() != arity {
            return Err(invalid(&format!("expected {arity} parameter(s), got {}", params.len())));
        }
        let min = if family == Family::WFamily { 0 } else { 1 };
        if params.iter().any(|&p| p < min) {
            return Err(invalid(&format!("parameters must be >= {min}")));
        }
        Ok(CatalogEntry { family, params })
    }

    /// Generates the structure constants.
    pub fn build(&self) -> AlgebraSpec {
        build_catalog_entry(self.family, &self.params).expect("parameters checked at construction")
    }

    /// Real dimension of the generated algebra.
    pub fn real_dim(&self) -> usize {
        match (self.family, self.params.as_slice()) {
            (Family::Torus, [n]) => 2 * n,
            (Family::HeisenbergExt, [n]) => 2 * n + 2,
            (Family::DoubleHeisenberg, [m, n]) => 2 * m + 2 * n + 2,
            (Family::PFamily, [n]) => 4 * n + 2,
            (Family::WFamily, [n]) => 4 * n + 6,
            _ => unreachable!("arity checked at construction"),
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(usize::to_string).collect();
        write!(f, "{}:{}", self.family.name(), params.join(","))
    }
}

impl FromStr for CatalogEntry {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, params) = s
            .split_once(':')
            .ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))?;
        let family = Family::from_name(name).ok_or_else(|| CatalogError::UnknownFamily(name.to_string()))?;
        let params = params
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CatalogError::InvalidParameters {
                family: name.to_string(),
                reason: e.to_string(),
            })?;
        CatalogEntry::new(family, params)
    }
}

type Constants = Vec<((usize, usize, usize), GaussianRational)>;

fn numbered(prefix: &str, count: usize) -> impl Iterator<Item = String> + '_ {
    (1..=count).map(move |i| format!("{prefix}{i}"))
}

/// Structure constants of a catalog family (0-based `(k, j, V)` triples).
pub fn build_catalog_entry(family: Family, params: &[usize]) -> Result<AlgebraSpec, CatalogError> {
    let entry = CatalogEntry::new(family, params.to_vec())?;
    let name = entry.to_string();
    let (labels, constants): (Vec<String>, Constants) = match (family, params) {
        (Family::Torus, &[n]) => (numbered("X", n).collect(), Vec::new()),
        (Family::HeisenbergExt, &[n]) => {
            // [T̄_j, T_j] = −(i/2)(V + V̄)
            let v = n;
            let labels = numbered("T", n).chain(["V".to_string()]).collect();
            let constants = (0..n).map(|j| ((j, j, v), GaussianRational::imag(-1, 2))).collect();
            (labels, constants)
        }
        (Family::DoubleHeisenberg, &[m, n]) => {
            // [S̄_j, S_j] = −(i/2)(V + V̄), [T̄_k, T_k] = (1/2)(V − V̄)
            let v = m + n;
            let labels = numbered("S", m)
                .chain(numbered("T", n))
                .chain(["V".to_string()])
                .collect();
            let constants = (0..m)
                .map(|j| ((j, j, v), GaussianRational::imag(-1, 2)))
                .chain((m..m + n).map(|k| ((k, k, v), GaussianRational::real(1, 2))))
                .collect();
            (labels, constants)
        }
        (Family::PFamily, &[n]) => {
            let v = 2 * n;
            let labels = numbered("T", 2 * n).chain(["V".to_string()]).collect();
            let constants = (0..n)
                .flat_map(|k| {
                    let (a, b) = (2 * k, 2 * k + 1);
                    [
                        ((a, a, v), GaussianRational::imag(1, 4)),
                        ((a, b, v), GaussianRational::real(-1, 4)),
                        ((b, a, v), GaussianRational::real(-1, 4)),
                    ]
                })
                .collect();
            (labels, constants)
        }
        (Family::WFamily, &[n]) => {
            let v = 2 * n + 2;
            let labels = numbered("T", 2 * n + 2).chain(["V".to_string()]).collect();
            let constants = (0..=n)
                .map(|k| ((2 * k, 2 * k + 1, v), GaussianRational::real(-1, 2)))
                .collect();
            (labels, constants)
        }
        _ => unreachable!("arity checked by CatalogEntry::new"),
    };
    Ok(AlgebraSpec::new(name, labels, constants).expect("catalog constants are in range"))
}

/// `(name, signature)` for every family.
pub fn list() -> Vec<(&'static str, &'static str)> {
    Family::ALL.iter().map(|f| (f.name(), f.signature())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        let e: CatalogEntry = "double-heisenberg:2,1".parse().unwrap();
        assert_eq!(e.family, Family::DoubleHeisenberg);
        assert_eq!(e.params, vec![2, 1]);
        assert_eq!(e.to_string(), "double-heisenberg:2,1");
        assert!("w4n6:x".parse::<CatalogEntry>().is_err());
        assert!("p4n2:0".parse::<CatalogEntry>().is_err());
        assert!("w4n6:0".parse::<CatalogEntry>().is_ok());
        assert!("heisenberg-ext:1,2".parse::<CatalogEntry>().is_err());
        assert!(matches!(
            "nope:1".parse::<CatalogEntry>(),
            Err(CatalogError::UnknownFamily(_))
        ));
    }

    #[test]
    fn heisenberg_ext_one() {
        let spec = build_catalog_entry(Family::HeisenbergExt, &[1]).unwrap();
        assert_eq!(spec.n(), 2);
        let c: Vec<_> = spec.constants().collect();
        assert_eq!(c, vec![(&(0, 0, 1), &GaussianRational::imag(-1, 2))]);
    }

    #[test]
    fn w_family_zero() {
        let spec = build_catalog_entry(Family::WFamily, &[0]).unwrap();
        assert_eq!(spec.labels(), &["T1", "T2", "V"]);
        assert_eq!(spec.a(0, 1, 2), GaussianRational::real(-1, 2));
        assert_eq!(spec.constants().count(), 1);
    }

    #[test]
    fn p_family_one() {
        let spec = build_catalog_entry(Family::PFamily, &[1]).unwrap();
        let values: Vec<_> = spec.constants().map(|(_, v)| v.clone()).collect();
        assert_eq!(
            values,
            vec![
                GaussianRational::imag(1, 4),
                GaussianRational::real(-1, 4),
                GaussianRational::real(-1, 4)
            ]
        );
    }

    #[test]
    fn real_dimensions() {
        for (name, dim) in [
            ("heisenberg-ext:3", 8),
            ("double-heisenberg:2,1", 8),
            ("p4n2:2", 10),
            ("w4n6:1", 10),
        ] {
            let e: CatalogEntry = name.parse().unwrap();
            assert_eq!(e.real_dim(), dim);
            assert_eq!(e.build().real_dim(), dim);
        }
    }
}
