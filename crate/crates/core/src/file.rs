//! JSON definition files for chart algebroids.
//!
//! ```json
//! {
//!   "dim_base": 1, "rank_B": 1, "rank_A": 1,
//!   "variables": ["x1"],
//!   "anchor": [["1"], ["x1"]],
//!   "structure": {"2,1,1": "-1"},
//!   "christoffel": {"2,1,1": "-1", "1,1,1": "x1"},
//!   "matched_pair": true
//! }
//! ```
//!
//! Indices are 1-based; `L`-indices `1..=rank_B` are the `B` directions and
//! `rank_B+1..=rank_B+rank_A` the `A` directions. Omitted entries are zero and
//! structure functions are completed by antisymmetry. Named rational
//! parameters may be declared under `"parameters"` with a default value (or
//! `null` when the value must be supplied at load time).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebroid::{AlgebroidError, ChartAlgebroid};
use crate::graded::Dims;
use crate::parse::{is_identifier, parse_poly_in, parse_rational, ParseError, Scope};
use crate::poly::{format_rational, Poly, Rational};
use crate::validation::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidFile {
    pub dim_base: usize,
    #[serde(rename = "rank_B")]
    pub rank_b: usize,
    #[serde(rename = "rank_A")]
    pub rank_a: usize,
    #[serde(default)]
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, Option<String>>,
    #[serde(default)]
    pub anchor: Vec<Vec<String>>,
    #[serde(default)]
    pub structure: BTreeMap<String, String>,
    #[serde(default)]
    pub christoffel: BTreeMap<String, String>,
    pub matched_pair: bool,
    #[serde(default)]
    pub symmetrize_connection: bool,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("in {field}: {source}")]
    Parse {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("parameter '{0}' has no value; bind it on the command line")]
    UnboundParameter(String),
    #[error("parameter '{0}' is not declared in the file")]
    UnknownParameter(String),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error("structure validation failed:\n{0}")]
    Invalid(ValidationReport),
}

fn schema(msg: impl Into<String>) -> LoadError {
    LoadError::Schema(msg.into())
}

fn parse_key(key: &str, what: &str) -> Result<[usize; 3], LoadError> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(schema(format!("{what} key '{key}' must have the form \"i,j,k\"")));
    }
    let mut out = [0; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        let v: usize = p
            .parse()
            .map_err(|_| schema(format!("{what} key '{key}': '{p}' is not a positive integer")))?;
        if v == 0 {
            return Err(schema(format!("{what} key '{key}': indices are 1-based")));
        }
        *slot = v - 1;
    }
    Ok(out)
}

impl AlgebroidFile {
    pub fn from_json(src: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("definition files serialize")
    }

    /// Resolve parameters, parse every expression and build the algebroid
    /// (without running structure validation).
    pub fn build(&self, bindings: &BTreeMap<String, Rational>) -> Result<ChartAlgebroid, LoadError> {
        let n = self.dim_base;
        let s = self.rank_b;
        let t = self.rank_a;
        let r = s + t;
        if s + t > 32 {
            return Err(schema("rank_B + rank_A must be at most 32"));
        }
        if self.variables.len() != n {
            return Err(schema(format!(
                "expected {n} variable names, found {}",
                self.variables.len()
            )));
        }
        for (i, v) in self.variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(schema(format!("variable name '{v}' is not an identifier")));
            }
            if self.variables[..i].contains(v) {
                return Err(schema(format!("variable name '{v}' appears twice")));
            }
            if self.parameters.contains_key(v) {
                return Err(schema(format!("'{v}' is both a variable and a parameter")));
            }
        }
        for name in bindings.keys() {
            if !self.parameters.contains_key(name) {
                return Err(LoadError::UnknownParameter(name.clone()));
            }
        }
        let mut scope = Scope::new(&self.variables);
        for (name, default) in &self.parameters {
            if !is_identifier(name) {
                return Err(schema(format!("parameter name '{name}' is not an identifier")));
            }
            let value = match (bindings.get(name), default) {
                (Some(v), _) => v.clone(),
                (None, Some(src)) => parse_rational(src).map_err(|e| LoadError::Parse {
                    field: format!("parameters.{name}"),
                    source: e,
                })?,
                (None, None) => return Err(LoadError::UnboundParameter(name.clone())),
            };
            scope = scope.with_parameter(name.clone(), value);
        }
        let parse = |field: String, src: &str| -> Result<Poly, LoadError> {
            parse_poly_in(src, &scope).map_err(|e| LoadError::Parse { field, source: e })
        };

        let mut rho = vec![vec![Poly::zero(); n]; r];
        if !self.anchor.is_empty() || n > 0 {
            if self.anchor.len() != r {
                return Err(schema(format!("anchor must have {r} rows, found {}", self.anchor.len())));
            }
            for (i, row) in self.anchor.iter().enumerate() {
                if row.len() != n {
                    return Err(schema(format!("anchor row {} must have {n} entries, found {}", i + 1, row.len())));
                }
                for (j, src) in row.iter().enumerate() {
                    rho[i][j] = parse(format!("anchor[{}][{}]", i + 1, j + 1), src)?;
                }
            }
        }

        let mut c = vec![Poly::zero(); r * r * r];
        let mut given = vec![false; r * r * r];
        for (key, src) in &self.structure {
            let [i, j, k] = parse_key(key, "structure")?;
            if i >= r || j >= r || k >= r {
                return Err(schema(format!("structure key '{key}' out of range 1..={r}")));
            }
            let p = parse(format!("structure[{key}]"), src)?;
            if i == j && !p.is_zero() {
                return Err(AlgebroidError::NotAntisymmetric { i, j, k }.into());
            }
            let idx = (i * r + j) * r + k;
            let mirror = (j * r + i) * r + k;
            if given[mirror] && !(&c[mirror] + &p).is_zero() {
                return Err(AlgebroidError::NotAntisymmetric { i, j, k }.into());
            }
            c[mirror] = -&p;
            c[idx] = p;
            given[idx] = true;
            given[mirror] = true;
        }

        let mut gamma = vec![Poly::zero(); r * s * s];
        for (key, src) in &self.christoffel {
            let [i, j, k] = parse_key(key, "christoffel")?;
            if i >= r || j >= s || k >= s {
                return Err(schema(format!(
                    "christoffel key '{key}' out of range: first index in 1..={r}, others in 1..={s}"
                )));
            }
            gamma[(i * s + j) * s + k] = parse(format!("christoffel[{key}]"), src)?;
        }

        let dims = Dims::new(n, s, t);
        let alg = if self.symmetrize_connection {
            ChartAlgebroid::new_symmetrized(dims, rho, c, gamma, self.matched_pair)?
        } else {
            ChartAlgebroid::new(dims, rho, c, gamma, self.matched_pair)?
        };
        Ok(alg.with_variables(self.variables.clone()))
    }

    /// The definition file describing `alg` (no parameters, all non-zero
    /// entries written out, structure functions for `i < j` only).
    pub fn from_algebroid(alg: &ChartAlgebroid) -> Self {
        let dims = alg.dims();
        let names = alg.variables();
        let r = dims.rank();
        let anchor = (0..r)
            .map(|i| (0..dims.n).map(|j| alg.rho(i, j).display_with(names)).collect())
            .collect();
        let mut structure = BTreeMap::new();
        for i in 0..r {
            for j in (i + 1)..r {
                for k in 0..r {
                    let p = alg.c(i, j, k);
                    if !p.is_zero() {
                        structure.insert(format!("{},{},{}", i + 1, j + 1, k + 1), p.display_with(names));
                    }
                }
            }
        }
        let mut christoffel = BTreeMap::new();
        for i in 0..r {
            for j in 0..dims.s {
                for k in 0..dims.s {
                    let p = alg.gamma(i, j, k);
                    if !p.is_zero() {
                        christoffel.insert(format!("{},{},{}", i + 1, j + 1, k + 1), p.display_with(names));
                    }
                }
            }
        }
        AlgebroidFile {
            dim_base: dims.n,
            rank_b: dims.s,
            rank_a: dims.t,
            variables: names.to_vec(),
            parameters: BTreeMap::new(),
            anchor,
            structure,
            christoffel,
            matched_pair: alg.is_matched_pair(),
            symmetrize_connection: false,
        }
    }
}

/// Read and build without validating the structure.
pub fn load_unvalidated(path: &Path, bindings: &BTreeMap<String, Rational>) -> Result<ChartAlgebroid, LoadError> {
    let src = std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    AlgebroidFile::from_json(&src)?.build(bindings)
}

/// Read, build and validate. Validation failures carry the full report.
pub fn load_algebroid(path: &Path, bindings: &BTreeMap<String, Rational>) -> Result<ChartAlgebroid, LoadError> {
    let alg = load_unvalidated(path, bindings)?;
    let report = alg.validate_structure();
    if !report.passed() {
        return Err(LoadError::Invalid(report));
    }
    Ok(alg)
}

/// Bindings for the `gamma` parameter, as set by `--gamma-param`.
pub fn gamma_binding(value: Option<Rational>) -> BTreeMap<String, Rational> {
    value.into_iter().map(|v| ("gamma".to_string(), v)).collect()
}

/// Render a rational the way definition files write it.
pub fn rational_to_string(r: &Rational) -> String {
    format_rational(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::fixtures;
    use crate::poly::{int, rat};

    const POINT: &str = r#"{
        "dim_base": 0, "rank_B": 1, "rank_A": 1,
        "parameters": {"gamma": "1"},
        "structure": {"2,1,1": "1"},
        "christoffel": {"2,1,1": "1", "1,1,1": "gamma"},
        "matched_pair": true
    }"#;

    #[test]
    fn builds_point_aff1_with_default_and_bound_gamma() {
        let f = AlgebroidFile::from_json(POINT).unwrap();
        assert_eq!(f.build(&BTreeMap::new()).unwrap(), fixtures::point_aff1(int(1)));
        let g = rat(-3, 7);
        assert_eq!(f.build(&gamma_binding(Some(g.clone()))).unwrap(), fixtures::point_aff1(g));
    }

    #[test]
    fn completes_antisymmetry() {
        let f = AlgebroidFile::from_json(
            r#"{"dim_base": 0, "rank_B": 1, "rank_A": 1, "structure": {"1,2,1": "1"}, "matched_pair": true}"#,
        )
        .unwrap();
        let alg = f.build(&BTreeMap::new()).unwrap();
        assert_eq!(alg.c(1, 0, 0), &Poly::from_int(-1));
    }

    #[test]
    fn inconsistent_structure_is_rejected() {
        let f = AlgebroidFile::from_json(
            r#"{"dim_base": 0, "rank_B": 1, "rank_A": 1, "structure": {"1,2,1": "1", "2,1,1": "1"}, "matched_pair": true}"#,
        )
        .unwrap();
        assert!(matches!(f.build(&BTreeMap::new()), Err(LoadError::Algebroid(_))));
    }

    #[test]
    fn unbound_and_unknown_parameters() {
        let f = AlgebroidFile::from_json(&POINT.replace("\"gamma\": \"1\"", "\"gamma\": null")).unwrap();
        assert!(matches!(f.build(&BTreeMap::new()), Err(LoadError::UnboundParameter(_))));
        let mut b = BTreeMap::new();
        b.insert("delta".to_string(), int(1));
        assert!(matches!(f.build(&b), Err(LoadError::UnknownParameter(_))));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(AlgebroidFile::from_json("{"), Err(LoadError::Json(_))));
        assert!(matches!(
            AlgebroidFile::from_json(r#"{"dim_base": 0, "rank_B": 1, "rank_A": 0, "matched_pair": true, "extra": 1}"#),
            Err(LoadError::Json(_))
        ));
        let f = AlgebroidFile::from_json(
            r#"{"dim_base": 0, "rank_B": 1, "rank_A": 0, "christoffel": {"1,2,1": "1"}, "matched_pair": true}"#,
        )
        .unwrap();
        assert!(matches!(f.build(&BTreeMap::new()), Err(LoadError::Schema(_))));
        let f = AlgebroidFile::from_json(
            r#"{"dim_base": 1, "rank_B": 1, "rank_A": 0, "variables": ["x"], "anchor": [["y"]], "matched_pair": true}"#,
        )
        .unwrap();
        assert!(matches!(f.build(&BTreeMap::new()), Err(LoadError::Parse { .. })));
    }

    #[test]
    fn round_trips_fixtures() {
        for (name, alg) in fixtures::all_valid() {
            let f = AlgebroidFile::from_algebroid(&alg);
            let back = AlgebroidFile::from_json(&f.to_json()).unwrap().build(&BTreeMap::new()).unwrap();
            assert_eq!(back, alg, "{name}");
        }
    }
}
