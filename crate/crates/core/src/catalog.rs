//! Machine-readable catalog of supported algebra families and their
//! concrete matrix realizations.
//!
//! Families: sl(n,R), su(p,q), so(p,q), sp(2n,R) and the split form of g2.
//! Complex algebras are stored as real matrix algebras via the standard
//! doubling Z = X + iY -> [[X, -Y], [Y, X]]. The split g2 is built
//! constructively as the derivation algebra of the split octonions rather
//! than from a hardcoded table.

use crate::algebra_core::LieAlgebraRealization;
use crate::error::{LieError, Result};
use crate::octonions;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SlReal,
    SuPq,
    SoPq,
    SpReal,
    G2Split,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::SlReal => "sl_real",
            Family::SuPq => "su_pq",
            Family::SoPq => "so_pq",
            Family::SpReal => "sp_real",
            Family::G2Split => "g2_split",
        };
        write!(f, "{s}")
    }
}

/// Positive rational scale for the invariant form, serialized "p/q".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormScale {
    pub num: i64,
    pub den: i64,
}

impl FormScale {
    pub const ONE: FormScale = FormScale { num: 1, den: 1 };

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for FormScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for FormScale {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<i64>().map_err(|e| e.to_string())?,
                b.trim().parse::<i64>().map_err(|e| e.to_string())?,
            ),
            None => (s.trim().parse::<i64>().map_err(|e| e.to_string())?, 1),
        };
        if num <= 0 || den <= 0 {
            return Err(format!("form_scale must be positive, got {num}/{den}"));
        }
        Ok(FormScale { num, den })
    }
}

impl Serialize for FormScale {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FormScale {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn default_scale() -> FormScale {
    FormScale::ONE
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub id: String,
    pub family: Family,
    #[serde(default)]
    pub params: Vec<i64>,
    #[serde(default = "default_scale")]
    pub form_scale: FormScale,
}

impl AlgebraSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| {
            Err(LieError::InvalidParams {
                family: self.family.to_string(),
                reason: reason.to_string(),
            })
        };
        if self.form_scale.num <= 0 || self.form_scale.den <= 0 {
            return bad("form_scale must be positive");
        }
        match self.family {
            Family::SlReal => {
                if self.params.len() != 1 || self.params[0] < 2 {
                    return bad("sl_real needs params [n] with n >= 2");
                }
            }
            Family::SuPq => {
                if self.params.len() != 2 {
                    return bad("su_pq needs params [p, q]");
                }
                let (p, q) = (self.params[0], self.params[1]);
                if p < 1 || q < 1 {
                    return bad("su_pq needs p >= 1 and q >= 1");
                }
                if p > q {
                    return bad("su_pq expects p <= q");
                }
            }
            Family::SoPq => {
                if self.params.len() != 2 {
                    return bad("so_pq needs params [p, q]");
                }
                let (p, q) = (self.params[0], self.params[1]);
                if p < 1 || q < 1 || p + q < 3 {
                    return bad("so_pq needs p >= 1, q >= 1, p + q >= 3");
                }
                if p > q {
                    return bad("so_pq expects p <= q");
                }
            }
            Family::SpReal => {
                if self.params.len() != 1 || self.params[0] < 1 {
                    return bad("sp_real needs params [n] with n >= 1 (matrices of size 2n)");
                }
            }
            Family::G2Split => {
                if !self.params.is_empty() {
                    return bad("g2_split takes no params");
                }
            }
        }
        Ok(())
    }
}

const BUILTIN: &str = r#"[
  {"id": "sl2", "family": "sl_real", "params": [2], "form_scale": "1/1"},
  {"id": "sl3", "family": "sl_real", "params": [3], "form_scale": "1/1"},
  {"id": "sl4", "family": "sl_real", "params": [4], "form_scale": "1/1"},
  {"id": "su12", "family": "su_pq", "params": [1, 2], "form_scale": "1/1"},
  {"id": "so13", "family": "so_pq", "params": [1, 3], "form_scale": "1/1"},
  {"id": "so23", "family": "so_pq", "params": [2, 3], "form_scale": "1/1"},
  {"id": "sp4", "family": "sp_real", "params": [2], "form_scale": "1/1"},
  {"id": "g2split", "family": "g2_split", "params": [], "form_scale": "1/1"}
]"#;

pub fn builtin_catalog() -> Vec<AlgebraSpec> {
    serde_json::from_str(BUILTIN).expect("builtin catalog parses")
}

const FAMILY_NAMES: [&str; 5] = ["sl_real", "su_pq", "so_pq", "sp_real", "g2_split"];

/// Parses a user catalog file (JSON array of AlgebraSpec objects).
pub fn parse_catalog(json: &str) -> Result<Vec<AlgebraSpec>> {
    let raw: serde_json::Value = serde_json::from_str(json)
        .map_err(|e| LieError::Numerical(format!("catalog parse: {e}")))?;
    if let Some(entries) = raw.as_array() {
        for entry in entries {
            if let Some(family) = entry.get("family").and_then(|f| f.as_str()) {
                if !FAMILY_NAMES.contains(&family) {
                    return Err(LieError::UnsupportedFamily(family.to_string()));
                }
            }
        }
    }
    let specs: Vec<AlgebraSpec> = serde_json::from_value(raw)
        .map_err(|e| LieError::Numerical(format!("catalog parse: {e}")))?;
    for s in &specs {
        s.validate()?;
    }
    Ok(specs)
}

/// Resolves an id against the builtin catalog extended (and overridden) by
/// optional user entries.
pub fn resolve(id: &str, user: &[AlgebraSpec]) -> Result<AlgebraSpec> {
    if let Some(s) = user.iter().find(|s| s.id == id) {
        return Ok(s.clone());
    }
    builtin_catalog()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| LieError::UnknownAlgebra(id.to_string()))
}

fn unit(d: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(d, d);
    m[(i, j)] = 1.0;
    m
}

/// Real doubling of a complex matrix given as (re, im).
fn realify(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<f64> {
    let m = re.nrows();
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    out.view_mut((0, 0), (m, m)).copy_from(re);
    out.view_mut((m, m), (m, m)).copy_from(re);
    out.view_mut((0, m), (m, m)).copy_from(&(-im));
    out.view_mut((m, 0), (m, m)).copy_from(im);
    out
}

fn sl_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut basis = Vec::new();
    for i in 0..n - 1 {
        basis.push(unit(n, i, i) - unit(n, i + 1, i + 1));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(unit(n, i, j));
            }
        }
    }
    basis
}

fn su_basis(p: usize, q: usize) -> Vec<DMatrix<f64>> {
    let m = p + q;
    let zero = DMatrix::zeros(m, m);
    let mut basis = Vec::new();
    // real part: skew inside each block, symmetric across
    for (lo, hi) in [(0, p), (p, m)] {
        for i in lo..hi {
            for j in (i + 1)..hi {
                basis.push(realify(&(unit(m, i, j) - unit(m, j, i)), &zero));
            }
        }
    }
    for i in 0..p {
        for a in p..m {
            basis.push(realify(&(unit(m, i, a) + unit(m, a, i)), &zero));
        }
    }
    // imaginary part: symmetric inside each block, skew across, traceless diagonal
    for (lo, hi) in [(0, p), (p, m)] {
        for i in lo..hi {
            for j in (i + 1)..hi {
                basis.push(realify(&zero, &(unit(m, i, j) + unit(m, j, i))));
            }
        }
    }
    for i in 0..p {
        for a in p..m {
            basis.push(realify(&zero, &(unit(m, i, a) - unit(m, a, i))));
        }
    }
    for k in 0..m - 1 {
        basis.push(realify(&zero, &(unit(m, k, k) - unit(m, k + 1, k + 1))));
    }
    basis
}

fn so_basis(p: usize, q: usize) -> Vec<DMatrix<f64>> {
    let m = p + q;
    let mut basis = Vec::new();
    for (lo, hi) in [(0, p), (p, m)] {
        for i in lo..hi {
            for j in (i + 1)..hi {
                basis.push(unit(m, i, j) - unit(m, j, i));
            }
        }
    }
    for i in 0..p {
        for a in p..m {
            basis.push(unit(m, i, a) + unit(m, a, i));
        }
    }
    basis
}

fn sp_basis(n: usize) -> Vec<DMatrix<f64>> {
    let d = 2 * n;
    let mut basis = Vec::new();
    // block form [[A, B], [C, -A^T]] with B, C symmetric
    for i in 0..n {
        for j in 0..n {
            basis.push(unit(d, i, j) - unit(d, n + j, n + i));
        }
    }
    for i in 0..n {
        for j in i..n {
            basis.push(unit(d, i, n + j) + unit(d, j, n + i));
            basis.push(unit(d, n + i, j) + unit(d, n + j, i));
        }
    }
    basis
}

/// Produces the matrix realization for a validated spec.
pub fn realize(spec: &AlgebraSpec) -> Result<LieAlgebraRealization> {
    spec.validate()?;
    let basis = match spec.family {
        Family::SlReal => sl_basis(spec.params[0] as usize),
        Family::SuPq => su_basis(spec.params[0] as usize, spec.params[1] as usize),
        Family::SoPq => so_basis(spec.params[0] as usize, spec.params[1] as usize),
        Family::SpReal => sp_basis(spec.params[0] as usize),
        Family::G2Split => {
            let table = octonions::split_octonion_table();
            let ders = octonions::derivation_basis(&table);
            if ders.len() != 14 {
                return Err(LieError::Numerical(format!(
                    "derivation algebra has dimension {}, expected 14",
                    ders.len()
                )));
            }
            ders
        }
    };
    LieAlgebraRealization::from_matrix_basis(&spec.id, basis, spec.form_scale.value())
}

/// Canonical maximal abelian subspace of p as ambient matrices, when the
/// family admits a standard choice. g2_split returns None and the caller
/// falls back to a deterministic greedy construction.
pub fn canonical_a_matrices(spec: &AlgebraSpec) -> Option<Vec<DMatrix<f64>>> {
    match spec.family {
        Family::SlReal => {
            // fundamental coweights diag(1,..,1,0,..,0) - (k/n) I; after
            // orthonormalization the regular element has strictly decreasing
            // diagonal, so the positive roots come out upper-triangular
            let n = spec.params[0] as usize;
            let mut out = Vec::new();
            for k in 1..n {
                let mut m = DMatrix::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = if i < k { 1.0 } else { 0.0 } - k as f64 / n as f64;
                }
                out.push(m);
            }
            Some(out)
        }
        Family::SuPq => {
            let (p, q) = (spec.params[0] as usize, spec.params[1] as usize);
            let m = p + q;
            let zero = DMatrix::zeros(m, m);
            Some(
                (0..p)
                    .map(|i| realify(&(unit(m, i, p + i) + unit(m, p + i, i)), &zero))
                    .collect(),
            )
        }
        Family::SoPq => {
            let (p, q) = (spec.params[0] as usize, spec.params[1] as usize);
            let m = p + q;
            Some(
                (0..p)
                    .map(|i| unit(m, i, p + i) + unit(m, p + i, i))
                    .collect(),
            )
        }
        Family::SpReal => {
            let n = spec.params[0] as usize;
            Some(
                (0..n)
                    .map(|i| unit(2 * n, i, i) - unit(2 * n, n + i, n + i))
                    .collect(),
            )
        }
        Family::G2Split => None,
    }
}
