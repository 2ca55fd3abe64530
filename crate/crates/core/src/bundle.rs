//! JSON form of algebras and triples.
//!
//! Tensors are sparse lists of `[i, j, k, re, im]` entries; omitted entries
//! are zero.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{labels, BimoduleAction, FinDimAlgebra, Triple};
use crate::error::{Error, Result};
use crate::linalg::{Subspace, C64};

pub type Entry = (usize, usize, usize, f64, f64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub mult: Vec<Entry>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ActionJson {
    /// `[p, i, k, re, im]`: coefficient of `a_k` in `beta_p . a_i`.
    #[serde(default)]
    pub left: Vec<Entry>,
    /// `[i, p, k, re, im]`: coefficient of `a_k` in `a_i . beta_p`.
    #[serde(default)]
    pub right: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraBundle {
    #[serde(default)]
    pub name: String,
    pub algebra_a: AlgebraJson,
    pub algebra_f: AlgebraJson,
    #[serde(default)]
    pub action: ActionJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<serde_json::Value>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_bundle(text: &str) -> Result<AlgebraBundle> {
    let b: AlgebraBundle = serde_json::from_str(text).map_err(parse_error)?;
    b.check()?;
    Ok(b)
}

/// A single algebra: the `algebra_a` object on its own.
pub fn parse_algebra(text: &str) -> Result<FinDimAlgebra> {
    let a: AlgebraJson = serde_json::from_str(text).map_err(parse_error)?;
    a.to_algebra("mult")
}

/// Dense tensor from entries, rejecting out-of-range and repeated keys.
fn densify(entries: &[Entry], bounds: [usize; 3], path: &str) -> Result<Vec<C64>> {
    let [b0, b1, b2] = bounds;
    let mut out = vec![C64::default(); b0 * b1 * b2];
    let mut seen = HashSet::new();
    for (n, &(i, j, k, x, y)) in entries.iter().enumerate() {
        let at = format!("{path}[{n}]");
        if i >= b0 || j >= b1 || k >= b2 {
            return Err(Error::Index {
                path: at,
                message: format!("({i}, {j}, {k}) outside {b0}x{b1}x{b2}"),
            });
        }
        if !seen.insert((i, j, k)) {
            return Err(Error::DuplicateEntry {
                path: at,
                key: vec![i, j, k],
            });
        }
        out[(i * b1 + j) * b2 + k] = C64::new(x, y);
    }
    Ok(out)
}

fn sparsify(dense: &[C64], bounds: [usize; 3]) -> Vec<Entry> {
    let [b0, b1, b2] = bounds;
    let mut out = Vec::new();
    for i in 0..b0 {
        for j in 0..b1 {
            for k in 0..b2 {
                let z = dense[(i * b1 + j) * b2 + k];
                if z != C64::default() {
                    out.push((i, j, k, z.re, z.im));
                }
            }
        }
    }
    out
}

impl AlgebraJson {
    pub fn from_algebra(alg: &FinDimAlgebra) -> Self {
        let d = alg.dim();
        AlgebraJson {
            dim: d,
            labels: Some(alg.labels().to_vec()),
            mult: sparsify(alg.tensor(), [d, d, d]),
        }
    }

    fn to_algebra(&self, path: &str) -> Result<FinDimAlgebra> {
        let d = self.dim;
        let names = match &self.labels {
            Some(l) if l.len() != d => {
                return Err(Error::Index {
                    path: path.replace("mult", "labels"),
                    message: format!("{} labels for dimension {d}", l.len()),
                })
            }
            Some(l) => l.clone(),
            None => labels("e", d),
        };
        let mult = densify(&self.mult, [d, d, d], path)?;
        Ok(FinDimAlgebra::new(names, mult)?.with_detected_unit(1e-12))
    }
}

impl AlgebraBundle {
    pub fn from_triple(name: &str, t: &Triple) -> Self {
        let (da, df) = (t.a_dim(), t.f_dim());
        AlgebraBundle {
            name: name.into(),
            algebra_a: AlgebraJson::from_algebra(&t.a),
            algebra_f: AlgebraJson::from_algebra(&t.f),
            action: ActionJson {
                left: sparsify(t.action.left_tensor(), [df, da, da]),
                right: sparsify(t.action.right_tensor(), [da, df, da]),
            },
            norm: None,
        }
    }

    fn check(&self) -> Result<()> {
        self.to_triple().map(|_| ())
    }

    /// The triple, unvalidated; see [`Triple::validate`].
    pub fn to_triple(&self) -> Result<Triple> {
        let a = self.algebra_a.to_algebra("algebra_a.mult")?;
        let f = self.algebra_f.to_algebra("algebra_f.mult")?;
        let (da, df) = (a.dim(), f.dim());
        let left = densify(&self.action.left, [df, da, da], "action.left")?;
        let right = densify(&self.action.right, [da, df, da], "action.right")?;
        Triple::new(a, f, BimoduleAction::new(da, df, left, right)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
struct SubspaceJson {
    vectors: Vec<Vec<Scalar>>,
}

/// A subspace file: `{"vectors": [[x, [re, im], ...], ...]}`, each vector
/// of length `ambient`; plain numbers are real.
pub fn parse_subspace(text: &str, ambient: usize, tol: f64) -> Result<Subspace> {
    let s: SubspaceJson = serde_json::from_str(text).map_err(parse_error)?;
    let mut vs = Vec::with_capacity(s.vectors.len());
    for (n, v) in s.vectors.iter().enumerate() {
        if v.len() != ambient {
            return Err(Error::Index {
                path: format!("vectors[{n}]"),
                message: format!("length {} in ambient dimension {ambient}", v.len()),
            });
        }
        vs.push(nalgebra::DVector::from_iterator(
            ambient,
            v.iter().map(|x| match *x {
                Scalar::Real(r) => C64::new(r, 0.0),
                Scalar::Complex([r, i]) => C64::new(r, i),
            }),
        ));
    }
    if vs.is_empty() {
        return Ok(Subspace::zero(ambient, tol));
    }
    Subspace::span(ambient, &vs, tol)
}

pub fn algebra_to_json(alg: &FinDimAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraJson::from_algebra(alg)).expect("plain data serializes")
}
