//! JSON loader for algebras, subalgebras and r-matrices.
//!
//! Brackets and coefficients are strings in the expression grammar. A
//! bracket value is linear in the generators with parameter-polynomial
//! coefficients, e.g. `"P0,P1": "-Lambda*K1"`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Bivector, Element, LieAlgebra};
use crate::error::{Error, Result};
use crate::expr::{text, Expr};
use crate::scalar::{Param, ParamPoly};

const BUILTIN: &str = include_str!("../../data/lie.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieDataFile {
    pub version: u32,
    pub algebras: Vec<AlgebraSpec>,
    pub r_matrices: Vec<RMatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub name: String,
    /// Start from another algebra (inheriting its subalgebras) instead of a table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    /// Parameter specializations applied to the base, e.g. `{"eta": "0"}`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub set: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub brackets: BTreeMap<String, String>,
    #[serde(default)]
    pub subalgebras: Vec<SubalgebraSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubalgebraSpec {
    pub name: String,
    pub generators: Vec<String>,
    /// Dual coordinate name for each complement generator.
    #[serde(default)]
    pub dual: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RMatrixSpec {
    pub name: String,
    pub algebra: String,
    #[serde(default)]
    pub about: String,
    /// `[a, b, coefficient]` meaning `coefficient · a∧b`.
    pub terms: Vec<(String, String, String)>,
}

#[derive(Debug, Clone)]
pub struct RMatrix {
    pub name: String,
    pub algebra: String,
    pub about: String,
    pub r: Bivector,
}

#[derive(Debug, Clone)]
pub struct LieData {
    algebras: BTreeMap<String, LieAlgebra>,
    r_matrices: BTreeMap<String, RMatrix>,
}

fn poly(src: &str) -> Result<ParamPoly> {
    text::parse(src)?.to_param_poly()
}

/// Split a generator-linear expression into its coefficients.
fn linear_in(e: &Expr, basis: &[String]) -> Result<Element> {
    let mut out = Element::zero(basis.len());
    let mut rest = e.clone();
    for (k, b) in basis.iter().enumerate() {
        if !e.depends_on(b) {
            continue;
        }
        let c = e.diff(b);
        if basis.iter().any(|g| c.depends_on(g)) {
            return Err(Error::NotPolynomial(format!("`{e}` is not linear in the generators")));
        }
        out.0[k] = c.to_param_poly()?;
        rest = rest.subs(b, &Expr::zero());
    }
    if !rest.to_param_poly()?.is_zero() {
        return Err(Error::NotPolynomial(format!("`{e}` has a generator-free part")));
    }
    Ok(out)
}

impl LieData {
    pub fn builtin() -> Result<LieData> {
        LieData::from_json(BUILTIN)
    }

    pub fn load(path: &Path) -> Result<LieData> {
        let src = std::fs::read_to_string(path)
            .map_err(|source| Error::MissingData { path: path.display().to_string(), source })?;
        LieData::from_json(&src)
    }

    pub fn from_json(src: &str) -> Result<LieData> {
        LieData::from_file(&serde_json::from_str(src)?)
    }

    pub fn from_file(file: &LieDataFile) -> Result<LieData> {
        let mut algebras: BTreeMap<String, LieAlgebra> = BTreeMap::new();
        for spec in &file.algebras {
            let mut g = match &spec.base {
                Some(base) => {
                    let mut g = algebras.get(base).ok_or_else(|| Error::UnknownEntry(base.clone()))?.clone();
                    for (p, v) in &spec.set {
                        let param = Param::from_name(p).ok_or_else(|| Error::UnknownVariable(p.clone()))?;
                        let value = poly(v)?
                            .as_constant()
                            .ok_or_else(|| Error::InvalidConfig(format!("`{p}` must be set to a number")))?;
                        g = g.subs(param, &value, spec.name.clone());
                    }
                    g.name = spec.name.clone();
                    g
                }
                None => {
                    let mut brackets = Vec::new();
                    for (pair, value) in &spec.brackets {
                        let (a, b) = pair
                            .split_once(',')
                            .ok_or_else(|| Error::InvalidConfig(format!("bracket key `{pair}` is not `X,Y`")))?;
                        let idx = |s: &str| {
                            spec.basis
                                .iter()
                                .position(|x| x == s.trim())
                                .ok_or_else(|| Error::UnknownGenerator(s.trim().to_string()))
                        };
                        brackets.push((idx(a)?, idx(b)?, linear_in(&text::parse(value)?, &spec.basis)?));
                    }
                    LieAlgebra::new(spec.name.clone(), spec.basis.clone(), &brackets)?
                }
            };
            for s in &spec.subalgebras {
                let gens: Vec<&str> = s.generators.iter().map(String::as_str).collect();
                g.declare_subalgebra(&s.name, &gens, &s.dual)?;
            }
            algebras.insert(spec.name.clone(), g);
        }
        let mut r_matrices = BTreeMap::new();
        for spec in &file.r_matrices {
            let g = algebras.get(&spec.algebra).ok_or_else(|| Error::UnknownEntry(spec.algebra.clone()))?;
            let terms = spec
                .terms
                .iter()
                .map(|(a, b, c)| Ok((a.as_str(), b.as_str(), poly(c)?)))
                .collect::<Result<Vec<_>>>()?;
            let r = Bivector::from_named(g, &terms)?;
            r_matrices.insert(
                spec.name.clone(),
                RMatrix { name: spec.name.clone(), algebra: spec.algebra.clone(), about: spec.about.clone(), r },
            );
        }
        Ok(LieData { algebras, r_matrices })
    }

    pub fn algebra(&self, name: &str) -> Result<&LieAlgebra> {
        self.algebras.get(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    pub fn r_matrix(&self, name: &str) -> Result<&RMatrix> {
        self.r_matrices.get(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    /// The r-matrix together with its algebra.
    pub fn with_algebra(&self, name: &str) -> Result<(&LieAlgebra, &Bivector)> {
        let rm = self.r_matrix(name)?;
        Ok((self.algebra(&rm.algebra)?, &rm.r))
    }

    pub fn r_matrix_names(&self) -> impl Iterator<Item = &str> {
        self.r_matrices.keys().map(String::as_str)
    }

    pub fn algebra_names(&self) -> impl Iterator<Item = &str> {
        self.algebras.keys().map(String::as_str)
    }
}
