//! Registry of closed-form bracket tables, coordinate maps and distinguished
//! algebra elements, loaded from a versioned JSON file of expression strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{text, Env, Expr, SamplePlan};
use crate::scalar::ParamPoint;

mod checks;

pub use checks::{
    compare_exprs, flat_limit_check, flat_limit_map_check, null_plane_check, poisson_jacobi_check, pushforward,
    superposition_check, Comparison, JacobiReport, FLAT_ETA, FLAT_TOL,
};

pub const FORMAT_VERSION: u32 = 1;

const BUILTIN: &str = include_str!("../../data/catalog.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Poisson,
    QuantumLinear,
    QuantumQuadratic,
    QuantumFunctionCoefficient,
}

impl Classification {
    pub fn is_quantum(self) -> bool {
        self != Classification::Poisson
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    /// Per-coordinate sampling interval, overriding [−0.7, 0.7].
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ranges: BTreeMap<String, (f64, f64)>,
    /// Extra expressions to keep away from zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub guards: Vec<String>,
}

impl DomainSpec {
    fn is_empty(&self) -> bool {
        self.ranges.is_empty() && self.guards.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub name: String,
    pub classification: Classification,
    pub about: String,
    /// Not printed as such; assembled from a stated relation (e.g. a sum).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub derived: bool,
    /// Coordinates, in monomial order for quantum entries.
    pub coords: Vec<String>,
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "DomainSpec::is_empty")]
    pub domain: DomainSpec,
    /// `"a,b"` → `{a, b}` (or `[a, b]`); omitted pairs vanish.
    pub entries: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub name: String,
    pub about: String,
    pub inputs: Vec<String>,
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "DomainSpec::is_empty")]
    pub domain: DomainSpec,
    pub outputs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementSpec {
    pub name: String,
    /// Table or map whose coordinates the element is written in.
    pub over: String,
    pub about: String,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub version: u32,
    pub tables: Vec<TableSpec>,
    pub maps: Vec<MapSpec>,
    pub elements: Vec<ElementSpec>,
}

/// Antisymmetric table of expressions, full storage.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketTable {
    pub coords: Vec<String>,
    entries: Vec<Vec<Expr>>,
}

impl BracketTable {
    pub fn zero(coords: Vec<String>) -> Self {
        let n = coords.len();
        BracketTable { coords, entries: vec![vec![Expr::zero(); n]; n] }
    }

    pub fn index_of(&self, c: &str) -> Result<usize> {
        self.coords.iter().position(|x| x == c).ok_or_else(|| Error::UnknownVariable(c.to_string()))
    }

    /// Sets `{a,b} = e` and `{b,a} = −e`.
    pub fn set(&mut self, a: usize, b: usize, e: Expr) -> Result<()> {
        if a == b {
            if e.is_zero() {
                return Ok(());
            }
            return Err(Error::InvalidConfig(format!("diagonal entry {{{0}, {0}}} must vanish", self.coords[a])));
        }
        self.entries[b][a] = Expr::neg(e.clone());
        self.entries[a][b] = e;
        Ok(())
    }

    pub fn get(&self, a: usize, b: usize) -> &Expr {
        &self.entries[a][b]
    }

    pub fn entry(&self, a: &str, b: &str) -> Result<&Expr> {
        Ok(self.get(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Upper-triangle pairs `(a, b, {a,b})`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &Expr)> {
        let n = self.dim();
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b, &self.entries[a][b])))
    }

    pub fn map_entries(&self, f: impl Fn(&Expr) -> Expr) -> BracketTable {
        let mut out = BracketTable::zero(self.coords.clone());
        for (a, b, e) in self.pairs() {
            out.set(a, b, f(e)).expect("off-diagonal");
        }
        out
    }

    /// Entrywise sum, matching coordinates by name.
    pub fn plus(&self, other: &BracketTable) -> Result<BracketTable> {
        let mut out = self.clone();
        for (a, b, e) in other.pairs() {
            let (i, j) = (self.index_of(&other.coords[a])?, self.index_of(&other.coords[b])?);
            let sum = Expr::add(vec![self.get(i, j).clone(), e.clone()]);
            out.set(i, j, sum)?;
        }
        Ok(out)
    }

    pub fn eval(&self, env: &Env) -> Result<Vec<Vec<f64>>> {
        let n = self.dim();
        let mut out = vec![vec![0.0; n]; n];
        for (a, b, e) in self.pairs() {
            let v = e.eval(env)?;
            out[a][b] = v;
            out[b][a] = -v;
        }
        Ok(out)
    }

    /// Every variable that is neither a coordinate nor listed in `allowed`.
    pub fn stray_vars(&self, allowed: &[String]) -> Vec<String> {
        let mut out: Vec<String> = self
            .pairs()
            .flat_map(|(_, _, e)| e.vars())
            .filter(|v| !self.coords.contains(v) && !allowed.contains(v))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Part of each entry linear in `var` (the semiclassical reading when
    /// `var` is the deformation parameter).
    pub fn linear_part(&self, var: &str) -> BracketTable {
        let v = Expr::var(var);
        self.map_entries(|e| Expr::mul(vec![v.clone(), e.diff(var).subs(var, &Expr::zero())]))
    }

    /// Split into the η-even and η-odd tables (see [`Expr::eta_split`]).
    pub fn eta_split(&self) -> Result<(BracketTable, BracketTable)> {
        let mut even = BracketTable::zero(self.coords.clone());
        let mut odd = BracketTable::zero(self.coords.clone());
        for (a, b, e) in self.pairs() {
            let (x, y) = e.eta_split()?;
            even.set(a, b, x)?;
            odd.set(a, b, y)?;
        }
        Ok((even, odd))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub classification: Classification,
    pub about: String,
    pub derived: bool,
    pub params: Vec<String>,
    pub domain: DomainSpec,
    pub table: BracketTable,
}

impl CatalogEntry {
    pub fn coords(&self) -> &[String] {
        &self.table.coords
    }

    /// Sampling plan over the entry's coordinates with parameters fixed.
    pub fn plan(&self, params: &ParamPoint, seed: u64) -> Result<SamplePlan> {
        plan_for(self.coords(), &self.domain, params, seed)
    }

    pub fn guards(&self) -> Result<Vec<Expr>> {
        self.domain.guards.iter().map(|g| text::parse(g)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateMap {
    pub name: String,
    pub about: String,
    pub inputs: Vec<String>,
    pub params: Vec<String>,
    pub domain: DomainSpec,
    pub outputs: Vec<(String, Expr)>,
}

impl CoordinateMap {
    pub fn output(&self, name: &str) -> Result<&Expr> {
        self.outputs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn output_names(&self) -> Vec<String> {
        self.outputs.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn eval(&self, env: &Env) -> Result<Vec<f64>> {
        self.outputs.iter().map(|(_, e)| e.eval(env)).collect()
    }

    pub fn plan(&self, params: &ParamPoint, seed: u64) -> Result<SamplePlan> {
        plan_for(&self.inputs, &self.domain, params, seed)
    }

    /// Substitute the outputs into `e` (written in the output names).
    pub fn compose(&self, e: &Expr) -> Expr {
        // rename first so outputs that reuse input names are not captured
        let mut out = e.clone();
        for (n, _) in &self.outputs {
            out = out.subs(n, &Expr::var(format!("{n}'")));
        }
        for (n, f) in &self.outputs {
            out = out.subs(&format!("{n}'"), f);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogElement {
    pub name: String,
    pub over: String,
    pub about: String,
    pub expr: Expr,
}

/// Fixed parameter values as an evaluation environment. `eta` is only
/// present when it is real (Λ ≤ 0).
pub fn param_env(p: &ParamPoint) -> Env {
    let mut env = Env::new();
    env.insert("Lambda".into(), p.lambda);
    env.insert("kinv".into(), p.kinv);
    env.insert("z".into(), p.z);
    env.insert("zp".into(), p.zp);
    if let Some(eta) = p.real_eta() {
        env.insert("eta".into(), eta);
    }
    env
}

fn plan_for(coords: &[String], domain: &DomainSpec, params: &ParamPoint, seed: u64) -> Result<SamplePlan> {
    let mut plan = SamplePlan::new(seed).coords(coords);
    for (c, (lo, hi)) in &domain.ranges {
        if !coords.contains(c) {
            return Err(Error::UnknownVariable(c.clone()));
        }
        plan = plan.range(c, *lo, *hi);
    }
    plan.fixed = param_env(params);
    Ok(plan)
}

#[derive(Debug, Clone)]
pub struct Catalog {
    file: CatalogFile,
    entries: BTreeMap<String, CatalogEntry>,
    maps: BTreeMap<String, CoordinateMap>,
    elements: BTreeMap<String, CatalogElement>,
}

impl Catalog {
    pub fn builtin() -> Result<Catalog> {
        Catalog::from_json(BUILTIN)
    }

    /// `catalog.json` from `dir`, or the shipped copy.
    pub fn open(dir: Option<&Path>) -> Result<Catalog> {
        match dir {
            Some(d) => Catalog::load(&d.join("catalog.json")),
            None => Catalog::builtin(),
        }
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let src = std::fs::read_to_string(path)
            .map_err(|source| Error::MissingData { path: path.display().to_string(), source })?;
        Catalog::from_json(&src)
    }

    pub fn from_json(src: &str) -> Result<Catalog> {
        Catalog::from_file(serde_json::from_str(src)?)
    }

    /// Canonical text; loading and saving a canonical file is the identity.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.file).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn file(&self) -> &CatalogFile {
        &self.file
    }

    pub fn from_file(file: CatalogFile) -> Result<Catalog> {
        if file.version != FORMAT_VERSION {
            return Err(Error::InvalidConfig(format!("catalog version {} (expected {FORMAT_VERSION})", file.version)));
        }
        let mut entries = BTreeMap::new();
        for t in &file.tables {
            let mut table = BracketTable::zero(t.coords.clone());
            let mut seen = Vec::new();
            for (key, src) in &t.entries {
                let (a, b) =
                    key.split_once(',').ok_or_else(|| Error::InvalidConfig(format!("entry key `{key}` is not `a,b`")))?;
                let (i, j) = (table.index_of(a.trim())?, table.index_of(b.trim())?);
                if seen.contains(&(i.min(j), i.max(j))) {
                    return Err(Error::InvalidConfig(format!("{}: pair `{key}` given twice", t.name)));
                }
                seen.push((i.min(j), i.max(j)));
                table.set(i, j, text::parse(src)?)?;
            }
            let stray = table.stray_vars(&t.params);
            if !stray.is_empty() {
                return Err(Error::InvalidConfig(format!("{}: undeclared variables {stray:?}", t.name)));
            }
            entries.insert(
                t.name.clone(),
                CatalogEntry {
                    name: t.name.clone(),
                    classification: t.classification,
                    about: t.about.clone(),
                    derived: t.derived,
                    params: t.params.clone(),
                    domain: t.domain.clone(),
                    table,
                },
            );
        }
        let mut maps = BTreeMap::new();
        for m in &file.maps {
            let outputs = m
                .outputs
                .iter()
                .map(|(n, src)| Ok((n.clone(), text::parse(src)?)))
                .collect::<Result<Vec<_>>>()?;
            for (n, e) in &outputs {
                if let Some(v) = e.vars().into_iter().find(|v| !m.inputs.contains(v) && !m.params.contains(v)) {
                    return Err(Error::InvalidConfig(format!("{}: output {n} uses undeclared `{v}`", m.name)));
                }
            }
            maps.insert(
                m.name.clone(),
                CoordinateMap {
                    name: m.name.clone(),
                    about: m.about.clone(),
                    inputs: m.inputs.clone(),
                    params: m.params.clone(),
                    domain: m.domain.clone(),
                    outputs,
                },
            );
        }
        let mut elements = BTreeMap::new();
        for e in &file.elements {
            if !entries.contains_key(&e.over) && !maps.contains_key(&e.over) {
                return Err(Error::UnknownEntry(e.over.clone()));
            }
            elements.insert(
                e.name.clone(),
                CatalogElement {
                    name: e.name.clone(),
                    over: e.over.clone(),
                    about: e.about.clone(),
                    expr: text::parse(&e.expr)?,
                },
            );
        }
        Ok(Catalog { file, entries, maps, elements })
    }

    /// catalog_lookup
    pub fn lookup(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries.get(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    pub fn map(&self, name: &str) -> Result<&CoordinateMap> {
        self.maps.get(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    pub fn element(&self, name: &str) -> Result<&CatalogElement> {
        self.elements.get(name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    pub fn maps(&self) -> impl Iterator<Item = &CoordinateMap> {
        self.maps.values()
    }
}
