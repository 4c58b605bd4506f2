//! Matrix representation, product-of-exponentials charts, invariant vector
//! fields and the Sklyanin bracket.
//!
//! Numeric Poisson tables carry [`EtaSplit`] entries: the r-matrix is split
//! as `r_even + η·r_odd` and, the Sklyanin bracket being linear in r, each
//! part gives a real table even when η is imaginary (Λ > 0).

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::catalog::{BracketTable, CatalogEntry};
use crate::error::{Error, Result};
use crate::expr::{Env, SamplePlan};
use crate::lie::{Bivector, LieAlgebra};
use crate::scalar::{EtaSplit, ParamPoint};

mod ambient;

pub use ambient::{ambient_constraint_check, ambient_map, ambient_pushforward, AmbientMap, AMBIENT_NAMES};

/// Singular-value ratio below which the chart Jacobian counts as rank deficient.
pub const RANK_EPS: f64 = 1e-10;
/// Bound on the least-squares residual of the invariant-field solve.
pub const RESIDUAL_BOUND: f64 = 1e-9;

const BUILTIN: &str = include_str!("../../data/charts.json");

/// Ten 5×5 generator matrices of g_Λ at a fixed numeric Λ.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub lambda: f64,
    pub names: Vec<String>,
    pub mats: Vec<DMatrix<f64>>,
}

/// The general algebra element x^μ P_μ + ξ^a K_a + θ^a J_a as a 5×5 matrix.
fn general_element(lambda: f64, x: [f64; 4], xi: [f64; 3], th: [f64; 3]) -> DMatrix<f64> {
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(5, 5, &[
        0.0,  lambda * x[0], -lambda * x[1], -lambda * x[2], -lambda * x[3],
        x[0], 0.0,           xi[0],          xi[1],          xi[2],
        x[1], xi[0],         0.0,            -th[2],         th[1],
        x[2], xi[1],         th[2],          0.0,            -th[0],
        x[3], xi[2],         -th[1],         th[0],          0.0,
    ]);
    m
}

/// Generator matrices read off the general element one coefficient at a time.
pub fn rep_g_lambda(lambda: f64) -> MatrixRep {
    let mut mats = Vec::with_capacity(10);
    for k in 0..10 {
        let mut c = [0.0; 10];
        c[k] = 1.0;
        mats.push(general_element(
            lambda,
            [c[0], c[1], c[2], c[3]],
            [c[4], c[5], c[6]],
            [c[7], c[8], c[9]],
        ));
    }
    let names = ["P0", "P1", "P2", "P3", "K1", "K2", "K3", "J1", "J2", "J3"].iter().map(|s| s.to_string()).collect();
    MatrixRep { lambda, names, mats }
}

impl MatrixRep {
    pub fn index_of(&self, gen: &str) -> Result<usize> {
        self.names.iter().position(|n| n == gen).ok_or_else(|| Error::UnknownGenerator(gen.to_string()))
    }

    pub fn get(&self, gen: &str) -> Result<&DMatrix<f64>> {
        Ok(&self.mats[self.index_of(gen)?])
    }

    /// max |ρ([Xi,Xj]) − [ρ(Xi), ρ(Xj)]| over all pairs, with structure
    /// constants evaluated at this representation's Λ.
    pub fn representation_defect(&self, g: &LieAlgebra) -> Result<f64> {
        let at = ParamPoint { lambda: self.lambda, kinv: 0.0, z: 0.0, zp: 0.0 };
        let idx = g.basis().iter().map(|b| self.index_of(b)).collect::<Result<Vec<_>>>()?;
        let mut worst: f64 = 0.0;
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let (a, b) = (&self.mats[idx[i]], &self.mats[idx[j]]);
                let mut lhs = DMatrix::zeros(5, 5);
                for (k, c) in g.structure(i, j) {
                    let v = c.eval_split(&at);
                    if v.odd != 0.0 {
                        return Err(Error::Shape(format!("structure constant {c} is odd in eta")));
                    }
                    lhs += &self.mats[idx[*k]] * v.even;
                }
                worst = worst.max((lhs - (a * b - b * a)).amax());
            }
        }
        Ok(worst)
    }
}

/// Matrix exponential (scaling and squaring with Padé approximants).
pub fn matrix_exp(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    Ok(m.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub name: String,
    /// Fixed Λ for this chart (the Poincaré charts); `None` takes it from the run.
    #[serde(default)]
    pub lambda: Option<f64>,
    /// `(coordinate, generator)` translation factors, in product order.
    pub translations: Vec<(String, String)>,
    /// Isotropy factors, applied after all translations.
    pub isotropy: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ChartFile {
    version: u32,
    charts: Vec<ChartSpec>,
}

/// The shipped chart specifications, optionally read from a directory.
pub fn chart_specs(data_dir: Option<&Path>) -> Result<Vec<ChartSpec>> {
    let src = match data_dir {
        Some(dir) => {
            let path = dir.join("charts.json");
            std::fs::read_to_string(&path)
                .map_err(|source| Error::MissingData { path: path.display().to_string(), source })?
        }
        None => BUILTIN.to_string(),
    };
    let file: ChartFile = serde_json::from_str(&src)?;
    Ok(file.charts)
}

pub fn chart_spec(name: &str, data_dir: Option<&Path>) -> Result<ChartSpec> {
    chart_specs(data_dir)?.into_iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownChart(name.to_string()))
}

#[derive(Debug, Clone)]
pub struct GroupPoint {
    pub coords: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

/// A chart specification bound to a representation.
#[derive(Debug, Clone)]
pub struct Chart {
    pub spec: ChartSpec,
    pub rep: MatrixRep,
    names: Vec<String>,
    /// representation index of each coordinate's generator
    gens: Vec<usize>,
}

impl Chart {
    /// `lambda` is used unless the spec fixes Λ.
    pub fn new(spec: ChartSpec, lambda: f64) -> Result<Chart> {
        let rep = rep_g_lambda(spec.lambda.unwrap_or(lambda));
        let mut names = Vec::new();
        let mut gens = Vec::new();
        for (c, g) in spec.translations.iter().chain(&spec.isotropy) {
            if names.contains(c) {
                return Err(Error::InvalidConfig(format!("coordinate `{c}` repeated in chart {}", spec.name)));
            }
            names.push(c.clone());
            gens.push(rep.index_of(g)?);
        }
        let mut sorted = gens.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != rep.mats.len() || gens.len() != rep.mats.len() {
            return Err(Error::InvalidConfig(format!("chart {} does not use every generator once", spec.name)));
        }
        Ok(Chart { spec, rep, names, gens })
    }

    pub fn builtin(name: &str, lambda: f64) -> Result<Chart> {
        Chart::new(chart_spec(name, None)?, lambda)
    }

    pub fn lambda(&self) -> f64 {
        self.rep.lambda
    }

    /// All coordinate names: translations first, then isotropy.
    pub fn coord_names(&self) -> &[String] {
        &self.names
    }

    pub fn translation_names(&self) -> Vec<String> {
        self.spec.translations.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn n_translations(&self) -> usize {
        self.spec.translations.len()
    }

    fn factors(&self, coords: &[f64]) -> Vec<DMatrix<f64>> {
        self.gens.iter().zip(coords).map(|(&g, &c)| (&self.rep.mats[g] * c).exp()).collect()
    }

    pub fn eval(&self, coords: &[f64]) -> Result<GroupPoint> {
        if coords.len() != self.names.len() {
            return Err(Error::DimensionMismatch { expected: self.names.len(), got: coords.len() });
        }
        let matrix = self.factors(coords).iter().fold(DMatrix::identity(5, 5), |acc, f| acc * f);
        Ok(GroupPoint { coords: coords.to_vec(), matrix })
    }

    /// Translation coordinates given, isotropy coordinates zero.
    pub fn eval_projected(&self, translations: &[f64]) -> Result<GroupPoint> {
        let mut c = translations.to_vec();
        if c.len() != self.n_translations() {
            return Err(Error::DimensionMismatch { expected: self.n_translations(), got: c.len() });
        }
        c.resize(self.names.len(), 0.0);
        self.eval(&c)
    }

    /// 25 × d Jacobian of the flattened (column-major) matrix, by the
    /// product rule: ∂G/∂c_k = F1⋯F_k ρ(Y_k) F_{k+1}⋯F_d.
    pub fn jacobian(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        let d = self.names.len();
        if coords.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: coords.len() });
        }
        let f = self.factors(coords);
        let mut prefix = vec![DMatrix::identity(5, 5)];
        for fk in &f {
            let next = prefix.last().unwrap() * fk;
            prefix.push(next);
        }
        let mut suffix = vec![DMatrix::identity(5, 5); d + 1];
        for k in (0..d).rev() {
            suffix[k] = &f[k] * &suffix[k + 1];
        }
        let mut j = DMatrix::zeros(25, d);
        for k in 0..d {
            let col = &prefix[k + 1] * &self.rep.mats[self.gens[k]] * &suffix[k + 1];
            j.column_mut(k).copy_from_slice(col.as_slice());
        }
        Ok(j)
    }

    /// Columns are X^L_i and X^R_i in chart coordinates, one per generator
    /// of `g` (in `g`'s basis order).
    pub fn invariant_fields(&self, g: &LieAlgebra, point: &GroupPoint) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let jac = self.jacobian(&point.coords)?;
        let svd = jac.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let at = || format!("{} at {:?}", self.spec.name, point.coords);
        if smin <= RANK_EPS * smax {
            return Err(Error::RankDeficient { point: at() });
        }
        // nalgebra's SVD can lose ~1e-9 in reconstruction; solve through QR instead
        let qr = jac.clone().qr();
        let (q, r) = (qr.q(), qr.r());
        let d = self.names.len();
        let mut xl = DMatrix::zeros(d, g.dim());
        let mut xr = DMatrix::zeros(d, g.dim());
        for (i, name) in g.basis().iter().enumerate() {
            let y = self.rep.get(name)?;
            for (out, target) in [(&mut xl, &point.matrix * y), (&mut xr, y * &point.matrix)] {
                let b = DVector::from_column_slice(target.as_slice());
                let v = r.solve_upper_triangular(&(q.transpose() * &b)).ok_or_else(|| Error::RankDeficient { point: at() })?;
                let residual = (&jac * &v - &b).norm();
                if residual > RESIDUAL_BOUND * (1.0 + b.norm()) {
                    return Err(Error::LeastSquaresResidual { point: at(), residual });
                }
                out.column_mut(i).copy_from(&v);
            }
        }
        Ok((xl, xr))
    }

    /// Newton iteration for the coordinates of a group matrix near `start`.
    pub fn locate(&self, target: &DMatrix<f64>, start: &[f64]) -> Result<Vec<f64>> {
        let mut c = start.to_vec();
        for _ in 0..50 {
            let g = self.eval(&c)?.matrix;
            let res = DVector::from_column_slice((target - &g).as_slice());
            if res.norm() < 1e-14 {
                break;
            }
            let jac = self.jacobian(&c)?;
            let step = jac.svd(true, true).solve(&res, 1e-12).map_err(|e| Error::Shape(e.to_string()))?;
            for (ci, s) in c.iter_mut().zip(step.iter()) {
                *ci += s;
            }
        }
        Ok(c)
    }
}

/// Antisymmetric table among the translation coordinates at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericBracketTable {
    pub coords: Vec<String>,
    pub entries: Vec<Vec<EtaSplit>>,
}

impl NumericBracketTable {
    pub fn zero(coords: Vec<String>) -> Self {
        let n = coords.len();
        NumericBracketTable { coords, entries: vec![vec![EtaSplit::default(); n]; n] }
    }

    pub fn get(&self, a: usize, b: usize) -> EtaSplit {
        self.entries[a][b]
    }

    pub fn lookup(&self, a: &str, b: &str) -> Result<EtaSplit> {
        let ia = self.coords.iter().position(|c| c == a).ok_or_else(|| Error::UnknownVariable(a.to_string()))?;
        let ib = self.coords.iter().position(|c| c == b).ok_or_else(|| Error::UnknownVariable(b.to_string()))?;
        Ok(self.get(ia, ib))
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.coords.len();
        (0..n).all(|a| {
            self.entries[a][a] == EtaSplit::default()
                && (0..n).all(|b| self.entries[a][b] == self.entries[b][a].scale(-1.0))
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|e| e.even.abs().max(e.odd.abs())).fold(0.0, f64::max)
    }
}

/// Sklyanin bracket among translation coordinates at `point` (all chart
/// coordinates given; use [`Chart::eval_projected`] for the PHS projection).
pub fn sklyanin_at(
    chart: &Chart,
    g: &LieAlgebra,
    r: &Bivector,
    params: &ParamPoint,
    point: &GroupPoint,
) -> Result<NumericBracketTable> {
    if r.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: r.dim() });
    }
    let (xl, xr) = chart.invariant_fields(g, point)?;
    let ell = chart.n_translations();
    let rc: Vec<(usize, usize, EtaSplit)> = r.terms().map(|(i, j, c)| (i, j, c.eval_split(params))).collect();
    let mut table = NumericBracketTable::zero(chart.translation_names());
    for a in 0..ell {
        for b in a + 1..ell {
            let mut acc = EtaSplit::default();
            for &(i, j, c) in &rc {
                let w = xl[(a, i)] * xl[(b, j)] - xl[(a, j)] * xl[(b, i)] - xr[(a, i)] * xr[(b, j)]
                    + xr[(a, j)] * xr[(b, i)];
                acc = acc + c.scale(w);
            }
            table.entries[a][b] = acc;
            table.entries[b][a] = acc.scale(-1.0);
        }
    }
    Ok(table)
}

/// Sklyanin bracket on the homogeneous space: isotropy coordinates zero.
pub fn sklyanin_bracket(
    chart: &Chart,
    g: &LieAlgebra,
    r: &Bivector,
    params: &ParamPoint,
    translations: &[f64],
) -> Result<NumericBracketTable> {
    sklyanin_at(chart, g, r, params, &chart.eval_projected(translations)?)
}

/// Catalog table values at `env` as η-split numbers (valid for either sign
/// of Λ; `eta` itself need not be assigned).
#[derive(Debug, Clone)]
pub struct SplitTable {
    even: BracketTable,
    odd: BracketTable,
}

impl SplitTable {
    pub fn new(t: &BracketTable) -> Result<SplitTable> {
        if t.pairs().any(|(_, _, e)| e.depends_on("eta")) {
            let (even, odd) = t.eta_split()?;
            Ok(SplitTable { even, odd })
        } else {
            Ok(SplitTable { even: t.clone(), odd: BracketTable::zero(t.coords.clone()) })
        }
    }

    pub fn coords(&self) -> &[String] {
        &self.even.coords
    }

    pub fn eval(&self, env: &Env) -> Result<NumericBracketTable> {
        let (e, o) = (self.even.eval(env)?, self.odd.eval(env)?);
        let n = e.len();
        let mut out = NumericBracketTable::zero(self.even.coords.clone());
        for a in 0..n {
            for b in 0..n {
                out.entries[a][b] = EtaSplit { even: e[a][b], odd: o[a][b] };
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMatch {
    pub equal: bool,
    /// max |a − b| / (1 + max(|a|, |b|)) over pairs, η parts and points.
    pub max_deviation: f64,
    pub worst_pair: Option<(String, String)>,
    pub worst_point: Option<Env>,
    pub points: usize,
    pub seed: u64,
}

/// Largest relative deviation between two tables over the pairs of `b`.
pub fn table_deviation(a: &NumericBracketTable, b: &NumericBracketTable) -> Result<(f64, Option<(String, String)>)> {
    let mut worst = (0.0, None);
    for (i, x) in b.coords.iter().enumerate() {
        for (j, y) in b.coords.iter().enumerate().skip(i + 1) {
            let (u, v) = (a.lookup(x, y)?, b.get(i, j));
            for (p, q) in [(u.even, v.even), (u.odd, v.odd)] {
                let dev = (p - q).abs() / (1.0 + p.abs().max(q.abs()));
                if dev > worst.0 || !dev.is_finite() {
                    worst = (dev, Some((x.clone(), y.clone())));
                }
            }
        }
    }
    Ok(worst)
}

/// Sklyanin bracket on the homogeneous space against a catalog table at the
/// points drawn by `plan` (which must range over the entry's coordinates and
/// fix its parameters). Chart coordinates absent from the entry stay zero.
pub fn match_catalog(
    chart: &Chart,
    g: &LieAlgebra,
    r: &Bivector,
    params: &ParamPoint,
    entry: &CatalogEntry,
    plan: &SamplePlan,
) -> Result<TableMatch> {
    let split = SplitTable::new(&entry.table)?;
    let pts = plan.sample(&entry.guards()?)?;
    let names = chart.translation_names();
    let mut out =
        TableMatch { equal: true, max_deviation: 0.0, worst_pair: None, worst_point: None, points: pts.len(), seed: plan.seed };
    for env in pts {
        let t: Vec<f64> = names.iter().map(|n| env.get(n).copied().unwrap_or(0.0)).collect();
        let numeric = sklyanin_bracket(chart, g, r, params, &t)?;
        let closed = split.eval(&env)?;
        let (dev, pair) = table_deviation(&numeric, &closed)?;
        if dev > plan.tol || !dev.is_finite() {
            out.equal = false;
        }
        if dev > out.max_deviation || !dev.is_finite() {
            out.max_deviation = dev;
            out.worst_pair = pair;
            out.worst_point = Some(env);
        }
    }
    Ok(out)
}

/// Name → value view of a coordinate vector.
pub fn named(names: &[String], values: &[f64]) -> BTreeMap<String, f64> {
    names.iter().cloned().zip(values.iter().copied()).collect()
}
