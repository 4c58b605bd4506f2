use serde::{Deserialize, Serialize};

use super::{param_env, BracketTable, CatalogEntry, CoordinateMap};
use crate::error::{Error, Result};
use crate::expr::{Env, Expr, SamplePlan};
use crate::scalar::ParamPoint;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiReport {
    pub holds: bool,
    /// max |J| / (1 + Σ|terms|) over triples and points.
    pub max_residual: f64,
    pub worst_triple: Option<[String; 3]>,
    pub worst_point: Option<Env>,
    pub points: usize,
    pub seed: u64,
}

impl JacobiReport {
    pub fn verdict(&self) -> Verdict {
        match (&self.worst_triple, self.holds) {
            (_, true) => Verdict::Pass,
            (Some([a, b, c]), false) => {
                Verdict::fail(format!("Jacobiator of ({a}, {b}, {c}) is {:.3e} (relative)", self.max_residual))
            }
            (None, false) => Verdict::fail("Jacobiator does not vanish"),
        }
    }
}

/// Entries and their derivatives, both split into η-even and η-odd parts.
struct SplitTable {
    vals: [BracketTable; 2],
    // derivs[part][l] = ∂_l of the table
    derivs: [Vec<BracketTable>; 2],
}

impl SplitTable {
    fn new(t: &BracketTable) -> Result<SplitTable> {
        let (even, odd) = if t.pairs().any(|(_, _, e)| e.depends_on("eta")) {
            t.eta_split()?
        } else {
            (t.clone(), BracketTable::zero(t.coords.clone()))
        };
        let d = |p: &BracketTable| -> Vec<BracketTable> {
            p.coords.iter().map(|c| p.map_entries(|e| e.diff(c))).collect()
        };
        Ok(SplitTable { derivs: [d(&even), d(&odd)], vals: [even, odd] })
    }
}

/// Σ_cyclic {a,{b,c}} for a table read as a Poisson bracket, evaluated with
/// exact derivatives of the entries. Tables that depend on η are checked
/// through their η-even and η-odd parts so the test is valid for every sign
/// of Λ; plain products in quantum tables are read as commuting.
pub fn poisson_jacobi_check(entry: &CatalogEntry, plan: &SamplePlan) -> Result<JacobiReport> {
    let t = &entry.table;
    let n = t.dim();
    let split = SplitTable::new(t)?;
    let mut guards = entry.guards()?;
    for (_, _, e) in t.pairs() {
        for g in e.denominators() {
            if !guards.contains(&g) {
                guards.push(g);
            }
        }
    }
    for (_, _, e) in split.vals[0].pairs().chain(split.vals[1].pairs()) {
        if let Some(v) = e.vars().into_iter().find(|v| !plan.assigns(v)) {
            return Err(Error::UnassignedVariable(v));
        }
    }
    let pts = plan.sample(&guards)?;
    let mut report = JacobiReport {
        holds: true,
        max_residual: 0.0,
        worst_triple: None,
        worst_point: None,
        points: pts.len(),
        seed: plan.seed,
    };
    for env in &pts {
        let lambda = env.get("Lambda").copied().unwrap_or(0.0);
        let v = [split.vals[0].eval(env)?, split.vals[1].eval(env)?];
        let mut dv = [Vec::with_capacity(n), Vec::with_capacity(n)];
        for p in 0..2 {
            for l in 0..n {
                dv[p].push(split.derivs[p][l].eval(env)?);
            }
        }
        // J(A,B)_{ijk} = Σ_cyc Σ_l A_il ∂_l B_jk
        let jac = |a: usize, b: usize, i: usize, j: usize, k: usize, mag: &mut f64| -> f64 {
            let mut s = 0.0;
            for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                for l in 0..n {
                    let term = v[a][x][l] * dv[b][l][y][z];
                    *mag += term.abs();
                    s += term;
                }
            }
            s
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut mag = 0.0;
                    let even = jac(0, 0, i, j, k, &mut mag) - lambda * jac(1, 1, i, j, k, &mut mag);
                    let odd = jac(0, 1, i, j, k, &mut mag) + jac(1, 0, i, j, k, &mut mag);
                    let resid = even.abs().max(odd.abs());
                    let scale = 1.0 + mag;
                    if resid > (plan.tol * scale).max(plan.abs_floor) || !resid.is_finite() {
                        report.holds = false;
                    }
                    let rel = resid / scale;
                    if rel > report.max_residual || !rel.is_finite() {
                        report.max_residual = rel;
                        report.worst_triple = Some([t.coords[i].clone(), t.coords[j].clone(), t.coords[k].clone()]);
                        report.worst_point = Some(env.clone());
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub equal: bool,
    pub max_deviation: f64,
    /// Label of the entry with the largest deviation.
    pub worst: Option<String>,
    pub worst_point: Option<Env>,
    pub points: usize,
    pub seed: u64,
}

impl Comparison {
    pub fn verdict(&self) -> Verdict {
        if self.equal {
            Verdict::Pass
        } else {
            Verdict::fail(format!(
                "{} differs, max relative deviation {:.3e}",
                self.worst.as_deref().unwrap_or("entry"),
                self.max_deviation
            ))
        }
    }
}

/// Pointwise comparison of labelled expression pairs on one shared set of
/// sample points (so the report is about a single draw, not one per pair).
pub fn compare_exprs(pairs: &[(String, Expr, Expr)], plan: &SamplePlan, extra_guards: &[Expr]) -> Result<Comparison> {
    let mut guards = extra_guards.to_vec();
    for (_, a, b) in pairs {
        for e in [a, b] {
            if let Some(v) = e.vars().into_iter().find(|v| !plan.assigns(v)) {
                return Err(Error::UnassignedVariable(v));
            }
            for g in e.denominators() {
                if !guards.contains(&g) {
                    guards.push(g);
                }
            }
        }
    }
    let pts = plan.sample(&guards)?;
    let mut out =
        Comparison { equal: true, max_deviation: 0.0, worst: None, worst_point: None, points: pts.len(), seed: plan.seed };
    for env in &pts {
        for (label, a, b) in pairs {
            let (va, vb) = (a.eval(env)?, b.eval(env)?);
            let diff = (va - vb).abs();
            let scale = 1.0 + va.abs().max(vb.abs());
            if diff > (plan.tol * scale).max(plan.abs_floor) || !diff.is_finite() {
                out.equal = false;
            }
            let dev = diff / scale;
            if dev > out.max_deviation || !dev.is_finite() {
                out.max_deviation = dev;
                out.worst = Some(label.clone());
                out.worst_point = Some(env.clone());
            }
        }
    }
    Ok(out)
}

fn table_pairs(a: &BracketTable, b: &BracketTable) -> Result<Vec<(String, Expr, Expr)>> {
    let mut out = Vec::new();
    for (i, j, e) in b.pairs() {
        let (x, y) = (&b.coords[i], &b.coords[j]);
        out.push((format!("{{{x}, {y}}}"), a.entry(x, y)?.clone(), e.clone()));
    }
    Ok(out)
}

pub const FLAT_ETA: f64 = 1e-6;
pub const FLAT_TOL: f64 = 1e-4;

/// Curved table at η = 1e-6 against the flat one, pairwise over the flat
/// table's coordinates, within 1e-4.
pub fn flat_limit_check(curved: &BracketTable, flat: &BracketTable, kinv: f64, seed: u64) -> Result<Comparison> {
    let mut plan = SamplePlan::new(seed).coords(&flat.coords).tol(FLAT_TOL);
    plan.fixed = param_env(&ParamPoint::from_eta(FLAT_ETA, kinv));
    compare_exprs(&table_pairs(curved, flat)?, &plan, &[])
}

/// Same test for coordinate maps with matching output names.
pub fn flat_limit_map_check(curved: &CoordinateMap, flat: &CoordinateMap, seed: u64) -> Result<Comparison> {
    let mut plan = SamplePlan::new(seed).coords(&flat.inputs).tol(FLAT_TOL);
    plan.fixed = param_env(&ParamPoint::from_eta(FLAT_ETA, 0.0));
    let pairs = flat
        .outputs
        .iter()
        .map(|(n, e)| Ok((n.clone(), curved.output(n)?.clone(), e.clone())))
        .collect::<Result<Vec<_>>>()?;
    compare_exprs(&pairs, &plan, &[])
}

/// Entrywise sum of the two subfamily tables against the full table.
pub fn superposition_check(
    z: &CatalogEntry,
    zp: &CatalogEntry,
    full: &CatalogEntry,
    params: &ParamPoint,
    seed: u64,
) -> Result<Comparison> {
    let sum = z.table.plus(&zp.table)?;
    let plan = full.plan(params, seed)?;
    compare_exprs(&table_pairs(&sum, &full.table)?, &plan, &[])
}

/// Bracket of the map's outputs induced by `table` on its inputs:
/// {f, g} = Σ ∂_a f ∂_b g {u_a, u_b}. Entries are written in the inputs.
pub fn pushforward(table: &BracketTable, map: &CoordinateMap) -> Result<BracketTable> {
    if map.inputs != table.coords {
        let mut a = map.inputs.clone();
        let mut b = table.coords.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::InvalidConfig(format!("map `{}` inputs do not match the table coordinates", map.name)));
        }
    }
    let grads: Vec<Vec<Expr>> =
        map.outputs.iter().map(|(_, f)| table.coords.iter().map(|c| f.diff(c)).collect()).collect();
    let mut out = BracketTable::zero(map.output_names());
    let n = table.dim();
    for p in 0..grads.len() {
        for q in p + 1..grads.len() {
            let mut terms = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if a == b || grads[p][a].is_zero() || grads[q][b].is_zero() || table.get(a, b).is_zero() {
                        continue;
                    }
                    terms.push(Expr::mul(vec![grads[p][a].clone(), grads[q][b].clone(), table.get(a, b).clone()]));
                }
            }
            out.set(p, q, Expr::add(terms))?;
        }
    }
    Ok(out)
}

/// A table stored in null-plane variables, pushed through `map` to
/// Cartesian ones, against the stored Cartesian form (pulled back through
/// the same map so both sides live on the null-plane inputs).
pub fn null_plane_check(
    null_plane: &CatalogEntry,
    cartesian: &CatalogEntry,
    map: &CoordinateMap,
    params: &ParamPoint,
    seed: u64,
) -> Result<Comparison> {
    let pushed = pushforward(&null_plane.table, map)?;
    let mut pairs = Vec::new();
    for (i, j, e) in cartesian.table.pairs() {
        let (x, y) = (&cartesian.table.coords[i], &cartesian.table.coords[j]);
        pairs.push((format!("{{{x}, {y}}}"), pushed.entry(x, y)?.clone(), map.compose(e)));
    }
    let plan = null_plane.plan(params, seed)?;
    compare_exprs(&pairs, &plan, &[])
}
