//! The operations a suite check can name, and how each one is run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    compare_exprs, flat_limit_check, flat_limit_map_check, null_plane_check, poisson_jacobi_check, superposition_check,
    Catalog, Comparison, FLAT_TOL,
};
use crate::chart::{
    ambient_constraint_check, ambient_map, ambient_pushforward, match_catalog, sklyanin_bracket, table_deviation, Chart,
    ChartSpec, SplitTable, AMBIENT_NAMES,
};
use crate::error::{Error, Result};
use crate::expr::Env;
use crate::lie::{
    annihilator_first_order, cocommutator_from_r, cocycle_check, coisotropy_check, jacobi_check, mcybe_check,
    subgroup_check, subgroup_screen, LieData, YangBaxter,
};
use crate::nc::{
    casimir_centrality, darboux_verify, expr_to_words, jacobi_nc, phase_jacobi, semiclassical_compare,
    DeformedPhaseSpace, NCAlgebra, NCPoly, RewriteOrder,
};
use crate::scalar::{Param, ParamPoint, ParamPoly};
use crate::verdict::Verdict;

use super::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YbKind {
    Triangular,
    Quasitriangular,
}

fn yes() -> bool {
    true
}

fn default_hbar() -> String {
    "kinv".into()
}

fn default_max_len() -> usize {
    5
}

/// One named operation with its arguments, as written in a suite file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Op {
    LieJacobi { algebra: String },
    Mcybe { r: String, expect: YbKind },
    Cocycle { r: String },
    Coisotropy { r: String, subalgebra: String, #[serde(default = "yes")] expect: bool },
    Subgroup { r: String, subalgebra: String, #[serde(default = "yes")] expect: bool },
    Screen { r: String, subalgebra: String },
    FirstOrder { r: String, subalgebra: String, table: String },
    Sklyanin { r: String, chart: String, table: String, #[serde(default)] lambda: Option<f64> },
    NumericAntisymmetry { r: String, chart: String, table: String },
    AmbientConstraint { lambdas: Vec<f64> },
    AmbientPushforward {
        r: String,
        tables: Vec<String>,
        #[serde(default)]
        linear_in: Option<String>,
        #[serde(default)]
        lambda: Option<f64>,
    },
    AmbientCentral { r: String, coordinate: String, #[serde(default)] lambda: Option<f64> },
    PoissonJacobi { table: String },
    NcJacobi { table: String },
    Centrality { table: String, element: String, #[serde(default = "yes")] expect: bool },
    Semiclassical { table: String, poisson: String, param: String },
    PhaseJacobi { table: String },
    PhaseSum { table: String, parts: Vec<String> },
    Darboux { table: String, map: String, #[serde(default = "default_hbar")] hbar: String },
    FlatLimit { curved: String, flat: String },
    FlatLimitMap { curved: String, flat: String },
    Superposition { z: String, zp: String, full: String },
    NullPlane { table: String, cartesian: String, map: String },
    RewriteConfluence { table: String, #[serde(default = "default_max_len")] max_len: usize },
    Leibniz { table: String, #[serde(default = "default_max_len")] max_len: usize },
    CommutatorAntisymmetry { table: String, #[serde(default = "default_max_len")] max_len: usize },
}

/// Data shared by every check of a run.
pub struct Ctx {
    pub lie: LieData,
    pub catalog: Catalog,
    pub charts: Vec<ChartSpec>,
    pub params: ParamPoint,
}

/// Sampling settings resolved for one check.
#[derive(Debug, Clone, Copy)]
pub struct Sampling {
    pub points: usize,
    pub seed: u64,
    pub tol: Option<f64>,
}

impl Sampling {
    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub max_deviation: Option<f64>,
    pub witness: Option<String>,
    pub points: Option<usize>,
}

impl Outcome {
    fn exact(v: Verdict) -> Outcome {
        match v {
            Verdict::Pass => Outcome { status: Status::Pass, max_deviation: None, witness: None, points: None },
            Verdict::Fail(w) => Outcome { status: Status::Fail, max_deviation: None, witness: Some(w), points: None },
        }
    }

    /// Pass iff the underlying check gave `expect`.
    fn expecting(v: Verdict, expect: bool) -> Outcome {
        match (v, expect) {
            (v, true) => Outcome::exact(v),
            (Verdict::Fail(w), false) => Outcome { witness: Some(format!("fails as expected: {w}")), ..Outcome::exact(Verdict::Pass) },
            (Verdict::Pass, false) => Outcome::exact(Verdict::fail("expected a failure, the check passed")),
        }
    }

    fn sampled(pass: bool, dev: f64, witness: impl FnOnce() -> String, points: usize) -> Outcome {
        Outcome {
            status: if pass { Status::Pass } else { Status::Fail },
            max_deviation: dev.is_finite().then_some(dev),
            witness: (!pass).then(witness),
            points: Some(points),
        }
    }

    fn comparison(c: &Comparison) -> Outcome {
        let v = c.verdict();
        Outcome::sampled(c.equal, c.max_deviation, || v.witness().unwrap_or_default().to_string(), c.points)
    }

    pub fn skipped(why: String) -> Outcome {
        Outcome { status: Status::Skip, max_deviation: None, witness: Some(why), points: None }
    }
}

fn env_of(pairs: impl IntoIterator<Item = (String, f64)>) -> Env {
    pairs.into_iter().collect()
}

impl Op {
    /// Catalog, Lie-data and chart names this operation refers to.
    pub fn validate(&self, ctx: &Ctx) -> Result<()> {
        let r = |n: &str| ctx.lie.r_matrix(n).map(|_| ());
        let t = |n: &str| ctx.catalog.lookup(n).map(|_| ());
        let m = |n: &str| ctx.catalog.map(n).map(|_| ());
        let c = |n: &str| {
            ctx.charts.iter().any(|s| s.name == n).then_some(()).ok_or_else(|| Error::UnknownChart(n.to_string()))
        };
        match self {
            Op::LieJacobi { algebra } => ctx.lie.algebra(algebra).map(|_| ()),
            Op::Mcybe { r: x, .. } | Op::Cocycle { r: x } => r(x),
            Op::Coisotropy { r: x, subalgebra, .. } | Op::Subgroup { r: x, subalgebra, .. } | Op::Screen { r: x, subalgebra } => {
                let (g, _) = ctx.lie.with_algebra(x)?;
                g.with_subalgebra(subalgebra).map(|_| ())
            }
            Op::FirstOrder { r: x, subalgebra, table } => {
                let (g, _) = ctx.lie.with_algebra(x)?;
                g.with_subalgebra(subalgebra)?;
                t(table)
            }
            Op::Sklyanin { r: x, chart, table, .. } | Op::NumericAntisymmetry { r: x, chart, table } => {
                r(x)?;
                c(chart)?;
                t(table)
            }
            Op::AmbientConstraint { .. } => m("ambient"),
            Op::AmbientPushforward { r: x, tables, .. } => {
                r(x)?;
                c("adS-spacetime")?;
                tables.iter().try_for_each(|n| t(n))
            }
            Op::AmbientCentral { r: x, coordinate, .. } => {
                r(x)?;
                c("adS-spacetime")?;
                AMBIENT_NAMES
                    .contains(&coordinate.as_str())
                    .then_some(())
                    .ok_or_else(|| Error::UnknownVariable(coordinate.clone()))
            }
            Op::PoissonJacobi { table }
            | Op::NcJacobi { table }
            | Op::PhaseJacobi { table }
            | Op::RewriteConfluence { table, .. }
            | Op::Leibniz { table, .. }
            | Op::CommutatorAntisymmetry { table, .. } => t(table),
            Op::Centrality { table, element, .. } => {
                t(table)?;
                ctx.catalog.element(element).map(|_| ())
            }
            Op::Semiclassical { table, poisson, param } => {
                t(table)?;
                t(poisson)?;
                Param::from_name(param).map(|_| ()).ok_or_else(|| Error::UnknownVariable(param.clone()))
            }
            Op::PhaseSum { table, parts } => {
                t(table)?;
                parts.iter().try_for_each(|n| t(n))
            }
            Op::Darboux { table, map, .. } => {
                t(table)?;
                m(map)
            }
            Op::FlatLimit { curved, flat } => {
                t(curved)?;
                t(flat)
            }
            Op::FlatLimitMap { curved, flat } => {
                m(curved)?;
                m(flat)
            }
            Op::Superposition { z, zp, full } => [z, zp, full].iter().try_for_each(|n| t(n)),
            Op::NullPlane { table, cartesian, map } => {
                t(table)?;
                t(cartesian)?;
                m(map)
            }
        }
    }

    pub fn run(&self, ctx: &Ctx, s: Sampling) -> Result<Outcome> {
        let cat = &ctx.catalog;
        let params = ctx.params;
        let plan_of = |table: &str, p: &ParamPoint, default_tol: f64| -> Result<_> {
            Ok(cat.lookup(table)?.plan(p, s.seed)?.points(s.points).tol(s.tol_or(default_tol)))
        };
        Ok(match self {
            Op::LieJacobi { algebra } => Outcome::exact(jacobi_check(ctx.lie.algebra(algebra)?)),
            Op::Mcybe { r, expect } => {
                let (g, rr) = ctx.lie.with_algebra(r)?;
                let got = mcybe_check(g, rr)?;
                let ok = matches!(
                    (&got, expect),
                    (YangBaxter::Triangular, YbKind::Triangular) | (YangBaxter::Quasitriangular, YbKind::Quasitriangular)
                );
                Outcome::exact(if ok { Verdict::Pass } else { Verdict::fail(format!("got {got}")) })
            }
            Op::Cocycle { r } => {
                let (g, rr) = ctx.lie.with_algebra(r)?;
                Outcome::exact(cocycle_check(g, &cocommutator_from_r(g, rr)?)?)
            }
            Op::Coisotropy { r, subalgebra, expect } | Op::Subgroup { r, subalgebra, expect } => {
                let (g, rr) = ctx.lie.with_algebra(r)?;
                let g = g.with_subalgebra(subalgebra)?;
                let d = cocommutator_from_r(&g, rr)?;
                let v = if matches!(self, Op::Coisotropy { .. }) { coisotropy_check(&g, &d)? } else { subgroup_check(&g, &d)? };
                Outcome::expecting(v, *expect)
            }
            Op::Screen { r, subalgebra } => {
                let (g, rr) = ctx.lie.with_algebra(r)?;
                let screen = subgroup_screen(&g.with_subalgebra(subalgebra)?)?;
                Outcome::exact(if screen.contains(rr)? {
                    Verdict::Pass
                } else {
                    Verdict::fail(format!("{r} is outside the {}-dimensional screened space", screen.nullity))
                })
            }
            Op::FirstOrder { r, subalgebra, table } => first_order(ctx, r, subalgebra, table)?,
            Op::Sklyanin { r, chart, table, lambda } => {
                let (g, rr) = ctx.lie.with_algebra(r)?;
                let spec = chart_spec(ctx, chart)?;
                let lam = spec.lambda.or(*lambda).unwrap_or(params.lambda);
                let p = ParamPoint { lambda: lam, ..params };
                let chart = Chart::new(spec, lam)?;
                let m = match_catalog(&chart, g, rr, &p, cat.lookup(table)?, &plan_of(table, &p, 1e-8)?)?;
                let witness = || format!("{:?} deviates by {:.3e} at {:?}", m.worst_pair, m.max_deviation, m.worst_point);
                Outcome::sampled(m.equal, m.max_deviation, witness, m.points)
            }
            Op::NumericAntisymmetry { r, chart, table } => {
                let (g, rr) = ctx.lie.with_algebra(r)?;
                let spec = chart_spec(ctx, chart)?;
                let lam = spec.lambda.unwrap_or(params.lambda);
                let p = ParamPoint { lambda: lam, ..params };
                let chart = Chart::new(spec, lam)?;
                let entry = cat.lookup(table)?;
                let pts = plan_of(table, &p, 0.0)?.sample(&entry.guards()?)?;
                let names = chart.translation_names();
                let mut bad = None;
                for env in &pts {
                    let x: Vec<f64> = names.iter().map(|n| env.get(n).copied().unwrap_or(0.0)).collect();
                    if !sklyanin_bracket(&chart, g, rr, &p, &x)?.is_antisymmetric() {
                        bad = Some(x);
                        break;
                    }
                }
                Outcome::sampled(bad.is_none(), 0.0, || format!("not antisymmetric at {bad:?}"), pts.len())
            }
            Op::AmbientConstraint { lambdas } => {
                let pts = cat.map("ambient")?.plan(&params, s.seed)?.points(s.points).sample(&[])?;
                let tol = s.tol_or(1e-12);
                let mut worst: (f64, Option<String>) = (0.0, None);
                for lam in lambdas {
                    for env in &pts {
                        let x = [env["x0"], env["x1"], env["x2"], env["x3"]];
                        let dev = ambient_constraint_check(&ambient_map(&x, *lam)?, *lam);
                        if dev > worst.0 || !dev.is_finite() {
                            worst = (dev, Some(format!("Lambda = {lam}, x = {x:?}")));
                        }
                    }
                }
                let w = worst.1.clone();
                Outcome::sampled(worst.0 <= tol, worst.0, || format!("residual {:.3e} at {}", worst.0, w.unwrap_or_default()), pts.len() * lambdas.len())
            }
            Op::AmbientPushforward { r, tables, linear_in, lambda } => {
                let mut table = cat.lookup(&tables[0])?.table.clone();
                for t in &tables[1..] {
                    table = table.plus(&cat.lookup(t)?.table)?;
                }
                if let Some(v) = linear_in {
                    table = table.linear_part(v);
                }
                ambient_sweep(ctx, s, r, *lambda, s.tol_or(1e-8), |num, senv| {
                    table_deviation(num, &SplitTable::new(&table)?.eval(senv)?)
                })?
            }
            Op::AmbientCentral { r, coordinate, lambda } => {
                ambient_sweep(ctx, s, r, *lambda, s.tol_or(1e-9), |num, _| {
                    let mut dev: Deviation = (0.0, None);
                    for b in AMBIENT_NAMES.iter().filter(|b| **b != coordinate.as_str()) {
                        let v = num.lookup(coordinate, b)?;
                        let d = v.even.abs().max(v.odd.abs());
                        if d > dev.0 || !d.is_finite() {
                            dev = (d, Some((coordinate.clone(), b.to_string())));
                        }
                    }
                    Ok(dev)
                })?
            }
            Op::PoissonJacobi { table } => {
                let rep = poisson_jacobi_check(cat.lookup(table)?, &plan_of(table, &params, 1e-8)?)?;
                let v = rep.verdict();
                Outcome::sampled(rep.holds, rep.max_residual, || v.witness().unwrap_or_default().to_string(), rep.points)
            }
            Op::NcJacobi { table } => Outcome::exact(jacobi_nc(&NCAlgebra::from_catalog(cat.lookup(table)?)?)?),
            Op::Centrality { table, element, expect } => {
                let alg = NCAlgebra::from_catalog(cat.lookup(table)?)?;
                let c = alg.reduce(&expr_to_words(&cat.element(element)?.expr, alg.gens())?)?;
                Outcome::expecting(casimir_centrality(&alg, &c)?, *expect)
            }
            Op::Semiclassical { table, poisson, param } => {
                let alg = NCAlgebra::from_catalog(cat.lookup(table)?)?;
                let param = Param::from_name(param).ok_or_else(|| Error::UnknownVariable(param.clone()))?;
                Outcome::comparison(&semiclassical_compare(&alg, cat.lookup(poisson)?, param, &plan_of(poisson, &params, 1e-9)?)?)
            }
            Op::PhaseJacobi { table } => {
                let plan = plan_of(table, &params, 1e-9)?;
                let d = DeformedPhaseSpace::from_catalog(cat.lookup(table)?, &plan)?;
                Outcome::comparison(&phase_jacobi(&d, &plan)?)
            }
            Op::PhaseSum { table, parts } => {
                let entry = cat.lookup(table)?;
                let mut sum = cat.lookup(&parts[0])?.table.clone();
                for p in &parts[1..] {
                    sum = sum.plus(&cat.lookup(p)?.table)?;
                }
                let mut pairs = Vec::new();
                for (a, b, e) in entry.table.pairs() {
                    let (x, y) = (&entry.table.coords[a], &entry.table.coords[b]);
                    pairs.push((format!("[{x}, {y}]"), e.clone(), sum.entry(x, y)?.clone()));
                }
                Outcome::comparison(&compare_exprs(&pairs, &plan_of(table, &params, 1e-9)?, &entry.guards()?)?)
            }
            Op::Darboux { table, map, hbar } => {
                let plan = plan_of(table, &params, 1e-9)?;
                let d = DeformedPhaseSpace::from_catalog(cat.lookup(table)?, &plan)?;
                let hbar = crate::expr::text::parse(hbar)?;
                Outcome::comparison(&darboux_verify(&d, cat.map(map)?, &hbar, &plan)?)
            }
            Op::FlatLimit { curved, flat } => {
                let c = flat_limit_check(&cat.lookup(curved)?.table, &cat.lookup(flat)?.table, params.kinv, s.seed)?;
                Outcome::comparison(&c)
            }
            Op::FlatLimitMap { curved, flat } => Outcome::comparison(&flat_limit_map_check(cat.map(curved)?, cat.map(flat)?, s.seed)?),
            Op::Superposition { z, zp, full } => Outcome::comparison(&superposition_check(
                cat.lookup(z)?,
                cat.lookup(zp)?,
                cat.lookup(full)?,
                &params,
                s.seed,
            )?),
            Op::NullPlane { table, cartesian, map } => {
                Outcome::comparison(&null_plane_check(cat.lookup(table)?, cat.lookup(cartesian)?, cat.map(map)?, &params, s.seed)?)
            }
            Op::RewriteConfluence { table, max_len } => {
                let alg = NCAlgebra::from_catalog(cat.lookup(table)?)?;
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
                for _ in 0..s.points {
                    let w = random_word(&mut rng, alg.gens().len(), *max_len);
                    let left = alg.normal_form_with(&w, RewriteOrder::Leftmost)?;
                    let show = |p: &NCPoly| alg.format(p);
                    if !left.is_ordered() || alg.reduce(&left)? != left {
                        return Ok(Outcome::exact(Verdict::fail(format!("normal form of {w:?} is not stable: {}", show(&left)))));
                    }
                    for order in [RewriteOrder::Rightmost, RewriteOrder::Random(rng.gen())] {
                        let other = alg.normal_form_with(&w, order)?;
                        if other != left {
                            return Ok(Outcome::exact(Verdict::fail(format!(
                                "{w:?}: leftmost gives {}, {order:?} gives {}",
                                show(&left),
                                show(&other)
                            ))));
                        }
                    }
                }
                Outcome { points: Some(s.points), ..Outcome::exact(Verdict::Pass) }
            }
            Op::Leibniz { table, max_len } | Op::CommutatorAntisymmetry { table, max_len } => {
                let alg = NCAlgebra::from_catalog(cat.lookup(table)?)?;
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
                let n = alg.gens().len();
                let leibniz = matches!(self, Op::Leibniz { .. });
                for _ in 0..s.points {
                    let mut pick = || NCPoly::term(random_word(&mut rng, n, *max_len), ParamPoly::one());
                    let (x, y, z) = (pick(), pick(), pick());
                    let xy = alg.commutator(&x, &y)?;
                    let (lhs, rhs, what) = if leibniz {
                        let lhs = alg.commutator(&x, &alg.mul(&y, &z)?)?;
                        let rhs = alg.mul(&xy, &z)?.add(&alg.mul(&y, &alg.commutator(&x, &z)?)?);
                        (lhs, rhs, "[x, yz] = [x, y]z + y[x, z]")
                    } else {
                        (xy, alg.commutator(&y, &x)?.scale(&ParamPoly::int(-1)), "[x, y] = -[y, x]")
                    };
                    if lhs != rhs {
                        let f = |p: &NCPoly| alg.format(p);
                        return Ok(Outcome::exact(Verdict::fail(format!(
                            "{what} fails for x = {}, y = {}, z = {}",
                            f(&x),
                            f(&y),
                            f(&z)
                        ))));
                    }
                }
                Outcome { points: Some(s.points), ..Outcome::exact(Verdict::Pass) }
            }
        })
    }

    /// Tolerance used when neither the run nor the check sets one.
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            Op::LieJacobi { .. }
                | Op::Mcybe { .. }
                | Op::Cocycle { .. }
                | Op::Coisotropy { .. }
                | Op::Subgroup { .. }
                | Op::Screen { .. }
                | Op::FirstOrder { .. }
                | Op::NcJacobi { .. }
                | Op::Centrality { .. }
        )
    }

    /// Flat limits run at the fixed tolerance they are defined with.
    pub fn fixed_tol(&self) -> Option<f64> {
        matches!(self, Op::FlatLimit { .. } | Op::FlatLimitMap { .. }).then_some(FLAT_TOL)
    }
}

fn chart_spec(ctx: &Ctx, name: &str) -> Result<ChartSpec> {
    ctx.charts.iter().find(|c| c.name == name).cloned().ok_or_else(|| Error::UnknownChart(name.to_string()))
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..n)).collect()
}

type Deviation = (f64, Option<(String, String)>);

/// Sample spacetime points, push the Sklyanin table of `r` to ambient
/// coordinates and score it with `score` against values in the ambient
/// variables plus parameters.
fn ambient_sweep(
    ctx: &Ctx,
    s: Sampling,
    r: &str,
    lambda: Option<f64>,
    tol: f64,
    score: impl Fn(&crate::chart::NumericBracketTable, &Env) -> Result<Deviation>,
) -> Result<Outcome> {
    let (g, rr) = ctx.lie.with_algebra(r)?;
    let lam = lambda.unwrap_or(ctx.params.lambda);
    let p = ParamPoint { lambda: lam, ..ctx.params };
    let chart = Chart::new(chart_spec(ctx, "adS-spacetime")?, lam)?;
    let pts = ctx.catalog.map("ambient")?.plan(&p, s.seed)?.points(s.points).sample(&[])?;
    let mut worst: (f64, Option<String>) = (0.0, None);
    for env in &pts {
        let x = [env["x0"], env["x1"], env["x2"], env["x3"]];
        let num = ambient_pushforward(&sklyanin_bracket(&chart, g, rr, &p, &x)?, &x, lam)?;
        let sv = ambient_map(&x, lam)?;
        let mut senv = env_of(AMBIENT_NAMES.iter().map(|n| n.to_string()).zip(sv));
        for (k, v) in [("kinv", p.kinv), ("z", p.z), ("zp", p.zp), ("Lambda", lam)] {
            senv.insert(k.into(), v);
        }
        let (dev, pair) = score(&num, &senv)?;
        if dev > worst.0 || !dev.is_finite() {
            worst = (dev, Some(format!("{pair:?} at x = {x:?}")));
        }
    }
    let w = worst.1.clone().unwrap_or_default();
    Ok(Outcome::sampled(worst.0 <= tol, worst.0, || format!("deviation {:.3e} for {w}", worst.0), pts.len()))
}

/// The first-order space from δ(r) against a linear catalog table, exactly.
fn first_order(ctx: &Ctx, r: &str, subalgebra: &str, table: &str) -> Result<Outcome> {
    let (g, rr) = ctx.lie.with_algebra(r)?;
    let g = g.with_subalgebra(subalgebra)?;
    let m = annihilator_first_order(&g, &cocommutator_from_r(&g, rr)?)?;
    let entry = ctx.catalog.lookup(table)?;
    let basis = m.basis().to_vec();
    if entry.coords() != basis.as_slice() {
        return Ok(Outcome::exact(Verdict::fail(format!("coordinates {basis:?} differ from {:?}", entry.coords()))));
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let mut got = NCPoly::zero();
            for (k, c) in m.structure(i, j) {
                got = got.add(&NCPoly::term(vec![*k], c.clone()));
            }
            let want = expr_to_words(entry.table.get(i, j), &basis)?;
            if got != want {
                return Ok(Outcome::exact(Verdict::fail(format!(
                    "[{}, {}] = {} but the table has {}",
                    basis[i],
                    basis[j],
                    got.format(&basis),
                    want.format(&basis)
                ))));
            }
        }
    }
    Ok(Outcome::exact(Verdict::Pass))
}

/// Relations of a catalog table as display lines.
pub fn relation_lines(cat: &Catalog, table: &str) -> Result<Vec<String>> {
    let e = cat.lookup(table)?;
    let (open, close) = if e.classification.is_quantum() { ("[", "]") } else { ("{", "}") };
    Ok(e.table
        .pairs()
        .map(|(a, b, x)| format!("{open}{}, {}{close} = {x}", e.table.coords[a], e.table.coords[b]))
        .collect())
}
