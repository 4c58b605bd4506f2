//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use ncphs::catalog::{flat_limit_check, flat_limit_map_check, poisson_jacobi_check, Catalog, Classification};
use ncphs::chart::{
    ambient_constraint_check, ambient_map, ambient_pushforward, chart_spec, match_catalog, sklyanin_bracket,
    table_deviation, Chart, SplitTable, AMBIENT_NAMES,
};
use ncphs::expr::{Env, Expr};
use ncphs::lie::{
    annihilator_first_order, cocommutator_from_r, coisotropy_check, mcybe_check, subgroup_check, subgroup_screen,
    LieData, YangBaxter,
};
use ncphs::nc::{
    casimir_centrality, darboux_verify, expr_to_words, jacobi_nc, phase_jacobi, DeformedPhaseSpace, NCAlgebra, NCPoly,
    RewriteOrder,
};
use ncphs::scalar::{ParamPoint, ParamPoly};
use ncphs::suite::{run_suite, SuiteConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn classification(lie: &LieData) -> Outcome {
    let start = Instant::now();
    for (name, want) in [
        ("r0", YangBaxter::Quasitriangular),
        ("r_Lambda", YangBaxter::Quasitriangular),
        ("r_I", YangBaxter::Triangular),
        ("r_II", YangBaxter::Triangular),
        ("r_III", YangBaxter::Triangular),
        ("worldline-lightlike", YangBaxter::Triangular),
    ] {
        let (g, r) = lie.with_algebra(name).map_err(e)?;
        let got = mcybe_check(g, r).map_err(e)?;
        ensure(got == want, || format!("{name}: {got}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("6 r-matrices classified exactly in {} ms", t.as_millis()))
}

fn coisotropy(lie: &LieData) -> Outcome {
    for name in ["r0", "r_Lambda", "r_I", "r_II", "r_III"] {
        let (g, r) = lie.with_algebra(name).map_err(e)?;
        let g = g.with_subalgebra("lorentz").map_err(e)?;
        let d = cocommutator_from_r(&g, r).map_err(e)?;
        let co = coisotropy_check(&g, &d).map_err(e)?;
        ensure(co.is_pass(), || format!("{name} not coisotropic: {co}"))?;
        let sub = subgroup_check(&g, &d).map_err(e)?;
        let want_sub = !matches!(name, "r0" | "r_Lambda");
        ensure(sub.is_pass() == want_sub, || format!("{name}: subgroup check gave {sub}"))?;
    }
    let (g, _) = lie.with_algebra("r_I").map_err(e)?;
    let screen = subgroup_screen(&g.with_subalgebra("lorentz").map_err(e)?).map_err(e)?;
    for name in ["r_I", "r_II", "r_III"] {
        ensure(screen.contains(&lie.r_matrix(name).map_err(e)?.r).map_err(e)?, || format!("{name} outside the screen"))?;
    }
    Ok("r0, r_Lambda coisotropic only; r_I, r_II, r_III sub-bialgebras and in the screened space".into())
}

fn first_order(lie: &LieData, cat: &Catalog) -> Outcome {
    let (g, r) = lie.with_algebra("r0").map_err(e)?;
    let g = g.with_subalgebra("lorentz").map_err(e)?;
    let m = annihilator_first_order(&g, &cocommutator_from_r(&g, r).map_err(e)?).map_err(e)?;
    let entry = cat.lookup("kappa-minkowski").map_err(e)?;
    ensure(m.basis() == entry.coords(), || format!("basis {:?}", m.basis()))?;
    let n = m.dim();
    for i in 0..n {
        for j in i + 1..n {
            let mut got = NCPoly::zero();
            for (k, c) in m.structure(i, j) {
                got = got.add(&NCPoly::term(vec![*k], c.clone()));
            }
            let want = expr_to_words(entry.table.get(i, j), m.basis()).map_err(e)?;
            ensure(got == want, || format!("[{}, {}] = {}", m.basis()[i], m.basis()[j], got.format(m.basis())))?;
        }
    }
    Ok("first-order space equals the kappa-Minkowski table exactly".into())
}

fn sklyanin(lie: &LieData, cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let base = ParamPoint::from_eta(0.5, 1.0).with_z(0.7, -0.4);
    let cases = [
        ("r0", "poincare-spacetime", "kappa-minkowski", 0.0),
        ("r_Lambda", "adS-spacetime", "kappa-ads-phs", -0.25),
        ("r_Lambda", "adS-spacetime", "kappa-ads-phs", 0.25),
        ("worldline-timelike", "poincare-worldlines", "worldlines-timelike", 0.0),
        ("worldline-spacelike", "poincare-worldlines", "worldlines-spacelike", 0.0),
        ("worldline-lightlike", "poincare-worldlines", "worldlines-lightlike", 0.0),
    ];
    for (k, (r, chart, table, lambda)) in cases.into_iter().enumerate() {
        let (g, rr) = lie.with_algebra(r).map_err(e)?;
        let p = ParamPoint { lambda, ..base };
        let chart = Chart::new(chart_spec(chart, None).map_err(e)?, lambda).map_err(e)?;
        let entry = cat.lookup(table).map_err(e)?;
        let plan = entry.plan(&p, 40 + k as u64).map_err(e)?.points(100).tol(1e-8);
        let m = match_catalog(&chart, g, rr, &p, entry, &plan).map_err(e)?;
        ensure(m.equal && m.points == 100, || format!("{table} at Lambda = {lambda}: {:.3e} at {:?}", m.max_deviation, m.worst_pair))?;
        worst = worst.max(m.max_deviation);
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("6 tables x 100 points, max deviation {worst:.2e}, {} ms", t.as_millis()))
}

fn ambient(lie: &LieData, cat: &Catalog) -> Outcome {
    let map = cat.map("ambient").map_err(e)?;
    let mut worst = [0.0f64; 4];
    let quad = cat.lookup("kappa-ads-quadratic").map_err(e)?.table.linear_part("kinv");
    let sum = |names: &[&str]| -> Result<SplitTable, String> {
        let mut t = cat.lookup(names[0]).map_err(e)?.table.clone();
        for n in &names[1..] {
            t = t.plus(&cat.lookup(n).map_err(e)?.table).map_err(e)?;
        }
        SplitTable::new(&t).map_err(e)
    };
    let families = [
        ("r_I", sum(&["typeI-z-cartesian", "typeI-zprime-cartesian"])?),
        ("r_II", sum(&["typeII"])?),
        ("r_III", sum(&["typeIII-cartesian"])?),
        ("r_Lambda", SplitTable::new(&quad).map_err(e)?),
    ];
    for lambda in [-0.25, 0.25] {
        let p = ParamPoint { lambda, ..ParamPoint::from_eta(0.0, 1.0).with_z(0.7, -0.4) };
        let chart = Chart::builtin("adS-spacetime", lambda).map_err(e)?;
        for env in map.plan(&p, 5).map_err(e)?.points(100).sample(&[]).map_err(e)? {
            let x = [env["x0"], env["x1"], env["x2"], env["x3"]];
            let s = ambient_map(&x, lambda).map_err(e)?;
            worst[0] = worst[0].max(ambient_constraint_check(&s, lambda));
            let mut senv: Env = AMBIENT_NAMES.iter().map(|n| n.to_string()).zip(s).collect();
            for (k, v) in [("kinv", p.kinv), ("z", p.z), ("zp", p.zp), ("Lambda", lambda)] {
                senv.insert(k.into(), v);
            }
            for (r, table) in &families {
                let (g, rr) = lie.with_algebra(r).map_err(e)?;
                let num = ambient_pushforward(&sklyanin_bracket(&chart, g, rr, &p, &x).map_err(e)?, &x, lambda).map_err(e)?;
                let (dev, _) = table_deviation(&num, &table.eval(&senv).map_err(e)?).map_err(e)?;
                if *r == "r_Lambda" {
                    worst[1] = worst[1].max(dev);
                } else {
                    worst[3] = worst[3].max(dev);
                    for b in &AMBIENT_NAMES[1..] {
                        let v = num.lookup("s4", b).map_err(e)?;
                        worst[2] = worst[2].max(v.even.abs()).max(v.odd.abs());
                    }
                }
            }
        }
    }
    ensure(worst[0] <= 1e-12, || format!("constraint residual {:.3e}", worst[0]))?;
    ensure(worst[1] <= 1e-8, || format!("quadratic algebra deviation {:.3e}", worst[1]))?;
    ensure(worst[2] <= 1e-9, || format!("s4 bracket {:.3e}", worst[2]))?;
    ensure(worst[3] <= 1e-8, || format!("Lorentz family deviation {:.3e}", worst[3]))?;
    Ok(format!(
        "constraint {:.1e}, quadratic {:.1e}, s4 central {:.1e}, Lorentz families {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn quantum(cat: &Catalog) -> Outcome {
    for name in ["kappa-ads-quadratic", "typeI-z", "typeI-zprime", "typeII", "typeIII"] {
        let alg = NCAlgebra::from_catalog(cat.lookup(name).map_err(e)?).map_err(e)?;
        let v = jacobi_nc(&alg).map_err(e)?;
        ensure(v.is_pass(), || format!("{name}: {v}"))?;
    }
    let alg = NCAlgebra::from_catalog(cat.lookup("kappa-ads-quadratic").map_err(e)?).map_err(e)?;
    let elem = |n: &str| -> Result<NCPoly, String> {
        alg.reduce(&expr_to_words(&cat.element(n).map_err(e)?.expr, alg.gens()).map_err(e)?).map_err(e)
    };
    let v = casimir_centrality(&alg, &elem("casimir")?).map_err(e)?;
    ensure(v.is_pass(), || format!("Casimir: {v}"))?;
    let w = casimir_centrality(&alg, &elem("classical-pseudosphere")?).map_err(e)?;
    let witness = w.witness().map(str::to_string);
    ensure(witness.is_some(), || "classical pseudosphere reported central".into())?;
    Ok(format!("5 algebras satisfy Jacobi; Casimir central; classical element not: {}", witness.unwrap()))
}

fn worldlines(cat: &Catalog) -> Outcome {
    let names = ["timelike", "spacelike", "lightlike"];
    let p = ParamPoint::from_eta(0.0, 0.8);
    let mut worst: f64 = 0.0;
    for (k, n) in names.iter().enumerate() {
        let entry = cat.lookup(&format!("worldlines-{n}")).map_err(e)?;
        let plan = entry.plan(&p, 70 + k as u64).map_err(e)?.points(100).tol(1e-9);
        let d = DeformedPhaseSpace::from_catalog(entry, &plan).map_err(e)?;
        let j = phase_jacobi(&d, &plan).map_err(e)?;
        ensure(j.equal, || format!("{n} Jacobi: {:?}", j.worst))?;
        let map = cat.map(&format!("darboux-{n}")).map_err(e)?;
        let c = darboux_verify(&d, map, &Expr::var("kinv"), &plan).map_err(e)?;
        ensure(c.equal, || format!("{n} Darboux: {:?}", c.worst))?;
        worst = worst.max(j.max_deviation).max(c.max_deviation);
    }
    let (t, s, l) = (
        cat.lookup("worldlines-timelike").map_err(e)?,
        cat.lookup("worldlines-spacelike").map_err(e)?,
        cat.lookup("worldlines-lightlike").map_err(e)?,
    );
    let sum = t.table.plus(&s.table).map_err(e)?;
    for (a, b, x) in l.table.pairs() {
        let (u, v) = (&l.table.coords[a], &l.table.coords[b]);
        ensure(x == sum.entry(u, v).map_err(e)? || {
            let plan = l.plan(&p, 9).unwrap().points(100).tol(1e-9);
            ncphs::expr::equiv_random(x, sum.entry(u, v).unwrap(), &plan).map(|r| r.equal).unwrap_or(false)
        }, || format!("[{u}, {v}] is not the sum"))?;
    }
    Ok(format!("Jacobi and Darboux for 3 worldline spaces at 100 points, max deviation {worst:.1e}; light-like = sum"))
}

fn limits(cat: &Catalog) -> Outcome {
    let c = flat_limit_check(&cat.lookup("kappa-ads-phs").map_err(e)?.table, &cat.lookup("kappa-minkowski").map_err(e)?.table, 1.0, 3)
        .map_err(e)?;
    ensure(c.equal, || format!("kappa-(A)dS: {:.3e} {:?}", c.max_deviation, c.worst))?;
    let m = flat_limit_map_check(cat.map("ambient").map_err(e)?, cat.map("ambient-flat").map_err(e)?, 3).map_err(e)?;
    ensure(m.equal, || format!("ambient: {:.3e} {:?}", m.max_deviation, m.worst))?;
    Ok(format!("bracket {:.1e}, ambient map {:.1e} at eta = 1e-6", c.max_deviation, m.max_deviation))
}

fn properties(cat: &Catalog) -> Outcome {
    let quantum = ["kappa-minkowski", "kappa-ads-quadratic", "typeI-z", "typeI-zprime", "typeII", "typeIII"];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pairs = 0;
    for name in quantum {
        let alg = NCAlgebra::from_catalog(cat.lookup(name).map_err(e)?).map_err(e)?;
        let n = alg.gens().len();
        let word = |rng: &mut ChaCha8Rng, max: usize| -> Vec<usize> {
            let len = rng.gen_range(0..=max);
            (0..len).map(|_| rng.gen_range(0..n)).collect()
        };
        let count = if name == "kappa-ads-quadratic" { 500 } else { 100 };
        for _ in 0..count {
            let w = word(&mut rng, 5);
            let left = alg.normal_form_with(&w, RewriteOrder::Leftmost).map_err(e)?;
            ensure(left.is_ordered() && alg.reduce(&left).map_err(e)? == left, || format!("{name} {w:?} not idempotent"))?;
            let other = alg.normal_form_with(&w, RewriteOrder::Random(rng.gen())).map_err(e)?;
            ensure(other == left, || format!("{name} {w:?} not confluent"))?;
            pairs += 1;
        }
        let max = if name == "kappa-ads-quadratic" { 2 } else { 3 };
        for _ in 0..30 {
            let mut t = || NCPoly::term(word(&mut rng, max), ParamPoly::one());
            let (x, y, z) = (t(), t(), t());
            let xy = alg.commutator(&x, &y).map_err(e)?;
            let lhs = alg.commutator(&x, &alg.mul(&y, &z).map_err(e)?).map_err(e)?;
            let rhs = alg.mul(&xy, &z).map_err(e)?.add(&alg.mul(&y, &alg.commutator(&x, &z).map_err(e)?).map_err(e)?);
            ensure(lhs == rhs, || format!("{name}: Leibniz fails"))?;
            let yx = alg.commutator(&y, &x).map_err(e)?;
            ensure(xy.add(&yx).is_zero(), || format!("{name}: antisymmetry fails"))?;
        }
    }
    let mut worst: f64 = 0.0;
    let mut tables = 0;
    let p = ParamPoint::from_eta(0.5, 1.0).with_z(0.7, -0.4);
    for entry in cat.entries().filter(|x| x.classification == Classification::Poisson) {
        let plan = entry.plan(&p, 21).map_err(e)?.points(100).tol(1e-8);
        let r = poisson_jacobi_check(entry, &plan).map_err(e)?;
        ensure(r.holds, || format!("{}: {:?}", entry.name, r.worst_triple))?;
        worst = worst.max(r.max_residual);
        tables += 1;
    }
    Ok(format!(
        "{pairs} confluence word pairs, Leibniz and antisymmetry on 6 algebras; Poisson-Jacobi on {tables} tables, max {worst:.1e}"
    ))
}

fn suites_agree() -> Outcome {
    for s in ["bialgebra-classification", "kappa-ads-spacetime", "worldlines"] {
        let r = run_suite(&SuiteConfig::new(s)).map_err(e)?;
        ensure(r.exit_code() == 0, || format!("{s}: {:?}", r.summary))?;
    }
    Ok("classification, kappa-ads-spacetime and worldlines suites exit 0".into())
}

fn main() {
    let lie = LieData::builtin().expect("lie data");
    let cat = Catalog::builtin().expect("catalog");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 Yang-Baxter classification", Box::new(|| classification(&lie))),
        ("2 coisotropy and sub-bialgebras", Box::new(|| coisotropy(&lie))),
        ("3 first-order kappa-Minkowski", Box::new(|| first_order(&lie, &cat))),
        ("4 Sklyanin bracket vs closed forms", Box::new(|| sklyanin(&lie, &cat))),
        ("5 ambient pipeline", Box::new(|| ambient(&lie, &cat))),
        ("6 quantum algebras", Box::new(|| quantum(&cat))),
        ("7 worldline quantum spaces", Box::new(|| worldlines(&cat))),
        ("8 flat limits", Box::new(|| limits(&cat))),
        ("9 property suites", Box::new(|| properties(&cat))),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        match f() {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    match suites_agree() {
        Ok(msg) => println!("PASS suites: {msg}"),
        Err(msg) => {
            failed += 1;
            println!("FAIL suites: {msg}");
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
