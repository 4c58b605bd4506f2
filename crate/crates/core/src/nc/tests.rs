use proptest::prelude::*;

use super::*;
use crate::catalog::Catalog;
use crate::expr::text::parse;
use crate::scalar::ParamPoint;

fn cat() -> Catalog {
    Catalog::builtin().unwrap()
}

fn alg(name: &str) -> NCAlgebra {
    NCAlgebra::from_catalog(cat().lookup(name).unwrap()).unwrap()
}

fn quadratic() -> NCAlgebra {
    alg("kappa-ads-quadratic")
}

const QUANTUM: [&str; 6] = ["kappa-minkowski", "kappa-ads-quadratic", "typeI-z", "typeI-zprime", "typeII", "typeIII"];

#[test]
fn kappa_minkowski_reorders_with_linear_correction() {
    let a = alg("kappa-minkowski");
    let nf = a.normal_form(&a.word(&["x1", "x0"]).unwrap()).unwrap();
    assert_eq!(nf, a.parse("x0*x1 + kinv*x1").unwrap());
    assert_eq!(a.format(&nf), "x0*x1 + (kinv)*x1");
}

#[test]
fn quadratic_algebra_reorders_spatial_pair() {
    let a = quadratic();
    let nf = a.normal_form(&a.word(&["s2", "s1"]).unwrap()).unwrap();
    let want = NCPoly::term(a.word(&["s1", "s2"]).unwrap(), ParamPoly::one())
        .add(&NCPoly::term(a.word(&["s3", "s3"]).unwrap(), ParamPoly::eta() * ParamPoly::kinv()));
    assert_eq!(nf, want);
}

fn eval_at(p: &NCPoly, eta: f64, kinv: f64) -> Vec<(Word, f64)> {
    let d = p.den().eval(eta, kinv, 0.0, 0.0);
    p.terms().map(|(w, c)| (w.clone(), c.eval(eta, kinv, 0.0, 0.0) / d)).collect()
}

#[test]
fn recurring_word_is_solved_with_a_denominator() {
    // s4 s2 s1 passes through s2 s4 s1, which returns to itself with coefficient eta^2 kinv^2
    let a = quadratic();
    let nf = a.normal_form(&a.word(&["s4", "s2", "s1"]).unwrap()).unwrap();
    assert!(nf.is_ordered() && !nf.is_polynomial());
    let x = ParamPoly::eta().pow(2) * ParamPoly::kinv().pow(2);
    assert_eq!(nf.den(), x - ParamPoly::one());
    let want = [
        (["s0", "s1", "s2"], 0.12890647557275867),
        (["s0", "s3", "s3"], 0.02707035987027932),
        (["s1", "s2", "s4"], 1.046134532900931),
        (["s3", "s3", "s4"], 0.21968825190919553),
    ];
    let got = eval_at(&nf, 0.3, 0.7);
    assert_eq!(got.len(), want.len());
    for (names, v) in want {
        let w = a.word(&names).unwrap();
        let (_, g) = got.iter().find(|(u, _)| *u == w).unwrap();
        assert!((g - v).abs() < 1e-12, "{names:?}: {g} vs {v}");
    }
}

#[test]
fn degree_four_normal_form_matches_exact_elimination() {
    let a = quadratic();
    let nf = a.normal_form(&a.word(&["s2", "s3", "s0", "s0"]).unwrap()).unwrap();
    let want: [([&str; 4], f64); 12] = [
        (["s0", "s0", "s1", "s3"], -0.22982346679484833),
        (["s0", "s0", "s3", "s2"], 1.0943974609278493),
        (["s0", "s1", "s3", "s4"], -0.6293164061856614),
        (["s0", "s3", "s2", "s4"], 2.9967447913602925),
        (["s1", "s1", "s1", "s3"], -0.01894925190919552),
        (["s1", "s1", "s3", "s2"], 0.09421387580186212),
        (["s1", "s3", "s3", "s3"], -0.0181135899),
        (["s1", "s3", "s2", "s2"], -0.03789850381839104),
        (["s1", "s3", "s4", "s4"], -0.4308079856004873),
        (["s3", "s3", "s3", "s2"], 0.08625519),
        (["s3", "s2", "s2", "s2"], 0.09023453290093106),
        (["s3", "s2", "s4", "s4"], 2.0514665980975586),
    ];
    let got = eval_at(&nf, 0.3, 0.7);
    assert_eq!(got.len(), want.len());
    for (names, v) in want {
        let w = a.word(&names).unwrap();
        let (_, g) = got.iter().find(|(u, _)| *u == w).unwrap();
        assert!((g - v).abs() < 1e-12, "{names:?}: {g} vs {v}");
    }
}

#[test]
fn ordered_words_are_fixed() {
    let a = quadratic();
    let w = a.word(&["s0", "s1", "s1", "s3", "s2", "s4"]).unwrap();
    assert_eq!(a.normal_form(&w).unwrap(), NCPoly::term(w, ParamPoly::one()));
}

#[test]
fn time_translation_and_radius_commute_into_the_quantum_three_space() {
    let a = quadratic();
    let c = a.commutator(&a.gen("s0").unwrap(), &a.gen("s4").unwrap()).unwrap();
    let space = a.parse(&cat().element("quantum-3-space").unwrap().expr.to_string()).unwrap();
    let eta2_kinv = ParamPoly::eta().pow(2) * ParamPoly::kinv();
    assert_eq!(c, space.scale(&-eta2_kinv));
}

#[test]
fn generators_commute_with_themselves() {
    for name in QUANTUM {
        let a = alg(name);
        for g in a.gens() {
            let x = a.gen(g).unwrap();
            assert!(a.commutator(&x, &x).unwrap().is_zero());
        }
    }
}

#[test]
fn commutator_with_a_product_follows_leibniz() {
    let a = alg("kappa-minkowski");
    let (x0, x1, x2) = (a.gen("x0").unwrap(), a.gen("x1").unwrap(), a.gen("x2").unwrap());
    let c = a.commutator(&x0, &a.mul(&x1, &x2).unwrap()).unwrap();
    assert_eq!(c, a.parse("-2*kinv*x1*x2").unwrap());
}

#[test]
fn shipped_algebras_satisfy_jacobi() {
    for name in QUANTUM {
        assert_eq!(jacobi_nc(&alg(name)).unwrap(), Verdict::Pass, "{name}");
    }
}

#[test]
fn sign_flip_breaks_jacobi() {
    let a = quadratic();
    let flipped = a.parse("eta*kinv*s3^2").unwrap();
    let m = a.with_relation("s1", "s2", flipped).unwrap();
    let v = jacobi_nc(&m).unwrap();
    assert!(v.witness().is_some_and(|w| w.starts_with("Jacobiator(")), "{v}");
}

#[test]
fn corrected_casimir_is_central() {
    let a = quadratic();
    let c = a.parse(&cat().element("casimir").unwrap().expr.to_string()).unwrap();
    assert_eq!(casimir_centrality(&a, &c).unwrap(), Verdict::Pass);
}

#[test]
fn classical_pseudosphere_is_not_central() {
    let a = quadratic();
    let c = a.parse(&cat().element("classical-pseudosphere").unwrap().expr.to_string()).unwrap();
    let v = casimir_centrality(&a, &c).unwrap();
    assert!(!v.is_pass());
    assert!(!v.witness().unwrap().ends_with("= 0"));
}

#[test]
fn constants_are_central() {
    let a = quadratic();
    let c = NCPoly::constant(ParamPoly::eta() + ParamPoly::int(3));
    assert!(casimir_centrality(&a, &c).unwrap().is_pass());
}

#[test]
fn rejects_relations_not_in_normal_form() {
    let gens: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
    let ba = NCPoly::term(vec![1, 0], ParamPoly::one());
    assert!(matches!(NCAlgebra::new("bad", gens.clone(), &[("a", "b", ba)]), Err(Error::InvalidConfig(_))));
    assert!(matches!(
        NCAlgebra::new("bad", gens, &[("a", "c", NCPoly::zero())]),
        Err(Error::UnknownGenerator(_))
    ));
    assert!(NCAlgebra::from_catalog(cat().lookup("kappa-ads-phs").unwrap()).is_err());
}

#[test]
fn runaway_relations_hit_the_step_bound() {
    // b·a = a·b + a·a·b·b keeps regenerating inversions
    let gens: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
    let rhs = NCPoly::term(vec![0, 0, 1, 1], ParamPoly::one());
    let a = NCAlgebra::new("runaway", gens, &[("b", "a", rhs)]).unwrap();
    let err = a.normal_form(&[1, 1, 0, 0]).unwrap_err();
    assert!(matches!(err, Error::NonTerminating { bound: 80 }), "{err}");
}

#[test]
fn out_of_range_words_are_rejected() {
    let a = alg("typeII");
    assert!(matches!(a.normal_form(&[0, 7]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn semiclassical_kappa_minkowski_is_its_own_table() {
    let c = cat();
    let entry = c.lookup("kappa-minkowski").unwrap();
    let t = semiclassical_table(&alg("kappa-minkowski"), Param::Kinv).unwrap();
    for (a, b, e) in entry.table.pairs() {
        assert_eq!(t.get(a, b), e);
    }
    let plan = entry.plan(&ParamPoint::from_eta(0.0, 0.9), 3).unwrap();
    let r = semiclassical_compare(&alg("kappa-minkowski"), entry, Param::Kinv, &plan).unwrap();
    assert!(r.equal && r.max_deviation == 0.0);
}

#[test]
fn semiclassical_quadratic_algebra_drops_second_order_term() {
    let t = semiclassical_table(&quadratic(), Param::Kinv).unwrap();
    let want = parse("-eta^2*kinv*(s1^2 + s2^2 + s3^2)").unwrap();
    let plan = SamplePlan::new(2).coords(&["s1", "s2", "s3"]).fix("eta", 0.6).fix("kinv", 1.3);
    assert!(crate::expr::equiv_random(t.entry("s0", "s4").unwrap(), &want, &plan).unwrap().equal);
}

#[test]
fn semiclassical_table_one_matches_the_stored_table() {
    let c = cat();
    for name in ["typeI-z", "typeI-zprime", "typeII", "typeIII"] {
        let entry = c.lookup(name).unwrap();
        let plan = entry.plan(&ParamPoint::from_eta(0.0, 1.0).with_z(0.8, -0.6), 4).unwrap();
        let param = if name == "typeI-zprime" { Param::Zp } else { Param::Z };
        let r = semiclassical_compare(&alg(name), entry, param, &plan).unwrap();
        assert!(r.equal, "{name}: {r:?}");
    }
}

fn word_strategy(n: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn normal_form_is_idempotent_and_confluent(w in word_strategy(5, 5), seed in any::<u64>()) {
        let a = quadratic();
        let left = a.normal_form_with(&w, RewriteOrder::Leftmost).unwrap();
        prop_assert!(left.is_ordered());
        prop_assert_eq!(&a.reduce(&left).unwrap(), &left);
        prop_assert_eq!(&a.normal_form_with(&w, RewriteOrder::Rightmost).unwrap(), &left);
        prop_assert_eq!(&a.normal_form_with(&w, RewriteOrder::Random(seed)).unwrap(), &left);
    }

    #[test]
    fn normal_form_is_linear(u in word_strategy(4, 4), v in word_strategy(4, 4), k in -3i64..=3) {
        let a = alg("typeIII");
        let p = NCPoly::term(u.clone(), ParamPoly::int(k)).add(&NCPoly::term(v.clone(), ParamPoly::eta()));
        let sum = a.normal_form(&u).unwrap().scale(&ParamPoly::int(k)).add(&a.normal_form(&v).unwrap().scale(&ParamPoly::eta()));
        prop_assert_eq!(a.reduce(&p).unwrap(), sum);
    }

    #[test]
    fn commutator_is_antisymmetric_and_leibniz(x in word_strategy(5, 2), y in word_strategy(5, 2), z in word_strategy(5, 2)) {
        let a = quadratic();
        let (x, y, z) = (NCPoly::term(x, ParamPoly::one()), NCPoly::term(y, ParamPoly::kinv()), NCPoly::term(z, ParamPoly::one()));
        let xy = a.commutator(&x, &y).unwrap();
        prop_assert!(xy.add(&a.commutator(&y, &x).unwrap()).is_zero());
        let lhs = a.commutator(&x, &a.mul(&y, &z).unwrap()).unwrap();
        let rhs = a.mul(&xy, &z).unwrap().add(&a.mul(&y, &a.commutator(&x, &z).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

const WORLDLINES: [&str; 3] = ["worldlines-timelike", "worldlines-spacelike", "worldlines-lightlike"];

fn phase(name: &str) -> (DeformedPhaseSpace, SamplePlan) {
    let c = cat();
    let entry = c.lookup(name).unwrap();
    let plan = entry.plan(&ParamPoint::from_eta(0.0, 0.8), 11).unwrap();
    (DeformedPhaseSpace::from_catalog(entry, &plan).unwrap(), plan)
}

#[test]
fn momentum_bracket_of_third_pair() {
    for (name, want) in [
        ("worldlines-timelike", "kinv*(cosh(eta1)*cosh(eta2)*cosh(eta3) - 1)"),
        ("worldlines-spacelike", "-kinv*sinh(eta3)"),
    ] {
        let (d, plan) = phase(name);
        let got = d.commutator(&d.y(2), &d.eta(2));
        assert_eq!(got.terms().count(), 1);
        let r = crate::expr::equiv_random(&got.coeff(&[]), &parse(want).unwrap(), &plan).unwrap();
        assert!(r.equal, "{name}");
        assert!(d.commutator(&d.eta(0), &d.eta(1)).terms().next().is_none());
    }
}

#[test]
fn generator_commutators_reproduce_the_stored_tables() {
    let c = cat();
    for name in WORLDLINES {
        let (d, plan) = phase(name);
        let t = d.table().unwrap();
        let entry = c.lookup(name).unwrap();
        let mut pairs = Vec::new();
        for (a, b, e) in entry.table.pairs() {
            let (x, y) = (&entry.table.coords[a], &entry.table.coords[b]);
            pairs.push((format!("[{x}, {y}]"), t.entry(x, y).unwrap().clone(), e.clone()));
        }
        let r = compare_exprs(&pairs, &plan, &[]).unwrap();
        assert!(r.equal, "{name}: {r:?}");
    }
}

#[test]
fn lightlike_relations_are_the_sum_of_the_other_two() {
    let c = cat();
    let (t, s, l) = (c.lookup(WORLDLINES[0]).unwrap(), c.lookup(WORLDLINES[1]).unwrap(), c.lookup(WORLDLINES[2]).unwrap());
    let plan = l.plan(&ParamPoint::from_eta(0.0, 0.8), 5).unwrap();
    let sum = t.table.plus(&s.table).unwrap();
    for (a, b, e) in l.table.pairs() {
        let (x, y) = (&l.table.coords[a], &l.table.coords[b]);
        assert!(crate::expr::equiv_random(e, sum.entry(x, y).unwrap(), &plan).unwrap().equal, "[{x}, {y}]");
    }
}

#[test]
fn worldline_spaces_satisfy_jacobi() {
    for name in WORLDLINES {
        let (d, plan) = phase(name);
        let r = phase_jacobi(&d, &plan).unwrap();
        assert!(r.equal, "{name}: {r:?}");
    }
}

#[test]
fn darboux_coordinates_are_canonical() {
    let c = cat();
    for (name, map) in [
        ("worldlines-timelike", "darboux-timelike"),
        ("worldlines-spacelike", "darboux-spacelike"),
        ("worldlines-lightlike", "darboux-lightlike"),
    ] {
        let (d, plan) = phase(name);
        let r = darboux_verify(&d, c.map(map).unwrap(), &Expr::var("kinv"), &plan).unwrap();
        assert!(r.equal, "{name}: {r:?}");
    }
}

#[test]
fn raw_coordinates_are_not_canonical() {
    let c = cat();
    let (d, plan) = phase("worldlines-timelike");
    let mut id = c.map("darboux-timelike").unwrap().clone();
    for (k, (_, e)) in id.outputs.iter_mut().enumerate() {
        *e = Expr::var(d.gen_names()[(k + 3) % 6].clone());
    }
    let r = darboux_verify(&d, &id, &Expr::var("kinv"), &plan).unwrap();
    assert!(!r.equal);
    assert!(r.worst.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn y_passes_a_polynomial_by_the_derivation_rule(
        which in 0usize..3,
        a in 0usize..3,
        coeffs in prop::collection::vec(-3i64..=3, 5),
    ) {
        let (d, plan) = phase(WORLDLINES[which]);
        let eta = Expr::var(format!("eta{}", a + 1));
        let f = Expr::add(coeffs.iter().enumerate().map(|(k, c)| Expr::mul(vec![Expr::int(*c), Expr::pow(eta.clone(), k as i32)])).collect());
        let lhs = d.mul(&d.y(a), &PsElement::function(f.clone()));
        let fa = d.commutator(&d.y(a), &d.eta(a)).coeff(&[]);
        let rhs = PsElement::term(vec![a], f.clone()).add(&PsElement::function(Expr::mul(vec![fa, f.diff(&format!("eta{}", a + 1))])));
        let diff = lhs.sub(&rhs);
        for (_, c) in diff.terms() {
            prop_assert!(crate::expr::equiv_random(c, &Expr::zero(), &plan).unwrap().equal);
        }
    }
}

#[test]
fn broken_worldline_relation_fails_jacobi() {
    let c = cat();
    let mut entry = c.lookup("worldlines-timelike").unwrap().clone();
    let (i, j) = (entry.table.index_of("y1").unwrap(), entry.table.index_of("y2").unwrap());
    entry.table.set(i, j, parse("kinv*(y2*sinh(eta1) + y1*tanh(eta2)/cosh(eta3))").unwrap()).unwrap();
    let plan = entry.plan(&ParamPoint::from_eta(0.0, 0.8), 11).unwrap();
    let d = DeformedPhaseSpace::from_catalog(&entry, &plan).unwrap();
    let r = phase_jacobi(&d, &plan).unwrap();
    assert!(!r.equal);
    assert!(r.worst.as_deref().is_some_and(|w| w.starts_with("Jacobiator(")), "{r:?}");
}
