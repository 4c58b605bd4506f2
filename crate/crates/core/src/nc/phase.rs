//! Deformed phase spaces: commuting η̂ᵃ, noncommuting ŷᵃ with
//! [ŷᵃ, η̂ᵇ] = δ_ab F_a(η̂) and [ŷᵃ, ŷᵇ] linear in ŷ with η̂-dependent
//! coefficients. Elements are kept η̂-left: Σ f(η̂)·(ordered ŷ-monomial).

use std::collections::BTreeMap;

use crate::catalog::{compare_exprs, BracketTable, CatalogEntry, Comparison, CoordinateMap};
use crate::error::{Error, Result};
use crate::expr::{equiv_random, Expr, SamplePlan};

/// η̂-left element: ordered y-word (0-based pair indices) → coefficient.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PsElement {
    terms: BTreeMap<Vec<usize>, Expr>,
}

impl PsElement {
    pub fn zero() -> Self {
        PsElement::default()
    }

    /// A function of the η̂ alone.
    pub fn function(f: Expr) -> Self {
        let mut e = PsElement::zero();
        e.push(Vec::new(), f);
        e
    }

    pub fn term(w: Vec<usize>, f: Expr) -> Self {
        let mut e = PsElement::zero();
        e.push(w, f);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[usize]) -> Expr {
        self.terms.get(w).cloned().unwrap_or_else(Expr::zero)
    }

    fn push(&mut self, w: Vec<usize>, f: Expr) {
        if f.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                let sum = cancel_opposites(Expr::add(vec![old, f]));
                if !sum.is_zero() {
                    self.terms.insert(w, sum);
                }
            }
            None => {
                self.terms.insert(w, f);
            }
        }
    }

    pub fn add(&self, o: &PsElement) -> PsElement {
        let mut out = self.clone();
        for (w, f) in &o.terms {
            out.push(w.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> PsElement {
        PsElement { terms: self.terms.iter().map(|(w, f)| (w.clone(), Expr::neg(f.clone()))).collect() }
    }

    pub fn sub(&self, o: &PsElement) -> PsElement {
        self.add(&o.neg())
    }

    /// f(η̂)·self; η̂ commute with every coefficient.
    pub fn scale_left(&self, f: &Expr) -> PsElement {
        let mut out = PsElement::zero();
        for (w, g) in &self.terms {
            out.push(w.clone(), Expr::mul(vec![f.clone(), g.clone()]));
        }
        out
    }

    pub fn format(&self, y_names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, f)| {
                let mut s = format!("({f})");
                for &i in w {
                    s.push('*');
                    s.push_str(&y_names[i]);
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

/// Printed form with the factors of a product sorted.
fn factor_key(e: &Expr) -> String {
    match e {
        Expr::Neg(x) => format!("-{}", factor_key(x)),
        Expr::Mul(fs) => {
            let mut ks: Vec<String> = fs.iter().map(factor_key).collect();
            ks.sort();
            ks.join("*")
        }
        other => other.to_string(),
    }
}

/// Drop pairs of summands that are negatives of each other.
fn cancel_opposites(e: Expr) -> Expr {
    let Expr::Add(terms) = e else { return e };
    let mut kept: Vec<Expr> = Vec::new();
    for t in terms {
        let neg = factor_key(&Expr::neg(t.clone()));
        match kept.iter().position(|k| factor_key(k) == neg) {
            Some(i) => {
                kept.remove(i);
            }
            None => kept.push(t),
        }
    }
    Expr::add(kept)
}

/// [ŷᵃ, ŷᵇ] (a < b) = Σ_c lin[c]·ŷᶜ + constant.
#[derive(Debug, Clone)]
struct YRelation {
    lin: Vec<Expr>,
    constant: Expr,
}

#[derive(Debug, Clone)]
pub struct DeformedPhaseSpace {
    pub name: String,
    eta: Vec<String>,
    y: Vec<String>,
    /// [ŷᵃ, η̂ᵃ]
    f: Vec<Expr>,
    /// keyed (a, b) with a < b
    yy: BTreeMap<(usize, usize), YRelation>,
}

impl DeformedPhaseSpace {
    /// From a function-coefficient catalog entry with coordinates `eta1..`
    /// and `y1..`. Entries are checked for the supported shape: vanishing
    /// η-η and off-diagonal y-η brackets, and y-y brackets linear in ŷ.
    pub fn from_catalog(entry: &CatalogEntry, plan: &SamplePlan) -> Result<DeformedPhaseSpace> {
        let coords = entry.coords();
        let n = coords.iter().filter(|c| c.starts_with("eta")).count();
        let eta: Vec<String> = (1..=n).map(|k| format!("eta{k}")).collect();
        let y: Vec<String> = (1..=n).map(|k| format!("y{k}")).collect();
        if coords.len() != 2 * n || y.iter().chain(&eta).any(|c| !coords.contains(c)) {
            return Err(Error::Shape(format!("{}: expected coordinates eta1..eta{n}, y1..y{n}", entry.name)));
        }
        let t = &entry.table;
        let shape = |what: String| Error::Shape(format!("{}: {what}", entry.name));
        let mut f = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && !t.entry(&eta[a], &eta[b])?.is_zero() {
                    return Err(shape(format!("[{}, {}] must vanish", eta[a], eta[b])));
                }
                if a != b && !t.entry(&y[a], &eta[b])?.is_zero() {
                    return Err(shape(format!("[{}, {}] must vanish", y[a], eta[b])));
                }
            }
            let fa = t.entry(&y[a], &eta[a])?.clone();
            if y.iter().any(|v| fa.depends_on(v)) {
                return Err(shape(format!("[{}, {}] depends on y", y[a], eta[a])));
            }
            f.push(fa);
        }
        let at_origin = |e: &Expr| y.iter().fold(e.clone(), |acc, v| acc.subs(v, &Expr::zero()));
        let mut yy = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                let e = t.entry(&y[a], &y[b])?;
                let lin: Vec<Expr> = y.iter().map(|v| at_origin(&e.diff(v))).collect();
                let constant = at_origin(e);
                let mut rebuilt = vec![constant.clone()];
                rebuilt.extend(lin.iter().zip(&y).map(|(c, v)| Expr::mul(vec![c.clone(), Expr::var(v.clone())])));
                if !equiv_random(e, &Expr::add(rebuilt), plan)?.equal {
                    return Err(shape(format!("[{}, {}] is not linear in y", y[a], y[b])));
                }
                yy.insert((a, b), YRelation { lin, constant });
            }
        }
        Ok(DeformedPhaseSpace { name: entry.name.clone(), eta, y, f, yy })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn y_names(&self) -> &[String] {
        &self.y
    }

    /// Generator names: η̂ first, then ŷ.
    pub fn gen_names(&self) -> Vec<String> {
        self.eta.iter().chain(&self.y).cloned().collect()
    }

    pub fn y(&self, a: usize) -> PsElement {
        PsElement::term(vec![a], Expr::one())
    }

    pub fn eta(&self, a: usize) -> PsElement {
        PsElement::function(Expr::var(self.eta[a].clone()))
    }

    /// Generator by index in [`Self::gen_names`] order.
    pub fn gen(&self, i: usize) -> PsElement {
        if i < self.n() {
            self.eta(i)
        } else {
            self.y(i - self.n())
        }
    }

    /// Element from an expression linear in ŷ with coefficients written to
    /// the left, e.g. `G(η)*y1`.
    pub fn element(&self, e: &Expr, plan: &SamplePlan) -> Result<PsElement> {
        let at_origin = |x: &Expr| self.y.iter().fold(x.clone(), |acc, v| acc.subs(v, &Expr::zero()));
        let mut out = PsElement::function(at_origin(e));
        let mut rebuilt = vec![at_origin(e)];
        for (c, v) in self.y.iter().enumerate() {
            let coef = at_origin(&e.diff(v));
            rebuilt.push(Expr::mul(vec![coef.clone(), Expr::var(v.clone())]));
            out.push(vec![c], coef);
        }
        if !equiv_random(e, &Expr::add(rebuilt), plan)?.equal {
            return Err(Error::Shape(format!("`{e}` is not linear in y")));
        }
        Ok(out)
    }

    /// ŷᵃ·x, η̂-left ordered: ŷᵃ f = f ŷᵃ + F_a ∂_a f.
    fn left_mul_y(&self, a: usize, x: &PsElement) -> PsElement {
        let mut out = PsElement::zero();
        for (w, g) in &x.terms {
            out = out.add(&self.y_times_word(a, w).scale_left(g));
            let dg = g.diff(&self.eta[a]);
            if !dg.is_zero() {
                out.push(w.clone(), Expr::mul(vec![self.f[a].clone(), dg]));
            }
        }
        out
    }

    /// ŷᵃ times an ordered word.
    fn y_times_word(&self, a: usize, w: &[usize]) -> PsElement {
        match w.first() {
            Some(&b) if b < a => {
                let rest = &w[1..];
                // ŷᵃŷᵇ = ŷᵇŷᵃ − [ŷᵇ, ŷᵃ]
                let mut out = self.left_mul_y(b, &self.y_times_word(a, rest));
                let rel = &self.yy[&(b, a)];
                for (c, coef) in rel.lin.iter().enumerate() {
                    if !coef.is_zero() {
                        out = out.sub(&self.y_times_word(c, rest).scale_left(coef));
                    }
                }
                if !rel.constant.is_zero() {
                    out.push(rest.to_vec(), Expr::neg(rel.constant.clone()));
                }
                out
            }
            _ => {
                let mut word = vec![a];
                word.extend(w);
                PsElement::term(word, Expr::one())
            }
        }
    }

    pub fn mul(&self, x: &PsElement, z: &PsElement) -> PsElement {
        let mut out = PsElement::zero();
        for (w, f) in &x.terms {
            let mut acc = z.clone();
            for &a in w.iter().rev() {
                acc = self.left_mul_y(a, &acc);
            }
            out = out.add(&acc.scale_left(f));
        }
        out
    }

    /// phase_space_commutator
    pub fn commutator(&self, x: &PsElement, z: &PsElement) -> PsElement {
        self.mul(x, z).sub(&self.mul(z, x))
    }

    /// Commutators of generators read as a commuting bracket table.
    pub fn table(&self) -> Result<BracketTable> {
        let names = self.gen_names();
        let mut t = BracketTable::zero(names.clone());
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                let c = self.commutator(&self.gen(i), &self.gen(j));
                let e = Expr::add(
                    c.terms()
                        .map(|(w, f)| {
                            let mut fs = vec![f.clone()];
                            fs.extend(w.iter().map(|&k| Expr::var(self.y[k].clone())));
                            Expr::mul(fs)
                        })
                        .collect(),
                );
                t.set(i, j, e)?;
            }
        }
        Ok(t)
    }
}

fn vanishing_pairs(label: &str, e: &PsElement, target: &Expr, out: &mut Vec<(String, Expr, Expr)>) {
    out.push((format!("{label} at 1"), e.coeff(&[]), target.clone()));
    for (w, f) in e.terms() {
        if !w.is_empty() {
            out.push((format!("{label} at y-word {w:?}"), f.clone(), Expr::zero()));
        }
    }
}

/// Jacobi identity on every generator triple, coefficients compared to zero
/// by the randomized oracle.
pub fn phase_jacobi(d: &DeformedPhaseSpace, plan: &SamplePlan) -> Result<Comparison> {
    let names = d.gen_names();
    let m = names.len();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (a, b, c) = (d.gen(i), d.gen(j), d.gen(k));
                let jac = d
                    .commutator(&d.commutator(&a, &b), &c)
                    .add(&d.commutator(&d.commutator(&b, &c), &a))
                    .add(&d.commutator(&d.commutator(&c, &a), &b));
                let label = format!("Jacobiator({}, {}, {})", names[i], names[j], names[k]);
                vanishing_pairs(&label, &jac, &Expr::zero(), &mut pairs);
            }
        }
    }
    compare_exprs(&pairs, plan, &[])
}

/// Canonical relations for q̂ᵃ, p̂ᵃ given by `map` (outputs q1.., p1..):
/// [q̂ᵃ, p̂ᵇ] = ħ δ_ab, [q̂ᵃ, q̂ᵇ] = 0, [p̂ᵃ, p̂ᵇ] = 0, with ħ = `hbar`.
pub fn darboux_verify(d: &DeformedPhaseSpace, map: &CoordinateMap, hbar: &Expr, plan: &SamplePlan) -> Result<Comparison> {
    let n = d.n();
    let q = (1..=n).map(|k| d.element(map.output(&format!("q{k}"))?, plan)).collect::<Result<Vec<_>>>()?;
    let p = (1..=n).map(|k| d.element(map.output(&format!("p{k}"))?, plan)).collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let target = if a == b { hbar.clone() } else { Expr::zero() };
            vanishing_pairs(&format!("[q{}, p{}]", a + 1, b + 1), &d.commutator(&q[a], &p[b]), &target, &mut pairs);
            if a < b {
                let z = Expr::zero();
                vanishing_pairs(&format!("[q{}, q{}]", a + 1, b + 1), &d.commutator(&q[a], &q[b]), &z, &mut pairs);
                vanishing_pairs(&format!("[p{}, p{}]", a + 1, b + 1), &d.commutator(&p[a], &p[b]), &z, &mut pairs);
            }
        }
    }
    let guards = map.domain.guards.iter().map(|g| crate::expr::text::parse(g)).collect::<Result<Vec<_>>>()?;
    compare_exprs(&pairs, plan, &guards)
}
