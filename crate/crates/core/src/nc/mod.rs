//! Noncommutative polynomial algebras given by ordered generators and
//! commutation relations: normal ordering, commutators, Jacobi and
//! centrality checks. Worldline phase spaces with function coefficients
//! live in [`phase`].

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{compare_exprs, BracketTable, CatalogEntry, Classification, Comparison};
use crate::error::{Error, Result};
use crate::expr::{Expr, SamplePlan};
use crate::scalar::{Param, ParamPoly, Rational};
use crate::verdict::Verdict;

pub mod phase;

pub use phase::{darboux_verify, phase_jacobi, DeformedPhaseSpace, PsElement};

/// A word in generator indices. Normal-form words are non-decreasing.
pub type Word = Vec<usize>;

/// Linear combination of words with parameter-polynomial coefficients over
/// a denominator kept as a list of monic factors. The list is empty unless
/// normal ordering had to solve a rewriting cycle.
#[derive(Clone, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, ParamPoly>,
    den: Vec<ParamPoly>,
}

impl PartialEq for NCPoly {
    fn eq(&self, o: &NCPoly) -> bool {
        if self.den == o.den {
            return self.terms == o.terms;
        }
        let l = lcm(&self.den, &o.den);
        self.raised(&l) == o.raised(&l)
    }
}

impl Eq for NCPoly {}

/// Smallest factor list containing both.
fn lcm(a: &[ParamPoly], b: &[ParamPoly]) -> Vec<ParamPoly> {
    let mut out = a.to_vec();
    let mut spare = a.to_vec();
    for f in b {
        match spare.iter().position(|g| g == f) {
            Some(i) => {
                spare.swap_remove(i);
            }
            None => out.push(f.clone()),
        }
    }
    out
}

fn product(fs: &[ParamPoly]) -> ParamPoly {
    fs.iter().fold(ParamPoly::one(), |acc, f| &acc * f)
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn constant(c: ParamPoly) -> Self {
        NCPoly::term(Vec::new(), c)
    }

    pub fn term(w: Word, c: ParamPoly) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(w, &c);
        p
    }

    pub fn gen(i: usize) -> Self {
        NCPoly::term(vec![i], ParamPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Numerator terms.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn den(&self) -> ParamPoly {
        product(&self.den)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Numerator coefficient of `w`.
    pub fn coeff(&self, w: &[usize]) -> ParamPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_ordered(&self) -> bool {
        self.terms.keys().all(|w| is_ordered(w))
    }

    fn add_term(&mut self, w: Word, c: &ParamPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    /// Numerator over the denominator `to`, which must contain ours.
    fn raised(&self, to: &[ParamPoly]) -> BTreeMap<Word, ParamPoly> {
        let missing = &lcm(&self.den, to)[self.den.len()..];
        if missing.is_empty() {
            return self.terms.clone();
        }
        let m = product(missing);
        self.terms.iter().map(|(w, v)| (w.clone(), v * &m)).collect()
    }

    /// Divide by `d`, cancelling against the numerator where possible.
    pub fn divide(&self, d: &ParamPoly) -> NCPoly {
        let mut out = self.clone();
        out.push_factor(d.clone());
        out.cancel();
        out
    }

    fn push_factor(&mut self, d: ParamPoly) {
        if let Some(c) = d.as_constant() {
            let inv = c.recip();
            self.terms.values_mut().for_each(|v| *v = v.scale(&inv));
            return;
        }
        let lead = d.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
        let inv = lead.recip();
        self.terms.values_mut().for_each(|v| *v = v.scale(&inv));
        self.den.push(d.scale(&inv));
    }

    fn cancel(&mut self) {
        if self.terms.is_empty() {
            self.den.clear();
            return;
        }
        let mut i = 0;
        while i < self.den.len() {
            let f = &self.den[i];
            let divided: Option<BTreeMap<Word, ParamPoly>> =
                self.terms.iter().map(|(w, v)| v.exact_div(f).map(|q| (w.clone(), q))).collect();
            match divided {
                Some(t) => {
                    self.terms = t;
                    self.den.remove(i);
                }
                None => i += 1,
            }
        }
        self.den.sort_by_cached_key(|f| f.to_string());
    }

    pub fn scale(&self, c: &ParamPoly) -> NCPoly {
        let mut out = NCPoly { terms: BTreeMap::new(), den: self.den.clone() };
        for (w, v) in &self.terms {
            out.add_term(w.clone(), &(v * c));
        }
        out.cancel();
        out
    }

    pub fn add(&self, o: &NCPoly) -> NCPoly {
        let den = lcm(&self.den, &o.den);
        let mut out = NCPoly { terms: self.raised(&den), den: den.clone() };
        for (w, v) in o.raised(&den) {
            out.add_term(w, &v);
        }
        if !out.den.is_empty() {
            out.cancel();
        }
        out
    }

    pub fn sub(&self, o: &NCPoly) -> NCPoly {
        self.add(&o.scale(&ParamPoly::int(-1)))
    }

    /// Concatenation product, not normal ordered.
    pub fn concat(&self, o: &NCPoly) -> NCPoly {
        let mut out = NCPoly { terms: BTreeMap::new(), den: [self.den.clone(), o.den.clone()].concat() };
        for (w, v) in &self.terms {
            for (u, c) in &o.terms {
                let mut word = w.clone();
                word.extend(u);
                out.add_term(word, &(v * c));
            }
        }
        if !out.den.is_empty() {
            out.cancel();
        }
        out
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<&str> = w.iter().map(|&i| names[i].as_str()).collect();
                match (w.is_empty(), c.num_terms()) {
                    (true, _) => format!("({c})"),
                    (false, 1) if c.as_constant().is_some_and(|k| k.is_one()) => word.join("*"),
                    _ => format!("({c})*{}", word.join("*")),
                }
            })
            .collect();
        let num = parts.join(" + ");
        if self.den.is_empty() {
            num
        } else {
            format!("({num})/({})", self.den())
        }
    }

    /// Commutative reading: each word becomes a product of variables.
    pub fn to_commutative(&self, names: &[String]) -> Expr {
        let num = Expr::add(
            self.terms
                .iter()
                .map(|(w, c)| {
                    let mut fs = vec![Expr::from_param_poly(c)];
                    fs.extend(w.iter().map(|&i| Expr::var(names[i].clone())));
                    Expr::mul(fs)
                })
                .collect(),
        );
        if self.den.is_empty() {
            num
        } else {
            Expr::div(num, Expr::from_param_poly(&self.den()))
        }
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..32).map(|i| format!("g{i}")).collect();
        f.write_str(&self.format(&names))
    }
}

fn is_ordered(w: &[usize]) -> bool {
    w.windows(2).all(|p| p[0] <= p[1])
}

/// Which adjacent inversion to rewrite first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
    Random(u64),
}

/// Generators in a fixed order with `g_j g_i = g_i g_j + rel(j, i)` for i < j.
#[derive(Debug, Clone)]
pub struct NCAlgebra {
    pub name: String,
    gens: Vec<String>,
    /// rel[j][i] = [g_j, g_i] for i < j
    rel: Vec<Vec<NCPoly>>,
    /// leftmost normal forms of words seen so far
    cache: Arc<Mutex<HashMap<Word, NCPoly>>>,
}

impl NCAlgebra {
    /// `relations` gives `[a, b]` for unordered pairs by name; missing pairs
    /// commute. Right-hand sides must already be in normal form.
    pub fn new(name: impl Into<String>, gens: Vec<String>, relations: &[(&str, &str, NCPoly)]) -> Result<NCAlgebra> {
        let n = gens.len();
        let idx = |g: &str| gens.iter().position(|x| x == g).ok_or_else(|| Error::UnknownGenerator(g.to_string()));
        let mut rel = vec![vec![NCPoly::zero(); n]; n];
        for (a, b, p) in relations {
            let (i, j) = (idx(a)?, idx(b)?);
            if i == j {
                return Err(Error::InvalidConfig(format!("relation [{a}, {a}]")));
            }
            if !p.is_ordered() {
                return Err(Error::InvalidConfig(format!("[{a}, {b}] = {} is not in normal form", p.format(&gens))));
            }
            if p.terms().any(|(w, _)| w.iter().any(|&k| k >= n)) {
                return Err(Error::DimensionMismatch { expected: n, got: p.terms().flat_map(|(w, _)| w.clone()).max().unwrap() + 1 });
            }
            // store [g_hi, g_lo]
            let (hi, lo, v) = if i > j { (i, j, p.clone()) } else { (j, i, p.scale(&ParamPoly::int(-1))) };
            rel[hi][lo] = v;
        }
        Ok(NCAlgebra { name: name.into(), gens, rel, cache: Arc::default() })
    }

    /// Quantum catalog entry read with its coordinates as the monomial order.
    pub fn from_catalog(entry: &CatalogEntry) -> Result<NCAlgebra> {
        if !matches!(entry.classification, Classification::QuantumLinear | Classification::QuantumQuadratic) {
            return Err(Error::InvalidConfig(format!("{} does not have polynomial relations", entry.name)));
        }
        let gens = entry.coords().to_vec();
        let mut rels = Vec::new();
        for (a, b, e) in entry.table.pairs() {
            rels.push((a, b, expr_to_words(e, &gens)?));
        }
        let named: Vec<(&str, &str, NCPoly)> =
            rels.into_iter().map(|(a, b, p)| (gens[a].as_str(), gens[b].as_str(), p)).collect();
        NCAlgebra::new(entry.name.clone(), gens.clone(), &named)
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn index_of(&self, g: &str) -> Result<usize> {
        self.gens.iter().position(|x| x == g).ok_or_else(|| Error::UnknownGenerator(g.to_string()))
    }

    pub fn gen(&self, g: &str) -> Result<NCPoly> {
        Ok(NCPoly::gen(self.index_of(g)?))
    }

    /// Word from generator names.
    pub fn word(&self, names: &[&str]) -> Result<Word> {
        names.iter().map(|g| self.index_of(g)).collect()
    }

    /// Rewriting is aborted once one reduction chain is this deep.
    pub fn step_bound(&self, degree: usize) -> usize {
        degree.max(1) * self.gens.len() * 10
    }

    /// Parse an expression in generators and parameters, then normal order.
    pub fn parse(&self, src: &str) -> Result<NCPoly> {
        let e = crate::expr::text::parse(src)?;
        self.reduce(&expr_to_words(&e, &self.gens)?)
    }

    pub fn normal_form(&self, w: &[usize]) -> Result<NCPoly> {
        self.normal_form_with(w, RewriteOrder::Leftmost)
    }

    pub fn normal_form_with(&self, w: &[usize], strategy: RewriteOrder) -> Result<NCPoly> {
        self.reduce_with(&NCPoly::term(w.to_vec(), ParamPoly::one()), strategy)
    }

    pub fn reduce(&self, p: &NCPoly) -> Result<NCPoly> {
        self.reduce_with(p, RewriteOrder::Leftmost)
    }

    /// Normal order every word of `p`. A word that comes back on its own
    /// reduction chain with coefficient c is solved as w = rest / (1 − c),
    /// so the result may carry a parameter denominator.
    pub fn reduce_with(&self, p: &NCPoly, strategy: RewriteOrder) -> Result<NCPoly> {
        let n = self.gens.len();
        if let Some(k) = p.terms().flat_map(|(w, _)| w.iter()).find(|&&k| k >= n) {
            return Err(Error::DimensionMismatch { expected: n, got: k + 1 });
        }
        let mut rw = Rewriter {
            alg: self,
            strategy,
            rng: match strategy {
                RewriteOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
                _ => None,
            },
            bound: self.step_bound(p.degree()),
            memo: HashMap::new(),
            shared: (strategy == RewriteOrder::Leftmost).then_some(&*self.cache),
            stack: HashSet::new(),
        };
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out = out.add(&rw.word(w)?.scale(c));
        }
        let mut out = NCPoly { terms: out.terms, den: [out.den, p.den.clone()].concat() };
        out.cancel();
        Ok(out)
    }

    pub fn mul(&self, p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
        self.reduce(&p.concat(q))
    }

    /// commutator_nc: normal form of pq − qp.
    pub fn commutator(&self, p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
        self.reduce(&p.concat(q).sub(&q.concat(p)))
    }

    pub fn format(&self, p: &NCPoly) -> String {
        p.format(&self.gens)
    }

    /// Same algebra with one relation replaced (mutation tests).
    pub fn with_relation(&self, a: &str, b: &str, p: NCPoly) -> Result<NCAlgebra> {
        let mut rels = Vec::new();
        for j in 0..self.gens.len() {
            for i in 0..j {
                if !self.rel[j][i].is_zero() {
                    rels.push((self.gens[j].clone(), self.gens[i].clone(), self.rel[j][i].clone()));
                }
            }
        }
        rels.retain(|(x, y, _)| !((x == a && y == b) || (x == b && y == a)));
        rels.push((a.to_string(), b.to_string(), p));
        let named: Vec<(&str, &str, NCPoly)> = rels.iter().map(|(x, y, p)| (x.as_str(), y.as_str(), p.clone())).collect();
        NCAlgebra::new(self.name.clone(), self.gens.clone(), &named)
    }
}

struct Rewriter<'a> {
    alg: &'a NCAlgebra,
    strategy: RewriteOrder,
    rng: Option<ChaCha8Rng>,
    bound: usize,
    memo: HashMap<Word, NCPoly>,
    shared: Option<&'a Mutex<HashMap<Word, NCPoly>>>,
    /// words whose reduction is in progress; they stay symbolic below
    stack: HashSet<Word>,
}

impl Rewriter<'_> {
    fn word(&mut self, w: &[usize]) -> Result<NCPoly> {
        let inversions: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&k| w[k] > w[k + 1]).collect();
        if inversions.is_empty() || self.stack.contains(w) {
            return Ok(NCPoly::term(w.to_vec(), ParamPoly::one()));
        }
        if let Some(p) = self.memo.get(w) {
            return Ok(p.clone());
        }
        if let Some(p) = self.shared.and_then(|m| m.lock().unwrap().get(w).cloned()) {
            return Ok(p);
        }
        if self.stack.len() >= self.bound {
            return Err(Error::NonTerminating { bound: self.bound });
        }
        let k = match (self.strategy, self.rng.as_mut()) {
            (RewriteOrder::Random(_), Some(r)) => inversions[r.gen_range(0..inversions.len())],
            (RewriteOrder::Rightmost, _) => *inversions.last().unwrap(),
            _ => inversions[0],
        };
        self.stack.insert(w.to_vec());
        let result = self.expand(w, k);
        self.stack.remove(w);
        let mut r = result?;
        if let Some(c) = r.terms.remove(w) {
            let d = &r.den() - &c;
            if d.is_zero() {
                return Err(Error::InvalidConfig(format!(
                    "relations are inconsistent: {} reduces to itself",
                    w.iter().map(|&i| self.alg.gens[i].as_str()).collect::<Vec<_>>().join("*")
                )));
            }
            r = NCPoly { terms: r.terms, den: Vec::new() }.divide(&d);
        }
        if r.is_ordered() {
            if let Some(m) = self.shared {
                m.lock().unwrap().insert(w.to_vec(), r.clone());
            }
            self.memo.insert(w.to_vec(), r.clone());
        }
        Ok(r)
    }

    /// g_j g_i → g_i g_j + [g_j, g_i] at position k, then recurse.
    fn expand(&mut self, w: &[usize], k: usize) -> Result<NCPoly> {
        let (hi, lo) = (w[k], w[k + 1]);
        let mut swapped = w.to_vec();
        swapped.swap(k, k + 1);
        let mut out = self.word(&swapped)?;
        let rel = self.alg.rel[hi][lo].clone();
        for (mid, v) in rel.terms() {
            let mut nw = w[..k].to_vec();
            nw.extend(mid);
            nw.extend(&w[k + 2..]);
            out = out.add(&self.word(&nw)?.scale(v));
        }
        Ok(out)
    }
}

/// Expression in generators and parameters as a (not yet ordered)
/// combination of words; products keep their written order.
pub fn expr_to_words(e: &Expr, gens: &[String]) -> Result<NCPoly> {
    let not_poly = || Error::NotPolynomial(e.to_string());
    Ok(match e {
        Expr::Var(v) => match gens.iter().position(|g| g == v) {
            Some(i) => NCPoly::gen(i),
            None => NCPoly::constant(e.to_param_poly()?),
        },
        Expr::Const(_) => NCPoly::constant(e.to_param_poly()?),
        Expr::Add(xs) => {
            let mut acc = NCPoly::zero();
            for x in xs {
                acc = acc.add(&expr_to_words(x, gens)?);
            }
            acc
        }
        Expr::Mul(xs) => {
            let mut acc = NCPoly::constant(ParamPoly::one());
            for x in xs {
                acc = acc.concat(&expr_to_words(x, gens)?);
            }
            acc
        }
        Expr::Neg(x) => expr_to_words(x, gens)?.scale(&ParamPoly::int(-1)),
        Expr::Pow(x, k) if *k >= 0 => {
            let base = expr_to_words(x, gens)?;
            let mut acc = NCPoly::constant(ParamPoly::one());
            for _ in 0..*k {
                acc = acc.concat(&base);
            }
            acc
        }
        Expr::Div(a, b) if b.vars().is_empty() => {
            let d = b.to_param_poly()?.as_constant().ok_or_else(not_poly)?;
            if d.is_zero() {
                return Err(not_poly());
            }
            expr_to_words(a, gens)?.scale(&ParamPoly::constant(d.recip()))
        }
        _ => return Err(not_poly()),
    })
}

/// Witness-carrying result of an exact algebra check.
fn nonzero_witness(label: String, alg: &NCAlgebra, p: &NCPoly) -> Verdict {
    Verdict::fail(format!("{label} = {}", alg.format(p)))
}

/// [[a,b],c] + [[b,c],a] + [[c,a],b] = 0 for every generator triple, exactly.
pub fn jacobi_nc(alg: &NCAlgebra) -> Result<Verdict> {
    let n = alg.gens.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (NCPoly::gen(i), NCPoly::gen(j), NCPoly::gen(k));
                let t1 = alg.commutator(&alg.commutator(&a, &b)?, &c)?;
                let t2 = alg.commutator(&alg.commutator(&b, &c)?, &a)?;
                let t3 = alg.commutator(&alg.commutator(&c, &a)?, &b)?;
                let sum = t1.add(&t2).add(&t3);
                if !sum.is_zero() {
                    let g = &alg.gens;
                    return Ok(nonzero_witness(format!("Jacobiator({}, {}, {})", g[i], g[j], g[k]), alg, &sum));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// [c, g] = 0 for every generator g, exactly.
pub fn casimir_centrality(alg: &NCAlgebra, c: &NCPoly) -> Result<Verdict> {
    for (i, g) in alg.gens.iter().enumerate() {
        let comm = alg.commutator(c, &NCPoly::gen(i))?;
        if !comm.is_zero() {
            return Ok(nonzero_witness(format!("[C, {g}]"), alg, &comm));
        }
    }
    Ok(Verdict::Pass)
}

/// The Poisson table obtained from the relations by keeping the part linear
/// in `param` and reading generators as commuting coordinates.
pub fn semiclassical_table(alg: &NCAlgebra, param: Param) -> Result<BracketTable> {
    let n = alg.gens.len();
    let mut t = BracketTable::zero(alg.gens.clone());
    for i in 0..n {
        for j in i + 1..n {
            let comm = alg.commutator(&NCPoly::gen(i), &NCPoly::gen(j))?;
            if !comm.is_polynomial() {
                return Err(Error::InvalidConfig(format!("[{}, {}] is not polynomial", alg.gens[i], alg.gens[j])));
            }
            let mut lin = NCPoly::zero();
            for (w, c) in comm.terms() {
                let p = &c.coeff_of(param, 1) * &ParamPoly::var(param);
                lin.add_term(w.clone(), &p);
            }
            t.set(i, j, lin.to_commutative(&alg.gens))?;
        }
    }
    Ok(t)
}

/// Semiclassical reading of the algebra against a Poisson catalog table on
/// the same coordinate names, pointwise under `plan`.
pub fn semiclassical_compare(alg: &NCAlgebra, entry: &CatalogEntry, param: Param, plan: &SamplePlan) -> Result<Comparison> {
    let t = semiclassical_table(alg, param)?;
    let mut pairs = Vec::new();
    for (a, b, e) in entry.table.pairs() {
        let (x, y) = (&entry.table.coords[a], &entry.table.coords[b]);
        pairs.push((format!("[{x}, {y}]"), t.entry(x, y)?.clone(), e.clone()));
    }
    compare_exprs(&pairs, plan, &entry.guards()?)
}

#[cfg(test)]
mod tests;
