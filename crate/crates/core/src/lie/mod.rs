//! Exact structure-constant algebra over [`ParamPoly`].
//!
//! Tensors use full antisymmetric components in the basis: a bivector
//! `Σ_{i<j} c_ij Xi∧Xj` has `r^{ij} = c_ij`, `r^{ji} = −c_ij`, with
//! `Xi∧Xj = Xi⊗Xj − Xj⊗Xi`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Param, ParamPoly, Rational};
use crate::verdict::Verdict;

mod data;
mod screen;

pub use data::{LieData, LieDataFile, RMatrix};
pub use screen::{span_contains, subgroup_screen, Screen};

type Tensor<const R: usize> = BTreeMap<[usize; R], ParamPoly>;

fn accumulate<const R: usize>(t: &mut Tensor<R>, key: [usize; R], v: &ParamPoly) {
    if v.is_zero() {
        return;
    }
    let slot = t.entry(key).or_default();
    *slot += v;
    if slot.is_zero() {
        t.remove(&key);
    }
}

fn tensor_sub<const R: usize>(a: &Tensor<R>, b: &Tensor<R>) -> Tensor<R> {
    let mut out = a.clone();
    for (k, v) in b {
        accumulate(&mut out, *k, &-v);
    }
    out
}

/// Element of a Lie algebra as a dense coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element(pub Vec<ParamPoly>);

impl Element {
    pub fn zero(n: usize) -> Self {
        Element(vec![ParamPoly::zero(); n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut e = Element::zero(n);
        e.0[i] = ParamPoly::one();
        e
    }

    pub fn from_sparse(n: usize, terms: &[(usize, ParamPoly)]) -> Self {
        let mut e = Element::zero(n);
        for (k, c) in terms {
            e.0[*k] += c;
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ParamPoly::is_zero)
    }

    pub fn scale(&self, c: &ParamPoly) -> Element {
        Element(self.0.iter().map(|x| x * c).collect())
    }

    fn sparse(&self) -> Vec<(usize, ParamPoly)> {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect()
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        Element(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        Element(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

/// A declared subalgebra h with its complement t (basis order) and names for
/// the dual coordinates paired with t.
#[derive(Debug, Clone, PartialEq)]
pub struct Subalgebra {
    pub name: String,
    pub h: Vec<usize>,
    pub t: Vec<usize>,
    pub dual: Vec<String>,
}

impl Subalgebra {
    pub fn in_h(&self, i: usize) -> bool {
        self.h.contains(&i)
    }
}

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<String>,
    /// consts[i][j] = sparse [Xi, Xj]
    consts: Vec<Vec<Vec<(usize, ParamPoly)>>>,
    declared: Vec<Subalgebra>,
    active: Option<usize>,
}

impl LieAlgebra {
    /// Build from brackets of basis pairs; `[Xj, Xi]` is filled in by
    /// antisymmetry. Pairs not listed commute.
    pub fn new(name: impl Into<String>, basis: Vec<String>, brackets: &[(usize, usize, Element)]) -> Result<Self> {
        let n = basis.len();
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].contains(b) {
                return Err(Error::InvalidConfig(format!("duplicate generator `{b}`")));
            }
        }
        let mut g = LieAlgebra {
            name: name.into(),
            basis,
            consts: vec![vec![Vec::new(); n]; n],
            declared: Vec::new(),
            active: None,
        };
        let mut seen = BTreeMap::new();
        for (i, j, v) in brackets {
            if *i >= n || *j >= n || v.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.dim().max(*i + 1).max(*j + 1) });
            }
            if i == j {
                if !v.is_zero() {
                    return Err(Error::InvalidConfig(format!("[{0}, {0}] must vanish", g.basis[*i])));
                }
                continue;
            }
            let key = (*i.min(j), *i.max(j));
            let oriented = if i < j { v.clone() } else { Element(v.0.iter().map(|c| -c).collect()) };
            if let Some(prev) = seen.insert(key, oriented.clone()) {
                if prev != oriented {
                    return Err(Error::InvalidConfig(format!(
                        "conflicting values for [{}, {}]",
                        g.basis[key.0], g.basis[key.1]
                    )));
                }
            }
        }
        for ((i, j), v) in seen {
            g.set(i, j, &v);
        }
        Ok(g)
    }

    pub fn abelian(name: impl Into<String>, basis: Vec<String>) -> Result<Self> {
        LieAlgebra::new(name, basis, &[])
    }

    fn set(&mut self, i: usize, j: usize, v: &Element) {
        self.consts[i][j] = v.sparse();
        self.consts[j][i] = v.sparse().into_iter().map(|(k, c)| (k, -c)).collect();
    }

    /// Copy with one bracket replaced (antisymmetric partner included).
    pub fn with_bracket(&self, i: usize, j: usize, v: Element) -> LieAlgebra {
        let mut g = self.clone();
        g.set(i, j, &v);
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn index_of(&self, gen: &str) -> Result<usize> {
        self.basis.iter().position(|b| b == gen).ok_or_else(|| Error::UnknownGenerator(gen.to_string()))
    }

    pub fn gen(&self, name: &str) -> Result<Element> {
        Ok(Element::basis(self.dim(), self.index_of(name)?))
    }

    /// Structure constants of `[Xi, Xj]`.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, ParamPoly)] {
        &self.consts[i][j]
    }

    /// Specialize one parameter (e.g. η = 0 for the flat algebra).
    pub fn subs(&self, p: Param, value: &Rational, name: impl Into<String>) -> LieAlgebra {
        let mut g = self.clone();
        g.name = name.into();
        for row in &mut g.consts {
            for cell in row.iter_mut() {
                *cell = cell.iter().map(|(k, c)| (*k, c.subs(p, value))).filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        g
    }

    /// Declare a subalgebra h; fails unless `[h, h] ⊂ h` exactly.
    pub fn declare_subalgebra(&mut self, name: &str, gens: &[&str], dual: &BTreeMap<String, String>) -> Result<()> {
        let mut h = gens.iter().map(|g| self.index_of(g)).collect::<Result<Vec<_>>>()?;
        h.sort_unstable();
        for &a in &h {
            for &b in &h {
                if let Some((k, _)) = self.consts[a][b].iter().find(|(k, _)| !h.contains(k)) {
                    return Err(Error::InvalidConfig(format!(
                        "`{name}` does not close: [{}, {}] has a {} component",
                        self.basis[a], self.basis[b], self.basis[*k]
                    )));
                }
            }
        }
        let t: Vec<usize> = (0..self.dim()).filter(|i| !h.contains(i)).collect();
        let dual = t
            .iter()
            .map(|&i| dual.get(&self.basis[i]).cloned().unwrap_or_else(|| format!("{}*", self.basis[i])))
            .collect();
        self.declared.retain(|s| s.name != name);
        self.declared.push(Subalgebra { name: name.to_string(), h, t, dual });
        Ok(())
    }

    /// Copy with the named subalgebra selected as h.
    pub fn with_subalgebra(&self, name: &str) -> Result<LieAlgebra> {
        let idx = self
            .declared
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::SubalgebraNotDeclared(format!("{} (no `{name}`)", self.name)))?;
        let mut g = self.clone();
        g.active = Some(idx);
        Ok(g)
    }

    pub fn subalgebra(&self) -> Result<&Subalgebra> {
        self.active.map(|i| &self.declared[i]).ok_or_else(|| Error::SubalgebraNotDeclared(self.name.clone()))
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        let n = self.dim();
        for v in [x, y] {
            if v.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
            }
        }
        let mut out = Element::zero(n);
        for (i, a) in x.0.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.0.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in &self.consts[i][j] {
                    out.0[*k] += &(&ab * c);
                }
            }
        }
        Ok(out)
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Element {
        Element::from_sparse(self.dim(), &self.consts[i][j])
    }

    /// Adjoint action of basis element `x` on every leg of a tensor.
    fn ad<const R: usize>(&self, x: usize, t: &Tensor<R>) -> Tensor<R> {
        let mut out = Tensor::new();
        for (idx, c) in t {
            for leg in 0..R {
                for (k, s) in &self.consts[x][idx[leg]] {
                    let mut key = *idx;
                    key[leg] = *k;
                    accumulate(&mut out, key, &(c * s));
                }
            }
        }
        out
    }

    pub fn format_element(&self, e: &Element) -> String {
        let terms: Vec<(String, ParamPoly)> =
            e.sparse().into_iter().map(|(k, c)| (self.basis[k].clone(), c)).collect();
        format_terms(&terms)
    }

    pub fn format_bivector(&self, r: &Bivector) -> String {
        let terms: Vec<(String, ParamPoly)> =
            r.coeffs.iter().map(|((i, j), c)| (format!("{}^{}", self.basis[*i], self.basis[*j]), c.clone())).collect();
        format_terms(&terms)
    }
}

fn format_terms(terms: &[(String, ParamPoly)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (name, c) in terms {
        let cs = c.to_string();
        let (neg, body) = match cs.strip_prefix('-') {
            Some(rest) if c.num_terms() == 1 => (true, rest.to_string()),
            _ => (false, if c.num_terms() > 1 { format!("({cs})") } else { cs }),
        };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if body != "1" {
            s.push_str(&body);
            s.push('*');
        }
        s.push_str(name);
    }
    s
}

/// Antisymmetric 2-tensor, stored as `c_ij` for `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bivector {
    n: usize,
    coeffs: BTreeMap<(usize, usize), ParamPoly>,
}

impl Bivector {
    pub fn zero(n: usize) -> Self {
        Bivector { n, coeffs: BTreeMap::new() }
    }

    /// Sum of `c · Xa∧Xb`; `a > b` is allowed and flips the sign.
    pub fn from_terms(n: usize, terms: &[(usize, usize, ParamPoly)]) -> Result<Self> {
        let mut r = Bivector::zero(n);
        for (a, b, c) in terms {
            if *a >= n || *b >= n {
                return Err(Error::DimensionMismatch { expected: n, got: (*a).max(*b) + 1 });
            }
            r.add_wedge(*a, *b, c);
        }
        Ok(r)
    }

    /// By generator names.
    pub fn from_named(g: &LieAlgebra, terms: &[(&str, &str, ParamPoly)]) -> Result<Self> {
        let idx = terms
            .iter()
            .map(|(a, b, c)| Ok((g.index_of(a)?, g.index_of(b)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        Bivector::from_terms(g.dim(), &idx)
    }

    fn add_wedge(&mut self, a: usize, b: usize, c: &ParamPoly) {
        if a == b || c.is_zero() {
            return;
        }
        let (key, c) = if a < b { ((a, b), c.clone()) } else { ((b, a), -c) };
        let slot = self.coeffs.entry(key).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Full component r^{ij}.
    pub fn component(&self, i: usize, j: usize) -> ParamPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeffs.get(&(i, j)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => -self.coeffs.get(&(j, i)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Equal => ParamPoly::zero(),
        }
    }

    /// Nonzero `(i, j, c_ij)` with `i < j`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &ParamPoly)> {
        self.coeffs.iter().map(|((i, j), c)| (*i, *j, c))
    }

    pub fn scale(&self, c: &ParamPoly) -> Bivector {
        let mut r = Bivector::zero(self.n);
        for (i, j, v) in self.terms() {
            r.add_wedge(i, j, &(v * c));
        }
        r
    }

    pub fn subs(&self, p: Param, value: &Rational) -> Bivector {
        let mut r = Bivector::zero(self.n);
        for (i, j, v) in self.terms() {
            r.add_wedge(i, j, &v.subs(p, value));
        }
        r
    }

    /// Coefficients as a length-n(n−1)/2 vector in (i<j) lexicographic order.
    pub fn to_vec(&self) -> Vec<ParamPoly> {
        let mut out = Vec::with_capacity(self.n * (self.n.saturating_sub(1)) / 2);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.component(i, j));
            }
        }
        out
    }

    fn full(&self) -> Tensor<2> {
        let mut t = Tensor::new();
        for (i, j, c) in self.terms() {
            t.insert([i, j], c.clone());
            t.insert([j, i], -c);
        }
        t
    }

    /// Compress a full 2-tensor; `None` unless it is antisymmetric.
    fn from_full(n: usize, t: &Tensor<2>) -> Option<Bivector> {
        let mut r = Bivector::zero(n);
        for ([i, j], c) in t {
            if i == j {
                return None;
            }
            let partner = t.get(&[*j, *i]).cloned().unwrap_or_default();
            if &partner != &-c {
                return None;
            }
            if i < j {
                r.coeffs.insert((*i, *j), c.clone());
            }
        }
        Some(r)
    }
}

impl Add for &Bivector {
    type Output = Bivector;
    fn add(self, o: &Bivector) -> Bivector {
        let mut r = self.clone();
        for (i, j, c) in o.terms() {
            r.add_wedge(i, j, c);
        }
        r
    }
}

impl Neg for &Bivector {
    type Output = Bivector;
    fn neg(self) -> Bivector {
        self.scale(&ParamPoly::int(-1))
    }
}

/// Totally antisymmetric 3-tensor, stored with all nonzero full components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trivector {
    n: usize,
    full: Tensor<3>,
}

impl Trivector {
    pub fn is_zero(&self) -> bool {
        self.full.is_empty()
    }

    pub fn component(&self, i: usize, j: usize, k: usize) -> ParamPoly {
        self.full.get(&[i, j, k]).cloned().unwrap_or_default()
    }

    /// Checks `t^{σ(ijk)} = sgn(σ) t^{ijk}` for every stored entry.
    pub fn is_totally_antisymmetric(&self) -> bool {
        self.full.iter().all(|([i, j, k], c)| {
            i != j
                && j != k
                && i != k
                && self.component(*j, *i, *k) == -c
                && self.component(*i, *k, *j) == -c
                && self.component(*k, *j, *i) == -c
        })
    }

    /// Nonzero components with `i < j < k`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, usize, &ParamPoly)> {
        self.full.iter().filter(|([i, j, k], _)| i < j && j < k).map(|([i, j, k], c)| (*i, *j, *k, c))
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

/// δ as the list of its values on basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocommutator {
    images: Vec<Bivector>,
}

impl Cocommutator {
    pub fn zero(n: usize) -> Self {
        Cocommutator { images: vec![Bivector::zero(n); n] }
    }

    pub fn from_images(images: Vec<Bivector>) -> Result<Self> {
        let n = images.len();
        if let Some(b) = images.iter().find(|b| b.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
        }
        Ok(Cocommutator { images })
    }

    /// Zero except on the listed generators.
    pub fn sparse(g: &LieAlgebra, values: &[(&str, Bivector)]) -> Result<Self> {
        let mut d = Cocommutator::zero(g.dim());
        for (name, b) in values {
            d.images[g.index_of(name)?] = b.clone();
        }
        Ok(d)
    }

    pub fn image(&self, i: usize) -> &Bivector {
        &self.images[i]
    }

    pub fn images(&self) -> &[Bivector] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Bivector::is_zero)
    }
}

impl Add for &Cocommutator {
    type Output = Cocommutator;
    fn add(self, o: &Cocommutator) -> Cocommutator {
        Cocommutator { images: self.images.iter().zip(&o.images).map(|(a, b)| a + b).collect() }
    }
}

fn check_dim(g: &LieAlgebra, n: usize) -> Result<()> {
    if n != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: n });
    }
    Ok(())
}

/// Exact Jacobi identity over all basis triples.
pub fn jacobi_check(g: &LieAlgebra) -> Verdict {
    let n = g.dim();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut sum = Element::zero(n);
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (m, s) in g.structure(a, b) {
                        sum = &sum + &g.bracket_basis(*m, c).scale(s);
                    }
                }
                if !sum.is_zero() {
                    return Verdict::fail(format!(
                        "({}, {}, {}): cyclic sum = {}",
                        g.basis[i],
                        g.basis[j],
                        g.basis[k],
                        g.format_element(&sum)
                    ));
                }
            }
        }
    }
    Verdict::Pass
}

/// δ(X) = [X⊗1 + 1⊗X, r] on each basis element.
pub fn cocommutator_from_r(g: &LieAlgebra, r: &Bivector) -> Result<Cocommutator> {
    check_dim(g, r.dim())?;
    let full = r.full();
    let images = (0..g.dim())
        .map(|x| Bivector::from_full(g.dim(), &g.ad(x, &full)).expect("adjoint action preserves antisymmetry"))
        .collect();
    Ok(Cocommutator { images })
}

/// δ([Xi,Xj]) = ad_Xi δ(Xj) − ad_Xj δ(Xi) for every pair.
pub fn cocycle_check(g: &LieAlgebra, d: &Cocommutator) -> Result<Verdict> {
    check_dim(g, d.images.len())?;
    let n = g.dim();
    let fulls: Vec<Tensor<2>> = d.images.iter().map(Bivector::full).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut lhs = Tensor::new();
            for (k, c) in g.structure(i, j) {
                for (key, v) in &fulls[*k] {
                    accumulate(&mut lhs, *key, &(v * c));
                }
            }
            let rhs = tensor_sub(&g.ad(i, &fulls[j]), &g.ad(j, &fulls[i]));
            let diff = tensor_sub(&lhs, &rhs);
            if let Some(([a, b], c)) = diff.iter().next() {
                return Ok(Verdict::fail(format!(
                    "pair ({}, {}): mismatch {} on {}⊗{}",
                    g.basis[i], g.basis[j], c, g.basis[*a], g.basis[*b]
                )));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// [[r, r]] from the three-term expansion with r₁₂, r₁₃, r₂₃.
pub fn schouten(g: &LieAlgebra, r: &Bivector) -> Result<Trivector> {
    check_dim(g, r.dim())?;
    let full = r.full();
    let mut t = Tensor::new();
    for ([i, j], a) in &full {
        for ([k, l], b) in &full {
            let ab = a * b;
            for (m, s) in g.structure(*i, *k) {
                accumulate(&mut t, [*m, *j, *l], &(&ab * s));
            }
            for (m, s) in g.structure(*j, *k) {
                accumulate(&mut t, [*i, *m, *l], &(&ab * s));
            }
            for (m, s) in g.structure(*j, *l) {
                accumulate(&mut t, [*i, *k, *m], &(&ab * s));
            }
        }
    }
    Ok(Trivector { n: g.dim(), full: t })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum YangBaxter {
    /// [[r,r]] = 0
    Triangular,
    /// [[r,r]] ≠ 0 but ad-invariant
    Quasitriangular,
    NotABialgebra { witness: String },
}

pub fn mcybe_check(g: &LieAlgebra, r: &Bivector) -> Result<YangBaxter> {
    let s = schouten(g, r)?;
    if s.is_zero() {
        return Ok(YangBaxter::Triangular);
    }
    for x in 0..g.dim() {
        let moved = g.ad(x, &s.full);
        if let Some(([a, b, c], v)) = moved.iter().next() {
            return Ok(YangBaxter::NotABialgebra {
                witness: format!(
                    "ad_{} [[r,r]] has {} on {}⊗{}⊗{}",
                    g.basis[x], v, g.basis[*a], g.basis[*b], g.basis[*c]
                ),
            });
        }
    }
    Ok(YangBaxter::Quasitriangular)
}

fn component_witness(g: &LieAlgebra, x: usize, a: usize, b: usize, c: &ParamPoly) -> String {
    format!("δ({}) has {}^{} component {}", g.basis[x], g.basis[a], g.basis[b], c)
}

/// δ(h) ⊂ h∧g: no t∧t component in the image of any h generator.
pub fn coisotropy_check(g: &LieAlgebra, d: &Cocommutator) -> Result<Verdict> {
    check_dim(g, d.images.len())?;
    let h = g.subalgebra()?;
    for &x in &h.h {
        if let Some((a, b, c)) = d.images[x].terms().find(|(a, b, _)| !h.in_h(*a) && !h.in_h(*b)) {
            return Ok(Verdict::fail(component_witness(g, x, a, b, c)));
        }
    }
    Ok(Verdict::Pass)
}

/// δ(h) ⊂ h∧h: every component touching t vanishes.
pub fn subgroup_check(g: &LieAlgebra, d: &Cocommutator) -> Result<Verdict> {
    check_dim(g, d.images.len())?;
    let h = g.subalgebra()?;
    for &x in &h.h {
        if let Some((a, b, c)) = d.images[x].terms().find(|(a, b, _)| !h.in_h(*a) || !h.in_h(*b)) {
            return Ok(Verdict::fail(component_witness(g, x, a, b, c)));
        }
    }
    Ok(Verdict::Pass)
}

/// First-order noncommutative space: the Lie algebra on the dual
/// coordinates t̂^j, `[t̂^j, t̂^k] = Σ_m δ(T_m)^{jk} t̂^m`.
pub fn annihilator_first_order(g: &LieAlgebra, d: &Cocommutator) -> Result<LieAlgebra> {
    if let Verdict::Fail(w) = coisotropy_check(g, d)? {
        return Err(Error::CoisotropyFailed(w));
    }
    let h = g.subalgebra()?;
    let m = h.t.len();
    let mut brackets = Vec::new();
    for (jj, &j) in h.t.iter().enumerate() {
        for (kk, &k) in h.t.iter().enumerate().skip(jj + 1) {
            let mut v = Element::zero(m);
            for (mm, &tm) in h.t.iter().enumerate() {
                v.0[mm] = d.images[tm].component(j, k);
            }
            if !v.is_zero() {
                brackets.push((jj, kk, v));
            }
        }
    }
    LieAlgebra::new(format!("{}/{} first order", g.name, h.name), h.dual.clone(), &brackets)
}

impl fmt::Display for YangBaxter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YangBaxter::Triangular => write!(f, "triangular"),
            YangBaxter::Quasitriangular => write!(f, "quasitriangular"),
            YangBaxter::NotABialgebra { witness } => write!(f, "not a bialgebra: {witness}"),
        }
    }
}
