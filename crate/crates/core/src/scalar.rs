//! Exact scalars: rationals and polynomials in the formal deformation
//! parameters.
//!
//! The parameter list is closed and ordered: `eta`, `kinv` (= 1/κ), `z`, `zp`
//! (= z′). The cosmological constant is not a parameter; it is the derived
//! quantity Λ = −η², so every polynomial here is real-valued on the AdS side
//! and splits into an η-even and η-odd part on the dS side (see [`EtaSplit`]).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // to_f64 only fails on overflow of both parts; fall back to a scaled ratio
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Formal parameters, in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Eta,
    Kinv,
    Z,
    Zp,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::Eta, Param::Kinv, Param::Z, Param::Zp];

    pub fn name(self) -> &'static str {
        match self {
            Param::Eta => "eta",
            Param::Kinv => "kinv",
            Param::Z => "z",
            Param::Zp => "zp",
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Exponent vector over [`Param::ALL`].
pub type Monomial = [u32; 4];

/// Sparse polynomial over ℚ in the formal parameters. No zero coefficient is
/// ever stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, Rational>,
}

/// Numeric values for the formal parameters. η is not stored: it is derived
/// from Λ = −η², and may be imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub lambda: f64,
    pub kinv: f64,
    pub z: f64,
    pub zp: f64,
}

impl ParamPoint {
    pub fn from_eta(eta: f64, kinv: f64) -> Self {
        ParamPoint { lambda: -eta * eta, kinv, z: 0.0, zp: 0.0 }
    }

    pub fn with_z(mut self, z: f64, zp: f64) -> Self {
        self.z = z;
        self.zp = zp;
        self
    }

    /// Real η when Λ ≤ 0 (AdS or flat), `None` for dS.
    pub fn real_eta(&self) -> Option<f64> {
        (self.lambda <= 0.0).then(|| (-self.lambda).sqrt())
    }
}

/// A value of the form `even + η·odd` with η² = −Λ. Both parts are real for
/// every sign of Λ; for Λ ≤ 0 it collapses to a single real number.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EtaSplit {
    pub even: f64,
    pub odd: f64,
}

impl EtaSplit {
    pub fn real(v: f64) -> Self {
        EtaSplit { even: v, odd: 0.0 }
    }

    pub fn value(&self, lambda: f64) -> Option<f64> {
        (lambda <= 0.0).then(|| self.even + (-lambda).sqrt() * self.odd)
    }

    /// Component-wise deviation; comparing both parts is valid for every Λ.
    pub fn max_abs_diff(&self, other: &EtaSplit) -> f64 {
        (self.even - other.even).abs().max((self.odd - other.odd).abs())
    }

    pub fn scale(&self, s: f64) -> EtaSplit {
        EtaSplit { even: self.even * s, odd: self.odd * s }
    }
}

impl Add for EtaSplit {
    type Output = EtaSplit;
    fn add(self, o: EtaSplit) -> EtaSplit {
        EtaSplit { even: self.even + o.even, odd: self.odd + o.odd }
    }
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term([0; 4], c);
        p
    }

    pub fn int(n: i64) -> Self {
        ParamPoly::constant(rat_int(n))
    }

    pub fn var(p: Param) -> Self {
        let mut m = [0; 4];
        m[p.index()] = 1;
        let mut out = ParamPoly::zero();
        out.add_term(m, Rational::one());
        out
    }

    pub fn eta() -> Self {
        ParamPoly::var(Param::Eta)
    }

    pub fn kinv() -> Self {
        ParamPoly::var(Param::Kinv)
    }

    /// Λ = −η².
    pub fn lambda() -> Self {
        -(ParamPoly::eta() * ParamPoly::eta())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, p: Param) -> u32 {
        self.terms.keys().map(|m| m[p.index()]).max().unwrap_or(0)
    }

    /// Coefficient of `p^k`, as a polynomial in the remaining parameters.
    pub fn coeff_of(&self, p: Param, k: u32) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            if m[p.index()] == k {
                let mut m2 = *m;
                m2[p.index()] = 0;
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    /// Substitute a rational value for one parameter.
    pub fn subs(&self, p: Param, value: &Rational) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut m2 = *m;
            let e = m2[p.index()];
            m2[p.index()] = 0;
            let mut f = c.clone();
            for _ in 0..e {
                f *= value;
            }
            out.add_term(m2, f);
        }
        out
    }

    pub fn uses_only(&self, allowed: &[Param]) -> bool {
        self.terms.keys().all(|m| {
            Param::ALL.iter().all(|p| m[p.index()] == 0 || allowed.contains(p))
        })
    }

    /// Evaluate with η² = −Λ, separating the η-even and η-odd parts.
    pub fn eval_split(&self, at: &ParamPoint) -> EtaSplit {
        let neg_lambda = -at.lambda;
        let mut out = EtaSplit::default();
        for (m, c) in &self.terms {
            let mut v = rat_to_f64(c);
            v *= at.kinv.powi(m[1] as i32);
            v *= at.z.powi(m[2] as i32);
            v *= at.zp.powi(m[3] as i32);
            v *= neg_lambda.powi((m[0] / 2) as i32);
            if m[0] % 2 == 0 {
                out.even += v;
            } else {
                out.odd += v;
            }
        }
        out
    }

    /// Plain evaluation with an explicit real η.
    pub fn eval(&self, eta: f64, kinv: f64, z: f64, zp: f64) -> f64 {
        let vals = [eta, kinv, z, zp];
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = rat_to_f64(c);
                for (k, x) in vals.iter().enumerate() {
                    v *= x.powi(m[k] as i32);
                }
                v
            })
            .sum()
    }

    /// Leading monomial under lexicographic order on [`Param::ALL`].
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        let (dm, dc) = divisor.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let (rm, rc) = (*rm, rc.clone());
            if (0..4).any(|k| rm[k] < dm[k]) {
                return None;
            }
            let mut qm = [0; 4];
            for k in 0..4 {
                qm[k] = rm[k] - dm[k];
            }
            let qc = rc / &dc;
            let mut t = ParamPoly::zero();
            t.add_term(qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.iter().all(|e| *e == 0) {
                factors.push(abs.to_string());
            }
            for p in Param::ALL {
                match m[p.index()] {
                    0 => {}
                    1 => factors.push(p.name().to_string()),
                    e => factors.push(format!("{}^{}", p.name(), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, o: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, o: ParamPoly) -> ParamPoly {
        self += &o;
        self
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, o: &ParamPoly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&ParamPoly> for ParamPoly {
    fn sub_assign(&mut self, o: &ParamPoly) {
        for (m, c) in &o.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, o: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(mut self, o: ParamPoly) -> ParamPoly {
        self -= &o;
        self
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -self.clone()
    }
}

impl Mul<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, o: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let mut m = [0; 4];
                for k in 0..4 {
                    m[k] = ma[k] + mb[k];
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, o: ParamPoly) -> ParamPoly {
        &self * &o
    }
}

impl From<i64> for ParamPoly {
    fn from(n: i64) -> Self {
        ParamPoly::int(n)
    }
}

impl From<Rational> for ParamPoly {
    fn from(q: Rational) -> Self {
        ParamPoly::constant(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly_strategy() -> impl Strategy<Value = ParamPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..2, 0u32..2), -5i64..6, 1i64..4), 0..5).prop_map(
            |terms| {
                let mut p = ParamPoly::zero();
                for ((a, b, c, d), n, den) in terms {
                    p.add_term([a, b, c, d], rat(n, den));
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn exact_div_inverts_mul(a in poly_strategy(), b in poly_strategy()) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.exact_div(&b), Some(a));
        }
    }

    #[test]
    fn lambda_split_is_real_on_both_sides() {
        // η² + η·kinv at Λ = +0.25 (dS): even = −0.25, odd = kinv
        let p = &ParamPoly::eta().pow(2) + &(&ParamPoly::eta() * &ParamPoly::kinv());
        let ds = ParamPoint { lambda: 0.25, kinv: 2.0, z: 0.0, zp: 0.0 };
        let s = p.eval_split(&ds);
        assert_eq!(s, EtaSplit { even: -0.25, odd: 2.0 });
        assert_eq!(s.value(ds.lambda), None);
        let ads = ParamPoint::from_eta(0.5, 2.0);
        assert!((p.eval_split(&ads).value(ads.lambda).unwrap() - p.eval(0.5, 2.0, 0.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn display_and_coefficients() {
        let p = &ParamPoly::lambda() * &ParamPoly::kinv();
        assert_eq!(p.to_string(), "-eta^2*kinv");
        assert_eq!(p.coeff_of(Param::Kinv, 1), ParamPoly::lambda());
        assert!(p.coeff_of(Param::Kinv, 0).is_zero());
        assert_eq!(ParamPoly::int(3).subs(Param::Eta, &rat_int(2)), ParamPoly::int(3));
        assert_eq!(ParamPoly::eta().pow(2).subs(Param::Eta, &rat(1, 2)).as_constant(), Some(rat(1, 4)));
    }
}
