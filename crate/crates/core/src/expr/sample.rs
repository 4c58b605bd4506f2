use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Env, Expr};
use crate::error::{Error, Result};

/// Where and how densely to sample when comparing closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    /// Closed interval per sampled variable.
    pub ranges: BTreeMap<String, (f64, f64)>,
    /// Variables held at a fixed value (typically the deformation parameters).
    pub fixed: BTreeMap<String, f64>,
    /// Points where any guard expression is smaller than this are rejected.
    pub exclusion: f64,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub abs_floor: f64,
}

impl SamplePlan {
    pub fn new(seed: u64) -> Self {
        SamplePlan {
            ranges: BTreeMap::new(),
            fixed: BTreeMap::new(),
            exclusion: 0.05,
            points: 100,
            seed,
            tol: 1e-9,
            abs_floor: 1e-12,
        }
    }

    /// Sample every listed variable uniformly in [−0.7, 0.7].
    pub fn coords<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        for n in names {
            self.ranges.insert(n.as_ref().to_string(), (-0.7, 0.7));
        }
        self
    }

    pub fn range(mut self, name: &str, lo: f64, hi: f64) -> Self {
        self.ranges.insert(name.to_string(), (lo, hi));
        self
    }

    pub fn fix(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_string(), value);
        self
    }

    pub fn points(mut self, n: usize) -> Self {
        self.points = n;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn assigns(&self, var: &str) -> bool {
        self.ranges.contains_key(var) || self.fixed.contains_key(var)
    }

    fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::InvalidConfig("sample plan needs at least one point".into()));
        }
        for (name, (lo, hi)) in &self.ranges {
            if !(lo < hi) {
                return Err(Error::InvalidConfig(format!("degenerate range for `{name}`: [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// Draw `points` assignments avoiding the singular loci of `guards`
    /// (points where a guard is within `exclusion` of zero or fails to
    /// evaluate are redrawn).
    pub fn sample(&self, guards: &[Expr]) -> Result<Vec<Env>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let max_attempts = self.points * 200;
        let mut out = Vec::with_capacity(self.points);
        let mut attempts = 0;
        while out.len() < self.points && attempts < max_attempts {
            attempts += 1;
            let mut env = self.fixed.clone();
            for (name, (lo, hi)) in &self.ranges {
                env.insert(name.clone(), rng.gen_range(*lo..=*hi));
            }
            let ok = guards.iter().all(|g| matches!(g.eval(&env), Ok(v) if v.abs() >= self.exclusion));
            if ok {
                out.push(env);
            }
        }
        if out.is_empty() {
            return Err(Error::AllPointsExcluded { attempts });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivReport {
    pub equal: bool,
    /// max |a − b| / (1 + max(|a|, |b|)) over the sampled points.
    pub max_deviation: f64,
    pub worst_point: Option<Env>,
    pub points: usize,
    pub seed: u64,
}

/// Randomized identity test: `a` and `b` agree when
/// |a − b| ≤ max(tol·(1 + max(|a|,|b|)), abs_floor) at every sampled point.
pub fn equiv_random(a: &Expr, b: &Expr, plan: &SamplePlan) -> Result<EquivReport> {
    let mut vars = a.vars();
    vars.extend(b.vars());
    if let Some(v) = vars.iter().find(|v| !plan.assigns(v)) {
        return Err(Error::UnassignedVariable(v.clone()));
    }
    let mut guards = a.denominators();
    guards.extend(b.denominators());
    let pts = plan.sample(&guards)?;
    let mut report = EquivReport { equal: true, max_deviation: 0.0, worst_point: None, points: pts.len(), seed: plan.seed };
    for env in pts {
        let va = a.eval(&env)?;
        let vb = b.eval(&env)?;
        let diff = (va - vb).abs();
        let scale = 1.0 + va.abs().max(vb.abs());
        let dev = diff / scale;
        if diff > (plan.tol * scale).max(plan.abs_floor) || !diff.is_finite() {
            report.equal = false;
        }
        if dev > report.max_deviation || !dev.is_finite() {
            report.max_deviation = dev;
            report.worst_point = Some(env);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::text::parse;

    fn plan_u() -> SamplePlan {
        SamplePlan::new(7).coords(&["u"])
    }

    #[test]
    fn hyperbolic_identity_holds() {
        let r = equiv_random(&parse("cosh(u)^2 - sinh(u)^2").unwrap(), &Expr::one(), &plan_u()).unwrap();
        assert!(r.equal, "{r:?}");
        assert_eq!(r.points, 100);
    }

    #[test]
    fn tanh_is_not_identity() {
        let plan = SamplePlan::new(7).range("u", 0.5, 1.0);
        let r = equiv_random(&parse("tanh(u)").unwrap(), &parse("u").unwrap(), &plan).unwrap();
        assert!(!r.equal);
        assert!(r.worst_point.is_some());
    }

    #[test]
    fn curved_bracket_reduces_to_flat_one() {
        // −(1/κ)·tanh(ηx³)/η against −(1/κ)·x³ near η = 0
        let eta = 1e-6;
        let plan = SamplePlan::new(3).coords(&["x3"]).fix("kinv", 1.0).fix("Lambda", -eta * eta).tol(1e-4);
        let curved = parse("-kinv*thc(Lambda, x3)").unwrap();
        let flat = parse("-kinv*x3").unwrap();
        assert!(equiv_random(&curved, &flat, &plan).unwrap().equal);
    }

    #[test]
    fn verdict_is_reflexive_and_symmetric() {
        let exprs = ["sinh(u)/u", "u + u^3/6", "exp(u)", "1 + u"];
        let plan = plan_u();
        for a in exprs {
            let ea = parse(a).unwrap();
            assert!(equiv_random(&ea, &ea, &plan).unwrap().equal);
            for b in exprs {
                let eb = parse(b).unwrap();
                let ab = equiv_random(&ea, &eb, &plan).unwrap();
                let ba = equiv_random(&eb, &ea, &plan).unwrap();
                assert_eq!(ab.equal, ba.equal);
                assert_eq!(ab.max_deviation, ba.max_deviation);
            }
        }
    }

    #[test]
    fn fully_excluded_domain_is_an_error() {
        // the whole range sits inside the exclusion zone of 1/w
        let e = Expr::div(Expr::one(), Expr::Var("w".into()));
        let plan = SamplePlan::new(1).range("w", -0.01, 0.01);
        assert!(matches!(equiv_random(&e, &e, &plan), Err(Error::AllPointsExcluded { .. })));
        let unassigned = equiv_random(&parse("q").unwrap(), &Expr::zero(), &plan_u());
        assert!(matches!(unassigned, Err(Error::UnassignedVariable(_))));
    }
}
