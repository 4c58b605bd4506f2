use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::{NumericBracketTable, RANK_EPS};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::expr::{Env, Expr};
use crate::scalar::EtaSplit;

/// Output order of [`ambient_map`].
pub const AMBIENT_NAMES: [&str; 5] = ["s4", "s0", "s1", "s2", "s3"];
const SPACETIME: [&str; 4] = ["x0", "x1", "x2", "x3"];

/// The five ambient functions of (x0..x3, Λ) with their exact gradients.
#[derive(Debug, Clone)]
pub struct AmbientMap {
    funcs: Vec<Expr>,
    grads: Vec<Vec<Expr>>,
}

impl AmbientMap {
    pub fn from_catalog(c: &Catalog) -> Result<AmbientMap> {
        let m = c.map("ambient")?;
        let funcs = AMBIENT_NAMES.iter().map(|n| m.output(n).cloned()).collect::<Result<Vec<_>>>()?;
        let grads = funcs.iter().map(|f| SPACETIME.iter().map(|x| f.diff(x)).collect()).collect();
        Ok(AmbientMap { funcs, grads })
    }

    pub fn builtin() -> &'static AmbientMap {
        static MAP: OnceLock<AmbientMap> = OnceLock::new();
        MAP.get_or_init(|| {
            let c = Catalog::builtin().expect("shipped catalog loads");
            AmbientMap::from_catalog(&c).expect("shipped catalog has the ambient map")
        })
    }

    fn env(x: &[f64; 4], lambda: f64) -> Env {
        let mut env: Env = SPACETIME.iter().zip(x).map(|(n, v)| (n.to_string(), *v)).collect();
        env.insert("Lambda".into(), lambda);
        env
    }

    pub fn eval(&self, x: &[f64; 4], lambda: f64) -> Result<[f64; 5]> {
        let env = Self::env(x, lambda);
        let mut out = [0.0; 5];
        for (o, f) in out.iter_mut().zip(&self.funcs) {
            *o = f.eval(&env)?;
        }
        Ok(out)
    }

    /// 5×4 matrix ∂s^α/∂x^μ, rows in [`AMBIENT_NAMES`] order.
    pub fn jacobian(&self, x: &[f64; 4], lambda: f64) -> Result<DMatrix<f64>> {
        let env = Self::env(x, lambda);
        let mut j = DMatrix::zeros(5, 4);
        for (a, row) in self.grads.iter().enumerate() {
            for (mu, d) in row.iter().enumerate() {
                j[(a, mu)] = d.eval(&env)?;
            }
        }
        Ok(j)
    }

    /// {s^α, s^β} = Σ ∂_μ s^α ∂_ν s^β {x^μ, x^ν}, applied to both η parts.
    pub fn pushforward(&self, table: &NumericBracketTable, x: &[f64; 4], lambda: f64) -> Result<NumericBracketTable> {
        let idx = SPACETIME
            .iter()
            .map(|n| {
                table.coords.iter().position(|c| c == n).ok_or_else(|| Error::UnknownVariable(n.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let j = self.jacobian(x, lambda)?;
        let sv = j.clone().svd(false, false).singular_values;
        if sv.min() <= RANK_EPS * sv.max() {
            return Err(Error::RankDeficient { point: format!("ambient map at {x:?}") });
        }
        let part = |f: fn(&EtaSplit) -> f64| {
            let mut m = DMatrix::zeros(4, 4);
            for mu in 0..4 {
                for nu in 0..4 {
                    m[(mu, nu)] = f(&table.get(idx[mu], idx[nu]));
                }
            }
            &j * m * j.transpose()
        };
        let (even, odd) = (part(|e| e.even), part(|e| e.odd));
        let mut out = NumericBracketTable::zero(AMBIENT_NAMES.iter().map(|s| s.to_string()).collect());
        for a in 0..5 {
            for b in a + 1..5 {
                let v = EtaSplit { even: even[(a, b)], odd: odd[(a, b)] };
                out.entries[a][b] = v;
                out.entries[b][a] = v.scale(-1.0);
            }
        }
        Ok(out)
    }
}

/// (s4, s0, s1, s2, s3) at spacetime point `x`.
pub fn ambient_map(x: &[f64; 4], lambda: f64) -> Result<[f64; 5]> {
    AmbientMap::builtin().eval(x, lambda)
}

/// |s4² − Λ s0² + Λ(s1² + s2² + s3²) − 1| for `s` in [`AMBIENT_NAMES`] order.
pub fn ambient_constraint_check(s: &[f64; 5], lambda: f64) -> f64 {
    let [s4, s0, s1, s2, s3] = *s;
    (s4 * s4 - lambda * s0 * s0 + lambda * (s1 * s1 + s2 * s2 + s3 * s3) - 1.0).abs()
}

pub fn ambient_pushforward(table: &NumericBracketTable, x: &[f64; 4], lambda: f64) -> Result<NumericBracketTable> {
    AmbientMap::builtin().pushforward(table, x, lambda)
}
