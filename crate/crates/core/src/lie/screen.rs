//! Linear screen for r-matrices whose cocommutator maps h into h∧h.
//!
//! The system is solved exactly by fraction-free Gauss–Jordan elimination
//! over ParamPoly: every intermediate entry is a minor of the input, so each
//! division by the previous pivot is exact and the rank is the rank over the
//! field of rational functions in the parameters.

use std::collections::BTreeMap;

use super::{cocommutator_from_r, Bivector, LieAlgebra};
use crate::error::{Error, Result};
use crate::scalar::ParamPoly;

#[derive(Debug, Clone)]
pub struct Screen {
    pub rank: usize,
    pub nullity: usize,
    /// Basis of the solution space.
    pub basis: Vec<Bivector>,
}

impl Screen {
    pub fn contains(&self, r: &Bivector) -> Result<bool> {
        span_contains(&self.basis, r)
    }
}

type Matrix = Vec<Vec<ParamPoly>>;

/// Reduced echelon form (all pivots equal to the last pivot) and pivot columns.
fn fraction_free_rref(mut a: Matrix) -> Result<(Matrix, Vec<usize>, ParamPoly)> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = ParamPoly::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].num_terms()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..cols {
                let v = &(&piv * &a[i][j]) - &(&f * &a[r][j]);
                a[i][j] = v
                    .exact_div(&prev)
                    .ok_or_else(|| Error::Shape(format!("inexact elimination step: ({v}) / ({prev})")))?;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Ok((a, pivots, prev))
}

fn rank(rows: Matrix) -> Result<usize> {
    Ok(fraction_free_rref(rows)?.1.len())
}

/// Exact membership of `r` in the span of `basis`.
pub fn span_contains(basis: &[Bivector], r: &Bivector) -> Result<bool> {
    let mut m: Matrix = basis.iter().map(Bivector::to_vec).collect();
    let before = rank(m.clone())?;
    m.push(r.to_vec());
    Ok(rank(m)? == before)
}

/// Solve `δ_r(h) ⊂ h∧h` for the coefficients of r; linear only.
pub fn subgroup_screen(g: &LieAlgebra) -> Result<Screen> {
    let h = g.subalgebra()?;
    let n = g.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut rows: BTreeMap<(usize, usize, usize), Vec<ParamPoly>> = BTreeMap::new();
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let e = Bivector::from_terms(n, &[(i, j, ParamPoly::one())])?;
        let d = cocommutator_from_r(g, &e)?;
        for &x in &h.h {
            for (a, b, c) in d.image(x).terms() {
                if !h.in_h(a) || !h.in_h(b) {
                    rows.entry((x, a, b)).or_insert_with(|| vec![ParamPoly::zero(); pairs.len()])[p] += c;
                }
            }
        }
    }
    let m: Matrix = rows.into_values().filter(|r| r.iter().any(|c| !c.is_zero())).collect();
    let (red, pivots, d) = if m.is_empty() {
        (Vec::new(), Vec::new(), ParamPoly::one())
    } else {
        fraction_free_rref(m)?
    };
    let mut basis = Vec::new();
    for f in (0..pairs.len()).filter(|c| !pivots.contains(c)) {
        let mut x = vec![ParamPoly::zero(); pairs.len()];
        x[f] = d.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = -&red[row][f];
        }
        // clear the common pivot factor when it divides everything
        if let Some(y) = x.iter().map(|c| c.exact_div(&d)).collect::<Option<Vec<_>>>() {
            x = y;
        }
        let terms: Vec<(usize, usize, ParamPoly)> =
            pairs.iter().zip(x).map(|(&(i, j), c)| (i, j, c)).collect();
        basis.push(Bivector::from_terms(n, &terms)?);
    }
    Ok(Screen { rank: pivots.len(), nullity: pairs.len() - pivots.len(), basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Param};

    fn p(n: i64) -> ParamPoly {
        ParamPoly::int(n)
    }

    #[test]
    fn rank_over_parameter_field() {
        // [[eta, 1], [eta^2, eta]] is singular, [[eta, 1], [1, eta]] is not
        let e = ParamPoly::eta();
        let singular = vec![vec![e.clone(), p(1)], vec![&e * &e, e.clone()]];
        let regular = vec![vec![e.clone(), p(1)], vec![p(1), e.clone()]];
        assert_eq!(rank(singular).unwrap(), 1);
        assert_eq!(rank(regular.clone()).unwrap(), 2);
        // but the regular one drops rank at eta = 1
        let at_one: Matrix =
            regular.iter().map(|r| r.iter().map(|c| c.subs(Param::Eta, &rat(1, 1))).collect()).collect();
        assert_eq!(rank(at_one).unwrap(), 1);
    }

    #[test]
    fn elimination_keeps_entries_polynomial() {
        let e = ParamPoly::eta();
        let k = ParamPoly::kinv();
        let m = vec![
            vec![e.clone(), k.clone(), p(1)],
            vec![k.clone(), &e + &p(2), p(0)],
            vec![&e + &k, &(&k + &e) + &p(2), p(1)],
        ];
        let (_, pivots, _) = fraction_free_rref(m).unwrap();
        assert_eq!(pivots, vec![0, 1]);
    }
}
