//! Linear solving over `Z/p^N` through the diagonal normal form, with an
//! audit margin on every decision.
//!
//! A solve at precision `N` that divides through a pivot `p^e` certifies its
//! answer modulo `p^{N-e}` only; the margin records the worst such `N - e`.

use super::snf::smith_normal_form;
use super::PadicMatrix;
use crate::error::{Error, Result};
use crate::padic::{PadicInt, Valuation};

/// Margin below which finite-precision verdicts deserve a warning.
pub const MARGIN_WARN: u32 = 4;

#[derive(Debug, Clone)]
pub struct AffineSolution {
    /// One solution (deterministic: least non-negative residues through the
    /// fixed pivot rule).
    pub particular: Vec<PadicInt>,
    /// Generators of the direction module `{c : a*c = 0 mod p^N}`: the free
    /// columns of `V` plus the precision-scale directions `p^{N-e} V_t` at
    /// pivots with `0 < e < N`.  The latter vanish in exact `Z_p`; at
    /// precision they are genuine solutions and keep solution sets nested.
    pub kernel: Vec<Vec<PadicInt>>,
    /// `N` minus the largest pivot exponent consumed.
    pub margin: u32,
}

#[derive(Debug, Clone)]
pub enum SystemSolution {
    Solved(AffineSolution),
    Inconsistent { constraint: usize, margin: u32 },
}

/// Describe `{x : a*x = b mod p^N}`.
pub fn solve_unit_system(a: &PadicMatrix, b: &[PadicInt]) -> Result<SystemSolution> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    for x in b {
        if x.p() != a.p() {
            return Err(Error::PrimeMismatch(a.p(), x.p()));
        }
    }
    let n = a.precision();
    let nf = smith_normal_form(a);
    let rhs: Vec<_> = b
        .iter()
        .map(|x| x.with_precision(n).residue().clone())
        .collect();
    let y = nf.u.mul_residue_vec(&rhs)?;
    let exps = nf.pivot_exponents();
    let num_pivots = exps.len();
    let mut margin = n;

    // pivot constraints: w_t * p^{e_t} = y_t
    let mut w = vec![PadicInt::zero(a.p(), n)?; a.cols()];
    for (t, &e) in exps.iter().enumerate() {
        let yt = PadicInt::from_residue(a.p(), y[t].clone(), n);
        match yt.valuation() {
            Valuation::Exact(v) if v < e => {
                return Ok(SystemSolution::Inconsistent {
                    constraint: t,
                    margin: n - v,
                });
            }
            _ => {
                let q = yt.div_exact_p_pow(e)?;
                // lift the quotient back to full precision (any lift solves
                // the constraint mod p^N)
                w[t] = PadicInt::from_residue(a.p(), q.residue().clone(), n);
                margin = margin.min(n - e);
            }
        }
    }
    // beyond the pivots every transformed rhs coordinate must vanish
    for t in num_pivots..a.rows() {
        let yt = PadicInt::from_residue(a.p(), y[t].clone(), n);
        if let Valuation::Exact(v) = yt.valuation() {
            return Ok(SystemSolution::Inconsistent {
                constraint: t,
                margin: n - v,
            });
        }
    }

    let w_res: Vec<_> = w.iter().map(|x| x.residue().clone()).collect();
    let particular =
        nf.v.mul_residue_vec(&w_res)?
            .into_iter()
            .map(|r| PadicInt::from_residue(a.p(), r, n))
            .collect();

    // direction module: free columns of V, plus torsion directions at
    // positive-exponent pivots
    let mut kernel = Vec::new();
    for (t, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let scale = crate::padic::pow_p(a.p(), n - e);
        let col: Vec<PadicInt> = (0..a.cols())
            .map(|i| PadicInt::from_residue(a.p(), nf.v.residue(i, t) * &scale, n))
            .collect();
        if col.iter().any(|x| !x.is_zero_at_precision()) {
            kernel.push(col);
        }
    }
    for t in num_pivots..a.cols() {
        let col: Vec<PadicInt> = (0..a.cols()).map(|i| nf.v.entry(i, t)).collect();
        kernel.push(col);
    }

    Ok(SystemSolution::Solved(AffineSolution {
        particular,
        kernel,
        margin,
    }))
}

#[derive(Debug, Clone)]
pub enum SpanMembership {
    Member {
        /// Coefficients `c` with `c * a = w` mod `p^N`.
        coefficients: Vec<PadicInt>,
        margin: u32,
    },
    NotMember {
        margin: u32,
    },
}

impl SpanMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, SpanMembership::Member { .. })
    }

    pub fn margin(&self) -> u32 {
        match self {
            SpanMembership::Member { margin, .. } | SpanMembership::NotMember { margin } => *margin,
        }
    }
}

/// Is `w` in the `Z_p`-row-span of `a` (decided mod `p^N`)?
pub fn row_span_member(w: &[PadicInt], a: &PadicMatrix) -> Result<SpanMembership> {
    if w.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "row of length {} against {}x{}",
            w.len(),
            a.rows(),
            a.cols()
        )));
    }
    // c * A = w  <=>  A^t c^t = w^t
    match solve_unit_system(&a.transpose(), w)? {
        SystemSolution::Solved(sol) => Ok(SpanMembership::Member {
            coefficients: sol.particular,
            margin: sol.margin,
        }),
        SystemSolution::Inconsistent { margin, .. } => Ok(SpanMembership::NotMember { margin }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn pint(p: u64, v: i64, n: u32) -> PadicInt {
        PadicInt::new(p, v, n).unwrap()
    }

    #[test]
    fn solve_unit_1x1() {
        // 4x = 1 mod 27 -> x = 7, no kernel
        let a = PadicMatrix::from_int_rows(3, 3, &[vec![4]]).unwrap();
        match solve_unit_system(&a, &[pint(3, 1, 3)]).unwrap() {
            SystemSolution::Solved(sol) => {
                assert_eq!(sol.particular[0].residue(), &BigUint::from(7u32));
                assert!(sol.kernel.is_empty());
                assert_eq!(sol.margin, 3);
            }
            other => panic!("expected solution, got {other:?}"),
        }
    }

    #[test]
    fn solve_zero_matrix() {
        let a = PadicMatrix::zero(3, 3, 1, 1);
        match solve_unit_system(&a, &[pint(3, 1, 3)]).unwrap() {
            SystemSolution::Inconsistent { .. } => {}
            other => panic!("expected inconsistent, got {other:?}"),
        }
        match solve_unit_system(&a, &[pint(3, 0, 3)]).unwrap() {
            SystemSolution::Solved(sol) => {
                assert!(sol.particular[0].is_zero_at_precision());
                assert_eq!(sol.kernel.len(), 1);
                assert_eq!(sol.kernel[0][0].residue(), &BigUint::from(1u32));
            }
            other => panic!("expected solution, got {other:?}"),
        }
    }

    #[test]
    fn span_member_examples() {
        // (4,1) in span{(1,7)} mod 27 with c = 4
        let a = PadicMatrix::from_int_rows(3, 3, &[vec![1, 7]]).unwrap();
        match row_span_member(&[pint(3, 4, 3), pint(3, 1, 3)], &a).unwrap() {
            SpanMembership::Member { coefficients, .. } => {
                assert_eq!(coefficients[0].residue(), &BigUint::from(4u32));
            }
            other => panic!("expected member, got {other:?}"),
        }
        // (1,0) is not in span{(1,7)}
        assert!(!row_span_member(&[pint(3, 1, 3), pint(3, 0, 3)], &a)
            .unwrap()
            .is_member());
        // zero row is always in span
        assert!(row_span_member(&[pint(3, 0, 3), pint(3, 0, 3)], &a)
            .unwrap()
            .is_member());
    }

    #[test]
    fn member_coefficients_reproduce_row() {
        let a = PadicMatrix::from_int_rows(3, 5, &[vec![3, 6, 1], vec![0, 9, 12]]).unwrap();
        let w: Vec<PadicInt> = vec![pint(3, 3, 5), pint(3, 15, 5), pint(3, 13, 5)];
        if let SpanMembership::Member { coefficients, .. } = row_span_member(&w, &a).unwrap() {
            // c*A == w
            let mut acc = [pint(3, 0, 5), pint(3, 0, 5), pint(3, 0, 5)];
            for (i, c) in coefficients.iter().enumerate() {
                for j in 0..3 {
                    acc[j] = acc[j].add(&c.mul(&a.entry(i, j)).unwrap()).unwrap();
                }
            }
            for (x, y) in acc.iter().zip(w.iter()) {
                assert_eq!(x, y);
            }
        } else {
            panic!("expected member");
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = PadicMatrix::identity(3, 3, 2);
        assert!(row_span_member(&[pint(3, 1, 3)], &a).is_err());
        assert!(solve_unit_system(&a, &[pint(3, 1, 3)]).is_err());
    }
}
