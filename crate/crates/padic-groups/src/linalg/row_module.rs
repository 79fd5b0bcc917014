//! Row modules over `Z/p^N` in canonical form, and the stabilized row
//! module of powers of an integer matrix.
//!
//! The canonical representative is the Howell form: an echelon basis closed
//! under the completion rows `p^{N-e} * (pivot row)`, pivots normalized to
//! pure powers of `p`, entries above each pivot reduced mod the pivot.  Two
//! modules are equal mod `p^N` iff their Howell forms are literally equal,
//! which turns module comparison into matrix comparison.

use super::solve::{row_span_member, SpanMembership};
use super::PadicMatrix;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::padic::{pow_p, val_of_biguint, Valuation};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Echelon worklist for rows over `Z/p^N`.
struct HowellBuilder {
    p: u64,
    precision: u32,
    cols: usize,
    modulus: BigUint,
    /// pivot column -> (pivot exponent, normalized row)
    pivots: BTreeMap<usize, (u32, Vec<BigUint>)>,
}

impl HowellBuilder {
    fn new(p: u64, precision: u32, cols: usize) -> Self {
        HowellBuilder {
            p,
            precision,
            cols,
            modulus: pow_p(p, precision),
            pivots: BTreeMap::new(),
        }
    }

    fn val(&self, x: &BigUint) -> Valuation {
        val_of_biguint(x, self.p, self.precision)
    }

    /// Insert a row, returning the pivot columns that were created or
    /// replaced (their completion rows need reprocessing).
    fn insert(&mut self, row: Vec<BigUint>) -> Vec<usize> {
        let mut w: Vec<BigUint> = row.into_iter().map(|x| x % &self.modulus).collect();
        let mut touched = Vec::new();
        loop {
            let lead = (0..self.cols).find(|&c| self.val(&w[c]).exact().is_some());
            let Some(c) = lead else { return touched };
            let e = self.val(&w[c]).exact().expect("lead has exact valuation");
            match self.pivots.get(&c) {
                None => {
                    self.normalize(&mut w, c, e);
                    self.pivots.insert(c, (e, w));
                    touched.push(c);
                    return touched;
                }
                Some((e0, b)) => {
                    if e >= *e0 {
                        let f = &w[c] / pow_p(self.p, *e0);
                        let b = b.clone();
                        for (x, y) in w.iter_mut().zip(b.iter()) {
                            let sub = (&f * y) % &self.modulus;
                            *x = (&*x + &self.modulus - sub) % &self.modulus;
                        }
                    } else {
                        // strictly better pivot: swap in, re-insert the old row
                        self.normalize(&mut w, c, e);
                        let (_, old) = self.pivots.insert(c, (e, w)).expect("pivot existed");
                        touched.push(c);
                        w = old;
                    }
                }
            }
        }
    }

    fn normalize(&self, w: &mut [BigUint], c: usize, e: u32) {
        let unit = &w[c] / pow_p(self.p, e);
        let inv = mod_inverse(&unit, &self.modulus);
        for x in w.iter_mut() {
            *x = (&*x * &inv) % &self.modulus;
        }
        debug_assert_eq!(w[c], pow_p(self.p, e));
    }

    /// Saturate with completion rows so the span mod `p^N` is fully
    /// reflected in the echelon structure.
    fn complete(&mut self) {
        let mut queue: Vec<usize> = self.pivots.keys().copied().collect();
        while let Some(c) = queue.pop() {
            let Some((e, row)) = self.pivots.get(&c) else {
                continue;
            };
            if *e == 0 {
                continue;
            }
            let scale = pow_p(self.p, self.precision - *e);
            let mut extra: Vec<BigUint> =
                row.iter().map(|x| (x * &scale) % &self.modulus).collect();
            extra[c] = BigUint::zero(); // leading term vanishes mod p^N
            if extra.iter().all(|x| x.is_zero()) {
                continue;
            }
            queue.extend(self.insert(extra));
        }
    }

    /// Reduce entries above each pivot (left-to-right so later columns are
    /// cleaned up after earlier reductions disturb them) and return the
    /// canonical rows sorted by pivot column.
    fn canonical_rows(mut self) -> Vec<(usize, u32, Vec<BigUint>)> {
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        for &ci in &cols {
            let (e_i, row_i) = self.pivots[&ci].clone();
            let p_pow = pow_p(self.p, e_i);
            for &ck in &cols {
                if ck == ci {
                    continue;
                }
                let (e_k, mut row_k) = self.pivots[&ck].clone();
                let q = &row_k[ci] / &p_pow;
                if !q.is_zero() {
                    for (x, y) in row_k.iter_mut().zip(row_i.iter()) {
                        let sub = (&q * y) % &self.modulus;
                        *x = (&*x + &self.modulus - sub) % &self.modulus;
                    }
                    self.pivots.insert(ck, (e_k, row_k));
                }
            }
        }
        cols.into_iter()
            .map(|c| {
                let (e, row) = self.pivots[&c].clone();
                (c, e, row)
            })
            .collect()
    }
}

fn mod_inverse(a: &BigUint, modulus: &BigUint) -> BigUint {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Signed;
    let a = BigInt::from(a.clone());
    let m = BigInt::from(modulus.clone());
    let ext = a.extended_gcd(&m);
    let mut inv = ext.x.mod_floor(&m);
    if inv.is_negative() {
        inv += &m;
    }
    inv.to_biguint().expect("reduced")
}

/// A `Z/p^N` row module with a minimal basis and a canonical (Howell)
/// representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowModule {
    basis: PadicMatrix,
    canonical: PadicMatrix,
}

impl RowModule {
    pub fn from_generators(p: u64, precision: u32, rows: Vec<Vec<BigUint>>, cols: usize) -> Self {
        let mut hb = HowellBuilder::new(p, precision, cols);
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            hb.insert(r);
        }
        hb.complete();
        let canon = hb.canonical_rows();
        let canonical_rows: Vec<Vec<BigUint>> = canon.iter().map(|(_, _, r)| r.clone()).collect();
        let canonical = PadicMatrix::from_residue_rows(p, precision, canonical_rows.clone())
            .unwrap_or_else(|_| PadicMatrix::zero(p, precision, 0, cols));
        let canonical = if canonical.rows() == 0 {
            PadicMatrix::zero(p, precision, 0, cols)
        } else {
            canonical
        };

        // minimal basis: greedily drop canonical rows spanned by the others
        let mut kept = canonical_rows;
        loop {
            let mut dropped = false;
            for i in 0..kept.len() {
                let mut others = kept.clone();
                let cand = others.remove(i);
                if Self::rows_contain(p, precision, &others, cols, &cand) {
                    kept.remove(i);
                    dropped = true;
                    break;
                }
            }
            if !dropped {
                break;
            }
        }
        let basis = if kept.is_empty() {
            PadicMatrix::zero(p, precision, 0, cols)
        } else {
            PadicMatrix::from_residue_rows(p, precision, kept).expect("rectangular")
        };
        RowModule { basis, canonical }
    }

    pub fn from_padic_matrix(m: &PadicMatrix) -> Self {
        let rows = (0..m.rows()).map(|i| m.row_residues(i)).collect();
        Self::from_generators(m.p(), m.precision(), rows, m.cols())
    }

    fn rows_contain(
        p: u64,
        precision: u32,
        rows: &[Vec<BigUint>],
        _cols: usize,
        w: &[BigUint],
    ) -> bool {
        if rows.is_empty() {
            return w
                .iter()
                .all(|x| val_of_biguint(x, p, precision).exact().is_none());
        }
        let m = PadicMatrix::from_residue_rows(p, precision, rows.to_vec()).expect("rect");
        let w: Vec<_> = w
            .iter()
            .map(|x| crate::padic::PadicInt::from_residue(p, x.clone(), precision))
            .collect();
        matches!(row_span_member(&w, &m), Ok(SpanMembership::Member { .. }))
    }

    pub fn p(&self) -> u64 {
        self.basis.p()
    }

    pub fn precision(&self) -> u32 {
        self.basis.precision()
    }

    pub fn cols(&self) -> usize {
        self.canonical.cols()
    }

    /// Minimal generating set (a `Z_p`-basis of the module).
    pub fn basis(&self) -> &PadicMatrix {
        &self.basis
    }

    /// Canonical Howell representative; equal modules have equal matrices.
    pub fn canonical(&self) -> &PadicMatrix {
        &self.canonical
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    pub fn contains(&self, w: &[crate::padic::PadicInt]) -> Result<bool> {
        if self.basis.rows() == 0 {
            return Ok(w
                .iter()
                .all(|x| x.with_precision(self.precision()).is_zero_at_precision()));
        }
        Ok(row_span_member(w, &self.basis)?.is_member())
    }

    pub fn module_eq(&self, other: &RowModule) -> bool {
        self.canonical == other.canonical
    }
}

/// The stabilized module `⋂_n rowspan_{Z_p}(A^n)` mod `p^N` for a
/// nonsingular integer matrix `A`.
///
/// The chain `rowspan(A^{n+1}) ⊆ rowspan(A^n)` is decreasing, so its mod
/// `p^N` reductions stabilize.  Contracting eigenvalues have valuation at
/// least `1/r`, so the contracting component drops below `p^N` within
/// `N*r` steps; stabilization is certified once the canonical form is
/// unchanged for `r` consecutive powers past that bound.
pub fn stable_row_module(a: &IntMatrix, p: u64, precision: u32) -> Result<RowModule> {
    if !a.is_square() {
        return Err(Error::NotSquare);
    }
    if a.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let r = a.rows();
    let modulus = pow_p(p, precision);
    let mut power = IntMatrix::identity(r);
    let mut prev: Option<RowModule> = None;
    let mut streak = 0usize;
    let mut n = 0u32;
    loop {
        n += 1;
        power = power.mul_mod(a, &modulus)?;
        let reduced = power.reduce_mod_pn(p, precision);
        let module = RowModule::from_padic_matrix(&reduced);
        match &prev {
            Some(m) if m.module_eq(&module) => streak += 1,
            _ => {
                streak = 0;
                prev = Some(module);
            }
        }
        if streak >= r && n as usize >= precision as usize * r {
            return Ok(prev.expect("set above"));
        }
    }
}
