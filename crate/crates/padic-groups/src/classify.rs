//! Homomorphism and isomorphism verification between factored forms,
//! rank-1 type classification, double-dual evaluation, and the invariant
//! factors of the finite quotients `G/p^k G`.
//!
//! Conventions: a rational matrix `V` represents the map `v -> V v` from
//! the first group into the second.  `V` is a homomorphism iff every row of
//! `B_p V` lies in the `Z_p`-row-span of `A_p`; it is an isomorphism iff in
//! addition the spans coincide (then the change of dual basis `U_p` exists
//! and is invertible over `Z_p`).  The Gram-inverse route for `U_p` is kept
//! as an optional cross-check because full-row-rank matrices over `Q_p` can
//! have singular Gram matrices; mutual span membership never divides.

use crate::error::{Error, Result};
use crate::group::{parse_rational, DualView, FactoredForm, GroupElement};
use crate::intmat::factor_primes;
use crate::linalg::{row_span_member, PadicMatrix, RowModule, SpanMembership};
use crate::padic::{pow_p, val_of_biguint, PadicInt};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// An exact rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged or empty matrix".into()));
        }
        Ok(RationalMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from(BigInt::from(x)))
                        .collect()
                })
                .collect(),
        )
    }

    /// Parse entries given as strings like `"1/9"` or `"-2"`.
    pub fn from_str_rows(rows: &[Vec<String>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigRational::one();
        }
        RationalMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.entry(i, k) * other.entry(k, j);
                }
                data.push(acc);
            }
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn apply(&self, v: &GroupElement) -> Result<GroupElement> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector shapes".into()));
        }
        Ok(GroupElement::new(
            (0..self.rows)
                .map(|i| {
                    let mut acc = BigRational::zero();
                    for k in 0..self.cols {
                        acc += self.entry(i, k) * &v.coords()[k];
                    }
                    acc
                })
                .collect(),
        ))
    }

    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero());
            let Some(pr) = pivot else {
                return Ok(BigRational::zero());
            };
            if pr != col {
                for j in 0..n {
                    a.swap(pr * n + j, col * n + j);
                }
                det = -det;
            }
            let piv = a[col * n + col].clone();
            det *= &piv;
            for r in (col + 1)..n {
                let f = &a[r * n + col] / &piv;
                if !f.is_zero() {
                    for j in col..n {
                        let sub = &f * &a[col * n + j];
                        a[r * n + j] -= sub;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = RationalMatrix::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero());
            let Some(pr) = pivot else {
                return Err(Error::SingularMatrix);
            };
            if pr != col {
                for j in 0..n {
                    a.swap(pr * n + j, col * n + j);
                    inv.swap(pr * n + j, col * n + j);
                }
            }
            let piv = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] /= &piv;
                inv[col * n + j] /= &piv;
            }
            for r in 0..n {
                if r != col && !a[r * n + col].is_zero() {
                    let f = a[r * n + col].clone();
                    for j in 0..n {
                        let s = &f * &a[col * n + j];
                        a[r * n + j] -= s;
                        let s = &f * &inv[col * n + j];
                        inv[r * n + j] -= s;
                    }
                }
            }
        }
        Ok(RationalMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// Distinct primes dividing any entry denominator.
    pub fn denominator_primes(&self) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for x in &self.data {
            out.extend(factor_primes(&x.denom().abs().to_biguint().expect("abs"))?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn max_denominator_valuation(&self, p: u64) -> u32 {
        let p_big = BigInt::from(p);
        self.data
            .iter()
            .map(|x| {
                let mut v = 0u32;
                let mut d = x.denom().clone();
                while (&d % &p_big).is_zero() {
                    d /= &p_big;
                    v += 1;
                }
                v
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.entry(i, j).to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Machine-readable verdict with an audit margin.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub verdict: bool,
    pub checked_primes: Vec<u64>,
    pub min_margin: Option<u32>,
    pub precision: u32,
}

/// Materialize the dual at `p` as an actual matrix at the given precision.
fn dual_as_matrix(form: &FactoredForm, p: u64, precision: u32) -> PadicMatrix {
    match form.dual_view(p) {
        DualView::Identity => PadicMatrix::identity(p, precision, form.rank()),
        DualView::Zero => PadicMatrix::zero(p, precision, 1, form.rank()),
        DualView::Matrix(m) => m.with_precision(precision),
    }
}

/// Rows of `B_p * V` as residues mod `p^{N - d}` where `d` is the
/// denominator depth of `V` at `p`; `None` when some row is non-integral
/// (which certifies a failed check).
fn dual_times_v(
    form_b: &FactoredForm,
    p: u64,
    v: &RationalMatrix,
    precision: u32,
) -> Result<std::result::Result<(PadicMatrix, u32), ()>> {
    let d = v.max_denominator_valuation(p);
    if d > 0 && d + crate::group::SAFETY_MARGIN > precision {
        return Err(Error::PrecisionExhausted {
            needed: d + crate::group::SAFETY_MARGIN,
            available: precision,
        });
    }
    let b = dual_as_matrix(form_b, p, precision);
    // p^d * V as residues mod p^N
    let modulus = BigInt::from(pow_p(p, precision));
    let p_big = BigInt::from(p);
    let mut scaled_rows: Vec<Vec<BigUint>> = Vec::with_capacity(v.rows());
    for i in 0..v.rows() {
        let mut row = Vec::with_capacity(v.cols());
        for j in 0..v.cols() {
            let x = v.entry(i, j);
            let mut num = x.numer() * p_big.pow(d);
            let mut den = x.denom().clone();
            while (&den % &p_big).is_zero() {
                den /= &p_big;
                num /= &p_big;
            }
            let inv = mod_inverse_bigint(&den, &modulus);
            let mut r = (num * inv).mod_floor(&modulus);
            if r.is_negative() {
                r += &modulus;
            }
            row.push(r.to_biguint().expect("reduced"));
        }
        scaled_rows.push(row);
    }
    let v_scaled = PadicMatrix::from_residue_rows(p, precision, scaled_rows)?;
    let prod = b.mul(&v_scaled)?;
    // every entry must be divisible by p^d for B_p V to be integral
    let reduced_precision = precision - d;
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(prod.rows());
    for i in 0..prod.rows() {
        let mut row = Vec::with_capacity(prod.cols());
        for j in 0..prod.cols() {
            let w = prod.residue(i, j);
            if !val_of_biguint(w, p, precision).is_at_least(d) {
                return Ok(Err(()));
            }
            row.push(w / pow_p(p, d));
        }
        rows.push(row);
    }
    Ok(Ok((
        PadicMatrix::from_residue_rows(p, reduced_precision, rows)?,
        reduced_precision,
    )))
}

fn mod_inverse_bigint(a: &BigInt, modulus: &BigInt) -> BigInt {
    let ext = a.extended_gcd(modulus);
    let mut inv = ext.x.mod_floor(modulus);
    if inv.is_negative() {
        inv += modulus;
    }
    inv
}

/// Primes at which a homomorphism check can fail: exceptional support of
/// both forms plus denominator primes of `V`.  Everywhere else both duals
/// are identities and `V` is p-integral, so the row condition holds.
fn hom_relevant_primes(
    ffa: &FactoredForm,
    ffb: &FactoredForm,
    v: &RationalMatrix,
) -> Result<Vec<u64>> {
    let mut primes = ffa.exceptional_primes();
    primes.extend(ffb.exceptional_primes());
    primes.extend(v.denominator_primes()?);
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// Does `v -> V v` map `G(ffa)` into `G(ffb)`?
pub fn hom_check(ffa: &FactoredForm, ffb: &FactoredForm, v: &RationalMatrix) -> Result<Verdict> {
    if v.rows() != ffb.rank() || v.cols() != ffa.rank() {
        return Err(Error::DimensionMismatch(format!(
            "V is {}x{}, expected {}x{}",
            v.rows(),
            v.cols(),
            ffb.rank(),
            ffa.rank()
        )));
    }
    let precision = ffa.precision().min(ffb.precision());
    let primes = hom_relevant_primes(ffa, ffb, v)?;
    let mut min_margin: Option<u32> = None;
    let mut verdict = true;
    for &p in &primes {
        if matches!(ffb.dual_view(p), DualView::Zero) {
            continue; // B_p V = 0 lies in every span
        }
        let (bv, reduced_precision) = match dual_times_v(ffb, p, v, precision)? {
            Ok(pair) => pair,
            Err(()) => {
                verdict = false;
                continue;
            }
        };
        match ffa.dual_view(p) {
            DualView::Identity => {
                // full span: integrality (already certified) suffices
                min_margin =
                    Some(min_margin.map_or(reduced_precision, |m| m.min(reduced_precision)));
            }
            DualView::Zero => {
                for i in 0..bv.rows() {
                    for j in 0..bv.cols() {
                        if !bv.entry(i, j).is_zero_at_precision() {
                            verdict = false;
                        }
                    }
                }
                min_margin =
                    Some(min_margin.map_or(reduced_precision, |m| m.min(reduced_precision)));
            }
            DualView::Matrix(a) => {
                let a = a.with_precision(reduced_precision);
                for i in 0..bv.rows() {
                    let row = bv.row(i);
                    match row_span_member(&row, &a)? {
                        SpanMembership::Member { margin, .. } => {
                            min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
                        }
                        SpanMembership::NotMember { margin } => {
                            verdict = false;
                            min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict {
        verdict,
        checked_primes: primes,
        min_margin,
        precision,
    })
}

/// Does `v -> V v` carry `G(ffa)` isomorphically onto `G(ffb)`?
///
/// Checked as: equal dual ranks at every relevant prime, and equality of
/// the `Z_p`-row-spans of `B_p V` and `A_p` (mod `p^N`), prime by prime.
pub fn iso_check(ffa: &FactoredForm, ffb: &FactoredForm, v: &RationalMatrix) -> Result<Verdict> {
    if !v.is_square() || v.rows() != ffb.rank() || v.cols() != ffa.rank() {
        return Err(Error::DimensionMismatch(format!(
            "V is {}x{}, expected square {}x{}",
            v.rows(),
            v.cols(),
            ffb.rank(),
            ffa.rank()
        )));
    }
    let det = v.det()?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let precision = ffa.precision().min(ffb.precision());
    let mut primes = hom_relevant_primes(ffa, ffb, v)?;
    primes.extend(factor_primes(
        &det.numer().abs().to_biguint().expect("abs"),
    )?);
    primes.sort_unstable();
    primes.dedup();

    let mut min_margin: Option<u32> = None;
    let mut verdict = true;
    for &p in &primes {
        if ffa.dual_rank(p) != ffb.dual_rank(p) {
            verdict = false;
            continue;
        }
        if ffa.dual_rank(p) == 0 {
            continue; // both zero duals
        }
        let (bv, reduced_precision) = match dual_times_v(ffb, p, v, precision)? {
            Ok(pair) => pair,
            Err(()) => {
                verdict = false;
                continue;
            }
        };
        let a = dual_as_matrix(ffa, p, reduced_precision);
        let module_a = RowModule::from_padic_matrix(&a);
        let module_bv = RowModule::from_padic_matrix(&bv);
        if !module_a.module_eq(&module_bv) {
            verdict = false;
        }
        let worst_pivot = module_a
            .canonical()
            .row_pivot_exponents()
            .into_iter()
            .chain(module_bv.canonical().row_pivot_exponents())
            .max()
            .unwrap_or(0);
        let margin = reduced_precision.saturating_sub(worst_pivot);
        min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
    }
    Ok(Verdict {
        verdict,
        checked_primes: primes,
        min_margin,
        precision,
    })
}

/// Optional cross-check from the Gram-inverse identity: recover
/// `U_p^{-1} = A_p V B_p^t (B_p B_p^t)^{-1}` and test invertibility over
/// `Z_p`.  Only applicable when `det(B_p B_p^t)` is a unit at precision;
/// returns `None` when the precondition fails.
pub fn iso_gram_cross_check(
    ffa: &FactoredForm,
    ffb: &FactoredForm,
    v: &RationalMatrix,
) -> Result<Option<bool>> {
    let precision = ffa.precision().min(ffb.precision());
    let primes = hom_relevant_primes(ffa, ffb, v)?;
    for &p in &primes {
        if ffa.dual_rank(p) != ffb.dual_rank(p) {
            return Ok(Some(false));
        }
        if ffa.dual_rank(p) == 0 {
            continue;
        }
        let (bv, reduced_precision) = match dual_times_v(ffb, p, v, precision)? {
            Ok(pair) => pair,
            Err(()) => return Ok(Some(false)),
        };
        let b = dual_as_matrix(ffb, p, reduced_precision);
        let gram = b.mul(&b.transpose())?;
        if !gram.is_gl_zp()? {
            // Gram matrix not invertible over Z_p at precision: the formula
            // would divide; not applicable
            return Ok(None);
        }
        // U^{-1} = (B_p V)^... : with our convention A_p = U_p (B_p V),
        // so solve rows of A_p against B_p V and check the coefficient
        // matrix is in GL: gram route via (B_p V)(B_p V)^t
        let bvt = bv.mul(&bv.transpose())?;
        if !bvt.is_gl_zp()? {
            return Ok(None);
        }
        let a = dual_as_matrix(ffa, p, reduced_precision);
        // coefficients C with C * (B_p V) = A_p, via C = A_p (B_pV)^t ((B_pV)(B_pV)^t)^{-1}
        let rhs = a.mul(&bv.transpose())?;
        let inv = invert_gl(&bvt)?;
        let c = rhs.mul(&inv)?;
        if !c.is_gl_zp()? {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// Inverse of a GL(n, Z_p) matrix mod p^N by Gauss-Jordan on units.
fn invert_gl(m: &PadicMatrix) -> Result<PadicMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare);
    }
    let n = m.rows();
    let one = PadicMatrix::identity(m.p(), m.precision(), n);
    // solve M x = e_i column by column through row reduction: reuse
    // row_span_member on the transpose for each identity row
    let mt = m.transpose();
    let mut cols: Vec<Vec<BigUint>> = Vec::with_capacity(n);
    for i in 0..n {
        let target = one.row(i);
        match row_span_member(&target, &mt)? {
            SpanMembership::Member { coefficients, .. } => {
                cols.push(coefficients.iter().map(|c| c.residue().clone()).collect());
            }
            SpanMembership::NotMember { .. } => return Err(Error::SingularMatrix),
        }
    }
    // cols[i] solves mt-row-combination = e_i, i.e. M^t's rows combined;
    // assemble as rows of the inverse transposed
    let inv_t = PadicMatrix::from_residue_rows(m.p(), m.precision(), cols)?;
    Ok(inv_t.transpose())
}

/// Baer-type exponent at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeExponent {
    Finite(u32),
    Infinity,
}

impl fmt::Display for TypeExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExponent::Finite(k) => write!(f, "{k}"),
            TypeExponent::Infinity => write!(f, "inf"),
        }
    }
}

/// The type of a rank-1 group: exponents `k_p`, with `inf` marking
/// p-divisibility; unlisted primes carry 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Rank1Type {
    entries: BTreeMap<u64, TypeExponent>,
}

impl Rank1Type {
    pub fn entries(&self) -> &BTreeMap<u64, TypeExponent> {
        &self.entries
    }

    pub fn infinite_primes(&self) -> Vec<u64> {
        self.entries
            .iter()
            .filter(|(_, e)| matches!(e, TypeExponent::Infinity))
            .map(|(&p, _)| p)
            .collect()
    }
}

impl fmt::Display for Rank1Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(p, e)| format!("{p}: {e}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn rank1_type(ff: &FactoredForm) -> Result<Rank1Type> {
    if ff.rank() != 1 {
        return Err(Error::InvalidInput(format!(
            "rank1_type needs rank 1, got {}",
            ff.rank()
        )));
    }
    let mut entries = BTreeMap::new();
    for p in ff.exceptional_primes() {
        match ff.dual_view(p) {
            DualView::Zero => {
                entries.insert(p, TypeExponent::Infinity);
            }
            DualView::Matrix(m) => {
                let val = m
                    .entry(0, 0)
                    .valuation()
                    .exact()
                    .expect("dense 1x1 dual entry is nonzero at precision");
                if val > 0 {
                    entries.insert(p, TypeExponent::Finite(val));
                }
            }
            DualView::Identity => unreachable!("exceptional prime has a stored dual"),
        }
    }
    Ok(Rank1Type { entries })
}

/// Baer-type equivalence: identical infinity sets, finite exponents allowed
/// to differ at finitely many primes (always finite here, since the data
/// model has finite support).
pub fn rank1_iso(t1: &Rank1Type, t2: &Rank1Type) -> bool {
    t1.infinite_primes() == t2.infinite_primes()
}

/// `Phi^p(v)`: the coordinates of the image of `v` in the double dual
/// (`A_p v`), whose sup-norm is the p-adic metric of `v`.
pub fn phi_p(ff: &FactoredForm, p: u64, v: &GroupElement) -> Result<Vec<PadicInt>> {
    ff.dual_image(p, v)
}

/// Elementary divisors of `G / p^k G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientInvariants {
    pub p: u64,
    /// Exponents of the cyclic factors (each factor is `Z/p^e`), ascending.
    pub exponents: Vec<u32>,
}

impl fmt::Display for QuotientInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|e| {
                let val = BigUint::from(self.p).pow(*e);
                val.to_string()
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `G / p^k G` is `(Z/p^k)^{n_p}`: the pro-p completion is the double dual,
/// a free `Z_p`-module of rank `n_p`.
pub fn quotient_structure(ff: &FactoredForm, p: u64, k: u32) -> Result<QuotientInvariants> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "quotient exponent k must be >= 1".into(),
        ));
    }
    if k + crate::group::SAFETY_MARGIN > ff.precision() {
        return Err(Error::PrecisionExhausted {
            needed: k + crate::group::SAFETY_MARGIN,
            available: ff.precision(),
        });
    }
    Ok(QuotientInvariants {
        p,
        exponents: vec![k; ff.dual_rank(p)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::{dual_one_seven_form, two_three_five_form};
    use crate::group::ExceptionalDual;

    fn rm(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows).unwrap()
    }

    fn rank1_form(p: u64, entry: i64, precision: u32) -> FactoredForm {
        let m = PadicMatrix::from_int_rows(p, precision, &[vec![entry]]).unwrap();
        let mut exc = BTreeMap::new();
        exc.insert(p, ExceptionalDual::Matrix(m));
        FactoredForm::new(1, precision, exc).unwrap()
    }

    fn zero_row_form(p: u64, precision: u32) -> FactoredForm {
        let mut exc = BTreeMap::new();
        exc.insert(p, ExceptionalDual::ZeroRow);
        FactoredForm::new(1, precision, exc).unwrap()
    }

    #[test]
    fn identity_is_endomorphism() {
        let ff = dual_one_seven_form();
        let v = RationalMatrix::identity(2);
        assert!(hom_check(&ff, &ff, &v).unwrap().verdict);
        assert!(iso_check(&ff, &ff, &v).unwrap().verdict);
    }

    #[test]
    fn integer_scaling_is_endomorphism() {
        let ff = two_three_five_form(16);
        let v = rm(&[vec![3, 0], vec![0, 3]]);
        assert!(hom_check(&ff, &ff, &v).unwrap().verdict);
        // but not an isomorphism: 3G is a proper subgroup at p=3
        assert!(!iso_check(&ff, &ff, &v).unwrap().verdict);
    }

    #[test]
    fn swap_is_not_endomorphism_of_two_three_five() {
        let ff = two_three_five_form(16);
        let v = rm(&[vec![0, 1], vec![1, 0]]);
        assert!(!hom_check(&ff, &ff, &v).unwrap().verdict);
    }

    #[test]
    fn rank1_witnessed_isomorphism() {
        // Z vs the group determined by A_3 = (9): V = 1/9 carries Z onto (1/9)Z
        let z = FactoredForm::trivial(1, 16);
        let nine = rank1_form(3, 9, 16);
        let v = RationalMatrix::from_str_rows(&[vec!["1/9".to_string()]]).unwrap();
        assert!(iso_check(&z, &nine, &v).unwrap().verdict);
        // and the types agree up to finite differences
        assert!(rank1_iso(
            &rank1_type(&z).unwrap(),
            &rank1_type(&nine).unwrap()
        ));
    }

    #[test]
    fn z_and_z_half_are_not_isomorphic() {
        let z = FactoredForm::trivial(1, 16);
        let zh = zero_row_form(2, 16);
        let v = RationalMatrix::identity(1);
        assert!(!iso_check(&z, &zh, &v).unwrap().verdict);
        assert!(!rank1_iso(
            &rank1_type(&z).unwrap(),
            &rank1_type(&zh).unwrap()
        ));
    }

    #[test]
    fn rank1_type_values() {
        let t = rank1_type(&rank1_form(3, 9, 8)).unwrap();
        assert_eq!(t.entries().get(&3), Some(&TypeExponent::Finite(2)));
        let z = rank1_type(&FactoredForm::trivial(1, 8)).unwrap();
        assert!(z.entries().is_empty());
        let zh = rank1_type(&zero_row_form(2, 8)).unwrap();
        assert_eq!(zh.entries().get(&2), Some(&TypeExponent::Infinity));
        // {2: inf, 3: 1} ~ {2: inf}
        let mut exc = BTreeMap::new();
        exc.insert(2, ExceptionalDual::ZeroRow);
        exc.insert(
            3,
            ExceptionalDual::Matrix(PadicMatrix::from_int_rows(3, 8, &[vec![3]]).unwrap()),
        );
        let shift = FactoredForm::new(1, 8, exc).unwrap();
        assert!(rank1_iso(&rank1_type(&shift).unwrap(), &zh));
    }

    #[test]
    fn quotient_fixtures() {
        let ff21 = {
            let m = PadicMatrix::from_int_rows(3, 16, &[vec![1, 7]]).unwrap();
            let mut exc = BTreeMap::new();
            exc.insert(3, ExceptionalDual::Matrix(m));
            FactoredForm::new(2, 16, exc).unwrap()
        };
        assert_eq!(quotient_structure(&ff21, 3, 1).unwrap().exponents, vec![1]);
        assert_eq!(quotient_structure(&ff21, 3, 2).unwrap().exponents, vec![2]);
        let z2 = FactoredForm::trivial(2, 16);
        assert_eq!(quotient_structure(&z2, 5, 1).unwrap().exponents, vec![1, 1]);
        assert!(matches!(
            quotient_structure(&z2, 5, 14),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn phi_p_examples() {
        let ff = dual_one_seven_form();
        let img = phi_p(&ff, 3, &GroupElement::parse("-1,1").unwrap()).unwrap();
        assert_eq!(img.len(), 1);
        assert_eq!(img[0].residue(), &BigUint::from(6u32));
        let ttf = two_three_five_form(16);
        let img5 = phi_p(&ttf, 5, &GroupElement::parse("1,1").unwrap()).unwrap();
        assert!(img5[0].is_zero_at_precision());
    }

    #[test]
    fn gram_cross_check_agrees_when_applicable() {
        let ff = dual_one_seven_form();
        let v = RationalMatrix::identity(2);
        if let Some(ans) = iso_gram_cross_check(&ff, &ff, &v).unwrap() {
            assert!(ans);
        }
    }
}
