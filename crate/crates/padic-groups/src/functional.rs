//! p-adic functionals in dual-basis coordinates: evaluation, constructive
//! extension from finitely generated subgroups, admissible-value disks, and
//! separating functionals for bounded-exponent subgroups.
//!
//! A functional is a coefficient vector `c` over the rows of `A_p`;
//! evaluation is `v -> c^t (A_p v)`.  Extension from prescribed values on
//! generators is solvability of a linear system over `Z_p`, so existence
//! questions become normal-form computations with explicit certificates.

use crate::error::{Error, Result};
use crate::group::{DualView, FactoredForm, GroupElement};
use crate::linalg::{solve_unit_system, PadicMatrix, SystemSolution};
use crate::padic::{pow_p, Disk, DiskRadius, PadicInt, PadicScalarQ, ScalarValuation};
use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional {
    p: u64,
    coefficients: Vec<PadicInt>,
}

impl Functional {
    pub fn new(p: u64, coefficients: Vec<PadicInt>) -> Result<Self> {
        for c in &coefficients {
            if c.p() != p {
                return Err(Error::PrimeMismatch(p, c.p()));
            }
        }
        Ok(Functional { p, coefficients })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> &[PadicInt] {
        &self.coefficients
    }

    /// `f(v) = c^t (A_p v)`.  Contractive by construction: the value's
    /// valuation is at least the metric exponent of `v`.
    pub fn evaluate(&self, form: &FactoredForm, v: &GroupElement) -> Result<PadicScalarQ> {
        if self.coefficients.len() != form.dual_rank(self.p) {
            return Err(Error::DimensionMismatch(format!(
                "functional has {} coefficients, dual rank is {}",
                self.coefficients.len(),
                form.dual_rank(self.p)
            )));
        }
        let image = form.dual_image(self.p, v)?;
        if image.is_empty() {
            return Ok(PadicScalarQ::exact_zero(self.p));
        }
        let mut acc = PadicInt::zero(self.p, form.precision())?;
        for (c, w) in self.coefficients.iter().zip(image.iter()) {
            acc = acc.add(&c.mul(w)?)?;
        }
        Ok(PadicScalarQ::from_padic_int(&acc))
    }
}

/// The extension system `c^t (A_p g_i) = value_i` as residue rows mod `p^N`.
///
/// A generator with denominator valuation `d` contributes the constraint
/// scaled by `p^d`, which encodes exactly what is known at precision.
fn extension_system(
    form: &FactoredForm,
    p: u64,
    gens: &[GroupElement],
    values: &[PadicInt],
) -> Result<(PadicMatrix, Vec<PadicInt>)> {
    if gens.len() != values.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} generators with {} values",
            gens.len(),
            values.len()
        )));
    }
    for val in values {
        if val.p() != p {
            return Err(Error::PrimeMismatch(p, val.p()));
        }
    }
    let n = form.precision();
    let n_p = form.dual_rank(p);
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(gens.len());
    let mut rhs: Vec<PadicInt> = Vec::with_capacity(gens.len());
    for (g, val) in gens.iter().zip(values.iter()) {
        if !form.membership(g)? {
            return Err(Error::NotAMember);
        }
        let d = g.denominator_valuation(p);
        let scaled = g.scaled_residues(p, n, d);
        let image = match form.dual_view(p) {
            DualView::Zero => Vec::new(),
            DualView::Identity => scaled,
            DualView::Matrix(m) => m.mul_residue_vec(&scaled)?,
        };
        debug_assert_eq!(image.len(), n_p);
        rows.push(image);
        let shift = pow_p(p, d);
        rhs.push(PadicInt::from_residue(
            p,
            val.with_precision(n).residue() * shift,
            n,
        ));
    }
    let matrix = if rows.is_empty() {
        PadicMatrix::zero(p, n, 0, n_p)
    } else {
        PadicMatrix::from_residue_rows(p, n, rows)?
    };
    Ok((matrix, rhs))
}

/// Extend prescribed values on generators to a functional on the whole
/// group.  `NotContractive` certifies (mod `p^N`) that no contractive
/// extension exists, with the failing constraint index.
pub fn extend_from_subgroup(
    form: &FactoredForm,
    p: u64,
    gens: &[GroupElement],
    values: &[PadicInt],
) -> Result<Functional> {
    let (matrix, rhs) = extension_system(form, p, gens, values)?;
    match solve_unit_system(&matrix, &rhs)? {
        SystemSolution::Solved(sol) => Functional::new(p, sol.particular),
        SystemSolution::Inconsistent { constraint, .. } => {
            Err(Error::NotContractive { constraint })
        }
    }
}

/// The disk of values `f(g)` over all extensions `f` consistent with the
/// prescribed generator values: a ball `beta_0 + p^j Z_p`, or a single
/// point when the solution set's directions all vanish at `g`.
pub fn admissible_values(
    form: &FactoredForm,
    p: u64,
    gens: &[GroupElement],
    values: &[PadicInt],
    g: &GroupElement,
) -> Result<Disk> {
    let (matrix, rhs) = extension_system(form, p, gens, values)?;
    let sol = match solve_unit_system(&matrix, &rhs)? {
        SystemSolution::Solved(sol) => sol,
        SystemSolution::Inconsistent { constraint, .. } => {
            return Err(Error::NotContractive { constraint })
        }
    };
    let center = Functional::new(p, sol.particular)?.evaluate(form, g)?;
    let mut radius: Option<i64> = None;
    for dir in &sol.kernel {
        let image = Functional::new(p, dir.clone())?.evaluate(form, g)?;
        if let ScalarValuation::Exact(v) = image.valuation() {
            radius = Some(radius.map_or(v, |r: i64| r.min(v)));
        }
    }
    Ok(match radius {
        Some(e) => Disk::new(center, DiskRadius::Exponent(e)),
        None => Disk::point(center),
    })
}

/// A functional with `|f(h_i)|_p <= p^{-m}` on all subgroup generators and
/// `|f(g)|_p > p^{-m}`, when one exists at precision.
///
/// The coefficient module `{c : c^t A_p h_i = 0 mod p^m}` is computed by a
/// normal form; the image of that module at `g` is an ideal, so some basis
/// element attains the maximal absolute value.
pub fn separating_functional(
    form: &FactoredForm,
    p: u64,
    h_gens: &[GroupElement],
    g: &GroupElement,
    m: u32,
) -> Result<Functional> {
    if !form.membership(g)? {
        return Err(Error::NotAMember);
    }
    let n = form.precision();
    let n_p = form.dual_rank(p);
    if n_p == 0 {
        return Err(Error::NotFound);
    }

    // constraint rows scaled so that "= 0 mod p^{m + d_i}" becomes
    // "= 0 mod p^N"
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(h_gens.len());
    for h in h_gens {
        if !form.membership(h)? {
            return Err(Error::NotAMember);
        }
        let d = h.denominator_valuation(p);
        if m + d > n {
            return Err(Error::PrecisionExhausted {
                needed: m + d,
                available: n,
            });
        }
        let scaled = h.scaled_residues(p, n, d);
        let image = match form.dual_view(p) {
            DualView::Zero => Vec::new(),
            DualView::Identity => scaled,
            DualView::Matrix(mat) => mat.mul_residue_vec(&scaled)?,
        };
        let factor = pow_p(p, n - m - d);
        let modulus = pow_p(p, n);
        rows.push(image.iter().map(|w| (w * &factor) % &modulus).collect());
    }
    let matrix = if rows.is_empty() {
        PadicMatrix::zero(p, n, 0, n_p)
    } else {
        PadicMatrix::from_residue_rows(p, n, rows)?
    };

    // the coefficient module is the direction module of the homogeneous
    // system
    let zero_rhs = vec![PadicInt::zero(p, n)?; matrix.rows()];
    let generators = match solve_unit_system(&matrix, &zero_rhs)? {
        SystemSolution::Solved(sol) => sol.kernel,
        SystemSolution::Inconsistent { .. } => unreachable!("homogeneous system"),
    };

    // pick the generator whose image at g has the smallest valuation
    let mut best: Option<(i64, Functional)> = None;
    for gen in generators {
        let f = Functional::new(p, gen)?;
        let image = f.evaluate(form, g)?;
        if let ScalarValuation::Exact(v) = image.valuation() {
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, f));
            }
        }
    }
    match best {
        Some((v, f)) if v < m as i64 => Ok(f),
        _ => Err(Error::NotFound),
    }
}
