//! Factored forms of finite-rank torsion-free abelian groups.
//!
//! A factored form is a finite family of `Z_p` matrices `A_p` (one per
//! exceptional prime; unlisted primes implicitly carry the identity), and
//! the group it determines is `{v in Q^n : A_p v in Z_p^{n_p} for all p}`.
//! The p-adic pseudometric on the group is `d_p(v, 0) = ||A_p v||_p`.
//!
//! Only groups with finitely many non-identity duals are representable;
//! infinite-rank groups and infinite exceptional supports are out of scope.

mod limit;

pub use limit::InductiveLimitGroup;

use crate::error::{Error, Result};
use crate::intmat::factor_primes;
use crate::linalg::PadicMatrix;
use crate::padic::{is_prime, pow_p, val_of_biguint, PadicInt};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Decisions closer than this to the precision cap raise `PrecisionExhausted`.
pub const SAFETY_MARGIN: u32 = 4;

/// An element of `Q^n` (exact rationals, lowest terms).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    coords: Vec<BigRational>,
}

impl GroupElement {
    pub fn new(coords: Vec<BigRational>) -> Self {
        GroupElement { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        GroupElement {
            coords: coords
                .iter()
                .map(|&x| BigRational::from(BigInt::from(x)))
                .collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        GroupElement {
            coords: vec![BigRational::zero(); dim],
        }
    }

    /// Parse a comma-separated list of exact rationals, e.g. `1/5,-2,7/9`.
    pub fn parse(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|tok| parse_rational(tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::Parse("empty vector".into()));
        }
        Ok(GroupElement { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("vector lengths differ".into()));
        }
        Ok(GroupElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("vector lengths differ".into()));
        }
        Ok(GroupElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &BigRational) -> GroupElement {
        GroupElement {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> GroupElement {
        self.scale(&BigRational::from(BigInt::from(k)))
    }

    /// Largest power of `p` appearing in any coordinate denominator.
    pub fn denominator_valuation(&self, p: u64) -> u32 {
        self.coords
            .iter()
            .map(|c| val_p_bigint(c.denom(), p))
            .max()
            .unwrap_or(0)
    }

    /// `min_i val_p(v_i)` as an exact integer; `None` for the zero vector.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| val_p_bigint(c.numer(), p) as i64 - val_p_bigint(c.denom(), p) as i64)
            .min()
    }

    /// Distinct primes dividing any coordinate denominator.
    pub fn denominator_primes(&self) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for c in &self.coords {
            let d = c.denom().abs().to_biguint().expect("abs");
            out.extend(factor_primes(&d)?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Residues of `p^shift * v` mod `p^N`; every scaled coordinate must be
    /// p-integral (`shift >= denominator_valuation(p)`).
    pub(crate) fn scaled_residues(&self, p: u64, precision: u32, shift: u32) -> Vec<BigUint> {
        let modulus = BigInt::from(pow_p(p, precision));
        let p_big = BigInt::from(p);
        self.coords
            .iter()
            .map(|c| {
                let mut num = c.numer().clone() * p_big.pow(shift);
                let mut den = c.denom().clone();
                // cancel the p-part of the denominator (exact by assumption)
                while (&den % &p_big).is_zero() {
                    den /= &p_big;
                    num /= &p_big;
                }
                let den_inv = mod_inverse_bigint(&den, &modulus);
                let mut r = (num * den_inv).mod_floor(&modulus);
                if r.is_negative() {
                    r += &modulus;
                }
                r.to_biguint().expect("reduced")
            })
            .collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn parse_rational(tok: &str) -> Result<BigRational> {
    let mk_err = || Error::Parse(format!("bad rational `{tok}`"));
    match tok.split_once('/') {
        None => {
            let n: BigInt = tok.parse().map_err(|_| mk_err())?;
            Ok(BigRational::from(n))
        }
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| mk_err())?;
            let d: BigInt = b.trim().parse().map_err(|_| mk_err())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{tok}`")));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

fn val_p_bigint(x: &BigInt, p: u64) -> u32 {
    if x.is_zero() {
        return 0;
    }
    let p_big = BigInt::from(p);
    let mut v = 0;
    let mut cur = x.clone();
    while (&cur % &p_big).is_zero() {
        cur /= &p_big;
        v += 1;
    }
    v
}

fn mod_inverse_bigint(a: &BigInt, modulus: &BigInt) -> BigInt {
    let ext = a.extended_gcd(modulus);
    let mut inv = ext.x.mod_floor(modulus);
    if inv.is_negative() {
        inv += modulus;
    }
    inv
}

/// The dual data at one exceptional prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExceptionalDual {
    /// `m_p = 1` and `A_p = 0`: the group is p-divisible.
    ZeroRow,
    /// A dense-column-span matrix whose rows form a `Z_p`-basis of the dual.
    Matrix(PadicMatrix),
}

/// A named violation of the factored-form invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub prime: u64,
    pub condition: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at p={}: {}", self.prime, self.condition)
    }
}

/// Finite description of a finite-rank torsion-free abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredForm {
    rank: usize,
    precision: u32,
    exceptional: BTreeMap<u64, ExceptionalDual>,
}

/// How a single prime sees the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualView<'a> {
    Identity,
    Zero,
    Matrix(&'a PadicMatrix),
}

/// Exact p-metric information about `A_p v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `d_p(v,0) = p^{-k}` exactly.
    Exact(u32),
    /// `d_p(v,0) <= p^{-bound}`: indistinguishable from zero at precision.
    AtMost(u32),
}

impl Metric {
    pub fn is_at_most(self, k: u32) -> bool {
        match self {
            Metric::Exact(j) => j >= k,
            Metric::AtMost(b) => b >= k,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Exact(k) => write!(f, "p^-{k}"),
            Metric::AtMost(b) => write!(f, "<=p^-{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Simplicity {
    SimpleNotDivisible,
    Divisible,
    NotSimple,
}

impl fmt::Display for Simplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Simplicity::SimpleNotDivisible => "simple_not_divisible",
            Simplicity::Divisible => "divisible",
            Simplicity::NotSimple => "not_simple",
        };
        write!(f, "{s}")
    }
}

enum ImageValuation {
    ExactZero,
    Exact(i64),
    AtLeast(i64),
}

impl FactoredForm {
    pub fn new(
        rank: usize,
        precision: u32,
        exceptional: BTreeMap<u64, ExceptionalDual>,
    ) -> Result<Self> {
        let violations = Self::validate_parts(rank, precision, &exceptional);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidForm(v.to_string()));
        }
        Ok(FactoredForm {
            rank,
            precision,
            exceptional,
        })
    }

    /// `Z^rank` (no exceptional primes).
    pub fn trivial(rank: usize, precision: u32) -> Self {
        FactoredForm {
            rank,
            precision,
            exceptional: BTreeMap::new(),
        }
    }

    /// Check every construction invariant; an empty report means ok.
    pub fn validate_parts(
        rank: usize,
        precision: u32,
        exceptional: &BTreeMap<u64, ExceptionalDual>,
    ) -> Vec<Violation> {
        let mut out = Vec::new();
        if rank == 0 {
            out.push(Violation {
                prime: 0,
                condition: "rank must be at least 1".into(),
            });
        }
        for (&p, dual) in exceptional {
            if !is_prime(p) {
                out.push(Violation {
                    prime: p,
                    condition: format!("{p} is not prime"),
                });
                continue;
            }
            if let ExceptionalDual::Matrix(m) = dual {
                if m.p() != p {
                    out.push(Violation {
                        prime: p,
                        condition: format!("matrix carries prime {} instead of {p}", m.p()),
                    });
                    continue;
                }
                if m.precision() != precision {
                    out.push(Violation {
                        prime: p,
                        condition: format!(
                            "matrix precision {} differs from form precision {precision}",
                            m.precision()
                        ),
                    });
                }
                if m.cols() != rank {
                    out.push(Violation {
                        prime: p,
                        condition: format!("matrix has {} columns, rank is {rank}", m.cols()),
                    });
                    continue;
                }
                if m.rows() == 0 || m.rows() > rank {
                    out.push(Violation {
                        prime: p,
                        condition: format!("matrix has {} rows, need 1..={rank}", m.rows()),
                    });
                    continue;
                }
                if !m.column_span_dense() {
                    out.push(Violation {
                        prime: p,
                        condition: "column span is not dense".into(),
                    });
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn exceptional_primes(&self) -> Vec<u64> {
        self.exceptional.keys().copied().collect()
    }

    pub fn exceptional(&self) -> &BTreeMap<u64, ExceptionalDual> {
        &self.exceptional
    }

    pub fn dual_view(&self, p: u64) -> DualView<'_> {
        match self.exceptional.get(&p) {
            None => DualView::Identity,
            Some(ExceptionalDual::ZeroRow) => DualView::Zero,
            Some(ExceptionalDual::Matrix(m)) => DualView::Matrix(m),
        }
    }

    /// Rank of the dual module at `p` (0 for a zero row, `rank` off the
    /// exceptional support).
    pub fn dual_rank(&self, p: u64) -> usize {
        match self.dual_view(p) {
            DualView::Identity => self.rank,
            DualView::Zero => 0,
            DualView::Matrix(m) => m.rows(),
        }
    }

    fn check_dim(&self, v: &GroupElement) -> Result<()> {
        if v.dim() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "element of dimension {} in a rank-{} form",
                v.dim(),
                self.rank
            )));
        }
        Ok(())
    }

    fn ensure_precision_for(&self, d: u32) -> Result<()> {
        // integral inputs (d = 0) are decided exactly mod p^N; denominators
        // consume digits and need headroom
        if d > 0 && d + SAFETY_MARGIN > self.precision {
            return Err(Error::PrecisionExhausted {
                needed: d + SAFETY_MARGIN,
                available: self.precision,
            });
        }
        Ok(())
    }

    fn image_valuation(&self, p: u64, v: &GroupElement) -> Result<ImageValuation> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        match self.dual_view(p) {
            DualView::Zero => Ok(ImageValuation::ExactZero),
            DualView::Identity => Ok(match v.min_valuation(p) {
                None => ImageValuation::ExactZero,
                Some(k) => ImageValuation::Exact(k),
            }),
            DualView::Matrix(m) => {
                let d = v.denominator_valuation(p);
                self.ensure_precision_for(d)?;
                let scaled = v.scaled_residues(p, self.precision, d);
                let image = m.mul_residue_vec(&scaled)?;
                let mut best: Option<u32> = None;
                for w in &image {
                    if let Some(val) = val_of_biguint(w, p, self.precision).exact() {
                        best = Some(best.map_or(val, |b: u32| b.min(val)));
                    }
                }
                Ok(match best {
                    Some(val) => ImageValuation::Exact(val as i64 - d as i64),
                    None => ImageValuation::AtLeast((self.precision - d) as i64),
                })
            }
        }
    }

    /// The membership condition at a single prime: is `A_p v` integral?
    pub fn integral_at(&self, p: u64, v: &GroupElement) -> Result<bool> {
        self.check_dim(v)?;
        Ok(match self.image_valuation(p, v)? {
            ImageValuation::ExactZero => true,
            ImageValuation::Exact(k) => k >= 0,
            ImageValuation::AtLeast(b) => b >= 0,
        })
    }

    /// Is `v` in the group: `A_p v` integral at every prime that matters
    /// (coordinate-denominator primes and exceptional primes)?
    pub fn membership(&self, v: &GroupElement) -> Result<bool> {
        self.check_dim(v)?;
        let mut primes = v.denominator_primes()?;
        primes.extend(self.exceptional_primes());
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            if !self.integral_at(p, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `d_p(v, 0) = ||A_p v||_p` for a member `v`.
    pub fn p_metric(&self, p: u64, v: &GroupElement) -> Result<Metric> {
        self.check_dim(v)?;
        if !self.membership(v)? {
            return Err(Error::NotAMember);
        }
        match self.image_valuation(p, v)? {
            ImageValuation::ExactZero => Ok(Metric::AtMost(self.precision)),
            ImageValuation::Exact(k) => {
                debug_assert!(k >= 0, "member has non-negative metric exponent");
                Ok(Metric::Exact(k.max(0) as u32))
            }
            ImageValuation::AtLeast(b) => Ok(Metric::AtMost(b.max(0) as u32)),
        }
    }

    /// Is `v` in `p^k G`?
    pub fn divisible(&self, p: u64, k: u32, v: &GroupElement) -> Result<bool> {
        self.check_dim(v)?;
        if !self.membership(v)? {
            return Err(Error::NotAMember);
        }
        let d = v.denominator_valuation(p);
        if k + SAFETY_MARGIN + d > self.precision {
            return Err(Error::PrecisionExhausted {
                needed: k + SAFETY_MARGIN + d,
                available: self.precision,
            });
        }
        Ok(match self.image_valuation(p, v)? {
            ImageValuation::ExactZero => true,
            ImageValuation::Exact(j) => j >= k as i64,
            ImageValuation::AtLeast(b) => b >= k as i64,
        })
    }

    /// Classification of the prime: p-divisible, p-simple (rank-1 dual), or
    /// neither.
    pub fn is_p_simple(&self, p: u64) -> Simplicity {
        match self.dual_rank(p) {
            0 => Simplicity::Divisible,
            1 => Simplicity::SimpleNotDivisible,
            _ => Simplicity::NotSimple,
        }
    }

    /// Is `v` indistinguishable from the p-divisible subgroup at the
    /// working precision?  Exact only when `A_p v` vanishes in rational
    /// arithmetic.
    pub fn in_gp_at_precision(&self, p: u64, v: &GroupElement) -> Result<bool> {
        self.check_dim(v)?;
        if !self.membership(v)? {
            return Err(Error::NotAMember);
        }
        Ok(match self.image_valuation(p, v)? {
            ImageValuation::ExactZero => true,
            ImageValuation::Exact(_) => false,
            ImageValuation::AtLeast(_) => true,
        })
    }

    /// `A_p v` as a vector of `Z_p` entries (the coordinates of the image of
    /// `v` in the double dual).  Entries carry precision `N - d`.
    pub fn dual_image(&self, p: u64, v: &GroupElement) -> Result<Vec<PadicInt>> {
        self.check_dim(v)?;
        if !self.membership(v)? {
            return Err(Error::NotAMember);
        }
        match self.dual_view(p) {
            DualView::Zero => Ok(Vec::new()),
            DualView::Identity => {
                let digits = self.precision;
                v.coords()
                    .iter()
                    .map(|c| {
                        crate::padic::PadicScalarQ::from_rational(p, c, digits)?
                            .to_padic_int(digits)
                    })
                    .collect()
            }
            DualView::Matrix(m) => {
                let d = v.denominator_valuation(p);
                self.ensure_precision_for(d)?;
                let scaled = v.scaled_residues(p, self.precision, d);
                let image = m.mul_residue_vec(&scaled)?;
                image
                    .into_iter()
                    .map(|w| PadicInt::from_residue(p, w, self.precision).div_exact_p_pow(d))
                    .collect()
            }
        }
    }
}
