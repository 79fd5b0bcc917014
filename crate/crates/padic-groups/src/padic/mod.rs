//! Bounded-precision arithmetic in `Z_p`.
//!
//! Every value is known modulo `p^N` for a fixed absolute precision `N`.
//! Add/sub/mul are exact mod `p^N`; division is restricted to units.  A
//! residue of zero is reported as "valuation at least N", never as exact
//! zero: at precision `N` the two are indistinguishable.

mod disk;
mod poly;
mod scalar;

pub use disk::{Disk, DiskRadius};
pub use poly::{hensel_lift, newton_polygon, PadicPoly, PolygonSegment};
pub use scalar::{PadicScalarQ, ScalarValuation};

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Deterministic primality test for machine-word candidates (trial division;
/// the primes appearing in group specs are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = 11u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `p^n` as a big integer.
pub fn pow_p(p: u64, n: u32) -> BigUint {
    BigUint::from(p).pow(n)
}

/// Valuation of a residue known mod `p^N`.
///
/// `AtLeast(N)` is the honest answer for a zero residue: the value is
/// indistinguishable from anything of valuation `>= N`, including exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    /// Is the valuation certainly `>= k`?
    pub fn is_at_least(self, k: u32) -> bool {
        match self {
            Valuation::Exact(v) => v >= k,
            Valuation::AtLeast(b) => b >= k,
        }
    }

    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Lower bound on the valuation that is certain at precision.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    fn min(self, other: Valuation) -> Valuation {
        use Valuation::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Exact(a.min(b)),
            (Exact(a), AtLeast(b)) | (AtLeast(b), Exact(a)) => {
                // an exact value below the bound wins; otherwise the exact
                // one is >= the bound and the bound stays a bound
                if a <= b {
                    Exact(a)
                } else {
                    AtLeast(b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }
}

/// Count how many times `p` divides `x`, looking at most `cap` deep.
pub(crate) fn val_of_biguint(x: &BigUint, p: u64, cap: u32) -> Valuation {
    if x.is_zero() {
        return Valuation::AtLeast(cap);
    }
    let p_big = BigUint::from(p);
    let mut v = 0u32;
    let mut cur = x.clone();
    while v < cap {
        let (q, r) = cur.div_rem(&p_big);
        if !r.is_zero() {
            break;
        }
        cur = q;
        v += 1;
    }
    if v >= cap {
        Valuation::AtLeast(cap)
    } else {
        Valuation::Exact(v)
    }
}

/// An element of `Z_p` known modulo `p^N`.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    residue: BigUint,
}

impl PadicInt {
    /// Build from any integer (negative values are reduced mod `p^N`).
    pub fn new<T: Into<BigInt>>(p: u64, value: T, precision: u32) -> Result<Self> {
        ensure_prime(p)?;
        Ok(Self::from_bigint(p, &value.into(), precision))
    }

    /// Reduce a signed big integer mod `p^N`; `p` must already be validated.
    pub(crate) fn from_bigint(p: u64, value: &BigInt, precision: u32) -> Self {
        let modulus = BigInt::from(pow_p(p, precision));
        let mut r = value.mod_floor(&modulus);
        if r.is_negative() {
            r += &modulus;
        }
        PadicInt {
            p,
            precision,
            residue: r.to_biguint().expect("non-negative after reduction"),
        }
    }

    pub(crate) fn from_residue(p: u64, residue: BigUint, precision: u32) -> Self {
        let m = pow_p(p, precision);
        PadicInt {
            p,
            precision,
            residue: residue % m,
        }
    }

    pub fn zero(p: u64, precision: u32) -> Result<Self> {
        ensure_prime(p)?;
        Ok(PadicInt {
            p,
            precision,
            residue: BigUint::zero(),
        })
    }

    pub fn one(p: u64, precision: u32) -> Result<Self> {
        ensure_prime(p)?;
        Ok(PadicInt {
            p,
            precision,
            residue: BigUint::one(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        pow_p(self.p, self.precision)
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.residue.is_zero()
    }

    /// Reduce to a lower absolute precision (a no-op if `n >= self.precision`).
    pub fn with_precision(&self, n: u32) -> Self {
        if n >= self.precision {
            self.clone()
        } else {
            PadicInt {
                p: self.p,
                precision: n,
                residue: &self.residue % pow_p(self.p, n),
            }
        }
    }

    fn harmonize(&self, other: &PadicInt) -> Result<(PadicInt, PadicInt)> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let n = self.precision.min(other.precision);
        Ok((self.with_precision(n), other.with_precision(n)))
    }

    pub fn add(&self, other: &PadicInt) -> Result<PadicInt> {
        let (a, b) = self.harmonize(other)?;
        let m = a.modulus();
        Ok(PadicInt {
            p: a.p,
            precision: a.precision,
            residue: (a.residue + b.residue) % m,
        })
    }

    pub fn sub(&self, other: &PadicInt) -> Result<PadicInt> {
        let (a, b) = self.harmonize(other)?;
        let m = a.modulus();
        Ok(PadicInt {
            p: a.p,
            precision: a.precision,
            residue: (m.clone() + a.residue - b.residue) % m,
        })
    }

    pub fn mul(&self, other: &PadicInt) -> Result<PadicInt> {
        let (a, b) = self.harmonize(other)?;
        let m = a.modulus();
        Ok(PadicInt {
            p: a.p,
            precision: a.precision,
            residue: (a.residue * b.residue) % m,
        })
    }

    pub fn neg(&self) -> PadicInt {
        let m = self.modulus();
        PadicInt {
            p: self.p,
            precision: self.precision,
            residue: (m.clone() - &self.residue) % m,
        }
    }

    pub fn valuation(&self) -> Valuation {
        val_of_biguint(&self.residue, self.p, self.precision)
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.valuation(), Valuation::Exact(0))
    }

    /// Multiplicative inverse mod `p^N`; the operand must be a unit.
    pub fn invert(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let m = BigInt::from(self.modulus());
        let a = BigInt::from(self.residue.clone());
        let ext = a.extended_gcd(&m);
        debug_assert!(ext.gcd.is_one());
        let mut inv = ext.x.mod_floor(&m);
        if inv.is_negative() {
            inv += &m;
        }
        Ok(PadicInt {
            p: self.p,
            precision: self.precision,
            residue: inv.to_biguint().expect("reduced"),
        })
    }

    /// Split as `p^v * unit`; `None` when zero at precision.  The unit is
    /// known at absolute precision `N - v`.
    pub fn unit_split(&self) -> Option<(u32, PadicInt)> {
        match self.valuation() {
            Valuation::AtLeast(_) => None,
            Valuation::Exact(v) => {
                let unit = &self.residue / pow_p(self.p, v);
                Some((
                    v,
                    PadicInt {
                        p: self.p,
                        precision: self.precision - v,
                        residue: unit,
                    },
                ))
            }
        }
    }

    /// Exact division by `p^k`; requires valuation >= k.  The result is
    /// known mod `p^{N-k}`.
    pub fn div_exact_p_pow(&self, k: u32) -> Result<PadicInt> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k > self.precision {
            return Err(Error::PrecisionExhausted {
                needed: k,
                available: self.precision,
            });
        }
        if !self.valuation().is_at_least(k) {
            return Err(Error::NonUnit);
        }
        Ok(PadicInt {
            p: self.p,
            precision: self.precision - k,
            residue: &self.residue / pow_p(self.p, k),
        })
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+O({}^{})", self.residue, self.p, self.precision)
    }
}

/// `max_i |v_i|_p` as a valuation exponent: `Exact(k)` means the norm is
/// exactly `p^{-k}`; `AtLeast(N)` means every entry vanished at precision.
pub fn vec_norm(v: &[PadicInt]) -> Result<Valuation> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    let p = v[0].p;
    let mut acc: Option<Valuation> = None;
    for x in v {
        if x.p != p {
            return Err(Error::PrimeMismatch(p, x.p));
        }
        let val = x.valuation();
        acc = Some(match acc {
            None => val,
            Some(a) => a.min(val),
        });
    }
    Ok(acc.expect("non-empty"))
}

/// Parse a p-adic literal: a decimal integer, optionally followed by
/// `+O(p^N)`, e.g. `24+O(3^3)`.  Bare integers inherit `default_precision`;
/// negatives are reduced mod `p^N`.
pub fn parse_literal(s: &str, p: u64, default_precision: u32) -> Result<PadicInt> {
    let s = s.trim();
    let (num_part, precision) = match s.find("+O(") {
        None => (s, default_precision),
        Some(idx) => {
            let tail = &s[idx + 3..];
            let inner = tail
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unterminated O(...) in `{s}`")))?;
            let (base, exp) = inner
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("expected p^N inside O(...) in `{s}`")))?;
            let base: u64 = base
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in `{s}`")))?;
            if base != p {
                return Err(Error::PrimeMismatch(p, base));
            }
            let exp: u32 = exp
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
            (&s[..idx], exp)
        }
    };
    let value: BigInt = num_part
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer `{num_part}`")))?;
    PadicInt::new(p, value, precision)
}
