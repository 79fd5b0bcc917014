//! Elements of `Q_p` in unit-times-p-power form.

use super::{pow_p, PadicInt};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

/// Known information about the valuation of a `PadicScalarQ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarValuation {
    /// Exactly `p^{-v}` in absolute value.
    Exact(i64),
    /// Absolute value at most `p^{-bound}` (all visible digits vanished).
    AtLeast(i64),
    /// Exact zero.
    Infinite,
}

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    ExactZero,
    /// `unit * p^valuation` with the unit residue coprime to `p`.
    Unit {
        valuation: i64,
        unit: PadicInt,
    },
    /// Indistinguishable from zero below `p^{-bound}`.
    BelowPrecision {
        bound: i64,
    },
}

/// An element of `Q_p`: a unit scaled by an integer power of `p`, an exact
/// zero, or a value all of whose known digits vanish.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicScalarQ {
    p: u64,
    repr: Repr,
}

impl PadicScalarQ {
    pub fn exact_zero(p: u64) -> Self {
        PadicScalarQ {
            p,
            repr: Repr::ExactZero,
        }
    }

    /// A value known only to satisfy `|x|_p <= p^{-bound}`.
    pub fn below_precision(p: u64, bound: i64) -> Self {
        PadicScalarQ {
            p,
            repr: Repr::BelowPrecision { bound },
        }
    }

    pub fn from_unit(valuation: i64, unit: PadicInt) -> Result<Self> {
        if !unit.is_unit() {
            return Err(Error::NonUnit);
        }
        Ok(PadicScalarQ {
            p: unit.p(),
            repr: Repr::Unit { valuation, unit },
        })
    }

    /// Interpret a `PadicInt` as a scalar, extracting its unit part.
    pub fn from_padic_int(x: &PadicInt) -> Self {
        match x.unit_split() {
            None => PadicScalarQ::below_precision(x.p(), x.precision() as i64),
            Some((v, unit)) => PadicScalarQ {
                p: x.p(),
                repr: Repr::Unit {
                    valuation: v as i64,
                    unit,
                },
            },
        }
    }

    /// Embed an exact rational into `Q_p` at `digits` significant digits of
    /// the unit part.
    pub fn from_rational(p: u64, x: &BigRational, digits: u32) -> Result<Self> {
        if x.is_zero() {
            return Ok(PadicScalarQ::exact_zero(p));
        }
        let (vn, nu) = split_p_power(x.numer(), p);
        let (vd, de) = split_p_power(x.denom(), p);
        let valuation = vn as i64 - vd as i64;
        let num_unit = PadicInt::new(p, nu, digits)?;
        let den_unit = PadicInt::new(p, de, digits)?;
        let unit = num_unit.mul(&den_unit.invert()?)?;
        Ok(PadicScalarQ {
            p,
            repr: Repr::Unit { valuation, unit },
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    pub fn valuation(&self) -> ScalarValuation {
        match &self.repr {
            Repr::ExactZero => ScalarValuation::Infinite,
            Repr::Unit { valuation, .. } => ScalarValuation::Exact(*valuation),
            Repr::BelowPrecision { bound } => ScalarValuation::AtLeast(*bound),
        }
    }

    pub fn unit_part(&self) -> Option<&PadicInt> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// Represent as a `PadicInt` mod `p^precision`; requires a provably
    /// non-negative valuation.
    pub fn to_padic_int(&self, precision: u32) -> Result<PadicInt> {
        match &self.repr {
            Repr::ExactZero => PadicInt::zero(self.p, precision),
            Repr::BelowPrecision { bound } => {
                if *bound < 0 {
                    return Err(Error::PrecisionExhausted {
                        needed: 0,
                        available: 0,
                    });
                }
                // all known digits vanish; representable as 0 up to the bound
                Ok(PadicInt::zero(self.p, precision.min(*bound as u32))?)
            }
            Repr::Unit { valuation, unit } => {
                if *valuation < 0 {
                    return Err(Error::NonUnit);
                }
                let v = *valuation as u32;
                let avail = unit.precision().saturating_add(v).min(precision);
                let shifted = unit.residue() * pow_p(self.p, v);
                Ok(PadicInt::from_residue(self.p, shifted, avail))
            }
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        use Repr::*;
        Ok(match (&self.repr, &other.repr) {
            (ExactZero, _) | (_, ExactZero) => PadicScalarQ::exact_zero(self.p),
            (BelowPrecision { bound }, Unit { valuation, .. })
            | (Unit { valuation, .. }, BelowPrecision { bound }) => {
                PadicScalarQ::below_precision(self.p, bound + valuation)
            }
            (BelowPrecision { bound: a }, BelowPrecision { bound: b }) => {
                PadicScalarQ::below_precision(self.p, a + b)
            }
            (
                Unit {
                    valuation: v1,
                    unit: u1,
                },
                Unit {
                    valuation: v2,
                    unit: u2,
                },
            ) => PadicScalarQ {
                p: self.p,
                repr: Unit {
                    valuation: v1 + v2,
                    unit: u1.mul(u2)?,
                },
            },
        })
    }

    /// Division; the divisor must have a known valuation (unit form).
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        match &other.repr {
            Repr::Unit { valuation, unit } => {
                let inv = PadicScalarQ {
                    p: self.p,
                    repr: Repr::Unit {
                        valuation: -valuation,
                        unit: unit.invert()?,
                    },
                };
                self.mul(&inv)
            }
            _ => Err(Error::NonUnit),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Unit { valuation, unit } => PadicScalarQ {
                p: self.p,
                repr: Repr::Unit {
                    valuation: *valuation,
                    unit: unit.neg(),
                },
            },
            _ => self.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        use Repr::*;
        match (&self.repr, &other.repr) {
            (ExactZero, _) => Ok(other.clone()),
            (_, ExactZero) => Ok(self.clone()),
            (BelowPrecision { bound }, r @ Unit { valuation, .. })
            | (r @ Unit { valuation, .. }, BelowPrecision { bound }) => {
                if valuation < bound {
                    // the unit term dominates and stays exact
                    Ok(PadicScalarQ {
                        p: self.p,
                        repr: r.clone(),
                    })
                } else {
                    Ok(PadicScalarQ::below_precision(
                        self.p,
                        (*bound).min(*valuation),
                    ))
                }
            }
            (BelowPrecision { bound: a }, BelowPrecision { bound: b }) => {
                Ok(PadicScalarQ::below_precision(self.p, (*a).min(*b)))
            }
            (
                Unit {
                    valuation: v1,
                    unit: u1,
                },
                Unit {
                    valuation: v2,
                    unit: u2,
                },
            ) => {
                // align at the smaller valuation; absolute precision of each
                // term is valuation + unit precision
                let v = (*v1).min(*v2);
                let abs_prec = (v1 + u1.precision() as i64).min(v2 + u2.precision() as i64);
                let digits = (abs_prec - v).max(0) as u32;
                let a = shift_to(u1, (v1 - v) as u32, digits);
                let b = shift_to(u2, (v2 - v) as u32, digits);
                let sum = a.add(&b)?;
                Ok(match sum.unit_split() {
                    None => PadicScalarQ::below_precision(self.p, v + digits as i64),
                    Some((w, unit)) => PadicScalarQ {
                        p: self.p,
                        repr: Unit {
                            valuation: v + w as i64,
                            unit,
                        },
                    },
                })
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }
}

fn shift_to(unit: &PadicInt, shift: u32, digits: u32) -> PadicInt {
    let r = unit.residue() * pow_p(unit.p(), shift);
    PadicInt::from_residue(unit.p(), r, digits)
}

fn split_p_power(x: &BigInt, p: u64) -> (u32, BigInt) {
    let mut v = 0u32;
    let mut cur = x.clone();
    let p_big = BigInt::from(p);
    while !cur.is_zero() && (&cur % &p_big).is_zero() {
        cur /= &p_big;
        v += 1;
    }
    (v, cur)
}

impl fmt::Debug for PadicScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PadicScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::BelowPrecision { bound } => write!(f, "O({}^{})", self.p, bound),
            Repr::Unit { valuation, unit } => {
                if *valuation == 0 {
                    write!(f, "{}", unit)
                } else {
                    write!(f, "{}^{}*({})", self.p, valuation, unit)
                }
            }
        }
    }
}
