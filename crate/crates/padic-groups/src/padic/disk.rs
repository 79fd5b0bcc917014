//! Closed disks in `Q_p`.
//!
//! Two disks either nest or are disjoint; intersection never produces a
//! proper lens.

use super::scalar::{PadicScalarQ, ScalarValuation};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskRadius {
    /// Radius `p^{-e}`.
    Exponent(i64),
    /// Radius 0 at the working precision: just the center.
    Point,
    /// The empty set.
    Empty,
}

/// The set `{x : |x - center|_p <= radius}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Disk {
    p: u64,
    center: PadicScalarQ,
    radius: DiskRadius,
}

impl Disk {
    pub fn new(center: PadicScalarQ, radius: DiskRadius) -> Self {
        Disk {
            p: center.p(),
            center,
            radius,
        }
    }

    pub fn empty(p: u64) -> Self {
        Disk {
            p,
            center: PadicScalarQ::exact_zero(p),
            radius: DiskRadius::Empty,
        }
    }

    pub fn point(center: PadicScalarQ) -> Self {
        Disk::new(center, DiskRadius::Point)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn center(&self) -> &PadicScalarQ {
        &self.center
    }

    pub fn radius(&self) -> DiskRadius {
        self.radius
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.radius, DiskRadius::Empty)
    }

    /// Decide `|center1 - center2|_p <= p^{-e}`; errors if the difference is
    /// zero at a precision too small to decide.
    fn centers_within(&self, other: &Disk, e: i64) -> Result<bool> {
        let d = self.center.sub(&other.center)?;
        match d.valuation() {
            ScalarValuation::Infinite => Ok(true),
            ScalarValuation::Exact(v) => Ok(v >= e),
            ScalarValuation::AtLeast(b) => {
                if b >= e {
                    Ok(true)
                } else {
                    // cannot distinguish |d| <= p^{-e} from p^{-b} >= |d| > p^{-e}
                    Err(Error::PrecisionExhausted {
                        needed: e.max(0) as u32,
                        available: b.max(0) as u32,
                    })
                }
            }
        }
    }

    pub fn contains(&self, x: &PadicScalarQ) -> Result<bool> {
        match self.radius {
            DiskRadius::Empty => Ok(false),
            DiskRadius::Point => {
                let d = self.center.sub(x)?;
                match d.valuation() {
                    ScalarValuation::Infinite => Ok(true),
                    ScalarValuation::Exact(_) => Ok(false),
                    // equal as far as we can see
                    ScalarValuation::AtLeast(_) => Ok(true),
                }
            }
            DiskRadius::Exponent(e) => Disk::point(x.clone()).centers_within(self, e),
        }
    }

    /// Set equality as subsets of `Q_p` (structural equality is finer:
    /// every point of a ball is a valid center for it).
    pub fn same_set(&self, other: &Disk) -> Result<bool> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        use DiskRadius::*;
        match (self.radius, other.radius) {
            (Empty, Empty) => Ok(true),
            (Empty, _) | (_, Empty) => Ok(false),
            (Point, Point) => self.contains(&other.center),
            (Exponent(e1), Exponent(e2)) => Ok(e1 == e2 && self.centers_within(other, e1)?),
            (Point, Exponent(_)) | (Exponent(_), Point) => Ok(false),
        }
    }

    /// Intersection: the smaller disk when they meet, empty otherwise.
    pub fn intersect(&self, other: &Disk) -> Result<Disk> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        use DiskRadius::*;
        match (self.radius, other.radius) {
            (Empty, _) | (_, Empty) => Ok(Disk::empty(self.p)),
            (Point, _) => {
                if other.contains(&self.center)? {
                    Ok(self.clone())
                } else {
                    Ok(Disk::empty(self.p))
                }
            }
            (_, Point) => other.intersect(self),
            (Exponent(e1), Exponent(e2)) => {
                // the larger radius is p^{-min(e1,e2)}
                let e_big = e1.min(e2);
                if self.centers_within(other, e_big)? {
                    if e1 >= e2 {
                        Ok(self.clone())
                    } else {
                        Ok(other.clone())
                    }
                } else {
                    Ok(Disk::empty(self.p))
                }
            }
        }
    }
}

impl fmt::Debug for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.radius {
            DiskRadius::Empty => write!(f, "empty"),
            DiskRadius::Point => write!(f, "{{{}}}", self.center),
            DiskRadius::Exponent(e) => {
                write!(f, "B({}, {}^{})", self.center, self.p, -e)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn s(p: u64, n: i64) -> PadicScalarQ {
        PadicScalarQ::from_rational(p, &BigRational::from(BigInt::from(n)), 8).unwrap()
    }

    #[test]
    fn nesting() {
        let d1 = Disk::new(s(3, 0), DiskRadius::Exponent(0));
        let d2 = Disk::new(s(3, 0), DiskRadius::Exponent(1));
        assert_eq!(d1.intersect(&d2).unwrap(), d2);
    }

    #[test]
    fn disjoint() {
        let d1 = Disk::new(s(3, 0), DiskRadius::Exponent(1));
        let d2 = Disk::new(s(3, 1), DiskRadius::Exponent(1));
        assert!(d1.intersect(&d2).unwrap().is_empty());
    }

    #[test]
    fn small_disk_inside_large() {
        // |4-1|_3 = 3^{-1} <= 3^{-1}: the radius-3^{-2} disk sits inside
        let d1 = Disk::new(s(3, 1), DiskRadius::Exponent(1));
        let d2 = Disk::new(s(3, 4), DiskRadius::Exponent(2));
        assert_eq!(d1.intersect(&d2).unwrap(), d2);
    }

    #[test]
    fn point_and_ball() {
        let pt = Disk::point(s(3, 9));
        let ball = Disk::new(s(3, 0), DiskRadius::Exponent(2));
        assert_eq!(pt.intersect(&ball).unwrap(), pt);
        let far = Disk::new(s(3, 1), DiskRadius::Exponent(1));
        assert!(pt.intersect(&far).unwrap().is_empty());
    }
}
