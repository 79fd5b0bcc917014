//! Polynomials over `Q_p`: Hensel lifting of simple roots and the Newton
//! polygon.

use super::scalar::{PadicScalarQ, ScalarValuation};
use super::PadicInt;
use crate::error::{Error, Result};
use num_rational::Ratio;

/// A polynomial with `Q_p` coefficients, constant term first.
#[derive(Clone, Debug)]
pub struct PadicPoly {
    p: u64,
    coefficients: Vec<PadicScalarQ>,
}

impl PadicPoly {
    pub fn new(p: u64, coefficients: Vec<PadicScalarQ>) -> Result<Self> {
        match coefficients.last() {
            None => return Err(Error::ZeroPolynomial),
            Some(c) if c.is_exact_zero() => {
                return Err(Error::InvalidInput(
                    "leading coefficient must be nonzero".into(),
                ))
            }
            _ => {}
        }
        for c in &coefficients {
            if c.p() != p {
                return Err(Error::PrimeMismatch(p, c.p()));
            }
        }
        Ok(PadicPoly { p, coefficients })
    }

    pub fn from_integer_coefficients(p: u64, coeffs: &[i64], precision: u32) -> Result<Self> {
        let cs = coeffs
            .iter()
            .map(|&c| {
                if c == 0 {
                    Ok(PadicScalarQ::exact_zero(p))
                } else {
                    Ok(PadicScalarQ::from_padic_int(&PadicInt::new(
                        p, c, precision,
                    )?))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PadicPoly::new(p, cs)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[PadicScalarQ] {
        &self.coefficients
    }

    /// Coefficients as `PadicInt`s mod `p^precision`; all must be integral.
    fn integral_coefficients(&self, precision: u32) -> Result<Vec<PadicInt>> {
        self.coefficients
            .iter()
            .map(|c| {
                c.to_padic_int(precision).map_err(|_| {
                    Error::InvalidInput("polynomial has non-integral coefficients".into())
                })
            })
            .collect()
    }

    /// Horner evaluation over `Z/p^N` (integral coefficients only).
    pub fn eval_int(&self, x: &PadicInt) -> Result<PadicInt> {
        let cs = self.integral_coefficients(x.precision())?;
        let mut acc = PadicInt::zero(self.p, x.precision())?;
        for c in cs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Result<PadicPoly> {
        if self.coefficients.len() == 1 {
            // derivative of a constant: represent as the zero constant is
            // invalid (leading must be nonzero), so callers avoid this
            return Err(Error::ZeroPolynomial);
        }
        let mut cs = Vec::with_capacity(self.coefficients.len() - 1);
        for (i, c) in self.coefficients.iter().enumerate().skip(1) {
            let k = PadicScalarQ::from_rational(
                self.p,
                &num_rational::BigRational::from(num_bigint::BigInt::from(i)),
                // digit budget for the scalar multiple; inherited precision
                // of c dominates in eval
                64,
            )?;
            cs.push(c.mul(&k)?);
        }
        PadicPoly::new(self.p, cs)
    }
}

/// Lift a simple root mod `p` to a root mod `p^precision` by Newton
/// iteration (quadratic convergence: correct digits double each step).
pub fn hensel_lift(f: &PadicPoly, a0: u64, precision: u32) -> Result<PadicInt> {
    let p = f.p();
    // simple-root condition mod p
    let x0 = PadicInt::new(p, a0 as i64, 1)?;
    let fx = f.eval_int(&x0)?;
    if !fx.is_zero_at_precision() {
        return Err(Error::NotASimpleRoot);
    }
    let df = f.derivative()?;
    let dfx = df.eval_int(&x0)?;
    if !dfx.is_unit() {
        return Err(Error::NotASimpleRoot);
    }

    let mut k = 1u32;
    let mut a = PadicInt::new(p, a0 as i64, 1)?;
    while k < precision {
        k = (2 * k).min(precision);
        // re-embed the current approximation at the wider precision
        let wide = PadicInt::from_residue(p, a.residue().clone(), k);
        let fa = f.eval_int(&wide)?;
        let dfa = df.eval_int(&wide)?;
        let step = fa.mul(&dfa.invert()?)?;
        a = wide.sub(&step)?;
    }
    Ok(a)
}

/// One segment of the lower Newton polygon: `length` roots of valuation
/// `-slope`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonSegment {
    pub slope: Ratio<i64>,
    pub length: u32,
}

/// Lower convex hull of the points `(i, val(c_i))`.  Exact-zero
/// coefficients contribute no point; a coefficient that vanished at
/// precision has an undecidable valuation and is rejected.
pub fn newton_polygon(f: &PadicPoly) -> Result<Vec<PolygonSegment>> {
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for (i, c) in f.coefficients().iter().enumerate() {
        match c.valuation() {
            ScalarValuation::Infinite => continue,
            ScalarValuation::Exact(v) => pts.push((i as i64, v)),
            ScalarValuation::AtLeast(b) => {
                return Err(Error::PrecisionExhausted {
                    needed: b.max(0) as u32 + 1,
                    available: b.max(0) as u32,
                })
            }
        }
    }
    if pts.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if pts[0].0 != 0 {
        return Err(Error::InvalidInput(
            "constant term must have finite valuation".into(),
        ));
    }
    // monotone-chain lower hull (points already sorted by x)
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // keep the hull turning left: drop b if (a,b,pt) is clockwise or
            // collinear
            if (b.0 - a.0) * (pt.1 - a.1) - (pt.0 - a.0) * (b.1 - a.1) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        segments.push(PolygonSegment {
            slope: Ratio::new(y1 - y0, x1 - x0),
            length: (x1 - x0) as u32,
        });
    }
    Ok(segments)
}
