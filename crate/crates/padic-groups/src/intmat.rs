//! Exact integer matrices (arbitrary precision), used to present stationary
//! inductive limits and to reduce them into `Z/p^N`.

use crate::error::{Error, Result};
use crate::linalg::PadicMatrix;
use crate::padic::pow_p;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if nrows == 0 || ncols == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntMatrix {
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

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul_mod(&self, other: &IntMatrix, modulus: &BigUint) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let m = BigInt::from(modulus.clone());
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.entry(i, k) * other.entry(k, j);
                }
                data.push(acc.mod_floor(&m));
            }
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let swap = (k + 1..n).find(|&r| !a[r * n + k].is_zero());
                match swap {
                    None => return Ok(BigInt::zero()),
                    Some(r) => {
                        for j in 0..n {
                            a.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = num / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        Ok(sign * a[(n - 1) * n + (n - 1)].clone())
    }

    /// Reduce entries into `Z/p^N`.
    pub fn reduce_mod_pn(&self, p: u64, precision: u32) -> PadicMatrix {
        let m = BigInt::from(pow_p(p, precision));
        let rows: Vec<Vec<BigUint>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let mut r = self.entry(i, j).mod_floor(&m);
                        if r.is_negative() {
                            r += &m;
                        }
                        r.to_biguint().expect("reduced")
                    })
                    .collect()
            })
            .collect();
        PadicMatrix::from_residue_rows(p, precision, rows).expect("rectangular")
    }

    /// Prime divisors of `|det|` by trial division; errors when a factor
    /// beyond the trial bound survives.
    pub fn det_prime_divisors(&self) -> Result<Vec<u64>> {
        let d = self.det()?;
        if d.is_zero() {
            return Err(Error::SingularMatrix);
        }
        factor_primes(&d.abs().to_biguint().expect("abs"))
    }
}

const TRIAL_BOUND: u64 = 1_000_000;

/// Distinct prime divisors of `n` by trial division up to `TRIAL_BOUND`.
pub fn factor_primes(n: &BigUint) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = n.clone();
    let one = BigUint::one();
    let mut d = 2u64;
    while cur > one && d <= TRIAL_BOUND {
        let db = BigUint::from(d);
        if (&cur % &db).is_zero() {
            out.push(d);
            while (&cur % &db).is_zero() {
                cur /= &db;
            }
        }
        d += if d == 2 { 1 } else { 2 };
        if &db * &db > cur && cur > one {
            // remaining cofactor is prime
            let f: u64 = cur.clone().try_into().map_err(|_| {
                Error::InvalidInput(format!(
                    "determinant has a prime factor beyond {TRIAL_BOUND}"
                ))
            })?;
            out.push(f);
            cur = one.clone();
        }
    }
    if cur > one {
        return Err(Error::InvalidInput(format!(
            "cannot factor determinant remainder {cur} (trial bound {TRIAL_BOUND})"
        )));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
