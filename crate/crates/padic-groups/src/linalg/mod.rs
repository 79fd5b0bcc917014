//! Finite-precision linear algebra over `Z_p`: matrices mod `p^N`, the
//! diagonal normal form, linear solving with audit margins, stable row
//! modules of integer matrices, and the column-span density test.

mod row_module;
mod snf;
mod solve;

pub use row_module::{stable_row_module, RowModule};
pub use snf::{smith_normal_form, NormalForm};
pub use solve::{
    row_span_member, solve_unit_system, AffineSolution, SpanMembership, SystemSolution, MARGIN_WARN,
};

use crate::error::{Error, Result};
use crate::padic::{pow_p, val_of_biguint, PadicInt, Valuation};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt;

/// A rectangular matrix of `Z_p` residues at a uniform absolute precision.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicMatrix {
    p: u64,
    precision: u32,
    rows: usize,
    cols: usize,
    data: Vec<BigUint>, // row-major, each < p^precision
}

impl PadicMatrix {
    pub fn zero(p: u64, precision: u32, rows: usize, cols: usize) -> Self {
        PadicMatrix {
            p,
            precision,
            rows,
            cols,
            data: vec![BigUint::zero(); rows * cols],
        }
    }

    pub fn identity(p: u64, precision: u32, n: usize) -> Self {
        let mut m = Self::zero(p, precision, n, n);
        for i in 0..n {
            m.data[i * n + i] = BigUint::one();
        }
        m
    }

    pub fn from_int_rows(p: u64, precision: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            for &x in r {
                data.push(PadicInt::new(p, x, precision)?.residue().clone());
            }
        }
        Ok(PadicMatrix {
            p,
            precision,
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_residue_rows(p: u64, precision: u32, rows: Vec<Vec<BigUint>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let m = pow_p(p, precision);
        let data = rows.into_iter().flatten().map(|x| x % &m).collect();
        Ok(PadicMatrix {
            p,
            precision,
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> BigUint {
        pow_p(self.p, self.precision)
    }

    pub fn residue(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.cols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> PadicInt {
        PadicInt::from_residue(self.p, self.data[i * self.cols + j].clone(), self.precision)
    }

    pub fn row_residues(&self, i: usize) -> Vec<BigUint> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row(&self, i: usize) -> Vec<PadicInt> {
        (0..self.cols).map(|j| self.entry(i, j)).collect()
    }

    pub fn transpose(&self) -> PadicMatrix {
        let mut out = PadicMatrix::zero(self.p, self.precision, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    pub fn with_precision(&self, n: u32) -> PadicMatrix {
        if n >= self.precision {
            return self.clone();
        }
        let m = pow_p(self.p, n);
        PadicMatrix {
            p: self.p,
            precision: n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x % &m).collect(),
        }
    }

    pub fn mul(&self, other: &PadicMatrix) -> Result<PadicMatrix> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = self.precision.min(other.precision);
        let m = pow_p(self.p, n);
        let mut out = PadicMatrix::zero(self.p, n, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigUint::zero();
                for k in 0..self.cols {
                    acc += &self.data[i * self.cols + k] * &other.data[k * other.cols + j];
                }
                out.data[i * other.cols + j] = acc % &m;
            }
        }
        Ok(out)
    }

    /// Matrix-vector product with residues.
    pub fn mul_residue_vec(&self, v: &[BigUint]) -> Result<Vec<BigUint>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}-vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let m = self.modulus();
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigUint::zero();
                for k in 0..self.cols {
                    acc += &self.data[i * self.cols + k] * &v[k];
                }
                acc % &m
            })
            .collect())
    }

    pub(crate) fn entry_valuation(&self, i: usize, j: usize) -> Valuation {
        val_of_biguint(self.residue(i, j), self.p, self.precision)
    }

    /// Valuation of the leading (leftmost nonzero) entry of each row; rows
    /// that vanish at precision contribute nothing.
    pub fn row_pivot_exponents(&self) -> Vec<u32> {
        (0..self.rows)
            .filter_map(|i| (0..self.cols).find_map(|j| self.entry_valuation(i, j).exact()))
            .collect()
    }

    /// Determinant of the mod-`p` reduction (an element of `F_p`).
    fn det_mod_p(&self) -> Result<u64> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let p = self.p as u128;
        let n = self.rows;
        let mut a: Vec<u128> = self
            .data
            .iter()
            .map(|x| (x % BigUint::from(self.p)).try_into().unwrap_or(0u64) as u128)
            .collect();
        let mut det: u128 = 1;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_multiple_of(p));
            let Some(pr) = pivot else { return Ok(0) };
            if pr != col {
                for j in 0..n {
                    a.swap(pr * n + j, col * n + j);
                }
                det = det * (p - 1) % p;
            }
            let piv = a[col * n + col] % p;
            det = det * piv % p;
            let inv = mod_inverse_u128(piv, p);
            for r in (col + 1)..n {
                let f = a[r * n + col] % p * inv % p;
                if f != 0 {
                    for j in col..n {
                        let sub = f * (a[col * n + j] % p) % p;
                        a[r * n + j] = (a[r * n + j] + p * p - sub) % p;
                    }
                }
            }
        }
        Ok(det as u64)
    }

    /// Invertibility over `Z_p`, decided exactly from residues mod `p`.
    pub fn is_gl_zp(&self) -> Result<bool> {
        Ok(self.det_mod_p()? != 0)
    }

    /// Column-span density: normalize every nonzero column to unit norm and
    /// test whether the mod-`p` reductions span the full residue space.
    pub fn column_span_dense(&self) -> bool {
        if self.rows == 0 {
            return true;
        }
        let p_big = BigUint::from(self.p);
        let mut reduced: Vec<Vec<u64>> = Vec::new();
        for j in 0..self.cols {
            let col: Vec<BigUint> = (0..self.rows).map(|i| self.residue(i, j).clone()).collect();
            let min_val = col
                .iter()
                .map(|x| val_of_biguint(x, self.p, self.precision).lower_bound())
                .min()
                .unwrap_or(self.precision);
            if min_val >= self.precision {
                continue; // zero column at precision
            }
            let scale = pow_p(self.p, min_val);
            reduced.push(
                col.iter()
                    .map(|x| {
                        let t = (x / &scale) % &p_big;
                        t.try_into().unwrap_or(0u64)
                    })
                    .collect(),
            );
        }
        rank_mod_p(&reduced, self.rows, self.p) == self.rows
    }
}

fn mod_inverse_u128(a: u128, p: u128) -> u128 {
    // Fermat: p prime, a != 0 mod p
    let mut result: u128 = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Rank over `F_p` of a set of vectors of the given dimension.
fn rank_mod_p(vecs: &[Vec<u64>], dim: usize, p: u64) -> usize {
    let p = p as u128;
    let mut basis: Vec<Vec<u128>> = Vec::new();
    for v in vecs {
        let mut w: Vec<u128> = v.iter().map(|&x| x as u128 % p).collect();
        for b in &basis {
            let lead = b.iter().position(|&x| x != 0).unwrap();
            if w[lead] != 0 {
                let f = w[lead] * mod_inverse_u128(b[lead], p) % p;
                for j in 0..dim {
                    w[j] = (w[j] + p * p - f * b[j] % p) % p;
                }
            }
        }
        if w.iter().any(|&x| x != 0) {
            basis.push(w);
            if basis.len() == dim {
                break;
            }
        }
    }
    basis.len()
}

impl fmt::Debug for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PadicMatrix(p={}, N={}) [", self.p, self.precision)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.residue(i, j).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
