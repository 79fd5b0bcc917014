//! Stationary inductive limits `G = ⋃ A^{-n} Z^r` and their factored forms.
//!
//! A row `w` is a functional on `G` iff `w A^{-n}` is integral for every
//! `n`, i.e. iff `w` lies in every `Z_p`-row-span of `A^n`; the dual module
//! is the stabilized intersection of that chain.

use super::{ExceptionalDual, FactoredForm};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::linalg::{stable_row_module, PadicMatrix, RowModule};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct InductiveLimitGroup {
    matrix: IntMatrix,
    det: BigInt,
}

impl InductiveLimitGroup {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare);
        }
        let det = matrix.det()?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(InductiveLimitGroup { matrix, det })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_i64_rows(rows)?)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// The dual module `G^{*p}` mod `p^N`; the full module when `p` does not
    /// divide the determinant.
    pub fn dual_module(&self, p: u64, precision: u32) -> Result<RowModule> {
        if !(&self.det % BigInt::from(p)).is_zero() {
            let id = PadicMatrix::identity(p, precision, self.rank());
            return Ok(RowModule::from_padic_matrix(&id));
        }
        stable_row_module(&self.matrix, p, precision)
    }

    /// Canonical basis matrix of `G^{*p}` (identity when `p` is not
    /// exceptional).
    pub fn dual_matrix(&self, p: u64, precision: u32) -> Result<PadicMatrix> {
        Ok(self.dual_module(p, precision)?.basis().clone())
    }

    /// Assemble the factored form: one canonical dual per prime divisor of
    /// the determinant, full-rank identity duals omitted.
    pub fn factored_form(&self, precision: u32) -> Result<FactoredForm> {
        let primes = self.matrix.det_prime_divisors()?;
        let mut exceptional = BTreeMap::new();
        for p in primes {
            let module = self.dual_module(p, precision)?;
            if module.is_zero() {
                exceptional.insert(p, ExceptionalDual::ZeroRow);
                continue;
            }
            let basis = module.basis().clone();
            if basis.rows() == self.rank()
                && basis == PadicMatrix::identity(p, precision, self.rank())
            {
                continue; // not actually exceptional
            }
            exceptional.insert(p, ExceptionalDual::Matrix(basis));
        }
        FactoredForm::new(self.rank(), precision, exceptional)
    }
}
