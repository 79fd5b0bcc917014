//! Independent brute-force reference implementations for the test suite.
//!
//! Everything here works in exact integer arithmetic and deliberately
//! shares no machinery with the p-adic modules: the duplication is the
//! point, these are the second opinion the main path is checked against.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Outcome of the iterated divisibility probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisibilityAnswer {
    pub divisible: bool,
    /// True when the iteration bound was reached without a witness: the
    /// answer "false" is then "not found within bound", not a proof.
    pub exhausted: bool,
}

fn mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn to_bigint_matrix(a: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Is `g` in `p^k G` for `G = union A^{-m} Z^r`?  True iff some iterate
/// `A^m g` vanishes mod `p^k`; the chain of solution lattices stabilizes
/// within `k*r` steps, so the default bound `k*r + 4` is conclusive.
pub fn oracle_divisible(
    a: &[Vec<i64>],
    g: &[i64],
    p: u64,
    k: u32,
    m_max: Option<u32>,
) -> DivisibilityAnswer {
    let r = a.len();
    let bound = m_max.unwrap_or(k * r as u32 + 4);
    let modulus = BigInt::from(p).pow(k);
    let a = to_bigint_matrix(a);
    let mut vec: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
    let vanishes = |v: &[BigInt]| v.iter().all(|x| (x % &modulus).is_zero());
    if vanishes(&vec) {
        return DivisibilityAnswer {
            divisible: true,
            exhausted: false,
        };
    }
    for _ in 1..=bound {
        vec = mat_vec(&a, &vec);
        // keep entries bounded; divisibility mod p^k is preserved
        for x in vec.iter_mut() {
            *x = &*x % &modulus;
        }
        if vanishes(&vec) {
            return DivisibilityAnswer {
                divisible: true,
                exhausted: false,
            };
        }
    }
    DivisibilityAnswer {
        divisible: false,
        exhausted: true,
    }
}

/// Elementary divisors (diagonal of the Smith form) of an integer matrix,
/// optionally tracking the right transform `V` (so that `A V` has the
/// staircase columns that exhibit the divisors).
fn smith_diagonal_with_v(
    mut a: Vec<Vec<BigInt>>,
    track_v: bool,
) -> (Vec<BigInt>, Option<Vec<Vec<BigInt>>>) {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut v: Option<Vec<Vec<BigInt>>> = if track_v {
        Some(
            (0..cols)
                .map(|i| {
                    (0..cols)
                        .map(|j| {
                            if i == j {
                                BigInt::from(1)
                            } else {
                                BigInt::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    };
    let swap_cols =
        |a: &mut Vec<Vec<BigInt>>, v: &mut Option<Vec<Vec<BigInt>>>, x: usize, y: usize| {
            for row in a.iter_mut() {
                row.swap(x, y);
            }
            if let Some(v) = v {
                for row in v.iter_mut() {
                    row.swap(x, y);
                }
            }
        };
    let col_sub = |a: &mut Vec<Vec<BigInt>>,
                   v: &mut Option<Vec<Vec<BigInt>>>,
                   dst: usize,
                   src: usize,
                   q: &BigInt| {
        for row in a.iter_mut() {
            let s = q * &row[src];
            row[dst] -= s;
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                let s = q * &row[src];
                row[dst] -= s;
            }
        }
    };
    let mut out = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // locate a minimal-magnitude nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        if bj != t {
            swap_cols(&mut a, &mut v, t, bj);
        }
        let mut clean = false;
        while !clean {
            clean = true;
            for i in (t + 1)..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in 0..cols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    col_sub(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, &mut v, t, j);
                        clean = false;
                    }
                }
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    (out, v)
}

fn smith_diagonal(a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    smith_diagonal_with_v(a, false).0
}

/// A full-rank sublattice of `Z^ambient`, presented by basis columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    ambient: usize,
    /// basis vectors as columns, independent over `Q`
    basis_columns: Vec<Vec<BigInt>>,
}

impl IntLattice {
    /// The solution lattice `{z : P z = 0 mod modulus}` (always full rank:
    /// it contains `modulus * Z^r`).  Basis from a Smith decomposition:
    /// writing `P V' = staircase` with `V'` unimodular, the solutions are
    /// `V' diag(modulus / gcd(d_i, modulus))`.
    fn kernel_mod(p_mat: &[Vec<BigInt>], modulus: &BigInt) -> Self {
        let r = p_mat.len();
        let (diag, v) = smith_diagonal_with_v(p_mat.to_vec(), true);
        let v = v.expect("tracked");
        // coordinates beyond the nonzero diagonal face no constraint
        let mut scales = vec![BigInt::from(1); r];
        for (i, d) in diag.iter().enumerate() {
            let g = gcd_big(d, modulus);
            scales[i] = modulus / g;
        }
        let basis_columns: Vec<Vec<BigInt>> = (0..r)
            .map(|j| (0..r).map(|i| &v[i][j] * &scales[j]).collect())
            .collect();
        IntLattice {
            ambient: r,
            basis_columns,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis_columns(&self) -> &[Vec<BigInt>] {
        &self.basis_columns
    }

    /// `[Z^ambient : L]` (absolute determinant of the basis matrix).
    pub fn index(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> = (0..self.ambient)
            .map(|i| {
                (0..self.ambient)
                    .map(|j| self.basis_columns[j][i].clone())
                    .collect()
            })
            .collect();
        smith_diagonal(rows).iter().product::<BigInt>().abs()
    }

    /// Elementary divisors of `Z^ambient / L`, the nontrivial ones only
    /// (divisibility chain enforced).
    pub fn quotient_invariants(&self) -> Vec<BigInt> {
        let rows: Vec<Vec<BigInt>> = (0..self.ambient)
            .map(|i| {
                (0..self.ambient)
                    .map(|j| self.basis_columns[j][i].clone())
                    .collect()
            })
            .collect();
        let mut ds = smith_diagonal(rows);
        // gcd/lcm passes until d_i | d_{i+1} throughout
        let mut settled = false;
        while !settled {
            settled = true;
            for i in 0..ds.len().saturating_sub(1) {
                for j in (i + 1)..ds.len() {
                    if !(&ds[j] % &ds[i]).is_zero() {
                        let g = gcd_big(&ds[i], &ds[j]);
                        let l = (&ds[i] * &ds[j]) / &g;
                        ds[i] = g;
                        ds[j] = l;
                        settled = false;
                    }
                }
            }
        }
        let mut ds: Vec<BigInt> = ds.into_iter().filter(|d| d > &BigInt::from(1)).collect();
        ds.sort();
        ds
    }
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// Invariant factors of `G/p^k G` for `G = union A^{-m} Z^r`, as ascending
/// exponents (each factor is `Z/p^e`).
///
/// `Z^r ∩ p^k G = {z : A^m z = 0 mod p^k for some m}` is an increasing
/// lattice chain that stabilizes; `Z^r` surjects onto `G/p^k G`, so the
/// quotient is `Z^r` modulo the stabilized lattice, read off an integer
/// Smith normal form.
pub fn oracle_quotient(a: &[Vec<i64>], p: u64, k: u32) -> Result<Vec<u32>> {
    let r = a.len();
    if a.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch(
            "quotient oracle needs a square matrix".into(),
        ));
    }
    let modulus = BigInt::from(p).pow(k);
    let a = to_bigint_matrix(a);

    let exponents_of = |lat: &IntLattice| -> Vec<u32> {
        lat.quotient_invariants()
            .iter()
            .map(|d| {
                let mut e = 0u32;
                let mut cur = d.clone();
                let pb = BigInt::from(p);
                while (&cur % &pb).is_zero() {
                    cur /= &pb;
                    e += 1;
                }
                debug_assert!(cur.abs() == BigInt::from(1), "divisor must be a p-power");
                e
            })
            .collect()
    };

    let mut power: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        BigInt::from(1)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut lattice = IntLattice::kernel_mod(&power, &modulus);
    let hard_stop = 4 * k * r as u32 + 8;
    for _ in 0..hard_stop {
        // next power of A mod p^k (the kernel only depends on residues)
        let mut next = vec![vec![BigInt::zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = BigInt::zero();
                for l in 0..r {
                    acc += &a[i][l] * &power[l][j];
                }
                next[i][j] = ((acc % &modulus) + &modulus) % &modulus;
            }
        }
        power = next;
        let cur = IntLattice::kernel_mod(&power, &modulus);
        // the chain is increasing, so equal indices mean equal lattices
        if cur.index() == lattice.index() {
            return Ok(exponents_of(&lattice));
        }
        lattice = cur;
    }
    Ok(exponents_of(&lattice))
}

/// All residues `x` mod `p^n` with `f(x) = 0 mod p^n`, by exhaustive
/// search; `p^n` is capped at 10^7.
pub fn oracle_hensel(coeffs: &[i64], p: u64, n: u32) -> Result<Vec<u64>> {
    let modulus = (p as u128)
        .checked_pow(n)
        .ok_or_else(|| Error::InvalidInput("modulus overflow in exhaustive root search".into()))?;
    if modulus > 10_000_000 {
        return Err(Error::InvalidInput(format!(
            "exhaustive root search bound exceeded: {modulus} > 10^7"
        )));
    }
    let m = modulus as i128;
    let mut out = Vec::new();
    for x in 0..modulus {
        let x = x as i128;
        let mut acc: i128 = 0;
        for &c in coeffs.iter().rev() {
            acc = (acc * x + c as i128).rem_euclid(m);
        }
        if acc == 0 {
            out.push(x as u64);
        }
    }
    Ok(out)
}
