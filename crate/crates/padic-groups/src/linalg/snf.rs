//! Diagonal normal form over `Z/p^N`.
//!
//! Over the local ring `Z/p^N` the Smith form needs no gcd chains: pick the
//! entry of smallest valuation, normalize it to a pure power of `p`, clear
//! its row and column, recurse.  Pivot rule (for determinism): smallest
//! valuation, then lowest row index, then lowest column index.

use super::PadicMatrix;
use crate::padic::{pow_p, val_of_biguint};
use num_bigint::BigUint;

/// `u * a * v = d` mod `p^N`, with `u`, `v` invertible over `Z_p` and `d`
/// diagonal with ascending pure-p-power entries (trailing zeros at
/// precision allowed).
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub u: PadicMatrix,
    pub d: PadicMatrix,
    pub v: PadicMatrix,
}

impl NormalForm {
    /// Exponents of the nonzero diagonal entries (ascending).
    pub fn pivot_exponents(&self) -> Vec<u32> {
        let n = self.d.rows().min(self.d.cols());
        let mut out = Vec::new();
        for t in 0..n {
            match self.d.entry_valuation(t, t).exact() {
                Some(e) => out.push(e),
                None => break,
            }
        }
        out
    }
}

pub fn smith_normal_form(a: &PadicMatrix) -> NormalForm {
    let p = a.p();
    let n = a.precision();
    let modulus = pow_p(p, n);
    let (rows, cols) = (a.rows(), a.cols());

    let mut work: Vec<Vec<BigUint>> = (0..rows).map(|i| a.row_residues(i)).collect();
    let mut u: Vec<Vec<BigUint>> = identity_rows(p, n, rows);
    let mut v: Vec<Vec<BigUint>> = identity_rows(p, n, cols);

    for t in 0..rows.min(cols) {
        // pivot: minimal valuation in the trailing submatrix
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if let Some(e) = val_of_biguint(&work[i][j], p, n).exact() {
                    let better = match best {
                        None => true,
                        Some((be, bi, bj)) => (e, i, j) < (be, bi, bj),
                    };
                    if better {
                        best = Some((e, i, j));
                    }
                }
            }
        }
        let Some((e, pi, pj)) = best else { break };

        work.swap(t, pi);
        u.swap(t, pi);
        if pj != t {
            for row in work.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }

        // normalize pivot to p^e: multiply row t by the inverse of its unit part
        let p_pow = pow_p(p, e);
        let unit = &work[t][t] / &p_pow;
        let unit_inv = mod_inverse(&unit, &modulus);
        scale_row(&mut work[t], &unit_inv, &modulus);
        scale_row(&mut u[t], &unit_inv, &modulus);
        debug_assert_eq!(work[t][t], p_pow);

        // clear column t below/above
        for i in 0..rows {
            if i == t {
                continue;
            }
            let f = &work[i][t] / &p_pow; // exact: val >= e by pivot minimality
            if f != BigUint::ZERO {
                row_sub_scaled(&mut work, i, t, &f, &modulus);
                row_sub_scaled(&mut u, i, t, &f, &modulus);
            }
        }
        // clear row t to the right/left: column ops mirror on v
        for j in 0..cols {
            if j == t {
                continue;
            }
            let f = &work[t][j] / &p_pow;
            if f != BigUint::ZERO {
                col_sub_scaled(&mut work, j, t, &f, &modulus);
                col_sub_scaled(&mut v, j, t, &f, &modulus);
            }
        }
    }

    let d = PadicMatrix::from_residue_rows(p, n, work).expect("shape preserved");
    let u = PadicMatrix::from_residue_rows(p, n, u).expect("square");
    let v = PadicMatrix::from_residue_rows(p, n, v).expect("square");
    NormalForm { u, d, v }
}

fn identity_rows(p: u64, _n: u32, size: usize) -> Vec<Vec<BigUint>> {
    let _ = p;
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        BigUint::from(1u32)
                    } else {
                        BigUint::ZERO
                    }
                })
                .collect()
        })
        .collect()
}

fn scale_row(row: &mut [BigUint], f: &BigUint, modulus: &BigUint) {
    for x in row.iter_mut() {
        *x = (&*x * f) % modulus;
    }
}

fn row_sub_scaled(m: &mut [Vec<BigUint>], dst: usize, src: usize, f: &BigUint, modulus: &BigUint) {
    let src_row = m[src].clone();
    for (x, s) in m[dst].iter_mut().zip(src_row.iter()) {
        let sub = (f * s) % modulus;
        *x = (&*x + modulus - sub) % modulus;
    }
}

fn col_sub_scaled(m: &mut [Vec<BigUint>], dst: usize, src: usize, f: &BigUint, modulus: &BigUint) {
    for row in m.iter_mut() {
        let sub = (f * &row[src]) % modulus;
        row[dst] = (&row[dst] + modulus - sub) % modulus;
    }
}

fn mod_inverse(a: &BigUint, modulus: &BigUint) -> BigUint {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Signed;
    let a = BigInt::from(a.clone());
    let m = BigInt::from(modulus.clone());
    let ext = a.extended_gcd(&m);
    let mut inv = ext.x.mod_floor(&m);
    if inv.is_negative() {
        inv += &m;
    }
    inv.to_biguint().expect("reduced")
}
