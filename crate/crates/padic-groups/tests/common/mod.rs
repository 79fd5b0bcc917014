//! Shared helpers for the randomized suites: seeded RNG, random integer and
//! unimodular matrices, random `GL(n, Z_p)` scalings, and random group
//! members of inductive limits.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use padic_groups::classify::RationalMatrix;
use padic_groups::group::{FactoredForm, GroupElement, InductiveLimitGroup};
use padic_groups::intmat::IntMatrix;
use padic_groups::linalg::PadicMatrix;
use padic_groups::padic::PadicInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_int_rows(rng: &mut StdRng, r: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..r)
        .map(|_| (0..r).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

/// A random nonsingular integer matrix whose determinant is divisible by
/// one of the probe primes; returns the matrix and such a prime.
pub fn random_limit_with_prime(
    rng: &mut StdRng,
    max_rank: usize,
    primes: &[u64],
) -> (Vec<Vec<i64>>, u64) {
    loop {
        let r = rng.gen_range(1..=max_rank);
        let rows = random_int_rows(rng, r, 5);
        let Ok(m) = IntMatrix::from_i64_rows(&rows) else {
            continue;
        };
        let Ok(det) = m.det() else { continue };
        if num_traits::Zero::is_zero(&det) {
            continue;
        }
        let divisors: Vec<u64> = primes
            .iter()
            .copied()
            .filter(|&p| num_traits::Zero::is_zero(&(&det % num_bigint::BigInt::from(p))))
            .collect();
        if divisors.is_empty() {
            continue;
        }
        let p = divisors[rng.gen_range(0..divisors.len())];
        return (rows, p);
    }
}

/// Product of random elementary integer matrices: determinant +-1.
pub fn random_unimodular(rng: &mut StdRng, n: usize, steps: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if n > 1 {
            while j == i {
                j = rng.gen_range(0..n);
            }
        }
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                // row_i += c * row_j
                let c = rng.gen_range(-2..=2i64);
                for k in 0..n {
                    m[i][k] += c * m[j][k];
                }
            }
            1 if n > 1 => m.swap(i, j),
            _ => {
                for k in 0..n {
                    m[i][k] = -m[i][k];
                }
            }
        }
    }
    m
}

/// A random matrix invertible over `Z_p` at the given precision.
pub fn random_gl_zp(rng: &mut StdRng, n: usize, p: u64, precision: u32) -> PadicMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..1000)).collect())
            .collect();
        let m = PadicMatrix::from_int_rows(p, precision, &rows).expect("prime validated");
        if m.is_gl_zp().expect("square") {
            return m;
        }
    }
}

/// Random members of `G = union A^{-e} Z^r`: `A^{-e} z` for small `e`.
pub fn random_members(
    rng: &mut StdRng,
    a_rows: &[Vec<i64>],
    count: usize,
    max_power: u32,
) -> Vec<GroupElement> {
    let a = RationalMatrix::from_i64_rows(a_rows).expect("square");
    let inv = a.inverse().expect("nonsingular");
    (0..count)
        .map(|_| {
            let e = rng.gen_range(0..=max_power);
            let z: Vec<i64> = (0..a_rows.len()).map(|_| rng.gen_range(-9..=9)).collect();
            let mut v = GroupElement::from_i64s(&z);
            for _ in 0..e {
                v = inv.apply(&v).expect("conformable");
            }
            v
        })
        .collect()
}

/// Random members whose denominator depth at `p` stays decidable at the
/// working precision.
pub fn random_members_bounded(
    rng: &mut StdRng,
    a_rows: &[Vec<i64>],
    count: usize,
    max_power: u32,
    p: u64,
    max_den_val: u32,
) -> Vec<GroupElement> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let candidate = random_members(rng, a_rows, 1, max_power)
            .pop()
            .expect("one");
        if candidate.denominator_valuation(p) <= max_den_val {
            out.push(candidate);
        }
    }
    out
}

pub fn limit_form(a_rows: &[Vec<i64>], precision: u32) -> (InductiveLimitGroup, FactoredForm) {
    let limit = InductiveLimitGroup::from_i64_rows(a_rows).expect("nonsingular");
    let form = limit.factored_form(precision).expect("valid form");
    (limit, form)
}

pub fn pint(p: u64, v: i64, n: u32) -> PadicInt {
    PadicInt::new(p, v, n).expect("prime")
}

pub fn random_padic(rng: &mut StdRng, p: u64, n: u32) -> PadicInt {
    // two random limbs cover p^n for every small prime used in tests
    let lo = rng.gen::<u64>();
    let hi = rng.gen::<u64>();
    let value = num_bigint::BigInt::from(hi) << 64 | num_bigint::BigInt::from(lo);
    PadicInt::new(p, value, n).expect("prime")
}
