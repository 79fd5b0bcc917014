//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them).  Expected values are frozen from
//! independent derivations: exhaustive searches, the brute-force oracles
//! in `padic_groups::oracle`, and hand-checked integer arithmetic.

mod common;

use common::*;
use num_bigint::BigUint;
use padic_groups::classify::{
    iso_check, quotient_structure, rank1_iso, rank1_type, RationalMatrix,
};
use padic_groups::error::Error;
use padic_groups::functional::{extend_from_subgroup, Functional};
use padic_groups::group::{ExceptionalDual, FactoredForm, GroupElement, Metric};
use padic_groups::intmat::IntMatrix;
use padic_groups::io::{parse_group_spec, resolve_group_spec};
use padic_groups::linalg::{stable_row_module, PadicMatrix, RowModule};
use padic_groups::oracle;
use padic_groups::padic::{hensel_lift, newton_polygon, PadicInt, PadicPoly, ScalarValuation};
use rand::Rng;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::time::Instant;

const A21: [[i64; 2]; 2] = [[1, 1], [1, 4]];
const B22: [[i64; 3]; 3] = [[0, 0, -3], [1, 0, -1], [0, 1, -1]];

fn a21() -> Vec<Vec<i64>> {
    A21.iter().map(|r| r.to_vec()).collect()
}

fn b22() -> Vec<Vec<i64>> {
    B22.iter().map(|r| r.to_vec()).collect()
}

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

fn load_fixture(name: &str, precision: Option<u32>) -> FactoredForm {
    let raw = parse_group_spec(&fixture(name)).expect("fixture parses");
    resolve_group_spec(&raw, precision)
        .expect("fixture resolves")
        .form
}

#[test]
fn criterion_01_rank_one_dual_digits() {
    let start = Instant::now();
    let a = IntMatrix::from_i64_rows(&a21()).unwrap();
    let module = stable_row_module(&a, 3, 3).unwrap();
    assert_eq!(module.rank(), 1, "dual must have rank 1");
    let basis = module.basis();
    assert_eq!(
        (basis.residue(0, 0), basis.residue(0, 1)),
        (&BigUint::from(1u32), &BigUint::from(7u32)),
        "canonical digits must be exactly (1, 7) mod 27"
    );
    // cross-check through the eigenvalue route: the dual row is the
    // unit-normalization of (1 - lambda, 1) for the contracting root of
    // x^2 - 5x + 3
    let chi = PadicPoly::from_integer_coefficients(3, &[3, -5, 1], 3).unwrap();
    let lambda = hensel_lift(&chi, 0, 3).unwrap();
    assert_eq!(lambda.residue(), &BigUint::from(24u32));
    let row0 = PadicInt::new(3, 1, 3).unwrap().sub(&lambda).unwrap(); // 1 - lambda = 4
    let inv = row0.invert().unwrap();
    assert_eq!(
        (row0.mul(&inv).unwrap().residue(), inv.residue()),
        (&BigUint::from(1u32), &BigUint::from(7u32)),
        "unit normalization of (1 - lambda, 1) must give (1, 7)"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "criterion 1 must run in under 1s");
    println!(
        "[criterion 1] PASS: rank-1 dual canonical digits (1,7) mod 27, both routes ({:?})",
        elapsed
    );
}

#[test]
fn criterion_02_divisibility_sequence() {
    let (_, form) = limit_form(&a21(), 32);
    // the n-th element of the sequence is divisible by 3^n
    let sequence: [[i64; 2]; 5] = [[-1, 1], [-7, 1], [-7, 1], [-34, 1], [-115, 1]];
    for (idx, coords) in sequence.iter().enumerate() {
        let n = (idx + 1) as u32;
        let v = GroupElement::from_i64s(coords);
        assert!(
            form.divisible(3, n, &v).unwrap(),
            "element {idx} must be divisible by 3^{n} (metric path)"
        );
        let ans = oracle::oracle_divisible(&a21(), coords, 3, n, None);
        assert!(
            ans.divisible,
            "element {idx} must be divisible by 3^{n} (oracle path)"
        );
        // full agreement between the two paths across k = 1..=5
        for k in 1..=5u32 {
            let metric_says = form.divisible(3, k, &v).unwrap();
            let oracle_says = oracle::oracle_divisible(&a21(), coords, 3, k, None).divisible;
            assert_eq!(
                metric_says, oracle_says,
                "paths disagree at element {idx}, k={k}"
            );
        }
    }
    println!("[criterion 2] PASS: divisibility sequence n=1..5 on both paths, exact agreement");
}

/// The two documented generator rows of the rank-2 dual, reduced mod 27:
/// with the contracting root `t` of x^3 + x^2 + x + 3, the rows
/// (2, -1-t, -1-t^2) and (-1-t, 2+2t+2t^2, 2-t-t^2).
fn expected_rank2_rows(precision: u32) -> (PadicMatrix, PadicInt) {
    let chi = PadicPoly::from_integer_coefficients(3, &[3, 1, 1, 1], precision).unwrap();
    let t = hensel_lift(&chi, 0, precision).unwrap();
    let one = PadicInt::one(3, precision).unwrap();
    let two = PadicInt::new(3, 2, precision).unwrap();
    let t2 = t.mul(&t).unwrap();
    let neg_1_t = one.add(&t).unwrap().neg(); // -1 - t
    let neg_1_t2 = one.add(&t2).unwrap().neg(); // -1 - t^2
    let r1 = [two.clone(), neg_1_t.clone(), neg_1_t2];
    let sum2 = two
        .add(&two.mul(&t).unwrap())
        .unwrap()
        .add(&two.mul(&t2).unwrap())
        .unwrap(); // 2 + 2t + 2t^2
    let last = two.sub(&t).unwrap().sub(&t2).unwrap(); // 2 - t - t^2
    let r2 = [neg_1_t, sum2, last];
    let rows = vec![
        r1.iter().map(|x| x.residue().clone()).collect(),
        r2.iter().map(|x| x.residue().clone()).collect(),
    ];
    (
        PadicMatrix::from_residue_rows(3, precision, rows).unwrap(),
        t,
    )
}

#[test]
fn criterion_03_rank_two_dual_equals_documented_span() {
    let a = IntMatrix::from_i64_rows(&b22()).unwrap();
    let module = stable_row_module(&a, 3, 3).unwrap();
    assert_eq!(module.rank(), 2, "dual must have rank 2");
    let (expected, t) = expected_rank2_rows(3);
    assert_eq!(t.residue(), &BigUint::from(15u32));
    let expected_module = RowModule::from_padic_matrix(&expected);
    assert!(
        module.module_eq(&expected_module),
        "computed dual differs from the span of the two documented rows mod 27:\n\
         computed canonical: {:?}\n documented-span canonical: {:?}\n\
         The two documented rows are independent functionals but do not \
         generate the full dual: their difference is divisible by 3 inside \
         the dual (the contracting root generates a ramified quadratic \
         extension, so the half-integral symmetric combination is Galois-\
         stable and integral), making the documented span an index-3 \
         submodule.  See the regression test \
         `rank_two_dual_contains_documented_span_with_index_three`.",
        module.canonical(),
        expected_module.canonical()
    );
    println!("[criterion 3] PASS: rank-2 dual equals the documented span mod 27");
}

/// Regression pinning the actually-computed relationship for the rank-2
/// dual: the documented span is an index-3 submodule of the dual, and the
/// half-integral combination (difference of the two rows over 3) is a
/// genuine functional.
#[test]
fn rank_two_dual_contains_documented_span_with_index_three() {
    let precision = 8u32;
    let a = IntMatrix::from_i64_rows(&b22()).unwrap();
    let module = stable_row_module(&a, 3, precision).unwrap();
    assert_eq!(module.rank(), 2);
    let (expected, _) = expected_rank2_rows(precision);
    // both documented rows lie in the computed dual
    for i in 0..2 {
        assert!(
            module.contains(&expected.row(i)).unwrap(),
            "documented row {i} missing from the dual"
        );
    }
    // (row1 - row2)/3 also lies in the dual, certifying strict containment
    let diff: Vec<PadicInt> = (0..3)
        .map(|j| expected.entry(0, j).sub(&expected.entry(1, j)).unwrap())
        .collect();
    let third: Vec<PadicInt> = diff
        .iter()
        .map(|x| x.div_exact_p_pow(1).expect("difference is divisible by 3"))
        .collect();
    assert!(
        module.contains(&third).unwrap(),
        "(row1 - row2)/3 must lie in the dual"
    );
    // and the documented span has index exactly 3: adding the half-integral
    // row to the span recovers the dual
    let mut gens: Vec<Vec<BigUint>> = (0..2).map(|i| expected.row_residues(i)).collect();
    gens.push(third.iter().map(|x| x.residue().clone()).collect());
    let enlarged = RowModule::from_generators(3, precision, gens, 3);
    let reduced = RowModule::from_padic_matrix(&enlarged.canonical().with_precision(precision));
    let dual_reduced = RowModule::from_padic_matrix(&module.canonical().with_precision(precision));
    assert!(
        reduced.module_eq(&dual_reduced),
        "span + half-integral row must equal the dual"
    );
}

#[test]
fn criterion_03_newton_polygon_of_cubic() {
    let chi = PadicPoly::from_integer_coefficients(3, &[3, 1, 1, 1], 8).unwrap();
    let segs = newton_polygon(&chi).unwrap();
    assert_eq!(segs.len(), 2);
    assert_eq!(
        (segs[0].slope, segs[0].length),
        (num_rational::Ratio::new(-1, 1), 1),
        "exactly one root of valuation 1"
    );
    assert_eq!(
        (segs[1].slope, segs[1].length),
        (num_rational::Ratio::new(0, 1), 2),
        "exactly two unit roots"
    );
    println!("[criterion 3] PASS: polygon reports one contracting root and two unit roots");
}

#[test]
fn criterion_04_membership_battery() {
    let form = load_fixture("ttf.json", None);
    let member = |s: &str| form.membership(&GroupElement::parse(s).unwrap()).unwrap();
    assert!(member("1/2,0"), "(1/2, 0) must be a member");
    assert!(member("0,1/3"), "(0, 1/3) must be a member");
    assert!(member("1/5,1/5"), "(1/5, 1/5) must be a member");
    assert!(!member("0,1/2"), "(0, 1/2) must not be a member");
    assert!(!member("1/5,0"), "(1/5, 0) must not be a member");
    println!("[criterion 4] PASS: membership battery, 5/5 exact");
}

#[test]
fn criterion_05_finite_quotients_match_oracle() {
    let fixtures: Vec<(&str, Vec<Vec<i64>>)> = vec![
        ("A", a21()),
        ("B", b22()),
        ("identity", vec![vec![1, 0], vec![0, 1]]),
        ("diag(1,2)", vec![vec![1, 0], vec![0, 2]]),
    ];
    let mut comparisons = 0;
    for (name, rows) in &fixtures {
        let (_, form) = limit_form(rows, 32);
        for p in [2u64, 3, 5] {
            for k in [1u32, 2, 3] {
                let lib = quotient_structure(&form, p, k).unwrap();
                let ora = oracle::oracle_quotient(rows, p, k).unwrap();
                assert_eq!(
                    lib.exponents, ora,
                    "quotient mismatch for {name} at p={p}, k={k}"
                );
                comparisons += 1;
            }
        }
    }
    assert!(comparisons >= 30);
    println!("[criterion 5] PASS: {comparisons} quotient comparisons, all exact");
}

#[test]
fn criterion_06_extension_roundtrip_and_rejection() {
    let mut rng = rng(0xACC6);
    let precision = 16u32;
    let mut roundtrips = 0;
    let mut cache: BTreeMap<(Vec<Vec<i64>>, u64), FactoredForm> = BTreeMap::new();
    while roundtrips < 200 {
        let (rows, p) = random_limit_with_prime(&mut rng, 3, &[2, 3, 5]);
        let form = cache
            .entry((rows.clone(), p))
            .or_insert_with(|| limit_form(&rows, precision).1)
            .clone();
        let n_p = form.dual_rank(p);
        if n_p == 0 {
            continue;
        }
        // a hidden functional, restricted to a finitely generated subgroup
        let secret: Vec<PadicInt> = (0..n_p)
            .map(|_| random_padic(&mut rng, p, precision))
            .collect();
        let secret = Functional::new(p, secret).unwrap();
        let gen_count = rng.gen_range(1..=3);
        let gens = random_members_bounded(&mut rng, &rows, gen_count, 2, p, 8);
        let values: Vec<PadicInt> = gens
            .iter()
            .map(|h| {
                secret
                    .evaluate(&form, h)
                    .unwrap()
                    .to_padic_int(precision)
                    .unwrap()
            })
            .collect();
        // forget the secret; extend from the restriction
        let recovered = extend_from_subgroup(&form, p, &gens, &values).unwrap();
        // the extension agrees with the secret on 20 random elements of the
        // generated subgroup, exactly at the precision the generators admit
        // (constraints from a generator with denominator depth d are known
        // mod p^{N-d})
        let depth = gens
            .iter()
            .map(|h| h.denominator_valuation(p))
            .max()
            .unwrap_or(0);
        let tolerance = precision - depth;
        for _ in 0..20 {
            let mut u = GroupElement::zero(form.rank());
            for h in &gens {
                u = u.add(&h.scale_int(rng.gen_range(-9..=9))).unwrap();
            }
            let lhs = secret
                .evaluate(&form, &u)
                .unwrap()
                .to_padic_int(precision)
                .unwrap();
            let rhs = recovered
                .evaluate(&form, &u)
                .unwrap()
                .to_padic_int(precision)
                .unwrap();
            assert!(
                lhs.sub(&rhs)
                    .unwrap()
                    .with_precision(tolerance)
                    .is_zero_at_precision(),
                "restriction-extension roundtrip drifted on the subgroup"
            );
        }
        roundtrips += 1;
    }
    // rejection battery: prescribing |beta| > d_p(g, 0) must fail
    let mut rejections = 0;
    while rejections < 50 {
        let (rows, p) = random_limit_with_prime(&mut rng, 3, &[2, 3, 5]);
        let form = cache
            .entry((rows.clone(), p))
            .or_insert_with(|| limit_form(&rows, precision).1)
            .clone();
        if form.dual_rank(p) == 0 {
            continue;
        }
        // find a member with metric exactly 1, then push it down by p^k
        let candidates = random_members_bounded(&mut rng, &rows, 6, 1, p, 8);
        let Some(w) = candidates
            .into_iter()
            .find(|w| matches!(form.p_metric(p, w), Ok(Metric::Exact(0))))
        else {
            continue;
        };
        let k = rng.gen_range(1..=4u32);
        let g = w.scale_int((p as i64).pow(k));
        // d_p(g, 0) = p^-k, but we demand a unit value
        let err = extend_from_subgroup(&form, p, &[g], &[pint(p, 1, precision)]).unwrap_err();
        assert!(
            matches!(err, Error::NotContractive { .. }),
            "uncontractive prescription must be rejected, got {err:?}"
        );
        rejections += 1;
    }
    println!("[criterion 6] PASS: 200 restriction-extension roundtrips, 50 rejections");
}

#[test]
fn criterion_07_separation_suite() {
    let mut rng = rng(0xACC7);
    let mut instances = 0;
    while instances < 100 {
        let n = rng.gen_range(1..=3usize);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let m = rng.gen_range(1..=3u32);
        let form = FactoredForm::trivial(n, 16);
        // H = p^m Z^n + a random sublattice
        let mut h_gens: Vec<GroupElement> = (0..n)
            .map(|i| {
                let mut e = vec![0i64; n];
                e[i] = (p as i64).pow(m);
                GroupElement::from_i64s(&e)
            })
            .collect();
        for _ in 0..rng.gen_range(0..=2) {
            let extra: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
            h_gens.push(GroupElement::from_i64s(&extra));
        }
        // the subgroup mod p^m, by closure (small: at most 27^3 states)
        let modulus = (p as i64).pow(m);
        let mut span: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut frontier = vec![vec![0i64; n]];
        span.insert(vec![0i64; n]);
        while let Some(x) = frontier.pop() {
            for h in &h_gens {
                let nxt: Vec<i64> = x
                    .iter()
                    .zip(h.coords())
                    .map(|(a, b)| {
                        let b: i64 = num_traits::ToPrimitive::to_i64(b.numer()).unwrap();
                        (a + b).rem_euclid(modulus)
                    })
                    .collect();
                if span.insert(nxt.clone()) {
                    frontier.push(nxt);
                }
            }
        }
        // pick g outside H
        let g: Vec<i64> = (0..n).map(|_| rng.gen_range(-8..=8)).collect();
        let g_mod: Vec<i64> = g.iter().map(|x| x.rem_euclid(modulus)).collect();
        if span.contains(&g_mod) {
            continue; // g in H: nothing to separate
        }
        let g = GroupElement::from_i64s(&g);
        let f = padic_groups::functional::separating_functional(&form, p, &h_gens, &g, m)
            .unwrap_or_else(|e| panic!("separation failed for valid instance: {e}"));
        // |f(g)| > p^-m
        match f.evaluate(&form, &g).unwrap().valuation() {
            ScalarValuation::Exact(v) => assert!(v < m as i64, "|f(g)| must exceed p^-m"),
            other => panic!("expected exact valuation at g, got {other:?}"),
        }
        // |f(h)| <= p^-m on every generator
        for h in &h_gens {
            match f.evaluate(&form, h).unwrap().valuation() {
                ScalarValuation::Exact(v) => assert!(v >= m as i64, "|f(h)| must be <= p^-m"),
                ScalarValuation::AtLeast(b) => assert!(b >= m as i64),
                ScalarValuation::Infinite => {}
            }
        }
        instances += 1;
    }
    println!("[criterion 7] PASS: 100 separation instances satisfy the strict/weak bounds");
}

#[test]
fn criterion_08_classification_invariance() {
    let mut rng = rng(0xACC8);
    let precision = 16u32;
    let mut instances = 0;
    while instances < 100 {
        let (rows, p) = random_limit_with_prime(&mut rng, 3, &[2, 3, 5]);
        let (_, form_a) = limit_form(&rows, precision);
        let n = form_a.rank();
        // random unimodular base change V: G_B = V * G_A
        let v_rows = random_unimodular(&mut rng, n, 6);
        let v = RationalMatrix::from_i64_rows(&v_rows).unwrap();
        let v_inv = v.inverse().unwrap();
        let v_inv_int: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = v_inv.entry(i, j);
                        assert!(e.is_integer(), "unimodular inverse must be integral");
                        num_traits::ToPrimitive::to_i64(e.numer()).unwrap()
                    })
                    .collect()
            })
            .collect();
        // B_q = U_q * A_q * V^{-1} with random U_q in GL(n_q, Z_q)
        let mut exc = BTreeMap::new();
        for (&q, dual) in form_a.exceptional() {
            let new_dual = match dual {
                ExceptionalDual::ZeroRow => ExceptionalDual::ZeroRow,
                ExceptionalDual::Matrix(m) => {
                    let v_inv_red = PadicMatrix::from_int_rows(q, precision, &v_inv_int).unwrap();
                    let u = random_gl_zp(&mut rng, m.rows(), q, precision);
                    ExceptionalDual::Matrix(u.mul(m).unwrap().mul(&v_inv_red).unwrap())
                }
            };
            exc.insert(q, new_dual);
        }
        let form_b = FactoredForm::new(n, precision, exc)
            .expect("transformed form stays valid (dense columns)");
        // the witness V is accepted
        let verdict = iso_check(&form_a, &form_b, &v).unwrap();
        assert!(
            verdict.verdict,
            "iso_check rejected a constructed isomorphism"
        );
        // decisions transport along V
        for w in random_members_bounded(&mut rng, &rows, 3, 2, p, 8) {
            let wv = v.apply(&w).unwrap();
            assert_eq!(
                form_a.membership(&w).unwrap(),
                form_b.membership(&wv).unwrap(),
                "membership changed under the isomorphism"
            );
            assert_eq!(
                form_a.p_metric(p, &w).unwrap(),
                form_b.p_metric(p, &wv).unwrap(),
                "metric changed under the isomorphism"
            );
        }
        for k in 1..=2u32 {
            assert_eq!(
                quotient_structure(&form_a, p, k).unwrap().exponents,
                quotient_structure(&form_b, p, k).unwrap().exponents
            );
        }
        instances += 1;
    }
    println!("[criterion 8] PASS: 100 transported forms verified isomorphic, decisions unchanged");
}

#[test]
fn criterion_09_oracle_agreement_five_hundred() {
    let mut rng = rng(0xACC9);
    let precision = 12u32;
    let mut cache: BTreeMap<(Vec<Vec<i64>>, u64), FactoredForm> = BTreeMap::new();
    let mut tested = 0;
    let mut disagreements = 0;
    while tested < 500 {
        let (rows, p) = random_limit_with_prime(&mut rng, 3, &[2, 3, 5]);
        let form = cache
            .entry((rows.clone(), p))
            .or_insert_with(|| limit_form(&rows, precision).1)
            .clone();
        let coords: Vec<i64> = (0..rows.len()).map(|_| rng.gen_range(-50..=50)).collect();
        let k = rng.gen_range(1..=6u32);
        let v = GroupElement::from_i64s(&coords);
        let main = form.divisible(p, k, &v).unwrap();
        let ora = oracle::oracle_divisible(&rows, &coords, p, k, None);
        if main != ora.divisible {
            disagreements += 1;
            eprintln!(
                "disagreement: A={rows:?}, v={coords:?}, p={p}, k={k}: main={main}, oracle={:?}",
                ora
            );
        }
        tested += 1;
    }
    assert_eq!(disagreements, 0, "metric and oracle must agree everywhere");
    println!("[criterion 9] PASS: 500 randomized divisibility instances, zero disagreements");
}

#[test]
fn criterion_10_rank_one_classification() {
    let z = load_fixture("z.json", Some(16));
    let zhalf = load_fixture("zhalf.json", Some(16));
    let nine = load_fixture("nine.json", Some(16));
    let shift = load_fixture("shift3.json", Some(16));

    let t_z = rank1_type(&z).unwrap();
    let t_zhalf = rank1_type(&zhalf).unwrap();
    let t_nine = rank1_type(&nine).unwrap();
    let t_shift = rank1_type(&shift).unwrap();

    // hand-derived verdicts: finite differences are invisible, infinity
    // positions are not
    assert!(rank1_iso(&t_z, &t_nine), "Z and (1/9)Z share a type");
    assert!(
        rank1_iso(&t_zhalf, &t_shift),
        "Z[1/2] and (1/3)Z[1/2] share a type"
    );
    assert!(!rank1_iso(&t_z, &t_zhalf));
    assert!(!rank1_iso(&t_z, &t_shift));
    assert!(!rank1_iso(&t_nine, &t_zhalf));
    assert!(!rank1_iso(&t_nine, &t_shift));

    // each positive verdict is witnessed by an explicit V accepted by iso_check
    let v_nine = RationalMatrix::from_str_rows(&[vec!["1/9".into()]]).unwrap();
    assert!(
        iso_check(&z, &nine, &v_nine).unwrap().verdict,
        "witness 1/9 must realize Z -> (1/9)Z"
    );
    let v_shift = RationalMatrix::from_str_rows(&[vec!["1/3".into()]]).unwrap();
    assert!(
        iso_check(&zhalf, &shift, &v_shift).unwrap().verdict,
        "witness 1/3 must realize Z[1/2] -> (1/3)Z[1/2]"
    );
    println!("[criterion 10] PASS: rank-1 type verdicts with accepted witnesses");
}
