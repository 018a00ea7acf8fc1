use frobhom_core::curves::{count_hyperelliptic, count_points, EllipticCurve, HyperellipticModel};
use frobhom_core::field::{make_extension_field, make_prime_field, DEFAULT_CAP};
use frobhom_core::homothety::{curve_charpoly, genus2_charpoly};
use frobhom_core::weil::roots::roots_on_weil_circle;
use frobhom_core::weil::{
    all_slopes_half, charpoly_from_counts_g1, check_functional_equation, cyclotomic, cyclotomic_factorize,
    graeffe_square, homothety_exponent, predicted_count, CyclotomicFactor, FailureReason, IntPoly, WeilPolynomial,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

// ---- independent cyclotomic oracle: Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)} ----

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn mul_i128(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by `x^d - 1`.
fn div_xd_minus_one(a: &[i128], d: usize) -> Vec<i128> {
    let mut r = a.to_vec();
    let mut q = vec![0; a.len() - d];
    for i in (d..r.len()).rev() {
        let c = r[i];
        q[i - d] = c;
        r[i] = 0;
        r[i - d] += c;
    }
    assert!(r.iter().all(|&c| c == 0));
    q
}

fn oracle_cyclotomic(n: u64) -> Vec<i128> {
    let mut num = vec![1i128];
    let mut den = Vec::new();
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let mut xd = vec![0i128; d as usize + 1];
        xd[0] = -1;
        xd[d as usize] = 1;
        match mobius(n / d) {
            1 => num = mul_i128(&num, &xd),
            -1 => den.push(d as usize),
            _ => {}
        }
    }
    for d in den {
        num = div_xd_minus_one(&num, d);
    }
    num
}

#[test]
fn cyclotomic_matches_mobius_oracle() {
    for n in 1..=105u64 {
        let expected: Vec<BigInt> = oracle_cyclotomic(n).into_iter().map(BigInt::from).collect();
        assert_eq!(cyclotomic(n).coeffs(), expected.as_slice(), "n = {n}");
    }
}

#[test]
fn graeffe_identity_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let d = rng.gen_range(0..=8usize);
        let mut coeffs: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(-60i64..=60))).collect();
        coeffs.push(BigInt::from(rng.gen_range(1i64..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }));
        let p = IntPoly::new(coeffs.clone());
        let g = graeffe_square(&p);
        let sign = if d % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for x in -6i64..=6 {
            let x = BigInt::from(x);
            let lhs = eval(g.coeffs(), &(&x * &x));
            let rhs = &sign * eval(&coeffs, &x) * eval(&coeffs, &-&x);
            assert_eq!(lhs, rhs, "P = {p}");
        }
    }
}

/// `P(T) = q^d Q(T^2 / q)`: the roots are `+-sqrt(q zeta)` for each root `zeta` of `Q`.
fn weil_from_normalized(q_poly: &IntPoly, q: u64) -> WeilPolynomial {
    let d = q_poly.degree().unwrap();
    let qb = BigInt::from(q);
    let mut coeffs = vec![BigInt::zero(); 2 * d + 1];
    for (j, c) in q_poly.coeffs().iter().enumerate() {
        coeffs[2 * j] = c * num_traits::Pow::pow(&qb, d - j);
    }
    WeilPolynomial::new(coeffs, qb).unwrap()
}

const QS: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 25, 27];

/// A random product of `Phi_n`, `n <= 30`, total degree at most 12. `Phi_1`
/// only appears squared so the lift keeps the functional equation.
fn random_cyclotomic_product(rng: &mut ChaCha8Rng) -> Vec<CyclotomicFactor> {
    let mut factors: Vec<CyclotomicFactor> = Vec::new();
    let mut degree = 0;
    let target = rng.gen_range(1..=12u64);
    let mut tries = 0;
    while degree < target && tries < 50 {
        tries += 1;
        let n = rng.gen_range(1..=30u64);
        let phi = cyclotomic(n).degree().unwrap() as u64;
        let (mult, add) = if n == 1 { (2, 2) } else { (1, phi) };
        if degree + add > 12 {
            continue;
        }
        degree += add;
        match factors.iter_mut().find(|f| f.n == n) {
            Some(f) => f.multiplicity += mult,
            None => factors.push(CyclotomicFactor { n, multiplicity: mult }),
        }
    }
    if factors.is_empty() {
        factors.push(CyclotomicFactor { n: 4, multiplicity: 1 });
    }
    factors.sort();
    factors
}

fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

fn lcm(a: u64, b: u64) -> u64 {
    a / num_integer::gcd(a, b) * b
}

#[test]
fn certificates_for_cyclotomic_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..300 {
        let chosen = random_cyclotomic_product(&mut rng);
        let q_poly = chosen.iter().fold(IntPoly::one(), |acc, f| &acc * &cyclotomic(f.n).pow(f.multiplicity));
        let q = QS[i % QS.len()];
        let w = weil_from_normalized(&q_poly, q);
        assert!(check_functional_equation(&w), "{w}");
        let verdict = homothety_exponent(&w).unwrap();
        let cert = verdict.certificate.expect("cyclotomic input must certify");
        // each root of Q is hit by both +-alpha, so multiplicities double
        let doubled: Vec<CyclotomicFactor> =
            chosen.iter().map(|f| CyclotomicFactor { n: f.n, multiplicity: 2 * f.multiplicity }).collect();
        assert_eq!(cert.factors, doubled);
        assert_eq!(cert.rebuild(), cert.normalized);
        assert_eq!(cert.total_degree() as usize, w.degree());
        let expected_m = chosen.iter().fold(1, |acc, f| lcm(acc, f.n));
        assert_eq!(cert.m, expected_m);
        // Phi_n | U^m - 1 for every factor, and no proper divisor of m works
        let kills = |d: u64| {
            cert.factors.iter().all(|f| IntPoly::x_pow_minus_one(d as usize).exact_div(&cyclotomic(f.n)).is_some())
        };
        assert!(kills(cert.m));
        for d in divisors(cert.m).into_iter().filter(|&d| d < cert.m) {
            assert!(!kills(d), "m = {} is not minimal: {d} works", cert.m);
        }
    }
}

#[test]
fn rejects_polynomials_with_a_large_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..200 {
        let chosen = random_cyclotomic_product(&mut rng);
        let base = chosen.iter().fold(IntPoly::one(), |acc, f| &acc * &cyclotomic(f.n).pow(f.multiplicity));
        // U^2 - cU + 1 with |c| >= 3 has a real root of modulus > 1
        let c = rng.gen_range(3i64..=40) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let bad = IntPoly::from_i64(&[1, -c, 1]);
        let q = QS[i % QS.len()];
        let w = weil_from_normalized(&(&base * &bad), q);
        let verdict = homothety_exponent(&w).unwrap();
        assert!(!verdict.supersingular);
        assert_eq!(verdict.reason, Some(FailureReason::NonCyclotomicFactor), "{w}");
        let remainder = verdict.remainder.unwrap();
        assert_eq!(remainder, &bad * &bad);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_round_trips(ns in proptest::collection::vec(1u64..=40, 1..5)) {
        let poly = ns.iter().fold(IntPoly::one(), |acc, &n| &acc * &cyclotomic(n));
        let factors = cyclotomic_factorize(&poly).unwrap();
        let mut expected: Vec<u64> = ns.clone();
        expected.sort_unstable();
        let got: Vec<u64> = factors.iter().flat_map(|f| std::iter::repeat_n(f.n, f.multiplicity)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn trace_bound_matches_circle(q_idx in 0usize..9, t in -20i64..=20) {
        let q = QS[q_idx] as i64;
        prop_assume!(t * t <= 4 * q);
        let w = WeilPolynomial::from_i64(&[q, -t, 1], q as u64).unwrap();
        prop_assert!(roots_on_weil_circle(&w, 1e-6));
    }
}

// ---- curves ----

fn short_curves(p: u64) -> Vec<EllipticCurve> {
    let f = make_prime_field(p).unwrap();
    let mut out = Vec::new();
    for a4 in 0..p {
        for a6 in 0..p {
            if let Ok(e) = EllipticCurve::from_indices(&f, [0, 0, 0, a4, a6]) {
                out.push(e);
            }
        }
    }
    out
}

fn mixed_corpus() -> Vec<EllipticCurve> {
    let mut out = Vec::new();
    for p in [5u64, 7, 11, 13] {
        out.extend(short_curves(p));
    }
    // characteristics 2 and 3 need the general form
    for p in [2u64, 3] {
        let f = make_prime_field(p).unwrap();
        for idx in 0..p.pow(5) {
            let mut a = [0u64; 5];
            let mut rest = idx;
            for c in a.iter_mut() {
                *c = rest % p;
                rest /= p;
            }
            if let Ok(e) = EllipticCurve::from_indices(&f, a) {
                out.push(e);
            }
        }
    }
    out
}

#[test]
fn predicted_counts_match_enumeration() {
    for e in mixed_corpus().into_iter().step_by(3) {
        let (_, w) = curve_charpoly(&e, DEFAULT_CAP).unwrap();
        for k in 1..=3 {
            let counted = count_points(&e, k, DEFAULT_CAP).unwrap();
            assert_eq!(predicted_count(&w, k), BigInt::from(counted), "{e} k = {k}");
        }
    }
}

#[test]
fn predicted_counts_over_extension_bases() {
    for (p, k) in [(2u64, 2usize), (3, 2), (5, 2), (2, 3)] {
        let f = make_extension_field(p, k, DEFAULT_CAP).unwrap();
        for a6 in 1..f.q().min(6) {
            let a = if p == 2 { [1, 0, 0, 0, a6] } else { [0, 0, 0, 1, a6] };
            let Ok(e) = EllipticCurve::from_indices(&f, a) else { continue };
            let (_, w) = curve_charpoly(&e, DEFAULT_CAP).unwrap();
            for r in 1..=2 {
                assert_eq!(predicted_count(&w, r), BigInt::from(count_points(&e, r, DEFAULT_CAP).unwrap()), "{e}");
            }
        }
    }
}

/// Three independent supersingularity tests agree on every curve over a prime field.
#[test]
fn verdicts_agree_with_slopes_and_trace() {
    for e in mixed_corpus() {
        let (n1, w) = curve_charpoly(&e, DEFAULT_CAP).unwrap();
        let verdict = homothety_exponent(&w).unwrap();
        let t = e.q() as i64 + 1 - n1 as i64;
        let by_trace = t.rem_euclid(e.p() as i64) == 0;
        assert_eq!(verdict.supersingular, by_trace, "{e}");
        assert_eq!(all_slopes_half(&verdict.newton_slopes), by_trace, "{e}");
        if let Some(cert) = &verdict.certificate {
            assert!([1u64, 2, 3, 4, 6].contains(&cert.m), "{e}: m = {}", cert.m);
        } else {
            assert_eq!(verdict.reason, Some(FailureReason::NonIntegralNormalization), "{e}");
        }
    }
}

#[test]
fn functional_equation_examples() {
    assert!(check_functional_equation(&WeilPolynomial::from_i64(&[5, 3, 1], 5).unwrap()));
    assert!(check_functional_equation(&WeilPolynomial::from_i64(&[49, 0, -7, 0, 1], 7).unwrap()));
    assert!(!check_functional_equation(&WeilPolynomial::from_i64(&[48, 0, -7, 0, 1], 7).unwrap()));
    assert!(!check_functional_equation(&WeilPolynomial::from_i64(&[49, 1, 0, 0, 1], 7).unwrap()));
    assert!(WeilPolynomial::from_i64(&[5, 0, 2], 5).is_err());
    assert!(WeilPolynomial::from_i64(&[5, 1, 0, 1], 5).is_err());
    assert!(WeilPolynomial::from_i64(&[6, 0, 1], 6).is_err());
    assert!(charpoly_from_counts_g1(20, 5).is_err());
}

#[test]
fn genus_two_supersingular_end_to_end() {
    // y^2 = x^5 + 1 over F_7; 7 = 2 mod 5
    let f7 = make_prime_field(7).unwrap();
    let model = HyperellipticModel::from_indices(&f7, [1, 0, 0, 0, 0]).unwrap();
    let w = genus2_charpoly(&model, DEFAULT_CAP).unwrap();
    assert_eq!(w.degree(), 4);
    assert!(check_functional_equation(&w));
    assert!(roots_on_weil_circle(&w, 1e-6));
    let verdict = homothety_exponent(&w).unwrap();
    assert!(verdict.supersingular, "{w}");
    assert!(all_slopes_half(&verdict.newton_slopes));
    let n3 = count_hyperelliptic(&model, 3, DEFAULT_CAP).unwrap();
    assert_eq!(predicted_count(&w, 3), BigInt::from(n3));
}

#[test]
fn genus_two_predicted_counts() {
    let f5 = make_prime_field(5).unwrap();
    let f7 = make_prime_field(7).unwrap();
    for (field, lower) in
        [(&f5, [1u64, 1, 0, 0, 0]), (&f5, [2, 0, 1, 0, 0]), (&f7, [3, 1, 0, 2, 0]), (&f7, [1, 2, 3, 4, 5])]
    {
        let Ok(model) = HyperellipticModel::from_indices(field, lower) else { continue };
        let w = genus2_charpoly(&model, DEFAULT_CAP).unwrap();
        assert!(check_functional_equation(&w));
        assert!(roots_on_weil_circle(&w, 1e-6), "{w}");
        for k in 3..=4 {
            let counted = count_hyperelliptic(&model, k, DEFAULT_CAP).unwrap();
            assert_eq!(predicted_count(&w, k), BigInt::from(counted), "{w} k = {k}");
        }
    }
}
