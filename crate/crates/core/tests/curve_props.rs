use frobhom_core::curves::{
    count_hyperelliptic, count_points, default_r_max, enumerate_points, kernel_size, torsion_subgroup, CurvePoint,
    EllipticCurve, HyperellipticModel,
};
use frobhom_core::field::{elements, make_extension_field, make_prime_field, Field, FieldElement, DEFAULT_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prime_curve(p: u64, a: [u64; 5]) -> EllipticCurve {
    EllipticCurve::from_indices(&make_prime_field(p).unwrap(), a).unwrap()
}

/// Curves over fields with q <= 16, including characteristics 2 and 3 and
/// non-prime base fields.
fn small_corpus() -> Vec<EllipticCurve> {
    let mut out = vec![
        prime_curve(2, [0, 0, 1, 0, 0]),
        prime_curve(2, [1, 0, 0, 0, 1]),
        prime_curve(2, [1, 1, 0, 0, 1]),
        prime_curve(3, [0, 0, 0, 1, 0]),
        prime_curve(3, [0, 1, 0, 0, 1]),
        prime_curve(3, [0, 0, 0, 2, 1]),
        prime_curve(5, [0, 0, 0, 1, 1]),
        prime_curve(7, [0, 0, 0, 1, 0]),
        prime_curve(7, [1, 2, 3, 4, 5]),
        prime_curve(11, [0, 0, 0, 0, 1]),
        prime_curve(13, [0, 0, 0, 2, 3]),
    ];
    for (p, k, a) in [
        (2u64, 2usize, [0u64, 0, 1, 0, 0]),
        (2, 2, [1, 0, 0, 0, 2]),
        (2, 3, [1, 0, 0, 0, 3]),
        (3, 2, [0, 0, 0, 1, 0]),
        (2, 4, [1, 0, 0, 0, 5]),
        (2, 4, [0, 0, 1, 0, 0]),
    ] {
        let f = make_extension_field(p, k, DEFAULT_CAP).unwrap();
        out.push(EllipticCurve::from_indices(&f, a).unwrap());
    }
    out
}

/// Independent count: test every (x, y) pair against the equation.
fn brute_force_count(curve: &EllipticCurve, r: usize) -> u64 {
    let ext = curve.extend_to(r, DEFAULT_CAP).unwrap();
    let f = ext.field();
    let mut n = 1;
    for x in elements(f) {
        for y in elements(f) {
            let lhs = &(&y.square() + &(&(ext.a1() * &x) * &y)) + &(ext.a3() * &y);
            let rhs = &(&(&(&x.square() * &x) + &(ext.a2() * &x.square())) + &(ext.a4() * &x)) + ext.a6();
            if lhs == rhs {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn spec_point_counts() {
    assert_eq!(enumerate_points(&prime_curve(3, [0, 0, 0, 1, 0]), 1, DEFAULT_CAP).unwrap().count, 4);
    assert_eq!(enumerate_points(&prime_curve(2, [0, 0, 1, 0, 0]), 1, DEFAULT_CAP).unwrap().count, 3);
    assert_eq!(enumerate_points(&prime_curve(5, [0, 0, 0, 1, 1]), 1, DEFAULT_CAP).unwrap().count, 9);
}

#[test]
fn counts_match_pair_scan() {
    for e in small_corpus() {
        for r in 1..=2 {
            if e.q().pow(r as u32) > 256 {
                continue;
            }
            let set = enumerate_points(&e, r, DEFAULT_CAP).unwrap();
            let brute = brute_force_count(&e, r);
            assert_eq!(set.count, brute, "{e}, r = {r}");
            assert_eq!(count_points(&e, r, DEFAULT_CAP).unwrap(), brute);
            assert!(set.points.iter().all(|p| set.curve.contains(p)));
        }
    }
}

#[test]
fn hasse_weil_bound() {
    for e in small_corpus() {
        for r in 1..=3u32 {
            let qr = e.q().pow(r);
            if qr > 5000 {
                continue;
            }
            let n = count_points(&e, r as usize, DEFAULT_CAP).unwrap() as f64;
            let t = (qr as f64 + 1.0 - n).abs();
            assert!(t <= 2.0 * (qr as f64).sqrt() + 1e-9, "{e} r={r}");
        }
    }
}

#[test]
fn group_law_axioms_exhaustive() {
    for e in small_corpus() {
        let pts = enumerate_points(&e, 1, DEFAULT_CAP).unwrap().points;
        for p in &pts {
            assert_eq!(e.add(p, &CurvePoint::Infinity), *p);
            assert!(e.add(p, &e.neg(p)).is_infinity());
            for q in &pts {
                let pq = e.add(p, q);
                assert!(e.contains(&pq));
                assert_eq!(pq, e.add(q, p));
                for r in &pts {
                    assert_eq!(e.add(&pq, r), e.add(p, &e.add(q, r)), "{e}: {p} {q} {r}");
                }
            }
        }
    }
}

#[test]
fn lagrange_on_rational_points() {
    for e in small_corpus() {
        let set = enumerate_points(&e, 1, DEFAULT_CAP).unwrap();
        for p in &set.points {
            assert!(e.scalar_mul(set.count as i64, p).is_infinity());
        }
    }
}

#[test]
fn scalar_mul_agrees_with_repeated_addition() {
    let e = prime_curve(7, [1, 2, 3, 4, 5]);
    let set = enumerate_points(&e, 2, DEFAULT_CAP).unwrap();
    let c = &set.curve;
    for p in set.points.iter().step_by(5) {
        let mut acc = CurvePoint::Infinity;
        for n in 0..40i64 {
            assert_eq!(c.scalar_mul(n, p), acc);
            assert_eq!(c.scalar_mul(-n, p), c.neg(&acc));
            acc = c.add(&acc, p);
        }
    }
}

#[test]
fn frobenius_is_a_group_endomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for e in small_corpus() {
        let r = if e.q() <= 4 { 4 } else { 2 };
        let set = enumerate_points(&e, r, DEFAULT_CAP).unwrap();
        let c = &set.curve;
        let pts = &set.points;
        for _ in 0..100 {
            let p = &pts[rng.gen_range(0..pts.len())];
            let q = &pts[rng.gen_range(0..pts.len())];
            let n = rng.gen_range(-50..50);
            let s = rng.gen_range(1..4);
            assert!(c.contains(&c.frobenius(p, s)));
            assert_eq!(c.frobenius(&c.add(p, q), s), c.add(&c.frobenius(p, s), &c.frobenius(q, s)));
            assert_eq!(c.frobenius(&c.scalar_mul(n, p), s), c.scalar_mul(n, &c.frobenius(p, s)));
        }
        // sigma^r is the identity on E(F_{q^r})
        assert!(pts.iter().all(|p| c.frobenius(p, r as u64) == *p));
    }
}

#[test]
fn frobenius_twice_fixes_f9_points() {
    let e = prime_curve(3, [0, 0, 0, 1, 0]);
    let set = enumerate_points(&e, 2, DEFAULT_CAP).unwrap();
    let c = &set.curve;
    let base: Vec<CurvePoint> = enumerate_points(&e, 1, DEFAULT_CAP).unwrap().points;
    let emb = e.embedding_into(c).unwrap();
    let base: Vec<CurvePoint> = base.iter().map(|p| EllipticCurve::map_point(&emb, p)).collect();
    let new_points: Vec<&CurvePoint> = set.points.iter().filter(|p| !base.contains(p)).collect();
    assert!(!new_points.is_empty());
    for p in new_points {
        assert_ne!(c.frobenius(p, 1), *p);
        assert_eq!(c.frobenius(&c.frobenius(p, 1), 1), *p);
    }
    for p in &base {
        assert_eq!(c.frobenius(p, 1), *p);
    }
}

#[test]
fn full_two_torsion_over_f9() {
    let e = prime_curve(3, [0, 0, 0, 1, 0]);
    let t = torsion_subgroup(&e, 2, default_r_max(2), DEFAULT_CAP).unwrap();
    assert_eq!(t.r, 2);
    // x in {0, i, -i}, y = 0, plus infinity
    let f9 = make_extension_field(3, 2, DEFAULT_CAP).unwrap();
    let i = FieldElement::generator(&f9);
    let mut xs: Vec<u64> = t
        .points
        .iter()
        .filter_map(|p| match p {
            CurvePoint::Affine { x, y } => {
                assert!(y.is_zero());
                Some(x.index())
            }
            CurvePoint::Infinity => None,
        })
        .collect();
    xs.sort();
    let mut want = vec![0, i.index(), (-&i).index()];
    want.sort();
    assert_eq!(xs, want);
}

fn assert_elementary_abelian(t: &frobhom_core::curves::TorsionSubgroup) {
    let c = &t.curve;
    assert_eq!(t.points.len() as u64, t.ell * t.ell);
    assert!(t.points.contains(&CurvePoint::Infinity));
    for p in &t.points {
        assert!(c.scalar_mul(t.ell as i64, p).is_infinity());
        for q in &t.points {
            assert!(t.points.contains(&c.add(p, q)));
        }
    }
}

#[test]
fn torsion_subgroups_are_closed() {
    let e3 = prime_curve(3, [0, 0, 0, 1, 0]);
    let e2 = prime_curve(2, [0, 0, 1, 0, 0]);
    for (e, ell, r) in [(&e3, 2, 2), (&e3, 5, 8), (&e2, 3, 2), (&e2, 5, 8), (&e2, 7, 12)] {
        let t = torsion_subgroup(e, ell, default_r_max(ell), DEFAULT_CAP).unwrap();
        assert_eq!(t.r, r, "{e} l = {ell}");
        assert_elementary_abelian(&t);
    }
}

#[test]
fn kernel_has_n_squared_points() {
    for e in small_corpus().into_iter().filter(|e| e.q() <= 5) {
        for n in 1..=5u64 {
            if n % e.p() == 0 {
                continue;
            }
            let r_max = default_r_max(n);
            match kernel_size(&e, n, r_max, DEFAULT_CAP) {
                Ok(k) => assert_eq!(k.size, n * n, "{e} n = {n}"),
                Err(err) => assert!(err.is_cap_error(), "{e} n = {n}: {err}"),
            }
        }
    }
}

#[test]
fn curves_over_extension_base_fields() {
    // y^2 + y = x^3 over F_4: sigma is the 4-power map
    let f4 = make_extension_field(2, 2, DEFAULT_CAP).unwrap();
    let e = EllipticCurve::from_indices(&f4, [0, 0, 1, 0, 0]).unwrap();
    assert_eq!(e.q(), 4);
    assert_eq!(count_points(&e, 1, DEFAULT_CAP).unwrap(), 9);
    let set = enumerate_points(&e, 1, DEFAULT_CAP).unwrap();
    assert!(set.points.iter().all(|p| e.frobenius(p, 1) == *p));
    // over F_16 the count is q^2 + 1 - s_2 with alpha = -2 double: 16 + 1 - 8 = 9
    assert_eq!(count_points(&e, 2, DEFAULT_CAP).unwrap(), 9);
}

// ---- genus 2 ----

fn f7() -> Field {
    make_prime_field(7).unwrap()
}

/// Independent oracle: count pairs (x, y) with y^2 = f(x), plus one point at infinity.
fn brute_hyper(model: &HyperellipticModel, r: usize) -> u64 {
    let base = model.field();
    let big = make_extension_field(base.p(), base.k() * r, DEFAULT_CAP).unwrap();
    assert_eq!(base.k(), 1);
    let f: Vec<FieldElement> =
        model.coefficients().iter().map(|c| FieldElement::from_int(&big, c.index() as i64)).collect();
    let mut n = 1;
    for x in elements(&big) {
        let v = f.iter().rev().fold(FieldElement::zero(&big), |acc, c| &(&acc * &x) + c);
        n += elements(&big).filter(|y| y.square() == v).count() as u64;
    }
    n
}

#[test]
fn hyperelliptic_counts_match_pair_scan() {
    let m = HyperellipticModel::from_indices(&f7(), [1, 0, 0, 0, 0]).unwrap();
    assert_eq!(count_hyperelliptic(&m, 1, DEFAULT_CAP).unwrap(), brute_hyper(&m, 1));
    assert_eq!(count_hyperelliptic(&m, 2, DEFAULT_CAP).unwrap(), brute_hyper(&m, 2));
    let m = HyperellipticModel::from_indices(&make_prime_field(5).unwrap(), [1, 3, 0, 2, 1]).unwrap();
    for r in 1..=2 {
        assert_eq!(count_hyperelliptic(&m, r, DEFAULT_CAP).unwrap(), brute_hyper(&m, r));
    }
}

#[test]
fn hyperelliptic_degenerate_upper_count() {
    // whenever every f(x) is a nonzero square the count is 2q + 1
    let f = make_prime_field(3).unwrap();
    let mut found = 0;
    for idx in 0..243u64 {
        let c = [idx % 3, idx / 3 % 3, idx / 9 % 3, idx / 27 % 3, idx / 81 % 3];
        let Ok(m) = HyperellipticModel::from_indices(&f, c) else { continue };
        let all_nonzero_squares = elements(&f).all(|x| {
            let v = m.coefficients().iter().rev().fold(FieldElement::zero(&f), |acc, a| &(&acc * &x) + a);
            !v.is_zero() && v.is_square()
        });
        if all_nonzero_squares {
            found += 1;
            assert_eq!(count_hyperelliptic(&m, 1, DEFAULT_CAP).unwrap(), 2 * 3 + 1);
        }
    }
    assert!(found > 0);
}

#[test]
fn hyperelliptic_hasse_weil() {
    let m = HyperellipticModel::from_indices(&f7(), [1, 0, 0, 0, 0]).unwrap();
    for r in 1..=3u32 {
        let qr = 7f64.powi(r as i32);
        let n = count_hyperelliptic(&m, r as usize, DEFAULT_CAP).unwrap() as f64;
        assert!((qr + 1.0 - n).abs() <= 4.0 * qr.sqrt());
    }
}
