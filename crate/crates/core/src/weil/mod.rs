//! Weil polynomials and the roots-of-unity certificate.
//!
//! The pipeline for a Weil polynomial `P(T) = prod (T - alpha_i)` is
//! Graeffe squaring (roots `alpha_i^2`), scaling by `q` (roots
//! `alpha_i^2 / q`), then exact division by cyclotomic polynomials. When the
//! scaled polynomial factors completely, every `alpha_i^2 / q` is a root of
//! unity and `m = lcm` of their orders is the least `m` with
//! `alpha_i^{2m} = q^m` for all `i`.

mod cyclotomic;
mod poly;
pub mod roots;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use cyclotomic::{
    cyclotomic, cyclotomic_factorize, euler_phi, rebuild, search_bound, CyclotomicFactor, NonCyclotomicFactor,
};
pub use poly::IntPoly;

/// Monic integer polynomial of degree `2g` attached to a prime power `q`.
///
/// Construction checks the shape (monic, even degree, prime-power `q`) but
/// not the functional equation; see [`check_functional_equation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPolynomial {
    poly: IntPoly,
    q: BigInt,
    p: u64,
    q_exponent: u32,
}

impl WeilPolynomial {
    pub fn new(coeffs: Vec<BigInt>, q: BigInt) -> Result<Self> {
        let poly = IntPoly::new(coeffs);
        let degree = poly.degree().unwrap_or(0);
        if degree == 0 || !degree.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("Weil polynomial must have even positive degree, got {degree}")));
        }
        if !poly.is_monic() {
            return Err(Error::InvalidInput("Weil polynomial must be monic".into()));
        }
        let (p, q_exponent) = prime_power(&q)?;
        Ok(WeilPolynomial { poly, q, p, q_exponent })
    }

    pub fn from_i64(coeffs: &[i64], q: u64) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(q))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        self.poly.coeffs()
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `v_p(q)`.
    pub fn q_exponent(&self) -> u32 {
        self.q_exponent
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap()
    }

    pub fn genus(&self) -> usize {
        self.degree() / 2
    }
}

impl fmt::Display for WeilPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (q = {})", self.poly, self.q)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `(p, k)` with `q = p^k`, `p` prime below `2^64`.
pub fn prime_power(q: &BigInt) -> Result<(u64, u32)> {
    if *q < BigInt::from(2) {
        return Err(Error::InvalidInput(format!("q = {q} is not a prime power")));
    }
    for k in 1..=q.bits() as u32 {
        let root = q.nth_root(k);
        if root < BigInt::from(2) {
            break;
        }
        if Pow::pow(&root, k) != *q {
            continue;
        }
        if let Some(r) = root.to_u64() {
            if is_prime_u64(r) {
                return Ok((r, k));
            }
        }
    }
    Err(Error::InvalidInput(format!("q = {q} is not a prime power below 2^64")))
}

fn big_q_pow(q: &BigInt, e: usize) -> BigInt {
    Pow::pow(q, e)
}

/// `P(T) = T^2 - tT + q` with `t = q + 1 - N1`.
pub fn charpoly_from_counts_g1(n1: u64, q: u64) -> Result<WeilPolynomial> {
    let qb = BigInt::from(q);
    let t: BigInt = &qb + 1u32 - BigInt::from(n1);
    if &t * &t > BigInt::from(4) * &qb {
        return Err(Error::HasseViolation { trace: t.to_string(), q: q.to_string() });
    }
    WeilPolynomial::new(vec![qb, -t, BigInt::one()], BigInt::from(q))
}

/// Genus-2 polynomial from `N1`, `N2` via power sums and Newton's identities.
pub fn charpoly_from_counts_g2(n1: u64, n2: u64, q: u64) -> Result<WeilPolynomial> {
    let qb = BigInt::from(q);
    let s1: BigInt = &qb + 1u32 - BigInt::from(n1);
    let s2: BigInt = &qb * &qb + 1u32 - BigInt::from(n2);
    if &s1 * &s1 > BigInt::from(16) * &qb {
        return Err(Error::WeilBoundViolation(format!("|q + 1 - N1| = {} > 4 sqrt(q)", s1.abs())));
    }
    if s2.abs() > BigInt::from(4) * &qb {
        return Err(Error::WeilBoundViolation(format!("|q^2 + 1 - N2| = {} > 4q", s2.abs())));
    }
    let twice_e2 = &s1 * &s1 - &s2;
    if twice_e2.is_odd() {
        return Err(Error::NonIntegralSymmetricFunction);
    }
    let e1 = s1;
    let e2 = twice_e2 / 2;
    let coeffs = vec![&qb * &qb, -(&qb * &e1), e2, -e1, BigInt::one()];
    WeilPolynomial::new(coeffs, qb)
}

/// `c_i = q^{g-i} c_{2g-i}` for `0 <= i <= g`.
pub fn check_functional_equation(weil: &WeilPolynomial) -> bool {
    let g = weil.genus();
    let d = weil.degree();
    (0..=g).all(|i| weil.poly.coeff(i) == big_q_pow(&weil.q, g - i) * weil.poly.coeff(d - i))
}

/// `G` with `G(T^2) = (-1)^d P(T) P(-T)`; its roots are the squares of `P`'s.
pub fn graeffe_square(poly: &IntPoly) -> IntPoly {
    let Some(d) = poly.degree() else {
        return IntPoly::default();
    };
    let product = poly * &poly.negate_variable();
    let sign = if d % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    IntPoly::new(product.coeffs().iter().step_by(2).map(|c| c * &sign).collect())
}

/// `Q(U) = G(qU) / q^{deg G}` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPoly {
    pub coeffs: Vec<BigRational>,
    pub integral: bool,
}

impl ScaledPoly {
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        self.integral.then(|| IntPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
    }
}

pub fn scale_roots(g: &IntPoly, q: &BigInt) -> ScaledPoly {
    let d = g.degree().unwrap_or(0);
    let coeffs: Vec<BigRational> =
        g.coeffs().iter().enumerate().map(|(j, c)| BigRational::new(c.clone(), big_q_pow(q, d - j))).collect();
    let integral = coeffs.iter().all(|c| c.is_integer());
    ScaledPoly { coeffs, integral }
}

/// Why a polynomial failed the roots-of-unity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FailureReason {
    /// Some `alpha_i^2 / q` is not an algebraic integer.
    NonIntegralNormalization,
    /// `Q` has an irreducible factor that is not cyclotomic.
    NonCyclotomicFactor,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::NonIntegralNormalization => "NonIntegralNormalization",
            FailureReason::NonCyclotomicFactor => "NonCyclotomicFactor",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomothetyCertificate {
    /// Least `m >= 1` with `alpha_i^{2m} = q^m` for every root.
    pub m: u64,
    pub q: BigInt,
    pub factors: Vec<CyclotomicFactor>,
    /// Multiplicative orders of the `alpha_i^2 / q`.
    pub orders: BTreeSet<u64>,
    /// `Q(U) = prod (U - alpha_i^2 / q)`.
    pub normalized: IntPoly,
}

impl HomothetyCertificate {
    /// `prod Phi_n^mult`, which must equal `normalized`.
    pub fn rebuild(&self) -> IntPoly {
        rebuild(&self.factors)
    }

    pub fn total_degree(&self) -> u64 {
        self.factors.iter().map(|f| euler_phi(f.n) * f.multiplicity as u64).sum()
    }
}

/// A Newton polygon segment: `multiplicity` roots of normalized valuation `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slope {
    pub value: Ratio<i64>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupersingularityVerdict {
    pub supersingular: bool,
    pub certificate: Option<HomothetyCertificate>,
    pub reason: Option<FailureReason>,
    /// `Q` when it has integer coefficients.
    pub normalized: Option<IntPoly>,
    /// Undivided part of `Q` for `NonCyclotomicFactor`.
    pub remainder: Option<IntPoly>,
    pub newton_slopes: Vec<Slope>,
}

impl SupersingularityVerdict {
    pub fn m(&self) -> Option<u64> {
        self.certificate.as_ref().map(|c| c.m)
    }
}

/// Graeffe, scale, integrality gate, cyclotomic factorization.
pub fn homothety_exponent(weil: &WeilPolynomial) -> Result<SupersingularityVerdict> {
    if !check_functional_equation(weil) {
        return Err(Error::FunctionalEquationViolation);
    }
    let newton_slopes = newton_polygon(weil);
    let scaled = scale_roots(&graeffe_square(weil.poly()), weil.q());
    let Some(normalized) = scaled.to_int_poly() else {
        return Ok(SupersingularityVerdict {
            supersingular: false,
            certificate: None,
            reason: Some(FailureReason::NonIntegralNormalization),
            normalized: None,
            remainder: None,
            newton_slopes,
        });
    };
    match cyclotomic_factorize(&normalized) {
        Ok(factors) => {
            let orders: BTreeSet<u64> = factors.iter().map(|f| f.n).collect();
            let m = orders.iter().fold(1u64, |acc, &n| acc.lcm(&n));
            Ok(SupersingularityVerdict {
                supersingular: true,
                certificate: Some(HomothetyCertificate {
                    m,
                    q: weil.q().clone(),
                    factors,
                    orders,
                    normalized: normalized.clone(),
                }),
                reason: None,
                normalized: Some(normalized),
                remainder: None,
                newton_slopes,
            })
        }
        Err(NonCyclotomicFactor { remainder }) => Ok(SupersingularityVerdict {
            supersingular: false,
            certificate: None,
            reason: Some(FailureReason::NonCyclotomicFactor),
            normalized: Some(normalized),
            remainder: Some(remainder),
            newton_slopes,
        }),
    }
}

fn valuation(c: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut c = c.abs();
    while (&c % &p).is_zero() {
        c /= &p;
        v += 1;
    }
    v
}

/// Slopes of the lower convex hull of `(i, v_p(c_i))`, reported as root
/// valuations normalized by `v_p(q)`, in ascending order.
pub fn newton_polygon(weil: &WeilPolynomial) -> Vec<Slope> {
    let pts: Vec<(i64, i64)> = weil
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, valuation(c, weil.p())))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let k = weil.q_exponent() as i64;
    let mut slopes: Vec<Slope> = hull
        .windows(2)
        .map(|w| {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            Slope { value: Ratio::new(-dy, dx * k), multiplicity: dx as usize }
        })
        .collect();
    slopes.reverse();
    slopes
}

/// Every root has valuation `v_p(q) / 2`.
pub fn all_slopes_half(slopes: &[Slope]) -> bool {
    !slopes.is_empty() && slopes.iter().all(|s| s.value == Ratio::new(1, 2))
}

/// Power sums `s_1..s_k` of the roots, by Newton's identities.
pub fn power_sums(poly: &IntPoly, k: usize) -> Vec<BigInt> {
    let d = poly.degree().unwrap_or(0);
    let c = |i: usize| poly.coeff(i);
    let mut s: Vec<BigInt> = Vec::with_capacity(k);
    for j in 1..=k {
        let mut acc = BigInt::zero();
        for i in 1..j.min(d + 1) {
            acc += c(d - i) * &s[j - i - 1];
        }
        if j <= d {
            acc += BigInt::from(j) * c(d - j);
        }
        s.push(-acc);
    }
    s
}

/// `N_k = q^k + 1 - s_k`.
pub fn predicted_count(weil: &WeilPolynomial, k: usize) -> BigInt {
    assert!(k >= 1, "extension degree must be positive");
    let s_k = power_sums(weil.poly(), k).pop().unwrap();
    big_q_pow(weil.q(), k) + 1u32 - s_k
}
