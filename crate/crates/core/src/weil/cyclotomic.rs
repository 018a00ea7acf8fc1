use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::poly::IntPoly;

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `Phi_n(U) = (U^n - 1) / prod_{d | n, d < n} Phi_d(U)`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return p.clone();
    }
    let mut poly = IntPoly::x_pow_minus_one(n as usize);
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = poly.exact_div(&cyclotomic(d)).expect("U^n - 1 is divisible by Phi_d for d | n");
    }
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(n, poly.clone());
    poly
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CyclotomicFactor {
    pub n: u64,
    pub multiplicity: usize,
}

/// The part of the input no cyclotomic polynomial divides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonCyclotomicFactor {
    pub remainder: IntPoly,
}

/// Largest index worth trying for a degree-`d` polynomial: `phi(n) >= sqrt(n/2)`
/// means `phi(n) <= d` forces `n <= 2 d^2`.
pub fn search_bound(degree: usize) -> u64 {
    2 * (degree as u64).pow(2)
}

/// Writes a monic integer polynomial as a product of cyclotomic polynomials,
/// dividing greedily by `Phi_n` in ascending `n`.
pub fn cyclotomic_factorize(poly: &IntPoly) -> Result<Vec<CyclotomicFactor>, NonCyclotomicFactor> {
    if !poly.is_monic() {
        return Err(NonCyclotomicFactor { remainder: poly.clone() });
    }
    let mut rest = poly.clone();
    let mut factors = Vec::new();
    let bound = search_bound(poly.degree().unwrap_or(0));
    for n in 1..=bound {
        let remaining = rest.degree().unwrap_or(0) as u64;
        if remaining == 0 {
            break;
        }
        if euler_phi(n) > remaining {
            continue;
        }
        let phi = cyclotomic(n);
        let mut multiplicity = 0;
        while let Some(q) = rest.exact_div(&phi) {
            rest = q;
            multiplicity += 1;
        }
        if multiplicity > 0 {
            factors.push(CyclotomicFactor { n, multiplicity });
        }
    }
    if rest.is_one() {
        Ok(factors)
    } else {
        Err(NonCyclotomicFactor { remainder: rest })
    }
}

/// `prod Phi_n^mult`.
pub fn rebuild(factors: &[CyclotomicFactor]) -> IntPoly {
    factors.iter().fold(IntPoly::one(), |acc, f| &acc * &cyclotomic(f.n).pow(f.multiplicity))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        // first cyclotomic with a coefficient outside {-1, 0, 1}
        assert_eq!(cyclotomic(105).coeff(7), (-2).into());
    }

    #[test]
    fn degrees_match_totient() {
        for n in 1..=200 {
            assert_eq!(cyclotomic(n).degree().unwrap() as u64, euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn factorization_examples() {
        let f = |c: &[i64]| cyclotomic_factorize(&IntPoly::from_i64(c));
        assert_eq!(f(&[1, 2, 1]).unwrap(), vec![CyclotomicFactor { n: 2, multiplicity: 2 }]);
        assert_eq!(f(&[1, -2, 3, -2, 1]).unwrap(), vec![CyclotomicFactor { n: 6, multiplicity: 2 }]);
        let err = f(&[-2, 1]).unwrap_err();
        assert_eq!(err.remainder, IntPoly::from_i64(&[-2, 1]));
        assert_eq!(f(&[1]).unwrap(), vec![]);
        // non-monic input cannot be a product of cyclotomics
        assert!(f(&[1, 2]).is_err());
    }

    #[test]
    fn remainder_keeps_the_non_cyclotomic_part() {
        // (U + 1)(U^2 - 3U + 1)
        let p = &cyclotomic(2) * &IntPoly::from_i64(&[1, -3, 1]);
        let err = cyclotomic_factorize(&p).unwrap_err();
        assert_eq!(err.remainder, IntPoly::from_i64(&[1, -3, 1]));
    }
}
