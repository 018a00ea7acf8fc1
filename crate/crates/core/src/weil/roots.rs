//! Floating-point root approximation. Diagnostics only: nothing in the
//! supersingularity decision depends on these values.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::WeilPolynomial;

/// Roots of a monic real polynomial (little-endian) by Durand-Kerner.
pub fn durand_kerner(monic: &[f64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let bound = 1.0 + monic[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d).map(|i| seed.powu(i as u32) * bound.min(2.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let zi = roots[i];
            let denom = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, zj)| acc * (zi - zj));
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-9, 1e-9);
                delta = f64::INFINITY;
                continue;
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

/// Approximations of `alpha_i / sqrt(q)`, which lie on the unit circle for a
/// genuine Weil polynomial.
pub fn normalized_eigenvalues(weil: &WeilPolynomial) -> Vec<Complex64> {
    let q = weil.q().to_f64().unwrap_or(f64::INFINITY);
    let d = weil.degree();
    // P(sqrt(q) z) / q^g is monic
    let scaled: Vec<f64> = weil
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.to_f64().unwrap_or(f64::NAN) * q.powf((i as f64 - d as f64) / 2.0))
        .collect();
    durand_kerner(&scaled)
}

/// Largest `| |alpha| / sqrt(q) - 1 |` over the roots.
pub fn root_modulus_deviation(weil: &WeilPolynomial) -> f64 {
    normalized_eigenvalues(weil).iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
}

/// All complex roots have absolute value `q^{1/2}` to within `rel_tol`.
pub fn roots_on_weil_circle(weil: &WeilPolynomial, rel_tol: f64) -> bool {
    root_modulus_deviation(weil) <= rel_tol
}
