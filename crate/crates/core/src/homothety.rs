//! Point-wise verification that `sigma^{2m}` acts on `E[l]` as `[q^m]`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::curves::{
    count_hyperelliptic, count_points, default_r_max, kernel_size, torsion_subgroup, EllipticCurve, HyperellipticModel,
    TorsionSubgroup,
};
use crate::error::{Error, Result};
use crate::field::{checked_pow, is_prime, DEFAULT_CAP};
use crate::weil::{
    charpoly_from_counts_g1, charpoly_from_counts_g2, homothety_exponent, predicted_count, HomothetyCertificate,
    SupersingularityVerdict, WeilPolynomial,
};

/// Enumeration limits shared by every check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest field (in elements) we will enumerate.
    pub cap: u64,
    /// Extension-degree bound for torsion searches; `None` means `n^2 - 1`.
    pub r_max: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cap: DEFAULT_CAP, r_max: None }
    }
}

impl Limits {
    pub fn r_max_for(&self, n: u64) -> usize {
        self.r_max.unwrap_or_else(|| default_r_max(n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionCheck {
    pub ell: u64,
    /// Degree of the extension `F_{q^r}` over which `E[l]` was enumerated.
    pub r: usize,
    /// `|E[l]|`, always `l^2` when found.
    pub size: u64,
    /// Points that were tested; equals `size`.
    pub checked: u64,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelCheck {
    pub n: u64,
    pub r: usize,
    pub size: u64,
    pub expected: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub curve: String,
    pub q: u64,
    pub n1: u64,
    pub charpoly: WeilPolynomial,
    pub certificate: HomothetyCertificate,
    pub torsion: Vec<TorsionCheck>,
    pub kernel: Vec<KernelCheck>,
    /// `(step, milliseconds)`; not part of any canonical output.
    pub timings: Vec<(String, f64)>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.torsion.iter().all(|t| t.all_pass) && self.kernel.iter().all(|k| k.pass)
    }
}

struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.0.elapsed().as_secs_f64() * 1e3
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }
}

/// `P(T)` of a curve from its point count over `F_q`.
pub fn curve_charpoly(curve: &EllipticCurve, cap: u64) -> Result<(u64, WeilPolynomial)> {
    let n1 = count_points(curve, 1, cap)?;
    Ok((n1, charpoly_from_counts_g1(n1, curve.q())?))
}

/// `P(T)` of a genus-2 curve `y^2 = f(x)` from `N1` and `N2`.
pub fn genus2_charpoly(model: &HyperellipticModel, cap: u64) -> Result<WeilPolynomial> {
    let n1 = count_hyperelliptic(model, 1, cap)?;
    let n2 = count_hyperelliptic(model, 2, cap)?;
    charpoly_from_counts_g2(n1, n2, model.q())
}

fn check_ell(curve: &EllipticCurve, ell: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == curve.p() {
        return Err(Error::EqualsCharacteristic(ell));
    }
    Ok(())
}

/// `q^m mod l`.
fn scalar_mod(q: u64, m: u64, ell: u64) -> i64 {
    (0..m).fold(1u64, |acc, _| acc * (q % ell) % ell) as i64
}

/// Whether `sigma^{2m}(P) = [q^m mod l] P` for every listed point.
pub fn homothety_holds(torsion: &TorsionSubgroup, m: u64) -> bool {
    let curve = &torsion.curve;
    let scalar = scalar_mod(curve.q(), m, torsion.ell);
    torsion.points.iter().all(|p| curve.frobenius(p, 2 * m) == curve.scalar_mul(scalar, p))
}

/// Runs the full pipeline: count, charpoly, certificate, then the point-wise
/// check on every `E[l]`.
pub fn verify_homothety(curve: &EllipticCurve, primes: &[u64], limits: Limits) -> Result<VerificationReport> {
    for &ell in primes {
        check_ell(curve, ell)?;
    }
    let mut timings = Vec::new();
    let watch = Stopwatch::start();
    let (n1, charpoly) = curve_charpoly(curve, limits.cap)?;
    let verdict = homothety_exponent(&charpoly)?;
    timings.push(("certificate".to_string(), watch.ms()));
    let certificate = match verdict.certificate {
        Some(c) => c,
        None => return Err(Error::NotSupersingular(verdict.reason.expect("failed verdicts carry a reason"))),
    };
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut torsion = Vec::with_capacity(sorted.len());
    for ell in sorted {
        let watch = Stopwatch::start();
        let sub = torsion_subgroup(curve, ell, limits.r_max_for(ell), limits.cap)?;
        let all_pass = homothety_holds(&sub, certificate.m);
        torsion.push(TorsionCheck {
            ell,
            r: sub.r,
            size: sub.points.len() as u64,
            checked: sub.points.len() as u64,
            all_pass,
        });
        timings.push((format!("torsion l={ell}"), watch.ms()));
    }
    Ok(VerificationReport {
        curve: curve.to_string(),
        q: curve.q(),
        n1,
        charpoly,
        certificate,
        torsion,
        kernel: Vec::new(),
        timings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FalsifyOutcome {
    /// Least `m` for which the identity holds on this `E[l]`. A finding about
    /// one `l` only; it never certifies a global homothety.
    HoldsAt {
        ell: u64,
        r: usize,
        m: u64,
    },
    NoHomothetyUpTo(u64),
}

/// Smallest `m <= m_max` with `sigma^{2m} = [q^m]` on all of `E[l]`.
pub fn falsify_ordinary(curve: &EllipticCurve, ell: u64, m_max: u64, limits: Limits) -> Result<FalsifyOutcome> {
    check_ell(curve, ell)?;
    let sub = torsion_subgroup(curve, ell, limits.r_max_for(ell), limits.cap)?;
    Ok((1..=m_max)
        .find(|&m| homothety_holds(&sub, m))
        .map(|m| FalsifyOutcome::HoldsAt { ell, r: sub.r, m })
        .unwrap_or(FalsifyOutcome::NoHomothetyUpTo(m_max)))
}

/// `|E[n]| = n^2` for each `n`.
pub fn kernel_degree_check(curve: &EllipticCurve, ns: &[u64], limits: Limits) -> Result<Vec<KernelCheck>> {
    ns.iter()
        .map(|&n| {
            let k = kernel_size(curve, n, limits.r_max_for(n), limits.cap)?;
            let expected = n * n;
            Ok(KernelCheck { n, r: k.r, size: k.size, expected, pass: k.size == expected })
        })
        .collect()
}

/// Primes `l <= 11`, `l != p`, for which some `F_{q^r}` within the limits can
/// hold `E[l]` according to the predicted counts (`l^2 | N_r`).
pub fn default_ell_list(curve: &EllipticCurve, charpoly: &WeilPolynomial, limits: Limits) -> Vec<u64> {
    [2u64, 3, 5, 7, 11]
        .into_iter()
        .filter(|&ell| ell != curve.p())
        .filter(|&ell| {
            let full = BigInt::from(ell * ell);
            (1..=limits.r_max_for(ell))
                .take_while(|&r| checked_pow(curve.q(), r).is_some_and(|n| n <= limits.cap))
                .any(|r| (predicted_count(charpoly, r) % &full).to_u64() == Some(0))
        })
        .collect()
}

/// Verdict for a curve straight from its point count.
pub fn analyze_curve(curve: &EllipticCurve, cap: u64) -> Result<(u64, WeilPolynomial, SupersingularityVerdict)> {
    let (n1, charpoly) = curve_charpoly(curve, cap)?;
    let verdict = homothety_exponent(&charpoly)?;
    Ok((n1, charpoly, verdict))
}
