//! General Weierstrass elliptic curves over finite fields, plus point counts
//! for genus-2 curves `y^2 = f(x)` with `deg f = 5`.
//!
//! A curve remembers the field `F_q` it was defined over even after base
//! change, so [`EllipticCurve::frobenius`] is always the `q`-power map.

mod hyperelliptic;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{checked_pow, elements, is_prime, make_extension_field, Embedding, Field, FieldElement};

pub use hyperelliptic::{count_hyperelliptic, HyperellipticModel};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    a: [FieldElement; 5],
    field: Field,
    base_field: Field,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    fn sort_key(&self) -> Option<(u64, u64)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x.index(), y.index())),
        }
    }
}

impl Ord for CurvePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for CurvePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Validates the discriminant and builds the curve over the coefficients' field.
pub fn make_curve(
    a1: FieldElement,
    a2: FieldElement,
    a3: FieldElement,
    a4: FieldElement,
    a6: FieldElement,
) -> Result<EllipticCurve> {
    let field = a1.field().clone();
    if [&a2, &a3, &a4, &a6].iter().any(|c| **c.field() != *field) {
        return Err(Error::FieldMismatch);
    }
    let curve = EllipticCurve { a: [a1, a2, a3, a4, a6], base_field: field.clone(), field };
    if curve.discriminant().is_zero() {
        return Err(Error::SingularCurve);
    }
    Ok(curve)
}

impl EllipticCurve {
    /// Curve over a field from integer coefficients `[a1, a2, a3, a4, a6]`,
    /// each read as an element index (plain residues for prime fields).
    pub fn from_indices(field: &Field, coeffs: [u64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = coeffs.map(|c| FieldElement::from_index(field, c));
        make_curve(a1?, a2?, a3?, a4?, a6?)
    }

    pub fn a1(&self) -> &FieldElement {
        &self.a[0]
    }
    pub fn a2(&self) -> &FieldElement {
        &self.a[1]
    }
    pub fn a3(&self) -> &FieldElement {
        &self.a[2]
    }
    pub fn a4(&self) -> &FieldElement {
        &self.a[3]
    }
    pub fn a6(&self) -> &FieldElement {
        &self.a[4]
    }

    /// Field the coordinates live in.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The field `F_q` the curve was defined over.
    pub fn base_field(&self) -> &Field {
        &self.base_field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn q(&self) -> u64 {
        self.base_field.q()
    }

    /// `[F_{q^r} : F_q]` for the current coordinate field.
    pub fn extension_degree(&self) -> usize {
        self.field.k() / self.base_field.k()
    }

    fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_int(&self.field, n)
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_quantities(&self) -> [FieldElement; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = &a1.square() + &(&self.int(4) * a2);
        let b4 = &(&self.int(2) * a4) + &(a1 * a3);
        let b6 = &a3.square() + &(&self.int(4) * a6);
        let b8 = &(&(&(&a1.square() * a6) + &(&self.int(4) * &(a2 * a6))) - &(&(a1 * a3) * a4))
            + &(&(a2 * &a3.square()) - &a4.square());
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> FieldElement {
        let [b2, b4, b6, b8] = self.b_quantities();
        let t1 = -&(&b2.square() * &b8);
        let t2 = &self.int(8) * &(&b4.square() * &b4);
        let t3 = &self.int(27) * &b6.square();
        let t4 = &self.int(9) * &(&(&b2 * &b4) * &b6);
        &(&(&t1 - &t2) - &t3) + &t4
    }

    /// Right-hand side `x^3 + a2 x^2 + a4 x + a6`.
    fn cubic(&self, x: &FieldElement) -> FieldElement {
        let [_, a2, _, a4, a6] = &self.a;
        &(&(&(&(x + a2) * x) + a4) * x) + a6
    }

    /// Coefficient of `y` in the quadratic for a fixed `x`: `a1 x + a3`.
    fn linear_y(&self, x: &FieldElement) -> FieldElement {
        &(self.a1() * x) + self.a3()
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                **x.field() == *self.field
                    && **y.field() == *self.field
                    && (y * &(y + &self.linear_y(x))) == self.cubic(x)
            }
        }
    }

    pub fn point(&self, x: FieldElement, y: FieldElement) -> Result<CurvePoint> {
        let pt = CurvePoint::Affine { x, y };
        if self.contains(&pt) {
            Ok(pt)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    /// `-(x, y) = (x, -y - a1 x - a3)`.
    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: &(-y) - &self.linear_y(x) },
        }
    }

    /// Chord-and-tangent addition on the general Weierstrass model.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = &self.a;
        let (lambda, nu) = if x1 != x2 {
            let dx_inv = (x2 - x1).inv().unwrap();
            let lambda = &(y2 - y1) * &dx_inv;
            let nu = &(&(y1 * x2) - &(y2 * x1)) * &dx_inv;
            (lambda, nu)
        } else {
            let denom = &(&(&self.int(2) * y1) + &(a1 * x1)) + a3;
            if denom.is_zero() || y1 != y2 {
                // vertical line: Q = -P
                return CurvePoint::Infinity;
            }
            let d_inv = denom.inv().unwrap();
            let x1_sq = x1.square();
            let num_l = &(&(&(&self.int(3) * &x1_sq) + &(&(&self.int(2) * a2) * x1)) + a4) - &(a1 * y1);
            let num_n = &(&(&(-&(&x1_sq * x1)) + &(a4 * x1)) + &(&self.int(2) * a6)) - &(a3 * y1);
            (&num_l * &d_inv, &num_n * &d_inv)
        };
        let x3 = &(&(&(&lambda.square() + &(a1 * &lambda)) - a2) - x1) - x2;
        let y3 = &(&(-&(&(&lambda + a1) * &x3)) - &nu) - a3;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    /// `[n]P` by double-and-add; negative `n` goes through `-P`.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut run = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &run);
            }
            e >>= 1;
            if e > 0 {
                run = self.double(&run);
            }
        }
        acc
    }

    /// `sigma^s` where `sigma` raises coordinates to the `q`-th power.
    pub fn frobenius(&self, p: &CurvePoint, s: u64) -> CurvePoint {
        let j = self.base_field.k();
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.frobenius_iter(j, s), y: y.frobenius_iter(j, s) },
        }
    }

    /// The same curve with coordinates in `F_{q^r}`.
    pub fn extend_to(&self, r: usize, cap: u64) -> Result<EllipticCurve> {
        if r == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        let degree = self.base_field.k() * r;
        if degree == self.field.k() {
            return Ok(self.clone());
        }
        if !degree.is_multiple_of(self.field.k()) {
            return Err(Error::FieldMismatch);
        }
        let target = make_extension_field(self.p(), degree, cap)?;
        let emb = Embedding::new(&self.field, &target)?;
        Ok(EllipticCurve { a: self.a.clone().map(|c| emb.map(&c)), field: target, base_field: self.base_field.clone() })
    }

    /// Embedding of this curve's coordinate field into that of `ext`.
    pub fn embedding_into(&self, ext: &EllipticCurve) -> Result<Embedding> {
        Embedding::new(&self.field, &ext.field)
    }

    pub fn map_point(emb: &Embedding, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: emb.map(x), y: emb.map(y) },
        }
    }

    fn ys_over(&self, x: &FieldElement) -> Vec<FieldElement> {
        let one = FieldElement::one(&self.field);
        crate::field::solve_quadratic(&one, &self.linear_y(x), &(-&self.cubic(x)))
            .expect("monic quadratic in a single field")
    }

    fn affine_count_over(&self, x: &FieldElement) -> u64 {
        if self.field.characteristic_two() {
            return self.ys_over(x).len() as u64;
        }
        // y^2 + b y - c = 0 has 1 + chi(b^2 + 4c) roots
        let b = self.linear_y(x);
        let disc = &b.square() + &(&self.int(4) * &self.cubic(x));
        if disc.is_zero() {
            1
        } else if disc.is_square() {
            2
        } else {
            0
        }
    }
}

fn push_term(out: &mut String, c: &FieldElement, monomial: &str) {
    if c.is_zero() {
        return;
    }
    out.push_str(" + ");
    if !c.is_one() || monomial.is_empty() {
        out.push_str(&c.to_string());
    }
    out.push_str(monomial);
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        let mut lhs = "y^2".to_string();
        push_term(&mut lhs, a1, "xy");
        push_term(&mut lhs, a3, "y");
        let mut rhs = "x^3".to_string();
        push_term(&mut rhs, a2, "x^2");
        push_term(&mut rhs, a4, "x");
        push_term(&mut rhs, a6, "");
        write!(f, "{lhs} = {rhs} over {}", self.base_field)
    }
}

/// Points of a curve over one extension.
#[derive(Clone, Debug)]
pub struct PointSet {
    /// The curve with coordinates in the extension.
    pub curve: EllipticCurve,
    pub count: u64,
    /// Point at infinity first, then affine points by `(x, y)` index.
    pub points: Vec<CurvePoint>,
}

fn field_size(curve: &EllipticCurve, r: usize, cap: u64) -> Result<u64> {
    match checked_pow(curve.q(), r) {
        Some(n) if n <= cap => Ok(n),
        _ => Err(Error::CapExceeded { what: format!("F_{{{}^{}}}", curve.q(), r), cap }),
    }
}

/// `#E(F_{q^r})`, including the point at infinity.
pub fn count_points(curve: &EllipticCurve, r: usize, cap: u64) -> Result<u64> {
    field_size(curve, r, cap)?;
    let ext = curve.extend_to(r, cap)?;
    Ok(1 + elements(ext.field()).map(|x| ext.affine_count_over(&x)).sum::<u64>())
}

/// `#E(F_{q^r})` for `r = 1, 2, ...` while `q^r <= cap` and `r <= r_max`,
/// from one enumeration over `F_q` and the trace recurrence
/// `s_r = t s_{r-1} - q s_{r-2}`, `#E(F_{q^r}) = q^r + 1 - s_r`.
fn counts_up_to(curve: &EllipticCurve, r_max: usize, cap: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    if r_max == 0 || field_size(curve, 1, cap).is_err() {
        return Ok(out);
    }
    let q = curve.q() as i128;
    let t = q + 1 - count_points(curve, 1, cap)? as i128;
    let (mut prev, mut cur) = (2i128, t);
    for r in 1..=r_max {
        let Ok(qr) = field_size(curve, r, cap) else { break };
        out.push((qr as i128 + 1 - cur) as u64);
        (prev, cur) = (cur, t * cur - q * prev);
    }
    Ok(out)
}

/// All of `E(F_{q^r})`.
pub fn enumerate_points(curve: &EllipticCurve, r: usize, cap: u64) -> Result<PointSet> {
    field_size(curve, r, cap)?;
    let ext = curve.extend_to(r, cap)?;
    let mut points = vec![CurvePoint::Infinity];
    for x in elements(ext.field()) {
        for y in ext.ys_over(&x) {
            points.push(CurvePoint::Affine { x: x.clone(), y });
        }
    }
    Ok(PointSet { count: points.len() as u64, points, curve: ext })
}

/// Default extension bound for `n`-torsion searches.
pub fn default_r_max(n: u64) -> usize {
    (n * n).saturating_sub(1).max(1) as usize
}

/// `E[l]` over the smallest `F_{q^r}` containing all of it.
#[derive(Clone, Debug)]
pub struct TorsionSubgroup {
    pub ell: u64,
    pub r: usize,
    pub curve: EllipticCurve,
    pub points: Vec<CurvePoint>,
}

fn killed_by(curve: &EllipticCurve, n: u64, pts: Vec<CurvePoint>) -> Vec<CurvePoint> {
    pts.into_iter().filter(|p| curve.scalar_mul(n as i64, p).is_infinity()).collect()
}

pub fn torsion_subgroup(curve: &EllipticCurve, ell: u64, r_max: usize, cap: u64) -> Result<TorsionSubgroup> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == curve.p() {
        return Err(Error::EqualsCharacteristic(ell));
    }
    let full = ell * ell;
    for (i, count) in counts_up_to(curve, r_max, cap)?.into_iter().enumerate() {
        let r = i + 1;
        // E[l] is a subgroup of order l^2
        if count % full != 0 {
            continue;
        }
        let set = enumerate_points(curve, r, cap)?;
        let points = killed_by(&set.curve, ell, set.points);
        if points.len() as u64 == full {
            return Ok(TorsionSubgroup { ell, r, curve: set.curve, points });
        }
    }
    Err(Error::ExtensionBoundExceeded { n: ell, r_max, cap })
}

/// Size of `E[n]`, found over the first `F_{q^r}` where `[n]` kills at least `n^2` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelSize {
    pub n: u64,
    pub r: usize,
    pub size: u64,
}

pub fn kernel_size(curve: &EllipticCurve, n: u64, r_max: usize, cap: u64) -> Result<KernelSize> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if num_integer::gcd(n, curve.p()) != 1 {
        return Err(Error::NotCoprimeToCharacteristic { n, p: curve.p() });
    }
    if n == 1 {
        return Ok(KernelSize { n, r: 1, size: 1 });
    }
    for (i, count) in counts_up_to(curve, r_max, cap)?.into_iter().enumerate() {
        let r = i + 1;
        // E(F_{q^r})[n] has at most n^2 points, and all of them only if n^2 | N_r
        if count % (n * n) != 0 {
            continue;
        }
        let set = enumerate_points(curve, r, cap)?;
        let size = killed_by(&set.curve, n, set.points).len() as u64;
        if size >= n * n {
            return Ok(KernelSize { n, r, size });
        }
    }
    Err(Error::ExtensionBoundExceeded { n, r_max, cap })
}
