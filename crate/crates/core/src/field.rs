//! Exact arithmetic in prime fields `F_p` and extension fields `F_{p^k}`.
//!
//! Elements are stored in the polynomial basis `1, x, ..., x^{k-1}` of
//! `F_p[x] / (modulus)` with canonical residues in `[0, p)`. Descriptors are
//! shared through [`Field`] (an `Arc`) and are interned, so building the same
//! field twice hands back the same descriptor.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Primes must stay below this bound (products of two residues fit in `u64`).
pub const PRIME_BOUND: u64 = 1 << 31;

/// Default bound on the number of elements of any field we enumerate.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Fields up to this size get lookup tables for quadratic solving.
const TABLE_LIMIT: u64 = 1 << 24;

const NO_ROOT: u32 = u32::MAX;

type Coeffs = SmallVec<[u64; 8]>;

/// Shared handle to a field descriptor.
pub type Field = Arc<FieldDescriptor>;

/// `F_{p^k}` presented as `F_p[x] / (modulus)`.
pub struct FieldDescriptor {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    q: u64,
    /// `(x^i)^p` reduced, for `i < k`. The p-power map is F_p-linear.
    frob_images: Vec<Vec<u64>>,
    tables: OnceLock<QuadraticTables>,
}

struct QuadraticTables {
    /// `sqrt[v]` is the index of some `y` with `y^2 = v`, or `NO_ROOT`.
    sqrt: Vec<u32>,
    /// Characteristic 2 only: `artin_schreier[v]` is some `y` with `y^2 + y = v`.
    artin_schreier: Vec<u32>,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldDescriptor {}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("q", &self.q)
            .finish()
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} = F_{}[x]/({})", self.p, self.k, self.p, poly_to_string(&self.modulus))
        }
    }
}

fn poly_to_string(c: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (a, i) {
            (_, 0) => a.to_string(),
            (1, _) => mono,
            _ => format!("{a}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Trial-division primality test; adequate for `n < 2^62`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5] {
        if n.is_multiple_of(d) {
            return n == d;
        }
    }
    let mut d = 7u64;
    let mut step = [4u64, 2, 4, 2, 4, 6, 2, 6].iter().cycle();
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += step.next().unwrap();
    }
    true
}

/// `p^k`, or `None` on overflow.
pub fn checked_pow(p: u64, k: usize) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

fn interned() -> &'static Mutex<HashMap<(u64, usize), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_prime(p: u64) -> Result<()> {
    if p >= PRIME_BOUND {
        return Err(Error::TooLarge { value: p.to_string(), bound: PRIME_BOUND.to_string() });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// The prime field `F_p`.
pub fn make_prime_field(p: u64) -> Result<Field> {
    check_prime(p)?;
    Ok(intern(p, 1))
}

/// `F_{p^k}` with the first irreducible monic modulus in lexicographic order.
///
/// Candidates `x^k + c_{k-1} x^{k-1} + ... + c_0` are scanned by increasing
/// `sum c_i p^i`, i.e. lexicographically on `(c_{k-1}, ..., c_0)`.
pub fn make_extension_field(p: u64, k: usize, cap: u64) -> Result<Field> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidInput("extension degree must be at least 1".into()));
    }
    match checked_pow(p, k) {
        Some(q) if q <= cap => {}
        _ => return Err(Error::CapExceeded { what: format!("field of size {p}^{k}"), cap }),
    }
    Ok(intern(p, k))
}

fn intern(p: u64, k: usize) -> Field {
    let mut cache = interned().lock().unwrap_or_else(|e| e.into_inner());
    cache.entry((p, k)).or_insert_with(|| Arc::new(FieldDescriptor::build(p, k))).clone()
}

impl FieldDescriptor {
    fn build(p: u64, k: usize) -> Self {
        let modulus = if k == 1 { vec![0, 1] } else { first_irreducible(p, k) };
        let q = checked_pow(p, k).expect("field size checked by caller");
        let mut desc = FieldDescriptor { p, k, modulus, q, frob_images: Vec::new(), tables: OnceLock::new() };
        desc.frob_images = if k == 1 {
            vec![vec![1]]
        } else {
            let xp = poly::powmod(&[0, 1], p, &desc.modulus, p);
            let mut images = Vec::with_capacity(k);
            let mut acc = vec![1u64];
            for _ in 0..k {
                let mut padded = acc.clone();
                padded.resize(k, 0);
                images.push(padded);
                acc = poly::mulmod(&acc, &xp, &desc.modulus, p);
            }
            images
        };
        desc
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Degree over the prime field.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of elements, `p^k`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic modulus, little-endian. For `k = 1` this is the placeholder `X`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn characteristic_two(&self) -> bool {
        self.p == 2
    }

    fn tables(&self) -> &QuadraticTables {
        self.tables.get_or_init(|| QuadraticTables::build(self))
    }

    fn has_tables(&self) -> bool {
        self.q <= TABLE_LIMIT || self.p == 2
    }
}

impl QuadraticTables {
    fn build(field: &FieldDescriptor) -> Self {
        let n = field.q as usize;
        let mut sqrt = vec![NO_ROOT; n];
        let mut artin_schreier = if field.p == 2 { vec![NO_ROOT; n] } else { Vec::new() };
        let mut y = vec![0u64; field.k];
        for idx in 0..n {
            let sq = mul_raw(field, &y, &y);
            let sq_idx = index_of(field, &sq) as usize;
            if sqrt[sq_idx] == NO_ROOT {
                sqrt[sq_idx] = idx as u32;
            }
            if field.p == 2 {
                let v: Vec<u64> = sq.iter().zip(&y).map(|(a, b)| a ^ b).collect();
                let v_idx = index_of(field, &v) as usize;
                if artin_schreier[v_idx] == NO_ROOT {
                    artin_schreier[v_idx] = idx as u32;
                }
            }
            increment(&mut y, field.p);
        }
        QuadraticTables { sqrt, artin_schreier }
    }
}

fn increment(digits: &mut [u64], p: u64) {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return;
        }
        *d = 0;
    }
}

fn index_of(field: &FieldDescriptor, c: &[u64]) -> u64 {
    c.iter().rev().fold(0u64, |acc, &d| acc * field.p + d)
}

fn mul_raw(field: &FieldDescriptor, a: &[u64], b: &[u64]) -> Coeffs {
    let p = field.p;
    let k = field.k;
    if k == 1 {
        return SmallVec::from_slice(&[a[0] * b[0] % p]);
    }
    let mut prod = vec![0u128; 2 * k - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] += (ai * bj) as u128;
        }
    }
    let mut r: Vec<u64> = prod.iter().map(|&v| (v % p as u128) as u64).collect();
    let m = &field.modulus;
    for top in (k..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        r[top] = 0;
        for i in 0..k {
            // subtract c * m_i * x^{top-k+i}
            let sub = c * m[i] % p;
            let slot = &mut r[top - k + i];
            *slot = (*slot + p - sub) % p;
        }
    }
    r.truncate(k);
    SmallVec::from_vec(r)
}

fn first_irreducible(p: u64, k: usize) -> Vec<u64> {
    let mut lower = vec![0u64; k];
    loop {
        let mut cand = lower.clone();
        cand.push(1);
        if poly::is_irreducible(&cand, p) {
            return cand;
        }
        increment(&mut lower, p);
        assert!(lower.iter().any(|&d| d != 0), "irreducible polynomials exist in every degree");
    }
}

/// An element of a finite field.
#[derive(Clone)]
pub struct FieldElement {
    coeffs: Coeffs,
    field: Field,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "({})", poly_to_string(&self.coeffs))
        }
    }
}

fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn assert_same(a: &FieldElement, b: &FieldElement) {
    assert!(same_field(&a.field, &b.field), "field mismatch: {} vs {}", a.field, b.field);
}

impl FieldElement {
    pub fn zero(field: &Field) -> Self {
        FieldElement { coeffs: SmallVec::from_elem(0, field.k), field: field.clone() }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    /// The image of an integer (reduced mod p).
    pub fn from_int(field: &Field, n: i64) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[0] = n.rem_euclid(field.p as i64) as u64;
        e
    }

    /// The class of `x` in `F_p[x]/(modulus)`; equals 0 in a prime field.
    pub fn generator(field: &Field) -> Self {
        let mut e = Self::zero(field);
        if field.k > 1 {
            e.coeffs[1] = 1;
        }
        e
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u64]) -> Result<Self> {
        if coeffs.len() != field.k || coeffs.iter().any(|&c| c >= field.p) {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates in [0, {}), got {:?}",
                field.k, field.p, coeffs
            )));
        }
        Ok(FieldElement { coeffs: SmallVec::from_slice(coeffs), field: field.clone() })
    }

    /// Element with base-p digits of `index` as coordinates.
    pub fn from_index(field: &Field, mut index: u64) -> Result<Self> {
        if index >= field.q {
            return Err(Error::InvalidInput(format!("element index {index} out of range for {field}")));
        }
        let mut e = Self::zero(field);
        for c in e.coeffs.iter_mut() {
            *c = index % field.p;
            index /= field.p;
        }
        Ok(e)
    }

    /// Position in the enumeration order, `sum c_i p^i`.
    pub fn index(&self) -> u64 {
        index_of(&self.field, &self.coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.field.p;
        let coeffs = if self.field.k == 1 {
            vec![inv_mod(self.coeffs[0], p)]
        } else {
            let mut c = poly::inverse_mod(&self.coeffs, &self.field.modulus, p);
            c.resize(self.field.k, 0);
            c
        };
        Some(FieldElement { coeffs: SmallVec::from_vec(coeffs), field: self.field.clone() })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    /// `self^p`.
    pub fn frobenius_p(&self) -> Self {
        if self.field.k == 1 {
            return self.clone();
        }
        let p = self.field.p;
        let mut out = vec![0u64; self.field.k];
        for (c, image) in self.coeffs.iter().zip(&self.field.frob_images) {
            if *c == 0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(image) {
                *o = (*o + c * m) % p;
            }
        }
        FieldElement { coeffs: SmallVec::from_vec(out), field: self.field.clone() }
    }

    /// `self^{p^(j*s)}`, the s-th iterate of the `p^j`-power Frobenius.
    pub fn frobenius_iter(&self, j: usize, s: u64) -> Self {
        let k = self.field.k as u64;
        let steps = ((j as u64 % k) * (s % k)) % k;
        let mut out = self.clone();
        for _ in 0..steps {
            out = out.frobenius_p();
        }
        out
    }

    /// Some square root, when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.field.has_tables() {
            let r = self.field.tables().sqrt[self.index() as usize];
            return (r != NO_ROOT).then(|| Self::from_index(&self.field, r as u64).unwrap());
        }
        tonelli_shanks(self)
    }

    /// Whether `self` is a square (zero counts as a square).
    pub fn is_square(&self) -> bool {
        if self.field.has_tables() {
            return self.field.tables().sqrt[self.index() as usize] != NO_ROOT;
        }
        self.is_zero() || self.pow((self.field.q - 1) / 2).is_one()
    }

    /// Some `y` with `y^2 + y = self` in characteristic 2.
    fn artin_schreier_root(&self) -> Option<Self> {
        debug_assert!(self.field.p == 2);
        let r = self.field.tables().artin_schreier[self.index() as usize];
        (r != NO_ROOT).then(|| Self::from_index(&self.field, r as u64).unwrap())
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    old_s.rem_euclid(p as i64) as u64
}

fn tonelli_shanks(a: &FieldElement) -> Option<FieldElement> {
    let field = a.field();
    if a.is_zero() {
        return Some(a.clone());
    }
    if field.p == 2 {
        // squaring is bijective: sqrt(a) = a^{q/2}
        return Some(a.pow(field.q / 2));
    }
    if !a.is_square() {
        return None;
    }
    let q = field.q;
    let (mut s, mut odd) = (0u32, q - 1);
    while odd % 2 == 0 {
        odd /= 2;
        s += 1;
    }
    let non_residue = (1..q).map(|i| FieldElement::from_index(field, i).unwrap()).find(|z| !z.is_square())?;
    let mut m = s;
    let mut c = non_residue.pow(odd);
    let mut t = a.pow(odd);
    let mut r = a.pow(odd.div_ceil(2));
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = t2.square();
            i += 1;
        }
        let b = c.pow(1 << (m - i - 1));
        m = i;
        c = b.square();
        t = &t * &c;
        r = &r * &b;
    }
    Some(r)
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        assert_same(self, rhs);
        let p = self.field.p;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| (a + b) % p).collect();
        FieldElement { coeffs, field: self.field.clone() }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        assert_same(self, rhs);
        let p = self.field.p;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| (a + p - b) % p).collect();
        FieldElement { coeffs, field: self.field.clone() }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        assert_same(self, rhs);
        FieldElement { coeffs: mul_raw(&self.field, &self.coeffs, &rhs.coeffs), field: self.field.clone() }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement { coeffs, field: self.field.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic; the operator impls panic on mismatched fields instead.
pub fn elem_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    if !same_field(&a.field, &b.field) {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// `a^{q^s}` where `q` is the cardinality of a subfield of `a`'s field.
pub fn frobenius_elem(a: &FieldElement, q: u64, s: u64) -> Result<FieldElement> {
    let field = a.field();
    let j = (1..=field.k)
        .find(|&j| checked_pow(field.p, j) == Some(q))
        .filter(|j| field.k.is_multiple_of(*j))
        .ok_or(Error::FieldMismatch)?;
    Ok(a.frobenius_iter(j, s))
}

/// Roots of `a y^2 + b y + c` in the common field, sorted by index.
pub fn solve_quadratic(a: &FieldElement, b: &FieldElement, c: &FieldElement) -> Result<Vec<FieldElement>> {
    if !same_field(&a.field, &b.field) || !same_field(&a.field, &c.field) {
        return Err(Error::FieldMismatch);
    }
    let a_inv = a.inv().ok_or(Error::DegenerateLeadingCoefficient)?;
    let field = a.field().clone();
    let mut roots = if field.characteristic_two() {
        if b.is_zero() {
            // y^2 = c/a has exactly one root
            vec![(c * &a_inv).sqrt().expect("squaring is bijective in characteristic 2")]
        } else {
            // y = (b/a) z turns the equation into z^2 + z = a c / b^2
            let b_over_a = b * &a_inv;
            let b_sq_inv = b.square().inv().unwrap();
            let target = &(a * c) * &b_sq_inv;
            match target.artin_schreier_root() {
                Some(z) => {
                    let z2 = &z + &FieldElement::one(&field);
                    vec![&b_over_a * &z, &b_over_a * &z2]
                }
                None => Vec::new(),
            }
        }
    } else {
        let four = FieldElement::from_int(&field, 4);
        let disc = &b.square() - &(&four * &(a * c));
        match disc.sqrt() {
            None => Vec::new(),
            Some(s) => {
                let two_a_inv = (&FieldElement::from_int(&field, 2) * a).inv().unwrap();
                let neg_b = -b;
                vec![&(&neg_b + &s) * &two_a_inv, &(&neg_b - &s) * &two_a_inv]
            }
        }
    };
    roots.sort_by_key(|r| r.index());
    roots.dedup();
    Ok(roots)
}

/// Iterator over all elements in index order.
pub fn elements(field: &Field) -> impl Iterator<Item = FieldElement> + '_ {
    (0..field.q).map(move |i| FieldElement::from_index(field, i).unwrap())
}

/// A field embedding `F_{p^k} -> F_{p^{kr}}` sending the source generator to
/// the first root (in index order) of the source modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    powers: Vec<FieldElement>,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Self> {
        if source.p != target.p || !target.k.is_multiple_of(source.k) {
            return Err(Error::FieldMismatch);
        }
        let image = if source.k == 1 {
            FieldElement::zero(target)
        } else {
            elements(target)
                .find(|z| eval_poly_u64(&source.modulus, z).is_zero())
                .expect("a field of degree divisible by k contains every degree-k irreducible's roots")
        };
        let mut powers = Vec::with_capacity(source.k);
        let mut acc = FieldElement::one(target);
        for _ in 0..source.k {
            powers.push(acc.clone());
            acc = &acc * &image;
        }
        Ok(Embedding { source: source.clone(), target: target.clone(), powers })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn map(&self, a: &FieldElement) -> FieldElement {
        assert!(same_field(a.field(), &self.source), "element not in embedding source");
        let mut out = FieldElement::zero(&self.target);
        for (c, pw) in a.coeffs.iter().zip(&self.powers) {
            if *c != 0 {
                out = &out + &(&FieldElement::from_int(&self.target, *c as i64) * pw);
            }
        }
        out
    }
}

fn eval_poly_u64(coeffs: &[u64], z: &FieldElement) -> FieldElement {
    let field = z.field();
    coeffs
        .iter()
        .rev()
        .fold(FieldElement::zero(field), |acc, &c| &(&acc * z) + &FieldElement::from_int(field, c as i64))
}

/// Dense polynomials over `F_p`, little-endian, used for modulus selection.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        if a.is_empty() {
            a.push(0);
        }
        a
    }

    fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        super::inv_mod(a, p)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        divrem(a, m, p).1
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += (x * y) as u128;
            }
        }
        trim(out.into_iter().map(|v| (v % p as u128) as u64).collect())
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !is_zero(&b) {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin-style test: gcd(X^{p^i} - X, f) = 1 for 1 <= i <= deg/2.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        let x = vec![0u64, 1];
        let mut x_pow = x.clone();
        for _ in 1..=k / 2 {
            x_pow = powmod(&x_pow, p, f, p);
            let g = gcd(f, &sub(&x_pow, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    /// Inverse of `a` modulo the irreducible `m` via extended Euclid.
    pub fn inverse_mod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let (mut old_r, mut r) = (trim(m.to_vec()), trim(a.to_vec()));
        let (mut old_t, mut t) = (vec![0u64], vec![1u64]);
        while !is_zero(&r) {
            let (quot, rem_) = divrem(&old_r, &r, p);
            old_r = std::mem::replace(&mut r, rem_);
            let next = sub(&old_t, &mul(&quot, &t, p), p);
            old_t = std::mem::replace(&mut t, next);
        }
        // old_r is a nonzero constant
        let c = inv_mod(old_r[0], p);
        trim(old_t.iter().map(|&v| v * c % p).collect())
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        let mut r = trim(a.to_vec());
        if db == 0 {
            return (trim(r.iter().map(|&c| c * lead_inv % p).collect()), vec![0]);
        }
        if r.len() <= db {
            return (vec![0], r);
        }
        let mut quot = vec![0u64; r.len() - db];
        while r.len() > db && !is_zero(&r) {
            let dr = r.len() - 1;
            let c = r[dr] * lead_inv % p;
            quot[dr - db] = c;
            for i in 0..=db {
                let slot = &mut r[dr - db + i];
                *slot = (*slot + p - c * b[i] % p) % p;
            }
            r = trim(r);
        }
        (trim(quot), r)
    }
}
