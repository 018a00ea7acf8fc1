use crate::error::{Error, Result};
use crate::field::{checked_pow, elements, make_extension_field, Embedding, Field, FieldElement};

/// `y^2 = f(x)` with `f` monic, squarefree, of degree 5, in odd characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticModel {
    /// Little-endian, `f[5] = 1`.
    f: Vec<FieldElement>,
    field: Field,
}

impl HyperellipticModel {
    pub fn new(f: Vec<FieldElement>) -> Result<Self> {
        if f.len() != 6 {
            return Err(Error::InvalidInput(format!("expected 6 coefficients of a quintic, got {}", f.len())));
        }
        let field = f[0].field().clone();
        if f.iter().any(|c| **c.field() != *field) {
            return Err(Error::FieldMismatch);
        }
        if field.characteristic_two() {
            return Err(Error::InvalidInput("y^2 = f(x) models need odd characteristic".into()));
        }
        if !f[5].is_one() {
            return Err(Error::InvalidInput("f must be monic".into()));
        }
        let deriv: Vec<FieldElement> =
            f.iter().enumerate().skip(1).map(|(i, c)| &FieldElement::from_int(&field, i as i64) * c).collect();
        if degree(&gcd(f.clone(), deriv)) != Some(0) {
            return Err(Error::SingularCurve);
        }
        Ok(HyperellipticModel { f, field })
    }

    /// Model from integer coefficients `c_0..c_4` of a monic quintic (`c_5 = 1`).
    pub fn from_indices(field: &Field, lower: [u64; 5]) -> Result<Self> {
        let mut f = lower.iter().map(|&c| FieldElement::from_index(field, c)).collect::<Result<Vec<_>>>()?;
        f.push(FieldElement::one(field));
        Self::new(f)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.f
    }
}

fn degree(a: &[FieldElement]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

fn gcd(mut a: Vec<FieldElement>, mut b: Vec<FieldElement>) -> Vec<FieldElement> {
    while degree(&b).is_some() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn rem(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let db = degree(b).expect("nonzero divisor");
    let lead_inv = b[db].inv().unwrap();
    let mut r = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &lead_inv;
        for i in 0..=db {
            r[dr - db + i] = &r[dr - db + i] - &(&c * &b[i]);
        }
    }
    r
}

/// `#C(F_{q^r}) = 1 + sum_x (1 + chi(f(x)))`; the 1 is the single point at infinity.
pub fn count_hyperelliptic(model: &HyperellipticModel, r: usize, cap: u64) -> Result<u64> {
    let q = model.q();
    match checked_pow(q, r) {
        Some(n) if n <= cap && r >= 1 => {}
        _ => return Err(Error::CapExceeded { what: format!("F_{{{q}^{r}}}"), cap }),
    }
    let target = make_extension_field(model.field.p(), model.field.k() * r, cap)?;
    let emb = Embedding::new(&model.field, &target)?;
    let f: Vec<FieldElement> = model.f.iter().map(|c| emb.map(c)).collect();
    let mut count = 1u64;
    for x in elements(&target) {
        let v = f.iter().rev().fold(FieldElement::zero(&target), |acc, c| &(&acc * &x) + c);
        count += if v.is_zero() {
            1
        } else if v.is_square() {
            2
        } else {
            0
        };
    }
    Ok(count)
}
