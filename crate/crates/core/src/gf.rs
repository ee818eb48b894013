//! Arithmetic in GF(2^λ) through log/antilog tables.
//!
//! Elements are stored as `u16` integers whose bit `i` is the coefficient of
//! `x^i` in the polynomial representation. The primitive element `α` is
//! therefore `2`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("field exponent λ={0} outside supported range 2..=16")]
    InvalidExponent(u32),
    #[error("no default primitive polynomial for λ={0}; supply one")]
    NoDefaultPolynomial(u32),
    #[error("polynomial {poly:#b} is not primitive of degree {lambda}")]
    NotPrimitive { poly: u32, lambda: u32 },
    #[error("value {value} is not an element of GF({q})")]
    ElementOutOfRange { value: u32, q: u32 },
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
}

/// An element of some GF(2^λ). The field it belongs to is carried by the
/// [`Field`] that operates on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw encoding without range checking. Use [`Field::element`]
    /// for validated construction.
    pub const fn from_raw(v: u16) -> Self {
        FieldElement(v)
    }

    pub const fn value(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Addition in characteristic two. Independent of the modulus.
impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

struct Tables {
    lambda: u32,
    q: u32,
    poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// A finite field context. Cloning is cheap; tables are shared.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.t.lambda == other.t.lambda && self.t.poly == other.t.poly
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}; {:#b})", self.t.q, self.t.poly)
    }
}

/// Default primitive polynomial for the given extension degree, if one is
/// built in.
pub fn default_primitive_poly(lambda: u32) -> Option<u32> {
    match lambda {
        2 => Some(0b111),
        3 => Some(0b1011),
        _ => None,
    }
}

impl Field {
    /// Builds GF(2^λ) modulo `poly`. Fails unless `poly` has degree λ and
    /// `x` generates the whole multiplicative group.
    pub fn new(lambda: u32, poly: u32) -> Result<Field, GfError> {
        if !(2..=16).contains(&lambda) {
            return Err(GfError::InvalidExponent(lambda));
        }
        let q = 1u32 << lambda;
        if poly >> lambda != 1 {
            return Err(GfError::NotPrimitive { poly, lambda });
        }
        let n = (q - 1) as usize;
        let mut exp = vec![0u16; 2 * n];
        let mut log = vec![0u16; q as usize];
        let mut seen = vec![false; q as usize];
        let mut x: u32 = 1;
        for (k, slot) in exp.iter_mut().take(n).enumerate() {
            if seen[x as usize] {
                return Err(GfError::NotPrimitive { poly, lambda });
            }
            seen[x as usize] = true;
            *slot = x as u16;
            log[x as usize] = k as u16;
            x <<= 1;
            if x & q != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(GfError::NotPrimitive { poly, lambda });
        }
        for k in n..2 * n {
            exp[k] = exp[k - n];
        }
        Ok(Field { t: Arc::new(Tables { lambda, q, poly, exp, log }) })
    }

    /// GF(2^λ) with the built-in primitive polynomial.
    pub fn with_default(lambda: u32) -> Result<Field, GfError> {
        let poly = default_primitive_poly(lambda).ok_or(GfError::NoDefaultPolynomial(lambda))?;
        Field::new(lambda, poly)
    }

    /// Field of order `q`, which must be a power of two.
    pub fn of_order(q: u32, poly: Option<u32>) -> Result<Field, GfError> {
        if !q.is_power_of_two() {
            return Err(GfError::InvalidExponent(0));
        }
        let lambda = q.trailing_zeros();
        match poly {
            Some(p) => Field::new(lambda, p),
            None => Field::with_default(lambda),
        }
    }

    pub fn gf4() -> Field {
        Field::with_default(2).expect("built-in GF(4)")
    }

    pub fn gf8() -> Field {
        Field::with_default(3).expect("built-in GF(8)")
    }

    pub fn lambda(&self) -> u32 {
        self.t.lambda
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    pub fn primitive_poly(&self) -> u32 {
        self.t.poly
    }

    /// The primitive element α.
    pub fn alpha(&self) -> FieldElement {
        FieldElement(2)
    }

    pub fn element(&self, v: u32) -> Result<FieldElement, GfError> {
        if v >= self.t.q {
            return Err(GfError::ElementOutOfRange { value: v, q: self.t.q });
        }
        Ok(FieldElement(v as u16))
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        (x.0 as u32) < self.t.q
    }

    fn check(&self, x: FieldElement) -> Result<(), GfError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GfError::ElementOutOfRange { value: x.0 as u32, q: self.t.q })
        }
    }

    /// All nonzero elements in ascending integer encoding.
    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.t.q).map(|v| FieldElement(v as u16))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.t.q).map(|v| FieldElement(v as u16))
    }

    /// `α^k`, exponent taken modulo q−1.
    pub fn exp(&self, k: usize) -> FieldElement {
        let n = (self.t.q - 1) as usize;
        FieldElement(self.t.exp[k % n])
    }

    /// Discrete logarithm to base α.
    pub fn log(&self, x: FieldElement) -> Option<usize> {
        if x.is_zero() || !self.contains(x) {
            None
        } else {
            Some(self.t.log[x.0 as usize] as usize)
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let la = self.t.log[a.0 as usize] as usize;
        let lb = self.t.log[b.0 as usize] as usize;
        FieldElement(self.t.exp[la + lb])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let n = (self.t.q - 1) as usize;
        let la = self.t.log[a.0 as usize] as usize;
        Ok(FieldElement(self.t.exp[(n - la) % n]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a + b)
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Renders `x` as `0`, `1`, `α`, `α²`, … with a superscript exponent.
    pub fn power_notation(&self, x: FieldElement) -> String {
        match self.log(x) {
            None => "0".to_string(),
            Some(0) => "1".to_string(),
            Some(1) => "α".to_string(),
            Some(k) => {
                const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
                let exp: String = k.to_string().bytes().map(|d| SUP[(d - b'0') as usize]).collect();
                format!("α{exp}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(v: u16) -> FieldElement {
        FieldElement(v)
    }

    #[test]
    fn gf4_table_values() {
        let f = Field::gf4();
        let a = f.alpha();
        assert_eq!(f.mul(a, a), e(3));
        assert_eq!(f.exp(2), e(3));
        assert_eq!(f.inv(a).unwrap(), e(3));
        assert_eq!(f.mul(e(3), e(3)), a);
        assert_eq!(f.exp(3), FieldElement::ONE);
    }

    #[test]
    fn gf8_addition_is_xor() {
        let f = Field::gf8();
        assert_eq!(f.try_add(e(5), e(3)).unwrap(), e(6));
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = Field::gf4();
        assert_eq!(f.inv(FieldElement::ZERO), Err(GfError::DivisionByZero));
    }

    #[test]
    fn out_of_range_element_is_rejected() {
        let f = Field::gf4();
        assert!(matches!(f.try_mul(e(4), e(1)), Err(GfError::ElementOutOfRange { .. })));
        assert!(f.element(4).is_err());
    }

    #[test]
    fn non_primitive_poly_is_rejected() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
        assert!(matches!(Field::new(4, 0b11111), Err(GfError::NotPrimitive { .. })));
        assert!(Field::new(4, 0b10011).is_ok());
        assert!(matches!(Field::with_default(5), Err(GfError::NoDefaultPolynomial(5))));
        assert!(matches!(Field::new(1, 0b11), Err(GfError::InvalidExponent(1))));
    }

    #[test]
    fn power_notation() {
        let f = Field::gf4();
        assert_eq!(f.power_notation(e(0)), "0");
        assert_eq!(f.power_notation(e(1)), "1");
        assert_eq!(f.power_notation(e(2)), "α");
        assert_eq!(f.power_notation(e(3)), "α²");
        let big = Field::new(4, 0b10011).unwrap();
        assert_eq!(big.power_notation(big.exp(14)), "α¹⁴");
    }

    fn fields() -> Vec<Field> {
        vec![Field::gf4(), Field::gf8(), Field::new(4, 0b10011).unwrap()]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn field_axioms(fi in 0usize..3, a in 0u16..16, b in 0u16..16, c in 0u16..16) {
            let f = &fields()[fi];
            let q = f.q() as u16;
            let (a, b, c) = (e(a % q), e(b % q), e(c % q));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
            prop_assert_eq!(a + a, FieldElement::ZERO);
            prop_assert_eq!(f.mul(a, FieldElement::ONE), a);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                prop_assert_eq!(f.exp(f.log(a).unwrap()), a);
            }
        }
    }
}
