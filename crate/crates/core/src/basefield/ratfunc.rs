//! Rational functions over the finite part: elements of F_{q^m}(t).

use super::{FFElem, FieldElement, FieldSpec, Mode, Place, TPoly};
use crate::error::Error;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// num/den in lowest terms.
///
/// # Invariants
/// - `den` is monic and nonzero,
/// - gcd(num, den) = 1,
/// - zero is represented as 0/1 (and one as 1/1).
#[derive(Clone)]
pub struct RatFunc {
    num: TPoly,
    den: TPoly,
}

impl RatFunc {
    /// Construct and normalize; error if `den` is zero.
    pub fn new(num: TPoly, den: TPoly) -> crate::Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial("denominator"));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: TPoly, den: TPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc {
                num,
                den: TPoly::one(den.spec()),
            };
        }
        if let Some(c) = den.as_constant() {
            // fast path: constant denominator needs no gcd
            let inv = c.inv().expect("nonzero by invariant");
            return RatFunc {
                num: num.scale(&inv),
                den: TPoly::one(num.spec()),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lead = den.leading_coeff().expect("nonzero by invariant").clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lead.inv().unwrap();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(num: TPoly) -> Self {
        let one = TPoly::one(num.spec());
        RatFunc { num, den: one }
    }

    pub fn constant(c: FFElem) -> Self {
        Self::from_poly(TPoly::constant(c))
    }

    pub fn t(spec: &Arc<FieldSpec>) -> Self {
        Self::from_poly(TPoly::t(spec))
    }

    pub fn from_int(spec: &Arc<FieldSpec>, n: i64) -> Self {
        Self::constant(FFElem::from_int(spec, n))
    }

    pub fn num(&self) -> &TPoly {
        &self.num
    }

    pub fn den(&self) -> &TPoly {
        &self.den
    }

    /// True iff den = 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some_and(|c| c.is_one())
    }

    /// Evaluate at the place t ↦ c; error if the denominator vanishes.
    pub fn specialize(&self, place: &Place) -> crate::Result<FFElem> {
        let d = self.den.eval(&place.center);
        if d.is_zero() {
            return Err(Error::PoleAtPlace(place.center.to_string()));
        }
        Ok(self.num.eval(&place.center).mul(&d.inv()?))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        // both sides are in lowest terms with monic denominators
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFunc {}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.num
            .cmp(&other.num)
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let num = self.num.to_string();
        if num.contains(' ') {
            write!(f, "({num})/({})", self.den)
        } else {
            write!(f, "{num}/({})", self.den)
        }
    }
}

impl FieldElement for RatFunc {
    fn spec(&self) -> &Arc<FieldSpec> {
        self.num.spec()
    }

    fn zero(spec: &Arc<FieldSpec>) -> Self {
        Self::from_poly(TPoly::zero(spec))
    }

    fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::from_poly(TPoly::one(spec))
    }

    fn embed(c: FFElem) -> Self {
        Self::constant(c)
    }

    fn transcendental(spec: &Arc<FieldSpec>) -> crate::Result<Self> {
        Ok(Self::t(spec))
    }

    fn add(&self, other: &Self) -> Self {
        // fast path for the dominant polynomial/polynomial case
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.num.add(&other.num));
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::normalized(num, den)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    fn inv(&self) -> crate::Result<Self> {
        if self.is_zero() {
            return Err(Error::precondition("inverse of zero"));
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.is_polynomial() && self.num.as_constant().is_some_and(|c| c.is_one())
    }

    fn frobenius(&self, k: usize) -> Self {
        // num and den stay coprime under a field automorphism, and the
        // Frobenius of a monic polynomial is monic
        RatFunc {
            num: self.num.frobenius(k),
            den: self.den.frobenius(k),
        }
    }

    fn pth_root(&self) -> crate::Result<Self> {
        // x = n/d = n·d^(p−1) / d^p; the denominator is then a p-th power,
        // so x is one iff n·d^(p−1) has all exponents divisible by p.
        let p = self.spec().p();
        if self.is_polynomial() {
            return Ok(Self::from_poly(self.num.pth_root()?));
        }
        let num = self.num.mul(&self.den.pow(p - 1));
        let root_num = num.pth_root()?;
        Ok(Self::normalized(root_num, self.den.clone()))
    }

    fn as_const(&self) -> Option<FFElem> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn mode() -> Mode {
        Mode::RatFunc
    }
}
