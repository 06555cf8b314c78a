//! Elements of the finite part F_{q^m} = F_p[x]/(modulus).

use super::{FieldElement, FieldSpec, Mode};
use crate::error::Error;
use crate::fp;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// An element of F_{p^{e·m}} in coordinates over F_p.
///
/// `coords` has length e·m (fixed), entry i being the coefficient of g^i
/// where g is the class of x mod the `FieldSpec` modulus.
#[derive(Clone)]
pub struct FFElem {
    spec: Arc<FieldSpec>,
    coords: Vec<u64>,
}

impl FFElem {
    /// Element from coordinates (length must be e·m, entries reduced mod p).
    pub fn from_coords(spec: &Arc<FieldSpec>, mut coords: Vec<u64>) -> Self {
        assert_eq!(coords.len(), spec.fdeg(), "coordinate length mismatch");
        for c in coords.iter_mut() {
            *c %= spec.p();
        }
        FFElem { spec: Arc::clone(spec), coords }
    }

    /// Embed an integer (class mod p).
    pub fn from_int(spec: &Arc<FieldSpec>, n: i64) -> Self {
        let p = spec.p() as i64;
        let mut coords = vec![0; spec.fdeg()];
        coords[0] = n.rem_euclid(p) as u64;
        FFElem { spec: Arc::clone(spec), coords }
    }

    /// The distinguished generator g (class of x).
    pub fn generator(spec: &Arc<FieldSpec>) -> Self {
        let poly = fp::divrem(&[0, 1], spec.modulus(), spec.p()).1;
        Self::from_poly(spec, poly)
    }

    fn from_poly(spec: &Arc<FieldSpec>, poly: Vec<u64>) -> Self {
        let mut coords = poly;
        debug_assert!(coords.len() <= spec.fdeg());
        coords.resize(spec.fdeg(), 0);
        FFElem { spec: Arc::clone(spec), coords }
    }

    /// Coordinates over F_p (length e·m).
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Trimmed polynomial form for fp-level arithmetic.
    fn poly(&self) -> Vec<u64> {
        let mut v = self.coords.clone();
        fp::trim(&mut v);
        v
    }

    /// True iff the element lies in the subfield F_{q^d}.
    pub fn in_subfield(&self, d: u32) -> bool {
        self.frobenius(d as usize) == *self
    }

    /// x^n for word-sized n (cardinalities fit in u64 at desk scale).
    pub fn pow_u64(&self, n: u64) -> Self {
        <Self as FieldElement>::pow(self, n)
    }

    /// x^n with a wide exponent, reduced via x^(card−1) = 1 for x ≠ 0.
    pub fn pow_wide(&self, n: u128) -> Self {
        if self.is_zero() {
            return if n == 0 { Self::one(&self.spec) } else { self.clone() };
        }
        let order = (self.spec.card() - 1) as u128;
        self.pow_u64((n % order) as u64)
    }

    /// Multiplicative order; panics on zero.
    pub fn mult_order(&self) -> u64 {
        assert!(!self.is_zero());
        let mut n = self.spec.card() - 1;
        for l in fp::prime_divisors(n) {
            while n % l == 0 && self.pow_u64(n / l).is_one() {
                n /= l;
            }
        }
        n
    }
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.spec.assert_same(&other.spec);
        self.coords == other.coords
    }
}

impl Eq for FFElem {}

impl PartialOrd for FFElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FFElem {
    /// Canonical order: integer order on g-adic digits, most significant
    /// coordinate first, so constants 0, 1, ..., p−1 come before g.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.iter().rev().cmp(other.coords.iter().rev())
    }
}

impl Hash for FFElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FFElem({self})")
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "g")?,
                (1, c) => write!(f, "{c}*g")?,
                (i, 1) => write!(f, "g^{i}")?,
                (i, c) => write!(f, "{c}*g^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElement for FFElem {
    fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    fn zero(spec: &Arc<FieldSpec>) -> Self {
        FFElem {
            spec: Arc::clone(spec),
            coords: vec![0; spec.fdeg()],
        }
    }

    fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::from_int(spec, 1)
    }

    fn embed(c: FFElem) -> Self {
        c
    }

    fn transcendental(spec: &Arc<FieldSpec>) -> crate::Result<Self> {
        let _ = spec;
        Err(Error::ModeMismatch {
            required: "ratfunc",
            actual: "finite",
        })
    }

    fn add(&self, other: &Self) -> Self {
        self.spec.assert_same(&other.spec);
        let p = self.spec.p();
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FFElem { spec: Arc::clone(&self.spec), coords }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn neg(&self) -> Self {
        let p = self.spec.p();
        let coords = self.coords.iter().map(|&a| fp::neg(a, p)).collect();
        FFElem { spec: Arc::clone(&self.spec), coords }
    }

    fn mul(&self, other: &Self) -> Self {
        self.spec.assert_same(&other.spec);
        let p = self.spec.p();
        let prod = fp::mul(&self.poly(), &other.poly(), p);
        let red = fp::divrem(&prod, self.spec.modulus(), p).1;
        Self::from_poly(&self.spec, red)
    }

    fn inv(&self) -> crate::Result<Self> {
        if self.is_zero() {
            return Err(Error::precondition("inverse of zero"));
        }
        // extended Euclid: a·s + modulus·t = 1
        let p = self.spec.p();
        let mut r0 = self.spec.modulus().to_vec();
        let mut r1 = self.poly();
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = fp::divrem(&r0, &r1, p);
            let s = fp::sub(&s0, &fp::mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant gcd; scale s0 by its inverse
        debug_assert_eq!(fp::deg(&r0), Some(0));
        let c = fp::inv(r0[0], p);
        let out: Vec<u64> = s0.iter().map(|&x| x * c % p).collect();
        let red = fp::divrem(&out, self.spec.modulus(), p).1;
        Ok(Self::from_poly(&self.spec, red))
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    fn frobenius(&self, k: usize) -> Self {
        // x ↦ x^(q^k) = x^(p^(e·k)); since x^(p^(e·m)) = x the p-power map
        // only needs e·k mod e·m iterations.
        let k_red = (k * self.spec.e() as usize) % self.spec.fdeg();
        let p = self.spec.p();
        let mut acc = self.clone();
        for _ in 0..k_red {
            acc = acc.pow_u64(p);
        }
        acc
    }

    fn pth_root(&self) -> crate::Result<Self> {
        // x ↦ x^(p^(e·m − 1)) inverts the p-power map on F_{p^(e·m)}.
        let mut acc = self.clone();
        let p = self.spec.p();
        for _ in 0..self.spec.fdeg() - 1 {
            acc = acc.pow_u64(p);
        }
        Ok(acc)
    }

    fn as_const(&self) -> Option<FFElem> {
        Some(self.clone())
    }

    fn mode() -> Mode {
        Mode::Finite
    }
}
