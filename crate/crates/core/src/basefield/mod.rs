//! Host fields: finite fields F_{q^m} and rational function fields F_{q^m}(t).
//!
//! A [`FieldSpec`] pins down the arithmetic context: the characteristic p,
//! q = p^e, the host extension degree m, the F_p-modulus for F_{p^{e·m}},
//! and the mode (FINITE or RATFUNC).  Elements carry a shared handle to
//! their spec, so values are self-contained and operations can check
//! compatibility.
//!
//! The two host element types, [`FFElem`] (finite mode) and [`RatFunc`]
//! (rational function mode), implement the common [`FieldElement`] trait;
//! everything downstream (Ore polynomials, Drinfeld modules, experiments)
//! is generic over it.

mod ffelem;
mod ratfunc;
mod tpoly;

pub use ffelem::FFElem;
pub use ratfunc::RatFunc;
pub use tpoly::TPoly;

use crate::error::Error;
use crate::fp;
use std::fmt;
use std::sync::Arc;

/// Which host field a spec describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// K = F_{q^m}, a finite (perfect) field.
    Finite,
    /// K = F_{q^m}(t), rational functions over the finite part.
    RatFunc,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Finite => "finite",
            Mode::RatFunc => "ratfunc",
        }
    }
}

/// Arithmetic context shared by all elements of a host field.
///
/// The finite part F_{q^m} = F_{p^{e·m}} is realized as F_p[x]/(modulus)
/// with `modulus` monic irreducible of degree e·m; the distinguished
/// generator `g` is the class of x.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    m: u32,
    modulus: Vec<u64>,
    mode: Mode,
}

impl FieldSpec {
    /// Build a spec with the default modulus: the lexicographically
    /// smallest monic irreducible polynomial of degree e·m over F_p.
    pub fn new(p: u64, e: u32, m: u32, mode: Mode) -> crate::Result<Arc<Self>> {
        if !fp::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || m == 0 {
            return Err(Error::Config("e and m must be positive".into()));
        }
        let modulus = fp::smallest_irreducible((e * m) as usize, p);
        Ok(Arc::new(FieldSpec { p, e, m, modulus, mode }))
    }

    /// Build a spec with an explicit modulus (ascending F_p coefficients,
    /// degree must be e·m, must be monic and irreducible).
    pub fn with_modulus(
        p: u64,
        e: u32,
        m: u32,
        mode: Mode,
        modulus: Vec<u64>,
    ) -> crate::Result<Arc<Self>> {
        if !fp::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || m == 0 {
            return Err(Error::Config("e and m must be positive".into()));
        }
        let mut modulus = modulus;
        for c in modulus.iter_mut() {
            *c %= p;
        }
        fp::trim(&mut modulus);
        if fp::deg(&modulus) != Some((e * m) as usize) || *modulus.last().unwrap() != 1 {
            return Err(Error::Config(format!(
                "modulus must be monic of degree e·m = {}",
                e * m
            )));
        }
        if !fp::is_irreducible(&modulus, p) {
            return Err(Error::NotIrreducible(p));
        }
        Ok(Arc::new(FieldSpec { p, e, m, modulus, mode }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// q = p^e.
    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Degree of the finite part over F_p: e·m.
    pub fn fdeg(&self) -> usize {
        (self.e * self.m) as usize
    }

    /// Cardinality of the finite part, p^{e·m}.
    pub fn card(&self) -> u64 {
        self.p.pow(self.e * self.m)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The same finite part in the other mode.
    pub fn remodel(self: &Arc<Self>, mode: Mode) -> Arc<Self> {
        if self.mode == mode {
            return Arc::clone(self);
        }
        Arc::new(FieldSpec {
            p: self.p,
            e: self.e,
            m: self.m,
            modulus: self.modulus.clone(),
            mode,
        })
    }

    /// All elements of the finite part F_{q^m}, in canonical ascending order.
    pub fn elements(self: &Arc<Self>) -> Vec<FFElem> {
        let n = self.fdeg();
        let mut out = Vec::with_capacity(self.card() as usize);
        let mut coords = vec![0u64; n];
        loop {
            out.push(FFElem::from_coords(self, coords.clone()));
            // canonical order = integer order with g-digits, so the
            // constant coordinate varies fastest
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                coords[i] += 1;
                if coords[i] < self.p {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }

    /// The elements of the base field F_q inside the finite part, in
    /// canonical order (fixed points of the q-power Frobenius).
    pub fn fq_elements(self: &Arc<Self>) -> Vec<FFElem> {
        self.elements()
            .into_iter()
            .filter(|x| x.frobenius(1) == *x)
            .collect()
    }

    /// Check compatibility of two specs used in one operation.
    pub(crate) fn assert_same(&self, other: &FieldSpec) {
        debug_assert_eq!(self, other, "elements from different field specs");
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            Mode::Finite => write!(f, "F_{}^{}", self.q(), self.m),
            Mode::RatFunc => write!(f, "F_{}^{}(t)", self.q(), self.m),
        }
    }
}

/// A finite place t ↦ c of the rational function field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Place {
    pub center: FFElem,
}

impl Place {
    pub fn new(center: FFElem) -> Self {
        Place { center }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t = {}", self.center)
    }
}

/// Common interface of host-field elements.
///
/// Implemented by [`FFElem`] (FINITE mode) and [`RatFunc`] (RATFUNC mode).
/// The `Ord` bound provides the canonical deterministic ordering used when
/// point sets are sorted for output.
pub trait FieldElement:
    Clone
    + PartialEq
    + Eq
    + PartialOrd
    + Ord
    + std::hash::Hash
    + std::fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Sized
    + 'static
{
    fn spec(&self) -> &Arc<FieldSpec>;
    fn zero(spec: &Arc<FieldSpec>) -> Self;
    fn one(spec: &Arc<FieldSpec>) -> Self;

    /// Embed an element of the finite part into the host.
    fn embed(c: FFElem) -> Self;

    /// The transcendental generator t; an error in FINITE mode.
    fn transcendental(spec: &Arc<FieldSpec>) -> crate::Result<Self>;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// Multiplicative inverse; error on zero.
    fn inv(&self) -> crate::Result<Self>;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    /// The q-power Frobenius iterated k times: x ↦ x^(q^k).
    fn frobenius(&self, k: usize) -> Self;

    /// Unique p-th root (host fields have a unique one when it exists;
    /// RATFUNC elements need all t-exponents divisible by p).
    fn pth_root(&self) -> crate::Result<Self>;

    /// Some(c) iff the element lies in the finite part.
    fn as_const(&self) -> Option<FFElem>;

    /// Static mode of the implementing type.
    fn mode() -> Mode;

    /// x^n by square-and-multiply.
    fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one(self.spec());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Division helper; error when `other` is zero.
    fn div(&self, other: &Self) -> crate::Result<Self> {
        Ok(self.mul(&other.inv()?))
    }
}
