//! Sparse polynomials in t with coefficients in the finite part F_{q^m}.
//!
//! Twisted multiplication raises coefficients to q^i-th powers, so the
//! polynomials appearing in commutation checks have astronomically large
//! t-exponents (t^(3^33) and beyond) while staying very sparse.  Terms are
//! therefore kept in a BTreeMap keyed by u128 exponents; u128 gives enough
//! headroom that exponent arithmetic cannot overflow at desk scale.

use super::{FFElem, FieldElement, FieldSpec};
use crate::error::Error;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Sparse polynomial Σ c_e·t^e, invariant: stored coefficients are nonzero.
#[derive(Clone)]
pub struct TPoly {
    spec: Arc<FieldSpec>,
    terms: BTreeMap<u128, FFElem>,
}

impl TPoly {
    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        TPoly { spec: Arc::clone(spec), terms: BTreeMap::new() }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::constant(FFElem::one(spec))
    }

    /// The monomial t.
    pub fn t(spec: &Arc<FieldSpec>) -> Self {
        Self::monomial(FFElem::one(spec), 1)
    }

    pub fn constant(c: FFElem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: FFElem, exp: u128) -> Self {
        let spec = Arc::clone(c.spec());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        TPoly { spec, terms }
    }

    /// Build from dense ascending coefficients.
    pub fn from_coeffs(spec: &Arc<FieldSpec>, coeffs: &[FFElem]) -> Self {
        let mut out = Self::zero(spec);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(i as u128, c.clone());
            }
        }
        out
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree in t; None for the zero polynomial.
    pub fn degree(&self) -> Option<u128> {
        self.terms.keys().next_back().copied()
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterate (exponent, coefficient) in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u128, &FFElem)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: u128) -> FFElem {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| FFElem::zero(&self.spec))
    }

    pub fn leading_coeff(&self) -> Option<&FFElem> {
        self.terms.values().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().unwrap_or(0) == 0
    }

    pub fn as_constant(&self) -> Option<FFElem> {
        if self.is_zero() {
            Some(FFElem::zero(&self.spec))
        } else if self.is_constant() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    fn insert_add(&mut self, exp: u128, c: &FFElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.spec.assert_same(&other.spec);
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.insert_add(e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(&e, c)| (e, c.neg())).collect();
        TPoly { spec: Arc::clone(&self.spec), terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.spec.assert_same(&other.spec);
        let mut out = Self::zero(&self.spec);
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &other.terms {
                let prod = c1.mul(c2);
                out.insert_add(
                    e1.checked_add(e2).expect("t-exponent overflow"),
                    &prod,
                );
            }
        }
        out
    }

    pub fn scale(&self, c: &FFElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.spec);
        }
        let terms = self.terms.iter().map(|(&e, x)| (e, x.mul(c))).collect();
        TPoly { spec: Arc::clone(&self.spec), terms }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one(&self.spec);
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

    /// Euclidean division; panics on zero divisor.  Only called on
    /// small-degree operands (normalization, gcd, F_q[t] arithmetic).
    pub fn divrem(&self, other: &Self) -> (Self, Self) {
        assert!(!other.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let mut q = Self::zero(&self.spec);
        let d_other = other.degree().unwrap();
        let lead_inv = other.leading_coeff().unwrap().inv().unwrap();
        while let Some(d_r) = r.degree() {
            if d_r < d_other {
                break;
            }
            let k = d_r - d_other;
            let c = r.leading_coeff().unwrap().mul(&lead_inv);
            q.insert_add(k, &c);
            // r -= c·t^k·other
            for (e, oc) in other.terms() {
                let sub = c.mul(oc).neg();
                r.insert_add(e + k, &sub);
            }
        }
        (q, r)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to leading coefficient 1 (no-op on zero).
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Evaluate at a point of the finite part.
    pub fn eval(&self, x: &FFElem) -> FFElem {
        let mut acc = FFElem::zero(&self.spec);
        for (e, c) in self.terms() {
            acc = acc.add(&c.mul(&x.pow_wide(e)));
        }
        acc
    }

    /// Coefficient-wise q^k Frobenius with t-exponents scaled by q^k.
    pub fn frobenius(&self, k: usize) -> Self {
        let qk = (self.spec.q() as u128)
            .checked_pow(k as u32)
            .expect("Frobenius twist overflow");
        let terms = self
            .terms
            .iter()
            .map(|(&e, c)| {
                (
                    e.checked_mul(qk).expect("t-exponent overflow"),
                    c.frobenius(k),
                )
            })
            .collect();
        TPoly { spec: Arc::clone(&self.spec), terms }
    }

    /// p-th root when every exponent is divisible by p.
    pub fn pth_root(&self) -> crate::Result<Self> {
        let p = self.spec.p() as u128;
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            if e % p != 0 {
                return Err(Error::NotAPthPower);
            }
            terms.insert(e / p, c.pth_root()?);
        }
        Ok(TPoly { spec: Arc::clone(&self.spec), terms })
    }
}

impl PartialEq for TPoly {
    fn eq(&self, other: &Self) -> bool {
        self.spec.assert_same(&other.spec);
        self.terms == other.terms
    }
}

impl Eq for TPoly {}

impl PartialOrd for TPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TPoly {
    /// Canonical order: compare term sequences from the highest exponent
    /// down (degree-major, then coefficients).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a: Vec<_> = self.terms.iter().rev().collect();
        let b: Vec<_> = other.terms.iter().rev().collect();
        a.cmp(&b)
    }
}

impl Hash for TPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (e, c) in &self.terms {
            e.hash(state);
            c.hash(state);
        }
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c_str = c.to_string();
            let simple = !c_str.contains(' ');
            match e {
                0 => write!(f, "{c_str}")?,
                _ => {
                    if c.is_one() {
                        // coefficient 1 omitted
                    } else if simple {
                        write!(f, "{c_str}*")?;
                    } else {
                        write!(f, "({c_str})*")?;
                    }
                    if e == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
