//! The twisted polynomial ring K{τ} with τ·c = c^q·τ.
//!
//! Coefficients are host-field elements (generic over [`FieldElement`]), the
//! multiplication law is (f·g)_k = Σ_{i+j=k} f_i·(g_j)^(q^i), and τ^0 is the
//! identity map, so Ore polynomials act on any K-algebra with a q-power
//! Frobenius — in particular on K itself and on the finite search fields.
//!
//! Degrees in τ stay modest (≤ a few dozen) but the coefficient t-degrees
//! explode under twisting; see `basefield::tpoly` for why coefficients are
//! sparse.

use crate::basefield::{FFElem, FieldElement, FieldSpec};
use crate::error::Error;
use crate::linalg::GfpMat;
use crate::tower::{SearchField, TowerElem};
use std::fmt;
use std::sync::Arc;

/// Dense vector of coefficients, ascending powers of τ, trailing zeros
/// trimmed (zero polynomial = empty vector).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrePoly<C: FieldElement> {
    spec: Arc<FieldSpec>,
    coeffs: Vec<C>,
}

impl<C: FieldElement> OrePoly<C> {
    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        OrePoly { spec: Arc::clone(spec), coeffs: vec![] }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::constant(C::one(spec))
    }

    /// The twist generator τ.
    pub fn tau(spec: &Arc<FieldSpec>) -> Self {
        Self::monomial(C::one(spec), 1)
    }

    /// Degree-0 Ore polynomial (the multiplication-by-c map).
    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, k: usize) -> Self {
        let spec = Arc::clone(c.spec());
        if c.is_zero() {
            return Self::zero(&spec);
        }
        let mut coeffs = vec![C::zero(&spec); k + 1];
        coeffs[k] = c;
        OrePoly { spec, coeffs }
    }

    pub fn from_coeffs(spec: &Arc<FieldSpec>, coeffs: Vec<C>) -> Self {
        let mut out = OrePoly { spec: Arc::clone(spec), coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of τ^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| C::zero(&self.spec))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in τ; None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Index of the lowest nonzero coefficient.
    pub fn ord_tau(&self) -> crate::Result<usize> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroPolynomial("τ-order"))
    }

    /// Separability = the τ^0 coefficient is nonzero.
    pub fn is_separable(&self) -> crate::Result<bool> {
        Ok(self.ord_tau()? == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.spec.assert_same(&other.spec);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        Self::from_coeffs(&self.spec, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.neg()).collect();
        OrePoly { spec: Arc::clone(&self.spec), coeffs }
    }

    /// Twisted product: (f·g)_k = Σ_{i+j=k} f_i·(g_j)^(q^i).
    pub fn mul(&self, other: &Self) -> Self {
        self.spec.assert_same(&other.spec);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.spec);
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![C::zero(&self.spec); n];
        for (i, fi) in self.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in other.coeffs.iter().enumerate() {
                if gj.is_zero() {
                    continue;
                }
                let term = fi.mul(&gj.frobenius(i));
                coeffs[i + j] = coeffs[i + j].add(&term);
            }
        }
        Self::from_coeffs(&self.spec, coeffs)
    }

    /// Left scalar multiple c·f.
    pub fn scale(&self, c: &C) -> Self {
        Self::constant(c.clone()).mul(self)
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

    /// Right division: returns (Q, R) with self = Q·g + R and
    /// deg R < deg g.  Always possible: the leading-coefficient solve is
    /// c = f_top / (g_top)^(q^(deg f − deg g)), a plain field division.
    pub fn rdiv(&self, g: &Self) -> crate::Result<(Self, Self)> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial("divisor"));
        }
        let dg = g.deg().unwrap();
        let g_top = g.coeffs.last().unwrap();
        let mut r = self.clone();
        let mut q = Self::zero(&self.spec);
        while let Some(dr) = r.deg() {
            if dr < dg {
                break;
            }
            let k = dr - dg;
            let c = r.coeffs.last().unwrap().mul(&g_top.frobenius(k).inv()?);
            let mono = Self::monomial(c, k);
            q = q.add(&mono);
            r = r.sub(&mono.mul(g));
        }
        Ok((q, r))
    }

    /// Conjugation f ↦ γ^(−1)·f·γ coefficient-wise:
    /// c_i ↦ γ^(−1)·c_i·γ^(q^i).
    pub fn conjugate(&self, gamma: &C) -> crate::Result<Self> {
        if gamma.is_zero() {
            return Err(Error::ZeroConjugator);
        }
        let gamma_inv = gamma.inv()?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| gamma_inv.mul(c).mul(&gamma.frobenius(i)))
            .collect();
        Ok(OrePoly { spec: Arc::clone(&self.spec), coeffs })
    }

    /// Evaluate as an additive map on the host field: Σ c_i·x^(q^i).
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero(&self.spec);
        let mut xq = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xq = xq.frobenius(1);
            }
            if !c.is_zero() {
                acc = acc.add(&c.mul(&xq));
            }
        }
        acc
    }
}

impl OrePoly<FFElem> {
    /// Evaluate on a search-field element (coefficients embed as
    /// constants).
    pub fn eval_tower(&self, x: &TowerElem) -> TowerElem {
        let field = x.field();
        let mut acc = field.zero();
        let mut xq = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xq = xq.frobenius_q(1);
            }
            if !c.is_zero() {
                acc = acc.add(&xq.mul(&field.embed_const(c)));
            }
        }
        acc
    }

    /// Matrix of the additive map on F_{q^{mN}} in the fixed F_p basis
    /// (w-power major, g-power minor).  Column j is the image of the j-th
    /// basis vector.
    pub fn as_linear_map(&self, field: &Arc<SearchField>) -> GfpMat {
        let d = field.fp_dim();
        let p = field.base().p();
        let mut m = GfpMat::zero(p, d, d);
        for j in 0..d {
            let mut v = vec![0u64; d];
            v[j] = 1;
            let x = field.from_fp_vec(&v);
            let y = self.eval_tower(&x);
            for (i, &val) in y.to_fp_vec().iter().enumerate() {
                m[(i, j)] = val;
            }
        }
        m
    }
}

impl<C: FieldElement> fmt::Debug for OrePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrePoly({self})")
    }
}

impl<C: FieldElement> fmt::Display for OrePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c_str = c.to_string();
            let needs_parens = c_str.contains(' ') || c_str.contains('/');
            let write_coeff = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
                if needs_parens {
                    write!(f, "({c_str})*")
                } else {
                    write!(f, "{c_str}*")
                }
            };
            match i {
                0 => {
                    if c.is_one() {
                        write!(f, "T^0")?;
                    } else {
                        write_coeff(f)?;
                        write!(f, "T^0")?;
                    }
                }
                1 => {
                    if !c.is_one() {
                        write_coeff(f)?;
                    }
                    write!(f, "T")?;
                }
                _ => {
                    if !c.is_one() {
                        write_coeff(f)?;
                    }
                    write!(f, "T^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// τ^k − 1 as an Ore polynomial; its kernel on any extension is the
/// subfield F_{q^k} (intersected with that extension).
pub fn tau_power_minus_one<C: FieldElement>(spec: &Arc<FieldSpec>, k: usize) -> OrePoly<C> {
    OrePoly::monomial(C::one(spec), k).sub(&OrePoly::one(spec))
}
