//! λ-functions on K = F_{q^m}(t) with p-basis {t}.
//!
//! The host field is imperfect with [K : K^p] = p, and {t} is a p-basis:
//! every x ∈ K is uniquely x = Σ_{i<p} λ_i(x)^p t^i.  The coordinate maps
//! λ_i are additive and semilinear (λ_i(c^p x) = c λ_i(x)); compositions
//! λ_{i_1}∘⋯∘λ_{i_k} are λ-words of level k, and finite K-linear sums of
//! words (each optionally pre-composed with a power of the p-power
//! Frobenius τ₀) are λ-polynomials.
//!
//! The rewrite engine normalizes ψ∘g for Ore g in the prime twist τ₀ by two
//! rules: a constant passing through a letter branches as
//! λ_i∘(c·) = Σ_j λ_i(c t^j)·λ_j, and a Frobenius meeting a letter
//! collapses as λ_i∘τ₀ = δ_{i0}·id.  Every normal-form term is therefore a
//! coefficient times a pure λ-word or a pure Frobenius power — never a
//! mixture — and zero coefficients are pruned.  Soundness is enforced by
//! the evaluation oracle in the tests, which computes both sides as
//! functions on random field elements.
//!
//! Finite hosts are perfect (K = K^p), so every operation here rejects
//! FINITE-mode inputs instead of returning degenerate answers.

use crate::basefield::{FieldElement, FieldSpec, Mode, RatFunc, TPoly};
use crate::error::Error;
use crate::ore::OrePoly;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

fn require_imperfect(spec: &Arc<FieldSpec>) -> crate::Result<()> {
    if spec.mode() == Mode::Finite {
        return Err(Error::PerfectHostField);
    }
    Ok(())
}

/// x^{p^k}.
fn p_power(x: &RatFunc, k: u32) -> RatFunc {
    let p = x.spec().p();
    let mut acc = x.clone();
    for _ in 0..k {
        acc = acc.pow(p);
    }
    acc
}

// ---------------------------------------------------------------------------
// Decomposition and reconstruction
// ---------------------------------------------------------------------------

/// The coordinates (λ_0(x), …, λ_{p−1}(x)) with x = Σ λ_i(x)^p t^i.
///
/// Computed by clearing the denominator: x = num·den^{p−1} / den^p, and
/// den^p ∈ K^p, so grouping the numerator's monomials by exponent class
/// mod p and taking p-th roots (exact in a finite coefficient field) gives
/// λ_i(x) = (class-i part)^{1/p} / den.
pub fn lambda_decompose(x: &RatFunc) -> crate::Result<Vec<RatFunc>> {
    let spec = x.spec();
    require_imperfect(spec)?;
    let p = spec.p();
    let den = x.den().clone();
    let y = x.num().mul(&den.pow(p - 1));
    let mut classes: Vec<TPoly> = vec![TPoly::zero(spec); p as usize];
    for (e, c) in y.terms() {
        let i = (e % p as u128) as usize;
        classes[i] = classes[i].add(&TPoly::monomial(c.clone(), e - i as u128));
    }
    classes
        .into_iter()
        .map(|cl| {
            let root = cl.pth_root()?;
            RatFunc::new(root, den.clone())
        })
        .collect()
}

/// Σ parts_i^p · t^i — the inverse of [`lambda_decompose`].
pub fn lambda_reconstruct(parts: &[RatFunc]) -> crate::Result<RatFunc> {
    let spec = parts
        .first()
        .ok_or_else(|| Error::precondition("lambda_reconstruct needs p parts"))?
        .spec();
    require_imperfect(spec)?;
    let p = spec.p();
    if parts.len() != p as usize {
        return Err(Error::precondition(format!(
            "expected {p} λ-components, got {}",
            parts.len()
        )));
    }
    let mut acc = RatFunc::zero(spec);
    for (i, part) in parts.iter().enumerate() {
        let ti = RatFunc::from_poly(TPoly::monomial(
            crate::basefield::FFElem::one(spec),
            i as u128,
        ));
        acc = acc.add(&part.pow(p).mul(&ti));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Words and λ-polynomials
// ---------------------------------------------------------------------------

/// A λ-word with a trailing Frobenius power: the function
/// x ↦ λ_{i_1,…,i_k}(x^{p^s}).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LambdaWord {
    indices: Vec<u8>,
    frob: u32,
}

impl LambdaWord {
    pub fn new(indices: Vec<u8>, frob: u32) -> Self {
        LambdaWord { indices, frob }
    }

    pub fn identity() -> Self {
        LambdaWord { indices: vec![], frob: 0 }
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn frob(&self) -> u32 {
        self.frob
    }

    /// Level k of the word (number of λ-letters).
    pub fn level(&self) -> usize {
        self.indices.len()
    }

    /// True when the word is a pure Frobenius power (no λ-letters).
    pub fn is_plain(&self) -> bool {
        self.indices.is_empty()
    }
}

impl fmt::Display for LambdaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() && self.frob == 0 {
            return write!(f, "F^0");
        }
        let mut first = true;
        for i in &self.indices {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "L{i}")?;
        }
        match self.frob {
            0 => {}
            1 => {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "F")?;
            }
            s => {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "F^{s}")?;
            }
        }
        Ok(())
    }
}

/// A λ-polynomial: a finite K-linear combination of λ-words, kept in
/// normal form (zero coefficients pruned; see the module docs for the
/// rewrite rules that composition applies).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaPoly {
    spec: Arc<FieldSpec>,
    terms: BTreeMap<LambdaWord, RatFunc>,
}

impl LambdaPoly {
    pub fn zero(spec: &Arc<FieldSpec>) -> crate::Result<Self> {
        require_imperfect(spec)?;
        Ok(LambdaPoly { spec: Arc::clone(spec), terms: BTreeMap::new() })
    }

    pub fn identity(spec: &Arc<FieldSpec>) -> crate::Result<Self> {
        Self::from_word(spec, LambdaWord::identity(), RatFunc::one(spec))
    }

    /// The single letter λ_i.
    pub fn lambda_i(spec: &Arc<FieldSpec>, i: u8) -> crate::Result<Self> {
        Self::from_word(spec, LambdaWord::new(vec![i], 0), RatFunc::one(spec))
    }

    /// c·w for one word.
    pub fn from_word(
        spec: &Arc<FieldSpec>,
        word: LambdaWord,
        coeff: RatFunc,
    ) -> crate::Result<Self> {
        require_imperfect(spec)?;
        let p = spec.p();
        if word.indices.iter().any(|&i| u64::from(i) >= p) {
            return Err(Error::precondition(format!(
                "λ-index out of range: the index set is 0..{p}"
            )));
        }
        let mut out = LambdaPoly { spec: Arc::clone(spec), terms: BTreeMap::new() };
        out.insert_add(word, coeff);
        Ok(out)
    }

    /// View a prime-twist Ore polynomial as the λ-polynomial Σ c_k·τ₀^k.
    pub fn from_tau0(g: &Tau0Poly) -> crate::Result<Self> {
        let mut out = Self::zero(g.spec())?;
        for (k, c) in g.coeffs.iter().enumerate() {
            out.insert_add(LambdaWord::new(vec![], k as u32), c.clone());
        }
        Ok(out)
    }

    /// View a q-twist Ore polynomial as a λ-polynomial via τ = τ₀^e.
    pub fn from_ore(f: &OrePoly<RatFunc>) -> crate::Result<Self> {
        Self::from_tau0(&Tau0Poly::from_q_twist(f)?)
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LambdaWord, &RatFunc)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, word: LambdaWord, coeff: RatFunc) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert_add(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return LambdaPoly { spec: Arc::clone(&self.spec), terms: BTreeMap::new() };
        }
        LambdaPoly {
            spec: Arc::clone(&self.spec),
            terms: self
                .terms
                .iter()
                .map(|(w, d)| (w.clone(), d.mul(c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        LambdaPoly {
            spec: Arc::clone(&self.spec),
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// True when every term is a pure Frobenius power — i.e. the
    /// polynomial lies in K{τ₀}.
    pub fn is_ore(&self) -> bool {
        self.terms.keys().all(|w| w.is_plain())
    }

    /// The K{τ₀} form, when [`is_ore`](Self::is_ore) holds.
    pub fn as_tau0(&self) -> Option<Tau0Poly> {
        if !self.is_ore() {
            return None;
        }
        let deg = self.terms.keys().map(|w| w.frob).max();
        let mut coeffs =
            vec![RatFunc::zero(&self.spec); deg.map_or(0, |d| d as usize + 1)];
        for (w, c) in &self.terms {
            coeffs[w.frob as usize] = c.clone();
        }
        Some(Tau0Poly { spec: Arc::clone(&self.spec), coeffs })
    }

    /// Evaluate the denoted function at x (the testing oracle: direct
    /// λ-chains, no rewriting).
    pub fn eval(&self, x: &RatFunc) -> crate::Result<RatFunc> {
        let mut acc = RatFunc::zero(&self.spec);
        for (w, c) in &self.terms {
            let mut y = p_power(x, w.frob);
            for &i in w.indices.iter().rev() {
                y = lambda_decompose(&y)?[i as usize].clone();
            }
            acc = acc.add(&c.mul(&y));
        }
        Ok(acc)
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c_str = c.to_string();
            if c.is_one() {
                write!(f, "{w}")?;
            } else if c_str.contains(' ') || c_str.contains('/') {
                write!(f, "({c_str}) * {w}")?;
            } else {
                write!(f, "{c_str} * {w}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Prime-twist Ore polynomials
// ---------------------------------------------------------------------------

/// An Ore polynomial in the prime twist: τ₀·c = c^p·τ₀ (p-power Frobenius,
/// not the q-power τ of [`OrePoly`]).  Dense ascending coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tau0Poly {
    spec: Arc<FieldSpec>,
    coeffs: Vec<RatFunc>,
}

impl Tau0Poly {
    pub fn zero(spec: &Arc<FieldSpec>) -> crate::Result<Self> {
        require_imperfect(spec)?;
        Ok(Tau0Poly { spec: Arc::clone(spec), coeffs: vec![] })
    }

    pub fn from_coeffs(spec: &Arc<FieldSpec>, coeffs: Vec<RatFunc>) -> crate::Result<Self> {
        require_imperfect(spec)?;
        let mut out = Tau0Poly { spec: Arc::clone(spec), coeffs };
        out.trim();
        Ok(out)
    }

    /// c·τ₀^k.
    pub fn monomial(spec: &Arc<FieldSpec>, c: RatFunc, k: u32) -> crate::Result<Self> {
        let mut coeffs = vec![RatFunc::zero(spec); k as usize + 1];
        coeffs[k as usize] = c;
        Self::from_coeffs(spec, coeffs)
    }

    /// τ₀^k.
    pub fn tau0_power(spec: &Arc<FieldSpec>, k: u32) -> crate::Result<Self> {
        Self::monomial(spec, RatFunc::one(spec), k)
    }

    /// Convert from the q-twist: τ = τ₀^e, so the τ^i coefficient lands on
    /// τ₀^{e·i}.
    pub fn from_q_twist(f: &OrePoly<RatFunc>) -> crate::Result<Self> {
        let spec = f.spec();
        require_imperfect(spec)?;
        let e = spec.e() as usize;
        let mut coeffs = vec![RatFunc::zero(spec); f.coeffs().len() * e];
        for (i, c) in f.coeffs().iter().enumerate() {
            coeffs[i * e] = c.clone();
        }
        let mut out = Tau0Poly { spec: Arc::clone(spec), coeffs };
        out.trim();
        Ok(out)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(&self.spec))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        let mut out = Tau0Poly { spec: Arc::clone(&self.spec), coeffs };
        out.trim();
        out
    }

    /// Composition product with the prime twist (f·g)_k = Σ f_i·g_j^{p^i}.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Tau0Poly { spec: Arc::clone(&self.spec), coeffs: vec![] };
        }
        let mut coeffs =
            vec![RatFunc::zero(&self.spec); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(&p_power(b, i as u32)));
            }
        }
        let mut out = Tau0Poly { spec: Arc::clone(&self.spec), coeffs };
        out.trim();
        out
    }

    /// Evaluate as the additive map x ↦ Σ c_k x^{p^k}.
    pub fn eval(&self, x: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero(&self.spec);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&p_power(x, k as u32)));
            }
        }
        acc
    }
}

impl fmt::Display for Tau0Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c_str = c.to_string();
            let needs_parens = c_str.contains(' ') || c_str.contains('/');
            let pow = match k {
                0 => "F^0".to_string(),
                1 => "F".to_string(),
                k => format!("F^{k}"),
            };
            if c.is_one() {
                write!(f, "{pow}")?;
            } else if needs_parens {
                write!(f, "({c_str})*{pow}")?;
            } else {
                write!(f, "{c_str}*{pow}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The rewrite engine
// ---------------------------------------------------------------------------

/// Percolate a constant multiplier sitting to the right of the λ-word
/// `letters` out to the left.  Each step rewrites
/// λ_i∘(c·) = Σ_j λ_i(c·t^j)·λ_j, branching over j; letters are consumed
/// right-to-left and the replacement letters accumulate as a new word.
/// Returns (escaped constant, rebuilt word) pairs.
fn percolate_left(
    spec: &Arc<FieldSpec>,
    letters: &[u8],
    constant: &RatFunc,
) -> crate::Result<Vec<(RatFunc, Vec<u8>)>> {
    let p = spec.p();
    let mut states: Vec<(RatFunc, Vec<u8>)> = vec![(constant.clone(), vec![])];
    for &i in letters.iter().rev() {
        let mut next = Vec::new();
        for (c, suffix) in &states {
            // decomposition of c·t^j for each j gives the branch constants
            for j in 0..p {
                let ctj = c.mul(&RatFunc::from_poly(TPoly::monomial(
                    crate::basefield::FFElem::one(spec),
                    u128::from(j),
                )));
                let d = lambda_decompose(&ctj)?[i as usize].clone();
                if d.is_zero() {
                    continue;
                }
                let mut word = Vec::with_capacity(suffix.len() + 1);
                word.push(j as u8);
                word.extend_from_slice(suffix);
                next.push((d, word));
            }
        }
        states = next;
        if states.is_empty() {
            break;
        }
    }
    Ok(states)
}

/// Cancel trailing Frobenius powers against the word's rightmost letters:
/// λ_i∘τ₀ = id when i = 0, and the zero map otherwise.  Returns the reduced
/// word, or None when a nonzero letter met a Frobenius (the term dies).
fn r2_reduce(mut indices: Vec<u8>, mut frob: u32) -> Option<LambdaWord> {
    while frob > 0 {
        match indices.pop() {
            None => return Some(LambdaWord::new(indices, frob)),
            Some(0) => frob -= 1,
            Some(_) => return None,
        }
    }
    Some(LambdaWord::new(indices, frob))
}

/// Normal form of ψ∘g for Ore g in the prime twist.
///
/// Each ψ-term c·λ_I∘τ₀^s composed with each g-term d·τ₀^k first moves d
/// through the Frobenius block (d ↦ d^{p^s}), then percolates it out
/// through the letters of I (rule R1, branching), and finally cancels the
/// combined Frobenius power τ₀^{s+k} against trailing zero letters (rule
/// R2).  The result is again in normal form.
pub fn lp_compose_ore(psi: &LambdaPoly, g: &Tau0Poly) -> crate::Result<LambdaPoly> {
    let spec = psi.spec();
    spec.assert_same(g.spec());
    let mut out = LambdaPoly::zero(spec)?;
    for (w, c) in &psi.terms {
        for (k, d) in g.coeffs.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let pushed = p_power(d, w.frob);
            for (escaped, word) in percolate_left(spec, &w.indices, &pushed)? {
                if let Some(reduced) = r2_reduce(word, w.frob + k as u32) {
                    out.insert_add(reduced, c.mul(&escaped));
                }
            }
        }
    }
    Ok(out)
}

/// Smallest n with 1 ≤ n ≤ n_max such that ψ∘τ₀^n lies in K{τ₀}; None if
/// no such n is found below the bound.  (n starts at 1: the underlying
/// statement quantifies over g ∈ K^{sep}{τ₀}τ₀^n with n ≥ 1, so an
/// already-plain ψ reports 1, not 0.)
pub fn clearance_exponent(psi: &LambdaPoly, n_max: u32) -> crate::Result<Option<u32>> {
    if n_max < 1 {
        return Err(Error::precondition("clearance search needs n_max ≥ 1"));
    }
    for n in 1..=n_max {
        let g = Tau0Poly::tau0_power(psi.spec(), n)?;
        if lp_compose_ore(psi, &g)?.is_ore() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::FFElem;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(p: u64, m: u32) -> Arc<FieldSpec> {
        FieldSpec::new(p, 1, m, Mode::RatFunc).unwrap()
    }

    fn rand_ratfunc(s: &Arc<FieldSpec>, rng: &mut ChaCha8Rng) -> RatFunc {
        let rand_poly = |rng: &mut ChaCha8Rng, allow_zero: bool| loop {
            let mut poly = TPoly::zero(s);
            for _ in 0..rng.gen_range(1..4usize) {
                let c = FFElem::from_int(s, rng.gen_range(0..s.card() as i64));
                let e = rng.gen_range(0..12u128);
                poly = poly.add(&TPoly::monomial(c, e));
            }
            if allow_zero || !poly.is_zero() {
                return poly;
            }
        };
        let num = rand_poly(rng, true);
        let den = rand_poly(rng, false);
        RatFunc::new(num, den).unwrap()
    }

    fn t(s: &Arc<FieldSpec>) -> RatFunc {
        RatFunc::t(s)
    }

    #[test]
    fn decompose_known_values() {
        let s = spec(3, 1);
        let parts = lambda_decompose(&t(&s)).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts[0].is_zero());
        assert!(parts[1].is_one());
        assert!(parts[2].is_zero());
        // t^p picks up the p-th root in class 0
        let t3 = t(&s).pow(3);
        let parts = lambda_decompose(&t3).unwrap();
        assert_eq!(parts[0], t(&s));
        assert!(parts[1].is_zero());
        assert!(parts[2].is_zero());
        // t^5 = (t)^3·t^2
        let t5 = t(&s).pow(5);
        let parts = lambda_decompose(&t5).unwrap();
        assert!(parts[0].is_zero());
        assert!(parts[1].is_zero());
        assert_eq!(parts[2], t(&s));
        // and the reconstruction inverse
        let mut zeros = vec![RatFunc::zero(&s); 3];
        zeros[2] = t(&s);
        assert_eq!(lambda_reconstruct(&zeros).unwrap(), t5);
        assert!(lambda_reconstruct(&vec![RatFunc::zero(&s); 3]).unwrap().is_zero());
    }

    #[test]
    fn round_trip_on_random_functions() {
        for p in [2u64, 3, 5] {
            let s = spec(p, 1);
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + p);
            for _ in 0..50 {
                let x = rand_ratfunc(&s, &mut rng);
                let parts = lambda_decompose(&x).unwrap();
                assert_eq!(parts.len(), p as usize);
                assert_eq!(lambda_reconstruct(&parts).unwrap(), x);
            }
        }
    }

    #[test]
    fn additivity_and_semilinearity() {
        let s = spec(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let x = rand_ratfunc(&s, &mut rng);
            let y = rand_ratfunc(&s, &mut rng);
            let c = rand_ratfunc(&s, &mut rng);
            let dx = lambda_decompose(&x).unwrap();
            let dy = lambda_decompose(&y).unwrap();
            let dsum = lambda_decompose(&x.add(&y)).unwrap();
            let dscaled = lambda_decompose(&c.pow(3).mul(&x)).unwrap();
            for i in 0..3 {
                assert_eq!(dsum[i], dx[i].add(&dy[i]), "additivity at {i}");
                assert_eq!(dscaled[i], c.mul(&dx[i]), "semilinearity at {i}");
            }
        }
    }

    #[test]
    fn finite_mode_rejected() {
        let s = FieldSpec::new(3, 1, 2, Mode::Finite).unwrap();
        let c = RatFunc::constant(FFElem::one(&s));
        assert!(matches!(lambda_decompose(&c), Err(Error::PerfectHostField)));
        assert!(matches!(LambdaPoly::lambda_i(&s, 0), Err(Error::PerfectHostField)));
        assert!(matches!(Tau0Poly::zero(&s), Err(Error::PerfectHostField)));
    }

    #[test]
    fn compose_with_frobenius_uses_r2() {
        let s = spec(3, 1);
        let tau0 = Tau0Poly::tau0_power(&s, 1).unwrap();
        // λ_0∘τ₀ = id
        let l0 = LambdaPoly::lambda_i(&s, 0).unwrap();
        let composed = lp_compose_ore(&l0, &tau0).unwrap();
        assert_eq!(composed, LambdaPoly::identity(&s).unwrap());
        assert_eq!(composed.to_string(), "F^0");
        // λ_i∘τ₀ = 0 for i ≠ 0
        for i in 1..3 {
            let li = LambdaPoly::lambda_i(&s, i).unwrap();
            assert!(lp_compose_ore(&li, &tau0).unwrap().is_zero());
        }
    }

    #[test]
    fn compose_with_constant_uses_r1() {
        let s = spec(3, 1);
        // λ_1∘(t·id) = λ_0: the only class-1 contribution of t·t^j is j = 0
        let g = Tau0Poly::monomial(&s, t(&s), 0).unwrap();
        let l1 = LambdaPoly::lambda_i(&s, 1).unwrap();
        let composed = lp_compose_ore(&l1, &g).unwrap();
        assert_eq!(composed, LambdaPoly::lambda_i(&s, 0).unwrap());
        // oracle agreement on 5 seeded points
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let x = rand_ratfunc(&s, &mut rng);
            let direct = lambda_decompose(&t(&s).mul(&x)).unwrap()[1].clone();
            assert_eq!(composed.eval(&x).unwrap(), direct);
        }
    }

    #[test]
    fn rewrite_soundness_on_random_polynomials() {
        let s = spec(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            // random ψ: up to 3 terms, level ≤ 2, frobs ≤ 2
            let mut psi = LambdaPoly::zero(&s).unwrap();
            for _ in 0..rng.gen_range(1..=3usize) {
                let level = rng.gen_range(0..=2usize);
                let indices = (0..level).map(|_| rng.gen_range(0..3u8)).collect();
                let frob = rng.gen_range(0..=2u32);
                let coeff = rand_ratfunc(&s, &mut rng);
                psi = psi.add(
                    &LambdaPoly::from_word(&s, LambdaWord::new(indices, frob), coeff).unwrap(),
                );
            }
            // random Ore g with ≤ 3 prime-twist terms
            let coeffs = (0..rng.gen_range(1..=3usize))
                .map(|_| rand_ratfunc(&s, &mut rng))
                .collect();
            let g = Tau0Poly::from_coeffs(&s, coeffs).unwrap();
            let composed = lp_compose_ore(&psi, &g).unwrap();
            // the normal form denotes the same function
            for _ in 0..4 {
                let x = rand_ratfunc(&s, &mut rng);
                let gx = g.eval(&x);
                assert_eq!(composed.eval(&x).unwrap(), psi.eval(&gx).unwrap());
            }
        }
    }

    #[test]
    fn rewrite_is_order_independent() {
        // composing with g₁·g₂ in one pass equals composing with g₂ then g₁
        // applied to the partial normal form — the confluence check
        let s = spec(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let level = rng.gen_range(1..=2usize);
            let indices: Vec<u8> = (0..level).map(|_| rng.gen_range(0..3u8)).collect();
            let psi = LambdaPoly::from_word(
                &s,
                LambdaWord::new(indices, rng.gen_range(0..=1u32)),
                rand_ratfunc(&s, &mut rng),
            )
            .unwrap();
            let g1 = Tau0Poly::from_coeffs(
                &s,
                (0..rng.gen_range(1..=2usize))
                    .map(|_| rand_ratfunc(&s, &mut rng))
                    .collect(),
            )
            .unwrap();
            let g2 = Tau0Poly::from_coeffs(
                &s,
                (0..rng.gen_range(1..=2usize))
                    .map(|_| rand_ratfunc(&s, &mut rng))
                    .collect(),
            )
            .unwrap();
            let sequential = lp_compose_ore(&lp_compose_ore(&psi, &g1).unwrap(), &g2).unwrap();
            let combined = lp_compose_ore(&psi, &g1.mul(&g2)).unwrap();
            assert_eq!(sequential, combined);
        }
    }

    #[test]
    fn clearance_examples() {
        let s = spec(3, 1);
        // plain Ore ψ clears at the first admissible n
        let plain = LambdaPoly::from_ore(&OrePoly::from_coeffs(
            &s,
            vec![t(&s), RatFunc::one(&s)],
        ))
        .unwrap();
        assert_eq!(clearance_exponent(&plain, 6).unwrap(), Some(1));
        // λ_0 → 1
        let l0 = LambdaPoly::lambda_i(&s, 0).unwrap();
        assert_eq!(clearance_exponent(&l0, 6).unwrap(), Some(1));
        // λ_1 → 1 (the composition dies, and 0 is plain)
        let l1 = LambdaPoly::lambda_i(&s, 1).unwrap();
        assert_eq!(clearance_exponent(&l1, 6).unwrap(), Some(1));
        // λ_0∘λ_0 → 2
        let l00 = LambdaPoly::from_word(
            &s,
            LambdaWord::new(vec![0, 0], 0),
            RatFunc::one(&s),
        )
        .unwrap();
        assert_eq!(clearance_exponent(&l00, 6).unwrap(), Some(2));
        // and the cleared forms are the identity
        let g2 = Tau0Poly::tau0_power(&s, 2).unwrap();
        assert_eq!(
            lp_compose_ore(&l00, &g2).unwrap(),
            LambdaPoly::identity(&s).unwrap()
        );
    }

    #[test]
    fn tau0_conversion_and_twist() {
        // q = 9 over F_9(t): e = 2, so τ = τ₀² and tτ + τ³ becomes
        // t·τ₀² + τ₀⁶
        let s = FieldSpec::new(3, 2, 1, Mode::RatFunc).unwrap();
        let f = OrePoly::from_coeffs(
            &s,
            vec![RatFunc::zero(&s), t(&s), RatFunc::zero(&s), RatFunc::one(&s)],
        );
        let g = Tau0Poly::from_q_twist(&f).unwrap();
        assert_eq!(g.deg(), Some(6));
        assert_eq!(g.coeff(2), t(&s));
        assert!(g.coeff(1).is_zero());
        // prime twist law: τ₀·t = t^p·τ₀
        let tau0 = Tau0Poly::tau0_power(&s, 1).unwrap();
        let ct = Tau0Poly::monomial(&s, t(&s), 0).unwrap();
        let prod = tau0.mul(&ct);
        assert_eq!(prod.coeff(1), t(&s).pow(3));
        // and evaluation matches the q-twist evaluation
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let x = rand_ratfunc(&s, &mut rng);
            assert_eq!(g.eval(&x), f.eval(&x));
        }
    }

    #[test]
    fn word_display_and_order() {
        let s = spec(3, 1);
        let w = LambdaWord::new(vec![1, 0], 2);
        assert_eq!(w.to_string(), "L1 L0 F^2");
        assert_eq!(LambdaWord::identity().to_string(), "F^0");
        assert_eq!(LambdaWord::new(vec![], 1).to_string(), "F");
        let psi = LambdaPoly::from_word(&s, w, t(&s)).unwrap();
        assert_eq!(psi.to_string(), "t * L1 L0 F^2");
        // identity-coefficients and zero
        assert_eq!(LambdaPoly::zero(&s).unwrap().to_string(), "0");
    }
}
