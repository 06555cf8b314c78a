//! Search fields F_{q^{mN}}, realized as F_{q^m}[w]/(g(w)).
//!
//! Torsion points and sharp groups live in finite extensions of the host's
//! finite part.  Rather than embedding subfields of one huge field, each
//! requested degree N gets its own tower extension, with g the
//! lexicographically smallest monic irreducible of degree N over F_{q^m};
//! this makes every basis choice deterministic and reproducible.
//!
//! Search fields are deduplicated per (finite part, N) in a global cache so
//! repeated kernel computations reuse the same field object.

use crate::basefield::{FFElem, FieldElement, FieldSpec, Mode};
use crate::error::Error;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

// ---------------------------------------------------------------------------
// Dense polynomial helpers over the host finite part (ascending, trimmed).
// ---------------------------------------------------------------------------

fn trim(v: &mut Vec<FFElem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn add(a: &[FFElem], b: &[FFElem], spec: &Arc<FieldSpec>) -> Vec<FFElem> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    for i in 0..a.len().max(b.len()) {
        let zero = FFElem::zero(spec);
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        out.push(x.add(y));
    }
    trim(&mut out);
    out
}

fn sub(a: &[FFElem], b: &[FFElem], spec: &Arc<FieldSpec>) -> Vec<FFElem> {
    let neg: Vec<FFElem> = b.iter().map(|c| c.neg()).collect();
    add(a, &neg, spec)
}

fn mul(a: &[FFElem], b: &[FFElem], spec: &Arc<FieldSpec>) -> Vec<FFElem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![FFElem::zero(spec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(&mut out);
    out
}

fn divrem(a: &[FFElem], b: &[FFElem], spec: &Arc<FieldSpec>) -> (Vec<FFElem>, Vec<FFElem>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = b.last().unwrap().inv().unwrap();
    let mut q = vec![FFElem::zero(spec); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let c = r.last().unwrap().mul(&lead_inv);
        let k = r.len() - b.len();
        q[k] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].sub(&c.mul(bj));
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

fn mulmod(a: &[FFElem], b: &[FFElem], m: &[FFElem], spec: &Arc<FieldSpec>) -> Vec<FFElem> {
    divrem(&mul(a, b, spec), m, spec).1
}

fn powmod(x: &[FFElem], mut n: u64, m: &[FFElem], spec: &Arc<FieldSpec>) -> Vec<FFElem> {
    let mut acc = divrem(&[FFElem::one(spec)], m, spec).1;
    let mut base = divrem(x, m, spec).1;
    while n > 0 {
        if n & 1 == 1 {
            acc = mulmod(&acc, &base, m, spec);
        }
        base = mulmod(&base, &base, m, spec);
        n >>= 1;
    }
    acc
}

fn gcd(a: &[FFElem], b: &[FFElem], spec: &Arc<FieldSpec>) -> Vec<FFElem> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = divrem(&x, &y, spec).1;
        x = y;
        y = r;
    }
    x
}

fn eval_poly(f: &[FFElem], x: &FFElem) -> FFElem {
    let mut acc = FFElem::zero(x.spec());
    for c in f.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

fn derivative(f: &[FFElem], spec: &Arc<FieldSpec>) -> Vec<FFElem> {
    let mut d: Vec<FFElem> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul(&FFElem::from_int(spec, i as i64)))
        .collect();
    trim(&mut d);
    d
}

/// Irreducibility of a monic degree-n polynomial over F_Q (Rabin test with
/// the Q-power Frobenius).
fn is_irreducible(f: &[FFElem], spec: &Arc<FieldSpec>) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let q_card = spec.card();
    let x = vec![FFElem::zero(spec), FFElem::one(spec)];
    // checkpoints: gcd(x^(Q^(n/l)) − x, f) = 1 for each prime l | n, and
    // x^(Q^n) = x; the Frobenius powers are walked incrementally
    let checks: std::collections::BTreeSet<usize> = crate::fp::prime_divisors(n as u64)
        .into_iter()
        .map(|l| n / l as usize)
        .collect();
    let mut h = x.clone();
    for k in 1..=n {
        h = powmod(&h, q_card, f, spec);
        if checks.contains(&k) {
            let hx = sub(&h, &x, spec);
            if gcd(&hx, f, spec).len() != 1 {
                return false;
            }
        }
    }
    sub(&h, &x, spec).is_empty()
}

// ---------------------------------------------------------------------------
// SearchField and TowerElem
// ---------------------------------------------------------------------------

/// The extension F_{q^{mN}} = F_{q^m}[w]/(g(w)).
#[derive(Debug)]
pub struct SearchField {
    /// Finite-mode remodel of the host's finite part.
    base: Arc<FieldSpec>,
    /// Extension degree N over the host.
    n: u32,
    /// Monic irreducible modulus of degree N (ascending coefficients).
    modulus: Vec<FFElem>,
}

impl SearchField {
    /// Fetch (or build and cache) the search field of degree N over the
    /// finite part of `spec`.
    pub fn obtain(spec: &Arc<FieldSpec>, n: u32) -> Arc<SearchField> {
        assert!(n >= 1, "extension degree must be positive");
        type Key = (u64, u32, u32, Vec<u64>, u32);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<SearchField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (spec.p(), spec.e(), spec.m(), spec.modulus().to_vec(), n);
        let mut guard = cache.lock().unwrap();
        if let Some(f) = guard.get(&key) {
            return Arc::clone(f);
        }
        let base = spec.remodel(Mode::Finite);
        let modulus = Self::smallest_irreducible(&base, n);
        let field = Arc::new(SearchField { base, n, modulus });
        guard.insert(key, Arc::clone(&field));
        field
    }

    /// Lexicographically smallest monic irreducible of degree n over the
    /// host, comparing the non-leading coefficient tuple (c_0, ..., c_{n−1})
    /// coordinate by coordinate in the canonical element order.
    fn smallest_irreducible(base: &Arc<FieldSpec>, n: u32) -> Vec<FFElem> {
        let els = base.elements();
        let card = els.len();
        let n = n as usize;
        // index tuple for (c_0, ..., c_{n-1}); last coordinate varies fastest
        let mut idx = vec![0usize; n];
        // Every candidate with zero constant term is divisible by w, so for
        // n ≥ 2 the whole c_0 = 0 prefix of the enumeration (card^(n−1)
        // tuples — astronomical for large n) is reducible; start past it.
        if n >= 2 {
            idx[0] = els
                .iter()
                .position(|a| !a.is_zero())
                .expect("a field has a nonzero element");
        }
        loop {
            let mut f: Vec<FFElem> = idx.iter().map(|&i| els[i].clone()).collect();
            f.push(FFElem::one(base));
            // cheap rejections first: zero constant term (x | f), a root in
            // the base field, or a repeated factor — only survivors see the
            // full Rabin test
            let cheap_ok = n == 1
                || (!f[0].is_zero()
                    && !els.iter().any(|a| eval_poly(&f, a).is_zero())
                    && gcd(&f, &derivative(&f, base), base).len() == 1);
            if cheap_ok && is_irreducible(&f, base) {
                return f;
            }
            let mut i = n;
            loop {
                assert!(i > 0, "no irreducible polynomial of degree {n}");
                i -= 1;
                idx[i] += 1;
                if idx[i] < card {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    /// The finite-mode spec of the base field F_{q^m}.
    pub fn base(&self) -> &Arc<FieldSpec> {
        &self.base
    }

    /// Extension degree N over the host.
    pub fn ext_deg(&self) -> u32 {
        self.n
    }

    /// Dimension over F_p: e·m·N.
    pub fn fp_dim(&self) -> usize {
        self.base.fdeg() * self.n as usize
    }

    /// Cardinality q^{mN} = p^{e·m·N} as u128 (can be large).
    pub fn card(&self) -> u128 {
        (self.base.card() as u128).pow(self.n)
    }

    pub fn modulus(&self) -> &[FFElem] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> TowerElem {
        TowerElem {
            field: Arc::clone(self),
            coeffs: vec![FFElem::zero(&self.base); self.n as usize],
        }
    }

    pub fn one(self: &Arc<Self>) -> TowerElem {
        self.embed_const(&FFElem::one(&self.base))
    }

    /// The class of w (a generator of the extension when N > 1).
    pub fn gen_w(self: &Arc<Self>) -> TowerElem {
        let mut v = vec![FFElem::zero(&self.base); self.n as usize];
        if self.n == 1 {
            // w ≡ −c_0 mod (w + c_0)
            v[0] = self.modulus[0].neg();
        } else {
            v[1] = FFElem::one(&self.base);
        }
        TowerElem { field: Arc::clone(self), coeffs: v }
    }

    /// Embed a host-field constant (re-basing its coordinates onto the
    /// finite-mode spec of this tower).
    pub fn embed_const(self: &Arc<Self>, x: &FFElem) -> TowerElem {
        let mut coeffs = vec![FFElem::zero(&self.base); self.n as usize];
        coeffs[0] = FFElem::from_coords(&self.base, x.coords().to_vec());
        TowerElem { field: Arc::clone(self), coeffs }
    }

    pub fn from_coeffs(self: &Arc<Self>, mut coeffs: Vec<FFElem>) -> TowerElem {
        assert!(coeffs.len() <= self.n as usize);
        coeffs.resize(self.n as usize, FFElem::zero(&self.base));
        TowerElem { field: Arc::clone(self), coeffs }
    }

    /// Element from its F_p coordinate vector (length fp_dim, grouped by
    /// w-power).
    pub fn from_fp_vec(self: &Arc<Self>, v: &[u64]) -> TowerElem {
        assert_eq!(v.len(), self.fp_dim());
        let d = self.base.fdeg();
        let coeffs = v
            .chunks(d)
            .map(|chunk| FFElem::from_coords(&self.base, chunk.to_vec()))
            .collect();
        TowerElem { field: Arc::clone(self), coeffs }
    }

    /// All elements in canonical order; error above the guard.
    pub fn elements(self: &Arc<Self>, guard: u64) -> crate::Result<Vec<TowerElem>> {
        let count = self.card();
        if count > guard as u128 {
            return Err(Error::EnumerationTooLarge(count, guard));
        }
        let els = self.base.elements();
        let n = self.n as usize;
        let mut idx = vec![0usize; n];
        let mut out = Vec::with_capacity(count as usize);
        loop {
            let coeffs: Vec<FFElem> = idx.iter().map(|&i| els[i].clone()).collect();
            out.push(TowerElem { field: Arc::clone(self), coeffs });
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(out);
                }
                idx[i] += 1;
                if idx[i] < els.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
}

/// An element of a search field.
#[derive(Clone)]
pub struct TowerElem {
    field: Arc<SearchField>,
    /// Length N, ascending powers of w.
    coeffs: Vec<FFElem>,
}

impl TowerElem {
    pub fn field(&self) -> &Arc<SearchField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    /// Flatten to F_p coordinates (length fp_dim).
    pub fn to_fp_vec(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.field.fp_dim());
        for c in &self.coeffs {
            out.extend_from_slice(c.coords());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn poly(&self) -> Vec<FFElem> {
        let mut v = self.coeffs.clone();
        trim(&mut v);
        v
    }

    fn from_poly(field: &Arc<SearchField>, poly: Vec<FFElem>) -> Self {
        let mut coeffs = poly;
        coeffs.resize(field.n as usize, FFElem::zero(&field.base));
        TowerElem { field: Arc::clone(field), coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        TowerElem { field: Arc::clone(&self.field), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        TowerElem { field: Arc::clone(&self.field), coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.neg()).collect();
        TowerElem { field: Arc::clone(&self.field), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let spec = &self.field.base;
        let prod = mul(&self.poly(), &other.poly(), spec);
        let red = divrem(&prod, &self.field.modulus, spec).1;
        Self::from_poly(&self.field, red)
    }

    pub fn scale(&self, c: &FFElem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        TowerElem { field: Arc::clone(&self.field), coeffs }
    }

    pub fn inv(&self) -> crate::Result<Self> {
        if self.is_zero() {
            return Err(Error::precondition("inverse of zero"));
        }
        let spec = &self.field.base;
        let mut r0 = self.field.modulus.clone();
        let mut r1 = self.poly();
        let mut s0: Vec<FFElem> = vec![];
        let mut s1: Vec<FFElem> = vec![FFElem::one(spec)];
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, spec);
            let s = sub(&s0, &mul(&q, &s1, spec), spec);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].inv()?;
        let out: Vec<FFElem> = s0.iter().map(|x| x.mul(&c)).collect();
        let red = divrem(&out, &self.field.modulus, spec).1;
        Ok(Self::from_poly(&self.field, red))
    }

    pub fn pow_u64(&self, mut n: u64) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// x ↦ x^(q^k), the q-power Frobenius iterated.
    pub fn frobenius_q(&self, k: usize) -> Self {
        // x^(p^(e·m·N)) = x, so reduce e·k mod e·m·N p-power steps
        let total = self.field.fp_dim();
        let steps = (k * self.field.base.e() as usize) % total;
        let p = self.field.base.p();
        let mut acc = self.clone();
        for _ in 0..steps {
            acc = acc.pow_u64(p);
        }
        acc
    }

    /// x^n with a wide exponent, reduced mod (card − 1) for x ≠ 0.
    pub fn pow_wide(&self, n: u128) -> Self {
        if self.is_zero() {
            return if n == 0 { self.field.one() } else { self.clone() };
        }
        let order = self.field.card() - 1;
        self.pow_u64((n % order) as u64)
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(Arc::ptr_eq(&self.field, &other.field) || {
            self.field.base == other.field.base && self.field.n == other.field.n
        });
        self.coeffs == other.coeffs
    }
}

impl Eq for TowerElem {}

impl PartialOrd for TowerElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl std::hash::Hash for TowerElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElem({self})")
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
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
            let simple = !c_str.contains(' ');
            match i {
                0 => write!(f, "{c_str}")?,
                _ => {
                    if c.is_one() {
                    } else if simple {
                        write!(f, "{c_str}*")?;
                    } else {
                        write!(f, "({c_str})*")?;
                    }
                    if i == 1 {
                        write!(f, "w")?;
                    } else {
                        write!(f, "w^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
