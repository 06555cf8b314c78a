//! Drinfeld modules φ: F_q[t] → K{τ} and their torsion.
//!
//! A module is determined by φ_t; the image of a general a ∈ F_q[t] follows
//! by Horner, since a ↦ φ_a is a ring homomorphism that is F_q-linear in the
//! coefficients.  The characteristic is the kernel of a ↦ a(i_t) where i_t
//! is the τ^0-coefficient of φ_t: trivial when i_t is transcendental
//! (generic characteristic), generated by the minimal polynomial of i_t
//! over F_q when i_t is a constant (finite characteristic).
//!
//! Torsion kernels φ[a] are computed inside explicit search fields
//! F_{q^{mN}} by linear algebra over F_p.  Whether a kernel has fully split
//! is certified exactly: the kernel of the separable part g of φ_a lies in
//! F_{q^{mD}} iff τ^{mD} − 1 is a left multiple of g, a right-division
//! check (a nonzero remainder of τ-degree < deg g cannot vanish on all
//! q^{deg g} kernel points).  The least such D — the order of Frobenius on
//! the kernel — is searched up to the cap N_max = 12; beyond the cap the
//! result is flagged uncertified rather than silently trusted.

use crate::basefield::{FFElem, FieldElement, FieldSpec, Mode, Place};
use crate::error::Error;
use crate::linalg::Subspace;
use crate::ore::{tau_power_minus_one, OrePoly};
use crate::tower::{SearchField, TowerElem};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

/// Cap for the splitting-degree search and the torsion doubling loop.
pub const N_MAX: u32 = 12;

/// Guard for point enumerations.
pub const ENUM_GUARD: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// FqPoly: dense polynomials in F_q[t]
// ---------------------------------------------------------------------------

/// An element of F_q[t]: dense ascending coefficients, each lying in the
/// F_q-subfield of the host's finite part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    spec: Arc<FieldSpec>,
    coeffs: Vec<FFElem>,
}

impl FqPoly {
    pub fn new(spec: &Arc<FieldSpec>, coeffs: Vec<FFElem>) -> crate::Result<Self> {
        for c in &coeffs {
            if c.frobenius(1) != *c {
                return Err(Error::precondition(format!(
                    "coefficient {c} of an F_q[t] polynomial is not in F_q"
                )));
            }
        }
        let mut out = FqPoly { spec: Arc::clone(spec), coeffs };
        out.trim();
        Ok(out)
    }

    pub fn from_ints(spec: &Arc<FieldSpec>, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| FFElem::from_int(spec, c)).collect();
        let mut out = FqPoly { spec: Arc::clone(spec), coeffs };
        out.trim();
        out
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        FqPoly { spec: Arc::clone(spec), coeffs: vec![] }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::from_ints(spec, &[1])
    }

    pub fn t(spec: &Arc<FieldSpec>) -> Self {
        Self::from_ints(spec, &[0, 1])
    }

    /// t^n.
    pub fn t_power(spec: &Arc<FieldSpec>, n: usize) -> Self {
        let mut coeffs = vec![FFElem::zero(spec); n + 1];
        coeffs[n] = FFElem::one(spec);
        FqPoly { spec: Arc::clone(spec), coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[FFElem] {
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

    fn coeff(&self, k: usize) -> FFElem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| FFElem::zero(&self.spec))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        let mut out = FqPoly { spec: Arc::clone(&self.spec), coeffs };
        out.trim();
        out
    }

    pub fn neg(&self) -> Self {
        FqPoly {
            spec: Arc::clone(&self.spec),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.spec);
        }
        let mut coeffs = vec![FFElem::zero(&self.spec); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        let mut out = FqPoly { spec: Arc::clone(&self.spec), coeffs };
        out.trim();
        out
    }

    pub fn divrem(&self, other: &Self) -> (Self, Self) {
        assert!(!other.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let mut q = Self::zero(&self.spec);
        let d = other.deg().unwrap();
        let lead_inv = other.coeffs.last().unwrap().inv().unwrap();
        while let Some(dr) = r.deg() {
            if dr < d {
                break;
            }
            let c = r.coeffs.last().unwrap().mul(&lead_inv);
            let k = dr - d;
            let mut mono = vec![FFElem::zero(&self.spec); k + 1];
            mono[k] = c;
            let mono = FqPoly { spec: Arc::clone(&self.spec), coeffs: mono };
            r = r.sub(&mono.mul(other));
            q = q.add(&mono);
        }
        (q, r)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = l.inv().unwrap();
                FqPoly {
                    spec: Arc::clone(&self.spec),
                    coeffs: self.coeffs.iter().map(|c| c.mul(&inv)).collect(),
                }
            }
        }
    }

    pub fn is_coprime_to(&self, other: &Self) -> bool {
        self.gcd(other).deg() == Some(0)
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

    /// Evaluate a(x) in any host-field element (used for a(i_t)).
    pub fn eval_in<C: FieldElement>(&self, x: &C) -> C {
        let spec = x.spec();
        let mut acc = C::zero(spec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&C::embed(FFElem::from_coords(
                spec,
                c.coords().to_vec(),
            )));
        }
        acc
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqPoly({self})")
    }
}

impl fmt::Display for FqPoly {
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
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Minimal polynomial of a finite-part element over F_q: the product of
/// (X − c^(q^k)) over the Frobenius orbit.
pub fn min_poly_over_fq(c: &FFElem) -> FqPoly {
    let spec = c.spec();
    // collect the orbit
    let mut orbit = vec![c.clone()];
    loop {
        let next = orbit.last().unwrap().frobenius(1);
        if next == *c {
            break;
        }
        orbit.push(next);
    }
    // multiply out Π (X − root), dense over the host
    let mut poly = vec![FFElem::one(spec)];
    for root in &orbit {
        let mut next = vec![FFElem::zero(spec); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a);
            next[i] = next[i].sub(&a.mul(root));
        }
        poly = next;
    }
    FqPoly::new(spec, poly).expect("orbit product has F_q coefficients")
}

// ---------------------------------------------------------------------------
// DrinfeldModule
// ---------------------------------------------------------------------------

/// Classification of the characteristic ker(a ↦ a(i_t)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharClass {
    /// i_t transcendental over F_q (only possible in RATFUNC mode).
    Generic,
    /// i_t algebraic: the characteristic is the prime ideal (π).
    Finite { pi: FqPoly },
}

/// A Drinfeld module over the host field, pinned down by φ_t.
#[derive(Debug)]
pub struct DrinfeldModule<C: FieldElement> {
    spec: Arc<FieldSpec>,
    phi_t: OrePoly<C>,
    i_t: C,
    char_class: CharClass,
    /// φ_a cache, keyed by the canonical display of a.  Append-only.
    cache: Mutex<HashMap<String, OrePoly<C>>>,
}

impl<C: FieldElement> DrinfeldModule<C> {
    pub fn new(phi_t: OrePoly<C>) -> crate::Result<Self> {
        if phi_t.deg().unwrap_or(0) < 1 {
            return Err(Error::precondition(
                "φ_t must have τ-degree ≥ 1 (the trivial action is not a Drinfeld module)",
            ));
        }
        let spec = Arc::clone(phi_t.spec());
        let i_t = phi_t.coeff(0);
        let char_class = match i_t.as_const() {
            Some(c) => CharClass::Finite { pi: min_poly_over_fq(&c) },
            None => CharClass::Generic,
        };
        Ok(DrinfeldModule {
            spec,
            phi_t,
            i_t,
            char_class,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn phi_t(&self) -> &OrePoly<C> {
        &self.phi_t
    }

    /// i_t = the τ^0-coefficient of φ_t.
    pub fn i_t(&self) -> &C {
        &self.i_t
    }

    pub fn char_class(&self) -> &CharClass {
        &self.char_class
    }

    /// The monic generator of the characteristic, when finite.
    pub fn char_generator(&self) -> Option<&FqPoly> {
        match &self.char_class {
            CharClass::Finite { pi } => Some(pi),
            CharClass::Generic => None,
        }
    }

    /// Rank r = deg_τ φ_t.
    pub fn rank(&self) -> usize {
        self.phi_t.deg().unwrap()
    }

    /// φ_a by Horner in φ_t; results are cached by a.
    pub fn phi_action(&self, a: &FqPoly) -> OrePoly<C> {
        let key = a.to_string();
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let mut acc = OrePoly::zero(&self.spec);
        for c in a.coeffs().iter().rev() {
            let embedded = C::embed(FFElem::from_coords(&self.spec, c.coords().to_vec()));
            acc = acc.mul(&self.phi_t).add(&OrePoly::constant(embedded));
        }
        self.cache.lock().unwrap().insert(key, acc.clone());
        acc
    }

    /// φ_{t^n}.
    pub fn phi_t_power(&self, n: usize) -> OrePoly<C> {
        self.phi_action(&FqPoly::t_power(&self.spec, n))
    }

    /// Apply φ_a to a host element.
    pub fn act(&self, a: &FqPoly, x: &C) -> C {
        self.phi_action(a).eval(x)
    }
}

impl DrinfeldModule<RatFuncAlias> {
    /// Good reduction at a finite place: every coefficient of φ_t is
    /// integral at the place (no pole) and the leading coefficient
    /// specializes to a unit.
    pub fn good_reduction_at(&self, place: &Place) -> bool {
        let coeffs = self.phi_t.coeffs();
        for c in coeffs {
            if c.den().eval(&place.center).is_zero() {
                return false;
            }
        }
        let lead = coeffs.last().unwrap();
        match lead.specialize(place) {
            Ok(v) => !v.is_zero(),
            Err(_) => false,
        }
    }

    /// Reduce the module at a place of good reduction: coefficients
    /// specialize, the host becomes the finite part in FINITE mode.
    pub fn reduce_at(&self, place: &Place) -> crate::Result<DrinfeldModule<FFElem>> {
        if !self.good_reduction_at(place) {
            return Err(Error::BadReduction(
                place.center.to_string(),
                "a coefficient has a pole or the leading coefficient vanishes".into(),
            ));
        }
        let fin = self.spec.remodel(Mode::Finite);
        let coeffs = self
            .phi_t
            .coeffs()
            .iter()
            .map(|c| {
                let v = c.specialize(place)?;
                Ok(FFElem::from_coords(&fin, v.coords().to_vec()))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        DrinfeldModule::new(OrePoly::from_coeffs(&fin, coeffs))
    }
}

/// Private alias so the impl block above reads cleanly.
type RatFuncAlias = crate::basefield::RatFunc;

// ---------------------------------------------------------------------------
// Torsion (finite mode)
// ---------------------------------------------------------------------------

/// A torsion kernel φ[a] ∩ F_{q^{mN}}, with both its linear-algebra shape
/// and the explicit sorted point list.
#[derive(Debug, Clone)]
pub struct TorsionSet {
    field: Arc<SearchField>,
    annihilator: FqPoly,
    subspace: Subspace,
    points: Vec<TowerElem>,
}

impl TorsionSet {
    pub fn field(&self) -> &Arc<SearchField> {
        &self.field
    }

    /// The a ∈ F_q[t] whose kernel this is.
    pub fn annihilator(&self) -> &FqPoly {
        &self.annihilator
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    /// Sorted, deduplicated points.
    pub fn points(&self) -> &[TowerElem] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Dimension over F_q (the kernel of an F_q-linear additive polynomial
    /// is an F_q-subspace, so the F_p-nullity is divisible by e).
    pub fn q_dim(&self, spec: &FieldSpec) -> usize {
        debug_assert_eq!(self.subspace.dim() % spec.e() as usize, 0);
        self.subspace.dim() / spec.e() as usize
    }
}

impl DrinfeldModule<FFElem> {
    /// φ[a] inside the search field of degree N over the host.
    pub fn torsion(&self, a: &FqPoly, n: u32) -> crate::Result<TorsionSet> {
        if a.is_zero() {
            return Err(Error::ZeroAnnihilator);
        }
        let field = SearchField::obtain(&self.spec, n);
        let phi_a = self.phi_action(a);
        let subspace = if phi_a.is_zero() {
            // φ_a = 0 cannot happen for a ≠ 0 (a ↦ φ_a is injective), but
            // keep the kernel total on principle
            Subspace::full(self.spec.p(), field.fp_dim())
        } else {
            phi_a.as_linear_map(&field).kernel()
        };
        let points = subspace
            .points(ENUM_GUARD)?
            .into_iter()
            .map(|v| field.from_fp_vec(&v))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(TorsionSet { field, annihilator: a.clone(), subspace, points })
    }

    /// The separable part g of φ_a (φ_a = g·τ^ord coefficient-shift).
    fn separable_part(&self, a: &FqPoly) -> crate::Result<OrePoly<FFElem>> {
        let phi_a = self.phi_action(a);
        let ord = phi_a.ord_tau().map_err(|_| Error::ZeroAnnihilator)?;
        Ok(OrePoly::from_coeffs(
            &self.spec,
            phi_a.coeffs()[ord..].to_vec(),
        ))
    }

    /// Exact splitting degree of φ[a]: the least D with
    /// ker(g) ⊆ F_{q^{mD}}, i.e. with τ^{mD} − 1 ∈ K{τ}·g.  None if it
    /// exceeds the cap.
    ///
    /// Soundness of the division test: if τ^{mD} − 1 = u·g + r with
    /// deg_τ r < deg_τ g, every kernel point of g that lies in F_{q^{mD}}
    /// kills both the left side and u·g, hence r.  When ker(g) ⊆ F_{q^{mD}}
    /// the remainder r vanishes on all q^{deg g} kernel points of the
    /// separable g, but a nonzero additive polynomial of τ-degree d has at
    /// most q^d < q^{deg g} roots — so r = 0.  Conversely r = 0 forces
    /// every kernel point into ker(τ^{mD} − 1) = F_{q^{mD}}.
    pub fn split_degree(&self, a: &FqPoly, cap: u32) -> crate::Result<Option<u32>> {
        let g = self.separable_part(a)?;
        if g.deg() == Some(0) {
            // purely inseparable: kernel is {0}, split everywhere
            return Ok(Some(1));
        }
        let m = self.spec.m() as usize;
        for d in 1..=cap {
            let probe = tau_power_minus_one::<FFElem>(&self.spec, m * d as usize);
            let (_, r) = probe.rdiv(&g)?;
            if r.is_zero() {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// Torsion with a certified-complete flag: the kernel is computed in
    /// the search field of its exact splitting degree when that degree is
    /// ≤ N_MAX, otherwise at the cap with `certified = false`.
    pub fn torsion_split(&self, a: &FqPoly) -> crate::Result<(TorsionSet, bool)> {
        match self.split_degree(a, N_MAX)? {
            Some(d) => Ok((self.torsion(a, d)?, true)),
            None => Ok((self.torsion(a, N_MAX)?, false)),
        }
    }

    /// Points of F_{q^{mN}} annihilated by some a coprime to the
    /// characteristic, computed as the union of kernels over monic a with
    /// 1 ≤ deg a ≤ deg_bound.
    pub fn prime_to_char_torsion(
        &self,
        n: u32,
        deg_bound: u32,
    ) -> crate::Result<Vec<TowerElem>> {
        let pi = match &self.char_class {
            CharClass::Finite { pi } => pi.clone(),
            CharClass::Generic => {
                return Err(Error::precondition(
                    "prime-to-characteristic torsion needs finite characteristic",
                ))
            }
        };
        let field = SearchField::obtain(&self.spec, n);
        let mut points: BTreeSet<TowerElem> = BTreeSet::new();
        points.insert(field.zero());
        let fq = self.spec.fq_elements();
        // monic a of degree d: all coefficient tuples below the lead
        for d in 1..=deg_bound as usize {
            let total = (fq.len() as u128).pow(d as u32);
            if total > ENUM_GUARD as u128 {
                return Err(Error::EnumerationTooLarge(total, ENUM_GUARD));
            }
            let mut idx = vec![0usize; d];
            loop {
                let mut coeffs: Vec<FFElem> = idx.iter().map(|&i| fq[i].clone()).collect();
                coeffs.push(FFElem::one(&self.spec));
                let a = FqPoly::new(&self.spec, coeffs)?;
                if a.is_coprime_to(&pi) {
                    let tors = self.torsion(&a, n)?;
                    points.extend(tors.points.iter().cloned());
                }
                let mut i = 0;
                loop {
                    if i == d {
                        break;
                    }
                    idx[i] += 1;
                    if idx[i] < fq.len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        Ok(points.into_iter().collect())
    }

    /// Kernel dimensions of φ[t^n] for n = 1..=n_max, plus the first index
    /// where the dimension stops growing (a heuristic stabilization probe
    /// for the finite-t-torsion hypothesis; labeled HEURISTIC by the CLI).
    pub fn t_torsion_profile(&self, n: u32, n_max: usize) -> (Vec<usize>, Option<usize>) {
        let field = SearchField::obtain(&self.spec, n);
        let mut dims = Vec::with_capacity(n_max);
        for k in 1..=n_max {
            let phi = self.phi_t_power(k);
            dims.push(phi.as_linear_map(&field).kernel().dim() / self.spec.e() as usize);
        }
        let stabilized = dims.windows(2).position(|w| w[0] == w[1]).map(|i| i + 1);
        (dims, stabilized)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::RatFunc;
    use rand::{Rng, SeedableRng};

    fn fin_spec(p: u64, m: u32) -> Arc<FieldSpec> {
        FieldSpec::new(p, 1, m, Mode::Finite).unwrap()
    }

    fn rat_spec(p: u64, m: u32) -> Arc<FieldSpec> {
        FieldSpec::new(p, 1, m, Mode::RatFunc).unwrap()
    }

    /// Carlitz-style module: φ_t = τ (coefficients [0, 1]) over F_q.
    fn tau_module(spec: &Arc<FieldSpec>) -> DrinfeldModule<FFElem> {
        DrinfeldModule::new(OrePoly::from_coeffs(
            spec,
            vec![FFElem::zero(spec), FFElem::one(spec)],
        ))
        .unwrap()
    }

    #[test]
    fn characteristic_classification() {
        // i_t = 0 → characteristic (t)
        let s = fin_spec(3, 1);
        let m = tau_module(&s);
        assert_eq!(m.char_generator().unwrap(), &FqPoly::t(&s));
        // i_t = 1 → characteristic (t − 1)
        let m2 = DrinfeldModule::new(OrePoly::from_coeffs(
            &s,
            vec![FFElem::one(&s), FFElem::one(&s)],
        ))
        .unwrap();
        assert_eq!(m2.char_generator().unwrap(), &FqPoly::from_ints(&s, &[-1, 1]));
        // generic: i_t = t over F_3(t)
        let rs = rat_spec(3, 1);
        let phi = OrePoly::from_coeffs(&rs, vec![RatFunc::t(&rs), RatFunc::one(&rs)]);
        let mg = DrinfeldModule::new(phi).unwrap();
        assert_eq!(mg.char_class(), &CharClass::Generic);
        // i_t in F_9 \ F_3 has a degree-2 minimal polynomial
        let s9 = fin_spec(3, 2);
        let g = FFElem::generator(&s9);
        let m3 = DrinfeldModule::new(OrePoly::from_coeffs(
            &s9,
            vec![g.clone(), FFElem::one(&s9)],
        ))
        .unwrap();
        let pi = m3.char_generator().unwrap();
        assert_eq!(pi.deg(), Some(2));
        assert!(pi.eval_in(&g).is_zero());
    }

    #[test]
    fn degree_zero_phi_t_rejected() {
        let s = fin_spec(3, 1);
        assert!(DrinfeldModule::new(OrePoly::constant(FFElem::one(&s))).is_err());
        assert!(DrinfeldModule::new(OrePoly::<FFElem>::zero(&s)).is_err());
    }

    #[test]
    fn phi_action_is_a_ring_homomorphism() {
        let s = fin_spec(3, 1);
        let m = tau_module(&s);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
            let d = rng.gen_range(0..4usize);
            FqPoly::from_ints(&s, &(0..=d).map(|_| rng.gen_range(0..3i64)).collect::<Vec<_>>())
        };
        for _ in 0..40 {
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            assert_eq!(m.phi_action(&a.add(&b)), m.phi_action(&a).add(&m.phi_action(&b)));
            assert_eq!(m.phi_action(&a.mul(&b)), m.phi_action(&a).mul(&m.phi_action(&b)));
        }
        // φ_1 = 1, φ_t = the defining polynomial
        assert_eq!(m.phi_action(&FqPoly::one(&s)), OrePoly::one(&s));
        assert_eq!(m.phi_action(&FqPoly::t(&s)), *m.phi_t());
    }

    #[test]
    fn constant_term_is_a_of_i_t() {
        // the τ^0-coefficient of φ_a is a(i_t)
        let s = fin_spec(3, 2);
        let g = FFElem::generator(&s);
        let phi_t = OrePoly::from_coeffs(&s, vec![g.clone(), FFElem::one(&s), g.clone()]);
        let m = DrinfeldModule::new(phi_t).unwrap();
        let a = FqPoly::from_ints(&s, &[2, 1, 1]);
        assert_eq!(m.phi_action(&a).coeff(0), a.eval_in(&g));
    }

    #[test]
    fn torsion_of_tau_module() {
        // φ_t = τ: φ[t] = ker(x ↦ x^q) = {0}
        let s = fin_spec(3, 1);
        let m = tau_module(&s);
        let tors = m.torsion(&FqPoly::t(&s), 2).unwrap();
        assert_eq!(tors.size(), 1);
        // φ[t − 1] = ker(x^q − x) = F_q
        let a = FqPoly::from_ints(&s, &[-1, 1]);
        let tors = m.torsion(&a, 1).unwrap();
        assert_eq!(tors.size(), 3);
        // the same kernel is still F_q inside a bigger search field
        let tors4 = m.torsion(&a, 4).unwrap();
        assert_eq!(tors4.size(), 3);
        // unit a has trivial kernel; zero a is an error
        assert_eq!(m.torsion(&FqPoly::one(&s), 2).unwrap().size(), 1);
        assert!(matches!(
            m.torsion(&FqPoly::zero(&s), 2),
            Err(Error::ZeroAnnihilator)
        ));
    }

    #[test]
    fn torsion_is_a_module_over_fqt() {
        // φ[a] is closed under addition and under φ_b for every b
        let s = fin_spec(2, 1);
        let phi_t = OrePoly::from_coeffs(
            &s,
            vec![FFElem::zero(&s), FFElem::one(&s), FFElem::one(&s)],
        );
        let m = DrinfeldModule::new(phi_t).unwrap();
        let a = FqPoly::from_ints(&s, &[1, 0, 1]); // t² + 1
        let tors = m.torsion(&a, 4).unwrap();
        let phi_a = m.phi_action(&a);
        let phi_b = m.phi_action(&FqPoly::t(&s));
        for x in tors.points() {
            assert!(phi_a.eval_tower(x).is_zero());
            for y in tors.points() {
                let sum = x.add(y);
                assert!(phi_a.eval_tower(&sum).is_zero());
            }
            let bx = phi_b.eval_tower(x);
            assert!(phi_a.eval_tower(&bx).is_zero());
        }
    }

    #[test]
    fn split_degree_examples() {
        // φ_t = τ + τ² over F_2, a = t: separable part τ^0 + τ has kernel
        // {0, 1} ⊆ F_2, so the splitting degree is 1
        let s = fin_spec(2, 1);
        let phi_t = OrePoly::from_coeffs(
            &s,
            vec![FFElem::zero(&s), FFElem::one(&s), FFElem::one(&s)],
        );
        let m = DrinfeldModule::new(phi_t).unwrap();
        assert_eq!(m.split_degree(&FqPoly::t(&s), 12).unwrap(), Some(1));
        let (tors, certified) = m.torsion_split(&FqPoly::t(&s)).unwrap();
        assert!(certified);
        assert_eq!(tors.size(), 2);
        // the kernel-size law: |φ[a]| = q^(deg−ord)
        let phi_a = m.phi_action(&FqPoly::t(&s));
        let expect = 2u32.pow((phi_a.deg().unwrap() - phi_a.ord_tau().unwrap()) as u32);
        assert_eq!(tors.size() as u32, expect);
    }

    #[test]
    fn kernel_size_law_on_random_modules() {
        // dual route: Ore-division certificate on one side, matrix nullity
        // point count on the other
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut certified_cases = 0;
        for _ in 0..60 {
            let p = if rng.gen_bool(0.5) { 2u64 } else { 3 };
            let s = fin_spec(p, 1);
            let r = rng.gen_range(1..=3usize);
            let mut coeffs: Vec<FFElem> = (0..=r)
                .map(|_| FFElem::from_int(&s, rng.gen_range(0..p as i64)))
                .collect();
            if coeffs[r].is_zero() {
                coeffs[r] = FFElem::one(&s);
            }
            let Ok(m) = DrinfeldModule::new(OrePoly::from_coeffs(&s, coeffs)) else {
                continue;
            };
            let da = rng.gen_range(1..=2usize);
            let a = FqPoly::from_ints(
                &s,
                &(0..=da).map(|_| rng.gen_range(0..p as i64)).collect::<Vec<_>>(),
            );
            if a.is_zero() {
                continue;
            }
            let (tors, certified) = m.torsion_split(&a).unwrap();
            if !certified {
                continue;
            }
            certified_cases += 1;
            let phi_a = m.phi_action(&a);
            let expect = (p as u64).pow((phi_a.deg().unwrap() - phi_a.ord_tau().unwrap()) as u32);
            assert_eq!(tors.size() as u64, expect, "law failed for φ_a = {phi_a}");
        }
        assert!(certified_cases >= 20, "only {certified_cases} certified cases");
    }

    #[test]
    fn prime_to_char_contains_fq_for_tau_module() {
        let s = fin_spec(3, 1);
        let m = tau_module(&s);
        // deg_bound 0 yields only {0}
        let trivial = m.prime_to_char_torsion(2, 0).unwrap();
        assert_eq!(trivial.len(), 1);
        // with bound 1 the kernel of t − 1 (= F_q) is included
        let pts = m.prime_to_char_torsion(2, 1).unwrap();
        assert!(pts.len() >= 3);
        // closed under φ_t
        let phi_t = m.phi_t();
        for x in &pts {
            assert!(pts.contains(&phi_t.eval_tower(x)));
        }
    }

    #[test]
    fn good_and_bad_reduction() {
        // φ_t = tτ + τ³ over F_9(t): leading coefficient 1 — good at every
        // place, including t = 0
        let rs = rat_spec(3, 2);
        let t = RatFunc::t(&rs);
        let phi_t = OrePoly::from_coeffs(
            &rs,
            vec![RatFunc::zero(&rs), t.clone(), RatFunc::zero(&rs), RatFunc::one(&rs)],
        );
        let m = DrinfeldModule::new(phi_t).unwrap();
        let zero_place = Place::new(FFElem::zero(&rs));
        let one_place = Place::new(FFElem::one(&rs));
        assert!(m.good_reduction_at(&zero_place));
        assert!(m.good_reduction_at(&one_place));
        // reduction at t = 1 is τ + τ³
        let red = m.reduce_at(&one_place).unwrap();
        assert_eq!(red.phi_t().to_string(), "T + T^3");
        assert_eq!(red.spec().mode(), Mode::Finite);
        // characteristic of the reduction = minimal polynomial of the center
        assert_eq!(red.char_generator().unwrap(), &FqPoly::t(red.spec()));
        // leading coefficient t is bad at t = 0
        let phi_bad = OrePoly::from_coeffs(&rs, vec![RatFunc::zero(&rs), t.clone()]);
        let bad = DrinfeldModule::new(phi_bad).unwrap();
        assert!(!bad.good_reduction_at(&zero_place));
        assert!(matches!(
            bad.reduce_at(&zero_place),
            Err(Error::BadReduction(..))
        ));
        // a coefficient with a pole at the place is bad too
        let pole = RatFunc::one(&rs).div(&t).unwrap();
        let phi_pole = OrePoly::from_coeffs(&rs, vec![pole, RatFunc::one(&rs)]);
        let m_pole = DrinfeldModule::new(phi_pole).unwrap();
        assert!(!m_pole.good_reduction_at(&zero_place));
    }

    #[test]
    fn reduction_commutes_with_phi_action() {
        let rs = rat_spec(3, 2);
        let t = RatFunc::t(&rs);
        let phi_t = OrePoly::from_coeffs(
            &rs,
            vec![RatFunc::zero(&rs), t.clone(), RatFunc::zero(&rs), RatFunc::one(&rs)],
        );
        let m = DrinfeldModule::new(phi_t).unwrap();
        let place = Place::new(FFElem::generator(&rs));
        let red = m.reduce_at(&place).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let d = rng.gen_range(0..4usize);
            let a = FqPoly::from_ints(
                &rs,
                &(0..=d).map(|_| rng.gen_range(0..3i64)).collect::<Vec<_>>(),
            );
            let lifted = m.phi_action(&a);
            // specialize coefficient-wise, then compare
            let spec_red = red.spec();
            let reduced_coeffs: Vec<FFElem> = lifted
                .coeffs()
                .iter()
                .map(|c| {
                    FFElem::from_coords(spec_red, c.specialize(&place).unwrap().coords().to_vec())
                })
                .collect();
            let a_red = FqPoly::new(spec_red, a.coeffs().iter().map(|c| FFElem::from_coords(spec_red, c.coords().to_vec())).collect()).unwrap();
            assert_eq!(
                OrePoly::from_coeffs(spec_red, reduced_coeffs),
                red.phi_action(&a_red)
            );
        }
    }

    #[test]
    fn t_torsion_profile_stabilizes_for_tau_module() {
        // φ_t = τ has φ[t^n] = {0} for all n: profile all zeros, stabilized
        // at the first window
        let s = fin_spec(3, 1);
        let m = tau_module(&s);
        let (dims, stable) = m.t_torsion_profile(4, 4);
        assert_eq!(dims, vec![0, 0, 0, 0]);
        assert_eq!(stable, Some(1));
    }
}

// divisible_by_tm lives outside the impl blocks: it is a statement about
// F_q[t] alone.

/// The least nonzero d ∈ F_q[t^m] divisible by c, as guaranteed by
/// pigeonhole on the residues of t^{k·m} mod c: among the first
/// deg(c) + 1 of them there is an F_q-linear dependency, and the first one
/// found (scanning k upward) gives d = Σ α_k t^{km} with minimal
/// t^m-degree.  Returns the monic normalization.
pub fn divisible_by_tm(c: &FqPoly, m: u32) -> crate::Result<FqPoly> {
    if c.is_zero() {
        return Err(Error::ZeroPolynomial("multiple"));
    }
    if m == 0 {
        return Err(Error::precondition("m must be positive"));
    }
    let spec = c.spec();
    if c.deg() == Some(0) {
        return Ok(FqPoly::one(spec));
    }
    let tm = FqPoly::t_power(spec, m as usize);
    // residues with reduction bookkeeping: each new residue of t^{km} is
    // reduced against the pivots found so far; combos track the t^m-digits
    let dim = c.deg().unwrap();
    // pivot structure: (pivot index, residue coeffs, combo)
    let mut basis: Vec<(usize, Vec<FFElem>, Vec<FFElem>)> = Vec::new();
    let mut power = FqPoly::one(spec); // t^{0·m} mod c
    for k in 0..=dim {
        let mut res: Vec<FFElem> = (0..dim).map(|i| power.coeff(i)).collect();
        let mut combo = vec![FFElem::zero(spec); dim + 1];
        combo[k] = FFElem::one(spec);
        // reduce against existing pivots
        for (piv, prow, pcombo) in &basis {
            if res[*piv].is_zero() {
                continue;
            }
            let f = res[*piv].clone();
            for i in 0..dim {
                res[i] = res[i].sub(&f.mul(&prow[i]));
            }
            for i in 0..=dim {
                combo[i] = combo[i].sub(&f.mul(&pcombo[i]));
            }
        }
        if let Some(piv) = res.iter().position(|x| !x.is_zero()) {
            // normalize pivot to 1 and store
            let inv = res[piv].inv().unwrap();
            let prow: Vec<FFElem> = res.iter().map(|x| x.mul(&inv)).collect();
            let pcombo: Vec<FFElem> = combo.iter().map(|x| x.mul(&inv)).collect();
            basis.push((piv, prow, pcombo));
            power = power.mul(&tm).divrem(c).1;
            continue;
        }
        // dependency found: d = Σ combo_j · t^{j·m}
        let mut d = FqPoly::zero(spec);
        for (j, alpha) in combo.iter().enumerate() {
            if !alpha.is_zero() {
                let mut coeffs = vec![FFElem::zero(spec); j * m as usize + 1];
                coeffs[j * m as usize] = alpha.clone();
                d = d.add(&FqPoly { spec: Arc::clone(spec), coeffs });
            }
        }
        debug_assert!(d.divrem(c).1.is_zero());
        return Ok(d.monic());
    }
    unreachable!("pigeonhole guarantees a dependency within deg(c)+1 powers")
}
