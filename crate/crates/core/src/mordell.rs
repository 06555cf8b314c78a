//! Finitely generated φ-submodules of 𝔾_a^g, affine varieties, and the
//! desk-scale intersection experiments built on them: bounded enumeration
//! of Γ, X ∩ Γ, variety invariance under φ_{t^n}, verification of coset
//! decompositions, and reduction-injectivity scans over lists of places.
//!
//! Γ is always enumerated inside itself (never through a division hull):
//! every point is an F_q-combination of the precomputed images
//! φ_{t^j}(γ_i), which is exactly the set Σ_i φ_{a_i}(γ_i) with
//! deg a_i ≤ B.  Enumerations are guarded at [`ENUM_GUARD`] points and
//! fail loudly instead of truncating.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::basefield::{FFElem, FieldElement, FieldSpec, Place, RatFunc};
use crate::drinfeld::{DrinfeldModule, ENUM_GUARD};
use crate::error::Error;
use crate::exec::{self, Jobs};
use crate::ore::OrePoly;

/// Maximum number of kernel witnesses kept per place in a reduction scan.
const MAX_KERNEL_WITNESSES: usize = 8;

// ---------------------------------------------------------------------------
// multivariate polynomials
// ---------------------------------------------------------------------------

/// Dense-exponent multivariate polynomial over the working field in a fixed
/// number of variables; used for variety equations.
///
/// Terms map an exponent vector (one entry per variable) to a nonzero
/// coefficient.  Variables print as `x, y, z` when there are at most three
/// and as `x1, x2, ...` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly<C: FieldElement> {
    spec: Arc<FieldSpec>,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: FieldElement> MPoly<C> {
    pub fn zero(spec: &Arc<FieldSpec>, nvars: usize) -> Self {
        MPoly {
            spec: spec.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: &Arc<FieldSpec>, nvars: usize, c: C) -> Self {
        let mut out = Self::zero(spec, nvars);
        out.insert_add(vec![0; nvars], c);
        out
    }

    /// The j-th variable as a polynomial.
    pub fn var(spec: &Arc<FieldSpec>, nvars: usize, j: usize) -> crate::Result<Self> {
        if j >= nvars {
            return Err(Error::precondition(format!(
                "variable index {j} out of range for {nvars} variables"
            )));
        }
        let mut exp = vec![0u32; nvars];
        exp[j] = 1;
        let mut out = Self::zero(spec, nvars);
        out.insert_add(exp, C::one(spec));
        Ok(out)
    }

    pub fn from_terms(
        spec: &Arc<FieldSpec>,
        nvars: usize,
        terms: Vec<(Vec<u32>, C)>,
    ) -> crate::Result<Self> {
        let mut out = Self::zero(spec, nvars);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::Incompatible(format!(
                    "exponent vector of length {} in a {}-variable polynomial",
                    exp.len(),
                    nvars
                )));
            }
            out.insert_add(exp, c);
        }
        Ok(out)
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, exp: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
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
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.spec, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(exp, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.spec, self.nvars);
        for (e, a) in &self.terms {
            out.insert_add(e.clone(), a.mul(c));
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Exact evaluation at a point.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        let mut acc = C::zero(&self.spec);
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exp) {
                if e > 0 {
                    term = term.mul(&x.pow(e as u64));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// True when every term has total degree ≤ 1 (an affine-linear form).
    pub fn is_affine_linear(&self) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() <= 1)
    }

    /// For an affine-linear form, the per-variable coefficients and the
    /// constant; `None` when the polynomial is not affine-linear.
    pub fn affine_form(&self) -> Option<(Vec<C>, C)> {
        if !self.is_affine_linear() {
            return None;
        }
        let mut coeffs = vec![C::zero(&self.spec); self.nvars];
        let mut constant = C::zero(&self.spec);
        for (exp, c) in &self.terms {
            match exp.iter().position(|&e| e == 1) {
                Some(j) => coeffs[j] = c.clone(),
                None => constant = c.clone(),
            }
        }
        Some((coeffs, constant))
    }
}

fn var_name(nvars: usize, j: usize) -> String {
    if nvars <= 3 {
        ["x", "y", "z"][j].to_string()
    } else {
        format!("x{}", j + 1)
    }
}

impl<C: FieldElement> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut vars = String::new();
            for (j, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                vars.push_str(&var_name(self.nvars, j));
                if e > 1 {
                    vars.push_str(&format!("^{e}"));
                }
            }
            let cs = c.to_string();
            let wrapped = if cs.contains(' ') || cs.contains('+') {
                format!("({cs})")
            } else {
                cs.clone()
            };
            if vars.is_empty() {
                write!(f, "{wrapped}")?;
            } else if c.is_one() {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{wrapped}*{vars}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// varieties and φ-submodules
// ---------------------------------------------------------------------------

/// An affine subvariety of 𝔾_a^g cut out by exact polynomial equations;
/// membership is evaluation of every equation to zero.
#[derive(Debug, Clone)]
pub struct Variety<C: FieldElement> {
    spec: Arc<FieldSpec>,
    nvars: usize,
    equations: Vec<MPoly<C>>,
}

impl<C: FieldElement> Variety<C> {
    pub fn new(
        spec: &Arc<FieldSpec>,
        nvars: usize,
        equations: Vec<MPoly<C>>,
    ) -> crate::Result<Self> {
        for eq in &equations {
            if eq.nvars() != nvars {
                return Err(Error::Incompatible(format!(
                    "equation in {} variables inside a {}-variable variety",
                    eq.nvars(),
                    nvars
                )));
            }
        }
        Ok(Variety {
            spec: spec.clone(),
            nvars,
            equations,
        })
    }

    /// 𝔾_a^g itself (no equations).
    pub fn whole_space(spec: &Arc<FieldSpec>, nvars: usize) -> Self {
        Variety {
            spec: spec.clone(),
            nvars,
            equations: Vec::new(),
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn equations(&self) -> &[MPoly<C>] {
        &self.equations
    }

    pub fn is_affine_linear(&self) -> bool {
        self.equations.iter().all(|eq| eq.is_affine_linear())
    }

    pub fn contains(&self, point: &[C]) -> bool {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        self.equations.iter().all(|eq| eq.eval(point).is_zero())
    }
}

/// A finitely generated φ-submodule of 𝔾_a^g(K): φ acts diagonally on
/// tuples, and the submodule is spanned by the listed generator points.
#[derive(Debug)]
pub struct PhiSubmodule<'m, C: FieldElement> {
    module: &'m DrinfeldModule<C>,
    ambient: usize,
    generators: Vec<Vec<C>>,
}

impl<'m, C: FieldElement> PhiSubmodule<'m, C> {
    pub fn new(
        module: &'m DrinfeldModule<C>,
        ambient: usize,
        generators: Vec<Vec<C>>,
    ) -> crate::Result<Self> {
        if ambient == 0 {
            return Err(Error::precondition("ambient dimension must be ≥ 1"));
        }
        for g in &generators {
            if g.len() != ambient {
                return Err(Error::Incompatible(format!(
                    "generator of arity {} in ambient dimension {}",
                    g.len(),
                    ambient
                )));
            }
            for c in g {
                if c.spec().as_ref() != module.spec().as_ref() {
                    return Err(Error::Incompatible(
                        "generator coordinates live in a different field than the module".into(),
                    ));
                }
            }
        }
        Ok(PhiSubmodule {
            module,
            ambient,
            generators,
        })
    }

    pub fn module(&self) -> &'m DrinfeldModule<C> {
        self.module
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vec<C>] {
        &self.generators
    }
}

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

/// φ_{t^{period·k}}(γ) for every generator γ and every step with
/// period·k ≤ b, applied coordinate-wise.
fn tpower_images<C: FieldElement>(
    module: &DrinfeldModule<C>,
    generators: &[Vec<C>],
    b: u32,
    period: u32,
) -> Vec<Vec<Vec<C>>> {
    let steps: Vec<usize> = (0..)
        .map(|k| (k as u32 * period) as usize)
        .take_while(|&j| j <= b as usize)
        .collect();
    generators
        .iter()
        .map(|g| {
            steps
                .iter()
                .map(|&j| {
                    let phi = module.phi_t_power(j);
                    g.iter().map(|c| phi.eval(c)).collect()
                })
                .collect()
        })
        .collect()
}

/// All F_q-combinations of the flattened image points, plus an optional
/// translate; sorted with duplicates removed.
fn enumerate_combinations<C: FieldElement>(
    spec: &Arc<FieldSpec>,
    ambient: usize,
    images: &[Vec<Vec<C>>],
    translate: Option<&[C]>,
    jobs: Jobs,
) -> crate::Result<Vec<Vec<C>>> {
    let flat: Vec<&Vec<C>> = images.iter().flatten().collect();
    let digits = flat.len();
    let q = spec.q();
    let total = (q as u128)
        .checked_pow(digits as u32)
        .ok_or(Error::EnumerationTooLarge(u128::MAX, ENUM_GUARD))?;
    if total > ENUM_GUARD as u128 {
        return Err(Error::EnumerationTooLarge(total, ENUM_GUARD));
    }
    let scalars: Vec<C> = spec
        .fq_elements()
        .into_iter()
        .map(|c| C::embed(c))
        .collect();
    let base: Vec<C> = match translate {
        Some(t) => t.to_vec(),
        None => vec![C::zero(spec); ambient],
    };
    let mut out = exec::map_indexed(total as usize, jobs, |idx| {
        let mut point = base.clone();
        let mut n = idx;
        for w in &flat {
            let digit = n % q as usize;
            n /= q as usize;
            if digit != 0 {
                let c = &scalars[digit];
                for (pc, wc) in point.iter_mut().zip(w.iter()) {
                    *pc = pc.add(&wc.mul(c));
                }
            }
        }
        point
    });
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Every point Σ_i φ_{a_i}(γ_i) with deg a_i ≤ b, as a sorted list without
/// duplicates.  The zero point is always included and the list is closed
/// under negation.
pub fn enumerate_gamma<C: FieldElement>(
    gamma: &PhiSubmodule<'_, C>,
    b: u32,
    jobs: Jobs,
) -> crate::Result<Vec<Vec<C>>> {
    let images = tpower_images(gamma.module(), gamma.generators(), b, 1);
    enumerate_combinations(gamma.module().spec(), gamma.ambient(), &images, None, jobs)
}

/// The sublist of `enumerate_gamma(gamma, b)` lying on `x`.
pub fn intersect<C: FieldElement>(
    x: &Variety<C>,
    gamma: &PhiSubmodule<'_, C>,
    b: u32,
    jobs: Jobs,
) -> crate::Result<Vec<Vec<C>>> {
    if x.nvars() != gamma.ambient() {
        return Err(Error::Incompatible(format!(
            "variety in {} variables against ambient dimension {}",
            x.nvars(),
            gamma.ambient()
        )));
    }
    let points = enumerate_gamma(gamma, b, jobs)?;
    let kept = exec::map_indexed(points.len(), jobs, |i| x.contains(&points[i]));
    Ok(points
        .into_iter()
        .zip(kept)
        .filter_map(|(p, keep)| keep.then_some(p))
        .collect())
}

// ---------------------------------------------------------------------------
// variety invariance
// ---------------------------------------------------------------------------

/// Outcome of an invariance search.  Symbolic mode (affine-linear
/// varieties) certifies both presence and absence of an exponent; sampling
/// mode can only falsify exponents with witness points or report UNKNOWN.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invariance<C: FieldElement> {
    /// Symbolic certificate: x_j ↦ φ_{t^n}(x_j) maps the variety into
    /// itself at this exponent and at no smaller one.
    Certified(u32),
    /// Symbolic certificate that no exponent up to the bound works.
    CertifiedNone { n_max: u32 },
    /// Every exponent up to the bound has a sample point on the variety
    /// whose image leaves it; one witness per exponent.
    Falsified(Vec<(u32, Vec<C>)>),
    /// Sampling could not falsify some exponent; nothing is certified.
    Unknown { first_surviving: u32 },
}

impl<C: FieldElement> Invariance<C> {
    /// The certified exponent, when there is one.
    pub fn exponent(&self) -> Option<u32> {
        match self {
            Invariance::Certified(n) => Some(*n),
            _ => None,
        }
    }

    /// True unless sampling ended in UNKNOWN.
    pub fn certified(&self) -> bool {
        !matches!(self, Invariance::Unknown { .. })
    }

    /// Short label for reports: the exponent, NONE, or UNKNOWN.
    pub fn label(&self) -> String {
        match self {
            Invariance::Certified(n) => n.to_string(),
            Invariance::CertifiedNone { .. } | Invariance::Falsified(_) => "NONE".into(),
            Invariance::Unknown { .. } => "UNKNOWN".into(),
        }
    }
}

/// Reduced row echelon form of the augmented system ax = rhs over the
/// field; returns a particular solution and a basis of the homogeneous
/// solution space, or `None` when the system is inconsistent.
fn solve_affine<C: FieldElement>(
    spec: &Arc<FieldSpec>,
    a: &[Vec<C>],
    rhs: &[C],
    ncols: usize,
) -> Option<(Vec<C>, Vec<Vec<C>>)> {
    let nrows = a.len();
    let mut aug: Vec<Vec<C>> = (0..nrows)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, pr);
        let inv = aug[rank][col].inv().expect("nonzero pivot");
        for x in aug[rank].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..nrows {
            if r != rank && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in 0..=ncols {
                    let delta = aug[rank][c].mul(&factor);
                    aug[r][c] = aug[r][c].sub(&delta);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    // inconsistent row 0 ... 0 | nonzero
    for r in rank..nrows {
        if !aug[r][ncols].is_zero() {
            return None;
        }
    }
    let mut particular = vec![C::zero(spec); ncols];
    for (col, pr) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pr {
            particular[col] = aug[*r][ncols].clone();
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![C::zero(spec); ncols];
        v[free] = C::one(spec);
        for (col, pr) in pivot_of_col.iter().enumerate() {
            if let Some(r) = pr {
                v[col] = aug[*r][free].neg();
            }
        }
        basis.push(v);
    }
    Some((particular, basis))
}

/// Smallest n ≤ n_max such that x_j ↦ φ_{t^n}(x_j) maps the variety into
/// itself.
///
/// Affine-linear varieties are decided symbolically: the solution space is
/// parametrized as p + span(m_1, ..., m_d), and invariance at n holds iff
/// for every equation Σ_j c_j x_j + c_0 both the translate condition
/// Σ_j c_j φ_{t^n}(p_j) + c_0 = 0 and the Ore identities
/// Σ_j (c_j τ⁰)·φ_{t^n}·(m_{jf} τ⁰) = 0 hold — an additive polynomial
/// vanishing on the algebraic closure is the zero polynomial, so both
/// directions are exact.  An empty variety yields `Certified(1)`
/// (vacuous).  Nonlinear varieties fall back to sampling; with no samples
/// this is immediately `Unknown`.
pub fn invariance_exponent<C: FieldElement>(
    x: &Variety<C>,
    m: &DrinfeldModule<C>,
    n_max: u32,
) -> crate::Result<Invariance<C>> {
    invariance_exponent_sampled(x, m, n_max, &[])
}

/// As [`invariance_exponent`], but nonlinear varieties test the sample
/// points: a sample on the variety whose φ_{t^n}-image leaves it falsifies
/// the exponent n.  Samples off the variety are ignored.
pub fn invariance_exponent_sampled<C: FieldElement>(
    x: &Variety<C>,
    m: &DrinfeldModule<C>,
    n_max: u32,
    samples: &[Vec<C>],
) -> crate::Result<Invariance<C>> {
    if n_max < 1 {
        return Err(Error::precondition("n_max must be ≥ 1"));
    }
    if x.spec().as_ref() != m.spec().as_ref() {
        return Err(Error::Incompatible(
            "variety and module live over different fields".into(),
        ));
    }
    if x.is_affine_linear() {
        invariance_symbolic(x, m, n_max)
    } else {
        Ok(invariance_sampling(x, m, n_max, samples))
    }
}

fn invariance_symbolic<C: FieldElement>(
    x: &Variety<C>,
    m: &DrinfeldModule<C>,
    n_max: u32,
) -> crate::Result<Invariance<C>> {
    let spec = x.spec();
    let g = x.nvars();
    let mut rows: Vec<Vec<C>> = Vec::new();
    let mut consts: Vec<C> = Vec::new();
    for eq in x.equations() {
        let (coeffs, constant) = eq.affine_form().expect("checked affine-linear");
        rows.push(coeffs);
        consts.push(constant.neg()); // Σ c_j x_j = −c_0
    }
    let Some((particular, basis)) = solve_affine(spec, &rows, &consts, g) else {
        // empty variety: every substitution maps ∅ into it
        return Ok(Invariance::Certified(1));
    };
    for n in 1..=n_max {
        let phi = m.phi_t_power(n as usize);
        let mut ok = true;
        'eqs: for (coeffs, constant) in rows.iter().zip(x.equations()) {
            let c0 = constant.affine_form().expect("checked affine-linear").1;
            // translate condition
            let mut acc = c0;
            for (c, p) in coeffs.iter().zip(&particular) {
                acc = acc.add(&c.mul(&phi.eval(p)));
            }
            if !acc.is_zero() {
                ok = false;
                break 'eqs;
            }
            // one Ore identity per free direction
            for dir in &basis {
                let mut r = OrePoly::zero(spec);
                for (c, mj) in coeffs.iter().zip(dir) {
                    if c.is_zero() || mj.is_zero() {
                        continue;
                    }
                    let term = OrePoly::constant(c.clone())
                        .mul(&phi)
                        .mul(&OrePoly::constant(mj.clone()));
                    r = r.add(&term);
                }
                if !r.is_zero() {
                    ok = false;
                    break 'eqs;
                }
            }
        }
        if ok {
            return Ok(Invariance::Certified(n));
        }
    }
    Ok(Invariance::CertifiedNone { n_max })
}

fn invariance_sampling<C: FieldElement>(
    x: &Variety<C>,
    m: &DrinfeldModule<C>,
    n_max: u32,
    samples: &[Vec<C>],
) -> Invariance<C> {
    let on_x: Vec<&Vec<C>> = samples.iter().filter(|p| x.contains(p)).collect();
    let mut witnesses = Vec::new();
    let mut surviving = None;
    for n in 1..=n_max {
        let phi = m.phi_t_power(n as usize);
        let witness = on_x.iter().find(|p| {
            let image: Vec<C> = p.iter().map(|c| phi.eval(c)).collect();
            !x.contains(&image)
        });
        match witness {
            Some(w) => witnesses.push((n, (*w).clone())),
            None => {
                if surviving.is_none() {
                    surviving = Some(n);
                }
            }
        }
    }
    match surviving {
        Some(first_surviving) => Invariance::Unknown { first_surviving },
        None => Invariance::Falsified(witnesses),
    }
}

// ---------------------------------------------------------------------------
// coset decompositions
// ---------------------------------------------------------------------------

/// One translate γ + (F_q[t^{n_0}]-span of the δ_j under φ).
#[derive(Debug, Clone)]
pub struct CosetPart<C: FieldElement> {
    translate: Vec<C>,
    generators: Vec<Vec<C>>,
    period: u32,
}

impl<C: FieldElement> CosetPart<C> {
    pub fn new(translate: Vec<C>, generators: Vec<Vec<C>>, period: u32) -> crate::Result<Self> {
        if period < 1 {
            return Err(Error::precondition("coset period n_0 must be ≥ 1"));
        }
        let g = translate.len();
        if generators.iter().any(|d| d.len() != g) {
            return Err(Error::Incompatible(
                "coset generators must share the translate's arity".into(),
            ));
        }
        Ok(CosetPart {
            translate,
            generators,
            period,
        })
    }

    pub fn translate(&self) -> &[C] {
        &self.translate
    }

    pub fn generators(&self) -> &[Vec<C>] {
        &self.generators
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    /// γ + Σ_j φ_{b_j}(δ_j) over all b_j ∈ F_q[t^{n_0}] with deg b_j ≤ b.
    pub fn enumerate(
        &self,
        module: &DrinfeldModule<C>,
        b: u32,
        jobs: Jobs,
    ) -> crate::Result<Vec<Vec<C>>> {
        let images = tpower_images(module, &self.generators, b, self.period);
        enumerate_combinations(
            module.spec(),
            self.translate.len(),
            &images,
            Some(&self.translate),
            jobs,
        )
    }
}

/// A finite union of coset parts, offered as a candidate description of
/// X ∩ Γ; decompositions are verified, never discovered.
#[derive(Debug, Clone)]
pub struct CosetDecomposition<C: FieldElement> {
    parts: Vec<CosetPart<C>>,
}

impl<C: FieldElement> CosetDecomposition<C> {
    pub fn new(parts: Vec<CosetPart<C>>) -> Self {
        CosetDecomposition { parts }
    }

    pub fn parts(&self) -> &[CosetPart<C>] {
        &self.parts
    }
}

/// Outcome of checking a candidate decomposition against the enumerated
/// intersection.
#[derive(Debug, Clone)]
pub struct DecompositionReport<C: FieldElement> {
    /// True when both inclusions hold on the B-bounded enumerations.
    pub ok: bool,
    pub intersection_size: usize,
    pub covered_size: usize,
    /// Coset points that are not in the enumerated intersection.
    pub coset_outside: Vec<Vec<C>>,
    /// Intersection points not covered by any coset.
    pub uncovered: Vec<Vec<C>>,
}

/// Check that the union of the decomposition's cosets, each enumerated to
/// the bound, is exactly intersect(x, gamma, b).
pub fn verify_decomposition<C: FieldElement>(
    x: &Variety<C>,
    gamma: &PhiSubmodule<'_, C>,
    d: &CosetDecomposition<C>,
    b: u32,
    jobs: Jobs,
) -> crate::Result<DecompositionReport<C>> {
    for part in d.parts() {
        if part.translate().len() != gamma.ambient() {
            return Err(Error::Incompatible(
                "coset part arity differs from the ambient dimension".into(),
            ));
        }
    }
    let inter: BTreeSet<Vec<C>> = intersect(x, gamma, b, jobs)?.into_iter().collect();
    let mut covered: BTreeSet<Vec<C>> = BTreeSet::new();
    let mut coset_outside: BTreeSet<Vec<C>> = BTreeSet::new();
    for part in d.parts() {
        for pt in part.enumerate(gamma.module(), b, jobs)? {
            if !inter.contains(&pt) {
                coset_outside.insert(pt.clone());
            }
            covered.insert(pt);
        }
    }
    let uncovered: Vec<Vec<C>> = inter.difference(&covered).cloned().collect();
    let coset_outside: Vec<Vec<C>> = coset_outside.into_iter().collect();
    Ok(DecompositionReport {
        ok: coset_outside.is_empty() && uncovered.is_empty(),
        intersection_size: inter.len(),
        covered_size: covered.len(),
        coset_outside,
        uncovered,
    })
}

// ---------------------------------------------------------------------------
// reduction-injectivity scans
// ---------------------------------------------------------------------------

/// Per-place outcome of a reduction-injectivity scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceStatus {
    /// The module or a point failed to reduce; reason recorded.
    Skipped { reason: String },
    /// Reduction is injective on the enumerated points.
    Injective,
    /// Collisions occurred; nonzero differences reducing to zero are kept
    /// as kernel witnesses (capped).
    NonInjective {
        collisions: usize,
        kernel_witnesses: Vec<Vec<RatFunc>>,
    },
}

#[derive(Debug, Clone)]
pub struct PlaceReport {
    pub place: Place,
    pub status: PlaceStatus,
}

/// Aggregate of a scan over a list of places.
#[derive(Debug, Clone)]
pub struct ReductionScan {
    pub reports: Vec<PlaceReport>,
    /// Number of enumerated points the scan tested at each place.
    pub points: usize,
    pub injective: usize,
    pub non_injective: usize,
    pub skipped: usize,
}

/// Reduce the B-bounded enumeration of Γ at every listed place and test
/// injectivity of the reduction map; bad places are skipped and reported.
pub fn reduction_injectivity_scan(
    gamma: &PhiSubmodule<'_, RatFunc>,
    places: &[Place],
    b: u32,
    jobs: Jobs,
) -> crate::Result<ReductionScan> {
    let points = enumerate_gamma(gamma, b, jobs)?;
    let reports: Vec<PlaceReport> = exec::map_indexed(places.len(), jobs, |i| {
        let place = places[i].clone();
        let status = scan_one_place(gamma, &points, &place);
        PlaceReport { place, status }
    });
    let mut scan = ReductionScan {
        reports,
        points: points.len(),
        injective: 0,
        non_injective: 0,
        skipped: 0,
    };
    for r in &scan.reports {
        match r.status {
            PlaceStatus::Skipped { .. } => scan.skipped += 1,
            PlaceStatus::Injective => scan.injective += 1,
            PlaceStatus::NonInjective { .. } => scan.non_injective += 1,
        }
    }
    Ok(scan)
}

fn scan_one_place(
    gamma: &PhiSubmodule<'_, RatFunc>,
    points: &[Vec<RatFunc>],
    place: &Place,
) -> PlaceStatus {
    if let Err(e) = gamma.module().reduce_at(place) {
        return PlaceStatus::Skipped {
            reason: e.to_string(),
        };
    }
    let mut buckets: BTreeMap<Vec<FFElem>, Vec<usize>> = BTreeMap::new();
    for (i, pt) in points.iter().enumerate() {
        let mut image = Vec::with_capacity(pt.len());
        for c in pt {
            match c.specialize(place) {
                Ok(v) => image.push(v),
                Err(e) => {
                    return PlaceStatus::Skipped {
                        reason: e.to_string(),
                    }
                }
            }
        }
        buckets.entry(image).or_default().push(i);
    }
    let mut collisions = 0usize;
    let mut kernel_witnesses: BTreeSet<Vec<RatFunc>> = BTreeSet::new();
    for idxs in buckets.values() {
        if idxs.len() < 2 {
            continue;
        }
        collisions += idxs.len() - 1;
        let first = &points[idxs[0]];
        for &j in &idxs[1..] {
            if kernel_witnesses.len() >= MAX_KERNEL_WITNESSES {
                break;
            }
            let diff: Vec<RatFunc> = points[j]
                .iter()
                .zip(first)
                .map(|(a, b)| a.sub(b))
                .collect();
            kernel_witnesses.insert(diff);
        }
    }
    if collisions == 0 {
        PlaceStatus::Injective
    } else {
        PlaceStatus::NonInjective {
            collisions,
            kernel_witnesses: kernel_witnesses.into_iter().collect(),
        }
    }
}

/// The torsion-annihilator degree bound (r³ + r² + 2r)/2 · |S| used when
/// choosing an irreducible a of large degree; r ≥ 1 and s_size ≥ 1.
pub fn claim2_bound(r: u64, s_size: u64) -> u64 {
    (r * r * r + r * r + 2 * r) / 2 * s_size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::Mode;

    fn rat9() -> Arc<FieldSpec> {
        FieldSpec::new(3, 1, 2, Mode::RatFunc).unwrap()
    }

    /// The generator g of F_9 as a constant rational function.
    fn lambda(spec: &Arc<FieldSpec>) -> RatFunc {
        RatFunc::constant(FFElem::from_coords(spec, vec![0, 1]))
    }

    /// φ_t = τ + t·τ³ over F_9(t).
    fn sharp_module(spec: &Arc<FieldSpec>) -> DrinfeldModule<RatFunc> {
        DrinfeldModule::new(OrePoly::from_coeffs(
            spec,
            vec![
                RatFunc::zero(spec),
                RatFunc::one(spec),
                RatFunc::zero(spec),
                RatFunc::t(spec),
            ],
        ))
        .unwrap()
    }

    /// X: y = λ·x as the single equation y − λx.
    fn line(spec: &Arc<FieldSpec>, lam: &RatFunc) -> Variety<RatFunc> {
        let y = MPoly::var(spec, 2, 1).unwrap();
        let x = MPoly::var(spec, 2, 0).unwrap();
        Variety::new(spec, 2, vec![y.sub(&x.scale(lam))]).unwrap()
    }

    #[test]
    fn mpoly_arithmetic_eval_and_display() {
        let s = rat9();
        let x = MPoly::var(&s, 2, 0).unwrap();
        let y = MPoly::var(&s, 2, 1).unwrap();
        let lam = lambda(&s);
        let eq = y.sub(&x.scale(&lam));
        assert!(eq.is_affine_linear());
        assert_eq!(eq.total_degree(), 1);
        // on the line: (1, λ)
        let one = RatFunc::one(&s);
        assert!(eq.eval(&[one.clone(), lam.clone()]).is_zero());
        assert!(!eq.eval(&[lam.clone(), one.clone()]).is_zero());
        // product and display
        let prod = x.mul(&x).sub(&y.scale(&RatFunc::t(&s)));
        assert_eq!(prod.to_string(), "x^2 + 2*t*y");
        assert!(!prod.is_affine_linear());
        let v = prod.eval(&[RatFunc::t(&s), one.clone()]);
        // t² − t... in characteristic 3 the second term is +2t
        let expect = RatFunc::t(&s)
            .mul(&RatFunc::t(&s))
            .add(&RatFunc::t(&s).mul(&RatFunc::from_int(&s, 2)));
        assert_eq!(v, expect);
    }

    #[test]
    fn enumeration_of_trivial_submodules() {
        let s = rat9();
        let m = sharp_module(&s);
        // no generators → the zero point only
        let g0 = PhiSubmodule::new(&m, 2, vec![]).unwrap();
        let pts = enumerate_gamma(&g0, 5, Some(1)).unwrap();
        assert_eq!(pts, vec![vec![RatFunc::zero(&s), RatFunc::zero(&s)]]);
        // B = 0: constants only, {c·γ : c ∈ F_3}
        let gen = vec![RatFunc::one(&s), lambda(&s)];
        let g1 = PhiSubmodule::new(&m, 2, vec![gen.clone()]).unwrap();
        let pts = enumerate_gamma(&g1, 0, Some(1)).unwrap();
        assert_eq!(pts.len(), 3);
        for c in 0..3i64 {
            let cc = RatFunc::from_int(&s, c);
            let p = vec![gen[0].mul(&cc), gen[1].mul(&cc)];
            assert!(pts.contains(&p));
        }
    }

    #[test]
    fn enumeration_counts_and_closure_on_cyclic_submodule() {
        let s = rat9();
        let m = sharp_module(&s);
        let gen = vec![RatFunc::one(&s), lambda(&s)];
        let gamma = PhiSubmodule::new(&m, 2, vec![gen]).unwrap();
        let pts = enumerate_gamma(&gamma, 4, Some(1)).unwrap();
        // the images φ_{t^j}(1) have strictly increasing t-degree, so all
        // 3^5 combinations are distinct
        assert_eq!(pts.len(), 243);
        let zero = vec![RatFunc::zero(&s), RatFunc::zero(&s)];
        assert!(pts.contains(&zero));
        // closed under negation
        for p in &pts {
            let np: Vec<RatFunc> = p.iter().map(|c| c.neg()).collect();
            assert!(pts.contains(&np));
        }
        // φ_t maps the B=3 enumeration into the B=4 one
        let inner = enumerate_gamma(&gamma, 3, Some(1)).unwrap();
        let phi = m.phi_t();
        for p in &inner {
            let image: Vec<RatFunc> = p.iter().map(|c| phi.eval(c)).collect();
            assert!(pts.contains(&image));
        }
    }

    #[test]
    fn enumeration_guard_trips() {
        let s = rat9();
        let m = sharp_module(&s);
        let gamma = PhiSubmodule::new(&m, 2, vec![vec![RatFunc::one(&s), lambda(&s)]]).unwrap();
        // 3^14 > 10^6
        match enumerate_gamma(&gamma, 13, Some(1)) {
            Err(Error::EnumerationTooLarge(n, g)) => {
                assert_eq!(n, 3u128.pow(14));
                assert_eq!(g, 1_000_000);
            }
            other => panic!("expected guard error, got {other:?}"),
        }
    }

    #[test]
    fn intersection_with_the_skew_line() {
        let s = rat9();
        let m = sharp_module(&s);
        let lam = lambda(&s);
        let x = line(&s, &lam);
        let gamma = PhiSubmodule::new(&m, 2, vec![vec![RatFunc::one(&s), lam.clone()]]).unwrap();
        // only a ∈ F_3[t²] give points on y = λx: 3^(⌊B/2⌋+1) points
        let i4 = intersect(&x, &gamma, 4, Some(1)).unwrap();
        assert_eq!(i4.len(), 27);
        let i6 = intersect(&x, &gamma, 6, Some(1)).unwrap();
        assert_eq!(i6.len(), 81);
        // strict growth between bounds — the intersection keeps producing
        // new points, the shape of an infinite X ∩ Γ
        assert!(i6.len() > i4.len());
        // (φ_{t²}(1), φ_{t²}(λ)) is on the line, (φ_t(1), φ_t(λ)) is not
        let p2: Vec<RatFunc> = [RatFunc::one(&s), lam.clone()]
            .iter()
            .map(|c| m.phi_t_power(2).eval(c))
            .collect();
        assert!(i6.contains(&p2));
        let p1: Vec<RatFunc> = [RatFunc::one(&s), lam.clone()]
            .iter()
            .map(|c| m.phi_t().eval(c))
            .collect();
        assert!(!i6.contains(&p1));
        assert!(enumerate_gamma(&gamma, 6, Some(1)).unwrap().contains(&p1));
        // intersection is a sublist of the enumeration
        let all: BTreeSet<_> = enumerate_gamma(&gamma, 6, Some(1)).unwrap().into_iter().collect();
        assert!(i6.iter().all(|p| all.contains(p)));
    }

    #[test]
    fn parallel_and_sequential_enumeration_agree() {
        let s = rat9();
        let m = sharp_module(&s);
        let gamma = PhiSubmodule::new(&m, 2, vec![vec![RatFunc::one(&s), lambda(&s)]]).unwrap();
        let seq = enumerate_gamma(&gamma, 4, Some(1)).unwrap();
        let par = enumerate_gamma(&gamma, 4, None).unwrap();
        assert_eq!(seq, par);
        let seq2 = enumerate_gamma(&gamma, 4, Some(3)).unwrap();
        assert_eq!(seq, seq2);
    }

    #[test]
    fn invariance_of_the_skew_line_certifies_two() {
        let s = rat9();
        let m = sharp_module(&s);
        let lam = lambda(&s);
        let x = line(&s, &lam);
        // φ_t skews past λ (fλ = λ^q f), φ_{t²} commutes
        assert_eq!(
            invariance_exponent(&x, &m, 8).unwrap(),
            Invariance::Certified(2)
        );
        // the diagonal is stable under any φ_t
        let diag = line(&s, &RatFunc::one(&s));
        assert_eq!(
            invariance_exponent(&diag, &m, 8).unwrap(),
            Invariance::Certified(1)
        );
    }

    #[test]
    fn invariance_fails_for_every_power_of_the_u_action() {
        let s = rat9();
        let m = sharp_module(&s);
        // substitute t ↦ u = t + t²: the module with action φ_u
        let phi_u = m.phi_t().add(&m.phi_t_power(2));
        let mu = DrinfeldModule::new(phi_u).unwrap();
        let x = line(&s, &lambda(&s));
        // u^n always has a nonzero odd-degree coefficient mod 3, so
        // φ_{u^n} never commutes with λ
        assert_eq!(
            invariance_exponent(&x, &mu, 6).unwrap(),
            Invariance::CertifiedNone { n_max: 6 }
        );
    }

    #[test]
    fn certified_invariance_maps_intersection_points_into_the_variety() {
        let s = rat9();
        let m = sharp_module(&s);
        let lam = lambda(&s);
        let x = line(&s, &lam);
        let gamma = PhiSubmodule::new(&m, 2, vec![vec![RatFunc::one(&s), lam.clone()]]).unwrap();
        let n = invariance_exponent(&x, &m, 8).unwrap().exponent().unwrap();
        // consistency: images of bounded intersection points stay on X
        let phi = m.phi_t_power(n as usize);
        for p in intersect(&x, &gamma, 4, Some(1)).unwrap() {
            let image: Vec<RatFunc> = p.iter().map(|c| phi.eval(c)).collect();
            assert!(x.contains(&image));
        }
    }

    #[test]
    fn sampling_mode_falsifies_or_stays_unknown() {
        let s = rat9();
        let m = sharp_module(&s);
        let x = MPoly::var(&s, 2, 0).unwrap();
        let y = MPoly::var(&s, 2, 1).unwrap();
        // y = x², nonlinear, so only sampling is available
        let parab = Variety::new(&s, 2, vec![y.sub(&x.mul(&x))]).unwrap();
        let one = RatFunc::one(&s);
        let on_curve = vec![vec![one.clone(), one.clone()]];
        // φ_{t^n}(1) has positive t-degree, so (1,1) always leaves the curve
        match invariance_exponent_sampled(&parab, &m, 4, &on_curve).unwrap() {
            Invariance::Falsified(ws) => {
                assert_eq!(ws.len(), 4);
                assert!(ws.iter().all(|(_, w)| *w == on_curve[0]));
            }
            other => panic!("expected falsification, got {other:?}"),
        }
        // no usable samples → nothing can be concluded
        assert_eq!(
            invariance_exponent(&parab, &m, 4).unwrap(),
            Invariance::Unknown { first_surviving: 1 }
        );
    }

    #[test]
    fn decomposition_with_even_period_verifies_and_shrinks() {
        let s = rat9();
        let m = sharp_module(&s);
        let lam = lambda(&s);
        let x = line(&s, &lam);
        let gen = vec![RatFunc::one(&s), lam.clone()];
        let gamma = PhiSubmodule::new(&m, 2, vec![gen.clone()]).unwrap();
        let zero = vec![RatFunc::zero(&s), RatFunc::zero(&s)];
        let d = CosetDecomposition::new(vec![
            CosetPart::new(zero, vec![gen.clone()], 2).unwrap(),
        ]);
        for b in [6, 4, 2] {
            let report = verify_decomposition(&x, &gamma, &d, b, Some(1)).unwrap();
            assert!(report.ok, "decomposition should hold at B = {b}");
            assert_eq!(report.intersection_size, report.covered_size);
        }
    }

    #[test]
    fn decomposition_with_period_one_fails_with_witness() {
        let s = rat9();
        let m = sharp_module(&s);
        let lam = lambda(&s);
        let x = line(&s, &lam);
        let gen = vec![RatFunc::one(&s), lam.clone()];
        let gamma = PhiSubmodule::new(&m, 2, vec![gen.clone()]).unwrap();
        let zero = vec![RatFunc::zero(&s), RatFunc::zero(&s)];
        let d = CosetDecomposition::new(vec![
            CosetPart::new(zero, vec![gen.clone()], 1).unwrap(),
        ]);
        let report = verify_decomposition(&x, &gamma, &d, 4, Some(1)).unwrap();
        assert!(!report.ok);
        // (φ_t(1), φ_t(λ)) sits in the coset but off the line
        let w: Vec<RatFunc> = gen.iter().map(|c| m.phi_t().eval(c)).collect();
        assert!(report.coset_outside.contains(&w));
        assert!(report.uncovered.is_empty());
    }

    #[test]
    fn reduction_scan_over_the_nonzero_places_of_f9() {
        let s = rat9();
        // φ_t = tτ + τ³, Γ = ⟨1⟩ in the line
        let m = DrinfeldModule::new(OrePoly::from_coeffs(
            &s,
            vec![
                RatFunc::zero(&s),
                RatFunc::t(&s),
                RatFunc::zero(&s),
                RatFunc::one(&s),
            ],
        ))
        .unwrap();
        let gamma = PhiSubmodule::new(&m, 1, vec![vec![RatFunc::one(&s)]]).unwrap();
        let places: Vec<Place> = s
            .elements()
            .into_iter()
            .filter(|c| !c.is_zero())
            .map(Place::new)
            .collect();
        assert_eq!(places.len(), 8);
        // B = 1: points c0 + c1(t+1) reduce to c0 + c1(c+1), injective
        // exactly when c + 1 ∉ F_3, i.e. at the six places outside F_3
        let scan = reduction_injectivity_scan(&gamma, &places, 1, Some(1)).unwrap();
        assert_eq!(scan.points, 9);
        assert_eq!(scan.reports.len(), 8);
        assert_eq!((scan.injective, scan.non_injective, scan.skipped), (6, 2, 0));
        // B = 3 enumerates 81 points, more than the residue field holds,
        // so no degree-one place can be injective
        let scan = reduction_injectivity_scan(&gamma, &places, 3, Some(1)).unwrap();
        assert_eq!(scan.points, 81);
        assert_eq!(scan.injective, 0);
        assert_eq!(scan.non_injective, 8);
    }

    #[test]
    fn reduction_scan_reports_kernel_witnesses() {
        let s = rat9();
        let m = DrinfeldModule::new(OrePoly::from_coeffs(
            &s,
            vec![
                RatFunc::zero(&s),
                RatFunc::t(&s),
                RatFunc::zero(&s),
                RatFunc::one(&s),
            ],
        ))
        .unwrap();
        // generator (t − 1) collapses to 0 at the place t ↦ 1
        let t_minus_1 = RatFunc::t(&s).sub(&RatFunc::one(&s));
        let gamma = PhiSubmodule::new(&m, 1, vec![vec![t_minus_1.clone()]]).unwrap();
        let place = Place::new(FFElem::one(&s));
        let scan = reduction_injectivity_scan(&gamma, &[place.clone()], 1, Some(1)).unwrap();
        match &scan.reports[0].status {
            PlaceStatus::NonInjective {
                collisions,
                kernel_witnesses,
            } => {
                assert!(*collisions >= 1);
                assert!(!kernel_witnesses.is_empty());
                for w in kernel_witnesses {
                    assert!(w.iter().any(|c| !c.is_zero()));
                    for c in w {
                        assert!(c.specialize(&place).unwrap().is_zero());
                    }
                }
            }
            other => panic!("expected a non-injective report, got {other:?}"),
        }
    }

    #[test]
    fn reduction_scan_skips_bad_places() {
        let s = rat9();
        // leading coefficient 1/t has a pole at t ↦ 0
        let inv_t = RatFunc::one(&s).div(&RatFunc::t(&s)).unwrap();
        let m = DrinfeldModule::new(OrePoly::from_coeffs(
            &s,
            vec![RatFunc::zero(&s), inv_t],
        ))
        .unwrap();
        let gamma = PhiSubmodule::new(&m, 1, vec![vec![RatFunc::one(&s)]]).unwrap();
        let bad = Place::new(FFElem::zero(&s));
        let good = Place::new(FFElem::one(&s));
        let scan = reduction_injectivity_scan(&gamma, &[bad, good], 2, Some(1)).unwrap();
        assert_eq!(scan.skipped, 1);
        assert!(matches!(scan.reports[0].status, PlaceStatus::Skipped { .. }));
        assert!(!matches!(scan.reports[1].status, PlaceStatus::Skipped { .. }));
    }

    #[test]
    fn claim2_bound_values() {
        assert_eq!(claim2_bound(3, 1), 21);
        assert_eq!(claim2_bound(1, 1), 2);
        assert_eq!(claim2_bound(2, 3), 24);
    }

    #[test]
    fn solve_affine_handles_inconsistent_and_underdetermined_systems() {
        let s = rat9();
        let one = RatFunc::one(&s);
        let zero = RatFunc::zero(&s);
        // x + y = 1 over two variables: one free direction
        let (p, basis) = solve_affine(
            &s,
            &[vec![one.clone(), one.clone()]],
            &[one.clone()],
            2,
        )
        .unwrap();
        assert_eq!(p[0].add(&p[1]), one);
        assert_eq!(basis.len(), 1);
        assert!(basis[0][0].add(&basis[0][1]).is_zero());
        // 0·x = 1 is inconsistent
        assert!(solve_affine(&s, &[vec![zero.clone()]], &[one.clone()], 1).is_none());
    }
}
