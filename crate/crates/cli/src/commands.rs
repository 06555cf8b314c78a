//! The single-operation subcommands: eval, ore, torsion, sharp, commute
//! and lambda.  Each one parses its expressions in the module's host
//! field, runs one core operation and reports flat `key = value` pairs.

use oresharp_core::{
    clearance_exponent, commutation_exponent, lambda_decompose, lp_compose_ore, parse_element,
    parse_fq_poly, parse_lambda, parse_ore, sharp, sharp_compare, DrinfeldModule, Error, FFElem,
    FieldElement, OrePoly, RatFunc, Result, SharpGroup, Tau0Poly,
};

use crate::load::exponent_str;
use crate::report::Reporter;

pub fn eval<C: FieldElement>(
    rep: &mut Reporter,
    m: &DrinfeldModule<C>,
    expr: &str,
    apply: Option<&str>,
) -> Result<()> {
    let x: C = parse_element(m.spec(), expr)?;
    rep.kv("value", &x);
    if let Some(a_src) = apply {
        let a = parse_fq_poly(m.spec(), a_src)?;
        rep.kv("a", &a);
        rep.kv("phi_a", m.phi_action(&a));
        rep.kv("image", m.act(&a, &x));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OreOp {
    Mul,
    Add,
    Rdiv,
}

pub fn ore<C: FieldElement>(
    rep: &mut Reporter,
    m: &DrinfeldModule<C>,
    f_src: &str,
    g_src: Option<&str>,
    op: OreOp,
    at: Option<&str>,
) -> Result<()> {
    let spec = m.spec();
    let f: OrePoly<C> = parse_ore(spec, f_src)?;
    rep.kv("f", &f);
    match g_src {
        Some(g_src) => {
            let g: OrePoly<C> = parse_ore(spec, g_src)?;
            rep.kv("g", &g);
            match op {
                OreOp::Mul => rep.kv("product", f.mul(&g)),
                OreOp::Add => rep.kv("sum", f.add(&g)),
                OreOp::Rdiv => {
                    let (q, r) = f.rdiv(&g)?;
                    rep.kv("quotient", q);
                    rep.kv("remainder", r);
                }
            }
        }
        None => {
            match f.deg() {
                Some(d) => rep.kv("deg", d),
                None => rep.kv("deg", "NONE"),
            }
            if !f.is_zero() {
                rep.kv("ord", f.ord_tau()?);
                rep.kv("separable", f.is_separable()?);
            }
        }
    }
    if let Some(x_src) = at {
        let x: C = parse_element(spec, x_src)?;
        rep.kv("at", &x);
        rep.kv("value", f.eval(&x));
    }
    Ok(())
}

pub fn torsion(rep: &mut Reporter, m: &DrinfeldModule<FFElem>, a_src: &str, n: u32) -> Result<()> {
    let a = parse_fq_poly(m.spec(), a_src)?;
    rep.kv("a", &a);
    rep.kv("N", n);
    let ts = m.torsion(&a, n)?;
    rep.kv("dim", ts.q_dim(m.spec()));
    rep.kv("size", ts.size());
    Ok(())
}

fn sharp_lines(rep: &mut Reporter, s: &SharpGroup, p: u64) -> Result<()> {
    rep.kv("stabilized_at", s.stabilized_at());
    rep.kv("dim", s.dim_fp());
    let size = (p as u128)
        .checked_pow(s.dim_fp() as u32)
        .ok_or_else(|| Error::precondition("sharp subspace too large to count"))?;
    rep.kv("size", size);
    rep.kv("full", s.is_trivial_full());
    Ok(())
}

pub fn sharp_cmd(
    rep: &mut Reporter,
    m: &DrinfeldModule<FFElem>,
    n: u32,
    compare: Option<&str>,
) -> Result<()> {
    rep.kv("N", n);
    let s = sharp(m, n)?;
    sharp_lines(rep, &s, m.spec().p())?;
    if let Some(g_src) = compare {
        let g: OrePoly<FFElem> = parse_ore(m.spec(), g_src)?;
        rep.kv("g", &g);
        rep.kv("compare", sharp_compare(m.phi_t(), &g, n)?.name());
    }
    Ok(())
}

pub fn commute<C: FieldElement>(
    rep: &mut Reporter,
    m: &DrinfeldModule<C>,
    psi_src: &str,
    nmax: u32,
) -> Result<()> {
    let psi: OrePoly<C> = parse_ore(m.spec(), psi_src)?;
    rep.kv("psi", &psi);
    rep.kv("nmax", nmax);
    let found = commutation_exponent(m, &psi, nmax);
    rep.kv("n", exponent_str(found));
    if let Some(n) = found {
        // the witnessed identity psi*phi_{t^n} = phi_{t^n}*psi, both sides
        let phi = m.phi_t_power(n as usize);
        rep.kv("lhs", psi.mul(&phi));
        rep.kv("rhs", phi.mul(&psi));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn lambda(
    rep: &mut Reporter,
    m: &DrinfeldModule<RatFunc>,
    expr: Option<&str>,
    eval_at: Option<&str>,
    compose: Option<&str>,
    clearance: Option<u32>,
    decompose: Option<&str>,
) -> Result<()> {
    let spec = m.spec();
    if expr.is_none() && decompose.is_none() {
        return Err(Error::precondition(
            "lambda needs an expression or --decompose",
        ));
    }
    if let Some(src) = expr {
        let psi = parse_lambda(spec, src)?;
        rep.kv("input", &psi);
        rep.kv("plain", psi.is_ore());
        if let Some(x_src) = eval_at {
            let x: RatFunc = parse_element(spec, x_src)?;
            rep.kv("at", &x);
            rep.kv("value", psi.eval(&x)?);
        }
        if let Some(g_src) = compose {
            let g: OrePoly<RatFunc> = parse_ore(spec, g_src)?;
            let g0 = Tau0Poly::from_q_twist(&g)?;
            let composed = lp_compose_ore(&psi, &g0)?;
            rep.kv("composed", &composed);
            rep.kv("composed_plain", composed.is_ore());
        }
        if let Some(nmax) = clearance {
            rep.kv("clearance", exponent_str(clearance_exponent(&psi, nmax)?));
        }
    } else if eval_at.is_some() || compose.is_some() || clearance.is_some() {
        return Err(Error::precondition(
            "--eval, --compose and --clearance need a lambda expression",
        ));
    }
    if let Some(x_src) = decompose {
        let x: RatFunc = parse_element(spec, x_src)?;
        let parts = lambda_decompose(&x)?;
        for (i, part) in parts.iter().enumerate() {
            rep.kv(&format!("lambda_{i}"), part);
        }
    }
    Ok(())
}
