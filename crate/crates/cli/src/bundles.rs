//! Shipped experiment bundles.
//!
//! Each bundle pins a module, a scripted sequence of operations and the
//! values those operations must produce; running one replays the script
//! and marks every section PASS or FAIL.  A failure is a regression in
//! the library, not bad input, so it exits with code 1.

use oresharp_core::exec::Jobs;
use oresharp_core::{
    commutation_exponent, enumerate_gamma, intersect, invariance_exponent, skew_exponent,
    verify_decomposition, verify_e35_obstruction, CosetDecomposition, CosetPart, DrinfeldModule,
    Error, Experiment, FFElem, FieldElement, Invariance, OrePoly, PhiSubmodule, RatFunc, Result,
    Variety,
};

use crate::load::exponent_str;
use crate::presets;
use crate::report::Reporter;

/// Bundle names, in listing order.
pub const NAMES: [&str; 4] = [
    "example_lambda",
    "example_lambda_p2",
    "remark_important",
    "remark_sharp",
];

/// Run a bundle; returns true when any check failed.
pub fn run(name: &str, rep: &mut Reporter, jobs: Jobs) -> Result<bool> {
    rep.kv("bundle", name);
    let mut tally = Tally::default();
    match name {
        "example_lambda" => example_lambda(rep, &mut tally)?,
        "example_lambda_p2" => example_lambda_p2(rep, &mut tally)?,
        "remark_sharp" => remark_sharp(rep, &mut tally, jobs)?,
        "remark_important" => remark_important(rep, &mut tally, jobs)?,
        _ => {
            return Err(Error::Config(format!(
                "unknown bundle `{name}`; known bundles: {}",
                NAMES.join(", ")
            )))
        }
    }
    rep.section("RESULT");
    rep.kv("checks", tally.checks);
    rep.kv("failed", tally.failed);
    rep.kv("status", if tally.failed == 0 { "PASS" } else { "FAIL" });
    Ok(tally.failed > 0)
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
}

impl Tally {
    fn status(&mut self, rep: &mut Reporter, pass: bool) {
        self.checks += 1;
        if !pass {
            self.failed += 1;
        }
        rep.kv("status", if pass { "PASS" } else { "FAIL" });
    }
}

fn preset_module(name: &str) -> Result<DrinfeldModule<RatFunc>> {
    let text = presets::module(name)
        .ok_or_else(|| Error::Config(format!("missing module preset `{name}`")))?;
    oresharp_core::ModuleDescriptor::parse(text)?.build()
}

fn preset_experiment(name: &str) -> Result<Experiment> {
    let text = presets::experiment(name)
        .ok_or_else(|| Error::Config(format!("missing experiment preset `{name}`")))?;
    Experiment::parse(text)
}

/// The generator of the constant field.
fn gen_elem(spec: &std::sync::Arc<oresharp_core::FieldSpec>) -> FFElem {
    let mut coords = vec![0u64; spec.m() as usize];
    coords[1] = 1;
    FFElem::from_coords(spec, coords)
}

/// The generator of the constant field as a scalar twisted polynomial.
fn scalar_g(spec: &std::sync::Arc<oresharp_core::FieldSpec>) -> OrePoly<RatFunc> {
    OrePoly::constant(RatFunc::constant(gen_elem(spec)))
}

/// All constants of the host field as scalar coefficients.
fn constants(spec: &std::sync::Arc<oresharp_core::FieldSpec>) -> Vec<FFElem> {
    spec.elements()
}

fn example_lambda(rep: &mut Reporter, tally: &mut Tally) -> Result<()> {
    let m = preset_module("example_lambda")?;
    let spec = m.spec();
    let f: OrePoly<RatFunc> = oresharp_core::parse_ore(spec, "t*T + T^3")?;
    let all = constants(spec);

    // f*c = c^3*f for every constant c of F_9
    rep.section("SKEW");
    rep.kv("f", &f);
    rep.kv("scalars", all.len());
    let verified = all
        .iter()
        .filter(|lam| {
            let l = OrePoly::constant(RatFunc::constant((*lam).clone()));
            let lq = OrePoly::constant(RatFunc::constant(lam.frobenius(spec.e() as usize)));
            f.mul(&l) == lq.mul(&f)
        })
        .count();
    rep.kv("verified", verified);
    tally.status(rep, verified == all.len());

    // f^2 commutes with every constant, and 1 is the commutation exponent
    // for the module psi_t = f^2
    rep.section("EVEN_POWER");
    let f2 = f.pow(2);
    rep.kv("f2", &f2);
    let verified = all
        .iter()
        .filter(|lam| {
            let l = OrePoly::constant(RatFunc::constant((*lam).clone()));
            f2.mul(&l) == l.mul(&f2)
        })
        .count();
    rep.kv("verified", verified);
    let psi_mod = DrinfeldModule::new(f2)?;
    let ce = commutation_exponent(&psi_mod, &scalar_g(spec), 8);
    rep.kv("commutation_exponent", exponent_str(ce));
    tally.status(rep, verified == all.len() && ce == Some(1));

    // the odd binomial term blocks commutation with (1 + f)^{2n}
    rep.section("OBSTRUCTION");
    let lam = gen_elem(spec);
    let expected = [(2u32, 1u64, 2u64), (4, 3, 1), (6, 3, 2)];
    let mut pass = true;
    for n in 1..=3u32 {
        let r = verify_e35_obstruction(&f, &lam, n)?;
        let (two_n, p_power, binom) = expected[(n - 1) as usize];
        pass &= r.obstructed()
            && r.two_n == two_n
            && r.p_power == p_power
            && r.binom_mod_p == binom
            && r.odd_f_power;
        rep.kv(
            &format!("witness_{n}"),
            format!(
                "C({}, {}) = {} mod 3, commutator nonzero: {}",
                r.two_n, r.p_power, r.binom_mod_p, r.commutator_nonzero
            ),
        );
    }
    tally.status(rep, pass);

    // consequently no power of phi_t = f(1 + f) commutes with g
    rep.section("COMMUTATION");
    rep.kv("phi_t", m.phi_t());
    let psi = scalar_g(spec);
    rep.kv("psi", &psi);
    rep.kv("nmax", 6);
    let ce = commutation_exponent(&m, &psi, 6);
    rep.kv("n", exponent_str(ce));
    tally.status(rep, ce.is_none());
    Ok(())
}

fn example_lambda_p2(rep: &mut Reporter, tally: &mut Tally) -> Result<()> {
    let m = preset_module("example_lambda_p2")?;
    let spec = m.spec();
    let f: OrePoly<RatFunc> = oresharp_core::parse_ore(spec, "t*T + T^4")?;
    let outside: Vec<FFElem> = constants(spec)
        .into_iter()
        .filter(|c| c.frobenius(1) != *c)
        .collect();

    rep.section("SKEW");
    rep.kv("f", &f);
    rep.kv("scalars", outside.len());
    let mut pass = true;
    for lam in &outside {
        pass &= skew_exponent(&f, lam)? == Some(1);
    }
    rep.kv("skew_exponent", 1);
    tally.status(rep, pass && outside.len() == 6);

    rep.section("CUBE");
    let f3 = f.pow(3);
    let verified = outside
        .iter()
        .filter(|lam| {
            let l = OrePoly::constant(RatFunc::constant((*lam).clone()));
            f3.mul(&l) == l.mul(&f3)
        })
        .count();
    rep.kv("verified", verified);
    tally.status(rep, verified == outside.len());

    rep.section("COMMUTATION");
    rep.kv("phi_t", m.phi_t());
    let psi = scalar_g(spec);
    rep.kv("psi", &psi);
    rep.kv("nmax", 6);
    let ce = commutation_exponent(&m, &psi, 6);
    rep.kv("n", exponent_str(ce));
    tally.status(rep, ce.is_none());
    Ok(())
}

fn remark_sharp(rep: &mut Reporter, tally: &mut Tally, jobs: Jobs) -> Result<()> {
    let exp = preset_experiment("remark_sharp")?;
    let m = preset_module(&exp.module)?;
    let spec = m.spec();
    let gens = exp.gamma_points::<RatFunc>(spec)?;
    let gamma = PhiSubmodule::new(&m, gens[0].len(), gens.clone())?;
    let x: Variety<RatFunc> = exp.variety(spec, gens[0].len())?;

    rep.section("COMMUTE");
    let psi = scalar_g(spec);
    rep.kv("psi", &psi);
    rep.kv("nmax", 8);
    let ce = commutation_exponent(&m, &psi, 8);
    rep.kv("n", exponent_str(ce));
    tally.status(rep, ce == Some(2));

    rep.section("ENUMERATION");
    rep.kv("B", exp.b);
    let points = enumerate_gamma(&gamma, exp.b, jobs)?.len();
    rep.kv("points", points);
    tally.status(rep, points == 2187);

    rep.section("INTERSECTION");
    let inter = intersect(&x, &gamma, exp.b, jobs)?.len();
    rep.kv("points", inter);
    tally.status(rep, inter == 81);

    rep.section("INVARIANCE");
    rep.kv("nmax", exp.nmax);
    let inv = invariance_exponent(&x, &m, exp.nmax)?;
    rep.kv("exponent", inv.label());
    tally.status(rep, inv == Invariance::Certified(2));

    rep.section("DECOMPOSITION");
    let d = exp
        .decomposition::<RatFunc>(spec)?
        .ok_or_else(|| Error::Config("remark_sharp preset lost its decomposition".into()))?;
    let good = verify_decomposition(&x, &gamma, &d, exp.b, jobs)?;
    rep.kv("n0", 2);
    rep.kv("ok", good.ok);
    // the same coset with period 1 must fail, with a witness to show for it
    let refute = CosetDecomposition::new(vec![CosetPart::new(
        vec![RatFunc::zero(spec), RatFunc::zero(spec)],
        gens,
        1,
    )?]);
    let bad = verify_decomposition(&x, &gamma, &refute, exp.b, jobs)?;
    rep.kv("refute_n0", 1);
    rep.kv("refute_ok", bad.ok);
    let witness = bad.coset_outside.first();
    if let Some(w) = witness {
        rep.kv("refute_witness", crate::load::point_str(w));
    }
    tally.status(rep, good.ok && !bad.ok && witness.is_some());
    Ok(())
}

fn remark_important(rep: &mut Reporter, tally: &mut Tally, jobs: Jobs) -> Result<()> {
    let exp = preset_experiment("remark_important")?;
    let m = preset_module(&exp.module)?;
    let spec = m.spec();
    let gens = exp.gamma_points::<RatFunc>(spec)?;
    let gamma = PhiSubmodule::new(&m, gens[0].len(), gens.clone())?;
    let x: Variety<RatFunc> = exp.variety(spec, gens[0].len())?;

    rep.section("ENUMERATION");
    let e4 = enumerate_gamma(&gamma, 4, jobs)?.len();
    let e6 = enumerate_gamma(&gamma, 6, jobs)?.len();
    rep.kv("points_B4", e4);
    rep.kv("points_B6", e6);
    tally.status(rep, e4 == 243 && e6 == 2187);

    rep.section("INTERSECTION");
    let i4 = intersect(&x, &gamma, 4, jobs)?.len();
    let i6 = intersect(&x, &gamma, 6, jobs)?.len();
    rep.kv("points_B4", i4);
    rep.kv("points_B6", i6);
    rep.kv("strict_growth", i4 < i6);
    tally.status(rep, i4 == 27 && i6 == 81);

    rep.section("INVARIANCE");
    let a = exp
        .a_poly(spec)?
        .ok_or_else(|| Error::Config("remark_important preset lost its a-polynomial".into()))?;
    rep.kv("action", &a);
    rep.kv("nmax", exp.nmax);
    let mu = DrinfeldModule::new(m.phi_action(&a))?;
    let inv = invariance_exponent(&x, &mu, exp.nmax)?;
    rep.kv("exponent", inv.label());
    tally.status(
        rep,
        inv == Invariance::CertifiedNone { n_max: exp.nmax },
    );
    Ok(())
}
