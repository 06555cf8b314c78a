//! Experiment execution: the sectioned reports behind `intersect` and
//! `reduce`.

use oresharp_core::exec::Jobs;
use oresharp_core::{
    enumerate_gamma, intersect, invariance_exponent, reduction_injectivity_scan,
    verify_decomposition, DrinfeldModule, Error, Experiment, FieldElement, Invariance,
    PhiSubmodule, Place, PlaceStatus, RatFunc, Result, Variety,
};

use crate::load::{build_any, load_descriptor, load_experiment, point_str, HostModule};
use crate::report::Reporter;

/// Run the full experiment: enumeration, then intersection, invariance
/// and decomposition when the file declares a variety, then a reduction
/// scan when it lists places.  Returns true when a declared decomposition
/// failed to verify.
pub fn run_intersect(rep: &mut Reporter, reference: &str, jobs: Jobs) -> Result<bool> {
    let (exp, base) = load_experiment(reference)?;
    let desc = load_descriptor(&exp.module, base.as_deref())?;
    match build_any(&desc)? {
        HostModule::Finite(m) => {
            if exp.places_src.is_some() {
                return Err(Error::precondition(
                    "reduction scans need a ratfunc-mode module",
                ));
            }
            core_sections(rep, &exp, &m, jobs)
        }
        HostModule::Rational(m) => {
            let failed = core_sections(rep, &exp, &m, jobs)?;
            if let Some(places) = exp.places(m.spec())? {
                reduction_section(rep, &exp, &m, &places, jobs)?;
            }
            Ok(failed)
        }
    }
}

/// Enumeration plus the reduction scan only.
pub fn run_reduce(rep: &mut Reporter, reference: &str, jobs: Jobs) -> Result<()> {
    let (exp, base) = load_experiment(reference)?;
    let desc = load_descriptor(&exp.module, base.as_deref())?;
    let HostModule::Rational(m) = build_any(&desc)? else {
        return Err(Error::precondition(
            "reduction scans need a ratfunc-mode module",
        ));
    };
    let Some(places) = exp.places(m.spec())? else {
        return Err(Error::precondition(
            "the experiment file lists no places to scan",
        ));
    };
    reduction_section(rep, &exp, &m, &places, jobs)
}

fn core_sections<C: FieldElement>(
    rep: &mut Reporter,
    exp: &Experiment,
    m: &DrinfeldModule<C>,
    jobs: Jobs,
) -> Result<bool> {
    let spec = m.spec();
    let gens = exp.gamma_points::<C>(spec)?;
    let ambient = gens[0].len();
    let gamma = PhiSubmodule::new(m, ambient, gens)?;

    rep.section("ENUMERATION");
    rep.kv("module", &exp.module);
    rep.kv("phi_t", m.phi_t());
    rep.kv("generators", gamma.generators().len());
    rep.kv("B", exp.b);
    let points = enumerate_gamma(&gamma, exp.b, jobs)?;
    rep.kv("points", points.len());

    if exp.x_src.is_empty() {
        if exp.decomposition_src.is_some() {
            return Err(Error::precondition(
                "decomposition verification needs a variety: declare X",
            ));
        }
        return Ok(false);
    }
    let x: Variety<C> = exp.variety(spec, ambient)?;

    rep.section("INTERSECTION");
    rep.kv("equations", x.equations().len());
    let inter = intersect(&x, &gamma, exp.b, jobs)?;
    rep.kv("points", inter.len());

    rep.section("INVARIANCE");
    let inv = match exp.a_poly(spec)? {
        Some(a) => {
            rep.kv("action", &a);
            let mu = DrinfeldModule::new(m.phi_action(&a))?;
            invariance_exponent(&x, &mu, exp.nmax)?
        }
        None => {
            rep.kv("action", "t");
            invariance_exponent(&x, m, exp.nmax)?
        }
    };
    rep.kv("nmax", exp.nmax);
    rep.kv("exponent", inv.label());
    if let Invariance::Falsified(witnesses) = &inv {
        if let Some((n, w)) = witnesses.first() {
            rep.kv("witness", format!("n = {n} moves {}", point_str(w)));
        }
    }

    let mut failed = false;
    if let Some(d) = exp.decomposition::<C>(spec)? {
        rep.section("DECOMPOSITION");
        rep.kv("parts", d.parts().len());
        let report = verify_decomposition(&x, &gamma, &d, exp.b, jobs)?;
        rep.kv("ok", report.ok);
        rep.kv("intersection", report.intersection_size);
        rep.kv("covered", report.covered_size);
        if !report.ok {
            if let Some(w) = report.coset_outside.first() {
                rep.kv("outside_witness", point_str(w));
            }
            if let Some(w) = report.uncovered.first() {
                rep.kv("uncovered_witness", point_str(w));
            }
            failed = true;
        }
    }
    Ok(failed)
}

fn reduction_section(
    rep: &mut Reporter,
    exp: &Experiment,
    m: &DrinfeldModule<RatFunc>,
    places: &[Place],
    jobs: Jobs,
) -> Result<()> {
    let gens = exp.gamma_points::<RatFunc>(m.spec())?;
    let ambient = gens[0].len();
    let gamma = PhiSubmodule::new(m, ambient, gens)?;
    let scan = reduction_injectivity_scan(&gamma, places, exp.b, jobs)?;

    rep.section("REDUCTION");
    rep.kv("B", exp.b);
    rep.kv("points", scan.points);
    rep.kv("places", scan.reports.len());
    rep.kv("injective", scan.injective);
    rep.kv("non_injective", scan.non_injective);
    rep.kv("skipped", scan.skipped);
    for r in &scan.reports {
        let key = format!("place {}", r.place);
        match &r.status {
            PlaceStatus::Skipped { reason } => rep.kv(&key, format!("skipped ({reason})")),
            PlaceStatus::Injective => rep.kv(&key, "injective"),
            PlaceStatus::NonInjective {
                collisions,
                kernel_witnesses,
            } => {
                rep.kv(&key, format!("non-injective (collisions: {collisions})"));
                if let Some(w) = kernel_witnesses.first() {
                    rep.kv(&format!("witness {}", r.place), point_str(w));
                }
            }
        }
    }
    Ok(())
}
