//! `oresharp`: exact computations with Drinfeld modules of finite
//! characteristic — twisted-polynomial arithmetic, torsion kernels,
//! stabilized image chains, commutation searches, λ-function calculus
//! and desk-scale intersection experiments.
//!
//! Exit codes: 0 on success, 1 on a mathematical failure (a regression
//! in a bundle, a decomposition that does not verify), 2 on bad input.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use oresharp_core::Error;

mod bundles;
mod commands;
mod exp;
mod load;
mod presets;
mod report;

use commands::OreOp;
use load::{build_any, jobs_arg, load_descriptor, HostModule};
use report::{Format, Reporter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    JsonLines,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::JsonLines => Format::JsonLines,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "oresharp",
    version,
    about = "Exact arithmetic for Drinfeld modules: twisted polynomials, torsion, \
             sharp chains, lambda calculus and intersection experiments"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Worker threads for enumeration-heavy subcommands (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a field-element expression in a module's host field.
    Eval {
        /// Module descriptor: preset name or file path.
        #[arg(long)]
        module: String,
        /// Element expression, e.g. "(t^2 + 1)/(t + 1)" or "g + 1".
        expr: String,
        /// Apply phi_a to the value, for a in F_q[t], e.g. "t + t^2".
        #[arg(long)]
        apply: Option<String>,
    },
    /// Twisted-polynomial arithmetic and evaluation.
    Ore {
        #[arg(long)]
        module: String,
        /// Twisted polynomial in T, e.g. "t*T + T^3".
        #[arg(long)]
        f: String,
        /// Second operand.
        #[arg(long)]
        g: Option<String>,
        /// Operation combining f and g.
        #[arg(long, value_enum, default_value_t = OreOp::Mul)]
        op: OreOp,
        /// Evaluate f at this element.
        #[arg(long, conflicts_with = "g")]
        at: Option<String>,
    },
    /// Torsion kernel of phi_a inside the search field F_{q^{mN}}.
    Torsion {
        #[arg(long)]
        module: String,
        /// Annihilator a in F_q[t].
        #[arg(long)]
        a: String,
        /// Search-field degree over the constant field.
        #[arg(long = "N")]
        n: u32,
    },
    /// Stabilized image chain of phi_t inside the search field.
    Sharp {
        #[arg(long)]
        module: String,
        #[arg(long = "N")]
        n: u32,
        /// Compare the chain of phi_t against this twisted polynomial.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Smallest n with psi*phi_{t^n} = phi_{t^n}*psi.
    Commute {
        #[arg(long)]
        module: String,
        /// Candidate endomorphism, e.g. "g*T^0".
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
    },
    /// Lambda-polynomial normal forms, composition and clearance.
    Lambda {
        #[arg(long)]
        module: String,
        /// Lambda expression, e.g. "t * L1 L0 F^2".
        expr: Option<String>,
        /// Evaluate the expression at this element.
        #[arg(long)]
        eval: Option<String>,
        /// Compose with a twisted polynomial on the right.
        #[arg(long)]
        compose: Option<String>,
        /// Search the clearance exponent up to this bound.
        #[arg(long)]
        clearance: Option<u32>,
        /// Print the lambda-coordinates of this element.
        #[arg(long)]
        decompose: Option<String>,
    },
    /// Run an experiment file: enumeration, intersection, invariance,
    /// decomposition and reduction sections.
    Intersect {
        /// Experiment file: preset name or file path.
        #[arg(long)]
        experiment: String,
    },
    /// Reduction-injectivity scan over an experiment's places.
    Reduce {
        #[arg(long)]
        experiment: String,
    },
    /// Run a shipped bundle and check its expected results.
    Bundle {
        /// Bundle name; see --list.
        name: Option<String>,
        /// List the shipped bundles.
        #[arg(long)]
        list: bool,
    },
}

fn run(cli: &Cli) -> Result<(String, bool), Error> {
    let jobs = jobs_arg(cli.jobs);
    let mut rep = Reporter::new(cli.format.into());
    let mut failed = false;
    match &cli.cmd {
        Cmd::Eval {
            module,
            expr,
            apply,
        } => match build_any(&load_descriptor(module, None)?)? {
            HostModule::Finite(m) => commands::eval(&mut rep, &m, expr, apply.as_deref())?,
            HostModule::Rational(m) => commands::eval(&mut rep, &m, expr, apply.as_deref())?,
        },
        Cmd::Ore {
            module,
            f,
            g,
            op,
            at,
        } => match build_any(&load_descriptor(module, None)?)? {
            HostModule::Finite(m) => {
                commands::ore(&mut rep, &m, f, g.as_deref(), *op, at.as_deref())?
            }
            HostModule::Rational(m) => {
                commands::ore(&mut rep, &m, f, g.as_deref(), *op, at.as_deref())?
            }
        },
        Cmd::Torsion { module, a, n } => match build_any(&load_descriptor(module, None)?)? {
            HostModule::Finite(m) => commands::torsion(&mut rep, &m, a, *n)?,
            HostModule::Rational(_) => {
                return Err(Error::precondition(
                    "torsion search needs a finite-mode module",
                ))
            }
        },
        Cmd::Sharp { module, n, compare } => match build_any(&load_descriptor(module, None)?)? {
            HostModule::Finite(m) => commands::sharp_cmd(&mut rep, &m, *n, compare.as_deref())?,
            HostModule::Rational(_) => {
                return Err(Error::precondition(
                    "sharp chains need a finite-mode module",
                ))
            }
        },
        Cmd::Commute { module, psi, nmax } => {
            match build_any(&load_descriptor(module, None)?)? {
                HostModule::Finite(m) => commands::commute(&mut rep, &m, psi, *nmax)?,
                HostModule::Rational(m) => commands::commute(&mut rep, &m, psi, *nmax)?,
            }
        }
        Cmd::Lambda {
            module,
            expr,
            eval,
            compose,
            clearance,
            decompose,
        } => match build_any(&load_descriptor(module, None)?)? {
            HostModule::Rational(m) => commands::lambda(
                &mut rep,
                &m,
                expr.as_deref(),
                eval.as_deref(),
                compose.as_deref(),
                *clearance,
                decompose.as_deref(),
            )?,
            HostModule::Finite(_) => return Err(Error::PerfectHostField),
        },
        Cmd::Intersect { experiment } => {
            failed = exp::run_intersect(&mut rep, experiment, jobs)?;
        }
        Cmd::Reduce { experiment } => {
            exp::run_reduce(&mut rep, experiment, jobs)?;
        }
        Cmd::Bundle { name, list } => match (name, list) {
            (_, true) => {
                for b in bundles::NAMES {
                    rep.kv("bundle", b);
                }
            }
            (Some(name), false) => {
                failed = bundles::run(name, &mut rep, jobs)?;
            }
            (None, false) => {
                return Err(Error::Config(
                    "bundle needs a name or --list".into(),
                ))
            }
        },
    }
    Ok((rep.finish(), failed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, failed)) => {
            print!("{report}");
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
