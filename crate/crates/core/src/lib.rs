//! Exact arithmetic for Drinfeld modules of finite characteristic.
//!
//! The crate is organized around a host field `K` — either a finite field
//! `F_{q^m}` or the rational function field `F_{q^m}(t)` — and the twisted
//! polynomial ring `K{τ}` with the commutation law `τ·c = c^q·τ`.  On top of
//! that sit Drinfeld modules `φ: F_q[t] → K{τ}`, their torsion kernels inside
//! finite search fields, the stabilized image chains ("sharp groups") that
//! detect the prime-to-characteristic part, the λ-function calculus on
//! imperfect hosts, and desk-scale Mordell–Lang experiments (finitely
//! generated φ-submodules intersected with affine varieties).
//!
//! Everything is exact: no floating point, no probabilistic identity testing.
//! Randomness appears only in tests, always behind fixed seeds.

pub mod error;
pub mod fp;
pub mod basefield;
pub mod linalg;
pub mod tower;
pub mod ore;
pub mod drinfeld;
pub mod lambda;
pub mod sharp;
pub mod mordell;
pub mod parse;
pub mod config;
pub mod exec;

pub use basefield::{FieldSpec, FieldElement, FFElem, RatFunc, TPoly, Place, Mode};
pub use config::{Experiment, ModuleDescriptor};
pub use drinfeld::{divisible_by_tm, CharClass, DrinfeldModule, FqPoly, TorsionSet};
pub use error::Error;
pub use mordell::{
    claim2_bound, enumerate_gamma, intersect, invariance_exponent, invariance_exponent_sampled,
    reduction_injectivity_scan, verify_decomposition, CosetDecomposition, CosetPart,
    DecompositionReport, Invariance, MPoly, PhiSubmodule, PlaceReport, PlaceStatus, ReductionScan,
    Variety,
};
pub use lambda::{
    clearance_exponent, lambda_decompose, lambda_reconstruct, lp_compose_ore, LambdaPoly,
    LambdaWord, Tau0Poly,
};
pub use ore::OrePoly;
pub use parse::{parse_element, parse_fq_poly, parse_lambda, parse_mpoly, parse_ore, parse_point};
pub use sharp::{
    commutation_exponent, is_endomorphism, periodic_points, sharp, sharp_compare, sharp_of_ore,
    skew_exponent, verify_e35_obstruction, E35Report, SharpCompare, SharpGroup,
};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
