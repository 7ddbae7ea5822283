//! hardylab: numerical estimation of Hardy numbers of unbounded plane domains.
//!
//! The Hardy number of a domain Ω measures the best integrability exponent
//! shared by all holomorphic maps of the unit disk into Ω. For many concrete
//! domains (sectors, logarithmic spiral domains, half planes, complements of
//! compact sets) it has a closed form; for everything else this crate
//! estimates it from the decay rate of harmonic measure seen from a base
//! point: the probability that Brownian motion escapes to distance R before
//! hitting the boundary scales like R^{−h} and the exponent h is recovered by
//! a weighted log-log fit over a geometric ladder of radii.
//!
//! Modules:
//! - [`maps`]: conformal and quasiconformal model maps (power, fold, sector).
//! - [`domain`]: domain descriptions, membership, certified distance lower
//!   bounds, angular statistics and circular symmetrization.
//! - [`walk`]: walk-on-spheres sampler for harmonic measure, deterministic
//!   under any parallel schedule.
//! - [`hardy`]: radius ladders, exponent fitting, closed forms, starlike
//!   (maximal-arc) estimates and analytic bound intervals.
//! - [`hnorm`]: Hardy exponents of explicit analytic maps on the disk via
//!   integral means.
//! - [`modulus`]: annulus modulus bounds for quasiconformal images from
//!   integrals of directional distortion.
//! - [`config`] / [`report`]: CLI configuration schema and machine-readable
//!   output files.
//! - [`verify`]: the self-check suite behind `hardylab verify`.

pub mod config;
pub mod domain;
pub mod error;
pub mod hardy;
pub mod hnorm;
pub mod maps;
pub mod modulus;
pub mod report;
pub mod rng;
pub mod serde_util;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
pub use num_complex::Complex64;
