//! Fitness landscape of the cellular-automata majority (density classification) task.
//!
//! The crate is split along the experiment pipeline:
//!
//! * [`rule`] and [`lattice`]: radius-3 rule tables and ring configurations.
//! * [`engine`]: scalar and bitsliced simulation of a rule on a ring.
//! * [`evaluation`]: initial-configuration sampling, standard performance and
//!   the statistical neutrality test.
//! * [`landscape`]: one-bit neighborhoods, neutral degree, neutral walks,
//!   autocorrelation and density-of-states samplers.
//! * [`symmetry`] and [`olympus`]: the 0/1 and right/left symmetries and the
//!   template subspace built from the best known rules.
//! * [`evolution`]: a genetic algorithm restricted to a template subspace.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. The `parallel` feature evaluates initial configurations and
//! neighbor sets with rayon; results do not depend on it.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod evaluation;
pub mod evolution;
pub mod landscape;
pub mod lattice;
pub mod olympus;
pub mod rng;
pub mod rule;
pub mod symmetry;

pub use engine::{classify_batch, evolve, step, Outcome, DEFAULT_MAX_STEPS};
pub use error::Error;
pub use evaluation::{
    distinguishable_levels, is_neutral, standard_performance, FitnessEstimate, IcSampler, Task,
};
pub use lattice::{Configuration, DEFAULT_WIDTH};
pub use rule::Rule;
pub use olympus::{Genotype, OlympusTemplate};
