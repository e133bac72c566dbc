//! Density of states: histograms of fitness over sampled rules.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Evaluator, FitnessOracle};
use crate::error::Error;
use crate::evaluation::Task;
use crate::olympus::OlympusTemplate;
use crate::rng::{self, tag};
use crate::rule::Rule;

/// One bin per distinguishable level at n = 10⁴ plus the two endpoints.
pub const DEFAULT_BINS: usize = 115;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sampler {
    Uniform,
    Metropolis { temperature: f64, burn_in: usize, thinning: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetropolisConfig {
    pub samples: usize,
    pub temperature: f64,
    pub burn_in: usize,
    pub thinning: usize,
    /// Initial state; a uniform draw from the sampled space when absent.
    pub start: Option<Rule>,
    pub bins: usize,
}

impl Default for MetropolisConfig {
    fn default() -> Self {
        MetropolisConfig {
            samples: 4000,
            temperature: 0.02,
            burn_in: 1000,
            thinning: 10,
            start: None,
            bins: DEFAULT_BINS,
        }
    }
}

impl MetropolisConfig {
    fn validate(&self) -> Result<(), Error> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1"));
        }
        if self.temperature.is_nan() || self.temperature <= 0.0 {
            return Err(Error::InvalidParameter("temperature must be positive"));
        }
        if self.thinning == 0 {
            return Err(Error::InvalidParameter("thinning must be at least 1"));
        }
        if self.bins == 0 {
            return Err(Error::InvalidParameter("bins must be at least 1"));
        }
        Ok(())
    }
}

/// Fitness histogram over `[0, 1]` in equal-width bins.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub sampler: Sampler,
    /// Bin edges, `bins + 1` of them.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Sampled fitness values in sampling order.
    pub values: Vec<f64>,
    /// Samples with fitness exactly zero.
    pub zeros: u64,
    /// Dimension of the sampled space (128 for the full space).
    pub dimension: usize,
    /// Accepted proposals over all proposals, for Metropolis chains.
    pub acceptance: Option<f64>,
}

impl Histogram {
    fn new(sampler: Sampler, bins: usize, dimension: usize) -> Self {
        Histogram {
            sampler,
            edges: (0..=bins).map(|i| i as f64 / bins as f64).collect(),
            counts: alloc::vec![0; bins],
            values: Vec::new(),
            zeros: 0,
            dimension,
            acceptance: None,
        }
    }

    fn record(&mut self, value: f64) {
        let bins = self.counts.len();
        let b = ((value * bins as f64) as usize).min(bins - 1);
        self.counts[b] += 1;
        if value == 0.0 {
            self.zeros += 1;
        }
        self.values.push(value);
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn zero_fraction(&self) -> f64 {
        self.zeros as f64 / self.total() as f64
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Fraction of samples with fitness in `[lo, hi]`.
    pub fn fraction_within(&self, lo: f64, hi: f64) -> f64 {
        let k = self.values.iter().filter(|&&v| v >= lo && v <= hi).count();
        k as f64 / self.total() as f64
    }
}

/// Uniform sampling of `samples` rules from `space`.
pub fn uniform_with<O: FitnessOracle + ?Sized>(
    oracle: &mut O,
    samples: usize,
    bins: usize,
    space: &OlympusTemplate,
    rng: &mut ChaCha8Rng,
) -> Result<Histogram, Error> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1"));
    }
    if bins == 0 {
        return Err(Error::InvalidParameter("bins must be at least 1"));
    }
    let rules: Vec<Rule> = (0..samples).map(|_| space.sample(rng)).collect();
    let mut h = Histogram::new(Sampler::Uniform, bins, space.dimension());
    for f in oracle.fitness_many(&rules) {
        h.record(f.value);
    }
    Ok(h)
}

/// Random-walk Metropolis over one-bit flips of the free positions of `space`.
pub fn metropolis_with<O: FitnessOracle + ?Sized>(
    oracle: &mut O,
    cfg: &MetropolisConfig,
    space: &OlympusTemplate,
    rng: &mut ChaCha8Rng,
) -> Result<Histogram, Error> {
    cfg.validate()?;
    let free = space.free_positions();
    if free.is_empty() {
        return Err(Error::InvalidParameter("template has no free positions"));
    }
    let mut x = match cfg.start {
        Some(r) => {
            space.project(r)?;
            r
        }
        None => space.sample(rng),
    };
    let mut fx = oracle.fitness(x).value;
    let sampler = Sampler::Metropolis {
        temperature: cfg.temperature,
        burn_in: cfg.burn_in,
        thinning: cfg.thinning,
    };
    let mut h = Histogram::new(sampler, cfg.bins, space.dimension());
    let (mut proposals, mut accepted) = (0u64, 0u64);
    let mut t = 0usize;
    while h.values.len() < cfg.samples {
        let k = free[rng.random_range(0..free.len())] as usize;
        let y = x.flip(k);
        let fy = oracle.fitness(y).value;
        proposals += 1;
        let accept = fy >= fx || rng.random::<f64>() < libm::exp((fy - fx) / cfg.temperature);
        if accept {
            x = y;
            fx = fy;
            accepted += 1;
        }
        t += 1;
        if t > cfg.burn_in && (t - cfg.burn_in).is_multiple_of(cfg.thinning) {
            h.record(fx);
        }
    }
    h.acceptance = Some(accepted as f64 / proposals as f64);
    Ok(h)
}

/// Uniform density of states on the default task. `seed` keys both the
/// rule draws and the configuration sample shared by all rules.
pub fn dos_uniform(
    samples: usize,
    n: u64,
    seed: u64,
    subspace: Option<&OlympusTemplate>,
) -> Result<Histogram, Error> {
    let full = OlympusTemplate::full_space();
    let space = subspace.unwrap_or(&full);
    let mut e = Evaluator::new(Task::default(), n, seed);
    uniform_with(&mut e, samples, DEFAULT_BINS, space, &mut rng::rng(seed, tag::DOS, 0))
}

/// Metropolis density of states on the default task.
pub fn dos_metropolis(
    cfg: &MetropolisConfig,
    n: u64,
    seed: u64,
    subspace: Option<&OlympusTemplate>,
) -> Result<Histogram, Error> {
    let full = OlympusTemplate::full_space();
    let space = subspace.unwrap_or(&full);
    let mut e = Evaluator::new(Task::default(), n, seed);
    metropolis_with(&mut e, cfg, space, &mut rng::rng(seed, tag::METROPOLIS, 0))
}
