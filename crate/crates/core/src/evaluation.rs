//! Standard performance and the statistical neutrality test.
//!
//! A rule's fitness is the fraction of binomially sampled initial
//! configurations it relaxes to the uniform state of their majority. Because
//! the sample is finite the fitness is an estimate with Bernoulli variance
//! `f (1 - f) / n`, and two rules are neutral when a two-sided 95% test cannot
//! tell their estimates apart.

use alloc::vec::Vec;

use rand::RngCore;

use crate::engine::{Circuit, LANES, DEFAULT_MAX_STEPS};
use crate::lattice::{Configuration, DEFAULT_WIDTH};
use crate::rng::{self, tag};
use crate::rule::{Rule, TABLE_LEN};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

/// Sample size used for the published standard performances.
pub const STANDARD_SAMPLE: u64 = 10_000;

/// A measured standard performance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitnessEstimate {
    /// Fraction of correctly classified configurations.
    pub value: f64,
    /// Number of configurations sampled.
    pub n: u64,
    /// Seed of the configuration sample.
    pub seed: u64,
}

impl FitnessEstimate {
    pub fn from_count(correct: u64, n: u64, seed: u64) -> Self {
        assert!(n >= 1 && correct <= n);
        FitnessEstimate { value: correct as f64 / n as f64, n, seed }
    }

    /// An estimate with a given value, for comparisons against reference
    /// figures. The seed is zero.
    pub fn with_value(value: f64, n: u64) -> Self {
        assert!(n >= 1 && (0.0..=1.0).contains(&value));
        FitnessEstimate { value, n, seed: 0 }
    }

    pub fn correct(&self) -> u64 {
        libm::round(self.value * self.n as f64) as u64
    }

    /// Bernoulli variance `f (1 - f)` of a single classification.
    pub fn variance(&self) -> f64 {
        self.value * (1.0 - self.value)
    }

    pub fn std_error(&self) -> f64 {
        libm::sqrt(self.variance() / self.n as f64)
    }
}

/// True when the two estimates are statistically indistinguishable at 95%.
pub fn is_neutral(a: &FitnessEstimate, b: &FitnessEstimate) -> bool {
    let spread = libm::sqrt(a.variance() / a.n as f64 + b.variance() / b.n as f64);
    libm::fabs(a.value - b.value) <= Z_95 * spread
}

/// Greedy chain of mutually distinguishable fitness levels in `[0, 1]`.
///
/// Starting at 0, each next level is the smallest value the neutrality test
/// separates from the previous one. Returns the chain length and the levels.
pub fn distinguishable_levels(n: u64) -> (usize, Vec<f64>) {
    assert!(n >= 1);
    let n = n as f64;
    let mut levels = alloc::vec![0.0f64];
    loop {
        let f = *levels.last().unwrap();
        let v = f * (1.0 - f);
        // Convex in g, non-positive at g = f: one crossing to the right.
        let gap = |g: f64| g - f - Z_95 * libm::sqrt((v + g * (1.0 - g)) / n);
        if gap(1.0) < 0.0 {
            break;
        }
        let mut lo = if f > 0.0 { f } else { f64::MIN_POSITIVE };
        let mut hi = 1.0;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        levels.push(hi);
    }
    (levels.len(), levels)
}

/// Binomial initial configurations, addressable by index.
///
/// Configurations come in packed batches of 64: batch `b` is drawn from its
/// own ChaCha stream keyed by `(seed, b)`, one word per cell, so every cell
/// of every lane is an independent fair bit. Configuration `i` is lane
/// `i % 64` of batch `i / 64`, independent of how batches are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IcSampler {
    pub seed: u64,
    pub width: usize,
}

impl IcSampler {
    pub fn new(seed: u64, width: usize) -> Self {
        IcSampler { seed, width }
    }

    /// Packed batch `b`: one word per cell, one configuration per bit.
    pub fn batch(&self, b: u64) -> Vec<u64> {
        let mut rng = rng::rng(self.seed, tag::ICS, b);
        (0..self.width).map(|_| rng.next_u64()).collect()
    }

    pub fn sample(&self, index: u64) -> Configuration {
        let words = self.batch(index / LANES as u64);
        let lane = index % LANES as u64;
        let cells = words.iter().map(|w| (w >> lane) & 1 == 1).collect();
        Configuration::new(cells).expect("sampler width is odd")
    }
}

/// Lanes whose configuration has more ones than zeros.
fn majority_lanes(words: &[u64]) -> u64 {
    let mut counts = [0u16; LANES];
    for &w in words {
        for (lane, c) in counts.iter_mut().enumerate() {
            *c += ((w >> lane) & 1) as u16;
        }
    }
    let half = (words.len() / 2) as u16;
    counts
        .iter()
        .enumerate()
        .fold(0u64, |m, (lane, &c)| if c > half { m | (1 << lane) } else { m })
}

/// Lattice width and relaxation budget of the task.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Task {
    pub width: usize,
    pub max_steps: u32,
}

impl Default for Task {
    fn default() -> Self {
        Task { width: DEFAULT_WIDTH, max_steps: DEFAULT_MAX_STEPS }
    }
}

impl Task {
    pub fn new(width: usize, max_steps: u32) -> Result<Self, crate::Error> {
        if width.is_multiple_of(2) {
            return Err(crate::Error::EvenWidth(width));
        }
        if max_steps == 0 {
            return Err(crate::Error::InvalidParameter("max_steps must be at least 1"));
        }
        Ok(Task { width, max_steps })
    }

    pub fn sampler(&self, seed: u64) -> IcSampler {
        IcSampler::new(seed, self.width)
    }

    /// Fraction of `n` sampled configurations relaxed to the uniform state of
    /// their majority. Undecided runs count as misclassified.
    pub fn standard_performance(&self, rule: Rule, n: u64, seed: u64) -> FitnessEstimate {
        assert!(n >= 1, "sample size must be positive");
        let circuit = Circuit::compile(rule);
        let sampler = self.sampler(seed);
        let batches = n.div_ceil(LANES as u64);
        let correct = self.count_batches(&circuit, &sampler, n, batches);
        FitnessEstimate::from_count(correct, n, seed)
    }

    fn batch_correct(&self, circuit: &Circuit, sampler: &IcSampler, n: u64, b: u64) -> u64 {
        let mut words = sampler.batch(b);
        let remaining = n - b * LANES as u64;
        let lanes = if remaining >= LANES as u64 { u64::MAX } else { (1u64 << remaining) - 1 };
        let majority = majority_lanes(&words);
        // A lane whose majority state is not a fixed point can never be correct.
        let rule = circuit.rule();
        let reachable = if rule.output(0) { 0 } else { !majority }
            | if rule.output(TABLE_LEN - 1) { majority } else { 0 };
        let lanes = lanes & reachable;
        if lanes == 0 {
            return 0;
        }
        let out = circuit.simulator(self.width).run(&mut words, lanes, self.max_steps);
        (((out.ones & majority) | (out.zeros & !majority)) & lanes).count_ones() as u64
    }

    #[cfg(not(feature = "parallel"))]
    fn count_batches(&self, circuit: &Circuit, sampler: &IcSampler, n: u64, batches: u64) -> u64 {
        (0..batches).map(|b| self.batch_correct(circuit, sampler, n, b)).sum()
    }

    #[cfg(feature = "parallel")]
    fn count_batches(&self, circuit: &Circuit, sampler: &IcSampler, n: u64, batches: u64) -> u64 {
        use rayon::prelude::*;
        (0..batches).into_par_iter().map(|b| self.batch_correct(circuit, sampler, n, b)).sum()
    }
}

/// Standard performance on the default 149-cell task.
pub fn standard_performance(rule: Rule, n: u64, seed: u64) -> FitnessEstimate {
    Task::default().standard_performance(rule, n, seed)
}
