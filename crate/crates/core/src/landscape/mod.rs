//! Landscape instruments over the one-bit-flip neighborhood.
//!
//! All fitness values inside one experiment come from a single [`Evaluator`]:
//! one task, one sample size and one configuration sample, shared by every
//! rule (common random numbers), with each rule evaluated once.

mod acf;
mod dos;
mod walk;

pub use acf::{autocorrelation, mean_autocorrelation};
pub use dos::{
    dos_metropolis, dos_uniform, metropolis_with, uniform_with, Histogram, MetropolisConfig,
    Sampler, DEFAULT_BINS,
};
pub use walk::{
    expanding_neutral_walk, expanding_walk_with, random_neutral_walk, random_walk_with,
    NeutralityCheck, WalkOptions, WalkRecord,
};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::evaluation::{is_neutral, FitnessEstimate, Task};
use crate::rule::{Rule, TABLE_LEN};

/// The 128 one-bit mutants of `r`, mutant `k` having code `k` flipped.
pub fn neighbors(r: Rule) -> Vec<Rule> {
    (0..TABLE_LEN).map(|k| r.flip(k)).collect()
}

/// Source of fitness estimates for walks and samplers.
pub trait FitnessOracle {
    fn fitness(&mut self, r: Rule) -> FitnessEstimate;

    fn fitness_many(&mut self, rules: &[Rule]) -> Vec<FitnessEstimate> {
        rules.iter().map(|&r| self.fitness(r)).collect()
    }

    /// Number of the 128 neighbors of `r` neutral to `r`.
    fn neutral_degree(&mut self, r: Rule) -> u32 {
        let own = self.fitness(r);
        self.fitness_many(&neighbors(r)).iter().filter(|f| is_neutral(&own, f)).count() as u32
    }
}

/// Memoizing standard-performance oracle for one experiment.
#[derive(Clone, Debug)]
pub struct Evaluator {
    task: Task,
    n: u64,
    seed: u64,
    cache: BTreeMap<Rule, FitnessEstimate>,
}

impl Evaluator {
    pub fn new(task: Task, n: u64, seed: u64) -> Self {
        assert!(n >= 1, "sample size must be positive");
        Evaluator { task, n, seed, cache: BTreeMap::new() }
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn sample_size(&self) -> u64 {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Distinct rules evaluated so far.
    pub fn evaluations(&self) -> usize {
        self.cache.len()
    }
}

impl FitnessOracle for Evaluator {
    fn fitness(&mut self, r: Rule) -> FitnessEstimate {
        let (task, n, seed) = (self.task, self.n, self.seed);
        *self.cache.entry(r).or_insert_with(|| task.standard_performance(r, n, seed))
    }

    /// Uncached rules are evaluated concurrently with the `parallel` feature.
    fn fitness_many(&mut self, rules: &[Rule]) -> Vec<FitnessEstimate> {
        let mut missing: Vec<Rule> =
            rules.iter().copied().filter(|r| !self.cache.contains_key(r)).collect();
        missing.sort_unstable();
        missing.dedup();
        let (task, n, seed) = (self.task, self.n, self.seed);
        #[cfg(feature = "parallel")]
        let fresh: Vec<FitnessEstimate> = {
            use rayon::prelude::*;
            missing.par_iter().map(|&r| task.standard_performance(r, n, seed)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let fresh: Vec<FitnessEstimate> =
            missing.iter().map(|&r| task.standard_performance(r, n, seed)).collect();
        self.cache.extend(missing.into_iter().zip(fresh));
        rules.iter().map(|r| self.cache[r]).collect()
    }
}

/// Neutral degree of `r` on the default task, neighbors sharing the sample.
pub fn neutral_degree(r: Rule, n: u64, seed: u64) -> u32 {
    Evaluator::new(Task::default(), n, seed).neutral_degree(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::known;

    #[test]
    fn neighbors_of_zero_rule() {
        let ns = neighbors(Rule::ZERO);
        assert_eq!(ns.len(), 128);
        assert!(ns.iter().all(|r| r.count_ones() == 1));
        let mut sorted = ns.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 128);
    }

    #[test]
    fn neighbor_flip_is_involution() {
        let r = Rule::from_hex(known::COE1).unwrap();
        for (k, n) in neighbors(r).into_iter().enumerate() {
            assert_eq!(r.hamming(n), 1);
            assert_eq!(neighbors(n)[k], r);
        }
    }

    #[test]
    fn evaluator_caches() {
        let mut e = Evaluator::new(Task::default(), 200, 1);
        let r = Rule::from_hex(known::GKL).unwrap();
        let a = e.fitness(r);
        let b = e.fitness_many(&[r, r, Rule::ZERO]);
        assert_eq!(e.evaluations(), 2);
        assert_eq!(a, b[0]);
        assert_eq!(a, b[1]);
    }

    #[test]
    fn constant_zero_rule_has_high_degree() {
        let d = neutral_degree(Rule::ZERO, 1000, 5);
        assert!(d >= 70, "{d}");
        assert_eq!(d, neutral_degree(Rule::ZERO, 1000, 5));
    }
}
