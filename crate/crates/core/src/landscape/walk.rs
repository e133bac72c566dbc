use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{neighbors, Evaluator, FitnessOracle};
use crate::evaluation::{is_neutral, FitnessEstimate, Task};
use crate::rng::{self, tag};
use crate::rule::{Rule, TABLE_LEN};

/// Which visited rules a step must be neutral to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NeutralityCheck {
    /// Every rule visited so far, as a neutral walk requires.
    #[default]
    AllVisited,
    /// Only the current rule.
    CurrentOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct WalkOptions {
    pub check: NeutralityCheck,
    /// Record the neutral degree of every visited rule.
    pub record_degrees: bool,
}

/// Trace of a neutral walk.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkRecord {
    pub rules: Vec<Rule>,
    pub fitnesses: Vec<FitnessEstimate>,
    pub degrees: Option<Vec<u32>>,
    /// Hamming distance of each visited rule from the start.
    pub distances: Vec<u32>,
}

impl WalkRecord {
    fn start(rule: Rule, f: FitnessEstimate, degree: Option<u32>) -> Self {
        WalkRecord {
            rules: alloc::vec![rule],
            fitnesses: alloc::vec![f],
            degrees: degree.map(|d| alloc::vec![d]),
            distances: alloc::vec![0],
        }
    }

    fn push(&mut self, rule: Rule, f: FitnessEstimate, degree: Option<u32>) {
        self.distances.push(self.rules[0].hamming(rule));
        self.rules.push(rule);
        self.fitnesses.push(f);
        if let (Some(ds), Some(d)) = (self.degrees.as_mut(), degree) {
            ds.push(d);
        }
    }

    /// Number of steps taken.
    pub fn len(&self) -> usize {
        self.rules.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degrees_f64(&self) -> Option<Vec<f64>> {
        self.degrees.as_ref().map(|d| d.iter().map(|&x| x as f64).collect())
    }
}

fn acceptable(
    check: NeutralityCheck,
    candidate: &FitnessEstimate,
    current: &FitnessEstimate,
    visited: &[FitnessEstimate],
) -> bool {
    match check {
        NeutralityCheck::CurrentOnly => is_neutral(current, candidate),
        NeutralityCheck::AllVisited => visited.iter().all(|f| is_neutral(f, candidate)),
    }
}

/// Walk away from `start`, each step flipping a bit still equal to the
/// start's. Candidates are tried in random order and the first neutral
/// one is taken; the walk ends when none is, after at most 128 steps.
pub fn expanding_walk_with<O: FitnessOracle + ?Sized>(
    oracle: &mut O,
    start: Rule,
    rng: &mut ChaCha8Rng,
    options: WalkOptions,
) -> WalkRecord {
    let degree = |o: &mut O, r| options.record_degrees.then(|| o.neutral_degree(r));
    let f0 = oracle.fitness(start);
    let d0 = degree(oracle, start);
    let mut walk = WalkRecord::start(start, f0, d0);
    let mut current = start;
    loop {
        let mut candidates: Vec<usize> =
            (0..TABLE_LEN).filter(|&k| current.output(k) == start.output(k)).collect();
        candidates.shuffle(rng);
        let here = *walk.fitnesses.last().unwrap();
        let next = candidates.into_iter().map(|k| current.flip(k)).find_map(|cand| {
            let f = oracle.fitness(cand);
            acceptable(options.check, &f, &here, &walk.fitnesses).then_some((cand, f))
        });
        let Some((cand, f)) = next else { break };
        let d = degree(oracle, cand);
        walk.push(cand, f, d);
        current = cand;
    }
    walk
}

/// Random neutral walk of at most `steps` moves. Each move picks uniformly
/// among the acceptable neighbors and stops early when there is none. The
/// neutral degree of every visited rule is recorded.
pub fn random_walk_with<O: FitnessOracle + ?Sized>(
    oracle: &mut O,
    start: Rule,
    steps: usize,
    rng: &mut ChaCha8Rng,
    check: NeutralityCheck,
) -> WalkRecord {
    let f0 = oracle.fitness(start);
    let d0 = oracle.neutral_degree(start);
    let mut walk = WalkRecord::start(start, f0, Some(d0));
    let mut current = start;
    for _ in 0..steps {
        let here = *walk.fitnesses.last().unwrap();
        let ns = neighbors(current);
        let fs = oracle.fitness_many(&ns);
        let options: Vec<(Rule, FitnessEstimate)> = ns
            .into_iter()
            .zip(fs)
            .filter(|(r, f)| !walk.rules.contains(r) && acceptable(check, f, &here, &walk.fitnesses))
            .collect();
        if options.is_empty() {
            break;
        }
        let (next, f) = options[rng.random_range(0..options.len())];
        let d = oracle.neutral_degree(next);
        walk.push(next, f, Some(d));
        current = next;
    }
    walk
}

/// Expanding neutral walk on the default task; `seed` keys both the
/// configuration sample and the walk.
pub fn expanding_neutral_walk(start: Rule, n: u64, seed: u64) -> WalkRecord {
    let mut e = Evaluator::new(Task::default(), n, seed);
    expanding_walk_with(&mut e, start, &mut rng::rng(seed, tag::WALK, 0), WalkOptions::default())
}

/// Random neutral walk on the default task, recording neutral degrees.
pub fn random_neutral_walk(start: Rule, steps: usize, n: u64, seed: u64) -> WalkRecord {
    let mut e = Evaluator::new(Task::default(), n, seed);
    let mut rng = rng::rng(seed, tag::WALK, 0);
    random_walk_with(&mut e, start, steps, &mut rng, NeutralityCheck::AllVisited)
}
