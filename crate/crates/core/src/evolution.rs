//! Generational genetic algorithm inside a template subspace.
//!
//! Individuals are genotypes over the free positions of the template, so
//! every rule the search touches agrees with the template's fixed bits.
//! Each generation is scored on a fresh configuration sample shared by the
//! whole population, and parents are picked by binary tournaments that
//! toss a coin when the two fitness estimates are statistically neutral.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::Error;
use crate::evaluation::{is_neutral, FitnessEstimate, Task};
use crate::olympus::{Genotype, OlympusTemplate};
use crate::rng::{self, tag};
use crate::rule::Rule;

#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    /// Configurations per fitness evaluation during the run.
    pub n_gen: u64,
    /// Flip probability of each free bit.
    pub mutation_rate: f64,
    /// Probability that a child is a uniform crossover of two parents.
    pub crossover_rate: f64,
    /// Best individuals copied unchanged into the next generation.
    pub elitism: usize,
    /// Configurations for the final re-evaluation.
    pub n_final: u64,
    /// Leaders of the last population added to the best-of-run candidates.
    pub finalists: usize,
    pub template: OlympusTemplate,
    pub task: Task,
    pub seed: u64,
}

impl GaConfig {
    pub fn new(template: OlympusTemplate, seed: u64) -> Self {
        let free = template.dimension().max(1) as f64;
        GaConfig {
            population: 100,
            generations: 100,
            n_gen: 100,
            mutation_rate: (2.0 / free).min(1.0),
            crossover_rate: 0.6,
            elitism: 1,
            n_final: 10_000,
            finalists: 5,
            template,
            task: Task::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if self.population < 2 {
            return Err(Error::InvalidParameter("population must be at least 2"));
        }
        if self.generations == 0 {
            return Err(Error::InvalidParameter("generations must be at least 1"));
        }
        if !unit(self.mutation_rate) || !unit(self.crossover_rate) {
            return Err(Error::InvalidParameter("probabilities must lie in [0, 1]"));
        }
        if self.elitism >= self.population {
            return Err(Error::InvalidParameter("elitism must be below the population size"));
        }
        if self.n_gen == 0 || self.n_final == 0 {
            return Err(Error::InvalidParameter("sample sizes must be at least 1"));
        }
        if self.finalists == 0 {
            return Err(Error::InvalidParameter("finalists must be at least 1"));
        }
        Ok(())
    }
}

/// Population statistics of one generation at `n_gen`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    /// Running maximum of `best`.
    pub best_so_far: f64,
    pub best_rule: Rule,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaResult {
    pub best: Rule,
    /// Fitness of `best` at `n_final` on a sample not used for selection.
    pub best_fitness: FitnessEstimate,
    /// Best-of-run candidates with their screening fitness at `n_final`, best first.
    pub screened: Vec<(Rule, FitnessEstimate)>,
    pub trace: Vec<GenerationStats>,
    pub final_population: Vec<Genotype>,
    pub config: GaConfig,
}

/// Binary tournament: a coin toss between statistically neutral contestants,
/// otherwise the fitter one.
pub fn tournament_select<'a, R: Rng + ?Sized>(
    a: (&'a Genotype, &FitnessEstimate),
    b: (&'a Genotype, &FitnessEstimate),
    rng: &mut R,
) -> &'a Genotype {
    if is_neutral(a.1, b.1) {
        if rng.random::<bool>() {
            a.0
        } else {
            b.0
        }
    } else if a.1.value > b.1.value {
        a.0
    } else {
        b.0
    }
}

fn uniform_crossover<R: Rng + ?Sized>(a: &Genotype, b: &Genotype, rng: &mut R) -> Genotype {
    let mask = rng.random::<u128>();
    Genotype::from_bits((a.bits() & mask) | (b.bits() & !mask), a.len())
}

fn mutate<R: Rng + ?Sized>(g: &mut Genotype, rate: f64, rng: &mut R) {
    if rate == 0.0 {
        return;
    }
    for i in 0..g.len() {
        if rng.random::<f64>() < rate {
            g.flip(i);
        }
    }
}

fn evaluate(cfg: &GaConfig, rules: &[Rule], n: u64, ic_seed: u64) -> Vec<FitnessEstimate> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        rules.par_iter().map(|&r| cfg.task.standard_performance(r, n, ic_seed)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        rules.iter().map(|&r| cfg.task.standard_performance(r, n, ic_seed)).collect()
    }
}

/// Indices sorted by fitness, best first; ties keep population order.
fn ranking(fitness: &[FitnessEstimate]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&i, &j| fitness[j].value.total_cmp(&fitness[i].value));
    order
}

fn embed_all(t: &OlympusTemplate, pop: &[Genotype]) -> Vec<Rule> {
    pop.iter().map(|g| t.embed(g).expect("genotype length matches template")).collect()
}

pub fn run_ga(cfg: &GaConfig) -> Result<GaResult, Error> {
    cfg.validate()?;
    let t = &cfg.template;
    let mut init = rng::rng(cfg.seed, tag::GA, u64::MAX);
    let mut pop: Vec<Genotype> = (0..cfg.population).map(|_| t.random_genotype(&mut init)).collect();
    let mut trace = Vec::with_capacity(cfg.generations);
    let mut record = f64::NEG_INFINITY;

    for g in 0..cfg.generations {
        let rules = embed_all(t, &pop);
        let fit = evaluate(cfg, &rules, cfg.n_gen, rng::derive(cfg.seed, tag::GA_ICS, g as u64));
        let order = ranking(&fit);
        let best = fit[order[0]].value;
        record = record.max(best);
        trace.push(GenerationStats {
            generation: g,
            best,
            mean: fit.iter().map(|f| f.value).sum::<f64>() / fit.len() as f64,
            best_so_far: record,
            best_rule: rules[order[0]],
        });

        let gen_seed = rng::derive(cfg.seed, tag::GA, g as u64);
        let mut next: Vec<Genotype> = order[..cfg.elitism].iter().map(|&i| pop[i]).collect();
        for i in cfg.elitism..cfg.population {
            let mut r = rng::rng(gen_seed, tag::GA, i as u64);
            let pick = |r: &mut _| {
                let a = r_index(r, cfg.population);
                let b = r_index(r, cfg.population);
                *tournament_select((&pop[a], &fit[a]), (&pop[b], &fit[b]), r)
            };
            let first = pick(&mut r);
            let mut child = if r.random::<f64>() < cfg.crossover_rate {
                let second = pick(&mut r);
                uniform_crossover(&first, &second, &mut r)
            } else {
                first
            };
            mutate(&mut child, cfg.mutation_rate, &mut r);
            next.push(child);
        }
        pop = next;
    }

    // Best-of-run candidates: every generation's leader and the leaders of
    // the last population, screened at the final sample size. The winner is
    // scored again on an independent sample so the reported value carries
    // no selection bias.
    let rules = embed_all(t, &pop);
    let last = cfg.generations as u64;
    let fit = evaluate(cfg, &rules, cfg.n_gen, rng::derive(cfg.seed, tag::GA_ICS, last));
    let mut candidates: Vec<Rule> = Vec::new();
    let leaders = ranking(&fit).into_iter().map(|i| rules[i]);
    for r in trace.iter().map(|s| s.best_rule).chain(leaders.take(cfg.finalists)) {
        if !candidates.contains(&r) {
            candidates.push(r);
        }
    }
    let screen_seed = rng::derive(cfg.seed, tag::GA_ICS, u64::MAX - 1);
    let scores = evaluate(cfg, &candidates, cfg.n_final, screen_seed);
    let mut screened: Vec<(Rule, FitnessEstimate)> = candidates.into_iter().zip(scores).collect();
    screened.sort_by(|a, b| b.1.value.total_cmp(&a.1.value));
    let best = screened[0].0;
    let best_fitness =
        cfg.task.standard_performance(best, cfg.n_final, rng::derive(cfg.seed, tag::GA_ICS, u64::MAX));

    Ok(GaResult { best, best_fitness, screened, trace, final_population: pop, config: cfg.clone() })
}

fn r_index<R: Rng + ?Sized>(r: &mut R, n: usize) -> usize {
    r.random_range(0..n)
}
