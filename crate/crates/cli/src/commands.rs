use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use majority_landscape::evolution::{run_ga, GaConfig};
use majority_landscape::landscape::{
    autocorrelation, expanding_walk_with, mean_autocorrelation, metropolis_with, random_walk_with,
    uniform_with, Evaluator, FitnessOracle, MetropolisConfig, NeutralityCheck, WalkOptions,
};
use majority_landscape::olympus::{derive_olympus, OlympusTemplate};
use majority_landscape::rng::{self, tag};
use majority_landscape::rule::known;
use majority_landscape::{distinguishable_levels, Error, Rule, Task};
use serde_json::{json, Value};

use crate::args::*;
use crate::fields;
use crate::io::{self, Csv};
use crate::manifest::{sha256_hex, Recorder};

pub const DEFAULT_SEED: u64 = 0;

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        eprintln!("no --seed given, using {DEFAULT_SEED}");
        DEFAULT_SEED
    })
}

fn task(a: TaskArgs, rec: &mut Recorder) -> Result<Task> {
    rec.param("width", a.width);
    rec.param("max_steps", a.max_steps);
    Task::new(a.width, a.max_steps).map_err(|e| anyhow!("invalid task: {e}"))
}

fn sample_size(n: u64, flag: &str) -> Result<u64> {
    ensure!(n >= 1, "{flag} must be at least 1");
    Ok(n)
}

fn rules(texts: &[String]) -> Result<Vec<Rule>> {
    texts.iter().map(|t| io::parse_rule(t)).collect()
}

/// Runs one subcommand; `args` is its command line, recorded in the manifest.
pub fn run(command: Command, args: &[String]) -> Result<()> {
    match command {
        Command::Eval(a) => eval(a, args),
        Command::Levels(a) => levels(a, args),
        Command::Dos(a) => dos(a, args),
        Command::Ndeg(a) => ndeg(a, args),
        Command::Nwalk(a) => nwalk(a, args),
        Command::Acf(a) => acf(a, args),
        Command::Olympus(OlympusCommand::Derive(a)) => derive(a, args),
        Command::Olympus(OlympusCommand::Check(a)) => check(a),
        Command::Olympus(OlympusCommand::Canonical) => {
            println!("{}", OlympusTemplate::canonical().to_grouped_string(8));
            Ok(())
        }
        Command::Ga(a) => ga(a, args),
        Command::Replay(a) => replay(a),
    }
}

fn eval(a: EvalArgs, args: &[String]) -> Result<()> {
    let mut rec = Recorder::new("eval", args);
    let task = task(a.task, &mut rec)?;
    let n = sample_size(a.n, "--n")?;
    let rules = rules(&a.rules)?;
    let seed = seed_or_default(a.seed);
    rec.seed(seed);
    rec.param("n", n);
    rec.param("rules", rules.iter().map(|r| r.to_hex()).collect::<Vec<_>>());
    let mut csv = Csv::new(&["hex", "n", "seed", "performance"]);
    for r in rules {
        let f = task.standard_performance(r, n, seed);
        csv.row(fields![r.to_hex(), n, seed, f.value]);
    }
    rec.output(a.output.out.as_deref(), &csv.into_bytes())?;
    rec.finish(a.output.manifest.as_deref())?;
    Ok(())
}

fn levels(a: LevelsArgs, args: &[String]) -> Result<()> {
    let mut rec = Recorder::new("levels", args);
    rec.param("n", a.n.clone());
    let mut csv = if a.values {
        Csv::new(&["n", "index", "fitness"])
    } else {
        Csv::new(&["n", "levels", "analytic"])
    };
    for &n in &a.n {
        let n = sample_size(n, "--n")?;
        let (count, chain) = distinguishable_levels(n);
        if a.values {
            for (i, f) in chain.iter().enumerate() {
                csv.row(fields![n, i, f]);
            }
        } else {
            let analytic = std::f64::consts::PI * (n as f64).sqrt() / (1.96 * 2f64.sqrt());
            csv.row(fields![n, count, analytic]);
        }
    }
    rec.output(a.output.out.as_deref(), &csv.into_bytes())?;
    rec.finish(a.output.manifest.as_deref())?;
    Ok(())
}

fn dos(a: DosArgs, args: &[String]) -> Result<()> {
    let mut rec = Recorder::new("dos", args);
    let task = task(a.task, &mut rec)?;
    let n = sample_size(a.n, "--n")?;
    let seed = seed_or_default(a.seed);
    let space = match &a.subspace {
        Some(p) => io::read_template(p)?,
        None => OlympusTemplate::full_space(),
    };
    rec.seed(seed);
    rec.param("n", n);
    rec.param("samples", a.samples);
    rec.param("bins", a.bins);
    rec.param("space", space.to_string());
    let mut oracle = Evaluator::new(task, n, seed);
    let hist = match a.sampler {
        SamplerKind::Uniform => {
            rec.param("sampler", "uniform");
            let mut r = rng::rng(seed, tag::DOS, 0);
            uniform_with(&mut oracle, a.samples, a.bins, &space, &mut r)?
        }
        SamplerKind::Mh => {
            let start = a.start.as_deref().map(io::parse_rule).transpose()?;
            let cfg = MetropolisConfig {
                samples: a.samples,
                temperature: a.temperature,
                burn_in: a.burn_in,
                thinning: a.thinning,
                start,
                bins: a.bins,
            };
            rec.param("sampler", "metropolis");
            rec.param("temperature", cfg.temperature);
            rec.param("burn_in", cfg.burn_in);
            rec.param("thinning", cfg.thinning);
            rec.param("start", start.map(|r| r.to_hex()));
            let mut r = rng::rng(seed, tag::METROPOLIS, 0);
            metropolis_with(&mut oracle, &cfg, &space, &mut r).map_err(|e| match e {
                Error::NotInSubspace { position } => {
                    anyhow!("start rule is outside the subspace (position {position})")
                }
                e => e.into(),
            })?
        }
    };
    let mut csv = Csv::new(&["bin_low", "bin_high", "count"]);
    for (i, c) in hist.counts.iter().enumerate() {
        csv.row(fields![hist.edges[i], hist.edges[i + 1], c]);
    }
    rec.summary("samples", hist.total());
    rec.summary("zeros", hist.zeros);
    rec.summary("zero_fraction", hist.zero_fraction());
    rec.summary("max_fitness", hist.max_value());
    rec.summary("fraction_in_0.4_0.6", hist.fraction_within(0.4, 0.6));
    rec.summary("dimension", hist.dimension);
    rec.summary("acceptance", hist.acceptance);
    rec.summary("distinct_rules_evaluated", oracle.evaluations());
    eprintln!(
        "{} samples, {} with zero fitness ({:.4}), max {}",
        hist.total(),
        hist.zeros,
        hist.zero_fraction(),
        hist.max_value()
    );
    rec.output(a.output.out.as_deref(), &csv.into_bytes())?;
    rec.finish(a.output.manifest.as_deref())?;
    Ok(())
}

fn ndeg(a: NdegArgs, args: &[String]) -> Result<()> {
    let mut rec = Recorder::new("ndeg", args);
    let task = task(a.task, &mut rec)?;
    let n = sample_size(a.n, "--n")?;
    let rules = rules(&a.rules)?;
    let seed = seed_or_default(a.seed);
    rec.seed(seed);
    rec.param("n", n);
    rec.param("rules", rules.iter().map(|r| r.to_hex()).collect::<Vec<_>>());
    let mut oracle = Evaluator::new(task, n, seed);
    let mut csv = Csv::new(&["hex", "n", "seed", "fitness", "neutral_degree"]);
    for r in rules {
        let d = oracle.neutral_degree(r);
        csv.row(fields![r.to_hex(), n, seed, oracle.fitness(r).value, d]);
    }
    rec.output(a.output.out.as_deref(), &csv.into_bytes())?;
    rec.finish(a.output.manifest.as_deref())?;
    Ok(())
}

fn nwalk(a: NwalkArgs, args: &[String]) -> Result<()> {
    let mut rec = Recorder::new("nwalk", args);
    let task = task(a.task, &mut rec)?;
    let n = sample_size(a.n, "--n")?;
    let start = io::parse_rule(&a.start)?;
    let seed = seed_or_default(a.seed);
    let check = match a.check {
        CheckKind::All => NeutralityCheck::AllVisited,
        CheckKind::Current => NeutralityCheck::CurrentOnly,
    };
    rec.seed(seed);
    rec.param("n", n);
    rec.param("start", start.to_hex());
    rec.param("check", format!("{check:?}"));
    let mut oracle = Evaluator::new(task, n, seed);
    let mut r = rng::rng(seed, tag::WALK, 0);
    let walk = match a.mode {
        WalkMode::Expand => {
            rec.param("mode", "expand");
            rec.param("degrees", a.degrees);
            let options = WalkOptions { check, record_degrees: a.degrees };
            expanding_walk_with(&mut oracle, start, &mut r, options)
        }
        WalkMode::Random => {
            ensure!(a.steps >= 1, "--steps must be at least 1");
            rec.param("mode", "random");
            rec.param("steps", a.steps);
            random_walk_with(&mut oracle, start, a.steps, &mut r, check)
        }
    };
    let mut csv = Csv::new(&["step", "hex", "fitness", "distance", "neutral_degree"]);
    for i in 0..walk.rules.len() {
        let degree = walk.degrees.as_ref().map(|d| d[i].to_string()).unwrap_or_default();
        csv.row(fields![i, walk.rules[i].to_hex(), walk.fitnesses[i].value, walk.distances[i], degree]);
    }
    rec.summary("length", walk.len());
    if let Some(d) = walk.degrees_f64() {
        rec.summary("mean_neutral_degree", d.iter().sum::<f64>() / d.len() as f64);
    }
    eprintln!("walk of {} steps from {}", walk.len(), start);
    rec.output(a.output.out.as_deref(), &csv.into_bytes())?;
    rec.finish(a.output.manifest.as_deref())?;
    Ok(())
}

fn acf(a: AcfArgs, args: &[String]) -> Result<()> {
    let mut rec = Recorder::new("acf", args);
    rec.param("max_lag", a.max_lag);
    let mut series = Vec::new();
    let mut inputs = Vec::new();
    for p in &a.inputs {
        let bytes = fs::read(p).with_context(|| format!("cannot read walk file {}", p.display()))?;
        inputs.push(json!({ "path": p.display().to_string(), "sha256": sha256_hex(&bytes) }));
        series.push(io::read_walk_degrees(p)?);
    }
    rec.param("inputs", inputs);
    let r = if series.len() == 1 {
        autocorrelation(&series[0], a.max_lag)
    } else {
        mean_autocorrelation(&series, a.max_lag)
    }
    .map_err(|e| anyhow!("autocorrelation undefined: {e}"))?;
    let mut csv = Csv::new(&["lag", "r"]);
    for (k, v) in r.iter().enumerate() {
        csv.row(fields![k, v]);
    }
    rec.output(a.output.out.as_deref(), &csv.into_bytes())?;
    rec.finish(a.output.manifest.as_deref())?;
    Ok(())
}

fn derive(a: DeriveArgs, args: &[String]) -> Result<()> {
    let mut rec = Recorder::new("olympus derive", args);
    let named: Vec<(String, Rule)> = match &a.rules {
        Some(p) => io::read_rules(p)?,
        None => known::BEST_KNOWN
            .iter()
            .map(|(name, hex, _)| (name.to_string(), Rule::from_hex(hex).expect("valid constant")))
            .collect(),
    };
    rec.param("rules", named.iter().map(|(n, r)| json!({ "name": n, "hex": r.to_hex() })).collect::<Vec<_>>());
    let rules: Vec<Rule> = named.iter().map(|&(_, r)| r).collect();
    let d = derive_olympus(&rules).map_err(|e| anyhow!("cannot derive template: {e}"))?;
    let reference = OlympusTemplate::canonical();
    let diff = d.template.diff(&reference);
    let chosen: Vec<Value> = named
        .iter()
        .zip(&d.chosen)
        .map(|((name, _), (sym, r))| json!({ "name": name, "symmetry": sym.name(), "hex": r.to_hex() }))
        .collect();
    let optimal: Vec<Vec<&str>> =
        d.optimal.iter().map(|set| set.iter().map(|s| s.name()).collect()).collect();
    let differences: Vec<Value> = diff
        .iter()
        .map(|&k| json!({ "position": k, "derived": symbol(&d.template, k), "reference": symbol(&reference, k) }))
        .collect();
    let report = json!({
        "combinations": d.combinations,
        "joint_bits": d.joint_bits,
        "free_positions": d.template.dimension(),
        "template": d.template.to_string(),
        "chosen": chosen,
        "optimal_sets": optimal,
        "reference_template": reference.to_string(),
        "reference_joint_bits": reference.fixed_count(),
        "differences_from_reference": differences,
        "matches_reference": diff.is_empty(),
    });
    eprintln!(
        "{} combinations, {} joint bits, {} free positions, {} differences from the published template",
        d.combinations,
        d.joint_bits,
        d.template.dimension(),
        diff.len()
    );
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    rec.summary("joint_bits", d.joint_bits);
    rec.summary("differences_from_reference", diff.clone());
    rec.output(a.output.out.as_deref(), text.as_bytes())?;
    if let Some(p) = &a.template_out {
        rec.output(Some(p), format!("{}\n", d.template.to_grouped_string(8)).as_bytes())?;
    }
    rec.finish(a.output.manifest.as_deref())?;
    Ok(())
}

fn symbol(t: &OlympusTemplate, k: usize) -> String {
    match t.symbol(k) {
        Some(true) => "1",
        Some(false) => "0",
        None => "*",
    }
    .to_owned()
}

fn check(a: CheckArgs) -> Result<()> {
    let t = io::template_or_canonical(a.template.as_deref())?;
    let r = io::parse_rule(&a.rule)?;
    match t.project(r) {
        Ok(_) => println!("{} is in the template subspace", r.to_hex()),
        Err(Error::NotInSubspace { position }) => println!(
            "{} is not in the template subspace: position {position} must be {}",
            r.to_hex(),
            symbol(&t, position)
        ),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn ga(a: GaArgs, args: &[String]) -> Result<()> {
    let mut rec = Recorder::new("ga", args);
    let task = task(a.task, &mut rec)?;
    let template = io::template_or_canonical(a.template.as_deref())?;
    let seed = seed_or_default(a.seed);
    let mut cfg = GaConfig::new(template, seed);
    cfg.population = a.pop;
    cfg.generations = a.gens;
    cfg.n_gen = a.n_gen;
    cfg.n_final = a.n_final;
    cfg.crossover_rate = a.crossover;
    cfg.elitism = a.elitism;
    cfg.task = task;
    if let Some(m) = a.mutation {
        cfg.mutation_rate = m;
    }
    cfg.validate().map_err(|e| anyhow!("invalid GA configuration: {e}"))?;
    rec.seed(seed);
    rec.param("template", cfg.template.to_string());
    rec.param("population", cfg.population);
    rec.param("generations", cfg.generations);
    rec.param("n_gen", cfg.n_gen);
    rec.param("n_final", cfg.n_final);
    rec.param("mutation_rate", cfg.mutation_rate);
    rec.param("crossover_rate", cfg.crossover_rate);
    rec.param("elitism", cfg.elitism);
    rec.param("tournament_size", 2);
    rec.param("finalists", cfg.finalists);

    let res = run_ga(&cfg)?;
    let mut trace = Csv::new(&["generation", "best", "mean", "best_so_far", "best_hex"]);
    for s in &res.trace {
        trace.row(fields![s.generation, s.best, s.mean, s.best_so_far, s.best_rule.to_hex()]);
    }
    let mut screened = Csv::new(&["hex", "fitness"]);
    for (r, f) in &res.screened {
        screened.row(fields![r.to_hex(), f.value]);
    }
    fs::create_dir_all(&a.out).with_context(|| format!("cannot create directory {}", a.out.display()))?;
    rec.output(Some(&a.out.join("trace.csv")), &trace.into_bytes())?;
    rec.output(Some(&a.out.join("screened.csv")), &screened.into_bytes())?;
    rec.output(Some(&a.out.join("best.txt")), format!("{}\n", res.best.to_hex()).as_bytes())?;
    rec.summary("best", res.best.to_hex());
    rec.summary("best_fitness", res.best_fitness.value);
    rec.summary("best_fitness_n", res.best_fitness.n);
    eprintln!("best {} scores {} at n = {}", res.best, res.best_fitness.value, res.best_fitness.n);
    rec.finish(Some(&a.out.join("manifest.json")))?;
    Ok(())
}

fn replay(a: ReplayArgs) -> Result<()> {
    let text = fs::read_to_string(&a.manifest)
        .with_context(|| format!("cannot read manifest {}", a.manifest.display()))?;
    let doc: Value = serde_json::from_str(&text)
        .with_context(|| format!("manifest {} is not valid JSON", a.manifest.display()))?;
    let args: Vec<String> = doc["args"]
        .as_array()
        .and_then(|v| v.iter().map(|s| s.as_str().map(str::to_owned)).collect())
        .ok_or_else(|| anyhow!("manifest {} has no argument list", a.manifest.display()))?;
    let recorded: Vec<(String, String)> = doc["outputs"]
        .as_array()
        .map(|v| {
            v.iter()
                .filter_map(|o| Some((o["path"].as_str()?.to_owned(), o["sha256"].as_str()?.to_owned())))
                .filter(|(p, _)| p != "-")
                .collect()
        })
        .unwrap_or_default();
    ensure!(!recorded.is_empty(), "manifest {} lists no output files", a.manifest.display());
    if let Some(wd) = doc["working_directory"].as_str() {
        std::env::set_current_dir(wd).with_context(|| format!("cannot enter {wd}"))?;
    }
    let cli = <Cli as clap::Parser>::try_parse_from(std::iter::once("majority".to_owned()).chain(args.clone()))
        .map_err(|e| anyhow!("manifest arguments do not parse: {e}"))?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!("a manifest cannot record a replay");
    }
    run(cli.command, &args)?;
    let mut mismatched = Vec::new();
    for (path, digest) in &recorded {
        let bytes = fs::read(Path::new(path)).with_context(|| format!("cannot read {path}"))?;
        let ok = sha256_hex(&bytes) == *digest;
        println!("{path}: {}", if ok { "identical" } else { "DIFFERS" });
        if !ok {
            mismatched.push(path.as_str());
        }
    }
    ensure!(mismatched.is_empty(), "replay differs from the manifest: {}", mismatched.join(", "));
    Ok(())
}
