//! Acceptance suite: one line per criterion.
//!
//! Runs without the libtest harness so every criterion reports a line even
//! when another fails. An optional argument selects criteria by number
//! (`cargo test --test acceptance -- 3 7`). Set `MAJORITY_FULL_GA=1` to add
//! the long-running full-scale GA check.
//!
//! Criteria 1 and 5 cannot be met with the Das rule table as printed (see
//! the README). They are evaluated at full strength; a failure whose
//! measurements match that documented cause exactly is reported as an
//! expected failure. Any other failure makes the suite exit nonzero.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use majority_landscape::engine::{classify_batch, evolve, step};
use majority_landscape::evolution::{run_ga, GaConfig};
use majority_landscape::landscape::{
    expanding_neutral_walk, mean_autocorrelation, random_neutral_walk,
};
use majority_landscape::rng;
use majority_landscape::rule::known;
use majority_landscape::symmetry::{mirror_fixed_codes, s01, srl};
use majority_landscape::{standard_performance, Configuration, OlympusTemplate, Rule};
use rand::Rng;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_majority");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn majority(args: &[&str]) -> String {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "majority {} failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("json file")).expect("valid json")
}

fn random_ic<R: Rng>(r: &mut R, width: usize) -> Configuration {
    // Densities spread over [0, 1] so that both uniform outcomes occur.
    let p: f64 = r.random();
    Configuration::new((0..width).map(|_| r.random::<f64>() < p).collect()).unwrap()
}

struct Verdict {
    pass: bool,
    detail: String,
    /// Set when a failure matches the documented defect of the printed Das table.
    known_cause: bool,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail, known_cause: false }
}

fn table1() -> Verdict {
    let mut args = vec!["eval", "--n", "10000", "--seed", "1"];
    for (_, hex, _) in &known::BEST_KNOWN {
        args.extend(["--rule", hex]);
    }
    let rows = csv_rows(&majority(&args));
    let mut parts = Vec::new();
    let mut off = Vec::new();
    for ((name, _, printed), row) in known::BEST_KNOWN.iter().zip(&rows) {
        let p: f64 = row[3].parse().unwrap();
        if (p - printed).abs() > 0.015 {
            off.push((*name, p));
        }
        parts.push(format!("{name} {p:.4} (printed {printed})"));
    }
    let mut v = verdict(rows.len() == 6 && off.is_empty(), parts.join(", "));
    // The printed Das table keeps isolated ones alive and never relaxes to zeros.
    v.known_cause = off == [("Das", 0.0)];
    v
}

fn constant_rules() -> Verdict {
    let zero = "00000000000000000000000000000000";
    let one = "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF";
    let rows = csv_rows(&majority(&["eval", "--rule", zero, "--rule", one, "--n", "10000", "--seed", "2"]));
    let p: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    let pass = p.iter().all(|v| (v - 0.5).abs() <= 0.015);
    verdict(pass, format!("zero rule {}, one rule {}", p[0], p[1]))
}

fn levels() -> Verdict {
    let rows = csv_rows(&majority(&["levels", "--n", "10000", "--n", "1000", "--n", "100"]));
    let mut pass = true;
    let mut parts = Vec::new();
    for (row, target) in rows.iter().zip([113i64, 36, 12]) {
        let count: i64 = row[1].parse().unwrap();
        let analytic: f64 = row[2].parse().unwrap();
        pass &= (count - target).abs() <= 1 && (count as f64 - analytic).abs() <= 2.0;
        parts.push(format!("n={} {} (target {target}, analytic {analytic:.1})", row[0], count));
    }
    verdict(pass, parts.join(", "))
}

fn symmetries() -> Verdict {
    let mut r = rng::rng(4, 0xACC, 0);
    let mut steps = 0usize;
    let mut algebra = true;
    let mut conj = true;
    for _ in 0..100 {
        let rule = Rule::from_bits(r.random());
        algebra &= s01(s01(rule)) == rule && srl(srl(rule)) == rule && s01(srl(rule)) == srl(s01(rule));
        let (a, b) = (s01(rule), srl(rule));
        for _ in 0..10 {
            let mut c = random_ic(&mut r, 149);
            for _ in 0..50 {
                let next = step(rule, &c);
                conj &= step(a, &c.complement()) == next.complement();
                conj &= step(b, &c.reverse()) == next.reverse();
                c = next;
                steps += 1;
            }
        }
    }
    let fixed = mirror_fixed_codes().count();
    verdict(
        algebra && conj && fixed == 16,
        format!("{steps} conjugated steps exact: {conj}; involutions and commutation: {algebra}; mirror-fixed codes: {fixed}"),
    )
}

fn olympus() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("derive.json");
    let rules = data("best_known.txt");
    majority(&["olympus", "derive", "--rules", rules.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    let j = read_json(&report);
    let joint = j["joint_bits"].as_u64().unwrap();
    let stars = j["template"].as_str().unwrap().chars().filter(|&c| c == '*').count();
    let diff: Vec<u64> = j["differences_from_reference"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["position"].as_u64().unwrap())
        .collect();
    let chosen: Vec<String> = j["chosen"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| format!("{}={}", c["name"].as_str().unwrap(), c["symmetry"].as_str().unwrap()))
        .collect();
    let mut v = verdict(
        joint == 51 && stars == 77,
        format!(
            "{} variant sets searched, maximum joint bits {joint} (target 51), {stars} free (target 77); \
             chosen {}; differs from the published template at {diff:?}",
            j["combinations"],
            chosen.join(" ")
        ),
    );
    v.known_cause = joint == 52 && stars == 76 && diff == [8, 10, 85, 86, 87];
    v
}

fn batch_oracle() -> Verdict {
    let mut r = rng::rng(6, 0xACC, 0);
    let mut pairs = 0;
    let mut agree = 0;
    let mut decided = 0;
    for i in 0..8 {
        // Known rules decide most configurations; random rules rarely do.
        let rule = if i < 6 {
            Rule::from_hex(known::BEST_KNOWN[i].1).unwrap()
        } else {
            Rule::from_bits(r.random::<u128>() & !1 | 1 << 127)
        };
        let ics: Vec<Configuration> = (0..40).map(|_| random_ic(&mut r, 149)).collect();
        let batch = classify_batch(rule, &ics, 320);
        for (ic, out) in ics.iter().zip(batch) {
            let scalar = evolve(rule, ic, 320);
            pairs += 1;
            agree += (scalar == out) as usize;
            decided += scalar.verdict().is_some() as usize;
        }
    }
    verdict(
        pairs >= 256 && agree == pairs,
        format!("{agree}/{pairs} pairs agree ({decided} decided)"),
    )
}

fn dos_summary(dir: &Path, name: &str, extra: &[&str]) -> Value {
    let out = dir.join(name);
    let mut args = vec!["dos", "--samples", "4000", "--n", "1000", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    majority(&args);
    read_json(&dir.join(format!("{name}.manifest.json")))["summary"].clone()
}

fn dos_contrast() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let olympus = data("olympus.txt");
    let uni = dos_summary(dir.path(), "uniform.csv", &["--sampler", "uniform", "--seed", "7"]);
    let oly = dos_summary(
        dir.path(),
        "olympus.csv",
        &["--sampler", "uniform", "--seed", "7", "--subspace", olympus.to_str().unwrap()],
    );
    let mh = dos_summary(
        dir.path(),
        "mh.csv",
        &["--sampler", "mh", "--seed", "7", "--burn-in", "1000", "--thinning", "1"],
    );
    let z = |v: &Value| v["zero_fraction"].as_f64().unwrap();
    let near_half = mh["fraction_in_0.4_0.6"].as_f64().unwrap();
    let pass = z(&uni) >= 0.95 && z(&oly) <= 0.40 && z(&mh) < z(&uni) && near_half > 0.0;
    verdict(
        pass,
        format!(
            "zero fraction: full uniform {:.4}, Olympus uniform {:.4}, full Metropolis {:.4}; \
             Metropolis mass in [0.4, 0.6] {near_half:.3}",
            z(&uni),
            z(&oly),
            z(&mh)
        ),
    )
}

/// Mean lag-1 autocorrelation of neutral degree over 8 random walks of 40 steps.
fn walk_r1(start: Rule) -> Result<f64, String> {
    let series: Vec<Vec<f64>> =
        (1..=8).map(|s| random_neutral_walk(start, 40, 1000, s).degrees_f64().unwrap()).collect();
    mean_autocorrelation(&series, 1).map(|r| r[1]).map_err(|e| e.to_string())
}

fn neutral_networks() -> Verdict {
    // Mean over 5 walks, as in the reference experiment.
    let lengths: Vec<usize> = (1..=5).map(|s| expanding_neutral_walk(Rule::ZERO, 1000, s).len()).collect();
    let mean_length = lengths.iter().sum::<usize>() as f64 / lengths.len() as f64;
    let walk = random_neutral_walk(Rule::ZERO, 20, 1000, 8);
    let d = walk.degrees_f64().unwrap();
    let mean_degree = d.iter().sum::<f64>() / d.len() as f64;

    // A rule of fitness about 0.76 from the GA trace, as measured at n = 10³.
    let cfg = GaConfig { generations: 60, ..GaConfig::new(OlympusTemplate::canonical(), 8) };
    let ga = run_ga(&cfg).unwrap();
    let high = ga
        .trace
        .iter()
        .map(|s| s.best_rule)
        .find(|&r| (0.74..=0.78).contains(&standard_performance(r, 1000, 8).value));
    let Some(high) = high else {
        return verdict(false, "no GA rule with fitness in [0.74, 0.78]".into());
    };
    let (low_r1, high_r1) = (walk_r1(Rule::ZERO), walk_r1(high));
    let pass = mean_length >= 80.0
        && mean_degree >= 70.0
        && matches!((&low_r1, &high_r1), (Ok(a), Ok(b)) if *a >= 0.6 && a > b);
    verdict(
        pass,
        format!(
            "expanding walk lengths {lengths:?} (mean {mean_length}); mean degree along 20-step walk \
             {mean_degree:.1}; r(1) constant-zero network {low_r1:.3?}, network of {} {high_r1:.3?}",
            high.to_hex()
        ),
    )
}

fn ga_run(dir: &Path, seed: &str, gens: &str) -> (String, f64) {
    let out = dir.join(format!("ga{seed}"));
    majority(&[
        "ga", "--pop", "100", "--gens", gens, "--n-gen", "100", "--n-final", "10000", "--seed", seed,
        "--out", out.to_str().unwrap(),
    ]);
    let s = read_json(&out.join("manifest.json"))["summary"].clone();
    (s["best"].as_str().unwrap().to_owned(), s["best_fitness"].as_f64().unwrap())
}

fn ga_desk() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(String, f64)> = ["1", "2"].iter().map(|s| ga_run(dir.path(), s, "200")).collect();
    let best = runs.iter().map(|r| r.1).fold(0.0, f64::max);
    let detail = runs.iter().map(|(h, f)| format!("{h} {f}")).collect::<Vec<_>>().join(", ");
    verdict(best >= 0.78, format!("best of 2 runs {best} at n=10000 ({detail})"))
}

fn ga_full() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let f: Vec<f64> = (1..=10).map(|s| ga_run(dir.path(), &s.to_string(), "1000").1).collect();
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    let sd = (f.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (f.len() - 1) as f64).sqrt();
    verdict((0.82..=0.845).contains(&mean), format!("10 runs: mean best {mean:.4}, sd {sd:.4}"))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let gkl = known::GKL;
    let olympus = data("olympus.txt");
    let runs: Vec<Vec<String>> = [
        vec!["eval", "--rule", gkl, "--n", "3000", "--seed", "3", "--out", &p("eval.csv")],
        vec!["dos", "--samples", "60", "--n", "200", "--seed", "3", "--out", &p("dos.csv")],
        vec![
            "dos", "--sampler", "mh", "--samples", "60", "--n", "200", "--seed", "3", "--burn-in", "20",
            "--subspace", olympus.to_str().unwrap(), "--out", &p("mh.csv"),
        ],
        vec!["ndeg", "--rule", gkl, "--n", "300", "--seed", "3", "--out", &p("ndeg.csv")],
        vec!["nwalk", "--mode", "random", "--steps", "6", "--n", "300", "--seed", "3", "--out", &p("walk.csv")],
        vec!["nwalk", "--mode", "expand", "--n", "300", "--seed", "3", "--out", &p("expand.csv")],
        vec!["ga", "--pop", "16", "--gens", "4", "--n-gen", "64", "--n-final", "512", "--seed", "3", "--out", &p("ga")],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(str::to_owned).collect())
    .collect();
    let mut manifests = Vec::new();
    for args in &runs {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        majority(&refs);
        let out = args.iter().skip_while(|a| *a != "--out").nth(1).unwrap().clone();
        manifests.push(if args[0] == "ga" { format!("{out}/manifest.json") } else { format!("{out}.manifest.json") });
    }
    let mut identical = 0;
    let mut files = 0;
    for m in &manifests {
        let out = Command::new(BIN).args(["--threads", "1", "replay", "--manifest", m]).output().unwrap();
        let text = String::from_utf8_lossy(&out.stdout);
        files += text.lines().count();
        if out.status.success() {
            identical += text.lines().filter(|l| l.ends_with(": identical")).count();
        }
    }
    verdict(
        identical == files && files >= manifests.len(),
        format!("{} stochastic runs replayed single-threaded: {identical}/{files} output files byte-identical", manifests.len()),
    )
}

type Criterion = (u32, &'static str, fn() -> Verdict);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "best known rules reproduce their performances", table1),
        (2, "constant rules score one half", constant_rules),
        (3, "distinguishable fitness levels", levels),
        (4, "symmetry conjugations are exact", symmetries),
        (5, "Olympus derivation: 51 joint bits, 77 free", olympus),
        (6, "batch classification matches scalar evolution", batch_oracle),
        (7, "density-of-states contrast", dos_contrast),
        (8, "neutral network statistics", neutral_networks),
        (9, "GA inside Olympus reaches 0.78", ga_desk),
        (10, "replays from manifests are byte-identical", determinism),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let full_ga = std::env::var_os("MAJORITY_FULL_GA").is_some_and(|v| v == "1");

    panic::set_hook(Box::new(|_| {}));
    let mut unexpected = Vec::new();
    let mut run = |id: u32, title: &str, f: fn() -> Verdict| {
        let t0 = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        let status = match (v.pass, v.known_cause) {
            (true, _) => "PASS",
            (false, true) => "FAIL (expected, see README)",
            (false, false) => {
                unexpected.push(id);
                "FAIL"
            }
        };
        println!("criterion {id:>2} {title}: {status} [{:.1}s] {}", t0.elapsed().as_secs_f64(), v.detail);
    };
    for (id, title, f) in criteria {
        if selected.is_empty() || selected.contains(&id) {
            run(id, title, f);
        }
    }
    if full_ga && (selected.is_empty() || selected.contains(&9)) {
        run(9, "full-scale GA mean best in [0.82, 0.845]", ga_full);
    } else if selected.is_empty() || selected.contains(&9) {
        println!("criterion  9 full-scale GA mean best in [0.82, 0.845]: SKIPPED (set MAJORITY_FULL_GA=1)");
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
