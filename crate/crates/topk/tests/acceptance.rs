//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;
use topk::commands::{self, EvalMode};
use topk::csv_input::parse_csv;
use topk::spec_file::ClassifierSpecFile;
use topk_core::metrics::{cost_posterior, metrics_posterior, CostParams, Regime};
use topk_core::oracle::{brute_force_optimum, check_optimality, random_instance, GAP_TOLERANCE};
use topk_core::{normal, BinormalModel, ConstraintSpec, DiscreteDistribution, QuantileChoice, ThresholdClassifier};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.passed &= elapsed < limit;
    out.detail = format!("{} [{:.2?} / limit {:?}]", out.detail, elapsed, limit);
    out
}

/// Optimality check on 10^4 seeded instances with at most 10 atoms.
fn oracle_equivalence() -> Outcome {
    let trials = 10_000u64;
    let (mut failures, mut forced, mut worst) = (0, 0, 0.0f64);
    let mut regimes = [0; 3];
    for seed in 0..trials {
        let inst = random_instance(seed, 10).unwrap();
        let check = check_optimality(&inst.dist, inst.alpha, &inst.costs).unwrap();
        worst = worst.max(check.worst_gap());
        failures += !check.passed() as u32;
        let bayes = inst.costs.bayes_threshold();
        forced += inst.dist.atoms().iter().any(|a| a.value == bayes) as u32;
        regimes[match check.regime {
            Regime::ConstraintBindingBelow => 0,
            Regime::ConstraintBindingAbove => 1,
            Regime::UnconstrainedOptimum => 2,
        }] += 1;
    }
    let forced_share = forced as f64 / trials as f64;
    outcome(
        failures == 0 && worst <= GAP_TOLERANCE && forced_share >= 0.15,
        format!(
            "{trials} instances, {failures} failures, worst gap {worst:.3e}, forced atoms {:.1}%, regimes (i/ii/iii) {regimes:?}",
            100.0 * forced_share
        ),
    )
}

fn random_distribution(rng: &mut ChaCha8Rng) -> DiscreteDistribution {
    let n = rng.random_range(1..=16);
    let raw: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let value = if rng.random::<bool>() { rng.random_range(0..=10) as f64 / 10.0 } else { rng.random() };
            (value, 0.001 + rng.random::<f64>())
        })
        .collect();
    DiscreteDistribution::normalize(&raw).unwrap()
}

/// `E[H_q] = alpha` over 10^3 distributions and a 19-point grid.
fn rate_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let dist = random_distribution(&mut rng);
        for k in 1..=19 {
            let alpha = k as f64 * 0.05;
            for choice in [QuantileChoice::Lower, QuantileChoice::Upper] {
                let c = ThresholdClassifier::build(&dist, alpha, choice).unwrap();
                worst = worst.max((c.predicted_positive_rate(&dist) - alpha).abs());
            }
        }
    }
    outcome(worst <= 1e-12, format!("19000 (dist, alpha) pairs, worst |E[H] - alpha| {worst:.3e}"))
}

/// Cost of H(m) flat in m at q = b/(a+b), and equal to the Bayes classifier.
fn flatness() -> Outcome {
    let (mut instances, mut worst_flat, mut worst_bayes) = (0, 0.0f64, 0.0f64);
    for seed in 0..10_000u64 {
        let inst = random_instance(seed, 10).unwrap();
        let bayes = inst.costs.bayes_threshold();
        let parts = inst.dist.cdf_parts(bayes);
        let alpha = parts.above + 0.5 * parts.at;
        if parts.at == 0.0 || !(alpha > 0.0 && alpha < 1.0) {
            continue;
        }
        let hq = ThresholdClassifier::build(&inst.dist, alpha, QuantileChoice::Lower).unwrap();
        if hq.threshold() != bayes {
            continue;
        }
        instances += 1;
        let reference = cost_posterior(&inst.dist, &hq, &inst.costs);
        for m in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let c = hq.with_tie_mass(m).unwrap();
            worst_flat = worst_flat.max((cost_posterior(&inst.dist, &c, &inst.costs) - reference).abs());
        }
        let classical = ThresholdClassifier::new(bayes, 0.0).unwrap();
        worst_bayes = worst_bayes.max((cost_posterior(&inst.dist, &classical, &inst.costs) - reference).abs());
    }
    outcome(
        instances >= 1000 && worst_flat <= 1e-12 && worst_bayes <= 1e-12,
        format!("{instances} instances, worst spread in m {worst_flat:.3e}, worst gap to Bayes classifier {worst_bayes:.3e}"),
    )
}

/// precision = recall * prevalence / ppr, and the recall-at-top oracle matches H_q.
fn precision_recall_equivalence() -> Outcome {
    let (mut worst_link, mut worst_oracle, mut evaluated) = (0.0f64, 0.0f64, 0);
    for seed in 0..5_000u64 {
        let inst = random_instance(seed, 10).unwrap();
        let prevalence = inst.dist.mean();
        let hq = ThresholdClassifier::build(&inst.dist, inst.alpha, QuantileChoice::Lower).unwrap();
        let (lo, hi) = hq.sandwich();
        for c in [hq, lo, hi] {
            let r = metrics_posterior(&inst.dist, &c, &inst.costs).unwrap();
            if let Some(p) = r.precision {
                worst_link = worst_link.max((p - r.recall * r.positive_prevalence / r.ppr).abs());
                evaluated += 1;
            }
        }
        let recall_costs = CostParams::new(1.0 / prevalence, 0.0).unwrap();
        let hq_cost = cost_posterior(&inst.dist, &hq, &recall_costs);
        for constraint in [ConstraintSpec::RateAtMost(inst.alpha), ConstraintSpec::RateEqual(inst.alpha)] {
            let best = brute_force_optimum(&inst.dist, &recall_costs, constraint).unwrap();
            worst_oracle = worst_oracle.max((best.optimum - hq_cost).abs());
        }
    }
    outcome(
        worst_link <= 1e-12 && worst_oracle <= GAP_TOLERANCE,
        format!("{evaluated} classifiers, worst link error {worst_link:.3e}, worst recall-oracle gap {worst_oracle:.3e}"),
    )
}

fn binormal_analytics() -> Outcome {
    let symmetric = BinormalModel::new(0.5, -1.0, 1.0, 1.0).unwrap();
    let r = symmetric.analytic_plugin(0.5, &CostParams::default()).unwrap();
    let symmetric_ok = r.x_alpha.abs() <= 1e-10 && (r.q - 0.5).abs() <= 1e-10;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = 0.05 + 0.9 * rng.random::<f64>();
        let mu = -5.0 + 10.0 * rng.random::<f64>();
        let nu = mu + 0.05 + 5.0 * rng.random::<f64>();
        let sigma = 0.1 + 3.0 * rng.random::<f64>();
        let m = BinormalModel::new(p, mu, nu, sigma).unwrap();
        for k in 1..=9 {
            let alpha = k as f64 / 10.0;
            let x = m.solve_x_alpha(alpha).unwrap();
            worst = worst.max((m.mixture_cdf(x) - (1.0 - alpha)).abs());
        }
    }
    outcome(
        symmetric_ok && worst <= 1e-12,
        format!("symmetric x_alpha {:.3e}, q {:.17}; worst CDF residual over 900 cuts {worst:.3e}", r.x_alpha, r.q),
    )
}

/// Empirical recall of the analytic cut against every window of equal size.
fn monte_carlo_optimality() -> Outcome {
    let n = 1_000_000;
    let alpha = 0.1;
    let m = BinormalModel::new(0.2, 0.0, 2.0, 1.0).unwrap();
    let cut = m.solve_x_alpha(alpha).unwrap();
    let mut xs = m.sample_features(n, 6).unwrap();
    xs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Prefix counts of positives in ascending feature order.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0u64);
    for (_, label) in &xs {
        prefix.push(prefix.last().unwrap() + label.is_positive() as u64);
    }
    let k = xs.iter().filter(|(x, _)| *x > cut).count();
    let positives = prefix[n] as f64;
    let analytic_hits = prefix[n] - prefix[n - k];
    // Every contiguous block of k points, which covers upper and lower
    // feature thresholds and two-sided intervals with the same ppr.
    let best_competitor = (0..n - k).map(|start| prefix[start + k] - prefix[start]).max().unwrap_or(0);

    let empirical = analytic_hits as f64 / positives;
    let closed_form = normal::sf((cut - m.nu()) / m.sigma());
    let se = (closed_form * (1.0 - closed_form) / positives).sqrt();
    outcome(
        analytic_hits >= best_competitor && (empirical - closed_form).abs() <= 3.0 * se,
        format!(
            "k = {k}, recall {empirical:.6} vs closed form {closed_form:.6} (3 se = {:.2e}), best competitor recall {:.6}",
            3.0 * se,
            best_competitor as f64 / positives
        ),
    )
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_topk");
    let dir = TempDir::new().unwrap();
    let csv: PathBuf = dir.path().join("scores.csv");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut text = String::from("score,label,weight\n");
    for _ in 0..500 {
        let z = rng.random_range(0..=20) as f64 / 20.0;
        let y = if rng.random::<f64>() < z { 1 } else { -1 };
        text += &format!("{z},{y},{}\n", 0.5 + rng.random::<f64>());
    }
    std::fs::write(&csv, text).unwrap();

    let costs = CostParams::new(1.5, 0.5).unwrap();
    let mut round_trip = true;
    for alpha in [0.05, 0.137, 0.5, 0.9] {
        let spec_path = dir.path().join("spec.toml");
        let status = Command::new(bin)
            .args(["fit", "--input", csv.to_str().unwrap(), "--alpha", &alpha.to_string()])
            .args(["--output", spec_path.to_str().unwrap()])
            .status()
            .unwrap();
        round_trip &= status.success();
        let data = parse_csv(&csv).unwrap();
        let in_memory = commands::fit_dataset(&data, alpha, QuantileChoice::Lower).unwrap();
        let parsed = ClassifierSpecFile::read(&spec_path).unwrap();
        round_trip &= parsed.q.to_bits() == in_memory.threshold().to_bits()
            && parsed.m.to_bits() == in_memory.tie_mass().to_bits()
            && parsed.alpha.to_bits() == alpha.to_bits();
        for mode in [EvalMode::Labels, EvalMode::Posterior] {
            let from_file = commands::eval(&csv, &spec_path, mode, &costs).unwrap();
            let direct = commands::evaluate(&data, &in_memory, mode, &costs).unwrap();
            round_trip &= format!("{from_file:?}") == format!("{direct:?}");
        }
    }

    let verify = Command::new(bin).args(["verify", "--seed", "42", "--trials", "1000"]).output().unwrap();
    let verify_ok = verify.status.code() == Some(0);

    let golden = Command::new(bin)
        .args(["binormal", "--p", "0.5", "--mu", "-1", "--nu", "1", "--sigma", "1", "--alpha", "0.5"])
        .output()
        .unwrap();
    let golden_ok = golden.status.success() && golden.stdout == include_bytes!("golden/binormal_symmetric.txt");

    outcome(
        round_trip && verify_ok && golden_ok,
        format!("spec round-trip {round_trip}, verify exit {:?}, binormal golden {golden_ok}", verify.status.code()),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 oracle equivalence", timed(Duration::from_secs(60), oracle_equivalence)),
        ("2 rate exactness", timed(Duration::from_secs(5), rate_exactness)),
        ("3 flatness at the Bayes threshold", timed(Duration::from_secs(60), flatness)),
        ("4 precision/recall equivalence", timed(Duration::from_secs(60), precision_recall_equivalence)),
        ("5 binormal analytics", timed(Duration::from_secs(5), binormal_analytics)),
        ("6 Monte Carlo optimality", timed(Duration::from_secs(30), monte_carlo_optimality)),
        ("7 CLI contract", timed(Duration::from_secs(60), cli_contract)),
    ];
    let mut failed = Vec::new();
    for (name, out) in &criteria {
        println!("{} criterion {name}: {}", if out.passed { "PASS" } else { "FAIL" }, out.detail);
        if !out.passed {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
