//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use revgraph::branching::{self, BranchingConfig, Offspring};
use revgraph::cayley::{self, GraphSpec, VertexSet};
use revgraph::experiments;
use revgraph::random_graph;
use revgraph::{GeneratorKind, GeneratorSet, Reversal, SignedPerm};

const MASTER_SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn perm(s: &str) -> SignedPerm {
    s.parse().unwrap()
}

fn c1_worked_examples() -> Outcome {
    let cases = [
        ("(+1,+4,+2,+5,+3)", (3, 5), "(+1,+4,-3,-5,-2)"),
        ("(+5,+2,-1,+3,-4)", (2, 2), "(+5,-2,-1,+3,-4)"),
        ("(+5,+2,-1,+3,-4)", (2, 3), "(+5,+1,-2,+3,-4)"),
    ];
    let mut bad = Vec::new();
    for (v, (i, j), want) in cases {
        let r = Reversal::new(i, j).unwrap();
        let got = perm(v).apply_reversal(r).unwrap();
        let via_compose = perm(v).compose(&r.as_perm(5).unwrap()).unwrap();
        if got != perm(want) || via_compose != got {
            bad.push(format!("{v}·ρ({i},{j}) = {got}, want {want}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "3/3 exact".into()
        } else {
            bad.join("; ")
        },
    )
}

fn c2_graph_facts() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 1..=5usize {
        let gens = GeneratorSet::reversals(n).unwrap();
        let spec = GraphSpec::new(gens);
        let degree_ok = spec.degree() == (n * (n + 1) / 2) as u64
            && cayley::neighbors(&SignedPerm::identity(n).unwrap(), &gens)
                .unwrap()
                .len()
                == n * (n + 1) / 2;
        let connected =
            cayley::reachable_from_identity(&spec).unwrap() == spec.vertex_count().unwrap();
        let diam = cayley::diameter(&spec).unwrap();
        let asserted = n >= 2;
        let ok = degree_ok && connected && diam as usize == n + 1;
        if asserted {
            pass &= ok;
        }
        parts.push(format!(
            "n={n}: degree {} connected {} diameter {} (n+1={}){}",
            if degree_ok { "ok" } else { "BAD" },
            connected,
            diam,
            n + 1,
            if asserted { "" } else { " [reported]" }
        ));
    }
    outcome(pass, parts.join("; "))
}

/// Plain bisection on 1 - x - e^{-λx} over (0, 1].
fn bisection_oracle(lambda: f64) -> f64 {
    let h = |x: f64| 1.0 - x - (-lambda * x).exp();
    let (mut lo, mut hi) = (1e-9, 1.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    assert!(h(x).abs() < 1e-12);
    x
}

fn c3_survival_solver() -> Outcome {
    let r = branching::survival_fixed_point(1.0, 1e-12).unwrap();
    let oracle = bisection_oracle(2.0);
    let small = branching::survival_fixed_point(0.01, 1e-12).unwrap().root;
    let rel = (small - 0.02).abs() / 0.02;
    let pass = (r.root - 0.796812).abs() <= 1e-6 && (r.root - oracle).abs() <= 1e-6 && rel <= 0.05;
    outcome(
        pass,
        format!(
            "root(λ=2) = {:.9} oracle {:.9}; root(ε=0.01) = {small:.6}, {:.2}% from 2ε",
            r.root,
            oracle,
            rel * 100.0
        ),
    )
}

fn c4_supercritical() -> Outcome {
    let target = branching::survival_fixed_point(0.5, 1e-12).unwrap().root;
    let rep =
        experiments::run_uniqueness_check(&[(7, 10)], 0.5, MASTER_SEED, GeneratorKind::Reversals)
            .unwrap();
    let row = &rep.rows[0];
    let pass = (row.mean_largest_fraction - target).abs() <= 0.10 && row.max_ratio <= 0.02;
    outcome(
        pass,
        format!(
            "n=7 c=1.5 10 seeds: mean |C1|/|B_n| = {:.4} vs ℘(0.5) = {target:.4}; max |C2|/|C1| = {:.5}",
            row.mean_largest_fraction, row.max_ratio
        ),
    )
}

fn c5_subcritical() -> Outcome {
    let rep = experiments::run_subcritical_suite(
        &[(6, 10), (7, 10), (8, 3)],
        0.5,
        MASTER_SEED,
        GeneratorKind::Reversals,
    )
    .unwrap();
    let n7 = rep.rows.iter().find(|r| r.n == 7).unwrap();
    let pass = n7.fraction_bound_holds && rep.strictly_decreasing;
    let fractions: Vec<String> = rep
        .rows
        .iter()
        .map(|r| format!("n={}: {:.3e}", r.n, r.mean_fraction))
        .collect();
    outcome(
        pass,
        format!(
            "n=7 max fraction {:.3e} (bound 1e-3); mean fractions {} strictly decreasing {}",
            n7.max_fraction,
            fractions.join(", "),
            rep.strictly_decreasing
        ),
    )
}

fn c6_lazy_vs_explicit() -> Outcome {
    let explicit =
        experiments::run_uniqueness_check(&[(6, 20)], 0.5, MASTER_SEED, GeneratorKind::Reversals)
            .unwrap();
    let explicit_mean = explicit.rows[0].mean_largest_fraction;
    let gens = GeneratorSet::reversals(6).unwrap();
    let lambda = 1.5 / gens.degree() as f64;
    let lazy =
        random_graph::estimate_giant_fraction(gens, lambda, 10_000, 500, MASTER_SEED ^ 0x5a5a)
            .unwrap();
    let pass = (lazy.mean - explicit_mean).abs() <= 0.05;
    outcome(
        pass,
        format!(
            "lazy {:.4} ± {:.4} (500 trials) vs explicit {explicit_mean:.4} (20 seeds)",
            lazy.mean, lazy.std_error
        ),
    )
}

fn c7_restricted_tree() -> Outcome {
    let n = 64;
    let lambda = 1.5 / (65.0 * 64.0 / 2.0);
    let batch = branching::run_restricted_trees(n, lambda, 2000, MASTER_SEED).unwrap();
    let wp = branching::survival_fixed_point(0.5, 1e-12).unwrap().root;
    let threshold = wp - 3.0 * batch.std_error;
    let distinct = batch.duplicate_violations == 0 && batch.bookkeeping_violations == 0;
    let pass = distinct && batch.success_rate >= threshold;
    outcome(
        pass,
        format!(
            "2000 runs: duplicates {} bookkeeping {}; success {:.4} vs ℘(0.5) - 3se = {threshold:.4} (target {}, m = {}, λm = {:.3})",
            batch.duplicate_violations,
            batch.bookkeeping_violations,
            batch.success_rate,
            batch.target_size,
            batch.m_offspring,
            lambda * batch.m_offspring as f64
        ),
    )
}

/// Survival probability of Binomial(m, p) offspring: root of 1 - x = (1 - px)^m.
fn binomial_survival(m: u64, p: f64) -> f64 {
    let h = |x: f64| 1.0 - x - (1.0 - p * x).powf(m as f64);
    let (mut lo, mut hi) = (1e-9, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn c8_branching_bounds() -> Outcome {
    let (m, p) = (50, 0.03);
    let sim = |law| {
        branching::simulate_branching(&BranchingConfig::new(law), 10_000, MASTER_SEED).unwrap()
    };
    let lower = sim(Offspring::Binomial { m: m - 1, p });
    let root = sim(Offspring::RootBinomial { m, p });
    let upper = sim(Offspring::Binomial { m, p });
    let ordered = |a: &branching::SurvivalEstimate, b: &branching::SurvivalEstimate| {
        a.mean <= b.mean || a.overlaps(b)
    };
    let ordering = ordered(&lower, &root) && ordered(&root, &upper);

    let poisson = branching::survival_fixed_point(1.0, 1e-12).unwrap().root;
    let mut approach = true;
    let mut gaps = Vec::new();
    let mut last_gap = f64::INFINITY;
    for (k, m) in [10u64, 100, 1000].into_iter().enumerate() {
        let est = branching::simulate_branching(
            &BranchingConfig::new(Offspring::Binomial {
                m,
                p: 2.0 / m as f64,
            }),
            10_000,
            MASTER_SEED + 1 + k as u64,
        )
        .unwrap();
        let exact = binomial_survival(m, 2.0 / m as f64);
        let gap = (exact - poisson).abs();
        approach &= est.ci_low <= exact && exact <= est.ci_high && gap < last_gap;
        last_gap = gap;
        gaps.push(format!(
            "m={m}: {:.4} [{:.4}, {:.4}]",
            est.mean, est.ci_low, est.ci_high
        ));
    }
    let m1000_covers = {
        let est = branching::simulate_branching(
            &BranchingConfig::new(Offspring::Binomial { m: 1000, p: 0.002 }),
            10_000,
            MASTER_SEED + 3,
        )
        .unwrap();
        est.ci_low <= poisson && poisson <= est.ci_high
    };
    outcome(
        ordering && approach && m1000_covers,
        format!(
            "π(m-1) {:.4}, π0 {:.4}, π(m) {:.4}; Binomial(m, 2/m): {}; Poisson(2) {poisson:.4} in m=1000 CI {m1000_covers}",
            lower.mean,
            root.mean,
            upper.mean,
            gaps.join(", ")
        ),
    )
}

fn c9_boundary() -> Outcome {
    let gens = GeneratorSet::reversals(4).unwrap();
    let diam = cayley::diameter(&GraphSpec::new(gens)).unwrap();
    let order = 384u64;
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED);
    let mut violations = 0;
    for _ in 0..1000 {
        let size = rng.random_range(1..order);
        let ranks = rand::seq::index::sample(&mut rng, order as usize, size as usize);
        let a = VertexSet::from_ranks(4, ranks.into_iter().map(|r| r as u64)).unwrap();
        if !cayley::check_boundary_bound_with_diameter(&a, &gens, diam)
            .unwrap()
            .holds
        {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("1000 subsets of B_4 (diameter {diam}): {violations} violations"),
    )
}

fn c10_critical_rates() -> Outcome {
    let rows = experiments::critical_rate_table(&[2.5, 8.8]).unwrap();
    let rounded: Vec<String> = rows.iter().map(|r| format!("{:.2}", r.rounded())).collect();
    outcome(
        rounded == ["0.23", "0.02"],
        format!("L=2.5 -> {}, L=8.8 -> {}", rounded[0], rounded[1]),
    )
}

fn run_cli(args: &[&str]) -> bool {
    let status = Command::new(env!("CARGO_BIN_EXE_revgraph"))
        .args(args)
        .stderr(std::process::Stdio::null())
        .status()
        .expect("spawn revgraph");
    status.success()
}

fn outputs_equal(a: &Path, b: &Path) -> bool {
    [".", ".summary.csv", ".plot.csv"].iter().all(|suffix| {
        let with = |p: &Path| {
            if *suffix == "." {
                p.to_path_buf()
            } else {
                let mut s = p.as_os_str().to_owned();
                s.push(suffix);
                s.into()
            }
        };
        let (x, y): (std::path::PathBuf, std::path::PathBuf) = (with(a), with(b));
        match (std::fs::read(&x), std::fs::read(&y)) {
            (Ok(x), Ok(y)) => x == y,
            (Err(_), Err(_)) => true,
            _ => false,
        }
    })
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 6] = [
        &[
            "sweep", "--n", "4,5", "--c", "0.5,1.5", "--trials", "3", "--method", "both",
        ],
        &[
            "transposition-sweep",
            "--n",
            "4",
            "--c",
            "1.5",
            "--trials",
            "2",
        ],
        &["components", "--n", "6", "--c", "1.5"],
        &[
            "explore", "--n", "6", "--c", "1.5", "--trials", "40", "--cutoff", "2000",
        ],
        &[
            "branching",
            "--offspring",
            "root-binomial",
            "--m",
            "50",
            "--p",
            "0.03",
            "--trials",
            "2000",
        ],
        &["tree", "--n", "32", "--c", "1.5", "--runs", "100"],
    ];
    let mut failures = Vec::new();
    for cmd in commands {
        let name = cmd[0];
        let base = dir.path().join(format!("{name}-t1"));
        let mut ok = true;
        let mut first: Vec<&str> = cmd.to_vec();
        let base_s = base.display().to_string();
        first.extend(["--seed", "7", "--threads", "1", "--out", &base_s]);
        ok &= run_cli(&first);
        for threads in ["4", "8"] {
            let out = dir.path().join(format!("{name}-t{threads}"));
            let out_s = out.display().to_string();
            let mut args: Vec<&str> = cmd.to_vec();
            args.extend(["--seed", "7", "--threads", threads, "--out", &out_s]);
            ok &= run_cli(&args) && outputs_equal(&base, &out);
        }
        let manifest = format!("{base_s}.manifest.json");
        for threads in ["1", "4", "8"] {
            let out = dir.path().join(format!("{name}-replay{threads}"));
            let out_s = out.display().to_string();
            ok &= run_cli(&["replay", &manifest, "--out", &out_s, "--threads", threads])
                && outputs_equal(&base, &out);
        }
        if !ok {
            failures.push(name);
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "6 subcommands byte-identical at 1/4/8 threads and on replay".to_string()
        } else {
            format!("mismatch: {}", failures.join(", "))
        },
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("worked examples", c1_worked_examples),
        ("graph facts", c2_graph_facts),
        ("survival solver", c3_survival_solver),
        ("supercritical giant", c4_supercritical),
        ("subcritical regime", c5_subcritical),
        ("lazy/explicit equivalence", c6_lazy_vs_explicit),
        ("restricted tree process", c7_restricted_tree),
        ("branching bounds", c8_branching_bounds),
        ("boundary estimate", c9_boundary),
        ("critical-rate table", c10_critical_rates),
        ("determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "{verdict} [{:>2}] {name}: {} ({:.1}s)",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
