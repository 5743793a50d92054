use std::path::Path;

use super::*;

fn argv(s: &str) -> Vec<String> {
    std::iter::once("revgraph")
        .chain(s.split_whitespace())
        .map(String::from)
        .collect()
}

fn code(s: &str) -> i32 {
    match run(argv(s)) {
        Ok(()) => 0,
        Err(e) => e.exit_code(),
    }
}

/// Runs with `--out` under `dir` and returns the main output.
fn run_to(dir: &Path, name: &str, s: &str) -> String {
    let out = dir.join(name);
    run(argv(&format!("{s} --out {}", out.display()))).unwrap();
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn parses_every_subcommand() {
    for line in [
        "sweep --n 3,4 --c 0.5,1.5 --trials 2 --seed 1",
        "transposition-sweep --n 3 --lambda 0.1 --variants noflips",
        "components --n 4 --c 1.5 --gens transpositions",
        "explore --n 6 --c 1.5 --trials 3 --cutoff 100",
        "survival --epsilon -0.5,0.5",
        "branching --offspring poisson --lambda 2",
        "tree --n 64 --c 1.5 --runs 2",
        "distance --n 3 --to -1,-2,-3",
        "density --n 3 --set -",
        "critical-rates --lengths 7.6",
        "replay run.manifest.json --threads 2",
    ] {
        Cli::try_parse_from(argv(line)).unwrap_or_else(|e| panic!("{line}: {e}"));
    }
}

#[test]
fn threads_are_not_recorded() {
    let args: Vec<String> = argv("sweep --threads 4 --n 3 --threads=2")[1..].to_vec();
    assert_eq!(strip_threads(&args), argv("sweep --n 3")[1..].to_vec());
}

#[test]
fn error_classes() {
    assert_eq!(CliError::from(Error::Infeasible("x".into())).exit_code(), 3);
    assert_eq!(CliError::from(Error::Io("x".into())).exit_code(), 4);
    assert_eq!(
        CliError::from(Error::InvalidParameter("x".into())).exit_code(),
        2
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = dir.path().join("ok.csv");
    assert_eq!(
        code(&format!("survival --epsilon 0.5 --out {}", ok.display())),
        0
    );
    assert_eq!(code("sweep --bogus"), 2);
    assert_eq!(code("components --n 4 --c 1 --lambda 0.1"), 2);
    assert_eq!(code("components --n 9 --c 1 --seed 1"), 3);
    assert_eq!(code("tree --n 15 --c 1.5 --seed 1"), 3);
    assert_eq!(code("sweep --n 3 --config /nonexistent/cfg"), 4);
    assert_eq!(code("density --n 3 --set /nonexistent/set"), 4);
    assert_eq!(code("survival --epsilon 1 --out /nonexistent/dir/x.csv"), 4);
}

#[test]
fn params_flatten_groups() {
    let cli = Cli::try_parse_from(argv("sweep --n 3 --c 1.5 --seed 7")).unwrap();
    let p = params(&cli);
    assert_eq!(p["n"], serde_json::json!([3]));
    assert_eq!(p["c"], serde_json::json!([1.5]));
    assert_eq!(p["seed"], serde_json::json!(7));
    assert_eq!(p["subcommand"], serde_json::json!("sweep"));
}

#[test]
fn survival_csv() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(dir.path(), "s.csv", "survival --epsilon 1");
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("epsilon,lambda,root,residual,iterations")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let root: f64 = row[2].parse().unwrap();
    assert!((root - 0.796_812_130_020_02).abs() < 1e-12);
}

#[test]
fn sweep_writes_companions_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let trials = run_to(dir.path(), "run.csv", "sweep --n 3 --c 1.5 --trials 2");
    assert!(trials.starts_with("n,c,lambda,method,trial,largest,second,vertex_count,seed,gens"));
    assert_eq!(trials.lines().count(), 3);
    for suffix in [".summary.csv", ".plot.csv", ".manifest.json"] {
        assert!(
            dir.path().join(format!("run.csv{suffix}")).exists(),
            "{suffix}"
        );
    }
    let m = RunManifest::read(&dir.path().join("run.csv.manifest.json")).unwrap();
    // a drawn seed is recorded both as a parameter and in the rerun arguments
    let seed = m.master_seed.unwrap();
    assert!(m
        .args
        .windows(2)
        .any(|w| w[0] == "--seed" && w[1] == seed.to_string()));
    assert_eq!(m.command, "sweep");
    assert_eq!(m.outputs.len(), 3);

    let replayed = dir.path().join("again.csv");
    let manifest = dir.path().join("run.csv.manifest.json");
    run(argv(&format!(
        "replay {} --out {}",
        manifest.display(),
        replayed.display()
    )))
    .unwrap();
    assert_eq!(std::fs::read_to_string(replayed).unwrap(), trials);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "n = 3\nc = 1.5\ntrials = 4\nseed = 11\n").unwrap();
    let a = run_to(
        dir.path(),
        "a.csv",
        &format!("sweep --config {}", cfg.display()),
    );
    let b = run_to(
        dir.path(),
        "b.csv",
        "sweep --n 3 --c 1.5 --trials 4 --seed 11",
    );
    assert_eq!(a, b);
    let c = run_to(
        dir.path(),
        "c.csv",
        &format!("sweep --config {} --trials 1", cfg.display()),
    );
    assert_eq!(c.lines().count(), 2);
}

#[test]
fn distance_and_density() {
    let dir = tempfile::tempdir().unwrap();
    let d = run_to(dir.path(), "d.csv", "distance --n 3 --to (-3,-2,-1)");
    assert_eq!(
        d.lines().nth(1),
        Some("\"(+1,+2,+3)\",\"(-3,-2,-1)\",reversals,1")
    );
    let diam = run_to(dir.path(), "diam.csv", "distance --n 4 --diameter");
    assert_eq!(diam.lines().nth(1), Some("4,reversals,5"));

    let set = dir.path().join("set.txt");
    std::fs::write(&set, "# identity\n0\n").unwrap();
    let text = run_to(
        dir.path(),
        "dens.json",
        &format!("density --n 3 --set {} --format json", set.display()),
    );
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["boundary"], 6);
    assert_eq!(doc["is_dense"], false);
    assert_eq!(doc["bound_holds"], true);
}

#[test]
fn components_edge_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.bin");
    let text = run_to(
        dir.path(),
        "c.json",
        &format!(
            "components --n 4 --c 1.5 --seed 5 --format json --save-edges {}",
            edges.display()
        ),
    );
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let g = random_graph::read_edges(std::fs::File::open(&edges).unwrap()).unwrap();
    assert_eq!(g.edge_count() as u64, doc["edges"].as_u64().unwrap());
    assert_eq!(
        random_graph::components(&g).largest,
        doc["largest"].as_u64().unwrap()
    );
}

#[test]
fn critical_rates_round_to_two_places() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(dir.path(), "r.csv", "critical-rates --lengths 2.5,8.8");
    let rounded: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(rounded, ["0.23", "0.02"]);
}
