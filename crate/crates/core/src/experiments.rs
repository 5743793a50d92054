//! Threshold sweeps and the regime-specific suites built on them.
//!
//! All trial seeds come from [`graph_seed`], which depends on the master seed,
//! `n` and the trial index only. Every rate `c` in a sweep therefore reuses the
//! same per-edge uniforms, and larger `c` always yields a supergraph.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::branching::{survival_fixed_point, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::random_graph::{
    default_cutoff, graph_seed, lazy_trials, sample_components, LambdaSpec, SampleConfig,
    EXPLICIT_LIMIT,
};
use crate::signed_perm::{group_order, GeneratorKind, GeneratorSet, MAX_RANK_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Explicit,
    Lazy,
    Both,
}

impl Method {
    fn expand(self) -> &'static [Method] {
        match self {
            Method::Explicit => &[Method::Explicit],
            Method::Lazy => &[Method::Lazy],
            Method::Both => &[Method::Explicit, Method::Lazy],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Explicit => "explicit",
            Method::Lazy => "lazy",
            Method::Both => "both",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Method::Explicit),
            "lazy" => Ok(Method::Lazy),
            "both" => Ok(Method::Both),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// Exploration cutoff as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CutoffRule {
    PowerOfN(u32),
    Fixed(u64),
}

impl Default for CutoffRule {
    fn default() -> Self {
        CutoffRule::PowerOfN(4)
    }
}

impl CutoffRule {
    pub fn cutoff(&self, n: usize) -> u64 {
        match *self {
            CutoffRule::PowerOfN(4) => default_cutoff(n),
            CutoffRule::PowerOfN(k) => (n as u64).saturating_pow(k),
            CutoffRule::Fixed(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub c_values: Vec<f64>,
    pub trials_per_cell: u64,
    pub master_seed: u64,
    pub method: Method,
    pub cutoff: CutoffRule,
    pub gens: GeneratorKind,
    /// Adds a row family `c = 1 + n^{-1/8}` per `n`.
    pub window_rows: bool,
}

impl SweepConfig {
    pub fn new(
        n_values: Vec<usize>,
        c_values: Vec<f64>,
        trials_per_cell: u64,
        master_seed: u64,
    ) -> Self {
        SweepConfig {
            n_values,
            c_values,
            trials_per_cell,
            master_seed,
            method: Method::Explicit,
            cutoff: CutoffRule::default(),
            gens: GeneratorKind::Reversals,
            window_rows: false,
        }
    }
}

/// Default grid of scaled rates around the threshold.
pub const DEFAULT_C_VALUES: [f64; 9] = [0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0];

/// One sampled graph (explicit) or one exploration (lazy).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub c: f64,
    pub lambda: f64,
    pub method: Method,
    pub trial: u64,
    /// Largest component (explicit) or explored component size (lazy).
    pub largest: u64,
    /// Second largest component; absent for lazy explorations.
    pub second: Option<u64>,
    pub vertex_count: u64,
    pub seed: u64,
    pub gens: GeneratorKind,
    /// Lazy only: whether the exploration reached the cutoff.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hit_cutoff: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub c: f64,
    pub lambda: f64,
    pub gens: GeneratorKind,
    pub method: Method,
    /// Explicit: mean of `|C1| / |B_n|`. Lazy: fraction of explorations hitting the cutoff.
    pub mean_largest_fraction: f64,
    /// Standard deviation across trials of the per-trial quantity above.
    pub std_largest_fraction: f64,
    pub mean_second_over_first: Option<f64>,
    /// Fixed-point survival probability at `ε = c - 1`; zero for `c <= 1`.
    pub predicted_wp: f64,
    /// `2(c - 1)` for `c > 1`.
    pub predicted_wp_small_eps: f64,
    pub trials: u64,
    /// `"ok"` or the reason the cell was skipped.
    pub status: String,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        self.std_largest_fraction / (self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub trials: Vec<TrialRecord>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (mean, var.sqrt())
}

fn predicted(c: f64) -> Result<(f64, f64)> {
    if c > 1.0 {
        Ok((
            survival_fixed_point(c - 1.0, DEFAULT_TOL)?.root,
            2.0 * (c - 1.0),
        ))
    } else {
        Ok((0.0, 0.0))
    }
}

fn feasibility(
    n: usize,
    c: f64,
    method: Method,
    gens: GeneratorKind,
) -> std::result::Result<GeneratorSet, String> {
    let gs = GeneratorSet::new(gens, n).map_err(|e| e.to_string())?;
    match method {
        Method::Explicit if n > EXPLICIT_LIMIT => {
            return Err(format!(
                "explicit sampling limited to n <= {EXPLICIT_LIMIT}"
            ))
        }
        Method::Lazy if n > MAX_RANK_N => {
            return Err(format!("lazy exploration limited to n <= {MAX_RANK_N}"))
        }
        _ => {}
    }
    if !(c.is_finite() && c >= 0.0) || c > gs.degree() as f64 {
        return Err(format!("c = {c} outside [0, {}]", gs.degree()));
    }
    Ok(gs)
}

fn run_cell(
    n: usize,
    c: f64,
    method: Method,
    config: &SweepConfig,
    trials_out: &mut Vec<TrialRecord>,
) -> Result<SweepRow> {
    let (wp_root, wp_small) = predicted(c)?;
    let mut row = SweepRow {
        n,
        c,
        lambda: f64::NAN,
        gens: config.gens,
        method,
        mean_largest_fraction: f64::NAN,
        std_largest_fraction: f64::NAN,
        mean_second_over_first: None,
        predicted_wp: wp_root,
        predicted_wp_small_eps: wp_small,
        trials: 0,
        status: "ok".into(),
    };
    let gs = match feasibility(n, c, method, config.gens) {
        Ok(gs) => gs,
        Err(reason) => {
            row.status = format!("infeasible: {reason}");
            return Ok(row);
        }
    };
    let lambda = LambdaSpec::Scaled(c).resolve(&gs)?;
    row.lambda = lambda;
    let vertex_count = group_order(n).expect("n <= 16");
    let trials = config.trials_per_cell;
    match method {
        Method::Explicit => {
            let mut fractions = Vec::with_capacity(trials as usize);
            let mut ratios = Vec::with_capacity(trials as usize);
            for t in 0..trials {
                let seed = graph_seed(config.master_seed, n, t);
                let stats =
                    sample_components(&SampleConfig::new(gs, LambdaSpec::Absolute(lambda), seed)?)?;
                fractions.push(stats.largest_fraction());
                ratios.push(stats.second_over_first());
                trials_out.push(TrialRecord {
                    n,
                    c,
                    lambda,
                    method,
                    trial: t,
                    largest: stats.largest,
                    second: Some(stats.second),
                    vertex_count,
                    seed,
                    gens: config.gens,
                    hit_cutoff: None,
                });
            }
            let (m, s) = mean_std(&fractions);
            row.mean_largest_fraction = m;
            row.std_largest_fraction = s;
            row.mean_second_over_first = Some(mean_std(&ratios).0);
        }
        Method::Lazy => {
            let cutoff = config.cutoff.cutoff(n);
            let runs = lazy_trials(gs, lambda, cutoff, trials, config.master_seed)?;
            let hits: Vec<f64> = runs
                .iter()
                .map(|(_, r)| f64::from(u8::from(r.hit_cutoff)))
                .collect();
            for (t, (seed, r)) in runs.into_iter().enumerate() {
                trials_out.push(TrialRecord {
                    n,
                    c,
                    lambda,
                    method,
                    trial: t as u64,
                    largest: r.component_size,
                    second: None,
                    vertex_count,
                    seed,
                    gens: config.gens,
                    hit_cutoff: Some(r.hit_cutoff),
                });
            }
            let (m, s) = mean_std(&hits);
            row.mean_largest_fraction = m;
            row.std_largest_fraction = s;
        }
        Method::Both => unreachable!("expanded by caller"),
    }
    row.trials = trials;
    Ok(row)
}

/// Rows in `(n, c, method)` order, with `c` in the order given (window rows last per `n`).
pub fn run_threshold_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    if config.trials_per_cell == 0 {
        return Err(Error::InvalidParameter(
            "trials per cell must be at least 1".into(),
        ));
    }
    if config.n_values.is_empty() || config.c_values.is_empty() && !config.window_rows {
        return Err(Error::InvalidParameter(
            "sweep needs at least one n and one c".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut trials = Vec::new();
    for &n in &config.n_values {
        let mut cs = config.c_values.clone();
        if config.window_rows && n > 0 {
            cs.push(1.0 + (n as f64).powf(-0.125));
        }
        for c in cs {
            for &method in config.method.expand() {
                rows.push(run_cell(n, c, method, config, &mut trials)?);
            }
        }
    }
    Ok(SweepOutput { rows, trials })
}

/// The sweep pipeline over a sign-change transposition Cayley graph.
pub fn run_transposition_analogue(config: &SweepConfig) -> Result<SweepOutput> {
    if config.gens == GeneratorKind::Reversals {
        return Err(Error::InvalidParameter(
            "transposition analogue needs a transposition generator set".into(),
        ));
    }
    run_threshold_sweep(config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubcriticalRow {
    pub n: usize,
    pub trials: u64,
    pub vertex_count: u64,
    pub max_largest: u64,
    pub mean_fraction: f64,
    pub max_fraction: f64,
    /// `max |C1| / (n ln n)`
    pub ratio_n_ln_n: f64,
    /// `max |C1| / ln |B_n|`
    pub ratio_ln_vertices: f64,
    /// `max_fraction <= 1e-3`
    pub fraction_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubcriticalReport {
    pub epsilon: f64,
    pub c: f64,
    pub rows: Vec<SubcriticalRow>,
    /// Mean fractions strictly decrease as `n` increases.
    pub strictly_decreasing: bool,
}

pub const SUBCRITICAL_FRACTION_BOUND: f64 = 1e-3;

fn explicit_stats(
    n: usize,
    c: f64,
    trials: u64,
    master_seed: u64,
    gens: GeneratorKind,
) -> Result<Vec<crate::random_graph::ComponentStats>> {
    let gs = GeneratorSet::new(gens, n)?;
    if n > EXPLICIT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXPLICIT_LIMIT,
            what: "explicit sampling",
        });
    }
    (0..trials)
        .map(|t| {
            let cfg = SampleConfig::new(gs, LambdaSpec::Scaled(c), graph_seed(master_seed, n, t))?;
            sample_components(&cfg)
        })
        .collect()
}

/// Explicit samples at `c = 1 - ε` for each `(n, trials)` cell.
pub fn run_subcritical_suite(
    cells: &[(usize, u64)],
    epsilon: f64,
    master_seed: u64,
    gens: GeneratorKind,
) -> Result<SubcriticalReport> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "subcritical suite needs 0 < epsilon <= 1, got {epsilon}"
        )));
    }
    let c = 1.0 - epsilon;
    let mut cells = cells.to_vec();
    cells.sort_unstable();
    let mut rows = Vec::new();
    for &(n, trials) in &cells {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        let stats = explicit_stats(n, c, trials, master_seed, gens)?;
        let vertex_count = group_order(n).expect("explicit n");
        let fractions: Vec<f64> = stats.iter().map(|s| s.largest_fraction()).collect();
        let max_largest = stats.iter().map(|s| s.largest).max().unwrap_or(0);
        let max_fraction = fractions.iter().copied().fold(0.0, f64::max);
        let nf = n as f64;
        rows.push(SubcriticalRow {
            n,
            trials,
            vertex_count,
            max_largest,
            mean_fraction: mean_std(&fractions).0,
            max_fraction,
            ratio_n_ln_n: if n > 1 {
                max_largest as f64 / (nf * nf.ln())
            } else {
                f64::NAN
            },
            ratio_ln_vertices: max_largest as f64 / (vertex_count as f64).ln(),
            fraction_bound_holds: max_fraction <= SUBCRITICAL_FRACTION_BOUND,
        });
    }
    let strictly_decreasing = rows
        .windows(2)
        .all(|w| w[1].mean_fraction < w[0].mean_fraction);
    Ok(SubcriticalReport {
        epsilon,
        c,
        rows,
        strictly_decreasing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessRow {
    pub n: usize,
    pub trials: u64,
    /// `|C2| / |C1|` per trial.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub mean_largest_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub epsilon: f64,
    pub c: f64,
    pub rows: Vec<UniquenessRow>,
    /// Mean ratios strictly decrease as `n` increases.
    pub shrinking: bool,
}

/// Explicit samples at `c = 1 + ε`, recording second/first component ratios.
pub fn run_uniqueness_check(
    cells: &[(usize, u64)],
    epsilon: f64,
    master_seed: u64,
    gens: GeneratorKind,
) -> Result<UniquenessReport> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "uniqueness check needs epsilon > 0, got {epsilon}"
        )));
    }
    let c = 1.0 + epsilon;
    let mut cells = cells.to_vec();
    cells.sort_unstable();
    let mut rows = Vec::new();
    for &(n, trials) in &cells {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        let stats = explicit_stats(n, c, trials, master_seed, gens)?;
        let ratios: Vec<f64> = stats.iter().map(|s| s.second_over_first()).collect();
        let fractions: Vec<f64> = stats.iter().map(|s| s.largest_fraction()).collect();
        rows.push(UniquenessRow {
            n,
            trials,
            max_ratio: ratios.iter().copied().fold(0.0, f64::max),
            mean_ratio: mean_std(&ratios).0,
            mean_largest_fraction: mean_std(&fractions).0,
            ratios,
        });
    }
    let shrinking = rows.windows(2).all(|w| w[1].mean_ratio < w[0].mean_ratio);
    Ok(UniquenessReport {
        epsilon,
        c,
        rows,
        shrinking,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalRateRow {
    pub block_length: f64,
    /// `1 / C(L+1, 2) = 2 / ((L+1) L)` with `L` real.
    pub critical_probability: f64,
}

impl CriticalRateRow {
    /// Rounded to two decimals.
    pub fn rounded(&self) -> f64 {
        (self.critical_probability * 100.0).round() / 100.0
    }
}

/// Mean genes per synteny block for ten yeast genome pairs.
pub const YEAST_BLOCK_LENGTHS: [f64; 10] = [7.6, 6.0, 6.6, 5.0, 5.0, 8.8, 2.6, 2.5, 2.7, 2.9];

pub fn critical_rate_table(block_lengths: &[f64]) -> Result<Vec<CriticalRateRow>> {
    block_lengths
        .iter()
        .map(|&len| {
            if !(len.is_finite() && len >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "block length {len} must be >= 1"
                )));
            }
            Ok(CriticalRateRow {
                block_length: len,
                critical_probability: 2.0 / ((len + 1.0) * len),
            })
        })
        .collect()
}

/// Runs independent sweeps for several generator families in parallel and
/// concatenates their outputs in the order given.
pub fn run_sweeps(configs: &[SweepConfig]) -> Result<Vec<SweepOutput>> {
    configs.par_iter().map(run_threshold_sweep).collect()
}
