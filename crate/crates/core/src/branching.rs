//! Survival probabilities of branching processes.
//!
//! The giant-component fraction is predicted by the positive root of
//! `x + e^{-λx} = 1` with `λ = 1 + ε`, the survival probability of a
//! Poisson(λ) Galton-Watson process. This module solves for that root,
//! simulates the binomial and Poisson processes it is compared with, and runs
//! the restricted tree-growth process inside the reversal graph.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seed::trial_seed;
use crate::signed_perm::{Reversal, SignedPerm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalResult {
    pub epsilon: f64,
    pub lambda: f64,
    pub root: f64,
    /// `root + e^{-λ·root} - 1`
    pub residual: f64,
    pub iterations: u32,
}

pub const DEFAULT_TOL: f64 = 1e-12;

/// Positive root of `x + e^{-(1+ε)x} = 1`, or 0 when `ε <= 0`.
///
/// Bisects `g(x) = (1 - e^{-λx})/x - 1`, which is strictly decreasing on
/// `(0, 1]` with `g(0+) = ε` and `g(1) < 0`, so the trivial root at 0 never
/// enters the bracket. A few Newton steps on `f(x) = 1 - e^{-λx} - x` polish
/// the result.
pub fn survival_fixed_point(epsilon: f64, tol: f64) -> Result<SurvivalResult> {
    if !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "epsilon = {epsilon} is not finite"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let lambda = 1.0 + epsilon;
    if epsilon <= 0.0 {
        return Ok(SurvivalResult {
            epsilon,
            lambda,
            root: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    let g = |x: f64| -(-lambda * x).exp_m1() / x - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut iterations = 0;
    // relative width 2^-60 is below f64 resolution
    while hi - lo > hi * 1e-16 && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mut root = 0.5 * (lo + hi);
    let f = |x: f64| -(-lambda * x).exp_m1() - x;
    for _ in 0..3 {
        let d = lambda * (-lambda * root).exp() - 1.0;
        if d == 0.0 {
            break;
        }
        let next = root - f(root) / d;
        if !(next > 0.0 && next < 1.0) || (next - root).abs() > hi - lo + f64::EPSILON {
            break;
        }
        root = next;
        iterations += 1;
    }
    let residual = root + (-lambda * root).exp() - 1.0;
    if residual.abs() > tol.max(4.0 * f64::EPSILON) {
        return Err(Error::Infeasible(format!(
            "fixed point residual {residual:e} above tolerance {tol:e} at epsilon = {epsilon}"
        )));
    }
    Ok(SurvivalResult {
        epsilon,
        lambda,
        root,
        residual,
        iterations,
    })
}

/// Predicted giant-component fraction for `λ_n = (1 + ε_n) / C(n+1, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WpValue {
    pub epsilon: f64,
    /// The fixed-point root; used as the prediction.
    pub fixed_point: f64,
    /// `2ε`, the small-ε asymptotic branch.
    pub small_epsilon: f64,
    /// Whether `n^{-1/4} < ε < 1`, the window where the prediction is asserted.
    pub in_stated_range: bool,
}

pub fn wp(epsilon_n: f64, n: usize) -> Result<WpValue> {
    let root = survival_fixed_point(epsilon_n, DEFAULT_TOL)?.root;
    let lower = (n as f64).powf(-0.25);
    Ok(WpValue {
        epsilon: epsilon_n,
        fixed_point: root,
        small_epsilon: if epsilon_n > 0.0 {
            2.0 * epsilon_n
        } else {
            0.0
        },
        in_stated_range: epsilon_n > lower && epsilon_n < 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Offspring {
    /// Every individual has Binomial(m, p) children.
    Binomial {
        m: u64,
        p: f64,
    },
    /// The root has Binomial(m, p) children, everyone else Binomial(m-1, p).
    RootBinomial {
        m: u64,
        p: f64,
    },
    Poisson {
        lambda: f64,
    },
}

impl Offspring {
    fn check(&self) -> Result<()> {
        match *self {
            Offspring::Binomial { m, p } | Offspring::RootBinomial { m, p } => {
                if m == 0 {
                    return Err(Error::InvalidParameter("m must be at least 1".into()));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::BadProbability(p));
                }
            }
            Offspring::Poisson { lambda } => {
                if !(lambda.is_finite() && lambda >= 0.0) {
                    return Err(Error::InvalidParameter(format!("Poisson mean {lambda}")));
                }
            }
        }
        Ok(())
    }

    /// Total children of `parents` individuals in generation `generation` (1-based).
    fn draw<R: Rng>(&self, parents: u64, generation: u32, rng: &mut R) -> u64 {
        match *self {
            Offspring::Binomial { m, p } => binomial(parents * m, p, rng),
            Offspring::RootBinomial { m, p } => {
                let per = if generation == 1 { m } else { m - 1 };
                binomial(parents * per, p, rng)
            }
            Offspring::Poisson { lambda } => {
                let mean = lambda * parents as f64;
                if mean == 0.0 {
                    0
                } else {
                    Poisson::new(mean).expect("positive mean").sample(rng) as u64
                }
            }
        }
    }
}

fn binomial<R: Rng>(trials: u64, p: f64, rng: &mut R) -> u64 {
    if trials == 0 || p == 0.0 {
        return 0;
    }
    Binomial::new(trials, p)
        .expect("valid binomial")
        .sample(rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchingConfig {
    pub offspring: Offspring,
    pub max_generations: u32,
    pub population_cap: u64,
}

impl BranchingConfig {
    pub fn new(offspring: Offspring) -> Self {
        BranchingConfig {
            offspring,
            max_generations: 200,
            population_cap: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub survived: u64,
    pub trials: u64,
}

impl SurvivalEstimate {
    pub fn from_counts(survived: u64, trials: u64) -> Self {
        let mean = survived as f64 / trials as f64;
        let std_error = (mean * (1.0 - mean) / trials as f64).sqrt();
        SurvivalEstimate {
            mean,
            std_error,
            ci_low: (mean - 1.96 * std_error).max(0.0),
            ci_high: (mean + 1.96 * std_error).min(1.0),
            survived,
            trials,
        }
    }

    pub fn overlaps(&self, other: &SurvivalEstimate) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

/// One realisation: `true` if the population reached the cap or was still
/// alive after `max_generations`.
pub fn run_branching<R: Rng>(config: &BranchingConfig, rng: &mut R) -> bool {
    let mut alive = 1u64;
    for generation in 1..=config.max_generations {
        alive = config.offspring.draw(alive, generation, rng);
        if alive == 0 {
            return false;
        }
        if alive >= config.population_cap {
            return true;
        }
    }
    true
}

pub fn simulate_branching(
    config: &BranchingConfig,
    trials: u64,
    master_seed: u64,
) -> Result<SurvivalEstimate> {
    config.offspring.check()?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let survived = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master_seed, 0, t));
            run_branching(config, &mut rng)
        })
        .count() as u64;
    Ok(SurvivalEstimate::from_counts(survived, trials))
}

/// Sizes derived from `n` for the restricted tree process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeParams {
    pub n: usize,
    /// `⌊n^{3/4}/2⌋`; admissible reversals start at position `half + 1`.
    pub half: usize,
    /// `⌊n^{3/4}/4⌋`, the size at which the tree counts as grown.
    pub target_size: usize,
    /// Neighbours tried per expanded vertex.
    pub m_offspring: u64,
}

/// Largest `k` with `(d·k)^4 <= n^3`, i.e. `⌊n^{3/4}/d⌋` in exact arithmetic.
fn floor_three_quarter_power_over(n: usize, d: u128) -> usize {
    let cube = (n as u128).pow(3);
    let mut k = ((n as f64).powf(0.75) / d as f64) as u128 + 1;
    while (d * k).pow(4) > cube {
        k -= 1;
    }
    k as usize
}

impl TreeParams {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGenome);
        }
        let half = floor_three_quarter_power_over(n, 2);
        let target_size = floor_three_quarter_power_over(n, 4);
        let width = (n - half) as i128;
        let m = (width + 1) * width / 2 - width * target_size as i128;
        if target_size < 2 || m < 1 {
            return Err(Error::Infeasible(format!(
                "restricted tree needs target size >= 2 and m >= 1; n = {n} gives target {target_size}, m = {m}"
            )));
        }
        Ok(TreeParams {
            n,
            half,
            target_size,
            m_offspring: m as u64,
        })
    }

    /// Whether `ρ_{l,r}` belongs to the admissible set `N`.
    pub fn admissible(&self, r: Reversal) -> bool {
        r.i > self.half && r.i <= r.j && r.j <= self.n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub reversal: Reversal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictedTreeRun {
    pub n: usize,
    pub lambda: f64,
    pub seed: u64,
    /// In the order they were connected; index 0 is the identity.
    pub vertices: Vec<SignedPerm>,
    pub parent_edges: Vec<TreeEdge>,
    pub target_size: usize,
    pub m_offspring: u64,
    pub succeeded: bool,
    /// Expansions that ran out of admissible neighbours before `m` tries.
    pub shortfalls: u32,
}

impl RestrictedTreeRun {
    pub fn duplicate_vertices(&self) -> usize {
        let distinct: HashSet<&SignedPerm> = self.vertices.iter().collect();
        self.vertices.len() - distinct.len()
    }

    /// Reversals used more than once plus left coordinates used more than once.
    pub fn bookkeeping_violations(&self) -> usize {
        let mut revs = HashSet::new();
        let mut lefts = HashSet::new();
        self.parent_edges
            .iter()
            .filter(|e| !revs.insert(e.reversal) | !lefts.insert(e.reversal.i))
            .count()
    }
}

/// Grows a tree from the identity using only reversals with left end past
/// `⌊n^{3/4}/2⌋`. Each step expands the lex-smallest frontier vertex, trying
/// its `m` lex-smallest admissible neighbours in turn, each kept with
/// probability `λ`. A kept neighbour retires its reversal and its left
/// coordinate for the rest of the run. Stops at `target_size` vertices or an
/// empty frontier.
pub fn grow_restricted_tree(n: usize, lambda: f64, seed: u64) -> Result<RestrictedTreeRun> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::BadProbability(lambda));
    }
    let params = TreeParams::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = SignedPerm::identity(n)?;
    let mut vertices = vec![id.clone()];
    let mut parent_edges = Vec::new();
    let mut frontier: BTreeSet<(SignedPerm, usize)> = BTreeSet::from([(id, 0)]);
    let mut used_reversals: HashSet<(usize, usize)> = HashSet::new();
    let mut used_left = vec![false; n + 1];
    let mut shortfalls = 0;

    'grow: while vertices.len() < params.target_size {
        let Some((omega, parent)) = frontier.pop_first() else {
            break;
        };
        let mut candidates: Vec<(SignedPerm, Reversal)> = Vec::new();
        for l in params.half + 1..=n {
            if used_left[l] {
                continue;
            }
            for r in l..=n {
                if used_reversals.contains(&(l, r)) {
                    continue;
                }
                let rev = Reversal { i: l, j: r };
                candidates.push((omega.apply_reversal(rev)?, rev));
            }
        }
        candidates.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut children = Vec::new();
        let mut tries = 0u64;
        for (x, rev) in candidates {
            if tries == params.m_offspring {
                break;
            }
            // retired during this expansion
            if used_left[rev.i] {
                continue;
            }
            tries += 1;
            if rng.random::<f64>() < lambda {
                used_reversals.insert((rev.i, rev.j));
                used_left[rev.i] = true;
                let child = vertices.len();
                vertices.push(x.clone());
                parent_edges.push(TreeEdge {
                    parent,
                    child,
                    reversal: rev,
                });
                children.push((x, child));
                if vertices.len() == params.target_size {
                    break 'grow;
                }
            }
        }
        if tries < params.m_offspring {
            shortfalls += 1;
        }
        frontier.extend(children);
    }

    let succeeded = vertices.len() == params.target_size;
    Ok(RestrictedTreeRun {
        n,
        lambda,
        seed,
        vertices,
        parent_edges,
        target_size: params.target_size,
        m_offspring: params.m_offspring,
        succeeded,
        shortfalls,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeBatch {
    pub n: usize,
    pub lambda: f64,
    pub runs: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub std_error: f64,
    pub duplicate_violations: u64,
    pub bookkeeping_violations: u64,
    pub shortfalls: u64,
    pub target_size: usize,
    pub m_offspring: u64,
}

/// Independent runs with seeds derived from `master_seed`.
pub fn run_restricted_trees(
    n: usize,
    lambda: f64,
    runs: u64,
    master_seed: u64,
) -> Result<TreeBatch> {
    let params = TreeParams::new(n)?;
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    let results: Vec<RestrictedTreeRun> = (0..runs)
        .into_par_iter()
        .map(|t| grow_restricted_tree(n, lambda, trial_seed(master_seed, n as u64, t)))
        .collect::<Result<_>>()?;
    let successes = results.iter().filter(|r| r.succeeded).count() as u64;
    let rate = successes as f64 / runs as f64;
    Ok(TreeBatch {
        n,
        lambda,
        runs,
        successes,
        success_rate: rate,
        std_error: (rate * (1.0 - rate) / runs as f64).sqrt(),
        duplicate_violations: results.iter().map(|r| r.duplicate_vertices() as u64).sum(),
        bookkeeping_violations: results
            .iter()
            .map(|r| r.bookkeeping_violations() as u64)
            .sum(),
        shortfalls: results.iter().map(|r| u64::from(r.shortfalls)).sum(),
        target_size: params.target_size,
        m_offspring: params.m_offspring,
    })
}
