//! The random subgraph `Γ_n` of `Δ_n`: each Cayley edge kept independently
//! with probability `λ`.
//!
//! Edge presence is a pure function of `(seed, {rank_u, rank_v})`: the edge's
//! uniform draw comes from [`crate::seed::edge_uniform`] and the edge is kept
//! when the draw is below `λ`. Explicit sampling and lazy exploration
//! therefore see the same graph for the same seed, and for a fixed seed the
//! edge set only grows as `λ` increases.

use std::collections::{HashSet, VecDeque};
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{edge_present, trial_seed};
use crate::signed_perm::{
    group_order, rank_slice, unrank_into, GeneratorKind, GeneratorSet, SignedPerm, MAX_RANK_N,
};
use crate::union_find::UnionFind;

/// Largest `n` for explicit sampling (`|B_8| = 10 321 920`).
pub const EXPLICIT_LIMIT: usize = 8;

/// Default cap on edges decided by one lazy exploration.
pub const DEFAULT_MAX_EDGES: u64 = 200_000_000;

const BLOCK: u64 = 4096;

/// Edge probability given either directly or as `c / deg`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaSpec {
    Absolute(f64),
    Scaled(f64),
}

impl LambdaSpec {
    pub fn resolve(&self, gens: &GeneratorSet) -> Result<f64> {
        let lambda = match *self {
            LambdaSpec::Absolute(l) => l,
            LambdaSpec::Scaled(c) => {
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "scaled rate c = {c} must be >= 0"
                    )));
                }
                c / gens.degree() as f64
            }
        };
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::BadProbability(lambda));
        }
        Ok(lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub gens: GeneratorSet,
    pub lambda: f64,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(gens: GeneratorSet, lambda: LambdaSpec, seed: u64) -> Result<Self> {
        Ok(SampleConfig {
            gens,
            lambda: lambda.resolve(&gens)?,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.gens.n
    }

    /// `λ · deg`, the mean degree of the sampled graph.
    pub fn c(&self) -> f64 {
        self.lambda * self.gens.degree() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSubgraph {
    pub config: SampleConfig,
    /// Canonical `(lower rank, higher rank)` pairs in ascending order.
    edges: Vec<(u32, u32)>,
}

impl SampledSubgraph {
    /// Builds a subgraph from explicit edges, validating ranks.
    pub fn from_edges(config: SampleConfig, mut edges: Vec<(u32, u32)>) -> Result<Self> {
        let size = explicit_size(config.n())?;
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if u64::from(e.1) >= size || e.0 == e.1 {
                return Err(Error::Format(format!("bad edge ({}, {})", e.0, e.1)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(SampledSubgraph { config, edges })
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> u64 {
        group_order(self.config.n()).expect("explicit n")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentStats {
    /// Component sizes, largest first.
    pub sizes: Vec<u64>,
    pub vertex_count: u64,
    pub largest: u64,
    /// Zero when the graph is a single component.
    pub second: u64,
}

impl ComponentStats {
    pub fn from_sizes(mut sizes: Vec<u64>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let vertex_count = sizes.iter().sum();
        let largest = sizes.first().copied().unwrap_or(0);
        let second = sizes.get(1).copied().unwrap_or(0);
        ComponentStats {
            sizes,
            vertex_count,
            largest,
            second,
        }
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest_fraction(&self) -> f64 {
        self.largest as f64 / self.vertex_count as f64
    }

    pub fn second_over_first(&self) -> f64 {
        self.second as f64 / self.largest as f64
    }
}

fn explicit_size(n: usize) -> Result<u64> {
    if n > EXPLICIT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXPLICIT_LIMIT,
            what: "explicit sampling",
        });
    }
    Ok(group_order(n).expect("n <= 8"))
}

/// Materialises every kept edge. Runs in parallel over blocks of vertices;
/// the result does not depend on the thread count.
pub fn sample_subgraph_explicit(config: &SampleConfig) -> Result<SampledSubgraph> {
    let n = config.n();
    let size = explicit_size(n)?;
    if !(0.0..=1.0).contains(&config.lambda) {
        return Err(Error::BadProbability(config.lambda));
    }
    if config.lambda == 0.0 {
        return Ok(SampledSubgraph {
            config: *config,
            edges: Vec::new(),
        });
    }
    let elements = config.gens.elements();
    let blocks = size.div_ceil(BLOCK);
    let chunks: Vec<Vec<(u32, u32)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut src = vec![0i16; n];
            let mut dst = vec![0i16; n];
            let mut out = Vec::new();
            let mut row = Vec::with_capacity(elements.len());
            for u in b * BLOCK..((b + 1) * BLOCK).min(size) {
                unrank_into(u, &mut src);
                row.clear();
                for g in &elements {
                    g.apply_into(&src, &mut dst);
                    let v = rank_slice(&dst);
                    if u < v && edge_present(config.seed, u, v, config.lambda) {
                        row.push((u as u32, v as u32));
                    }
                }
                row.sort_unstable();
                out.extend_from_slice(&row);
            }
            out
        })
        .collect();
    Ok(SampledSubgraph {
        config: *config,
        edges: chunks.concat(),
    })
}

pub fn components(g: &SampledSubgraph) -> ComponentStats {
    let mut uf = UnionFind::new(g.vertex_count() as usize);
    for &(a, b) in &g.edges {
        uf.union(a, b);
    }
    ComponentStats::from_sizes(uf.component_sizes())
}

/// Samples and measures in one step.
pub fn sample_components(config: &SampleConfig) -> Result<ComponentStats> {
    Ok(components(&sample_subgraph_explicit(config)?))
}

/// Size of the component containing vertex `rank` in an explicit sample.
pub fn component_of(g: &SampledSubgraph, rank: u64) -> u64 {
    let mut uf = UnionFind::new(g.vertex_count() as usize);
    for &(a, b) in &g.edges {
        uf.union(a, b);
    }
    u64::from(uf.set_size(rank as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExplorationResult {
    /// Exact when `hit_cutoff` is false, otherwise equal to the cutoff.
    pub component_size: u64,
    pub hit_cutoff: bool,
    pub edges_examined: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LazyParams {
    pub gens: GeneratorSet,
    pub lambda: f64,
    pub seed: u64,
    pub cutoff: u64,
    pub max_edges: u64,
}

impl LazyParams {
    pub fn new(gens: GeneratorSet, lambda: f64, seed: u64, cutoff: u64) -> Self {
        LazyParams {
            gens,
            lambda,
            seed,
            cutoff,
            max_edges: DEFAULT_MAX_EDGES,
        }
    }

    fn check(&self) -> Result<()> {
        if self.gens.n > MAX_RANK_N {
            return Err(Error::TooLarge {
                n: self.gens.n,
                limit: MAX_RANK_N,
                what: "lazy exploration",
            });
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::BadProbability(self.lambda));
        }
        if self.cutoff == 0 {
            return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
        }
        Ok(())
    }
}

/// BFS from `start` that decides each incident edge on demand. An edge is
/// decided only when one endpoint is being expanded and the other has not
/// been reached, so no edge is decided twice.
pub fn explore_component_lazy(
    params: &LazyParams,
    start: &SignedPerm,
) -> Result<ExplorationResult> {
    params.check()?;
    if start.n() != params.gens.n {
        return Err(Error::LengthMismatch(params.gens.n, start.n()));
    }
    let n = params.gens.n;
    let elements = params.gens.elements();
    let start_rank = start.rank()?;
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(start_rank);
    let mut queue = VecDeque::from([start_rank]);
    let mut edges_examined = 0u64;
    let mut src = vec![0i16; n];
    let mut dst = vec![0i16; n];
    if params.cutoff <= 1 {
        return Ok(ExplorationResult {
            component_size: 1,
            hit_cutoff: true,
            edges_examined,
        });
    }
    while let Some(u) = queue.pop_front() {
        unrank_into(u, &mut src);
        for g in &elements {
            g.apply_into(&src, &mut dst);
            let v = rank_slice(&dst);
            if seen.contains(&v) {
                continue;
            }
            edges_examined += 1;
            if edges_examined > params.max_edges {
                return Err(Error::EdgeBudgetExceeded(params.max_edges));
            }
            if edge_present(params.seed, u, v, params.lambda) {
                seen.insert(v);
                if seen.len() as u64 >= params.cutoff {
                    return Ok(ExplorationResult {
                        component_size: seen.len() as u64,
                        hit_cutoff: true,
                        edges_examined,
                    });
                }
                queue.push_back(v);
            }
        }
    }
    Ok(ExplorationResult {
        component_size: seen.len() as u64,
        hit_cutoff: false,
        edges_examined,
    })
}

/// Seed of trial `trial` for graphs on `B_n`. Independent of `λ`, so sweeps
/// over the rate at fixed `n` are coupled.
pub fn graph_seed(master_seed: u64, n: usize, trial: u64) -> u64 {
    trial_seed(master_seed, n as u64, trial)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GiantEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub hits: u64,
    pub trials: u64,
}

impl GiantEstimate {
    pub fn from_hits(hits: u64, trials: u64) -> Self {
        let mean = hits as f64 / trials as f64;
        let std_error = (mean * (1.0 - mean) / trials as f64).sqrt();
        GiantEstimate {
            mean,
            std_error,
            hits,
            trials,
        }
    }
}

/// Per-trial lazy explorations from the identity, in trial order.
pub fn lazy_trials(
    gens: GeneratorSet,
    lambda: f64,
    cutoff: u64,
    trials: u64,
    master_seed: u64,
) -> Result<Vec<(u64, ExplorationResult)>> {
    let start = SignedPerm::identity(gens.n)?;
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = graph_seed(master_seed, gens.n, t);
            let res = explore_component_lazy(&LazyParams::new(gens, lambda, seed, cutoff), &start)?;
            Ok((seed, res))
        })
        .collect()
}

/// Fraction of explorations from the identity that reach `cutoff` vertices.
pub fn estimate_giant_fraction(
    gens: GeneratorSet,
    lambda: f64,
    cutoff: u64,
    trials: u64,
    master_seed: u64,
) -> Result<GiantEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let runs = lazy_trials(gens, lambda, cutoff, trials, master_seed)?;
    let hits = runs.iter().filter(|(_, r)| r.hit_cutoff).count() as u64;
    Ok(GiantEstimate::from_hits(hits, trials))
}

/// Default exploration cutoff `n^4`.
pub fn default_cutoff(n: usize) -> u64 {
    (n as u64).pow(4)
}

const MAGIC: &[u8; 4] = b"RVGE";
const FORMAT_VERSION: u16 = 1;

/// Binary edge stream: `RVGE`, version `u16`, `n` `u8`, generator kind `u8`,
/// `λ` `f64`, seed `u64`, edge count `u64`, then `(u32, u32)` rank pairs.
/// All little-endian.
pub fn write_edges<W: Write>(g: &SampledSubgraph, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&[g.config.n() as u8, g.config.gens.kind.code()])?;
    w.write_all(&g.config.lambda.to_le_bytes())?;
    w.write_all(&g.config.seed.to_le_bytes())?;
    w.write_all(&(g.edges.len() as u64).to_le_bytes())?;
    for &(a, b) in &g.edges {
        w.write_all(&a.to_le_bytes())?;
        w.write_all(&b.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_edges<R: Read>(mut r: R) -> Result<SampledSubgraph> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut b2 = [0u8; 2];
    r.read_exact(&mut b2)?;
    let version = u16::from_le_bytes(b2);
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    r.read_exact(&mut b2)?;
    let kind = GeneratorKind::from_code(b2[1])
        .ok_or_else(|| Error::Format(format!("unknown generator kind {}", b2[1])))?;
    let gens = GeneratorSet::new(kind, b2[0] as usize)?;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let lambda = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let seed = u64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let count = u64::from_le_bytes(b8);
    let config = SampleConfig::new(gens, LambdaSpec::Absolute(lambda), seed)?;
    let mut edges = Vec::with_capacity(count.min(1 << 24) as usize);
    let mut pair = [0u8; 8];
    for _ in 0..count {
        r.read_exact(&mut pair)?;
        let a = u32::from_le_bytes(pair[..4].try_into().expect("4 bytes"));
        let b = u32::from_le_bytes(pair[4..].try_into().expect("4 bytes"));
        edges.push((a, b));
    }
    SampledSubgraph::from_edges(config, edges)
}
