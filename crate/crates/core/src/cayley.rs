//! Deterministic structure of the full Cayley graph `Δ_n = Γ(B_n, S)`.
//!
//! Vertices are addressed by their rank (see [`SignedPerm::rank`]). The graph
//! is vertex-transitive, so the eccentricity of the identity is the diameter.

use std::collections::BTreeSet;
use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signed_perm::{
    group_order, rank_slice, unrank_into, GeneratorSet, SignedPerm, MAX_RANK_N,
};

/// Limits on explicit whole-graph work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for operations that touch every vertex (diameter, density).
    pub full_graph: usize,
    /// Largest `n` for a single-source BFS.
    pub single_source: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            full_graph: 6,
            single_source: 7,
        }
    }
}

impl Limits {
    fn check_full(&self, n: usize) -> Result<()> {
        if n > self.full_graph {
            return Err(Error::TooLarge {
                n,
                limit: self.full_graph,
                what: "whole-graph enumeration",
            });
        }
        Ok(())
    }

    fn check_single(&self, n: usize) -> Result<()> {
        if n > self.single_source {
            return Err(Error::TooLarge {
                n,
                limit: self.single_source,
                what: "single-source BFS",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphSpec {
    pub gens: GeneratorSet,
}

impl GraphSpec {
    pub fn new(gens: GeneratorSet) -> Self {
        GraphSpec { gens }
    }

    pub fn n(&self) -> usize {
        self.gens.n
    }

    pub fn vertex_count(&self) -> Result<u64> {
        group_order(self.n()).ok_or(Error::TooLarge {
            n: self.n(),
            limit: MAX_RANK_N,
            what: "ranking",
        })
    }

    pub fn degree(&self) -> u64 {
        self.gens.degree()
    }
}

/// A set of vertices of `Δ_n`, held as ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSet {
    n: usize,
    members: BTreeSet<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Result<Self> {
        group_order(n).ok_or(Error::TooLarge {
            n,
            limit: MAX_RANK_N,
            what: "ranking",
        })?;
        if n == 0 {
            return Err(Error::EmptyGenome);
        }
        Ok(VertexSet {
            n,
            members: BTreeSet::new(),
        })
    }

    pub fn from_ranks(n: usize, ranks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = Self::empty(n)?;
        let size = group_order(n).expect("checked");
        for r in ranks {
            if r >= size {
                return Err(Error::RankOutOfRange { rank: r, n, size });
            }
            set.members.insert(r);
        }
        Ok(set)
    }

    pub fn from_perms<'a>(
        n: usize,
        perms: impl IntoIterator<Item = &'a SignedPerm>,
    ) -> Result<Self> {
        let mut set = Self::empty(n)?;
        for p in perms {
            if p.n() != n {
                return Err(Error::LengthMismatch(n, p.n()));
            }
            set.members.insert(p.rank()?);
        }
        Ok(set)
    }

    pub fn full(n: usize) -> Result<Self> {
        let size = group_order(n).ok_or(Error::TooLarge {
            n,
            limit: MAX_RANK_N,
            what: "ranking",
        })?;
        Self::from_ranks(n, 0..size)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, rank: u64) -> bool {
        self.members.contains(&rank)
    }

    pub fn ranks(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn perms(&self) -> impl Iterator<Item = SignedPerm> + '_ {
        self.members
            .iter()
            .map(|&r| SignedPerm::unrank(self.n, r).expect("valid rank"))
    }

    /// Parses one vertex per line: either a rank or a rendered permutation.
    /// Blank lines and `#` comments are skipped.
    pub fn parse_lines(n: usize, text: &str) -> Result<Self> {
        let mut ranks = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('(') {
                let p: SignedPerm = line.parse()?;
                if p.n() != n {
                    return Err(Error::LengthMismatch(n, p.n()));
                }
                ranks.push(p.rank()?);
            } else {
                let r = line
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad vertex line {line:?}")))?;
                ranks.push(r);
            }
        }
        Self::from_ranks(n, ranks)
    }

    pub fn to_rank_lines(&self) -> String {
        self.members.iter().map(|r| format!("{r}\n")).collect()
    }

    pub fn to_perm_lines(&self) -> String {
        self.perms().map(|p| format!("{p}\n")).collect()
    }
}

fn check_gens(v: &SignedPerm, gens: &GeneratorSet) -> Result<()> {
    if v.n() != gens.n {
        return Err(Error::LengthMismatch(gens.n, v.n()));
    }
    Ok(())
}

/// The `deg` neighbours `v·g`, in generator order.
pub fn neighbors(v: &SignedPerm, gens: &GeneratorSet) -> Result<Vec<SignedPerm>> {
    check_gens(v, gens)?;
    gens.elements().into_iter().map(|g| v.apply(g)).collect()
}

/// Neighbour ranks of the vertex with entries `src`, appended to `out`.
pub(crate) fn neighbor_ranks(
    src: &[i16],
    gens: &[crate::signed_perm::Generator],
    scratch: &mut [i16],
    out: &mut Vec<u64>,
) {
    for g in gens {
        g.apply_into(src, scratch);
        out.push(rank_slice(scratch));
    }
}

/// Shortest generator-path length from `v` to `w`, or `None` if it exceeds `max_depth`.
pub fn bfs_distance(
    v: &SignedPerm,
    w: &SignedPerm,
    gens: &GeneratorSet,
    max_depth: u32,
) -> Result<Option<u32>> {
    bfs_distance_with(v, w, gens, max_depth, Limits::default())
}

pub fn bfs_distance_with(
    v: &SignedPerm,
    w: &SignedPerm,
    gens: &GeneratorSet,
    max_depth: u32,
    limits: Limits,
) -> Result<Option<u32>> {
    check_gens(v, gens)?;
    check_gens(w, gens)?;
    limits.check_single(gens.n)?;
    let target = w.rank()?;
    let dist = bfs_from(&[v.rank()?], gens, max_depth, Some(target))?;
    Ok(match dist[target as usize] {
        UNREACHED => None,
        d => Some(d),
    })
}

const UNREACHED: u32 = u32::MAX;

/// Multi-source BFS over the dense rank space, stopping after `max_depth`
/// layers or once `stop_at` is reached.
fn bfs_from(
    sources: &[u64],
    gens: &GeneratorSet,
    max_depth: u32,
    stop_at: Option<u64>,
) -> Result<Vec<u32>> {
    let n = gens.n;
    let size = group_order(n).expect("checked by caller") as usize;
    let elements = gens.elements();
    let mut dist = vec![UNREACHED; size];
    let mut frontier: Vec<u64> = Vec::new();
    for &s in sources {
        if dist[s as usize] == UNREACHED {
            dist[s as usize] = 0;
            frontier.push(s);
        }
    }
    if stop_at.is_some_and(|t| dist[t as usize] == 0) {
        return Ok(dist);
    }
    let mut src = vec![0i16; n];
    let mut scratch = vec![0i16; n];
    let mut nbrs = Vec::with_capacity(elements.len());
    let mut depth = 0;
    while !frontier.is_empty() && depth < max_depth {
        depth += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            unrank_into(u, &mut src);
            nbrs.clear();
            neighbor_ranks(&src, &elements, &mut scratch, &mut nbrs);
            for &x in &nbrs {
                if dist[x as usize] == UNREACHED {
                    dist[x as usize] = depth;
                    if stop_at == Some(x) {
                        return Ok(dist);
                    }
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    Ok(dist)
}

/// Eccentricity of the identity, which equals the diameter by vertex-transitivity.
/// Fails if the graph is disconnected.
pub fn diameter(spec: &GraphSpec) -> Result<u32> {
    diameter_with(spec, Limits::default())
}

pub fn diameter_with(spec: &GraphSpec, limits: Limits) -> Result<u32> {
    limits.check_full(spec.n())?;
    let dist = bfs_from(&[0], &spec.gens, u32::MAX, None)?;
    let mut ecc = 0;
    for d in dist {
        if d == UNREACHED {
            return Err(Error::Infeasible(format!(
                "{} graph at n = {} is disconnected",
                spec.gens.kind,
                spec.n()
            )));
        }
        ecc = ecc.max(d);
    }
    Ok(ecc)
}

/// Number of vertices reachable from the identity.
pub fn reachable_from_identity(spec: &GraphSpec) -> Result<u64> {
    Limits::default().check_single(spec.n())?;
    let dist = bfs_from(&[0], &spec.gens, u32::MAX, None)?;
    Ok(dist.iter().filter(|&&d| d != UNREACHED).count() as u64)
}

/// All vertices within distance `radius` of some member of `a`.
pub fn ball(a: &VertexSet, radius: u32, gens: &GeneratorSet) -> Result<VertexSet> {
    if a.n() != gens.n {
        return Err(Error::LengthMismatch(gens.n, a.n()));
    }
    let elements = gens.elements();
    let n = gens.n;
    let mut seen: HashSet<u64> = a.ranks().collect();
    let mut frontier: Vec<u64> = a.ranks().collect();
    let mut src = vec![0i16; n];
    let mut scratch = vec![0i16; n];
    let mut nbrs = Vec::with_capacity(elements.len());
    for _ in 0..radius {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for &u in &frontier {
            unrank_into(u, &mut src);
            nbrs.clear();
            neighbor_ranks(&src, &elements, &mut scratch, &mut nbrs);
            for &x in &nbrs {
                if seen.insert(x) {
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    VertexSet::from_ranks(n, seen)
}

/// Vertices outside `a` adjacent to some member of `a`.
pub fn vertex_boundary(a: &VertexSet, gens: &GeneratorSet) -> Result<VertexSet> {
    let b = ball(a, 1, gens)?;
    VertexSet::from_ranks(a.n(), b.ranks().filter(|r| !a.contains(*r)))
}

/// `true` iff every radius-1 ball meets `e`. Since the generator set is
/// closed under inversion this is the same as `ball(e, 1)` covering `B_n`.
pub fn is_dense(e: &VertexSet, gens: &GeneratorSet) -> Result<bool> {
    Limits::default().check_full(gens.n)?;
    let size = group_order(gens.n).expect("checked");
    Ok(ball(e, 1, gens)?.len() as u64 == size)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryBound {
    /// `|d(A)|`
    pub boundary: u64,
    /// `|A| (1 - |A| / |B_n|) / diam`
    pub bound: f64,
    pub diameter: u32,
    pub holds: bool,
}

/// Compares `|d(A)|` with the generic Cayley-graph boundary estimate.
pub fn check_boundary_bound(a: &VertexSet, gens: &GeneratorSet) -> Result<BoundaryBound> {
    let diam = diameter(&GraphSpec::new(*gens))?;
    check_boundary_bound_with_diameter(a, gens, diam)
}

pub fn check_boundary_bound_with_diameter(
    a: &VertexSet,
    gens: &GeneratorSet,
    diameter: u32,
) -> Result<BoundaryBound> {
    let size = group_order(gens.n).expect("checked") as f64;
    let boundary = vertex_boundary(a, gens)?.len() as u64;
    let alen = a.len() as f64;
    let bound = alen * (1.0 - alen / size) / f64::from(diameter);
    Ok(BoundaryBound {
        boundary,
        bound,
        diameter,
        holds: boundary as f64 >= bound,
    })
}
