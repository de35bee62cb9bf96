//! Fixed-length cycle search, counting and girth in `CT_n` and its spanning
//! subgraphs, plus the 4-cycle structure around 2-paths and cycle supports.
//!
//! Search is a bounded DFS from every start vertex `s`, restricted to
//! vertices of larger rank than `s`, pruned by BFS distance back to `s`.
//! Each cycle is reported exactly once, in canonical form: it starts at its
//! minimum-rank vertex and the second vertex is the smaller of that vertex's
//! two cycle neighbours.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CtnError, Result};
use crate::graph::{EdgeId, SubgraphMask, TranspositionGraph};
use crate::perm::{Permutation, PointSet};
use crate::Rational;

pub const MIN_CYCLE_LENGTH: usize = 4;
pub const MAX_CYCLE_LENGTH: usize = 14;
/// Largest degree for which the 4-cycle census is run.
pub const CENSUS_MAX_N: usize = 5;

pub fn check_cycle_length(len: usize) -> Result<()> {
    if len % 2 == 0 && (MIN_CYCLE_LENGTH..=MAX_CYCLE_LENGTH).contains(&len) {
        Ok(())
    } else {
        Err(CtnError::InvalidCycleLength(len))
    }
}

/// Adjacency lists of a spanning subgraph, each sorted by neighbour rank.
#[derive(Debug, Clone)]
pub struct Adjacency {
    lists: Vec<Vec<u32>>,
}

impl Adjacency {
    pub fn from_mask(graph: &TranspositionGraph, mask: &SubgraphMask) -> Self {
        let lists = (0..graph.vertex_count())
            .map(|v| {
                let mut l: Vec<u32> = graph.mask_neighbors(mask, v).map(|w| w as u32).collect();
                l.sort_unstable();
                l
            })
            .collect();
        Adjacency { lists }
    }

    pub fn full(graph: &TranspositionGraph) -> Self {
        Adjacency::from_mask(graph, &SubgraphMask::full(graph))
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.lists[v]
    }

    pub fn has_edge(&self, u: usize, z: usize) -> bool {
        self.lists[u].binary_search(&(z as u32)).is_ok()
    }

    pub fn insert(&mut self, u: usize, z: usize) {
        for (a, b) in [(u, z), (z, u)] {
            if let Err(pos) = self.lists[a].binary_search(&(b as u32)) {
                self.lists[a].insert(pos, b as u32);
            }
        }
    }

    pub fn remove(&mut self, u: usize, z: usize) {
        for (a, b) in [(u, z), (z, u)] {
            if let Ok(pos) = self.lists[a].binary_search(&(b as u32)) {
                self.lists[a].remove(pos);
            }
        }
    }

    /// BFS distances from `root` using only vertices `>= floor`.
    fn distances_from(&self, root: usize, floor: usize, dist: &mut [u32]) {
        dist.fill(u32::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                let w = w as usize;
                if w >= floor && dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
}

struct Dfs<'a, F> {
    adj: &'a Adjacency,
    len: usize,
    start: usize,
    path: Vec<usize>,
    on_path: Vec<bool>,
    dist: Vec<u32>,
    visit: F,
}

impl<F: FnMut(&[usize]) -> ControlFlow<()>> Dfs<'_, F> {
    fn extend(&mut self) -> ControlFlow<()> {
        let depth = self.path.len() - 1;
        let v = *self.path.last().expect("non-empty path");
        if depth == self.len - 1 {
            if self.path[1] < self.path[depth] && self.adj.has_edge(v, self.start) {
                return (self.visit)(&self.path);
            }
            return ControlFlow::Continue(());
        }
        let remaining = (self.len - depth - 1) as u32;
        for &w in self.adj.neighbors(v) {
            let w = w as usize;
            if w <= self.start || self.on_path[w] || self.dist[w] > remaining {
                continue;
            }
            self.path.push(w);
            self.on_path[w] = true;
            let flow = self.extend();
            self.on_path[w] = false;
            self.path.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every canonical cycle of length `len` whose minimum vertex is `start`.
fn cycles_from<F>(adj: &Adjacency, start: usize, len: usize, visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let v = adj.vertex_count();
    let mut dist = vec![0u32; v];
    adj.distances_from(start, start, &mut dist);
    let mut on_path = vec![false; v];
    on_path[start] = true;
    let mut dfs = Dfs { adj, len, start, path: vec![start], on_path, dist, visit };
    dfs.extend()
}

/// Visits all canonical cycles of length `len`, ordered by start vertex.
pub fn for_each_cycle<F>(adj: &Adjacency, len: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    for s in 0..adj.vertex_count() {
        if cycles_from(adj, s, len, &mut visit).is_break() {
            return;
        }
    }
}

pub fn count_cycles(adj: &Adjacency, len: usize) -> u64 {
    (0..adj.vertex_count())
        .into_par_iter()
        .map(|s| {
            let mut c = 0u64;
            let _ = cycles_from(adj, s, len, |_| {
                c += 1;
                ControlFlow::Continue(())
            });
            c
        })
        .sum()
}

/// Returns `(total, matching)`: the number of canonical cycles of length
/// `len` and how many of them satisfy `pred`.
pub fn count_cycles_where<P>(adj: &Adjacency, len: usize, pred: P) -> (u64, u64)
where
    P: Fn(&[usize]) -> bool + Sync,
{
    (0..adj.vertex_count())
        .into_par_iter()
        .map(|s| {
            let (mut total, mut hits) = (0u64, 0u64);
            let _ = cycles_from(adj, s, len, |p| {
                total += 1;
                hits += pred(p) as u64;
                ControlFlow::Continue(())
            });
            (total, hits)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Union of the edge supports along a closed vertex sequence of `CT_n`.
pub fn vertex_cycle_support(graph: &TranspositionGraph, vertices: &[usize]) -> PointSet {
    let k = vertices.len();
    (0..k).fold(PointSet::EMPTY, |acc, j| {
        let t = graph
            .transposition_between(vertices[j], vertices[(j + 1) % k])
            .expect("consecutive cycle vertices are adjacent");
        acc.union(graph.transpositions()[t].support())
    })
}

/// First canonical cycle in (start, DFS) order.
pub fn find_cycle(adj: &Adjacency, len: usize) -> Option<Vec<usize>> {
    (0..adj.vertex_count()).into_par_iter().find_map_first(|s| {
        let mut found = None;
        let _ = cycles_from(adj, s, len, |p| {
            found = Some(p.to_vec());
            ControlFlow::Break(())
        });
        found
    })
}

/// All canonical cycles, in deterministic (start, DFS) order.
pub fn collect_cycles(adj: &Adjacency, len: usize) -> Vec<Vec<usize>> {
    let per_start: Vec<Vec<Vec<usize>>> = (0..adj.vertex_count())
        .into_par_iter()
        .map(|s| {
            let mut out = Vec::new();
            let _ = cycles_from(adj, s, len, |p| {
                out.push(p.to_vec());
                ControlFlow::Continue(())
            });
            out
        })
        .collect();
    per_start.into_iter().flatten().collect()
}

/// A cycle of length `len` that uses the edge `{a, b}` plus a path of
/// `len - 1` edges from `b` back to `a` in `adj`. The edge itself need not
/// be present in `adj`. Returns the vertex sequence starting `a, b, ...`.
pub fn find_cycle_through_edge(adj: &Adjacency, a: usize, b: usize, len: usize) -> Option<Vec<usize>> {
    let v = adj.vertex_count();
    let mut dist = vec![0u32; v];
    adj.distances_from(a, 0, &mut dist);
    if dist[b] == u32::MAX || dist[b] as usize > len - 1 {
        return None;
    }
    let mut on_path = vec![false; v];
    on_path[a] = true;
    on_path[b] = true;
    let mut path = vec![a, b];
    fn go(
        adj: &Adjacency,
        len: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        dist: &[u32],
    ) -> bool {
        let v = *path.last().expect("non-empty");
        let a = path[0];
        if path.len() == len {
            return adj.has_edge(v, a);
        }
        let remaining = (len - path.len()) as u32;
        for &w in adj.neighbors(v) {
            let w = w as usize;
            if on_path[w] || dist[w] > remaining {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            if go(adj, len, path, on_path, dist) {
                return true;
            }
            on_path[w] = false;
            path.pop();
        }
        false
    }
    go(adj, len, &mut path, &mut on_path, &dist).then_some(path)
}

/// Rotation/reflection normal form of a closed vertex sequence.
pub fn canonicalize(vertices: &[usize]) -> Vec<usize> {
    let k = vertices.len();
    let (min_at, _) = vertices.iter().enumerate().min_by_key(|(_, &v)| v).expect("non-empty");
    let mut out: Vec<usize> = (0..k).map(|i| vertices[(min_at + i) % k]).collect();
    if k > 2 && out[1] > out[k - 1] {
        out[1..].reverse();
    }
    out
}

/// A cycle of `CT_n`, stored by vertex rank in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleWitness {
    vertices: Vec<usize>,
}

impl CycleWitness {
    /// Validates that `vertices` is a cycle of `CT_n` and canonicalizes it.
    pub fn new(graph: &TranspositionGraph, vertices: &[usize]) -> Result<Self> {
        let k = vertices.len();
        if k < MIN_CYCLE_LENGTH || k % 2 != 0 {
            return Err(CtnError::InvalidCycle(format!("length {k}")));
        }
        if let Some(&bad) = vertices.iter().find(|&&v| v >= graph.vertex_count()) {
            return Err(CtnError::InvalidCycle(format!("vertex rank {bad} out of range")));
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k {
            return Err(CtnError::InvalidCycle("repeated vertex".into()));
        }
        for i in 0..k {
            let (u, z) = (vertices[i], vertices[(i + 1) % k]);
            if !graph.is_adjacent(u, z) {
                return Err(CtnError::InvalidCycle(format!(
                    "{} and {} are not adjacent",
                    graph.vertex(u),
                    graph.vertex(z)
                )));
            }
        }
        Ok(CycleWitness { vertices: canonicalize(vertices) })
    }

    pub fn from_permutations(graph: &TranspositionGraph, perms: &[Permutation]) -> Result<Self> {
        let ranks = perms.iter().map(|p| graph.rank_of(p)).collect::<Result<Vec<_>>>()?;
        CycleWitness::new(graph, &ranks)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn permutations(&self, graph: &TranspositionGraph) -> Vec<Permutation> {
        self.vertices.iter().map(|&v| graph.vertex(v)).collect()
    }

    pub fn one_line(&self, graph: &TranspositionGraph) -> Vec<String> {
        self.vertices.iter().map(|&v| graph.vertex(v).to_one_line()).collect()
    }

    /// Edges in cycle order, starting with `{v_0, v_1}`.
    pub fn edges(&self, graph: &TranspositionGraph) -> Vec<EdgeId> {
        let k = self.len();
        (0..k)
            .map(|i| {
                graph
                    .edge_between(self.vertices[i], self.vertices[(i + 1) % k])
                    .expect("validated cycle")
            })
            .collect()
    }

    pub fn is_in(&self, graph: &TranspositionGraph, mask: &SubgraphMask) -> bool {
        self.edges(graph).into_iter().all(|e| mask.contains(e))
    }
}

pub fn find_cycle_of_length(
    graph: &TranspositionGraph,
    mask: &SubgraphMask,
    len: usize,
) -> Result<Option<CycleWitness>> {
    check_cycle_length(len)?;
    let adj = Adjacency::from_mask(graph, mask);
    Ok(find_cycle(&adj, len).map(|vs| CycleWitness { vertices: vs }))
}

pub fn count_cycles_of_length(graph: &TranspositionGraph, mask: &SubgraphMask, len: usize) -> Result<u64> {
    check_cycle_length(len)?;
    Ok(count_cycles(&Adjacency::from_mask(graph, mask), len))
}

pub fn cycles_of_length(
    graph: &TranspositionGraph,
    mask: &SubgraphMask,
    len: usize,
) -> Result<Vec<CycleWitness>> {
    check_cycle_length(len)?;
    let adj = Adjacency::from_mask(graph, mask);
    Ok(collect_cycles(&adj, len)
        .into_iter()
        .map(|vertices| CycleWitness { vertices })
        .collect())
}

/// Length of a shortest cycle of the subgraph, or `None` if it is a forest.
pub fn girth(graph: &TranspositionGraph, mask: &SubgraphMask) -> Option<usize> {
    let adj = Adjacency::from_mask(graph, mask);
    let v = adj.vertex_count();
    let mut best = usize::MAX;
    let mut dist = vec![u32::MAX; v];
    let mut parent = vec![usize::MAX; v];
    for root in 0..v {
        // no odd cycles in a bipartite graph
        if best == MIN_CYCLE_LENGTH {
            break;
        }
        dist.fill(u32::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] as usize >= best {
                break;
            }
            for &w in adj.neighbors(x) {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[x] + 1;
                    parent[w] = x;
                    queue.push_back(w);
                } else if parent[x] != w {
                    best = best.min((dist[x] + dist[w] + 1) as usize);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// The 4-cycles of `CT_n` through the 2-path `(u, x, z)`: the fourth vertex
/// is `z·x^{-1}·u` and, when the two edge supports share a point, also
/// `u·x^{-1}·z`.
pub fn four_cycles_through_two_path(
    graph: &TranspositionGraph,
    u: &Permutation,
    x: &Permutation,
    z: &Permutation,
) -> Result<Vec<CycleWitness>> {
    let (ru, rx, rz) = (graph.rank_of(u)?, graph.rank_of(x)?, graph.rank_of(z)?);
    let not_two_path = || CtnError::NotTwoPath(u.to_string(), x.to_string(), z.to_string());
    if ru == rz || !graph.is_adjacent(ru, rx) || !graph.is_adjacent(rz, rx) {
        return Err(not_two_path());
    }
    let xu = graph.edge_support(x, u)?;
    let xz = graph.edge_support(x, z)?;
    let x_inv = x.inverse();
    let first = z.compose_unchecked(&x_inv).compose_unchecked(u);
    let mut fourth = vec![first];
    if xu.intersection(xz).len() == 1 {
        fourth.push(u.compose_unchecked(&x_inv).compose_unchecked(z));
    }
    fourth
        .into_iter()
        .map(|w| CycleWitness::from_permutations(graph, &[*x, *z, w, *u]))
        .collect()
}

pub fn cycle_support(graph: &TranspositionGraph, c: &CycleWitness) -> PointSet {
    graph.edges_support(c.edges(graph))
}

pub fn support_intersection(graph: &TranspositionGraph, c: &CycleWitness, c2: &CycleWitness) -> usize {
    cycle_support(graph, c).intersection(cycle_support(graph, c2)).len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusStatus {
    Match,
    /// Measured counts differ from the closed form `(n-2)(n+1)/2` but are
    /// constant and equal `(n-2)(n+5)/2`; measured values stand.
    DocumentedMismatch,
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub edge_count: usize,
    pub total: u64,
    pub per_edge_constant: Option<u64>,
    #[serde(with = "crate::rational_str")]
    pub closed_form_per_edge: Rational,
    #[serde(with = "crate::rational_str")]
    pub closed_form_total: Rational,
    pub mismatch: bool,
    pub status: CensusStatus,
    /// `(n-2)(n+5)/2`, which the measured per-edge counts are compared to.
    pub observed_formula_per_edge: u64,
    pub observed_formula_fits: bool,
    pub per_edge_counts: Vec<u64>,
}

/// Exhaustive 4-cycle census of `CT_n` with per-edge counts.
pub fn four_cycle_census(graph: &TranspositionGraph) -> Result<CensusReport> {
    let n = graph.degree();
    if n > CENSUS_MAX_N {
        return Err(CtnError::Unsupported(format!("4-cycle census requires n <= {CENSUS_MAX_N}")));
    }
    let adj = Adjacency::full(graph);
    let cycles = collect_cycles(&adj, 4);
    let mut per_edge = vec![0u64; graph.edge_count()];
    for c in &cycles {
        for i in 0..4 {
            let e = graph.edge_between(c[i], c[(i + 1) % 4]).expect("cycle edge");
            per_edge[e.0] += 1;
        }
    }
    let total = cycles.len() as u64;
    let sum: u64 = per_edge.iter().sum();
    debug_assert_eq!(sum, 4 * total);
    let per_edge_constant = per_edge
        .first()
        .copied()
        .filter(|&c0| per_edge.iter().all(|&c| c == c0));
    let n_i = n as i64;
    let closed_form_per_edge = Rational::new((n_i - 2) * (n_i + 1), 2);
    let closed_form_total = closed_form_per_edge * Rational::from_integer(graph.edge_count() as i64) / 4;
    let observed = ((n - 2) * (n + 5) / 2) as u64;
    let measured_matches_closed_form = per_edge_constant
        .is_some_and(|c| Rational::from_integer(c as i64) == closed_form_per_edge)
        && Rational::from_integer(total as i64) == closed_form_total;
    let observed_fits = per_edge_constant == Some(observed);
    let status = if measured_matches_closed_form {
        CensusStatus::Match
    } else if observed_fits && sum == 4 * total {
        CensusStatus::DocumentedMismatch
    } else {
        CensusStatus::Mismatch
    };
    Ok(CensusReport {
        n,
        edge_count: graph.edge_count(),
        total,
        per_edge_constant,
        closed_form_per_edge,
        closed_form_total,
        mismatch: !measured_matches_closed_form,
        status,
        observed_formula_per_edge: observed,
        observed_formula_fits: observed_fits,
        per_edge_counts: per_edge,
    })
}
