//! Searches for `C_2l`-free spanning subgraphs of `CT_n` with many edges,
//! and the edge-colouring experiment.
//!
//! Only `n = 3` is solved exactly. Heuristic results at larger `n` are lower
//! bounds on `ex(CT_n, C_2l)` and carry no optimality claim.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::{
    check_cycle_length, collect_cycles, find_cycle, find_cycle_through_edge, Adjacency, CycleWitness,
};
use crate::error::{CtnError, Result};
use crate::graph::{EdgeId, SubgraphMask, TranspositionGraph};
use crate::io::SubgraphFile;
use crate::Rational;

pub const EXACT_MAX_N: usize = 3;
pub const LOCAL_MAX_N: usize = 5;
/// Longest forbidden cycle for local search at `n = 5`; at `n <= 4` the
/// general cycle-length cap applies.
pub const LOCAL_MAX_LENGTH_N5: usize = 10;

/// The portable seeded generator used by every randomized routine.
pub type SearchRng = Xoshiro256PlusPlus;

pub fn rng_from_seed(seed: u64) -> SearchRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Greedy,
    Local,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub forbidden_length: usize,
    pub method: Method,
    pub seed: u64,
    pub edges: usize,
    /// `e(G) / e(CT_n)`.
    #[serde(with = "crate::rational_str")]
    pub pi: Rational,
    /// `2 e(G) / n!`.
    #[serde(with = "crate::rational_str")]
    pub average_degree: Rational,
    pub greedy_edges: usize,
    pub iterations: u64,
    /// Set only by the exact search after exhausting the search tree.
    pub optimal: bool,
    pub verified: bool,
    pub subgraph: SubgraphFile,
    #[serde(skip)]
    pub mask: SubgraphMask,
}

impl SearchReport {
    fn new(
        graph: &TranspositionGraph,
        len: usize,
        method: Method,
        seed: u64,
        mask: SubgraphMask,
        greedy_edges: usize,
        iterations: u64,
        optimal: bool,
    ) -> Self {
        let edges = mask.count();
        let verified = verify_cycle_free(graph, &mask, len).map(|f| f.free).unwrap_or(false);
        SearchReport {
            n: graph.degree(),
            forbidden_length: len,
            method,
            seed,
            edges,
            pi: Rational::new(edges as i64, graph.edge_count() as i64),
            average_degree: Rational::new(2 * edges as i64, graph.vertex_count() as i64),
            greedy_edges,
            iterations,
            optimal,
            verified,
            subgraph: SubgraphFile::from_mask(graph, &mask),
            mask,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Freeness {
    pub free: bool,
    pub witness: Option<CycleWitness>,
}

/// Independent whole-graph check that `mask` has no cycle of length `len`.
pub fn verify_cycle_free(graph: &TranspositionGraph, mask: &SubgraphMask, len: usize) -> Result<Freeness> {
    let witness = crate::cycles::find_cycle_of_length(graph, mask, len)?;
    Ok(Freeness { free: witness.is_none(), witness })
}

/// A mask plus adjacency lists kept in sync, for incremental freeness checks.
struct Working<'g> {
    graph: &'g TranspositionGraph,
    len: usize,
    mask: SubgraphMask,
    adj: Adjacency,
}

impl<'g> Working<'g> {
    fn empty(graph: &'g TranspositionGraph, len: usize) -> Self {
        let mask = SubgraphMask::empty(graph);
        let adj = Adjacency::from_mask(graph, &mask);
        Working { graph, len, mask, adj }
    }

    fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        let (u, z, _) = self.graph.edge_endpoints(e).expect("edge in range");
        (u, z)
    }

    /// A forbidden cycle that inserting `e` would close, as a vertex
    /// sequence starting with the endpoints of `e`.
    fn closes_cycle(&self, e: EdgeId) -> Option<Vec<usize>> {
        let (u, z) = self.endpoints(e);
        find_cycle_through_edge(&self.adj, u, z, self.len)
    }

    fn insert(&mut self, e: EdgeId) {
        let (u, z) = self.endpoints(e);
        self.mask.insert(e);
        self.adj.insert(u, z);
    }

    fn remove(&mut self, e: EdgeId) {
        let (u, z) = self.endpoints(e);
        self.mask.remove(e);
        self.adj.remove(u, z);
    }
}

/// Maximum `C_len`-free spanning subgraph of `CT_3` by branch and bound.
pub fn exact_max_cycle_free(graph: &TranspositionGraph, len: usize) -> Result<SearchReport> {
    check_cycle_length(len)?;
    if graph.degree() > EXACT_MAX_N {
        return Err(CtnError::Unsupported(format!(
            "exact search requires n <= {EXACT_MAX_N} (got n = {})",
            graph.degree()
        )));
    }
    let full = Adjacency::full(graph);
    let mut through = vec![0usize; graph.edge_count()];
    for c in collect_cycles(&full, len) {
        for k in 0..len {
            through[graph.edge_between(c[k], c[(k + 1) % len]).expect("cycle edge").0] += 1;
        }
    }
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).map(EdgeId).collect();
    order.sort_by_key(|e| (std::cmp::Reverse(through[e.0]), e.0));

    struct Search<'g> {
        order: Vec<EdgeId>,
        work: Working<'g>,
        best: SubgraphMask,
        best_count: usize,
        nodes: u64,
    }
    impl Search<'_> {
        fn branch(&mut self, idx: usize, current: usize) {
            self.nodes += 1;
            if current > self.best_count {
                self.best_count = current;
                self.best = self.work.mask.clone();
            }
            if idx == self.order.len() || current + (self.order.len() - idx) <= self.best_count {
                return;
            }
            let e = self.order[idx];
            if self.work.closes_cycle(e).is_none() {
                self.work.insert(e);
                self.branch(idx + 1, current + 1);
                self.work.remove(e);
            }
            self.branch(idx + 1, current);
        }
    }
    let mut s = Search {
        order,
        work: Working::empty(graph, len),
        best: SubgraphMask::empty(graph),
        best_count: 0,
        nodes: 0,
    };
    s.branch(0, 0);
    Ok(SearchReport::new(graph, len, Method::Exact, 0, s.best, 0, s.nodes, true))
}

fn check_local_caps(graph: &TranspositionGraph, len: usize) -> Result<()> {
    check_cycle_length(len)?;
    let n = graph.degree();
    if n > LOCAL_MAX_N {
        return Err(CtnError::Unsupported(format!("local search requires n <= {LOCAL_MAX_N} (got n = {n})")));
    }
    if n == LOCAL_MAX_N && len > LOCAL_MAX_LENGTH_N5 {
        return Err(CtnError::Unsupported(format!(
            "local search at n = {LOCAL_MAX_N} requires forbidden length <= {LOCAL_MAX_LENGTH_N5}"
        )));
    }
    Ok(())
}

/// Randomized greedy insertion followed by `budget` rounds of
/// insert-or-swap moves. Fully determined by `(n, len, seed, budget)`.
pub fn local_search_max(graph: &TranspositionGraph, len: usize, seed: u64, budget: u64) -> Result<SearchReport> {
    check_local_caps(graph, len)?;
    let mut rng = rng_from_seed(seed);
    let mut work = Working::empty(graph, len);
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).map(EdgeId).collect();
    order.shuffle(&mut rng);
    let mut absent = Vec::new();
    for &e in &order {
        if work.closes_cycle(e).is_none() {
            work.insert(e);
        } else {
            absent.push(e);
        }
    }
    let greedy_edges = work.mask.count();
    if budget == 0 {
        return Ok(SearchReport::new(graph, len, Method::Greedy, seed, work.mask, greedy_edges, 0, false));
    }
    let mut iterations = 0;
    while iterations < budget && !absent.is_empty() {
        iterations += 1;
        let slot = rng.random_range(0..absent.len());
        let f = absent[slot];
        let Some(cycle) = work.closes_cycle(f) else {
            work.insert(f);
            absent.swap_remove(slot);
            continue;
        };
        // cycle = (u, z, ...), with {u, z} = f; drop one of its other edges
        let k = rng.random_range(1..len);
        let out = graph
            .edge_between(cycle[k], cycle[(k + 1) % len])
            .expect("cycle edge");
        work.remove(out);
        if work.closes_cycle(f).is_none() {
            work.insert(f);
            absent[slot] = out;
        } else {
            work.insert(out);
        }
    }
    Ok(SearchReport::new(graph, len, Method::Local, seed, work.mask, greedy_edges, iterations, false))
}

/// Runs [`local_search_max`] for every seed in parallel and keeps the best
/// report by (edges desc, seed asc).
pub fn local_search_multi(
    graph: &TranspositionGraph,
    len: usize,
    seeds: &[u64],
    budget: u64,
) -> Result<SearchReport> {
    let reports = seeds
        .par_iter()
        .map(|&s| local_search_max(graph, len, s, budget))
        .collect::<Result<Vec<_>>>()?;
    reports
        .into_iter()
        .min_by_key(|r| (std::cmp::Reverse(r.edges), r.seed))
        .ok_or_else(|| CtnError::Unsupported("no seeds given".into()))
}

/// Each edge kept independently with probability `p`.
pub fn random_mask(graph: &TranspositionGraph, rng: &mut SearchRng, p: f64) -> SubgraphMask {
    SubgraphMask::from_edges(graph, (0..graph.edge_count()).filter(|_| rng.random_bool(p)).map(EdgeId))
}

pub fn random_coloring(graph: &TranspositionGraph, colors: u32, seed: u64) -> Vec<u32> {
    let mut rng = rng_from_seed(seed);
    (0..graph.edge_count()).map(|_| rng.random_range(0..colors)).collect()
}

#[derive(Debug, Clone)]
pub struct ColorClass {
    pub color: u32,
    pub edges: usize,
    pub witness: Option<CycleWitness>,
}

#[derive(Debug, Clone)]
pub struct RamseyReport {
    pub n: usize,
    pub colors: u32,
    pub forbidden_length: usize,
    pub coloring: Vec<u32>,
    pub classes: Vec<ColorClass>,
    /// First colour class (ascending) containing a `C_len`, with a witness.
    pub monochromatic: Option<(u32, CycleWitness)>,
}

pub fn ramsey_experiment(
    graph: &TranspositionGraph,
    colors: u32,
    len: usize,
    coloring: Vec<u32>,
) -> Result<RamseyReport> {
    check_cycle_length(len)?;
    if colors == 0 {
        return Err(CtnError::Unsupported("need at least one colour".into()));
    }
    if coloring.len() != graph.edge_count() {
        return Err(CtnError::Parse(format!(
            "colouring has {} entries, expected {}",
            coloring.len(),
            graph.edge_count()
        )));
    }
    if let Some(&c) = coloring.iter().find(|&&c| c >= colors) {
        return Err(CtnError::Parse(format!("colour {c} out of range for {colors} colours")));
    }
    let mut classes = Vec::with_capacity(colors as usize);
    for color in 0..colors {
        let mask = SubgraphMask::from_edges(
            graph,
            coloring.iter().enumerate().filter(|(_, &c)| c == color).map(|(e, _)| EdgeId(e)),
        );
        let adj = Adjacency::from_mask(graph, &mask);
        let witness = find_cycle(&adj, len).map(|vs| CycleWitness::new(graph, &vs).expect("search output is a cycle"));
        classes.push(ColorClass { color, edges: mask.count(), witness });
    }
    let monochromatic = classes
        .iter()
        .find_map(|c| c.witness.clone().map(|w| (c.color, w)));
    Ok(RamseyReport {
        n: graph.degree(),
        colors,
        forbidden_length: len,
        coloring,
        classes,
        monochromatic,
    })
}
