//! Transposition families `F_0..F_n`, the auxiliary graphs built around a
//! base vertex `x`, the counting identities over all of them, and lifting of
//! auxiliary-graph cycles to cycles of twice the length in `G`.
//!
//! `F_0` is every transposition; `F_i` (for `i >= 1`) holds the `n - 1`
//! transpositions moving point `i`. The auxiliary graph of kind
//! [`AuxKind::G`] on `(x, i)` has vertex set `{t·x : t ∈ F_i}`; two vertices
//! `u, z` are joined when their edge supports at `x` meet in exactly
//! `δ_i` points (`δ_0 = 0`, otherwise 1) and some `w ≠ x` is a common
//! neighbour of `u` and `z` in `G`. Kind [`AuxKind::H`] keeps only the
//! vertices `u` with `{u, x} ∉ E(G)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::CycleWitness;
use crate::error::{CtnError, Result};
use crate::graph::{SubgraphMask, TranspositionGraph};
use crate::perm::{binomial2, Transposition};
use crate::stats::{intersection_census, IntersectionClass};

/// Largest degree for which the full identity sweep is run.
pub const IDENTITY_SWEEP_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranspositionFamily {
    pub i: usize,
    pub members: Vec<Transposition>,
}

pub fn family(n: usize, i: usize) -> Result<TranspositionFamily> {
    if i > n {
        return Err(CtnError::FamilyOutOfRange { i, n });
    }
    let members = Transposition::all(n)
        .into_iter()
        .filter(|t| i == 0 || t.moves(i))
        .collect();
    Ok(TranspositionFamily { i, members })
}

/// Required support overlap for adjacency in the auxiliary graph on `F_i`.
fn delta(i: usize) -> usize {
    match i {
        0 => 0,
        _ => 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AuxKind {
    G,
    H,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuxEdge {
    pub a: usize,
    pub b: usize,
    /// Common neighbours `w ≠ x` of the two endpoints in `G`, by rank.
    pub connectors: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuxGraph {
    pub x: usize,
    pub i: usize,
    pub kind: AuxKind,
    /// Vertex ranks in `CT_n`, in family order.
    pub vertices: Vec<usize>,
    pub edges: Vec<AuxEdge>,
    #[serde(skip)]
    adjacency: Vec<Vec<bool>>,
}

impl AuxGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn connectors(&self, a: usize, b: usize) -> Option<&[usize]> {
        let (a, b) = (a.min(b), a.max(b));
        self.edges
            .iter()
            .find(|e| e.a == a && e.b == b)
            .map(|e| e.connectors.as_slice())
    }

    /// All cycles of length `l` (local vertex indices), each listed once,
    /// starting at its smallest index with the smaller neighbour second.
    pub fn cycles(&self, l: usize) -> Vec<Vec<usize>> {
        let k = self.vertex_count();
        let mut out = Vec::new();
        if l < 3 {
            return out;
        }
        fn go(g: &AuxGraph, l: usize, path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            let s = path[0];
            let v = *path.last().expect("non-empty");
            if path.len() == l {
                if path[1] < path[l - 1] && g.adjacency[v][s] {
                    out.push(path.clone());
                }
                return;
            }
            for w in s + 1..g.vertex_count() {
                if !used[w] && g.adjacency[v][w] {
                    used[w] = true;
                    path.push(w);
                    go(g, l, path, used, out);
                    path.pop();
                    used[w] = false;
                }
            }
        }
        for s in 0..k {
            let mut used = vec![false; k];
            used[s] = true;
            go(self, l, &mut vec![s], &mut used, &mut out);
        }
        out
    }

    pub fn has_cycle(&self, l: usize) -> bool {
        !self.cycles(l).is_empty()
    }

    pub fn has_triangle(&self) -> bool {
        self.has_cycle(3)
    }
}

pub fn build_aux(
    graph: &TranspositionGraph,
    mask: &SubgraphMask,
    x: usize,
    i: usize,
    kind: AuxKind,
) -> Result<AuxGraph> {
    let n = graph.degree();
    let fam = family(n, i)?;
    let mut vertices = Vec::with_capacity(fam.members.len());
    let mut supports = Vec::with_capacity(fam.members.len());
    for t in &fam.members {
        let ti = graph.transposition_index(*t).expect("family member");
        let u = graph.neighbor(x, ti);
        if kind == AuxKind::H && mask.contains(graph.edge_id(x, ti)) {
            continue;
        }
        vertices.push(u);
        supports.push(t.support());
    }
    let k = vertices.len();
    let mut adjacency = vec![vec![false; k]; k];
    let mut edges = Vec::new();
    let d = delta(i);
    for a in 0..k {
        for b in a + 1..k {
            if supports[a].intersection(supports[b]).len() != d {
                continue;
            }
            let (u, z) = (vertices[a], vertices[b]);
            let connectors: Vec<usize> = graph
                .mask_neighbors(mask, u)
                .filter(|&w| w != x && graph.mask_has_edge(mask, w, z))
                .collect();
            if !connectors.is_empty() {
                adjacency[a][b] = true;
                adjacency[b][a] = true;
                edges.push(AuxEdge { a, b, connectors });
            }
        }
    }
    Ok(AuxGraph { x, i, kind, vertices, edges, adjacency })
}

/// Lifts an `l`-cycle of an auxiliary graph of `G` (given as local vertex
/// indices, `l >= 3`) to a `2l`-cycle `(u_1, w_1, ..., u_l, w_l)` of `G`.
pub fn lift_cycle(
    graph: &TranspositionGraph,
    mask: &SubgraphMask,
    aux: &AuxGraph,
    cycle: &[usize],
) -> Result<CycleWitness> {
    let l = cycle.len();
    if l < 3 {
        return Err(CtnError::InvalidCycle(format!("aux cycle of length {l}")));
    }
    let mut seen = vec![false; aux.vertex_count()];
    for &c in cycle {
        if c >= aux.vertex_count() || std::mem::replace(&mut seen[c], true) {
            return Err(CtnError::InvalidCycle("aux cycle repeats or leaves the graph".into()));
        }
    }
    let mut options = Vec::with_capacity(l);
    for j in 0..l {
        let (a, b) = (cycle[j], cycle[(j + 1) % l]);
        let conn = aux
            .connectors(a, b)
            .ok_or_else(|| CtnError::InvalidCycle(format!("aux vertices {a} and {b} are not adjacent")))?;
        let (u, z) = (aux.vertices[a], aux.vertices[b]);
        let valid: Vec<usize> = conn
            .iter()
            .copied()
            .filter(|&w| w != aux.x && graph.mask_has_edge(mask, u, w) && graph.mask_has_edge(mask, w, z))
            .collect();
        if valid.is_empty() {
            return Err(CtnError::LiftFailed(format!(
                "no connector between {} and {} in G",
                graph.vertex(u),
                graph.vertex(z)
            )));
        }
        options.push(valid);
    }
    // pick pairwise distinct connectors, backtracking over the (at most two) candidates
    fn choose(options: &[Vec<usize>], j: usize, picked: &mut Vec<usize>) -> bool {
        if j == options.len() {
            return true;
        }
        for &w in &options[j] {
            if !picked.contains(&w) {
                picked.push(w);
                if choose(options, j + 1, picked) {
                    return true;
                }
                picked.pop();
            }
        }
        false
    }
    let mut picked = Vec::with_capacity(l);
    if !choose(&options, 0, &mut picked) {
        return Err(CtnError::LiftFailed("no pairwise distinct connector choice".into()));
    }
    let mut seq = Vec::with_capacity(2 * l);
    for j in 0..l {
        seq.push(aux.vertices[cycle[j]]);
        seq.push(picked[j]);
    }
    let witness = CycleWitness::new(graph, &seq).map_err(|e| CtnError::LiftFailed(e.to_string()))?;
    if !witness.is_in(graph, mask) {
        return Err(CtnError::LiftFailed("lifted cycle leaves G".into()));
    }
    Ok(witness)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl Comparison {
    fn equal(lhs: i64, rhs: i64) -> Self {
        Comparison { lhs, rhs, holds: lhs == rhs }
    }

    fn at_least(lhs: i64, rhs: i64) -> Self {
        Comparison { lhs, rhs, holds: lhs >= rhs }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub edges: usize,
    /// Total vertex count of all auxiliary graphs against `3·n!·C(n,2)`.
    pub eq1: Comparison,
    /// Total edge count of all auxiliary graphs against the number of 2-paths in `G`.
    pub eq2: Comparison,
    /// H-kind edge total plus `4·#full + 2·#three_path` 4-cycles against the 2-path count.
    pub eq8: Comparison,
    /// Total vertex count of all H-kind graphs against `3·Σ(C(n,2) - d_G(x))`.
    pub h_vertices: Comparison,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.eq1.holds && self.eq2.holds && self.eq8.holds && self.h_vertices.holds
    }
}

#[derive(Default, Clone, Copy)]
struct Totals {
    g_vertices: i64,
    g_edges: i64,
    h_vertices: i64,
    h_edges: i64,
}

impl std::ops::Add for Totals {
    type Output = Totals;
    fn add(self, o: Totals) -> Totals {
        Totals {
            g_vertices: self.g_vertices + o.g_vertices,
            g_edges: self.g_edges + o.g_edges,
            h_vertices: self.h_vertices + o.h_vertices,
            h_edges: self.h_edges + o.h_edges,
        }
    }
}

fn check_sweep_cap(graph: &TranspositionGraph) -> Result<()> {
    if graph.degree() > IDENTITY_SWEEP_MAX_N {
        return Err(CtnError::Unsupported(format!(
            "auxiliary-graph sweeps require n <= {IDENTITY_SWEEP_MAX_N}"
        )));
    }
    Ok(())
}

pub fn two_path_count(graph: &TranspositionGraph, mask: &SubgraphMask) -> i64 {
    graph
        .degree_sequence(mask)
        .iter()
        .map(|&d| (d * d.saturating_sub(1) / 2) as i64)
        .sum()
}

pub fn verify_identities(graph: &TranspositionGraph, mask: &SubgraphMask) -> Result<IdentityReport> {
    check_sweep_cap(graph)?;
    let n = graph.degree();
    let totals = (0..graph.vertex_count())
        .into_par_iter()
        .map(|x| {
            let mut t = Totals::default();
            for i in 0..=n {
                let ga = build_aux(graph, mask, x, i, AuxKind::G).expect("valid family index");
                let ha = build_aux(graph, mask, x, i, AuxKind::H).expect("valid family index");
                t.g_vertices += ga.vertex_count() as i64;
                t.g_edges += ga.edge_count() as i64;
                t.h_vertices += ha.vertex_count() as i64;
                t.h_edges += ha.edge_count() as i64;
            }
            t
        })
        .reduce(Totals::default, |a, b| a + b);
    let v = graph.vertex_count() as i64;
    let m = binomial2(n) as i64;
    let paths = two_path_count(graph, mask);
    let census = intersection_census(graph, mask)?;
    let chi_term = 4 * census.count(IntersectionClass::Full) as i64
        + 2 * census.count(IntersectionClass::ThreePath) as i64;
    let missing_degree: i64 = graph
        .degree_sequence(mask)
        .iter()
        .map(|&d| m - d as i64)
        .sum();
    Ok(IdentityReport {
        n,
        edges: mask.count(),
        eq1: Comparison::equal(totals.g_vertices, 3 * v * m),
        eq2: Comparison::at_least(totals.g_edges, paths),
        eq8: Comparison::at_least(totals.h_edges + chi_term, paths),
        h_vertices: Comparison::equal(totals.h_vertices, 3 * missing_degree),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AuxViolation {
    pub x: usize,
    pub i: usize,
    pub edges: usize,
    pub bound_times_four: usize,
    pub triangle: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangleReport {
    pub graphs_checked: usize,
    pub triangle_free: bool,
    pub mantel_ok: bool,
    pub violations: Vec<AuxViolation>,
}

/// Checks every H-kind auxiliary graph for triangles and against the
/// Mantel edge bounds `(C(n,2) - d_G(x))²/4` for `i = 0` and `(n-1)²/4`
/// otherwise.
pub fn h_aux_triangle_check(graph: &TranspositionGraph, mask: &SubgraphMask) -> Result<TriangleReport> {
    check_sweep_cap(graph)?;
    let n = graph.degree();
    let m = binomial2(n);
    let violations: Vec<AuxViolation> = (0..graph.vertex_count())
        .into_par_iter()
        .flat_map_iter(|x| {
            let dx = graph.mask_degree(mask, x);
            (0..=n).filter_map(move |i| {
                let h = build_aux(graph, mask, x, i, AuxKind::H).expect("valid family index");
                let side = if i == 0 { m - dx } else { n - 1 };
                let triangle = h.has_triangle();
                let bound_times_four = side * side;
                let over = 4 * h.edge_count() > bound_times_four;
                (triangle || over).then_some(AuxViolation {
                    x,
                    i,
                    edges: h.edge_count(),
                    bound_times_four,
                    triangle,
                })
            })
        })
        .collect();
    Ok(TriangleReport {
        graphs_checked: graph.vertex_count() * (n + 1),
        triangle_free: violations.iter().all(|v| !v.triangle),
        mantel_ok: violations.iter().all(|v| 4 * v.edges <= v.bound_times_four),
        violations,
    })
}

/// Whether any auxiliary graph (either kind) of `G` contains an `l`-cycle.
pub fn any_aux_cycle(graph: &TranspositionGraph, mask: &SubgraphMask, l: usize) -> Result<Option<(usize, usize)>> {
    check_sweep_cap(graph)?;
    let n = graph.degree();
    Ok((0..graph.vertex_count()).into_par_iter().find_map_first(|x| {
        (0..=n).find_map(|i| {
            let g = build_aux(graph, mask, x, i, AuxKind::G).expect("valid family index");
            g.has_cycle(l).then_some((x, i))
        })
    }))
}
