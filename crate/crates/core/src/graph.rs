//! The complete transposition graph `CT_n` and spanning subgraph masks.
//!
//! Vertices are identified by their lexicographic rank (see
//! [`Permutation::rank`]). Edges are indexed canonically from their
//! even-parity endpoint: edge `{u, t·u}` with `u` even has id
//! `pos(u) * C(n,2) + index(t)`, where `pos(u)` is the position of `u` among
//! the even permutations in rank order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CtnError, Result};
use crate::perm::{factorial, Parity, Permutation, PointSet, Transposition, MAX_DEGREE};

/// Largest degree for which the neighbour table is precomputed.
const NEIGHBOR_TABLE_MAX_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub struct TranspositionGraph {
    n: usize,
    transpositions: Vec<Transposition>,
    vertices: Vec<Permutation>,
    parity: Vec<Parity>,
    /// Position of each vertex within its parity class.
    class_pos: Vec<u32>,
    even_vertices: Vec<u32>,
    neighbor_table: Option<Vec<u32>>,
}

impl TranspositionGraph {
    pub fn new(n: usize) -> Result<Self> {
        Permutation::identity(n)?;
        let v = factorial(n);
        let transpositions = Transposition::all(n);
        let vertices: Vec<Permutation> = (0..v)
            .map(|r| Permutation::unrank(n, r).expect("rank in range"))
            .collect();
        let parity: Vec<Parity> = vertices.iter().map(Permutation::parity).collect();
        let mut class_pos = vec![0u32; v];
        let mut even_vertices = Vec::with_capacity(v / 2);
        let (mut even, mut odd) = (0u32, 0u32);
        for r in 0..v {
            match parity[r] {
                Parity::Even => {
                    class_pos[r] = even;
                    even += 1;
                    even_vertices.push(r as u32);
                }
                Parity::Odd => {
                    class_pos[r] = odd;
                    odd += 1;
                }
            }
        }
        let mut g = TranspositionGraph {
            n,
            transpositions,
            vertices,
            parity,
            class_pos,
            even_vertices,
            neighbor_table: None,
        };
        if n <= NEIGHBOR_TABLE_MAX_N {
            let m = g.valency();
            let mut table = Vec::with_capacity(v * m);
            for r in 0..v {
                for t in 0..m {
                    table.push(g.compute_neighbor(r, t) as u32);
                }
            }
            g.neighbor_table = Some(table);
        }
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// `C(n,2)`, the valency of every vertex.
    pub fn valency(&self) -> usize {
        self.transpositions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() / 2 * self.valency()
    }

    pub fn transpositions(&self) -> &[Transposition] {
        &self.transpositions
    }

    pub fn transposition_index(&self, t: Transposition) -> Option<usize> {
        self.transpositions.iter().position(|&s| s == t)
    }

    pub fn vertex(&self, rank: usize) -> Permutation {
        self.vertices[rank]
    }

    pub fn rank_of(&self, p: &Permutation) -> Result<usize> {
        if p.degree() != self.n {
            return Err(CtnError::DegreeMismatch { left: p.degree(), right: self.n });
        }
        Ok(p.rank())
    }

    pub fn parity_of(&self, v: usize) -> Parity {
        self.parity[v]
    }

    /// 0 for the even class, 1 for the odd class.
    pub fn bipart_class(&self, p: &Permutation) -> u8 {
        match p.parity() {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn class_of(&self, v: usize) -> u8 {
        match self.parity[v] {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    fn compute_neighbor(&self, v: usize, t: usize) -> usize {
        let (a, b) = self.transpositions[t].points();
        let mut img = [0u8; MAX_DEGREE];
        img[..self.n].copy_from_slice(self.vertices[v].raw());
        // t·v under the right action swaps positions a and b of v's one-line form
        img.swap(a - 1, b - 1);
        Permutation::from_zero_based_unchecked(self.n, &img).rank()
    }

    /// Rank of `t·v` where `t` is the transposition with index `t`.
    #[inline]
    pub fn neighbor(&self, v: usize, t: usize) -> usize {
        match &self.neighbor_table {
            Some(table) => table[v * self.valency() + t] as usize,
            None => self.compute_neighbor(v, t),
        }
    }

    pub fn neighbor_ranks(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.valency()).map(move |t| self.neighbor(v, t))
    }

    /// All `C(n,2)` neighbours `u·x`, in transposition order.
    pub fn neighbors(&self, x: &Permutation) -> Result<Vec<Permutation>> {
        let r = self.rank_of(x)?;
        Ok(self.neighbor_ranks(r).map(|w| self.vertices[w]).collect())
    }

    /// Index of the transposition `z·u^{-1}` if `u` and `z` are adjacent.
    pub fn transposition_between(&self, u: usize, z: usize) -> Option<usize> {
        let pu = self.vertices[u].raw();
        let pz = self.vertices[z].raw();
        let mut diff = [0usize; 2];
        let mut k = 0;
        for i in 0..self.n {
            if pu[i] != pz[i] {
                if k == 2 {
                    return None;
                }
                diff[k] = i;
                k += 1;
            }
        }
        if k != 2 {
            return None;
        }
        let t = Transposition::new(diff[0] + 1, diff[1] + 1).ok()?;
        self.transposition_index(t)
    }

    pub fn is_adjacent(&self, u: usize, z: usize) -> bool {
        self.transposition_between(u, z).is_some()
    }

    #[inline]
    pub fn edge_id(&self, v: usize, t: usize) -> EdgeId {
        let anchor = match self.parity[v] {
            Parity::Even => v,
            Parity::Odd => self.neighbor(v, t),
        };
        EdgeId(self.class_pos[anchor] as usize * self.valency() + t)
    }

    pub fn edge_between(&self, u: usize, z: usize) -> Option<EdgeId> {
        self.transposition_between(u, z).map(|t| self.edge_id(u, t))
    }

    /// `(even endpoint, odd endpoint, transposition index)`.
    pub fn edge_endpoints(&self, e: EdgeId) -> Result<(usize, usize, usize)> {
        if e.0 >= self.edge_count() {
            return Err(CtnError::EdgeOutOfRange(e.0));
        }
        let m = self.valency();
        let u = self.even_vertices[e.0 / m] as usize;
        let t = e.0 % m;
        Ok((u, self.neighbor(u, t), t))
    }

    pub fn edge_transposition(&self, e: EdgeId) -> Result<Transposition> {
        let (_, _, t) = self.edge_endpoints(e)?;
        Ok(self.transpositions[t])
    }

    /// Support of the edge `{u, z}`: the support of `z·u^{-1}`.
    pub fn edge_support(&self, u: &Permutation, z: &Permutation) -> Result<PointSet> {
        let (ru, rz) = (self.rank_of(u)?, self.rank_of(z)?);
        self.transposition_between(ru, rz)
            .map(|t| self.transpositions[t].support())
            .ok_or_else(|| CtnError::NotAdjacent(u.to_string(), z.to_string()))
    }

    pub fn edge_id_support(&self, e: EdgeId) -> Result<PointSet> {
        Ok(self.edge_transposition(e)?.support())
    }

    /// Union of the supports of all edges in `mask`.
    pub fn subgraph_support(&self, mask: &SubgraphMask) -> PointSet {
        let m = self.valency();
        let mut present = vec![false; m];
        for e in mask.edges() {
            present[e.0 % m] = true;
        }
        present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .fold(PointSet::EMPTY, |acc, (t, _)| acc.union(self.transpositions[t].support()))
    }

    pub fn edges_support<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> PointSet {
        let m = self.valency();
        edges
            .into_iter()
            .fold(PointSet::EMPTY, |acc, e| acc.union(self.transpositions[e.0 % m].support()))
    }

    pub fn mask_degree(&self, mask: &SubgraphMask, v: usize) -> usize {
        (0..self.valency()).filter(|&t| mask.contains(self.edge_id(v, t))).count()
    }

    /// `d_G(w)` for every vertex, indexed by rank.
    pub fn degree_sequence(&self, mask: &SubgraphMask) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count()];
        for e in mask.edges() {
            let (u, z, _) = self.edge_endpoints(e).expect("mask edge in range");
            deg[u] += 1;
            deg[z] += 1;
        }
        deg
    }

    /// Neighbours of `v` inside `mask`, in transposition order.
    pub fn mask_neighbors<'a>(
        &'a self,
        mask: &'a SubgraphMask,
        v: usize,
    ) -> impl Iterator<Item = usize> + 'a {
        (0..self.valency())
            .filter(move |&t| mask.contains(self.edge_id(v, t)))
            .map(move |t| self.neighbor(v, t))
    }

    pub fn mask_has_edge(&self, mask: &SubgraphMask, u: usize, z: usize) -> bool {
        self.edge_between(u, z).is_some_and(|e| mask.contains(e))
    }
}

/// A spanning subgraph of `CT_n`, as a bitset over [`EdgeId`]s.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubgraphMask {
    n: usize,
    len: usize,
    words: Vec<u64>,
}

impl SubgraphMask {
    pub fn empty(graph: &TranspositionGraph) -> Self {
        let len = graph.edge_count();
        SubgraphMask { n: graph.degree(), len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(graph: &TranspositionGraph) -> Self {
        let mut m = SubgraphMask::empty(graph);
        for e in 0..m.len {
            m.insert(EdgeId(e));
        }
        m
    }

    pub fn from_edges<I: IntoIterator<Item = EdgeId>>(graph: &TranspositionGraph, edges: I) -> Self {
        let mut m = SubgraphMask::empty(graph);
        for e in edges {
            m.insert(e);
        }
        m
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Number of edge slots, `e(CT_n)`.
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        e.0 < self.len && self.words[e.0 / 64] >> (e.0 % 64) & 1 == 1
    }

    /// Returns `true` if the edge was newly inserted.
    pub fn insert(&mut self, e: EdgeId) -> bool {
        assert!(e.0 < self.len, "edge {e} out of range");
        let had = self.contains(e);
        self.words[e.0 / 64] |= 1 << (e.0 % 64);
        !had
    }

    /// Returns `true` if the edge was present.
    pub fn remove(&mut self, e: EdgeId) -> bool {
        let had = self.contains(e);
        if had {
            self.words[e.0 / 64] &= !(1 << (e.0 % 64));
        }
        had
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(EdgeId(wi * 64 + b))
            })
        })
    }

    pub fn complement(&self) -> SubgraphMask {
        let mut out = self.clone();
        for e in 0..self.len {
            let id = EdgeId(e);
            if self.contains(id) {
                out.remove(id);
            } else {
                out.insert(id);
            }
        }
        out
    }
}

impl fmt::Debug for SubgraphMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgraphMask(n={}, {}/{} edges)", self.n, self.count(), self.len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn neighbors_of_identity_in_ct3() {
        let g = TranspositionGraph::new(3).unwrap();
        let nb: HashSet<_> = g.neighbors(&p("id", 3)).unwrap().into_iter().collect();
        let want: HashSet<_> = ["(1,2)", "(1,3)", "(2,3)"].iter().map(|s| p(s, 3)).collect();
        assert_eq!(nb, want);
    }

    #[test]
    fn neighbors_differ_by_transposition() {
        let g = TranspositionGraph::new(4).unwrap();
        for r in 0..g.vertex_count() {
            let x = g.vertex(r);
            let nb = g.neighbors(&x).unwrap();
            assert_eq!(nb.iter().collect::<HashSet<_>>().len(), 6);
            for y in nb {
                assert!(y.compose(&x.inverse()).unwrap().as_transposition().is_some());
                assert_ne!(y.parity(), x.parity());
            }
        }
    }

    #[test]
    fn edge_supports() {
        let g = TranspositionGraph::new(3).unwrap();
        assert_eq!(
            g.edge_support(&p("id", 3), &p("(1,2)", 3)).unwrap(),
            PointSet::from_points([1, 2])
        );
        assert_eq!(
            g.edge_support(&p("(1,2)", 3), &p("(1,2,3)", 3)).unwrap(),
            PointSet::from_points([2, 3])
        );
        assert!(matches!(
            g.edge_support(&p("id", 3), &p("(1,2,3)", 3)),
            Err(CtnError::NotAdjacent(..))
        ));
    }

    #[test]
    fn edge_ids_round_trip_at_n4() {
        let g = TranspositionGraph::new(4).unwrap();
        let mut seen = HashSet::new();
        for e in 0..g.edge_count() {
            let (u, z, t) = g.edge_endpoints(EdgeId(e)).unwrap();
            assert_eq!(g.class_of(u), 0);
            assert_eq!(g.class_of(z), 1);
            assert_eq!(g.edge_id(u, t), EdgeId(e));
            assert_eq!(g.edge_id(z, t), EdgeId(e));
            assert_eq!(g.edge_between(z, u), Some(EdgeId(e)));
            assert!(seen.insert((u.min(z), u.max(z))));
        }
        assert!(g.edge_endpoints(EdgeId(g.edge_count())).is_err());
    }

    #[test]
    fn structure_counts() {
        for (n, e) in [(3, 9), (4, 72), (5, 600), (6, 5400)] {
            let g = TranspositionGraph::new(n).unwrap();
            assert_eq!(g.edge_count(), e);
            assert_eq!(g.vertex_count(), factorial(n));
            assert_eq!(g.valency(), crate::perm::binomial2(n));
        }
    }

    #[test]
    fn subgraph_supports() {
        let g = TranspositionGraph::new(3).unwrap();
        let e = g.edge_between(0, g.rank_of(&p("(1,2)", 3)).unwrap()).unwrap();
        let single = SubgraphMask::from_edges(&g, [e]);
        assert_eq!(g.subgraph_support(&single), PointSet::from_points([1, 2]));
        assert!(g.subgraph_support(&SubgraphMask::empty(&g)).is_empty());
        assert_eq!(
            g.subgraph_support(&SubgraphMask::full(&g)),
            PointSet::from_points([1, 2, 3])
        );
    }

    #[test]
    fn degree_sequences() {
        let g = TranspositionGraph::new(3).unwrap();
        assert!(g.degree_sequence(&SubgraphMask::full(&g)).iter().all(|&d| d == 3));
        assert!(g.degree_sequence(&SubgraphMask::empty(&g)).iter().all(|&d| d == 0));
        let one = SubgraphMask::from_edges(&g, [EdgeId(4)]);
        let deg = g.degree_sequence(&one);
        assert_eq!(deg.iter().filter(|&&d| d == 1).count(), 2);
        assert_eq!(deg.iter().sum::<usize>(), 2);
        for v in 0..g.vertex_count() {
            assert_eq!(g.mask_degree(&one, v), deg[v]);
        }
    }

    #[test]
    fn bipartition() {
        let g = TranspositionGraph::new(4).unwrap();
        assert_eq!(g.bipart_class(&p("id", 4)), 0);
        assert_eq!(g.bipart_class(&p("(1,2)", 4)), 1);
        for e in 0..g.edge_count() {
            let (u, z, _) = g.edge_endpoints(EdgeId(e)).unwrap();
            assert_ne!(g.class_of(u), g.class_of(z));
        }
    }

    #[test]
    fn on_demand_neighbors_match_table() {
        let g = TranspositionGraph::new(5).unwrap();
        for v in (0..120).step_by(7) {
            for t in 0..g.valency() {
                assert_eq!(g.neighbor(v, t), g.compute_neighbor(v, t));
            }
        }
    }

    #[test]
    fn mask_bit_ops() {
        let g = TranspositionGraph::new(4).unwrap();
        let mut m = SubgraphMask::empty(&g);
        assert!(m.insert(EdgeId(70)));
        assert!(!m.insert(EdgeId(70)));
        assert!(m.insert(EdgeId(3)));
        assert_eq!(m.edges().collect::<Vec<_>>(), vec![EdgeId(3), EdgeId(70)]);
        assert_eq!(m.complement().count(), 70);
        assert!(m.remove(EdgeId(3)));
        assert!(!m.remove(EdgeId(3)));
        assert_eq!(m.count(), 1);
    }
}
