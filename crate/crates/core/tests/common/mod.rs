//! Brute-force oracles that share no code with the library's graph and
//! cycle machinery: vertices are one-line arrays, adjacency is "differs in
//! exactly two positions", and cycles are found by unpruned path search.

#![allow(dead_code)]

use ctn_core::extremal::{rng_from_seed, SearchRng};
use ctn_core::{EdgeId, SubgraphMask, TranspositionGraph};
use rand::Rng;

/// All permutations of `1..=n` as one-line arrays, lexicographically.
pub fn all_perms(n: usize) -> Vec<Vec<u8>> {
    fn go(n: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for p in 1..=n {
            if !used[p] {
                used[p] = true;
                cur.push(p as u8);
                go(n, cur, used, out);
                cur.pop();
                used[p] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

pub fn one_line(p: &[u8]) -> String {
    p.iter().map(|d| char::from(b'0' + d)).collect()
}

/// Positions where the arrays differ; adjacency in `CT_n` is exactly two.
pub fn diff_positions(a: &[u8], b: &[u8]) -> Vec<usize> {
    (0..a.len()).filter(|&i| a[i] != b[i]).collect()
}

/// `CT_n` as a dense adjacency matrix over lexicographically ordered vertices.
pub struct Naive {
    pub n: usize,
    pub verts: Vec<Vec<u8>>,
    pub adj: Vec<Vec<bool>>,
}

impl Naive {
    pub fn new(n: usize) -> Self {
        let verts = all_perms(n);
        let v = verts.len();
        let mut adj = vec![vec![false; v]; v];
        for i in 0..v {
            for j in 0..v {
                adj[i][j] = diff_positions(&verts[i], &verts[j]).len() == 2;
            }
        }
        Naive { n, verts, adj }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.iter().filter(|&&b| b).count()).sum::<usize>() / 2
    }

    /// Support of `z·u^{-1}` for the edge `{u, z}`: with `z = t·u` acting on
    /// the right, the one-line arrays differ exactly in the slots `t` swaps.
    pub fn edge_support(&self, a: usize, b: usize) -> Vec<usize> {
        diff_positions(&self.verts[a], &self.verts[b])
            .into_iter()
            .map(|i| i + 1)
            .collect()
    }

    /// Adjacency restricted to a library mask.
    pub fn sub(&self, graph: &TranspositionGraph, mask: &SubgraphMask) -> Vec<Vec<bool>> {
        let v = self.verts.len();
        let mut m = vec![vec![false; v]; v];
        for a in 0..v {
            for b in 0..v {
                if self.adj[a][b] {
                    let e = graph.edge_between(a, b).expect("naive edge is a library edge");
                    m[a][b] = mask.contains(e);
                }
            }
        }
        m
    }
}

/// Number of directed closed walks with distinct vertices of exactly `len`
/// steps; each undirected cycle is counted `2 * len` times.
pub fn closed_simple_walks(adj: &[Vec<bool>], len: usize) -> u64 {
    fn go(adj: &[Vec<bool>], len: usize, start: usize, path: &mut Vec<usize>, on: &mut [bool]) -> u64 {
        let v = *path.last().unwrap();
        if path.len() == len {
            return adj[v][start] as u64;
        }
        let mut total = 0;
        for w in 0..adj.len() {
            if adj[v][w] && !on[w] {
                on[w] = true;
                path.push(w);
                total += go(adj, len, start, path, on);
                path.pop();
                on[w] = false;
            }
        }
        total
    }
    let mut total = 0;
    for s in 0..adj.len() {
        let mut on = vec![false; adj.len()];
        on[s] = true;
        total += go(adj, len, s, &mut vec![s], &mut on);
    }
    total
}

pub fn naive_cycle_count(adj: &[Vec<bool>], len: usize) -> u64 {
    closed_simple_walks(adj, len) / (2 * len as u64)
}

pub fn naive_has_cycle(adj: &[Vec<bool>], len: usize) -> bool {
    closed_simple_walks(adj, len) > 0
}

/// `Σ_w C(d(w), 2)` from the dense matrix.
pub fn naive_two_paths(adj: &[Vec<bool>]) -> i64 {
    adj.iter()
        .map(|r| {
            let d = r.iter().filter(|&&b| b).count() as i64;
            d * (d - 1).max(0) / 2
        })
        .sum()
}

pub fn random_mask(graph: &TranspositionGraph, rng: &mut SearchRng, p: f64) -> SubgraphMask {
    SubgraphMask::from_edges(graph, (0..graph.edge_count()).filter(|_| rng.random_bool(p)).map(EdgeId))
}

pub fn rng(seed: u64) -> SearchRng {
    rng_from_seed(seed)
}

/// Maximum `C_len`-free edge subset of a graph with at most 16 edges, by
/// trying every subset.
pub fn exhaustive_ex(graph: &TranspositionGraph, naive: &Naive, len: usize) -> usize {
    let e = graph.edge_count();
    assert!(e <= 16);
    let mut best = 0;
    for bits in 0u32..(1 << e) {
        let k = bits.count_ones() as usize;
        if k <= best {
            continue;
        }
        let mask = SubgraphMask::from_edges(graph, (0..e).filter(|i| bits >> i & 1 == 1).map(EdgeId));
        if !naive_has_cycle(&naive.sub(graph, &mask), len) {
            best = k;
        }
    }
    best
}
