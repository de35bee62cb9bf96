//! File formats: subgraph JSON, witness JSON, edge colourings and degree CSV.
//!
//! A subgraph file lists edges as pairs of one-line permutations:
//!
//! ```json
//! {"n": 4, "edges": [["1234", "2134"], ["1234", "1324"]]}
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cycles::CycleWitness;
use crate::error::{CtnError, Result};
use crate::graph::{EdgeId, SubgraphMask, TranspositionGraph};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphFile {
    pub n: usize,
    pub edges: Vec<[String; 2]>,
}

impl SubgraphFile {
    /// Edges in ascending id order, even endpoint first.
    pub fn from_mask(graph: &TranspositionGraph, mask: &SubgraphMask) -> Self {
        let edges = mask
            .edges()
            .map(|e| {
                let (u, z, _) = graph.edge_endpoints(e).expect("mask edge in range");
                [graph.vertex(u).to_one_line(), graph.vertex(z).to_one_line()]
            })
            .collect();
        SubgraphFile { n: graph.degree(), edges }
    }

    /// Builds the mask, checking the degree and adjacency of every pair.
    pub fn to_mask(&self, graph: &TranspositionGraph) -> Result<SubgraphMask> {
        if self.n != graph.degree() {
            return Err(CtnError::DegreeMismatch { left: self.n, right: graph.degree() });
        }
        let mut mask = SubgraphMask::empty(graph);
        for [a, b] in &self.edges {
            let pa = Permutation::parse(a, self.n)?;
            let pb = Permutation::parse(b, self.n)?;
            let (ra, rb) = (graph.rank_of(&pa)?, graph.rank_of(&pb)?);
            let e = graph
                .edge_between(ra, rb)
                .ok_or_else(|| CtnError::NotAdjacent(a.clone(), b.clone()))?;
            mask.insert(e);
        }
        Ok(mask)
    }
}

pub fn parse_subgraph(text: &str) -> Result<SubgraphFile> {
    serde_json::from_str(text).map_err(|e| CtnError::Parse(e.to_string()))
}

pub fn read_subgraph(path: &Path) -> Result<SubgraphFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CtnError::Parse(format!("{}: {e}", path.display())))?;
    parse_subgraph(&text)
}

/// Loads a subgraph file and builds its mask over a fresh `CT_n`.
pub fn load_mask(path: &Path) -> Result<(TranspositionGraph, SubgraphMask)> {
    let file = read_subgraph(path)?;
    let graph = TranspositionGraph::new(file.n)?;
    let mask = file.to_mask(&graph)?;
    Ok((graph, mask))
}

/// A cycle as a list of one-line permutations in cycle order.
pub fn witness_json(graph: &TranspositionGraph, c: &CycleWitness) -> Vec<String> {
    c.one_line(graph)
}

pub fn parse_witness(graph: &TranspositionGraph, items: &[String]) -> Result<CycleWitness> {
    let perms = items
        .iter()
        .map(|s| Permutation::parse(s, graph.degree()))
        .collect::<Result<Vec<_>>>()?;
    CycleWitness::from_permutations(graph, &perms)
}

/// An edge colouring, `colors[e]` being the colour of edge id `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub n: usize,
    pub colors: Vec<u32>,
}

impl ColoringFile {
    pub fn validate(&self, graph: &TranspositionGraph) -> Result<()> {
        if self.n != graph.degree() {
            return Err(CtnError::DegreeMismatch { left: self.n, right: graph.degree() });
        }
        if self.colors.len() != graph.edge_count() {
            return Err(CtnError::Parse(format!(
                "colouring has {} entries, CT_{} has {} edges",
                self.colors.len(),
                self.n,
                graph.edge_count()
            )));
        }
        Ok(())
    }
}

pub fn read_coloring(path: &Path) -> Result<ColoringFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CtnError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CtnError::Parse(e.to_string()))
}

/// `rank,permutation,degree` rows with a header.
pub fn degree_csv(graph: &TranspositionGraph, mask: &SubgraphMask) -> String {
    let mut out = String::from("rank,permutation,degree\n");
    for (r, d) in graph.degree_sequence(mask).into_iter().enumerate() {
        let _ = writeln!(out, "{r},{},{d}", graph.vertex(r).to_one_line());
    }
    out
}

pub fn edge_list(graph: &TranspositionGraph, edges: &[EdgeId]) -> Vec<[String; 2]> {
    edges
        .iter()
        .map(|&e| {
            let (u, z, _) = graph.edge_endpoints(e).expect("edge in range");
            [graph.vertex(u).to_one_line(), graph.vertex(z).to_one_line()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loader_checks_adjacency() {
        let g = TranspositionGraph::new(4).unwrap();
        let ok = parse_subgraph(r#"{"n": 4, "edges": [["1234","2134"], ["2134","2143"]]}"#).unwrap();
        let m = ok.to_mask(&g).unwrap();
        assert_eq!(m.count(), 2);
        let bad = parse_subgraph(r#"{"n": 4, "edges": [["1234","2314"]]}"#).unwrap();
        assert!(matches!(bad.to_mask(&g), Err(CtnError::NotAdjacent(..))));
        let wrong_n = parse_subgraph(r#"{"n": 3, "edges": []}"#).unwrap();
        assert!(wrong_n.to_mask(&g).is_err());
        assert!(parse_subgraph("{").is_err());
    }

    #[test]
    fn file_round_trip() {
        let g = TranspositionGraph::new(4).unwrap();
        let m = SubgraphMask::from_edges(&g, [EdgeId(0), EdgeId(17), EdgeId(71)]);
        let f = SubgraphFile::from_mask(&g, &m);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(parse_subgraph(&text).unwrap().to_mask(&g).unwrap(), m);
    }

    #[test]
    fn degree_csv_shape() {
        let g = TranspositionGraph::new(3).unwrap();
        let csv = degree_csv(&g, &SubgraphMask::full(&g));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "rank,permutation,degree");
        assert_eq!(lines[1], "0,123,3");
    }
}
