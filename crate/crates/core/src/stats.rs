//! How a spanning subgraph `G` meets the 4-cycles of `CT_n`, the χ ratios
//! built from that classification, and the envelope of the known upper
//! bounds on `ex(CT_n, C_2l)`.

use serde::Serialize;

use crate::cycles::{collect_cycles, Adjacency, CycleWitness, CENSUS_MAX_N};
use crate::error::{CtnError, Result};
use crate::graph::{EdgeId, SubgraphMask, TranspositionGraph};
use crate::Rational;

/// Shape of `G ∩ H` for a 4-cycle `H`.
///
/// `TwoAdjacent` is reported as χ₂¹ and `TwoOpposite` as χ₂²; only their sum
/// enters any identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionClass {
    Empty,
    OneEdge,
    TwoAdjacent,
    TwoOpposite,
    ThreePath,
    Full,
}

impl IntersectionClass {
    pub const ALL: [IntersectionClass; 6] = [
        IntersectionClass::Empty,
        IntersectionClass::OneEdge,
        IntersectionClass::TwoAdjacent,
        IntersectionClass::TwoOpposite,
        IntersectionClass::ThreePath,
        IntersectionClass::Full,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn edge_count(self) -> u64 {
        match self {
            IntersectionClass::Empty => 0,
            IntersectionClass::OneEdge => 1,
            IntersectionClass::TwoAdjacent | IntersectionClass::TwoOpposite => 2,
            IntersectionClass::ThreePath => 3,
            IntersectionClass::Full => 4,
        }
    }
}

fn classify_flags(present: [bool; 4]) -> IntersectionClass {
    match present.iter().filter(|&&p| p).count() {
        0 => IntersectionClass::Empty,
        1 => IntersectionClass::OneEdge,
        2 => {
            if present[0] == present[2] {
                IntersectionClass::TwoOpposite
            } else {
                IntersectionClass::TwoAdjacent
            }
        }
        3 => IntersectionClass::ThreePath,
        _ => IntersectionClass::Full,
    }
}

pub fn classify_intersection(
    graph: &TranspositionGraph,
    mask: &SubgraphMask,
    h: &CycleWitness,
) -> Result<IntersectionClass> {
    if h.len() != 4 {
        return Err(CtnError::InvalidCycle(format!("expected a 4-cycle, got length {}", h.len())));
    }
    let edges = h.edges(graph);
    Ok(classify_flags([0, 1, 2, 3].map(|k| mask.contains(edges[k]))))
}

/// Edge ids of every 4-cycle of `CT_n`, in cycle order.
fn all_four_cycle_edges(graph: &TranspositionGraph) -> Result<Vec<[EdgeId; 4]>> {
    if graph.degree() > CENSUS_MAX_N {
        return Err(CtnError::Unsupported(format!(
            "4-cycle classification requires n <= {CENSUS_MAX_N}"
        )));
    }
    let adj = Adjacency::full(graph);
    Ok(collect_cycles(&adj, 4)
        .into_iter()
        .map(|c| [0, 1, 2, 3].map(|k| graph.edge_between(c[k], c[(k + 1) % 4]).expect("cycle edge")))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionCensus {
    pub counts: [u64; 6],
    pub n4: u64,
    /// `Σ_H e(G ∩ H)` over all 4-cycles.
    pub edge_incidences: u64,
    /// `Σ_{e ∈ G}` (4-cycles of `CT_n` through `e`), counted per edge.
    pub per_edge_incidences: u64,
}

impl IntersectionCensus {
    pub fn count(&self, class: IntersectionClass) -> u64 {
        self.counts[class.index()]
    }
}

pub fn intersection_census(graph: &TranspositionGraph, mask: &SubgraphMask) -> Result<IntersectionCensus> {
    let cycles = all_four_cycle_edges(graph)?;
    let mut counts = [0u64; 6];
    let mut through = vec![0u64; graph.edge_count()];
    for c in &cycles {
        counts[classify_flags(c.map(|e| mask.contains(e))).index()] += 1;
        for e in c {
            through[e.0] += 1;
        }
    }
    let edge_incidences = IntersectionClass::ALL
        .iter()
        .map(|c| c.edge_count() * counts[c.index()])
        .sum();
    let per_edge_incidences = mask.edges().map(|e| through[e.0]).sum();
    Ok(IntersectionCensus {
        counts,
        n4: cycles.len() as u64,
        edge_incidences,
        per_edge_incidences,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiVector {
    #[serde(with = "crate::rational_str")]
    pub chi0: Rational,
    #[serde(with = "crate::rational_str")]
    pub chi1: Rational,
    #[serde(with = "crate::rational_str")]
    pub chi2_adj: Rational,
    #[serde(with = "crate::rational_str")]
    pub chi2_opp: Rational,
    #[serde(with = "crate::rational_str")]
    pub chi3: Rational,
    #[serde(with = "crate::rational_str")]
    pub chi4: Rational,
    #[serde(with = "crate::rational_str")]
    pub pi: Rational,
    pub n4: u64,
    /// `χ₀ + χ₁ + χ₂¹ + χ₂² + χ₃ + χ₄ - 1`.
    #[serde(with = "crate::rational_str")]
    pub residual_sum: Rational,
    /// `χ₁ + 2(χ₂¹ + χ₂²) + 3χ₃ + 4χ₄ - 4π`.
    #[serde(with = "crate::rational_str")]
    pub residual_weighted: Rational,
    /// `Σ_H e(G ∩ H)` and `Σ_{e ∈ G} |4-cycles through e|`; always equal.
    pub double_count: (u64, u64),
}

impl ChiVector {
    pub fn weighted_sum(&self) -> Rational {
        self.chi1 + (self.chi2_adj + self.chi2_opp) * 2 + self.chi3 * 3 + self.chi4 * 4
    }

    pub fn identities_hold(&self) -> bool {
        self.residual_sum == Rational::from_integer(0)
            && self.residual_weighted == Rational::from_integer(0)
            && self.double_count.0 == self.double_count.1
    }
}

pub fn chi_vector(graph: &TranspositionGraph, mask: &SubgraphMask) -> Result<ChiVector> {
    let census = intersection_census(graph, mask)?;
    let n4 = census.n4 as i64;
    let ratio = |c: IntersectionClass| Rational::new(census.count(c) as i64, n4);
    let pi = Rational::new(mask.count() as i64, graph.edge_count() as i64);
    let mut chi = ChiVector {
        chi0: ratio(IntersectionClass::Empty),
        chi1: ratio(IntersectionClass::OneEdge),
        chi2_adj: ratio(IntersectionClass::TwoAdjacent),
        chi2_opp: ratio(IntersectionClass::TwoOpposite),
        chi3: ratio(IntersectionClass::ThreePath),
        chi4: ratio(IntersectionClass::Full),
        pi,
        n4: census.n4,
        residual_sum: Rational::from_integer(0),
        residual_weighted: Rational::from_integer(0),
        double_count: (census.edge_incidences, census.per_edge_incidences),
    };
    chi.residual_sum =
        chi.chi0 + chi.chi1 + chi.chi2_adj + chi.chi2_opp + chi.chi3 + chi.chi4 - Rational::from_integer(1);
    chi.residual_weighted = chi.weighted_sum() - pi * 4;
    Ok(chi)
}

#[derive(Debug, Clone, Serialize)]
pub struct Graph5Report {
    pub max_per_edge: u64,
    /// Edges of `CT_n` lying in more than two 4-cycles whose other three
    /// edges are all in `G`.
    pub witness_edges: Vec<EdgeId>,
}

impl Graph5Report {
    pub fn claim_holds(&self) -> bool {
        self.max_per_edge <= 2
    }
}

/// For every edge `e` of `CT_n`, counts the 4-cycles `H ∋ e` with
/// `(G ∩ H) - e` a 3-edge path.
pub fn graph5_claim_check(graph: &TranspositionGraph, mask: &SubgraphMask) -> Result<Graph5Report> {
    let cycles = all_four_cycle_edges(graph)?;
    let mut per_edge = vec![0u64; graph.edge_count()];
    for c in &cycles {
        for k in 0..4 {
            if (1..4).all(|d| mask.contains(c[(k + d) % 4])) {
                per_edge[c[k].0] += 1;
            }
        }
    }
    Ok(Graph5Report {
        max_per_edge: per_edge.iter().copied().max().unwrap_or(0),
        witness_edges: per_edge
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 2)
            .map(|(e, _)| EdgeId(e))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundPart {
    I,
    Ii,
    Iii,
    Iv,
}

impl BoundPart {
    pub fn label(self) -> &'static str {
        match self {
            BoundPart::I => "i",
            BoundPart::Ii => "ii",
            BoundPart::Iii => "iii",
            BoundPart::Iv => "iv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `ex(CT_n, C_2l) <= value · e(CT_n)` for every `n`.
    ExactRatio,
    /// `ex(CT_n, C_2l) <= (value + o(1)) · e(CT_n)`; never asserted on finite data.
    AsymptoticRatio,
    /// `ex(CT_n, C_2l) = O(n^value) · e(CT_n)`.
    ExponentOnly,
}

impl BoundKind {
    pub fn short(self) -> &'static str {
        match self {
            BoundKind::ExactRatio => "exact",
            BoundKind::AsymptoticRatio => "asymptotic",
            BoundKind::ExponentOnly => "exponent",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: Option<usize>,
    pub l: usize,
    pub part: BoundPart,
    pub kind: BoundKind,
    /// Ratio for the ratio kinds (`√2-1` is written symbolically), exponent otherwise.
    pub value: String,
    pub value_f64: f64,
    /// `value · e(CT_n)` when the bound is exact and `n` is given.
    pub edge_bound: Option<String>,
}

pub fn bound_envelope(n: Option<usize>, l: usize) -> Result<BoundReport> {
    if l < 2 {
        return Err(CtnError::Unsupported(format!("bounds need l >= 2, got {l}")));
    }
    let edge_count = match n {
        Some(n) => Some(TranspositionGraph::new(n)?.edge_count() as i64),
        None => None,
    };
    let (part, kind, value, value_f64, edge_bound) = match l {
        2 => {
            let r = Rational::new(3, 4);
            let eb = edge_count.map(|e| (r * e).to_string());
            (BoundPart::Iv, BoundKind::ExactRatio, r.to_string(), 0.75, eb)
        }
        3 => (
            BoundPart::Iii,
            BoundKind::AsymptoticRatio,
            "sqrt(2)-1".to_string(),
            std::f64::consts::SQRT_2 - 1.0,
            None,
        ),
        l if l % 2 == 0 => {
            let r = Rational::new(2, l as i64) - 1;
            (BoundPart::I, BoundKind::ExponentOnly, r.to_string(), ratio_f64(r), None)
        }
        7 => {
            let r = Rational::new(-1, 7);
            (BoundPart::Ii, BoundKind::ExponentOnly, r.to_string(), ratio_f64(r), None)
        }
        l => {
            let r = Rational::new(-1, 8) + Rational::new(1, 4 * (l as i64 - 3));
            (BoundPart::Ii, BoundKind::ExponentOnly, r.to_string(), ratio_f64(r), None)
        }
    };
    Ok(BoundReport { n, l, part, kind, value, value_f64, edge_bound })
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::cycles_of_length;

    #[test]
    fn classification_patterns() {
        assert_eq!(classify_flags([false; 4]), IntersectionClass::Empty);
        assert_eq!(classify_flags([true; 4]), IntersectionClass::Full);
        assert_eq!(classify_flags([true, true, false, false]), IntersectionClass::TwoAdjacent);
        assert_eq!(classify_flags([false, true, true, false]), IntersectionClass::TwoAdjacent);
        assert_eq!(classify_flags([true, false, false, true]), IntersectionClass::TwoAdjacent);
        assert_eq!(classify_flags([true, false, true, false]), IntersectionClass::TwoOpposite);
        assert_eq!(classify_flags([false, true, false, true]), IntersectionClass::TwoOpposite);
        assert_eq!(classify_flags([true, true, false, true]), IntersectionClass::ThreePath);
        assert_eq!(classify_flags([false, false, true, false]), IntersectionClass::OneEdge);
    }

    #[test]
    fn classify_rejects_non_squares() {
        let g = TranspositionGraph::new(3).unwrap();
        let full = SubgraphMask::full(&g);
        let hex = cycles_of_length(&g, &full, 6).unwrap().remove(0);
        assert!(classify_intersection(&g, &full, &hex).is_err());
        let sq = cycles_of_length(&g, &full, 4).unwrap().remove(0);
        assert_eq!(classify_intersection(&g, &full, &sq).unwrap(), IntersectionClass::Full);
        assert_eq!(
            classify_intersection(&g, &SubgraphMask::empty(&g), &sq).unwrap(),
            IntersectionClass::Empty
        );
    }

    #[test]
    fn chi_of_full_and_empty() {
        let g = TranspositionGraph::new(4).unwrap();
        let c = chi_vector(&g, &SubgraphMask::full(&g)).unwrap();
        assert_eq!(c.chi4, Rational::from_integer(1));
        assert_eq!(c.pi, Rational::from_integer(1));
        assert_eq!(c.weighted_sum(), Rational::from_integer(4));
        assert!(c.identities_hold());
        let c = chi_vector(&g, &SubgraphMask::empty(&g)).unwrap();
        assert_eq!(c.chi0, Rational::from_integer(1));
        assert_eq!(c.pi, Rational::from_integer(0));
        assert!(c.identities_hold());
    }

    #[test]
    fn graph5_on_empty() {
        let g = TranspositionGraph::new(4).unwrap();
        let r = graph5_claim_check(&g, &SubgraphMask::empty(&g)).unwrap();
        assert_eq!(r.max_per_edge, 0);
        assert!(r.witness_edges.is_empty());
    }

    #[test]
    fn envelope() {
        let b = bound_envelope(None, 2).unwrap();
        assert_eq!((b.part, b.kind, b.value.as_str()), (BoundPart::Iv, BoundKind::ExactRatio, "3/4"));
        assert_eq!(bound_envelope(Some(3), 2).unwrap().edge_bound.as_deref(), Some("27/4"));
        assert_eq!(bound_envelope(None, 3).unwrap().kind, BoundKind::AsymptoticRatio);
        assert_eq!(bound_envelope(None, 4).unwrap().value, "-1/2");
        assert_eq!(bound_envelope(None, 6).unwrap().value, "-2/3");
        assert_eq!(bound_envelope(None, 7).unwrap().value, "-1/7");
        assert_eq!(bound_envelope(None, 5).unwrap().value, "0");
        assert_eq!(bound_envelope(None, 9).unwrap().value, "-1/12");
        assert!(bound_envelope(None, 1).is_err());
    }
}
