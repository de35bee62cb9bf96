//! Complete transposition graphs `CT_n`: exact structure, cycle enumeration,
//! auxiliary-graph identities and searches for dense even-cycle-free
//! spanning subgraphs.

pub mod auxiliary;
pub mod cli;
pub mod cycles;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod io;
pub mod perm;
pub mod stats;

pub use error::{CtnError, Result};
pub use graph::{EdgeId, SubgraphMask, TranspositionGraph};
pub use perm::{Parity, Permutation, PointSet, Transposition};

/// Exact ratios. Every count involved stays far below `i64` range for `n <= 8`.
pub type Rational = num_rational::Ratio<i64>;

pub const VERSION: &str = concat!("ctn-core ", env!("CARGO_PKG_VERSION"));

/// Serializes a [`Rational`] as `"p/q"` (or `"p"` when integral).
pub mod rational_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
