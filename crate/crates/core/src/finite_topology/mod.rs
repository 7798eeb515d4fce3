//! Finite topological spaces: validation, enumeration, closure and interior,
//! connectivity and separation.

mod enumerate;
mod point_set;
mod space;

use thiserror::Error;

pub use enumerate::{enumerate_topologies, MAX_ENUMERATION_POINTS};
pub use point_set::{Family, PointId, PointSet, MAX_POINTS};
pub use space::{validate_topology, FiniteSpace, TopologyViolation, Validation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("a space needs at least one point")]
    EmptyCarrier,
    #[error("{n} points exceeds the supported maximum of {max}")]
    TooManyPoints { n: usize, max: usize },
    #[error("point {point} is outside the carrier of {n} points")]
    PointOutOfRange { point: usize, n: usize },
    #[error("not a topology: {0}")]
    NotATopology(TopologyViolation),
    #[error("topologies can be enumerated for 1..={max} points, got {n}")]
    EnumerationOutOfRange { n: usize, max: usize },
}

/// Image of each point under a total map given as a table.
pub fn image(table: &[PointId], s: PointSet) -> PointSet {
    s.points().fold(PointSet::EMPTY, |acc, p| acc.union(PointSet::singleton(table[p.0])))
}

/// Points whose image lies in `s`.
pub fn preimage(table: &[PointId], s: PointSet) -> PointSet {
    let mut out = PointSet::EMPTY;
    for (x, &y) in table.iter().enumerate() {
        if s.contains(y) {
            out.insert(PointId(x));
        }
    }
    out
}
