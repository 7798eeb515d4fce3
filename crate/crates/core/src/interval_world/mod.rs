//! Exact subsets of the real line (and of a few disjoint copies of it) with
//! endpoints in `Q(√2)`, and piecewise-affine maps between them.

mod affine;
mod carrier;
pub mod exact;
mod line_set;

use thiserror::Error;

pub use affine::{AffinePiece, BreakpointValue, FuzzyVerdict, GapWitness, OneSidedLimits, PiecewiseAffineMap};
pub use carrier::{Carrier, CarrierPoint, Region, SheetId};
pub use exact::{ExactNumber, Rational};
pub use line_set::{Bound, Extent, Interval, LineSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("an infinite interval end cannot be closed")]
    ClosedInfiniteEnd,
    #[error("empty interval {0}")]
    EmptyInterval(String),
    #[error("sheet {0} is empty")]
    EmptySheet(SheetId),
    #[error("sheet {0} listed twice")]
    DuplicateSheet(SheetId),
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("point {0} is outside the carrier")]
    OutsideCarrier(String),
    #[error("point {0} is outside the domain")]
    OutsideDomain(String),
    #[error("value outside the codomain: {0}")]
    OutsideCodomain(String),
    #[error("pieces do not partition the domain: {0}")]
    Coverage(String),
    #[error("not representable as a piecewise-affine map: {0}")]
    NotRepresentable(String),
    #[error("gap at {0} compares values on different sheets")]
    GapAcrossSheets(String),
    #[error("threshold {0} is negative")]
    NegativeThreshold(String),
}
