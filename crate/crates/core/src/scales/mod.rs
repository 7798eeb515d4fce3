//! Scales: assignments of neighbourhood families to points, on finite spaces
//! and on subsets of the line.

mod finite;
mod interval;

use thiserror::Error;

use crate::finite_topology::{PointId, PointSet};
use crate::interval_world::IntervalError;

pub use finite::{p_structure, trivial_scale, Scale, ScaleViolation, StructureFlags};
pub use interval::{IntervalScale, IntervalScaleKind, RadiusCell};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScaleError {
    #[error("expected {expected} neighbourhood families, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("set {set:?} is not open")]
    NotOpen { set: PointSet },
    #[error("Q({point:?}) contains {set:?}, which is not in the family of Q-open sets")]
    OutsideTq { point: PointId, set: PointSet },
    #[error("scale axiom violated: {0:?}")]
    Invalid(ScaleViolation),
    #[error("scales live on different spaces")]
    SpaceMismatch,
    #[error("generator {set:?} at {point:?} is not an open neighbourhood")]
    BadGenerator { point: PointId, set: PointSet },
    #[error("kind does not fit the carrier: {0}")]
    KindMismatch(String),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}
