//! The six continuity notions in both worlds, the closed-set
//! characterization, composition and constancy profiles.
//!
//! Global notions quantify over the R-open sets that meet the image of the
//! map; an R-open set missing the image has the empty preimage, which is
//! never Q-open.

mod finite;
mod interval;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_topology::TopologyError;
use crate::interval_world::IntervalError;
use crate::scales::ScaleError;

pub use finite::{
    check_closed_characterization, check_continuity, compose_scaled, identity, kernel, ComposedMap, ConstancyProfile,
    FiniteCertificate, FiniteVerdict, ScaledMap,
};
pub use interval::{iw_check_continuity, IntervalCertificate, IntervalScaledMap, IntervalVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strength {
    Strong,
    Weak,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Locus<P> {
    AtPoint(P),
    Local,
    Global,
}

/// Whether the domain scale is used as given or replaced by the trivial one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DomainScale {
    Q,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContinuityMode<P> {
    pub strength: Strength,
    pub locus: Locus<P>,
    pub domain_scale: DomainScale,
}

impl<P> ContinuityMode<P> {
    pub fn new(strength: Strength, locus: Locus<P>) -> Self {
        ContinuityMode { strength, locus, domain_scale: DomainScale::Q }
    }

    pub fn strong(locus: Locus<P>) -> Self {
        ContinuityMode::new(Strength::Strong, locus)
    }

    pub fn weak(locus: Locus<P>) -> Self {
        ContinuityMode::new(Strength::Weak, locus)
    }

    pub fn with_trivial_domain(mut self) -> Self {
        self.domain_scale = DomainScale::Trivial;
        self
    }

    /// The same strength and domain scale at another locus.
    pub fn at<Q>(&self, locus: Locus<Q>) -> ContinuityMode<Q> {
        ContinuityMode { strength: self.strength, locus, domain_scale: self.domain_scale }
    }
}

/// A mode written as `<locus>-<strength>[-trivial]`, with the locus one of
/// `point`, `local` or `global`; the point is supplied separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeSpec {
    pub strength: Strength,
    pub locus: LocusKind,
    pub domain_scale: DomainScale,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusKind {
    AtPoint,
    Local,
    Global,
}

impl ModeSpec {
    pub fn with_point<P>(self, point: Option<P>) -> Result<ContinuityMode<P>, ContinuityError> {
        let locus = match (self.locus, point) {
            (LocusKind::AtPoint, Some(p)) => Locus::AtPoint(p),
            (LocusKind::AtPoint, None) => return Err(ContinuityError::MissingPoint),
            (LocusKind::Local, _) => Locus::Local,
            (LocusKind::Global, _) => Locus::Global,
        };
        Ok(ContinuityMode { strength: self.strength, locus, domain_scale: self.domain_scale })
    }
}

impl FromStr for ModeSpec {
    type Err = ContinuityError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || ContinuityError::BadMode(text.to_string());
        let parts: Vec<&str> = text.split('-').collect();
        let (locus, strength, rest) = match parts.as_slice() {
            [l, s] => (*l, *s, None),
            [l, s, r] => (*l, *s, Some(*r)),
            _ => return Err(bad()),
        };
        let locus = match locus {
            "point" | "at" => LocusKind::AtPoint,
            "local" => LocusKind::Local,
            "global" => LocusKind::Global,
            _ => return Err(bad()),
        };
        let strength = match strength {
            "strong" => Strength::Strong,
            "weak" => Strength::Weak,
            _ => return Err(bad()),
        };
        let domain_scale = match rest {
            None => DomainScale::Q,
            Some("trivial") => DomainScale::Trivial,
            Some(_) => return Err(bad()),
        };
        Ok(ModeSpec { strength, locus, domain_scale })
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strength::Strong => "strong",
            Strength::Weak => "weak",
        })
    }
}

/// What a failure certificate shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    /// `set ∈ R(f(x))` but `f⁻¹(set) ∉ Q(x)`.
    PreimageNotInScale,
    /// `set ∈ R(f(x))` but no `U ∈ Q(x)` has `f(U) ⊆ set`.
    NoNeighbourhoodInside,
    /// `set` is R-open and meets the image, but `f⁻¹(set)` is not Q-open.
    PreimageNotQOpen,
    /// `set` is R-open and meets the image, but no Q-open `V` has
    /// `f(V) ⊆ set`.
    NoQOpenInside,
    /// `set` is R-closed, `f⁻¹(set)` is a proper subset and not Q-closed.
    PreimageNotQClosed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate<P, S> {
    pub violation: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point: Option<P>,
    pub set: S,
    pub preimage: S,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuityVerdict<P, S> {
    pub holds: bool,
    pub mode: ContinuityMode<P>,
    /// `false` when a positive verdict only covers probes.
    pub exhaustive: bool,
    /// Number of neighbourhoods or open sets examined.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate<P, S>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContinuityError {
    #[error("map table has {got} entries for a domain of {expected} points")]
    TableLength { expected: usize, got: usize },
    #[error("point {point} is mapped to {image}, outside the codomain of {n} points")]
    ImageOutOfRange { point: usize, image: usize, n: usize },
    #[error("point {point} is outside the domain of {n} points")]
    PointOutOfRange { point: usize, n: usize },
    #[error("scaled spaces do not match")]
    SpaceMismatch,
    #[error("mode `{0}` is not <point|local|global>-<strong|weak>[-trivial]")]
    BadMode(String),
    #[error("a point is required for this mode")]
    MissingPoint,
    #[error("probe {0} is not open in the codomain scale")]
    ProbeNotOpen(String),
    #[error("scale carrier differs from the map's: {0}")]
    CarrierMismatch(String),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}
