//! Property sweeps over finite scaled spaces, the interval-world fixtures and
//! counterexample search.
//!
//! Every property is a claim about instances (a scale, a scaled map, a map
//! with an extra scale, a composite of two maps, ...). A sweep generates the
//! instances of a bounded universe in a fixed order, skips those violating
//! the claim's hypothesis, and records the first few violations. Sweeps run
//! on a thread pool capped by `SCALETOP_THREADS`; chunk results are merged in
//! generation order, so reports do not depend on scheduling.

mod fixtures;
pub mod oracle;
mod properties;
mod sweep;
pub mod universe;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::continuity::{ContinuityError, ScaledMap};
use crate::finite_topology::{PointId, PointSet, TopologyError};
use crate::interval_world::{IntervalError, Region};
use crate::scales::{IntervalScale, Scale, ScaleError};

pub use fixtures::{
    ex12, ex13, ex15, ex17_f, ex17_ff, fixtures, load_fixture, FixtureCheck, FixtureInstance, FIXTURE_NAMES,
};
pub use sweep::MAX_RECORDED;

/// Environment variable capping sweep parallelism.
pub const THREADS_VAR: &str = "SCALETOP_THREADS";

macro_rules! property_ids {
    ($($variant:ident = $name:literal: $statement:literal,)*) => {
        /// The claims the verifier can sweep or search.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PropertyId {
            $($variant,)*
        }

        impl PropertyId {
            pub const ALL: &'static [PropertyId] = &[$(PropertyId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(PropertyId::$variant => $name,)*
                }
            }

            /// The claim in words.
            pub fn statement(self) -> &'static str {
                match self {
                    $(PropertyId::$variant => $statement,)*
                }
            }
        }
    };
}

property_ids! {
    P1A = "P1A": "TQ is closed under unions iff every intersection of Q-closed sets is Q-closed",
    P1B = "P1B": "TQ is closed under nonempty intersections iff every finite union of Q-closed sets other than X is Q-closed",
    C1 = "C1": "TQ is a lattice iff Q-closed sets are closed under intersections and under unions other than X",
    L1 = "L1": "with trivial scales, strong global continuity is classical continuity, and strong continuity at x implies classical continuity at x",
    L2 = "L2": "with trivial scales, strong local continuity is classical continuity",
    L3 = "L3": "strong continuity implies weak continuity at every point, locally and globally",
    L4 = "L4": "with a trivial domain scale and a neighbourhood-closed codomain scale, weak local continuity implies strong local continuity",
    L5 = "L5": "with trivial scales, weak continuity at x is classical continuity at x",
    L6 = "L6": "with trivial scales, weak local continuity is classical continuity",
    P2 = "P2": "a strongly locally continuous surjection is strongly globally continuous",
    P3 = "P3": "with a trivial domain scale, strong local and strong global continuity agree for every map",
    P4 = "P4": "strong global continuity holds iff every R-closed set with a proper preimage has a Q-closed preimage",
    P5 = "P5": "a weakly locally continuous surjection is weakly globally continuous",
    P6 = "P6": "with a trivial domain scale, strong local and strong global continuity agree for surjections",
    P7A = "P7A": "if P is an F-structure finer than Q, strong (Q,R)-continuity implies strong (P,R)-continuity at every point, locally and globally",
    P7B = "P7B": "if R is finer than V and Q or R is an F-structure, strong (Q,R)-continuity implies strong (Q,V)-continuity at every point and locally",
    P8A = "P8A": "if TQ is within TP and Q(x) within P(x), strong (Q,R)-continuity implies strong (P,R)-continuity at every point, locally and globally",
    P8B = "P8B": "if TV is within TR and V(y) within R(y), strong (Q,R)-continuity implies strong (Q,V)-continuity at every point, locally and globally",
    P9 = "P9": "strong continuity is preserved by composition through a shared middle scale, at a point, locally and globally",
    T1 = "T1": "if R(y) is within H(y), f strongly (Q,H)- and g strongly (R,P)-continuous give gf strongly (Q,P)-continuous at a point and locally",
    T2 = "T2": "if TR is within TH, f strongly globally (Q,H)- and g strongly globally (R,P)-continuous give gf strongly globally (Q,P)-continuous",
    T3 = "T3": "into a discrete space with its trivial scale, from a P-structure, weak continuity at x holds iff f is constant on the chosen neighbourhood of x",
    T5 = "T5": "for a family of scales forming a base for R and coarser than R, weak local (Q,R)-continuity holds iff weak local (Q,Ri)-continuity holds for all i",
    T6 = "T6": "for a family forming a base for R and coarser than R at f(x), weak (Q,R)-continuity at x holds iff weak (Q,Ri)-continuity at x holds for all i",
    C10 = "C10": "into a discrete space with its trivial scale, from a P-structure with connected chosen neighbourhoods, weak local continuity holds iff f is constant on components",
    C14 = "C14": "with a trivial domain scale, if TV is within TR and V(y) within R(y), strong R-continuity implies strong V-continuity at every point, locally and globally",
    C15 = "C15": "strong (Q,R)-continuity implies strong continuity with the trivial domain scale at every point, locally and globally",
    C16 = "C16": "a classically continuous map is strongly continuous, locally and globally, from the trivial domain scale to any codomain scale",
    C17 = "C17": "if the codomain scale is generated by a base of the topology, strong local and global continuity from the trivial domain scale are classical continuity, and strong continuity at x implies classical continuity at x",
    EX16 = "EX16": "the trivial scale is finer than every scale",
    BqoaClaim = "BQOA_CLAIM": "on the line, no bounded nonempty set is BQ_Oa-closed, and the empty set is BQ_Oa-closed but not BQ_Oa-open",
    PR1 = "PR1": "search: weak local continuity implies weak global continuity",
    PR2 = "PR2": "search: weak global continuity implies weak local continuity",
    PR3 = "PR3": "search: weak global continuity implies strong global continuity",
    PR4 = "PR4": "search: weak continuity at a point implies strong continuity at that point",
}

impl PropertyId {
    /// Separation questions and unproven universals, whose outcome is
    /// recorded rather than required.
    pub fn is_search(self) -> bool {
        matches!(self, PropertyId::P3 | PropertyId::PR1 | PropertyId::PR2 | PropertyId::PR3 | PropertyId::PR4)
    }

    /// Largest point count for an exhaustive sweep of this property.
    pub fn exhaustive_limit(self) -> usize {
        use PropertyId::*;
        match self {
            T3 | C10 => 4,
            P7A | P7B | P8A | P8B | P9 | T1 | T2 | T5 | T6 => 2,
            _ => universe::MAX_EXHAUSTIVE_POINTS,
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyId {
    type Err = VerifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PropertyId::ALL
            .iter()
            .copied()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| VerifierError::UnknownProperty(s.to_string()))
    }
}

impl Serialize for PropertyId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for PropertyId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SweepMode {
    Exhaustive,
    Sampled,
}

impl FromStr for SweepMode {
    type Err = VerifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exhaustive" => Ok(SweepMode::Exhaustive),
            "sampled" => Ok(SweepMode::Sampled),
            _ => Err(VerifierError::BadConfig(format!("mode `{s}` is not exhaustive or sampled"))),
        }
    }
}

/// Bounds and seed of a sweep.
///
/// When sampling, `scale_budget` is the number of scales drawn per topology
/// (or, for composites and line sets, the number of draws per size class),
/// and `map_budget` the number of maps drawn per pair of scales.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub max_points: usize,
    pub scale_budget: usize,
    pub map_budget: usize,
    pub seed: u64,
    pub mode: SweepMode,
}

pub const MAX_POINTS: usize = 4;

impl SweepConfig {
    pub fn exhaustive(max_points: usize) -> Self {
        SweepConfig { max_points, scale_budget: 8, map_budget: 16, seed: 0, mode: SweepMode::Exhaustive }
    }

    pub fn sampled(max_points: usize, seed: u64) -> Self {
        SweepConfig { max_points, scale_budget: 8, map_budget: 16, seed, mode: SweepMode::Sampled }
    }

    pub fn with_budget(mut self, scale_budget: usize, map_budget: usize) -> Self {
        self.scale_budget = scale_budget;
        self.map_budget = map_budget;
        self
    }

    pub fn check(&self, id: PropertyId) -> Result<(), VerifierError> {
        if self.max_points == 0 || self.max_points > MAX_POINTS {
            return Err(VerifierError::BadConfig(format!("max points must be 1..={MAX_POINTS}")));
        }
        if self.mode == SweepMode::Exhaustive && self.max_points > id.exhaustive_limit() {
            return Err(VerifierError::BadConfig(format!(
                "exhaustive sweeps of {id} are bounded by {} points",
                id.exhaustive_limit()
            )));
        }
        if self.scale_budget == 0 || self.map_budget == 0 {
            return Err(VerifierError::BadConfig("budgets must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ConfirmedOnSweep,
    CounterexampleFound,
}

/// The object a claim is evaluated on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Instance {
    Scale { scale: Scale },
    Map { map: ScaledMap },
    /// A map and a second scale on its domain.
    MapAndDomain { map: ScaledMap, other: Scale },
    /// A map and a second scale on its codomain.
    MapAndCodomain { map: ScaledMap, other: Scale },
    /// `f : (X,Q) → (Y,H)` and `g : (Y,R) → (Z,P)`.
    Composite { f: ScaledMap, g: ScaledMap },
    /// A map and a family of codomain scales, optionally at one point.
    Family {
        map: ScaledMap,
        family: Vec<Scale>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        point: Option<PointId>,
    },
    /// A map from a P-structure with its chosen neighbourhoods.
    PStructure { map: ScaledMap, generators: Vec<PointSet> },
    Region { scale: IntervalScale, set: Region },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub instance: Instance,
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property: PropertyId,
    pub statement: String,
    pub config: SweepConfig,
    pub generated: u64,
    pub tested: u64,
    pub skipped: u64,
    /// Tested instances whose premise held.
    pub nonvacuous: u64,
    pub verdict: Verdict,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_tally(property: PropertyId, config: &SweepConfig, t: sweep::Tally) -> Self {
        VerificationReport {
            property,
            statement: property.statement().to_string(),
            config: config.clone(),
            generated: t.generated,
            tested: t.tested,
            skipped: t.skipped,
            nonvacuous: t.nonvacuous,
            verdict: if t.violation_count == 0 { Verdict::ConfirmedOnSweep } else { Verdict::CounterexampleFound },
            violation_count: t.violation_count,
            violations: t.violations,
        }
    }

    pub fn confirmed(&self) -> bool {
        self.verdict == Verdict::ConfirmedOnSweep
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("bad sweep configuration: {0}")]
    BadConfig(String),
    #[error("{0} is not a separation question")]
    NotSearchable(PropertyId),
    #[error("instance does not fit property {0}")]
    InstanceShape(PropertyId),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Continuity(#[from] ContinuityError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

fn in_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Evaluates the claim named by `id` over the universe described by `cfg`.
pub fn run_property(id: PropertyId, cfg: &SweepConfig) -> Result<VerificationReport, VerifierError> {
    cfg.check(id)?;
    let tally = in_pool(|| properties::run(id, cfg, false))?;
    Ok(VerificationReport::from_tally(id, cfg, tally))
}

/// Sweeps size classes in order and stops after the first one holding a
/// violation; the first recorded violation is the least in generation
/// order.
pub fn search_counterexample(id: PropertyId, cfg: &SweepConfig) -> Result<VerificationReport, VerifierError> {
    if !id.is_search() {
        return Err(VerifierError::NotSearchable(id));
    }
    cfg.check(id)?;
    let tally = in_pool(|| properties::run(id, cfg, true))?;
    Ok(VerificationReport::from_tally(id, cfg, tally))
}

/// Re-evaluates a recorded violation through the scale and continuity APIs
/// and the classical oracle; `true` when it is a genuine violation.
pub fn replay(id: PropertyId, violation: &Violation) -> Result<bool, VerifierError> {
    Ok(matches!(properties::evaluate(id, &violation.instance)?, sweep::Outcome::Fail(_)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The filter-domain branch of the codomain refinement claim has
    /// counterexamples once preimages of open sets need not be open.
    fn asserted(id: &PropertyId) -> bool {
        !id.is_search() && *id != PropertyId::P7B
    }

    fn small(id: PropertyId) -> SweepConfig {
        SweepConfig::exhaustive(id.exhaustive_limit().min(2))
    }

    #[test]
    fn every_universal_holds_on_small_sweeps() {
        for id in PropertyId::ALL.iter().copied().filter(asserted) {
            let report = run_property(id, &small(id)).unwrap();
            assert!(report.confirmed(), "{id}: {:#?}", report.violations.first());
            assert!(report.tested > 0, "{id} tested nothing");
        }
    }

    #[test]
    fn recorded_violations_replay() {
        for id in PropertyId::ALL.iter().copied().filter(|id| id.is_search()) {
            let report = search_counterexample(id, &small(id)).unwrap();
            eprintln!("{id}: {:?} after {} instances", report.verdict, report.generated);
            for v in &report.violations {
                assert!(replay(id, v).unwrap(), "{id}: {v:#?}");
            }
        }
    }

    #[test]
    fn codomain_refinement_gap_is_genuine() {
        let report = run_property(PropertyId::P7B, &SweepConfig::sampled(3, 1)).unwrap();
        assert!(!report.confirmed());
        for v in &report.violations {
            assert!(replay(PropertyId::P7B, v).unwrap());
            let Instance::MapAndCodomain { map, .. } = &v.instance else { panic!("shape") };
            assert!(!map.codomain().classify().is_F);
        }
    }

    #[test]
    fn closed_characterization_on_three_points() {
        let report = run_property(PropertyId::P4, &SweepConfig::exhaustive(3)).unwrap();
        assert!(report.confirmed());
        assert!(report.nonvacuous > 0);
    }

    #[test]
    fn sampled_runs_are_deterministic() {
        let cfg = SweepConfig::sampled(3, 7);
        for id in [PropertyId::L3, PropertyId::T1, PropertyId::T5, PropertyId::BqoaClaim] {
            let a = serde_json::to_string(&run_property(id, &cfg).unwrap()).unwrap();
            let b = serde_json::to_string(&run_property(id, &cfg).unwrap()).unwrap();
            assert_eq!(a, b, "{id}");
        }
    }

    #[test]
    fn sampled_universals_hold() {
        let cfg = SweepConfig::sampled(3, 1);
        for id in PropertyId::ALL.iter().copied().filter(asserted) {
            let report = run_property(id, &cfg).unwrap();
            assert!(report.confirmed(), "{id}: {:#?}", report.violations.first());
        }
    }

    #[test]
    fn configs_are_checked() {
        assert!(run_property(PropertyId::T1, &SweepConfig::exhaustive(3)).is_err());
        assert!(run_property(PropertyId::L1, &SweepConfig::exhaustive(5)).is_err());
        assert!(search_counterexample(PropertyId::L1, &SweepConfig::exhaustive(1)).is_err());
        assert_eq!("bqoa_claim".parse::<PropertyId>().unwrap(), PropertyId::BqoaClaim);
    }
}
