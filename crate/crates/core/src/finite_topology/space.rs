use std::fmt;

use serde::{Deserialize, Serialize};

use super::point_set::{Family, PointId, PointSet, MAX_POINTS};
use super::TopologyError;

/// Outcome of an axiom check: either valid, or the first violated axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "violation", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Validation<V> {
    Valid,
    Invalid(V),
}

impl<V> Validation<V> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

/// The first topology axiom a family of sets fails, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum TopologyViolation {
    MissingEmpty,
    MissingCarrier,
    UnionNotOpen { a: PointSet, b: PointSet },
    IntersectionNotOpen { a: PointSet, b: PointSet },
}

impl fmt::Display for TopologyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyViolation::MissingEmpty => write!(f, "the empty set is not open"),
            TopologyViolation::MissingCarrier => write!(f, "the carrier is not open"),
            TopologyViolation::UnionNotOpen { a, b } => write!(f, "{a:?} ∪ {b:?} is not open"),
            TopologyViolation::IntersectionNotOpen { a, b } => {
                write!(f, "{a:?} ∩ {b:?} is not open")
            }
        }
    }
}

fn check_size(n: usize) -> Result<(), TopologyError> {
    if n == 0 {
        return Err(TopologyError::EmptyCarrier);
    }
    if n > MAX_POINTS {
        return Err(TopologyError::TooManyPoints { n, max: MAX_POINTS });
    }
    Ok(())
}

/// Checks the topology axioms for `opens` over the carrier `{0, .., n-1}`.
///
/// Out-of-range points are an error; axiom failures are reported as
/// [`Validation::Invalid`] with the first witnessing pair.
pub fn validate_topology(
    opens: &[Vec<usize>],
    n: usize,
) -> Result<Validation<TopologyViolation>, TopologyError> {
    check_size(n)?;
    let mut family = Family::EMPTY;
    for set in opens {
        if let Some(&p) = set.iter().find(|&&p| p >= n) {
            return Err(TopologyError::PointOutOfRange { point: p, n });
        }
        family.insert(PointSet::from_points(set.iter().copied()));
    }
    Ok(validate_family(family, n))
}

pub(crate) fn validate_family(family: Family, n: usize) -> Validation<TopologyViolation> {
    if !family.contains(PointSet::EMPTY) {
        return Validation::Invalid(TopologyViolation::MissingEmpty);
    }
    if !family.contains(PointSet::full(n)) {
        return Validation::Invalid(TopologyViolation::MissingCarrier);
    }
    for a in family.sets() {
        for b in family.sets().filter(|&b| b > a) {
            if !family.contains(a.union(b)) {
                return Validation::Invalid(TopologyViolation::UnionNotOpen { a, b });
            }
        }
    }
    for a in family.sets() {
        for b in family.sets().filter(|&b| b > a) {
            if !family.contains(a.intersection(b)) {
                return Validation::Invalid(TopologyViolation::IntersectionNotOpen { a, b });
            }
        }
    }
    Validation::Valid
}

/// A finite topological space on the carrier `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSpace {
    n: usize,
    opens: Family,
}

impl FiniteSpace {
    pub fn new(n: usize, opens: &[Vec<usize>]) -> Result<Self, TopologyError> {
        match validate_topology(opens, n)? {
            Validation::Valid => {
                let family = opens
                    .iter()
                    .map(|s| PointSet::from_points(s.iter().copied()))
                    .collect();
                Ok(FiniteSpace { n, opens: family })
            }
            Validation::Invalid(v) => Err(TopologyError::NotATopology(v)),
        }
    }

    pub fn from_family(n: usize, opens: Family) -> Result<Self, TopologyError> {
        check_size(n)?;
        if opens.sets().any(|s| s.span() > n) {
            let bad = opens.sets().find(|s| s.span() > n).unwrap();
            return Err(TopologyError::PointOutOfRange { point: bad.span() - 1, n });
        }
        match validate_family(opens, n) {
            Validation::Valid => Ok(FiniteSpace { n, opens }),
            Validation::Invalid(v) => Err(TopologyError::NotATopology(v)),
        }
    }

    /// Caller guarantees `opens` is a topology on `n` points.
    pub(crate) fn from_family_unchecked(n: usize, opens: Family) -> Self {
        debug_assert!(validate_family(opens, n).is_valid());
        FiniteSpace { n, opens }
    }

    pub fn discrete(n: usize) -> Result<Self, TopologyError> {
        check_size(n)?;
        let all = (0..1u32 << n).map(PointSet::from_bits).collect();
        Ok(FiniteSpace { n, opens: all })
    }

    pub fn indiscrete(n: usize) -> Result<Self, TopologyError> {
        check_size(n)?;
        Ok(FiniteSpace { n, opens: Family::from_sets([PointSet::EMPTY, PointSet::full(n)]) })
    }

    /// The Sierpiński space: `{∅, {0}, {0, 1}}`.
    pub fn sierpinski() -> Self {
        FiniteSpace::new(2, &[vec![], vec![0], vec![0, 1]]).expect("Sierpiński space is a topology")
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn carrier(&self) -> PointSet {
        PointSet::full(self.n)
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        (0..self.n).map(PointId)
    }

    pub fn opens(&self) -> Family {
        self.opens
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        self.opens.contains(s)
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        self.opens.contains(s.complement(self.n))
    }

    pub fn contains_set(&self, s: PointSet) -> bool {
        s.is_subset(self.carrier())
    }

    /// Open sets containing `p`.
    pub fn neighborhoods(&self, p: PointId) -> Family {
        self.opens.containing(p)
    }

    /// Smallest open set containing `p`.
    pub fn minimal_neighborhood(&self, p: PointId) -> PointSet {
        self.neighborhoods(p)
            .sets()
            .fold(self.carrier(), PointSet::intersection)
    }

    /// Smallest closed superset of `s`.
    pub fn closure(&self, s: PointSet) -> PointSet {
        let outside = self
            .opens
            .sets()
            .filter(|o| !o.intersects(s))
            .fold(PointSet::EMPTY, PointSet::union);
        outside.complement(self.n)
    }

    /// Largest open subset of `s`.
    pub fn interior(&self, s: PointSet) -> PointSet {
        self.opens
            .sets()
            .filter(|o| o.is_subset(s))
            .fold(PointSet::EMPTY, PointSet::union)
    }

    /// Partition of the carrier into connected components, ordered by least
    /// member.
    ///
    /// Two points share a component iff they are linked by a chain in which
    /// consecutive points are comparable in the specialization preorder
    /// (`x` lies in the minimal neighbourhood of `y` or vice versa).
    pub fn connected_components(&self) -> Vec<PointSet> {
        let minimal: Vec<PointSet> = self.points().map(|p| self.minimal_neighborhood(p)).collect();
        let mut blocks: Vec<PointSet> = Vec::new();
        let mut assigned = PointSet::EMPTY;
        for start in self.points() {
            if assigned.contains(start) {
                continue;
            }
            let mut block = PointSet::singleton(start);
            loop {
                let mut grown = block;
                for p in self.points() {
                    if block.contains(p) {
                        grown = grown.union(minimal[p.0]);
                    } else if minimal[p.0].intersects(block) {
                        grown.insert(p);
                    }
                }
                if grown == block {
                    break;
                }
                block = grown;
            }
            assigned = assigned.union(block);
            blocks.push(block);
        }
        blocks
    }

    /// The component containing `p`.
    pub fn component_of(&self, p: PointId) -> PointSet {
        self.connected_components()
            .into_iter()
            .find(|b| b.contains(p))
            .expect("components cover the carrier")
    }

    /// Whether `s` is connected in the subspace topology.
    pub fn is_connected_subset(&self, s: PointSet) -> bool {
        if s.is_empty() {
            return true;
        }
        let traces: Family = self.opens.sets().map(|o| o.intersection(s)).collect();
        // A separation is a relatively open proper nonempty subset whose
        // complement in `s` is also relatively open.
        !traces.sets().any(|t| {
            !t.is_empty() && t != s && traces.contains(s.difference(t))
        })
    }

    /// Every singleton is closed.
    #[allow(non_snake_case)]
    pub fn is_T1(&self) -> bool {
        self.points().all(|p| self.is_closed(PointSet::singleton(p)))
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSpace")
            .field("n", &self.n)
            .field("opens", &self.opens)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    n: usize,
    opens: Vec<PointSet>,
}

impl Serialize for FiniteSpace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SpaceRepr { n: self.n, opens: self.opens.sets().collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteSpace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SpaceRepr::deserialize(deserializer)?;
        let opens: Vec<Vec<usize>> = repr.opens.iter().map(|s| s.to_vec()).collect();
        FiniteSpace::new(repr.n, &opens).map_err(serde::de::Error::custom)
    }
}
