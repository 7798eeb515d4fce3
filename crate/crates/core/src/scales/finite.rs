use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::finite_topology::{Family, FiniteSpace, PointId, PointSet, Validation};

use super::ScaleError;

/// The first violated scale axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom")]
pub enum ScaleViolation {
    /// `set ∈ Q(point)` but `point ∉ set`.
    SC1 { point: PointId, set: PointSet },
    /// `set ∈ TQ` is assigned to no point.
    SC2 { set: PointSet },
}

/// A scale on a finite space: a family `TQ` of open sets and, for every
/// point, the subfamily `Q(x)` of its Q-neighbourhoods.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scale {
    space: Arc<FiniteSpace>,
    tq: Family,
    assignment: Vec<Family>,
}

impl Scale {
    /// Checks the structural requirements (`TQ` open, `Q(x) ⊆ TQ`, one
    /// family per point) but not the axioms; see [`Scale::validate`].
    pub fn new(space: Arc<FiniteSpace>, tq: Family, assignment: Vec<Family>) -> Result<Self, ScaleError> {
        if assignment.len() != space.n_points() {
            return Err(ScaleError::WrongLength { expected: space.n_points(), got: assignment.len() });
        }
        if let Some(set) = tq.difference(space.opens()).sets().next() {
            return Err(ScaleError::NotOpen { set });
        }
        for (x, q) in assignment.iter().enumerate() {
            if let Some(set) = q.difference(tq).sets().next() {
                return Err(ScaleError::OutsideTq { point: PointId(x), set });
            }
        }
        Ok(Scale { space, tq, assignment })
    }

    /// Builds a scale and insists that it satisfies both axioms.
    pub fn checked(space: Arc<FiniteSpace>, tq: Family, assignment: Vec<Family>) -> Result<Self, ScaleError> {
        let s = Scale::new(space, tq, assignment)?;
        match s.validate() {
            Validation::Valid => Ok(s),
            Validation::Invalid(v) => Err(ScaleError::Invalid(v)),
        }
    }

    /// The scale whose `TQ` is exactly the union of the given assignment.
    pub fn from_assignment(space: Arc<FiniteSpace>, assignment: Vec<Family>) -> Result<Self, ScaleError> {
        let tq = assignment.iter().fold(Family::EMPTY, |acc, q| acc.union(*q));
        Scale::new(space, tq, assignment)
    }

    pub(crate) fn from_parts_unchecked(space: Arc<FiniteSpace>, tq: Family, assignment: Vec<Family>) -> Self {
        Scale { space, tq, assignment }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn tq(&self) -> Family {
        self.tq
    }

    pub fn assignment(&self) -> &[Family] {
        &self.assignment
    }

    /// `Q(x)`.
    pub fn at(&self, x: PointId) -> Family {
        self.assignment[x.0]
    }

    pub fn validate(&self) -> Validation<ScaleViolation> {
        validate_parts(self.tq, &self.assignment)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Union of all `Q(x)`: the Q-open sets.
    pub fn open_family(&self) -> Family {
        self.assignment.iter().fold(Family::EMPTY, |acc, q| acc.union(*q))
    }

    pub fn q_open(&self, s: PointSet) -> bool {
        self.open_family().contains(s)
    }

    pub fn q_closed(&self, s: PointSet) -> bool {
        self.q_open(s.complement(self.space.n_points()))
    }

    pub fn classify(&self) -> StructureFlags {
        StructureFlags::compute(&self.space, self.tq, &self.assignment)
    }

    fn same_space(&self, other: &Scale) -> Result<(), ScaleError> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(ScaleError::SpaceMismatch)
        }
    }

    /// Every `Q(x)` member contains some member of `P(x)` at `x`.
    pub fn finer_at(&self, coarser: &Scale, x: PointId) -> Result<bool, ScaleError> {
        self.same_space(coarser)?;
        Ok(finer_at_parts(self.at(x), coarser.at(x)))
    }

    /// `self` is finer than `coarser` at every point.
    pub fn finer(&self, coarser: &Scale) -> Result<bool, ScaleError> {
        self.same_space(coarser)?;
        Ok(self.space.points().all(|x| finer_at_parts(self.at(x), coarser.at(x))))
    }

    /// `self(x) ⊆ other(x)` everywhere and `self` is a valid scale.
    pub fn is_subscale(&self, other: &Scale) -> Result<bool, ScaleError> {
        self.same_space(other)?;
        Ok(self.is_valid() && self.assignment.iter().zip(&other.assignment).all(|(h, q)| h.is_subset(*q)))
    }

    /// Pointwise union.
    pub fn union(&self, other: &Scale) -> Result<Scale, ScaleError> {
        self.same_space(other)?;
        let assignment = self.assignment.iter().zip(&other.assignment).map(|(a, b)| a.union(*b)).collect();
        Ok(Scale::from_parts_unchecked(self.space.clone(), self.tq.union(other.tq), assignment))
    }

    /// Pointwise intersection over `TQ ∩ TP`; fails if a common set is
    /// assigned to no point.
    pub fn intersection(&self, other: &Scale) -> Result<Scale, ScaleError> {
        self.same_space(other)?;
        let assignment = self.assignment.iter().zip(&other.assignment).map(|(a, b)| a.intersection(*b)).collect();
        let s = Scale::from_parts_unchecked(self.space.clone(), self.tq.intersection(other.tq), assignment);
        match s.validate() {
            Validation::Valid => Ok(s),
            Validation::Invalid(v) => Err(ScaleError::Invalid(v)),
        }
    }

    /// Least pointwise superscale that is an F-structure.
    pub fn f_closure(&self) -> Scale {
        let n = self.space.n_points();
        let opens = self.space.opens();
        self.close_with(|_, q| {
            let mut q = if q.is_empty() { Family::EMPTY.with(PointSet::full(n)) } else { q };
            for a in q.sets() {
                for b in opens.sets().filter(|b| a.is_subset(*b)) {
                    q.insert(b);
                }
            }
            for a in q.sets() {
                for b in q.sets() {
                    q.insert(a.intersection(b));
                }
            }
            q
        })
    }

    /// Least pointwise superscale that is a U-structure.
    pub fn u_closure(&self) -> Scale {
        self.close_with(|tq, q| {
            let mut q = q;
            for a in q.sets() {
                for b in tq.sets() {
                    q.insert(a.union(b));
                }
            }
            q
        })
    }

    /// Least pointwise superscale that is an I-structure.
    pub fn i_closure(&self) -> Scale {
        self.close_with_point(|x, tq, q| {
            let mut q = q;
            for a in q.sets() {
                for b in tq.containing(x).sets() {
                    q.insert(a.intersection(b));
                }
            }
            q
        })
    }

    /// Least pointwise superscale that is an L-structure.
    pub fn l_closure(&self) -> Scale {
        self.close_with(|_, q| {
            let mut q = q;
            for a in q.sets() {
                for b in q.sets() {
                    q.insert(a.union(b));
                    q.insert(a.intersection(b));
                }
            }
            q
        })
    }

    fn close_with(&self, step: impl Fn(Family, Family) -> Family) -> Scale {
        self.close_with_point(|_, tq, q| step(tq, q))
    }

    /// Applies `step` pointwise until nothing changes; `TQ` grows with the
    /// assignment.
    fn close_with_point(&self, step: impl Fn(PointId, Family, Family) -> Family) -> Scale {
        let mut tq = self.tq;
        let mut assignment = self.assignment.clone();
        loop {
            let next: Vec<Family> =
                assignment.iter().enumerate().map(|(x, q)| step(PointId(x), tq, *q)).collect();
            let next_tq = next.iter().fold(tq, |acc, q| acc.union(*q));
            if next == assignment && next_tq == tq {
                return Scale::from_parts_unchecked(self.space.clone(), tq, assignment);
            }
            assignment = next;
            tq = next_tq;
        }
    }
}

/// The scale assigning each point all of its open neighbourhoods.
pub fn trivial_scale(space: Arc<FiniteSpace>) -> Scale {
    let tq = space.opens().difference(Family::EMPTY.with(PointSet::EMPTY));
    let assignment = space.points().map(|x| space.neighborhoods(x)).collect();
    Scale::from_parts_unchecked(space, tq, assignment)
}

/// The P-structure whose `Q(x)` is every open superset of `generators[x]`.
pub fn p_structure(space: Arc<FiniteSpace>, generators: &[PointSet]) -> Result<Scale, ScaleError> {
    if generators.len() != space.n_points() {
        return Err(ScaleError::WrongLength { expected: space.n_points(), got: generators.len() });
    }
    let mut assignment = Vec::with_capacity(generators.len());
    for (x, &g) in generators.iter().enumerate() {
        if !space.is_open(g) || !g.contains(PointId(x)) {
            return Err(ScaleError::BadGenerator { point: PointId(x), set: g });
        }
        assignment.push(open_supersets(space.opens(), g));
    }
    Scale::from_assignment(space, assignment)
}

pub(crate) fn open_supersets(opens: Family, g: PointSet) -> Family {
    opens.sets().filter(|o| g.is_subset(*o)).collect()
}

pub(crate) fn validate_parts(tq: Family, assignment: &[Family]) -> Validation<ScaleViolation> {
    for (x, q) in assignment.iter().enumerate() {
        if let Some(set) = q.sets().find(|s| !s.contains(PointId(x))) {
            return Validation::Invalid(ScaleViolation::SC1 { point: PointId(x), set });
        }
    }
    let assigned = assignment.iter().fold(Family::EMPTY, |acc, q| acc.union(*q));
    match tq.difference(assigned).sets().next() {
        Some(set) => Validation::Invalid(ScaleViolation::SC2 { set }),
        None => Validation::Valid,
    }
}

pub(crate) fn finer_at_parts(finer: Family, coarser: Family) -> bool {
    coarser.sets().all(|a| finer.any_subset_of(a).is_some())
}

/// Which of the structure conditions a scale satisfies.
#[allow(non_snake_case)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StructureFlags {
    pub condition_F: bool,
    pub is_F: bool,
    pub is_P: bool,
    pub is_U: bool,
    pub weak_U: bool,
    pub is_I: bool,
    pub weak_I: bool,
    pub is_L: bool,
    pub weak_L: bool,
    pub neighborhood_closed: bool,
}

impl StructureFlags {
    #[allow(non_snake_case)]
    pub fn compute(space: &FiniteSpace, tq: Family, assignment: &[Family]) -> StructureFlags {
        let carrier = space.carrier();
        let opens = space.opens();
        let pairs = |f: Family| f.sets().flat_map(move |a| f.sets().map(move |b| (a, b)));

        let condition_F = assignment.iter().all(|q| q.contains(carrier));
        let filter = |q: Family| {
            !q.is_empty()
                && pairs(q).all(|(a, b)| q.contains(a.intersection(b)))
                && q.sets().all(|a| opens.sets().filter(|o| a.is_subset(*o)).all(|o| q.contains(o)))
        };
        let is_F = assignment.iter().all(|q| filter(*q));
        let is_P = assignment.iter().all(|q| {
            q.sets().any(|g| open_supersets(opens, g) == *q)
        });
        let is_U = assignment.iter().all(|q| q.sets().all(|a| tq.sets().all(|b| q.contains(a.union(b)))));
        let weak_U = pairs(tq).all(|(a, b)| tq.contains(a.union(b)));
        let is_I = assignment.iter().enumerate().all(|(x, q)| {
            q.sets().all(|a| tq.containing(PointId(x)).sets().all(|b| q.contains(a.intersection(b))))
        });
        let weak_I = pairs(tq).all(|(a, b)| {
            let c = a.intersection(b);
            c.is_empty() || tq.contains(c)
        });
        let is_L = assignment
            .iter()
            .all(|q| pairs(*q).all(|(a, b)| q.contains(a.union(b)) && q.contains(a.intersection(b))));
        let neighborhood_closed =
            tq.sets().all(|u| u.points().all(|z| assignment[z.0].any_subset_of(u).is_some()));
        StructureFlags {
            condition_F,
            is_F,
            is_P,
            is_U,
            weak_U,
            is_I,
            weak_I,
            is_L,
            weak_L: weak_U && weak_I,
            neighborhood_closed,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScaleRepr {
    space: FiniteSpace,
    tq: Vec<PointSet>,
    assignment: Vec<Vec<usize>>,
}

impl Serialize for Scale {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let tq: Vec<PointSet> = self.tq.sets().collect();
        let assignment = self
            .assignment
            .iter()
            .map(|q| q.sets().map(|s| self.tq.index_of(s).expect("Q(x) ⊆ TQ")).collect())
            .collect();
        ScaleRepr { space: (*self.space).clone(), tq, assignment }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scale {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = ScaleRepr::deserialize(deserializer)?;
        let n = r.space.n_points();
        if let Some(s) = r.tq.iter().find(|s| !s.is_subset(PointSet::full(n))) {
            return Err(D::Error::custom(format!("set {s:?} leaves the carrier")));
        }
        let mut assignment = Vec::with_capacity(r.assignment.len());
        for (x, idx) in r.assignment.iter().enumerate() {
            let mut q = Family::EMPTY;
            for &k in idx {
                let s = r.tq.get(k).ok_or_else(|| D::Error::custom(format!("point {x}: no set with index {k}")))?;
                q.insert(*s);
            }
            assignment.push(q);
        }
        let tq = Family::from_sets(r.tq.iter().copied());
        Scale::new(Arc::new(r.space), tq, assignment).map_err(D::Error::custom)
    }
}

impl std::fmt::Debug for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scale")
            .field("space", &self.space.opens())
            .field("tq", &self.tq)
            .field("assignment", &self.assignment)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(points: &[usize]) -> PointSet {
        PointSet::from_points(points.iter().copied())
    }

    fn fam(sets: &[&[usize]]) -> Family {
        sets.iter().map(|s| set(s)).collect()
    }

    #[test]
    fn trivial_scales() {
        let s = trivial_scale(Arc::new(FiniteSpace::sierpinski()));
        assert_eq!(s.at(PointId(1)), fam(&[&[0, 1]]));
        assert!(s.is_valid());
        let d = trivial_scale(Arc::new(FiniteSpace::discrete(2).unwrap()));
        assert_eq!(d.at(PointId(0)), fam(&[&[0], &[0, 1]]));
        let flags = d.classify();
        assert!(flags.is_F && flags.condition_F && flags.is_P);
    }

    #[test]
    fn axiom_violations_are_reported() {
        let space = Arc::new(FiniteSpace::discrete(2).unwrap());
        let bad = Scale::new(space.clone(), fam(&[&[1], &[0, 1]]), vec![fam(&[&[1]]), fam(&[&[0, 1]])]).unwrap();
        assert_eq!(bad.validate(), Validation::Invalid(ScaleViolation::SC1 { point: PointId(0), set: set(&[1]) }));
        let orphan = Scale::new(space.clone(), fam(&[&[1], &[0, 1]]), vec![fam(&[&[0, 1]]), fam(&[&[0, 1]])]).unwrap();
        assert_eq!(orphan.validate(), Validation::Invalid(ScaleViolation::SC2 { set: set(&[1]) }));
        assert!(matches!(
            Scale::new(space, fam(&[&[0, 1]]), vec![fam(&[&[0]]), fam(&[])]),
            Err(ScaleError::OutsideTq { .. })
        ));
    }

    #[test]
    fn empty_set_is_never_q_open() {
        for space in crate::finite_topology::enumerate_topologies(3).unwrap() {
            let s = trivial_scale(Arc::new(space));
            assert!(!s.q_open(PointSet::EMPTY));
            assert!(!s.q_closed(PointSet::full(3)));
            assert!(s.q_closed(PointSet::EMPTY));
        }
    }

    #[test]
    fn union_closed_chain_scale_need_not_be_a_filter() {
        // Chain topology ∅ ⊂ {0} ⊂ {0,1} ⊂ X.
        let space = Arc::new(FiniteSpace::new(3, &[vec![], vec![0], vec![0, 1], vec![0, 1, 2]]).unwrap());
        let x = fam(&[&[0, 1, 2]]);
        let s = Scale::checked(space, x, vec![x, x, x]).unwrap();
        let flags = s.classify();
        assert!(flags.is_U);
        let s2 = Scale::checked(
            s.space_arc().clone(),
            fam(&[&[0], &[0, 1, 2]]),
            vec![fam(&[&[0], &[0, 1, 2]]), fam(&[&[0, 1, 2]]), fam(&[&[0, 1, 2]])],
        )
        .unwrap();
        let f2 = s2.classify();
        assert!(f2.is_U && !f2.is_F);
    }

    #[test]
    fn filter_need_not_absorb_intersections_with_foreign_sets() {
        let space = Arc::new(FiniteSpace::discrete(3).unwrap());
        let s = Scale::from_assignment(
            space,
            vec![fam(&[&[0, 1, 2]]), fam(&[&[0, 1], &[0, 1, 2]]), fam(&[&[0, 1, 2]])],
        )
        .unwrap();
        let flags = s.classify();
        assert!(flags.is_F && !flags.is_I);
    }

    #[test]
    fn f_closure_of_single_neighbourhood_is_principal() {
        let space = Arc::new(FiniteSpace::discrete(2).unwrap());
        let s = Scale::from_assignment(space.clone(), vec![fam(&[&[0]]), fam(&[&[0, 1]])]).unwrap();
        let closed = s.f_closure();
        let expected = p_structure(space, &[set(&[0]), set(&[0, 1])]).unwrap();
        assert_eq!(closed, expected);
        assert!(closed.classify().is_P);
    }

    #[test]
    fn closures_are_idempotent_on_trivial() {
        let t = trivial_scale(Arc::new(FiniteSpace::sierpinski()));
        assert_eq!(t.f_closure(), t);
        assert_eq!(t.union(&t).unwrap(), t);
        assert_eq!(t.intersection(&t).unwrap(), t);
    }

    #[test]
    fn json_round_trip() {
        let t = trivial_scale(Arc::new(FiniteSpace::sierpinski()));
        let text = serde_json::to_string(&t).unwrap();
        let back: Scale = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }
}
