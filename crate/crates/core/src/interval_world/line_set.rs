use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use num_traits::{Signed, Zero};

use super::exact::{ExactNumber, Rational};
use super::IntervalError;

/// An interval endpoint on the extended line.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Finite(ExactNumber),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&ExactNumber> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    fn negated(&self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Finite(v) => Bound::Finite(-v.clone()),
        }
    }
}

impl From<ExactNumber> for Bound {
    fn from(v: ExactNumber) -> Self {
        Bound::Finite(v)
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "+inf"),
            Bound::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::NegInf => serializer.serialize_str("-inf"),
            Bound::PosInf => serializer.serialize_str("+inf"),
            Bound::Finite(v) => v.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(ExactNumber),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(v) => Ok(Bound::Finite(v)),
            Repr::Text(t) => match t.as_str() {
                "-inf" => Ok(Bound::NegInf),
                "+inf" | "inf" => Ok(Bound::PosInf),
                other => other
                    .parse::<ExactNumber>()
                    .map(Bound::Finite)
                    .map_err(serde::de::Error::custom),
            },
        }
    }
}

/// Which side of a value a cut sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Side {
    Below,
    Above,
}

/// A Dedekind-style cut: the position just below or just above a bound.
///
/// Every interval is the half-open cut range `[lo_cut, hi_cut)`, which turns
/// union, intersection and complement into plain comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Cut(Bound, Side);

impl Cut {
    fn below(v: &ExactNumber) -> Cut {
        Cut(Bound::Finite(v.clone()), Side::Below)
    }

    fn above(v: &ExactNumber) -> Cut {
        Cut(Bound::Finite(v.clone()), Side::Above)
    }

    fn neg_inf() -> Cut {
        Cut(Bound::NegInf, Side::Above)
    }

    fn pos_inf() -> Cut {
        Cut(Bound::PosInf, Side::Below)
    }
}

/// An interval of the real line with exact endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    /// Builds an interval; the empty interval and closed infinite ends are
    /// rejected.
    pub fn new(lo: Bound, hi: Bound, lo_closed: bool, hi_closed: bool) -> Result<Self, IntervalError> {
        if (lo_closed && lo.finite().is_none()) || (hi_closed && hi.finite().is_none()) {
            return Err(IntervalError::ClosedInfiniteEnd);
        }
        let iv = Interval { lo, hi, lo_closed, hi_closed };
        if iv.lo_cut() >= iv.hi_cut() {
            return Err(IntervalError::EmptyInterval(format!("{iv:?}")));
        }
        Ok(iv)
    }

    pub fn open(lo: ExactNumber, hi: ExactNumber) -> Self {
        Interval::new(lo.into(), hi.into(), false, false).expect("lo < hi")
    }

    pub fn closed(lo: ExactNumber, hi: ExactNumber) -> Self {
        Interval::new(lo.into(), hi.into(), true, true).expect("lo <= hi")
    }

    pub fn closed_open(lo: ExactNumber, hi: ExactNumber) -> Self {
        Interval::new(lo.into(), hi.into(), true, false).expect("lo < hi")
    }

    pub fn open_closed(lo: ExactNumber, hi: ExactNumber) -> Self {
        Interval::new(lo.into(), hi.into(), false, true).expect("lo < hi")
    }

    pub fn point(v: ExactNumber) -> Self {
        Interval::closed(v.clone(), v)
    }

    pub fn real_line() -> Self {
        Interval { lo: Bound::NegInf, hi: Bound::PosInf, lo_closed: false, hi_closed: false }
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.finite().is_some() && self.hi.finite().is_some()
    }

    pub fn contains(&self, p: &ExactNumber) -> bool {
        self.lo_cut() <= Cut::below(p) && Cut::above(p) <= self.hi_cut()
    }

    /// Whether points of the interval accumulate at `p` from the left.
    pub fn reaches_from_left(&self, p: &ExactNumber) -> bool {
        let b = Bound::Finite(p.clone());
        self.lo < b && b <= self.hi
    }

    /// Whether points of the interval accumulate at `p` from the right.
    pub fn reaches_from_right(&self, p: &ExactNumber) -> bool {
        let b = Bound::Finite(p.clone());
        self.lo <= b && b < self.hi
    }

    /// Image under `x ↦ m·x + c`; a zero slope collapses to a point.
    pub fn affine_image(&self, m: &Rational, c: &Rational) -> Interval {
        if m.is_zero() {
            return Interval::point(ExactNumber::from(c.clone()));
        }
        let map = |b: &Bound| match b {
            Bound::Finite(v) => Bound::Finite(v.affine(m, c)),
            other if m.is_negative() => other.negated(),
            other => other.clone(),
        };
        if m.is_positive() {
            Interval { lo: map(&self.lo), hi: map(&self.hi), ..self.clone() }
        } else {
            Interval {
                lo: map(&self.hi),
                hi: map(&self.lo),
                lo_closed: self.hi_closed,
                hi_closed: self.lo_closed,
            }
        }
    }

    fn lo_cut(&self) -> Cut {
        match &self.lo {
            Bound::Finite(v) if self.lo_closed => Cut::below(v),
            Bound::Finite(v) => Cut::above(v),
            _ => Cut::neg_inf(),
        }
    }

    fn hi_cut(&self) -> Cut {
        match &self.hi {
            Bound::Finite(v) if self.hi_closed => Cut::above(v),
            Bound::Finite(v) => Cut::below(v),
            _ => Cut::pos_inf(),
        }
    }

    fn from_cuts(lo: Cut, hi: Cut) -> Interval {
        let lo_closed = lo.1 == Side::Below && lo.0.finite().is_some();
        let hi_closed = hi.1 == Side::Above && hi.0.finite().is_some();
        Interval { lo: lo.0, hi: hi.0, lo_closed, hi_closed }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            return write!(f, "{{{:?}}}", self.lo);
        }
        write!(
            f,
            "{}{:?}, {:?}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: Bound,
    hi: Bound,
    lo_closed: bool,
    hi_closed: bool,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        IntervalRepr {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(deserializer)?;
        Interval::new(r.lo, r.hi, r.lo_closed, r.hi_closed).map_err(serde::de::Error::custom)
    }
}

/// Supremum of a distance set, and whether it is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extent {
    pub value: Bound,
    pub attained: bool,
}

/// A finite union of intervals in canonical form: pieces are nonempty,
/// pairwise disjoint, non-adjacent and increasing.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LineSet {
    pieces: Vec<Interval>,
}

impl LineSet {
    pub fn empty() -> Self {
        LineSet::default()
    }

    pub fn real_line() -> Self {
        LineSet { pieces: vec![Interval::real_line()] }
    }

    /// Normalizes an arbitrary list of intervals, merging overlapping and
    /// adjacent pieces.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(intervals: I) -> Self {
        LineSet::from_cut_pairs(intervals.into_iter().map(|iv| (iv.lo_cut(), iv.hi_cut())).collect())
    }

    pub fn single(iv: Interval) -> Self {
        LineSet { pieces: vec![iv] }
    }

    pub fn point(v: ExactNumber) -> Self {
        LineSet::single(Interval::point(v))
    }

    fn from_cut_pairs(mut pairs: Vec<(Cut, Cut)>) -> Self {
        pairs.retain(|(lo, hi)| lo < hi);
        pairs.sort();
        let mut merged: Vec<(Cut, Cut)> = Vec::with_capacity(pairs.len());
        for (lo, hi) in pairs {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        LineSet { pieces: merged.into_iter().map(|(lo, hi)| Interval::from_cuts(lo, hi)).collect() }
    }

    fn cut_pairs(&self) -> Vec<(Cut, Cut)> {
        self.pieces.iter().map(|iv| (iv.lo_cut(), iv.hi_cut())).collect()
    }

    /// Re-normalizes; a no-op on values built through this API.
    pub fn normalize(&self) -> LineSet {
        LineSet::from_intervals(self.pieces.iter().cloned())
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_interval(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn contains(&self, p: &ExactNumber) -> bool {
        self.pieces.iter().any(|iv| iv.contains(p))
    }

    /// The piece containing `p`.
    pub fn piece_containing(&self, p: &ExactNumber) -> Option<&Interval> {
        self.pieces.iter().find(|iv| iv.contains(p))
    }

    pub fn union(&self, other: &LineSet) -> LineSet {
        let mut pairs = self.cut_pairs();
        pairs.extend(other.cut_pairs());
        LineSet::from_cut_pairs(pairs)
    }

    pub fn intersection(&self, other: &LineSet) -> LineSet {
        let (a, b) = (self.cut_pairs(), other.cut_pairs());
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = std::cmp::max(&a[i].0, &b[j].0).clone();
            let hi = std::cmp::min(&a[i].1, &b[j].1).clone();
            if lo < hi {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        LineSet::from_cut_pairs(out)
    }

    /// Complement in the whole real line.
    pub fn complement(&self) -> LineSet {
        let mut out = Vec::new();
        let mut cursor = Cut::neg_inf();
        for (lo, hi) in self.cut_pairs() {
            out.push((cursor, lo));
            cursor = hi;
        }
        out.push((cursor, Cut::pos_inf()));
        LineSet::from_cut_pairs(out)
    }

    pub fn difference(&self, other: &LineSet) -> LineSet {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &LineSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &LineSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// Closure in the real line.
    pub fn closure(&self) -> LineSet {
        LineSet::from_intervals(self.pieces.iter().map(|iv| Interval {
            lo_closed: iv.lo.finite().is_some(),
            hi_closed: iv.hi.finite().is_some(),
            ..iv.clone()
        }))
    }

    /// Interior in the real line.
    pub fn interior(&self) -> LineSet {
        LineSet::from_intervals(
            self.pieces
                .iter()
                .filter(|iv| !iv.is_degenerate())
                .map(|iv| Interval { lo_closed: false, hi_closed: false, ..iv.clone() }),
        )
    }

    pub fn is_open(&self) -> bool {
        self.pieces.iter().all(|iv| !iv.lo_closed && !iv.hi_closed && !iv.is_degenerate())
    }

    /// Minkowski sum with `[-r, r]` (`closed`) or `(-r, r)` (open); a zero
    /// open radius yields the empty set.
    pub fn dilate(&self, r: &ExactNumber, closed: bool) -> LineSet {
        if !closed && r.signum() != Ordering::Greater {
            return LineSet::empty();
        }
        LineSet::from_intervals(self.pieces.iter().map(|iv| {
            let lo = match &iv.lo {
                Bound::Finite(v) => Bound::Finite(v - r),
                b => b.clone(),
            };
            let hi = match &iv.hi {
                Bound::Finite(v) => Bound::Finite(v + r),
                b => b.clone(),
            };
            Interval {
                lo_closed: closed && iv.lo_closed,
                hi_closed: closed && iv.hi_closed,
                lo,
                hi,
            }
        }))
    }

    pub fn is_bounded(&self) -> bool {
        self.pieces.iter().all(Interval::is_bounded)
    }

    pub fn inf(&self) -> Option<&Bound> {
        self.pieces.first().map(|iv| &iv.lo)
    }

    pub fn sup(&self) -> Option<&Bound> {
        self.pieces.last().map(|iv| &iv.hi)
    }

    /// `sup { |z - x| : z ∈ self }`; `None` for the empty set.
    pub fn farthest_distance(&self, x: &ExactNumber) -> Option<Extent> {
        let first = self.pieces.first()?;
        let last = self.pieces.last()?;
        let left = match &first.lo {
            Bound::Finite(v) => Extent { value: Bound::Finite(x - v), attained: first.lo_closed },
            _ => Extent { value: Bound::PosInf, attained: false },
        };
        let right = match &last.hi {
            Bound::Finite(v) => Extent { value: Bound::Finite(v - x), attained: last.hi_closed },
            _ => Extent { value: Bound::PosInf, attained: false },
        };
        Some(match left.value.cmp(&right.value) {
            Ordering::Greater => left,
            Ordering::Less => right,
            Ordering::Equal => Extent { attained: left.attained || right.attained, ..left },
        })
    }

    /// `inf { |z - x| : z ∈ self }`; `None` for the empty set.
    pub fn nearest_distance(&self, x: &ExactNumber) -> Option<ExactNumber> {
        self.pieces
            .iter()
            .map(|iv| {
                if iv.contains(x) {
                    return ExactNumber::zero();
                }
                let xb = Bound::Finite(x.clone());
                if xb <= iv.lo {
                    iv.lo.finite().expect("x below a finite end") - x
                } else if xb >= iv.hi {
                    x - iv.hi.finite().expect("x above a finite end")
                } else {
                    ExactNumber::zero()
                }
            })
            .min()
    }

    /// Finite endpoints of all pieces, increasing.
    pub fn endpoints(&self) -> Vec<ExactNumber> {
        let mut out: Vec<ExactNumber> = self
            .pieces
            .iter()
            .flat_map(|iv| [iv.lo.finite().cloned(), iv.hi.finite().cloned()])
            .flatten()
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Debug for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "∅");
        }
        for (k, iv) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv:?}")?;
        }
        Ok(())
    }
}

impl fmt::Display for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl From<Interval> for LineSet {
    fn from(iv: Interval) -> Self {
        LineSet::single(iv)
    }
}

impl Serialize for LineSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.pieces.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LineSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(LineSet::from_intervals(Vec::<Interval>::deserialize(deserializer)?))
    }
}
