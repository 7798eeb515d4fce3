use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::exact::ExactNumber;
use super::line_set::{Interval, LineSet};
use super::IntervalError;

/// Index of a copy of the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SheetId(pub u32);

impl fmt::Display for SheetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point on one sheet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CarrierPoint {
    #[serde(default)]
    pub sheet: SheetId,
    pub value: ExactNumber,
}

impl CarrierPoint {
    pub fn new(sheet: SheetId, value: ExactNumber) -> Self {
        CarrierPoint { sheet, value }
    }

    /// A point on sheet 0.
    pub fn on_line(value: ExactNumber) -> Self {
        CarrierPoint { sheet: SheetId(0), value }
    }
}

impl fmt::Display for CarrierPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sheet.0 == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "({}, sheet {})", self.value, self.sheet)
        }
    }
}

/// A subset of finitely many disjoint copies of the line.
///
/// Empty sheets are never stored, so equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Region {
    sheets: BTreeMap<SheetId, LineSet>,
}

impl Region {
    pub fn empty() -> Self {
        Region::default()
    }

    pub fn on_sheet(sheet: SheetId, set: LineSet) -> Self {
        let mut r = Region::empty();
        r.insert(sheet, set);
        r
    }

    /// A subset of sheet 0.
    pub fn line(set: LineSet) -> Self {
        Region::on_sheet(SheetId(0), set)
    }

    pub fn interval(iv: Interval) -> Self {
        Region::line(LineSet::single(iv))
    }

    pub fn point(p: &CarrierPoint) -> Self {
        Region::on_sheet(p.sheet, LineSet::point(p.value.clone()))
    }

    fn insert(&mut self, sheet: SheetId, set: LineSet) {
        if set.is_empty() {
            self.sheets.remove(&sheet);
        } else {
            self.sheets.insert(sheet, set);
        }
    }

    /// Adds `set` on `sheet` to this region.
    pub fn add(&mut self, sheet: SheetId, set: &LineSet) {
        let merged = self.sheet(sheet).union(set);
        self.insert(sheet, merged);
    }

    pub fn sheet(&self, sheet: SheetId) -> LineSet {
        self.sheets.get(&sheet).cloned().unwrap_or_default()
    }

    pub fn sheets(&self) -> impl Iterator<Item = (SheetId, &LineSet)> {
        self.sheets.iter().map(|(k, v)| (*k, v))
    }

    pub fn sheet_ids(&self) -> Vec<SheetId> {
        self.sheets.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.sheets.is_empty()
    }

    pub fn contains(&self, p: &CarrierPoint) -> bool {
        self.sheets.get(&p.sheet).is_some_and(|s| s.contains(&p.value))
    }

    fn zip_with(&self, other: &Region, op: impl Fn(&LineSet, &LineSet) -> LineSet) -> Region {
        let mut out = Region::empty();
        let ids: std::collections::BTreeSet<SheetId> =
            self.sheets.keys().chain(other.sheets.keys()).copied().collect();
        for id in ids {
            out.insert(id, op(&self.sheet(id), &other.sheet(id)));
        }
        out
    }

    pub fn union(&self, other: &Region) -> Region {
        self.zip_with(other, LineSet::union)
    }

    pub fn intersection(&self, other: &Region) -> Region {
        self.zip_with(other, LineSet::intersection)
    }

    pub fn difference(&self, other: &Region) -> Region {
        self.zip_with(other, LineSet::difference)
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.intersection(other).is_empty()
    }

    /// Closure in the ambient union of lines.
    pub fn closure(&self) -> Region {
        let mut out = Region::empty();
        for (id, s) in self.sheets() {
            out.insert(id, s.closure());
        }
        out
    }

    /// Single piece on a single sheet.
    pub fn is_connected(&self) -> bool {
        self.sheets.len() == 1 && self.sheets.values().all(LineSet::is_interval)
    }

    /// Number of pieces over all sheets.
    pub fn piece_count(&self) -> usize {
        self.sheets.values().map(|s| s.pieces().len()).sum()
    }

    /// Connected components (pieces), sheet by sheet.
    pub fn components(&self) -> Vec<Region> {
        self.sheets()
            .flat_map(|(id, s)| s.pieces().iter().map(move |iv| Region::on_sheet(id, LineSet::single(iv.clone()))))
            .collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.sheets.values().all(LineSet::is_bounded)
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sheets.is_empty() {
            return write!(f, "∅");
        }
        if self.sheets.len() == 1 && self.sheets.contains_key(&SheetId(0)) {
            return write!(f, "{:?}", self.sheets[&SheetId(0)]);
        }
        for (k, (id, s)) in self.sheets.iter().enumerate() {
            if k > 0 {
                write!(f, " ⊔ ")?;
            }
            write!(f, "({s:?})×{{{id}}}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Serialize, Deserialize)]
struct SheetRepr {
    #[serde(default)]
    sheet: SheetId,
    set: LineSet,
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.sheets
            .iter()
            .map(|(id, s)| SheetRepr { sheet: *id, set: s.clone() })
            .collect::<Vec<_>>()
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let mut out = Region::empty();
        for r in Vec::<SheetRepr>::deserialize(deserializer)? {
            out.add(r.sheet, &r.set);
        }
        Ok(out)
    }
}

/// The space a map or scale lives on: a nonempty region with the subspace
/// topology inherited from the disjoint union of lines.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Carrier {
    region: Region,
}

impl Carrier {
    pub fn new(sheets: Vec<(SheetId, LineSet)>) -> Result<Self, IntervalError> {
        let mut region = Region::empty();
        for (id, set) in sheets {
            if set.is_empty() {
                return Err(IntervalError::EmptySheet(id));
            }
            if region.sheets.contains_key(&id) {
                return Err(IntervalError::DuplicateSheet(id));
            }
            region.insert(id, set);
        }
        Carrier::from_region(region)
    }

    pub fn from_region(region: Region) -> Result<Self, IntervalError> {
        if region.is_empty() {
            return Err(IntervalError::EmptyCarrier);
        }
        Ok(Carrier { region })
    }

    /// A carrier on sheet 0.
    pub fn line(set: LineSet) -> Result<Self, IntervalError> {
        Carrier::new(vec![(SheetId(0), set)])
    }

    pub fn interval(iv: Interval) -> Self {
        Carrier { region: Region::interval(iv) }
    }

    pub fn real_line() -> Self {
        Carrier::interval(Interval::real_line())
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn contains(&self, p: &CarrierPoint) -> bool {
        self.region.contains(p)
    }

    pub fn require_point(&self, p: &CarrierPoint) -> Result<(), IntervalError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(IntervalError::OutsideCarrier(p.to_string()))
        }
    }

    pub fn require_subset(&self, s: &Region) -> Result<(), IntervalError> {
        if s.is_subset(&self.region) {
            Ok(())
        } else {
            Err(IntervalError::CarrierMismatch(format!("{s:?} is not inside {:?}", self.region)))
        }
    }

    pub fn complement_within(&self, s: &Region) -> Result<Region, IntervalError> {
        self.require_subset(s)?;
        Ok(self.region.difference(s))
    }

    pub fn union(&self, a: &Region, b: &Region) -> Result<Region, IntervalError> {
        self.require_subset(a)?;
        self.require_subset(b)?;
        Ok(a.union(b))
    }

    pub fn intersect(&self, a: &Region, b: &Region) -> Result<Region, IntervalError> {
        self.require_subset(a)?;
        self.require_subset(b)?;
        Ok(a.intersection(b))
    }

    /// Openness in the subspace topology; false for sets leaving the carrier.
    pub fn is_open(&self, s: &Region) -> bool {
        s.is_subset(&self.region) && s.is_disjoint(&self.region.difference(s).closure())
    }

    pub fn is_closed(&self, s: &Region) -> bool {
        s.is_subset(&self.region) && self.is_open(&self.region.difference(s))
    }

    /// Relative interior of `s ∩ carrier`.
    pub fn interior_of(&self, s: &Region) -> Region {
        let s = s.intersection(&self.region);
        s.difference(&self.region.difference(&s).closure())
    }

    /// Relative closure of `s ∩ carrier`.
    pub fn closure_of(&self, s: &Region) -> Region {
        s.intersection(&self.region).closure().intersection(&self.region)
    }

    /// Connectedness of a subset; the empty set counts as disconnected.
    pub fn is_connected(&self, s: &Region) -> bool {
        s.is_subset(&self.region) && s.is_connected()
    }

    /// Whether the carrier is a single interval on a single sheet.
    pub fn is_single_interval(&self) -> bool {
        self.region.is_connected()
    }

    /// The interval of a single-interval carrier.
    pub fn as_interval(&self) -> Option<&Interval> {
        if !self.is_single_interval() {
            return None;
        }
        self.region.sheets.values().next().map(|s| &s.pieces()[0])
    }

    pub fn sheet_ids(&self) -> Vec<SheetId> {
        self.region.sheet_ids()
    }

    pub fn sheet(&self, id: SheetId) -> LineSet {
        self.region.sheet(id)
    }
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.region)
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.region)
    }
}

impl Serialize for Carrier {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.region.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Carrier {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Carrier::from_region(Region::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(a: i64, b: i64) -> ExactNumber {
        ExactNumber::ratio(a, b)
    }

    #[test]
    fn half_open_start_is_relatively_open() {
        let c = Carrier::interval(Interval::closed(n(0, 1), n(1, 1)));
        assert!(c.is_open(&Region::interval(Interval::closed_open(n(0, 1), n(1, 4)))));
        assert!(!c.is_open(&Region::interval(Interval::closed_open(n(1, 4), n(1, 2)))));
        assert!(c.is_closed(&Region::interval(Interval::closed(n(1, 4), n(1, 2)))));
    }

    #[test]
    fn punctured_interval_splits_open_sets() {
        let x = Carrier::line(LineSet::from_intervals([
            Interval::closed_open(n(0, 1), n(1, 2)),
            Interval::open_closed(n(1, 2), n(1, 1)),
        ]))
        .unwrap();
        let s = Region::line(LineSet::from_intervals([
            Interval::open(n(0, 1), n(1, 2)),
            Interval::open(n(1, 2), n(1, 1)),
        ]));
        assert!(x.is_open(&s));
        assert!(!x.is_connected(&s));
        // Each half is clopen in the punctured carrier.
        let left = Region::interval(Interval::closed_open(n(0, 1), n(1, 2)));
        assert!(x.is_open(&left) && x.is_closed(&left));
    }

    #[test]
    fn sets_on_two_sheets_are_disconnected() {
        let unit = LineSet::single(Interval::closed(n(0, 1), n(1, 1)));
        let c = Carrier::new(vec![(SheetId(1), unit.clone()), (SheetId(2), unit.clone())]).unwrap();
        let both = Region::on_sheet(SheetId(1), unit.clone()).union(&Region::on_sheet(SheetId(2), unit));
        assert!(c.is_open(&both));
        assert!(!c.is_connected(&both));
        assert!(c.is_connected(&Region::on_sheet(SheetId(1), LineSet::single(Interval::open(n(0, 1), n(1, 2))))));
    }

    #[test]
    fn foreign_operands_are_rejected() {
        let c = Carrier::interval(Interval::closed(n(0, 1), n(1, 1)));
        let outside = Region::interval(Interval::open(n(1, 2), n(2, 1)));
        assert!(matches!(c.complement_within(&outside), Err(IntervalError::CarrierMismatch(_))));
        assert!(!c.is_open(&outside));
    }

    #[test]
    fn relative_interior_and_closure() {
        let c = Carrier::interval(Interval::closed(n(0, 1), n(1, 1)));
        let s = Region::interval(Interval::closed(n(0, 1), n(1, 2)));
        assert_eq!(c.interior_of(&s), Region::interval(Interval::closed_open(n(0, 1), n(1, 2))));
        let t = Region::interval(Interval::open(n(1, 2), n(1, 1)));
        assert_eq!(c.closure_of(&t), Region::interval(Interval::closed(n(1, 2), n(1, 1))));
    }

    #[test]
    fn json_round_trip() {
        let unit = LineSet::single(Interval::closed(n(0, 1), n(1, 1)));
        let c = Carrier::new(vec![(SheetId(1), unit.clone()), (SheetId(2), unit)]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: Carrier = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
}
