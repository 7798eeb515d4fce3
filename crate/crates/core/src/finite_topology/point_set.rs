use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest carrier size supported by the bitmask representation. Families of
/// subsets are stored as one `u64`, so `2^MAX_POINTS` must not exceed 64.
pub const MAX_POINTS: usize = 6;

/// Index of a point in a finite carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of a finite carrier.
///
/// Stored as a bitmask, which is a canonical form: two sets are equal iff
/// their masks are equal, and the derived order (binary rank) is the order in
/// which families are listed when serialized.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet(u32);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u32) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The whole carrier `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        PointSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(p: PointId) -> Self {
        PointSet(1 << p.0)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        PointSet(points.into_iter().fold(0, |acc, p| acc | (1 << p)))
    }

    pub fn contains(self, p: PointId) -> bool {
        self.0 >> p.0 & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement relative to the carrier of size `n`.
    pub fn complement(self, n: usize) -> Self {
        PointSet::full(n).difference(self)
    }

    pub fn insert(&mut self, p: PointId) {
        self.0 |= 1 << p.0;
    }

    /// Members in increasing order.
    pub fn points(self) -> impl Iterator<Item = PointId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(PointId(p))
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.points().map(|p| p.0).collect()
    }

    /// Largest member index plus one, or 0 for the empty set.
    pub fn span(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points().map(|p| p.0)).finish()
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let points = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&p) = points.iter().find(|&&p| p >= 32) {
            return Err(serde::de::Error::custom(format!("point index {p} out of range")));
        }
        Ok(PointSet::from_points(points))
    }
}

/// A family of subsets of a carrier with at most [`MAX_POINTS`] points.
///
/// Bit `k` is set iff the subset with mask `k` belongs to the family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Family(u64);

impl Family {
    pub const EMPTY: Family = Family(0);

    pub fn from_bits(bits: u64) -> Self {
        Family(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_sets<I: IntoIterator<Item = PointSet>>(sets: I) -> Self {
        Family(sets.into_iter().fold(0, |acc, s| acc | (1u64 << s.0)))
    }

    pub fn contains(self, s: PointSet) -> bool {
        self.0 >> s.0 & 1 == 1
    }

    pub fn insert(&mut self, s: PointSet) {
        self.0 |= 1u64 << s.0;
    }

    pub fn remove(&mut self, s: PointSet) {
        self.0 &= !(1u64 << s.0);
    }

    pub fn with(mut self, s: PointSet) -> Self {
        self.insert(s);
        self
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        Family(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Family(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Family(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in canonical (binary rank) order.
    pub fn sets(self) -> impl Iterator<Item = PointSet> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let s = bits.trailing_zeros();
                bits &= bits - 1;
                Some(PointSet(s))
            }
        })
    }

    /// Members containing `p`.
    pub fn containing(self, p: PointId) -> Family {
        Family(self.0 & containing_mask(p))
    }

    /// Index of `s` in the canonical listing of this family.
    pub fn index_of(self, s: PointSet) -> Option<usize> {
        if !self.contains(s) {
            return None;
        }
        Some((self.0 & ((1u64 << s.0) - 1)).count_ones() as usize)
    }

    pub fn nth(self, k: usize) -> Option<PointSet> {
        self.sets().nth(k)
    }

    /// Any member that is a subset of `s`.
    pub fn any_subset_of(self, s: PointSet) -> Option<PointSet> {
        self.sets().find(|a| a.is_subset(s))
    }
}

/// Mask over subset indices selecting the subsets that contain `p`.
fn containing_mask(p: PointId) -> u64 {
    // Subsets k with bit p set, for k < 64.
    const MASKS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    MASKS[p.0]
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sets()).finish()
    }
}

impl FromIterator<PointSet> for Family {
    fn from_iter<I: IntoIterator<Item = PointSet>>(iter: I) -> Self {
        Family::from_sets(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containing_masks_match_definition() {
        for p in 0..MAX_POINTS {
            let expected = (0..64u32)
                .filter(|k| k >> p & 1 == 1)
                .fold(0u64, |acc, k| acc | 1 << k);
            assert_eq!(containing_mask(PointId(p)), expected);
        }
    }

    #[test]
    fn family_index_follows_listing_order() {
        let fam = Family::from_sets([PointSet::EMPTY, PointSet::from_points([0]), PointSet::full(2)]);
        let listed: Vec<_> = fam.sets().collect();
        for (k, s) in listed.iter().enumerate() {
            assert_eq!(fam.index_of(*s), Some(k));
            assert_eq!(fam.nth(k), Some(*s));
        }
        assert_eq!(fam.index_of(PointSet::from_points([1])), None);
    }

    #[test]
    fn point_iteration_is_sorted() {
        let s = PointSet::from_points([4, 0, 2]);
        assert_eq!(s.to_vec(), vec![0, 2, 4]);
        assert_eq!(s.span(), 5);
        assert_eq!(format!("{s:?}"), "{0, 2, 4}");
    }
}
