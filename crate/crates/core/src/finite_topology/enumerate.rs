use std::collections::HashSet;

use super::point_set::{Family, PointSet};
use super::space::FiniteSpace;
use super::TopologyError;

/// Largest carrier accepted by [`enumerate_topologies`].
pub const MAX_ENUMERATION_POINTS: usize = 4;

/// Closes `family` under pairwise union and intersection.
fn close(mut family: Family) -> Family {
    loop {
        let mut grown = family;
        for a in family.sets() {
            for b in family.sets().filter(|&b| b > a) {
                grown.insert(a.union(b));
                grown.insert(a.intersection(b));
            }
        }
        if grown == family {
            return family;
        }
        family = grown;
    }
}

/// Every labeled topology on `n` points, each exactly once, ordered by the
/// binary rank of the open family.
///
/// Topologies are reached from `{∅, X}` by repeatedly adjoining one subset
/// and closing under union and intersection; every topology is the closure
/// of its own members, so the search is complete.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteSpace>, TopologyError> {
    if n == 0 || n > MAX_ENUMERATION_POINTS {
        return Err(TopologyError::EnumerationOutOfRange { n, max: MAX_ENUMERATION_POINTS });
    }
    let full = PointSet::full(n);
    let start = Family::from_sets([PointSet::EMPTY, full]);
    let mut seen: HashSet<Family> = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(family) = stack.pop() {
        for bits in 1..full.bits() {
            let s = PointSet::from_bits(bits);
            if family.contains(s) {
                continue;
            }
            let next = close(family.with(s));
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    let mut families: Vec<Family> = seen.into_iter().collect();
    families.sort();
    Ok(families
        .into_iter()
        .map(|f| FiniteSpace::from_family_unchecked(n, f))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_topology::validate_topology;

    /// Filters every family of subsets through the axiom checker.
    fn brute_force(n: usize) -> Vec<Family> {
        let subsets = 1u64 << n;
        (0..1u64 << subsets)
            .map(Family::from_bits)
            .filter(|fam| {
                let opens: Vec<Vec<usize>> = fam.sets().map(|s| s.to_vec()).collect();
                validate_topology(&opens, n).unwrap().is_valid()
            })
            .collect()
    }

    #[test]
    fn counts_match_brute_force() {
        for n in 1..=3 {
            let oracle = brute_force(n);
            let fast: Vec<Family> = enumerate_topologies(n).unwrap().iter().map(|s| s.opens()).collect();
            assert_eq!(fast, oracle, "n = {n}");
        }
        assert_eq!(brute_force(1).len(), 1);
        assert_eq!(brute_force(2).len(), 4);
        assert_eq!(brute_force(3).len(), 29);
    }

    #[test]
    fn four_points() {
        let all = enumerate_topologies(4).unwrap();
        assert_eq!(all.len(), 355);
        let distinct: HashSet<Family> = all.iter().map(|s| s.opens()).collect();
        assert_eq!(distinct.len(), 355);
    }

    #[test]
    fn out_of_range() {
        assert!(enumerate_topologies(0).is_err());
        assert!(enumerate_topologies(5).is_err());
    }
}
