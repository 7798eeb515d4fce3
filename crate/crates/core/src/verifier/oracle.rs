//! Classical notions coded directly from their definitions, without the
//! continuity kernel or the scale procedures.

use crate::finite_topology::{FiniteSpace, PointId, PointSet};

fn image_of(table: &[PointId], s: PointSet) -> PointSet {
    s.points().fold(PointSet::EMPTY, |acc, x| acc.union(PointSet::singleton(table[x.0])))
}

fn preimage_of(table: &[PointId], s: PointSet) -> PointSet {
    PointSet::from_points((0..table.len()).filter(|&x| s.contains(table[x])))
}

/// Every open set of the codomain has an open preimage.
pub fn continuous(x: &FiniteSpace, y: &FiniteSpace, table: &[PointId]) -> bool {
    y.opens().sets().all(|v| x.opens().sets().any(|u| u == preimage_of(table, v)))
}

/// Every open neighbourhood of `f(p)` contains the image of some open
/// neighbourhood of `p`.
pub fn continuous_at(x: &FiniteSpace, y: &FiniteSpace, table: &[PointId], p: PointId) -> bool {
    let fp = table[p.0];
    y.opens().sets().filter(|v| v.contains(fp)).all(|v| {
        x.opens().sets().filter(|u| u.contains(p)).any(|u| image_of(table, u).is_subset(v))
    })
}

/// `f` takes one value on `s`.
pub fn constant_on(table: &[PointId], s: PointSet) -> bool {
    image_of(table, s).len() <= 1
}

/// `f` is constant on every connected component, found by merging points
/// that share a minimal open neighbourhood.
pub fn constant_on_components(space: &FiniteSpace, table: &[PointId]) -> bool {
    let n = space.n_points();
    let mut label: Vec<usize> = (0..n).collect();
    let minimal = |p: usize| {
        space.opens().sets().filter(|u| u.contains(PointId(p))).fold(PointSet::full(n), |a, u| a.intersection(u))
    };
    loop {
        let mut changed = false;
        for p in 0..n {
            for q in minimal(p).points() {
                let (a, b) = (label[p], label[q.0]);
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    label.iter_mut().filter(|l| **l == hi).for_each(|l| *l = lo);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).all(|p| (0..n).all(|q| label[p] != label[q] || table[p] == table[q]))
}

/// Closure of a set family under unions and under intersections of nonempty
/// subfamilies, by fixpoint iteration.
fn closed_under(sets: &[PointSet], op: impl Fn(PointSet, PointSet) -> PointSet) -> Vec<PointSet> {
    let mut out: Vec<PointSet> = sets.to_vec();
    loop {
        let mut added = false;
        for i in 0..out.len() {
            for j in 0..out.len() {
                let c = op(out[i], out[j]);
                if !out.contains(&c) {
                    out.push(c);
                    added = true;
                }
            }
        }
        if !added {
            return out;
        }
    }
}

/// Q-closed sets as complements of the Q-open sets.
pub fn q_closed_sets(n: usize, q_open: &[PointSet]) -> Vec<PointSet> {
    q_open.iter().map(|a| a.complement(n)).collect()
}

/// Every intersection of Q-closed sets is Q-closed.
pub fn closed_intersections_closed(n: usize, q_open: &[PointSet]) -> bool {
    let closed = q_closed_sets(n, q_open);
    closed_under(&closed, PointSet::intersection).iter().all(|s| closed.contains(s))
}

/// Every finite union of Q-closed sets is Q-closed, apart from a union
/// covering the carrier, whose complement is empty.
pub fn closed_unions_closed(n: usize, q_open: &[PointSet]) -> bool {
    let closed = q_closed_sets(n, q_open);
    closed_under(&closed, PointSet::union).iter().all(|s| *s == PointSet::full(n) || closed.contains(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_constants_are_continuous() {
        let s = FiniteSpace::sierpinski();
        let id = [PointId(0), PointId(1)];
        assert!(continuous(&s, &s, &id));
        let swap = [PointId(1), PointId(0)];
        assert!(!continuous(&s, &s, &swap));
        assert!(!continuous_at(&s, &s, &swap, PointId(1)) || !continuous_at(&s, &s, &swap, PointId(0)));
        let d = FiniteSpace::discrete(2).unwrap();
        assert!(constant_on_components(&FiniteSpace::indiscrete(2).unwrap(), &[PointId(1), PointId(1)]));
        assert!(!constant_on_components(&FiniteSpace::indiscrete(2).unwrap(), &id));
        assert!(constant_on_components(&d, &id));
    }

    #[test]
    fn closed_set_closure() {
        let n = 3;
        let sets = |v: &[&[usize]]| v.iter().map(|s| PointSet::from_points(s.iter().copied())).collect::<Vec<_>>();
        let chain = sets(&[&[0], &[0, 1], &[0, 1, 2]]);
        assert!(closed_intersections_closed(n, &chain) && closed_unions_closed(n, &chain));
        let crossed = sets(&[&[0], &[1]]);
        assert!(!closed_intersections_closed(n, &crossed));
        assert!(closed_unions_closed(n, &crossed));
    }
}
