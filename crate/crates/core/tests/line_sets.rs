use proptest::prelude::*;

use scaletop_core::interval_world::exact::rational;
use scaletop_core::interval_world::{
    AffinePiece, Bound, Carrier, CarrierPoint, ExactNumber, Interval, LineSet, PiecewiseAffineMap, Region,
};

fn number() -> impl Strategy<Value = ExactNumber> {
    (-40i64..=40, 1i64..=4, prop_oneof![Just(0i64), Just(1), Just(-1)]).prop_map(|(p, q, s)| {
        let v = ExactNumber::ratio(p, q);
        match s {
            0 => v,
            s => &v + &ExactNumber::sqrt2().scale(&rational(s, 2)),
        }
    })
}

fn interval() -> impl Strategy<Value = Interval> {
    (number(), 0i64..=20, any::<bool>(), any::<bool>()).prop_map(|(lo, w, lc, rc)| {
        if w == 0 {
            return Interval::point(lo);
        }
        let hi = &lo + &ExactNumber::ratio(w, 2);
        Interval::new(Bound::Finite(lo), Bound::Finite(hi), lc, rc).expect("lo < hi")
    })
}

fn raw() -> impl Strategy<Value = Vec<Interval>> {
    prop::collection::vec(interval(), 0..4)
}

/// Endpoints, midpoints between consecutive endpoints and points beyond.
fn probes(sets: &[&[Interval]]) -> Vec<ExactNumber> {
    let mut ends: Vec<ExactNumber> = sets
        .iter()
        .flat_map(|s| s.iter())
        .flat_map(|iv| [iv.lo().finite().cloned(), iv.hi().finite().cloned()])
        .flatten()
        .collect();
    ends.sort();
    ends.dedup();
    let mut out = ends.clone();
    for w in ends.windows(2) {
        out.push((&w[0] + &w[1]).half());
    }
    if let (Some(first), Some(last)) = (ends.first(), ends.last()) {
        out.push(first - &ExactNumber::one());
        out.push(last + &ExactNumber::one());
    }
    out.push(ExactNumber::zero());
    out
}

fn member(raw: &[Interval], x: &ExactNumber) -> bool {
    raw.iter().any(|iv| iv.contains(x))
}

proptest! {
    #[test]
    fn boolean_operations_match_membership(a in raw(), b in raw()) {
        let (sa, sb) = (LineSet::from_intervals(a.clone()), LineSet::from_intervals(b.clone()));
        let (u, i, d, c) = (sa.union(&sb), sa.intersection(&sb), sa.difference(&sb), sa.complement());
        for x in probes(&[&a, &b]) {
            let (ina, inb) = (member(&a, &x), member(&b, &x));
            prop_assert_eq!(sa.contains(&x), ina);
            prop_assert_eq!(u.contains(&x), ina || inb);
            prop_assert_eq!(i.contains(&x), ina && inb);
            prop_assert_eq!(d.contains(&x), ina && !inb);
            prop_assert_eq!(c.contains(&x), !ina);
        }
    }

    #[test]
    fn boolean_algebra_laws(a in raw(), b in raw(), c in raw()) {
        let (a, b, c) = (LineSet::from_intervals(a), LineSet::from_intervals(b), LineSet::from_intervals(c));
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersection(&b), b.intersection(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.intersection(&b.union(&c)), a.intersection(&b).union(&a.intersection(&c)));
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersection(&b.complement()));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.union(&a.intersection(&b)), a.clone());
        prop_assert_eq!(a.difference(&b), a.intersection(&b.complement()));
        prop_assert!(a.intersection(&a.complement()).is_empty());
        prop_assert_eq!(a.union(&a.complement()), LineSet::real_line());
    }

    #[test]
    fn canonical_form_is_unique(a in raw()) {
        let s = LineSet::from_intervals(a.clone());
        let mut rev = a;
        rev.reverse();
        prop_assert_eq!(LineSet::from_intervals(rev), s.clone());
        prop_assert_eq!(LineSet::from_intervals(s.pieces().to_vec()), s.clone());
        for w in s.pieces().windows(2) {
            prop_assert!(w[0].hi() <= w[1].lo());
        }
    }

    #[test]
    fn closure_and_interior_bracket_the_set(a in raw()) {
        let s = LineSet::from_intervals(a);
        prop_assert!(s.interior().is_subset(&s));
        prop_assert!(s.is_subset(&s.closure()));
        prop_assert!(s.interior().is_open());
        prop_assert_eq!(s.closure().complement(), s.complement().interior());
    }

    #[test]
    fn preimages_distribute(a in raw(), b in raw(), m in -3i64..=3, c in -5i64..=5) {
        let line = Carrier::real_line();
        let f = PiecewiseAffineMap::affine(line.clone(), line.clone(), rational(m, 2), rational(c, 1)).unwrap();
        let (ra, rb) = (Region::line(LineSet::from_intervals(a)), Region::line(LineSet::from_intervals(b)));
        prop_assert_eq!(f.preimage(&ra.union(&rb)), f.preimage(&ra).union(&f.preimage(&rb)));
        prop_assert_eq!(f.preimage(&ra.intersection(&rb)), f.preimage(&ra).intersection(&f.preimage(&rb)));
        let outside = line.complement_within(&ra).unwrap();
        prop_assert_eq!(f.preimage(&outside), line.complement_within(&f.preimage(&ra)).unwrap());
        prop_assert!(f.image(&f.preimage(&ra)).is_subset(&ra));
    }

    #[test]
    fn exact_order_agrees_with_floats(x in number(), y in number()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x < y, fx < fy);
        }
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x - &y).signum(), x.cmp(&y));
    }
}

/// `[0,1)`, `[1,2)` and `[2,3]` with independent affine pieces.
fn three_pieces(coeffs: [(i64, i64); 3]) -> PiecewiseAffineMap {
    let n = |v: i64| ExactNumber::int(v);
    let ivs = [
        Interval::closed_open(n(0), n(1)),
        Interval::closed_open(n(1), n(2)),
        Interval::closed(n(2), n(3)),
    ];
    let pieces = ivs
        .into_iter()
        .zip(coeffs)
        .map(|(iv, (m, c))| AffinePiece::new(iv, rational(m, 3), rational(c, 2)))
        .collect();
    let dom = Carrier::interval(Interval::closed(n(0), n(3)));
    PiecewiseAffineMap::new(dom, Carrier::real_line(), pieces, vec![]).unwrap()
}

/// The largest spread of `f` over `{x - h, x, x + h}`.
fn sampled_spread(f: &PiecewiseAffineMap, x: &ExactNumber, h: &ExactNumber) -> ExactNumber {
    let at = |v: ExactNumber| f.eval(&CarrierPoint::on_line(v)).unwrap().value;
    let vals = [at(x - h), at(x.clone()), at(x + h)];
    let mut out = ExactNumber::zero();
    for a in &vals {
        for b in &vals {
            out = out.max((a - b).abs());
        }
    }
    out
}

proptest! {
    #[test]
    fn gaps_match_shrinking_samples(coeffs in prop::array::uniform3((-9i64..=9, -9i64..=9))) {
        let f = three_pieces(coeffs);
        let slope = coeffs.iter().map(|(m, _)| m.abs()).max().unwrap();
        for x in [ExactNumber::int(1), ExactNumber::int(2)] {
            let gap = f.gap(&CarrierPoint::on_line(x.clone())).unwrap();
            for k in [4u32, 8, 12] {
                let h = ExactNumber::ratio(1, 10i64.pow(k));
                let spread = sampled_spread(&f, &x, &h);
                let slack = h.scale(&rational(2 * slope, 3));
                prop_assert!((&spread - &gap).abs() <= slack, "x = {}, k = {}", x, k);
            }
        }
        let interior = ExactNumber::ratio(1, 2);
        prop_assert!(f.gap(&CarrierPoint::on_line(interior)).unwrap().is_zero());
    }
}
