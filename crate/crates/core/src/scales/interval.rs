use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::interval_world::exact::{irrational_between, rational_between, ExactNumber};
use crate::interval_world::{Bound, Carrier, CarrierPoint, Interval, LineSet, Region, SheetId};

use super::ScaleError;

/// The catalog of scales on subsets of the line, given by membership rules.
///
/// Balls are taken inside the carrier: `B(x, r)` means `(x-r, x+r) ∩ C` on
/// the sheet of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum IntervalScaleKind {
    /// Open neighbourhoods containing the closed ball of radius `a`.
    #[serde(rename = "Q_a")]
    QA { a: ExactNumber },
    /// Open balls of radius `r > a`.
    #[serde(rename = "CQ_a")]
    CQA { a: ExactNumber },
    /// Open neighbourhoods containing the open ball of radius `a`.
    #[serde(rename = "Q_Oa")]
    QOA { a: ExactNumber },
    /// Open balls of radius `r ≥ a`.
    #[serde(rename = "CQ_Oa")]
    CQOA { a: ExactNumber },
    /// The carrier and bounded open neighbourhoods containing the open ball of
    /// radius `a`.
    #[serde(rename = "BQ_Oa")]
    BQOA { a: ExactNumber },
    /// The carrier and connected open neighbourhoods containing the closed
    /// ball of radius `a`.
    #[serde(rename = "ConnectedQ_a")]
    ConnectedQA { a: ExactNumber },
    /// Connected open neighbourhoods containing the open ball of radius `a`.
    #[serde(rename = "ConnectedCQ_a")]
    ConnectedCQA { a: ExactNumber },
    /// Open balls `(x-r, x+r)` with `lo ≤ x-r < x+r ≤ hi`.
    SymmetricIntervals { lo: Bound, hi: Bound },
    /// Bounded open intervals with rational ends.
    RationalEnds,
    /// Bounded open intervals with irrational ends.
    IrrationalEnds,
    /// Rational-ended intervals at rational points and irrational-ended
    /// intervals at irrational points; `swapped` exchanges the two.
    MixedRationalIrrational { swapped: bool },
    /// The carrier and all connected open sets.
    ConnectedOpen,
    /// Balls of radius `k > a` inside a closed carrier `[lo, hi]`, replaced
    /// near the ends by `[lo, x+k)` and `(x-k, hi]`.
    #[serde(rename = "TruncatedQ_a")]
    TruncatedQA { a: ExactNumber },
    /// All open neighbourhoods.
    Trivial,
    /// Open supersets of the chosen neighbourhood `B(x, ρ(x))`, with `ρ`
    /// piecewise constant.
    PStructure { default_radius: ExactNumber, cells: Vec<RadiusCell> },
}

/// Radius of the chosen neighbourhood on one cell of a P-structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusCell {
    #[serde(default)]
    pub sheet: SheetId,
    pub interval: Interval,
    pub radius: ExactNumber,
}

/// An admissible-radius rule for ball-shaped kinds.
struct BallRule {
    min: ExactNumber,
    strict: bool,
    frame: Option<(Bound, Bound)>,
}

/// A catalog scale on a concrete carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalScale {
    carrier: Carrier,
    kind: IntervalScaleKind,
}

impl IntervalScale {
    pub fn new(carrier: Carrier, kind: IntervalScaleKind) -> Result<Self, ScaleError> {
        use IntervalScaleKind::*;
        let positive = |a: &ExactNumber| a.signum() == Ordering::Greater;
        let mismatch = |msg: &str| Err(ScaleError::KindMismatch(msg.to_string()));
        match &kind {
            QA { a } | CQA { a } | QOA { a } | CQOA { a } | TruncatedQA { a } if !positive(a) => {
                return mismatch("radius must be positive");
            }
            BQOA { a } | ConnectedQA { a } | ConnectedCQA { a } if a.signum() == Ordering::Less => {
                return mismatch("radius must be non-negative");
            }
            TruncatedQA { .. } => {
                let ok = carrier.as_interval().is_some_and(|iv| iv.is_bounded() && iv.lo_closed() && iv.hi_closed());
                if !ok {
                    return mismatch("truncated balls need a closed bounded interval carrier");
                }
            }
            SymmetricIntervals { lo, hi } if lo >= hi => return mismatch("empty frame"),
            PStructure { default_radius, cells } => {
                if !positive(default_radius) || cells.iter().any(|c| !positive(&c.radius)) {
                    return mismatch("P-structure radii must be positive");
                }
            }
            _ => {}
        }
        Ok(IntervalScale { carrier, kind })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn kind(&self) -> &IntervalScaleKind {
        &self.kind
    }

    /// The same kind of rule on another carrier.
    pub fn with_carrier(&self, carrier: Carrier) -> Result<Self, ScaleError> {
        IntervalScale::new(carrier, self.kind.clone())
    }

    pub fn trivial(carrier: Carrier) -> Self {
        IntervalScale { carrier, kind: IntervalScaleKind::Trivial }
    }

    fn sheet(&self, id: SheetId) -> LineSet {
        self.carrier.sheet(id)
    }

    fn require_point(&self, x: &CarrierPoint) -> Result<(), ScaleError> {
        self.carrier.require_point(x).map_err(ScaleError::Interval)
    }

    fn ball_rule(&self) -> Option<BallRule> {
        use IntervalScaleKind::*;
        let zero = ExactNumber::zero;
        match &self.kind {
            CQA { a } => Some(BallRule { min: a.clone(), strict: true, frame: None }),
            CQOA { a } => Some(BallRule { min: a.clone(), strict: false, frame: None }),
            SymmetricIntervals { lo, hi } => {
                Some(BallRule { min: zero(), strict: true, frame: Some((lo.clone(), hi.clone())) })
            }
            TruncatedQA { a } => {
                let iv = self.carrier.as_interval().expect("checked at construction");
                Some(BallRule { min: a.clone(), strict: true, frame: Some((iv.lo().clone(), iv.hi().clone())) })
            }
            _ => None,
        }
    }

    /// Radius of the chosen neighbourhood at `x` for a P-structure.
    fn p_radius(&self, x: &CarrierPoint) -> Option<ExactNumber> {
        match &self.kind {
            IntervalScaleKind::PStructure { default_radius, cells } => Some(
                cells
                    .iter()
                    .find(|c| c.sheet == x.sheet && c.interval.contains(&x.value))
                    .map(|c| c.radius.clone())
                    .unwrap_or_else(|| default_radius.clone()),
            ),
            _ => None,
        }
    }

    fn open_ball(&self, x: &CarrierPoint, r: &ExactNumber) -> LineSet {
        let window = span(Bound::Finite(&x.value - r), false, Bound::Finite(&x.value + r), false);
        self.sheet(x.sheet).intersection(&window)
    }

    fn closed_ball(&self, x: &CarrierPoint, r: &ExactNumber) -> LineSet {
        let window = span(Bound::Finite(&x.value - r), true, Bound::Finite(&x.value + r), true);
        self.sheet(x.sheet).intersection(&window)
    }

    /// Whether `s ∈ Q(x)`.
    pub fn membership(&self, x: &CarrierPoint, s: &Region) -> Result<bool, ScaleError> {
        self.require_point(x)?;
        Ok(self.member(x, s))
    }

    fn member(&self, x: &CarrierPoint, s: &Region) -> bool {
        use IntervalScaleKind::*;
        if !s.contains(x) || !self.carrier.is_open(s) {
            return false;
        }
        let whole = s == self.carrier.region();
        let on_sheet = s.sheet(x.sheet);
        let single_sheet = s.sheet_ids() == vec![x.sheet];
        match &self.kind {
            Trivial => true,
            QA { a } => self.closed_ball(x, a).is_subset(&on_sheet),
            QOA { a } => self.open_ball(x, a).is_subset(&on_sheet),
            BQOA { a } => whole || (s.is_bounded() && self.open_ball(x, a).is_subset(&on_sheet)),
            ConnectedQA { a } => whole || (s.is_connected() && self.closed_ball(x, a).is_subset(&on_sheet)),
            ConnectedCQA { a } => s.is_connected() && self.open_ball(x, a).is_subset(&on_sheet),
            ConnectedOpen => whole || s.is_connected(),
            CQA { .. } | CQOA { .. } | SymmetricIntervals { .. } => {
                single_sheet && self.is_ball_at(x, &on_sheet, &self.ball_rule().expect("ball kind"))
            }
            TruncatedQA { a } => single_sheet && self.truncated_member(x, &on_sheet, a),
            RationalEnds => ended_interval(s, Some(true)),
            IrrationalEnds => ended_interval(s, Some(false)),
            MixedRationalIrrational { swapped } => ended_interval(s, Some(x.value.is_rational() != *swapped)),
            PStructure { .. } => {
                let r = self.p_radius(x).expect("P-structure");
                self.open_ball(x, &r).is_subset(&on_sheet)
            }
        }
    }

    /// `s = B(x, r)` for an admissible `r`.
    fn is_ball_at(&self, x: &CarrierPoint, s: &LineSet, rule: &BallRule) -> bool {
        let c = self.sheet(x.sheet);
        let outside = c.difference(s);
        let d = outside.nearest_distance(&x.value);
        let frame = rule.frame.as_ref().map(|(lo, hi)| frame_room(&x.value, lo, hi));
        let r_max = min_opt(d, frame.flatten_inf());
        let far = match s.farthest_distance(&x.value) {
            Some(e) => e,
            None => return false,
        };
        let far_v = match far.value {
            Bound::Finite(v) => v,
            _ => return false,
        };
        let r = match r_max {
            Some(r) => r,
            None => return true,
        };
        let covers = if far.attained { r > far_v } else { r >= far_v };
        let admissible = if rule.strict { r > rule.min } else { r >= rule.min };
        covers && admissible && r.signum() == Ordering::Greater
    }

    fn truncated_member(&self, x: &CarrierPoint, s: &LineSet, a: &ExactNumber) -> bool {
        let iv = self.carrier.as_interval().expect("checked at construction");
        let (lo, hi) = (iv.lo().finite().unwrap().clone(), iv.hi().finite().unwrap().clone());
        let v = &x.value;
        if v > &(&lo + a) && v < &(&hi - a) && self.is_ball_at(x, s, &self.ball_rule().unwrap()) {
            return true;
        }
        if v <= &(&lo + a) {
            if let [piece] = s.pieces() {
                if piece.lo() == &Bound::Finite(lo.clone()) && piece.lo_closed() && !piece.hi_closed() {
                    if let Bound::Finite(u) = piece.hi() {
                        if &(u - v) > a {
                            return true;
                        }
                    }
                }
            }
        }
        if v >= &(&hi - a) {
            if let [piece] = s.pieces() {
                if piece.hi() == &Bound::Finite(hi.clone()) && piece.hi_closed() && !piece.lo_closed() {
                    if let Bound::Finite(l) = piece.lo() {
                        if &(v - l) > a {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Whether `s` belongs to `Q(x)` for some carrier point `x`.
    pub fn is_q_open(&self, s: &Region) -> bool {
        use IntervalScaleKind::*;
        if s.is_empty() || !self.carrier.is_open(s) {
            return false;
        }
        let whole = s == self.carrier.region();
        match &self.kind {
            Trivial => true,
            QA { a } => !self.centers(s, a, true).is_empty(),
            QOA { a } => !self.centers(s, a, false).is_empty(),
            BQOA { a } => whole || (s.is_bounded() && !self.centers(s, a, false).is_empty()),
            ConnectedQA { a } => whole || (s.is_connected() && !self.centers(s, a, true).is_empty()),
            ConnectedCQA { a } => s.is_connected() && !self.centers(s, a, false).is_empty(),
            ConnectedOpen => whole || s.is_connected(),
            CQA { .. } | CQOA { .. } | SymmetricIntervals { .. } => self.ball_centers(s).is_some(),
            TruncatedQA { a } => self.ball_centers(s).is_some() || self.truncated_edge_open(s, a),
            RationalEnds => ended_interval(s, Some(true)),
            IrrationalEnds => ended_interval(s, Some(false)),
            MixedRationalIrrational { .. } => ended_interval(s, Some(true)) || ended_interval(s, Some(false)),
            PStructure { default_radius, cells } => {
                let mut radii: Vec<(Region, ExactNumber)> = Vec::new();
                let mut rest = self.carrier.region().clone();
                for c in cells {
                    let cell = Region::on_sheet(c.sheet, LineSet::single(c.interval.clone())).intersection(&rest);
                    rest = rest.difference(&cell);
                    radii.push((cell, c.radius.clone()));
                }
                radii.push((rest, default_radius.clone()));
                radii
                    .iter()
                    .any(|(cell, r)| !self.centers(s, r, false).intersection(cell).is_empty())
            }
        }
    }

    /// Points `x ∈ s` whose ball of radius `r` (closed or open) stays in `s`.
    fn centers(&self, s: &Region, r: &ExactNumber, closed: bool) -> Region {
        let mut out = Region::empty();
        for (id, c) in self.carrier.region().sheets() {
            let inside = s.sheet(id);
            let outside = c.difference(&inside);
            let reach = if closed || r.signum() == Ordering::Greater {
                outside.dilate(r, closed)
            } else {
                LineSet::empty()
            };
            let mut reach = reach;
            if !closed && r.signum() != Ordering::Greater {
                // A zero open ball is empty and constrains nothing.
                reach = LineSet::empty();
            }
            out.add(id, &inside.difference(&reach));
        }
        out
    }

    /// Centers `x` with `s = B(x, r)` for an admissible `r`, if any.
    fn ball_centers(&self, s: &Region) -> Option<Region> {
        let rule = self.ball_rule()?;
        let ids = s.sheet_ids();
        let [id] = ids.as_slice() else { return None };
        let s1 = s.sheet(*id);
        let c = self.sheet(*id);
        let outside = c.difference(&s1);
        let first = s1.pieces().first()?;
        let last = s1.pieces().last()?;
        let hull = span(first.lo().clone(), first.lo_closed(), last.hi().clone(), last.hi_closed());
        if !hull.is_disjoint(&outside) {
            return None;
        }
        let (l0, u0) = match (first.lo(), last.hi()) {
            (Bound::Finite(l), Bound::Finite(u)) => (l.clone(), u.clone()),
            _ => return None,
        };
        // Admissible lower ends L and upper ends U of (L, U).
        let below = outside.intersection(&span(Bound::NegInf, false, Bound::Finite(l0.clone()), false));
        let above = outside.intersection(&span(Bound::Finite(u0.clone()), false, Bound::PosInf, false));
        let a_lo = below.sup().cloned().unwrap_or(Bound::NegInf);
        let a_hi = above.inf().cloned().unwrap_or(Bound::PosInf);
        let mut il = span(a_lo.clone(), a_lo != Bound::NegInf, Bound::Finite(l0), !first.lo_closed());
        let mut iu = span(Bound::Finite(u0), !last.hi_closed(), a_hi.clone(), a_hi != Bound::PosInf);
        if let Some((flo, fhi)) = &rule.frame {
            il = il.intersection(&span(flo.clone(), flo.finite().is_some(), Bound::PosInf, false));
            iu = iu.intersection(&span(Bound::NegInf, false, fhi.clone(), fhi.finite().is_some()));
        }
        let (il, iu) = (il.pieces().first()?.clone(), iu.pieces().first()?.clone());
        let mid = |a: &Bound, b: &Bound| match (a, b) {
            (Bound::Finite(x), Bound::Finite(y)) => Bound::Finite((x + y).half()),
            (Bound::NegInf, _) | (_, Bound::NegInf) => Bound::NegInf,
            _ => Bound::PosInf,
        };
        let m0 = span(
            mid(il.lo(), iu.lo()),
            il.lo_closed() && iu.lo_closed(),
            mid(il.hi(), iu.hi()),
            il.hi_closed() && iu.hi_closed(),
        );
        let shift = |b: &Bound, d: &ExactNumber| match b {
            Bound::Finite(v) => Bound::Finite(v + d),
            other => other.clone(),
        };
        let window = if rule.strict {
            span(shift(il.lo(), &rule.min), false, shift(iu.hi(), &-rule.min.clone()), false)
        } else {
            span(
                shift(il.lo(), &rule.min),
                il.lo_closed(),
                shift(iu.hi(), &-rule.min.clone()),
                iu.hi_closed(),
            )
        };
        let centers = m0.intersection(&window).intersection(&c);
        if centers.is_empty() {
            None
        } else {
            Some(Region::on_sheet(*id, centers))
        }
    }

    /// `s` is `[lo, U)` or `(L, hi]` of the edge forms, tested at the
    /// carrier end where the margin is largest.
    fn truncated_edge_open(&self, s: &Region, a: &ExactNumber) -> bool {
        let iv = self.carrier.as_interval().expect("checked at construction");
        let ids = s.sheet_ids();
        let [id] = ids.as_slice() else { return false };
        [iv.lo(), iv.hi()].into_iter().filter_map(Bound::finite).any(|v| {
            let x = CarrierPoint::new(*id, v.clone());
            s.contains(&x) && self.truncated_member(&x, &s.sheet(*id), a)
        })
    }

    /// Some `U ∈ Q(x)` with `U ⊆ s`.
    pub fn witness_inside(&self, x: &CarrierPoint, s: &Region) -> Result<Option<Region>, ScaleError> {
        self.require_point(x)?;
        Ok(self.witness(x, s))
    }

    fn witness(&self, x: &CarrierPoint, s: &Region) -> Option<Region> {
        use IntervalScaleKind::*;
        let s = s.intersection(self.carrier.region());
        if self.carrier.region().is_subset(&s) {
            return Some(self.carrier.region().clone());
        }
        let interior = self.carrier.interior_of(&s);
        if !interior.contains(x) {
            return None;
        }
        let inner_sheet = interior.sheet(x.sheet);
        let component = || -> Region {
            let piece = inner_sheet.piece_containing(&x.value).expect("x is interior").clone();
            Region::on_sheet(x.sheet, LineSet::single(piece))
        };
        let keep = |u: Region| if self.member(x, &u) { Some(u) } else { None };
        match &self.kind {
            Trivial => Some(interior),
            QA { a } => self.closed_ball(x, a).is_subset(&inner_sheet).then_some(interior),
            QOA { a } => self.open_ball(x, a).is_subset(&inner_sheet).then_some(interior),
            BQOA { a } => {
                let window = span(
                    Bound::Finite(&x.value - &(a + &ExactNumber::one())),
                    false,
                    Bound::Finite(&x.value + &(a + &ExactNumber::one())),
                    false,
                );
                keep(Region::on_sheet(x.sheet, inner_sheet.intersection(&window)))
            }
            ConnectedQA { .. } | ConnectedCQA { .. } | ConnectedOpen => keep(component()),
            CQA { .. } | CQOA { .. } | SymmetricIntervals { .. } => {
                self.widest_ball(x, &s, &self.ball_rule().expect("ball kind"))
            }
            TruncatedQA { .. } => self.truncated_witness(x, &s),
            RationalEnds => self.ended_witness(x, &interior, true),
            IrrationalEnds => self.ended_witness(x, &interior, false),
            MixedRationalIrrational { swapped } => {
                self.ended_witness(x, &interior, x.value.is_rational() != *swapped)
            }
            PStructure { .. } => {
                let r = self.p_radius(x).expect("P-structure");
                let g = Region::on_sheet(x.sheet, self.open_ball(x, &r));
                g.is_subset(&interior).then_some(g)
            }
        }
    }

    /// The largest admissible ball around `x` inside `s`.
    fn widest_ball(&self, x: &CarrierPoint, s: &Region, rule: &BallRule) -> Option<Region> {
        let c = self.sheet(x.sheet);
        let outside = c.difference(&s.sheet(x.sheet));
        let d = outside.nearest_distance(&x.value);
        let frame = rule.frame.as_ref().map(|(lo, hi)| frame_room(&x.value, lo, hi));
        let r = min_opt(d, frame.flatten_inf()).unwrap_or_else(|| &rule.min + &ExactNumber::one());
        let admissible = if rule.strict { r > rule.min } else { r >= rule.min };
        if !admissible || r.signum() != Ordering::Greater {
            return None;
        }
        let ball = Region::on_sheet(x.sheet, self.open_ball(x, &r));
        self.member(x, &ball).then_some(ball)
    }

    fn truncated_witness(&self, x: &CarrierPoint, s: &Region) -> Option<Region> {
        if let Some(b) = self.widest_ball(x, s, &self.ball_rule().unwrap()) {
            return Some(b);
        }
        let iv = self.carrier.as_interval().unwrap();
        let (lo, hi) = (iv.lo().finite().unwrap().clone(), iv.hi().finite().unwrap().clone());
        let line = s.sheet(x.sheet);
        let candidates = [
            line.piece_containing(&lo).map(|p| span(Bound::Finite(lo.clone()), true, p.hi().clone(), false)),
            line.piece_containing(&hi).map(|p| span(p.lo().clone(), false, Bound::Finite(hi.clone()), true)),
        ];
        candidates
            .into_iter()
            .flatten()
            .map(|set| Region::on_sheet(x.sheet, set))
            .find(|u| u.is_subset(s) && self.member(x, u))
    }

    fn ended_witness(&self, x: &CarrierPoint, interior: &Region, rational: bool) -> Option<Region> {
        let line = interior.sheet(x.sheet).interior();
        let piece = line.piece_containing(&x.value)?;
        let one = ExactNumber::one();
        let lo = match piece.lo() {
            Bound::Finite(v) => v.clone(),
            _ => &x.value - &one,
        };
        let hi = match piece.hi() {
            Bound::Finite(v) => v.clone(),
            _ => &x.value + &one,
        };
        let p = pick_end(&lo, &x.value, rational, true);
        let q = pick_end(&x.value, &hi, rational, false);
        let u = Region::on_sheet(x.sheet, LineSet::single(Interval::open(p, q)));
        self.member(x, &u).then_some(u)
    }

    /// Whether some Q-open set lies inside `s`.
    pub fn contains_q_open(&self, s: &Region) -> Option<(CarrierPoint, Region)> {
        use IntervalScaleKind::*;
        let s = s.intersection(self.carrier.region());
        if self.carrier.region().is_subset(&s) && self.is_q_open(&s) {
            let x = self.sample_points(&[]).into_iter().find(|p| self.member(p, &s))?;
            return Some((x, s));
        }
        let interior = self.carrier.interior_of(&s);
        if interior.is_empty() {
            return None;
        }
        let pick = |centers: Region| -> Option<(CarrierPoint, Region)> {
            let x = any_point(&centers)?;
            let w = self.witness(&x, &s)?;
            Some((x, w))
        };
        let inner_outside = self.carrier.region().difference(&interior);
        let closed_outside = inner_outside.closure();
        match &self.kind {
            Trivial | ConnectedOpen => pick(interior),
            QA { a } | ConnectedQA { a } => pick(self.centers(&interior, a, true)),
            QOA { a } | BQOA { a } | ConnectedCQA { a } => pick(self.centers(&interior, a, false)),
            PStructure { .. } => {
                let cands = self.critical_centers(&interior);
                cands
                    .into_iter()
                    .find_map(|x| self.witness(&x, &s).map(|w| (x, w)))
            }
            CQA { .. } | CQOA { .. } | SymmetricIntervals { .. } | TruncatedQA { .. } => {
                let rule = self.ball_rule().unwrap();
                let mut centers = Region::empty();
                for (id, c) in self.carrier.region().sheets() {
                    let bad = if rule.strict {
                        closed_outside.sheet(id).dilate(&rule.min, true)
                    } else {
                        inner_outside.sheet(id).dilate(&rule.min, false)
                    };
                    let mut room = c.difference(&bad).intersection(&interior.sheet(id));
                    if let Some((lo, hi)) = &rule.frame {
                        let shift = |b: &Bound, d: &ExactNumber| match b {
                            Bound::Finite(v) => Bound::Finite(v + d),
                            other => other.clone(),
                        };
                        let inner = span(
                            shift(lo, &rule.min),
                            !rule.strict && lo.finite().is_some(),
                            shift(hi, &-rule.min.clone()),
                            !rule.strict && hi.finite().is_some(),
                        );
                        room = room.intersection(&inner);
                    }
                    centers.add(id, &room);
                }
                if let Some(found) = pick(centers) {
                    return Some(found);
                }
                if let TruncatedQA { .. } = &self.kind {
                    let iv = self.carrier.as_interval().unwrap();
                    let lo = iv.lo().finite().unwrap().clone();
                    let hi = iv.hi().finite().unwrap().clone();
                    for v in [lo, hi] {
                        let x = CarrierPoint::new(self.carrier.sheet_ids()[0], v);
                        if let Some(w) = self.witness(&x, &s) {
                            return Some((x, w));
                        }
                    }
                }
                None
            }
            RationalEnds | IrrationalEnds | MixedRationalIrrational { .. } => {
                let line_interior = interior.sheets().find(|(_, l)| !l.interior().is_empty());
                let (id, l) = line_interior?;
                let x = CarrierPoint::new(id, midpoint_of(&l.interior().pieces()[0]));
                self.witness(&x, &s).map(|w| (x, w))
            }
        }
    }

    /// Interior points worth testing for a P-structure: midpoints and ends of
    /// radius cells and of `s`.
    fn critical_centers(&self, s: &Region) -> Vec<CarrierPoint> {
        let mut out = Vec::new();
        for (id, l) in s.sheets() {
            let mut marks = l.endpoints();
            if let IntervalScaleKind::PStructure { cells, .. } = &self.kind {
                for c in cells.iter().filter(|c| c.sheet == id) {
                    marks.extend([c.interval.lo(), c.interval.hi()].into_iter().filter_map(Bound::finite).cloned());
                }
            }
            marks.sort();
            marks.dedup();
            let mut pts = marks.clone();
            pts.extend(marks.windows(2).map(|w| (&w[0] + &w[1]).half()));
            for p in l.pieces() {
                pts.push(midpoint_of(p));
            }
            out.extend(pts.into_iter().map(|v| CarrierPoint::new(id, v)).filter(|p| s.contains(p)));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Carrier points to probe: ends of carrier pieces, the given hints and
    /// midpoints between consecutive marks.
    pub fn sample_points(&self, hints: &[CarrierPoint]) -> Vec<CarrierPoint> {
        let mut out = Vec::new();
        for (id, c) in self.carrier.region().sheets() {
            let mut marks = c.endpoints();
            marks.extend(hints.iter().filter(|h| h.sheet == id).map(|h| h.value.clone()));
            if marks.is_empty() {
                marks.push(ExactNumber::zero());
            }
            marks.sort();
            marks.dedup();
            let mut pts = marks.clone();
            pts.extend(marks.windows(2).map(|w| (&w[0] + &w[1]).half()));
            let (first, last) = (marks[0].clone(), marks[marks.len() - 1].clone());
            pts.push(&first - &ExactNumber::one());
            pts.push(&last + &ExactNumber::one());
            for p in c.pieces() {
                pts.push(midpoint_of(p));
            }
            out.extend(pts.into_iter().map(|v| CarrierPoint::new(id, v)).filter(|p| c.contains(&p.value)));
        }
        out.sort();
        out.dedup();
        out
    }

    /// A finite set of members of `Q(x)`: balls at radii read off the hints,
    /// the carrier ends and the kind's parameter, plus midpoints between
    /// them.
    pub fn sample_neighborhoods(&self, x: &CarrierPoint, hints: &[CarrierPoint]) -> Result<Vec<Region>, ScaleError> {
        use IntervalScaleKind::*;
        self.require_point(x)?;
        let c = self.sheet(x.sheet);
        let mut radii: Vec<ExactNumber> = c
            .endpoints()
            .into_iter()
            .chain(hints.iter().filter(|h| h.sheet == x.sheet).map(|h| h.value.clone()))
            .map(|v| (&v - &x.value).abs())
            .collect();
        match &self.kind {
            QA { a } | CQA { a } | QOA { a } | CQOA { a } | BQOA { a } | ConnectedQA { a } | ConnectedCQA { a }
            | TruncatedQA { a } => {
                radii.push(a.clone());
                radii.push(a + a);
                radii.push(a + &ExactNumber::one());
            }
            PStructure { .. } => radii.push(self.p_radius(x).unwrap()),
            _ => radii.push(ExactNumber::one()),
        }
        radii.retain(|r| r.signum() == Ordering::Greater);
        radii.sort();
        radii.dedup();
        let mut all = radii.clone();
        all.extend(radii.windows(2).map(|w| (&w[0] + &w[1]).half()));
        if let Some(r) = radii.first() {
            all.push(r.half());
        }
        if let Some(r) = radii.last() {
            all.push(r + r);
        }
        all.sort();
        all.dedup();

        let mut out: Vec<Region> = vec![self.carrier.region().clone()];
        for r in &all {
            let ball = Region::on_sheet(x.sheet, self.open_ball(x, r));
            match &self.kind {
                ConnectedQA { .. } | ConnectedCQA { .. } | ConnectedOpen => {
                    if let Some(p) = ball.sheet(x.sheet).piece_containing(&x.value) {
                        out.push(Region::on_sheet(x.sheet, LineSet::single(p.clone())));
                    }
                }
                RationalEnds | IrrationalEnds | MixedRationalIrrational { .. } => {
                    let rational = match &self.kind {
                        RationalEnds => true,
                        IrrationalEnds => false,
                        MixedRationalIrrational { swapped } => x.value.is_rational() != *swapped,
                        _ => unreachable!(),
                    };
                    let p = pick_end(&(&x.value - r), &x.value, rational, true);
                    let q = pick_end(&x.value, &(&x.value + r), rational, false);
                    out.push(Region::on_sheet(x.sheet, LineSet::single(Interval::open(p, q))));
                }
                TruncatedQA { .. } => {
                    out.push(ball);
                    let iv = self.carrier.as_interval().unwrap();
                    let (lo, hi) = (iv.lo().finite().unwrap(), iv.hi().finite().unwrap());
                    let u = &x.value + r;
                    if &u <= hi {
                        out.push(Region::on_sheet(x.sheet, span(Bound::Finite(lo.clone()), true, Bound::Finite(u), false)));
                    }
                    let l = &x.value - r;
                    if &l >= lo {
                        out.push(Region::on_sheet(x.sheet, span(Bound::Finite(l), false, Bound::Finite(hi.clone()), true)));
                    }
                }
                _ => out.push(ball),
            }
        }
        out.retain(|u| self.member(x, u));
        out.sort_by_key(|u| format!("{u:?}"));
        out.dedup();
        Ok(out)
    }

    /// Catalog order rules: `Some(true)` when `self(x) ⊆ other(x)` holds for
    /// every `x` by the definitions, `None` when no rule applies.
    pub fn subscale_rule(&self, other: &IntervalScale) -> Option<bool> {
        use IntervalScaleKind::*;
        if self.carrier != other.carrier {
            return Some(false);
        }
        match (&self.kind, &other.kind) {
            (h, q) if h == q => Some(true),
            (_, Trivial) => Some(true),
            (QA { a: b }, QA { a }) | (QOA { a: b }, QOA { a }) | (QA { a: b }, QOA { a }) => Some(b >= a),
            (CQA { a: b }, CQA { a }) => Some(b >= a),
            (CQOA { a: b }, CQOA { a }) => Some(b >= a),
            (CQA { a: b }, CQOA { a }) => Some(b >= a),
            (CQA { a: b }, QA { a }) => Some(b >= a),
            (CQOA { a: b }, QOA { a }) => Some(b >= a),
            _ => None,
        }
    }

    /// Catalog order rules for "finer": `Some(true)` when every `other(x)`
    /// member contains a `self(x)` member by the definitions.
    pub fn finer_rule(&self, other: &IntervalScale) -> Option<bool> {
        use IntervalScaleKind::*;
        if self.carrier != other.carrier {
            return Some(false);
        }
        match (&self.kind, &other.kind) {
            (p, q) if p == q => Some(true),
            (Trivial, _) => Some(true),
            (QOA { a }, QOA { a: b }) | (QA { a }, QA { a: b }) | (QOA { a }, QA { a: b }) => Some(a <= b),
            _ => None,
        }
    }

    /// Checks `self(x) ⊆ other(x)` on the sampled members at the sampled
    /// points; returns the first counterexample.
    pub fn sampled_subscale(&self, other: &IntervalScale, hints: &[CarrierPoint]) -> Option<(CarrierPoint, Region)> {
        for x in self.sample_points(hints) {
            for u in self.sample_neighborhoods(&x, hints).unwrap_or_default() {
                if !other.member(&x, &u) {
                    return Some((x, u));
                }
            }
        }
        None
    }

    /// Checks that every sampled `other(x)` member contains a `self(x)`
    /// member; returns the first counterexample.
    pub fn sampled_finer(&self, other: &IntervalScale, hints: &[CarrierPoint]) -> Option<(CarrierPoint, Region)> {
        for x in other.sample_points(hints) {
            for u in other.sample_neighborhoods(&x, hints).unwrap_or_default() {
                if self.witness(&x, &u).is_none() {
                    return Some((x, u));
                }
            }
        }
        None
    }
}

trait FlattenInf {
    fn flatten_inf(self) -> Option<ExactNumber>;
}

impl FlattenInf for Option<Option<ExactNumber>> {
    fn flatten_inf(self) -> Option<ExactNumber> {
        self.flatten()
    }
}

/// `min(x - lo, hi - x)`, `None` when both ends are infinite.
fn frame_room(x: &ExactNumber, lo: &Bound, hi: &Bound) -> Option<ExactNumber> {
    let left = lo.finite().map(|l| x - l);
    let right = hi.finite().map(|h| h - x);
    min_opt(left, right)
}

/// Minimum where `None` stands for `+∞`.
fn min_opt(a: Option<ExactNumber>, b: Option<ExactNumber>) -> Option<ExactNumber> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// The interval with the given ends, or the empty set.
pub(crate) fn span(lo: Bound, lo_closed: bool, hi: Bound, hi_closed: bool) -> LineSet {
    let lo_closed = lo_closed && lo.finite().is_some();
    let hi_closed = hi_closed && hi.finite().is_some();
    Interval::new(lo, hi, lo_closed, hi_closed).map(LineSet::single).unwrap_or_default()
}

/// `s` is one bounded open interval whose ends are rational (`Some(true)`)
/// or irrational (`Some(false)`).
fn ended_interval(s: &Region, rational: Option<bool>) -> bool {
    let comps = s.components();
    let [only] = comps.as_slice() else { return false };
    let ids = only.sheet_ids();
    let line = only.sheet(ids[0]);
    let iv = &line.pieces()[0];
    if iv.lo_closed() || iv.hi_closed() {
        return false;
    }
    match (iv.lo(), iv.hi(), rational) {
        (Bound::Finite(l), Bound::Finite(h), Some(r)) => l.is_rational() == r && h.is_rational() == r,
        (Bound::Finite(_), Bound::Finite(_), None) => true,
        _ => false,
    }
}

/// An end of the requested kind in `[lo, hi)` (`left`) or `(lo, hi]`,
/// preferring the outer end itself.
fn pick_end(lo: &ExactNumber, hi: &ExactNumber, rational: bool, left: bool) -> ExactNumber {
    let outer = if left { lo } else { hi };
    if outer.is_rational() == rational {
        return outer.clone();
    }
    if rational {
        ExactNumber::from(rational_between(lo, hi))
    } else {
        irrational_between(lo, hi)
    }
}

fn midpoint_of(iv: &Interval) -> ExactNumber {
    match (iv.lo(), iv.hi()) {
        (Bound::Finite(l), Bound::Finite(h)) => (l + h).half(),
        (Bound::Finite(l), _) => l + &ExactNumber::one(),
        (_, Bound::Finite(h)) => h - &ExactNumber::one(),
        _ => ExactNumber::zero(),
    }
}

fn any_point(r: &Region) -> Option<CarrierPoint> {
    let (id, l) = r.sheets().next()?;
    let iv = &l.pieces()[0];
    let v = if let Some(lo) = iv.lo().finite().filter(|_| iv.lo_closed()) { lo.clone() } else { midpoint_of(iv) };
    let v = if iv.contains(&v) { v } else { midpoint_of(iv) };
    Some(CarrierPoint::new(id, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactNumber {
        ExactNumber::ratio(n, d)
    }

    fn pt(v: ExactNumber) -> CarrierPoint {
        CarrierPoint::on_line(v)
    }

    fn open(lo: ExactNumber, hi: ExactNumber) -> Region {
        Region::interval(Interval::open(lo, hi))
    }

    fn line(kind: IntervalScaleKind) -> IntervalScale {
        IntervalScale::new(Carrier::real_line(), kind).unwrap()
    }

    fn punctured() -> Carrier {
        Carrier::line(LineSet::from_intervals([
            Interval::closed_open(q(0, 1), q(1, 2)),
            Interval::open_closed(q(1, 2), q(1, 1)),
        ]))
        .unwrap()
    }

    fn frame() -> IntervalScaleKind {
        IntervalScaleKind::SymmetricIntervals { lo: Bound::Finite(q(0, 1)), hi: Bound::Finite(q(1, 1)) }
    }

    #[test]
    fn closed_and_open_ball_neighbourhoods() {
        let qa = line(IntervalScaleKind::QA { a: q(1, 1) });
        let qoa = line(IntervalScaleKind::QOA { a: q(1, 1) });
        let x = pt(q(0, 1));
        assert!(qa.membership(&x, &open(q(-3, 2), q(3, 2))).unwrap());
        assert!(!qa.membership(&x, &open(q(-1, 1), q(1, 1))).unwrap());
        assert!(qoa.membership(&x, &open(q(-1, 1), q(1, 1))).unwrap());
        assert!(!qoa.membership(&x, &open(q(-1, 1), q(1, 2))).unwrap());
        assert!(qa.is_q_open(&open(q(0, 1), q(5, 2))));
        assert!(!qa.is_q_open(&open(q(0, 1), q(2, 1))));
        assert!(qoa.is_q_open(&open(q(0, 1), q(2, 1))));
    }

    #[test]
    fn ball_kinds_need_an_exact_centre() {
        let cqa = line(IntervalScaleKind::CQA { a: q(1, 1) });
        let cqoa = line(IntervalScaleKind::CQOA { a: q(1, 1) });
        let x = pt(q(0, 1));
        assert!(cqa.membership(&x, &open(q(-2, 1), q(2, 1))).unwrap());
        assert!(!cqa.membership(&x, &open(q(-1, 1), q(1, 1))).unwrap());
        assert!(cqoa.membership(&x, &open(q(-1, 1), q(1, 1))).unwrap());
        assert!(!cqa.membership(&x, &open(q(-2, 1), q(3, 1))).unwrap());
        assert!(cqa.is_q_open(&open(q(-2, 1), q(3, 1))));
        assert!(!cqa.is_q_open(&open(q(0, 1), q(2, 1))));
        assert!(cqoa.is_q_open(&open(q(0, 1), q(2, 1))));
        let two = Region::line(LineSet::from_intervals([
            Interval::open(q(0, 1), q(3, 1)),
            Interval::open(q(4, 1), q(5, 1)),
        ]));
        assert!(!cqa.is_q_open(&two));
    }

    #[test]
    fn punctured_interval_union_is_not_q_open() {
        let qs = IntervalScale::new(punctured(), frame()).unwrap();
        let s = Region::line(LineSet::from_intervals([
            Interval::open(q(0, 1), q(1, 2)),
            Interval::open(q(1, 2), q(1, 1)),
        ]));
        assert!(qs.carrier().is_open(&s));
        assert!(!qs.is_q_open(&s));
        let x = pt(q(1, 4));
        assert!(qs.membership(&x, &open(q(0, 1), q(1, 2))).unwrap());
        assert!(qs.membership(&x, &open(q(1, 8), q(3, 8))).unwrap());
        assert!(!qs.membership(&x, &open(q(1, 8), q(1, 2))).unwrap());
        // Whole carrier: no admissible ball fits the frame.
        assert!(!qs.is_q_open(qs.carrier().region()));
        let near_gap = pt(q(3, 8));
        let w = qs.witness_inside(&near_gap, &s).unwrap().unwrap();
        let expected = Region::line(LineSet::from_intervals([
            Interval::open(q(0, 1), q(1, 2)),
            Interval::open(q(1, 2), q(3, 4)),
        ]));
        assert_eq!(w, expected);
    }

    #[test]
    fn symmetric_ball_open_in_the_carrier_reaches_across_the_puncture() {
        let qs = IntervalScale::new(punctured(), frame()).unwrap();
        let x = pt(q(1, 2) - q(1, 8));
        let u = Region::line(LineSet::from_intervals([
            Interval::open(q(1, 8), q(1, 2)),
            Interval::open(q(1, 2), q(5, 8)),
        ]));
        assert!(qs.membership(&x, &u).unwrap());
    }

    #[test]
    fn ended_interval_kinds() {
        let rat = line(IntervalScaleKind::RationalEnds);
        let irr = line(IntervalScaleKind::IrrationalEnds);
        let r2 = ExactNumber::sqrt2();
        let sym = open(-r2.clone(), r2.clone());
        let x = pt(q(0, 1));
        assert!(irr.membership(&x, &sym).unwrap());
        assert!(!rat.membership(&x, &sym).unwrap());
        assert!(rat.membership(&x, &open(q(-1, 1), q(1, 1))).unwrap());
        let mixed = open(q(0, 1), r2.clone());
        assert!(!rat.is_q_open(&mixed) && !irr.is_q_open(&mixed));
        let w = irr.witness_inside(&pt(q(1, 2)), &mixed).unwrap().unwrap();
        assert!(irr.membership(&pt(q(1, 2)), &w).unwrap());
        assert!(w.is_subset(&mixed));
        let unbounded = Region::interval(Interval::new(Bound::Finite(q(0, 1)), Bound::PosInf, false, false).unwrap());
        assert!(!rat.is_q_open(&unbounded));
        let m = line(IntervalScaleKind::MixedRationalIrrational { swapped: false });
        assert!(m.membership(&pt(q(0, 1)), &open(q(-1, 1), q(1, 1))).unwrap());
        assert!(!m.membership(&pt(q(0, 1)), &sym).unwrap());
        assert!(m.membership(&pt(r2.clone()), &open(r2.clone() - q(1, 1), r2.clone() + r2.clone())).unwrap());
        assert!(m.is_q_open(&sym));
    }

    #[test]
    fn bounded_variant_accepts_the_carrier_and_rejects_rays() {
        let b = line(IntervalScaleKind::BQOA { a: q(1, 1) });
        let ray = Region::interval(Interval::new(Bound::Finite(q(0, 1)), Bound::PosInf, false, false).unwrap());
        let x = pt(q(5, 1));
        assert!(!b.membership(&x, &ray).unwrap());
        assert!(b.membership(&x, b.carrier().region()).unwrap());
        assert!(b.membership(&x, &open(q(3, 1), q(7, 1))).unwrap());
        // Closed sets: complements of Q-open sets; a closed ray is one.
        let closed_ray = Region::interval(Interval::new(Bound::NegInf, Bound::Finite(q(0, 1)), false, true).unwrap());
        let complement = b.carrier().complement_within(&closed_ray).unwrap();
        assert!(!b.is_q_open(&complement));
        let w = b.witness_inside(&x, &ray).unwrap().unwrap();
        assert!(w.is_bounded() && w.is_subset(&ray));
    }

    #[test]
    fn connected_open_on_two_sheets() {
        let c = Carrier::new(vec![
            (SheetId(1), LineSet::single(Interval::closed(q(0, 1), q(1, 1)))),
            (SheetId(2), LineSet::single(Interval::closed(q(0, 1), q(1, 1)))),
        ])
        .unwrap();
        let qs = IntervalScale::new(c.clone(), IntervalScaleKind::ConnectedOpen).unwrap();
        let x = CarrierPoint::new(SheetId(1), q(1, 2));
        let mut both = Region::empty();
        both.add(SheetId(1), &LineSet::single(Interval::open(q(1, 4), q(3, 4))));
        both.add(SheetId(2), &LineSet::single(Interval::open(q(1, 4), q(3, 4))));
        assert!(!qs.membership(&x, &both).unwrap());
        assert!(!qs.is_q_open(&both));
        assert!(qs.membership(&x, c.region()).unwrap());
        let w = qs.witness_inside(&x, &both).unwrap().unwrap();
        assert_eq!(w.sheet_ids(), vec![SheetId(1)]);
        let (_, w) = qs.contains_q_open(&both).unwrap();
        assert!(w.is_connected());
    }

    #[test]
    fn truncated_balls_near_the_ends() {
        let c = Carrier::interval(Interval::closed(q(0, 1), q(2, 1)));
        let qs = IntervalScale::new(c, IntervalScaleKind::TruncatedQA { a: q(1, 10) }).unwrap();
        let edge = Region::interval(Interval::closed_open(q(0, 1), q(1, 5)));
        assert!(qs.membership(&pt(q(1, 20)), &edge).unwrap());
        assert!(!qs.membership(&pt(q(3, 20)), &edge).unwrap());
        assert!(qs.membership(&pt(q(1, 1)), &open(q(1, 2), q(3, 2))).unwrap());
        assert!(!qs.membership(&pt(q(1, 1)), &open(q(19, 20), q(21, 20))).unwrap());
        assert!(qs.is_q_open(&edge));
        assert!(!qs.is_q_open(&Region::interval(Interval::closed_open(q(0, 1), q(1, 20)))));
        assert!(IntervalScale::new(Carrier::real_line(), IntervalScaleKind::TruncatedQA { a: q(1, 10) }).is_err());
    }

    #[test]
    fn p_structure_uses_cell_radii() {
        let kind = IntervalScaleKind::PStructure {
            default_radius: q(1, 1),
            cells: vec![RadiusCell {
                sheet: SheetId(0),
                interval: Interval::closed(q(0, 1), q(1, 1)),
                radius: q(1, 4),
            }],
        };
        let p = line(kind);
        assert!(p.membership(&pt(q(1, 2)), &open(q(1, 4), q(3, 4))).unwrap());
        assert!(!p.membership(&pt(q(5, 1)), &open(q(4, 1), q(11, 2))).unwrap());
        assert!(p.is_q_open(&open(q(0, 1), q(1, 2))));
        assert!(!p.is_q_open(&open(q(5, 1), q(11, 2))));
    }

    #[test]
    fn sampled_neighbourhoods_are_members() {
        let kinds = vec![
            IntervalScaleKind::QA { a: q(1, 2) },
            IntervalScaleKind::CQA { a: q(1, 2) },
            IntervalScaleKind::QOA { a: q(1, 2) },
            IntervalScaleKind::CQOA { a: q(1, 2) },
            IntervalScaleKind::BQOA { a: q(1, 2) },
            IntervalScaleKind::ConnectedQA { a: q(1, 2) },
            IntervalScaleKind::ConnectedCQA { a: q(1, 2) },
            IntervalScaleKind::RationalEnds,
            IntervalScaleKind::IrrationalEnds,
            IntervalScaleKind::ConnectedOpen,
            IntervalScaleKind::Trivial,
        ];
        let hints = [pt(q(1, 1)), pt(ExactNumber::sqrt2())];
        for kind in kinds {
            let s = line(kind.clone());
            for x in s.sample_points(&hints) {
                let ns = s.sample_neighborhoods(&x, &hints).unwrap();
                assert!(ns.len() > 1, "{kind:?} at {x}");
                for u in &ns {
                    assert!(s.membership(&x, u).unwrap());
                    assert!(s.is_q_open(u), "{kind:?} {u}");
                    assert_eq!(s.witness_inside(&x, u).unwrap().map(|w| w.contains(&x)), Some(true));
                }
            }
        }
    }

    #[test]
    fn catalog_order_rules_agree_with_samples() {
        let hints = [pt(q(1, 1)), pt(q(3, 1))];
        let qa = line(IntervalScaleKind::QA { a: q(1, 2) });
        let qoa = line(IntervalScaleKind::QOA { a: q(1, 2) });
        let qob = line(IntervalScaleKind::QOA { a: q(1, 1) });
        assert_eq!(qa.subscale_rule(&qoa), Some(true));
        assert!(qa.sampled_subscale(&qoa, &hints).is_none());
        assert_eq!(qob.subscale_rule(&qoa), Some(true));
        assert!(qob.sampled_subscale(&qoa, &hints).is_none());
        assert!(qoa.sampled_subscale(&qob, &hints).is_some());
        assert_eq!(qoa.finer_rule(&qob), Some(true));
        assert!(qoa.sampled_finer(&qob, &hints).is_none());
        let t = IntervalScale::trivial(Carrier::real_line());
        assert_eq!(t.finer_rule(&qa), Some(true));
        assert!(t.sampled_finer(&qa, &hints).is_none());
    }

    #[test]
    fn kind_json_round_trip() {
        let s = line(IntervalScaleKind::CQOA { a: ExactNumber::sqrt2() });
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"kind\":\"CQ_Oa\""));
        let back: IntervalScale = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(IntervalScale::new(Carrier::real_line(), IntervalScaleKind::QA { a: q(0, 1) }).is_err());
    }
}
