use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::carrier::{Carrier, CarrierPoint, Region, SheetId};
use super::exact::{rational_string, ExactNumber, Rational};
use super::line_set::{Bound, Interval, LineSet};
use super::IntervalError;

/// One affine branch `x ↦ slope·x + intercept` from a domain interval on
/// `sheet_in` to `sheet_out`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePiece {
    #[serde(default)]
    pub sheet_in: SheetId,
    pub interval: Interval,
    #[serde(default)]
    pub sheet_out: SheetId,
    #[serde(with = "rational_string")]
    pub slope: Rational,
    #[serde(with = "rational_string")]
    pub intercept: Rational,
}

impl AffinePiece {
    pub fn new(interval: Interval, slope: Rational, intercept: Rational) -> Self {
        AffinePiece { sheet_in: SheetId(0), interval, sheet_out: SheetId(0), slope, intercept }
    }

    pub fn routed(mut self, sheet_in: SheetId, sheet_out: SheetId) -> Self {
        self.sheet_in = sheet_in;
        self.sheet_out = sheet_out;
        self
    }

    fn apply(&self, x: &ExactNumber) -> ExactNumber {
        x.affine(&self.slope, &self.intercept)
    }

    /// Preimage of `target` (on `sheet_out`) inside this piece's interval.
    fn pull_back(&self, target: &LineSet) -> LineSet {
        let own = LineSet::single(self.interval.clone());
        if self.slope.is_zero() {
            return if target.contains(&ExactNumber::from(self.intercept.clone())) { own } else { LineSet::empty() };
        }
        let inv_m = self.slope.recip();
        let inv_c = -&self.intercept * &inv_m;
        LineSet::from_intervals(target.pieces().iter().map(|iv| iv.affine_image(&inv_m, &inv_c))).intersection(&own)
    }
}

/// An explicitly assigned value at an isolated domain point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakpointValue {
    #[serde(default)]
    pub sheet_in: SheetId,
    pub x: ExactNumber,
    #[serde(default)]
    pub sheet_out: SheetId,
    pub value: ExactNumber,
}

impl BreakpointValue {
    pub fn new(x: ExactNumber, value: ExactNumber) -> Self {
        BreakpointValue { sheet_in: SheetId(0), x, sheet_out: SheetId(0), value }
    }

    fn point(&self) -> CarrierPoint {
        CarrierPoint::new(self.sheet_in, self.x.clone())
    }

    fn image(&self) -> CarrierPoint {
        CarrierPoint::new(self.sheet_out, self.value.clone())
    }
}

/// One-sided limits of a map at a point; `None` where no piece approaches
/// from that side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneSidedLimits {
    pub left: Option<CarrierPoint>,
    pub right: Option<CarrierPoint>,
}

/// A point with a positive gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapWitness {
    pub x: CarrierPoint,
    pub gap: ExactNumber,
}

/// Outcome of the a-fuzzy continuity test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzyVerdict {
    pub holds: bool,
    pub threshold: ExactNumber,
    pub max_gap: ExactNumber,
    pub witnesses: Vec<GapWitness>,
}

/// A total map between carriers that is affine with rational coefficients on
/// each of finitely many domain intervals, plus explicit breakpoint values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseAffineMap {
    domain: Carrier,
    codomain: Carrier,
    pieces: Vec<AffinePiece>,
    breakpoints: Vec<BreakpointValue>,
}

impl PiecewiseAffineMap {
    /// Validates that pieces and breakpoints partition the domain and that
    /// every value lands in the codomain.
    pub fn new(
        domain: Carrier,
        codomain: Carrier,
        mut pieces: Vec<AffinePiece>,
        mut breakpoints: Vec<BreakpointValue>,
    ) -> Result<Self, IntervalError> {
        let mut covered = Region::empty();
        let mut claim = |sheet: SheetId, set: LineSet, what: String| {
            let r = Region::on_sheet(sheet, set);
            if !covered.is_disjoint(&r) {
                return Err(IntervalError::Coverage(format!("{what} overlaps another piece")));
            }
            covered = covered.union(&r);
            Ok(())
        };
        for p in &pieces {
            claim(p.sheet_in, LineSet::single(p.interval.clone()), format!("piece {:?}", p.interval))?;
        }
        for b in &breakpoints {
            claim(b.sheet_in, LineSet::point(b.x.clone()), format!("breakpoint {}", b.x))?;
        }
        if &covered != domain.region() {
            return Err(IntervalError::Coverage(format!(
                "pieces cover {covered:?} but the domain is {:?}",
                domain.region()
            )));
        }
        for p in &pieces {
            let img = Region::on_sheet(p.sheet_out, LineSet::single(p.interval.affine_image(&p.slope, &p.intercept)));
            if !img.is_subset(codomain.region()) {
                return Err(IntervalError::OutsideCodomain(format!("image {img:?} of piece {:?}", p.interval)));
            }
        }
        for b in &breakpoints {
            if !codomain.contains(&b.image()) {
                return Err(IntervalError::OutsideCodomain(format!("value {} at {}", b.value, b.x)));
            }
        }
        pieces.sort_by(|a, b| (a.sheet_in, a.interval.lo()).cmp(&(b.sheet_in, b.interval.lo())));
        breakpoints.sort_by(|a, b| (a.sheet_in, &a.x).cmp(&(b.sheet_in, &b.x)));
        Ok(PiecewiseAffineMap { domain, codomain, pieces, breakpoints })
    }

    /// `x ↦ slope·x + intercept` on a carrier contained in a single sheet 0.
    pub fn affine(domain: Carrier, codomain: Carrier, slope: Rational, intercept: Rational) -> Result<Self, IntervalError> {
        let pieces = sheet_pieces(&domain, |sheet, iv| {
            AffinePiece::new(iv, slope.clone(), intercept.clone()).routed(sheet, sheet)
        });
        PiecewiseAffineMap::new(domain, codomain, pieces, Vec::new())
    }

    /// The inclusion of `domain` into `codomain`.
    pub fn inclusion(domain: Carrier, codomain: Carrier) -> Result<Self, IntervalError> {
        PiecewiseAffineMap::affine(domain, codomain, Rational::one(), Rational::zero())
    }

    pub fn identity(carrier: Carrier) -> Self {
        PiecewiseAffineMap::inclusion(carrier.clone(), carrier).expect("identity is valid")
    }

    pub fn domain(&self) -> &Carrier {
        &self.domain
    }

    pub fn codomain(&self) -> &Carrier {
        &self.codomain
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> &[BreakpointValue] {
        &self.breakpoints
    }

    pub fn eval(&self, p: &CarrierPoint) -> Result<CarrierPoint, IntervalError> {
        if let Some(piece) = self.pieces.iter().find(|q| q.sheet_in == p.sheet && q.interval.contains(&p.value)) {
            return Ok(CarrierPoint::new(piece.sheet_out, piece.apply(&p.value)));
        }
        if let Some(b) = self.breakpoints.iter().find(|b| b.sheet_in == p.sheet && b.x == p.value) {
            return Ok(b.image());
        }
        Err(IntervalError::OutsideDomain(p.to_string()))
    }

    /// `f(s ∩ domain)`.
    pub fn image(&self, s: &Region) -> Region {
        let mut out = Region::empty();
        for p in &self.pieces {
            let part = s.sheet(p.sheet_in).intersection(&LineSet::single(p.interval.clone()));
            let img = LineSet::from_intervals(part.pieces().iter().map(|iv| iv.affine_image(&p.slope, &p.intercept)));
            out.add(p.sheet_out, &img);
        }
        for b in &self.breakpoints {
            if s.contains(&b.point()) {
                out.add(b.sheet_out, &LineSet::point(b.value.clone()));
            }
        }
        out
    }

    /// `f⁻¹(s)`, computed piece by piece.
    pub fn preimage(&self, s: &Region) -> Region {
        let mut out = Region::empty();
        for p in &self.pieces {
            out.add(p.sheet_in, &p.pull_back(&s.sheet(p.sheet_out)));
        }
        for b in &self.breakpoints {
            if s.contains(&b.image()) {
                out.add(b.sheet_in, &LineSet::point(b.x.clone()));
            }
        }
        out
    }

    pub fn one_sided_limits(&self, p: &CarrierPoint) -> Result<OneSidedLimits, IntervalError> {
        self.domain.require_point(p)?;
        let on_sheet = || self.pieces.iter().filter(|q| q.sheet_in == p.sheet);
        let limit = |q: &AffinePiece| CarrierPoint::new(q.sheet_out, q.apply(&p.value));
        Ok(OneSidedLimits {
            left: on_sheet().find(|q| q.interval.reaches_from_left(&p.value)).map(limit),
            right: on_sheet().find(|q| q.interval.reaches_from_right(&p.value)).map(limit),
        })
    }

    /// Largest discrepancy among the value and the defined one-sided limits.
    pub fn gap(&self, p: &CarrierPoint) -> Result<ExactNumber, IntervalError> {
        let value = self.eval(p)?;
        let limits = self.one_sided_limits(p)?;
        let candidates: Vec<&CarrierPoint> =
            std::iter::once(&value).chain(limits.left.as_ref()).chain(limits.right.as_ref()).collect();
        let mut gap = ExactNumber::zero();
        for (i, a) in candidates.iter().enumerate() {
            for b in &candidates[i + 1..] {
                if a.sheet != b.sheet {
                    return Err(IntervalError::GapAcrossSheets(p.to_string()));
                }
                gap = gap.max((&a.value - &b.value).abs());
            }
        }
        Ok(gap)
    }

    /// Domain points that could carry a positive gap: piece endpoints and
    /// breakpoints.
    pub fn critical_points(&self) -> Vec<CarrierPoint> {
        let mut out: Vec<CarrierPoint> = self
            .pieces
            .iter()
            .flat_map(|q| {
                [q.interval.lo(), q.interval.hi()]
                    .into_iter()
                    .filter_map(Bound::finite)
                    .map(|v| CarrierPoint::new(q.sheet_in, v.clone()))
                    .collect::<Vec<_>>()
            })
            .chain(self.breakpoints.iter().map(BreakpointValue::point))
            .filter(|p| self.domain.contains(p))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// All domain points with a positive gap, in increasing order.
    pub fn gaps(&self) -> Result<Vec<GapWitness>, IntervalError> {
        let mut out = Vec::new();
        for x in self.critical_points() {
            let gap = self.gap(&x)?;
            if gap.signum().is_gt() {
                out.push(GapWitness { x, gap });
            }
        }
        Ok(out)
    }

    /// Holds iff every gap is at most `a`.
    pub fn is_a_fuzzy_continuous(&self, a: &ExactNumber) -> Result<FuzzyVerdict, IntervalError> {
        if a.signum().is_lt() {
            return Err(IntervalError::NegativeThreshold(a.to_string()));
        }
        let gaps = self.gaps()?;
        let max_gap = gaps.iter().map(|w| w.gap.clone()).max().unwrap_or_else(ExactNumber::zero);
        let witnesses: Vec<GapWitness> = gaps.into_iter().filter(|w| &w.gap > a).collect();
        Ok(FuzzyVerdict { holds: witnesses.is_empty(), threshold: a.clone(), max_gap, witnesses })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PiecewiseAffineMap) -> Result<PiecewiseAffineMap, IntervalError> {
        let g = self;
        let f = inner;
        if !f.codomain.region().is_subset(g.domain.region()) {
            return Err(IntervalError::CarrierMismatch(format!(
                "codomain {:?} is not inside domain {:?}",
                f.codomain.region(),
                g.domain.region()
            )));
        }
        let mut pieces = Vec::new();
        let mut breakpoints = Vec::new();
        let mut extra = Vec::new();
        let mut push = |sheet_in: SheetId, iv: Interval, sheet_out: SheetId, slope: Rational, intercept: Rational| {
            if iv.is_degenerate() {
                let x = iv.lo().finite().expect("degenerate intervals are finite").clone();
                let value = x.affine(&slope, &intercept);
                breakpoints.push(BreakpointValue { sheet_in, x, sheet_out, value });
            } else {
                pieces.push(AffinePiece { sheet_in, interval: iv, sheet_out, slope, intercept });
            }
        };
        for p in &f.pieces {
            for q in g.pieces.iter().filter(|q| q.sheet_in == p.sheet_out) {
                let part = p.pull_back(&LineSet::single(q.interval.clone()));
                for iv in part.pieces() {
                    push(
                        p.sheet_in,
                        iv.clone(),
                        q.sheet_out,
                        &q.slope * &p.slope,
                        &q.slope * &p.intercept + &q.intercept,
                    );
                }
            }
            for b in g.breakpoints.iter().filter(|b| b.sheet_in == p.sheet_out) {
                let part = p.pull_back(&LineSet::point(b.x.clone()));
                for iv in part.pieces() {
                    if !iv.is_degenerate() {
                        let value = b.value.clone();
                        if !value.is_rational() {
                            return Err(IntervalError::NotRepresentable(format!(
                                "constant value {value} on {iv:?} is irrational"
                            )));
                        }
                        push(p.sheet_in, iv.clone(), b.sheet_out, Rational::zero(), value.a().clone());
                    } else {
                        let x = iv.lo().finite().expect("finite").clone();
                        extra.push(BreakpointValue { sheet_in: p.sheet_in, x, sheet_out: b.sheet_out, value: b.value.clone() });
                    }
                }
            }
        }
        breakpoints.extend(extra);
        for b in &f.breakpoints {
            let out = g.eval(&b.image())?;
            breakpoints.push(BreakpointValue { sheet_in: b.sheet_in, x: b.x.clone(), sheet_out: out.sheet, value: out.value });
        }
        PiecewiseAffineMap::new(f.domain.clone(), g.codomain.clone(), pieces, breakpoints)
    }

    /// Extensional equality: same carriers and same value at every point.
    ///
    /// Both maps are affine between consecutive critical points, so it
    /// suffices to compare at those points and at two interior points of each
    /// gap between them.
    pub fn agrees_with(&self, other: &PiecewiseAffineMap) -> bool {
        if self.domain != other.domain || self.codomain != other.codomain {
            return false;
        }
        let mut probes = self.critical_points();
        probes.extend(other.critical_points());
        probes.extend(self.domain.sheet_ids().into_iter().map(|s| CarrierPoint::new(s, ExactNumber::zero())));
        probes.sort();
        probes.dedup();
        let mut samples = probes.clone();
        for w in probes.windows(2) {
            if w[0].sheet == w[1].sheet {
                let d = &w[1].value - &w[0].value;
                let third = d.scale(&Rational::new(1.into(), 3.into()));
                samples.push(CarrierPoint::new(w[0].sheet, &w[0].value + &third));
                samples.push(CarrierPoint::new(w[0].sheet, &w[1].value - &third));
            }
        }
        for p in &probes {
            for k in [-2i64, -1, 1, 2] {
                samples.push(CarrierPoint::new(p.sheet, &p.value + &ExactNumber::int(k)));
            }
        }
        samples
            .iter()
            .filter(|p| self.domain.contains(p))
            .all(|p| self.eval(p).ok() == other.eval(p).ok())
    }
}

/// One piece per domain interval.
fn sheet_pieces(domain: &Carrier, make: impl Fn(SheetId, Interval) -> AffinePiece) -> Vec<AffinePiece> {
    domain
        .region()
        .sheets()
        .flat_map(|(id, s)| s.pieces().iter().map(|iv| make(id, iv.clone())).collect::<Vec<_>>())
        .collect()
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    domain: Carrier,
    codomain: Carrier,
    pieces: Vec<AffinePiece>,
    #[serde(default)]
    breakpoints: Vec<BreakpointValue>,
}

impl Serialize for PiecewiseAffineMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MapRepr {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            pieces: self.pieces.clone(),
            breakpoints: self.breakpoints.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PiecewiseAffineMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = MapRepr::deserialize(deserializer)?;
        PiecewiseAffineMap::new(r.domain, r.codomain, r.pieces, r.breakpoints).map_err(serde::de::Error::custom)
    }
}
