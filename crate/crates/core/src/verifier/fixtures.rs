use serde::{Deserialize, Serialize};

use crate::continuity::{ContinuityMode, IntervalScaledMap, IntervalVerdict, Locus, ViolationKind};
use crate::interval_world::exact::rational;
use crate::interval_world::{
    AffinePiece, Bound, Carrier, CarrierPoint, ExactNumber, Interval, LineSet, PiecewiseAffineMap, Region, SheetId,
};
use crate::scales::{IntervalScale, IntervalScaleKind};

use super::VerifierError;

pub const FIXTURE_NAMES: [&str; 5] = ["ex12", "ex13", "ex15", "ex17-f", "ex17-ff"];

/// A built-in instance: a scaled map for `check`, or a bare map for `gaps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FixtureInstance {
    Scaled(IntervalScaledMap),
    Function(PiecewiseAffineMap),
}

/// One expected-vs-computed line of the fixture table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub fixture: String,
    pub claim: String,
    pub expected: bool,
    pub computed: bool,
}

impl FixtureCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.computed
    }
}

fn n(num: i64, den: i64) -> ExactNumber {
    ExactNumber::ratio(num, den)
}

fn open(lo: ExactNumber, hi: ExactNumber) -> Region {
    Region::interval(Interval::open(lo, hi))
}

fn unit() -> Interval {
    Interval::closed(n(0, 1), n(1, 1))
}

/// The punctured interval `[0,½) ∪ (½,1]` included in `[0,1]`, both scaled
/// by the symmetric intervals inside `[0,1]`.
pub fn ex12() -> IntervalScaledMap {
    let x = Carrier::line(LineSet::from_intervals([
        Interval::closed_open(n(0, 1), n(1, 2)),
        Interval::open_closed(n(1, 2), n(1, 1)),
    ]))
    .expect("nonempty carrier");
    let y = Carrier::interval(unit());
    let kind = IntervalScaleKind::SymmetricIntervals { lo: Bound::Finite(n(0, 1)), hi: Bound::Finite(n(1, 1)) };
    let map = PiecewiseAffineMap::inclusion(x.clone(), y.clone()).expect("subset inclusion");
    IntervalScaledMap::new(
        map,
        IntervalScale::new(x, kind.clone()).expect("valid scale"),
        IntervalScale::new(y, kind).expect("valid scale"),
        vec![open(n(0, 1), n(1, 1))],
        vec![],
    )
    .expect("consistent fixture")
}

/// The identity of the line from rational-ended-at-rational-points to the
/// swapped assignment.
pub fn ex13() -> IntervalScaledMap {
    let line = Carrier::real_line();
    let s2 = ExactNumber::sqrt2();
    IntervalScaledMap::new(
        PiecewiseAffineMap::identity(line.clone()),
        IntervalScale::new(line.clone(), IntervalScaleKind::MixedRationalIrrational { swapped: false })
            .expect("valid scale"),
        IntervalScale::new(line, IntervalScaleKind::MixedRationalIrrational { swapped: true }).expect("valid scale"),
        vec![open(n(0, 1), n(1, 1)), open(-s2.clone(), s2.clone()), open(n(1, 2), n(3, 1))],
        vec![CarrierPoint::on_line(n(0, 1)), CarrierPoint::on_line(s2)],
    )
    .expect("consistent fixture")
}

/// The projection of two copies of `[0,1]` onto one copy, all scaled by the
/// connected open sets.
pub fn ex15() -> IntervalScaledMap {
    let x = Carrier::new(vec![(SheetId(1), LineSet::single(unit())), (SheetId(2), LineSet::single(unit()))])
        .expect("disjoint sheets");
    let y = Carrier::interval(unit());
    let pieces = [SheetId(1), SheetId(2)]
        .map(|s| AffinePiece::new(unit(), rational(1, 1), rational(0, 1)).routed(s, SheetId(0)))
        .to_vec();
    let map = PiecewiseAffineMap::new(x.clone(), y.clone(), pieces, vec![]).expect("projection");
    IntervalScaledMap::new(
        map,
        IntervalScale::new(x, IntervalScaleKind::ConnectedOpen).expect("valid scale"),
        IntervalScale::new(y, IntervalScaleKind::ConnectedOpen).expect("valid scale"),
        vec![open(n(1, 4), n(3, 4))],
        vec![],
    )
    .expect("consistent fixture")
}

/// `f(x) = 10x/11` on `[0,1)` and `f(x) = x` on `[1,2]`.
pub fn ex17_f() -> PiecewiseAffineMap {
    let c = Carrier::interval(Interval::closed(n(0, 1), n(2, 1)));
    PiecewiseAffineMap::new(
        c.clone(),
        c,
        vec![
            AffinePiece::new(Interval::closed_open(n(0, 1), n(1, 1)), rational(10, 11), rational(0, 1)),
            AffinePiece::new(Interval::closed(n(1, 1), n(2, 1)), rational(1, 1), rational(0, 1)),
        ],
        vec![],
    )
    .expect("valid map")
}

pub fn ex17_ff() -> PiecewiseAffineMap {
    let f = ex17_f();
    f.compose(&f).expect("endomap composes")
}

pub fn load_fixture(name: &str) -> Result<FixtureInstance, VerifierError> {
    Ok(match name {
        "ex12" => FixtureInstance::Scaled(ex12()),
        "ex13" => FixtureInstance::Scaled(ex13()),
        "ex15" => FixtureInstance::Scaled(ex15()),
        "ex17-f" => FixtureInstance::Function(ex17_f()),
        "ex17-ff" => FixtureInstance::Function(ex17_ff()),
        other => return Err(VerifierError::UnknownFixture(other.to_string())),
    })
}

struct Table(Vec<FixtureCheck>);

impl Table {
    fn push(&mut self, fixture: &str, claim: impl Into<String>, expected: bool, computed: bool) {
        self.0.push(FixtureCheck { fixture: fixture.to_string(), claim: claim.into(), expected, computed });
    }
}

fn run(m: &IntervalScaledMap, mode: ContinuityMode<CarrierPoint>) -> Result<IntervalVerdict, VerifierError> {
    Ok(m.check(&mode)?)
}

fn sound(m: &IntervalScaledMap, mode: &ContinuityMode<CarrierPoint>, v: &IntervalVerdict) -> bool {
    v.certificate.as_ref().is_some_and(|c| m.replays(mode, c))
}

/// Builds every fixture and lists each expected verdict next to the computed
/// one.
pub fn fixtures() -> Result<Vec<FixtureCheck>, VerifierError> {
    let mut t = Table(Vec::new());

    let m = ex12();
    let local = run(&m, ContinuityMode::strong(Locus::Local))?;
    t.push("ex12", "LOCAL/STRONG holds", true, local.holds);
    let mode = ContinuityMode::strong(Locus::Global);
    let global = run(&m, mode.clone())?;
    t.push("ex12", "GLOBAL/STRONG holds", false, global.holds);
    let cert = global.certificate.as_ref();
    t.push("ex12", "certificate set is (0,1)", true, cert.is_some_and(|c| c.set == open(n(0, 1), n(1, 1))));
    let punctured = Region::line(LineSet::from_intervals([
        Interval::open(n(0, 1), n(1, 2)),
        Interval::open(n(1, 2), n(1, 1)),
    ]));
    t.push(
        "ex12",
        "certificate preimage is (0,1/2) u (1/2,1) and not Q-open",
        true,
        cert.is_some_and(|c| c.preimage == punctured && !m.domain().is_q_open(&c.preimage)),
    );
    t.push("ex12", "certificate replays", true, sound(&m, &mode, &global));

    let m = ex13();
    let global = run(&m, ContinuityMode::strong(Locus::Global))?;
    t.push("ex13", "GLOBAL/STRONG holds over the probes", true, global.holds);
    for x in m.points() {
        let mode = ContinuityMode::strong(Locus::AtPoint(x.clone()));
        let v = run(&m, mode.clone())?;
        t.push("ex13", format!("AT_POINT/STRONG holds at {x}"), false, v.holds);
        t.push("ex13", format!("certificate at {x} replays"), true, sound(&m, &mode, &v));
    }

    let m = ex15();
    for strength in [crate::continuity::Strength::Weak, crate::continuity::Strength::Strong] {
        let expected = strength == crate::continuity::Strength::Weak;
        let tag = if expected { "WEAK" } else { "STRONG" };
        let mode = ContinuityMode::new(strength, Locus::Global);
        let v = run(&m, mode.clone())?;
        t.push("ex15", format!("GLOBAL/{tag} holds"), expected, v.holds);
        if !expected {
            t.push(
                "ex15",
                "GLOBAL/STRONG certificate preimage is disconnected",
                true,
                v.certificate.as_ref().is_some_and(|c| {
                    c.violation == ViolationKind::PreimageNotQOpen && !c.preimage.is_connected() && sound(&m, &mode, &v)
                }),
            );
        }
        let points = m.probe_points();
        let mut all = true;
        let mut certified = true;
        for x in &points {
            let mode = ContinuityMode::new(strength, Locus::AtPoint(x.clone()));
            let v = run(&m, mode.clone())?;
            all &= v.holds == expected;
            if !expected {
                certified &= v.certificate.as_ref().is_some_and(|c| !c.preimage.is_connected())
                    && sound(&m, &mode, &v);
            }
        }
        let verdict = if expected { all } else { !all };
        t.push("ex15", format!("AT_POINT/{tag} holds at all {} probe points", points.len()), expected, verdict);
        if !expected {
            t.push("ex15", "AT_POINT/STRONG fails at every probe point with a disconnected preimage", true, all && certified);
        }
    }

    let f = ex17_f();
    let ff = ex17_ff();
    let one = CarrierPoint::on_line(n(1, 1));
    let threshold = n(1, 10);
    t.push("ex17", "gap(f, 1) = 1/11", true, f.gap(&one)? == n(1, 11));
    t.push("ex17", "gap(f o f, 1) = 21/121", true, ff.gap(&one)? == n(21, 121));
    t.push("ex17", "f is 1/10-fuzzy continuous", true, f.is_a_fuzzy_continuous(&threshold)?.holds);
    t.push("ex17", "f o f is 1/10-fuzzy continuous", false, ff.is_a_fuzzy_continuous(&threshold)?.holds);

    Ok(t.0)
}
