use serde::{Deserialize, Serialize};

use crate::interval_world::{CarrierPoint, IntervalError, PiecewiseAffineMap, Region};
use crate::scales::IntervalScale;

use super::{Certificate, ContinuityError, ContinuityMode, ContinuityVerdict, DomainScale, Locus, Strength, ViolationKind};

pub type IntervalCertificate = Certificate<CarrierPoint, Region>;
pub type IntervalVerdict = ContinuityVerdict<CarrierPoint, Region>;

/// A piecewise-affine map between carriers with a catalog scale on each
/// side.
///
/// `probes` are R-open sets tried first by global checks; `points` are extra
/// domain points visited by local checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IntervalScaledMapRepr")]
pub struct IntervalScaledMap {
    map: PiecewiseAffineMap,
    domain: IntervalScale,
    codomain: IntervalScale,
    probes: Vec<Region>,
    points: Vec<CarrierPoint>,
}

#[derive(Deserialize)]
struct IntervalScaledMapRepr {
    map: PiecewiseAffineMap,
    domain: IntervalScale,
    codomain: IntervalScale,
    #[serde(default)]
    probes: Vec<Region>,
    #[serde(default)]
    points: Vec<CarrierPoint>,
}

impl TryFrom<IntervalScaledMapRepr> for IntervalScaledMap {
    type Error = ContinuityError;

    fn try_from(r: IntervalScaledMapRepr) -> Result<Self, Self::Error> {
        IntervalScaledMap::new(r.map, r.domain, r.codomain, r.probes, r.points)
    }
}

impl IntervalScaledMap {
    pub fn new(
        map: PiecewiseAffineMap,
        domain: IntervalScale,
        codomain: IntervalScale,
        probes: Vec<Region>,
        points: Vec<CarrierPoint>,
    ) -> Result<Self, ContinuityError> {
        if domain.carrier() != map.domain() {
            return Err(ContinuityError::CarrierMismatch(format!("domain {}", domain.carrier())));
        }
        if codomain.carrier() != map.codomain() {
            return Err(ContinuityError::CarrierMismatch(format!("codomain {}", codomain.carrier())));
        }
        if let Some(p) = probes.iter().find(|p| !codomain.is_q_open(p)) {
            return Err(ContinuityError::ProbeNotOpen(p.to_string()));
        }
        if let Some(p) = points.iter().find(|p| !map.domain().contains(p)) {
            return Err(IntervalError::OutsideDomain(p.to_string()).into());
        }
        Ok(IntervalScaledMap { map, domain, codomain, probes, points })
    }

    pub fn map(&self) -> &PiecewiseAffineMap {
        &self.map
    }

    pub fn domain(&self) -> &IntervalScale {
        &self.domain
    }

    pub fn codomain(&self) -> &IntervalScale {
        &self.codomain
    }

    pub fn probes(&self) -> &[Region] {
        &self.probes
    }

    pub fn points(&self) -> &[CarrierPoint] {
        &self.points
    }

    fn effective_domain(&self, choice: DomainScale) -> IntervalScale {
        match choice {
            DomainScale::Q => self.domain.clone(),
            DomainScale::Trivial => IntervalScale::trivial(self.domain.carrier().clone()),
        }
    }

    fn domain_hints(&self) -> Vec<CarrierPoint> {
        let mut out = self.map.critical_points();
        out.extend(self.points.iter().cloned());
        out.sort();
        out.dedup();
        out
    }

    fn codomain_hints(&self) -> Vec<CarrierPoint> {
        let mut out = Vec::new();
        for p in self.domain_hints() {
            if let Ok(v) = self.map.eval(&p) {
                out.push(v);
            }
            if let Ok(lim) = self.map.one_sided_limits(&p) {
                out.extend(lim.left);
                out.extend(lim.right);
            }
        }
        out.retain(|p| self.codomain.carrier().contains(p));
        out.sort();
        out.dedup();
        out
    }

    /// Domain points visited by local checks and used to generate global
    /// critical sets.
    pub fn probe_points(&self) -> Vec<CarrierPoint> {
        let mut out = self.domain.sample_points(&self.domain_hints());
        out.extend(self.points.iter().cloned());
        out.sort();
        out.dedup();
        out
    }

    /// R-open sets examined by global checks: the probes, then sampled
    /// neighbourhoods of the images of the probe points.
    pub fn global_candidates(&self) -> Result<Vec<Region>, ContinuityError> {
        let hints = self.codomain_hints();
        let mut out = self.probes.clone();
        for x in self.probe_points() {
            let y = self.map.eval(&x)?;
            for u in self.codomain.sample_neighborhoods(&y, &hints)? {
                if !out.contains(&u) {
                    out.push(u);
                }
            }
        }
        Ok(out)
    }

    fn check_at(
        &self,
        q: &IntervalScale,
        strength: Strength,
        x: &CarrierPoint,
    ) -> Result<(Option<IntervalCertificate>, usize), ContinuityError> {
        let y = self.map.eval(x)?;
        let neighbourhoods = self.codomain.sample_neighborhoods(&y, &self.codomain_hints())?;
        let count = neighbourhoods.len();
        for o in neighbourhoods {
            let pre = self.map.preimage(&o);
            let (ok, violation) = match strength {
                Strength::Strong => (q.membership(x, &pre)?, ViolationKind::PreimageNotInScale),
                Strength::Weak => (q.witness_inside(x, &pre)?.is_some(), ViolationKind::NoNeighbourhoodInside),
            };
            if !ok {
                let cert = Certificate { violation, point: Some(x.clone()), set: o, preimage: pre };
                return Ok((Some(cert), count));
            }
        }
        Ok((None, count))
    }

    pub fn check(&self, mode: &ContinuityMode<CarrierPoint>) -> Result<IntervalVerdict, ContinuityError> {
        let q = self.effective_domain(mode.domain_scale);
        let (failure, checked) = match &mode.locus {
            Locus::AtPoint(x) => self.check_at(&q, mode.strength, x)?,
            Locus::Local => {
                let mut checked = 0;
                let mut failure = None;
                for x in self.probe_points() {
                    let (f, c) = self.check_at(&q, mode.strength, &x)?;
                    checked += c;
                    if f.is_some() {
                        failure = f;
                        break;
                    }
                }
                (failure, checked)
            }
            Locus::Global => {
                let image = self.map.image(self.map.domain().region());
                let mut checked = 0;
                let mut failure = None;
                for v in self.global_candidates()?.into_iter().filter(|v| !v.is_disjoint(&image)) {
                    checked += 1;
                    let pre = self.map.preimage(&v);
                    let (ok, violation) = match mode.strength {
                        Strength::Strong => (q.is_q_open(&pre), ViolationKind::PreimageNotQOpen),
                        Strength::Weak => (q.contains_q_open(&pre).is_some(), ViolationKind::NoQOpenInside),
                    };
                    if !ok {
                        failure = Some(Certificate { violation, point: None, set: v, preimage: pre });
                        break;
                    }
                }
                (failure, checked)
            }
        };
        Ok(ContinuityVerdict { holds: failure.is_none(), mode: mode.clone(), exhaustive: false, checked, certificate: failure })
    }

    /// Re-derives a failure certificate from the scale procedures.
    pub fn replays(&self, mode: &ContinuityMode<CarrierPoint>, cert: &IntervalCertificate) -> bool {
        let q = self.effective_domain(mode.domain_scale);
        let pre = self.map.preimage(&cert.set);
        if pre != cert.preimage {
            return false;
        }
        let image = self.map.image(self.map.domain().region());
        let r_open = || self.codomain.is_q_open(&cert.set) && !cert.set.is_disjoint(&image);
        let in_r_at = |x: &CarrierPoint| {
            self.map.eval(x).ok().and_then(|y| self.codomain.membership(&y, &cert.set).ok()).unwrap_or(false)
        };
        match (cert.violation, &cert.point) {
            (ViolationKind::PreimageNotInScale, Some(x)) => in_r_at(x) && q.membership(x, &pre) == Ok(false),
            (ViolationKind::NoNeighbourhoodInside, Some(x)) => in_r_at(x) && q.witness_inside(x, &pre) == Ok(None),
            (ViolationKind::PreimageNotQOpen, None) => r_open() && !q.is_q_open(&pre),
            (ViolationKind::NoQOpenInside, None) => r_open() && q.contains_q_open(&pre).is_none(),
            _ => false,
        }
    }
}

pub fn iw_check_continuity(
    m: &IntervalScaledMap,
    mode: &ContinuityMode<CarrierPoint>,
) -> Result<IntervalVerdict, ContinuityError> {
    m.check(mode)
}
