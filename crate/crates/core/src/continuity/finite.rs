use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::finite_topology::{image, preimage, PointId, PointSet};
use crate::scales::{trivial_scale, Scale};

use super::{Certificate, ContinuityError, ContinuityMode, ContinuityVerdict, DomainScale, Locus, Strength, ViolationKind};

pub type FiniteCertificate = Certificate<PointId, PointSet>;
pub type FiniteVerdict = ContinuityVerdict<PointId, PointSet>;

/// Bitmask decision procedures shared by [`ScaledMap`] and the sweeps.
///
/// Scales enter as their assignment `x ↦ Q(x)` and their family of Q-open
/// sets; each function returns the first offending set, or `None` when the
/// notion holds.
pub mod kernel {
    use crate::finite_topology::{Family, PointId, PointSet};

    use super::super::Strength;

    /// Preimages of all subsets of the codomain.
    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct Preimages {
        table: Vec<usize>,
        pre: Vec<PointSet>,
        image: PointSet,
        n_dom: usize,
        n_cod: usize,
    }

    impl Preimages {
        pub fn new(table: &[PointId], n_cod: usize) -> Self {
            let mut pre = vec![PointSet::EMPTY; 1 << n_cod];
            for (bits, slot) in pre.iter_mut().enumerate() {
                for (x, y) in table.iter().enumerate() {
                    if bits & (1 << y.0) != 0 {
                        slot.insert(PointId(x));
                    }
                }
            }
            let image = table.iter().fold(PointSet::EMPTY, |acc, y| acc.union(PointSet::singleton(*y)));
            Preimages { table: table.iter().map(|y| y.0).collect(), pre, image, n_dom: table.len(), n_cod }
        }

        #[inline]
        pub fn of(&self, s: PointSet) -> PointSet {
            self.pre[s.bits() as usize]
        }

        #[inline]
        pub fn value(&self, x: usize) -> usize {
            self.table[x]
        }

        pub fn image(&self) -> PointSet {
            self.image
        }

        pub fn n_dom(&self) -> usize {
            self.n_dom
        }

        pub fn n_cod(&self) -> usize {
            self.n_cod
        }

        pub fn is_surjective(&self) -> bool {
            self.image == PointSet::full(self.n_cod)
        }
    }

    #[inline]
    pub fn strong_at(pre: &Preimages, q: &[Family], r: &[Family], x: usize) -> Option<PointSet> {
        let qx = q[x];
        r[pre.value(x)].sets().find(|&o| !qx.contains(pre.of(o)))
    }

    #[inline]
    pub fn weak_at(pre: &Preimages, q: &[Family], r: &[Family], x: usize) -> Option<PointSet> {
        let qx = q[x];
        r[pre.value(x)].sets().find(|&o| qx.any_subset_of(pre.of(o)).is_none())
    }

    pub fn at(strength: Strength, pre: &Preimages, q: &[Family], r: &[Family], x: usize) -> Option<PointSet> {
        match strength {
            Strength::Strong => strong_at(pre, q, r, x),
            Strength::Weak => weak_at(pre, q, r, x),
        }
    }

    pub fn local(strength: Strength, pre: &Preimages, q: &[Family], r: &[Family]) -> Option<(usize, PointSet)> {
        (0..pre.n_dom()).find_map(|x| at(strength, pre, q, r, x).map(|o| (x, o)))
    }

    #[inline]
    pub fn strong_global(pre: &Preimages, q_open: Family, r_open: Family) -> Option<PointSet> {
        let img = pre.image();
        r_open.sets().filter(|v| v.intersects(img)).find(|&v| !q_open.contains(pre.of(v)))
    }

    #[inline]
    pub fn weak_global(pre: &Preimages, q_open: Family, r_open: Family) -> Option<PointSet> {
        let img = pre.image();
        r_open.sets().filter(|v| v.intersects(img)).find(|&v| q_open.any_subset_of(pre.of(v)).is_none())
    }

    pub fn global(strength: Strength, pre: &Preimages, q_open: Family, r_open: Family) -> Option<PointSet> {
        match strength {
            Strength::Strong => strong_global(pre, q_open, r_open),
            Strength::Weak => weak_global(pre, q_open, r_open),
        }
    }

    /// First R-closed `Z` whose preimage is a proper subset of the domain
    /// and not Q-closed.
    pub fn closed_characterization(pre: &Preimages, q_open: Family, r_open: Family) -> Option<PointSet> {
        let (x_all, y_all) = (PointSet::full(pre.n_dom()), PointSet::full(pre.n_cod()));
        (0..1u32 << pre.n_cod()).map(PointSet::from_bits).find(|&z| {
            let r_closed = r_open.contains(y_all.difference(z));
            let p = pre.of(z);
            r_closed && p != x_all && !q_open.contains(x_all.difference(p))
        })
    }
}

use kernel::Preimages;

/// A total map between two finite scaled spaces.
#[derive(Clone, PartialEq, Eq)]
pub struct ScaledMap {
    table: Vec<PointId>,
    domain: Scale,
    codomain: Scale,
    pre: Preimages,
}

impl ScaledMap {
    pub fn new(table: Vec<PointId>, domain: Scale, codomain: Scale) -> Result<Self, ContinuityError> {
        let (n, m) = (domain.space().n_points(), codomain.space().n_points());
        if table.len() != n {
            return Err(ContinuityError::TableLength { expected: n, got: table.len() });
        }
        if let Some((x, y)) = table.iter().enumerate().find(|(_, y)| y.0 >= m) {
            return Err(ContinuityError::ImageOutOfRange { point: x, image: y.0, n: m });
        }
        for s in [&domain, &codomain] {
            if let crate::finite_topology::Validation::Invalid(v) = s.validate() {
                return Err(ContinuityError::Scale(crate::scales::ScaleError::Invalid(v)));
            }
        }
        let pre = Preimages::new(&table, m);
        Ok(ScaledMap { table, domain, codomain, pre })
    }

    pub fn from_indices(table: &[usize], domain: Scale, codomain: Scale) -> Result<Self, ContinuityError> {
        ScaledMap::new(table.iter().map(|&y| PointId(y)).collect(), domain, codomain)
    }

    pub fn table(&self) -> &[PointId] {
        &self.table
    }

    pub fn domain(&self) -> &Scale {
        &self.domain
    }

    pub fn codomain(&self) -> &Scale {
        &self.codomain
    }

    pub fn preimages(&self) -> &Preimages {
        &self.pre
    }

    pub fn is_surjective(&self) -> bool {
        self.pre.is_surjective()
    }

    /// The domain scale the mode asks for.
    pub fn effective_domain(&self, choice: DomainScale) -> Scale {
        match choice {
            DomainScale::Q => self.domain.clone(),
            DomainScale::Trivial => trivial_scale(self.domain.space_arc().clone()),
        }
    }

    fn require_point(&self, x: PointId) -> Result<(), ContinuityError> {
        let n = self.domain.space().n_points();
        if x.0 >= n {
            return Err(ContinuityError::PointOutOfRange { point: x.0, n });
        }
        Ok(())
    }

    pub fn check(&self, mode: &ContinuityMode<PointId>) -> Result<FiniteVerdict, ContinuityError> {
        let q = self.effective_domain(mode.domain_scale);
        let (qa, ra) = (q.assignment(), self.codomain.assignment());
        let point_kind = match mode.strength {
            Strength::Strong => ViolationKind::PreimageNotInScale,
            Strength::Weak => ViolationKind::NoNeighbourhoodInside,
        };
        let at_cert = |x: usize, o: PointSet| Certificate {
            violation: point_kind,
            point: Some(PointId(x)),
            set: o,
            preimage: self.pre.of(o),
        };
        let (failure, checked) = match &mode.locus {
            Locus::AtPoint(x) => {
                self.require_point(*x)?;
                let found = kernel::at(mode.strength, &self.pre, qa, ra, x.0);
                (found.map(|o| at_cert(x.0, o)), ra[self.pre.value(x.0)].len())
            }
            Locus::Local => {
                let found = kernel::local(mode.strength, &self.pre, qa, ra);
                let checked = (0..self.table.len()).map(|x| ra[self.pre.value(x)].len()).sum();
                (found.map(|(x, o)| at_cert(x, o)), checked)
            }
            Locus::Global => {
                let r_open = self.codomain.open_family();
                let found = kernel::global(mode.strength, &self.pre, q.open_family(), r_open);
                let kind = match mode.strength {
                    Strength::Strong => ViolationKind::PreimageNotQOpen,
                    Strength::Weak => ViolationKind::NoQOpenInside,
                };
                let checked = r_open.sets().filter(|v| v.intersects(self.pre.image())).count();
                let cert = found.map(|v| Certificate { violation: kind, point: None, set: v, preimage: self.pre.of(v) });
                (cert, checked)
            }
        };
        Ok(ContinuityVerdict { holds: failure.is_none(), mode: mode.clone(), exhaustive: true, checked, certificate: failure })
    }

    /// Preimages of R-closed sets are Q-closed, proper preimages only.
    pub fn closed_characterization(&self) -> FiniteVerdict {
        let found =
            kernel::closed_characterization(&self.pre, self.domain.open_family(), self.codomain.open_family());
        ContinuityVerdict {
            holds: found.is_none(),
            mode: ContinuityMode::strong(Locus::Global),
            exhaustive: true,
            checked: 1 << self.codomain.space().n_points(),
            certificate: found.map(|z| Certificate {
                violation: ViolationKind::PreimageNotQClosed,
                point: None,
                set: z,
                preimage: self.pre.of(z),
            }),
        }
    }

    /// Re-derives a failure certificate from the definitions.
    pub fn replays(&self, mode: &ContinuityMode<PointId>, cert: &FiniteCertificate) -> bool {
        let q = self.effective_domain(mode.domain_scale);
        let r = &self.codomain;
        let n = self.domain.space().n_points();
        let whole = PointSet::full(n);
        let img = image(&self.table, whole);
        let pre = preimage(&self.table, cert.set);
        if pre != cert.preimage {
            return false;
        }
        let maps_into = |u: PointSet, target: PointSet| image(&self.table, u).is_subset(target);
        match (cert.violation, cert.point) {
            (ViolationKind::PreimageNotInScale, Some(x)) => {
                x.0 < n && r.at(self.table[x.0]).contains(cert.set) && !q.at(x).contains(pre)
            }
            (ViolationKind::NoNeighbourhoodInside, Some(x)) => {
                x.0 < n && r.at(self.table[x.0]).contains(cert.set) && !q.at(x).sets().any(|u| maps_into(u, cert.set))
            }
            (ViolationKind::PreimageNotQOpen, None) => {
                r.q_open(cert.set) && cert.set.intersects(img) && !q.q_open(pre)
            }
            (ViolationKind::NoQOpenInside, None) => {
                r.q_open(cert.set) && cert.set.intersects(img) && !q.open_family().sets().any(|u| maps_into(u, cert.set))
            }
            (ViolationKind::PreimageNotQClosed, None) => {
                r.q_closed(cert.set) && pre != whole && !q.q_closed(pre)
            }
            _ => false,
        }
    }

    pub fn constancy_profile(&self) -> ConstancyProfile {
        let space = self.domain.space();
        let constant_on = |s: PointSet| image(&self.table, s).len() <= 1;
        let locally_constant_at =
            space.points().filter(|&x| constant_on(space.minimal_neighborhood(x))).fold(PointSet::EMPTY, |mut acc, x| {
                acc.insert(x);
                acc
            });
        ConstancyProfile {
            locally_constant_at,
            constant_on_components: space.connected_components().into_iter().all(constant_on),
        }
    }

    /// `f` is constant on `s`.
    pub fn constant_on(&self, s: PointSet) -> bool {
        image(&self.table, s).len() <= 1
    }
}

pub fn check_continuity(f: &ScaledMap, mode: &ContinuityMode<PointId>) -> Result<FiniteVerdict, ContinuityError> {
    f.check(mode)
}

pub fn check_closed_characterization(f: &ScaledMap) -> FiniteVerdict {
    f.closed_characterization()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstancyProfile {
    pub locally_constant_at: PointSet,
    pub constant_on_components: bool,
}

/// `g ∘ f` together with the two scales on the middle space: `H` from the
/// codomain of `f` and `R` from the domain of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedMap {
    pub map: ScaledMap,
    pub middle_h: Scale,
    pub middle_r: Scale,
}

impl ComposedMap {
    /// Every R-open set is H-open.
    pub fn tr_within_th(&self) -> bool {
        self.middle_r.open_family().is_subset(self.middle_h.open_family())
    }

    /// `R(y) ⊆ H(y)` at `y`.
    pub fn r_within_h_at(&self, y: PointId) -> bool {
        self.middle_r.at(y).is_subset(self.middle_h.at(y))
    }

    pub fn r_within_h(&self) -> bool {
        self.middle_r.space().points().all(|y| self.r_within_h_at(y))
    }
}

pub fn compose_scaled(g: &ScaledMap, f: &ScaledMap) -> Result<ComposedMap, ContinuityError> {
    if f.codomain.space() != g.domain.space() {
        return Err(ContinuityError::SpaceMismatch);
    }
    let table = f.table.iter().map(|y| g.table[y.0]).collect();
    Ok(ComposedMap {
        map: ScaledMap::new(table, f.domain.clone(), g.codomain.clone())?,
        middle_h: f.codomain.clone(),
        middle_r: g.domain.clone(),
    })
}

impl std::fmt::Debug for ScaledMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScaledMap")
            .field("table", &self.table.iter().map(|p| p.0).collect::<Vec<_>>())
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ScaledMapRepr {
    table: Vec<usize>,
    domain: Scale,
    codomain: Scale,
}

impl Serialize for ScaledMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScaledMapRepr {
            table: self.table.iter().map(|p| p.0).collect(),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScaledMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ScaledMapRepr::deserialize(d)?;
        ScaledMap::from_indices(&repr.table, repr.domain, repr.codomain).map_err(serde::de::Error::custom)
    }
}

/// Identity map on a space with the same scale on both sides.
pub fn identity(scale: Scale) -> ScaledMap {
    let table = scale.space().points().collect();
    ScaledMap::new(table, scale.clone(), scale).expect("identity is well formed")
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finite_topology::{enumerate_topologies, Family, FiniteSpace};
    use crate::scales::p_structure;

    fn modes() -> Vec<ContinuityMode<PointId>> {
        let mut out = Vec::new();
        for strength in [Strength::Strong, Strength::Weak] {
            for locus in [Locus::AtPoint(PointId(0)), Locus::Local, Locus::Global] {
                out.push(ContinuityMode::new(strength, locus.clone()));
                out.push(ContinuityMode::new(strength, locus).with_trivial_domain());
            }
        }
        out
    }

    #[test]
    fn identity_with_trivial_scales_holds_in_all_twelve_modes() {
        for n in 1..=3 {
            for space in enumerate_topologies(n).unwrap() {
                let f = identity(trivial_scale(Arc::new(space)));
                for mode in modes() {
                    assert!(f.check(&mode).unwrap().holds, "{mode:?}");
                }
                assert!(f.closed_characterization().holds);
            }
        }
    }

    #[test]
    fn constant_map_into_filter_domain_is_strongly_continuous_everywhere() {
        let spaces = enumerate_topologies(3).unwrap();
        let dom = Arc::new(spaces[5].clone());
        let cod = Arc::new(spaces[11].clone());
        let q = trivial_scale(dom.clone()).f_closure();
        let r = trivial_scale(cod);
        let f = ScaledMap::from_indices(&[1, 1, 1], q, r).unwrap();
        for x in 0..3 {
            assert!(f.check(&ContinuityMode::strong(Locus::AtPoint(PointId(x)))).unwrap().holds);
        }
    }

    #[test]
    fn local_without_global() {
        // The R-open set {0,1} belongs only to R(1), and 1 is not in the image.
        let dom = Arc::new(FiniteSpace::discrete(1).unwrap());
        let cod = Arc::new(FiniteSpace::discrete(2).unwrap());
        let q = Scale::from_assignment(dom, vec![Family::EMPTY]).unwrap();
        let r = Scale::from_assignment(cod, vec![Family::EMPTY, Family::from_sets([PointSet::full(2)])]).unwrap();
        let f = ScaledMap::from_indices(&[0], q, r).unwrap();
        assert!(f.check(&ContinuityMode::strong(Locus::Local)).unwrap().holds);
        let global = f.check(&ContinuityMode::strong(Locus::Global)).unwrap();
        assert!(!global.holds);
        let cert = global.certificate.unwrap();
        assert_eq!(cert.set, PointSet::full(2));
        assert!(f.replays(&ContinuityMode::strong(Locus::Global), &cert));
        assert!(!f.closed_characterization().holds);
    }

    #[test]
    fn certificates_replay_on_a_small_sweep() {
        let spaces: Vec<_> = (1..=2).flat_map(|n| enumerate_topologies(n).unwrap()).map(Arc::new).collect();
        for d in &spaces {
            for c in &spaces {
                let q = trivial_scale(d.clone()).i_closure();
                let r = trivial_scale(c.clone());
                let (n, m) = (d.n_points(), c.n_points());
                for code in 0..m.pow(n as u32) {
                    let table: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
                    let f = ScaledMap::from_indices(&table, q.clone(), r.clone()).unwrap();
                    for mode in modes() {
                        let v = f.check(&mode).unwrap();
                        if let Some(cert) = &v.certificate {
                            assert!(f.replays(&mode, cert));
                        }
                    }
                    if let Some(cert) = f.closed_characterization().certificate {
                        assert!(f.replays(&ContinuityMode::strong(Locus::Global), &cert));
                    }
                }
            }
        }
    }

    #[test]
    fn constancy_profiles() {
        let disc = Arc::new(FiniteSpace::discrete(2).unwrap());
        let ind = Arc::new(FiniteSpace::indiscrete(2).unwrap());
        let c = ScaledMap::from_indices(&[0, 0], trivial_scale(ind.clone()), trivial_scale(ind.clone())).unwrap();
        let p = c.constancy_profile();
        assert_eq!(p.locally_constant_at, PointSet::full(2));
        assert!(p.constant_on_components);
        let id = identity(trivial_scale(disc));
        let p = id.constancy_profile();
        assert_eq!(p.locally_constant_at, PointSet::full(2));
        assert!(p.constant_on_components);
        let id = identity(trivial_scale(ind));
        let p = id.constancy_profile();
        assert_eq!(p.locally_constant_at, PointSet::EMPTY);
        assert!(!p.constant_on_components);
    }

    #[test]
    fn composition_with_identity_and_hypotheses() {
        let space = Arc::new(FiniteSpace::sierpinski());
        let q = p_structure(space.clone(), &[PointSet::from_points([0]), PointSet::full(2)]).unwrap();
        let f = ScaledMap::from_indices(&[1, 0], q.clone(), trivial_scale(space.clone())).unwrap();
        let id = identity(trivial_scale(space));
        let c = compose_scaled(&id, &f).unwrap();
        assert_eq!(c.map, f);
        assert!(c.tr_within_th() && c.r_within_h());
        assert!(compose_scaled(&f, &identity(q.clone())).is_ok());
        let other = identity(trivial_scale(Arc::new(FiniteSpace::discrete(3).unwrap())));
        assert_eq!(compose_scaled(&other, &f).unwrap_err(), ContinuityError::SpaceMismatch);
    }

    #[test]
    fn json_round_trip() {
        let space = Arc::new(FiniteSpace::sierpinski());
        let f = ScaledMap::from_indices(&[1, 1], trivial_scale(space.clone()), trivial_scale(space)).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.starts_with("{\"table\":[1,1],\"domain\":"));
        let back: ScaledMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let v = f.check(&ContinuityMode::strong(Locus::Global)).unwrap();
        let vt = serde_json::to_string(&v).unwrap();
        assert!(vt.contains("\"holds\":true"));
    }
}
