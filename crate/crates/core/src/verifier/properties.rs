use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::continuity::kernel::{self, Preimages};
use crate::continuity::{compose_scaled, ContinuityMode, Locus, ScaledMap, Strength};
use crate::finite_topology::{Family, FiniteSpace, PointId, PointSet};
use crate::interval_world::{Bound, Carrier, ExactNumber, Interval, LineSet, Region};
use crate::scales::{p_structure, trivial_scale, IntervalScale, IntervalScaleKind, Scale};

use super::oracle;
use super::sweep::{scale_sweep, side_entries, Ctx, Outcome, PairSweep, Side, Tally};
use super::universe::{self, Entry};
use super::{Instance, PropertyId, SweepConfig, SweepMode, VerifierError};

use Strength::{Strong, Weak};

/// Continuity verdicts of one map for one pair of scales.
trait Judge {
    fn n(&self) -> usize;
    fn at(&self, s: Strength, x: usize) -> bool;
    fn local(&self, s: Strength) -> bool;
    fn global(&self, s: Strength) -> bool;
}

/// Verdicts from the bitmask kernel.
struct Fast<'a> {
    pre: &'a Preimages,
    q: &'a Entry,
    r: &'a Entry,
}

impl Judge for Fast<'_> {
    fn n(&self) -> usize {
        self.pre.n_dom()
    }

    fn at(&self, s: Strength, x: usize) -> bool {
        kernel::at(s, self.pre, self.q.assignment(), self.r.assignment(), x).is_none()
    }

    fn local(&self, s: Strength) -> bool {
        kernel::local(s, self.pre, self.q.assignment(), self.r.assignment()).is_none()
    }

    fn global(&self, s: Strength) -> bool {
        kernel::global(s, self.pre, self.q.open, self.r.open).is_none()
    }
}

/// Verdicts from the scaled-map checker.
impl Judge for ScaledMap {
    fn n(&self) -> usize {
        self.table().len()
    }

    fn at(&self, s: Strength, x: usize) -> bool {
        self.check(&ContinuityMode::new(s, Locus::AtPoint(PointId(x)))).map(|v| v.holds).unwrap_or(false)
    }

    fn local(&self, s: Strength) -> bool {
        self.check(&ContinuityMode::new(s, Locus::Local)).map(|v| v.holds).unwrap_or(false)
    }

    fn global(&self, s: Strength) -> bool {
        self.check(&ContinuityMode::new(s, Locus::Global)).map(|v| v.holds).unwrap_or(false)
    }
}

fn fast<'a>(c: &'a Ctx, q: &'a Entry, r: &'a Entry) -> Fast<'a> {
    Fast { pre: c.pre, q, r }
}

fn own<'a>(c: &'a Ctx) -> Fast<'a> {
    Fast { pre: c.pre, q: c.d, r: c.c }
}

fn word(s: Strength) -> &'static str {
    match s {
        Strong => "strong",
        Weak => "weak",
    }
}

// Claims shared by the sweep and the replay path.

/// Strong continuity for `a` implies strong continuity for `b` at every
/// point, locally and, when asked, globally.
fn transfer(a: &impl Judge, b: &impl Judge, global: bool) -> Outcome {
    let mut out: Vec<Outcome> = (0..a.n())
        .map(|x| {
            Outcome::implication(a.at(Strong, x), b.at(Strong, x), || {
                format!("strong at {x} for the first scales but not for the second")
            })
        })
        .collect();
    out.push(Outcome::implication(a.local(Strong), b.local(Strong), || {
        "strongly local for the first scales but not for the second".into()
    }));
    if global {
        out.push(Outcome::implication(a.global(Strong), b.global(Strong), || {
            "strongly global for the first scales but not for the second".into()
        }));
    }
    Outcome::all(out)
}

fn strong_implies_weak(a: &impl Judge) -> Outcome {
    let mut out: Vec<Outcome> = (0..a.n())
        .map(|x| {
            Outcome::implication(a.at(Strong, x), a.at(Weak, x), || format!("strong at {x} but not weak at {x}"))
        })
        .collect();
    out.push(Outcome::implication(a.local(Strong), a.local(Weak), || "strongly but not weakly local".into()));
    out.push(Outcome::implication(a.global(Strong), a.global(Weak), || "strongly but not weakly global".into()));
    Outcome::all(out)
}

/// Claims comparing scaled notions for trivial (or base-generated) scales
/// with classical continuity.
fn classical(id: PropertyId, a: &impl Judge, x_space: &FiniteSpace, y_space: &FiniteSpace, table: &[PointId]) -> Outcome {
    let cont = oracle::continuous(x_space, y_space, table);
    let cont_at = |x: usize| oracle::continuous_at(x_space, y_space, table, PointId(x));
    let strong_at_implies = || {
        Outcome::all((0..a.n()).map(|x| {
            Outcome::implication(a.at(Strong, x), cont_at(x), || {
                format!("strong at {x} but not classically continuous at {x}")
            })
        }))
    };
    match id {
        PropertyId::L1 => Outcome::all([
            Outcome::equivalence(a.global(Strong), cont, || {
                format!("strongly global = {}, continuous = {cont}", a.global(Strong))
            }),
            strong_at_implies(),
        ]),
        PropertyId::L2 => Outcome::equivalence(a.local(Strong), cont, || {
            format!("strongly local = {}, continuous = {cont}", a.local(Strong))
        }),
        PropertyId::L5 => Outcome::all((0..a.n()).map(|x| {
            Outcome::equivalence(a.at(Weak, x), cont_at(x), || {
                format!("weak at {x} = {}, continuous at {x} = {}", a.at(Weak, x), cont_at(x))
            })
        })),
        PropertyId::L6 => Outcome::equivalence(a.local(Weak), cont, || {
            format!("weakly local = {}, continuous = {cont}", a.local(Weak))
        }),
        PropertyId::C16 => Outcome::implication(cont, a.local(Strong) && a.global(Strong), || {
            format!("continuous but strongly local = {}, strongly global = {}", a.local(Strong), a.global(Strong))
        }),
        PropertyId::C17 => Outcome::all([
            Outcome::equivalence(a.local(Strong), cont, || {
                format!("strongly local = {}, continuous = {cont}", a.local(Strong))
            }),
            Outcome::equivalence(a.global(Strong), cont, || {
                format!("strongly global = {}, continuous = {cont}", a.global(Strong))
            }),
            strong_at_implies(),
        ]),
        _ => unreachable!("not a classical comparison"),
    }
}

fn local_implies_global(a: &impl Judge, s: Strength) -> Outcome {
    Outcome::implication(a.local(s), a.global(s), || format!("{}ly local but not {}ly global", word(s), word(s)))
}

fn local_iff_global(a: &impl Judge) -> Outcome {
    Outcome::equivalence(a.local(Strong), a.global(Strong), || {
        format!("strongly local = {}, strongly global = {}", a.local(Strong), a.global(Strong))
    })
}

fn search_claim(id: PropertyId, a: &impl Judge) -> Outcome {
    match id {
        PropertyId::PR1 => local_implies_global(a, Weak),
        PropertyId::PR2 => Outcome::implication(a.global(Weak), a.local(Weak), || "weakly global but not weakly local".into()),
        PropertyId::PR3 => Outcome::implication(a.global(Weak), a.global(Strong), || "weakly but not strongly global".into()),
        PropertyId::PR4 => Outcome::all((0..a.n()).map(|x| {
            Outcome::implication(a.at(Weak, x), a.at(Strong, x), || format!("weak but not strong at {x}"))
        })),
        _ => unreachable!("not a search"),
    }
}

fn family_local(a: &impl Judge, family: &[impl Judge]) -> Outcome {
    let left = a.local(Weak);
    let right = family.iter().all(|b| b.local(Weak));
    Outcome::equivalence(left, right, || format!("weakly local for R = {left}, for every Ri = {right}"))
}

fn family_at(a: &impl Judge, family: &[impl Judge], x: usize) -> Outcome {
    let left = a.at(Weak, x);
    let right = family.iter().all(|b| b.at(Weak, x));
    Outcome::equivalence(left, right, || format!("weak at {x} for R = {left}, for every Ri = {right}"))
}

/// Claims on a composite: `f` for `(Q,H)`, `g` for `(R,P)` and `gf` for
/// `(Q,P)`.
fn composite(id: PropertyId, f: &impl Judge, g: &impl Judge, gf: &impl Judge, f_table: &[usize]) -> Outcome {
    let pointwise = || {
        let mut out: Vec<Outcome> = (0..f.n())
            .map(|x| {
                Outcome::implication(f.at(Strong, x) && g.at(Strong, f_table[x]), gf.at(Strong, x), || {
                    format!("f strong at {x}, g strong at {}, gf not strong at {x}", f_table[x])
                })
            })
            .collect();
        out.push(Outcome::implication(f.local(Strong) && g.local(Strong), gf.local(Strong), || {
            "f and g strongly local, gf not".into()
        }));
        Outcome::all(out)
    };
    let global = || {
        Outcome::implication(f.global(Strong) && g.global(Strong), gf.global(Strong), || {
            "f and g strongly global, gf not".into()
        })
    };
    match id {
        PropertyId::T1 => pointwise(),
        PropertyId::T2 => global(),
        PropertyId::P9 => Outcome::all([pointwise(), global()]),
        _ => unreachable!("not a composite claim"),
    }
}

fn scale_claim(id: PropertyId, scale: &Scale) -> Outcome {
    let flags = scale.classify();
    let n = scale.space().n_points();
    let opens: Vec<PointSet> = scale.open_family().sets().collect();
    let inter = oracle::closed_intersections_closed(n, &opens);
    let union = oracle::closed_unions_closed(n, &opens);
    match id {
        PropertyId::P1A => Outcome::equivalence(flags.weak_U, inter, || {
            format!("union-closed = {}, Q-closed sets intersection-closed = {inter}", flags.weak_U)
        }),
        PropertyId::P1B => Outcome::equivalence(flags.weak_I, union, || {
            format!("intersection-closed = {}, Q-closed sets union-closed = {union}", flags.weak_I)
        }),
        PropertyId::C1 => Outcome::equivalence(flags.weak_L, inter && union, || {
            format!("lattice = {}, Q-closed sets closed under both = {}", flags.weak_L, inter && union)
        }),
        PropertyId::EX16 => {
            let t = trivial_scale(scale.space_arc().clone());
            let finer = t.finer(scale).unwrap_or(false);
            if finer {
                Outcome::Hold { premise: true }
            } else {
                Outcome::Fail("the trivial scale is not finer".into())
            }
        }
        _ => unreachable!("not a scale claim"),
    }
}

fn finer_at(finer: Family, coarser: Family) -> bool {
    coarser.sets().all(|a| finer.any_subset_of(a).is_some())
}

fn within(a: &Entry, b: &Entry) -> bool {
    a.scale.tq().is_subset(b.scale.tq()) && a.assignment().iter().zip(b.assignment()).all(|(p, q)| p.is_subset(*q))
}

/// `fam` is a base for `r` at `y`, and `r` is finer than each member at `y`.
fn family_hypothesis_at(r: &[Family], fam: &[&[Family]], y: usize) -> bool {
    let base = r[y].sets().all(|u| fam.iter().any(|ri| ri[y].any_subset_of(u).is_some()));
    let coarser = fam.iter().all(|ri| finer_at(r[y], ri[y]));
    base && coarser
}

/// Splits each `R(y)` among two scales and adds random open supersets; at
/// points other than `focus` (when given) the members are arbitrary.
fn base_family(c: &Entry, focus: Option<usize>, rng: &mut ChaCha8Rng) -> Vec<Entry> {
    let space = c.space();
    let r = c.assignment();
    let mut fam = vec![vec![Family::EMPTY; r.len()]; 2];
    for y in 0..r.len() {
        let nbhds = space.neighborhoods(PointId(y));
        if focus.is_some_and(|f| f != y) {
            for ri in fam.iter_mut() {
                ri[y] = nbhds.sets().filter(|_| rng.gen_bool(0.5)).collect();
            }
            continue;
        }
        for u in r[y].sets() {
            fam[rng.gen_range(0..2)][y].insert(u);
        }
        for ri in fam.iter_mut() {
            for w in nbhds.sets().filter(|w| r[y].any_subset_of(*w).is_some()) {
                if rng.gen_bool(0.3) {
                    ri[y].insert(w);
                }
            }
        }
    }
    fam.into_iter()
        .map(|a| Entry::new(c.topology, Scale::from_assignment(c.scale.space_arc().clone(), a).expect("neighbourhoods")))
        .collect()
}

fn instance_rng(seed: u64, c: &Ctx, salt: u64) -> ChaCha8Rng {
    let mut stream: Vec<u64> = vec![salt, c.d.topology as u64, c.c.topology as u64];
    stream.extend(c.d.assignment().iter().map(|f| f.bits()));
    stream.extend(c.c.assignment().iter().map(|f| f.bits()));
    stream.extend(c.table.iter().map(|p| p.0 as u64));
    universe::rng_for(seed, &stream)
}

/// Entries of one side grouped by point count and topology.
struct ByTopology(Vec<Vec<Vec<Entry>>>);

impl ByTopology {
    fn build(side: Side, cfg: &SweepConfig) -> Result<Self, VerifierError> {
        let mut out = vec![Vec::new()];
        for n in 1..=cfg.max_points {
            let mut slots = vec![Vec::new(); universe::topologies(n)?.len()];
            for e in side_entries(side, n, cfg)? {
                slots[e.topology].push(e);
            }
            out.push(slots);
        }
        Ok(ByTopology(out))
    }

    fn of(&self, e: &Entry) -> &[Entry] {
        &self.0[e.n()][e.topology]
    }
}

fn map_instance(c: &Ctx) -> Instance {
    Instance::Map { map: c.map() }
}

pub(crate) fn run(id: PropertyId, cfg: &SweepConfig, first_only: bool) -> Result<Tally, VerifierError> {
    use PropertyId::*;
    let pairs = |dom, cod| PairSweep::new(dom, cod).first_only(first_only);
    let add = |t: &mut Tally, c: &Ctx, w: u64, o: Outcome| t.add(o, w, || map_instance(c));
    match id {
        P1A | P1B | C1 | EX16 => scale_sweep(cfg, Side::Any, |e, t| {
            t.add(scale_claim(id, &e.scale), 1, || Instance::Scale { scale: e.scale.clone() })
        }),
        L1 | L2 | L5 | L6 => pairs(Side::Trivial, Side::Trivial)
            .run(cfg, |c, w, t| add(t, c, w, classical(id, &own(c), c.d.space(), c.c.space(), c.table))),
        C16 => pairs(Side::Trivial, Side::Any)
            .run(cfg, |c, w, t| add(t, c, w, classical(id, &own(c), c.d.space(), c.c.space(), c.table))),
        C17 => pairs(Side::Trivial, Side::BaseGenerated)
            .run(cfg, |c, w, t| add(t, c, w, classical(id, &own(c), c.d.space(), c.c.space(), c.table))),
        L3 => pairs(Side::Any, Side::Any).run(cfg, |c, w, t| add(t, c, w, strong_implies_weak(&own(c)))),
        L4 => pairs(Side::Trivial, Side::Any).run(cfg, |c, w, t| {
            let o = if c.c.flags.neighborhood_closed {
                Outcome::implication(own(c).local(Weak), own(c).local(Strong), || "weakly but not strongly local".into())
            } else {
                Outcome::Skip
            };
            add(t, c, w, o)
        }),
        P2 | P5 => {
            let s = if id == P2 { Strong } else { Weak };
            pairs(Side::Any, Side::Any).surjective().run(cfg, |c, w, t| add(t, c, w, local_implies_global(&own(c), s)))
        }
        P6 => pairs(Side::Trivial, Side::Any).surjective().run(cfg, |c, w, t| add(t, c, w, local_iff_global(&own(c)))),
        P3 => pairs(Side::Trivial, Side::Any).run(cfg, |c, w, t| add(t, c, w, local_iff_global(&own(c)))),
        P4 => pairs(Side::Any, Side::Any).grouped().run(cfg, |c, w, t| {
            let closed = kernel::closed_characterization(c.pre, c.d.open, c.c.open).is_none();
            let g = own(c).global(Strong);
            add(t, c, w, Outcome::equivalence(g, closed, || format!("strongly global = {g}, closed preimages = {closed}")))
        }),
        PR1 | PR2 | PR3 | PR4 => pairs(Side::Any, Side::Any).run(cfg, |c, w, t| add(t, c, w, search_claim(id, &own(c)))),
        P7A | P8A => {
            let extras = ByTopology::build(if id == P7A { Side::PStructure { connected: false } } else { Side::Any }, cfg)?;
            pairs(Side::Any, Side::Any).run(cfg, |c, w, t| {
                for p in extras.of(c.d) {
                    let hyp = if id == P7A {
                        p.flags.is_F && p.assignment().iter().zip(c.d.assignment()).all(|(a, b)| finer_at(*a, *b))
                    } else {
                        within(c.d, p)
                    };
                    let o = if hyp { transfer(&own(c), &fast(c, p, c.c), true) } else { Outcome::Skip };
                    t.add(o, w, || Instance::MapAndDomain { map: c.map(), other: p.scale.clone() });
                }
            })
        }
        P7B | P8B | C14 => {
            let extras = ByTopology::build(Side::Any, cfg)?;
            let dom = if id == C14 { Side::Trivial } else { Side::Any };
            pairs(dom, Side::Any).run(cfg, |c, w, t| {
                for v in extras.of(c.c) {
                    let hyp = if id == P7B {
                        (c.d.flags.is_F || c.c.flags.is_F)
                            && c.c.assignment().iter().zip(v.assignment()).all(|(a, b)| finer_at(*a, *b))
                    } else {
                        within(v, c.c)
                    };
                    let o = if hyp { transfer(&own(c), &fast(c, c.d, v), id != P7B) } else { Outcome::Skip };
                    t.add(o, w, || Instance::MapAndCodomain { map: c.map(), other: v.scale.clone() });
                }
            })
        }
        C15 => {
            let trivial = ByTopology::build(Side::Trivial, cfg)?;
            pairs(Side::Any, Side::Any).run(cfg, |c, w, t| {
                let tr = &trivial.of(c.d)[0];
                add(t, c, w, transfer(&own(c), &fast(c, tr, c.c), true))
            })
        }
        T3 | C10 => {
            let connected = id == C10;
            pairs(Side::PStructure { connected }, Side::Discrete).run(cfg, |c, w, t| {
                let gens = c.d.generators.as_deref().expect("P-structure entries carry generators");
                let o = if id == T3 {
                    Outcome::all((0..c.n()).map(|x| {
                        let (l, r) = (own(c).at(Weak, x), oracle::constant_on(c.table, gens[x]));
                        Outcome::equivalence(l, r, || format!("weak at {x} = {l}, constant near {x} = {r}"))
                    }))
                } else {
                    let (l, r) = (own(c).local(Weak), oracle::constant_on_components(c.d.space(), c.table));
                    Outcome::equivalence(l, r, || format!("weakly local = {l}, constant on components = {r}"))
                };
                t.add(o, w, || Instance::PStructure { map: c.map(), generators: gens.to_vec() })
            })
        }
        T5 => pairs(Side::Any, Side::Any).run(cfg, |c, w, t| {
            let mut rng = instance_rng(cfg.seed, c, 5);
            let fam = base_family(c.c, None, &mut rng);
            let views: Vec<&[Family]> = fam.iter().map(|e| e.assignment()).collect();
            let hyp = (0..c.c.n()).all(|y| family_hypothesis_at(c.c.assignment(), &views, y));
            let judges: Vec<Fast> = fam.iter().map(|ri| fast(c, c.d, ri)).collect();
            let o = if hyp { family_local(&own(c), &judges) } else { Outcome::Skip };
            t.add(o, w, || Instance::Family {
                map: c.map(),
                family: fam.iter().map(|e| e.scale.clone()).collect(),
                point: None,
            })
        }),
        T6 => pairs(Side::Any, Side::Any).run(cfg, |c, w, t| {
            let mut rng = instance_rng(cfg.seed, c, 6);
            for x in 0..c.n() {
                let y = c.pre.value(x);
                let fam = base_family(c.c, Some(y), &mut rng);
                let views: Vec<&[Family]> = fam.iter().map(|e| e.assignment()).collect();
                let judges: Vec<Fast> = fam.iter().map(|ri| fast(c, c.d, ri)).collect();
                let o = if family_hypothesis_at(c.c.assignment(), &views, y) {
                    family_at(&own(c), &judges, x)
                } else {
                    Outcome::Skip
                };
                t.add(o, w, || Instance::Family {
                    map: c.map(),
                    family: fam.iter().map(|e| e.scale.clone()).collect(),
                    point: Some(PointId(x)),
                })
            }
        }),
        T1 | T2 | P9 => composites(id, cfg),
        BqoaClaim => Ok(bqoa_sweep(cfg)),
    }
}

// Composites.

/// Whether `(H, R)` on one space satisfies the property's hypothesis.
fn middle_ok(id: PropertyId, h: &Entry, r: &Entry) -> bool {
    match id {
        PropertyId::T1 => r.assignment().iter().zip(h.assignment()).all(|(a, b)| a.is_subset(*b)),
        PropertyId::T2 => r.open.is_subset(h.open),
        _ => h.scale == r.scale,
    }
}

struct Triple<'a> {
    q: &'a Entry,
    h: &'a Entry,
    r: &'a Entry,
    p: &'a Entry,
    f: (&'a [PointId], &'a Preimages),
    g: (&'a [PointId], &'a Preimages),
    gf: &'a Preimages,
}

impl Triple<'_> {
    fn outcome(&self, id: PropertyId) -> Outcome {
        if !middle_ok(id, self.h, self.r) {
            return Outcome::Skip;
        }
        let f = Fast { pre: self.f.1, q: self.q, r: self.h };
        let g = Fast { pre: self.g.1, q: self.r, r: self.p };
        let gf = Fast { pre: self.gf, q: self.q, r: self.p };
        let f_table: Vec<usize> = self.f.0.iter().map(|p| p.0).collect();
        composite(id, &f, &g, &gf, &f_table)
    }

    fn instance(&self) -> Instance {
        let f = ScaledMap::new(self.f.0.to_vec(), self.q.scale.clone(), self.h.scale.clone()).expect("total map");
        let g = ScaledMap::new(self.g.0.to_vec(), self.r.scale.clone(), self.p.scale.clone()).expect("total map");
        Instance::Composite { f, g }
    }
}

fn table_code(table: &[PointId], m: usize) -> usize {
    table.iter().rev().fold(0, |acc, p| acc * m + p.0)
}

fn composites(id: PropertyId, cfg: &SweepConfig) -> Result<Tally, VerifierError> {
    let k = cfg.max_points;
    let mut total = Tally::default();
    for nx in 1..=k {
        for ny in 1..=k {
            for nz in 1..=k {
                let part = match cfg.mode {
                    SweepMode::Exhaustive => composites_exhaustive(id, cfg, [nx, ny, nz])?,
                    SweepMode::Sampled => composites_sampled(id, cfg, [nx, ny, nz])?,
                };
                total.absorb(part);
            }
        }
    }
    Ok(total)
}

fn composites_exhaustive(id: PropertyId, cfg: &SweepConfig, [nx, ny, nz]: [usize; 3]) -> Result<Tally, VerifierError> {
    let qs = universe::scaled_spaces(nx, cfg)?;
    let ys = ByTopology::build(Side::Any, &SweepConfig { max_points: ny, ..cfg.clone() })?;
    let middles: Vec<&[Entry]> = ys.0[ny].iter().map(|v| v.as_slice()).collect();
    let ps = universe::scaled_spaces(nz, cfg)?;
    let fs = universe::maps(nx, ny);
    let gs = universe::maps(ny, nz);
    let gfs = universe::maps(nx, nz);
    Ok(Tally::par_over(&qs, |_, q, t| {
        for hs in &middles {
            for h in hs.iter() {
                for r in hs.iter().filter(|r| middle_ok(id, h, r)) {
                    for p in &ps {
                        for (ft, fp) in &fs {
                            for (gt, gp) in &gs {
                                let gf: Vec<PointId> = ft.iter().map(|y| gt[y.0]).collect();
                                let tri = Triple {
                                    q,
                                    h,
                                    r,
                                    p,
                                    f: (ft, fp),
                                    g: (gt, gp),
                                    gf: &gfs[table_code(&gf, nz)].1,
                                };
                                t.add(tri.outcome(id), 1, || tri.instance());
                            }
                        }
                    }
                }
            }
        }
    }))
}

fn random_subfamily(f: Family, rng: &mut ChaCha8Rng) -> Family {
    f.sets().filter(|_| rng.gen_bool(0.5)).collect()
}

/// Draws composites satisfying the hypothesis by construction; half of them
/// choose `H` and `P` among sets whose preimages lie in the domain scale, so
/// that premises often hold.
fn composites_sampled(id: PropertyId, cfg: &SweepConfig, [nx, ny, nz]: [usize; 3]) -> Result<Tally, VerifierError> {
    let tx = universe::topologies(nx)?;
    let ty = universe::topologies(ny)?;
    let tz = universe::topologies(nz)?;
    let draws: Vec<usize> = (0..cfg.scale_budget * cfg.map_budget).collect();
    Ok(Tally::par_over(&draws, |i, _, t| {
        let mut rng = universe::rng_for(cfg.seed, &[0xC0, nx as u64, ny as u64, nz as u64, i as u64]);
        let (xi, yi, zi) = (rng.gen_range(0..tx.len()), rng.gen_range(0..ty.len()), rng.gen_range(0..tz.len()));
        let q = Entry::new(xi, universe::random_scale(&tx[xi], &mut rng));
        let f: Vec<PointId> = (0..nx).map(|_| PointId(rng.gen_range(0..ny))).collect();
        let g: Vec<PointId> = (0..ny).map(|_| PointId(rng.gen_range(0..nz))).collect();
        let (fp, gp) = (Preimages::new(&f, ny), Preimages::new(&g, nz));
        let biased = rng.gen_bool(0.5);
        let y_space = &ty[yi];
        let h_assign: Vec<Family> = (0..ny)
            .map(|y| {
                let nb = y_space.neighborhoods(PointId(y));
                let pool: Family = if biased {
                    nb.sets()
                        .filter(|o| fp.of(PointSet::singleton(PointId(y))).points().all(|x| q.assignment()[x.0].contains(fp.of(*o))))
                        .collect()
                } else {
                    nb
                };
                random_subfamily(pool, &mut rng)
            })
            .collect();
        let h = Entry::new(yi, Scale::from_assignment(y_space.clone(), h_assign.clone()).expect("neighbourhoods"));
        let r = match id {
            PropertyId::P9 => h.clone(),
            PropertyId::T1 => {
                let a = h_assign.iter().map(|f| random_subfamily(*f, &mut rng)).collect();
                Entry::new(yi, Scale::from_assignment(y_space.clone(), a).expect("neighbourhoods"))
            }
            _ => {
                let a = (0..ny).map(|y| random_subfamily(h.open.containing(PointId(y)), &mut rng)).collect();
                Entry::new(yi, Scale::from_assignment(y_space.clone(), a).expect("neighbourhoods"))
            }
        };
        let z_space = &tz[zi];
        let p_assign = (0..nz)
            .map(|z| {
                let nb = z_space.neighborhoods(PointId(z));
                let pool: Family = if biased {
                    nb.sets()
                        .filter(|o| gp.of(PointSet::singleton(PointId(z))).points().all(|y| r.assignment()[y.0].contains(gp.of(*o))))
                        .collect()
                } else {
                    nb
                };
                random_subfamily(pool, &mut rng)
            })
            .collect();
        let p = Entry::new(zi, Scale::from_assignment(z_space.clone(), p_assign).expect("neighbourhoods"));
        let gf: Vec<PointId> = f.iter().map(|y| g[y.0]).collect();
        let gfp = Preimages::new(&gf, nz);
        let tri = Triple { q: &q, h: &h, r: &r, p: &p, f: (&f, &fp), g: (&g, &gp), gf: &gfp };
        t.add(tri.outcome(id), 1, || tri.instance());
    }))
}

// The bounded-set claim on the line.

fn random_line_set(rng: &mut ChaCha8Rng) -> LineSet {
    let pieces = rng.gen_range(1..=3);
    let ivs = (0..pieces).map(|_| {
        let num = |rng: &mut ChaCha8Rng| {
            let mut v = ExactNumber::ratio(rng.gen_range(-40..=40), rng.gen_range(1..=4));
            if rng.gen_bool(0.25) {
                v = &v + &ExactNumber::sqrt2();
            }
            v
        };
        let lo = num(rng);
        if rng.gen_bool(0.15) {
            return Interval::point(lo);
        }
        let hi = &lo + &ExactNumber::ratio(rng.gen_range(1..=40), rng.gen_range(1..=4));
        Interval::new(Bound::Finite(lo), Bound::Finite(hi), rng.gen_bool(0.5), rng.gen_bool(0.5)).expect("lo < hi")
    });
    LineSet::from_intervals(ivs)
}

fn bqoa_scale(rng: &mut ChaCha8Rng) -> IntervalScale {
    let radii = [ExactNumber::ratio(1, 2), ExactNumber::int(1), ExactNumber::int(3), ExactNumber::sqrt2()];
    let a = radii.choose(rng).expect("nonempty").clone();
    IntervalScale::new(Carrier::real_line(), IntervalScaleKind::BQOA { a }).expect("valid scale")
}

fn bqoa_claim(scale: &IntervalScale, set: &Region) -> Result<Outcome, VerifierError> {
    let closed = scale.is_q_open(&scale.carrier().complement_within(set)?);
    Ok(if set.is_empty() {
        let open = scale.is_q_open(set);
        if closed && !open {
            Outcome::Hold { premise: true }
        } else {
            Outcome::Fail(format!("empty set: closed = {closed}, open = {open}"))
        }
    } else if !set.is_bounded() {
        Outcome::Skip
    } else if closed {
        Outcome::Fail(format!("bounded set {set} is closed"))
    } else {
        Outcome::Hold { premise: true }
    })
}

fn bqoa_sweep(cfg: &SweepConfig) -> Tally {
    let draws: Vec<usize> = (0..=cfg.scale_budget * cfg.map_budget).collect();
    Tally::par_over(&draws, |i, _, t| {
        let mut rng = universe::rng_for(cfg.seed, &[0xB0, i as u64]);
        let scale = bqoa_scale(&mut rng);
        let set = if i == 0 { Region::empty() } else { Region::line(random_line_set(&mut rng)) };
        let o = bqoa_claim(&scale, &set).unwrap_or_else(|e| Outcome::Fail(e.to_string()));
        t.add(o, 1, || Instance::Region { scale, set })
    })
}

// Replay through the scaled-map checker.

fn with_domain(map: &ScaledMap, domain: &Scale) -> Result<ScaledMap, VerifierError> {
    Ok(ScaledMap::new(map.table().to_vec(), domain.clone(), map.codomain().clone())?)
}

fn with_codomain(map: &ScaledMap, codomain: &Scale) -> Result<ScaledMap, VerifierError> {
    Ok(ScaledMap::new(map.table().to_vec(), map.domain().clone(), codomain.clone())?)
}

fn is_trivial(s: &Scale) -> bool {
    *s == trivial_scale(s.space_arc().clone())
}

fn scales_within(a: &Scale, b: &Scale) -> bool {
    a.tq().is_subset(b.tq()) && a.space().points().all(|x| a.at(x).is_subset(b.at(x)))
}

/// Evaluates a claim on a recorded instance using the scale API, the
/// scaled-map checker and the classical oracle.
pub(crate) fn evaluate(id: PropertyId, inst: &Instance) -> Result<Outcome, VerifierError> {
    use PropertyId::*;
    let shape = || VerifierError::InstanceShape(id);
    Ok(match (id, inst) {
        (P1A | P1B | C1 | EX16, Instance::Scale { scale }) => scale_claim(id, scale),
        (L1 | L2 | L5 | L6 | C16 | C17, Instance::Map { map }) => {
            let trivial_dom = is_trivial(map.domain());
            let cod_ok = match id {
                C16 => true,
                C17 => {
                    let tr = map.codomain().tq();
                    let space = map.codomain().space();
                    let base = space.opens().sets().all(|o| tr.sets().filter(|s| s.is_subset(o)).fold(PointSet::EMPTY, PointSet::union) == o);
                    base && space.points().all(|y| map.codomain().at(y) == tr.containing(y))
                }
                _ => is_trivial(map.codomain()),
            };
            if !(trivial_dom && cod_ok) {
                return Err(shape());
            }
            let table = map.table().to_vec();
            classical(id, map, map.domain().space(), map.codomain().space(), &table)
        }
        (L3, Instance::Map { map }) => strong_implies_weak(map),
        (L4, Instance::Map { map }) => {
            if !is_trivial(map.domain()) {
                return Err(shape());
            }
            if !map.codomain().classify().neighborhood_closed {
                Outcome::Skip
            } else {
                Outcome::implication(map.local(Weak), map.local(Strong), || "weakly but not strongly local".into())
            }
        }
        (P2 | P5 | P6, Instance::Map { map }) if !map.is_surjective() => Outcome::Skip,
        (P2, Instance::Map { map }) => local_implies_global(map, Strong),
        (P5, Instance::Map { map }) => local_implies_global(map, Weak),
        (P3 | P6, Instance::Map { map }) => {
            if !is_trivial(map.domain()) {
                return Err(shape());
            }
            local_iff_global(map)
        }
        (P4, Instance::Map { map }) => {
            let closed = map.closed_characterization().holds;
            let g = map.global(Strong);
            Outcome::equivalence(g, closed, || format!("strongly global = {g}, closed preimages = {closed}"))
        }
        (PR1 | PR2 | PR3 | PR4, Instance::Map { map }) => search_claim(id, map),
        (P7A | P8A, Instance::MapAndDomain { map, other }) => {
            let hyp = if id == P7A {
                other.classify().is_F && other.finer(map.domain())?
            } else {
                scales_within(map.domain(), other)
            };
            if hyp {
                transfer(map, &with_domain(map, other)?, true)
            } else {
                Outcome::Skip
            }
        }
        (P7B | P8B | C14, Instance::MapAndCodomain { map, other }) => {
            if id == C14 && !is_trivial(map.domain()) {
                return Err(shape());
            }
            let hyp = if id == P7B {
                (map.domain().classify().is_F || map.codomain().classify().is_F) && map.codomain().finer(other)?
            } else {
                scales_within(other, map.codomain())
            };
            if hyp {
                transfer(map, &with_codomain(map, other)?, id != P7B)
            } else {
                Outcome::Skip
            }
        }
        (C15, Instance::Map { map }) => {
            transfer(map, &with_domain(map, &trivial_scale(map.domain().space_arc().clone()))?, true)
        }
        (T3 | C10, Instance::PStructure { map, generators }) => {
            let dom = p_structure(map.domain().space_arc().clone(), generators)?;
            let discrete = FiniteSpace::discrete(map.codomain().space().n_points())?;
            if dom != *map.domain() || *map.codomain() != trivial_scale(Arc::new(discrete)) {
                return Err(shape());
            }
            if id == C10 && !generators.iter().all(|g| map.domain().space().is_connected_subset(*g)) {
                return Err(shape());
            }
            let table = map.table();
            if id == T3 {
                Outcome::all((0..table.len()).map(|x| {
                    let (l, r) = (map.at(Weak, x), oracle::constant_on(table, generators[x]));
                    Outcome::equivalence(l, r, || format!("weak at {x} = {l}, constant near {x} = {r}"))
                }))
            } else {
                let (l, r) = (map.local(Weak), oracle::constant_on_components(map.domain().space(), table));
                Outcome::equivalence(l, r, || format!("weakly local = {l}, constant on components = {r}"))
            }
        }
        (T5 | T6, Instance::Family { map, family, point }) => {
            let r: Vec<Family> = map.codomain().assignment().to_vec();
            let views: Vec<&[Family]> = family.iter().map(|s| s.assignment()).collect();
            let judges = family.iter().map(|s| with_codomain(map, s)).collect::<Result<Vec<_>, _>>()?;
            match (id, point) {
                (T5, None) => {
                    if (0..r.len()).all(|y| family_hypothesis_at(&r, &views, y)) {
                        family_local(map, &judges)
                    } else {
                        Outcome::Skip
                    }
                }
                (T6, Some(x)) => {
                    let y = map.table().get(x.0).ok_or_else(shape)?.0;
                    if family_hypothesis_at(&r, &views, y) {
                        family_at(map, &judges, x.0)
                    } else {
                        Outcome::Skip
                    }
                }
                _ => return Err(shape()),
            }
        }
        (T1 | T2 | P9, Instance::Composite { f, g }) => {
            let comp = compose_scaled(g, f)?;
            let ok = match id {
                T1 => comp.r_within_h(),
                T2 => comp.tr_within_th(),
                _ => comp.middle_h == comp.middle_r,
            };
            if !ok {
                Outcome::Skip
            } else {
                let f_table: Vec<usize> = f.table().iter().map(|p| p.0).collect();
                composite(id, f, g, &comp.map, &f_table)
            }
        }
        (BqoaClaim, Instance::Region { scale, set }) => {
            if !matches!(scale.kind(), IntervalScaleKind::BQOA { .. }) || *scale.carrier() != Carrier::real_line() {
                return Err(shape());
            }
            bqoa_claim(scale, set)?
        }
        _ => return Err(shape()),
    })
}
