use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::continuity::kernel::Preimages;
use crate::continuity::ScaledMap;
use crate::finite_topology::{Family, FiniteSpace, PointId, PointSet};
use crate::scales::{p_structure, trivial_scale, Scale};

use super::universe::{self, Entry};
use super::{Instance, SweepConfig, SweepMode, VerifierError, Violation};

/// Violations kept verbatim in a report; the rest are only counted.
pub const MAX_RECORDED: usize = 5;

pub enum Outcome {
    /// The hypothesis fails.
    Skip,
    /// The claim holds; `premise` records whether it held non-vacuously.
    Hold { premise: bool },
    Fail(String),
}

impl Outcome {
    /// `claim` when the premise holds, else a vacuous pass.
    pub fn implication(premise: bool, conclusion: bool, detail: impl FnOnce() -> String) -> Outcome {
        if premise && !conclusion {
            Outcome::Fail(detail())
        } else {
            Outcome::Hold { premise }
        }
    }

    pub fn equivalence(left: bool, right: bool, detail: impl FnOnce() -> String) -> Outcome {
        if left != right {
            Outcome::Fail(detail())
        } else {
            Outcome::Hold { premise: left }
        }
    }

    /// The first failure among several claims on one instance.
    pub fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        let mut premise = false;
        for o in outcomes {
            match o {
                Outcome::Hold { premise: p } => premise |= p,
                other => return other,
            }
        }
        Outcome::Hold { premise }
    }
}

/// Counts accumulated over one chunk of instances, merged in chunk order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub generated: u64,
    pub tested: u64,
    pub skipped: u64,
    pub nonvacuous: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl Tally {
    /// Records `weight` identical instances with one outcome.
    pub fn add(&mut self, outcome: Outcome, weight: u64, instance: impl FnOnce() -> Instance) {
        self.generated += weight;
        match outcome {
            Outcome::Skip => self.skipped += weight,
            Outcome::Hold { premise } => {
                self.tested += weight;
                if premise {
                    self.nonvacuous += weight;
                }
            }
            Outcome::Fail(certificate) => {
                self.tested += weight;
                self.nonvacuous += weight;
                self.violation_count += weight;
                if self.violations.len() < MAX_RECORDED {
                    self.violations.push(Violation { instance: instance(), certificate });
                }
            }
        }
    }

    pub fn absorb(&mut self, other: Tally) {
        self.generated += other.generated;
        self.tested += other.tested;
        self.skipped += other.skipped;
        self.nonvacuous += other.nonvacuous;
        self.violation_count += other.violation_count;
        let room = MAX_RECORDED.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
    }

    /// Runs `f` on every item concurrently and merges the tallies in item
    /// order.
    pub fn par_over<T: Sync>(items: &[T], f: impl Fn(usize, &T, &mut Tally) + Sync) -> Tally {
        let parts: Vec<Tally> = items
            .par_iter()
            .enumerate()
            .map(|(i, item)| {
                let mut t = Tally::default();
                f(i, item, &mut t);
                t
            })
            .collect();
        parts.into_iter().fold(Tally::default(), |mut acc, t| {
            acc.absorb(t);
            acc
        })
    }
}

/// Which scaled spaces one side of a sweep ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Scales of every topology, enumerated or sampled.
    Any,
    /// The trivial scale of every topology.
    Trivial,
    /// The trivial scale of the discrete space.
    Discrete,
    /// P-structures of every topology, with connected generators when asked.
    PStructure { connected: bool },
    /// Scales whose open sets form a base of the topology, each point taking
    /// the base members around it.
    BaseGenerated,
}

pub fn side_entries(side: Side, n: usize, cfg: &SweepConfig) -> Result<Vec<Entry>, VerifierError> {
    match side {
        Side::Any => universe::scaled_spaces(n, cfg),
        Side::Trivial => universe::trivial_spaces(n),
        Side::Discrete => Ok(vec![Entry::new(0, trivial_scale(Arc::new(FiniteSpace::discrete(n)?)))]),
        Side::PStructure { connected } => {
            let mut out = Vec::new();
            for (t, space) in universe::topologies(n)?.into_iter().enumerate() {
                let mut gens = universe::all_generators(&space, connected);
                if cfg.mode == SweepMode::Sampled && gens.len() > cfg.scale_budget {
                    let mut rng = universe::rng_for(cfg.seed, &[n as u64, t as u64, 0x9E4]);
                    gens = gens.choose_multiple(&mut rng, cfg.scale_budget).cloned().collect();
                }
                for g in gens {
                    let scale = p_structure(space.clone(), &g).expect("generators are neighbourhoods");
                    out.push(Entry::new(t, scale).with_generators(g));
                }
            }
            Ok(out)
        }
        Side::BaseGenerated => {
            let mut out = Vec::new();
            for (t, space) in universe::topologies(n)?.into_iter().enumerate() {
                for base in bases(&space) {
                    let assignment = space.points().map(|y| base.containing(y)).collect();
                    let scale = Scale::from_assignment(space.clone(), assignment).expect("base members are open");
                    out.push(Entry::new(t, scale));
                }
            }
            Ok(out)
        }
    }
}

/// Every family of nonempty open sets from which each open set is a union.
pub fn bases(space: &FiniteSpace) -> Vec<Family> {
    let candidates: Vec<PointSet> = space.opens().sets().filter(|s| !s.is_empty()).collect();
    (0u64..1 << candidates.len())
        .map(|mask| Family::from_sets(candidates.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s)))
        .filter(|b| {
            space.opens().sets().all(|o| b.sets().filter(|s| s.is_subset(o)).fold(PointSet::EMPTY, PointSet::union) == o)
        })
        .collect()
}

/// Entries with identical open families on one topology collapsed into one
/// representative with a multiplicity.
pub fn grouped(entries: Vec<Entry>) -> Vec<(Entry, u64)> {
    let mut out: Vec<(Entry, u64)> = Vec::new();
    let mut keys: std::collections::BTreeMap<(usize, u64), usize> = Default::default();
    for e in entries {
        let key = (e.topology, e.open.bits());
        match keys.get(&key) {
            Some(&i) => out[i].1 += 1,
            None => {
                keys.insert(key, out.len());
                out.push((e, 1));
            }
        }
    }
    out
}

/// One map between two scaled spaces, with the kernel's view of it.
pub struct Ctx<'a> {
    pub d: &'a Entry,
    pub c: &'a Entry,
    pub table: &'a [PointId],
    pub pre: &'a Preimages,
}

impl Ctx<'_> {
    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn map(&self) -> ScaledMap {
        ScaledMap::new(self.table.to_vec(), self.d.scale.clone(), self.c.scale.clone()).expect("sweep maps are total")
    }
}

/// How maps are chosen for a pair sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Maps {
    All,
    Surjective,
}

pub struct PairSweep {
    pub dom: Side,
    pub cod: Side,
    pub maps: Maps,
    /// Collapse scales with equal open families, for claims that only read
    /// open families.
    pub grouped: bool,
    /// Stop after the first size class with a violation.
    pub first_only: bool,
}

impl PairSweep {
    pub fn new(dom: Side, cod: Side) -> Self {
        PairSweep { dom, cod, maps: Maps::All, grouped: false, first_only: false }
    }

    pub fn surjective(mut self) -> Self {
        self.maps = Maps::Surjective;
        self
    }

    pub fn grouped(mut self) -> Self {
        self.grouped = true;
        self
    }

    pub fn first_only(mut self, yes: bool) -> Self {
        self.first_only = yes;
        self
    }

    /// Every size class `(n, m)` with `n, m ≤ max_points`, every domain and
    /// codomain entry and every (or a sampled set of) map, in that order.
    pub fn run(
        &self,
        cfg: &SweepConfig,
        eval: impl Fn(&Ctx, u64, &mut Tally) + Sync,
    ) -> Result<Tally, VerifierError> {
        let mut total = Tally::default();
        let sides = |side: Side, n: usize| -> Result<Vec<(Entry, u64)>, VerifierError> {
            let entries = side_entries(side, n, cfg)?;
            Ok(if self.grouped { grouped(entries) } else { entries.into_iter().map(|e| (e, 1)).collect() })
        };
        for n in 1..=cfg.max_points {
            let doms = sides(self.dom, n)?;
            for m in 1..=cfg.max_points {
                let cods = sides(self.cod, m)?;
                let all_maps: Vec<(Vec<PointId>, Preimages)> = universe::maps(n, m)
                    .into_iter()
                    .filter(|(_, pre)| self.maps == Maps::All || pre.is_surjective())
                    .collect();
                if all_maps.is_empty() {
                    continue;
                }
                let sample = cfg.mode == SweepMode::Sampled && all_maps.len() > cfg.map_budget;
                let part = Tally::par_over(&doms, |di, (d, wd), t| {
                    for (ci, (c, wc)) in cods.iter().enumerate() {
                        let chosen: Vec<&(Vec<PointId>, Preimages)> = if sample {
                            let mut rng =
                                universe::rng_for(cfg.seed, &[n as u64, m as u64, di as u64, ci as u64]);
                            (0..cfg.map_budget).map(|_| &all_maps[rng.gen_range(0..all_maps.len())]).collect()
                        } else {
                            all_maps.iter().collect()
                        };
                        for (table, pre) in chosen {
                            eval(&Ctx { d, c, table, pre }, wd * wc, t);
                        }
                    }
                });
                let found = part.violation_count > 0;
                total.absorb(part);
                if self.first_only && found {
                    return Ok(total);
                }
            }
        }
        Ok(total)
    }
}

/// Runs `eval` on every scaled space of each size.
pub fn scale_sweep(
    cfg: &SweepConfig,
    side: Side,
    eval: impl Fn(&Entry, &mut Tally) + Sync,
) -> Result<Tally, VerifierError> {
    let mut total = Tally::default();
    for n in 1..=cfg.max_points {
        let entries = side_entries(side, n, cfg)?;
        total.absorb(Tally::par_over(&entries, |_, e, t| eval(e, t)));
    }
    Ok(total)
}
