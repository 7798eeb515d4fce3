use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::continuity::kernel::Preimages;
use crate::finite_topology::{enumerate_topologies, Family, FiniteSpace, PointId, PointSet};
use crate::scales::{trivial_scale, Scale, StructureFlags};

use super::{SweepConfig, SweepMode, VerifierError};

/// Largest open-set count for which every scale of a topology is enumerated.
pub const MAX_EXHAUSTIVE_OPENS: usize = 6;
/// Largest point count for exhaustive scale enumeration.
pub const MAX_EXHAUSTIVE_POINTS: usize = 3;

/// A scaled space with the data the sweeps read precomputed.
#[derive(Clone, Debug)]
pub struct Entry {
    pub topology: usize,
    pub scale: Scale,
    pub open: Family,
    pub flags: StructureFlags,
    /// The chosen neighbourhoods of a P-structure.
    pub generators: Option<Vec<PointSet>>,
}

impl Entry {
    pub fn new(topology: usize, scale: Scale) -> Self {
        let open = scale.open_family();
        let flags = scale.classify();
        Entry { topology, scale, open, flags, generators: None }
    }

    pub fn with_generators(mut self, generators: Vec<PointSet>) -> Self {
        self.generators = Some(generators);
        self
    }

    pub fn space(&self) -> &FiniteSpace {
        self.scale.space()
    }

    pub fn n(&self) -> usize {
        self.scale.space().n_points()
    }

    pub fn assignment(&self) -> &[Family] {
        self.scale.assignment()
    }
}

/// Topologies on `n` points, shared.
pub fn topologies(n: usize) -> Result<Vec<Arc<FiniteSpace>>, VerifierError> {
    Ok(enumerate_topologies(n)?.into_iter().map(Arc::new).collect())
}

/// Every valid scale on `space`: each `Q(x)` is any family of open
/// neighbourhoods of `x`, and `TQ` is their union. Point 0 varies fastest.
pub fn all_scales(space: &Arc<FiniteSpace>) -> Vec<Scale> {
    let nbhds: Vec<Vec<PointSet>> = space.points().map(|x| space.neighborhoods(x).sets().collect()).collect();
    let sizes: Vec<u64> = nbhds.iter().map(|v| 1u64 << v.len()).collect();
    let total: u64 = sizes.iter().product();
    (0..total)
        .map(|mut code| {
            let assignment = nbhds
                .iter()
                .zip(&sizes)
                .map(|(sets, size)| {
                    let pick = code % size;
                    code /= size;
                    sets.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, s)| *s).collect()
                })
                .collect();
            Scale::from_assignment(space.clone(), assignment).expect("neighbourhood families form a scale")
        })
        .collect()
}

/// A uniformly random valid scale on `space`.
pub fn random_scale(space: &Arc<FiniteSpace>, rng: &mut ChaCha8Rng) -> Scale {
    let assignment = space
        .points()
        .map(|x| space.neighborhoods(x).sets().filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    Scale::from_assignment(space.clone(), assignment).expect("neighbourhood families form a scale")
}

/// A random P-structure: each `O_x` is a random open neighbourhood of `x`,
/// connected when asked.
pub fn random_generators(space: &FiniteSpace, connected: bool, rng: &mut ChaCha8Rng) -> Vec<PointSet> {
    space
        .points()
        .map(|x| {
            let options: Vec<PointSet> = space
                .neighborhoods(x)
                .sets()
                .filter(|s| !connected || space.is_connected_subset(*s))
                .collect();
            *options.choose(rng).expect("the minimal neighbourhood qualifies")
        })
        .collect()
}

/// Every choice of generators `O_x`, connected when asked.
pub fn all_generators(space: &FiniteSpace, connected: bool) -> Vec<Vec<PointSet>> {
    let options: Vec<Vec<PointSet>> = space
        .points()
        .map(|x| {
            space.neighborhoods(x).sets().filter(|s| !connected || space.is_connected_subset(*s)).collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for opts in &options {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<PointSet>| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(*o);
                    v
                })
            })
            .collect();
    }
    out
}

/// Scaled spaces on `n` points for a sweep: every scale of every topology
/// within the exhaustive bounds, or `scale_budget` random scales per
/// topology when sampling.
pub fn scaled_spaces(n: usize, cfg: &SweepConfig) -> Result<Vec<Entry>, VerifierError> {
    let mut out = Vec::new();
    for (t, space) in topologies(n)?.into_iter().enumerate() {
        match cfg.mode {
            SweepMode::Exhaustive => {
                if space.opens().len() > MAX_EXHAUSTIVE_OPENS {
                    continue;
                }
                out.extend(all_scales(&space).into_iter().map(|s| Entry::new(t, s)));
            }
            SweepMode::Sampled => {
                let mut rng = rng_for(cfg.seed, &[n as u64, t as u64, 0x5CA1E]);
                out.extend((0..cfg.scale_budget).map(|_| Entry::new(t, random_scale(&space, &mut rng))));
            }
        }
    }
    Ok(out)
}

/// The trivial scale on every topology with `n` points.
pub fn trivial_spaces(n: usize) -> Result<Vec<Entry>, VerifierError> {
    Ok(topologies(n)?.into_iter().enumerate().map(|(t, s)| Entry::new(t, trivial_scale(s))).collect())
}

/// All maps from `n` to `m` points, as tables.
pub fn all_tables(n: usize, m: usize) -> Vec<Vec<PointId>> {
    let total = m.pow(n as u32);
    (0..total).map(|code| (0..n).map(|i| PointId(code / m.pow(i as u32) % m)).collect()).collect()
}

/// Tables with their preimage data.
pub fn maps(n: usize, m: usize) -> Vec<(Vec<PointId>, Preimages)> {
    all_tables(n, m)
        .into_iter()
        .map(|t| {
            let pre = Preimages::new(&t, m);
            (t, pre)
        })
        .collect()
}

/// Deterministic generator for one stream of a sweep.
pub fn rng_for(seed: u64, stream: &[u64]) -> ChaCha8Rng {
    let mut s = seed ^ 0x9E37_79B9_7F4A_7C15;
    for (i, v) in stream.iter().enumerate() {
        s = s.rotate_left(17) ^ v.wrapping_mul(0xBF58_476D_1CE4_E5B9).wrapping_add(i as u64);
    }
    ChaCha8Rng::seed_from_u64(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_size_within_bounds() {
        let cfg = SweepConfig::exhaustive(3);
        let sizes: Vec<usize> = (1..=3).map(|n| scaled_spaces(n, &cfg).unwrap().len()).collect();
        // Products over points of 2^(number of open neighbourhoods).
        assert_eq!(sizes, vec![2, 36, 4952]);
    }

    #[test]
    fn every_enumerated_scale_is_valid_and_distinct() {
        for space in topologies(2).unwrap() {
            let scales = all_scales(&space);
            assert!(scales.iter().all(Scale::is_valid));
            let mut seen: Vec<_> = scales.iter().map(|s| s.assignment().to_vec()).collect();
            seen.sort_by_key(|v| v.iter().map(|f| f.bits()).collect::<Vec<_>>());
            seen.dedup();
            assert_eq!(seen.len(), scales.len());
        }
    }

    #[test]
    fn generators_are_open_neighbourhoods() {
        for space in topologies(3).unwrap() {
            for g in all_generators(&space, true) {
                for (x, o) in g.iter().enumerate() {
                    assert!(space.is_open(*o) && o.contains(PointId(x)) && space.is_connected_subset(*o));
                }
            }
        }
    }

    #[test]
    fn tables_cover_all_maps() {
        assert_eq!(all_tables(3, 2).len(), 8);
        assert_eq!(all_tables(2, 3)[5], vec![PointId(2), PointId(1)]);
    }
}
