use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::with_evaluator;

use super::{Evaluator, GroundData};

/// Zero-based segment indices `(i, j, k)` of a box `A_i x B_j x C_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxIndex {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl BoxIndex {
    pub fn new(i: u32, j: u32, k: u32) -> Self {
        Self { i, j, k }
    }

    fn code(self, t: usize) -> u64 {
        (self.i as u64 * t as u64 + self.j as u64) * t as u64 + self.k as u64
    }

    fn from_code(code: u64, t: usize) -> Self {
        let t = t as u64;
        Self::new((code / (t * t)) as u32, (code / t % t) as u32, (code % t) as u32)
    }
}

impl fmt::Display for BoxIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.j, self.k)
    }
}

/// Triples of one level set inside one box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxGroup {
    pub boxi: BoxIndex,
    start: usize,
    len: usize,
}

impl BoxGroup {
    pub fn count(&self) -> u64 {
        self.len as u64
    }
}

/// All level sets `G_d`, each split by box.
#[derive(Clone, Debug)]
pub struct LevelSets {
    n: usize,
    t: usize,
    values: Vec<Scalar>,
    group_offsets: Vec<usize>,
    groups: Vec<BoxGroup>,
    triples: Vec<[u32; 3]>,
}

/// Largest `n` for which a grid triple index fits in 32 bits.
pub const LEVEL_SET_MAX_N: usize = 1625;

pub fn level_sets(g: &GroundData) -> Result<LevelSets> {
    if g.n() > LEVEL_SET_MAX_N {
        return Err(Error::Guardrail(format!(
            "level sets need n <= {LEVEL_SET_MAX_N}, got {}",
            g.n()
        )));
    }
    Ok(with_evaluator!(&g.sets().kernel(), e => build(e, g)))
}

fn build<E: Evaluator>(e: &E, g: &GroundData) -> LevelSets {
    let (n, t) = (g.n(), g.t());
    let (pa, pb, pc) = (g.partition_a(), g.partition_b(), g.partition_c());
    let mut recs: Vec<(E::Key, u64)> = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let si = pa.segment_of(i) as u32;
        for j in 0..n {
            let sj = pb.segment_of(j) as u32;
            for k in 0..n {
                let boxi = BoxIndex::new(si, sj, pc.segment_of(k) as u32);
                let tri = ((i * n + j) * n + k) as u64;
                recs.push((e.key(i, j, k), boxi.code(t) << 32 | tri));
            }
        }
    }
    recs.sort_unstable();

    let mut values = Vec::new();
    let mut group_offsets = Vec::new();
    let mut groups: Vec<BoxGroup> = Vec::new();
    let mut triples = Vec::with_capacity(recs.len());
    let mut prev: Option<(&E::Key, u64)> = None;
    for (pos, (key, packed)) in recs.iter().enumerate() {
        let code = packed >> 32;
        let tri = (packed & 0xffff_ffff) as usize;
        let new_value = prev.is_none_or(|(k, _)| k != key);
        if new_value {
            values.push(e.decode(key));
            group_offsets.push(groups.len());
        }
        if new_value || prev.is_some_and(|(_, c)| c != code) {
            groups.push(BoxGroup {
                boxi: BoxIndex::from_code(code, t),
                start: pos,
                len: 0,
            });
        }
        groups.last_mut().expect("group opened above").len += 1;
        triples.push([(tri / (n * n)) as u32, (tri / n % n) as u32, (tri % n) as u32]);
        prev = Some((key, code));
    }
    group_offsets.push(groups.len());
    LevelSets {
        n,
        t,
        values,
        group_offsets,
        groups,
        triples,
    }
}

impl LevelSets {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// The image set `D`, sorted.
    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index_of(&self, d: &Scalar) -> Result<usize> {
        self.values
            .binary_search(d)
            .map_err(|_| Error::UnknownValue(d.to_string()))
    }

    /// Box groups of the `idx`-th value, sorted by box.
    pub fn groups(&self, idx: usize) -> &[BoxGroup] {
        &self.groups[self.group_offsets[idx]..self.group_offsets[idx + 1]]
    }

    /// Every box group of every value.
    pub fn all_groups(&self) -> impl Iterator<Item = (usize, &BoxGroup)> {
        (0..self.len()).flat_map(move |v| self.groups(v).iter().map(move |g| (v, g)))
    }

    /// Grid positions `(i, j, k)` of the triples in a group.
    pub fn triples(&self, group: &BoxGroup) -> &[[u32; 3]] {
        &self.triples[group.start..group.start + group.len]
    }

    /// `|G_d|` for the `idx`-th value.
    pub fn level_size(&self, idx: usize) -> u64 {
        self.groups(idx).iter().map(BoxGroup::count).sum()
    }

    /// `sum_d |G_d|`.
    pub fn total(&self) -> u64 {
        self.triples.len() as u64
    }

    /// Boxes meeting `G_d`, with counts.
    pub fn occupied_boxes(&self, d: &Scalar) -> Result<Vec<(BoxIndex, u64)>> {
        let idx = self.index_of(d)?;
        Ok(self.groups(idx).iter().map(|g| (g.boxi, g.count())).collect())
    }
}

/// `D' = { d : |G_d| >= n^3 / (10 |D|) }` and its mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyValues {
    /// Indices into [`LevelSets::values`].
    pub indices: Vec<usize>,
    /// `n^3 / (10 |D|)`.
    pub threshold: Scalar,
    /// `sum_{d in D'} |G_d|`.
    pub mass: u64,
    /// `mass >= (9/10) n^3`.
    pub holds: bool,
}

pub fn heavy_values(ls: &LevelSets) -> HeavyValues {
    let n3 = (ls.n as u128).pow(3);
    let d = ls.len() as u128;
    let indices: Vec<usize> = (0..ls.len())
        .filter(|&v| 10 * d * ls.level_size(v) as u128 >= n3)
        .collect();
    let mass: u64 = indices.iter().map(|&v| ls.level_size(v)).sum();
    HeavyValues {
        threshold: Scalar::new(n3.into(), (10 * d).into()),
        holds: 10 * mass as u128 >= 9 * n3,
        indices,
        mass,
    }
}
