//! Ordered pairs of grid triples with equal value in a common box.
//!
//! Strict pairs differ in all three coordinates; relaxed pairs are merely
//! distinct. Within a group of `m` triples the relaxed count is `m (m - 1)`.
//! The strict count is, by inclusion and exclusion over the set `S` of
//! coordinates on which a pair agrees,
//! `sum_S (-1)^|S| sum_{classes of the projection to S} size^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{BoxIndex, LevelSets};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QMode {
    Strict,
    Relaxed,
}

/// Contribution of one `(d, box)` group with at least two triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupContribution {
    pub value_index: usize,
    pub boxi: BoxIndex,
    pub size: u64,
    pub strict: u64,
    pub relaxed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleStats {
    pub strict_ordered: u64,
    pub relaxed_ordered: u64,
    pub table: Vec<GroupContribution>,
}

impl QuadrupleStats {
    pub fn count(&self, mode: QMode) -> u64 {
        match mode {
            QMode::Strict => self.strict_ordered,
            QMode::Relaxed => self.relaxed_ordered,
        }
    }
}

fn checked(acc: u64, v: u64, what: &'static str) -> Result<u64> {
    acc.checked_add(v).ok_or(Error::CountOverflow(what))
}

/// Ordered pairs in a group that differ in every coordinate.
pub(crate) fn strict_pairs(triples: &[[u32; 3]]) -> u64 {
    let m = triples.len() as i128;
    if m < 2 {
        return 0;
    }
    let mut total = m * m - m;
    let mut keys: Vec<u64> = Vec::with_capacity(triples.len());
    for mask in 1u8..7 {
        keys.clear();
        keys.extend(triples.iter().map(|tr| {
            (0..3).fold(0u64, |acc, c| {
                let part = if mask >> c & 1 == 1 { tr[c] as u64 } else { 0 };
                acc << 21 | part
            })
        }));
        keys.sort_unstable();
        let sum_sq: i128 = keys
            .chunk_by(|x, y| x == y)
            .map(|run| (run.len() as i128).pow(2))
            .sum();
        if mask.count_ones() % 2 == 1 {
            total -= sum_sq;
        } else {
            total += sum_sq;
        }
    }
    total as u64
}

pub fn count_quadruples(ls: &LevelSets) -> Result<QuadrupleStats> {
    let mut stats = QuadrupleStats {
        strict_ordered: 0,
        relaxed_ordered: 0,
        table: Vec::new(),
    };
    for (value_index, group) in ls.all_groups() {
        let m = group.count();
        if m < 2 {
            continue;
        }
        let relaxed = m.checked_mul(m - 1).ok_or(Error::CountOverflow("relaxed pairs"))?;
        let strict = strict_pairs(ls.triples(group));
        stats.relaxed_ordered = checked(stats.relaxed_ordered, relaxed, "relaxed Q")?;
        stats.strict_ordered = checked(stats.strict_ordered, strict, "strict Q")?;
        stats.table.push(GroupContribution {
            value_index,
            boxi: group.boxi,
            size: m,
            strict,
            relaxed,
        });
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, Scalar, UniPoly};
    use crate::expansion::{eval_f, level_sets, related, GroundData, GroundSets};
    use proptest::prelude::*;

    /// Enumerates all ordered pairs of grid triples.
    fn brute_force(g: &GroundData) -> (u64, u64) {
        let s = g.sets();
        let mut grid: Vec<([&Scalar; 3], Scalar)> = Vec::new();
        for a in s.a() {
            for b in s.b() {
                for c in s.c() {
                    grid.push(([a, b, c], eval_f(a, b, c, s.phi())));
                }
            }
        }
        let seg = |set: &[Scalar], part: &crate::expansion::Partition, x: &Scalar| {
            part.segment_of(set.binary_search(x).unwrap())
        };
        let (mut strict, mut relaxed) = (0, 0);
        for (p, fp) in &grid {
            for (q, fq) in &grid {
                if fp != fq || p == q {
                    continue;
                }
                let same_box = seg(s.a(), g.partition_a(), p[0]) == seg(s.a(), g.partition_a(), q[0])
                    && seg(s.b(), g.partition_b(), p[1]) == seg(s.b(), g.partition_b(), q[1])
                    && seg(s.c(), g.partition_c(), p[2]) == seg(s.c(), g.partition_c(), q[2]);
                if same_box {
                    relaxed += 1;
                }
                let rel = related(p[0], q[0], s.a(), g.partition_a()).unwrap()
                    && related(p[1], q[1], s.b(), g.partition_b()).unwrap()
                    && related(p[2], q[2], s.c(), g.partition_c()).unwrap();
                if rel {
                    strict += 1;
                }
            }
        }
        (strict, relaxed)
    }

    fn stats_of(g: &GroundData) -> QuadrupleStats {
        count_quadruples(&level_sets(g).unwrap()).unwrap()
    }

    #[test]
    fn two_point_example() {
        let sets =
            GroundSets::uniform(vec![int(0), int(1)], UniPoly::from_ints(&[0, 0, 0, 1])).unwrap();
        let g = GroundData::new(sets, 1, 1).unwrap();
        let st = stats_of(&g);
        assert_eq!((st.strict_ordered, st.relaxed_ordered), (8, 16));
        assert_eq!(brute_force(&g), (8, 16));
        assert_eq!(st.count(QMode::Strict), 8);
    }

    #[test]
    fn singleton_segments_give_nothing() {
        let sets = GroundSets::uniform((1..=5).map(int).collect(), UniPoly::from_ints(&[0, 0, 0, 1]))
            .unwrap();
        let st = stats_of(&GroundData::new(sets, 1, 5).unwrap());
        assert_eq!((st.strict_ordered, st.relaxed_ordered), (0, 0));
    }

    #[test]
    fn strict_pairs_small_groups() {
        assert_eq!(strict_pairs(&[[0, 0, 0], [1, 1, 1]]), 2);
        assert_eq!(strict_pairs(&[[0, 0, 0], [1, 0, 1]]), 0);
        assert_eq!(strict_pairs(&[[0, 0, 0], [1, 1, 1], [1, 2, 2]]), 4);
    }

    fn instance() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>, usize, u8)> {
        (1usize..=8).prop_flat_map(|n| {
            let set = move || {
                prop::collection::btree_set(-6i64..7, n).prop_map(|s| s.into_iter().collect())
            };
            (set(), set(), set(), 1..=n, 0u8..3)
        })
    }

    fn phi_choice(k: u8) -> UniPoly {
        match k {
            0 => UniPoly::from_ints(&[0, 0, 0, 1]),
            1 => UniPoly::from_ints(&[0, 0, 1, 1]),
            _ => UniPoly::from_ints(&[0, 1, 0, 0, 1]),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn grouping_matches_brute_force((a, b, c, t, k) in instance()) {
            let sets = GroundSets::new(
                a.into_iter().map(int).collect(),
                b.into_iter().map(int).collect(),
                c.into_iter().map(int).collect(),
                phi_choice(k),
            ).unwrap();
            let g = GroundData::new(sets, 1, t).unwrap();
            let st = stats_of(&g);
            prop_assert_eq!((st.strict_ordered, st.relaxed_ordered), brute_force(&g));
            prop_assert!(st.relaxed_ordered >= st.strict_ordered);
            prop_assert_eq!(st.strict_ordered % 2, 0);
            prop_assert_eq!(st.relaxed_ordered % 2, 0);
        }

        #[test]
        fn coarser_nested_partitions_count_more(set in prop::collection::btree_set(-20i64..21, 8), k in 0u8..3) {
            let sets = GroundSets::uniform(set.into_iter().map(int).collect(), phi_choice(k)).unwrap();
            let mut prev: Option<QuadrupleStats> = None;
            for t in [8usize, 4, 2, 1] {
                let st = stats_of(&GroundData::new(sets.clone(), 1, t).unwrap());
                if let Some(p) = &prev {
                    prop_assert!(st.strict_ordered >= p.strict_ordered);
                    prop_assert!(st.relaxed_ordered >= p.relaxed_ordered);
                }
                prev = Some(st);
            }
        }
    }
}
