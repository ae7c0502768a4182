//! Boxes whose range enclosure of `f` contains a value.
//!
//! Each box `A_i x B_j x C_k` is replaced by the product of the closed
//! intervals spanned by its segments; `f` is enclosed with interval
//! arithmetic over exact rationals (Horner form for `phi`).

use crate::exact::{Scalar, UniPoly};

use super::{BoxIndex, GroundData};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Interval {
    lo: Scalar,
    hi: Scalar,
}

impl Interval {
    fn point(v: Scalar) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        Interval {
            lo: p.iter().min().cloned().expect("four products"),
            hi: p.into_iter().max().expect("four products"),
        }
    }

    fn square(&self) -> Interval {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let zero = Scalar::default();
        if self.lo <= zero && zero <= self.hi {
            Interval {
                lo: zero,
                hi: a.max(b),
            }
        } else {
            Interval {
                lo: a.clone().min(b.clone()),
                hi: a.max(b),
            }
        }
    }

    fn contains(&self, v: &Scalar) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

fn horner(phi: &UniPoly, x: &Interval) -> Interval {
    phi.coeffs()
        .iter()
        .rev()
        .fold(Interval::point(Scalar::default()), |acc, c| {
            acc.mul(x).add(&Interval::point(c.clone()))
        })
}

fn spans(set: &[Scalar], part: &super::Partition) -> Vec<Interval> {
    (0..part.segments())
        .map(|i| {
            let r = part.range(i);
            Interval {
                lo: set[r.start].clone(),
                hi: set[r.end - 1].clone(),
            }
        })
        .collect()
}

/// Enclosure `[lo, hi]` of `f` over every box, in box order.
fn enclosures(g: &GroundData) -> Vec<(BoxIndex, Interval)> {
    let s = g.sets();
    let xa = spans(s.a(), g.partition_a());
    let yb = spans(s.b(), g.partition_b());
    let zc = spans(s.c(), g.partition_c());
    let phis: Vec<Interval> = xa.iter().map(|x| horner(s.phi(), x)).collect();
    let mut out = Vec::with_capacity(xa.len() * yb.len() * zc.len());
    for (i, x) in xa.iter().enumerate() {
        for (j, y) in yb.iter().enumerate() {
            let first = x.sub(y).square();
            for (k, z) in zc.iter().enumerate() {
                let range = first.add(&phis[i].sub(z).square());
                out.push((BoxIndex::new(i as u32, j as u32, k as u32), range));
            }
        }
    }
    out
}

/// Boxes whose enclosure contains `d`: a superset of the boxes meeting the
/// surface `f = d`.
pub fn surface_boxes(g: &GroundData, d: &Scalar) -> Vec<BoxIndex> {
    enclosures(g)
        .into_iter()
        .filter(|(_, r)| r.contains(d))
        .map(|(b, _)| b)
        .collect()
}

/// Surface-box counts across all values of a sorted image set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceProfile {
    /// `|surface_boxes(d)|` for each `d`, aligned with the input values.
    pub counts: Vec<u64>,
    /// `max_d |surface_boxes(d)|`.
    pub max: u64,
    /// `max / t^2`.
    pub max_ratio: Scalar,
}

/// Counts surface boxes for every value at once: each box contributes to
/// the contiguous run of sorted values inside its enclosure.
pub fn surface_box_counts(g: &GroundData, values: &[Scalar]) -> SurfaceProfile {
    let mut diff = vec![0i64; values.len() + 1];
    for (_, r) in enclosures(g) {
        let lo = values.partition_point(|v| v < &r.lo);
        let hi = values.partition_point(|v| v <= &r.hi);
        if lo < hi {
            diff[lo] += 1;
            diff[hi] -= 1;
        }
    }
    let mut run = 0i64;
    let counts: Vec<u64> = diff[..values.len()]
        .iter()
        .map(|d| {
            run += d;
            run as u64
        })
        .collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    let t2 = (g.t() as u64).pow(2);
    SurfaceProfile {
        max_ratio: Scalar::new(max.into(), t2.into()),
        counts,
        max,
    }
}
