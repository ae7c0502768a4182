//! The lower counting chain for quadruples, checked on one instance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{scalar_serde, Scalar};

use super::{
    count_quadruples, heavy_values, level_sets, surface_box_counts, GroundData,
};

/// `lhs >= rhs`, with both sides exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    #[serde(with = "scalar_serde")]
    pub lhs: Scalar,
    #[serde(with = "scalar_serde")]
    pub rhs: Scalar,
}

impl Inequality {
    pub fn new(lhs: Scalar, rhs: Scalar) -> Self {
        Self { lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }

    /// `lhs - rhs`.
    pub fn slack(&self) -> Scalar {
        &self.lhs - &self.rhs
    }
}

/// Heavy-box capture for one heavy value `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeavyStep {
    #[serde(with = "scalar_serde")]
    pub value: Scalar,
    /// `|G_d|`.
    pub level_size: u64,
    /// Boxes with at least `s` triples of `G_d`.
    pub heavy_boxes: usize,
    /// Triples of `G_d` in those boxes.
    pub captured: u64,
    /// `captured >= |G_d| / 2`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerChainReport {
    pub n: usize,
    pub t: usize,
    pub s: u64,
    pub image_size: u64,
    #[serde(with = "scalar_serde")]
    pub heavy_threshold: Scalar,
    pub heavy_count: usize,
    /// `sum_{D'} |G_d| >= (9/10) n^3`.
    pub step_a: Inequality,
    pub step_b: Vec<HeavyStep>,
    pub step_b_passes: usize,
    /// `sum_{d in D'} sum_{heavy boxes} C(|G_d cap box|, 2)`.
    pub chain_pairs: u64,
    pub strict_ordered: u64,
    pub relaxed_ordered: u64,
    /// `relaxed_ordered / 2 >= (9/50) s n^3`.
    pub step_c: Inequality,
    /// `chain_pairs >= (9/50) s n^3`.
    pub step_c_chain: Inequality,
    /// `max_d |surface boxes| / t^2`.
    #[serde(with = "scalar_serde")]
    pub surface_ratio: Scalar,
}

impl LowerChainReport {
    pub fn step_b_all(&self) -> bool {
        self.step_b_passes == self.step_b.len()
    }
}

fn frac(num: u64, den: u64) -> Scalar {
    Scalar::new(num.into(), den.into())
}

pub fn verify_lower_chain(g: &GroundData) -> Result<LowerChainReport> {
    let ls = level_sets(g)?;
    let heavy = heavy_values(&ls);
    let stats = count_quadruples(&ls)?;
    let n3 = g.n_cubed();
    let s = g.s();

    let mut step_b = Vec::with_capacity(heavy.indices.len());
    let mut chain_pairs: u64 = 0;
    for &v in &heavy.indices {
        let level_size = ls.level_size(v);
        let kept: Vec<u64> = ls
            .groups(v)
            .iter()
            .map(|grp| grp.count())
            .filter(|&m| m >= s)
            .collect();
        let captured: u64 = kept.iter().sum();
        for m in &kept {
            chain_pairs = chain_pairs
                .checked_add(m * (m - 1) / 2)
                .ok_or(Error::CountOverflow("chain pairs"))?;
        }
        step_b.push(HeavyStep {
            value: ls.values()[v].clone(),
            level_size,
            heavy_boxes: kept.len(),
            captured,
            holds: 2 * captured >= level_size,
        });
    }
    let target = Scalar::new((9 * s as u128 * n3 as u128).into(), 50.into());
    let profile = surface_box_counts(g, ls.values());
    Ok(LowerChainReport {
        n: g.n(),
        t: g.t(),
        s,
        image_size: ls.len() as u64,
        heavy_threshold: heavy.threshold.clone(),
        heavy_count: heavy.indices.len(),
        step_a: Inequality::new(frac(heavy.mass, 1), frac(9 * n3, 10)),
        step_b_passes: step_b.iter().filter(|b| b.holds).count(),
        step_b,
        chain_pairs,
        strict_ordered: stats.strict_ordered,
        relaxed_ordered: stats.relaxed_ordered,
        step_c: Inequality::new(frac(stats.relaxed_ordered, 2), target.clone()),
        step_c_chain: Inequality::new(frac(chain_pairs, 1), target),
        surface_ratio: profile.max_ratio,
    })
}

/// Incidence bound for `m` points and `n` curves of an `s`-dimensional
/// family, with unit constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SzBound {
    /// `m^{2s/(5s-4)} n^{(5s-6)/(5s-4) + eps}`.
    pub term1: f64,
    /// `m^{2/3} n^{2/3} + m + n`.
    pub term2: f64,
    pub total: f64,
}

pub fn sz_bound(m: u64, n_curves: u64, s_dim: u32, eps: f64) -> Result<SzBound> {
    if s_dim < 2 {
        return Err(Error::InvalidParameter(format!("s_dim must be >= 2, got {s_dim}")));
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidParameter(format!("eps must be >= 0, got {eps}")));
    }
    let (m, n, s) = (m as f64, n_curves as f64, s_dim as f64);
    let den = 5.0 * s - 4.0;
    let term1 = m.powf(2.0 * s / den) * n.powf((5.0 * s - 6.0) / den + eps);
    let term2 = m.powf(2.0 / 3.0) * n.powf(2.0 / 3.0) + m + n;
    Ok(SzBound {
        term1,
        term2,
        total: term1 + term2,
    })
}
