//! Point-curve incidences and the upper accounting for quadruples.
//!
//! A quadruple `((a, b, c), (a', b', c'))` with equal `f`-values puts
//! `(a, a')` on the curve of `(b, c, b', c')`. Quadruples whose tuple lies in
//! the exceptional part are bounded directly; the rest are charged to
//! incidences with the residual family.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{BiPoly, Scalar};
use crate::expansion::{
    level_sets, sz_bound, Evaluator, GroundData, Inequality, QMode, SzBound,
};
use crate::with_evaluator;

use super::{
    build_family, multiplicity_classes, point_set_p, CurveRecord, FamilyMode, MultiplicityReport,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceCount {
    pub total: u64,
    pub per_curve: Vec<u64>,
}

/// Exact evaluation of every curve at every point.
pub fn incidences(points: &[(Scalar, Scalar)], curves: &[BiPoly]) -> IncidenceCount {
    let per_curve: Vec<u64> = curves
        .iter()
        .map(|c| points.iter().filter(|(x, y)| c.eval(x, y).is_zero()).count() as u64)
        .collect();
    IncidenceCount {
        total: per_curve.iter().sum(),
        per_curve,
    }
}

/// Incidences of `points` (positions in `A`) with the residual family of
/// `report`.
///
/// A point lies on the curve of `(b, c, b', c')` exactly when the integer
/// keys of `f(a, b, c)` and `f(a', b', c')` agree; a quotient by exceptional
/// components vanishes on a subset of those points, which is then checked
/// by exact evaluation.
pub fn incidences_fast(
    g: &GroundData,
    points: &[(u32, u32)],
    family: &[CurveRecord],
    report: &MultiplicityReport,
) -> IncidenceCount {
    let a = g.sets().a();
    let per_curve: Vec<u64> = with_evaluator!(&g.sets().kernel(), e => {
        report
            .residual
            .iter()
            .map(|r| {
                let [b, c, b2, c2] = family[r.sources[0]].params.positions.map(|v| v as usize);
                points
                    .iter()
                    .filter(|&&(x, y)| {
                        let (x, y) = (x as usize, y as usize);
                        e.key(x, b, c) == e.key(y, b2, c2)
                            && (!r.divided || r.poly.eval(&a[x], &a[y]).is_zero())
                    })
                    .count() as u64
            })
            .collect()
    });
    IncidenceCount {
        total: per_curve.iter().sum(),
        per_curve,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperAccountingReport {
    pub mode: FamilyMode,
    pub n: usize,
    pub t: usize,
    pub deg_phi: usize,
    pub p_size: u64,
    pub family_size: u64,
    /// Exceptional components in `x, x'` notation.
    pub gamma0: Vec<String>,
    pub gamma0_hat_size: u64,
    pub residual_curves: u64,
    pub max_residual_class: usize,
    pub max_residual_sources: usize,
    /// Quadruples of the mode (strict or relaxed), ordered.
    pub q_total: u64,
    pub q_gamma0_hat: u64,
    pub q_residual: u64,
    pub incidences: u64,
    /// `4 deg(phi) n^3 >= q_gamma0_hat`.
    pub check_a: Inequality,
    /// `4 I(P, residual) >= q_residual`.
    pub check_b: Inequality,
    /// `sum_R |sources(R)| I(P, R) >= q_residual`.
    pub check_b_refined: Inequality,
    /// `4 I + 4 deg(phi) n^3 >= q_total`.
    pub check_total: Inequality,
    pub s_dim: u32,
    pub eps: f64,
    pub sz: SzBound,
    /// `q_residual / sz.total`.
    pub sz_ratio: f64,
    pub violations: Vec<String>,
}

impl UpperAccountingReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
            && self.check_a.holds()
            && self.check_b.holds()
            && self.check_b_refined.holds()
            && self.check_total.holds()
    }
}

fn count(v: u64) -> Scalar {
    Scalar::from_integer(v.into())
}

pub fn verify_upper_accounting(g: &GroundData, mode: FamilyMode) -> Result<UpperAccountingReport> {
    verify_upper_accounting_with(g, mode, 4, 0.0)
}

pub fn verify_upper_accounting_with(
    g: &GroundData,
    mode: FamilyMode,
    s_dim: u32,
    eps: f64,
) -> Result<UpperAccountingReport> {
    let family = build_family(g, mode)?;
    let report = multiplicity_classes(&family, g.phi())?;
    let index: HashMap<[u32; 4], usize> = family
        .iter()
        .enumerate()
        .map(|(i, r)| (r.params.positions, i))
        .collect();

    let qmode = match mode {
        FamilyMode::Strict => QMode::Strict,
        FamilyMode::Relaxed => QMode::Relaxed,
    };
    let ls = level_sets(g)?;
    let mut per_tuple = vec![0u64; family.len()];
    for (_, grp) in ls.all_groups() {
        let tri = ls.triples(grp);
        for x in tri {
            for y in tri {
                let admitted = match qmode {
                    QMode::Strict => x[0] != y[0] && x[1] != y[1] && x[2] != y[2],
                    QMode::Relaxed => x != y,
                };
                if !admitted {
                    continue;
                }
                let key = [x[1], x[2], y[1], y[2]];
                let &i = index.get(&key).ok_or_else(|| {
                    Error::NotAMember(format!("tuple {key:?} missing from the family"))
                })?;
                per_tuple[i] += 1;
            }
        }
    }
    let q_total: u64 = per_tuple.iter().sum();
    let q_gamma0_hat: u64 = per_tuple
        .iter()
        .zip(&report.in_gamma0_hat)
        .filter(|(_, &hat)| hat)
        .map(|(q, _)| q)
        .sum();
    let q_residual = q_total - q_gamma0_hat;

    let points = point_set_p(g, mode);
    let inc = incidences_fast(g, &points, &family, &report);
    let weighted: u64 = report
        .residual
        .iter()
        .zip(&inc.per_curve)
        .map(|(r, &i)| r.sources.len() as u64 * i)
        .sum();

    let n3 = g.n_cubed();
    let exceptional_bound = 4 * report.deg_phi as u64 * n3;
    let p_size = points.len() as u64;
    let residual_curves = report.residual.len() as u64;
    let sz = sz_bound(p_size, residual_curves, s_dim, eps)?;
    let sz_ratio = if sz.total > 0.0 {
        q_residual as f64 / sz.total
    } else {
        0.0
    };

    Ok(UpperAccountingReport {
        mode,
        n: g.n(),
        t: g.t(),
        deg_phi: report.deg_phi,
        p_size,
        family_size: family.len() as u64,
        gamma0: report.gamma0.iter().map(|p| p.display_with(["x", "x'"])).collect(),
        gamma0_hat_size: report.gamma0_hat_size() as u64,
        residual_curves,
        max_residual_class: report.max_residual_class,
        max_residual_sources: report.max_residual_sources,
        q_total,
        q_gamma0_hat,
        q_residual,
        incidences: inc.total,
        check_a: Inequality::new(count(exceptional_bound), count(q_gamma0_hat)),
        check_b: Inequality::new(count(4 * inc.total), count(q_residual)),
        check_b_refined: Inequality::new(count(weighted), count(q_residual)),
        check_total: Inequality::new(count(4 * inc.total + exceptional_bound), count(q_total)),
        s_dim,
        eps,
        sz,
        sz_ratio,
        violations: report.violations,
    })
}
