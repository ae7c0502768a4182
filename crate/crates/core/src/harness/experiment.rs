//! End-to-end runs: one row per size.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::curves::{family_size, verify_upper_accounting_with, FamilyMode};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::expansion::{verify_lower_chain, GroundData};

use super::{generate_sets, ExperimentConfig};

/// Largest `n` for quadruple counting without `allow_large`.
pub const Q_GUARD_N: usize = 1024;
/// Largest `n` for curve-family accounting without `allow_large`.
pub const CURVE_GUARD_N: usize = 64;

/// Exact scalars as `p/q` strings, empty when absent.
mod opt_scalar {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Scalar>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        match text.as_deref().map(str::trim) {
            None | Some("") => Ok(None),
            Some(t) => crate::exact::parse_scalar(t)
                .map(Some)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Floats with 12 significant digits.
mod opt_approx {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&format!("{x:.11e}")),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        match text.as_deref().map(str::trim) {
            None | Some("") => Ok(None),
            Some(t) => t.parse().map(Some).map_err(serde::de::Error::custom),
        }
    }
}

/// `x` rounded to 12 significant digits, so that it survives the text form.
pub fn approx(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Fail,
    Error,
}

/// One size of an experiment. Column order is the field order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: u64,
    pub generator: String,
    pub seed: u64,
    pub deg_phi: u64,
    pub s: u64,
    pub t: Option<u64>,
    pub image_size: Option<u64>,
    pub p_size: Option<u64>,
    pub family_size: Option<u64>,
    pub q_strict: Option<u64>,
    pub q_relaxed: Option<u64>,
    pub heavy_count: Option<u64>,
    #[serde(with = "opt_scalar")]
    pub step_a_slack: Option<Scalar>,
    pub step_b_passes: Option<u64>,
    pub step_b_total: Option<u64>,
    #[serde(with = "opt_scalar")]
    pub step_c_slack: Option<Scalar>,
    #[serde(with = "opt_scalar")]
    pub step_c_chain_slack: Option<Scalar>,
    #[serde(with = "opt_scalar")]
    pub surface_ratio: Option<Scalar>,
    pub family_mode: Option<String>,
    pub gamma0_size: Option<u64>,
    pub gamma0_hat_size: Option<u64>,
    pub residual_curves: Option<u64>,
    pub incidences: Option<u64>,
    pub q_gamma0_hat: Option<u64>,
    pub q_residual: Option<u64>,
    #[serde(with = "opt_scalar")]
    pub check_a_slack: Option<Scalar>,
    #[serde(with = "opt_scalar")]
    pub check_b_slack: Option<Scalar>,
    #[serde(with = "opt_scalar")]
    pub check_total_slack: Option<Scalar>,
    #[serde(with = "opt_approx")]
    pub sz_bound_approx: Option<f64>,
    #[serde(with = "opt_approx")]
    pub sz_ratio_approx: Option<f64>,
    pub status: RowStatus,
    pub notes: String,
    pub wall_us: u64,
}

/// Column names in output order.
pub const COLUMNS: [&str; 33] = [
    "n",
    "generator",
    "seed",
    "deg_phi",
    "s",
    "t",
    "image_size",
    "p_size",
    "family_size",
    "q_strict",
    "q_relaxed",
    "heavy_count",
    "step_a_slack",
    "step_b_passes",
    "step_b_total",
    "step_c_slack",
    "step_c_chain_slack",
    "surface_ratio",
    "family_mode",
    "gamma0_size",
    "gamma0_hat_size",
    "residual_curves",
    "incidences",
    "q_gamma0_hat",
    "q_residual",
    "check_a_slack",
    "check_b_slack",
    "check_total_slack",
    "sz_bound_approx",
    "sz_ratio_approx",
    "status",
    "notes",
    "wall_us",
];

/// Columns excluded from determinism comparisons.
pub const TIMING_COLUMNS: [&str; 1] = ["wall_us"];

impl ExperimentRow {
    fn empty(n: usize, cfg: &ExperimentConfig) -> Self {
        Self {
            n: n as u64,
            generator: cfg.generator.name().to_string(),
            seed: cfg.seed,
            deg_phi: cfg.phi.degree().unwrap_or(0) as u64,
            s: cfg.s,
            t: None,
            image_size: None,
            p_size: None,
            family_size: None,
            q_strict: None,
            q_relaxed: None,
            heavy_count: None,
            step_a_slack: None,
            step_b_passes: None,
            step_b_total: None,
            step_c_slack: None,
            step_c_chain_slack: None,
            surface_ratio: None,
            family_mode: None,
            gamma0_size: None,
            gamma0_hat_size: None,
            residual_curves: None,
            incidences: None,
            q_gamma0_hat: None,
            q_residual: None,
            check_a_slack: None,
            check_b_slack: None,
            check_total_slack: None,
            sz_bound_approx: None,
            sz_ratio_approx: None,
            status: RowStatus::Ok,
            notes: String::new(),
            wall_us: 0,
        }
    }

    /// The row with timing zeroed.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_us: 0,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentResult {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Ok)
    }
}

fn mode_name(mode: FamilyMode) -> &'static str {
    match mode {
        FamilyMode::Strict => "strict",
        FamilyMode::Relaxed => "relaxed",
    }
}

fn fill_row(row: &mut ExperimentRow, n: usize, cfg: &ExperimentConfig) -> Result<()> {
    if n > Q_GUARD_N && !cfg.allow_large {
        return Err(Error::Guardrail(format!(
            "quadruple counting needs n <= {Q_GUARD_N} without allow_large, got {n}"
        )));
    }
    let sets = generate_sets(&cfg.generator, n, cfg.seed, &cfg.phi)?;
    let g = match cfg.t {
        Some(t) => GroundData::new(sets, cfg.s, t)?,
        None => GroundData::with_chosen_t(sets, cfg.s)?,
    };
    row.t = Some(g.t() as u64);
    row.p_size = Some(match cfg.family {
        FamilyMode::Strict => g.partition_a().related_pairs(),
        FamilyMode::Relaxed => g.partition_a().sizes().iter().map(|&m| (m * m) as u64).sum(),
    });
    row.family_size = Some(family_size(&g, cfg.family));
    row.family_mode = Some(mode_name(cfg.family).to_string());

    let chain = verify_lower_chain(&g)?;
    row.image_size = Some(chain.image_size);
    row.q_strict = Some(chain.strict_ordered);
    row.q_relaxed = Some(chain.relaxed_ordered);
    row.heavy_count = Some(chain.heavy_count as u64);
    row.step_a_slack = Some(chain.step_a.slack());
    row.step_b_passes = Some(chain.step_b_passes as u64);
    row.step_b_total = Some(chain.step_b.len() as u64);
    row.step_c_slack = Some(chain.step_c.slack());
    row.step_c_chain_slack = Some(chain.step_c_chain.slack());
    row.surface_ratio = Some(chain.surface_ratio.clone());
    let mut failed = Vec::new();
    if !chain.step_a.holds() {
        failed.push("heavy-value mass below 9/10 n^3".to_string());
    }

    if cfg.accounting {
        if n > CURVE_GUARD_N && !cfg.allow_large {
            row.notes = format!("accounting skipped: n > {CURVE_GUARD_N} without allow_large");
        } else {
            let acc = verify_upper_accounting_with(&g, cfg.family, cfg.s_dim, cfg.eps)?;
            row.gamma0_size = Some(acc.gamma0.len() as u64);
            row.gamma0_hat_size = Some(acc.gamma0_hat_size);
            row.residual_curves = Some(acc.residual_curves);
            row.incidences = Some(acc.incidences);
            row.q_gamma0_hat = Some(acc.q_gamma0_hat);
            row.q_residual = Some(acc.q_residual);
            row.check_a_slack = Some(acc.check_a.slack());
            row.check_b_slack = Some(acc.check_b.slack());
            row.check_total_slack = Some(acc.check_total.slack());
            row.sz_bound_approx = Some(approx(acc.sz.total));
            row.sz_ratio_approx = Some(approx(acc.sz_ratio));
            if !acc.holds() {
                failed.push("upper accounting".to_string());
                failed.extend(acc.violations.iter().cloned());
            }
        }
    }
    if !failed.is_empty() {
        row.status = RowStatus::Fail;
        let msg = failed.join("; ");
        row.notes = if row.notes.is_empty() {
            msg
        } else {
            format!("{}; {msg}", row.notes)
        };
    }
    Ok(())
}

/// Runs every size of `cfg` in order; failures stay inside their row.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let rows = cfg
        .ns
        .iter()
        .map(|&n| {
            let start = Instant::now();
            let mut row = ExperimentRow::empty(n, cfg);
            if let Err(e) = fill_row(&mut row, n, cfg) {
                row.status = RowStatus::Error;
                row.notes = e.to_string();
            }
            row.wall_us = start.elapsed().as_micros() as u64;
            row
        })
        .collect();
    Ok(ExperimentResult { rows })
}
