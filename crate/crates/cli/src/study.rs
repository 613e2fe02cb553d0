//! Convergence and cross-combination studies.

use crate::error::CliError;
use crate::scenario::Scenario;
use lgt_core::integrate::{integrate, IntegratorConfig, Scheme, TrajectoryRecord};
use lgt_core::lgt::{alpha_map, AbsKind, LgtCombo, LocalKind};
use lgt_core::motiongroups::GroupModel;
use rayon::prelude::*;

pub fn run_config(scenario: &Scenario, config: &IntegratorConfig) -> Result<TrajectoryRecord, CliError> {
    let (model, state) = scenario.setup(config);
    Ok(integrate(&model, config, &state)?)
}

/// Largest pose entry difference over all bodies at the final time.
pub fn final_pose_gap(a: &TrajectoryRecord, b: &TrajectoryRecord) -> f64 {
    a.last()
        .q
        .iter()
        .zip(&b.last().q)
        .map(|(qa, qb)| alpha_map(qa).distance(&alpha_map(qb)))
        .fold(0.0, f64::max)
}

/// Final pose and twist discrepancy. Twists are only comparable within one
/// group model, which holds for runs sharing a configuration.
pub fn global_error(a: &TrajectoryRecord, b: &TrajectoryRecord) -> f64 {
    final_pose_gap(a, b).max((&a.last().v - &b.last().v).amax())
}

/// Slope and R² of a least-squares line through (ln h, ln e).
pub fn loglog_fit(h: &[f64], e: &[f64]) -> (f64, f64) {
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    (sxy / sxx, sxy * sxy / (sxx * syy))
}

pub struct Convergence {
    pub h: Vec<f64>,
    pub error: Vec<f64>,
    pub slope: f64,
    pub r2: f64,
}

/// Global error at each h against a reference run at min(h)/10.
pub fn convergence(scenario: &Scenario, hs: &[f64]) -> Result<Convergence, CliError> {
    if hs.is_empty() || hs.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(CliError::schema("--h", "step sizes must be positive"));
    }
    let href = hs.iter().copied().fold(f64::INFINITY, f64::min) / 10.0;
    let mut all: Vec<f64> = hs.to_vec();
    all.push(href);
    let runs: Vec<TrajectoryRecord> = all
        .par_iter()
        .map(|&h| run_config(scenario, &IntegratorConfig { h, ..scenario.config }))
        .collect::<Result<_, _>>()?;
    let (reference, runs) = runs.split_last().unwrap();
    for (h, r) in hs.iter().zip(runs) {
        if (r.last().t - reference.last().t).abs() > 1e-9 * reference.last().t.max(1.0) {
            return Err(CliError::schema(
                "integrator.t_end_s",
                format!("must be a multiple of every step size (h={h} ends at t={})", r.last().t),
            ));
        }
    }
    let error: Vec<f64> = runs.iter().map(|r| global_error(r, reference)).collect();
    let (slope, r2) = loglog_fit(hs, &error);
    Ok(Convergence { h: hs.to_vec(), error, slope, r2 })
}

/// One member of a comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Member {
    Combo(LgtCombo),
    Baseline,
}

impl std::fmt::Display for Member {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Member::Combo(c) => write!(f, "{c}"),
            Member::Baseline => f.write_str("baseline"),
        }
    }
}

impl std::str::FromStr for Member {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "baseline" {
            Ok(Member::Baseline)
        } else {
            s.parse().map(Member::Combo)
        }
    }
}

pub fn default_members() -> Vec<Member> {
    LgtCombo::all().into_iter().map(Member::Combo).chain([Member::Baseline]).collect()
}

pub struct Comparison {
    /// gaps[i][j]: final pose discrepancy between members i and j.
    pub gaps: Vec<Vec<f64>>,
    /// Largest |‖Q‖ − 1|; before renormalization for the baseline.
    pub qnorm_err: Vec<f64>,
}

pub fn compare(scenario: &Scenario, members: &[Member]) -> Result<Comparison, CliError> {
    let base = scenario.config;
    let runs: Vec<TrajectoryRecord> = members
        .par_iter()
        .map(|m| {
            let config = match *m {
                Member::Combo(combo) => IntegratorConfig { combo, scheme: Scheme::MuntheKaasRK4, ..base },
                Member::Baseline => {
                    let local = match base.combo.group() {
                        GroupModel::SemiDirect => LocalKind::Screw,
                        GroupModel::DirectProduct => LocalKind::AxisAngleDelta,
                    };
                    IntegratorConfig {
                        combo: LgtCombo::new(AbsKind::QuatPos, local),
                        scheme: Scheme::BaselineQuatRK4,
                        ..base
                    }
                }
            };
            run_config(scenario, &config)
        })
        .collect::<Result<_, _>>()?;
    let gaps = runs.iter().map(|a| runs.iter().map(|b| final_pose_gap(a, b)).collect()).collect();
    let qnorm_err = runs
        .iter()
        .map(|r| {
            let e = r.max_qnorm_err();
            if r.rows[0].qnorm_err.is_empty() {
                f64::NAN
            } else {
                e
            }
        })
        .collect();
    Ok(Comparison { gaps, qnorm_err })
}
