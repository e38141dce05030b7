//! Temporal self-convergence studies of the RK4 integrators.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flows::{integrate_euler_arnold, integrate_spray, step_count, SprayState, Trajectory};
use crate::harness::config::ScenarioConfig;
use crate::spectral::fmt17;

/// Errors below this level are treated as exact and get no order.
pub const EXACT_LEVEL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub dt: f64,
    /// Sup-norm distance of the final state from the finest-`dt` run.
    pub error: f64,
    /// Observed order between this row and the next finer one.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub picture: String,
    pub reference_dt: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// `dt,error,order`; `NA` where no order applies.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dt,error,order\n");
        for r in &self.rows {
            let order = r.order.map(fmt17).unwrap_or_else(|| "NA".into());
            let _ = writeln!(out, "{},{},{}", fmt17(r.dt), fmt17(r.error), order);
        }
        out
    }

    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub eulerian: Option<ConvergenceTable>,
    pub lagrangian: Option<ConvergenceTable>,
}

fn check_dts(config: &ScenarioConfig, dts: &[f64]) -> Result<()> {
    if dts.len() < 3 {
        return Err(Error::config("--dts", "need at least three step sizes"));
    }
    if dts.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::config("--dts", "step sizes must be strictly decreasing"));
    }
    for &dt in dts {
        step_count(config.t_final, dt).map_err(|e| Error::config("--dts", e.to_string()))?;
    }
    Ok(())
}

fn final_state<S: Clone>(traj: Trajectory<S>) -> Result<S> {
    if let Some(b) = traj.breakdown {
        return Err(Error::Breakdown {
            time: b.time,
            reason: b.reason,
        });
    }
    traj.states.last().cloned().ok_or(Error::InvalidTimeGrid("empty trajectory".into()))
}

fn table(picture: &str, dts: &[f64], reference_dt: f64, errors: Vec<f64>) -> ConvergenceTable {
    let mut rows: Vec<ConvergenceRow> = dts
        .iter()
        .zip(&errors)
        .map(|(&dt, &error)| ConvergenceRow {
            dt,
            error,
            order: None,
        })
        .collect();
    for i in 0..rows.len().saturating_sub(1) {
        let (coarse, fine) = (rows[i], rows[i + 1]);
        if coarse.error > EXACT_LEVEL && fine.error > EXACT_LEVEL {
            rows[i].order = Some((coarse.error / fine.error).ln() / (coarse.dt / fine.dt).ln());
        }
    }
    ConvergenceTable {
        picture: picture.into(),
        reference_dt,
        rows,
    }
}

/// Runs the scenario at every `dt` (strictly decreasing) and measures the
/// final-state error of each coarser run against the finest one.
pub fn run_convergence_study(config: &ScenarioConfig, dts: &[f64]) -> Result<ConvergenceStudy> {
    config.validate()?;
    check_dts(config, dts)?;
    let a = config.inertia()?;
    let u0 = config.initial_field()?;
    let (coarse, finest) = dts.split_at(dts.len() - 1);
    let t = config.t_final;

    let eulerian = if config.mode.eulerian() {
        let run = |dt: f64| final_state(integrate_euler_arnold(&a, &u0, t, dt, usize::MAX)?);
        let reference = run(finest[0])?;
        let errors = coarse
            .iter()
            .map(|&dt| run(dt)?.sup_distance(&reference))
            .collect::<Result<Vec<f64>>>()?;
        Some(table("eulerian", coarse, finest[0], errors))
    } else {
        None
    };

    let lagrangian = if config.mode.lagrangian() {
        let s0 = SprayState::at_identity(u0.clone())?;
        let run = |dt: f64| final_state(integrate_spray(&a, &s0, t, dt, usize::MAX)?);
        let reference = run(finest[0])?;
        let errors = coarse
            .iter()
            .map(|&dt| {
                let s = run(dt)?;
                let dphi = s.phi.displacement().sup_distance(reference.phi.displacement())?;
                Ok(dphi.max(s.v.sup_distance(&reference.v)?))
            })
            .collect::<Result<Vec<f64>>>()?;
        Some(table("lagrangian", coarse, finest[0], errors))
    } else {
        None
    };

    Ok(ConvergenceStudy { eulerian, lagrangian })
}

/// Parses a `--dts` list such as `4e-3,2e-3,1e-3,5e-4`.
pub fn parse_dt_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::config("--dts", format!("cannot parse `{s}`")))
        })
        .collect()
}
