use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::algebra::{arnold_b, covariant_derivative_id, spray_s};
use crate::error::Result;
use crate::flows::{
    conservation_report, eulerian_velocity, integrate_euler_arnold, integrate_spray, ConservationSummary,
    SprayState,
};
use crate::harness::config::ScenarioConfig;
use crate::inertia::InertiaOperator;
use crate::spectral::PeriodicField;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BREAKDOWN: i32 = 2;
pub const EXIT_IDENTITY_FAILURE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Drifts {
    pub eulerian: Option<PictureDrift>,
    pub lagrangian: Option<PictureDrift>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PictureDrift {
    #[serde(flatten)]
    pub summary: ConservationSummary,
    pub final_time: f64,
    pub breakdown_time: Option<f64>,
    pub breakdown_reason: Option<String>,
}

/// Identity residuals of the initial condition `u0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialResiduals {
    /// `‖S(u0) - (u0·u0_x - B(u0, u0))‖∞`
    pub spray_consistency: f64,
    /// `‖∇_{u0} u0 - B(u0, u0)‖∞`
    pub geodesic_form: f64,
    /// `|⟨B(u0, u0), u0⟩_A|`, the energy rate of the semi-discrete flow
    pub energy_rate: f64,
}

impl InitialResiduals {
    pub fn compute(a: &InertiaOperator, u0: &PeriodicField) -> Result<Self> {
        let b = arnold_b(a, u0, u0)?;
        let advect = u0.product(&u0.derivative())?;
        Ok(InitialResiduals {
            spray_consistency: spray_s(a, u0)?.sup_distance(&advect.minus(&b)?)?,
            geodesic_form: covariant_derivative_id(a, u0, u0)?.sup_distance(&b)?,
            energy_rate: a.inner(&b, u0)?.abs(),
        })
    }
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub config: BTreeMap<String, String>,
    pub drifts: Drifts,
    /// `‖u(T) - v(T) ∘ φ(T)⁻¹‖∞` when both pictures ran to the end.
    pub equivalence_gap: Option<f64>,
    pub breakdown: bool,
    pub residuals: InitialResiduals,
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub summary: RunSummary,
    pub files: Vec<PathBuf>,
    pub final_eulerian: Option<PeriodicField>,
    pub final_spray: Option<SprayState>,
}

impl RunArtifacts {
    pub fn exit_code(&self) -> i32 {
        if self.summary.breakdown {
            EXIT_BREAKDOWN
        } else {
            EXIT_OK
        }
    }
}

fn picture_drift<S>(traj: &crate::flows::Trajectory<S>) -> PictureDrift {
    PictureDrift {
        summary: conservation_report(traj),
        final_time: traj.final_time(),
        breakdown_time: traj.breakdown.as_ref().map(|b| b.time),
        breakdown_reason: traj.breakdown.as_ref().map(|b| b.reason.clone()),
    }
}

/// Integrates the requested pictures and writes the run's files into `output.dir`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunArtifacts> {
    config.validate()?;
    let a = config.inertia()?;
    let u0 = config.initial_field()?;
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();

    let mut write = |name: &str, contents: String| -> Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        files.push(path);
        Ok(())
    };

    let mut drifts = Drifts {
        eulerian: None,
        lagrangian: None,
    };
    let mut final_eulerian = None;
    let mut final_spray = None;
    let mut breakdown = false;

    if config.mode.eulerian() {
        let traj = integrate_euler_arnold(&a, &u0, config.t_final, config.dt, config.record_every)?;
        write("eulerian.csv", traj.diagnostics_csv())?;
        breakdown |= traj.breakdown.is_some();
        drifts.eulerian = Some(picture_drift(&traj));
        if let Some(u) = traj.last_state() {
            if config.snapshots {
                write("eulerian_final.csv", u.to_csv())?;
            }
            if traj.breakdown.is_none() {
                final_eulerian = Some(u.clone());
            }
        }
    }

    if config.mode.lagrangian() {
        let s0 = SprayState::at_identity(u0.clone())?;
        let traj = integrate_spray(&a, &s0, config.t_final, config.dt, config.record_every)?;
        write("lagrangian.csv", traj.diagnostics_csv())?;
        breakdown |= traj.breakdown.is_some();
        drifts.lagrangian = Some(picture_drift(&traj));
        if let Some(s) = traj.last_state() {
            if config.snapshots {
                write("lagrangian_velocity_final.csv", s.v.to_csv())?;
                write("lagrangian_phi_final.csv", s.phi.to_csv())?;
            }
            if traj.breakdown.is_none() {
                final_spray = Some(s.clone());
            }
        }
    }

    let equivalence_gap = match (&final_eulerian, &final_spray) {
        (Some(u), Some(s)) if config.mode == crate::harness::config::RunMode::Both => {
            Some(u.sup_distance(&eulerian_velocity(s)?)?)
        }
        _ => None,
    };

    let summary = RunSummary {
        config: config.to_entries(),
        drifts,
        equivalence_gap,
        breakdown,
        residuals: InitialResiduals::compute(&a, &u0)?,
    };
    write("summary.json", serde_json::to_string_pretty(&summary)? + "\n")?;

    Ok(RunArtifacts {
        summary,
        files,
        final_eulerian,
        final_spray,
    })
}
