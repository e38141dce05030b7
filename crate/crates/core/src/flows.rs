//! Geodesic flows of a right-invariant metric on Diff(S¹).
//!
//! Two pictures of the same geodesic:
//!
//! * Eulerian: the velocity `u(t)` solves the Euler-Arnold equation
//!   `u_t = -B(u, u)`.
//! * Lagrangian: the pair `(φ, v)` solves the spray equation
//!   `φ_t = v`, `v_t = S_φ(v) = (S(v ∘ φ⁻¹)) ∘ φ`.
//!
//! They are linked by `u = v ∘ φ⁻¹` ([`eulerian_velocity`]) and by the
//! evolution map `φ_t = u(t) ∘ φ`, `φ(0) = id` ([`flow_from_velocity`]).
//! All integrators use classical fixed-step RK4.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::algebra::{arnold_b, energy, spray_s};
use crate::diffeo::{compose_field, CircleDiffeo};
use crate::error::{Error, Result};
use crate::inertia::InertiaOperator;
use crate::spectral::{fmt17, PeriodicField};

/// Spectral-tail level above which resampled fields are considered under-resolved.
pub const SPECTRAL_TAIL_WARNING: f64 = 1e-6;

/// A state that RK4 can advance: `state + h·rate` and the weighted average of stage rates.
pub trait Rk4State: Sized {
    type Rate;

    fn advance(&self, rate: &Self::Rate, h: f64) -> Result<Self>;

    /// `(k1 + 2 k2 + 2 k3 + k4) / 6`.
    fn blend(k: [&Self::Rate; 4]) -> Result<Self::Rate>;
}

fn blend_fields(k: [&PeriodicField; 4]) -> Result<PeriodicField> {
    Ok(k[0]
        .axpy(2.0, k[1])?
        .axpy(2.0, k[2])?
        .plus(k[3])?
        .scaled(1.0 / 6.0))
}

impl Rk4State for PeriodicField {
    type Rate = PeriodicField;

    fn advance(&self, rate: &PeriodicField, h: f64) -> Result<Self> {
        self.axpy(h, rate)
    }

    fn blend(k: [&PeriodicField; 4]) -> Result<PeriodicField> {
        blend_fields(k)
    }
}

impl Rk4State for CircleDiffeo {
    type Rate = PeriodicField;

    fn advance(&self, rate: &PeriodicField, h: f64) -> Result<Self> {
        CircleDiffeo::new(self.displacement().axpy(h, rate)?)
    }

    fn blend(k: [&PeriodicField; 4]) -> Result<PeriodicField> {
        blend_fields(k)
    }
}

/// A point `(φ, v)` of the tangent bundle, `v ∈ T_φ Diff(S¹)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SprayState {
    pub phi: CircleDiffeo,
    pub v: PeriodicField,
}

impl SprayState {
    pub fn new(phi: CircleDiffeo, v: PeriodicField) -> Result<Self> {
        v.same_grid(phi.displacement())?;
        Ok(SprayState { phi, v })
    }

    /// `(id, u)`.
    pub fn at_identity(u: PeriodicField) -> Result<Self> {
        Self::new(CircleDiffeo::identity(u.n())?, u)
    }
}

/// Time derivative of a [`SprayState`]: `(φ_t, v_t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SprayRate {
    pub dphi: PeriodicField,
    pub dv: PeriodicField,
}

impl Rk4State for SprayState {
    type Rate = SprayRate;

    fn advance(&self, rate: &SprayRate, h: f64) -> Result<Self> {
        Ok(SprayState {
            phi: self.phi.advance(&rate.dphi, h)?,
            v: self.v.axpy(h, &rate.dv)?,
        })
    }

    fn blend(k: [&SprayRate; 4]) -> Result<SprayRate> {
        Ok(SprayRate {
            dphi: blend_fields([&k[0].dphi, &k[1].dphi, &k[2].dphi, &k[3].dphi])?,
            dv: blend_fields([&k[0].dv, &k[1].dv, &k[2].dv, &k[3].dv])?,
        })
    }
}

fn as_breakdown(err: Error, time: f64) -> Error {
    match err {
        Error::NotMonotone { min_slope } => Error::Breakdown {
            time,
            reason: format!("flow map lost monotonicity, min(1 + f') = {min_slope:e}"),
        },
        Error::NonFinite(_) => Error::Breakdown {
            time,
            reason: "non-finite values".into(),
        },
        Error::InversionFailed { target, .. } => Error::Breakdown {
            time,
            reason: format!("flow map inversion failed near y = {target}"),
        },
        other => other,
    }
}

/// One classical RK4 step of `ds/dt = rhs(t, s)` from time `t`.
///
/// Loss of monotonicity, inversion failure or non-finite values in any stage
/// are reported as [`Error::Breakdown`] stamped with the stage time.
pub fn step_rk4<S, F>(rhs: &mut F, t: f64, state: &S, dt: f64) -> Result<S>
where
    S: Rk4State,
    F: FnMut(f64, &S) -> Result<S::Rate>,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidTimeStep(dt));
    }
    let half = 0.5 * dt;
    let k1 = rhs(t, state).map_err(|e| as_breakdown(e, t))?;
    let s2 = state.advance(&k1, half).map_err(|e| as_breakdown(e, t + half))?;
    let k2 = rhs(t + half, &s2).map_err(|e| as_breakdown(e, t + half))?;
    let s3 = state.advance(&k2, half).map_err(|e| as_breakdown(e, t + half))?;
    let k3 = rhs(t + half, &s3).map_err(|e| as_breakdown(e, t + half))?;
    let s4 = state.advance(&k3, dt).map_err(|e| as_breakdown(e, t + dt))?;
    let k4 = rhs(t + dt, &s4).map_err(|e| as_breakdown(e, t + dt))?;
    let rate = S::blend([&k1, &k2, &k3, &k4])?;
    state.advance(&rate, dt).map_err(|e| as_breakdown(e, t + dt))
}

/// `u_t = -B(u, u)`.
pub fn euler_arnold_rhs(a: &InertiaOperator, u: &PeriodicField) -> Result<PeriodicField> {
    Ok(arnold_b(a, u, u)?.scaled(-1.0))
}

/// `(φ_t, v_t) = (v, S_φ(v))` with `S_φ = R_φ ∘ S ∘ R_{φ⁻¹}`.
pub fn spray_rhs(a: &InertiaOperator, s: &SprayState) -> Result<SprayRate> {
    let u = eulerian_velocity(s)?;
    let accel = compose_field(&spray_s(a, &u)?, &s.phi)?;
    Ok(SprayRate {
        dphi: s.v.clone(),
        dv: accel,
    })
}

/// `u = v ∘ φ⁻¹`.
pub fn eulerian_velocity(s: &SprayState) -> Result<PeriodicField> {
    compose_field(&s.v, &s.phi.inverse()?)
}

/// Diagnostics of one recorded state, always in Eulerian variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationRecord {
    pub energy: f64,
    pub momentum_mean: f64,
    pub l2_norm: f64,
    pub spectral_tail: f64,
}

impl ConservationRecord {
    pub fn eulerian(a: &InertiaOperator, u: &PeriodicField) -> Result<Self> {
        Ok(ConservationRecord {
            energy: energy(a, u)?,
            momentum_mean: a.apply(u)?.mean(),
            l2_norm: u.l2_norm(),
            spectral_tail: u.spectral_tail(),
        })
    }

    pub fn spray(a: &InertiaOperator, s: &SprayState) -> Result<Self> {
        let mut rec = Self::eulerian(a, &eulerian_velocity(s)?)?;
        rec.spectral_tail = rec.spectral_tail.max(s.phi.displacement().spectral_tail());
        Ok(rec)
    }

    fn is_finite(&self) -> bool {
        self.energy.is_finite() && self.momentum_mean.is_finite() && self.l2_norm.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownEvent {
    pub time: f64,
    pub reason: String,
}

/// Recorded states of a fixed-step integration.
#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub records: Vec<ConservationRecord>,
    /// Set when integration stopped early; the last recorded state is the last good one.
    pub breakdown: Option<BreakdownEvent>,
}

impl<S> Trajectory<S> {
    fn new(dt: f64) -> Self {
        Trajectory {
            dt,
            times: Vec::new(),
            states: Vec::new(),
            records: Vec::new(),
            breakdown: None,
        }
    }

    pub fn last_state(&self) -> Option<&S> {
        self.states.last()
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `t,energy,momentum_mean,l2_norm,spectral_tail` at 17 significant digits.
    pub fn diagnostics_csv(&self) -> String {
        let mut out = String::from("t,energy,momentum_mean,l2_norm,spectral_tail\n");
        for (t, r) in self.times.iter().zip(&self.records) {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt17(*t),
                fmt17(r.energy),
                fmt17(r.momentum_mean),
                fmt17(r.l2_norm),
                fmt17(r.spectral_tail)
            );
        }
        out
    }

    pub fn write_diagnostics(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.diagnostics_csv())?;
        Ok(())
    }
}

/// Number of steps for `t_final / dt`, which must be (numerically) an integer.
pub fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidTimeStep(dt));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidTimeGrid(format!("t_final must be positive, got {t_final}")));
    }
    let steps = (t_final / dt).round();
    if steps < 1.0 || (steps * dt - t_final).abs() > 1e-9 * t_final {
        return Err(Error::InvalidTimeGrid(format!(
            "dt = {dt} does not divide t_final = {t_final}"
        )));
    }
    Ok(steps as usize)
}

fn integrate<S, F, D>(
    s0: S,
    t_final: f64,
    dt: f64,
    record_every: usize,
    mut rhs: F,
    mut diagnose: D,
) -> Result<Trajectory<S>>
where
    S: Rk4State + Clone,
    F: FnMut(f64, &S) -> Result<S::Rate>,
    D: FnMut(&S) -> Result<ConservationRecord>,
{
    if record_every == 0 {
        return Err(Error::InvalidTimeGrid("record_every must be at least 1".into()));
    }
    let steps = step_count(t_final, dt)?;
    let mut traj = Trajectory::new(dt);
    let mut warned = false;
    let mut record = |traj: &mut Trajectory<S>, t: f64, s: &S, rec: ConservationRecord| {
        if rec.spectral_tail > SPECTRAL_TAIL_WARNING && !warned {
            log::warn!(
                "spectral tail {:.3e} at t = {t} exceeds {SPECTRAL_TAIL_WARNING:e}; resolution is marginal",
                rec.spectral_tail
            );
            warned = true;
        }
        traj.times.push(t);
        traj.states.push(s.clone());
        traj.records.push(rec);
    };

    let rec0 = diagnose(&s0)?;
    record(&mut traj, 0.0, &s0, rec0);
    let mut state = s0;
    for step in 1..=steps {
        let t = (step - 1) as f64 * dt;
        let next = match step_rk4(&mut rhs, t, &state, dt) {
            Ok(next) => next,
            Err(Error::Breakdown { time, reason }) => {
                traj.breakdown = Some(BreakdownEvent { time, reason });
                return Ok(traj);
            }
            Err(e) => return Err(e),
        };
        state = next;
        if step % record_every == 0 || step == steps {
            let t = step as f64 * dt;
            let rec = match diagnose(&state) {
                Ok(rec) if rec.is_finite() => rec,
                Ok(_) | Err(Error::NonFinite(_)) => {
                    traj.breakdown = Some(BreakdownEvent {
                        time: t,
                        reason: "non-finite diagnostics".into(),
                    });
                    return Ok(traj);
                }
                Err(e) => match as_breakdown(e, t) {
                    Error::Breakdown { time, reason } => {
                        traj.breakdown = Some(BreakdownEvent { time, reason });
                        return Ok(traj);
                    }
                    e => return Err(e),
                },
            };
            record(&mut traj, t, &state, rec);
        }
    }
    Ok(traj)
}

/// RK4 integration of the Euler-Arnold equation.
pub fn integrate_euler_arnold(
    a: &InertiaOperator,
    u0: &PeriodicField,
    t_final: f64,
    dt: f64,
    record_every: usize,
) -> Result<Trajectory<PeriodicField>> {
    u0.same_grid(&PeriodicField::zeros(a.n())?)?;
    integrate(
        u0.clone(),
        t_final,
        dt,
        record_every,
        |_, u: &PeriodicField| euler_arnold_rhs(a, u),
        |u| ConservationRecord::eulerian(a, u),
    )
}

/// RK4 integration of the spray equation; diagnostics use `v ∘ φ⁻¹`.
pub fn integrate_spray(
    a: &InertiaOperator,
    s0: &SprayState,
    t_final: f64,
    dt: f64,
    record_every: usize,
) -> Result<Trajectory<SprayState>> {
    s0.v.same_grid(&PeriodicField::zeros(a.n())?)?;
    integrate(
        s0.clone(),
        t_final,
        dt,
        record_every,
        |_, s: &SprayState| spray_rhs(a, s),
        |s| ConservationRecord::spray(a, s),
    )
}

/// Integrates `φ_t = u(t) ∘ φ`, `φ(0) = id`, and returns `φ(t_final)`.
///
/// `velocity` is queried at the RK4 stage times `t`, `t + dt/2`, `t + dt`.
pub fn flow_from_velocity<F>(mut velocity: F, t_final: f64, dt: f64) -> Result<CircleDiffeo>
where
    F: FnMut(f64) -> Result<PeriodicField>,
{
    let steps = step_count(t_final, dt)?;
    let n = velocity(0.0)?.n();
    let mut rhs = |t: f64, phi: &CircleDiffeo| compose_field(&velocity(t)?, phi);
    let mut phi = CircleDiffeo::identity(n)?;
    for step in 0..steps {
        phi = step_rk4(&mut rhs, step as f64 * dt, &phi, dt)?;
    }
    Ok(phi)
}

/// Velocity fields tabulated on a uniform time grid, served exactly at grid times.
#[derive(Debug, Clone)]
pub struct SampledVelocity {
    spacing: f64,
    fields: Vec<PeriodicField>,
}

impl SampledVelocity {
    pub fn new(spacing: f64, fields: Vec<PeriodicField>) -> Self {
        SampledVelocity { spacing, fields }
    }

    /// Euler-Arnold geodesic from `u0` sampled every `dt / 2`, as needed by
    /// an RK4 flow reconstruction with step `dt`.
    pub fn euler_arnold(
        a: &InertiaOperator,
        u0: &PeriodicField,
        t_final: f64,
        dt: f64,
    ) -> Result<Self> {
        let half = 0.5 * dt;
        let traj = integrate_euler_arnold(a, u0, t_final, half, 1)?;
        if let Some(b) = traj.breakdown {
            return Err(Error::Breakdown {
                time: b.time,
                reason: b.reason,
            });
        }
        Ok(SampledVelocity::new(half, traj.states))
    }

    pub fn at(&self, t: f64) -> Result<PeriodicField> {
        let idx = (t / self.spacing).round();
        if idx < 0.0 || (idx * self.spacing - t).abs() > 1e-9 * self.spacing {
            return Err(Error::MissingSample(t));
        }
        self.fields.get(idx as usize).cloned().ok_or(Error::MissingSample(t))
    }
}

/// Maximum drifts over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationSummary {
    /// `max |E(t) - E(0)| / |E(0)|` (absolute when `|E(0)| < 1e-14`).
    pub energy_drift: f64,
    pub momentum_drift: f64,
    pub max_spectral_tail: f64,
    pub samples: usize,
    pub breakdown: bool,
}

fn drift(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let mut it = values.clone();
    let Some(first) = it.next() else { return 0.0 };
    let max_dev = values.fold(0.0f64, |m, x| m.max((x - first).abs()));
    if first.abs() < 1e-14 {
        max_dev
    } else {
        max_dev / first.abs()
    }
}

pub fn conservation_report<S>(traj: &Trajectory<S>) -> ConservationSummary {
    let recs = &traj.records;
    ConservationSummary {
        energy_drift: drift(recs.iter().map(|r| r.energy)),
        momentum_drift: drift(recs.iter().map(|r| r.momentum_mean)),
        max_spectral_tail: recs.iter().fold(0.0, |m, r| m.max(r.spectral_tail)),
        samples: recs.len(),
        breakdown: traj.breakdown.is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{grid, Mode};
    use std::f64::consts::PI;

    const N: usize = 64;

    fn field(modes: &[Mode]) -> PeriodicField {
        PeriodicField::from_modes(N, modes).unwrap()
    }

    fn helm() -> InertiaOperator {
        InertiaOperator::helmholtz(N).unwrap()
    }

    #[test]
    fn euler_arnold_rhs_examples() {
        let cosx = field(&[Mode::cos(1, 1.0)]);
        let want = field(&[Mode::sin(2, 0.6)]);
        assert!(euler_arnold_rhs(&helm(), &cosx).unwrap().sup_distance(&want).unwrap() < 1e-15);
        let zero = PeriodicField::zeros(N).unwrap();
        assert_eq!(euler_arnold_rhs(&helm(), &zero).unwrap().sup_norm(), 0.0);
        let c = PeriodicField::constant(N, 1.3).unwrap();
        assert!(euler_arnold_rhs(&helm(), &c).unwrap().sup_norm() < 1e-15);
    }

    #[test]
    fn spray_rhs_examples() {
        let a = helm();
        let u = field(&[Mode::new(1, 0.4, 0.3), Mode::cos(3, 0.1)]);
        let r = spray_rhs(&a, &SprayState::at_identity(u.clone()).unwrap()).unwrap();
        assert!(r.dv.sup_distance(&spray_s(&a, &u).unwrap()).unwrap() < 1e-13);
        assert_eq!(r.dphi, u);

        let phi = CircleDiffeo::new(field(&[Mode::sin(2, 0.1)])).unwrap();
        let r = spray_rhs(&a, &SprayState::new(phi, PeriodicField::zeros(N).unwrap()).unwrap()).unwrap();
        assert_eq!(r.dphi.sup_norm(), 0.0);
        assert!(r.dv.sup_norm() < 1e-15);

        let c = 0.35;
        let rot = CircleDiffeo::rotation(N, c).unwrap();
        // S commutes with rotations, so S_φ(cos) = S(cos(· - c))(· + c) = S(cos)
        let r = spray_rhs(&a, &SprayState::new(rot.clone(), field(&[Mode::cos(1, 1.0)])).unwrap()).unwrap();
        assert!(r.dv.sup_distance(&field(&[Mode::sin(2, 0.1)])).unwrap() < 1e-14);
        // with v = cos ∘ φ the acceleration is S(cos) ∘ φ
        let v = PeriodicField::from_fn(N, |x| (x + c).cos()).unwrap();
        let r = spray_rhs(&a, &SprayState::new(rot, v).unwrap()).unwrap();
        let want: Vec<f64> = grid(N).iter().map(|x| 0.1 * (2.0 * (x + c)).sin()).collect();
        let err = r.dv.values().iter().zip(&want).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-14, "{err}");
    }

    #[test]
    fn rk4_zero_rhs_keeps_state() {
        let u = field(&[Mode::new(2, 0.3, 0.2)]);
        let mut rhs = |_: f64, s: &PeriodicField| Ok(PeriodicField::zeros(s.n()).unwrap());
        let next = step_rk4(&mut rhs, 0.0, &u, 0.1).unwrap();
        assert_eq!(next, u);
        assert!(matches!(step_rk4(&mut rhs, 0.0, &u, -1.0), Err(Error::InvalidTimeStep(_))));
    }

    #[test]
    fn rk4_first_step_matches_taylor() {
        let a = helm();
        let u0 = field(&[Mode::cos(1, 1.0)]);
        let dt = 1e-3;
        let mut rhs = |_: f64, u: &PeriodicField| euler_arnold_rhs(&a, u);
        let u1 = step_rk4(&mut rhs, 0.0, &u0, dt).unwrap();
        let taylor = u0.axpy(dt, &field(&[Mode::sin(2, 0.6)])).unwrap();
        assert!(u1.sup_distance(&taylor).unwrap() <= 1e-5);

        let c = PeriodicField::constant(N, 0.9).unwrap();
        let c1 = step_rk4(&mut rhs, 0.0, &c, 0.05).unwrap();
        assert!(c1.sup_distance(&c).unwrap() < 1e-15);
    }

    #[test]
    fn rk4_reports_monotonicity_loss() {
        // φ_t = constant slope field quickly folds the map
        let phi = CircleDiffeo::identity(N).unwrap();
        let push = field(&[Mode::sin(1, 10.0)]);
        let mut rhs = |_: f64, _: &CircleDiffeo| Ok(push.clone());
        match step_rk4(&mut rhs, 2.0, &phi, 0.5) {
            Err(Error::Breakdown { time, .. }) => assert!(time >= 2.0),
            other => panic!("expected breakdown, got {other:?}"),
        }
    }

    #[test]
    fn time_grid_validation() {
        assert_eq!(step_count(1.0, 1e-3).unwrap(), 1000);
        assert!(step_count(1.0, 0.3).is_err());
        assert!(step_count(-1.0, 0.1).is_err());
        assert!(step_count(1.0, 0.0).is_err());
    }

    #[test]
    fn zero_and_constant_eulerian_trajectories() {
        let a = helm();
        let zero = PeriodicField::zeros(N).unwrap();
        let traj = integrate_euler_arnold(&a, &zero, 0.1, 1e-2, 5).unwrap();
        assert_eq!(traj.times.len(), 3);
        assert!(traj.states.iter().all(|u| u.is_zero()));

        let c = 0.8;
        let u0 = PeriodicField::constant(N, c).unwrap();
        let traj = integrate_euler_arnold(&a, &u0, 1.0, 1e-2, 10).unwrap();
        let e_exact = 0.5 * a.symbol()[0] * c * c * 2.0 * PI;
        for (u, r) in traj.states.iter().zip(&traj.records) {
            assert!(u.sup_distance(&u0).unwrap() < 1e-15);
            assert!((r.energy - e_exact).abs() < 1e-14);
        }
        let summary = conservation_report(&traj);
        assert_eq!(summary.energy_drift, 0.0);
        assert_eq!(summary.momentum_drift, 0.0);
        assert!(!summary.breakdown);
    }

    #[test]
    fn zero_trajectory_report_guards_division() {
        let traj = integrate_euler_arnold(&helm(), &PeriodicField::zeros(N).unwrap(), 0.1, 1e-2, 1).unwrap();
        let s = conservation_report(&traj);
        assert_eq!(s.energy_drift, 0.0);
        assert_eq!(s.momentum_drift, 0.0);
        assert_eq!(s.samples, 11);
    }

    #[test]
    fn frozen_and_rotating_spray() {
        let a = helm();
        let s0 = SprayState::at_identity(PeriodicField::zeros(N).unwrap()).unwrap();
        let traj = integrate_spray(&a, &s0, 0.05, 1e-2, 1).unwrap();
        assert!(traj.states.iter().all(|s| s.phi.displacement().is_zero() && s.v.is_zero()));

        let c = 0.6;
        let s0 = SprayState::at_identity(PeriodicField::constant(N, c).unwrap()).unwrap();
        let traj = integrate_spray(&a, &s0, 0.5, 1e-2, 10).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            assert!(s.phi.displacement().values().iter().all(|f| (f - c * t).abs() < 1e-14));
            assert!(s.v.values().iter().all(|v| (v - c).abs() < 1e-15));
        }
    }

    #[test]
    fn eulerian_velocity_examples() {
        let u = field(&[Mode::new(2, 0.3, 0.7)]);
        let s = SprayState::at_identity(u.clone()).unwrap();
        assert!(eulerian_velocity(&s).unwrap().sup_distance(&u).unwrap() < 1e-13);

        let c = 0.4;
        let s = SprayState::new(CircleDiffeo::rotation(N, c).unwrap(), field(&[Mode::cos(1, 1.0)])).unwrap();
        let want: Vec<f64> = grid(N).iter().map(|x| (x - c).cos()).collect();
        let got = eulerian_velocity(&s).unwrap();
        let err = got.values().iter().zip(&want).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-14);

        let phi = CircleDiffeo::new(field(&[Mode::new(1, 0.1, 0.15), Mode::sin(2, 0.05)])).unwrap();
        let v = compose_field(&u, &phi).unwrap();
        let back = eulerian_velocity(&SprayState::new(phi, v).unwrap()).unwrap();
        assert!(back.sup_distance(&u).unwrap() <= 1e-9);
    }

    #[test]
    fn flow_of_simple_velocities() {
        let zero = PeriodicField::zeros(N).unwrap();
        let phi = flow_from_velocity(|_| Ok(zero.clone()), 1.0, 0.1).unwrap();
        assert!(phi.displacement().is_zero());

        let c = PeriodicField::constant(N, 0.7).unwrap();
        let phi = flow_from_velocity(|_| Ok(c.clone()), 1.0, 0.01).unwrap();
        assert!(phi.displacement().values().iter().all(|f| (f - 0.7).abs() < 1e-13));
    }

    #[test]
    fn sampled_velocity_lookup() {
        let fields = (0..5).map(|i| PeriodicField::constant(8, i as f64).unwrap()).collect();
        let table = SampledVelocity::new(0.25, fields);
        assert_eq!(table.at(0.75).unwrap().mean(), 3.0);
        assert!(matches!(table.at(0.3), Err(Error::MissingSample(_))));
        assert!(table.at(2.0).is_err());
    }

    #[test]
    fn diagnostics_csv_layout() {
        let a = helm();
        let traj = integrate_euler_arnold(&a, &field(&[Mode::cos(1, 1.0)]), 0.02, 1e-2, 1).unwrap();
        let csv = traj.diagnostics_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,energy,momentum_mean,l2_norm,spectral_tail");
        assert_eq!(lines.count(), 3);
    }
}
