use circle_geodesics::flows::SampledVelocity;
use circle_geodesics::*;

fn ch(n: usize) -> (InertiaOperator, PeriodicField) {
    let a = InertiaOperator::helmholtz(n).unwrap();
    let u0 = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0), Mode::sin(2, 0.3)]).unwrap();
    (a, u0)
}

#[test]
fn eulerian_energy_and_momentum_are_conserved() {
    let (a, u0) = ch(64);
    let s = conservation_report(&integrate_euler_arnold(&a, &u0, 0.5, 1e-3, 50).unwrap());
    assert!(!s.breakdown);
    assert!(s.energy_drift <= 1e-8, "{s:?}");
    assert!(s.momentum_drift <= 1e-10, "{s:?}");
}

#[test]
fn spray_energy_is_conserved() {
    let a = InertiaOperator::helmholtz(128).unwrap();
    let u0 = PeriodicField::from_modes(128, &[Mode::cos(1, 1.0)]).unwrap();
    let s = conservation_report(&integrate_spray(&a, &SprayState::at_identity(u0).unwrap(), 0.5, 1e-3, 50).unwrap());
    assert!(!s.breakdown);
    assert!(s.energy_drift <= 1e-6, "{s:?}");
    assert!(s.momentum_drift <= 1e-10, "{s:?}");
}

#[test]
fn sobolev_energy_is_conserved() {
    let a = InertiaOperator::sobolev(32, 2.0).unwrap();
    let u0 = PeriodicField::from_modes(32, &[Mode::cos(1, 0.5)]).unwrap();
    let s = conservation_report(&integrate_euler_arnold(&a, &u0, 0.3, 1e-3, 50).unwrap());
    assert!(s.energy_drift <= 1e-8, "{s:?}");
}

#[test]
fn euler_arnold_is_time_reversible() {
    let (a, u0) = ch(64);
    let forward = integrate_euler_arnold(&a, &u0, 0.3, 1e-3, usize::MAX).unwrap();
    let back = integrate_euler_arnold(&a, &forward.last_state().unwrap().scaled(-1.0), 0.3, 1e-3, usize::MAX).unwrap();
    let returned = back.last_state().unwrap().scaled(-1.0);
    assert!(returned.sup_distance(&u0).unwrap() <= 1e-7);
}

#[test]
fn pictures_agree() {
    let (a, u0) = ch(64);
    let u = integrate_euler_arnold(&a, &u0, 0.25, 1e-3, usize::MAX).unwrap();
    let s = integrate_spray(&a, &SprayState::at_identity(u0).unwrap(), 0.25, 1e-3, usize::MAX).unwrap();
    let gap = u.last_state().unwrap().sup_distance(&eulerian_velocity(s.last_state().unwrap()).unwrap()).unwrap();
    assert!(gap <= 1e-6, "{gap:e}");
}

#[test]
fn flow_of_eulerian_velocity_matches_spray() {
    let (a, u0) = ch(64);
    let (t, dt) = (0.25, 1e-3);
    let table = SampledVelocity::euler_arnold(&a, &u0, t, dt).unwrap();
    let phi = flow_from_velocity(|time| table.at(time), t, dt).unwrap();
    let s = integrate_spray(&a, &SprayState::at_identity(u0).unwrap(), t, dt, usize::MAX).unwrap();
    let d = phi.displacement().sup_distance(s.last_state().unwrap().phi.displacement()).unwrap();
    assert!(d <= 1e-6, "{d:e}");
}

#[test]
fn constant_velocity_is_a_rigid_rotation() {
    let n = 32;
    let a = InertiaOperator::sobolev(n, 1.0).unwrap();
    let c = -0.4;
    let u0 = PeriodicField::constant(n, c).unwrap();
    let s = integrate_spray(&a, &SprayState::at_identity(u0.clone()).unwrap(), 1.0, 1e-2, 10).unwrap();
    for (t, st) in s.times.iter().zip(&s.states) {
        let rot = PeriodicField::constant(n, c * t).unwrap();
        assert!(st.phi.displacement().sup_distance(&rot).unwrap() <= 1e-13);
    }
    let phi = flow_from_velocity(|_| Ok(u0.clone()), 1.0, 1e-2).unwrap();
    assert!((phi.displacement().mean() - c).abs() <= 1e-13);

    let e = integrate_euler_arnold(&a, &u0, 1.0, 1e-2, 10).unwrap();
    let want = 0.5 * a.symbol()[0] * c * c * 2.0 * std::f64::consts::PI;
    assert!(e.records.iter().all(|r| (r.energy - want).abs() <= 1e-14));
}

#[test]
fn breakdown_truncates_without_panicking() {
    let a = InertiaOperator::helmholtz(32).unwrap();
    let u0 = PeriodicField::from_modes(32, &[Mode::sin(1, -3.0), Mode::sin(3, -1.0)]).unwrap();
    let traj = integrate_spray(&a, &SprayState::at_identity(u0).unwrap(), 3.0, 1e-2, 10).unwrap();
    let b = traj.breakdown.as_ref().expect("fold expected");
    assert!(b.time < 3.0 && traj.final_time() <= b.time);
    assert!(traj.last_state().unwrap().phi.min_slope() > 0.0);
    assert!(conservation_report(&traj).breakdown);
}

#[test]
fn invalid_steps_are_rejected() {
    let (a, u0) = ch(16);
    assert!(integrate_euler_arnold(&a, &u0, 1.0, -1e-3, 1).is_err());
    assert!(integrate_euler_arnold(&a, &u0, 1.0, 0.3, 1).is_err());
}
