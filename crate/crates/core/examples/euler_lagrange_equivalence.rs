// Both pictures describe the same geodesic: u(T) = v(T) ∘ φ(T)⁻¹.

use circle_geodesics::{
    eulerian_velocity, flow_from_velocity, integrate_euler_arnold, integrate_spray, InertiaOperator, Mode,
    PeriodicField, SprayState,
};
use circle_geodesics::flows::SampledVelocity;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, t, dt) = (64, 0.5, 1e-3);
    let a = InertiaOperator::helmholtz(n)?;
    let u0 = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0)])?;

    let euler = integrate_euler_arnold(&a, &u0, t, dt, usize::MAX)?;
    let spray = integrate_spray(&a, &SprayState::at_identity(u0.clone())?, t, dt, usize::MAX)?;
    let u = euler.last_state().ok_or("empty")?;
    let s = spray.last_state().ok_or("empty")?;
    println!("|u(T) - v∘φ⁻¹|      {:.2e}", u.sup_distance(&eulerian_velocity(s)?)?);

    // the flow of the Eulerian velocity reproduces φ(T)
    let table = SampledVelocity::euler_arnold(&a, &u0, t, dt)?;
    let phi = flow_from_velocity(|time| table.at(time), t, dt)?;
    println!("|φ_flow - φ_spray|   {:.2e}", phi.displacement().sup_distance(s.phi.displacement())?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
