// Geodesics as flow maps: φ_t = v, v_t = S(v ∘ φ⁻¹) ∘ φ.

use circle_geodesics::{integrate_spray, InertiaOperator, Mode, PeriodicField, SprayState};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 64;
    let a = InertiaOperator::helmholtz(n)?;
    let u0 = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0)])?;
    let traj = integrate_spray(&a, &SprayState::at_identity(u0)?, 0.5, 1e-3, 250)?;
    let end = traj.last_state().ok_or("empty trajectory")?;
    println!("φ(T): min 1 + f' = {:.6}", end.phi.min_slope());
    print!("{}", traj.diagnostics_csv());

    // steep data folds: the trajectory is truncated and flagged
    let steep = PeriodicField::from_modes(32, &[Mode::sin(1, -3.0), Mode::sin(3, -1.0)])?;
    let a32 = InertiaOperator::helmholtz(32)?;
    let traj = integrate_spray(&a32, &SprayState::at_identity(steep)?, 3.0, 1e-2, 10)?;
    if let Some(b) = &traj.breakdown {
        println!("breakdown at t = {:.2}: {}", b.time, b.reason);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
