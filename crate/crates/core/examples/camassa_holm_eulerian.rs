// Camassa-Holm as the Euler-Arnold equation u_t = -B(u, u) with A = 1 - D².

use circle_geodesics::{conservation_report, integrate_euler_arnold, InertiaOperator, Mode, PeriodicField};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 64;
    let a = InertiaOperator::helmholtz(n)?;
    let u0 = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0), Mode::sin(2, 0.3)])?;
    let traj = integrate_euler_arnold(&a, &u0, 0.5, 1e-3, 100)?;

    print!("{}", traj.diagnostics_csv());
    let report = conservation_report(&traj);
    println!("energy drift   {:.2e}", report.energy_drift);
    println!("momentum drift {:.2e}", report.momentum_drift);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
