// RK4 self-convergence in both pictures.

use circle_geodesics::harness::{run_convergence_study, ScenarioConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = ScenarioConfig::parse("grid.n = 32\ntime.t_final = 0.2\ninitial.modes = 1 1 0\n")?;
    let study = run_convergence_study(&config, &[4e-2, 2e-2, 1e-2, 5e-3])?;
    for table in [study.eulerian, study.lagrangian].into_iter().flatten() {
        println!("{} (reference dt {})", table.picture, table.reference_dt);
        print!("{}", table.to_csv());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
