// A full scenario run writing CSVs and summary.json.

use circle_geodesics::harness::{run_scenario, ScenarioConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("circle-geodesics-scenario");
    let text = format!(
        "grid.n = 64\ntime.dt = 2e-3\ntime.t_final = 0.2\ninitial.modes = 1 1 0; 2 0 0.3\noutput.dir = {}\n",
        dir.display()
    );
    let run = run_scenario(&ScenarioConfig::parse(&text)?)?;
    for f in &run.files {
        println!("wrote {}", f.display());
    }
    println!("equivalence gap {:?}", run.summary.equivalence_gap);
    println!("exit code {}", run.exit_code());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
