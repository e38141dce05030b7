// Circle diffeomorphisms: composition, inversion and the adjoint action.

use circle_geodesics::{adjoint_action, CircleDiffeo, Mode, PeriodicField};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 64;
    let f = PeriodicField::from_modes(n, &[Mode::sin(1, 0.2), Mode::cos(2, 0.05)])?;
    let phi = CircleDiffeo::new(f)?;
    println!("min 1 + f'            {:.6}", phi.min_slope());

    let inv = phi.inverse()?;
    println!("φ ∘ φ⁻¹ - id          {:.2e}", phi.compose(&inv)?.displacement().sup_norm());

    // Ad of a rotation is a shift
    let c = 0.4;
    let u = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0)])?;
    let shifted = adjoint_action(&CircleDiffeo::rotation(n, c)?, &u)?;
    let want = PeriodicField::from_fn(n, |x| (x - c).cos())?;
    println!("Ad_rot u - u(x - c)   {:.2e}", shifted.sup_distance(&want)?);

    match CircleDiffeo::new(PeriodicField::from_modes(n, &[Mode::sin(1, 1.5)])?) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
