// Band-limited fields: modes, derivatives, dealiased products and quadrature.

use circle_geodesics::{Mode, PeriodicField};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 32;
    let u = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0), Mode::sin(2, 0.3)])?;

    // d/dx (cos x + 0.3 sin 2x) = -sin x + 0.6 cos 2x
    let du = u.derivative();
    let want = PeriodicField::from_fn(n, |x| -x.sin() + 0.6 * (2.0 * x).cos())?;
    println!("derivative error  {:.2e}", du.sup_distance(&want)?);

    // cos x · cos x = (1 + cos 2x)/2, exact after dealiasing
    let c = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0)])?;
    let sq = c.product(&c)?;
    let want = PeriodicField::from_fn(n, |x| 0.5 + 0.5 * (2.0 * x).cos())?;
    println!("product error     {:.2e}", sq.sup_distance(&want)?);

    // ∫ cos² = π, and spectral evaluation off the grid
    println!("∫ cos² x dx       {:.15}", c.inner_l2(&c)?);
    let (value, slope) = u.eval_with_slope(0.1);
    println!("u(0.1) = {value:.12}, u'(0.1) = {slope:.12}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
