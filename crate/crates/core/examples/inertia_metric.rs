// Inertia operators and the metric they induce.

use circle_geodesics::{InertiaOperator, Mode, PeriodicField};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 16;
    let h = InertiaOperator::helmholtz(n)?;
    println!("helmholtz symbol {:?}", h.symbol());

    let s2 = InertiaOperator::sobolev(n, 2.0)?;
    let u = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0)])?;
    // ⟨cos, cos⟩_A = a(1)·π
    println!("|cos|²  helmholtz {:.12}  sobolev(2) {:.12}", h.inner(&u, &u)?, s2.inner(&u, &u)?);

    let round_trip = h.apply_inverse(&h.apply(&u)?)?;
    println!("A⁻¹A u - u        {:.2e}", round_trip.sup_distance(&u)?);

    let custom = InertiaOperator::from_csv(4, "k,a\n0,1\n1,3\n2,7\n")?;
    println!("custom symbol    {:?}", custom.symbol());

    match InertiaOperator::custom(4, vec![0.0, 1.0, 1.0]) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
