// The Arnold operator, the spray nonlinearity and the connection.

use circle_geodesics::harness::FieldSampler;
use circle_geodesics::{ad, arnold_b, covariant_derivative_id, energy, spray_s, InertiaOperator, Mode, PeriodicField};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 64;
    let a = InertiaOperator::helmholtz(n)?;
    let c = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0)])?;

    // B(cos, cos) = -0.6 sin 2x and S(cos) = 0.1 sin 2x for A = 1 - D²
    let b = arnold_b(&a, &c, &c)?;
    let s = spray_s(&a, &c)?;
    let sin2 = PeriodicField::from_modes(n, &[Mode::sin(2, 1.0)])?;
    println!("B(cos,cos) + 0.6 sin 2x  {:.2e}", b.sup_distance(&sin2.scaled(-0.6))?);
    println!("S(cos) - 0.1 sin 2x      {:.2e}", s.sup_distance(&sin2.scaled(0.1))?);
    println!("E(cos)                   {:.15}", energy(&a, &c)?);

    let mut sampler = FieldSampler::new(n, 7);
    let (u, v, w) = (sampler.field()?, sampler.field()?, sampler.field()?);
    let lhs = a.inner(&arnold_b(&a, &u, &v)?, &w)?;
    let rhs = a.inner(&u, &ad(&v, &w)?)?;
    println!("⟨B(u,v),w⟩ - ⟨u,ad_v w⟩  {:.2e}", (lhs - rhs).abs());

    let torsion = covariant_derivative_id(&a, &u, &v)?
        .minus(&covariant_derivative_id(&a, &v, &u)?)?
        .plus(&ad(&u, &v)?)?;
    println!("torsion                  {:.2e}", torsion.sup_norm());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
