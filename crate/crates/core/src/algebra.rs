//! Lie-algebra operators on vector fields of the circle.
//!
//! Conventions: `ad_u v = u_x v - v_x u`, and the Arnold operator `B` is the
//! bilinear map with `⟨B(u, v), w⟩_A = ⟨u, ad_v w⟩_A` for every `w`, so that
//! `ad^T_u v = B(v, u)` and geodesics solve `u_t = -B(u, u)`.

use crate::error::Result;
use crate::inertia::InertiaOperator;
use crate::spectral::PeriodicField;

/// `ad_u v = u_x v - v_x u`.
pub fn ad(u: &PeriodicField, v: &PeriodicField) -> Result<PeriodicField> {
    u.same_grid(v)?;
    u.derivative().product(v)?.minus(&v.derivative().product(u)?)
}

/// `B(u, v) = A⁻¹{ v·(Au)_x + 2·Au·v_x }`.
///
/// On the diagonal this is the familiar `A⁻¹{ u·(Au)_x + 2·Au·u_x }`.
pub fn arnold_b(a: &InertiaOperator, u: &PeriodicField, v: &PeriodicField) -> Result<PeriodicField> {
    u.same_grid(v)?;
    let m = a.apply(u)?;
    let transport = v.product(&m.derivative())?;
    let stretch = m.product(&v.derivative())?;
    a.apply_inverse(&transport.axpy(2.0, &stretch)?)
}

/// Metric transpose of `ad_u`: `⟨ad^T_u v, w⟩_A = ⟨v, ad_u w⟩_A`.
pub fn ad_transpose(a: &InertiaOperator, u: &PeriodicField, v: &PeriodicField) -> Result<PeriodicField> {
    arnold_b(a, v, u)
}

/// `S(u) = A⁻¹{ [A,u]Du + u[A,D]u - 2·Au·Du }`, evaluated term by term.
pub fn spray_s(a: &InertiaOperator, u: &PeriodicField) -> Result<PeriodicField> {
    let du = u.derivative();
    let au = a.apply(u)?;
    let a_du = a.apply(&du)?;
    // [A, u] Du = A(u Du) - u A(Du)
    let commutator_mult = a.apply(&u.product(&du)?)?.minus(&u.product(&a_du)?)?;
    // u [A, D] u = u (A Du - D Au)
    let commutator_diff = u.product(&a_du.minus(&au.derivative())?)?;
    let sum = commutator_mult
        .plus(&commutator_diff)?
        .axpy(-2.0, &au.product(&du)?)?;
    a.apply_inverse(&sum)
}

/// Levi-Civita connection on right-invariant fields:
/// `∇_u v = -½ ad_u v + ½ ad^T_u v + ½ ad^T_v u`.
pub fn covariant_derivative_id(
    a: &InertiaOperator,
    u: &PeriodicField,
    v: &PeriodicField,
) -> Result<PeriodicField> {
    let sum = ad_transpose(a, u, v)?
        .plus(&ad_transpose(a, v, u)?)?
        .minus(&ad(u, v)?)?;
    Ok(sum.scaled(0.5))
}

/// `E(u) = ½⟨u, u⟩_A`.
pub fn energy(a: &InertiaOperator, u: &PeriodicField) -> Result<f64> {
    Ok(0.5 * a.inner(u, u)?)
}
