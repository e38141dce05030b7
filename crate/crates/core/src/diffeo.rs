//! Orientation-preserving circle diffeomorphisms `φ(x) = x + f(x)`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{fmt17, grid, PeriodicField};

/// Smallest admissible `1 + f'` on the grid.
pub const MONOTONE_MARGIN: f64 = 1e-8;

pub const NEWTON_MAX_ITER: usize = 50;

const NEWTON_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct CircleDiffeo {
    displacement: PeriodicField,
}

impl CircleDiffeo {
    pub fn new(displacement: PeriodicField) -> Result<Self> {
        let min_slope = min_slope(&displacement);
        if !(min_slope >= MONOTONE_MARGIN) {
            return Err(Error::NotMonotone { min_slope });
        }
        Ok(CircleDiffeo { displacement })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(PeriodicField::zeros(n)?)
    }

    pub fn rotation(n: usize, angle: f64) -> Result<Self> {
        Self::new(PeriodicField::constant(n, angle)?)
    }

    pub fn n(&self) -> usize {
        self.displacement.n()
    }

    pub fn displacement(&self) -> &PeriodicField {
        &self.displacement
    }

    pub fn into_displacement(self) -> PeriodicField {
        self.displacement
    }

    /// `min_j (1 + f'(x_j))`.
    pub fn min_slope(&self) -> f64 {
        min_slope(&self.displacement)
    }

    /// `φ(x_j) = x_j + f(x_j)`.
    pub fn grid_image(&self) -> Vec<f64> {
        grid(self.n())
            .into_iter()
            .zip(self.displacement.values())
            .map(|(x, f)| x + f)
            .collect()
    }

    pub fn apply_at(&self, points: &[f64]) -> Vec<f64> {
        let f = self.displacement.evaluate_at(points);
        points.iter().zip(f).map(|(x, f)| x + f).collect()
    }

    /// Solves `x + f(x) = y` for every collocation target `y_j`.
    pub fn inverse(&self) -> Result<CircleDiffeo> {
        let f = &self.displacement;
        let bound = coefficient_bound(f);
        let values = grid(self.n())
            .into_iter()
            .map(|y| solve_monotone(f, y, bound).map(|x| x - y))
            .collect::<Result<Vec<f64>>>()?;
        CircleDiffeo::new(PeriodicField::from_values(values)?)
    }

    /// `φ ∘ ψ`, with displacement `f_φ(ψ(x)) + f_ψ(x)`.
    pub fn compose(&self, psi: &CircleDiffeo) -> Result<CircleDiffeo> {
        self.displacement.same_grid(&psi.displacement)?;
        let outer = compose_field(&self.displacement, psi)?;
        CircleDiffeo::new(outer.plus(&psi.displacement)?)
    }

    /// `x,phi_of_x` rows at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,phi_of_x\n");
        for (x, phi) in grid(self.n()).iter().zip(self.grid_image()) {
            let _ = writeln!(out, "{},{}", fmt17(*x), fmt17(phi));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn min_slope(f: &PeriodicField) -> f64 {
    f.derivative()
        .values()
        .iter()
        .fold(f64::INFINITY, |m, d| m.min(1.0 + d))
}

/// Upper bound of `|f|` on the whole circle from the Fourier coefficients.
fn coefficient_bound(f: &PeriodicField) -> f64 {
    let c = f.coeffs();
    let half = c.len() - 1;
    c[0].norm() + 2.0 * c[1..half].iter().map(|z| z.norm()).sum::<f64>() + c[half].norm()
}

/// Newton iteration on the increasing map `x ↦ x + f(x)`, safeguarded by
/// bisection on the bracket `[y - bound, y + bound]`.
fn solve_monotone(f: &PeriodicField, y: f64, bound: f64) -> Result<f64> {
    let mut lo = y - bound - NEWTON_TOL;
    let mut hi = y + bound + NEWTON_TOL;
    let mut x = (y - f.eval_with_slope(y).0).clamp(lo, hi);
    for _ in 0..NEWTON_MAX_ITER {
        let (fx, dfx) = f.eval_with_slope(x);
        let residual = x + fx - y;
        if residual.abs() <= NEWTON_TOL {
            return Ok(x);
        }
        if residual > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = 1.0 + dfx;
        let mut next = x - residual / slope;
        if !(slope > 0.0) || next <= lo || next >= hi || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::InversionFailed {
        target: y,
        iterations: NEWTON_MAX_ITER,
    })
}

/// Right translation `R_φ v = v ∘ φ`, resampled on the grid.
pub fn compose_field(v: &PeriodicField, phi: &CircleDiffeo) -> Result<PeriodicField> {
    v.same_grid(&phi.displacement)?;
    PeriodicField::from_values(v.evaluate_at(&phi.grid_image()))
}

/// `Ad_φ u = (φ_x · u) ∘ φ⁻¹`.
pub fn adjoint_action(phi: &CircleDiffeo, u: &PeriodicField) -> Result<PeriodicField> {
    u.same_grid(&phi.displacement)?;
    let stretched = u.plus(&phi.displacement.derivative().product(u)?)?;
    compose_field(&stretched, &phi.inverse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Mode;
    use std::f64::consts::PI;

    const N: usize = 64;

    fn field(modes: &[Mode]) -> PeriodicField {
        PeriodicField::from_modes(N, modes).unwrap()
    }

    #[test]
    fn construction() {
        let id = CircleDiffeo::identity(N).unwrap();
        assert_eq!(id.grid_image(), grid(N));
        let rot = CircleDiffeo::rotation(N, 0.4).unwrap();
        assert!(rot.grid_image().iter().zip(grid(N)).all(|(p, x)| (p - x - 0.4).abs() < 1e-15));
        match CircleDiffeo::new(field(&[Mode::sin(1, 1.5)])) {
            Err(Error::NotMonotone { min_slope }) => assert!((min_slope + 0.5).abs() < 1e-12),
            other => panic!("expected NotMonotone, got {other:?}"),
        }
    }

    #[test]
    fn composing_fields() {
        let v = field(&[Mode::new(2, 0.3, 0.7), Mode::cos(5, 0.1)]);
        let id = CircleDiffeo::identity(N).unwrap();
        assert!(compose_field(&v, &id).unwrap().sup_distance(&v).unwrap() < 1e-13);

        let cosx = field(&[Mode::cos(1, 1.0)]);
        let half_turn = CircleDiffeo::rotation(N, PI).unwrap();
        let want = cosx.scaled(-1.0);
        assert!(compose_field(&cosx, &half_turn).unwrap().sup_distance(&want).unwrap() < 1e-14);

        let c = PeriodicField::constant(N, 0.3).unwrap();
        let phi = CircleDiffeo::new(field(&[Mode::sin(1, 0.2)])).unwrap();
        assert!(compose_field(&c, &phi).unwrap().sup_distance(&c).unwrap() < 1e-15);
    }

    #[test]
    fn composing_diffeos() {
        let phi = CircleDiffeo::new(field(&[Mode::new(1, 0.1, 0.2), Mode::sin(3, 0.02)])).unwrap();
        let id = CircleDiffeo::identity(N).unwrap();
        let same = phi.compose(&id).unwrap();
        assert!(same.displacement().sup_distance(phi.displacement()).unwrap() < 1e-14);

        let a = CircleDiffeo::rotation(N, 0.3).unwrap();
        let b = CircleDiffeo::rotation(N, -1.1).unwrap();
        let ab = a.compose(&b).unwrap();
        assert!(ab.displacement().values().iter().all(|f| (f + 0.8).abs() < 1e-15));
    }

    #[test]
    fn inversion() {
        let id = CircleDiffeo::identity(N).unwrap();
        assert!(id.inverse().unwrap().displacement().sup_norm() < 1e-15);

        let rot = CircleDiffeo::rotation(N, 0.9).unwrap();
        let inv = rot.inverse().unwrap();
        assert!(inv.displacement().values().iter().all(|f| (f + 0.9).abs() < 1e-14));

        let phi = CircleDiffeo::new(field(&[Mode::sin(1, 0.1)])).unwrap();
        let inv = phi.inverse().unwrap();
        let x = grid(N);
        let round = phi.apply_at(&inv.grid_image());
        let err = round.iter().zip(&x).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-10, "{err}");
        let composed = phi.compose(&inv).unwrap();
        assert!(composed.displacement().sup_norm() <= 1e-10);
    }

    #[test]
    fn inversion_of_strong_deformation() {
        // 1 + f' dips to 0.05 near x = π
        let phi = CircleDiffeo::new(field(&[Mode::sin(1, 0.95)])).unwrap();
        let inv = phi.inverse().unwrap();
        let round = phi.apply_at(&inv.grid_image());
        let err = round.iter().zip(grid(N)).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-12, "{err}");
    }

    #[test]
    fn adjoint_action_examples() {
        let u = field(&[Mode::new(2, 0.3, 0.7), Mode::sin(4, 0.2)]);
        let id = CircleDiffeo::identity(N).unwrap();
        assert!(adjoint_action(&id, &u).unwrap().sup_distance(&u).unwrap() < 1e-13);

        let c = 0.7;
        let rot = CircleDiffeo::rotation(N, c).unwrap();
        let shifted = PeriodicField::from_values(u.evaluate_at(&grid(N).iter().map(|x| x - c).collect::<Vec<_>>())).unwrap();
        assert!(adjoint_action(&rot, &u).unwrap().sup_distance(&shifted).unwrap() < 1e-13);
    }

    #[test]
    fn diffeo_csv() {
        let rot = CircleDiffeo::rotation(8, 0.5).unwrap();
        let text = rot.to_csv();
        assert!(text.starts_with("x,phi_of_x\n"));
        assert_eq!(text.lines().count(), 9);
        assert!(text.lines().nth(1).unwrap().ends_with(&fmt17(0.5)));
    }
}
