//! Band-limited real trigonometric polynomials on the circle `[0, 2π)`.
//!
//! A [`PeriodicField`] carries both representations of the same function:
//! the samples `u_j = u(x_j)` at `x_j = 2πj/n`, and the half spectrum
//! `û_k`, `k = 0..=n/2`, normalised so that
//!
//! ```text
//! u(x) = Σ_{k=-n/2+1}^{n/2} û_k e^{ikx},     û_{-k} = conj(û_k).
//! ```
//!
//! The Nyquist coefficient `û_{n/2}` is real and stands for `û_{n/2} cos(nx/2)`.
//! Derivatives and products always return fields whose Nyquist mode is zero.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

fn inverse_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// One real Fourier mode `cos_amp·cos(kx) + sin_amp·sin(kx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: i64,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

impl Mode {
    pub fn new(k: i64, cos_amp: f64, sin_amp: f64) -> Self {
        Mode {
            k,
            cos_amp,
            sin_amp,
        }
    }

    pub fn cos(k: i64, amp: f64) -> Self {
        Mode::new(k, amp, 0.0)
    }

    pub fn sin(k: i64, amp: f64) -> Self {
        Mode::new(k, 0.0, amp)
    }
}

/// Collocation points `x_j = 2πj/n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

fn check_grid_size(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidGridSize(n));
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(j) => Err(Error::NonFinite(j)),
        None => Ok(()),
    }
}

/// Real function on the circle held as samples and Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    values: Vec<f64>,
    coeffs: Vec<Complex64>,
}

impl PeriodicField {
    pub fn zeros(n: usize) -> Result<Self> {
        check_grid_size(n)?;
        Ok(PeriodicField {
            values: vec![0.0; n],
            coeffs: vec![Complex64::new(0.0, 0.0); n / 2 + 1],
        })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        check_grid_size(n)?;
        check_finite(&[c])?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n / 2 + 1];
        coeffs[0] = Complex64::new(c, 0.0);
        Ok(PeriodicField {
            values: vec![c; n],
            coeffs,
        })
    }

    /// Builds the field from its collocation values.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        check_grid_size(n)?;
        check_finite(&values)?;
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        forward_plan(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        let mut coeffs: Vec<Complex64> = buf[..=n / 2].iter().map(|c| c * scale).collect();
        coeffs[0].im = 0.0;
        coeffs[n / 2].im = 0.0;
        Ok(PeriodicField { values, coeffs })
    }

    /// Builds the field from the half spectrum `û_0..=û_{n/2}`.
    ///
    /// The imaginary parts of `û_0` and `û_{n/2}` are discarded.
    pub fn from_coeffs(n: usize, mut coeffs: Vec<Complex64>) -> Result<Self> {
        check_grid_size(n)?;
        if coeffs.len() != n / 2 + 1 {
            return Err(Error::SymbolLength {
                expected: n / 2 + 1,
                got: coeffs.len(),
            });
        }
        coeffs[0].im = 0.0;
        coeffs[n / 2].im = 0.0;
        let values = synthesize(n, &coeffs);
        check_finite(&values)?;
        Ok(PeriodicField { values, coeffs })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_grid_size(n)?;
        Self::from_values(grid(n).into_iter().map(f).collect())
    }

    /// `Σ c_k cos(kx) + s_k sin(kx)` over the given modes.
    pub fn from_modes(n: usize, modes: &[Mode]) -> Result<Self> {
        check_grid_size(n)?;
        let half = n / 2;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); half + 1];
        for m in modes {
            let k = m.k.unsigned_abs() as usize;
            if k > half {
                return Err(Error::WavenumberOutOfBand { k: m.k, max: half, n });
            }
            // sin(-kx) = -sin(kx)
            let s = if m.k < 0 { -m.sin_amp } else { m.sin_amp };
            if k == 0 {
                coeffs[0] += m.cos_amp;
            } else if k == half {
                // sin(nx/2) vanishes on the grid
                coeffs[half] += m.cos_amp;
            } else {
                coeffs[k] += Complex64::new(0.5 * m.cos_amp, -0.5 * s);
            }
        }
        Self::from_coeffs(n, coeffs)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn same_grid(&self, other: &PeriodicField) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::GridMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Applies a Fourier multiplier `û_k ↦ symbol(k)·û_k`, `k = 0..=n/2`.
    ///
    /// The multiplier must respect Hermitian symmetry (`symbol(0)` and the
    /// Nyquist entry are made real).
    pub fn map_spectrum(&self, symbol: impl Fn(usize) -> Complex64) -> Result<PeriodicField> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * symbol(k))
            .collect();
        PeriodicField::from_coeffs(self.n(), coeffs)
    }

    pub fn derivative(&self) -> PeriodicField {
        let half = self.n() / 2;
        self.map_spectrum(|k| {
            if k == half {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k as f64)
            }
        })
        .expect("derivative of a finite field is finite")
    }

    /// Exact product truncated to `|k| < n/2`, evaluated on a 3/2-padded grid.
    pub fn product(&self, other: &PeriodicField) -> Result<PeriodicField> {
        self.same_grid(other)?;
        let n = self.n();
        let half = n / 2;
        let m = 3 * n / 2;
        let mut a = pad_spectrum(&self.coeffs, m);
        let mut b = pad_spectrum(&other.coeffs, m);
        let inverse = inverse_plan(m);
        inverse.process(&mut a);
        inverse.process(&mut b);
        let mut prod: Vec<Complex64> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| Complex64::new(x.re * y.re, 0.0))
            .collect();
        forward_plan(m).process(&mut prod);
        let scale = 1.0 / m as f64;
        let mut coeffs: Vec<Complex64> = prod[..=half].iter().map(|c| c * scale).collect();
        coeffs[half] = Complex64::new(0.0, 0.0);
        PeriodicField::from_coeffs(n, coeffs)
    }

    /// `∫₀^{2π} u v dx` by the trapezoid rule.
    pub fn inner_l2(&self, other: &PeriodicField) -> Result<f64> {
        self.same_grid(other)?;
        let sum: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(2.0 * PI / self.n() as f64 * sum)
    }

    /// `Σ_{k=-n/2+1}^{n/2} |û_k|²`; equals `inner_l2(u, u) / 2π`.
    pub fn spectral_energy(&self) -> f64 {
        let half = self.n() / 2;
        let interior: f64 = self.coeffs[1..half].iter().map(|c| c.norm_sqr()).sum();
        self.coeffs[0].norm_sqr() + 2.0 * interior + self.coeffs[half].norm_sqr()
    }

    /// Fraction of the spectral energy carried by `|k| > n/3`.
    pub fn spectral_tail(&self) -> f64 {
        let total = self.spectral_energy();
        if total == 0.0 {
            return 0.0;
        }
        let half = self.n() / 2;
        let cut = self.n() / 3;
        let tail: f64 = (cut + 1..=half)
            .map(|k| {
                let w = if k == half { 1.0 } else { 2.0 };
                w * self.coeffs[k].norm_sqr()
            })
            .sum();
        tail / total
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Sums the Fourier series directly at arbitrary points.
    pub fn evaluate_at(&self, points: &[f64]) -> Vec<f64> {
        points.iter().map(|&x| self.eval_with_slope(x).0).collect()
    }

    /// Value and first derivative of the trigonometric interpolant at `x`.
    pub fn eval_with_slope(&self, x: f64) -> (f64, f64) {
        let n = self.n();
        let half = n / 2;
        let x = x.rem_euclid(2.0 * PI);
        let z = Complex64::new(x.cos(), x.sin());
        let mut zk = Complex64::new(1.0, 0.0);
        let mut value = 0.0;
        let mut slope = 0.0;
        for k in 1..half {
            zk *= z;
            let term = self.coeffs[k] * zk;
            value += term.re;
            // d/dx Re(c e^{ikx}) = -k Im(c e^{ikx})
            slope -= k as f64 * term.im;
        }
        let nyq = self.coeffs[half].re;
        let (s, c) = (half as f64 * x).sin_cos();
        (
            self.coeffs[0].re + 2.0 * value + nyq * c,
            2.0 * slope - nyq * half as f64 * s,
        )
    }

    fn zip_values(&self, other: &PeriodicField, f: impl Fn(f64, f64) -> f64) -> Result<PeriodicField> {
        self.same_grid(other)?;
        let values: Vec<f64> = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        check_finite(&values)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| Complex64::new(f(a.re, b.re), f(a.im, b.im)))
            .collect();
        Ok(PeriodicField { values, coeffs })
    }

    pub fn plus(&self, other: &PeriodicField) -> Result<PeriodicField> {
        self.zip_values(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &PeriodicField) -> Result<PeriodicField> {
        self.zip_values(other, |a, b| a - b)
    }

    /// `self + h·other`.
    pub fn axpy(&self, h: f64, other: &PeriodicField) -> Result<PeriodicField> {
        self.zip_values(other, |a, b| a + h * b)
    }

    pub fn scaled(&self, c: f64) -> PeriodicField {
        PeriodicField {
            values: self.values.iter().map(|v| c * v).collect(),
            coeffs: self.coeffs.iter().map(|v| c * v).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        (2.0 * PI * self.spectral_energy()).sqrt()
    }

    pub fn sup_distance(&self, other: &PeriodicField) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `x,value` rows at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (x, v) in grid(self.n()).iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", fmt17(*x), fmt17(*v));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parses the `x,value` snapshot format; rows must be in grid order.
    pub fn from_csv(text: &str) -> Result<PeriodicField> {
        let mut values = Vec::new();
        for (line_no, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let value = parts
                .nth(1)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Parse {
                    line: line_no + 1,
                    message: format!("expected `x,value`, got `{line}`"),
                })?;
            values.push(value);
        }
        PeriodicField::from_values(values)
    }
}

/// Formats with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn synthesize(n: usize, coeffs: &[Complex64]) -> Vec<f64> {
    let half = n / 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[0] = coeffs[0];
    for k in 1..half {
        buf[k] = coeffs[k];
        buf[n - k] = coeffs[k].conj();
    }
    buf[half] = coeffs[half];
    inverse_plan(n).process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Embeds a half spectrum of an `n` grid into a full spectrum of length `m > n`,
/// splitting the Nyquist coefficient between `±n/2`.
fn pad_spectrum(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    let half = coeffs.len() - 1;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[0] = coeffs[0];
    for k in 1..half {
        buf[k] = coeffs[k];
        buf[m - k] = coeffs[k].conj();
    }
    let nyq = 0.5 * coeffs[half];
    buf[half] = nyq;
    buf[m - half] = nyq;
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (j, (x, y)) in a.iter().zip(b).enumerate() {
            assert!((x - y).abs() <= tol, "index {j}: {x} vs {y}");
        }
    }

    #[test]
    fn modes_constant_and_single() {
        let c = PeriodicField::from_modes(16, &[Mode::cos(0, 2.0)]).unwrap();
        assert_close(c.values(), &[2.0; 16], 1e-15);
        let cosx = PeriodicField::from_modes(16, &[Mode::cos(1, 1.0)]).unwrap();
        let want: Vec<f64> = grid(16).iter().map(|x| x.cos()).collect();
        assert_close(cosx.values(), &want, 1e-15);
    }

    #[test]
    fn modes_linear_combination() {
        let u = PeriodicField::from_modes(16, &[Mode::sin(1, 1.0), Mode::cos(2, 0.5)]).unwrap();
        let want: Vec<f64> = grid(16).iter().map(|x| x.sin() + 0.5 * (2.0 * x).cos()).collect();
        assert_close(u.values(), &want, 1e-14);
    }

    #[test]
    fn modes_reject_bad_input() {
        assert!(matches!(
            PeriodicField::from_modes(16, &[Mode::cos(9, 1.0)]),
            Err(Error::WavenumberOutOfBand { k: 9, .. })
        ));
        assert!(matches!(
            PeriodicField::from_modes(15, &[Mode::cos(1, 1.0)]),
            Err(Error::InvalidGridSize(15))
        ));
        assert!(matches!(
            PeriodicField::from_values(vec![0.0, 1.0, f64::NAN, 0.0]),
            Err(Error::NonFinite(2))
        ));
    }

    #[test]
    fn negative_wavenumber_folds() {
        let a = PeriodicField::from_modes(16, &[Mode::new(-3, 0.2, 1.0)]).unwrap();
        let b = PeriodicField::from_modes(16, &[Mode::new(3, 0.2, -1.0)]).unwrap();
        assert_close(a.values(), b.values(), 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let cosx = PeriodicField::from_modes(32, &[Mode::cos(1, 1.0)]).unwrap();
        let want: Vec<f64> = grid(32).iter().map(|x| -x.sin()).collect();
        assert_close(cosx.derivative().values(), &want, 1e-14);

        let five = PeriodicField::constant(32, 5.0).unwrap();
        assert!(five.derivative().sup_norm() < 1e-15);

        let sin3 = PeriodicField::from_modes(32, &[Mode::sin(3, 1.0)]).unwrap();
        let want: Vec<f64> = grid(32).iter().map(|x| 3.0 * (3.0 * x).cos()).collect();
        assert_close(sin3.derivative().values(), &want, 1e-13);
    }

    #[test]
    fn derivative_drops_nyquist() {
        let nyq = PeriodicField::from_modes(16, &[Mode::cos(8, 1.0)]).unwrap();
        assert_eq!(nyq.derivative().sup_norm(), 0.0);
    }

    #[test]
    fn product_examples() {
        let n = 32;
        let cosx = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0)]).unwrap();
        let sinx = PeriodicField::from_modes(n, &[Mode::sin(1, 1.0)]).unwrap();
        // cos² = ½ + ½cos 2x,  sin·cos = ½ sin 2x
        let want = PeriodicField::from_modes(n, &[Mode::cos(0, 0.5), Mode::cos(2, 0.5)]).unwrap();
        assert!(cosx.product(&cosx).unwrap().sup_distance(&want).unwrap() < 1e-15);
        let want = PeriodicField::from_modes(n, &[Mode::sin(2, 0.5)]).unwrap();
        assert!(sinx.product(&cosx).unwrap().sup_distance(&want).unwrap() < 1e-15);

        let u = PeriodicField::from_modes(n, &[Mode::new(3, 0.3, -0.7), Mode::cos(5, 1.1)]).unwrap();
        let one = PeriodicField::constant(n, 1.0).unwrap();
        assert!(u.product(&one).unwrap().sup_distance(&u).unwrap() < 1e-15);
    }

    #[test]
    fn product_grid_mismatch() {
        let a = PeriodicField::zeros(16).unwrap();
        let b = PeriodicField::zeros(32).unwrap();
        assert!(matches!(a.product(&b), Err(Error::GridMismatch { left: 16, right: 32 })));
        assert!(a.inner_l2(&b).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let n = 16;
        let cosx = PeriodicField::from_modes(n, &[Mode::cos(1, 1.0)]).unwrap();
        let sinx = PeriodicField::from_modes(n, &[Mode::sin(1, 1.0)]).unwrap();
        let one = PeriodicField::constant(n, 1.0).unwrap();
        assert!(cosx.inner_l2(&sinx).unwrap().abs() < 1e-15);
        assert!((cosx.inner_l2(&cosx).unwrap() - PI).abs() < 1e-14);
        assert!((one.inner_l2(&one).unwrap() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn evaluation_examples() {
        let cosx = PeriodicField::from_modes(16, &[Mode::cos(1, 1.0)]).unwrap();
        assert!((cosx.evaluate_at(&[0.0])[0] - 1.0).abs() < 1e-15);
        assert!((cosx.evaluate_at(&[PI / 3.0])[0] - 0.5).abs() < 1e-15);
        // wrapped arguments
        assert!((cosx.evaluate_at(&[PI / 3.0 - 4.0 * PI])[0] - 0.5).abs() < 1e-14);

        let u = PeriodicField::from_fn(16, |x| (x.sin()).exp()).unwrap();
        assert_close(&u.evaluate_at(&grid(16)), u.values(), 1e-12);
    }

    #[test]
    fn evaluation_slope_matches_derivative() {
        let u = PeriodicField::from_modes(32, &[Mode::new(2, 0.4, 0.1), Mode::sin(7, 0.2)]).unwrap();
        let du = u.derivative();
        for x in [0.1, 1.3, 2.9, 5.5] {
            let (_, s) = u.eval_with_slope(x);
            assert!((s - du.evaluate_at(&[x])[0]).abs() < 1e-13);
        }
    }

    #[test]
    fn mean_examples() {
        assert!((PeriodicField::constant(16, 3.0).unwrap().mean() - 3.0).abs() < 1e-15);
        let cosx = PeriodicField::from_modes(16, &[Mode::cos(1, 1.0)]).unwrap();
        assert!(cosx.mean().abs() < 1e-15);
        let u = PeriodicField::from_modes(16, &[Mode::cos(0, 2.0), Mode::sin(5, 1.0)]).unwrap();
        assert!((u.mean() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn nyquist_is_real() {
        let u = PeriodicField::from_values((0..16).map(|j| (j * j % 7) as f64).collect()).unwrap();
        assert_eq!(u.coeffs()[8].im, 0.0);
        assert_eq!(u.coeffs()[0].im, 0.0);
    }

    #[test]
    fn csv_round_trip() {
        let u = PeriodicField::from_modes(16, &[Mode::new(3, 0.25, -1.0 / 3.0)]).unwrap();
        let text = u.to_csv();
        assert!(text.starts_with("x,value\n"));
        assert_eq!(text.lines().count(), 17);
        let back = PeriodicField::from_csv(&text).unwrap();
        assert_eq!(back.values(), u.values());
    }

    #[test]
    fn spectral_tail_detects_high_modes() {
        let low = PeriodicField::from_modes(64, &[Mode::cos(3, 1.0)]).unwrap();
        assert!(low.spectral_tail() < 1e-28);
        let high = PeriodicField::from_modes(64, &[Mode::cos(3, 1.0), Mode::cos(30, 1.0)]).unwrap();
        assert!((high.spectral_tail() - 0.5).abs() < 1e-14);
    }
}
