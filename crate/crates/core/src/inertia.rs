//! Fourier-multiplier inertia operators `A` and the inner product
//! `⟨u, v⟩_A = ∫ u·Av dx` they induce on the Lie algebra of vector fields.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::PeriodicField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InertiaKind {
    /// `a(k) = 1 + k²`, i.e. `A = I - D²` (Camassa-Holm).
    Helmholtz,
    /// `a(k) = (1 + k²)^s`.
    Sobolev(f64),
    Custom,
}

impl fmt::Display for InertiaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InertiaKind::Helmholtz => write!(f, "helmholtz"),
            InertiaKind::Sobolev(s) => write!(f, "sobolev(s={s})"),
            InertiaKind::Custom => write!(f, "custom"),
        }
    }
}

/// Even, strictly positive multiplier `a(|k|)` tabulated for `k = 0..=n/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct InertiaOperator {
    n: usize,
    symbol: Vec<f64>,
    kind: InertiaKind,
}

impl InertiaOperator {
    pub fn helmholtz(n: usize) -> Result<Self> {
        Self::tabulate(n, InertiaKind::Helmholtz, |k| 1.0 + k * k)
    }

    pub fn sobolev(n: usize, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::config("operator.params", format!("sobolev order must be positive, got {s}")));
        }
        Self::tabulate(n, InertiaKind::Sobolev(s), |k| (1.0 + k * k).powf(s))
    }

    /// The `L²` metric, `a ≡ 1`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::custom(n, vec![1.0; n / 2 + 1])
    }

    pub fn custom(n: usize, symbol: Vec<f64>) -> Result<Self> {
        PeriodicField::zeros(n)?;
        if symbol.len() != n / 2 + 1 {
            return Err(Error::SymbolLength {
                expected: n / 2 + 1,
                got: symbol.len(),
            });
        }
        validate_symbol(&symbol)?;
        Ok(InertiaOperator {
            n,
            symbol,
            kind: InertiaKind::Custom,
        })
    }

    /// Dispatches on a kind label: `helmholtz`, `sobolev` (params `[s]`),
    /// `identity`, or `custom` (params are the symbol values).
    pub fn make(n: usize, kind: &str, params: &[f64]) -> Result<Self> {
        match kind {
            "helmholtz" => Self::helmholtz(n),
            "sobolev" => match params {
                [s] => Self::sobolev(n, *s),
                _ => Err(Error::config("operator.params", "sobolev takes exactly one parameter s")),
            },
            "identity" | "l2" => Self::identity(n),
            "custom" => Self::custom(n, params.to_vec()),
            other => Err(Error::UnknownOperator(other.to_string())),
        }
    }

    fn tabulate(n: usize, kind: InertiaKind, a: impl Fn(f64) -> f64) -> Result<Self> {
        PeriodicField::zeros(n)?;
        let symbol: Vec<f64> = (0..=n / 2).map(|k| a(k as f64)).collect();
        validate_symbol(&symbol)?;
        Ok(InertiaOperator { n, symbol, kind })
    }

    /// Loads a custom symbol from `k,a` rows covering `k = 0..=n/2`.
    pub fn from_csv(n: usize, text: &str) -> Result<Self> {
        let mut symbol = vec![f64::NAN; n / 2 + 1];
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (line_no == 0 && line.starts_with('k')) {
                continue;
            }
            let parse_err = || Error::Parse {
                line: line_no + 1,
                message: format!("expected `k,a`, got `{line}`"),
            };
            let (k, a) = line.split_once(',').ok_or_else(parse_err)?;
            let k: usize = k.trim().parse().map_err(|_| parse_err())?;
            let a: f64 = a.trim().parse().map_err(|_| parse_err())?;
            let slot = symbol.get_mut(k).ok_or(Error::WavenumberOutOfBand {
                k: k as i64,
                max: n / 2,
                n,
            })?;
            *slot = a;
        }
        let got = symbol.iter().filter(|a| !a.is_nan()).count();
        if got != symbol.len() {
            return Err(Error::SymbolLength {
                expected: symbol.len(),
                got,
            });
        }
        Self::custom(n, symbol)
    }

    pub fn load_csv(n: usize, path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(n, &std::fs::read_to_string(path)?)
    }

    /// Replaces `a(k)` with `-a(k)` without validation.
    ///
    /// Only meant for negative controls of the identity checks: the result is
    /// not a valid inertia operator.
    pub fn with_negated_mode(&self, k: usize) -> Self {
        let mut out = self.clone();
        if let Some(a) = out.symbol.get_mut(k) {
            *a = -*a;
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    pub fn kind(&self) -> InertiaKind {
        self.kind
    }

    pub fn min_symbol(&self) -> f64 {
        self.symbol.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    fn check(&self, u: &PeriodicField) -> Result<()> {
        if u.n() != self.n {
            return Err(Error::GridMismatch {
                left: self.n,
                right: u.n(),
            });
        }
        Ok(())
    }

    /// `m = Au`.
    pub fn apply(&self, u: &PeriodicField) -> Result<PeriodicField> {
        self.check(u)?;
        u.map_spectrum(|k| Complex64::new(self.symbol[k], 0.0))
    }

    /// `u = A⁻¹m`.
    pub fn apply_inverse(&self, m: &PeriodicField) -> Result<PeriodicField> {
        self.check(m)?;
        m.map_spectrum(|k| Complex64::new(1.0 / self.symbol[k], 0.0))
    }

    /// `⟨u, v⟩_A = (u, Av)`.
    pub fn inner(&self, u: &PeriodicField, v: &PeriodicField) -> Result<f64> {
        self.check(u)?;
        u.inner_l2(&self.apply(v)?)
    }

    pub fn norm(&self, u: &PeriodicField) -> Result<f64> {
        Ok(self.inner(u, u)?.max(0.0).sqrt())
    }
}

fn validate_symbol(symbol: &[f64]) -> Result<()> {
    if symbol[0] == 0.0 && symbol[1..].iter().all(|&a| a > 0.0) {
        return Err(Error::DegenerateSymbol);
    }
    match symbol.iter().position(|&a| !(a > 0.0 && a.is_finite())) {
        Some(k) => Err(Error::NonPositiveSymbol { k, value: symbol[k] }),
        None => Ok(()),
    }
}
