//! Randomized checks of the algebraic and group identities.
//!
//! Each residual is `|lhs - rhs| / max(1, |lhs|, |rhs|)` (sup norms for
//! field-valued identities), so it is relative for large quantities and
//! absolute for small ones. Thresholds are the module tolerances.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{ad, ad_transpose, arnold_b, covariant_derivative_id, spray_s};
use crate::diffeo::{adjoint_action, CircleDiffeo};
use crate::error::Result;
use crate::flows::flow_from_velocity;
use crate::harness::random::FieldSampler;
use crate::inertia::InertiaOperator;
use crate::spectral::PeriodicField;

pub const ADJOINTNESS_TOL: f64 = 1e-10;
pub const SPRAY_CONSISTENCY_TOL: f64 = 1e-11;
pub const GEODESIC_FORM_TOL: f64 = 1e-12;
pub const TORSION_TOL: f64 = 1e-11;
pub const METRICITY_TOL: f64 = 1e-10;
pub const BILINEARITY_TOL: f64 = 1e-12;
pub const GROUP_INVERSE_TOL: f64 = 1e-10;
pub const ASSOCIATIVITY_TOL: f64 = 1e-9;
pub const AD_ACTION_TOL: f64 = 1e-8;
pub const AD_DERIVATIVE_TOL: f64 = 1e-4;
pub const AD_DERIVATIVE_MIN_ORDER: f64 = 1.9;

/// Step sizes of the central difference `(Ad_{φ_s} v - Ad_{φ_{-s}} v) / 2s`.
pub const AD_DERIVATIVE_STEPS: [f64; 2] = [1e-2, 5e-3];

/// Band of the fields and displacements used by the group checks.
///
/// Composition spreads spectra, so these checks use data resolved well
/// below the grid: `|k| ≤ clamp(n/64, 1, 4)`.
pub fn group_band(n: usize) -> usize {
    (n / 64).clamp(1, 4)
}

#[derive(Debug, Clone)]
pub struct IdentitySuiteOptions {
    pub operator: InertiaOperator,
    pub trials: usize,
    pub seed: u64,
    /// Use all-zero fields and identity diffeomorphisms.
    pub zero_fields: bool,
    /// Negative control: evaluate `B`, `ad^T`, `S`, `∇` with `a(k)` negated
    /// while the reference metric keeps the true symbol.
    pub corrupt_mode: Option<usize>,
}

impl IdentitySuiteOptions {
    pub fn new(operator: InertiaOperator, trials: usize, seed: u64) -> Self {
        IdentitySuiteOptions {
            operator,
            trials,
            seed,
            zero_fields: false,
            corrupt_mode: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub max_residual: f64,
    pub threshold: f64,
    pub trials: usize,
    /// Smallest observed convergence order, for finite-difference checks.
    pub min_order: Option<f64>,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub config: BTreeMap<String, String>,
    pub residuals: BTreeMap<String, IdentityCheck>,
    pub passed: bool,
}

impl IdentityReport {
    pub fn lines(&self) -> Vec<String> {
        self.residuals
            .iter()
            .map(|(name, c)| {
                let order = c.min_order.map(|o| format!(" order {o:.3}")).unwrap_or_default();
                format!(
                    "{} {name:<24} max {:.3e} <= {:.0e}{order}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.max_residual,
                    c.threshold
                )
            })
            .collect()
    }
}

struct Tracker {
    threshold: f64,
    max_residual: f64,
    trials: usize,
    min_order: Option<f64>,
    order_floor: Option<f64>,
    error: Option<String>,
}

impl Tracker {
    fn new(threshold: f64) -> Self {
        Tracker {
            threshold,
            max_residual: 0.0,
            trials: 0,
            min_order: None,
            order_floor: None,
            error: None,
        }
    }

    fn record(&mut self, outcome: Result<f64>) {
        self.trials += 1;
        match outcome {
            Ok(r) if r.is_finite() => self.max_residual = self.max_residual.max(r),
            Ok(_) => self.fail("non-finite residual".into()),
            Err(e) => self.fail(e.to_string()),
        }
    }

    fn fail(&mut self, message: String) {
        self.error.get_or_insert(message);
    }

    fn record_order(&mut self, order: Option<f64>) {
        if let Some(o) = order {
            self.min_order = Some(self.min_order.map_or(o, |m: f64| m.min(o)));
        }
    }

    fn finish(self) -> IdentityCheck {
        let order_ok = match (self.order_floor, self.min_order) {
            (Some(floor), Some(o)) => o >= floor,
            _ => true,
        };
        let passed = self.error.is_none() && self.max_residual <= self.threshold && order_ok;
        IdentityCheck {
            max_residual: if self.error.is_some() { f64::MAX } else { self.max_residual },
            threshold: self.threshold,
            trials: self.trials,
            min_order: self.min_order,
            passed,
            error: self.error,
        }
    }
}

fn scalar_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs())
}

fn field_residual(lhs: &PeriodicField, rhs: &PeriodicField) -> Result<f64> {
    Ok(lhs.sup_distance(rhs)? / 1f64.max(lhs.sup_norm()).max(rhs.sup_norm()))
}

/// Flow of the stationary velocity `u` for time `s` (negative `s` flows along `-u`).
fn stationary_flow(u: &PeriodicField, s: f64) -> Result<CircleDiffeo> {
    let field = if s < 0.0 { u.scaled(-1.0) } else { u.clone() };
    let span = s.abs();
    flow_from_velocity(|_| Ok(field.clone()), span, span / 8.0)
}

/// Central-difference residuals of `d/ds Ad_{φ_s} v |_{s=0} = ad_u v` at each step size.
pub fn ad_derivative_errors(u: &PeriodicField, v: &PeriodicField, steps: &[f64]) -> Result<Vec<f64>> {
    let exact = ad(u, v)?;
    steps
        .iter()
        .map(|&s| {
            let plus = adjoint_action(&stationary_flow(u, s)?, v)?;
            let minus = adjoint_action(&stationary_flow(u, -s)?, v)?;
            let fd = plus.minus(&minus)?.scaled(0.5 / s);
            Ok(fd.sup_distance(&exact)? / 1f64.max(exact.sup_norm()))
        })
        .collect()
}

/// Observed order between successive step sizes; `None` when an error is at round-off level.
pub fn observed_order(steps: &[f64], errors: &[f64]) -> Vec<Option<f64>> {
    steps
        .windows(2)
        .zip(errors.windows(2))
        .map(|(s, e)| {
            if e[0] <= 1e-14 || e[1] <= 1e-14 {
                None
            } else {
                Some((e[0] / e[1]).ln() / (s[0] / s[1]).ln())
            }
        })
        .collect()
}

struct Fields {
    u: PeriodicField,
    v: PeriodicField,
    w: PeriodicField,
    smooth_u: PeriodicField,
    smooth_v: PeriodicField,
    phi: CircleDiffeo,
    psi: CircleDiffeo,
    chi: CircleDiffeo,
}

fn draw(sampler: &mut FieldSampler, n: usize, zero: bool) -> Result<Fields> {
    if zero {
        let z = PeriodicField::zeros(n)?;
        let id = CircleDiffeo::identity(n)?;
        return Ok(Fields {
            u: z.clone(),
            v: z.clone(),
            w: z.clone(),
            smooth_u: z.clone(),
            smooth_v: z,
            phi: id.clone(),
            psi: id.clone(),
            chi: id,
        });
    }
    Ok(Fields {
        u: sampler.field()?,
        v: sampler.field()?,
        w: sampler.field()?,
        smooth_u: sampler.field_with_band(group_band(n))?,
        smooth_v: sampler.field_with_band(group_band(n))?,
        phi: sampler.mild_diffeo_with_band(group_band(n))?,
        psi: sampler.mild_diffeo_with_band(group_band(n))?,
        chi: sampler.mild_diffeo_with_band(group_band(n))?,
    })
}

/// Runs every algebra and group identity on `trials` random samples.
pub fn run_identity_suite(opts: &IdentitySuiteOptions) -> IdentityReport {
    let metric = &opts.operator;
    let n = metric.n();
    let tested = match opts.corrupt_mode {
        Some(k) => metric.with_negated_mode(k),
        None => metric.clone(),
    };
    let a = &tested;
    let mut sampler = FieldSampler::new(n, opts.seed);

    let mut checks: Vec<(&str, Tracker)> = vec![
        ("arnold_adjointness", Tracker::new(ADJOINTNESS_TOL)),
        ("transpose_adjointness", Tracker::new(ADJOINTNESS_TOL)),
        ("spray_consistency", Tracker::new(SPRAY_CONSISTENCY_TOL)),
        ("geodesic_form", Tracker::new(GEODESIC_FORM_TOL)),
        ("torsion", Tracker::new(TORSION_TOL)),
        ("metricity", Tracker::new(METRICITY_TOL)),
        ("bilinearity", Tracker::new(BILINEARITY_TOL)),
        ("group_inverse", Tracker::new(GROUP_INVERSE_TOL)),
        ("associativity", Tracker::new(ASSOCIATIVITY_TOL)),
        ("ad_action_homomorphism", Tracker::new(AD_ACTION_TOL)),
        ("ad_derivative", Tracker::new(AD_DERIVATIVE_TOL)),
    ];
    checks[10].1.order_floor = Some(AD_DERIVATIVE_MIN_ORDER);

    for _ in 0..opts.trials.max(1) {
        let f = match draw(&mut sampler, n, opts.zero_fields) {
            Ok(f) => f,
            Err(e) => {
                for (_, t) in checks.iter_mut() {
                    t.trials += 1;
                    t.fail(e.to_string());
                }
                continue;
            }
        };
        let (u, v, w) = (&f.u, &f.v, &f.w);

        checks[0].1.record((|| {
            let lhs = metric.inner(&arnold_b(a, u, v)?, w)?;
            let rhs = metric.inner(u, &ad(v, w)?)?;
            Ok(scalar_residual(lhs, rhs))
        })());

        checks[1].1.record((|| {
            let lhs = metric.inner(&ad_transpose(a, u, v)?, w)?;
            let rhs = metric.inner(v, &ad(u, w)?)?;
            Ok(scalar_residual(lhs, rhs))
        })());

        checks[2].1.record((|| {
            let rhs = u.product(&u.derivative())?.minus(&arnold_b(a, u, u)?)?;
            field_residual(&spray_s(a, u)?, &rhs)
        })());

        checks[3].1.record((|| field_residual(&covariant_derivative_id(a, u, u)?, &arnold_b(a, u, u)?))());

        checks[4].1.record((|| {
            let uv = covariant_derivative_id(a, u, v)?;
            let vu = covariant_derivative_id(a, v, u)?;
            let bracket = ad(u, v)?;
            let scale = 1f64.max(uv.sup_norm()).max(vu.sup_norm()).max(bracket.sup_norm());
            Ok(uv.minus(&vu)?.plus(&bracket)?.sup_norm() / scale)
        })());

        checks[5].1.record((|| {
            let first = metric.inner(&covariant_derivative_id(a, u, v)?, w)?;
            let second = metric.inner(v, &covariant_derivative_id(a, u, w)?)?;
            Ok(scalar_residual(first, -second))
        })());

        checks[6].1.record((|| {
            let (alpha, beta) = (0.7, -1.3);
            let mix = u.scaled(alpha).axpy(beta, w)?;
            let left = arnold_b(a, &mix, v)?;
            let left_want = arnold_b(a, u, v)?.scaled(alpha).axpy(beta, &arnold_b(a, w, v)?)?;
            let right = arnold_b(a, v, &mix)?;
            let right_want = arnold_b(a, v, u)?.scaled(alpha).axpy(beta, &arnold_b(a, v, w)?)?;
            Ok(field_residual(&left, &left_want)?.max(field_residual(&right, &right_want)?))
        })());

        checks[7].1.record((|| Ok(f.phi.compose(&f.phi.inverse()?)?.displacement().sup_norm()))());

        checks[8].1.record((|| {
            let left = f.phi.compose(&f.psi)?.compose(&f.chi)?;
            let right = f.phi.compose(&f.psi.compose(&f.chi)?)?;
            left.displacement().sup_distance(right.displacement())
        })());

        checks[9].1.record((|| {
            let su = &f.smooth_u;
            let composed = adjoint_action(&f.phi.compose(&f.psi)?, su)?;
            let nested = adjoint_action(&f.phi, &adjoint_action(&f.psi, su)?)?;
            field_residual(&composed, &nested)
        })());

        let ad_errors = ad_derivative_errors(&f.smooth_u, &f.smooth_v, &AD_DERIVATIVE_STEPS);
        match ad_errors {
            Ok(errs) => {
                let order = observed_order(&AD_DERIVATIVE_STEPS, &errs)[0];
                checks[10].1.record(Ok(*errs.last().unwrap_or(&0.0)));
                checks[10].1.record_order(order);
            }
            Err(e) => checks[10].1.record(Err(e)),
        }
    }

    let residuals: BTreeMap<String, IdentityCheck> =
        checks.into_iter().map(|(name, t)| (name.to_string(), t.finish())).collect();
    let passed = residuals.values().all(|c| c.passed);

    let mut config = BTreeMap::new();
    config.insert("n".into(), n.to_string());
    config.insert("operator".into(), metric.kind().to_string());
    config.insert("trials".into(), opts.trials.max(1).to_string());
    config.insert("seed".into(), opts.seed.to_string());
    config.insert("zero_fields".into(), opts.zero_fields.to_string());
    config.insert(
        "corrupt_mode".into(),
        opts.corrupt_mode.map(|k| k.to_string()).unwrap_or_default(),
    );
    IdentityReport {
        config,
        residuals,
        passed,
    }
}
