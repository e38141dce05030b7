//! Geodesics of right-invariant metrics on the diffeomorphism group of the circle.
//!
//! The crate builds, for any strictly positive Fourier-multiplier inertia
//! operator `A`, the Lie-algebraic operators of the geodesic problem
//! (`ad`, `ad^T`, the Arnold operator `B`, the spray nonlinearity `S`, the
//! Levi-Civita connection on right-invariant fields) and integrates geodesics
//! both as the Euler-Arnold equation `u_t = -B(u, u)` and as the spray
//! equation for the flow map `φ`. With `A = I - D²` the Eulerian picture is
//! the Camassa-Holm equation.
//!
//! Modules, bottom-up:
//!
//! - [`spectral`]: band-limited periodic fields, dealiased products, quadrature.
//! - [`inertia`]: inertia operators and the metric `⟨u, v⟩_A`.
//! - [`algebra`]: `ad`, `B`, `ad^T`, `S`, `∇`, energy.
//! - [`diffeo`]: circle diffeomorphisms, composition, inversion, `Ad`.
//! - [`flows`]: RK4 integrators in both pictures and the maps between them.
//! - [`harness`]: scenario configs, identity checks, convergence studies, output files.

pub mod algebra;
pub mod diffeo;
pub mod error;
pub mod flows;
pub mod harness;
pub mod inertia;
pub mod spectral;

pub use algebra::{ad, ad_transpose, arnold_b, covariant_derivative_id, energy, spray_s};
pub use diffeo::{adjoint_action, compose_field, CircleDiffeo};
pub use error::{Error, Result};
pub use flows::{
    conservation_report, eulerian_velocity, flow_from_velocity, integrate_euler_arnold, integrate_spray,
    ConservationRecord, ConservationSummary, SprayState, Trajectory,
};
pub use inertia::{InertiaKind, InertiaOperator};
pub use spectral::{Mode, PeriodicField};
