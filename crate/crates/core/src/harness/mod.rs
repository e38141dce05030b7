//! Scenario runs, identity checks, convergence studies and their output files.

pub mod config;
pub mod convergence;
pub mod identity;
pub mod random;
pub mod scenario;

pub use config::{OperatorSpec, RunMode, ScenarioConfig};
pub use convergence::{run_convergence_study, ConvergenceStudy, ConvergenceTable};
pub use identity::{run_identity_suite, IdentityReport, IdentitySuiteOptions};
pub use random::FieldSampler;
pub use scenario::{run_scenario, RunArtifacts, RunSummary};
