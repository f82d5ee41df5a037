//! Effective secrecy throughput of MIMOME free-space optical wiretap links
//! over gamma-gamma turbulence with pointing errors.
//!
//! The crate covers the special functions behind the closed forms, the
//! channel and surrogate CDFs, EST evaluation, the rate optimizers for the
//! adaptive and fixed-rate schemes, and a seeded Monte-Carlo oracle.

pub mod channel;
pub mod error;
pub mod montecarlo;
pub mod optimize;
pub mod quad;
pub mod scenario;
pub mod secrecy;
pub mod specfun;
pub mod validation;

pub use channel::{
    GammaApprox, GeometryConfig, NodeConfig, PointingParams, Receiver, SnrThreshold, TurbulenceParams,
};
pub use error::{Error, Result};
pub use montecarlo::{Estimate, SimConfig};
pub use optimize::{Method, Optimum, SolverOptions};
pub use scenario::{Scenario, ScenarioConfig};
pub use secrecy::{CdfModel, EstReport, RatePair, Scheme, SecrecyConstraint};
pub use specfun::SpecFunError;
pub use validation::{Outcome, ValidationReport};
