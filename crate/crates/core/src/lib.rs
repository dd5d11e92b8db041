//! Exact and leading-order complexity of one-mode Gaussian states under
//! multifold evolutions of the inverted harmonic oscillator.

pub mod analytic;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod gaussian;
pub mod linalg;
pub mod real;
pub mod state;

pub use analytic::{AnalyticTerm, LeadingOrder, SignPattern};
pub use error::{Error, Result};
pub use experiments::{FoldTemplate, Grid, Row, Scenario, ScenarioKind, Slot};
pub use gaussian::{CovMatrix, OscillatorParams, Symplectic};
pub use linalg::Mat2;
pub use real::{Precision, Real};
pub use state::TimeFold;
