//! Dirac bi-spinor plane waves scattering on a two-dimensional step
//! potential: closed-form amplitudes, parity–spin entanglement, chirality,
//! and an explicit-spinor oracle to check them against.
//!
//! All quantities are dimensionless, `mu = m/E` and `nu = V0/E`.

pub mod cli;
pub mod config;
pub mod entanglement;
pub mod error;
pub mod kinematics;
pub mod scattering;
pub mod spinor_oracle;
pub mod verify;

pub use config::{Barrier, StepConfig};
pub use error::{Error, Result};
pub use kinematics::{IncidenceAngle, MediumParams, ZoneLabel, ZoneSide};
pub use scattering::{IncidentAmplitudes, ScatteredAmplitudes};
