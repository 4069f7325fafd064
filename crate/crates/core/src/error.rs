use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mass ratio mu = {mu} must satisfy |mu| < 1 for a propagating incident wave")]
    InvalidMass { mu: f64 },
    #[error("potential ratio nu = {nu} must be finite and non-negative")]
    InvalidPotential { nu: f64 },
    #[error("incidence angle {theta} rad is outside [0, pi/2)")]
    InvalidAngle { theta: f64 },
    #[error("grazing incidence (theta = pi/2) carries no normal flux")]
    GrazingIncidence,
    #[error("critical sine {sin_theta_c} is outside [0, 1]")]
    InvalidCriticalSine { sin_theta_c: f64 },
    #[error("transmitted momentum is degenerate at mu = {mu}, nu = {nu}")]
    DegenerateTransmission { mu: f64, nu: f64 },
    #[error("A-parameter denominator vanishes at mu = {mu}, sin(theta) = {sin_theta}, sin^2(theta_c) = {sin2_c}")]
    SingularDenominator { mu: f64, sin_theta: f64, sin2_c: f64 },
    #[error("incident amplitudes have squared norm {norm_sqr}, expected 1")]
    NotNormalized { norm_sqr: f64 },
    #[error("boundary-matching system is singular (condition number {condition:e})")]
    SingularSystem { condition: f64 },
    #[error("state vector is zero")]
    ZeroState,
    #[error("both helicity amplitudes are zero")]
    ZeroAmplitudes,
    #[error("transmitted kappa is not real at mu = {mu}, nu = {nu}")]
    EvanescentKappa { mu: f64, nu: f64 },
    #[error("reduced eigenvalue {lambda} is negative beyond round-off")]
    NegativeEigenvalue { lambda: f64 },
    #[error("extremal points need real amplitudes; relative phase is {delta_omega}")]
    PreconditionPhase { delta_omega: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
