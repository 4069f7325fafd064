//! Dimensionless step geometry: zone classification, relativistic Snell
//! refraction, critical angle and normal flux velocities.
//!
//! Every quantity is expressed through `mu = m/E` and `nu = V0/E` in natural
//! units. Momenta are measured in units of `E`, so the incident momentum is
//! `sqrt(1 - mu^2)` and the transmitted one `sqrt((1 - nu)^2 - mu^2)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this magnitude `(1 - nu)^2 - mu^2` is treated as a vanishing
/// transmitted momentum.
const DEGENERATE_MOMENTUM: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZoneSide {
    /// `nu <= 1`: the particle sits above the step.
    Diffusion,
    /// `nu > 1`: Klein regime.
    Klein,
}

impl ZoneSide {
    /// `+1` for diffusion, `-1` for Klein.
    pub fn sign(self) -> f64 {
        match self {
            ZoneSide::Diffusion => 1.0,
            ZoneSide::Klein => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ZoneSide::Diffusion => "diffusion",
            ZoneSide::Klein => "klein",
        }
    }
}

impl fmt::Display for ZoneSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ZoneSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diffusion" => Ok(ZoneSide::Diffusion),
            "klein" => Ok(ZoneSide::Klein),
            other => Err(Error::Config(format!("unknown zone side '{other}'"))),
        }
    }
}

/// Dimensionless mass and potential ratios of the step.
///
/// A negative `mu` describes the antiparticle-conjugate problem
/// (`E -> -E`, `V -> -V`); only `|mu| < 1` is required for the incident
/// wave to propagate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    mu: f64,
    nu: f64,
    sin2_c: f64,
    side: ZoneSide,
}

impl MediumParams {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !mu.is_finite() || mu.abs() >= 1.0 {
            return Err(Error::InvalidMass { mu });
        }
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::InvalidPotential { nu });
        }
        let eps = 1.0 - nu;
        let side = if nu <= 1.0 {
            ZoneSide::Diffusion
        } else {
            ZoneSide::Klein
        };
        Ok(Self {
            mu,
            nu,
            sin2_c: (eps - mu) * (eps + mu) / one_minus_sqr(mu),
            side,
        })
    }

    /// Builds the medium whose critical angle has sine `sin_theta_c` on the
    /// requested side of `nu = 1`.
    pub fn from_critical(mu: f64, sin_theta_c: f64, side: ZoneSide) -> Result<Self> {
        if !(0.0..=1.0).contains(&sin_theta_c) {
            return Err(Error::InvalidCriticalSine { sin_theta_c });
        }
        if !mu.is_finite() || mu.abs() >= 1.0 {
            return Err(Error::InvalidMass { mu });
        }
        let nu = nu_from_critical(mu, sin_theta_c, side);
        if nu < 0.0 {
            return Err(Error::InvalidPotential { nu });
        }
        Ok(Self {
            mu,
            nu,
            sin2_c: sin_theta_c * sin_theta_c,
            side,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn side(&self) -> ZoneSide {
        self.side
    }

    /// `sin^2(theta_c)`, exact when the medium was built from its critical
    /// angle.
    pub fn sin2_critical(&self) -> f64 {
        self.sin2_c
    }

    /// Same medium with the mass ratio negated (antiparticle conjugate).
    pub fn conjugate(&self) -> Self {
        Self {
            mu: -self.mu,
            ..*self
        }
    }

    /// Kinetic energy ratio `(E - V0)/E` in region B.
    pub fn energy_ratio(&self) -> f64 {
        1.0 - self.nu
    }

    /// `(1 - nu)^2 - mu^2`, the squared transmitted momentum.
    pub fn transmitted_momentum_sqr(&self) -> f64 {
        let eps = self.energy_ratio();
        (eps - self.mu) * (eps + self.mu)
    }

    /// `1 - mu^2`, the squared incident momentum.
    pub fn incident_momentum_sqr(&self) -> f64 {
        one_minus_sqr(self.mu)
    }
}

fn one_minus_sqr(x: f64) -> f64 {
    (1.0 - x) * (1.0 + x)
}

/// `mu^2 + (1 - mu^2) sin^2(theta)`: the squared threshold that `|1 - nu|`
/// must exceed for an oscillatory transmitted wave.
fn reach_sqr(mu: f64, sin_theta: f64) -> f64 {
    mu * mu + one_minus_sqr(mu) * sin_theta * sin_theta
}

/// Angle of incidence in `[0, pi/2)`; keeps sine and cosine exact when the
/// angle was specified through its sine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidenceAngle {
    theta: f64,
    sin: f64,
    cos: f64,
}

impl IncidenceAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if theta == FRAC_PI_2 {
            return Err(Error::GrazingIncidence);
        }
        if !theta.is_finite() || !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidAngle { theta });
        }
        Ok(Self {
            theta,
            sin: theta.sin(),
            cos: theta.cos(),
        })
    }

    pub fn from_sine(sin_theta: f64) -> Result<Self> {
        if sin_theta == 1.0 {
            return Err(Error::GrazingIncidence);
        }
        if !sin_theta.is_finite() || !(0.0..1.0).contains(&sin_theta) {
            return Err(Error::InvalidAngle {
                theta: sin_theta.asin(),
            });
        }
        Ok(Self {
            theta: sin_theta.asin(),
            sin: sin_theta,
            cos: one_minus_sqr(sin_theta).sqrt(),
        })
    }

    pub fn radians(&self) -> f64 {
        self.theta
    }

    pub fn sin(&self) -> f64 {
        self.sin
    }

    pub fn cos(&self) -> f64 {
        self.cos
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZoneLabel {
    DiffusionOscillatory,
    KleinOscillatory,
    /// Evanescent transmission with `nu <= 1`.
    TunnelingSub,
    /// Evanescent transmission with `nu > 1`.
    TunnelingKlein,
}

impl ZoneLabel {
    pub fn is_oscillatory(self) -> bool {
        matches!(self, ZoneLabel::DiffusionOscillatory | ZoneLabel::KleinOscillatory)
    }

    pub fn side(self) -> ZoneSide {
        match self {
            ZoneLabel::DiffusionOscillatory | ZoneLabel::TunnelingSub => ZoneSide::Diffusion,
            ZoneLabel::KleinOscillatory | ZoneLabel::TunnelingKlein => ZoneSide::Klein,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ZoneLabel::DiffusionOscillatory => "diffusion-oscillatory",
            ZoneLabel::KleinOscillatory => "klein-oscillatory",
            ZoneLabel::TunnelingSub => "tunneling-sub",
            ZoneLabel::TunnelingKlein => "tunneling-klein",
        }
    }
}

impl fmt::Display for ZoneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Transmission angle continued into the complex plane where needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refraction {
    /// Real whenever the transmitted momentum is real.
    pub sin_theta_prime: Complex64,
    /// `+i sqrt(sin^2 - 1)` in the evanescent regime so the wave decays
    /// toward `x -> +inf`.
    pub cos_theta_prime: Complex64,
    pub evanescent: bool,
    /// Ratio of the lower-component normalisations of the transmitted and
    /// incident unit spinors; negative in the Klein zone.
    pub spinor_ratio: Complex64,
}

impl Refraction {
    /// `e^{i theta'}`.
    pub fn phase(&self) -> Complex64 {
        self.cos_theta_prime + Complex64::i() * self.sin_theta_prime
    }

    /// `e^{i theta'/2}` on the principal branch, continuous from the
    /// oscillatory side through `theta' = pi/2`.
    pub fn half_phase(&self) -> Complex64 {
        self.phase().sqrt()
    }
}

/// `((1 - nu)^2 - mu^2) / (1 - mu^2)`. Negative values mean no angle admits
/// an oscillatory transmitted wave; values above one mean every angle does.
pub fn critical_sine_squared(params: &MediumParams) -> f64 {
    params.transmitted_momentum_sqr() / params.incident_momentum_sqr()
}

/// Inverse of [`critical_sine_squared`] on the requested side of `nu = 1`.
pub fn nu_from_critical(mu: f64, sin_theta_c: f64, side: ZoneSide) -> f64 {
    let root = reach_sqr(mu, sin_theta_c).sqrt();
    1.0 - side.sign() * root
}

pub fn classify(params: &MediumParams, theta: IncidenceAngle) -> ZoneLabel {
    let eps = params.energy_ratio();
    // |1 - nu| > sqrt(reach) decides oscillation; equality is tunneling.
    let oscillatory = eps * eps - reach_sqr(params.mu, theta.sin) > 0.0;
    match (oscillatory, eps > 0.0) {
        (true, true) => ZoneLabel::DiffusionOscillatory,
        (true, false) => ZoneLabel::KleinOscillatory,
        (false, _) if params.nu <= 1.0 => ZoneLabel::TunnelingSub,
        (false, _) => ZoneLabel::TunnelingKlein,
    }
}

pub fn refract(params: &MediumParams, theta: IncidenceAngle) -> Result<Refraction> {
    let mu = params.mu;
    let eps = params.energy_ratio();
    let q_sqr = params.transmitted_momentum_sqr();
    if q_sqr.abs() <= DEGENERATE_MOMENTUM || eps == 0.0 {
        return Err(Error::DegenerateTransmission { mu, nu: params.nu });
    }
    let q = Complex64::new(q_sqr, 0.0).sqrt();
    let k_y = params.incident_momentum_sqr().sqrt() * theta.sin;
    let kx_sqr = eps * eps - reach_sqr(mu, theta.sin);
    let evanescent = kx_sqr <= 0.0;
    let k_x = if evanescent {
        Complex64::new(0.0, (-kx_sqr).sqrt())
    } else {
        Complex64::new(kx_sqr.sqrt(), 0.0)
    };
    let spinor_ratio =
        Complex64::new((eps - mu) * eps, 0.0).sqrt() / (eps * (1.0 - mu).sqrt());
    Ok(Refraction {
        sin_theta_prime: k_y / q,
        cos_theta_prime: k_x / q,
        evanescent,
        spinor_ratio,
    })
}

/// Ratio `v_{q,x} / v_{p,x}` of the normal group velocities. Carries the sign
/// of `1 - nu`, so it is negative in the Klein zone, and is exactly zero when
/// the transmitted wave is evanescent.
pub fn flux_ratio(params: &MediumParams, theta: IncidenceAngle) -> Result<f64> {
    let refraction = refract(params, theta)?;
    if refraction.evanescent {
        return Ok(0.0);
    }
    let v_qx = refraction.cos_theta_prime.re * params.transmitted_momentum_sqr().sqrt()
        / params.energy_ratio();
    let v_px = theta.cos * params.incident_momentum_sqr().sqrt();
    Ok(v_qx / v_px)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const NU_DIFF: f64 = 0.338_562_172_233_852_3;
    const NU_KLEIN: f64 = 1.661_437_827_766_147_7;

    fn medium(mu: f64, nu: f64) -> MediumParams {
        MediumParams::new(mu, nu).unwrap()
    }

    #[test]
    fn critical_sine_examples() {
        assert_eq!(critical_sine_squared(&medium(0.0, 0.0)), 1.0);
        assert_abs_diff_eq!(critical_sine_squared(&medium(0.5, NU_DIFF)), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(critical_sine_squared(&medium(0.5, 1.0)), -1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn nu_from_critical_examples() {
        assert_eq!(nu_from_critical(0.5, 1.0, ZoneSide::Diffusion), 0.0);
        // 1 -/+ sqrt(0.4375)
        assert_abs_diff_eq!(
            nu_from_critical(0.5, 0.5, ZoneSide::Diffusion),
            0.338_562_172_2,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            nu_from_critical(0.5, 0.5, ZoneSide::Klein),
            1.661_437_827_8,
            epsilon = 1e-10
        );
        for side in [ZoneSide::Diffusion, ZoneSide::Klein] {
            let nu = nu_from_critical(0.5, 0.5, side);
            assert_abs_diff_eq!(critical_sine_squared(&medium(0.5, nu)), 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn classify_examples() {
        let any = IncidenceAngle::from_sine(0.9).unwrap();
        assert_eq!(classify(&medium(0.5, 0.0), any), ZoneLabel::DiffusionOscillatory);
        let past = IncidenceAngle::from_sine(0.6).unwrap();
        assert_eq!(classify(&medium(0.5, NU_DIFF), past), ZoneLabel::TunnelingSub);
        assert_eq!(classify(&medium(0.5, NU_KLEIN), past), ZoneLabel::TunnelingKlein);
        let below = IncidenceAngle::from_sine(0.3).unwrap();
        assert_eq!(classify(&medium(0.5, NU_KLEIN), below), ZoneLabel::KleinOscillatory);
        // sin^2(theta_c) < 0: evanescent at every angle
        let normal = IncidenceAngle::new(0.0).unwrap();
        assert_eq!(classify(&medium(0.5, 1.0), normal), ZoneLabel::TunnelingSub);
        assert_eq!(classify(&medium(0.5, 1.2), normal), ZoneLabel::TunnelingKlein);
    }

    #[test]
    fn refract_examples() {
        let normal = IncidenceAngle::new(0.0).unwrap();
        let r = refract(&medium(0.5, NU_DIFF), normal).unwrap();
        assert_eq!(r.sin_theta_prime, Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!(r.cos_theta_prime.re, 1.0, epsilon = 1e-15);
        assert!(!r.evanescent);

        let r = refract(&medium(0.5, NU_DIFF), IncidenceAngle::from_sine(0.25).unwrap()).unwrap();
        assert_abs_diff_eq!(r.sin_theta_prime.re, 0.5, epsilon = 1e-12);
        assert_eq!(r.sin_theta_prime.im, 0.0);

        let r = refract(&medium(0.5, NU_DIFF), IncidenceAngle::from_sine(0.6).unwrap()).unwrap();
        assert!(r.evanescent);
        assert_abs_diff_eq!(r.sin_theta_prime.re, 1.2, epsilon = 1e-12);
        assert_abs_diff_eq!(r.cos_theta_prime.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.cos_theta_prime.im, 0.44f64.sqrt(), epsilon = 1e-12);
        let one = r.sin_theta_prime.powi(2) + r.cos_theta_prime.powi(2);
        assert_abs_diff_eq!(one.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(one.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn refract_rejects_vanishing_momentum() {
        let theta = IncidenceAngle::from_sine(0.2).unwrap();
        assert!(matches!(
            refract(&medium(0.5, 0.5), theta),
            Err(Error::DegenerateTransmission { .. })
        ));
        assert!(matches!(
            refract(&medium(0.5, 1.0), theta),
            Err(Error::DegenerateTransmission { .. })
        ));
        assert!(matches!(
            flux_ratio(&medium(0.5, 1.5), theta),
            Err(Error::DegenerateTransmission { .. })
        ));
    }

    #[test]
    fn flux_ratio_examples() {
        let normal = IncidenceAngle::new(0.0).unwrap();
        assert_abs_diff_eq!(flux_ratio(&medium(0.5, 0.0), normal).unwrap(), 1.0, epsilon = 1e-15);
        assert!(flux_ratio(&medium(0.5, NU_KLEIN), normal).unwrap() < 0.0);
        let past = IncidenceAngle::from_sine(0.6).unwrap();
        assert_eq!(flux_ratio(&medium(0.5, NU_DIFF), past).unwrap(), 0.0);
        assert_eq!(flux_ratio(&medium(0.5, NU_KLEIN), past).unwrap(), 0.0);
    }

    #[test]
    fn klein_flux_magnitude_matches_group_velocity() {
        // v_q = q/(1 - nu) at normal incidence, v_p = sqrt(1 - mu^2)
        let m = medium(0.5, NU_KLEIN);
        let q = m.transmitted_momentum_sqr().sqrt();
        let expected = q / (1.0 - NU_KLEIN) / 0.75f64.sqrt();
        let got = flux_ratio(&m, IncidenceAngle::new(0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-14);
    }

    #[test]
    fn angle_validation() {
        assert!(matches!(IncidenceAngle::new(FRAC_PI_2), Err(Error::GrazingIncidence)));
        assert!(matches!(IncidenceAngle::from_sine(1.0), Err(Error::GrazingIncidence)));
        assert!(IncidenceAngle::new(-0.1).is_err());
        assert!(IncidenceAngle::from_sine(1.2).is_err());
        assert!(MediumParams::new(1.0, 0.0).is_err());
        assert!(MediumParams::new(0.5, -0.1).is_err());
        assert!(MediumParams::from_critical(0.5, 1.5, ZoneSide::Klein).is_err());
    }
}
