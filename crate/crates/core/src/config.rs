//! Run configuration shared by the scan routines and the command line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{IncidenceAngle, MediumParams, ZoneSide};
use crate::scattering::IncidentAmplitudes;

const MAGNITUDE_TOLERANCE: f64 = 1e-9;

/// Largest incidence angle sampled by default, just short of grazing.
pub const DEFAULT_THETA_MAX: f64 = std::f64::consts::FRAC_PI_2 - 1e-3;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Barrier {
    Potential { nu: f64 },
    Critical { sin_theta_c: f64, zone_side: ZoneSide },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepConfig {
    pub mu: f64,
    pub barrier: Barrier,
    pub i_plus_mag: f64,
    pub i_minus_mag: f64,
    pub delta_omega: f64,
    pub theta_samples: usize,
    pub theta_max: f64,
}

impl StepConfig {
    /// Checks every field and renormalises the helicity magnitudes.
    pub fn new(
        mu: f64,
        barrier: Barrier,
        i_plus_mag: f64,
        i_minus_mag: f64,
        delta_omega: f64,
        theta_samples: usize,
        theta_max: f64,
    ) -> Result<Self> {
        if !(i_plus_mag >= 0.0 && i_minus_mag >= 0.0) {
            return Err(Error::Config(format!(
                "helicity magnitudes must be non-negative, got {i_plus_mag} and {i_minus_mag}"
            )));
        }
        let norm_sqr = i_plus_mag * i_plus_mag + i_minus_mag * i_minus_mag;
        if (norm_sqr - 1.0).abs() > MAGNITUDE_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        if !delta_omega.is_finite() {
            return Err(Error::Config(format!("delta_omega = {delta_omega} is not finite")));
        }
        if theta_samples < 2 {
            return Err(Error::Config(format!(
                "theta_samples = {theta_samples}, need at least 2"
            )));
        }
        if !(theta_max > 0.0 && theta_max < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidAngle { theta: theta_max });
        }
        let norm = norm_sqr.sqrt();
        let config = Self {
            mu,
            barrier,
            i_plus_mag: i_plus_mag / norm,
            i_minus_mag: i_minus_mag / norm,
            delta_omega,
            theta_samples,
            theta_max,
        };
        config.medium()?;
        Ok(config)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        raw.resolve()
    }

    pub fn medium(&self) -> Result<MediumParams> {
        match self.barrier {
            Barrier::Potential { nu } => MediumParams::new(self.mu, nu),
            Barrier::Critical {
                sin_theta_c,
                zone_side,
            } => MediumParams::from_critical(self.mu, sin_theta_c, zone_side),
        }
    }

    pub fn incident(&self) -> Result<IncidentAmplitudes> {
        IncidentAmplitudes::from_polar(self.i_plus_mag, self.i_minus_mag, self.delta_omega)
    }

    /// `theta_samples` angles uniform in `sin θ` over `(0, sin θ_max]`.
    pub fn theta_grid(&self) -> Result<Vec<IncidenceAngle>> {
        let top = self.theta_max.sin();
        let n = self.theta_samples;
        (1..=n)
            .map(|k| IncidenceAngle::from_sine(top * k as f64 / n as f64))
            .collect()
    }
}

/// Partially specified configuration as read from JSON or assembled from
/// command-line flags. Later layers override earlier ones via [`merge`].
///
/// [`merge`]: RawConfig::merge
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub sin_theta_c: Option<f64>,
    pub zone_side: Option<ZoneSide>,
    pub i_plus_mag: Option<f64>,
    pub i_minus_mag: Option<f64>,
    pub delta_omega: Option<f64>,
    pub theta_samples: Option<usize>,
    pub theta_max: Option<f64>,
}

impl RawConfig {
    pub fn merge(self, over: RawConfig) -> RawConfig {
        // a barrier given on top replaces the other parameterisation entirely
        let over_barrier = over.nu.is_some() || over.sin_theta_c.is_some();
        let (nu, sin_theta_c, zone_side) = if over_barrier {
            (over.nu, over.sin_theta_c, over.zone_side)
        } else {
            (self.nu, self.sin_theta_c, over.zone_side.or(self.zone_side))
        };
        RawConfig {
            mu: over.mu.or(self.mu),
            nu,
            sin_theta_c,
            zone_side,
            i_plus_mag: over.i_plus_mag.or(self.i_plus_mag),
            i_minus_mag: over.i_minus_mag.or(self.i_minus_mag),
            delta_omega: over.delta_omega.or(self.delta_omega),
            theta_samples: over.theta_samples.or(self.theta_samples),
            theta_max: over.theta_max.or(self.theta_max),
        }
    }

    pub fn resolve(&self) -> Result<StepConfig> {
        let mu = self
            .mu
            .ok_or_else(|| Error::Config("mu is required".into()))?;
        let barrier = match (self.nu, self.sin_theta_c) {
            (Some(nu), None) => {
                if self.zone_side.is_some() {
                    return Err(Error::Config(
                        "zone side only applies together with sin_theta_c".into(),
                    ));
                }
                Barrier::Potential { nu }
            }
            (None, Some(sin_theta_c)) => Barrier::Critical {
                sin_theta_c,
                zone_side: self.zone_side.unwrap_or(ZoneSide::Diffusion),
            },
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either nu or sin_theta_c, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config("one of nu or sin_theta_c is required".into()))
            }
        };
        let (i_plus, i_minus) = match (self.i_plus_mag, self.i_minus_mag) {
            (Some(p), Some(m)) => (p, m),
            (Some(p), None) => (p, (1.0 - p * p).max(0.0).sqrt()),
            (None, Some(m)) => ((1.0 - m * m).max(0.0).sqrt(), m),
            (None, None) => (1.0, 0.0),
        };
        StepConfig::new(
            mu,
            barrier,
            i_plus,
            i_minus,
            self.delta_omega.unwrap_or(0.0),
            self.theta_samples.unwrap_or(DEFAULT_SAMPLES),
            self.theta_max.unwrap_or(DEFAULT_THETA_MAX),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_critical_barrier() {
        let cfg = StepConfig::from_json(
            r#"{"mu": 0.5, "sin_theta_c": 0.5, "zone_side": "klein", "theta_samples": 10}"#,
        )
        .unwrap();
        assert_eq!(
            cfg.barrier,
            Barrier::Critical {
                sin_theta_c: 0.5,
                zone_side: ZoneSide::Klein
            }
        );
        assert_eq!(cfg.i_plus_mag, 1.0);
        assert!(cfg.medium().unwrap().nu() > 1.0);
        let grid = cfg.theta_grid().unwrap();
        assert_eq!(grid.len(), 10);
        assert!((grid[9].sin() - DEFAULT_THETA_MAX.sin()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"mu": 0.5}"#,
            r#"{"mu": 0.5, "nu": 0.2, "sin_theta_c": 0.5}"#,
            r#"{"mu": 0.5, "nu": 0.2, "i_plus_mag": 0.9, "i_minus_mag": 0.9}"#,
            r#"{"mu": 1.5, "nu": 0.2}"#,
            r#"{"mu": 0.5, "nu": 0.2, "theta_samples": 1}"#,
            r#"{"mu": 0.5, "nu": 0.2, "bogus": 1}"#,
        ] {
            assert!(StepConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn magnitudes_are_renormalised() {
        let raw = RawConfig {
            mu: Some(0.5),
            nu: Some(0.2),
            i_plus_mag: Some(0.6),
            i_minus_mag: Some(0.8 + 4e-10),
            ..Default::default()
        };
        let cfg = raw.resolve().unwrap();
        let n = cfg.i_plus_mag.powi(2) + cfg.i_minus_mag.powi(2);
        assert!((n - 1.0).abs() < 1e-15);
    }

    #[test]
    fn later_layer_wins() {
        let file = RawConfig {
            mu: Some(0.5),
            sin_theta_c: Some(0.5),
            zone_side: Some(ZoneSide::Klein),
            ..Default::default()
        };
        let flags = RawConfig {
            mu: Some(0.3),
            nu: Some(0.1),
            zone_side: None,
            ..Default::default()
        };
        let merged = file.clone().merge(flags);
        assert_eq!(merged.mu, Some(0.3));
        assert_eq!(merged.sin_theta_c, None);
        assert_eq!(merged.zone_side, None);
        let cfg = merged.resolve().unwrap();
        assert_eq!(cfg.barrier, Barrier::Potential { nu: 0.1 });

        let side_only = RawConfig {
            zone_side: Some(ZoneSide::Diffusion),
            ..Default::default()
        };
        let cfg = file.merge(side_only).resolve().unwrap();
        assert!(cfg.medium().unwrap().nu() < 1.0);
    }
}
