//! Parity–spin entanglement of the incident, reflected and transmitted waves.
//!
//! A superposition `α+ ψ+ + α- ψ-` of helicity plane waves is a two-qubit
//! pure state whose parity reduction has eigenvalues
//!
//! ```text
//! λ± = 1/2 ± sqrt(1/4 - 4κ²/(1+κ²)² · |α+|²|α-|² / (|α+|²+|α-|²)²)
//! ```
//!
//! with `κ` the ratio of lower to upper spinor normalisations of the wave.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::StepConfig;
use crate::error::{Error, Result};
use crate::kinematics::{IncidenceAngle, MediumParams, ZoneLabel};
use crate::scattering::{solve, IncidentAmplitudes, Solution};
use num_complex::Complex64;

const NEGATIVE_FLOOR: f64 = -1e-12;
const REAL_PHASE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Wave {
    Incident,
    Reflected,
    Transmitted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaFactor {
    pub value: f64,
    pub wave: Wave,
}

/// `κ_I = κ_R = sqrt((1-μ)/(1+μ))`, `κ_T = sqrt((1-ν-μ)/(1-ν+μ))` with
/// `1-ν -> ν-1` in the Klein zone.
pub fn kappa(wave: Wave, mu: f64, nu: f64) -> Result<KappaFactor> {
    let value = match wave {
        Wave::Incident | Wave::Reflected => ((1.0 - mu) / (1.0 + mu)).sqrt(),
        Wave::Transmitted => {
            let eps = (1.0 - nu).abs();
            if (eps - mu) * (eps + mu) <= 0.0 {
                return Err(Error::EvanescentKappa { mu, nu });
            }
            ((eps - mu) / (eps + mu)).sqrt()
        }
    };
    Ok(KappaFactor { value, wave })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParityObservables {
    pub p_odd: f64,
    pub p_even: f64,
    pub avg_parity: f64,
}

pub fn parity_observables(kappa: KappaFactor) -> ParityObservables {
    let k2 = kappa.value * kappa.value;
    ParityObservables {
        p_odd: 1.0 / (1.0 + k2),
        p_even: k2 / (1.0 + k2),
        avg_parity: (1.0 - k2) / (1.0 + k2),
    }
}

/// Eigenvalues of a 2×2 reduced density matrix, `λ+ ≥ λ-`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedSpectrum {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl ReducedSpectrum {
    /// Orders a numerically obtained pair, flooring round-off negatives.
    pub fn from_eigenvalues(a: f64, b: f64) -> Result<Self> {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if lo < NEGATIVE_FLOOR {
            return Err(Error::NegativeEigenvalue { lambda: lo });
        }
        Ok(Self {
            lambda_plus: hi,
            lambda_minus: lo.max(0.0),
        })
    }

    /// Spectrum of `1/2 ± sqrt(1/4 - det)`, with the small root taken as
    /// `det/λ+` to avoid cancellation.
    fn from_determinant(det: f64) -> Result<Self> {
        let disc = 0.25 - det;
        if disc < NEGATIVE_FLOOR {
            return Err(Error::NegativeEigenvalue {
                lambda: 0.5 - disc.abs().sqrt(),
            });
        }
        let lambda_plus = 0.5 + disc.max(0.0).sqrt();
        Ok(Self {
            lambda_plus,
            lambda_minus: det.max(0.0) / lambda_plus,
        })
    }
}

pub fn reduced_spectrum(
    kappa: KappaFactor,
    a_plus: Complex64,
    a_minus: Complex64,
) -> Result<ReducedSpectrum> {
    let (p, m) = (a_plus.norm_sqr(), a_minus.norm_sqr());
    let total = p + m;
    if total == 0.0 {
        return Err(Error::ZeroAmplitudes);
    }
    let k2 = kappa.value * kappa.value;
    let weight = 4.0 * k2 / ((1.0 + k2) * (1.0 + k2));
    ReducedSpectrum::from_determinant(weight * (p / total) * (m / total))
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Base-2 entropy of the spectrum.
pub fn von_neumann_entropy(spec: &ReducedSpectrum) -> f64 {
    -(xlog2x(spec.lambda_plus) + xlog2x(spec.lambda_minus))
}

/// Closed-form `⟨γ⁵⟩` of a wave with helicity amplitudes `(a+, a-)`, not
/// divided by `|a+|² + |a-|²`.
///
/// Incident and reflected waves carry `sqrt(1-μ²)`; the transmitted one
/// carries `± sqrt((1-μ²) sin²θc / ((1-μ²) sin²θc + μ²))`, `-` in the Klein
/// zone. Only meaningful for an oscillatory transmitted wave.
pub fn chirality(wave: Wave, medium: &MediumParams, a_plus: Complex64, a_minus: Complex64) -> f64 {
    let mu = medium.mu();
    let gap = (1.0 - mu) * (1.0 + mu);
    let factor = match wave {
        Wave::Incident | Wave::Reflected => gap.sqrt(),
        Wave::Transmitted => {
            let s2 = gap * medium.sin2_critical();
            medium.side().sign() * (s2 / (s2 + mu * mu)).sqrt()
        }
    };
    factor * (a_plus.norm_sqr() - a_minus.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub entropy: f64,
    pub spectrum: ReducedSpectrum,
    pub p_odd: f64,
    pub p_even: f64,
    pub avg_parity: f64,
    pub chirality: f64,
}

pub fn report(
    wave: Wave,
    medium: &MediumParams,
    a_plus: Complex64,
    a_minus: Complex64,
) -> Result<EntanglementReport> {
    let k = kappa(wave, medium.mu(), medium.nu())?;
    let spectrum = reduced_spectrum(k, a_plus, a_minus)?;
    let parity = parity_observables(k);
    Ok(EntanglementReport {
        entropy: von_neumann_entropy(&spectrum),
        spectrum,
        p_odd: parity.p_odd,
        p_even: parity.p_even,
        avg_parity: parity.avg_parity,
        chirality: chirality(wave, medium, a_plus, a_minus),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalPoint {
    pub sin_theta: f64,
    pub spectrum: ReducedSpectrum,
}

/// The two stationary points of `S_R` for real incident amplitudes:
/// normal incidence and `sin θ0 = μ/sqrt(1+μ²)`.
pub fn extremal_points(mu: f64, inc: &IncidentAmplitudes) -> Result<[ExtremalPoint; 2]> {
    let cross = inc.plus() * inc.minus().conj();
    if cross.im.abs() > REAL_PHASE_TOLERANCE * cross.norm().max(1.0) {
        return Err(Error::PreconditionPhase {
            delta_omega: inc.relative_phase(),
        });
    }
    let product = cross.norm_sqr();
    let gap = (1.0 - mu) * (1.0 + mu);
    let m = mu.abs();
    Ok([
        ExtremalPoint {
            sin_theta: 0.0,
            spectrum: ReducedSpectrum::from_determinant(gap * product)?,
        },
        ExtremalPoint {
            sin_theta: m / (1.0 + m * m).sqrt(),
            spectrum: ReducedSpectrum {
                lambda_plus: 0.5 * (1.0 + m),
                lambda_minus: 0.5 * (1.0 - m),
            },
        },
    ])
}

/// Everything derived at one incidence angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointObservables {
    pub sin_theta: f64,
    pub solution: Solution,
    pub incident: EntanglementReport,
    /// `None` only when nothing is reflected.
    pub reflected: Option<EntanglementReport>,
    /// `None` when the transmitted wave is evanescent.
    pub transmitted: Option<EntanglementReport>,
}

impl PointObservables {
    pub fn zone(&self) -> ZoneLabel {
        self.solution.zone
    }

    pub fn s_r(&self) -> Option<f64> {
        self.reflected.map(|r| r.entropy)
    }

    pub fn s_t(&self) -> Option<f64> {
        self.transmitted.map(|t| t.entropy)
    }

    pub fn r2_total(&self) -> f64 {
        self.solution.amplitudes.reflected_probability()
    }

    /// Transmitted probability weighted by the normal-velocity ratio.
    pub fn t2_flux(&self) -> f64 {
        self.solution.flux_ratio * self.solution.amplitudes.transmitted_weight()
    }
}

fn optional(r: Result<EntanglementReport>) -> Result<Option<EntanglementReport>> {
    match r {
        Ok(rep) => Ok(Some(rep)),
        Err(Error::ZeroAmplitudes) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn evaluate_point(
    medium: &MediumParams,
    theta: IncidenceAngle,
    inc: &IncidentAmplitudes,
) -> Result<PointObservables> {
    let solution = solve(medium, theta, inc)?;
    let amps = solution.amplitudes;
    let incident = report(Wave::Incident, medium, inc.plus(), inc.minus())?;
    let reflected = optional(report(Wave::Reflected, medium, amps.r_plus, amps.r_minus))?;
    let transmitted = if solution.zone.is_oscillatory() {
        optional(report(Wave::Transmitted, medium, amps.t_plus, amps.t_minus))?
    } else {
        None
    };
    Ok(PointObservables {
        sin_theta: theta.sin(),
        solution,
        incident,
        reflected,
        transmitted,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub theta: IncidenceAngle,
    pub outcome: Result<PointObservables>,
}

impl ScanPoint {
    pub fn s_r(&self) -> Option<f64> {
        self.outcome.as_ref().ok().and_then(|p| p.s_r())
    }

    pub fn s_t(&self) -> Option<f64> {
        self.outcome.as_ref().ok().and_then(|p| p.s_t())
    }
}

/// Evaluates every grid angle in parallel. Output order follows `grid`, and a
/// failing point is recorded in place rather than aborting the scan.
pub fn entropy_scan(config: &StepConfig, grid: &[IncidenceAngle]) -> Result<Vec<ScanPoint>> {
    let medium = config.medium()?;
    let inc = config.incident()?;
    Ok(grid
        .par_iter()
        .map(|&theta| ScanPoint {
            theta,
            outcome: evaluate_point(&medium, theta, &inc),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

/// Golden-section search for an extremum of `f` on `[lo, hi]`.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, kind: Extremum, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let sign = match kind {
        Extremum::Min => 1.0,
        Extremum::Max => -1.0,
    };
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = sign * f(x1)?;
    let mut f2 = sign * f(x2)?;
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = sign * f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = sign * f(x2)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Locates an extremum of `S_T` in `sin θ` inside an oscillatory bracket.
pub fn transmitted_extremum(
    medium: &MediumParams,
    inc: &IncidentAmplitudes,
    sin_lo: f64,
    sin_hi: f64,
    kind: Extremum,
) -> Result<(f64, f64)> {
    golden_section(
        |s| {
            let theta = IncidenceAngle::from_sine(s)?;
            let obs = evaluate_point(medium, theta, inc)?;
            obs.s_t().ok_or(Error::EvanescentKappa {
                mu: medium.mu(),
                nu: medium.nu(),
            })
        },
        sin_lo,
        sin_hi,
        kind,
        1e-10,
    )
}

/// `E -> -E`, `V -> -V`, i.e. `μ -> -μ` at fixed `ν` and `sin θc`.
pub fn antiparticle_transform(config: &StepConfig) -> StepConfig {
    StepConfig {
        mu: -config.mu,
        ..*config
    }
}
