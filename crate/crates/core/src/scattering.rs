//! Closed-form reflection and transmission amplitudes in the helicity basis.
//!
//! Everything is driven by the complex parameter `A`. The reflected
//! amplitudes are
//!
//! ```text
//! R± = ± i Im[A] I± ∓ Re[A] I∓
//! ```
//!
//! and the transmitted ones are
//!
//! ```text
//! T± = e^{i(θ-θ')/2} / a_T · ( Re[X] I± + i Im[Y] I∓ )
//! X, Y = e^{i(θ-θ')/2} ± e^{i(θ+θ')/2} A
//! ```
//!
//! where `a_T` is the lower-component ratio stored in [`Refraction`]. Past the
//! critical angle `θ'` is complex, and `Re`/`Im` are taken as the analytic
//! symmetric and antisymmetric parts: the conjugate partner of each quantity
//! flips `i -> -i` while keeping the continued square root and `cos θ'`
//! untouched. In the oscillatory regime this reduces to the ordinary real and
//! imaginary parts.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::{
    classify, flux_ratio, refract, IncidenceAngle, MediumParams, Refraction, ZoneLabel, ZoneSide,
};

const NORM_TOLERANCE: f64 = 1e-12;
const SINGULAR_DENOMINATOR: f64 = 1e-13;

/// Helicity amplitudes `(I+, I-)` of the incoming wave, normalised to unit
/// probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncidentAmplitudes {
    plus: Complex64,
    minus: Complex64,
}

impl IncidentAmplitudes {
    pub fn new(plus: Complex64, minus: Complex64) -> Result<Self> {
        let norm_sqr = plus.norm_sqr() + minus.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { plus, minus })
    }

    /// Rescales any nonzero pair to unit norm.
    pub fn normalized(plus: Complex64, minus: Complex64) -> Result<Self> {
        let norm = (plus.norm_sqr() + minus.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroAmplitudes);
        }
        Ok(Self {
            plus: plus / norm,
            minus: minus / norm,
        })
    }

    /// `I± = |I±| e^{±i Δω/2}`, so that `ω+ - ω- = Δω`.
    pub fn from_polar(mag_plus: f64, mag_minus: f64, delta_omega: f64) -> Result<Self> {
        Self::new(
            Complex64::from_polar(mag_plus, 0.5 * delta_omega),
            Complex64::from_polar(mag_minus, -0.5 * delta_omega),
        )
    }

    /// Pure positive-helicity wave, `I+ = 1`.
    pub fn helicity_plus() -> Self {
        Self {
            plus: Complex64::new(1.0, 0.0),
            minus: Complex64::new(0.0, 0.0),
        }
    }

    pub fn plus(&self) -> Complex64 {
        self.plus
    }

    pub fn minus(&self) -> Complex64 {
        self.minus
    }

    pub fn magnitudes(&self) -> (f64, f64) {
        (self.plus.norm(), self.minus.norm())
    }

    /// `Δω = ω+ - ω-`, zero when either amplitude vanishes.
    pub fn relative_phase(&self) -> f64 {
        if self.plus.norm() == 0.0 || self.minus.norm() == 0.0 {
            return 0.0;
        }
        (self.plus * self.minus.conj()).arg()
    }

    pub fn with_global_phase(&self, phase: f64) -> Self {
        let u = Complex64::from_polar(1.0, phase);
        Self {
            plus: self.plus * u,
            minus: self.minus * u,
        }
    }

    /// Complex conjugate amplitudes, which reverse the relative phase.
    pub fn conj(&self) -> Self {
        Self {
            plus: self.plus.conj(),
            minus: self.minus.conj(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteredAmplitudes {
    pub r_plus: Complex64,
    pub r_minus: Complex64,
    pub t_plus: Complex64,
    pub t_minus: Complex64,
}

impl ScatteredAmplitudes {
    /// `|R+|^2 + |R-|^2`.
    pub fn reflected_probability(&self) -> f64 {
        self.r_plus.norm_sqr() + self.r_minus.norm_sqr()
    }

    /// `|T+|^2 + |T-|^2`, before the flux weighting.
    pub fn transmitted_weight(&self) -> f64 {
        self.t_plus.norm_sqr() + self.t_minus.norm_sqr()
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.r_plus, self.r_minus, self.t_plus, self.t_minus]
    }

    /// Largest componentwise modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The `A` parameter together with its analytic conjugate partner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AParam {
    value: Complex64,
    partner: Complex64,
    side: ZoneSide,
}

impl AParam {
    pub fn value(&self) -> Complex64 {
        self.value
    }

    /// Same expression with `i -> -i` outside the continued square root.
    /// Equals `conj(A)` whenever the incidence is below the critical angle.
    pub fn partner(&self) -> Complex64 {
        self.partner
    }

    pub fn side(&self) -> ZoneSide {
        self.side
    }

    pub fn real_part(&self) -> Complex64 {
        0.5 * (self.value + self.partner)
    }

    pub fn imag_part(&self) -> Complex64 {
        (self.value - self.partner) / Complex64::new(0.0, 2.0)
    }
}

/// Evaluates `A` for the given critical angle. `sin2_c` may be negative
/// (transmission evanescent at every angle); the root
/// `sqrt(sin^2 θc - sin^2 θ)` continues to `i sqrt(sin^2 θ - sin^2 θc)`.
pub fn compute_a(mu: f64, theta: IncidenceAngle, sin2_c: f64, side: ZoneSide) -> Result<AParam> {
    let (sin, cos) = (theta.sin(), theta.cos());
    let cos2_c = 1.0 - sin2_c;
    let gap = sin2_c - sin * sin;
    let root = if gap >= 0.0 {
        Complex64::new(gap.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-gap).sqrt())
    };
    // sqrt(mu^2 cos^2 θc + sin^2 θc) = |1 - nu|
    let energy = (mu * mu * cos2_c + sin2_c).max(0.0).sqrt();
    let factor = 1.0 + side.sign() * energy;
    let angular = cos * cos + cos * root;
    let den = cos2_c - factor * angular;
    let scale = cos2_c.abs().max((factor * angular).norm());
    if den.norm() <= SINGULAR_DENOMINATOR * scale || den.norm() == 0.0 {
        return Err(Error::SingularDenominator {
            mu,
            sin_theta: sin,
            sin2_c,
        });
    }
    Ok(AParam {
        value: Complex64::new(mu * cos, sin) * cos2_c / den,
        partner: Complex64::new(mu * cos, -sin) * cos2_c / den,
        side,
    })
}

/// Applies the closed-form linear map to the incident amplitudes.
pub fn scatter(
    a: &AParam,
    theta: IncidenceAngle,
    refraction: &Refraction,
    inc: &IncidentAmplitudes,
) -> ScatteredAmplitudes {
    let i = Complex64::i();
    let (i_plus, i_minus) = (inc.plus, inc.minus);
    let re_a = a.real_part();
    let im_a = a.imag_part();

    let r_plus = i * im_a * i_plus - re_a * i_minus;
    let r_minus = re_a * i_plus - i * im_a * i_minus;

    let half = Complex64::new(theta.cos(), theta.sin()).sqrt();
    let half_prime = refraction.half_phase();
    let lead = half / half_prime;
    let trail = half * half_prime;
    // analytic partners: e^{-i(θ-θ')/2}, e^{-i(θ+θ')/2}
    let lead_partner = half_prime / half;
    let trail_partner = trail.inv();

    let x = lead + trail * a.value;
    let x_partner = lead_partner + trail_partner * a.partner;
    let y = lead - trail * a.value;
    let y_partner = lead_partner - trail_partner * a.partner;
    let re_x = 0.5 * (x + x_partner);
    let im_y = (y - y_partner) / Complex64::new(0.0, 2.0);

    let norm = lead / refraction.spinor_ratio;
    ScatteredAmplitudes {
        r_plus,
        r_minus,
        t_plus: norm * (re_x * i_plus + i * im_y * i_minus),
        t_minus: norm * (re_x * i_minus + i * im_y * i_plus),
    }
}

/// `|R+|^2 + |R-|^2 + (v_qx/v_px)(|T+|^2 + |T-|^2) - 1`.
pub fn conservation_residual(amps: &ScatteredAmplitudes, flux_ratio: f64) -> f64 {
    amps.reflected_probability() + flux_ratio * amps.transmitted_weight() - 1.0
}

/// Expansion of `|R+|^2 |R-|^2` in `Re A`, `Im A` and the relative phase
/// `Δω` of the incident amplitudes with moduli `mags`. Uses the real parts of
/// `A`, so it only applies below the critical angle.
pub fn reflected_product_with_phase(a: &AParam, mags: (f64, f64), delta_omega: f64) -> f64 {
    let re = a.value.re;
    let im = a.value.im;
    let (m_plus, m_minus) = mags;
    let cross = im * re;
    let split = im * im - re * re;
    let weight = m_plus * m_minus;
    let s = delta_omega.sin();
    cross * cross + split * split * weight * weight
        - 2.0 * cross * split * s * weight * (m_plus * m_plus - m_minus * m_minus)
        - 4.0 * cross * cross * s * s * weight * weight
}

/// Full closed-form solution at one incidence angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Solution {
    pub zone: ZoneLabel,
    pub a: AParam,
    #[serde(skip)]
    pub refraction: Refraction,
    pub flux_ratio: f64,
    pub amplitudes: ScatteredAmplitudes,
}

impl Solution {
    pub fn conservation_residual(&self) -> f64 {
        conservation_residual(&self.amplitudes, self.flux_ratio)
    }
}

pub fn solve(medium: &MediumParams, theta: IncidenceAngle, inc: &IncidentAmplitudes) -> Result<Solution> {
    let refraction = refract(medium, theta)?;
    let a = compute_a(medium.mu(), theta, medium.sin2_critical(), medium.side())?;
    Ok(Solution {
        zone: classify(medium, theta),
        a,
        refraction,
        flux_ratio: flux_ratio(medium, theta)?,
        amplitudes: scatter(&a, theta, &refraction, inc),
    })
}
