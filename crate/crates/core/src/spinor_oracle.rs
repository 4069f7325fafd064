//! Brute-force reference path.
//!
//! Builds explicit four-component plane waves, matches them at the interface
//! by a dense linear solve, and evaluates density matrices and expectation
//! values directly. Nothing here reuses the closed forms of
//! [`crate::scattering`] or [`crate::entanglement`]; the module exists to
//! check them.
//!
//! Basis ordering is parity ⊗ spin:
//! `(odd ↑, odd ↓, even ↑, even ↓)`. The Hamiltonian in units of `E` is
//!
//! ```text
//! H = kx σx⊗σx + ky σx⊗σy + μ σz⊗1
//! ```
//!
//! so the parity operator `diag(1, 1, -1, -1)` coincides with `β`, `Σ = 1⊗σ`
//! and `γ⁵ = σx⊗1` swaps the two parity blocks.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scattering::{IncidentAmplitudes, ScatteredAmplitudes};

const SINGULAR_CONDITION: f64 = 1e12;

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Parity,
    Helicity,
}

/// Energy and momentum of a plane wave, all divided by the incident energy.
/// `kx` may be imaginary for a wave decaying along `+x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveKinematics {
    pub energy: f64,
    pub mu: f64,
    pub kx: C,
    pub ky: f64,
}

impl WaveKinematics {
    /// Free wave of energy `energy` travelling at real angle `theta`.
    pub fn at_angle(energy: f64, mu: f64, theta: f64) -> Self {
        let k = ((energy - mu) * (energy + mu)).sqrt();
        Self {
            energy,
            mu,
            kx: c(k * theta.cos()),
            ky: k * theta.sin(),
        }
    }

    /// `|k| = sqrt(ε² - μ²)`, complex below the mass gap.
    pub fn momentum(&self) -> C {
        c((self.energy - self.mu) * (self.energy + self.mu)).sqrt()
    }

    /// `e^{iθ}` of the propagation direction, `(kx + i ky)/|k|`.
    pub fn direction(&self) -> C {
        (self.kx + C::new(0.0, self.ky)) / self.momentum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiSpinor {
    pub components: Vector4<C>,
}

impl BiSpinor {
    pub fn new(components: [C; 4]) -> Self {
        Self {
            components: Vector4::from(components),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.norm_squared()
    }

    pub fn scale(&self, factor: C) -> Self {
        Self {
            components: self.components * factor,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            components: self.components + other.components,
        }
    }

    pub fn parity_block_norms(&self) -> (f64, f64) {
        let v = &self.components;
        (
            v[0].norm_sqr() + v[1].norm_sqr(),
            v[2].norm_sqr() + v[3].norm_sqr(),
        )
    }

    /// `⟨ψ|O|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn expectation(&self, op: &Matrix4<C>) -> Result<C> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(self.components.dotc(&(op * self.components)) / n)
    }
}

fn pauli() -> [Matrix2<C>; 4] {
    let (o, l, i) = (c(0.0), c(1.0), C::i());
    [
        Matrix2::new(l, o, o, l),
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

fn kron(a: &Matrix2<C>, b: &Matrix2<C>) -> Matrix4<C> {
    a.kronecker(b).fixed_view::<4, 4>(0, 0).into_owned()
}

/// Dirac Hamiltonian for momentum `(kx, ky)` and mass `mu`.
pub fn hamiltonian(mu: f64, kx: C, ky: f64) -> Matrix4<C> {
    let [id, sx, sy, sz] = pauli();
    kron(&sx, &sx) * kx + kron(&sx, &sy) * c(ky) + kron(&sz, &id) * c(mu)
}

/// `γ⁵ = σx ⊗ 1`.
pub fn gamma5() -> Matrix4<C> {
    let [id, sx, _, _] = pauli();
    kron(&sx, &id)
}

/// `P = diag(1, 1, -1, -1)`.
pub fn parity_operator() -> Matrix4<C> {
    let [id, _, _, sz] = pauli();
    kron(&sz, &id)
}

/// `1 ⊗ (1 ± σ·p̂)/2` for an in-plane direction `e^{iθ}`.
pub fn helicity_projector(direction: C, helicity: Helicity) -> Matrix4<C> {
    let [id, _, _, _] = pauli();
    let o = c(0.0);
    let s = helicity.sign();
    let sigma_p = Matrix2::new(o, direction.conj(), direction, o);
    kron(&id, &((id + sigma_p * c(s)) * c(0.5)))
}

/// Positive- or negative-energy helicity plane wave with the large
/// component in the odd block:
///
/// ```text
/// ψ_s = [ L (1, s d), L k/(ε+μ) (s, d) ],  L = sqrt((ε+μ)/4ε)
/// ```
///
/// Square roots are principal complex ones, so the same expression covers
/// evanescent and sub-gap momenta.
pub fn build_state(kin: &WaveKinematics, helicity: Helicity) -> BiSpinor {
    let s = helicity.sign();
    let d = kin.direction();
    let eps_mu = kin.energy + kin.mu;
    let large = (c(eps_mu) / c(4.0 * kin.energy)).sqrt();
    let small = large * kin.momentum() / eps_mu;
    BiSpinor::new([large, large * s * d, small * s, small * d])
}

struct Channels {
    incident: [BiSpinor; 2],
    reflected: [BiSpinor; 2],
    transmitted: [BiSpinor; 2],
}

fn channels(mu: f64, nu: f64, theta: f64) -> Channels {
    let p = ((1.0 - mu) * (1.0 + mu)).sqrt();
    let (sin, cos) = theta.sin_cos();
    let ky = p * sin;
    let incident = WaveKinematics {
        energy: 1.0,
        mu,
        kx: c(p * cos),
        ky,
    };
    let reflected = WaveKinematics {
        kx: c(-p * cos),
        ..incident
    };
    let eps = 1.0 - nu;
    let kx2 = (eps - mu) * (eps + mu) - ky * ky;
    let kx = if kx2 > 0.0 {
        c(kx2.sqrt())
    } else {
        C::new(0.0, (-kx2).sqrt())
    };
    let transmitted = WaveKinematics {
        energy: eps,
        mu,
        kx,
        ky,
    };
    // reflected helicity basis rephased by ±e^{iθ}
    let u = C::from_polar(1.0, theta);
    Channels {
        incident: [
            build_state(&incident, Helicity::Plus),
            build_state(&incident, Helicity::Minus),
        ],
        reflected: [
            build_state(&reflected, Helicity::Plus).scale(u),
            build_state(&reflected, Helicity::Minus).scale(-u),
        ],
        transmitted: [
            build_state(&transmitted, Helicity::Plus),
            build_state(&transmitted, Helicity::Minus),
        ],
    }
}

fn combine(basis: &[BiSpinor; 2], plus: C, minus: C) -> BiSpinor {
    basis[0].scale(plus).add(&basis[1].scale(minus))
}

pub fn incident_state(mu: f64, theta: f64, inc: &IncidentAmplitudes) -> BiSpinor {
    combine(&channels(mu, 0.0, theta).incident, inc.plus(), inc.minus())
}

pub fn reflected_state(mu: f64, theta: f64, r_plus: C, r_minus: C) -> BiSpinor {
    combine(&channels(mu, 0.0, theta).reflected, r_plus, r_minus)
}

pub fn transmitted_state(mu: f64, nu: f64, theta: f64, t_plus: C, t_minus: C) -> BiSpinor {
    combine(&channels(mu, nu, theta).transmitted, t_plus, t_minus)
}

fn condition_number(m: &Matrix4<C>) -> f64 {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return f64::INFINITY;
    }
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves ψ_incident + ψ_reflected = ψ_transmitted at x = 0 for
/// `(R+, R-, T+, T-)`.
pub fn boundary_solve(
    mu: f64,
    nu: f64,
    theta: f64,
    inc: &IncidentAmplitudes,
) -> Result<ScatteredAmplitudes> {
    let ch = channels(mu, nu, theta);
    let mut m = Matrix4::<C>::zeros();
    m.set_column(0, &ch.reflected[0].components);
    m.set_column(1, &ch.reflected[1].components);
    m.set_column(2, &(-ch.transmitted[0].components));
    m.set_column(3, &(-ch.transmitted[1].components));
    let condition = condition_number(&m);
    if !condition.is_finite() || condition > SINGULAR_CONDITION {
        return Err(Error::SingularSystem { condition });
    }
    let rhs = -combine(&ch.incident, inc.plus(), inc.minus()).components;
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSystem { condition })?;
    Ok(ScatteredAmplitudes {
        r_plus: x[0],
        r_minus: x[1],
        t_plus: x[2],
        t_minus: x[3],
    })
}

/// Largest componentwise mismatch of the two sides of the interface
/// condition for a candidate set of amplitudes.
pub fn boundary_residual(
    mu: f64,
    nu: f64,
    theta: f64,
    inc: &IncidentAmplitudes,
    amps: &ScatteredAmplitudes,
) -> f64 {
    let ch = channels(mu, nu, theta);
    let left = combine(&ch.incident, inc.plus(), inc.minus())
        .add(&combine(&ch.reflected, amps.r_plus, amps.r_minus));
    let right = combine(&ch.transmitted, amps.t_plus, amps.t_minus);
    (left.components - right.components)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub entries: Matrix4<C>,
}

impl DensityMatrix {
    pub fn trace(&self) -> C {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        (self.entries * self.entries).trace().re
    }
}

pub fn density_matrix(state: &BiSpinor) -> Result<DensityMatrix> {
    let n = state.norm_sqr();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroState);
    }
    let v = state.components;
    Ok(DensityMatrix {
        entries: v * v.adjoint() / c(n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensity {
    pub entries: Matrix2<C>,
    pub subsystem: Subsystem,
}

impl ReducedDensity {
    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let ev = self.entries.symmetric_eigenvalues();
        let (a, b) = (ev[0], ev[1]);
        if a >= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> ReducedDensity {
    let r = &rho.entries;
    let mut out = Matrix2::<C>::zeros();
    for a in 0..2 {
        for b in 0..2 {
            out[(a, b)] = match keep {
                Subsystem::Parity => r[(2 * a, 2 * b)] + r[(2 * a + 1, 2 * b + 1)],
                Subsystem::Helicity => r[(a, b)] + r[(2 + a, 2 + b)],
            };
        }
    }
    ReducedDensity {
        entries: out,
        subsystem: keep,
    }
}

/// `⟨γ⁵⟩` of the normalised state.
pub fn gamma5_expectation(state: &BiSpinor) -> Result<f64> {
    Ok(state.expectation(&gamma5())?.re)
}

/// `⟨P⟩` of the normalised state.
pub fn parity_expectation(state: &BiSpinor) -> Result<f64> {
    Ok(state.expectation(&parity_operator())?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn close(a: C, b: C, tol: f64) {
        assert!((a - b).norm() < tol, "{a} vs {b}");
    }

    #[test]
    fn massless_normal_incidence_state() {
        let kin = WaveKinematics::at_angle(1.0, 0.0, 0.0);
        let psi = build_state(&kin, Helicity::Plus);
        for z in psi.components.iter() {
            close(*z, c(0.5), 1e-15);
        }
        let (odd, even) = psi.parity_block_norms();
        assert_abs_diff_eq!(odd, even, epsilon = 1e-15);
    }

    #[test]
    fn block_norms_follow_mass() {
        let kin = WaveKinematics::at_angle(1.0, 0.5, 0.2);
        let psi = build_state(&kin, Helicity::Minus);
        let (odd, even) = psi.parity_block_norms();
        assert_abs_diff_eq!(odd, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(even, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn states_are_eigenvectors() {
        let cases = [
            WaveKinematics::at_angle(1.0, 0.5, 0.4),
            WaveKinematics::at_angle(-0.66, 0.5, 1.1),
            WaveKinematics {
                energy: 0.7,
                mu: 0.5,
                // kx² + ky² = ε² - μ²
                kx: C::new(0.0, 0.3),
                ky: 0.33f64.sqrt(),
            },
        ];
        for kin in cases {
            let h = hamiltonian(kin.mu, kin.kx, kin.ky);
            for hel in [Helicity::Plus, Helicity::Minus] {
                let psi = build_state(&kin, hel).components;
                let diff = h * psi - psi * c(kin.energy);
                assert!(diff.norm() < 1e-12);
                if kin.kx.im == 0.0 {
                    let p = helicity_projector(kin.direction(), hel);
                    assert!((p * psi - psi).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn helicity_projectors_are_idempotent() {
        for theta in [0.0, 0.3, 1.2, 2.8] {
            let d = C::from_polar(1.0, theta);
            let p = helicity_projector(d, Helicity::Plus);
            let m = helicity_projector(d, Helicity::Minus);
            assert!((p * p - p).norm() < 1e-12);
            assert!((m * m - m).norm() < 1e-12);
            assert!((p * m).norm() < 1e-12);
        }
    }

    #[test]
    fn no_step_transmits_everything() {
        let inc = IncidentAmplitudes::from_polar(0.6, 0.8, 0.3).unwrap();
        let out = boundary_solve(0.5, 0.0, 0.4, &inc).unwrap();
        assert!(out.r_plus.norm() < 1e-14 && out.r_minus.norm() < 1e-14);
        close(out.t_plus, inc.plus(), 1e-14);
        close(out.t_minus, inc.minus(), 1e-14);
    }

    #[test]
    fn klein_reflection_exceeds_incidence() {
        let nu = 1.0 + (0.25f64 + 0.75 * 0.25).sqrt();
        let out = boundary_solve(0.5, nu, 0.3f64.asin(), &IncidentAmplitudes::helicity_plus()).unwrap();
        assert!(out.reflected_probability() > 1.0);
    }

    #[test]
    fn density_matrix_basics() {
        let e1 = BiSpinor::new([c(1.0), c(0.0), c(0.0), c(0.0)]);
        let rho = density_matrix(&e1).unwrap();
        let mut want = Matrix4::<C>::zeros();
        want[(0, 0)] = c(1.0);
        assert_eq!(rho.entries, want);
        assert!(matches!(
            density_matrix(&BiSpinor::new([c(0.0); 4])),
            Err(Error::ZeroState)
        ));

        let theta = 0.3f64.asin();
        let nu = 1.0 - (0.25f64 + 0.75 * 0.25).sqrt();
        let out = boundary_solve(0.5, nu, theta, &IncidentAmplitudes::helicity_plus()).unwrap();
        let rho = density_matrix(&reflected_state(0.5, theta, out.r_plus, out.r_minus)).unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        assert!((rho.entries - rho.entries.adjoint()).norm() < 1e-14);
    }

    #[test]
    fn partial_traces() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = BiSpinor::new([c(h), c(0.0), c(0.0), c(h)]);
        let rho = density_matrix(&bell).unwrap();
        for keep in [Subsystem::Parity, Subsystem::Helicity] {
            let r = partial_trace(&rho, keep);
            assert!((r.entries - Matrix2::identity() * c(0.5)).norm() < 1e-15);
        }
        // (0.6|odd> + 0.8|even>) ⊗ (|↑> + i|↓>)/√2
        let product = BiSpinor::new([
            c(0.6 * h),
            C::new(0.0, 0.6 * h),
            c(0.8 * h),
            C::new(0.0, 0.8 * h),
        ]);
        let rho = density_matrix(&product).unwrap();
        let (l1, l2) = partial_trace(&rho, Subsystem::Parity).eigenvalues();
        assert_abs_diff_eq!(l1, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l2, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn incident_chirality() {
        let psi = incident_state(0.5, 0.7, &IncidentAmplitudes::helicity_plus());
        assert_abs_diff_eq!(gamma5_expectation(&psi).unwrap(), 0.75f64.sqrt(), epsilon = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let eq = IncidentAmplitudes::from_polar(h, h, 0.9).unwrap();
        assert_abs_diff_eq!(gamma5_expectation(&incident_state(0.5, 0.7, &eq)).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(parity_expectation(&psi).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn singular_system_is_reported() {
        // ν = 1 puts the transmitted wave at zero energy
        let r = boundary_solve(0.5, 1.0, 0.3, &IncidentAmplitudes::helicity_plus());
        assert!(matches!(r, Err(Error::SingularSystem { .. })));
    }
}
