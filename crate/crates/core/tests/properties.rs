//! Invariants over random barriers, angles and incident spinors.

use dirac_step::config::{Barrier, StepConfig};
use dirac_step::entanglement::{antiparticle_transform, evaluate_point, von_neumann_entropy};
use dirac_step::kinematics::{IncidenceAngle, MediumParams, ZoneSide};
use dirac_step::scattering::{reflected_product_with_phase, solve, IncidentAmplitudes};
use dirac_step::spinor_oracle::boundary_solve;
use proptest::prelude::*;

fn side() -> impl Strategy<Value = ZoneSide> {
    prop_oneof![Just(ZoneSide::Diffusion), Just(ZoneSide::Klein)]
}

fn medium() -> impl Strategy<Value = MediumParams> {
    (0.0..0.95f64, 0.05..0.95f64, side())
        .prop_map(|(mu, s_c, side)| MediumParams::from_critical(mu, s_c, side).unwrap())
}

fn incident() -> impl Strategy<Value = (f64, f64, IncidentAmplitudes)> {
    (0.0..1.0f64, -3.1..3.1f64).prop_map(|(m, dw)| {
        let mags = (m, (1.0 - m * m).sqrt());
        (m, dw, IncidentAmplitudes::from_polar(mags.0, mags.1, dw).unwrap())
    })
}

fn angle() -> impl Strategy<Value = IncidenceAngle> {
    (0.001..0.995f64).prop_map(|s| IncidenceAngle::from_sine(s).unwrap())
}

proptest! {
    #[test]
    fn probability_is_conserved(m in medium(), theta in angle(), (_, _, inc) in incident()) {
        let sol = solve(&m, theta, &inc).unwrap();
        prop_assert!(sol.conservation_residual().abs() < 1e-10, "{}", sol.conservation_residual());
        prop_assert_eq!(sol.zone.is_oscillatory(), theta.sin() * theta.sin() < m.sin2_critical());
        if !sol.zone.is_oscillatory() {
            prop_assert!((sol.amplitudes.reflected_probability() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_matches_boundary_solve(m in medium(), theta in angle(), (_, _, inc) in incident()) {
        let sol = solve(&m, theta, &inc).unwrap();
        let direct = boundary_solve(m.mu(), m.nu(), theta.radians(), &inc).unwrap();
        prop_assert!(direct.max_abs_diff(&sol.amplitudes) < 1e-9);
    }

    #[test]
    fn spectra_are_normalized(m in medium(), theta in angle(), (_, _, inc) in incident()) {
        let obs = evaluate_point(&m, theta, &inc).unwrap();
        for rep in [Some(obs.incident), obs.reflected, obs.transmitted].into_iter().flatten() {
            let sp = rep.spectrum;
            prop_assert!((sp.lambda_plus + sp.lambda_minus - 1.0).abs() < 1e-12);
            prop_assert!(sp.lambda_plus >= sp.lambda_minus && sp.lambda_minus >= 0.0);
            prop_assert!((von_neumann_entropy(&sp) - rep.entropy).abs() < 1e-15);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&rep.entropy));
            prop_assert!((rep.p_odd + rep.p_even - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn global_phase_is_unobservable(
        m in medium(), theta in angle(), (_, _, inc) in incident(), phase in -3.1..3.1f64,
    ) {
        let a = evaluate_point(&m, theta, &inc).unwrap();
        let b = evaluate_point(&m, theta, &inc.with_global_phase(phase)).unwrap();
        prop_assert!((a.r2_total() - b.r2_total()).abs() < 1e-12);
        for (x, y) in [(a.s_r(), b.s_r()), (a.s_t(), b.s_t())] {
            match (x, y) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-10),
                (x, y) => prop_assert_eq!(x.is_some(), y.is_some()),
            }
        }
    }

    #[test]
    fn reflected_product_phase_expansion(m in medium(), frac in 0.0..0.999f64, (mag, dw, inc) in incident()) {
        let theta = IncidenceAngle::from_sine(frac * m.sin2_critical().sqrt()).unwrap();
        let sol = solve(&m, theta, &inc).unwrap();
        let direct = sol.amplitudes.r_plus.norm_sqr() * sol.amplitudes.r_minus.norm_sqr();
        let mags = (mag, (1.0 - mag * mag).sqrt());
        prop_assert!((reflected_product_with_phase(&sol.a, mags, dw) - direct).abs() < 1e-10);
    }

    #[test]
    fn antiparticle_transform_is_an_involution_and_conjugates_the_phase(
        mu in 0.0..0.95f64, s_c in 0.05..0.95f64, side in side(), theta in angle(),
        (mag, dw, _) in incident(),
    ) {
        let barrier = Barrier::Critical { sin_theta_c: s_c, zone_side: side };
        let cfg = StepConfig::new(mu, barrier, mag, (1.0 - mag * mag).sqrt(), dw, 10, 1.5).unwrap();
        prop_assert_eq!(antiparticle_transform(&antiparticle_transform(&cfg)), cfg);

        let anti = StepConfig { delta_omega: -dw, ..antiparticle_transform(&cfg) };
        let a = evaluate_point(&cfg.medium().unwrap(), theta, &cfg.incident().unwrap()).unwrap();
        let b = evaluate_point(&anti.medium().unwrap(), theta, &anti.incident().unwrap()).unwrap();
        prop_assert!((a.r2_total() - b.r2_total()).abs() < 1e-10);
        if let (Some(x), Some(y)) = (a.s_r(), b.s_r()) {
            prop_assert!((x - y).abs() < 1e-10, "{} vs {}", x, y);
        }
    }
}
