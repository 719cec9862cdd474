//! mmWave backhaul capacity: beam geometry, mainlobe gain and the
//! orientation-error effective function.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::model::BackhaulConfig;

/// Beamwidth used when a zero hover radius makes the beam degenerate.
pub const MIN_BEAMWIDTH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackhaulState {
    pub theta_beam: f64,
    pub g_m: f64,
    pub f_eff: f64,
    pub c_b: f64,
}

/// `2 atan(R_h / h)`: the beam that covers the whole hover circle.
///
/// Returns exactly 0 when `hover_radius` is 0; callers decide how to treat it.
pub fn mmwave_beamwidth(hover_radius: f64, altitude: f64) -> Result<f64> {
    if !(altitude > 0.0) || !(hover_radius >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "beamwidth needs altitude > 0 and hover_radius >= 0 (got {altitude}, {hover_radius})"
        )));
    }
    if hover_radius == 0.0 {
        return Ok(0.0);
    }
    let theta = 2.0 * (hover_radius / altitude).atan();
    check_beam(theta)?;
    Ok(theta)
}

fn check_beam(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::BeamDomain { theta })
    }
}

/// `G_m = 2 pi / theta`.
pub fn mainlobe_gain(theta_beam: f64) -> Result<f64> {
    check_beam(theta_beam)?;
    Ok(2.0 * PI / theta_beam)
}

/// Probability that a truncated-exponential orientation error stays
/// inside half the beam.
pub fn effective_function(theta_beam: f64, eps_bar: f64) -> Result<f64> {
    check_beam(theta_beam)?;
    if !(eps_bar > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "eps_bar must be > 0, got {eps_bar}"
        )));
    }
    Ok((-theta_beam / (2.0 * eps_bar)).exp_m1() / (-PI / eps_bar).exp_m1())
}

/// Density of the absolute orientation error on `[0, pi]`.
pub fn orientation_error_pdf(x: f64, eps_bar: f64) -> f64 {
    if !(0.0..=PI).contains(&x) {
        return 0.0;
    }
    (-x / eps_bar).exp() / (eps_bar * -(-PI / eps_bar).exp_m1())
}

/// Per-UAV backhaul capacity `G_m F C_t / (lambda_a pi R_m^2)`.
pub fn backhaul_capacity(
    cfg: &BackhaulConfig,
    hover_radius: f64,
    altitude: f64,
    lambda_active: f64,
) -> Result<f64> {
    if cfg.c_t.is_infinite() || !(lambda_active > 0.0) {
        return Ok(f64::INFINITY);
    }
    Ok(backhaul_state(cfg, hover_radius, altitude, lambda_active)?.c_b)
}

pub fn backhaul_state(
    cfg: &BackhaulConfig,
    hover_radius: f64,
    altitude: f64,
    lambda_active: f64,
) -> Result<BackhaulState> {
    let mut theta = mmwave_beamwidth(hover_radius, altitude)?;
    if theta == 0.0 {
        theta = MIN_BEAMWIDTH;
    }
    let g_m = mainlobe_gain(theta)?;
    let f_eff = effective_function(theta, cfg.eps_bar)?;
    let c_b = if cfg.c_t.is_infinite() || !(lambda_active > 0.0) {
        f64::INFINITY
    } else {
        g_m * f_eff * cfg.c_t / (lambda_active * PI * cfg.r_m * cfg.r_m)
    };
    Ok(BackhaulState {
        theta_beam: theta,
        g_m,
        f_eff,
        c_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beamwidth_cases() {
        assert!(matches!(
            mmwave_beamwidth(100.0, 100.0),
            Err(Error::BeamDomain { .. })
        ));
        assert!((mmwave_beamwidth(100.0, 1000.0).unwrap() - 0.199_337_304_982_324_1).abs() < 1e-12);
        assert_eq!(mmwave_beamwidth(0.0, 100.0).unwrap(), 0.0);
    }

    #[test]
    fn gain_cases() {
        assert!((mainlobe_gain(PI / 3.0).unwrap() - 6.0).abs() < 1e-12);
        assert!(mainlobe_gain(1e-6).unwrap() > 1e6);
        assert!((mainlobe_gain(0.19933).unwrap() - 31.521).abs() < 1e-3);
        assert!(mainlobe_gain(0.0).is_err());
    }

    #[test]
    fn effective_function_cases() {
        assert!(effective_function(0.2, 1e-6).unwrap() > 1.0 - 1e-12);
        let f = effective_function(0.2, 0.1745).unwrap();
        let direct = (1.0 - (-0.2f64 / 0.349).exp()) / (1.0 - (-PI / 0.1745).exp());
        assert!((f - direct).abs() < 1e-12);
        assert!((f - 0.4362).abs() < 1e-4);
    }

    #[test]
    fn capacity_scaling() {
        let cfg = BackhaulConfig {
            c_t: 10.0,
            ..Default::default()
        };
        let c1 = backhaul_capacity(&cfg, 100.0, 1000.0, 1e-4).unwrap();
        let c2 = backhaul_capacity(&cfg, 100.0, 1000.0, 2e-4).unwrap();
        assert!((c1 / c2 - 2.0).abs() < 1e-12);
        let theta = 2.0 * 0.1f64.atan();
        let expect = 2.0 * PI / theta * effective_function(theta, cfg.eps_bar).unwrap() * 10.0
            / (1e-4 * PI * 500.0 * 500.0);
        assert!((c1 - expect).abs() < 1e-12 * expect);
        let unlimited = BackhaulConfig::default();
        assert!(backhaul_capacity(&unlimited, 100.0, 1000.0, 1e-4)
            .unwrap()
            .is_infinite());
        assert!(backhaul_capacity(&cfg, 100.0, 1000.0, 0.0)
            .unwrap()
            .is_infinite());
        assert!(backhaul_capacity(&unlimited, 200.0, 100.0, 1e-4)
            .unwrap()
            .is_infinite());
        assert!(backhaul_capacity(&cfg, 200.0, 100.0, 1e-4).is_err());
        let s = backhaul_state(&cfg, 0.0, 100.0, 1e-4).unwrap();
        assert_eq!(s.theta_beam, MIN_BEAMWIDTH);
        assert!(s.c_b.is_finite());
    }
}
