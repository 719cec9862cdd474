//! Closed-form and quadrature evaluation of coverage probability and
//! spatial throughput.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::association::{
    hover_fraction_inside, projection_probability_rtna, projection_probability_semi,
    AssociationRule, ProjectionDensity,
};
use crate::backhaul::backhaul_capacity;
use crate::error::{Error, Result};
use crate::model::NetworkConfig;
use crate::quadrature::{integrate, integrate_pieces, QuadratureSpec};
use crate::specfun::{annulus_interference, delta_kernel, erf, erfc, omega1, omega2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    BackhaulLimited,
    BackhaulUnlimited,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::BackhaulLimited => "backhaul_limited",
            Regime::BackhaulUnlimited => "backhaul_unlimited",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticResult {
    pub cp: f64,
    /// Spatial throughput, bits/s/Hz/m^2.
    pub st: f64,
    pub c_b_used: f64,
    pub regime: Regime,
}

/// `st = lambda_a * cp * min(log2(1 + tau), c_b)`.
pub fn st_from_cp(lambda_active: f64, cp: f64, tau: f64, c_b: f64) -> Result<AnalyticResult> {
    if !(0.0..=1.0).contains(&cp) {
        return Err(Error::InvalidArgument(format!(
            "cp must lie in [0, 1], got {cp}"
        )));
    }
    let rate = (1.0 + tau).log2();
    let regime = if c_b < rate {
        Regime::BackhaulLimited
    } else {
        Regime::BackhaulUnlimited
    };
    Ok(AnalyticResult {
        cp,
        st: lambda_active * cp * rate.min(c_b),
        c_b_used: c_b,
        regime,
    })
}

/// Per-UAV backhaul capacity of the configuration at its analytic
/// activated density.
pub fn backhaul_for(cfg: &NetworkConfig) -> Result<f64> {
    backhaul_capacity(
        &cfg.backhaul,
        cfg.hover_radius,
        cfg.beam_altitude(),
        cfg.lambda_active(),
    )
}

/// How each UAV sets its half-beamwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beam {
    /// Common half-beamwidth in radians.
    Fixed(f64),
    /// Projection-area equivalence with scaling parameter `C`: every
    /// footprint has radius `C / sqrt(lambda_a)`.
    Pae(f64),
}

impl Beam {
    pub fn from_config(cfg: &NetworkConfig, pae: Option<f64>) -> Self {
        match pae {
            Some(c) => Beam::Pae(c),
            None => Beam::Fixed(cfg.half_beamwidth),
        }
    }

    pub fn half_beamwidth(self, delta_h: f64, lambda_active: f64) -> f64 {
        match self {
            Beam::Fixed(phi) => phi,
            Beam::Pae(c) => pae_angle(c, delta_h, lambda_active),
        }
    }

    pub fn projection_radius(self, delta_h: f64, lambda_active: f64) -> f64 {
        match self {
            Beam::Fixed(phi) => crate::model::projection_radius(delta_h, phi),
            Beam::Pae(c) => c / lambda_active.sqrt(),
        }
    }

    fn is_omni(self) -> bool {
        matches!(self, Beam::Fixed(phi) if phi >= FRAC_PI_2)
    }
}

fn pae_angle(c: f64, delta_h: f64, lambda_active: f64) -> f64 {
    (c / (delta_h * lambda_active.sqrt())).atan()
}

/// `atan(C / (dh sqrt(lambda_a)))`, the half-beamwidth whose footprint has
/// radius `C / sqrt(lambda_a)`.
pub fn pae_half_beamwidth(c: f64, delta_h: f64, lambda_active: f64) -> Result<f64> {
    if !(c > 0.0) || !(delta_h > 0.0) || !(lambda_active > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "PAE needs positive C, dh and lambda_a (got {c}, {delta_h}, {lambda_active})"
        )));
    }
    Ok(pae_angle(c, delta_h, lambda_active))
}

fn r0_limit(lambda: f64, spec: &QuadratureSpec) -> f64 {
    (-(-spec.r0_truncation_quantile).ln_1p() / (PI * lambda)).sqrt()
}

fn nearest_pdf(lambda: f64, r: f64) -> f64 {
    2.0 * PI * lambda * r * (-PI * lambda * r * r).exp()
}

/// Average `f(dh)` over the uniform height-difference band.
fn average_over_band<F>(cfg: &NetworkConfig, spec: &QuadratureSpec, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (lo, hi) = (cfg.dh_lower(), cfg.dh_upper());
    if hi - lo <= 1e-12 * hi {
        return f(0.5 * (lo + hi));
    }
    let r = integrate(&mut f, lo, hi, spec)?;
    Ok(r.value / (hi - lo))
}

fn sorted_breaks(lo: f64, hi: f64, interior: &[f64]) -> Vec<f64> {
    let mut b = vec![lo];
    b.extend(interior.iter().copied().filter(|&x| x > lo && x < hi));
    b.push(hi);
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

fn check_unit(cp: f64) -> Result<f64> {
    if cp.is_finite() && cp > -1e-9 && cp < 1.0 + 1e-9 {
        Ok(cp.clamp(0.0, 1.0))
    } else {
        Err(Error::QuadratureFailure {
            estimate: cp,
            error: f64::NAN,
            tolerance: 0.0,
        })
    }
}

fn serving_sq(r0: f64, hover_radius: f64, cos_theta: f64, delta_h: f64) -> f64 {
    (r0 * r0 + hover_radius * hover_radius - 2.0 * r0 * hover_radius * cos_theta).max(0.0)
        + delta_h * delta_h
}

/// Coverage under nearest-hover-center association with omnidirectional
/// antennas, conditioned on the height difference.
pub fn semi_omni_conditional(
    cfg: &NetworkConfig,
    delta_h: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let (alpha, tau) = (cfg.alpha, cfg.tau);
    let lambda_a = cfg.lambda_active();
    let rh = cfg.hover_radius;
    let given = |r0: f64, cos_theta: f64| -> Result<f64> {
        let d0_sq = serving_sq(r0, rh, cos_theta, delta_h);
        let l_sq = if r0 <= rh {
            delta_h * delta_h
        } else {
            (r0 - rh).powi(2) + delta_h * delta_h
        };
        // y = tau (d0 / l)^alpha
        let y = tau * (d0_sq / l_sq).powf(0.5 * alpha);
        let exponent = 2.0 * PI * lambda_a * l_sq * y * omega1(alpha, y)? / (alpha - 2.0);
        Ok((-exponent).exp())
    };
    let inner = spec.tightened(0.1);
    let theta_spec = spec.tightened(0.01);
    let r_max = r0_limit(cfg.lambda_uav, spec);
    let radial = |r0: f64| -> Result<f64> {
        let avg = if rh == 0.0 || r0 == 0.0 {
            given(r0, 1.0)?
        } else {
            integrate(|t: f64| given(r0, t.cos()), 0.0, PI, &theta_spec)?.value / PI
        };
        Ok(nearest_pdf(cfg.lambda_uav, r0) * avg)
    };
    let r = integrate_pieces(radial, &sorted_breaks(0.0, r_max, &[rh]), &inner)?;
    check_unit(r.value)
}

/// Coverage under nearest-hover-center association with omnidirectional
/// antennas.
pub fn cp_semi_omni(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<f64> {
    check_unit(average_over_band(cfg, spec, |dh| {
        semi_omni_conditional(cfg, dh, spec)
    })?)
}

fn omni_delta(cfg: &NetworkConfig) -> Result<f64> {
    delta_kernel(cfg.alpha, cfg.tau, cfg.activation_probability())
}

/// Upper bound on [`semi_omni_conditional`] obtained by replacing the
/// serving distance by its lower bound `sqrt((r0 - R_h)^2 + dh^2)`:
/// `E[exp(-pi lambda delta ((r0 - R_h)^2 + dh^2))]` in closed form.
pub fn cp_semi_omni_upper_bound(cfg: &NetworkConfig, delta_h: f64) -> Result<f64> {
    let d = omni_delta(cfg)?;
    let lam = cfg.lambda_uav;
    let a = PI * lam;
    let rh = cfg.hover_radius;
    let e = -a * d * (rh * rh + delta_h * delta_h);
    let shift = a * d * d * rh * rh / (1.0 + d);
    let arg = d * a.sqrt() * rh / (1.0 + d).sqrt();
    // 1 + erf(arg) = erfc(-arg)
    let value = e.exp() / (1.0 + d)
        + PI * lam.sqrt() * d * rh / (1.0 + d).powf(1.5) * (e + shift).exp() * erfc(-arg);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidArgument("upper bound overflowed".into()))
    }
}

/// The bound as usually written in closed form, without the
/// completing-the-square factor; kept for comparison.
pub fn cp_semi_omni_upper_bound_printed(cfg: &NetworkConfig, delta_h: f64) -> Result<f64> {
    let d = omni_delta(cfg)?;
    let lam = cfg.lambda_uav;
    let rh = cfg.hover_radius;
    let arg = d * (PI * lam).sqrt() * rh / (1.0 + d).sqrt();
    let bracket = 1.0 + d * PI * lam.sqrt() * rh * (1.0 + erf(arg)) / (1.0 + d).powf(1.5);
    Ok((-PI * lam * d * (rh * rh + delta_h * delta_h)).exp() / (1.0 + d) * bracket)
}

/// Coverage under nearest-instantaneous association with omnidirectional
/// antennas at a fixed height difference: `exp(-pi lambda delta dh^2) / (1 + delta)`.
pub fn rtna_omni_kernel(cfg: &NetworkConfig, delta_h: f64) -> Result<f64> {
    let d = omni_delta(cfg)?;
    Ok((-PI * cfg.lambda_uav * d * delta_h * delta_h).exp() / (1.0 + d))
}

/// Coverage under nearest-instantaneous association with omnidirectional
/// antennas. Does not depend on the hover radius.
pub fn cp_rtna_omni(cfg: &NetworkConfig) -> Result<f64> {
    let d = omni_delta(cfg)?;
    let (lo, hi) = (cfg.dh_lower(), cfg.dh_upper());
    if d == 0.0 {
        return Ok(1.0);
    }
    if hi - lo <= 1e-12 * hi {
        return rtna_omni_kernel(cfg, 0.5 * (lo + hi));
    }
    let k = (PI * cfg.lambda_uav * d).sqrt();
    let diff = if k * lo > 1.0 {
        erfc(k * lo) - erfc(k * hi)
    } else {
        erf(k * hi) - erf(k * lo)
    };
    check_unit(diff / (2.0 * (cfg.lambda_uav * d).sqrt() * (1.0 + d) * (hi - lo)))
}

/// Directional coverage under nearest-hover-center association at a fixed
/// height difference.
pub fn semi_dir_conditional(
    cfg: &NetworkConfig,
    beam: Beam,
    delta_h: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let (alpha, tau) = (cfg.alpha, cfg.tau);
    let lambda_a = cfg.lambda_active();
    let rh = cfg.hover_radius;
    let rp = beam.projection_radius(delta_h, lambda_a);
    let p_p = projection_probability_semi(cfg.lambda_uav, rh, rp, spec)?;
    if p_p == 0.0 {
        return Ok(0.0);
    }
    let r_hat = if rp.is_infinite() {
        f64::INFINITY
    } else {
        rp.hypot(delta_h)
    };
    let given = |r0: f64, cos_theta: f64| -> Result<f64> {
        let s = tau * serving_sq(r0, rh, cos_theta, delta_h).powf(0.5 * alpha);
        let lo = if r0 >= rh {
            (r0 - rh).hypot(delta_h)
        } else {
            delta_h
        };
        let i = annulus_interference(alpha, s, lo, r_hat)?;
        Ok((-2.0 * PI * p_p * lambda_a * i).exp())
    };
    let inner = spec.tightened(0.1);
    let theta_spec = spec.tightened(0.01);
    let r_max = (rp + rh).min(r0_limit(cfg.lambda_uav, spec));
    let radial = |r0: f64| -> Result<f64> {
        let frac = hover_fraction_inside(r0, rh, rp);
        if frac == 0.0 {
            return Ok(0.0);
        }
        let avg = if rh == 0.0 || r0 == 0.0 {
            given(r0, 1.0)?
        } else {
            let theta_max = PI * frac;
            integrate(|t: f64| given(r0, t.cos()), 0.0, theta_max, &theta_spec)?.value / PI
        };
        Ok(nearest_pdf(cfg.lambda_uav, r0) * avg)
    };
    let breaks = sorted_breaks(0.0, r_max, &[rh, (rp - rh).abs()]);
    let r = integrate_pieces(radial, &breaks, &inner)?;
    check_unit(r.value)
}

pub fn cp_semi_dir(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<f64> {
    cp_semi_dir_with(cfg, Beam::Fixed(cfg.half_beamwidth), spec)
}

pub fn cp_semi_dir_with(cfg: &NetworkConfig, beam: Beam, spec: &QuadratureSpec) -> Result<f64> {
    check_unit(average_over_band(cfg, spec, |dh| {
        semi_dir_conditional(cfg, beam, dh, spec)
    })?)
}

/// Probability that some UAV flies within `R_p` of the typical user, at
/// the density selected by the configuration.
pub fn rtna_projection_probability(cfg: &NetworkConfig, proj_radius: f64) -> f64 {
    let density = match cfg.projection_density {
        ProjectionDensity::Activated => cfg.lambda_active(),
        ProjectionDensity::Total => cfg.lambda_uav,
    };
    projection_probability_rtna(density, proj_radius)
}

/// Directional coverage under nearest-instantaneous association at a
/// fixed height difference.
pub fn rtna_dir_conditional(
    cfg: &NetworkConfig,
    beam: Beam,
    delta_h: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let (alpha, tau) = (cfg.alpha, cfg.tau);
    let lambda = cfg.lambda_uav;
    let lambda_a = cfg.lambda_active();
    let rp = beam.projection_radius(delta_h, lambda_a);
    let p_hat = rtna_projection_probability(cfg, rp);
    if p_hat == 0.0 {
        return Ok(0.0);
    }
    let r_hat = if rp.is_infinite() {
        f64::INFINITY
    } else {
        rp.hypot(delta_h)
    };
    let w = omega2(alpha, 1.0 / tau)?;
    let radial = |r0: f64| -> Result<f64> {
        let d_sq = r0 * r0 + delta_h * delta_h;
        let s = tau * d_sq.powf(0.5 * alpha);
        let upper = if r_hat.is_infinite() {
            crate::specfun::omega2_far_field(alpha, s)
        } else {
            r_hat * r_hat * omega2(alpha, r_hat.powf(alpha) / s)?
        };
        let exponent = PI * p_hat * lambda_a * (upper - d_sq * w).max(0.0);
        Ok(nearest_pdf(lambda, r0) * (-exponent).exp())
    };
    let r_max = rp.min(r0_limit(lambda, spec));
    let r = integrate(radial, 0.0, r_max, &spec.tightened(0.1))?;
    let mass = projection_probability_rtna(lambda, rp);
    check_unit(p_hat * r.value / mass)
}

pub fn cp_rtna_dir(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<f64> {
    cp_rtna_dir_with(cfg, Beam::Fixed(cfg.half_beamwidth), spec)
}

pub fn cp_rtna_dir_with(cfg: &NetworkConfig, beam: Beam, spec: &QuadratureSpec) -> Result<f64> {
    check_unit(average_over_band(cfg, spec, |dh| {
        rtna_dir_conditional(cfg, beam, dh, spec)
    })?)
}

/// Coverage probability for any rule and beam policy.
pub fn coverage(
    cfg: &NetworkConfig,
    rule: AssociationRule,
    beam: Beam,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match (rule, beam.is_omni()) {
        (AssociationRule::Rtna, true) => cp_rtna_omni(cfg),
        (AssociationRule::SemiRtna, true) => cp_semi_omni(cfg, spec),
        (AssociationRule::Rtna, false) => cp_rtna_dir_with(cfg, beam, spec),
        (AssociationRule::SemiRtna, false) => cp_semi_dir_with(cfg, beam, spec),
    }
}

/// Coverage, spatial throughput and backhaul regime of a configuration.
pub fn evaluate(
    cfg: &NetworkConfig,
    rule: AssociationRule,
    pae: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<AnalyticResult> {
    cfg.validate()?;
    spec.validate()?;
    let cp = coverage(cfg, rule, Beam::from_config(cfg, pae), spec)?;
    st_from_cp(cfg.lambda_active(), cp, cfg.tau, backhaul_for(cfg)?)
}

/// Settings of the half-beamwidth search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSearch {
    pub nodes: usize,
    pub min_angle: f64,
    /// Stop refining once the bracket is narrower than this, radians.
    pub tolerance: f64,
}

impl Default for BeamSearch {
    fn default() -> Self {
        Self {
            nodes: 64,
            min_angle: 0.01,
            tolerance: 1e-4,
        }
    }
}

impl BeamSearch {
    /// Log-spaced grid on `[min_angle, pi/2]`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.nodes.max(2);
        let (a, b) = (self.min_angle.ln(), FRAC_PI_2.ln());
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    FRAC_PI_2
                } else {
                    (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamOptimum {
    pub phi: f64,
    pub st: f64,
    /// `(phi, st)` at every grid node.
    pub grid: Vec<(f64, f64)>,
}

/// Half-beamwidth maximizing spatial throughput: grid search then
/// golden-section refinement around the best node.
pub fn optimize_beamwidth(
    cfg: &NetworkConfig,
    rule: AssociationRule,
    search: &BeamSearch,
    spec: &QuadratureSpec,
) -> Result<BeamOptimum> {
    cfg.validate()?;
    let lambda_a = cfg.lambda_active();
    let c_b = backhaul_for(cfg)?;
    let st_at = |phi: f64| -> Result<f64> {
        let c = NetworkConfig {
            half_beamwidth: phi,
            ..*cfg
        };
        let cp = coverage(&c, rule, Beam::Fixed(phi), spec)?;
        Ok(st_from_cp(lambda_a, cp, cfg.tau, c_b)?.st)
    };
    let nodes = search.grid();
    let mut grid = Vec::with_capacity(nodes.len());
    for &phi in &nodes {
        grid.push((phi, st_at(phi)?));
    }
    // first maximum wins so the result is deterministic under ties
    let mut best = 0;
    for (i, &(_, st)) in grid.iter().enumerate() {
        if st > grid[best].1 {
            best = i;
        }
    }
    let mut lo = nodes[best.saturating_sub(1)];
    let mut hi = nodes[(best + 1).min(nodes.len() - 1)];
    let (mut phi, mut st) = grid[best];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = st_at(x1)?;
    let mut f2 = st_at(x2)?;
    while hi - lo > search.tolerance {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = st_at(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = st_at(x2)?;
        }
    }
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f > st {
            phi = x;
            st = f;
        }
    }
    Ok(BeamOptimum { phi, st, grid })
}

/// Large-density coverage factors under PAE: `(p_dagger, delta_1)` with
/// `p_dagger = 1 - exp(-pi C^2)` and
/// `delta_1 = (exp(-p_dagger pi C^2 w) - exp(-pi C^2)) / (1 - p_dagger w)`,
/// `w = omega2(alpha, 1/tau)`.
pub fn pae_limit_factors(c: f64, alpha: f64, tau: f64) -> Result<(f64, f64)> {
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "PAE scaling parameter must be > 0, got {c}"
        )));
    }
    let k = PI * c * c;
    let p = -(-k).exp_m1();
    let w = omega2(alpha, 1.0 / tau)?;
    let x = k * (1.0 - p * w);
    let ratio = if x.abs() < 1e-12 { 1.0 } else { x.exp_m1() / x };
    Ok((p, (-k).exp() * k * ratio))
}

/// Limiting spatial throughput under PAE as the UAV density grows, with the
/// activated density saturating at the user density.
pub fn st_scaling_pae(cfg: &NetworkConfig, c: f64) -> Result<AnalyticResult> {
    let (p, d1) = pae_limit_factors(c, cfg.alpha, cfg.tau)?;
    let c_b = backhaul_capacity(
        &cfg.backhaul,
        cfg.hover_radius,
        cfg.beam_altitude(),
        cfg.lambda_gu,
    )?;
    st_from_cp(cfg.lambda_gu, p * d1, cfg.tau, c_b)
}
