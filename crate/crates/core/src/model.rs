//! Network configuration, sampled entities, antenna pattern and channel.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::association::{activation_probability, ProjectionDensity};
use crate::error::{Error, Result};

/// Mainlobe constant of the rectangular antenna pattern.
pub const ANTENNA_G0: f64 = 2.2846;

/// Conversion factor from per-km^2 to per-m^2.
pub const PER_KM2: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(r: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: r * c, y: r * s }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist_sq(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// mmWave backhaul parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackhaulConfig {
    /// Normalized capacity in bits/s/Hz; `f64::INFINITY` disables the limit.
    pub c_t: f64,
    /// Radius of the region sharing one gateway, meters.
    pub r_m: f64,
    /// Mean orientation error before truncation, radians.
    pub eps_bar: f64,
    /// Representative UAV altitude entering the beamwidth; `None` uses the
    /// midpoint of the flight band.
    pub altitude_for_beam: Option<f64>,
}

impl Default for BackhaulConfig {
    fn default() -> Self {
        Self {
            c_t: f64::INFINITY,
            r_m: 500.0,
            eps_bar: PI / 18.0,
            altitude_for_beam: None,
        }
    }
}

impl BackhaulConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_t > 0.0) {
            return Err(Error::Validation(format!(
                "c_t must be > 0 (got {})",
                self.c_t
            )));
        }
        if !(self.r_m > 0.0 && self.r_m.is_finite()) {
            return Err(Error::Validation(format!(
                "r_m must be > 0 (got {})",
                self.r_m
            )));
        }
        if !(self.eps_bar > 0.0 && self.eps_bar.is_finite()) {
            return Err(Error::Validation(format!(
                "eps_bar must be > 0 (got {})",
                self.eps_bar
            )));
        }
        if let Some(h) = self.altitude_for_beam {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Validation(format!(
                    "altitude_for_beam must be > 0 (got {h})"
                )));
            }
        }
        Ok(())
    }

    pub fn is_unlimited(&self) -> bool {
        self.c_t.is_infinite()
    }
}

/// Every scalar parameter of the network model, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// UAV density, per m^2.
    pub lambda_uav: f64,
    /// Ground-user density, per m^2.
    pub lambda_gu: f64,
    pub hover_radius: f64,
    pub h_lower: f64,
    pub h_upper: f64,
    pub h_gu: f64,
    pub alpha: f64,
    /// Linear SIR threshold.
    pub tau: f64,
    /// Transmit power, watts.
    pub tx_power: f64,
    /// Antenna half-beamwidth, radians; `pi/2` is the omnidirectional case.
    pub half_beamwidth: f64,
    pub backhaul: BackhaulConfig,
    pub seed: u64,
    /// Monte Carlo disk radius; `None` picks [`NetworkConfig::default_region_radius`].
    pub sim_region_radius: Option<f64>,
    /// Density used by the RTNA projection probability.
    pub projection_density: ProjectionDensity,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            lambda_uav: 60.0 * PER_KM2,
            lambda_gu: 1e4 * PER_KM2,
            hover_radius: 50.0,
            h_lower: 91.5,
            h_upper: 111.5,
            h_gu: 1.5,
            alpha: 3.5,
            tau: 1.0,
            tx_power: 1.0,
            half_beamwidth: FRAC_PI_2,
            backhaul: BackhaulConfig::default(),
            seed: 1,
            sim_region_radius: None,
            projection_density: ProjectionDensity::Activated,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!(
                    "{name} must be > 0 and finite (got {v})"
                )))
            }
        };
        positive("lambda_uav", self.lambda_uav)?;
        positive("lambda_gu", self.lambda_gu)?;
        positive("h_gu", self.h_gu)?;
        positive("tx_power", self.tx_power)?;
        positive("tau", self.tau)?;
        if !(self.hover_radius >= 0.0 && self.hover_radius.is_finite()) {
            return Err(Error::Validation(format!(
                "hover_radius must be >= 0 (got {})",
                self.hover_radius
            )));
        }
        if !(self.h_gu < self.h_lower) {
            return Err(Error::Validation(format!(
                "h_gu < h_lower required (got h_gu={}, h_lower={})",
                self.h_gu, self.h_lower
            )));
        }
        if !(self.h_lower <= self.h_upper && self.h_upper.is_finite()) {
            return Err(Error::Validation(format!(
                "h_lower <= h_upper required (got {} > {})",
                self.h_lower, self.h_upper
            )));
        }
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(Error::Validation(format!(
                "alpha > 2 required (got {})",
                self.alpha
            )));
        }
        if !(self.half_beamwidth > 0.0 && self.half_beamwidth <= FRAC_PI_2) {
            return Err(Error::Validation(format!(
                "half_beamwidth must lie in (0, pi/2] (got {})",
                self.half_beamwidth
            )));
        }
        if let Some(r) = self.sim_region_radius {
            positive("sim_region_radius", r)?;
        }
        self.backhaul.validate()
    }

    /// Lower bound of the UAV-to-user height difference.
    pub fn dh_lower(&self) -> f64 {
        self.h_lower - self.h_gu
    }

    /// Upper bound of the UAV-to-user height difference.
    pub fn dh_upper(&self) -> f64 {
        self.h_upper - self.h_gu
    }

    pub fn is_omni(&self) -> bool {
        self.half_beamwidth >= FRAC_PI_2
    }

    /// UAV-to-user density ratio.
    pub fn eta(&self) -> f64 {
        self.lambda_uav / self.lambda_gu
    }

    pub fn activation_probability(&self) -> f64 {
        activation_probability(self.eta())
    }

    /// Activated UAV density `q_a * lambda`.
    pub fn lambda_active(&self) -> f64 {
        self.activation_probability() * self.lambda_uav
    }

    pub fn beam_altitude(&self) -> f64 {
        self.backhaul
            .altitude_for_beam
            .unwrap_or(0.5 * (self.h_lower + self.h_upper))
    }

    pub fn default_region_radius(&self) -> f64 {
        (20.0 / (PI * self.lambda_uav).sqrt()).max(4.0 * self.backhaul.r_m)
    }

    pub fn region_radius(&self) -> f64 {
        self.sim_region_radius
            .unwrap_or_else(|| self.default_region_radius())
    }
}

/// One UAV of a realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavState {
    pub id: usize,
    pub hover_center: Point2,
    pub altitude: f64,
    pub hover_angle: f64,
    pub activated: bool,
    pub served_gu: Option<usize>,
}

impl UavState {
    /// Instantaneous horizontal position on the hover circle.
    pub fn position(&self, hover_radius: f64) -> Point2 {
        let (s, c) = self.hover_angle.sin_cos();
        Point2 {
            x: self.hover_center.x + hover_radius * c,
            y: self.hover_center.y + hover_radius * s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundUser {
    pub id: usize,
    pub position: Point2,
    pub associated_uav: Option<usize>,
    pub in_projection: bool,
}

impl GroundUser {
    pub fn at(id: usize, position: Point2) -> Self {
        Self {
            id,
            position,
            associated_uav: None,
            in_projection: false,
        }
    }
}

/// Uniform point on the disk of radius `radius`.
pub fn uniform_in_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point2 {
    let r = radius * rng.random::<f64>().sqrt();
    Point2::polar(r, 2.0 * PI * rng.random::<f64>())
}

/// Poisson-distributed count with the given mean.
pub fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if !(mean > 0.0) {
        return 0;
    }
    let dist = Poisson::new(mean).expect("positive finite mean");
    dist.sample(rng) as usize
}

/// Homogeneous PPP of the given density on the disk centered at the origin.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, region_radius: f64, rng: &mut R) -> Vec<Point2> {
    let n = poisson_count(density * PI * region_radius * region_radius, rng);
    (0..n)
        .map(|_| uniform_in_disk(region_radius, rng))
        .collect()
}

/// Hover centers from a PPP, i.i.d. uniform altitudes and hover angles.
pub fn sample_uav_field<R: Rng + ?Sized>(cfg: &NetworkConfig, rng: &mut R) -> Vec<UavState> {
    let radius = cfg.region_radius();
    let n = poisson_count(cfg.lambda_uav * PI * radius * radius, rng);
    (0..n)
        .map(|id| {
            let hover_center = uniform_in_disk(radius, rng);
            let altitude = cfg.h_lower + (cfg.h_upper - cfg.h_lower) * rng.random::<f64>();
            let hover_angle = 2.0 * PI * rng.random::<f64>();
            UavState {
                id,
                hover_center,
                altitude,
                hover_angle,
                activated: false,
                served_gu: None,
            }
        })
        .collect()
}

/// Rectangular mainlobe gain: `G0 / Phi^2` inside the beam, zero outside.
pub fn antenna_gain(phi: f64, varphi: f64, half_beamwidth: f64) -> f64 {
    if phi.abs() <= half_beamwidth && varphi.abs() <= half_beamwidth {
        ANTENNA_G0 / (half_beamwidth * half_beamwidth)
    } else {
        0.0
    }
}

/// Gain used by the SIR model for a user inside the projection disk.
///
/// The omnidirectional configuration uses unit gain rather than
/// `G0 / (pi/2)^2`; gain cancels from the SIR whenever every UAV shares it.
pub fn mainlobe_gain_for_sir(half_beamwidth: f64) -> f64 {
    if half_beamwidth >= FRAC_PI_2 {
        1.0
    } else {
        antenna_gain(0.0, 0.0, half_beamwidth)
    }
}

/// Ground footprint radius of the mainlobe, `dh * tan(Phi)`; infinite at `pi/2`.
pub fn projection_radius(delta_h: f64, half_beamwidth: f64) -> f64 {
    if half_beamwidth >= FRAC_PI_2 {
        f64::INFINITY
    } else {
        delta_h * half_beamwidth.tan()
    }
}

/// Received power factor `fading * d^-alpha`.
pub fn channel_power(distance: f64, alpha: f64, fading: f64) -> Result<f64> {
    if distance == 0.0 {
        return Err(Error::DegenerateGeometry("zero link distance".into()));
    }
    if !(distance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance must be positive, got {distance}"
        )));
    }
    Ok(fading * distance.powf(-alpha))
}

/// Unit-mean exponential power gain of a Rayleigh channel.
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn default_config_is_valid() {
        NetworkConfig::default().validate().unwrap();
    }

    #[test]
    fn validation_rejects_invariant_violations() {
        let bad = [
            NetworkConfig {
                alpha: 2.0,
                ..Default::default()
            },
            NetworkConfig {
                h_gu: 100.0,
                ..Default::default()
            },
            NetworkConfig {
                h_upper: 50.0,
                ..Default::default()
            },
            NetworkConfig {
                half_beamwidth: 0.0,
                ..Default::default()
            },
            NetworkConfig {
                half_beamwidth: 1.6,
                ..Default::default()
            },
            NetworkConfig {
                lambda_uav: 0.0,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(
                matches!(cfg.validate(), Err(Error::Validation(_))),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn zero_density_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_ppp(0.0, 100.0, &mut rng).is_empty());
    }

    #[test]
    fn ppp_points_stay_in_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts = sample_ppp(1e-3, 500.0, &mut rng);
        assert!(!pts.is_empty());
        assert!(pts.iter().all(|p| p.norm() <= 500.0));
    }

    #[test]
    fn antenna_gain_pattern() {
        assert!((antenna_gain(0.0, 0.0, FRAC_PI_4) - 3.703_65).abs() < 1e-5);
        assert_eq!(antenna_gain(PI / 3.0, 0.0, FRAC_PI_4), 0.0);
        assert_eq!(antenna_gain(0.0, -0.9, FRAC_PI_4), 0.0);
        assert!((antenna_gain(0.0, 0.0, FRAC_PI_2) - 0.925_9).abs() < 1e-4);
        // constant across the box
        let g = antenna_gain(0.0, 0.0, 0.3);
        assert_eq!(antenna_gain(0.3, -0.3, 0.3), g);
        assert_eq!(antenna_gain(-0.29, 0.1, 0.3), g);
        assert_eq!(mainlobe_gain_for_sir(FRAC_PI_2), 1.0);
    }

    #[test]
    fn projection_radius_cases() {
        assert!((projection_radius(100.0, FRAC_PI_4) - 100.0).abs() < 1e-12);
        assert!(projection_radius(100.0, FRAC_PI_2).is_infinite());
        assert!((projection_radius(95.0, 0.5f64.atan()) - 47.5).abs() < 1e-12);
    }

    #[test]
    fn channel_power_cases() {
        assert_eq!(channel_power(1.0, 3.5, 1.0).unwrap(), 1.0);
        assert!((channel_power(2.0, 3.5, 1.0).unwrap() - 0.088_388_347_648_318_44).abs() < 1e-15);
        assert!(matches!(
            channel_power(0.0, 3.5, 1.0),
            Err(Error::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn zero_hover_radius_keeps_center() {
        let cfg = NetworkConfig {
            hover_radius: 0.0,
            sim_region_radius: Some(300.0),
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for u in sample_uav_field(&cfg, &mut rng) {
            assert_eq!(u.position(0.0), u.hover_center);
            assert!(u.altitude >= cfg.h_lower && u.altitude <= cfg.h_upper);
        }
    }
}
