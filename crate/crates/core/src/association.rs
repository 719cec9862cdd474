//! User association rules, UAV activation and projection probabilities.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{GroundUser, Point2, UavState};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::spatial::GridIndex;

/// Shape parameter of the Voronoi-cell area approximation.
pub const CELL_SHAPE_MU: f64 = 3.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssociationRule {
    /// Nearest instantaneous UAV position.
    Rtna,
    /// Nearest hover center.
    SemiRtna,
}

impl AssociationRule {
    pub fn name(self) -> &'static str {
        match self {
            AssociationRule::Rtna => "rtna",
            AssociationRule::SemiRtna => "semi",
        }
    }

    /// Horizontal point a user measures its distance to.
    pub fn anchor(self, uav: &UavState, hover_radius: f64) -> Point2 {
        match self {
            AssociationRule::Rtna => uav.position(hover_radius),
            AssociationRule::SemiRtna => uav.hover_center,
        }
    }
}

impl fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AssociationRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rtna" => Ok(AssociationRule::Rtna),
            "semi" | "semi-rtna" | "semi_rtna" | "semirtna" => Ok(AssociationRule::SemiRtna),
            other => Err(Error::InvalidArgument(format!(
                "unknown association rule '{other}'"
            ))),
        }
    }
}

/// Density entering the RTNA projection probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ProjectionDensity {
    /// Activated density `q_a * lambda`.
    #[default]
    Activated,
    /// Total UAV density `lambda`.
    Total,
}

impl ProjectionDensity {
    pub fn name(self) -> &'static str {
        match self {
            ProjectionDensity::Activated => "activated",
            ProjectionDensity::Total => "total",
        }
    }
}

impl FromStr for ProjectionDensity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "activated" | "active" => Ok(ProjectionDensity::Activated),
            "total" => Ok(ProjectionDensity::Total),
            other => Err(Error::InvalidArgument(format!(
                "unknown projection density '{other}'"
            ))),
        }
    }
}

/// Map every user to the UAV nearest under `rule`; ties go to the lowest id.
///
/// Returns one UAV index per user (indices into `uavs`).
pub fn associate(
    gus: &[GroundUser],
    uavs: &[UavState],
    rule: AssociationRule,
    hover_radius: f64,
) -> Result<Vec<usize>> {
    if uavs.is_empty() {
        return Err(Error::DegenerateRealization(
            "no UAVs to associate with".into(),
        ));
    }
    // Order by id so the index's lowest-index tie rule is the lowest-id rule.
    let mut order: Vec<usize> = (0..uavs.len()).collect();
    order.sort_by_key(|&i| uavs[i].id);
    let anchors = order
        .iter()
        .map(|&i| rule.anchor(&uavs[i], hover_radius))
        .collect();
    let index = GridIndex::new(anchors, 2.0);
    Ok(gus
        .iter()
        .map(|gu| order[index.nearest(gu.position, None).expect("nonempty index").0])
        .collect())
}

/// Activate exactly the UAVs that serve at least one user and record the
/// association on both sides. Returns the empirical activation fraction.
pub fn mark_activation(gus: &mut [GroundUser], uavs: &mut [UavState], map: &[usize]) -> f64 {
    for u in uavs.iter_mut() {
        u.activated = false;
        u.served_gu = None;
    }
    for (gu, &k) in gus.iter_mut().zip(map) {
        gu.associated_uav = Some(uavs[k].id);
        let u = &mut uavs[k];
        u.activated = true;
        u.served_gu.get_or_insert(gu.id);
    }
    if uavs.is_empty() {
        return 0.0;
    }
    uavs.iter().filter(|u| u.activated).count() as f64 / uavs.len() as f64
}

/// `q_a = 1 - (1 + 1/(mu eta))^(-mu)` with `mu = 3.5`.
pub fn activation_probability(eta: f64) -> f64 {
    if eta <= 0.0 {
        return 1.0;
    }
    let x = 1.0 / (CELL_SHAPE_MU * eta);
    // 1 - (1+x)^-mu, accurate when (1+x)^-mu is close to 1
    -(-CELL_SHAPE_MU * x.ln_1p()).exp_m1()
}

/// Probability that the hover-center-nearest UAV covers the typical user:
/// its instantaneous position lies within `proj_radius` of the user.
pub fn projection_probability_semi(
    lambda_uav: f64,
    hover_radius: f64,
    proj_radius: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(lambda_uav >= 0.0) || !(hover_radius >= 0.0) || !(proj_radius >= 0.0) {
        return Err(Error::InvalidArgument(
            "projection probability needs nonnegative inputs".into(),
        ));
    }
    if proj_radius.is_infinite() {
        return Ok(1.0);
    }
    if proj_radius == 0.0 || lambda_uav == 0.0 {
        return Ok(0.0);
    }
    let a = PI * lambda_uav;
    let cdf = |r: f64| -(-a * r * r).exp_m1();
    if hover_radius == 0.0 {
        return Ok(cdf(proj_radius));
    }
    // Below |R_p - R_h| the whole hover circle is inside (or outside) the disk.
    let inner = (proj_radius - hover_radius).abs();
    let outer = proj_radius + hover_radius;
    let full = if proj_radius > hover_radius {
        cdf(inner)
    } else {
        0.0
    };
    let arc = integrate(
        |r| {
            Ok(2.0
                * a
                * r
                * (-a * r * r).exp()
                * hover_fraction_inside(r, hover_radius, proj_radius))
        },
        inner,
        outer,
        spec,
    )?;
    Ok((full + arc.value).clamp(0.0, 1.0))
}

/// Fraction of hover angles for which a UAV whose hover center is `r0`
/// from the user flies within `proj_radius` of it.
pub fn hover_fraction_inside(r0: f64, hover_radius: f64, proj_radius: f64) -> f64 {
    if hover_radius == 0.0 || r0 == 0.0 {
        return if r0.max(hover_radius) < proj_radius {
            1.0
        } else {
            0.0
        };
    }
    let c = (r0 * r0 + hover_radius * hover_radius - proj_radius * proj_radius)
        / (2.0 * r0 * hover_radius);
    if c <= -1.0 {
        1.0
    } else if c >= 1.0 {
        0.0
    } else {
        c.acos() / PI
    }
}

/// `1 - exp(-pi lambda R_p^2)`: some UAV of density `lambda` lies within `R_p`.
pub fn projection_probability_rtna(lambda: f64, proj_radius: f64) -> f64 {
    if !(lambda > 0.0) || !(proj_radius > 0.0) {
        return 0.0;
    }
    if proj_radius.is_infinite() {
        return 1.0;
    }
    -(-PI * lambda * proj_radius * proj_radius).exp_m1()
}
