//! Monte Carlo estimation of coverage, spatial throughput and activation
//! from simulated network realizations around a typical user at the origin.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::Beam;
use crate::association::{associate, mark_activation, AssociationRule};
use crate::backhaul::backhaul_capacity;
use crate::error::{Error, Result};
use crate::model::{
    mainlobe_gain_for_sir, sample_fading, sample_ppp, uniform_in_disk, GroundUser, NetworkConfig,
    Point2, UavState,
};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::spatial::{ClipScratch, GridIndex};

/// Realizations with no UAV are redrawn at most this many times per trial.
const MAX_REDRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AntennaMode {
    Omni,
    Directional,
}

impl AntennaMode {
    pub fn name(self) -> &'static str {
        match self {
            AntennaMode::Omni => "omni",
            AntennaMode::Directional => "directional",
        }
    }
}

impl FromStr for AntennaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "omni" => Ok(AntennaMode::Omni),
            "dir" | "directional" => Ok(AntennaMode::Directional),
            other => Err(Error::InvalidArgument(format!(
                "unknown antenna mode '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    Mc,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Analytic => "analytic",
            Method::Mc => "mc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
    pub method: Method,
}

impl MetricEstimate {
    /// Binomial proportion `successes / trials` with its standard error.
    pub fn proportion(successes: u64, trials: u64) -> Self {
        let n = trials.max(1) as f64;
        let p = successes as f64 / n;
        Self {
            value: p,
            std_error: (p * (1.0 - p) / n).sqrt(),
            trials,
            method: Method::Mc,
        }
    }
}

/// What is being simulated besides the network parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub rule: AssociationRule,
    pub antenna: AntennaMode,
    /// PAE scaling parameter; directional beams then follow the policy
    /// instead of the configured half-beamwidth.
    pub pae: Option<f64>,
}

impl Scenario {
    pub fn new(rule: AssociationRule, antenna: AntennaMode) -> Self {
        Self {
            rule,
            antenna,
            pae: None,
        }
    }

    pub fn pae(rule: AssociationRule, c: f64) -> Self {
        Self {
            rule,
            antenna: AntennaMode::Directional,
            pae: Some(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// In the serving footprint and SIR above threshold.
    pub covered: bool,
    pub sir: f64,
    pub in_projection: bool,
    /// 3D distance to the serving UAV, meters.
    pub serving_distance: f64,
    /// Horizontal distance to the serving UAV's association anchor
    /// (instantaneous position or hover center), meters.
    pub association_distance: f64,
    /// Activated UAVs contributing interference.
    pub active_count: usize,
    /// UAVs in the realization.
    pub total: usize,
    /// UAVs whose anchor lies in the inner half-radius disk, and how many
    /// of them would be active without the typical user.
    pub inner_total: usize,
    pub inner_active: usize,
}

struct Field {
    centers: Vec<Point2>,
    positions: Vec<Point2>,
    altitudes: Vec<f64>,
    fading: Vec<f64>,
    activation_u: Vec<f64>,
}

fn sample_field<R: Rng + ?Sized>(cfg: &NetworkConfig, region: f64, rng: &mut R) -> Field {
    let n = crate::model::poisson_count(cfg.lambda_uav * PI * region * region, rng);
    let mut f = Field {
        centers: Vec::with_capacity(n),
        positions: Vec::with_capacity(n),
        altitudes: Vec::with_capacity(n),
        fading: Vec::with_capacity(n),
        activation_u: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let c = uniform_in_disk(region, rng);
        let h = cfg.h_lower + (cfg.h_upper - cfg.h_lower) * rng.random::<f64>();
        let (s, co) = (2.0 * PI * rng.random::<f64>()).sin_cos();
        f.centers.push(c);
        f.positions.push(Point2::new(
            c.x + cfg.hover_radius * co,
            c.y + cfg.hover_radius * s,
        ));
        f.altitudes.push(h);
        f.fading.push(sample_fading(rng));
        f.activation_u.push(rng.random::<f64>());
    }
    f
}

/// Decides activation without sampling users: a UAV is active when its
/// (disk-clipped) Voronoi cell holds at least one user, which for a PPP of
/// users happens with probability `1 - exp(-lambda_gu |cell|)`.
struct Activation<'a> {
    index: &'a GridIndex,
    uniforms: &'a [f64],
    lambda_gu: f64,
    region: f64,
    scratch: ClipScratch,
}

impl Activation<'_> {
    fn is_active(&mut self, j: usize) -> bool {
        let u = self.uniforms[j];
        let anchor = self.index.points()[j];
        // an inscribed disk bounds the cell area from below
        let nn = self
            .index
            .nearest(anchor, Some(j))
            .map_or(f64::INFINITY, |(_, d)| d);
        let r = (0.5 * nn).min(self.region - anchor.norm()).max(0.0);
        if u < -(-self.lambda_gu * PI * r * r).exp_m1() {
            return true;
        }
        let area = self.index.cell_area(j, self.region, &mut self.scratch);
        u < -(-self.lambda_gu * area).exp_m1()
    }
}

/// Mean interference at the origin from UAVs whose hover centers lie beyond
/// the simulation disk, per unit activated fraction and unit fading power.
///
/// Only the mean is added to each trial: the spread of the far field is
/// negligible next to its mean once the disk holds a few hundred UAVs.
pub fn far_field_interference(
    cfg: &NetworkConfig,
    scenario: &Scenario,
    region: f64,
) -> Result<f64> {
    let directional = scenario.antenna == AntennaMode::Directional;
    let beam = Beam::from_config(cfg, scenario.pae);
    let design_density = cfg.lambda_active();
    let a = cfg.alpha;
    // integral of 2 pi r (r^2 + dh^2)^(-a/2) over region < r < outer
    let ring = |dh: f64, outer: f64| -> f64 {
        let pot = |r: f64| (r * r + dh * dh).powf(1.0 - 0.5 * a);
        let far = if outer.is_finite() { pot(outer) } else { 0.0 };
        2.0 * PI * (pot(region) - far) / (a - 2.0)
    };
    let per_dh = |dh: f64| -> Result<f64> {
        if !directional {
            return Ok(ring(dh, f64::INFINITY));
        }
        let rp = beam.projection_radius(dh, design_density);
        if rp <= region {
            return Ok(0.0);
        }
        let g = mainlobe_gain_for_sir(beam.half_beamwidth(dh, design_density));
        Ok(g * ring(dh, rp))
    };
    let (lo, hi) = (cfg.dh_lower(), cfg.dh_upper());
    let mean = if hi - lo <= 1e-12 * hi {
        per_dh(0.5 * (lo + hi))?
    } else {
        integrate(per_dh, lo, hi, &QuadratureSpec::default())?.value / (hi - lo)
    };
    Ok(cfg.lambda_uav * mean)
}

/// Simulate one slot seen by a typical user at the origin.
pub fn run_trial<R: Rng + ?Sized>(
    cfg: &NetworkConfig,
    scenario: &Scenario,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let region = cfg.region_radius();
    let field = sample_field(cfg, region, rng);
    let n = field.centers.len();
    if n == 0 {
        return Err(Error::DegenerateRealization(
            "no UAVs in the simulation disk".into(),
        ));
    }
    let anchors = match scenario.rule {
        AssociationRule::Rtna => field.positions.clone(),
        AssociationRule::SemiRtna => field.centers.clone(),
    };
    let index = GridIndex::new(anchors, 2.0);
    let (server, association_distance) =
        index.nearest(Point2::ORIGIN, None).expect("nonempty field");
    let mut activation = Activation {
        index: &index,
        uniforms: &field.activation_u,
        lambda_gu: cfg.lambda_gu,
        region,
        scratch: ClipScratch::default(),
    };

    let directional = scenario.antenna == AntennaMode::Directional;
    let beam = Beam::from_config(cfg, scenario.pae);
    let design_density = cfg.lambda_active();
    let link = |j: usize| -> (f64, f64, f64) {
        // (horizontal distance squared, height difference, gain)
        let dh = field.altitudes[j] - cfg.h_gu;
        let gain = if directional {
            mainlobe_gain_for_sir(beam.half_beamwidth(dh, design_density))
        } else {
            1.0
        };
        (field.positions[j].norm_sq(), dh, gain)
    };
    let covers_origin = |rho_sq: f64, dh: f64| -> bool {
        if !directional {
            return true;
        }
        let rp = beam.projection_radius(dh, design_density);
        rho_sq < rp * rp
    };

    let (rho0_sq, dh0, g0) = link(server);
    let d0_sq = rho0_sq + dh0 * dh0;
    let in_projection = covers_origin(rho0_sq, dh0);
    let signal = g0 * field.fading[server] * d0_sq.powf(-0.5 * cfg.alpha);

    let mut interference = 0.0;
    let mut active_count = 0;
    for j in 0..n {
        if j == server {
            continue;
        }
        let (rho_sq, dh, g) = link(j);
        if !covers_origin(rho_sq, dh) || !activation.is_active(j) {
            continue;
        }
        active_count += 1;
        interference += g * field.fading[j] * (rho_sq + dh * dh).powf(-0.5 * cfg.alpha);
    }

    let inner_sq = 0.25 * region * region;
    let mut inner_total = 0;
    let mut inner_active = 0;
    for j in 0..n {
        if index.points()[j].norm_sq() < inner_sq {
            inner_total += 1;
            if activation.is_active(j) {
                inner_active += 1;
            }
        }
    }

    if inner_total > 0 {
        let active_fraction = inner_active as f64 / inner_total as f64;
        interference += active_fraction * far_field_interference(cfg, scenario, region)?;
    }

    let sir = if interference > 0.0 {
        signal / interference
    } else {
        f64::INFINITY
    };
    Ok(TrialOutcome {
        covered: in_projection && sir > cfg.tau,
        sir,
        in_projection,
        serving_distance: d0_sq.sqrt(),
        association_distance,
        active_count,
        total: n,
        inner_total,
        inner_active,
    })
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Run one trial, redrawing realizations that hold no UAV.
/// Returns the outcome and the number of redraws.
pub fn run_seeded_trial(
    cfg: &NetworkConfig,
    scenario: &Scenario,
    seed: u64,
    trial: u64,
) -> Result<(TrialOutcome, u64)> {
    let mut rng = trial_rng(seed, trial);
    for redraws in 0..MAX_REDRAWS {
        match run_trial(cfg, scenario, &mut rng) {
            Ok(o) => return Ok((o, redraws as u64)),
            Err(Error::DegenerateRealization(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateRealization(format!(
        "trial {trial}: {MAX_REDRAWS} consecutive empty realizations"
    )))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    trials: u64,
    covered: u64,
    in_projection: u64,
    inner_total: u64,
    inner_active: u64,
    redraws: u64,
}

impl Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            covered: self.covered + o.covered,
            in_projection: self.in_projection + o.in_projection,
            inner_total: self.inner_total + o.inner_total,
            inner_active: self.inner_active + o.inner_active,
            redraws: self.redraws + o.redraws,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub cp: MetricEstimate,
    pub st: MetricEstimate,
    pub q_a_hat: MetricEstimate,
    pub projection: MetricEstimate,
    /// Backhaul capacity evaluated at the empirical activated density.
    pub c_b: f64,
    pub redraws: u64,
}

/// Run `f` on a pool capped by `UAVSGSIM_THREADS` when that is set.
pub fn with_worker_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var("UAVSGSIM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Estimate coverage, spatial throughput and activation over `n_trials`
/// independent slots. Results depend only on the configuration seed.
pub fn estimate(cfg: &NetworkConfig, scenario: &Scenario, n_trials: u64) -> Result<McEstimate> {
    cfg.validate()?;
    if n_trials < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 trials, got {n_trials}"
        )));
    }
    let seed = cfg.seed;
    let tally = with_worker_pool(|| {
        (0..n_trials)
            .into_par_iter()
            .map(|t| {
                let (o, redraws) = run_seeded_trial(cfg, scenario, seed, t)?;
                Ok::<_, Error>(Tally {
                    trials: 1,
                    covered: o.covered as u64,
                    in_projection: o.in_projection as u64,
                    inner_total: o.inner_total as u64,
                    inner_active: o.inner_active as u64,
                    redraws,
                })
            })
            .try_reduce(Tally::default, |a, b| Ok(a + b))
    })?;
    if tally.redraws > 0 {
        log::info!("redrew {} empty realizations", tally.redraws);
    }
    let cp = MetricEstimate::proportion(tally.covered, tally.trials);
    let mut q_a_hat = MetricEstimate::proportion(tally.inner_active, tally.inner_total);
    q_a_hat.trials = tally.trials;
    let (st, c_b) = throughput(cfg, &cp, &q_a_hat)?;
    Ok(McEstimate {
        cp,
        st,
        q_a_hat,
        projection: MetricEstimate::proportion(tally.in_projection, tally.trials),
        c_b,
        redraws: tally.redraws,
    })
}

/// Spatial throughput from simulated coverage and activation, with the
/// backhaul capacity taken at the empirical activated density. Returns the
/// estimate and that capacity.
pub fn throughput(
    cfg: &NetworkConfig,
    cp: &MetricEstimate,
    q_a_hat: &MetricEstimate,
) -> Result<(MetricEstimate, f64)> {
    let lambda_hat = q_a_hat.value * cfg.lambda_uav;
    let c_b = backhaul_capacity(
        &cfg.backhaul,
        cfg.hover_radius,
        cfg.beam_altitude(),
        lambda_hat,
    )?;
    let rate = (1.0 + cfg.tau).log2();
    let per_link = rate.min(c_b);
    // delta method; in the backhaul-limited branch st does not depend on q
    let dq = if rate <= c_b {
        cfg.lambda_uav * cp.value * rate
    } else {
        0.0
    };
    let se =
        ((lambda_hat * per_link * cp.std_error).powi(2) + (dq * q_a_hat.std_error).powi(2)).sqrt();
    let st = MetricEstimate {
        value: lambda_hat * cp.value * per_link,
        std_error: se,
        trials: cp.trials,
        method: Method::Mc,
    };
    Ok((st, c_b))
}

/// Fraction of UAVs with an anchor in the inner half-radius disk that
/// serve at least one explicitly sampled user. Reference path for the
/// cell-area activation shortcut used by [`run_trial`].
pub fn explicit_activation<R: Rng + ?Sized>(
    cfg: &NetworkConfig,
    rule: AssociationRule,
    rng: &mut R,
) -> Result<(usize, usize)> {
    let region = cfg.region_radius();
    let mut uavs: Vec<UavState> = crate::model::sample_uav_field(cfg, rng);
    if uavs.is_empty() {
        return Ok((0, 0));
    }
    let mut gus: Vec<GroundUser> = sample_ppp(cfg.lambda_gu, region, rng)
        .into_iter()
        .enumerate()
        .map(|(i, p)| GroundUser::at(i, p))
        .collect();
    let map = associate(&gus, &uavs, rule, cfg.hover_radius)?;
    mark_activation(&mut gus, &mut uavs, &map);
    let inner_sq = 0.25 * region * region;
    let inner: Vec<&UavState> = uavs
        .iter()
        .filter(|u| rule.anchor(u, cfg.hover_radius).norm_sq() < inner_sq)
        .collect();
    Ok((inner.iter().filter(|u| u.activated).count(), inner.len()))
}
