//! Flat `key = value` configuration files.
//!
//! Canonical keys mirror [`NetworkConfig`] fields in SI units. Convenience
//! keys take per-km^2 densities, dBm, dB, degrees or height differences and
//! are converted on load.

use std::fmt::Write as _;
use std::path::Path;

use crate::association::ProjectionDensity;
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, PER_KM2};

/// Every accepted key, canonical names first.
pub const KEYS: &[&str] = &[
    "lambda_uav",
    "lambda_gu",
    "hover_radius",
    "h_lower",
    "h_upper",
    "h_gu",
    "alpha",
    "tau",
    "tx_power",
    "half_beamwidth",
    "c_t",
    "r_m",
    "eps_bar",
    "altitude_for_beam",
    "seed",
    "sim_region_radius",
    "projection_density",
    "lambda_uav_per_km2",
    "lambda_per_km2",
    "lambda_gu_per_km2",
    "hover_radius_m",
    "r_h_m",
    "h_lower_m",
    "h_upper_m",
    "h_gu_m",
    "dh_low_m",
    "dh_high_m",
    "tau_db",
    "p_dbm",
    "half_beamwidth_deg",
    "r_m_m",
    "eps_bar_deg",
];

fn number(key: &str, value: &str) -> Result<f64> {
    let v = value.trim();
    let parsed = match v.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => v.parse::<f64>(),
    };
    parsed.map_err(|_| Error::InvalidArgument(format!("{key}: '{v}' is not a number")))
}

fn optional(key: &str, value: &str) -> Result<Option<f64>> {
    match value.trim().to_ascii_lowercase().as_str() {
        "auto" | "none" | "" => Ok(None),
        _ => number(key, value).map(Some),
    }
}

/// Height-difference keys are resolved against `h_gu` after every other
/// key so they do not depend on line order.
#[derive(Debug, Default, Clone, Copy)]
pub struct Pending {
    dh_low: Option<f64>,
    dh_high: Option<f64>,
}

impl Pending {
    pub fn finish(self, cfg: &mut NetworkConfig) {
        if let Some(d) = self.dh_low {
            cfg.h_lower = cfg.h_gu + d;
        }
        if let Some(d) = self.dh_high {
            cfg.h_upper = cfg.h_gu + d;
        }
    }
}

/// Apply one `key = value` assignment.
pub fn apply_key(
    cfg: &mut NetworkConfig,
    pending: &mut Pending,
    key: &str,
    value: &str,
) -> Result<()> {
    let num = || number(key, value);
    match key {
        "lambda_uav" => cfg.lambda_uav = num()?,
        "lambda_gu" => cfg.lambda_gu = num()?,
        "hover_radius" | "hover_radius_m" | "r_h_m" => cfg.hover_radius = num()?,
        "h_lower" | "h_lower_m" => cfg.h_lower = num()?,
        "h_upper" | "h_upper_m" => cfg.h_upper = num()?,
        "h_gu" | "h_gu_m" => cfg.h_gu = num()?,
        "alpha" => cfg.alpha = num()?,
        "tau" => cfg.tau = num()?,
        "tx_power" => cfg.tx_power = num()?,
        "half_beamwidth" => cfg.half_beamwidth = num()?,
        "c_t" => cfg.backhaul.c_t = num()?,
        "r_m" | "r_m_m" => cfg.backhaul.r_m = num()?,
        "eps_bar" => cfg.backhaul.eps_bar = num()?,
        "altitude_for_beam" => cfg.backhaul.altitude_for_beam = optional(key, value)?,
        "seed" => {
            cfg.seed = value.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!(
                    "seed: '{}' is not an unsigned integer",
                    value.trim()
                ))
            })?
        }
        "sim_region_radius" => cfg.sim_region_radius = optional(key, value)?,
        "projection_density" => cfg.projection_density = value.parse::<ProjectionDensity>()?,
        "lambda_uav_per_km2" | "lambda_per_km2" => cfg.lambda_uav = num()? * PER_KM2,
        "lambda_gu_per_km2" => cfg.lambda_gu = num()? * PER_KM2,
        "dh_low_m" => pending.dh_low = Some(num()?),
        "dh_high_m" => pending.dh_high = Some(num()?),
        "tau_db" => cfg.tau = 10f64.powf(num()? / 10.0),
        "p_dbm" => cfg.tx_power = 10f64.powf((num()? - 30.0) / 10.0),
        "half_beamwidth_deg" => cfg.half_beamwidth = num()?.to_radians(),
        "eps_bar_deg" => cfg.backhaul.eps_bar = num()?.to_radians(),
        other => return Err(Error::InvalidArgument(format!("unknown key '{other}'"))),
    }
    Ok(())
}

/// Parse a configuration document on top of the defaults.
pub fn parse_config(text: &str) -> Result<NetworkConfig> {
    let mut cfg = NetworkConfig::default();
    let mut pending = Pending::default();
    let mut seen: Vec<&str> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim();
        if seen.contains(&key) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate key '{key}'"),
            });
        }
        apply_key(&mut cfg, &mut pending, key, value).map_err(|e| Error::Parse {
            line: line_no,
            message: match e {
                Error::InvalidArgument(m) => m,
                other => other.to_string(),
            },
        })?;
        seen.push(key);
    }
    pending.finish(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<NetworkConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config(&text)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

/// Canonical-key rendering; [`parse_config`] reads it back exactly.
pub fn serialize(cfg: &NetworkConfig) -> String {
    let mut s = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    put("lambda_uav", cfg.lambda_uav.to_string());
    put("lambda_gu", cfg.lambda_gu.to_string());
    put("hover_radius", cfg.hover_radius.to_string());
    put("h_lower", cfg.h_lower.to_string());
    put("h_upper", cfg.h_upper.to_string());
    put("h_gu", cfg.h_gu.to_string());
    put("alpha", cfg.alpha.to_string());
    put("tau", cfg.tau.to_string());
    put("tx_power", cfg.tx_power.to_string());
    put("half_beamwidth", cfg.half_beamwidth.to_string());
    put("c_t", cfg.backhaul.c_t.to_string());
    put("r_m", cfg.backhaul.r_m.to_string());
    put("eps_bar", cfg.backhaul.eps_bar.to_string());
    put("altitude_for_beam", opt(cfg.backhaul.altitude_for_beam));
    put("seed", cfg.seed.to_string());
    put("sim_region_radius", opt(cfg.sim_region_radius));
    put(
        "projection_density",
        cfg.projection_density.name().to_string(),
    );
    s
}

/// `serialize` with every line prefixed by `# `, for CSV headers.
pub fn header_comment(cfg: &NetworkConfig) -> String {
    serialize(cfg).lines().map(|l| format!("# {l}\n")).collect()
}
