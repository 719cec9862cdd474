//! Parameter grids evaluated by either or both engines, and CSV output.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use crate::analytic::{backhaul_for, coverage, st_from_cp, AnalyticResult, Beam};
use crate::association::AssociationRule;
use crate::config::{apply_key, header_comment, Pending, KEYS};
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, PER_KM2};
use crate::montecarlo::{estimate, AntennaMode, McEstimate, Scenario};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engines {
    pub analytic: bool,
    pub mc: bool,
}

impl Engines {
    pub const BOTH: Engines = Engines {
        analytic: true,
        mc: true,
    };

    pub fn name(self) -> &'static str {
        match (self.analytic, self.mc) {
            (true, true) => "both",
            (true, false) => "analytic",
            (false, true) => "mc",
            (false, false) => "none",
        }
    }
}

impl FromStr for Engines {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(Engines {
                analytic: true,
                mc: false,
            }),
            "mc" => Ok(Engines {
                analytic: false,
                mc: true,
            }),
            "both" => Ok(Engines::BOTH),
            other => Err(Error::InvalidArgument(format!("unknown engine '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// `(config key, values)`; every key accepted by the config loader works.
    pub axes: Vec<(String, Vec<String>)>,
    pub engines: Engines,
    pub rule: AssociationRule,
    pub antenna: AntennaMode,
    pub pae: Option<f64>,
    pub n_trials: u64,
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    pub fn new(rule: AssociationRule, antenna: AntennaMode) -> Self {
        Self {
            axes: Vec::new(),
            engines: Engines::BOTH,
            rule,
            antenna,
            pae: None,
            n_trials: 10_000,
            output_path: None,
        }
    }

    pub fn axis(mut self, key: &str, values: &[&str]) -> Self {
        self.axes.push((
            key.to_string(),
            values.iter().map(|v| v.to_string()).collect(),
        ));
        self
    }

    pub fn scenario(&self) -> Scenario {
        Scenario {
            rule: self.rule,
            antenna: self.antenna,
            pae: self.pae,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (key, values) in &self.axes {
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Validation(format!("unknown sweep axis '{key}'")));
            }
            if values.is_empty() {
                return Err(Error::Validation(format!(
                    "sweep axis '{key}' has no values"
                )));
            }
        }
        if !self.engines.analytic && !self.engines.mc {
            return Err(Error::Validation("no engine selected".into()));
        }
        Ok(())
    }

    /// Cartesian product of the axes, first axis varying slowest.
    pub fn points(&self) -> Vec<Vec<(String, String)>> {
        let mut points = vec![Vec::new()];
        for (key, values) in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push((key.clone(), v.clone()));
                        q
                    })
                })
                .collect();
        }
        points
    }
}

/// Apply `(key, value)` overrides to a base configuration.
pub fn with_overrides(
    base: &NetworkConfig,
    overrides: &[(String, String)],
) -> Result<NetworkConfig> {
    let mut cfg = *base;
    let mut pending = Pending::default();
    for (k, v) in overrides {
        apply_key(&mut cfg, &mut pending, k, v)?;
    }
    pending.finish(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

/// Analytic counterpart of a simulated scenario.
pub fn analytic_for(
    cfg: &NetworkConfig,
    scenario: &Scenario,
    spec: &QuadratureSpec,
) -> Result<AnalyticResult> {
    cfg.validate()?;
    let beam = match scenario.antenna {
        AntennaMode::Omni => Beam::Fixed(FRAC_PI_2),
        AntennaMode::Directional => Beam::from_config(cfg, scenario.pae),
    };
    let cp = coverage(cfg, scenario.rule, beam, spec)?;
    st_from_cp(cfg.lambda_active(), cp, cfg.tau, backhaul_for(cfg)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub overrides: Vec<(String, String)>,
    pub analytic: Option<Result<AnalyticResult>>,
    pub mc: Option<Result<McEstimate>>,
}

impl SweepRow {
    pub fn errors(&self) -> Vec<&Error> {
        let mut out = Vec::new();
        if let Some(Err(e)) = &self.analytic {
            out.push(e);
        }
        if let Some(Err(e)) = &self.mc {
            out.push(e);
        }
        out
    }
}

/// Evaluate every grid point; failures are kept in their row.
pub fn sweep(
    base: &NetworkConfig,
    spec: &SweepSpec,
    quad: &QuadratureSpec,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let scenario = spec.scenario();
    Ok(spec
        .points()
        .into_iter()
        .map(|overrides| {
            let cfg = with_overrides(base, &overrides);
            let analytic = spec
                .engines
                .analytic
                .then(|| cfg.clone().and_then(|c| analytic_for(&c, &scenario, quad)));
            let mc = spec.engines.mc.then(|| {
                cfg.clone()
                    .and_then(|c| estimate(&c, &scenario, spec.n_trials))
            });
            if let Ok(c) = &cfg {
                log::debug!(
                    "sweep point {:?} (lambda = {}/km^2)",
                    overrides,
                    c.lambda_uav / PER_KM2
                );
            }
            SweepRow {
                overrides,
                analytic,
                mc,
            }
        })
        .collect())
}

/// Quote a CSV field when it needs it.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Metadata block shared by every CSV: resolved configuration plus the
/// extra `key = value` lines given.
pub fn write_header<W: Write>(
    w: &mut W,
    cfg: &NetworkConfig,
    extra: &[(&str, String)],
) -> Result<()> {
    writeln!(w, "# uavsgsim {}", env!("CARGO_PKG_VERSION"))?;
    for (k, v) in extra {
        writeln!(w, "# {k} = {v}")?;
    }
    write!(w, "{}", header_comment(cfg))?;
    Ok(())
}

fn num(x: f64) -> String {
    x.to_string()
}

/// Sweep results as CSV. Throughput columns are in bit/s/Hz/km^2.
pub fn write_csv<W: Write>(
    w: &mut W,
    base: &NetworkConfig,
    spec: &SweepSpec,
    rows: &[SweepRow],
) -> Result<()> {
    let axes: Vec<String> = spec
        .axes
        .iter()
        .map(|(k, v)| format!("{k}:{}", v.join("|")))
        .collect();
    write_header(
        w,
        base,
        &[
            ("command", "sweep".to_string()),
            ("rule", spec.rule.name().to_string()),
            ("antenna", spec.antenna.name().to_string()),
            ("pae", spec.pae.map_or("none".to_string(), num)),
            ("engine", spec.engines.name().to_string()),
            ("trials", spec.n_trials.to_string()),
            ("axes", axes.join(";")),
            ("st_unit", "bit/s/Hz/km^2".to_string()),
        ],
    )?;
    let mut cols: Vec<String> = spec.axes.iter().map(|(k, _)| k.clone()).collect();
    if spec.engines.analytic {
        cols.extend(
            [
                "cp_analytic",
                "st_analytic",
                "c_b_analytic",
                "regime_analytic",
            ]
            .map(String::from),
        );
    }
    if spec.engines.mc {
        cols.extend(
            [
                "cp_mc",
                "cp_mc_se",
                "st_mc",
                "st_mc_se",
                "q_a_mc",
                "q_a_mc_se",
                "c_b_mc",
            ]
            .map(String::from),
        );
    }
    cols.push("error".into());
    writeln!(w, "{}", cols.join(","))?;
    for row in rows {
        let mut f: Vec<String> = row.overrides.iter().map(|(_, v)| csv_field(v)).collect();
        if let Some(a) = &row.analytic {
            match a {
                Ok(r) => f.extend([
                    num(r.cp),
                    num(r.st / PER_KM2),
                    num(r.c_b_used),
                    r.regime.name().to_string(),
                ]),
                Err(_) => f.extend(std::iter::repeat_n(String::new(), 4)),
            }
        }
        if let Some(m) = &row.mc {
            match m {
                Ok(e) => f.extend([
                    num(e.cp.value),
                    num(e.cp.std_error),
                    num(e.st.value / PER_KM2),
                    num(e.st.std_error / PER_KM2),
                    num(e.q_a_hat.value),
                    num(e.q_a_hat.std_error),
                    num(e.c_b),
                ]),
                Err(_) => f.extend(std::iter::repeat_n(String::new(), 7)),
            }
        }
        let errs: Vec<String> = row
            .errors()
            .iter()
            .map(|e| format!("{}: {e}", e.kind()))
            .collect();
        f.push(csv_field(&errs.join("; ")));
        writeln!(w, "{}", f.join(","))?;
    }
    Ok(())
}
