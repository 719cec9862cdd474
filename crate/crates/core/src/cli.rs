//! Command-line front end: argument parsing, figure recipes and CSV output.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analytic::{optimize_beamwidth, st_scaling_pae, AnalyticResult, BeamSearch};
use crate::association::AssociationRule;
use crate::config::load_config;
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, PER_KM2};
use crate::montecarlo::{estimate, throughput, AntennaMode, McEstimate, Scenario};
use crate::quadrature::QuadratureSpec;
use crate::sweep::{
    analytic_for, csv_field, sweep, with_overrides, write_csv, write_header, Engines, SweepSpec,
};

#[derive(Debug, Parser)]
#[command(
    name = "uavsgsim",
    version,
    about = "Coverage and spatial throughput of hovering UAV access-point networks"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configuration seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo trials per point.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Output CSV path; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "both")]
    pub engine: Engines,
    #[arg(long, global = true, default_value = "rtna")]
    pub rule: AssociationRule,
    /// PAE projection scaling parameter C.
    #[arg(long, global = true)]
    pub pae: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic CP and ST of one configuration.
    Analytic {
        #[arg(long, default_value = "auto")]
        mode: ModeArg,
    },
    /// Monte Carlo CP, ST and activation of one configuration.
    Simulate {
        #[arg(long, default_value = "auto")]
        mode: ModeArg,
    },
    /// Cartesian parameter sweep.
    Sweep {
        /// Axis as `key=v1,v2,...`; repeatable.
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        #[arg(long, default_value = "auto")]
        mode: ModeArg,
    },
    /// Half-beamwidth maximizing analytic ST at each density.
    OptimizeBeamwidth {
        /// UAV densities per km^2; defaults to the configured one.
        #[arg(long, value_delimiter = ',')]
        densities: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
    },
    /// ST against UAV density under the PAE policy, with its large-density limit.
    PaeCurve {
        #[arg(long, value_delimiter = ',')]
        densities: Vec<f64>,
    },
    /// Emit the data behind one of the standard figures.
    ReproduceFigure { id: FigureId },
}

/// Antenna mode; `auto` picks omni when the configured half-beamwidth is pi/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Auto,
    Omni,
    Directional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    #[value(name = "2a")]
    F2a,
    #[value(name = "2b")]
    F2b,
    #[value(name = "3a")]
    F3a,
    #[value(name = "3b")]
    F3b,
    #[value(name = "4a")]
    F4a,
    #[value(name = "4b")]
    F4b,
    #[value(name = "5")]
    F5,
}

impl FigureId {
    fn name(self) -> &'static str {
        match self {
            FigureId::F2a => "2a",
            FigureId::F2b => "2b",
            FigureId::F3a => "3a",
            FigureId::F3b => "3b",
            FigureId::F4a => "4a",
            FigureId::F4b => "4b",
            FigureId::F5 => "5",
        }
    }
}

fn resolve_mode(mode: ModeArg, cfg: &NetworkConfig, pae: Option<f64>) -> AntennaMode {
    match mode {
        ModeArg::Omni => AntennaMode::Omni,
        ModeArg::Directional => AntennaMode::Directional,
        ModeArg::Auto if pae.is_some() || !cfg.is_omni() => AntennaMode::Directional,
        ModeArg::Auto => AntennaMode::Omni,
    }
}

fn base_config(common: &Common) -> Result<NetworkConfig> {
    let mut cfg = match &common.config {
        Some(p) => load_config(p)?,
        None => NetworkConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn num(x: f64) -> String {
    x.to_string()
}

fn deg(rad: f64) -> String {
    num((rad.to_degrees() * 1e9).round() / 1e9)
}

fn per_km2(x: f64) -> String {
    num(x / PER_KM2)
}

fn parse_axis(s: &str) -> Result<(String, Vec<String>)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidArgument(format!("axis '{s}' is not key=v1,v2,...")))?;
    let values: Vec<String> = v
        .split(',')
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect();
    Ok((k.trim().to_string(), values))
}

/// Execute a parsed command line, writing CSV to `--out` or `stdout`.
pub fn run(cli: &Cli) -> Result<()> {
    let mut buf = Vec::new();
    execute(cli, &mut buf)?;
    match &cli.common.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(&buf)?;
            f.flush()?;
        }
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

/// Execute a parsed command line into `w`.
pub fn execute<W: Write>(cli: &Cli, w: &mut W) -> Result<()> {
    let common = &cli.common;
    let cfg = base_config(common)?;
    let quad = QuadratureSpec::default();
    match &cli.command {
        Command::Analytic { mode } => {
            let scenario = Scenario {
                rule: common.rule,
                antenna: resolve_mode(*mode, &cfg, common.pae),
                pae: common.pae,
            };
            let r = analytic_for(&cfg, &scenario, &quad)?;
            write_header(w, &cfg, &scenario_meta("analytic", &scenario, None))?;
            writeln!(w, "cp,st,lambda_active_per_km2,c_b,regime")?;
            writeln!(
                w,
                "{},{},{},{},{}",
                num(r.cp),
                per_km2(r.st),
                per_km2(cfg.lambda_active()),
                num(r.c_b_used),
                r.regime
            )?;
        }
        Command::Simulate { mode } => {
            let scenario = Scenario {
                rule: common.rule,
                antenna: resolve_mode(*mode, &cfg, common.pae),
                pae: common.pae,
            };
            let e = estimate(&cfg, &scenario, common.trials)?;
            write_header(
                w,
                &cfg,
                &scenario_meta("simulate", &scenario, Some(common.trials)),
            )?;
            writeln!(w, "cp,cp_se,st,st_se,q_a,q_a_se,c_b,in_projection,trials")?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                num(e.cp.value),
                num(e.cp.std_error),
                per_km2(e.st.value),
                per_km2(e.st.std_error),
                num(e.q_a_hat.value),
                num(e.q_a_hat.std_error),
                num(e.c_b),
                num(e.projection.value),
                e.cp.trials
            )?;
        }
        Command::Sweep { axes, mode } => {
            let spec = SweepSpec {
                axes: axes.iter().map(|a| parse_axis(a)).collect::<Result<_>>()?,
                engines: common.engine,
                rule: common.rule,
                antenna: resolve_mode(*mode, &cfg, common.pae),
                pae: common.pae,
                n_trials: common.trials,
                output_path: common.out.clone(),
            };
            let rows = sweep(&cfg, &spec, &quad)?;
            write_csv(w, &cfg, &spec, &rows)?;
        }
        Command::OptimizeBeamwidth { densities, nodes } => {
            let search = BeamSearch {
                nodes: *nodes,
                ..Default::default()
            };
            let dens = if densities.is_empty() {
                vec![cfg.lambda_uav / PER_KM2]
            } else {
                densities.clone()
            };
            write_header(
                w,
                &cfg,
                &[
                    ("command", "optimize-beamwidth".into()),
                    ("rule", common.rule.name().into()),
                    ("nodes", nodes.to_string()),
                    ("st_unit", "bit/s/Hz/km^2".into()),
                ],
            )?;
            writeln!(w, "lambda_per_km2,phi_star_rad,phi_star_deg,st_star")?;
            for d in dens {
                let c = NetworkConfig {
                    lambda_uav: d * PER_KM2,
                    ..cfg
                };
                let opt = optimize_beamwidth(&c, common.rule, &search, &quad)?;
                writeln!(
                    w,
                    "{},{},{},{}",
                    num(d),
                    num(opt.phi),
                    deg(opt.phi),
                    per_km2(opt.st)
                )?;
            }
        }
        Command::PaeCurve { densities } => {
            let c = common.pae.unwrap_or(1.0);
            let dens = if densities.is_empty() {
                density_grid(10.0, 200.0, 10.0)
            } else {
                densities.clone()
            };
            let limit = st_scaling_pae(&cfg, c)?;
            let scenario = Scenario::pae(common.rule, c);
            write_header(
                w,
                &cfg,
                &[
                    ("command", "pae-curve".into()),
                    ("rule", common.rule.name().into()),
                    ("pae", num(c)),
                    ("engine", common.engine.name().into()),
                    ("trials", common.trials.to_string()),
                    ("st_limit", per_km2(limit.st)),
                    ("st_limit_regime", limit.regime.to_string()),
                    ("st_unit", "bit/s/Hz/km^2".into()),
                ],
            )?;
            writeln!(
                w,
                "lambda_per_km2,st_analytic,st_mc,st_mc_se,st_limit,error"
            )?;
            for d in dens {
                let point = NetworkConfig {
                    lambda_uav: d * PER_KM2,
                    ..cfg
                };
                let (a, m) = evaluate_point(&point, &scenario, common.engine, common.trials, &quad);
                let (sa, sm, sse, err) = st_cells(&point, a.as_ref(), m.as_ref());
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    num(d),
                    sa,
                    sm,
                    sse,
                    per_km2(limit.st),
                    err
                )?;
            }
        }
        Command::ReproduceFigure { id } => figure(*id, &cfg, common, &quad, w)?,
    }
    Ok(())
}

fn scenario_meta(command: &str, s: &Scenario, trials: Option<u64>) -> Vec<(&'static str, String)> {
    let mut v = vec![
        ("command", command.to_string()),
        ("rule", s.rule.name().to_string()),
        ("antenna", s.antenna.name().to_string()),
        ("pae", s.pae.map_or("none".to_string(), num)),
        ("st_unit", "bit/s/Hz/km^2".to_string()),
    ];
    if let Some(t) = trials {
        v.push(("trials", t.to_string()));
    }
    v
}

fn density_grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|i| from + step * i as f64).collect()
}

type PointResult = (Option<Result<AnalyticResult>>, Option<Result<McEstimate>>);

fn evaluate_point(
    cfg: &NetworkConfig,
    s: &Scenario,
    engines: Engines,
    trials: u64,
    quad: &QuadratureSpec,
) -> PointResult {
    let a = engines.analytic.then(|| analytic_for(cfg, s, quad));
    let m = engines.mc.then(|| estimate(cfg, s, trials));
    (a, m)
}

fn error_cell(a: Option<&Result<AnalyticResult>>, m: Option<&Result<McEstimate>>) -> String {
    let mut errs = Vec::new();
    if let Some(Err(e)) = a {
        errs.push(format!("{}: {e}", e.kind()));
    }
    if let Some(Err(e)) = m {
        errs.push(format!("{}: {e}", e.kind()));
    }
    csv_field(&errs.join("; "))
}

fn cp_cells(
    a: Option<&Result<AnalyticResult>>,
    m: Option<&Result<McEstimate>>,
) -> (String, String, String, String) {
    let ca = match a {
        Some(Ok(r)) => num(r.cp),
        _ => String::new(),
    };
    let (cm, se) = match m {
        Some(Ok(e)) => (num(e.cp.value), num(e.cp.std_error)),
        _ => (String::new(), String::new()),
    };
    (ca, cm, se, error_cell(a, m))
}

fn st_cells(
    cfg: &NetworkConfig,
    a: Option<&Result<AnalyticResult>>,
    m: Option<&Result<McEstimate>>,
) -> (String, String, String, String) {
    let sa = match a {
        Some(Ok(r)) => per_km2(r.st),
        _ => String::new(),
    };
    let mut err = error_cell(a, m);
    let (sm, se) = match m {
        Some(Ok(e)) => match throughput(cfg, &e.cp, &e.q_a_hat) {
            Ok((st, _)) => (per_km2(st.value), per_km2(st.std_error)),
            Err(x) => {
                err = csv_field(&format!("{}: {x}", x.kind()));
                (String::new(), String::new())
            }
        },
        _ => (String::new(), String::new()),
    };
    (sa, sm, se, err)
}

/// Simulations are shared between points that differ only in backhaul
/// capacity, which does not affect coverage or activation.
struct McCache {
    entries: Vec<(NetworkConfig, Scenario, Result<McEstimate>)>,
    trials: u64,
}

impl McCache {
    fn get(&mut self, cfg: &NetworkConfig, s: &Scenario) -> Result<McEstimate> {
        let mut key = *cfg;
        key.backhaul.c_t = f64::INFINITY;
        if let Some((_, _, r)) = self.entries.iter().find(|(c, sc, _)| *c == key && sc == s) {
            return r.clone();
        }
        let r = estimate(&key, s, self.trials);
        self.entries.push((key, *s, r.clone()));
        r
    }
}

struct FigurePoint {
    labels: Vec<String>,
    cfg: NetworkConfig,
    scenario: Scenario,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Metric {
    Cp,
    St,
}

struct FigureSpec {
    lead: Vec<&'static str>,
    trail: Vec<&'static str>,
    metric: Metric,
    points: Vec<FigurePoint>,
    notes: Vec<(&'static str, String)>,
}

fn point(
    base: &NetworkConfig,
    overrides: &[(&str, String)],
    scenario: Scenario,
    labels: Vec<String>,
) -> Result<FigurePoint> {
    let ov: Vec<(String, String)> = overrides
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    Ok(FigurePoint {
        labels,
        cfg: with_overrides(base, &ov)?,
        scenario,
    })
}

const RULES: [AssociationRule; 2] = [AssociationRule::SemiRtna, AssociationRule::Rtna];

fn ct_label(ct: f64) -> String {
    num(ct)
}

fn figure_spec(id: FigureId, base: &NetworkConfig, pae: f64) -> Result<FigureSpec> {
    let omni = |rule| Scenario::new(rule, AntennaMode::Omni);
    let dir = |rule| Scenario::new(rule, AntennaMode::Directional);
    let hover_radii: Vec<f64> = (0..=8).map(|i| 25.0 * i as f64).collect();
    let mut points = Vec::new();
    let spec = match id {
        FigureId::F2a | FigureId::F2b => {
            let cts: &[f64] = if id == FigureId::F2a {
                &[f64::INFINITY]
            } else {
                &[10.0, f64::INFINITY]
            };
            for lam in [20.0, 60.0, 100.0] {
                for &ct in cts {
                    for rule in RULES {
                        for &rh in &hover_radii {
                            let ov = [
                                ("lambda_per_km2", num(lam)),
                                ("r_h_m", num(rh)),
                                ("c_t", num(ct)),
                            ];
                            let mut labels = vec![num(lam)];
                            if id == FigureId::F2b {
                                labels.push(ct_label(ct));
                            }
                            labels.extend([rule.name().to_string(), num(rh)]);
                            points.push(point(base, &ov, omni(rule), labels)?);
                        }
                    }
                }
            }
            let lead = if id == FigureId::F2a {
                vec!["lambda_per_km2", "rule", "r_h_m"]
            } else {
                vec!["lambda_per_km2", "ct", "rule", "r_h_m"]
            };
            FigureSpec {
                lead,
                trail: vec![],
                metric: if id == FigureId::F2a {
                    Metric::Cp
                } else {
                    Metric::St
                },
                points,
                notes: vec![],
            }
        }
        FigureId::F3a | FigureId::F3b => {
            let cts: &[f64] = if id == FigureId::F3a {
                &[f64::INFINITY]
            } else {
                &[10.0, f64::INFINITY]
            };
            for rh in [50.0, 100.0] {
                for &ct in cts {
                    for rule in RULES {
                        for lam in density_grid(10.0, 100.0, 10.0) {
                            let ov = [
                                ("lambda_per_km2", num(lam)),
                                ("r_h_m", num(rh)),
                                ("c_t", num(ct)),
                            ];
                            let mut labels = vec![num(rh)];
                            if id == FigureId::F3b {
                                labels.push(ct_label(ct));
                            }
                            labels.extend([rule.name().to_string(), num(lam)]);
                            points.push(point(base, &ov, omni(rule), labels)?);
                        }
                    }
                }
            }
            let lead = if id == FigureId::F3a {
                vec!["r_h_m", "rule", "lambda_per_km2"]
            } else {
                vec!["r_h_m", "ct", "rule", "lambda_per_km2"]
            };
            FigureSpec {
                lead,
                trail: vec![],
                metric: if id == FigureId::F3a {
                    Metric::Cp
                } else {
                    Metric::St
                },
                points,
                notes: vec![],
            }
        }
        FigureId::F4a => {
            let phis: Vec<f64> = (1..=18).map(|i| (5.0 * i as f64).to_radians()).collect();
            for lam in [20.0, 40.0, 80.0] {
                for rule in RULES {
                    for &phi in &phis {
                        let ov = [
                            ("lambda_per_km2", num(lam)),
                            ("c_t", "10".into()),
                            ("half_beamwidth", num(phi)),
                        ];
                        let labels = vec![num(lam), rule.name().to_string(), num(phi), deg(phi)];
                        points.push(point(base, &ov, dir(rule), labels)?);
                    }
                }
            }
            FigureSpec {
                lead: vec!["lambda_per_km2", "rule", "phi_rad", "phi_deg"],
                trail: vec![],
                metric: Metric::St,
                points,
                notes: vec![],
            }
        }
        FigureId::F4b => {
            for phi in [PI / 12.0, PI / 6.0, PI / 3.0] {
                for rule in RULES {
                    for lam in density_grid(10.0, 100.0, 10.0) {
                        let ov = [
                            ("lambda_per_km2", num(lam)),
                            ("c_t", "10".into()),
                            ("half_beamwidth", num(phi)),
                        ];
                        let labels = vec![num(phi), rule.name().to_string(), num(lam)];
                        points.push(point(base, &ov, dir(rule), labels)?);
                    }
                }
            }
            FigureSpec {
                lead: vec!["phi_rad", "rule", "lambda_per_km2"],
                trail: vec![],
                metric: Metric::St,
                points,
                notes: vec![],
            }
        }
        FigureId::F5 => {
            let mut notes = vec![("pae", num(pae))];
            for (lo, hi) in [(90.0, 110.0), (190.0, 210.0)] {
                for ct in [10.0, 100.0, f64::INFINITY] {
                    let band = [
                        ("dh_low_m", num(lo)),
                        ("dh_high_m", num(hi)),
                        ("c_t", num(ct)),
                    ];
                    let limit = st_scaling_pae(&with_overrides(base, &own(&band))?, pae)?;
                    notes.push((
                        "st_limit",
                        format!("dh {lo}-{hi} m, ct {}: {}", num(ct), per_km2(limit.st)),
                    ));
                    for lam in density_grid(10.0, 200.0, 10.0) {
                        let ov = [
                            band[0].clone(),
                            band[1].clone(),
                            band[2].clone(),
                            ("lambda_per_km2", num(lam)),
                        ];
                        let labels = vec![num(lam), ct_label(ct), num(lo), num(hi)];
                        let mut p =
                            point(base, &ov, Scenario::pae(AssociationRule::Rtna, pae), labels)?;
                        p.cfg.half_beamwidth = FRAC_PI_2;
                        points.push(p);
                    }
                }
            }
            FigureSpec {
                lead: vec!["lambda_per_km2", "ct"],
                trail: vec!["dh_low_m", "dh_high_m"],
                metric: Metric::St,
                points,
                notes,
            }
        }
    };
    Ok(spec)
}

fn own(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn figure<W: Write>(
    id: FigureId,
    base: &NetworkConfig,
    common: &Common,
    quad: &QuadratureSpec,
    w: &mut W,
) -> Result<()> {
    let pae = common.pae.unwrap_or(1.0);
    let spec = figure_spec(id, base, pae)?;
    let mut meta = vec![
        ("command", format!("reproduce-figure {}", id.name())),
        ("engine", common.engine.name().to_string()),
        ("trials", common.trials.to_string()),
        ("st_unit", "bit/s/Hz/km^2".to_string()),
    ];
    meta.extend(spec.notes.iter().cloned());
    write_header(w, base, &meta)?;
    let metric_cols = match spec.metric {
        Metric::Cp => ["cp_analytic", "cp_mc", "cp_mc_se"],
        Metric::St => ["st_analytic", "st_mc", "st_mc_se"],
    };
    let mut cols: Vec<&str> = spec.lead.clone();
    cols.extend(metric_cols);
    cols.extend(spec.trail.iter().copied());
    cols.push("error");
    writeln!(w, "{}", cols.join(","))?;

    let mut cache = McCache {
        entries: Vec::new(),
        trials: common.trials,
    };
    let lead_n = spec.lead.len();
    for p in &spec.points {
        let a = common
            .engine
            .analytic
            .then(|| analytic_for(&p.cfg, &p.scenario, quad));
        let m = common.engine.mc.then(|| cache.get(&p.cfg, &p.scenario));
        let (x, y, z, err) = match spec.metric {
            Metric::Cp => cp_cells(a.as_ref(), m.as_ref()),
            Metric::St => st_cells(&p.cfg, a.as_ref(), m.as_ref()),
        };
        let mut row: Vec<String> = p.labels[..lead_n].to_vec();
        row.extend([x, y, z]);
        row.extend(p.labels[lead_n..].iter().cloned());
        row.push(err);
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Machine-readable one-line description of an error.
pub fn error_json(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Validation(_) | Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}
