//! Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and truncation settings for every numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Probability mass of the serving-distance law kept before truncating
    /// the semi-infinite radial integral.
    pub r0_truncation_quantile: f64,
    /// Maximum number of bisections applied to any one subinterval.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-13,
            r0_truncation_quantile: 1.0 - 1e-8,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Validation(
                "quadrature tolerances must be > 0".into(),
            ));
        }
        if !(self.r0_truncation_quantile > 0.999 && self.r0_truncation_quantile < 1.0) {
            return Err(Error::Validation(format!(
                "r0_truncation_quantile must lie in (0.999, 1), got {}",
                self.r0_truncation_quantile
            )));
        }
        if self.max_depth == 0 {
            return Err(Error::Validation("max_depth must be positive".into()));
        }
        Ok(())
    }

    /// Same settings with both tolerances scaled by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

/// Integral estimate with its error bound and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

// Safety cap on live subintervals.
const MAX_SEGMENTS: usize = 20_000;

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx)? + f(center + dx)?;
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    if !value.is_finite() {
        return Err(Error::QuadratureFailure {
            estimate: value,
            error,
            tolerance: 0.0,
        });
    }
    Ok((value, error))
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_pieces(f, &[a, b], spec)
}

/// Integrate `f` over `[breaks[0], breaks[last]]`, starting from the given
/// subdivision so kinks at interior break points are resolved exactly.
pub fn integrate_pieces<F>(mut f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if breaks.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two break points".into(),
        ));
    }
    if breaks.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "integration limits must be finite".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let (value, error) = kronrod(&mut f, a, b)?;
        evaluations += 15;
        heap.push(Segment {
            a,
            b,
            value,
            error,
            depth: 0,
        });
    }
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    loop {
        let total: f64 = heap.iter().map(|s| s.value).sum::<f64>() + frozen_value;
        let err: f64 = heap.iter().map(|s| s.error).sum::<f64>() + frozen_error;
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if err <= tol {
            return Ok(Integral {
                value: total,
                error: err,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => {
                return Err(Error::QuadratureFailure {
                    estimate: total,
                    error: err,
                    tolerance: tol,
                });
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= spec.max_depth || mid <= worst.a || mid >= worst.b {
            frozen_value += worst.value;
            frozen_error += worst.error;
            if frozen_error > tol {
                let rest: f64 = heap.iter().map(|s| s.value).sum();
                return Err(Error::QuadratureFailure {
                    estimate: rest + frozen_value,
                    error: err,
                    tolerance: tol,
                });
            }
            continue;
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureFailure {
                estimate: total,
                error: err,
                tolerance: tol,
            });
        }
        let (v1, e1) = kronrod(&mut f, worst.a, mid)?;
        let (v2, e2) = kronrod(&mut f, mid, worst.b)?;
        evaluations += 30;
        let depth = worst.depth + 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            depth,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            depth,
        });
    }
}
