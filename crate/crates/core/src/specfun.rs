//! Special functions used by the coverage expressions.
//!
//! Every hypergeometric evaluation in this crate has the shape
//! `2F1(1, b; b + 1; -y)` with `y >= 0`, which is the normalized
//! incomplete integral `b * \int_0^1 t^(b-1) / (1 + y t) dt`. Two series
//! cover the whole half-line:
//!
//! * `y <= 4`: the Pfaff transform maps the argument to
//!   `w = y / (1 + y) in [0, 0.8]`, where the defining series converges
//!   geometrically.
//! * `y > 4`: the expansion around infinity,
//!   `b y^-b pi / sin(pi b) - b sum_k (-1)^k y^(-1-k) / (k + 1 - b)`,
//!   valid for `0 < b < 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Hard cap on series terms.
pub const MAX_SERIES_TERMS: usize = 1_000_000;

const SERIES_EPS: f64 = 1e-16;
const LARGE_ARGUMENT_SWITCH: f64 = 4.0;

/// Arguments shared by the coverage kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    pub alpha: f64,
    pub tau: f64,
    pub y: f64,
}

impl KernelArgs {
    pub fn new(alpha: f64, tau: f64, y: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tau must be > 0, got {tau}"
            )));
        }
        if !(y >= 0.0) {
            return Err(Error::InvalidArgument(format!("y must be >= 0, got {y}")));
        }
        Ok(Self { alpha, tau, y })
    }
}

/// Standard error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for `z <= 0`.
pub fn gauss_2f1_neg(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) || z.is_nan() {
        return Err(Error::InvalidArgument(
            "2F1 parameters must be finite".into(),
        ));
    }
    if z > 0.0 {
        return Err(Error::InvalidArgument(format!(
            "2F1 argument must be <= 0, got {z}"
        )));
    }
    if c <= 0.0 && c == c.round() {
        return Err(Error::InvalidArgument(format!(
            "2F1 c = {c} is a nonpositive integer"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if a == 1.0 && c == b + 1.0 {
        return hyp_one_b(b, -z);
    }
    if b == 1.0 && c == a + 1.0 {
        return hyp_one_b(a, -z);
    }
    if z == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(
            "2F1 at -inf only supported for the (1, b; b+1) pattern".into(),
        ));
    }
    // Pfaff: 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1))
    let w = z / (z - 1.0);
    let s = series_2f1(a, c - b, c, w)?;
    Ok((1.0 - z).powf(-a) * s)
}

/// `2F1(1, b; b + 1; -y)` for `b > 0`, `y >= 0`.
fn hyp_one_b(b: f64, y: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!("expected b > 0, got {b}")));
    }
    if y < 0.0 {
        return Err(Error::InvalidArgument(format!("expected y >= 0, got {y}")));
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    if y.is_infinite() {
        return Ok(0.0);
    }
    let near_integer = (b - b.round()).abs() < 1e-3;
    if y > LARGE_ARGUMENT_SWITCH && b < 1.0 && !near_integer {
        return Ok(large_argument(b, y));
    }
    let w = y / (1.0 + y);
    Ok(series_2f1(1.0, 1.0, b + 1.0, w)? / (1.0 + y))
}

fn large_argument(b: f64, y: f64) -> f64 {
    let leading = b * y.powf(-b) * PI / (PI * b).sin();
    let inv = 1.0 / y;
    let mut p = inv;
    let mut tail = 0.0;
    let mut sign = 1.0;
    for k in 0..200 {
        let t = p / (k as f64 + 1.0 - b);
        tail += sign * t;
        if t.abs() <= SERIES_EPS * tail.abs() {
            break;
        }
        sign = -sign;
        p *= inv;
    }
    leading - b * tail
}

/// Defining series of `2F1(a, b; c; w)` for `0 <= w < 1`.
fn series_2f1(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    debug_assert!((0.0..1.0).contains(&w));
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * w;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // Tail of a series whose term ratio tends to w is about term * w / (1 - w).
        if term.abs() * w <= SERIES_EPS * sum.abs() * (1.0 - w) && kf > (a * b / c).abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        function: "2F1 series",
        iterations: MAX_SERIES_TERMS,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 2.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "pathloss exponent must be > 2, got {alpha}"
        )))
    }
}

/// `omega1(alpha, y) = 2F1(1, 1 - 2/alpha; 2 - 2/alpha; -y)`.
pub fn omega1(alpha: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    hyp_one_b(1.0 - 2.0 / alpha, y)
}

/// `omega2(alpha, y) = 2F1(1, 2/alpha; 1 + 2/alpha; -y)`.
pub fn omega2(alpha: f64, y: f64) -> Result<f64> {
    check_alpha(alpha)?;
    hyp_one_b(2.0 / alpha, y)
}

/// `delta(alpha, tau, q_a) = 2 q_a tau omega1(alpha, tau) / (alpha - 2)`.
pub fn delta_kernel(alpha: f64, tau: f64, q_a: f64) -> Result<f64> {
    KernelArgs::new(alpha, tau, 0.0)?;
    if !(0.0..=1.0).contains(&q_a) {
        return Err(Error::InvalidArgument(format!(
            "q_a must lie in [0, 1], got {q_a}"
        )));
    }
    Ok(2.0 * q_a * tau * omega1(alpha, tau)? / (alpha - 2.0))
}

/// `Psi(x) = x^2 2F1(1, 2/z; 1 + 2/z; -b x^z)`.
///
/// Nondecreasing in `x` with `dPsi/dx = 2x / (1 + b x^z)`.
pub fn psi(x: f64, b: f64, z: f64) -> Result<f64> {
    if !(x >= 0.0) || !(b > 0.0) || !(z > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "psi requires x >= 0, b > 0, z > 0 (got x={x}, b={b}, z={z})"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(x * x * hyp_one_b(2.0 / z, b * x.powf(z))?)
}

/// Limit of `x^2 omega2(alpha, x^alpha / s)` as `x -> inf`.
pub fn omega2_far_field(alpha: f64, s: f64) -> f64 {
    let b = 2.0 / alpha;
    b * PI / (PI * b).sin() * s.powf(b)
}

/// `\int_lo^hi x / (1 + x^alpha / s) dx` for `0 <= lo <= hi <= inf`.
///
/// This is the radial part of the Laplace functional of a PPP of
/// Rayleigh-faded interferers lying between 3D distances `lo` and `hi`.
pub fn annulus_interference(alpha: f64, s: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo) {
        return Ok(0.0);
    }
    let upper = if hi.is_infinite() {
        omega2_far_field(alpha, s)
    } else {
        hi * hi * omega2(alpha, hi.powf(alpha) / s)?
    };
    let lower = if lo == 0.0 {
        0.0
    } else {
        lo * lo * omega2(alpha, lo.powf(alpha) / s)?
    };
    Ok((0.5 * (upper - lower)).max(0.0))
}
