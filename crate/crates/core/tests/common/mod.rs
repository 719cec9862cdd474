//! Reference numerics for the integration tests, kept independent of the
//! library's own quadrature.
#![allow(dead_code, clippy::too_many_arguments)]

fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson with Richardson correction; `tol` is absolute.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    // Start from 16 panels so narrow features are not skipped.
    let n = 16;
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            let (x0, x1) = (a + h * i as f64, a + h * (i + 1) as f64);
            let m = 0.5 * (x0 + x1);
            let (f0, f1, fm) = (f(x0), f(x1), f(m));
            let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            simpson_step(&f, x0, f0, x1, f1, m, fm, whole, tol / n as f64, 48)
        })
        .sum()
}

/// `erf` from its Maclaurin series; accurate for `|x| <= 3`.
pub fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// Empirical CDF distance to a continuous CDF (Kolmogorov-Smirnov D).
pub fn ks_distance(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

/// Critical KS distance at the 1% level for `n` samples.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Coverage at a fixed height difference under nearest-instantaneous
/// association, by direct quadrature of the PPP Laplace functional:
/// `E_r0[exp(-2 pi lambda_a int_{r0}^inf r / (1 + (d/d0)^alpha / tau) dr)]`
/// with `d = sqrt(r^2 + dh^2)` and `r0` the nearest-neighbour distance.
pub fn rtna_kernel_oracle(lambda: f64, lambda_a: f64, alpha: f64, tau: f64, dh: f64) -> f64 {
    let pi = std::f64::consts::PI;
    // With x = d0 / u the interference integral becomes
    // d0^2 int_0^1 u^(alpha-3) / (u^alpha + 1/tau) du.
    let shape = simpson(
        |u: f64| u.powf(alpha - 3.0) / (u.powf(alpha) + 1.0 / tau),
        0.0,
        1.0,
        1e-14,
    );
    let r_max = (45.0 / (pi * lambda)).sqrt();
    simpson(
        |r0: f64| {
            let d0_sq = r0 * r0 + dh * dh;
            2.0 * pi
                * lambda
                * r0
                * (-pi * lambda * r0 * r0).exp()
                * (-2.0 * pi * lambda_a * d0_sq * shape).exp()
        },
        0.0,
        r_max,
        1e-15,
    )
}
