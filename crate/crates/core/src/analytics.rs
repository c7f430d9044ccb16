//! Cap volumes of Euclidean balls and the derived constants of the
//! fractional diameter statements. Double precision throughout.

use serde::Serialize;
use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Default truncation depth for the infimum over dimensions.
pub const DEFAULT_D_MAX: usize = 200;

/// Quadrature target, absolute, on integrals of size at most `pi`.
const QUAD_TOLERANCE: f64 = 1e-14;

fn check_height(d: usize, h: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::InvalidArgument(format!("cap height {h} outside [0, 1]")));
    }
    Ok(())
}

/// `int_0^pi sin^d`, the section integral over the whole ball.
fn full_section(d: usize) -> f64 {
    let a = (d as f64 + 1.0) / 2.0;
    (0.5 * std::f64::consts::PI.ln() + ln_gamma(a) - ln_gamma(a + 0.5)).exp()
}

/// Fraction of the unit `d`-ball with `x_1 >= h`.
///
/// Computes `int_h^1 (1 - t^2)^((d-1)/2) dt` as `int_0^acos(h) sin^d` by
/// double-exponential quadrature, over the closed-form full integral.
pub fn cap_fraction(d: usize, h: f64) -> Result<f64> {
    check_height(d, h)?;
    if h == 1.0 {
        return Ok(0.0);
    }
    let top = h.acos();
    let out = quadrature::integrate(|theta: f64| theta.sin().powi(d as i32), 0.0, top, QUAD_TOLERANCE);
    Ok((out.integral / full_section(d)).clamp(0.0, 0.5))
}

/// The same fraction as `I_{1-h^2}((d+1)/2, 1/2) / 2`.
pub fn cap_fraction_beta(d: usize, h: f64) -> Result<f64> {
    check_height(d, h)?;
    Ok(0.5 * beta_reg((d as f64 + 1.0) / 2.0, 0.5, 1.0 - h * h))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaEval {
    pub c: f64,
    pub d_max: usize,
    /// `(d, 2 * cap_fraction(d, c / sqrt(d)))` for `2 <= d <= d_max`.
    pub per_d: Vec<(usize, f64)>,
    /// `P(|Z| >= c)` for a standard normal `Z`, the `d -> infinity` value.
    pub gaussian_limit: f64,
    pub value: f64,
    /// Dimension attaining the minimum, or `None` when the limit does.
    pub argmin_d: Option<usize>,
    pub flags: Vec<String>,
}

/// Two-cap volume fraction at height `c / sqrt(d)`, minimized over
/// `2 <= d <= d_max` and the Gaussian limit.
pub fn gamma(c: f64, d_max: usize) -> Result<GammaEval> {
    if !(c > 0.0 && c < std::f64::consts::SQRT_2) {
        return Err(Error::InvalidArgument(format!("c = {c} outside (0, sqrt 2)")));
    }
    if d_max < 2 {
        return Err(Error::InvalidArgument("d_max must be at least 2".into()));
    }
    let mut per_d = Vec::with_capacity(d_max - 1);
    for d in 2..=d_max {
        per_d.push((d, 2.0 * cap_fraction(d, c / (d as f64).sqrt())?));
    }
    let gaussian_limit = erfc(c / std::f64::consts::SQRT_2);
    let (mut value, mut argmin_d) = (gaussian_limit, None);
    for &(d, v) in &per_d {
        if v < value {
            value = v;
            argmin_d = Some(d);
        }
    }
    Ok(GammaEval { c, d_max, per_d, gaussian_limit, value, argmin_d, flags: vec!["truncated inf".to_string()] })
}

/// Radius of the `d`-ball of volume one.
pub fn r_d(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let df = d as f64;
    let ln_vol = 0.5 * df * std::f64::consts::PI.ln() - ln_gamma(df / 2.0 + 1.0);
    Ok((-ln_vol / df).exp())
}

/// `sqrt(d) / sqrt(2 pi e)`.
pub fn r_d_asymptote(d: usize) -> f64 {
    (d as f64 / (2.0 * std::f64::consts::PI * std::f64::consts::E)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaEval {
    pub alpha: f64,
    pub gamma: f64,
    pub d: usize,
    pub colorful: bool,
    pub value: f64,
    /// The colorful value is not positive, so the bound says nothing.
    pub vacuous: bool,
}

/// `1 - (1 - alpha * gamma)^(1/2d)`, or `1 - 2d (1 - alpha * gamma)^(1/2d)`
/// when `colorful`.
pub fn beta_from_gamma(alpha: f64, gamma: f64, d: usize, colorful: bool) -> Result<BetaEval> {
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidArgument("alpha and gamma must lie in [0, 1]".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let root = (1.0 - alpha * gamma).powf(1.0 / (2.0 * d as f64));
    let value = if colorful { 1.0 - 2.0 * d as f64 * root } else { 1.0 - root };
    Ok(BetaEval { alpha, gamma, d, colorful, value, vacuous: value <= 0.0 })
}

pub fn beta_fractional(alpha: f64, c: f64, d: usize, colorful: bool, d_max: usize) -> Result<BetaEval> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside (0, 1]")));
    }
    if d < 2 {
        return Err(Error::InvalidArgument("dimension must be at least 2".into()));
    }
    beta_from_gamma(alpha, gamma(c, d_max)?.value, d, colorful)
}
