//! The normal density folded onto `[0, 1)`, i.e. the density of the mantissa
//! of a normally distributed logarithm.

use std::f64::consts::PI;

use crate::error::{domain_err, Result};

/// Number of grid points used by [`wrapped_gaussian_flatness`].
pub const FLATNESS_GRID: usize = 1024;

/// `1/(sqrt(2 pi) sigma) * sum_{P=-T}^{T} exp(-(u - mu + P)^2 / (2 sigma^2))`.
///
/// `T = ceil(8 sigma) + truncation`, which leaves a discarded tail below
/// 1e-15. The offset `u - mu` is reduced modulo 1 first, so the window of
/// summed translates is always centred on the Gaussian's mass.
pub fn wrapped_gaussian_density(u: f64, mu: f64, sigma: f64, truncation: u32) -> Result<f64> {
    check_sigma(sigma)?;
    if truncation == 0 {
        return domain_err("truncation must be at least 1");
    }
    if !u.is_finite() || !mu.is_finite() {
        return domain_err(format!("u and mu must be finite, got u={u}, mu={mu}"));
    }
    let offset = (u - mu).rem_euclid(1.0);
    let terms = (8.0 * sigma).ceil() as i64 + i64::from(truncation);
    let two_var = 2.0 * sigma * sigma;
    let mut sum = 0.0;
    // Outermost translates first so the small tail terms are not swamped.
    for p in (1..=terms).rev() {
        let p = p as f64;
        sum += (-(offset + p).powi(2) / two_var).exp();
        sum += (-(offset - p).powi(2) / two_var).exp();
    }
    sum += (-offset * offset / two_var).exp();
    Ok(sum / ((2.0 * PI).sqrt() * sigma))
}

/// `max_u |wrapped_gaussian_density(u, 0, sigma) - 1|` over `u = i / 1024`.
pub fn wrapped_gaussian_flatness(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let mut worst = 0.0f64;
    for i in 0..FLATNESS_GRID {
        let u = i as f64 / FLATNESS_GRID as f64;
        let density = wrapped_gaussian_density(u, 0.0, sigma, 1)?;
        worst = worst.max((density - 1.0).abs());
    }
    Ok(worst)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return domain_err(format!("sigma must be positive and finite, got {sigma}"));
    }
    Ok(())
}
