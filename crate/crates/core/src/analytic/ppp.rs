use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::law::HalfLengthLaw;

/// `Γ(1+δ')Γ(1−δ') = πδ'/sin(πδ')`.
pub fn gamma_product(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma product needs δ' in (0, 1), got {delta}")));
    }
    let x = PI * delta;
    Ok(x / x.sin())
}

/// Success probability in a `d`-dimensional PPP of intensity `λ_d`.
pub fn ppp_success(d: u8, lambda_d: f64, link: f64, alpha: f64, theta: f64) -> Result<f64> {
    let c = match d {
        1 => 2.0,
        2 => PI,
        _ => return Err(Error::InvalidParameter(format!("dimension must be 1 or 2, got {d}"))),
    };
    ensure(alpha > d as f64, || format!("path-loss exponent {alpha} must exceed the dimension {d}"))?;
    ensure(lambda_d >= 0.0, || format!("intensity must be non-negative, got {lambda_d}"))?;
    ensure(theta >= 0.0 && link > 0.0, || "θ must be non-negative and D positive".to_string())?;
    let dp = d as f64 / alpha;
    let g = gamma_product(dp)?;
    Ok((-c * lambda_d * link.powi(d as i32) * theta.powf(dp) * g).exp())
}

/// Low-θ outage exponent `δm/4`.
pub fn low_theta_exponent(m: u8, alpha: f64) -> Result<f64> {
    if m != 2 && m != 4 {
        return Err(Error::UnsupportedOrder { model: "PSP".into(), order: m });
    }
    ensure(alpha > 2.0, || format!("path-loss exponent must exceed 2, got {alpha}"))?;
    Ok(2.0 / alpha * m as f64 / 4.0)
}

/// 2-D PPP success probability with `λ₂ = 2μλE[H]` thinned by `p`.
pub fn high_theta_asymptote(
    theta: f64,
    mu: f64,
    lambda: f64,
    p: f64,
    link: f64,
    alpha: f64,
    law: &HalfLengthLaw,
) -> Result<f64> {
    let lambda2 = 2.0 * mu * lambda * law.mean();
    ppp_success(2, lambda2 * p, link, alpha, theta)
}
