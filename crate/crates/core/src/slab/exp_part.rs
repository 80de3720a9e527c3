//! Thickness-proportional part, per polarisation: δ = (Re q − p)L, i.e. −pL
//! below ω_p and (√(p²−ω_p²) − p)L above.

use std::f64::consts::PI;

use super::{check_t, SlabParams};
use crate::error::{Error, Result};
use crate::numkernel::quad::{integrate_decaying, QuadResult, QuadSettings};
use crate::numkernel::thermal::{entropy_weight, ln_one_minus_exp};
use crate::spectral::SubtractionSpec;

pub fn exp_phase_shift(p: f64, params: &SlabParams) -> Result<f64> {
    params.validate()?;
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::Domain(format!("phase shift needs p ≥ 0, got {p}")));
    }
    let wp = params.omega_p;
    let q = if p > wp {
        (p * p - wp * wp).sqrt()
    } else {
        0.0
    };
    Ok((q - p) * params.thickness)
}

/// ω(Re q − ω) + ω_p²/2, written without cancellation above ω_p.
fn kernel(w: f64, wp: f64) -> f64 {
    let wp2 = wp * wp;
    if w <= wp {
        0.5 * wp2 - w * w
    } else {
        let s = (w * w - wp2).sqrt();
        -0.5 * wp2 * wp2 / ((s + w) * (s + w))
    }
}

/// Removes ω_p²LT²/24 (no T³ term).
pub fn exp_subtraction(params: &SlabParams) -> SubtractionSpec {
    SubtractionSpec {
        coeff_t3: 0.0,
        coeff_t2: params.omega_p * params.omega_p * params.thickness / 24.0,
    }
}

pub fn exp_free_energy_subtr(
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let wp = params.omega_p;
    let f = |w: f64| kernel(w, wp) * ln_one_minus_exp(w / t);
    let r = integrate_decaying(f, 0.0, t, &[wp], settings)?;
    Ok(r.scaled(params.thickness * t / (2.0 * PI * PI)))
}

pub fn exp_entropy_subtr(
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let wp = params.omega_p;
    let f = |w: f64| kernel(w, wp) * entropy_weight(w / t);
    let r = integrate_decaying(f, 0.0, t, &[wp], settings)?;
    Ok(r.scaled(params.thickness / (2.0 * PI * PI)))
}

/// Unsubtracted: π²LT⁴/90 + (LT/2π²)∫_{ω_p}^∞ ω√(ω²−ω_p²) ln(1−e^{−ω/T}) dω.
pub fn exp_free_energy(t: f64, params: &SlabParams, settings: &QuadSettings) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let (wp, l) = (params.omega_p, params.thickness);
    let f = |w: f64| w * (w * w - wp * wp).sqrt() * ln_one_minus_exp(w / t);
    let r = integrate_decaying(f, wp, t, &[], settings)?;
    Ok(r.scaled(l * t / (2.0 * PI * PI))
        .offset(PI.powi(2) * l * t.powi(4) / 90.0))
}

pub fn exp_entropy(t: f64, params: &SlabParams, settings: &QuadSettings) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let (wp, l) = (params.omega_p, params.thickness);
    let f = |w: f64| w * (w * w - wp * wp).sqrt() * entropy_weight(w / t);
    let r = integrate_decaying(f, wp, t, &[], settings)?;
    Ok(r.scaled(l / (2.0 * PI * PI))
        .offset(-2.0 * PI.powi(2) * l * t.powi(3) / 45.0))
}
