//! Slab surface plasmon (TM bound state below the light cone). Only the
//! dispersion is computed; its thermodynamic contribution diverges (ω_sf
//! saturates at ω_p/√2 as k grows) and is not part of any total.
//!
//! The bound-state condition (ε²η² + γ²)·tanh(γL) + 2εηγ = 0 factorises into
//! γ + εη·tanh(γL/2) = 0 and γ + εη·coth(γL/2) = 0. The first is the lower
//! branch, bounded by ω_p/√2, that joins the single-surface plasmon as L → ∞.

use std::f64::consts::FRAC_1_SQRT_2;

use super::SlabParams;
use crate::error::{Error, Result};
use crate::numkernel::roots::find_root_bracketed;

const SEEDS: usize = 64;

/// ω²·[γ + εη·tanh(γL/2)], free of the 1/ω² pole of ε.
fn branch(omega: f64, k: f64, params: &SlabParams) -> f64 {
    let wp = params.omega_p;
    let w2 = omega * omega;
    let eta = (k * k - w2).max(0.0).sqrt();
    let gamma = (k * k + wp * wp - w2).sqrt();
    gamma * w2 + (w2 - wp * wp) * eta * (0.5 * gamma * params.thickness).tanh()
}

/// (ε²η² + γ²)·tanh(γL) + 2εηγ at (k, ω): zero on the plasmon branch.
pub fn plasmon_residual(k: f64, omega: f64, params: &SlabParams) -> f64 {
    let wp = params.omega_p;
    let w2 = omega * omega;
    let eps = 1.0 - wp * wp / w2;
    let eta = (k * k - w2).max(0.0).sqrt();
    let gamma = (k * k + wp * wp - w2).sqrt();
    (eps * eps * eta * eta + gamma * gamma) * (gamma * params.thickness).tanh()
        + 2.0 * eps * eta * gamma
}

/// ω_sf(k) of the lower branch, located by a seed scan on (0, min(k, ω_p/√2)]
/// and refined by Brent's method.
pub fn plasmon_dispersion(k: f64, params: &SlabParams, x_tol: f64) -> Result<f64> {
    params.validate()?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!(
            "plasmon dispersion needs k > 0, got {k}"
        )));
    }
    let hi = k.min(FRAC_1_SQRT_2 * params.omega_p);
    let f = |w: f64| branch(w, k, params);
    let mut prev = (0.0, f(0.0));
    for i in 1..=SEEDS {
        let w = hi * i as f64 / SEEDS as f64;
        let v = f(w);
        if v == 0.0 {
            return Ok(w);
        }
        if prev.1 != 0.0 && prev.1.signum() != v.signum() {
            return find_root_bracketed(f, prev.0, w, x_tol);
        }
        prev = (w, v);
    }
    Err(Error::NoSignChange { lo: 0.0, hi })
}

/// Single-surface plasmon: ω² = ω_p²/2 − (ω_p⁴/4)/(k² + √(k⁴ + ω_p⁴/4)).
pub fn single_surface_plasmon(k: f64, params: &SlabParams) -> f64 {
    let wp2 = params.omega_p * params.omega_p;
    let k2 = k * k;
    (0.5 * wp2 - 0.25 * wp2 * wp2 / (k2 + (k2 * k2 + 0.25 * wp2 * wp2).sqrt())).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_and_on_shell() {
        for l in [0.1, 1.0, 5.0] {
            let par = SlabParams::new(1.0, l).unwrap();
            for i in 1..60 {
                let k = 0.02 * 1.15f64.powi(i);
                let w = plasmon_dispersion(k, &par, 1e-14).unwrap();
                assert!(w <= FRAC_1_SQRT_2 && w < k);
                assert!(plasmon_residual(k, w, &par).abs() < 1e-10, "L={l} k={k}");
            }
        }
    }

    #[test]
    fn thick_slab_is_single_surface() {
        let par = SlabParams::new(1.0, 50.0).unwrap();
        for k in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let w = plasmon_dispersion(k, &par, 1e-15).unwrap();
            assert!((w / single_surface_plasmon(k, &par) - 1.0).abs() < 1e-6);
        }
        assert!((single_surface_plasmon(FRAC_1_SQRT_2, &par) - 0.5412).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_momentum() {
        let par = SlabParams::new(1.0, 1.0).unwrap();
        assert!(plasmon_dispersion(0.0, &par, 1e-12).is_err());
    }
}
