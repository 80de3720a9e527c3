//! Surface part: δ^s = arg t^s for p < ω_p.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{check_t, SlabParams};
use crate::error::{Error, Result};
use crate::numkernel::quad::{
    integrate_algebraic, integrate_decaying, integrate_with_breaks, QuadResult, QuadSettings,
};
use crate::numkernel::series::atan_minus_id;
use crate::numkernel::thermal::{
    entropy_weight, ln_one_minus_exp, occupation, occupation_slope, ZETA3,
};
use crate::spectral::{Channel, SubtractionSpec};

/// Within this distance of ω_p/√2 (in units of ω_p) the closed forms are 0/0
/// and the defining θ-integrals are used instead.
const EPS_MINUS_ONE_BAND: f64 = 1e-3;

pub(crate) fn delta_s_unchecked_pub(ch: Channel, p: f64, omega: f64, params: &SlabParams) -> f64 {
    delta_s_unchecked(ch, p, omega, params)
}

fn delta_s_unchecked(ch: Channel, p: f64, omega: f64, params: &SlabParams) -> f64 {
    let wp = params.omega_p;
    if p > wp {
        return 0.0;
    }
    let g = params.gamma(p);
    match ch {
        Channel::Te => FRAC_PI_2 - 2.0 * g.atan2(p),
        Channel::Tm => {
            let ep = params.eps_unchecked(omega) * p;
            if g == 0.0 && ep == 0.0 {
                -FRAC_PI_2
            } else {
                -FRAC_PI_2 + 2.0 * (ep / g).atan()
            }
        }
    }
}

/// δ^s at normal momentum p and frequency ω ≥ p (zero above ω_p).
pub fn delta_s(ch: Channel, p: f64, omega: f64, params: &SlabParams) -> Result<f64> {
    params.validate()?;
    if !(p >= 0.0 && omega > 0.0 && omega >= p) {
        return Err(Error::Domain(format!(
            "δ^s needs 0 ≤ p ≤ ω, ω > 0; got p = {p}, ω = {omega}"
        )));
    }
    Ok(delta_s_unchecked(ch, p, omega, params))
}

pub(crate) fn delta_s_deriv_unchecked(ch: Channel, p: f64, k: f64, params: &SlabParams) -> f64 {
    let wp = params.omega_p;
    if p >= wp {
        return 0.0;
    }
    let g = params.gamma(p);
    match ch {
        Channel::Te => 2.0 / g,
        Channel::Tm => {
            let w2 = p * p + k * k;
            let wp2 = wp * wp;
            let eps = 1.0 - wp2 / w2;
            let num = 2.0 * wp2 * p * p * g * g / (w2 * w2) + eps * wp2;
            2.0 * num / (g * (g * g + eps * eps * p * p))
        }
    }
}

/// ∂δ^s/∂p at fixed parallel momentum k, for 0 < p < ω_p.
pub fn delta_s_deriv(ch: Channel, p: f64, k: f64, params: &SlabParams) -> Result<f64> {
    params.validate()?;
    let v = delta_s_deriv_unchecked(ch, p, k, params);
    if p > 0.0 && k >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!(
            "∂δ^s/∂p undefined at p = {p}, k = {k}"
        )))
    }
}

pub fn surface_subtraction(ch: Channel) -> SubtractionSpec {
    let _ = ch;
    SubtractionSpec {
        coeff_t3: -ZETA3 / (2.0 * PI),
        coeff_t2: 0.0,
    }
}

/// h_p(ω) = ∫₀^{min(ω,ω_p)} p δ^s_TM(p, ω) dp, the TM spectral weight.
pub fn h_weighted(omega: f64, params: &SlabParams, settings: &QuadSettings) -> Result<f64> {
    params.validate()?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("h_p needs ω > 0, got {omega}")));
    }
    if (omega / params.omega_p - FRAC_1_SQRT_2).abs() < EPS_MINUS_ONE_BAND {
        return Ok(h_weighted_defining(omega, params, settings)?.value);
    }
    Ok(h_weighted_closed(omega, params))
}

fn h_weighted_closed(omega: f64, params: &SlabParams) -> f64 {
    let wp = params.omega_p;
    let wp2 = wp * wp;
    if omega >= wp {
        return -PI * wp2 * wp2 / (4.0 * (2.0 * omega * omega - wp2));
    }
    let eps = params.eps_unchecked(omega);
    let theta = (omega / wp).asin();
    let s2 = (omega / wp).powi(2);
    let a = (eps * theta.tan()).atan();
    wp2 * (-0.25 * PI * s2 + s2 * a - (a - eps * theta) / (1.0 - eps * eps))
}

/// Defining θ-integral of h_p (p = ω_p sin θ).
pub fn h_weighted_defining(
    omega: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    let wp = params.omega_p;
    let top = (omega.min(wp) / wp).asin();
    let f = |th: f64| {
        let p = wp * th.sin();
        wp * wp * th.sin() * th.cos() * delta_s_unchecked(Channel::Tm, p, omega, params)
    };
    integrate_with_breaks(f, 0.0, top, &[], settings)
}

/// lim_{ω→∞} of [`h_printed`]: (π − 4)ω_p/2.
pub fn h_printed_limit(params: &SlabParams) -> f64 {
    0.5 * (PI - 4.0) * params.omega_p
}

/// h(ω) = ∫₀^{min(ω,ω_p)} δ^s_TM(p, ω) dp in closed form (h₁ below ω_p, h₂ above).
pub fn h_printed(omega: f64, params: &SlabParams, settings: &QuadSettings) -> Result<f64> {
    Ok(h_printed_excess(omega, params, settings)? + h_printed_limit(params))
}

/// h − h_∞, cancellation-free at large ω.
fn h_printed_excess(omega: f64, params: &SlabParams, settings: &QuadSettings) -> Result<f64> {
    params.validate()?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("h needs ω > 0, got {omega}")));
    }
    let wp = params.omega_p;
    let x = omega / wp;
    if (x - FRAC_1_SQRT_2).abs() < EPS_MINUS_ONE_BAND {
        return Ok(h_printed_defining(omega, params, settings)?.value - h_printed_limit(params));
    }
    let w2 = omega * omega;
    let wp2 = wp * wp;
    if omega == wp {
        return Ok(-0.5 * PI * wp - h_printed_limit(params));
    }
    if omega > wp {
        let s = (2.0 * w2 - wp2).sqrt();
        let z = wp * s / (w2 - wp2);
        // h₂ − h_∞ = 2ω_p − (2ω²/s)·atan z, z = ω_p s/(ω² − ω_p²)
        return Ok(if z <= 0.5 {
            -2.0 * wp * wp2 / (w2 - wp2) - 2.0 * w2 / s * atan_minus_id(z)
        } else {
            0.5 * PI * wp + 2.0 * w2 / s * (-z).atan() - h_printed_limit(params)
        });
    }
    let g = (wp2 - w2).sqrt();
    if x < FRAC_1_SQRT_2 {
        // both atanh terms real: their sum is ln[(g² + ω_p s)/((g + s)ω)]
        let s = (wp2 - 2.0 * w2).sqrt();
        let log = ((g * g + wp * s) / ((g + s) * omega)).ln();
        let h1 = -0.5 * PI * omega - 2.0 * omega * (g / omega).atan() + 2.0 * w2 / s * log;
        return Ok(h1 - h_printed_limit(params));
    }
    let c = |v: f64| Complex64::new(v, 0.0);
    let s = c(wp2 - 2.0 * w2).sqrt();
    let root = c((2.0 * w2 - wp2) * (w2 - wp2)).sqrt();
    let bracket = -s * (g / omega).atan()
        + omega * (root / (w2 - wp2)).atanh()
        + omega * (wp * s / (wp2 - w2)).atanh();
    let h1 = -0.5 * PI * omega + (2.0 * omega * bracket / s).re;
    Ok(h1 - h_printed_limit(params))
}

/// Defining form of [`h_printed`] as a θ-integral (p = ω_p sin θ).
pub fn h_printed_defining(
    omega: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    params.validate()?;
    let wp = params.omega_p;
    let top = (omega.min(wp) / wp).asin();
    let f = |th: f64| wp * th.cos() * delta_s_unchecked(Channel::Tm, wp * th.sin(), omega, params);
    integrate_with_breaks(f, 0.0, top, &[], settings)
}

/// c = ∫₀^∞ (h_∞ − h) dω / ω_p² (dimensionless).
pub fn slab_constant_c(omega_p: f64, settings: &QuadSettings) -> Result<QuadResult> {
    let params = SlabParams::new(omega_p, 1.0)?;
    let failure = std::cell::Cell::new(None);
    let f = |w: f64| match h_printed_excess(w, &params, settings) {
        Ok(v) => -v,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    let cut = 20.0 * omega_p;
    let r = integrate_algebraic(f, 0.0, cut, &[FRAC_1_SQRT_2 * omega_p, omega_p], settings);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(r?.scaled(1.0 / (omega_p * omega_p)))
}

/// Quadrature of a weight against h_p with the failure of any fallback
/// integral propagated.
fn weighted_tm_integral(
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
    weight: impl Fn(f64) -> f64,
) -> Result<QuadResult> {
    let wp = params.omega_p;
    let failure = std::cell::Cell::new(None);
    let inner = settings.scaled(0.1);
    let f = |w: f64| {
        let v = weight(w);
        if v == 0.0 {
            return 0.0;
        }
        match h_weighted(w, params, &inner) {
            Ok(h) => v * h,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let r = integrate_decaying(f, 0.0, t, &[FRAC_1_SQRT_2 * wp, wp], settings);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    r
}

/// Subtracted surface free energy (the −ζ(3)T³/2π term removed).
pub fn surface_free_energy_subtr(
    ch: Channel,
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let wp = params.omega_p;
    match ch {
        Channel::Te => {
            let f = |w: f64| w * ln_one_minus_exp(w / t) * params.gamma(w).atan2(w);
            Ok(integrate_with_breaks(f, 0.0, wp, &[], settings)?.scaled(-t / (PI * PI)))
        }
        Channel::Tm => {
            let f = |w: f64| w * ln_one_minus_exp(w / t);
            let a = integrate_with_breaks(f, 0.0, wp, &[], settings)?.scaled(-t / (4.0 * PI));
            let b = weighted_tm_integral(t, params, settings, |w| occupation(w / t))?;
            Ok(a + b.scaled(-1.0 / (2.0 * PI * PI)))
        }
    }
}

pub fn surface_entropy_subtr(
    ch: Channel,
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let wp = params.omega_p;
    match ch {
        Channel::Te => {
            let f = |w: f64| w * entropy_weight(w / t) * params.gamma(w).atan2(w);
            Ok(integrate_with_breaks(f, 0.0, wp, &[], settings)?.scaled(-1.0 / (PI * PI)))
        }
        Channel::Tm => {
            let f = |w: f64| w * entropy_weight(w / t);
            let a = integrate_with_breaks(f, 0.0, wp, &[], settings)?.scaled(-1.0 / (4.0 * PI));
            let b = weighted_tm_integral(t, params, settings, |w| {
                w / (t * t) * occupation_slope(w / t)
            })?;
            Ok(a + b.scaled(1.0 / (2.0 * PI * PI)))
        }
    }
}

pub fn surface_free_energy(
    ch: Channel,
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    let r = surface_free_energy_subtr(ch, t, params, settings)?;
    let spec = surface_subtraction(ch);
    Ok(r.offset(spec.restore_free_energy(0.0, t)))
}

pub fn surface_entropy(
    ch: Channel,
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    let r = surface_entropy_subtr(ch, t, params, settings)?;
    let spec = surface_subtraction(ch);
    Ok(r.offset(spec.restore_entropy(0.0, t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SlabParams {
        SlabParams::new(1.0, 1.0).unwrap()
    }

    fn tight() -> QuadSettings {
        QuadSettings::with_tolerances(1e-13, 1e-300).unwrap()
    }

    #[test]
    fn delta_s_special_values() {
        let p = params();
        assert!((delta_s(Channel::Te, 0.0, 0.5, &p).unwrap() + FRAC_PI_2).abs() < 1e-15);
        assert!((delta_s(Channel::Te, 1.0, 1.5, &p).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(delta_s(Channel::Te, FRAC_1_SQRT_2, 1.0, &p).unwrap().abs() < 1e-15);
        assert!((delta_s(Channel::Tm, 0.0, 0.5, &p).unwrap() + FRAC_PI_2).abs() < 1e-15);
        assert!((delta_s(Channel::Tm, 1.0, 1.0, &p).unwrap() + FRAC_PI_2).abs() < 1e-15);
        assert!((delta_s(Channel::Tm, 1.0, 2.0, &p).unwrap() - FRAC_PI_2).abs() < 1e-15);
        // formal value at p = ω_p for ω < ω_p
        assert!((delta_s_unchecked(Channel::Tm, 1.0, 0.9, &p) + 1.5 * PI).abs() < 1e-15);
        assert_eq!(delta_s(Channel::Tm, 1.2, 2.0, &p).unwrap(), 0.0);
        assert!(delta_s(Channel::Te, 0.5, 0.4, &p).is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let par = params();
        for ch in Channel::ALL {
            for &(p, k) in &[(0.1, 0.3), (0.5, 0.2), (0.6, 1.5), (0.9, 0.05)] {
                let h = 1e-6;
                let f = |p: f64| delta_s_unchecked(ch, p, p.hypot(k), &par);
                let fd = (f(p + h) - f(p - h)) / (2.0 * h);
                let an = delta_s_deriv(ch, p, k, &par).unwrap();
                assert!(
                    (an - fd).abs() < 1e-6 * an.abs().max(1.0),
                    "{ch:?} {p} {k}: {an} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn weighted_h_closed_matches_defining() {
        let par = params();
        for &w in &[1e-3, 0.05, 0.3, 0.69, 0.72, 0.9, 0.999, 1.0, 1.3, 5.0] {
            let a = h_weighted_closed(w, &par);
            let b = h_weighted_defining(w, &par, &tight()).unwrap().value;
            assert!(
                (a - b).abs() < 1e-10 * b.abs().max(1e-300),
                "ω={w}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn printed_h_closed_matches_defining() {
        let par = params();
        for &w in &[
            1e-3, 0.05, 0.3, 0.6, 0.7, 0.72, 0.85, 0.99, 1.01, 1.5, 10.0, 300.0,
        ] {
            let a = h_printed(w, &par, &tight()).unwrap();
            let b = h_printed_defining(w, &par, &tight()).unwrap().value;
            assert!((a - b).abs() < 1e-9 * b.abs(), "ω={w}: {a} vs {b}");
        }
    }

    #[test]
    fn printed_h_asymptotics() {
        let par = params();
        let s = tight();
        let w = 1e-6;
        assert!((h_printed(w, &par, &s).unwrap() / (-1.5 * PI * w) - 1.0).abs() < 1e-5);
        let w = 1e3;
        let ex = h_printed_excess(w, &par, &s).unwrap();
        assert!((ex / (-2.0 / (3.0 * w * w)) - 1.0).abs() < 1e-5);
        for w in [FRAC_1_SQRT_2, 1.0] {
            let lo = h_printed(w - 1e-9, &par, &s).unwrap();
            let hi = h_printed(w + 1e-9, &par, &s).unwrap();
            assert!((lo - hi).abs() < 1e-6);
        }
    }

    #[test]
    fn constant_c_is_scale_free() {
        let s = QuadSettings::default();
        let c1 = slab_constant_c(1.0, &s).unwrap().value;
        let c2 = slab_constant_c(2.0, &s).unwrap().value;
        assert!((c1 - c2).abs() < 1e-8);
    }
}
