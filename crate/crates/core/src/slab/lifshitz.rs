//! Lifshitz (thickness-dependent) part: δ^L = arg(1 − ρ) with
//! ρ = R²e^{−2iQL}, R = (P − Q)/(P + Q) and Q = q above ω_p, −iγ below.
//! |ρ| < 1 away from p = ω_p, so the principal argument is continuous on
//! each side; at p = ω_p, δ^L steps up by π/2.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_t, impedance, SlabParams};
use crate::error::{Error, Result};
use crate::numkernel::quad::{integrate_decaying, integrate_with_breaks, QuadResult, QuadSettings};
use crate::numkernel::thermal::{entropy_weight, ln_one_minus_exp, occupation, occupation_slope};
use crate::spectral::Channel;

/// Q with the sign convention that makes e^{−2iQL} decay below ω_p.
fn unified_q(p: f64, params: &SlabParams) -> Complex64 {
    let wp = params.omega_p;
    if p > wp {
        Complex64::new((p * p - wp * wp).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, -params.gamma(p))
    }
}

fn rho(ch: Channel, p: f64, omega: f64, params: &SlabParams) -> Complex64 {
    let big_p = Complex64::new(impedance(ch, p, params.eps_unchecked(omega)), 0.0);
    let q = unified_q(p, params);
    let r = (big_p - q) / (big_p + q);
    r * r * (Complex64::new(0.0, -2.0 * params.thickness) * q).exp()
}

pub(crate) fn delta_l_unchecked(ch: Channel, p: f64, omega: f64, params: &SlabParams) -> f64 {
    if p == params.omega_p {
        // one-sided limit from above
        let big_p = impedance(ch, p, params.eps_unchecked(omega));
        return (0.5 * big_p * params.thickness).atan();
    }
    (1.0 - rho(ch, p, omega, params)).arg()
}

fn check(p: f64, omega: f64) -> Result<()> {
    if p > 0.0 && omega >= p && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "δ^L needs 0 < p ≤ ω, got p = {p}, ω = {omega}"
        )))
    }
}

pub fn delta_l(ch: Channel, p: f64, omega: f64, params: &SlabParams) -> Result<f64> {
    params.validate()?;
    check(p, omega)?;
    Ok(delta_l_unchecked(ch, p, omega, params))
}

/// (1/2i)·ln[(1 − ρ)/(1 − ρ̄)]: the logarithm-ratio form. Real up to rounding.
pub fn delta_l_log_form(ch: Channel, p: f64, omega: f64, params: &SlabParams) -> Result<Complex64> {
    params.validate()?;
    check(p, omega)?;
    let n = 1.0 - rho(ch, p, omega, params);
    Ok((n / n.conj()).ln() / Complex64::new(0.0, 2.0))
}

pub(crate) fn delta_l_deriv_unchecked(ch: Channel, p: f64, k: f64, params: &SlabParams) -> f64 {
    let wp = params.omega_p;
    if p == wp {
        // integrable 1/√|p − ω_p| singularity; the point itself has measure zero
        return 0.0;
    }
    let l = params.thickness;
    let w2 = p * p + k * k;
    let eps = 1.0 - wp * wp / w2;
    let (big_p, big_p_d) = match ch {
        Channel::Te => (p, 1.0),
        Channel::Tm => (eps * p, 2.0 * wp * wp * p * p / (w2 * w2) + eps),
    };
    let big_p = Complex64::new(big_p, 0.0);
    let q = unified_q(p, params);
    let q_d = p / q;
    let plus = big_p + q;
    let r = (big_p - q) / plus;
    let r_d = 2.0 * (big_p_d * q - big_p * q_d) / (plus * plus);
    let e = (Complex64::new(0.0, -2.0 * l) * q).exp();
    let e_d = Complex64::new(0.0, -2.0 * l) * q_d * e;
    let rho = r * r * e;
    let rho_d = 2.0 * r * r_d * e + r * r * e_d;
    (-rho_d / (1.0 - rho)).im
}

/// ∂δ^L/∂p at fixed k (p ≠ ω_p).
pub fn delta_l_deriv(ch: Channel, p: f64, k: f64, params: &SlabParams) -> Result<f64> {
    params.validate()?;
    let v = delta_l_deriv_unchecked(ch, p, k, params);
    if p > 0.0 && k >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!(
            "∂δ^L/∂p undefined at p = {p}, k = {k}"
        )))
    }
}

/// Inner budget for h_L: relative 10⁻¹⁰ (tighter if the caller asks), with
/// an absolute floor on the natural scale ω_p² of h_L, where it decays to
/// zero at large ω.
fn inner_settings(params: &SlabParams, settings: &QuadSettings) -> QuadSettings {
    let rel_tol = (0.01 * settings.rel_tol).clamp(1e-13, 1e-10);
    QuadSettings {
        rel_tol,
        abs_tol: (0.01 * settings.abs_tol).max(1e-3 * rel_tol * params.omega_p * params.omega_p),
        ..*settings
    }
}

/// Beyond this frequency h_L is not evaluated: it oscillates around zero with
/// an amplitude falling like ω⁻² (its ω → ∞ limit is the vanishing TE moment).
fn kernel_cut(params: &SlabParams) -> f64 {
    200.0 * params.omega_p.max(1.0 / params.thickness)
}

/// h_L(ω) = ∫₀^ω p δ^L_TM(p, ω) dp. Both sides of p = ω_p are square-root
/// branch points; they are integrated in p = ω_p sin θ and p = ω_p cosh u.
pub fn lifshitz_kernel_tm(
    omega: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    params.validate()?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("h_L needs ω > 0, got {omega}")));
    }
    let wp = params.omega_p;
    let below = |th: f64| {
        let p = wp * th.sin();
        wp * th.cos() * p * delta_l_unchecked(Channel::Tm, p, omega, params)
    };
    let top = (omega.min(wp) / wp).asin();
    let mut r = integrate_with_breaks(below, 0.0, top, &[], settings)?;
    if omega > wp {
        let above = |u: f64| {
            let p = wp * u.cosh();
            wp * u.sinh() * p * delta_l_unchecked(Channel::Tm, p, omega, params)
        };
        r = r + integrate_with_breaks(above, 0.0, (omega / wp).acosh(), &[], settings)?;
    }
    Ok(r)
}

/// ∫ w(ω)·h_L(ω) dω with h_L from nested quadrature. `outer` receives the
/// integrand and returns the integral and the length of its support, over
/// which the worst |w|·δh_L is charged to the error estimate.
fn tm_integral(
    params: &SlabParams,
    settings: &QuadSettings,
    outer: impl FnOnce(&dyn Fn(f64) -> f64) -> Result<(QuadResult, f64)>,
    weight: impl Fn(f64) -> f64,
) -> Result<QuadResult> {
    let inner = inner_settings(params, settings);
    let failure = Cell::new(None);
    let worst = Cell::new(0.0f64);
    let f = |w: f64| {
        let v = weight(w);
        if v == 0.0 {
            return 0.0;
        }
        let (h, err) = match lifshitz_kernel_tm(w, params, &inner) {
            Ok(h) => (h.value, h.error_estimate),
            Err(Error::NoConvergence { value, error, .. })
                if value.is_finite() && error.is_finite() =>
            {
                (value, error)
            }
            Err(e) => {
                failure.set(Some(e));
                return f64::NAN;
            }
        };
        worst.set(worst.get().max((v * err).abs()));
        v * h
    };
    let r = outer(&f);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let (mut r, span) = r?;
    r.error_estimate += worst.get() * span;
    Ok(r)
}

/// Outer ω-integral of the TM part: Bose-decaying when the weight dies before
/// the kernel cut, otherwise truncated there with |f(cut)|·cut added to the error.
fn thermal_outer(
    f: &dyn Fn(f64) -> f64,
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<(QuadResult, f64)> {
    let cut = kernel_cut(params);
    if 80.0 * t < cut {
        return Ok((
            integrate_decaying(f, 0.0, t, &[params.omega_p], settings)?,
            80.0 * t,
        ));
    }
    let mut r = integrate_with_breaks(f, 0.0, cut, &[params.omega_p], settings)?;
    r.error_estimate += f(cut).abs() * cut;
    Ok((r, cut))
}

pub fn lifshitz_free_energy(
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
            let f =
                |w: f64| w * ln_one_minus_exp(w / t) * delta_l_unchecked(Channel::Te, w, w, params);
            Ok(integrate_decaying(f, 0.0, t, &[wp], settings)?.scaled(t / (2.0 * PI * PI)))
        }
        Channel::Tm => {
            let r = tm_integral(
                params,
                settings,
                |f| thermal_outer(f, t, params, settings),
                |w| occupation(w / t),
            )?;
            Ok(r.scaled(-1.0 / (2.0 * PI * PI)))
        }
    }
}

pub fn lifshitz_entropy(
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
            let f =
                |w: f64| w * entropy_weight(w / t) * delta_l_unchecked(Channel::Te, w, w, params);
            Ok(integrate_decaying(f, 0.0, t, &[wp], settings)?.scaled(1.0 / (2.0 * PI * PI)))
        }
        Channel::Tm => {
            let r = tm_integral(
                params,
                settings,
                |f| thermal_outer(f, t, params, settings),
                |w| w / (t * t) * occupation_slope(w / t),
            )?;
            Ok(r.scaled(1.0 / (2.0 * PI * PI)))
        }
    }
}

/// ∫₀^∞ of a moment integrand that decays like ω^{−n} (n ≥ 3) while
/// oscillating as sin(2qL). Integrated up to a long cut; integration by parts
/// bounds the remaining tail by amplitude/2L, which is added (twice) to the
/// error estimate.
fn oscillatory_moment(
    f: &dyn Fn(f64) -> f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    let cut = kernel_cut(params);
    let mut r = integrate_with_breaks(f, 0.0, cut, &[params.omega_p], settings)?;
    let period = PI / params.thickness;
    let amplitude = (0..64)
        .map(|i| f(cut - period * i as f64 / 64.0).abs())
        .fold(0.0, f64::max);
    r.error_estimate += amplitude / params.thickness;
    Ok(r)
}

/// ∫₀^∞ ω δ^L_TE(ω) dω: coefficient of a would-be T ln T term.
pub fn lifshitz_moment_te(params: &SlabParams, settings: &QuadSettings) -> Result<QuadResult> {
    params.validate()?;
    let f = |w: f64| w * delta_l_unchecked(Channel::Te, w, w, params);
    oscillatory_moment(&f, params, settings)
}

/// d in F_L_TE → d·ω_p²·T at high T: (1/2π²ω_p²)∫ω ln(ω/ω_p) δ^L_TE dω.
pub fn lifshitz_constant_te(params: &SlabParams, settings: &QuadSettings) -> Result<QuadResult> {
    params.validate()?;
    let wp = params.omega_p;
    let f = |w: f64| w * (w / wp).ln() * delta_l_unchecked(Channel::Te, w, w, params);
    let r = oscillatory_moment(&f, params, settings)?;
    Ok(r.scaled(1.0 / (2.0 * PI * PI * wp * wp)))
}

/// The same constant from the TM side: −(1/2π²ω_p²)∫h_L(ω)/ω dω.
pub fn lifshitz_constant_tm(params: &SlabParams, settings: &QuadSettings) -> Result<QuadResult> {
    params.validate()?;
    let wp = params.omega_p;
    let r = tm_integral(
        params,
        settings,
        |f| Ok((oscillatory_moment(f, params, settings)?, kernel_cut(params))),
        |w| 1.0 / w,
    )?;
    Ok(r.scaled(-1.0 / (2.0 * PI * PI * wp * wp)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SlabParams {
        SlabParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn log_form_is_real_and_equal() {
        let par = params();
        for ch in Channel::ALL {
            for &(p, w) in &[
                (0.1, 0.5),
                (0.5, 0.5),
                (0.9, 2.0),
                (1.2, 1.5),
                (3.0, 3.5),
                (0.99, 0.995),
            ] {
                let z = delta_l_log_form(ch, p, w, &par).unwrap();
                let d = delta_l(ch, p, w, &par).unwrap();
                assert!(z.im.abs() < 1e-14);
                assert!((z.re - d).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn step_at_plasma_frequency() {
        let par = params();
        for ch in Channel::ALL {
            let w = 1.3;
            let lo = delta_l(ch, 1.0 - 1e-10, w, &par).unwrap();
            let hi = delta_l(ch, 1.0 + 1e-10, w, &par).unwrap();
            assert!((hi - lo - 0.5 * PI).abs() < 1e-4, "{ch:?}: {lo} → {hi}");
        }
    }

    #[test]
    fn small_p_limit() {
        let par = SlabParams::new(1.0, 0.7).unwrap();
        let p = 1e-6;
        let expect = 4.0 * p / ((2.0f64 * 0.7).exp() - 1.0);
        let d = delta_l(Channel::Te, p, p, &par).unwrap();
        assert!((d / expect - 1.0).abs() < 1e-5);
    }

    #[test]
    fn thick_slab_decouples_below_threshold() {
        let par = SlabParams::new(1.0, 200.0).unwrap();
        for ch in Channel::ALL {
            assert!(delta_l(ch, 0.5, 0.8, &par).unwrap().abs() < 1e-100);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let par = params();
        for ch in Channel::ALL {
            for &(p, k) in &[(0.2, 0.3), (0.8, 0.1), (1.3, 0.4), (2.5, 2.0), (0.5, 0.0)] {
                let h = 1e-6;
                let f = |p: f64| delta_l_unchecked(ch, p, p.hypot(k), &par);
                let fd = (f(p + h) - f(p - h)) / (2.0 * h);
                let an = delta_l_deriv(ch, p, k, &par).unwrap();
                assert!(
                    (an - fd).abs() < 1e-6 * an.abs().max(1.0),
                    "{ch:?} {p} {k}: {an} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn tm_kernel_small_omega() {
        let par = params();
        let s = QuadSettings::with_tolerances(1e-12, 1e-300).unwrap();
        let w: f64 = 1e-6;
        let h = lifshitz_kernel_tm(w, &par, &s).unwrap().value;
        let expect = 4.0 * w.powi(3) / (2f64.exp() - 1.0);
        assert!((h / expect - 1.0).abs() < 1e-3, "{h} vs {expect}");
    }
}
