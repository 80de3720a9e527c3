//! Infinitely thin plasma sheet with a resonance: Ω(ω) = Ω₀ω²/(ω²−ω₀²).
//!
//! Continuum parts are written through the spectral densities
//! h(ω) = ∫₀¹ dε ∂δ/∂p|_{p=εω, k=ω√(1−ε²)}, so that
//! F = (T/2π²)∫ω² ln(1−e^{−ω/T}) h(ω) dω. Below ω₀ the transmission amplitude
//! has a zero at ω = ω₀, a −π phase step that the real-axis arctan misses;
//! it enters every channel as a line −(π/2)δ(ω−ω₀) in h.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::quad::{
    integrate_algebraic, integrate_decaying, integrate_with_breaks, QuadResult, QuadSettings,
};
use crate::numkernel::roots::find_root_bracketed;
use crate::numkernel::series::{atan_minus_id, atan_tail};
use crate::numkernel::thermal::{entropy_weight, ln_one_minus_exp, ZETA3, ZETA5};
use crate::spectral::{
    Channel, HeatKernelCoefficients, HeatKernelSet, Part, PartValue, ScatteringChannel,
    SubtractionSpec, ThermoPoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SheetParams {
    /// Ω₀
    pub plasma: f64,
    /// ω₀
    pub omega0: f64,
}

impl SheetParams {
    pub fn new(plasma: f64, omega0: f64) -> Result<Self> {
        let p = Self { plasma, omega0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.plasma > 0.0
            && self.plasma.is_finite()
            && self.omega0 >= 0.0
            && self.omega0.is_finite()
        {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "sheet needs Ω₀ > 0 and ω₀ ≥ 0, got Ω₀ = {}, ω₀ = {}",
                self.plasma, self.omega0
            )))
        }
    }

    /// u = ω₀² − Ω₀²/2; the plasmon contributes to the subtracted quantities iff u > 0.
    pub fn plasmon_offset(&self) -> f64 {
        self.omega0 * self.omega0 - 0.5 * self.plasma * self.plasma
    }

    fn breaks(&self) -> Vec<f64> {
        let mut b = vec![self.plasma];
        if self.omega0 > 0.0 {
            b.push(self.omega0);
        }
        b
    }
}

pub fn omega_of_omega(omega: f64, params: &SheetParams) -> Result<f64> {
    let a = omega * omega - params.omega0 * params.omega0;
    if a == 0.0 {
        return Err(Error::Pole(omega));
    }
    Ok(params.plasma * omega * omega / a)
}

pub fn phase_shift(ch: Channel, p: f64, k: f64, params: &SheetParams) -> Result<f64> {
    if !(p > 0.0) || !(k >= 0.0) {
        return Err(Error::Domain(format!(
            "phase shift needs p > 0, k ≥ 0 (p = {p}, k = {k})"
        )));
    }
    let w2 = k * k + p * p;
    let a = w2 - params.omega0 * params.omega0;
    match ch {
        Channel::Te => {
            if a == 0.0 {
                return Err(Error::Pole(w2.sqrt()));
            }
            Ok(-(params.plasma * w2 / (a * p)).atan())
        }
        // ω²/(Ωp) = a/(Ω₀p)
        Channel::Tm => Ok(-FRAC_PI_2 + (a / (params.plasma * p)).atan()),
    }
}

fn deriv_raw(ch: Channel, p: f64, k: f64, params: &SheetParams) -> f64 {
    let o = params.plasma;
    let w02 = params.omega0 * params.omega0;
    let w2 = k * k + p * p;
    let a = w2 - w02;
    match ch {
        Channel::Te => o * (w2 * w2 - w02 * (k * k - p * p)) / (p * p * a * a + o * o * w2 * w2),
        Channel::Tm => o * (p * p - k * k + w02) / (o * o * p * p + a * a),
    }
}

pub fn phase_shift_deriv(ch: Channel, p: f64, k: f64, params: &SheetParams) -> Result<f64> {
    let v = deriv_raw(ch, p, k, params);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Pole((k * k + p * p).sqrt()))
    }
}

/// (x − atan x)/x³
fn r_te(x: f64) -> f64 {
    if x.abs() >= 0.5 {
        return (x - x.atan()) / (x * x * x);
    }
    let x2 = x * x;
    let mut term: f64 = 1.0;
    let mut sum = 0.0;
    let mut n = 0;
    while term.abs() > 1e-18 {
        sum += term / (2 * n + 3) as f64;
        term *= -x2;
        n += 1;
    }
    sum
}

fn h_te(omega: f64, params: &SheetParams) -> f64 {
    let o = params.plasma;
    let w02 = params.omega0 * params.omega0;
    let x = (omega * omega - w02) / (o * omega);
    x.atan() / omega + 2.0 * w02 * r_te(x) / (o * omega * omega)
}

fn h_tm(omega: f64, params: &SheetParams) -> f64 {
    let o = params.plasma;
    let a = omega * omega - params.omega0 * params.omega0;
    if a == 0.0 {
        return f64::NAN;
    }
    (2.0 * omega * o - (o * o + 2.0 * a) * (o * omega / a).atan()) / (omega * o * o)
}

fn h_raw(ch: Channel, omega: f64, params: &SheetParams) -> f64 {
    match ch {
        Channel::Te => h_te(omega, params),
        Channel::Tm => h_tm(omega, params),
    }
}

/// Cancellation-free h_subtr for y = Ω₀ω/(ω²−ω₀²) small (large ω).
fn h_subtr_series(ch: Channel, omega: f64, params: &SheetParams) -> f64 {
    let o = params.plasma;
    let w02 = params.omega0 * params.omega0;
    let w2 = omega * omega;
    let a = w2 - w02;
    let y = o * omega / a;
    match ch {
        Channel::Te => {
            let s = atan_minus_id(y);
            let y2 = y * y;
            let y3 = y2 * y;
            -s / omega - o * w02 / (a * w2)
                + 2.0 * w02 / (o * w2) * (y2 - FRAC_PI_2 * y3 + y2 * y2 + y3 * s)
        }
        Channel::Tm => {
            let s5 = atan_tail(y, 2);
            o * w02 * (w2 + w02) / (3.0 * a * a * w2) + o * o * o * w2 / (3.0 * a * a * a)
                - (1.0 + 2.0 * a / (o * o)) * s5 / omega
        }
    }
}

fn h_subtr_direct(ch: Channel, omega: f64, params: &SheetParams) -> f64 {
    let w2 = omega * omega;
    match ch {
        Channel::Te => h_te(omega, params) - FRAC_PI_2 / omega + params.plasma / w2,
        Channel::Tm => h_tm(omega, params) + params.plasma / (3.0 * w2),
    }
}

fn h_subtr_raw(ch: Channel, omega: f64, params: &SheetParams) -> f64 {
    let a = omega * omega - params.omega0 * params.omega0;
    let y = params.plasma * omega / a;
    if a > 0.0 && y <= 0.5 {
        h_subtr_series(ch, omega, params)
    } else {
        h_subtr_direct(ch, omega, params)
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "frequency must be positive, got {omega}"
        )))
    }
}

fn finite_or_pole(v: f64, omega: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Pole(omega))
    }
}

/// Continuum spectral density (principal branches; TM jumps by −π/ω₀ at ω₀).
pub fn h(ch: Channel, omega: f64, params: &SheetParams) -> Result<f64> {
    check_omega(omega)?;
    finite_or_pole(h_raw(ch, omega, params), omega)
}

/// h_TE − π/(2ω) + Ω₀/ω², h_TM + Ω₀/(3ω²).
pub fn h_subtr(ch: Channel, omega: f64, params: &SheetParams) -> Result<f64> {
    check_omega(omega)?;
    finite_or_pole(h_subtr_raw(ch, omega, params), omega)
}

/// Defining form of h: the ε-integral of ∂δ/∂p.
pub fn h_defining(
    ch: Channel,
    omega: f64,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_omega(omega)?;
    let f = |e: f64| deriv_raw(ch, e * omega, omega * (1.0 - e * e).sqrt(), params);
    integrate_with_breaks(f, 0.0, 1.0, &[], settings)
}

/// Free-energy contribution of the resonance line (per channel).
pub fn resonance_free_energy(t: f64, params: &SheetParams) -> f64 {
    let w0 = params.omega0;
    if w0 > 0.0 {
        -t * w0 * w0 / (4.0 * PI) * ln_one_minus_exp(w0 / t)
    } else {
        0.0
    }
}

pub fn resonance_entropy(t: f64, params: &SheetParams) -> f64 {
    let w0 = params.omega0;
    if w0 > 0.0 {
        -w0 * w0 / (4.0 * PI) * entropy_weight(w0 / t)
    } else {
        0.0
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "temperature must be positive, got {t}"
        )))
    }
}

/// Analytic high-temperature subtraction of the continuum channels.
pub fn subtraction(ch: Channel, params: &SheetParams) -> SubtractionSpec {
    match ch {
        Channel::Te => SubtractionSpec {
            coeff_t3: -ZETA3 / (4.0 * PI),
            coeff_t2: params.plasma / 12.0,
        },
        Channel::Tm => SubtractionSpec {
            coeff_t3: 0.0,
            coeff_t2: params.plasma / 36.0,
        },
    }
}

/// Subtracted free energy of one continuum channel (including its resonance line).
pub fn free_energy_channel(
    ch: Channel,
    t: f64,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let f = |w: f64| w * w * ln_one_minus_exp(w / t) * h_subtr_raw(ch, w, params);
    let r = integrate_decaying(f, 0.0, t, &params.breaks(), settings)?;
    Ok(r.scaled(t / (2.0 * PI * PI))
        .offset(resonance_free_energy(t, params)))
}

pub fn entropy_channel(
    ch: Channel,
    t: f64,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let f = |w: f64| w * w * entropy_weight(w / t) * h_subtr_raw(ch, w, params);
    let r = integrate_decaying(f, 0.0, t, &params.breaks(), settings)?;
    Ok(r.scaled(1.0 / (2.0 * PI * PI))
        .offset(resonance_entropy(t, params)))
}

/// Unsubtracted channel free energy, integrated directly from h (not by
/// adding the subtraction back).
pub fn free_energy_channel_raw(
    ch: Channel,
    t: f64,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let f = |w: f64| w * w * ln_one_minus_exp(w / t) * h_raw(ch, w, params);
    let r = integrate_decaying(f, 0.0, t, &params.breaks(), settings)?;
    Ok(r.scaled(t / (2.0 * PI * PI))
        .offset(resonance_free_energy(t, params)))
}

/// M = ∫₀^∞ ω² h_subtr dω including the resonance line (−πω₀²/2).
pub fn spectral_moment(
    ch: Channel,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    params.validate()?;
    let cut = 20.0 * params.plasma.max(params.omega0);
    let f = |w: f64| w * w * h_subtr_raw(ch, w, params);
    let breaks: Vec<f64> = params.breaks().into_iter().filter(|&b| b < cut).collect();
    let r = integrate_algebraic(f, 0.0, cut, &breaks, settings)?;
    Ok(r.offset(-FRAC_PI_2 * params.omega0 * params.omega0))
}

/// Lower end of the plasmon branch used by the k-space form of the plasmon
/// integral; ω_sf there equals √max(0, u).
pub fn plasmon_k_min(params: &SheetParams) -> f64 {
    let (o, w0) = (params.plasma, params.omega0);
    if params.plasmon_offset() <= 0.0 {
        w0 * w0 / o
    } else {
        (w0 * w0 - 0.25 * o * o).sqrt()
    }
}

fn omega_sf_unchecked(k: f64, params: &SheetParams) -> f64 {
    let (o, w0) = (params.plasma, params.omega0);
    let s = (k * k - w0 * w0 + 0.25 * o * o).max(0.0).sqrt();
    let u = params.plasmon_offset();
    // u + Ω₀s cancels for u < 0 at small k; (Ω₀s)² − u² = Ω₀²k² − ω₀⁴ does not.
    let w2 = if u < 0.0 {
        (o * o * k * k - w0.powi(4)) / (o * s - u)
    } else {
        u + o * s
    };
    w2.max(0.0).sqrt()
}

/// Surface plasmon frequency, k ≥ ω₀ (bound states, 1 + Q_TM = 0).
pub fn omega_sf(k: f64, params: &SheetParams) -> Result<f64> {
    params.validate()?;
    if !(k >= params.omega0) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "surface mode needs k ≥ ω₀ = {}, got {k}",
            params.omega0
        )));
    }
    Ok(omega_sf_unchecked(k, params))
}

/// The same closed form on its full real range k ≥ [`plasmon_k_min`]; for
/// k < ω₀ it solves 1 − Q_TM = 0 rather than the bound-state condition.
pub fn omega_sf_formula(k: f64, params: &SheetParams) -> Result<f64> {
    params.validate()?;
    let kmin = plasmon_k_min(params);
    if !(k >= kmin * (1.0 - 1e-14)) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "k = {k} below plasmon branch start {kmin}"
        )));
    }
    Ok(omega_sf_unchecked(k, params))
}

/// 1 + Q_TM at p = iη, η = √(k² − ω²): 1 − Ω₀η/(ω² − ω₀²).
pub fn surface_mode_residual(k: f64, omega: f64, params: &SheetParams) -> f64 {
    let eta = (k * k - omega * omega).max(0.0).sqrt();
    1.0 - params.plasma * eta / (omega * omega - params.omega0 * params.omega0)
}

fn plasmon_weight(w: f64, params: &SheetParams) -> f64 {
    2.0 * w * (w * w - params.plasmon_offset()) / (params.plasma * params.plasma)
}

/// Closed T³ and T⁵ terms of the raw plasmon free energy.
pub fn plasmon_closed_terms(t: f64, params: &SheetParams) -> (f64, f64) {
    let ratio = params.omega0 * params.omega0 / (params.plasma * params.plasma);
    let t3 = -(1.0 - 2.0 * ratio) * ZETA3 * t.powi(3) / (2.0 * PI);
    let t5 = -6.0 * ZETA5 * t.powi(5) / (PI * params.plasma * params.plasma);
    (t3, t5)
}

pub fn plasmon_subtraction(params: &SheetParams) -> SubtractionSpec {
    let ratio = params.omega0 * params.omega0 / (params.plasma * params.plasma);
    SubtractionSpec {
        coeff_t3: -(1.0 - 2.0 * ratio) * ZETA3 / (2.0 * PI),
        coeff_t2: 0.0,
    }
}

pub fn plasmon_free_energy_subtr(
    t: f64,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let u = params.plasmon_offset();
    if u <= 0.0 {
        return Ok(QuadResult::exact(0.0));
    }
    let f = |w: f64| plasmon_weight(w, params) * ln_one_minus_exp(w / t);
    let r = integrate_with_breaks(f, 0.0, u.sqrt(), &[], settings)?;
    Ok(r.scaled(-t / (2.0 * PI)))
}

pub fn plasmon_entropy_subtr(
    t: f64,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let u = params.plasmon_offset();
    if u <= 0.0 {
        return Ok(QuadResult::exact(0.0));
    }
    let f = |w: f64| plasmon_weight(w, params) * entropy_weight(w / t);
    let r = integrate_with_breaks(f, 0.0, u.sqrt(), &[], settings)?;
    Ok(r.scaled(-1.0 / (2.0 * PI)))
}

/// Raw plasmon free energy as a single ω-integral from the branch start
/// (includes the T³ and T⁵ terms).
pub fn plasmon_free_energy_raw(
    t: f64,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let lo = params.plasmon_offset().max(0.0).sqrt();
    let f = |w: f64| plasmon_weight(w, params) * ln_one_minus_exp(w / t);
    let r = integrate_decaying(f, lo, t, &[params.plasma], settings)?;
    Ok(r.scaled(t / (2.0 * PI)))
}

/// Raw plasmon free energy without its T⁵ term, split so that nothing of
/// order T⁵ is ever formed: the weight is 2ω³/Ω₀² − 2ωu/Ω₀², and the ω³ piece
/// integrated from 0 is exactly the T⁵ term.
pub fn plasmon_free_energy_reduced(
    t: f64,
    params: &SheetParams,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    check_t(t)?;
    params.validate()?;
    let o2 = params.plasma * params.plasma;
    let u = params.plasmon_offset();
    let lo = u.max(0.0).sqrt();
    let linear = |w: f64| -2.0 * w * u / o2 * ln_one_minus_exp(w / t);
    let mut r = integrate_decaying(linear, lo, t, &[params.plasma], settings)?;
    if lo > 0.0 {
        let cubic = |w: f64| -2.0 * w * w * w / o2 * ln_one_minus_exp(w / t);
        r = r + integrate_with_breaks(cubic, 0.0, lo, &[], settings)?;
    }
    Ok(r.scaled(t / (2.0 * PI)))
}

/// All three subtracted parts at one temperature. Raw values in the
/// breakdown carry the analytic T³/T² terms (the plasmon's T⁵ term is left out).
pub fn total(t: f64, params: &SheetParams, settings: &QuadSettings) -> Result<ThermoPoint> {
    let mut parts = BTreeMap::new();
    for (part, ch) in [(Part::Te, Channel::Te), (Part::Tm, Channel::Tm)] {
        let f = free_energy_channel(ch, t, params, settings)?;
        let s = entropy_channel(ch, t, params, settings)?;
        let err = f.error_estimate.max(s.error_estimate);
        parts.insert(
            part,
            PartValue::from_subtracted(t, f.value, s.value, subtraction(ch, params), err),
        );
    }
    let f = plasmon_free_energy_subtr(t, params, settings)?;
    let s = plasmon_entropy_subtr(t, params, settings)?;
    parts.insert(
        Part::SurfacePlasmon,
        PartValue::from_subtracted(
            t,
            f.value,
            s.value,
            plasmon_subtraction(params),
            f.error_estimate.max(s.error_estimate),
        ),
    );
    Ok(ThermoPoint::from_parts(t, parts))
}

/// Coefficient of ln T in the subtracted total entropy at high T.
pub fn high_t_log_coefficient(params: &SheetParams, settings: &QuadSettings) -> Result<f64> {
    let m = spectral_moment(Channel::Te, params, settings)?.value
        + spectral_moment(Channel::Tm, params, settings)?.value;
    let u = params.plasmon_offset();
    let sf = if u > 0.0 {
        u * u / (4.0 * PI * params.plasma * params.plasma)
    } else {
        0.0
    };
    Ok(m / (2.0 * PI * PI) + sf)
}

/// Closed form of [`high_t_log_coefficient`]: (−u + u²Θ(u)/Ω₀²)/(4π).
pub fn high_t_log_coefficient_closed(params: &SheetParams) -> f64 {
    let u = params.plasmon_offset();
    let sf = if u > 0.0 {
        u * u / (params.plasma * params.plasma)
    } else {
        0.0
    };
    (-u + sf) / (4.0 * PI)
}

/// Analytic a_{1/2}, a₁ and a_{3/2} from the spectral moments.
pub fn heat_kernel_coeffs(params: &SheetParams, settings: &QuadSettings) -> Result<HeatKernelSet> {
    let o = params.plasma;
    let sqrt_pi = PI.sqrt();
    let ratio = params.omega0 * params.omega0 / (o * o);
    let u = params.plasmon_offset();
    let m_te = spectral_moment(Channel::Te, params, settings)?.value;
    let m_tm = spectral_moment(Channel::Tm, params, settings)?.value;
    let sf = if u > 0.0 {
        2.0 * sqrt_pi * u * u / (o * o)
    } else {
        0.0
    };
    let mut set = HeatKernelSet::default();
    set.channels.insert(
        Channel::Te,
        HeatKernelCoefficients {
            a_half: sqrt_pi,
            a_one: -2.0 * o,
            a_three_half: 4.0 / sqrt_pi * m_te,
            fit_residual: 0.0,
        },
    );
    set.channels.insert(
        Channel::Tm,
        HeatKernelCoefficients {
            a_half: 2.0 * sqrt_pi * (1.0 - 2.0 * ratio),
            a_one: -2.0 * o / 3.0,
            a_three_half: 4.0 / sqrt_pi * m_tm + sf,
            fit_residual: 0.0,
        },
    );
    Ok(set)
}

/// ω₀ at which a_{3/2}^TE changes sign, searched in [lo, hi]·Ω₀.
pub fn a_three_half_te_crossing(
    plasma: f64,
    lo: f64,
    hi: f64,
    settings: &QuadSettings,
) -> Result<f64> {
    let failure = std::cell::Cell::new(None);
    let f = |w0: f64| {
        let p = SheetParams {
            plasma,
            omega0: w0 * plasma,
        };
        match spectral_moment(Channel::Te, &p, settings) {
            Ok(m) => m.value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let r = find_root_bracketed(f, lo, hi, 1e-10);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(r? * plasma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub omega0: f64,
    pub log_coefficient: f64,
    pub min_entropy: f64,
    pub t_at_min: f64,
}

/// Minimum of the subtracted total entropy over a T grid, per ω₀.
pub fn scan_row(
    plasma: f64,
    omega0: f64,
    temps: &[f64],
    settings: &QuadSettings,
) -> Result<ScanRow> {
    let params = SheetParams::new(plasma, omega0)?;
    let mut min_entropy = f64::INFINITY;
    let mut t_at_min = f64::NAN;
    for &t in temps {
        let s = total(t, &params, settings)?.s_subtr;
        if s < min_entropy {
            min_entropy = s;
            t_at_min = t;
        }
    }
    Ok(ScanRow {
        omega0,
        log_coefficient: high_t_log_coefficient(&params, settings)?,
        min_entropy,
        t_at_min,
    })
}

/// Smallest and largest ω₀ of the rows satisfying `pred`.
pub fn window(rows: &[ScanRow], pred: impl Fn(&ScanRow) -> bool) -> Option<(f64, f64)> {
    let hits: Vec<f64> = rows.iter().filter(|r| pred(r)).map(|r| r.omega0).collect();
    Some((*hits.first()?, *hits.last()?))
}

/// One polarisation of the sheet as a scattering channel (continuum, the
/// resonance step and, for TM, the plasmon branch).
#[derive(Debug, Clone, Copy)]
pub struct SheetChannel {
    pub channel: Channel,
    pub params: SheetParams,
}

impl ScatteringChannel for SheetChannel {
    fn phase_shift(&self, p: f64, k: f64) -> f64 {
        phase_shift(self.channel, p, k, &self.params).unwrap_or(f64::NAN)
    }

    fn phase_shift_deriv(&self, p: f64, k: f64) -> Option<f64> {
        Some(deriv_raw(self.channel, p, k, &self.params))
    }

    fn phase_jumps(&self, k: f64) -> Vec<(f64, f64)> {
        let w0 = self.params.omega0;
        if k < w0 {
            vec![((w0 * w0 - k * k).sqrt(), -PI)]
        } else {
            Vec::new()
        }
    }

    fn p_breakpoints(&self, k: f64) -> Vec<f64> {
        let mut b = vec![self.params.plasma];
        b.extend(self.phase_jumps(k).into_iter().map(|j| j.0));
        b
    }

    fn k_breakpoints(&self) -> Vec<f64> {
        self.params.breaks()
    }

    fn has_surface_mode(&self) -> bool {
        self.channel == Channel::Tm
    }

    fn surface_mode(&self, k: f64) -> Option<f64> {
        match self.channel {
            Channel::Tm => omega_sf_formula(k, &self.params).ok(),
            Channel::Te => None,
        }
    }

    fn k_min_surface(&self) -> f64 {
        plasmon_k_min(&self.params)
    }

    fn scale(&self) -> f64 {
        self.params.plasma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(w0: f64) -> SheetParams {
        SheetParams::new(1.0, w0).unwrap()
    }

    #[test]
    fn plasma_frequency_function() {
        assert_eq!(omega_of_omega(3.0, &p(0.0)).unwrap(), 1.0);
        assert!((omega_of_omega(1e6, &p(0.5)).unwrap() - 1.0).abs() < 1e-12);
        assert!(omega_of_omega(0.3, &p(0.5)).unwrap() < 0.0);
        assert!(matches!(omega_of_omega(0.5, &p(0.5)), Err(Error::Pole(_))));
    }

    #[test]
    fn phase_shift_examples() {
        let q = p(0.0);
        assert!((phase_shift(Channel::Te, 1.0, 0.0, &q).unwrap() + PI / 4.0).abs() < 1e-15);
        assert!((phase_shift(Channel::Tm, 1.0, 0.0, &q).unwrap() + PI / 4.0).abs() < 1e-15);
        let far = phase_shift(Channel::Te, 1e8, 0.3, &q).unwrap();
        assert!(far < 0.0 && far > -1e-7);
        assert!(phase_shift(Channel::Te, 0.3, 0.4, &p(0.5)).is_err());
    }

    #[test]
    fn derivative_k0_closed_form() {
        let q = p(0.0);
        for pp in [0.1, 1.0, 7.0] {
            let d = phase_shift_deriv(Channel::Te, pp, 0.0, &q).unwrap();
            assert!((d - 1.0 / (1.0 + pp * pp)).abs() < 1e-15);
        }
    }

    #[test]
    fn h_examples() {
        let q = p(0.0);
        assert!((h(Channel::Te, 1.0, &q).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((h(Channel::Tm, 1.0, &q).unwrap() - (2.0 - 0.75 * PI)).abs() < 1e-15);
        let w = 1e4;
        assert!((h(Channel::Te, w, &q).unwrap() * w / FRAC_PI_2 - 1.0).abs() < 1e-3);
        assert!((h(Channel::Tm, w, &q).unwrap() * w * w * -3.0 - 1.0).abs() < 1e-3);
        assert!(h(Channel::Tm, 0.5, &p(0.5)).is_err());
    }

    #[test]
    fn series_and_direct_subtraction_agree() {
        for w0 in [0.0, 0.5, 1.3] {
            let q = p(w0);
            for ch in Channel::ALL {
                // y = 0.5 at ω = 1 + √(1 + ω₀²); the forms overlap around it
                let w = 1.0 + (1.0 + w0 * w0).sqrt();
                for f in [0.9, 1.0, 1.2] {
                    let a = h_subtr_series(ch, f * w, &q);
                    let b = h_subtr_direct(ch, f * w, &q);
                    assert!((a - b).abs() < 1e-12 * a.abs(), "{ch:?} {w0} {f}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn subtracted_h_decays() {
        for w0 in [0.0, 0.5] {
            let q = p(w0);
            for ch in Channel::ALL {
                let a = h_subtr(ch, 1e3, &q).unwrap().abs();
                let b = h_subtr(ch, 2e3, &q).unwrap().abs();
                assert!(b < a / 7.9, "{ch:?}: {a} {b}");
            }
        }
    }

    #[test]
    fn surface_mode_values() {
        let q = p(0.0);
        assert_eq!(omega_sf(0.0, &q).unwrap(), 0.0);
        let k = 1e6;
        assert!((omega_sf(k, &q).unwrap() / k.sqrt() - 1.0).abs() < 1e-3);
        let q = p(0.8);
        assert!((omega_sf(0.8, &q).unwrap() - 0.8).abs() < 1e-15);
        assert!(omega_sf(0.7, &q).is_err());
        assert!(omega_sf_formula(0.7, &q).is_ok());
    }

    #[test]
    fn plasmon_off_below_threshold() {
        let s = QuadSettings::default();
        assert_eq!(
            plasmon_free_energy_subtr(1.0, &p(0.0), &s).unwrap().value,
            0.0
        );
        assert_eq!(plasmon_entropy_subtr(1.0, &p(0.7), &s).unwrap().value, 0.0);
        assert!(plasmon_entropy_subtr(1.0, &p(0.9), &s).unwrap().value > 0.0);
        assert!(plasmon_free_energy_subtr(1.0, &p(0.9), &s).unwrap().value < 0.0);
    }

    #[test]
    fn reduced_plasmon_is_raw_minus_t5() {
        let s = QuadSettings::with_tolerances(1e-12, 1e-300).unwrap();
        for (w0, t) in [(0.0, 0.7), (0.9, 1.5), (1.4, 0.3)] {
            let q = p(w0);
            let raw = plasmon_free_energy_raw(t, &q, &s).unwrap().value;
            let red = plasmon_free_energy_reduced(t, &q, &s).unwrap().value;
            let t5 = plasmon_closed_terms(t, &q).1;
            assert!(
                (raw - t5 - red).abs() < 1e-10 * raw.abs(),
                "{w0} {t}: {raw} {t5} {red}"
            );
        }
    }

    #[test]
    fn closed_log_coefficient_signs() {
        assert!(high_t_log_coefficient_closed(&p(0.0)) > 0.0);
        assert!(high_t_log_coefficient_closed(&p(0.8)) < 0.0);
        assert!(high_t_log_coefficient_closed(&p(2.0)) > 0.0);
    }
}
