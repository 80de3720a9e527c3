//! Thermodynamics of a planar scatterer from its transmission phase shifts:
//! the brute-force (k, p) integrals used as oracles, the high-temperature
//! subtraction, and heat-kernel coefficient extraction from fits.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::fit::{fit_asymptotic, Basis};
use crate::numkernel::quad::{
    integrate_decaying, integrate_edge_singular, integrate_with_breaks, QuadResult, QuadSettings,
};
use crate::numkernel::thermal::{entropy_weight, ln_one_minus_exp, ZETA3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    Te,
    Tm,
}

impl Channel {
    pub const ALL: [Channel; 2] = [Channel::Te, Channel::Tm];

    pub fn label(self) -> &'static str {
        match self {
            Channel::Te => "TE",
            Channel::Tm => "TM",
        }
    }
}

/// Additive pieces of a model's free energy. The sheet uses the first three,
/// the slab the last five.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    Te,
    Tm,
    SurfacePlasmon,
    SurfaceTe,
    SurfaceTm,
    LifshitzTe,
    LifshitzTm,
    Exp,
}

impl Part {
    pub const SHEET: [Part; 3] = [Part::Te, Part::Tm, Part::SurfacePlasmon];
    pub const SLAB: [Part; 5] = [
        Part::SurfaceTe,
        Part::SurfaceTm,
        Part::LifshitzTe,
        Part::LifshitzTm,
        Part::Exp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Part::Te => "TE",
            Part::Tm => "TM",
            Part::SurfacePlasmon => "sf",
            Part::SurfaceTe => "s_TE",
            Part::SurfaceTm => "s_TM",
            Part::LifshitzTe => "L_TE",
            Part::LifshitzTm => "L_TM",
            Part::Exp => "exp",
        }
    }

    /// Polarisation the part belongs to; the slab's exp part is shared.
    pub fn channel(self) -> Option<Channel> {
        match self {
            Part::Te | Part::SurfaceTe | Part::LifshitzTe => Some(Channel::Te),
            Part::Tm | Part::SurfacePlasmon | Part::SurfaceTm | Part::LifshitzTm => {
                Some(Channel::Tm)
            }
            Part::Exp => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PartValue {
    pub f_raw: f64,
    pub f_subtr: f64,
    pub s_raw: f64,
    pub s_subtr: f64,
    /// Largest quadrature error estimate among the integrals behind this part.
    pub error: f64,
}

impl PartValue {
    /// Build from subtracted values and the analytic subtraction.
    pub fn from_subtracted(
        t: f64,
        f_subtr: f64,
        s_subtr: f64,
        spec: SubtractionSpec,
        error: f64,
    ) -> Self {
        Self {
            f_raw: spec.restore_free_energy(f_subtr, t),
            f_subtr,
            s_raw: spec.restore_entropy(s_subtr, t),
            s_subtr,
            error,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Self {
            f_raw: c * self.f_raw,
            f_subtr: c * self.f_subtr,
            s_raw: c * self.s_raw,
            s_subtr: c * self.s_subtr,
            error: c.abs() * self.error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub t: f64,
    pub f_raw: f64,
    pub f_subtr: f64,
    pub s_raw: f64,
    pub s_subtr: f64,
    pub error: f64,
    pub breakdown: BTreeMap<Part, PartValue>,
}

impl ThermoPoint {
    /// Totals are summed in part order, so they are reproducible bit for bit.
    pub fn from_parts(t: f64, breakdown: BTreeMap<Part, PartValue>) -> Self {
        let mut p = ThermoPoint {
            t,
            f_raw: 0.0,
            f_subtr: 0.0,
            s_raw: 0.0,
            s_subtr: 0.0,
            error: 0.0,
            breakdown,
        };
        for v in p.breakdown.values() {
            p.f_raw += v.f_raw;
            p.f_subtr += v.f_subtr;
            p.s_raw += v.s_raw;
            p.s_subtr += v.s_subtr;
            p.error = p.error.max(v.error);
        }
        p
    }

    pub fn part(&self, part: Part) -> Option<&PartValue> {
        self.breakdown.get(&part)
    }

    /// Raw free energy of all parts belonging to one polarisation.
    pub fn channel_f_raw(&self, ch: Channel) -> f64 {
        self.breakdown
            .iter()
            .filter(|(p, _)| p.channel() == Some(ch))
            .map(|(_, v)| v.f_raw)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ThermoCurve {
    pub points: Vec<ThermoPoint>,
}

impl ThermoCurve {
    pub fn temperatures(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn series(&self, f: impl Fn(&ThermoPoint) -> f64) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.t, f(p))).collect()
    }
}

/// The T³ and T² high-temperature terms removed from a raw free energy.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SubtractionSpec {
    pub coeff_t3: f64,
    pub coeff_t2: f64,
}

impl SubtractionSpec {
    pub const NONE: SubtractionSpec = SubtractionSpec {
        coeff_t3: 0.0,
        coeff_t2: 0.0,
    };

    pub fn new(coeff_t3: f64, coeff_t2: f64) -> Result<Self> {
        if coeff_t3.is_finite() && coeff_t2.is_finite() {
            Ok(Self { coeff_t3, coeff_t2 })
        } else {
            Err(Error::Domain(
                "subtraction coefficients must be finite".into(),
            ))
        }
    }

    pub fn free_energy(&self, f_raw: f64, t: f64) -> f64 {
        f_raw - self.coeff_t3 * t * t * t - self.coeff_t2 * t * t
    }

    pub fn entropy(&self, s_raw: f64, t: f64) -> f64 {
        s_raw + 3.0 * self.coeff_t3 * t * t + 2.0 * self.coeff_t2 * t
    }

    pub fn restore_free_energy(&self, f_subtr: f64, t: f64) -> f64 {
        f_subtr + self.coeff_t3 * t * t * t + self.coeff_t2 * t * t
    }

    pub fn restore_entropy(&self, s_subtr: f64, t: f64) -> f64 {
        s_subtr - 3.0 * self.coeff_t3 * t * t - 2.0 * self.coeff_t2 * t
    }

    pub fn plus(self, other: SubtractionSpec) -> SubtractionSpec {
        SubtractionSpec {
            coeff_t3: self.coeff_t3 + other.coeff_t3,
            coeff_t2: self.coeff_t2 + other.coeff_t2,
        }
    }
}

/// F ≈ −ζ(3)a_{1/2}/(4π^{3/2}) T³ − a₁/24 T² − a_{3/2}/(4π)^{3/2} T ln T + …
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeatKernelCoefficients {
    pub a_half: f64,
    pub a_one: f64,
    pub a_three_half: f64,
    /// Relative residual of the fit the values came from (0 if analytic).
    pub fit_residual: f64,
}

fn pi32() -> f64 {
    PI * PI.sqrt()
}

impl HeatKernelCoefficients {
    pub fn from_expansion(spec: SubtractionSpec, coeff_t_ln_t: f64) -> Self {
        Self {
            a_half: -4.0 * pi32() * spec.coeff_t3 / ZETA3,
            a_one: -24.0 * spec.coeff_t2,
            a_three_half: -8.0 * pi32() * coeff_t_ln_t,
            fit_residual: 0.0,
        }
    }

    pub fn subtraction_spec(&self) -> SubtractionSpec {
        SubtractionSpec {
            coeff_t3: -self.a_half * ZETA3 / (4.0 * pi32()),
            coeff_t2: -self.a_one / 24.0,
        }
    }

    pub fn t_ln_t_coefficient(&self) -> f64 {
        -self.a_three_half / (8.0 * pi32())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HeatKernelSet {
    pub channels: BTreeMap<Channel, HeatKernelCoefficients>,
}

impl HeatKernelSet {
    pub fn get(&self, ch: Channel) -> Option<&HeatKernelCoefficients> {
        self.channels.get(&ch)
    }
}

pub const HEAT_KERNEL_BASIS: [Basis; 4] = [Basis::T3, Basis::T2, Basis::TLnT, Basis::T];

/// Fit one raw free-energy series over {T³, T², T ln T, T}.
pub fn fit_heat_kernel(
    samples: &[(f64, f64)],
    max_rel_residual: f64,
) -> Result<HeatKernelCoefficients> {
    let fit = fit_asymptotic(samples, &HEAT_KERNEL_BASIS)?;
    if !(fit.relative_residual <= max_rel_residual) {
        return Err(Error::FitResidual {
            residual: fit.relative_residual,
            threshold: max_rel_residual,
        });
    }
    let c = |b| fit.coefficient(b).unwrap_or(0.0);
    let spec = SubtractionSpec {
        coeff_t3: c(Basis::T3),
        coeff_t2: c(Basis::T2),
    };
    Ok(HeatKernelCoefficients {
        fit_residual: fit.relative_residual,
        ..HeatKernelCoefficients::from_expansion(spec, c(Basis::TLnT))
    })
}

/// Fit every polarisation present in a high-temperature curve. Raw values
/// are used; parts without a polarisation are ignored.
pub fn extract_heat_kernel(curve: &ThermoCurve, max_rel_residual: f64) -> Result<HeatKernelSet> {
    let mut set = HeatKernelSet::default();
    for ch in Channel::ALL {
        let present = curve
            .points
            .first()
            .map(|p| p.breakdown.keys().any(|k| k.channel() == Some(ch)))
            .unwrap_or(false);
        if present {
            let series = curve.series(|p| p.channel_f_raw(ch));
            set.channels
                .insert(ch, fit_heat_kernel(&series, max_rel_residual)?);
        }
    }
    Ok(set)
}

/// One polarisation of a planar scatterer, described by its phase shift δ(p, k)
/// along the normal momentum p at fixed parallel momentum k.
pub trait ScatteringChannel: Sync {
    fn phase_shift(&self, p: f64, k: f64) -> f64;

    /// ∂δ/∂p at fixed k; `None` falls back to finite differences.
    fn phase_shift_deriv(&self, _p: f64, _k: f64) -> Option<f64> {
        None
    }

    /// Discontinuities (p_j, Δδ) of δ along p at fixed k, not seen by ∂δ/∂p.
    fn phase_jumps(&self, _k: f64) -> Vec<(f64, f64)> {
        Vec::new()
    }

    /// Non-smooth points of ∂δ/∂p in p, used as quadrature seeds.
    fn p_breakpoints(&self, _k: f64) -> Vec<f64> {
        Vec::new()
    }

    /// ∂δ/∂p vanishes beyond this p (`None`: unbounded support). The edge is
    /// taken to be a square-root branch point: the oracle integrates in θ
    /// with p = p_max·sin θ.
    fn p_max(&self, _k: f64) -> Option<f64> {
        None
    }

    fn k_breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn has_surface_mode(&self) -> bool {
        false
    }

    /// Bound-state frequency at parallel momentum k ≥ `k_min_surface`.
    fn surface_mode(&self, _k: f64) -> Option<f64> {
        None
    }

    fn k_min_surface(&self) -> f64 {
        0.0
    }

    /// Characteristic frequency of the scatterer (sets finite-difference steps).
    fn scale(&self) -> f64;
}

#[derive(Clone, Copy)]
enum Weight {
    FreeEnergy,
    Entropy,
}

impl Weight {
    #[inline]
    fn at(self, omega: f64, t: f64) -> f64 {
        match self {
            Weight::FreeEnergy => t * ln_one_minus_exp(omega / t),
            Weight::Entropy => entropy_weight(omega / t),
        }
    }
}

fn deriv<C: ScatteringChannel + ?Sized>(ch: &C, p: f64, k: f64) -> f64 {
    if let Some(d) = ch.phase_shift_deriv(p, k) {
        return d;
    }
    let h = 1e-6 * p.max(ch.scale());
    if p > h {
        (ch.phase_shift(p + h, k) - ch.phase_shift(p - h, k)) / (2.0 * h)
    } else {
        (ch.phase_shift(p + h, k) - ch.phase_shift(p, k)) / h
    }
}

/// Records the first failure of an integral nested inside a closure that
/// can only return f64, and the worst relative error of those that succeed.
struct Nested {
    failure: Cell<Option<Error>>,
    worst_rel: Cell<f64>,
}

impl Nested {
    fn new() -> Self {
        Self {
            failure: Cell::new(None),
            worst_rel: Cell::new(0.0),
        }
    }

    fn take(&self, r: Result<QuadResult>) -> f64 {
        match r {
            Ok(q) => {
                let rel = if q.value != 0.0 {
                    q.error_estimate / q.value.abs()
                } else {
                    0.0
                };
                self.worst_rel.set(self.worst_rel.get().max(rel));
                q.value
            }
            // An inner integral that ran out of subdivisions still carries a
            // usable value and error estimate; the error is propagated.
            Err(Error::NoConvergence { value, error, .. })
                if value.is_finite() && error.is_finite() =>
            {
                let rel = if value != 0.0 {
                    error / value.abs()
                } else {
                    0.0
                };
                self.worst_rel.set(self.worst_rel.get().max(rel));
                value
            }
            Err(e) => {
                let prev = self.failure.take();
                self.failure.set(prev.or(Some(e)));
                f64::NAN
            }
        }
    }

    fn finish(self, outer: Result<QuadResult>) -> Result<QuadResult> {
        if let Some(e) = self.failure.take() {
            return Err(e);
        }
        let mut q = outer?;
        q.error_estimate += q.value.abs() * self.worst_rel.get();
        Ok(q)
    }
}

/// Sum of two pieces where either may have stopped short of its target; a
/// non-converged piece keeps its value and error in the combined failure.
fn combine_soft(a: Result<QuadResult>, b: Result<QuadResult>) -> Result<QuadResult> {
    if let (Ok(x), Ok(y)) = (&a, &b) {
        return Ok(*x + *y);
    }
    let parts = |r: Result<QuadResult>| match r {
        Ok(q) => Ok((q.value, q.error_estimate, None)),
        Err(Error::NoConvergence {
            value,
            error,
            subdivisions,
        }) => Ok((value, error, Some(subdivisions))),
        Err(e) => Err(e),
    };
    let (va, ea, sa) = parts(a)?;
    let (vb, eb, sb) = parts(b)?;
    Err(Error::NoConvergence {
        value: va + vb,
        error: ea + eb,
        subdivisions: sa.unwrap_or(0) + sb.unwrap_or(0),
    })
}

fn defining<C: ScatteringChannel + ?Sized>(
    ch: &C,
    t: f64,
    settings: &QuadSettings,
    w: Weight,
) -> Result<QuadResult> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {t}"
        )));
    }
    settings.validate()?;
    let inner_settings = settings.scaled(0.1);
    let nested = Nested::new();

    let inner = |k: f64| -> f64 {
        let f = |p: f64| w.at((k * k + p * p).sqrt(), t) * deriv(ch, p, k);
        let breaks = ch.p_breakpoints(k);
        let r = match ch.p_max(k) {
            Some(pm) => {
                let g = |th: f64| pm * th.cos() * f(pm * th.sin());
                let tb: Vec<f64> = breaks
                    .iter()
                    .filter(|&&b| b > 0.0 && b < pm)
                    .map(|&b| (b / pm).asin())
                    .collect();
                integrate_with_breaks(g, 0.0, FRAC_PI_2, &tb, &inner_settings)
            }
            None => {
                // Breakpoints may carry 1/√ edges (thresholds), so the region
                // up to one thermal length past the last one is smoothstep-mapped.
                let last = breaks
                    .iter()
                    .copied()
                    .filter(|b| b.is_finite())
                    .fold(0.0, f64::max);
                let head_end = last + t;
                let head = integrate_edge_singular(f, 0.0, head_end, &breaks, &inner_settings);
                let tail = integrate_decaying(f, head_end, t, &[], &inner_settings);
                combine_soft(head, tail)
            }
        };
        let mut v = nested.take(r);
        for (pj, jump) in ch.phase_jumps(k) {
            v += w.at((k * k + pj * pj).sqrt(), t) * jump;
        }
        k * v / (2.0 * PI * PI)
    };
    let continuum = integrate_decaying(inner, 0.0, t, &ch.k_breakpoints(), settings);
    let mut total = nested.finish(continuum)?;

    let k0 = ch.k_min_surface();
    if ch.has_surface_mode() {
        let nested = Nested::new();
        let surf = |k: f64| match ch.surface_mode(k) {
            Some(om) if om > 0.0 => k * w.at(om, t) / (2.0 * PI),
            Some(_) => 0.0,
            None => {
                nested.take(Err(Error::Domain(format!(
                    "surface mode missing at k = {k}"
                ))));
                f64::NAN
            }
        };
        let r = integrate_decaying(surf, k0, t, &[], settings);
        total = total + nested.finish(r)?;
    }
    Ok(total)
}

/// ΔF from the phase shifts: ∫ k dk/2π [T ln(1−e^{−ω_sf/T}) + (1/π)∫dp T ln(1−e^{−ω/T}) ∂δ/∂p].
pub fn free_energy_defining<C: ScatteringChannel + ?Sized>(
    ch: &C,
    t: f64,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    defining(ch, t, settings, Weight::FreeEnergy)
}

/// As [`free_energy_defining`] with the weight g(ω/T).
pub fn entropy_defining<C: ScatteringChannel + ?Sized>(
    ch: &C,
    t: f64,
    settings: &QuadSettings,
) -> Result<QuadResult> {
    defining(ch, t, settings, Weight::Entropy)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Empty;
    impl ScatteringChannel for Empty {
        fn phase_shift(&self, _: f64, _: f64) -> f64 {
            0.0
        }
        fn scale(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn empty_scatterer_is_zero() {
        let s = QuadSettings::default();
        assert_eq!(free_energy_defining(&Empty, 1.0, &s).unwrap().value, 0.0);
        assert_eq!(entropy_defining(&Empty, 0.3, &s).unwrap().value, 0.0);
        assert!(free_energy_defining(&Empty, 0.0, &s).is_err());
    }

    #[test]
    fn subtraction_round_trip() {
        let spec = SubtractionSpec::new(-ZETA3 / (4.0 * PI), 1.0 / 12.0).unwrap();
        let t = 3.7;
        assert!((spec.restore_free_energy(spec.free_energy(2.5, t), t) - 2.5).abs() < 1e-12);
        assert_eq!(SubtractionSpec::NONE.free_energy(2.5, t), 2.5);
        assert_eq!(SubtractionSpec::NONE.entropy(2.5, t), 2.5);
        let hk = HeatKernelCoefficients::from_expansion(spec, 0.2);
        assert!((hk.a_half - PI.sqrt()).abs() < 1e-14);
        assert!((hk.a_one + 2.0).abs() < 1e-14);
        let back = hk.subtraction_spec();
        assert!((back.coeff_t3 - spec.coeff_t3).abs() < 1e-16);
        assert!((back.coeff_t2 - spec.coeff_t2).abs() < 1e-16);
        assert!((hk.t_ln_t_coefficient() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn synthetic_heat_kernel_recovery() {
        let truth = HeatKernelCoefficients {
            a_half: 1.3,
            a_one: -0.7,
            a_three_half: 0.4,
            fit_residual: 0.0,
        };
        let spec = truth.subtraction_spec();
        let c = truth.t_ln_t_coefficient();
        let samples: Vec<_> = (0..12)
            .map(|i| 100.0 * 10f64.powf(i as f64 / 11.0))
            .map(|t| (t, spec.restore_free_energy(c * t * t.ln() + 0.05 * t, t)))
            .collect();
        let got = fit_heat_kernel(&samples, 1e-10).unwrap();
        assert!((got.a_half - 1.3).abs() < 1e-8);
        assert!((got.a_one + 0.7).abs() < 1e-7);
        assert!((got.a_three_half - 0.4).abs() < 1e-6);
    }
}
