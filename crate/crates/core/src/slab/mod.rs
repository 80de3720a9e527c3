//! Plasma-model slab, ε(ω) = 1 − ω_p²/ω², of thickness L.
//!
//! The transmission amplitude factorises as t = t^s · t^L · e^{i(q−p)L}
//! (surface, Lifshitz and thickness-proportional pieces), so the phase shift
//! and every thermodynamic quantity split into the same three parts. The
//! surface parts integrate δ^s only up to p = ω_p; the −π/2 step of δ^s
//! there is carried by the matching +π/2 step of δ^L.

mod channels;
mod exp_part;
mod lifshitz;
mod plasmon;
mod surface;
mod transmission;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::quad::QuadSettings;
use crate::spectral::{Channel, Part, PartValue, ThermoPoint};

pub use channels::{ExpChannel, FullChannel, LifshitzChannel, SurfaceChannel};
pub use exp_part::{
    exp_entropy, exp_entropy_subtr, exp_free_energy, exp_free_energy_subtr, exp_phase_shift,
    exp_subtraction,
};
pub use lifshitz::{
    delta_l, delta_l_deriv, delta_l_log_form, lifshitz_constant_te, lifshitz_constant_tm,
    lifshitz_entropy, lifshitz_free_energy, lifshitz_kernel_tm, lifshitz_moment_te,
};
pub use plasmon::{plasmon_dispersion, plasmon_residual, single_surface_plasmon};
pub use surface::{
    delta_s, delta_s_deriv, h_printed, h_printed_defining, h_printed_limit, h_weighted,
    h_weighted_defining, slab_constant_c, surface_entropy, surface_entropy_subtr,
    surface_free_energy, surface_free_energy_subtr, surface_subtraction,
};
pub use transmission::{transmission, Transmission};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabParams {
    /// ω_p
    pub omega_p: f64,
    /// L
    pub thickness: f64,
}

impl SlabParams {
    pub fn new(omega_p: f64, thickness: f64) -> Result<Self> {
        let p = Self { omega_p, thickness };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if ok(self.omega_p) && ok(self.thickness) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "slab needs ω_p > 0 and L > 0, got ω_p = {}, L = {}",
                self.omega_p, self.thickness
            )))
        }
    }

    /// √(ω_p² − p²), zero above ω_p.
    pub(crate) fn gamma(&self, p: f64) -> f64 {
        (self.omega_p * self.omega_p - p * p).max(0.0).sqrt()
    }

    pub(crate) fn eps_unchecked(&self, omega: f64) -> f64 {
        1.0 - self.omega_p * self.omega_p / (omega * omega)
    }
}

pub fn epsilon(omega: f64, params: &SlabParams) -> Result<f64> {
    params.validate()?;
    if omega > 0.0 && omega.is_finite() {
        Ok(params.eps_unchecked(omega))
    } else {
        Err(Error::Domain(format!("ε(ω) needs ω > 0, got {omega}")))
    }
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "temperature must be positive, got {t}"
        )))
    }
}

/// One subtracted part at temperature T. The exp part counts both polarisations.
pub fn part_value(
    part: Part,
    t: f64,
    params: &SlabParams,
    settings: &QuadSettings,
) -> Result<PartValue> {
    let (f, s, spec) = match part {
        Part::SurfaceTe | Part::SurfaceTm => {
            let ch = part.channel().expect("surface parts carry a polarisation");
            (
                surface_free_energy_subtr(ch, t, params, settings)?,
                surface_entropy_subtr(ch, t, params, settings)?,
                surface_subtraction(ch),
            )
        }
        Part::LifshitzTe | Part::LifshitzTm => {
            let ch = part.channel().expect("Lifshitz parts carry a polarisation");
            (
                lifshitz_free_energy(ch, t, params, settings)?,
                lifshitz_entropy(ch, t, params, settings)?,
                crate::spectral::SubtractionSpec::NONE,
            )
        }
        Part::Exp => {
            let f = exp_free_energy_subtr(t, params, settings)?;
            let s = exp_entropy_subtr(t, params, settings)?;
            let v = PartValue::from_subtracted(
                t,
                f.value,
                s.value,
                exp_subtraction(params),
                f.error_estimate.max(s.error_estimate),
            );
            return Ok(v.scaled(2.0));
        }
        other => {
            return Err(Error::Domain(format!(
                "part {} does not belong to the slab",
                other.label()
            )));
        }
    };
    Ok(PartValue::from_subtracted(
        t,
        f.value,
        s.value,
        spec,
        f.error_estimate.max(s.error_estimate),
    ))
}

/// Selected parts at one temperature (all five for [`Part::SLAB`]).
pub fn total_parts(
    t: f64,
    params: &SlabParams,
    parts: &[Part],
    settings: &QuadSettings,
) -> Result<ThermoPoint> {
    let mut breakdown = BTreeMap::new();
    for &part in parts {
        breakdown.insert(part, part_value(part, t, params, settings)?);
    }
    Ok(ThermoPoint::from_parts(t, breakdown))
}

pub fn total(t: f64, params: &SlabParams, settings: &QuadSettings) -> Result<ThermoPoint> {
    total_parts(t, params, &Part::SLAB, settings)
}

/// P = p (TE) or ε(ω)p (TM): the impedance-like factor in the Fresnel ratios.
pub(crate) fn impedance(ch: Channel, p: f64, eps: f64) -> f64 {
    match ch {
        Channel::Te => p,
        Channel::Tm => eps * p,
    }
}
