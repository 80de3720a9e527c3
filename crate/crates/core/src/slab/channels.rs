//! The slab's phase shifts as [`ScatteringChannel`]s for the (k, p) oracle.

use std::f64::consts::FRAC_PI_2;

use super::lifshitz::{delta_l_deriv_unchecked, delta_l_unchecked};
use super::surface::{delta_s_deriv_unchecked, delta_s_unchecked_pub as delta_s_unchecked};
use super::SlabParams;
use crate::spectral::{Channel, ScatteringChannel};

/// Where δ_TM changes steeply at fixed k: |ε|p ≈ ω_p near p = 0, ε = 0, and
/// |ε|p ≈ γ just below ω_p.
fn tm_breakpoints(k: f64, params: &SlabParams) -> Vec<f64> {
    let wp = params.omega_p;
    let mut b = vec![(k * k / wp).min(0.5 * wp)];
    if k < wp {
        b.push((wp * wp - k * k).sqrt());
        b.push((wp * wp - (k * k / wp).powi(2)).sqrt());
    }
    b.retain(|&x| x > 0.0 && x < wp);
    b
}

fn exp_delta(p: f64, params: &SlabParams) -> f64 {
    let wp = params.omega_p;
    let q = if p > wp {
        (p * p - wp * wp).sqrt()
    } else {
        0.0
    };
    (q - p) * params.thickness
}

fn exp_deriv(p: f64, params: &SlabParams) -> f64 {
    let wp = params.omega_p;
    if p > wp {
        (p / (p * p - wp * wp).sqrt() - 1.0) * params.thickness
    } else {
        -params.thickness
    }
}

/// δ^s restricted to p < ω_p (its −π/2 step at ω_p belongs to the Lifshitz part).
#[derive(Debug, Clone, Copy)]
pub struct SurfaceChannel {
    pub channel: Channel,
    pub params: SlabParams,
}

impl ScatteringChannel for SurfaceChannel {
    fn phase_shift(&self, p: f64, k: f64) -> f64 {
        delta_s_unchecked(self.channel, p, p.hypot(k), &self.params)
    }

    fn phase_shift_deriv(&self, p: f64, k: f64) -> Option<f64> {
        Some(delta_s_deriv_unchecked(self.channel, p, k, &self.params))
    }

    fn p_max(&self, _k: f64) -> Option<f64> {
        Some(self.params.omega_p)
    }

    fn p_breakpoints(&self, k: f64) -> Vec<f64> {
        match self.channel {
            Channel::Te => Vec::new(),
            Channel::Tm => tm_breakpoints(k, &self.params),
        }
    }

    fn scale(&self) -> f64 {
        self.params.omega_p
    }
}

/// δ^L including its +π/2 step at p = ω_p.
#[derive(Debug, Clone, Copy)]
pub struct LifshitzChannel {
    pub channel: Channel,
    pub params: SlabParams,
}

impl ScatteringChannel for LifshitzChannel {
    fn phase_shift(&self, p: f64, k: f64) -> f64 {
        delta_l_unchecked(self.channel, p, p.hypot(k), &self.params)
    }

    fn phase_shift_deriv(&self, p: f64, k: f64) -> Option<f64> {
        Some(delta_l_deriv_unchecked(self.channel, p, k, &self.params))
    }

    fn phase_jumps(&self, k: f64) -> Vec<(f64, f64)> {
        if self.channel == Channel::Tm && k == 0.0 {
            Vec::new()
        } else {
            vec![(self.params.omega_p, FRAC_PI_2)]
        }
    }

    fn p_breakpoints(&self, k: f64) -> Vec<f64> {
        let mut b = vec![self.params.omega_p];
        if self.channel == Channel::Tm {
            b.extend(tm_breakpoints(k, &self.params));
        }
        b
    }

    fn scale(&self) -> f64 {
        self.params.omega_p
    }
}

/// One polarisation of the thickness-proportional part.
#[derive(Debug, Clone, Copy)]
pub struct ExpChannel {
    pub params: SlabParams,
}

impl ScatteringChannel for ExpChannel {
    fn phase_shift(&self, p: f64, _k: f64) -> f64 {
        exp_delta(p, &self.params)
    }

    fn phase_shift_deriv(&self, p: f64, _k: f64) -> Option<f64> {
        Some(exp_deriv(p, &self.params))
    }

    fn p_breakpoints(&self, _k: f64) -> Vec<f64> {
        vec![self.params.omega_p]
    }

    fn scale(&self) -> f64 {
        self.params.omega_p
    }
}

/// arg t of one polarisation: the three pieces together (continuous in p).
#[derive(Debug, Clone, Copy)]
pub struct FullChannel {
    pub channel: Channel,
    pub params: SlabParams,
}

impl ScatteringChannel for FullChannel {
    fn phase_shift(&self, p: f64, k: f64) -> f64 {
        let w = p.hypot(k);
        delta_s_unchecked(self.channel, p, w, &self.params)
            + delta_l_unchecked(self.channel, p, w, &self.params)
            + exp_delta(p, &self.params)
    }

    fn phase_shift_deriv(&self, p: f64, k: f64) -> Option<f64> {
        Some(
            delta_s_deriv_unchecked(self.channel, p, k, &self.params)
                + delta_l_deriv_unchecked(self.channel, p, k, &self.params)
                + exp_deriv(p, &self.params),
        )
    }

    fn p_breakpoints(&self, k: f64) -> Vec<f64> {
        let mut b = vec![self.params.omega_p];
        if self.channel == Channel::Tm {
            b.extend(tm_breakpoints(k, &self.params));
        }
        b
    }

    fn scale(&self) -> f64 {
        self.params.omega_p
    }
}
