use num_complex::Complex64;

use super::{impedance, SlabParams};
use crate::error::{Error, Result};
use crate::spectral::Channel;

/// The amplitude and its three factors t^s · t^L · e^{i(q−p)L}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    pub full: Complex64,
    pub surface: Complex64,
    pub lifshitz: Complex64,
    pub exp: Complex64,
}

impl Transmission {
    pub fn product(&self) -> Complex64 {
        self.surface * self.lifshitz * self.exp
    }
}

/// Normal momentum inside the slab: real above ω_p, iγ below.
pub(crate) fn inner_momentum(p: f64, params: &SlabParams) -> Complex64 {
    let wp = params.omega_p;
    if p > wp {
        Complex64::new((p * p - wp * wp).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, params.gamma(p))
    }
}

pub fn transmission(ch: Channel, p: f64, k: f64, params: &SlabParams) -> Result<Transmission> {
    params.validate()?;
    if !(p > 0.0 && p.is_finite() && k >= 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!(
            "transmission needs p > 0, k ≥ 0; got p = {p}, k = {k}"
        )));
    }
    let l = params.thickness;
    let omega = p.hypot(k);
    let big_p = Complex64::new(impedance(ch, p, params.eps_unchecked(omega)), 0.0);
    let q = inner_momentum(p, params);
    let i = Complex64::i();

    let num = 4.0 * big_p * q;
    let plus = big_p + q;
    let minus = big_p - q;
    let den = plus * plus * (-i * q * l).exp() - minus * minus * (i * q * l).exp();
    if den.norm() == 0.0 || plus.norm() == 0.0 {
        return Err(Error::Pole(omega));
    }
    let r = minus / plus;
    Ok(Transmission {
        full: num * (-i * p * l).exp() / den,
        surface: num / (plus * plus),
        lifshitz: 1.0 / (1.0 - r * r * (2.0 * i * q * l).exp()),
        exp: (i * (q - p) * l).exp(),
    })
}
