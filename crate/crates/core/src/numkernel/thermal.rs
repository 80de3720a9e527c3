//! Bose-oscillator weights. The `*_unchecked` style helpers are used inside
//! integrands (where the quadrature never samples x ≤ 0); the checked
//! versions validate their argument.

use crate::error::{Error, Result};

pub const ZETA3: f64 = 1.202_056_903_159_594_3;
pub const ZETA5: f64 = 1.036_927_755_143_37;

/// ln(1 − e^{−x}) without cancellation at either end.
#[inline]
pub fn ln_one_minus_exp(x: f64) -> f64 {
    if x < std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// x/(eˣ−1) − ln(1−e^{−x}): entropy of one oscillator at scaled frequency x.
#[inline]
pub fn entropy_weight(x: f64) -> f64 {
    x / x.exp_m1() - ln_one_minus_exp(x)
}

/// Bose occupation 1/(eˣ−1).
#[inline]
pub fn occupation(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

/// eˣ/(eˣ−1)² = −d/dx occupation.
#[inline]
pub fn occupation_slope(x: f64) -> f64 {
    let s = (0.5 * x).sinh();
    0.25 / (s * s)
}

pub fn bose_log(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(ln_one_minus_exp(x))
    } else {
        Err(Error::Domain(format!("bose_log needs x > 0, got {x}")))
    }
}

pub fn g(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(entropy_weight(x))
    } else {
        Err(Error::Domain(format!("g needs x > 0, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bose_log_values() {
        assert!((bose_log(std::f64::consts::LN_2).unwrap() + std::f64::consts::LN_2).abs() < 1e-15);
        assert!((bose_log(1.0).unwrap() - (1.0 - (-1f64).exp()).ln()).abs() < 1e-15);
        // small x ≈ ln x + x/2, large x ≈ −e^{−x}
        let x = 1e-10;
        assert!((bose_log(x).unwrap() - (x.ln() - x / 2.0)).abs() < 1e-15);
        let x = 40.0;
        assert!((bose_log(x).unwrap() / -(-x).exp() - 1.0).abs() < 1e-15);
        assert!(bose_log(0.0).is_err());
    }

    #[test]
    fn g_values() {
        assert!((g(1.0).unwrap() - 1.040_652).abs() < 1e-6);
        assert!((g(1e-6).unwrap() - 14.815_511).abs() < 1e-6);
        assert!(g(50.0).unwrap() < 1e-20);
        assert!(g(-1.0).is_err());
    }

    #[test]
    fn occupation_slope_matches_derivative() {
        for x in [1e-3, 0.5, 3.0, 40.0] {
            let h = 1e-6 * x;
            let fd = -(occupation(x + h) - occupation(x - h)) / (2.0 * h);
            assert!((occupation_slope(x) / fd - 1.0).abs() < 1e-7);
        }
        assert_eq!(occupation_slope(2000.0), 0.0);
    }
}
