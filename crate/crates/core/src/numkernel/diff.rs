use crate::error::{Error, Result};

/// Central difference (f(x+h) − f(x−h)) / 2h.
pub fn derivative_fd<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> Result<f64> {
    try_derivative_fd(|y| Ok(f(y)), x, h)
}

/// As [`derivative_fd`] for fallible functions.
pub fn try_derivative_fd<F: FnMut(f64) -> Result<f64>>(mut f: F, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let up = f(x + h)?;
    let down = f(x - h)?;
    for (at, v) in [(x + h, up), (x - h, down)] {
        if !v.is_finite() {
            return Err(Error::NonFinite { x: at, value: v });
        }
    }
    Ok((up - down) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!((derivative_fd(|x| x * x, 1.0, 1e-4).unwrap() - 2.0).abs() < 1e-7);
        assert!((derivative_fd(f64::sin, 0.0, 1e-4).unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(derivative_fd(|_| 3.0, 5.0, 1e-3).unwrap(), 0.0);
        assert!(derivative_fd(|x| x, 0.0, 0.0).is_err());
        assert!(derivative_fd(|x| 1.0 / x, 0.0, 1e-3).is_ok());
        assert!(derivative_fd(|x: f64| x.ln(), 0.0, 1e-3).is_err());
    }
}
