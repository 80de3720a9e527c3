//! Least-squares fits of temperature series against a small asymptotic basis.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    T3,
    T2,
    TLnT,
    T,
    One,
}

impl Basis {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            Basis::T3 => t * t * t,
            Basis::T2 => t * t,
            Basis::TLnT => t * t.ln(),
            Basis::T => t,
            Basis::One => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Basis::T3 => "T^3",
            Basis::T2 => "T^2",
            Basis::TLnT => "T ln T",
            Basis::T => "T",
            Basis::One => "1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub basis: Vec<Basis>,
    pub coefficients: Vec<f64>,
    /// ‖A·c − v‖₂ over the samples.
    pub residual_norm: f64,
    /// residual_norm / ‖v‖₂.
    pub relative_residual: f64,
}

impl AsymptoticFit {
    pub fn coefficient(&self, b: Basis) -> Option<f64> {
        self.basis
            .iter()
            .position(|&x| x == b)
            .map(|i| self.coefficients[i])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.basis
            .iter()
            .zip(&self.coefficients)
            .map(|(b, c)| c * b.eval(t))
            .sum()
    }
}

const RANK_CUT: f64 = 1e-12;

pub fn fit_asymptotic(samples: &[(f64, f64)], basis: &[Basis]) -> Result<AsymptoticFit> {
    let n = samples.len();
    let m = basis.len();
    if m == 0 || n < m + 2 {
        return Err(Error::Domain(format!(
            "fit needs at least {} samples for {m} basis functions, got {n}",
            m + 2
        )));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::Domain(
            "fit temperatures must be strictly increasing".into(),
        ));
    }
    if samples
        .iter()
        .any(|&(t, v)| !(t > 0.0) || !t.is_finite() || !v.is_finite())
    {
        return Err(Error::Domain(
            "fit samples must be finite with T > 0".into(),
        ));
    }

    let mut a = DMatrix::from_fn(n, m, |i, j| basis[j].eval(samples[i].0));
    let v = DVector::from_iterator(n, samples.iter().map(|s| s.1));

    // Columns span many decades (T³ vs T); equilibrate before the SVD.
    let scales: Vec<f64> = (0..m)
        .map(|j| a.column(j).amax())
        .map(|s| if s > 0.0 { s } else { 1.0 })
        .collect();
    for (j, s) in scales.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / s);
    }

    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin / smax < RANK_CUT {
        return Err(Error::RankDeficient {
            condition: if smin > 0.0 {
                smax / smin
            } else {
                f64::INFINITY
            },
        });
    }
    let x = svd
        .solve(&v, 0.0)
        .map_err(|e| Error::Domain(format!("least squares failed: {e}")))?;
    let residual_norm = (&a * &x - &v).norm();
    let vnorm = v.norm();
    let coefficients = x.iter().zip(&scales).map(|(c, s)| c / s).collect();
    Ok(AsymptoticFit {
        basis: basis.to_vec(),
        coefficients,
        residual_norm,
        relative_residual: if vnorm > 0.0 {
            residual_norm / vnorm
        } else {
            residual_norm
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..8)
            .map(|i| 1.0 + i as f64 * 0.7)
            .map(|t| (t, f(t)))
            .collect()
    }

    #[test]
    fn exact_polynomial() {
        let fit = fit_asymptotic(&grid(|t| 3.0 * t * t + t), &[Basis::T2, Basis::T]).unwrap();
        assert!((fit.coefficients[0] - 3.0).abs() < 1e-12);
        assert!((fit.coefficients[1] - 1.0).abs() < 1e-12);
        assert!(fit.relative_residual < 1e-14);
    }

    #[test]
    fn t_log_t() {
        let fit = fit_asymptotic(&grid(|t| t * t.ln()), &[Basis::TLnT, Basis::T]).unwrap();
        assert!((fit.coefficient(Basis::TLnT).unwrap() - 1.0).abs() < 1e-12);
        assert!(fit.coefficient(Basis::T).unwrap().abs() < 1e-12);
    }

    #[test]
    fn wide_dynamic_range() {
        let s: Vec<_> = (0..10)
            .map(|i| 100.0 * 10f64.powf(i as f64 / 9.0))
            .map(|t| {
                (
                    t,
                    -0.1 * t.powi(3) + 0.08 * t * t + 0.3 * t * t.ln() - 2.0 * t,
                )
            })
            .collect();
        let fit = fit_asymptotic(&s, &[Basis::T3, Basis::T2, Basis::TLnT, Basis::T]).unwrap();
        for (c, e) in fit.coefficients.iter().zip([-0.1, 0.08, 0.3, -2.0]) {
            assert!((c - e).abs() < 1e-6 * e.abs().max(1.0), "{c} vs {e}");
        }
    }

    #[test]
    fn rank_deficient_and_bad_input() {
        let s = grid(|t| t);
        assert!(matches!(
            fit_asymptotic(&s, &[Basis::T, Basis::T]),
            Err(Error::RankDeficient { .. })
        ));
        assert!(fit_asymptotic(&s[..3], &[Basis::T, Basis::One]).is_err());
        let mut r = s.clone();
        r.swap(0, 1);
        assert!(fit_asymptotic(&r, &[Basis::T]).is_err());
    }
}
