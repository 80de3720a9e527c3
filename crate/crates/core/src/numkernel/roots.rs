use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { x, value: v })
    }
}

/// Brent's method. Returns a point whose bracket has shrunk below `x_tol`
/// (or an exact zero).
pub fn find_root_bracketed<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    x_tol: f64,
) -> Result<f64> {
    if !(x_tol > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!(
            "root bracket [{lo}, {hi}] with tolerance {x_tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = eval(&mut f, a)?;
    let mut fb = eval(&mut f, b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation, or secant when only two points.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = eval(&mut f, b)?;
    }
    Err(Error::RootStalled {
        iterations: MAX_ITER,
        lo: b.min(c),
        hi: b.max(c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_roots() {
        let r = find_root_bracketed(|x| x * x - 2.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let r = find_root_bracketed(f64::cos, 1.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        let r = find_root_bracketed(|x| x, -1.0, 1.0, 1e-14).unwrap();
        assert!(r.abs() < 1e-13);
    }

    #[test]
    fn reversed_bracket_and_endpoint_root() {
        let r = find_root_bracketed(|x| x - 0.25, 1.0, 0.0, 1e-14).unwrap();
        assert!((r - 0.25).abs() < 1e-13);
        assert_eq!(
            find_root_bracketed(|x| x - 1.0, 0.0, 1.0, 1e-12).unwrap(),
            1.0
        );
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn discontinuous_sign_flip_is_bracketed() {
        let r = find_root_bracketed(|x| if x < 0.3 { -1.0 } else { 1.0 }, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.3).abs() < 1e-11);
    }
}
