//! Cancellation-free remainders of elementary series.

/// atan(y) minus its Taylor polynomial through order 2·from − 1, i.e.
/// Σ_{n≥from} (−1)ⁿ y^{2n+1}/(2n+1). Meant for |y| ≤ 0.5.
pub fn atan_tail(y: f64, from: i32) -> f64 {
    let y2 = y * y;
    let mut term = y.powi(2 * from + 1) * if from % 2 == 0 { 1.0 } else { -1.0 };
    let floor = 1e-18 * term.abs();
    let mut sum = 0.0;
    let mut n = from;
    while term.abs() > floor && term != 0.0 {
        sum += term / (2 * n + 1) as f64;
        term *= -y2;
        n += 1;
    }
    sum
}

/// atan(y) − y, accurate for small |y|.
pub fn atan_minus_id(y: f64) -> f64 {
    if y.abs() > 0.5 {
        return y.atan() - y;
    }
    atan_tail(y, 1)
}
