//! Independent checks: the reference side of each comparison is computed here
//! with its own quadrature (tanh–sinh / exp–sinh) and finite differences,
//! starting from the phase shifts rather than the library's closed forms.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use casimir_thermo::plasma_sheet;
use casimir_thermo::slab::{self, SlabParams};
use casimir_thermo::{Channel, QuadSettings, SheetParams};

const STEP: f64 = 1.0 / 64.0;

/// tanh–sinh on [a, b]; tolerates integrable endpoint singularities.
fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    let n = (3.2 / STEP) as i64;
    for j in -n..=n {
        let t = j as f64 * STEP;
        let y = FRAC_PI_2 * t.sinh();
        // distance to the nearer endpoint, without cancellation
        let d = (b - a) / (1.0 + (2.0 * y.abs()).exp());
        let x = if t < 0.0 { a + d } else { b - d };
        if d == 0.0 || x <= a || x >= b {
            continue;
        }
        let w = half * FRAC_PI_2 * t.cosh() / y.cosh().powi(2);
        sum += w * f(x);
    }
    sum * STEP
}

/// exp–sinh on (0, ∞) for integrands decaying like e^{−x/scale}.
fn exp_sinh(f: impl Fn(f64) -> f64, scale: f64) -> f64 {
    let mut sum = 0.0;
    let n = (4.5 / STEP) as i64;
    for j in -n..=n {
        let t = j as f64 * STEP;
        let x = scale * (FRAC_PI_2 * t.sinh()).exp();
        if x == 0.0 || !x.is_finite() || x > 800.0 * scale {
            continue;
        }
        sum += x * FRAC_PI_2 * t.cosh() * f(x);
    }
    sum * STEP
}

fn ln_1m_exp(x: f64) -> f64 {
    if x < 1.0 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn settings() -> QuadSettings {
    QuadSettings {
        rel_tol: 1e-11,
        abs_tol: 1e-300,
        ..Default::default()
    }
}

/// When δ depends on p alone, ∫k dk ∫dp w(ω) δ′(p) = ∫ω dω w(ω) [δ(ω) − δ(0⁺)].
/// `kink` splits the ω range where δ is not smooth.
fn p_only(t: f64, kink: f64, dd: impl Fn(f64) -> f64) -> f64 {
    let f = |w: f64| w * t * ln_1m_exp(w / t) * dd(w);
    (tanh_sinh(f, 0.0, kink) + exp_sinh(|x| f(kink + x), t)) / (2.0 * PI * PI)
}

#[test]
fn sheet_te_free_energy_without_mass_term() {
    // ω₀ = 0: δ_TE = −atan(Ω₀/p), independent of k.
    let params = SheetParams {
        plasma: 1.0,
        omega0: 0.0,
    };
    for t in [0.05, 0.7, 6.0] {
        let reference = p_only(t, 1.0, |w| FRAC_PI_2 - (1.0 / w).atan());
        let lib = plasma_sheet::free_energy_channel_raw(Channel::Te, t, &params, &settings())
            .unwrap()
            .value;
        assert!(rel(lib, reference) < 1e-9, "T = {t}: {lib} vs {reference}");
    }
}

#[test]
fn slab_exp_free_energy_from_phase_shift() {
    for (l, t) in [(1.0, 0.1), (1.0, 1.0), (0.3, 10.0)] {
        let params = SlabParams {
            omega_p: 1.0,
            thickness: l,
        };
        let d0 = slab::exp_phase_shift(0.0, &params).unwrap();
        let reference = p_only(t, 1.0, |w| slab::exp_phase_shift(w, &params).unwrap() - d0);
        let lib = slab::exp_free_energy(t, &params, &settings())
            .unwrap()
            .value;
        assert!(
            rel(lib, reference) < 1e-9,
            "L = {l}, T = {t}: {lib} vs {reference}"
        );
    }
}

/// (T/2π²)∫ω² ln(1−e^{−ω/T}) h(ω) dω with h(ω) = ∫₀¹dε ∂δ/∂p at p = εω,
/// k = ω√(1−ε²); ∂δ/∂p by central differences of the phase shift.
fn sheet_continuum_reference(ch: Channel, t: f64, params: &SheetParams) -> f64 {
    let d = |p: f64, k: f64| {
        let h = 1e-5 * p;
        let f = |x| plasma_sheet::phase_shift(ch, x, k, params).unwrap();
        (f(p + h) - f(p - h)) / (2.0 * h)
    };
    let h = |w: f64| tanh_sinh(|e| d(e * w, w * (1.0 - e * e).sqrt()), 0.0, 1.0);
    t * exp_sinh(|w| w * w * ln_1m_exp(w / t) * h(w), t) / (2.0 * PI * PI)
}

#[test]
fn sheet_tm_continuum_from_phase_shift() {
    let params = SheetParams {
        plasma: 1.0,
        omega0: 0.0,
    };
    for t in [0.2, 2.0] {
        let reference = sheet_continuum_reference(Channel::Tm, t, &params);
        let lib = plasma_sheet::free_energy_channel_raw(Channel::Tm, t, &params, &settings())
            .unwrap()
            .value;
        assert!(rel(lib, reference) < 1e-7, "T = {t}: {lib} vs {reference}");
    }
}

/// Bound state by bisection on 1 − Ω₀η/(ω² − ω₀²), η = √(k² − ω²).
fn plasmon_by_bisection(k: f64, params: &SheetParams) -> f64 {
    let r = |w: f64| 1.0 - params.plasma * (k * k - w * w).sqrt() / (w * w - params.omega0.powi(2));
    let (mut lo, mut hi) = (params.omega0 * (1.0 + 1e-15), k);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if r(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn sheet_plasmon_dispersion_by_bisection() {
    for w0 in [0.0, 0.4, 1.1] {
        let params = SheetParams {
            plasma: 1.0,
            omega0: w0,
        };
        for k in [w0 + 1e-3, w0 + 0.3, w0 + 2.0, w0 + 40.0] {
            let reference = plasmon_by_bisection(k, &params);
            let lib = plasma_sheet::omega_sf(k, &params).unwrap();
            assert!(
                rel(lib, reference) < 1e-12,
                "ω₀ = {w0}, k = {k}: {lib} vs {reference}"
            );
        }
    }
}

#[test]
fn sheet_plasmon_free_energy_by_k_integral() {
    // ω₀ = 0: the bound state exists for all k > 0.
    let params = SheetParams {
        plasma: 1.0,
        omega0: 0.0,
    };
    for t in [0.1, 1.0] {
        let reference = exp_sinh(
            |k| k * t * ln_1m_exp(plasmon_by_bisection(k, &params) / t),
            t,
        ) / (2.0 * PI);
        let lib = plasma_sheet::plasmon_free_energy_raw(t, &params, &settings())
            .unwrap()
            .value;
        assert!(rel(lib, reference) < 1e-8, "T = {t}: {lib} vs {reference}");
    }
}

#[test]
fn slab_permittivity_and_single_surface_mode() {
    let params = SlabParams {
        omega_p: 2.0,
        thickness: 1.0,
    };
    assert!((slab::epsilon(1.0, &params).unwrap() + 3.0).abs() < 1e-15);
    assert!(slab::epsilon(4.0, &params).unwrap() - 0.75 < 1e-15);
    let unit = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    // ω² = k² + ω_p²/2 − √(k⁴ + ω_p⁴/4) at k = ω_p/√2
    let w = slab::single_surface_plasmon(FRAC_1_SQRT_2, &unit);
    assert!((w - (1.0 - FRAC_1_SQRT_2).sqrt()).abs() < 1e-14);
    assert!((w - 0.5412).abs() < 1e-4);
}

// Values frozen from this implementation's own evaluation.

#[test]
fn frozen_slab_constants() {
    let s = settings();
    let c = slab::slab_constant_c(1.0, &s).unwrap().value;
    assert!((c - FRAC_PI_2).abs() < 1e-9, "c = {c}");
    let unit = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    let d_te = slab::lifshitz_constant_te(&unit, &s).unwrap().value;
    let d_tm = slab::lifshitz_constant_tm(&unit, &s).unwrap().value;
    assert!(rel(d_te, -5.936260e-4) < 1e-5, "d_TE = {d_te:e}");
    assert!(rel(d_tm, -5.936265e-4) < 1e-5, "d_TM = {d_tm:e}");
}

#[test]
fn frozen_heat_kernel_crossing() {
    let x = plasma_sheet::a_three_half_te_crossing(1.0, 0.5, 0.9, &settings()).unwrap();
    assert!((x - FRAC_1_SQRT_2).abs() < 1e-9, "{x}");
}

#[test]
fn frozen_log_coefficient_matches_moments() {
    for w0 in [0.0, 0.5, 0.8, 1.1, 1.5] {
        let params = SheetParams {
            plasma: 1.0,
            omega0: w0,
        };
        let closed = plasma_sheet::high_t_log_coefficient_closed(&params);
        let num = plasma_sheet::high_t_log_coefficient(&params, &settings()).unwrap();
        assert!(
            (closed - num).abs() < 1e-8 * closed.abs().max(1e-3),
            "ω₀ = {w0}: {closed} vs {num}"
        );
    }
}
