//! Self-checks of the models against closed forms, independent integrals,
//! limits and identities. Each check yields one record
//! {suite, check, expected, measured, tolerance, pass}.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::quad::{QuadResult, QuadSettings};
use crate::numkernel::thermal::ZETA3;
use crate::plasma_sheet::{self as sheet, SheetChannel, SheetParams};
use crate::slab::{self, ExpChannel, LifshitzChannel, SlabParams, SurfaceChannel};
use crate::spectral::{fit_heat_kernel, free_energy_defining, Channel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    Oracle,
    Asymptotics,
    Constants,
    ThermoIdentity,
    Nernst,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Oracle,
        Suite::Asymptotics,
        Suite::Constants,
        Suite::ThermoIdentity,
        Suite::Nernst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Asymptotics => "asymptotics",
            Suite::Constants => "constants",
            Suite::ThermoIdentity => "thermo-identity",
            Suite::Nernst => "nernst",
        }
    }

    pub fn run(self, s: &QuadSettings) -> Vec<CheckRecord> {
        match self {
            Suite::Oracle => [
                sheet_h_oracle(s),
                slab_h_oracle(s),
                slab_exp_oracle(s),
                slab_factorization(),
                plasmon_dispersion_checks(),
                spectral_oracle(s),
            ]
            .concat(),
            Suite::Asymptotics => [
                sheet_high_t_fit(s),
                heat_kernel_identities(s),
                slab_low_t(s),
                slab_high_t(s),
            ]
            .concat(),
            Suite::Constants => [
                tm_sum_rule(s),
                negative_entropy_window(s),
                slab_constants(s),
            ]
            .concat(),
            Suite::ThermoIdentity => thermo_identity(s),
            Suite::Nernst => [sheet_low_t_slopes(s), nernst(s)].concat(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::Domain(format!(
                    "unknown suite '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub expected: f64,
    pub measured: f64,
    /// NaN for values that are reported but not asserted.
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// |measured − expected| ≤ tol·|expected|.
    fn relative(
        suite: Suite,
        check: impl Into<String>,
        expected: f64,
        measured: f64,
        tol: f64,
    ) -> Self {
        let pass = (measured - expected).abs() <= tol * expected.abs();
        Self::new(suite, check, expected, measured, tol, pass)
    }

    fn absolute(
        suite: Suite,
        check: impl Into<String>,
        expected: f64,
        measured: f64,
        tol: f64,
    ) -> Self {
        let pass = (measured - expected).abs() <= tol;
        Self::new(suite, check, expected, measured, tol, pass)
    }

    /// A non-negative deviation that must not exceed `tol`.
    fn bound(suite: Suite, check: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self::new(suite, check, 0.0, measured, tol, measured <= tol)
    }

    fn flag(suite: Suite, check: impl Into<String>, ok: bool) -> Self {
        Self::new(suite, check, 1.0, if ok { 1.0 } else { 0.0 }, 0.0, ok)
    }

    fn report(suite: Suite, check: impl Into<String>, expected: f64, measured: f64) -> Self {
        Self::new(
            suite,
            check,
            expected,
            measured,
            f64::NAN,
            measured.is_finite(),
        )
    }

    fn failed(
        suite: Suite,
        check: impl Into<String>,
        expected: f64,
        tol: f64,
        err: &Error,
    ) -> Self {
        let check = format!("{} [error: {err}]", check.into());
        Self::new(suite, check, expected, f64::NAN, tol, false)
    }

    fn new(
        suite: Suite,
        check: impl Into<String>,
        expected: f64,
        measured: f64,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        Self {
            suite: suite.name().to_string(),
            check: check.into(),
            expected,
            measured,
            tolerance,
            pass: pass && measured.is_finite(),
        }
    }
}

/// Quadrature settings the checks are calibrated for.
pub fn default_settings() -> QuadSettings {
    QuadSettings {
        rel_tol: 1e-11,
        abs_tol: 1e-300,
        ..QuadSettings::default()
    }
}

/// Settings for the brute-force (k, p) integrals, which need not be as tight.
fn oracle_settings(s: &QuadSettings) -> QuadSettings {
    QuadSettings {
        rel_tol: s.rel_tol.max(1e-8),
        ..*s
    }
}

/// The high-T fits need ~1e-8 per sample; the raw TM integrals at T ~ 1e3
/// cannot always reach 1e-11.
fn fit_settings(s: &QuadSettings) -> QuadSettings {
    QuadSettings {
        rel_tol: s.rel_tol.max(1e-10),
        ..*s
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn rel_dev(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Max of `dev` over the points, or the first error.
fn max_over<T: Copy>(pts: &[T], mut dev: impl FnMut(T) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in pts {
        let d = dev(x)?;
        if !d.is_finite() {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(d);
    }
    Ok(worst)
}

fn bound_or_fail(suite: Suite, check: String, r: Result<f64>, tol: f64) -> CheckRecord {
    match r {
        Ok(d) => CheckRecord::bound(suite, check, d, tol),
        Err(e) => CheckRecord::failed(suite, check, 0.0, tol, &e),
    }
}

fn relative_or_fail(
    suite: Suite,
    check: String,
    expected: f64,
    r: Result<f64>,
    tol: f64,
) -> CheckRecord {
    match r {
        Ok(m) => CheckRecord::relative(suite, check, expected, m, tol),
        Err(e) => CheckRecord::failed(suite, check, expected, tol, &e),
    }
}

// ---------------------------------------------------------------- oracle

/// Closed-form sheet spectral densities against their ε-integrals.
pub fn sheet_h_oracle(s: &QuadSettings) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for w0 in [0.0, 0.5, 1.3] {
        let params = SheetParams {
            plasma: 1.0,
            omega0: w0,
        };
        let pts: Vec<f64> = log_grid(1e-2, 50.0, 24)
            .into_iter()
            .filter(|w| (w - w0).abs() >= 1e-3)
            .collect();
        for ch in Channel::ALL {
            let r = max_over(&pts, |w| {
                let closed = sheet::h(ch, w, &params)?;
                let def = sheet::h_defining(ch, w, &params, s)?.value;
                Ok(rel_dev(closed, def))
            });
            let name = format!(
                "sheet h_{} closed vs ε-integral, ω₀ = {w0} (max rel dev)",
                ch.label()
            );
            out.push(bound_or_fail(Suite::Oracle, name, r, 1e-8));
        }
    }
    out
}

/// Slab surface densities: the printed h and the weighted TM density
/// against their p-integrals, away from ω_p/√2 and ω_p.
pub fn slab_h_oracle(s: &QuadSettings) -> Vec<CheckRecord> {
    let params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    let pts: Vec<f64> = log_grid(1e-2, 50.0, 24)
        .into_iter()
        .filter(|w| (w - FRAC_1_SQRT_2).abs() >= 1e-3 && (w - 1.0).abs() >= 1e-3)
        .collect();
    let printed = max_over(&pts, |w| {
        Ok(rel_dev(
            slab::h_printed(w, &params, s)?,
            slab::h_printed_defining(w, &params, s)?.value,
        ))
    });
    let weighted = max_over(&pts, |w| {
        Ok(rel_dev(
            slab::h_weighted(w, &params, s)?,
            slab::h_weighted_defining(w, &params, s)?.value,
        ))
    });
    vec![
        bound_or_fail(
            Suite::Oracle,
            "slab h₁/h₂ closed vs p-integral (max rel dev)".into(),
            printed,
            1e-8,
        ),
        bound_or_fail(
            Suite::Oracle,
            "slab weighted TM density closed vs p-integral (max rel dev)".into(),
            weighted,
            1e-8,
        ),
    ]
}

/// Thickness-proportional free energy against the brute-force (k, p) integral.
pub fn slab_exp_oracle(s: &QuadSettings) -> Vec<CheckRecord> {
    let params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    let os = oracle_settings(s);
    [0.1, 1.0, 10.0]
        .into_iter()
        .map(|t| {
            let r = (|| {
                let closed = slab::exp_free_energy(t, &params, s)?.value;
                let def = free_energy_defining(&ExpChannel { params }, t, &os)?.value;
                Ok(rel_dev(closed, def))
            })();
            bound_or_fail(
                Suite::Oracle,
                format!("slab F_exp closed vs (k, p) integral, T = {t}"),
                r,
                1e-6,
            )
        })
        .collect()
}

/// t = t^s · t^L · e^{i(q−p)L} on a grid of (p, k), both polarisations.
pub fn slab_factorization() -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for l in [0.3, 1.0, 5.0] {
        let params = SlabParams {
            omega_p: 1.0,
            thickness: l,
        };
        for ch in Channel::ALL {
            let mut pts = Vec::new();
            for p in [0.05, 0.3, 0.7, 0.95, 1.05, 1.7, 4.0, 20.0] {
                for k in [0.0, 0.2, 1.0, 3.0] {
                    pts.push((p, k));
                }
            }
            let r = max_over(&pts, |(p, k)| {
                let t = slab::transmission(ch, p, k, &params)?;
                Ok((t.product() - t.full).norm() / t.full.norm())
            });
            let name = format!(
                "slab {} transmission factorisation, L = {l} (max rel dev)",
                ch.label()
            );
            out.push(bound_or_fail(Suite::Oracle, name, r, 1e-12));
        }
    }
    out
}

/// Slab plasmon below ω_p/√2, its thick-slab limit, and the sheet plasmon
/// on its own mode condition.
pub fn plasmon_dispersion_checks() -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let ks = log_grid(1e-2, 1e2, 41);
    for l in [0.1, 1.0, 50.0] {
        let params = SlabParams {
            omega_p: 1.0,
            thickness: l,
        };
        let r = max_over(&ks, |k| {
            Ok(slab::plasmon_dispersion(k, &params, 1e-14)? - FRAC_1_SQRT_2)
        });
        // Positive excess means the bound is violated.
        let name = format!("slab ω_sf(k) − ω_p/√2 ≤ 0, L = {l} (max over k)");
        out.push(match r {
            Ok(d) => CheckRecord::bound(Suite::Oracle, name, d, 0.0),
            Err(e) => CheckRecord::failed(Suite::Oracle, name, 0.0, 0.0, &e),
        });
    }
    let thick = SlabParams {
        omega_p: 1.0,
        thickness: 50.0,
    };
    let r = max_over(&log_grid(0.1, 10.0, 21), |k| {
        Ok(rel_dev(
            slab::plasmon_dispersion(k, &thick, 1e-15)?,
            slab::single_surface_plasmon(k, &thick),
        ))
    });
    out.push(bound_or_fail(
        Suite::Oracle,
        "slab ω_sf at L = 50 vs single-surface plasmon, k ∈ [0.1, 10] (max rel dev)".into(),
        r,
        1e-6,
    ));
    for w0 in [0.0, 0.5, 1.3] {
        let params = SheetParams {
            plasma: 1.0,
            omega0: w0,
        };
        let ks: Vec<f64> = log_grid(1e-2, 1e2, 41)
            .into_iter()
            .map(|k| k + w0)
            .collect();
        let r = max_over(&ks, |k| {
            Ok(sheet::surface_mode_residual(k, sheet::omega_sf(k, &params)?, &params).abs())
        });
        let name = format!("sheet plasmon mode-condition residual, ω₀ = {w0} (max over k)");
        out.push(bound_or_fail(Suite::Oracle, name, r, 1e-10));
    }
    out
}

/// Closed-form parts against the generic (k, p) phase-shift integral.
pub fn spectral_oracle(s: &QuadSettings) -> Vec<CheckRecord> {
    let os = oracle_settings(s);
    let mut out = Vec::new();
    for w0 in [0.0, 0.9] {
        let params = SheetParams {
            plasma: 1.0,
            omega0: w0,
        };
        let t = 0.5;
        for ch in Channel::ALL {
            let r = (|| {
                let mut closed = sheet::free_energy_channel_raw(ch, t, &params, s)?.value;
                if ch == Channel::Tm {
                    closed += sheet::plasmon_free_energy_raw(t, &params, s)?.value;
                }
                let def = free_energy_defining(
                    &SheetChannel {
                        channel: ch,
                        params,
                    },
                    t,
                    &os,
                )?
                .value;
                Ok(rel_dev(closed, def))
            })();
            let name = format!(
                "sheet F_{} raw vs (k, p) integral, ω₀ = {w0}, T = {t}",
                ch.label()
            );
            out.push(bound_or_fail(Suite::Oracle, name, r, 1e-6));
        }
    }
    let params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    for t in [0.1, 1.0] {
        for ch in Channel::ALL {
            let r = (|| {
                let closed = slab::surface_free_energy(ch, t, &params, s)?.value;
                let def = free_energy_defining(
                    &SurfaceChannel {
                        channel: ch,
                        params,
                    },
                    t,
                    &os,
                )?
                .value;
                Ok(rel_dev(closed, def))
            })();
            let name = format!("slab F_s_{} vs (k, p) integral, T = {t}", ch.label());
            out.push(bound_or_fail(Suite::Oracle, name, r, 1e-6));
            // At small k the TM phase turns within ~k⁴ of ω = ω_p, where
            // ε = 1 − ω_p²/ω² is lost to rounding; only a low T suppresses it.
            if ch == Channel::Tm && t > 0.5 {
                continue;
            }
            let r = (|| {
                let closed = slab::lifshitz_free_energy(ch, t, &params, s)?.value;
                let def = free_energy_defining(
                    &LifshitzChannel {
                        channel: ch,
                        params,
                    },
                    t,
                    &os,
                )?
                .value;
                Ok(rel_dev(closed, def))
            })();
            let name = format!("slab F_L_{} vs (k, p) integral, T = {t}", ch.label());
            out.push(bound_or_fail(Suite::Oracle, name, r, 1e-6));
        }
    }
    out
}

// ---------------------------------------------------------------- asymptotics

const FIT_TEMPS: (f64, f64, usize) = (1e2, 1e3, 12);

fn fit_grid() -> Vec<f64> {
    log_grid(FIT_TEMPS.0, FIT_TEMPS.1, FIT_TEMPS.2)
}

/// Raw sheet free energy of one polarisation (TM with its plasmon, without the
/// plasmon's T⁵ term), sampled on the fit grid.
fn sheet_raw_series(
    ch: Channel,
    params: &SheetParams,
    s: &QuadSettings,
) -> Result<Vec<(f64, f64)>> {
    let s = &fit_settings(s);
    fit_grid()
        .into_iter()
        .map(|t| {
            let mut f = sheet::free_energy_channel_raw(ch, t, params, s)?.value;
            if ch == Channel::Tm {
                f += sheet::plasmon_free_energy_reduced(t, params, s)?.value;
            }
            Ok((t, f))
        })
        .collect()
}

/// T³ and T² coefficients of the raw continuum free energies from fits.
pub fn sheet_high_t_fit(s: &QuadSettings) -> Vec<CheckRecord> {
    let s = &fit_settings(s);
    let mut out = Vec::new();
    let suite = Suite::Asymptotics;
    for w0 in [0.0, 0.5] {
        let params = SheetParams {
            plasma: 1.0,
            omega0: w0,
        };
        for ch in Channel::ALL {
            let fit = (|| {
                let samples: Vec<(f64, f64)> = fit_grid()
                    .into_iter()
                    .map(|t| Ok((t, sheet::free_energy_channel_raw(ch, t, &params, s)?.value)))
                    .collect::<Result<_>>()?;
                fit_heat_kernel(&samples, 1e-3)
            })();
            let spec = sheet::subtraction(ch, &params);
            let tag = format!("{}, ω₀ = {w0}", ch.label());
            match fit {
                Ok(hk) => {
                    let got = hk.subtraction_spec();
                    let t3 = format!("sheet {tag}: fitted T³ coefficient");
                    out.push(match ch {
                        Channel::Te => {
                            CheckRecord::relative(suite, t3, spec.coeff_t3, got.coeff_t3, 0.01)
                        }
                        // Zero expected: 1% of the TE coefficient as the scale.
                        Channel::Tm => CheckRecord::absolute(
                            suite,
                            t3,
                            0.0,
                            got.coeff_t3,
                            0.01 * ZETA3 / (4.0 * PI),
                        ),
                    });
                    let t2 = format!("sheet {tag}: fitted T² coefficient");
                    out.push(CheckRecord::relative(
                        suite,
                        t2,
                        spec.coeff_t2,
                        got.coeff_t2,
                        0.01,
                    ));
                }
                Err(e) => out.push(CheckRecord::failed(
                    suite,
                    format!("sheet {tag}: high-T fit"),
                    spec.coeff_t3,
                    0.01,
                    &e,
                )),
            }
        }
    }
    out
}

/// a_{1/2}, a₁ from fits of the full raw polarisations (TM with its plasmon),
/// and the sign change of a_{3/2}^TE.
pub fn heat_kernel_identities(s: &QuadSettings) -> Vec<CheckRecord> {
    let suite = Suite::Asymptotics;
    let mut out = Vec::new();
    let sqrt_pi = PI.sqrt();
    for w0 in [0.0, 0.5] {
        let params = SheetParams {
            plasma: 1.0,
            omega0: w0,
        };
        let ratio = w0 * w0;
        for ch in Channel::ALL {
            let (a_half, a_one) = match ch {
                Channel::Te => (sqrt_pi, -2.0),
                Channel::Tm => (2.0 * sqrt_pi * (1.0 - 2.0 * ratio), -2.0 / 3.0),
            };
            let tag = format!("{}, ω₀ = {w0}", ch.label());
            match sheet_raw_series(ch, &params, s).and_then(|x| fit_heat_kernel(&x, 1e-3)) {
                Ok(hk) => {
                    out.push(CheckRecord::relative(
                        suite,
                        format!("sheet a_1/2 {tag}"),
                        a_half,
                        hk.a_half,
                        0.02,
                    ));
                    out.push(CheckRecord::relative(
                        suite,
                        format!("sheet a_1 {tag}"),
                        a_one,
                        hk.a_one,
                        0.02,
                    ));
                }
                Err(e) => out.push(CheckRecord::failed(
                    suite,
                    format!("sheet heat-kernel fit {tag}"),
                    a_half,
                    0.02,
                    &e,
                )),
            }
        }
    }
    let name = "sheet a_3/2^TE sign change at ω₀/Ω₀ (reported; 1/√2 expected)";
    out.push(match sheet::a_three_half_te_crossing(1.0, 0.5, 0.9, s) {
        Ok(x) => CheckRecord::report(suite, name, FRAC_1_SQRT_2, x),
        Err(e) => CheckRecord::failed(suite, name, FRAC_1_SQRT_2, f64::NAN, &e),
    });
    out
}

/// F_s_TM/T³ at low temperature (criterion value 5ζ(3)/4π).
pub fn slab_low_t_surface(s: &QuadSettings) -> Vec<CheckRecord> {
    let params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    let t = 1e-2;
    let r = slab::surface_free_energy(Channel::Tm, t, &params, s).map(|q| q.value / t.powi(3));
    vec![relative_or_fail(
        Suite::Asymptotics,
        format!("slab F_s_TM/T³ at T = {t} vs 5ζ(3)/4π"),
        5.0 * ZETA3 / (4.0 * PI),
        r,
        0.01,
    )]
}

/// Lifshitz parts at low temperature: the TE T⁴ law and the TM/TE ratio.
pub fn slab_low_t_lifshitz(s: &QuadSettings) -> Vec<CheckRecord> {
    let params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    let t: f64 = 1e-2;
    let te = slab::lifshitz_free_energy(Channel::Te, t, &params, s).map(|q| q.value);
    let tm = slab::lifshitz_free_energy(Channel::Tm, t, &params, s).map(|q| q.value);
    let norm = 45.0 * (2f64.exp() - 1.0) / (-2.0 * PI * PI * t.powi(4));
    let ratio = match (&te, &tm) {
        (Ok(a), Ok(b)) => Ok(b / a),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    let mut out = vec![
        relative_or_fail(
            Suite::Asymptotics,
            format!("slab F_L_TE·45(e^2ω_pL − 1)/(−2π²T⁴) at T = {t}"),
            1.0,
            te.map(|v| v * norm),
            0.02,
        ),
        relative_or_fail(
            Suite::Asymptotics,
            format!("slab F_L_TM/F_L_TE at T = {t}"),
            3.0,
            ratio,
            0.02,
        ),
    ];
    // The ratio approaches 3 only linearly in T; show how far off it is a decade lower.
    let t_low = 1e-3;
    let low = slab::lifshitz_free_energy(Channel::Te, t_low, &params, s).and_then(|a| {
        Ok(slab::lifshitz_free_energy(Channel::Tm, t_low, &params, s)?.value / a.value)
    });
    out.push(match low {
        Ok(r) => CheckRecord::report(
            Suite::Asymptotics,
            format!("slab F_L_TM/F_L_TE at T = {t_low}"),
            3.0,
            r,
        ),
        Err(e) => CheckRecord::failed(
            Suite::Asymptotics,
            format!("slab F_L_TM/F_L_TE at T = {t_low}"),
            3.0,
            f64::NAN,
            &e,
        ),
    });
    out
}

pub fn slab_low_t(s: &QuadSettings) -> Vec<CheckRecord> {
    [slab_low_t_surface(s), slab_low_t_lifshitz(s)].concat()
}

/// High-temperature behaviour of the slab parts.
pub fn slab_high_t(s: &QuadSettings) -> Vec<CheckRecord> {
    let suite = Suite::Asymptotics;
    let params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    let mut out = Vec::new();
    let t = 1e3;
    let r = slab::exp_entropy_subtr(t, &params, s).map(|q| q.value);
    out.push(relative_or_fail(
        suite,
        format!("slab S_exp subtracted (one polarisation) at T = {t} vs ω_p³L/12π"),
        1.0 / (12.0 * PI),
        r,
        0.01,
    ));
    let r = slab::surface_free_energy_subtr(Channel::Te, t, &params, s)
        .map(|q| q.value / (t * (2.0 * t).ln()));
    out.push(relative_or_fail(
        suite,
        format!("slab F_s_TE subtracted/(T ln(2T/ω_p)) at T = {t} vs ω_p²/8π"),
        1.0 / (8.0 * PI),
        r,
        0.03,
    ));
    let d = slab::lifshitz_constant_te(&params, s).map(|q| q.value);
    for ch in Channel::ALL {
        for t in [1e2, 1e3] {
            let name = format!("slab S_L_{} at T = {t} vs plateau −d·ω_p²", ch.label());
            let r = slab::lifshitz_entropy(ch, t, &params, s).map(|q| q.value);
            out.push(match &d {
                Ok(d) => relative_or_fail(suite, name, -d, r, 0.05),
                Err(e) => CheckRecord::failed(suite, name, f64::NAN, 0.05, e),
            });
        }
    }
    out
}

// ---------------------------------------------------------------- constants

/// ∫ω² h_TM^subtr dω vanishes.
pub fn tm_sum_rule(s: &QuadSettings) -> Vec<CheckRecord> {
    [0.0, 0.5]
        .into_iter()
        .map(|w0| {
            let params = SheetParams {
                plasma: 1.0,
                omega0: w0,
            };
            let name = format!("sheet |∫ω² h_TM subtracted dω|, ω₀ = {w0}");
            let r = sheet::spectral_moment(Channel::Tm, &params, s).map(|q| q.value.abs());
            bound_or_fail(Suite::Constants, name, r, 1e-6)
        })
        .collect()
}

pub const WINDOW_SCAN: (f64, f64, usize) = (0.6, 0.95, 71);

/// Temperatures at which the total sheet entropy is sampled for sign.
pub fn entropy_sign_grid() -> Vec<f64> {
    log_grid(1e-2, 1e4, 25)
}

/// Sign of the ln T coefficient over ω₀, the sign of the total entropy inside
/// the window, and its positivity for the charged fluid.
pub fn negative_entropy_window(s: &QuadSettings) -> Vec<CheckRecord> {
    let suite = Suite::Constants;
    let mut out = Vec::new();
    let (lo, hi, n) = WINDOW_SCAN;
    let w0s: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let coeffs: Result<Vec<(f64, f64)>> = w0s
        .iter()
        .map(|&w0| {
            Ok((
                w0,
                sheet::high_t_log_coefficient(
                    &SheetParams {
                        plasma: 1.0,
                        omega0: w0,
                    },
                    s,
                )?,
            ))
        })
        .collect();
    let coeffs = match coeffs {
        Ok(c) => c,
        Err(e) => {
            out.push(CheckRecord::failed(
                suite,
                "sheet ln T coefficient scan",
                0.0,
                0.0,
                &e,
            ));
            return out;
        }
    };
    let neg: Vec<f64> = coeffs
        .iter()
        .filter(|(_, c)| *c < 0.0)
        .map(|(w, _)| *w)
        .collect();
    let (a, b) = (FRAC_1_SQRT_2, 1.2 * FRAC_1_SQRT_2);
    let overlaps = neg.iter().any(|&w| w > a && w < b);
    out.push(CheckRecord::flag(
        suite,
        "sheet ln T coefficient < 0 on a sub-interval overlapping (Ω₀/√2, 1.2Ω₀/√2)",
        overlaps,
    ));
    if let (Some(first), Some(last)) = (neg.first(), neg.last()) {
        out.push(CheckRecord::report(
            suite,
            "sheet window lower end ω₀/Ω₀ (scan resolution 0.005)",
            a,
            *first,
        ));
        out.push(CheckRecord::report(
            suite,
            "sheet window upper end ω₀/Ω₀ within the scan",
            hi,
            *last,
        ));
    }
    let temps = entropy_sign_grid();
    let mid = neg.get(neg.len() / 2).copied().unwrap_or(0.8);
    let name = format!("sheet min_T S_total < 0 at ω₀ = {mid:.3}");
    out.push(match sheet::scan_row(1.0, mid, &temps, s) {
        Ok(row) => CheckRecord::new(
            suite,
            name,
            0.0,
            row.min_entropy,
            0.0,
            row.min_entropy < 0.0,
        ),
        Err(e) => CheckRecord::failed(suite, name, 0.0, 0.0, &e),
    });
    let name = "sheet min_T S_total ≥ 0 at ω₀ = 0, T ∈ [1e-2, 1e4]";
    out.push(match sheet::scan_row(1.0, 0.0, &temps, s) {
        Ok(row) => CheckRecord::new(
            suite,
            name,
            0.0,
            row.min_entropy,
            0.0,
            row.min_entropy >= 0.0,
        ),
        Err(e) => CheckRecord::failed(suite, name, 0.0, 0.0, &e),
    });
    out
}

pub const D_REFERENCE: f64 = -0.000_593_6;

/// c and d of the slab, d by both polarisations.
pub fn slab_constants(s: &QuadSettings) -> Vec<CheckRecord> {
    let suite = Suite::Constants;
    let params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    let mut out = Vec::new();
    // the quoted four-digit value, not π/2
    #[allow(clippy::approx_constant)]
    let quoted = 1.5708;
    let c = slab::slab_constant_c(1.0, s).map(|q| q.value);
    out.push(match c {
        Ok(c) => CheckRecord::absolute(suite, "slab constant c", quoted, c, 1e-3),
        Err(e) => CheckRecord::failed(suite, "slab constant c", quoted, 1e-3, &e),
    });
    let te = slab::lifshitz_constant_te(&params, s).map(|q| q.value);
    let tm = slab::lifshitz_constant_tm(&params, s).map(|q| q.value);
    out.push(relative_or_fail(
        suite,
        "slab constant d (TE route)".into(),
        D_REFERENCE,
        te.clone(),
        0.1,
    ));
    out.push(relative_or_fail(
        suite,
        "slab constant d (TM route)".into(),
        D_REFERENCE,
        tm.clone(),
        0.1,
    ));
    if let (Ok(a), Ok(b)) = (te, tm) {
        out.push(CheckRecord::relative(
            suite,
            "slab d: TM route vs TE route",
            a,
            b,
            0.1,
        ));
    }
    let name = "slab ∫ω δ_L_TE dω (T ln T coefficient of the TE Lifshitz part; reported)";
    out.push(match slab::lifshitz_moment_te(&params, s) {
        Ok(q) => CheckRecord::report(suite, name, 0.0, q.value),
        Err(e) => CheckRecord::failed(suite, name, 0.0, f64::NAN, &e),
    });
    out
}

// ---------------------------------------------------------------- thermo-identity

type PartFn<'a> = Box<dyn Fn(f64) -> Result<QuadResult> + 'a>;

/// (label, F_subtr(T), S_subtr(T)) for every part of both models.
fn all_parts<'a>(
    sheet_params: &'a [SheetParams],
    slab_params: &'a SlabParams,
    s: &'a QuadSettings,
) -> Vec<(String, PartFn<'a>, PartFn<'a>)> {
    let mut v: Vec<(String, PartFn<'a>, PartFn<'a>)> = Vec::new();
    for p in sheet_params {
        for ch in Channel::ALL {
            v.push((
                format!("sheet {} (ω₀ = {})", ch.label(), p.omega0),
                Box::new(move |t| sheet::free_energy_channel(ch, t, p, s)),
                Box::new(move |t| sheet::entropy_channel(ch, t, p, s)),
            ));
        }
        if p.plasmon_offset() > 0.0 {
            v.push((
                format!("sheet sf (ω₀ = {})", p.omega0),
                Box::new(move |t| sheet::plasmon_free_energy_subtr(t, p, s)),
                Box::new(move |t| sheet::plasmon_entropy_subtr(t, p, s)),
            ));
        }
    }
    let p = slab_params;
    for ch in Channel::ALL {
        v.push((
            format!("slab s_{}", ch.label()),
            Box::new(move |t| slab::surface_free_energy_subtr(ch, t, p, s)),
            Box::new(move |t| slab::surface_entropy_subtr(ch, t, p, s)),
        ));
        v.push((
            format!("slab L_{}", ch.label()),
            Box::new(move |t| slab::lifshitz_free_energy(ch, t, p, s)),
            Box::new(move |t| slab::lifshitz_entropy(ch, t, p, s)),
        ));
    }
    v.push((
        "slab exp".into(),
        Box::new(move |t| slab::exp_free_energy_subtr(t, p, s)),
        Box::new(move |t| slab::exp_entropy_subtr(t, p, s)),
    ));
    v
}

pub fn thermo_identity_grid() -> Vec<f64> {
    log_grid(1e-2, 1e2, 9)
}

/// S = −∂F/∂T by central differences (h = 1e-4·T), relative to
/// max(|S|, |F|/T) so that zero crossings of S stay well defined.
pub fn thermo_identity(s: &QuadSettings) -> Vec<CheckRecord> {
    let sheets = [
        SheetParams {
            plasma: 1.0,
            omega0: 0.0,
        },
        SheetParams {
            plasma: 1.0,
            omega0: 0.9,
        },
    ];
    let slab_params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    let temps = thermo_identity_grid();
    all_parts(&sheets, &slab_params, s)
        .into_iter()
        .map(|(label, f, en)| {
            let r = max_over(&temps, |t| {
                let h = 1e-4 * t;
                let (up, down) = (f(t + h)?.value, f(t - h)?.value);
                let fd = -(up - down) / (2.0 * h);
                let sv = en(t)?.value;
                let scale = sv.abs().max(0.5 * (up + down).abs() / t);
                Ok(if scale == 0.0 {
                    0.0
                } else {
                    (sv - fd).abs() / scale
                })
            });
            bound_or_fail(
                Suite::ThermoIdentity,
                format!("{label}: S vs −dF/dT, T ∈ [1e-2, 1e2] (max rel dev)"),
                r,
                1e-4,
            )
        })
        .collect()
}

// ---------------------------------------------------------------- nernst

/// S/T at low temperature for the charged-fluid sheet.
pub fn sheet_low_t_slopes(s: &QuadSettings) -> Vec<CheckRecord> {
    let params = SheetParams {
        plasma: 1.0,
        omega0: 0.0,
    };
    let t = 1e-3;
    let mut out: Vec<CheckRecord> = [(Channel::Te, 1.0 / 6.0), (Channel::Tm, 1.0 / 18.0)]
        .into_iter()
        .map(|(ch, want)| {
            let r = sheet::entropy_channel(ch, t, &params, s).map(|q| q.value / t);
            relative_or_fail(
                Suite::Nernst,
                format!("sheet S_{}/T at T = {t}, ω₀ = 0", ch.label()),
                want,
                r,
                0.01,
            )
        })
        .collect();
    let r = sheet::total(t, &params, s).map(|p| p.s_subtr / t);
    out.push(relative_or_fail(
        Suite::Nernst,
        format!("sheet S_total/T at T = {t}, ω₀ = 0"),
        2.0 / 9.0,
        r,
        0.01,
    ));
    out
}

/// Every subtracted part's entropy vanishes as T → 0: S shrinks by at least
/// a factor 5 from T = 1e-2 to 1e-3 (a linear law gives 10).
pub fn nernst(s: &QuadSettings) -> Vec<CheckRecord> {
    let sheets = [
        SheetParams {
            plasma: 1.0,
            omega0: 0.0,
        },
        SheetParams {
            plasma: 1.0,
            omega0: 0.9,
        },
    ];
    let slab_params = SlabParams {
        omega_p: 1.0,
        thickness: 1.0,
    };
    all_parts(&sheets, &slab_params, s)
        .into_iter()
        .map(|(label, _, en)| {
            let name = format!("{label}: |S(1e-3)/S(1e-2)|");
            match (en(1e-3), en(1e-2)) {
                (Ok(a), Ok(b)) => {
                    let ratio = if b.value == 0.0 {
                        0.0
                    } else {
                        (a.value / b.value).abs()
                    };
                    CheckRecord::bound(Suite::Nernst, name, ratio, 0.2)
                }
                (Err(e), _) | (_, Err(e)) => CheckRecord::failed(Suite::Nernst, name, 0.0, 0.2, &e),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn record_comparisons() {
        assert!(CheckRecord::relative(Suite::Oracle, "x", 1.0, 1.005, 0.01).pass);
        assert!(!CheckRecord::relative(Suite::Oracle, "x", 1.0, 1.02, 0.01).pass);
        assert!(!CheckRecord::relative(Suite::Oracle, "x", 1.0, f64::NAN, 0.01).pass);
        assert!(CheckRecord::bound(Suite::Oracle, "x", 0.0, 0.0).pass);
        assert!(!CheckRecord::flag(Suite::Oracle, "x", false).pass);
        assert!(CheckRecord::report(Suite::Oracle, "x", 1.0, 3.0).pass);
    }

    #[test]
    fn factorisation_checks_pass() {
        assert!(slab_factorization().iter().all(|r| r.pass));
    }
}
