//! Vortex energy, the annular profile `Λ`, the entropy remainder and the
//! limits that tie them together.
//!
//! Everything reduces to `T(a) = 2∫_a^∞ f(u)/u³ du`, integrated in `x = ln u`:
//! `𝒱(f) = T(1)` and `Λ(t) = T(2/(sys·t))`. Differences such as `Λ − 𝒱` are
//! computed as finite integrals directly instead of subtracting two tails.

use crate::error::{Error, Result};
use crate::integrand::{FamilySchedule, Integrand};
use crate::quadrature::{self, Estimate};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::OnceLock;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VortexEnergyResult {
    pub value: f64,
    #[serde(rename = "error_estimate")]
    pub abs_error_estimate: f64,
    pub method: Method,
}

fn log_breaks(f: &Integrand) -> Vec<f64> {
    f.kinks().iter().filter(|k| **k > 0.0).map(|k| k.ln()).collect()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::range("tol", tol, "must be positive"))
    }
}

/// `T(a) = 2∫_a^∞ f(u)/u³ du`.
pub fn tail_integral(f: &Integrand, a: f64, tol: f64) -> Result<Estimate> {
    check_tol(tol)?;
    if a.is_infinite() {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    if !(a > 0.0) {
        return Err(Error::range("a", a, "lower limit must be positive"));
    }
    let g = |x: f64| 2.0 * f.ratio_log(x);
    quadrature::integrate_half_line(&g, a.ln(), &log_breaks(f), tol)
}

/// `2∫_a^b f(u)/u³ du` (signed, any order of `a`, `b`).
pub fn band_integral(f: &Integrand, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    check_tol(tol)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::range("a", a.min(b), "limits must be positive"));
    }
    let g = |x: f64| 2.0 * f.ratio_log(x);
    quadrature::integrate_with_breaks(&g, a.ln(), b.ln(), &log_breaks(f), tol, 0.0)
}

/// `𝒱(f) = 2∫_0^1 f(1/r) r dr`, from the closed form when one is declared.
pub fn vortex_energy(f: &Integrand, tol: f64) -> Result<VortexEnergyResult> {
    check_tol(tol)?;
    if let Some(v) = f.closed_form_vortex_energy {
        return Ok(VortexEnergyResult {
            value: v,
            abs_error_estimate: 0.0,
            method: Method::ClosedForm,
        });
    }
    vortex_energy_quadrature(f, tol)
}

/// `𝒱(f)` by quadrature, ignoring any closed form.
pub fn vortex_energy_quadrature(f: &Integrand, tol: f64) -> Result<VortexEnergyResult> {
    let e = tail_integral(f, 1.0, tol)?;
    Ok(VortexEnergyResult {
        value: e.value,
        abs_error_estimate: e.abs_error,
        method: Method::Quadrature,
    })
}

/// Evaluates `Λ(t) = (sys²/2)∫_0^t f(2/(sys·s)) s ds`.
///
/// Caches `𝒱(f)` on first use; later evaluations only integrate over the
/// finite band between `u = 1` and `u = 2/(sys·t)`.
#[derive(Debug)]
pub struct LambdaEvaluator {
    integrand: Integrand,
    sys: f64,
    tol: f64,
    tail_at_one: OnceLock<std::result::Result<f64, String>>,
}

impl LambdaEvaluator {
    pub fn new(integrand: Integrand, sys: f64, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        if !(sys.is_finite() && sys > 0.0) {
            return Err(Error::range("sys", sys, "systole must be positive"));
        }
        Ok(LambdaEvaluator {
            integrand,
            sys,
            tol,
            tail_at_one: OnceLock::new(),
        })
    }

    /// Circle target: systole `2π`.
    pub fn circle(integrand: Integrand) -> Result<Self> {
        Self::new(integrand, 2.0 * PI, DEFAULT_TOL)
    }

    pub fn integrand(&self) -> &Integrand {
        &self.integrand
    }

    pub fn sys(&self) -> f64 {
        self.sys
    }

    fn vortex(&self) -> Result<f64> {
        let cached = self.tail_at_one.get_or_init(|| match self.integrand.closed_form_vortex_energy {
            Some(v) => Ok(v),
            None => tail_integral(&self.integrand, 1.0, 0.25 * self.tol)
                .map(|e| e.value)
                .map_err(|e| e.to_string()),
        });
        match cached {
            Ok(v) => Ok(*v),
            Err(msg) if msg == &Error::Divergent.to_string() => Err(Error::Divergent),
            Err(msg) => Err(Error::QuadratureFailure(msg.clone())),
        }
    }

    /// `T(a)`; tails too slow for the quadrature budget fall back to
    /// `𝒱(f) − 2∫_1^a` when `𝒱(f)` has a closed form.
    fn tail(&self, a: f64) -> Result<f64> {
        match tail_integral(&self.integrand, a, self.tol) {
            Err(Error::Divergent) if self.integrand.closed_form_vortex_energy.is_some() => {
                Ok(self.vortex()? - band_integral(&self.integrand, 1.0, a, self.tol)?.value)
            }
            r => Ok(r?.value),
        }
    }

    fn lower_limit(&self, t: f64) -> f64 {
        2.0 / (self.sys * t)
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::range("t", t, "must be nonnegative"));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let a = self.lower_limit(t);
        if a >= 1.0 {
            return self.tail(a);
        }
        let v = self.vortex()?;
        Ok(v + band_integral(&self.integrand, a, 1.0, 0.5 * self.tol)?.value)
    }

    /// `Λ(t) − 𝒱(f)`, without forming either term.
    pub fn gap(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::range("t", t, "must be positive"));
        }
        // Still require 𝒱 finite so divergent integrands are reported.
        self.vortex()?;
        Ok(band_integral(&self.integrand, self.lower_limit(t), 1.0, self.tol)?.value)
    }

    /// `E·(Λ(σ/E) − Λ(ρ/E))`, a lower bound for the energy on the annulus
    /// `ρ < |x| < σ` of a map with `E_sg = E`.
    pub fn annular_lower_bound(&self, e: f64, rho: f64, sigma: f64) -> Result<f64> {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::range("E", e, "must be positive"));
        }
        if !(rho >= 0.0 && sigma >= rho) {
            return Err(Error::range("sigma", sigma, "need 0 <= rho <= sigma"));
        }
        if sigma == rho {
            return Ok(0.0);
        }
        let a_sigma = self.lower_limit(sigma / e);
        let band = if rho == 0.0 {
            self.tail(a_sigma)?
        } else {
            band_integral(&self.integrand, a_sigma, self.lower_limit(rho / e), self.tol)?.value
        };
        Ok(e * band)
    }
}

/// `log(sys·t/2)`, the limit of `Λ_{f_n}(t) − 𝒱(f_n)` along a schedule.
pub fn gap_limit(sys: f64, t: f64) -> f64 {
    (sys * t / 2.0).ln()
}

/// `Λ_{f_n}(t) − 𝒱(f_n)` for every member of the schedule.
pub fn lambda_gap(schedule: &FamilySchedule, t: f64, sys: f64) -> Result<Vec<f64>> {
    if schedule.params.is_empty() {
        return Err(Error::Precondition("empty schedule".into()));
    }
    schedule
        .integrands()?
        .into_iter()
        .map(|f| LambdaEvaluator::new(f, sys, DEFAULT_TOL)?.gap(t))
        .collect()
}

/// `H = Σ (λ²/4π) log(2π/λ)`.
pub fn entropy_remainder(lambdas: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &l in lambdas {
        if !(l > 0.0) {
            return Err(Error::NonpositiveLambda(l));
        }
        h += l * l / (4.0 * PI) * (2.0 * PI / l).ln();
    }
    Ok(h)
}

/// `∫_0^ρ 2πr f(λ/2πr) dr − 𝒱(f)·λ²/4π` for a single integrand.
pub fn entropy_error(f: &Integrand, lambda: f64, rho: f64, tol: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::NonpositiveLambda(lambda));
    }
    if !(rho > 0.0) {
        return Err(Error::range("rho", rho, "must be positive"));
    }
    // 𝒱 finite is part of the statement.
    vortex_energy(f, tol)?;
    let b = lambda / (2.0 * PI * rho);
    Ok(lambda * lambda / (4.0 * PI) * band_integral(f, b, 1.0, tol)?.value)
}

/// `(λ²/4π)·log(2πρ/λ)`.
pub fn entropy_error_target(lambda: f64, rho: f64) -> f64 {
    lambda * lambda / (4.0 * PI) * (2.0 * PI * rho / lambda).ln()
}

/// The entropy error along a schedule.
pub fn entropy_error_limit(schedule: &FamilySchedule, lambda: f64, rho: f64) -> Result<Vec<f64>> {
    schedule
        .integrands()?
        .iter()
        .map(|f| entropy_error(f, lambda, rho, DEFAULT_TOL))
        .collect()
}

/// Right-hand side `‖m‖²·T(‖m‖/√area)` of the weak-L² estimate.
pub fn weak_l2_bound(f: &Integrand, weak_norm: f64, area: f64) -> Result<f64> {
    if !(weak_norm > 0.0) {
        return Err(Error::range("weak_norm", weak_norm, "must be positive"));
    }
    if !(area > 0.0) {
        return Err(Error::range("area", area, "must be positive"));
    }
    let a = weak_norm / area.sqrt();
    Ok(weak_norm * weak_norm * tail_integral(f, a, DEFAULT_TOL)?.value)
}
