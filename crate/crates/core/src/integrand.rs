//! Young-function integrands `f: [0,∞) → [0,∞)` used in place of `t²/2`.
//!
//! Every integrand can report `f(e^x)/e^{2x}` directly in log space so that
//! vortex-energy tails can be integrated far past the range where `f` itself
//! would overflow.

use crate::error::{Error, Result};
use crate::quadrature;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::fmt;

/// Serializable description `{"family": ..., "params": {...}}`.
///
/// The `truncate` and `regularize` families wrap another descriptor in `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrandSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<IntegrandSpec>>,
}

impl IntegrandSpec {
    pub fn new(family: &str, params: &[(&str, f64)]) -> Self {
        IntegrandSpec {
            family: family.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            base: None,
        }
    }

    /// Parses the short form `family:value` used on the command line, e.g.
    /// `trunc:100` or `power:1.9`. The value fills the family's primary
    /// parameter.
    pub fn parse_short(s: &str) -> Result<Self> {
        let (family, value) = match s.split_once(':') {
            Some((f, v)) => (f.trim(), Some(v.trim())),
            None => (s.trim(), None),
        };
        let family = canonical_family(family)?;
        let mut spec = IntegrandSpec::new(family, &[]);
        if let Some(v) = value {
            let v: f64 = v
                .parse()
                .map_err(|_| Error::Parse(format!("bad parameter value `{v}`")))?;
            let key = primary_param(family)
                .ok_or_else(|| Error::Parse(format!("family `{family}` takes no parameter")))?;
            spec.params.insert(key.to_string(), v);
        }
        Ok(spec)
    }

    fn get(&self, name: &str) -> Result<f64> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingParam(name.to_string()))
    }
}

fn canonical_family(name: &str) -> Result<&'static str> {
    Ok(match name {
        "power" | "p" => "power",
        "area" | "delta" => "area",
        "trunc" | "truncated_quadratic" => "trunc",
        "sublog" | "eta" => "sublog",
        "quadratic" | "dirichlet" => "quadratic",
        "oscillating" => "oscillating",
        "spike" => "spike",
        "truncate" => "truncate",
        "regularize" => "regularize",
        other => return Err(Error::UnknownFamily(other.to_string())),
    })
}

/// Name of the parameter a schedule varies for each family.
pub fn primary_param(family: &str) -> Option<&'static str> {
    match family {
        "power" | "oscillating" | "spike" => Some("p"),
        "area" => Some("delta"),
        "trunc" | "truncate" => Some("kappa"),
        "sublog" => Some("eta"),
        _ => None,
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Power { p: f64 },
    Area { delta: f64 },
    TruncQuad { kappa: f64 },
    SubLog { eta: f64, alpha: f64 },
    Quadratic,
    Oscillating { p: f64, beta: f64 },
    Spike(Box<Spike>),
    Truncation {
        base: Box<Integrand>,
        kappa: f64,
        value: f64,
        slope: f64,
    },
    Regularized { base: Box<Integrand> },
}

/// Immutable integrand with its declared metadata.
#[derive(Debug, Clone)]
pub struct Integrand {
    kind: Kind,
    spec: IntegrandSpec,
    /// Threshold beyond which the structural conditions are claimed.
    pub t0: f64,
    /// `lim f(t)/t` when finite.
    pub recession_slope: Option<f64>,
    pub closed_form_vortex_energy: Option<f64>,
    /// Decay rate of `f(e^x)/e^{2x}` in `x`: exponential rate for most
    /// families, algebraic exponent for `sublog`, zero when the tail diverges.
    pub decay_hint: Option<f64>,
}

impl fmt::Display for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", label(&self.spec))
    }
}

fn label(spec: &IntegrandSpec) -> String {
    let params: Vec<String> = spec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    match &spec.base {
        Some(b) => format!("{}[{}]({})", spec.family, label(b), params.join(",")),
        None => format!("{}({})", spec.family, params.join(",")),
    }
}

fn check_open(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if v.is_finite() && v > lo && v < hi {
        Ok(())
    } else {
        Err(Error::range(name, v, &format!("must lie in ({lo}, {hi})")))
    }
}

impl Integrand {
    pub fn from_spec(spec: &IntegrandSpec) -> Result<Self> {
        match canonical_family(&spec.family)? {
            "power" => Self::power(spec.get("p")?),
            "area" => Self::area(spec.get("delta")?),
            "trunc" => Self::truncated_quadratic(spec.get("kappa")?),
            "sublog" => Self::sublog(
                spec.get("eta")?,
                spec.params.get("alpha").copied().unwrap_or(2.0),
            ),
            "quadratic" => Ok(Self::quadratic()),
            "oscillating" => Self::oscillating(spec.get("p")?, spec.get("beta")?),
            "spike" => Self::spike(spec.get("p")?),
            "truncate" => {
                let base = spec
                    .base
                    .as_ref()
                    .ok_or_else(|| Error::MissingParam("base".into()))?;
                Self::from_spec(base)?.truncate(spec.get("kappa")?)
            }
            "regularize" => {
                let base = spec
                    .base
                    .as_ref()
                    .ok_or_else(|| Error::MissingParam("base".into()))?;
                Self::from_spec(base)?.regularize()
            }
            _ => unreachable!(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: IntegrandSpec = serde_json::from_str(text)?;
        Self::from_spec(&spec)
    }

    /// `t^p/p` for `p ∈ (1, 2)`.
    pub fn power(p: f64) -> Result<Self> {
        check_open("p", p, 1.0, 2.0)?;
        Ok(Integrand {
            kind: Kind::Power { p },
            spec: IntegrandSpec::new("power", &[("p", p)]),
            t0: 0.0,
            recession_slope: None,
            closed_form_vortex_energy: Some(2.0 / ((2.0 - p) * p)),
            decay_hint: Some(2.0 - p),
        })
    }

    /// Area-type integrand `(√(1+δ²t²) − 1)/δ²`.
    pub fn area(delta: f64) -> Result<Self> {
        check_open("delta", delta, 0.0, f64::INFINITY)?;
        let f1 = 1.0 / ((1.0 + delta * delta).sqrt() + 1.0);
        Ok(Integrand {
            kind: Kind::Area { delta },
            spec: IntegrandSpec::new("area", &[("delta", delta)]),
            t0: 0.0,
            recession_slope: Some(1.0 / delta),
            closed_form_vortex_energy: Some(f1 + (1.0 / delta).asinh()),
            decay_hint: Some(1.0),
        })
    }

    /// `t²/2` below `κ`, continued affinely with slope `κ`.
    pub fn truncated_quadratic(kappa: f64) -> Result<Self> {
        check_open("kappa", kappa, 0.0, f64::INFINITY)?;
        let v = if kappa >= 1.0 {
            kappa.ln() + 1.5
        } else {
            2.0 * kappa - 0.5 * kappa * kappa
        };
        Ok(Integrand {
            kind: Kind::TruncQuad { kappa },
            spec: IntegrandSpec::new("trunc", &[("kappa", kappa)]),
            t0: 0.0,
            recession_slope: Some(kappa),
            closed_form_vortex_energy: Some(v),
            decay_hint: Some(1.0),
        })
    }

    /// `t²/(2(1+η ln t)^α)` for `t ≥ 1`, continued below 1 by the C¹ convex
    /// power `t^{2−αη}/2`. Requires `α > 1`, `η > 0`, `αη ≤ 1/2`.
    pub fn sublog(eta: f64, alpha: f64) -> Result<Self> {
        check_open("alpha", alpha, 1.0, f64::INFINITY)?;
        check_open("eta", eta, 0.0, f64::INFINITY)?;
        if alpha * eta > 0.5 {
            return Err(Error::range("eta", eta, "alpha*eta must not exceed 1/2"));
        }
        Ok(Integrand {
            kind: Kind::SubLog { eta, alpha },
            spec: IntegrandSpec::new("sublog", &[("alpha", alpha), ("eta", eta)]),
            t0: 0.0,
            recession_slope: None,
            closed_form_vortex_energy: Some(1.0 / ((alpha - 1.0) * eta)),
            decay_hint: Some(alpha),
        })
    }

    /// The Dirichlet integrand `t²/2`; its vortex energy diverges.
    pub fn quadratic() -> Self {
        Integrand {
            kind: Kind::Quadratic,
            spec: IntegrandSpec::new("quadratic", &[]),
            t0: 0.0,
            recession_slope: None,
            closed_form_vortex_energy: None,
            decay_hint: Some(0.0),
        }
    }

    /// `t^p/p · (1 + sin(p ln t)/β)`, a Young function whose `f/t²` is not
    /// monotone.
    pub fn oscillating(p: f64, beta: f64) -> Result<Self> {
        check_open("p", p, 1.0, 2.0)?;
        if !(beta.is_finite() && beta >= 5.0) {
            return Err(Error::range("beta", beta, "must be at least 5"));
        }
        Ok(Integrand {
            kind: Kind::Oscillating { p, beta },
            spec: IntegrandSpec::new("oscillating", &[("beta", beta), ("p", p)]),
            t0: 0.0,
            recession_slope: None,
            closed_form_vortex_energy: None,
            decay_hint: Some(2.0 - p),
        })
    }

    /// `f(t) = ∫_0^t g(s) s ds` with `g = s^{p−2}` plus hat-shaped spikes at
    /// every integer `k ≥ 3`, so that `f'/t` is not monotone.
    pub fn spike(p: f64) -> Result<Self> {
        check_open("p", p, 1.0, 2.0)?;
        let lhs = (p - 1.0) / (2.0 - p);
        let rhs = 2.0 * (1.0 + 3f64.powf(-p)).powf(3.0 - p);
        if lhs < rhs {
            return Err(Error::range("p", p, "spike family is convex only for p above about 1.706"));
        }
        Ok(Integrand {
            kind: Kind::Spike(Box::new(Spike::new(p))),
            spec: IntegrandSpec::new("spike", &[("p", p)]),
            t0: 0.0,
            recession_slope: None,
            closed_form_vortex_energy: None,
            decay_hint: Some(2.0 - p),
        })
    }

    /// `T_κ f`: equal to `f` on `[0, κ]`, affine with slope `f'₊(κ)` after.
    pub fn truncate(&self, kappa: f64) -> Result<Self> {
        check_open("kappa", kappa, 0.0, f64::INFINITY)?;
        let value = self.value(kappa);
        let slope = self.right_derivative(kappa);
        if !(value.is_finite() && slope.is_finite()) {
            return Err(Error::range("kappa", kappa, "f or f' not finite at kappa"));
        }
        let mut spec = IntegrandSpec::new("truncate", &[("kappa", kappa)]);
        spec.base = Some(Box::new(self.spec.clone()));
        Ok(Integrand {
            kind: Kind::Truncation {
                base: Box::new(self.clone()),
                kappa,
                value,
                slope,
            },
            spec,
            t0: self.t0,
            recession_slope: Some(slope),
            closed_form_vortex_energy: None,
            decay_hint: Some(1.0),
        })
    }

    /// `f̄(t) = ∫_0^t 2f(s)/s ds`.
    pub fn regularize(&self) -> Result<Self> {
        let report = check_dec2_natural(self, &default_grid(self.t0));
        if !report.holds {
            return Err(Error::Precondition(format!(
                "{self} does not have f(t)/t^2 nonincreasing"
            )));
        }
        let mut spec = IntegrandSpec::new("regularize", &[]);
        spec.base = Some(Box::new(self.spec.clone()));
        let (closed, recession, hint) = match self.kind {
            Kind::Power { p } => (Some(4.0 / ((2.0 - p) * p * p)), None, Some(2.0 - p)),
            Kind::Quadratic => (None, None, Some(0.0)),
            _ => (None, None, self.decay_hint),
        };
        let out = Integrand {
            kind: Kind::Regularized {
                base: Box::new(self.clone()),
            },
            spec,
            t0: self.t0,
            recession_slope: recession,
            closed_form_vortex_energy: closed,
            decay_hint: hint,
        };
        if !out.value(1.0).is_finite() {
            return Err(Error::QuadratureFailure("f(s)/s not integrable at 0".into()));
        }
        Ok(out)
    }

    pub fn spec(&self) -> &IntegrandSpec {
        &self.spec
    }

    pub fn family(&self) -> &str {
        &self.spec.family
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Power { p } => t.powf(*p) / p,
            Kind::Area { delta } => t * t / ((1.0 + delta * delta * t * t).sqrt() + 1.0),
            Kind::TruncQuad { kappa } => {
                if t < *kappa {
                    0.5 * t * t
                } else {
                    kappa * (t - 0.5 * kappa)
                }
            }
            Kind::SubLog { eta, alpha } => {
                if t < 1.0 {
                    0.5 * t.powf(2.0 - alpha * eta)
                } else {
                    0.5 * t * t / (1.0 + eta * t.ln()).powf(*alpha)
                }
            }
            Kind::Quadratic => 0.5 * t * t,
            Kind::Oscillating { p, beta } => t.powf(*p) / p * (1.0 + (p * t.ln()).sin() / beta),
            Kind::Spike(s) => s.value(t),
            Kind::Truncation {
                base,
                kappa,
                value,
                slope,
            } => {
                if t <= *kappa {
                    base.value(t)
                } else {
                    value + slope * (t - kappa)
                }
            }
            Kind::Regularized { base } => match base.kind {
                Kind::Power { p } => 2.0 * t.powf(p) / (p * p),
                Kind::Quadratic => 0.5 * t * t,
                Kind::TruncQuad { kappa } => {
                    if t <= kappa {
                        0.5 * t * t
                    } else {
                        0.5 * kappa * kappa + 2.0 * kappa * (t - kappa) - kappa * kappa * (t / kappa).ln()
                    }
                }
                _ => t * t * self.ratio_log(t.ln()),
            },
        }
    }

    /// Right derivative `f'₊(t)`, from analytic piecewise formulas.
    pub fn right_derivative(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Power { p } => {
                if t == 0.0 {
                    0.0
                } else {
                    t.powf(p - 1.0)
                }
            }
            Kind::Area { delta } => t / (1.0 + delta * delta * t * t).sqrt(),
            Kind::TruncQuad { kappa } => t.min(*kappa),
            Kind::SubLog { eta, alpha } => {
                if t == 0.0 {
                    0.0
                } else if t < 1.0 {
                    let q = 2.0 - alpha * eta;
                    0.5 * q * t.powf(q - 1.0)
                } else {
                    let x = 1.0 + eta * t.ln();
                    t / x.powf(*alpha) * (1.0 - 0.5 * alpha * eta / x)
                }
            }
            Kind::Quadratic => t,
            Kind::Oscillating { p, beta } => {
                if t == 0.0 {
                    0.0
                } else {
                    t.powf(p - 1.0) * (1.0 + SQRT_2 / beta * (p * t.ln() + FRAC_PI_4).sin())
                }
            }
            Kind::Spike(s) => {
                if t == 0.0 {
                    0.0
                } else {
                    t * s.g(t)
                }
            }
            Kind::Truncation {
                base, kappa, slope, ..
            } => {
                if t < *kappa {
                    base.right_derivative(t)
                } else {
                    *slope
                }
            }
            Kind::Regularized { base } => {
                if t == 0.0 {
                    2.0 * base.right_derivative(0.0)
                } else {
                    2.0 * base.value(t) / t
                }
            }
        }
    }

    /// `f(e^x)/e^{2x}`, evaluated without forming `e^x` where that would
    /// overflow.
    pub fn ratio_log(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Power { p } => ((p - 2.0) * x).exp() / p,
            Kind::Area { delta } => {
                let w = (delta.ln() + x).exp();
                1.0 / ((1.0 + w * w).sqrt() + 1.0)
            }
            Kind::TruncQuad { kappa } => {
                if x < kappa.ln() {
                    0.5
                } else {
                    let e = (-x).exp();
                    kappa * e - 0.5 * kappa * kappa * e * e
                }
            }
            Kind::SubLog { eta, alpha } => {
                if x < 0.0 {
                    0.5 * (-alpha * eta * x).exp()
                } else {
                    0.5 / (1.0 + eta * x).powf(*alpha)
                }
            }
            Kind::Quadratic => 0.5,
            Kind::Oscillating { p, beta } => ((p - 2.0) * x).exp() / p * (1.0 + (p * x).sin() / beta),
            Kind::Spike(s) => s.ratio_log(x),
            Kind::Truncation {
                base,
                kappa,
                value,
                slope,
            } => {
                if x <= kappa.ln() {
                    base.ratio_log(x)
                } else {
                    let e = (-x).exp();
                    (value - slope * kappa) * e * e + slope * e
                }
            }
            Kind::Regularized { base } => match base.kind {
                Kind::Power { p } => 2.0 * ((p - 2.0) * x).exp() / (p * p),
                Kind::Quadratic => 0.5,
                Kind::TruncQuad { kappa } if x > kappa.ln() => {
                    let e = (-x).exp();
                    let k2 = kappa * kappa;
                    (0.5 * k2 - 2.0 * k2 - k2 * (x - kappa.ln())) * e * e + 2.0 * kappa * e
                }
                Kind::TruncQuad { .. } => 0.5,
                _ => {
                    // f̄(e^x)/e^{2x} = 2∫_0^∞ ratio(x−z) e^{−2z} dz
                    let inner = |z: f64| 2.0 * base.ratio_log(x - z) * (-2.0 * z).exp();
                    let breaks: Vec<f64> = base.kinks().iter().map(|k| x - k.ln()).collect();
                    quadrature::integrate_half_line(&inner, 0.0, &breaks, 1e-14)
                        .map(|e| e.value)
                        .unwrap_or(f64::NAN)
                }
            },
        }
    }

    /// Points where `f'` is continuous but `f''` jumps (or worse).
    pub fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            Kind::TruncQuad { kappa } => vec![*kappa],
            Kind::SubLog { .. } => vec![1.0],
            Kind::Truncation { base, kappa, .. } => {
                let mut k: Vec<f64> = base.kinks().into_iter().filter(|x| x < kappa).collect();
                k.push(*kappa);
                k
            }
            Kind::Regularized { base } => base.kinks(),
            Kind::Spike(_) => (3..12)
                .flat_map(|k| {
                    let k = k as f64;
                    let r = k.powf(1.0 - self.spec.params["p"]);
                    [k, k + 0.5 * r, k + r]
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Right derivative with each kink of a truncation blended over
    /// `[κ−ε, κ+ε]` so the result is C¹. The energy itself is never smoothed.
    pub fn smoothed_derivative(&self, t: f64, eps_rel: f64) -> f64 {
        let kappa = match &self.kind {
            Kind::TruncQuad { kappa } => *kappa,
            Kind::Truncation { kappa, .. } => *kappa,
            _ => return self.right_derivative(t),
        };
        let eps = eps_rel * kappa;
        if eps <= 0.0 || (t - kappa).abs() >= eps {
            return self.right_derivative(t);
        }
        let a = kappa - eps;
        let da = self.right_derivative(a);
        let c = (self.right_derivative(kappa) - da) / eps;
        let s = t - a;
        da + c * s - c * s * s / (4.0 * eps)
    }
}

/// Precomputed data for the spike family.
#[derive(Debug, Clone)]
struct Spike {
    p: f64,
    /// `prefix[n]` = total mass `∫ spike_k(s) s ds` of spikes `k = 3..n+2`.
    prefix: Vec<f64>,
    total: f64,
}

const SPIKE_DIRECT: usize = 1000;

impl Spike {
    fn new(p: f64) -> Self {
        let mut prefix = Vec::with_capacity(SPIKE_DIRECT + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for k in 3..3 + SPIKE_DIRECT {
            acc += Self::full(p, k as f64);
            prefix.push(acc);
        }
        let m = (3 + SPIKE_DIRECT) as f64;
        let total = acc
            + 0.5 * (2.0 - p) * zeta_tail(p, m, f64::INFINITY)
            + 0.25 * (2.0 - p) * zeta_tail(2.0 * p, m, f64::INFINITY);
        Spike { p, prefix, total }
    }

    fn full(p: f64, k: f64) -> f64 {
        0.5 * (2.0 - p) * k.powf(-p) + 0.25 * (2.0 - p) * k.powf(-2.0 * p)
    }

    /// Mass of spikes `3..=n`.
    fn through(&self, n: f64) -> f64 {
        if n < 3.0 {
            return 0.0;
        }
        let idx = (n - 2.0) as usize;
        if idx <= SPIKE_DIRECT {
            return self.prefix[idx];
        }
        let p = self.p;
        let m = (3 + SPIKE_DIRECT) as f64;
        self.prefix[SPIKE_DIRECT]
            + 0.5 * (2.0 - p) * zeta_tail(p, m, n)
            + 0.25 * (2.0 - p) * zeta_tail(2.0 * p, m, n)
    }

    fn partial(&self, k: f64, t: f64) -> f64 {
        let p = self.p;
        let a = 2.0 * (2.0 - p) / (k * k);
        let r = k.powf(1.0 - p);
        let u = (t - k) / r;
        if u >= 1.0 {
            return Self::full(p, k);
        }
        let (h1, h2) = if u < 0.5 {
            (0.5 * u * u, u * u * u / 3.0)
        } else {
            (u - 0.5 * u * u - 0.25, 0.5 * u * u - u * u * u / 3.0 - 1.0 / 24.0)
        };
        a * r * (k * h1 + r * h2)
    }

    fn spikes_to(&self, t: f64) -> f64 {
        if t < 3.0 {
            return 0.0;
        }
        if t > 1e15 {
            return self.total;
        }
        let k = t.floor();
        self.through(k - 1.0) + self.partial(k, t)
    }

    fn value(&self, t: f64) -> f64 {
        t.powf(self.p) / self.p + self.spikes_to(t)
    }

    fn ratio_log(&self, x: f64) -> f64 {
        let base = ((self.p - 2.0) * x).exp() / self.p;
        if x < 3f64.ln() {
            return base;
        }
        base + self.spikes_to(x.exp()) * (-2.0 * x).exp()
    }

    fn g(&self, t: f64) -> f64 {
        let p = self.p;
        let mut g = t.powf(p - 2.0);
        if t >= 3.0 {
            let k = t.floor();
            let r = k.powf(1.0 - p);
            let u = (t - k) / r;
            let h = if u < 0.5 {
                u
            } else if u <= 1.0 {
                1.0 - u
            } else {
                0.0
            };
            g += 2.0 * (2.0 - p) / (k * k) * h;
        }
        g
    }
}

/// `Σ_{k=m}^{n} k^{−s}` for integer `m`, by Euler–Maclaurin with two
/// Bernoulli corrections. Accurate to ~1e-18 for `m ≥ 1000`, `s > 1`.
fn zeta_tail(s: f64, m: f64, n: f64) -> f64 {
    let f = |x: f64| x.powf(-s);
    let d1 = |x: f64| -s * x.powf(-s - 1.0);
    let d3 = |x: f64| -s * (s + 1.0) * (s + 2.0) * x.powf(-s - 3.0);
    if n.is_infinite() {
        m.powf(1.0 - s) / (s - 1.0) + 0.5 * f(m) - d1(m) / 12.0 + d3(m) / 720.0
    } else {
        if n < m {
            return 0.0;
        }
        (m.powf(1.0 - s) - n.powf(1.0 - s)) / (s - 1.0) + 0.5 * (f(m) + f(n))
            + (d1(n) - d1(m)) / 12.0
            - (d3(n) - d3(m)) / 720.0
    }
}

/// Grid outcome for the structural conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dec2Report {
    pub holds: bool,
    pub witness: Option<(f64, f64)>,
}

const DEC2_TOL: f64 = 1e-10;

/// 2048 log-spaced points on `[max(t0, 1e-6), 1e6]`.
pub fn default_grid(t0: f64) -> Vec<f64> {
    log_grid(t0.max(1e-6), 1e6, 2048)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `f(t)/t²` nonincreasing across consecutive grid points, relative tolerance 1e-10.
pub fn check_dec2_natural(f: &Integrand, grid: &[f64]) -> Dec2Report {
    let q: Vec<f64> = grid.iter().map(|&t| f.ratio_log(t.ln())).collect();
    for i in 1..grid.len() {
        if q[i] > q[i - 1] * (1.0 + DEC2_TOL) + f64::MIN_POSITIVE {
            return Dec2Report {
                holds: false,
                witness: Some((grid[i - 1], grid[i])),
            };
        }
    }
    Dec2Report {
        holds: true,
        witness: None,
    }
}

/// `s ↦ f(√s)` concave: chord slopes over the squared grid nonincreasing.
pub fn check_dec2_controlled(f: &Integrand, grid: &[f64]) -> Dec2Report {
    let slopes: Vec<(f64, f64, f64)> = grid
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            ((f.value(b) - f.value(a)) / ((b - a) * (b + a)), a, b)
        })
        .collect();
    for i in 1..slopes.len() {
        if slopes[i].0 > slopes[i - 1].0 * (1.0 + DEC2_TOL) + f64::MIN_POSITIVE {
            return Dec2Report {
                holds: false,
                witness: Some((slopes[i].1, slopes[i].2)),
            };
        }
    }
    Dec2Report {
        holds: true,
        witness: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YoungReport {
    pub zero_at_origin: bool,
    pub monotone: bool,
    pub midpoint_convex: bool,
}

impl YoungReport {
    pub fn ok(&self) -> bool {
        self.zero_at_origin && self.monotone && self.midpoint_convex
    }
}

/// `f(0) = 0`, nondecreasing and midpoint convex on the grid, relative tolerance 1e-12.
pub fn check_young(f: &Integrand, grid: &[f64]) -> YoungReport {
    let tol = 1e-12;
    let v: Vec<f64> = grid.iter().map(|&t| f.value(t)).collect();
    let monotone = v.windows(2).all(|w| w[1] >= w[0] * (1.0 - tol));
    let midpoint_convex = grid.windows(2).zip(v.windows(2)).all(|(t, fv)| {
        let mid = f.value(0.5 * (t[0] + t[1]));
        mid <= 0.5 * (fv[0] + fv[1]) * (1.0 + tol)
    });
    YoungReport {
        zero_at_origin: f.value(0.0) == 0.0,
        monotone,
        midpoint_convex,
    }
}

/// Smallest `C` with `f(t) ≤ C(1+t²)` on the grid.
pub fn fit_growth_constant(f: &Integrand, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&t| f.value(t) / (1.0 + t * t))
        .fold(0.0, f64::max)
}

/// A family of integrands indexed by a sequence of parameter values tending
/// to the quadratic limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySchedule {
    pub family: String,
    pub params: Vec<f64>,
    /// Fixed secondary parameters (e.g. `alpha` for `sublog`).
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
}

impl FamilySchedule {
    pub fn new(family: &str, params: Vec<f64>) -> Result<Self> {
        let family = canonical_family(family)?;
        if primary_param(family).is_none() || family == "truncate" {
            return Err(Error::UnknownFamily(format!("{family} has no schedule")));
        }
        Ok(FamilySchedule {
            family: family.to_string(),
            params,
            fixed: BTreeMap::new(),
        })
    }

    /// Schedules whose tail approaches `t²/2`.
    pub fn standard(family: &str) -> Result<Self> {
        let family = canonical_family(family)?;
        let params = match family {
            "power" => vec![1.5, 1.9, 1.99, 1.999],
            "area" => vec![1e-1, 1e-2, 1e-3, 1e-4],
            "trunc" => vec![1e1, 1e2, 1e3, 1e4],
            "sublog" => vec![1e-1, 1e-2, 1e-3],
            other => return Err(Error::UnknownFamily(format!("{other} has no standard schedule"))),
        };
        Self::new(family, params)
    }

    pub fn spec(&self, i: usize) -> IntegrandSpec {
        let key = primary_param(&self.family).expect("validated at construction");
        let mut spec = IntegrandSpec::new(&self.family, &[(key, self.params[i])]);
        for (k, v) in &self.fixed {
            spec.params.insert(k.clone(), *v);
        }
        spec
    }

    pub fn integrand(&self, i: usize) -> Result<Integrand> {
        Integrand::from_spec(&self.spec(i))
    }

    pub fn integrands(&self) -> Result<Vec<Integrand>> {
        (0..self.params.len()).map(|i| self.integrand(i)).collect()
    }

    pub fn tail(&self) -> Result<Integrand> {
        self.integrand(self.params.len() - 1)
    }

    /// `sup_{t∈grid} |f_n(t) − t²/2|` for each member.
    pub fn sup_errors(&self, grid: &[f64]) -> Result<Vec<f64>> {
        self.integrands()?
            .iter()
            .map(|f| {
                Ok(grid
                    .iter()
                    .map(|&t| (f.value(t) - 0.5 * t * t).abs())
                    .fold(0.0, f64::max))
            })
            .collect()
    }

    /// 101 uniform points on `[0, 10]`.
    pub fn test_grid() -> Vec<f64> {
        (0..=100).map(|i| i as f64 * 0.1).collect()
    }
}
