//! Adaptive Gauss–Kronrod quadrature on finite intervals and on half-lines.
//!
//! Half-line integrals `∫_{x0}^∞ g(x) dx` are split into a short head interval
//! and a tail mapped through `x = x1·e^y`, then integrated over intervals of
//! doubling length in `y`. Functions that decay only algebraically in `x`
//! become exponentially decaying in `y`, and exponentially decaying ones
//! collapse after a few intervals.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [-1, 1] (non-negative half). Odd indices are the
/// 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Largest number of subintervals a single finite adaptive run may create.
const MAX_SUBINTERVALS: usize = 4000;
/// Relative accuracy floor; requests below this are clamped.
const REL_FLOOR: f64 = 1e-14;
/// Upper end of the tail variable `y`; `x1·e^y` overflows shortly after.
const Y_MAX: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// One 21-point Kronrod rule with the embedded 10-point Gauss error estimate.
pub fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`.
///
/// Stops once the summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
/// Returns the best estimate reached if the subdivision budget runs out; the
/// caller compares `abs_error` against its own tolerance.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let rel_tol = rel_tol.max(REL_FLOOR);
    let (v, e) = qk21(f, a, b);
    let mut evals = 21;
    if !v.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, err: e });
    let mut total = v;
    let mut total_err = e;
    while total_err > abs_tol.max(rel_tol * total.abs()) && heap.len() < MAX_SUBINTERVALS {
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = qk21(f, worst.a, mid);
        let (v2, e2) = qk21(f, mid, worst.b);
        evals += 42;
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::QuadratureFailure(format!(
                "non-finite integrand on [{}, {}]",
                worst.a, worst.b
            )));
        }
        heap.push(Piece { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, err: e2 });
        // Re-sum rather than update incrementally to avoid drift.
        total = heap.iter().map(|p| p.value).sum();
        total_err = heap.iter().map(|p| p.err).sum();
    }
    Ok(Estimate {
        value: total,
        abs_error: total_err,
        evaluations: evals,
    })
}

/// Integrates over `[a, b]` split at the given interior breakpoints.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut nodes = vec![lo];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    nodes.extend(inner);
    nodes.push(hi);
    let pieces = (nodes.len() - 1) as f64;
    let mut out = Estimate {
        value: 0.0,
        abs_error: 0.0,
        evaluations: 0,
    };
    for w in nodes.windows(2) {
        let e = integrate(f, w[0], w[1], abs_tol / pieces, rel_tol)?;
        out.value += e.value;
        out.abs_error += e.abs_error;
        out.evaluations += e.evaluations;
    }
    out.value *= sign;
    Ok(out)
}

/// Integrates `g` over `[x0, ∞)`.
///
/// `breaks` lists points where `g` or its derivative jumps. Returns
/// [`Error::Divergent`] when the tail contributions fail to die out before the
/// representable range is exhausted.
pub fn integrate_half_line<G: Fn(f64) -> f64>(
    g: &G,
    x0: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<Estimate> {
    let x1 = x0.max(0.0) + 1.0;
    let mut out = integrate_with_breaks(g, x0, x1, breaks, 0.5 * tol, REL_FLOOR)?;

    let h = |y: f64| {
        let x = x1 * y.exp();
        let v = g(x);
        if v == 0.0 {
            0.0
        } else {
            v * x
        }
    };
    let tail_breaks: Vec<f64> = breaks
        .iter()
        .filter(|&&b| b > x1)
        .map(|&b| (b / x1).ln())
        .collect();

    let mut lo: f64 = 0.0;
    let mut width: f64 = 1.0;
    let mut level = 0;
    let mut quiet_levels = 0;
    loop {
        let hi = (lo + width).min(Y_MAX);
        let budget = 0.5 * tol * 0.5f64.powi(level + 1);
        let e = match integrate_with_breaks(&h, lo, hi, &tail_breaks, budget, REL_FLOOR) {
            Ok(e) => e,
            Err(_) => return Err(Error::Divergent),
        };
        out.value += e.value;
        out.abs_error += e.abs_error;
        out.evaluations += e.evaluations;
        if !out.value.is_finite() {
            return Err(Error::Divergent);
        }
        let edge = h(hi).abs() * (hi - lo);
        if e.value.abs() <= 1e-3 * budget && edge <= 1e-3 * budget {
            quiet_levels += 1;
            if quiet_levels >= 2 {
                break;
            }
        } else {
            quiet_levels = 0;
        }
        if hi >= Y_MAX {
            if e.value.abs() > tol || edge > tol {
                return Err(Error::Divergent);
            }
            break;
        }
        lo = hi;
        width *= 2.0;
        level += 1;
    }
    Ok(out)
}
