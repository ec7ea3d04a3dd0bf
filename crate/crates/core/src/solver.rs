//! Minimization of `Σ_T area(T)·f(|Du|_T)` over circle-valued P1 fields with
//! a fixed boundary trace.
//!
//! Nodal values are unit vectors in ℝ². Descent directions are projected onto
//! each node's tangent line and steps are retracted by renormalization.
//! Directions follow Polak–Ribière+ conjugate gradients with steepest-descent
//! restarts; step lengths come from Armijo backtracking.
//!
//! Element loops run in parallel. Energies are summed by a pairwise tree over
//! triangle index and gradients are gathered per node in a fixed order, so
//! results do not depend on the number of threads.

use crate::error::{Error, Result};
use crate::geometry::{self, Point};
use crate::integrand::Integrand;
use crate::mesh::{boundary_trace, TriMesh};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Nodal unit vectors on a mesh, with the boundary frozen.
#[derive(Debug, Clone)]
pub struct CircleField {
    pub mesh: Arc<TriMesh>,
    pub values: Vec<Point>,
    pub fixed: Vec<bool>,
}

impl CircleField {
    /// Constant field `(cos φ, sin φ)`; boundary frozen.
    pub fn constant(mesh: Arc<TriMesh>, phase: f64) -> Self {
        let n = mesh.n_vertices();
        let fixed = (0..n).map(|v| mesh.is_boundary(v)).collect();
        CircleField {
            values: vec![[phase.cos(), phase.sin()]; n],
            fixed,
            mesh,
        }
    }

    /// Wraps nodal values, normalizing them and freezing the boundary.
    pub fn from_values(mesh: Arc<TriMesh>, values: Vec<Point>) -> Result<Self> {
        if values.len() != mesh.n_vertices() {
            return Err(Error::Precondition(format!(
                "{} nodal values for {} vertices",
                values.len(),
                mesh.n_vertices()
            )));
        }
        let values = values
            .into_iter()
            .map(|u| {
                let n = geometry::norm(u);
                if n > 0.0 && n.is_finite() {
                    Ok([u[0] / n, u[1] / n])
                } else {
                    Err(Error::Precondition("zero or non-finite nodal vector".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let fixed = (0..mesh.n_vertices()).map(|v| mesh.is_boundary(v)).collect();
        Ok(CircleField { mesh, values, fixed })
    }

    /// Largest deviation of a nodal norm from 1.
    pub fn unit_defect(&self) -> f64 {
        self.values
            .iter()
            .map(|u| (geometry::norm(*u) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `|Du|_T` for every triangle.
    pub fn gradient_norms(&self) -> Vec<f64> {
        let mesh = &*self.mesh;
        (0..mesh.n_triangles())
            .into_par_iter()
            .map(|k| jacobian(mesh, &self.values, k).1)
            .collect()
    }
}

/// Element Jacobian `Du` (rows: components, columns: x/y) and its norm.
#[inline]
fn jacobian(mesh: &TriMesh, values: &[Point], k: usize) -> ([[f64; 2]; 2], f64) {
    let t = mesh.triangles[k];
    let g = mesh.hat_gradients(k);
    // differences against corner 0 keep constant fields exactly flat
    let u0 = values[t[0]];
    let mut d = [[0.0; 2]; 2];
    for i in 1..3 {
        let u = geometry::sub(values[t[i]], u0);
        for c in 0..2 {
            d[c][0] += u[c] * g[i][0];
            d[c][1] += u[c] * g[i][1];
        }
    }
    let n = (d[0][0] * d[0][0] + d[0][1] * d[0][1] + d[1][0] * d[1][0] + d[1][1] * d[1][1]).sqrt();
    (d, n)
}

/// Pairwise (tree) summation; the association order depends only on the length.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 16 {
        return x.iter().sum();
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}

fn energy_of(mesh: &TriMesh, values: &[Point], f: &Integrand) -> f64 {
    let per: Vec<f64> = (0..mesh.n_triangles())
        .into_par_iter()
        .map(|k| mesh.area(k) * f.value(jacobian(mesh, values, k).1))
        .collect();
    pairwise_sum(&per)
}

/// `Σ_T area(T)·f(|Du|_T)`.
pub fn discrete_energy(field: &CircleField, f: &Integrand) -> f64 {
    energy_of(&field.mesh, &field.values, f)
}

/// Dirichlet energy `½Σ_T area(T)·|Du|_T²`.
pub fn dirichlet_energy(field: &CircleField) -> f64 {
    discrete_energy(field, &Integrand::quadratic())
}

fn gradient_of(mesh: &TriMesh, values: &[Point], fixed: &[bool], f: &Integrand, eps: f64) -> Vec<Point> {
    let contrib: Vec<[Point; 3]> = (0..mesh.n_triangles())
        .into_par_iter()
        .map(|k| {
            let (d, t) = jacobian(mesh, values, k);
            if t == 0.0 {
                return [[0.0; 2]; 3];
            }
            let w = mesh.area(k) * f.smoothed_derivative(t, eps) / t;
            let g = mesh.hat_gradients(k);
            let mut out = [[0.0; 2]; 3];
            for i in 0..3 {
                for c in 0..2 {
                    out[i][c] = w * (d[c][0] * g[i][0] + d[c][1] * g[i][1]);
                }
            }
            out
        })
        .collect();
    (0..mesh.n_vertices())
        .into_par_iter()
        .map(|v| {
            if fixed[v] {
                return [0.0; 2];
            }
            let mut s = [0.0; 2];
            for &(k, l) in mesh.incidence(v) {
                let c = contrib[k as usize][l as usize];
                s[0] += c[0];
                s[1] += c[1];
            }
            let u = values[v];
            let r = s[0] * u[0] + s[1] * u[1];
            [s[0] - r * u[0], s[1] - r * u[1]]
        })
        .collect()
}

/// Euclidean gradient projected onto each node's tangent line; zero on the
/// frozen boundary. Kinks of `f` are blended over `smoothing_eps·κ`.
pub fn energy_gradient(field: &CircleField, f: &Integrand, smoothing_eps: f64) -> Vec<Point> {
    gradient_of(&field.mesh, &field.values, &field.fixed, f, smoothing_eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Relative energy decrease over `window` iterations below which the run
    /// counts as converged.
    pub energy_tol: f64,
    /// Largest nodal displacement of the first trial step.
    pub initial_step: f64,
    pub backtracking: f64,
    pub smoothing_eps: f64,
    pub window: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 20_000,
            energy_tol: 1e-9,
            initial_step: 0.1,
            backtracking: 0.5,
            smoothing_eps: 1e-6,
            window: 50,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 || self.window == 0 {
            return Err(Error::range("max_iters", self.max_iters as f64, "must be positive"));
        }
        for (n, v) in [
            ("energy_tol", self.energy_tol),
            ("initial_step", self.initial_step),
            ("smoothing_eps", self.smoothing_eps),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::range(n, v, "must be positive"));
            }
        }
        if !(self.backtracking > 0.0 && self.backtracking < 1.0) {
            return Err(Error::range("backtracking", self.backtracking, "must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub field: CircleField,
    /// Energy before the first step, then after every accepted step.
    pub energy_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl MinimizeResult {
    pub fn energy(&self) -> f64 {
        *self.energy_trace.last().expect("trace starts with the initial energy")
    }
}

const ARMIJO: f64 = 1e-4;

fn dot_all(a: &[Point], b: &[Point]) -> f64 {
    let per: Vec<f64> = a.iter().zip(b).map(|(x, y)| x[0] * y[0] + x[1] * y[1]).collect();
    pairwise_sum(&per)
}

fn max_norm(a: &[Point]) -> f64 {
    a.iter().map(|x| geometry::norm(*x)).fold(0.0, f64::max)
}

fn retract(values: &[Point], dir: &[Point], alpha: f64, out: &mut [Point]) {
    out.par_iter_mut().enumerate().for_each(|(i, o)| {
        let x = [values[i][0] + alpha * dir[i][0], values[i][1] + alpha * dir[i][1]];
        let n = geometry::norm(x);
        *o = [x[0] / n, x[1] / n];
    });
}

fn project(values: &[Point], v: &mut [Point]) {
    v.par_iter_mut().enumerate().for_each(|(i, d)| {
        let u = values[i];
        let r = d[0] * u[0] + d[1] * u[1];
        d[0] -= r * u[0];
        d[1] -= r * u[1];
    });
}

/// Descends from `field0` until the energy stalls over a window of
/// iterations or `max_iters` is reached.
pub fn minimize(field0: &CircleField, f: &Integrand, config: &SolverConfig) -> Result<MinimizeResult> {
    config.validate()?;
    let mesh = field0.mesh.clone();
    let fixed = field0.fixed.clone();
    let mut u = field0.values.clone();
    let mut trial = u.clone();
    let eps = config.smoothing_eps;

    let mut e = energy_of(&mesh, &u, f);
    let mut trace = vec![e];
    let mut g = gradient_of(&mesh, &u, &fixed, f, eps);
    let mut d: Vec<Point> = g.iter().map(|x| [-x[0], -x[1]]).collect();
    let mut gd = dot_all(&g, &d);
    let mut alpha = config.initial_step / max_norm(&d).max(f64::MIN_POSITIVE);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < config.max_iters {
        if gd == 0.0 {
            converged = true;
            break;
        }
        // Armijo backtracking along d; fall back to steepest descent once.
        let mut accepted = None;
        for attempt in 0..2 {
            let dmax = max_norm(&d);
            let mut a = alpha.min(1.0 / dmax.max(f64::MIN_POSITIVE));
            while a * dmax > 1e-15 {
                retract(&u, &d, a, &mut trial);
                let et = energy_of(&mesh, &trial, f);
                if et <= e + ARMIJO * a * gd {
                    accepted = Some((a, et));
                    break;
                }
                a *= config.backtracking;
            }
            if accepted.is_some() || attempt == 1 {
                break;
            }
            d = g.iter().map(|x| [-x[0], -x[1]]).collect();
            gd = dot_all(&g, &d);
            alpha = config.initial_step / max_norm(&d).max(f64::MIN_POSITIVE);
        }
        let Some((a, et)) = accepted else {
            // The energy can no longer resolve a descent step: stationary to
            // working precision unless the gradient is still sizeable.
            let gnorm2 = -gd;
            let probe = 1e-4 / max_norm(&g).max(f64::MIN_POSITIVE);
            // Elementwise variations below √ε make energy differences rounding noise.
            let flat = (0..mesh.n_triangles())
                .map(|k| jacobian(&mesh, &u, k).1)
                .fold(0.0, f64::max)
                * mesh.max_edge()
                <= 1e-8;
            if flat || probe * gnorm2 <= 1e-10 * e.max(f64::MIN_POSITIVE) {
                converged = true;
                break;
            }
            return Err(Error::LineSearchStall { iteration: iterations });
        };
        std::mem::swap(&mut u, &mut trial);
        e = et;
        trace.push(e);
        iterations += 1;

        let w = config.window;
        if trace.len() > w {
            let old = trace[trace.len() - 1 - w];
            if old - e <= config.energy_tol * e.abs() {
                converged = true;
                break;
            }
        }
        if e == 0.0 {
            converged = true;
            break;
        }

        let g_new = gradient_of(&mesh, &u, &fixed, f, eps);
        let mut g_old = std::mem::take(&mut g);
        project(&u, &mut g_old);
        project(&u, &mut d);
        let gg_old = dot_all(&g_old, &g_old).max(f64::MIN_POSITIVE);
        let diff: Vec<Point> = g_new.iter().zip(&g_old).map(|(x, y)| [x[0] - y[0], x[1] - y[1]]).collect();
        let beta = (dot_all(&g_new, &diff) / gg_old).max(0.0);
        for (di, gi) in d.iter_mut().zip(&g_new) {
            di[0] = -gi[0] + beta * di[0];
            di[1] = -gi[1] + beta * di[1];
        }
        let mut gd_new = dot_all(&g_new, &d);
        if gd_new >= 0.0 {
            d = g_new.iter().map(|x| [-x[0], -x[1]]).collect();
            gd_new = dot_all(&g_new, &d);
        }
        alpha = (a * gd / gd_new.min(-f64::MIN_POSITIVE)).abs() * 2.0;
        g = g_new;
        gd = gd_new;
    }
    Ok(MinimizeResult {
        field: CircleField {
            mesh,
            values: u,
            fixed,
        },
        energy_trace: trace,
        iterations,
        converged,
    })
}

/// Field whose angle at `x` is `Σ d_i·arg(x − c_i) + phase_offset`, with the
/// boundary set to the degree-`Σd_i` trace.
///
/// A center that falls on a vertex is shifted by `h/100` (with a warning).
pub fn initialize_vortex_ansatz(
    mesh: Arc<TriMesh>,
    centers: &[Point],
    degrees: &[i64],
    phase_offset: f64,
) -> Result<CircleField> {
    if centers.len() != degrees.len() {
        return Err(Error::Precondition("centers and degrees differ in length".into()));
    }
    for (i, c) in centers.iter().enumerate() {
        for (j, q) in centers.iter().enumerate().take(i) {
            if c == q {
                return Err(Error::CoincidentPoints(j, i));
            }
        }
    }
    let mut centers = centers.to_vec();
    for c in centers.iter_mut() {
        while mesh.vertices.iter().any(|v| geometry::dist(*v, *c) < 1e-12) {
            // an oblique shift avoids lining the center up with mesh rays
            let shifted = [c[0] + mesh.h / 100.0 * 1f64.cos(), c[1] + mesh.h / 100.0 * 1f64.sin()];
            log::warn!("vortex center {c:?} lies on a mesh vertex; moved to {shifted:?}");
            *c = shifted;
        }
    }
    let total: i64 = degrees.iter().sum();
    let mut values: Vec<Point> = mesh
        .vertices
        .par_iter()
        .map(|x| {
            let mut th = phase_offset;
            for (c, &dg) in centers.iter().zip(degrees) {
                th += dg as f64 * (x[1] - c[1]).atan2(x[0] - c[0]);
            }
            [th.cos(), th.sin()]
        })
        .collect();
    let trace = boundary_trace(&mesh, total, phase_offset);
    for (&v, &val) in trace.vertices.iter().zip(&trace.values) {
        values[v] = val;
    }
    let fixed = (0..mesh.n_vertices()).map(|v| mesh.is_boundary(v)).collect();
    Ok(CircleField { mesh, values, fixed })
}

/// Nodal interpolant of `(x/|x|)^d`, the degree-`d` vortex at the origin.
pub fn interpolated_vortex(mesh: Arc<TriMesh>, degree: i64) -> Result<CircleField> {
    if degree == 0 {
        return Ok(CircleField::constant(mesh, 0.0));
    }
    initialize_vortex_ansatz(mesh, &[[0.0, 0.0]], &[degree], 0.0)
}
