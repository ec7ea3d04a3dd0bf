//! Topological and energetic read-outs of discrete circle-valued fields.

use crate::error::{Error, Result};
use crate::geometry::{self, Domain, Point};
use crate::integrand::Integrand;
use crate::mesh::{angle_step, discrete_winding};
use crate::scalar::{vortex_energy, DEFAULT_TOL};
use crate::solver::{pairwise_sum, CircleField};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Edge angle differences this close to π are refused.
pub const AMBIGUITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defect {
    pub location: Point,
    pub degree: i64,
    pub triangles: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularitySet {
    pub defects: Vec<Defect>,
    pub total_degree: i64,
    /// Minimal lengths `2π|d_i|`.
    pub lambdas: Vec<f64>,
    pub esg_total: f64,
}

impl SingularitySet {
    pub fn locations(&self) -> Vec<Point> {
        self.defects.iter().map(|d| d.location).collect()
    }

    /// `Σ λ_i²/4π`.
    pub fn singular_energy(&self) -> f64 {
        self.lambdas.iter().map(|l| l * l / (4.0 * PI)).sum()
    }

    /// Nonintersection radius of the defect locations in the unit disk.
    pub fn rho_omega(&self) -> Result<f64> {
        geometry::nonintersection_radius(&self.locations(), &Domain::UnitDisk)
    }
}

/// Winding number of every triangle, from wrapped edge angle steps.
pub fn triangle_windings(field: &CircleField) -> Result<Vec<i64>> {
    let mesh = &*field.mesh;
    (0..mesh.n_triangles())
        .into_par_iter()
        .map(|k| {
            let t = mesh.triangles[k];
            let mut s = 0.0;
            for e in 0..3 {
                let step = angle_step(field.values[t[e]], field.values[t[(e + 1) % 3]]);
                if PI - step.abs() <= AMBIGUITY_TOL {
                    return Err(Error::AmbiguousEdge { triangle: k, edge: e });
                }
                s += step;
            }
            Ok((s / (2.0 * PI)).round() as i64)
        })
        .collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Groups nonzero-winding triangles that share a vertex into defects.
/// Clusters whose windings cancel are dropped.
pub fn detect_singularities(field: &CircleField) -> Result<SingularitySet> {
    let mesh = &*field.mesh;
    let w = triangle_windings(field)?;
    let hot: Vec<usize> = (0..w.len()).filter(|&k| w[k] != 0).collect();

    let mut parent: Vec<usize> = (0..hot.len()).collect();
    let mut owner = vec![usize::MAX; mesh.n_vertices()];
    for (i, &k) in hot.iter().enumerate() {
        for &v in &mesh.triangles[k] {
            if owner[v] == usize::MAX {
                owner[v] = i;
            } else {
                let (a, b) = (find(&mut parent, owner[v]), find(&mut parent, i));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }

    let mut clusters: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, &k) in hot.iter().enumerate() {
        let r = find(&mut parent, i);
        match clusters.iter_mut().find(|(root, _)| *root == r) {
            Some((_, v)) => v.push(k),
            None => clusters.push((r, vec![k])),
        }
    }

    let mut defects = Vec::new();
    for (_, tris) in clusters {
        let degree: i64 = tris.iter().map(|&k| w[k]).sum();
        if degree == 0 {
            continue;
        }
        let mut loc = [0.0; 2];
        let mut area = 0.0;
        for &k in &tris {
            let (a, c) = (mesh.area(k), mesh.barycenter(k));
            loc[0] += a * c[0];
            loc[1] += a * c[1];
            area += a;
        }
        defects.push(Defect {
            location: [loc[0] / area, loc[1] / area],
            degree,
            triangles: tris,
        });
    }
    let total_degree = defects.iter().map(|d| d.degree).sum();
    let lambdas: Vec<f64> = defects.iter().map(|d| 2.0 * PI * d.degree.unsigned_abs() as f64).collect();
    let esg_total = defects.iter().map(|d| PI * d.degree.unsigned_abs() as f64).sum();
    Ok(SingularitySet {
        defects,
        total_degree,
        lambdas,
        esg_total,
    })
}

/// Winding of the frozen boundary trace.
pub fn boundary_degree(field: &CircleField) -> i64 {
    let b: Vec<Point> = field.mesh.boundary.iter().map(|&v| field.values[v]).collect();
    discrete_winding(&b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormFit {
    pub rho_grid: Vec<f64>,
    pub ring_energies: Vec<f64>,
    pub slope: f64,
    /// Estimate of the renormalized energy.
    pub intercept: f64,
    /// Root-mean-square residual of the affine fit.
    pub residual: f64,
    /// `Σ λ_i²/4π`.
    pub slope_target: f64,
}

impl RenormFit {
    pub fn slope_rel_error(&self) -> f64 {
        (self.slope - self.slope_target).abs() / self.slope_target
    }
}

pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let r = (hi / lo).ln();
    (0..n).map(|i| lo * (r * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Default fit window `[max(4h, 0.02), ρ_Ω/2]` with 12 points.
pub fn default_rho_range(h: f64, rho_omega: f64) -> (f64, f64, usize) {
    ((4.0 * h).max(0.02), rho_omega / 2.0, 12)
}

/// Least-squares fit of `E(ρ) ≈ slope·ln(1/ρ) + intercept`.
pub fn fit_ring_energies(rhos: &[f64], energies: &[f64], slope_target: f64) -> Result<RenormFit> {
    if rhos.len() < 2 || rhos.len() != energies.len() {
        return Err(Error::RhoRangeInvalid("need at least two matched samples".into()));
    }
    let n = rhos.len() as f64;
    let x: Vec<f64> = rhos.iter().map(|r| -r.ln()).collect();
    let mx = x.iter().sum::<f64>() / n;
    let my = energies.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx) * (xi - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::RhoRangeInvalid("radii must not all coincide".into()));
    }
    let sxy: f64 = x.iter().zip(energies).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(energies)
        .map(|(xi, yi)| (yi - slope * xi - intercept).powi(2))
        .sum();
    Ok(RenormFit {
        rho_grid: rhos.to_vec(),
        ring_energies: energies.to_vec(),
        slope,
        intercept,
        residual: (ss / n).sqrt(),
        slope_target,
    })
}

/// Per-triangle `f(|Du|)·area(T ∩ B(c, r))`, summed pairwise.
fn weighted_disk_sum(field: &CircleField, dens: &[f64], center: Point, r: f64) -> f64 {
    let mesh = &*field.mesh;
    let per: Vec<f64> = (0..mesh.n_triangles())
        .into_par_iter()
        .map(|k| {
            if dens[k] == 0.0 {
                return 0.0;
            }
            // cheap reject before exact clipping
            let c = mesh.barycenter(k);
            if geometry::dist(c, center) > r + 2.0 * mesh.h * 1.5 {
                return 0.0;
            }
            dens[k] * geometry::triangle_disk_area(mesh.corners(k), center, r)
        })
        .collect();
    pairwise_sum(&per)
}

fn densities(field: &CircleField, f: &Integrand) -> Vec<f64> {
    field.gradient_norms().into_iter().map(|t| f.value(t)).collect()
}

/// `∫_{B(c,r)} f(|Du|)` with exact triangle/disk clipping.
pub fn energy_in_disk(field: &CircleField, f: &Integrand, center: Point, r: f64) -> f64 {
    weighted_disk_sum(field, &densities(field, f), center, r)
}

/// Dirichlet energy outside `∪ B(a_i, ρ)` on a geometric ρ grid, fitted
/// affinely in `ln(1/ρ)`.
pub fn renorm_energy_fit(
    field: &CircleField,
    sing: &SingularitySet,
    rho_min: f64,
    rho_max: f64,
    n_rho: usize,
) -> Result<RenormFit> {
    if sing.defects.is_empty() {
        return Err(Error::RhoRangeInvalid("no defects to excise".into()));
    }
    let h = field.mesh.h;
    let rho_omega = sing.rho_omega()?;
    if !(rho_min >= 4.0 * h * (1.0 - 1e-12)) {
        return Err(Error::RhoRangeInvalid(format!("rho_min {rho_min} below 4h = {}", 4.0 * h)));
    }
    if !(rho_max <= rho_omega / 2.0 * (1.0 + 1e-12)) {
        return Err(Error::RhoRangeInvalid(format!(
            "rho_max {rho_max} above half the nonintersection radius {rho_omega}"
        )));
    }
    if !(rho_min < rho_max) || n_rho < 2 {
        return Err(Error::RhoRangeInvalid(format!("empty range [{rho_min}, {rho_max}] x {n_rho}")));
    }
    let dens: Vec<f64> = field.gradient_norms().into_iter().map(|t| 0.5 * t * t).collect();
    let total = pairwise_sum(
        &dens
            .iter()
            .enumerate()
            .map(|(k, d)| d * field.mesh.area(k))
            .collect::<Vec<_>>(),
    );
    let rhos = geometric_grid(rho_min, rho_max, n_rho);
    let energies: Vec<f64> = rhos
        .par_iter()
        .map(|&r| {
            let inside: f64 = sing
                .defects
                .iter()
                .map(|d| weighted_disk_sum(field, &dens, d.location, r))
                .sum();
            total - inside
        })
        .collect();
    fit_ring_energies(&rhos, &energies, sing.singular_energy())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub rho: f64,
    pub vortex_energy: f64,
    /// `∫_{B(a_i,ρ)} f(|Du|) / 𝒱(f)` per defect.
    pub masses: Vec<f64>,
    pub remainder: f64,
    /// Total normalized energy.
    pub total: f64,
}

/// Normalized energy near each defect and away from all of them.
pub fn defect_masses(field: &CircleField, f: &Integrand, sing: &SingularitySet, rho: f64) -> Result<ConcentrationReport> {
    let rho_omega = sing.rho_omega()?;
    if !(rho > 0.0 && rho < rho_omega) {
        return Err(Error::RhoRangeInvalid(format!(
            "rho {rho} must lie in (0, {rho_omega})"
        )));
    }
    let v = vortex_energy(f, DEFAULT_TOL)?.value;
    let dens = densities(field, f);
    let total = pairwise_sum(
        &dens
            .iter()
            .enumerate()
            .map(|(k, d)| d * field.mesh.area(k))
            .collect::<Vec<_>>(),
    ) / v;
    let masses: Vec<f64> = sing
        .defects
        .iter()
        .map(|d| weighted_disk_sum(field, &dens, d.location, rho) / v)
        .collect();
    let remainder = (total - masses.iter().sum::<f64>()).max(0.0);
    Ok(ConcentrationReport {
        rho,
        vortex_energy: v,
        masses,
        remainder,
        total,
    })
}
