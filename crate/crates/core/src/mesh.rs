//! Triangle meshes of planar domains, P1 gradients and boundary traces.

use crate::error::{Error, Result};
use crate::geometry::{self, orient, Point};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Ratio of the generator's point spacing to the requested edge length `h`.
const SPACING: f64 = 0.9;

/// Vertices, counterclockwise triangles and the boundary loop, plus cached
/// per-triangle P1 data.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<usize>,
    pub h: f64,
    areas: Vec<f64>,
    /// Gradients of the three hat functions on each triangle.
    grads: Vec<[Point; 3]>,
    /// For each vertex, its (triangle, local index) incidences.
    incidence: Vec<Vec<(u32, u8)>>,
    on_boundary: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct MeshFile {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<usize>,
    #[serde(default)]
    h: f64,
}

impl TriMesh {
    /// Builds a mesh, reorienting triangles counterclockwise. Fails on
    /// zero-area triangles.
    pub fn new(vertices: Vec<Point>, mut triangles: Vec<[usize; 3]>, boundary: Vec<usize>, h: f64) -> Result<Self> {
        let n = vertices.len();
        let mut areas = Vec::with_capacity(triangles.len());
        let mut grads = Vec::with_capacity(triangles.len());
        let mut incidence = vec![Vec::new(); n];
        for (k, t) in triangles.iter_mut().enumerate() {
            if t.iter().any(|&i| i >= n) {
                return Err(Error::MeshGenerationFailure(format!("triangle {k} has an out-of-range vertex")));
            }
            let mut o = orient(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            if o < 0.0 {
                t.swap(1, 2);
                o = -o;
            }
            let scale = (0..3)
                .map(|i| geometry::dist(vertices[t[i]], vertices[t[(i + 1) % 3]]))
                .fold(0.0, f64::max);
            if !(o > 1e-12 * scale * scale) {
                return Err(Error::DegenerateTriangle(k));
            }
            let [p0, p1, p2] = [vertices[t[0]], vertices[t[1]], vertices[t[2]]];
            grads.push([
                [(p1[1] - p2[1]) / o, (p2[0] - p1[0]) / o],
                [(p2[1] - p0[1]) / o, (p0[0] - p2[0]) / o],
                [(p0[1] - p1[1]) / o, (p1[0] - p0[0]) / o],
            ]);
            areas.push(0.5 * o);
            for (l, &v) in t.iter().enumerate() {
                incidence[v].push((k as u32, l as u8));
            }
        }
        let mut on_boundary = vec![false; n];
        for &b in &boundary {
            if b >= n {
                return Err(Error::MeshGenerationFailure("boundary vertex out of range".into()));
            }
            on_boundary[b] = true;
        }
        Ok(TriMesh {
            vertices,
            triangles,
            boundary,
            h,
            areas,
            grads,
            incidence,
            on_boundary,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: MeshFile = serde_json::from_str(text)?;
        Self::new(m.vertices, m.triangles, m.boundary, m.h)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&MeshFile {
            vertices: self.vertices.clone(),
            triangles: self.triangles.clone(),
            boundary: self.boundary.clone(),
            h: self.h,
        })?)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn area(&self, tri: usize) -> f64 {
        self.areas[tri]
    }

    pub fn hat_gradients(&self, tri: usize) -> &[Point; 3] {
        &self.grads[tri]
    }

    pub fn incidence(&self, v: usize) -> &[(u32, u8)] {
        &self.incidence[v]
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    pub fn corners(&self, tri: usize) -> [Point; 3] {
        let t = self.triangles[tri];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    pub fn barycenter(&self, tri: usize) -> Point {
        let [a, b, c] = self.corners(tri);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Unique undirected edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |i| (t[i].min(t[(i + 1) % 3]), t[i].max(t[(i + 1) % 3]))))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn max_edge(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&(a, b)| geometry::dist(self.vertices[a], self.vertices[b]))
            .fold(0.0, f64::max)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        let mut worst = 180.0f64;
        for k in 0..self.n_triangles() {
            let p = self.corners(k);
            for i in 0..3 {
                let u = geometry::sub(p[(i + 1) % 3], p[i]);
                let v = geometry::sub(p[(i + 2) % 3], p[i]);
                let ang = geometry::cross(u, v).abs().atan2(geometry::dot(u, v));
                worst = worst.min(ang.to_degrees());
            }
        }
        worst
    }

    /// `|Du|_T` (Frobenius) for a nodal field stored with stride `nu`.
    pub fn element_gradient(&self, field: &[f64], nu: usize, tri: usize) -> Result<f64> {
        if tri >= self.n_triangles() {
            return Err(Error::DegenerateTriangle(tri));
        }
        if !(self.areas[tri] > 0.0) {
            return Err(Error::DegenerateTriangle(tri));
        }
        let t = self.triangles[tri];
        let g = &self.grads[tri];
        let mut s = 0.0;
        for c in 0..nu {
            let mut d = [0.0; 2];
            for i in 0..3 {
                let u = field[t[i] * nu + c];
                d[0] += u * g[i][0];
                d[1] += u * g[i][1];
            }
            s += d[0] * d[0] + d[1] * d[1];
        }
        Ok(s.sqrt())
    }
}

/// Quasi-uniform mesh of the closed unit disk from concentric rings.
///
/// Ring `k` carries a number of points proportional to its radius, rotated
/// by half a step on alternate rings; the innermost ring is a pentagon so the
/// origin lies strictly inside a triangle rather than on a vertex or edge.
pub fn build_disk_mesh(h: f64) -> Result<TriMesh> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::range("h", h, "must lie in (0, 0.5)"));
    }
    let a = SPACING * h;
    let r1 = (5.0 * a / (2.0 * PI)).min(0.3);
    let dr_target = a * 3f64.sqrt() / 2.0;
    let n_rings = (((1.0 - r1) / dr_target).ceil() as usize).max(1) + 1;
    let dr = (1.0 - r1) / (n_rings - 1) as f64;

    let mut pts: Vec<delaunator::Point> = Vec::new();
    let mut boundary = Vec::new();
    for k in 0..n_rings {
        let r = if k + 1 == n_rings { 1.0 } else { r1 + k as f64 * dr };
        let m = if k == 0 {
            5
        } else {
            ((2.0 * PI * r / a).round() as usize).max(6)
        };
        let shift = if k % 2 == 1 { 0.5 } else { 0.0 };
        for j in 0..m {
            let th = 2.0 * PI * (j as f64 + shift) / m as f64 + PI / 2.0;
            if k + 1 == n_rings {
                boundary.push(pts.len());
            }
            pts.push(delaunator::Point {
                x: r * th.cos(),
                y: r * th.sin(),
            });
        }
    }
    let tri = delaunator::triangulate(&pts);
    if tri.triangles.is_empty() {
        return Err(Error::MeshGenerationFailure("empty triangulation".into()));
    }
    let vertices: Vec<Point> = pts.iter().map(|p| [p.x, p.y]).collect();
    let triangles: Vec<[usize; 3]> = tri.triangles.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
    let mesh = TriMesh::new(vertices, triangles, boundary, h)
        .map_err(|e| Error::MeshGenerationFailure(e.to_string()))?;
    let area_err = (mesh.total_area() - PI).abs();
    let polygon_deficit = PI * (2.0 * PI / mesh.boundary.len() as f64).powi(2);
    if area_err > polygon_deficit {
        return Err(Error::MeshGenerationFailure(format!(
            "triangulated area off by {area_err}"
        )));
    }
    Ok(mesh)
}

/// Degree-`d` Dirichlet datum sampled at the boundary vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub degree: i64,
    pub phase_offset: f64,
    /// Boundary vertex indices, matching `values`.
    pub vertices: Vec<usize>,
    pub values: Vec<Point>,
}

impl BoundaryTrace {
    pub fn winding(&self) -> i64 {
        discrete_winding(&self.values)
    }
}

/// Unit vector at angle `d·θ + offset` on each boundary vertex.
pub fn boundary_trace(mesh: &TriMesh, degree: i64, phase_offset: f64) -> BoundaryTrace {
    let values = mesh
        .boundary
        .iter()
        .map(|&v| {
            let p = mesh.vertices[v];
            let th = degree as f64 * p[1].atan2(p[0]) + phase_offset;
            [th.cos(), th.sin()]
        })
        .collect();
    BoundaryTrace {
        degree,
        phase_offset,
        vertices: mesh.boundary.clone(),
        values,
    }
}

/// Wrapped angle from `a` to `b`, in `(−π, π]`.
#[inline]
pub fn angle_step(a: Point, b: Point) -> f64 {
    geometry::cross(a, b).atan2(geometry::dot(a, b))
}

/// Winding number of a closed loop of unit vectors.
pub fn discrete_winding(values: &[Point]) -> i64 {
    let n = values.len();
    let total: f64 = (0..n).map(|i| angle_step(values[i], values[(i + 1) % n])).sum();
    (total / (2.0 * PI)).round() as i64
}
