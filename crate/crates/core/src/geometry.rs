//! Planar helpers: domains, point-to-boundary distance, and exact clipping of
//! a triangle against a disk.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type Point = [f64; 2];

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

/// Twice the signed area of `(a, b, c)`; positive when counterclockwise.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(sub(b, a), sub(c, a))
}

/// Bounded planar domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    UnitDisk,
    /// Simple polygon, vertices counterclockwise.
    Polygon { vertices: Vec<Point> },
}

impl Domain {
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Domain::UnitDisk => norm(p) < 1.0,
            Domain::Polygon { vertices } => {
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    if (a[1] > p[1]) != (b[1] > p[1]) {
                        let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                        if p[0] < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }

    /// Distance from an interior point to the boundary.
    pub fn boundary_distance(&self, p: Point) -> Result<f64> {
        if !self.contains(p) {
            return Err(Error::PointOutsideDomain(p[0], p[1]));
        }
        Ok(match self {
            Domain::UnitDisk => 1.0 - norm(p),
            Domain::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| segment_distance(p, vertices[i], vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        })
    }

    pub fn area(&self) -> f64 {
        match self {
            Domain::UnitDisk => PI,
            Domain::Polygon { vertices } => {
                let n = vertices.len();
                0.5 * (0..n)
                    .map(|i| cross(vertices[i], vertices[(i + 1) % n]))
                    .sum::<f64>()
            }
        }
    }
}

pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = sub(b, a);
    let len2 = dot(d, d);
    let s = if len2 == 0.0 {
        0.0
    } else {
        (dot(sub(p, a), d) / len2).clamp(0.0, 1.0)
    };
    dist(p, [a[0] + s * d[0], a[1] + s * d[1]])
}

/// `ρ_Ω(a_1..a_k)`: the smallest of all boundary distances and pairwise
/// separations.
pub fn nonintersection_radius(points: &[Point], domain: &Domain) -> Result<f64> {
    let mut rho = f64::INFINITY;
    for (i, &p) in points.iter().enumerate() {
        rho = rho.min(domain.boundary_distance(p)?);
        for (j, &q) in points.iter().enumerate().skip(i + 1) {
            let d = dist(p, q);
            if d == 0.0 {
                return Err(Error::CoincidentPoints(i, j));
            }
            rho = rho.min(d);
        }
    }
    Ok(rho)
}

/// Signed area of `disk(0, r) ∩ triangle(0, a, b)`.
fn origin_wedge_area(a: Point, b: Point, r: f64) -> f64 {
    let sector = |p: Point, q: Point| 0.5 * r * r * cross(p, q).atan2(dot(p, q));
    let d = sub(b, a);
    let qa = dot(d, d);
    if qa == 0.0 {
        return 0.0;
    }
    let qb = dot(a, d);
    let qc = dot(a, a) - r * r;
    let disc = qb * qb - qa * qc;
    if disc <= 0.0 {
        return sector(a, b);
    }
    let sq = disc.sqrt();
    let s1 = ((-qb - sq) / qa).clamp(0.0, 1.0);
    let s2 = ((-qb + sq) / qa).clamp(0.0, 1.0);
    let at = |s: f64| [a[0] + s * d[0], a[1] + s * d[1]];
    let (p1, p2) = (at(s1), at(s2));
    sector(a, p1) + 0.5 * cross(p1, p2) + sector(p2, b)
}

/// Exact area of `triangle(p0, p1, p2) ∩ disk(center, r)`.
pub fn triangle_disk_area(tri: [Point; 3], center: Point, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let v = [sub(tri[0], center), sub(tri[1], center), sub(tri[2], center)];
    let s = origin_wedge_area(v[0], v[1], r) + origin_wedge_area(v[1], v[2], r) + origin_wedge_area(v[2], v[0], r);
    s.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampled_area(tri: [Point; 3], c: Point, r: f64, n: usize) -> f64 {
        // midpoint sampling over the bounding box
        let xs = [tri[0][0], tri[1][0], tri[2][0]];
        let ys = [tri[0][1], tri[1][1], tri[2][1]];
        let (x0, x1) = (xs.iter().cloned().fold(f64::MAX, f64::min), xs.iter().cloned().fold(f64::MIN, f64::max));
        let (y0, y1) = (ys.iter().cloned().fold(f64::MAX, f64::min), ys.iter().cloned().fold(f64::MIN, f64::max));
        let (dx, dy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
        let s = orient(tri[0], tri[1], tri[2]).signum();
        let mut hits = 0usize;
        for i in 0..n {
            for j in 0..n {
                let p = [x0 + (i as f64 + 0.5) * dx, y0 + (j as f64 + 0.5) * dy];
                let inside_t = (0..3).all(|k| s * orient(tri[k], tri[(k + 1) % 3], p) >= 0.0);
                if inside_t && dist(p, c) <= r {
                    hits += 1;
                }
            }
        }
        hits as f64 * dx * dy
    }

    #[test]
    fn clipping_matches_sampling() {
        let cases: [([Point; 3], Point, f64); 6] = [
            ([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [0.2, 0.2], 0.1),
            ([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [0.0, 0.0], 0.5),
            ([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [0.5, 0.5], 0.4),
            ([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [3.0, 3.0], 0.4),
            ([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]], [0.3, 0.3], 5.0),
            ([[-1.0, -0.2], [1.2, 0.1], [0.1, 0.9]], [0.1, -0.1], 0.45),
        ];
        for (tri, c, r) in cases {
            let exact = triangle_disk_area(tri, c, r);
            let approx = sampled_area(tri, c, r, 1500);
            assert!((exact - approx).abs() < 2e-3, "{tri:?} {c:?} {r}: {exact} vs {approx}");
        }
    }

    #[test]
    fn full_and_empty() {
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        assert!((triangle_disk_area(tri, [0.3, 0.3], 10.0) - 0.5).abs() < 1e-14);
        assert_eq!(triangle_disk_area(tri, [5.0, 5.0], 1.0), 0.0);
        // disk strictly inside
        let a = triangle_disk_area([[-5.0, -5.0], [5.0, -5.0], [0.0, 5.0]], [0.0, 0.0], 1.0);
        assert!((a - PI).abs() < 1e-13);
    }

    #[test]
    fn polygon_domain() {
        let sq = Domain::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        };
        assert!((sq.area() - 1.0).abs() < 1e-15);
        assert!((sq.boundary_distance([0.25, 0.5]).unwrap() - 0.25).abs() < 1e-15);
        assert!(sq.boundary_distance([2.0, 0.5]).is_err());
    }

    #[test]
    fn nonintersection_examples() {
        let r = nonintersection_radius(&[[0.5, 0.0], [-0.5, 0.0]], &Domain::UnitDisk).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        let r = nonintersection_radius(&[[0.0, 0.0]], &Domain::UnitDisk).unwrap();
        assert_eq!(r, 1.0);
        assert!(matches!(
            nonintersection_radius(&[[0.1, 0.0], [0.1, 0.0]], &Domain::UnitDisk),
            Err(Error::CoincidentPoints(0, 1))
        ));
    }
}
