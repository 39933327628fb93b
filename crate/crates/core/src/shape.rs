//! Auxiliary shape parameters: sphericity and moment of inertia per neighbour.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use crate::catalog::GeometrySpec;
use crate::error::{Error, Result};
use crate::vec3::{centroid, Vec3};

/// Relative tolerance of the orientation predicate.
const HULL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct HullResult {
    /// Outward-oriented triangles (indices into the input points).
    pub faces: Vec<[usize; 3]>,
    pub volume: f64,
    pub area: f64,
}

impl HullResult {
    pub fn is_watertight(&self) -> bool {
        let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in &self.faces {
            for e in 0..3 {
                *edges.entry((f[e], f[(e + 1) % 3])).or_insert(0) += 1;
            }
        }
        edges
            .iter()
            .all(|(&(a, b), &n)| n == 1 && edges.get(&(b, a)) == Some(&1))
    }

    /// Number of planar facets after merging coplanar neighbouring triangles.
    pub fn facet_count(&self, points: &[Vec3]) -> usize {
        let normals: Vec<Vec3> = self
            .faces
            .iter()
            .map(|f| face_normal(points, f).normalized())
            .collect();
        let mut parent: Vec<usize> = (0..self.faces.len()).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            for e in 0..3 {
                owner.insert((f[e], f[(e + 1) % 3]), i);
            }
        }
        for (i, f) in self.faces.iter().enumerate() {
            for e in 0..3 {
                if let Some(&j) = owner.get(&(f[(e + 1) % 3], f[e])) {
                    if normals[i].dot(normals[j]) > 1.0 - 1e-9 {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
        }
        (0..self.faces.len())
            .map(|i| find(&mut parent, i))
            .collect::<BTreeSet<_>>()
            .len()
    }
}

fn face_normal(p: &[Vec3], f: &[usize; 3]) -> Vec3 {
    (p[f[1]] - p[f[0]]).cross(p[f[2]] - p[f[0]])
}

/// Convex hull by incremental insertion.
pub fn convex_hull(points: &[Vec3]) -> Result<HullResult> {
    if points.len() < 4 {
        return Err(Error::TooFewVertices {
            required: 4,
            got: points.len(),
        });
    }
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tol = HULL_TOL * scale;

    // initial tetrahedron from extreme points
    let i0 = (0..points.len())
        .min_by(|&a, &b| points[a].x.total_cmp(&points[b].x))
        .unwrap();
    let i1 = (0..points.len())
        .max_by(|&a, &b| {
            (points[a] - points[i0])
                .norm()
                .total_cmp(&(points[b] - points[i0]).norm())
        })
        .unwrap();
    let axis = points[i1] - points[i0];
    if axis.norm() <= tol {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let line_dist = |p: Vec3| axis.cross(p - points[i0]).norm() / axis.norm();
    let i2 = (0..points.len())
        .max_by(|&a, &b| line_dist(points[a]).total_cmp(&line_dist(points[b])))
        .unwrap();
    if line_dist(points[i2]) <= tol {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let n = axis.cross(points[i2] - points[i0]).normalized();
    let plane_dist = |p: Vec3| n.dot(p - points[i0]);
    let i3 = (0..points.len())
        .max_by(|&a, &b| plane_dist(points[a]).abs().total_cmp(&plane_dist(points[b]).abs()))
        .unwrap();
    if plane_dist(points[i3]).abs() <= tol {
        return Err(Error::Degenerate("points are coplanar".into()));
    }

    let interior = centroid(&[points[i0], points[i1], points[i2], points[i3]]);
    let orient = |f: [usize; 3]| -> [usize; 3] {
        if face_normal(points, &f).dot(points[f[0]] - interior) < 0.0 {
            [f[0], f[2], f[1]]
        } else {
            f
        }
    };
    let mut faces: Vec<[usize; 3]> = vec![
        orient([i0, i1, i2]),
        orient([i0, i1, i3]),
        orient([i0, i2, i3]),
        orient([i1, i2, i3]),
    ];

    let above = |f: &[usize; 3], p: Vec3| {
        let nrm = face_normal(points, f);
        nrm.dot(p - points[f[0]]) / nrm.norm()
    };

    let initial = [i0, i1, i2, i3];
    for (pi, &p) in points.iter().enumerate() {
        if initial.contains(&pi) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| above(f, p) > tol).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut visible_edges = BTreeSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for e in 0..3 {
                visible_edges.insert((f[e], f[(e + 1) % 3]));
            }
        }
        let horizon: Vec<(usize, usize)> = visible_edges
            .iter()
            .filter(|&&(a, b)| !visible_edges.contains(&(b, a)))
            .copied()
            .collect();
        let mut next: Vec<[usize; 3]> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        next.extend(horizon.into_iter().map(|(a, b)| [a, b, pi]));
        faces = next;
    }

    let inside = centroid(points);
    let mut volume = 0.0;
    let mut area = 0.0;
    for f in &faces {
        let (a, b, c) = (points[f[0]], points[f[1]], points[f[2]]);
        volume += (a - inside).dot((b - inside).cross(c - inside)) / 6.0;
        area += 0.5 * (b - a).cross(c - a).norm();
    }
    Ok(HullResult {
        faces,
        volume,
        area,
    })
}

/// Surface area of the equal-volume sphere over the hull area.
pub fn sphericity_of(points: &[Vec3]) -> Result<f64> {
    let hull = convex_hull(points)?;
    Ok(PI.cbrt() * (6.0 * hull.volume).powf(2.0 / 3.0) / hull.area)
}

pub fn sphericity(g: &GeometrySpec) -> Result<f64> {
    sphericity_of(&g.vertices)
}

/// Sum of squared neighbour distances from the neighbourhood centroid over k,
/// in units of the nearest such distance.
pub fn moment_per_neighbour_of(points: &[Vec3]) -> f64 {
    let c = centroid(points);
    let sq: Vec<f64> = points.iter().map(|&q| (q - c).norm_squared()).collect();
    let nearest = sq.iter().copied().fold(f64::INFINITY, f64::min);
    sq.iter().sum::<f64>() / (points.len() as f64 * nearest)
}

pub fn moment_per_neighbour(g: &GeometrySpec) -> f64 {
    moment_per_neighbour_of(&g.vertices)
}

/// Unnormalised moment of inertia per neighbour, in the input length units.
pub fn raw_moment_per_neighbour(points: &[Vec3]) -> f64 {
    let c = centroid(points);
    points.iter().map(|&q| (q - c).norm_squared()).sum::<f64>() / points.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_geometry, Catalog, GeometryCode};
    use approx::assert_relative_eq;

    fn cube(a: f64) -> Vec<Vec3> {
        let mut v = Vec::new();
        for x in [0.0, a] {
            for y in [0.0, a] {
                for z in [0.0, a] {
                    v.push(Vec3::new(x, y, z));
                }
            }
        }
        v
    }

    #[test]
    fn cube_volume_and_area() {
        for a in [1.0, 2.5] {
            let pts = cube(a);
            let h = convex_hull(&pts).unwrap();
            assert_relative_eq!(h.volume, a * a * a, max_relative = 1e-12);
            assert_relative_eq!(h.area, 6.0 * a * a, max_relative = 1e-12);
            assert!(h.is_watertight());
            assert_eq!(h.faces.len(), 12);
            assert_eq!(h.facet_count(&pts), 6);
        }
    }

    #[test]
    fn icosahedron_matches_closed_form() {
        let g = build_geometry(GeometryCode::ICO);
        let h = convex_hull(&g.vertices).unwrap();
        // unit circumradius: edge a = 4 / sqrt(10 + 2 sqrt 5)
        let a = 4.0 / (10.0 + 2.0 * 5f64.sqrt()).sqrt();
        let v = 5.0 / 12.0 * (3.0 + 5f64.sqrt()) * a.powi(3);
        let s = 5.0 * 3f64.sqrt() * a * a;
        assert_relative_eq!(h.volume, v, max_relative = 1e-9);
        assert_relative_eq!(h.area, s, max_relative = 1e-9);
        assert_eq!(h.faces.len(), 20);
    }

    #[test]
    fn tetrahedron_faces() {
        let g = build_geometry(GeometryCode::TET);
        let h = convex_hull(&g.vertices).unwrap();
        assert_eq!(h.faces.len(), 4);
        // unit circumradius: edge sqrt(8/3)
        let a = (8.0f64 / 3.0).sqrt();
        assert_relative_eq!(h.volume, a.powi(3) / (6.0 * 2f64.sqrt()), max_relative = 1e-9);
    }

    #[test]
    fn interior_points_are_ignored() {
        let mut pts = cube(1.0);
        pts.push(Vec3::new(0.5, 0.5, 0.5));
        pts.push(Vec3::new(0.5, 0.5, 0.0));
        let h = convex_hull(&pts).unwrap();
        assert_relative_eq!(h.volume, 1.0, max_relative = 1e-12);
        assert!(h.faces.iter().flatten().all(|&i| i < 8));
    }

    #[test]
    fn degenerate_inputs() {
        let flat = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
        ];
        assert!(matches!(convex_hull(&flat), Err(Error::Degenerate(_))));
        assert!(matches!(
            convex_hull(&flat[..3]),
            Err(Error::TooFewVertices { .. })
        ));
    }

    #[test]
    fn every_catalog_hull_is_closed_and_contains_its_vertices() {
        for g in Catalog::new().geometries() {
            let h = convex_hull(&g.vertices).unwrap();
            assert!(h.is_watertight(), "{}", g.code);
            assert!(h.volume > 0.0 && h.area > 0.0);
            for &p in &g.vertices {
                for f in &h.faces {
                    let n = face_normal(&g.vertices, f).normalized();
                    assert!(n.dot(p - g.vertices[f[0]]) <= 1e-9, "{}", g.code);
                }
            }
            let psi = sphericity(g).unwrap();
            assert!(psi > 0.0 && psi < 1.0, "{} {psi}", g.code);
        }
    }

    #[test]
    fn published_anchor_values() {
        use GeometryCode::*;
        let psi = |c| sphericity(&build_geometry(c)).unwrap();
        assert!((psi(ICO) - 0.9393).abs() < 5e-4);
        assert!((psi(TET) - 0.6711).abs() < 5e-4);
        assert!((psi(HDR) - 0.8060).abs() < 5e-4);
        let ik = |c| moment_per_neighbour(&build_geometry(c));
        assert_relative_eq!(ik(FCC), 1.0, max_relative = 1e-12);
        assert_relative_eq!(ik(TET), 1.0, max_relative = 1e-12);
        assert_relative_eq!(ik(BCC), 8.0 / 7.0, max_relative = 1e-12);
    }

    #[test]
    fn raw_moment_scales_quadratically() {
        let g = build_geometry(GeometryCode::BCC);
        let doubled: Vec<Vec3> = g.vertices.iter().map(|&v| v * 2.0).collect();
        assert_relative_eq!(
            raw_moment_per_neighbour(&doubled),
            4.0 * raw_moment_per_neighbour(&g.vertices),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            moment_per_neighbour_of(&doubled),
            moment_per_neighbour(&g),
            max_relative = 1e-12
        );
    }
}
