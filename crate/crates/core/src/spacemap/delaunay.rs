use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Triangulation {
    /// Counter-clockwise triangles over the input indices.
    pub triangles: Vec<[usize; 3]>,
    /// Undirected edges with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Positive when `p` lies strictly inside the circumcircle of ccw `(a, b, c)`.
pub fn in_circle(a: [f64; 2], b: [f64; 2], c: [f64; 2], p: [f64; 2]) -> f64 {
    let (ax, ay) = (a[0] - p[0], a[1] - p[1]);
    let (bx, by) = (b[0] - p[0], b[1] - p[1]);
    let (cx, cy) = (c[0] - p[0], c[1] - p[1]);
    (ax * ax + ay * ay) * (bx * cy - cx * by) - (bx * bx + by * by) * (ax * cy - cx * ay)
        + (cx * cx + cy * cy) * (ax * by - bx * ay)
}

const GHOST: usize = usize::MAX;

fn conflicts(points: &[[f64; 2]], t: &[usize; 3], p: [f64; 2]) -> bool {
    if t[2] == GHOST {
        let (u, v) = (points[t[0]], points[t[1]]);
        let o = orient(u, v, p);
        let along = (p[0] - u[0]) * (v[0] - u[0]) + (p[1] - u[1]) * (v[1] - u[1]);
        let len2 = (v[0] - u[0]).powi(2) + (v[1] - u[1]).powi(2);
        o > 0.0 || (o == 0.0 && along > 0.0 && along < len2)
    } else {
        in_circle(points[t[0]], points[t[1]], points[t[2]], p) > 0.0
    }
}

/// Bowyer-Watson triangulation with a vertex at infinity closing the hull.
pub fn delaunay_2d(points: &[[f64; 2]]) -> Result<Triangulation> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewVertices { required: 3, got: n });
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("non-finite coordinate".into()));
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for c in 0..2 {
            lo[c] = lo[c].min(p[c]);
            hi[c] = hi[c].max(p[c]);
        }
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let tol = 1e-12 * extent * extent;
    for i in 0..n {
        for j in i + 1..n {
            let d = (points[i][0] - points[j][0]).hypot(points[i][1] - points[j][1]);
            if d <= 1e-12 * extent.max(f64::MIN_POSITIVE) {
                return Err(Error::Degenerate(format!("points {i} and {j} coincide")));
            }
        }
    }
    if extent == 0.0 || (2..n).all(|k| orient(points[0], points[1], points[k]).abs() <= tol) {
        return Err(Error::Degenerate("points are collinear".into()));
    }

    let i2 = (2..n)
        .max_by(|&a, &b| {
            orient(points[0], points[1], points[a])
                .abs()
                .total_cmp(&orient(points[0], points[1], points[b]).abs())
        })
        .unwrap();
    let first = if orient(points[0], points[1], points[i2]) > 0.0 { [0, 1, i2] } else { [1, 0, i2] };
    // hull edges carry ghost triangles (u, v, GHOST) lying to the left of u -> v
    let mut tris: Vec<[usize; 3]> = vec![
        first,
        [first[1], first[0], GHOST],
        [first[2], first[1], GHOST],
        [first[0], first[2], GHOST],
    ];

    for i in (2..n).filter(|&i| i != i2) {
        let p = points[i];
        let (bad, keep): (Vec<[usize; 3]>, Vec<[usize; 3]>) =
            tris.into_iter().partition(|t| conflicts(points, t, p));
        let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in &bad {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        tris = keep;
        for t in &bad {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                if count[&(a.min(b), a.max(b))] == 1 {
                    tris.push(match (a == GHOST, b == GHOST) {
                        (true, _) => [b, i, GHOST],
                        (_, true) => [i, a, GHOST],
                        _ => [a, b, i],
                    });
                }
            }
        }
    }

    tris.retain(|t| t[2] != GHOST);
    for t in &mut tris {
        // smallest index first, orientation kept
        let r = (0..3).min_by_key(|&e| t[e]).unwrap();
        t.rotate_left(r);
    }
    tris.sort();
    let edges: BTreeSet<(usize, usize)> = tris
        .iter()
        .flat_map(|t| (0..3).map(move |e| (t[e].min(t[(e + 1) % 3]), t[e].max(t[(e + 1) % 3]))))
        .collect();
    Ok(Triangulation {
        triangles: tris,
        edges: edges.into_iter().collect(),
    })
}

impl Triangulation {
    pub fn to_dot(&self, labels: &[String], coords: &[[f64; 2]]) -> String {
        let mut s = String::from("graph delaunay {\n  node [shape=plaintext];\n");
        for (l, c) in labels.iter().zip(coords) {
            writeln!(s, "  \"{l}\" [pos=\"{:.6},{:.6}!\"];", c[0], c[1]).unwrap();
        }
        for &(a, b) in &self.edges {
            writeln!(s, "  \"{}\" -- \"{}\";", labels[a], labels[b]).unwrap();
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_points() {
        let t = delaunay_2d(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(t.triangles.len(), 1);
        assert_eq!(t.edges, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn unit_square_has_one_diagonal() {
        let t = delaunay_2d(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(t.edges.len(), 5);
        assert_eq!(t.triangles.len(), 2);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(delaunay_2d(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]).is_err());
        assert!(delaunay_2d(&[[0.0, 0.0], [1.0, 1.0]]).is_err());
        assert!(delaunay_2d(&[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]).is_err());
    }

    fn hull_size(pts: &[[f64; 2]]) -> usize {
        let mut p = pts.to_vec();
        p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let mut h: Vec<[f64; 2]> = Vec::new();
        for pass in 0..2 {
            let start = h.len();
            for &q in &p {
                while h.len() >= start + 2 && orient(h[h.len() - 2], h[h.len() - 1], q) <= 0.0 {
                    h.pop();
                }
                h.push(q);
            }
            h.pop();
            if pass == 0 {
                p.reverse();
            }
        }
        h.len()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]
        #[test]
        fn circumcircles_are_empty(pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..25)) {
            let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
            let Ok(t) = delaunay_2d(&pts) else { return Ok(()); };
            for tri in &t.triangles {
                let (a, b, c) = (pts[tri[0]], pts[tri[1]], pts[tri[2]]);
                prop_assert!(orient(a, b, c) > 0.0);
                for (i, &p) in pts.iter().enumerate() {
                    if !tri.contains(&i) {
                        prop_assert!(in_circle(a, b, c, p) <= 1e-9);
                    }
                }
            }
            // Euler: 2n - 2 - h triangles for h points on the hull
            prop_assert_eq!(t.triangles.len(), 2 * pts.len() - 2 - hull_size(&pts));
        }
    }
}
