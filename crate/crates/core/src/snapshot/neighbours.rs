use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::snapshot::io::Frame;
use crate::vec3::Vec3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeighbourList {
    pub cutoff: f64,
    /// Neighbour indices of each particle, ascending.
    pub adjacency: Vec<Vec<usize>>,
    /// Minimum-image bond vectors matching `adjacency`.
    pub bonds: Vec<Vec<Vec3>>,
}

impl NeighbourList {
    pub fn k(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }
}

/// Perpendicular widths of a cell (distance between opposite faces).
pub fn cell_widths(cell: &[Vec3; 3]) -> [f64; 3] {
    let vol = cell[0].dot(cell[1].cross(cell[2])).abs();
    [
        vol / cell[1].cross(cell[2]).norm(),
        vol / cell[2].cross(cell[0]).norm(),
        vol / cell[0].cross(cell[1]).norm(),
    ]
}

/// Rows of the inverse of the matrix whose rows are the cell vectors, as columns:
/// fractional coordinate `a` of `p` is `recip[a].dot(p)`.
fn reciprocal(cell: &[Vec3; 3]) -> [Vec3; 3] {
    let vol = cell[0].dot(cell[1].cross(cell[2]));
    [
        cell[1].cross(cell[2]) / vol,
        cell[2].cross(cell[0]) / vol,
        cell[0].cross(cell[1]) / vol,
    ]
}

struct Grid {
    dims: [usize; 3],
    periodic: bool,
    /// Particle indices by flattened cell.
    cells: Vec<Vec<usize>>,
    /// Cell of each particle.
    of: Vec<[usize; 3]>,
    /// Wrapped Cartesian positions.
    wrapped: Vec<Vec3>,
}

fn build_grid(frame: &Frame, r: f64) -> Grid {
    let n = frame.len();
    let (dims, frac, wrapped, periodic): ([usize; 3], Vec<[f64; 3]>, Vec<Vec3>, bool) = match &frame.cell {
        Some(cell) => {
            let w = cell_widths(cell);
            let dims = w.map(|wa| ((wa / r).floor() as usize).max(1));
            let rec = reciprocal(cell);
            let mut frac = Vec::with_capacity(n);
            let mut wrapped = Vec::with_capacity(n);
            for &p in &frame.positions {
                let mut f = [0.0; 3];
                for a in 0..3 {
                    let x = rec[a].dot(p);
                    f[a] = x - x.floor();
                    if f[a] >= 1.0 {
                        f[a] = 0.0;
                    }
                }
                wrapped.push(cell[0] * f[0] + cell[1] * f[1] + cell[2] * f[2]);
                frac.push(f);
            }
            (dims, frac, wrapped, true)
        }
        None => {
            let mut lo = [f64::INFINITY; 3];
            let mut hi = [f64::NEG_INFINITY; 3];
            for p in &frame.positions {
                for (a, v) in p.to_array().into_iter().enumerate() {
                    lo[a] = lo[a].min(v);
                    hi[a] = hi[a].max(v);
                }
            }
            let cap = ((8 * n) as f64).cbrt().ceil() as usize;
            let dims = [0, 1, 2].map(|a| (((hi[a] - lo[a]) / r).floor() as usize).clamp(1, cap.max(1)));
            let frac = frame
                .positions
                .iter()
                .map(|p| {
                    let v = p.to_array();
                    [0, 1, 2].map(|a| if hi[a] > lo[a] { (v[a] - lo[a]) / (hi[a] - lo[a]) } else { 0.0 })
                })
                .collect();
            (dims, frac, frame.positions.clone(), false)
        }
    };
    let mut cells = vec![Vec::new(); dims[0] * dims[1] * dims[2]];
    let mut of = Vec::with_capacity(n);
    for (i, f) in frac.iter().enumerate() {
        let c = [0, 1, 2].map(|a| ((f[a] * dims[a] as f64) as usize).min(dims[a] - 1));
        cells[(c[0] * dims[1] + c[1]) * dims[2] + c[2]].push(i);
        of.push(c);
    }
    Grid {
        dims,
        periodic,
        cells,
        of,
        wrapped,
    }
}

/// All particles within `r_cut` of each particle (minimum image when periodic).
pub fn neighbours_cutoff(frame: &Frame, r_cut: f64) -> Result<NeighbourList> {
    if !(r_cut > 0.0 && r_cut.is_finite()) {
        return Err(Error::InvalidParameter(format!("cutoff must be positive, got {r_cut}")));
    }
    if let Some(cell) = &frame.cell {
        let half = cell_widths(cell).into_iter().fold(f64::INFINITY, f64::min) / 2.0;
        if r_cut > half {
            return Err(Error::CutoffTooLarge {
                cutoff: r_cut,
                half_width: half,
            });
        }
    }
    let g = build_grid(frame, r_cut);
    let r2 = r_cut * r_cut;
    let rows: Vec<(Vec<usize>, Vec<Vec3>)> = (0..frame.len())
        .into_par_iter()
        .map(|i| {
            let mut found: Vec<(usize, Vec3)> = Vec::new();
            let ci = g.of[i];
            let range = |a: usize| -> Vec<(usize, i64)> {
                let d = g.dims[a] as i64;
                let mut out = Vec::new();
                for off in -1i64..=1 {
                    let c = ci[a] as i64 + off;
                    if g.periodic {
                        out.push((c.rem_euclid(d) as usize, c.div_euclid(d)));
                    } else if (0..d).contains(&c) {
                        out.push((c as usize, 0));
                    }
                }
                out.sort();
                out.dedup();
                out
            };
            let (ra, rb, rc) = (range(0), range(1), range(2));
            for &(a, sa) in &ra {
                for &(b, sb) in &rb {
                    for &(c, sc) in &rc {
                        let shift = match &frame.cell {
                            Some(cell) => cell[0] * sa as f64 + cell[1] * sb as f64 + cell[2] * sc as f64,
                            None => Vec3::ZERO,
                        };
                        for &j in &g.cells[(a * g.dims[1] + b) * g.dims[2] + c] {
                            let d = g.wrapped[j] + shift - g.wrapped[i];
                            if j != i && d.norm_squared() <= r2 {
                                found.push((j, d));
                            }
                        }
                    }
                }
            }
            found.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.norm_squared().total_cmp(&y.1.norm_squared())));
            found.dedup_by_key(|x| x.0);
            found.into_iter().unzip()
        })
        .collect();
    let (adjacency, bonds) = rows.into_iter().unzip();
    Ok(NeighbourList {
        cutoff: r_cut,
        adjacency,
        bonds,
    })
}

/// Radial distribution function on `bins` equal bins up to `r_max`.
pub fn radial_distribution(frame: &Frame, r_max: f64, bins: usize) -> Result<Vec<(f64, f64)>> {
    let nl = neighbours_cutoff(frame, r_max)?;
    let dr = r_max / bins as f64;
    let mut hist = vec![0.0; bins];
    for bonds in &nl.bonds {
        for b in bonds {
            let k = ((b.norm() / dr) as usize).min(bins - 1);
            hist[k] += 1.0;
        }
    }
    let n = frame.len() as f64;
    let volume = match &frame.cell {
        Some(c) => c[0].dot(c[1].cross(c[2])).abs(),
        None => {
            let lo = frame.positions.iter().fold(Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY), |m, p| {
                Vec3::new(m.x.min(p.x), m.y.min(p.y), m.z.min(p.z))
            });
            let hi = frame.positions.iter().fold(
                Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
                |m, p| Vec3::new(m.x.max(p.x), m.y.max(p.y), m.z.max(p.z)),
            );
            let e = hi - lo;
            (e.x * e.y * e.z).max(f64::MIN_POSITIVE)
        }
    };
    let rho = n / volume;
    Ok(hist
        .into_iter()
        .enumerate()
        .map(|(k, h)| {
            let (r0, r1) = (k as f64 * dr, (k + 1) as f64 * dr);
            let shell = 4.0 / 3.0 * std::f64::consts::PI * (r1.powi(3) - r0.powi(3));
            ((r0 + r1) / 2.0, h / (n * rho * shell))
        })
        .collect())
}

/// Cutoff at the first minimum of the radial distribution function after its
/// main peak (centre of the minimum when it is a plateau).
pub fn auto_cutoff(frame: &Frame) -> Result<f64> {
    let r_max = match &frame.cell {
        Some(c) => cell_widths(c).into_iter().fold(f64::INFINITY, f64::min) / 2.0,
        None => {
            let c = crate::vec3::centroid(&frame.positions);
            frame.positions.iter().map(|&p| (p - c).norm()).fold(0.0, f64::max)
        }
    };
    if frame.len() < 2 || !(r_max > 0.0) {
        return Err(Error::Degenerate("too few particles to estimate a cutoff".into()));
    }
    let bins = 200;
    let g = radial_distribution(frame, r_max, bins)?;
    // light smoothing against shot noise
    let s: Vec<f64> = (0..bins)
        .map(|k| {
            let lo = k.saturating_sub(1);
            let hi = (k + 1).min(bins - 1);
            (lo..=hi).map(|j| g[j].1).sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();
    let peak = (0..bins)
        .max_by(|&a, &b| s[a].total_cmp(&s[b]).then(b.cmp(&a)))
        .unwrap();
    let (mut k, mut start) = (peak, peak);
    while k + 1 < bins && s[k + 1] <= s[k] {
        if s[k + 1] < s[k] {
            start = k + 1;
        }
        k += 1;
    }
    if start == peak || k + 1 >= bins {
        return Err(Error::Degenerate("no minimum after the first peak".into()));
    }
    Ok((g[start].0 + g[k].0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_particle_has_no_neighbours() {
        let f = Frame::new(vec![Vec3::ZERO], None, vec![]).unwrap();
        let nl = neighbours_cutoff(&f, 1.0).unwrap();
        assert!(nl.adjacency[0].is_empty());
    }

    #[test]
    fn periodic_image_is_found() {
        let cell = [Vec3::new(10.0, 0.0, 0.0), Vec3::new(0.0, 10.0, 0.0), Vec3::new(0.0, 0.0, 10.0)];
        let f = Frame::new(vec![Vec3::new(0.2, 5.0, 5.0), Vec3::new(9.8, 5.0, 5.0)], Some(cell), vec![]).unwrap();
        let nl = neighbours_cutoff(&f, 1.0).unwrap();
        assert_eq!(nl.adjacency, vec![vec![1], vec![0]]);
        assert!((nl.bonds[0][0] - Vec3::new(-0.4, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cutoff_limits() {
        let cell = [Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 4.0, 0.0), Vec3::new(0.0, 0.0, 4.0)];
        let f = Frame::new(vec![Vec3::ZERO], Some(cell), vec![]).unwrap();
        assert!(matches!(neighbours_cutoff(&f, 1.5), Err(Error::CutoffTooLarge { .. })));
        assert!(neighbours_cutoff(&f, 0.0).is_err());
        assert!(neighbours_cutoff(&f, 1.0).is_ok());
    }
}
