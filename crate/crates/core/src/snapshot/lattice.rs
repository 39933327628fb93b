use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::catalog::GeometryCode;
use crate::error::{Error, Result};
use crate::snapshot::io::Frame;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LatticeKind {
    Fcc,
    Bcc,
    Hcp,
    Sc,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 4] = [LatticeKind::Fcc, LatticeKind::Bcc, LatticeKind::Hcp, LatticeKind::Sc];

    /// Catalog geometry of a particle inside the ideal lattice.
    pub fn geometry(self) -> GeometryCode {
        match self {
            LatticeKind::Fcc => GeometryCode::FCC,
            LatticeKind::Bcc => GeometryCode::BCC,
            LatticeKind::Hcp => GeometryCode::HCP,
            LatticeKind::Sc => GeometryCode::SC,
        }
    }

    /// Cutoff, in nearest-neighbour units, that captures the coordination shell
    /// (both of the first two shells for bcc).
    pub fn shell_cutoff(self) -> f64 {
        match self {
            LatticeKind::Bcc => 1.4,
            _ => 1.2,
        }
    }

    fn unit(self) -> ([Vec3; 3], Vec<[f64; 3]>) {
        let cube = [Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0)];
        match self {
            LatticeKind::Sc => (cube, vec![[0.0, 0.0, 0.0]]),
            LatticeKind::Bcc => (
                cube.map(|v| v * (2.0 / 3f64.sqrt())),
                vec![[0.0, 0.0, 0.0], [0.5, 0.5, 0.5]],
            ),
            LatticeKind::Fcc => (
                cube.map(|v| v * 2f64.sqrt()),
                vec![[0.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]],
            ),
            LatticeKind::Hcp => (
                [
                    Vec3::new(1.0, 0.0, 0.0),
                    Vec3::new(0.5, 3f64.sqrt() / 2.0, 0.0),
                    Vec3::new(0.0, 0.0, (8.0f64 / 3.0).sqrt()),
                ],
                vec![[0.0, 0.0, 0.0], [1.0 / 3.0, 1.0 / 3.0, 0.5]],
            ),
        }
    }
}

impl std::fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LatticeKind::Fcc => "fcc",
            LatticeKind::Bcc => "bcc",
            LatticeKind::Hcp => "hcp",
            LatticeKind::Sc => "sc",
        })
    }
}

impl std::str::FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fcc" => Ok(LatticeKind::Fcc),
            "bcc" => Ok(LatticeKind::Bcc),
            "hcp" => Ok(LatticeKind::Hcp),
            "sc" => Ok(LatticeKind::Sc),
            _ => Err(Error::InvalidParameter(format!("unknown lattice {s:?}"))),
        }
    }
}

/// Periodic block of `cells` unit cells per axis with nearest-neighbour distance `nn`.
pub fn generate_lattice(kind: LatticeKind, cells: usize, nn: f64) -> Result<Frame> {
    if cells == 0 {
        return Err(Error::InvalidParameter("at least one unit cell required".into()));
    }
    if !(nn > 0.0 && nn.is_finite()) {
        return Err(Error::InvalidParameter(format!("nearest-neighbour distance must be positive, got {nn}")));
    }
    let (vecs, basis) = kind.unit();
    let vecs = vecs.map(|v| v * nn);
    let mut positions = Vec::with_capacity(cells.pow(3) * basis.len());
    for i in 0..cells {
        for j in 0..cells {
            for k in 0..cells {
                for b in &basis {
                    let f = [i as f64 + b[0], j as f64 + b[1], k as f64 + b[2]];
                    positions.push(vecs[0] * f[0] + vecs[1] * f[1] + vecs[2] * f[2]);
                }
            }
        }
    }
    let n = positions.len();
    let c = cells as f64;
    Frame::new(positions, Some(vecs.map(|v| v * c)), vec!["X".to_string(); n])
}

/// Copy of `frame` with independent Gaussian displacements per coordinate.
pub fn with_noise(frame: &Frame, sigma: f64, seed: u64) -> Result<Frame> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise width must be non-negative, got {sigma}")));
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions = frame
        .positions
        .iter()
        .map(|&p| {
            p + Vec3::new(
                normal.sample(&mut rng),
                normal.sample(&mut rng),
                normal.sample(&mut rng),
            )
        })
        .collect();
    Frame::new(positions, frame.cell, frame.species.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn particle_counts_and_density() {
        for (kind, per_cell) in [(LatticeKind::Fcc, 4), (LatticeKind::Bcc, 2), (LatticeKind::Hcp, 2), (LatticeKind::Sc, 1)] {
            let f = generate_lattice(kind, 3, 1.0).unwrap();
            assert_eq!(f.len(), 27 * per_cell);
            let mut nearest = f64::INFINITY;
            for j in 1..f.len() {
                nearest = nearest.min((f.positions[j] - f.positions[0]).norm());
            }
            assert!((nearest - 1.0).abs() < 1e-12, "{kind}");
        }
    }

    #[test]
    fn noise_is_seeded() {
        let f = generate_lattice(LatticeKind::Sc, 2, 1.0).unwrap();
        assert_eq!(with_noise(&f, 0.01, 3).unwrap(), with_noise(&f, 0.01, 3).unwrap());
        assert_ne!(with_noise(&f, 0.01, 3).unwrap(), with_noise(&f, 0.01, 4).unwrap());
        assert!(with_noise(&f, -1.0, 0).is_err());
    }
}
