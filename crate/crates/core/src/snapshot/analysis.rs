use std::collections::BTreeMap;
use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::angles::{bond_angles, AngleProfile, ClassCounting, Discretizer};
use crate::catalog::{Catalog, GeometryCode};
use crate::error::Result;
use crate::extracop::{d_e, e_one, ParticleDescriptor};
use crate::snapshot::io::Frame;
use crate::snapshot::neighbours::{auto_cutoff, neighbours_cutoff, NeighbourList};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParticleResult {
    pub id: usize,
    pub k: usize,
    /// `None` when the particle has fewer than two neighbours.
    pub m: Option<u32>,
    pub e: Option<f64>,
    pub label: Option<GeometryCode>,
    pub distance: Option<f64>,
}

fn descriptor(i: usize, nl: &NeighbourList, d: &Discretizer, counting: ClassCounting) -> Result<Option<ParticleDescriptor>> {
    let k = nl.k(i);
    if k < 2 {
        return Ok(None);
    }
    let angles = bond_angles(&nl.bonds[i])?;
    let profile = AngleProfile::from_angles(i.to_string(), &angles, d, counting)?;
    Ok(Some(ParticleDescriptor::new(k, profile)?))
}

/// One-particle coefficient per particle; `None` for k < 2.
pub fn per_particle_e(nl: &NeighbourList, d: &Discretizer, counting: ClassCounting) -> Result<Vec<Option<f64>>> {
    (0..nl.adjacency.len())
        .into_par_iter()
        .map(|i| Ok(descriptor(i, nl, d, counting)?.map(|p| e_one(&p))))
        .collect()
}

/// Nearest catalog geometry under the extracopularity distance, ties to the
/// lower catalog index.
pub fn classify(
    nl: &NeighbourList,
    catalog: &Catalog,
    d: &Discretizer,
    counting: ClassCounting,
) -> Result<Vec<ParticleResult>> {
    let refs: Vec<ParticleDescriptor> = catalog
        .geometries()
        .iter()
        .map(|g| ParticleDescriptor::from_geometry(g, d))
        .collect();
    (0..nl.adjacency.len())
        .into_par_iter()
        .map(|i| {
            let k = nl.k(i);
            let Some(p) = descriptor(i, nl, d, counting)? else {
                return Ok(ParticleResult {
                    id: i,
                    k,
                    m: None,
                    e: None,
                    label: None,
                    distance: None,
                });
            };
            let mut best = (0, f64::INFINITY);
            for (j, r) in refs.iter().enumerate() {
                let dist = d_e(&p, r);
                if dist < best.1 {
                    best = (j, dist);
                }
            }
            Ok(ParticleResult {
                id: i,
                k,
                m: Some(p.m()),
                e: Some(e_one(&p)),
                label: Some(catalog.geometries()[best.0].code),
                distance: Some(best.1),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub particles: usize,
    pub cutoff: f64,
    /// Particles with fewer than two neighbours.
    pub undefined: usize,
    pub labels: BTreeMap<String, usize>,
    pub mean_e: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameAnalysis {
    pub cutoff: f64,
    pub particles: Vec<ParticleResult>,
}

/// Neighbour search plus classification; the cutoff defaults to the first
/// minimum of the radial distribution function.
pub fn analyze(
    frame: &Frame,
    r_cut: Option<f64>,
    catalog: &Catalog,
    d: &Discretizer,
    counting: ClassCounting,
) -> Result<FrameAnalysis> {
    let cutoff = match r_cut {
        Some(r) => r,
        None => auto_cutoff(frame)?,
    };
    let nl = neighbours_cutoff(frame, cutoff)?;
    Ok(FrameAnalysis {
        cutoff,
        particles: classify(&nl, catalog, d, counting)?,
    })
}

impl FrameAnalysis {
    pub fn summary(&self) -> Summary {
        let mut labels = BTreeMap::new();
        let mut sum = 0.0;
        let mut defined = 0;
        for p in &self.particles {
            if let (Some(l), Some(e)) = (p.label, p.e) {
                *labels.entry(l.to_string()).or_insert(0) += 1;
                sum += e;
                defined += 1;
            }
        }
        Summary {
            particles: self.particles.len(),
            cutoff: self.cutoff,
            undefined: self.particles.len() - defined,
            labels,
            mean_e: (defined > 0).then(|| sum / defined as f64),
        }
    }

    pub fn fraction_labelled(&self, code: GeometryCode) -> f64 {
        let hits = self.particles.iter().filter(|p| p.label == Some(code)).count();
        hits as f64 / self.particles.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,k,m,E,label,d_E\n");
        for p in &self.particles {
            match (p.m, p.e, p.label, p.distance) {
                (Some(m), Some(e), Some(l), Some(dist)) => {
                    writeln!(s, "{},{},{m},{e:.6},{l},{dist:.6}", p.id, p.k).unwrap()
                }
                _ => writeln!(s, "{},{},,,,", p.id, p.k).unwrap(),
            }
        }
        s
    }
}
