//! One- and n-particle extracopularity coefficients and the distance they induce.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angles::{profile, AngleProfile, Discretizer};
use crate::catalog::GeometrySpec;
use crate::error::{Error, Result};

/// Slack allowed in bound and metric checks (bits).
pub const BOUND_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleDescriptor {
    k: usize,
    profile: AngleProfile,
}

impl ParticleDescriptor {
    pub fn new(k: usize, profile: AngleProfile) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidDescriptor(format!("k = {k} < 2")));
        }
        let m = profile.m() as usize;
        if m == 0 {
            return Err(Error::InvalidDescriptor("no bond angles".into()));
        }
        if m > k * (k - 1) / 2 {
            return Err(Error::InvalidDescriptor(format!(
                "m = {m} exceeds the {} bond pairs",
                k * (k - 1) / 2
            )));
        }
        Ok(ParticleDescriptor { k, profile })
    }

    pub fn from_geometry(g: &GeometrySpec, d: &Discretizer) -> Self {
        Self::new(g.k(), profile(g, d)).expect("catalog geometries are valid descriptors")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.profile.m()
    }

    pub fn profile(&self) -> &AngleProfile {
        &self.profile
    }

    fn log2_pairs_numerator(&self) -> f64 {
        ((self.k * self.k - self.k) as f64).log2()
    }
}

/// log2((k^2 - k) / 2m).
pub fn e_from_counts(k: usize, m: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidDescriptor(format!("k = {k} < 2")));
    }
    if m == 0 {
        return Err(Error::InvalidDescriptor("m = 0".into()));
    }
    Ok(((k * k - k) as f64).log2() - 1.0 - (m as f64).log2())
}

pub fn e_one(p: &ParticleDescriptor) -> f64 {
    // same evaluation order as `e_many`, so identical particles are at distance 0
    p.log2_pairs_numerator() - 1.0 - (p.m() as f64).log2()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnionMode {
    /// Plain number of distinct classes in the union.
    Raw,
    /// Per class, the largest count of merged close-yet-unequal angles.
    #[default]
    Corrected,
}

/// Cardinality of the union of the particles' angle sets.
pub fn union_cardinality(parts: &[&ParticleDescriptor], mode: UnionMode) -> usize {
    let mut merged: BTreeMap<usize, u32> = BTreeMap::new();
    for p in parts {
        for e in &p.profile.entries {
            let slot = merged.entry(e.class).or_insert(0);
            *slot = (*slot).max(e.f);
        }
    }
    match mode {
        UnionMode::Raw => merged.len(),
        UnionMode::Corrected => merged.values().map(|&f| f as usize).sum(),
    }
}

/// Coefficient of a collection of particles.
pub fn e_many(parts: &[&ParticleDescriptor], mode: UnionMode) -> Result<f64> {
    if parts.is_empty() {
        return Err(Error::EmptyDescriptors);
    }
    // log2 of the geometric mean of k_i^2 - k_i
    let mean_log = parts.iter().map(|p| p.log2_pairs_numerator()).sum::<f64>() / parts.len() as f64;
    let union = union_cardinality(parts, mode) as f64;
    Ok(mean_log - 1.0 - union.log2())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpperBoundCheck {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
    /// The bound is attained (within tolerance).
    pub equality: bool,
    /// All descriptors share the same (k, angle set).
    pub identical: bool,
}

impl UpperBoundCheck {
    /// Bound holds, with equality exactly when descriptors are identical.
    pub fn as_desired(&self) -> bool {
        self.holds && self.equality == self.identical
    }
}

fn identical_descriptors(parts: &[&ParticleDescriptor]) -> bool {
    parts.windows(2).all(|w| {
        w[0].k == w[1].k
            && w[0].profile.entries.len() == w[1].profile.entries.len()
            && w[0]
                .profile
                .entries
                .iter()
                .zip(&w[1].profile.entries)
                .all(|(a, b)| a.class == b.class && a.f == b.f)
    })
}

/// Checks `E_{1..n} <= max_i E_i` (corrected union).
pub fn check_upper_bound(parts: &[&ParticleDescriptor]) -> Result<UpperBoundCheck> {
    let value = e_many(parts, UnionMode::Corrected)?;
    let bound = parts.iter().map(|p| e_one(p)).fold(f64::NEG_INFINITY, f64::max);
    Ok(UpperBoundCheck {
        value,
        bound,
        holds: value <= bound + BOUND_TOL,
        equality: (value - bound).abs() <= BOUND_TOL,
        identical: identical_descriptors(parts),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LooseBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl LooseBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.value + BOUND_TOL && self.value <= self.upper + BOUND_TOL
    }
}

/// Geometric-mean and union-cardinality bounds on the n-particle coefficient.
pub fn check_loose_bounds(parts: &[&ParticleDescriptor]) -> Result<LooseBounds> {
    let value = e_many(parts, UnionMode::Corrected)?;
    let pairs = |p: &&ParticleDescriptor| (p.k * p.k - p.k) as f64;
    let min_pairs = parts.iter().map(pairs).fold(f64::INFINITY, f64::min);
    let max_pairs = parts.iter().map(pairs).fold(0.0, f64::max);
    let sum_m: f64 = parts.iter().map(|p| p.m() as f64).sum();
    let min_m = parts.iter().map(|p| p.m() as f64).fold(f64::INFINITY, f64::min);
    Ok(LooseBounds {
        lower: (min_pairs / (2.0 * sum_m)).log2(),
        value,
        upper: (max_pairs / (2.0 * min_m)).log2(),
    })
}

/// `max(E_g, E_h) - E_gh` with the corrected union.
pub fn d_e(g: &ParticleDescriptor, h: &ParticleDescriptor) -> f64 {
    d_e_with(g, h, UnionMode::Corrected)
}

pub fn d_e_with(g: &ParticleDescriptor, h: &ParticleDescriptor, mode: UnionMode) -> f64 {
    let pair = e_many(&[g, h], mode).expect("two descriptors");
    e_one(g).max(e_one(h)) - pair
}
