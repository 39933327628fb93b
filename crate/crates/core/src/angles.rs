//! Bond angles, inherent-angle discovery and fixed bond angle discretization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, GeometryCode, GeometrySpec};
use crate::error::{Error, Result};
use crate::extracop::{d_e, ParticleDescriptor};
use crate::vec3::Vec3;

pub const DEFAULT_EPSILON: f64 = 2.85;
pub const DEFAULT_MIN_PTS: usize = 1;
/// Two ideal angles of one geometry closer than this (degrees) are the same angle.
pub const DISTINCT_ANGLE_TOL: f64 = 1e-6;

/// Smaller pairwise angles (degrees) between all unordered pairs of bonds.
pub fn bond_angles(bonds: &[Vec3]) -> Result<Vec<f64>> {
    if bonds.len() < 2 {
        return Err(Error::TooFewVertices {
            required: 2,
            got: bonds.len(),
        });
    }
    if let Some(i) = bonds.iter().position(|b| b.norm_squared() == 0.0) {
        return Err(Error::ZeroLengthBond(i));
    }
    let mut out = Vec::with_capacity(bonds.len() * (bonds.len() - 1) / 2);
    for i in 0..bonds.len() {
        for j in i + 1..bonds.len() {
            out.push(bonds[i].angle_deg(bonds[j]));
        }
    }
    Ok(out)
}

/// Sorted distinct values, merging neighbours closer than `tol`.
pub fn distinct_angles(angles: &[f64], tol: f64) -> Vec<f64> {
    let mut sorted = angles.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for a in sorted {
        match out.last() {
            Some(&last) if a - last <= tol => {}
            _ => out.push(a),
        }
    }
    out
}

/// How each pool geometry contributes its ideal angles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoolWeighting {
    /// Every bond pair contributes its angle (k(k-1)/2 entries per geometry).
    #[default]
    PairMultiplicity,
    /// Each distinct ideal angle of a geometry appears once.
    Distinct,
}

/// How a cluster of pooled angles is reduced to its inherent angle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representative {
    #[default]
    Mean,
    /// Member with the most pool points within epsilon.
    Mode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnglePool {
    pub entries: Vec<(f64, GeometryCode)>,
}

impl AnglePool {
    /// Pools the ideal angles of the capping-reduced catalog.
    pub fn from_catalog(catalog: &Catalog, weighting: PoolWeighting) -> Self {
        let mut entries = Vec::new();
        for code in catalog.capping_reduced_set() {
            let angles = bond_angles(&catalog.get(code).vertices)
                .expect("catalog geometries have at least two nonzero bonds");
            let angles = match weighting {
                PoolWeighting::PairMultiplicity => angles,
                PoolWeighting::Distinct => distinct_angles(&angles, DISTINCT_ANGLE_TOL),
            };
            entries.extend(angles.into_iter().map(|a| (a, code)));
        }
        AnglePool { entries }
    }

    pub fn from_angles(angles: impl IntoIterator<Item = f64>, source: GeometryCode) -> Self {
        AnglePool {
            entries: angles.into_iter().map(|a| (a, source)).collect(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|&(a, _)| a).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizerParams {
    pub epsilon: f64,
    pub min_pts: usize,
    pub weighting: PoolWeighting,
    pub representative: Representative,
}

impl Default for DiscretizerParams {
    fn default() -> Self {
        DiscretizerParams {
            epsilon: DEFAULT_EPSILON,
            min_pts: DEFAULT_MIN_PTS,
            weighting: PoolWeighting::default(),
            representative: Representative::default(),
        }
    }
}

impl DiscretizerParams {
    pub fn with_epsilon(epsilon: f64) -> Self {
        DiscretizerParams {
            epsilon,
            ..Default::default()
        }
    }
}

/// One-dimensional DBSCAN. Returns clusters of sorted values; noise is dropped.
pub fn dbscan_1d(values: &[f64], epsilon: f64, min_pts: usize) -> Result<Vec<Vec<f64>>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    if min_pts == 0 {
        return Err(Error::InvalidMinPts);
    }
    let mut x = values.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len();
    // neighbourhood counts via two pointers over the sorted values
    let mut core = vec![false; n];
    let (mut lo, mut hi) = (0usize, 0usize);
    for i in 0..n {
        while x[i] - x[lo] > epsilon {
            lo += 1;
        }
        if hi < i {
            hi = i;
        }
        while hi + 1 < n && x[hi + 1] - x[i] <= epsilon {
            hi += 1;
        }
        core[i] = hi - lo + 1 >= min_pts;
    }
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut clusters = 0usize;
    let mut last_core: Option<usize> = None;
    for i in 0..n {
        if !core[i] {
            continue;
        }
        match last_core {
            Some(j) if x[i] - x[j] <= epsilon => label[i] = label[j],
            _ => {
                label[i] = Some(clusters);
                clusters += 1;
            }
        }
        last_core = Some(i);
    }
    // border points join the nearest core point within epsilon
    for i in 0..n {
        if core[i] {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for j in (0..n).filter(|&j| core[j]) {
            let d = (x[i] - x[j]).abs();
            if d <= epsilon && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        label[i] = best.and_then(|(_, j)| label[j]);
    }
    let mut out = vec![Vec::new(); clusters];
    for (v, l) in x.into_iter().zip(label) {
        if let Some(l) = l {
            out[l].push(v);
        }
    }
    Ok(out)
}

fn representative(cluster: &[f64], epsilon: f64, how: Representative) -> f64 {
    if cluster.iter().any(|&a| (a - 180.0).abs() < 1e-9) {
        return 180.0;
    }
    match how {
        Representative::Mean => cluster.iter().sum::<f64>() / cluster.len() as f64,
        Representative::Mode => {
            let mut best = (0usize, cluster[0]);
            for &a in cluster {
                let count = cluster.iter().filter(|&&b| (a - b).abs() <= epsilon).count();
                if count > best.0 {
                    best = (count, a);
                }
            }
            best.1
        }
    }
}

/// Fixed discretization of (0, 180] into angle classes.
///
/// Class `j` is the bin `(bin_edges[j-1], bin_edges[j]]` and is represented by
/// `inherent_angles[j]`; class 0 holds the conventional inherent angle 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretizer {
    pub epsilon: f64,
    pub min_pts: usize,
    pub inherent_angles: Vec<f64>,
    pub bin_edges: Vec<f64>,
}

impl Discretizer {
    pub fn derive(pool: &AnglePool, params: &DiscretizerParams) -> Result<Self> {
        if pool.is_empty() {
            return Err(Error::EmptyPool);
        }
        if let Some(&(a, _)) = pool.entries.iter().find(|(a, _)| !(*a > 0.0 && *a <= 180.0)) {
            return Err(Error::AngleOutOfRange(a));
        }
        let clusters = dbscan_1d(&pool.values(), params.epsilon, params.min_pts)?;
        let mut inherent = vec![0.0];
        inherent.extend(
            clusters
                .iter()
                .map(|c| representative(c, params.epsilon, params.representative)),
        );
        Self::from_inherent(params.epsilon, params.min_pts, inherent)
    }

    /// Discretizer for the catalog pool.
    pub fn from_catalog(catalog: &Catalog, params: &DiscretizerParams) -> Result<Self> {
        Self::derive(&AnglePool::from_catalog(catalog, params.weighting), params)
    }

    /// Builds bins from an explicit inherent-angle list (which must start at 0).
    pub fn from_inherent(epsilon: f64, min_pts: usize, inherent_angles: Vec<f64>) -> Result<Self> {
        if inherent_angles.first() != Some(&0.0) {
            return Err(Error::InvalidParameter(
                "inherent angles must start with 0".into(),
            ));
        }
        if inherent_angles.windows(2).any(|w| !(w[0] < w[1])) || inherent_angles.last() > Some(&180.0)
        {
            return Err(Error::InvalidParameter(
                "inherent angles must be strictly increasing within [0, 180]".into(),
            ));
        }
        let bin_edges = inherent_angles
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect();
        Ok(Discretizer {
            epsilon,
            min_pts,
            inherent_angles,
            bin_edges,
        })
    }

    pub fn class_count(&self) -> usize {
        self.inherent_angles.len()
    }

    /// Index of the class containing `angle`.
    pub fn class_of(&self, angle: f64) -> Result<usize> {
        if !(angle > 0.0 && angle <= 180.0) {
            return Err(Error::AngleOutOfRange(angle));
        }
        Ok(self.bin_edges.partition_point(|&e| e < angle))
    }

    /// Inherent angle of the class containing `angle`.
    pub fn discretize(&self, angle: f64) -> Result<f64> {
        Ok(self.inherent_angles[self.class_of(angle)?])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// How measured angles falling into one class are counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum ClassCounting {
    /// Each hit class counts once.
    #[default]
    Classes,
    /// Distinct values inside a class (gaps larger than the tolerance) count separately.
    Resolved(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub class: usize,
    pub angle: f64,
    /// Number of close yet unequal angles merged into this class.
    pub f: u32,
    /// Number of bond pairs whose angle falls into this class.
    pub pairs: u32,
}

/// Discretized angle set of one geometry or particle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleProfile {
    pub label: String,
    pub entries: Vec<ClassEntry>,
}

impl AngleProfile {
    pub fn from_angles(
        label: impl Into<String>,
        angles: &[f64],
        d: &Discretizer,
        counting: ClassCounting,
    ) -> Result<Self> {
        let mut by_class: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for &a in angles {
            by_class.entry(d.class_of(a)?).or_default().push(a);
        }
        let entries = by_class
            .into_iter()
            .map(|(class, members)| {
                let f = match counting {
                    ClassCounting::Classes => 1,
                    ClassCounting::Resolved(tol) => distinct_angles(&members, tol).len() as u32,
                };
                ClassEntry {
                    class,
                    angle: d.inherent_angles[class],
                    f,
                    pairs: members.len() as u32,
                }
            })
            .collect();
        Ok(AngleProfile {
            label: label.into(),
            entries,
        })
    }

    /// Corrected number of distinct angles, the sum of `f` over classes.
    pub fn m(&self) -> u32 {
        self.entries.iter().map(|e| e.f).sum()
    }

    /// Number of classes hit.
    pub fn class_count(&self) -> usize {
        self.entries.len()
    }

    pub fn theta(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.angle).collect()
    }

    pub fn f(&self, class: usize) -> u32 {
        self.entries
            .iter()
            .find(|e| e.class == class)
            .map_or(0, |e| e.f)
    }

    pub fn pair_total(&self) -> u32 {
        self.entries.iter().map(|e| e.pairs).sum()
    }
}

/// Discretized profile of an ideal geometry.
pub fn profile(g: &GeometrySpec, d: &Discretizer) -> AngleProfile {
    let angles = bond_angles(&g.vertices).expect("catalog geometry");
    AngleProfile::from_angles(
        g.code.as_str(),
        &angles,
        d,
        ClassCounting::Resolved(DISTINCT_ANGLE_TOL),
    )
    .expect("bond angles lie in (0, 180]")
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub statement: String,
    pub holds: bool,
    pub values: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub epsilon: f64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates the two topological axioms under discretizer `d`.
pub fn axioms_satisfied(d: &Discretizer, catalog: &Catalog) -> AxiomReport {
    use GeometryCode::*;
    let descriptors: Vec<ParticleDescriptor> = catalog
        .geometries()
        .iter()
        .map(|g| ParticleDescriptor::from_geometry(g, d))
        .collect();
    let dist = |a: GeometryCode, b: GeometryCode| d_e(&descriptors[a.index()], &descriptors[b.index()]);

    let closer = |name: &'static str, x: GeometryCode, y: GeometryCode, z: GeometryCode| {
        let (dy, dz) = (dist(x, y), dist(x, z));
        AxiomCheck {
            name,
            statement: format!("{x} is closer to {y} than to {z}"),
            holds: dy < dz,
            values: vec![(format!("d({x},{y})"), dy), (format!("d({x},{z})"), dz)],
        }
    };
    let two_nearest = |name: &'static str, x: GeometryCode, a: GeometryCode, b: GeometryCode| {
        let mut ranked: Vec<(f64, GeometryCode)> = GeometryCode::ALL
            .iter()
            .filter(|&&c| c != x)
            .map(|&c| (dist(x, c), c))
            .collect();
        ranked.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
        let top: Vec<GeometryCode> = ranked[..2].iter().map(|r| r.1).collect();
        let holds = top.contains(&a) && top.contains(&b) && ranked[1].0 < ranked[2].0;
        AxiomCheck {
            name,
            statement: format!("{a} and {b} are the two closest to {x}"),
            holds,
            values: ranked[..3]
                .iter()
                .map(|&(v, c)| (format!("d({x},{c})"), v))
                .collect(),
        }
    };
    AxiomReport {
        epsilon: d.epsilon,
        checks: vec![
            closer("1a", FCC, HCP, BCC),
            closer("1b", HCP, FCC, BCC),
            two_nearest("2a", SA, CSA, BSA),
            two_nearest("2b", HDR, CSP, BSP),
        ],
    }
}

/// Largest epsilon on the grid `step, 2*step, ..., max` for which the axioms hold.
pub fn largest_axiomatic_epsilon(
    catalog: &Catalog,
    base: &DiscretizerParams,
    step: f64,
    max: f64,
) -> Result<Option<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let n = (max / step).round() as usize;
    let mut best = None;
    for i in 1..=n {
        let eps = (i as f64 * step * 1e6).round() / 1e6;
        let params = DiscretizerParams {
            epsilon: eps,
            ..*base
        };
        let d = Discretizer::from_catalog(catalog, &params)?;
        if axioms_satisfied(&d, catalog).all_hold() {
            best = Some(eps);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_geometry;
    use proptest::prelude::*;

    fn catalog_discretizer() -> (Catalog, Discretizer) {
        let cat = Catalog::new();
        let d = Discretizer::from_catalog(&cat, &DiscretizerParams::default()).unwrap();
        (cat, d)
    }

    #[test]
    fn tetrahedral_angles() {
        let a = bond_angles(&build_geometry(GeometryCode::TET).vertices).unwrap();
        let expected = (-1.0f64 / 3.0).acos().to_degrees();
        assert_eq!(a.len(), 6);
        assert!(a.iter().all(|x| (x - expected).abs() < 1e-9));
        assert!((expected - 109.4712).abs() < 1e-4);
    }

    #[test]
    fn octahedral_and_cuboctahedral_angle_sets() {
        let sc = bond_angles(&build_geometry(GeometryCode::SC).vertices).unwrap();
        assert_eq!(sc.len(), 15);
        let d = distinct_angles(&sc, DISTINCT_ANGLE_TOL);
        assert_eq!(d.len(), 2);
        assert!((d[0] - 90.0).abs() < 1e-9 && (d[1] - 180.0).abs() < 1e-9);

        let fcc = bond_angles(&build_geometry(GeometryCode::FCC).vertices).unwrap();
        assert_eq!(fcc.len(), 66);
        let d = distinct_angles(&fcc, DISTINCT_ANGLE_TOL);
        for (got, want) in d.iter().zip([60.0, 90.0, 120.0, 180.0]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn bond_angle_errors() {
        assert!(matches!(
            bond_angles(&[Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO]),
            Err(Error::ZeroLengthBond(1))
        ));
        assert!(matches!(
            bond_angles(&[Vec3::new(1.0, 0.0, 0.0)]),
            Err(Error::TooFewVertices { .. })
        ));
    }

    #[test]
    fn close_cluster_gives_single_inherent_angle() {
        let pool = AnglePool::from_angles([59.1, 60.0, 60.4], GeometryCode::FCC);
        let d = Discretizer::derive(&pool, &DiscretizerParams::default()).unwrap();
        assert_eq!(d.inherent_angles.len(), 2);
        assert!((d.inherent_angles[1] - 59.833333333333336).abs() < 1e-9);
    }

    #[test]
    fn single_value_pool() {
        let pool = AnglePool::from_angles([90.0], GeometryCode::SC);
        let d = Discretizer::derive(&pool, &DiscretizerParams::default()).unwrap();
        assert_eq!(d.inherent_angles, vec![0.0, 90.0]);
        assert_eq!(d.bin_edges, vec![45.0]);
    }

    #[test]
    fn derive_errors() {
        let pool = AnglePool::from_angles([90.0], GeometryCode::SC);
        assert!(matches!(
            Discretizer::derive(&pool, &DiscretizerParams::with_epsilon(0.0)),
            Err(Error::InvalidEpsilon(_))
        ));
        let empty = AnglePool { entries: vec![] };
        assert!(matches!(
            Discretizer::derive(&empty, &DiscretizerParams::default()),
            Err(Error::EmptyPool)
        ));
    }

    #[test]
    fn dbscan_min_pts_drops_sparse_points() {
        let c = dbscan_1d(&[1.0, 1.5, 2.0, 10.0], 1.0, 2).unwrap();
        assert_eq!(c, vec![vec![1.0, 1.5, 2.0]]);
        let c = dbscan_1d(&[1.0, 1.5, 2.0, 10.0], 1.0, 1).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn measured_near_linear_angles_map_to_180() {
        let (_, d) = catalog_discretizer();
        for a in [176.4, 178.7, 179.2] {
            assert_eq!(d.discretize(a).unwrap(), 180.0);
        }
        assert!(matches!(d.discretize(0.0), Err(Error::AngleOutOfRange(_))));
        assert!(matches!(d.discretize(180.5), Err(Error::AngleOutOfRange(_))));
    }

    #[test]
    fn tet_angle_maps_to_its_class() {
        let (_, d) = catalog_discretizer();
        let rep = d.discretize(109.47).unwrap();
        assert!((rep - 109.47).abs() < d.epsilon, "{rep}");
        assert_eq!(d.discretize(rep).unwrap(), rep);
    }

    #[test]
    fn discretizer_invariants() {
        let (_, d) = catalog_discretizer();
        assert_eq!(d.inherent_angles[0], 0.0);
        assert_eq!(*d.inherent_angles.last().unwrap(), 180.0);
        for (j, e) in d.bin_edges.iter().enumerate() {
            assert!(d.inherent_angles[j] < *e && *e < d.inherent_angles[j + 1]);
        }
    }

    #[test]
    fn profiles_match_published_counts() {
        use GeometryCode::*;
        let (cat, d) = catalog_discretizer();
        let m = |c| profile(cat.get(c), &d).m();
        assert_eq!(m(FCC), 4);
        assert_eq!(m(ICO), 3);
        let sds = profile(cat.get(SDS), &d);
        assert_eq!(sds.m(), 6);
        assert!(sds.entries.iter().any(|e| e.f > 1));
        for g in cat.geometries() {
            let p = profile(g, &d);
            assert_eq!(p.pair_total() as usize, g.k() * (g.k() - 1) / 2);
        }
    }

    #[test]
    fn axioms_at_published_epsilon() {
        let (cat, d) = catalog_discretizer();
        assert!(axioms_satisfied(&d, &cat).all_hold());
        let d = Discretizer::from_catalog(&cat, &DiscretizerParams::with_epsilon(2.86)).unwrap();
        assert!(!axioms_satisfied(&d, &cat).all_hold());
    }

    #[test]
    fn tiny_epsilon_report() {
        let cat = Catalog::new();
        let d = Discretizer::from_catalog(&cat, &DiscretizerParams::with_epsilon(0.01)).unwrap();
        let report = axioms_satisfied(&d, &cat);
        assert_eq!(report.checks.len(), 4);
        // fine bins resolve every angle, which keeps all orderings intact
        assert!(report.all_hold());
        assert!(d.class_count() > 20);
    }

    proptest! {
        #[test]
        fn discretize_is_idempotent_and_monotone(a in 1e-6f64..180.0, b in 1e-6f64..180.0) {
            let (_, d) = catalog_discretizer();
            let ra = d.discretize(a).unwrap();
            if ra > 0.0 {
                prop_assert_eq!(d.discretize(ra).unwrap(), ra);
            }
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(d.class_of(lo).unwrap() <= d.class_of(hi).unwrap());
        }
    }
}
