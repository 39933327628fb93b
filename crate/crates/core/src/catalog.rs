//! Ideal coordination geometries.
//!
//! Every geometry is a set of bond directions around a central particle at
//! the origin. Shapes are built analytically (no energy minimisation) and
//! scaled so that the nearest shell sits at radius 1.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

macro_rules! geometry_codes {
    ($($variant:ident),+ $(,)?) => {
        /// Abbreviation of one of the 22 commonly encountered geometries.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum GeometryCode {
            $($variant),+
        }

        impl GeometryCode {
            /// All codes, ordered by increasing one-particle coefficient.
            pub const ALL: [GeometryCode; 22] = [$(GeometryCode::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(GeometryCode::$variant => stringify!($variant)),+
                }
            }
        }

        impl FromStr for GeometryCode {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $(stringify!($variant) => Ok(GeometryCode::$variant),)+
                    _ => Err(Error::UnknownGeometry(s.to_string())),
                }
            }
        }
    };
}

geometry_codes!(
    TBP, SDS, PBP, CTP, BTP, TET, HBP, CSA, CSP, TTP, SC, BSA, BSP, CPP, SA, HDR, BPP, HCP, BCC,
    FCC, CPA, ICO,
);

impl GeometryCode {
    /// Position in [`GeometryCode::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        use GeometryCode::*;
        match self {
            TBP => "Trigonal bipyramidal",
            SDS => "Snub disphenoidal",
            PBP => "Pentagonal bipyramidal",
            CTP => "Capped trigonal prismatic",
            BTP => "Bicapped trigonal prismatic",
            TET => "Regular tetrahedral",
            HBP => "Hexagonal bipyramidal",
            CSA => "Capped square antiprismatic",
            CSP => "Capped square prismatic",
            TTP => "Tricapped trigonal prismatic",
            SC => "Regular octahedral",
            BSA => "Bicapped square antiprismatic",
            BSP => "Bicapped square prismatic",
            CPP => "Capped pentagonal prismatic",
            SA => "Square antiprismatic",
            HDR => "Regular hexahedral",
            BPP => "Bicapped pentagonal prismatic",
            HCP => "Anticuboctahedral",
            BCC => "Rhombic dodecahedral",
            FCC => "Cuboctahedral",
            CPA => "Capped pentagonal antiprismatic",
            ICO => "Regular icosahedral",
        }
    }

    pub fn polyhedral_class(self) -> &'static str {
        use GeometryCode::*;
        match self {
            TBP | PBP => "Deltahedral, bipyramidal",
            SDS => "Deltahedral",
            CTP | BTP | CSP | BSP | CPP | BPP => "Prismatic",
            TET => "Platonic, deltahedral",
            HBP => "Bipyramidal",
            CSA | SA => "Antiprismatic",
            TTP => "Prismatic, deltahedral",
            SC => "Platonic, deltahedral, bipyramidal",
            BSA => "Deltahedral, antiprismatic",
            HDR => "Platonic, prismatic",
            HCP | FCC => "Bicupolar",
            BCC => "Catalan",
            CPA => "Antiprismatic",
            ICO => "Platonic, deltahedral, antiprismatic",
        }
    }

    /// Coordination number.
    pub fn k(self) -> usize {
        use GeometryCode::*;
        match self {
            TET => 4,
            TBP => 5,
            SC => 6,
            PBP | CTP => 7,
            SDS | BTP | HBP | SA | HDR => 8,
            CSA | CSP | TTP => 9,
            BSA | BSP => 10,
            CPP | CPA => 11,
            BPP | HCP | FCC | ICO => 12,
            BCC => 14,
        }
    }

    pub fn taxonomy(self) -> TaxonomyClass {
        use GeometryCode::*;
        use TaxonomyClass::*;
        match self {
            TTP | CSA | BSA | CPP | SA | BPP | HCP | FCC | CPA | ICO => Spheroidal,
            SDS | CTP | BTP => Ellipsoidal,
            TBP | PBP | HBP | SC => Bipyramidal,
            HDR | CSP | BSP | BCC => Cuboidal,
            TET => Tetrahedral,
        }
    }

    /// Schoenflies symbol and order of the ideal point group.
    pub fn point_group(self) -> (&'static str, u32) {
        use GeometryCode::*;
        match self {
            TBP | TTP | HCP => ("D3h", 12),
            SDS => ("D2d", 8),
            PBP | BPP => ("D5h", 20),
            CTP | BTP => ("C2v", 4),
            TET => ("Td", 24),
            HBP => ("D6h", 24),
            CSA | CSP => ("C4v", 8),
            SC | HDR | BCC | FCC => ("Oh", 48),
            BSA | SA => ("D4d", 16),
            BSP => ("D4h", 16),
            CPP | CPA => ("C5v", 10),
            ICO => ("Ih", 120),
        }
    }
}

impl fmt::Display for GeometryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaxonomyClass {
    Spheroidal,
    Ellipsoidal,
    Bipyramidal,
    Cuboidal,
    Tetrahedral,
}

impl TaxonomyClass {
    pub const ALL: [TaxonomyClass; 5] = [
        TaxonomyClass::Spheroidal,
        TaxonomyClass::Ellipsoidal,
        TaxonomyClass::Bipyramidal,
        TaxonomyClass::Cuboidal,
        TaxonomyClass::Tetrahedral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaxonomyClass::Spheroidal => "spheroidal",
            TaxonomyClass::Ellipsoidal => "ellipsoidal",
            TaxonomyClass::Bipyramidal => "bipyramidal",
            TaxonomyClass::Cuboidal => "cuboidal",
            TaxonomyClass::Tetrahedral => "tetrahedral",
        }
    }
}

impl fmt::Display for TaxonomyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named ideal coordination geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometrySpec {
    pub code: GeometryCode,
    pub vertices: Vec<Vec3>,
}

impl GeometrySpec {
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn name(&self) -> &'static str {
        self.code.name()
    }

    pub fn polyhedral_class(&self) -> &'static str {
        self.code.polyhedral_class()
    }

    pub fn taxonomy(&self) -> TaxonomyClass {
        self.code.taxonomy()
    }
}

/// Serialized form used by `catalog dump`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeometryRecord {
    pub code: GeometryCode,
    pub name: String,
    pub k: usize,
    pub vertices: Vec<[f64; 3]>,
    pub class: TaxonomyClass,
    pub polyhedral_class: String,
    pub point_group: String,
    pub point_group_order: u32,
}

impl From<&GeometrySpec> for GeometryRecord {
    fn from(g: &GeometrySpec) -> Self {
        let (pg, order) = g.code.point_group();
        GeometryRecord {
            code: g.code,
            name: g.name().to_string(),
            k: g.k(),
            vertices: g.vertices.iter().map(|v| v.to_array()).collect(),
            class: g.taxonomy(),
            polyhedral_class: g.polyhedral_class().to_string(),
            point_group: pg.to_string(),
            point_group_order: order,
        }
    }
}

/// Radius of the outer four SDS vertices relative to the inner four.
const SDS_OUTER_RATIO: f64 = 1.27;

fn ring(n: usize, radius: f64, z: f64, offset: f64) -> Vec<Vec3> {
    (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64 + offset;
            Vec3::new(radius * a.cos(), radius * a.sin(), z)
        })
        .collect()
}

fn scaled(points: Vec<Vec3>, s: f64) -> Vec<Vec3> {
    points.into_iter().map(|p| p * s).collect()
}

fn cube() -> Vec<Vec3> {
    let s = 1.0 / 3f64.sqrt();
    let mut out = Vec::with_capacity(8);
    for &x in &[1.0, -1.0] {
        for &y in &[1.0, -1.0] {
            for &z in &[1.0, -1.0] {
                out.push(Vec3::new(x * s, y * s, z * s));
            }
        }
    }
    out
}

fn octahedron(r: f64) -> Vec<Vec3> {
    vec![
        Vec3::new(r, 0.0, 0.0),
        Vec3::new(-r, 0.0, 0.0),
        Vec3::new(0.0, r, 0.0),
        Vec3::new(0.0, -r, 0.0),
        Vec3::new(0.0, 0.0, r),
        Vec3::new(0.0, 0.0, -r),
    ]
}

fn icosahedron() -> Vec<Vec3> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut out = Vec::with_capacity(12);
    for &a in &[1.0, -1.0] {
        for &b in &[phi, -phi] {
            out.push(Vec3::new(0.0, a, b));
            out.push(Vec3::new(b, 0.0, a));
            out.push(Vec3::new(a, b, 0.0));
        }
    }
    out.into_iter().map(Vec3::normalized).collect()
}

fn bipyramid(n: usize) -> Vec<Vec3> {
    let mut v = ring(n, 1.0, 0.0, 0.0);
    v.push(Vec3::new(0.0, 0.0, 1.0));
    v.push(Vec3::new(0.0, 0.0, -1.0));
    v
}

/// Uniform (unit-edge) trigonal prism rescaled to unit circumradius, with
/// `caps` vertices over its square faces at the shell radius.
fn capped_trigonal_prism(caps: usize) -> Vec<Vec3> {
    let r = 1.0 / 3f64.sqrt();
    let mut v = ring(3, r, 0.5, 0.0);
    v.extend(ring(3, r, -0.5, 0.0));
    let rho = (r * r + 0.25).sqrt();
    let mut v = scaled(v, 1.0 / rho);
    for j in 0..caps {
        let a = PI * (2 * j + 1) as f64 / 3.0;
        v.push(Vec3::new(a.cos(), a.sin(), 0.0));
    }
    v
}

/// Uniform pentagonal prism at unit circumradius with axial caps at the shell radius.
fn capped_pentagonal_prism(caps: usize) -> Vec<Vec3> {
    let r = 1.0 / (2.0 * (PI / 5.0).sin());
    let mut v = ring(5, r, 0.5, 0.0);
    v.extend(ring(5, r, -0.5, 0.0));
    let rho = (r * r + 0.25).sqrt();
    let mut v = scaled(v, 1.0 / rho);
    for &z in [1.0, -1.0].iter().take(caps) {
        v.push(Vec3::new(0.0, 0.0, z));
    }
    v
}

/// Uniform square antiprism with unit-edge square pyramids over its square faces.
fn capped_square_antiprism(caps: usize) -> Vec<Vec3> {
    let r = 1.0 / 2f64.sqrt();
    let h = (0.5f64).sqrt().sqrt();
    let mut v = ring(4, r, h / 2.0, 0.0);
    v.extend(ring(4, r, -h / 2.0, PI / 4.0));
    let apex = h / 2.0 + (1.0 - r * r).sqrt();
    for &s in [1.0, -1.0].iter().take(caps) {
        v.push(Vec3::new(0.0, 0.0, s * apex));
    }
    let rho = (r * r + h * h / 4.0).sqrt();
    scaled(v, 1.0 / rho)
}

/// Snub disphenoid (Johnson solid J84) bond directions.
fn snub_disphenoid() -> Vec<Vec3> {
    // positive root of 2q^3 + 11q^2 + 4q - 1
    let mut q: f64 = 0.17;
    for _ in 0..50 {
        let f = ((2.0 * q + 11.0) * q + 4.0) * q - 1.0;
        let df = (6.0 * q + 22.0) * q + 4.0;
        q -= f / df;
    }
    let r = q.sqrt();
    let s = ((1.0 - q) / (2.0 * q)).sqrt();
    let t = (2.0 - 2.0 * q).sqrt();
    let inner = [
        Vec3::new(t, r, 0.0),
        Vec3::new(-t, r, 0.0),
        Vec3::new(0.0, -r, t),
        Vec3::new(0.0, -r, -t),
    ];
    let outer = [
        Vec3::new(1.0, -s, 0.0),
        Vec3::new(-1.0, -s, 0.0),
        Vec3::new(0.0, s, 1.0),
        Vec3::new(0.0, s, -1.0),
    ];
    inner
        .iter()
        .map(|v| v.normalized())
        .chain(outer.iter().map(|v| v.normalized() * SDS_OUTER_RATIO))
        .collect()
}

/// Exact vertex directions for a catalog geometry.
pub fn build_geometry(code: GeometryCode) -> GeometrySpec {
    use GeometryCode::*;
    let vertices = match code {
        TET => [
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ]
        .iter()
        .map(|v| v.normalized())
        .collect(),
        SC => octahedron(1.0),
        HDR => cube(),
        ICO => icosahedron(),
        CPA => {
            let removed = Vec3::new(0.0, 1.0, (1.0 + 5f64.sqrt()) / 2.0).normalized();
            icosahedron()
                .into_iter()
                .filter(|v| (*v - removed).norm() > 1e-9)
                .collect()
        }
        FCC => {
            let s = 1.0 / 2f64.sqrt();
            let mut v = Vec::with_capacity(12);
            for &a in &[s, -s] {
                for &b in &[s, -s] {
                    v.push(Vec3::new(a, b, 0.0));
                    v.push(Vec3::new(0.0, a, b));
                    v.push(Vec3::new(b, 0.0, a));
                }
            }
            v
        }
        HCP => {
            // ideal c/a = sqrt(8/3): three neighbours above and three below, eclipsed
            let z = (2.0f64 / 3.0).sqrt();
            let r = 1.0 / 3f64.sqrt();
            let mut v = ring(6, 1.0, 0.0, 0.0);
            v.extend(ring(3, r, z, PI / 6.0));
            v.extend(ring(3, r, -z, PI / 6.0));
            v
        }
        BCC => {
            let mut v = cube();
            v.extend(octahedron(2.0 / 3f64.sqrt()));
            v
        }
        TBP => bipyramid(3),
        PBP => bipyramid(5),
        HBP => bipyramid(6),
        CTP => capped_trigonal_prism(1),
        BTP => capped_trigonal_prism(2),
        TTP => capped_trigonal_prism(3),
        SA => capped_square_antiprism(0),
        CSA => capped_square_antiprism(1),
        BSA => capped_square_antiprism(2),
        CSP => {
            let mut v = cube();
            // unit-edge square pyramid on the top face
            let half = 1.0 / 3f64.sqrt();
            v.push(Vec3::new(0.0, 0.0, half * (1.0 + 2f64.sqrt())));
            v
        }
        BSP => {
            let mut v = cube();
            let second = 2.0 / 3f64.sqrt();
            v.push(Vec3::new(0.0, 0.0, second));
            v.push(Vec3::new(0.0, 0.0, -second));
            v
        }
        CPP => capped_pentagonal_prism(1),
        BPP => capped_pentagonal_prism(2),
        SDS => snub_disphenoid(),
    };
    GeometrySpec { code, vertices }
}

/// Parses a code and builds its geometry.
pub fn build_geometry_named(code: &str) -> Result<GeometrySpec> {
    Ok(build_geometry(code.parse()?))
}

/// The 22 geometries together with the capping relation between them.
#[derive(Clone, Debug)]
pub struct Catalog {
    geometries: Vec<GeometrySpec>,
    /// Ordered pairs `(capped, capping)`: the second is a capping of the first.
    capping_relation: Vec<(GeometryCode, GeometryCode)>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::new()
    }
}

impl Catalog {
    pub fn new() -> Self {
        use GeometryCode::*;
        Catalog {
            geometries: GeometryCode::ALL.iter().map(|&c| build_geometry(c)).collect(),
            capping_relation: vec![
                (CTP, BTP),
                (BTP, TTP),
                (HDR, CSP),
                (CSP, BSP),
                (CPP, BPP),
                (CPA, ICO),
                (SA, CSA),
                (CSA, BSA),
            ],
        }
    }

    pub fn geometries(&self) -> &[GeometrySpec] {
        &self.geometries
    }

    pub fn get(&self, code: GeometryCode) -> &GeometrySpec {
        &self.geometries[code.index()]
    }

    pub fn len(&self) -> usize {
        self.geometries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.geometries.is_empty()
    }

    pub fn capping_relation(&self) -> &[(GeometryCode, GeometryCode)] {
        &self.capping_relation
    }

    /// Codes that can be reached from `code` by repeated capping.
    pub fn cappings_of(&self, code: GeometryCode) -> BTreeSet<GeometryCode> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![code];
        while let Some(c) = stack.pop() {
            for &(capped, capping) in &self.capping_relation {
                if capped == c && seen.insert(capping) {
                    stack.push(capping);
                }
            }
        }
        seen
    }

    pub fn capping_is_acyclic(&self) -> bool {
        GeometryCode::ALL
            .iter()
            .all(|&c| !self.cappings_of(c).contains(&c))
    }

    /// Geometries that no other catalog member caps, in catalog order.
    pub fn capping_reduced_set(&self) -> Vec<GeometryCode> {
        self.geometries
            .iter()
            .map(|g| g.code)
            .filter(|&c| self.cappings_of(c).is_empty())
            .collect()
    }

    pub fn records(&self) -> Vec<GeometryRecord> {
        self.geometries.iter().map(GeometryRecord::from).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.records())?)
    }
}
