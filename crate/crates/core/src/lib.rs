//! Extracopularity of coordination geometries: catalog, angle discretization,
//! coefficients, shape parameters, the induced metric space and snapshot analysis.

pub mod angles;
pub mod catalog;
pub mod error;
pub mod extracop;
pub mod shape;
pub mod snapshot;
pub mod spacemap;
pub mod vec3;

pub use angles::{
    axioms_satisfied, AngleProfile, AxiomReport, ClassCounting, Discretizer, DiscretizerParams,
    PoolWeighting, Representative,
};
pub use catalog::{build_geometry, Catalog, GeometryCode, GeometrySpec, TaxonomyClass};
pub use error::{Error, Result};
pub use extracop::{d_e, e_many, e_one, ParticleDescriptor, UnionMode};
pub use shape::{convex_hull, moment_per_neighbour, sphericity};
pub use spacemap::{
    delaunay_2d, distance_matrix, hierarchical_cluster, mds, typicality, DistanceMatrix, Embedding,
    MdsParams, TypicalityReport,
};
pub use vec3::Vec3;
pub use snapshot::{analyze, classify, generate_lattice, neighbours_cutoff, read_frames, Frame, LatticeKind};
