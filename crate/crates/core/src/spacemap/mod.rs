//! The metric space of catalog geometries: distances, clustering, embedding,
//! neighbourhood graph and typicality.

pub mod delaunay;
pub mod dendrogram;
pub mod distance;
pub mod mds;
pub mod typicality;

pub use delaunay::{delaunay_2d, Triangulation};
pub use dendrogram::{hierarchical_cluster, Dendrogram, Merge};
pub use distance::{distance_matrix, DistanceMatrix, MetricReport};
pub use mds::{mds, Embedding, MdsParams, Projection};
pub use typicality::{class_averages, order_typicality_scatter, typicality, ClassAverage, TypicalityReport};
