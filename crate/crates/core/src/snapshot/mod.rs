//! Per-particle analysis of particle configurations.

pub mod analysis;
pub mod io;
pub mod lattice;
pub mod neighbours;

pub use analysis::{analyze, classify, per_particle_e, FrameAnalysis, ParticleResult, Summary};
pub use io::{read_frames, write_frames, Format, Frame};
pub use lattice::{generate_lattice, with_noise, LatticeKind};
pub use neighbours::{auto_cutoff, neighbours_cutoff, NeighbourList};
