//! Std companion to `cupid-core`: PPM/PGM files, rate/quality sweeps, leaf
//! maps and a rayon-backed executor for the partitioner.

pub mod leafmap;
pub mod parallel;
pub mod pnm;
pub mod sweep;

pub use leafmap::{leaf_map, leaf_map_json, LeafRect};
pub use parallel::Rayon;
pub use pnm::{load_ppm, read_image, save_ppm, write_image, PnmError};
pub use sweep::{analyze_sweep, write_csv, MetricsRecord};
