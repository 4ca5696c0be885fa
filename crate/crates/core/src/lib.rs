//! Hierarchical cuboid partitioning of image frames.
//!
//! A frame is split greedily into `n` axis-aligned rectangles ("cuboids"),
//! each split chosen to minimise the entropy of the resulting pair. Every
//! cuboid is summarised by its per-channel mean, and the split indices plus
//! the means are packed into a small self-delimiting bitstream from which a
//! full-resolution coarse frame can be rebuilt.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, timing and the
//! command-line front end live in the companion `cupid` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bitio;
pub mod buffer;
pub mod codec;
pub mod descriptors;
pub mod entropy;
pub mod metrics;
pub mod partition;
mod pipeline;

pub use buffer::{luma_plane, luma_symbols, BufferError, PixelBuffer, Plane};
pub use codec::{deserialize, predicted_size_bits, serialize, CodecError, CodedStream};
pub use descriptors::{compute_descriptors, reconstruct, DescriptorError, DescriptorSet};
pub use entropy::{entropy, EntropyError, Histogram};
pub use metrics::{mse, render_overlay, y_psnr, MetricsError};
pub use partition::{
    best_split, best_split_naive, partition, partition_with, split_objective, Cuboid,
    Join, ObjectiveConfig, Orientation, PartitionError, PartitionTree, Sequential, Split,
    SplitDecision, Weighting,
};
pub use pipeline::{encode, Encoded, Error};
