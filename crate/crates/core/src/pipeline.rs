use crate::buffer::PixelBuffer;
use crate::codec::{serialize, CodecError, CodedStream};
use crate::descriptors::{compute_descriptors, reconstruct, DescriptorError, DescriptorSet};
use crate::metrics::MetricsError;
use crate::partition::{partition_with, Join, ObjectiveConfig, PartitionError, PartitionTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Output of the encode path.
#[derive(Debug, Clone)]
pub struct Encoded {
    pub tree: PartitionTree,
    pub descriptors: DescriptorSet,
    pub stream: CodedStream,
}

impl Encoded {
    /// The coarse frame a decoder would rebuild from `stream`.
    pub fn reconstruct(&self) -> PixelBuffer {
        reconstruct(&self.tree, &self.descriptors).expect("descriptors were computed from this tree")
    }
}

/// Partition, describe and serialize `buf` with `n` cuboids.
pub fn encode<J: Join>(buf: &PixelBuffer, n: usize, cfg: ObjectiveConfig, exec: &J) -> Result<Encoded, Error> {
    let tree = partition_with(buf, n, cfg, exec)?;
    let descriptors = compute_descriptors(buf, &tree)?;
    let stream = serialize(&tree, &descriptors)?;
    Ok(Encoded { tree, descriptors, stream })
}
