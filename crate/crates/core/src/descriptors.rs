//! Per-cuboid mean descriptors and the piecewise-constant coarse frame.

use alloc::vec::Vec;

use crate::buffer::PixelBuffer;
use crate::partition::PartitionTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DescriptorError {
    #[error("frame is {buf_w}x{buf_h} but the partition covers {tree_w}x{tree_h}")]
    DimensionMismatch { buf_w: u32, buf_h: u32, tree_w: u32, tree_h: u32 },
    #[error("expected {expected} descriptor values for the partition, got {actual}")]
    CountMismatch { expected: usize, actual: usize },
    #[error("unsupported channel count {0}")]
    UnsupportedChannels(u8),
}

/// Quantised per-channel means, leaf-major in preorder:
/// `values[i * channels + j]` is channel `j` of leaf `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptorSet {
    channels: u8,
    values: Vec<u8>,
}

impl DescriptorSet {
    pub fn new(channels: u8, values: Vec<u8>) -> Result<Self, DescriptorError> {
        if channels != 1 && channels != 3 {
            return Err(DescriptorError::UnsupportedChannels(channels));
        }
        if !values.len().is_multiple_of(channels as usize) {
            return Err(DescriptorError::CountMismatch {
                expected: values.len().next_multiple_of(channels as usize),
                actual: values.len(),
            });
        }
        Ok(Self { channels, values })
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    /// Number of leaves described.
    pub fn len(&self) -> usize {
        self.values.len() / self.channels as usize
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// All channels of leaf `i`.
    pub fn leaf(&self, i: usize) -> &[u8] {
        let c = self.channels as usize;
        &self.values[i * c..(i + 1) * c]
    }

    pub(crate) fn check_matches(&self, tree: &PartitionTree) -> Result<(), DescriptorError> {
        let expected = tree.leaf_count() * self.channels as usize;
        if self.values.len() != expected {
            return Err(DescriptorError::CountMismatch { expected, actual: self.values.len() });
        }
        Ok(())
    }
}

/// `round(sum / count)` with halves rounded away from zero, in exact integer
/// arithmetic.
#[inline]
pub(crate) fn rounded_mean(sum: u64, count: u64) -> u8 {
    ((2 * sum + count) / (2 * count)) as u8
}

pub(crate) fn check_dims(buf: &PixelBuffer, tree: &PartitionTree) -> Result<(), DescriptorError> {
    if buf.width() != tree.width() || buf.height() != tree.height() {
        return Err(DescriptorError::DimensionMismatch {
            buf_w: buf.width(),
            buf_h: buf.height(),
            tree_w: tree.width(),
            tree_h: tree.height(),
        });
    }
    Ok(())
}

/// Mean of every channel over every leaf, rounded half away from zero.
pub fn compute_descriptors(buf: &PixelBuffer, tree: &PartitionTree) -> Result<DescriptorSet, DescriptorError> {
    check_dims(buf, tree)?;
    let channels = buf.channels() as usize;
    let leaves = tree.leaves_preorder();
    let mut values = Vec::with_capacity(leaves.len() * channels);
    for leaf in &leaves {
        for j in 0..channels {
            let plane = buf.plane(j);
            let sum: u64 = leaf.indices(buf.width()).map(|i| plane[i] as u64).sum();
            values.push(rounded_mean(sum, leaf.area()));
        }
    }
    Ok(DescriptorSet { channels: buf.channels(), values })
}

/// The coarse frame: every pixel of leaf `i` takes descriptor `i`.
pub fn reconstruct(tree: &PartitionTree, desc: &DescriptorSet) -> Result<PixelBuffer, DescriptorError> {
    desc.check_matches(tree)?;
    let mut out = PixelBuffer::filled(tree.width(), tree.height(), desc.channels(), 0)
        .expect("tree dimensions are at least 1x1");
    for (i, leaf) in tree.leaves_preorder().iter().enumerate() {
        for (j, &v) in desc.leaf(i).iter().enumerate() {
            let plane = out.plane_mut(j);
            for p in leaf.indices(tree.width()) {
                plane[p] = v;
            }
        }
    }
    Ok(out)
}
