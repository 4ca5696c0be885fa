//! The `.cupd` bitstream.
//!
//! ```text
//! "CUPD" | version u8 = 1 | channels u8 | width u16 BE | height u16 BE
//! tree bits, preorder, MSB first:
//!     leaf     -> 0
//!     internal -> 1, orientation (0 vertical, 1 horizontal),
//!                 offset - 1 in ceil(log2(D - 1)) bits
//! zero padding to the next byte
//! descriptors: `channels` bytes per leaf, leaves in preorder
//! ```
//!
//! `D` is the node's extent along the split axis. The decoder knows every
//! node's size from its ancestors, so the offset width needs no signalling and
//! is zero when `D = 2`.

use alloc::vec::Vec;

use crate::bitio::{BitReader, BitWriter};
use crate::descriptors::DescriptorSet;
use crate::partition::{NodeKind, Orientation, PartitionTree, Split};

pub const MAGIC: [u8; 4] = *b"CUPD";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("frame {width}x{height} exceeds the 65535 pixel limit per side")]
    FrameTooLarge { width: u32, height: u32 },
    #[error("descriptor set does not match the partition ({leaves} leaves, {values} values, {channels} channels)")]
    DescriptorMismatch { leaves: usize, values: usize, channels: u8 },
    #[error("bad magic, not a CUPD stream")]
    BadMagic,
    #[error("unsupported stream version {0}")]
    BadVersion(u8),
    #[error("unsupported channel count {0}")]
    BadChannels(u8),
    #[error("invalid frame size {width}x{height}")]
    BadDimensions { width: u16, height: u16 },
    #[error("infeasible split at tree bit {bit}: {split:?} on a {w}x{h} cuboid")]
    InfeasibleSplit { bit: u64, split: Split, w: u32, h: u32 },
    #[error("stream truncated")]
    TruncatedStream,
    #[error("{0} unexpected bytes after the descriptors")]
    TrailingData(usize),
}

/// A serialized partition plus descriptors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedStream(Vec<u8>);

impl CodedStream {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coded size in bits, `8 * len()`.
    pub fn bits(&self) -> u64 {
        8 * self.0.len() as u64
    }
}

impl AsRef<[u8]> for CodedStream {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// Bits needed for `offset - 1` when the split axis is `extent` pixels long.
#[inline]
pub fn offset_width(extent: u32) -> u32 {
    debug_assert!(extent >= 2);
    if extent <= 2 {
        0
    } else {
        u32::BITS - (extent - 2).leading_zeros()
    }
}

fn orientation_bit(o: Orientation) -> bool {
    o == Orientation::Horizontal
}

/// Number of tree bits, without padding.
pub fn tree_bits(tree: &PartitionTree) -> u64 {
    tree.nodes()
        .iter()
        .map(|node| match node.kind {
            NodeKind::Leaf => 1,
            NodeKind::Internal { split, .. } => {
                2 + offset_width(node.cuboid.extent(split.orientation)) as u64
            }
        })
        .sum()
}

/// Exact size of `serialize(tree, ..)` in bits for `channels`-channel descriptors.
pub fn predicted_size_bits(tree: &PartitionTree, channels: u8) -> u64 {
    let tree_bytes = tree_bits(tree).div_ceil(8);
    8 * (HEADER_LEN as u64 + tree_bytes + tree.leaf_count() as u64 * channels as u64)
}

pub fn serialize(tree: &PartitionTree, desc: &DescriptorSet) -> Result<CodedStream, CodecError> {
    let (width, height) = (tree.width(), tree.height());
    if width > u16::MAX as u32 || height > u16::MAX as u32 {
        return Err(CodecError::FrameTooLarge { width, height });
    }
    if desc.check_matches(tree).is_err() {
        return Err(CodecError::DescriptorMismatch {
            leaves: tree.leaf_count(),
            values: desc.values().len(),
            channels: desc.channels(),
        });
    }

    let mut out = Vec::with_capacity((predicted_size_bits(tree, desc.channels()) / 8) as usize);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(desc.channels());
    out.extend_from_slice(&(width as u16).to_be_bytes());
    out.extend_from_slice(&(height as u16).to_be_bytes());

    let mut bits = BitWriter::new();
    for id in tree.preorder() {
        let node = tree.node(id);
        match node.kind {
            NodeKind::Leaf => bits.write_bit(false),
            NodeKind::Internal { split, .. } => {
                bits.write_bit(true);
                bits.write_bit(orientation_bit(split.orientation));
                let extent = node.cuboid.extent(split.orientation);
                bits.write_bits(split.offset - 1, offset_width(extent));
            }
        }
    }
    out.extend_from_slice(&bits.finish());
    out.extend_from_slice(desc.values());
    Ok(CodedStream(out))
}

pub fn deserialize(bytes: &[u8]) -> Result<(PartitionTree, DescriptorSet), CodecError> {
    if bytes.len() < HEADER_LEN {
        return Err(CodecError::TruncatedStream);
    }
    if bytes[..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    if bytes[4] != VERSION {
        return Err(CodecError::BadVersion(bytes[4]));
    }
    let channels = bytes[5];
    if channels != 1 && channels != 3 {
        return Err(CodecError::BadChannels(channels));
    }
    let width = u16::from_be_bytes([bytes[6], bytes[7]]);
    let height = u16::from_be_bytes([bytes[8], bytes[9]]);
    if width == 0 || height == 0 {
        return Err(CodecError::BadDimensions { width, height });
    }

    let body = &bytes[HEADER_LEN..];
    let mut tree = PartitionTree::new(width as u32, height as u32);
    let mut reader = BitReader::new(body);
    let mut stack = alloc::vec![PartitionTree::ROOT];
    while let Some(id) = stack.pop() {
        let bit = reader.position();
        if !reader.read_bit().map_err(|_| CodecError::TruncatedStream)? {
            continue;
        }
        let orientation = match reader.read_bit().map_err(|_| CodecError::TruncatedStream)? {
            false => Orientation::Vertical,
            true => Orientation::Horizontal,
        };
        let cuboid = tree.node(id).cuboid;
        let extent = cuboid.extent(orientation);
        let infeasible = |offset| CodecError::InfeasibleSplit {
            bit,
            split: Split { orientation, offset },
            w: cuboid.w,
            h: cuboid.h,
        };
        if extent < 2 {
            return Err(infeasible(0));
        }
        let offset = reader
            .read_bits(offset_width(extent))
            .map_err(|_| CodecError::TruncatedStream)?
            + 1;
        if offset >= extent {
            return Err(infeasible(offset));
        }
        let [first, second] = tree
            .split_leaf(id, Split { orientation, offset }, None)
            .map_err(|_| infeasible(offset))?;
        stack.push(second);
        stack.push(first);
    }

    let desc_start = reader.bytes_consumed();
    let needed = tree.leaf_count() * channels as usize;
    let rest = &body[desc_start..];
    if rest.len() < needed {
        return Err(CodecError::TruncatedStream);
    }
    if rest.len() > needed {
        return Err(CodecError::TrailingData(rest.len() - needed));
    }
    let desc = DescriptorSet::new(channels, rest.to_vec()).expect("channel count validated above");
    Ok((tree, desc))
}
