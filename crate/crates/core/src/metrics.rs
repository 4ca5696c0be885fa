//! Distortion measures and the cuboid-map overlay.

use alloc::vec::Vec;

use crate::buffer::{luma_plane, PixelBuffer};
use crate::descriptors::check_dims;
use crate::partition::PartitionTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("cannot compare a {0:?} image with a {1:?} image")]
    DimensionMismatch((u32, u32, u8), (u32, u32, u8)),
}

fn shape(b: &PixelBuffer) -> (u32, u32, u8) {
    (b.width(), b.height(), b.channels())
}

fn same_shape(a: &PixelBuffer, b: &PixelBuffer) -> Result<(), MetricsError> {
    if shape(a) != shape(b) {
        return Err(MetricsError::DimensionMismatch(shape(a), shape(b)));
    }
    Ok(())
}

/// Mean squared error of each channel.
pub fn mse(a: &PixelBuffer, b: &PixelBuffer) -> Result<Vec<f64>, MetricsError> {
    same_shape(a, b)?;
    let n = a.area() as f64;
    Ok((0..a.channels() as usize)
        .map(|j| {
            let sse: u64 = a
                .plane(j)
                .iter()
                .zip(b.plane(j))
                .map(|(&x, &y)| {
                    let d = x as i64 - y as i64;
                    (d * d) as u64
                })
                .sum();
            sse as f64 / n
        })
        .collect())
}

/// Peak signal-to-noise ratio for a given MSE at 8-bit peak. Zero error gives
/// `f64::INFINITY`.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * libm::log10(255.0 * 255.0 / mse)
    }
}

/// MSE between the unrounded luma planes of `a` and `b`.
pub fn luma_mse(a: &PixelBuffer, b: &PixelBuffer) -> Result<f64, MetricsError> {
    same_shape(a, b)?;
    if a.channels() == 1 {
        return Ok(mse(a, b)?[0]);
    }
    let (ya, yb) = (luma_plane(a), luma_plane(b));
    let sse: f64 = ya.data.iter().zip(&yb.data).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sse / a.area() as f64)
}

/// Y-PSNR in dB; `f64::INFINITY` when the luma planes are identical.
pub fn y_psnr(original: &PixelBuffer, recon: &PixelBuffer) -> Result<f64, MetricsError> {
    luma_mse(original, recon).map(psnr_from_mse)
}

/// Copy of `buf` with the one-pixel ring of every leaf set to white.
pub fn render_overlay(buf: &PixelBuffer, tree: &PartitionTree) -> Result<PixelBuffer, crate::DescriptorError> {
    check_dims(buf, tree)?;
    let mut out = buf.clone();
    let stride = buf.width() as usize;
    let leaves = tree.leaves_preorder();
    for j in 0..buf.channels() as usize {
        let plane = out.plane_mut(j);
        for c in &leaves {
            let (x0, y0) = (c.x as usize, c.y as usize);
            let (x1, y1) = (x0 + c.w as usize - 1, y0 + c.h as usize - 1);
            for x in x0..=x1 {
                plane[y0 * stride + x] = 255;
                plane[y1 * stride + x] = 255;
            }
            for y in y0..=y1 {
                plane[y * stride + x0] = 255;
                plane[y * stride + x1] = 255;
            }
        }
    }
    Ok(out)
}
