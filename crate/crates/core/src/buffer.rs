//! Planar 8-bit raster buffers and the luma plane derived from them.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum BufferError {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyFrame { width: u32, height: u32 },
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    UnsupportedChannels(u8),
    #[error("sample count {actual} does not match {expected} for the declared geometry")]
    SampleCount { expected: usize, actual: usize },
}

/// A planar image with 1 (gray) or 3 (RGB) channels of 8-bit samples.
///
/// Planes are stored back to back, each one row-major with `width * height`
/// samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelBuffer {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl PixelBuffer {
    /// Builds a buffer from planar data (all of plane 0, then plane 1, ...).
    pub fn from_planar(
        width: u32,
        height: u32,
        channels: u8,
        data: Vec<u8>,
    ) -> Result<Self, BufferError> {
        let expected = Self::check_geometry(width, height, channels)?;
        if data.len() != expected {
            return Err(BufferError::SampleCount { expected, actual: data.len() });
        }
        Ok(Self { width, height, channels, data })
    }

    /// Builds a buffer from pixel-interleaved data (`RGBRGB...` for 3 channels).
    pub fn from_interleaved(
        width: u32,
        height: u32,
        channels: u8,
        samples: &[u8],
    ) -> Result<Self, BufferError> {
        let expected = Self::check_geometry(width, height, channels)?;
        if samples.len() != expected {
            return Err(BufferError::SampleCount { expected, actual: samples.len() });
        }
        let ch = channels as usize;
        let area = expected / ch;
        let mut data = vec![0u8; expected];
        for (p, px) in samples.chunks_exact(ch).enumerate() {
            for (j, &s) in px.iter().enumerate() {
                data[j * area + p] = s;
            }
        }
        Ok(Self { width, height, channels, data })
    }

    /// A buffer with every sample of every channel set to `value`.
    pub fn filled(width: u32, height: u32, channels: u8, value: u8) -> Result<Self, BufferError> {
        let len = Self::check_geometry(width, height, channels)?;
        Ok(Self { width, height, channels, data: vec![value; len] })
    }

    fn check_geometry(width: u32, height: u32, channels: u8) -> Result<usize, BufferError> {
        if width == 0 || height == 0 {
            return Err(BufferError::EmptyFrame { width, height });
        }
        if channels != 1 && channels != 3 {
            return Err(BufferError::UnsupportedChannels(channels));
        }
        Ok(width as usize * height as usize * channels as usize)
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn channels(&self) -> u8 {
        self.channels
    }

    /// Number of pixels, `width * height`.
    #[inline]
    pub fn area(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Row-major samples of channel `j`.
    pub fn plane(&self, j: usize) -> &[u8] {
        let area = self.area();
        &self.data[j * area..(j + 1) * area]
    }

    pub(crate) fn plane_mut(&mut self, j: usize) -> &mut [u8] {
        let area = self.area();
        &mut self.data[j * area..(j + 1) * area]
    }

    /// All planes back to back.
    pub fn planar_data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: u32, y: u32, j: usize) -> u8 {
        self.plane(j)[y as usize * self.width as usize + x as usize]
    }

    /// Samples in pixel-interleaved order.
    pub fn to_interleaved(&self) -> Vec<u8> {
        let ch = self.channels as usize;
        if ch == 1 {
            return self.data.clone();
        }
        let area = self.area();
        let mut out = Vec::with_capacity(self.data.len());
        for p in 0..area {
            for j in 0..ch {
                out.push(self.data[j * area + p]);
            }
        }
        out
    }
}

/// A single row-major sample plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane<T> {
    pub width: u32,
    pub height: u32,
    pub data: Vec<T>,
}

impl<T: Copy> Plane<T> {
    #[inline]
    pub fn get(&self, x: u32, y: u32) -> T {
        self.data[y as usize * self.width as usize + x as usize]
    }
}

/// Luma weights scaled by 1000 so the weighted sum stays exact in integers.
const LUMA_WEIGHTS_MILLI: [u32; 3] = [299, 587, 114];

#[inline]
fn luma_milli(r: u8, g: u8, b: u8) -> u32 {
    LUMA_WEIGHTS_MILLI[0] * r as u32 + LUMA_WEIGHTS_MILLI[1] * g as u32 + LUMA_WEIGHTS_MILLI[2] * b as u32
}

/// Real-valued luma: the single plane for gray input, otherwise
/// `0.299 R + 0.587 G + 0.114 B`.
pub fn luma_plane(buf: &PixelBuffer) -> Plane<f64> {
    let data = match buf.channels() {
        1 => buf.plane(0).iter().map(|&v| v as f64).collect(),
        _ => {
            let (r, g, b) = (buf.plane(0), buf.plane(1), buf.plane(2));
            (0..buf.area())
                .map(|p| luma_milli(r[p], g[p], b[p]) as f64 / 1000.0)
                .collect()
        }
    };
    Plane { width: buf.width(), height: buf.height(), data }
}

/// Luma rounded half away from zero to 8-bit histogram symbols.
///
/// The weighted sum is evaluated exactly in integer arithmetic, so values such
/// as `x.5` round deterministically.
pub fn luma_symbols(buf: &PixelBuffer) -> Plane<u8> {
    let data = match buf.channels() {
        1 => buf.plane(0).to_vec(),
        _ => {
            let (r, g, b) = (buf.plane(0), buf.plane(1), buf.plane(2));
            (0..buf.area())
                // nonnegative, so half-up is half-away-from-zero
                .map(|p| ((luma_milli(r[p], g[p], b[p]) + 500) / 1000) as u8)
                .collect()
        }
    };
    Plane { width: buf.width(), height: buf.height(), data }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn interleave_roundtrip() {
        let px = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];
        let buf = PixelBuffer::from_interleaved(2, 2, 3, &px).unwrap();
        assert_eq!(buf.plane(0), &[1, 4, 7, 10]);
        assert_eq!(buf.plane(1), &[2, 5, 8, 11]);
        assert_eq!(buf.plane(2), &[3, 6, 9, 12]);
        assert_eq!(buf.to_interleaved(), px);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert_eq!(
            PixelBuffer::filled(0, 3, 1, 0),
            Err(BufferError::EmptyFrame { width: 0, height: 3 })
        );
        assert_eq!(PixelBuffer::filled(1, 1, 2, 0), Err(BufferError::UnsupportedChannels(2)));
        assert_eq!(
            PixelBuffer::from_planar(2, 2, 1, vec![0; 3]),
            Err(BufferError::SampleCount { expected: 4, actual: 3 })
        );
    }

    #[test]
    fn luma_of_gray_is_identity() {
        let buf = PixelBuffer::from_planar(3, 1, 1, vec![0, 17, 255]).unwrap();
        assert_eq!(luma_plane(&buf).data, vec![0.0, 17.0, 255.0]);
        assert_eq!(luma_symbols(&buf).data, vec![0, 17, 255]);
    }

    #[test]
    fn luma_of_rgb() {
        let buf = PixelBuffer::from_interleaved(2, 1, 3, &[255, 255, 255, 255, 0, 0]).unwrap();
        let y = luma_plane(&buf);
        assert_eq!(y.data[0], 255.0);
        assert!((y.data[1] - 76.245).abs() < 1e-12);
        assert_eq!(luma_symbols(&buf).data, vec![255, 76]);
    }

    #[test]
    fn luma_rounds_half_away_from_zero() {
        // first RGB triple whose luma is exactly k + 0.5
        let mut found = false;
        'outer: for r in 0..=255u32 {
            for g in 0..=255u32 {
                for b in 0..=255u32 {
                    let m = 299 * r + 587 * g + 114 * b;
                    if m % 1000 == 500 {
                        let buf = PixelBuffer::from_interleaved(1, 1, 3, &[r as u8, g as u8, b as u8]).unwrap();
                        assert_eq!(luma_symbols(&buf).data[0] as u32, m / 1000 + 1);
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(found);
    }
}
