//! Binary PGM (P5) and PPM (P6) with maxval 255.
//!
//! Header fields are separated by whitespace and may be interleaved with `#`
//! comments running to the end of the line. Exactly one whitespace byte
//! separates the maxval from the raster.

use std::fs;
use std::io;
use std::path::Path;

use cupid_core::PixelBuffer;

#[derive(Debug, thiserror::Error)]
pub enum PnmError {
    #[error("malformed PNM header: {0}")]
    MalformedHeader(&'static str),
    #[error("unsupported maxval {0}, only 255 is accepted")]
    UnsupportedMaxval(u32),
    #[error("raster truncated: expected {expected} bytes, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

struct Header<'a> {
    rest: &'a [u8],
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        loop {
            match self.rest.first() {
                Some(b) if b.is_ascii_whitespace() => self.rest = &self.rest[1..],
                Some(b'#') => {
                    let end = self.rest.iter().position(|&b| b == b'\n' || b == b'\r');
                    self.rest = end.map_or(&[][..], |e| &self.rest[e..]);
                }
                _ => return,
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u32, PnmError> {
        self.skip_space_and_comments();
        let digits = self.rest.iter().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return Err(PnmError::MalformedHeader(what));
        }
        let value = std::str::from_utf8(&self.rest[..digits])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PnmError::MalformedHeader(what))?;
        self.rest = &self.rest[digits..];
        Ok(value)
    }
}

/// Parses a P5 or P6 image. Bytes after the raster are ignored.
pub fn load_ppm(bytes: &[u8]) -> Result<PixelBuffer, PnmError> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1u8,
        Some(b"P6") => 3u8,
        _ => return Err(PnmError::MalformedHeader("magic must be P5 or P6")),
    };
    let mut header = Header { rest: &bytes[2..] };
    if !header.rest.first().is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(PnmError::MalformedHeader("magic must be followed by whitespace"));
    }
    let width = header.number("width")?;
    let height = header.number("height")?;
    if width == 0 || height == 0 {
        return Err(PnmError::MalformedHeader("zero dimension"));
    }
    let maxval = header.number("maxval")?;
    match header.rest.first() {
        Some(b) if b.is_ascii_whitespace() => header.rest = &header.rest[1..],
        Some(_) => return Err(PnmError::MalformedHeader("maxval must be followed by whitespace")),
        None => {}
    }
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval(maxval));
    }
    let expected = (width as usize)
        .checked_mul(height as usize)
        .and_then(|a| a.checked_mul(channels as usize))
        .ok_or(PnmError::MalformedHeader("dimensions overflow"))?;
    if header.rest.len() < expected {
        return Err(PnmError::TruncatedData { expected, found: header.rest.len() });
    }
    Ok(PixelBuffer::from_interleaved(width, height, channels, &header.rest[..expected])
        .expect("geometry validated above"))
}

/// Writes `P5` for gray and `P6` for RGB buffers, `\n` separated header.
pub fn save_ppm(buf: &PixelBuffer) -> Vec<u8> {
    let magic = if buf.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", buf.width(), buf.height()).into_bytes();
    out.extend_from_slice(&buf.to_interleaved());
    out
}

pub fn read_image(path: impl AsRef<Path>) -> Result<PixelBuffer, PnmError> {
    load_ppm(&fs::read(path)?)
}

pub fn write_image(path: impl AsRef<Path>, buf: &PixelBuffer) -> io::Result<()> {
    fs::write(path, save_ppm(buf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn loads_p5() {
        let mut f = b"P5 2 2 255 ".to_vec();
        f.extend_from_slice(&[0, 0, 255, 255]);
        let buf = load_ppm(&f).unwrap();
        assert_eq!((buf.width(), buf.height(), buf.channels()), (2, 2, 1));
        assert_eq!(buf.plane(0), &[0, 0, 255, 255]);
    }

    #[test]
    fn loads_p6_deinterleaved() {
        let mut f = b"P6\n2 2\n255\n".to_vec();
        let payload: Vec<u8> = (0..12).collect();
        f.extend_from_slice(&payload);
        let buf = load_ppm(&f).unwrap();
        assert_eq!(buf.channels(), 3);
        for j in 0..3 {
            let expected: Vec<u8> = payload.iter().skip(j).step_by(3).copied().collect();
            assert_eq!(buf.plane(j), &expected[..]);
        }
    }

    #[test]
    fn comments_in_header() {
        let mut f = b"P5\n# made by hand\n3 # width\n1\n#max\n255\n".to_vec();
        f.extend_from_slice(&[1, 2, 3]);
        assert_eq!(load_ppm(&f).unwrap().plane(0), &[1, 2, 3]);
    }

    #[test]
    fn single_whitespace_after_maxval() {
        // a raster starting with a whitespace byte must not be skipped
        let mut f = b"P5 2 1 255\n".to_vec();
        f.extend_from_slice(b"\n ");
        assert_eq!(load_ppm(&f).unwrap().plane(0), b"\n ");
    }

    #[test]
    fn truncated() {
        let mut f = b"P5 2 2 255\n".to_vec();
        f.extend_from_slice(&[1, 2, 3]);
        assert!(matches!(load_ppm(&f), Err(PnmError::TruncatedData { expected: 4, found: 3 })));
    }

    #[test]
    fn header_errors() {
        assert!(matches!(load_ppm(b"P3 1 1 255\n\0"), Err(PnmError::MalformedHeader(_))));
        assert!(matches!(load_ppm(b"P5 x 1 255\n\0"), Err(PnmError::MalformedHeader(_))));
        assert!(matches!(load_ppm(b"P5 0 1 255\n"), Err(PnmError::MalformedHeader(_))));
        assert!(matches!(load_ppm(b"P5"), Err(PnmError::MalformedHeader(_))));
        assert!(matches!(load_ppm(b"P51 1 255\n\0"), Err(PnmError::MalformedHeader(_))));
        assert!(matches!(load_ppm(b"P5 1 1 65535\n\0\0"), Err(PnmError::UnsupportedMaxval(65535))));
        assert!(matches!(load_ppm(b"P5 1 1 15\n\0"), Err(PnmError::UnsupportedMaxval(15))));
    }

    #[test]
    fn saves_gray_and_rgb() {
        let gray = PixelBuffer::from_planar(1, 1, 1, vec![128]).unwrap();
        assert_eq!(save_ppm(&gray), b"P5\n1 1\n255\n\x80");
        let rgb = PixelBuffer::from_interleaved(2, 1, 3, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(save_ppm(&rgb), b"P6\n2 1\n255\n\x01\x02\x03\x04\x05\x06");
    }

    proptest! {
        #[test]
        fn save_then_load_is_identity(
            (w, h, ch, px) in (1u32..20, 1u32..20, prop_oneof![Just(1u8), Just(3u8)])
                .prop_flat_map(|(w, h, ch)| (Just(w), Just(h), Just(ch),
                    proptest::collection::vec(any::<u8>(), (w * h * ch as u32) as usize)))
        ) {
            let buf = PixelBuffer::from_planar(w, h, ch, px).unwrap();
            let bytes = save_ppm(&buf);
            prop_assert_eq!(&load_ppm(&bytes).unwrap(), &buf);
            prop_assert_eq!(save_ppm(&load_ppm(&bytes).unwrap()), bytes);
        }
    }
}
