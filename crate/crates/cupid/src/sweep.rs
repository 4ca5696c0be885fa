//! Rate/quality/time measurements across cuboid counts.

use std::io;
use std::time::Instant;

use cupid_core::metrics::{luma_mse, mse, psnr_from_mse};
use cupid_core::{encode, ObjectiveConfig, PixelBuffer, Sequential};

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub n: usize,
    /// Coded size in bits, header and padding included.
    pub bits: u64,
    /// Wall time of partition + descriptors + serialization.
    pub encode_time_s: f64,
    /// `f64::INFINITY` for a lossless reconstruction.
    pub y_psnr_db: f64,
    pub mse: Vec<f64>,
}

/// Encodes `buf` once per entry of `n_list`, in order, single-threaded so
/// timings are comparable.
pub fn analyze_sweep(
    buf: &PixelBuffer,
    n_list: &[usize],
    cfg: ObjectiveConfig,
) -> Result<Vec<MetricsRecord>, cupid_core::Error> {
    n_list
        .iter()
        .map(|&n| {
            let start = Instant::now();
            let encoded = encode(buf, n, cfg, &Sequential)?;
            let encode_time_s = start.elapsed().as_secs_f64();
            let recon = encoded.reconstruct();
            Ok(MetricsRecord {
                n,
                bits: encoded.stream.bits(),
                encode_time_s,
                y_psnr_db: psnr_from_mse(luma_mse(buf, &recon)?),
                mse: mse(buf, &recon)?,
            })
        })
        .collect()
}

/// `n,bits,encode_time_s,y_psnr_db` with six decimals; infinite PSNR is `inf`.
pub fn write_csv<W: io::Write>(records: &[MetricsRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "bits", "encode_time_s", "y_psnr_db"])?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.bits.to_string(),
            format!("{:.6}", r.encode_time_s),
            format!("{:.6}", r.y_psnr_db),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_is_lossless_everywhere() {
        let buf = PixelBuffer::filled(64, 64, 1, 90).unwrap();
        let recs = analyze_sweep(&buf, &[1, 5, 100], ObjectiveConfig::default()).unwrap();
        assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), [1, 5, 100]);
        for r in &recs {
            assert_eq!(r.y_psnr_db, f64::INFINITY);
            assert_eq!(r.mse, [0.0]);
        }
        assert!(recs.windows(2).all(|p| p[0].bits < p[1].bits));
    }

    #[test]
    fn csv_layout() {
        let recs = [
            MetricsRecord { n: 1, bits: 96, encode_time_s: 0.25, y_psnr_db: f64::INFINITY, mse: vec![0.0] },
            MetricsRecord { n: 2, bits: 104, encode_time_s: 1.0, y_psnr_db: 48.130803608679, mse: vec![1.0] },
        ];
        let mut out = Vec::new();
        write_csv(&recs, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "n,bits,encode_time_s,y_psnr_db\n1,96,0.250000,inf\n2,104,1.000000,48.130804\n"
        );
    }

    #[test]
    fn out_of_range_n_is_an_error() {
        let buf = PixelBuffer::filled(2, 2, 1, 0).unwrap();
        assert!(analyze_sweep(&buf, &[1, 5], ObjectiveConfig::default()).is_err());
    }
}
