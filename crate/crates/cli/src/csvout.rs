//! CSV persistence of sweep results.

use mcsim_core::sim::BerRecord;
use std::io::Write;
use std::path::Path;

/// Renders records as CSV text: fixed header, rows ordered by
/// (modulation, snr ascending), BER in scientific notation with six
/// significant digits, LF line endings.
pub fn render_csv(records: &[BerRecord]) -> String {
    let mut sorted: Vec<&BerRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.modulation
            .cmp(&b.modulation)
            .then(a.snr_db.partial_cmp(&b.snr_db).expect("finite snr"))
    });
    let mut out =
        String::from("snr_db,modulation,detector,users,frames,bits_sent,bit_errors,ber,seed\n");
    for r in sorted {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.5e},{}\n",
            r.snr_db,
            r.modulation,
            r.detector,
            r.users,
            r.frames,
            r.bits_sent,
            r.bit_errors,
            r.ber,
            r.seed
        ));
    }
    out
}

/// Writes [`render_csv`] output to a file.
pub fn write_csv(records: &[BerRecord], path: &Path) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(render_csv(records).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mcsim_core::modem::Modulation;
    use mcsim_core::sim::Detector;

    fn record(m: Modulation, snr: f64, ber: f64) -> BerRecord {
        BerRecord {
            snr_db: snr,
            modulation: m,
            detector: Detector::Zf,
            users: 1,
            frames: 10,
            bits_sent: 10400,
            bit_errors: (ber * 10400.0).round() as u64,
            ber,
            seed: 1,
        }
    }

    #[test]
    fn empty_records_give_header_only() {
        let text = render_csv(&[]);
        assert_eq!(
            text,
            "snr_db,modulation,detector,users,frames,bits_sent,bit_errors,ber,seed\n"
        );
    }

    #[test]
    fn thirty_one_point_sweep_has_32_lines() {
        let records: Vec<BerRecord> = (0..31)
            .map(|i| record(Modulation::Qpsk, -10.0 + i as f64, 1e-3))
            .collect();
        let text = render_csv(&records);
        assert_eq!(text.lines().count(), 32);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn rows_sorted_by_modulation_then_snr() {
        let records = vec![
            record(Modulation::Qam64, 0.0, 0.5),
            record(Modulation::Qpsk, 5.0, 1e-4),
            record(Modulation::Qpsk, -5.0, 1e-2),
        ];
        let text = render_csv(&records);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].starts_with("-5,qpsk"));
        assert!(lines[2].starts_with("5,qpsk"));
        assert!(lines[3].starts_with("0,64qam"));
    }

    #[test]
    fn ber_has_six_significant_digits() {
        let text = render_csv(&[record(Modulation::Qpsk, 0.0, 0.005769)]);
        assert!(text.contains(",5.76900e-3,"), "{text}");
    }

    #[test]
    fn byte_identical_rerender() {
        let records = vec![record(Modulation::Qam16, 1.0, 0.25)];
        assert_eq!(render_csv(&records), render_csv(&records));
    }
}
