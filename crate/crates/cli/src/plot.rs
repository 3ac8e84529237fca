//! Emission of a self-contained Python plotting script for the BER
//! curves: log-scale BER over SNR in dB, one series per modulation.

use mcsim_core::sim::BerRecord;
use std::io::Write;
use std::path::Path;

/// Renders the plotting script text. Regenerating from identical records
/// yields byte-identical output.
pub fn render_plot_script(records: &[BerRecord], csv_path: &Path) -> String {
    let mut names: Vec<&'static str> = Vec::new();
    let mut mods: Vec<_> = records.iter().map(|r| r.modulation).collect();
    mods.sort();
    for m in mods {
        if !names.contains(&m.name()) {
            names.push(m.name());
        }
    }
    let series = names
        .iter()
        .map(|n| format!("\"{n}\""))
        .collect::<Vec<_>>()
        .join(", ");
    let csv = csv_path.display();
    format!(
        r#"#!/usr/bin/env python3
"""BER versus SNR curves from {csv}."""
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

SERIES = [{series}]

curves = defaultdict(list)
with open("{csv}") as handle:
    for row in csv.DictReader(handle):
        curves[row["modulation"]].append((float(row["snr_db"]), float(row["ber"])))

plt.figure(figsize=(8.0, 6.0))
for name in SERIES:
    points = sorted(curves.get(name, []))
    if not points:
        continue
    snr = [p[0] for p in points]
    ber = [max(p[1], 1e-12) for p in points]
    plt.semilogy(snr, ber, marker="o", label=name)
plt.xlabel("SNR (dB)")
plt.ylabel("BER")
plt.grid(True, which="both", alpha=0.3)
plt.legend()
plt.tight_layout()
plt.savefig("ber_curves.png", dpi=150)
"#
    )
}

/// Writes [`render_plot_script`] output to a file.
pub fn emit_plot_script(
    records: &[BerRecord],
    csv_path: &Path,
    out_path: &Path,
) -> std::io::Result<()> {
    let mut file = std::fs::File::create(out_path)?;
    file.write_all(render_plot_script(records, csv_path).as_bytes())
}
