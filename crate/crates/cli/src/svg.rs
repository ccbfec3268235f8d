//! Heat map of integral scan errors over `(n, x)`, worst case over `m`.

use std::fmt::Write;

use kepler2d::identity::ScanReport;

const CELL: f64 = 48.0;
const MARGIN: f64 = 60.0;

/// Colour for `log10` of the scaled error on a fixed `[-16, 0]` scale.
fn colour(log_err: f64) -> String {
    let t = ((log_err + 16.0) / 16.0).clamp(0.0, 1.0);
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

pub fn error_heat_map(scan: &ScanReport, x_values: &[f64]) -> String {
    let n_max = scan.entries.iter().map(|e| e.n).max().unwrap_or(0);
    let width = MARGIN + CELL * x_values.len() as f64 + 20.0;
    let height = MARGIN + CELL * f64::from(n_max + 1) + 20.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(out, r#"<text x="4" y="14">log10 scaled error, worst over m</text>"#);
    for (col, &x) in x_values.iter().enumerate() {
        let cx = MARGIN + CELL * col as f64;
        let _ = writeln!(out, r#"<text x="{}" y="{}">x={x}</text>"#, cx + 4.0, MARGIN - 8.0);
        for n in 0..=n_max {
            let worst = scan
                .entries
                .iter()
                .filter(|e| e.n == n && e.x == x)
                .map(|e| e.report.abs_error / e.report.rhs.norm().max(1.0))
                .fold(0.0f64, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
            let log_err = if worst > 0.0 { worst.log10() } else { -16.0 };
            let cy = MARGIN + CELL * f64::from(n);
            let _ = writeln!(
                out,
                r#"<rect x="{cx}" y="{cy}" width="{CELL}" height="{CELL}" fill="{}" stroke="white"/>"#,
                colour(log_err)
            );
            let label = if log_err.is_finite() {
                format!("{log_err:.1}")
            } else {
                "inf".to_string()
            };
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" fill="white">{label}</text>"#,
                cx + 8.0,
                cy + CELL / 2.0 + 4.0
            );
        }
    }
    for n in 0..=n_max {
        let _ = writeln!(
            out,
            r#"<text x="8" y="{}">n={n}</text>"#,
            MARGIN + CELL * f64::from(n) + CELL / 2.0 + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
