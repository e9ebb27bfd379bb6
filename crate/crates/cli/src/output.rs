//! Text emission: `key=value` lines, CSV rows and SVG line plots. Every
//! float goes through [`num`], so identical inputs give identical bytes.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{CliError, Result};

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Accumulates `key=value` lines.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn text(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}={value}"));
    }

    pub fn num(&mut self, key: &str, value: f64) {
        self.text(key, num(value));
    }

    pub fn flag(&mut self, key: &str, value: bool) {
        self.text(key, value);
    }

    pub fn write_to(&self, w: &mut dyn Write) -> std::io::Result<()> {
        for l in &self.lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    }
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| num(v)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    /// Numeric column by header name; non-numeric cells become NaN.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.header.iter().position(|h| *h == name) else {
            return Vec::new();
        };
        self.rows.iter().map(|r| r[i].parse().unwrap_or(f64::NAN)).collect()
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.into(), source })
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Line plot of one or more series sharing an x axis.
pub fn svg_plot(title: &str, x_label: &str, series: &[(&str, Vec<f64>, Vec<f64>)]) -> String {
    let finite = |v: &&f64| v.is_finite();
    let xs = series.iter().flat_map(|s| s.1.iter()).filter(finite);
    let ys = series.iter().flat_map(|s| s.2.iter()).filter(finite);
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !(y1 > y0) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let sx = |v: f64| PAD + (v - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (W - 2.0 * PAD);
    let sy = |v: f64| H - PAD - (v - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#, W / 2.0);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    if y0 < 0.0 && y1 > 0.0 {
        let z = sy(0.0);
        let _ = writeln!(s, r##"<line x1="{PAD}" y1="{z:.2}" x2="{}" y2="{z:.2}" stroke="#999" stroke-dasharray="4 3"/>"##, W - PAD);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{x_label}</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(s, r#"<text x="{PAD}" y="{}" font-size="10">{x0:.4}</text>"#, H - PAD + 14.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" font-size="10">{x1:.4}</text>"#, W - PAD, H - PAD + 14.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" font-size="10">{y1:.4}</text>"#, PAD - 4.0, PAD + 4.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" font-size="10">{y0:.4}</text>"#, PAD - 4.0, H - PAD);
    for (k, (name, x, y)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = x
            .iter()
            .zip(y)
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(&a, &b)| format!("{:.2},{:.2}", sx(a), sy(b)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{name}</text>"#,
            W - PAD - 90.0,
            PAD + 16.0 + 14.0 * k as f64
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(1.5), "1.5000000000000000e0");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(num(-2.0 / 3.0).parse::<f64>().unwrap(), -2.0 / 3.0);
    }

    #[test]
    fn table_roundtrip() {
        let mut t = Table::new(&["a", "b"]);
        t.push_nums(&[1.0, 2.0]);
        t.push(vec!["3".into(), "x".into()]);
        assert_eq!(t.render(), "a,b\n1.0000000000000000e0,2.0000000000000000e0\n3,x\n");
        assert_eq!(t.column("a"), vec![1.0, 3.0]);
        assert!(t.column("b")[1].is_nan());
    }

    #[test]
    fn svg_is_well_formed() {
        let s = svg_plot("t", "x", &[("y", vec![0.0, 1.0, 2.0], vec![-1.0, 0.5, 2.0])]);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<polyline").count(), 1);
    }
}
