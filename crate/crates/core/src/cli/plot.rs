//! Whitespace-separated tables for external plotting tools.
//!
//! ```text
//! # qft plot data v1
//! # table <name>
//! # columns x y [value]
//! <rows>
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::grid::{QSignal, QSpectrum};
use crate::uncertainty::RefinementPoint;

pub const PLOT_HEADER: &str = "# qft plot data v1";

#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotReport {
    pub tables: Vec<PlotTable>,
}

impl PlotReport {
    pub fn push(&mut self, t: PlotTable) {
        self.tables.push(t);
    }
}

fn table(name: &str, columns: &[&str], rows: Vec<Vec<f64>>) -> PlotTable {
    PlotTable {
        name: name.to_string(),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    }
}

/// `|f|_Q` along `x1` at the sample row closest to `x2 = 0`.
pub fn modulus_slice(f: &QSignal) -> PlotTable {
    let g = f.grid;
    let n = (0..g.n2)
        .min_by(|&a, &b| g.x2(a).abs().total_cmp(&g.x2(b).abs()))
        .unwrap_or(0);
    let rows = (0..g.n1).map(|m| vec![g.x1(m), f.at(m, n).modulus()]).collect();
    table("modulus_slice_x2_0", &["x1", "modulus"], rows)
}

/// `|F(ξ)|_Q` along `ξ1` at the frequency row closest to `ξ2 = 0`.
pub fn spectrum_slice(s: &QSpectrum) -> PlotTable {
    let g = s.grid;
    let v = (0..g.n2)
        .min_by(|&a, &b| g.xi2(a).abs().total_cmp(&g.xi2(b).abs()))
        .unwrap_or(0);
    let rows = (0..g.n1).map(|u| vec![g.xi1(u), s.at(u, v).modulus()]).collect();
    table("spectrum_slice_xi2_0", &["xi1", "modulus"], rows)
}

/// `|gap|/rhs` against grid size.
pub fn refinement_curve(points: &[RefinementPoint]) -> PlotTable {
    let rows = points
        .iter()
        .map(|p| vec![p.n as f64, p.gap.abs() / p.rhs])
        .collect();
    table("heisenberg_refinement", &["n", "relative_gap"], rows)
}

pub fn render(report: &PlotReport) -> String {
    let mut s = String::new();
    s.push_str(PLOT_HEADER);
    s.push('\n');
    for t in &report.tables {
        s.push_str(&format!("# table {}\n# columns {}\n", t.name, t.columns.join(" ")));
        for row in &t.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
    }
    s
}

pub fn emit_plot_data(report: &PlotReport, path: &Path) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(render(report).as_bytes())?;
    Ok(())
}

/// Reads tables back from [`render`] output.
pub fn parse(text: &str) -> Vec<PlotTable> {
    let mut tables: Vec<PlotTable> = Vec::new();
    for line in text.lines() {
        if let Some(name) = line.strip_prefix("# table ") {
            tables.push(table(name, &[], Vec::new()));
        } else if let Some(cols) = line.strip_prefix("# columns ") {
            if let Some(t) = tables.last_mut() {
                t.columns = cols.split_whitespace().map(String::from).collect();
            }
        } else if !line.starts_with('#') && !line.trim().is_empty() {
            if let Some(t) = tables.last_mut() {
                t.rows.push(line.split_whitespace().filter_map(|c| c.parse().ok()).collect());
            }
        }
    }
    tables
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gaussian, Grid2};
    use crate::transform::qdft_fast;
    use crate::uncertainty::{refinement_study, REFINEMENT_ALPHA, REFINEMENT_L, REFINEMENT_SIZES};
    use std::f64::consts::PI;

    #[test]
    fn empty_report_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.dat");
        emit_plot_data(&PlotReport::default(), &p).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), format!("{PLOT_HEADER}\n"));
    }

    #[test]
    fn gaussian_spectrum_slice() {
        let s = qdft_fast(&gaussian(PI, Grid2::default_continuum()).unwrap()).unwrap();
        let mut r = PlotReport::default();
        r.push(spectrum_slice(&s));
        let back = parse(&render(&r));
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].rows.len(), 128);
        for row in &back[0].rows {
            assert_eq!(row.len(), 2);
            assert!((row[1] - (-PI * row[0] * row[0]).exp()).abs() <= 1e-6);
        }
    }

    #[test]
    fn refinement_curve_decreases() {
        let pts = refinement_study(REFINEMENT_ALPHA, REFINEMENT_L, &REFINEMENT_SIZES).unwrap();
        let t = refinement_curve(&pts);
        assert_eq!(t.rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![32.0, 64.0, 128.0]);
        for w in t.rows.windows(2) {
            assert!(w[1][1] < w[0][1]);
        }
    }

    #[test]
    fn modulus_slice_is_at_the_centre_row() {
        let t = modulus_slice(&gaussian(PI, Grid2::default_continuum()).unwrap());
        let peak = t.rows.iter().map(|r| r[1]).fold(0.0, f64::max);
        assert_eq!(peak, 1.0);
    }
}
