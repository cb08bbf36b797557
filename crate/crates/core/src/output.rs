//! CSV, JSON and SVG writers. Everything here is deterministic: the same
//! inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{SpectrumReport, EIGEN_TOL};
use crate::susy::PotentialPair;

/// Tolerances a run was judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub eigen_bisection: f64,
    pub pairing_rel: f64,
    pub pairing_threshold: f64,
    pub zero_mode: f64,
    pub duality: f64,
}

impl Tolerances {
    pub fn for_energy_scale(energy_scale: f64) -> Self {
        let p = crate::spectral::PairingTolerances::for_energy_scale(energy_scale);
        Self {
            eigen_bisection: EIGEN_TOL,
            pairing_rel: p.rel,
            pairing_threshold: p.threshold,
            zero_mode: p.zero,
            duality: 1e-9,
        }
    }
}

/// Embedded in every file the CLI writes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub kernel: String,
    /// `None` when the run has no coupling (oscillator calibration).
    pub g: Option<f64>,
    pub s: Option<f64>,
    #[serde(rename = "L")]
    pub half_extent: f64,
    pub points: usize,
    pub h: f64,
    pub tolerances: Tolerances,
    pub version: &'static str,
}

/// Shortest decimal that round-trips is not fixed-width; `{:.16e}` is, and
/// 17 significant digits always round-trip an f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `x,V_minus,V_plus,W`.
pub fn pair_csv(pair: &PotentialPair) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "V_minus", "V_plus", "W"])?;
    for i in 0..pair.x.len() {
        w.write_record([
            fmt_f64(pair.x[i]),
            fmt_f64(pair.v_minus[i]),
            fmt_f64(pair.v_plus[i]),
            fmt_f64(pair.w[i]),
        ])?;
    }
    finish(w)
}

/// `sector,n,energy,nodes,threshold`, minus sector first.
pub fn spectrum_csv(reports: &[&SpectrumReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sector", "n", "energy", "nodes", "threshold"])?;
    for r in reports {
        let sector = match r.sector {
            crate::spectral::Sector::Minus => "minus",
            crate::spectral::Sector::Plus => "plus",
        };
        for n in 0..r.len() {
            w.write_record([
                sector.to_string(),
                n.to_string(),
                fmt_f64(r.eigenvalues[n]),
                r.node_counts[n].to_string(),
                r.threshold_flags[n].to_string(),
            ])?;
        }
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Input(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Input(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Input to [`svg_plot`].
#[derive(Debug, Clone)]
pub struct Figure<'a> {
    pub title: String,
    pub pair: &'a PotentialPair,
    /// Horizontal lines, drawn dashed when the flag is set.
    pub levels: Vec<(f64, bool)>,
    /// Visible energy window; the curves are clipped to it.
    pub y_range: (f64, f64),
    pub meta: &'a Metadata,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
/// Polyline vertices per curve.
const MAX_VERTICES: usize = 801;

/// Line plot of `V_minus` (thick), `V_plus` (thin) and the energy levels.
pub fn svg_plot(fig: &Figure) -> Result<String> {
    let pair = fig.pair;
    let n = pair.x.len();
    if n < 2 {
        return Err(Error::Usage("figure needs at least two samples".into()));
    }
    let (x0, x1) = (pair.x[0], pair.x[n - 1]);
    let (y0, y1) = fig.y_range;
    if !(y1 > y0) {
        return Err(Error::Usage(format!("empty energy window [{y0}, {y1}]")));
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| {
        let y = y.clamp(y0, y1);
        HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN)
    };
    let stride = n.div_ceil(MAX_VERTICES).max(1);
    let polyline = |v: &[f64]| {
        let mut pts = String::new();
        let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
        if idx.last() != Some(&(n - 1)) {
            idx.push(n - 1);
        }
        for (k, i) in idx.into_iter().enumerate() {
            if k > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.2},{:.2}", px(pair.x[i]), py(v[i]));
        }
        pts
    };

    let meta_json = serde_json::to_string(fig.meta)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#
    );
    let _ = writeln!(out, "<metadata>{}</metadata>", xml_escape(&meta_json));
    let _ = writeln!(out, r#"<rect x="0" y="0" width="800" height="600" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{m}" y="{m}" width="{w}" height="{h}" fill="none" stroke="black" stroke-width="1"/>"#,
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="400" y="35" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        xml_escape(&fig.title)
    );
    // axis labels at the corners of the window
    for (x, y, anchor, label) in [
        (MARGIN, HEIGHT - MARGIN + 20.0, "start", format!("x = {x0:.3}")),
        (WIDTH - MARGIN, HEIGHT - MARGIN + 20.0, "end", format!("x = {x1:.3}")),
        (MARGIN - 5.0, HEIGHT - MARGIN, "end", format!("{y0:.3}")),
        (MARGIN - 5.0, MARGIN + 5.0, "end", format!("{y1:.3}")),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="12">{label}</text>"#
        );
    }
    for &(e, threshold) in &fig.levels {
        if e < y0 || e > y1 {
            continue;
        }
        let dash = if threshold { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<line class="level" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="gray" stroke-width="1"{dash}/>"#,
            MARGIN,
            WIDTH - MARGIN,
            y = py(e)
        );
    }
    let _ = writeln!(
        out,
        r##"<polyline class="v-plus" fill="none" stroke="#c0392b" stroke-width="1" points="{}"/>"##,
        polyline(&pair.v_plus)
    );
    let _ = writeln!(
        out,
        r##"<polyline class="v-minus" fill="none" stroke="#1f4e9c" stroke-width="3" points="{}"/>"##,
        polyline(&pair.v_minus)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::kernel::Kernel;
    use crate::susy::build_pair;

    fn meta(grid: &Grid) -> Metadata {
        Metadata {
            kernel: "constant(omega=1)".into(),
            g: Some(1.0),
            s: Some(-0.5),
            half_extent: grid.half_extent(),
            points: grid.points(),
            h: grid.step(),
            tolerances: Tolerances::for_energy_scale(1.0),
            version: crate::VERSION,
        }
    }

    #[test]
    fn csv_round_trips_bits() {
        let grid = Grid::new(3.0, 31).unwrap();
        let pair = build_pair(&Kernel::constant(1.3).unwrap(), -0.37, &grid).unwrap();
        let text = pair_csv(&pair).unwrap();
        let mut r = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(r.headers().unwrap(), vec!["x", "V_minus", "V_plus", "W"]);
        for (i, rec) in r.records().enumerate() {
            let rec = rec.unwrap();
            let vm: f64 = rec[1].parse().unwrap();
            let w: f64 = rec[3].parse().unwrap();
            assert_eq!(vm.to_bits(), pair.v_minus[i].to_bits());
            assert_eq!(w.to_bits(), pair.w[i].to_bits());
        }
    }

    #[test]
    fn svg_is_deterministic_and_sized() {
        let grid = Grid::new(4.0, 2001).unwrap();
        let pair = build_pair(&Kernel::constant(1.0).unwrap(), -0.5, &grid).unwrap();
        let m = meta(&grid);
        let fig = Figure {
            title: "test <plot>".into(),
            pair: &pair,
            levels: vec![(0.0, false), (0.75, false), (1.0, true)],
            y_range: (-0.2, 1.2),
            meta: &m,
        };
        let a = svg_plot(&fig).unwrap();
        let b = svg_plot(&fig).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(r#"viewBox="0 0 800 600""#));
        assert_eq!(a.matches(r#"class="level""#).count(), 3);
        assert!(a.contains("test &lt;plot&gt;"));
        assert!(a.contains("stroke-dasharray"));
    }

    #[test]
    fn svg_rejects_empty_window() {
        let grid = Grid::new(1.0, 11).unwrap();
        let pair = build_pair(&Kernel::constant(1.0).unwrap(), -0.5, &grid).unwrap();
        let m = meta(&grid);
        let fig = Figure {
            title: String::new(),
            pair: &pair,
            levels: vec![],
            y_range: (1.0, 1.0),
            meta: &m,
        };
        assert!(matches!(svg_plot(&fig), Err(Error::Usage(_))));
    }
}
