//! CSV and SVG emission.
//!
//! Every CSV starts with a `#` metadata line echoing `λ`, followed by a
//! header row. Numbers are written with 15 significant digits.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

/// Fixed 15-significant-digit formatting.
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

/// Open `path`, write the metadata line and return a CSV writer with `header` written.
pub fn csv_writer(
    path: &Path,
    lambda: f64,
    header: &[&str],
) -> std::io::Result<csv::Writer<BufWriter<File>>> {
    let mut file = BufWriter::new(File::create(path)?);
    writeln!(file, "# lambda={}", num(lambda))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    Ok(w)
}

pub const SPECTRUM_HEADER: [&str; 8] = [
    "method", "level", "re_E", "im_E", "class", "rho", "theta", "N",
];
pub const CURVES_HEADER: [&str; 3] = ["curve_index", "eps", "u1"];
pub const WAVEFUNCTION_HEADER: [&str; 4] = ["r", "psi", "level", "N_terms"];
pub const FRAME_HEADER: [&str; 4] = ["v1", "class", "re_E", "im_E"];
pub const POTENTIAL_HEADER: [&str; 3] = ["r", "v", "v_regularized"];

/// One row of `spectrum.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub method: &'static str,
    pub level: usize,
    pub energy: Complex64,
    pub class: &'static str,
    pub scaling: Option<(f64, f64)>,
    pub n: usize,
}

impl SpectrumRow {
    pub fn record(&self) -> [String; 8] {
        let (rho, theta) = match self.scaling {
            Some((r, t)) => (num(r), num(t)),
            None => (String::new(), String::new()),
        };
        [
            self.method.to_string(),
            self.level.to_string(),
            num(self.energy.re),
            num(self.energy.im),
            self.class.to_string(),
            rho,
            theta,
            self.n.to_string(),
        ]
    }
}

pub fn write_spectrum(path: &Path, lambda: f64, rows: &[SpectrumRow]) -> std::io::Result<()> {
    let mut w = csv_writer(path, lambda, &SPECTRUM_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()
}

/// Point marker of the spectrum plot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    Bound,
    Resonance,
    Unstable,
}

/// Static scatter of energies in the complex plane: squares for bound
/// states, circles for resonances, small grey dots for the rest. The
/// `−2θ` ray is drawn as a dashed line.
pub fn spectrum_svg(points: &[(Complex64, Marker)], theta: f64) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const PAD: f64 = 48.0;
    let physical: Vec<Complex64> = points
        .iter()
        .filter(|(_, m)| *m != Marker::Unstable)
        .map(|(z, _)| *z)
        .collect();
    let frame: &[Complex64] = if physical.is_empty() {
        &[Complex64::new(-1.0, -1.0), Complex64::new(1.0, 0.0)]
    } else {
        &physical
    };
    let (mut x0, mut x1) = (0.0f64, 0.0f64);
    let (mut y0, mut y1) = (0.0f64, 0.0f64);
    for z in frame {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let dx = (x1 - x0).max(1e-9) * 0.1;
    let dy = (y1 - y0).max(1e-9) * 0.1;
    let (x0, x1, y0, y1) = (x0 - dx, x1 + dx, y0 - dy, y1 + dy);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let inside = |z: &Complex64| z.re >= x0 && z.re <= x1 && z.im >= y0 && z.im <= y1;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        sx(x0),
        sy(0.0),
        sx(x1),
        sy(0.0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        sx(0.0),
        sy(y0),
        sx(0.0),
        sy(y1)
    );
    // −2θ ray, clipped to the frame
    let dir = Complex64::from_polar(1.0, -2.0 * theta);
    if theta > 0.0 && dir.im < 0.0 {
        let t_y = y0 / dir.im;
        let t_x = if dir.re > 0.0 {
            x1 / dir.re
        } else if dir.re < 0.0 {
            x0 / dir.re
        } else {
            f64::INFINITY
        };
        let end = dir * t_y.min(t_x);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="grey" stroke-dasharray="4 4"/>"#,
            sx(0.0),
            sy(0.0),
            sx(end.re),
            sy(end.im)
        );
    }
    for (z, m) in points {
        if !inside(z) {
            continue;
        }
        let (x, y) = (sx(z.re), sy(z.im));
        let _ = match m {
            Marker::Bound => writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="none" stroke="blue"/>"#,
                x - 4.0,
                y - 4.0
            ),
            Marker::Resonance => writeln!(
                s,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="red"/>"#
            ),
            Marker::Unstable => writeln!(
                s,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.5" fill="grey"/>"#
            ),
        };
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12">Re E</text>"#,
        W - PAD,
        sy(0.0) - 6.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12">Im E</text>"#,
        sx(0.0) + 6.0,
        PAD - 8.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(num(-27.878950096073689), "-2.78789500960737e1");
        assert_eq!(num(0.0), "0.00000000000000e0");
    }

    #[test]
    fn spectrum_row_leaves_scaling_blank() {
        let row = SpectrumRow {
            method: "pps",
            level: 0,
            energy: Complex64::new(-1.0, 0.0),
            class: "bound",
            scaling: None,
            n: 50,
        };
        let r = row.record();
        assert_eq!(r[5], "");
        assert_eq!(r[7], "50");
    }

    #[test]
    fn svg_has_one_marker_per_point() {
        let pts = [
            (Complex64::new(-3.0, 0.0), Marker::Bound),
            (Complex64::new(2.0, -1.0), Marker::Resonance),
            (Complex64::new(1.0, -0.5), Marker::Unstable),
        ];
        let s = spectrum_svg(&pts, 0.8);
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<rect x=").count(), 1);
        assert_eq!(s.matches(r#"r="4""#).count(), 1);
        assert_eq!(s.matches(r#"r="1.5""#).count(), 1);
    }
}
