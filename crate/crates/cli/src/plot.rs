//! Lorenz curves as a standalone SVG document.
//!
//! Each pair is drawn as the polyline through the origin and its elbows in
//! the `(Σq, Σp)` plane, so a dominating pair lies above a dominated one.

use std::fmt::Write as _;
use std::path::Path;

use relmaj::Pair;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("nothing to plot")]
    Empty,
    #[error("cannot write {file}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
}

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// The SVG text for the given curves.
pub fn lorenz_svg(curves: &[(String, Pair)]) -> Result<String, PlotError> {
    if curves.is_empty() {
        return Err(PlotError::Empty);
    }
    let qmax = curves.iter().map(|(_, p)| p.total_q()).fold(0.0, f64::max).max(1e-12);
    let pmax = curves.iter().map(|(_, p)| p.total_p()).fold(0.0, f64::max).max(1e-12);
    let span = SIZE - 2.0 * MARGIN;
    let sx = |q: f64| MARGIN + span * q / qmax;
    let sy = |p: f64| SIZE - MARGIN - span * p / pmax;

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n");
    s.push_str("<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n");
    let (x0, y0, x1, y1) = (sx(0.0), sy(0.0), sx(qmax), sy(pmax));
    let _ = writeln!(
        s,
        "<g class=\"axes\" stroke=\"black\" stroke-width=\"2\"><line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\"/><line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\"/></g>"
    );
    let _ = writeln!(
        s,
        "<g font-family=\"sans-serif\" font-size=\"24\"><text x=\"{}\" y=\"{}\" text-anchor=\"middle\">q (max {qmax})</text><text x=\"20\" y=\"{}\" transform=\"rotate(-90 20 {})\" text-anchor=\"middle\">p (max {pmax})</text></g>",
        SIZE / 2.0,
        SIZE - 15.0,
        SIZE / 2.0,
        SIZE / 2.0
    );
    for (k, (label, pair)) in curves.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<(f64, f64)> = pair.elbows().polyline().into_iter().map(|(x, y)| (y, x)).collect();
        let data: Vec<String> = pts.iter().map(|(q, p)| format!("{q},{p}")).collect();
        let screen: Vec<String> = pts.iter().map(|(q, p)| format!("{:.3},{:.3}", sx(*q), sy(*p))).collect();
        let _ = writeln!(
            s,
            "<polyline class=\"curve\" data-label=\"{}\" data-points=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"3\"/>",
            escape(label),
            data.join(" "),
            screen.join(" ")
        );
        for (q, p) in pts.iter().skip(1) {
            let _ = writeln!(
                s,
                "<circle class=\"elbow\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"6\" fill=\"{color}\"/>",
                sx(*q),
                sy(*p)
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"24\" fill=\"{color}\">{}</text>",
            MARGIN + 20.0,
            MARGIN + 30.0 * (k as f64 + 1.0),
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Write [`lorenz_svg`] to `path`.
pub fn render_lorenz(curves: &[(String, Pair)], path: &Path) -> Result<(), PlotError> {
    let svg = lorenz_svg(curves)?;
    std::fs::write(path, svg).map_err(|source| PlotError::Io { file: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal() {
        let pair = Pair::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        let svg = lorenz_svg(&[("flat".into(), pair)]).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("data-points=\"0,0 0.5,0.5 1,1\""));
        assert!(matches!(lorenz_svg(&[]), Err(PlotError::Empty)));
    }
}
