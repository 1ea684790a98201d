//! Static SVG emission: chamber diagrams and simple data plots.
//!
//! Pure string assembly with fixed-precision coordinates, so identical
//! inputs yield byte-identical documents.

use crate::chambers::ChamberDiagram;
use crate::scalar::Real;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

fn fmt(x: f64) -> String {
    format!("{x:.4}")
}

/// Render a rank-2 chamber diagram: kernel lines through the origin,
/// shaded sector cones, and sign-vector labels at the representatives.
pub fn chamber_svg<R: Real>(diagram: &ChamberDiagram<R>) -> String {
    let c = SIZE / 2.0;
    let radius = c - MARGIN;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
        s = fmt(SIZE)
    ));
    out.push_str(&format!(
        "<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n",
        s = fmt(SIZE)
    ));
    let palette = ["#dbeafe", "#dcfce7", "#fee2e2", "#fef9c3", "#f3e8ff", "#e0f2fe", "#fce7f3", "#ecfccb"];
    for (k, chamber) in diagram.chambers.iter().enumerate() {
        let rep = &chamber.representative;
        let (x, y) = (rep[0].as_f64(), rep[1].as_f64());
        let angle = y.atan2(x);
        // Shade a thin cone around the representative direction.
        let half = std::f64::consts::PI / diagram.chambers.len() as f64 * 0.8;
        let (a0, a1) = (angle - half, angle + half);
        out.push_str(&format!(
            "<path d=\"M {cx} {cy} L {x0} {y0} A {r} {r} 0 0 0 {x1} {y1} Z\" fill=\"{fill}\" fill-opacity=\"0.7\"/>\n",
            cx = fmt(c),
            cy = fmt(c),
            x0 = fmt(c + radius * a1.cos()),
            y0 = fmt(c - radius * a1.sin()),
            r = fmt(radius),
            x1 = fmt(c + radius * a0.cos()),
            y1 = fmt(c - radius * a0.sin()),
            fill = palette[k % palette.len()],
        ));
        let label: String = chamber.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        let lx = c + 0.75 * radius * angle.cos();
        let ly = c - 0.75 * radius * angle.sin();
        out.push_str(&format!(
            "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">{label}</text>\n",
            x = fmt(lx),
            y = fmt(ly),
        ));
    }
    for dir in &diagram.kernel_directions {
        let (dx, dy) = (dir[0].as_f64(), dir[1].as_f64());
        out.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#111\" stroke-width=\"1.5\"/>\n",
            x1 = fmt(c - radius * dx),
            y1 = fmt(c + radius * dy),
            x2 = fmt(c + radius * dx),
            y2 = fmt(c - radius * dy),
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Simple polyline plot of `(x, y)` data with axis labels.
pub fn polyline_plot(points: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
        s = fmt(SIZE)
    ));
    out.push_str(&format!("<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n", s = fmt(SIZE)));
    out.push_str(&format!(
        "<text x=\"{x}\" y=\"20\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">{title}</text>\n",
        x = fmt(SIZE / 2.0)
    ));
    if points.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if (xmax - xmin).abs() < 1e-300 {
        xmax = xmin + 1.0;
    }
    if (ymax - ymin).abs() < 1e-300 {
        ymax = ymin + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (SIZE - 2.0 * MARGIN);
    let sy = |y: f64| SIZE - MARGIN - (y - ymin) / (ymax - ymin) * (SIZE - 2.0 * MARGIN);
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"#444\"/>\n",
        m = fmt(MARGIN),
        b = fmt(SIZE - MARGIN),
        r = fmt(SIZE - MARGIN)
    ));
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{m}\" y2=\"{t}\" stroke=\"#444\"/>\n",
        m = fmt(MARGIN),
        b = fmt(SIZE - MARGIN),
        t = fmt(MARGIN)
    ));
    let path: Vec<String> =
        points.iter().map(|&(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y)))).collect();
    out.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1d4ed8\" stroke-width=\"1.5\"/>\n",
        path.join(" ")
    ));
    out.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{x_label}</text>\n",
        x = fmt(SIZE / 2.0),
        y = fmt(SIZE - 10.0)
    ));
    out.push_str(&format!(
        "<text x=\"14\" y=\"{y}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {y})\">{y_label}</text>\n",
        y = fmt(SIZE / 2.0)
    ));
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{real_spectrum_and_frame, FrameOptions};
    use crate::functionals::functionals_from_action;
    use crate::samples;

    #[test]
    fn chamber_svg_is_deterministic_and_well_formed() {
        let (spectra, frame) =
            real_spectrum_and_frame::<f64>(&samples::t3_pair(), FrameOptions::default()).unwrap();
        let fam = functionals_from_action(&frame, &spectra, true).unwrap();
        let diagram = ChamberDiagram::build(&fam).unwrap();
        let one = chamber_svg(&diagram);
        let two = chamber_svg(&diagram);
        assert_eq!(one, two);
        assert!(one.starts_with("<svg"));
        assert!(one.ends_with("</svg>\n"));
        assert_eq!(one.matches("<line").count(), 3);
        assert_eq!(one.matches("<text").count(), 6);
    }

    #[test]
    fn plots_handle_degenerate_data() {
        let svg = polyline_plot(&[(1.0, 2.0)], "t", "x", "y");
        assert!(svg.contains("polyline"));
        let empty = polyline_plot(&[], "t", "x", "y");
        assert!(empty.ends_with("</svg>\n"));
    }
}
