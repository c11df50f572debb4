//! Minimal standalone SVG renderings of diagrams and scatter plots.

use crate::persistence::PersistenceDiagram;
use crate::scalar::Scalar;

const SIZE: f64 = 400.0;
const PAD: f64 = 30.0;

fn header() -> String {
    let total = SIZE + 2.0 * PAD;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total}\" height=\"{total}\" viewBox=\"0 0 {total} {total}\">\n\
         <rect x=\"{PAD}\" y=\"{PAD}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\" stroke=\"black\"/>\n"
    )
}

/// Persistence diagram of dimension-1 intervals as points above the
/// diagonal. Infinite deaths are drawn on the top edge. When `delta` is
/// given, the diagonal point and its upper-left quadrant are marked.
pub fn diagram_svg<T: Scalar>(diagram: &PersistenceDiagram<T>, delta: Option<T>) -> String {
    let top = diagram.filtration().max_value().map_or(1.0, |v| v.as_f64()).max(1e-12);
    let px = |v: f64| PAD + SIZE * v / top;
    let py = |v: f64| PAD + SIZE * (1.0 - v / top);
    let mut out = header();
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\"/>\n",
        px(0.0), py(0.0), px(top), py(top)
    ));
    if let Some(d) = delta {
        let d = d.as_f64();
        out.push_str(&format!(
            "<polyline points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"green\"/>\n",
            px(0.0), py(d), px(d), py(d), px(d), py(top)
        ));
    }
    for iv in diagram.intervals_of_dim(1) {
        let b = iv.birth.as_f64();
        let d = iv.death.map_or(top, |d| d.as_f64());
        let fill = if iv.is_infinite() { "red" } else { "black" };
        out.push_str(&format!("<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2.5\" fill=\"{fill}\"/>\n", px(b), py(d)));
    }
    out.push_str("</svg>\n");
    out
}

/// Scatter plot of two angle lists on the unit square.
pub fn scatter_svg<T: Scalar>(a: &[T], b: &[T]) -> String {
    let mut out = header();
    for (x, y) in a.iter().zip(b) {
        out.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"1.5\" fill=\"navy\"/>\n",
            PAD + SIZE * x.as_f64(),
            PAD + SIZE * (1.0 - y.as_f64())
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_is_well_formed() {
        let s = scatter_svg(&[0.0f64, 0.5], &[0.25, 1.0]);
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<circle").count(), 2);
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
