//! Deterministic Qualification-Space scatter plot as an SVG document.
//!
//! Fixed 800x600 viewport: SOQ grows rightward, SUQ is zero at the top and
//! grows more negative downward. A dashed diagonal marks the equilibrium
//! line SUQ = -SOQ; points are labeled with their candidate id and colored
//! by cluster. No timestamps and a fixed palette keep the output
//! byte-stable across runs.

use std::fmt::Write as _;

use thiserror::Error;

use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("no points to plot")]
    EmptyPointSet,
}

impl PlotError {
    pub fn rule_name(&self) -> &'static str {
        "EmptyPointSet"
    }
}

/// One plotted candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub candidate: String,
    pub soq: Scalar,
    pub suq: Scalar,
    /// 1-based cluster index controlling the color.
    pub cluster: usize,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 180.0; // leaves room for the legend
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn color(cluster: usize) -> &'static str {
    PALETTE[(cluster.saturating_sub(1)) % PALETTE.len()]
}

/// Tick step of the form 1/2/5 x 10^k giving five-ish steps over `range`.
fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let factor = if residual < 1.5 {
        1.0
    } else if residual < 3.5 {
        2.0
    } else if residual < 7.5 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders the scatter plot.
pub fn render_qs_svg(points: &[PlotPoint]) -> Result<String, PlotError> {
    if points.is_empty() {
        return Err(PlotError::EmptyPointSet);
    }

    let soq_max = points.iter().map(|p| p.soq).fold(0.0, f64::max);
    let suq_min = points.iter().map(|p| p.suq).fold(0.0, f64::min);
    // pad the ends and keep degenerate all-zero inputs plottable
    let x_max = (soq_max * 1.1).max(0.1);
    let y_min = (suq_min * 1.1).min(-0.1);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |soq: f64| MARGIN_LEFT + soq / x_max * plot_w;
    let to_y = |suq: f64| MARGIN_TOP + suq / y_min * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "  <text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">Qualification Space</text>",
        MARGIN_LEFT + plot_w / 2.0
    );

    // axes
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP;
    let x1 = MARGIN_LEFT + plot_w;
    let y1 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    );

    // ticks
    let x_step = nice_step(x_max);
    let mut tick = 0.0;
    while tick <= x_max + x_step * 1e-9 {
        let x = to_x(tick.min(x_max));
        let _ = writeln!(
            svg,
            "  <line x1=\"{}\" y1=\"{y0}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
            fmt_coord(x),
            fmt_coord(x),
            y0 - 5.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            fmt_coord(x),
            y0 - 9.0,
            fmt_coord(tick)
        );
        tick += x_step;
    }
    let y_step = nice_step(-y_min);
    let mut tick = 0.0;
    while tick >= y_min - y_step * 1e-9 {
        let y = to_y(tick.max(y_min));
        let _ = writeln!(
            svg,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{x0}\" y2=\"{}\" stroke=\"black\"/>",
            x0 - 5.0,
            fmt_coord(y),
            fmt_coord(y)
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            x0 - 8.0,
            fmt_coord(y + 4.0),
            fmt_coord(tick)
        );
        tick -= y_step;
    }

    // axis titles
    let _ = writeln!(
        svg,
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">SOQ</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        svg,
        "  <text x=\"18\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">SUQ</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // equilibrium diagonal SUQ = -SOQ, clipped to the plot area
    let reach = x_max.min(-y_min);
    let _ = writeln!(
        svg,
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>",
        fmt_coord(to_x(0.0)),
        fmt_coord(to_y(0.0)),
        fmt_coord(to_x(reach)),
        fmt_coord(to_y(-reach))
    );

    // points with labels
    for p in points {
        let x = to_x(p.soq);
        let y = to_y(p.suq);
        let _ = writeln!(
            svg,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{}\" stroke=\"black\" stroke-width=\"0.5\"/>",
            fmt_coord(x),
            fmt_coord(y),
            color(p.cluster)
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            fmt_coord(x + 7.0),
            fmt_coord(y - 6.0),
            xml_escape(&p.candidate)
        );
    }

    // legend, one entry per cluster present
    let mut clusters: Vec<usize> = points.iter().map(|p| p.cluster).collect();
    clusters.sort_unstable();
    clusters.dedup();
    let legend_x = WIDTH - MARGIN_RIGHT + 20.0;
    let _ = writeln!(
        svg,
        "  <text x=\"{legend_x}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">Clusters</text>",
        MARGIN_TOP + 8.0
    );
    for (i, cluster) in clusters.iter().enumerate() {
        let y = MARGIN_TOP + 28.0 + i as f64 * 20.0;
        let _ = writeln!(
            svg,
            "  <rect x=\"{legend_x}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>",
            fmt_coord(y - 10.0),
            color(*cluster)
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">Cluster {}</text>",
            fmt_coord(legend_x + 18.0),
            fmt_coord(y),
            cluster
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(candidate: &str, soq: f64, suq: f64, cluster: usize) -> PlotPoint {
        PlotPoint {
            candidate: candidate.to_string(),
            soq,
            suq,
            cluster,
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(render_qs_svg(&[]), Err(PlotError::EmptyPointSet)));
    }

    #[test]
    fn renders_points_labels_and_legend() {
        let svg = render_qs_svg(&[
            point("Cnd 4", 0.45, -0.02, 1),
            point("Cnd 6", 0.0, -2.41, 5),
        ])
        .unwrap();
        assert!(svg.contains("width=\"800\""));
        assert!(svg.contains("height=\"600\""));
        assert!(svg.contains(">Cnd 4<"));
        assert!(svg.contains(">Cnd 6<"));
        assert!(svg.contains("Cluster 1"));
        assert!(svg.contains("Cluster 5"));
        assert!(svg.contains("stroke-dasharray"));
        // same colors for same cluster indexes across calls
        assert_eq!(color(1), "#1f77b4");
        assert_eq!(color(11), "#1f77b4");
    }

    #[test]
    fn output_is_deterministic() {
        let pts = vec![point("a", 0.2, -0.1, 1), point("b", 0.0, -0.4, 2)];
        assert_eq!(render_qs_svg(&pts).unwrap(), render_qs_svg(&pts).unwrap());
    }

    #[test]
    fn over_qualified_point_sits_above_the_diagonal() {
        // y(suq) for the over-qualified point must be smaller (higher on
        // screen) than the diagonal's y at the same x
        let pts = vec![point("over", 0.4, -0.1, 1), point("under", 0.1, -0.4, 2)];
        let svg = render_qs_svg(&pts).unwrap();
        assert!(svg.contains("<circle"));
        // single point at the origin degenerates gracefully
        let single = render_qs_svg(&[point("solo", 0.0, 0.0, 1)]).unwrap();
        assert!(single.contains(">solo<"));
    }
}
