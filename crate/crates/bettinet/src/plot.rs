//! Deterministic SVG rendering of component-count curves.
//!
//! The renderer is intentionally minimal: fixed canvas, fixed palette, no
//! timestamps, no randomness — the same curves always produce byte-identical
//! SVG, so plots can be diffed and committed like any other artifact. Curves
//! are drawn as right-continuous steps: horizontal at the old value up to a
//! breakpoint, vertical jump at the breakpoint.

use crate::error::{Error, Result};
use crate::filtration::BettiCurve;

/// Stroke pattern for one curve; used to tell groups apart in overlays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineStyle {
    Solid,
    Dashed,
}

impl LineStyle {
    fn dash_attr(self) -> &'static str {
        match self {
            LineStyle::Solid => "",
            LineStyle::Dashed => r#" stroke-dasharray="8 5""#,
        }
    }
}

/// One curve to draw, with its legend label and stroke style.
pub struct PlotSeries<'a> {
    pub label: String,
    pub curve: &'a BettiCurve,
    pub style: LineStyle,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 66.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 58.0;

const PALETTE: [&str; 6] = [
    "#1f6fb4", "#d0452e", "#2d8a4e", "#8552a1", "#b8860b", "#3a3a3a",
];

/// Renders an overlay of step curves to a standalone SVG document.
///
/// The x-axis spans `[0, max domain]` across the series; the y-axis spans
/// `[0, max component count]` with a little headroom. Output is fully
/// deterministic.
pub fn render_betti_plot(series: &[PlotSeries<'_>], title: &str) -> Result<String> {
    if series.is_empty() {
        return Err(Error::InvalidConfig(
            "nothing to plot: no curves given".to_string(),
        ));
    }
    let x_max = series
        .iter()
        .map(|s| s.curve.domain_max())
        .fold(f64::NEG_INFINITY, f64::max);
    let x_max = if x_max <= 0.0 { 1.0 } else { x_max };
    let y_max = series
        .iter()
        .map(|s| s.curve.terminal_value())
        .max()
        .unwrap_or(1) as f64;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let y_top = y_max * 1.06;
    let to_x = |v: f64| MARGIN_LEFT + v / x_max * plot_w;
    let to_y = |v: f64| MARGIN_TOP + (1.0 - v / y_top) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    ));
    svg.push('\n');
    svg.push_str(r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape_text(title)
    ));
    svg.push('\n');

    // Axes.
    svg.push_str(&format!(
        r##"<line x1="{l:.1}" y1="{b:.1}" x2="{r:.1}" y2="{b:.1}" stroke="#000" stroke-width="1"/>"##,
        l = MARGIN_LEFT,
        r = WIDTH - MARGIN_RIGHT,
        b = HEIGHT - MARGIN_BOTTOM
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<line x1="{l:.1}" y1="{t:.1}" x2="{l:.1}" y2="{b:.1}" stroke="#000" stroke-width="1"/>"##,
        l = MARGIN_LEFT,
        t = MARGIN_TOP,
        b = HEIGHT - MARGIN_BOTTOM
    ));
    svg.push('\n');

    // X ticks.
    let x_step = nice_step(x_max / 5.0);
    let mut tick = 0.0;
    while tick <= x_max + x_step * 1e-9 {
        let px = to_x(tick.min(x_max));
        svg.push_str(&format!(
            r##"<line x1="{px:.1}" y1="{b:.1}" x2="{px:.1}" y2="{b2:.1}" stroke="#000" stroke-width="1"/>"##,
            b = HEIGHT - MARGIN_BOTTOM,
            b2 = HEIGHT - MARGIN_BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            r#"<text x="{px:.1}" y="{ty:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            fmt_tick(tick),
            ty = HEIGHT - MARGIN_BOTTOM + 20.0
        ));
        svg.push('\n');
        tick += x_step;
    }
    svg.push_str(&format!(
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">threshold</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    ));
    svg.push('\n');

    // Y ticks (integer counts).
    let y_step = nice_step(y_max / 5.0).max(1.0);
    let mut tick = 0.0;
    while tick <= y_max + 1e-9 {
        let py = to_y(tick);
        svg.push_str(&format!(
            r##"<line x1="{l2:.1}" y1="{py:.1}" x2="{l:.1}" y2="{py:.1}" stroke="#000" stroke-width="1"/>"##,
            l = MARGIN_LEFT,
            l2 = MARGIN_LEFT - 5.0
        ));
        svg.push_str(&format!(
            r#"<text x="{tx:.1}" y="{ty:.1}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            fmt_tick(tick),
            tx = MARGIN_LEFT - 9.0,
            ty = py + 4.0
        ));
        svg.push('\n');
        tick += y_step;
    }
    svg.push_str(&format!(
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.1})">connected components</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));
    svg.push('\n');

    // Curves.
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let pts = s.curve.breakpoints();
        let mut d = format!("M {:.2} {:.2}", to_x(0.0), to_y(pts[0].1 as f64));
        for window in pts.windows(2) {
            let (lambda, beta) = window[1];
            d.push_str(&format!(" H {:.2}", to_x(lambda)));
            d.push_str(&format!(" V {:.2}", to_y(beta as f64)));
        }
        d.push_str(&format!(" H {:.2}", to_x(s.curve.domain_max())));
        svg.push_str(&format!(
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
            dash = s.style.dash_attr()
        ));
        svg.push('\n');
    }

    // Legend, top-right inside the plot area.
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let ly = MARGIN_TOP + 14.0 + idx as f64 * 18.0;
        let lx = WIDTH - MARGIN_RIGHT - 150.0;
        svg.push_str(&format!(
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{x2:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"{dash}/>"#,
            x2 = lx + 28.0,
            dash = s.style.dash_attr()
        ));
        svg.push_str(&format!(
            r#"<text x="{tx:.1}" y="{ty:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            escape_text(&s.label),
            tx = lx + 34.0,
            ty = ly + 4.0
        ));
        svg.push('\n');
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Rounds a raw step up to a "nice" value (1, 2, 2.5, or 5 times a power of
/// ten), so tick labels come out clean.
fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 || !raw.is_finite() {
        return 1.0;
    }
    let exp = raw.log10().floor();
    let base = 10f64.powf(exp);
    let frac = raw / base;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 2.5 {
        2.5
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * base
}

/// Short, stable tick label: up to four decimals, trailing zeros trimmed.
fn fmt_tick(v: f64) -> String {
    let mut text = format!("{v:.4}");
    while text.contains('.') && (text.ends_with('0') || text.ends_with('.')) {
        text.pop();
    }
    text
}

fn escape_text(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_curve() -> BettiCurve {
        BettiCurve::from_breakpoints(vec![(0.0, 1), (0.3, 2), (0.7, 4)], 1.0).unwrap()
    }

    #[test]
    fn renders_a_step_path_per_series() {
        let c = sample_curve();
        let svg = render_betti_plot(
            &[PlotSeries {
                label: "group 1".to_string(),
                curve: &c,
                style: LineStyle::Solid,
            }],
            "demo",
        )
        .unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<path").count(), 1);
        // Steps draw as horizontal-then-vertical segments.
        assert!(svg.contains(" H "));
        assert!(svg.contains(" V "));
        assert!(svg.contains("group 1"));
    }

    #[test]
    fn output_is_byte_identical_across_calls() {
        let c = sample_curve();
        let series = || PlotSeries {
            label: "a".to_string(),
            curve: &c,
            style: LineStyle::Dashed,
        };
        let one = render_betti_plot(&[series()], "t").unwrap();
        let two = render_betti_plot(&[series()], "t").unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn overlay_styles_differ() {
        let c = sample_curve();
        let svg = render_betti_plot(
            &[
                PlotSeries {
                    label: "solid".to_string(),
                    curve: &c,
                    style: LineStyle::Solid,
                },
                PlotSeries {
                    label: "dashed".to_string(),
                    curve: &c,
                    style: LineStyle::Dashed,
                },
            ],
            "overlay",
        )
        .unwrap();
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("stroke-dasharray"));
    }

    #[test]
    fn empty_series_is_an_error() {
        assert!(render_betti_plot(&[], "empty").is_err());
    }

    #[test]
    fn title_is_escaped() {
        let c = sample_curve();
        let svg = render_betti_plot(
            &[PlotSeries {
                label: "a<b".to_string(),
                curve: &c,
                style: LineStyle::Solid,
            }],
            "x < y & z",
        )
        .unwrap();
        assert!(svg.contains("x &lt; y &amp; z"));
        assert!(svg.contains("a&lt;b"));
    }

    #[test]
    fn nice_steps_are_nice() {
        assert_eq!(nice_step(0.19), 0.2);
        assert_eq!(nice_step(0.2), 0.2);
        assert_eq!(nice_step(0.21), 0.25);
        assert_eq!(nice_step(3.0), 5.0);
        assert_eq!(nice_step(7.0), 10.0);
        assert_eq!(nice_step(1.0), 1.0);
    }

    #[test]
    fn tick_labels_trim_zeros() {
        assert_eq!(fmt_tick(0.2), "0.2");
        assert_eq!(fmt_tick(1.0), "1");
        assert_eq!(fmt_tick(0.25), "0.25");
        assert_eq!(fmt_tick(0.0), "0");
    }
}
