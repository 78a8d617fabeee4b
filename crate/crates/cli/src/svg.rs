//! Dependency-free SVG line charts on a fixed 800 x 500 view box.
//!
//! The renderer draws a plot frame with linear ticks, optional dashed
//! vertical marker lines, one polyline per series, and a small legend for
//! labeled series. All coordinates are formatted with two decimals so the
//! output is byte-for-byte reproducible.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 780.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 452.0;
const TICKS: usize = 6;

pub struct Series {
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub width: f64,
    pub label: Option<String>,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Data-space x positions marked with dashed vertical lines.
    pub dashed_verticals: Vec<f64>,
}

/// Distinguishable stroke colors, cycled when a chart has many series.
pub const PALETTE: [&str; 10] = [
    "#3465a4", "#cc0000", "#4e9a06", "#f57900", "#75507b", "#0897a6", "#8a8a2f", "#a0387f",
    "#555753", "#8f5902",
];

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        LEFT + (v - self.x_min) / (self.x_max - self.x_min) * (RIGHT - LEFT)
    }

    fn y(&self, v: f64) -> f64 {
        BOTTOM - (v - self.y_min) / (self.y_max - self.y_min) * (BOTTOM - TOP)
    }
}

impl Chart {
    fn frame(&self) -> Frame {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for series in &self.series {
            for &(x, y) in &series.points {
                if x.is_finite() && y.is_finite() {
                    x_min = x_min.min(x);
                    x_max = x_max.max(x);
                    y_min = y_min.min(y);
                    y_max = y_max.max(y);
                }
            }
        }
        if !x_min.is_finite() || x_max <= x_min {
            let center = if x_min.is_finite() { x_min } else { 0.0 };
            x_min = center - 1.0;
            x_max = center + 1.0;
        }
        if !y_min.is_finite() || y_max <= y_min {
            let center = if y_min.is_finite() { y_min } else { 0.0 };
            y_min = center - 1.0;
            y_max = center + 1.0;
        }
        let pad = 0.05 * (y_max - y_min);
        Frame { x_min, x_max, y_min: y_min - pad, y_max: y_max + pad }
    }

    pub fn render(&self) -> String {
        let frame = self.frame();
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
             font-family=\"monospace\">"
        );
        let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>");
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"26\" text-anchor=\"middle\" font-size=\"16\" \
             fill=\"#111111\">{}</text>",
            0.5 * (LEFT + RIGHT),
            escape(&self.title)
        );

        // Gridlines and tick labels.
        for i in 0..TICKS {
            let f = i as f64 / (TICKS - 1) as f64;
            let xv = frame.x_min + f * (frame.x_max - frame.x_min);
            let yv = frame.y_min + f * (frame.y_max - frame.y_min);
            let xp = frame.x(xv);
            let yp = frame.y(yv);
            let _ = writeln!(
                svg,
                "<line x1=\"{xp:.2}\" y1=\"{TOP}\" x2=\"{xp:.2}\" y2=\"{BOTTOM}\" \
                 stroke=\"#e5e5e5\"/>"
            );
            let _ = writeln!(
                svg,
                "<line x1=\"{LEFT}\" y1=\"{yp:.2}\" x2=\"{RIGHT}\" y2=\"{yp:.2}\" \
                 stroke=\"#e5e5e5\"/>"
            );
            let _ = writeln!(
                svg,
                "<text x=\"{xp:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\" \
                 fill=\"#333333\">{}</text>",
                BOTTOM + 18.0,
                fmt_tick(xv)
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"12\" \
                 fill=\"#333333\">{}</text>",
                LEFT - 8.0,
                yp + 4.0,
                fmt_tick(yv)
            );
        }

        for &xv in &self.dashed_verticals {
            if xv < frame.x_min || xv > frame.x_max {
                continue;
            }
            let xp = frame.x(xv);
            let _ = writeln!(
                svg,
                "<line x1=\"{xp:.2}\" y1=\"{TOP}\" x2=\"{xp:.2}\" y2=\"{BOTTOM}\" \
                 stroke=\"#999999\" stroke-dasharray=\"6 4\"/>"
            );
        }

        for series in &self.series {
            let coords: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
                .collect();
            if coords.is_empty() {
                continue;
            }
            let _ = writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" points=\"{}\"/>",
                series.color,
                series.width,
                coords.join(" ")
            );
        }

        // Legend for labeled series, stacked inside the top-left corner.
        let mut slot = 0usize;
        for series in &self.series {
            let Some(label) = &series.label else { continue };
            let y = TOP + 18.0 + 20.0 * slot as f64;
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{}\" \
                 stroke-width=\"3\"/>",
                LEFT + 12.0,
                LEFT + 40.0,
                series.color
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#333333\">{}</text>",
                LEFT + 48.0,
                y + 4.0,
                escape(label)
            );
            slot += 1;
        }

        let _ = writeln!(
            svg,
            "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" \
             stroke=\"#333333\"/>",
            RIGHT - LEFT,
            BOTTOM - TOP
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\" \
             fill=\"#111111\">{}</text>",
            0.5 * (LEFT + RIGHT),
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\" \
             fill=\"#111111\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
            0.5 * (TOP + BOTTOM),
            0.5 * (TOP + BOTTOM),
            escape(&self.y_label)
        );
        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
