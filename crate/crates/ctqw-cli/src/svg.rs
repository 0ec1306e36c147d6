//! Minimal SVG line-plot renderer: fixed 800x600 viewport, one polyline per
//! series, axes with ticks, a legend, and optional log scales. No external
//! tooling needed to look at a run.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 8] = [
    "#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Plot {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_x: false,
            log_y: false,
            series: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let tx = |x: f64| if self.log_x { x.log10() } else { x };
        let ty = |y: f64| if self.log_y { y.log10() } else { y };

        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for s in &self.series {
            for &(x, y) in &s.points {
                if self.log_x && x <= 0.0 || self.log_y && y <= 0.0 {
                    continue;
                }
                xmin = xmin.min(tx(x));
                xmax = xmax.max(tx(x));
                ymin = ymin.min(ty(y));
                ymax = ymax.max(ty(y));
            }
        }
        if !xmin.is_finite() || !xmax.is_finite() {
            xmin = 0.0;
            xmax = 1.0;
        }
        if !ymin.is_finite() || !ymax.is_finite() {
            ymin = 0.0;
            ymax = 1.0;
        }
        if xmax - xmin < 1e-300 {
            xmax = xmin + 1.0;
        }
        if ymax - ymin < 1e-300 {
            ymax = ymin + 1.0;
        }
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let px = |x: f64| MARGIN_LEFT + (tx(x) - xmin) / (xmax - xmin) * plot_w;
        let py = |y: f64| MARGIN_TOP + plot_h - (ty(y) - ymin) / (ymax - ymin) * plot_h;

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(
            out,
            "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{}</text>",
            WIDTH / 2.0,
            escape(&self.title)
        );

        // axes
        let x0 = MARGIN_LEFT;
        let y0 = MARGIN_TOP + plot_h;
        let _ = writeln!(
            out,
            "  <line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>",
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            out,
            "  <line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x0:.1}\" y2=\"{MARGIN_TOP:.1}\" stroke=\"black\"/>"
        );

        // ticks: five per axis in transformed coordinates
        for k in 0..=4 {
            let fx = xmin + (xmax - xmin) * k as f64 / 4.0;
            let gx = MARGIN_LEFT + plot_w * k as f64 / 4.0;
            let label = if self.log_x {
                format!("1e{fx:.1}")
            } else {
                format!("{fx:.3}")
            };
            let _ = writeln!(
                out,
                "  <line x1=\"{gx:.1}\" y1=\"{y0:.1}\" x2=\"{gx:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
                y0 + 5.0
            );
            let _ = writeln!(
                out,
                "  <text x=\"{gx:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\" \
                 font-family=\"sans-serif\">{label}</text>",
                y0 + 18.0
            );
            let fy = ymin + (ymax - ymin) * k as f64 / 4.0;
            let gy = MARGIN_TOP + plot_h - plot_h * k as f64 / 4.0;
            let label = if self.log_y {
                format!("1e{fy:.1}")
            } else {
                format!("{fy:.3}")
            };
            let _ = writeln!(
                out,
                "  <line x1=\"{:.1}\" y1=\"{gy:.1}\" x2=\"{x0:.1}\" y2=\"{gy:.1}\" stroke=\"black\"/>",
                x0 - 5.0
            );
            let _ = writeln!(
                out,
                "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\" \
                 font-family=\"sans-serif\">{label}</text>",
                x0 - 8.0,
                gy + 4.0
            );
        }

        // axis labels
        let _ = writeln!(
            out,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{}</text>",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "  <text x=\"20\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" transform=\"rotate(-90 20 {:.1})\">{}</text>",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        // data
        for (idx, s) in self.series.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            let mut path = String::new();
            for &(x, y) in &s.points {
                if self.log_x && x <= 0.0 || self.log_y && y <= 0.0 {
                    continue;
                }
                let _ = write!(path, "{:.2},{:.2} ", px(x), py(y));
            }
            let _ = writeln!(
                out,
                "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>",
                path.trim_end()
            );
        }

        // legend, top-right inside the plot area
        for (idx, s) in self.series.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            let ly = MARGIN_TOP + 14.0 + 16.0 * idx as f64;
            let lx = MARGIN_LEFT + plot_w - 150.0;
            let _ = writeln!(
                out,
                "  <line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" \
                 stroke=\"{color}\" stroke-width=\"2\"/>",
                lx + 22.0
            );
            let _ = writeln!(
                out,
                "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" font-family=\"sans-serif\">{}</text>",
                lx + 28.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
