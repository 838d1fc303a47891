//! Minimal SVG line charts, written by hand so run artifacts carry no
//! renderer dependency. Output is a fixed-size chart with axes, tick
//! labels, one polyline per series, and a small legend.

use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 32.0;
const MARGIN_BOTTOM: f64 = 48.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

/// One named polyline.
#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Series {
        Series {
            label: label.into(),
            points,
        }
    }
}

/// A chart is a titled set of series sharing one coordinate frame.
#[derive(Clone, Debug)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl LineChart {
    pub fn new(
        title: impl Into<String>,
        x_label: impl Into<String>,
        y_label: impl Into<String>,
    ) -> LineChart {
        LineChart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn push(&mut self, series: Series) {
        self.series.push(series);
    }

    /// Renders the chart document. Needs at least one finite point.
    pub fn render(&self) -> Result<String> {
        let finite: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        if finite.is_empty() {
            return Err(Error::domain(
                "cannot render a chart with no finite points".to_string(),
            ));
        }
        let (mut x0, mut x1) = min_max(finite.iter().map(|p| p.0));
        let (mut y0, mut y1) = min_max(finite.iter().map(|p| p.1));
        if x0 == x1 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y0 == y1 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let px = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let py = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        out.push_str(&format!(
            "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"15\">{}</text>\n",
            WIDTH / 2.0,
            escape(&self.title)
        ));

        // Frame and ticks.
        out.push_str(&format!(
            "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
             fill=\"none\" stroke=\"#333\"/>\n"
        ));
        for i in 0..=4 {
            let fx = x0 + (x1 - x0) * i as f64 / 4.0;
            let fy = y0 + (y1 - y0) * i as f64 / 4.0;
            let gx = px(fx);
            let gy = py(fy);
            out.push_str(&format!(
                "<line x1=\"{gx:.1}\" y1=\"{}\" x2=\"{gx:.1}\" y2=\"{}\" stroke=\"#999\"/>\n",
                HEIGHT - MARGIN_BOTTOM,
                HEIGHT - MARGIN_BOTTOM + 5.0
            ));
            out.push_str(&format!(
                "<text x=\"{gx:.1}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
                 font-size=\"11\">{}</text>\n",
                HEIGHT - MARGIN_BOTTOM + 18.0,
                fmt_tick(fx)
            ));
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{gy:.1}\" x2=\"{MARGIN_LEFT}\" y2=\"{gy:.1}\" \
                 stroke=\"#999\"/>\n",
                MARGIN_LEFT - 5.0
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" \
                 font-size=\"11\">{}</text>\n",
                MARGIN_LEFT - 8.0,
                gy + 4.0,
                fmt_tick(fy)
            ));
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"12\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        ));
        out.push_str(&format!(
            "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"12\" transform=\"rotate(-90 16 {})\">{}</text>\n",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        ));

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            if pts.is_empty() {
                continue;
            }
            out.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
                 points=\"{}\"/>\n",
                pts.join(" ")
            ));
            let ly = MARGIN_TOP + 16.0 + 16.0 * i as f64;
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{ly:.1}\" x2=\"{}\" y2=\"{ly:.1}\" stroke=\"{color}\" \
                 stroke-width=\"3\"/>\n",
                MARGIN_LEFT + plot_w - 150.0,
                MARGIN_LEFT + plot_w - 130.0
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                MARGIN_LEFT + plot_w - 124.0,
                ly + 4.0,
                escape(&series.label)
            ));
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

/// Turns binned counts into a step polyline over [lo, hi): each bin draws a
/// flat top across its width, so a histogram renders through the same
/// polyline path as every other series.
pub fn histogram_series(label: &str, lo: f64, hi: f64, counts: &[u64]) -> Series {
    let mut points = Vec::with_capacity(counts.len() * 2 + 2);
    let w = (hi - lo) / counts.len().max(1) as f64;
    points.push((lo, 0.0));
    for (i, &c) in counts.iter().enumerate() {
        points.push((lo + w * i as f64, c as f64));
        points.push((lo + w * (i + 1) as f64, c as f64));
    }
    points.push((hi, 0.0));
    Series::new(label, points)
}

/// Fills `bins` equal-width bins over [lo, hi]; out-of-range samples clamp
/// to the edge bins so every sample is visible.
pub fn bin_samples(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins.max(1)];
    let span = hi - lo;
    for &s in samples {
        let frac = if span > 0.0 { (s - lo) / span } else { 0.0 };
        let idx = ((frac * counts.len() as f64) as i64)
            .clamp(0, counts.len() as i64 - 1) as usize;
        counts[idx] += 1;
    }
    counts
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if a >= 100_000.0 || a < 0.01 {
        format!("{v:.2e}")
    } else if a >= 10.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
