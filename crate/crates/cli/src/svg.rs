//! Deterministic SVG plots: index traces over a path and 2-d scatterplots.
//!
//! Coordinates are printed with two decimals, so equal input gives equal bytes.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::data::TraceRow;
use crate::error::CliError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

/// Plot area in SVG user units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotArea {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl PlotArea {
    pub const TRACE: PlotArea = PlotArea {
        left: 50.0,
        top: 30.0,
        width: 440.0,
        height: 320.0,
    };
    pub const SCATTER: PlotArea = PlotArea {
        left: 60.0,
        top: 30.0,
        width: 340.0,
        height: 340.0,
    };

    pub fn right(&self) -> f64 {
        self.left + self.width
    }

    pub fn bottom(&self) -> f64 {
        self.top + self.height
    }

    /// Maps `u` in `[lo, hi]` to the horizontal range.
    pub fn x(&self, u: f64, lo: f64, hi: f64) -> f64 {
        self.left + (u - lo) / (hi - lo) * self.width
    }

    /// Maps `v` in `[lo, hi]` to the vertical range, larger values higher up.
    pub fn y(&self, v: f64, lo: f64, hi: f64) -> f64 {
        self.bottom() - (v - lo) / (hi - lo) * self.height
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TraceOptions {
    pub title: Option<String>,
    /// Frame positions drawn as vertical lines.
    pub markers: Vec<usize>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(out: &mut String, title: Option<&str>) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if let Some(t) = title {
        let _ = writeln!(out, r#"<text class="title" x="{:.2}" y="18" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(t));
    }
}

/// Index values against frame number. Values are clamped to `[0, 1]`;
/// non-finite values break nothing and are left out of their polyline.
pub fn render_trace_svg(rows: &[TraceRow], opts: &TraceOptions) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(CliError::EmptyTrace);
    }
    // Series keep the order in which index names first appear.
    let mut order: Vec<&str> = Vec::new();
    let mut series: BTreeMap<&str, Vec<(usize, f64)>> = BTreeMap::new();
    for r in rows {
        if !series.contains_key(r.index_name.as_str()) {
            order.push(&r.index_name);
        }
        series.entry(&r.index_name).or_default().push((r.frame_id, r.value));
    }
    let max_frame = rows.iter().map(|r| r.frame_id).max().unwrap_or(0).max(1) as f64;
    let area = PlotArea::TRACE;

    let mut out = String::new();
    header(&mut out, opts.title.as_deref());
    let _ = writeln!(
        out,
        r#"<rect class="frame" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        area.left, area.top, area.width, area.height
    );
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = area.y(tick, 0.0, 1.0);
        let _ = writeln!(
            out,
            r##"<line class="grid" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            area.left,
            area.right()
        );
        let _ = writeln!(
            out,
            r#"<text class="ytick" x="{:.2}" y="{:.2}" text-anchor="end">{tick:.2}</text>"#,
            area.left - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text class="xtick" x="{:.2}" y="{:.2}" text-anchor="middle">0</text>"#,
        area.left,
        area.bottom() + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text class="xtick" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        area.right(),
        area.bottom() + 16.0,
        max_frame as usize
    );
    let _ = writeln!(
        out,
        r#"<text class="xlabel" x="{:.2}" y="{:.2}" text-anchor="middle">frame</text>"#,
        area.left + area.width / 2.0,
        area.bottom() + 32.0
    );
    for &m in &opts.markers {
        let x = area.x(m as f64, 0.0, max_frame);
        let _ = writeln!(
            out,
            r##"<line class="marker" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#999999" stroke-dasharray="4 3"/>"##,
            area.top,
            area.bottom()
        );
    }
    for (k, name) in order.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = series[name]
            .iter()
            .filter(|(_, v)| v.is_finite())
            .map(|&(f, v)| {
                format!(
                    "{:.2},{:.2}",
                    area.x(f as f64, 0.0, max_frame),
                    area.y(v.clamp(0.0, 1.0), 0.0, 1.0)
                )
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="series" data-index="{}" fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            escape(name),
            points.join(" ")
        );
        let ly = area.top + 10.0 + 16.0 * k as f64;
        let lx = area.right() + 15.0;
        let _ = writeln!(
            out,
            r#"<line class="legend" x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            out,
            r#"<text class="legend" x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScatterOptions {
    pub title: Option<String>,
    pub x_label: Option<String>,
    pub y_label: Option<String>,
    pub radius: Option<f64>,
    pub opacity: Option<f64>,
}

pub const DEFAULT_RADIUS: f64 = 2.0;
pub const DEFAULT_OPACITY: f64 = 0.6;

/// Axis range with a 5% margin; a constant column gets a unit range around its value.
pub fn axis_range(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

pub fn render_scatter_svg(x: &[f64], y: &[f64], opts: &ScatterOptions) -> Result<String, CliError> {
    if x.is_empty() {
        return Err(CliError::EmptyTrace);
    }
    if x.len() != y.len() {
        return Err(CliError::Data(format!("scatter columns differ in length: {} and {}", x.len(), y.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(CliError::Data("scatter coordinates must be finite".into()));
    }
    let radius = opts.radius.unwrap_or(DEFAULT_RADIUS);
    let opacity = opts.opacity.unwrap_or(DEFAULT_OPACITY);
    if !(radius > 0.0) || !(0.0..=1.0).contains(&opacity) {
        return Err(CliError::Config("scatter radius must be positive and opacity in [0, 1]".into()));
    }
    let area = PlotArea::SCATTER;
    let (x0, x1) = axis_range(x);
    let (y0, y1) = axis_range(y);

    let mut out = String::new();
    header(&mut out, opts.title.as_deref());
    let _ = writeln!(
        out,
        r#"<rect class="frame" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        area.left, area.top, area.width, area.height
    );
    let _ = writeln!(out, r#"<g class="points" fill="black" fill-opacity="{opacity}">"#);
    for (&u, &v) in x.iter().zip(y) {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}"/>"#,
            area.x(u, x0, x1),
            area.y(v, y0, y1)
        );
    }
    out.push_str("</g>\n");
    if let Some(l) = &opts.x_label {
        let _ = writeln!(
            out,
            r#"<text class="xlabel" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            area.left + area.width / 2.0,
            area.bottom() + 22.0,
            escape(l)
        );
    }
    if let Some(l) = &opts.y_label {
        let cx = area.left - 20.0;
        let cy = area.top + area.height / 2.0;
        let _ = writeln!(
            out,
            r#"<text class="ylabel" x="{cx:.2}" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 {cx:.2} {cy:.2})">{}</text>"#,
            escape(l)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Axis annotation from a projection column, such as `0.71 x5 - 0.71 x6`.
/// Loadings below 0.05 in magnitude are left out.
pub fn loading_label(loadings: &[f64], names: &[String]) -> String {
    let mut terms = Vec::new();
    for (b, name) in loadings.iter().zip(names) {
        if b.abs() < 0.05 {
            continue;
        }
        let sign = if *b < 0.0 { "-" } else { "+" };
        terms.push((sign, format!("{:.2} {name}", b.abs())));
    }
    let mut out = String::new();
    for (k, (sign, term)) in terms.iter().enumerate() {
        match (k, *sign) {
            (0, "-") => out.push('-'),
            (0, _) => {}
            (_, s) => {
                out.push(' ');
                out.push_str(s);
                out.push(' ');
            }
        }
        out.push_str(term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(name: &str, vals: &[f64]) -> Vec<TraceRow> {
        vals.iter()
            .enumerate()
            .map(|(i, &v)| TraceRow {
                frame_id: i,
                index_name: name.to_string(),
                value: v,
            })
            .collect()
    }

    fn attr<'a>(el: &'a str, name: &str) -> &'a str {
        let key = format!(" {name}=\"");
        let start = el.find(&key).unwrap() + key.len();
        &el[start..start + el[start..].find('"').unwrap()]
    }

    #[test]
    fn constant_series_is_horizontal_at_its_value() {
        let svg = render_trace_svg(&rows("holes", &[0.25; 11]), &TraceOptions::default()).unwrap();
        let poly = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        let expected_y = 350.0 - 0.25 * 320.0;
        let pts = attr(poly, "points");
        assert_eq!(pts.split(' ').count(), 11);
        for p in pts.split(' ') {
            let y: f64 = p.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(y, expected_y);
        }
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn one_polyline_per_index_and_markers_placed() {
        let mut r = rows("a", &[0.0, 0.5, 1.0, 0.5, 0.0]);
        r.extend(rows("b", &[1.0, 1.0, 0.0, 1.0, 1.0]));
        let opts = TraceOptions {
            title: Some("t".into()),
            markers: vec![1, 3],
        };
        let svg = render_trace_svg(&r, &opts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        let xs: Vec<f64> = svg
            .lines()
            .filter(|l| l.contains("class=\"marker\""))
            .map(|l| attr(l, "x1").parse().unwrap())
            .collect();
        // 4 frame intervals over 440 units starting at 50.
        assert_eq!(xs, vec![160.0, 380.0]);
        assert_eq!(svg, render_trace_svg(&r, &opts).unwrap());
    }

    #[test]
    fn empty_inputs_are_rejected() {
        assert_eq!(render_trace_svg(&[], &TraceOptions::default()), Err(CliError::EmptyTrace));
        assert_eq!(render_scatter_svg(&[], &[], &ScatterOptions::default()), Err(CliError::EmptyTrace));
    }

    #[test]
    fn scatter_circles_land_on_mapped_coordinates() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 2.0, 1.0];
        let svg = render_scatter_svg(&x, &y, &ScatterOptions::default()).unwrap();
        let circles: Vec<(f64, f64, String)> = svg
            .lines()
            .filter(|l| l.starts_with("<circle"))
            .map(|l| (attr(l, "cx").parse().unwrap(), attr(l, "cy").parse().unwrap(), attr(l, "r").to_string()))
            .collect();
        assert_eq!(circles.len(), 3);
        // Range [0, 2] padded by 0.1 on both sides, width 340 from 60.
        let sx = |u: f64| 60.0 + (u + 0.1) / 2.2 * 340.0;
        let sy = |v: f64| 370.0 - (v + 0.1) / 2.2 * 340.0;
        for (k, (cx, cy, r)) in circles.iter().enumerate() {
            assert!((cx - sx(x[k])).abs() <= 0.005, "{cx}");
            assert!((cy - sy(y[k])).abs() <= 0.005, "{cy}");
            assert_eq!(r, "2");
        }
        assert!(svg.contains("fill-opacity=\"0.6\""));
        assert_eq!(svg, render_scatter_svg(&x, &y, &ScatterOptions::default()).unwrap());
    }

    #[test]
    fn loading_labels() {
        let names: Vec<String> = (1..=4).map(|j| format!("x{j}")).collect();
        assert_eq!(loading_label(&[0.0, -0.6, 0.01, 0.8], &names), "-0.60 x2 + 0.80 x4");
        assert_eq!(loading_label(&[1.0, 0.0, 0.0, 0.0], &names), "1.00 x1");
    }
}
