//! SVG rendering of an orbit in the unit-disk cross-section: the first
//! ball-frame coordinate of every orbit point.

use std::fmt::Write as _;

use dwolff::dynamics::Orbit;

use crate::config::PlotOptions;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    /// `(x, y)` of the first ball-frame coordinate, one per orbit point.
    pub points: Vec<(f64, f64)>,
    /// Denjoy-Wolff point in the same cross-section, if known.
    pub dw: Option<(f64, f64)>,
}

impl PlotData {
    pub fn from_orbit(orbit: &Orbit, dw: Option<(f64, f64)>) -> Self {
        let points = orbit
            .points
            .iter()
            .map(|p| {
                let u = p.ball_frame()[0];
                (u.re, u.im)
            })
            .collect();
        PlotData { points, dw }
    }

    pub fn is_trivial(&self) -> bool {
        self.points.len() <= 1
    }
}

fn f(x: f64) -> String {
    // fixed precision keeps output byte-stable; -0 is normalised
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn effective_stride(opts: &PlotOptions, n: usize) -> usize {
    if opts.stride > 0 {
        opts.stride
    } else {
        n.div_ceil(200).max(1)
    }
}

/// SVG document in disk coordinates (`y` pointing up). Element ids:
/// `unit-circle`, `orbit`, `start`, `final`, `dw-point`; markers carry
/// class `marker` or `marker tail`.
pub fn render_svg(data: &PlotData, opts: &PlotOptions) -> String {
    let mut s = String::new();
    let r = f(opts.marker_radius);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="-1.1 -1.1 2.2 2.2">"#,
        opts.size
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(
        s,
        r#"<circle id="unit-circle" cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.004"/>"#
    );
    let _ = writeln!(s, r##"<line x1="-1" y1="0" x2="1" y2="0" stroke="#cccccc" stroke-width="0.002"/>"##);

    let n = data.points.len();
    if n > 1 {
        let pts: Vec<String> = data.points.iter().map(|(x, y)| format!("{},{}", f(*x), f(*y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline id="orbit" points="{}" fill="none" stroke="steelblue" stroke-width="0.003"/>"#,
            pts.join(" ")
        );
        let stride = effective_stride(opts, n);
        let tail_start = n - ((n as f64 * opts.tail_highlight).ceil() as usize).min(n);
        for (i, (x, y)) in data.points.iter().enumerate().skip(1).step_by(stride) {
            if i == n - 1 {
                continue;
            }
            let (class, fill) = if i >= tail_start { ("marker tail", "orange") } else { ("marker", "steelblue") };
            let _ = writeln!(s, r#"<circle class="{class}" cx="{}" cy="{}" r="{r}" fill="{fill}"/>"#, f(*x), f(*y));
        }
        let (x, y) = data.points[n - 1];
        let _ = writeln!(s, r#"<circle id="final" cx="{}" cy="{}" r="{r}" fill="crimson"/>"#, f(x), f(y));
        if let Some((x, y)) = data.dw {
            let _ = writeln!(
                s,
                r#"<circle id="dw-point" cx="{}" cy="{}" r="{}" fill="none" stroke="crimson" stroke-width="0.006"/>"#,
                f(x),
                f(y),
                f(2.0 * opts.marker_radius)
            );
        }
    }
    if let Some((x, y)) = data.points.first() {
        let _ = writeln!(s, r#"<circle id="start" cx="{}" cy="{}" r="{r}" fill="seagreen"/>"#, f(*x), f(*y));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
