//! Line charts of metric versus circuit size, one set per topology.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::pipeline::ResultRow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("no result rows to chart")]
    Empty,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

const PALETTE: [&str; 8] = [
    "#1F77B4", "#D62728", "#2CA02C", "#FF7F0E", "#9467BD", "#8C564B", "#E377C2", "#17BECF",
];

pub const METRICS: [(&str, &str); 3] = [
    ("ccr", "CCR"),
    ("hotspotness", "mean qubit hotspotness"),
    ("burstiness", "temporal burstiness"),
];

fn metric(r: &ResultRow, name: &str) -> f64 {
    match name {
        "ccr" => r.ccr,
        "hotspotness" => r.hotspotness,
        "burstiness" => r.burstiness,
        _ => unreachable!("metric names come from METRICS"),
    }
}

/// Renders `{topology}_{metric}.svg` for every topology present, one
/// polyline per family. Output depends only on the rows.
pub fn render_report(rows: &[ResultRow]) -> Result<Vec<(String, String)>, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut by_topo: BTreeMap<&str, BTreeMap<&str, Vec<&ResultRow>>> = BTreeMap::new();
    for r in rows {
        by_topo
            .entry(&r.topology)
            .or_default()
            .entry(&r.family)
            .or_default()
            .push(r);
    }
    let mut out = Vec::new();
    for (topo, families) in &by_topo {
        for (key, label) in METRICS {
            let series: Vec<(&str, Vec<(f64, f64)>)> = families
                .iter()
                .map(|(fam, rs)| {
                    let mut pts: Vec<(f64, f64)> =
                        rs.iter().map(|r| (r.n_logical as f64, metric(r, key))).collect();
                    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                    (*fam, pts)
                })
                .collect();
            let title = format!("{label} on {topo}");
            out.push((format!("{topo}_{key}.svg"), line_chart(&title, "logical qubits", label, &series)));
        }
    }
    Ok(out)
}

/// Round step (1, 2 or 5 times a power of ten) giving about `TICKS` intervals.
fn nice_step(span: f64) -> f64 {
    let raw = span / TICKS as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let m = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn axis(lo: f64, hi: f64) -> (f64, f64, f64) {
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo, lo + 1.0) };
    let step = nice_step(hi - lo);
    ((lo / step).floor() * step, (hi / step).ceil() * step, step)
}

fn label_num(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let all = series.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y1) = (0.0, 1.0, 1.0);
    }
    let (xa, xb, xs) = axis(x0, x1);
    let (ya, yb, ys) = axis(0.0, y1.max(0.0));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - xa) / (xb - xa) * pw;
    let py = |y: f64| TOP + ph - (y - ya) / (yb - ya) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#FFFFFF"/>"##);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );

    // grid and tick labels
    let nx = ((xb - xa) / xs).round() as usize;
    for i in 0..=nx {
        let v = xa + i as f64 * xs;
        let x = px(v);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#E0E0E0"/>"##, TOP + ph);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 16.0,
            label_num(v)
        );
    }
    let ny = ((yb - ya) / ys).round() as usize;
    for i in 0..=ny {
        let v = ya + i as f64 * ys;
        let y = py(v);
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#E0E0E0"/>"##, LEFT + pw);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            label_num(v)
        );
    }
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#000000"/>"##
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );

    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" data-series="{}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            escape(name),
            coords.join(" ")
        );
        for &(x, y) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y));
        }
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 16.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text class="legend" x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(family: &str, topology: &str, n: usize, ccr: f64) -> ResultRow {
        ResultRow {
            family: family.into(),
            n_logical: n,
            n_physical: n,
            topology: topology.into(),
            topo_param: format!("n={n}"),
            strategy: "baseline".into(),
            n_ops: 10,
            n_1q: 5,
            n_2q: 5,
            n_swap: 2,
            ccr,
            hotspotness: 0.5,
            burstiness: 1.5,
            makespan: 7,
            seed: 42,
        }
    }

    #[test]
    fn one_family_three_sizes() {
        let rows: Vec<_> = [4, 8, 12].iter().map(|&n| row("qft", "star", n, 0.1 * n as f64)).collect();
        let charts = render_report(&rows).unwrap();
        let names: Vec<&str> = charts.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["star_ccr.svg", "star_hotspotness.svg", "star_burstiness.svg"]);
        for (_, svg) in &charts {
            assert_eq!(svg.matches("<polyline").count(), 1);
            let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
            let pts = line.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
            assert_eq!(pts.split(' ').count(), 3);
        }
    }

    #[test]
    fn legend_lists_each_family() {
        let rows = vec![
            row("qft", "square", 4, 0.1),
            row("qft", "square", 8, 0.2),
            row("grover", "square", 4, 0.3),
            row("grover", "square", 10, 0.4),
        ];
        for (_, svg) in render_report(&rows).unwrap() {
            assert_eq!(svg.matches("<polyline").count(), 2);
            assert!(svg.contains(r#"class="legend" x="532" y="54">grover<"#));
            assert!(svg.contains(">qft</text>"));
            assert!(svg.contains(">logical qubits</text>"));
        }
    }

    #[test]
    fn pure_function_of_rows() {
        let rows = vec![row("qft", "star", 4, 0.0), row("qft", "heavy_hex", 4, 0.0)];
        assert_eq!(render_report(&rows).unwrap(), render_report(&rows).unwrap());
        assert_eq!(render_report(&rows).unwrap().len(), 6);
        assert_eq!(render_report(&[]), Err(ReportError::Empty));
    }

    #[test]
    fn axis_is_round() {
        assert_eq!(axis(4.0, 64.0), (0.0, 80.0, 20.0));
        assert_eq!(axis(0.0, 0.0), (0.0, 1.0, 0.2));
        assert_eq!(nice_step(1.0), 0.2);
    }
}
