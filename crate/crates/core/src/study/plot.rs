//! Dependency-free SVG log-log plots of study results.

use std::fmt::Write as _;

use super::StudyRow;

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// A labelled polyline plus the reference slope drawn next to it.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub ref_slope: Option<f64>,
}

fn decade_range(vals: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return None;
    }
    let (lo, hi) = (lo.log10().floor(), hi.log10().ceil());
    Some(if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) })
}

fn usable(p: &(f64, f64)) -> bool {
    p.0.is_finite() && p.1.is_finite() && p.0 > 0.0 && p.1 > 0.0
}

/// Renders the series on log-log axes with decade grid lines. Points that
/// are not finite and positive are skipped.
pub fn loglog_svg(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|s| s.points.iter().filter(|p| usable(p)));
    let (x0, x1) = decade_range(pts().map(|p| p.0)).unwrap_or((0.0, 1.0));
    let (y0, y1) = decade_range(pts().map(|p| p.1)).unwrap_or((0.0, 1.0));
    let px = |x: f64| LEFT + (x.log10() - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y.log10() - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, (LEFT + W - RIGHT) / 2.0, esc(title));
    for e in (x0.ceil() as i32)..=(x1.floor() as i32) {
        let x = px(10f64.powi(e));
        let _ = writeln!(s, r##"<line x1="{x:.1}" y1="{TOP}" x2="{x:.1}" y2="{}" stroke="#ddd"/>"##, H - BOTTOM);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{}" text-anchor="middle">1e{e}</text>"#, H - BOTTOM + 18.0);
    }
    for e in (y0.ceil() as i32)..=(y1.floor() as i32) {
        let y = py(10f64.powi(e));
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ddd"/>"##, W - RIGHT);
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">1e{e}</text>"#, LEFT - 6.0, y + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (LEFT + W - RIGHT) / 2.0, H - 16.0, esc(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        esc(ylabel)
    );

    for (i, ser) in series.iter().enumerate() {
        let c = COLORS[i % COLORS.len()];
        let p: Vec<(f64, f64)> = ser.points.iter().copied().filter(usable).collect();
        if !p.is_empty() {
            let path: Vec<String> = p.iter().map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="2"/>"#, path.join(" "));
            for &(x, y) in &p {
                let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{c}"/>"#, px(x), py(y));
            }
        }
        if let (Some(slope), [.., a, b]) = (ser.ref_slope, p.as_slice()) {
            // Triangle below the last segment, spanning half of it in x.
            let xa = (a.0.ln() + 0.5 * (b.0.ln() - a.0.ln())).exp();
            let xb = b.0;
            let ya = a.1.min(b.1) * 0.5;
            let yb = ya * (xb / xa).powf(slope);
            let _ = writeln!(
                s,
                r#"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="none" stroke="{c}" stroke-dasharray="4 3"/>"#,
                px(xa),
                py(ya),
                px(xb),
                py(ya),
                px(xb),
                py(yb)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" fill="{c}">{slope}</text>"#,
                px(xb) + 4.0,
                (py(ya) + py(yb)) / 2.0 + 4.0
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{c}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, esc(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn esc(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Two plots per dataset, relative L2 and H1 error against the number of
/// degrees of freedom, one series per order. Returns (file name, svg).
pub fn study_plots(rows: &[StudyRow]) -> Vec<(String, String)> {
    let mut names: Vec<&str> = rows.iter().map(|r| r.dataset.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    let mut out = Vec::new();
    for name in names {
        let mut ks: Vec<usize> = rows.iter().filter(|r| r.dataset == name).map(|r| r.k).collect();
        ks.sort_unstable();
        ks.dedup();
        for (norm, tag) in [("L2", "l2"), ("H1", "h1")] {
            let series: Vec<Series> = ks
                .iter()
                .map(|&k| {
                    let mut sel: Vec<&StudyRow> = rows.iter().filter(|r| r.dataset == name && r.k == k).collect();
                    sel.sort_by_key(|r| r.level);
                    let err = |r: &StudyRow| if tag == "l2" { r.err_l2_rel } else { r.err_h1_rel };
                    // Optimal rates in terms of N_dof ~ h^-2.
                    let slope = if tag == "l2" { -((k + 1) as f64) / 2.0 } else { -(k as f64) / 2.0 };
                    Series {
                        label: format!("k = {k}"),
                        points: sel.iter().map(|r| (r.n_dof as f64, err(r))).collect(),
                        ref_slope: Some(slope),
                    }
                })
                .collect();
            let svg = loglog_svg(&format!("{name}: relative {norm} error"), "degrees of freedom", &format!("relative {norm} error"), &series);
            out.push((format!("{name}_{tag}.svg"), svg));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_well_formed_and_skips_bad_points() {
        let s = Series {
            label: "k = 1".into(),
            points: vec![(10.0, 1e-1), (40.0, 2.5e-2), (160.0, f64::NAN), (640.0, 1.6e-3)],
            ref_slope: Some(-1.0),
        };
        let svg = loglog_svg("t <x>", "n", "e", &[s]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains("t &lt;x&gt;"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn empty_series_still_renders() {
        let svg = loglog_svg("empty", "x", "y", &[]);
        assert!(svg.contains("</svg>"));
    }
}
