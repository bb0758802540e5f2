//! Minimal SVG renderings for the correlation heatmap and ROC overlays.

use std::fmt::Write as _;

use crate::eval::RocCurve;
use crate::stats::CorrelationMatrix;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Blue at -1, white at 0, red at +1. Degenerate cells are grey.
fn diverging(v: Option<f64>) -> String {
    let Some(v) = v else { return "#bbbbbb".into() };
    let v = v.clamp(-1.0, 1.0);
    let fade = |t: f64| (255.0 * (1.0 - t)).round() as u8;
    let (r, g, b) = if v >= 0.0 {
        (255, fade(v), fade(v))
    } else {
        (fade(-v), fade(-v), 255)
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

pub fn correlation_heatmap(m: &CorrelationMatrix) -> String {
    let n = m.dim();
    let cell = 18;
    let margin = 170;
    let size = margin + n * cell + 10;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" font-family="sans-serif" font-size="10">"#
    )
    .unwrap();
    for (i, name) in m.feature_names().iter().enumerate() {
        let pos = margin + i * cell + cell / 2 + 3;
        writeln!(out, r#"<text x="{}" y="{pos}" text-anchor="end">{}</text>"#, margin - 4, escape(name)).unwrap();
        writeln!(
            out,
            r#"<text x="{pos}" y="{}" text-anchor="start" transform="rotate(-90 {pos} {})">{}</text>"#,
            margin - 4,
            margin - 4,
            escape(name)
        )
        .unwrap();
    }
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            let label = v.map_or("undefined".to_string(), |v| format!("{v:.3}"));
            writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{cell}" height="{cell}" fill="{}"><title>{} / {}: {label}</title></rect>"#,
                margin + j * cell,
                margin + i * cell,
                diverging(v),
                escape(&m.feature_names()[i]),
                escape(&m.feature_names()[j]),
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Overlays one ROC curve per model with the chance diagonal.
pub fn roc_overlay(curves: &[(String, f64, &RocCurve)]) -> String {
    let (w, pad) = (400.0, 50.0);
    let px = |f: f64| pad + f * w;
    let py = |t: f64| pad + (1.0 - t) * w;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">"#,
        w + 2.0 * pad + 160.0,
        w + 2.0 * pad
    )
    .unwrap();
    writeln!(out, r#"<rect x="{pad}" y="{pad}" width="{w}" height="{w}" fill="none" stroke="black"/>"#).unwrap();
    writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888888" stroke-dasharray="4 4"/>"##,
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    )
    .unwrap();
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">false positive rate</text>"#, px(0.5), pad + w + 35.0).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">true positive rate</text>"#,
        pad - 30.0,
        py(0.5),
        pad - 30.0,
        py(0.5)
    )
    .unwrap();
    for (k, (name, area, curve)) in curves.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = curve
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", px(p.fpr), py(p.tpr)))
            .collect();
        writeln!(out, r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#, pts.join(" ")).unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}">{} (AUC {area:.3})</text>"#,
            pad + w + 15.0,
            pad + 20.0 + 18.0 * k as f64,
            escape(name)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
