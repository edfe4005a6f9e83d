//! Minimal SVG charts emitted as plain markup.

use std::fmt::Write as _;

use crate::eval::{ConfusionMatrix, RocCurve};
use crate::preprocess::CorrMatrix;

const FONT: &str = "font-family=\"sans-serif\"";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Fixed four-decimal coordinates keep the markup stable and diffable.
fn c(v: f64) -> String {
    format!("{v:.4}")
}

/// Diverging blue-white-red color for a value in [-1, 1].
fn diverging(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (r, g, b) = if v >= 0.0 {
        let t = v;
        (255.0, 255.0 * (1.0 - t), 255.0 * (1.0 - t))
    } else {
        let t = -v;
        (255.0 * (1.0 - t), 255.0 * (1.0 - t), 255.0)
    };
    format!("#{:02x}{:02x}{:02x}", r.round() as u8, g.round() as u8, b.round() as u8)
}

/// White-to-blue sequential color for a value in [0, 1].
fn sequential(v: f64) -> String {
    let t = v.clamp(0.0, 1.0);
    let r = 255.0 - t * (255.0 - 33.0);
    let g = 255.0 - t * (255.0 - 102.0);
    let b = 255.0 - t * (255.0 - 172.0);
    format!("#{:02x}{:02x}{:02x}", r.round() as u8, g.round() as u8, b.round() as u8)
}

pub fn roc_svg(curve: &RocCurve, title: &str) -> String {
    let (w, h) = (480.0, 480.0);
    let (left, top, size) = (60.0, 40.0, 380.0);
    let x = |fpr: f64| left + fpr * size;
    let y = |tpr: f64| top + (1.0 - tpr) * size;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" {FONT}>{}</text>",
        w / 2.0,
        escape(title)
    );
    // axes and ticks
    let _ = writeln!(
        s,
        "<rect x=\"{left}\" y=\"{top}\" width=\"{size}\" height=\"{size}\" fill=\"none\" stroke=\"black\"/>"
    );
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\" {FONT}>{t:.1}</text>",
            c(x(t)),
            c(top + size + 16.0)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"11\" {FONT}>{t:.1}</text>",
            c(left - 6.0),
            c(y(t) + 4.0)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" {FONT}>False positive rate</text>",
        c(left + size / 2.0),
        c(top + size + 34.0)
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" {FONT} transform=\"rotate(-90 16 {})\">True positive rate</text>",
        c(top + size / 2.0),
        c(top + size / 2.0)
    );
    let _ = writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>",
        c(x(0.0)),
        c(y(0.0)),
        c(x(1.0)),
        c(y(1.0))
    );
    let pts: Vec<String> = curve
        .points
        .iter()
        .map(|p| format!("{},{}", c(x(p.fpr)), c(y(p.tpr))))
        .collect();
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>",
        pts.join(" ")
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"13\" {FONT}>AUC = {:.4}</text>",
        c(left + size - 10.0),
        c(top + size - 12.0),
        curve.auc
    );
    s.push_str("</svg>\n");
    s
}

pub fn heatmap_svg(corr: &CorrMatrix, title: &str) -> String {
    let n = corr.names.len();
    let cell = 80.0;
    let label_w = 140.0;
    let top = 50.0;
    let w = label_w + cell * n as f64 + 20.0;
    let h = top + cell * n as f64 + 120.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\" {FONT}>{}</text>",
        w / 2.0,
        escape(title)
    );
    for (i, row) in corr.values.iter().enumerate() {
        let ry = top + cell * i as f64;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"12\" {FONT}>{}</text>",
            label_w - 8.0,
            c(ry + cell / 2.0 + 4.0),
            escape(&corr.names[i])
        );
        for (j, &v) in row.iter().enumerate() {
            let rx = label_w + cell * j as f64;
            let _ = writeln!(
                s,
                "<rect x=\"{rx}\" y=\"{ry}\" width=\"{cell}\" height=\"{cell}\" fill=\"{}\" stroke=\"white\"/>",
                diverging(v)
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" {FONT}>{v:.2}</text>",
                rx + cell / 2.0,
                c(ry + cell / 2.0 + 4.0)
            );
        }
    }
    let base = top + cell * n as f64 + 16.0;
    for (j, name) in corr.names.iter().enumerate() {
        let x = label_w + cell * j as f64 + cell / 2.0;
        let _ = writeln!(
            s,
            "<text x=\"{x}\" y=\"{base}\" text-anchor=\"end\" font-size=\"12\" {FONT} transform=\"rotate(-45 {x} {base})\">{}</text>",
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// 2x2 grid: rows are the true class, columns the predicted class, each
/// cell shaded by its share of the row.
pub fn confusion_svg(cm: &ConfusionMatrix, title: &str) -> String {
    let cell = 140.0;
    let (left, top) = (120.0, 70.0);
    let w = left + 2.0 * cell + 30.0;
    let h = top + 2.0 * cell + 60.0;
    let grid = [[cm.tn, cm.fp], [cm.fn_, cm.tp]];
    let names = ["Legit (0)", "Fraud (1)"];

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"26\" text-anchor=\"middle\" font-size=\"16\" {FONT}>{}</text>",
        w / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" {FONT}>Predicted</text>",
        left + cell,
        top - 26.0
    );
    for (j, name) in names.iter().enumerate() {
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" {FONT}>{name}</text>",
            left + cell * j as f64 + cell / 2.0,
            top - 8.0
        );
    }
    for (i, row) in grid.iter().enumerate() {
        let row_total: u64 = row.iter().sum();
        let ry = top + cell * i as f64;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"12\" {FONT}>{}</text>",
            left - 8.0,
            ry + cell / 2.0 + 4.0,
            names[i]
        );
        for (j, &count) in row.iter().enumerate() {
            let share = if row_total == 0 { 0.0 } else { count as f64 / row_total as f64 };
            let rx = left + cell * j as f64;
            let text_fill = if share > 0.5 { "white" } else { "black" };
            let _ = writeln!(
                s,
                "<rect x=\"{rx}\" y=\"{ry}\" width=\"{cell}\" height=\"{cell}\" fill=\"{}\" stroke=\"black\"/>",
                sequential(share)
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"18\" fill=\"{text_fill}\" {FONT}>{count}</text>",
                rx + cell / 2.0,
                ry + cell / 2.0 + 6.0
            );
        }
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" {FONT}>True class on rows</text>",
        left + cell,
        top + 2.0 * cell + 30.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::roc_curve;

    #[test]
    fn roc_polyline_matches_points() {
        let curve = roc_curve(&[1, 0, 1, 0], &[0.9, 0.8, 0.7, 0.1]).unwrap();
        let svg = roc_svg(&curve, "ROC");
        assert!(svg.contains(
            "<polyline points=\"60.0000,420.0000 60.0000,230.0000 250.0000,230.0000 250.0000,40.0000 440.0000,40.0000\""
        ));
        assert!(svg.contains("AUC = 0.7500"));
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn heatmap_cells_and_colors() {
        let corr = CorrMatrix {
            names: vec!["a".into(), "b<".into()],
            values: vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
            zero_variance: vec![],
        };
        let svg = heatmap_svg(&corr, "corr");
        assert_eq!(svg.matches("<rect x=").count(), 4);
        assert!(svg.contains("fill=\"#ff0000\""));
        assert!(svg.contains("fill=\"#0000ff\""));
        assert!(svg.contains(">-1.00</text>"));
        assert!(svg.contains("b&lt;"));
    }

    #[test]
    fn confusion_grid_layout() {
        let cm = ConfusionMatrix::new(83736, 87242, 3826, 320).unwrap();
        let svg = confusion_svg(&cm, "cm");
        let order: Vec<usize> = ["87242", "3826", "320", "83736"]
            .iter()
            .map(|n| svg.find(&format!(">{n}</text>")).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn color_scales() {
        assert_eq!(diverging(0.0), "#ffffff");
        assert_eq!(sequential(0.0), "#ffffff");
        assert_eq!(sequential(1.0), "#2166ac");
    }
}
