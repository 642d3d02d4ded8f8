use std::fmt::Write as _;

use lensforge::wiring::WiringDiagram;
use lensforge::Result;

/// Table view: one row per wire in right-edge order, one column per event
/// with the leftmost event first. `o` marks a wire through the point.
pub fn ascii(w: &WiringDiagram) -> String {
    let labels: Vec<String> = w.events.iter().rev().map(|e| e.label.to_string()).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(1).max(2) + 1;
    let name_w = format!("w{}", w.k).len() + 1;
    let mut out = String::new();
    write!(out, "{:name_w$}", "").unwrap();
    for l in &labels {
        write!(out, "{l:>width$}").unwrap();
    }
    out.push('\n');
    for &wire in &w.right_order {
        write!(out, "{:<name_w$}", format!("w{wire}")).unwrap();
        for e in w.events.iter().rev() {
            let mark = if e.contains(wire) { "o" } else { "-" };
            write!(out, "{:->width$}", mark).unwrap();
        }
        out.push('\n');
    }
    out
}

const DX: f64 = 60.0;
const DY: f64 = 40.0;
const MARGIN: f64 = 50.0;
const HALF: f64 = 18.0;

/// Schematic drawing: wires as polylines, each multi-wire point as a bundle
/// of straight segments crossing at the point, free points as dots.
pub fn svg(w: &WiringDiagram) -> Result<String> {
    let n = w.events.len();
    let width = 2.0 * MARGIN + (n as f64 + 1.0) * DX;
    let height = 2.0 * MARGIN + (w.k.max(1) as f64 - 1.0) * DY;
    let y_of = |pos: usize| MARGIN + pos as f64 * DY;
    let x_of = |idx: usize| width - MARGIN - (idx as f64 + 1.0) * DX;

    let mut paths: Vec<Vec<(f64, f64)>> = vec![Vec::new(); w.k + 1];
    let mut order = w.right_order.clone();
    for (pos, &wire) in order.iter().enumerate() {
        paths[wire].push((width - MARGIN, y_of(pos)));
    }
    let blocks = w.all_blocks()?;
    let mut dots = Vec::with_capacity(n);
    for (idx, (e, &(a, b))) in w.events.iter().zip(&blocks).enumerate() {
        let x = x_of(idx);
        let (a, b) = (a - 1, b - 1);
        for (pos, &wire) in order.iter().enumerate() {
            paths[wire].push((x + HALF, y_of(pos)));
        }
        order[a..=b].reverse();
        for (pos, &wire) in order.iter().enumerate() {
            paths[wire].push((x - HALF, y_of(pos)));
        }
        dots.push((x, (y_of(a) + y_of(b)) / 2.0, e.label.to_string()));
    }
    for (pos, &wire) in order.iter().enumerate() {
        paths[wire].push((MARGIN, y_of(pos)));
    }

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (pos, &wire) in w.right_order.iter().enumerate() {
        let pts: Vec<String> = paths[wire]
            .iter()
            .map(|(x, y)| format!("{x:.1},{y:.1}"))
            .collect();
        writeln!(
            out,
            r#"<polyline class="wire" fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" font-family="monospace">w{wire}</text>"#,
            width - MARGIN + 6.0,
            y_of(pos) + 4.0
        )
        .unwrap();
    }
    for (x, y, label) in dots {
        writeln!(
            out,
            r#"<circle class="point" cx="{x:.1}" cy="{y:.1}" r="4" fill="crimson"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{x:.1}" y="{:.1}" font-size="11" font-family="monospace" text-anchor="middle">{label}</text>"#,
            MARGIN / 2.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
