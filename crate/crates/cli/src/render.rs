//! Static SVG of an allocation.
//!
//! The demand model has no vertical positions, so within a slot tasks are
//! stacked in placement order. The polyline on top is the actual load.

use dbp_core::{Instance, Solution};
use std::fmt::Write;

const CELL: u64 = 20;
const MARGIN: u64 = 30;
const GAP: u64 = 40;
const MAX_PANEL: u64 = 600;

/// Pixel size of one slot and one capacity unit, shrunk for big bins.
fn scale(instance: &Instance) -> (f64, f64) {
    let fit = |n: u64| (CELL as f64).min(MAX_PANEL as f64 / n as f64);
    (fit(instance.horizon()), fit(instance.capacity()))
}

fn color(id: u64) -> String {
    format!("hsl({},65%,62%)", id.wrapping_mul(137) % 360)
}

/// One panel per bin, left to right.
pub fn render_svg(instance: &Instance, solution: &Solution) -> String {
    let (sx, sy) = scale(instance);
    let t = instance.horizon();
    let c = instance.capacity();
    let panel_w = t as f64 * sx;
    let panel_h = c as f64 * sy;
    let bins = solution.num_bins();
    let (width, height) = if bins == 0 {
        (2 * MARGIN, 2 * MARGIN)
    } else {
        let w = 2.0 * MARGIN as f64 + bins as f64 * panel_w + (bins - 1) as f64 * GAP as f64;
        let h = 2.0 * MARGIN as f64 + panel_h + 20.0;
        (w.ceil() as u64, h.ceil() as u64)
    };

    let mut out = String::new();
    let w = &mut out;
    // Writing into a String cannot fail.
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        w,
        r#"<desc>T={t} C={c} bins={bins}</desc>"#
    );

    for (index, bin) in solution.bins.iter().enumerate() {
        let left = MARGIN as f64 + index as f64 * (panel_w + GAP as f64);
        let bottom = MARGIN as f64 + 20.0 + panel_h;
        let top = bottom - panel_h;
        let _ = writeln!(w, r#"<g class="bin" id="bin-{index}">"#);
        let _ = writeln!(
            w,
            r#"<text x="{left:.2}" y="{:.2}" font-family="sans-serif" font-size="12">bin {index}</text>"#,
            MARGIN as f64 + 10.0
        );
        let _ = writeln!(
            w,
            r#"<rect x="{left:.2}" y="{top:.2}" width="{panel_w:.2}" height="{panel_h:.2}" fill="white" stroke="black"/>"#
        );
        for slot in 1..t {
            let x = left + slot as f64 * sx;
            let _ = writeln!(
                w,
                r##"<line x1="{x:.2}" y1="{top:.2}" x2="{x:.2}" y2="{bottom:.2}" stroke="#ddd" stroke-width="0.5"/>"##
            );
        }

        // Stack in placement order; a task's piece in each slot sits on
        // whatever was placed there before it.
        let mut stacked = vec![0u64; t as usize];
        for p in &bin.placements {
            let first = p.start.saturating_sub(1) as usize;
            let last = (p.end() as usize).min(t as usize);
            let fill = color(p.task.id.0);
            let _ = writeln!(w, r#"<g class="task" data-id="{}">"#, p.task.id);
            let mut slot = first;
            while slot < last {
                // Merge neighbouring slots with the same base into one rect.
                let base = stacked[slot];
                let mut end = slot + 1;
                while end < last && stacked[end] == base {
                    end += 1;
                }
                let x = left + slot as f64 * sx;
                let y = bottom - (base + p.task.height) as f64 * sy;
                let _ = writeln!(
                    w,
                    r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="black" stroke-width="0.5"><title>task {} ({}x{}) at {}</title></rect>"#,
                    (end - slot) as f64 * sx,
                    p.task.height as f64 * sy,
                    p.task.id,
                    p.task.width,
                    p.task.height,
                    p.start
                );
                for s in &mut stacked[slot..end] {
                    *s += p.task.height;
                }
                slot = end;
            }
            let _ = writeln!(w, "</g>");
        }

        let mut points = Vec::with_capacity(2 * t as usize);
        for (slot, &load) in stacked.iter().enumerate() {
            let y = bottom - load as f64 * sy;
            points.push(format!("{:.2},{y:.2}", left + slot as f64 * sx));
            points.push(format!("{:.2},{y:.2}", left + (slot + 1) as f64 * sx));
        }
        let _ = writeln!(
            w,
            r#"<polyline class="load" points="{}" fill="none" stroke="navy" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            w,
            r#"<line class="capacity" x1="{left:.2}" y1="{top:.2}" x2="{:.2}" y2="{top:.2}" stroke="red" stroke-width="1.5" stroke-dasharray="6,3"/>"#,
            left + panel_w
        );
        let _ = writeln!(w, "</g>");
    }
    let _ = writeln!(w, "</svg>");
    out
}
