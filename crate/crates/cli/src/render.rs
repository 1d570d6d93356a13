//! Static SVG and ASCII renderings of fronts and resolutions.

use std::fmt::Write;

use clasplab_core::clasp::{clasp_intervals, Resolution};
use clasplab_core::diagram::{EventKind, FrontDiagram};
use clasplab_core::ruling::Side;

const DX: f64 = 36.0;
const DY: f64 = 22.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// Strand labels per slice, with a colour class per label.
struct Picture<'a> {
    slices: Vec<Vec<usize>>,
    colour: Box<dyn Fn(usize) -> usize + 'a>,
    switches: Vec<bool>,
}

fn picture_of_resolution(res: &Resolution) -> Picture<'_> {
    let label = |(eye, side): (usize, Side)| 2 * eye + usize::from(side == Side::Upper);
    let slices = res.slices.iter().map(|s| s.iter().copied().map(label).collect()).collect();
    let mut switches = vec![false; res.diagram.len()];
    for t in &res.touches {
        switches[t.event] = true;
    }
    Picture { slices, colour: Box::new(|l| l / 2), switches }
}

fn picture_of_front(d: &FrontDiagram) -> Picture<'_> {
    let trace = d.trace().expect("validated before rendering");
    let components = trace.component_of.clone();
    Picture {
        slices: trace.slices,
        colour: Box::new(move |l| components[l]),
        switches: vec![false; d.len()],
    }
}

fn y_of(height: usize, slot: f64) -> f64 {
    MARGIN + (height as f64 - slot) * DY
}

fn fmt_pt(x: f64, y: f64) -> String {
    format!("{x:.1},{y:.1}")
}

/// SVG of the front. With a resolution the eyes are coloured by id, switches
/// are drawn as touching strands with a dot, and clasp stretches are shaded.
pub fn svg(d: &FrontDiagram, res: Option<&Resolution>) -> String {
    let pic = match res {
        Some(r) => picture_of_resolution(r),
        None => picture_of_front(d),
    };
    let height = d.strand_profile().into_iter().max().unwrap_or(0);
    let width = MARGIN * 2.0 + DX * d.len() as f64;
    let total_h = MARGIN * 2.0 + DY * (height.max(1) as f64 - 1.0).max(0.0) + DY;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        width, total_h, width, total_h
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(r) = res {
        for a in 0..r.eye_count() {
            for b in a + 1..r.eye_count() {
                for (s, e) in clasp_intervals(r, a, b).unwrap_or_default() {
                    let x0 = MARGIN + DX * (s as f64 + 0.5);
                    let x1 = MARGIN + DX * (e as f64 + 0.5);
                    let _ = writeln!(
                        out,
                        r##"<rect class="clasp" x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="#fff3b0" stroke="#e0c040" data-eyes="{a},{b}"/>"##,
                        x0,
                        MARGIN / 2.0,
                        x1 - x0,
                        total_h - MARGIN
                    );
                }
            }
        }
    }
    let y = |slot: f64| y_of(height, slot);
    for (i, e) in d.events().iter().enumerate() {
        let (before, after) = (&pic.slices[i], &pic.slices[i + 1]);
        let x0 = MARGIN + DX * i as f64;
        let x1 = x0 + DX;
        let xm = x0 + DX / 2.0;
        let p = e.position;
        let mid = y(p as f64 + 0.5);
        for (j, &label) in after.iter().enumerate() {
            let colour = PALETTE[(pic.colour)(label) % PALETTE.len()];
            let slot_after = (j + 1) as f64;
            let pts = match before.iter().position(|&l| l == label) {
                None => vec![(xm, mid), (x1, y(slot_after))],
                Some(k) => {
                    let slot_before = (k + 1) as f64;
                    if e.kind == EventKind::Crossing && pic.switches[i] && (k + 1 == p || k == p) {
                        vec![(x0, y(slot_before)), (xm, mid), (x1, y(slot_after))]
                    } else {
                        vec![(x0, y(slot_before)), (x1, y(slot_after))]
                    }
                }
            };
            let pts: Vec<String> = pts.into_iter().map(|(a, b)| fmt_pt(a, b)).collect();
            let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#, pts.join(" "));
        }
        if e.kind == EventKind::RightCusp {
            for k in [p - 1, p] {
                let colour = PALETTE[(pic.colour)(before[k]) % PALETTE.len()];
                let pts = [fmt_pt(x0, y((k + 1) as f64)), fmt_pt(xm, mid)];
                let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#, pts.join(" "));
            }
        }
        if pic.switches[i] {
            let _ = writeln!(out, r#"<circle class="switch" cx="{:.1}" cy="{:.1}" r="3" fill="black"/>"#, xm, mid);
        }
    }
    out.push_str("</svg>\n");
    out
}

fn letter(i: usize) -> String {
    let mut s = String::new();
    let mut n = i;
    loop {
        s.insert(0, (b'A' + (n % 26) as u8) as char);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s
}

/// One line per event: the event, then the owner of each slot after it,
/// bottom to top. With a resolution owners are eyes (lower case marks the
/// lower branch); without one they are link components. Switches are starred.
pub fn ascii(d: &FrontDiagram, res: Option<&Resolution>) -> String {
    let trace = d.trace().expect("validated before rendering");
    let mut out = String::new();
    let _ = writeln!(out, "{:>4}  {:<6}  slots (bottom to top)", "#", "event");
    for (i, e) in d.events().iter().enumerate() {
        let cells: Vec<String> = match res {
            Some(r) => r.slices[i + 1]
                .iter()
                .map(|&(eye, side)| match side {
                    Side::Lower => letter(eye).to_lowercase(),
                    Side::Upper => letter(eye),
                })
                .collect(),
            None => trace.slices[i + 1].iter().map(|&s| letter(trace.component_of[s])).collect(),
        };
        let mark = match res {
            Some(r) if r.touches.iter().any(|t| t.event == i) => "*",
            _ => " ",
        };
        let _ = writeln!(out, "{:>4}  {:<6}{} {}", i + 1, e.to_string(), mark, cells.join(" "));
    }
    out
}
