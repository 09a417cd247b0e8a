//! SVG 1.1 rendering of tilings.
//!
//! Dominos are drawn as axis-aligned rectangles on the grid of unit squares
//! and mapped into Kasteleyn coordinates by a group transform; the outer
//! group puts Kasteleyn `(0, 0)` at the bottom left with `x2` pointing up.

use std::fmt::Write as _;

use aztec::lattice::{height_function, DimerKind, Tiling, Vertex};

/// Pixels per Kasteleyn unit.
const SCALE: i64 = 12;

pub fn fill(kind: DimerKind) -> &'static str {
    match kind {
        DimerKind::North => "red",
        DimerKind::South => "green",
        DimerKind::East => "yellow",
        DimerKind::West => "blue",
    }
}

/// Lower-left corner of the unit square of a vertex, on the square grid
/// `X = (x1 + x2) / 2`, `Y = (x2 - x1) / 2 + n`.
fn square_corner(v: Vertex, n: i64) -> (i64, i64) {
    ((v.x1 + v.x2 - 1) / 2, (v.x2 - v.x1 - 1) / 2 + n)
}

/// Renders `t`; with `heights`, every face carries its height as a label.
///
/// Heights need a valid tiling; the caller checks that first.
pub fn render_svg(t: &Tiling, heights: bool) -> String {
    let n = t.n() as i64;
    let side = 2 * n + 2;
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{w}" viewBox="-1 -1 {side} {side}">"#,
        w = side * SCALE
    )
    .unwrap();
    writeln!(s, r#"<g transform="matrix(1 0 0 -1 0 {})">"#, 2 * n).unwrap();
    writeln!(
        s,
        r#"<g transform="matrix(1 1 -1 1 {n} {})" stroke="black" stroke-width="0.04">"#,
        -n
    )
    .unwrap();
    for d in t.dimers() {
        let (bx, by) = square_corner(d.black, n);
        let (wx, wy) = square_corner(d.white, n);
        writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            bx.min(wx),
            by.min(wy),
            1 + (bx - wx).abs(),
            1 + (by - wy).abs(),
            fill(d.kind)
        )
        .unwrap();
    }
    writeln!(s, "</g>\n</g>").unwrap();
    if heights {
        writeln!(
            s,
            r#"<g font-family="sans-serif" font-size="0.45" text-anchor="middle" dominant-baseline="central">"#
        )
        .unwrap();
        for (f, h) in height_function(t).heights {
            writeln!(s, r#"<text x="{}" y="{}">{h}</text>"#, f.x1, 2 * n - f.x2).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    s
}
