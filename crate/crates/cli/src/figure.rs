//! Schematic SVG rendering of one flat: the simple-root coordinate plane
//! with the hexagonal frame of singular directions, the special points,
//! and the cell boundaries from the sector descriptions. The picture is an
//! affine diagram of the marking, not a metrically faithful embedding of
//! the building.

use a2flats_core::modelflat::FlatVector;
use a2flats_core::triples::{FlatId, Rel, TripleContext};
use num::{BigRational, ToPrimitive};

const CELL_COLORS: [&str; 4] = ["#c0392b", "#2980b9", "#27ae60", "#8e44ad"];

fn rat_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Screen position of a flat vector: each coordinate axis drawn at 120
/// degree spacing (e1 up, e2 lower left, e3 lower right), y axis flipped
/// for SVG.
fn screen(v: &FlatVector, scale: f64, cx: f64, cy: f64) -> (f64, f64) {
    let c = v.coords();
    let dirs = [(0.0f64, -1.0f64), (-0.866, 0.5), (0.866, 0.5)];
    let mut x = 0.0;
    let mut y = 0.0;
    for i in 0..3 {
        let ci = rat_f64(&c[i]);
        x += ci * dirs[i].0;
        y += ci * dirs[i].1;
    }
    (cx + scale * x, cy + scale * y)
}

fn src_screen(a1: f64, a2: f64, scale: f64, cx: f64, cy: f64) -> (f64, f64) {
    // from_src as floats: v = ((2a+b)/3, (b-a)/3, (-a-2b)/3).
    let v1 = (2.0 * a1 + a2) / 3.0;
    let v2 = (a2 - a1) / 3.0;
    let v3 = (-a1 - 2.0 * a2) / 3.0;
    let dirs = [(0.0f64, -1.0f64), (-0.866, 0.5), (0.866, 0.5)];
    let x = v1 * dirs[0].0 + v2 * dirs[1].0 + v3 * dirs[2].0;
    let y = v1 * dirs[0].1 + v2 * dirs[1].1 + v3 * dirs[2].1;
    (cx + scale * x, cy + scale * y)
}

struct Canvas {
    body: String,
    scale: f64,
    cx: f64,
    cy: f64,
}

impl Canvas {
    fn line(&mut self, a: (f64, f64), b: (f64, f64), color: &str, width: f64, dashed: bool) {
        let dash = if dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        self.body.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{}\" stroke-width=\"{:.1}\"{} />\n",
            a.0, a.1, b.0, b.1, color, width, dash
        ));
    }

    fn dot(&mut self, p: (f64, f64), color: &str) {
        self.body.push_str(&format!(
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"{}\" />\n",
            p.0, p.1, color
        ));
    }

    fn text(&mut self, p: (f64, f64), s: &str, color: &str) {
        self.body.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" font-family=\"monospace\" fill=\"{}\">{}</text>\n",
            p.0, p.1, color, s
        ));
    }
}

/// Render one flat of the context into an SVG string.
pub fn render_flat(ctx: &TripleContext, id: FlatId) -> a2flats_core::Result<String> {
    let cells = ctx.sector_descriptions(id)?;
    // Anchor coordinates in simple roots, for view fitting and labels.
    let mut anchors: Vec<(String, FlatVector)> = Vec::new();
    match id {
        FlatId::A12 | FlatId::A23 | FlatId::A31 => {
            let i = match id {
                FlatId::A12 => 0,
                FlatId::A23 => 1,
                _ => 2,
            };
            let k = (i + 2) % 3;
            anchors.push((format!("y{}", k + 1), ctx.coords_in(&ctx.y[k], id)?));
            anchors.push((format!("y{}*", k + 1), ctx.coords_in(&ctx.y_star[k], id)?));
        }
        FlatId::Ap => {
            for k in 0..3 {
                anchors.push((format!("y{}", k + 1), ctx.coords_in(&ctx.y[k], id)?));
            }
        }
        FlatId::AD => {
            for k in 0..3 {
                anchors.push((format!("y{}*", k + 1), ctx.coords_in(&ctx.y_star[k], id)?));
            }
        }
    }
    let mut a1s: Vec<f64> = Vec::new();
    let mut a2s: Vec<f64> = Vec::new();
    for (_, v) in &anchors {
        let (a, b) = v.simple_root_coords();
        a1s.push(rat_f64(&a));
        a2s.push(rat_f64(&b));
    }
    let margin = 2.5;
    let lo1 = a1s.iter().cloned().fold(f64::INFINITY, f64::min) - margin;
    let hi1 = a1s.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + margin;
    let lo2 = a2s.iter().cloned().fold(f64::INFINITY, f64::min) - margin;
    let hi2 = a2s.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + margin;
    let size = 560.0;
    let span = (hi1 - lo1).max(hi2 - lo2).max(1.0);
    let scale = (size - 120.0) / (1.8 * span);
    let mid1 = (lo1 + hi1) / 2.0;
    let mid2 = (lo2 + hi2) / 2.0;
    let center = src_screen(mid1, mid2, scale, 0.0, 0.0);
    let mut canvas = Canvas {
        body: String::new(),
        scale,
        cx: size / 2.0 - center.0,
        cy: size / 2.0 - center.1,
    };

    // Hexagonal star of singular directions through the first anchor.
    if let Some((_, v0)) = anchors.first() {
        let p0 = screen(v0, canvas.scale, canvas.cx, canvas.cy);
        for k in 0..6 {
            let ang = std::f64::consts::PI / 3.0 * k as f64 - std::f64::consts::PI / 2.0;
            let q = (p0.0 + 220.0 * ang.cos(), p0.1 + 220.0 * ang.sin());
            canvas.line(p0, q, "#dddddd", 1.0, false);
        }
    }

    // Cell boundary lines: each root inequality contributes the line
    // alpha_root = threshold, drawn across the view.
    let clip = span * 1.4;
    for (ci, cell) in cells.iter().enumerate() {
        let color = CELL_COLORS[ci % CELL_COLORS.len()];
        if cell.empty {
            continue;
        }
        for q in &cell.ineqs {
            let c = rat_f64(&q.threshold);
            let (p, r) = boundary_segment(q.root, c, mid1, mid2, clip);
            let a = src_screen(p.0, p.1, canvas.scale, canvas.cx, canvas.cy);
            let b = src_screen(r.0, r.1, canvas.scale, canvas.cx, canvas.cy);
            canvas.line(a, b, color, 1.4, matches!(q.rel, Rel::Le));
        }
    }

    // Anchor dots and labels.
    for (label, v) in &anchors {
        let p = screen(v, canvas.scale, canvas.cx, canvas.cy);
        canvas.dot(p, "#111111");
        canvas.text((p.0 + 7.0, p.1 - 7.0), label, "#111111");
    }

    // Legend.
    let mut legend_y = 22.0;
    canvas.text((12.0, legend_y), &format!("flat {}", id.label()), "#111111");
    for (ci, cell) in cells.iter().enumerate() {
        legend_y += 18.0;
        let color = CELL_COLORS[ci % CELL_COLORS.len()];
        let suffix = if cell.empty { " (empty)" } else { "" };
        canvas.text((12.0, legend_y), &format!("{}{}", cell.label, suffix), color);
    }

    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n{}</svg>\n",
        canvas.body,
        s = 560
    ))
}

/// Two src-coordinate endpoints of the line `alpha_root = c` spanning the
/// view around (mid1, mid2).
fn boundary_segment(
    root: usize,
    c: f64,
    mid1: f64,
    mid2: f64,
    clip: f64,
) -> ((f64, f64), (f64, f64)) {
    match root {
        0 => ((c, mid2 - clip), (c, mid2 + clip)),
        1 => ((mid1 - clip, c), (mid1 + clip, c)),
        _ => {
            // alpha3 = -a1 - a2 = c.
            let s0 = mid1 - clip;
            let s1 = mid1 + clip;
            ((s0, -c - s0), (s1, -c - s1))
        }
    }
}

