//! Deterministic SVG rendering of instances, edge sets, cuts and spans.

use std::fmt::Write as _;
use std::path::Path;

use super::{GridSpec, Instance, Region};
use crate::geom::{qi, to_f64, Cut, Point, Polygon, Segment, Window};

/// Everything one picture can show; empty fields draw nothing.
#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub regions: Vec<Region>,
    /// Γ-hulls or other polygons drawn in the region layer.
    pub hulls: Vec<Polygon>,
    pub grid: Option<GridSpec>,
    pub edges: Vec<Segment>,
    pub cuts: Vec<Cut>,
    pub spans: Vec<Segment>,
    pub dark: Vec<Segment>,
    /// Frame; defaults to the padded bounding box of the content.
    pub window: Option<Window>,
}

impl Scene {
    pub fn from_instance(inst: &Instance) -> Self {
        Scene { regions: inst.regions.clone(), ..Default::default() }
    }
}

/// Grids with more lines than this per axis are drawn as the frame only.
const MAX_GRID_LINES: u64 = 400;

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn xy(p: &Point) -> (String, String) {
    let (x, y) = p.to_f64();
    (num(x), num(-y))
}

fn frame(scene: &Scene) -> Window {
    if let Some(w) = &scene.window {
        return w.clone();
    }
    let mut pts: Vec<Point> = Vec::new();
    for r in &scene.regions {
        match r {
            Region::Disk(c) => {
                pts.push(Point::new(&c.x - qi(1), &c.y - qi(1)));
                pts.push(Point::new(&c.x + qi(1), &c.y + qi(1)));
            }
            Region::Polygon(p) => pts.extend(p.vertices().iter().cloned()),
        }
    }
    for h in &scene.hulls {
        pts.extend(h.vertices().iter().cloned());
    }
    for s in scene.edges.iter().chain(&scene.spans).chain(&scene.dark) {
        pts.push(s.a.clone());
        pts.push(s.b.clone());
    }
    match Window::bounding(pts.iter()) {
        Some(b) => Window::new(&b.xmin - qi(1), &b.xmax + qi(1), &b.ymin - qi(1), &b.ymax + qi(1)).expect("padded box"),
        None => Window::new(qi(0), qi(1), qi(0), qi(1)).expect("unit box"),
    }
}

fn polygon(out: &mut String, p: &Polygon) {
    let pts: Vec<String> = p.vertices().iter().map(|v| {
        let (x, y) = xy(v);
        format!("{x},{y}")
    }).collect();
    let _ = writeln!(out, r#"    <polygon points="{}"/>"#, pts.join(" "));
}

fn line(out: &mut String, s: &Segment, tag: &str) {
    let (x1, y1) = xy(&s.a);
    let (x2, y2) = xy(&s.b);
    let _ = writeln!(out, r#"    <{tag} points="{x1},{y1} {x2},{y2}"/>"#);
}

/// SVG text for `scene`; identical scenes give identical bytes.
pub fn render_svg_string(scene: &Scene) -> String {
    let w = frame(scene);
    let (x0, x1) = (to_f64(&w.xmin), to_f64(&w.xmax));
    let (y0, y1) = (to_f64(&w.ymin), to_f64(&w.ymax));
    let (vw, vh) = (x1 - x0, y1 - y0);
    let stroke = num((vw.max(vh) / 400.0).max(1e-6));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" stroke-width="{stroke}">"#,
        num(x0),
        num(-y1),
        num(vw),
        num(vh)
    );
    let _ = writeln!(
        out,
        r#"  <rect id="frame" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        num(x0),
        num(-y1),
        num(vw),
        num(vh)
    );

    out.push_str("  <g id=\"regions\" fill=\"#cfe3f7\" stroke=\"#2a6ebb\">\n");
    for r in &scene.regions {
        match r {
            Region::Disk(c) => {
                let (cx, cy) = xy(c);
                let _ = writeln!(out, r#"    <circle cx="{cx}" cy="{cy}" r="1"/>"#);
            }
            Region::Polygon(p) => polygon(&mut out, p),
        }
    }
    for h in &scene.hulls {
        polygon(&mut out, h);
    }
    out.push_str("  </g>\n");

    out.push_str("  <g id=\"grid\" stroke=\"#dddddd\">\n");
    if let Some(g) = &scene.grid {
        let step = to_f64(&g.spacing);
        let nx = ((vw / step).floor() as u64).saturating_add(1);
        let ny = ((vh / step).floor() as u64).saturating_add(1);
        if nx <= MAX_GRID_LINES && ny <= MAX_GRID_LINES {
            let mut x = g.ceil(&w.xmin, true);
            while x <= w.xmax {
                let _ = writeln!(out, r#"    <line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, num(to_f64(&x)), num(-y1), num(-y0));
                x += &g.spacing;
            }
            let mut y = g.ceil(&w.ymin, false);
            while y <= w.ymax {
                let _ = writeln!(out, r#"    <line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#, num(-to_f64(&y)), num(x0), num(x1));
                y += &g.spacing;
            }
        }
    }
    out.push_str("  </g>\n");

    out.push_str("  <g id=\"edges\" fill=\"none\" stroke=\"black\">\n");
    for s in &scene.edges {
        line(&mut out, s, "polyline");
    }
    out.push_str("  </g>\n");

    out.push_str("  <g id=\"cuts\" stroke=\"#888888\" stroke-dasharray=\"0.1 0.1\">\n");
    for c in &scene.cuts {
        let (lo, hi) = c.window.along_range(c.orientation);
        line(&mut out, &c.segment(lo, hi), "polyline");
    }
    out.push_str("  </g>\n");

    out.push_str("  <g id=\"spans\" fill=\"none\" stroke=\"#d62728\">\n");
    for s in &scene.spans {
        line(&mut out, s, "polyline");
    }
    out.push_str("  </g>\n");

    out.push_str("  <g id=\"dark\" fill=\"none\" stroke=\"#555555\" stroke-opacity=\"0.5\">\n");
    for s in &scene.dark {
        line(&mut out, s, "polyline");
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

pub fn render_svg(scene: &Scene, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, render_svg_string(scene))
}
