use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tspn::geom::{closed_polyline, parse_q, Point, Segment, Window, Q};
use tspn::instance::{load_instance, Instance};

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input; exit 1.
    Usage(String),
    /// A check, certification or validation did not pass; exit 2.
    Rejected { message: String, result: Option<serde_json::Value> },
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Rejected { .. } => 2,
        }
    }

    pub fn rejected(message: impl fmt::Display) -> Self {
        Failure::Rejected { message: message.to_string(), result: None }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Rejected { message, .. } => write!(f, "rejected: {message}"),
        }
    }
}

pub fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn rational(name: &str, s: &str) -> Result<Q, Failure> {
    parse_q(s.trim()).map_err(|e| usage(format!("--{name} {s:?}: {e}")))
}

fn rationals(name: &str, s: &str, n: usize) -> Result<Vec<Q>, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(usage(format!("--{name} needs {n} comma-separated rationals, got {s:?}")));
    }
    parts.iter().map(|p| rational(name, p)).collect()
}

pub fn point(name: &str, s: &str) -> Result<Point, Failure> {
    let v = rationals(name, s, 2)?;
    Ok(Point::new(v[0].clone(), v[1].clone()))
}

pub fn window(name: &str, s: &str) -> Result<Window, Failure> {
    let v = rationals(name, s, 4)?;
    Window::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()).map_err(usage)
}

/// Instance files that parse but are invalid (e.g. overlapping regions) are rejections.
pub fn instance(path: &Path) -> Result<Instance, Failure> {
    load_instance(path).map_err(|e| match e {
        tspn::instance::InstanceError::Io(io) => usage(format!("{}: {io}", path.display())),
        tspn::instance::InstanceError::Parse { .. } => usage(format!("{}: {e}", path.display())),
        other => Failure::rejected(format!("{}: {other}", path.display())),
    })
}

/// Edge or tour file: explicit segments, or a closed polyline through points
/// with an optional region order.
#[derive(Deserialize)]
#[serde(untagged)]
enum EdgeFile {
    Segments { segments: Vec<Segment> },
    Points { points: Vec<Point>, order: Option<Vec<usize>> },
}

pub struct Edges {
    pub segments: Vec<Segment>,
    /// Present when the file gave a closed polyline.
    pub points: Option<(Vec<Point>, Vec<usize>)>,
}

pub fn edges(path: &Path) -> Result<Edges, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let file: EdgeFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: expected {{\"segments\"}} or {{\"points\"}}: {e}", path.display())))?;
    Ok(match file {
        EdgeFile::Segments { segments } => Edges { segments, points: None },
        EdgeFile::Points { points, order } => {
            let order = order.unwrap_or_else(|| (0..points.len()).collect());
            if order.len() != points.len() {
                return Err(usage(format!("{}: order and points differ in length", path.display())));
            }
            Edges { segments: closed_polyline(&points), points: Some((points, order)) }
        }
    })
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    config: &'a C,
    result: &'a R,
}

/// Pretty JSON of `{config, result}` with a trailing newline.
pub fn envelope<C: Serialize, R: Serialize>(config: &C, result: &R) -> String {
    serde_json::to_string_pretty(&Envelope { config, result }).expect("results serialise") + "\n"
}

pub fn write_file(dir: &Path, name: &str, body: &str) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(path)
}
