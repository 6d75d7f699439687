//! Edge multisets with provenance, planarization, connectivity and parity.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::geom::{intersect_segments, Point, Segment, SegmentIntersection, Window, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Original,
    MSpan,
    RegionSpan,
    Connector,
    ParityDuplicate,
    /// Grid repairs: H shapes, patch boxes and snapped replacement pieces.
    Repair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedSegment {
    pub segment: Segment,
    pub provenance: Provenance,
    /// Cut that inserted the segment, if any.
    pub cut_id: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EdgeSet {
    pub segments: Vec<TaggedSegment>,
}

impl EdgeSet {
    pub fn from_segments(segs: impl IntoIterator<Item = Segment>) -> Self {
        EdgeSet {
            segments: segs
                .into_iter()
                .map(|segment| TaggedSegment { segment, provenance: Provenance::Original, cut_id: None })
                .collect(),
        }
    }

    pub fn push(&mut self, segment: Segment, provenance: Provenance, cut_id: Option<usize>) {
        self.segments.push(TaggedSegment { segment, provenance, cut_id });
    }

    pub fn plain(&self) -> Vec<Segment> {
        self.segments.iter().map(|t| t.segment.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|t| t.segment.length()).sum()
    }

    /// Exact total length when every segment is axis-parallel.
    pub fn exact_length(&self) -> Option<Q> {
        exact_length(&self.plain())
    }

    pub fn endpoints(&self) -> BTreeSet<Point> {
        let mut out = BTreeSet::new();
        for t in &self.segments {
            out.insert(t.segment.a.clone());
            out.insert(t.segment.b.clone());
        }
        out
    }

    pub fn planarize(&self) -> PlanarGraph {
        planarize(&self.plain())
    }

    pub fn is_connected(&self) -> bool {
        self.planarize().is_connected()
    }

    pub fn is_eulerian(&self) -> bool {
        self.planarize().odd_vertices().is_empty()
    }
}

/// Sum of lengths of axis-parallel segments; `None` if any is diagonal.
pub fn exact_length(segs: &[Segment]) -> Option<Q> {
    let mut total = Q::zero();
    for s in segs {
        if !s.is_axis_parallel() {
            return None;
        }
        total += (&s.a.x - &s.b.x).abs() + (&s.a.y - &s.b.y).abs();
    }
    Some(total)
}

/// Multigraph obtained by subdividing segments at all mutual intersections.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PlanarGraph {
    pub vertices: Vec<Point>,
    /// Pairs of vertex indices; parallel edges are kept, loops never arise.
    pub edges: Vec<(usize, usize)>,
}

impl PlanarGraph {
    pub fn degree(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn odd_vertices(&self) -> Vec<Point> {
        self.degree().iter().enumerate().filter(|(_, &d)| d % 2 == 1).map(|(i, _)| self.vertices[i].clone()).collect()
    }

    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        (0..self.vertices.len()).filter(|&i| uf.find(i) == i).count()
    }

    /// An empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Parameter of a point known to lie on `s`.
fn param_on(s: &Segment, p: &Point) -> Q {
    let dx = &s.b.x - &s.a.x;
    if !dx.is_zero() {
        (&p.x - &s.a.x) / dx
    } else {
        (&p.y - &s.a.y) / (&s.b.y - &s.a.y)
    }
}

pub fn planarize(segs: &[Segment]) -> PlanarGraph {
    // split parameters per segment
    let mut cuts: Vec<Vec<Q>> = segs.iter().map(|_| vec![Q::zero(), Q::from_integer(1.into())]).collect();
    let boxes: Vec<Window> = segs.iter().map(|s| Window::bounding([&s.a, &s.b]).expect("two points")).collect();
    for i in 0..segs.len() {
        if segs[i].is_degenerate() {
            continue;
        }
        for j in 0..segs.len() {
            if i == j || !boxes_meet(&boxes[i], &boxes[j]) {
                continue;
            }
            match intersect_segments(&segs[i], &segs[j]) {
                SegmentIntersection::None => {}
                SegmentIntersection::Point(p) => cuts[i].push(param_on(&segs[i], &p)),
                SegmentIntersection::Overlap(p, q) => {
                    cuts[i].push(param_on(&segs[i], &p));
                    cuts[i].push(param_on(&segs[i], &q));
                }
            }
        }
    }
    let mut index: BTreeMap<Point, usize> = BTreeMap::new();
    let mut g = PlanarGraph::default();
    let mut vid = |p: Point, g: &mut PlanarGraph| -> usize {
        *index.entry(p.clone()).or_insert_with(|| {
            g.vertices.push(p);
            g.vertices.len() - 1
        })
    };
    for (i, s) in segs.iter().enumerate() {
        if s.is_degenerate() {
            vid(s.a.clone(), &mut g);
            continue;
        }
        let mut ts = std::mem::take(&mut cuts[i]);
        ts.sort();
        ts.dedup();
        let pts: Vec<Point> = ts.iter().map(|t| s.point_at(t)).collect();
        for w in pts.windows(2) {
            let a = vid(w[0].clone(), &mut g);
            let b = vid(w[1].clone(), &mut g);
            g.edges.push((a, b));
        }
    }
    g
}

fn boxes_meet(a: &Window, b: &Window) -> bool {
    a.xmin <= b.xmax && b.xmin <= a.xmax && a.ymin <= b.ymax && b.ymin <= a.ymax
}
