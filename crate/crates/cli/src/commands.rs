use serde_json::{json, Value};
use tspn::geom::{qi, Cut, Point, Polygon, Segment, Window, Q};
use tspn::grid::transform_grid_guillotine;
use tspn::guillotine::{
    check_guillotine, transform_to_guillotine, verify_ledger, BaseCase, CandidateSet, CheckOptions, CheckOutcome, EdgeSet,
    GuillotineCertificate, RegionGoodVariant, TransformOptions,
};
use tspn::instance::{
    generate_counterexample, generate_random, grid_round_instance, grid_round_tour, regions_bbox, GridSpec, Instance, Region, Scene,
};
use tspn::solvers::{
    brute_force_oracle, centers_additive_bound, centers_heuristic, certify, dp_solve, Certificate, OracleOptions, Tour,
};

use crate::args::{Candidates, CertifyArgs, CheckArgs, GenArgs, GenKind, GridArgs, Method, RenderArgs, SolveArgs, TransformArgs, Variant};
use crate::io::{self, usage, Failure};

/// What a command hands back to `main`.
pub struct Output {
    pub result: Value,
    pub scene: Option<Scene>,
    /// Extra files for the output directory.
    pub files: Vec<(String, String)>,
}

impl Output {
    fn json(result: Value) -> Self {
        Output { result, scene: None, files: Vec::new() }
    }
}

/// Lengths are reported with 12 significant digits.
fn sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialise")
}

fn oracle_tour(inst: &Instance, threads: usize) -> Result<(Tour, f64), Failure> {
    let r = brute_force_oracle(inst, &OracleOptions { threads, ..Default::default() }).map_err(Failure::rejected)?;
    Ok((r.tour, r.gap))
}

/// Polygons for the guillotine engine: given polygons, or Γ-hulls for disks.
fn regions_for(inst: &Instance, grid: &GridSpec) -> Result<Vec<Polygon>, Failure> {
    if inst.regions.iter().all(|r| matches!(r, Region::Polygon(_))) {
        return Ok(inst.regions.iter().filter_map(|r| if let Region::Polygon(p) = r { Some(p.clone()) } else { None }).collect());
    }
    Ok(grid_round_instance(inst, grid).map_err(Failure::rejected)?.gamma_hulls)
}

/// Grid and window around `segments` and the regions of `inst`.
fn frame(g: &GridArgs, segments: &[Segment], inst: Option<&Instance>) -> Result<(GridSpec, Window), Failure> {
    let spacing = io::rational("spacing", &g.spacing)?;
    if spacing <= qi(0) {
        return Err(usage("--spacing must be positive"));
    }
    let mut pts: Vec<Point> = segments.iter().flat_map(|s| [s.a.clone(), s.b.clone()]).collect();
    if let Some(b) = inst.and_then(regions_bbox) {
        pts.push(Point::new(b.xmin.clone(), b.ymin.clone()));
        pts.push(Point::new(b.xmax.clone(), b.ymax.clone()));
    }
    let content = Window::bounding(pts.iter()).ok_or_else(|| usage("nothing to frame: no edges and no regions"))?;
    let origin = match &g.origin {
        Some(s) => io::point("origin", s)?,
        None => Point::new(content.xmin.floor(), content.ymin.floor()),
    };
    let probe = GridSpec::new(origin.clone(), spacing.clone(), (1, 1));
    let window = match &g.window {
        Some(s) => io::window("window", s)?,
        None => Window::new(
            probe.floor(&(&content.xmin - &spacing), true),
            probe.ceil(&(&content.xmax + &spacing), true),
            probe.floor(&(&content.ymin - &spacing), false),
            probe.ceil(&(&content.ymax + &spacing), false),
        )
        .map_err(usage)?,
    };
    let cells = |lo: &Q, hi: &Q| -> u64 {
        let n = ((hi - lo) / &spacing).ceil().to_integer();
        n.try_into().unwrap_or(u64::MAX)
    };
    let extent = (cells(&origin.x, &window.xmax).max(1), cells(&origin.y, &window.ymax).max(1));
    Ok((GridSpec::new(origin, spacing, extent), window))
}

fn certificate_cuts(c: &GuillotineCertificate, out: &mut Vec<Cut>) {
    if let GuillotineCertificate::Cut { report, low, high, .. } = c {
        out.push(report.cut.clone());
        certificate_cuts(low, out);
        certificate_cuts(high, out);
    }
}

fn scene(inst: Option<&Instance>, edges: Vec<Segment>, grid: Option<GridSpec>, cert: Option<&GuillotineCertificate>) -> Scene {
    let mut s = inst.map(Scene::from_instance).unwrap_or_default();
    s.edges = edges;
    s.grid = grid;
    if let Some(c) = cert {
        certificate_cuts(c, &mut s.cuts);
    }
    s
}

pub fn solve(a: &SolveArgs, threads: usize) -> Result<Output, Failure> {
    let inst = io::instance(&a.instance)?;
    let (result, tour_segments) = match a.method {
        Method::Oracle => {
            let polygon_spacing = io::rational("polygon-spacing", &a.polygon_spacing)?;
            let opts = OracleOptions { disk_samples: a.samples, polygon_spacing, threads };
            let r = brute_force_oracle(&inst, &opts).map_err(Failure::rejected)?;
            let v = json!({
                "method": "oracle",
                "length": sig(r.tour.length),
                "gap": sig(r.gap),
                "lower_bound": sig((r.tour.length - r.gap).max(0.0)),
                "orders_total": r.orders_total,
                "orders_refined": r.orders_refined,
                "tour": value(&r.tour),
            });
            (v, r.tour.segments())
        }
        Method::Centers => {
            let t = centers_heuristic(&inst, &inst.epsilon);
            let v = json!({
                "method": "centers",
                "length": sig(t.length),
                "additive_bound": sig(centers_additive_bound(inst.k(), &inst.epsilon)),
                "tour": value(&t),
            });
            (v, t.segments())
        }
        Method::Dp => {
            let spacing = io::rational("spacing", &a.spacing)?;
            if spacing <= qi(0) {
                return Err(usage("--spacing must be positive"));
            }
            let b = regions_bbox(&inst).ok_or_else(|| Failure::rejected("instance has no regions"))?;
            let origin = Point::new(b.xmin.floor() - qi(1), b.ymin.floor() - qi(1));
            let cells = |w: Q| -> u64 { ((w + qi(3)) / &spacing).ceil().to_integer().try_into().unwrap_or(u64::MAX) };
            let extent = (cells(b.width()), cells(b.height()));
            let grid = GridSpec::new(origin, spacing, extent);
            let rounded = grid_round_instance(&inst, &grid).map_err(Failure::rejected)?;
            let r = dp_solve(&rounded, a.m, a.big_m, threads).map_err(Failure::rejected)?;
            let v = json!({
                "method": "dp",
                "length": sig(r.length),
                "grid": value(&grid),
                "points": r.points,
                "states": r.states.to_string(),
                "tour": value(&r.tour),
                "certificate": value(&r.certificate),
            });
            (v, r.edges.plain())
        }
    };
    Ok(Output { result, scene: Some(scene(Some(&inst), tour_segments, None, None)), files: Vec::new() })
}

/// Tour from `--tour`, or the oracle tour.
fn input_tour(a: &TransformArgs, inst: &Instance, threads: usize) -> Result<(Tour, &'static str), Failure> {
    match &a.tour {
        Some(p) => {
            let e = io::edges(p)?;
            let (points, order) = e.points.ok_or_else(|| usage("--tour needs a {\"points\"} file"))?;
            if order.iter().any(|&r| r >= inst.k()) {
                return Err(usage("tour order names a region outside the instance"));
            }
            Ok((Tour::from_points(order, points), "file"))
        }
        None => Ok((oracle_tour(inst, threads)?.0, "oracle")),
    }
}

pub fn transform(a: &TransformArgs, threads: usize) -> Result<Output, Failure> {
    let inst = io::instance(&a.instance)?;
    let (tour, source) = input_tour(a, &inst, threads)?;
    let (grid, window) = frame(&a.grid_args, &tour.segments(), Some(&inst))?;
    if a.grid {
        let rounded = grid_round_instance(&inst, &grid).map_err(Failure::rejected)?;
        let rt = grid_round_tour(&tour, &rounded);
        let before = EdgeSet::from_segments(rt.segments());
        let out = transform_grid_guillotine(&before, &rounded.gamma_hulls, &grid, a.m, a.big_m, &window).map_err(Failure::rejected)?;
        let result = json!({
            "mode": "grid",
            "tour_source": source,
            "grid": value(&grid),
            "window": value(&window),
            "rounded_tour": value(&rt),
            "input_length": sig(out.report.input_length),
            "output_length": sig(out.report.output_length),
            "report": value(&out.report),
            "edges": value(&out.edges.plain()),
            "certificate": value(&out.certificate),
            "ledger": value(&out.ledger),
        });
        let sc = scene(Some(&inst), out.edges.plain(), Some(grid), Some(&out.certificate));
        return Ok(Output { result, scene: Some(sc), files: Vec::new() });
    }
    let regions = regions_for(&inst, &grid)?;
    let before = EdgeSet::from_segments(tour.segments());
    let opts = TransformOptions { paper_regime: a.paper_regime, check_each_step: true };
    let out = transform_to_guillotine(&before, &regions, a.m, a.big_m, &window, &grid, &opts).map_err(Failure::rejected)?;
    let ledger = verify_ledger(&out.ledger, &before, &out.edges, a.m, a.big_m);
    let result = json!({
        "mode": "plain",
        "tour_source": source,
        "grid": value(&grid),
        "window": value(&window),
        "tour": value(&tour),
        "input_length": sig(out.report.input_length),
        "output_length": sig(out.report.output_length),
        "report": value(&out.report),
        "edges": value(&out.edges.plain()),
        "certificate": value(&out.certificate),
        "ledger": value(&out.ledger),
        "ledger_check": value(&ledger),
    });
    let sc = scene(Some(&inst), out.edges.plain(), Some(grid), Some(&out.certificate));
    if !ledger.passed() {
        return Err(Failure::Rejected { message: "charging ledger does not cover the inserted length".into(), result: Some(result) });
    }
    Ok(Output { result, scene: Some(sc), files: Vec::new() })
}

pub fn check(a: &CheckArgs) -> Result<Output, Failure> {
    let inst = a.instance.as_deref().map(io::instance).transpose()?;
    let edges = io::edges(&a.edges)?.segments;
    let (grid, window) = frame(&a.grid_args, &edges, inst.as_ref())?;
    let regions = match &inst {
        Some(i) => regions_for(i, &grid)?,
        None => Vec::new(),
    };
    let opts = CheckOptions {
        variant: match a.variant {
            Variant::SpanInE => RegionGoodVariant::SpanInE,
            Variant::BothSides => RegionGoodVariant::BothSidesObligation,
        },
        candidates: match a.candidates {
            Candidates::HalfGrid => CandidateSet::HalfGrid,
            Candidates::GridOnly => CandidateSet::GridOnly,
        },
        base_case: BaseCase::Modified,
    };
    let outcome = check_guillotine(&edges, &regions, &window, &grid, a.m, a.big_m, &opts).map_err(Failure::rejected)?;
    match outcome {
        CheckOutcome::Certified { certificate } => {
            let result = json!({
                "certified": true,
                "grid": value(&grid),
                "window": value(&window),
                "certificate": value(&certificate),
            });
            let sc = scene(inst.as_ref(), edges, Some(grid), Some(&certificate));
            Ok(Output { result, scene: Some(sc), files: Vec::new() })
        }
        CheckOutcome::Refused { witness } => {
            let result = json!({ "certified": false, "grid": value(&grid), "window": value(&window), "witness": value(&witness) });
            Err(Failure::Rejected { message: "no certified cut in the witness window".into(), result: Some(result) })
        }
    }
}

fn certificate_summary(c: &Certificate) -> Value {
    match c {
        Certificate::Localization { ratio, .. } => json!({ "margin": sig(ratio - 1.0) }),
        Certificate::DisconnectedRegionSpan { distance, .. } => json!({ "distance": sig(*distance) }),
    }
}

pub fn certify_claim(a: &CertifyArgs) -> Result<Output, Failure> {
    let name = a.claim.name();
    let (cert, shipped) = match &a.instance {
        Some(p) => (certify(name, &io::instance(p)?).map_err(Failure::rejected)?, false),
        None => (generate_counterexample(name).map_err(Failure::rejected)?.certificate, true),
    };
    let result = json!({
        "claim": name,
        "shipped_instance": shipped,
        "summary": certificate_summary(&cert),
        "certificate": value(&cert),
    });
    Ok(Output::json(result))
}

pub fn render(a: &RenderArgs) -> Result<Output, Failure> {
    let inst = io::instance(&a.instance)?;
    let edges = a.edges.as_deref().map(io::edges).transpose()?.map(|e| e.segments).unwrap_or_default();
    let grid = match &a.grid_spacing {
        Some(s) => {
            let spacing = io::rational("grid-spacing", s)?;
            if spacing <= qi(0) {
                return Err(usage("--grid-spacing must be positive"));
            }
            Some(GridSpec::new(Point::new(qi(0), qi(0)), spacing, (1, 1)))
        }
        None => None,
    };
    let sc = scene(Some(&inst), edges, grid, None);
    let svg = tspn::instance::render_svg_string(&sc);
    let mut out = Output::json(json!({ "regions": inst.k(), "edges": sc.edges.len(), "svg_bytes": svg.len() }));
    match &a.output {
        Some(p) => std::fs::write(p, &svg).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => out.files.push(("render.svg".into(), svg)),
    }
    Ok(out)
}

pub fn gen(a: &GenArgs) -> Result<Output, Failure> {
    let instance_value = |inst: &Instance| -> Value { serde_json::from_str(&inst.to_json()).expect("instance JSON") };
    match &a.kind {
        GenKind::Random { k, seed, side } => {
            let inst = generate_random(*k, *seed, *side).map_err(Failure::rejected)?;
            let mut out = Output::json(json!({ "instance": instance_value(&inst) }));
            out.files.push(("instance.json".into(), inst.to_json() + "\n"));
            out.scene = Some(Scene::from_instance(&inst));
            Ok(out)
        }
        GenKind::Counterexample { claim } => {
            let c = generate_counterexample(claim.name()).map_err(Failure::rejected)?;
            let mut out = Output::json(json!({
                "name": c.name,
                "instance": instance_value(&c.instance),
                "summary": certificate_summary(&c.certificate),
                "certificate": value(&c.certificate),
            }));
            out.files.push(("instance.json".into(), c.instance_json.clone() + "\n"));
            out.scene = Some(Scene::from_instance(&c.instance));
            Ok(out)
        }
    }
}
