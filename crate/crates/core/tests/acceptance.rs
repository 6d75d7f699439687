//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). Criteria that the implementation
//! cannot meet are reported as FAIL without aborting the run, so the exit code
//! only reflects crashes. Pass criterion numbers as arguments to run a subset,
//! e.g. `cargo test --test acceptance -- 4 6`.

use std::cmp::Ordering;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tspn::geom::{closed_polyline, compare_lengths, pt, q, qi, seg, to_f64, window, Cut, Orientation, Point, Polygon, Segment, Window, Q};
use tspn::grid::{
    grid_check_options, make_m_good, make_region_good, patch_span, transform_grid_guillotine, RepairKind, GOOD_OFFSET, REGION_OFFSET,
};
use tspn::guillotine::{
    check_guillotine, region_good, transform_to_guillotine, verify_ledger, CheckOptions, EdgeSet, RegionGoodVariant, TransformError,
    TransformOptions, RATIO_K, REGION_SPAN_OFFSET,
};
use tspn::instance::{generate_counterexample, generate_random, grid_round_instance, grid_round_tour, GridSpec, Instance, RoundedInstance};
use tspn::solvers::{
    brute_force_oracle, centers_additive_bound, centers_heuristic, certified_le, dp_solve, lower_bound, Certificate, OracleOptions,
    OracleResult,
};
use tspn::span::{candidate_cuts, classify_cut, dark_portions, is_m_good, m_span, region_dark_portions, region_span, total_length};

/// Outcome of one criterion.
struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

const THREADS: usize = 4;

fn oracle(inst: &Instance) -> OracleResult {
    brute_force_oracle(inst, &OracleOptions { threads: THREADS, ..Default::default() }).expect("k <= 8 is within oracle range")
}

/// Seeded unit-disk corpus shared by criteria 1 and 9: k cycles through 2..=8.
fn corpus() -> Vec<Instance> {
    (0..200u64).map(|i| generate_random(2 + (i % 7) as usize, 1000 + i, 20).expect("sparse enough to sample")).collect()
}

// 1. Lower-bound law.
fn lower_bound_law(corpus: &[(Instance, OracleResult)]) -> Verdict {
    let mut worst = f64::INFINITY;
    let mut bad = 0;
    for (inst, r) in corpus {
        let lb = lower_bound(inst.k(), 4.0, 2.0);
        let certified = r.tour.length - r.gap;
        if certified < lb {
            bad += 1;
        }
        worst = worst.min(certified - lb);
    }
    verdict(bad == 0, format!("{} instances, {bad} below (k/4-1)*pi/2, min margin {worst:.4}", corpus.len()))
}

// 9. Heuristic bracket.
fn heuristic_bracket(corpus: &[(Instance, OracleResult)]) -> Verdict {
    let mut bad = Vec::new();
    let mut max_excess = 0f64;
    for (i, (inst, r)) in corpus.iter().enumerate() {
        let c = centers_heuristic(inst, &inst.epsilon).length;
        let upper = r.tour.length + centers_additive_bound(inst.k(), &inst.epsilon) + r.gap;
        if !(r.tour.length <= c && c <= upper) {
            bad.push(i);
        }
        max_excess = max_excess.max(c - r.tour.length);
    }
    verdict(bad.is_empty(), format!("{} instances, violations {bad:?}, max centres excess {max_excess:.4}", corpus.len()))
}

// 8. Counterexample certificates.
fn counterexamples() -> Verdict {
    let json = |name: &str| serde_json::to_string(&generate_counterexample(name).expect("shipped instance certifies")).unwrap();
    let loc = generate_counterexample("localization").expect("localization certifies");
    let span = generate_counterexample("disconnected_region_span").expect("region span certifies");
    let ratio = match &loc.certificate {
        Certificate::Localization { ratio, .. } => *ratio,
        _ => unreachable!("claim kind"),
    };
    let distance = match &span.certificate {
        Certificate::DisconnectedRegionSpan { distance, .. } => *distance,
        _ => unreachable!("claim kind"),
    };
    let stable = json("localization") == json("localization") && json("disconnected_region_span") == json("disconnected_region_span");
    verdict(ratio >= 1.05 && distance >= 2.0 && stable, format!("ratio {ratio:.4} (>= 1.05), distance {distance:.4} (>= 2), deterministic {stable}"))
}

/// Demo grid of spacing 1/4 around an instance, its Γ-hulls and a window
/// holding them with one unit of margin.
fn demo_rounding(inst: &Instance) -> (RoundedInstance, Window) {
    let bbox = tspn::instance::regions_bbox(inst).expect("nonempty");
    let origin = Point::new(bbox.xmin.floor() - qi(1), bbox.ymin.floor() - qi(1));
    let cells = |w: Q| ((w + qi(3)) * qi(4)).ceil().to_integer().try_into().unwrap();
    let grid = GridSpec::new(origin.clone(), q(1, 4), (cells(bbox.width()), cells(bbox.height())));
    let rounded = grid_round_instance(inst, &grid).expect("spacing 1/4 resolves unit disks");
    let w = Window::new(origin.x.clone(), bbox.xmax.ceil() + qi(1), origin.y.clone(), bbox.ymax.ceil() + qi(1)).unwrap();
    (rounded, w)
}

/// Centres tour through the snapped (grid) centres, which lie in their disks.
fn snapped_centres_tour(inst: &Instance, rounded: &RoundedInstance) -> EdgeSet {
    let t = centers_heuristic(inst, &inst.epsilon);
    let pts: Vec<Point> = t.order.iter().map(|&i| rounded.centers[i].clone()).collect();
    EdgeSet::from_segments(closed_polyline(&pts))
}

// 2. Perfect-cut existence.
fn perfect_cut_existence() -> Verdict {
    let (m, big_m) = (32, 24);
    let mut windows = 0;
    let mut failures = Vec::new();
    for i in 0..100u64 {
        let k = 2 + (i % 9) as usize;
        let inst = generate_random(k, 2000 + i, 16).unwrap();
        let (rounded, w) = demo_rounding(&inst);
        let tour = snapped_centres_tour(&inst, &rounded);
        match transform_to_guillotine(&tour, &rounded.gamma_hulls, m, big_m, &w, &rounded.grid, &TransformOptions::default()) {
            Ok(out) => windows += 2 * out.report.cuts + 1,
            Err(TransformError::Span(e)) => failures.push(format!("seed {}: {e}", 2000 + i)),
            Err(e) => failures.push(format!("seed {} (other): {e}", 2000 + i)),
        }
    }
    verdict(failures.is_empty(), format!("100 instances, {windows} windows visited, failures {failures:?}"))
}

// 3. Connected-guillotine transform.
fn connected_transform() -> Verdict {
    let (m, big_m) = (32, 24);
    let opts = TransformOptions { paper_regime: true, check_each_step: true };
    let mut bad = Vec::new();
    let mut max_ratio = 0f64;
    for i in 0..50u64 {
        let seed = 3000 + i;
        let inst = generate_random(20, seed, 22).unwrap();
        let (rounded, w) = demo_rounding(&inst);
        let regions = &rounded.gamma_hulls;
        let tour = snapped_centres_tour(&inst, &rounded);
        let out = match transform_to_guillotine(&tour, regions, m, big_m, &w, &rounded.grid, &opts) {
            Ok(o) => o,
            Err(e) => {
                bad.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let certified = check_guillotine(&out.edges.plain(), regions, &w, &rounded.grid, m, big_m + REGION_SPAN_OFFSET, &CheckOptions::default())
            .map(|c| c.certificate().is_some())
            .unwrap_or(false);
        let bound = (64.0 / m as f64 + RATIO_K as f64 / big_m as f64) * out.report.input_length;
        let ledger = verify_ledger(&out.ledger, &tour, &out.edges, m, big_m);
        max_ratio = max_ratio.max(out.report.added_length / out.report.input_length);
        if !(certified && out.edges.is_connected() && out.edges.is_eulerian() && out.report.added_length <= bound && ledger.passed()) {
            bad.push(format!("seed {seed}: certified {certified}, ledger {:?}", ledger.violations));
        }
    }
    verdict(bad.is_empty(), format!("50 instances k = 20, K = {RATIO_K}, max added/input {max_ratio:.4}, failures {bad:?}"))
}

fn rectangle(x: i64, y: i64, w: i64, h: i64) -> Polygon {
    Polygon::new(vec![pt(x, y), pt(x + w, y), pt(x + w, y + h), pt(x, y + h)]).unwrap()
}

/// Random rectilinear closed grid polyline and disjoint grid rectangles in
/// `[0, n]^2`. Every span and dark length is then constant on the open grid
/// cells, so midpoint sums over half-grid cuts are exact integrals.
fn rectilinear_scene(rng: &mut ChaCha8Rng, n: i64) -> (Vec<Segment>, Vec<Polygon>) {
    let pts: Vec<(i64, i64)> = (0..rng.gen_range(3..9)).map(|_| (rng.gen_range(1..n), rng.gen_range(1..n))).collect();
    let mut edges = Vec::new();
    for i in 0..pts.len() {
        let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
        for s in [seg(a, (b.0, a.1)), seg((b.0, a.1), b)] {
            if s.a != s.b {
                edges.push(s);
            }
        }
    }
    let mut regions: Vec<Polygon> = Vec::new();
    for _ in 0..rng.gen_range(0..7) {
        let r = rectangle(rng.gen_range(1..n - 2), rng.gen_range(1..n - 2), rng.gen_range(1..3), rng.gen_range(1..3));
        if regions.iter().all(|o| !o.intersects(&r)) {
            regions.push(r);
        }
    }
    (edges, regions)
}

fn half_grid(n: i64) -> impl Iterator<Item = Q> {
    (0..n).map(|i| q(2 * i + 1, 2))
}

fn seg_len(s: Option<Segment>) -> Q {
    s.map(|s| total_length(&[s])).unwrap_or_else(Q::zero)
}

// 4. Duality identity.
fn duality_identity() -> Verdict {
    let n = 12;
    let w = window(0, n, 0, n);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    let mut nonzero = 0;
    for scene in 0..50 {
        let (edges, regions) = rectilinear_scene(&mut rng, n);
        let (m, big_m) = (rng.gen_range(1..4), rng.gen_range(1..4));
        for o in [Orientation::Vertical, Orientation::Horizontal] {
            let (mut spans, mut dark, mut rspans, mut rdark) = (Q::zero(), Q::zero(), Q::zero(), Q::zero());
            for v in half_grid(n) {
                let cut = Cut::new(o, v.clone(), w.clone()).unwrap();
                let dual = Cut::new(o.other(), v, w.clone()).unwrap();
                spans += seg_len(m_span(&cut, &edges, m));
                rspans += seg_len(region_span(&cut, &regions, big_m));
                dark += total_length(&dark_portions(&dual, &edges, m));
                rdark += total_length(&region_dark_portions(&dual, &regions, big_m));
            }
            if !spans.is_zero() || !rspans.is_zero() {
                nonzero += 1;
            }
            if spans != dark || rspans != rdark {
                bad.push(format!("scene {scene} {o:?}: spans {spans} vs dark {dark}, region {rspans} vs {rdark}"));
            }
        }
    }
    verdict(bad.is_empty(), format!("50 scenes x 2 directions, {nonzero} with nonzero spans, mismatches {bad:?}"))
}

/// `n` parallel edges of direction `(n + 1, 1)` starting on `y = y0`; their
/// crossings with any cut `x = c`, `|c| <= 1`, sit inside one grid cell.
fn packed(n: i64, y0: i64) -> EdgeSet {
    EdgeSet::from_segments((1..=n).map(|j| seg((-j, y0), (n + 1 - j, y0 + 1))))
}

// 5. Grid patching.
fn grid_patching() -> Verdict {
    let g = GridSpec::new(pt(-40, -10), qi(1), (80, 20));
    let w = window(-40, 40, -10, 10);
    let mut bad = Vec::new();
    let mut patched = 0;
    // (cut coordinate, crossing counts that must be patched, counts that must not)
    let families = [(qi(0), 16..=25, 2..=14), (q(1, 2), 19..=28, 2..=18)];
    for (c, above, below) in families {
        let cut = Cut::vertical(c.clone(), w.clone()).unwrap();
        for (i, n) in above.enumerate() {
            let e = packed(n, i as i64 % 5 - 2);
            let span = m_span(&cut, &e.plain(), 1).expect("n crossings");
            let narrow = span.len_sq() < qi(1);
            let (out, rep) = patch_span(&e, &cut, &g, 1).unwrap();
            let shorter = compare_lengths(&out.plain(), &e.plain()) == Some(Ordering::Less);
            if narrow && shorter && rep.kinds == vec![RepairKind::Patch] {
                patched += 1;
            } else {
                bad.push(format!("x = {c}, n = {n}: narrow {narrow}, shorter {shorter}, kinds {:?}", rep.kinds));
            }
        }
        for n in below {
            let e = packed(n, 0);
            let (out, rep) = patch_span(&e, &cut, &g, 1).unwrap();
            if !rep.is_noop() || out != e {
                bad.push(format!("x = {c}, n = {n}: below threshold but {:?}", rep.kinds));
            }
        }
    }
    verdict(bad.is_empty() && patched == 20, format!("{patched}/20 scenes patched strictly shorter, failures {bad:?}"))
}

/// Closed zigzag between `x = left` and `x = right` climbing from `y = 0`,
/// closed by a vertical return edge on the left.
fn zigzag(rng: &mut ChaCha8Rng, left: i64, right: i64, turns: usize) -> Vec<Segment> {
    let mut pts = vec![(left, 0)];
    let mut y = 0;
    for i in 0..turns {
        y += rng.gen_range(1..3);
        let x = if i % 2 == 0 { right - rng.gen_range(0..2) } else { left + rng.gen_range(0..2) };
        pts.push((x, y));
    }
    pts.push((left, y + 1));
    let pts: Vec<Point> = pts.into_iter().map(|(x, y)| pt(x, y)).collect();
    closed_polyline(&pts)
}

/// A column of unit squares straddling `x = 1/2`, enclosed by a rectangular
/// tour with doubled spurs; each square is reached from one side only.
fn straddled_column(rng: &mut ChaCha8Rng, count: i64) -> (Vec<Segment>, Vec<Polygon>) {
    let (left, right) = (-rng.gen_range(2..5), 1 + rng.gen_range(2..5));
    let top = 2 * count;
    let mut edges = closed_polyline(&[pt(left, -1), pt(right, -1), pt(right, top), pt(left, top)]);
    let mut regions = Vec::new();
    for i in 0..count {
        regions.push(rectangle(0, 2 * i, 1, 1));
        let spur = if rng.gen_bool(0.5) { seg((left, 2 * i), (0, 2 * i)) } else { seg((right, 2 * i), (1, 2 * i)) };
        edges.push(spur.clone());
        edges.push(spur);
    }
    (edges, regions)
}

/// First perfect half-grid cut with a nonempty region-span, else the first
/// with a nonempty m-span.
fn chosen_cut(w: &Window, g: &GridSpec, edges: &[Segment], regions: &[Polygon], m: usize, big_m: usize) -> Option<(Cut, tspn::span::SpanReport)> {
    let mut with_span = None;
    for cut in candidate_cuts(w, g) {
        let on_grid = match cut.orientation {
            Orientation::Vertical => g.is_grid_x(&cut.coord),
            Orientation::Horizontal => g.is_grid_y(&cut.coord),
        };
        if on_grid {
            continue;
        }
        let (report, class) = classify_cut(&cut, edges, regions, m, big_m);
        if !class.perfect {
            continue;
        }
        if region_span(&cut, regions, big_m + REGION_OFFSET).is_some() {
            return Some((cut, report));
        }
        if with_span.is_none() && report.span_segment.is_some() {
            with_span = Some((cut, report));
        }
    }
    with_span
}

/// Region repairs add at most this multiple of the M-region-span length.
const REGION_REPAIR_C: i64 = 3;

fn resident(e: &EdgeSet, g: &GridSpec) -> bool {
    e.endpoints().iter().all(|p| g.is_grid_point(p))
}

// 6. Grid repairs on perfect half-grid cuts.
fn grid_repairs() -> Verdict {
    let g = GridSpec::new(pt(-12, -4), qi(1), (24, 90));
    let w = window(-12, 12, -4, 86);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut cuts, mut h_shapes, mut region_repairs, mut attempts) = (0, 0, 0, 0);
    let mut bad = Vec::new();
    while cuts < 50 && attempts < 500 {
        attempts += 1;
        let (edges, regions, m, big_m) = if attempts % 2 == 0 {
            let (left, right, turns) = (-rng.gen_range(3..10), rng.gen_range(3..10), rng.gen_range(6..30));
            (zigzag(&mut rng, left, right, turns), Vec::new(), rng.gen_range(1..4), 1)
        } else {
            let big_m = rng.gen_range(1..4);
            let count = 24 + big_m as i64 + rng.gen_range(1..8);
            let (e, r) = straddled_column(&mut rng, count);
            (e, r, rng.gen_range(1..3), big_m)
        };
        let Some((cut, report)) = chosen_cut(&w, &g, &edges, &regions, m, big_m) else { continue };
        cuts += 1;
        let tag = format!("attempt {attempts} {:?} {}", cut.orientation, cut.coord);
        let before = EdgeSet::from_segments(edges);
        let (e1, r1) = match make_m_good(&before, &cut, &g, m) {
            Ok(x) => x,
            Err(e) => {
                bad.push(format!("{tag}: m-good repair {e}"));
                continue;
            }
        };
        let (e2, r2) = match make_region_good(&e1, &regions, &cut, &g, big_m, REGION_OFFSET) {
            Ok(x) => x,
            Err(e) => {
                bad.push(format!("{tag}: region repair {e}"));
                continue;
            }
        };
        let out = e2.plain();
        let pg = e2.planarize();
        let mut problems = Vec::new();
        if !is_m_good(&cut, &out, m + GOOD_OFFSET) {
            problems.push("not (m+9)-good");
        }
        if !region_good(&cut, &out, &regions, big_m + REGION_OFFSET, RegionGoodVariant::BothSidesObligation) {
            problems.push("not (M+24)-region-good");
        }
        if !resident(&e2, &g) {
            problems.push("off-grid endpoint");
        }
        if !pg.is_connected() || !pg.odd_vertices().is_empty() {
            problems.push("not connected Eulerian");
        }
        if r1.kinds.contains(&RepairKind::HShape) {
            h_shapes += 1;
            if r1.structure_length > qi(5) * &g.spacing + qi(2) * &report.sigma_m {
                problems.push("H above 5δ + 2σ_m");
            }
        }
        if !r2.is_noop() {
            region_repairs += 1;
            if r2.added_length > to_f64(&(qi(REGION_REPAIR_C) * &report.sigma_big)) + 1e-9 {
                problems.push("region repair above c·Σ_M");
            }
        }
        if !problems.is_empty() {
            bad.push(format!("{tag}: {problems:?}"));
        }
    }
    let pass = cuts == 50 && bad.is_empty();
    verdict(pass, format!("{cuts} cuts ({h_shapes} H-shapes, {region_repairs} region repairs, c = {REGION_REPAIR_C}), failures {bad:?}"))
}

// 7. DP dominance and feasibility.
fn dp_dominance() -> Verdict {
    let (m, big_m) = (5, 24);
    let mut bad = Vec::new();
    let mut runs = 0;
    let mut slack = Vec::new();
    for k in 1..=4usize {
        for s in 0..3u64 {
            let seed = 7000 + 10 * k as u64 + s;
            let inst = generate_random(k, seed, 10).unwrap();
            let (rounded, w) = demo_rounding(&inst);
            let hulls = &rounded.gamma_hulls;
            runs += 1;
            let dp = match dp_solve(&rounded, m, big_m, THREADS) {
                Ok(d) => d,
                Err(e) => {
                    bad.push(format!("seed {seed}: {e}"));
                    continue;
                }
            };
            let graph = dp.edges.plain();
            let certified = check_guillotine(&graph, hulls, &w, &rounded.grid, m + 1, big_m + 24, &grid_check_options())
                .map(|c| c.certificate().is_some())
                .unwrap_or(false);
            let visits = hulls.iter().all(|h| graph.iter().any(|s| h.meets_segment(s)));
            let rt = grid_round_tour(&oracle(&inst).tour, &rounded);
            let dominated = match transform_grid_guillotine(&EdgeSet::from_segments(rt.segments()), hulls, &rounded.grid, m, big_m, &w) {
                Ok(tr) => {
                    slack.push(tr.edges.length() - dp.length);
                    certified_le(&graph, &tr.edges.plain())
                }
                Err(e) => {
                    bad.push(format!("seed {seed}: transform {e}"));
                    continue;
                }
            };
            let extracted = certified_le(&dp.tour.segments(), &graph);
            if !(certified && visits && dominated && extracted) {
                bad.push(format!("seed {seed}: certified {certified}, visits {visits}, dominated {dominated}, extracted {extracted}"));
            }
        }
    }
    let min_slack = slack.iter().cloned().fold(f64::INFINITY, f64::min);
    verdict(bad.is_empty(), format!("{runs} runs k = 1..4 at spacing 1/4, min transform - dp {min_slack:.4}, failures {bad:?}"))
}

fn main() {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let run = |i: usize| wanted.is_empty() || wanted.contains(&i);
    let started = Instant::now();
    let mut results: Vec<(usize, &str, Verdict, f64)> = Vec::new();
    let mut record = |i: usize, name: &'static str, f: &mut dyn FnMut() -> Verdict| {
        if run(i) {
            let t = Instant::now();
            let v = f();
            let secs = t.elapsed().as_secs_f64();
            println!("{} C{i} {name} ({secs:.1}s): {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
            results.push((i, name, v, secs));
        }
    };
    let mut solved: Option<Vec<(Instance, OracleResult)>> = None;
    let mut corpus_results = || solved.get_or_insert_with(|| corpus().into_iter().map(|i| { let r = oracle(&i); (i, r) }).collect()).clone();
    record(1, "lower-bound law", &mut || lower_bound_law(&corpus_results()));
    record(2, "perfect-cut existence", &mut perfect_cut_existence);
    record(3, "connected guillotine transform", &mut connected_transform);
    record(4, "duality identity", &mut duality_identity);
    record(5, "grid patching", &mut grid_patching);
    record(6, "grid repairs", &mut grid_repairs);
    record(7, "dp dominance", &mut dp_dominance);
    record(8, "counterexample certificates", &mut counterexamples);
    record(9, "heuristic bracket", &mut || heuristic_bracket(&corpus_results()));
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("{passed}/{} criteria passed in {:.1}s", results.len(), started.elapsed().as_secs_f64());
}
