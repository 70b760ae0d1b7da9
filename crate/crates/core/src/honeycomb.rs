//! Honeycombs: the dual graph drawn in the plane `x + y = z`.
//!
//! Each face of the dual graph becomes the point `(x, y) = (μ, ν)` of its
//! incident capacities, and each dual edge the segment between its two face
//! points, or a boundary ray for stubs. Along a segment one coordinate is
//! constant: `x` for `Mu`, `y` for `Nu` and `z = x + y` for `Lambda`; that
//! constant is the segment's capacity.
//!
//! Flow moves in a fixed direction per class: `Mu` towards decreasing `y`,
//! `Nu` towards increasing `x`, `Lambda` along `(+1, -1)`. Rays point
//! outwards along `(0, 1)`, `(-1, 0)` and `(1, -1)` respectively, so `Mu` and
//! `Nu` rays carry flow in and `Lambda` rays carry it out.
//!
//! Every line is parametrised by `t = y` for `Mu` and `t = x` otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dual::{canonical_flow, Class, Flow, WeightedDualGraph};
use crate::error::{Error, Result};
use crate::filling::LrFilling;
use crate::partition::Partition;

mod paths;
pub use paths::{
    common_points, detect_noncanonical, exchange_tails, meeting_point, matches_canonical, overlay_flow, replay_trace_on_flow, unit_paths, Crossing,
    CrossingKind, OverlayFlow, UnitPath,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct HoneyPoint {
    pub x: i64,
    pub y: i64,
}

impl HoneyPoint {
    pub fn new(x: i64, y: i64) -> Self {
        HoneyPoint { x, y }
    }

    pub fn z(&self) -> i64 {
        self.x + self.y
    }
}

impl From<[i64; 2]> for HoneyPoint {
    fn from([x, y]: [i64; 2]) -> Self {
        HoneyPoint { x, y }
    }
}

impl From<HoneyPoint> for [i64; 2] {
    fn from(p: HoneyPoint) -> Self {
        [p.x, p.y]
    }
}

/// The constant coordinate of `class` at `p`.
pub fn constant(class: Class, p: HoneyPoint) -> i64 {
    match class {
        Class::Mu => p.x,
        Class::Nu => p.y,
        Class::Lambda => p.z(),
    }
}

/// The parameter of `p` along a line of `class`.
pub fn param(class: Class, p: HoneyPoint) -> i64 {
    match class {
        Class::Mu => p.y,
        Class::Nu | Class::Lambda => p.x,
    }
}

/// The point at parameter `t` on the line `(class, c)`.
pub fn point_at(class: Class, c: i64, t: i64) -> HoneyPoint {
    match class {
        Class::Mu => HoneyPoint::new(c, t),
        Class::Nu => HoneyPoint::new(t, c),
        Class::Lambda => HoneyPoint::new(t, c - t),
    }
}

/// Whether a ray of `class` runs towards `t = +∞` (else `-∞`).
fn ray_goes_up(class: Class) -> bool {
    !matches!(class, Class::Nu)
}

/// Whether flow along `class` runs towards increasing `t`.
fn flow_goes_up(class: Class) -> bool {
    !matches!(class, Class::Mu)
}

/// A segment from `a` to `b`, or a ray from `a` when `b` is absent. For
/// segments built from a dual graph, `a` to `b` is the direction of flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SegmentJson", into = "SegmentJson")]
pub struct Segment {
    pub a: HoneyPoint,
    pub b: Option<HoneyPoint>,
    pub class: Class,
    pub mult: u64,
}

#[derive(Serialize, Deserialize)]
struct SegmentJson {
    a: HoneyPoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<HoneyPoint>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    ray: bool,
    class: Class,
    mult: u64,
}

impl TryFrom<SegmentJson> for Segment {
    type Error = Error;

    fn try_from(s: SegmentJson) -> Result<Self> {
        if s.ray == s.b.is_some() {
            return Err(Error::Shape("a segment needs exactly one of `b` and `ray`".into()));
        }
        let seg = Segment { a: s.a, b: s.b, class: s.class, mult: s.mult };
        if let Some(b) = seg.b {
            if constant(seg.class, seg.a) != constant(seg.class, b) {
                return Err(Error::Shape(format!("{:?} segment from {:?} to {:?} is not on one line", seg.class, s.a, b)));
            }
        }
        Ok(seg)
    }
}

impl From<Segment> for SegmentJson {
    fn from(s: Segment) -> Self {
        SegmentJson { a: s.a, b: s.b, ray: s.b.is_none(), class: s.class, mult: s.mult }
    }
}

impl Segment {
    pub fn capacity(&self) -> i64 {
        constant(self.class, self.a)
    }

    pub fn is_ray(&self) -> bool {
        self.b.is_none()
    }

    /// Parameter range `(lo, hi)`; `None` for the open end of a ray.
    pub fn range(&self) -> (Option<i64>, Option<i64>) {
        let ta = param(self.class, self.a);
        match self.b {
            Some(b) => {
                let tb = param(self.class, b);
                (Some(ta.min(tb)), Some(ta.max(tb)))
            }
            None if ray_goes_up(self.class) => (Some(ta), None),
            None => (None, Some(ta)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Honeycomb {
    pub vertices: Vec<HoneyPoint>,
    pub segments: Vec<Segment>,
}

impl Honeycomb {
    pub fn empty() -> Self {
        Honeycomb::default()
    }

    pub fn from_graph(g: &WeightedDualGraph) -> Self {
        let point = |node: crate::dual::Node| match node {
            crate::dual::Node::Face(f) => {
                let (m, n, _) = g.face_coordinates(f);
                Some(HoneyPoint::new(m as i64, n as i64))
            }
            crate::dual::Node::Boundary => None,
        };
        let vertices = g.faces().into_iter().map(|f| point(crate::dual::Node::Face(f)).unwrap()).collect();
        let segments = g
            .edges()
            .iter()
            .map(|e| match (point(e.from), point(e.to)) {
                (Some(a), b) => Segment { a, b, class: e.class, mult: 1 },
                (None, Some(b)) => Segment { a: b, b: None, class: e.class, mult: 1 },
                (None, None) => unreachable!("edge with two boundary ends"),
            })
            .collect();
        Honeycomb { vertices, segments }
    }

    /// Checks that every segment lies on one line of its class.
    pub fn check(&self) -> Result<()> {
        for s in &self.segments {
            if let Some(b) = s.b {
                if constant(s.class, s.a) != constant(s.class, b) {
                    return Err(Error::Shape(format!("{:?} segment {:?}-{:?} leaves its line", s.class, s.a, b)));
                }
            }
        }
        Ok(())
    }

    pub fn rays(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.is_ray())
    }
}

pub fn honeycomb_from_filling(f: &LrFilling) -> Result<Honeycomb> {
    Ok(Honeycomb::from_graph(&WeightedDualGraph::from_filling(f)?))
}

/// Sorted ray capacities per class: `(μ, ν, λ)`.
pub fn honeycomb_type(h: &Honeycomb) -> Result<(Partition, Partition, Partition)> {
    let mut parts: [Vec<u64>; 3] = Default::default();
    for ray in h.rays() {
        let cap = u64::try_from(ray.capacity())
            .map_err(|_| Error::Shape(format!("{:?} ray with negative capacity {}", ray.class, ray.capacity())))?;
        let slot = &mut parts[Class::ALL.iter().position(|&c| c == ray.class).unwrap()];
        slot.extend(std::iter::repeat(cap).take(ray.mult as usize));
    }
    if parts[0].len() != parts[1].len() || parts[1].len() != parts[2].len() {
        return Err(Error::Shape(format!(
            "ray counts {} / {} / {} differ",
            parts[0].len(),
            parts[1].len(),
            parts[2].len()
        )));
    }
    let [mu, nu, lambda] = parts.map(Partition::from_multiset);
    Ok((mu, nu, lambda))
}

/// Superposition: `h1`'s vertices and segments followed by `h2`'s.
pub fn overlay(h1: &Honeycomb, h2: &Honeycomb) -> Honeycomb {
    let mut out = h1.clone();
    out.vertices.extend_from_slice(&h2.vertices);
    out.segments.extend_from_slice(&h2.segments);
    out
}

/// A line of the arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Line {
    pub class: Class,
    pub c: i64,
}

impl Line {
    /// Parameter of this line's crossing with `other`, if they cross.
    fn crossing(&self, other: &Line) -> Option<i64> {
        use Class::*;
        let p = match (self.class, other.class) {
            (Mu, Nu) => HoneyPoint::new(self.c, other.c),
            (Nu, Mu) => HoneyPoint::new(other.c, self.c),
            (Mu, Lambda) => HoneyPoint::new(self.c, other.c - self.c),
            (Lambda, Mu) => HoneyPoint::new(other.c, self.c - other.c),
            (Nu, Lambda) => HoneyPoint::new(other.c - self.c, self.c),
            (Lambda, Nu) => HoneyPoint::new(self.c - other.c, other.c),
            _ => return None,
        };
        Some(param(self.class, p))
    }

    pub fn point(&self, t: i64) -> HoneyPoint {
        point_at(self.class, self.c, t)
    }
}

/// A closed parameter interval on a line; `None` ends are infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    fn contains(&self, t: i64) -> bool {
        self.lo.map_or(true, |lo| lo <= t) && self.hi.map_or(true, |hi| t <= hi)
    }

    fn is_degenerate(&self) -> bool {
        matches!((self.lo, self.hi), (Some(a), Some(b)) if a >= b)
    }
}

/// Breakpoints and the values between them: `values[k]` holds on
/// `(points[k-1], points[k])` with `points[-1] = -∞` and `points[len] = +∞`.
struct Profile<V> {
    points: Vec<i64>,
    values: Vec<V>,
}

/// Sums `(interval, value)` contributions along one line.
fn profile<V: Clone + Default>(items: &[(Interval, V)], add: impl Fn(&mut V, &V)) -> Profile<V> {
    let points: Vec<i64> = items
        .iter()
        .flat_map(|(i, _)| [i.lo, i.hi])
        .flatten()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut values = vec![V::default(); points.len() + 1];
    for (iv, v) in items {
        let start = iv.lo.map_or(0, |lo| points.partition_point(|&p| p <= lo));
        let end = iv.hi.map_or(points.len(), |hi| points.partition_point(|&p| p < hi));
        if start <= end {
            for slot in &mut values[start..=end] {
                add(slot, v);
            }
        }
    }
    Profile { points, values }
}

impl<V: PartialEq + Default + Clone> Profile<V> {
    /// Maximal runs of equal non-default value, cut additionally at `cuts`.
    fn runs(&self, cuts: &BTreeSet<i64>) -> Vec<(Interval, V)> {
        let mut out: Vec<(Interval, V)> = Vec::new();
        let empty = V::default();
        for (k, v) in self.values.iter().enumerate() {
            if *v == empty {
                continue;
            }
            let lo = if k == 0 { None } else { Some(self.points[k - 1]) };
            let hi = self.points.get(k).copied();
            if let Some((last, lv)) = out.last_mut() {
                if lv == v && last.hi.is_some() && last.hi == lo && !cuts.contains(&lo.unwrap()) {
                    last.hi = hi;
                    continue;
                }
            }
            out.push((Interval { lo, hi }, v.clone()));
        }
        out
    }

    fn support(&self) -> Vec<Interval> {
        let none = BTreeSet::new();
        let mut out: Vec<Interval> = Vec::new();
        for (iv, _) in self.runs(&none) {
            match out.last_mut() {
                Some(last) if last.hi.is_some() && last.hi == iv.lo => last.hi = iv.hi,
                _ => out.push(iv),
            }
        }
        out
    }
}

/// The normal form of a honeycomb: positive-length pieces with summed
/// multiplicity, each line cut wherever its multiplicity changes or another
/// line's support meets it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AtomicSegmentSet {
    pub pieces: BTreeMap<(Line, Interval), u64>,
}

impl AtomicSegmentSet {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

fn segments_by_line(h: &Honeycomb) -> BTreeMap<Line, Vec<(Interval, u64)>> {
    let mut by_line: BTreeMap<Line, Vec<(Interval, u64)>> = BTreeMap::new();
    for s in &h.segments {
        let (lo, hi) = s.range();
        let iv = Interval { lo, hi };
        if s.mult == 0 || iv.is_degenerate() {
            continue;
        }
        by_line.entry(Line { class: s.class, c: s.capacity() }).or_default().push((iv, s.mult));
    }
    by_line
}

/// Points where the supports of two lines meet, as cut sets per line.
fn crossing_cuts(supports: &BTreeMap<Line, Vec<Interval>>) -> BTreeMap<Line, BTreeSet<i64>> {
    let mut cuts: BTreeMap<Line, BTreeSet<i64>> = BTreeMap::new();
    let lines: Vec<&Line> = supports.keys().collect();
    for (n, a) in lines.iter().enumerate() {
        for b in &lines[n + 1..] {
            let (Some(ta), Some(tb)) = (a.crossing(b), b.crossing(a)) else { continue };
            if supports[*a].iter().any(|i| i.contains(ta)) && supports[*b].iter().any(|i| i.contains(tb)) {
                cuts.entry(**a).or_default().insert(ta);
                cuts.entry(**b).or_default().insert(tb);
            }
        }
    }
    cuts
}

pub fn atomize(h: &Honeycomb) -> AtomicSegmentSet {
    let profiles: BTreeMap<Line, Profile<u64>> = segments_by_line(h)
        .into_iter()
        .map(|(line, items)| (line, profile(&items, |acc, v| *acc += v)))
        .collect();
    let supports = profiles.iter().map(|(l, p)| (*l, p.support())).collect();
    let cuts = crossing_cuts(&supports);
    let mut out = AtomicSegmentSet::default();
    for (line, prof) in &profiles {
        let line_cuts = cuts.get(line).cloned().unwrap_or_default();
        for (iv, m) in prof.runs(&line_cuts) {
            // runs only merge across non-cut points; split at the remaining cuts
            let inner: Vec<i64> = line_cuts
                .iter()
                .copied()
                .filter(|&t| iv.lo.map_or(true, |lo| lo < t) && iv.hi.map_or(true, |hi| t < hi))
                .collect();
            let mut lo = iv.lo;
            for t in inner {
                out.pieces.insert((*line, Interval { lo, hi: Some(t) }), m);
                lo = Some(t);
            }
            out.pieces.insert((*line, Interval { lo, hi: iv.hi }), m);
        }
    }
    out
}

pub fn honeycombs_equal(h1: &Honeycomb, h2: &Honeycomb) -> bool {
    atomize(h1) == atomize(h2)
}

/// Points where a segment's relative interior crosses the relative
/// interior of a segment of another class.
pub fn transverse_crossings(h: &Honeycomb) -> Vec<(HoneyPoint, usize, usize)> {
    let mut out = Vec::new();
    let open = |s: &Segment, t: i64| {
        let (lo, hi) = s.range();
        lo.map_or(true, |lo| lo < t) && hi.map_or(true, |hi| t < hi)
    };
    for (i, s) in h.segments.iter().enumerate() {
        for (j, u) in h.segments.iter().enumerate().skip(i + 1) {
            let (ls, lu) = (Line { class: s.class, c: s.capacity() }, Line { class: u.class, c: u.capacity() });
            let (Some(ts), Some(tu)) = (ls.crossing(&lu), lu.crossing(&ls)) else { continue };
            if open(s, ts) && open(u, tu) {
                out.push((ls.point(ts), i, j));
            }
        }
    }
    out
}

/// Labelled flow on a honeycomb, stored per line as maximal pieces of
/// constant load. Two flows are equal exactly when they put the same labels
/// on the same points.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HoneyFlow {
    pub pieces: BTreeMap<Line, Vec<(Interval, crate::dual::Loads)>>,
}

impl HoneyFlow {
    /// Builds the normal form from labelled intervals.
    pub fn from_items(items: impl IntoIterator<Item = (Line, Interval, crate::dual::Strand, u64)>) -> Self {
        let mut by_line: BTreeMap<Line, Vec<(Interval, crate::dual::Loads)>> = BTreeMap::new();
        for (line, iv, s, a) in items {
            if a == 0 || iv.is_degenerate() {
                continue;
            }
            by_line.entry(line).or_default().push((iv, crate::dual::Loads::from([(s, a)])));
        }
        let pieces = by_line
            .into_iter()
            .map(|(line, items)| {
                let prof = profile(&items, |acc: &mut crate::dual::Loads, v| {
                    for (s, a) in v {
                        *acc.entry(*s).or_insert(0) += a;
                    }
                });
                (line, prof.runs(&BTreeSet::new()))
            })
            .filter(|(_, runs)| !runs.is_empty())
            .collect();
        HoneyFlow { pieces }
    }

    /// The flow of a segment-indexed [`Flow`] on `h`.
    pub fn from_segments(h: &Honeycomb, fl: &Flow) -> Self {
        let items = h.segments.iter().zip(&fl.loads).flat_map(|(s, loads)| {
            let (lo, hi) = s.range();
            let line = Line { class: s.class, c: s.capacity() };
            loads.iter().map(move |(&st, &a)| (line, Interval { lo, hi }, st, a))
        });
        Self::from_items(items)
    }

    /// Total load on each piece against capacity times multiplicity, and
    /// per-label balance at every finite point.
    pub fn check(&self, h: &Honeycomb) -> HoneyFlowReport {
        let mut report = HoneyFlowReport::default();
        let atoms = atomize(h);
        // capacity: compare total load profile with multiplicity profile
        let mut mult: BTreeMap<Line, Vec<(Interval, u64)>> = BTreeMap::new();
        for ((line, iv), m) in &atoms.pieces {
            mult.entry(*line).or_default().push((*iv, *m * line.c.max(0) as u64));
        }
        let mut totals: BTreeMap<Line, Vec<(Interval, u64)>> = BTreeMap::new();
        for (line, runs) in &self.pieces {
            for (iv, loads) in runs {
                totals.entry(*line).or_default().push((*iv, loads.values().sum()));
            }
        }
        let lines: BTreeSet<Line> = mult.keys().chain(totals.keys()).copied().collect();
        for line in lines {
            let cap = profile(mult.get(&line).map_or(&[][..], Vec::as_slice), |a, v| *a += v);
            let load = profile(totals.get(&line).map_or(&[][..], Vec::as_slice), |a, v| *a += v);
            let mut pts: BTreeSet<i64> = cap.points.iter().chain(&load.points).copied().collect();
            // sample each elementary interval at its midpoint (doubled to stay integral)
            let pts: Vec<i64> = std::mem::take(&mut pts).into_iter().collect();
            let mut samples: Vec<(i64, i64)> = Vec::new(); // doubled parameter, also point for reports
            if pts.is_empty() {
                samples.push((0, 0));
            } else {
                samples.push((2 * pts[0] - 2, pts[0]));
                for w in pts.windows(2) {
                    samples.push((w[0] + w[1], w[0]));
                }
                samples.push((2 * pts[pts.len() - 1] + 2, pts[pts.len() - 1]));
            }
            for (t2, near) in samples {
                let c = value_at(&cap, t2);
                let l = value_at(&load, t2);
                if c != l {
                    report.failures.push(HoneyFlowFailure {
                        kind: if l > c { HoneyFlowCheck::Capacity } else { HoneyFlowCheck::Saturation },
                        at: line.point(near),
                        strand: None,
                    });
                }
            }
        }
        // conservation at points
        let mut balance: BTreeMap<HoneyPoint, BTreeMap<crate::dual::Strand, i128>> = BTreeMap::new();
        for (line, runs) in &self.pieces {
            let up = flow_goes_up(line.class);
            for (iv, loads) in runs {
                let (start, end) = if up { (iv.lo, iv.hi) } else { (iv.hi, iv.lo) };
                for (s, &a) in loads {
                    if let Some(t) = start {
                        *balance.entry(line.point(t)).or_default().entry(*s).or_insert(0) -= a as i128;
                    }
                    if let Some(t) = end {
                        *balance.entry(line.point(t)).or_default().entry(*s).or_insert(0) += a as i128;
                    }
                }
            }
        }
        for (p, per) in balance {
            for (s, b) in per {
                if b != 0 {
                    report.failures.push(HoneyFlowFailure { kind: HoneyFlowCheck::Conservation, at: p, strand: Some(s) });
                }
            }
        }
        report
    }
}

/// Value of a profile at doubled parameter `t2` (never a breakpoint when odd
/// or strictly between breakpoints).
fn value_at(p: &Profile<u64>, t2: i64) -> u64 {
    let k = p.points.partition_point(|&x| 2 * x < t2);
    p.values[k]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum HoneyFlowCheck {
    Capacity,
    Saturation,
    Conservation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoneyFlowFailure {
    pub kind: HoneyFlowCheck,
    pub at: HoneyPoint,
    pub strand: Option<crate::dual::Strand>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HoneyFlowReport {
    pub failures: Vec<HoneyFlowFailure>,
}

impl HoneyFlowReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl std::fmt::Display for HoneyFlowReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (n, x) in self.failures.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{:?} at ({},{})", x.kind, x.at.x, x.at.y)?;
            if let Some(s) = x.strand {
                write!(f, " ({s})")?;
            }
        }
        Ok(())
    }
}

/// The canonical flow of a filling, drawn on its honeycomb.
pub fn canonical_honey_flow(f: &LrFilling) -> Result<(Honeycomb, HoneyFlow)> {
    let (g, fl) = canonical_flow(f)?;
    let h = Honeycomb::from_graph(&g);
    let hf = HoneyFlow::from_segments(&h, &fl);
    Ok((h, hf))
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn strand_colour(s: crate::dual::Strand) -> &'static str {
    match s {
        crate::dual::Strand::Mu(_) => "#444444",
        crate::dual::Strand::Content(c) => PALETTE[(c - 1) % PALETTE.len()],
    }
}

/// Draws `h` (and optionally a flow on its segments) as an SVG 1.1 document.
/// The output depends only on the inputs.
pub fn render_svg(h: &Honeycomb, fl: Option<&Flow>) -> String {
    const UNIT: f64 = 20.0;
    let s3 = 3f64.sqrt() / 2.0;
    let embed = |x: f64, y: f64| (-s3 * y * UNIT, -(x - y / 2.0) * UNIT);
    let coords: Vec<(i64, i64)> = h
        .vertices
        .iter()
        .map(|p| (p.x, p.y))
        .chain(h.segments.iter().flat_map(|s| s.b.iter().chain(Some(&s.a)).map(|p| (p.x, p.y)).collect::<Vec<_>>()))
        .collect();
    let span = coords.iter().map(|&(x, y)| x.abs().max(y.abs())).max().unwrap_or(0) as f64;
    let ray_len = span.max(1.0) * 0.5 + 2.0;
    let mut lines: Vec<((f64, f64), (f64, f64), &Segment, usize)> = Vec::new();
    for (n, s) in h.segments.iter().enumerate() {
        let a = (s.a.x as f64, s.a.y as f64);
        let b = match s.b {
            Some(b) => (b.x as f64, b.y as f64),
            None => match s.class {
                Class::Mu => (a.0, a.1 + ray_len),
                Class::Nu => (a.0 - ray_len, a.1),
                Class::Lambda => (a.0 + ray_len, a.1 - ray_len),
            },
        };
        lines.push((embed(a.0, a.1), embed(b.0, b.1), s, n));
    }
    let pts = lines.iter().flat_map(|(a, b, _, _)| [*a, *b]).chain(h.vertices.iter().map(|p| embed(p.x as f64, p.y as f64)));
    let (mut x0, mut y0, mut x1, mut y1) = (0f64, 0f64, 0f64, 0f64);
    for (x, y) in pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let pad = UNIT;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.2} {:.2} {:.2} {:.2}">"#,
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    );
    let _ = writeln!(out, r#"<g fill="none" stroke-linecap="round">"#);
    for &(a, b, s, n) in &lines {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len = (dx * dx + dy * dy).sqrt();
        let (nx, ny) = if len > 0.0 { (-dy / len, dx / len) } else { (0.0, 0.0) };
        let strokes: Vec<(&str, String)> = match fl.and_then(|f| f.loads.get(n)) {
            Some(loads) if !loads.is_empty() => {
                loads.iter().map(|(st, amt)| (strand_colour(*st), format!("{st}:{amt}"))).collect()
            }
            _ => (0..s.mult.max(1)).map(|_| ("#000000", String::new())).collect(),
        };
        let k = strokes.len() as f64;
        for (m, (colour, title)) in strokes.iter().enumerate() {
            let off = (m as f64 - (k - 1.0) / 2.0) * 2.5;
            let dash = if s.is_ray() { r#" stroke-dasharray="4 3""# } else { "" };
            let _ = write!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="1.5"{dash}>"#,
                a.0 + nx * off,
                a.1 + ny * off,
                b.0 + nx * off,
                b.1 + ny * off
            );
            let _ = writeln!(out, "<title>{:?} {}{}</title></line>", s.class, s.capacity(), if title.is_empty() { String::new() } else { format!(" {title}") });
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g fill="#000000">"##);
    for p in &h.vertices {
        let (x, y) = embed(p.x as f64, p.y as f64);
        let _ = writeln!(out, r#"<circle class="vertex" cx="{x:.2}" cy="{y:.2}" r="2.5"><title>({},{},{})</title></circle>"#, p.x, p.y, p.z());
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
