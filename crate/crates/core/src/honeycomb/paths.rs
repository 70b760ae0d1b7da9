//! The overlay flow split into unit paths, one per box of the summed grid,
//! and the replay of a summation trace as tail exchanges between them.
//!
//! A unit enters on a `Mu` or `Nu` ray, follows segments of the honeycomb
//! and leaves on the `Lambda` ray of the row its box sits in. Its label is
//! the strand it carries. Exchanging the tails of two units at a point both
//! pass through keeps every segment's load total and moves each label to
//! the other unit's exit row, which is what a box swap does to the grid.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{canonical_honey_flow, honeycomb_from_filling, overlay, param, transverse_crossings, HoneyFlow, HoneyPoint, Honeycomb, Interval, Line};
use crate::dual::{canonical_flow, Class, Face, Loads, Node, Strand};
use crate::error::{Error, Result};
use crate::filling::{Cell, LrFilling};
use crate::summation::{initial_grid, normalize_inner, relabel_contents, Pos, StepKind, StepTrace};

/// One unit of flow: in along `entry`, through `points`, out along the
/// `Lambda` line `exit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitPath {
    pub label: Strand,
    pub entry: Line,
    pub points: Vec<HoneyPoint>,
    pub exit: Line,
}

/// Position along any path: paths never move west or north.
fn along(p: HoneyPoint) -> (i64, i64) {
    (p.x, -p.y)
}

fn line_through(a: HoneyPoint, b: HoneyPoint) -> Option<Line> {
    if a.x == b.x {
        Some(Line { class: Class::Mu, c: a.x })
    } else if a.y == b.y {
        Some(Line { class: Class::Nu, c: a.y })
    } else if a.z() == b.z() {
        Some(Line { class: Class::Lambda, c: a.z() })
    } else {
        None
    }
}

impl UnitPath {
    /// The stretches of the path as `(line, parameter interval)`.
    pub fn legs(&self) -> Result<Vec<(Line, Interval)>> {
        let first = self.points[0];
        let last = *self.points.last().expect("paths have a point");
        let start = match self.entry.class {
            Class::Mu => Interval { lo: Some(first.y), hi: None },
            _ => Interval { lo: None, hi: Some(first.x) },
        };
        let mut out = vec![(self.entry, start)];
        for w in self.points.windows(2) {
            if w[0] == w[1] {
                continue;
            }
            let line = line_through(w[0], w[1])
                .ok_or_else(|| Error::Invariant(format!("path jumps from {:?} to {:?}", w[0], w[1])))?;
            let (ta, tb) = (param(line.class, w[0]), param(line.class, w[1]));
            out.push((line, Interval { lo: Some(ta.min(tb)), hi: Some(ta.max(tb)) }));
        }
        out.push((self.exit, Interval { lo: Some(last.x), hi: None }));
        Ok(out)
    }

    /// The part up to `x` followed by the part of `other` after `x`.
    fn spliced(&self, other: &UnitPath, x: HoneyPoint) -> UnitPath {
        let mut points: Vec<HoneyPoint> = self.points.iter().copied().filter(|&p| along(p) < along(x)).collect();
        points.push(x);
        points.extend(other.points.iter().copied().filter(|&p| along(p) > along(x)));
        UnitPath { label: self.label, entry: self.entry, points, exit: other.exit }
    }
}

fn meet(a: (Line, Interval), b: (Line, Interval)) -> Vec<HoneyPoint> {
    let ((la, ia), (lb, ib)) = (a, b);
    if la == lb {
        let lo = match (ia.lo, ib.lo) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        };
        let hi = match (ia.hi, ib.hi) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        if matches!((lo, hi), (Some(l), Some(h)) if l > h) {
            return Vec::new();
        }
        return [lo, hi].into_iter().flatten().map(|t| la.point(t)).collect();
    }
    match (la.crossing(&lb), lb.crossing(&la)) {
        (Some(ta), Some(tb)) if ia.contains(ta) && ib.contains(tb) => vec![la.point(ta)],
        _ => Vec::new(),
    }
}

/// Every point on both paths, in path order.
pub fn common_points(a: &UnitPath, b: &UnitPath) -> Result<Vec<HoneyPoint>> {
    let (la, lb) = (a.legs()?, b.legs()?);
    let mut pts: Vec<HoneyPoint> = la.iter().flat_map(|x| lb.iter().flat_map(move |y| meet(*x, *y))).collect();
    pts.sort_by_key(|&p| along(p));
    pts.dedup();
    Ok(pts)
}

/// The last point both paths pass through.
pub fn meeting_point(a: &UnitPath, b: &UnitPath) -> Result<HoneyPoint> {
    common_points(a, b)?
        .last()
        .copied()
        .ok_or_else(|| Error::TraceMismatch(format!("the {} and {} units never meet", a.label, b.label)))
}

/// Exchanges the tails of `a` and `b` at `x`. The first result carries
/// `a`'s label to `b`'s exit.
pub fn exchange_tails(a: &UnitPath, b: &UnitPath, x: HoneyPoint) -> (UnitPath, UnitPath) {
    (a.spliced(b, x), b.spliced(a, x))
}

/// The lines a path arrives and leaves on at `x`, if it passes `x`.
fn through(u: &UnitPath, x: HoneyPoint) -> Result<Option<(Line, Line)>> {
    let legs = u.legs()?;
    let t = |line: Line| param(line.class, x);
    let on = |(line, iv): &(Line, Interval)| {
        let tx = t(*line);
        (line.class != Class::Lambda || line.c == x.z())
            && (line.class != Class::Mu || line.c == x.x)
            && (line.class != Class::Nu || line.c == x.y)
            && iv.contains(tx)
    };
    let up = |line: &Line| super::flow_goes_up(line.class);
    // arriving: x is not the start of the leg in travel direction
    let arrive = legs.iter().find(|leg| on(leg) && if up(&leg.0) { leg.1.lo != Some(t(leg.0)) } else { leg.1.hi != Some(t(leg.0)) });
    let leave = legs.iter().find(|leg| on(leg) && if up(&leg.0) { leg.1.hi != Some(t(leg.0)) } else { leg.1.lo != Some(t(leg.0)) });
    Ok(arrive.zip(leave).map(|(a, b)| (a.0, b.0)))
}

/// Unit paths of a filling's canonical flow, laid out like its grid. Inner
/// boxes of row `p` carry `Mu(p)`.
pub fn unit_paths(f: &LrFilling) -> Result<Vec<Vec<UnitPath>>> {
    let (g, fl) = canonical_flow(f)?;
    let point = |face: Face| {
        let (m, n, _) = g.face_coordinates(face);
        HoneyPoint::new(m as i64, n as i64)
    };
    let mut cache: BTreeMap<(Strand, usize), UnitPath> = BTreeMap::new();
    let mut path_for = |s: Strand, p: usize| -> Result<UnitPath> {
        if let Some(u) = cache.get(&(s, p)) {
            return Ok(u.clone());
        }
        let goal = g.edge_index(p, p - 1, Class::Lambda);
        let carries = |e: usize| fl.amount(e, s) > 0;
        let starts: Vec<usize> = (0..g.edges().len()).filter(|&e| g.edges()[e].from == Node::Boundary && carries(e)).collect();
        // depth-first over edges carrying `s`
        let mut stack: Vec<Vec<usize>> = starts.into_iter().map(|e| vec![e]).collect();
        let mut found = None;
        while let Some(route) = stack.pop() {
            let last = *route.last().unwrap();
            if last == goal {
                found = Some(route);
                break;
            }
            if let Node::Face(face) = g.edges()[last].to {
                let (_, outs) = g.face_io(face);
                for e in outs.into_iter().filter(|&e| carries(e)) {
                    let mut next = route.clone();
                    next.push(e);
                    stack.push(next);
                }
            }
        }
        let route = found.ok_or_else(|| Error::Invariant(format!("no route for {s} to row {p}")))?;
        let edge = |e: usize| g.edges()[e];
        let mut points: Vec<HoneyPoint> = Vec::new();
        for &e in &route[..route.len() - 1] {
            let Node::Face(face) = edge(e).to else { unreachable!("inner edges end at faces") };
            let pt = point(face);
            if points.last() != Some(&pt) {
                points.push(pt);
            }
        }
        let first = edge(route[0]);
        let unit = UnitPath {
            label: s,
            entry: Line { class: first.class, c: first.capacity as i64 },
            points,
            exit: Line { class: Class::Lambda, c: edge(goal).capacity as i64 },
        };
        cache.insert((s, p), unit.clone());
        Ok(unit)
    };
    let grid = f.to_grid()?;
    grid.rows
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let p = j + 1;
            row.iter()
                .map(|c| match c {
                    Cell::Inner => path_for(Strand::Mu(p), p),
                    Cell::Label(v) => path_for(Strand::Content(*v), p),
                })
                .collect()
        })
        .collect()
}

/// Unit paths on an overlay, laid out like the summed grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlayFlow {
    pub honeycomb: Honeycomb,
    pub units: Vec<Vec<UnitPath>>,
}

impl OverlayFlow {
    pub fn flow(&self) -> Result<HoneyFlow> {
        let mut items = Vec::new();
        for u in self.units.iter().flatten() {
            for (line, iv) in u.legs()? {
                items.push((line, iv, u.label, 1));
            }
        }
        Ok(HoneyFlow::from_items(items))
    }

    fn unit(&self, p: Pos) -> Result<&UnitPath> {
        self.units
            .get(p.row.wrapping_sub(1))
            .and_then(|r| r.get(p.col.wrapping_sub(1)))
            .ok_or_else(|| Error::TraceMismatch(format!("no box at {p}")))
    }
}

/// The overlay of both honeycombs carrying both canonical flows, with
/// content labels merged as the summation merges them. Each `Mu` unit is
/// labelled by the row its box occupies once the inner shape is sorted.
pub fn overlay_flow(f1: &LrFilling, f2: &LrFilling) -> Result<OverlayFlow> {
    let map = relabel_contents(f1, f2);
    let grid = initial_grid(f1, f2, &map)?;
    let mut units: Vec<Vec<UnitPath>> = vec![Vec::new(); map.n()];
    for (f, labels, rows) in [(f1, &map.first, &map.first_rows), (f2, &map.second, &map.second_rows)] {
        for (j, row) in unit_paths(f)?.into_iter().enumerate() {
            units[rows[j] - 1] = row
                .into_iter()
                .map(|mut u| {
                    if let Strand::Content(c) = u.label {
                        u.label = Strand::Content(labels[c - 1]);
                    }
                    u
                })
                .collect();
        }
    }
    // follow the inner boxes through the sorting swaps
    let (sorted, steps) = normalize_inner(&grid);
    let mut at: Vec<Vec<Pos>> =
        grid.rows.iter().enumerate().map(|(r, row)| (1..=row.len()).map(|c| Pos { row: r + 1, col: c }).collect()).collect();
    for step in &steps {
        for (a, b) in step.strand_a.iter().zip(&step.strand_b) {
            let tmp = at[a.row - 1][a.col - 1];
            at[a.row - 1][a.col - 1] = at[b.row - 1][b.col - 1];
            at[b.row - 1][b.col - 1] = tmp;
        }
    }
    for (r, row) in sorted.rows.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            if cell.is_inner() {
                let src = at[r][c];
                units[src.row - 1][src.col - 1].label = Strand::Mu(r + 1);
            }
        }
    }
    let honeycomb = overlay(&honeycomb_from_filling(f1)?, &honeycomb_from_filling(f2)?);
    Ok(OverlayFlow { honeycomb, units })
}

fn sort_key(u: &UnitPath) -> usize {
    match u.label {
        Strand::Mu(_) => 0,
        Strand::Content(c) => c,
    }
}

/// Applies every step of `trace` to the units: the `k`-th boxes of the two
/// strands exchange tails, and rows are re-sorted where the grid re-sorts
/// them.
/// Each pair trades at the last point the two paths share.
pub fn replay_trace_on_flow(of: &OverlayFlow, trace: &StepTrace) -> Result<OverlayFlow> {
    let mut out = of.clone();
    for (n, step) in trace.steps.iter().enumerate() {
        if step.strand_a.len() != step.strand_b.len() {
            return Err(Error::TraceMismatch(format!("step {n}: strands differ in length")));
        }
        if step.kind != StepKind::MuSwitch {
            for (cells, label) in [(&step.strand_a, step.labels[0]), (&step.strand_b, step.labels[1])] {
                for &p in cells {
                    let u = out.unit(p)?;
                    if u.label != Strand::Content(label) {
                        return Err(Error::TraceMismatch(format!("step {n}: box {p} carries {}, not c{label}", u.label)));
                    }
                }
            }
        }
        for (&a, &b) in step.strand_a.iter().zip(&step.strand_b) {
            let (ua, ub) = (out.unit(a)?.clone(), out.unit(b)?.clone());
            let x = meeting_point(&ua, &ub)?;
            let (na, nb) = exchange_tails(&ua, &ub, x);
            let turns = (through(&ua, x)?, through(&ub, x)?);
            out.units[b.row - 1][b.col - 1] = na;
            out.units[a.row - 1][a.col - 1] = nb;
            if let (Some(ta), Some(tb)) = turns {
                if ta.1 == tb.1 {
                    continue;
                }
                complete_crossing(&mut out, x, (ua.label, ta), (ub.label, tb))?;
            }
        }
        if step.sorts_rows() {
            for row in &mut out.units {
                row.sort_by_key(sort_key);
            }
        }
    }
    Ok(out)
}

/// Once one pair has traded tails at `x`, every other pair carrying the
/// same two labels along the same two routes through `x` and leaving on
/// the same ray trades as well. Those trades leave every row's labels alone.
fn complete_crossing(of: &mut OverlayFlow, x: HoneyPoint, a: (Strand, (Line, Line)), b: (Strand, (Line, Line))) -> Result<()> {
    loop {
        let mut found = None;
        'search: for (ra, row_a) in of.units.iter().enumerate() {
            for (ca, ua) in row_a.iter().enumerate() {
                if ua.label != a.0 || through(ua, x)? != Some(a.1) {
                    continue;
                }
                for (rb, row_b) in of.units.iter().enumerate() {
                    for (cb, ub) in row_b.iter().enumerate() {
                        if ub.label == b.0 && ub.exit == ua.exit && through(ub, x)? == Some(b.1) {
                            found = Some(((ra, ca), (rb, cb)));
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some(((ra, ca), (rb, cb))) = found else { return Ok(()) };
        let (na, nb) = exchange_tails(&of.units[ra][ca], &of.units[rb][cb], x);
        of.units[ra][ca] = na;
        of.units[rb][cb] = nb;
    }
}

/// Whether a replayed flow is the canonical flow of `sum` on the same plane.
pub fn matches_canonical(of: &OverlayFlow, sum: &LrFilling) -> Result<bool> {
    let (_, target) = canonical_honey_flow(sum)?;
    Ok(of.flow()? == target)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrossingKind {
    /// A `Nu` line through a `Lambda` line: a label climbing past a row it
    /// should have turned into.
    Type1,
    /// A `Mu` line through a `Lambda` line.
    Type2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub at: HoneyPoint,
    /// Labels arriving at the crossing on either line.
    pub labels: Vec<Strand>,
}

/// Loads arriving at parameter `t` of `line`.
fn incoming(fl: &HoneyFlow, line: Line, t: i64) -> Option<&Loads> {
    let up = super::flow_goes_up(line.class);
    fl.pieces.get(&line)?.iter().find_map(|(iv, loads)| {
        let hit = if up {
            iv.lo.map_or(true, |lo| lo < t) && iv.hi.map_or(true, |hi| t <= hi)
        } else {
            iv.lo.map_or(true, |lo| lo <= t) && iv.hi.map_or(true, |hi| t < hi)
        };
        hit.then_some(loads)
    })
}

fn outgoing(fl: &HoneyFlow, line: Line, t: i64) -> Option<&Loads> {
    let up = super::flow_goes_up(line.class);
    fl.pieces.get(&line)?.iter().find_map(|(iv, loads)| {
        let hit = if up {
            iv.lo.map_or(true, |lo| lo <= t) && iv.hi.map_or(true, |hi| t < hi)
        } else {
            iv.lo.map_or(true, |lo| lo < t) && iv.hi.map_or(true, |hi| t <= hi)
        };
        hit.then_some(loads)
    })
}

/// Transverse crossings of a `Mu` or `Nu` segment with a `Lambda` segment
/// that the flow passes straight through with its labels unchanged, from
/// top to bottom of the drawing and east to west.
pub fn detect_noncanonical(h: &Honeycomb, fl: &HoneyFlow) -> Vec<Crossing> {
    let mut out: Vec<Crossing> = Vec::new();
    for (at, i, j) in transverse_crossings(h) {
        let (s, u) = (&h.segments[i], &h.segments[j]);
        let kind = match (s.class, u.class) {
            (Class::Mu, Class::Lambda) | (Class::Lambda, Class::Mu) => CrossingKind::Type2,
            (Class::Nu, Class::Lambda) | (Class::Lambda, Class::Nu) => CrossingKind::Type1,
            _ => continue,
        };
        let mut labels = Vec::new();
        let mut straight = true;
        for seg in [s, u] {
            let line = Line { class: seg.class, c: seg.capacity() };
            let t = param(line.class, at);
            match (incoming(fl, line, t), outgoing(fl, line, t)) {
                (Some(a), Some(b)) if !a.is_empty() => {
                    straight &= a == b;
                    labels.extend(a.keys().copied());
                }
                _ => straight = false,
            }
        }
        if straight && !out.iter().any(|c| c.at == at && c.kind == kind) {
            labels.sort();
            labels.dedup();
            out.push(Crossing { kind, at, labels });
        }
    }
    out.sort_by_key(|c| (std::cmp::Reverse(2 * c.at.x - c.at.y), c.at.y));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::summation::sum_fillings;

    fn p(v: &[u64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn one_row(mu: u64, nu: u64) -> LrFilling {
        LrFilling::new(p(&[mu]), p(&[nu]), p(&[mu + nu]), vec![vec![nu]]).unwrap()
    }

    fn two_rows() -> LrFilling {
        LrFilling::new(p(&[2, 1]), p(&[2, 1]), p(&[3, 3]), vec![vec![1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn overlay_with_empty_is_canonical() {
        let f = two_rows();
        let of = overlay_flow(&f, &LrFilling::empty()).unwrap();
        assert!(matches_canonical(&of, &f).unwrap());
        let (h, fl) = canonical_honey_flow(&f).unwrap();
        assert!(fl.check(&h).ok());
        assert!(detect_noncanonical(&h, &fl).is_empty());
    }

    #[test]
    fn overlay_flow_is_consistent() {
        let of = overlay_flow(&one_row(1, 3), &two_rows()).unwrap();
        let fl = of.flow().unwrap();
        assert!(fl.check(&of.honeycomb).ok());
        let untouched = replay_trace_on_flow(&of, &StepTrace::default()).unwrap();
        assert_eq!(untouched, of);
    }

    #[test]
    fn inner_switch_shows_one_crossing() {
        // the row with the longer outer part has the shorter inner part
        let f1 = one_row(1, 3);
        let f2 = LrFilling::new(p(&[3]), p(&[0]), p(&[3]), vec![vec![0]]).unwrap();
        let of = overlay_flow(&f1, &f2).unwrap();
        let found = detect_noncanonical(&of.honeycomb, &of.flow().unwrap());
        assert_eq!(found.len(), 1, "{found:?}");
        assert_eq!(found[0].kind, CrossingKind::Type2);
        assert_eq!(found[0].at, HoneyPoint::new(3, 1));
    }

    #[test]
    fn replay_reaches_canonical() {
        let (f1, f2) = (one_row(1, 3), two_rows());
        let (sum, trace) = sum_fillings(&f1, &f2).unwrap();
        assert!(!trace.is_empty());
        let done = replay_trace_on_flow(&overlay_flow(&f1, &f2).unwrap(), &trace).unwrap();
        assert!(matches_canonical(&done, &sum).unwrap());
    }

    #[test]
    fn tails_meet_and_swap() {
        let units = unit_paths(&two_rows()).unwrap();
        let (a, b) = (&units[1][1], &units[1][2]);
        let x = meeting_point(a, b).unwrap();
        let (na, nb) = exchange_tails(a, b, x);
        assert_eq!((na.label, na.exit), (a.label, b.exit));
        assert_eq!((nb.label, nb.exit), (b.label, a.exit));
    }
}
