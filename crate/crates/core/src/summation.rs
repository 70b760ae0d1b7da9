//! Summing two LR fillings into a filling of the direct-sum type.
//!
//! The two grids are relabelled into one label alphabet, stacked row by row
//! in order of decreasing length, their inner boxes pushed to the top of each
//! column, and the resulting grid is repaired by strand swaps until it is an
//! LR filling. Every swap is recorded in a [`StepTrace`] so it can be
//! replayed on the overlay of the two canonical flows.
//!
//! Positions in traces and violations are 1-based `(row, column)`. The
//! reading order `≺` runs along rows from top to bottom and, within a row,
//! from right to left; "weakly north-east of `b`" means `⪯ b`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filling::{Cell, LrFilling, TableauGrid};
use crate::partition::direct_sum;

/// Default multiplier in the step cap `STEP_FACTOR * n * (|λ| + |λ'|)`.
pub const STEP_FACTOR: usize = 16;

/// Where each row and each content label of the two sources ends up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelMap {
    /// `first[c-1]` is the merged label of label `c` of the first filling.
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    /// `first_rows[j-1]` is the merged row (1-based) of row `j` of the first filling.
    pub first_rows: Vec<usize>,
    pub second_rows: Vec<usize>,
}

impl LabelMap {
    pub fn n(&self) -> usize {
        self.first_rows.len() + self.second_rows.len()
    }
}

/// Merged row order: rows of both fillings by decreasing length, rows of
/// equal length keeping the first filling's rows ahead.
fn merge_rows(f1: &LrFilling, f2: &LrFilling) -> (Vec<usize>, Vec<usize>) {
    let (l1, l2) = (f1.lambda(), f2.lambda());
    let (mut a, mut b) = (1, 1);
    let (mut rows1, mut rows2) = (Vec::new(), Vec::new());
    let mut next = 1;
    while a <= f1.r() || b <= f2.r() {
        let take_first = b > f2.r() || (a <= f1.r() && l1.part(a) >= l2.part(b));
        if take_first {
            rows1.push(next);
            a += 1;
        } else {
            rows2.push(next);
            b += 1;
        }
        next += 1;
    }
    (rows1, rows2)
}

/// The lowest source row holding label `c`, as a merged row; labels with
/// no boxes sort last.
fn ending_row(f: &LrFilling, rows: &[usize], c: usize) -> usize {
    (c..=f.r()).rev().find(|&j| f.k(c, j) > 0).map_or(usize::MAX, |j| rows[j - 1])
}

/// Merges the parts of `ν` and `ν'` into the labels `1..=n`. Equal parts
/// give the smaller label to the content ending in the higher merged row.
pub fn relabel_contents(f1: &LrFilling, f2: &LrFilling) -> LabelMap {
    let (first_rows, second_rows) = merge_rows(f1, f2);
    let (n1, n2) = (f1.nu(), f2.nu());
    let (mut a, mut b) = (1, 1);
    let (mut first, mut second) = (Vec::new(), Vec::new());
    let mut next = 1;
    while a <= f1.r() || b <= f2.r() {
        let take_first = if b > f2.r() {
            true
        } else if a > f1.r() {
            false
        } else {
            match n1.part(a).cmp(&n2.part(b)) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => ending_row(f1, &first_rows, a) <= ending_row(f2, &second_rows, b),
            }
        };
        if take_first {
            first.push(next);
            a += 1;
        } else {
            second.push(next);
            b += 1;
        }
        next += 1;
    }
    LabelMap { first, second, first_rows, second_rows }
}

/// Stacks the relabelled rows of both fillings in merged row order,
/// without moving any box within its row.
pub fn initial_grid(f1: &LrFilling, f2: &LrFilling, map: &LabelMap) -> Result<TableauGrid> {
    let n = map.n();
    let mut rows = vec![Vec::new(); n];
    for (f, labels, placed) in [(f1, &map.first, &map.first_rows), (f2, &map.second, &map.second_rows)] {
        let grid = f.to_grid()?;
        for (j, row) in grid.rows.into_iter().enumerate() {
            rows[placed[j] - 1] = row
                .into_iter()
                .map(|c| match c {
                    Cell::Inner => Cell::Inner,
                    Cell::Label(v) => Cell::Label(labels[v - 1]),
                })
                .collect();
        }
    }
    Ok(TableauGrid { rows, bound: n })
}

/// A 1-based grid position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Pos {
    pub row: usize,
    pub col: usize,
}

impl From<[usize; 2]> for Pos {
    fn from([row, col]: [usize; 2]) -> Self {
        Pos { row, col }
    }
}

impl From<Pos> for [usize; 2] {
    fn from(p: Pos) -> Self {
        [p.row, p.col]
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

fn get(g: &TableauGrid, p: Pos) -> Cell {
    g.rows[p.row - 1][p.col - 1]
}

fn set(g: &mut TableauGrid, p: Pos, c: Cell) {
    g.rows[p.row - 1][p.col - 1] = c;
}

/// All positions in reading order `≺`.
fn reading_order(g: &TableauGrid) -> impl Iterator<Item = Pos> + '_ {
    g.rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| (1..=row.len()).rev().map(move |c| Pos { row: r + 1, col: c }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    /// Two adjacent rows exchange the prefixes covering the lower row's
    /// inner boxes.
    MuSwitch,
    RowBound,
    Word,
    ColumnStrict,
    ColumnRepeat,
}

/// One swap. Every cell of `strand_a` holds the smaller label `labels[0]`
/// and every cell of `strand_b` holds `labels[1]`; the step exchanges them. For
/// [`StepKind::MuSwitch`] the strands are the two row prefixes and `labels`
/// holds the upper and lower row numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub strand_a: Vec<Pos>,
    pub strand_b: Vec<Pos>,
    pub labels: [usize; 2],
}

impl Step {
    /// Whether applying the step leaves each row's labels sorted. Labels
    /// only matter per row; swaps that move a label to an arbitrary column
    /// re-sort afterwards, vertical swaps and row-bound strands do not.
    pub fn sorts_rows(&self) -> bool {
        matches!(self.kind, StepKind::Word | StepKind::ColumnRepeat)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StepTrace {
    pub steps: Vec<Step>,
}

impl StepTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step to `g`, checking that each strand holds what the
    /// step says it does.
    pub fn replay(&self, g: &TableauGrid) -> Result<TableauGrid> {
        let mut g = g.clone();
        for (n, step) in self.steps.iter().enumerate() {
            apply_step(&mut g, step).map_err(|e| Error::TraceMismatch(format!("step {n}: {e}")))?;
        }
        Ok(g)
    }
}

fn apply_step(g: &mut TableauGrid, step: &Step) -> Result<()> {
    let in_range = |p: &Pos| p.row >= 1 && p.col >= 1 && p.row <= g.rows.len() && p.col <= g.rows[p.row - 1].len();
    if !step.strand_a.iter().chain(&step.strand_b).all(in_range) {
        return Err(Error::Shape("strand leaves the grid".into()));
    }
    if step.kind == StepKind::MuSwitch {
        if step.strand_a.len() != step.strand_b.len() {
            return Err(Error::Shape("row prefixes differ in length".into()));
        }
        for (&a, &b) in step.strand_a.iter().zip(&step.strand_b) {
            let (ca, cb) = (get(g, a), get(g, b));
            set(g, a, cb);
            set(g, b, ca);
        }
        return Ok(());
    }
    let [la, lb] = step.labels;
    let holds = |g: &TableauGrid, cells: &[Pos], v: usize| cells.iter().all(|&p| get(g, p) == Cell::Label(v));
    if step.strand_a.len() != step.strand_b.len() || !holds(g, &step.strand_a, la) || !holds(g, &step.strand_b, lb) {
        return Err(Error::Shape(format!("strands do not hold {la} and {lb}")));
    }
    for &p in &step.strand_a {
        set(g, p, Cell::Label(lb));
    }
    for &p in &step.strand_b {
        set(g, p, Cell::Label(la));
    }
    if !step.sorts_rows() {
        return Ok(());
    }
    for row in &mut g.rows {
        let start = row.iter().position(|c| *c != Cell::Inner).unwrap_or(row.len());
        row[start..].sort();
    }
    Ok(())
}

/// Pushes inner boxes to the top of every column, keeping the order of the
/// labelled boxes. Done as a bubble sort on adjacent rows; each exchange is
/// returned as a [`StepKind::MuSwitch`] step.
pub fn normalize_inner(g: &TableauGrid) -> (TableauGrid, Vec<Step>) {
    let mut g = g.clone();
    let mut steps = Vec::new();
    loop {
        let inner = g.inner_lengths();
        let Some(j) = (1..inner.len()).find(|&j| inner[j - 1] < inner[j]) else {
            break;
        };
        // rows j (upper) and j+1 (lower), 1-based
        let width = inner[j] as usize;
        let step = Step {
            kind: StepKind::MuSwitch,
            strand_a: (1..=width).map(|c| Pos { row: j, col: c }).collect(),
            strand_b: (1..=width).map(|c| Pos { row: j + 1, col: c }).collect(),
            labels: [j, j + 1],
        };
        apply_step(&mut g, &step).expect("prefix swap stays in the grid");
        steps.push(step);
    }
    (g, steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// A label larger than its row number.
    RowBound,
    /// Too many `i+1`'s weakly north-east of a box.
    Word,
    /// A label directly above a smaller one.
    ColumnStrict,
    /// A label directly above an equal one.
    ColumnRepeat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub at: Pos,
    /// `[small, large]`: the label to bring in and the offending label.
    pub labels: [usize; 2],
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [small, large] = self.labels;
        match self.kind {
            ViolationKind::RowBound => write!(f, "{large} in row {} at {}", self.at.row, self.at),
            ViolationKind::Word => write!(f, "too many {large}'s over {small}'s at {}", self.at),
            ViolationKind::ColumnStrict => write!(f, "{large} above {small} at {}", self.at),
            ViolationKind::ColumnRepeat => write!(f, "{large} above {large} at {}", self.at),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    RowBound,
    General,
}

/// The next violation to repair in `phase`, if any.
pub fn next_violation(g: &TableauGrid, phase: Phase) -> Result<Option<Violation>> {
    match phase {
        Phase::RowBound => Ok(next_row_bound(g)),
        Phase::General => next_general(g),
    }
}

/// Topmost row with a label above its row number; its largest such label.
fn next_row_bound(g: &TableauGrid) -> Option<Violation> {
    for (r, row) in g.rows.iter().enumerate() {
        let i = r + 1;
        let worst = row
            .iter()
            .enumerate()
            .filter_map(|(c, cell)| cell.label().filter(|&v| v > i).map(|v| (v, c)))
            .max_by_key(|&(v, c)| (v, std::cmp::Reverse(c)));
        if let Some((v, c)) = worst {
            // report the easternmost box holding v
            let col = row.iter().rposition(|&x| x == Cell::Label(v)).unwrap_or(c) + 1;
            return Some(Violation { kind: ViolationKind::RowBound, at: Pos { row: i, col }, labels: [i, v] });
        }
    }
    None
}

/// The `≺`-first bad box: word, column-strict or a repeated label in a
/// column.
fn next_general(g: &TableauGrid) -> Result<Option<Violation>> {
    let n = g.bound;
    // seen[v]: v's at or before the current box; above[v]: v's in earlier rows
    let mut seen = vec![0u64; n + 2];
    let mut above = vec![0u64; n + 2];
    let mut current_row = 1;
    for p in reading_order(g) {
        if p.row != current_row {
            above.copy_from_slice(&seen);
            current_row = p.row;
        }
        let Cell::Label(v) = get(g, p) else { continue };
        seen[v] += 1;
        if v >= 2 && seen[v] > above[v - 1] {
            return Ok(Some(Violation { kind: ViolationKind::Word, at: p, labels: [v - 1, v] }));
        }
        if let Some(Cell::Label(below)) = g.get(p.row, p.col - 1) {
            match below.cmp(&v) {
                Ordering::Less => {
                    return Ok(Some(Violation { kind: ViolationKind::ColumnStrict, at: p, labels: [below, v] }));
                }
                Ordering::Equal => {
                    return Ok(Some(Violation { kind: ViolationKind::ColumnRepeat, at: p, labels: [v - 1, v] }));
                }
                Ordering::Greater => {}
            }
        }
    }
    Ok(None)
}

/// Builds the swap that repairs `v`, without applying it.
pub fn plan_step(g: &TableauGrid, v: &Violation) -> Result<Step> {
    let [small, large] = v.labels;
    match v.kind {
        ViolationKind::ColumnStrict => Ok(Step {
            kind: StepKind::ColumnStrict,
            strand_a: vec![Pos { row: v.at.row + 1, col: v.at.col }],
            strand_b: vec![v.at],
            labels: [small, large],
        }),
        ViolationKind::ColumnRepeat => smaller_below(g, StepKind::ColumnRepeat, v.at, large),
        ViolationKind::RowBound => {
            // every `large` from row i on against the `small`s strictly below row i
            let i = v.at.row;
            strand_pair(g, StepKind::RowBound, small, large, |p| p.row >= i, |p| p.row > i)
        }
        ViolationKind::Word => {
            let (start, row) = (order_key(v.at), v.at.row);
            strand_pair(g, StepKind::Word, small, large, |p| p.row == row && order_key(p) >= start, |p| p.row > row)
                .or_else(|_| smaller_below(g, StepKind::Word, v.at, large))
                .or_else(|_| lift_small(g, v.at.row, small, large))
        }
    }
}

/// Trades a `small` in `row` for a `large` in the nearest row above that
/// has one.
fn lift_small(g: &TableauGrid, row: usize, small: usize, large: usize) -> Result<Step> {
    let find = |r: usize, v: usize| g.rows[r - 1].iter().rposition(|&c| c == Cell::Label(v)).map(|c| Pos { row: r, col: c + 1 });
    let lower = find(row, small);
    let upper = (1..row).rev().find_map(|r| find(r, large));
    match (lower, upper) {
        (Some(a), Some(b)) => Ok(Step { kind: StepKind::Word, strand_a: vec![a], strand_b: vec![b], labels: [small, large] }),
        _ => Err(Error::Invariant(format!("no {small} in row {row} to trade upward for a {large}"))),
    }
}

/// Trades the `large` at `at` for the largest smaller label in the nearest
/// row below that has one.
fn smaller_below(g: &TableauGrid, kind: StepKind, at: Pos, large: usize) -> Result<Step> {
    let (label, partner) = (at.row + 1..=g.rows.len())
        .find_map(|r| {
            g.rows[r - 1]
                .iter()
                .enumerate()
                .filter_map(|(c, cell)| cell.label().filter(|&x| x < large).map(|x| (x, Pos { row: r, col: c + 1 })))
                .max()
        })
        .ok_or_else(|| Error::Invariant(format!("nothing below row {} to trade with the {large} at {at}", at.row)))?;
    Ok(Step { kind, strand_a: vec![partner], strand_b: vec![at], labels: [label, large] })
}

fn order_key(p: Pos) -> (usize, std::cmp::Reverse<usize>) {
    (p.row, std::cmp::Reverse(p.col))
}

/// Walks `≺` collecting `large`-cells accepted by `take_large` and
/// `small`-cells accepted by `take_small`, stopping at the first small cell
/// that evens the counts.
fn strand_pair(
    g: &TableauGrid,
    kind: StepKind,
    small: usize,
    large: usize,
    take_large: impl Fn(Pos) -> bool,
    take_small: impl Fn(Pos) -> bool,
) -> Result<Step> {
    let (mut larges, mut smalls) = (Vec::new(), Vec::new());
    for p in reading_order(g) {
        match get(g, p) {
            Cell::Label(x) if x == large && take_large(p) => larges.push(p),
            Cell::Label(x) if x == small && take_small(p) => {
                smalls.push(p);
                if smalls.len() == larges.len() {
                    return Ok(Step { kind, strand_a: smalls, strand_b: larges, labels: [small, large] });
                }
            }
            _ => {}
        }
    }
    Err(Error::Invariant(format!(
        "no strand of {small}'s matches the {} {large}'s to be moved",
        larges.len()
    )))
}

/// Repairs one violation, returning the new grid and the recorded step.
pub fn resolve_violation(g: &TableauGrid, v: &Violation) -> Result<(TableauGrid, Step)> {
    let step = plan_step(g, v)?;
    let mut out = g.clone();
    apply_step(&mut out, &step)?;
    Ok((out, step))
}

/// Sorts the labels of each row; inner boxes stay in front.
pub fn finalize_rows(g: &TableauGrid) -> TableauGrid {
    let mut g = g.clone();
    for row in &mut g.rows {
        row.sort();
    }
    g
}

/// Everything the summation did, kept for inspection and replay.
#[derive(Debug, Clone)]
pub struct SumRun {
    pub map: LabelMap,
    /// The stacked grid before inner boxes are moved.
    pub initial: TableauGrid,
    /// The grid after the last swap, before rows are sorted.
    pub repaired: TableauGrid,
    pub trace: StepTrace,
    pub result: LrFilling,
}

/// Sums two fillings. See [`sum_run`] for the intermediate states.
pub fn sum_fillings(f1: &LrFilling, f2: &LrFilling) -> Result<(LrFilling, StepTrace)> {
    let run = sum_run(f1, f2, STEP_FACTOR)?;
    Ok((run.result, run.trace))
}

pub fn sum_run(f1: &LrFilling, f2: &LrFilling, step_factor: usize) -> Result<SumRun> {
    for f in [f1, f2] {
        let report = f.validate();
        if !report.ok() {
            return Err(Error::InvalidFilling(report));
        }
    }
    let map = relabel_contents(f1, f2);
    let n = map.n();
    let cap = step_factor * n * (f1.lambda().weight() + f2.lambda().weight()) as usize;
    let initial = initial_grid(f1, f2, &map)?;
    let (mut g, mu_steps) = normalize_inner(&initial);
    let mut trace = StepTrace { steps: mu_steps };
    let mut visited = HashSet::new();
    for phase in [Phase::RowBound, Phase::General] {
        while let Some(v) = next_violation(&g, phase)? {
            if trace.len() >= cap {
                return Err(Error::StepCap(cap));
            }
            if !visited.insert(g.clone()) {
                return Err(Error::Invariant(format!("grid state repeated while fixing {v}")));
            }
            let (next, step) = resolve_violation(&g, &v)?;
            g = next;
            trace.steps.push(step);
        }
    }
    let mu = direct_sum(f1.mu(), f2.mu());
    let nu = direct_sum(f1.nu(), f2.nu());
    let lambda = direct_sum(f1.lambda(), f2.lambda());
    let result = LrFilling::from_grid(&finalize_rows(&g), &mu, &nu, &lambda)?;
    let report = result.validate();
    if !report.ok() {
        return Err(Error::InvalidFilling(report));
    }
    Ok(SumRun { map, initial, repaired: g, trace, result })
}
