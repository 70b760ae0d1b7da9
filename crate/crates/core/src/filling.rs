//! Littlewood-Richardson fillings.
//!
//! A filling of the skew shape `λ/μ` with content `ν` is stored as its count
//! matrix: `k(i, j)` is the number of boxes labelled `i` in row `j`, defined
//! for `1 <= i <= j <= r`. Row `j` of the matrix (the JSON `k[j-1]`) holds
//! `k(1, j), .., k(j, j)`.
//!
//! [`LrFilling::validate`] checks the four families of conditions:
//!
//! * LR1 (rows): `μ_j + k(1,j) + .. + k(j,j) = λ_j`;
//! * LR1 (content): `k(i,i) + .. + k(i,r) = ν_i`;
//! * LR2 (column strictness): `μ_j + k(1,j) + .. + k(i,j) <= μ_{j-1} + k(1,j-1) + .. + k(i-1,j-1)`;
//! * LR3 (word condition): the number of `i+1`'s in rows `i+1..=j+1` is at
//!   most the number of `i`'s in rows `i..=j`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFilling")]
pub struct LrFilling {
    mu: Partition,
    nu: Partition,
    lambda: Partition,
    k: Vec<Vec<u64>>,
}

#[derive(Deserialize)]
struct RawFilling {
    mu: Partition,
    nu: Partition,
    lambda: Partition,
    k: Vec<Vec<u64>>,
}

impl TryFrom<RawFilling> for LrFilling {
    type Error = Error;

    fn try_from(raw: RawFilling) -> Result<Self> {
        LrFilling::new(raw.mu, raw.nu, raw.lambda, raw.k)
    }
}

impl LrFilling {
    /// Assembles a filling, padding `mu`, `nu` and `lambda` to a common
    /// length `r`. The count matrix must have exactly `r` rows, row `j`
    /// holding `j` entries. No LR conditions are checked here.
    pub fn new(mu: Partition, nu: Partition, lambda: Partition, k: Vec<Vec<u64>>) -> Result<Self> {
        let r = mu.len().max(nu.len()).max(lambda.len());
        if k.len() != r {
            return Err(Error::Shape(format!("count matrix has {} rows, expected {r}", k.len())));
        }
        for (j, row) in k.iter().enumerate() {
            if row.len() != j + 1 {
                return Err(Error::Shape(format!(
                    "count matrix row {} has {} entries, expected {}",
                    j + 1,
                    row.len(),
                    j + 1
                )));
            }
        }
        Ok(LrFilling {
            mu: mu.padded(r),
            nu: nu.padded(r),
            lambda: lambda.padded(r),
            k,
        })
    }

    /// Like [`LrFilling::new`] followed by [`LrFilling::validate`].
    pub fn checked(mu: Partition, nu: Partition, lambda: Partition, k: Vec<Vec<u64>>) -> Result<Self> {
        let f = Self::new(mu, nu, lambda, k)?;
        let report = f.validate();
        if report.ok() {
            Ok(f)
        } else {
            Err(Error::InvalidFilling(report))
        }
    }

    /// The filling with no rows; the identity for [`crate::summation::sum_fillings`].
    pub fn empty() -> Self {
        LrFilling {
            mu: Partition::empty(),
            nu: Partition::empty(),
            lambda: Partition::empty(),
            k: Vec::new(),
        }
    }

    /// The unique filling of type `(λ, 0; λ)`.
    pub fn zero(lambda: &Partition) -> Self {
        let r = lambda.len();
        LrFilling {
            mu: lambda.clone(),
            nu: Partition::zeros(r),
            lambda: lambda.clone(),
            k: (1..=r).map(|j| vec![0; j]).collect(),
        }
    }

    pub fn r(&self) -> usize {
        self.k.len()
    }

    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    pub fn nu(&self) -> &Partition {
        &self.nu
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    /// Number of `i`'s in row `j` (1-based); zero outside the triangle.
    pub fn k(&self, i: usize, j: usize) -> u64 {
        if i == 0 || i > j || j > self.r() {
            return 0;
        }
        self.k[j - 1][i - 1]
    }

    /// The count matrix, row `j` first.
    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.k
    }

    /// Number of `i`'s in rows `1..=j`.
    pub fn label_count_through(&self, i: usize, j: usize) -> u64 {
        (i..=j.min(self.r())).map(|s| self.k(i, s)).sum()
    }

    /// The chain partition `λ^(i)`: row `j` holds `μ_j + k(1,j) + .. + k(i,j)`.
    pub fn chain(&self, i: usize) -> Vec<u64> {
        (1..=self.r())
            .map(|j| self.mu.part(j) + (1..=i.min(j)).map(|s| self.k(s, j)).sum::<u64>())
            .collect()
    }

    pub fn validate(&self) -> Report {
        let r = self.r();
        let mut report = Report::default();
        for j in 1..=r {
            let row: u64 = (1..=j).map(|s| self.k(s, j)).sum();
            if self.mu.part(j) + row != self.lambda.part(j) {
                report.push(Check::Lr1Row, 0, j);
            }
        }
        for i in 1..=r {
            if self.label_count_through(i, r) != self.nu.part(i) {
                report.push(Check::Lr1Content, i, 0);
            }
        }
        for j in 2..=r {
            for i in 1..=j {
                let lower = self.mu.part(j) + (1..=i).map(|s| self.k(s, j)).sum::<u64>();
                let upper = self.mu.part(j - 1) + (1..i).map(|s| self.k(s, j - 1)).sum::<u64>();
                if lower > upper {
                    report.push(Check::Lr2, i, j);
                }
            }
        }
        for i in 1..r {
            for j in i..r {
                let next: u64 = (i + 1..=j + 1).map(|s| self.k(i + 1, s)).sum();
                let this: u64 = (i..=j).map(|s| self.k(i, s)).sum();
                if next > this {
                    report.push(Check::Lr3, i, j);
                }
            }
        }
        report
    }

    /// Expands the counts into a grid: row `j` is `μ_j` inner boxes followed
    /// by the labels in weakly increasing order.
    pub fn to_grid(&self) -> Result<TableauGrid> {
        let report = self.validate();
        if !report.ok() {
            return Err(Error::InvalidFilling(report));
        }
        let rows = (1..=self.r())
            .map(|j| {
                let mut row = vec![Cell::Inner; self.mu.part(j) as usize];
                for i in 1..=j {
                    row.extend(std::iter::repeat(Cell::Label(i)).take(self.k(i, j) as usize));
                }
                row
            })
            .collect();
        Ok(TableauGrid { rows, bound: self.r() })
    }

    /// Reads a filling back from a grid: `k(i, j)` counts the `i`'s in row `j`.
    ///
    /// The grid must have inner prefixes of lengths `mu` and row lengths
    /// `lambda`, and its content must be `nu`. LR conditions are left to the
    /// caller.
    pub fn from_grid(grid: &TableauGrid, mu: &Partition, nu: &Partition, lambda: &Partition) -> Result<Self> {
        let r = mu.len().max(nu.len()).max(lambda.len()).max(grid.rows.len());
        let (mu, nu, lambda) = (mu.padded(r), nu.padded(r), lambda.padded(r));
        let mut k: Vec<Vec<u64>> = (1..=r).map(|j| vec![0; j]).collect();
        for j in 1..=r {
            let row = grid.rows.get(j - 1).map(Vec::as_slice).unwrap_or(&[]);
            if row.len() as u64 != lambda.part(j) {
                return Err(Error::Shape(format!(
                    "grid row {j} has length {}, expected {}",
                    row.len(),
                    lambda.part(j)
                )));
            }
            let inner = row.iter().take_while(|c| c.is_inner()).count();
            if inner as u64 != mu.part(j) || row[inner..].iter().any(Cell::is_inner) {
                return Err(Error::Shape(format!(
                    "grid row {j} does not start with exactly {} inner boxes",
                    mu.part(j)
                )));
            }
            for cell in &row[inner..] {
                let label = cell.label().expect("non-inner cell");
                if label == 0 || label > j {
                    return Err(Error::LabelOutOfRange { label, row: j, bound: j });
                }
                k[j - 1][label - 1] += 1;
            }
        }
        for i in 1..=r {
            let found: u64 = (i..=r).map(|s| k[s - 1][i - 1]).sum();
            if found != nu.part(i) {
                return Err(Error::ContentMismatch { label: i, found, expected: nu.part(i) });
            }
        }
        Ok(LrFilling { mu, nu, lambda, k })
    }
}

/// A box of a [`TableauGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cell {
    /// A box of the inner shape, left unfilled.
    Inner,
    Label(usize),
}

impl Cell {
    pub fn is_inner(&self) -> bool {
        matches!(self, Cell::Inner)
    }

    pub fn label(&self) -> Option<usize> {
        match *self {
            Cell::Label(v) => Some(v),
            Cell::Inner => None,
        }
    }
}

/// Rows of boxes, left-justified. Unlike [`LrFilling`] a grid may break any
/// of the LR conditions; it is the working state of the summation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableauGrid {
    pub rows: Vec<Vec<Cell>>,
    /// Labels lie in `1..=bound`.
    pub bound: usize,
}

impl TableauGrid {
    /// Parses rows written with `_` for inner boxes and single digits for
    /// labels, e.g. `["__1", "_12"]`.
    pub fn parse(rows: &[&str]) -> Self {
        let rows: Vec<Vec<Cell>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| match c {
                        '_' => Cell::Inner,
                        d => Cell::Label(d.to_digit(10).expect("digit or '_'") as usize),
                    })
                    .collect()
            })
            .collect();
        let bound = rows.iter().flatten().filter_map(Cell::label).max().unwrap_or(0).max(rows.len());
        TableauGrid { rows, bound }
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Cell> {
        self.rows.get(row).and_then(|r| r.get(col)).copied()
    }

    pub fn row_lengths(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.len() as u64).collect()
    }

    /// Length of the inner prefix of each row.
    pub fn inner_lengths(&self) -> Vec<u64> {
        self.rows
            .iter()
            .map(|r| r.iter().take_while(|c| c.is_inner()).count() as u64)
            .collect()
    }

    /// Number of boxes carrying each label; index 0 is unused.
    pub fn content(&self) -> Vec<u64> {
        let mut c = vec![0; self.bound + 1];
        for v in self.rows.iter().flatten().filter_map(Cell::label) {
            if v < c.len() {
                c[v] += 1;
            }
        }
        c
    }
}

impl fmt::Display for TableauGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.bound > 9;
        for (n, row) in self.rows.iter().enumerate() {
            if n > 0 {
                f.write_str("\n")?;
            }
            for (m, cell) in row.iter().enumerate() {
                if wide && m > 0 {
                    f.write_str(" ")?;
                }
                match cell {
                    Cell::Inner => f.write_str("_")?,
                    Cell::Label(v) => write!(f, "{v}")?,
                }
            }
        }
        Ok(())
    }
}

/// Backtracking walk over `LR(μ, ν; λ)` in lexicographic order of the count
/// matrix read row by row. Each entry `k(i, j)` is drawn from the interval
/// cut out by the row sum, the content bound, column strictness against row
/// `j-1` and the word condition against label `i-1`.
struct Walker {
    r: usize,
    mu: Vec<i64>,
    nu: Vec<i64>,
    lambda: Vec<i64>,
    k: Vec<Vec<u64>>,
    /// `through[i]`: number of `i`'s in the rows already completed.
    through: Vec<i64>,
}

impl Walker {
    fn new(mu: &Partition, nu: &Partition, lambda: &Partition) -> Option<Self> {
        let r = mu.len().max(nu.len()).max(lambda.len());
        if mu.weight() + nu.weight() != lambda.weight() {
            return None;
        }
        let pad = |p: &Partition| -> Vec<i64> {
            std::iter::once(0).chain((1..=r).map(|t| p.part(t) as i64)).collect()
        };
        Some(Walker {
            r,
            mu: pad(mu),
            nu: pad(nu),
            lambda: pad(lambda),
            k: (1..=r).map(|j| vec![0; j]).collect(),
            through: vec![0; r + 2],
        })
    }

    fn walk(&mut self, visit: &mut dyn FnMut(&[Vec<u64>])) {
        if self.r == 0 {
            visit(&self.k);
            return;
        }
        self.step(1, 1, visit);
    }

    fn step(&mut self, j: usize, i: usize, visit: &mut dyn FnMut(&[Vec<u64>])) {
        let placed: i64 = (1..i).map(|s| self.k[j - 1][s - 1] as i64).sum();
        let rem = self.lambda[j] - self.mu[j] - placed;
        let mut hi = rem.min(self.nu[i] - self.through[i]);
        let mut lo = 0i64;
        if j >= 2 {
            let above: i64 = (1..i).map(|s| self.k[j - 2][s - 1] as i64).sum();
            hi = hi.min(self.mu[j - 1] + above - self.mu[j] - placed);
        }
        if i >= 2 {
            hi = hi.min(self.through[i - 1] - self.through[i]);
        }
        if i == j {
            lo = lo.max(rem);
        }
        if j == self.r {
            lo = lo.max(self.nu[i] - self.through[i]);
        }
        if lo > hi {
            return;
        }
        for v in lo..=hi {
            self.k[j - 1][i - 1] = v as u64;
            if i < j {
                self.step(j, i + 1, visit);
            } else {
                for s in 1..=j {
                    self.through[s] += self.k[j - 1][s - 1] as i64;
                }
                if j == self.r {
                    visit(&self.k);
                } else {
                    self.step(j + 1, 1, visit);
                }
                for s in 1..=j {
                    self.through[s] -= self.k[j - 1][s - 1] as i64;
                }
            }
        }
        self.k[j - 1][i - 1] = 0;
    }
}

/// All of `LR(μ, ν; λ)`, inputs zero-padded to a common length. Infeasible
/// triples give an empty list.
pub fn enumerate_fillings(mu: &Partition, nu: &Partition, lambda: &Partition) -> Vec<LrFilling> {
    let Some(mut walker) = Walker::new(mu, nu, lambda) else {
        return Vec::new();
    };
    let r = walker.r;
    let (mu, nu, lambda) = (mu.padded(r), nu.padded(r), lambda.padded(r));
    let mut out = Vec::new();
    walker.walk(&mut |k| {
        out.push(LrFilling {
            mu: mu.clone(),
            nu: nu.clone(),
            lambda: lambda.clone(),
            k: k.to_vec(),
        })
    });
    out
}

/// The Littlewood-Richardson coefficient `c^λ_{μν}`, by the same walk as
/// [`enumerate_fillings`] without materializing fillings.
pub fn count_fillings(mu: &Partition, nu: &Partition, lambda: &Partition) -> u64 {
    let Some(mut walker) = Walker::new(mu, nu, lambda) else {
        return 0;
    };
    let mut n = 0u64;
    walker.walk(&mut |_| n += 1);
    n
}
