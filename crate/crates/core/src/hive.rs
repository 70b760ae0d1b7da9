//! Integer hives and their bijection with LR fillings.
//!
//! A hive of size `r` is a triangle of integers `h(p, q)`, `0 <= q <= p <= r`,
//! row `p` read left to right. Every pair of unit triangles sharing an edge
//! forms a rhombus, and the two entries at the ends of the shared edge must
//! sum to at least the two remaining entries. The three families are named
//! by the orientation of the shared edge:
//!
//! ```text
//!   right     edge (p-1,q-1)-(p,q):   h(p,q) + h(p-1,q-1) >= h(p,q-1) + h(p-1,q)
//!   vertical  edge (p-1,q)-(p,q):     h(p-1,q) + h(p,q)   >= h(p-1,q-1) + h(p,q+1)
//!   left      edge (p,q)-(p,q+1):     h(p,q) + h(p,q+1)   >= h(p-1,q) + h(p+1,q+1)
//! ```
//!
//! each on the index range where all four entries exist.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filling::LrFilling;
use crate::partition::Partition;
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHive")]
pub struct Hive {
    h: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawHive {
    h: Vec<Vec<i64>>,
}

impl TryFrom<RawHive> for Hive {
    type Error = Error;

    fn try_from(raw: RawHive) -> Result<Self> {
        Hive::new(raw.h)
    }
}

/// The three rhombus families, as `(check, p, q, slack)` for every rhombus.
fn rhombi(h: &Hive) -> Vec<(Check, usize, usize, i64)> {
    let r = h.r();
    let at = |p: usize, q: usize| h.h[p][q];
    let mut out = Vec::new();
    for p in 2..=r {
        for q in 1..p {
            let slack = at(p, q) + at(p - 1, q - 1) - at(p, q - 1) - at(p - 1, q);
            out.push((Check::RightRhombus, p, q, slack));
        }
    }
    for p in 2..=r {
        for q in 1..p {
            let slack = at(p - 1, q) + at(p, q) - at(p - 1, q - 1) - at(p, q + 1);
            out.push((Check::VerticalRhombus, p, q, slack));
        }
    }
    for p in 1..r {
        for q in 0..p {
            let slack = at(p, q) + at(p, q + 1) - at(p - 1, q) - at(p + 1, q + 1);
            out.push((Check::LeftRhombus, p, q, slack));
        }
    }
    out
}

impl Hive {
    /// Accepts any triangular array (row `p` has `p + 1` entries); the
    /// rhombus inequalities are checked by [`Hive::validate`].
    pub fn new(h: Vec<Vec<i64>>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::Shape("a hive has at least the row h_00".into()));
        }
        for (p, row) in h.iter().enumerate() {
            if row.len() != p + 1 {
                return Err(Error::Shape(format!("hive row {p} has {} entries, expected {}", row.len(), p + 1)));
            }
        }
        Ok(Hive { h })
    }

    pub fn r(&self) -> usize {
        self.h.len() - 1
    }

    pub fn get(&self, p: usize, q: usize) -> i64 {
        self.h[p][q]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.h
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        if self.h[0][0] != 0 {
            report.push(Check::Normalization, 0, 0);
        }
        for (check, p, q, slack) in rhombi(self) {
            if slack < 0 {
                report.push(check, p, q);
            }
        }
        report
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok() {
            Ok(())
        } else {
            Err(Error::InvalidHive(report))
        }
    }

    /// Boundary differences `(μ, ν, λ)`: down the left side, along the
    /// bottom, down the right side.
    pub fn hive_type(&self) -> Result<(Partition, Partition, Partition)> {
        self.require_valid()?;
        let r = self.r();
        let diffs = |f: &dyn Fn(usize) -> i64| -> Result<Partition> {
            let v: Vec<i64> = (1..=r).map(f).collect();
            if v.iter().any(|&x| x < 0) {
                return Err(Error::Shape(format!("negative boundary difference in {v:?}")));
            }
            Partition::new(v.into_iter().map(|x| x as u64).collect())
                .map_err(|e| Error::Invariant(format!("rhombus inequalities did not order the boundary: {e}")))
        };
        let mu = diffs(&|i| self.h[i][0] - self.h[i - 1][0])?;
        let nu = diffs(&|i| self.h[r][i] - self.h[r][i - 1])?;
        let lambda = diffs(&|i| self.h[i][i] - self.h[i - 1][i - 1])?;
        debug_assert_eq!(mu.weight() + nu.weight(), lambda.weight());
        Ok((mu, nu, lambda))
    }

    /// `h(p, q) = Σ_{i<=q} Σ_{j<=p} k(i, j) + μ_1 + .. + μ_p`.
    pub fn from_filling(f: &LrFilling) -> Result<Self> {
        let report = f.validate();
        if !report.ok() {
            return Err(Error::InvalidFilling(report));
        }
        let r = f.r();
        let h = (0..=r)
            .map(|p| {
                (0..=p)
                    .map(|q| {
                        let counts: u64 = (1..=q).map(|i| f.label_count_through(i, p)).sum();
                        (counts + f.mu().prefix_sum(p)) as i64
                    })
                    .collect()
            })
            .collect();
        Ok(Hive { h })
    }

    /// Inverse of [`Hive::from_filling`]: off the diagonal `k(i, j)` is the
    /// right-rhombus slack at `(j, i)`, on it `k(j, j) = h(j, j) - h(j, j-1)`.
    pub fn to_filling(&self) -> Result<LrFilling> {
        let (mu, nu, lambda) = self.hive_type()?;
        let h = &self.h;
        let k = (1..=self.r())
            .map(|j| {
                (1..=j)
                    .map(|i| {
                        let v = if i < j {
                            h[j - 1][i - 1] + h[j][i] - h[j - 1][i] - h[j][i - 1]
                        } else {
                            h[j][j] - h[j][j - 1]
                        };
                        u64::try_from(v).map_err(|_| Error::Invariant(format!("k({i},{j}) = {v} is negative")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LrFilling::checked(mu, nu, lambda, k)
    }
}

impl fmt::Display for Hive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, row) in self.h.iter().enumerate() {
            if p > 0 {
                f.write_str("\n")?;
            }
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Integer hives with boundary `(μ, ν, λ)`, counted by filling the interior
/// row by row.
///
/// This only uses the rhombus inequalities, so it serves as an independent
/// check on [`crate::filling::count_fillings`]. Chaining right and vertical
/// rhombi along a row shows every horizontal step `h(p,q) - h(p,q-1)` lies
/// between `ν_{q+r-p}` and `ν_q`, which bounds each interior entry given its
/// left neighbour; every rhombus is checked once its last entry is placed.
pub fn count_hives(mu: &Partition, nu: &Partition, lambda: &Partition) -> u64 {
    let r = mu.len().max(nu.len()).max(lambda.len());
    if mu.weight() + nu.weight() != lambda.weight() {
        return 0;
    }
    let mut h: Vec<Vec<i64>> = (0..=r).map(|p| vec![0; p + 1]).collect();
    for p in 1..=r {
        h[p][0] = mu.prefix_sum(p) as i64;
        h[p][p] = lambda.prefix_sum(p) as i64;
    }
    for q in 1..=r {
        h[r][q] = (mu.weight() + nu.prefix_sum(q)) as i64;
    }
    let interior: Vec<(usize, usize)> = (2..r).flat_map(|p| (1..p).map(move |q| (p, q))).collect();
    let order = |p: usize, q: usize| -> usize {
        // boundary entries are known from the start
        if q == 0 || q == p || p == r {
            0
        } else {
            1 + interior.iter().position(|&x| x == (p, q)).unwrap()
        }
    };
    // Bucket every rhombus by the step at which its last entry is placed.
    let mut checks: Vec<Vec<[(usize, usize); 4]>> = vec![Vec::new(); interior.len() + 1];
    for p in 2..=r {
        for q in 1..p {
            checks_push(&mut checks, &order, [(p, q), (p - 1, q - 1), (p, q - 1), (p - 1, q)]);
            checks_push(&mut checks, &order, [(p - 1, q), (p, q), (p - 1, q - 1), (p, q + 1)]);
        }
    }
    for p in 1..r {
        for q in 0..p {
            checks_push(&mut checks, &order, [(p, q), (p, q + 1), (p - 1, q), (p + 1, q + 1)]);
        }
    }
    let holds = |h: &Vec<Vec<i64>>, rh: &[(usize, usize); 4]| {
        let v = |i: usize| h[rh[i].0][rh[i].1];
        v(0) + v(1) >= v(2) + v(3)
    };
    if !checks[0].iter().all(|rh| holds(&h, rh)) {
        return 0;
    }
    let nu_at = |t: usize| nu.part(t) as i64;

    fn fill(
        n: usize,
        interior: &[(usize, usize)],
        h: &mut Vec<Vec<i64>>,
        checks: &[Vec<[(usize, usize); 4]>],
        r: usize,
        nu_at: &dyn Fn(usize) -> i64,
        holds: &dyn Fn(&Vec<Vec<i64>>, &[(usize, usize); 4]) -> bool,
    ) -> u64 {
        if n == interior.len() {
            return 1;
        }
        let (p, q) = interior[n];
        let left = h[p][q - 1];
        let (lo, hi) = (left + nu_at(q + r - p), left + nu_at(q));
        let mut total = 0;
        for v in lo..=hi {
            h[p][q] = v;
            if checks[n + 1].iter().all(|rh| holds(h, rh)) {
                total += fill(n + 1, interior, h, checks, r, nu_at, holds);
            }
        }
        total
    }

    fill(0, &interior, &mut h, &checks, r, &nu_at, &holds)
}

fn checks_push(
    checks: &mut [Vec<[(usize, usize); 4]>],
    order: &dyn Fn(usize, usize) -> usize,
    rh: [(usize, usize); 4],
) {
    let last = rh.iter().map(|&(p, q)| order(p, q)).max().unwrap();
    checks[last].push(rh);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filling::{count_fillings, enumerate_fillings};

    fn p(v: &[u64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    pub(crate) fn sample_hive() -> Hive {
        Hive::new(vec![
            vec![0],
            vec![10, 18],
            vec![19, 27, 34],
            vec![24, 34, 42, 46],
            vec![27, 38, 48, 54, 57],
            vec![28, 40, 51, 58, 64, 65],
        ])
        .unwrap()
    }

    /// Solves `h(p,q) = Σ_{i<=q} c(i,p) + μ_1..μ_p` for the cumulative counts
    /// `c(i,p)` by successive differences, then `k(i,j) = c(i,j) - c(i,j-1)`.
    fn invert_by_differences(h: &Hive) -> Vec<Vec<i64>> {
        let r = h.r();
        let cum = |i: usize, p: usize| -> i64 {
            if p == 0 {
                0
            } else {
                h.get(p, i) - h.get(p, i - 1)
            }
        };
        (1..=r)
            .map(|j| (1..=j).map(|i| cum(i, j) - if i <= j - 1 { cum(i, j - 1) } else { 0 }).collect())
            .collect()
    }

    #[test]
    fn sample_hive_is_valid_and_typed() {
        let h = sample_hive();
        assert!(h.validate().ok(), "{}", h.validate());
        let (mu, nu, lambda) = h.hive_type().unwrap();
        assert_eq!(mu, p(&[10, 9, 5, 3, 1]));
        assert_eq!(nu, p(&[12, 11, 7, 6, 1]));
        assert_eq!(lambda, p(&[18, 16, 12, 11, 8]));
    }

    #[test]
    fn sample_hive_inverts() {
        let f = sample_hive().to_filling().unwrap();
        assert_eq!(f.k(2, 4), 2);
        assert_eq!(f.k(2, 2), 7);
        let oracle = invert_by_differences(&sample_hive());
        let got: Vec<Vec<i64>> = f.matrix().iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect();
        assert_eq!(got, oracle);
        assert_eq!(Hive::from_filling(&f).unwrap(), sample_hive());
        assert!(enumerate_fillings(f.mu(), f.nu(), f.lambda()).contains(&f));
    }

    #[test]
    fn small_hives() {
        let h = Hive::new(vec![vec![0], vec![2, 3]]).unwrap();
        assert!(h.validate().ok());
        assert_eq!(h.hive_type().unwrap(), (p(&[2]), p(&[1]), p(&[3])));
        let h = Hive::new(vec![vec![0], vec![2, 3], vec![3, 5, 6]]).unwrap();
        assert_eq!(h.hive_type().unwrap(), (p(&[2, 1]), p(&[2, 1]), p(&[3, 3])));
        let f = LrFilling::new(p(&[2, 1]), p(&[2, 1]), p(&[3, 3]), vec![vec![1], vec![1, 1]]).unwrap();
        assert_eq!(Hive::from_filling(&f).unwrap(), h);
    }

    #[test]
    fn broken_entry_fails_right_rhombus() {
        let mut rows = sample_hive().rows().to_vec();
        rows[2][1] = 35;
        let report = Hive::new(rows).unwrap().validate();
        assert!(report.has(Check::RightRhombus));
        assert!(report.failures.contains(&crate::report::Failure { check: Check::RightRhombus, i: 3, j: 1 }));
    }

    #[test]
    fn shape_and_normalization() {
        assert!(matches!(Hive::new(vec![vec![0], vec![1]]), Err(Error::Shape(_))));
        let h = Hive::new(vec![vec![1], vec![3, 4]]).unwrap();
        assert!(h.validate().has(Check::Normalization));
        assert!(h.to_filling().is_err());
    }

    #[test]
    fn zero_filling_hive() {
        let lam = p(&[5, 3, 3, 1]);
        let h = Hive::from_filling(&LrFilling::zero(&lam)).unwrap();
        for pp in 0..=4 {
            for q in 0..=pp {
                assert_eq!(h.get(pp, q), lam.prefix_sum(pp) as i64);
            }
        }
        assert_eq!(h.to_filling().unwrap(), LrFilling::zero(&lam));
    }

    #[test]
    fn hive_counts_agree() {
        assert_eq!(count_hives(&p(&[2, 1]), &p(&[2, 1]), &p(&[3, 3])), 1);
        let lam = p(&[3, 2, 2]);
        assert_eq!(count_hives(&lam, &Partition::zeros(3), &lam), 1);
        let (m, n, l) = (p(&[10, 6, 1]), p(&[13, 7, 1]), p(&[17, 12, 9]));
        assert_eq!(count_hives(&m, &n, &l), count_fillings(&m, &n, &l));
        let (m, n, l) = (p(&[2, 1, 0]), p(&[2, 1, 0]), p(&[3, 2, 1]));
        assert_eq!(count_hives(&m, &n, &l), 2);
    }

    #[test]
    fn json_layout() {
        let h = Hive::new(vec![vec![0], vec![2, 3]]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"h":[[0],[2,3]]}"#);
        assert!(serde_json::from_str::<Hive>(r#"{"h":[[0],[2]]}"#).is_err());
    }
}
