use std::fmt;

use serde::Serialize;

/// The condition a [`Failure`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Check {
    /// Row sum `mu_j + k_1j + .. + k_jj = lambda_j`.
    Lr1Row,
    /// Content sum `k_ii + .. + k_ir = nu_i`.
    Lr1Content,
    /// Column strictness.
    Lr2,
    /// Word (lattice) condition.
    Lr3,
    /// An entry of the count matrix is negative (only reachable from hives).
    Negative,
    RightRhombus,
    VerticalRhombus,
    LeftRhombus,
    /// `h_00 != 0`.
    Normalization,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Lr1Row => "LR1-row",
            Check::Lr1Content => "LR1-content",
            Check::Lr2 => "LR2",
            Check::Lr3 => "LR3",
            Check::Negative => "negative",
            Check::RightRhombus => "right-rhombus",
            Check::VerticalRhombus => "vertical-rhombus",
            Check::LeftRhombus => "left-rhombus",
            Check::Normalization => "normalization",
        };
        f.write_str(s)
    }
}

/// One failing instance of a condition, located by a pair of indices whose
/// meaning depends on the check (`(i, j)` for fillings, `(p, q)` for hives).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Failure {
    pub check: Check,
    pub i: usize,
    pub j: usize,
}

/// Outcome of a validation pass: empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn push(&mut self, check: Check, i: usize, j: usize) {
        self.failures.push(Failure { check, i, j });
    }

    pub fn has(&self, check: Check) -> bool {
        self.failures.iter().any(|f| f.check == check)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (n, fail) in self.failures.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}({},{})", fail.check, fail.i, fail.j)?;
        }
        Ok(())
    }
}
