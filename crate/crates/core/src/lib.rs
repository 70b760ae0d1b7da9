//! Sums of Littlewood-Richardson fillings, together with the chain of
//! equivalent structures used to check them: hives, weighted dual graphs
//! with canonical flows, and honeycombs with overlays.

pub mod dual;
pub mod error;
pub mod filling;
pub mod hive;
pub mod honeycomb;
pub mod partition;
pub mod report;
pub mod summation;

pub use dual::{canonical_flow, check_flow, flow_to_filling, Class, Face, Flow, FlowReport, Strand, WeightedDualGraph};
pub use error::{Error, Result};
pub use filling::{count_fillings, enumerate_fillings, Cell, LrFilling, TableauGrid};
pub use hive::{count_hives, Hive};
pub use partition::{contains, direct_sum, Partition, SkewShape};
pub use report::{Check, Failure, Report};
pub use summation::{sum_fillings, StepTrace};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/fillings.md")]
    mod fillings {}
    #[doc = include_str!("../../../book/src/hives.md")]
    mod hives {}
    #[doc = include_str!("../../../book/src/flows.md")]
    mod flows {}
    #[doc = include_str!("../../../book/src/honeycombs.md")]
    mod honeycombs {}
    #[doc = include_str!("../../../book/src/summation.md")]
    mod summation {}
    #[doc = include_str!("../../../book/src/replay.md")]
    mod replay {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
