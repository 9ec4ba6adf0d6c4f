//! Transductive learning as bipartite matching.
//!
//! One-inclusion graphs built from finite restrictions of hypothesis
//! classes, optimal transductive learners via b-matching, Hall complexity,
//! the FDS min-max assignment problem, and PAC reductions.

pub mod budget;
pub mod error;
pub mod family;
pub mod fds;
pub mod graph;
pub mod label;
pub mod learners;
pub mod loss;
pub mod matching;
pub mod oig;
pub mod pac;
pub mod scalar;

pub use budget::Budget;
pub use error::{Error, Result};
pub use fds::{Fds, FdsAssignment, GenericFds};
pub use family::{AxisAlignedRectangles, ExplicitTable, FiniteProjection, LabelingFamily, Thresholds};
pub use graph::BipartiteGraph;
pub use learners::{Setting, TransductiveLearner};
pub use label::{Dataset, Label, Labeling, PartialLabeling, Point};
pub use oig::{BipartiteOig, OneInclusionGraph};
pub use scalar::{Rational, Scalar};

/// Losses over exact rationals.
pub type Loss = loss::LossFunction<Rational>;
/// Losses over `f64`, for quick numerical work.
pub type LossF64 = loss::LossFunction<f64>;
