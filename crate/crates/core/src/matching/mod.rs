//! Matching, b-matching feasibility and the quantities built on them:
//! optimal orientations, Hall complexity, and subgraph density.

mod bmatching;
mod density;
mod hall;
mod max_matching;
mod orientation;

pub use bmatching::{b_matching_feasible, hall_condition_holds, BMatchingOutcome, HallWitness, Requirements};
pub use density::{densest_subgraph, densest_subgraph_exhaustive, max_avg_degree, DensityMode};
pub use hall::{compactness_check, epsilon_demands, fractional_hall_complexity, hall_complexity, hall_defect, CompactnessReport};
pub use max_matching::{max_matching, Matching};
pub use orientation::{optimal_orientation, orientation_error, OrientationResult};
