//! Multi-objective multi-item solid transportation under uncertainty.
//!
//! Uncertain costs, supplies, demands and conveyance capacities are turned
//! into a crisp multi-objective LP ([`transform`]), which is then scalarized
//! by a weighted sum or by distance to the ideal point ([`scalarize`]).

pub mod cli;
pub mod io;
pub mod lp;
pub mod model;
pub mod pareto;
pub mod scalarize;
pub mod transform;
pub mod uncertain;

pub use model::{DecisionTensor, Diagnostic, Dimensions, MmstpModel, ModelError, Route};
pub use pareto::{dominates, sweep, FrontierPoint};
pub use scalarize::{ideal_point, solve_distance, solve_weighted, IdealPoint, SolveError, SolveReport, WeightVector};
pub use transform::{transform, DeterministicModel};
pub use uncertain::{ConfidenceLevel, Family, UncertainValue};
