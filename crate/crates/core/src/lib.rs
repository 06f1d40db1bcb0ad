//! Dynamic slacks-based-measure (SBM) data envelopment analysis.
//!
//! The crate evaluates decision-making units (DMUs) observed over several
//! periods, where inputs, outputs and carry-over links between consecutive
//! periods together determine an efficiency score. On top of the exact
//! per-DMU evaluation it offers:
//!
//! * a partition heuristic that evaluates each DMU against random classes of
//!   its peers and averages the class scores,
//! * k-means grading of the resulting scores with silhouette-based choice of
//!   the number of grades,
//! * a sensitivity report listing, per branch, the change in each variable
//!   needed to match the worst member of the next-better grade.
//!
//! All linear programs are solved by the built-in dense two-phase simplex in
//! [`lp`].

pub mod clustering;
pub mod lp;
pub mod panel_data;
pub mod partition;
pub mod sbm;
pub mod sensitivity;

mod seed;

pub use clustering::{ClusterModel, Grading, KSelection};
pub use lp::{LinearProgram, LpSolution, LpStatus, Sense, SolverOptions};
pub use panel_data::{GeneratorSpec, PanelDataset, VariableRole};
pub use partition::{HeuristicResult, PartitionPlan};
pub use sbm::{EfficiencyResult, RankedResult, SbmConfig, Variant};
pub use sensitivity::{Delta, SensitivityReport};
