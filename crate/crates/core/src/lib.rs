//! Two-dimensional demand bin packing.
//!
//! Tasks are `width x height` demands over consecutive time slots of a bin
//! with `horizon` slots and per-slot `capacity`. Unlike geometric packing, a
//! task only needs its slots to have spare capacity; it need not sit at one
//! common height.
//!
//! Modules:
//! - [`model`]: tasks, instances, allocations, load profiles and verification
//! - [`primitives`]: first fit on sorted profiles, NFDH, two-pile strips
//! - [`bp1d`]: one-dimensional bin packing (FFD, exact, APTAS, MKP)
//! - [`solve`]: the short-task, square and general approximation algorithms
//! - [`oracle`]: exact search used to certify the approximations
//! - [`generators`]: reductions, fixtures and seeded random instances

pub mod bp1d;
pub mod generators;
pub mod model;
pub mod oracle;
pub mod primitives;
pub mod solve;

pub use model::{
    area_lower_bound, verify_solution, Bin, BinTag, Instance, ModelError, Placement, Rational,
    Solution, StructuredSolution, Task, TaskId,
};
