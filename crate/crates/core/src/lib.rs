//! Synchronized, conflict-free path planning for fleets of constant-speed
//! fixed-wing aircraft modelled as Dubins vehicles.
//!
//! The planner fixes a common flight time, enumerates for every aircraft the
//! Dubins-type paths whose length matches it ([`fit`]), checks every pair of
//! candidate paths for loss of separation ([`separation`]) and searches for a
//! conflict-free combination ([`planner`]). Flight times are refined by
//! successive resampling until the requested resolution is reached.
//!
//! The crate is `no_std` and only needs `alloc`. Parallelism and wall-clock
//! time are injected through the [`exec::Executor`] and [`exec::Clock`]
//! traits.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dubins;
pub mod exec;
pub mod fit;
pub mod interval;
pub mod math;
pub mod planner;
pub mod scenario;
pub mod separation;

pub use dubins::{
    build_word, shortest_dubins, DubinsError, Extension, FleetPath, PathPrimitive, PathWord, Pose,
    PrimitiveKind, VehicleParams, WordTag,
};
pub use fit::{brent_minimize, fit_dubins, fit_extension, fit_radius, FitTarget};
pub use math::Complex;

pub use separation::{are_separated, is_pair_separated, spatial_separation, temporal_separation, TimedLeg};
pub use planner::{
    build_candidates, build_conflict_matrix, initial_bounds, plan_fleet, plan_fleet_with, resample, solve_assignment,
    wind_shifted_end, ConflictMatrix, PlanError, PlanResult, PlanStatus, PlannerConfig, Scenario, TimeQueue,
};
pub use scenario::{make_formation, make_random_states, make_scenario, FormationKind, FormationSpec, ScenarioFamily};
