//! Files, rendering, validation and benchmarking around
//! [`dubins_fleet_core`].

pub mod bench;
pub mod demo;
pub mod exec;
pub mod files;
pub mod svg;
pub mod validate;

