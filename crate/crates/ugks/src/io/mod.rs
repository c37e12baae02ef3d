//! Configuration parsing, CSV serialization, and reference comparison.

mod compare;
mod config;
mod csv;

pub use compare::{compare_curves, compare_reference, Norm, ProfileColumn};
pub use config::{
    parse_config, write_config, CollisionMode, Experiment, RunConfig, SideState,
};
pub use csv::{
    read_profile_csv, read_slice_csv, write_distribution_csv, write_profile_csv, write_slice_csv,
    ProfileRecord,
};
