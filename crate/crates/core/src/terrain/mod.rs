//! Terrain-backed environments.
//!
//! The agent moves on a 4-connected grid of terrain cells. Safety is a
//! property of transitions: moving from `s` to `s'` is safe when the height
//! difference `H(s) - H(s')` is at least `h = -d tan(α)`, i.e. the climb is
//! not steeper than the slope limit `α`. Transitions become action-states of
//! the augmented MDP so that the explorer can treat them as ordinary states.

mod environment;
mod esri;
mod grid;
mod synth;

pub use environment::{
    build_terrain_environment, build_terrain_environment_with_threshold, difference_posterior,
    height_gp_to_difference_bands, HeightBelief, TerrainEnvironment, TerrainSafetySpec, ORIGINAL_STATE_MARGIN,
};
pub use esri::{format_esri_ascii, load_esri_ascii, parse_esri_ascii, write_esri_ascii};
pub use grid::TerrainGrid;
pub use synth::{synth_terrain, CraterHillParams, Feature, TerrainKind, GP_SAMPLE_LIMIT};
