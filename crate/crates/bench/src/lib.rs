//! Shared fixtures for the benchmarks.

use safemdp::terrain::{
    build_terrain_environment, synth_terrain, CraterHillParams, TerrainEnvironment, TerrainKind, TerrainSafetySpec,
};

/// Square crater-and-hill terrain with default feature placement.
pub fn crater_terrain(size: usize) -> TerrainEnvironment {
    let mut params = CraterHillParams::default_for(size, size);
    let radius = size as f64 * 0.3;
    params.hill.radius = radius;
    params.crater.radius = radius;
    params.hill.amplitude = radius;
    params.crater.amplitude = radius;
    let grid = synth_terrain(&TerrainKind::CraterHill { params }, size, size, 1.0).expect("valid terrain");
    build_terrain_environment(grid, &TerrainSafetySpec::default(), 0.075, 0).expect("valid environment")
}
