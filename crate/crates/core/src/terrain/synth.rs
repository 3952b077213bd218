use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::TerrainGrid;
use crate::error::{Error, Result};
use crate::gp::Kernel;

/// Largest grid for which exact prior samples are drawn.
pub const GP_SAMPLE_LIMIT: usize = 1600;

/// A Gaussian bump (positive amplitude) or dip (negative amplitude).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feature {
    /// Center as fractional `(row, col)`.
    pub center: (f64, f64),
    /// Peak height above (or depth below) the plane, meters.
    pub amplitude: f64,
    /// Standard deviation of the Gaussian profile, in cells.
    pub radius: f64,
}

impl Feature {
    fn at(&self, row: f64, col: f64) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        let d2 = (row - self.center.0).powi(2) + (col - self.center.1).powi(2);
        self.amplitude * (-d2 / (2.0 * self.radius * self.radius)).exp()
    }
}

/// A tilted plane with a hill and a crater.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CraterHillParams {
    pub base_height: f64,
    /// Height gain per meter towards increasing rows and columns.
    pub slope: (f64, f64),
    pub hill: Feature,
    /// `amplitude` is the crater depth (positive values dig down).
    pub crater: Feature,
}

impl CraterHillParams {
    /// Hill in the upper-left and crater in the lower-right quadrant, both
    /// too steep to climb at one-cell resolution.
    pub fn default_for(rows: usize, cols: usize) -> Self {
        let (r, c) = (rows as f64, cols as f64);
        let scale = r.min(c);
        Self {
            base_height: 0.0,
            slope: (0.0, 0.0),
            hill: Feature { center: (0.25 * r, 0.25 * c), amplitude: 8.0, radius: 0.12 * scale },
            crater: Feature { center: (0.7 * r, 0.7 * c), amplitude: 10.0, radius: 0.12 * scale },
        }
    }
}

/// How to generate a synthetic terrain.
#[derive(Clone, Copy, Debug)]
pub enum TerrainKind {
    /// An exact draw from the GP prior with the given kernel.
    GpSample {
        kernel: Kernel,
        seed: u64,
    },
    CraterHill {
        params: CraterHillParams,
    },
}

/// Generates a synthetic elevation grid.
pub fn synth_terrain(kind: &TerrainKind, rows: usize, cols: usize, cell_size: f64) -> Result<TerrainGrid> {
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyGrid);
    }
    let heights = match kind {
        TerrainKind::CraterHill { params } => {
            let mut heights = Vec::with_capacity(rows * cols);
            for r in 0..rows {
                for c in 0..cols {
                    let (rf, cf) = (r as f64, c as f64);
                    let plane = params.base_height + cell_size * (params.slope.0 * rf + params.slope.1 * cf);
                    heights.push(plane + params.hill.at(rf, cf) - params.crater.at(rf, cf));
                }
            }
            heights
        }
        TerrainKind::GpSample { kernel, seed } => gp_sample(kernel, *seed, rows, cols, cell_size)?,
    };
    TerrainGrid::new(rows, cols, cell_size, heights)
}

fn gp_sample(kernel: &Kernel, seed: u64, rows: usize, cols: usize, cell_size: f64) -> Result<Vec<f64>> {
    let n = rows * cols;
    if n > GP_SAMPLE_LIMIT {
        return Err(Error::SizeLimit { cells: n, limit: GP_SAMPLE_LIMIT });
    }
    let coord = |i: usize| ((i / cols) as f64, (i % cols) as f64);
    let jitter = 1e-8 * kernel.variance();
    // dense lower Cholesky factor, row-major
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        let (ri, ci) = coord(i);
        for j in 0..=i {
            let (rj, cj) = coord(j);
            let d = cell_size * ((ri - rj).powi(2) + (ci - cj).powi(2)).sqrt();
            let mut sum = kernel.eval(d) + if i == j { jitter } else { 0.0 };
            sum -= (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            if i == j {
                if !(sum > 0.0) {
                    return Err(Error::Singular { jitter });
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    Ok((0..n).map(|i| (0..=i).map(|k| l[i * n + k] * z[k]).sum()).collect())
}
