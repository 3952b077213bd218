use crate::error::{Error, Result};

/// A rectangular elevation grid, row-major with the northernmost row first.
#[derive(Clone, Debug, PartialEq)]
pub struct TerrainGrid {
    pub rows: usize,
    pub cols: usize,
    pub cell_size: f64,
    pub xllcorner: f64,
    pub yllcorner: f64,
    pub nodata_value: f64,
    /// Heights in meters. Masked cells hold `nodata_value`.
    pub heights: Vec<f64>,
    pub nodata: Vec<bool>,
}

impl TerrainGrid {
    /// Grid without missing cells, anchored at the origin.
    pub fn new(rows: usize, cols: usize, cell_size: f64, heights: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyGrid);
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::InvalidParameter(format!("cell size must be positive, got {cell_size}")));
        }
        if heights.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: heights.len() });
        }
        Ok(Self {
            rows,
            cols,
            cell_size,
            xllcorner: 0.0,
            yllcorner: 0.0,
            nodata_value: -9999.0,
            nodata: vec![false; heights.len()],
            heights,
        })
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn height(&self, row: usize, col: usize) -> Option<f64> {
        let i = self.index(row, col);
        (!self.nodata[i]).then_some(self.heights[i])
    }

    pub fn is_valid(&self, row: usize, col: usize) -> bool {
        !self.nodata[self.index(row, col)]
    }

    pub fn num_valid(&self) -> usize {
        self.nodata.iter().filter(|&&m| !m).count()
    }

    /// Marks a cell as missing.
    pub fn mask(&mut self, row: usize, col: usize) {
        let i = self.index(row, col);
        self.nodata[i] = true;
        self.heights[i] = self.nodata_value;
    }
}
