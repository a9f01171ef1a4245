//! Real-valued functions on the spatial grid Πₙ.

use crate::error::{Error, Result};
use crate::grid::GridConfig;

/// A snapshot of a real field on Πₙ (solution state, initial condition,
/// noise slice, OU state).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    grid: GridConfig,
    values: Vec<f64>,
}

impl FieldState {
    pub fn zero(grid: GridConfig) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.num_space()],
        }
    }

    /// Samples f at the gridpoints of Πₙ.
    pub fn from_fn(grid: GridConfig, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.points().map(f).collect(),
        }
    }

    pub fn from_values(grid: GridConfig, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_space() {
            return Err(Error::DimensionMismatch {
                expected: grid.num_space(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> GridConfig {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at gridpoint index i (periodic).
    pub fn get(&self, i: isize) -> f64 {
        self.values[self.grid.wrap_index(i)]
    }

    /// Checks that another field lives on the same grid.
    pub fn check_same_grid(&self, other: &FieldState) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &FieldState) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}
