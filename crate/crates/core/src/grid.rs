//! Periodic grid arithmetic.
//!
//! The spatial grid Πₙ = {0, (2n)⁻¹, …, (2n−1)(2n)⁻¹} carries periodic
//! (mod 1) addition; the temporal grid Λₙ = {0, h, 2h, …} uses the time
//! step h = c(2n)⁻² with the CFL constant c ∈ (0, 1/2).
//!
//! Grid points are handled as integer indices internally and converted to
//! reals only at API boundaries, so dyadic nesting between levels and the
//! floor maps κₙ, ρₙ are exact.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Guard added to `t/h` before flooring so that times intended to lie on
/// the grid are not pushed one step down by representation error.
const FLOOR_GUARD: f64 = 1e-12;

/// One discretisation level: spatial grid Πₙ with 2n points and temporal
/// grid Λₙ with step h = c(2n)⁻².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    n: usize,
    c: f64,
    h: f64,
}

impl GridConfig {
    /// Builds the grid for a given n and CFL constant c ∈ (0, 1/2).
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("n must be at least 1".into()));
        }
        if !(c > 0.0 && c < 0.5) {
            return Err(Error::CflViolation { c });
        }
        let two_n = 2.0 * n as f64;
        let h = c / (two_n * two_n);
        Ok(Self { n, c, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Time step h = c(2n)⁻².
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of spatial points, 2n.
    pub fn num_space(&self) -> usize {
        2 * self.n
    }

    /// Spatial spacing (2n)⁻¹.
    pub fn spacing(&self) -> f64 {
        1.0 / (2.0 * self.n as f64)
    }

    /// Coordinate of the i-th gridpoint (indices taken mod 2n).
    pub fn point(&self, i: usize) -> f64 {
        (i % self.num_space()) as f64 * self.spacing()
    }

    /// All gridpoints of Πₙ in order.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_space()).map(move |i| self.point(i))
    }

    /// Periodic index addition on Πₙ.
    pub fn wrap_index(&self, i: isize) -> usize {
        let m = self.num_space() as isize;
        (((i % m) + m) % m) as usize
    }

    /// Index of the step whose left endpoint is κₙ(t); floor with guard.
    pub fn kappa_index(&self, t: f64) -> Result<u64> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok((t / self.h + FLOOR_GUARD).floor() as u64)
    }

    /// κₙ(t) = ⌊t h⁻¹⌋ h, the largest grid time not exceeding t.
    pub fn kappa(&self, t: f64) -> Result<f64> {
        Ok(self.kappa_index(t)? as f64 * self.h)
    }

    /// Index of the leftmost gridpoint at or below x ∈ [0, 1).
    pub fn rho_index(&self, x: f64) -> usize {
        debug_assert!((0.0..1.0).contains(&x));
        let i = (x * 2.0 * self.n as f64 + FLOOR_GUARD).floor() as usize;
        i.min(self.num_space() - 1)
    }

    /// ρₙ(x) = ⌊x 2n⌋ (2n)⁻¹, the leftmost gridpoint of Πₙ at or below x.
    pub fn rho(&self, x: f64) -> f64 {
        self.rho_index(x) as f64 * self.spacing()
    }

    /// Whether t (up to the floor guard) lies on Λₙ.
    pub fn is_grid_time(&self, t: f64) -> bool {
        if t < 0.0 {
            return false;
        }
        let k = (t / self.h + 0.5).floor();
        (t - k * self.h).abs() <= FLOOR_GUARD * (1.0 + t / self.h)
    }

    /// Converts t to a step count, rejecting off-grid times.
    pub fn time_to_steps(&self, t: f64) -> Result<u64> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        if !self.is_grid_time(t) {
            return Err(Error::OffGridTime { t, h: self.h });
        }
        Ok((t / self.h + 0.5).floor() as u64)
    }
}

/// A dyadically nested pair of levels with the same CFL constant.
///
/// Since h ∝ n⁻², refining space by 2ᵐ refines time by 4ᵐ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelPair {
    pub coarse: GridConfig,
    pub fine: GridConfig,
    pub spatial_ratio: usize,
    pub temporal_ratio: usize,
}

impl LevelPair {
    /// Validates nesting (fine.n = coarse.n · 2ᵐ, m ≥ 1, same c) and
    /// derives the ratios.
    pub fn new(coarse: GridConfig, fine: GridConfig) -> Result<Self> {
        if coarse.c() != fine.c() {
            return Err(Error::CflMismatch {
                coarse_c: coarse.c(),
                fine_c: fine.c(),
            });
        }
        let ratio = dyadic_ratio(coarse.n(), fine.n()).ok_or(Error::NonDyadic {
            coarse_n: coarse.n(),
            fine_n: fine.n(),
        })?;
        if ratio < 2 {
            return Err(Error::NonDyadic {
                coarse_n: coarse.n(),
                fine_n: fine.n(),
            });
        }
        Ok(Self {
            coarse,
            fine,
            spatial_ratio: ratio,
            temporal_ratio: ratio * ratio,
        })
    }
}

/// Returns fine_n / coarse_n when it is a power of two (including 1).
pub(crate) fn dyadic_ratio(coarse_n: usize, fine_n: usize) -> Option<usize> {
    if coarse_n == 0 || fine_n % coarse_n != 0 {
        return None;
    }
    let ratio = fine_n / coarse_n;
    if ratio.is_power_of_two() {
        Some(ratio)
    } else {
        None
    }
}
