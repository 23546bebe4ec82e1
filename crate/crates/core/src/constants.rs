//! Physical constants, SI units. All unit conversion happens at config load;
//! everything downstream of [`crate::config`] is SI.

/// Reduced Planck constant, J s (2019 SI exact value).
pub const HBAR: f64 = 1.054571817e-34;

/// Bohr radius, m (CODATA 2018).
pub const BOHR_RADIUS: f64 = 5.29177210903e-11;

/// Mass of a ²³Na atom, kg.
pub const MASS_NA23: f64 = 3.81754e-26;

pub const NM: f64 = 1e-9;
pub const UM: f64 = 1e-6;
pub const MS: f64 = 1e-3;
