//! Cell electrostatics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{Cell, Rotation, PITCH_NM};
use crate::scalar::Real;

/// Elementary charge squared over `4 pi eps0`, in J nm.
const COULOMB_J_NM: f64 = 2.307_077_552e-19;

/// Physical and numerical parameters of the bistable engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub cell_size_nm: f64,
    pub samples: usize,
    pub convergence_tolerance: f64,
    pub radius_of_effect_nm: f64,
    pub relative_permittivity: f64,
    pub clock_high_j: f64,
    pub clock_low_j: f64,
    pub clock_amplitude_factor: f64,
    pub layer_separation_nm: f64,
    pub max_iterations_per_sample: usize,
    /// Distance of each quantum dot from the cell center along both axes.
    pub dot_offset_nm: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            cell_size_nm: 18.0,
            samples: 12800,
            convergence_tolerance: 0.001,
            radius_of_effect_nm: 65.0,
            relative_permittivity: 12.9,
            clock_high_j: 9.8e-22,
            clock_low_j: 3.8e-23,
            clock_amplitude_factor: 2.0,
            layer_separation_nm: 11.5,
            max_iterations_per_sample: 100,
            dot_offset_nm: 4.5,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(format!("sim config: {msg}")));
        if !(self.convergence_tolerance > 0.0) {
            return bad("convergence_tolerance must be positive");
        }
        if !(self.clock_low_j > 0.0 && self.clock_high_j > self.clock_low_j) {
            return bad("need clock_high_j > clock_low_j > 0");
        }
        if !(self.radius_of_effect_nm > PITCH_NM) {
            return bad("radius_of_effect_nm must exceed the grid pitch");
        }
        if !(self.relative_permittivity > 0.0) || !(self.layer_separation_nm > 0.0) {
            return bad("permittivity and layer separation must be positive");
        }
        if !(self.dot_offset_nm > 0.0 && 2.0 * self.dot_offset_nm < self.cell_size_nm) {
            return bad("dots must lie inside the cell");
        }
        if self.samples == 0 || self.max_iterations_per_sample == 0 {
            return bad("samples and max_iterations_per_sample must be nonzero");
        }
        if !(self.clock_amplitude_factor > 0.0) {
            return bad("clock_amplitude_factor must be positive");
        }
        Ok(())
    }
}

/// Dot positions relative to the center with the sign of their charge at
/// `P = +1`. Unrotated cells hold the electrons top-right and bottom-left;
/// rotated cells hold them north and south.
pub(crate) fn dots(rotation: Rotation, offset: f64) -> [(f64, f64, f64); 4] {
    match rotation {
        Rotation::Deg0 => [
            (offset, -offset, 1.0),
            (-offset, offset, 1.0),
            (-offset, -offset, -1.0),
            (offset, offset, -1.0),
        ],
        Rotation::Deg45 => {
            let r = offset * std::f64::consts::SQRT_2;
            [(0.0, -r, 1.0), (0.0, r, 1.0), (-r, 0.0, -1.0), (r, 0.0, -1.0)]
        }
    }
}

/// Energy cost of opposite over equal polarization between two cells.
///
/// Positive for cells that prefer to align, negative for cells that prefer
/// to invert, zero beyond the radius of effect.
pub fn kink_energy<T: Real>(ci: &Cell, cj: &Cell, config: &SimConfig) -> Result<T> {
    let dz = (ci.layer as f64 - cj.layer as f64) * config.layer_separation_nm;
    let (dx, dy) = (cj.x - ci.x, cj.y - ci.y);
    let center = (dx * dx + dy * dy + dz * dz).sqrt();
    if center < 1e-9 {
        return Err(Error::Simulation(format!("coincident cells at ({}, {})", ci.x, ci.y)));
    }
    if center > config.radius_of_effect_nm {
        return Ok(T::zero());
    }
    let (dx, dy, dz) = (T::of(dx), T::of(dy), T::of(dz));
    let mut sum = T::zero();
    for (xi, yi, si) in dots(ci.rotation, config.dot_offset_nm) {
        for (xj, yj, sj) in dots(cj.rotation, config.dot_offset_nm) {
            let ex = dx + T::of(xj - xi);
            let ey = dy + T::of(yj - yi);
            let d = (ex * ex + ey * ey + dz * dz).sqrt();
            sum = sum + T::of(si * sj) / d;
        }
    }
    // charges are e/2, so each product carries e^2/4
    let scale = T::of(COULOMB_J_NM / (4.0 * config.relative_permittivity));
    Ok(-T::of(2.0) * scale * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SimConfig::default().validate().unwrap();
        let bad = SimConfig { clock_low_j: 1e-21, ..SimConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn neighbor_signs() {
        let cfg = SimConfig::default();
        let o = Cell::new(0.0, 0.0, 0);
        let side: f64 = kink_energy(&o, &Cell::new(20.0, 0.0, 0), &cfg).unwrap();
        let diag: f64 = kink_energy(&o, &Cell::new(20.0, 20.0, 0), &cfg).unwrap();
        assert!(side > 0.0 && diag < 0.0);
        let far: f64 = kink_energy(&o, &Cell::new(70.0, 0.0, 0), &cfg).unwrap();
        assert_eq!(far, 0.0);
        assert!(kink_energy::<f64>(&o, &o.clone(), &cfg).is_err());
    }

    #[test]
    fn f32_tracks_f64() {
        let cfg = SimConfig::default();
        let (a, b) = (Cell::new(0.0, 0.0, 0), Cell::new(20.0, 20.0, 0));
        let hi: f64 = kink_energy(&a, &b, &cfg).unwrap();
        let lo: f32 = kink_energy(&a, &b, &cfg).unwrap();
        assert!(((lo as f64 - hi) / hi).abs() < 1e-4);
    }
}
