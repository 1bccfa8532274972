//! Four-phase clock programs.
//!
//! A zone's clock level runs from 0 (latched, `clock_low`) to 1 (relaxed,
//! `clock_high`). Zone `k` lags zone `k - 1` by a quarter cycle.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockScheme {
    #[default]
    Landauer,
    Bennett,
}

impl std::str::FromStr for ClockScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "landauer" => Ok(ClockScheme::Landauer),
            "bennett" => Ok(ClockScheme::Bennett),
            other => Err(format!("unknown clock scheme `{other}` (expected landauer or bennett)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Switch,
    Hold,
    Release,
    Relax,
}

/// Slots per Bennett cycle: four switch slots, a shared hold, four release slots.
pub const BENNETT_SLOTS: usize = 9;

/// Highest zone a Bennett program can latch.
pub const BENNETT_MAX_ZONE: u8 = 3;

/// Phase of each zone in each Bennett slot. Zone `k` switches in slot `k`,
/// holds while every later zone computes, and releases in slot `8 - k`.
pub fn bennett_schedule() -> [[Phase; BENNETT_SLOTS]; 4] {
    let mut table = [[Phase::Relax; BENNETT_SLOTS]; 4];
    for (k, row) in table.iter_mut().enumerate() {
        for (slot, phase) in row.iter_mut().enumerate() {
            *phase = if slot < k || slot > 8 - k {
                Phase::Relax
            } else if slot == k {
                Phase::Switch
            } else if slot == 8 - k {
                Phase::Release
            } else {
                Phase::Hold
            };
        }
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockProgram {
    pub scheme: ClockScheme,
    pub samples_per_cycle: usize,
    /// Scales the cosine ramp; values above 1 flatten the plateaus.
    pub amplitude: f64,
}

impl ClockProgram {
    pub fn new(scheme: ClockScheme, samples_per_cycle: usize, amplitude: f64) -> Self {
        Self { scheme, samples_per_cycle, amplitude }
    }

    fn ramp(&self, c: f64) -> f64 {
        (0.5 + self.amplitude * 0.5 * c).clamp(0.0, 1.0)
    }

    fn landauer_angle(&self, zone: u8, sample: usize) -> f64 {
        let t = (sample % self.samples_per_cycle) as f64 / self.samples_per_cycle as f64;
        (TAU * t - zone as f64 * FRAC_PI_2).rem_euclid(TAU)
    }

    fn bennett_slot(&self, sample: usize) -> (usize, f64) {
        let s = (sample % self.samples_per_cycle) * BENNETT_SLOTS;
        let slot = s / self.samples_per_cycle;
        (slot, (s % self.samples_per_cycle) as f64 / self.samples_per_cycle as f64)
    }

    pub fn phase(&self, zone: u8, sample: usize) -> Phase {
        match self.scheme {
            ClockScheme::Landauer => {
                match (self.landauer_angle(zone, sample) / FRAC_PI_2) as usize {
                    0 => Phase::Switch,
                    1 => Phase::Hold,
                    2 => Phase::Release,
                    _ => Phase::Relax,
                }
            }
            ClockScheme::Bennett => {
                let (slot, _) = self.bennett_slot(sample);
                bennett_schedule()[(zone & 3) as usize][slot]
            }
        }
    }

    /// Clock level in `[0, 1]`: 0 latches, 1 relaxes.
    pub fn level(&self, zone: u8, sample: usize) -> f64 {
        match self.scheme {
            ClockScheme::Landauer => self.ramp((self.landauer_angle(zone, sample) + FRAC_PI_4).cos()),
            ClockScheme::Bennett => {
                let (slot, u) = self.bennett_slot(sample);
                match bennett_schedule()[(zone & 3) as usize][slot] {
                    Phase::Switch => self.ramp((PI * u).cos()),
                    Phase::Hold => 0.0,
                    Phase::Release => self.ramp(-(PI * u).cos()),
                    Phase::Relax => 1.0,
                }
            }
        }
    }

    /// Offset, from the start of a vector's window, of the last sample in
    /// which a cell at pipeline index `index` is still holding.
    pub fn hold_end(&self, index: usize) -> usize {
        let spc = self.samples_per_cycle;
        match self.scheme {
            ClockScheme::Landauer => (index + 2) * spc / 4 - 1,
            ClockScheme::Bennett => ((BENNETT_SLOTS - 1 - index) * spc).div_ceil(BENNETT_SLOTS) - 1,
        }
    }
}
