//! First-order radio energy model and the analytical per-round energetics
//! of a clustered network.
//!
//! Transmission cost has an electronics term plus an amplifier term that is
//! quadratic in distance below the crossover distance `d0` (free space) and
//! quartic at or above it (multipath). Reception costs electronics only.
//!
//! The `*_round_energy` and `optimal_*` functions are closed-form planning
//! formulas. They always use the free-space amplifier term. The simulator
//! never uses them for accounting; it charges every transmission through
//! [`tx_energy`], which branches on `d0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radio hardware constants. All energies are in joules, distances in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    /// Transmitter/receiver electronics, J/bit.
    pub e_elec: f64,
    /// Free-space amplifier coefficient, J/bit/m².
    pub eps_fs: f64,
    /// Multipath amplifier coefficient, J/bit/m⁴.
    pub eps_mp: f64,
    /// Data aggregation cost, J/bit/signal.
    pub e_da: f64,
    /// Fixed crossover distance. When `None` it is derived from the amplifier coefficients.
    pub d0_override: Option<f64>,
    /// Message length in bits.
    pub packet_bits: u64,
}

impl RadioParams {
    /// Table constants with `d0` derived from the amplifier coefficients (≈ 87.71 m).
    pub const fn standard() -> Self {
        RadioParams {
            e_elec: 5e-9,
            eps_fs: 10e-12,
            eps_mp: 0.0013e-12,
            e_da: 5e-9,
            d0_override: None,
            packet_bits: 4000,
        }
    }

    /// Same constants but with the tabulated 70 m crossover distance.
    pub const fn standard_fixed_d0() -> Self {
        RadioParams {
            d0_override: Some(70.0),
            ..Self::standard()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("radio.e_elec", self.e_elec),
            ("radio.eps_fs", self.eps_fs),
            ("radio.eps_mp", self.eps_mp),
            ("radio.e_da", self.e_da),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(key, format!("must be finite and > 0, got {v}")));
            }
        }
        if let Some(d0) = self.d0_override {
            if !(d0.is_finite() && d0 > 0.0) {
                return Err(Error::config(
                    "radio.d0_override",
                    format!("must be finite and > 0, got {d0}"),
                ));
            }
        }
        if self.packet_bits == 0 {
            return Err(Error::config("radio.packet_bits", "must be >= 1"));
        }
        Ok(())
    }

    /// Energy to transmit one packet over `d` meters. Distances come from
    /// node geometry and are never negative.
    pub fn tx_packet(&self, d: f64) -> f64 {
        debug_assert!(d >= 0.0);
        amplified(self, self.packet_bits as f64, d)
    }

    pub fn rx_packet(&self) -> f64 {
        rx_energy(self, self.packet_bits)
    }

    /// Aggregation cost for `signals` packets of `packet_bits` each.
    pub fn aggregate(&self, signals: u64) -> f64 {
        self.e_da * (self.packet_bits * signals) as f64
    }
}

impl Default for RadioParams {
    fn default() -> Self {
        Self::standard()
    }
}

pub fn crossover_distance(p: &RadioParams) -> f64 {
    p.d0_override
        .unwrap_or_else(|| (p.eps_fs / p.eps_mp).sqrt())
}

fn amplified(p: &RadioParams, bits: f64, d: f64) -> f64 {
    let electronics = bits * p.e_elec;
    if d < crossover_distance(p) {
        electronics + bits * p.eps_fs * d * d
    } else {
        electronics + bits * p.eps_mp * d * d * d * d
    }
}

/// Energy to transmit `bits` over `d` meters.
pub fn tx_energy(p: &RadioParams, bits: u64, d: f64) -> Result<f64> {
    if d.is_nan() || d < 0.0 {
        return Err(Error::Domain(format!("distance must be >= 0, got {d}")));
    }
    Ok(amplified(p, bits as f64, d))
}

pub fn rx_energy(p: &RadioParams, bits: u64) -> f64 {
    bits as f64 * p.e_elec
}

/// Energy a cluster head spends in one round when `n` nodes are split into
/// `k` equal clusters and the head sits `d_bs` from the base station.
pub fn ch_round_energy(p: &RadioParams, n: u64, k: u64, d_bs: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("cluster count k must be >= 1".into()));
    }
    if d_bs < 0.0 {
        return Err(Error::Domain(format!("distance must be >= 0, got {d_bs}")));
    }
    let l = p.packet_bits as f64;
    let per_cluster = n as f64 / k as f64;
    Ok((per_cluster - 1.0) * l * p.e_elec
        + per_cluster * l * p.e_da
        + l * p.e_elec
        + l * p.eps_fs * d_bs * d_bs)
}

pub fn non_ch_round_energy(p: &RadioParams, d_ch: f64) -> Result<f64> {
    if d_ch < 0.0 {
        return Err(Error::Domain(format!("distance must be >= 0, got {d_ch}")));
    }
    let l = p.packet_bits as f64;
    Ok(l * p.e_elec + l * p.eps_fs * d_ch * d_ch)
}

/// Whole-network energy per round: `k` heads at `d_bs` from the base station,
/// `n` nodes each `d_ch` from their head.
pub fn total_round_energy(p: &RadioParams, n: u64, k: u64, d_bs: f64, d_ch: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("cluster count k must be >= 1".into()));
    }
    let l = p.packet_bits as f64;
    let (n, k) = (n as f64, k as f64);
    Ok(l * (2.0 * n * p.e_elec + n * p.e_da + p.eps_fs * (k * d_bs * d_bs + n * d_ch * d_ch)))
}

/// Energy-minimising cluster count for `n` nodes in an `area_side`² field.
/// Returned unrounded.
pub fn optimal_clusters(p: &RadioParams, n: u64, area_side: f64, d_bs: f64) -> Result<f64> {
    if !(d_bs > 0.0) {
        return Err(Error::Domain(format!("base-station distance must be > 0, got {d_bs}")));
    }
    let n = n as f64;
    Ok(n.sqrt() / (2.0 * std::f64::consts::PI).sqrt() * (p.eps_fs / p.eps_mp).sqrt() * area_side
        / (d_bs * d_bs))
}

pub fn optimal_probability(k_opt: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("node count must be >= 1".into()));
    }
    Ok((k_opt / n as f64).clamp(0.0, 1.0))
}
