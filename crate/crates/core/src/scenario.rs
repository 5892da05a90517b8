//! Scenario files and presets.
//!
//! A scenario is a TOML document. Every key is optional; anything missing is
//! taken from the preset (`case1` unless the file or command line names
//! another). Unknown keys are rejected.
//!
//! ```toml
//! preset = "case2"
//! protocols = ["meecda", "eecda-approx"]
//! seeds = [0, 1, 2, 3]
//! out = "results/case2"
//! max_rounds = 100000
//! area_side = 100.0
//! bs = [50.0, 50.0]
//! max_sleep_rounds = 8
//!
//! [heterogeneity]
//! n = 100
//! m = 0.5
//! m0 = 0.4
//! alpha = 1.5
//! beta = 3.0
//! e0 = 0.5
//! p_opt = 0.1
//!
//! [radio]
//! e_elec = 5e-9
//! eps_fs = 1e-11
//! eps_mp = 1.3e-15
//! e_da = 5e-9
//! packet_bits = 4000
//! d0_override = 70.0
//! ```
//!
//! Precedence is command-line flags, then the file, then the preset.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::engine::SimulationConfig;
use crate::error::{Error, Result};
use crate::heterogeneity::HeterogeneityConfig;
use crate::protocol::ProtocolKind;

pub const PRESETS: [&str; 2] = ["case1", "case2"];
pub const DEFAULT_OUT: &str = "results";

pub fn preset(name: &str) -> Result<SimulationConfig> {
    match name {
        "case1" => Ok(SimulationConfig::case1(ProtocolKind::Meecda, 0)),
        "case2" => Ok(SimulationConfig::case2(ProtocolKind::Meecda, 0)),
        other => Err(Error::config(
            "preset",
            format!("unknown preset `{other}` (expected one of {})", PRESETS.join(", ")),
        )),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub preset: Option<String>,
    pub protocols: Option<Vec<String>>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub max_rounds: Option<u64>,
    pub area_side: Option<f64>,
    pub bs: Option<[f64; 2]>,
    pub max_sleep_rounds: Option<u32>,
    pub heterogeneity: Option<HeterogeneityFile>,
    pub radio: Option<RadioFile>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeterogeneityFile {
    pub n: Option<usize>,
    pub m: Option<f64>,
    pub m0: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub e0: Option<f64>,
    pub p_opt: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioFile {
    pub e_elec: Option<f64>,
    pub eps_fs: Option<f64>,
    pub eps_mp: Option<f64>,
    pub e_da: Option<f64>,
    pub packet_bits: Option<u64>,
    pub d0_override: Option<f64>,
}

impl ScenarioFile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Scenario {
            path: origin.to_path_buf(),
            reason: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

/// Command-line values that take precedence over the scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<String>,
    pub protocols: Vec<ProtocolKind>,
    pub seed: Option<u64>,
    /// Expands to seeds `0..n`.
    pub seed_count: Option<u64>,
    pub max_rounds: Option<u64>,
    pub out: Option<PathBuf>,
}

/// A fully resolved, validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Base configuration; `protocol` and `seed` are the first sweep entries.
    pub config: SimulationConfig,
    pub protocols: Vec<ProtocolKind>,
    /// True when the protocol list came from the file or the command line.
    pub protocols_explicit: bool,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
}

impl Scenario {
    pub fn resolve(file: Option<&ScenarioFile>, flags: &Overrides) -> Result<Self> {
        let empty = ScenarioFile::default();
        let file = file.unwrap_or(&empty);
        let preset_name = flags
            .preset
            .as_deref()
            .or(file.preset.as_deref())
            .unwrap_or("case1");
        let mut cfg = preset(preset_name)?;

        if let Some(h) = &file.heterogeneity {
            apply_het(&mut cfg.het, h);
        }
        if let Some(r) = &file.radio {
            let radio = &mut cfg.radio;
            set(&mut radio.e_elec, r.e_elec);
            set(&mut radio.eps_fs, r.eps_fs);
            set(&mut radio.eps_mp, r.eps_mp);
            set(&mut radio.e_da, r.e_da);
            set(&mut radio.packet_bits, r.packet_bits);
            if r.d0_override.is_some() {
                radio.d0_override = r.d0_override;
            }
        }
        set(&mut cfg.max_rounds, file.max_rounds);
        set(&mut cfg.area_side, file.area_side);
        set(&mut cfg.max_sleep_rounds, file.max_sleep_rounds);
        if let Some([x, y]) = file.bs {
            cfg.bs_pos = crate::node::Point::new(x, y);
        }
        set(&mut cfg.max_rounds, flags.max_rounds);

        let mut protocols_explicit = true;
        let protocols = if !flags.protocols.is_empty() {
            flags.protocols.clone()
        } else if let Some(names) = &file.protocols {
            names
                .iter()
                .map(|n| {
                    n.parse().map_err(|_| {
                        Error::config("protocols", format!("unknown protocol `{n}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            protocols_explicit = false;
            vec![ProtocolKind::Meecda, ProtocolKind::EecdaApprox]
        };
        if protocols.is_empty() {
            return Err(Error::config("protocols", "list is empty"));
        }

        let seeds = if let Some(s) = flags.seed {
            vec![s]
        } else if let Some(n) = flags.seed_count {
            (0..n).collect()
        } else {
            file.seeds.clone().unwrap_or_else(|| vec![0])
        };
        if seeds.is_empty() {
            return Err(Error::config("seeds", "list is empty"));
        }

        cfg.protocol = protocols[0];
        cfg.seed = seeds[0];
        cfg.validate()?;

        let out = flags
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        Ok(Scenario {
            config: cfg,
            protocols,
            protocols_explicit,
            seeds,
            out,
        })
    }
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn apply_het(het: &mut HeterogeneityConfig, h: &HeterogeneityFile) {
    set(&mut het.n, h.n);
    set(&mut het.m, h.m);
    set(&mut het.m0, h.m0);
    set(&mut het.alpha, h.alpha);
    set(&mut het.beta, h.beta);
    set(&mut het.e0, h.e0);
    set(&mut het.p_opt, h.p_opt);
}
