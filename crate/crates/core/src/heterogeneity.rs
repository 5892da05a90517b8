//! Three-class energy heterogeneity: normal, advanced and super nodes.
//!
//! `m` is the fraction of *non-normal* nodes and `m0` the share of those
//! that are super nodes. With `D = 1 + m·(α + m0·(β − α))` the network holds
//! `D` times the energy of an all-normal network, and the per-class election
//! probabilities are `p_opt/D`, `p_opt·(1+α)/D` and `p_opt·(1+β)/D`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeClass {
    Normal,
    Advanced,
    Super,
}

impl NodeClass {
    pub const ALL: [NodeClass; 3] = [NodeClass::Normal, NodeClass::Advanced, NodeClass::Super];

    /// Advanced and super nodes may forward for normal cluster heads.
    pub fn can_relay(self) -> bool {
        !matches!(self, NodeClass::Normal)
    }
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            NodeClass::Normal => "normal",
            NodeClass::Advanced => "advanced",
            NodeClass::Super => "super",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeterogeneityConfig {
    pub n: usize,
    /// Fraction of heterogeneous (advanced + super) nodes.
    pub m: f64,
    /// Fraction of heterogeneous nodes that are super nodes.
    pub m0: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Initial energy of a normal node, J.
    pub e0: f64,
    pub p_opt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub normal: usize,
    pub advanced: usize,
    pub super_: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.normal + self.advanced + self.super_
    }

    pub fn of(&self, class: NodeClass) -> usize {
        match class {
            NodeClass::Normal => self.normal,
            NodeClass::Advanced => self.advanced,
            NodeClass::Super => self.super_,
        }
    }
}

/// Rounds to the nearest integer with halves going up. The small slack keeps
/// values like `10 · 2.05` on the intended side of the half.
pub(crate) fn round_half_up(x: f64) -> f64 {
    (x + 0.5 + 1e-9).floor()
}

impl HeterogeneityConfig {
    /// 100 nodes, m = 0.5, m0 = 0.4, α = 1, β = 2, E0 = 0.5 J, p_opt = 0.1.
    pub const fn case1() -> Self {
        HeterogeneityConfig {
            n: 100,
            m: 0.5,
            m0: 0.4,
            alpha: 1.0,
            beta: 2.0,
            e0: 0.5,
            p_opt: 0.1,
        }
    }

    /// As [`case1`](Self::case1) with α = 1.5, β = 3.
    pub const fn case2() -> Self {
        HeterogeneityConfig {
            alpha: 1.5,
            beta: 3.0,
            ..Self::case1()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |key: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::config(key, format!("must lie in [0, 1], got {v}")))
            }
        };
        unit("heterogeneity.m", self.m)?;
        unit("heterogeneity.m0", self.m0)?;
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::config(
                "heterogeneity.alpha",
                format!("must be finite and >= 0, got {}", self.alpha),
            ));
        }
        if !(self.beta >= self.alpha && self.beta.is_finite()) {
            return Err(Error::config(
                "heterogeneity.beta",
                format!("must be finite and >= alpha ({}), got {}", self.alpha, self.beta),
            ));
        }
        if !(self.e0 > 0.0 && self.e0.is_finite()) {
            return Err(Error::config(
                "heterogeneity.e0",
                format!("must be finite and > 0, got {}", self.e0),
            ));
        }
        if !(self.p_opt > 0.0 && self.p_opt < 1.0) {
            return Err(Error::config(
                "heterogeneity.p_opt",
                format!("must lie in (0, 1), got {}", self.p_opt),
            ));
        }
        class_counts(self)?;
        for class in NodeClass::ALL {
            weighted_probability(self, class)?;
        }
        Ok(())
    }

    /// Energy multiplier of the whole network relative to an all-normal one.
    pub fn energy_factor(&self) -> f64 {
        1.0 + self.m * (self.alpha + self.m0 * (self.beta - self.alpha))
    }
}

/// Splits `n` into class sizes: super first, then advanced, normal takes the rest.
pub fn class_counts(c: &HeterogeneityConfig) -> Result<ClassCounts> {
    let n = c.n as f64;
    let super_ = round_half_up(n * c.m * c.m0);
    let heterogeneous = round_half_up(n * c.m);
    let advanced = heterogeneous - super_;
    let normal = n - heterogeneous;
    if super_ < 0.0 || advanced < 0.0 || normal < 0.0 {
        return Err(Error::config(
            "heterogeneity",
            format!("class counts ({normal}, {advanced}, {super_}) must be nonnegative"),
        ));
    }
    Ok(ClassCounts {
        normal: normal as usize,
        advanced: advanced as usize,
        super_: super_ as usize,
    })
}

pub fn initial_energy(c: &HeterogeneityConfig, class: NodeClass) -> f64 {
    match class {
        NodeClass::Normal => c.e0,
        NodeClass::Advanced => c.e0 * (1.0 + c.alpha),
        NodeClass::Super => c.e0 * (1.0 + c.beta),
    }
}

/// Closed-form total initial energy, `n · e0 · D`.
pub fn total_initial_energy(c: &HeterogeneityConfig) -> f64 {
    c.n as f64 * c.e0 * c.energy_factor()
}

/// Heterogeneity-scaled epoch, `(1/p_opt) · D`, rounded half up.
pub fn epoch_length(c: &HeterogeneityConfig) -> u64 {
    round_half_up(c.energy_factor() / c.p_opt) as u64
}

pub fn weighted_probability(c: &HeterogeneityConfig, class: NodeClass) -> Result<f64> {
    let multiplier = match class {
        NodeClass::Normal => 1.0,
        NodeClass::Advanced => 1.0 + c.alpha,
        NodeClass::Super => 1.0 + c.beta,
    };
    let p = c.p_opt * multiplier / c.energy_factor();
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::config(
            "heterogeneity.p_opt",
            format!("{class} election probability {p} is outside (0, 1)"),
        ));
    }
    Ok(p)
}

/// Number of rounds in a node's eligibility window, `round(1/p)`.
pub fn eligibility_window(p: f64) -> u64 {
    (round_half_up(1.0 / p) as u64).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn counts(c: &HeterogeneityConfig) -> (usize, usize, usize) {
        let k = class_counts(c).unwrap();
        (k.normal, k.advanced, k.super_)
    }

    #[test]
    fn case_population_splits() {
        assert_eq!(counts(&HeterogeneityConfig::case1()), (50, 30, 20));
        let homogeneous = HeterogeneityConfig {
            m: 0.0,
            ..HeterogeneityConfig::case1()
        };
        assert_eq!(counts(&homogeneous), (100, 0, 0));
        let small = HeterogeneityConfig {
            n: 10,
            ..HeterogeneityConfig::case1()
        };
        assert_eq!(counts(&small), (5, 3, 2));
    }

    #[test]
    fn odd_sizes_keep_total() {
        for n in 0..200 {
            let c = HeterogeneityConfig {
                n,
                m: 0.37,
                m0: 0.55,
                ..HeterogeneityConfig::case1()
            };
            assert_eq!(class_counts(&c).unwrap().total(), n);
        }
    }

    #[test]
    fn class_energies() {
        let c1 = HeterogeneityConfig::case1();
        assert_eq!(initial_energy(&c1, NodeClass::Normal), 0.5);
        assert_eq!(initial_energy(&c1, NodeClass::Advanced), 1.0);
        assert_eq!(initial_energy(&HeterogeneityConfig::case2(), NodeClass::Super), 2.0);
        let flat = HeterogeneityConfig {
            alpha: 0.0,
            beta: 0.0,
            ..c1
        };
        for class in NodeClass::ALL {
            assert_eq!(initial_energy(&flat, class), 0.5);
        }
    }

    #[test]
    fn network_energy() {
        assert!(rel(total_initial_energy(&HeterogeneityConfig::case1()), 85.0) < 1e-12);
        assert!(rel(total_initial_energy(&HeterogeneityConfig::case2()), 102.5) < 1e-12);
        let flat = HeterogeneityConfig {
            m: 0.0,
            ..HeterogeneityConfig::case1()
        };
        assert!(rel(total_initial_energy(&flat), 50.0) < 1e-12);
    }

    #[test]
    fn closed_form_matches_per_node_sum() {
        for c in [HeterogeneityConfig::case1(), HeterogeneityConfig::case2()] {
            let k = class_counts(&c).unwrap();
            let sum: f64 = NodeClass::ALL
                .iter()
                .map(|&cl| k.of(cl) as f64 * initial_energy(&c, cl))
                .sum();
            assert!(rel(sum, total_initial_energy(&c)) < 1e-12);
        }
    }

    #[test]
    fn epochs() {
        assert_eq!(epoch_length(&HeterogeneityConfig::case1()), 17);
        assert_eq!(epoch_length(&HeterogeneityConfig::case2()), 21);
        let flat = HeterogeneityConfig {
            m: 0.0,
            ..HeterogeneityConfig::case1()
        };
        assert_eq!(epoch_length(&flat), 10);
    }

    #[test]
    fn weighted_probabilities() {
        let c = HeterogeneityConfig::case1();
        let p_nrm = weighted_probability(&c, NodeClass::Normal).unwrap();
        let p_adv = weighted_probability(&c, NodeClass::Advanced).unwrap();
        let p_sup = weighted_probability(&c, NodeClass::Super).unwrap();
        assert!(rel(p_nrm, 0.1 / 1.7) < 1e-12);
        assert!(rel(p_sup, 0.3 / 1.7) < 1e-12);
        assert!((p_nrm - 0.058824).abs() < 1e-6);
        assert!((p_sup - 0.176471).abs() < 1e-6);
        assert!(p_nrm <= p_adv && p_adv <= p_sup);

        let expected_heads = 50.0 * p_nrm + 30.0 * p_adv + 20.0 * p_sup;
        assert!(rel(expected_heads, 10.0) < 1e-12);

        let flat = HeterogeneityConfig {
            alpha: 0.0,
            beta: 0.0,
            m: 0.8,
            ..c
        };
        for class in NodeClass::ALL {
            assert!(rel(weighted_probability(&flat, class).unwrap(), 0.1) < 1e-12);
        }
    }

    #[test]
    fn probability_above_one_is_rejected() {
        let c = HeterogeneityConfig {
            p_opt: 0.9,
            beta: 5.0,
            m: 0.1,
            ..HeterogeneityConfig::case1()
        };
        assert!(weighted_probability(&c, NodeClass::Super).is_err());
        assert!(c.validate().is_err());
    }

    #[test]
    fn validate_names_offending_key() {
        let c = HeterogeneityConfig {
            m: 1.5,
            ..HeterogeneityConfig::case1()
        };
        match c.validate() {
            Err(Error::Config { key, .. }) => assert_eq!(key, "heterogeneity.m"),
            other => panic!("{other:?}"),
        }
        let c = HeterogeneityConfig {
            beta: 0.5,
            ..HeterogeneityConfig::case1()
        };
        assert!(matches!(c.validate(), Err(Error::Config { key, .. }) if key == "heterogeneity.beta"));
    }

    #[test]
    fn windows() {
        let c = HeterogeneityConfig::case1();
        let w = |cl| eligibility_window(weighted_probability(&c, cl).unwrap());
        assert_eq!(w(NodeClass::Normal), 17);
        assert_eq!(w(NodeClass::Advanced), 9); // 8.5 rounds half up
        assert_eq!(w(NodeClass::Super), 6);
        assert_eq!(eligibility_window(0.1), 10);
    }
}
