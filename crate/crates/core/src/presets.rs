//! Canonical models and their closed-form oracles.

use alloc::{format, vec::Vec};

use crate::error::{Error, Result};
use crate::model::{Block, CapacityLaw, OffspringLaw, Player, PrimitiveDistribution};
use crate::num::{powu, sqrt};

#[derive(Clone, Debug, PartialEq)]
pub enum PresetId {
    /// Geometric(`l`) offspring, capacity 0 on leaves and 1 elsewhere.
    GeometricEscape { l: f64, q: f64 },
    /// `n` children everywhere, Uniform(0, 1) capacity.
    NaryUniform { n: u32, q: f64 },
    /// Player I everywhere, capacity `1{offspring >= 1}`.
    ClassicalGw { offspring: OffspringLaw },
    /// Capacity 1 on internal nodes and Uniform(0, 1) on leaves, subcritical
    /// offspring so that the tree is finite.
    FiniteUniformLeaf { offspring: OffspringLaw, q: f64 },
}

fn check_q(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidPreset(format!("q = {q} outside [0, 1]")))
    }
}

fn two_players(
    q: f64,
    offspring: OffspringLaw,
    leaf: CapacityLaw,
    internal: CapacityLaw,
) -> Result<PrimitiveDistribution> {
    let mut blocks = Vec::with_capacity(2);
    for (w, player) in [(q, Player::I), (1.0 - q, Player::II)] {
        if w > 0.0 {
            blocks.push(Block::new(
                w,
                player,
                offspring.clone(),
                leaf.clone(),
                internal.clone(),
            ));
        }
    }
    PrimitiveDistribution::new(blocks)
}

pub fn preset(id: &PresetId) -> Result<PrimitiveDistribution> {
    match id {
        PresetId::GeometricEscape { l, q } => {
            check_q(*q)?;
            if !(*l > 0.0 && *l < 1.0) {
                return Err(Error::InvalidPreset(format!("l = {l} outside (0, 1)")));
            }
            two_players(
                *q,
                OffspringLaw::geometric(*l),
                CapacityLaw::PointMass(0.0),
                CapacityLaw::PointMass(1.0),
            )
        }
        PresetId::NaryUniform { n, q } => {
            check_q(*q)?;
            if *n < 2 {
                return Err(Error::InvalidPreset(format!("n = {n} must be at least 2")));
            }
            let u = CapacityLaw::Uniform { a: 0.0, b: 1.0 };
            two_players(*q, OffspringLaw::PointMass(*n), u.clone(), u)
        }
        PresetId::ClassicalGw { offspring } => {
            offspring
                .validate()
                .map_err(|e| Error::InvalidPreset(format!("{e}")))?;
            two_players(
                1.0,
                offspring.clone(),
                CapacityLaw::PointMass(0.0),
                CapacityLaw::PointMass(1.0),
            )
        }
        PresetId::FiniteUniformLeaf { offspring, q } => {
            check_q(*q)?;
            offspring
                .validate()
                .map_err(|e| Error::InvalidPreset(format!("{e}")))?;
            let mean = offspring.mean();
            if mean >= 1.0 {
                return Err(Error::InvalidPreset(format!(
                    "offspring mean {mean} must be below 1"
                )));
            }
            two_players(
                *q,
                offspring.clone(),
                CapacityLaw::Uniform { a: 0.0, b: 1.0 },
                CapacityLaw::PointMass(1.0),
            )
        }
    }
}

fn out_of_regime(why: &str) -> Error {
    Error::OutOfRegime(why.into())
}

/// Critical activation probability of the geometric escape model.
pub fn ex1_qc(l: f64) -> f64 {
    (1.0 - l) * (1.0 - l + l * l) / (l * l * (2.0 - l))
}

/// `P(v = 0)` in the geometric escape model.
pub fn ex1_alpha(l: f64, q: f64) -> f64 {
    if q <= ex1_qc(l) {
        return 1.0;
    }
    let a = (2.0 - l) * (1.0 - q);
    0.5 * a + 0.5 * sqrt(4.0 * (1.0 - l) * (1.0 - l) / (l * l) + a * a)
}

/// `P(v < k)` on the binary uniform tree.
pub fn ex2_alpha_binary(k: f64, q: f64) -> f64 {
    if 2.0 * (1.0 - k) * q <= 1.0 {
        1.0
    } else {
        k / (1.0 - k) / (2.0 * q - 1.0)
    }
}

/// `P(v < k)` on the ternary uniform tree.
pub fn ex2_alpha_ternary(k: f64, q: f64) -> f64 {
    if 3.0 * (1.0 - k) * q <= 1.0 {
        1.0
    } else {
        let a = 2.0 - 3.0 * q;
        0.5 * a + 0.5 * sqrt(a * a + 4.0 * k / (1.0 - k))
    }
}

/// `k`-critical activation probability on the `n`-ary uniform tree.
pub fn ex2_qc(k: f64, n: u32) -> f64 {
    let m = (1.0 - k) * f64::from(n);
    if m > 1.0 {
        1.0 / m
    } else {
        1.0
    }
}

/// Per-player conditional probabilities of `{v < k}` and `{v >= k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CondForms {
    pub alpha_i: f64,
    pub alpha_ii: f64,
    pub beta_i: f64,
    pub beta_ii: f64,
}

pub fn ex1_cond(l: f64, alpha: f64) -> CondForms {
    let beta = 1.0 - alpha;
    CondForms {
        alpha_i: (1.0 - l) / (1.0 - l * alpha),
        alpha_ii: ((1.0 - l) * (1.0 - l) + (2.0 * l - l * l) * alpha) / (1.0 - l + l * alpha),
        beta_i: l * beta / (1.0 - l + l * beta),
        beta_ii: l * (1.0 - l) * beta / (1.0 - l * beta),
    }
}

pub fn ex2_cond(k: f64, n: u32, alpha: f64) -> CondForms {
    let beta = 1.0 - alpha;
    let alpha_i = k + (1.0 - k) * powu(alpha, n);
    let beta_ii = (1.0 - k) * powu(beta, n);
    CondForms {
        alpha_i,
        alpha_ii: 1.0 - beta_ii,
        beta_i: 1.0 - alpha_i,
        beta_ii,
    }
}

/// Root statistics of the conditional law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarStats {
    pub activation_i: f64,
    pub mean_children_i: f64,
    pub mean_children_ii: f64,
    pub mean_children: f64,
}

pub fn ex1_star_stats(l: f64, q: f64, beta: f64) -> StarStats {
    StarStats {
        activation_i: l * q / (1.0 - l + l * beta),
        mean_children_i: 1.0 + l * beta / (1.0 - l),
        mean_children_ii: 1.0 / (1.0 - l * beta),
        mean_children: q * l / (1.0 - l)
            + (1.0 - q) * l * (1.0 - l) / ((1.0 - l * beta) * (1.0 - l * beta)),
    }
}

pub fn ex2_star_stats(k: f64, n: u32, q: f64, beta: f64) -> StarStats {
    let nf = f64::from(n);
    let hit = 1.0 - powu(1.0 - beta, n);
    StarStats {
        activation_i: (1.0 - k) * hit * q / beta,
        mean_children_i: nf * beta / hit,
        mean_children_ii: nf,
        mean_children: q * (1.0 - k) * nf + (1.0 - q) * (1.0 - k) * nf * powu(beta, n - 1),
    }
}

/// `P(v' = 0)` for the avoidance game of the geometric escape model.
pub fn ex1_avoidance_alpha(l: f64, q: f64) -> f64 {
    if q <= ex1_qc(l) {
        return 1.0;
    }
    (1.0 - l + l * l - l * l * q) / (l * (1.0 - l + l * l + l * (1.0 - l) * q))
}

/// `P(v' < k)` for the avoidance game of the ternary uniform tree.
pub fn ex2_avoidance_alpha_ternary(k: f64, q: f64) -> f64 {
    if 3.0 * (1.0 - k) * q <= 1.0 {
        1.0
    } else {
        -0.5 + sqrt(1.0 / ((1.0 - k) * q) - 0.75)
    }
}

/// Large-`n` limit of `P(v < k)` on `n`-ary uniform trees.
pub fn ex2_limit(k: f64, q: f64) -> f64 {
    1.0 - q + q * k
}

/// Checked variants for callers that need an error outside the regime.
pub fn ex1_alpha_supercritical(l: f64, q: f64) -> Result<f64> {
    if q > ex1_qc(l) {
        Ok(ex1_alpha(l, q))
    } else {
        Err(out_of_regime(
            "q must exceed the critical activation probability",
        ))
    }
}
