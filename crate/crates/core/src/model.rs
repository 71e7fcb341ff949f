//! The primitive distribution of `(player, capacity, offspring)` at a node and
//! its component laws.
//!
//! A [`PrimitiveDistribution`] is a finite mixture of [`Block`]s. Inside a
//! block the capacity depends on the offspring count only through the
//! leaf/internal split, which keeps every generating-function query exact.

use alloc::{format, string::String, vec::Vec};
use core::fmt;

use crate::error::{Error, Result};
use crate::num::{compensated_sum, floor, ln, powu};

/// Absolute tolerance on probability weights.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    /// The maximizer.
    I,
    /// The minimizer.
    II,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::I, Player::II];

    pub fn opponent(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::II => "II",
        })
    }
}

/// Law of the capacity on one side of a block's leaf/internal split.
#[derive(Clone, Debug, PartialEq)]
pub enum CapacityLaw {
    PointMass(f64),
    Uniform {
        a: f64,
        b: f64,
    },
    /// `(value, weight)` atoms, values strictly increasing.
    FiniteDiscrete(Vec<(f64, f64)>),
}

impl CapacityLaw {
    pub fn validate(&self) -> Result<()> {
        match self {
            CapacityLaw::PointMass(c) => {
                if !(c.is_finite() && *c >= 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "point-mass capacity {c} must be finite and >= 0"
                    )));
                }
            }
            CapacityLaw::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && *a >= 0.0 && a < b) {
                    return Err(Error::InvalidModel(format!(
                        "uniform capacity needs 0 <= a < b, got [{a}, {b}]"
                    )));
                }
            }
            CapacityLaw::FiniteDiscrete(atoms) => {
                if atoms.is_empty() {
                    return Err(Error::InvalidModel(
                        "finite capacity law has no atoms".into(),
                    ));
                }
                let mut prev = f64::NEG_INFINITY;
                for &(v, w) in atoms {
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::InvalidModel(format!(
                            "capacity atom {v} must be finite and >= 0"
                        )));
                    }
                    if v <= prev {
                        return Err(Error::InvalidModel(
                            "capacity atoms must be strictly increasing".into(),
                        ));
                    }
                    if !(w > 0.0 && w <= 1.0) {
                        return Err(Error::InvalidModel(format!(
                            "capacity atom weight {w} outside (0, 1]"
                        )));
                    }
                    prev = v;
                }
                let total = compensated_sum(atoms.iter().map(|a| a.1));
                if (total - 1.0).abs() > PROB_TOL {
                    return Err(Error::InvalidModel(format!(
                        "capacity weights sum to {total}, not 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `P(capacity >= k)`.
    pub fn survival(&self, k: f64) -> f64 {
        match self {
            CapacityLaw::PointMass(c) => {
                if k <= *c {
                    1.0
                } else {
                    0.0
                }
            }
            CapacityLaw::Uniform { a, b } => ((b - k) / (b - a)).clamp(0.0, 1.0),
            CapacityLaw::FiniteDiscrete(atoms) => {
                compensated_sum(atoms.iter().filter(|a| a.0 >= k).map(|a| a.1)).min(1.0)
            }
        }
    }

    /// `P(capacity < k)`, computed directly rather than as `1 - survival`.
    pub fn below(&self, k: f64) -> f64 {
        match self {
            CapacityLaw::PointMass(c) => {
                if *c < k {
                    1.0
                } else {
                    0.0
                }
            }
            CapacityLaw::Uniform { a, b } => ((k - a) / (b - a)).clamp(0.0, 1.0),
            CapacityLaw::FiniteDiscrete(atoms) => {
                compensated_sum(atoms.iter().filter(|a| a.0 < k).map(|a| a.1)).min(1.0)
            }
        }
    }

    /// `P(capacity = k)`.
    pub fn atom(&self, k: f64) -> f64 {
        match self {
            CapacityLaw::PointMass(c) => {
                if *c == k {
                    1.0
                } else {
                    0.0
                }
            }
            CapacityLaw::Uniform { .. } => 0.0,
            CapacityLaw::FiniteDiscrete(atoms) => {
                atoms.iter().filter(|a| a.0 == k).map(|a| a.1).sum()
            }
        }
    }

    pub fn essinf(&self) -> f64 {
        match self {
            CapacityLaw::PointMass(c) => *c,
            CapacityLaw::Uniform { a, .. } => *a,
            CapacityLaw::FiniteDiscrete(atoms) => atoms[0].0,
        }
    }

    pub fn esssup(&self) -> f64 {
        match self {
            CapacityLaw::PointMass(c) => *c,
            CapacityLaw::Uniform { b, .. } => *b,
            CapacityLaw::FiniteDiscrete(atoms) => atoms[atoms.len() - 1].0,
        }
    }

    /// Inverse-CDF draw for `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            CapacityLaw::PointMass(c) => *c,
            CapacityLaw::Uniform { a, b } => a + (b - a) * u,
            CapacityLaw::FiniteDiscrete(atoms) => {
                let mut acc = 0.0;
                for &(v, w) in atoms {
                    acc += w;
                    if u < acc {
                        return v;
                    }
                }
                atoms[atoms.len() - 1].0
            }
        }
    }

    fn canonical(&self) -> CapacityLaw {
        match self {
            CapacityLaw::FiniteDiscrete(atoms) if atoms.len() == 1 => {
                CapacityLaw::PointMass(atoms[0].0)
            }
            other => other.clone(),
        }
    }
}

/// Law of the number of children.
#[derive(Clone, Debug, PartialEq)]
pub enum OffspringLaw {
    PointMass(u32),
    /// `probs[n] = P(offspring = n)`.
    FinitePmf(Vec<f64>),
    /// `P(offspring = shift + m) = (1 - l) l^m`; `shift = 0` is the plain
    /// geometric law.
    Geometric {
        l: f64,
        shift: u32,
    },
}

impl OffspringLaw {
    pub fn geometric(l: f64) -> OffspringLaw {
        OffspringLaw::Geometric { l, shift: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OffspringLaw::PointMass(_) => Ok(()),
            OffspringLaw::FinitePmf(probs) => {
                if probs.is_empty() {
                    return Err(Error::InvalidModel("offspring pmf is empty".into()));
                }
                if probs
                    .iter()
                    .any(|p| !(p.is_finite() && (0.0..=1.0).contains(p)))
                {
                    return Err(Error::InvalidModel(
                        "offspring pmf entries must lie in [0, 1]".into(),
                    ));
                }
                let total = compensated_sum(probs.iter().copied());
                if (total - 1.0).abs() > PROB_TOL {
                    return Err(Error::InvalidModel(format!(
                        "offspring pmf sums to {total}, not 1"
                    )));
                }
                Ok(())
            }
            OffspringLaw::Geometric { l, .. } => {
                if *l > 0.0 && *l < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!(
                        "geometric parameter {l} outside (0, 1)"
                    )))
                }
            }
        }
    }

    pub fn pmf(&self, n: u32) -> f64 {
        match self {
            OffspringLaw::PointMass(m) => {
                if n == *m {
                    1.0
                } else {
                    0.0
                }
            }
            OffspringLaw::FinitePmf(probs) => probs.get(n as usize).copied().unwrap_or(0.0),
            OffspringLaw::Geometric { l, shift } => {
                if n < *shift {
                    0.0
                } else {
                    (1.0 - l) * powu(*l, n - shift)
                }
            }
        }
    }

    /// `P(offspring >= n)`.
    pub fn tail(&self, n: u32) -> f64 {
        match self {
            OffspringLaw::PointMass(m) => {
                if *m >= n {
                    1.0
                } else {
                    0.0
                }
            }
            OffspringLaw::FinitePmf(probs) => {
                compensated_sum(probs.iter().skip(n as usize).copied())
            }
            OffspringLaw::Geometric { l, shift } => {
                if n <= *shift {
                    1.0
                } else {
                    powu(*l, n - shift)
                }
            }
        }
    }

    /// Probability generating function `E(x^offspring)` on `[0, 1]`.
    pub fn pgf(&self, x: f64) -> f64 {
        match self {
            OffspringLaw::PointMass(n) => powu(x, *n),
            OffspringLaw::FinitePmf(probs) => horner(probs, x),
            OffspringLaw::Geometric { l, shift } => powu(x, *shift) * (1.0 - l) / (1.0 - l * x),
        }
    }

    /// `E(1{offspring >= 1} x^offspring)`.
    pub fn pgf_positive(&self, x: f64) -> f64 {
        match self {
            OffspringLaw::PointMass(0) => 0.0,
            OffspringLaw::PointMass(n) => powu(x, *n),
            OffspringLaw::FinitePmf(probs) => {
                if probs.len() <= 1 {
                    0.0
                } else {
                    x * horner(&probs[1..], x)
                }
            }
            OffspringLaw::Geometric { l, shift: 0 } => (1.0 - l) * l * x / (1.0 - l * x),
            OffspringLaw::Geometric { .. } => self.pgf(x),
        }
    }

    /// `E(offspring * x^(offspring - 1))`, the pgf derivative.
    pub fn pgf_derivative(&self, x: f64) -> f64 {
        match self {
            OffspringLaw::PointMass(0) => 0.0,
            OffspringLaw::PointMass(n) => f64::from(*n) * powu(x, n - 1),
            OffspringLaw::FinitePmf(probs) => {
                let mut acc = 0.0;
                for (n, p) in probs.iter().enumerate().skip(1).rev() {
                    acc = acc * x + n as f64 * p;
                }
                // Horner above runs over n >= 1 with one power of x absorbed.
                acc
            }
            OffspringLaw::Geometric { l, shift } => {
                let denom = 1.0 - l * x;
                let lead = if *shift == 0 {
                    0.0
                } else {
                    f64::from(*shift) * powu(x, shift - 1) / denom
                };
                (1.0 - l) * (lead + powu(x, *shift) * l / (denom * denom))
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            OffspringLaw::PointMass(n) => f64::from(*n),
            OffspringLaw::FinitePmf(probs) => {
                compensated_sum(probs.iter().enumerate().map(|(n, p)| n as f64 * p))
            }
            OffspringLaw::Geometric { l, shift } => f64::from(*shift) + l / (1.0 - l),
        }
    }

    /// Largest `n` with positive mass, or `None` for infinite support.
    pub fn max_support(&self) -> Option<u32> {
        match self {
            OffspringLaw::PointMass(n) => Some(*n),
            OffspringLaw::FinitePmf(probs) => {
                let last = probs.iter().rposition(|p| *p > 0.0).unwrap_or(0);
                Some(last as u32)
            }
            OffspringLaw::Geometric { .. } => None,
        }
    }

    /// Inverse-CDF draw for `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> u32 {
        match self {
            OffspringLaw::PointMass(n) => *n,
            OffspringLaw::FinitePmf(probs) => {
                let mut acc = 0.0;
                for (n, p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        return n as u32;
                    }
                }
                self.max_support().unwrap_or(0)
            }
            OffspringLaw::Geometric { l, shift } => {
                let m = floor(ln(1.0 - u) / ln(*l));
                let m = if m.is_finite() && m < f64::from(u32::MAX - shift) {
                    m as u32
                } else {
                    u32::MAX - shift
                };
                shift + m
            }
        }
    }

    fn canonical(&self) -> OffspringLaw {
        match self {
            OffspringLaw::FinitePmf(probs) => {
                let end = probs.iter().rposition(|p| *p > 0.0).map_or(1, |i| i + 1);
                let trimmed = &probs[..end];
                if let Some(pos) = trimmed.iter().position(|p| *p == 1.0) {
                    OffspringLaw::PointMass(pos as u32)
                } else {
                    OffspringLaw::FinitePmf(trimmed.to_vec())
                }
            }
            other => other.clone(),
        }
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// One mixture component of a primitive distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub weight: f64,
    pub player: Player,
    pub offspring: OffspringLaw,
    /// Capacity law given `offspring = 0`.
    pub capacity_leaf: CapacityLaw,
    /// Capacity law given `offspring >= 1`.
    pub capacity_internal: CapacityLaw,
}

impl Block {
    pub fn new(
        weight: f64,
        player: Player,
        offspring: OffspringLaw,
        capacity_leaf: CapacityLaw,
        capacity_internal: CapacityLaw,
    ) -> Block {
        Block {
            weight,
            player,
            offspring,
            capacity_leaf,
            capacity_internal,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.weight > 0.0 && self.weight <= 1.0) {
            return Err(Error::InvalidModel(format!(
                "block weight {} outside (0, 1]",
                self.weight
            )));
        }
        self.offspring.validate()?;
        self.capacity_leaf.validate()?;
        self.capacity_internal.validate()
    }

    /// `P(capacity >= k)` within the block.
    fn survival(&self, k: f64) -> f64 {
        let p0 = self.offspring.pmf(0);
        p0 * self.capacity_leaf.survival(k) + (1.0 - p0) * self.capacity_internal.survival(k)
    }

    fn below(&self, k: f64) -> f64 {
        let p0 = self.offspring.pmf(0);
        p0 * self.capacity_leaf.below(k) + (1.0 - p0) * self.capacity_internal.below(k)
    }

    fn atom(&self, k: f64) -> f64 {
        let p0 = self.offspring.pmf(0);
        p0 * self.capacity_leaf.atom(k) + (1.0 - p0) * self.capacity_internal.atom(k)
    }

    /// Capacity laws that carry positive mass in this block.
    fn live_capacity_laws(&self) -> impl Iterator<Item = &CapacityLaw> {
        let p0 = self.offspring.pmf(0);
        let leaf = (p0 > 0.0).then_some(&self.capacity_leaf);
        let internal = (p0 < 1.0).then_some(&self.capacity_internal);
        leaf.into_iter().chain(internal)
    }
}

/// Selects the per-block term aggregated by [`PrimitiveDistribution::block_sum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlockSumMode {
    /// `P(capacity >= k, offspring = 0)`.
    Leaf,
    /// `E(1{capacity >= k, offspring >= 1} x^offspring)`.
    InternalPgf(f64),
    /// `E(1{capacity >= k} offspring)`.
    InternalMean,
    /// `P(capacity >= k, offspring = 1)`.
    InternalAt1,
}

/// Structural facts about a primitive distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelDiagnostics {
    pub is_escape: bool,
    pub is_activation_independent: bool,
    pub q_i: f64,
    pub offspring_mean: f64,
    pub capacity_essinf: f64,
    pub capacity_esssup_on_leaves: f64,
}

/// Joint law of `(player, capacity, offspring)` as a finite block mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveDistribution {
    blocks: Vec<Block>,
}

impl PrimitiveDistribution {
    /// Validates and wraps a block list. Weights are not renormalized.
    pub fn new(blocks: Vec<Block>) -> Result<PrimitiveDistribution> {
        if blocks.is_empty() {
            return Err(Error::InvalidModel("block list is empty".into()));
        }
        for (idx, b) in blocks.iter().enumerate() {
            b.validate().map_err(|e| match e {
                Error::InvalidModel(why) => Error::InvalidModel(format!("block {idx}: {why}")),
                other => other,
            })?;
        }
        let total = compensated_sum(blocks.iter().map(|b| b.weight));
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidModel(format!(
                "block weights sum to {total}, not 1"
            )));
        }
        Ok(PrimitiveDistribution { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Activation probability `q_i`.
    pub fn activation(&self, player: Player) -> f64 {
        compensated_sum(
            self.blocks
                .iter()
                .filter(|b| b.player == player)
                .map(|b| b.weight),
        )
    }

    /// The aggregation kernel behind every generating-function query:
    /// sums `weight * term` over the blocks of `player`.
    pub fn block_sum(&self, player: Player, k: f64, mode: BlockSumMode) -> f64 {
        compensated_sum(self.blocks.iter().filter(|b| b.player == player).map(|b| {
            let term = match mode {
                BlockSumMode::Leaf => b.capacity_leaf.survival(k) * b.offspring.pmf(0),
                BlockSumMode::InternalPgf(x) => {
                    b.capacity_internal.survival(k) * b.offspring.pgf_positive(x)
                }
                BlockSumMode::InternalMean => {
                    let s = b.capacity_internal.survival(k);
                    if s == 0.0 {
                        0.0
                    } else {
                        s * b.offspring.mean()
                    }
                }
                BlockSumMode::InternalAt1 => b.capacity_internal.survival(k) * b.offspring.pmf(1),
            };
            b.weight * term
        }))
    }

    /// `p(capacity < k)`.
    pub fn prob_capacity_below(&self, k: f64) -> f64 {
        compensated_sum(self.blocks.iter().map(|b| b.weight * b.below(k)))
    }

    /// `p(capacity >= k)`.
    pub fn prob_capacity_at_least(&self, k: f64) -> f64 {
        compensated_sum(self.blocks.iter().map(|b| b.weight * b.survival(k)))
    }

    /// `p(capacity = k)`.
    pub fn prob_capacity_eq(&self, k: f64) -> f64 {
        compensated_sum(self.blocks.iter().map(|b| b.weight * b.atom(k)))
    }

    /// `p(capacity >= k, offspring = 0)` over both players.
    pub fn leaf_mass_at_least(&self, k: f64) -> f64 {
        self.block_sum(Player::I, k, BlockSumMode::Leaf)
            + self.block_sum(Player::II, k, BlockSumMode::Leaf)
    }

    /// `p(offspring >= 1)`.
    pub fn prob_internal(&self) -> f64 {
        compensated_sum(self.blocks.iter().map(|b| b.weight * b.offspring.tail(1)))
    }

    pub fn offspring_mean(&self) -> f64 {
        compensated_sum(self.blocks.iter().map(|b| b.weight * b.offspring.mean()))
    }

    pub fn capacity_essinf(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.live_capacity_laws())
            .map(CapacityLaw::essinf)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn capacity_esssup(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.live_capacity_laws())
            .map(CapacityLaw::esssup)
            .fold(0.0, f64::max)
    }

    /// Essential supremum of the capacity restricted to childless nodes (0 if
    /// there are none).
    pub fn capacity_esssup_on_leaves(&self) -> f64 {
        self.blocks
            .iter()
            .filter(|b| b.offspring.pmf(0) > 0.0)
            .map(|b| b.capacity_leaf.esssup())
            .fold(0.0, f64::max)
    }

    /// Childless nodes have capacity 0 and the capacity has essential infimum 0.
    pub fn is_escape(&self) -> bool {
        self.capacity_esssup_on_leaves() == 0.0 && self.capacity_essinf() == 0.0
    }

    /// Whether `(capacity, offspring)` has the same law under both players,
    /// compared on canonicalized, merged block collections.
    pub fn is_activation_independent(&self) -> bool {
        let (qi, qii) = (self.activation(Player::I), self.activation(Player::II));
        if qi == 0.0 || qii == 0.0 {
            return true;
        }
        let a = self.conditional_components(Player::I, qi);
        let b = self.conditional_components(Player::II, qii);
        if a.len() != b.len() {
            return false;
        }
        a.iter().all(|(law, w)| {
            b.iter()
                .any(|(other, v)| other == law && (w - v).abs() <= 1e-10)
        })
    }

    fn conditional_components(
        &self,
        player: Player,
        q: f64,
    ) -> Vec<((OffspringLaw, CapacityLaw, CapacityLaw), f64)> {
        let mut out: Vec<((OffspringLaw, CapacityLaw, CapacityLaw), f64)> = Vec::new();
        for b in self.blocks.iter().filter(|b| b.player == player) {
            let key = (
                b.offspring.canonical(),
                b.capacity_leaf.canonical(),
                b.capacity_internal.canonical(),
            );
            match out.iter_mut().find(|(k, _)| *k == key) {
                Some(entry) => entry.1 += b.weight / q,
                None => out.push((key, b.weight / q)),
            }
        }
        out
    }

    pub fn validate(&self) -> ModelDiagnostics {
        ModelDiagnostics {
            is_escape: self.is_escape(),
            is_activation_independent: self.is_activation_independent(),
            q_i: self.activation(Player::I),
            offspring_mean: self.offspring_mean(),
            capacity_essinf: self.capacity_essinf(),
            capacity_esssup_on_leaves: self.capacity_esssup_on_leaves(),
        }
    }

    /// The activation-independent model with the same `(capacity, offspring)`
    /// marginal and `P(player = I) = q`.
    pub fn with_activation(&self, q: f64) -> Result<PrimitiveDistribution> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidModel(format!(
                "activation probability {q} outside [0, 1]"
            )));
        }
        if !self.is_activation_independent() {
            return Err(Error::NotApplicable(
                "model is not activation-independent".into(),
            ));
        }
        let mut blocks = Vec::with_capacity(2 * self.blocks.len());
        for (player, share) in [(Player::I, q), (Player::II, 1.0 - q)] {
            if share == 0.0 {
                continue;
            }
            for b in &self.blocks {
                blocks.push(Block {
                    weight: b.weight * share,
                    player,
                    ..b.clone()
                });
            }
        }
        PrimitiveDistribution::new(blocks)
    }

    /// Draws `(player, capacity, offspring)` from three uniforms in `[0, 1)`.
    pub fn draw(&self, u_block: f64, u_offspring: f64, u_capacity: f64) -> (Player, f64, u32) {
        let mut acc = 0.0;
        let mut chosen = &self.blocks[self.blocks.len() - 1];
        for b in &self.blocks {
            acc += b.weight;
            if u_block < acc {
                chosen = b;
                break;
            }
        }
        let n = chosen.offspring.quantile(u_offspring);
        let law = if n == 0 {
            &chosen.capacity_leaf
        } else {
            &chosen.capacity_internal
        };
        (chosen.player, law.quantile(u_capacity), n)
    }

    /// 64-bit FNV-1a digest of the block list.
    pub fn model_hash(&self) -> u64 {
        let mut h = Fnv::new();
        for b in &self.blocks {
            h.f64(b.weight);
            h.u64(match b.player {
                Player::I => 1,
                Player::II => 2,
            });
            match &b.offspring {
                OffspringLaw::PointMass(n) => {
                    h.u64(10);
                    h.u64(u64::from(*n));
                }
                OffspringLaw::FinitePmf(probs) => {
                    h.u64(11);
                    h.u64(probs.len() as u64);
                    probs.iter().for_each(|p| h.f64(*p));
                }
                OffspringLaw::Geometric { l, shift } => {
                    h.u64(12);
                    h.f64(*l);
                    h.u64(u64::from(*shift));
                }
            }
            for law in [&b.capacity_leaf, &b.capacity_internal] {
                match law {
                    CapacityLaw::PointMass(c) => {
                        h.u64(20);
                        h.f64(*c);
                    }
                    CapacityLaw::Uniform { a, b } => {
                        h.u64(21);
                        h.f64(*a);
                        h.f64(*b);
                    }
                    CapacityLaw::FiniteDiscrete(atoms) => {
                        h.u64(22);
                        h.u64(atoms.len() as u64);
                        atoms.iter().for_each(|(v, w)| {
                            h.f64(*v);
                            h.f64(*w);
                        });
                    }
                }
            }
        }
        h.finish()
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Fnv {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn u64(&mut self, v: u64) {
        for byte in v.to_le_bytes() {
            self.0 ^= u64::from(byte);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn f64(&mut self, v: f64) {
        self.u64(v.to_bits());
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// Describes a model error in a form suitable for a CLI message.
pub fn describe(model: &PrimitiveDistribution) -> String {
    let d = model.validate();
    format!(
        "{} blocks, q_I = {}, escape = {}, activation-independent = {}",
        model.blocks().len(),
        d.q_i,
        d.is_escape,
        d.is_activation_independent
    )
}
