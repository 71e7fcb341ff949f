//! Derived laws: the `k`-conditional law `p*` of the game restricted to
//! nodes of value at least `k`, and the avoidance law `p'`.

use alloc::{format, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::model::{Block, BlockSumMode, CapacityLaw, OffspringLaw, Player, PrimitiveDistribution};
use crate::num::{binomial, powu};
use crate::vgf::{self, FixedPointOptions};

/// The law `p*` of the `k`-conditional game, exposed through its generating
/// functions and moments. Capacity queries below `k` are answered at `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarDistribution {
    base: PrimitiveDistribution,
    k: f64,
    alpha: f64,
    beta: f64,
}

pub fn conditional_distribution(p: &PrimitiveDistribution, k: f64) -> Result<StarDistribution> {
    conditional_distribution_with(p, k, FixedPointOptions::default())
}

pub fn conditional_distribution_with(
    p: &PrimitiveDistribution,
    k: f64,
    opts: FixedPointOptions,
) -> Result<StarDistribution> {
    let fp = vgf::smallest_fixed_point(p, k, opts)?;
    if fp.alpha >= 1.0 {
        return Err(Error::DegenerateConditioning { k });
    }
    Ok(StarDistribution {
        base: p.clone(),
        k,
        alpha: fp.alpha,
        beta: 1.0 - fp.alpha,
    })
}

impl StarDistribution {
    pub fn base(&self) -> &PrimitiveDistribution {
        &self.base
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn level(&self, c: f64) -> f64 {
        c.max(self.k)
    }

    /// `G*_i(c, x)`.
    pub fn gen_fun(&self, i: Player, c: f64, x: f64) -> f64 {
        let c = self.level(c);
        let (a, b) = (self.alpha, self.beta);
        match i {
            Player::I => {
                let g = |y| vgf::gen_fun(&self.base, Player::I, c, y);
                (g(a + b * x) + g(0.0) - g(a)) / b
            }
            Player::II => vgf::gen_fun(&self.base, Player::II, c, b * x) / b,
        }
    }

    /// `p*(player = i)`.
    pub fn activation(&self, i: Player) -> f64 {
        self.gen_fun(i, self.k, 1.0)
    }

    /// `f*(c, x)` through the affine change of variables of the base vgf.
    pub fn vgf(&self, c: f64, x: f64) -> f64 {
        (vgf::vgf(&self.base, self.level(c), self.beta * x + self.alpha) - self.alpha) / self.beta
    }

    /// `f*(c, x)` assembled from `G*_I` and `G*_II`.
    pub fn vgf_assembled(&self, c: f64, x: f64) -> f64 {
        let gi = |y| self.gen_fun(Player::I, c, y);
        1.0 - gi(0.0) - gi(1.0) + gi(x) - self.gen_fun(Player::II, c, 1.0 - x)
    }

    /// `E_{p*}(1{player = i} offspring)`.
    pub fn offspring_moment(&self, i: Player) -> f64 {
        match i {
            Player::I => self
                .base
                .block_sum(Player::I, self.k, BlockSumMode::InternalMean),
            Player::II => self
                .base
                .blocks()
                .iter()
                .filter(|b| b.player == Player::II)
                .map(|b| {
                    b.weight
                        * b.capacity_internal.survival(self.k)
                        * b.offspring.pgf_derivative(self.beta)
                })
                .sum(),
        }
    }

    /// `E_{p*}(offspring | player = i)`.
    pub fn conditional_mean(&self, i: Player) -> Result<f64> {
        let act = self.activation(i);
        if act <= 0.0 {
            return Err(Error::UndefinedConditional(i));
        }
        Ok(self.offspring_moment(i) / act)
    }

    /// `E_{p*}(offspring)`.
    pub fn offspring_mean(&self) -> f64 {
        let mean = self.offspring_moment(Player::I) + self.offspring_moment(Player::II);
        debug_assert!(vgf::d_param(&self.base, self.k) <= mean + 1e-12);
        mean
    }

    /// `p*(player = i, capacity >= c, offspring = n)` for bases whose
    /// offspring laws have support in `0..=n_max_base`.
    pub fn pmf(&self, i: Player, c: f64, n: u32, n_max_base: u32) -> Result<f64> {
        let c = self.level(c);
        let blocks: Vec<&Block> = self
            .base
            .blocks()
            .iter()
            .filter(|b| b.player == i)
            .collect();
        for b in &blocks {
            match b.offspring.max_support() {
                None => {
                    return Err(Error::UnsupportedBase(
                        "offspring law has infinite support".into(),
                    ))
                }
                Some(m) if m > n_max_base => {
                    return Err(Error::UnsupportedBase(format!(
                        "offspring support {m} exceeds bound {n_max_base}"
                    )))
                }
                Some(_) => {}
            }
        }
        let base_pmf = |m: u32| -> f64 {
            blocks
                .iter()
                .map(|b| {
                    let law = if m == 0 {
                        &b.capacity_leaf
                    } else {
                        &b.capacity_internal
                    };
                    b.weight * law.survival(c) * b.offspring.pmf(m)
                })
                .sum()
        };
        let (a, beta) = (self.alpha, self.beta);
        if n == 0 {
            return Ok(base_pmf(0) / beta);
        }
        Ok(match i {
            Player::I => (n..=n_max_base)
                .map(|m| base_pmf(m) * binomial(m, n) * powu(beta, n - 1) * powu(a, m - n))
                .sum(),
            Player::II => base_pmf(n) * powu(beta, n - 1),
        })
    }
}

/// The avoidance law `p'`: Player II's nodes with two or more children get
/// capacity 0. Each II block is split into its `{0, 1}` offspring part, which
/// keeps its capacities, and its `{2, ...}` tail with capacity 0.
pub fn avoidance_distribution(p: &PrimitiveDistribution) -> Result<PrimitiveDistribution> {
    let mut blocks = Vec::with_capacity(p.blocks().len() + 4);
    for b in p.blocks() {
        if b.player == Player::I {
            blocks.push(b.clone());
            continue;
        }
        let (m0, m1) = (b.offspring.pmf(0), b.offspring.pmf(1));
        let tail = b.offspring.tail(2);
        let head = m0 + m1;
        if head > 0.0 {
            blocks.push(Block::new(
                b.weight * head,
                Player::II,
                OffspringLaw::FinitePmf(vec![m0 / head, m1 / head]),
                b.capacity_leaf.clone(),
                b.capacity_internal.clone(),
            ));
        }
        if tail > 0.0 {
            let offspring = match &b.offspring {
                OffspringLaw::Geometric { l, shift } => OffspringLaw::Geometric {
                    l: *l,
                    shift: (*shift).max(2),
                },
                OffspringLaw::FinitePmf(probs) => {
                    let mut rest = probs.clone();
                    rest[0] = 0.0;
                    rest[1] = 0.0;
                    rest.iter_mut().skip(2).for_each(|x| *x /= tail);
                    OffspringLaw::FinitePmf(rest)
                }
                OffspringLaw::PointMass(n) => OffspringLaw::PointMass(*n),
            };
            blocks.push(Block::new(
                b.weight * tail,
                Player::II,
                offspring,
                CapacityLaw::PointMass(0.0),
                CapacityLaw::PointMass(0.0),
            ));
        }
    }
    PrimitiveDistribution::new(blocks)
}
