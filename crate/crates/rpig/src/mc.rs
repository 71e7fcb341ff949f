//! Monte Carlo experiments checked against exact analytic targets.
//!
//! Game `i` of a run uses `game_seed(master_seed, i)`, and workers only add up
//! integer counters, so results do not depend on the number of threads.

use std::ops::Add;

use rayon::prelude::*;
use rpig_core::game::{lazy, rng, DEFAULT_NODE_BUDGET};
use rpig_core::model::{Block, OffspringLaw, Player, PrimitiveDistribution};
use rpig_core::transforms::conditional_distribution;
use rpig_core::vgf;
use serde::Serialize;

use crate::error::{AppError, Result};

/// Minimum number of accepted games for conditioned statistics.
pub const MIN_ACCEPTANCES: u64 = 500;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub exact_target: Option<f64>,
    /// `None` when the target is missing or the standard error is 0.
    pub z_score: Option<f64>,
}

impl McEstimate {
    pub fn bernoulli(successes: u64, n: u64, exact_target: Option<f64>) -> McEstimate {
        let mean = successes as f64 / n as f64;
        let stderr = (mean * (1.0 - mean) / n as f64).sqrt();
        McEstimate::with_target(mean, stderr, n, exact_target)
    }

    /// Sample mean with the unbiased standard error from a sum and a sum of
    /// squares.
    pub fn sample_mean(sum: u64, sum_sq: u64, n: u64, exact_target: Option<f64>) -> McEstimate {
        let nf = n as f64;
        let mean = sum as f64 / nf;
        let var = if n > 1 {
            ((sum_sq as f64 - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        McEstimate::with_target(mean, (var / nf).sqrt(), n, exact_target)
    }

    fn with_target(mean: f64, stderr: f64, n: u64, exact_target: Option<f64>) -> McEstimate {
        let z_score = exact_target
            .filter(|_| stderr > 0.0)
            .map(|t| (mean - t) / stderr);
        McEstimate {
            mean,
            stderr,
            n,
            exact_target,
            z_score,
        }
    }
}

/// Worker count: `RPIG_THREADS` when set to a positive integer, otherwise
/// rayon's default.
pub fn thread_count() -> usize {
    std::env::var("RPIG_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` inside a pool sized by [`thread_count`].
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| AppError::Usage(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs `f` on the seed of every game index and adds up the counters.
pub fn reduce_games<C, F>(n: u64, master_seed: u64, f: F) -> Result<C>
where
    C: Default + Add<Output = C> + Send,
    F: Fn(u64) -> Result<C> + Sync,
{
    install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| f(rng::game_seed(master_seed, i)))
            .try_reduce(C::default, |a, b| Ok(a + b))
    })?
}

#[derive(Clone, Copy, Default)]
struct Count(u64);

impl Add for Count {
    type Output = Count;
    fn add(self, o: Count) -> Count {
        Count(self.0 + o.0)
    }
}

fn check_n(n: u64) -> Result<()> {
    if n < 100 {
        return Err(AppError::Usage(format!(
            "need at least 100 samples, got {n}"
        )));
    }
    Ok(())
}

/// Fraction of games truncated at `t` whose root value is below `k`, against
/// the exact `f_k^{t+1}(0)`.
pub fn estimate_truncated_cdf(
    p: &PrimitiveDistribution,
    k: f64,
    t: u32,
    n: u64,
    master_seed: u64,
) -> Result<McEstimate> {
    check_n(n)?;
    let below = reduce_games(n, master_seed, |seed| {
        Ok(Count(u64::from(!lazy::root_value_at_least(
            p,
            seed,
            t,
            k,
            DEFAULT_NODE_BUDGET,
        )?)))
    })?;
    let target = vgf::alpha_iterates(p, k, t as usize).last().copied();
    Ok(McEstimate::bernoulli(below.0, n, target))
}

#[derive(Clone, Copy, Default)]
struct RootCounts {
    accepted: u64,
    root_i: u64,
    children_i: u64,
    children_i_sq: u64,
    children_ii: u64,
    children_ii_sq: u64,
}

impl Add for RootCounts {
    type Output = RootCounts;
    fn add(self, o: RootCounts) -> RootCounts {
        RootCounts {
            accepted: self.accepted + o.accepted,
            root_i: self.root_i + o.root_i,
            children_i: self.children_i + o.children_i,
            children_i_sq: self.children_i_sq + o.children_i_sq,
            children_ii: self.children_ii + o.children_ii,
            children_ii_sq: self.children_ii_sq + o.children_ii_sq,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarRootReport {
    pub t: u32,
    pub accepted: u64,
    pub activation_i: McEstimate,
    /// `None` when no accepted root belongs to the player.
    pub mean_children_i: Option<McEstimate>,
    pub mean_children_ii: Option<McEstimate>,
}

/// Root statistics of the conditional game over games with `v_t >= k`,
/// against the conditional law's activation and mean offspring.
pub fn estimate_star_root(
    p: &PrimitiveDistribution,
    k: f64,
    t: u32,
    n: u64,
    master_seed: u64,
) -> Result<StarRootReport> {
    check_n(n)?;
    let c = reduce_games(n, master_seed, |seed| {
        let Some((player, kids)) = lazy::conditional_root(p, seed, t, k, DEFAULT_NODE_BUDGET)?
        else {
            return Ok(RootCounts::default());
        };
        let (m, m2) = (u64::from(kids), u64::from(kids) * u64::from(kids));
        Ok(match player {
            Player::I => RootCounts {
                accepted: 1,
                root_i: 1,
                children_i: m,
                children_i_sq: m2,
                ..Default::default()
            },
            Player::II => RootCounts {
                accepted: 1,
                children_ii: m,
                children_ii_sq: m2,
                ..Default::default()
            },
        })
    })?;
    if c.accepted < MIN_ACCEPTANCES {
        return Err(AppError::TooFewAcceptances(c.accepted));
    }
    let star = conditional_distribution(p, k).ok();
    let target = |f: &dyn Fn(&rpig_core::transforms::StarDistribution) -> Option<f64>| {
        star.as_ref().and_then(f)
    };
    let root_ii = c.accepted - c.root_i;
    Ok(StarRootReport {
        t,
        accepted: c.accepted,
        activation_i: McEstimate::bernoulli(
            c.root_i,
            c.accepted,
            target(&|s| Some(s.activation(Player::I))),
        ),
        mean_children_i: (c.root_i > 0).then(|| {
            McEstimate::sample_mean(
                c.children_i,
                c.children_i_sq,
                c.root_i,
                target(&|s| s.conditional_mean(Player::I).ok()),
            )
        }),
        mean_children_ii: (root_ii > 0).then(|| {
            McEstimate::sample_mean(
                c.children_ii,
                c.children_ii_sq,
                root_ii,
                target(&|s| s.conditional_mean(Player::II).ok()),
            )
        }),
    })
}

/// The model seen by Player I when Player II always moves to the first child:
/// Player II's nodes become single-child nodes of Player I.
pub fn first_child_model(p: &PrimitiveDistribution) -> Result<PrimitiveDistribution> {
    let blocks = p
        .blocks()
        .iter()
        .map(|b| match b.player {
            Player::I => b.clone(),
            Player::II => {
                let p0 = b.offspring.pmf(0);
                let offspring = if p0 >= 1.0 {
                    OffspringLaw::PointMass(0)
                } else if p0 <= 0.0 {
                    OffspringLaw::PointMass(1)
                } else {
                    OffspringLaw::FinitePmf(vec![p0, 1.0 - p0])
                };
                Block::new(
                    b.weight,
                    Player::I,
                    offspring,
                    b.capacity_leaf.clone(),
                    b.capacity_internal.clone(),
                )
            }
        })
        .collect();
    Ok(PrimitiveDistribution::new(blocks)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimpleStrategyReport {
    /// Probability that Player I secures `k` in the truncated game; the target
    /// is exact at depth `t`.
    pub estimate: McEstimate,
    /// Mean offspring of the branching process Player I plays on.
    pub derived_mean: f64,
    /// Untruncated winning probability `1 - alpha(k)` of the derived model.
    pub survival: f64,
}

/// Player II follows the simple strategy with all-zero annotations, which
/// always picks the first child; Player I best-responds.
pub fn simple_strategy_experiment(
    p: &PrimitiveDistribution,
    k: f64,
    t: u32,
    n: u64,
    master_seed: u64,
) -> Result<SimpleStrategyReport> {
    check_n(n)?;
    let derived = first_child_model(p)?;
    let wins = reduce_games(n, master_seed, |seed| {
        Ok(Count(u64::from(lazy::wins_against_first_child(
            p,
            seed,
            t,
            k,
            DEFAULT_NODE_BUDGET,
        )?)))
    })?;
    let target = vgf::alpha_iterates(&derived, k, t as usize)
        .last()
        .map(|a| 1.0 - a);
    Ok(SimpleStrategyReport {
        estimate: McEstimate::bernoulli(wins.0, n, target),
        derived_mean: vgf::d_param(&derived, k),
        survival: 1.0 - vgf::alpha(&derived, k)?,
    })
}
