//! Short-circuit evaluation on the same node stream as [`super::sample_game`].
//!
//! Only the part of the tree needed to decide `v_t >= k` is generated, which
//! keeps supercritical geometric trees tractable at depths where the full
//! arena has millions of nodes.

use super::rng;
use crate::error::{Error, Result};
use crate::model::{Player, PrimitiveDistribution};

struct Walker<'a> {
    p: &'a PrimitiveDistribution,
    k: f64,
    visited: usize,
    budget: usize,
    /// Player II always moves to the first child.
    first_child_ii: bool,
}

impl Walker<'_> {
    fn reaches(&mut self, key: u64, remaining: u32) -> Result<bool> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded(self.visited - 1));
        }
        let (player, capacity, offspring) = rng::draw_marks(self.p, key);
        if capacity < self.k {
            return Ok(false);
        }
        if offspring == 0 || remaining == 0 {
            return Ok(true);
        }
        match player {
            Player::I => {
                for j in 0..offspring {
                    if self.reaches(rng::child_key(key, j), remaining - 1)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Player::II if self.first_child_ii => {
                self.reaches(rng::child_key(key, 0), remaining - 1)
            }
            Player::II => {
                for j in 0..offspring {
                    if !self.reaches(rng::child_key(key, j), remaining - 1)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Whether the root value of the game with `seed` truncated at `t` is at
/// least `k`.
pub fn root_value_at_least(
    p: &PrimitiveDistribution,
    seed: u64,
    t: u32,
    k: f64,
    budget: usize,
) -> Result<bool> {
    let mut w = Walker {
        p,
        k,
        visited: 0,
        budget,
        first_child_ii: false,
    };
    w.reaches(rng::root_key(seed), t)
}

/// Whether Player I secures at least `k` when Player II always moves to the
/// first child.
pub fn wins_against_first_child(
    p: &PrimitiveDistribution,
    seed: u64,
    t: u32,
    k: f64,
    budget: usize,
) -> Result<bool> {
    let mut w = Walker {
        p,
        k,
        visited: 0,
        budget,
        first_child_ii: true,
    };
    w.reaches(rng::root_key(seed), t)
}

/// Root statistics of the conditional game: `None` when the root value is
/// below `k`, otherwise the root player and the number of root children of
/// value at least `k`.
pub fn conditional_root(
    p: &PrimitiveDistribution,
    seed: u64,
    t: u32,
    k: f64,
    budget: usize,
) -> Result<Option<(Player, u32)>> {
    let root = rng::root_key(seed);
    let mut w = Walker {
        p,
        k,
        visited: 0,
        budget,
        first_child_ii: false,
    };
    if !w.reaches(root, t)? {
        return Ok(None);
    }
    let (player, _, offspring) = rng::draw_marks(p, root);
    if t == 0 {
        return Ok(Some((player, offspring)));
    }
    let mut kept = 0;
    for j in 0..offspring {
        if w.reaches(rng::child_key(root, j), t - 1)? {
            kept += 1;
        }
    }
    Ok(Some((player, kept)))
}
