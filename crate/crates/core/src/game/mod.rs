//! Truncated random games stored as breadth-first arenas.

pub mod lazy;
pub mod rng;
mod solve;

use alloc::{format, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::model::{Player, PrimitiveDistribution};

pub use solve::{
    avoidance_game, conditional_game, optimal_subtree, payoff, simple_strategy, subgame_values,
    values_against, Strategy, ValueAnnotation,
};

/// Default cap on the number of nodes of a sampled game.
pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub player: Player,
    pub capacity: f64,
    /// Offspring count drawn for the node. Differs from `num_children` only at
    /// the truncation boundary and in restricted games.
    pub offspring: u32,
    pub first_child: u32,
    pub num_children: u32,
    pub depth: u32,
}

impl Node {
    pub fn children(&self) -> core::ops::Range<usize> {
        let first = self.first_child as usize;
        first..first + self.num_children as usize
    }

    pub fn is_end(&self) -> bool {
        self.num_children == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Game {
    nodes: Vec<Node>,
    truncation_depth: u32,
    seed: u64,
    model_hash: u64,
}

impl Game {
    /// Validates an arena: node 0 is the root, children are contiguous and
    /// come after their parent, every non-root node has one parent, and depths
    /// are consistent with the truncation.
    pub fn from_nodes(
        nodes: Vec<Node>,
        truncation_depth: u32,
        seed: u64,
        model_hash: u64,
    ) -> Result<Game> {
        if nodes.is_empty() {
            return Err(Error::MalformedGame("no nodes".into()));
        }
        if nodes[0].depth != 0 {
            return Err(Error::MalformedGame("root depth must be 0".into()));
        }
        let mut parents = vec![0u32; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            if node.depth > truncation_depth {
                return Err(Error::MalformedGame(format!(
                    "node {i} lies below the truncation depth"
                )));
            }
            if node.depth == truncation_depth && node.num_children > 0 {
                return Err(Error::MalformedGame(format!(
                    "boundary node {i} has children"
                )));
            }
            if !(node.capacity.is_finite() && node.capacity >= 0.0) {
                return Err(Error::MalformedGame(format!(
                    "node {i} has capacity {}",
                    node.capacity
                )));
            }
            if node.num_children == 0 {
                continue;
            }
            let range = node.children();
            if range.start <= i || range.end > nodes.len() {
                return Err(Error::MalformedGame(format!(
                    "children of node {i} out of range"
                )));
            }
            for c in range {
                if nodes[c].depth != node.depth + 1 {
                    return Err(Error::MalformedGame(format!(
                        "child {c} of node {i} has wrong depth"
                    )));
                }
                parents[c] += 1;
            }
        }
        if parents[0] != 0 {
            return Err(Error::MalformedGame("root has a parent".into()));
        }
        if let Some(orphan) = parents.iter().skip(1).position(|&n| n != 1) {
            return Err(Error::MalformedGame(format!(
                "node {} does not have exactly one parent",
                orphan + 1
            )));
        }
        Ok(Game {
            nodes,
            truncation_depth,
            seed,
            model_hash,
        })
    }

    pub(crate) fn from_parts_unchecked(
        nodes: Vec<Node>,
        truncation_depth: u32,
        seed: u64,
        model_hash: u64,
    ) -> Game {
        Game {
            nodes,
            truncation_depth,
            seed,
            model_hash,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn truncation_depth(&self) -> u32 {
        self.truncation_depth
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn model_hash(&self) -> u64 {
        self.model_hash
    }

    /// Indices of nodes where `owner` moves.
    pub fn decision_nodes(&self, owner: Player) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.player == owner && n.num_children > 0)
            .map(|(i, _)| i)
    }
}

/// Samples the game truncated at `truncation_depth` breadth-first. Each node's
/// marks depend only on `(seed, path)`.
pub fn sample_game(
    p: &PrimitiveDistribution,
    seed: u64,
    truncation_depth: u32,
    node_budget: usize,
) -> Result<Game> {
    if node_budget == 0 {
        return Err(Error::BudgetExceeded(0));
    }
    let root = rng::root_key(seed);
    let (player, capacity, offspring) = rng::draw_marks(p, root);
    let mut nodes = vec![Node {
        player,
        capacity,
        offspring,
        first_child: 0,
        num_children: 0,
        depth: 0,
    }];
    let mut keys = vec![root];
    let mut i = 0;
    while i < nodes.len() {
        let node = nodes[i];
        if node.depth < truncation_depth && node.offspring > 0 {
            let first = nodes.len();
            if first + node.offspring as usize > node_budget {
                return Err(Error::BudgetExceeded(first));
            }
            nodes[i].first_child = first as u32;
            nodes[i].num_children = node.offspring;
            let key = keys[i];
            for j in 0..node.offspring {
                let ck = rng::child_key(key, j);
                let (player, capacity, offspring) = rng::draw_marks(p, ck);
                nodes.push(Node {
                    player,
                    capacity,
                    offspring,
                    first_child: 0,
                    num_children: 0,
                    depth: node.depth + 1,
                });
                keys.push(ck);
            }
        }
        i += 1;
    }
    Ok(Game {
        nodes,
        truncation_depth,
        seed,
        model_hash: p.model_hash(),
    })
}
