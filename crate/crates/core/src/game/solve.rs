use alloc::{collections::BTreeMap, collections::VecDeque, vec, vec::Vec};

use super::{Game, Node};
use crate::error::{Error, Result};
use crate::model::Player;

/// Subgame value of every node, aligned with the arena.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueAnnotation {
    pub values: Vec<f64>,
}

impl ValueAnnotation {
    pub fn root(&self) -> f64 {
        self.values[0]
    }
}

/// Backward induction in one reverse pass over the arena.
pub fn subgame_values(g: &Game) -> ValueAnnotation {
    let nodes = g.nodes();
    let mut values = vec![0.0; nodes.len()];
    for i in (0..nodes.len()).rev() {
        let n = &nodes[i];
        values[i] = if n.is_end() {
            n.capacity
        } else {
            let kids = values[n.children()].iter().copied();
            let best = match n.player {
                Player::I => kids.fold(f64::NEG_INFINITY, f64::max),
                Player::II => kids.fold(f64::INFINITY, f64::min),
            };
            n.capacity.min(best)
        };
    }
    ValueAnnotation { values }
}

/// Values when the opponent of Player I is bound to `fixed` and Player I
/// best-responds.
pub fn values_against(g: &Game, fixed: &Strategy) -> Result<ValueAnnotation> {
    if fixed.owner != Player::II {
        return Err(Error::NotApplicable(
            "fixed strategy must belong to Player II".into(),
        ));
    }
    let nodes = g.nodes();
    let mut values = vec![0.0; nodes.len()];
    for i in (0..nodes.len()).rev() {
        let n = &nodes[i];
        values[i] = if n.is_end() {
            n.capacity
        } else {
            let best = match n.player {
                Player::I => values[n.children()]
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max),
                Player::II => values[child_at(n, fixed.choice_at(i)?)],
            };
            n.capacity.min(best)
        };
    }
    Ok(ValueAnnotation { values })
}

/// A pure strategy: a child ordinal in `1..=num_children` at each decision
/// node of `owner`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub owner: Player,
    pub choice: BTreeMap<usize, u32>,
}

impl Strategy {
    pub fn new(owner: Player) -> Strategy {
        Strategy {
            owner,
            choice: BTreeMap::new(),
        }
    }

    pub fn choice_at(&self, node: usize) -> Result<u32> {
        self.choice
            .get(&node)
            .copied()
            .ok_or(Error::IncompleteStrategy(node))
    }
}

fn child_at(n: &Node, ordinal: u32) -> usize {
    n.first_child as usize + (ordinal.clamp(1, n.num_children) - 1) as usize
}

/// Minimum capacity along the play induced by the two strategies.
pub fn payoff(g: &Game, s_i: &Strategy, s_ii: &Strategy) -> Result<f64> {
    let mut at = 0;
    let mut worst = f64::INFINITY;
    loop {
        let n = g.node(at);
        worst = worst.min(n.capacity);
        if n.is_end() {
            return Ok(worst);
        }
        let s = match n.player {
            Player::I => s_i,
            Player::II => s_ii,
        };
        let j = s.choice_at(at)?;
        if j == 0 || j > n.num_children {
            return Err(Error::IncompleteStrategy(at));
        }
        at = child_at(n, j);
    }
}

/// Membership mask of the largest subtree containing the root whose nodes all
/// have value at least `k`.
pub fn optimal_subtree(g: &Game, values: &ValueAnnotation, k: f64) -> Result<Vec<bool>> {
    if values.root() < k {
        return Err(Error::ValueBelowK {
            root_value: values.root(),
            k,
        });
    }
    let nodes = g.nodes();
    let mut inside = vec![false; nodes.len()];
    inside[0] = true;
    for i in 0..nodes.len() {
        if !inside[i] {
            continue;
        }
        let n = &nodes[i];
        let mut kept = 0;
        for c in n.children() {
            if values.values[c] >= k {
                inside[c] = true;
                kept += 1;
            }
        }
        debug_assert!(match n.player {
            Player::I => n.is_end() || kept >= 1,
            Player::II => kept == n.num_children,
        });
    }
    Ok(inside)
}

/// The restriction of `g` to its `k`-optimal subtree, with children renumbered
/// in their original order. Retained internal nodes record their retained
/// child count as offspring; boundary nodes keep their drawn offspring.
pub fn conditional_game(g: &Game, values: &ValueAnnotation, k: f64) -> Result<Game> {
    let inside = optimal_subtree(g, values, k)?;
    let old = g.nodes();
    let mut nodes = Vec::with_capacity(inside.iter().filter(|b| **b).count());
    let mut origin = Vec::with_capacity(nodes.capacity());
    let mut queue = VecDeque::from([0usize]);
    nodes.push(Node {
        first_child: 0,
        num_children: 0,
        ..old[0]
    });
    origin.push(0usize);
    let mut at = 0;
    while let Some(src) = queue.pop_front() {
        let kids: Vec<usize> = old[src].children().filter(|&c| inside[c]).collect();
        let n = &mut nodes[at];
        if !old[src].is_end() {
            n.offspring = kids.len() as u32;
        }
        if !kids.is_empty() {
            n.first_child = origin.len() as u32;
            n.num_children = kids.len() as u32;
        }
        for c in kids {
            nodes.push(Node {
                first_child: 0,
                num_children: 0,
                ..old[c]
            });
            origin.push(c);
            queue.push_back(c);
        }
        at += 1;
    }
    let star = Game::from_parts_unchecked(nodes, g.truncation_depth(), g.seed(), g.model_hash());
    debug_assert_eq!(subgame_values(&star).root(), values.root());
    Ok(star)
}

/// Capacity 0 at every Player II node with at least two drawn children.
pub fn avoidance_game(g: &Game) -> Game {
    let nodes = g
        .nodes()
        .iter()
        .map(|n| {
            let mut n = *n;
            if n.player == Player::II && n.offspring >= 2 {
                n.capacity = 0.0;
            }
            n
        })
        .collect();
    Game::from_parts_unchecked(nodes, g.truncation_depth(), g.seed(), g.model_hash())
}

/// Greedy rule: Player I moves to the youngest child of value at least `k`,
/// Player II to the youngest child of value at most `k`; child 1 when none
/// qualifies.
pub fn simple_strategy(g: &Game, values: &ValueAnnotation, owner: Player, k: f64) -> Strategy {
    let mut s = Strategy::new(owner);
    for i in g.decision_nodes(owner) {
        let n = g.node(i);
        let pick = n.children().position(|c| match owner {
            Player::I => values.values[c] >= k,
            Player::II => values.values[c] <= k,
        });
        s.choice.insert(i, pick.map_or(1, |j| j as u32 + 1));
    }
    s
}
