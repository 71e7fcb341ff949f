//! JSON game serialization: a header plus the breadth-first node array.
//! Child offsets and depths are implied by the order and are rebuilt on load.

use rpig_core::game::{Game, Node};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model_file::PlayerDto;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDto {
    pub player: PlayerDto,
    pub capacity: f64,
    pub num_children: u32,
    /// Drawn offspring count; only differs from `num_children` on the
    /// truncation boundary.
    pub offspring: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub seed: u64,
    pub truncation_depth: u32,
    pub model_hash: u64,
    pub nodes: Vec<NodeDto>,
}

impl From<&Game> for GameFile {
    fn from(g: &Game) -> Self {
        let nodes = g
            .nodes()
            .iter()
            .map(|n| NodeDto {
                player: n.player.into(),
                capacity: n.capacity,
                num_children: n.num_children,
                offspring: n.offspring,
            })
            .collect();
        GameFile {
            seed: g.seed(),
            truncation_depth: g.truncation_depth(),
            model_hash: g.model_hash(),
            nodes,
        }
    }
}

impl GameFile {
    pub fn to_game(&self) -> Result<Game> {
        let mut nodes: Vec<Node> = Vec::with_capacity(self.nodes.len());
        let mut depth = vec![0u32; self.nodes.len()];
        let mut next = 1u64;
        for (i, n) in self.nodes.iter().enumerate() {
            let first_child = if n.num_children == 0 { 0 } else { next };
            let child_depth = depth[i] + 1;
            for c in next..next + u64::from(n.num_children) {
                if let Some(d) = depth.get_mut(c as usize) {
                    *d = child_depth;
                }
            }
            next += u64::from(n.num_children);
            nodes.push(Node {
                player: n.player.into(),
                capacity: n.capacity,
                offspring: n.offspring,
                first_child: u32::try_from(first_child).unwrap_or(u32::MAX),
                num_children: n.num_children,
                depth: depth[i],
            });
        }
        if next != self.nodes.len() as u64 {
            return Err(rpig_core::Error::MalformedGame(format!(
                "child counts cover {next} nodes but the file has {}",
                self.nodes.len()
            ))
            .into());
        }
        Ok(Game::from_nodes(
            nodes,
            self.truncation_depth,
            self.seed,
            self.model_hash,
        )?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("game file serializes")
    }

    pub fn parse(text: &str) -> Result<GameFile> {
        Ok(serde_json::from_str(text)?)
    }
}
