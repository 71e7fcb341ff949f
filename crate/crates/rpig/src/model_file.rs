//! JSON model definitions.
//!
//! ```json
//! { "blocks": [ { "weight": 0.5, "player": "I",
//!                 "offspring": { "type": "geometric", "l": 0.9 },
//!                 "capacity_leaf": { "type": "point_mass", "c": 0.0 },
//!                 "capacity_internal": { "type": "uniform", "a": 0.0, "b": 1.0 } } ] }
//! ```

use std::fs;
use std::path::Path;

use rpig_core::model::{Block, CapacityLaw, OffspringLaw, Player, PrimitiveDistribution};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PlayerDto {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CapacityDto {
    PointMass { c: f64 },
    Uniform { a: f64, b: f64 },
    FiniteDiscrete { atoms: Vec<(f64, f64)> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OffspringDto {
    PointMass {
        n: u32,
    },
    FinitePmf {
        probs: Vec<f64>,
    },
    Geometric {
        l: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        shift: u32,
    },
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDto {
    pub weight: f64,
    pub player: PlayerDto,
    pub offspring: OffspringDto,
    pub capacity_leaf: CapacityDto,
    pub capacity_internal: CapacityDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub blocks: Vec<BlockDto>,
}

impl From<Player> for PlayerDto {
    fn from(p: Player) -> Self {
        match p {
            Player::I => PlayerDto::I,
            Player::II => PlayerDto::II,
        }
    }
}

impl From<PlayerDto> for Player {
    fn from(p: PlayerDto) -> Self {
        match p {
            PlayerDto::I => Player::I,
            PlayerDto::II => Player::II,
        }
    }
}

impl From<&CapacityLaw> for CapacityDto {
    fn from(law: &CapacityLaw) -> Self {
        match law {
            CapacityLaw::PointMass(c) => CapacityDto::PointMass { c: *c },
            CapacityLaw::Uniform { a, b } => CapacityDto::Uniform { a: *a, b: *b },
            CapacityLaw::FiniteDiscrete(atoms) => CapacityDto::FiniteDiscrete {
                atoms: atoms.clone(),
            },
        }
    }
}

impl From<CapacityDto> for CapacityLaw {
    fn from(dto: CapacityDto) -> Self {
        match dto {
            CapacityDto::PointMass { c } => CapacityLaw::PointMass(c),
            CapacityDto::Uniform { a, b } => CapacityLaw::Uniform { a, b },
            CapacityDto::FiniteDiscrete { atoms } => CapacityLaw::FiniteDiscrete(atoms),
        }
    }
}

impl From<&OffspringLaw> for OffspringDto {
    fn from(law: &OffspringLaw) -> Self {
        match law {
            OffspringLaw::PointMass(n) => OffspringDto::PointMass { n: *n },
            OffspringLaw::FinitePmf(probs) => OffspringDto::FinitePmf {
                probs: probs.clone(),
            },
            OffspringLaw::Geometric { l, shift } => OffspringDto::Geometric {
                l: *l,
                shift: *shift,
            },
        }
    }
}

impl From<OffspringDto> for OffspringLaw {
    fn from(dto: OffspringDto) -> Self {
        match dto {
            OffspringDto::PointMass { n } => OffspringLaw::PointMass(n),
            OffspringDto::FinitePmf { probs } => OffspringLaw::FinitePmf(probs),
            OffspringDto::Geometric { l, shift } => OffspringLaw::Geometric { l, shift },
        }
    }
}

impl From<&PrimitiveDistribution> for ModelFile {
    fn from(p: &PrimitiveDistribution) -> Self {
        let blocks = p
            .blocks()
            .iter()
            .map(|b| BlockDto {
                weight: b.weight,
                player: b.player.into(),
                offspring: (&b.offspring).into(),
                capacity_leaf: (&b.capacity_leaf).into(),
                capacity_internal: (&b.capacity_internal).into(),
            })
            .collect();
        ModelFile { blocks }
    }
}

impl ModelFile {
    pub fn to_model(&self) -> Result<PrimitiveDistribution> {
        let blocks = self
            .blocks
            .iter()
            .cloned()
            .map(|b| {
                Block::new(
                    b.weight,
                    b.player.into(),
                    b.offspring.into(),
                    b.capacity_leaf.into(),
                    b.capacity_internal.into(),
                )
            })
            .collect();
        Ok(PrimitiveDistribution::new(blocks)?)
    }

    pub fn parse(text: &str) -> Result<ModelFile> {
        serde_json::from_str(text).map_err(|e| AppError::ModelFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model file serializes");
        s.push('\n');
        s
    }
}

pub fn read_model(path: &Path) -> Result<PrimitiveDistribution> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::ModelFile(format!("{}: {e}", path.display())))?;
    ModelFile::parse(&text)?.to_model()
}

pub fn write_model(path: &Path, p: &PrimitiveDistribution) -> Result<()> {
    fs::write(path, ModelFile::from(p).to_json())?;
    Ok(())
}
