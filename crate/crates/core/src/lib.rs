//! Value distributions of random zero-sum perfect-information games played on
//! marked Galton-Watson trees.
//!
//! The crate is `no_std` (with `alloc`). Analytic queries live in [`vgf`] and
//! [`transforms`]; sampled games and their exact solution live in [`game`].

#![no_std]

extern crate alloc;

pub mod error;
pub mod game;
pub mod model;
pub mod num;
pub mod presets;
pub mod transforms;
pub mod vgf;

pub use error::{Error, Result};
pub use model::{
    Block, BlockSumMode, CapacityLaw, ModelDiagnostics, OffspringLaw, Player, PrimitiveDistribution,
};
