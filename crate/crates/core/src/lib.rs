//! Exact character theory and p-block theory for finite permutation groups.

pub mod arith;
pub mod blocks;
pub mod chartab;
pub mod correspond;
pub mod cyclo;
pub mod error;
pub mod group;
pub mod io;
pub mod perm;
pub mod verify;

pub use error::{Error, Result};
pub use group::PermGroup;
pub use perm::Permutation;
