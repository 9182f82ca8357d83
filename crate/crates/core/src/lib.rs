//! The agents-versus-adversary broadcast game on dynamic networks.
//!
//! `k` agents walk a graph; one of them knows a secret and tells it to anyone
//! it meets at a vertex. Each round an adversary first picks a connected
//! spanning subgraph, then every agent moves along at most one of its edges.
//! Agents win once everyone knows.
//!
//! The crate provides graph tooling ([`graph`]), round mechanics ([`game`]),
//! an exact fixed-point solver ([`solver`]), executable strategies
//! ([`strategies`]), the spanning-tree symmetry checker ([`symmetry`]), time
//! bounds ([`bounds`]) and the verification suite behind the CLI
//! ([`verify`], [`cli`]).

pub mod bounds;
pub mod cli;
pub mod error;
pub mod game;
pub mod graph;
pub mod solver;
pub mod strategies;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
