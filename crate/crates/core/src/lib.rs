//! Text-to-knowledge-graph tooling and a noise model for studying how
//! relation-extraction errors shift which nodes look central.
//!
//! The crate has three parts:
//!
//! * [`ie`] turns precomputed entailment probabilities into entity labels and
//!   relation triples (threshold calibration, classification, evaluation);
//! * [`kg`] assembles those into a graph and ranks entities;
//! * [`graph`], [`generate`], [`perturb`], [`centrality`], [`overlap`] and
//!   [`sweep`] simulate a ground-truth network, corrupt it at a given
//!   precision/recall, and measure how much the top-k central node set moves.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod centrality;
pub mod error;
pub mod generate;
pub mod graph;
pub mod ie;
pub mod kg;
pub mod meta;
pub mod overlap;
pub mod perturb;
pub mod rng;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
