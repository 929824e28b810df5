//! Overlapping community detection by constrained decomposition of egonet
//! tensors.
//!
//! A graph is represented by the 3-way tensor whose `n`-th frontal slab is
//! the adjacency of node `n`'s egonet. A rank-`K` CP model with nonnegative
//! factors `A`, `B` and row-stochastic `C` is fitted by alternating least
//! squares; the rows of `C` are soft community memberships. Time-varying
//! graphs add a fourth, row-stochastic factor `D` over time slots.
//!
//! ```no_run
//! use egoten::{assignment, decomp, graph, tensor};
//!
//! let text = std::fs::read_to_string("edges.txt").unwrap();
//! let (g, _) = graph::parse_edge_list(text.as_bytes(), &Default::default()).unwrap();
//! let w = tensor::EgonetTensor::from_graph(&g, true);
//! let (factors, _trace) = decomp::als_decompose(&w, &decomp::SolverConfig::with_rank(3)).unwrap();
//! let cover = assignment::hard_assign(factors.c());
//! ```

pub mod assignment;
pub mod decomp;
pub mod dynamic;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod nmf;
pub mod rng;
pub mod synth;
pub mod tensor;

pub use error::{Error, Result};
