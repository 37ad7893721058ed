//! Deterministic core of hierarchical ego GNNs on small graphs: WL and
//! hierarchical ego refinement with canonical cross-graph colors, WL-IR
//! trees, a model checker for graded hybrid logic with binders and within
//! operators, a compiler from that logic to message-passing networks with an
//! exact executor, and homomorphism counting with ego-rank.
//!
//! ```
//! use ego_refine::graph::{k33, prism};
//! use ego_refine::he::{graph_equiv_he, HeParams, Radius};
//! use ego_refine::refine::graph_equiv_wl;
//!
//! assert!(graph_equiv_wl(&prism(), &k33()));
//! assert!(!graph_equiv_he(&prism(), &k33(), HeParams::new(1, Radius::Unbounded)));
//! ```

// Color hashes by pointer; the lazily filled digest cell is not part of Hash or Eq.
#![allow(clippy::mutable_key_type)]

pub mod color;
pub mod error;
pub mod graph;
pub mod he;
pub mod hom;
pub mod logic;
pub mod net;
pub mod refine;
pub mod wlir;

pub use error::{Error, Result};
