//! Weight consistency matrices for non-binary LDPC absorbing sets.
//!
//! A configuration is the submatrix of a parity-check matrix induced by a
//! set of variable nodes. From its topology alone, [`wcmtree`] builds the
//! tree of degree-2 check nodes that may be unsatisfied together and reads
//! off one weight consistency matrix (WCM) per maximal choice. The labeled
//! object is harmful exactly when some WCM has a null-space vector with no
//! zero entry; [`removal`] checks this and searches for the fewest
//! edge-weight changes that break every WCM.

pub mod code;
pub mod config;
pub mod fixtures;
pub mod formats;
pub mod gf;
pub mod linalg;
pub mod removal;
pub mod search;
pub mod wcmtree;

pub use code::{CodeError, CodeGraph, Embedding};
pub use config::{
    classify_unlabeled, cn_flippable_partners, compute_b_o_ut, compute_b_ut, ConfigError, Configuration, ObjectKind,
    TopoClass, UpperBound, WeightChange,
};
pub use formats::FormatError;
pub use gf::{Field, FieldElement, GfError};
pub use linalg::{has_full_support_vector, GfMatrix, LinalgError, NullSpaceBasis};
pub use removal::{RemovalError, RemovalOptions, RemovalPlan};
pub use wcmtree::{build_tree, extract_wcms, Mode, UnlabeledTree, Wcm, WcmError, WcmSet};
