//! Dual trees of stable marked genus-zero curves and combinatorial types of
//! admissible-cover boundary strata: construction, stabilization,
//! isomorphism, enumeration, and the diagonal filter.

pub mod covertype;
pub mod tree;

pub use covertype::{
    build_type, component_count, diagonal_filter, enumerate_types, phi_mark, stabilized_sigma,
    to_csv, to_dot, validate_type, CombinatorialType, StratumRecord,
};
pub use tree::{enumerate_stable_trees, Mark, MarkedTree, MARK_STAR};
