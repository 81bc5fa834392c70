//! Boundary behavior of parameter curves of bicritical rational maps with a
//! periodic critical point: exact stratum enumeration and puncture solving,
//! the plane-cubic model with its elliptic invariants, and a basin renderer.

pub mod exactnum;
pub mod treecover;
pub mod moduli;
pub mod percurve;
pub mod elliptic;
pub mod render;




