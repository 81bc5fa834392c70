//! The basin renderer: the lattice function, recovery of configurations from
//! the plane chart, orbit classification, and batch image output.

pub mod classify;
pub mod image;
pub mod param;
pub mod wp;

pub use classify::{classify, Classification};
pub use image::{family_lattice, render, Image, RenderConfig};
pub use param::{plane_point, ParamPoint, ParamSolver};
pub use wp::{wp, WpValue};
