//! Point configurations on the projective line and on nodal trees:
//! cross-ratios and their functional equations, boundary values, plumbing
//! families, and the two projections to configuration space.

pub mod config;
pub mod pimaps;
pub mod plumb;

pub use config::{
    boundary_cross_ratio, cr_rewrite, cross_ratio, cross_ratio_points, BoundaryCr, Configuration,
    ModuliError, PointP1,
};
pub use pimaps::{pi_maps, power_relation_residual, HPoint};
pub use plumb::{plumb, plumb_in, PlumbingFamily};
