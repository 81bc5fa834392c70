//! The plane model and its elliptic structure: curve fitting from samples,
//! Weierstrass invariants, the exact group law, torsion analysis of special
//! points, and the period lattice.

pub mod periods;
pub mod plane;
pub mod point;
pub mod weier;

pub use periods::{agm, eisenstein_invariants, periods, Lattice};
pub use plane::{fit_plane_curve, monomials, FitError, PlaneCurve};
pub use point::{ECPoint, PointOrder, TORSION_BOUND};
pub use weier::{transformed_cubic, weierstrass_from_cubic, Invariants, WeierstrassCurve};
