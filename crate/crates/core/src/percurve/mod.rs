//! The dynamical curve: diagonal equations, numeric sampling, exact puncture
//! solving over boundary strata, critical-cycle point solving, and the
//! period-4 family analysis.

pub mod catalog;
pub mod diagonal;
pub mod dynmap;
pub mod pcf;
pub mod perd4;
pub mod puncture;
pub mod rho;
pub mod sampler;
pub mod strata;

pub use diagonal::{diagonal_system, DiagonalSystem};
pub use dynmap::{chordal, moebius_from_triple, DynMap, Moebius};
pub use pcf::{pcf_json, pcf_solve_all, pcf_solve_labeled, PcfPoint};
pub use perd4::{perd4_json, perd4_report, Perd4Report};
pub use puncture::{punctures_25, punctures_json, Puncture};
pub use rho::{rho_degree, rho_degree_dropping};
pub use sampler::{plane_chart, sample_curve};
pub use strata::{analyze_stratum, build_family, phase_assignments, StratumFamily, StratumOutcome};
