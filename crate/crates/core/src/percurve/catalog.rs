//! Named construction of the degree-2, period-5 boundary types: the eleven
//! strata met by the curve closure, the filter-passing strata it misses, the
//! one filter-rejected stratum that shares a ramified chart with g6, and the
//! classic counterexample shape whose stabilizations disagree.

use crate::treecover::{build_type, CombinatorialType, Mark, MarkedTree, MARK_STAR};
use std::collections::BTreeMap;

fn chain(leg_groups: &[&[Mark]]) -> MarkedTree {
    let n = leg_groups.len();
    let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mk = leg_groups
        .iter()
        .enumerate()
        .flat_map(|(v, g)| g.iter().map(move |&m| (m, v)))
        .collect();
    MarkedTree::new(n, edges, mk)
}

fn star4(center: &[Mark], arms: [&[Mark]; 3]) -> MarkedTree {
    // center = vertex 0, arms attached to it
    let mut mk: Vec<(Mark, usize)> = center.iter().map(|&m| (m, 0)).collect();
    for (i, arm) in arms.iter().enumerate() {
        for &m in arm.iter() {
            mk.push((m, i + 1));
        }
    }
    MarkedTree::new(4, vec![(0, 1), (0, 2), (0, 3)], mk)
}

fn assign(pairs: &[(Mark, usize)]) -> BTreeMap<Mark, usize> {
    pairs.iter().cloned().collect()
}

fn mk_type(tau: MarkedTree, pairs: &[(Mark, usize)]) -> CombinatorialType {
    build_type(&tau, 2, 5, &assign(pairs)).expect("catalog type builds")
}

const S: Mark = MARK_STAR;

/// The eleven types whose strata meet the curve closure, labeled g1..g7 for
/// the punctures and gI..gIV for the fully critical-cycle points.
pub fn per25_meeting_types() -> Vec<(String, CombinatorialType)> {
    vec![
        (
            "g1".into(),
            mk_type(
                chain(&[&[2, S], &[1], &[5], &[3, 4]]),
                &[(2, 1), (3, 0), (4, 0), (5, 0)],
            ),
        ),
        (
            "g2".into(),
            mk_type(
                chain(&[&[2, S], &[3], &[1], &[4, 5]]),
                &[(2, 0), (3, 0), (4, 1), (5, 1)],
            ),
        ),
        (
            "g3".into(),
            mk_type(
                star4(&[], [&[2, S], &[3, 5], &[1, 4]]),
                &[(2, 0), (3, 0), (4, 1), (5, 0)],
            ),
        ),
        (
            "g4".into(),
            mk_type(
                chain(&[&[2, S], &[3, 4], &[1, 5]]),
                &[(2, 0), (3, 0), (4, 0), (5, 1)],
            ),
        ),
        (
            "g5".into(),
            mk_type(chain(&[&[2, 4, S], &[1, 3, 5]]), &[(2, 0), (4, 0), (5, 1)]),
        ),
        (
            "g6".into(),
            mk_type(chain(&[&[2, 5, S], &[1, 3, 4]]), &[(2, 0), (3, 1), (5, 0)]),
        ),
        (
            "g7".into(),
            mk_type(
                chain(&[&[2, S], &[1, 3, 4, 5]]),
                &[(2, 0), (3, 0), (4, 0), (5, 0)],
            ),
        ),
        ("gI".into(), mk_type(chain(&[&[1, S], &[2, 3, 4, 5]]), &[])),
        ("gII".into(), mk_type(chain(&[&[3, S], &[1, 2, 4, 5]]), &[(2, 0)])),
        ("gIII".into(), mk_type(chain(&[&[4, S], &[1, 2, 3, 5]]), &[(3, 0)])),
        ("gIV".into(), mk_type(chain(&[&[5, S], &[1, 2, 3, 4]]), &[(4, 0)])),
    ]
}

/// Filter-passing types the curve closure misses (they intersect only the
/// excess components of the diagonal locus).
pub fn per25_nonmeeting_types() -> Vec<(String, CombinatorialType)> {
    vec![
        (
            "n1".into(),
            mk_type(
                chain(&[&[2, S], &[4], &[3], &[1, 5]]),
                &[(2, 0), (3, 0), (4, 0), (5, 1)],
            ),
        ),
        (
            "n2".into(),
            mk_type(
                chain(&[&[2, S], &[4], &[1], &[3, 5]]),
                &[(2, 0), (3, 1), (4, 0), (5, 1)],
            ),
        ),
        (
            "n3".into(),
            mk_type(
                chain(&[&[2, 4], &[S], &[5], &[1, 3]]),
                &[(2, 0), (4, 0), (5, 1)],
            ),
        ),
        (
            "n4".into(),
            mk_type(chain(&[&[4, S], &[2], &[1, 3, 5]]), &[(2, 0), (4, 0), (5, 1)]),
        ),
        (
            "n5".into(),
            mk_type(
                chain(&[&[2, S], &[5], &[1], &[3, 4]]),
                &[(2, 0), (3, 1), (4, 1), (5, 0)],
            ),
        ),
        (
            "n6".into(),
            mk_type(
                chain(&[&[2, S], &[5], &[4], &[1, 3]]),
                &[(2, 0), (3, 1), (4, 0), (5, 0)],
            ),
        ),
        (
            "n7".into(),
            mk_type(
                chain(&[&[2, 5], &[S], &[3], &[1, 4]]),
                &[(2, 0), (3, 1), (5, 0)],
            ),
        ),
        (
            "n8".into(),
            mk_type(chain(&[&[5, S], &[2], &[1, 3, 4]]), &[(2, 0), (3, 1), (5, 0)]),
        ),
    ]
}

/// The stratum sharing the twofold ramified chart with g6: a valid type, but
/// its stabilized trees disagree, so the diagonal filter rejects it.
pub fn ramified_chart_partner() -> CombinatorialType {
    mk_type(chain(&[&[1, 3, S], &[2, 4, 5]]), &[(2, 0), (3, 0), (4, 0), (5, 0)])
}

/// The classic shape with sigma-bar and tau-bar non-isomorphic.
pub fn mismatched_stabilization_type() -> CombinatorialType {
    mk_type(
        chain(&[&[2, S], &[3, 4], &[1, 5]]),
        &[(2, 0), (3, 0), (4, 1), (5, 1)],
    )
}
