mod common;

use common::*;
use maxclass::analysis::check_ramification;
use maxclass::equivalence::{check_fixed_points, check_local_to_global};
use maxclass::oracle::{brute_orbits, compare_with_skeleton, Mismatch, DEFAULT_BUDGET};
use maxclass::periodicity::{check_periodicity, check_slice_counts, slice_counts};
use maxclass::report::Status;
use maxclass::roots::{check_root_agreement, check_root_congruence, compare_roots};
use maxclass::skeleton::Parallelism;
use maxclass::Error;

#[test]
fn oracle_agrees_with_the_skeleton() {
    let s = s7_11();
    let (tree, _) = s7_11_tree();
    for e in 0..=2 {
        let oracle = brute_orbits(s, e, DEFAULT_BUDGET).unwrap();
        assert_eq!(compare_with_skeleton(s, tree, &oracle).unwrap(), None, "depth {e}");
    }
}

#[test]
fn oracle_reports_a_wrong_galois_order() {
    let s = s7_11();
    let mut tree = s7_11_tree().0.clone();
    let idx = tree.level(2).start;
    tree.nodes[idx].gal += 1;
    let oracle = brute_orbits(s, 2, DEFAULT_BUDGET).unwrap();
    let m = compare_with_skeleton(s, &tree, &oracle).unwrap();
    assert!(matches!(m, Some(Mismatch::Galois { .. })), "{m:?}");
}

#[test]
fn oracle_respects_its_budget() {
    let err = brute_orbits(s7_11(), 4, 1000).unwrap_err();
    assert!(matches!(err, Error::EnumerationBudget { .. }));
}

#[test]
fn local_and_global_fixing_agree() {
    let s = s7_11();
    for e in 1..=2 {
        let oracle = brute_orbits(s, e, DEFAULT_BUDGET).unwrap();
        let check = check_local_to_global(s, &oracle).unwrap();
        assert_eq!(check.status, Status::Pass, "{}", check.detail);
    }
}

#[test]
fn every_node_has_global_fixed_points() {
    let s = session(7, 11, 4);
    let tree = maxclass::skeleton::build_skeleton(&s, maxclass::skeleton::BuildOptions::full(4)).unwrap();
    let check = check_fixed_points(&s, &tree, Parallelism::Auto).unwrap();
    assert_eq!(check.status, Status::Pass, "{}", check.detail);
}

#[test]
fn root_criterion_matches_galois_labels() {
    let s = s7_11();
    let (tree, _) = s7_11_tree();
    let comparisons = compare_roots(s, tree, Parallelism::Auto).unwrap();
    assert!(comparisons.iter().any(|c| c.direct));
    assert!(comparisons.iter().any(|c| !c.direct));
    let check = check_root_agreement(s, &comparisons);
    assert_eq!(check.status, Status::Pass, "{}", check.detail);
    assert_eq!(check_root_congruence(s, &comparisons).status, Status::Pass);
}

#[test]
fn ramification_and_slices_on_s7_11() {
    let s = s7_11();
    let (tree, trees) = s7_11_tree();
    let (check, reports) = check_ramification(s, tree, trees).unwrap();
    assert_eq!(check.status, Status::Pass, "{}", check.detail);
    assert!(reports.iter().all(|r| r.realized_residues.iter().all(|x| r.allowed_residues.contains(x))));
    let records = slice_counts(s, tree, trees, 4, Parallelism::Auto).unwrap();
    assert!(records.iter().any(|r| r.kernel.instances > 0));
    for c in check_slice_counts(s, &records) {
        assert_eq!(c.status, Status::Pass, "{}: {}", c.name, c.detail);
    }
}

#[test]
fn periodicity_is_vacuous_when_out_of_reach() {
    let checks = check_periodicity(s7_11(), &[], &[]);
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0].status, Status::Vacuous);
}
