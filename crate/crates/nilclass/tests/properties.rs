//! Seeded randomized property tests. The drivers live in `common` and are
//! shared with the acceptance checklist, which runs them under the default
//! seed; this binary uses a different fixed seed for extra coverage while
//! staying reproducible.

mod common;

use nilclass::catalog::load_catalog;

const SEED: u64 = 0x5EED_2026;

#[test]
fn extension_equivalence_matches_cocycle_membership() {
    assert_eq!(common::extension_equivalence_suite(SEED, 200), 200);
}

#[test]
fn pullback_is_a_right_action() {
    assert_eq!(common::pullback_action_suite(SEED, 200), 200);
}

#[test]
fn coboundaries_are_cocycles_in_any_basis() {
    assert_eq!(common::coboundary_inclusion_suite(SEED, 200), 200);
}

#[test]
fn annihilators_of_cataloged_extensions_decompose() {
    let catalog = load_catalog(&common::catalog_dir()).expect("catalog loads");
    assert_eq!(common::annihilator_decomposition_suite(&catalog), 10);
}

#[test]
fn linear_algebra_round_trips() {
    assert_eq!(common::linalg_roundtrip_suite(SEED, 200), 200);
}
