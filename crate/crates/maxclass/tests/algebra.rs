mod common;

use common::*;
use proptest::prelude::*;

#[test]
fn spectrum_for_small_branches() {
    for p in [7, 11] {
        let first = (2 * p as u32 - 8).max(8).max(p as u32);
        for n in first..first + 8 {
            spectrum(&session(p, n, 0)).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigencomponents_reassemble(case in direct_sum_cases()) {
        prop_assert_eq!(direct_sum_case(case), Ok(()));
    }

    #[test]
    fn multiplication_by_p_shifts_by_d(case in scaling_cases()) {
        prop_assert_eq!(scaling_case(case), Ok(()));
    }

    #[test]
    fn action_axioms_hold(case in action_cases()) {
        prop_assert_eq!(action_case(case), Ok(()));
    }

    #[test]
    fn affine_maps_compose(case in affine_cases()) {
        prop_assert_eq!(affine_case(case), Ok(()));
    }

    #[test]
    fn exp_and_log_invert(case in exp_log_cases()) {
        prop_assert_eq!(exp_log_case(case), Ok(()));
    }
}
