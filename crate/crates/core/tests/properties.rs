mod props;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(props::CASES))]

    #[test]
    fn series_inverse(input in props::series_inverse_strategy()) {
        props::series_inverse(input)?;
    }

    #[test]
    fn split_bundles_match_their_roots(input in props::roots_strategy()) {
        props::root_consistency(input)?;
    }

    #[test]
    fn chern_wu_is_idempotent(input in props::total_strategy()) {
        props::chern_wu_idempotent(input)?;
    }

    #[test]
    fn projection_formula(input in props::total_strategy()) {
        props::projection_formula(input)?;
    }

    #[test]
    fn jet_rank_is_bounded_and_monotone(input in props::chart_strategy()) {
        props::jet_rank_bound(input)?;
    }
}
