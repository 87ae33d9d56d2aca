mod common;

use common::*;
use proptest::prelude::*;

fn run(check: Check) -> Result<(), TestCaseError> {
    check.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigh_reconstructs(seed in any::<u64>(), d in 1usize..=8) {
        run(reconstruction(seed, d))?;
    }

    #[test]
    fn exp_inverts_log(seed in any::<u64>(), d in 1usize..=6) {
        run(exp_after_log(seed, d))?;
    }

    #[test]
    fn frechet_log_is_linear(seed in any::<u64>(), d in 1usize..=6) {
        run(frechet_linearity(seed, d))?;
    }

    #[test]
    fn frechet_log_matches_finite_difference(seed in any::<u64>(), d in 1usize..=6) {
        run(frechet_finite_difference(seed, d))?;
    }

    #[test]
    fn resolutions_are_orthogonal_and_complete(seed in any::<u64>(), d in 1usize..=6) {
        run(resolution_identities(seed, d))?;
    }

    #[test]
    fn absolute_continuity_is_a_preorder(seed in any::<u64>(), d in 1usize..=5) {
        run(absolute_continuity_preorder(seed, d))?;
    }

    #[test]
    fn weak_lueders_lands_in_commutant(seed in any::<u64>(), d in 1usize..=6) {
        run(weak_lueders_in_commutant(seed, d))?;
    }

    #[test]
    fn block_remainder_is_orthogonal(seed in any::<u64>(), d in 1usize..=6) {
        run(pinching_is_orthogonal(seed, d))?;
    }

    #[test]
    fn divergences_separate_states(seed in any::<u64>(), d in 2usize..=4) {
        run(nonnegativity_and_identity(seed, d))?;
    }

    #[test]
    fn umegaki_reduces_to_kl_on_diagonals(seed in any::<u64>(), d in 1usize..=6) {
        run(commutative_reduction(seed, d))?;
    }

    #[test]
    fn d0_is_flipped_d1(seed in any::<u64>(), d in 1usize..=5) {
        run(flip_identity(seed, d))?;
    }

    #[test]
    fn d_half_from_raggio(seed in any::<u64>(), d in 1usize..=5) {
        run(d_half_identity(seed, d))?;
    }

    #[test]
    fn transition_probabilities_agree_when_commuting(seed in any::<u64>(), d in 1usize..=5) {
        run(commuting_transition_probabilities(seed, d))?;
    }

    #[test]
    fn umegaki_jointly_convex(seed in any::<u64>(), d in 2usize..=4) {
        run(joint_convexity(seed, d))?;
    }

    #[test]
    fn relative_modular_spectrum(seed in any::<u64>(), d in 1usize..=4) {
        run(modular_spectrum(seed, d))?;
    }

    #[test]
    fn araki_matches_umegaki(seed in any::<u64>(), d in 2usize..=4) {
        run(araki_equals_umegaki(seed, d))?;
    }

    #[test]
    fn support_violation_infinite(seed in any::<u64>(), d in 2usize..=4) {
        run(support_violation_is_infinite(seed, d))?;
    }

    #[test]
    fn cocycle_chain(seed in any::<u64>(), d in 1usize..=4) {
        run(cocycle_chain_rule(seed, d))?;
    }

    #[test]
    fn petz_limit_converges(seed in any::<u64>(), d in 2usize..=3) {
        run(petz_convergence(seed, d))?;
    }

    #[test]
    fn weak_lueders_is_an_orthogonal_projection(seed in any::<u64>(), d in 1usize..=6) {
        run(weak_lueders_properties(seed, d))?;
    }

    #[test]
    fn quantum_jeffrey_hits_marginals(seed in any::<u64>(), d in 1usize..=6) {
        run(jeffrey_marginals(seed, d))?;
    }

    #[test]
    fn jeffrey_keeps_conditionals(seed in any::<u64>(), n in 2usize..=4) {
        run(jeffrey_preserves_conditionals(seed, n))?;
    }

    #[test]
    fn von_neumann_is_lueders_on_pure_states(seed in any::<u64>(), d in 1usize..=6) {
        run(von_neumann_matches_lueders(seed, d))?;
    }

    #[test]
    fn weak_lueders_fixes_commuting_diagonal(seed in any::<u64>(), d in 1usize..=6) {
        run(weak_lueders_fixes_diagonal(seed, d))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solver_objective_never_rises(seed in any::<u64>(), d in 2usize..=4) {
        run(objective_monotone(seed, d))?;
    }

    #[test]
    fn random_starts_agree(seed in any::<u64>(), d in 2usize..=4) {
        run(uniqueness_probe(seed, d))?;
    }

    #[test]
    fn oracle_never_beats_solver(seed in any::<u64>(), d in 2usize..=3) {
        run(oracle_not_below_solver(seed, d))?;
    }

    #[test]
    fn pythagorean_equality(seed in any::<u64>(), d in 2usize..=4) {
        let worst = pythagorean(seed, d, 5).map_err(TestCaseError::fail)?;
        prop_assert!(worst <= 1e-9, "residual {worst:e}");
    }
}
