use aklt_core::density::{density_from_boundary_sum, reduced_density_matrix, spectrum_by_peeling};
use aklt_core::fock::{build_vbs, degenerate_vbs, vbs_norm_closed_form};
use aklt_core::numerics::{factorial, rational_to_f64};
use aklt_core::spectrum::closed_form_spectrum;
use aklt_core::{BigInt, BigRational, ChainSpec};
use num_traits::{One, Signed};
use proptest::prelude::*;

/// Bond numbers for chains of 2–4 bulk spins, kept small enough for brute force.
fn bonds() -> impl Strategy<Value = Vec<i64>> {
    (3usize..=5).prop_flat_map(|n| prop::collection::vec(1i64..=3, n))
}

fn chain_and_block() -> impl Strategy<Value = (ChainSpec, usize, usize)> {
    bonds().prop_flat_map(|b| {
        let chain = ChainSpec::from_bonds(b).unwrap();
        let bulk = chain.num_bulk();
        (Just(chain), 1..=bulk).prop_flat_map(move |(c, k)| {
            let max_len = bulk + 1 - k;
            (Just(c), Just(k), 1..=max_len)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_formula_matches_inner_product(b in bonds()) {
        let chain = ChainSpec::from_bonds(b).unwrap();
        prop_assert_eq!(build_vbs(&chain).norm_squared(), vbs_norm_closed_form(&chain));
    }

    #[test]
    fn density_matrix_is_a_normalized_state((chain, k, len) in chain_and_block()) {
        let block = chain.block(k, len).unwrap();
        let rho = reduced_density_matrix(&chain, &block);
        prop_assert!(rho.trace().is_one());
        prop_assert!(rho.is_self_adjoint());
        prop_assert_eq!(&rho, &density_from_boundary_sum(&block));
        let spec = spectrum_by_peeling(&rho, &block).unwrap();
        prop_assert_eq!(rho.trace_of_square(), spec.trace_of_square());
        for (_, l) in spec.iter() {
            prop_assert!(l.is_positive() && *l < BigRational::one());
        }
    }

    #[test]
    fn closed_form_agrees_with_peeling((chain, k, len) in chain_and_block()) {
        prop_assume!(len >= 2);
        let block = chain.block(k, len).unwrap();
        let rho = reduced_density_matrix(&chain, &block);
        prop_assert_eq!(closed_form_spectrum(&block).unwrap(), spectrum_by_peeling(&rho, &block).unwrap());
    }

    #[test]
    fn eigenvalues_are_rescaled_degenerate_norms((chain, k, len) in chain_and_block()) {
        prop_assume!(len >= 2);
        let block = chain.block(k, len).unwrap();
        let spec = closed_form_spectrum(&block).unwrap();
        let site_factorials: BigInt = block.spins().iter().map(|s| factorial((s.twice() + 1) as u64)).product();
        let interior: BigInt = block.interior_bonds().iter().map(|&m| BigInt::from(m + 1)).product();
        let edges = factorial(block.m_left().into()) * factorial(block.m_right().into());
        let scale = BigRational::new(site_factorials, interior * edges);
        for (j, lambda) in spec.iter() {
            let v = degenerate_vbs(&block, j, j).unwrap();
            let norm = v.inner(&v).unwrap();
            let want = rational_to_f64(&(lambda * &scale));
            prop_assert!(((norm - want) / want).abs() < 1e-8, "J={}: {} vs {}", j, norm, want);
        }
    }
}

#[test]
fn zero_bond_is_rejected() {
    assert!(ChainSpec::from_bonds(vec![1, 0, 1]).is_err());
}
