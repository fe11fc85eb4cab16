use ocha::deformation::{formal, gauge_transform, lift, mc_residual, solve_mc, transport_mc, GaugePath, McPair, McSolve};
use ocha::document::{to_json, StructureDocument};
use ocha::fixtures;
use ocha::graded::{int, koszul_sign, ratio, Permutation, Ring, Scalar, Sector, Trunc, Vector};
use ocha::structures::{check_a_infinity, cohomology, OchaStructure};
use ocha::transfer::{hodge_decompose, transfer_minimal};
use proptest::prelude::*;

const ORDER: usize = 3;

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Scalar> {
    rational().prop_filter("nonzero", |c| !Ring::is_zero(c))
}

fn series(order: usize) -> impl Strategy<Value = Trunc> {
    prop::collection::vec(rational(), 0..=order + 1).prop_map(move |c| Trunc::new(c, order))
}

fn permutation(max: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
}

fn closed_formal(s: &OchaStructure, terms: &[(&str, usize, Scalar)]) -> Vector<Trunc> {
    formal(&s.closed, terms, ORDER).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn truncation_commutes_with_products(a in series(5), b in series(5), k in 1usize..=5) {
        let lhs = a.times(&b).truncated(k);
        let rhs = a.truncated(k).times(&b.truncated(k)).truncated(k);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncated_series_form_a_ring(a in series(4), b in series(4), c in series(4)) {
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert_eq!(a.times(&b), b.times(&a));
    }

    #[test]
    fn koszul_sign_of_inverse_undoes_the_sign(image in permutation(6), seed in prop::collection::vec(-2i32..=3, 6)) {
        let sigma = Permutation::new(image).unwrap();
        let degrees = &seed[..sigma.len()];
        let moved = sigma.permute(degrees);
        let there = koszul_sign(&sigma, degrees).unwrap();
        let back = koszul_sign(&sigma.inverse(), &moved).unwrap();
        prop_assert_eq!(there * back, int(1));
    }

    #[test]
    fn scaling_an_associative_product_keeps_the_verdict(c in nonzero_rational()) {
        for (s, valid) in [(fixtures::dual_numbers(3).unwrap(), true), (fixtures::corrupted_dual_numbers(3).unwrap(), false)] {
            let scaled = OchaStructure { maps: s.maps.scaled(&c), ..s };
            prop_assert_eq!(check_a_infinity(&scaled, 3).is_valid(), valid);
        }
    }

    #[test]
    fn documents_round_trip(c in nonzero_rational(), t in series(ORDER)) {
        let s = fixtures::leibniz_ocha(3).unwrap();
        let scaled = OchaStructure { maps: s.maps.scaled(&c), ..s };
        let text = to_json(&StructureDocument::from_structure(&scaled, None));
        let back: OchaStructure = StructureDocument::parse(&text).unwrap().to_structure().unwrap();
        prop_assert_eq!(&back, &scaled);

        let lifted = lift(&scaled);
        let series_maps = OchaStructure { maps: lifted.maps.scaled(&t).pruned(), ..lifted };
        let text = to_json(&StructureDocument::from_structure(&series_maps, Some(ORDER)));
        let back: OchaStructure<Trunc> = StructureDocument::parse(&text).unwrap().to_structure().unwrap();
        prop_assert_eq!(back, series_maps);
    }

    #[test]
    fn solved_seeds_are_maurer_cartan(lambda in nonzero_rational()) {
        let s = fixtures::exact_square_lie().to_l_infinity(4).unwrap();
        let contraction = cohomology(&s.closed, Sector::Closed, s.l(1)).unwrap();
        let seed = Vector::basis(s.closed.lookup("x").unwrap()).scaled(&lambda);
        let McSolve::Solved(theta) = solve_mc(&s, &seed, &contraction, ORDER).unwrap() else {
            panic!("unexpected obstruction");
        };
        prop_assert!(mc_residual(&s, &McPair::closed_only(theta, ORDER)).unwrap().is_zero());
    }

    #[test]
    fn gauge_endpoints_are_maurer_cartan(first in rational(), second in rational()) {
        let lie = fixtures::small_dg_lie().to_l_infinity(4).unwrap();
        let alpha = closed_formal(&lie, &[("e", 1, first), ("e", 2, second)]);
        let g = gauge_transform(&lie, &McPair::zero(ORDER), &GaugePath::constant(&alpha, &Vector::zero())).unwrap();
        prop_assert!(mc_residual(&lie, &g.endpoint).unwrap().is_zero());
    }

    #[test]
    fn transport_preserves_maurer_cartan(lambda in rational()) {
        let algebra = fixtures::massey_algebra(4).unwrap();
        let t = transfer_minimal(&algebra, &hodge_decompose(&algebra).unwrap(), 4).unwrap();
        let open = formal(&t.minimal.open, &[("a", 1, lambda)], ORDER).unwrap();
        let x = McPair { closed: Vector::zero(), open, order: ORDER };
        prop_assert!(mc_residual(&t.minimal, &x).unwrap().is_zero());
        prop_assert!(mc_residual(&algebra, &transport_mc(&t.inclusion, &x).unwrap()).unwrap().is_zero());
    }
}
