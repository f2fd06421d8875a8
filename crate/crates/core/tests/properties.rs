use approx::assert_abs_diff_eq;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mbp_core::lattice::{Defect, StabilizerTableau};
use mbp_core::masking::{self, BraidWord, MaskInput, Party};
use mbp_core::noise::{self, ChannelKind, CollectiveChannel};
use mbp_core::puncture::{self, PunctureState, Subspace};
use mbp_core::AnyonModel;

fn arb_state(n_pairs: usize) -> impl Strategy<Value = PunctureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n_pairs)
        .prop_filter("non-zero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(move |v| {
            PunctureState::new(n_pairs, v.into_iter().map(|(a, b)| C::new(a, b)).collect()).unwrap()
        })
}

fn arb_input() -> impl Strategy<Value = MaskInput> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3)
        .prop_filter("non-zero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| {
            let z: Vec<C> = v.into_iter().map(|(a, b)| C::new(a, b)).collect();
            let n = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            MaskInput::new(z[0] / n, z[1] / n, z[2] / n).unwrap()
        })
}

fn arb_word() -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1usize..=3, 1usize..=3), 0..6)
        .prop_map(|letters| BraidWord(letters.into_iter().filter(|(i, j)| i != j).collect()))
}

proptest! {
    #[test]
    fn noise_preserves_norm(s in arb_state(2), p in 0.0f64..std::f64::consts::TAU, rot in any::<bool>()) {
        let ch = if rot { CollectiveChannel::rotation(p) } else { CollectiveChannel::dephasing(p) };
        let out = noise::apply_channel(&ch, &puncture::embed_full(&s));
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gram_is_identity(p in -10.0f64..10.0, sym in any::<bool>(), rot in any::<bool>()) {
        let sub = if sym { Subspace::Symmetric } else { Subspace::Antisymmetric };
        let kind = if rot { ChannelKind::Rotation } else { ChannelKind::Dephasing };
        let r = noise::gram_check(sub, &CollectiveChannel { kind, parameter: p });
        prop_assert!(r.identity_deviation() < 1e-12);
    }

    #[test]
    fn marginals_are_maximally_mixed(input in arb_input(), word in arb_word()) {
        let model = AnyonModel::ising();
        let r = masking::masking_braid_invariance(&model, &input, &word).unwrap();
        prop_assert!(r.max_marginal_deviation < 1e-12);
        let plain = masking::mask(&input);
        for p in Party::ALL {
            prop_assert!(masking::deviation_from_maximally_mixed(&masking::marginal(&plain, p)) < 1e-12);
        }
    }

    #[test]
    fn double_braids_commute_and_square_to_one(s in arb_state(3), a in 1usize..=3, b in 1usize..=3, c in 1usize..=3, d in 1usize..=3) {
        prop_assume!(a != b && c != d);
        let ab = puncture::double_braid(&s, a, b).unwrap();
        let abcd = puncture::double_braid(&ab, c, d).unwrap();
        let cdab = puncture::double_braid(&puncture::double_braid(&s, c, d).unwrap(), a, b).unwrap();
        prop_assert!(abcd.max_diff(&cdab) < 1e-15);
        prop_assert!(puncture::double_braid(&ab, a, b).unwrap().max_diff(&s) < 1e-15);
        prop_assert!(puncture::double_braid(&s, b, a).unwrap().max_diff(&ab) < 1e-15);
    }

    #[test]
    fn fusion_basis_change_is_involution(s in arb_state(2)) {
        let f = puncture::fusion_basis_change(&s).unwrap();
        prop_assert!(puncture::fusion_basis_change(&f).unwrap().max_diff(&s) < 1e-12);
        assert_abs_diff_eq!(f.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn count_logical_invariant_under_row_operations(ops in prop::collection::vec((0usize..64, 0usize..64), 1..40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = StabilizerTableau::build_torus(8).unwrap();
        t.create_puncture(&Defect::solid(vec![(2, 2)]), &mut rng).unwrap();
        t.create_puncture(&Defect::solid(vec![(6, 4)]), &mut rng).unwrap();
        let before = t.count_logical().unwrap();
        let mut gens = t.generators().to_vec();
        for (i, j) in ops {
            let (i, j) = (i % gens.len(), j % gens.len());
            if i != j {
                gens[i] = gens[i].mul(&gens[j]);
            }
        }
        let moved = StabilizerTableau::from_generators(*t.lattice(), gens).unwrap();
        prop_assert_eq!(moved.count_logical().unwrap(), before);
        prop_assert_eq!(before, 3);
    }

    #[test]
    fn mixed_punctures_always_commute(row in 0usize..4, col in 0usize..5, k in 1usize..=2, seed in any::<u64>()) {
        let lat_side = 8;
        prop_assume!((row + col) % 2 == 1 && row + 2 * k + 1 <= lat_side && col + 2 <= lat_side);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = StabilizerTableau::build_torus(lat_side).unwrap();
        t.create_puncture(&Defect::mixed(row, col, k), &mut rng).unwrap();
        prop_assert!(t.all_commute());
        prop_assert_eq!(t.y_generators().len(), 2);
    }
}
