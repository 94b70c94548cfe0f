use proptest::prelude::*;

use symmwig::covariance::v_n_exact;
use symmwig::ensemble::{sample_matrix, EnsembleConfig, EntryModel, SymmetryClass};
use symmwig::chebyshev::trace_cheb_vector;
use symmwig::patterns::{check_domino, classify_delta, DeltaShape, DominoMode, DELTA_ALPHABET};
use symmwig::Budget;

fn class_of(ci: bool) -> SymmetryClass {
    if ci {
        SymmetryClass::Ci
    } else {
        SymmetryClass::Diii
    }
}

fn model_strategy() -> impl Strategy<Value = EntryModel> {
    prop_oneof![
        (0.1f64..4.0).prop_map(|s| EntryModel::gaussian(s).unwrap()),
        (0.1f64..4.0).prop_map(|s| EntryModel::rademacher(s).unwrap()),
        (0.1f64..0.9).prop_map(|p| {
            // centered two-point law
            let q = 1.0 - p;
            EntryModel::atoms(vec![(-q, p), (p, q)]).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_are_hermitian_and_traceless(ci in any::<bool>(), n in 2usize..12, seed in any::<u64>(), model in model_strategy()) {
        let s = sample_matrix(class_of(ci), n, &model, seed).unwrap();
        let c = s.to_complex();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                prop_assert_eq!(c[[i, j]], c[[j, i]].conj());
            }
        }
        prop_assert_eq!(s.trace().re, 0.0);
        prop_assert_eq!(s.trace().im, 0.0);
        prop_assert_eq!(trace_cheb_vector(&s, 1, model.sigma()).unwrap()[0], 0.0);
    }

    #[test]
    fn consistent_sequences_have_even_step_count(
        reverse in any::<bool>(),
        first in 0usize..8,
        choices in prop::collection::vec(any::<bool>(), 1..8),
    ) {
        let mode = if reverse { DominoMode::Reverse } else { DominoMode::Forward };
        let mut seq = vec![DELTA_ALPHABET[first]];
        for &c in &choices {
            let next: Vec<_> = mode.successors(*seq.last().unwrap()).collect();
            prop_assert_eq!(next.len(), 2);
            seq.push(next[usize::from(c)]);
        }
        prop_assume!(check_domino(&seq, mode));
        let steps = seq
            .iter()
            .filter(|&&d| classify_delta(d).unwrap() == DeltaShape::Step)
            .count();
        prop_assert_eq!(steps % 2, 0);
    }

    #[test]
    fn ensemble_config_roundtrip(ci in any::<bool>(), n in 2usize..100, seed in any::<u64>(), model in model_strategy()) {
        let text = format!(
            "class={}\nn={n}\nsigma2={}\nfamily={}\nseed={seed}\n",
            class_of(ci),
            model.sigma2(),
            model.family()
        );
        let cfg = EnsembleConfig::parse(&text).unwrap();
        prop_assert_eq!(cfg.to_string(), text);
        prop_assert_eq!(cfg.model, model);
    }
}

#[test]
fn classes_approach_each_other() {
    let g = EntryModel::gaussian(1.0).unwrap();
    let gaps: Vec<f64> = [4usize, 6, 8, 10, 12]
        .iter()
        .map(|&n| {
            let d = v_n_exact(SymmetryClass::Diii, n, 4, &g, Budget::default()).unwrap();
            let c = v_n_exact(SymmetryClass::Ci, n, 4, &g, Budget::default()).unwrap();
            (d - c).abs()
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    for n in [4usize, 8, 12] {
        for class in SymmetryClass::ALL {
            assert_eq!(v_n_exact(class, n, 3, &g, Budget::default()).unwrap(), 0.0);
        }
    }
}
