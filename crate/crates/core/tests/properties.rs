use dehn_core::fillers::budget::{gamma_m_sum, gamma_sum};
use dehn_core::words::{commutator, A, S, T};
use dehn_core::{
    area_lower, eval_affine, fill_null_word, fill_null_word_mod, is_identity, Certificate,
    Presentation, VerifyMode, Word,
};
use proptest::prelude::*;

fn word_over(gens: &'static [dehn_core::Gen], max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens.len(), -2i64..=2), 0..max).prop_map(move |syl| {
        Word::from_syllables(
            syl.into_iter()
                .filter(|&(_, e)| e != 0)
                .map(|(g, e)| (gens[g], e)),
        )
        .free_reduce()
    })
}

/// Products of `[a^u, a^v]` and `[s^i, t^j]`, all null in Γ.
fn null_word() -> impl Strategy<Value = Word> {
    let piece = prop_oneof![
        (word_over(&[S, T], 3), word_over(&[S, T], 3), 1i64..=2).prop_map(|(u, v, e)| commutator(
            &Word::pow(A, e).conjugate(&u),
            &Word::gen(A).conjugate(&v)
        )),
        (-2i64..=2, -2i64..=2).prop_map(|(i, j)| commutator(&Word::pow(S, i), &Word::pow(T, j))),
    ];
    prop::collection::vec(piece, 1..3).prop_map(|ps| Word::concat_all(ps.iter()).free_reduce())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn affine_image_is_a_homomorphism(u in word_over(&[A, S, T], 8), v in word_over(&[A, S, T], 8)) {
        for m in [None, Some(3)] {
            let lhs = eval_affine(&u.concat(&v), m).unwrap();
            let rhs = eval_affine(&u, m).unwrap().then(&eval_affine(&v, m).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(eval_affine(&u.concat(&u.inverse()), m).unwrap().is_identity());
        }
    }

    #[test]
    fn gamma_fills_are_sound(w in null_word()) {
        let gamma = Presentation::gamma();
        prop_assert!(is_identity(&w, &gamma).unwrap());
        let d = fill_null_word(&w).unwrap();
        let cert = Certificate::new(gamma, d.clone());
        let report = cert.verify(VerifyMode::Structural, 0).unwrap();
        prop_assert!(report.valid, "{:?}", report.failure);
        prop_assert!(d.from().free_eq(&w) && d.to().is_empty());
        prop_assert!(d.cost() >= &area_lower(&w).unwrap());
        prop_assert!(d.cost() <= &gamma_sum(w.len() as u64));
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), cert.to_json());
    }

    #[test]
    fn torsion_fills_are_sound(w in null_word(), m in 2u64..=4) {
        let pres = Presentation::gamma_m(m).unwrap();
        let d = fill_null_word_mod(&w, m).unwrap();
        let report = Certificate::new(pres, d.clone()).verify(VerifyMode::Structural, 0).unwrap();
        prop_assert!(report.valid, "{:?}", report.failure);
        prop_assert!(d.cost() <= &gamma_m_sum(m, w.len() as u64));
    }

    #[test]
    fn non_null_words_are_refused(w in null_word(), k in 1i64..=3) {
        let w = w.concat(&Word::pow(A, k));
        prop_assert!(fill_null_word(&w).is_err());
        prop_assert!(fill_null_word_mod(&w, 5).is_err());
    }
}
