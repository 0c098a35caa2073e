use std::time::Instant;

use clifford::{
    build_gammas, chirality, cliff11_reference, expected_signs, find_real_structure, gamma_word_trace, intertwiner,
    CMatrix, GammaWord, Index, Signature,
};
use num_complex::Complex;
use proptest::prelude::*;

fn c(re: i64, im: i64) -> Complex<i64> {
    Complex::new(re, im)
}

#[test]
fn every_signature_up_to_eight_satisfies_the_clifford_relations() {
    for p in 1..=8 {
        for s in 0..=p {
            let g = build_gammas(Signature::new(p - s, s).unwrap()).unwrap();
            assert_eq!(g.dim(), 1 << (p / 2));
            assert!(g.anticommutators_hold(), "r = {}, s = {s}", p - s);
            assert!(g.hermiticity_holds(), "r = {}, s = {s}", p - s);
        }
    }
}

#[test]
fn one_dimensional_generator_is_i() {
    let g = build_gammas(Signature::euclidean(1).unwrap()).unwrap();
    assert_eq!(*g.gamma(0), CMatrix::scalar(1, c(0, 1)));
    assert_eq!(g.gamma(0) * g.gamma(0), CMatrix::scalar(1, c(-1, 0)));
}

#[test]
fn signature_guards() {
    assert!(Signature::new(0, 0).is_err());
    assert!(Signature::new(13, 0).is_err());
    assert!(Signature::new(12, 0).is_ok());
}

#[test]
fn split_signature_matches_real_two_by_two_model() {
    let reference = cliff11_reference();
    let v = |v1: i64, v2: i64| &reference[0].scale(c(v1, 0)) + &reference[1].scale(c(v2, 0));
    assert_eq!(v(3, 5), CMatrix::from_rows(&[&[c(5, 0), c(3, 0)], &[c(-3, 0), c(-5, 0)]]));

    let g = build_gammas(Signature::new(1, 1).unwrap()).unwrap();
    let s = intertwiner(g.gammas(), &reference).expect("equivalent representations");
    assert_eq!(s.rank(), 2);
}

#[test]
fn chirality_in_even_dimension_is_a_grading() {
    for p in [2, 4, 6, 8] {
        let g = build_gammas(Signature::euclidean(p).unwrap()).unwrap();
        let w = chirality(&g).unwrap();
        assert_eq!(&w * &w, CMatrix::identity(g.dim()));
        assert_eq!(w.trace(), c(0, 0));
        for gamma in g.gammas() {
            assert!((&(&w * gamma) + &(gamma * &w)).is_zero());
        }
    }
}

#[test]
fn chirality_in_odd_dimension_is_central() {
    for p in [1, 3, 5, 7] {
        let g = build_gammas(Signature::euclidean(p).unwrap()).unwrap();
        let w = chirality(&g).unwrap();
        assert_eq!(&w * &w, CMatrix::identity(g.dim()));
        for gamma in g.gammas() {
            assert_eq!(&w * gamma, gamma * &w);
        }
    }
    let lorentzian = build_gammas(Signature::new(3, 1).unwrap()).unwrap();
    assert!(chirality(&lorentzian).is_err());
}

#[test]
fn real_structures_follow_the_mod_eight_table() {
    let start = Instant::now();
    for p in 1..=8 {
        let j = find_real_structure(p).unwrap();
        assert_eq!(j.signs, expected_signs(p), "p = {p}");
        let g = build_gammas(Signature::euclidean(p).unwrap()).unwrap();
        assert!(j.verify(&g));
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn sign_table_spot_values() {
    assert_eq!((expected_signs(1).eps, expected_signs(1).eps_prime), (1, -1));
    let two = expected_signs(2);
    assert_eq!((two.eps, two.eps_prime, two.eps_double_prime), (-1, 1, Some(-1)));
    let four = expected_signs(4);
    assert_eq!((four.eps, four.eps_prime, four.eps_double_prime), (-1, 1, Some(1)));
}

fn concrete_trace(p: usize, values: &[usize]) -> Complex<i64> {
    let g = build_gammas(Signature::euclidean(p).unwrap()).unwrap();
    g.product(&values.iter().map(|v| v - 1).collect::<Vec<_>>()).trace()
}

fn all_words(p: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter().flat_map(|w| (1..=p).map(move |v| [w.clone(), vec![v]].concat())).collect()
    })
}

#[test]
fn symbolic_trace_matches_matrices_on_all_concrete_words() {
    for p in [2, 3, 4] {
        for len in 0..=6 {
            for values in all_words(p, len) {
                let word = GammaWord::new(values.iter().map(|&v| Index::Val(v)).collect());
                let symbolic = gamma_word_trace(&word, p).unwrap();
                assert_eq!(symbolic.evaluate(&|_| unreachable!()), concrete_trace(p, &values), "p = {p}, {values:?}");
            }
        }
    }
}

#[test]
fn basic_trace_values() {
    for p in [2, 3, 4] {
        let k = 1i64 << (p / 2);
        let empty = gamma_word_trace(&GammaWord::new(vec![]), p).unwrap();
        assert_eq!(empty.evaluate(&|_| 0), c(k, 0));
        let single = gamma_word_trace(&GammaWord::labels(&[0]), p).unwrap();
        assert!(single.poly.is_zero());
        let pair = gamma_word_trace(&GammaWord::labels(&[0, 1]), p).unwrap();
        let terms: Vec<_> = pair.poly.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, &vec![(Index::Sym(0), Index::Sym(1))]);
        assert_eq!(pair.spinor_dim as i64 * terms[0].1, c(-k, 0));
    }
}

#[test]
fn odd_dimension_top_degree_word_is_nonzero() {
    let t = gamma_word_trace(&GammaWord::new(vec![Index::Val(1), Index::Val(2), Index::Val(3)]), 3).unwrap();
    assert_ne!(t.evaluate(&|_| 0), c(0, 0));
}

#[test]
fn overlong_words_are_rejected() {
    assert!(gamma_word_trace(&GammaWord::labels(&[0; 9]), 4).is_err());
}

/// Brute-force trace of a labeled word, summing repeated labels over `1..=p`.
fn summed_trace(p: usize, labels: &[u32], free: &dyn Fn(u32) -> usize) -> Complex<i64> {
    let word = GammaWord::labels(labels);
    let contracted: Vec<u32> = word.contracted().into_iter().collect();
    let mut total = c(0, 0);
    for assignment in all_words(p, contracted.len()) {
        let value = |l: u32| match contracted.iter().position(|&x| x == l) {
            Some(k) => assignment[k],
            None => free(l),
        };
        total += concrete_trace(p, &labels.iter().map(|&l| value(l)).collect::<Vec<_>>());
    }
    total
}

fn labeled_word() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0u32..4, 0..=6)
        .prop_filter("labels occur at most twice", |w| (0..4).all(|l| w.iter().filter(|&&x| x == l).count() <= 2))
}

proptest! {
    #[test]
    fn contracted_words_match_brute_force(labels in labeled_word(), p in 2usize..=4, seed in 0usize..1000) {
        let free = move |l: u32| 1 + (seed / (l as usize + 1)) % p;
        let symbolic = gamma_word_trace(&GammaWord::labels(&labels), p).unwrap();
        prop_assert_eq!(symbolic.evaluate(&free), summed_trace(p, &labels, &free));
    }
}
