use exact::{qi_int, QMatrix, Span};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, raw: &[(i64, i64)]) -> QMatrix {
    QMatrix::from_fn(rows, cols, |r, c| {
        let (re, im) = raw[r * cols + c];
        qi_int(re, im)
    })
}

fn entries(rows: usize, cols: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-2i64..=2, -2i64..=2), rows * cols)
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(raw in entries(4, 6)) {
        let a = matrix(4, 6, &raw);
        prop_assert_eq!(a.rank() + a.nullspace().len(), 6);
    }

    #[test]
    fn null_vectors_are_annihilated(raw in entries(3, 5)) {
        let a = matrix(3, 5, &raw);
        for x in a.nullspace() {
            let col = QMatrix::from_fn(5, 1, |r, _| x[r].clone());
            prop_assert!((&a * &col).is_zero());
        }
    }

    #[test]
    fn span_contains_its_rows_and_combinations(raw in entries(3, 4), w in (-3i64..=3, -3i64..=3)) {
        let a = matrix(3, 4, &raw);
        let mut span = Span::new();
        for r in 0..3 {
            span.insert(&(0..4).map(|c| a[(r, c)].clone()).collect::<Vec<_>>());
        }
        prop_assert_eq!(span.dim(), a.rank());
        let combo: Vec<_> = (0..4).map(|c| &a[(0, c)] * qi_int(w.0, 0) + &a[(2, c)] * qi_int(0, w.1)).collect();
        prop_assert!(span.contains(&combo));
    }

    #[test]
    fn adjoint_reverses_products(x in entries(3, 3), y in entries(3, 3)) {
        let (a, b) = (matrix(3, 3, &x), matrix(3, 3, &y));
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
    }
}
