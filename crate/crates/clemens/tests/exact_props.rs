//! Property-based invariants for the exact arithmetic layer.

use proptest::prelude::*;

use clemens::exact::{matrix, ExactMatrix, GaussRat, Rat, Subspace, TruncatedPoly};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rat::new(p, q))
}

fn arb_gauss() -> impl Strategy<Value = GaussRat> {
    (arb_rat(), arb_rat()).prop_map(|(re, im)| GaussRat::new(re, im))
}

fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(arb_gauss(), r * c)
            .prop_map(move |entries| {
                ExactMatrix::from_fn(r, c, |i, j| entries[i * c + j].clone())
            })
    })
}

/// Random matrix with an exact column count (rows still vary).
fn arb_matrix_cols(max_rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_rows).prop_flat_map(move |r| {
        proptest::collection::vec(arb_gauss(), r * cols)
            .prop_map(move |entries| {
                ExactMatrix::from_fn(r, cols, |i, j| entries[i * cols + j].clone())
            })
    })
}

/// Pair of square matrices of one shared size.
fn arb_square_pair(max_n: usize) -> impl Strategy<Value = (ExactMatrix, ExactMatrix)> {
    (2..=max_n).prop_flat_map(move |n| {
        (
            proptest::collection::vec(arb_gauss(), n * n),
            proptest::collection::vec(arb_gauss(), n * n),
        )
            .prop_map(move |(ea, eb)| {
                (
                    ExactMatrix::from_fn(n, n, |i, j| ea[i * n + j].clone()),
                    ExactMatrix::from_fn(n, n, |i, j| eb[i * n + j].clone()),
                )
            })
    })
}

fn arb_poly(vars: usize, cap: u32) -> impl Strategy<Value = TruncatedPoly> {
    let monos: Vec<Vec<u32>> = {
        // all exponent vectors with total degree ≤ cap
        let mut out = vec![vec![0u32; vars]];
        for _ in 0..cap {
            let mut next = Vec::new();
            for e in &out {
                for i in 0..vars {
                    let mut e2 = e.clone();
                    e2[i] += 1;
                    if e2.iter().sum::<u32>() <= cap && !next.contains(&e2) {
                        next.push(e2);
                    }
                }
            }
            out.extend(next);
        }
        out.sort();
        out.dedup();
        out
    };
    proptest::collection::vec(proptest::option::of(arb_gauss()), monos.len()).prop_map(
        move |coeffs| {
            let mut p = TruncatedPoly::zero(vars, cap);
            for (e, c) in monos.iter().zip(coeffs) {
                if let Some(c) = c {
                    let mut term = TruncatedPoly::constant(vars, cap, c);
                    for (i, &k) in e.iter().enumerate() {
                        for _ in 0..k {
                            term = term.mul(&TruncatedPoly::var(vars, cap, i));
                        }
                    }
                    p = p.add(&term);
                }
            }
            p
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// RREF canonicality: two generating sets of the same row space give the
    /// same reduced form. (Simulated by row-mixing the generators.)
    #[test]
    fn rref_is_canonical(m in arb_matrix(5, 7)) {
        let mixed = {
            let mut rows = m.row_vecs();
            let extra: Vec<Vec<GaussRat>> = rows
                .windows(2)
                .map(|w| matrix::vec_add(&w[0], &matrix::vec_scale(&w[1], &GaussRat::from_int(3))))
                .collect();
            rows.extend(extra);
            rows.reverse();
            ExactMatrix::from_rows(rows)
        };
        let a = Subspace::from_generators(m.cols(), &m);
        let b = Subspace::from_generators(m.cols(), &mixed);
        prop_assert_eq!(a, b);
    }

    /// Every original row is a member of the RREF row space (membership
    /// solved by an independent linear solve).
    #[test]
    fn rref_preserves_row_space(m in arb_matrix(5, 7)) {
        let s = Subspace::from_generators(m.cols(), &m);
        for r in 0..m.rows() {
            prop_assert!(s.contains_vec(m.row(r)));
        }
    }

    /// Grassmann identity dim(a+b) + dim(a∩b) = dim a + dim b, exact.
    #[test]
    fn grassmann_dimension_formula(a in arb_matrix_cols(4, 6), b in arb_matrix_cols(4, 6)) {
        let n = 6;
        let sa = Subspace::from_generators(n, &a);
        let sb = Subspace::from_generators(n, &b);
        let sum = sa.sum(&sb).unwrap();
        let meet = sa.intersect(&sb).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), sa.dim() + sb.dim());
        // and the intersection is inside both
        prop_assert!(meet.is_subspace_of(&sa));
        prop_assert!(meet.is_subspace_of(&sb));
    }

    /// Complements split: a ⊕ complement_in(a, b) = b for a ⊆ b.
    #[test]
    fn complement_splits(g in arb_matrix_cols(5, 6), pick in proptest::collection::vec(any::<bool>(), 5)) {
        let n = 6;
        let b = Subspace::from_generators(n, &g);
        let chosen: Vec<Vec<GaussRat>> = b
            .basis_vectors()
            .into_iter()
            .zip(pick.iter().cycle())
            .filter(|(_, take)| **take)
            .map(|(v, _)| v)
            .collect();
        let a = Subspace::from_vectors(n, &chosen);
        let c = a.complement_in(&b).unwrap();
        prop_assert_eq!(a.sum(&c).unwrap(), b.clone());
        prop_assert!(a.intersect(&c).unwrap().is_zero());
        prop_assert_eq!(a.dim() + c.dim(), b.dim());
    }

    /// Conjugation is a field automorphism commuting with rref.
    #[test]
    fn conjugation_commutes_with_rref(m in arb_matrix(4, 5)) {
        prop_assert_eq!(m.conj().rref(), m.rref().conj());
    }

    /// Truncated polynomial ring axioms at the shared cap.
    #[test]
    fn poly_ring_axioms(
        f in arb_poly(2, 3),
        g in arb_poly(2, 3),
        h in arb_poly(2, 3),
    ) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
    }

    /// Truncated evaluation agrees with exact product evaluation when the
    /// cap has room for the whole product.
    #[test]
    fn poly_eval_is_homomorphism(f in arb_poly(2, 2), g in arb_poly(2, 2), a in arb_gauss(), b in arb_gauss()) {
        let point = [a, b];
        let exact = f.mul_capped(&g, 4);
        prop_assert_eq!(exact.eval(&point), &f.eval(&point) * &g.eval(&point));
    }

    /// det is multiplicative on small square matrices.
    #[test]
    fn det_multiplicative((a, b) in arb_square_pair(3)) {
        prop_assert_eq!(a.mul(&b).det(), &a.det() * &b.det());
    }
}
