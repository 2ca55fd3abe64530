//! Structural invariants as property tests over seeded random triples.

use amalgam::bundle::{parse_bundle, AlgebraBundle};
use amalgam::derivations::{
    decompose_derivation, derivation_space, inner_derivation, inner_quadruple, is_inner_match,
    quadruple_space as derivation_quadruples,
};
use amalgam::duals::{arens_products, block_formula_defect, DualBimodule};
use amalgam::ideals::{ideal_generated, is_ideal, Side};
use amalgam::linalg::{c, rank_nullspace, unflatten, Subspace, C64};
use amalgam::multipliers::{decompose_multiplier, left_multiplier_space, quadruple_space};
use amalgam::random::{random_algebra, TripleGen};
use amalgam::spectrum::{characters, multiplicativity_defect};
use amalgam::Triple;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn triple(seed: u64) -> Triple {
    TripleGen::general(seed).next_recipe().1
}

fn commutative_triple(seed: u64) -> Triple {
    TripleGen::commutative_symmetric(seed).next_recipe().1
}

fn complex_matrix(entries: &[(f64, f64)], rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |i, j| {
        let (x, y) = entries[(i * cols + j) % entries.len()];
        c(x, y)
    })
}

fn vector(seed: u64, n: usize) -> DVector<C64> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rank_plus_nullity(
        entries in prop::collection::vec((-2i8..3, -1i8..2), 1..20),
        rows in 1usize..5,
        cols in 1usize..5,
        low_rank in any::<bool>(),
    ) {
        let e: Vec<(f64, f64)> = entries.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
        let mut m = complex_matrix(&e, rows, cols);
        if low_rank && rows > 1 {
            let r0 = m.row(0).into_owned();
            m.set_row(rows - 1, &(r0 * c(2.0, -1.0)));
        }
        let (r, null) = rank_nullspace(&m, TOL).unwrap();
        prop_assert_eq!(r + null.dim(), cols);
        for v in null.vectors() {
            prop_assert!((&m * v).camax() <= 1e-8);
        }
    }

    #[test]
    fn subspace_dimension_formula(s1 in any::<u64>(), s2 in any::<u64>(), k1 in 0usize..4, k2 in 0usize..4) {
        let n = 4;
        let u = Subspace::span(n, &(0..k1).map(|i| vector(s1 + i as u64, n)).collect::<Vec<_>>(), TOL).unwrap();
        let w = Subspace::span(n, &(0..k2).map(|i| vector(s2 + i as u64, n)).collect::<Vec<_>>(), TOL).unwrap();
        let both = Subspace::span(n, &[u.vectors(), u.vectors(), w.vectors()].concat(), TOL).unwrap();
        let sum = u.sum(&w).unwrap();
        let cap = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim(), both.dim());
        prop_assert_eq!(sum.dim() + cap.dim(), u.dim() + w.dim());
        prop_assert_eq!(u.orthogonal_complement().unwrap().dim(), n - u.dim());
    }

    #[test]
    fn duplication_is_associative_with_right_shape(seed in any::<u64>()) {
        let t = triple(seed);
        let dup = t.duplicate(TOL).unwrap();
        prop_assert_eq!(dup.dim(), t.a_dim() + t.f_dim());
        prop_assert!(dup.associativity_defect() <= 1e-10 * dup.scale().powi(3));
        // F embeds as a subalgebra and A as an ideal.
        let x = vector(seed, t.a_dim());
        let beta = vector(seed ^ 1, t.f_dim());
        let za = t.join(&x, &DVector::zeros(t.f_dim()));
        let zf = t.join(&DVector::zeros(t.a_dim()), &beta);
        let (_, f_part) = t.split(&dup.mul(&zf, &za));
        prop_assert!(f_part.camax() <= 1e-12);
        let (_, f_part) = t.split(&dup.mul(&zf, &zf));
        prop_assert!((f_part - t.f.mul(&beta, &beta)).camax() <= 1e-10);
    }

    #[test]
    fn bundle_roundtrip(seed in any::<u64>()) {
        let t = triple(seed);
        let b = AlgebraBundle::from_triple("random", &t);
        let back = parse_bundle(&b.to_json()).unwrap();
        prop_assert_eq!(&back, &b);
        let u = back.to_triple().unwrap();
        let gap = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        prop_assert!(gap(u.a.tensor(), t.a.tensor()) <= 1e-15);
        prop_assert!(gap(u.f.tensor(), t.f.tensor()) <= 1e-15);
        prop_assert!(gap(u.action.left_tensor(), t.action.left_tensor()) <= 1e-15);
        prop_assert!(gap(u.action.right_tensor(), t.action.right_tensor()) <= 1e-15);
    }

    #[test]
    fn characters_are_multiplicative_and_lift(seed in any::<u64>()) {
        let t = commutative_triple(seed);
        let dup = t.duplicate(TOL).unwrap();
        let chars = characters(&dup, TOL, seed).unwrap();
        prop_assert!(chars.len() <= dup.dim());
        for ch in &chars {
            prop_assert!(multiplicativity_defect(&dup, &ch.phi) <= 1e-8);
            prop_assert!(ch.phi.camax() > 1e-6);
        }
    }

    #[test]
    fn arens_products_equal_multiplication(seed in any::<u64>()) {
        let alg = random_algebra(&mut ChaCha8Rng::seed_from_u64(seed));
        let s = arens_products(&alg, TOL).unwrap();
        prop_assert!(s.defect <= 1e-10 * alg.scale());
        prop_assert_eq!(s.first.len(), alg.tensor().len());
    }

    #[test]
    fn dual_blocks_assemble_to_the_dual_bimodule(seed in any::<u64>(), n in 0usize..4) {
        let t = triple(seed);
        prop_assert!(block_formula_defect(&t, n, TOL) <= 1e-10);
    }

    #[test]
    fn multipliers_decompose_and_reassemble(seed in any::<u64>()) {
        let t = triple(seed);
        let dup = t.duplicate(TOL).unwrap();
        let direct = left_multiplier_space(&dup, TOL).unwrap();
        prop_assert_eq!(direct.dim(), quadruple_space(&t, TOL).unwrap().dim());
        let k = dup.dim();
        for v in direct.vectors() {
            let op = unflatten(&v, k, k);
            let q = decompose_multiplier(&t, &op, TOL).unwrap();
            prop_assert!((q.assemble() - &op).camax() <= 1e-10);
        }
    }

    #[test]
    fn derivations_match_quadruples(seed in any::<u64>(), n in 0usize..3) {
        let t = triple(seed);
        let dup = t.duplicate(TOL).unwrap();
        let module = DualBimodule::regular(&dup).nth(n);
        let z1 = derivation_space(&dup, &module, TOL).unwrap();
        prop_assert_eq!(z1.dim(), derivation_quadruples(&t, n, TOL).unwrap().dim());
    }

    #[test]
    fn inner_witness_roundtrip(seed in any::<u64>(), n in 0usize..3) {
        let t = triple(seed);
        let dup = t.duplicate(TOL).unwrap();
        let module = DualBimodule::regular(&dup).nth(n);
        let x = vector(seed, dup.dim());
        let d = inner_derivation(&module, &x);
        let q = decompose_derivation(&t, &d, n, TOL).unwrap();
        let (xa, xf) = t.split(&x);
        let blocks = inner_quadruple(&t, &xa, &xf, n);
        prop_assert!((blocks.assemble() - &d).camax() <= 1e-9);
        let w = is_inner_match(&t, &q, n, TOL).unwrap().expect("inner derivations have a witness");
        let again = inner_quadruple(&t, &w.x_a, &w.x_f, n).assemble();
        prop_assert!((again - d).camax() <= 1e-9);
    }

    #[test]
    fn generated_ideals_are_ideals(seed in any::<u64>()) {
        let t = triple(seed);
        let dup = t.duplicate(TOL).unwrap();
        let v = vector(seed, dup.dim());
        for side in [Side::Left, Side::Right, Side::TwoSided] {
            let i = ideal_generated(&dup, std::slice::from_ref(&v), side, TOL).unwrap();
            prop_assert!(i.contains_vector(&v));
            prop_assert!(is_ideal(&dup, &i, side, 1e-8).unwrap());
        }
        // The A-coordinates always form a two-sided ideal.
        let a_part: Vec<_> = (0..t.a_dim()).map(|i| dup.basis(i)).collect();
        if !a_part.is_empty() {
            let s = Subspace::span(dup.dim(), &a_part, TOL).unwrap();
            prop_assert!(is_ideal(&dup, &s, Side::TwoSided, TOL).unwrap());
        }
    }
}
