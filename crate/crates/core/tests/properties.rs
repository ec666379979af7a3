use lattk_core::catalog::{
    exp_b, k3_lattice, parity_triple, realize_bfield, BFieldParams, ConcreteBField, MukaiVector,
    K3_RANK,
};
use lattk_core::forms::{form_isomorphism, verify_isomorphism_exhaustively};
use lattk_core::lattice::{orthogonal_complement, overlattices_of_index, Embedding, Lattice};
use lattk_core::linalg::{determinant, int, rat, snf, IntMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(max_dim: usize, entry: i64) -> impl Strategy<Value = IntMat> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-entry..=entry, r * c).prop_map(move |v| {
            IntMat::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn symmetric(max_rank: usize, entry: i64, even: bool) -> impl Strategy<Value = IntMat> {
    (1..=max_rank).prop_flat_map(move |n| {
        prop::collection::vec(-entry..=entry, n * n).prop_map(move |v| {
            let mut rows = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let x = v[i * n + j];
                    rows[i][j] = x;
                    rows[j][i] = x;
                }
                if even {
                    rows[i][i] *= 2;
                }
            }
            IntMat::from_rows(&rows).unwrap()
        })
    })
}

fn is_unimodular(m: &IntMat) -> bool {
    determinant(m).map(|d| d.abs() == int(1)).unwrap_or(false)
}

/// Sparse small vectors in K3 coordinates.
fn k3_vectors(max_count: usize) -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    let coord = prop_oneof![4 => Just(0i64), 1 => -2i64..=2];
    prop::collection::vec(prop::collection::vec(coord, K3_RANK), 1..=max_count)
        .prop_map(|vs| vs.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect())
}

fn odd() -> impl Strategy<Value = i64> {
    (-4i64..=4).prop_map(|k| 2 * k + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_contract(a in matrix(8, 6)) {
        let s = snf(&a);
        prop_assert!(is_unimodular(&s.u));
        prop_assert!(is_unimodular(&s.v));
        prop_assert_eq!(&(&(&s.u * &a) * &s.v), &s.d);
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            prop_assert!(!w[0].is_zero(), "zero before nonzero in {:?}", diag);
            prop_assert!(w[1].is_multiple_of(&w[0]), "divisibility fails in {:?}", diag);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn discriminant_order_is_abs_det(g in symmetric(6, 4, false)) {
        let l = Lattice::new(g).unwrap();
        prop_assume!(l.is_nondegenerate());
        let disc = l.discriminant_group().unwrap();
        prop_assert_eq!(disc.form().group_order(), l.determinant().abs());
    }

    #[test]
    fn even_lattice_discriminant_is_quadratic(g in symmetric(5, 3, true)) {
        let l = Lattice::new(g).unwrap();
        prop_assume!(l.is_nondegenerate());
        let form = l.discriminant_group().unwrap().form().clone();
        prop_assert!(form.quadratic_defined());
        prop_assert_eq!(form.group_order(), l.determinant().abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 100,
        max_global_rejects: 20_000,
        ..ProptestConfig::default()
    })]

    #[test]
    fn complement_form_is_negated(vs in k3_vectors(3)) {
        let k3 = k3_lattice();
        let basis = IntMat::from_rows(&vs).unwrap();
        prop_assume!(lattk_core::linalg::rank(&basis) == vs.len());
        let e = Embedding::new(k3, basis).unwrap().saturation();
        let l = e.sublattice();
        prop_assume!(l.is_nondegenerate());
        prop_assume!(l.determinant().abs() <= int(400));
        let perp = orthogonal_complement(&e).unwrap();
        prop_assert_eq!(perp.rank() + l.rank(), K3_RANK);
        let q_l = l.discriminant_group().unwrap().form().clone();
        let q_perp = perp.sublattice().discriminant_group().unwrap().form().clone();
        let target = q_l.negate();
        let iso = form_isomorphism(&q_perp, &target).unwrap();
        prop_assert!(iso.is_some(), "no isometry for basis {:?}", vs);
        let bound = 1_000;
        prop_assert!(verify_isomorphism_exhaustively(&q_perp, &target, &iso.unwrap(), bound).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exp_b_preserves_pairing(
        two_b in prop::collection::vec(-5i64..=5, K3_RANK),
        x in prop::collection::vec(-6i64..=6, K3_RANK + 2),
        y in prop::collection::vec(-6i64..=6, K3_RANK + 2),
    ) {
        let b = ConcreteBField::new(two_b.iter().map(|&v| rat(v, 2)).collect()).unwrap();
        let x = MukaiVector::from_int_coords(&x.into_iter().map(BigInt::from).collect::<Vec<_>>());
        let y = MukaiVector::from_int_coords(&y.into_iter().map(BigInt::from).collect::<Vec<_>>());
        prop_assert_eq!(exp_b(&b, &x).pairing(&exp_b(&b, &y)), x.pairing(&y));
        let back = exp_b(&b.negate(), &exp_b(&b, &x));
        prop_assert_eq!(back, x);
    }

    #[test]
    fn parity_is_invariant_under_relifting(
        (a, bh, bs) in (odd(), odd(), odd()),
        u in prop::collection::vec(-3i64..=3, K3_RANK),
        k in -4i64..=4,
        l in -4i64..=4,
    ) {
        let b = realize_bfield(&BFieldParams::from_numerators(a, bh, bs).unwrap()).unwrap();
        let u: Vec<BigInt> = u.into_iter().map(BigInt::from).collect();
        let moved = b.relift(&u, k, l);
        prop_assert_eq!(parity_triple(&moved), parity_triple(&b));
        prop_assert_eq!(parity_triple(&b), Some([1, 1, 1]));
        prop_assert!(moved.params().is_admissible());
    }

    #[test]
    fn overlattice_discriminant_drops_by_index_squared(g in symmetric(4, 3, true)) {
        // scaling by 2 guarantees isotropic vectors in the discriminant group
        let l = Lattice::new(g.scale(&int(2))).unwrap();
        prop_assume!(l.is_nondegenerate());
        prop_assume!(l.determinant().abs() <= int(4096));
        for n in [2u64, 4] {
            for ov in overlattices_of_index(&l, n).unwrap() {
                let expected = l.determinant() / int((n * n) as i64);
                prop_assert_eq!(ov.lattice.determinant(), expected);
                prop_assert!(ov.lattice.is_even());
            }
        }
    }
}
