mod common;

use common::oracle;
use finite_siegel::lagrangian::{enumerate_lagrangians, siegel};
use finite_siegel::orbit::act;
use finite_siegel::symplectic::{generators, is_member, random_word, Group};
use finite_siegel::{EScalar, FieldParams, Lagrangian, Mat, SpaceParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 6] = [3, 5, 7, 11, 13, 251];

fn field() -> impl Strategy<Value = FieldParams> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|q| FieldParams::new(q).unwrap())
}

fn scalars(k: usize) -> impl Strategy<Value = (FieldParams, Vec<EScalar>)> {
    field().prop_flat_map(move |f| {
        prop::collection::vec(0..f.order_e(), k).prop_map(move |ix| (f, ix.into_iter().map(|i| f.from_index(i)).collect()))
    })
}

fn matrix(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    let f = FieldParams::new(q).unwrap();
    prop::collection::vec(0..f.order_e(), rows * cols)
        .prop_map(move |ix| Mat::from_vec(f, rows, cols, ix.into_iter().map(|i| f.from_index(i)).collect()).unwrap())
}

fn vector(space: SpaceParams) -> impl Strategy<Value = Vec<EScalar>> {
    let f = space.field;
    prop::collection::vec(0..f.order_e(), space.dim()).prop_map(move |ix| ix.into_iter().map(|i| f.from_index(i)).collect())
}

proptest! {
    #[test]
    fn field_laws((f, x) in scalars(3)) {
        let (a, b, c) = (x[0], x[1], x[2]);
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a + f.zero(), a);
        prop_assert_eq!(a * f.one(), a);
        prop_assert!((a - a).is_zero());
        if !a.is_zero() {
            prop_assert!((a * a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn conjugation_is_frobenius((f, x) in scalars(2)) {
        let (a, b) = (x[0], x[1]);
        prop_assert_eq!(a.conj(), a.pow(f.q() as u64));
        prop_assert_eq!((a * b).conj(), a.conj() * b.conj());
        prop_assert_eq!((a + b).conj(), a.conj() + b.conj());
        prop_assert!(a.norm().is_rational() && a.trace().is_rational());
        prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn rank_is_transpose_invariant(m in matrix(3, 3, 4)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank() + m.kernel().cols(), m.cols());
    }

    #[test]
    fn inverse_round_trips(m in matrix(5, 3, 3)) {
        match m.inverse().unwrap() {
            Some(inv) => prop_assert!((&m * &inv).is_identity()),
            None => prop_assert!(m.det().unwrap().is_zero()),
        }
    }

    #[test]
    fn membership_tests_agree(m in matrix(3, 2, 2)) {
        for tag in [Group::SpE, Group::SpF, Group::Sp0] {
            prop_assert!(is_member(&m, tag).is_ok());
        }
    }

    #[test]
    fn words_preserve_forms(seed in any::<u64>(), v in vector(SpaceParams::new(5, 2).unwrap()), w in vector(SpaceParams::new(5, 2).unwrap())) {
        let space = SpaceParams::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_word(&generators(Group::SpF, &space), 12, &mut rng);
        prop_assert!(is_member(&g, Group::SpF).unwrap());
        let (gv, gw) = (g.apply(&v).unwrap(), g.apply(&w).unwrap());
        prop_assert_eq!(oracle::omega(&gv, &gw), oracle::omega(&v, &w));
        prop_assert_eq!(space.h_e(&gv, &gw).unwrap(), space.h_e(&v, &w).unwrap());

        let h = random_word(&generators(Group::Sp0, &space), 12, &mut rng);
        prop_assert!(is_member(&h, Group::Sp0).unwrap());
        let (hv, hw) = (h.apply(&v).unwrap(), h.apply(&w).unwrap());
        prop_assert_eq!(oracle::h0(&hv, &hw), oracle::h0(&v, &w));
    }

    #[test]
    fn strata_are_invariant(seed in any::<u64>(), pick in 0usize..820) {
        let space = SpaceParams::new(3, 2).unwrap();
        let points = enumerate_lagrangians(&space, 1_000).unwrap();
        let w = &points[pick];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_word(&generators(Group::SpF, &space), 8, &mut rng);
        prop_assert_eq!(act(&g, w).unwrap().h_rank(), w.h_rank());
        let h = random_word(&generators(Group::Sp0, &space), 8, &mut rng);
        prop_assert_eq!(act(&h, w).unwrap().o_type(), w.o_type());
    }
}

#[test]
fn canonical_span_of_lines() {
    let space = SpaceParams::new(3, 1).unwrap();
    let f = space.field;
    let nonzero: Vec<EScalar> = f.elements().skip(1).collect();
    for x in f.elements() {
        for y in f.elements() {
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let base = Lagrangian::from_basis(&Mat::column(f, &[x, y])).unwrap();
            for &c in &nonzero {
                let scaled = Lagrangian::from_basis(&Mat::column(f, &[c * x, c * y])).unwrap();
                assert_eq!(scaled, base);
            }
        }
    }
}

#[test]
fn siegel_rank_equals_imaginary_rank() {
    let check = |z: &Mat| {
        let w = siegel(z).unwrap();
        assert_eq!(w.h_rank(), (z - &z.conj_entrywise()).rank(), "{z}");
        assert!(w.in_siegel_image());
    };
    for q in [3, 5, 7] {
        let space = SpaceParams::new(q, 1).unwrap();
        for x in space.field.elements() {
            check(&Mat::scalar(space.field, 1, x));
        }
    }
    let space = SpaceParams::new(3, 2).unwrap();
    let f = space.field;
    let elems: Vec<EScalar> = f.elements().collect();
    for &a in &elems {
        for &b in &elems {
            for &d in &elems {
                check(&Mat::from_vec(f, 2, 2, vec![a, b, b, d]).unwrap());
            }
        }
    }
}
