//! Randomized invariants.

mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use semifree::circle_action::{critical_values, semifree_check};
use semifree::exceptional::{cremona_move, pairing, CremonaTarget, FormVector, H2Class};
use semifree::fixed_point_data::extract_fpd;
use semifree::fixtures;
use semifree::linalg::{cokernel_presentation, integer_solve, ivec, rat, rint, smith_normal_form, IntMatrix, Rat};
use semifree::polytope::{slice_polygon, LabeledPolytope};
use semifree::reduced_space::{ReducedSlice, SliceParam};

fn matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
            let rows: Vec<Vec<BigInt>> = v.chunks(c).map(ivec).collect();
            IntMatrix::from_rows(rows).unwrap()
        })
    })
}

/// Product of elementary row operations and sign flips.
fn unimodular3() -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2, any::<bool>()), 1..8).prop_map(|ops| {
        let mut m = IntMatrix::identity(3);
        for (i, j, k, flip) in ops {
            let mut e = IntMatrix::identity(3);
            if i != j {
                e.set(i, j, BigInt::from(k));
            } else if flip {
                e.set(i, i, -BigInt::one());
            }
            m = e.mul(&m);
        }
        m
    })
}

fn class(k: usize) -> impl Strategy<Value = H2Class> {
    (-5i64..=5, proptest::collection::vec(-5i64..=5, k)).prop_map(|(a, b)| H2Class::new(a, &b))
}

fn is_diagonal_chain(d: &IntMatrix) -> bool {
    let diag: Vec<BigInt> = (0..d.nrows().min(d.ncols())).map(|i| d[(i, i)].clone()).collect();
    let off_zero = (0..d.nrows()).all(|i| (0..d.ncols()).all(|j| i == j || d[(i, j)].is_zero()));
    let nonneg = diag.iter().all(|x| !x.is_negative());
    let chain = diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
    off_zero && nonneg && chain
}

fn random_box(a: i64, b: i64, c: i64) -> LabeledPolytope {
    fixtures::box3(rint(a), rint(b), rint(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_decomposes(a in matrix(4)) {
        let s = smith_normal_form(&a);
        prop_assert!(s.u.is_unimodular());
        prop_assert!(s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert!(is_diagonal_chain(&s.d));
    }

    #[test]
    fn cokernel_kills_image(a in matrix(4), x in proptest::collection::vec(-5i64..=5, 4)) {
        let c = cokernel_presentation(&a);
        let x = ivec(&x[..a.ncols()]);
        let img = c.project(&a.mul_vec(&x));
        prop_assert!(img.iter().all(|v| v.is_zero()));
        let rank = smith_normal_form(&a).rank();
        prop_assert_eq!(c.free_rank, a.nrows() - rank);
    }

    #[test]
    fn solve_recovers_image(a in matrix(4), x in proptest::collection::vec(-5i64..=5, 4)) {
        let x = ivec(&x[..a.ncols()]);
        let b = a.mul_vec(&x);
        let y = integer_solve(&a, &b).expect("b lies in the image");
        prop_assert_eq!(a.mul_vec(&y), b);
    }

    #[test]
    fn cremona_is_involutive_isometry(x in class(5), y in class(5), i in 0usize..5, j in 0usize..5, l in 0usize..5) {
        prop_assume!(i != j && j != l && i != l);
        let mx = cremona_move(&x, [i, j, l]).unwrap();
        let my = cremona_move(&y, [i, j, l]).unwrap();
        prop_assert_eq!(cremona_move(&mx, [i, j, l]).unwrap(), x.clone());
        prop_assert_eq!(pairing(&mx, &my).unwrap(), pairing(&x, &y).unwrap());
        prop_assert_eq!(mx.canonical_pairing(), x.canonical_pairing());
    }

    #[test]
    fn form_moves_preserve_areas(x in class(4), i in 0usize..4, j in 0usize..4, l in 0usize..4,
                                 d in proptest::collection::vec(1i64..30, 4)) {
        prop_assume!(i != j && j != l && i != l);
        let v = FormVector::new(rint(40), d.iter().map(|&z| rat(z, 3)).collect());
        let mv = v.cremona([i, j, l]).unwrap();
        let mx = x.cremona([i, j, l]).unwrap();
        prop_assert_eq!(mv.area(&mx), v.area(&x));
    }

    #[test]
    fn delzant_and_fpd_are_unimodular_invariants(m in unimodular3(), a in 1i64..4, b in 1i64..4, c in 1i64..4) {
        let p = random_box(a, b, c);
        let xi = ivec(&[1, 1, 0]);
        let q = p.apply_unimodular(&m).unwrap();
        let xi2 = m.inverse().unwrap().mul_vec(&xi);
        prop_assert_eq!(q.check_delzant().unwrap().ok, p.check_delzant().unwrap().ok);
        prop_assert_eq!(q.vertices().len(), p.vertices().len());
        prop_assert_eq!(semifree_check(&q, &xi2).ok, semifree_check(&p, &xi).ok);
        prop_assert_eq!(extract_fpd(&q, &xi2).unwrap(), extract_fpd(&p, &xi).unwrap());
    }

    #[test]
    fn facets_survive_round_trip(m in unimodular3()) {
        let p = fixtures::tilted_cube();
        let back = p.apply_unimodular(&m).unwrap().apply_unimodular(&m.inverse().unwrap()).unwrap();
        prop_assert_eq!(back.facets(), p.facets());
        let mut v1: Vec<_> = back.vertices().iter().map(|v| v.point.clone()).collect();
        let mut v2: Vec<_> = p.vertices().iter().map(|v| v.point.clone()).collect();
        v1.sort();
        v2.sort();
        prop_assert_eq!(v1, v2);
    }

    #[test]
    fn dh_slopes_are_integral(a in 1i64..5, b in 1i64..5, c in 1i64..5,
                              xi in prop_oneof![Just([1i64, 1, 0]), Just([1, 1, -1]), Just([1, 0, 1]), Just([0, 1, 1]), Just([1, -1, 1])]) {
        let p = random_box(a, b, c);
        let xi = ivec(&xi);
        let crit = critical_values(&p, &xi).unwrap();
        for w in crit.windows(2) {
            let s = ReducedSlice::of(&p, &xi, SliceParam::Interval(w[0].clone(), w[1].clone())).unwrap();
            let e = s.euler_functional().unwrap();
            let omega = s.omega_functional().unwrap();
            let (t0, t1) = ((rint(3) * &w[0] + &w[1]) / rint(4), (&w[0] + rint(3) * &w[1]) / rint(4));
            for (ei, oi) in e.iter().zip(&omega) {
                prop_assert_eq!((oi.eval(&t1) - oi.eval(&t0)) / (&t1 - &t0), Rat::from_integer(ei.clone()));
            }
        }
    }

    #[test]
    fn symbolic_slice_matches_direct(a in 1i64..5, b in 1i64..5, c in 1i64..5, num in 1i64..100) {
        let p = random_box(a, b, c);
        let xi = [1i64, 1, -1];
        let crit = critical_values(&p, &ivec(&xi)).unwrap();
        let (lo, hi) = (crit[0].clone(), crit[crit.len() - 1].clone());
        let t = &lo + (&hi - &lo) * rat(num, 101);
        let i = crit.iter().rposition(|c| c <= &t).unwrap();
        prop_assume!(crit[i] != t);
        let sym = slice_polygon(&p, &ivec(&xi), SliceParam::Interval(crit[i].clone(), crit[i + 1].clone())).unwrap();
        let frame = sym.frame.clone().unwrap();
        let mut got: Vec<Vec<Rat>> = sym.vertices_at(&t).iter().map(|u| frame.lift(&t, u)).collect();
        got.sort();
        let planes = common::boxed(rint(a), rint(b), rint(c));
        let mut want: Vec<Vec<Rat>> = common::slice_vertices(&planes, xi, &t).into_iter().map(|x| x.to_vec()).collect();
        want.sort();
        prop_assert_eq!(got, want);
        let area = sym.area_at(&t).unwrap();
        prop_assert_eq!(&area * &area, common::lattice_area_squared(&common::slice_vertices(&planes, xi, &t), xi));
    }

    #[test]
    fn gcd_normalization(n in proptest::collection::vec(-9i64..=9, 3), k in 2i64..5) {
        prop_assume!(n.iter().any(|&x| x != 0));
        let scaled: Vec<i64> = n.iter().map(|x| x * k).collect();
        let h = semifree::polytope::HalfSpace::new(ivec(&scaled), rint(k)).unwrap();
        let g = n.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        prop_assert_eq!(h.offset, rat(1, g));
    }
}
