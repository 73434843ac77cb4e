//! Library results against brute-force and hand-derived oracles.

mod common;

use common::{q, qi, Plane, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use semifree::affine::Affine;
use semifree::circle_action::ComponentKind;
use semifree::exceptional::{enumerate_exceptional, is_exceptional, CremonaTarget, FormVector, H2Class};
use semifree::fixed_point_data::{extract_fpd, local_normal_degrees};
use semifree::fixtures;
use semifree::linalg::{ivec, rat, rint, Rat};
use semifree::morse_wall::cross_level;
use semifree::polytope::{slice_polygon, LabeledPolytope};
use semifree::reduced_space::{ReducedSlice, SliceParam};

fn library_vertices(p: &LabeledPolytope, xi: &[i64; 3], t: &Rat) -> Vec<Vec<Rat>> {
    let poly = slice_polygon(p, &ivec(xi), SliceParam::Fixed(t.clone())).unwrap();
    let frame = poly.frame.clone().unwrap();
    let mut v: Vec<Vec<Rat>> = poly.vertices_at(t).iter().map(|u| frame.lift(t, u)).collect();
    v.sort();
    v
}

fn oracle_vertices(planes: &[Plane], xi: [i64; 3], t: &Q) -> Vec<Vec<Rat>> {
    let mut v: Vec<Vec<Rat>> = common::slice_vertices(planes, xi, t).into_iter().map(|x| x.to_vec()).collect();
    v.sort();
    v
}

fn check_slice(p: &LabeledPolytope, planes: &[Plane], xi: [i64; 3], t: Rat) {
    assert_eq!(library_vertices(p, &xi, &t), oracle_vertices(planes, xi, &t), "vertices at t = {t}");
    let poly = slice_polygon(p, &ivec(&xi), SliceParam::Fixed(t.clone())).unwrap();
    let a = poly.area_at(&t).unwrap();
    assert_eq!(&a * &a, common::lattice_area_squared(&common::slice_vertices(planes, xi, &t), xi), "area at t = {t}");
}

#[test]
fn slices_match_brute_force() {
    let eps = fixtures::default_epsilon();
    let cube = fixtures::product_cube(&eps);
    let cube_planes = common::boxed(qi(1) + &eps, qi(1), qi(1));
    for t in [q(1, 2), qi(1), q(21, 20), q(3, 2), qi(2)] {
        check_slice(&cube, &cube_planes, [1, 1, 0], t);
    }
    let tilted = fixtures::tilted_cube();
    let tilted_planes = common::boxed(qi(2), qi(2), qi(2));
    for t in [q(-1, 1), q(1, 2), qi(1), qi(2), q(7, 3), q(7, 2)] {
        check_slice(&tilted, &tilted_planes, [1, 1, -1], t);
    }
    let w = fixtures::default_window();
    for t in [fixtures::default_probe(), q(-1, 7), qi(0), q(1, 3)] {
        check_slice(&fixtures::chopped_p1(&w), &common::chopped_p1(&w), [0, 1, 0], t.clone());
        check_slice(&fixtures::chopped_p2(&w), &common::chopped_p2(&w), [0, 1, 0], t);
    }
}

#[test]
fn chopped_edge_lengths() {
    let w = fixtures::default_window();
    let p1 = common::chopped_p1(&w);
    // Below the level S1 sits on y - z >= -2, S2 on x = y.
    for t in [q(-2, 5), q(-1, 4), q(-1, 10)] {
        let (s1, _, _) = common::edge_on(&p1, 1, [0, 1, 0], &t).unwrap();
        let (s2, _, _) = common::edge_on(&p1, 0, [0, 1, 0], &t).unwrap();
        assert_eq!(s1, qi(2) - &t);
        assert_eq!(s2, qi(2) + &t);
    }
    let below = ReducedSlice::of(&fixtures::chopped_p1(&w), &fixtures::chopped_xi(), SliceParam::Interval(-w.clone(), rint(0))).unwrap();
    let top = below.polygon.edge_with_carrier(1).unwrap();
    let left = below.polygon.edge_with_carrier(0).unwrap();
    assert_eq!(below.polygon.edge_length(top).unwrap(), Affine::new(rint(2), rint(-1)));
    assert_eq!(below.polygon.edge_length(left).unwrap(), Affine::new(rint(2), rint(1)));
}

#[test]
fn chopped_euler_values_from_slopes() {
    let w = fixtures::default_window();
    let probe = |planes: &[Plane], idx: usize, a: Q, b: Q| {
        let la = common::edge_on(planes, idx, [0, 1, 0], &a).unwrap().0;
        let lb = common::edge_on(planes, idx, [0, 1, 0], &b).unwrap().0;
        (lb - la) / (b - a)
    };
    // P1: the fixed sphere is the top edge below and the cap z = 2 above.
    let p1 = common::chopped_p1(&w);
    let c_minus = probe(&p1, 1, q(-2, 5), q(-1, 5));
    let c_plus = -probe(&p1, 7, q(1, 5), q(2, 5));
    // P2: the sphere is the x = y edge below and the x = 2y edge above.
    let p2 = common::chopped_p2(&w);
    let d_minus = probe(&p2, 0, q(-2, 5), q(-1, 5));
    let d_plus = -probe(&p2, 7, q(1, 5), q(2, 5));
    assert_eq!((c_minus.clone(), c_plus.clone()), (qi(-1), qi(1)));
    assert_eq!((d_minus.clone(), d_plus.clone()), (qi(1), qi(-1)));

    let got1 = extract_fpd(&fixtures::chopped_p1(&w), &fixtures::chopped_xi()).unwrap();
    let got2 = extract_fpd(&fixtures::chopped_p2(&w), &fixtures::chopped_xi()).unwrap();
    let s1 = &got1.levels[0].components[0];
    let s2 = &got2.levels[0].components[0];
    assert_eq!(s1.euler_minus, Some(BigInt::from(-1)));
    assert_eq!(s1.euler_plus, Some(BigInt::from(1)));
    assert_eq!(s2.euler_minus, Some(BigInt::from(1)));
    assert_eq!(s2.euler_plus, Some(BigInt::from(-1)));
}

#[test]
fn tilted_cube_slices() {
    let p = fixtures::tilted_cube();
    let xi = fixtures::tilted_xi();
    let below = ReducedSlice::of(&p, &xi, SliceParam::Interval(rint(0), rint(2))).unwrap();
    let mut lengths: Vec<String> = below.polygon.edge_lengths().unwrap().iter().map(|l| l.to_string()).collect();
    lengths.sort();
    assert_eq!(lengths, vec!["2 - t", "2 - t", "2 - t", "t", "t", "t"]);
    assert_eq!(below.lattice.model.name(), "CP2#3");
    let above = ReducedSlice::of(&p, &xi, SliceParam::Interval(rint(2), rint(4))).unwrap();
    assert!(above.polygon.edge_lengths().unwrap().iter().all(|l| *l == Affine::new(rint(4), rint(-1))));
    // The vanishing edges below are the t-edges in the facets y = 0, x = 0, z = 2.
    let w = cross_level(&p, &xi, &rint(2)).unwrap();
    let mut carriers: Vec<usize> = w.d_minus.iter().map(|d| below.polygon.edges[d.edge].carriers[0]).collect();
    carriers.sort();
    assert_eq!(carriers, vec![0, 2, 5]);
}

#[test]
fn fixed_sphere_sizes_are_lattice_lengths() {
    let eps = fixtures::default_epsilon();
    let d = extract_fpd(&fixtures::product_cube(&eps), &fixtures::product_cube_xi()).unwrap();
    for l in &d.levels {
        let c = &l.components[0];
        assert_eq!(c.kind, ComponentKind::Sphere);
        assert_eq!(c.size, Some(rint(1)));
    }
    // Extremal spheres of the cube have trivial normal bundles.
    let first = &d.levels[0].components[0];
    assert_eq!(first.normal_degrees, Some(vec![BigInt::zero(), BigInt::zero()]));
}

#[test]
fn simplex_normal_degrees() {
    // The standard simplex: every edge is a line in CP^3 with normal O(1) + O(1).
    let hs = |n: &[i64], c: i64| semifree::polytope::HalfSpace::new(ivec(n), rint(c)).unwrap();
    let s = LabeledPolytope::from_halfspaces(
        vec![hs(&[1, 0, 0], 0), hs(&[0, 1, 0], 0), hs(&[0, 0, 1], 0), hs(&[-1, -1, -1], -1)],
        3,
    )
    .unwrap();
    for e in 0..s.edges().len() {
        assert_eq!(local_normal_degrees(&s, e).unwrap(), vec![BigInt::from(1), BigInt::from(1)]);
    }
}

fn cremona_closure(k: usize, depth: usize) -> Vec<H2Class> {
    // Breadth-first search over all moves and transpositions from E_1.
    let mut seen = vec![H2Class::exceptional_divisor(k, 1)];
    let mut frontier = seen.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            let mut moves = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    let mut p: Vec<usize> = (0..k).collect();
                    p.swap(i, j);
                    moves.push(x.permuted(&p));
                    for l in j + 1..k {
                        moves.push(x.cremona([i, j, l]).unwrap());
                    }
                }
            }
            for m in moves {
                if !seen.contains(&m) {
                    seen.push(m.clone());
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    seen
}

#[test]
fn exceptional_against_move_search() {
    let orbit = cremona_closure(5, 5);
    assert!(orbit.contains(&H2Class::new(2, &[1, 1, 1, 1, 1])));
    for x in &orbit {
        assert!(is_exceptional(x), "{x}");
    }
    let not = [H2Class::new(1, &[1, 0, 0, 0, 0]), H2Class::new(3, &[2, 1, 1, 1, 1]), H2Class::new(0, &[1, 0, 0, 0, 0])];
    for x in &not {
        assert!(!orbit.contains(x) && !is_exceptional(x), "{x}");
    }
}

#[test]
fn enumeration_matches_catalogue() {
    for k in 1..=6usize {
        // A generic reduced form: every catalogue class has area below 100.
        let delta: Vec<Rat> = (0..k).map(|i| rat(30 - i as i64, 10)).collect();
        let v = FormVector::new(rint(10), delta);
        let mut got: Vec<(i64, Vec<i64>)> = enumerate_exceptional(&v, &rint(100))
            .unwrap()
            .into_iter()
            .map(|(x, _)| {
                let a: i64 = x.a.try_into().unwrap();
                (a, x.b.iter().map(|b| i64::try_from(b).unwrap()).collect())
            })
            .collect();
        got.sort();
        assert_eq!(got, common::exceptional_catalogue(k), "k = {k}");
    }
}

#[test]
fn wall_vanishing_classes_have_unit_slope() {
    let p = fixtures::tilted_cube();
    let xi = fixtures::tilted_xi();
    let w = cross_level(&p, &xi, &rint(2)).unwrap();
    let below = w.below.as_ref().unwrap();
    for d in &w.d_minus {
        assert_eq!(below.euler_class_eval(&d.class).unwrap(), BigInt::from(-1));
        assert_eq!(below.area_profile(&d.class).unwrap().area, Affine::new(rint(2), rint(-1)));
    }
}
