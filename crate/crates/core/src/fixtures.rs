//! Ready-made polytopes and circle directions used by tests, docs and the CLI.

use num_bigint::BigInt;

use crate::linalg::{ivec, rat, rint, IntMatrix, Rat};
use crate::polytope::{HalfSpace, LabeledPolytope};

/// Extra width of the first factor of the product cube.
pub fn default_epsilon() -> Rat {
    rat(1, 10)
}

/// Half-width of the open window `|y| < w` around the chopped polytopes.
pub fn default_window() -> Rat {
    rat(1, 2)
}

/// Probe level below the critical level of the chopped polytopes.
pub fn default_probe() -> Rat {
    rat(-2, 5)
}

fn hs(n: &[i64], c: Rat) -> HalfSpace {
    HalfSpace::new(ivec(n), c).expect("nonzero normal")
}

fn open(n: &[i64], c: Rat) -> HalfSpace {
    HalfSpace::open(ivec(n), c).expect("nonzero normal")
}

/// `[0,a] x [0,b] x [0,c]`.
pub fn box3(a: Rat, b: Rat, c: Rat) -> LabeledPolytope {
    LabeledPolytope::from_halfspaces(
        vec![
            hs(&[1, 0, 0], rint(0)),
            hs(&[-1, 0, 0], -a),
            hs(&[0, 1, 0], rint(0)),
            hs(&[0, -1, 0], -b),
            hs(&[0, 0, 1], rint(0)),
            hs(&[0, 0, -1], -c),
        ],
        3,
    )
    .expect("box has interior")
}

/// `0 <= x <= 1 + eps`, `0 <= y, z <= 1`.
pub fn product_cube(eps: &Rat) -> LabeledPolytope {
    box3(rint(1) + eps, rint(1), rint(1))
}

pub fn product_cube_xi() -> Vec<BigInt> {
    ivec(&[1, 1, 0])
}

/// Region shared by both chopped polytopes, cut to the window `|y| < w`.
pub fn chopped_common(window: &Rat) -> Vec<HalfSpace> {
    vec![
        hs(&[1, -1, 0], rint(0)),
        hs(&[0, 1, -1], rint(-2)),
        hs(&[-1, 0, 0], rint(-2)),
        hs(&[-1, 0, 1], rint(-1)),
        hs(&[0, 0, 1], rint(0)),
        open(&[0, 1, 0], -window.clone()),
        open(&[0, -1, 0], -window.clone()),
    ]
}

/// Common region capped by `z <= 2`; vertices `(0,0,2)` and `(2,0,2)`.
pub fn chopped_p1(window: &Rat) -> LabeledPolytope {
    let mut h = chopped_common(window);
    h.push(hs(&[0, 0, -1], rint(-2)));
    LabeledPolytope::from_halfspaces(h, 3).expect("p1 has interior")
}

/// Common region cut by `x >= 2y`; vertices `(0,0,0)` and `(0,0,2)`.
pub fn chopped_p2(window: &Rat) -> LabeledPolytope {
    let mut h = chopped_common(window);
    h.push(hs(&[1, -2, 0], rint(0)));
    LabeledPolytope::from_halfspaces(h, 3).expect("p2 has interior")
}

pub fn chopped_xi() -> Vec<BigInt> {
    ivec(&[0, 1, 0])
}

/// `[0,2]^3`, to be used with [`tilted_xi`].
pub fn tilted_cube() -> LabeledPolytope {
    box3(rint(2), rint(2), rint(2))
}

pub fn tilted_xi() -> Vec<BigInt> {
    ivec(&[1, 1, -1])
}

/// `[-1,1]^3`: the moment cube of the monotone product of three spheres.
pub fn monotone_cube() -> LabeledPolytope {
    LabeledPolytope::from_halfspaces(
        vec![
            hs(&[1, 0, 0], rint(-1)),
            hs(&[-1, 0, 0], rint(-1)),
            hs(&[0, 1, 0], rint(-1)),
            hs(&[0, -1, 0], rint(-1)),
            hs(&[0, 0, 1], rint(-1)),
            hs(&[0, 0, -1], rint(-1)),
        ],
        3,
    )
    .expect("cube has interior")
}

/// Torus automorphism that straightens the slanted cuts `x + y = c`.
pub fn twist_matrix() -> IntMatrix {
    IntMatrix::from_i64(&[&[1, 0], &[1, 1]])
}

/// Rectangle `[0,1+eps] x [0,1]` between the cuts `x + y = 1` and `x + y = 1 + eps`.
pub fn twist_region(eps: &Rat) -> LabeledPolytope {
    LabeledPolytope::from_halfspaces(
        vec![
            hs(&[1, 0], rint(0)),
            hs(&[-1, 0], -(rint(1) + eps)),
            hs(&[0, 1], rint(0)),
            hs(&[0, -1], rint(-1)),
            hs(&[1, 1], rint(1)),
            hs(&[-1, -1], -(rint(1) + eps)),
        ],
        2,
    )
    .expect("region has interior")
}

/// Swap of the two sphere factors acting on `H2` of a slab.
pub fn swap_matrix() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, 1], &[1, 0]])
}

/// Exchange of the last two coordinates, acting on the cube.
pub fn yz_swap() -> IntMatrix {
    IntMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]])
}
