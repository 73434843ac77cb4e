//! Independent oracles shared by the integration and acceptance tests.
//!
//! Nothing here goes through the slicing or normalization code of the
//! library: slices are rebuilt by brute force from the halfspaces.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Closed halfspace `<n, x> >= c`; `strict` for the open window constraints.
#[derive(Clone, Debug)]
pub struct Plane {
    pub n: [i64; 3],
    pub c: Q,
    pub strict: bool,
}

pub fn plane(n: [i64; 3], c: Q) -> Plane {
    Plane { n, c, strict: false }
}

fn dotq(n: &[i64; 3], x: &[Q; 3]) -> Q {
    (0..3).map(|i| qi(n[i]) * &x[i]).sum()
}

fn det3(m: &[[Q; 3]; 3]) -> Q {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Cramer's rule.
fn solve3(rows: [[i64; 3]; 3], rhs: [Q; 3]) -> Option<[Q; 3]> {
    let m: [[Q; 3]; 3] = rows.map(|r| r.map(qi));
    let d = det3(&m);
    if d.is_zero() {
        return None;
    }
    let col = |j: usize| {
        let mut mm = m.clone();
        for i in 0..3 {
            mm[i][j] = rhs[i].clone();
        }
        det3(&mm) / &d
    };
    Some([col(0), col(1), col(2)])
}

/// Vertices of `{<xi, x> = t} ∩ P` (closure of the open constraints).
pub fn slice_vertices(planes: &[Plane], xi: [i64; 3], t: &Q) -> Vec<[Q; 3]> {
    let mut out: Vec<[Q; 3]> = Vec::new();
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            let Some(x) = solve3([planes[i].n, planes[j].n, xi], [planes[i].c.clone(), planes[j].c.clone(), t.clone()])
            else {
                continue;
            };
            if planes.iter().all(|p| dotq(&p.n, &x) >= p.c) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

fn cross(a: &[Q; 3], b: &[Q; 3]) -> [Q; 3] {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

fn sub(a: &[Q; 3], b: &[Q; 3]) -> [Q; 3] {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

/// Vertices of a planar convex polygon in cyclic order.
fn cyclic(vs: &[[Q; 3]], xi: [i64; 3]) -> Vec<[Q; 3]> {
    let n = vs.len();
    let mut c = [Q::zero(), Q::zero(), Q::zero()];
    for v in vs {
        for k in 0..3 {
            c[k] += &v[k];
        }
    }
    for x in &mut c {
        *x /= qi(n as i64);
    }
    let x3 = xi.map(qi);
    let r0 = sub(&vs[0], &c);
    let side = |v: &[Q; 3]| -> (i32, [Q; 3]) {
        let r = sub(v, &c);
        let s = (0..3).map(|k| &cross(&r0, &r)[k] * &x3[k]).sum::<Q>();
        let d = (0..3).map(|k| &r0[k] * &r[k]).sum::<Q>();
        let half = if s.is_positive() || (s.is_zero() && d.is_positive()) { 0 } else { 1 };
        (half, r)
    };
    let mut order: Vec<(i32, [Q; 3], [Q; 3])> = vs.iter().map(|v| {
        let (h, r) = side(v);
        (h, r, v.clone())
    }).collect();
    order.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            let s: Q = (0..3).map(|k| &cross(&a.1, &b.1)[k] * &x3[k]).sum();
            Q::zero().cmp(&s)
        })
    });
    order.into_iter().map(|o| o.2).collect()
}

/// Lattice-normalized area of a slice polygon, via the Euclidean vector
/// area divided by the covolume `|xi|` of the plane lattice. Returned squared
/// to stay rational.
pub fn lattice_area_squared(vs: &[[Q; 3]], xi: [i64; 3]) -> Q {
    if vs.len() < 3 {
        return Q::zero();
    }
    let cyc = cyclic(vs, xi);
    let mut s = [Q::zero(), Q::zero(), Q::zero()];
    for i in 0..cyc.len() {
        let c = cross(&cyc[i], &cyc[(i + 1) % cyc.len()]);
        for k in 0..3 {
            s[k] += &c[k];
        }
    }
    let s2: Q = s.iter().map(|x| x * x).sum();
    let xi2: i64 = xi.iter().map(|x| x * x).sum();
    s2 / (qi(4) * qi(xi2))
}

/// Lattice length of the segment `a -> b` of integer direction.
pub fn lattice_len(a: &[Q; 3], b: &[Q; 3]) -> Q {
    let d = sub(b, a);
    // Scale to a primitive integer vector.
    let mut l = BigInt::one();
    for x in &d {
        l = num_integer::Integer::lcm(&l, x.denom());
    }
    let ints: Vec<BigInt> = d.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    Q::new(g, l)
}

/// The slice edge lying on plane `idx`: its two endpoints.
pub fn edge_on(planes: &[Plane], idx: usize, xi: [i64; 3], t: &Q) -> Option<(Q, [Q; 3], [Q; 3])> {
    let vs: Vec<[Q; 3]> = slice_vertices(planes, xi, t).into_iter().filter(|x| dotq(&planes[idx].n, x) == planes[idx].c).collect();
    match vs.as_slice() {
        [a, b] => Some((lattice_len(a, b), a.clone(), b.clone())),
        _ => None,
    }
}

/// Common constraints of the chopped polytopes with window `|y| < w`.
pub fn chopped_common(w: &Q) -> Vec<Plane> {
    vec![
        plane([1, -1, 0], qi(0)),
        plane([0, 1, -1], qi(-2)),
        plane([-1, 0, 0], qi(-2)),
        plane([-1, 0, 1], qi(-1)),
        plane([0, 0, 1], qi(0)),
        Plane { n: [0, 1, 0], c: -w.clone(), strict: true },
        Plane { n: [0, -1, 0], c: -w.clone(), strict: true },
    ]
}

pub fn chopped_p1(w: &Q) -> Vec<Plane> {
    let mut v = chopped_common(w);
    v.push(plane([0, 0, -1], qi(-2)));
    v
}

pub fn chopped_p2(w: &Q) -> Vec<Plane> {
    let mut v = chopped_common(w);
    v.push(plane([1, -2, 0], qi(0)));
    v
}

pub fn boxed(a: Q, b: Q, c: Q) -> Vec<Plane> {
    vec![
        plane([1, 0, 0], qi(0)),
        plane([-1, 0, 0], -a),
        plane([0, 1, 0], qi(0)),
        plane([0, -1, 0], -b),
        plane([0, 0, 1], qi(0)),
        plane([0, 0, -1], -c),
    ]
}

/// Standard exceptional classes of `CP^2 # k` for `k <= 6`, as `(a; b)`:
/// `E_i`, `L - E_i - E_j` and `2L` minus five of the `E_i`.
pub fn exceptional_catalogue(k: usize) -> Vec<(i64, Vec<i64>)> {
    let mut out = Vec::new();
    for i in 0..k {
        let mut b = vec![0; k];
        b[i] = -1;
        out.push((0, b));
    }
    for i in 0..k {
        for j in i + 1..k {
            let mut b = vec![0; k];
            b[i] = 1;
            b[j] = 1;
            out.push((1, b));
        }
    }
    if k == 5 {
        out.push((2, vec![1; 5]));
    }
    if k == 6 {
        for skip in 0..6 {
            let mut b = vec![1; 6];
            b[skip] = 0;
            out.push((2, b));
        }
    }
    out.sort();
    out.dedup();
    out
}
