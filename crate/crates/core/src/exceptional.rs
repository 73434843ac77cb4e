//! Exceptional classes of `CP^2 # k`.
//!
//! A class `aL - sum b_i E_i` is stored as `(a; b_1, .., b_k)`. Forms are
//! stored the same way as `(alpha; delta_1, .., delta_k)` with
//! `omega(L) = alpha` and `omega(E_i) = delta_i`, so the area of a class is
//! the pairing of the two vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::affine::Affine;
use crate::error::{Error, Result};
use crate::linalg::{fmt_rational, rint, to_rat, Rat};
use crate::morse_wall::WallCrossing;
use crate::reduced_space::SurfaceModel;

const CREMONA_GUARD: usize = 10_000;
const DEGREE_GUARD: i64 = 200;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct H2Class {
    pub a: BigInt,
    pub b: Vec<BigInt>,
}

impl H2Class {
    pub fn new(a: i64, b: &[i64]) -> Self {
        H2Class { a: a.into(), b: b.iter().map(|&x| x.into()).collect() }
    }

    pub fn line(k: usize) -> Self {
        H2Class { a: BigInt::one(), b: vec![BigInt::zero(); k] }
    }

    /// `E_i`, one-based.
    pub fn exceptional_divisor(k: usize, i: usize) -> Self {
        let mut b = vec![BigInt::zero(); k];
        b[i - 1] = -BigInt::one();
        H2Class { a: BigInt::zero(), b }
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    /// Coordinates in the lattice basis `L, E1, ..`.
    pub fn to_lattice(&self) -> Vec<BigInt> {
        std::iter::once(self.a.clone()).chain(self.b.iter().map(|x| -x)).collect()
    }

    pub fn from_lattice(c: &[BigInt]) -> Self {
        H2Class { a: c[0].clone(), b: c[1..].iter().map(|x| -x).collect() }
    }

    pub fn square(&self) -> BigInt {
        &self.a * &self.a - self.b.iter().map(|x| x * x).sum::<BigInt>()
    }

    /// `K . x` with `K = -3L + sum E_i`.
    pub fn canonical_pairing(&self) -> BigInt {
        -BigInt::from(3) * &self.a + self.b.iter().sum::<BigInt>()
    }
}

impl fmt::Display for H2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> =
            std::iter::once("L".to_string()).chain((1..=self.k()).map(|i| format!("E{i}"))).collect();
        f.write_str(&crate::reduced_space::class_label(&names, &self.to_lattice()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormVector {
    pub alpha: Rat,
    pub delta: Vec<Rat>,
}

impl FormVector {
    pub fn new(alpha: Rat, delta: Vec<Rat>) -> Self {
        FormVector { alpha, delta }
    }

    pub fn k(&self) -> usize {
        self.delta.len()
    }

    pub fn volume(&self) -> Rat {
        &self.alpha * &self.alpha - self.delta.iter().map(|d| d * d).sum::<Rat>()
    }

    pub fn area(&self, x: &H2Class) -> Rat {
        &self.alpha * to_rat(&x.a) - self.delta.iter().zip(&x.b).map(|(d, b)| d * to_rat(b)).sum::<Rat>()
    }

    pub fn is_reduced(&self) -> bool {
        let zero = Rat::zero();
        let d = |i: usize| self.delta.get(i).unwrap_or(&zero);
        self.delta.iter().all(|x| x.is_positive())
            && self.delta.windows(2).all(|w| w[0] >= w[1])
            && d(0) + d(1) + d(2) <= self.alpha
    }
}

impl fmt::Display for FormVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.delta.iter().map(fmt_rational).collect();
        write!(f, "({}; {})", fmt_rational(&self.alpha), ds.join(", "))
    }
}

pub fn pairing(x: &H2Class, y: &H2Class) -> Result<BigInt> {
    if x.k() != y.k() {
        return Err(Error::Dimension(format!("classes live in CP2#{} and CP2#{}", x.k(), y.k())));
    }
    Ok(&x.a * &y.a - x.b.iter().zip(&y.b).map(|(p, q)| p * q).sum::<BigInt>())
}

/// Shared shape of classes and forms under the moves.
pub trait CremonaTarget: Sized {
    fn k(&self) -> usize;
    fn cremona_unchecked(&self, idx: [usize; 3]) -> Self;
    fn permuted(&self, perm: &[usize]) -> Self;

    fn cremona(&self, idx: [usize; 3]) -> Result<Self> {
        for &i in &idx {
            if i >= self.k() {
                return Err(Error::IndexOutOfRange(i));
            }
        }
        if idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2] {
            return Err(Error::Malformed("Cremona move needs three distinct indices".into()));
        }
        Ok(self.cremona_unchecked(idx))
    }
}

impl CremonaTarget for H2Class {
    fn k(&self) -> usize {
        self.b.len()
    }

    fn cremona_unchecked(&self, idx: [usize; 3]) -> Self {
        let d = &self.a - idx.iter().map(|&i| &self.b[i]).sum::<BigInt>();
        let mut out = self.clone();
        out.a += &d;
        for &i in &idx {
            out.b[i] += &d;
        }
        out
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        H2Class { a: self.a.clone(), b: perm.iter().map(|&i| self.b[i].clone()).collect() }
    }
}

impl CremonaTarget for FormVector {
    fn k(&self) -> usize {
        self.delta.len()
    }

    fn cremona_unchecked(&self, idx: [usize; 3]) -> Self {
        let d = &self.alpha - idx.iter().map(|&i| &self.delta[i]).sum::<Rat>();
        let mut out = self.clone();
        out.alpha += &d;
        for &i in &idx {
            out.delta[i] += &d;
        }
        out
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        FormVector { alpha: self.alpha.clone(), delta: perm.iter().map(|&i| self.delta[i].clone()).collect() }
    }
}

/// Reflection in `L - E_i - E_j - E_l` (zero-based indices).
pub fn cremona_move<T: CremonaTarget>(x: &T, idx: [usize; 3]) -> Result<T> {
    x.cremona(idx)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormMove {
    /// New position `i` takes old position `perm[i]`.
    Permute(Vec<usize>),
    Cremona([usize; 3]),
}

impl FormMove {
    pub fn apply<T: CremonaTarget>(&self, x: &T) -> T {
        match self {
            FormMove::Permute(p) => x.permuted(p),
            FormMove::Cremona(idx) => x.cremona_unchecked(*idx),
        }
    }

    pub fn invert<T: CremonaTarget>(&self, x: &T) -> T {
        match self {
            FormMove::Permute(p) => {
                let mut inv = vec![0; p.len()];
                for (i, &j) in p.iter().enumerate() {
                    inv[j] = i;
                }
                x.permuted(&inv)
            }
            FormMove::Cremona(idx) => x.cremona_unchecked(*idx),
        }
    }
}

pub fn replay<T: CremonaTarget>(log: &[FormMove], x: &T) -> T {
    log.iter().fold(x.permuted(&(0..x.k()).collect::<Vec<_>>()), |acc, m| m.apply(&acc))
}

pub fn unreplay<T: CremonaTarget>(log: &[FormMove], x: &T) -> T {
    log.iter().rev().fold(x.permuted(&(0..x.k()).collect::<Vec<_>>()), |acc, m| m.invert(&acc))
}

fn sorting_permutation<T: Ord>(v: &[T]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..v.len()).collect();
    perm.sort_by(|&i, &j| v[j].cmp(&v[i]).then(i.cmp(&j)));
    perm
}

/// Sorts and applies Cremona moves until the form is reduced.
pub fn reduce_form(v: &FormVector) -> Result<(FormVector, Vec<FormMove>)> {
    if !v.alpha.is_positive() || v.delta.iter().any(|d| !d.is_positive()) || !v.volume().is_positive() {
        return Err(Error::InvalidForm(v.to_string()));
    }
    let mut cur = v.clone();
    let mut log = Vec::new();
    for _ in 0..CREMONA_GUARD {
        let perm = sorting_permutation(&cur.delta);
        if perm.iter().enumerate().any(|(i, &j)| i != j) {
            let m = FormMove::Permute(perm);
            cur = m.apply(&cur);
            log.push(m);
        }
        if cur.is_reduced() {
            return Ok((cur, log));
        }
        if cur.k() < 3 {
            return Err(Error::InvalidForm(format!("{v} violates the reduction inequality with fewer than three blowups")));
        }
        let m = FormMove::Cremona([0, 1, 2]);
        cur = m.apply(&cur);
        log.push(m);
        if !cur.alpha.is_positive() || cur.delta.iter().any(|d| !d.is_positive()) {
            return Err(Error::InvalidForm(format!("{v} is not a blowup form")));
        }
    }
    Err(Error::GuardExceeded(format!("reduction of {v}")))
}

/// Square `-1`, canonical pairing `-1`, and Cremona descent to some `E_i`.
pub fn is_exceptional(x: &H2Class) -> bool {
    if x.square() != -BigInt::one() || x.canonical_pairing() != -BigInt::one() {
        return false;
    }
    let mut cur = x.clone();
    while cur.b.len() < 3 {
        cur.b.push(BigInt::zero());
    }
    for _ in 0..CREMONA_GUARD {
        cur = cur.permuted(&sorting_permutation(&cur.b));
        if cur.a.is_zero() {
            let neg: Vec<_> = cur.b.iter().filter(|b| !b.is_zero()).collect();
            return neg.len() == 1 && *neg[0] == -BigInt::one();
        }
        if cur.a.is_negative() {
            return false;
        }
        let d = &cur.a - &cur.b[0] - &cur.b[1] - &cur.b[2];
        if !d.is_negative() {
            return false;
        }
        cur = cur.cremona_unchecked([0, 1, 2]);
    }
    false
}

/// Largest degree `a` an exceptional class of area at most `bound` can have
/// under the reduced form `v`.
///
/// With `sum b_i = 3a - 1` fixed the area is `a alpha - sum b_i delta_i`, and
/// Cauchy-Schwarz with `sum b_i^2 = a^2 + 1` gives
/// `area >= a alpha - sqrt(a^2 + 1) |delta|`. The right side grows without
/// bound since `alpha^2 > |delta|^2`.
fn degree_bound(v: &FormVector, bound: &Rat) -> Result<i64> {
    let d2: Rat = v.delta.iter().map(|d| d * d).sum();
    let q = v.volume();
    let feasible = |a: i64| {
        let a = rint(a);
        let lhs = &a * &v.alpha - bound;
        !lhs.is_positive() || &lhs * &lhs <= (&a * &a + rint(1)) * &d2
    };
    // Past the vertex of the quadratic the set of feasible a is an interval.
    let vertex = (&v.alpha * bound / &q).ceil().to_integer().to_i64().unwrap_or(i64::MAX);
    let mut a = vertex.max(0);
    if a > DEGREE_GUARD {
        return Err(Error::GuardExceeded(format!("degree bound above {DEGREE_GUARD} for {v}")));
    }
    while feasible(a + 1) {
        a += 1;
        if a > DEGREE_GUARD {
            return Err(Error::GuardExceeded(format!("degree bound above {DEGREE_GUARD} for {v}")));
        }
    }
    Ok(a)
}

/// All `b` with entries in `[-a, a]`, `sum b = s`, `sum b^2 = q`.
fn coefficient_vectors(k: usize, a: i64, s: i64, q: i64) -> Vec<Vec<i64>> {
    fn go(k: usize, a: i64, s: i64, q: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let m = (k - cur.len()) as i64;
        if m == 0 {
            if s == 0 && q == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if q < 0 || s * s > m * q || s.abs() > m * a {
            return;
        }
        let top = a.min(q.sqrt());
        for x in -top..=top {
            cur.push(x);
            go(k, a, s - x, q - x * x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, a, s, q, &mut Vec::with_capacity(k), &mut out);
    out
}

fn enumerate_reduced(v: &FormVector, bound: &Rat) -> Result<Vec<H2Class>> {
    let k = v.k();
    let mut out = Vec::new();
    // Positivity against a line class forces a >= 0; a = 0 leaves only the E_i.
    for i in 1..=k {
        out.push(H2Class::exceptional_divisor(k, i));
    }
    for a in 1..=degree_bound(v, bound)? {
        for b in coefficient_vectors(k, a, 3 * a - 1, a * a + 1) {
            let x = H2Class::new(a, &b);
            if is_exceptional(&x) {
                out.push(x);
            }
        }
    }
    Ok(out.into_iter().filter(|x| {
        let area = v.area(x);
        area.is_positive() && &area <= bound
    }).collect())
}

/// Exceptional classes with `0 < area <= bound`, sorted by area then class.
///
/// The search runs on the reduced form and transports the results back
/// through the reduction log, so the degree cutoff of [`degree_bound`]
/// applies.
pub fn enumerate_exceptional(v: &FormVector, bound: &Rat) -> Result<Vec<(H2Class, Rat)>> {
    if v.k() == 0 {
        return Ok(Vec::new());
    }
    let (r, log) = reduce_form(v)?;
    let mut out: Vec<(H2Class, Rat)> = enumerate_reduced(&r, bound)?
        .into_iter()
        .map(|x| {
            let y = unreplay(&log, &x);
            let area = v.area(&y);
            (y, area)
        })
        .collect();
    out.sort_by(|p, q| p.1.cmp(&q.1).then_with(|| p.0.cmp(&q.0)));
    Ok(out)
}

/// Exceptional classes of minimal area.
pub fn emin_set(v: &FormVector) -> Result<Vec<H2Class>> {
    let Some(bound) = v.delta.iter().min().cloned() else { return Ok(Vec::new()) };
    let all = enumerate_exceptional(v, &bound)?;
    let Some(min) = all.first().map(|p| p.1.clone()) else { return Ok(Vec::new()) };
    Ok(all.into_iter().filter(|p| p.1 == min).map(|p| p.0).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EminShape {
    /// `{E_{j+1}, .., E_k}`: the divisors of smallest size.
    TailDivisors,
    /// `{L - E1 - E2, E3, .., Ek}`.
    LineAndTail,
}

/// Which of the two closed forms `set` has, if any (for reduced `v`, `k >= 3`).
pub fn emin_closed_form(v: &FormVector, set: &[H2Class]) -> Option<EminShape> {
    let k = v.k();
    let mut got = set.to_vec();
    got.sort();
    let last = v.delta.last()?;
    let mut tail: Vec<H2Class> =
        (1..=k).filter(|&i| &v.delta[i - 1] == last).map(|i| H2Class::exceptional_divisor(k, i)).collect();
    tail.sort();
    if got == tail {
        return Some(EminShape::TailDivisors);
    }
    if k >= 2 {
        let mut b = vec![0; k];
        b[0] = 1;
        b[1] = 1;
        let mut line: Vec<H2Class> =
            std::iter::once(H2Class::new(1, &b)).chain((3..=k).map(|i| H2Class::exceptional_divisor(k, i))).collect();
        line.sort();
        if got == line {
            return Some(EminShape::LineAndTail);
        }
    }
    None
}

/// Exceptional classes just below the wall whose area is exactly the
/// distance to the level, in lattice coordinates of the slice below.
pub fn eprime_candidates(wall: &WallCrossing) -> Result<Vec<Vec<BigInt>>> {
    let below = wall.below.as_ref().ok_or_else(|| Error::Extremal(fmt_rational(&wall.level)))?;
    let SurfaceModel::ProjectivePlane { blowups } = below.lattice.model else {
        // S^2 x S^2 carries no exceptional classes.
        return Ok(Vec::new());
    };
    if blowups == 0 {
        return Ok(Vec::new());
    }
    let crate::reduced_space::SliceParam::Interval(lo, _) = &below.polygon.param else {
        return Err(Error::Malformed("slice below the wall is not an interval".into()));
    };
    let eps = (&wall.level - lo) / rint(2);
    let t = &wall.level - &eps;
    let omega = below.omega_functional()?;
    let v = FormVector::new(omega[0].eval(&t), omega[1..].iter().map(|w| w.eval(&t)).collect());
    let target = Affine::new(wall.level.clone(), -rint(1));
    let mut out = Vec::new();
    for (x, _) in enumerate_exceptional(&v, &eps)? {
        let c = x.to_lattice();
        let area = c.iter().zip(&omega).fold(Affine::zero(), |acc, (ci, w)| &acc + &w.scale(&to_rat(ci)));
        if area == target {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

/// [`eprime_candidates`], checked against the vanishing classes of the wall.
pub fn eprime_set(wall: &WallCrossing) -> Result<Vec<Vec<BigInt>>> {
    let e = eprime_candidates(wall)?;
    let mut d: Vec<Vec<BigInt>> = wall.d_minus.iter().map(|w| w.class.clone()).collect();
    d.sort();
    if e != d {
        let below = wall.below.as_ref().expect("candidates needed the slice below");
        let show = |s: &[Vec<BigInt>]| s.iter().map(|c| below.lattice.label(c)).collect::<Vec<_>>().join(", ");
        return Err(Error::EPrimeMismatch(format!("E' = {{{}}} but D = {{{}}}", show(&e), show(&d))));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn fv(alpha: i64, d: &[i64]) -> FormVector {
        FormVector::new(rint(alpha), d.iter().map(|&x| rint(x)).collect())
    }

    #[test]
    fn pairings() {
        let e1 = H2Class::exceptional_divisor(2, 1);
        assert_eq!(pairing(&e1, &e1).unwrap(), BigInt::from(-1));
        let c = H2Class::new(1, &[1, 1]);
        assert_eq!(pairing(&c, &c).unwrap(), BigInt::from(-1));
        assert_eq!(pairing(&H2Class::line(2), &e1).unwrap(), BigInt::zero());
        assert!(pairing(&e1, &H2Class::line(3)).is_err());
    }

    #[test]
    fn cremona_examples() {
        let e1 = H2Class::exceptional_divisor(3, 1);
        let m = cremona_move(&e1, [0, 1, 2]).unwrap();
        assert_eq!(m, H2Class::new(1, &[0, 1, 1]));
        assert_eq!(cremona_move(&m, [0, 1, 2]).unwrap(), e1);
        assert_eq!(cremona_move(&e1, [0, 1, 3]), Err(Error::IndexOutOfRange(3)));
    }

    #[test]
    fn exceptionality() {
        assert!(is_exceptional(&H2Class::exceptional_divisor(3, 3)));
        assert!(is_exceptional(&H2Class::new(2, &[1, 1, 1, 1, 1])));
        assert!(is_exceptional(&H2Class::new(1, &[1, 1])));
        assert!(!is_exceptional(&H2Class::new(1, &[1])));
        assert!(!is_exceptional(&H2Class::new(1, &[1, 1, 1, 1])));
    }

    #[test]
    fn reduction() {
        let (r, log) = reduce_form(&fv(9, &[4, 4, 1])).unwrap();
        assert_eq!(r, fv(9, &[4, 4, 1]));
        assert!(log.is_empty());
        let (r, log) = reduce_form(&fv(6, &[3, 2, 2])).unwrap();
        assert_eq!(r, fv(5, &[2, 1, 1]));
        assert_eq!(log, vec![FormMove::Cremona([0, 1, 2])]);
        let (r, _) = reduce_form(&fv(1, &[])).unwrap();
        assert_eq!(r, fv(1, &[]));
        assert!(matches!(reduce_form(&fv(3, &[2, 2])), Err(Error::InvalidForm(_))));
    }

    #[test]
    fn enumeration_examples() {
        let got: Vec<H2Class> = enumerate_exceptional(&fv(3, &[1, 1]), &rint(1)).unwrap().into_iter().map(|p| p.0).collect();
        let mut want = vec![H2Class::exceptional_divisor(2, 1), H2Class::exceptional_divisor(2, 2), H2Class::new(1, &[1, 1])];
        want.sort();
        assert_eq!(got, want);
        let v = FormVector::new(rint(5), vec![rat(7, 3)]);
        let got = enumerate_exceptional(&v, &rat(7, 3)).unwrap();
        assert_eq!(got, vec![(H2Class::exceptional_divisor(1, 1), rat(7, 3))]);
    }

    #[test]
    fn emin_examples() {
        let mut e = emin_set(&fv(9, &[1, 1, 1])).unwrap();
        e.sort();
        assert_eq!(e.len(), 3);
        assert_eq!(emin_closed_form(&fv(9, &[1, 1, 1]), &e), Some(EminShape::TailDivisors));
        let e = emin_set(&fv(9, &[4, 4, 1])).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(emin_closed_form(&fv(9, &[4, 4, 1]), &e), Some(EminShape::LineAndTail));
        assert!(emin_set(&fv(2, &[])).unwrap().is_empty());
    }
}
