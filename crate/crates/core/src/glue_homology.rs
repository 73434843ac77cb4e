//! Second homology of a manifold cut along a slab `U` and reglued.
//!
//! With inclusions `A-: H2(U) -> H2(M-)`, `A+: H2(U) -> H2(M+)` and a gluing
//! automorphism `G` of `H2(U)`, the glued space has
//! `H2 = coker(v -> (A- v, -A+ G v)) + Z^f` where `f` is the rank coming from
//! `H1(U)`. The minus sign on the second block is a fixed convention.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{cokernel_presentation, CokernelPresentation, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingProblem {
    pub minus: IntMatrix,
    pub plus: IntMatrix,
    pub gluing: IntMatrix,
    pub h1_rank: usize,
}

impl GluingProblem {
    pub fn new(minus: IntMatrix, plus: IntMatrix, gluing: IntMatrix, h1_rank: usize) -> Result<Self> {
        let r = gluing.nrows();
        if !gluing.is_square() || minus.ncols() != r || plus.ncols() != r {
            return Err(Error::Dimension(format!(
                "H2(U) has rank {r} but the inclusions have {} and {} columns",
                minus.ncols(),
                plus.ncols()
            )));
        }
        if !gluing.is_unimodular() {
            return Err(Error::NotUnimodular(gluing.to_string()));
        }
        Ok(GluingProblem { minus, plus, gluing, h1_rank })
    }

    pub fn slab_rank(&self) -> usize {
        self.gluing.nrows()
    }

    /// The difference map `H2(U) -> H2(M-) + H2(M+)`.
    pub fn difference_map(&self) -> IntMatrix {
        self.minus.vstack(&self.plus.mul(&self.gluing).neg())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedH2Presentation {
    pub relations: IntMatrix,
    pub cokernel: CokernelPresentation,
    pub h1_rank: usize,
    pub minus_rank: usize,
    pub plus_rank: usize,
}

impl GluedH2Presentation {
    /// Total free rank of the glued `H2`.
    pub fn free_rank(&self) -> usize {
        self.cokernel.free_rank + self.h1_rank
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.cokernel.invariant_factors.clone()
    }

    /// Matrix sending classes of one side to cokernel coordinates.
    pub fn side_projection(&self, side: Side) -> IntMatrix {
        let p = &self.cokernel.projection;
        let (start, len) = match side {
            Side::Minus => (0, self.minus_rank),
            Side::Plus => (self.minus_rank, self.plus_rank),
        };
        let cols: Vec<Vec<BigInt>> = (start..start + len).map(|j| p.col(j)).collect();
        IntMatrix::from_columns(p.nrows(), &cols)
    }
}

pub fn mv_presentation(p: &GluingProblem) -> GluedH2Presentation {
    let relations = p.difference_map();
    GluedH2Presentation {
        cokernel: cokernel_presentation(&relations),
        relations,
        h1_rank: p.h1_rank,
        minus_rank: p.minus.nrows(),
        plus_rank: p.plus.nrows(),
    }
}

/// Image of a side class in the glued `H2`, in cokernel coordinates.
pub fn glued_class(pres: &GluedH2Presentation, side: Side, class: &[BigInt]) -> Result<Vec<BigInt>> {
    let n = match side {
        Side::Minus => pres.minus_rank,
        Side::Plus => pres.plus_rank,
    };
    if class.len() != n {
        return Err(Error::Dimension(format!("side class has {} entries, expected {n}", class.len())));
    }
    let mut w = vec![BigInt::zero(); pres.minus_rank + pres.plus_rank];
    let off = if side == Side::Minus { 0 } else { pres.minus_rank };
    for (i, c) in class.iter().enumerate() {
        w[off + i] = c.clone();
    }
    Ok(pres.cokernel.project(&w))
}

/// Equality of two cokernel elements.
pub fn classes_equal(pres: &GluedH2Presentation, x: &[BigInt], y: &[BigInt]) -> bool {
    let t = pres.cokernel.invariant_factors.len();
    x.iter().zip(y).enumerate().all(|(i, (a, b))| {
        if i < t {
            (a - b).mod_floor(&pres.cokernel.invariant_factors[i]).is_zero()
        } else {
            a == b
        }
    })
}

/// Equality of two side classes after gluing, decided by solving against
/// the relation matrix directly.
pub fn side_classes_equal(pres: &GluedH2Presentation, x: (Side, &[BigInt]), y: (Side, &[BigInt])) -> Result<bool> {
    let lift = |(side, c): (Side, &[BigInt])| -> Vec<BigInt> {
        let mut w = vec![BigInt::zero(); pres.minus_rank + pres.plus_rank];
        let off = if side == Side::Minus { 0 } else { pres.minus_rank };
        for (i, v) in c.iter().enumerate() {
            w[off + i] = v.clone();
        }
        w
    };
    let (wx, wy) = (lift(x), lift(y));
    let diff: Vec<BigInt> = wx.iter().zip(&wy).map(|(a, b)| a - b).collect();
    let by_solve = crate::linalg::integer_solve(&pres.relations, &diff).is_some();
    let by_projection = classes_equal(pres, &glued_class(pres, x.0, x.1)?, &glued_class(pres, y.0, y.1)?);
    debug_assert_eq!(by_solve, by_projection);
    Ok(by_solve)
}

/// Every integer `m` with `(F + m s)^2 = 0` and `s . (F + m s) = 1` on the
/// lattice spanned by a section `s` (square `-k`) and a fiber `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityCertificate {
    pub k: i64,
    pub solutions: Vec<i64>,
}

impl RigidityCertificate {
    pub fn forces_zero(&self) -> bool {
        self.solutions == [0]
    }
}

/// Integer roots of `c2 m^2 + c1 m + c0`; `None` when every integer is a root.
fn integer_roots(c2: i64, c1: i64, c0: i64) -> Option<Vec<i64>> {
    if c2 == 0 && c1 == 0 {
        return if c0 == 0 { None } else { Some(Vec::new()) };
    }
    let candidates: Vec<i64> = if c0 == 0 {
        let mut v = vec![0];
        if c2 != 0 && (-c1) % c2 == 0 {
            v.push(-c1 / c2);
        }
        v
    } else {
        let n = c0.abs();
        (1..=n).filter(|d| n % d == 0).flat_map(|d| [d, -d]).collect()
    };
    let mut out: Vec<i64> = candidates.into_iter().filter(|&m| c2 * m * m + c1 * m + c0 == 0).collect();
    out.sort_unstable();
    out.dedup();
    Some(out)
}

pub fn hirzebruch_euler_rigidity(k: i64) -> RigidityCertificate {
    // (F + m s)^2 = 2m - k m^2 and s . (F + m s) = 1 - k m.
    let square = integer_roots(-k, 2, 0);
    let section = integer_roots(0, -k, 0);
    let solutions = match (square, section) {
        (Some(a), Some(b)) => a.into_iter().filter(|m| b.contains(m)).collect(),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => unreachable!("the square constraint is never vacuous"),
    };
    RigidityCertificate { k, solutions }
}

/// Rank of the kernel of a side inclusion into the glued `H2` (torsion-free part).
pub fn side_kernel_rank(pres: &GluedH2Presentation, side: Side) -> usize {
    let proj = pres.side_projection(side);
    let t = pres.cokernel.invariant_factors.len();
    let free_rows: Vec<Vec<BigInt>> = (t..proj.nrows()).map(|i| proj.row(i)).collect();
    let n = proj.ncols();
    if free_rows.is_empty() {
        return n;
    }
    let m = IntMatrix::from_rows(free_rows).expect("equal lengths");
    n - crate::linalg::smith_normal_form(&m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::swap_matrix;
    use crate::linalg::ivec;

    fn problem(g: IntMatrix) -> GluingProblem {
        GluingProblem::new(IntMatrix::identity(2), IntMatrix::identity(2), g, 1).unwrap()
    }

    #[test]
    fn swap_gluing_separates_spheres() {
        let pres = mv_presentation(&problem(swap_matrix()));
        assert_eq!(pres.cokernel.free_rank, 2);
        assert!(pres.torsion().is_empty());
        assert_eq!(pres.free_rank(), 3);
        let e2 = ivec(&[0, 1]);
        let minus = glued_class(&pres, Side::Minus, &e2).unwrap();
        let plus = glued_class(&pres, Side::Plus, &e2).unwrap();
        assert!(!classes_equal(&pres, &minus, &plus));
        assert!(!side_classes_equal(&pres, (Side::Minus, &e2), (Side::Plus, &e2)).unwrap());
        let e1 = ivec(&[1, 0]);
        assert!(side_classes_equal(&pres, (Side::Plus, &e2), (Side::Minus, &e1)).unwrap());
    }

    #[test]
    fn identity_gluing_identifies_spheres() {
        let pres = mv_presentation(&problem(IntMatrix::identity(2)));
        let e2 = ivec(&[0, 1]);
        assert!(side_classes_equal(&pres, (Side::Minus, &e2), (Side::Plus, &e2)).unwrap());
        assert_eq!(side_kernel_rank(&pres, Side::Plus), 0);
    }

    #[test]
    fn zero_inclusions() {
        let p = GluingProblem::new(IntMatrix::zeros(2, 2), IntMatrix::zeros(3, 2), IntMatrix::identity(2), 0).unwrap();
        let pres = mv_presentation(&p);
        assert_eq!(pres.cokernel.free_rank, 5);
        let z = glued_class(&pres, Side::Minus, &ivec(&[0, 0])).unwrap();
        assert!(z.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn rigidity() {
        for k in [0, 1, 4] {
            assert!(hirzebruch_euler_rigidity(k).forces_zero(), "k = {k}");
        }
    }
}
