//! Exact integer and rational linear algebra: Smith normal form, integer
//! solving, cokernels and a few small helpers used everywhere else.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Integer vector from machine integers.
pub fn ivec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn to_rat(x: &BigInt) -> Rat {
    Rat::from_integer(x.clone())
}

/// Parses `"3"`, `"-7/10"` or `"1.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rat::new(w.abs() * &scale + f, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// `p/q` or `p` when integral.
pub fn fmt_rational(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[BigInt], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + to_rat(x) * y)
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content of a nonzero vector, keeping its direction.
pub fn primitive(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_all(v).is_one()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_of_rational(v: &[Rat]) -> Result<Vec<BigInt>> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * to_rat(&l)).to_integer()).collect();
    primitive(&ints)
}

pub fn cross3(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn det2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// True iff the square family of integer vectors is a basis of the lattice.
pub fn is_unimodular_basis(vectors: &[Vec<BigInt>]) -> bool {
    let n = vectors.len();
    if vectors.iter().any(|v| v.len() != n) {
        return false;
    }
    let m = IntMatrix::from_columns(n, vectors);
    m.det().abs().is_one()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| ivec(r)).collect()).expect("ragged matrix literal")
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows_vec();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Integer inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let d = self.det();
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular(d.to_string()));
        }
        let rows: Vec<Vec<Rat>> =
            self.rows_vec().into_iter().map(|r| r.iter().map(to_rat).collect()).collect();
        let inv = rat_inverse(&rows).ok_or_else(|| Error::NotUnimodular(d.to_string()))?;
        IntMatrix::from_rows(inv.into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    /// Block matrix `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self[(i, j)].clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other[(i, j)].clone());
            }
        }
        out
    }

    /// Block matrix `[self; other]`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[source * self.cols + j] * k;
            self.data[target * self.cols + j] += v;
        }
    }

    /// col[target] += k * col[source]
    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + source] * k;
            self.data[i * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn min_abs_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form by elementary operations, pivoting on the entry of
/// least absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_nonzero(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut moved = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    moved = true;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    moved = true;
                }
            }
            if moved {
                continue;
            }
            let p = d[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, d, v }
}

/// Some `x` with `A x = b` over the integers, if one exists.
pub fn integer_solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len(), "right-hand side length");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, ci) in c.iter().enumerate() {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ci.div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// `coker(A) = Z^m / A Z^n` written as `(+) Z/d_i (+) Z^free`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelPresentation {
    /// Nontrivial invariant factors (all > 1), in divisibility order.
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
    /// Rows map the ambient lattice to (torsion coords, free coords).
    pub projection: IntMatrix,
}

impl CokernelPresentation {
    /// Canonical coordinates of the image of `w`; torsion entries reduced
    /// into `[0, d_i)`.
    pub fn project(&self, w: &[BigInt]) -> Vec<BigInt> {
        let mut p = self.projection.mul_vec(w);
        for (x, d) in p.iter_mut().zip(&self.invariant_factors) {
            *x = x.mod_floor(d);
        }
        p
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }
}

pub fn cokernel_presentation(a: &IntMatrix) -> CokernelPresentation {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let r = snf.rank();
    let mut factors = Vec::new();
    let mut rows = Vec::new();
    for (i, d) in diag.iter().enumerate().take(r) {
        if !d.is_one() {
            factors.push(d.clone());
            rows.push(snf.u.row(i));
        }
    }
    for i in r..a.rows {
        rows.push(snf.u.row(i));
    }
    let projection = if rows.is_empty() {
        IntMatrix::zeros(0, a.rows)
    } else {
        IntMatrix::from_rows(rows).expect("rows of U have equal length")
    };
    CokernelPresentation { invariant_factors: factors, free_rank: a.rows - r, projection }
}

/// Gauss–Jordan inverse of a square rational matrix.
pub fn rat_inverse(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let v = &f * &m[c][j];
                    m[i][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Unique solution of a square rational system, if the matrix is invertible.
pub fn rat_solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let inv = rat_inverse(a)?;
    Some(inv.iter().map(|row| row.iter().zip(b).fold(Rat::zero(), |s, (x, y)| s + x * y)).collect())
}

/// Rank of a list of rational vectors.
pub fn rat_rank(vectors: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = vectors.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[rank][c];
            for j in c..cols {
                let v = &f * &m[rank][j];
                m[i][j] -= v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let diag = s.diagonal();
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn snf_diag_2_3() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        check_snf(&a);
        assert_eq!(smith_normal_form(&a).diagonal(), ivec(&[1, 6]));
    }

    #[test]
    fn snf_identity_and_zero() {
        let i3 = IntMatrix::identity(3);
        assert_eq!(smith_normal_form(&i3).d, i3);
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(smith_normal_form(&z).d, z);
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMatrix::from_i64(&[&[4, 6, 2], &[6, 9, 3]]);
        check_snf(&a);
        assert_eq!(smith_normal_form(&a).diagonal(), ivec(&[1, 0]));
        let b = IntMatrix::from_i64(&[&[2, 4], &[6, 8], &[10, 12]]);
        check_snf(&b);
        assert_eq!(smith_normal_form(&b).diagonal(), ivec(&[2, 4]));
    }

    #[test]
    fn unimodular_bases() {
        assert!(is_unimodular_basis(&[ivec(&[1, 0, 0]), ivec(&[1, 1, 0]), ivec(&[-1, -1, -1])]));
        assert!(is_unimodular_basis(&[ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])]));
        assert!(!is_unimodular_basis(&[ivec(&[2, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])]));
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&ivec(&[2, 2, 0])).unwrap(), ivec(&[1, 1, 0]));
        assert_eq!(primitive(&ivec(&[0, 0, -3])).unwrap(), ivec(&[0, 0, -1]));
        assert_eq!(primitive(&ivec(&[1, 1, 1])).unwrap(), ivec(&[1, 1, 1]));
        assert_eq!(primitive(&ivec(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn solving() {
        let a = IntMatrix::from_i64(&[&[2]]);
        assert_eq!(integer_solve(&a, &ivec(&[4])), Some(ivec(&[2])));
        assert_eq!(integer_solve(&a, &ivec(&[3])), None);
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(integer_solve(&swap, &ivec(&[1, 2])), Some(ivec(&[2, 1])));
    }

    #[test]
    fn cokernels() {
        assert!(cokernel_presentation(&IntMatrix::identity(3)).is_trivial());
        let c = cokernel_presentation(&IntMatrix::from_i64(&[&[2, 0], &[0, 0]]));
        assert_eq!(c.invariant_factors, ivec(&[2]));
        assert_eq!(c.free_rank, 1);
        // (v, -S v) for the coordinate swap S.
        let k = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, -1], &[-1, 0]]);
        let c = cokernel_presentation(&k);
        assert!(c.invariant_factors.is_empty());
        assert_eq!(c.free_rank, 2);
    }

    #[test]
    fn rationals_round_trip() {
        assert_eq!(parse_rational("1/10").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("-2/5").unwrap(), rat(-2, 5));
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rint(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&rat(22, 20)), "11/10");
    }

    #[test]
    fn inverse_and_det() {
        let a = IntMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        assert_eq!(a.inverse().unwrap(), IntMatrix::from_i64(&[&[1, 0], &[-1, 1]]));
        assert!(IntMatrix::from_i64(&[&[2, 0], &[0, 1]]).inverse().is_err());
        let b = IntMatrix::from_i64(&[&[0, 2, 1], &[1, 0, 3], &[4, 1, 0]]);
        assert_eq!(b.det(), BigInt::from(25));
    }
}
