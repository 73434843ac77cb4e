//! Affine functions `a + b t` and polynomials in the level parameter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::linalg::{fmt_rational, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub constant: Rat,
    pub slope: Rat,
}

impl Affine {
    pub fn new(constant: Rat, slope: Rat) -> Self {
        Affine { constant, slope }
    }

    pub fn constant(c: Rat) -> Self {
        Affine { constant: c, slope: Rat::zero() }
    }

    pub fn zero() -> Self {
        Self::constant(Rat::zero())
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        &self.constant + &self.slope * t
    }

    pub fn scale(&self, k: &Rat) -> Affine {
        Affine { constant: &self.constant * k, slope: &self.slope * k }
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    /// The affine function pinned to its value at `t`.
    pub fn freeze(&self, t: &Rat) -> Affine {
        Affine::constant(self.eval(t))
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(vec![self.constant.clone(), self.slope.clone()])
    }
}

impl Add for &Affine {
    type Output = Affine;
    fn add(self, o: &Affine) -> Affine {
        Affine { constant: &self.constant + &o.constant, slope: &self.slope + &o.slope }
    }
}

impl Sub for &Affine {
    type Output = Affine;
    fn sub(self, o: &Affine) -> Affine {
        Affine { constant: &self.constant - &o.constant, slope: &self.slope - &o.slope }
    }
}

impl Neg for &Affine {
    type Output = Affine;
    fn neg(self) -> Affine {
        Affine { constant: -&self.constant, slope: -&self.slope }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Dense polynomial in `t`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rat::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &o.scale(&-Rat::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = fmt_rational(&mag);
            match i {
                0 => write!(f, "{m}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{m}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
