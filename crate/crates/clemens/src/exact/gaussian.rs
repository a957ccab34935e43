//! Gaussian rationals: the field ℚ(i) housing all complexified coordinates.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::rational::Rat;

/// Element of ℚ(i), serialized as the two-element array `["re", "im"]`
/// with each part in the `"p/q"` form of [`Rat`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(Rat, Rat)", into = "(Rat, Rat)")]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl From<(Rat, Rat)> for GaussRat {
    fn from((re, im): (Rat, Rat)) -> Self {
        GaussRat { re, im }
    }
}

impl From<GaussRat> for (Rat, Rat) {
    fn from(z: GaussRat) -> Self {
        (z.re, z.im)
    }
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        GaussRat::new(Rat::one(), Rat::zero())
    }

    /// The imaginary unit √−1.
    pub fn i() -> Self {
        GaussRat::new(Rat::zero(), Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        GaussRat::new(r, Rat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::from_rat(Rat::from_int(n))
    }

    /// `a/b + (c/d)i` from machine integers.
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        GaussRat::new(Rat::new(a, b), Rat::new(c, d))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate; the Galois involution of ℚ(i)/ℚ.
    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -&self.im)
    }

    /// |z|² = z·conj(z), an exact rational.
    pub fn norm_sqr(&self) -> Rat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// ℓ1 magnitude bound |Re| + |Im| ≥ |z|; used by the certified threshold bounds.
    pub fn l1(&self) -> Rat {
        &self.re.abs() + &self.im.abs()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero");
        GaussRat::new(&self.re / &n, &(-&self.im) / &n)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        GaussRat::new(&self.re * r, &self.im * r)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl Add<&GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl Div<&GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: &GaussRat) -> GaussRat {
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &GaussRat) -> GaussRat {
                (&self).$method(rhs)
            }
        }
        impl $trait<GaussRat> for &GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-&self.re, -&self.im)
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, rhs: &GaussRat) {
        *self = (&*self) * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_identities() {
        let z = GaussRat::from_parts(3, 2, -1, 4);
        let w = GaussRat::from_parts(1, 3, 2, 1);
        let prod = &z * &w;
        assert_eq!(&prod / &w, z);
        assert_eq!(&(&z * &z.recip()) * &GaussRat::one(), GaussRat::one());
    }

    #[test]
    fn conjugation_is_involutive_automorphism() {
        let z = GaussRat::from_parts(3, 2, -1, 4);
        let w = GaussRat::from_parts(-2, 5, 7, 3);
        assert_eq!(z.conj().conj(), z);
        assert_eq!((&z * &w).conj(), &z.conj() * &w.conj());
        assert_eq!((&z + &w).conj(), &z.conj() + &w.conj());
    }

    #[test]
    fn norm_is_multiplicative() {
        let z = GaussRat::from_parts(3, 1, 4, 1);
        assert_eq!(z.norm_sqr(), Rat::from_int(25));
        let w = GaussRat::from_parts(1, 2, 1, 2);
        assert_eq!((&z * &w).norm_sqr(), &z.norm_sqr() * &w.norm_sqr());
    }

    #[test]
    fn serde_two_element_array() {
        let z = GaussRat::from_parts(1, 2, -3, 4);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"["1/2","-3/4"]"#);
        let back: GaussRat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
    }
}
