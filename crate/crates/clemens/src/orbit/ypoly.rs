//! Polynomials in the single real variable y = Im(z) with Gaussian-rational
//! coefficients.
//!
//! After the coefficient functions of a family are evaluated at a base point
//! (t, ζ), every quantity in the two verification pipelines — pulled-back
//! frame entries, the wedge determinant, the Q-matrix and its minors — is a
//! polynomial in y. Keeping y formal until the last moment is what lets the
//! y²-cancellation be checked as an exact identity, and lets point verdicts
//! be decided by evaluating one exact polynomial on an interval enclosure.

use crate::exact::{ComplexBox, GaussRat, Rat, RatInterval};

/// Polynomial Σ c_k y^k; `coeffs[k]` is c_k, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct YPoly {
    coeffs: Vec<GaussRat>,
}

impl std::fmt::Debug for YPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("({c})·y^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl YPoly {
    pub fn zero() -> Self {
        YPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: GaussRat) -> Self {
        YPoly { coeffs: vec![c] }.trimmed()
    }

    /// c0 + c1·y.
    pub fn linear(c0: GaussRat, c1: GaussRat) -> Self {
        YPoly { coeffs: vec![c0, c1] }.trimmed()
    }

    pub fn from_coeffs(coeffs: Vec<GaussRat>) -> Self {
        YPoly { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(GaussRat::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the convention that the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> GaussRat {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussRat::zero)
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussRat::is_real)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        YPoly { coeffs }.trimmed()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        YPoly { coeffs }.trimmed()
    }

    pub fn neg(&self) -> Self {
        YPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return YPoly::zero();
        }
        let mut coeffs = vec![GaussRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        YPoly { coeffs }.trimmed()
    }

    pub fn scale(&self, k: &GaussRat) -> Self {
        YPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
        .trimmed()
    }

    /// Conjugate as a function of the REAL variable y: conjugate coefficients.
    pub fn conj(&self) -> Self {
        YPoly {
            coeffs: self.coeffs.iter().map(GaussRat::conj).collect(),
        }
    }

    /// Exact evaluation at a rational y.
    pub fn eval(&self, y: &Rat) -> GaussRat {
        let yc = GaussRat::from_rat(y.clone());
        let mut acc = GaussRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &yc) + c;
        }
        acc
    }

    /// Verified evaluation at an interval enclosure of y.
    pub fn eval_box(&self, y: &RatInterval) -> ComplexBox {
        let mut acc = ComplexBox {
            re: RatInterval::zero(),
            im: RatInterval::zero(),
        };
        for c in self.coeffs.iter().rev() {
            acc = ComplexBox {
                re: acc.re.mul(y),
                im: acc.im.mul(y),
            }
            .add(&ComplexBox::point(c));
        }
        acc
    }

    /// Evaluation of a real-coefficient polynomial on an interval; panics if
    /// a coefficient is not real.
    pub fn eval_real_interval(&self, y: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::zero();
        for c in self.coeffs.iter().rev() {
            assert!(c.is_real(), "eval_real_interval on non-real polynomial");
            acc = acc.mul(y).add(&RatInterval::point(c.re.clone()));
        }
        acc
    }
}

/// Newton-form interpolation through (x_j, v_j) with distinct rational nodes;
/// exact, used to recover determinants of polynomial matrices from point
/// evaluations.
pub fn interpolate(points: &[(Rat, GaussRat)]) -> YPoly {
    let n = points.len();
    assert!(n > 0, "need at least one interpolation point");
    // Divided differences.
    let mut table: Vec<GaussRat> = points.iter().map(|(_, v)| v.clone()).collect();
    let xs: Vec<GaussRat> = points
        .iter()
        .map(|(x, _)| GaussRat::from_rat(x.clone()))
        .collect();
    let mut coeffs_newton = vec![table[0].clone()];
    for level in 1..n {
        for i in 0..n - level {
            let num = &table[i + 1] - &table[i];
            let den = &xs[i + level] - &xs[i];
            table[i] = &num / &den;
        }
        coeffs_newton.push(table[0].clone());
    }
    // Expand Newton form into monomial coefficients.
    let mut poly = YPoly::zero();
    let mut basis = YPoly::constant(GaussRat::one());
    for (level, c) in coeffs_newton.iter().enumerate() {
        poly = poly.add(&basis.scale(c));
        if level + 1 < n {
            let factor = YPoly::linear(-&xs[level], GaussRat::one());
            basis = basis.mul(&factor);
        }
    }
    poly
}

/// Exact determinant of a square matrix of polynomials, by evaluation at
/// 0, 1, …, D and interpolation, where D bounds the determinant degree.
pub fn poly_det(entries: &[Vec<YPoly>]) -> YPoly {
    let n = entries.len();
    if n == 0 {
        return YPoly::constant(GaussRat::one());
    }
    for row in entries {
        assert_eq!(row.len(), n, "poly_det needs a square matrix");
    }
    // Degree bound: sum over rows of the max entry degree.
    let degree_bound: usize = entries
        .iter()
        .map(|row| row.iter().map(YPoly::degree).max().unwrap_or(0))
        .sum();
    let mut points = Vec::with_capacity(degree_bound + 1);
    for j in 0..=degree_bound {
        let y = Rat::from_int(j as i64);
        let m = crate::exact::ExactMatrix::from_fn(n, n, |r, c| entries[r][c].eval(&y));
        points.push((y, m.det()));
    }
    interpolate(&points)
}
