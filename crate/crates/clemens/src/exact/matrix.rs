//! Dense exact matrices over ℚ(i) and the handful of vector helpers the
//! rest of the crate leans on. Row-major, no sparsity: ambient dimensions
//! in this problem stay below ~50.
//!
//! Row reduction and determinants clear denominators row-wise and run
//! fraction-free (Bareiss) elimination over the Gaussian integers: naive
//! rational elimination compounds denominators geometrically, while the
//! Bareiss intermediates stay minors of the scaled matrix.

use serde::{Deserialize, Serialize};

use super::gaussian::GaussRat;
use super::rational::Rat;

/// Gaussian-integer scratch arithmetic for fraction-free elimination.
mod gint {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    use super::{ExactMatrix, GaussRat, Rat};

    pub type Gi = (BigInt, BigInt);

    pub fn is_zero(x: &Gi) -> bool {
        x.0.is_zero() && x.1.is_zero()
    }

    pub fn mul(x: &Gi, y: &Gi) -> Gi {
        (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
    }

    pub fn sub(x: &Gi, y: &Gi) -> Gi {
        (&x.0 - &y.0, &x.1 - &y.1)
    }

    /// x / y, exact by the Bareiss divisibility guarantee.
    pub fn div(x: &Gi, y: &Gi) -> Gi {
        if y.1.is_zero() {
            return (&x.0 / &y.0, &x.1 / &y.0);
        }
        let norm = &y.0 * &y.0 + &y.1 * &y.1;
        let re = &x.0 * &y.0 + &x.1 * &y.1;
        let im = &x.1 * &y.0 - &x.0 * &y.1;
        (re / &norm, im / &norm)
    }

    pub fn one() -> Gi {
        (BigInt::one(), BigInt::zero())
    }

    pub fn to_gauss(x: &Gi) -> GaussRat {
        GaussRat::new(
            Rat::from_big(x.0.clone(), BigInt::one()),
            Rat::from_big(x.1.clone(), BigInt::one()),
        )
    }

    /// Clear denominators row by row; returns the integer matrix and the
    /// product of the row scales (det changes by that factor, row spaces
    /// do not change at all).
    pub fn clear_rows(m: &ExactMatrix) -> (Vec<Vec<Gi>>, BigInt) {
        let mut denom_product = BigInt::one();
        let rows = (0..m.rows())
            .map(|r| {
                let mut l = BigInt::one();
                for c in 0..m.cols() {
                    let e = m.at(r, c);
                    l = l.lcm(e.re.denom());
                    l = l.lcm(e.im.denom());
                }
                let row: Vec<Gi> = (0..m.cols())
                    .map(|c| {
                        let e = m.at(r, c);
                        (
                            e.re.numer() * (&l / e.re.denom()),
                            e.im.numer() * (&l / e.im.denom()),
                        )
                    })
                    .collect();
                denom_product *= &l;
                row
            })
            .collect();
        (rows, denom_product)
    }
}

/// Row-major matrix of [`GaussRat`] entries with exact arithmetic.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<GaussRat>>", into = "Vec<Vec<GaussRat>>")]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussRat>,
}

impl From<Vec<Vec<GaussRat>>> for ExactMatrix {
    fn from(rows: Vec<Vec<GaussRat>>) -> Self {
        ExactMatrix::from_rows(rows)
    }
}

impl From<ExactMatrix> for Vec<Vec<GaussRat>> {
    fn from(m: ExactMatrix) -> Self {
        (0..m.rows).map(|r| m.row(r).to_vec()).collect()
    }
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| format!("{e}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![GaussRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, GaussRat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussRat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for row in &rows {
            assert_eq!(row.len(), ncols, "ragged rows");
        }
        ExactMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<GaussRat>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        ExactMatrix::from_fn(nrows, ncols, |r, c| cols[c][r].clone())
    }

    /// Integer-entry convenience constructor for tests and generators.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| GaussRat::from_int(n)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &GaussRat {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRat) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GaussRat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<GaussRat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<GaussRat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussRat::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// All entries real (the matrix is defined over ℚ in the rational basis).
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(GaussRat::is_real)
    }

    pub fn is_antisymmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if *self.at(r, c) != -self.at(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_hermitian(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if *self.at(r, c) != self.at(c, r).conj() {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    /// Entry-wise conjugation.
    pub fn conj(&self) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(GaussRat::conj).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().conj()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &GaussRat) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        ExactMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = GaussRat::zero();
            for k in 0..self.cols {
                acc += &(self.at(r, k) * rhs.at(k, c));
            }
            acc
        })
    }

    /// Matrix applied to a column vector.
    pub fn apply(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = GaussRat::zero();
                for c in 0..self.cols {
                    acc += &(self.at(r, c) * &v[c]);
                }
                acc
            })
            .collect()
    }

    pub fn vstack(&self, below: &Self) -> Self {
        assert_eq!(self.cols, below.cols, "shape mismatch");
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        ExactMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn hstack(&self, right: &Self) -> Self {
        assert_eq!(self.rows, right.rows, "shape mismatch");
        ExactMatrix::from_fn(self.rows, self.cols + right.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                right.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        ExactMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self.at(rows.start + r, cols.start + c).clone()
        })
    }

    /// Leading principal k×k block.
    pub fn leading(&self, k: usize) -> Self {
        self.submatrix(0..k, 0..k)
    }

    /// Reduced row-echelon form. Row space is preserved; the result is the
    /// unique canonical representative, so equal row spaces give equal RREFs.
    pub fn rref(&self) -> Self {
        self.rref_with_pivots().0
    }

    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let (rows, cols) = (self.rows, self.cols);
        if rows == 0 || cols == 0 {
            return (self.clone(), Vec::new());
        }

        // Fraction-free forward elimination over ℤ[i].
        let (mut a, _) = gint::clear_rows(self);
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev = gint::one();
        let mut r = 0usize;
        for c in 0..cols {
            if r >= rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !gint::is_zero(&a[i][c])) else {
                continue;
            };
            a.swap(r, pr);
            let pivot_row = a[r].clone();
            let pivot = pivot_row[c].clone();
            for row in a.iter_mut().skip(r + 1) {
                let lead = row[c].clone();
                for j in c + 1..cols {
                    let num = gint::sub(&gint::mul(&pivot, &row[j]), &gint::mul(&lead, &pivot_row[j]));
                    row[j] = gint::div(&num, &prev);
                }
                row[c] = (0.into(), 0.into());
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }

        // Rational Jordan phase on the echelon rows: normalize pivots to 1,
        // then eliminate upwards. Entry sizes stay minor-bounded.
        let rank = pivots.len();
        let mut out_rows: Vec<Vec<GaussRat>> = Vec::with_capacity(rank);
        for i in 0..rank {
            let pivot = gint::to_gauss(&a[i][pivots[i]]);
            let inv = pivot.recip();
            out_rows.push(a[i].iter().map(|e| &gint::to_gauss(e) * &inv).collect());
        }
        for i in (1..rank).rev() {
            let pc = pivots[i];
            let (upper, lower) = out_rows.split_at_mut(i);
            let row_i = &lower[0];
            for row_k in upper.iter_mut() {
                if row_k[pc].is_zero() {
                    continue;
                }
                let factor = row_k[pc].clone();
                for j in pc..cols {
                    row_k[j] = &row_k[j] - &(&factor * &row_i[j]);
                }
            }
        }

        let mut m = ExactMatrix::zero(rows, cols);
        for (i, row) in out_rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Exact determinant, by fraction-free (Bareiss) elimination over ℤ[i]
    /// after clearing denominators row-wise.
    pub fn det(&self) -> GaussRat {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return GaussRat::one();
        }
        let (mut a, denom_product) = gint::clear_rows(self);
        let mut negate = false;
        let mut prev = gint::one();
        for k in 0..n - 1 {
            if gint::is_zero(&a[k][k]) {
                let Some(p) = (k + 1..n).find(|&r| !gint::is_zero(&a[r][k])) else {
                    return GaussRat::zero();
                };
                a.swap(k, p);
                negate = !negate;
            }
            let pivot_row = a[k].clone();
            let pivot = pivot_row[k].clone();
            for row in a.iter_mut().skip(k + 1) {
                let lead = row[k].clone();
                for j in k + 1..n {
                    let num = gint::sub(&gint::mul(&pivot, &row[j]), &gint::mul(&lead, &pivot_row[j]));
                    row[j] = gint::div(&num, &prev);
                }
                row[k] = (0.into(), 0.into());
            }
            prev = pivot;
        }
        let d = a[n - 1][n - 1].clone();
        let value = GaussRat::new(
            Rat::from_big(d.0, denom_product.clone()),
            Rat::from_big(d.1, denom_product),
        );
        if negate {
            -value
        } else {
            value
        }
    }

    /// Basis of the right kernel {x : M·x = 0}, returned as rows.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref_with_pivots();
        let n = self.cols;
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![GaussRat::zero(); n];
            v[fc] = GaussRat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.at(row, fc);
            }
            basis.push(v);
        }
        if basis.is_empty() {
            ExactMatrix::zero(0, n)
        } else {
            ExactMatrix::from_rows(basis)
        }
    }

    /// Exact inverse, if the matrix is square and nonsingular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&ExactMatrix::identity(n));
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    /// One solution x of M·x = b, if any.
    pub fn solve(&self, b: &[GaussRat]) -> Option<Vec<GaussRat>> {
        assert_eq!(self.rows, b.len(), "shape mismatch");
        let rhs = ExactMatrix::from_cols(&[b.to_vec()]);
        let aug = self.hstack(&rhs);
        let (r, pivots) = aug.rref_with_pivots();
        // Inconsistent iff some pivot sits in the appended column.
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![GaussRat::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(row, self.cols).clone();
        }
        Some(x)
    }

}

/// x + y
pub fn vec_add(x: &[GaussRat], y: &[GaussRat]) -> Vec<GaussRat> {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// x - y
pub fn vec_sub(x: &[GaussRat], y: &[GaussRat]) -> Vec<GaussRat> {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(x: &[GaussRat], k: &GaussRat) -> Vec<GaussRat> {
    x.iter().map(|a| a * k).collect()
}

pub fn vec_conj(x: &[GaussRat]) -> Vec<GaussRat> {
    x.iter().map(GaussRat::conj).collect()
}

pub fn vec_is_zero(x: &[GaussRat]) -> bool {
    x.iter().all(GaussRat::is_zero)
}

pub fn vec_is_real(x: &[GaussRat]) -> bool {
    x.iter().all(GaussRat::is_real)
}

/// The bilinear value xᵀ·G·y.
pub fn bilinear(gram: &ExactMatrix, x: &[GaussRat], y: &[GaussRat]) -> GaussRat {
    let gy = gram.apply(y);
    let mut acc = GaussRat::zero();
    for (a, b) in x.iter().zip(&gy) {
        acc += &(a * b);
    }
    acc
}

pub fn unit_vector(n: usize, i: usize) -> Vec<GaussRat> {
    let mut v = vec![GaussRat::zero(); n];
    v[i] = GaussRat::one();
    v
}

/// ℓ1 bound Σ(|Re|+|Im|) of a vector, used by majorization estimates.
pub fn vec_l1(x: &[GaussRat]) -> Rat {
    let mut acc = Rat::zero();
    for e in x {
        acc += &e.l1();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_identity_fixed() {
        let id = ExactMatrix::identity(3);
        assert_eq!(id.rref(), id);
    }

    #[test]
    fn rref_scales_rows() {
        let m = ExactMatrix::from_ints(&[&[2, 0], &[0, 4]]);
        assert_eq!(m.rref(), ExactMatrix::identity(2));
    }

    #[test]
    fn det_and_rank() {
        let m = ExactMatrix::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det(), GaussRat::from_int(-2));
        assert_eq!(m.rank(), 2);
        let singular = ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), GaussRat::zero());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn kernel_annihilates() {
        let m = ExactMatrix::from_ints(&[&[1, 2, 3], &[4, 5, 6]]);
        let k = m.kernel();
        assert_eq!(k.rows(), 1);
        for r in 0..k.rows() {
            assert!(vec_is_zero(&m.apply(k.row(r))));
        }
    }

    #[test]
    fn solve_consistency() {
        let m = ExactMatrix::from_ints(&[&[1, 1], &[1, -1]]);
        let b = vec![GaussRat::from_int(3), GaussRat::from_int(1)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        let inconsistent = ExactMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        let b2 = vec![GaussRat::from_int(1), GaussRat::from_int(3)];
        assert!(inconsistent.solve(&b2).is_none());
    }

    #[test]
    fn rref_of_rank_3_rectangle() {
        // 5×7 with three independent rows and two dependent ones: the RREF
        // has exactly 3 pivot rows, and every original row is a member of
        // the reduced row space (membership by independent linear solve).
        let r0: Vec<GaussRat> = (0..7).map(|j| GaussRat::from_int(j + 1)).collect();
        let r1: Vec<GaussRat> = (0..7).map(|j| GaussRat::from_int((j * j) % 5)).collect();
        let r2: Vec<GaussRat> = (0..7)
            .map(|j| GaussRat::from_parts(1, j + 2, j, 3))
            .collect();
        let r3 = vec_add(&r0, &vec_scale(&r1, &GaussRat::from_int(-2)));
        let r4 = vec_add(&vec_scale(&r2, &GaussRat::from_parts(1, 2, 0, 1)), &r1);
        let m = ExactMatrix::from_rows(vec![r0, r1, r2, r3, r4]);
        let (rref, pivots) = m.rref_with_pivots();
        assert_eq!(pivots.len(), 3);
        let space = crate::exact::Subspace::from_generators(7, &rref);
        for r in 0..m.rows() {
            assert!(space.contains_vec(m.row(r)));
        }
    }

    #[test]
    fn conj_commutes_with_rref() {
        let m = ExactMatrix::from_rows(vec![
            vec![GaussRat::from_parts(1, 1, 2, 1), GaussRat::from_parts(0, 1, -1, 3)],
            vec![GaussRat::from_parts(2, 1, 0, 1), GaussRat::from_parts(1, 2, 1, 1)],
        ]);
        assert_eq!(m.conj().rref(), m.rref().conj());
    }
}
