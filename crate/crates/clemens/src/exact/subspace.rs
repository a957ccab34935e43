//! Subspaces of ℂⁿ in canonical form.
//!
//! A subspace is stored as the reduced row-echelon basis of its row space.
//! RREF is a unique normal form, so subspace equality is plain entry-wise
//! equality of the stored matrices, and every lattice operation below
//! returns a canonical representative.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::gaussian::GaussRat;
use super::matrix::{vec_is_zero, ExactMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("containment violation: first argument is not a subspace of the second")]
    NotContained,
}

/// Linear subspace with canonical RREF basis (rows = basis vectors).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: ExactMatrix,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}) {:?}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

impl Subspace {
    /// Canonical subspace spanned by the given generators (rows).
    pub fn from_generators(ambient: usize, generators: &ExactMatrix) -> Self {
        assert_eq!(generators.cols(), ambient, "generator length mismatch");
        let (rref, pivots) = generators.rref_with_pivots();
        let basis = if pivots.is_empty() {
            ExactMatrix::zero(0, ambient)
        } else {
            rref.submatrix(0..pivots.len(), 0..ambient)
        };
        Subspace { ambient, basis }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<GaussRat>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::from_generators(ambient, &ExactMatrix::from_rows(vectors.to_vec()))
    }

    pub fn span_of(v: &[GaussRat]) -> Self {
        Subspace::from_vectors(v.len(), &[v.to_vec()])
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMatrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMatrix::identity(ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis matrix, rows are basis vectors in RREF.
    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<GaussRat>> {
        self.basis.row_vecs()
    }

    pub fn contains_vec(&self, v: &[GaussRat]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        if vec_is_zero(v) {
            return true;
        }
        // v ∈ row space(B) iff Bᵀ x = v is solvable.
        self.basis.transpose().solve(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && (0..self.basis.rows()).all(|r| other.contains_vec(self.basis.row(r)))
    }

    /// Span of the union.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check_ambient(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        Ok(Subspace::from_generators(
            self.ambient,
            &self.basis.vstack(&other.basis),
        ))
    }

    /// Intersection, computed from the kernel of the stacked coefficient
    /// system [Aᵀ | −Bᵀ]: a kernel element (y, x) satisfies yᵀA = xᵀB.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let a = &self.basis;
        let b = &other.basis;
        let stacked = a.transpose().hstack(&b.transpose().scale(&-GaussRat::one()));
        let kernel = stacked.kernel();
        let mut generators = Vec::new();
        for r in 0..kernel.rows() {
            let yx = kernel.row(r);
            let y = &yx[..a.rows()];
            let mut v = vec![GaussRat::zero(); self.ambient];
            for (coef, row_idx) in y.iter().zip(0..a.rows()) {
                for c in 0..self.ambient {
                    v[c] += &(coef * a.at(row_idx, c));
                }
            }
            generators.push(v);
        }
        Ok(Subspace::from_vectors(self.ambient, &generators))
    }

    /// A complement c of `self` inside `other`: self ⊕ c = other.
    /// Deterministic: rows of `other`'s canonical basis are taken greedily.
    pub fn complement_in(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check_ambient(other)?;
        if !self.is_subspace_of(other) {
            return Err(SubspaceError::NotContained);
        }
        let mut current = self.basis.clone();
        let mut rank = self.dim();
        let mut picked = Vec::new();
        for r in 0..other.basis.rows() {
            let candidate = ExactMatrix::from_rows(vec![other.basis.row(r).to_vec()]);
            let trial = if current.rows() == 0 {
                candidate.clone()
            } else {
                current.vstack(&candidate)
            };
            if trial.rank() > rank {
                rank = trial.rank();
                current = trial;
                picked.push(other.basis.row(r).to_vec());
            }
            if rank == other.dim() {
                break;
            }
        }
        Ok(Subspace::from_vectors(self.ambient, &picked))
    }

    /// Entry-wise conjugation relative to the distinguished rational basis.
    /// The conjugate of an RREF matrix is again RREF, so this stays canonical.
    pub fn conj(&self) -> Subspace {
        Subspace {
            ambient: self.ambient,
            basis: self.basis.conj(),
        }
    }

    /// Defined over ℚ: stable under conjugation.
    pub fn is_real(&self) -> bool {
        self.basis.is_real()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), SubspaceError> {
        if self.ambient != other.ambient {
            Err(SubspaceError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            })
        } else {
            Ok(())
        }
    }
}

/// Direct-sum test: a ∩ b = 0 and a + b = c.
pub fn is_direct_sum(a: &Subspace, b: &Subspace, c: &Subspace) -> bool {
    match (a.intersect(b), a.sum(b)) {
        (Ok(int), Ok(sum)) => int.is_zero() && sum == *c,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span_ints(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_generators(ambient, &ExactMatrix::from_ints(rows))
    }

    #[test]
    fn canonical_equality() {
        let a = span_ints(3, &[&[1, 1, 0], &[0, 1, 1]]);
        let b = span_ints(3, &[&[1, 0, -1], &[2, 3, 1]]);
        assert_eq!(a, b);
    }

    #[test]
    fn intersect_plane_with_line() {
        let plane = span_ints(2, &[&[1, 0], &[0, 1]]);
        let line = span_ints(2, &[&[1, 1]]);
        assert_eq!(plane.intersect(&line).unwrap(), line);
    }

    #[test]
    fn ambient_mismatch_reported() {
        let a = span_ints(2, &[&[1, 0]]);
        let b = span_ints(3, &[&[1, 0, 0]]);
        assert_eq!(
            a.intersect(&b),
            Err(SubspaceError::AmbientMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn complement_of_full_is_zero() {
        let v = span_ints(3, &[&[1, 2, 3], &[0, 1, 0], &[0, 0, 5]]);
        let c = v.complement_in(&v).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn complement_direct_sum() {
        let a = span_ints(4, &[&[1, 0, 2, 0]]);
        let b = span_ints(4, &[&[1, 0, 2, 0], &[0, 1, 0, 0], &[0, 0, 1, 1]]);
        let c = a.complement_in(&b).unwrap();
        assert!(is_direct_sum(&a, &c, &b));
    }

    #[test]
    fn complement_requires_containment() {
        let a = span_ints(2, &[&[1, 1]]);
        let b = span_ints(2, &[&[1, 0]]);
        assert_eq!(a.complement_in(&b), Err(SubspaceError::NotContained));
    }

    #[test]
    fn conjugation_involution() {
        let m = ExactMatrix::from_rows(vec![vec![
            GaussRat::from_parts(1, 1, 0, 1),
            GaussRat::from_parts(0, 1, 1, 2),
        ]]);
        let s = Subspace::from_generators(2, &m);
        assert_eq!(s.conj().conj(), s);
    }
}
