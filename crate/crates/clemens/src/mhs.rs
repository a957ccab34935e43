//! Mixed Hodge structures and their canonical bigrading.
//!
//! A mixed Hodge structure on H is a decreasing Hodge filtration F• of H ⊗ ℂ
//! together with an increasing weight filtration W• defined over ℚ, such that
//! F• induces a pure Hodge structure of weight k on each graded piece
//! Gr^W_k = W_k / W_{k−1}. The splitting operation computes the bigrading
//!
//!   I^{p,q} = F^p ∩ W_{p+q} ∩ (conj(F^q) ∩ W_{p+q} + Σ_{j≥2} conj(F^{q−j+1}) ∩ W_{p+q−j})
//!
//! which satisfies W_k = ⊕_{p+q≤k} I^{p,q} and F^r = ⊕_{p≥r} I^{p,q}.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactMatrix, Subspace};

#[derive(Debug, Error)]
pub enum MhsError {
    #[error("malformed structure: {0}")]
    Shape(String),
    #[error("operation requires a valid mixed Hodge structure; first violation: {0}")]
    Invalid(String),
    #[error("splitting failed to satisfy the direct-sum identities: {0}")]
    SplittingInconsistent(String),
}

/// A named failed check with a human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl Violation {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

/// Mixed Hodge structure in coordinates relative to a distinguished rational
/// basis (conjugation is entry-wise in these coordinates).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MhsRepr", into = "MhsRepr")]
pub struct MixedHodgeStructure {
    dim: usize,
    weight_min: i32,
    weight_max: i32,
    hodge_min: i32,
    hodge_max: i32,
    /// F^{hodge_min}, …, F^{hodge_max} (decreasing).
    hodge: Vec<Subspace>,
    /// W_{weight_min}, …, W_{weight_max} (increasing).
    weight: Vec<Subspace>,
}

/// Instance-file form: filtrations as lists of basis matrices. Generating
/// sets are accepted and canonicalized on load.
#[derive(Serialize, Deserialize)]
struct MhsRepr {
    dim: usize,
    weight_range: (i32, i32),
    hodge_range: (i32, i32),
    hodge_filtration: Vec<ExactMatrix>,
    weight_filtration: Vec<ExactMatrix>,
}

impl From<MixedHodgeStructure> for MhsRepr {
    fn from(m: MixedHodgeStructure) -> Self {
        MhsRepr {
            dim: m.dim,
            weight_range: (m.weight_min, m.weight_max),
            hodge_range: (m.hodge_min, m.hodge_max),
            hodge_filtration: m.hodge.iter().map(|s| s.basis().clone()).collect(),
            weight_filtration: m.weight.iter().map(|s| s.basis().clone()).collect(),
        }
    }
}

impl TryFrom<MhsRepr> for MixedHodgeStructure {
    type Error = MhsError;

    fn try_from(r: MhsRepr) -> Result<Self, MhsError> {
        let hodge = r
            .hodge_filtration
            .iter()
            .map(|m| {
                if m.rows() == 0 {
                    Subspace::zero(r.dim)
                } else if m.cols() != r.dim {
                    Subspace::zero(0) // caught by the shape check below
                } else {
                    Subspace::from_generators(r.dim, m)
                }
            })
            .collect();
        let weight = r
            .weight_filtration
            .iter()
            .map(|m| {
                if m.rows() == 0 {
                    Subspace::zero(r.dim)
                } else if m.cols() != r.dim {
                    Subspace::zero(0)
                } else {
                    Subspace::from_generators(r.dim, m)
                }
            })
            .collect();
        MixedHodgeStructure::new(r.dim, r.weight_range, r.hodge_range, hodge, weight)
    }
}

impl MixedHodgeStructure {
    pub fn new(
        dim: usize,
        weight_range: (i32, i32),
        hodge_range: (i32, i32),
        hodge: Vec<Subspace>,
        weight: Vec<Subspace>,
    ) -> Result<Self, MhsError> {
        let (weight_min, weight_max) = weight_range;
        let (hodge_min, hodge_max) = hodge_range;
        if weight_min > weight_max || hodge_min > hodge_max {
            return Err(MhsError::Shape("empty filtration range".into()));
        }
        let expect_w = (weight_max - weight_min + 1) as usize;
        let expect_f = (hodge_max - hodge_min + 1) as usize;
        if weight.len() != expect_w {
            return Err(MhsError::Shape(format!(
                "expected {expect_w} weight subspaces, got {}",
                weight.len()
            )));
        }
        if hodge.len() != expect_f {
            return Err(MhsError::Shape(format!(
                "expected {expect_f} Hodge subspaces, got {}",
                hodge.len()
            )));
        }
        for s in hodge.iter().chain(weight.iter()) {
            if s.ambient_dim() != dim {
                return Err(MhsError::Shape(format!(
                    "subspace ambient dimension {} does not match dim {dim}",
                    s.ambient_dim()
                )));
            }
        }
        Ok(MixedHodgeStructure {
            dim,
            weight_min,
            weight_max,
            hodge_min,
            hodge_max,
            hodge,
            weight,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight_range(&self) -> (i32, i32) {
        (self.weight_min, self.weight_max)
    }

    pub fn hodge_range(&self) -> (i32, i32) {
        (self.hodge_min, self.hodge_max)
    }

    /// F^p with the standard clamping: H below the declared range, 0 above.
    pub fn f(&self, p: i32) -> Subspace {
        if p < self.hodge_min {
            Subspace::full(self.dim)
        } else if p > self.hodge_max {
            Subspace::zero(self.dim)
        } else {
            self.hodge[(p - self.hodge_min) as usize].clone()
        }
    }

    /// W_k with the standard clamping: 0 below the declared range, H above.
    pub fn w(&self, k: i32) -> Subspace {
        if k < self.weight_min {
            Subspace::zero(self.dim)
        } else if k > self.weight_max {
            Subspace::full(self.dim)
        } else {
            self.weight[(k - self.weight_min) as usize].clone()
        }
    }

    /// All invariant checks. Returns one entry per failed condition; an
    /// empty list means the data is a mixed Hodge structure.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        if self.f(self.hodge_min).dim() != self.dim {
            out.push(Violation::new(
                "hodge_filtration_starts_full",
                format!(
                    "F^{} has dimension {}, expected the full space of dimension {}",
                    self.hodge_min,
                    self.f(self.hodge_min).dim(),
                    self.dim
                ),
            ));
        }
        for p in self.hodge_min..self.hodge_max {
            if !self.f(p + 1).is_subspace_of(&self.f(p)) {
                out.push(Violation::new(
                    "hodge_filtration_decreasing",
                    format!("F^{} is not contained in F^{}", p + 1, p),
                ));
            }
        }
        if self.w(self.weight_max).dim() != self.dim {
            out.push(Violation::new(
                "weight_filtration_exhausts",
                format!(
                    "W_{} has dimension {}, expected {}",
                    self.weight_max,
                    self.w(self.weight_max).dim(),
                    self.dim
                ),
            ));
        }
        for k in self.weight_min..self.weight_max {
            if !self.w(k).is_subspace_of(&self.w(k + 1)) {
                out.push(Violation::new(
                    "weight_filtration_increasing",
                    format!("W_{} is not contained in W_{}", k, k + 1),
                ));
            }
        }
        for k in self.weight_min..=self.weight_max {
            if self.w(k).conj() != self.w(k) {
                out.push(Violation::new(
                    "weight_defined_over_Q",
                    format!("W_{k} is not conjugation-stable"),
                ));
            }
        }
        if !out.is_empty() {
            // Purity is only meaningful once the filtration shapes hold.
            return out;
        }

        for k in self.weight_min..=self.weight_max {
            for p in self.hodge_min..=self.hodge_max + 1 {
                let q = k - p + 1;
                let fp = self.induced_f(p, k);
                let fq_bar = self.induced_f(q, k).conj();
                let meet = fp.intersect(&fq_bar).expect("same ambient");
                let join = fp.sum(&fq_bar).expect("same ambient");
                let wk = self.w(k);
                let wk1 = self.w(k - 1);
                if meet != wk1 || join != wk {
                    out.push(Violation::new(
                        "graded_piece_not_pure",
                        format!(
                            "Gr^W_{k} is not pure of weight {k}: at p = {p} (q = {q}) \
                             got dim(F∩F̄) = {} over W_{} of dim {}, dim(F+F̄) = {} vs dim W_{k} = {}",
                            meet.dim(),
                            k - 1,
                            wk1.dim(),
                            join.dim(),
                            wk.dim()
                        ),
                    ));
                }
            }
        }
        out
    }

    /// (F^p ∩ W_k) + W_{k−1}: the subspace of W_k representing the induced
    /// filtration on Gr^W_k without passing to quotient coordinates.
    fn induced_f(&self, p: i32, k: i32) -> Subspace {
        self.f(p)
            .intersect(&self.w(k))
            .expect("same ambient")
            .sum(&self.w(k - 1))
            .expect("same ambient")
    }

    /// The Deligne splitting, computed literally from the defining formula.
    /// Requires a valid structure; the direct-sum identities of the result
    /// are re-verified before returning.
    pub fn deligne_splitting(&self) -> Result<DeligneSplitting, MhsError> {
        let violations = self.validate();
        if let Some(v) = violations.first() {
            return Err(MhsError::Invalid(v.to_string()));
        }
        let mut pieces = BTreeMap::new();
        for p in self.hodge_min..=self.hodge_max {
            for q in self.hodge_min..=self.hodge_max {
                let k = p + q;
                if k < self.weight_min || k > self.weight_max {
                    continue;
                }
                let piece = self.splitting_piece(p, q);
                if !piece.is_zero() {
                    pieces.insert((p, q), piece);
                }
            }
        }
        let splitting = DeligneSplitting {
            dim: self.dim,
            pieces,
        };
        splitting.verify_direct_sums(self)?;
        Ok(splitting)
    }

    fn splitting_piece(&self, p: i32, q: i32) -> Subspace {
        let k = p + q;
        // conj(F^q) ∩ W_k + Σ_{j ≥ 2} conj(F^{q−j+1}) ∩ W_{k−j}; the sum stops
        // as soon as the weight index drops below the declared range.
        let mut correction = self.f(q).conj().intersect(&self.w(k)).expect("same ambient");
        let mut j = 2;
        while k - j >= self.weight_min {
            let term = self
                .f(q - j + 1)
                .conj()
                .intersect(&self.w(k - j))
                .expect("same ambient");
            correction = correction.sum(&term).expect("same ambient");
            j += 1;
        }
        self.f(p)
            .intersect(&self.w(k))
            .expect("same ambient")
            .intersect(&correction)
            .expect("same ambient")
    }

    /// Hodge numbers: dimensions of the splitting pieces.
    pub fn hodge_numbers(&self) -> Result<BTreeMap<(i32, i32), usize>, MhsError> {
        Ok(self
            .deligne_splitting()?
            .pieces
            .iter()
            .map(|(&pq, s)| (pq, s.dim()))
            .collect())
    }

    /// The pure weight-k structure on Gr^W_k = W_k / W_{k−1}, realized on a
    /// chosen complement of W_{k−1} inside W_k.
    pub fn graded_piece(&self, k: i32) -> Result<GradedPiece, MhsError> {
        let violations = self.validate();
        if let Some(v) = violations.first() {
            return Err(MhsError::Invalid(v.to_string()));
        }
        let wk = self.w(k);
        let wk1 = self.w(k - 1);
        let space = wk1.complement_in(&wk).expect("nested weight subspaces");
        let mut induced = Vec::new();
        for p in self.hodge_min..=self.hodge_max {
            let rep = self.induced_f(p, k).intersect(&space).expect("same ambient");
            induced.push((p, rep));
        }
        Ok(GradedPiece { weight: k, space, induced })
    }
}

/// The bigrading I^{p,q}; only nonzero pieces are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeligneSplitting {
    dim: usize,
    pieces: BTreeMap<(i32, i32), Subspace>,
}

impl DeligneSplitting {
    pub fn piece(&self, p: i32, q: i32) -> Subspace {
        self.pieces
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.dim))
    }

    pub fn pieces(&self) -> &BTreeMap<(i32, i32), Subspace> {
        &self.pieces
    }

    pub fn dims(&self) -> BTreeMap<(i32, i32), usize> {
        self.pieces.iter().map(|(&pq, s)| (pq, s.dim())).collect()
    }

    /// Both identities of the splitting theorem, checked exactly:
    /// W_k = ⊕_{p+q≤k} I^{p,q} and F^r = ⊕_{p≥r} I^{p,q}.
    fn verify_direct_sums(&self, m: &MixedHodgeStructure) -> Result<(), MhsError> {
        let (wmin, wmax) = m.weight_range();
        for k in wmin..=wmax {
            let (span, total) = self.span_where(|(p, q)| p + q <= k);
            if span != m.w(k) || total != m.w(k).dim() {
                return Err(MhsError::SplittingInconsistent(format!(
                    "W_{k} is not the direct sum of pieces with p+q ≤ {k}"
                )));
            }
        }
        let (fmin, fmax) = m.hodge_range();
        for r in fmin..=fmax {
            let (span, total) = self.span_where(|(p, _)| p >= r);
            if span != m.f(r) || total != m.f(r).dim() {
                return Err(MhsError::SplittingInconsistent(format!(
                    "F^{r} is not the direct sum of pieces with p ≥ {r}"
                )));
            }
        }
        Ok(())
    }

    /// Span of the selected pieces together with the sum of their dimensions
    /// (equality of the two dimension counts certifies directness).
    fn span_where(&self, select: impl Fn((i32, i32)) -> bool) -> (Subspace, usize) {
        let mut span = Subspace::zero(self.dim);
        let mut total = 0;
        for (&pq, s) in &self.pieces {
            if select(pq) {
                span = span.sum(s).expect("same ambient");
                total += s.dim();
            }
        }
        (span, total)
    }
}

/// Pure Hodge structure on a graded quotient, in chosen coordinates.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub weight: i32,
    /// Complement of W_{k−1} in W_k representing the quotient.
    pub space: Subspace,
    /// Induced Hodge filtration, as subspaces of `space`.
    pub induced: Vec<(i32, Subspace)>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// h^{p, k−p} = dim F^p(Gr) − dim F^{p+1}(Gr).
    pub fn hodge_numbers(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for window in self.induced.windows(2) {
            let (p, ref fp) = window[0];
            let (_, ref fp1) = window[1];
            let h = fp.dim() - fp1.dim();
            if h > 0 {
                out.insert((p, self.weight - p), h);
            }
        }
        if let Some((p, fp)) = self.induced.last() {
            if fp.dim() > 0 {
                out.insert((*p, self.weight - *p), fp.dim());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{GaussRat, Subspace};

    /// Pure weight-3 structure of type (1,1,1,1) on ℂ⁴:
    /// ω = g0 + i g1 spans H^{3,0}, η = g2 − i g3 spans H^{2,1}.
    fn pure_weight3() -> MixedHodgeStructure {
        let omega = vec![
            GaussRat::one(),
            GaussRat::i(),
            GaussRat::zero(),
            GaussRat::zero(),
        ];
        let eta = vec![
            GaussRat::zero(),
            GaussRat::zero(),
            GaussRat::one(),
            -GaussRat::i(),
        ];
        let omega_bar = crate::exact::matrix::vec_conj(&omega);
        let eta_bar = crate::exact::matrix::vec_conj(&eta);
        let f3 = Subspace::from_vectors(4, &[omega.clone()]);
        let f2 = Subspace::from_vectors(4, &[omega.clone(), eta.clone()]);
        let f1 = Subspace::from_vectors(4, &[omega, eta, eta_bar]);
        let f0 = Subspace::full(4);
        let _ = omega_bar;
        MixedHodgeStructure::new(4, (3, 3), (0, 3), vec![f0, f1, f2, f3], vec![Subspace::full(4)])
            .unwrap()
    }

    #[test]
    fn pure_structure_validates_and_splits() {
        let m = pure_weight3();
        assert!(m.validate().is_empty());
        let s = m.deligne_splitting().unwrap();
        let dims = s.dims();
        assert_eq!(dims.get(&(3, 0)), Some(&1));
        assert_eq!(dims.get(&(2, 1)), Some(&1));
        assert_eq!(dims.get(&(1, 2)), Some(&1));
        assert_eq!(dims.get(&(0, 3)), Some(&1));
        // Pure case: I^{p,q} = F^p ∩ conj(F^q).
        for (&(p, q), piece) in s.pieces() {
            let expect = m.f(p).intersect(&m.f(q).conj()).unwrap();
            assert_eq!(piece, &expect);
        }
    }

    #[test]
    fn perturbed_f2_breaks_purity() {
        let m = pure_weight3();
        // Replace F² by a span containing the real vector g2: then
        // F² ∩ conj(F²) ≠ 0 inside the weight-3 graded piece.
        let omega = m.f(3).basis_vectors().remove(0);
        let g2 = crate::exact::matrix::unit_vector(4, 2);
        let bad_f2 = Subspace::from_vectors(4, &[omega, g2]);
        let m2 = MixedHodgeStructure::new(
            4,
            (3, 3),
            (0, 3),
            vec![m.f(0), m.f(1), bad_f2, m.f(3)],
            vec![Subspace::full(4)],
        )
        .unwrap();
        let violations = m2.validate();
        assert!(violations.iter().any(|v| v.check == "graded_piece_not_pure"));
    }

    #[test]
    fn graded_piece_of_pure_structure() {
        let m = pure_weight3();
        let gr = m.graded_piece(3).unwrap();
        assert_eq!(gr.dim(), 4);
        let hn = gr.hodge_numbers();
        assert_eq!(hn.get(&(3, 0)), Some(&1));
        assert_eq!(hn.get(&(2, 1)), Some(&1));
    }

    #[test]
    fn splitting_requires_validity() {
        let m = pure_weight3();
        let bad = MixedHodgeStructure::new(
            4,
            (3, 3),
            (0, 3),
            vec![m.f(0), m.f(2), m.f(1), m.f(3)], // F¹ ⊄ F² order broken
            vec![Subspace::full(4)],
        )
        .unwrap();
        assert!(matches!(bad.deligne_splitting(), Err(MhsError::Invalid(_))));
    }
}
