//! The limiting mixed Hodge structure of a conifold degeneration.
//!
//! The package is a mixed Hodge structure with weights 2..4 and Hodge degrees
//! 0..3 on a space of dimension 2h+4, together with the rational alternating
//! intersection pairing and the nilpotent monodromy logarithm N with N² = 0.
//! The validator checks the defining clauses one by one; the basis machinery
//! produces the adapted symplectic basis {e_0..e_{h+1}, f_0..f_{h+1}}, the F²
//! basis {u_0..u_{h+1}}, and the h+1-dimensional basis of F² ∩ conj(F¹).

mod basis;
mod gen;

pub use basis::{adapted_basis, f2_basis, h21_limit_basis, AdaptedBasis, F2Basis, H21Basis};
pub use gen::{gen_indefinite_instance, gen_instance};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{matrix, ExactMatrix, GaussRat, Rat, Subspace};
use crate::mhs::{DeligneSplitting, MhsError, MixedHodgeStructure, Violation};

#[derive(Debug, Error)]
pub enum LmhsError {
    #[error("malformed instance: {0}")]
    Shape(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("the pairing restricted to V is degenerate")]
    DegenerateRestriction,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Mhs(#[from] MhsError),
}

/// Which of the two positions F²_lim can be in relative to its conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseFlag {
    /// F² ∩ conj(F²) = 0.
    I,
    /// F² ∩ conj(F²) = I^{2,2}, a real line.
    II,
}

impl std::fmt::Display for CaseFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseFlag::I => write!(f, "I"),
            CaseFlag::II => write!(f, "II"),
        }
    }
}

impl std::str::FromStr for CaseFlag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "I" | "i" | "1" => Ok(CaseFlag::I),
            "II" | "ii" | "2" => Ok(CaseFlag::II),
            other => Err(format!("unknown case flag {other:?} (expected I or II)")),
        }
    }
}

/// Rational alternating intersection form on the 2h+4-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionForm {
    gram: ExactMatrix,
}

impl IntersectionForm {
    pub fn new(gram: ExactMatrix) -> Result<Self, LmhsError> {
        if !gram.is_square() {
            return Err(LmhsError::Shape("pairing Gram matrix must be square".into()));
        }
        Ok(IntersectionForm { gram })
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// ⟨x, y⟩ = xᵀ G y.
    pub fn pair(&self, x: &[GaussRat], y: &[GaussRat]) -> GaussRat {
        matrix::bilinear(&self.gram, x, y)
    }

    /// The orthogonal complement of a subspace.
    pub fn perp(&self, s: &Subspace) -> Subspace {
        if s.is_zero() {
            return Subspace::full(self.dim());
        }
        // x ⊥ s iff (B·G)·x = 0 for the basis rows B of s.
        let constraints = s.basis().mul(&self.gram);
        Subspace::from_generators(self.dim(), &constraints.kernel())
    }

    /// ⟨a, b⟩ = 0 for all a ∈ `a`, b ∈ `b`.
    pub fn orthogonal(&self, a: &Subspace, b: &Subspace) -> bool {
        for x in a.basis_vectors() {
            for y in b.basis_vectors() {
                if !self.pair(&x, &y).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Limiting mixed Hodge structure with pairing and nilpotent operator.
///
/// The constant k in N(f_{h+1}) = k·e_{h+1} is not stored: it is derived
/// (together with the adapted basis) from the instance data, and only exists
/// for valid instances. See [`LimitingMHS::k_const`].
#[derive(Debug)]
pub struct LimitingMHS {
    mhs: MixedHodgeStructure,
    n_op: ExactMatrix,
    pairing: IntersectionForm,
    h: usize,
    /// Deligne splitting, computed once on demand.
    splitting_cache: std::sync::OnceLock<DeligneSplitting>,
    /// Validation verdicts, computed once on demand.
    validity_cache: std::sync::OnceLock<Vec<Violation>>,
}

impl Clone for LimitingMHS {
    fn clone(&self) -> Self {
        LimitingMHS {
            mhs: self.mhs.clone(),
            n_op: self.n_op.clone(),
            pairing: self.pairing.clone(),
            h: self.h,
            splitting_cache: clone_cell(&self.splitting_cache),
            validity_cache: clone_cell(&self.validity_cache),
        }
    }
}

fn clone_cell<T: Clone>(cell: &std::sync::OnceLock<T>) -> std::sync::OnceLock<T> {
    let out = std::sync::OnceLock::new();
    if let Some(v) = cell.get() {
        let _ = out.set(v.clone());
    }
    out
}

impl PartialEq for LimitingMHS {
    fn eq(&self, other: &Self) -> bool {
        self.mhs == other.mhs
            && self.n_op == other.n_op
            && self.pairing == other.pairing
            && self.h == other.h
    }
}

impl Eq for LimitingMHS {}

impl LimitingMHS {
    pub fn new(
        mhs: MixedHodgeStructure,
        n_op: ExactMatrix,
        pairing: IntersectionForm,
        h: usize,
    ) -> Result<Self, LmhsError> {
        let dim = mhs.dim();
        if !n_op.is_square() || n_op.rows() != dim {
            return Err(LmhsError::Shape(format!(
                "N must be {dim}×{dim}, got {}×{}",
                n_op.rows(),
                n_op.cols()
            )));
        }
        if pairing.dim() != dim {
            return Err(LmhsError::Shape(format!(
                "pairing must be {dim}×{dim}, got {}×{}",
                pairing.dim(),
                pairing.dim()
            )));
        }
        Ok(LimitingMHS {
            mhs,
            n_op,
            pairing,
            h,
            splitting_cache: std::sync::OnceLock::new(),
            validity_cache: std::sync::OnceLock::new(),
        })
    }

    pub fn mhs(&self) -> &MixedHodgeStructure {
        &self.mhs
    }

    pub fn n_op(&self) -> &ExactMatrix {
        &self.n_op
    }

    pub fn pairing(&self) -> &IntersectionForm {
        &self.pairing
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.mhs.dim()
    }

    pub fn f(&self, p: i32) -> Subspace {
        self.mhs.f(p)
    }

    pub fn w(&self, k: i32) -> Subspace {
        self.mhs.w(k)
    }

    /// k from N(f_{h+1}) = k·e_{h+1}, derived through the adapted basis.
    pub fn k_const(&self) -> Result<Rat, LmhsError> {
        Ok(adapted_basis(self)?.k_const)
    }

    /// The Deligne splitting of the underlying structure, memoized.
    pub fn splitting(&self) -> Result<DeligneSplitting, LmhsError> {
        if let Some(s) = self.splitting_cache.get() {
            return Ok(s.clone());
        }
        let s = self.mhs.deligne_splitting()?;
        let _ = self.splitting_cache.set(s.clone());
        Ok(s)
    }

    /// Run every defining clause; empty result means a valid instance.
    /// Memoized: the instance is immutable, so verdicts never change.
    pub fn validate_friedman(&self) -> Vec<Violation> {
        self.validity_cache
            .get_or_init(|| validate_friedman(self))
            .clone()
    }

    pub fn is_valid(&self) -> bool {
        self.validate_friedman().is_empty()
    }

    fn require_valid(&self) -> Result<(), LmhsError> {
        match self.validate_friedman().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(LmhsError::Invalid(v.to_string())),
        }
    }

    /// Case I iff F² ∩ conj(F²) = 0. In case II the intersection is checked
    /// to be the real line I^{2,2}.
    pub fn classify_case(&self) -> Result<CaseFlag, LmhsError> {
        self.require_valid()?;
        let f2 = self.f(2);
        let meet = f2.intersect(&f2.conj()).expect("same ambient");
        if meet.is_zero() {
            return Ok(CaseFlag::I);
        }
        let i22 = self.splitting()?.piece(2, 2);
        if meet != i22 {
            return Err(LmhsError::Internal(
                "F² ∩ conj(F²) differs from the splitting piece I^{2,2}".into(),
            ));
        }
        if meet.conj() != meet {
            return Err(LmhsError::Internal(
                "case II intersection is not conjugation-stable".into(),
            ));
        }
        Ok(CaseFlag::II)
    }

    /// First Hodge–Riemann relations: ⟨F¹, F³⟩ = 0 and ⟨F², F²⟩ = 0, exactly.
    pub fn check_hr1(&self) -> bool {
        let f1 = self.f(1);
        let f2 = self.f(2);
        let f3 = self.f(3);
        self.pairing.orthogonal(&f1, &f3) && self.pairing.orthogonal(&f2, &f2)
    }

    /// √−1·⟨u_0, conj(u_0)⟩ for the canonical generator u_0 of F³ = I^{3,0}.
    /// The value is automatically real; positivity is the H^{3,0} half of the
    /// second Hodge–Riemann relation.
    pub fn h30_value(&self) -> Result<Rat, LmhsError> {
        let f3 = self.f(3);
        if f3.dim() != 1 {
            return Err(LmhsError::Invalid(format!(
                "F³ must be a line, has dimension {}",
                f3.dim()
            )));
        }
        let u0 = f3.basis_vectors().remove(0);
        let val = &GaussRat::i() * &self.pairing.pair(&u0, &matrix::vec_conj(&u0));
        if !val.is_real() {
            return Err(LmhsError::Internal(
                "√−1⟨u₀, conj u₀⟩ is not real; the pairing is not alternating-rational".into(),
            ));
        }
        Ok(val.re)
    }

    pub fn check_h30(&self) -> Result<bool, LmhsError> {
        Ok(self.h30_value()?.is_positive())
    }
}

/// The ordered list of named clauses checked by [`validate_friedman`].
pub const FRIEDMAN_CLAUSES: [&str; 12] = [
    "dim_total",
    "mhs_axioms",
    "weight_dims",
    "hodge_dims",
    "f1_meets_w2_in_w2",
    "f2_meets_w2_trivially",
    "f2_plus_w3_full",
    "f3_inside_w3",
    "pairing_alternating_nondegenerate_rational",
    "w3_is_w2_perp",
    "n_squared_zero_ker_im",
    "n_gr4_to_w2_iso",
];

/// Check the limiting-structure clauses one by one. Violations are data:
/// every failed clause is reported with a witness, and a broken instance
/// never panics.
pub fn validate_friedman(lmhs: &LimitingMHS) -> Vec<Violation> {
    let mut out = Vec::new();
    let h = lmhs.h;
    let dim = lmhs.dim();
    let expect_dim = 2 * h + 4;

    if dim != expect_dim {
        out.push(Violation::new(
            "dim_total",
            format!("dim = {dim}, expected 2h+4 = {expect_dim} for h = {h}"),
        ));
    }

    let mhs_violations = lmhs.mhs.validate();
    if !mhs_violations.is_empty() {
        let summary: Vec<String> = mhs_violations.iter().map(|v| v.to_string()).collect();
        out.push(Violation::new("mhs_axioms", summary.join("; ")));
    }

    if lmhs.mhs.weight_range() != (2, 4) || lmhs.mhs.hodge_range() != (0, 3) {
        out.push(Violation::new(
            "weight_dims",
            format!(
                "expected weights 2..4 and Hodge degrees 0..3, got {:?} and {:?}",
                lmhs.mhs.weight_range(),
                lmhs.mhs.hodge_range()
            ),
        ));
    } else {
        let (w2, w3, w4) = (lmhs.w(2).dim(), lmhs.w(3).dim(), lmhs.w(4).dim());
        if (w2, w3, w4) != (1, 2 * h + 3, 2 * h + 4) {
            out.push(Violation::new(
                "weight_dims",
                format!(
                    "dim(W₂, W₃, W₄) = ({w2}, {w3}, {w4}), expected (1, {}, {})",
                    2 * h + 3,
                    2 * h + 4
                ),
            ));
        }
    }

    let (f1, f2, f3) = (lmhs.f(1), lmhs.f(2), lmhs.f(3));
    if (f1.dim(), f2.dim(), f3.dim()) != (2 * h + 3, h + 2, 1) {
        out.push(Violation::new(
            "hodge_dims",
            format!(
                "dim(F¹, F², F³) = ({}, {}, {}), expected ({}, {}, 1)",
                f1.dim(),
                f2.dim(),
                f3.dim(),
                2 * h + 3,
                h + 2
            ),
        ));
    }

    let w2 = lmhs.w(2);
    let w3 = lmhs.w(3);
    let w4 = lmhs.w(4);

    match f1.intersect(&w2) {
        Ok(meet) if meet == w2 => {}
        Ok(meet) => out.push(Violation::new(
            "f1_meets_w2_in_w2",
            format!("dim(F¹ ∩ W₂) = {}, expected W₂ itself", meet.dim()),
        )),
        Err(e) => out.push(Violation::new("f1_meets_w2_in_w2", e.to_string())),
    }

    match f2.intersect(&w2) {
        Ok(meet) if meet.is_zero() => {}
        Ok(meet) => out.push(Violation::new(
            "f2_meets_w2_trivially",
            format!("dim(F² ∩ W₂) = {}, expected 0", meet.dim()),
        )),
        Err(e) => out.push(Violation::new("f2_meets_w2_trivially", e.to_string())),
    }

    match f2.sum(&w3) {
        Ok(span) if span == w4 => {}
        Ok(span) => out.push(Violation::new(
            "f2_plus_w3_full",
            format!("dim(F² + W₃) = {}, expected the whole space", span.dim()),
        )),
        Err(e) => out.push(Violation::new("f2_plus_w3_full", e.to_string())),
    }

    if !f3.is_subspace_of(&w3) {
        out.push(Violation::new("f3_inside_w3", "F³ is not contained in W₃".to_string()));
    }

    let gram = lmhs.pairing.gram();
    let mut pairing_issues = Vec::new();
    if !gram.is_real() {
        pairing_issues.push("Gram matrix has non-real entries");
    }
    if !gram.is_antisymmetric() {
        pairing_issues.push("Gram matrix is not alternating");
    }
    if gram.det().is_zero() {
        pairing_issues.push("Gram matrix is singular");
    }
    if !pairing_issues.is_empty() {
        out.push(Violation::new(
            "pairing_alternating_nondegenerate_rational",
            pairing_issues.join("; "),
        ));
    }

    let w2_perp = lmhs.pairing.perp(&w2);
    if w2_perp != w3 {
        out.push(Violation::new(
            "w3_is_w2_perp",
            format!(
                "W₂^⊥ has dimension {}, W₃ has dimension {}; they differ",
                w2_perp.dim(),
                w3.dim()
            ),
        ));
    }

    let n = &lmhs.n_op;
    let mut n_issues = Vec::new();
    if !n.is_real() {
        n_issues.push("N has non-real entries".to_string());
    }
    if !n.mul(n).is_zero() {
        n_issues.push("N² ≠ 0".to_string());
    }
    let ker = Subspace::from_generators(dim, &n.kernel());
    if ker != w3 {
        n_issues.push(format!("Ker(N) has dimension {}, expected W₃", ker.dim()));
    }
    let image = Subspace::from_generators(dim, &n.transpose());
    if image != w2 {
        n_issues.push(format!("Im(N) has dimension {}, expected W₂", image.dim()));
    }
    if !n_issues.is_empty() {
        out.push(Violation::new("n_squared_zero_ker_im", n_issues.join("; ")));
    }

    // Induced map W₄/W₃ → W₂. It is well-defined when N kills W₃ and is an
    // isomorphism exactly when N carries the one-dimensional quotient onto W₂.
    let kills_w3 = w3.basis_vectors().iter().all(|v| matrix::vec_is_zero(&n.apply(v)));
    let image_is_w2 = image == w2 && w4.dim() == w3.dim() + 1;
    if !(kills_w3 && image_is_w2) {
        out.push(Violation::new(
            "n_gr4_to_w2_iso",
            "the induced map W₄/W₃ → W₂ is not an isomorphism".to_string(),
        ));
    }

    out
}
