//! Deformation families over the limiting structure and the two
//! verification pipelines.
//!
//! A family assigns to each limit basis vector u_α a section
//!
//!   u_α(s) = Σ_i A_{α,i}(t,ζ)·e_i + Σ_i B_{α,i}(t,ζ)·f_i + C_α(t,ζ)·e_{h+1} + D_α(t,ζ)·f_{h+1}
//!
//! with truncated-polynomial coefficients vanishing appropriately at the
//! origin. Pulling back through the nilpotent orbit multiplies by
//! e^{zN} = 1 + zN, which only shifts the e_{h+1}-coordinate by z·D_α. The
//! wedge-determinant and Q-matrix pipelines then work with polynomials in
//! y = Im(z) and decide signs either exactly (rational y) or by interval
//! enclosure (y derived from |ζ|).

pub mod certificate;
mod ddbar;
mod family_gen;
mod pullback;
mod qmat;
mod scan;
pub mod sweep;
mod threshold;
pub mod ypoly;

pub use certificate::{ArithmeticMode, Certificate, RegionSpec, Verdict, WitnessValue};
pub use ddbar::{ddbar_certificate, ddbar_det, DdbarValue};
pub use family_gen::{constant_family, gen_f2_family, gen_h21_family};
pub use pullback::{frames_monodromy_related, monodromy_check, pull_back, PulledFrame};
pub use qmat::{
    hr_verify, q_matrix, schur_eliminate, y2_cancellation, HrOutcome, QMatrixPoly,
    SchurDecomposition, Y2Report,
};
pub use scan::{h21_rank_scan, ScanPointReport, ScanReport};
pub use threshold::{delta_threshold, ThresholdResult};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::interval::imz_from_zeta_norm_sqr;
use crate::exact::{GaussRat, Rat, RatInterval, TruncatedPoly};
use crate::lmhs::{
    adapted_basis, f2_basis, h21_limit_basis, AdaptedBasis, F2Basis, H21Basis, LimitingMHS,
    LmhsError,
};

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error("malformed family: {0}")]
    InvalidFamily(String),
    #[error("sample point must have Im(z) > 0")]
    NonpositiveImz,
    #[error("ζ must satisfy 0 < |ζ| < 1 to determine Im(z), got |ζ|² = {0}")]
    ZetaOutOfRange(Rat),
    #[error("operation requires an exact (Gaussian-rational) sample point")]
    NotExactMode,
    #[error("degenerate pivot: ρ = 0, elimination aborted")]
    DegeneratePivot,
    #[error("family kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: &'static str, got: &'static str },
    #[error("no admissible δ ≤ 1/2 satisfies the bounds: {0}")]
    FamilyTooWild(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Lmhs(#[from] LmhsError),
}

/// Which bundle the family models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Sections u_0..u_{h+1} framing F².
    F2,
    /// Sections u_1..u_{h+1} framing H^{2,1} = F² ∩ conj(F¹).
    H21,
}

impl FamilyKind {
    fn name(self) -> &'static str {
        match self {
            FamilyKind::F2 => "F2",
            FamilyKind::H21 => "H21",
        }
    }
}

/// Coefficient functions of one section, as truncated polynomials in
/// (t_1, …, t_h, ζ) — ζ is always the last variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCoeffs {
    /// A_{α,0..h}: e_i coefficients.
    pub a: Vec<TruncatedPoly>,
    /// B_{α,0..h}: f_i coefficients.
    pub b: Vec<TruncatedPoly>,
    /// C_α: e_{h+1} coefficient.
    pub c: TruncatedPoly,
    /// D_α: f_{h+1} coefficient.
    pub d: TruncatedPoly,
}

impl SectionCoeffs {
    fn polys(&self) -> impl Iterator<Item = &TruncatedPoly> {
        self.a.iter().chain(self.b.iter()).chain([&self.c, &self.d])
    }
}

/// The coefficient functions of one section evaluated at a base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionValues {
    pub a: Vec<GaussRat>,
    pub b: Vec<GaussRat>,
    pub c: GaussRat,
    pub d: GaussRat,
}

/// A family of sections over a validated limiting structure, together with
/// the derived bases it extends.
#[derive(Clone, Debug)]
pub struct PerturbationFamily {
    lmhs: LimitingMHS,
    adapted: AdaptedBasis,
    f2: F2Basis,
    h21: Option<H21Basis>,
    kind: FamilyKind,
    sections: Vec<SectionCoeffs>,
    degree_cap: u32,
    /// Adapted coordinates of the limit basis vectors, one per section.
    limits_adapted: Vec<Vec<GaussRat>>,
    /// For F²-families: the limit V-block determinant W₀ (nonzero).
    limit_vblock: Option<GaussRat>,
}

impl PerturbationFamily {
    /// Families violating the constant-term invariants are rejected here,
    /// not during verification.
    pub fn new(
        lmhs: LimitingMHS,
        kind: FamilyKind,
        sections: Vec<SectionCoeffs>,
        degree_cap: u32,
    ) -> Result<Self, OrbitError> {
        if !lmhs.is_valid() {
            return Err(OrbitError::InvalidFamily(
                "underlying limiting structure fails validation".into(),
            ));
        }
        let h = lmhs.h();
        let adapted = adapted_basis(&lmhs)?;
        let f2 = f2_basis(&lmhs, &adapted)?;
        let h21 = match kind {
            FamilyKind::F2 => None,
            FamilyKind::H21 => Some(h21_limit_basis(&lmhs, &adapted, &f2)?),
        };

        let limit_vectors: Vec<Vec<GaussRat>> = match kind {
            FamilyKind::F2 => f2.u.clone(),
            FamilyKind::H21 => h21.as_ref().expect("set above").basis.clone(),
        };
        if sections.len() != limit_vectors.len() {
            return Err(OrbitError::InvalidFamily(format!(
                "{} sections supplied, {} limit basis vectors for kind {}",
                sections.len(),
                limit_vectors.len(),
                kind.name()
            )));
        }
        for (idx, sec) in sections.iter().enumerate() {
            if sec.a.len() != h + 1 || sec.b.len() != h + 1 {
                return Err(OrbitError::InvalidFamily(format!(
                    "section {idx}: expected h+1 = {} e- and f-coefficients",
                    h + 1
                )));
            }
            for p in sec.polys() {
                if p.vars() != h + 1 {
                    return Err(OrbitError::InvalidFamily(format!(
                        "section {idx}: coefficient polynomial has {} variables, expected {}",
                        p.vars(),
                        h + 1
                    )));
                }
                if p.max_total_degree() != degree_cap {
                    return Err(OrbitError::InvalidFamily(format!(
                        "section {idx}: coefficient cap {} differs from family cap {degree_cap}",
                        p.max_total_degree()
                    )));
                }
            }
        }

        // Constant terms must reproduce the limit basis exactly; this covers
        // C_α(0) = D_α(0) = 0 for the V-sections and D_{h+1}(0) = 1.
        let mut limits_adapted = Vec::with_capacity(limit_vectors.len());
        for (idx, (sec, limit)) in sections.iter().zip(&limit_vectors).enumerate() {
            let expect = adapted.to_adapted_coords(limit);
            let mut got = vec![GaussRat::zero(); 2 * h + 4];
            for i in 0..=h {
                got[adapted.e_index(i)] = sec.a[i].constant_term();
                got[adapted.f_index(i)] = sec.b[i].constant_term();
            }
            got[adapted.e_index(h + 1)] = sec.c.constant_term();
            got[adapted.f_index(h + 1)] = sec.d.constant_term();
            if got != expect {
                return Err(OrbitError::InvalidFamily(format!(
                    "section {idx}: constant terms do not match the limit basis vector"
                )));
            }
            limits_adapted.push(expect);
        }

        let limit_vblock = match kind {
            FamilyKind::F2 => Some(ddbar::limit_vblock_det(h, &limits_adapted)),
            FamilyKind::H21 => None,
        };

        Ok(PerturbationFamily {
            lmhs,
            adapted,
            f2,
            h21,
            kind,
            sections,
            degree_cap,
            limits_adapted,
            limit_vblock,
        })
    }

    pub fn lmhs(&self) -> &LimitingMHS {
        &self.lmhs
    }

    pub fn adapted(&self) -> &AdaptedBasis {
        &self.adapted
    }

    pub fn f2_basis(&self) -> &F2Basis {
        &self.f2
    }

    pub fn h21_basis(&self) -> Option<&H21Basis> {
        self.h21.as_ref()
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn h(&self) -> usize {
        self.lmhs.h()
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn sections(&self) -> &[SectionCoeffs] {
        &self.sections
    }

    pub fn limits_adapted(&self) -> &[Vec<GaussRat>] {
        &self.limits_adapted
    }

    /// Limit V-block determinant (F²-families only).
    pub fn limit_vblock(&self) -> Option<&GaussRat> {
        self.limit_vblock.as_ref()
    }

    pub(crate) fn require_kind(&self, expected: FamilyKind) -> Result<(), OrbitError> {
        if self.kind != expected {
            return Err(OrbitError::KindMismatch {
                expected: expected.name(),
                got: self.kind.name(),
            });
        }
        Ok(())
    }

    /// Evaluate every coefficient function at (t, ζ), exactly.
    pub fn eval_sections(
        &self,
        t: &[GaussRat],
        zeta: &GaussRat,
    ) -> Result<Vec<SectionValues>, OrbitError> {
        let h = self.h();
        if t.len() != h {
            return Err(OrbitError::InvalidFamily(format!(
                "expected {h} t-coordinates, got {}",
                t.len()
            )));
        }
        let mut point = t.to_vec();
        point.push(zeta.clone());
        Ok(self
            .sections
            .iter()
            .map(|sec| SectionValues {
                a: sec.a.iter().map(|p| p.eval(&point)).collect(),
                b: sec.b.iter().map(|p| p.eval(&point)).collect(),
                c: sec.c.eval(&point),
                d: sec.d.eval(&point),
            })
            .collect())
    }
}

/// A base point of the deformation together with a lift to the upper half
/// plane.
///
/// Two arithmetic modes coexist. In the exact mode Im(z) is a supplied
/// rational and every downstream verdict is exact; ζ is then treated as an
/// independent Gaussian-rational input (the transcendental constraint
/// ζ = e^{2πiz} is recorded in the mode, not enforced). In the derived mode
/// Im(z) = −(1/4π)·log|ζ|² is enclosed in an interval from the exact |ζ|²,
/// and verdicts are decided only when the whole enclosure agrees.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    t: Vec<GaussRat>,
    zeta: GaussRat,
    re_z: Rat,
    imz: RatInterval,
    exact_imz: Option<Rat>,
}

impl SamplePoint {
    /// Exact mode: z = re_z + i·im_z with rational parts, im_z > 0.
    pub fn exact(
        t: Vec<GaussRat>,
        zeta: GaussRat,
        re_z: Rat,
        im_z: Rat,
    ) -> Result<Self, OrbitError> {
        if !im_z.is_positive() {
            return Err(OrbitError::NonpositiveImz);
        }
        Ok(SamplePoint {
            t,
            zeta,
            re_z,
            imz: RatInterval::point(im_z.clone()),
            exact_imz: Some(im_z),
        })
    }

    /// Derived mode: Im(z) enclosed from |ζ|² to the requested precision.
    pub fn from_zeta(
        t: Vec<GaussRat>,
        zeta: GaussRat,
        re_z: Rat,
        precision_bits: u32,
    ) -> Result<Self, OrbitError> {
        let n2 = zeta.norm_sqr();
        if !n2.is_positive() || n2 >= Rat::one() {
            return Err(OrbitError::ZetaOutOfRange(n2));
        }
        let imz = imz_from_zeta_norm_sqr(&n2, precision_bits);
        Ok(SamplePoint {
            t,
            zeta,
            re_z,
            imz,
            exact_imz: None,
        })
    }

    pub fn t(&self) -> &[GaussRat] {
        &self.t
    }

    pub fn zeta(&self) -> &GaussRat {
        &self.zeta
    }

    pub fn re_z(&self) -> &Rat {
        &self.re_z
    }

    pub fn imz(&self) -> &RatInterval {
        &self.imz
    }

    pub fn exact_imz(&self) -> Option<&Rat> {
        self.exact_imz.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact_imz.is_some()
    }

    /// |s|² = |t|² + |ζ|², exact.
    pub fn s_norm_sqr(&self) -> Rat {
        let mut acc = self.zeta.norm_sqr();
        for ti in &self.t {
            acc += &ti.norm_sqr();
        }
        acc
    }

    /// Monodromy translate z ↦ z + m (ζ unchanged).
    pub fn shift_z(&self, m: i64) -> SamplePoint {
        let mut p = self.clone();
        p.re_z = &p.re_z + &Rat::from_int(m);
        p
    }

    /// Normalize Re(z) into the strip [0, 1) using monodromy invariance.
    pub fn normalize_strip(&self) -> SamplePoint {
        let floor = self.re_z.numer().div_floor(self.re_z.denom());
        let mut p = self.clone();
        p.re_z = &p.re_z - &Rat::from_big(floor, 1.into());
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmhs::{gen_instance, CaseFlag};

    #[test]
    fn family_rejects_wrong_constants() {
        let inst = gen_instance(1, CaseFlag::I, 2);
        let fam = gen_f2_family(&inst, 5, 2).unwrap();
        let mut sections = fam.sections().to_vec();
        // Corrupt a constant term of C_0 (must stay 0 for a V-section).
        let h = fam.h();
        sections[0].c = sections[0]
            .c
            .add(&TruncatedPoly::constant(h + 1, 2, GaussRat::one()));
        let res = PerturbationFamily::new(inst, FamilyKind::F2, sections, 2);
        assert!(matches!(res, Err(OrbitError::InvalidFamily(_))));
    }

    #[test]
    fn sample_point_modes() {
        let zeta = GaussRat::from_parts(1, 1000, 0, 1);
        let p = SamplePoint::from_zeta(vec![], zeta.clone(), Rat::zero(), 64).unwrap();
        assert!(p.imz().is_positive());
        assert!(!p.is_exact());
        let q = SamplePoint::exact(vec![], zeta, Rat::zero(), Rat::from_int(5)).unwrap();
        assert!(q.is_exact());
        assert!(SamplePoint::exact(vec![], GaussRat::zero(), Rat::zero(), Rat::from_int(-1)).is_err());
        assert!(
            SamplePoint::from_zeta(vec![], GaussRat::from_int(2), Rat::zero(), 64).is_err()
        );
    }

    #[test]
    fn strip_normalization() {
        let p = SamplePoint::exact(
            vec![],
            GaussRat::from_parts(1, 100, 0, 1),
            Rat::new(7, 2),
            Rat::one(),
        )
        .unwrap();
        let n = p.normalize_strip();
        assert_eq!(*n.re_z(), Rat::new(1, 2));
        let neg = SamplePoint::exact(
            vec![],
            GaussRat::from_parts(1, 100, 0, 1),
            Rat::new(-5, 2),
            Rat::one(),
        )
        .unwrap()
        .normalize_strip();
        assert_eq!(*neg.re_z(), Rat::new(1, 2));
    }
}
