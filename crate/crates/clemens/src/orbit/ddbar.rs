//! The wedge-determinant criterion for F²_s ∩ conj(F²_s) = 0.
//!
//! The ratio of the top wedge ∧_α v_α ∧ conj(v_α) to the reference form
//! e_{h+1} ∧ f_{h+1} ∧ ∧_i e_i ∧ f_i is the determinant of the coordinate
//! matrix of the 2h+4 vectors in that row order. Only the e_{h+1}-row
//! depends on z, so the determinant is an affine polynomial μ·y + ν in
//! y = Im(z). Dividing by k·W₀ — the monodromy constant times the limit
//! V-block determinant — normalizes the leading coefficient to
//! 2i·|D_{h+1}|²·(1 + O(|s|)), the exact shape of the leading-term
//! expansion.

use crate::exact::{ComplexBox, ExactMatrix, GaussRat, Rat};

use super::certificate::{ArithmeticMode, Certificate, Verdict, WitnessValue};
use super::pullback::pull_back;
use super::ypoly::{poly_det, YPoly};
use super::{FamilyKind, OrbitError, PerturbationFamily, SamplePoint};

/// The wedge ratio at a point, kept polynomial in y.
#[derive(Clone, Debug)]
pub struct DdbarValue {
    /// Raw determinant, affine in y.
    pub det_poly: YPoly,
    /// Determinant of the limit V-block (nonzero for a valid family).
    pub w0: GaussRat,
    /// k from N f_{h+1} = k e_{h+1}.
    pub k_const: Rat,
    /// det_poly / (k·W₀): leading term 2i·y·|D_{h+1}|²·(1+O(|s|)) + O(1).
    pub normalized: YPoly,
}

impl DdbarValue {
    pub fn normalized_at(&self, y: &Rat) -> GaussRat {
        self.normalized.eval(y)
    }

    pub fn raw_at(&self, y: &Rat) -> GaussRat {
        self.det_poly.eval(y)
    }

    pub fn normalized_box(&self, y: &crate::exact::RatInterval) -> ComplexBox {
        self.normalized.eval_box(y)
    }

    /// Non-vanishing verdict at the sample's Im(z). Exact mode decides both
    /// ways; interval mode passes only when the enclosure excludes zero and
    /// reports Inconclusive otherwise.
    pub fn nonzero_verdict(&self, p: &SamplePoint) -> Verdict {
        match p.exact_imz() {
            Some(y) => {
                if self.normalized_at(y).is_zero() {
                    Verdict::Fail
                } else {
                    Verdict::Pass
                }
            }
            None => {
                let b = self.normalized_box(p.imz());
                if b.excludes_zero() {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                }
            }
        }
    }
}

/// Determinant of the limit V-block: rows are the V-coordinates
/// (e_0, f_0, …, e_h, f_h), columns the limit vectors u_0, conj u_0, …,
/// u_h, conj u_h. Nonzero exactly because these span V. Computed once per
/// family at construction.
pub(crate) fn limit_vblock_det(h: usize, limits_adapted: &[Vec<GaussRat>]) -> GaussRat {
    let n = 2 * h + 2;
    let mut cols: Vec<Vec<GaussRat>> = Vec::with_capacity(n);
    for lim in limits_adapted.iter().take(h + 1) {
        let mut col = Vec::with_capacity(n);
        let mut col_conj = Vec::with_capacity(n);
        for i in 0..=h {
            let e = lim[i].clone(); // e_index(i) = i
            let f = lim[h + 2 + i].clone(); // f_index(i) = h+2+i
            col.push(e.clone());
            col.push(f.clone());
            col_conj.push(e.conj());
            col_conj.push(f.conj());
        }
        cols.push(col);
        cols.push(col_conj);
    }
    ExactMatrix::from_cols(&cols).det()
}

/// Compute the wedge ratio at a point of an F²-family.
pub fn ddbar_det(fam: &PerturbationFamily, p: &SamplePoint) -> Result<DdbarValue, OrbitError> {
    fam.require_kind(FamilyKind::F2)?;
    let h = fam.h();
    let frame = pull_back(fam, p)?;
    let conj_frame = frame.conj_sections();
    let adapted = fam.adapted();

    // Row order (e_{h+1}, f_{h+1}, e_0, f_0, …, e_h, f_h) matches the
    // reference wedge; columns are v_0, conj v_0, …, v_{h+1}, conj v_{h+1}.
    let mut row_index = vec![adapted.e_index(h + 1), adapted.f_index(h + 1)];
    for i in 0..=h {
        row_index.push(adapted.e_index(i));
        row_index.push(adapted.f_index(i));
    }
    let n = 2 * h + 4;
    let mut rows: Vec<Vec<YPoly>> = vec![Vec::with_capacity(n); n];
    for alpha in 0..=h + 1 {
        for (r, &coord) in row_index.iter().enumerate() {
            rows[r].push(frame.sections[alpha][coord].clone());
        }
        for (r, &coord) in row_index.iter().enumerate() {
            rows[r].push(conj_frame[alpha][coord].clone());
        }
    }
    let det_poly = poly_det(&rows);

    let w0 = fam
        .limit_vblock()
        .cloned()
        .ok_or_else(|| OrbitError::Internal("F²-family carries no limit V-block".into()))?;
    if w0.is_zero() {
        return Err(OrbitError::Internal(
            "limit V-block determinant vanishes; u_0..u_h do not frame F²_V".into(),
        ));
    }
    let k_const = fam.adapted().k_const.clone();
    let scale = &GaussRat::from_rat(k_const.clone()) * &w0;
    let normalized = det_poly.scale(&scale.recip());
    Ok(DdbarValue {
        det_poly,
        w0,
        k_const,
        normalized,
    })
}

/// Point certificate for the non-vanishing criterion.
pub fn ddbar_certificate(
    fam: &PerturbationFamily,
    p: &SamplePoint,
) -> Result<Certificate, OrbitError> {
    let value = ddbar_det(fam, p)?;
    let verdict = value.nonzero_verdict(p);
    let mode = if p.is_exact() {
        ArithmeticMode::Exact
    } else {
        ArithmeticMode::Interval
    };
    let mut cert = Certificate::new("ddbar", verdict, mode)
        .with_witness("w0", WitnessValue::from_gauss(&value.w0))
        .with_witness("s_norm_sqr", WitnessValue::from_rat(&p.s_norm_sqr()))
        .with_witness("imz", WitnessValue::from_interval(p.imz()));
    match p.exact_imz() {
        Some(y) => {
            let v = value.normalized_at(y);
            cert = cert.with_witness("value", WitnessValue::from_gauss(&v));
        }
        None => {
            let b = value.normalized_box(p.imz());
            cert = cert
                .with_witness("value_re", WitnessValue::from_interval(&b.re))
                .with_witness("value_im", WitnessValue::from_interval(&b.im))
                .with_witness("abs_sqr_lower", WitnessValue::from_rat(&b.norm_sqr().lo));
        }
    }
    Ok(cert)
}
