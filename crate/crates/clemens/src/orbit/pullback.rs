//! Pull-back of family sections through the nilpotent orbit.
//!
//! With N² = 0 the matrix exponential is exact: e^{zN} = 1 + zN, so the
//! pulled-back section is
//!
//!   v_α(t, z) = v'_α + (k·z·D_α + C_α)·e_{h+1} + D_α·f_{h+1},
//!
//! where k is the constant in N(f_{h+1}) = k·e_{h+1}; only the
//! e_{h+1}-coordinate depends on z at all. Monodromy invariance
//! v_α(t, z+1) = (Id + N)·v_α(t, z) is structural: coefficients are
//! functions of ζ = e^{2πiz} alone, and the k factor is exactly what makes
//! the identity hold for the instance's actual N.

use crate::exact::{GaussRat, Rat};

use super::ypoly::YPoly;
use super::{OrbitError, PerturbationFamily, SamplePoint, SectionValues};

/// A frame of pulled-back sections at a base point, in adapted coordinates,
/// with the e_{h+1}-coordinate kept polynomial in y = Im(z).
#[derive(Clone, Debug)]
pub struct PulledFrame {
    /// One adapted-coordinate vector of y-polynomials per section.
    pub sections: Vec<Vec<YPoly>>,
    /// The evaluated coefficient functions behind the frame.
    pub values: Vec<SectionValues>,
    /// Re(z) of the sample point.
    pub x: Rat,
    h: usize,
    k_const: Rat,
}

impl PulledFrame {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn dim(&self) -> usize {
        2 * self.h + 4
    }

    pub fn k_const(&self) -> &Rat {
        &self.k_const
    }

    /// Coordinate-wise conjugate frame (y stays real).
    pub fn conj_sections(&self) -> Vec<Vec<YPoly>> {
        self.sections
            .iter()
            .map(|v| v.iter().map(YPoly::conj).collect())
            .collect()
    }

    /// Exact numeric frame at a rational y.
    pub fn eval_exact(&self, y: &Rat) -> Vec<Vec<GaussRat>> {
        self.sections
            .iter()
            .map(|v| v.iter().map(|p| p.eval(y)).collect())
            .collect()
    }

    /// (Id + N) applied to an adapted-coordinate vector of y-polynomials:
    /// only the e_{h+1}-coordinate moves, by k times the f_{h+1}-coordinate.
    pub fn apply_one_plus_n(&self, v: &[YPoly]) -> Vec<YPoly> {
        let mut w = v.to_vec();
        let e_last = self.h + 1;
        let f_last = 2 * self.h + 3;
        let k = GaussRat::from_rat(self.k_const.clone());
        w[e_last] = w[e_last].add(&v[f_last].scale(&k));
        w
    }
}

/// Evaluate the family at the base point of `p` and pull back through
/// e^{zN} = 1 + zN with z = x + iy, y kept formal.
pub fn pull_back(fam: &PerturbationFamily, p: &SamplePoint) -> Result<PulledFrame, OrbitError> {
    let h = fam.h();
    let values = fam.eval_sections(p.t(), p.zeta())?;
    let x = p.re_z().clone();
    let k = GaussRat::from_rat(fam.adapted().k_const.clone());
    let kx = &k * &GaussRat::from_rat(x.clone());
    let ki = &k * &GaussRat::i();
    let mut sections = Vec::with_capacity(values.len());
    for val in &values {
        let mut v = vec![YPoly::zero(); 2 * h + 4];
        for i in 0..=h {
            v[fam.adapted().e_index(i)] = YPoly::constant(val.a[i].clone());
            v[fam.adapted().f_index(i)] = YPoly::constant(val.b[i].clone());
        }
        // e_{h+1}-coordinate: k·z·D + C = (k·x·D + C) + i·k·D·y.
        let const_part = &(&kx * &val.d) + &val.c;
        let y_part = &ki * &val.d;
        v[fam.adapted().e_index(h + 1)] = YPoly::linear(const_part, y_part);
        v[fam.adapted().f_index(h + 1)] = YPoly::constant(val.d.clone());
        sections.push(v);
    }
    Ok(PulledFrame {
        sections,
        values,
        x,
        h,
        k_const: fam.adapted().k_const.clone(),
    })
}

/// frame_b is the frame at z+1 of the frame_a at z: exact identity check
/// frame_b == (Id + N)·frame_a, coordinate polynomials compared exactly.
pub fn frames_monodromy_related(at_z: &PulledFrame, at_z_plus_1: &PulledFrame) -> bool {
    if at_z.sections.len() != at_z_plus_1.sections.len() {
        return false;
    }
    at_z
        .sections
        .iter()
        .zip(&at_z_plus_1.sections)
        .all(|(a, b)| *b == at_z.apply_one_plus_n(a))
}

/// Monodromy invariance at a point: pull_back(t, z+1) = (Id+N)·pull_back(t, z).
/// Structural for any well-formed family (coefficients depend only on ζ), and
/// checked here as an exact polynomial identity in y.
pub fn monodromy_check(fam: &PerturbationFamily, p: &SamplePoint) -> Result<bool, OrbitError> {
    let here = pull_back(fam, p)?;
    let shifted = pull_back(fam, &p.shift_z(1))?;
    Ok(frames_monodromy_related(&here, &shifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmhs::{gen_instance, CaseFlag};
    use crate::orbit::family_gen::constant_family;

    fn sample(h: usize) -> SamplePoint {
        SamplePoint::exact(
            vec![GaussRat::from_parts(1, 100, 0, 1); h],
            GaussRat::from_parts(1, 200, 1, 300),
            Rat::new(1, 3),
            Rat::from_int(7),
        )
        .unwrap()
    }

    #[test]
    fn constant_family_pullback_shape() {
        let inst = gen_instance(1, CaseFlag::II, 6);
        let fam = constant_family(&inst, super::super::FamilyKind::F2, 2).unwrap();
        let p = sample(1);
        let frame = pull_back(&fam, &p).unwrap();
        let h = 1;
        let k = GaussRat::from_rat(frame.k_const().clone());
        // α = h+1 has D ≡ 1, so v_{h+1} = u_{h+1} + k·z·e_{h+1}:
        // the e_{h+1}-coordinate gains k(x + iy), the rest is the limit vector.
        let last = &frame.sections[h + 1];
        let limit = &fam.limits_adapted()[h + 1];
        assert_eq!(last[2 * h + 3], YPoly::constant(GaussRat::one()));
        let expect_e = YPoly::linear(
            &limit[h + 1] + &(&k * &GaussRat::from_rat(p.re_z().clone())),
            &k * &GaussRat::i(),
        );
        assert_eq!(last[h + 1], expect_e);
        // e_{h+1}-coordinate of every section equals k·z·D_α + C_α.
        for (v, val) in frame.sections.iter().zip(&frame.values) {
            let expect = YPoly::linear(
                &(&(&k * &GaussRat::from_rat(frame.x.clone())) * &val.d) + &val.c,
                &(&k * &GaussRat::i()) * &val.d,
            );
            assert_eq!(v[h + 1], expect);
        }
    }

    #[test]
    fn monodromy_invariance_structural() {
        let inst = gen_instance(2, CaseFlag::I, 4);
        let fam = super::super::gen_f2_family(&inst, 11, 2).unwrap();
        let p = sample(2);
        assert!(monodromy_check(&fam, &p).unwrap());
    }

    #[test]
    fn corrupted_frame_fails_monodromy() {
        let inst = gen_instance(1, CaseFlag::I, 9);
        let fam = super::super::gen_f2_family(&inst, 3, 2).unwrap();
        let p = sample(1);
        let here = pull_back(&fam, &p).unwrap();
        let mut bad = pull_back(&fam, &p.shift_z(1)).unwrap();
        // Let D effectively depend on z directly: perturb the f_{h+1}-coordinate
        // of one section after the shift.
        let f_last = 2 * 1 + 3;
        bad.sections[0][f_last] = bad.sections[0][f_last].add(&YPoly::constant(GaussRat::one()));
        assert!(!frames_monodromy_related(&here, &bad));
    }

    #[test]
    fn exponential_oracle_matches_matrix_action() {
        // v_α = (Id + zN)·u_α(t,ζ) computed by direct matrix action on the
        // evaluated section, in ambient coordinates.
        let inst = gen_instance(1, CaseFlag::II, 12);
        let fam = super::super::gen_f2_family(&inst, 8, 2).unwrap();
        let p = sample(1);
        let frame = pull_back(&fam, &p).unwrap();
        let y = Rat::new(13, 4);
        let z = GaussRat::new(p.re_z().clone(), y.clone());
        let adapted = fam.adapted();
        for (vals, sec) in frame.values.iter().zip(&frame.sections) {
            // ambient u_α(t,ζ) from evaluated coefficients
            let h = fam.h();
            let mut coords = vec![GaussRat::zero(); 2 * h + 4];
            for i in 0..=h {
                coords[adapted.e_index(i)] = vals.a[i].clone();
                coords[adapted.f_index(i)] = vals.b[i].clone();
            }
            coords[adapted.e_index(h + 1)] = vals.c.clone();
            coords[adapted.f_index(h + 1)] = vals.d.clone();
            let ambient = adapted.from_adapted_coords(&coords);
            // (Id + zN) u
            let nu = inst.n_op().apply(&ambient);
            let moved: Vec<GaussRat> = ambient
                .iter()
                .zip(&nu)
                .map(|(u, w)| u + &(&z * w))
                .collect();
            let expect_adapted = adapted.to_adapted_coords(&moved);
            let got: Vec<GaussRat> = sec.iter().map(|p| p.eval(&y)).collect();
            assert_eq!(got, expect_adapted);
        }
    }
}
