//! Rank-constancy scan for the intersection bundle H^{2,1}_s = F²_s ∩ conj(F¹_s).
//!
//! At each exact sample point the F²-frame is pulled back and F¹_s is framed
//! by the same sections extended with the z-invariant complements e_{h+1}
//! and conj(u_j). The intersection dimension is then computed exactly with
//! subspace arithmetic — rank decisions need no tolerance because every
//! input is Gaussian rational.

use crate::exact::matrix::vec_conj;
use crate::exact::{matrix, Rat, Subspace};

use super::pullback::pull_back;
use super::{FamilyKind, OrbitError, PerturbationFamily, SamplePoint};

#[derive(Clone, Debug)]
pub struct ScanPointReport {
    pub s_norm_sqr: Rat,
    pub imz: Rat,
    pub dim: usize,
    pub ok: bool,
    /// For a supplied H^{2,1}-family: do its sections lie inside F²_s?
    pub membership_ok: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub expected: usize,
    pub points: Vec<ScanPointReport>,
    /// dim ≡ h+1 across the whole grid.
    pub constant: bool,
}

/// Scan dim(F²_s ∩ conj F¹_s) across exact sample points. If an
/// H^{2,1}-family is supplied, its pulled-back sections are additionally
/// checked for membership in F²_s at each point.
pub fn h21_rank_scan(
    f2_family: &PerturbationFamily,
    h21_family: Option<&PerturbationFamily>,
    points: &[SamplePoint],
) -> Result<ScanReport, OrbitError> {
    f2_family.require_kind(FamilyKind::F2)?;
    if let Some(fam) = h21_family {
        fam.require_kind(FamilyKind::H21)?;
    }
    let h = f2_family.h();
    let n = 2 * h + 4;
    let expected = h + 1;
    let adapted = f2_family.adapted();

    let mut reports = Vec::with_capacity(points.len());
    for p in points {
        let y = p.exact_imz().ok_or(OrbitError::NotExactMode)?.clone();
        let frame = pull_back(f2_family, p)?;
        let vectors = frame.eval_exact(&y);
        let f2_s = Subspace::from_vectors(n, &vectors);

        // F¹_s: the F² frame plus the z-invariant complements. e_{h+1} and
        // conj(u_j) ∈ I^{1,2} are killed by N, so their pull-back is constant.
        let mut f1_vectors = vectors.clone();
        f1_vectors.push(matrix::unit_vector(n, adapted.e_index(h + 1)));
        for j in 1..=h {
            f1_vectors.push(vec_conj(&f2_family.limits_adapted()[j]));
        }
        let f1_s = Subspace::from_vectors(n, &f1_vectors);

        let meet = f2_s.intersect(&f1_s.conj()).expect("same ambient");
        let dim = meet.dim();

        let membership_ok = match h21_family {
            None => None,
            Some(fam) => {
                let w_frame = pull_back(fam, p)?;
                let w_vectors = w_frame.eval_exact(&y);
                Some(w_vectors.iter().all(|w| f2_s.contains_vec(w)))
            }
        };

        reports.push(ScanPointReport {
            s_norm_sqr: p.s_norm_sqr(),
            imz: y,
            dim,
            ok: dim == expected,
            membership_ok,
        });
    }

    let constant = reports.iter().all(|r| r.ok);
    Ok(ScanReport {
        expected,
        points: reports,
        constant,
    })
}
