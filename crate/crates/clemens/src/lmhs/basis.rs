//! Basis constructions over a valid limiting structure: the adapted
//! symplectic basis, the F² basis, and the basis of F² ∩ conj(F¹).

use crate::exact::matrix::{self, vec_add, vec_conj, vec_is_zero, vec_scale, vec_sub};
use crate::exact::{ExactMatrix, GaussRat, Rat, Subspace};

use super::{CaseFlag, LimitingMHS, LmhsError};

/// Symplectic basis adapted to the limiting structure:
/// {e_0..e_h, f_0..f_h} spans V = I^{3,0} ⊕ I^{0,3} ⊕ I^{2,1} ⊕ I^{1,2},
/// e_{h+1} spans W₂ over ℚ, and f_{h+1} is the rational vector with
/// ⟨e_{h+1}, f_{h+1}⟩ = 1 and ⟨V, f_{h+1}⟩ = 0 = ⟨f_{h+1}, f_{h+1}⟩.
/// Adapted coordinates are ordered (e_0, …, e_{h+1}, f_0, …, f_{h+1}).
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    /// e_0..e_{h+1} in ambient coordinates.
    pub e: Vec<Vec<GaussRat>>,
    /// f_0..f_{h+1} in ambient coordinates.
    pub f: Vec<Vec<GaussRat>>,
    /// V = I^{3,0} ⊕ I^{0,3} ⊕ I^{2,1} ⊕ I^{1,2}.
    pub v_space: Subspace,
    /// k ≠ 0 from N(f_{h+1}) = k·e_{h+1}.
    pub k_const: Rat,
    h: usize,
    to_adapted: ExactMatrix,
    from_adapted: ExactMatrix,
}

impl AdaptedBasis {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn dim(&self) -> usize {
        2 * self.h + 4
    }

    /// Index of e_i in adapted coordinates.
    pub fn e_index(&self, i: usize) -> usize {
        debug_assert!(i <= self.h + 1);
        i
    }

    /// Index of f_i in adapted coordinates.
    pub fn f_index(&self, i: usize) -> usize {
        debug_assert!(i <= self.h + 1);
        self.h + 2 + i
    }

    pub fn to_adapted_coords(&self, ambient: &[GaussRat]) -> Vec<GaussRat> {
        self.to_adapted.apply(ambient)
    }

    pub fn from_adapted_coords(&self, adapted: &[GaussRat]) -> Vec<GaussRat> {
        self.from_adapted.apply(adapted)
    }

    /// The standard symplectic Gram matrix in adapted coordinates:
    /// ⟨e_i, f_j⟩ = δ_ij, all other basis pairings zero.
    pub fn standard_gram(&self) -> ExactMatrix {
        let n = self.dim();
        let half = self.h + 2;
        let mut j = ExactMatrix::zero(n, n);
        for i in 0..half {
            j.set(i, half + i, GaussRat::one());
            j.set(half + i, i, -GaussRat::one());
        }
        j
    }

    /// ⟨x, y⟩ for adapted coordinate vectors, through the standard form.
    pub fn pair_adapted(&self, x: &[GaussRat], y: &[GaussRat]) -> GaussRat {
        let half = self.h + 2;
        let mut acc = GaussRat::zero();
        for i in 0..half {
            acc += &(&x[i] * &y[half + i]);
            acc -= &(&x[half + i] * &y[i]);
        }
        acc
    }
}

/// Build the adapted basis: Deligne splitting → V, exact greedy Darboux
/// pairing on V, the canonical rational generator of W₂, and the solved
/// rational vector f_{h+1}.
pub fn adapted_basis(lmhs: &LimitingMHS) -> Result<AdaptedBasis, LmhsError> {
    lmhs.require_valid()?;
    let h = lmhs.h();
    let dim = lmhs.dim();
    let splitting = lmhs.splitting()?;

    let mut v_space = splitting.piece(3, 0);
    for &(p, q) in &[(0, 3), (2, 1), (1, 2)] {
        v_space = v_space.sum(&splitting.piece(p, q)).expect("same ambient");
    }
    if v_space.dim() != 2 * h + 2 {
        return Err(LmhsError::Internal(format!(
            "V has dimension {}, expected {}",
            v_space.dim(),
            2 * h + 2
        )));
    }
    // V is conjugation-stable; its canonical RREF basis is therefore real,
    // which keeps the whole symplectic basis rational.
    if !v_space.is_real() {
        return Err(LmhsError::Internal("V is not defined over ℚ".into()));
    }

    // Non-degeneracy of the restriction to V.
    let vb = v_space.basis();
    let gram_v = vb.mul(lmhs.pairing().gram()).mul(&vb.transpose());
    if gram_v.det().is_zero() {
        return Err(LmhsError::DegenerateRestriction);
    }

    // Greedy Darboux: pair off the first available vector with the first
    // partner it pairs non-trivially with, normalize, reduce the rest into
    // the symplectic complement.
    let mut avail = v_space.basis_vectors();
    let mut es: Vec<Vec<GaussRat>> = Vec::with_capacity(h + 1);
    let mut fs: Vec<Vec<GaussRat>> = Vec::with_capacity(h + 1);
    let pairing = lmhs.pairing();
    while !avail.is_empty() {
        let v = avail.remove(0);
        let partner = avail
            .iter()
            .position(|w| !pairing.pair(&v, w).is_zero())
            .ok_or(LmhsError::DegenerateRestriction)?;
        let w = avail.remove(partner);
        let scale = pairing.pair(&v, &w).recip();
        let w = vec_scale(&w, &scale);
        for u in avail.iter_mut() {
            let a = pairing.pair(u, &w); // ⟨u, f⟩
            let b = pairing.pair(u, &v); // ⟨u, e⟩
            // u ↦ u − ⟨u, f⟩e + ⟨u, e⟩f lands in the complement of (e, f).
            *u = vec_add(&vec_sub(u, &vec_scale(&v, &a)), &vec_scale(&w, &b));
        }
        es.push(v);
        fs.push(w);
    }
    if es.len() != h + 1 {
        return Err(LmhsError::Internal(format!(
            "Darboux produced {} pairs, expected {}",
            es.len(),
            h + 1
        )));
    }

    // e_{h+1}: the unique RREF generator of the rational line W₂.
    let w2 = lmhs.w(2);
    let e_last = w2.basis_vectors().remove(0);
    let pivot = e_last
        .iter()
        .position(|c| !c.is_zero())
        .expect("W₂ generator is nonzero");

    // f_{h+1}: solve ⟨V, f⟩ = 0, ⟨e_{h+1}, f⟩ = 1, then kill the e_{h+1}
    // component at the pivot coordinate to fix the remaining freedom.
    // (⟨f, f⟩ = 0 holds for free: the form is alternating.)
    let constraints = vb
        .mul(pairing.gram())
        .vstack(&ExactMatrix::from_rows(vec![e_last.clone()]).mul(pairing.gram()));
    let mut rhs = vec![GaussRat::zero(); constraints.rows()];
    rhs[2 * h + 2] = GaussRat::one();
    let f_raw = constraints
        .solve(&rhs)
        .ok_or_else(|| LmhsError::Internal("no solution for f_{h+1}".into()))?;
    let f_last = vec_sub(&f_raw, &vec_scale(&e_last, &f_raw[pivot]));
    if !matrix::vec_is_real(&f_last) {
        return Err(LmhsError::Internal("f_{h+1} is not rational".into()));
    }

    // k from N f_{h+1} = k e_{h+1}.
    let nf = lmhs.n_op().apply(&f_last);
    let k = nf[pivot].clone();
    if !vec_is_zero(&vec_sub(&nf, &vec_scale(&e_last, &k))) {
        return Err(LmhsError::Internal("N f_{h+1} is not a multiple of e_{h+1}".into()));
    }
    if !k.is_real() || k.re.is_zero() {
        return Err(LmhsError::Internal("k in N f_{h+1} = k e_{h+1} must be rational nonzero".into()));
    }

    let mut e = es;
    e.push(e_last);
    let mut f = fs;
    f.push(f_last);

    let mut cols = e.clone();
    cols.extend(f.iter().cloned());
    let from_adapted = ExactMatrix::from_cols(&cols);
    let to_adapted = from_adapted
        .inverse()
        .ok_or_else(|| LmhsError::Internal("adapted basis is not a basis".into()))?;

    let basis = AdaptedBasis {
        e,
        f,
        v_space,
        k_const: k.re,
        h,
        to_adapted,
        from_adapted,
    };

    // The full Gram matrix must be the standard symplectic form, exactly.
    let gram_full = basis
        .from_adapted
        .transpose()
        .mul(pairing.gram())
        .mul(&basis.from_adapted);
    if gram_full != basis.standard_gram() {
        return Err(LmhsError::Internal(
            "adapted basis Gram matrix is not the standard symplectic form".into(),
        ));
    }
    let _ = dim;
    Ok(basis)
}

/// Basis {u_0, …, u_{h+1}} of F²: u_0 spans I^{3,0}, u_1..u_h span I^{2,1},
/// and u_{h+1} ∈ I^{2,2} is normalized to have f_{h+1}-coordinate exactly 1.
#[derive(Clone, Debug)]
pub struct F2Basis {
    pub u: Vec<Vec<GaussRat>>,
    pub case: CaseFlag,
    /// √−1⟨u_0, conj u_0⟩ — positive exactly when the H^{3,0} Hodge–Riemann
    /// inequality holds for the chosen generator.
    pub h30_value: Rat,
}

impl F2Basis {
    pub fn h(&self) -> usize {
        self.u.len() - 2
    }

    pub fn u0(&self) -> &[GaussRat] {
        &self.u[0]
    }

    pub fn u_last(&self) -> &[GaussRat] {
        &self.u[self.u.len() - 1]
    }
}

pub fn f2_basis(lmhs: &LimitingMHS, basis: &AdaptedBasis) -> Result<F2Basis, LmhsError> {
    lmhs.require_valid()?;
    let h = lmhs.h();
    let splitting = lmhs.splitting()?;
    let i30 = splitting.piece(3, 0);
    let i21 = splitting.piece(2, 1);
    let i22 = splitting.piece(2, 2);
    if i30.dim() != 1 || i21.dim() != h || i22.dim() != 1 {
        return Err(LmhsError::Internal(format!(
            "splitting dims (I^{{3,0}}, I^{{2,1}}, I^{{2,2}}) = ({}, {}, {}), expected (1, {h}, 1)",
            i30.dim(),
            i21.dim(),
            i22.dim()
        )));
    }

    // u_0: the canonical generator of I^{3,0} (determinism comes from RREF;
    // tests consume the recorded pairing value rather than a fixed scale).
    let u0 = i30.basis_vectors().remove(0);
    let h30 = &GaussRat::i() * &lmhs.pairing().pair(&u0, &vec_conj(&u0));
    debug_assert!(h30.is_real());

    let mut u = vec![u0];
    u.extend(i21.basis_vectors());

    // u_{h+1}: scale the I^{2,2} generator so its f_{h+1}-coordinate is 1.
    let w = i22.basis_vectors().remove(0);
    let coords = basis.to_adapted_coords(&w);
    let d = coords[basis.f_index(h + 1)].clone();
    if d.is_zero() {
        return Err(LmhsError::Invalid(
            "I^{2,2} has zero f_{h+1}-coordinate, contradicting I^{2,2} + W₃ = W₄".into(),
        ));
    }
    u.push(vec_scale(&w, &d.recip()));

    if Subspace::from_vectors(lmhs.dim(), &u) != lmhs.f(2) {
        return Err(LmhsError::Internal("u_0..u_{h+1} do not span F²".into()));
    }

    Ok(F2Basis {
        u,
        case: lmhs.classify_case()?,
        h30_value: h30.re,
    })
}

/// Basis of H^{2,1}_0 = F² ∩ conj(F¹), of dimension h+1.
///
/// In case II this is {u_1..u_h, u_{h+1}}. In case I the comparison system is
/// solved for the mixed representation of u_{h+1} and the corrected vector
/// u*_{h+1} = κ₀·u_0 + u_{h+1} replaces u_{h+1}.
#[derive(Clone, Debug)]
pub struct H21Basis {
    /// u_1, …, u_h, then u_{h+1} (case II) or u*_{h+1} (case I).
    pub basis: Vec<Vec<GaussRat>>,
    pub case: CaseFlag,
    /// κ₀ = b'_0 − a'_0 (case I only).
    pub kappa0: Option<GaussRat>,
    /// Mixed-representation coefficients of u_{h+1} (case I only):
    /// u_{h+1} = Σ a'_i u_i + Σ conj(b'_i) conj(u_i) + c'·e_{h+1} + f_{h+1}.
    pub mixed: Option<MixedCoeffs>,
}

#[derive(Clone, Debug)]
pub struct MixedCoeffs {
    pub a_prime: Vec<GaussRat>,
    pub b_prime: Vec<GaussRat>,
    pub c_prime: GaussRat,
}

pub fn h21_limit_basis(
    lmhs: &LimitingMHS,
    basis: &AdaptedBasis,
    f2: &F2Basis,
) -> Result<H21Basis, LmhsError> {
    lmhs.require_valid()?;
    let h = lmhs.h();
    let target = lmhs
        .f(2)
        .intersect(&lmhs.f(1).conj())
        .expect("same ambient");
    if target.dim() != h + 1 {
        return Err(LmhsError::Invalid(format!(
            "dim(F² ∩ conj F¹) = {}, expected h+1 = {}",
            target.dim(),
            h + 1
        )));
    }

    let (vectors, kappa0, mixed) = match f2.case {
        CaseFlag::II => {
            let mut vs: Vec<Vec<GaussRat>> = f2.u[1..=h].to_vec();
            vs.push(f2.u_last().to_vec());
            (vs, None, None)
        }
        CaseFlag::I => {
            // Express u_{h+1} in the basis {u_0..u_h, conj u_0..conj u_h,
            // e_{h+1}, f_{h+1}} and read off the comparison coefficients.
            let mut cols: Vec<Vec<GaussRat>> = f2.u[..=h].to_vec();
            cols.extend(f2.u[..=h].iter().map(|v| vec_conj(v)));
            cols.push(basis.e[h + 1].clone());
            cols.push(basis.f[h + 1].clone());
            let m = ExactMatrix::from_cols(&cols);
            let x = m
                .solve(f2.u_last())
                .ok_or_else(|| LmhsError::Internal("mixed basis is not a basis".into()))?;
            let a_prime: Vec<GaussRat> = x[..=h].to_vec();
            let b_prime: Vec<GaussRat> = x[h + 1..=2 * h + 1].iter().map(GaussRat::conj).collect();
            let c_prime = x[2 * h + 2].clone();
            if x[2 * h + 3] != GaussRat::one() {
                return Err(LmhsError::Internal(
                    "u_{h+1} should have f_{h+1}-coefficient 1 in the mixed representation".into(),
                ));
            }
            let kappa0 = &b_prime[0] - &a_prime[0];
            let u_star = vec_add(f2.u_last(), &vec_scale(f2.u0(), &kappa0));
            let mut vs: Vec<Vec<GaussRat>> = f2.u[1..=h].to_vec();
            vs.push(u_star);
            (
                vs,
                Some(kappa0),
                Some(MixedCoeffs {
                    a_prime,
                    b_prime,
                    c_prime,
                }),
            )
        }
    };

    // Round-trip checks: every returned vector lies in F² and in conj(F¹),
    // and the span is exactly the independently computed intersection.
    let f2_space = lmhs.f(2);
    let f1_bar = lmhs.f(1).conj();
    for v in &vectors {
        if !f2_space.contains_vec(v) || !f1_bar.contains_vec(v) {
            return Err(LmhsError::Internal(
                "claimed H^{2,1} basis vector escapes F² ∩ conj(F¹)".into(),
            ));
        }
    }
    if Subspace::from_vectors(lmhs.dim(), &vectors) != target {
        return Err(LmhsError::Internal(
            "claimed H^{2,1} basis does not span F² ∩ conj(F¹)".into(),
        ));
    }

    Ok(H21Basis {
        basis: vectors,
        case: f2.case,
        kappa0,
        mixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmhs::{gen_instance, CaseFlag};

    #[test]
    fn adapted_basis_gram_is_standard() {
        for (h, case, seed) in [(0, CaseFlag::I, 1), (1, CaseFlag::II, 2), (2, CaseFlag::I, 3)] {
            let inst = gen_instance(h, case, seed);
            let ab = adapted_basis(&inst).unwrap();
            // Recompute the Gram through the raw pairing as an oracle.
            let n = inst.dim();
            let all: Vec<&Vec<GaussRat>> = ab.e.iter().chain(ab.f.iter()).collect();
            let half = h + 2;
            for (i, x) in all.iter().enumerate() {
                for (j, y) in all.iter().enumerate() {
                    let got = inst.pairing().pair(x, y);
                    let expect = if j == i + half {
                        GaussRat::one()
                    } else if i == j + half {
                        -GaussRat::one()
                    } else {
                        GaussRat::zero()
                    };
                    assert_eq!(got, expect, "pair({i},{j}) for h={h}");
                }
            }
            assert_eq!(all.len(), n);
            assert!(!ab.k_const.is_zero());
        }
    }

    #[test]
    fn f_last_orthogonality() {
        let inst = gen_instance(2, CaseFlag::II, 11);
        let ab = adapted_basis(&inst).unwrap();
        let f_last = &ab.f[3];
        assert!(inst.pairing().pair(f_last, f_last).is_zero());
        for v in ab.v_space.basis_vectors() {
            assert!(inst.pairing().pair(&v, f_last).is_zero());
        }
        assert_eq!(inst.pairing().pair(&ab.e[3], f_last), GaussRat::one());
    }

    #[test]
    fn h0_has_single_symplectic_pair() {
        let inst = gen_instance(0, CaseFlag::I, 4);
        let ab = adapted_basis(&inst).unwrap();
        assert_eq!(ab.v_space.dim(), 2);
        assert_eq!(ab.e.len(), 2);
        assert_eq!(ab.f.len(), 2);
    }

    #[test]
    fn f2_basis_normalization() {
        for case in [CaseFlag::I, CaseFlag::II] {
            let inst = gen_instance(2, case, 5);
            let ab = adapted_basis(&inst).unwrap();
            let f2 = f2_basis(&inst, &ab).unwrap();
            let coords = ab.to_adapted_coords(f2.u_last());
            assert_eq!(coords[ab.f_index(3)], GaussRat::one());
            assert!(f2.h30_value.is_positive());
        }
    }

    #[test]
    fn case_ii_u_last_is_real_line_vector() {
        let inst = gen_instance(1, CaseFlag::II, 8);
        let ab = adapted_basis(&inst).unwrap();
        let f2 = f2_basis(&inst, &ab).unwrap();
        let f2s = inst.f(2);
        let meet = f2s.intersect(&f2s.conj()).unwrap();
        assert!(meet.contains_vec(f2.u_last()));
    }

    #[test]
    fn h21_dimension_and_membership_both_cases() {
        for case in [CaseFlag::I, CaseFlag::II] {
            for h in [0, 1, 2] {
                let inst = gen_instance(h, case, 13);
                let ab = adapted_basis(&inst).unwrap();
                let f2 = f2_basis(&inst, &ab).unwrap();
                let h21 = h21_limit_basis(&inst, &ab, &f2).unwrap();
                assert_eq!(h21.basis.len(), h + 1);
                if case == CaseFlag::I {
                    assert!(h21.kappa0.is_some());
                }
            }
        }
    }
}
