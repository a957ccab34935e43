//! Seeded construction of deformation families over a valid instance.
//!
//! An F²-family starts from the limit basis and adds random truncated
//! polynomial perturbations vanishing at the origin. An H^{2,1}-family is
//! produced as a function-linear combination of an F²-family — constant
//! part the transition matrix from the F² basis to the H^{2,1} limit basis,
//! higher order random — with the products computed exactly at a doubled
//! degree cap. That makes the section-wise containment v_α(s) ∈ F²_s an
//! exact identity at every base point, which the rank scan relies on.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::exact::{GaussRat, Rat, TruncatedPoly};
use crate::lmhs::LimitingMHS;

use super::{FamilyKind, OrbitError, PerturbationFamily, SectionCoeffs};

fn rng_for(seed: u64, salt: u8) -> ChaCha20Rng {
    let mut s = [0u8; 32];
    s[..8].copy_from_slice(&seed.to_le_bytes());
    s[8] = salt;
    ChaCha20Rng::from_seed(s)
}

fn rand_int(rng: &mut ChaCha20Rng, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

/// Small perturbation coefficient: |numerator| ≤ 2, denominator 8..16.
fn small_coeff(rng: &mut ChaCha20Rng) -> GaussRat {
    GaussRat::new(
        Rat::new(rand_int(rng, -2, 2), rand_int(rng, 8, 16)),
        Rat::new(rand_int(rng, -2, 2), rand_int(rng, 8, 16)),
    )
}

/// Every exponent vector with 1 ≤ total degree ≤ cap over `vars` variables.
fn monomials(vars: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; vars];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, idx: usize, remaining: u32) {
        if idx == current.len() {
            if current.iter().sum::<u32>() >= 1 {
                out.push(current.clone());
            }
            return;
        }
        for d in 0..=remaining {
            current[idx] = d;
            rec(out, current, idx + 1, remaining - d);
        }
        current[idx] = 0;
    }
    rec(&mut out, &mut current, 0, cap);
    out
}

/// Random truncated polynomial vanishing at the origin; roughly half of the
/// candidate monomials appear.
fn perturbation(rng: &mut ChaCha20Rng, vars: usize, cap: u32) -> TruncatedPoly {
    let mut p = TruncatedPoly::zero(vars, cap);
    for exps in monomials(vars, cap) {
        if rng.next_u64() % 2 == 0 {
            continue;
        }
        let mut mono = TruncatedPoly::zero(vars, cap);
        mono = mono.add(&monomial(vars, cap, &exps, small_coeff(rng)));
        p = p.add(&mono);
    }
    p
}

fn monomial(vars: usize, cap: u32, exps: &[u32], coeff: GaussRat) -> TruncatedPoly {
    let mut p = TruncatedPoly::constant(vars, cap, coeff);
    for (i, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            p = p.mul(&TruncatedPoly::var(vars, cap, i));
        }
    }
    p
}

/// Sections frozen at their limit values: all perturbations zero.
pub fn constant_family(
    lmhs: &LimitingMHS,
    kind: FamilyKind,
    degree_cap: u32,
) -> Result<PerturbationFamily, OrbitError> {
    let probe = PerturbationFamily::new(lmhs.clone(), kind, dummy_sections(lmhs, kind, degree_cap)?, degree_cap);
    probe
}

fn dummy_sections(
    lmhs: &LimitingMHS,
    kind: FamilyKind,
    degree_cap: u32,
) -> Result<Vec<SectionCoeffs>, OrbitError> {
    let h = lmhs.h();
    let vars = h + 1;
    let adapted = crate::lmhs::adapted_basis(lmhs)?;
    let f2 = crate::lmhs::f2_basis(lmhs, &adapted)?;
    let limits: Vec<Vec<GaussRat>> = match kind {
        FamilyKind::F2 => f2.u.iter().map(|u| adapted.to_adapted_coords(u)).collect(),
        FamilyKind::H21 => {
            let h21 = crate::lmhs::h21_limit_basis(lmhs, &adapted, &f2)?;
            h21.basis.iter().map(|u| adapted.to_adapted_coords(u)).collect()
        }
    };
    Ok(limits
        .iter()
        .map(|coords| SectionCoeffs {
            a: (0..=h)
                .map(|i| TruncatedPoly::constant(vars, degree_cap, coords[adapted.e_index(i)].clone()))
                .collect(),
            b: (0..=h)
                .map(|i| TruncatedPoly::constant(vars, degree_cap, coords[adapted.f_index(i)].clone()))
                .collect(),
            c: TruncatedPoly::constant(vars, degree_cap, coords[adapted.e_index(h + 1)].clone()),
            d: TruncatedPoly::constant(vars, degree_cap, coords[adapted.f_index(h + 1)].clone()),
        })
        .collect())
}

/// Random F²-family over a valid instance: limit constants plus seeded
/// perturbations vanishing at the origin. Deterministic per seed.
pub fn gen_f2_family(
    lmhs: &LimitingMHS,
    seed: u64,
    degree_cap: u32,
) -> Result<PerturbationFamily, OrbitError> {
    let mut rng = rng_for(seed, 0xF2);
    let h = lmhs.h();
    let vars = h + 1;
    let mut sections = dummy_sections(lmhs, FamilyKind::F2, degree_cap)?;
    for sec in sections.iter_mut() {
        for a in sec.a.iter_mut() {
            *a = a.add(&perturbation(&mut rng, vars, degree_cap));
        }
        for b in sec.b.iter_mut() {
            *b = b.add(&perturbation(&mut rng, vars, degree_cap));
        }
        sec.c = sec.c.add(&perturbation(&mut rng, vars, degree_cap));
        sec.d = sec.d.add(&perturbation(&mut rng, vars, degree_cap));
    }
    PerturbationFamily::new(lmhs.clone(), FamilyKind::F2, sections, degree_cap)
}

/// H^{2,1}-family as a function-linear combination of an F²-family:
/// sections w_α(s) = Σ_β g_{αβ}(t,ζ)·u_β(s) with g(0) the transition matrix
/// to the H^{2,1} limit basis. Products are exact (doubled cap), so
/// w_α(s) ∈ span{u_β(s)} holds identically.
pub fn gen_h21_family(
    f2_family: &PerturbationFamily,
    seed: u64,
) -> Result<PerturbationFamily, OrbitError> {
    f2_family.require_kind(FamilyKind::F2)?;
    let lmhs = f2_family.lmhs().clone();
    let h = lmhs.h();
    let vars = h + 1;
    let cap = f2_family.degree_cap();
    let out_cap = 2 * cap;
    let mut rng = rng_for(seed, 0x21);

    let adapted = f2_family.adapted();
    let f2b = f2_family.f2_basis();
    let h21 = crate::lmhs::h21_limit_basis(&lmhs, adapted, f2b)?;

    // g(0): h+1 rows over h+2 columns expressing the H^{2,1} limit basis in
    // the F² basis. Rows 0..h-1 pick u_{j+1}; the last row is u_{h+1} plus
    // κ₀·u_0 in case I.
    let mut g0 = vec![vec![GaussRat::zero(); h + 2]; h + 1];
    for j in 0..h {
        g0[j][j + 1] = GaussRat::one();
    }
    g0[h][h + 1] = GaussRat::one();
    if let Some(kappa0) = &h21.kappa0 {
        g0[h][0] = kappa0.clone();
    }

    let mut sections = Vec::with_capacity(h + 1);
    for row in &g0 {
        // g_{αβ}(t, ζ) = g0_{αβ} + random perturbation.
        let g_polys: Vec<TruncatedPoly> = row
            .iter()
            .map(|c0| {
                TruncatedPoly::constant(vars, cap, c0.clone())
                    .add(&perturbation(&mut rng, vars, cap))
            })
            .collect();
        let combine = |pick: &dyn Fn(&SectionCoeffs) -> &TruncatedPoly| -> TruncatedPoly {
            let mut acc = TruncatedPoly::zero(vars, out_cap);
            for (g, src) in g_polys.iter().zip(f2_family.sections()) {
                acc = acc.add(&g.mul_capped(pick(src), out_cap));
            }
            acc
        };
        let a = (0..=h)
            .map(|i| combine(&move |s: &SectionCoeffs| &s.a[i]))
            .collect();
        let b = (0..=h)
            .map(|i| combine(&move |s: &SectionCoeffs| &s.b[i]))
            .collect();
        let c = combine(&|s: &SectionCoeffs| &s.c);
        let d = combine(&|s: &SectionCoeffs| &s.d);
        sections.push(SectionCoeffs { a, b, c, d });
    }

    PerturbationFamily::new(lmhs, FamilyKind::H21, sections, out_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmhs::{gen_instance, CaseFlag};

    #[test]
    fn f2_family_constructs_and_is_deterministic() {
        let inst = gen_instance(1, CaseFlag::I, 3);
        let a = gen_f2_family(&inst, 7, 2).unwrap();
        let b = gen_f2_family(&inst, 7, 2).unwrap();
        assert_eq!(a.sections(), b.sections());
        let c = gen_f2_family(&inst, 8, 2).unwrap();
        assert_ne!(a.sections(), c.sections());
    }

    #[test]
    fn h21_family_sections_lie_in_f2_span_pointwise() {
        let inst = gen_instance(2, CaseFlag::I, 5);
        let f2 = gen_f2_family(&inst, 6, 2).unwrap();
        let h21 = gen_h21_family(&f2, 7).unwrap();
        let t = vec![
            GaussRat::from_parts(1, 9, 1, 11),
            GaussRat::from_parts(-1, 13, 0, 1),
        ];
        let zeta = GaussRat::from_parts(1, 17, -1, 19);
        let f2_vals = f2.eval_sections(&t, &zeta).unwrap();
        let h21_vals = h21.eval_sections(&t, &zeta).unwrap();
        // Assemble adapted-coordinate vectors and check span membership.
        let h = inst.h();
        let to_vec = |v: &super::super::SectionValues| {
            let mut coords = vec![GaussRat::zero(); 2 * h + 4];
            for i in 0..=h {
                coords[i] = v.a[i].clone();
                coords[h + 2 + i] = v.b[i].clone();
            }
            coords[h + 1] = v.c.clone();
            coords[2 * h + 3] = v.d.clone();
            coords
        };
        let span = crate::exact::Subspace::from_vectors(
            2 * h + 4,
            &f2_vals.iter().map(to_vec).collect::<Vec<_>>(),
        );
        for w in &h21_vals {
            assert!(span.contains_vec(&to_vec(w)));
        }
    }

    #[test]
    fn monomial_count() {
        // 2 variables, cap 2: t, z, t², tz, z² = 5 monomials of degree ≥ 1.
        assert_eq!(monomials(2, 2).len(), 5);
    }
}
