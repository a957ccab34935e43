//! Certified smallness threshold.
//!
//! The existence of δ > 0 making every δ-small smoothing pass both
//! verifications is established here with explicit constants. Each quantity
//! is split into its exact value at the limit point s = 0 plus a polydisk
//! remainder: for a truncated polynomial f and |s| ≤ δ ≤ 1,
//! |f(s) − f(0)| ≤ δ·Σ_{deg ≥ 1} ℓ1(coeff), and determinants are perturbed
//! by at most the difference of column-ℓ1-bound products (a permanent-style
//! estimate). Limit values (the V-block determinant, the y-free part of the
//! wedge determinant, the limit Q-matrix) enter exactly, so the certified
//! Im(z)-floor reflects the instance's real magnitudes rather than stacked
//! worst cases. Re(z) plays no role: both determinant coefficients and the
//! Q-matrix are invariant under z ↦ z+1 and drop Re(z) entirely.

use crate::exact::interval::{ln2_interval, pi_interval};
use crate::exact::{ExactMatrix, GaussRat, Rat, TruncatedPoly};

use super::certificate::{ArithmeticMode, Certificate, RegionSpec, Verdict, WitnessValue};
use super::{FamilyKind, OrbitError, PerturbationFamily};

/// (constant-term ℓ1, tail ℓ1): |f(s)| ≤ c0 + δ·tail for |s| ≤ δ ≤ 1 and
/// |f(s) − f(0)| ≤ δ·tail.
#[derive(Clone, Debug)]
struct PolyBound {
    c0: Rat,
    tail: Rat,
}

impl PolyBound {
    fn of(p: &TruncatedPoly) -> Self {
        PolyBound {
            c0: p.constant_term().l1(),
            tail: p.tail_l1(),
        }
    }

    fn at(&self, delta: &Rat) -> Rat {
        &self.c0 + &(delta * &self.tail)
    }
}

struct SectionBounds {
    a: Vec<PolyBound>,
    b: Vec<PolyBound>,
    c: PolyBound,
    d: PolyBound,
}

fn section_bounds(fam: &PerturbationFamily) -> Vec<SectionBounds> {
    fam.sections()
        .iter()
        .map(|s| SectionBounds {
            a: s.a.iter().map(PolyBound::of).collect(),
            b: s.b.iter().map(PolyBound::of).collect(),
            c: PolyBound::of(&s.c),
            d: PolyBound::of(&s.d),
        })
        .collect()
}

/// Lower bound for |μ| and upper bound for |ν| in det(y) = μ·y + ν of the
/// wedge criterion, uniform over the polydisk |s| ≤ δ. Returns (μ_lo, ν_hi);
/// the criterion is certified wherever μ_lo·y − ν_hi > 0.
pub fn ddbar_bounds(fam: &PerturbationFamily, delta: &Rat) -> Result<(Rat, Rat), OrbitError> {
    fam.require_kind(FamilyKind::F2)?;
    let h = fam.h();
    let k_abs = fam.adapted().k_const.abs();
    let bounds = section_bounds(fam);

    // V-part column bounds (the column of v_α and of conj v_α share them).
    let vcol: Vec<PolyBound> = bounds
        .iter()
        .map(|s| {
            let mut c0 = Rat::zero();
            let mut tail = Rat::zero();
            for i in 0..=h {
                c0 += &(&s.a[i].c0 + &s.b[i].c0);
                tail += &(&s.a[i].tail + &s.b[i].tail);
            }
            PolyBound { c0, tail }
        })
        .collect();

    let w0 = fam
        .limit_vblock()
        .cloned()
        .ok_or_else(|| OrbitError::Internal("F²-family carries no limit V-block".into()))?;
    let w0_lo = w0.re.abs().max(w0.im.abs());

    // |C^{h+1,h+1}(s)| ≥ |W₀| − [Π(c0+δ·t)² − Π c0²] over the V-columns α ≤ h.
    let mut prod_pert = Rat::one();
    let mut prod_const = Rat::one();
    for vb in vcol.iter().take(h + 1) {
        let b = vb.at(delta);
        prod_pert = &prod_pert * &(&b * &b);
        prod_const = &prod_const * &(&vb.c0 * &vb.c0);
    }
    let l_c = &prod_pert - &prod_const;

    // Uniform bound on any complement determinant: product of the 2h+2
    // largest column bounds.
    let mut col_bounds: Vec<Rat> = Vec::with_capacity(2 * h + 4);
    for vb in &vcol {
        let b = vb.at(delta);
        col_bounds.push(b.clone());
        col_bounds.push(b);
    }
    col_bounds.sort();
    col_bounds.reverse();
    let b_max = col_bounds
        .iter()
        .take(2 * h + 2)
        .fold(Rat::one(), |acc, b| &acc * b);

    let b_d: Vec<Rat> = bounds.iter().map(|s| s.d.at(delta)).collect();
    let d_tail = &bounds[h + 1].d.tail;
    let one = Rat::one();
    let d_lo_raw = &one - &(delta * d_tail);
    let d_lo = if d_lo_raw.is_negative() { Rat::zero() } else { d_lo_raw };

    let sd_all = b_d.iter().fold(Rat::zero(), |acc, b| &acc + b);
    let off_pairs = &(&sd_all * &sd_all) - &(&b_d[h + 1] * &b_d[h + 1]);

    let two = Rat::from_int(2);
    let core = &w0_lo - &l_c;
    let core = if core.is_negative() { Rat::zero() } else { core };
    // Every y-term of the determinant carries the factor 2k·D_α·conj(D_β).
    let mu_lo = &k_abs
        * &(&(&(&two * &(&d_lo * &d_lo)) * &core) - &(&(&two * &b_max) * &off_pairs));

    // ν = det(y = 0) is independent of Re(z) (all pair minors cancel the x
    // terms), so it can be evaluated at x = 0: e-row entries are C_α(s).
    // Split ν(s) = ν(0) + [ν(s) − ν(0)]: the first term exactly, the second
    // by the product-difference bound with full-column ℓ1 data.
    let nu0 = limit_full_det(fam);
    let mut prod_full_pert = Rat::one();
    let mut prod_full_const = Rat::one();
    for (alpha, vb) in vcol.iter().enumerate() {
        let full_c0 = &(&vb.c0 + &bounds[alpha].c.c0) + &bounds[alpha].d.c0;
        let full_tail = &(&vb.tail + &bounds[alpha].c.tail) + &bounds[alpha].d.tail;
        let b = &full_c0 + &(delta * &full_tail);
        prod_full_pert = &prod_full_pert * &(&b * &b);
        prod_full_const = &prod_full_const * &(&full_c0 * &full_c0);
    }
    let nu_hi = &nu0.l1() + &(&prod_full_pert - &prod_full_const);

    Ok((mu_lo, nu_hi))
}

/// Exact determinant of the full limit frame {u_α, conj u_α} at y = 0,
/// x = 0 (the x-free value of the wedge determinant at the limit point).
/// Zero in case II: u_{h+1} is then a real vector and two columns coincide.
fn limit_full_det(fam: &PerturbationFamily) -> GaussRat {
    let h = fam.h();
    let n = 2 * h + 4;
    let mut cols: Vec<Vec<GaussRat>> = Vec::with_capacity(n);
    for lim in fam.limits_adapted() {
        cols.push(reorder_rows(lim, h));
        cols.push(reorder_rows(&crate::exact::matrix::vec_conj(lim), h));
    }
    ExactMatrix::from_cols(&cols).det()
}

/// Adapted coordinates → the wedge row order (e_{h+1}, f_{h+1}, e_0, f_0, …).
fn reorder_rows(adapted: &[GaussRat], h: usize) -> Vec<GaussRat> {
    let mut out = Vec::with_capacity(2 * h + 4);
    out.push(adapted[h + 1].clone());
    out.push(adapted[2 * h + 3].clone());
    for i in 0..=h {
        out.push(adapted[i].clone());
        out.push(adapted[h + 2 + i].clone());
    }
    out
}

/// The Hermitian-pipeline constants at radius δ.
struct HrBounds {
    /// 2k·(1 − δ·tail(D_{h+1}))², a floor for the y-coefficient of ρ.
    q1_lo: Rat,
    /// Upper bound for |ρ(s) − 2k·y·|D|²| ... the y-free part of ρ.
    rho_const_hi: Rat,
    /// q1_lo·(λ' − ‖ΔQ'‖): certified y-coefficient floor of ρP's main part.
    lambda_p: Rat,
    /// Row-sum bound for the small y-terms of ρP.
    c_r: Rat,
    /// Row-sum bound for the y-free part of ρP.
    c_s: Rat,
    lambda_prime: Rat,
    delta_q_norm: Rat,
}

fn pairb(bounds: &[SectionBounds], a: usize, b: usize, h: usize, delta: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for i in 0..=h {
        acc += &(&bounds[a].a[i].at(delta) * &bounds[b].b[i].at(delta));
        acc += &(&bounds[a].b[i].at(delta) * &bounds[b].a[i].at(delta));
    }
    acc
}

/// Exact rational lower bound for λ_min of a Hermitian positive definite
/// matrix, by bisection with exact leading-principal-minor tests. None when
/// the matrix is not positive definite.
pub fn lambda_min_lower(q: &ExactMatrix) -> Option<Rat> {
    let n = q.rows();
    if n == 0 {
        return Some(Rat::zero());
    }
    let pd = |shift: &Rat| -> bool {
        let mut m = q.clone();
        for i in 0..n {
            m.set(i, i, m.at(i, i) - &GaussRat::from_rat(shift.clone()));
        }
        (1..=n).all(|k| {
            let d = m.leading(k).det();
            d.is_real() && d.re.is_positive()
        })
    };
    if !pd(&Rat::zero()) {
        return None;
    }
    let mut lo = Rat::zero();
    let mut hi = (0..n)
        .map(|i| q.at(i, i).re.clone())
        .min()
        .expect("n > 0")
        + Rat::one();
    for _ in 0..40 {
        let mid = &(&lo + &hi) * &Rat::new(1, 2);
        if pd(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// The limit Q-matrix at y = 0: q0_ab(0) = Q(u_a, conj u_b) + i(−C_a(0)·conj D_b(0) + D_a(0)·conj C_b(0)).
fn limit_q0(fam: &PerturbationFamily) -> ExactMatrix {
    let h = fam.h();
    let m = h + 1;
    let limits = fam.limits_adapted();
    ExactMatrix::from_fn(m, m, |a, b| {
        let (ua, ub) = (&limits[a], &limits[b]);
        let mut pair = GaussRat::zero();
        for l in 0..=h {
            let (el, fl) = (l, h + 2 + l);
            pair += &(&ua[el] * &ub[fl].conj());
            pair -= &(&ua[fl] * &ub[el].conj());
        }
        let qv = &(-GaussRat::i()) * &pair;
        let (ca, da) = (&ua[h + 1], &ua[2 * h + 3]);
        let (cb, db) = (&ub[h + 1], &ub[2 * h + 3]);
        let cross = &GaussRat::i() * &(&(da * &cb.conj()) - &(ca * &db.conj()));
        &qv + &cross
    })
}

fn hr_bounds(fam: &PerturbationFamily, delta: &Rat) -> Result<HrBounds, OrbitError> {
    fam.require_kind(FamilyKind::H21)?;
    let h = fam.h();
    let m = h + 1;
    let k = fam.adapted().k_const.clone();
    if !k.is_positive() {
        return Err(OrbitError::FamilyTooWild(
            "k < 0 in N f_{h+1} = k e_{h+1}: ρ is negative for large Im(z)".into(),
        ));
    }
    let bounds = section_bounds(fam);
    let last = m - 1;
    let zero = Rat::zero();

    let q0b = |a: usize, b: usize, d: &Rat| -> Rat {
        &pairb(&bounds, a, b, h, d)
            + &(&(&bounds[a].c.at(d) * &bounds[b].d.at(d))
                + &(&bounds[a].d.at(d) * &bounds[b].c.at(d)))
    };

    let q0_limit = limit_q0(fam);

    let one = Rat::one();
    let two = Rat::from_int(2);
    let d_tail = &bounds[last].d.tail;
    let d_lo_raw = &one - &(delta * d_tail);
    let d_lo = if d_lo_raw.is_negative() { Rat::zero() } else { d_lo_raw };
    let d_hi = bounds[last].d.at(delta);
    let q1_lo = &(&two * &k) * &(&d_lo * &d_lo);

    // |q0_hh(s)| ≤ |q0_hh(0)| + [Q0b(δ) − Q0b(0)].
    let rho_const_hi =
        &q0_limit.at(last, last).l1() + &(&q0b(last, last, delta) - &q0b(last, last, &zero));

    if h == 0 {
        return Ok(HrBounds {
            q1_lo,
            rho_const_hi,
            lambda_p: Rat::zero(),
            c_r: Rat::zero(),
            c_s: Rat::zero(),
            lambda_prime: Rat::zero(),
            delta_q_norm: Rat::zero(),
        });
    }

    // Q'₀: the exact limit Gram −i⟨u_i, conj u_j⟩ on the I^{2,1} sections.
    let limits = fam.limits_adapted();
    let qprime = ExactMatrix::from_fn(h, h, |i, j| {
        let (ui, uj) = (&limits[i], &limits[j]);
        let mut pair = GaussRat::zero();
        for l in 0..=h {
            let (el, fl) = (l, h + 2 + l);
            pair += &(&ui[el] * &uj[fl].conj());
            pair -= &(&ui[fl] * &uj[el].conj());
        }
        &(-GaussRat::i()) * &pair
    });
    let lambda_prime = lambda_min_lower(&qprime).ok_or_else(|| {
        OrbitError::FamilyTooWild(
            "the limit form −√−1⟨·, conj ·⟩ on I^{2,1} is not positive definite".into(),
        )
    })?;

    // ‖Q(v'_i, conj v'_j) − Q'_ij‖∞ ≤ max_i Σ_j [pairb(δ) − pairb(0)].
    let mut delta_q_norm = Rat::zero();
    for i in 0..h {
        let mut row = Rat::zero();
        for j in 0..h {
            row += &(&pairb(&bounds, i, j, h, delta) - &pairb(&bounds, i, j, h, &zero));
        }
        delta_q_norm = delta_q_norm.max(row);
    }

    let gap = &lambda_prime - &delta_q_norm;
    let gap = if gap.is_negative() { Rat::zero() } else { gap };
    let lambda_p = &q1_lo * &gap;

    // Small y-terms of ρP: every term has a factor C_i, D_i, C_j or D_j with
    // zero constant part, so c_r = O(δ); the 2k factor rides along.
    let two_k = &two * &k;
    let mut c_r = Rat::zero();
    for i in 0..h {
        let mut row_r = Rat::zero();
        for j in 0..h {
            let b_ci = bounds[i].c.at(delta);
            let b_di = bounds[i].d.at(delta);
            let b_cj = bounds[j].c.at(delta);
            let b_dj = bounds[j].d.at(delta);
            row_r += &(&(&two_k * &(&d_hi * &d_hi)) * &(&(&b_ci * &b_dj) + &(&b_di * &b_cj)));
            row_r += &(&(&two_k * &q0b(last, last, delta)) * &(&b_di * &b_dj));
            row_r += &(&(&two_k * &(&b_di * &d_hi)) * &q0b(last, j, delta));
            row_r += &(&(&two_k * &(&d_hi * &b_dj)) * &q0b(i, last, delta));
        }
        c_r = c_r.max(row_r);
    }

    // y-free part of ρP: exact at the limit plus a product-difference
    // Lipschitz term.
    let mut rho_s0 = Rat::zero();
    let mut l_s = Rat::zero();
    for i in 0..h {
        let mut row0 = Rat::zero();
        let mut row_lip = Rat::zero();
        for j in 0..h {
            let s0 = &(q0_limit.at(last, last) * q0_limit.at(i, j))
                - &(q0_limit.at(i, last) * q0_limit.at(last, j));
            row0 += &s0.l1();
            row_lip += &(&(&q0b(last, last, delta) * &q0b(i, j, delta))
                - &(&q0b(last, last, &zero) * &q0b(i, j, &zero)));
            row_lip += &(&(&q0b(i, last, delta) * &q0b(last, j, delta))
                - &(&q0b(i, last, &zero) * &q0b(last, j, &zero)));
        }
        rho_s0 = rho_s0.max(row0);
        l_s = l_s.max(row_lip);
    }
    let c_s = &rho_s0 + &l_s;

    Ok(HrBounds {
        q1_lo,
        rho_const_hi,
        lambda_p,
        c_r,
        c_s,
        lambda_prime,
        delta_q_norm,
    })
}

/// The certified threshold: δ and Im(z)₀ such that at every base point with
/// |s| < δ (hence Im z > Im(z)₀), the wedge determinant is nonzero, ρ > 0,
/// and P ≻ 0.
#[derive(Clone, Debug)]
pub struct ThresholdResult {
    pub delta: Rat,
    pub imz_min: Rat,
    /// |det(y)| ≥ mu_lo·y − nu_hi on the region.
    pub mu_lo: Rat,
    pub nu_hi: Rat,
    /// ρ(y) ≥ q1_lo·y − rho_const_hi on the region.
    pub q1_lo: Rat,
    pub rho_const_hi: Rat,
    /// ρP ⪰ [(lambda_p − c_r)·y − c_s]·Id on the region.
    pub lambda_p: Rat,
    pub c_r: Rat,
    pub c_s: Rat,
    pub certificate: Certificate,
}

struct Feasibility {
    mu_lo: Rat,
    nu_hi: Rat,
    hr: HrBounds,
    y_floor: Rat,
    ok: bool,
}

fn check_j(
    f2_family: &PerturbationFamily,
    h21_family: &PerturbationFamily,
    ln2: &crate::exact::RatInterval,
    two_pi: &crate::exact::RatInterval,
    j: u64,
) -> Result<Feasibility, OrbitError> {
    let delta = Rat::from_big(1.into(), num_bigint::BigInt::from(2u32).pow(j as u32));
    let (mu_lo, nu_hi) = ddbar_bounds(f2_family, &delta)?;
    let hr = hr_bounds(h21_family, &delta)?;
    let h = h21_family.h();

    // Y(δ) = −ln δ / 2π = j·ln2 / 2π: certified Im(z)-floor on δ-small points.
    let y_floor = ln2.scale(&Rat::from_int(j as i64)).div(two_pi).lo;

    let ddbar_ok = mu_lo.is_positive() && (&mu_lo * &y_floor) > nu_hi;
    let rho_ok = hr.q1_lo.is_positive() && (&hr.q1_lo * &y_floor) > hr.rho_const_hi;
    let p_coeff = &hr.lambda_p - &hr.c_r;
    let p_ok = h == 0 || (p_coeff.is_positive() && (&p_coeff * &y_floor) > hr.c_s);
    Ok(Feasibility {
        mu_lo,
        nu_hi,
        hr,
        y_floor,
        ok: ddbar_ok && rho_ok && p_ok,
    })
}

pub fn delta_threshold(
    f2_family: &PerturbationFamily,
    h21_family: &PerturbationFamily,
) -> Result<ThresholdResult, OrbitError> {
    f2_family.require_kind(FamilyKind::F2)?;
    h21_family.require_kind(FamilyKind::H21)?;

    let ln2 = ln2_interval(96);
    let two_pi = pi_interval(96).scale(&Rat::from_int(2));

    // Smaller δ only helps (remainders shrink, the Im(z)-floor grows), so
    // feasibility is monotone in j: ride a doubling ladder to a feasible
    // exponent, then bisect down to the first feasible one.
    let mut feasible_j = None;
    let mut j = 1u64;
    while j <= (1 << 16) {
        if check_j(f2_family, h21_family, &ln2, &two_pi, j)?.ok {
            feasible_j = Some(j);
            break;
        }
        j *= 2;
    }
    let Some(mut hi) = feasible_j else {
        return Err(OrbitError::FamilyTooWild(
            "no δ = 2^{-j}, j ≤ 2^16, satisfies the majorization bounds".into(),
        ));
    };
    let mut lo = hi / 2; // infeasible (or 0)
    while hi - lo > 1 && lo > 0 {
        let mid = (lo + hi) / 2;
        if check_j(f2_family, h21_family, &ln2, &two_pi, mid)?.ok {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let feas = check_j(f2_family, h21_family, &ln2, &two_pi, hi)?;
    debug_assert!(feas.ok);
    let delta = Rat::from_big(1.into(), num_bigint::BigInt::from(2u32).pow(hi as u32));

    let mut cert = Certificate::new("threshold", Verdict::Pass, ArithmeticMode::Exact)
        .with_witness("delta", WitnessValue::from_rat(&delta))
        .with_witness("imz_min", WitnessValue::from_rat(&feas.y_floor))
        .with_witness("mu_lo", WitnessValue::from_rat(&feas.mu_lo))
        .with_witness("nu_hi", WitnessValue::from_rat(&feas.nu_hi))
        .with_witness("q1_lo", WitnessValue::from_rat(&feas.hr.q1_lo))
        .with_witness("rho_const_hi", WitnessValue::from_rat(&feas.hr.rho_const_hi))
        .with_witness("lambda_prime", WitnessValue::from_rat(&feas.hr.lambda_prime))
        .with_witness("delta_q_norm", WitnessValue::from_rat(&feas.hr.delta_q_norm))
        .with_witness("lambda_p", WitnessValue::from_rat(&feas.hr.lambda_p))
        .with_witness("c_r", WitnessValue::from_rat(&feas.hr.c_r))
        .with_witness("c_s", WitnessValue::from_rat(&feas.hr.c_s));
    cert.region = Some(RegionSpec {
        delta: delta.clone(),
        imz_min: feas.y_floor.clone(),
        strip_width: Rat::one(),
    });

    Ok(ThresholdResult {
        delta,
        imz_min: feas.y_floor,
        mu_lo: feas.mu_lo,
        nu_hi: feas.nu_hi,
        q1_lo: feas.hr.q1_lo,
        rho_const_hi: feas.hr.rho_const_hi,
        lambda_p: feas.hr.lambda_p,
        c_r: feas.hr.c_r,
        c_s: feas.hr.c_s,
        certificate: cert,
    })
}
