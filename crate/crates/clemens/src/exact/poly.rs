//! Truncated multivariate polynomials.
//!
//! These model the holomorphic coefficient functions of deformation
//! families near the origin: polynomials in the base coordinates
//! (t_1, …, t_h, ζ) with Gaussian-rational coefficients, truncated at a
//! total-degree cap. Products drop every monomial past the cap, which is
//! exactly the jet arithmetic the estimates need.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gaussian::GaussRat;
use super::rational::Rat;

#[derive(Clone, Serialize, Deserialize)]
struct Term {
    exps: Vec<u32>,
    coeff: GaussRat,
}

/// Polynomial in `vars` variables, truncated at total degree `max_total_degree`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TruncatedPolyRepr", try_from = "TruncatedPolyRepr")]
pub struct TruncatedPoly {
    vars: usize,
    max_total_degree: u32,
    /// Nonzero coefficients only, keyed by exponent vector.
    terms: BTreeMap<Vec<u32>, GaussRat>,
}

/// Wire format: `{vars, max_total_degree, terms: [{exps, coeff}]}`.
#[derive(Serialize, Deserialize)]
struct TruncatedPolyRepr {
    vars: usize,
    max_total_degree: u32,
    terms: Vec<Term>,
}

impl From<TruncatedPoly> for TruncatedPolyRepr {
    fn from(p: TruncatedPoly) -> Self {
        TruncatedPolyRepr {
            vars: p.vars,
            max_total_degree: p.max_total_degree,
            terms: p
                .terms
                .into_iter()
                .map(|(exps, coeff)| Term { exps, coeff })
                .collect(),
        }
    }
}

impl TryFrom<TruncatedPolyRepr> for TruncatedPoly {
    type Error = String;

    fn try_from(r: TruncatedPolyRepr) -> Result<Self, String> {
        let mut p = TruncatedPoly::zero(r.vars, r.max_total_degree);
        for t in r.terms {
            if t.exps.len() != r.vars {
                return Err(format!(
                    "exponent vector length {} does not match variable count {}",
                    t.exps.len(),
                    r.vars
                ));
            }
            if t.exps.iter().sum::<u32>() > r.max_total_degree {
                return Err("term exceeds the declared total-degree cap".into());
            }
            p.add_term(t.exps, t.coeff);
        }
        Ok(p)
    }
}

impl std::fmt::Debug for TruncatedPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c} x^{e:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TruncatedPoly {
    pub fn zero(vars: usize, max_total_degree: u32) -> Self {
        TruncatedPoly {
            vars,
            max_total_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, max_total_degree: u32, c: GaussRat) -> Self {
        let mut p = Self::zero(vars, max_total_degree);
        p.add_term(vec![0; vars], c);
        p
    }

    /// The i-th coordinate variable.
    pub fn var(vars: usize, max_total_degree: u32, i: usize) -> Self {
        assert!(i < vars, "variable index out of range");
        assert!(max_total_degree >= 1, "cap too small for a variable");
        let mut exps = vec![0; vars];
        exps[i] = 1;
        let mut p = Self::zero(vars, max_total_degree);
        p.add_term(exps, GaussRat::one());
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn max_total_degree(&self) -> u32 {
        self.max_total_degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> GaussRat {
        self.terms
            .get(&vec![0; self.vars])
            .cloned()
            .unwrap_or_else(GaussRat::zero)
    }

    /// True when the polynomial has no constant term (vanishes at the origin).
    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: GaussRat) {
        debug_assert_eq!(exps.len(), self.vars);
        if coeff.is_zero() || exps.iter().sum::<u32>() > self.max_total_degree {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Re-truncate (or widen headroom) to a new cap.
    pub fn with_cap(&self, cap: u32) -> Self {
        let mut p = Self::zero(self.vars, cap);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        assert_eq!(self.max_total_degree, rhs.max_total_degree, "cap mismatch");
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedPoly {
            vars: self.vars,
            max_total_degree: self.max_total_degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &GaussRat) -> Self {
        if k.is_zero() {
            return Self::zero(self.vars, self.max_total_degree);
        }
        TruncatedPoly {
            vars: self.vars,
            max_total_degree: self.max_total_degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Truncating product: monomials past the shared cap are dropped.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.max_total_degree, rhs.max_total_degree, "cap mismatch");
        self.mul_capped(rhs, self.max_total_degree)
    }

    /// Product truncated at an explicit cap. With `cap` at least the sum of
    /// the factors' degrees this is the exact polynomial product.
    pub fn mul_capped(&self, rhs: &Self, cap: u32) -> Self {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut p = Self::zero(self.vars, cap);
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &rhs.terms {
                let db: u32 = eb.iter().sum();
                if da + db > cap {
                    continue;
                }
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(exps, ca * cb);
            }
        }
        p
    }

    /// Entry-wise conjugation of coefficients. For a point p,
    /// conj(f(p)) = f.conj_coeffs().eval(conj(p)).
    pub fn conj_coeffs(&self) -> Self {
        TruncatedPoly {
            vars: self.vars,
            max_total_degree: self.max_total_degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.conj()))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[GaussRat]) -> GaussRat {
        assert_eq!(point.len(), self.vars, "evaluation point length mismatch");
        let mut acc = GaussRat::zero();
        for (exps, coeff) in &self.terms {
            let mut m = coeff.clone();
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    m = &m * x;
                }
            }
            acc += &m;
        }
        acc
    }

    pub fn terms_iter(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussRat)> {
        self.terms.iter()
    }

    /// Σ over terms of total degree ≥ 1 of (|Re|+|Im|): with every variable
    /// bounded by δ ≤ 1 this majorizes |f − f(0)| / δ on the polydisk.
    pub fn tail_l1(&self) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() >= 1 {
                acc += &c.l1();
            }
        }
        acc
    }

    /// Σ ℓ1(coeff)·δ^deg — a sup-norm bound on the closed polydisk of radius δ.
    pub fn sup_bound(&self, delta: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let d: u32 = e.iter().sum();
            acc += &(&c.l1() * &delta.pow(d));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vars() -> (TruncatedPoly, TruncatedPoly) {
        let t = TruncatedPoly::var(2, 2, 0);
        let z = TruncatedPoly::var(2, 2, 1);
        (t, z)
    }

    #[test]
    fn product_truncates_past_cap() {
        let (t, z) = two_vars();
        let tz = t.mul(&z); // degree 2, survives
        assert!(!tz.is_zero());
        let t2z = tz.mul(&t); // degree 3 > cap: dropped entirely
        assert!(t2z.is_zero());
    }

    #[test]
    fn eval_matches_hand_computation() {
        let (t, z) = two_vars();
        // f = 1 + 2t + 3tz
        let f = TruncatedPoly::constant(2, 2, GaussRat::one())
            .add(&t.scale(&GaussRat::from_int(2)))
            .add(&t.mul(&z).scale(&GaussRat::from_int(3)));
        let p = [GaussRat::from_parts(1, 2, 0, 1), GaussRat::from_parts(1, 3, 0, 1)];
        // 1 + 2*(1/2) + 3*(1/2)*(1/3) = 1 + 1 + 1/2
        assert_eq!(f.eval(&p), GaussRat::from_parts(5, 2, 0, 1));
    }

    #[test]
    fn exact_product_with_raised_cap() {
        let (t, z) = two_vars();
        let f = t.add(&z);
        let g = f.mul_capped(&f, 4);
        assert_eq!(g.max_total_degree(), 4);
        // (t+z)^2 has three terms
        assert_eq!(g.terms_iter().count(), 3);
    }

    #[test]
    fn sup_bound_majorizes() {
        let (t, _) = two_vars();
        let f = TruncatedPoly::constant(2, 2, GaussRat::from_int(3)).add(&t.scale(&GaussRat::from_int(-2)));
        let delta = Rat::new(1, 10);
        // bound = 3 + 2*(1/10)
        assert_eq!(f.sup_bound(&delta), Rat::new(16, 5));
        assert_eq!(f.tail_l1(), Rat::from_int(2));
    }

    #[test]
    fn serde_term_list() {
        let (t, z) = two_vars();
        let f = t.mul(&z).scale(&GaussRat::from_parts(1, 2, 1, 1));
        let s = serde_json::to_string(&f).unwrap();
        let back: TruncatedPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
