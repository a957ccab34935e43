//! Verified arithmetic on intervals with exact rational endpoints.
//!
//! Ring operations on such intervals need no rounding at all, so the only
//! approximation anywhere is in the series enclosures for π and log. Those
//! carry explicit tail bounds, which keeps every certified verdict sound:
//! a sign decision is made only when the whole interval is on one side.

use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::One;

use super::gaussian::GaussRat;
use super::rational::Rat;

/// Closed interval [lo, hi] with rational endpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl std::fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_decimal(8), self.hi.to_decimal(8))
    }
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(r: Rat) -> Self {
        RatInterval { lo: r.clone(), hi: r }
    }

    pub fn zero() -> Self {
        Self::point(Rat::zero())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        &(&self.lo + &self.hi) * &Rat::new(1, 2)
    }

    /// Half the width; the enclosure is midpoint ± radius.
    pub fn radius(&self) -> Rat {
        &self.width() * &Rat::new(1, 2)
    }

    pub fn contains(&self, r: &Rat) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RatInterval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        RatInterval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let cands = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        RatInterval::new(lo, hi)
    }

    pub fn sqr(&self) -> Self {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let hi = if a > b { a.clone() } else { b.clone() };
        let lo = if self.contains_zero() {
            Rat::zero()
        } else if a < b {
            a
        } else {
            b
        };
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_negative() {
            RatInterval::new(&self.hi * k, &self.lo * k)
        } else {
            RatInterval::new(&self.lo * k, &self.hi * k)
        }
    }

    /// Reciprocal; panics if the interval contains zero.
    pub fn recip(&self) -> Self {
        assert!(!self.contains_zero(), "reciprocal of interval containing zero");
        RatInterval::new(self.hi.recip(), self.lo.recip())
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.recip())
    }

    /// Smallest interval containing both.
    pub fn hull(&self, rhs: &Self) -> Self {
        RatInterval::new(
            self.lo.clone().min(rhs.lo.clone()),
            self.hi.clone().max(rhs.hi.clone()),
        )
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }
}

/// Axis-aligned rectangle enclosing a complex value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: RatInterval,
    pub im: RatInterval,
}

impl ComplexBox {
    pub fn point(z: &GaussRat) -> Self {
        ComplexBox {
            re: RatInterval::point(z.re.clone()),
            im: RatInterval::point(z.im.clone()),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ComplexBox {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        ComplexBox {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn mul_point(&self, z: &GaussRat) -> Self {
        self.mul(&ComplexBox::point(z))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// The box provably excludes the origin.
    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// Enclosure of |z|².
    pub fn norm_sqr(&self) -> RatInterval {
        self.re.sqr().add(&self.im.sqr())
    }
}

fn pow2_inv(bits: u32) -> Rat {
    Rat::from_big(BigInt::one(), BigInt::from(2u32).pow(bits))
}

/// arctan(1/n) for integer n ≥ 2, enclosed by consecutive partial sums of the
/// alternating series Σ (−1)^k / ((2k+1) n^(2k+1)).
fn atan_recip(n: u64, bits: u32) -> RatInterval {
    let tol = pow2_inv(bits + 2);
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut power = n.clone(); // n^(2k+1)
    let mut k = 0u32;
    let mut sum = Rat::zero();
    let mut lo = Rat::zero();
    let mut hi = Rat::zero();
    loop {
        let term = Rat::from_big(BigInt::one(), &power * BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            sum = &sum + &term;
        } else {
            sum = &sum - &term;
        }
        // Alternating with decreasing terms: the limit is between
        // consecutive partial sums.
        if k % 2 == 0 {
            hi = sum.clone();
        } else {
            lo = sum.clone();
        }
        if term < tol && k >= 1 {
            break;
        }
        power = &power * &n2;
        k += 1;
    }
    RatInterval::new(lo, hi)
}

static PI_CACHE: std::sync::Mutex<Option<(u32, RatInterval)>> = std::sync::Mutex::new(None);
static LN2_CACHE: std::sync::Mutex<Option<(u32, RatInterval)>> = std::sync::Mutex::new(None);

/// Enclosure of π via Machin's formula π = 16 arctan(1/5) − 4 arctan(1/239).
/// Cached: a higher-precision enclosure serves every lower-precision request.
pub fn pi_interval(bits: u32) -> RatInterval {
    let mut cache = PI_CACHE.lock().expect("poisoned");
    if let Some((b, v)) = cache.as_ref() {
        if *b >= bits {
            return v.clone();
        }
    }
    let target = bits.max(192);
    let a = atan_recip(5, target + 6);
    let b = atan_recip(239, target + 6);
    let v = a.scale(&Rat::from_int(16)).sub(&b.scale(&Rat::from_int(4)));
    *cache = Some((target, v.clone()));
    v
}

/// atanh(u) for rational 0 ≤ u < 1/2, via Σ u^(2k+1)/(2k+1) with a geometric
/// tail bound. The partial sum is accumulated over a single power-of-u
/// denominator in integer arithmetic — one rational reduction at the end
/// instead of a gcd per term.
fn atanh_small(u: &Rat, bits: u32) -> RatInterval {
    assert!(!u.is_negative() && u < &Rat::new(1, 2), "atanh argument out of range");
    if u.is_zero() {
        return RatInterval::zero();
    }
    let tol = pow2_inv(bits + 2);
    let u2 = u * u;

    // number of terms: the k-th term is ≤ u^(2k+1), and the tail after K
    // terms is ≤ u^(2K+3)/(1−u²) ≤ 2·u^(2K+3) for u ≤ 1/2.
    let mut terms = 1usize;
    let mut bound = u.clone();
    while &(&bound * &u2) * &Rat::from_int(2) >= tol {
        bound = &bound * &u2;
        terms += 1;
    }

    let p = u.numer().clone();
    let q = u.denom().clone();
    let p2 = &p * &p;
    let q2 = &q * &q;
    // denominator scale: q^(2K+1) · lcm(1, 3, …, 2K+1)
    let mut odd_lcm = BigInt::one();
    for k in 0..terms {
        odd_lcm = num_integer::Integer::lcm(&odd_lcm, &BigInt::from(2 * k as u64 + 1));
    }
    // numerator: Σ p^(2k+1) · q^(2(K−k)) · odd_lcm/(2k+1)
    let mut num = BigInt::from(0u32);
    let mut p_pow = p.clone(); // p^(2k+1)
    let mut q_pow = {
        // q^(2(K−1)) for k = 0
        let mut acc = BigInt::one();
        for _ in 0..terms - 1 {
            acc = &acc * &q2;
        }
        acc
    };
    for k in 0..terms {
        let weight = &odd_lcm / &BigInt::from(2 * k as u64 + 1);
        num += &p_pow * &q_pow * weight;
        if k + 1 < terms {
            p_pow = &p_pow * &p2;
            q_pow = &q_pow / &q2;
        }
    }
    let mut den = odd_lcm;
    for _ in 0..terms {
        den = &den * &q2;
    }
    den = &den / &q; // q^(2K+1) overall
    let sum = Rat::from_big(num, den);

    let tail = &(&bound * &u2) * &Rat::from_int(2);
    RatInterval::new(sum.clone(), &sum + &tail)
}

/// Enclosure of ln 2 = 2 atanh(1/3). Cached like [`pi_interval`].
pub fn ln2_interval(bits: u32) -> RatInterval {
    let mut cache = LN2_CACHE.lock().expect("poisoned");
    if let Some((b, v)) = cache.as_ref() {
        if *b >= bits {
            return v.clone();
        }
    }
    let target = bits.max(192);
    let v = atanh_small(&Rat::new(1, 3), target + 2).scale(&Rat::from_int(2));
    *cache = Some((target, v.clone()));
    v
}

/// Enclosure of ln x for rational x > 0: reduce to x = m·2^e with m ∈ [1, 2),
/// then ln m = 2 atanh((m−1)/(m+1)) with (m−1)/(m+1) ∈ [0, 1/3).
/// The power-of-two exponent is read off the bit lengths, so extremely small
/// or large inputs (ζ-values near a deep degeneration) cost nothing extra.
pub fn ln_interval(x: &Rat, bits: u32) -> RatInterval {
    assert!(x.is_positive(), "log of non-positive value");
    let two = Rat::from_int(2);
    // numerator/denominator bit lengths put x/2^e into [1/2, 2).
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = if e >= 0 {
        Rat::from_big(x.numer().clone(), x.denom() << e as u64)
    } else {
        Rat::from_big(x.numer() << (-e) as u64, x.denom().clone())
    };
    if m < Rat::one() {
        m = &m * &two;
        e -= 1;
    }
    debug_assert!(m >= Rat::one() && m < two);
    // Widen the ln 2 enclosure enough that |e|·width stays below target.
    let extra = 64 - i64::from(e.unsigned_abs().leading_zeros());
    let ln2 = ln2_interval(bits + extra.max(0) as u32 + 2);
    let u = &(&m - &Rat::one()) / &(&m + &Rat::one());
    let lnm = atanh_small(&u, bits + 2).scale(&two);
    lnm.add(&ln2.scale(&Rat::from_int(e)))
}

/// Enclosure of Im z = −(1/4π)·ln |ζ|² from the exact rational |ζ|².
/// Requires 0 < |ζ|² < 1 so that Im z > 0.
pub fn imz_from_zeta_norm_sqr(zeta_norm_sqr: &Rat, bits: u32) -> RatInterval {
    assert!(
        zeta_norm_sqr.is_positive() && zeta_norm_sqr < &Rat::one(),
        "|zeta|^2 must lie in (0, 1)"
    );
    let ln = ln_interval(zeta_norm_sqr, bits + 8);
    let pi = pi_interval(bits + 8);
    let denom = pi.scale(&Rat::from_int(4));
    (&ln.div(&denom)).neg()
}
