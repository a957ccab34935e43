//! Seeded point sweeps for the two verification pipelines.
//!
//! Base points are Gaussian-rational coordinates scaled so that |s| < radius
//! holds exactly. Lifts come in the two arithmetic modes: exact rational
//! Im(z) (identity checks, asymptotics) or Im(z) enclosed from |ζ|² (honest
//! pointwise verdicts inside a certified region).

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::exact::{GaussRat, Rat};

use super::{OrbitError, SamplePoint};

/// Random Gaussian-rational base point (t, ζ) with |s| < radius and ζ ≠ 0.
/// Deterministic per seed and index.
pub fn sample_base_points(
    h: usize,
    radius: &Rat,
    count: usize,
    seed: u64,
) -> Vec<(Vec<GaussRat>, GaussRat)> {
    let mut s = [0u8; 32];
    s[..8].copy_from_slice(&seed.to_le_bytes());
    s[8] = 0x5e;
    let mut rng = ChaCha20Rng::from_seed(s);
    // |coord| ≤ radius/(4(h+1))·√2 per coordinate keeps Σ|coord|² < radius².
    let scale = radius * &Rat::new(1, 4 * (h as i64 + 1));
    let mut small = |nonzero: bool| -> GaussRat {
        loop {
            let a = Rat::new((rng.next_u64() % 199) as i64 - 99, 99);
            let b = Rat::new((rng.next_u64() % 199) as i64 - 99, 99);
            let v = GaussRat::new(&a * &scale, &b * &scale);
            if !nonzero || !v.is_zero() {
                return v;
            }
        }
    };
    (0..count)
        .map(|_| {
            let t: Vec<GaussRat> = (0..h).map(|_| small(false)).collect();
            let zeta = small(true);
            (t, zeta)
        })
        .collect()
}

/// Lift base points with the derived-Im(z) mode (interval enclosures from
/// |ζ|²); Re(z) is a deterministic rational in [0, 1).
pub fn lift_from_zeta(
    bases: &[(Vec<GaussRat>, GaussRat)],
    precision_bits: u32,
) -> Result<Vec<SamplePoint>, OrbitError> {
    bases
        .iter()
        .enumerate()
        .map(|(i, (t, zeta))| {
            let re_z = Rat::new((i % 7) as i64, 7);
            SamplePoint::from_zeta(t.clone(), zeta.clone(), re_z, precision_bits)
        })
        .collect()
}

/// Lift base points with exact rational Im(z) values (one point per base per
/// Im(z) value).
pub fn lift_exact(
    bases: &[(Vec<GaussRat>, GaussRat)],
    imz_values: &[Rat],
) -> Result<Vec<SamplePoint>, OrbitError> {
    let mut out = Vec::with_capacity(bases.len() * imz_values.len());
    for (i, (t, zeta)) in bases.iter().enumerate() {
        for y in imz_values {
            let re_z = Rat::new((i % 5) as i64, 5);
            out.push(SamplePoint::exact(t.clone(), zeta.clone(), re_z, y.clone())?);
        }
    }
    Ok(out)
}
