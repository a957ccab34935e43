//! Shared test tooling: seeded construction of valid mixed Hodge structures
//! from a randomly chosen bigrading (the build-from-splitting oracle), with
//! optional unipotent deformation away from the split case.

use std::collections::BTreeMap;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use clemens::exact::{matrix, ExactMatrix, GaussRat, Subspace};
use clemens::mhs::MixedHodgeStructure;

pub struct RandomMhs {
    pub mhs: MixedHodgeStructure,
    /// The bigrading the structure was assembled from, already transported
    /// through the scramble. Present only in the split case (no deformation),
    /// where the computed splitting must recover it exactly.
    #[allow(dead_code)] // read by the splitting suite, not by every binary
    pub split_pieces: Option<BTreeMap<(i32, i32), Subspace>>,
}

fn rand_below(rng: &mut ChaCha20Rng, n: u64) -> u64 {
    rng.next_u64() % n
}

fn rand_unimodular(rng: &mut ChaCha20Rng, n: usize) -> ExactMatrix {
    let mut lower = ExactMatrix::identity(n);
    let mut upper = ExactMatrix::identity(n);
    for r in 0..n {
        for c in 0..n {
            if r == c || rand_below(rng, 4) != 0 {
                continue;
            }
            let v = GaussRat::from_int(if rand_below(rng, 2) == 0 { 1 } else { -1 });
            if r > c {
                lower.set(r, c, v);
            } else {
                upper.set(r, c, v);
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rand_below(rng, (i + 1) as u64) as usize);
    }
    let mut p = ExactMatrix::zero(n, n);
    for (r, &c) in perm.iter().enumerate() {
        p.set(r, c, GaussRat::one());
    }
    p.mul(&lower).mul(&upper)
}

/// Build a valid mixed Hodge structure of dimension ≤ 12 with several
/// weights. `deform = true` pushes F off the split position by a unipotent
/// map lowering both Hodge indices, which leaves all validity axioms intact.
pub fn random_mhs(seed: u64, deform: bool) -> RandomMhs {
    let mut s = [0u8; 32];
    s[..8].copy_from_slice(&seed.to_le_bytes());
    s[8] = if deform { 0xDF } else { 0x50 };
    let mut rng = ChaCha20Rng::from_seed(s);

    // Random conjugation-symmetric piece dimensions over a weight window.
    let wmin = 1 + rand_below(&mut rng, 2) as i32;
    let wmax = wmin + 1 + rand_below(&mut rng, 2) as i32;
    let mut dims: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    let mut total = 0usize;
    for k in wmin..=wmax {
        for p in 0.max(k - 3)..=k.min(3) {
            let q = k - p;
            if p > q {
                continue; // decided together with the mirror piece
            }
            let d = rand_below(&mut rng, 3) as usize;
            if d == 0 {
                continue;
            }
            let cost = if p == q { d } else { 2 * d };
            if total + cost > 12 {
                continue;
            }
            total += cost;
            dims.insert((p, q), d);
            if p != q {
                dims.insert((q, p), d);
            }
        }
    }
    if total == 0 {
        // ensure a nonempty structure
        dims.insert((1, 1), 1);
        total = 1;
    }
    let n = total;

    // Assign coordinates: conjugate piece pairs get e_a ± i·e_b, diagonal
    // pieces get real unit vectors.
    let mut cursor = 0usize;
    let mut model: BTreeMap<(i32, i32), Vec<Vec<GaussRat>>> = BTreeMap::new();
    let mut keys: Vec<(i32, i32)> = dims.keys().copied().collect();
    keys.sort();
    for &(p, q) in &keys {
        if p > q {
            continue;
        }
        let d = dims[&(p, q)];
        if p == q {
            let vs: Vec<Vec<GaussRat>> = (0..d)
                .map(|j| matrix::unit_vector(n, cursor + j))
                .collect();
            model.insert((p, q), vs);
            cursor += d;
        } else {
            let mut plus = Vec::with_capacity(d);
            let mut minus = Vec::with_capacity(d);
            for j in 0..d {
                let a = cursor + 2 * j;
                let b = a + 1;
                let mut v = matrix::unit_vector(n, a);
                v[b] = GaussRat::i();
                plus.push(v.clone());
                minus.push(matrix::vec_conj(&v));
            }
            model.insert((p, q), plus);
            model.insert((q, p), minus);
            cursor += 2 * d;
        }
    }
    assert_eq!(cursor, n);

    // Optional deformation: v ∈ I^{p,q} moves by vectors from pieces with
    // strictly smaller p and q. W is untouched, purity of the graded pieces
    // survives because the correction dies in lower weight.
    let deformed: BTreeMap<(i32, i32), Vec<Vec<GaussRat>>> = if deform {
        model
            .iter()
            .map(|(&(p, q), vs)| {
                let moved = vs
                    .iter()
                    .map(|v| {
                        let mut w = v.clone();
                        for (&(p2, q2), targets) in &model {
                            if p2 < p && q2 < q {
                                for tv in targets {
                                    if rand_below(&mut rng, 2) == 0 {
                                        continue;
                                    }
                                    let c = GaussRat::from_parts(
                                        rand_below(&mut rng, 5) as i64 - 2,
                                        2,
                                        rand_below(&mut rng, 5) as i64 - 2,
                                        3,
                                    );
                                    w = matrix::vec_add(&w, &matrix::vec_scale(tv, &c));
                                }
                            }
                        }
                        w
                    })
                    .collect();
                ((p, q), moved)
            })
            .collect()
    } else {
        model.clone()
    };

    // Rational scramble.
    let e_mat = rand_unimodular(&mut rng, n);
    let map_vs = |vs: &[Vec<GaussRat>]| -> Vec<Vec<GaussRat>> {
        vs.iter().map(|v| e_mat.apply(v)).collect()
    };

    let weight: Vec<Subspace> = (wmin..=wmax)
        .map(|k| {
            let mut gens: Vec<Vec<GaussRat>> = Vec::new();
            for (&(p, q), vs) in &model {
                if p + q <= k {
                    gens.extend(map_vs(vs));
                }
            }
            Subspace::from_vectors(n, &gens)
        })
        .collect();
    let hodge: Vec<Subspace> = (0..=3)
        .map(|r| {
            let mut gens: Vec<Vec<GaussRat>> = Vec::new();
            for (&(p, _), vs) in &deformed {
                if p >= r {
                    gens.extend(map_vs(vs));
                }
            }
            Subspace::from_vectors(n, &gens)
        })
        .collect();

    let mhs = MixedHodgeStructure::new(n, (wmin, wmax), (0, 3), hodge, weight)
        .expect("consistent shapes");

    let split_pieces = if deform {
        None
    } else {
        Some(
            model
                .iter()
                .map(|(&pq, vs)| (pq, Subspace::from_vectors(n, &map_vs(vs))))
                .collect(),
        )
    };

    RandomMhs { mhs, split_pieces }
}
