#![allow(dead_code)]

use contraction_models::contraction::{defect_analysis, ContractionAnalysis, CONTRACTION_TOL};
use contraction_models::linalg::{block2, identity, CMat};
use contraction_models::random;
use contraction_models::symplectic::{contraction_block, SymplecticSpace, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cnu_analysis(n: usize, rng: &mut ChaCha8Rng) -> ContractionAnalysis {
    defect_analysis(&random::cnu_contraction(n, rng), CONTRACTION_TOL).unwrap()
}

pub fn jordan() -> CMat {
    let mut t = CMat::zeros(2, 2);
    t[(0, 1)] = 1.0.into();
    t
}

/// Random element of `U(p, q)` in standard coordinates: a boost followed by
/// a block-diagonal unitary.
pub fn pseudo_unitary(p: usize, q: usize, rng: &mut ChaCha8Rng) -> CMat {
    let b = random::strict_contraction(q, p, 0.8, rng);
    let boost = contraction_block(&b).unwrap();
    let rot = block2(&random::unitary(p, rng), &CMat::zeros(p, q), &CMat::zeros(q, p), &random::unitary(q, rng));
    rot * boost
}

/// Random isotropic subspace of `standard(p, q)` of dimension `k ≤ min(p, q)`,
/// moved by a random pseudo-unitary.
pub fn isotropic(p: usize, q: usize, k: usize, rng: &mut ChaCha8Rng) -> Subspace {
    let x = random::unitary(p, rng).columns(0, k).into_owned();
    let y = random::unitary(q, rng).columns(0, k).into_owned();
    let mut frame = CMat::zeros(p + q, k);
    frame.view_mut((0, 0), (p, k)).copy_from(&x);
    frame.view_mut((p, 0), (q, k)).copy_from(&y);
    Subspace::span(&(pseudo_unitary(p, q, rng) * frame))
}

pub fn standard(p: usize, q: usize) -> SymplecticSpace {
    SymplecticSpace::standard(p, q).unwrap()
}

pub fn random_dims(rng: &mut ChaCha8Rng, max: usize) -> (usize, usize) {
    (rng.random_range(1..=max), rng.random_range(1..=max))
}

pub fn id(n: usize) -> CMat {
    identity(n)
}
