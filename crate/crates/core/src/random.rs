//! Seeded generators for test populations: Haar-like unitaries and
//! contractions with a prescribed number of unit singular values.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::contraction::{cnu_split, CONTRACTION_TOL};
use crate::linalg::{c, CMat};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Unitary from the QR factorization of a Gaussian matrix, with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let qr = gaussian(n, n, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
    q
}

/// `U diag(1,…,1, σ…) V*` with `units` unit singular values and the others
/// drawn from `[0, sigma_max]`.
pub fn contraction_with_units<R: Rng + ?Sized>(n: usize, units: usize, sigma_max: f64, rng: &mut R) -> CMat {
    let u = unitary(n, rng);
    let v = unitary(n, rng);
    let mut s = CMat::zeros(n, n);
    for k in 0..n {
        s[(k, k)] = c(if k < units { 1.0 } else { rng.random_range(0.0..=sigma_max) }, 0.0);
    }
    u * s * v.adjoint()
}

/// A completely non-unitary contraction with `0 ≤ dim 𝕂 ≤ n - 1` and the
/// remaining singular values in `[0, 0.9]`.
pub fn cnu_contraction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    loop {
        let units = rng.random_range(0..n.max(1));
        let t = contraction_with_units(n, units, 0.9, rng);
        if matches!(cnu_split(&t, CONTRACTION_TOL), Ok((u, _)) if u.rank() == 0) {
            return t;
        }
    }
}

/// A strict contraction `n₋ × n₊` with norm at most `norm`.
pub fn strict_contraction<R: Rng + ?Sized>(rows: usize, cols: usize, norm: f64, rng: &mut R) -> CMat {
    let g = gaussian(rows, cols, rng);
    let s = crate::linalg::spectral_norm(&g);
    if s == 0.0 {
        return g;
    }
    let scale: f64 = rng.random_range(0.0..=norm);
    g * c(scale / s, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff, singular_values};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let u = unitary(n, &mut rng);
            assert!(max_abs_diff(&(u.adjoint() * &u), &identity(n)) < 1e-13);
        }
    }

    #[test]
    fn unit_count_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = contraction_with_units(5, 2, 0.9, &mut rng);
        let s = singular_values(&t);
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
        assert!(s[2] <= 0.9 + 1e-12);
    }

    #[test]
    fn cnu_population_is_cnu() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..6 {
            let t = cnu_contraction(n, &mut rng);
            assert_eq!(cnu_split(&t, CONTRACTION_TOL).unwrap().0.rank(), 0);
        }
    }
}
