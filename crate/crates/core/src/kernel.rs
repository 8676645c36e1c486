//! The four-block reproducing kernel of a Schur function and its Gram
//! matrices over sample grids.
//!
//! For `p` with coordinate `λ` and `q` with coordinate `μ`:
//!
//! | `p`  | `q`  | `𝒦(p, q)`                                  |
//! |------|------|--------------------------------------------|
//! | `𝔻₊` | `𝔻₊` | `(I - B(λ)B(μ)*) / (1 - λμ̄)`              |
//! | `𝔻₋` | `𝔻₋` | `(I - B(λ̄)*B(μ̄)) / (1 - λμ̄)`             |
//! | `𝔻₊` | `𝔻₋` | `(B(λ) - B(μ̄)) / (λ - μ̄)`                 |
//! | `𝔻₋` | `𝔻₊` | `(B(λ̄)* - B(μ)*) / (λ - μ̄)`               |
//!
//! Blocks at `𝔻₊` points have size `n₋`, at `𝔻₋` points size `n₊`.

use num_complex::Complex64;

use crate::contraction::{evaluation_frame, BoundaryQuadruple, ContractionAnalysis};
use crate::disc::{Disc, DiscPoint};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, hstack, identity, max_abs_diff, solve, CMat};
use crate::symplectic::SymplecticSpace;

pub use crate::disc::GridConfig;
pub use crate::schur::{SampledSchur, SchurFunction, SchurRealization};

/// Below this `|λ - μ̄|` a cross-disc block uses the derivative.
pub const CONFLUENT_TOL: f64 = 1e-6;
/// Below this `|λ - μ̄|` a sampled evaluator cannot produce a cross block.
pub const SAMPLED_CONFLUENT_TOL: f64 = 1e-12;
/// Gram eigenvalues above `GRAM_RANK_TOL · λ_max` count toward the rank.
pub const GRAM_RANK_TOL: f64 = 1e-10;

fn fiber_dim(b: &dyn SchurFunction, p: &DiscPoint) -> usize {
    match p.disc() {
        Disc::Plus => b.n_minus(),
        Disc::Minus => b.n_plus(),
    }
}

fn cross_derivative(b: &dyn SchurFunction, at: Complex64) -> Result<CMat> {
    b.derivative(at).unwrap_or(Err(Error::ConfluentUnsupported))
}

/// `𝒦(p, q)` from the case table. Cross-disc pairs with `λ = μ̄` take the
/// derivative limit, which needs [`SchurFunction::derivative`].
pub fn kernel_block(b: &dyn SchurFunction, p: &DiscPoint, q: &DiscPoint) -> Result<CMat> {
    let (l, m) = (p.coord(), q.coord());
    let one = Complex64::new(1.0, 0.0);
    match (p.disc(), q.disc()) {
        (Disc::Plus, Disc::Plus) => {
            let (bl, bm) = (b.eval(l)?, b.eval(m)?);
            Ok((identity(b.n_minus()) - bl * bm.adjoint()) / (one - l * m.conj()))
        }
        (Disc::Minus, Disc::Minus) => {
            let (bl, bm) = (b.eval(l.conj())?, b.eval(m.conj())?);
            Ok((identity(b.n_plus()) - bl.adjoint() * bm) / (one - l * m.conj()))
        }
        (Disc::Plus, Disc::Minus) => {
            let gap = (l - m.conj()).norm();
            if gap < CONFLUENT_TOL {
                let sampled = b.derivative(l).is_none();
                if sampled && gap >= SAMPLED_CONFLUENT_TOL {
                    return Ok((b.eval(l)? - b.eval(m.conj())?) / (l - m.conj()));
                }
                return cross_derivative(b, (l + m.conj()) * 0.5);
            }
            Ok((b.eval(l)? - b.eval(m.conj())?) / (l - m.conj()))
        }
        (Disc::Minus, Disc::Plus) => {
            let gap = (l - m.conj()).norm();
            if gap < CONFLUENT_TOL {
                let sampled = b.derivative(m).is_none();
                if sampled && gap >= SAMPLED_CONFLUENT_TOL {
                    return Ok((b.eval(l.conj())?.adjoint() - b.eval(m)?.adjoint()) / (l - m.conj()));
                }
                return cross_derivative(b, (l.conj() + m) * 0.5).map(|d| d.adjoint());
            }
            Ok((b.eval(l.conj())?.adjoint() - b.eval(m)?.adjoint()) / (l - m.conj()))
        }
    }
}

/// `𝒦(p, q) = ξ(p)*ξ(q)` from the defect fibers of a contraction, where
/// `ξ(p) = φ∓(λ̄)` is the evaluation frame.
pub fn kernel_oracle_fibers(
    an: &ContractionAnalysis,
    quad: &BoundaryQuadruple,
    p: &DiscPoint,
    q: &DiscPoint,
) -> Result<CMat> {
    Ok(evaluation_frame(an, quad, p)?.adjoint() * evaluation_frame(an, quad, q)?)
}

/// Frame of the Nevanlinna-disc subspace attached to `p` in standard
/// coordinates: `[B(λ)*; I]` on `𝔻₊`, `[I; B(λ̄)]` on `𝔻₋`.
fn disc_frame(b: &dyn SchurFunction, p: &DiscPoint) -> Result<CMat> {
    match p.disc() {
        Disc::Plus => {
            let bl = b.eval(p.coord())?;
            Ok(crate::linalg::vstack(&[&bl.adjoint(), &identity(b.n_minus())]))
        }
        Disc::Minus => {
            let bl = b.eval(p.coord().conj())?;
            Ok(crate::linalg::vstack(&[&identity(b.n_plus()), &bl]))
        }
    }
}

/// `𝒬(p, q)`: decompose the frame at `q` along `F_p ⊕ F_p̄`, keep the
/// `F_p` part and pair it against `F_p` with the definite inner product of
/// that subspace.
pub fn projection_q(b: &dyn SchurFunction, p: &DiscPoint, q: &DiscPoint) -> Result<CMat> {
    let space = SymplecticSpace::standard(b.n_plus(), b.n_minus())?;
    let gp = disc_frame(b, p)?;
    let gpbar = disc_frame(b, &p.mirror())?;
    let gq = disc_frame(b, q)?;
    let coeffs = solve(&hstack(&[&gp, &gpbar]), &gq, "F_p ⊕ F_p̄ decomposition")?;
    let y = coeffs.rows(0, gp.ncols()).into_owned();
    let s = match p.disc() {
        Disc::Plus => Complex64::new(0.0, 1.0),
        Disc::Minus => Complex64::new(0.0, -1.0),
    };
    Ok(gp.adjoint() * space.form() * &gp * y * s)
}

/// `𝒦(p, q)` from [`projection_q`], independently of the case table.
pub fn kernel_oracle_projection(b: &dyn SchurFunction, p: &DiscPoint, q: &DiscPoint) -> Result<CMat> {
    let (l, m) = (p.coord(), q.coord());
    let qm = projection_q(b, p, q)?;
    if p.disc() == q.disc() {
        Ok(qm / (Complex64::new(1.0, 0.0) - l * m.conj()))
    } else {
        let gap = l - m.conj();
        if gap.norm() < SAMPLED_CONFLUENT_TOL {
            return Err(Error::ConfluentUnsupported);
        }
        Ok(-qm / gap)
    }
}

pub enum KernelSource<'a> {
    Contraction { analysis: &'a ContractionAnalysis, quadruple: &'a BoundaryQuadruple },
    Schur(&'a dyn SchurFunction),
}

/// Kernel block computed without the case table.
pub fn kernel_oracle(source: &KernelSource<'_>, p: &DiscPoint, q: &DiscPoint) -> Result<CMat> {
    match source {
        KernelSource::Contraction { analysis, quadruple } => kernel_oracle_fibers(analysis, quadruple, p, q),
        KernelSource::Schur(b) => kernel_oracle_projection(*b, p, q),
    }
}

#[derive(Debug, Clone)]
pub struct GramMatrix {
    grid: Vec<DiscPoint>,
    matrix: CMat,
    fiber_dims: Vec<usize>,
    offsets: Vec<usize>,
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
}

impl GramMatrix {
    /// Assembles `[𝒦(pᵢ, pⱼ)]` from any block function.
    pub fn from_blocks(
        grid: &[DiscPoint],
        fiber_dims: Vec<usize>,
        mut block: impl FnMut(&DiscPoint, &DiscPoint) -> Result<CMat>,
    ) -> Result<GramMatrix> {
        if grid.is_empty() {
            return Err(Error::Precondition("empty grid".into()));
        }
        if fiber_dims.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: fiber_dims.len() });
        }
        let mut offsets = Vec::with_capacity(grid.len());
        let mut total = 0;
        for &d in &fiber_dims {
            offsets.push(total);
            total += d;
        }
        let mut g = CMat::zeros(total, total);
        for (i, p) in grid.iter().enumerate() {
            for (j, q) in grid.iter().enumerate() {
                let blk = block(p, q)?;
                if blk.shape() != (fiber_dims[i], fiber_dims[j]) {
                    return Err(Error::DimensionMismatch { expected: fiber_dims[i], found: blk.nrows() });
                }
                g.view_mut((offsets[i], offsets[j]), blk.shape()).copy_from(&blk);
            }
        }
        let defect = max_abs_diff(&g, &g.adjoint());
        if defect > 1e-10 * (1.0 + g.iter().fold(0.0f64, |a, z| a.max(z.norm()))) {
            return Err(Error::NotHermitian { defect });
        }
        let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        let (eigenvalues, eigenvectors) = hermitian_eigen(&g);
        Ok(GramMatrix { grid: grid.to_vec(), matrix: g, fiber_dims, offsets, eigenvalues, eigenvectors })
    }

    pub fn grid(&self) -> &[DiscPoint] {
        &self.grid
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn fiber_dims(&self) -> &[usize] {
        &self.fiber_dims
    }

    /// Row offset of each grid point's block.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    pub fn norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |a, &x| a.max(x.abs()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// `min eig ≥ -tol · ‖G‖`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * self.norm()
    }

    pub fn rank(&self) -> usize {
        self.rank_with(GRAM_RANK_TOL)
    }

    pub fn rank_with(&self, rel_tol: f64) -> usize {
        let top = self.norm();
        if top == 0.0 {
            return 0;
        }
        self.eigenvalues.iter().filter(|&&x| x > rel_tol * top).count()
    }

    /// Indices of the retained eigenpairs, largest first.
    pub fn retained(&self, rel_tol: f64) -> Vec<usize> {
        let top = self.norm();
        (0..self.eigenvalues.len()).rev().filter(|&k| top > 0.0 && self.eigenvalues[k] > rel_tol * top).collect()
    }
}

/// Numerical rank of the Gram matrix of `b` over `grid`, without keeping
/// eigenvectors.
pub fn gram_rank(b: &dyn SchurFunction, grid: &[DiscPoint], rel_tol: f64) -> Result<usize> {
    let dims: Vec<usize> = grid.iter().map(|p| fiber_dim(b, p)).collect();
    let total: usize = dims.iter().sum();
    let mut g = CMat::zeros(total, total);
    let mut oi = 0;
    for (p, &di) in grid.iter().zip(&dims) {
        let mut oj = 0;
        for (q, &dj) in grid.iter().zip(&dims) {
            g.view_mut((oi, oj), (di, dj)).copy_from(&kernel_block(b, p, q)?);
            oj += dj;
        }
        oi += di;
    }
    let vals = hermitian_eigenvalues(&g);
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    Ok(vals.iter().filter(|&&x| top > 0.0 && x > rel_tol * top).count())
}

/// Gram matrix of the kernel of `b` over `grid`.
pub fn gram_assemble(b: &dyn SchurFunction, grid: &[DiscPoint]) -> Result<GramMatrix> {
    let dims = grid.iter().map(|p| fiber_dim(b, p)).collect();
    GramMatrix::from_blocks(grid, dims, |p, q| kernel_block(b, p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff, re};

    fn pts() -> Vec<DiscPoint> {
        vec![
            DiscPoint::plus(c(0.3, 0.1)).unwrap(),
            DiscPoint::plus(c(-0.2, 0.5)).unwrap(),
            DiscPoint::minus(c(0.1, -0.6)).unwrap(),
            DiscPoint::minus(c(0.4, 0.2)).unwrap(),
        ]
    }

    #[test]
    fn identity_symbol_has_unit_kernel() {
        let b = SchurRealization::monomial(1, 1);
        for p in pts() {
            for q in pts() {
                assert!((kernel_block(&b, &p, &q).unwrap()[(0, 0)] - re(1.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn square_symbol() {
        let b = SchurRealization::monomial(2, 1);
        let p = DiscPoint::plus(c(0.3, 0.1)).unwrap();
        let q = DiscPoint::plus(c(-0.2, 0.5)).unwrap();
        let expect = re(1.0) + p.coord() * q.coord().conj();
        assert!((kernel_block(&b, &p, &q).unwrap()[(0, 0)] - expect).norm() < 1e-14);
        let q = DiscPoint::minus(c(-0.2, 0.5)).unwrap();
        let expect = p.coord() + q.coord().conj();
        assert!((kernel_block(&b, &p, &q).unwrap()[(0, 0)] - expect).norm() < 1e-14);
        let conf = p.mirror();
        assert!((kernel_block(&b, &p, &conf).unwrap()[(0, 0)] - p.coord() * 2.0).norm() < 1e-14);
        assert!((kernel_block(&b, &conf, &p).unwrap()[(0, 0)] - (p.coord() * 2.0).conj()).norm() < 1e-14);
    }

    #[test]
    fn sampled_confluent_is_rejected() {
        let s = SampledSchur::new(1, 1, |z: Complex64| Ok(CMat::from_element(1, 1, z * z)));
        let p = DiscPoint::plus(c(0.3, 0.1)).unwrap();
        assert_eq!(kernel_block(&s, &p, &p.mirror()).unwrap_err(), Error::ConfluentUnsupported);
        assert!(kernel_block(&s, &p, &DiscPoint::minus(c(0.2, 0.4)).unwrap()).is_ok());
    }

    #[test]
    fn projection_route_matches_table() {
        let b = SchurRealization::monomial(2, 1);
        for p in pts() {
            for q in pts() {
                let k = kernel_block(&b, &p, &q).unwrap();
                let o = kernel_oracle_projection(&b, &p, &q).unwrap();
                assert!(max_abs_diff(&k, &o) < 1e-12, "{p} {q}");
            }
        }
    }

    #[test]
    fn q_vanishes_at_mirror() {
        let b = SchurRealization::monomial(2, 1);
        let mu = DiscPoint::plus(c(0.2, -0.3)).unwrap();
        assert!(projection_q(&b, &mu.mirror(), &mu).unwrap().norm() < 1e-14);
    }

    #[test]
    fn gram_examples() {
        let grid = GridConfig::default().build().unwrap();
        let g = gram_assemble(&SchurRealization::monomial(1, 1), &grid).unwrap();
        assert!(g.matrix().iter().all(|z| (z - re(1.0)).norm() < 1e-13));
        assert_eq!(g.rank(), 1);
        let g = gram_assemble(&SchurRealization::monomial(2, 1), &grid[..10]).unwrap();
        assert_eq!(g.rank(), 2);
        let zero = SchurRealization::constant(CMat::zeros(1, 1));
        let plus: Vec<DiscPoint> = grid.iter().copied().filter(|p| p.is_plus()).collect();
        let g = gram_assemble(&zero, &plus).unwrap();
        assert!(g.is_psd(1e-12));
        let (a, b) = (plus[3].coord(), plus[5].coord());
        assert!((g.matrix()[(3, 5)] - re(1.0) / (re(1.0) - a * b.conj())).norm() < 1e-14);
    }
}
