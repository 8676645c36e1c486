//! Dense complex linear algebra shared by every module.
//!
//! All subspaces are carried as matrices with Euclidean-orthonormal columns,
//! and every rank decision goes through [`RANK_TOL`] relative to the largest
//! singular value of the operand.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative singular-value cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// Tolerance for subspace equality (largest principal-angle sine).
pub const SUBSPACE_TOL: f64 = 1e-9;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// Thin singular value decomposition `m = U diag(s) V*` with `U` and `V`
/// square unitary and `s` sorted in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

const JACOBI_SWEEPS: usize = 80;

/// One-sided Jacobi on the columns of `a` (at least as many rows as columns).
fn jacobi_columns(a: &CMat) -> (CMat, CMat) {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = identity(n);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let g = w.column(p).dotc(&w.column(q));
                let gabs = g.norm();
                if gabs == 0.0 || gabs <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = g / gabs;
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for m in [&mut w, &mut v] {
                    for i in 0..m.nrows() {
                        let (xp, xq) = (m[(i, p)], m[(i, q)]);
                        m[(i, p)] = xp * cs - xq * phase.conj() * sn;
                        m[(i, q)] = xp * phase * sn + xq * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

/// Extends the given orthonormal columns to an orthonormal basis of the
/// ambient space.
fn complete_basis(cols: &[CVec], dim: usize) -> CMat {
    let mut basis: Vec<CVec> = cols.to_vec();
    for e in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut x = CVec::zeros(dim);
        x[e] = re(1.0);
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&x);
                x -= b * proj;
            }
        }
        let nx = x.norm();
        if nx > 1e-8 {
            basis.push(x / re(nx));
        }
    }
    CMat::from_columns(&basis)
}

fn svd_tall(a: &CMat) -> Svd {
    let (rows, cols) = a.shape();
    let (w, v) = jacobi_columns(a);
    let norms: Vec<f64> = (0..cols).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let smax = norms.iter().copied().fold(0.0, f64::max);
    let floor = smax * 1e-14;
    let mut left = Vec::new();
    for &j in &order {
        if norms[j] > floor && norms[j] > 0.0 {
            left.push(w.column(j) / re(norms[j]));
        }
    }
    let u = complete_basis(&left, rows);
    let mut vs = zeros(cols, cols);
    for (k, &j) in order.iter().enumerate() {
        vs.set_column(k, &v.column(j));
    }
    Svd { u, s: order.iter().map(|&j| norms[j]).collect(), v: vs }
}

/// Singular value decomposition by one-sided Jacobi rotations.
pub fn svd(m: &CMat) -> Svd {
    if m.nrows() >= m.ncols() {
        svd_tall(m)
    } else {
        let t = svd_tall(&m.adjoint());
        Svd { u: t.v, s: t.s, v: t.u }
    }
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd(m).s
}

/// Multiplies each column by a unimodular phase so that its largest-modulus
/// entry is real and positive. Makes frames reproducible across runs.
pub fn normalize_phases(m: &mut CMat) {
    for mut col in m.column_iter_mut() {
        let mut best = Complex64::new(0.0, 0.0);
        for z in col.iter() {
            if z.norm() > best.norm() + 1e-12 {
                best = *z;
            }
        }
        if best.norm() > 0.0 {
            let phase = best.conj() / best.norm();
            col.iter_mut().for_each(|z| *z *= phase);
        }
    }
}

/// Orthonormal basis of the column space of `m`, via the SVD.
pub fn orthonormal_basis(m: &CMat, rel_tol: f64) -> CMat {
    let rows = m.nrows();
    if rows == 0 || m.ncols() == 0 {
        return zeros(rows, 0);
    }
    let d = svd(m);
    let smax = d.s[0];
    if smax == 0.0 {
        return zeros(rows, 0);
    }
    let keep = d.s.iter().filter(|&&x| x > rel_tol * smax).count();
    let mut out = d.u.columns(0, keep).into_owned();
    normalize_phases(&mut out);
    out
}

/// Numerical rank with the relative cutoff `rel_tol`.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&x| x > rel_tol * smax).count(),
        _ => 0,
    }
}

/// Orthonormal basis of the null space of `m`.
///
/// The cutoff is `rel_tol * scale` where `scale` is the largest singular
/// value, or `abs_floor` if that is larger (so a near-zero matrix has a full
/// null space rather than a noisy one).
pub fn null_space(m: &CMat, rel_tol: f64, abs_floor: f64) -> CMat {
    let cols = m.ncols();
    if cols == 0 {
        return zeros(0, 0);
    }
    if m.nrows() == 0 {
        return identity(cols);
    }
    let d = svd(m);
    let smax = d.s.first().copied().unwrap_or(0.0);
    let cutoff = (rel_tol * smax).max(abs_floor);
    let keep: Vec<usize> = (0..cols).filter(|&k| d.s.get(k).is_none_or(|&x| x <= cutoff)).collect();
    let mut out = zeros(cols, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        out.set_column(j, &d.v.column(k));
    }
    normalize_phases(&mut out);
    out
}

/// Sine of the largest principal angle between two subspaces of equal
/// dimension, given orthonormal frames. Returns 1.0 on dimension mismatch.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() != b.ncols() || a.nrows() != b.nrows() {
        return 1.0;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let resid_ab = a - b * (b.adjoint() * a);
    let resid_ba = b - a * (a.adjoint() * b);
    spectral_norm(&resid_ab).max(spectral_norm(&resid_ba))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let sym = (h + h.adjoint()) * re(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        vecs.set_column(j, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    if h.nrows() == 0 {
        return Vec::new();
    }
    let sym = (h + h.adjoint()) * re(0.5);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Applies `f` to the spectrum of a Hermitian matrix. Eigenvalues below
/// `clamp_tol` in magnitude-negative direction are clamped to zero first.
pub fn hermitian_function(h: &CMat, clamp_tol: f64, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(h);
    let mut diag = CVec::zeros(vals.len());
    for (k, &v) in vals.iter().enumerate() {
        if v < -clamp_tol {
            return Err(Error::NotPositive { min_eigenvalue: v });
        }
        diag[k] = re(f(v.max(0.0)));
    }
    Ok(&vecs * CMat::from_diagonal(&diag) * vecs.adjoint())
}

/// Square root of a Hermitian positive semi-definite matrix.
pub fn psd_sqrt(h: &CMat) -> Result<CMat> {
    hermitian_function(h, 1e-10 * (1.0 + spectral_norm(h)), f64::sqrt)
}

/// Inverse square root of a Hermitian positive definite matrix.
pub fn pd_inv_sqrt(h: &CMat) -> Result<CMat> {
    let (vals, _) = hermitian_eigen(h);
    if let Some(&min) = vals.first() {
        if min <= 1e-14 * (1.0 + vals[vals.len() - 1].abs()) {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    hermitian_function(h, 0.0, |x| 1.0 / x.sqrt())
}

/// Inverse of a square matrix, failing with [`Error::Singular`].
pub fn inverse(m: &CMat, what: &'static str) -> Result<CMat> {
    if m.nrows() == 0 {
        return Ok(zeros(0, 0));
    }
    let s = singular_values(m);
    let smax = s[0];
    let smin = s[s.len() - 1];
    if smax == 0.0 || smin <= 1e-13 * smax {
        return Err(Error::Singular(what));
    }
    m.clone().try_inverse().ok_or(Error::Singular(what))
}

/// Solves `a x = b` for square invertible `a`.
pub fn solve(a: &CMat, b: &CMat, what: &'static str) -> Result<CMat> {
    if a.nrows() == 0 {
        return Ok(zeros(0, b.ncols()));
    }
    let lu = a.clone().lu();
    let x = lu.solve(b).ok_or(Error::Singular(what))?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular(what));
    }
    Ok(x)
}

/// Minimum-norm least-squares solution of `a x ≈ b` with a relative
/// singular-value cutoff. Returns the solution and the residual norm.
pub fn least_squares(a: &CMat, b: &CMat, rel_tol: f64) -> (CMat, f64) {
    if a.ncols() == 0 {
        let r = b.norm();
        return (zeros(0, b.ncols()), r);
    }
    if a.nrows() == 0 {
        return (zeros(a.ncols(), b.ncols()), 0.0);
    }
    let d = svd(a);
    let smax = d.s[0];
    let mut x = zeros(a.ncols(), b.ncols());
    for (k, &sk) in d.s.iter().enumerate() {
        if sk > rel_tol * smax && sk > 0.0 {
            let coeff = d.u.column(k).adjoint() * b / re(sk);
            x += d.v.column(k) * coeff;
        }
    }
    let r = (a * &x - b).norm();
    (x, r)
}

/// Eigenvalues of a general complex square matrix via the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let t = m.clone().schur().unpack().1;
    (0..m.nrows()).map(|k| t[(k, k)]).collect()
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &CMat) -> f64 {
    eigenvalues(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Horizontal concatenation of matrices with equal row counts.
pub fn hstack(blocks: &[&CMat]) -> CMat {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, at), (rows, b.ncols())).copy_from(*b);
        at += b.ncols();
    }
    out
}

/// Vertical concatenation of matrices with equal column counts.
pub fn vstack(blocks: &[&CMat]) -> CMat {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack column mismatch");
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(*b);
        at += b.nrows();
    }
    out
}

/// Block matrix `[[a, b], [c, d]]`.
pub fn block2(a: &CMat, b: &CMat, cm: &CMat, d: &CMat) -> CMat {
    vstack(&[&hstack(&[a, b]), &hstack(&[cm, d])])
}

/// Maximum entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn column_matrix(v: &CVec) -> CMat {
    CMat::from_column_slice(v.len(), 1, v.as_slice())
}
