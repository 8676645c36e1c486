//! Defect analysis of a finite-dimensional contraction `T` on `H = ℂⁿ`.
//!
//! The doubled space `H ⊕ H` carries the standard form with
//! `H₊ = H₋ = H`; the graph of `T` sits inside `A_T^{⊥s}`, which splits
//! Euclidean-orthogonally as `A_T ⊕ Q ⊕ Q*` with
//!
//! * `A_T = {(k, Tk) : k ∈ 𝕂}`, `𝕂 = ker(I - T*T)`,
//! * `Q = 𝕂^⊥ ⊕ 0` and `Q* = 0 ⊕ 𝕂*^⊥`, `𝕂* = ker(I - TT*)`.
//!
//! Every matrix of `t`, `Θ_T` and `B` is written in the frames of `𝕂^⊥` and
//! `𝕂*^⊥` fixed by [`defect_analysis`]. Frames come from the SVD of `T` with
//! phases normalized by [`normalize_phases`].

use num_complex::Complex64;

use crate::disc::{Disc, DiscPoint};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_function, hstack, identity, inverse, normalize_phases, null_space, orthonormal_basis,
    rank, re, solve, spectral_norm, svd, vstack, zeros, CMat, Svd, RANK_TOL,
};
use crate::schur::{SchurFunction, SchurRealization};
use crate::symplectic::{
    contraction_block, mobius_in_coordinates, quotient, QuotientSpace, Subspace, SymplecticSpace,
};

/// Singular values within this distance of one count as unit.
pub const UNIT_SV_TOL: f64 = 1e-8;
/// Default tolerance for `‖T‖ ≤ 1 + tol`.
pub const CONTRACTION_TOL: f64 = 1e-9;
/// `primed_quadruple` refuses `‖t‖ ≥ 1 - PRIMED_TOL`.
pub const PRIMED_TOL: f64 = 1e-9;

fn select_columns(m: &CMat, idx: &[usize]) -> CMat {
    let mut out = zeros(m.nrows(), idx.len());
    for (j, &k) in idx.iter().enumerate() {
        out.set_column(j, &m.column(k));
    }
    out
}

#[derive(Debug, Clone)]
pub struct ContractionAnalysis {
    op: CMat,
    k: Subspace,
    kstar: Subspace,
    k_perp: CMat,
    kstar_perp: CMat,
    d: CMat,
    dstar: CMat,
    dt: CMat,
    t: CMat,
    at: Subspace,
    q: Subspace,
    qstar: Subspace,
    at_perp: Subspace,
    space: SymplecticSpace,
}

/// Computes `𝕂`, `𝕂*`, the defect operators and the decomposition of
/// `A_T^{⊥s}`.
pub fn defect_analysis(t: &CMat, tol: f64) -> Result<ContractionAnalysis> {
    let n = t.nrows();
    if t.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: t.ncols() });
    }
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let norm = spectral_norm(t);
    if norm > 1.0 + tol {
        return Err(Error::NotAContraction { norm });
    }
    let Svd { u, s, v } = svd(t);
    let (unit, rest): (Vec<usize>, Vec<usize>) = (0..n).partition(|&k| s[k] >= 1.0 - UNIT_SV_TOL);

    let mut k = select_columns(&v, &unit);
    let mut kstar = select_columns(&u, &unit);
    let mut k_perp = select_columns(&v, &rest);
    let mut kstar_perp = select_columns(&u, &rest);
    for f in [&mut k, &mut kstar, &mut k_perp, &mut kstar_perp] {
        normalize_phases(f);
    }

    let clamp = 4.0 * tol + 1e-12;
    let id = identity(n);
    let d = hermitian_function(&(&id - t.adjoint() * t), clamp, f64::sqrt)?;
    let dstar = hermitian_function(&(&id - t * t.adjoint()), clamp, f64::sqrt)?;
    let dt = k_perp.adjoint() * &d * &k_perp;
    let small = kstar_perp.adjoint() * t * &k_perp;

    let tk = t * &k;
    let at = Subspace::from_orthonormal(vstack(&[&k, &tk]) * re(std::f64::consts::FRAC_1_SQRT_2));
    let q = Subspace::from_orthonormal(vstack(&[&k_perp, &zeros(n, rest.len())]));
    let qstar = Subspace::from_orthonormal(vstack(&[&zeros(n, rest.len()), &kstar_perp]));
    let at_perp = Subspace::from_orthonormal(hstack(&[at.frame(), q.frame(), qstar.frame()]));

    Ok(ContractionAnalysis {
        op: t.clone(),
        k: Subspace::from_orthonormal(k),
        kstar: Subspace::from_orthonormal(kstar),
        k_perp,
        kstar_perp,
        d,
        dstar,
        dt,
        t: small,
        at,
        q,
        qstar,
        at_perp,
        space: SymplecticSpace::standard(n, n)?,
    })
}

impl ContractionAnalysis {
    pub fn dim(&self) -> usize {
        self.op.nrows()
    }

    pub fn operator(&self) -> &CMat {
        &self.op
    }

    /// `𝕂 = ker(I - T*T)`.
    pub fn k_frame(&self) -> &Subspace {
        &self.k
    }

    /// `𝕂* = ker(I - TT*)`.
    pub fn kstar_frame(&self) -> &Subspace {
        &self.kstar
    }

    /// Orthonormal frame of `𝕂^⊥`; its columns are the `H₊` basis.
    pub fn k_perp(&self) -> &CMat {
        &self.k_perp
    }

    /// Orthonormal frame of `𝕂*^⊥`; its columns are the `H₋` basis.
    pub fn kstar_perp(&self) -> &CMat {
        &self.kstar_perp
    }

    pub fn d(&self) -> &CMat {
        &self.d
    }

    pub fn dstar(&self) -> &CMat {
        &self.dstar
    }

    /// `𝔇` compressed to `𝕂^⊥`.
    pub fn dt(&self) -> &CMat {
        &self.dt
    }

    /// `T|_{𝕂^⊥} : 𝕂^⊥ → 𝕂*^⊥`.
    pub fn t(&self) -> &CMat {
        &self.t
    }

    /// `(n₊, n₋) = (dim 𝕂^⊥, dim 𝕂*^⊥)`.
    pub fn indices(&self) -> (usize, usize) {
        (self.k_perp.ncols(), self.kstar_perp.ncols())
    }

    pub fn at(&self) -> &Subspace {
        &self.at
    }

    pub fn q(&self) -> &Subspace {
        &self.q
    }

    pub fn qstar(&self) -> &Subspace {
        &self.qstar
    }

    pub fn at_perp(&self) -> &Subspace {
        &self.at_perp
    }

    /// `H ⊕ H` with the standard form.
    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn is_cnu(&self) -> Result<bool> {
        Ok(cnu_split(&self.op, CONTRACTION_TOL)?.0.rank() == 0)
    }

    /// The graph `{(x, Tx)}` as a subspace of `H ⊕ H`.
    pub fn graph(&self) -> Subspace {
        Subspace::span(&vstack(&[&identity(self.dim()), &self.op]))
    }
}

/// Splits `ℂⁿ` into the largest reducing subspace on which `T` is unitary
/// and its orthogonal complement.
pub fn cnu_split(t: &CMat, tol: f64) -> Result<(Subspace, Subspace)> {
    let n = t.nrows();
    if t.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: t.ncols() });
    }
    let norm = spectral_norm(t);
    if norm > 1.0 + tol {
        return Err(Error::NotAContraction { norm });
    }
    let id = identity(n);
    let ts = t.adjoint();
    let defects = vstack(&[&(&id - &ts * t), &(&id - t * &ts)]);
    let mut f = null_space(&defects, 0.0, UNIT_SV_TOL);
    // shrink until F is invariant under T and T*
    for _ in 0..=n {
        if f.ncols() == 0 {
            break;
        }
        let out = &id - &f * f.adjoint();
        let leak = vstack(&[&(&out * t * &f), &(&out * &ts * &f)]);
        let keep = null_space(&leak, 0.0, UNIT_SV_TOL);
        if keep.ncols() == f.ncols() {
            break;
        }
        f = orthonormal_basis(&(&f * keep), RANK_TOL);
    }
    let unitary = Subspace::from_orthonormal(f);
    let cnu = unitary.orthogonal_complement();
    Ok((unitary, cnu))
}

/// A boundary quadruple `(H₊, H₋, Γ₊, Γ₋)` for `A_T^{⊥s}`.
///
/// `Γ±` are stored as ambient `n± × 2n` matrices, meaningful on
/// `A_T^{⊥s}`. `to_canonical` is the block matrix `M` with
/// `(Γ₊; Γ₋) = M (Γ₊ᶜ; Γ₋ᶜ)` relative to the canonical quadruple of the same
/// analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryQuadruple {
    gamma_plus: CMat,
    gamma_minus: CMat,
    to_canonical: CMat,
}

impl BoundaryQuadruple {
    pub fn hplus_dim(&self) -> usize {
        self.gamma_plus.nrows()
    }

    pub fn hminus_dim(&self) -> usize {
        self.gamma_minus.nrows()
    }

    pub fn gamma_plus(&self) -> &CMat {
        &self.gamma_plus
    }

    pub fn gamma_minus(&self) -> &CMat {
        &self.gamma_minus
    }

    pub fn to_canonical(&self) -> &CMat {
        &self.to_canonical
    }

    /// `Γ±` in the coordinates of the stored `A_T^{⊥s}` frame.
    pub fn on_frame(&self, an: &ContractionAnalysis) -> (CMat, CMat) {
        let f = an.at_perp().frame();
        (&self.gamma_plus * f, &self.gamma_minus * f)
    }

    /// `(Γ₊a, Γ₋a)` for the columns of `a`.
    pub fn apply(&self, a: &CMat) -> (CMat, CMat) {
        (&self.gamma_plus * a, &self.gamma_minus * a)
    }

    /// The quadruple `(Γ₊'; Γ₋') = M (Γ₊; Γ₋)` for a pseudo-unitary `M` of the
    /// standard space `(n₊, n₋)`.
    pub fn transformed(&self, m: &CMat) -> Result<BoundaryQuadruple> {
        let (np, nm) = (self.hplus_dim(), self.hminus_dim());
        if m.shape() != (np + nm, np + nm) {
            return Err(Error::DimensionMismatch { expected: np + nm, found: m.nrows() });
        }
        if np + nm > 0 {
            let space = SymplecticSpace::standard(np, nm)?;
            let j = space.form();
            let defect = spectral_norm(&(m.adjoint() * j * m - j));
            if defect > 1e-9 * (1.0 + spectral_norm(m).powi(2)) {
                return Err(Error::Precondition(format!("transform is not pseudo-unitary (defect {defect:.3e})")));
            }
        }
        let stacked = m * vstack(&[&self.gamma_plus, &self.gamma_minus]);
        Ok(BoundaryQuadruple {
            gamma_plus: stacked.rows(0, np).into_owned(),
            gamma_minus: stacked.rows(np, nm).into_owned(),
            to_canonical: m * &self.to_canonical,
        })
    }
}

/// `Γ₊a` and `Γ₋a` are the `Q` and `Q*` components of `a` in the frames of
/// `𝕂^⊥` and `𝕂*^⊥`.
pub fn canonical_quadruple(an: &ContractionAnalysis) -> BoundaryQuadruple {
    if let Ok(false) = an.is_cnu() {
        log::warn!("contraction is not completely non-unitary; the graph is not cut out by the quadruple");
    }
    let n = an.dim();
    let (np, nm) = an.indices();
    BoundaryQuadruple {
        gamma_plus: hstack(&[&an.k_perp.adjoint(), &zeros(np, n)]),
        gamma_minus: hstack(&[&zeros(nm, n), &an.kstar_perp.adjoint()]),
        to_canonical: identity(np + nm),
    }
}

/// The canonical quadruple transformed by the pseudo-unitary built from `t`,
/// so the graph of `T` becomes `{Γ₋'a = 0}`.
pub fn primed_quadruple(an: &ContractionAnalysis) -> Result<BoundaryQuadruple> {
    let norm = spectral_norm(&an.t);
    if norm >= 1.0 - PRIMED_TOL {
        return Err(Error::NotStrictContraction { norm });
    }
    canonical_quadruple(an).transformed(&contraction_block(&an.t)?)
}

/// The operator `𝒞` with graph of `T` equal to `{a : Γ₋a = 𝒞Γ₊a}`: `t` for
/// the canonical quadruple, zero for the primed one.
pub fn mark(an: &ContractionAnalysis, quad: &BoundaryQuadruple) -> Result<CMat> {
    mobius_in_coordinates(quad.to_canonical(), &an.t)
}

#[derive(Debug, Clone)]
pub struct DefectFiber {
    point: DiscPoint,
    n_frame: Subspace,
    gamma: CMat,
    phi: CMat,
}

impl DefectFiber {
    pub fn point(&self) -> DiscPoint {
        self.point
    }

    pub fn n_frame(&self) -> &Subspace {
        &self.n_frame
    }

    /// `γ₊(λ)` (on `𝔻₊`) or `γ₋(λ)` (on `𝔻₋`), a `2n × n±` matrix.
    pub fn gamma(&self) -> &CMat {
        &self.gamma
    }

    /// `pr₁γ₊(λ)` or `pr₂γ₋(λ)`.
    pub fn phi(&self) -> &CMat {
        &self.phi
    }
}

/// Unnormalized spanning set of `N_λ` and its derivative in `λ`.
fn fiber_raw(an: &ContractionAnalysis, p: &DiscPoint) -> Result<(CMat, CMat)> {
    let n = an.dim();
    let lam = p.coord();
    let id = identity(n);
    match p.disc() {
        Disc::Plus => {
            let ts = an.op.adjoint();
            let res = inverse(&(&id - &ts * lam), "I - λT*")?;
            let x = &res * &an.k_perp;
            let dx = &res * &ts * &x;
            let raw = vstack(&[&x, &(&x * lam)]);
            let draw = vstack(&[&dx, &(&x + &dx * lam)]);
            Ok((raw, draw))
        }
        Disc::Minus => {
            let res = inverse(&(&id - &an.op * lam), "I - λT")?;
            let y = &res * &an.kstar_perp;
            let dy = &res * &an.op * &y;
            let raw = vstack(&[&(&y * lam), &y]);
            let draw = vstack(&[&(&y + &dy * lam), &dy]);
            Ok((raw, draw))
        }
    }
}

fn project_half(p: &DiscPoint, m: &CMat) -> CMat {
    let n = m.nrows() / 2;
    match p.disc() {
        Disc::Plus => m.rows(0, n).into_owned(),
        Disc::Minus => m.rows(n, n).into_owned(),
    }
}

fn normalizer<'a>(quad: &'a BoundaryQuadruple, p: &DiscPoint) -> &'a CMat {
    match p.disc() {
        Disc::Plus => &quad.gamma_plus,
        Disc::Minus => &quad.gamma_minus,
    }
}

/// The fiber `N_λ` with its boundary-normalized γ-field.
pub fn defect_fiber(an: &ContractionAnalysis, quad: &BoundaryQuadruple, p: &DiscPoint) -> Result<DefectFiber> {
    let (raw, gamma) = gamma_field(an, quad, p)?;
    let phi = project_half(p, &gamma);
    Ok(DefectFiber { point: *p, n_frame: Subspace::span(&raw), gamma, phi })
}

fn gamma_field(an: &ContractionAnalysis, quad: &BoundaryQuadruple, p: &DiscPoint) -> Result<(CMat, CMat)> {
    let (raw, _) = fiber_raw(an, p)?;
    let g = normalizer(quad, p) * &raw;
    let gamma = &raw * inverse(&g, "boundary normalization of the fiber")?;
    Ok((raw, gamma))
}

/// `dφ/dλ` at `p`, for `φ = φ₊` on `𝔻₊` and `φ₋` on `𝔻₋`.
pub fn phi_derivative(an: &ContractionAnalysis, quad: &BoundaryQuadruple, p: &DiscPoint) -> Result<CMat> {
    let (raw, draw) = fiber_raw(an, p)?;
    let gam = normalizer(quad, p);
    let g_inv = inverse(&(gam * &raw), "boundary normalization of the fiber")?;
    let dgamma = &draw * &g_inv - &raw * &g_inv * (gam * &draw) * &g_inv;
    Ok(project_half(p, &dgamma))
}

/// `ξ(p)`, the frame whose adjoint evaluates hat sections at `p`:
/// `φ₋(λ̄)` for `p ∈ 𝔻₊` and `φ₊(λ̄)` for `p ∈ 𝔻₋`.
pub fn evaluation_frame(an: &ContractionAnalysis, quad: &BoundaryQuadruple, p: &DiscPoint) -> Result<CMat> {
    let m = p.mirror();
    Ok(project_half(&m, &gamma_field(an, quad, &m)?.1))
}

fn check_inside(lambda: Complex64) -> Result<()> {
    if lambda.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisc { modulus: lambda.norm() })
    }
}

/// Characteristic function `Θ_T(λ) = (-T + λ𝔇*(I - λT*)⁻¹𝔇)|_{𝕂^⊥}` as a map
/// `𝕂^⊥ → 𝕂*^⊥`.
pub fn theta(an: &ContractionAnalysis, lambda: Complex64) -> Result<CMat> {
    check_inside(lambda)?;
    let n = an.dim();
    let inner = solve(&(identity(n) - an.op.adjoint() * lambda), &an.d, "I - λT*")?;
    let full = -&an.op + &an.dstar * inner * lambda;
    Ok(an.kstar_perp.adjoint() * full * &an.k_perp)
}

/// `B(λ) = Γ₋γ₊(λ)` for `λ ∈ 𝔻₊`.
pub fn weyl_function(an: &ContractionAnalysis, quad: &BoundaryQuadruple, lambda: Complex64) -> Result<CMat> {
    let (_, gamma) = gamma_field(an, quad, &DiscPoint::plus(lambda)?)?;
    Ok(&quad.gamma_minus * gamma)
}

/// `Γ₊γ₋(λ)` for `λ ∈ 𝔻₋`, which equals `B(λ̄)*`.
pub fn weyl_function_minus(an: &ContractionAnalysis, quad: &BoundaryQuadruple, lambda: Complex64) -> Result<CMat> {
    let (_, gamma) = gamma_field(an, quad, &DiscPoint::minus(lambda)?)?;
    Ok(&quad.gamma_plus * gamma)
}

/// `B(λ) = t - (T - λ)(I - λT*)⁻¹R(λ)` for the canonical quadruple, with
/// `R(λ)` the inverse of `𝔇_t⁻¹𝔇(I - λT*)⁻¹` on `𝕂^⊥`.
pub fn weyl_function_canonical_closed_form(an: &ContractionAnalysis, lambda: Complex64) -> Result<CMat> {
    check_inside(lambda)?;
    let n = an.dim();
    let res_kp = solve(&(identity(n) - an.op.adjoint() * lambda), &an.k_perp, "I - λT*")?;
    let dt_inv = inverse(&an.dt, "𝔇_t")?;
    let r = inverse(&(dt_inv * an.k_perp.adjoint() * &an.d * &res_kp), "R(λ)")?;
    let shifted = &an.op - identity(n) * lambda;
    Ok(&an.t - an.kstar_perp.adjoint() * shifted * res_kp * r)
}

/// `|[a,b] - i(Γ₊a,Γ₊b) + i(Γ₋a,Γ₋b)|` after projecting `a, b` onto `A_T^{⊥s}`.
pub fn green_residual(an: &ContractionAnalysis, quad: &BoundaryQuadruple, a: &CMat, b: &CMat) -> f64 {
    let p = an.at_perp.projector();
    let (pa, pb) = (&p * a, &p * b);
    let off = spectral_norm(&(a - &pa)).max(spectral_norm(&(b - &pb)));
    if off > 1e-8 * (1.0 + spectral_norm(a).max(spectral_norm(b))) {
        log::warn!("green_residual: input leaves A_T^⊥s by {off:.3e}; projected");
    }
    let form = an.space.pairing_matrix(&pa, &pb);
    let (ga, gb) = (quad.apply(&pa), quad.apply(&pb));
    let i = Complex64::new(0.0, 1.0);
    let rhs = (gb.0.adjoint() * &ga.0) * i - (gb.1.adjoint() * &ga.1) * i;
    (form - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The boundary space `𝓑_T = A_T^{⊥s} / A_T`.
pub fn boundary_space(an: &ContractionAnalysis) -> Result<QuotientSpace> {
    quotient(&an.space, &an.at)
}

/// `W_T(λ)`: the image of `N_λ` in `𝓑_T`.
pub fn weyl_curve(an: &ContractionAnalysis, bt: &QuotientSpace, p: &DiscPoint) -> Result<Subspace> {
    let (raw, _) = fiber_raw(an, p)?;
    Ok(bt.image(&Subspace::span(&raw)))
}

/// Rank of the span of `N_λ` over the given points.
pub fn fiber_span_rank(an: &ContractionAnalysis, points: &[DiscPoint]) -> Result<usize> {
    let frames = points.iter().map(|p| fiber_raw(an, p).map(|r| Subspace::span(&r.0).frame().clone())).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&CMat> = frames.iter().collect();
    Ok(rank(&hstack(&refs), RANK_TOL))
}

/// Rank of the span of `pr₁N_λ` (`λ ∈ 𝔻₊`) and `pr₂N_λ` (`λ ∈ 𝔻₋`); equals
/// `n` exactly when `T` is completely non-unitary.
pub fn projected_span_rank(an: &ContractionAnalysis, points: &[DiscPoint]) -> Result<usize> {
    let mut frames = Vec::new();
    for p in points {
        let (raw, _) = fiber_raw(an, p)?;
        frames.push(project_half(p, &raw));
    }
    let refs: Vec<&CMat> = frames.iter().collect();
    if refs.is_empty() {
        return Ok(0);
    }
    Ok(rank(&hstack(&refs), RANK_TOL))
}

/// Realization of the canonical Weyl function:
/// `B(λ) = λ K*^⊥* (I - λ P_𝕂 T*)⁻¹ K^⊥`.
pub fn canonical_weyl_realization(an: &ContractionAnalysis) -> Result<SchurRealization> {
    let a = an.k.projector() * an.op.adjoint();
    let (np, nm) = an.indices();
    SchurRealization::new(a, an.k_perp.clone(), an.kstar_perp.adjoint(), zeros(nm, np))
}

/// Realization of `B` for an arbitrary quadruple of the analysis.
pub fn weyl_realization(an: &ContractionAnalysis, quad: &BoundaryQuadruple) -> Result<SchurRealization> {
    canonical_weyl_realization(an)?.mobius(quad.to_canonical())
}

/// Realization of `Θ_T`: `A = T*`, `B_in = 𝔇K^⊥`, `C = K*^⊥*𝔇*`, `D = -t`.
pub fn characteristic_realization(an: &ContractionAnalysis) -> Result<SchurRealization> {
    SchurRealization::new(
        an.op.adjoint(),
        &an.d * &an.k_perp,
        an.kstar_perp.adjoint() * &an.dstar,
        -an.t.clone(),
    )
}

/// `B` for a fixed analysis and quadruple, evaluated through γ-fields.
pub struct WeylFunction<'a> {
    an: &'a ContractionAnalysis,
    quad: &'a BoundaryQuadruple,
}

impl<'a> WeylFunction<'a> {
    pub fn new(an: &'a ContractionAnalysis, quad: &'a BoundaryQuadruple) -> Self {
        WeylFunction { an, quad }
    }
}

impl SchurFunction for WeylFunction<'_> {
    fn n_plus(&self) -> usize {
        self.quad.hplus_dim()
    }

    fn n_minus(&self) -> usize {
        self.quad.hminus_dim()
    }

    fn eval(&self, lambda: Complex64) -> Result<CMat> {
        weyl_function(self.an, self.quad, lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff};
    use crate::symplectic::{classify_subspace, SubspaceKind, CLASSIFY_TOL};

    fn m(rows: usize, cols: usize, v: &[f64]) -> CMat {
        CMat::from_row_slice(rows, cols, &v.iter().map(|&x| re(x)).collect::<Vec<_>>())
    }

    fn jordan() -> CMat {
        m(2, 2, &[0.0, 1.0, 0.0, 0.0])
    }

    fn scalar(z: Complex64) -> CMat {
        CMat::from_element(1, 1, z)
    }

    #[test]
    fn jordan_analysis() {
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let e1 = m(2, 1, &[1.0, 0.0]);
        let e2 = m(2, 1, &[0.0, 1.0]);
        assert!(an.k_frame().same_as(&Subspace::span(&e2)));
        assert!(an.kstar_frame().same_as(&Subspace::span(&e1)));
        assert_eq!(an.indices(), (1, 1));
        assert!(an.t().norm() < 1e-15);
        assert!(max_abs_diff(an.k_perp(), &e1) < 1e-15);
        assert!(max_abs_diff(an.kstar_perp(), &e2) < 1e-15);
    }

    #[test]
    fn trivial_analyses() {
        let an = defect_analysis(&identity(2), CONTRACTION_TOL).unwrap();
        assert_eq!(an.indices(), (0, 0));
        assert_eq!(an.k_frame().rank(), 2);
        let an = defect_analysis(&CMat::zeros(2, 2), CONTRACTION_TOL).unwrap();
        assert_eq!(an.indices(), (2, 2));
        assert!(max_abs_diff(an.d(), &identity(2)) < 1e-14);
        assert!(max_abs_diff(an.dstar(), &identity(2)) < 1e-14);
        assert!(matches!(
            defect_analysis(&scalar(re(1.1)), CONTRACTION_TOL),
            Err(Error::NotAContraction { .. })
        ));
    }

    #[test]
    fn cnu_split_examples() {
        let u = Complex64::from_polar(1.0, 0.7);
        let t = CMat::from_row_slice(2, 2, &[u, re(0.0), re(0.0), re(0.4)]);
        let (uni, cnu) = cnu_split(&t, CONTRACTION_TOL).unwrap();
        assert!(uni.same_as(&Subspace::span(&m(2, 1, &[1.0, 0.0]))));
        assert_eq!(cnu.rank(), 1);
        assert_eq!(cnu_split(&jordan(), CONTRACTION_TOL).unwrap().0.rank(), 0);
        assert_eq!(cnu_split(&identity(3), CONTRACTION_TOL).unwrap().0.rank(), 3);
    }

    #[test]
    fn canonical_boundary_values() {
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        let l = c(0.3, -0.2);
        let a = CMat::from_column_slice(4, 1, &[re(1.0), l, l, l * l]);
        let (gp, gm) = quad.apply(&a);
        assert!((gp[(0, 0)] - re(1.0)).norm() < 1e-15);
        assert!((gm[(0, 0)] - l * l).norm() < 1e-15);
        let (gp, gm) = quad.apply(an.at().frame());
        assert!(gp.norm() < 1e-15 && gm.norm() < 1e-15);

        let cc = c(0.4, 0.1);
        let an = defect_analysis(&scalar(cc), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        let x = c(0.7, 0.2);
        let (gp, gm) = quad.apply(&CMat::from_column_slice(2, 1, &[x, cc * x]));
        assert!((gp[(0, 0)] - x).norm() < 1e-15);
        assert!((gm[(0, 0)] - cc * x).norm() < 1e-15);
        assert!((gm - an.t() * gp).norm() < 1e-15);
    }

    #[test]
    fn primed_examples() {
        let an = defect_analysis(&CMat::zeros(1, 1), CONTRACTION_TOL).unwrap();
        let can = canonical_quadruple(&an);
        let pr = primed_quadruple(&an).unwrap();
        assert!(max_abs_diff(pr.gamma_plus(), can.gamma_plus()) < 1e-15);
        assert!(max_abs_diff(pr.gamma_minus(), &(-can.gamma_minus())) < 1e-15);

        let an = defect_analysis(&scalar(re(0.5)), CONTRACTION_TOL).unwrap();
        let pr = primed_quadruple(&an).unwrap();
        let k = 2.0 / 3f64.sqrt();
        let expect = m(2, 2, &[k, -0.5 * k, 0.5 * k, -k]);
        assert!(max_abs_diff(pr.to_canonical(), &expect) < 1e-14);
        let graph = m(2, 1, &[1.0, 0.5]);
        assert!(pr.apply(&graph).1.norm() < 1e-15);
        assert!(mark(&an, &pr).unwrap().norm() < 1e-15);
    }

    #[test]
    fn fibers_by_hand() {
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        let l = c(0.2, 0.5);
        let f = defect_fiber(&an, &quad, &DiscPoint::plus(l).unwrap()).unwrap();
        let expect = CMat::from_column_slice(4, 1, &[re(1.0), l, l, l * l]);
        assert!(max_abs_diff(f.gamma(), &expect) < 1e-15);
        assert!(max_abs_diff(f.phi(), &CMat::from_column_slice(2, 1, &[re(1.0), l])) < 1e-15);

        let cc = c(-0.3, 0.4);
        let an = defect_analysis(&scalar(cc), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        let f = defect_fiber(&an, &quad, &DiscPoint::minus(l).unwrap()).unwrap();
        assert!(max_abs_diff(f.gamma(), &CMat::from_column_slice(2, 1, &[l, re(1.0)])) < 1e-15);
        assert!((f.phi()[(0, 0)] - re(1.0)).norm() < 1e-15);

        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let f = defect_fiber(&an, &canonical_quadruple(&an), &DiscPoint::zero_minus()).unwrap();
        assert!(f.n_frame().same_as(an.qstar()));
    }

    #[test]
    fn theta_closed_forms() {
        let l = c(0.35, -0.25);
        let an = defect_analysis(&CMat::zeros(1, 1), CONTRACTION_TOL).unwrap();
        assert!((theta(&an, l).unwrap()[(0, 0)] - l).norm() < 1e-15);
        let cc = c(0.3, 0.4);
        let an = defect_analysis(&scalar(cc), CONTRACTION_TOL).unwrap();
        let expect = (l - cc) / (re(1.0) - cc.conj() * l);
        assert!((theta(&an, l).unwrap()[(0, 0)] - expect).norm() < 1e-14);
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        assert!((theta(&an, l).unwrap()[(0, 0)] - l * l).norm() < 1e-15);
        assert!(theta(&an, re(1.0)).is_err());
    }

    #[test]
    fn weyl_closed_forms() {
        let l = c(-0.4, 0.3);
        for cc in [c(0.0, 0.0), c(0.5, -0.2), c(-0.1, 0.7)] {
            let an = defect_analysis(&scalar(cc), CONTRACTION_TOL).unwrap();
            let quad = canonical_quadruple(&an);
            assert!((weyl_function(&an, &quad, l).unwrap()[(0, 0)] - l).norm() < 1e-14);
            assert!((weyl_function_canonical_closed_form(&an, l).unwrap()[(0, 0)] - l).norm() < 1e-14);
        }
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        assert!((weyl_function(&an, &quad, l).unwrap()[(0, 0)] - l * l).norm() < 1e-15);
        assert!(weyl_function(&an, &quad, re(0.0)).unwrap().norm() < 1e-15);
        let r = canonical_weyl_realization(&an).unwrap();
        assert!((r.eval(l).unwrap()[(0, 0)] - l * l).norm() < 1e-15);
    }

    #[test]
    fn weyl_minus_branch_is_adjoint() {
        let t = m(2, 2, &[0.2, 0.5, -0.3, 0.1]);
        let an = defect_analysis(&t, CONTRACTION_TOL).unwrap();
        let quad = primed_quadruple(&an).unwrap();
        let l = c(0.3, 0.4);
        let minus = weyl_function_minus(&an, &quad, l).unwrap();
        let plus = weyl_function(&an, &quad, l.conj()).unwrap();
        assert!(max_abs_diff(&minus, &plus.adjoint()) < 1e-13);
    }

    #[test]
    fn weyl_curve_signs() {
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let bt = boundary_space(&an).unwrap();
        let p = DiscPoint::plus(c(0.3, 0.1)).unwrap();
        let w = weyl_curve(&an, &bt, &p).unwrap();
        assert_eq!(classify_subspace(bt.space(), &w, CLASSIFY_TOL).unwrap(), SubspaceKind::MaxPositiveDefinite);
        let w = weyl_curve(&an, &bt, &p.mirror()).unwrap();
        assert_eq!(classify_subspace(bt.space(), &w, CLASSIFY_TOL).unwrap(), SubspaceKind::MaxNegativeDefinite);
    }

    #[test]
    fn green_formula_on_jordan() {
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let f = an.at_perp().frame().clone();
        for quad in [canonical_quadruple(&an), primed_quadruple(&an).unwrap()] {
            assert!(green_residual(&an, &quad, &f, &f) < 1e-14);
        }
        let at = an.at().frame().clone();
        assert!(green_residual(&an, &canonical_quadruple(&an), &at, &at) < 1e-15);
    }
}
