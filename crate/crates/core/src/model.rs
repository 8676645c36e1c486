//! The functional model: sampled sections over the two discs, the model
//! operator `𝔗`, synthesis from a marked disc and equivalence certificates.
//!
//! A section takes values in `H₋` at `𝔻₊` points and in `H₊` at `𝔻₋`
//! points. For a marked disc `(B, 𝒞)` the model operator is
//!
//! ```text
//! (𝔗f)(λ) = λf(λ) - (B(λ) - 𝒞) v                  λ ∈ 𝔻₊
//! (𝔗f)(λ) = [f(λ) - (I - B(λ̄)*𝒞) v] / λ           λ ∈ 𝔻₋
//! v       = (I - B(0₊)*𝒞)⁻¹ f(0₋)
//! ```

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::contraction::{
    evaluation_frame, phi_derivative, weyl_realization, BoundaryQuadruple, ContractionAnalysis,
};
use crate::disc::{merge_grids, Disc, DiscPoint, GridConfig};
use crate::error::{Error, Result};
use crate::kernel::{gram_assemble, gram_rank, GramMatrix};
use crate::linalg::{
    eigenvalues, identity, inverse, least_squares, max_abs_diff, singular_values, spectral_norm, CMat,
    CVec,
};
use crate::random;
use crate::schur::{SchurFunction, SchurRealization};

/// Points with `|λ|` below this on `𝔻₋` are treated as `0₋`.
const ZERO_TOL: f64 = 1e-12;
const VERIFY_SEED: u64 = 0x5eed;
const VERIFY_SAMPLES: usize = 8;

/// Values of a section on a grid that contains `0₋`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSection {
    grid: Vec<DiscPoint>,
    values: Vec<CVec>,
    zero_minus_derivative: Option<CVec>,
}

impl SampledSection {
    pub fn new(grid: Vec<DiscPoint>, values: Vec<CVec>) -> Result<SampledSection> {
        if grid.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(SampledSection { grid, values, zero_minus_derivative: None })
    }

    /// Attaches `f'(0₋)`, which the limit policy of [`model_apply`] needs.
    pub fn with_zero_minus_derivative(mut self, d: CVec) -> SampledSection {
        self.zero_minus_derivative = Some(d);
        self
    }

    pub fn grid(&self) -> &[DiscPoint] {
        &self.grid
    }

    pub fn values(&self) -> &[CVec] {
        &self.values
    }

    pub fn zero_minus_derivative(&self) -> Option<&CVec> {
        self.zero_minus_derivative.as_ref()
    }

    pub fn value_at(&self, p: &DiscPoint) -> Option<&CVec> {
        self.grid.iter().position(|q| q == p).map(|k| &self.values[k])
    }

    pub fn zero_minus(&self) -> Result<&CVec> {
        self.grid.iter().position(|p| p.is_zero_minus()).map(|k| &self.values[k]).ok_or(Error::MissingZeroMinus)
    }

    /// All values stacked in grid order.
    pub fn stacked(&self) -> CVec {
        let total = self.values.iter().map(|v| v.len()).sum();
        let mut out = CVec::zeros(total);
        let mut at = 0;
        for v in &self.values {
            out.rows_mut(at, v.len()).copy_from(v);
            at += v.len();
        }
        out
    }

    /// Largest pointwise distance on the points both sections share.
    pub fn max_distance(&self, other: &SampledSection) -> f64 {
        let mut worst = 0.0f64;
        for (p, v) in self.grid.iter().zip(&self.values) {
            if let Some(w) = other.value_at(p) {
                worst = worst.max((v - w).norm());
            }
        }
        worst
    }
}

/// `x̂`: the section `p ↦ ξ(p)*x` with `ξ(p) = φ∓(λ̄)`.
pub fn hat_section(
    an: &ContractionAnalysis,
    quad: &BoundaryQuadruple,
    x: &CVec,
    grid: &[DiscPoint],
) -> Result<SampledSection> {
    if !grid.iter().any(|p| p.is_zero_minus()) {
        return Err(Error::MissingZeroMinus);
    }
    if x.len() != an.dim() {
        return Err(Error::DimensionMismatch { expected: an.dim(), found: x.len() });
    }
    let values = grid
        .iter()
        .map(|p| evaluation_frame(an, quad, p).map(|xi| xi.adjoint() * x))
        .collect::<Result<Vec<_>>>()?;
    let d = phi_derivative(an, quad, &DiscPoint::zero_plus())?.adjoint() * x;
    Ok(SampledSection { grid: grid.to_vec(), values, zero_minus_derivative: Some(d) })
}

/// What [`model_apply`] does at `0₋`, where the `𝔻₋` formula divides by zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroMinusPolicy {
    /// Leave `0₋` out of the output grid.
    #[default]
    Drop,
    /// Evaluate the limit `f'(0₋) + B'(0)*𝒞v`.
    Limit,
}

/// `𝔗f` on the grid of `f`.
pub fn model_apply(
    b: &dyn SchurFunction,
    mark: &CMat,
    f: &SampledSection,
    policy: ZeroMinusPolicy,
) -> Result<SampledSection> {
    let (np, nm) = (b.n_plus(), b.n_minus());
    if mark.shape() != (nm, np) {
        return Err(Error::DimensionMismatch { expected: nm, found: mark.nrows() });
    }
    let b0 = b.eval(Complex64::new(0.0, 0.0))?;
    let system = identity(np) - b0.adjoint() * mark;
    let v = inverse(&system, "I - B(0₊)*𝒞")? * f.zero_minus()?;
    let mut grid = Vec::with_capacity(f.grid.len());
    let mut values = Vec::with_capacity(f.grid.len());
    for (p, fv) in f.grid.iter().zip(&f.values) {
        let l = p.coord();
        let out = match p.disc() {
            Disc::Plus => fv * l - (b.eval(l)? - mark) * &v,
            Disc::Minus if l.norm() < ZERO_TOL => match policy {
                ZeroMinusPolicy::Drop => continue,
                ZeroMinusPolicy::Limit => {
                    let fd = f.zero_minus_derivative.as_ref().ok_or_else(|| {
                        Error::Precondition("limit at 0- needs the section's derivative".into())
                    })?;
                    let bd = b.derivative(Complex64::new(0.0, 0.0)).ok_or(Error::ConfluentUnsupported)??;
                    fd + bd.adjoint() * mark * &v
                }
            },
            Disc::Minus => {
                let bl = b.eval(l.conj())?;
                (fv - (identity(np) - bl.adjoint() * mark) * &v) / l
            }
        };
        grid.push(*p);
        values.push(out);
    }
    Ok(SampledSection { grid, values, zero_minus_derivative: None })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelReport {
    pub max_residual_t1: f64,
    pub max_residual_model: f64,
}

/// Checks the boundary identities on random `a ∈ A_T^{⊥s}` and
/// `𝔗 x̂ = (Tx)^` on the basis vectors, with `B` the Weyl function of `quad`.
pub fn verify_model(
    an: &ContractionAnalysis,
    quad: &BoundaryQuadruple,
    mark: &CMat,
    grid: &[DiscPoint],
) -> Result<ModelReport> {
    let b = weyl_realization(an, quad)?;
    let n = an.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let frame = an.at_perp().frame();

    let mut t1 = 0.0f64;
    for _ in 0..VERIFY_SAMPLES {
        let a = frame * random::gaussian(frame.ncols(), 1, &mut rng);
        let x: CVec = a.rows(0, n).column(0).into_owned();
        let y: CVec = a.rows(n, n).column(0).into_owned();
        let (gp, gm) = quad.apply(&a);
        let (gp, gm): (CVec, CVec) = (gp.column(0).into_owned(), gm.column(0).into_owned());
        let fx = hat_section(an, quad, &x, grid)?;
        let fy = hat_section(an, quad, &y, grid)?;
        for (k, p) in grid.iter().enumerate() {
            let l = p.coord();
            let defect = match p.disc() {
                Disc::Plus => &fx.values[k] * l - &fy.values[k] - (b.eval(l)? * &gp - &gm),
                Disc::Minus => &fx.values[k] - &fy.values[k] * l - (&gp - b.eval(l.conj())?.adjoint() * &gm),
            };
            t1 = t1.max(defect.norm());
        }
    }

    let mut model = 0.0f64;
    for k in 0..n {
        let mut e = CVec::zeros(n);
        e[k] = Complex64::new(1.0, 0.0);
        let lhs = model_apply(&b, mark, &hat_section(an, quad, &e, grid)?, ZeroMinusPolicy::Drop)?;
        let rhs = hat_section(an, quad, &(an.operator() * &e), grid)?;
        model = model.max(lhs.max_distance(&rhs));
    }
    Ok(ModelReport { max_residual_t1: t1, max_residual_model: model })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// `g = λf` on `𝔻₊` and `λg = f` on `𝔻₋`.
    InHatA { residual: f64 },
    /// The boundary identities hold with `(Γ₊, Γ₋) = (x_plus, x_minus)`.
    InHatAperp { x_plus: CVec, x_minus: CVec, residual: f64 },
    Neither { residual: f64 },
}

/// Classifies a pair of sections against `Â` and `Â^{⊥s}`.
pub fn graph_membership(
    b: &dyn SchurFunction,
    f: &SampledSection,
    g: &SampledSection,
    tol: f64,
) -> Result<Membership> {
    if f.grid != g.grid {
        return Err(Error::InconsistentGrids("sections live on different grids".into()));
    }
    f.zero_minus()?;
    let plus = f.grid.iter().filter(|p| p.is_plus()).count();
    let minus = f.grid.len() - plus;
    if plus < 2 || minus < 3 {
        return Err(Error::InconsistentGrids("need two points per disc besides 0-".into()));
    }
    let (np, nm) = (b.n_plus(), b.n_minus());

    let mut graph_res = 0.0f64;
    for (k, p) in f.grid.iter().enumerate() {
        let l = p.coord();
        let d = match p.disc() {
            Disc::Plus => &g.values[k] - &f.values[k] * l,
            Disc::Minus => &g.values[k] * l - &f.values[k],
        };
        graph_res = graph_res.max(d.norm());
    }
    if graph_res <= tol {
        return Ok(Membership::InHatA { residual: graph_res });
    }

    let rows: usize = f.grid.iter().map(|p| if p.is_plus() { nm } else { np }).sum();
    let mut a = CMat::zeros(rows, np + nm);
    let mut rhs = CMat::zeros(rows, 1);
    let mut at = 0;
    for (k, p) in f.grid.iter().enumerate() {
        let l = p.coord();
        match p.disc() {
            Disc::Plus => {
                a.view_mut((at, 0), (nm, np)).copy_from(&b.eval(l)?);
                a.view_mut((at, np), (nm, nm)).copy_from(&(-identity(nm)));
                rhs.view_mut((at, 0), (nm, 1)).copy_from(&(&f.values[k] * l - &g.values[k]));
                at += nm;
            }
            Disc::Minus => {
                a.view_mut((at, 0), (np, np)).copy_from(&identity(np));
                a.view_mut((at, np), (np, nm)).copy_from(&(-b.eval(l.conj())?.adjoint()));
                rhs.view_mut((at, 0), (np, 1)).copy_from(&(&f.values[k] - &g.values[k] * l));
                at += np;
            }
        }
    }
    let (z, _) = least_squares(&a, &rhs, 1e-12);
    let residual = (&a * &z - &rhs).iter().map(|v| v.norm()).fold(0.0, f64::max);
    if residual <= tol {
        Ok(Membership::InHatAperp {
            x_plus: z.rows(0, np).column(0).into_owned(),
            x_minus: z.rows(np, nm).column(0).into_owned(),
            residual,
        })
    } else {
        Ok(Membership::Neither { residual })
    }
}

/// A Schur function together with the pure contraction `𝒞` that marks the
/// graph of the model operator.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedDisc {
    schur: SchurRealization,
    mark: CMat,
}

impl MarkedDisc {
    pub fn new(schur: SchurRealization, mark: CMat) -> Result<MarkedDisc> {
        if mark.shape() != (schur.n_minus(), schur.n_plus()) {
            return Err(Error::DimensionMismatch { expected: schur.n_minus(), found: mark.nrows() });
        }
        let norm = spectral_norm(&mark);
        if norm >= 1.0 {
            return Err(Error::NotStrictContraction { norm });
        }
        schur.validate()?;
        Ok(MarkedDisc { schur, mark })
    }

    pub fn schur(&self) -> &SchurRealization {
        &self.schur
    }

    pub fn mark(&self) -> &CMat {
        &self.mark
    }
}

/// Orthonormal basis of the sampled model space: `S = V_r Λ_r^{1/2}` are the
/// grid values of the basis sections.
#[derive(Debug, Clone)]
pub struct ModelBasis {
    gram: GramMatrix,
    samples: CMat,
    coord_map: CMat,
}

impl ModelBasis {
    pub fn new(b: &dyn SchurFunction, grid: &[DiscPoint], rel_tol: f64) -> Result<ModelBasis> {
        let gram = gram_assemble(b, grid)?;
        let keep = gram.retained(rel_tol);
        let rows = gram.matrix().nrows();
        let mut samples = CMat::zeros(rows, keep.len());
        let mut coord_map = CMat::zeros(keep.len(), rows);
        for (j, &k) in keep.iter().enumerate() {
            let s = gram.eigenvalues()[k].sqrt();
            let v = gram.eigenvectors().column(k);
            samples.set_column(j, &(v * Complex64::new(s, 0.0)));
            coord_map.set_row(j, &(v.adjoint() * Complex64::new(1.0 / s, 0.0)));
        }
        Ok(ModelBasis { gram, samples, coord_map })
    }

    pub fn dim(&self) -> usize {
        self.samples.ncols()
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn samples(&self) -> &CMat {
        &self.samples
    }

    /// Basis section `k` as a [`SampledSection`].
    pub fn section(&self, k: usize) -> SampledSection {
        let grid = self.gram.grid().to_vec();
        let values = self
            .gram
            .offsets()
            .iter()
            .zip(self.gram.fiber_dims())
            .map(|(&o, &d)| self.samples.column(k).rows(o, d).into_owned())
            .collect();
        SampledSection { grid, values, zero_minus_derivative: None }
    }

    /// Coordinates of a section of the model space in the orthonormal basis.
    pub fn coordinates(&self, f: &SampledSection) -> Result<CVec> {
        if f.grid() != self.gram.grid() {
            return Err(Error::InconsistentGrids("section grid differs from the basis grid".into()));
        }
        Ok(&self.coord_map * f.stacked())
    }
}

#[derive(Debug, Clone)]
pub struct ModelOperator {
    matrix: CMat,
    basis: ModelBasis,
    residual: f64,
    refined_rank: usize,
}

impl ModelOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `𝔗` in the orthonormal basis of [`ModelOperator::basis`].
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn basis(&self) -> &ModelBasis {
        &self.basis
    }

    /// `‖S_drop 𝔗 - (𝔗 applied to S)‖` on the output grid.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Gram rank on the grid merged with its refinement.
    pub fn refined_rank(&self) -> usize {
        self.refined_rank
    }
}

/// Builds `𝔗` from a marked disc: Gram eigenbasis on `grid`, `𝔗` applied
/// to each basis section, then least squares back into the basis with `0₋`
/// left out.
pub fn synthesize(md: &MarkedDisc, grid: &GridConfig, tol: f64) -> Result<ModelOperator> {
    let points = grid.build()?;
    let basis = ModelBasis::new(&md.schur, &points, tol)?;
    let r = basis.dim();
    let refined_points = merge_grids(&points, &grid.refinement().build()?);
    let refined_rank = gram_rank(&md.schur, &refined_points, tol)?;
    if refined_rank > r {
        return Err(Error::NotFiniteDimensional { rank: r, refined_rank });
    }

    let mut images = Vec::with_capacity(r);
    for k in 0..r {
        images.push(model_apply(&md.schur, &md.mark, &basis.section(k), ZeroMinusPolicy::Drop)?.stacked());
    }
    let keep: Vec<usize> = {
        let mut rows = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if !p.is_zero_minus() {
                let (o, d) = (basis.gram.offsets()[i], basis.gram.fiber_dims()[i]);
                rows.extend(o..o + d);
            }
        }
        rows
    };
    let mut s_drop = CMat::zeros(keep.len(), r);
    for (i, &row) in keep.iter().enumerate() {
        s_drop.set_row(i, &basis.samples.row(row));
    }
    let mut out = CMat::zeros(keep.len(), r);
    for (k, img) in images.iter().enumerate() {
        out.set_column(k, img);
    }
    let (matrix, _) = least_squares(&s_drop, &out, 1e-13);
    let residual = spectral_norm(&(&s_drop * &matrix - &out));
    let norm = spectral_norm(&matrix);
    if norm > 1.0 + 1e-8 {
        log::warn!("synthesized operator has norm {norm:.12}");
    }
    Ok(ModelOperator { matrix, basis, residual, refined_rank })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceTol {
    /// For singular values and characteristic polynomial coefficients.
    pub spectral: f64,
    /// For traces of words in `S` and `S*`.
    pub trace: f64,
}

impl Default for EquivalenceTol {
    fn default() -> Self {
        EquivalenceTol { spectral: 1e-7, trace: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    pub singular_value_gap: f64,
    /// Greedy matching distance between the two spectra. Reported only:
    /// defective eigenvalues move like `ε^{1/k}` under perturbation.
    pub eigenvalue_gap: f64,
    pub charpoly_gap: f64,
    pub trace_gap: f64,
    pub word_length: usize,
}

/// Longest trace word compared.
pub const MAX_WORD_LENGTH: usize = 16;

/// Coefficients `c₀..cₙ` of `det(zI - A)` by Faddeev–LeVerrier.
fn charpoly(a: &CMat) -> Vec<Complex64> {
    let n = a.nrows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = CMat::zeros(n, n);
    for k in 1..=n {
        m = a * &m + identity(n) * coeffs[n - k + 1];
        coeffs[n - k] = -(a * &m).trace() / k as f64;
    }
    coeffs
}

fn spectrum_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut order: Vec<&Complex64> = a.iter().collect();
    order.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    let mut worst = 0.0f64;
    for z in order {
        let best = (0..b.len())
            .filter(|&j| !used[j])
            .min_by(|&i, &j| (b[i] - z).norm().total_cmp(&(b[j] - z).norm()));
        if let Some(j) = best {
            used[j] = true;
            worst = worst.max((b[j] - z).norm());
        }
    }
    worst
}

fn trace_word_gap(s1: &CMat, s2: &CMat, len: usize) -> f64 {
    fn walk(p1: &CMat, p2: &CMat, l1: &[CMat; 2], l2: &[CMat; 2], left: usize, worst: &mut f64) {
        for k in 0..2 {
            let (q1, q2) = (p1 * &l1[k], p2 * &l2[k]);
            *worst = worst.max((q1.trace() - q2.trace()).norm());
            if left > 1 {
                walk(&q1, &q2, l1, l2, left - 1, worst);
            }
        }
    }
    let n = s1.nrows();
    let l1 = [s1.clone(), s1.adjoint()];
    let l2 = [s2.clone(), s2.adjoint()];
    let mut worst = 0.0;
    if len > 0 {
        walk(&identity(n), &identity(n), &l1, &l2, len, &mut worst);
    }
    worst
}

/// Numerical unitary-equivalence test through singular values, the
/// characteristic polynomial and traces of words in `S`, `S*` up to length
/// `min(2n, MAX_WORD_LENGTH)`.
pub fn equivalence_check(s1: &CMat, s2: &CMat, tol: EquivalenceTol) -> EquivalenceReport {
    let n = s1.nrows();
    if s1.ncols() != n || s2.nrows() != s2.ncols() || s2.nrows() != n {
        return EquivalenceReport {
            verdict: Verdict::NotEquivalent,
            singular_value_gap: f64::INFINITY,
            eigenvalue_gap: f64::INFINITY,
            charpoly_gap: f64::INFINITY,
            trace_gap: f64::INFINITY,
            word_length: 0,
        };
    }
    let sv = singular_values(s1)
        .iter()
        .zip(singular_values(s2))
        .fold(0.0f64, |w, (a, b)| w.max((a - b).abs()));
    let eig = spectrum_gap(&eigenvalues(s1), &eigenvalues(s2));
    let cp = charpoly(s1).iter().zip(charpoly(s2)).fold(0.0f64, |w, (a, b)| w.max((a - b).norm()));
    let word_length = (2 * n).min(MAX_WORD_LENGTH);
    let tr = trace_word_gap(s1, s2, word_length);
    let verdict = if sv > tol.spectral || cp > tol.spectral {
        Verdict::NotEquivalent
    } else if tr <= tol.trace {
        Verdict::Equivalent
    } else if tr <= 100.0 * tol.trace {
        Verdict::Inconclusive
    } else {
        Verdict::NotEquivalent
    };
    EquivalenceReport {
        verdict,
        singular_value_gap: sv,
        eigenvalue_gap: eig,
        charpoly_gap: cp,
        trace_gap: tr,
        word_length,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceData {
    pub u_plus: CMat,
    pub u_minus: CMat,
    /// `max ‖B₂(λ) - u₋B₁(λ)u₊⁻¹‖` over the `𝔻₊` points of the grid.
    pub weyl_residual: f64,
    /// `‖𝒞₂ - u₋𝒞₁u₊⁻¹‖` for the canonical marks.
    pub mark_residual: f64,
}

/// The disc congruence induced by a unitary `U` with `T₂ = UT₁U*`, in the
/// canonical quadruples of both analyses.
pub fn congruence_data(
    an1: &ContractionAnalysis,
    an2: &ContractionAnalysis,
    u: &CMat,
    grid: &[DiscPoint],
    tol: f64,
) -> Result<CongruenceData> {
    let n = an1.dim();
    if an2.dim() != n || u.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, found: u.nrows() });
    }
    let unitary_defect = max_abs_diff(&(u.adjoint() * u), &identity(n));
    let intertwine = spectral_norm(&(u * an1.operator() * u.adjoint() - an2.operator()));
    if unitary_defect > tol || intertwine > tol {
        return Err(Error::Precondition(format!(
            "U does not intertwine (unitary defect {unitary_defect:.3e}, intertwining defect {intertwine:.3e})"
        )));
    }
    let u_plus = an2.k_perp().adjoint() * u * an1.k_perp();
    let u_minus = an2.kstar_perp().adjoint() * u * an1.kstar_perp();
    for (name, m) in [("K^⊥", &u_plus), ("K*^⊥", &u_minus)] {
        if max_abs_diff(&(m.adjoint() * m), &identity(m.ncols())) > 1e-8 {
            return Err(Error::Precondition(format!("U does not map {name} onto {name}")));
        }
    }
    let b1 = crate::contraction::canonical_weyl_realization(an1)?;
    let b2 = crate::contraction::canonical_weyl_realization(an2)?;
    let mut weyl_residual = 0.0f64;
    for p in grid.iter().filter(|p| p.is_plus()) {
        let l = p.coord();
        let moved = &u_minus * b1.eval(l)? * u_plus.adjoint();
        weyl_residual = weyl_residual.max(max_abs_diff(&b2.eval(l)?, &moved));
    }
    let mark_residual = max_abs_diff(an2.t(), &(&u_minus * an1.t() * u_plus.adjoint()));
    Ok(CongruenceData { u_plus, u_minus, weyl_residual, mark_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::{canonical_quadruple, defect_analysis, CONTRACTION_TOL};
    use crate::linalg::{c, re};

    fn jordan() -> CMat {
        CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(0.0), re(0.0)])
    }

    fn grid() -> Vec<DiscPoint> {
        GridConfig::default().build().unwrap()
    }

    #[test]
    fn jordan_hat_sections() {
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        let x = CVec::from_vec(vec![c(0.3, 0.1), c(-0.2, 0.4)]);
        let f = hat_section(&an, &quad, &x, &grid()).unwrap();
        for (p, v) in f.grid().iter().zip(f.values()) {
            let l = p.coord();
            let expect = if p.is_plus() { x[0] * l + x[1] } else { x[0] + x[1] * l };
            assert!((v[0] - expect).norm() < 1e-14);
        }
        assert!((f.zero_minus().unwrap()[0] - x[0]).norm() < 1e-15);
        assert!((f.zero_minus_derivative().unwrap()[0] - x[1]).norm() < 1e-15);
    }

    #[test]
    fn scalar_hat_is_constant() {
        let an = defect_analysis(&CMat::from_element(1, 1, c(0.4, -0.3)), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        let x = CVec::from_vec(vec![c(0.7, 0.2)]);
        let f = hat_section(&an, &quad, &x, &grid()).unwrap();
        assert!(f.values().iter().all(|v| (v[0] - x[0]).norm() < 1e-14));
    }

    #[test]
    fn kernel_vector_vanishes_at_zero_minus() {
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        let x = CVec::from_vec(vec![re(0.0), re(1.0)]);
        assert!(hat_section(&an, &quad, &x, &grid()).unwrap().zero_minus().unwrap().norm() < 1e-15);
        let no_zero: Vec<DiscPoint> = grid().into_iter().filter(|p| !p.is_zero_minus()).collect();
        assert_eq!(hat_section(&an, &quad, &x, &no_zero).unwrap_err(), Error::MissingZeroMinus);
    }

    #[test]
    fn model_apply_examples() {
        let g = grid();
        let cc = c(0.3, 0.2);
        let x = c(0.5, -0.1);
        let f = SampledSection::new(g.clone(), vec![CVec::from_element(1, x); g.len()]).unwrap();
        let out = model_apply(&SchurRealization::monomial(1, 1), &CMat::from_element(1, 1, cc), &f, ZeroMinusPolicy::Drop)
            .unwrap();
        assert_eq!(out.grid().len(), g.len() - 1);
        assert!(out.values().iter().all(|v| (v[0] - cc * x).norm() < 1e-14));

        let (x1, x2) = (c(0.3, 0.1), c(-0.2, 0.4));
        let vals = g.iter().map(|p| {
            let l = p.coord();
            CVec::from_element(1, if p.is_plus() { x1 * l + x2 } else { x1 + x2 * l })
        });
        let f = SampledSection::new(g.clone(), vals.collect()).unwrap().with_zero_minus_derivative(CVec::from_element(1, x2));
        let out = model_apply(&SchurRealization::monomial(2, 1), &CMat::zeros(1, 1), &f, ZeroMinusPolicy::Limit).unwrap();
        assert_eq!(out.grid().len(), g.len());
        for (p, v) in out.grid().iter().zip(out.values()) {
            let expect = if p.is_plus() { x2 * p.coord() } else { x2 };
            assert!((v[0] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn jordan_model_identity() {
        let an = defect_analysis(&jordan(), CONTRACTION_TOL).unwrap();
        let quad = canonical_quadruple(&an);
        let r = verify_model(&an, &quad, an.t(), &grid()).unwrap();
        assert!(r.max_residual_t1 < 1e-13 && r.max_residual_model < 1e-13);
        let off = CMat::from_element(1, 1, re(0.1));
        assert!(verify_model(&an, &quad, &off, &grid()).unwrap().max_residual_model > 1e-3);
    }

    #[test]
    fn synthesis_anchors() {
        let jordan_md = MarkedDisc::new(SchurRealization::monomial(2, 1), CMat::zeros(1, 1)).unwrap();
        let op = synthesize(&jordan_md, &GridConfig::default(), 1e-10).unwrap();
        assert_eq!(op.dim(), 2);
        assert!(op.residual() < 1e-10);
        assert_eq!(equivalence_check(op.matrix(), &jordan(), EquivalenceTol::default()).verdict, Verdict::Equivalent);

        let cc = c(0.2, -0.5);
        let md = MarkedDisc::new(SchurRealization::monomial(1, 1), CMat::from_element(1, 1, cc)).unwrap();
        let op = synthesize(&md, &GridConfig::default(), 1e-10).unwrap();
        assert_eq!(op.dim(), 1);
        assert!((op.matrix()[(0, 0)] - cc).norm() < 1e-12);

        let md = MarkedDisc::new(SchurRealization::monomial(1, 2), CMat::zeros(2, 2)).unwrap();
        let op = synthesize(&md, &GridConfig::default(), 1e-10).unwrap();
        assert_eq!(op.dim(), 2);
        assert!(op.matrix().norm() < 1e-12);
    }

    #[test]
    fn equivalence_examples() {
        let d = CMat::zeros(2, 2);
        assert_eq!(equivalence_check(&jordan(), &d, EquivalenceTol::default()).verdict, Verdict::NotEquivalent);
        assert_eq!(equivalence_check(&jordan(), &jordan(), EquivalenceTol::default()).verdict, Verdict::Equivalent);
        assert_eq!(equivalence_check(&jordan(), &identity(3), EquivalenceTol::default()).verdict, Verdict::NotEquivalent);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = random::gaussian(4, 4, &mut rng) * re(0.3);
        let u = random::unitary(4, &mut rng);
        let r = equivalence_check(&s, &(&u * &s * u.adjoint()), EquivalenceTol::default());
        assert_eq!(r.verdict, Verdict::Equivalent);
        assert_eq!(r.word_length, 8);
    }

    #[test]
    fn charpoly_of_jordan() {
        let cp = charpoly(&jordan());
        assert!(cp.iter().take(2).all(|z| z.norm() < 1e-15));
        assert!((cp[2] - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn congruence_scalar_phase() {
        let t = CMat::from_element(1, 1, c(0.3, 0.2));
        let an = defect_analysis(&t, CONTRACTION_TOL).unwrap();
        let u = CMat::from_element(1, 1, Complex64::from_polar(1.0, 0.9));
        let data = congruence_data(&an, &an, &u, &grid(), 1e-12).unwrap();
        assert!((data.u_plus[(0, 0)] - u[(0, 0)]).norm() < 1e-15);
        assert!((data.u_minus[(0, 0)] - u[(0, 0)]).norm() < 1e-15);
        assert!(data.weyl_residual < 1e-15 && data.mark_residual < 1e-15);
        let bad = CMat::from_element(1, 1, re(0.5));
        assert!(congruence_data(&an, &an, &bad, &grid(), 1e-12).is_err());
    }
}
