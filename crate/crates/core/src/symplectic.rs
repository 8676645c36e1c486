//! Finite-dimensional strong symplectic spaces.
//!
//! A space is a complex vector space `ℂᵈ` together with a skew-adjoint,
//! nondegenerate form matrix `J`; the pairing is `[u, v] = v* J u`, linear in
//! `u` and conjugate-linear in `v`. `-i[·,·]` is then an indefinite Hermitian
//! inner product whose inertia is the signature `(n₊, n₋)`.
//!
//! Subspaces are stored as Euclidean-orthonormal frames. The graph
//! parameterization of maximal positive-definite subspaces, the pseudo-unitary
//! group and its Möbius action are all expressed relative to a
//! [`Polarization`], whose bases are orthonormal for the induced inner
//! products `(·,·)₊ = -i[·,·]|_L` and `(·,·)₋ = i[·,·]|_{L^⊥s}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    block2, hermitian_eigen, hstack, identity, inverse, null_space, orthonormal_basis,
    pd_inv_sqrt, re, spectral_norm, subspace_distance, vstack, zeros, CMat, CVec, I,
    RANK_TOL, SUBSPACE_TOL,
};

/// Relative nondegeneracy floor for eigenvalues of `-iJ`.
pub const NONDEGENERACY_TOL: f64 = 1e-12;

/// Default tolerance used when classifying subspaces.
pub const CLASSIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// `[x,y] = i(x₁,y₁) - i(x₂,y₂)` on `ℂ^{n₊} ⊕ ℂ^{n₋}`.
    Standard { n_plus: usize, n_minus: usize },
    /// `[(x₁,y₁),(x₂,y₂)] = (y₁,x₂) - (x₁,y₂)` on `ℂⁿ ⊕ ℂⁿ`.
    Graph { n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpace {
    form: CMat,
    signature: (usize, usize),
}

impl SymplecticSpace {
    pub fn make(kind: SpaceKind) -> Result<Self> {
        match kind {
            SpaceKind::Standard { n_plus, n_minus } => Self::standard(n_plus, n_minus),
            SpaceKind::Graph { n } => Self::graph(n),
        }
    }

    pub fn standard(n_plus: usize, n_minus: usize) -> Result<Self> {
        let dim = n_plus + n_minus;
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut form = zeros(dim, dim);
        for k in 0..dim {
            form[(k, k)] = if k < n_plus { I } else { -I };
        }
        Self::from_form(form)
    }

    pub fn graph(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let form = block2(&zeros(n, n), &identity(n), &(-identity(n)), &zeros(n, n));
        Self::from_form(form)
    }

    /// Builds a space from an arbitrary form matrix, validating skew-adjointness
    /// and nondegeneracy. A zero-dimensional form is accepted (it arises as the
    /// quotient by a Lagrangian subspace).
    pub fn from_form(form: CMat) -> Result<Self> {
        if form.nrows() != form.ncols() {
            return Err(Error::DimensionMismatch { expected: form.nrows(), found: form.ncols() });
        }
        let dim = form.nrows();
        if dim == 0 {
            return Ok(SymplecticSpace { form, signature: (0, 0) });
        }
        let scale = spectral_norm(&form).max(f64::MIN_POSITIVE);
        let defect = (&form + form.adjoint()).norm();
        if defect > 1e-10 * scale {
            return Err(Error::NotSkewAdjoint { defect });
        }
        let herm = hermitian_part(&form);
        let (vals, _) = hermitian_eigen(&herm);
        let smallest = vals.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        if smallest < NONDEGENERACY_TOL * scale {
            return Err(Error::DegenerateForm { smallest });
        }
        let n_plus = vals.iter().filter(|&&v| v > 0.0).count();
        Ok(SymplecticSpace { form, signature: (n_plus, dim - n_plus) })
    }

    pub fn dim(&self) -> usize {
        self.form.nrows()
    }

    pub fn form(&self) -> &CMat {
        &self.form
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// `[u, v] = v* J u`.
    pub fn pairing(&self, u: &CVec, v: &CVec) -> Complex64 {
        (v.adjoint() * &self.form * u)[(0, 0)]
    }

    /// Matrix of pairings `[a_j, b_i]` between frame columns: `b* J a`.
    pub fn pairing_matrix(&self, a: &CMat, b: &CMat) -> CMat {
        b.adjoint() * &self.form * a
    }

    /// Orthogonal direct sum with the sum of the two forms.
    pub fn direct_sum(&self, other: &SymplecticSpace) -> SymplecticSpace {
        let (d1, d2) = (self.dim(), other.dim());
        let form = block2(&self.form, &zeros(d1, d2), &zeros(d2, d1), &other.form);
        SymplecticSpace {
            form,
            signature: (self.signature.0 + other.signature.0, self.signature.1 + other.signature.1),
        }
    }

    /// The same space with the opposite form `-[·,·]`.
    pub fn opposite(&self) -> SymplecticSpace {
        SymplecticSpace { form: -&self.form, signature: (self.signature.1, self.signature.0) }
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: d });
        }
        Ok(())
    }
}

/// `-iJ`, Hermitian for skew-adjoint `J`.
fn hermitian_part(form: &CMat) -> CMat {
    let h = form * (-I);
    (&h + h.adjoint()) * re(0.5)
}

/// A linear subspace, stored as a Euclidean-orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    frame: CMat,
}

impl Subspace {
    /// Subspace spanned by the columns of `m`.
    pub fn span(m: &CMat) -> Subspace {
        Subspace { frame: orthonormal_basis(m, RANK_TOL) }
    }

    /// Wraps a frame that is already orthonormal.
    pub fn from_orthonormal(frame: CMat) -> Subspace {
        debug_assert!(
            (frame.adjoint() * &frame - identity(frame.ncols())).norm() < 1e-8,
            "frame is not orthonormal"
        );
        Subspace { frame }
    }

    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace { frame: zeros(ambient_dim, 0) }
    }

    pub fn whole(ambient_dim: usize) -> Subspace {
        Subspace { frame: identity(ambient_dim) }
    }

    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    pub fn rank(&self) -> usize {
        self.frame.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    /// Euclidean orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMat {
        &self.frame * self.frame.adjoint()
    }

    /// Euclidean orthogonal complement.
    pub fn orthogonal_complement(&self) -> Subspace {
        Subspace { frame: null_space(&self.frame.adjoint(), RANK_TOL, 0.0) }
    }

    /// Sine of the largest principal angle (1.0 when dimensions differ).
    pub fn distance(&self, other: &Subspace) -> f64 {
        subspace_distance(&self.frame, &other.frame)
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.distance(other) < SUBSPACE_TOL
    }

    /// Span of both subspaces.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&hstack(&[&self.frame, &other.frame]))
    }

    /// Distance of `v` from the subspace, relative to `|v|`.
    pub fn relative_defect(&self, v: &CVec) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        (v - &self.frame * (self.frame.adjoint() * v)).norm() / n
    }
}

/// Symplectic complement `S^⊥s = { x : [x, s] = 0 for all s ∈ S }`, i.e. the
/// null space of `S* J`.
pub fn symp_complement(space: &SymplecticSpace, s: &Subspace) -> Result<Subspace> {
    space.check_dim(s.ambient_dim())?;
    if s.rank() == 0 {
        return Ok(Subspace::whole(space.dim()));
    }
    let constraint = s.frame.adjoint() * &space.form;
    let null = null_space(&constraint, RANK_TOL, 0.0);
    Ok(Subspace { frame: null })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceKind {
    Isotropic,
    /// Maximal positive-definite. At finite dimension this is the same as
    /// maximal completely positive-definite.
    MaxPositiveDefinite,
    PositiveDefinite,
    MaxNegativeDefinite,
    NegativeDefinite,
    /// Semi-definite with a nontrivial radical, but not isotropic.
    Degenerate,
    Indefinite,
}

/// Inertia of the compressed Hermitian form `-i S* J S`.
pub fn compressed_inertia(space: &SymplecticSpace, s: &Subspace) -> Result<Vec<f64>> {
    space.check_dim(s.ambient_dim())?;
    let h = s.frame.adjoint() * hermitian_part(&space.form) * &s.frame;
    Ok(hermitian_eigen(&h).0)
}

pub fn classify_subspace(space: &SymplecticSpace, s: &Subspace, tol: f64) -> Result<SubspaceKind> {
    let vals = compressed_inertia(space, s)?;
    let scale = spectral_norm(&space.form).max(1.0);
    let eps = tol * scale;
    let pos = vals.iter().filter(|&&v| v > eps).count();
    let neg = vals.iter().filter(|&&v| v < -eps).count();
    let null = vals.len() - pos - neg;
    let (n_plus, n_minus) = space.signature;
    Ok(match (pos, neg, null) {
        (0, 0, _) => SubspaceKind::Isotropic,
        (p, 0, 0) if p == n_plus => SubspaceKind::MaxPositiveDefinite,
        (_, 0, 0) => SubspaceKind::PositiveDefinite,
        (0, q, 0) if q == n_minus => SubspaceKind::MaxNegativeDefinite,
        (0, _, 0) => SubspaceKind::NegativeDefinite,
        (_, 0, _) | (0, _, _) => SubspaceKind::Degenerate,
        _ => SubspaceKind::Indefinite,
    })
}

/// The quotient `A^⊥s / A` of a space by an isotropic subspace, realized on
/// the Euclidean orthocomplement of `A` inside `A^⊥s`.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    parent: SymplecticSpace,
    iso: Subspace,
    rep_frame: Subspace,
    space: SymplecticSpace,
}

impl QuotientSpace {
    pub fn parent(&self) -> &SymplecticSpace {
        &self.parent
    }

    pub fn iso(&self) -> &Subspace {
        &self.iso
    }

    pub fn rep_frame(&self) -> &Subspace {
        &self.rep_frame
    }

    /// The induced space `[[x],[y]]_q = [x, y]` in representative coordinates.
    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    /// Quotient coordinates of vectors of `A^⊥s` (columns of `m`).
    pub fn coordinates(&self, m: &CMat) -> CMat {
        self.rep_frame.frame.adjoint() * m
    }

    /// Image in the quotient of a subspace of `A^⊥s`.
    pub fn image(&self, s: &Subspace) -> Subspace {
        Subspace::span(&self.coordinates(&s.frame))
    }
}

pub fn quotient(space: &SymplecticSpace, a: &Subspace) -> Result<QuotientSpace> {
    if classify_subspace(space, a, CLASSIFY_TOL)? != SubspaceKind::Isotropic {
        return Err(Error::NotIsotropic);
    }
    let perp = symp_complement(space, a)?;
    // Euclidean orthocomplement of A inside A^⊥s
    let rep = if a.rank() == 0 {
        perp
    } else {
        let n = null_space(&(a.frame.adjoint() * &perp.frame), RANK_TOL, 0.0);
        Subspace::from_orthonormal(&perp.frame * n)
    };
    let induced = space.pairing_matrix(&rep.frame, &rep.frame);
    let induced = (&induced - induced.adjoint()) * re(0.5);
    Ok(QuotientSpace {
        parent: space.clone(),
        iso: a.clone(),
        rep_frame: rep,
        space: SymplecticSpace::from_form(induced)?,
    })
}

/// A polarization `L`: a maximal positive-definite subspace, together with
/// its symplectic complement and bases orthonormal for `(·,·)±`.
#[derive(Debug, Clone)]
pub struct Polarization {
    space: SymplecticSpace,
    plus_frame: Subspace,
    minus_frame: Subspace,
    plus_basis: CMat,
    minus_basis: CMat,
}

impl Polarization {
    pub fn new(space: &SymplecticSpace, plus: &Subspace) -> Result<Polarization> {
        if classify_subspace(space, plus, CLASSIFY_TOL)? != SubspaceKind::MaxPositiveDefinite {
            return Err(Error::NotMaximalPositive);
        }
        let minus = symp_complement(space, plus)?;
        let gp = (space.pairing_matrix(&plus.frame, &plus.frame) * (-I)).adjoint();
        let gm = (space.pairing_matrix(&minus.frame, &minus.frame) * I).adjoint();
        let plus_basis = &plus.frame * pd_inv_sqrt(&gp)?;
        let minus_basis = &minus.frame * pd_inv_sqrt(&gm)?;
        Ok(Polarization {
            space: space.clone(),
            plus_frame: plus.clone(),
            minus_frame: minus,
            plus_basis,
            minus_basis,
        })
    }

    /// Polarization by the positive eigenspace of `-iJ`; for a standard
    /// space this is the standard polarization `{(x, 0)}`.
    pub fn canonical(space: &SymplecticSpace) -> Result<Polarization> {
        let (vals, vecs) = hermitian_eigen(&hermitian_part(&space.form));
        let cols: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 0.0).collect();
        let mut frame = zeros(space.dim(), cols.len());
        for (j, &k) in cols.iter().enumerate() {
            frame.set_column(j, &vecs.column(k));
        }
        Polarization::new(space, &Subspace::span(&frame))
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn plus_frame(&self) -> &Subspace {
        &self.plus_frame
    }

    pub fn minus_frame(&self) -> &Subspace {
        &self.minus_frame
    }

    pub fn n_plus(&self) -> usize {
        self.plus_basis.ncols()
    }

    pub fn n_minus(&self) -> usize {
        self.minus_basis.ncols()
    }

    /// `[P M]`: maps standard coordinates `(c₊, c₋)` to the ambient space.
    /// This is a symplectic isomorphism from the standard space.
    pub fn basis(&self) -> CMat {
        hstack(&[&self.plus_basis, &self.minus_basis])
    }

    /// Inverse of [`Polarization::basis`]: `c₊ = -i P* J x`, `c₋ = i M* J x`.
    pub fn coordinates_map(&self) -> CMat {
        let j = &self.space.form;
        vstack(&[&(self.plus_basis.adjoint() * j * (-I)), &(self.minus_basis.adjoint() * j * I)])
    }
}

/// `W = { x + Bx : x ∈ L }` for a strict contraction `B: L → L^⊥s`, with `B`
/// given as an `n₋ × n₊` matrix in the `(·,·)±`-orthonormal bases.
pub fn graph_of_param(pol: &Polarization, b: &CMat) -> Result<Subspace> {
    if b.shape() != (pol.n_minus(), pol.n_plus()) {
        return Err(Error::DimensionMismatch { expected: pol.n_minus() * pol.n_plus(), found: b.len() });
    }
    let norm = spectral_norm(b);
    if norm >= 1.0 {
        return Err(Error::NotStrictContraction { norm });
    }
    Ok(Subspace::span(&(&pol.plus_basis + &pol.minus_basis * b)))
}

/// Inverse of [`graph_of_param`].
pub fn graph_param_of(pol: &Polarization, w: &Subspace) -> Result<CMat> {
    if classify_subspace(&pol.space, w, CLASSIFY_TOL)? != SubspaceKind::MaxPositiveDefinite {
        return Err(Error::NotMaximalPositive);
    }
    let coords = pol.coordinates_map() * &w.frame;
    let np = pol.n_plus();
    let cp = coords.rows(0, np).into_owned();
    let cm = coords.rows(np, pol.n_minus()).into_owned();
    Ok(cm * inverse(&cp, "graph coordinate block")?)
}

/// An element of the pseudo-unitary group `U(n₊, n₋)` of a space.
#[derive(Debug, Clone)]
pub struct PseudoUnitary {
    space: SymplecticSpace,
    matrix: CMat,
}

impl PseudoUnitary {
    pub fn new(space: &SymplecticSpace, matrix: CMat) -> Result<PseudoUnitary> {
        space.check_dim(matrix.nrows())?;
        space.check_dim(matrix.ncols())?;
        let defect = (matrix.adjoint() * space.form() * &matrix - space.form()).norm();
        if defect > 1e-8 * (1.0 + matrix.norm().powi(2)) {
            return Err(Error::Precondition(format!("M*JM != J (defect {defect:.3e})")));
        }
        Ok(PseudoUnitary { space: space.clone(), matrix })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    /// `‖M*JM - J‖_F`.
    pub fn defect(&self) -> f64 {
        (self.matrix.adjoint() * self.space.form() * &self.matrix - self.space.form()).norm()
    }

    pub fn compose(&self, other: &PseudoUnitary) -> Result<PseudoUnitary> {
        self.space.check_dim(other.space.dim())?;
        Ok(PseudoUnitary { space: self.space.clone(), matrix: &self.matrix * &other.matrix })
    }

    pub fn inverse(&self) -> PseudoUnitary {
        // M⁻¹ = J⁻¹ M* J
        let j = self.space.form();
        let jinv = j.clone().try_inverse().expect("form is nondegenerate");
        PseudoUnitary { space: self.space.clone(), matrix: jinv * self.matrix.adjoint() * j }
    }

    /// Matrix of the element in the standard coordinates of `pol`.
    pub fn in_coordinates(&self, pol: &Polarization) -> CMat {
        pol.coordinates_map() * &self.matrix * pol.basis()
    }
}

/// The block operator
/// `[[(1-B*B)^{-1/2}, -B*(1-BB*)^{-1/2}], [B(1-B*B)^{-1/2}, -(1-BB*)^{-1/2}]]`
/// in standard coordinates; it carries `L` (parameter 0) to the graph of `B`.
pub fn contraction_block(b: &CMat) -> Result<CMat> {
    let norm = spectral_norm(b);
    if norm >= 1.0 {
        return Err(Error::NotStrictContraction { norm });
    }
    let (m, p) = b.shape();
    let left = pd_inv_sqrt(&(identity(p) - b.adjoint() * b))?;
    let right = pd_inv_sqrt(&(identity(m) - b * b.adjoint()))?;
    Ok(block2(&left, &(-(b.adjoint() * &right)), &(b * &left), &(-right)))
}

pub fn pseudo_unitary_of_contraction(pol: &Polarization, b: &CMat) -> Result<PseudoUnitary> {
    if b.shape() != (pol.n_minus(), pol.n_plus()) {
        return Err(Error::DimensionMismatch { expected: pol.n_minus() * pol.n_plus(), found: b.len() });
    }
    let coord = contraction_block(b)?;
    let ambient = pol.basis() * coord * pol.coordinates_map();
    PseudoUnitary::new(pol.space(), ambient)
}

/// Linear-fractional action of a standard-coordinate block matrix on a graph
/// parameter: `B' = (M₂₁ + M₂₂B)(M₁₁ + M₁₂B)⁻¹`.
pub fn mobius_in_coordinates(m: &CMat, b: &CMat) -> Result<CMat> {
    let (nm, np) = b.shape();
    if m.nrows() != np + nm || m.ncols() != np + nm {
        return Err(Error::DimensionMismatch { expected: np + nm, found: m.nrows() });
    }
    let m11 = m.view((0, 0), (np, np));
    let m12 = m.view((0, np), (np, nm));
    let m21 = m.view((np, 0), (nm, np));
    let m22 = m.view((np, np), (nm, nm));
    let denom = m11 + m12 * b;
    let numer = m21 + m22 * b;
    let inv = inverse(&denom, "Möbius denominator").map_err(|_| Error::NotAGraph)?;
    Ok(numer * inv)
}

pub fn mobius_apply(m: &PseudoUnitary, pol: &Polarization, b: &CMat) -> Result<CMat> {
    mobius_in_coordinates(&m.in_coordinates(pol), b)
}

/// Matrix of the Cayley transform `β(x, y) = ((y + ix)/√2, (y - ix)/√2)`
/// from `graph(n)` to `standard(n, n)`.
pub fn cayley_matrix(n: usize) -> CMat {
    let s = re(std::f64::consts::FRAC_1_SQRT_2);
    let id = identity(n);
    block2(&(&id * (I * s)), &(&id * s), &(&id * (-I * s)), &(&id * s))
}

pub fn cayley(v: &CVec) -> Result<CVec> {
    if !v.len().is_multiple_of(2) || v.is_empty() {
        return Err(Error::DimensionMismatch { expected: v.len() + v.len() % 2, found: v.len() });
    }
    Ok(cayley_matrix(v.len() / 2) * v)
}

pub fn cayley_subspace(s: &Subspace) -> Result<Subspace> {
    let d = s.ambient_dim();
    if !d.is_multiple_of(2) || d == 0 {
        return Err(Error::DimensionMismatch { expected: d + d % 2, found: d });
    }
    Ok(Subspace::span(&(cayley_matrix(d / 2) * &s.frame)))
}
