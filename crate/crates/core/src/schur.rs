//! Matrix-valued Schur functions on the unit disc.
//!
//! The computable representation is a transfer-function realization
//! `B(λ) = D + λ C (I - λA)⁻¹ B_in`, which makes derivatives exact. Anything
//! that can only be sampled implements [`SchurFunction`] without a derivative.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{identity, inverse, re, solve, spectral_norm, spectral_radius, CMat};

/// Number of points on the validation circle.
pub const VALIDATION_POINTS: usize = 64;
/// Radius of the validation circle.
pub const VALIDATION_RADIUS: f64 = 0.99;

/// A `n₋ × n₊` matrix-valued analytic function on `𝔻`.
pub trait SchurFunction {
    fn n_plus(&self) -> usize;
    fn n_minus(&self) -> usize;
    fn eval(&self, lambda: Complex64) -> Result<CMat>;
    /// `B'(λ)`, when it can be computed exactly.
    fn derivative(&self, _lambda: Complex64) -> Option<Result<CMat>> {
        None
    }
}

fn check_inside(lambda: Complex64) -> Result<()> {
    if lambda.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisc { modulus: lambda.norm() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurRealization {
    a: CMat,
    b_in: CMat,
    c: CMat,
    d: CMat,
}

impl SchurRealization {
    pub fn new(a: CMat, b_in: CMat, c: CMat, d: CMat) -> Result<SchurRealization> {
        let s = a.nrows();
        let bad = |what: &str| Err(Error::InvalidRealization(what.to_string()));
        if a.ncols() != s {
            return bad("A must be square");
        }
        if b_in.nrows() != s || b_in.ncols() != d.ncols() {
            return bad("B_in must be state_dim x n_plus");
        }
        if c.ncols() != s || c.nrows() != d.nrows() {
            return bad("C must be n_minus x state_dim");
        }
        Ok(SchurRealization { a, b_in, c, d })
    }

    /// The constant function `D`.
    pub fn constant(d: CMat) -> SchurRealization {
        let (m, p) = d.shape();
        SchurRealization { a: CMat::zeros(0, 0), b_in: CMat::zeros(0, p), c: CMat::zeros(m, 0), d }
    }

    /// `B(λ) = λᵏ · Id_m`.
    pub fn monomial(k: usize, m: usize) -> SchurRealization {
        if k == 0 {
            return SchurRealization::constant(identity(m));
        }
        // shift register of length k per channel
        let s = k * m;
        let mut a = CMat::zeros(s, s);
        let mut b_in = CMat::zeros(s, m);
        let mut c = CMat::zeros(m, s);
        for ch in 0..m {
            let base = ch * k;
            b_in[(base, ch)] = re(1.0);
            for j in 1..k {
                a[(base + j, base + j - 1)] = re(1.0);
            }
            c[(ch, base + k - 1)] = re(1.0);
        }
        SchurRealization { a, b_in, c, d: CMat::zeros(m, m) }
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b_in(&self) -> &CMat {
        &self.b_in
    }

    pub fn c(&self) -> &CMat {
        &self.c
    }

    pub fn d(&self) -> &CMat {
        &self.d
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    fn resolvent(&self, lambda: Complex64) -> Result<CMat> {
        let s = self.state_dim();
        inverse(&(identity(s) - &self.a * lambda), "I - λA")
    }

    /// Realization of `λ ↦ (M₂₁ + M₂₂B(λ))(M₁₁ + M₁₂B(λ))⁻¹` for a block
    /// matrix `M` in standard coordinates (the Möbius action, pointwise).
    pub fn mobius(&self, m: &CMat) -> Result<SchurRealization> {
        let (nm, np) = self.d.shape();
        if m.shape() != (np + nm, np + nm) {
            return Err(Error::DimensionMismatch { expected: np + nm, found: m.nrows() });
        }
        let m11 = m.view((0, 0), (np, np)).into_owned();
        let m12 = m.view((0, np), (np, nm)).into_owned();
        let m21 = m.view((np, 0), (nm, np)).into_owned();
        let m22 = m.view((np, np), (nm, nm)).into_owned();
        let e = &m11 + &m12 * &self.d;
        let f = &m21 + &m22 * &self.d;
        let e_inv = inverse(&e, "Möbius feedthrough").map_err(|_| Error::NotAGraph)?;
        let a = &self.a - &self.b_in * &e_inv * &m12 * &self.c;
        let b_in = &self.b_in * &e_inv;
        let c = (&m22 - &f * &e_inv * &m12) * &self.c;
        let d = &f * &e_inv;
        Ok(SchurRealization { a, b_in, c, d })
    }

    /// Sampled check of the Schur condition: the spectral radius of `A` is
    /// below one and `‖B(λ)‖ < 1` on [`VALIDATION_POINTS`] points of the
    /// circle of radius [`VALIDATION_RADIUS`]. Returns the largest norm seen.
    pub fn validate(&self) -> Result<f64> {
        let rho = spectral_radius(&self.a);
        if rho >= 1.0 {
            return Err(Error::InvalidRealization(format!("spectral radius of A is {rho:.6}")));
        }
        let mut worst = spectral_norm(&self.d);
        for k in 0..VALIDATION_POINTS {
            let z = Complex64::from_polar(VALIDATION_RADIUS, 2.0 * PI * k as f64 / VALIDATION_POINTS as f64);
            worst = worst.max(spectral_norm(&self.eval(z)?));
        }
        if worst >= 1.0 {
            return Err(Error::InvalidRealization(format!("sampled norm of B reaches {worst:.6}")));
        }
        Ok(worst)
    }
}

impl SchurFunction for SchurRealization {
    fn n_plus(&self) -> usize {
        self.d.ncols()
    }

    fn n_minus(&self) -> usize {
        self.d.nrows()
    }

    fn eval(&self, lambda: Complex64) -> Result<CMat> {
        check_inside(lambda)?;
        if self.state_dim() == 0 {
            return Ok(self.d.clone());
        }
        let s = self.state_dim();
        let x = solve(&(identity(s) - &self.a * lambda), &self.b_in, "I - λA")?;
        Ok(&self.d + &self.c * x * lambda)
    }

    fn derivative(&self, lambda: Complex64) -> Option<Result<CMat>> {
        if let Err(e) = check_inside(lambda) {
            return Some(Err(e));
        }
        if self.state_dim() == 0 {
            return Some(Ok(CMat::zeros(self.n_minus(), self.n_plus())));
        }
        Some(self.resolvent(lambda).map(|r| &self.c * &r * &r * &self.b_in))
    }
}

/// A Schur function known only through point evaluations.
pub struct SampledSchur<F> {
    n_plus: usize,
    n_minus: usize,
    f: F,
}

impl<F> SampledSchur<F>
where
    F: Fn(Complex64) -> Result<CMat>,
{
    pub fn new(n_plus: usize, n_minus: usize, f: F) -> Self {
        SampledSchur { n_plus, n_minus, f }
    }
}

impl<F> SchurFunction for SampledSchur<F>
where
    F: Fn(Complex64) -> Result<CMat>,
{
    fn n_plus(&self) -> usize {
        self.n_plus
    }

    fn n_minus(&self) -> usize {
        self.n_minus
    }

    fn eval(&self, lambda: Complex64) -> Result<CMat> {
        check_inside(lambda)?;
        (self.f)(lambda)
    }
}
