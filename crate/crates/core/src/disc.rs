//! Points of the two-disc domain `𝔻₊ ⊔ 𝔻₋` and sample grids over it.
//!
//! `𝔻₋` is the exterior of the unit circle in the chart `λ ↦ 1/λ`, so both
//! discs use a coordinate of modulus below one and the two origins `0₊` and
//! `0₋` are distinct points.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Disc {
    Plus,
    Minus,
}

impl Disc {
    pub fn opposite(self) -> Disc {
        match self {
            Disc::Plus => Disc::Minus,
            Disc::Minus => Disc::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    coord: Complex64,
    disc: Disc,
}

impl DiscPoint {
    pub fn new(coord: Complex64, disc: Disc) -> Result<DiscPoint> {
        let modulus = coord.norm();
        if modulus.is_nan() || modulus >= 1.0 {
            return Err(Error::OutsideDisc { modulus });
        }
        Ok(DiscPoint { coord, disc })
    }

    pub fn plus(coord: Complex64) -> Result<DiscPoint> {
        DiscPoint::new(coord, Disc::Plus)
    }

    pub fn minus(coord: Complex64) -> Result<DiscPoint> {
        DiscPoint::new(coord, Disc::Minus)
    }

    pub fn zero_plus() -> DiscPoint {
        DiscPoint { coord: Complex64::new(0.0, 0.0), disc: Disc::Plus }
    }

    pub fn zero_minus() -> DiscPoint {
        DiscPoint { coord: Complex64::new(0.0, 0.0), disc: Disc::Minus }
    }

    pub fn coord(&self) -> Complex64 {
        self.coord
    }

    pub fn disc(&self) -> Disc {
        self.disc
    }

    pub fn is_plus(&self) -> bool {
        self.disc == Disc::Plus
    }

    pub fn is_zero_minus(&self) -> bool {
        self.disc == Disc::Minus && self.coord == Complex64::new(0.0, 0.0)
    }

    /// `λ̄` read in the other disc.
    pub fn mirror(&self) -> DiscPoint {
        DiscPoint { coord: self.coord.conj(), disc: self.disc.opposite() }
    }
}

impl fmt::Display for DiscPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.disc {
            Disc::Plus => '+',
            Disc::Minus => '-',
        };
        write!(f, "({:.6}{:+.6}i){}", self.coord.re, self.coord.im, tag)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub r_max: f64,
    pub seed: u64,
    /// Relative jitter applied to radius and angle of every ring point.
    pub jitter: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { radii: vec![0.3, 0.6], angles: 8, r_max: 0.85, seed: 0, jitter: 0.05 }
    }
}

impl GridConfig {
    /// Builds `0₊, 0₋`, then the `𝔻₊` rings, then the `𝔻₋` rings. Angles on
    /// `𝔻₋` are offset by half a step so no point is the mirror of another.
    pub fn build(&self) -> Result<Vec<DiscPoint>> {
        if self.angles == 0 && !self.radii.is_empty() {
            return Err(Error::Precondition("grid needs at least one angle".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut pts = vec![DiscPoint::zero_plus(), DiscPoint::zero_minus()];
        for disc in [Disc::Plus, Disc::Minus] {
            let offset = if disc == Disc::Minus { 0.5 } else { 0.0 };
            for &r in &self.radii {
                if !(r > 0.0 && r <= self.r_max && self.r_max < 1.0) {
                    return Err(Error::Precondition(format!(
                        "grid radius {r} outside (0, r_max = {}]",
                        self.r_max
                    )));
                }
                for k in 0..self.angles {
                    let dr: f64 = rng.random_range(-1.0..1.0) * self.jitter;
                    let da: f64 = rng.random_range(-1.0..1.0) * self.jitter;
                    let radius = (r * (1.0 + dr)).min(self.r_max);
                    let theta = 2.0 * PI * (k as f64 + offset + da) / self.angles as f64;
                    pts.push(DiscPoint::new(Complex64::from_polar(radius, theta), disc)?);
                }
            }
        }
        Ok(pts)
    }

    /// A second, interleaved ring set used to detect rank growth.
    pub fn refinement(&self) -> GridConfig {
        let mut radii: Vec<f64> = self.radii.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        if let Some(&last) = self.radii.last() {
            radii.push(0.5 * (last + self.r_max));
        }
        if radii.is_empty() {
            radii.push(0.5 * self.r_max);
        }
        GridConfig { radii, angles: self.angles.max(1) + 1, seed: self.seed.wrapping_add(1), ..self.clone() }
    }

    /// Same rings with twice as many angles.
    pub fn doubled(&self) -> GridConfig {
        GridConfig { angles: self.angles * 2, ..self.clone() }
    }
}

/// Concatenates grids, dropping duplicate copies of `0₊` and `0₋`.
pub fn merge_grids(a: &[DiscPoint], b: &[DiscPoint]) -> Vec<DiscPoint> {
    let mut out = a.to_vec();
    for p in b {
        if !out.iter().any(|q| q == p) {
            out.push(*p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = GridConfig::default().build().unwrap();
        assert_eq!(g.len(), 2 + 2 * 2 * 8);
        assert_eq!(g[0], DiscPoint::zero_plus());
        assert!(g[1].is_zero_minus());
        assert!(g.iter().all(|p| p.coord().norm() <= 0.85));
        // no accidental mirror pairs apart from the two origins
        for p in &g[2..] {
            for q in &g[2..] {
                assert!((p.coord() - q.mirror().coord()).norm() > 1e-3 || p.disc() == q.disc());
            }
        }
    }

    #[test]
    fn grid_is_deterministic_per_seed() {
        let a = GridConfig::default().build().unwrap();
        let b = GridConfig::default().build().unwrap();
        assert_eq!(a, b);
        let c = GridConfig { seed: 7, ..GridConfig::default() }.build().unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_points_outside() {
        assert!(DiscPoint::plus(Complex64::new(1.0, 0.0)).is_err());
        let bad = GridConfig { radii: vec![0.9], ..GridConfig::default() };
        assert!(bad.build().is_err());
    }

    #[test]
    fn mirror_swaps_disc() {
        let p = DiscPoint::plus(Complex64::new(0.2, 0.3)).unwrap();
        let m = p.mirror();
        assert_eq!(m.disc(), Disc::Minus);
        assert_eq!(m.coord(), Complex64::new(0.2, -0.3));
        assert_eq!(m.mirror(), p);
        assert!(DiscPoint::zero_plus().mirror().is_zero_minus());
    }
}
