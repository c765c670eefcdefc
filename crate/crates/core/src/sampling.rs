//! Seeded sample grids used to certify universally quantified conditions.

use crate::linalg::{self, C64};
use crate::operator::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Seed of the z / y grids over x^⊥ ∩ S.
pub const PERP_SEED: u64 = 0xA77A1;
/// Magnitude splits of the (a, b) grid.
pub const AB_MAGNITUDES: usize = 64;
/// Relative phases of the (a, b) grid.
pub const AB_PHASES: usize = 16;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard Gaussian vector; imaginary parts stay zero for the real field.
pub fn gaussian(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = match field {
                Field::Real => 0.0,
                Field::Complex => StandardNormal.sample(rng),
            };
            C64::new(re, im)
        })
        .collect()
}

/// Uniform point on the ℓ₂ unit sphere of 𝔽ⁿ.
pub fn unit_gaussian(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Vec<C64> {
    loop {
        let g = gaussian(rng, n, field);
        if linalg::norm(&g) > 1e-12 {
            return linalg::normalize(&g);
        }
    }
}

/// `count` unit vectors orthogonal to the unit vector `x`.
pub fn perp_samples(x: &[C64], field: Field, count: usize, seed: u64) -> Vec<Vec<C64>> {
    let n = x.len();
    if n < 2 {
        return Vec::new();
    }
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = gaussian(&mut r, n, field);
        let p = linalg::axpy(-linalg::inner(&g, x), x, &g);
        if linalg::norm(&p) > 1e-8 {
            out.push(linalg::normalize(&p));
        }
    }
    out
}

/// The default grid: 32·(n − 1) samples from [`PERP_SEED`].
pub fn default_perp_samples(x: &[C64], field: Field) -> Vec<Vec<C64>> {
    perp_samples(x, field, 32 * x.len().saturating_sub(1), PERP_SEED)
}

/// Pairs (a, b) with |a|² + |b|² = 1: a = cos t ≥ 0, b = sin t·e^{iφ},
/// t uniform on [0, π/2] and φ uniform on [0, 2π).
pub fn ab_grid() -> Vec<(C64, C64)> {
    let mut out = Vec::with_capacity(AB_MAGNITUDES * AB_PHASES);
    for i in 0..AB_MAGNITUDES {
        let t = 0.5 * PI * i as f64 / (AB_MAGNITUDES - 1) as f64;
        for j in 0..AB_PHASES {
            let phi = 2.0 * PI * j as f64 / AB_PHASES as f64;
            out.push((C64::new(t.cos(), 0.0), C64::from_polar(t.sin(), phi)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perp_samples_are_orthogonal_unit_and_reproducible() {
        let x = linalg::normalize(&[C64::new(1.0, 0.5), C64::new(-0.3, 0.0), C64::new(0.0, 2.0)]);
        let a = perp_samples(&x, Field::Complex, 64, PERP_SEED);
        let b = perp_samples(&x, Field::Complex, 64, PERP_SEED);
        assert_eq!(a, b);
        for z in &a {
            assert!(linalg::inner(z, &x).norm() < 1e-14);
            assert!((linalg::norm(z) - 1.0).abs() < 1e-14);
        }
        assert_eq!(default_perp_samples(&x, Field::Real).len(), 64);
        assert!(default_perp_samples(&x[..1], Field::Real).is_empty());
    }

    #[test]
    fn ab_grid_is_on_the_circle() {
        let g = ab_grid();
        assert_eq!(g.len(), 1024);
        for (a, b) in g {
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-14);
        }
    }
}
