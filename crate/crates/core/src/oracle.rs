//! Brute-force estimates by sampling the unit sphere.
//!
//! Nothing here uses the spectral machinery: each quantity is evaluated
//! straight from its definition on a seeded point cloud, then polished by
//! coordinate descent from the best sample.

use crate::attainment::Quantity;
use crate::linalg::{self, C64};
use crate::normed::NormingFamily;
use crate::operator::{Field, Operator};
use crate::sampling;
use crate::space::SpaceSpec;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::Serialize;

/// Coordinate-descent step-size levels.
pub const REFINE_LEVELS: usize = 50;
pub const REFINE_STEP: f64 = 0.1;
/// Attainers closer than this (up to a unimodular factor) are merged.
pub const DEDUPE_DISTANCE: f64 = 1e-2;

pub fn default_cloud_size(n: usize) -> usize {
    if n <= 4 {
        100_000
    } else {
        10_000 * n
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleCloud {
    pub points: Vec<Vec<C64>>,
    pub seed: u64,
    pub count: usize,
    pub field: Field,
    pub space: SpaceSpec,
}

/// Seeded points on the unit sphere of the space. ℓ₂ and ℓ_p use normalized
/// Gaussians; ℓ₁, ℓ∞ and polygons pick a face and a uniform point on it.
/// Spaces other than ℓ₂ are real, so `field` only matters there.
pub fn sample_sphere(space: &SpaceSpec, field: Field, n: usize, count: usize, seed: u64) -> SampleCloud {
    let mut rng = sampling::rng(seed);
    let field = if *space == SpaceSpec::L2 { field } else { Field::Real };
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let x: Option<Vec<f64>> = match space {
            SpaceSpec::L2 if field == Field::Complex => {
                points.push(sampling::unit_gaussian(&mut rng, n, field));
                None
            }
            SpaceSpec::L2 | SpaceSpec::Lp { .. } => {
                let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                let r = space.norm(&g);
                (r > 1e-12).then(|| g.iter().map(|a| a / r).collect())
            }
            SpaceSpec::L1 => {
                let e: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
                let s: f64 = e.iter().sum();
                Some(e.iter().map(|a| if rng.gen::<bool>() { a / s } else { -a / s }).collect())
            }
            SpaceSpec::Linf => {
                let k = rng.gen_range(0..n);
                let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                x[k] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                Some(x)
            }
            SpaceSpec::Polygon(poly) => {
                let lengths: Vec<f64> = (0..poly.len())
                    .map(|k| {
                        let (v, w) = (poly.vertex(k), poly.vertex(k + 1));
                        (w[0] - v[0]).hypot(w[1] - v[1])
                    })
                    .collect();
                let total: f64 = lengths.iter().sum();
                let mut pick = rng.gen_range(0.0..total);
                let mut k = 0;
                while k + 1 < lengths.len() && pick >= lengths[k] {
                    pick -= lengths[k];
                    k += 1;
                }
                let s: f64 = rng.gen_range(0.0..=1.0);
                let (v, w) = (poly.vertex(k), poly.vertex(k + 1));
                Some(vec![(1.0 - s) * v[0] + s * w[0], (1.0 - s) * v[1] + s * w[1]])
            }
        };
        if let Some(x) = x {
            points.push(linalg::real_vector(&x));
        }
    }
    SampleCloud { points, seed, count, field, space: space.clone() }
}

/// Evaluates a defining quantity at one unit vector.
struct Objective<'a> {
    t: &'a Operator,
    space: &'a SpaceSpec,
    quantity: Quantity,
}

impl Objective<'_> {
    fn value(&self, x: &[C64]) -> f64 {
        let tx = self.t.apply(x);
        match (self.quantity, self.space) {
            (Quantity::Norm | Quantity::MinNorm, _) => self.space.norm_complex(&tx),
            (_, SpaceSpec::L2) => linalg::inner(&tx, x).norm(),
            (q, space) => {
                let xr: Vec<f64> = x.iter().map(|z| z.re).collect();
                let txr: Vec<f64> = tx.iter().map(|z| z.re).collect();
                let fam = family(&xr, space);
                if q == Quantity::Radius {
                    fam.max_abs(&txr)
                } else {
                    fam.min_abs(&txr)
                }
            }
        }
    }

    fn maximizing(&self) -> bool {
        matches!(self.quantity, Quantity::Norm | Quantity::Radius)
    }

    fn better(&self, a: f64, b: f64) -> bool {
        if self.maximizing() {
            a > b
        } else {
            a < b
        }
    }

    fn normalize(&self, x: &[C64]) -> Vec<C64> {
        let r = self.space.norm_complex(x);
        x.iter().map(|z| z / r).collect()
    }

    /// Coordinate descent from `x`: try ±step along every real (and imaginary)
    /// coordinate, halving the step whenever a sweep makes no progress.
    fn refine(&self, x: &[C64], field: Field) -> (f64, Vec<C64>) {
        let mut x = x.to_vec();
        let mut best = self.value(&x);
        let mut step = REFINE_STEP;
        let dirs: &[C64] = match field {
            Field::Real => &[C64::new(1.0, 0.0)],
            Field::Complex => &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
        };
        for _ in 0..REFINE_LEVELS {
            for _ in 0..20 {
                let mut improved = false;
                for k in 0..x.len() {
                    for d in dirs {
                        for s in [step, -step] {
                            let mut y = x.clone();
                            y[k] += d * s;
                            if self.space.norm_complex(&y) < 1e-12 {
                                continue;
                            }
                            let y = self.normalize(&y);
                            let v = self.value(&y);
                            if self.better(v, best) {
                                best = v;
                                x = y;
                                improved = true;
                            }
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            step *= 0.5;
        }
        (best, x)
    }
}

fn family(x: &[f64], space: &SpaceSpec) -> NormingFamily {
    let x = space.normalize(x);
    crate::normed::norming_functionals(&x, space).expect("normalized sample")
}

/// The estimate and the unit vector realizing it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: f64,
    pub witness: Vec<C64>,
    /// The extremum over the raw cloud before refinement.
    pub cloud_value: f64,
}

/// Refinement starts from the best sample of every prefix of length
/// count, count/2, count/4, …; a cloud of twice the size reuses all of these
/// starts, so doubling the sample count never worsens the estimate.
pub fn oracle_estimate(t: &Operator, space: &SpaceSpec, cloud: &SampleCloud, quantity: Quantity) -> OracleEstimate {
    let obj = Objective { t, space, quantity };
    let total = cloud.points.len();
    let mut checkpoints: Vec<usize> = std::iter::successors(Some(total), |&m| (m > 1).then_some(m / 2)).collect();
    checkpoints.reverse();
    let mut starts: Vec<usize> = Vec::new();
    let mut best = (if obj.maximizing() { f64::NEG_INFINITY } else { f64::INFINITY }, 0);
    let mut next = 0;
    for (i, x) in cloud.points.iter().enumerate() {
        let v = obj.value(x);
        if obj.better(v, best.0) {
            best = (v, i);
        }
        while next < checkpoints.len() && checkpoints[next] == i + 1 {
            if !starts.contains(&best.1) {
                starts.push(best.1);
            }
            next += 1;
        }
    }
    let field = cloud.field.join(t.field());
    let field = if *space == SpaceSpec::L2 { field } else { Field::Real };
    let mut refined = starts.iter().map(|&i| obj.refine(&cloud.points[i], field));
    let first = refined.next().unwrap_or_else(|| obj.refine(&cloud.points[0], field));
    let (value, witness) = refined.fold(first, |acc, r| if obj.better(r.0, acc.0) { r } else { acc });
    OracleEstimate { value, witness, cloud_value: best.0 }
}

pub fn oracle_radius(t: &Operator, space: &SpaceSpec, cloud: &SampleCloud) -> f64 {
    oracle_estimate(t, space, cloud, Quantity::Radius).value
}

pub fn oracle_crawford(t: &Operator, space: &SpaceSpec, cloud: &SampleCloud) -> f64 {
    oracle_estimate(t, space, cloud, Quantity::Crawford).value
}

pub fn oracle_norm(t: &Operator, space: &SpaceSpec, cloud: &SampleCloud) -> f64 {
    oracle_estimate(t, space, cloud, Quantity::Norm).value
}

pub fn oracle_min_norm(t: &Operator, space: &SpaceSpec, cloud: &SampleCloud) -> f64 {
    oracle_estimate(t, space, cloud, Quantity::MinNorm).value
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Attainers {
    pub value: f64,
    pub points: Vec<Vec<C64>>,
    /// Fraction of the cloud within tolerance of the extremum.
    pub fraction: f64,
    /// More than half of the cloud attains: likely the whole sphere.
    pub whole_sphere_suspect: bool,
}

pub fn oracle_attainers(
    t: &Operator,
    space: &SpaceSpec,
    cloud: &SampleCloud,
    quantity: Quantity,
    tol: f64,
) -> Attainers {
    let est = oracle_estimate(t, space, cloud, quantity);
    let obj = Objective { t, space, quantity };
    let near: Vec<&Vec<C64>> = cloud
        .points
        .iter()
        .filter(|x| (obj.value(x) - est.value).abs() <= tol)
        .collect();
    let unit = |x: &[C64]| linalg::normalize(x);
    let mut points: Vec<Vec<C64>> = Vec::new();
    for x in near.iter().map(|x| x.as_slice()).chain(std::iter::once(est.witness.as_slice())) {
        let ux = unit(x);
        if points.iter().all(|p| linalg::phase_distance(&unit(p), &ux) > DEDUPE_DISTANCE) {
            points.push(x.to_vec());
        }
    }
    let fraction = near.len() as f64 / cloud.points.len().max(1) as f64;
    Attainers { value: est.value, points, fraction, whole_sphere_suspect: fraction > 0.5 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clouds_are_reproducible_and_on_the_sphere() {
        let a = sample_sphere(&SpaceSpec::L2, Field::Real, 2, 4, 1);
        let b = sample_sphere(&SpaceSpec::L2, Field::Real, 2, 4, 1);
        assert_eq!(a, b);
        let hex = crate::space::Polygon::regular(6, 0.0).unwrap();
        for space in [SpaceSpec::L2, SpaceSpec::Lp { p: 3.0 }, SpaceSpec::L1, SpaceSpec::Linf, SpaceSpec::Polygon(hex)] {
            let c = sample_sphere(&space, Field::Real, 2, 64, 7);
            for x in &c.points {
                assert!((space.norm_complex(x) - 1.0).abs() < 1e-10, "{space:?}");
            }
        }
        let c = sample_sphere(&SpaceSpec::Linf, Field::Real, 2, 8, 3);
        assert!(c.points.iter().all(|x| x.iter().map(|z| z.norm()).fold(0.0, f64::max) == 1.0));
    }

    #[test]
    fn diagonal_radius_and_attainers() {
        let t = Operator::real_diagonal(&[1.0, 2.0]);
        let cloud = sample_sphere(&SpaceSpec::L2, Field::Real, 2, 100_000, 11);
        let v = oracle_radius(&t, &SpaceSpec::L2, &cloud);
        assert!(v <= 2.0 + 1e-12 && v >= 2.0 - 1e-3);
        let att = oracle_attainers(&t, &SpaceSpec::L2, &cloud, Quantity::Radius, 1e-6);
        assert!(!att.points.is_empty());
        for x in &att.points {
            assert!(x[1].norm() > 0.99);
        }
        let iso = oracle_attainers(&Operator::identity(2, Field::Real), &SpaceSpec::L2, &cloud, Quantity::Norm, 1e-9);
        assert!(iso.whole_sphere_suspect);
    }

    #[test]
    fn zero_operator_gives_zeros() {
        let t = Operator::zero(3, Field::Complex);
        let cloud = sample_sphere(&SpaceSpec::L2, Field::Complex, 3, 1000, 5);
        for q in [Quantity::Norm, Quantity::MinNorm, Quantity::Radius, Quantity::Crawford] {
            assert_eq!(oracle_estimate(&t, &SpaceSpec::L2, &cloud, q).value, 0.0);
        }
    }
}
