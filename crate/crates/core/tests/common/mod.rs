#![allow(dead_code)]

use numrange::linalg::{self, Mat, C64};
use numrange::sampling;
use numrange::{Field, Operator};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    sampling::rng(seed)
}

pub fn field_of(k: usize) -> Field {
    if k % 2 == 0 {
        Field::Real
    } else {
        Field::Complex
    }
}

pub fn random_operator(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Operator {
    let entries = sampling::gaussian(rng, n * n, field);
    Operator::complex(n, entries).and_then(|t| t.with_field(field)).expect("finite Gaussian entries")
}

pub fn random_unit(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Vec<C64> {
    sampling::unit_gaussian(rng, n, field)
}

/// Orthogonal (real) or unitary (complex) matrix from Gram-Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Mat {
    loop {
        let cols: Vec<Vec<C64>> = (0..n).map(|_| sampling::gaussian(rng, n, field)).collect();
        let q = linalg::orthonormalize(&cols, 1e-8);
        if q.len() == n {
            return Mat::from_columns(n, &q);
        }
    }
}

pub fn conjugate(q: &Mat, core: &Mat, field: Field) -> Operator {
    Operator::new(field, q.mul(core).mul(&q.adjoint())).expect("finite entries")
}

pub fn diag(values: &[C64]) -> Mat {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { values[i] } else { C64::new(0.0, 0.0) })
}

/// Q · (λ ⊕ B) · Q* with |λ| = 1 and ‖B‖ ≤ `contraction`, so ‖T‖ = v(T) = 1.
pub fn radius_equals_norm(rng: &mut ChaCha8Rng, n: usize, field: Field, contraction: f64) -> Operator {
    let mut core = Mat::zeros(n, n);
    let lambda = match field {
        Field::Real => C64::new(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0),
        Field::Complex => C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)),
    };
    core = core.add(&Mat::from_fn(n, n, |i, j| if i == 0 && j == 0 { lambda } else { C64::new(0.0, 0.0) }));
    if n > 1 {
        let b = random_operator(rng, n - 1, field);
        let scale = contraction / b.norm().max(1e-12);
        core = core.add(&Mat::from_fn(n, n, |i, j| {
            if i > 0 && j > 0 {
                b.entry(i - 1, j - 1) * scale
            } else {
                C64::new(0.0, 0.0)
            }
        }));
    }
    conjugate(&random_unitary(rng, n, field), &core, field)
}

pub fn real_rank_one(u: &[f64], w: &[f64]) -> Operator {
    let n = u.len();
    let a: Vec<f64> = (0..n * n).map(|k| u[k / n] * w[k % n]).collect();
    Operator::real(n, &a).expect("finite entries")
}

pub fn gaussian_real(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    sampling::gaussian(rng, n, Field::Real).iter().map(|z| z.re).collect()
}
