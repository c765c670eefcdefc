//! Dense complex matrices and the two Jacobi kernels everything else is
//! built on: a cyclic two-sided Jacobi eigensolver for Hermitian matrices
//! and a one-sided (Hestenes) Jacobi SVD.
//!
//! Both kernels use the same 2×2 unitary rotation: a diagonal phase that
//! makes the pivot real, followed by a real plane rotation. Real input stays
//! real because the phase is then ±1.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

const MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Mat { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        Mat::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, x.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_vec(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_vec(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Mat {
        Mat::from_vec(self.rows, self.cols, self.data.iter().map(|a| a * s).collect())
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|a| a.im == 0.0)
    }

    /// Spectral norm (largest singular value).
    pub fn norm2(&self) -> f64 {
        svd(self).values.first().copied().unwrap_or(0.0)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// ⟨x, y⟩ = Σ xᵢ·conj(yᵢ), linear in the first slot.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(x: &[C64]) -> Vec<C64> {
    let r = norm(x);
    x.iter().map(|a| a / r).collect()
}

pub fn axpy(alpha: C64, x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| alpha * a + b).collect()
}

pub fn sub_vec(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scale_vec(s: C64, x: &[C64]) -> Vec<C64> {
    x.iter().map(|a| s * a).collect()
}

pub fn basis_vector(n: usize, i: usize) -> Vec<C64> {
    let mut e = vec![ZERO; n];
    e[i] = ONE;
    e
}

pub fn real_vector(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&a| C64::new(a, 0.0)).collect()
}

/// Distance between unit vectors modulo a unimodular factor.
pub fn phase_distance(x: &[C64], y: &[C64]) -> f64 {
    let overlap = inner(x, y).norm().min(1.0);
    (2.0 * (1.0 - overlap)).max(0.0).sqrt()
}

/// Rotation that annihilates the off-diagonal of the Hermitian 2×2 block
/// [[alpha, gamma], [conj(gamma), beta]].  Returns (c, s, d) with the
/// unitary U = [[c, s], [-s·d, c·d]].
fn jacobi_rotation(alpha: f64, beta: f64, gamma: C64) -> (f64, f64, C64) {
    let g = gamma.norm();
    let d = if g > 0.0 { (gamma / g).conj() } else { ONE };
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta.is_finite() {
        let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
        sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t, d)
}

/// Applies M ← M·U on columns p, q.
fn rotate_columns(m: &mut Mat, p: usize, q: usize, c: f64, s: f64, d: C64) {
    for k in 0..m.rows {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * c - mq * (d * s);
        m[(k, q)] = mp * s + mq * (d * c);
    }
}

/// Applies M ← U*·M on rows p, q.
fn rotate_rows(m: &mut Mat, p: usize, q: usize, c: f64, s: f64, d: C64) {
    let dc = d.conj();
    for k in 0..m.cols {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = mp * c - mq * (dc * s);
        m[(q, k)] = mp * s + mq * (dc * c);
    }
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues ascending and the
/// matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen(h: &Mat) -> (Vec<f64>, Mat) {
    let n = h.rows;
    assert_eq!(n, h.cols, "eigen decomposition needs a square matrix");
    // symmetrize so the kernel sees an exactly Hermitian matrix
    let mut a = Mat::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = Mat::identity(n);
    let scale = a.frobenius();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off += a[(i, j)].norm_sqr();
                    }
                }
            }
            if off.sqrt() <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let gamma = a[(p, q)];
                    if gamma.norm() <= 1e-300 {
                        continue;
                    }
                    let (c, s, d) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, gamma);
                    rotate_columns(&mut a, p, q, c, s, d);
                    rotate_rows(&mut a, p, q, c, s, d);
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    a[(p, p)].im = 0.0;
                    a[(q, q)].im = 0.0;
                    rotate_columns(&mut v, p, q, c, s, d);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Thin singular value decomposition A = U·diag(σ)·V*, σ descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub values: Vec<f64>,
    /// Right singular vectors, one column per singular value.
    pub right: Mat,
    /// Left singular vectors; columns for σ = 0 are zero.
    pub left: Mat,
}

/// One-sided Jacobi SVD of an m×k matrix.
pub fn svd(a: &Mat) -> Svd {
    let (m, k) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut v = Mat::identity(k);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() <= 1e-300 {
                    continue;
                }
                rotated = true;
                let (c, s, d) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, c, s, d);
                rotate_columns(&mut v, p, q, c, s, d);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..k).map(|j| norm(&w.col(j))).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let right = Mat::from_fn(k, k, |i, j| v[(i, order[j])]);
    let left = Mat::from_fn(m, k, |i, j| {
        let s = norms[order[j]];
        if s > 0.0 {
            w[(i, order[j])] / s
        } else {
            ZERO
        }
    });
    Svd {
        values,
        right,
        left,
    }
}

/// Gram–Schmidt with re-orthogonalization; drops vectors whose residual
/// falls below `tol` times their original length.
pub fn orthonormalize(vectors: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let len = norm(v);
        if len == 0.0 {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&r, b);
                r = axpy(-c, b, &r);
            }
        }
        let rl = norm(&r);
        if rl > tol * len {
            basis.push(r.iter().map(|a| a / rl).collect());
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_of_real_symmetric_2x2() {
        let h = Mat::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let (vals, vecs) = hermitian_eigen(&h);
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let v0 = vecs.col(0);
        assert!((v0[0] + v0[1]).norm() < 1e-14);
        assert!(vecs.is_real());
    }

    #[test]
    fn eigen_of_complex_hermitian() {
        let h = Mat::from_vec(
            3,
            3,
            vec![
                c(2., 0.),
                c(1., -1.),
                c(0., 0.5),
                c(1., 1.),
                c(-1., 0.),
                c(0.3, 0.2),
                c(0., -0.5),
                c(0.3, -0.2),
                c(0.5, 0.),
            ],
        );
        let (vals, vecs) = hermitian_eigen(&h);
        for j in 0..3 {
            let x = vecs.col(j);
            let r = sub_vec(&h.mul_vec(&x), &scale_vec(c(vals[j], 0.), &x));
            assert!(norm(&r) < 1e-12, "residual {}", norm(&r));
        }
        let gram = vecs.adjoint().mul(&vecs);
        assert!(gram.sub(&Mat::identity(3)).max_abs() < 1e-13);
        assert!((vals.iter().sum::<f64>() - 1.5).abs() < 1e-13);
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        let a = Mat::from_fn(4, 3, |i, j| c((i * 3 + j) as f64 * 0.3 - 1.0, (i as f64 - j as f64) * 0.2));
        let s = svd(&a);
        let sigma = Mat::from_fn(3, 3, |i, j| if i == j { c(s.values[i], 0.) } else { ZERO });
        let rec = s.left.mul(&sigma).mul(&s.right.adjoint());
        assert!(rec.sub(&a).max_abs() < 1e-12);
        assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn svd_small_singular_value_is_accurate() {
        let a = Mat::from_vec(2, 2, vec![c(1., 0.), c(1., 0.), c(1., 0.), c(1.0 + 1e-9, 0.)]);
        let s = svd(&a);
        let v = s.right.col(1);
        let tv = norm(&a.mul_vec(&v));
        assert!((tv - s.values[1]).abs() < 1e-15);
    }
}
