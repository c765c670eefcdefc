//! Dense square operators over ℝ or ℂ, subspaces of the Hilbert space they
//! act on, and the spectral primitives built on the Jacobi kernels.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, C64, ZERO};
use crate::space::{NormTag, SpaceSpec};
use crate::tolerance::Tolerances;
use serde::{Deserialize, Serialize};
use std::ops::Range;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

/// A square matrix over a declared scalar field.
///
/// Entries are always stored as complex numbers; for `Field::Real` every
/// imaginary part is exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    field: Field,
    mat: Mat,
}

impl Operator {
    pub fn new(field: Field, mat: Mat) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::Malformed(format!(
                "operator must be square, got {}×{}",
                mat.rows(),
                mat.cols()
            )));
        }
        if mat.rows() == 0 {
            return Err(Error::Malformed("operator dimension must be at least 1".into()));
        }
        if mat.data().iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::Malformed("entries must be finite".into()));
        }
        if field == Field::Real && !mat.is_real() {
            return Err(Error::Malformed("real operator has a nonzero imaginary part".into()));
        }
        Ok(Operator { field, mat })
    }

    /// Real operator from row-major entries.
    pub fn real(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Malformed(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        Operator::new(Field::Real, Mat::from_vec(n, n, linalg::real_vector(entries)))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("rows must all have length n".into()));
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Operator::real(n, &flat)
    }

    /// Complex operator from row-major entries.
    pub fn complex(n: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Malformed(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        Operator::new(Field::Complex, Mat::from_vec(n, n, entries))
    }

    pub fn diagonal(field: Field, diag: &[C64]) -> Result<Self> {
        let n = diag.len();
        Operator::new(field, Mat::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO }))
    }

    pub fn real_diagonal(diag: &[f64]) -> Self {
        Operator::diagonal(Field::Real, &linalg::real_vector(diag)).expect("finite diagonal")
    }

    pub fn identity(n: usize, field: Field) -> Self {
        Operator { field, mat: Mat::identity(n) }
    }

    pub fn zero(n: usize, field: Field) -> Self {
        Operator { field, mat: Mat::zeros(n, n) }
    }

    /// Rank-one operator x ↦ ⟨x, w⟩·u, i.e. u ⊗ w*.
    pub fn rank_one(field: Field, u: &[C64], w: &[C64]) -> Result<Self> {
        let n = u.len();
        Operator::new(field, Mat::from_fn(n, n, |i, j| u[i] * w[j].conj()))
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Same matrix under another scalar field.
    pub fn with_field(&self, field: Field) -> Result<Self> {
        Operator::new(field, self.mat.clone())
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.mat.mul_vec(x)
    }

    pub fn apply_real(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.mat[(i, j)].re * x[j]).sum())
            .collect()
    }

    /// ⟨Tx, x⟩.
    pub fn quadratic_form(&self, x: &[C64]) -> C64 {
        linalg::inner(&self.apply(x), x)
    }

    pub fn adjoint(&self) -> Operator {
        Operator { field: self.field, mat: self.mat.adjoint() }
    }

    pub fn add(&self, other: &Operator) -> Operator {
        Operator { field: self.field.join(other.field), mat: self.mat.add(&other.mat) }
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        Operator { field: self.field.join(other.field), mat: self.mat.sub(&other.mat) }
    }

    pub fn compose(&self, other: &Operator) -> Operator {
        Operator { field: self.field.join(other.field), mat: self.mat.mul(&other.mat) }
    }

    /// s·T; a non-real factor promotes the operator to the complex field.
    pub fn scaled(&self, s: C64) -> Operator {
        let field = if s.im != 0.0 { Field::Complex } else { self.field };
        Operator { field, mat: self.mat.scale(s) }
    }

    pub fn shifted(&self, z: C64) -> Operator {
        self.sub(&Operator::identity(self.n(), self.field).scaled(z))
    }

    /// Operator norm on ℓ₂.
    pub fn norm(&self) -> f64 {
        self.mat.norm2()
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.frobenius()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        let asym = self.mat.sub(&self.mat.adjoint()).frobenius();
        asym <= rel_tol * self.mat.frobenius()
    }

    /// B*TB for the orthonormal basis B of `y`.
    pub fn compress(&self, y: &Subspace) -> Operator {
        compress(self, y)
    }
}

/// A vector normalized in a given norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitVector {
    coords: Vec<C64>,
    norm_tag: NormTag,
}

impl UnitVector {
    /// Validates ‖x‖ = 1 in `space` within its unit tolerance.
    pub fn new(coords: Vec<C64>, space: &SpaceSpec, tol: &Tolerances) -> Result<Self> {
        let r = space.norm_complex(&coords);
        if (r - 1.0).abs() > space.unit_tolerance(tol) {
            return Err(Error::NotUnitVector { norm: r });
        }
        Ok(UnitVector { coords, norm_tag: space.tag() })
    }

    /// Normalizes a nonzero ℓ₂ vector.
    pub fn l2(x: &[C64]) -> Self {
        UnitVector { coords: linalg::normalize(x), norm_tag: NormTag::L2 }
    }

    pub fn normalized(x: &[C64], space: &SpaceSpec) -> Self {
        let r = space.norm_complex(x);
        UnitVector { coords: x.iter().map(|a| a / r).collect(), norm_tag: space.tag() }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        UnitVector { coords: linalg::basis_vector(n, i), norm_tag: NormTag::L2 }
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<C64> {
        self.coords
    }

    pub fn norm_tag(&self) -> NormTag {
        self.norm_tag
    }

    pub fn real_coords(&self) -> Vec<f64> {
        self.coords.iter().map(|a| a.re).collect()
    }
}

/// Subspace of ℂⁿ (or ℝⁿ) held as an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    n: usize,
    basis: Vec<Vec<C64>>,
}

impl Subspace {
    /// Validates orthonormality to 1e−12.
    pub fn new(n: usize, basis: Vec<Vec<C64>>) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Malformed("subspace needs at least one basis vector".into()));
        }
        if basis.iter().any(|b| b.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: basis[0].len() });
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                if (linalg::inner(a, b) - target).norm() > 1e-12 {
                    return Err(Error::Malformed("subspace basis is not orthonormal".into()));
                }
            }
        }
        Ok(Subspace { n, basis })
    }

    /// Orthonormalizes the spanning set; `None` if it spans only zero.
    pub fn span(n: usize, vectors: &[Vec<C64>]) -> Option<Self> {
        let basis = linalg::orthonormalize(vectors, 1e-10);
        if basis.is_empty() {
            None
        } else {
            Some(Subspace { n, basis })
        }
    }

    pub(crate) fn from_orthonormal(n: usize, basis: Vec<Vec<C64>>) -> Self {
        Subspace { n, basis }
    }

    pub fn whole(n: usize) -> Self {
        Subspace { n, basis: (0..n).map(|i| linalg::basis_vector(n, i)).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    /// n×k matrix whose columns are the basis.
    pub fn basis_matrix(&self) -> Mat {
        Mat::from_columns(self.n, &self.basis)
    }

    pub fn project(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.n];
        for b in &self.basis {
            let c = linalg::inner(x, b);
            out = linalg::axpy(c, b, &out);
        }
        out
    }

    /// ‖x − Px‖.
    pub fn distance(&self, x: &[C64]) -> f64 {
        linalg::norm(&linalg::sub_vec(x, &self.project(x)))
    }

    /// Coordinates of x in the basis.
    pub fn coordinates(&self, x: &[C64]) -> Vec<C64> {
        self.basis.iter().map(|b| linalg::inner(x, b)).collect()
    }

    /// Vector with the given basis coordinates.
    pub fn embed(&self, coeffs: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.n];
        for (b, c) in self.basis.iter().zip(coeffs) {
            out = linalg::axpy(*c, b, &out);
        }
        out
    }

    /// sin of the largest principal angle between two subspaces of equal
    /// dimension (1.0 when the dimensions differ).
    pub fn gap(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() {
            return 1.0;
        }
        self.basis.iter().map(|b| other.distance(b)).fold(0.0, f64::max).min(1.0)
    }
}

/// Eigendecomposition of a Hermitian operator with multiplicity grouping.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `eigenvalues`.
    pub eigenvectors: Mat,
    /// Index ranges of eigenvalues that differ by at most the grouping tolerance.
    pub groups: Vec<Range<usize>>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.eigenvectors.col(i)
    }

    /// Eigenspace of a group.
    pub fn group_space(&self, g: usize) -> Subspace {
        let r = self.groups[g].clone();
        Subspace::from_orthonormal(self.n(), r.map(|i| self.vector(i)).collect())
    }

    /// Mean eigenvalue of a group.
    pub fn group_value(&self, g: usize) -> f64 {
        let r = self.groups[g].clone();
        let len = r.len() as f64;
        r.map(|i| self.eigenvalues[i]).sum::<f64>() / len
    }

    pub fn min_group(&self) -> usize {
        0
    }

    pub fn max_group(&self) -> usize {
        self.groups.len() - 1
    }
}

/// Chains sorted values into groups whose consecutive gaps are ≤ tol.
fn group_sorted(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i] - values[i - 1]).abs() > tol {
            groups.push(start..i);
            start = i;
        }
    }
    groups
}

/// Re(T) = (T + T*)/2 and the complementary part.
///
/// For the complex field `im` is (T − T*)/(2i) and T = re + i·im. For the
/// real field `im` holds the skew part (T − Tᵀ)/2 and T = re + im.
#[derive(Clone, Debug)]
pub struct Cartesian {
    pub re: Operator,
    pub im: Operator,
}

impl Cartesian {
    pub fn reconstruct(&self) -> Operator {
        match self.re.field() {
            Field::Real => self.re.add(&self.im),
            Field::Complex => self.re.add(&self.im.scaled(C64::new(0.0, 1.0))),
        }
    }
}

pub fn cartesian_decomposition(t: &Operator) -> Cartesian {
    let adj = t.mat().adjoint();
    let re = t.mat().add(&adj).scale(C64::new(0.5, 0.0));
    let im = match t.field() {
        Field::Real => t.mat().sub(&adj).scale(C64::new(0.5, 0.0)),
        // (T − T*)/(2i) = −i(T − T*)/2
        Field::Complex => t.mat().sub(&adj).scale(C64::new(0.0, -0.5)),
    };
    Cartesian {
        re: Operator { field: t.field(), mat: re },
        im: Operator { field: t.field(), mat: im },
    }
}

pub fn hermitian_spectrum(h: &Operator) -> Result<Spectrum> {
    hermitian_spectrum_with(h, &Tolerances::default())
}

pub fn hermitian_spectrum_with(h: &Operator, tol: &Tolerances) -> Result<Spectrum> {
    let norm = h.frobenius();
    let asymmetry = h.mat().sub(&h.mat().adjoint()).frobenius();
    if asymmetry > 1e-10 * norm {
        return Err(Error::NotHermitian { asymmetry, norm });
    }
    Ok(spectrum_of(h.mat(), tol))
}

/// Spectrum of the Hermitian part of `m` without the symmetry precondition.
pub(crate) fn spectrum_of(m: &Mat, tol: &Tolerances) -> Spectrum {
    let (eigenvalues, eigenvectors) = linalg::hermitian_eigen(m);
    let scale = eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let groups = group_sorted(&eigenvalues, tol.group * scale.max(1.0));
    Spectrum { eigenvalues, eigenvectors, groups }
}

/// Extreme singular values with their right singular subspaces.
#[derive(Clone, Debug)]
pub struct SvdExtremes {
    pub sigma_max: f64,
    pub max_space: Subspace,
    pub sigma_min: f64,
    pub min_space: Subspace,
    /// σ_max = σ_min: every unit vector attains both.
    pub whole_sphere: bool,
}

/// Full singular structure of a (possibly rectangular) matrix.
#[derive(Clone, Debug)]
pub struct SingularSystem {
    pub values: Vec<f64>,
    pub right: Vec<Vec<C64>>,
    pub left: Vec<Vec<C64>>,
    pub groups: Vec<Range<usize>>,
}

impl SingularSystem {
    pub fn of(m: &Mat, tol: &Tolerances) -> Self {
        let s = linalg::svd(m);
        let scale = s.values.first().copied().unwrap_or(0.0);
        // values are descending; group on the negated sequence
        let neg: Vec<f64> = s.values.iter().map(|v| -v).collect();
        let groups = group_sorted(&neg, tol.group * scale.max(1.0));
        SingularSystem {
            values: s.values,
            right: s.right.columns(),
            left: s.left.columns(),
            groups,
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn group_right_space(&self, g: usize) -> Subspace {
        let k = self.right.first().map_or(0, Vec::len);
        Subspace::from_orthonormal(k, self.groups[g].clone().map(|i| self.right[i].clone()).collect())
    }

    /// Numerical rank with cut-off rel·σ_max.
    pub fn rank(&self, rel: f64) -> usize {
        let cut = rel * self.sigma_max();
        self.values.iter().filter(|&&s| s > cut).count()
    }
}

pub fn svd_extremes(t: &Operator) -> SvdExtremes {
    svd_extremes_with(t, &Tolerances::default())
}

pub fn svd_extremes_with(t: &Operator, tol: &Tolerances) -> SvdExtremes {
    let sys = SingularSystem::of(t.mat(), tol);
    let last = sys.groups.len() - 1;
    SvdExtremes {
        sigma_max: sys.sigma_max(),
        max_space: sys.group_right_space(0),
        sigma_min: sys.sigma_min(),
        min_space: sys.group_right_space(last),
        whole_sphere: sys.groups.len() == 1,
    }
}

pub fn orthocomplement(s: &Subspace, n: usize) -> Result<Subspace> {
    if s.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.ambient_dim() });
    }
    if s.dim() >= n {
        return Err(Error::FullSpace);
    }
    // I − BB* has eigenvalue 1 exactly on the complement
    let b = s.basis_matrix();
    let proj = Mat::identity(n).sub(&b.mul(&b.adjoint()));
    let (vals, vecs) = linalg::hermitian_eigen(&proj);
    let basis: Vec<Vec<C64>> = (0..n).filter(|&i| vals[i] > 0.5).map(|i| vecs.col(i)).collect();
    // one more Gram–Schmidt pass tightens orthonormality to machine precision
    let basis = linalg::orthonormalize(&basis, 1e-8);
    Ok(Subspace::from_orthonormal(n, basis))
}

pub fn compress(t: &Operator, y: &Subspace) -> Operator {
    let b = y.basis_matrix();
    Operator { field: t.field(), mat: b.adjoint().mul(t.mat()).mul(&b) }
}

/// ‖(I − BB*)TB‖: how far Y is from being T-invariant.
pub fn invariance_defect(t: &Operator, y: &Subspace) -> f64 {
    y.basis()
        .iter()
        .map(|b| y.distance(&t.apply(b)))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, norm};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cartesian_of_nilpotent() {
        let t = Operator::complex(2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let parts = cartesian_decomposition(&t);
        assert_eq!(parts.re.entry(0, 1), c(0.5, 0.));
        assert_eq!(parts.re.entry(1, 0), c(0.5, 0.));
        // (T − T*)/(2i): entry (0,1) is 1/(2i) = −0.5i
        assert!((parts.im.entry(0, 1) - c(0., -0.5)).norm() < 1e-15);
        assert!((parts.im.entry(1, 0) - c(0., 0.5)).norm() < 1e-15);
        assert!(parts.reconstruct().mat().sub(t.mat()).max_abs() < 1e-15);
    }

    #[test]
    fn cartesian_of_hermitian_and_skew() {
        let h = Operator::from_real_rows(&[&[1., 2.], &[2., -1.]]).unwrap();
        let parts = cartesian_decomposition(&h);
        assert_eq!(parts.re, h);
        assert_eq!(parts.im.frobenius(), 0.0);

        let it = Operator::identity(2, Field::Complex).scaled(c(0., 1.));
        let parts = cartesian_decomposition(&it);
        assert_eq!(parts.re.frobenius(), 0.0);
        assert!(parts.im.mat().sub(&Mat::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn real_cartesian_keeps_skew_part() {
        let t = Operator::from_real_rows(&[&[1., 3.], &[1., 2.]]).unwrap();
        let parts = cartesian_decomposition(&t);
        assert_eq!(parts.im.entry(0, 1), c(1., 0.));
        assert_eq!(parts.im.entry(1, 0), c(-1., 0.));
        assert_eq!(parts.reconstruct(), t);
    }

    #[test]
    fn spectrum_examples() {
        let s = hermitian_spectrum(&Operator::real_diagonal(&[1., 2.])).unwrap();
        assert_eq!(s.eigenvalues, vec![1., 2.]);
        assert!((s.vector(0)[0].norm() - 1.0).abs() < 1e-15);

        let s = hermitian_spectrum(&Operator::from_real_rows(&[&[0., 1.], &[1., 0.]]).unwrap()).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        let v = s.vector(0);
        assert!((v[0] + v[1]).norm() < 1e-15);
        assert!(((v[0].norm()) - 0.5f64.sqrt()).abs() < 1e-15);

        let s = hermitian_spectrum(&Operator::identity(3, Field::Real)).unwrap();
        assert_eq!(s.groups, vec![0..3]);
    }

    #[test]
    fn spectrum_rejects_non_hermitian() {
        let t = Operator::from_real_rows(&[&[0., 1.], &[0., 0.]]).unwrap();
        assert!(matches!(hermitian_spectrum(&t), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn svd_extremes_examples() {
        let e = svd_extremes(&Operator::real_diagonal(&[3., 1.]));
        assert_eq!((e.sigma_max, e.sigma_min), (3.0, 1.0));
        assert!(e.max_space.distance(&basis_vector(2, 0)) < 1e-15);
        assert!(e.min_space.distance(&basis_vector(2, 1)) < 1e-15);
        assert!(!e.whole_sphere);

        let e = svd_extremes(&Operator::zero(3, Field::Real));
        assert_eq!((e.sigma_max, e.sigma_min), (0.0, 0.0));
        assert!(e.whole_sphere);
        assert_eq!(e.max_space.dim(), 3);
    }

    #[test]
    fn orthocomplement_examples() {
        let s = Subspace::new(3, vec![basis_vector(3, 0)]).unwrap();
        let comp = orthocomplement(&s, 3).unwrap();
        assert_eq!(comp.dim(), 2);
        assert!(comp.distance(&basis_vector(3, 1)) < 1e-12);
        assert!(comp.distance(&basis_vector(3, 2)) < 1e-12);

        let r = 0.5f64.sqrt();
        let s = Subspace::new(2, vec![vec![c(r, 0.), c(r, 0.)]]).unwrap();
        let comp = orthocomplement(&s, 2).unwrap();
        assert!(comp.distance(&[c(r, 0.), c(-r, 0.)]) < 1e-12);

        let s = Subspace::new(3, vec![basis_vector(3, 0), basis_vector(3, 1)]).unwrap();
        let comp = orthocomplement(&s, 3).unwrap();
        assert_eq!(comp.dim(), 1);
        assert!(comp.distance(&basis_vector(3, 2)) < 1e-12);

        assert_eq!(orthocomplement(&Subspace::whole(2), 2), Err(Error::FullSpace));
    }

    #[test]
    fn compress_examples() {
        let t = Operator::real_diagonal(&[1., 2., 3.]);
        let y = Subspace::new(3, vec![basis_vector(3, 0), basis_vector(3, 1)]).unwrap();
        assert_eq!(t.compress(&y), Operator::real_diagonal(&[1., 2.]));
        assert_eq!(t.compress(&Subspace::whole(3)), t);

        let nil = Operator::from_real_rows(&[&[0., 1.], &[0., 0.]]).unwrap();
        let e1 = Subspace::new(2, vec![basis_vector(2, 0)]).unwrap();
        assert_eq!(nil.compress(&e1), Operator::zero(1, Field::Real));
        assert!(invariance_defect(&nil, &e1) < 1e-15);
        let e2 = Subspace::new(2, vec![basis_vector(2, 1)]).unwrap();
        assert!((invariance_defect(&nil, &e2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unit_vector_validation() {
        let tol = Tolerances::default();
        assert!(UnitVector::new(vec![c(1., 0.), c(0., 0.)], &SpaceSpec::L2, &tol).is_ok());
        assert!(matches!(
            UnitVector::new(vec![c(1., 0.), c(1., 0.)], &SpaceSpec::L2, &tol),
            Err(Error::NotUnitVector { .. })
        ));
        assert!(UnitVector::new(vec![c(1., 0.), c(1., 0.)], &SpaceSpec::Linf, &tol).is_ok());
        let u = UnitVector::l2(&[c(3., 0.), c(0., 4.)]);
        assert!((norm(u.coords()) - 1.0).abs() < 1e-15);
    }
}
