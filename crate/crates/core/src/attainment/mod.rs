//! Attainment sets M_T, m_T, V_T and c_T on finite-dimensional ℓ₂, the
//! characterization verifiers and the intersection deciders.

mod decide;
mod verify;

pub use decide::*;
pub use verify::*;

use crate::error::{Error, Result};
use crate::hilbert::{
    self, crawford_from_sweep, fov_sweep_with, nearest_on_face, peaks, radius_from_sweep, Extreme, FovBoundary,
    RangeOptions, RangeSummary,
};
use crate::linalg::{self, Mat, C64};
use crate::operator::{cartesian_decomposition, spectrum_of, Cartesian, Field, Operator, SingularSystem, Spectrum, Subspace, UnitVector};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Norm,
    MinNorm,
    Radius,
    Crawford,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    WholeSphere,
    EigenspaceUnion,
    FiniteList,
}

/// A piece of an attainment set: every unit vector of a span, or one point
/// (up to a unimodular factor).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Generator {
    Span { basis: Vec<Vec<C64>> },
    Point { x: Vec<C64> },
}

#[derive(Clone, Debug, Serialize)]
pub struct AttainmentSet {
    pub quantity: Quantity,
    pub kind: SetKind,
    pub generators: Vec<Generator>,
    pub value: f64,
}

impl AttainmentSet {
    /// Every basis vector and point listed by the generators.
    pub fn vectors(&self) -> Vec<Vec<C64>> {
        self.generators
            .iter()
            .flat_map(|g| match g {
                Generator::Span { basis } => basis.clone(),
                Generator::Point { x } => vec![x.clone()],
            })
            .collect()
    }

    /// Spans of the generators (points become one-dimensional spans).
    pub fn spans(&self) -> Vec<Subspace> {
        self.generators
            .iter()
            .map(|g| match g {
                Generator::Span { basis } => Subspace::from_orthonormal(basis[0].len(), basis.clone()),
                Generator::Point { x } => Subspace::from_orthonormal(x.len(), vec![x.clone()]),
            })
            .collect()
    }

    /// Whether the unit vector x lies in one of the generated pieces within `tol`.
    pub fn contains(&self, x: &[C64], tol: f64) -> bool {
        if self.kind == SetKind::WholeSphere {
            return true;
        }
        self.spans().iter().any(|s| s.distance(x) <= tol)
    }
}

/// A unit vector together with the checks it passed or failed.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub x: UnitVector,
    /// ⟨Tx, x⟩.
    pub functional_value: C64,
    pub attained: Quantity,
    pub value: f64,
    pub residuals: BTreeMap<String, f64>,
    pub valid: bool,
}

/// Quantities of one operator shared by the set builders, verifiers and
/// deciders.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub t: Operator,
    pub opts: RangeOptions,
    pub cart: Cartesian,
    pub svd: SingularSystem,
    pub norm: f64,
    pub min_norm: f64,
    pub range: RangeSummary,
    pub(crate) sweep: Option<FovBoundary>,
    pub(crate) re_spectrum: Spectrum,
}

impl Analysis {
    pub fn new(t: &Operator) -> Self {
        Self::with_options(t, &RangeOptions::default())
    }

    pub fn with_options(t: &Operator, opts: &RangeOptions) -> Self {
        let cart = cartesian_decomposition(t);
        let svd = SingularSystem::of(t.mat(), &opts.tol);
        let re_spectrum = spectrum_of(cart.re.mat(), &opts.tol);
        let (range, sweep) = if t.field() == Field::Complex && svd.sigma_max() > 0.0 {
            let sweep = fov_sweep_with(t, opts.resolution.max(8), &opts.tol).expect("resolution ≥ 8");
            let r = radius_from_sweep(t, &sweep, &opts.tol);
            let c = crawford_from_sweep(t, &sweep, &opts.tol);
            let summary = RangeSummary {
                v: r.v,
                c: c.c,
                v_witness: r.witness,
                c_witness: c.witness,
                contains_zero: c.contains_zero,
            };
            (summary, Some(sweep))
        } else {
            (hilbert::range_summary(t, opts), None)
        };
        Analysis {
            t: t.clone(),
            opts: opts.clone(),
            cart,
            norm: svd.sigma_max(),
            min_norm: svd.sigma_min(),
            svd,
            range,
            sweep,
            re_spectrum,
        }
    }

    pub fn n(&self) -> usize {
        self.t.n()
    }

    pub fn field(&self) -> Field {
        self.t.field()
    }

    pub fn v(&self) -> f64 {
        self.range.v
    }

    pub fn c(&self) -> f64 {
        self.range.c
    }

    /// ‖T‖ floored away from zero, for relative tolerances.
    pub(crate) fn scale(&self) -> f64 {
        if self.norm > 0.0 {
            self.norm
        } else {
            1.0
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.norm == 0.0
    }

    pub(crate) fn group_tol(&self, magnitude: f64) -> f64 {
        self.opts.tol.group * magnitude.max(1.0)
    }

    /// Right singular subspace of σ_max (first group) or σ_min (last group).
    pub(crate) fn singular_space(&self, which: Extreme) -> Subspace {
        match which {
            Extreme::Max => self.svd.group_right_space(0),
            Extreme::Min => self.svd.group_right_space(self.svd.groups.len() - 1),
        }
    }

    pub(crate) fn check_vector(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: x.len() });
        }
        let r = linalg::norm(x);
        if (r - 1.0).abs() > self.opts.tol.unit_l2.max(1e-12) * 100.0 {
            return Err(Error::NotUnitVector { norm: r });
        }
        Ok(())
    }

    pub(crate) fn require_field(&self, field: Field, what: &'static str) -> Result<()> {
        if self.field() != field {
            return Err(Error::FieldMismatch(what));
        }
        Ok(())
    }
}

fn whole_sphere(quantity: Quantity, n: usize, value: f64) -> AttainmentSet {
    let basis = (0..n).map(|i| linalg::basis_vector(n, i)).collect();
    AttainmentSet { quantity, kind: SetKind::WholeSphere, generators: vec![Generator::Span { basis }], value }
}

fn span_set(quantity: Quantity, spaces: Vec<Subspace>, value: f64) -> AttainmentSet {
    AttainmentSet {
        quantity,
        kind: SetKind::EigenspaceUnion,
        generators: spaces.into_iter().map(|s| Generator::Span { basis: s.basis().to_vec() }).collect(),
        value,
    }
}

fn point_set(quantity: Quantity, points: Vec<Vec<C64>>, value: f64) -> AttainmentSet {
    let mut unique: Vec<Vec<C64>> = Vec::new();
    for p in points {
        if unique.iter().all(|q| linalg::phase_distance(q, &p) > 1e-6) {
            unique.push(p);
        }
    }
    AttainmentSet {
        quantity,
        kind: SetKind::FiniteList,
        generators: unique.into_iter().map(|x| Generator::Point { x }).collect(),
        value,
    }
}

pub fn norm_attainment(t: &Operator) -> AttainmentSet {
    norm_attainment_for(&Analysis::new(t))
}

pub fn min_norm_attainment(t: &Operator) -> AttainmentSet {
    min_norm_attainment_for(&Analysis::new(t))
}

pub fn norm_attainment_for(an: &Analysis) -> AttainmentSet {
    if an.svd.groups.len() == 1 {
        return whole_sphere(Quantity::Norm, an.n(), an.norm);
    }
    span_set(Quantity::Norm, vec![an.singular_space(Extreme::Max)], an.norm)
}

pub fn min_norm_attainment_for(an: &Analysis) -> AttainmentSet {
    if an.svd.groups.len() == 1 {
        return whole_sphere(Quantity::MinNorm, an.n(), an.min_norm);
    }
    span_set(Quantity::MinNorm, vec![an.singular_space(Extreme::Min)], an.min_norm)
}

/// Groups of the Re(T) spectrum whose eigenvalue has modulus `target`.
pub(crate) fn re_groups_at(an: &Analysis, target: f64) -> Vec<Subspace> {
    let spec = &an.re_spectrum;
    let tol = an.group_tol(an.norm);
    (0..spec.groups.len())
        .filter(|&g| (spec.group_value(g).abs() - target).abs() <= tol)
        .map(|g| spec.group_space(g))
        .collect()
}

pub fn radius_attainment(t: &Operator) -> AttainmentSet {
    radius_attainment_for(&Analysis::new(t))
}

pub fn radius_attainment_for(an: &Analysis) -> AttainmentSet {
    let n = an.n();
    let v = an.v();
    if an.is_zero() {
        return whole_sphere(Quantity::Radius, n, 0.0);
    }
    match an.field() {
        Field::Real => {
            let spaces = re_groups_at(an, v);
            if spaces.len() == 1 && spaces[0].dim() == n {
                return whole_sphere(Quantity::Radius, n, v);
            }
            span_set(Quantity::Radius, spaces, v)
        }
        Field::Complex => {
            let sweep = an.sweep.as_ref().expect("complex analysis keeps its sweep");
            let tol = an.opts.tol.containment * an.norm;
            let mut points = Vec::new();
            for p in peaks(&an.t, sweep, Extreme::Max, &an.opts.tol) {
                if p.value < v - tol {
                    continue;
                }
                if p.space.len() == n {
                    return whole_sphere(Quantity::Radius, n, v);
                }
                points.extend(p.space.iter().cloned());
            }
            if points.is_empty() {
                points.push(an.range.v_witness.coords().to_vec());
            }
            point_set(Quantity::Radius, points, v)
        }
    }
}

pub fn crawford_attainment(t: &Operator) -> AttainmentSet {
    crawford_attainment_for(&Analysis::new(t))
}

pub fn crawford_attainment_for(an: &Analysis) -> AttainmentSet {
    let n = an.n();
    let c = an.c();
    if an.is_zero() {
        return whole_sphere(Quantity::Crawford, n, 0.0);
    }
    if an.range.contains_zero {
        return point_set(Quantity::Crawford, vec![an.range.c_witness.coords().to_vec()], 0.0);
    }
    match an.field() {
        Field::Real => {
            let spaces: Vec<Subspace> = re_groups_at(an, c)
                .into_iter()
                .filter(|s| {
                    s.basis().iter().all(|b| {
                        let zs = crate::sampling::default_perp_samples(b, Field::Real);
                        verify_ct_real_for(an, b, &zs).map(|r| r.valid).unwrap_or(false)
                    })
                })
                .collect();
            if spaces.len() == 1 && spaces[0].dim() == n {
                return whole_sphere(Quantity::Crawford, n, c);
            }
            span_set(Quantity::Crawford, spaces, c)
        }
        Field::Complex => {
            let sweep = an.sweep.as_ref().expect("complex analysis keeps its sweep");
            let tol = an.opts.tol.containment * an.norm;
            let mut points = Vec::new();
            for p in peaks(&an.t, sweep, Extreme::Min, &an.opts.tol) {
                if p.value < c - tol {
                    continue;
                }
                if p.space.len() == n {
                    return whole_sphere(Quantity::Crawford, n, c);
                }
                let x = nearest_on_face(&an.t, p.theta, &p.space);
                if verify_ct_complex_for(an, &x).map(|r| r.valid).unwrap_or(false) {
                    points.push(x);
                }
            }
            if points.is_empty() {
                points.push(an.range.c_witness.coords().to_vec());
            }
            point_set(Quantity::Crawford, points, c)
        }
    }
}

/// Checks that a unit vector attains a quantity and, for the radius and
/// Crawford number, runs the matching characterization verifier.
pub fn certify(an: &Analysis, x: &[C64], quantity: Quantity) -> Result<Certificate> {
    an.check_vector(x)?;
    let q = an.t.quadratic_form(x);
    let tx_norm = linalg::norm(&an.t.apply(x));
    let scale = an.scale();
    let mut residuals = BTreeMap::new();
    let (value, mut valid) = match quantity {
        Quantity::Norm => {
            let r = (tx_norm - an.norm).abs() / scale;
            residuals.insert("norm_gap".to_string(), r);
            (an.norm, r <= an.opts.tol.intersection.max(1e-9))
        }
        Quantity::MinNorm => {
            let r = (tx_norm - an.min_norm).abs() / scale;
            residuals.insert("min_norm_gap".to_string(), r);
            (an.min_norm, r <= an.opts.tol.intersection.max(1e-9))
        }
        Quantity::Radius => {
            let r = (q.norm() - an.v()).abs() / scale;
            residuals.insert("radius_gap".to_string(), r);
            (an.v(), r <= 1e-8)
        }
        Quantity::Crawford => {
            let r = (q.norm() - an.c()).abs() / scale;
            residuals.insert("crawford_gap".to_string(), r);
            (an.c(), r <= 1e-8)
        }
    };
    let verdict = match (quantity, an.field()) {
        (Quantity::Radius, Field::Real) => Some(verify_vt_real_for(an, x, &crate::sampling::default_perp_samples(x, Field::Real))?),
        (Quantity::Radius, Field::Complex) => Some(verify_vt_complex_for(an, x)?),
        (Quantity::Crawford, Field::Real) => Some(verify_ct_real_for(an, x, &crate::sampling::default_perp_samples(x, Field::Real))?),
        (Quantity::Crawford, Field::Complex) => Some(verify_ct_complex_for(an, x)?),
        _ => None,
    };
    if let Some(v) = verdict {
        for (k, r) in v.residuals {
            residuals.insert(k, r);
        }
        valid &= v.valid;
    }
    Ok(Certificate { x: UnitVector::l2(x), functional_value: q, attained: quantity, value, residuals, valid })
}

/// The four attainment sets with a certificate for every listed vector.
#[derive(Clone, Debug, Serialize)]
pub struct AttainmentReport {
    pub field: Field,
    pub n: usize,
    pub norm: f64,
    pub min_norm: f64,
    pub radius: f64,
    pub crawford: f64,
    pub norm_set: AttainmentSet,
    pub min_norm_set: AttainmentSet,
    pub radius_set: AttainmentSet,
    pub crawford_set: AttainmentSet,
    pub certificates: Vec<Certificate>,
}

pub fn attainment_report(an: &Analysis) -> Result<AttainmentReport> {
    let sets = [
        norm_attainment_for(an),
        min_norm_attainment_for(an),
        radius_attainment_for(an),
        crawford_attainment_for(an),
    ];
    let mut certificates = Vec::new();
    for s in &sets {
        // a whole sphere is certified through its first basis vector only
        let vectors = if s.kind == SetKind::WholeSphere { s.vectors().into_iter().take(1).collect() } else { s.vectors() };
        for x in vectors {
            certificates.push(certify(an, &x, s.quantity)?);
        }
    }
    let [norm_set, min_norm_set, radius_set, crawford_set] = sets;
    Ok(AttainmentReport {
        field: an.field(),
        n: an.n(),
        norm: an.norm,
        min_norm: an.min_norm,
        radius: an.v(),
        crawford: an.c(),
        norm_set,
        min_norm_set,
        radius_set,
        crawford_set,
        certificates,
    })
}

/// ‖T·B‖₂ and its maximizing coefficient vector, for an orthonormal basis B.
pub(crate) fn restricted_extreme(t: &Operator, s: &Subspace, which: Extreme) -> (f64, Vec<C64>) {
    let tb = t.mat().mul(&s.basis_matrix());
    let svd = linalg::svd(&tb);
    let k = svd.values.len();
    let idx = match which {
        Extreme::Max => 0,
        Extreme::Min => k - 1,
    };
    (svd.values[idx], s.embed(&svd.right.col(idx)))
}

/// Extreme eigenpairs of the compression of a Hermitian matrix to S.
pub(crate) fn compressed_interval(h: &Mat, s: &Subspace) -> (f64, Vec<C64>, f64, Vec<C64>) {
    let b = s.basis_matrix();
    let c = b.adjoint().mul(h).mul(&b);
    let (vals, vecs) = linalg::hermitian_eigen(&c);
    let last = vals.len() - 1;
    (vals[0], s.embed(&vecs.col(0)), vals[last], s.embed(&vecs.col(last)))
}

/// A unit x ∈ S with ⟨Hx, x⟩ = 0 when the compression of H to S is indefinite
/// (within `tol`).
pub(crate) fn zero_in_subspace(h: &Mat, s: &Subspace, tol: f64) -> Option<Vec<C64>> {
    let (lo, u, hi, w) = compressed_interval(h, s);
    if lo > tol || hi < -tol {
        return None;
    }
    if lo >= 0.0 {
        return Some(u);
    }
    if hi <= 0.0 {
        return Some(w);
    }
    Some(hilbert::mix_to_zero(&u, lo, &w, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn norm_sets_of_a_diagonal() {
        let t = Operator::real_diagonal(&[3., 1.]);
        let m = norm_attainment(&t);
        assert_eq!(m.kind, SetKind::EigenspaceUnion);
        assert_eq!(m.value, 3.0);
        assert!(m.contains(&basis_vector(2, 0), 1e-12));
        assert!(!m.contains(&basis_vector(2, 1), 1e-3));
        let mm = min_norm_attainment(&t);
        assert_eq!(mm.value, 1.0);
        assert!(mm.contains(&basis_vector(2, 1), 1e-12));
    }

    #[test]
    fn scalar_isometry_is_whole_sphere() {
        let r = Operator::from_real_rows(&[&[0., -2.], &[2., 0.]]).unwrap();
        assert_eq!(norm_attainment(&r).kind, SetKind::WholeSphere);
        assert_eq!(min_norm_attainment(&r).kind, SetKind::WholeSphere);
    }

    #[test]
    fn radius_sets() {
        let s = radius_attainment(&Operator::real_diagonal(&[1., 2.]));
        assert!(s.contains(&basis_vector(2, 1), 1e-12));
        assert!(!s.contains(&basis_vector(2, 0), 1e-3));

        let s = radius_attainment(&Operator::real_diagonal(&[2., -2.]));
        assert_eq!(s.kind, SetKind::EigenspaceUnion);
        assert_eq!(s.generators.len(), 2);

        let nil = Operator::complex(2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let s = radius_attainment(&nil);
        assert_eq!(s.kind, SetKind::FiniteList);
        for x in s.vectors() {
            assert!((nil.quadratic_form(&x).norm() - 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn crawford_sets() {
        let s = crawford_attainment(&Operator::real_diagonal(&[1., 2.]));
        assert!(s.contains(&basis_vector(2, 0), 1e-12));
        assert!(!s.contains(&basis_vector(2, 1), 1e-3));

        let d = Operator::real_diagonal(&[1., -1.]);
        let s = crawford_attainment(&d);
        assert_eq!(s.kind, SetKind::FiniteList);
        let x = &s.vectors()[0];
        assert!((x[0].norm() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_operator_sets() {
        let z = Operator::zero(3, Field::Real);
        for s in [norm_attainment(&z), min_norm_attainment(&z), radius_attainment(&z), crawford_attainment(&z)] {
            assert_eq!(s.kind, SetKind::WholeSphere);
            assert_eq!(s.value, 0.0);
        }
    }

    #[test]
    fn report_certificates_are_valid() {
        let t = Operator::real_diagonal(&[1., 2.]);
        let an = Analysis::new(&t);
        let rep = attainment_report(&an).unwrap();
        assert!(rep.certificates.iter().all(|c| c.valid), "{:#?}", rep.certificates);
        assert!(rep.min_norm_set.contains(&basis_vector(2, 0), 1e-12));
        assert!(rep.crawford_set.contains(&basis_vector(2, 0), 1e-12));
    }
}
