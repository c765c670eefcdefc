//! Field of values on finite-dimensional ℓ₂.
//!
//! The boundary of W(T) is traced through its support function: for each
//! direction θ the extreme eigenvalues of Re(e^{−iθ}T) bound W(T) and their
//! eigenvectors realize the bounding points. The numerical radius is the
//! maximum of the upper support value over θ; the Crawford number (distance
//! from 0 to W(T)) is the maximum of the lower one when it is positive.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, C64, ZERO};
use crate::operator::{cartesian_decomposition, spectrum_of, Field, Operator, UnitVector};
use crate::tolerance::Tolerances;
use serde::Serialize;
use std::f64::consts::PI;

/// Largest number of grid peaks refined per sweep.
const MAX_REFINED_PEAKS: usize = 16;

#[derive(Clone, Debug)]
pub struct RangeOptions {
    pub resolution: usize,
    pub tol: Tolerances,
}

impl Default for RangeOptions {
    fn default() -> Self {
        RangeOptions { resolution: 720, tol: Tolerances::default() }
    }
}

/// Sampled boundary of the field of values.
#[derive(Clone, Debug)]
pub struct FovBoundary {
    pub thetas: Vec<f64>,
    /// λ_max(Re(e^{−iθ}T)).
    pub support_max: Vec<f64>,
    /// λ_min(Re(e^{−iθ}T)).
    pub support_min: Vec<f64>,
    pub witness_max: Vec<Vec<C64>>,
    pub witness_min: Vec<Vec<C64>>,
    /// ⟨Tw, w⟩ for each `witness_max`; these points lie on ∂W(T).
    pub boundary: Vec<C64>,
}

impl FovBoundary {
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// CSV with columns theta, support_max, support_min, re, im.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,support_max,support_min,re,im\n");
        for k in 0..self.len() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                self.thetas[k],
                self.support_max[k],
                self.support_min[k],
                self.boundary[k].re,
                self.boundary[k].im
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Extreme {
    Max,
    Min,
}

/// One extreme eigenpair of Re(e^{−iθ}T).
#[derive(Clone, Debug)]
pub(crate) struct Support {
    pub theta: f64,
    pub value: f64,
    /// Orthonormal basis of the extreme eigenspace.
    pub space: Vec<Vec<C64>>,
    /// dλ/dθ = Im(e^{−iθ}⟨Tw,w⟩); meaningful only when the eigenvalue is simple.
    pub slope: f64,
}

impl Support {
    fn simple(&self) -> bool {
        self.space.len() == 1
    }
}

/// Re(e^{−iθ}T) = (e^{−iθ}T + e^{iθ}T*)/2.
pub(crate) fn rotated_hermitian(t: &Mat, theta: f64) -> Mat {
    let e = C64::from_polar(1.0, -theta);
    let n = t.rows();
    Mat::from_fn(n, n, |i, j| (e * t[(i, j)] + (e * t[(j, i)]).conj()) * 0.5)
}

pub(crate) fn support(t: &Operator, theta: f64, which: Extreme, tol: &Tolerances) -> Support {
    let h = rotated_hermitian(t.mat(), theta);
    let spec = spectrum_of(&h, tol);
    let (g, idx) = match which {
        Extreme::Max => (spec.max_group(), spec.n() - 1),
        Extreme::Min => (spec.min_group(), 0),
    };
    let space: Vec<Vec<C64>> = spec.groups[g].clone().map(|i| spec.vector(i)).collect();
    let w = spec.vector(idx);
    let z = t.quadratic_form(&w);
    Support {
        theta,
        value: spec.eigenvalues[idx],
        space,
        slope: (C64::from_polar(1.0, -theta) * z).im,
    }
}

pub fn fov_sweep(t: &Operator, resolution: usize) -> Result<FovBoundary> {
    fov_sweep_with(t, resolution, &Tolerances::default())
}

pub fn fov_sweep_with(t: &Operator, resolution: usize, tol: &Tolerances) -> Result<FovBoundary> {
    if resolution < 8 {
        return Err(Error::InvalidResolution(resolution));
    }
    let mut b = FovBoundary {
        thetas: Vec::with_capacity(resolution),
        support_max: Vec::with_capacity(resolution),
        support_min: Vec::with_capacity(resolution),
        witness_max: Vec::with_capacity(resolution),
        witness_min: Vec::with_capacity(resolution),
        boundary: Vec::with_capacity(resolution),
    };
    for k in 0..resolution {
        let theta = 2.0 * PI * k as f64 / resolution as f64;
        let h = rotated_hermitian(t.mat(), theta);
        let spec = spectrum_of(&h, tol);
        let wmax = spec.vector(spec.n() - 1);
        b.thetas.push(theta);
        b.support_max.push(spec.max());
        b.support_min.push(spec.min());
        b.boundary.push(t.quadratic_form(&wmax));
        b.witness_max.push(wmax);
        b.witness_min.push(spec.vector(0));
    }
    Ok(b)
}

/// Maximizes the chosen support value over [lo, hi]: bisection on the
/// slope when it brackets a sign change, golden section otherwise.
pub(crate) fn refine(t: &Operator, lo: f64, hi: f64, which: Extreme, tol: &Tolerances) -> Support {
    let eval = |th: f64| support(t, th, which, tol);
    let s_lo = eval(lo);
    let s_hi = eval(hi);
    let mut best = if s_lo.value >= s_hi.value { s_lo.clone() } else { s_hi.clone() };
    if s_lo.simple() && s_hi.simple() && s_lo.slope >= 0.0 && s_hi.slope <= 0.0 {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..100 {
            if b - a <= 1e-15 * (1.0 + a.abs()) {
                break;
            }
            let m = 0.5 * (a + b);
            let s = eval(m);
            if s.value > best.value {
                best = s.clone();
            }
            if !s.simple() {
                break;
            }
            if s.slope > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        let s = eval(0.5 * (a + b));
        if s.value >= best.value {
            best = s;
        }
        return best;
    }
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    while b - a > tol.theta {
        if fc.value >= fd.value {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = eval(d);
        }
    }
    for s in [fc, fd] {
        if s.value > best.value {
            best = s;
        }
    }
    best
}

/// Refined maxima of the chosen support function, best first.
pub(crate) fn peaks(t: &Operator, sweep: &FovBoundary, which: Extreme, tol: &Tolerances) -> Vec<Support> {
    let vals = match which {
        Extreme::Max => &sweep.support_max,
        Extreme::Min => &sweep.support_min,
    };
    let m = vals.len();
    let step = 2.0 * PI / m as f64;
    let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = t.norm();
    let slack = scale * step * step + 1e-14 * scale.max(1e-300);
    let mut cands: Vec<usize> = (0..m)
        .filter(|&k| {
            let prev = vals[(k + m - 1) % m];
            let next = vals[(k + 1) % m];
            vals[k] >= prev && vals[k] >= next && vals[k] >= best - slack
        })
        .collect();
    cands.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    if cands.len() > MAX_REFINED_PEAKS {
        // flat support functions (discs) tie everywhere; spread the picks
        let stride = cands.len() as f64 / MAX_REFINED_PEAKS as f64;
        let mut sorted = cands.clone();
        sorted.sort_unstable();
        cands = (0..MAX_REFINED_PEAKS).map(|i| sorted[(i as f64 * stride) as usize]).collect();
    }
    let mut out: Vec<Support> = cands
        .iter()
        .map(|&k| {
            let th = sweep.thetas[k];
            refine(t, th - step, th + step, which, tol)
        })
        .collect();
    out.sort_by(|a, b| b.value.total_cmp(&a.value));
    out
}

/// Numerical radius with an attaining unit vector.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusResult {
    pub v: f64,
    pub witness: UnitVector,
    /// Maximizing direction of the support function (complex field only).
    pub theta: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrawfordResult {
    pub c: f64,
    pub witness: UnitVector,
    pub contains_zero: bool,
    pub theta: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RangeSummary {
    pub v: f64,
    pub c: f64,
    pub v_witness: UnitVector,
    pub c_witness: UnitVector,
    pub contains_zero: bool,
}

pub fn numerical_radius(t: &Operator) -> RadiusResult {
    numerical_radius_with(t, &RangeOptions::default())
}

pub fn numerical_radius_with(t: &Operator, opts: &RangeOptions) -> RadiusResult {
    let n = t.n();
    if t.frobenius() == 0.0 {
        return RadiusResult { v: 0.0, witness: UnitVector::basis(n, 0), theta: None };
    }
    match t.field() {
        Field::Real => {
            let re = cartesian_decomposition(t).re;
            let spec = spectrum_of(re.mat(), &opts.tol);
            let (v, idx) = if spec.max().abs() >= spec.min().abs() {
                (spec.max().abs(), n - 1)
            } else {
                (spec.min().abs(), 0)
            };
            RadiusResult { v, witness: UnitVector::l2(&spec.vector(idx)), theta: None }
        }
        Field::Complex => {
            let sweep = fov_sweep_with(t, opts.resolution.max(8), &opts.tol).expect("resolution ≥ 8");
            radius_from_sweep(t, &sweep, &opts.tol)
        }
    }
}

pub(crate) fn radius_from_sweep(t: &Operator, sweep: &FovBoundary, tol: &Tolerances) -> RadiusResult {
    let best = peaks(t, sweep, Extreme::Max, tol).swap_remove(0);
    RadiusResult {
        v: best.value.max(0.0),
        witness: UnitVector::l2(&best.space[0]),
        theta: Some(best.theta),
    }
}

pub fn crawford_number(t: &Operator) -> CrawfordResult {
    crawford_number_with(t, &RangeOptions::default())
}

pub fn crawford_number_with(t: &Operator, opts: &RangeOptions) -> CrawfordResult {
    let n = t.n();
    let scale = t.norm();
    if scale == 0.0 {
        return CrawfordResult { c: 0.0, witness: UnitVector::basis(n, 0), contains_zero: true, theta: None };
    }
    let tol_abs = opts.tol.containment * scale;
    match t.field() {
        Field::Real => {
            let re = cartesian_decomposition(t).re;
            let spec = spectrum_of(re.mat(), &opts.tol);
            if spec.min() > tol_abs {
                CrawfordResult {
                    c: spec.min(),
                    witness: UnitVector::l2(&spec.vector(0)),
                    contains_zero: false,
                    theta: None,
                }
            } else if spec.max() < -tol_abs {
                CrawfordResult {
                    c: -spec.max(),
                    witness: UnitVector::l2(&spec.vector(n - 1)),
                    contains_zero: false,
                    theta: None,
                }
            } else {
                CrawfordResult {
                    c: 0.0,
                    witness: real_zero_vector(&spec),
                    contains_zero: true,
                    theta: None,
                }
            }
        }
        Field::Complex => {
            let sweep = fov_sweep_with(t, opts.resolution.max(8), &opts.tol).expect("resolution ≥ 8");
            crawford_from_sweep(t, &sweep, &opts.tol)
        }
    }
}

pub(crate) fn crawford_from_sweep(t: &Operator, sweep: &FovBoundary, tol: &Tolerances) -> CrawfordResult {
    let scale = t.norm();
    let best = peaks(t, sweep, Extreme::Min, tol).swap_remove(0);
    if best.value > tol.containment * scale {
        let x = nearest_on_face(t, best.theta, &best.space);
        CrawfordResult { c: best.value, witness: UnitVector::l2(&x), contains_zero: false, theta: Some(best.theta) }
    } else {
        let x = complex_zero_vector(t, sweep, &best, tol);
        CrawfordResult { c: 0.0, witness: UnitVector::l2(&x), contains_zero: true, theta: Some(best.theta) }
    }
}

pub fn range_summary(t: &Operator, opts: &RangeOptions) -> RangeSummary {
    let (r, c) = match t.field() {
        Field::Complex if t.frobenius() > 0.0 => {
            let sweep = fov_sweep_with(t, opts.resolution.max(8), &opts.tol).expect("resolution ≥ 8");
            (radius_from_sweep(t, &sweep, &opts.tol), crawford_from_sweep(t, &sweep, &opts.tol))
        }
        _ => (numerical_radius_with(t, opts), crawford_number_with(t, opts)),
    };
    RangeSummary {
        v: r.v,
        c: c.c,
        v_witness: r.witness,
        c_witness: c.witness,
        contains_zero: c.contains_zero,
    }
}

/// Point of the supporting face in direction θ closest to the origin.
///
/// On the eigenspace E of λ_min(Re(e^{−iθ}T)), e^{−iθ}T compresses to
/// λ·I + i·K with K Hermitian; the nearest point has ⟨Ky, y⟩ = 0 when that is
/// attainable and otherwise sits at the end of the face.
pub(crate) fn nearest_on_face(t: &Operator, theta: f64, space: &[Vec<C64>]) -> Vec<C64> {
    if space.len() == 1 {
        return space[0].clone();
    }
    let b = Mat::from_columns(t.n(), space);
    let c = b.adjoint().mul(&t.mat().scale(C64::from_polar(1.0, -theta))).mul(&b);
    let k = c.sub(&c.adjoint()).scale(C64::new(0.0, -0.5));
    let (vals, vecs) = linalg::hermitian_eigen(&k);
    let last = vals.len() - 1;
    let y = if vals[0] <= 0.0 && vals[last] >= 0.0 {
        mix_to_zero(&vecs.col(0), vals[0], &vecs.col(last), vals[last])
    } else if vals[0] > 0.0 {
        vecs.col(0)
    } else {
        vecs.col(last)
    };
    linalg::normalize(&b.mul_vec(&y))
}

/// Unit combination of orthonormal eigenvectors u (eigenvalue a ≤ 0) and
/// w (eigenvalue b ≥ 0) of a Hermitian H with ⟨Hx, x⟩ = 0.
pub(crate) fn mix_to_zero(u: &[C64], a: f64, w: &[C64], b: f64) -> Vec<C64> {
    if b - a <= 0.0 {
        return u.to_vec();
    }
    let cu = (b / (b - a)).sqrt();
    let cw = (-a / (b - a)).sqrt();
    linalg::normalize(&linalg::axpy(C64::new(cu, 0.0), u, &linalg::scale_vec(C64::new(cw, 0.0), w)))
}

fn real_zero_vector(spec: &crate::operator::Spectrum) -> UnitVector {
    let n = spec.n();
    let (lo, hi) = (spec.min(), spec.max());
    let x = if lo >= 0.0 {
        spec.vector(0)
    } else if hi <= 0.0 {
        spec.vector(n - 1)
    } else {
        mix_to_zero(&spec.vector(0), lo, &spec.vector(n - 1), hi)
    };
    UnitVector::l2(&x)
}

/// Given unit vectors with ⟨Tx₁,x₁⟩ = z₁ and ⟨Tx₂,x₂⟩ = z₂ and a target μ
/// on the segment [z₁, z₂], returns a unit x in span{x₁, x₂} with ⟨Tx,x⟩ = μ.
///
/// After rotating and shifting so both values are real with opposite signs,
/// x = x₁ + t·e^{iφ}x₂ where φ makes the cross term real and t solves the
/// resulting real quadratic.
pub(crate) fn realize_on_segment(t: &Operator, x1: &[C64], x2: &[C64], mu: C64) -> Option<Vec<C64>> {
    let z1 = t.quadratic_form(x1);
    let z2 = t.quadratic_form(x2);
    let scale = t.norm().max(1e-300);
    if (z1 - mu).norm() <= 1e-15 * scale {
        return Some(x1.to_vec());
    }
    if (z2 - mu).norm() <= 1e-15 * scale {
        return Some(x2.to_vec());
    }
    let rot = C64::from_polar(1.0, -(z2 - z1).arg());
    let apply = |x: &[C64]| -> Vec<C64> {
        let tx = t.apply(x);
        tx.iter().zip(x).map(|(a, b)| rot * (a - mu * b)).collect()
    };
    let a1 = apply(x1);
    let a2 = apply(x2);
    let a11 = linalg::inner(&a1, x1).re;
    let a22 = linalg::inner(&a2, x2).re;
    if a11 > 0.0 || a22 < 0.0 {
        return None;
    }
    let a = linalg::inner(&a2, x1);
    let b = linalg::inner(&a1, x2);
    let diff = a - b.conj();
    let phi = if diff.norm() > 0.0 { -diff.arg() } else { 0.0 };
    let e = C64::from_polar(1.0, phi);
    let lin = (e * a + e.conj() * b).re;
    let disc = (lin * lin - 4.0 * a22 * a11).max(0.0).sqrt();
    let s = if a22 == 0.0 {
        if lin == 0.0 {
            return None;
        }
        -a11 / lin
    } else if lin > 0.0 {
        -2.0 * a11 / (lin + disc)
    } else {
        (-lin + disc) / (2.0 * a22)
    };
    if !s.is_finite() {
        return None;
    }
    let x = linalg::axpy(e * s, x2, x1);
    if linalg::norm(&x) == 0.0 {
        return None;
    }
    Some(linalg::normalize(&x))
}

/// A unit vector with ⟨Tx, x⟩ = 0 when 0 ∈ W(T), using the sweep's
/// boundary points: the ray from one boundary point through 0 exits W(T)
/// through a boundary edge; realize that exit point on the edge, then 0 on
/// the chord.
fn complex_zero_vector(t: &Operator, sweep: &FovBoundary, nearest: &Support, tol: &Tolerances) -> Vec<C64> {
    let scale = t.norm();
    let good = |x: &[C64]| t.quadratic_form(x).norm() <= 1e-2 * tol.zero * scale;
    let mut best: Vec<C64> = nearest_on_face(t, nearest.theta, &nearest.space);
    let mut best_val = t.quadratic_form(&best).norm();
    if good(&best) {
        return best;
    }
    let pts = &sweep.boundary;
    let m = pts.len();
    let consider = |x: Vec<C64>, best: &mut Vec<C64>, best_val: &mut f64| {
        let v = t.quadratic_form(&x).norm();
        if v < *best_val {
            *best_val = v;
            *best = x;
        }
    };
    // try anchors in order of distance from the origin
    let mut anchors: Vec<usize> = (0..m).collect();
    anchors.sort_by(|&i, &j| pts[j].norm().total_cmp(&pts[i].norm()));
    for &a in anchors.iter().take(8) {
        let za = pts[a];
        if za.norm() == 0.0 {
            consider(sweep.witness_max[a].clone(), &mut best, &mut best_val);
            continue;
        }
        let u = -za / za.norm();
        let signed = |z: C64| (u.conj() * z).im;
        let mut exit: Option<(usize, f64, C64)> = None;
        for k in 0..m {
            let (p, q) = (pts[k], pts[(k + 1) % m]);
            let (sp, sq) = (signed(p), signed(q));
            if sp * sq > 0.0 || (sp == 0.0 && sq == 0.0) {
                continue;
            }
            let s = sp / (sp - sq);
            let cross = p + (q - p) * s;
            let depth = (u.conj() * cross).re;
            if exit.map_or(true, |(_, _, c)| depth > (u.conj() * c).re) {
                exit = Some((k, s, cross));
            }
        }
        let Some((k, _, cross)) = exit else { continue };
        if (u.conj() * cross).re < 0.0 {
            continue;
        }
        let xk = &sweep.witness_max[k];
        let xk1 = &sweep.witness_max[(k + 1) % m];
        let xq = if (pts[k] - pts[(k + 1) % m]).norm() <= 1e-15 * scale {
            Some(xk.clone())
        } else {
            realize_on_segment(t, xk, xk1, cross)
        };
        let Some(xq) = xq else { continue };
        if let Some(x) = realize_on_segment(t, &sweep.witness_max[a], &xq, ZERO) {
            consider(x, &mut best, &mut best_val);
            if good(&best) {
                return best;
            }
        }
    }
    best
}

pub fn zero_range_vector(t: &Operator) -> Result<UnitVector> {
    zero_range_vector_with(t, &RangeOptions::default())
}

pub fn zero_range_vector_with(t: &Operator, opts: &RangeOptions) -> Result<UnitVector> {
    let n = t.n();
    let scale = t.norm();
    if scale == 0.0 {
        return Ok(UnitVector::basis(n, 0));
    }
    let tol_abs = opts.tol.containment * scale;
    match t.field() {
        Field::Real => {
            let re = cartesian_decomposition(t).re;
            let spec = spectrum_of(re.mat(), &opts.tol);
            if spec.min() > tol_abs {
                return Err(Error::ZeroNotEnclosed { distance: spec.min() });
            }
            if spec.max() < -tol_abs {
                return Err(Error::ZeroNotEnclosed { distance: -spec.max() });
            }
            Ok(real_zero_vector(&spec))
        }
        Field::Complex => {
            let sweep = fov_sweep_with(t, opts.resolution.max(8), &opts.tol)?;
            let best = peaks(t, &sweep, Extreme::Min, &opts.tol).swap_remove(0);
            if best.value > tol_abs {
                return Err(Error::ZeroNotEnclosed { distance: best.value });
            }
            Ok(UnitVector::l2(&complex_zero_vector(t, &sweep, &best, &opts.tol)))
        }
    }
}

/// Real-field value set {⟨Tx,x⟩ : x ∈ ℝⁿ, ‖x‖ = 1} = [λ_min, λ_max] of Re(T).
pub fn real_value_interval(t: &Operator) -> (f64, f64) {
    let re = cartesian_decomposition(t).re;
    let spec = spectrum_of(re.mat(), &Tolerances::default());
    (spec.min(), spec.max())
}
