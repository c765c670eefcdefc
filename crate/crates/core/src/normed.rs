//! Real normed spaces: ℓ_p, ℓ₁, ℓ∞ and symmetric polygonal norms on ℝ².
//!
//! Every quantity is expressed through norming functionals. Norms with
//! finitely many faces are handled by exact enumeration; smooth ℓ_p norms by
//! multistart ascent on the unit sphere.

use crate::error::{Error, Result};
use crate::hilbert;
use crate::linalg::{self, Mat};
use crate::operator::{Field, Operator, SingularSystem};
use crate::sampling;
use crate::space::{Polygon, SpaceSpec};
use crate::tolerance::Tolerances;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use std::f64::consts::PI;

pub const MULTISTART_SEED: u64 = 0xB1FF;
pub const MULTISTARTS: usize = 32;
pub const MAX_ITERATIONS: usize = 500;
/// Largest ℓ∞ dimension accepted.
pub const LINF_MAX_DIM: usize = 20;
/// Largest dimension for the 3ⁿ face enumeration behind ℓ₁ / ℓ∞ Crawford numbers.
pub const FACE_MAX_DIM: usize = 12;
/// Boundary samples of the fixed-point scan.
pub const FIXED_POINT_SAMPLES: usize = 10_000;

const ACTIVE: f64 = 1e-9;

/// Dense real square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    n: usize,
    a: Vec<f64>,
}

impl RealMatrix {
    pub fn of(t: &Operator) -> Result<Self> {
        if t.field() != Field::Real {
            return Err(Error::FieldMismatch("only real operators act on this space"));
        }
        let n = t.n();
        let a = t.mat().data().iter().map(|z| z.re).collect();
        Ok(RealMatrix { n, a })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        RealMatrix { n, a: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.a[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// T + s·I.
    pub fn shifted(&self, s: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.a[i * self.n + i] += s;
        }
        out
    }

    pub fn to_operator(&self) -> Operator {
        Operator::real(self.n, &self.a).expect("finite entries")
    }

    fn to_mat(&self) -> Mat {
        Mat::from_vec(self.n, self.n, linalg::real_vector(&self.a))
    }

    /// Gauss–Jordan inverse with partial pivoting; `None` when numerically singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let scale = self.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return None;
        }
        let mut m = self.a.clone();
        let mut inv = vec![0.0; n * n];
        for i in 0..n {
            inv[i * n + i] = 1.0;
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))
                .unwrap();
            if m[piv * n + col].abs() <= 1e-13 * scale {
                return None;
            }
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
                inv.swap(col * n + k, piv * n + k);
            }
            let d = m[col * n + col];
            for k in 0..n {
                m[col * n + k] /= d;
                inv[col * n + k] /= d;
            }
            for r in 0..n {
                if r != col {
                    let f = m[r * n + col];
                    if f != 0.0 {
                        for k in 0..n {
                            m[r * n + k] -= f * m[col * n + k];
                            inv[r * n + k] -= f * inv[col * n + k];
                        }
                    }
                }
            }
        }
        Some(RealMatrix { n, a: inv })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn basis(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// The norming functionals of a unit vector, possibly a whole family.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormingFamily {
    Unique { coeffs: Vec<f64> },
    /// `coeffs` on the support of x; every index in `free` ranges over [−1, 1].
    Box { coeffs: Vec<f64>, free: Vec<usize> },
    /// Convex hull of the generators.
    Hull { generators: Vec<Vec<f64>> },
}

/// One member of a norming family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormingFunctional {
    pub coeffs: Vec<f64>,
    pub dual_norm: f64,
    pub pairing: f64,
}

impl NormingFamily {
    /// The interval {f(y)} as f ranges over the family.
    pub fn range(&self, y: &[f64]) -> (f64, f64) {
        match self {
            NormingFamily::Unique { coeffs } => {
                let v = dot(coeffs, y);
                (v, v)
            }
            NormingFamily::Box { coeffs, free } => {
                let base = dot(coeffs, y);
                let r: f64 = free.iter().map(|&j| y[j].abs()).sum();
                (base - r, base + r)
            }
            NormingFamily::Hull { generators } => generators.iter().map(|g| dot(g, y)).fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), v| (lo.min(v), hi.max(v)),
            ),
        }
    }

    pub fn max_abs(&self, y: &[f64]) -> f64 {
        let (lo, hi) = self.range(y);
        lo.abs().max(hi.abs())
    }

    pub fn min_abs(&self, y: &[f64]) -> f64 {
        let (lo, hi) = self.range(y);
        if lo <= 0.0 && hi >= 0.0 {
            0.0
        } else {
            lo.abs().min(hi.abs())
        }
    }

    /// A member f with f(y) = target, for a target inside [`range`](Self::range).
    pub fn member_with_value(&self, y: &[f64], target: f64) -> Vec<f64> {
        match self {
            NormingFamily::Unique { coeffs } => coeffs.clone(),
            NormingFamily::Box { coeffs, free } => {
                let base = dot(coeffs, y);
                let r: f64 = free.iter().map(|&j| y[j].abs()).sum();
                let mut f = coeffs.clone();
                if r > 0.0 {
                    let t = ((target - base) / r).clamp(-1.0, 1.0);
                    for &j in free {
                        f[j] = if y[j] == 0.0 { 0.0 } else { t * sign(y[j]) };
                    }
                }
                f
            }
            NormingFamily::Hull { generators } => {
                let vals: Vec<f64> = generators.iter().map(|g| dot(g, y)).collect();
                let below = (0..vals.len()).filter(|&k| vals[k] <= target).max_by(|&a, &b| vals[a].total_cmp(&vals[b]));
                let above = (0..vals.len()).filter(|&k| vals[k] >= target).min_by(|&a, &b| vals[a].total_cmp(&vals[b]));
                match (below, above) {
                    (Some(i), Some(j)) if vals[j] > vals[i] => {
                        let lam = (target - vals[i]) / (vals[j] - vals[i]);
                        generators[i].iter().zip(&generators[j]).map(|(a, b)| (1.0 - lam) * a + lam * b).collect()
                    }
                    (Some(i), _) => generators[i].clone(),
                    (_, Some(j)) => generators[j].clone(),
                    _ => generators[0].clone(),
                }
            }
        }
    }

    /// A member with the largest |f(y)|.
    pub fn argmax_abs(&self, y: &[f64]) -> Vec<f64> {
        let (lo, hi) = self.range(y);
        self.member_with_value(y, if hi.abs() >= lo.abs() { hi } else { lo })
    }

    /// A member with the smallest |f(y)|.
    pub fn argmin_abs(&self, y: &[f64]) -> Vec<f64> {
        let (lo, hi) = self.range(y);
        self.member_with_value(y, 0.0f64.clamp(lo, hi))
    }

    /// Representative members: the unique functional, the box centre and
    /// corners along each free axis, or the hull generators.
    pub fn members(&self) -> Vec<Vec<f64>> {
        match self {
            NormingFamily::Unique { coeffs } => vec![coeffs.clone()],
            NormingFamily::Box { coeffs, free } => {
                let mut out = vec![coeffs.clone()];
                for &j in free {
                    for s in [1.0, -1.0] {
                        let mut f = coeffs.clone();
                        f[j] = s;
                        out.push(f);
                    }
                }
                out
            }
            NormingFamily::Hull { generators } => generators.clone(),
        }
    }

    pub fn functionals(&self, x: &[f64], space: &SpaceSpec) -> Vec<NormingFunctional> {
        self.members()
            .into_iter()
            .map(|coeffs| NormingFunctional {
                dual_norm: space.dual_norm(&coeffs),
                pairing: dot(&coeffs, x),
                coeffs,
            })
            .collect()
    }
}

pub fn norming_functionals(x: &[f64], space: &SpaceSpec) -> Result<NormingFamily> {
    norming_functionals_with(x, space, &Tolerances::default())
}

pub fn norming_functionals_with(x: &[f64], space: &SpaceSpec, tol: &Tolerances) -> Result<NormingFamily> {
    space.check_dimension(x.len())?;
    let r = space.norm(x);
    if (r - 1.0).abs() > space.unit_tolerance(tol) {
        return Err(Error::NotUnitVector { norm: r });
    }
    Ok(family_unchecked(x, space))
}

fn family_unchecked(x: &[f64], space: &SpaceSpec) -> NormingFamily {
    let n = x.len();
    match space {
        SpaceSpec::L2 => NormingFamily::Unique { coeffs: x.to_vec() },
        SpaceSpec::Lp { p } => {
            let f: Vec<f64> = x.iter().map(|&a| sign(a) * a.abs().powf(p - 1.0)).collect();
            let q = p / (p - 1.0);
            let s = crate::space::lp_norm(&f, q);
            NormingFamily::Unique { coeffs: f.iter().map(|a| a / s).collect() }
        }
        SpaceSpec::L1 => {
            let mut coeffs = vec![0.0; n];
            let mut free = Vec::new();
            for i in 0..n {
                if x[i].abs() > 1e-12 {
                    coeffs[i] = sign(x[i]);
                } else {
                    free.push(i);
                }
            }
            if free.is_empty() {
                NormingFamily::Unique { coeffs }
            } else {
                NormingFamily::Box { coeffs, free }
            }
        }
        SpaceSpec::Linf => {
            let m = x.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            let generators: Vec<Vec<f64>> = (0..n)
                .filter(|&i| x[i].abs() >= m - ACTIVE)
                .map(|i| {
                    let mut e = basis(n, i);
                    e[i] = sign(x[i]);
                    e
                })
                .collect();
            hull_or_unique(generators)
        }
        SpaceSpec::Polygon(poly) => {
            let m = poly.norm(x);
            let generators: Vec<Vec<f64>> = poly
                .normals()
                .iter()
                .filter(|a| a[0] * x[0] + a[1] * x[1] >= m - ACTIVE)
                .map(|a| a.to_vec())
                .collect();
            hull_or_unique(generators)
        }
    }
}

fn hull_or_unique(mut generators: Vec<Vec<f64>>) -> NormingFamily {
    if generators.len() == 1 {
        NormingFamily::Unique { coeffs: generators.pop().unwrap() }
    } else {
        NormingFamily::Hull { generators }
    }
}

/// A value together with the unit vector (and functional) realizing it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormedValue {
    pub value: f64,
    pub witness: Vec<f64>,
    pub functional: Option<Vec<f64>>,
    /// Computed by a closed form or exact enumeration rather than by optimization.
    pub exact: bool,
}

impl NormedValue {
    fn exact(value: f64, witness: Vec<f64>, functional: Option<Vec<f64>>) -> Self {
        NormedValue { value, witness, functional, exact: true }
    }
}

fn prepare(t: &Operator, space: &SpaceSpec) -> Result<RealMatrix> {
    let m = RealMatrix::of(t)?;
    space.check_dimension(m.n)?;
    if *space == SpaceSpec::Linf && m.n > LINF_MAX_DIM {
        return Err(Error::DimensionTooLarge { n: m.n, max: LINF_MAX_DIM });
    }
    Ok(m)
}

fn real_coords(x: &[linalg::C64]) -> Vec<f64> {
    x.iter().map(|z| z.re).collect()
}

// ---------------------------------------------------------------------------
// Multistart ascent on the ℓ_p sphere.

struct SphereSearch {
    p: f64,
    n: usize,
}

impl SphereSearch {
    fn normalize(&self, y: &[f64]) -> Vec<f64> {
        let r = crate::space::lp_norm(y, self.p);
        y.iter().map(|a| a / r).collect()
    }

    fn gradient(&self, f: &dyn Fn(&[f64]) -> f64, y: &[f64]) -> Vec<f64> {
        let h = 1e-7;
        let mut g = vec![0.0; self.n];
        let mut z = y.to_vec();
        for k in 0..self.n {
            let old = z[k];
            z[k] = old + h;
            let up = f(&self.normalize(&z));
            z[k] = old - h;
            let down = f(&self.normalize(&z));
            z[k] = old;
            g[k] = (up - down) / (2.0 * h);
        }
        g
    }

    /// Projected gradient ascent with Armijo backtracking.
    fn ascend(&self, f: &dyn Fn(&[f64]) -> f64, start: &[f64]) -> (f64, Vec<f64>) {
        let mut y = self.normalize(start);
        let mut fy = f(&y);
        let mut alpha = 1.0;
        for _ in 0..MAX_ITERATIONS {
            let g = self.gradient(f, &y);
            let gg = dot(&g, &g);
            if gg == 0.0 {
                break;
            }
            let mut moved = false;
            while alpha * gg.sqrt() >= 1e-12 {
                let trial: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a + alpha * b).collect();
                let trial = self.normalize(&trial);
                let ft = f(&trial);
                if ft >= fy + 1e-4 * alpha * gg {
                    y = trial;
                    fy = ft;
                    moved = true;
                    alpha *= 2.0;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        (fy, y)
    }

    fn starts(&self, extra: &[Vec<f64>], f: &dyn Fn(&[f64]) -> f64) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut out: Vec<Vec<f64>> = (0..n).map(|i| basis(n, i)).collect();
        out.push(vec![1.0; n]);
        out.extend(extra.iter().cloned());
        let mut rng = sampling::rng(MULTISTART_SEED);
        for _ in 0..MULTISTARTS {
            let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            if g.iter().any(|v| *v != 0.0) {
                out.push(g);
            }
        }
        if n == 2 {
            let m = 720;
            let vals: Vec<(f64, Vec<f64>)> = (0..m)
                .map(|k| {
                    let a = PI * k as f64 / m as f64;
                    let x = self.normalize(&[a.cos(), a.sin()]);
                    (f(&x), x)
                })
                .collect();
            for k in 0..m {
                let prev = vals[(k + m - 1) % m].0;
                let next = vals[(k + 1) % m].0;
                if vals[k].0 >= prev && vals[k].0 >= next {
                    out.push(vals[k].1.clone());
                }
            }
        }
        out
    }

    /// Every local maximum reached from the starts, best first.
    fn maximize_all(&self, f: &dyn Fn(&[f64]) -> f64, extra: &[Vec<f64>]) -> Vec<(f64, Vec<f64>)> {
        let mut found: Vec<(f64, Vec<f64>)> =
            self.starts(extra, f).iter().map(|s| self.ascend(f, s)).collect();
        found.sort_by(|a, b| b.0.total_cmp(&a.0));
        found
    }

    fn maximize(&self, f: &dyn Fn(&[f64]) -> f64, extra: &[Vec<f64>]) -> (f64, Vec<f64>) {
        let (fy, y) = self.maximize_all(f, extra).swap_remove(0);
        self.polish(f, fy, y)
    }

    /// Coordinate pattern search with shrinking steps, run after the gradient
    /// phase to remove the finite-difference error near the optimum.
    fn polish(&self, f: &dyn Fn(&[f64]) -> f64, mut fy: f64, mut y: Vec<f64>) -> (f64, Vec<f64>) {
        let mut step = 1e-3;
        while step >= 1e-14 {
            let mut improved = true;
            while improved {
                improved = false;
                for k in 0..self.n {
                    for dir in [1.0, -1.0] {
                        let mut z = y.clone();
                        z[k] += dir * step;
                        let z = self.normalize(&z);
                        let fz = f(&z);
                        if fz > fy {
                            fy = fz;
                            y = z;
                            improved = true;
                        }
                    }
                }
            }
            step *= 0.5;
        }
        (fy, y)
    }
}

fn singular_starts(m: &RealMatrix) -> Vec<Vec<f64>> {
    let sys = SingularSystem::of(&m.to_mat(), &Tolerances::default());
    sys.right.iter().map(|v| real_coords(v)).collect()
}

/// Signed pairing φ(x) = J(x)(Tx) on the ℓ_p sphere.
fn lp_pairing(m: &RealMatrix, p: f64, x: &[f64]) -> f64 {
    let tx = m.apply(x);
    let q = p / (p - 1.0);
    let f: Vec<f64> = x.iter().map(|&a| sign(a) * a.abs().powf(p - 1.0)).collect();
    dot(&f, &tx) / crate::space::lp_norm(&f, q)
}

struct PairingExtremes {
    max: (f64, Vec<f64>),
    min: (f64, Vec<f64>),
}

fn lp_pairing_extremes(m: &RealMatrix, p: f64) -> PairingExtremes {
    let search = SphereSearch { p, n: m.n };
    let extra = singular_starts(m);
    let up = search.maximize(&|x| lp_pairing(m, p, x), &extra);
    let down = search.maximize(&|x| -lp_pairing(m, p, x), &extra);
    PairingExtremes { max: up, min: (-down.0, down.1) }
}

fn lp_functional(x: &[f64], p: f64) -> Vec<f64> {
    match family_unchecked(x, &SpaceSpec::Lp { p }) {
        NormingFamily::Unique { coeffs } => coeffs,
        _ => unreachable!("ℓ_p norming functionals are unique"),
    }
}

// ---------------------------------------------------------------------------
// Numerical radius.

pub fn numerical_radius_normed(t: &Operator, space: &SpaceSpec) -> Result<NormedValue> {
    let m = prepare(t, space)?;
    let n = m.n;
    Ok(match space {
        SpaceSpec::L2 => {
            let r = hilbert::numerical_radius(t);
            let x = real_coords(r.witness.coords());
            NormedValue::exact(r.v, x.clone(), Some(x))
        }
        SpaceSpec::L1 => {
            let best = (0..n)
                .map(|k| {
                    let off: f64 = (0..n).filter(|&j| j != k).map(|j| m.get(j, k).abs()).sum();
                    (m.get(k, k).abs() + off, k)
                })
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap();
            let x = basis(n, best.1);
            let f = family_unchecked(&x, space).argmax_abs(&m.apply(&x));
            NormedValue::exact(best.0, x, Some(f))
        }
        SpaceSpec::Linf => {
            let (value, i) = (0..n)
                .map(|i| {
                    let off: f64 = (0..n).filter(|&j| j != i).map(|j| m.get(i, j).abs()).sum();
                    (m.get(i, i).abs() + off, i)
                })
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap();
            let s = sign(m.get(i, i));
            let x: Vec<f64> = (0..n).map(|j| if j == i { 1.0 } else { s * sign(m.get(i, j)) }).collect();
            let f = family_unchecked(&x, space).argmax_abs(&m.apply(&x));
            NormedValue::exact(value, x, Some(f))
        }
        SpaceSpec::Polygon(poly) => {
            let (value, x) = poly
                .vertices()
                .iter()
                .map(|v| (family_unchecked(v, space).max_abs(&m.apply(v)), v.to_vec()))
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap();
            let f = family_unchecked(&x, space).argmax_abs(&m.apply(&x));
            NormedValue::exact(value, x, Some(f))
        }
        SpaceSpec::Lp { p } => {
            let e = lp_pairing_extremes(&m, *p);
            let (value, x) = if e.max.0 >= -e.min.0 { e.max } else { (-e.min.0, e.min.1) };
            let f = lp_functional(&x, *p);
            NormedValue { value, functional: Some(f), witness: x, exact: false }
        }
    })
}

// ---------------------------------------------------------------------------
// Crawford number.

pub fn crawford_normed(t: &Operator, space: &SpaceSpec) -> Result<NormedValue> {
    let m = prepare(t, space)?;
    match space {
        SpaceSpec::L2 => {
            let r = hilbert::crawford_number(t);
            let x = real_coords(r.witness.coords());
            Ok(NormedValue::exact(r.c, x.clone(), Some(x)))
        }
        SpaceSpec::L1 => {
            guard_faces(m.n)?;
            Ok(crawford_l1(&m, space))
        }
        SpaceSpec::Linf => {
            guard_faces(m.n)?;
            Ok(crawford_linf(&m, space))
        }
        SpaceSpec::Polygon(poly) => Ok(crawford_polygon(&m, poly, space)),
        SpaceSpec::Lp { p } => Ok(crawford_lp(&m, *p)),
    }
}

fn guard_faces(n: usize) -> Result<()> {
    if n > FACE_MAX_DIM {
        Err(Error::DimensionTooLarge { n, max: FACE_MAX_DIM })
    } else {
        Ok(())
    }
}

fn min_pair(m: &RealMatrix, x: Vec<f64>, space: &SpaceSpec) -> NormedValue {
    let tx = m.apply(&x);
    let fam = family_unchecked(&x, space);
    NormedValue::exact(fam.min_abs(&tx), x, Some(fam.argmin_abs(&tx)))
}

/// Sign patterns s ∈ {−1, 0, 1}ⁿ \ {0}.
fn patterns(n: usize) -> impl Iterator<Item = Vec<i8>> {
    let total = 3usize.pow(n as u32);
    (1..total).map(move |mut code| {
        let mut s = vec![0i8; n];
        for v in s.iter_mut() {
            *v = match code % 3 {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            code /= 3;
        }
        s
    })
}

/// ℓ₁: on the face with sign pattern s, the centre value of the functional
/// family is linear with vertex values A_i; a sign change forces c = 0,
/// otherwise the infimum sits at a vertex ±e_i.
fn crawford_l1(m: &RealMatrix, space: &SpaceSpec) -> NormedValue {
    let n = m.n;
    for s in patterns(n) {
        let support: Vec<usize> = (0..n).filter(|&i| s[i] != 0).collect();
        if support.len() < 2 {
            continue;
        }
        let a: Vec<f64> = support
            .iter()
            .map(|&i| {
                let si = s[i] as f64;
                support.iter().map(|&k| si * s[k] as f64 * m.get(k, i)).sum()
            })
            .collect();
        let pos = (0..a.len()).find(|&k| a[k] >= 0.0);
        let neg = (0..a.len()).find(|&k| a[k] <= 0.0);
        if let (Some(p), Some(q)) = (pos, neg) {
            let lam = if a[p] == a[q] { 0.0 } else { a[p] / (a[p] - a[q]) };
            let mut x = vec![0.0; n];
            x[support[p]] += (1.0 - lam) * s[support[p]] as f64;
            x[support[q]] += lam * s[support[q]] as f64;
            let mut f = vec![0.0; n];
            for &k in &support {
                f[k] = s[k] as f64;
            }
            let value = dot(&f, &m.apply(&x)).abs();
            return NormedValue::exact(value, x, Some(f));
        }
    }
    (0..n)
        .map(|i| min_pair(m, basis(n, i), space))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap()
}

/// ℓ∞: on the face with active signs s on S and free coordinates u, every
/// active pairing h_i(u) = s_i(Tx)_i is affine. Zero is reached on the face
/// unless all h_i stay positive or all stay negative; then the infimum sits
/// at a sign vector.
fn crawford_linf(m: &RealMatrix, space: &SpaceSpec) -> NormedValue {
    let n = m.n;
    for s in patterns(n) {
        let active: Vec<usize> = (0..n).filter(|&i| s[i] != 0).collect();
        let free: Vec<usize> = (0..n).filter(|&i| s[i] == 0).collect();
        let centre: Vec<f64> = active
            .iter()
            .map(|&i| s[i] as f64 * active.iter().map(|&k| m.get(i, k) * s[k] as f64).sum::<f64>())
            .collect();
        let radius: Vec<f64> = active.iter().map(|&i| free.iter().map(|&j| m.get(i, j).abs()).sum()).collect();
        let all_pos = (0..active.len()).all(|k| centre[k] - radius[k] > 0.0);
        let all_neg = (0..active.len()).all(|k| centre[k] + radius[k] < 0.0);
        if all_pos || all_neg {
            continue;
        }
        let point = |u: &[f64]| -> Vec<f64> {
            let mut x = vec![0.0; n];
            for &i in &active {
                x[i] = s[i] as f64;
            }
            for (k, &j) in free.iter().enumerate() {
                x[j] = u[k];
            }
            x
        };
        let extreme = |k: usize, dir: f64| -> Vec<f64> {
            let i = active[k];
            free.iter().map(|&j| dir * s[i] as f64 * sign(m.get(i, j))).collect()
        };
        let lo = (0..active.len()).find(|&k| centre[k] - radius[k] <= 0.0).unwrap();
        let hi = (0..active.len()).find(|&k| centre[k] + radius[k] >= 0.0).unwrap();
        let mut a = extreme(lo, -1.0);
        let mut b = extreme(hi, 1.0);
        let classify = |u: &[f64]| -> f64 {
            let tx = m.apply(&point(u));
            let h: Vec<f64> = active.iter().map(|&i| s[i] as f64 * tx[i]).collect();
            let lo = h.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if lo <= 0.0 && hi >= 0.0 {
                0.0
            } else if lo > 0.0 {
                lo
            } else {
                hi
            }
        };
        let (ca, cb) = (classify(&a), classify(&b));
        let u = if ca == 0.0 {
            a
        } else if cb == 0.0 {
            b
        } else {
            if ca > 0.0 {
                std::mem::swap(&mut a, &mut b);
            }
            let mut best = a.clone();
            for _ in 0..200 {
                let mid: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 0.5 * (p + q)).collect();
                let c = classify(&mid);
                best = mid.clone();
                if c == 0.0 {
                    break;
                } else if c < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            best
        };
        return min_pair(m, point(&u), space);
    }
    sign_vectors(n)
        .map(|x| min_pair(m, x, space))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap()
}

fn sign_vectors(n: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..1usize << n).map(move |bits| (0..n).map(|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
}

fn crawford_polygon(m: &RealMatrix, poly: &Polygon, space: &SpaceSpec) -> NormedValue {
    for k in 0..poly.len() {
        let (v, w, a) = (poly.vertex(k), poly.vertex(k + 1), poly.normal(k));
        let g0 = dot(&a, &m.apply(&v));
        let g1 = dot(&a, &m.apply(&w));
        if g0 * g1 <= 0.0 {
            let lam = if g0 == g1 { 0.0 } else { g0 / (g0 - g1) };
            let x: Vec<f64> = (0..2).map(|i| (1.0 - lam) * v[i] + lam * w[i]).collect();
            let value = dot(&a, &m.apply(&x)).abs();
            return NormedValue::exact(value, x, Some(a.to_vec()));
        }
    }
    poly.vertices()
        .iter()
        .map(|v| min_pair(m, v.to_vec(), space))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap()
}

fn crawford_lp(m: &RealMatrix, p: f64) -> NormedValue {
    let e = lp_pairing_extremes(m, p);
    let search = SphereSearch { p, n: m.n };
    let (value, x) = if e.max.0 < 0.0 {
        (-e.max.0, e.max.1)
    } else if e.min.0 > 0.0 {
        e.min
    } else {
        // The pairing is even in x; align the endpoints so the chord avoids 0.
        let a = e.max.1;
        let mut b = e.min.1;
        if dot(&a, &b) < 0.0 {
            b.iter_mut().for_each(|v| *v = -*v);
        }
        let at = |s: f64| search.normalize(&a.iter().zip(&b).map(|(p, q)| (1.0 - s) * p + s * q).collect::<Vec<_>>());
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if lp_pairing(m, p, &at(mid)) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = at(lo);
        (lp_pairing(m, p, &x).abs(), x)
    };
    let f = lp_functional(&x, p);
    NormedValue { value, functional: Some(f), witness: x, exact: false }
}

// ---------------------------------------------------------------------------
// Operator norm and minimum norm.

pub fn operator_norm_normed(t: &Operator, space: &SpaceSpec) -> Result<NormedValue> {
    let m = prepare(t, space)?;
    Ok(norm_of(&m, space))
}

fn norm_of(m: &RealMatrix, space: &SpaceSpec) -> NormedValue {
    let n = m.n;
    match space {
        SpaceSpec::L2 => {
            let sys = SingularSystem::of(&m.to_mat(), &Tolerances::default());
            NormedValue::exact(sys.sigma_max(), real_coords(&sys.right[0]), None)
        }
        SpaceSpec::L1 => {
            let (value, k) = (0..n)
                .map(|k| ((0..n).map(|i| m.get(i, k).abs()).sum::<f64>(), k))
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap();
            NormedValue::exact(value, basis(n, k), None)
        }
        SpaceSpec::Linf => {
            let (value, i) = (0..n)
                .map(|i| ((0..n).map(|j| m.get(i, j).abs()).sum::<f64>(), i))
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap();
            NormedValue::exact(value, (0..n).map(|j| sign(m.get(i, j))).collect(), None)
        }
        SpaceSpec::Polygon(poly) => {
            let (value, x) = poly
                .vertices()
                .iter()
                .map(|v| (poly.norm(&m.apply(v)), v.to_vec()))
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap();
            NormedValue::exact(value, x, None)
        }
        SpaceSpec::Lp { p } => {
            let search = SphereSearch { p: *p, n };
            let (value, x) = search.maximize(&|x| crate::space::lp_norm(&m.apply(x), *p), &singular_starts(m));
            NormedValue { value, witness: x, functional: None, exact: false }
        }
    }
}

pub fn minimum_norm_normed(t: &Operator, space: &SpaceSpec) -> Result<NormedValue> {
    let m = prepare(t, space)?;
    Ok(min_norm_of(&m, space))
}

fn min_norm_of(m: &RealMatrix, space: &SpaceSpec) -> NormedValue {
    if *space == SpaceSpec::L2 {
        let sys = SingularSystem::of(&m.to_mat(), &Tolerances::default());
        return NormedValue::exact(sys.sigma_min(), real_coords(sys.right.last().unwrap()), None);
    }
    match m.inverse() {
        Some(inv) => {
            let top = norm_of(&inv, space);
            let x = space.normalize(&inv.apply(&top.witness));
            NormedValue { value: 1.0 / top.value, witness: x, functional: None, exact: top.exact }
        }
        None => {
            let sys = SingularSystem::of(&m.to_mat(), &Tolerances::default());
            let x = space.normalize(&real_coords(sys.right.last().unwrap()));
            let value = space.norm(&m.apply(&x));
            NormedValue::exact(value, x, None)
        }
    }
}

// ---------------------------------------------------------------------------
// Daugavet equation and Birkhoff orthogonality.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DaugavetReport {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub exact: bool,
    /// Unit vector attaining ‖I + T‖.
    pub witness: Vec<f64>,
}

pub fn daugavet_check(t: &Operator, space: &SpaceSpec) -> Result<DaugavetReport> {
    let m = prepare(t, space)?;
    let top = norm_of(&m.shifted(1.0), space);
    let norm = norm_of(&m, space);
    let lhs = top.value;
    let rhs = 1.0 + norm.value;
    let exact = top.exact && norm.exact;
    let tol = if exact { 1e-8 * rhs } else { 1e-5 };
    Ok(DaugavetReport { holds: (lhs - rhs).abs() <= tol, lhs, rhs, exact, witness: top.witness })
}

/// min over λ of ‖x + λy‖, by ternary search on the convex map λ ↦ ‖x + λy‖.
pub fn birkhoff_minimum(x: &[f64], y: &[f64], space: &SpaceSpec) -> f64 {
    let nx = space.norm(x);
    let ny = space.norm(y);
    if ny == 0.0 {
        return nx;
    }
    let at = |l: f64| space.norm(&x.iter().zip(y).map(|(a, b)| a + l * b).collect::<Vec<_>>());
    let r = 2.0 * nx / ny + 1.0;
    let (mut lo, mut hi) = (-r, r);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if at(m1) < at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    at(0.5 * (lo + hi)).min(at(0.0))
}

pub fn birkhoff_orthogonal(x: &[f64], y: &[f64], space: &SpaceSpec) -> Result<bool> {
    space.check_dimension(x.len())?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let nx = space.norm(x);
    if nx == 0.0 {
        return Err(Error::PreconditionFailed("x must be nonzero".into()));
    }
    Ok(birkhoff_minimum(x, y, space) >= nx - 1e-9 * nx.max(1.0))
}

// ---------------------------------------------------------------------------
// Fixed points.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointReport {
    /// min over boundary samples of min(‖Tx − x‖, ‖Tx + x‖).
    pub scan_floor: f64,
    pub samples: usize,
    /// min(m(T − I), m(T + I)).
    pub exact_floor: f64,
    pub exact: bool,
}

/// Evenly spread boundary points: arclength on polygon edges, face
/// parameterizations for ℓ₁ / ℓ∞ and normalized Gaussians for ℓ_p.
pub fn boundary_points(space: &SpaceSpec, n: usize, count: usize) -> Vec<Vec<f64>> {
    if let SpaceSpec::Polygon(poly) = space {
        let k = poly.len();
        let per = count.div_ceil(k);
        let mut out = Vec::with_capacity(per * k);
        for e in 0..k {
            let (v, w) = (poly.vertex(e), poly.vertex(e + 1));
            for j in 0..per {
                let s = j as f64 / per as f64;
                out.push(vec![(1.0 - s) * v[0] + s * w[0], (1.0 - s) * v[1] + s * w[1]]);
            }
        }
        return out;
    }
    crate::oracle::sample_sphere(space, Field::Real, n, count, MULTISTART_SEED)
        .points
        .into_iter()
        .map(|x| real_coords(&x))
        .collect()
}

pub fn fixed_point_floor(t: &Operator, space: &SpaceSpec) -> Result<FixedPointReport> {
    let m = prepare(t, space)?;
    let pts = boundary_points(space, m.n, FIXED_POINT_SAMPLES);
    let scan_floor = pts
        .iter()
        .map(|x| {
            let tx = m.apply(x);
            let minus: Vec<f64> = tx.iter().zip(x).map(|(a, b)| a - b).collect();
            let plus: Vec<f64> = tx.iter().zip(x).map(|(a, b)| a + b).collect();
            space.norm(&minus).min(space.norm(&plus))
        })
        .fold(f64::INFINITY, f64::min);
    let a = min_norm_of(&m.shifted(-1.0), space);
    let b = min_norm_of(&m.shifted(1.0), space);
    Ok(FixedPointReport {
        scan_floor,
        samples: pts.len(),
        exact_floor: a.value.min(b.value),
        exact: a.exact && b.exact,
    })
}

// ---------------------------------------------------------------------------
// Polygonal counterexample.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygonReport {
    pub v1: [f64; 2],
    pub v2: [f64; 2],
    pub v3: [f64; 2],
    pub h: [f64; 2],
    /// Position of h on the segment from v₃ (0) to (v₃ − v₂)/‖v₃ − v₂‖ (1).
    pub segment_parameter: f64,
    pub norm: f64,
    pub radius: f64,
    /// ‖T v₂‖.
    pub v2_image_norm: f64,
    /// The largest |f(T v₂)| over norming functionals f of v₂.
    pub v2_pairing: f64,
    pub v2_in_mv: bool,
    /// Trace of the rank-one T, its only possibly nonzero eigenvalue.
    pub trace: f64,
    pub fixed_points: FixedPointReport,
    pub certified: bool,
}

fn strictly_outward(poly: &Polygon, v: &[f64; 2], h: &[f64]) -> bool {
    (0..64).all(|k| {
        let l = 1e-6 * 10f64.powf(7.0 * k as f64 / 63.0);
        poly.norm(&[v[0] + l * h[0], v[1] + l * h[1]]) > 1.0 + 1e-13
    })
}

pub fn polygonal_counterexample(poly: &Polygon) -> Result<(Operator, PolygonReport)> {
    if poly.len() < 6 {
        return Err(Error::PolygonTooSmall { got: poly.len(), min: 6 });
    }
    let space = SpaceSpec::Polygon(poly.clone());
    let (v1, v2, v3) = (poly.vertex(0), poly.vertex(1), poly.vertex(2));
    let step = [v3[0] - v2[0], v3[1] - v2[1]];
    let len = poly.norm(&step);
    let d = [step[0] / len, step[1] / len];
    let h_at = |s: f64| vec![(1.0 - s) * v3[0] + s * d[0], (1.0 - s) * v3[1] + s * d[1]];
    let ortho = |s: f64| birkhoff_minimum(&v2, &h_at(s), &space) >= 1.0 - 1e-14;
    let valid = |s: f64| ortho(s) && strictly_outward(poly, &v2, &h_at(s));
    let s = if valid(0.0) {
        0.0
    } else {
        if !ortho(1.0) {
            return Err(Error::PreconditionFailed("no Birkhoff-orthogonal direction on the segment".into()));
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if ortho(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let h = h_at(s);
    if !valid(s) {
        return Err(Error::PreconditionFailed("the located direction is not strictly outward".into()));
    }
    // T = w ⊗ g with g(v₂) = 1, g(h) = 0 and w the midpoint of [v₂, v₃].
    let det = v2[0] * h[1] - v2[1] * h[0];
    let g = [h[1] / det, -h[0] / det];
    let w = [(v2[0] + v3[0]) / 2.0, (v2[1] + v3[1]) / 2.0];
    let t = Operator::real(2, &[w[0] * g[0], w[0] * g[1], w[1] * g[0], w[1] * g[1]])?;
    let m = RealMatrix::of(&t)?;
    let norm = norm_of(&m, &space).value;
    let radius = numerical_radius_normed(&t, &space)?.value;
    let tv2 = m.apply(&v2);
    let v2_image_norm = poly.norm(&tv2);
    let v2_pairing = family_unchecked(&v2, &space).max_abs(&tv2);
    let v2_in_mv = (v2_image_norm - norm).abs() <= 1e-9 && (v2_pairing - radius).abs() <= 1e-9;
    let fixed_points = fixed_point_floor(&t, &space)?;
    let certified = (norm - 1.0).abs() <= 1e-6
        && (radius - 1.0).abs() <= 1e-6
        && v2_in_mv
        && fixed_points.scan_floor > 0.0
        && fixed_points.exact_floor > 1e-9;
    let report = PolygonReport {
        v1,
        v2,
        v3,
        h: [h[0], h[1]],
        segment_parameter: s,
        norm,
        radius,
        v2_image_norm,
        v2_pairing,
        v2_in_mv,
        trace: m.get(0, 0) + m.get(1, 1),
        fixed_points,
        certified,
    };
    Ok((t, report))
}

// ---------------------------------------------------------------------------
// Checks for ℓ_p and strictly convex spaces.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpEvenReport {
    pub applicable: bool,
    pub norm: f64,
    pub radius: f64,
    /// Unit vector in M_T ∩ V_T found by the search.
    pub mv_witness: Option<Vec<f64>>,
    pub fixed_vector: Option<Vec<f64>>,
    /// ±1.
    pub eigenvalue: Option<f64>,
    pub residual: Option<f64>,
    pub holds: bool,
}

fn rank_of(m: &RealMatrix) -> usize {
    SingularSystem::of(&m.to_mat(), &Tolerances::default()).rank(1e-10)
}

pub fn lp_even_rank1_check(t: &Operator, p: f64) -> Result<LpEvenReport> {
    if ![4.0, 6.0, 8.0].contains(&p) {
        return Err(Error::PreconditionFailed(format!("p must be 4, 6 or 8, got {p}")));
    }
    let space = SpaceSpec::Lp { p };
    let m = prepare(t, &space)?;
    if m.n != 2 {
        return Err(Error::PreconditionFailed(format!("dimension must be 2, got {}", m.n)));
    }
    if rank_of(&m) != 1 {
        return Err(Error::PreconditionFailed("operator must have rank 1".into()));
    }
    let norm = norm_of(&m, &space);
    if (norm.value - 1.0).abs() > 1e-8 {
        return Err(Error::PreconditionFailed(format!("‖T‖ must be 1, got {}", norm.value)));
    }
    let search = SphereSearch { p, n: 2 };
    let extra = singular_starts(&m);
    let mut candidates = search.maximize_all(&|x| lp_pairing(&m, p, x), &extra);
    candidates.extend(search.maximize_all(&|x| -lp_pairing(&m, p, x), &extra));
    let radius = candidates.iter().map(|c| c.0).fold(0.0, f64::max);
    let mv_witness = candidates
        .iter()
        .filter(|c| (c.0 - radius).abs() <= 1e-6)
        .map(|c| c.1.clone())
        .find(|x| (space.norm(&m.apply(x)) - norm.value).abs() <= 1e-6);
    let mut report = LpEvenReport {
        applicable: mv_witness.is_some(),
        norm: norm.value,
        radius,
        mv_witness,
        fixed_vector: None,
        eigenvalue: None,
        residual: None,
        holds: true,
    };
    if report.applicable {
        // Rank one: T = u ⊗ g, whose only nonzero eigenvalue is g(u) with eigenvector u.
        let sys = SingularSystem::of(&m.to_mat(), &Tolerances::default());
        let u = space.normalize(&real_coords(&sys.left[0]));
        let lambda = if dot(&m.apply(&u), &u) >= 0.0 { 1.0 } else { -1.0 };
        let r: Vec<f64> = m.apply(&u).iter().zip(&u).map(|(a, b)| a - lambda * b).collect();
        let residual = space.norm(&r);
        report.fixed_vector = Some(u);
        report.eigenvalue = Some(lambda);
        report.residual = Some(residual);
        report.holds = residual <= 1e-6;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScspaceReport {
    pub applicable: bool,
    pub daugavet: DaugavetReport,
    pub norm: f64,
    pub radius: f64,
    pub witness: Vec<f64>,
    /// |‖Tx‖ − ‖T‖|.
    pub norm_attained: f64,
    /// ‖Tx − ‖T‖x‖.
    pub eigen_residual: f64,
    /// |v(T) − ‖T‖|.
    pub radius_gap: f64,
    /// ||J(x)(Tx)| − v(T)|.
    pub pairing_gap: f64,
    pub holds: bool,
}

fn require_strictly_convex(space: &SpaceSpec) -> Result<()> {
    if space.is_strictly_convex() {
        Ok(())
    } else {
        Err(Error::PreconditionFailed("the space must be strictly convex (ℓ_p, 1 < p < ∞)".into()))
    }
}

pub fn scspace_property_check(t: &Operator, space: &SpaceSpec) -> Result<ScspaceReport> {
    require_strictly_convex(space)?;
    let m = prepare(t, space)?;
    let daugavet = daugavet_check(t, space)?;
    let norm = norm_of(&m, space).value;
    let radius = numerical_radius_normed(t, space)?.value;
    let x = daugavet.witness.clone();
    let tx = m.apply(&x);
    let norm_attained = (space.norm(&tx) - norm).abs();
    let r: Vec<f64> = tx.iter().zip(&x).map(|(a, b)| a - norm * b).collect();
    let eigen_residual = space.norm(&r);
    let radius_gap = (radius - norm).abs();
    let pairing_gap = (family_unchecked(&x, space).max_abs(&tx) - radius).abs();
    let holds = [norm_attained, eigen_residual, radius_gap, pairing_gap].iter().all(|&v| v <= 1e-6);
    Ok(ScspaceReport {
        applicable: daugavet.holds,
        daugavet,
        norm,
        radius,
        witness: x,
        norm_attained,
        eigen_residual,
        radius_gap,
        pairing_gap,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComNonemptyReport {
    pub norm: f64,
    pub radius: f64,
    pub radius_is_one: bool,
    /// Unit eigenvector with eigenvalue ±1, when one exists.
    pub eigenvector: Option<Vec<f64>>,
    pub eigenvalue: Option<f64>,
    pub residual: Option<f64>,
    pub equivalence_holds: bool,
}

pub fn com_nonempty_check(t: &Operator, space: &SpaceSpec) -> Result<ComNonemptyReport> {
    require_strictly_convex(space)?;
    let m = prepare(t, space)?;
    let norm = norm_of(&m, space).value;
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::PreconditionFailed(format!("‖T‖ must be 1, got {norm}")));
    }
    let radius = numerical_radius_normed(t, space)?.value;
    let mut eig = None;
    for lambda in [1.0, -1.0] {
        let shifted = m.shifted(-lambda);
        let sys = SingularSystem::of(&shifted.to_mat(), &Tolerances::default());
        let x = space.normalize(&real_coords(sys.right.last().unwrap()));
        let residual = space.norm(&shifted.apply(&x));
        if residual <= 1e-6 && eig.as_ref().is_none_or(|(_, _, r): &(Vec<f64>, f64, f64)| residual < *r) {
            eig = Some((x, lambda, residual));
        }
    }
    let radius_is_one = (radius - 1.0).abs() <= 1e-6;
    Ok(ComNonemptyReport {
        norm,
        radius,
        radius_is_one,
        equivalence_holds: radius_is_one == eig.is_some(),
        residual: eig.as_ref().map(|e| e.2),
        eigenvalue: eig.as_ref().map(|e| e.1),
        eigenvector: eig.map(|e| e.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonemptyReport {
    /// ‖T‖ = v(T) within tolerance.
    pub applicable: bool,
    pub norm: f64,
    pub radius: f64,
    pub witnesses: usize,
    /// The largest ‖T‖ − ‖Tx‖ over the radius witnesses, relative to ‖T‖.
    pub worst_gap: f64,
    /// Every radius witness attains the norm: V_T ⊆ M_T.
    pub holds: bool,
}

/// When ‖T‖ = v(T), every vector attaining v(T) attains ‖T‖.
pub fn nonempty_check(t: &Operator, space: &SpaceSpec) -> Result<NonemptyReport> {
    let (norm, radius, images, exact) = if *space == SpaceSpec::L2 {
        let an = crate::attainment::Analysis::new(t);
        let set = crate::attainment::radius_attainment_for(&an);
        let images: Vec<f64> = set.vectors().iter().map(|x| linalg::norm(&t.apply(x))).collect();
        (an.norm, an.v(), images, true)
    } else {
        let m = prepare(t, space)?;
        let norm = norm_of(&m, space);
        let radius = numerical_radius_normed(t, space)?;
        let image = space.norm(&m.apply(&radius.witness));
        (norm.value, radius.value, vec![image], norm.exact && radius.exact)
    };
    let scale = norm.max(f64::MIN_POSITIVE);
    let (equal_tol, gap_tol) = if exact { (1e-9, 1e-7) } else { (1e-6, 1e-6) };
    let worst_gap = images.iter().map(|v| (norm - v) / scale).fold(0.0, f64::max);
    let applicable = (norm - radius).abs() <= equal_tol * scale;
    Ok(NonemptyReport {
        applicable,
        norm,
        radius,
        witnesses: images.len(),
        worst_gap,
        holds: !applicable || worst_gap <= gap_tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McSufficientReport {
    pub crawford: f64,
    pub min_norm: f64,
    pub applicable: bool,
    /// Minimum-norm witness x used for the check.
    pub witness: Vec<f64>,
    /// The smallest ||f(Tx)| − c(T)| over norming functionals f of x.
    pub pairing_gap: f64,
    pub holds: bool,
    /// Raised when no minimum-norm witness realizes c(T).
    pub review: bool,
    pub notes: Vec<String>,
}

pub fn mc_sufficient_check(t: &Operator, space: &SpaceSpec) -> Result<McSufficientReport> {
    let m = prepare(t, space)?;
    let c = crawford_normed(t, space)?.value;
    let mn = min_norm_of(&m, space);
    let applicable = (c - mn.value).abs() <= 1e-6;
    let mut candidates = vec![mn.witness.clone()];
    if *space == SpaceSpec::L2 {
        // m_T is the unit sphere of the bottom singular space; scan its basis.
        let set = crate::attainment::min_norm_attainment(t);
        for v in set.vectors() {
            candidates.push(real_coords(&v));
        }
    }
    let gap = |x: &Vec<f64>| {
        let (lo, hi) = family_unchecked(x, space).range(&m.apply(x));
        // distance from c to {|f(Tx)|}, which is an interval because the family is convex
        let (a, b) = if lo <= 0.0 && hi >= 0.0 { (0.0, lo.abs().max(hi.abs())) } else { (lo.abs().min(hi.abs()), lo.abs().max(hi.abs())) };
        if c < a {
            a - c
        } else if c > b {
            c - b
        } else {
            0.0
        }
    };
    let (pairing_gap, witness) = candidates
        .iter()
        .map(|x| (gap(x), x.clone()))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    let holds = !applicable || pairing_gap <= 1e-6;
    let mut notes = Vec::new();
    if applicable && !holds {
        notes.push("no minimum-norm witness realizes c(T); flagged for review".into());
    }
    Ok(McSufficientReport {
        crawford: c,
        min_norm: mn.value,
        applicable,
        witness,
        pairing_gap,
        holds,
        review: applicable && !holds,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1(n: usize) -> Operator {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n] = 1.0 / n as f64;
        }
        Operator::real(n, &a).unwrap()
    }

    #[test]
    fn lp_functional_is_unique_and_norming() {
        let space = SpaceSpec::Lp { p: 4.0 };
        let x = space.normalize(&[0.3, -0.8, 0.1]);
        let fam = norming_functionals(&x, &space).unwrap();
        let fs = fam.functionals(&x, &space);
        assert_eq!(fs.len(), 1);
        assert!((fs[0].dual_norm - 1.0).abs() < 1e-10);
        assert!((fs[0].pairing - 1.0).abs() < 1e-10);
        let e1 = norming_functionals(&[1.0, 0.0], &space).unwrap();
        assert_eq!(e1, NormingFamily::Unique { coeffs: vec![1.0, 0.0] });
    }

    #[test]
    fn l1_and_linf_families() {
        let fam = norming_functionals(&[1.0, 0.0, 0.0], &SpaceSpec::L1).unwrap();
        assert_eq!(fam, NormingFamily::Box { coeffs: vec![1.0, 0.0, 0.0], free: vec![1, 2] });
        assert_eq!(fam.range(&[0.0, 2.0, -1.0]), (-3.0, 3.0));
        let fam = norming_functionals(&[1.0, 1.0, 1.0], &SpaceSpec::Linf).unwrap();
        match fam {
            NormingFamily::Hull { generators } => assert_eq!(generators.len(), 3),
            other => panic!("unexpected family {other:?}"),
        }
        assert!(matches!(
            norming_functionals(&[0.5, 0.0], &SpaceSpec::L1),
            Err(Error::NotUnitVector { .. })
        ));
    }

    #[test]
    fn member_with_value_hits_the_target() {
        let fam = NormingFamily::Box { coeffs: vec![1.0, 0.0, 0.0], free: vec![1, 2] };
        let y = [0.5, 2.0, -1.0];
        let f = fam.argmin_abs(&y);
        assert!(dot(&f, &y).abs() < 1e-15);
        let f = fam.argmax_abs(&y);
        assert!((dot(&f, &y) - 3.5).abs() < 1e-15);
    }

    #[test]
    fn example_one_on_l1_and_example_two_on_linf() {
        let t = example1(3);
        let v = numerical_radius_normed(&t, &SpaceSpec::L1).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
        assert_eq!(v.witness, vec![1.0, 0.0, 0.0]);
        assert_eq!(operator_norm_normed(&t, &SpaceSpec::L1).unwrap().value, 1.0);
        let t2 = RealMatrix::of(&t).unwrap();
        let tt: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| t2.get(j, i)).collect()).collect();
        let t2 = RealMatrix::from_rows(&tt).to_operator();
        let v = numerical_radius_normed(&t2, &SpaceSpec::Linf).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
        assert_eq!(v.witness, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn crawford_of_nilpotent_on_l1_is_zero() {
        let t = Operator::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        let c = crawford_normed(&t, &SpaceSpec::L1).unwrap();
        assert_eq!(c.value, 0.0);
        let f = c.functional.unwrap();
        assert!(dot(&f, &RealMatrix::of(&t).unwrap().apply(&c.witness)).abs() < 1e-15);
        for space in [SpaceSpec::L1, SpaceSpec::Linf, SpaceSpec::Lp { p: 3.0 }] {
            let c = crawford_normed(&Operator::identity(3, Field::Real), &space).unwrap();
            assert!((c.value - 1.0).abs() < 1e-9, "{space:?}: {}", c.value);
        }
    }

    #[test]
    fn linf_crawford_matches_a_dense_scan() {
        let t = Operator::from_real_rows(&[&[2.0, 0.5], &[-0.7, 1.5]]).unwrap();
        let c = crawford_normed(&t, &SpaceSpec::Linf).unwrap();
        let m = RealMatrix::of(&t).unwrap();
        let mut best = f64::INFINITY;
        for x in boundary_points(&SpaceSpec::Linf, 2, 20_000) {
            best = best.min(family_unchecked(&x, &SpaceSpec::Linf).min_abs(&m.apply(&x)));
        }
        assert!(c.value <= best + 1e-12);
        assert!(best - c.value < 1e-3, "{} vs {}", c.value, best);
    }

    #[test]
    fn lp_radius_matches_angle_scan() {
        let t = Operator::from_real_rows(&[&[0.3, -1.1], &[0.4, 0.9]]).unwrap();
        for p in [1.5, 3.0, 4.0] {
            let space = SpaceSpec::Lp { p };
            let v = numerical_radius_normed(&t, &space).unwrap().value;
            let m = RealMatrix::of(&t).unwrap();
            let scan = (0..20_000)
                .map(|k| {
                    let a = PI * k as f64 / 20_000.0;
                    let x = space.normalize(&[a.cos(), a.sin()]);
                    lp_pairing(&m, p, &x).abs()
                })
                .fold(0.0, f64::max);
            assert!(v >= scan - 1e-9 && v - scan < 1e-6, "p={p}: {v} vs {scan}");
        }
    }

    #[test]
    fn daugavet_examples() {
        let r = Operator::from_real_rows(&[&[0.5, 0.5], &[0.0, 0.0]]).unwrap();
        let d = daugavet_check(&r, &SpaceSpec::Linf).unwrap();
        assert!(d.holds);
        assert_eq!((d.lhs, d.rhs), (2.0, 2.0));
        let d = daugavet_check(&Operator::identity(2, Field::Real).scaled((-1.0).into()), &SpaceSpec::L1).unwrap();
        assert!(!d.holds);
        assert_eq!(d.lhs, 0.0);
        let d = daugavet_check(&Operator::zero(3, Field::Real), &SpaceSpec::Lp { p: 3.0 }).unwrap();
        assert!(d.holds && (d.lhs - 1.0).abs() < 1e-9);
    }

    #[test]
    fn birkhoff_examples() {
        assert!(birkhoff_orthogonal(&[1.0, 0.0], &[0.0, 1.0], &SpaceSpec::L2).unwrap());
        assert!(!birkhoff_orthogonal(&[1.0, 0.0], &[1.0, 0.0], &SpaceSpec::L1).unwrap());
        assert!(birkhoff_orthogonal(&[1.0, 1.0], &[1.0, -1.0], &SpaceSpec::Linf).unwrap());
        assert!(birkhoff_orthogonal(&[0.0, 0.0], &[1.0, 0.0], &SpaceSpec::L2).is_err());
    }

    #[test]
    fn polygon_counterexamples() {
        for k in [6, 8] {
            let poly = Polygon::regular(k, 0.0).unwrap();
            let (_, report) = polygonal_counterexample(&poly).unwrap();
            assert!(report.certified, "{k}: {report:?}");
            assert!(report.fixed_points.scan_floor >= 0.05, "{k}: {report:?}");
        }
        let square = Polygon::regular(4, 0.25 * PI).unwrap();
        assert_eq!(
            polygonal_counterexample(&square).unwrap_err(),
            Error::PolygonTooSmall { got: 4, min: 6 }
        );
    }

    #[test]
    fn minimum_norm_uses_the_inverse() {
        let t = Operator::real_diagonal(&[3.0, 0.5]);
        for space in [SpaceSpec::L1, SpaceSpec::Linf, SpaceSpec::Lp { p: 4.0 }] {
            let m = minimum_norm_normed(&t, &space).unwrap();
            assert!((m.value - 0.5).abs() < 1e-9, "{space:?}");
        }
        let singular = Operator::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(minimum_norm_normed(&singular, &SpaceSpec::L1).unwrap().value < 1e-12);
    }
}
