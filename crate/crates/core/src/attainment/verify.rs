//! Pointwise verifiers for membership in V_T and c_T.

use super::{compressed_interval, Analysis};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, C64};
use crate::operator::{orthocomplement, Field, Operator, Subspace};
use crate::sampling;
use serde::Serialize;
use std::collections::BTreeMap;

/// Outcome of a verifier or decider check.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Verdict {
    pub valid: bool,
    /// Which alternative of the characterization holds, when one does.
    pub branch: Option<String>,
    pub residuals: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.to_string(), value);
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Radius,
    Crawford,
}

/// ‖Re(T)x − ⟨Re(T)x, x⟩x‖.
fn eigen_residual(re: &Operator, x: &[C64]) -> f64 {
    let rx = re.apply(x);
    let lambda = linalg::inner(&rx, x);
    linalg::norm(&linalg::axpy(-lambda, x, &rx))
}

/// Extremes of |⟨Tz, z⟩| over the unit sphere of x^⊥ (real field), exact
/// through the compression of Re(T) to x^⊥.
fn perp_abs_range(an: &Analysis, x: &[C64]) -> Option<(f64, f64)> {
    let line = Subspace::span(an.n(), &[x.to_vec()])?;
    let perp = orthocomplement(&line, an.n()).ok()?;
    let (lo, _, hi, _) = compressed_interval(an.cart.re.mat(), &perp);
    let min_abs = if lo <= 0.0 && hi >= 0.0 { 0.0 } else { lo.abs().min(hi.abs()) };
    Some((min_abs, lo.abs().max(hi.abs())))
}

fn real_verifier(an: &Analysis, x: &[C64], zs: &[Vec<C64>], target: Target) -> Result<Verdict> {
    an.require_field(Field::Real, "the real characterization needs a real operator")?;
    an.check_vector(x)?;
    let tol = &an.opts.tol;
    let scale = an.scale();
    let q = an.t.quadratic_form(x).norm();
    let eig = eigen_residual(&an.cart.re, x);
    let mut worst: f64 = 0.0;
    for z in zs {
        let w = an.t.quadratic_form(z).norm();
        let gap = match target {
            Target::Crawford => q - w,
            Target::Radius => w - q,
        };
        worst = worst.max(gap);
    }
    if let Some((min_abs, max_abs)) = perp_abs_range(an, x) {
        worst = worst.max(match target {
            Target::Crawford => q - min_abs,
            Target::Radius => max_abs - q,
        });
    }
    let mut v = Verdict::default();
    if target == Target::Crawford {
        v.residual("zero", q / scale);
    }
    v.residual("eigen", eig / scale);
    v.residual("inequality", worst.max(0.0) / scale);
    let eigen_ok = eig <= tol.eigen * scale;
    let ineq_ok = worst <= tol.alt * scale;
    match target {
        Target::Crawford => {
            if q <= tol.zero * scale {
                v.valid = true;
                v.branch = Some("zero".into());
            } else if eigen_ok && ineq_ok {
                v.valid = true;
                v.branch = Some("eigenvector".into());
            }
        }
        Target::Radius => {
            if eigen_ok && ineq_ok {
                v.valid = true;
                v.branch = Some("eigenvector".into());
            }
        }
    }
    Ok(v)
}

/// A(x)x − κ²x with A(x) = ⟨Re(T)x,x⟩Re(T) + ⟨Im(T)x,x⟩Im(T).
fn quadratic_residual(an: &Analysis, x: &[C64], kappa: f64) -> (f64, f64) {
    let a = linalg::inner(&an.cart.re.apply(x), x).re;
    let b = linalg::inner(&an.cart.im.apply(x), x).re;
    let rx = an.cart.re.apply(x);
    let ix = an.cart.im.apply(x);
    let ax: Vec<C64> = rx.iter().zip(&ix).map(|(r, i)| r * a + i * b).collect();
    let rayleigh = linalg::inner(&ax, x).re;
    let res = linalg::norm(&linalg::axpy(C64::new(-kappa * kappa, 0.0), x, &ax));
    (res, rayleigh - kappa * kappa)
}

fn complex_verifier(an: &Analysis, x: &[C64], target: Target) -> Result<Verdict> {
    an.require_field(Field::Complex, "the complex characterization needs a complex operator")?;
    an.check_vector(x)?;
    let tol = &an.opts.tol;
    let scale = an.scale();
    let q = an.t.quadratic_form(x).norm();
    let kappa = match target {
        Target::Crawford => an.c(),
        Target::Radius => an.v(),
    };
    let (res, gap) = quadratic_residual(an, x, kappa);
    let mut v = Verdict::default();
    if target == Target::Crawford {
        v.residual("zero", q / scale);
    }
    v.residual("quadratic", res / (scale * scale));
    v.residual("eigenvalue_gap", gap.abs() / (scale * scale));
    if target == Target::Crawford && q <= tol.zero * scale {
        v.valid = true;
        v.branch = Some("zero".into());
    } else if res <= tol.quadratic * scale * scale {
        v.valid = true;
        v.branch = Some("eigenvector".into());
    }
    Ok(v)
}

pub fn verify_ct_real(t: &Operator, x: &[C64], z_samples: &[Vec<C64>]) -> Result<Verdict> {
    verify_ct_real_for(&Analysis::new(t), x, z_samples)
}

pub fn verify_ct_real_for(an: &Analysis, x: &[C64], z_samples: &[Vec<C64>]) -> Result<Verdict> {
    real_verifier(an, x, z_samples, Target::Crawford)
}

pub fn verify_vt_real(t: &Operator, x: &[C64], z_samples: &[Vec<C64>]) -> Result<Verdict> {
    verify_vt_real_for(&Analysis::new(t), x, z_samples)
}

pub fn verify_vt_real_for(an: &Analysis, x: &[C64], z_samples: &[Vec<C64>]) -> Result<Verdict> {
    real_verifier(an, x, z_samples, Target::Radius)
}

pub fn verify_ct_complex(t: &Operator, x: &[C64]) -> Result<Verdict> {
    verify_ct_complex_for(&Analysis::new(t), x)
}

pub fn verify_ct_complex_for(an: &Analysis, x: &[C64]) -> Result<Verdict> {
    complex_verifier(an, x, Target::Crawford)
}

pub fn verify_vt_complex(t: &Operator, x: &[C64]) -> Result<Verdict> {
    verify_vt_complex_for(&Analysis::new(t), x)
}

pub fn verify_vt_complex_for(an: &Analysis, x: &[C64]) -> Result<Verdict> {
    complex_verifier(an, x, Target::Radius)
}

/// The conjugate-symmetry form of the complex characterizations.
///
/// For each sampled y ∈ x^⊥ ∩ S, with p = ⟨Tx,y⟩ and q = ⟨Ty,x⟩, alternative
/// (i) asks q = conj(p) and alternative (ii) asks q = −conj(p); the chosen
/// alternative must then satisfy the two-variable inequality over the (a, b)
/// grid. The residual `phase_adjusted_symmetry` records
/// |q + conj(p)·e^{2iω}| with ω = arg⟨Tx,x⟩, the first-order condition that
/// holds at every extremal x regardless of the phase of ⟨Tx,x⟩.
fn alt_verifier(an: &Analysis, x: &[C64], ys: &[Vec<C64>], ab: &[(C64, C64)], target: Target) -> Result<Verdict> {
    an.require_field(Field::Complex, "the conjugate-symmetry characterization needs a complex operator")?;
    an.check_vector(x)?;
    let tol = &an.opts.tol;
    let scale = an.scale();
    let mut v = Verdict::default();
    if target == Target::Crawford {
        if an.c() <= tol.containment * scale {
            return Err(Error::CrawfordZero);
        }
        v.notes.push("positivity hypothesis read as c(T) > 0".into());
    }
    let z = an.t.quadratic_form(x);
    let zabs = z.norm();
    let rot = if zabs > 0.0 { C64::from_polar(1.0, 2.0 * z.arg()) } else { C64::new(1.0, 0.0) };
    let tx = an.t.apply(x);
    let mut worst_sym: f64 = 0.0;
    let mut worst_ineq: f64 = 0.0;
    let mut worst_phase: f64 = 0.0;
    let mut failures = 0usize;
    let mut used = [false, false];
    for y in ys {
        let ty = an.t.apply(y);
        let p = linalg::inner(&tx, y);
        let q = linalg::inner(&ty, x);
        let w = linalg::inner(&ty, y);
        worst_phase = worst_phase.max((q + p.conj() * rot).norm());
        let r = [(q - p.conj()).norm(), (q + p.conj()).norm()];
        worst_sym = worst_sym.max(r[0].min(r[1]));
        let mut gaps: [Option<f64>; 2] = [None, None];
        for (k, &rk) in r.iter().enumerate() {
            if rk > tol.alt * scale {
                continue;
            }
            let mut gap: f64 = 0.0;
            for &(a, b) in ab {
                let cross = a * b.conj() * p;
                let mixed = if k == 0 { C64::new(2.0 * cross.re, 0.0) } else { C64::new(0.0, 2.0 * cross.im) };
                let f = (z * a.norm_sqr() + w * b.norm_sqr() + mixed).norm();
                gap = gap.max(match target {
                    Target::Crawford => zabs - f,
                    Target::Radius => f - zabs,
                });
            }
            gaps[k] = Some(gap);
        }
        let mut passed = false;
        let mut least = f64::INFINITY;
        for (k, g) in gaps.iter().enumerate() {
            if let Some(g) = *g {
                least = least.min(g);
                if g <= tol.alt * scale {
                    used[k] = true;
                    passed = true;
                }
            }
        }
        if least.is_finite() {
            worst_ineq = worst_ineq.max(least.max(0.0));
        }
        if !passed {
            failures += 1;
        }
    }
    v.residual("conjugate_symmetry", worst_sym / scale);
    v.residual("inequality", worst_ineq / scale);
    v.residual("phase_adjusted_symmetry", worst_phase / scale);
    v.residual("failed_samples", failures as f64);
    v.valid = failures == 0;
    v.branch = match used {
        [true, true] => Some("i+ii".into()),
        [true, false] => Some("i".into()),
        [false, true] => Some("ii".into()),
        [false, false] => None,
    };
    if !v.valid && worst_phase <= tol.alt * scale {
        v.notes.push(
            "first-order condition holds after rotating by arg<Tx,x>; the unrotated alternatives do not".into(),
        );
    }
    Ok(v)
}

pub fn verify_ct_alt(t: &Operator, x: &[C64], y_samples: &[Vec<C64>], ab_samples: &[(C64, C64)]) -> Result<Verdict> {
    verify_ct_alt_for(&Analysis::new(t), x, y_samples, ab_samples)
}

pub fn verify_ct_alt_for(an: &Analysis, x: &[C64], ys: &[Vec<C64>], ab: &[(C64, C64)]) -> Result<Verdict> {
    alt_verifier(an, x, ys, ab, Target::Crawford)
}

pub fn verify_vt_alt(t: &Operator, x: &[C64], y_samples: &[Vec<C64>], ab_samples: &[(C64, C64)]) -> Result<Verdict> {
    verify_vt_alt_for(&Analysis::new(t), x, y_samples, ab_samples)
}

pub fn verify_vt_alt_for(an: &Analysis, x: &[C64], ys: &[Vec<C64>], ab: &[(C64, C64)]) -> Result<Verdict> {
    alt_verifier(an, x, ys, ab, Target::Radius)
}

/// Default-grid convenience wrappers.
pub fn verify_default(an: &Analysis, x: &[C64], which: Verifier) -> Result<Verdict> {
    let field = an.field();
    let zs = sampling::default_perp_samples(x, field);
    match which {
        Verifier::CtReal => verify_ct_real_for(an, x, &zs),
        Verifier::CtComplex => verify_ct_complex_for(an, x),
        Verifier::CtAlt => verify_ct_alt_for(an, x, &zs, &sampling::ab_grid()),
        Verifier::VtReal => verify_vt_real_for(an, x, &zs),
        Verifier::VtComplex => verify_vt_complex_for(an, x),
        Verifier::VtAlt => verify_vt_alt_for(an, x, &zs, &sampling::ab_grid()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verifier {
    CtReal,
    CtComplex,
    CtAlt,
    VtReal,
    VtComplex,
    VtAlt,
}

/// Matrix of A(x) = ⟨Re(T)x,x⟩Re(T) + ⟨Im(T)x,x⟩Im(T).
pub fn combined_form(an: &Analysis, x: &[C64]) -> Mat {
    let a = linalg::inner(&an.cart.re.apply(x), x).re;
    let b = linalg::inner(&an.cart.im.apply(x), x).re;
    an.cart.re.mat().scale(C64::new(a, 0.0)).add(&an.cart.im.mat().scale(C64::new(b, 0.0)))
}
