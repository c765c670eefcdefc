//! Built-in operators with known attainment behaviour, each with the checks
//! that pin that behaviour down.

use crate::attainment::{certify_mv, Analysis};
use crate::error::{Error, Result};
use crate::linalg::{basis_vector, C64};
use crate::normed::{self, RealMatrix};
use crate::operator::Operator;
use crate::space::{Polygon, SpaceSpec};
use serde::Serialize;

/// Dimensions at which the ℓ₁ / ℓ∞ families are built.
pub const DIMENSIONS: [usize; 3] = [2, 3, 4];
/// Entry scale of the perturbed ℓ₁ family.
pub const PERTURBATION: f64 = 1.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
}

impl Check {
    fn near(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: (value - target).abs() <= tolerance,
            value: Some(value),
            target: Some(target),
            tolerance: Some(tolerance),
        }
    }

    fn at_least(name: &str, value: f64, floor: f64) -> Self {
        Check { name: name.into(), passed: value >= floor, value: Some(value), target: Some(floor), tolerance: None }
    }

    fn flag(name: &str, passed: bool) -> Self {
        Check { name: name.into(), passed, value: None, target: None, tolerance: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GalleryItem {
    pub name: String,
    pub space: serde_json::Value,
    pub operator: serde_json::Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn item(name: String, space: &SpaceSpec, t: &Operator, checks: Vec<Check>) -> GalleryItem {
    GalleryItem {
        passed: checks.iter().all(|c| c.passed),
        space: space.to_json(t.n()),
        operator: crate::io::operator_to_json(t),
        name,
        checks,
    }
}

/// T(x, y, z, w) = ((x − y − z)/√3, (x + y)/√3, (x + z)/√3, 0) on ℓ₂(ℝ⁴).
pub fn l2_r4_operator() -> Operator {
    let s = 1.0 / 3f64.sqrt();
    Operator::from_real_rows(&[
        &[s, -s, -s, 0.0],
        &[s, s, 0.0, 0.0],
        &[s, 0.0, s, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
    ])
    .expect("finite entries")
}

/// T(x, y) = ((x + y)/2, 0) on ℓ∞(ℝ²).
pub fn linf_remark_operator() -> Operator {
    Operator::from_real_rows(&[&[0.5, 0.5], &[0.0, 0.0]]).expect("finite entries")
}

/// T(x) = (x₁/n, …, x₁/n) on ℓ₁(ℝⁿ), with every entry multiplied by `scale`.
pub fn example1(n: usize, scale: f64) -> Operator {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n] = scale / n as f64;
    }
    Operator::real(n, &a).expect("finite entries")
}

/// T(x) = ((x₁ + … + xₙ)/n, 0, …, 0) on ℓ∞(ℝⁿ).
pub fn example2(n: usize) -> Operator {
    let mut a = vec![0.0; n * n];
    for j in 0..n {
        a[j] = 1.0 / n as f64;
    }
    Operator::real(n, &a).expect("finite entries")
}

/// Eigenvalues of a real 2×2 matrix from its characteristic polynomial.
pub fn eigenvalues_2x2(t: &Operator) -> [C64; 2] {
    let (a, b, c, d) = (t.entry(0, 0), t.entry(0, 1), t.entry(1, 0), t.entry(1, 1));
    let tr = a + d;
    let disc = (tr * tr - 4.0 * (a * d - b * c)).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

pub fn item_names() -> Vec<String> {
    let mut names = vec!["l2-r4-remark".to_string(), "linf-daugavet".to_string()];
    for n in DIMENSIONS {
        names.push(format!("example1-l1-n{n}"));
    }
    for n in DIMENSIONS {
        names.push(format!("example2-linf-n{n}"));
    }
    names.push("polygon-hexagon".into());
    names.push("polygon-octagon".into());
    names
}

fn l2_r4() -> Result<GalleryItem> {
    let t = l2_r4_operator();
    let an = Analysis::new(&t);
    let e1 = basis_vector(4, 0);
    let cert = certify_mv(&an, &e1)?;
    let worst = cert.residuals.values().cloned().fold(0.0, f64::max);
    let checks = vec![
        Check::near("norm", an.norm, 1.0, 1e-9),
        Check::near("radius", an.v(), 1.0 / 3f64.sqrt(), 1e-6),
        Check::flag("e1_in_mv", cert.valid),
        Check::near("e1_max_residual", worst, 0.0, 1e-7),
        Check::at_least("norm_minus_radius", an.norm - an.v(), 0.4),
    ];
    Ok(item("l2-r4-remark".into(), &SpaceSpec::L2, &t, checks))
}

fn linf_daugavet() -> Result<GalleryItem> {
    let t = linf_remark_operator();
    let d = normed::daugavet_check(&t, &SpaceSpec::Linf)?;
    let mut eig = eigenvalues_2x2(&t);
    eig.sort_by(|a, b| b.re.total_cmp(&a.re));
    let spectrum_gap = (eig[0] - 0.5).norm().max(eig[1].norm());
    let closest_unimodular = eig.iter().map(|z| (z.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min);
    let checks = vec![
        Check::flag("daugavet_holds", d.holds),
        Check::near("lhs", d.lhs, 2.0, 0.0),
        Check::near("rhs", d.rhs, 2.0, 0.0),
        Check::near("spectrum_half_zero", spectrum_gap, 0.0, 1e-10),
        Check::at_least("distance_to_unimodular_eigenvalue", closest_unimodular, 0.1),
    ];
    Ok(item("linf-daugavet".into(), &SpaceSpec::Linf, &t, checks))
}

/// ‖T‖ = v(T) = 1, the designated witness in M_T ∩ V_T, and no x with Tx = ±x.
fn mv_without_fixed_vector(name: String, t: &Operator, space: &SpaceSpec, witness: Vec<f64>) -> Result<GalleryItem> {
    let norm = normed::operator_norm_normed(t, space)?.value;
    let radius = normed::numerical_radius_normed(t, space)?.value;
    let m = RealMatrix::of(t)?;
    let tx = m.apply(&witness);
    let pairing = normed::norming_functionals(&witness, space)?.max_abs(&tx);
    let image = space.norm(&tx);
    let fixed = normed::fixed_point_floor(t, space)?;
    let checks = vec![
        Check::near("norm", norm, 1.0, 1e-6),
        Check::near("radius", radius, 1.0, 1e-6),
        Check::near("witness_norm_gap", image - norm, 0.0, 1e-9),
        Check::near("witness_radius_gap", pairing - radius, 0.0, 1e-9),
        Check::at_least("fixed_point_scan_floor", fixed.scan_floor, 0.1),
        Check::at_least("fixed_point_exact_floor", fixed.exact_floor, 0.1),
    ];
    Ok(item(name, space, t, checks))
}

fn polygon(name: &str, vertices: usize) -> Result<GalleryItem> {
    let poly = Polygon::regular(vertices, 0.0)?;
    let space = SpaceSpec::Polygon(poly.clone());
    let (t, r) = normed::polygonal_counterexample(&poly)?;
    let checks = vec![
        Check::near("norm", r.norm, 1.0, 1e-6),
        Check::near("radius", r.radius, 1.0, 1e-6),
        Check::flag("v2_in_mv", r.v2_in_mv),
        Check::at_least("fixed_point_scan_floor", r.fixed_points.scan_floor, 0.05),
        Check::at_least("fixed_point_exact_floor", r.fixed_points.exact_floor, 0.05),
    ];
    Ok(item(name.into(), &space, &t, checks))
}

/// Runs one item. With `perturb`, the ℓ₁ family uses entries 1.1/n instead
/// of 1/n; its equality checks are then expected to fail.
pub fn run_item(name: &str, perturb: bool) -> Result<GalleryItem> {
    if let Some(n) = name.strip_prefix("example1-l1-n").and_then(|s| s.parse::<usize>().ok()) {
        let scale = if perturb { PERTURBATION } else { 1.0 };
        let label = if perturb { format!("{name}-perturbed") } else { name.to_string() };
        return mv_without_fixed_vector(label, &example1(n, scale), &SpaceSpec::L1, normed_basis(n));
    }
    if let Some(n) = name.strip_prefix("example2-linf-n").and_then(|s| s.parse::<usize>().ok()) {
        return mv_without_fixed_vector(name.into(), &example2(n), &SpaceSpec::Linf, vec![1.0; n]);
    }
    match name {
        "l2-r4-remark" => l2_r4(),
        "linf-daugavet" => linf_daugavet(),
        "polygon-hexagon" => polygon(name, 6),
        "polygon-octagon" => polygon(name, 8),
        other => Err(Error::PreconditionFailed(format!("unknown gallery item {other:?}"))),
    }
}

fn normed_basis(n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[0] = 1.0;
    e
}

pub fn run_gallery(perturb: bool) -> Result<Vec<GalleryItem>> {
    item_names().iter().map(|n| run_item(n, perturb)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_item_passes() {
        for it in run_gallery(false).unwrap() {
            assert!(it.passed, "{}: {:?}", it.name, it.checks);
        }
    }

    #[test]
    fn perturbed_example_fails_only_its_equalities() {
        let it = run_item("example1-l1-n3", true).unwrap();
        assert!(!it.passed);
        for c in &it.checks {
            match c.name.as_str() {
                "norm" | "radius" => assert!(!c.passed, "{c:?}"),
                _ => assert!(c.passed, "{c:?}"),
            }
        }
    }
}
