mod common;

use common::*;
use numrange::attainment::{self, Analysis, Quantity, SetKind, Verifier};
use numrange::hilbert;
use numrange::linalg::{self, basis_vector, C64};
use numrange::oracle;
use numrange::{Error, Field, Operator, SpaceSpec};

fn diag12() -> Operator {
    Operator::real_diagonal(&[1.0, 2.0])
}

#[test]
fn nilpotent_sweep_is_a_disc_of_radius_one_half() {
    let t = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let sweep = hilbert::fov_sweep(&t, 720).unwrap();
    assert_eq!(sweep.len(), 720);
    assert!(sweep.support_max.iter().all(|h| (h - 0.5).abs() <= 1e-9));
    assert!(sweep.boundary.iter().all(|z| (z.norm() - 0.5).abs() <= 1e-9));
}

#[test]
fn diagonal_summary_and_sets() {
    let t = diag12();
    let s = hilbert::range_summary(&t, &Default::default());
    assert!((s.v - 2.0).abs() < 1e-12 && (s.c - 1.0).abs() < 1e-12 && !s.contains_zero);
    let e1 = basis_vector(2, 0);
    let e2 = basis_vector(2, 1);
    let an = Analysis::new(&t);
    assert!(attainment::norm_attainment_for(&an).contains(&e2, 1e-9));
    assert!(attainment::radius_attainment_for(&an).contains(&e2, 1e-9));
    assert!(attainment::min_norm_attainment_for(&an).contains(&e1, 1e-9));
    assert!(attainment::crawford_attainment_for(&an).contains(&e1, 1e-9));
    assert!(!attainment::radius_attainment_for(&an).contains(&e1, 1e-3));
}

#[test]
fn zero_operator_sets_are_the_whole_sphere() {
    let an = Analysis::new(&Operator::zero(3, Field::Complex));
    for set in [
        attainment::norm_attainment_for(&an),
        attainment::min_norm_attainment_for(&an),
        attainment::radius_attainment_for(&an),
        attainment::crawford_attainment_for(&an),
    ] {
        assert_eq!(set.kind, SetKind::WholeSphere, "{:?}", set.quantity);
        assert_eq!(set.value, 0.0);
    }
}

#[test]
fn oracle_maximizers_pass_every_radius_verifier() {
    let mut r = rng(31);
    for k in 0..6 {
        let field = field_of(k);
        let t = random_operator(&mut r, 3, field);
        let an = Analysis::new(&t);
        let cloud = oracle::sample_sphere(&SpaceSpec::L2, field, 3, 100_000, k as u64);
        let est = oracle::oracle_estimate(&t, &SpaceSpec::L2, &cloud, Quantity::Radius);
        let x = linalg::normalize(&est.witness);
        assert!((est.value - an.v()).abs() <= 1e-6, "op {k}: {} vs {}", est.value, an.v());
        let which = match field {
            Field::Real => Verifier::VtReal,
            Field::Complex => Verifier::VtComplex,
        };
        let v = attainment::verify_default(&an, &x, which).unwrap();
        assert!(v.valid, "op {k} {which:?}: {:?}", v.residuals);
        if field == Field::Complex {
            let alt = attainment::verify_default(&an, &x, Verifier::VtAlt).unwrap();
            assert!(alt.residuals["phase_adjusted_symmetry"] <= 1e-6, "op {k}: {:?}", alt.residuals);
            let phase = t.quadratic_form(&x).arg();
            let turned = t.scaled(C64::from_polar(1.0, -phase));
            let alt = attainment::verify_default(&Analysis::new(&turned), &x, Verifier::VtAlt).unwrap();
            assert!(alt.valid, "op {k}: {:?}", alt.residuals);
        }
    }
}

#[test]
fn crawford_alternative_rejects_a_non_minimizer() {
    let t = Operator::complex(
        2,
        vec![C64::new(1.0, 0.0), C64::new(0.1, 0.0), C64::new(0.0, 0.0), C64::new(2.0, 0.0)],
    )
    .unwrap();
    let an = Analysis::new(&t);
    let x = linalg::normalize(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
    let v = attainment::verify_default(&an, &x, Verifier::CtAlt).unwrap();
    assert!(!v.valid);
    assert!(v.residuals.values().any(|&r| r > 1e-3), "{:?}", v.residuals);
    let c = attainment::crawford_attainment_for(&an).vectors()[0].clone();
    assert!(attainment::verify_default(&an, &c, Verifier::CtAlt).unwrap().valid);
}

#[test]
fn real_verifiers_reject_complex_operators() {
    let t = Operator::complex(2, vec![C64::new(0.0, 1.0); 4]).unwrap();
    let x = basis_vector(2, 0);
    let an = Analysis::new(&t);
    assert!(matches!(attainment::verify_default(&an, &x, Verifier::CtReal), Err(Error::FieldMismatch(_))));
    assert!(matches!(attainment::verify_default(&an, &x, Verifier::VtReal), Err(Error::FieldMismatch(_))));
}

#[test]
fn restriction_of_a_rank_two_eigen_operator() {
    let mut r = rng(32);
    for _ in 0..10 {
        let q = random_unitary(&mut r, 4, Field::Real);
        let col = |j: usize| -> Vec<f64> { q.col(j).iter().map(|z| z.re).collect() };
        let u0 = col(0);
        let scaled: Vec<f64> = u0.iter().map(|a| 2.0 * a).collect();
        let small: Vec<f64> = col(1).iter().map(|a| 0.7 * a).collect();
        let t = real_rank_one(&scaled, &u0).add(&real_rank_one(&small, &col(2)));
        let d = attainment::decide_mv_intersection(&t).unwrap();
        assert!(d.nonempty && d.branch.as_deref() == Some("eigen"), "{d:?}");
        let rep = attainment::restriction_consistency(&t).unwrap();
        assert!(!rep.degenerate && rep.y_dim == 2 && rep.equalities_hold, "{rep:?}");
    }
}

#[test]
fn scaled_isometry_meets_every_intersection() {
    let t = Operator::from_real_rows(&[&[0.0, -2.0], &[2.0, 0.0]]).unwrap();
    for d in [
        attainment::decide_mv_intersection(&t).unwrap(),
        attainment::decide_min_norm_radius(&t).unwrap(),
        attainment::decide_norm_crawford(&t).unwrap(),
        attainment::decide_min_norm_crawford(&t).unwrap(),
    ] {
        assert!(d.nonempty && d.consistent, "{d:?}");
    }
    assert!(!attainment::decide_norm_crawford(&diag12()).unwrap().nonempty);
}

#[test]
fn rank_corollaries_on_constructed_cases() {
    let e = |i: usize| -> Vec<f64> { (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect() };
    let eigen = real_rank_one(&e(0), &e(0));
    let rep = attainment::rank1_corollary(&eigen).unwrap();
    assert!(rep.nonempty && rep.eigen && rep.agrees && rep.radius_equals_norm == Some(true));
    let shift = real_rank_one(&e(1), &e(0));
    let rep = attainment::rank1_corollary(&shift).unwrap();
    assert!(!rep.nonempty && !rep.eigen && rep.agrees);

    let rotation = Operator::from_real_rows(&[&[0.0, -1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]).unwrap();
    let rep = attainment::rank2_corollary(&rotation).unwrap();
    assert!(rep.nonempty && !rep.eigen && rep.partial_isometry == Some(true) && rep.agrees);
    let moved = real_rank_one(&e(1), &e(0)).add(&real_rank_one(&e(2), &e(1)));
    let rep = attainment::rank2_corollary(&moved).unwrap();
    assert!(!rep.nonempty && rep.partial_isometry == Some(false) && rep.agrees);
    assert!(matches!(attainment::rank2_corollary(&eigen), Err(Error::PreconditionFailed(_))));
}
