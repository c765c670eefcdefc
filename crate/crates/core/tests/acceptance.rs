//! Acceptance criteria 1 to 8. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

mod common;

use common::*;
use numrange::attainment::{self, Analysis, Verifier};
use numrange::gallery;
use numrange::hilbert;
use numrange::linalg::{basis_vector, C64};
use numrange::normed;
use numrange::oracle;
use numrange::{Field, Operator, SpaceSpec};
use rand::Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let t = gallery::l2_r4_operator();
    let an = Analysis::new(&t);
    let e1 = basis_vector(4, 0);
    let cert = match attainment::certify_mv(&an, &e1) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("certify_mv failed: {e}")),
    };
    let elapsed = start.elapsed();
    let worst = cert.residuals.values().cloned().fold(0.0, f64::max);
    let norm_ok = (an.norm - 1.0).abs() <= 1e-9;
    let radius_ok = (an.v() - 1.0 / 3f64.sqrt()).abs() <= 1e-6;
    let fast = elapsed < Duration::from_secs(1);
    outcome(
        norm_ok && radius_ok && cert.valid && worst <= 1e-7 && fast,
        format!(
            "norm={:.12} v={:.9} e1 valid={} max residual={worst:.2e} time={elapsed:?}",
            an.norm,
            an.v(),
            cert.valid
        ),
    )
}

fn criterion_2() -> Outcome {
    let t = gallery::linf_remark_operator();
    let d = match normed::daugavet_check(&t, &SpaceSpec::Linf) {
        Ok(d) => d,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut eig = gallery::eigenvalues_2x2(&t);
    eig.sort_by(|a, b| b.re.total_cmp(&a.re));
    let spectrum_ok = (eig[0] - 0.5).norm() <= 1e-10 && eig[1].norm() <= 1e-10;
    let no_unimodular = eig.iter().all(|z| (z.norm() - 1.0).abs() > 1e-10);
    outcome(
        d.holds && d.lhs == 2.0 && d.rhs == 2.0 && spectrum_ok && no_unimodular,
        format!("lhs={} rhs={} spectrum=({}, {})", d.lhs, d.rhs, eig[0], eig[1]),
    )
}

fn gallery_outcome(names: &[&str]) -> Outcome {
    let mut passed = true;
    let mut detail = Vec::new();
    for name in names {
        match gallery::run_item(name, false) {
            Ok(item) => {
                passed &= item.passed;
                let failing: Vec<&str> = item.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                let floors: Vec<String> = item
                    .checks
                    .iter()
                    .filter(|c| c.name.contains("floor"))
                    .map(|c| format!("{:.4}", c.value.unwrap_or(f64::NAN)))
                    .collect();
                detail.push(if failing.is_empty() {
                    format!("{name} ok (floors {})", floors.join("/"))
                } else {
                    format!("{name} failing {failing:?}")
                });
            }
            Err(e) => {
                passed = false;
                detail.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(passed, detail.join("; "))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut r = rng(5);
    let mut worst_v: f64 = 0.0;
    let mut worst_c: f64 = 0.0;
    for k in 0..200 {
        let n = 2 + k % 3;
        let field = field_of(k / 3);
        let t = random_operator(&mut r, n, field);
        let range = hilbert::range_summary(&t, &Default::default());
        let cloud = oracle::sample_sphere(&SpaceSpec::L2, field, n, 100_000, 1000 + k as u64);
        let v_hat = oracle::oracle_radius(&t, &SpaceSpec::L2, &cloud);
        let c_hat = oracle::oracle_crawford(&t, &SpaceSpec::L2, &cloud);
        worst_v = worst_v.max((range.v - v_hat).abs());
        worst_c = worst_c.max((range.c - c_hat).abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst_v <= 1e-3 && worst_c <= 1e-3 && elapsed < Duration::from_secs(120),
        format!("max |v-v̂|={worst_v:.2e} max |c-ĉ|={worst_c:.2e} time={elapsed:.1?}"),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut witnesses = 0;
    let mut witness_failures = Vec::new();
    let mut negatives = 0;
    let mut negative_failures = Vec::new();
    for k in 0..200 {
        let n = 2 + k % 3;
        let field = field_of(k / 3);
        let t = random_operator(&mut r, n, field);
        let an = Analysis::new(&t);
        let (vt, ct) = match field {
            Field::Real => (Verifier::VtReal, Verifier::CtReal),
            Field::Complex => (Verifier::VtComplex, Verifier::CtComplex),
        };
        for (set, which) in [(attainment::radius_attainment_for(&an), vt), (attainment::crawford_attainment_for(&an), ct)] {
            for x in set.vectors() {
                witnesses += 1;
                match attainment::verify_default(&an, &x, which) {
                    Ok(v) if v.valid => {}
                    Ok(v) => witness_failures.push(format!("op {k} {which:?}: {:?}", v.residuals)),
                    Err(e) => witness_failures.push(format!("op {k} {which:?}: {e}")),
                }
            }
        }
        let x = random_unit(&mut r, n, field);
        let value = t.quadratic_form(&x).norm();
        let gap = 1e-3 * an.norm.max(1e-12);
        if value < an.v() - gap {
            negatives += 1;
            match attainment::verify_default(&an, &x, vt) {
                Ok(v) if !v.valid => {}
                other => negative_failures.push(format!("op {k} {vt:?}: {:?}", other.map(|v| v.residuals))),
            }
        }
        if value > an.c() + gap {
            negatives += 1;
            match attainment::verify_default(&an, &x, ct) {
                Ok(v) if !v.valid => {}
                other => negative_failures.push(format!("op {k} {ct:?}: {:?}", other.map(|v| v.residuals))),
            }
        }
    }
    let mut detail = format!(
        "{witnesses} witnesses, {} rejected; {negatives} non-extremal checks, {} accepted",
        witness_failures.len(),
        negative_failures.len()
    );
    for f in witness_failures.iter().chain(&negative_failures).take(3) {
        detail.push_str("; ");
        detail.push_str(f);
    }
    outcome(witness_failures.is_empty() && negative_failures.is_empty() && negatives >= 200, detail)
}

fn rank_two_case(r: &mut rand_chacha::ChaCha8Rng, k: usize) -> Operator {
    let n = 3 + k % 2;
    let q = random_unitary(r, n, Field::Real);
    let u: Vec<Vec<C64>> = (0..n).map(|j| q.col(j)).collect();
    let outer = |a: &[C64], b: &[C64], s: f64| {
        let ar: Vec<f64> = a.iter().map(|z| z.re * s).collect();
        let br: Vec<f64> = b.iter().map(|z| z.re).collect();
        real_rank_one(&ar, &br)
    };
    let scale = r.gen_range(0.5..3.0);
    match k % 5 {
        // Rotation of the plane span{u₀, u₁}: partial isometry with equal spaces.
        0 => {
            let th: f64 = r.gen_range(0.1..3.0);
            let (c, s) = (th.cos() * scale, th.sin() * scale);
            outer(&u[0], &u[0], c).add(&outer(&u[1], &u[0], s)).add(&outer(&u[0], &u[1], -s)).add(&outer(&u[1], &u[1], c))
        }
        // Partial isometry with different initial and final spaces.
        1 => outer(&u[2], &u[0], scale).add(&outer(&u[1], &u[1], scale)),
        // Eigen branch: ‖T‖ is an eigenvalue.
        2 => {
            let sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
            let small = r.gen_range(0.05..0.9);
            outer(&u[0], &u[0], sign * scale).add(&outer(&u[2], &u[1], small * scale))
        }
        // Equal singular values but not a rotation of one plane.
        3 => outer(&u[0], &u[1], scale).add(&outer(&u[1], &u[2], scale)),
        _ => {
            let a = gaussian_real(r, n);
            let b = gaussian_real(r, n);
            let c = gaussian_real(r, n);
            let d = gaussian_real(r, n);
            real_rank_one(&a, &b).add(&real_rank_one(&c, &d))
        }
    }
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let mut failures: Vec<String> = Vec::new();
    let mut counts = [0usize; 4];

    for k in 0..60 {
        let n = 2 + k % 3;
        let field = field_of(k / 3);
        let contraction = r.gen_range(0.2..0.95);
        let t = radius_equals_norm(&mut r, n, field, contraction);
        counts[0] += 1;
        match normed::nonempty_check(&t, &SpaceSpec::L2) {
            Ok(rep) if rep.applicable && rep.holds => {}
            Ok(rep) => failures.push(format!("nonempty op {k}: applicable={} gap={:.2e}", rep.applicable, rep.worst_gap)),
            Err(e) => failures.push(format!("nonempty op {k}: {e}")),
        }
    }

    let mut eigen_cases = 0;
    for k in 0..100 {
        let n = 2 + k % 3;
        let u = gaussian_real(&mut r, n);
        let w = if k % 2 == 0 {
            eigen_cases += 1;
            let s = r.gen_range(-2.0..2.0);
            u.iter().map(|x| x * s).collect()
        } else {
            gaussian_real(&mut r, n)
        };
        let t = real_rank_one(&u, &w);
        counts[1] += 1;
        match attainment::rank1_corollary(&t) {
            Ok(rep) if rep.agrees => {}
            Ok(rep) => failures.push(format!("rank1 op {k}: {rep:?}")),
            Err(e) => failures.push(format!("rank1 op {k}: {e}")),
        }
    }

    for k in 0..60 {
        let n = 2 + k % 3;
        let field = Field::Real;
        let t = if k % 4 == 3 {
            random_operator(&mut r, n, field)
        } else {
            let contraction = r.gen_range(0.2..1.0);
            radius_equals_norm(&mut r, n, field, contraction)
        };
        let an = Analysis::new(&t);
        let d = match attainment::decide_mv_for(&an) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("general op {k}: {e}"));
                continue;
            }
        };
        if !d.nonempty {
            continue;
        }
        counts[2] += 1;
        match attainment::restriction_consistency_for(&an) {
            Ok(rep) if !rep.degenerate && rep.equalities_hold => {}
            Ok(rep) => failures.push(format!("general op {k}: {:?}", rep.residuals)),
            Err(e) => failures.push(format!("general op {k}: {e}")),
        }
    }

    let mut pi_cases = 0;
    for k in 0..100 {
        let t = rank_two_case(&mut r, k);
        counts[3] += 1;
        match attainment::rank2_corollary(&t) {
            Ok(rep) if rep.agrees => {
                if rep.partial_isometry == Some(true) {
                    pi_cases += 1;
                }
            }
            Ok(rep) => failures.push(format!("rank2 op {k}: {rep:?}")),
            Err(e) => failures.push(format!("rank2 op {k}: {e}")),
        }
    }

    let mut detail = format!(
        "nonempty {} ops, rank1 {} ops ({eigen_cases} eigen), general {} nonempty ops, rank2 {} ops ({pi_cases} partial isometries); {} failures",
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        failures.len()
    );
    for f in failures.iter().take(3) {
        detail.push_str("; ");
        detail.push_str(f);
    }
    outcome(failures.is_empty() && counts[2] >= 30 && pi_cases >= 20, detail)
}

fn hull_support(points: &[C64], theta: f64) -> f64 {
    let dir = C64::from_polar(1.0, -theta);
    points.iter().map(|p| (dir * p).re).fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let resolution = 720;
    let mut worst_ratio: f64 = 0.0;
    for k in 0..50 {
        let n = 2 + k % 4;
        let eig: Vec<C64> = (0..n).map(|_| C64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0))).collect();
        let q = random_unitary(&mut r, n, Field::Complex);
        let t = conjugate(&q, &diag(&eig), Field::Complex);
        let sweep = match hilbert::fov_sweep(&t, resolution) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("op {k}: {e}")),
        };
        let mut dist: f64 = 0.0;
        for (i, &th) in sweep.thetas.iter().enumerate() {
            dist = dist.max((sweep.support_max[i] - hull_support(&eig, th)).abs());
        }
        for j in 0..20 * resolution {
            let th = std::f64::consts::TAU * j as f64 / (20 * resolution) as f64;
            dist = dist.max((hull_support(&sweep.boundary, th) - hull_support(&eig, th)).abs());
        }
        worst_ratio = worst_ratio.max(dist / (10.0 * t.norm() / resolution as f64));
    }
    outcome(worst_ratio <= 1.0, format!("worst Hausdorff distance / (10‖T‖/720) = {worst_ratio:.3e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("l2(R^4) example: norm, radius and e1 in M_T and V_T", criterion_1),
        ("linf(R^2) Daugavet operator without a unimodular eigenvalue", criterion_2),
        ("Examples 1 and 2 at n = 3", || gallery_outcome(&["example1-l1-n3", "example2-linf-n3"])),
        ("hexagonal polygon construction", || gallery_outcome(&["polygon-hexagon"])),
        ("oracle agreement on 200 random operators", criterion_5),
        ("characterization soundness", criterion_6),
        ("theorems as properties", criterion_7),
        ("normal matrices: sweep versus eigenvalue hull", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("[{tag}] criterion {}: {name}: {}", i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
