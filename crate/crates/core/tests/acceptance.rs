//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use mcsd::direction::solve_direction;
use mcsd::geometry::{sym_matrix_function, ManifoldDescriptor, MatrixFn, Point, Tangent};
use mcsd::harness::diagnostics::{
    check_fejer, check_monotone, check_summability, weak_pareto_probe,
};
use mcsd::harness::oracle::{run_oracle_trials, OracleTrialConfig};
use mcsd::harness::{build_problem, find_benchmark, registry};
use mcsd::linesearch::{armijo_step, ArmijoConfig};
use mcsd::problem::{fd_gradient_check, jacobian_apply};
use mcsd::sampling::{random_point, random_unit_tangent};
use mcsd::solver::{solve, SolveStatus, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn report_line(name: &str, pass: bool, detail: &str) {
    println!(
        "[acceptance] {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn all_manifolds() -> Vec<ManifoldDescriptor> {
    vec![
        ManifoldDescriptor::euclidean(3),
        ManifoldDescriptor::positive_octant(3),
        ManifoldDescriptor::hypercube(3),
        ManifoldDescriptor::spd_cone(3),
    ]
}

fn default_runs() -> Vec<(String, mcsd::Problem64, mcsd::SolveReport64)> {
    registry::<f64>()
        .into_iter()
        .map(|spec| {
            let prob = build_problem(&spec).unwrap();
            let cfg = SolverConfig {
                max_iters: 2000,
                ..SolverConfig::default()
            };
            let report = solve(&prob, &spec.default_p0, &cfg).unwrap();
            (spec.key, prob, report)
        })
        .collect()
}

#[test]
fn c01_direction_oracle_equivalence() {
    let started = Instant::now();
    let cfg = OracleTrialConfig {
        trials: 200,
        seed: 2024,
        ..Default::default()
    };
    let summary = run_oracle_trials::<f64>(&cfg).unwrap();
    let elapsed = started.elapsed();
    let pass = summary.max_v_deviation <= 1e-7
        && summary.max_theta_deviation <= 1e-9
        && elapsed.as_secs_f64() <= 10.0;
    report_line(
        "C1 direction-oracle equivalence",
        pass,
        &format!(
            "200 trials, max |dv|_p {:.2e}, max |dtheta| {:.2e}, {:.2}s",
            summary.max_v_deviation,
            summary.max_theta_deviation,
            elapsed.as_secs_f64()
        ),
    );
    assert!(summary.max_v_deviation <= 1e-7);
    assert!(summary.max_theta_deviation <= 1e-9);
    assert!(elapsed.as_secs_f64() <= 10.0, "took {elapsed:?}");
}

#[test]
fn c02_stationarity_identity() {
    // Over the randomized direction solves...
    let cfg = OracleTrialConfig {
        trials: 200,
        seed: 2024,
        ..Default::default()
    };
    let summary = run_oracle_trials::<f64>(&cfg).unwrap();
    let mut worst = summary.max_stationarity_residual;
    // ...and over every benchmark run's recorded solves.
    for (_, _, report) in default_runs() {
        for r in &report.records {
            let n2 = r.norm_v * r.norm_v;
            worst = worst.max((r.theta + 0.5 * n2).abs() / n2.max(1.0));
        }
    }
    let pass = worst <= 1e-9;
    report_line(
        "C2 stationarity identity",
        pass,
        &format!("max residual {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn c03_gradient_consistency() {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for spec in registry::<f64>() {
        let prob = build_problem(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        for _ in 0..50 {
            let p = random_point::<f64>(&spec.manifold, &mut rng);
            let fd = fd_gradient_check(&prob, &p, 1e-6, 1e-5, 4, &mut rng).unwrap();
            pass &= fd.pass;
            for obj in &fd.per_objective {
                worst = worst.max(obj.max_rel_err);
            }
        }
    }
    report_line(
        "C3 gradient consistency",
        pass,
        &format!("50 points x 4 benchmarks, max rel err {worst:.2e}"),
    );
    assert!(pass, "worst {worst:e}");
}

#[test]
fn c04_geometry_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut pass = true;
    let mut notes = Vec::new();

    // exp at t = 0 is exact.
    for m in all_manifolds() {
        for _ in 0..20 {
            let p = random_point::<f64>(&m, &mut rng);
            let v = random_unit_tangent(&m, &p, &mut rng);
            pass &= m.exp_map(&p, &v, 0.0).unwrap() == p;
        }
    }
    notes.push("exp0 exact".to_string());

    // Geodesic distance consistency d(p, exp_p(tv)) = t |v|_p.
    let mut worst_geo: f64 = 0.0;
    for m in all_manifolds() {
        for _ in 0..20 {
            let p = random_point::<f64>(&m, &mut rng);
            let v = random_unit_tangent(&m, &p, &mut rng).scaled(rng.gen_range(0.2..2.0));
            for t in [0.1, 0.5, 1.0] {
                let q = m.exp_map(&p, &v, t).unwrap();
                let d = m.distance(&p, &q).unwrap();
                let want = t * m.norm(&p, &v).unwrap();
                worst_geo = worst_geo.max((d - want).abs() / want);
            }
        }
    }
    pass &= worst_geo <= 1e-8;
    notes.push(format!("geodesic dist {worst_geo:.1e}"));

    // Octant/hypercube isometry identities.
    let mut worst_iso: f64 = 0.0;
    for (m, map) in [
        (
            ManifoldDescriptor::positive_octant(4),
            (|x: f64| x.ln()) as fn(f64) -> f64,
        ),
        (ManifoldDescriptor::hypercube(4), |x: f64| {
            (x / (1.0 - x)).ln()
        }),
    ] {
        for _ in 0..50 {
            let p = random_point::<f64>(&m, &mut rng);
            let q = random_point::<f64>(&m, &mut rng);
            let d = m.distance(&p, &q).unwrap();
            let flat: f64 = p
                .coords
                .iter()
                .zip(&q.coords)
                .map(|(&a, &b)| (map(a) - map(b)).powi(2))
                .sum::<f64>()
                .sqrt();
            worst_iso = worst_iso.max((d - flat).abs() / flat.max(1.0));
        }
    }
    pass &= worst_iso <= 1e-12;
    notes.push(format!("isometry {worst_iso:.1e}"));

    // Law of cosines with equality on 100 random flat hinges.
    let mut worst_hinge: f64 = 0.0;
    for m in [
        ManifoldDescriptor::positive_octant(3),
        ManifoldDescriptor::hypercube(3),
    ] {
        for _ in 0..100 {
            let p = random_point::<f64>(&m, &mut rng);
            let v1 = random_unit_tangent(&m, &p, &mut rng);
            let v2 = random_unit_tangent(&m, &p, &mut rng);
            let (l1, l2) = (rng.gen_range(0.1..1.5), rng.gen_range(0.1..1.5));
            let q1 = m.exp_map(&p, &v1, l1).unwrap();
            let q2 = m.exp_map(&p, &v2, l2).unwrap();
            let l3 = m.distance(&q1, &q2).unwrap();
            let cos_alpha = m.inner(&p, &v1, &v2).unwrap();
            let rhs = l1 * l1 + l2 * l2 - 2.0 * l1 * l2 * cos_alpha;
            worst_hinge = worst_hinge.max((l3 * l3 - rhs).abs() / (l1 * l1 + l2 * l2));
        }
    }
    pass &= worst_hinge <= 1e-8;
    notes.push(format!("hinges {worst_hinge:.1e}"));

    // SPD matrix-function round trips.
    let mut worst_mf: f64 = 0.0;
    let spd = ManifoldDescriptor::spd_cone(4);
    for _ in 0..20 {
        let a = random_point::<f64>(&spd, &mut rng).coords;
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let log = sym_matrix_function(&a, 4, MatrixFn::Log).unwrap();
        let back = sym_matrix_function(&log, 4, MatrixFn::Exp).unwrap();
        let s = sym_matrix_function(&a, 4, MatrixFn::Sqrt).unwrap();
        for i in 0..16 {
            worst_mf = worst_mf.max((a[i] - back[i]).abs() / scale);
        }
        for i in 0..4 {
            for j in 0..4 {
                let mut ss = 0.0;
                for k in 0..4 {
                    ss += s[i * 4 + k] * s[k * 4 + j];
                }
                worst_mf = worst_mf.max((ss - a[i * 4 + j]).abs() / scale);
            }
        }
    }
    pass &= worst_mf <= 1e-10;
    notes.push(format!("matrix fns {worst_mf:.1e}"));

    report_line("C4 geometry suite", pass, &notes.join(", "));
    assert!(pass, "{notes:?}");
}

#[test]
fn c05_strict_monotone_decrease() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (key, _, report) in default_runs() {
        let ok = check_monotone(&report);
        detail.push(format!("{key}: {}", if ok { "ok" } else { "VIOLATED" }));
        pass &= ok;
    }
    report_line("C5 strict monotone decrease", pass, &detail.join(", "));
    assert!(pass);
}

#[test]
fn c06_fejer_inequality() {
    let mut pass = true;
    let mut detail = Vec::new();
    for key in ["OCT-QUAD", "CUBE-BI"] {
        let spec = find_benchmark::<f64>(key).unwrap();
        let prob = build_problem(&spec).unwrap();
        let report = solve(&prob, &spec.default_p0, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Critical);
        // Reference = the run's own limit point, verified as a U-member.
        let fejer = check_fejer(&prob, &report, &report.final_point).unwrap();
        let verified = fejer.membership_violations.is_empty();
        let tol = 1e-8 * (1.0 + fejer.initial_sq_distance);
        let ok = verified && fejer.max_slack() <= tol;
        detail.push(format!(
            "{key}: max slack {:.2e} (tol {:.2e})",
            fejer.max_slack(),
            tol
        ));
        pass &= ok;
    }
    report_line("C6 Fejér inequality", pass, &detail.join(", "));
    assert!(pass, "{detail:?}");
}

#[test]
fn c07_summability_bound() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (key, _, report) in default_runs() {
        if report.status != SolveStatus::Critical {
            continue;
        }
        let s = check_summability(&report, 0.5, &report.final_f);
        let ok = s.precondition_ok && s.ok;
        detail.push(format!("{key}: lhs {:.3e} rhs {:.3e}", s.lhs, s.rhs));
        pass &= ok;
    }
    report_line("C7 summability bound", pass, &detail.join(", "));
    assert!(pass, "{detail:?}");
}

/// Distance from y to the segment [a, b] in plain Euclidean coordinates.
fn segment_distance(y: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let dir: Vec<f64> = a.iter().zip(b).map(|(&ai, &bi)| bi - ai).collect();
    let len2: f64 = dir.iter().map(|d| d * d).sum();
    let t = if len2 == 0.0 {
        0.0
    } else {
        let dot: f64 = y
            .iter()
            .zip(a.iter().zip(&dir))
            .map(|(&yi, (&ai, &di))| (yi - ai) * di)
            .sum();
        (dot / len2).clamp(0.0, 1.0)
    };
    y.iter()
        .zip(a.iter().zip(&dir))
        .map(|(&yi, (&ai, &di))| (yi - ai - t * di).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[test]
fn c08_convergence_on_the_benchmarks() {
    let mut detail = Vec::new();

    // OCT-QUAD: Critical within 500 iterations and terminal log-coordinates
    // on the Pareto segment [ln a1, ln a2].
    let spec = find_benchmark::<f64>("OCT-QUAD").unwrap();
    let prob = build_problem(&spec).unwrap();
    let cfg = SolverConfig {
        beta: 0.5,
        eps_crit: 1e-6,
        max_iters: 500,
        max_halvings: 64,
    };
    let started = Instant::now();
    let report = solve(&prob, &spec.default_p0, &cfg).unwrap();
    let oct_time = started.elapsed().as_secs_f64();
    let oct_critical = report.status == SolveStatus::Critical;
    let y: Vec<f64> = report.final_point.coords.iter().map(|x| x.ln()).collect();
    let ln_a1: Vec<f64> = spec.param("a1").unwrap().iter().map(|x| x.ln()).collect();
    let ln_a2: Vec<f64> = spec.param("a2").unwrap().iter().map(|x| x.ln()).collect();
    let seg_dist = segment_distance(&y, &ln_a1, &ln_a2);
    let oct_ok = oct_critical && seg_dist <= 1e-4 && oct_time <= 5.0;
    detail.push(format!(
        "OCT-QUAD {} in {} iters, segment dist {:.2e}",
        report.status.name(),
        report.records.len(),
        seg_dist
    ));

    // CUBE-BI and SPD-TRACE: Critical within 2000 iterations.
    let mut others_ok = true;
    for key in ["CUBE-BI", "SPD-TRACE"] {
        let spec = find_benchmark::<f64>(key).unwrap();
        let prob = build_problem(&spec).unwrap();
        let cfg = SolverConfig {
            max_iters: 2000,
            ..SolverConfig::default()
        };
        let started = Instant::now();
        let report = solve(&prob, &spec.default_p0, &cfg).unwrap();
        let secs = started.elapsed().as_secs_f64();
        let ok = report.status == SolveStatus::Critical && secs <= 5.0;
        detail.push(format!(
            "{key} {} in {} iters",
            report.status.name(),
            report.records.len()
        ));
        others_ok &= ok;
    }

    let pass = oct_ok && others_ok;
    report_line("C8 convergence", pass, &detail.join(", "));
    assert!(pass, "{detail:?}");
}

/// Plain-array scalar steepest descent with the same dyadic Armijo rule;
/// written against the raw closures, independent of the solver stack.
fn scalar_reference(
    f: impl Fn(&[f64]) -> f64,
    grad: impl Fn(&[f64]) -> Vec<f64>,
    mut x: Vec<f64>,
    beta: f64,
    eps: f64,
    max_iters: usize,
) -> Vec<Vec<f64>> {
    let mut iterates = vec![x.clone()];
    for _ in 0..max_iters {
        let g = grad(&x);
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= eps {
            break;
        }
        let v: Vec<f64> = g.iter().map(|&gi| -gi).collect();
        let slope: f64 = -g.iter().map(|gi| gi * gi).sum::<f64>();
        let fx = f(&x);
        let mut t = 1.0f64;
        loop {
            let trial: Vec<f64> = x.iter().zip(&v).map(|(&xi, &vi)| xi + t * vi).collect();
            if f(&trial) <= fx + beta * t * slope {
                x = trial;
                break;
            }
            t *= 0.5;
        }
        iterates.push(x.clone());
    }
    iterates
}

#[test]
fn c09_scalar_reduction() {
    let spec = find_benchmark::<f64>("SCALAR-QUAD").unwrap();
    let prob = build_problem(&spec).unwrap();
    let cfg = SolverConfig::default();
    let report = solve(&prob, &spec.default_p0, &cfg).unwrap();
    let solver_points: Vec<Vec<f64>> = report
        .point_sequence()
        .iter()
        .map(|p| p.coords.clone())
        .collect();

    let reference = scalar_reference(
        |x| 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
        |x| x.to_vec(),
        spec.default_p0.coords.clone(),
        0.5,
        1e-6,
        1000,
    );

    let mut worst: f64 = 0.0;
    let mut pass = reference.len() == solver_points.len();
    if pass {
        for (a, b) in reference.iter().zip(&solver_points) {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
        pass &= worst <= 1e-12;
    }

    // A second, anisotropic scalar problem drives a longer trajectory
    // through the same comparison.
    let aniso = mcsd::Problem64::new(ManifoldDescriptor::euclidean(2), "aniso").with_objective(
        |p: &Point<f64>| 2.0 * p.coords[0].powi(2) + 0.5 * p.coords[1].powi(2),
        |p: &Point<f64>| Tangent::new(vec![4.0 * p.coords[0], p.coords[1]]),
    );
    let p0 = Point::new(vec![1.0, 1.0]);
    let report2 = solve(&aniso, &p0, &cfg).unwrap();
    let solver2: Vec<Vec<f64>> = report2
        .point_sequence()
        .iter()
        .map(|p| p.coords.clone())
        .collect();
    let reference2 = scalar_reference(
        |x| 2.0 * x[0] * x[0] + 0.5 * x[1] * x[1],
        |x| vec![4.0 * x[0], x[1]],
        p0.coords.clone(),
        0.5,
        1e-6,
        1000,
    );
    pass &= reference2.len() == solver2.len();
    if pass {
        for (a, b) in reference2.iter().zip(&solver2) {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
        pass &= worst <= 1e-12;
    }

    report_line(
        "C9 scalar reduction",
        pass,
        &format!(
            "max per-iterate deviation {worst:.2e} over {} + {} iterates",
            solver_points.len(),
            solver2.len()
        ),
    );
    assert!(pass, "worst {worst:e}");
}

#[test]
fn c10_line_search_maximality() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let specs = registry::<f64>();
    let problems: Vec<_> = specs.iter().map(|s| build_problem(s).unwrap()).collect();
    let cfg = ArmijoConfig::default();

    let mut checked = 0usize;
    let mut pass = true;
    let mut guard = 0usize;
    while checked < 100 {
        guard += 1;
        assert!(guard < 10_000, "could not find enough non-critical states");
        let idx = checked % problems.len();
        let prob = &problems[idx];
        let m_desc = prob.manifold();
        let p = random_point::<f64>(&m_desc, &mut rng);
        let grads = prob.riemannian_jacobian(&p).unwrap();
        let dir = solve_direction(&grads, &p, &m_desc).unwrap();
        if dir.criticality <= 1e-8 {
            continue;
        }
        let f_p = prob.evaluate(&p).unwrap();
        let jac_v = jacobian_apply(&grads, &p, &dir.v, &m_desc).unwrap();
        if jac_v.values.iter().any(|&d| d >= 0.0) {
            continue;
        }
        let step = armijo_step(prob, &p, &dir.v, &jac_v, &f_p, &cfg).unwrap();

        // Acceptance at t.
        let accepted = step
            .f_new
            .values
            .iter()
            .zip(f_p.values.iter().zip(&jac_v.values))
            .all(|(&fn_, (&f0, &d))| fn_ <= f0 + cfg.beta * step.t * d);
        pass &= accepted;

        // Maximality: 2t (when <= 1) violates at least one component.
        if step.j > 0 {
            let t2 = step.t * 2.0;
            let f2 = prob
                .evaluate(&m_desc.exp_map(&p, &dir.v, t2).unwrap())
                .unwrap();
            let violated = f2
                .values
                .iter()
                .zip(f_p.values.iter().zip(&jac_v.values))
                .any(|(&f, (&f0, &d))| f > f0 + cfg.beta * t2 * d);
            pass &= violated;
        }
        checked += 1;
    }
    report_line(
        "C10 line-search maximality",
        pass,
        &format!("{checked} states"),
    );
    assert!(pass);
}

#[test]
fn c11_weak_pareto_sampling() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (key, prob, report) in default_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1111);
        let probe = weak_pareto_probe(&prob, &report.final_point, 1000, 0.5, &mut rng).unwrap();
        detail.push(format!(
            "{key}: {}/{} dominate",
            probe.dominating, probe.probes
        ));
        pass &= probe.ok();
    }
    report_line("C11 weak-Pareto sampling", pass, &detail.join(", "));
    assert!(pass, "{detail:?}");
}
