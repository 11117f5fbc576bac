use moaccel::suite::{self, LogSumExpSpec, SeededUniform, WittingSpec};
use moaccel::{linalg, MoProblem};

fn check_gradients(p: &MoProblem, rng: &mut SeededUniform, low: f64, high: f64, tol: f64) {
    for _ in 0..100 {
        let x = rng.point_in_box(p.dim(), low, high);
        let eval = p.evaluate_all(&x).unwrap();
        for i in 0..p.num_objectives() {
            let fd = p.finite_difference_gradient(i, &x, 1e-6).unwrap();
            let err = linalg::max_abs_diff(&fd, &eval.gradients[i]);
            assert!(err <= tol, "{} objective {i} at {x:?}: {err}", p.name());
        }
    }
}

#[test]
fn witting_gradients_match_finite_differences() {
    let p = suite::make_witting(&WittingSpec::default()).unwrap();
    check_gradients(&p, &mut SeededUniform::new(11), -2.0, 2.0, 1e-5);
}

#[test]
fn logsumexp_gradients_match_finite_differences() {
    let p = suite::make_logsumexp(&LogSumExpSpec::reference(7)).unwrap();
    let mut rng = SeededUniform::new(12);
    check_gradients(&p, &mut rng, -15.0, 15.0, 1e-4);
    check_gradients(&p, &mut rng, -5.0, 5.0, 1e-5);
}

#[test]
fn quadratic_gradients_match_finite_differences() {
    let p = suite::make_quadratic_family(vec![
        vec![0.0, 1.0, 2.0],
        vec![-1.0, 0.0, 3.0],
        vec![2.0; 3],
    ])
    .unwrap();
    check_gradients(&p, &mut SeededUniform::new(13), -4.0, 4.0, 1e-6);
}

#[test]
fn logsumexp_is_midpoint_convex() {
    let p = suite::make_logsumexp(&LogSumExpSpec::reference(21)).unwrap();
    let mut rng = SeededUniform::new(22);
    for _ in 0..100 {
        let x = rng.point_in_box(20, -15.0, 15.0);
        let y = rng.point_in_box(20, -15.0, 15.0);
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
        let (fx, fy, fm) = (
            p.evaluate_values(&x).unwrap(),
            p.evaluate_values(&y).unwrap(),
            p.evaluate_values(&mid).unwrap(),
        );
        for i in 0..3 {
            assert!(fm[i] <= 0.5 * (fx[i] + fy[i]) + 1e-12);
        }
    }
}

#[test]
fn logsumexp_same_seed_same_matrices() {
    let spec = LogSumExpSpec::reference(99);
    let a = suite::generate_logsumexp_data(&spec).unwrap();
    let b = suite::generate_logsumexp_data(&spec).unwrap();
    assert_eq!(a.matrices, b.matrices);
    assert_eq!(a.offsets, b.offsets);
    let c = suite::generate_logsumexp_data(&LogSumExpSpec::reference(100)).unwrap();
    assert_ne!(a.matrices, c.matrices);
}

#[test]
fn witting_is_symmetric_under_swap() {
    let p = suite::make_witting(&WittingSpec::default()).unwrap();
    let mut rng = SeededUniform::new(5);
    for _ in 0..100 {
        let x = rng.point_in_box(2, -3.0, 3.0);
        let f = p.evaluate_values(&x).unwrap();
        let g = p.evaluate_values(&[x[1], x[0]]).unwrap();
        assert!((f[0] - g[1]).abs() < 1e-14);
        assert!((f[1] - g[0]).abs() < 1e-14);
    }
}

#[test]
fn witting_lipschitz_hint_bounds_gradient_differences() {
    let p = suite::make_witting(&WittingSpec::default()).unwrap();
    let l = p.lipschitz_hint().unwrap();
    let mut rng = SeededUniform::new(6);
    for _ in 0..2000 {
        let x = rng.point_in_box(2, -3.0, 3.0);
        let y = rng.point_in_box(2, -3.0, 3.0);
        let (gx, gy) = (p.evaluate_all(&x).unwrap(), p.evaluate_all(&y).unwrap());
        for i in 0..2 {
            let lhs = linalg::dist_sq(&gx.gradients[i], &gy.gradients[i]).sqrt();
            assert!(lhs <= l * linalg::dist_sq(&x, &y).sqrt() + 1e-12);
        }
    }
}

#[test]
fn quadratic_biobjective_min_norm_direction() {
    let p = suite::make_quadratic_biobjective(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
    let eval = p.evaluate_all(&[2.0, 0.0]).unwrap();
    let (_, d) = moaccel::min_norm_element(&eval.gradients, 1e-12).unwrap();
    assert!(linalg::max_abs_diff(&d, &[1.0, 0.0]) < 1e-14);
    assert!(moaccel::diagnostics::kkt_residual(&p, &[0.3, 0.0]).unwrap() < 1e-14);
    assert!(moaccel::diagnostics::kkt_residual(&p, &[0.0, 0.0]).unwrap() < 1e-14);
}

#[test]
fn wrapped_quadratics_have_known_minimizers() {
    for (center, curvature) in [
        (vec![1.0], 2.0),
        (vec![-3.0, 4.0], 0.5),
        (vec![0.0, 0.0, 7.0], 10.0),
    ] {
        let p = suite::single_quadratic(center.clone(), curvature).unwrap();
        assert_eq!(p.evaluate_values(&center).unwrap(), vec![0.0]);
        assert_eq!(
            p.evaluate_all(&center).unwrap().gradients[0],
            vec![0.0; center.len()]
        );
        assert_eq!(
            moaccel::diagnostics::pareto_distance(&p, &center).unwrap(),
            0.0
        );
    }
}
