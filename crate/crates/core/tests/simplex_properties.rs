use moaccel::simplex::oracle::brute_force_simplex_oracle;
use moaccel::simplex::{self, kkt_violation, linear_maximizer, project_onto_simplex, HullProblem};
use moaccel::{linalg, solve_hull_least_squares};
use proptest::prelude::*;

fn hull_instance(
    m: std::ops::RangeInclusive<usize>,
    n: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = HullProblem> {
    (m, n).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), m),
            prop::collection::vec(-3.0f64..3.0, n),
        )
            .prop_map(|(cols, t)| HullProblem::new(cols, t).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solution_is_feasible_and_certified(hp in hull_instance(1..=12, 1..=6)) {
        let sol = solve_hull_least_squares(&hp, simplex::DEFAULT_TOL).unwrap();
        let w = sol.weights.as_slice();
        prop_assert!(w.iter().all(|&t| t >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let scale = hp.columns().iter().map(|c| linalg::norm_sq(c)).fold(1.0, f64::max)
            .max(linalg::norm_sq(hp.target()));
        prop_assert!(kkt_violation(&hp, w) <= 1e-9 * scale);
        prop_assert!((sol.objective - linalg::norm_sq(&sol.residual)).abs() < 1e-12 * scale);
    }

    #[test]
    fn matches_brute_force_oracle(hp in hull_instance(2..=3, 1..=5)) {
        let sol = solve_hull_least_squares(&hp, simplex::DEFAULT_TOL).unwrap();
        let reference = brute_force_simplex_oracle(&hp, 0.02).unwrap();
        prop_assert!((sol.objective - reference).abs() <= 1e-8, "{} vs {}", sol.objective, reference);
    }

    #[test]
    fn no_vertex_beats_the_optimum(hp in hull_instance(1..=6, 1..=4)) {
        let sol = solve_hull_least_squares(&hp, simplex::DEFAULT_TOL).unwrap();
        for c in hp.columns() {
            prop_assert!(sol.objective <= linalg::dist_sq(c, hp.target()) + 1e-12);
        }
    }

    // <s sum theta g_i, x+ - x> equals max_i <s g_i, x+ - x> at the optimum
    #[test]
    fn dual_complementarity(hp in hull_instance(2..=5, 2..=5)) {
        let sol = solve_hull_least_squares(&hp, simplex::DEFAULT_TOL).unwrap();
        let step: Vec<f64> = sol.residual.iter().map(|r| -r).collect();
        let lhs = linalg::dot(&sol.point, &step);
        let (_, rhs) = linear_maximizer(hp.columns(), &step);
        let scale = 1.0 + linalg::norm_sq(&sol.point) + linalg::norm_sq(hp.target());
        prop_assert!((lhs - rhs).abs() <= 1e-8 * scale, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn permutation_invariance(hp in hull_instance(2..=6, 1..=4), shift in 0usize..6) {
        let mut cols = hp.columns().to_vec();
        let m = cols.len();
        cols.rotate_left(shift % m);
        let rotated = HullProblem::new(cols, hp.target().to_vec()).unwrap();
        let a = solve_hull_least_squares(&hp, simplex::DEFAULT_TOL).unwrap();
        let b = solve_hull_least_squares(&rotated, simplex::DEFAULT_TOL).unwrap();
        prop_assert!((a.objective - b.objective).abs() < 1e-9 * (1.0 + a.objective));
    }

    #[test]
    fn simplex_projection_properties(v in prop::collection::vec(-5.0f64..5.0, 1..10)) {
        let p = project_onto_simplex(&v);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // obtuse-angle characterization at the vertices
        let r = linalg::sub(&v, &p);
        let rp = linalg::dot(&r, &p);
        for (i, ri) in r.iter().enumerate() {
            let _ = i;
            prop_assert!(*ri - rp <= 1e-12);
        }
    }
}

#[test]
fn large_m_falls_back_and_stays_certified() {
    let mut rng = moaccel::suite::SeededUniform::new(3);
    for _ in 0..20 {
        let cols: Vec<Vec<f64>> = (0..30).map(|_| rng.point_in_box(4, -1.0, 1.0)).collect();
        let t = rng.point_in_box(4, -2.0, 2.0);
        let hp = HullProblem::new(cols, t).unwrap();
        let sol = solve_hull_least_squares(&hp, simplex::DEFAULT_TOL).unwrap();
        assert!(kkt_violation(&hp, sol.weights.as_slice()) <= 1e-9 * 4.0);
    }
}
