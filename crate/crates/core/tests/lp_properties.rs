use ggism::lp::{build_relaxation, round_solution, solve_relaxation, FractionalSolution, LinearProgram, Sense, SolveMode};
use ggism::matching::{disutility_vector, ggi};
use ggism::random::{random_disutility, random_instance, random_weights, seeded};
use ggism::rational::{int, to_f64};
use ggism::rotation::RotationPoset;
use ggism::{fixtures, DisutilityFunction, GgiWeights};
use proptest::prelude::*;

/// Pins every `y` of the relaxation to a 0/1 value.
fn pinned(relax: &ggism::lp::Relaxation, ids: &[usize]) -> LinearProgram {
    let mut lp = relax.lp.clone();
    for (r, &var) in relax.layout.y.iter().enumerate() {
        let v = if ids.contains(&r) { int(1) } else { int(0) };
        lp.add_constraint(format!("pin{r}"), vec![(var, int(1))], Sense::Eq, v).unwrap();
    }
    lp
}

#[test]
fn linearization_is_exact_on_every_closed_set_of_the_example() {
    let inst = fixtures::example1();
    let d = DisutilityFunction::Identity;
    let w = GgiWeights::gini(20).unwrap();
    let poset = RotationPoset::build(&inst);
    let relax = build_relaxation(&poset, &inst, &d, &w).unwrap();
    for (c, m) in poset.enumerate_stable() {
        let lp = pinned(&relax, &c.ids());
        let direct = ggi(&w, disutility_vector(&inst, &d, &m).unwrap().values()).unwrap();
        let exact = lp.solve(SolveMode::Exact).unwrap().exact.unwrap();
        assert_eq!(exact.objective, direct, "closed set {:?}", c.ids());
    }
}

#[test]
fn example_fractional_solution_is_consistent() {
    let inst = fixtures::example1();
    let d = DisutilityFunction::Identity;
    let w = GgiWeights::gini(20).unwrap();
    let poset = RotationPoset::build(&inst);
    let relax = build_relaxation(&poset, &inst, &d, &w).unwrap();
    let f = solve_relaxation(&relax, SolveMode::Float).unwrap();
    check_consistency(&poset, &f, 20);
    let values: Vec<ggism::Rational> = f
        .d_hat
        .iter()
        .map(|x| ggism::Rational::from_float(*x).unwrap())
        .collect();
    let direct = to_f64(&ggi(&w, &values).unwrap());
    assert!((direct - f.objective).abs() < 1e-6);
}

fn check_consistency(poset: &RotationPoset, f: &FractionalSolution, agents: usize) {
    for &(a, b) in poset.immediate_edges() {
        assert!(f.y_hat[b] <= f.y_hat[a] + 1e-9);
    }
    let n = agents / 2;
    let mut rows = vec![0.0; n];
    let mut cols = vec![0.0; n];
    for &((m, w), x) in &f.x_hat {
        assert!((-1e-9..=1.0 + 1e-9).contains(&x));
        rows[m] += x;
        cols[w] += x;
    }
    for s in rows.iter().chain(&cols) {
        assert!((s - 1.0).abs() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn relaxation_bounds_and_rounding(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let inst = random_instance(n, &mut rng);
        let d = random_disutility(n, &mut rng);
        let w = random_weights(2 * n, &mut rng);
        let poset = RotationPoset::build(&inst);
        let relax = build_relaxation(&poset, &inst, &d, &w).unwrap();
        let f = solve_relaxation(&relax, SolveMode::Float).unwrap();
        check_consistency(&poset, &f, 2 * n);
        let best = poset
            .enumerate_stable()
            .map(|(_, m)| ggi(&w, disutility_vector(&inst, &d, &m).unwrap().values()).unwrap())
            .min()
            .unwrap();
        prop_assert!(f.objective <= to_f64(&best) + 1e-6);
        // Rounding must yield a closed set (it errors otherwise).
        let (_, m) = round_solution(&poset, &f).unwrap();
        let value = ggi(&w, disutility_vector(&inst, &d, &m).unwrap().values()).unwrap();
        prop_assert!(to_f64(&value) <= 2.0 * f.objective + 1e-6);
    }

    #[test]
    fn exact_and_float_modes_agree(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let inst = random_instance(n, &mut rng);
        let d = random_disutility(n, &mut rng);
        let w = random_weights(2 * n, &mut rng);
        let poset = RotationPoset::build(&inst);
        let relax = build_relaxation(&poset, &inst, &d, &w).unwrap();
        let f = solve_relaxation(&relax, SolveMode::Float).unwrap();
        let e = solve_relaxation(&relax, SolveMode::Exact).unwrap();
        prop_assert!((f.objective - e.objective).abs() < 1e-6);
    }
}
