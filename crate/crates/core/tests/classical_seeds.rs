mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cbqoa::seeds::{
    fl_objective, fl_rpr2_round, kz_hyperplane_round, kz_objective, s_linear, seed_best_of, solve_fl_sdp,
    solve_kz_sdp, solve_sdp, SdpConfig, SdpSolution, UnitVectorSet, RPR2_S,
};
use cbqoa::{Error, ProblemInstance};
use common::*;

/// `±e_1` embedding of an assignment, with `v_0 = e_1` first when `with_v0`.
fn embed(n: usize, x: usize, dim: usize, with_v0: bool) -> UnitVectorSet {
    let e = |s: f64| {
        let mut v = vec![0.0; dim];
        v[0] = s;
        v
    };
    let mut vs = Vec::new();
    if with_v0 {
        vs.push(e(1.0));
    }
    for b in bits_of(n, x) {
        vs.push(e(if b == 1 { 1.0 } else { -1.0 }));
    }
    UnitVectorSet::new(vs).unwrap()
}

#[test]
fn unit_vector_set_validates() {
    assert!(matches!(UnitVectorSet::new(vec![vec![1.0, 1.0]]), Err(Error::NotNormalized(_))));
    assert!(UnitVectorSet::new(vec![vec![1.0, 0.0], vec![1.0]]).is_err());
    assert_eq!(UnitVectorSet::new(vec![vec![0.6, 0.8]]).unwrap().max_norm_error(), 0.0);
}

#[test]
fn s_linear_shape() {
    assert_eq!(s_linear(-1.0, RPR2_S), 0.0);
    assert_eq!(s_linear(1.0, RPR2_S), 1.0);
    assert_eq!(s_linear(0.0, RPR2_S), 0.5);
    assert!((s_linear(RPR2_S / 2.0, RPR2_S) - 0.75).abs() < 1e-15);
}

#[test]
fn kz_solver_beats_integral_optimum_closely() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3 {
        let n = 8;
        let clauses = random_clauses(n, 30, &mut rng);
        let inst = sat_instance(n, &clauses);
        let opt = (0..1usize << n).map(|x| -sat_cost(n, &clauses, x)).fold(f64::MIN, f64::max);
        let sol = solve_kz_sdp(&inst, &SdpConfig::default()).unwrap();
        assert!(sol.vectors.max_norm_error() < 1e-9);
        assert_eq!(sol.vectors.len(), n + 1);
        assert!(sol.converged);
        // a relaxation: the solver should at least reach the integral optimum
        assert!(sol.objective >= 0.97 * opt, "objective {} vs optimum {opt}", sol.objective);
        assert!((kz_objective(&inst, &sol.vectors) - sol.objective).abs() < 1e-9);
    }
}

#[test]
fn fl_solver_is_nearly_balanced() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in [6, 8, 10] {
        let edges = random_edges(n, 0.5, &mut rng);
        let inst = bisection_instance(n, &edges);
        let sol = solve_fl_sdp(&inst, &SdpConfig::default()).unwrap();
        assert!(sol.converged);
        assert!(sol.residual <= 0.05 * (n as f64).sqrt());
        let opt = (0..1usize << n)
            .filter(|x| x.count_ones() as usize == n / 2)
            .map(|x| -bisection_cost(n, &edges, x))
            .fold(f64::MIN, f64::max);
        assert!(sol.objective >= opt - 0.1 * opt.abs().max(1.0), "objective {} vs {opt}", sol.objective);
    }
}

#[test]
fn solution_json_roundtrip_and_kind_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let sat: ProblemInstance = sat_instance(4, &random_clauses(4, 8, &mut rng)).into();
    let bis: ProblemInstance = bisection_instance(4, &random_edges(4, 0.8, &mut rng)).into();
    let sol = solve_sdp(&sat, &SdpConfig { iterations: 50, ..Default::default() }).unwrap();
    assert_eq!(SdpSolution::from_json(&sol.to_json()).unwrap(), sol);
    assert!(matches!(sol.round(&bis, &mut rng), Err(Error::KindMismatch(_))));
    assert!(sol.best_of(&sat, 0, &mut rng).is_err());
}

#[test]
fn seeding_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let inst: ProblemInstance = bisection_instance(8, &random_edges(8, 0.5, &mut rng)).into();
    let cfg = SdpConfig { rng_seed: 5, ..Default::default() };
    let a = seed_best_of(&inst, 20, &cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let b = seed_best_of(&inst, 20, &cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(a, b);
    assert!(inst.is_feasible(&a).unwrap());
}

#[test]
fn best_of_is_no_worse_than_a_single_rounding() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let inst: ProblemInstance = sat_instance(8, &random_clauses(8, 30, &mut rng)).into();
    let sol = solve_sdp(&inst, &SdpConfig::default()).unwrap();
    let single = sol.round(&inst, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let best = sol.best_of(&inst, 50, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    assert!(inst.evaluate_cost(&best).unwrap() <= inst.evaluate_cost(&single).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn integral_embeddings_recover_assignments(n in 1usize..8, m in 1usize..20, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clauses = random_clauses(n, m, &mut rng);
        let inst = sat_instance(n, &clauses);
        let x = rng.random_range(0..1usize << n);
        let vs = embed(n, x, 3, true);
        prop_assert!((kz_objective(&inst, &vs) + sat_cost(n, &clauses, x)).abs() < 1e-9);
        prop_assert_eq!(kz_hyperplane_round(&vs, &mut rng).unwrap().index(), x);
    }

    #[test]
    fn integral_cut_value(half in 1usize..5, seed in any::<u64>()) {
        let n = 2 * half;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = random_edges(n, 0.6, &mut rng);
        let inst = bisection_instance(n, &edges);
        let x = rng.random_range(0..1usize << n);
        let vs = embed(n, x, 2, false);
        prop_assert!((fl_objective(&inst, &vs) + bisection_cost(n, &edges, x)).abs() < 1e-9);
    }

    #[test]
    fn rpr2_always_balanced(half in 1usize..6, seed in any::<u64>()) {
        let n = 2 * half;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = bisection_instance(n, &random_edges(n, 0.5, &mut rng));
        let sol = solve_fl_sdp(&inst, &SdpConfig { iterations: 100, rng_seed: seed, ..Default::default() }).unwrap();
        for _ in 0..20 {
            let x = fl_rpr2_round(&inst, &sol.vectors, RPR2_S, &mut rng).unwrap();
            prop_assert_eq!(x.weight(), n / 2);
        }
    }
}
