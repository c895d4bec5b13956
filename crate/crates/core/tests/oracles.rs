mod common;

use std::collections::BTreeSet;

use ggism::brute::brute_solve;
use ggism::lp::{approx_solve, SolveMode};
use ggism::matching::{is_stable, Criterion};
use ggism::random::{random_disutility, random_instance, random_weights, seeded};
use ggism::rotation::RotationPoset;
use ggism::xp::{enumerate_topk, enumerate_topk_sets, witness, xp_solve, XpContext, XpOptions};
use ggism::{DisutilityFunction, GgiWeights, Instance, Rational};
use proptest::prelude::*;

use common::{disutilities, ggi_oracle, prefixes, stable_by_permutation};

fn setup(n: usize, seed: u64) -> (Instance, DisutilityFunction, GgiWeights) {
    let mut rng = seeded(seed);
    let inst = random_instance(n, &mut rng);
    let d = random_disutility(n, &mut rng);
    let w = random_weights(2 * n, &mut rng);
    (inst, d, w)
}

fn oracle_optimum(inst: &Instance, d: &DisutilityFunction, w: &GgiWeights) -> Rational {
    stable_by_permutation(inst)
        .iter()
        .map(|x| ggi_oracle(w.as_slice(), &disutilities(inst, d, x)))
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn closed_sets_match_permutation_search(n in 1usize..=7, seed in any::<u64>()) {
        let (inst, _, _) = setup(n, seed);
        let poset = RotationPoset::build(&inst);
        let mut seen = BTreeSet::new();
        for (c, m) in poset.enumerate_stable() {
            prop_assert!(is_stable(&inst, &m).unwrap());
            prop_assert_eq!(poset.matching_by_elimination(&c).unwrap(), m.clone());
            prop_assert!(seen.insert(m.partner_of_man().to_vec()), "duplicate matching");
        }
        prop_assert_eq!(seen, stable_by_permutation(&inst));
        prop_assert!(poset.len() <= n * n.saturating_sub(1) / 2);
    }

    #[test]
    fn get_and_break_maps_are_consistent(n in 2usize..=7, seed in any::<u64>()) {
        let (inst, _, _) = setup(n, seed);
        let poset = RotationPoset::build(&inst);
        for (m, w) in poset.stable_pairs() {
            if let (Some(g), Some(b)) = (poset.get_rotation(m, w), poset.break_rotation(m, w)) {
                prop_assert!(poset.precedes(g, b));
            }
            prop_assert_eq!(poset.get_rotation(m, w).is_none(), poset.man_optimal().contains(m, w));
            prop_assert_eq!(poset.break_rotation(m, w).is_none(), poset.woman_optimal().contains(m, w));
        }
        for &(a, b) in poset.immediate_edges() {
            prop_assert!(a < b, "ids follow a linear extension");
        }
    }

    #[test]
    fn xp_matches_oracle(n in 2usize..=6, seed in any::<u64>()) {
        let (inst, d, w) = setup(n, seed);
        let res = xp_solve(&inst, &d, &w, XpOptions::default()).unwrap();
        prop_assert!(is_stable(&inst, &res.matching).unwrap());
        prop_assert_eq!(res.value, oracle_optimum(&inst, &d, &w));
    }

    #[test]
    fn approx_within_factor_two(n in 2usize..=6, seed in any::<u64>()) {
        let (inst, d, w) = setup(n, seed);
        let opt = oracle_optimum(&inst, &d, &w);
        let res = approx_solve(&inst, &d, &w, SolveMode::Float).unwrap();
        let value = ggism::rational::to_f64(&res.value);
        prop_assert!(res.lp_bound <= ggism::rational::to_f64(&opt) + 1e-6);
        prop_assert!(value <= 2.0 * res.lp_bound + 1e-6);
        let actual = disutilities(&inst, &d, res.matching.partner_of_man());
        for (hat, real) in res.fractional.d_hat.iter().zip(&actual) {
            prop_assert!(*hat >= 0.5 * ggism::rational::to_f64(real) - 1e-7);
        }
    }

    #[test]
    fn prefix_enumeration_is_sound_and_complete(n in 2usize..=5, k in 1usize..=3, seed in any::<u64>()) {
        let (inst, d, _) = setup(n, seed);
        let d = if seed % 2 == 0 { DisutilityFunction::Identity } else { d };
        let k = k.min(2 * n);
        let ctx = XpContext::new(&inst, &d).unwrap();
        let got: BTreeSet<Vec<common::TripleKey>> = enumerate_topk(&ctx, k, XpOptions::default())
            .unwrap()
            .into_iter()
            .map(|v| v.entries.into_iter().map(|t| (t.dis, t.agent, t.partner)).collect())
            .collect();
        let mut want = BTreeSet::new();
        for x in stable_by_permutation(&inst) {
            want.extend(prefixes(&inst, &d, &x, k));
        }
        prop_assert!(got.len() as f64 <= (2.0 * (n * n) as f64).powi(k as i32));
        prop_assert_eq!(&got, &want);
        for v in enumerate_topk_sets(&ctx, k, XpOptions::default()).unwrap() {
            let x = witness(&ctx, &v).unwrap();
            let key: Vec<common::TripleKey> = v.entries.iter().map(|t| (t.dis.clone(), t.agent, t.partner)).collect();
            prop_assert!(prefixes(&inst, &d, x.partner_of_man(), k).contains(&key));
        }
    }

    #[test]
    fn brute_agrees_with_oracle(n in 1usize..=6, seed in any::<u64>()) {
        let (inst, d, w) = setup(n, seed);
        let res = brute_solve(&inst, &d, &Criterion::Ggi(w.clone())).unwrap();
        prop_assert_eq!(res.value, oracle_optimum(&inst, &d, &w));
    }
}

#[test]
fn threaded_enumeration_is_identical() {
    let (inst, d, _) = setup(6, 99);
    let ctx = XpContext::new(&inst, &d).unwrap();
    let seq = enumerate_topk(&ctx, 3, XpOptions::default()).unwrap();
    let par = enumerate_topk(&ctx, 3, XpOptions { threads: Some(4) }).unwrap();
    assert_eq!(seq, par);
}
