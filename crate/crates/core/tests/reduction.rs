use ggism::matching::{disutility_vector, ggi};
use ggism::random::{random_2sat, seeded};
use ggism::rational::int;
use ggism::reduction::{preprocess_2sat, reduce, unsat_count_from_ggi, TwoSatInstance};
use ggism::rotation::RotationPoset;
use ggism::Error;

/// Minimum number of satisfied clauses by trying every assignment.
fn min_satisfied(ts: &TwoSatInstance) -> usize {
    (0u32..1 << ts.n_vars)
        .map(|mask| {
            let a: Vec<bool> = (0..ts.n_vars).map(|v| mask >> v & 1 == 1).collect();
            ts.n_clauses() - ts.count_unsatisfied(&a)
        })
        .min()
        .unwrap()
}

fn reduced_instances(count: usize, seed: u64) -> Vec<TwoSatInstance> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    while out.len() < count {
        use rand::Rng;
        let nv = rng.gen_range(2..=7);
        let nc = rng.gen_range(2..=7);
        match preprocess_2sat(&random_2sat(nv, nc, &mut rng)) {
            Ok(p) if p.instance.n_clauses() >= 2 => out.push(p.instance),
            Ok(_) | Err(Error::EmptyReduction) => {}
            Err(e) => panic!("{e}"),
        }
    }
    out
}

#[test]
fn every_closed_set_decodes_to_its_assignment() {
    for ts in reduced_instances(25, 1) {
        let out = reduce(&ts).unwrap();
        let poset = RotationPoset::build(&out.instance);
        assert_eq!(poset.len(), ts.n_vars);
        assert!(poset.immediate_edges().is_empty());
        let nc1 = int(ts.n_clauses() as i64 + 1);
        let mut best_value = None;
        for (c, m) in poset.enumerate_stable() {
            let a = out.assignment_of(c.set());
            assert_eq!(out.rotations_of(&a), *c.set());
            let k = ts.count_unsatisfied(&a);
            let dv = disutility_vector(&out.instance, &out.dfun, &m).unwrap();
            let value = ggi(&out.weights, dv.values()).unwrap();
            assert_eq!(unsat_count_from_ggi(&out, &value).unwrap(), k);
            let kk = int(k as i64);
            assert!(&out.delta_u - (&kk + int(1)) * &nc1 < value);
            assert!(value <= &out.delta_u - &kk * &nc1);
            // A clause is unsatisfied iff both decisive agents sit at their better stable rank.
            for (j, agents) in out.decisive_agents.iter().enumerate() {
                let at_best = agents.iter().all(|&ag| {
                    let rank = out.instance.rank_of(ag, m.partner_of(ag));
                    rank == 2 * j + 3
                });
                assert_eq!(at_best, !ts.clause_satisfied(j, &a));
            }
            // Everyone else gets one of their two first choices.
            for slot in 0..2 * out.instance.n() {
                let ag = ggism::Agent::from_slot(slot, out.instance.n());
                if out.decisive_agents.iter().any(|d| d.contains(&ag)) {
                    continue;
                }
                assert!(out.instance.rank_of(ag, m.partner_of(ag)) <= 2);
            }
            if best_value.as_ref().is_none_or(|b| &value < b) {
                best_value = Some(value);
            }
        }
        assert_eq!(poset.enumerate_stable().count(), 1 << ts.n_vars);
        // Minimizing the GGI maximizes unsatisfied clauses.
        let k_max = unsat_count_from_ggi(&out, &best_value.unwrap()).unwrap();
        assert_eq!(ts.n_clauses() - k_max, min_satisfied(&ts));
    }
}

#[test]
fn reduce_rejects_unprocessed_formulas() {
    let unit = TwoSatInstance::from_signed(2, &[vec![1], vec![1, 2], vec![2, 1]]).unwrap();
    assert!(matches!(reduce(&unit), Err(Error::InvalidArgument(_))));
    let lonely = TwoSatInstance::from_signed(3, &[vec![1, 2], vec![1, 2], vec![3, 3]]).unwrap();
    assert!(matches!(reduce(&lonely), Err(Error::InvalidArgument(_))));
}
