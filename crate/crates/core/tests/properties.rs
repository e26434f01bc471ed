use bandit_lb::field::{is_multiple_pair, rref_mod, solution_count, FieldMatrix, FieldVec, Params};
use bandit_lb::hypotheses::{consistent_subset, Constraint, LinearClass, DEFAULT_TABLE_BUDGET};
use bandit_lb::lemmas::{
    bucket_counts, count_multiple_pairs, derive_seed, find_balanced_u, within_bucket_bound,
    CoeffSet,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn small_params() -> impl Strategy<Value = Params> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 1usize..=3)
        .prop_map(|(p, n)| Params::new(p, n).unwrap())
}

fn vector(params: Params) -> impl Strategy<Value = FieldVec> {
    prop::collection::vec(0..params.p(), params.n()).prop_map(move |e| params.vector(e).unwrap())
}

fn nonzero_vector(params: Params) -> impl Strategy<Value = FieldVec> {
    vector(params).prop_filter("nonzero", |v| !v.is_zero())
}

fn system(params: Params) -> impl Strategy<Value = (Params, Vec<(FieldVec, u64)>)> {
    prop::collection::vec((vector(params), 0..params.p()), 0..=4)
        .prop_map(move |rows| (params, rows))
}

proptest! {
    #[test]
    fn solution_count_matches_enumeration((params, rows) in small_params().prop_flat_map(system)) {
        let m = FieldMatrix::augmented(params.n(), rows.clone()).unwrap();
        let brute = params
            .all_vectors()
            .filter(|u| rows.iter().all(|(r, z)| {
                bandit_lb::field::dot_mod(r, u, &params).unwrap() == *z
            }))
            .count();
        prop_assert_eq!(solution_count(&m, &params).unwrap(), BigUint::from(brute));
    }

    #[test]
    fn rref_is_idempotent((params, rows) in small_params().prop_flat_map(system)) {
        let m = FieldMatrix::augmented(params.n(), rows).unwrap();
        let once = rref_mod(&m, &params).unwrap();
        let twice = rref_mod(&once.matrix, &params).unwrap();
        prop_assert_eq!(&once, &twice);
    }

    #[test]
    fn multiple_pairs_symmetric_and_rank_one(
        (params, s, t) in small_params().prop_flat_map(|p| (Just(p), nonzero_vector(p), nonzero_vector(p)))
    ) {
        prop_assert!(is_multiple_pair(&s, &s, &params).unwrap());
        let st = is_multiple_pair(&s, &t, &params).unwrap();
        prop_assert_eq!(st, is_multiple_pair(&t, &s, &params).unwrap());
        let m = FieldMatrix::new(params.n(), vec![s, t]).unwrap();
        prop_assert_eq!(rref_mod(&m, &params).unwrap().rank == 1, st);
    }

    #[test]
    fn consistent_subset_is_antitone(
        history in prop::collection::vec((0usize..9, 0u64..3, any::<bool>()), 0..6),
        extra in (0usize..9, 0u64..3, any::<bool>()),
    ) {
        let class = LinearClass::new(Params::new(3, 2).unwrap()).tabulate(DEFAULT_TABLE_BUDGET).unwrap();
        let constraint = |(x, y, eq): (usize, u64, bool)| {
            (x, if eq { Constraint::Equals(y) } else { Constraint::NotEquals(y) })
        };
        let mut h: Vec<_> = history.into_iter().map(constraint).collect();
        let before = consistent_subset(&class, &h);
        h.push(constraint(extra));
        let after = consistent_subset(&class, &h);
        prop_assert!(after.iter().all(|f| before.contains(f)));
    }

    #[test]
    fn buckets_sum_to_set_size(seed in any::<u64>(), u in vector(Params::new(7, 2).unwrap())) {
        let params = Params::new(7, 2).unwrap();
        let set = CoeffSet::random_subset(params, seed).unwrap();
        prop_assert_eq!(bucket_counts(&set, &u).unwrap().total(), set.len() as u64);
    }

    #[test]
    fn balanced_search_results_hold(seed in any::<u64>(), budget in 0u64..8) {
        let params = Params::new(5, 3).unwrap();
        let set = CoeffSet::random_subset(params, seed).unwrap();
        let r = find_balanced_u(&set, budget, seed);
        if r.success {
            let b = bucket_counts(&set, r.u.as_ref().unwrap()).unwrap();
            prop_assert_eq!(Some(&b), r.buckets.as_ref());
            prop_assert!(b.counts().iter().all(|&c| within_bucket_bound(c, set.len() as u64, 5)));
        }
        prop_assert!(r.trials <= budget);
    }
}

#[test]
fn multiple_pairs_never_exceed_cap() {
    for (p, n) in [(3, 2), (5, 2), (5, 3), (7, 2), (11, 2)] {
        let params = Params::new(p, n).unwrap();
        for i in 0..100 {
            let set = CoeffSet::random_subset(params, derive_seed(42, i)).unwrap();
            assert!(count_multiple_pairs(&set) <= (p - 2) * set.len() as u64);
        }
        let full = CoeffSet::full(params).unwrap();
        assert_eq!(count_multiple_pairs(&full), (p - 2) * full.len() as u64);
    }
}

#[test]
fn linear_tabulation_distinct_rows() {
    for (p, n) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let class = LinearClass::new(Params::new(p, n).unwrap())
            .tabulate(DEFAULT_TABLE_BUDGET)
            .unwrap();
        let mut rows = class.rows().to_vec();
        rows.sort();
        rows.dedup();
        assert_eq!(rows.len() as u64, p.pow(n as u32));
    }
}
