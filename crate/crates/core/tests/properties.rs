//! Property tests over seeded random states.

mod common;

use multicorr::correlations::{
    dtc_relent_sum, dtc_relent_tensor, dual_total_correlation, gap_report, jtilde3_decomposition,
    jtilde_n, Gap,
};
use multicorr::entropy::{
    cross_log_trace, eigenvalues, relative_entropy, von_neumann_entropy, ExtendedReal,
};
use multicorr::lab::{sweep, Ensemble, SweepConfig};
use multicorr::states::{
    apply_local_channel, make_state, marginal, maximally_mixed, partial_trace, permute,
    random_mixed, random_pure, replicate, tensor, KrausChannel, MultipartiteState,
};
use multicorr::{ComplexMatrix, LogBase, Settings};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn dims_strategy(max_parties: usize, max_dim: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2..=3usize, 1..=max_parties).prop_filter("total dimension", move |d| {
        d.iter().product::<usize>() <= max_dim
    })
}

/// A state on `dims` of any rank from 1 to full.
fn state_on(dims: Vec<usize>) -> impl Strategy<Value = MultipartiteState> {
    let dim: usize = dims.iter().product();
    (1..=dim, any::<u64>())
        .prop_map(move |(rank, seed)| random_mixed(dims.clone(), rank, seed).unwrap())
}

fn any_state(max_parties: usize, max_dim: usize) -> impl Strategy<Value = MultipartiteState> {
    dims_strategy(max_parties, max_dim).prop_flat_map(state_on)
}

fn full_rank(dims: Vec<usize>) -> impl Strategy<Value = MultipartiteState> {
    let dim = dims.iter().product();
    any::<u64>().prop_map(move |seed| random_mixed(dims.clone(), dim, seed).unwrap())
}

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    common::max_abs(&(common::dense(a) - common::dense(b)))
}

fn sorted_eigs(s: &MultipartiteState) -> Vec<f64> {
    common::eigvals(&common::state_dense(s))
}

fn three_qubit_state() -> impl Strategy<Value = MultipartiteState> {
    prop_oneof![
        any::<u64>().prop_map(|seed| random_pure(vec![2, 2, 2], seed).unwrap()),
        state_on(vec![2, 2, 2]),
    ]
}

fn small_state() -> impl Strategy<Value = MultipartiteState> {
    prop_oneof![
        state_on(vec![2, 2]),
        state_on(vec![2, 3]),
        three_qubit_state()
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_trace_undoes_tensor(a in any_state(2, 9), b in any_state(2, 6)) {
        let joint = tensor(&a, &b);
        let b_parties: Vec<usize> = (a.n_parties() + 1..=joint.n_parties()).collect();
        let back = partial_trace(&joint, &b_parties).unwrap();
        prop_assert!(max_diff(back.matrix(), a.matrix()) <= 1e-12);
    }

    #[test]
    fn marginals_are_valid_states(
        (s, keep) in any_state(4, 36).prop_flat_map(|s| {
            let n = s.n_parties();
            (Just(s), subsequence((1..=n).collect::<Vec<_>>(), 1..=n).prop_shuffle())
        })
    ) {
        let m = marginal(&s, &keep).unwrap();
        prop_assert!((m.trace().re - 1.0).abs() <= 1e-12);
        let revalidated = make_state(m.matrix().to_owned(), m.dims().to_vec(), None);
        prop_assert!(revalidated.is_ok(), "{:?}", revalidated.err());
    }

    #[test]
    fn permutation_preserves_spectrum(
        (s, perm) in any_state(4, 36).prop_flat_map(|s| {
            let n = s.n_parties();
            (Just(s), Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let p = permute(&s, &perm).unwrap();
        for (x, y) in sorted_eigs(&s).iter().zip(sorted_eigs(&p)) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn replicate_spectrum_is_products(s in any_state(2, 4), m in 2..=3usize) {
        prop_assume!(s.dim().pow(m as u32) <= 64);
        let r = replicate(&s, m, 4096).unwrap();
        let base = sorted_eigs(&s);
        let mut expected = vec![1.0];
        for _ in 0..m {
            expected = expected.iter().flat_map(|x| base.iter().map(move |y| x * y)).collect();
        }
        expected.sort_by(f64::total_cmp);
        for (x, y) in expected.iter().zip(sorted_eigs(&r)) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn local_channels_keep_states_valid(s in any_state(3, 18), seed in any::<u64>(), kraus in 1..=4usize, pick in any::<prop::sample::Index>()) {
        let party = 1 + pick.index(s.n_parties());
        let ch = KrausChannel::random(s.dims()[party - 1], kraus, seed).unwrap();
        let out = apply_local_channel(&s, party, &ch).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(sorted_eigs(&out)[0] >= -1e-10);
    }

    #[test]
    fn full_rank_states_have_full_support(s in dims_strategy(3, 27).prop_flat_map(full_rank)) {
        prop_assert!(sorted_eigs(&s)[0] > 0.0);
    }

    #[test]
    fn klein_inequality(tau in state_on(vec![2, 2]), sigma in state_on(vec![2, 2])) {
        let settings = Settings::default();
        if let ExtendedReal::Finite(v) = relative_entropy(&tau, &sigma, &settings).unwrap() {
            prop_assert!(v >= -1e-8);
            if max_diff(tau.matrix(), sigma.matrix()) > 1e-7 {
                prop_assert!(v > 0.0);
            }
        }
        let same = relative_entropy(&tau, &tau, &settings).unwrap().finite().unwrap();
        prop_assert!(same.abs() <= 1e-9);
    }

    #[test]
    fn relative_entropy_is_additive(
        t1 in state_on(vec![2]), s1 in state_on(vec![2]),
        t2 in state_on(vec![3]), s2 in state_on(vec![3]),
    ) {
        let settings = Settings::default();
        let a = relative_entropy(&t1, &s1, &settings).unwrap();
        let b = relative_entropy(&t2, &s2, &settings).unwrap();
        let joint = relative_entropy(&tensor(&t1, &t2), &tensor(&s1, &s2), &settings).unwrap();
        match (a + b, joint) {
            (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => prop_assert!((x - y).abs() <= 1e-8),
            (x, y) => prop_assert!(x.is_infinite() && y.is_infinite(), "{x} vs {y}"),
        }
    }

    #[test]
    fn entropy_from_distance_to_maximally_mixed(s in any_state(3, 27)) {
        let mixed = maximally_mixed(s.dims().to_vec()).unwrap();
        let d = relative_entropy(&s, &mixed, &Settings::default()).unwrap().finite().unwrap();
        let entropy = von_neumann_entropy(&s, LogBase::Two).unwrap();
        prop_assert!((entropy - ((s.dim() as f64).log2() - d)).abs() <= 1e-9);
    }

    #[test]
    fn cross_log_trace_minus_entropy_is_relative_entropy(a in state_on(vec![2, 3]), b in full_rank(vec![2, 3])) {
        let settings = Settings::default();
        let cross = cross_log_trace(&a, &b, &settings).unwrap().finite().unwrap();
        let rel = relative_entropy(&a, &b, &settings).unwrap().finite().unwrap();
        let entropy = von_neumann_entropy(&a, LogBase::Two).unwrap();
        prop_assert!((cross - entropy - rel).abs() <= 1e-8);
    }

    #[test]
    fn entropy_is_unitarily_invariant(s in any_state(3, 12), seed in any::<u64>()) {
        let u = KrausChannel::random(s.dim(), 1, seed).unwrap().kraus()[0].to_owned();
        let rotated = make_state(&u * s.matrix() * u.adjoint(), s.dims().to_vec(), None).unwrap();
        let before = von_neumann_entropy(&s, LogBase::Two).unwrap();
        let after = von_neumann_entropy(&rotated, LogBase::Two).unwrap();
        prop_assert!((before - after).abs() <= 1e-9);
        prop_assert!(eigenvalues(rotated.matrix()).unwrap().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn two_party_jtilde_is_mutual_information(s in any_state(2, 9).prop_filter("two parties", |s| s.n_parties() == 2)) {
        let settings = Settings::default();
        let i2 = dual_total_correlation(&s, &settings).unwrap().value;
        match jtilde_n(&s, &settings).unwrap() {
            ExtendedReal::Finite(j) => prop_assert!((j - i2).abs() <= 1e-8, "{j} vs {i2}"),
            ExtendedReal::PositiveInfinity => prop_assert!(false, "J~_2 infinite"),
        }
    }

    #[test]
    fn dual_total_correlation_is_nonnegative(s in small_state()) {
        prop_assert!(dual_total_correlation(&s, &Settings::default()).unwrap().value >= -1e-8);
    }

    #[test]
    fn local_channels_do_not_increase_dtc(s in three_qubit_state(), seed in any::<u64>(), kraus in 1..=4usize, party in 1..=3usize) {
        let settings = Settings::default();
        let ch = KrausChannel::random(2, kraus, seed).unwrap();
        let out = apply_local_channel(&s, party, &ch).unwrap();
        let before = dual_total_correlation(&s, &settings).unwrap().value;
        let after = dual_total_correlation(&out, &settings).unwrap().value;
        prop_assert!(after <= before + 1e-7, "{before} -> {after}");
    }

    #[test]
    fn decomposition_matches_jtilde(s in three_qubit_state()) {
        let settings = Settings::default();
        let terms = jtilde3_decomposition(&s, &settings).unwrap();
        match (terms.total, jtilde_n(&s, &settings).unwrap()) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => prop_assert!((a - b).abs() <= 1e-7),
            (a, b) => prop_assert!(a.is_infinite() && b.is_infinite(), "{a} vs {b}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relent_forms_equal_dtc(s in prop_oneof![small_state(), state_on(vec![2, 2, 2])]) {
        let settings = Settings::default();
        let i = dual_total_correlation(&s, &settings).unwrap().value;
        let sum = dtc_relent_sum(&s, &settings).unwrap().finite().unwrap();
        let tensor = dtc_relent_tensor(&s, &settings).unwrap().finite().unwrap();
        prop_assert!((sum - i).abs() <= 1e-7, "Eq3 {sum} vs {i}");
        prop_assert!((tensor - i).abs() <= 1e-7, "Eq4 {tensor} vs {i}");
    }

    #[test]
    fn gap_reports_never_subtract_infinities(s in small_state()) {
        let r = gap_report(&s, &Settings::default()).unwrap();
        for (value, gap) in [(&r.j_n, r.gaps.j_n), (&r.jtilde_n, r.gaps.jtilde_n), (&r.eq3, r.gaps.eq3), (&r.eq4, r.gaps.eq4)] {
            prop_assert!(!matches!(gap, Gap::Undefined));
            prop_assert_eq!(value.is_infinite(), matches!(gap, Gap::Infinite));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn sweep_records_agree_on_equivalent_forms(
        seed in any::<u64>(),
        ensemble in prop_oneof![Just(Ensemble::Pure), Just(Ensemble::FullRank), (1..=4usize).prop_map(Ensemble::Rank)],
        dims in prop_oneof![Just(vec![2, 2]), Just(vec![2, 3]), Just(vec![2, 2, 2])],
    ) {
        let cfg = SweepConfig::new(dims, ensemble, 3, seed);
        let out = sweep(&cfg).unwrap();
        for rec in &out.records {
            prop_assert!(rec.report.equivalence_deviation().unwrap() <= 1e-7);
        }
        prop_assert!(!out.to_jsonl(false).contains("undefined"));
    }
}
