use super::*;
use crate::entropy::ExtendedReal;
use crate::LogBase;

fn qubits(n: usize) -> Vec<usize> {
    vec![2; n]
}

#[test]
fn ensemble_parsing() {
    assert_eq!("pure".parse::<Ensemble>().unwrap(), Ensemble::Pure);
    assert_eq!("full-rank".parse::<Ensemble>().unwrap(), Ensemble::FullRank);
    assert_eq!("rank-3".parse::<Ensemble>().unwrap(), Ensemble::Rank(3));
    assert_eq!("rank:2".parse::<Ensemble>().unwrap(), Ensemble::Rank(2));
    for bad in ["rank-0", "rank-x", "mixed", ""] {
        assert!(bad.parse::<Ensemble>().is_err(), "{bad}");
    }
    assert_eq!(Ensemble::Rank(4).to_string(), "rank-4");
}

#[test]
fn seeds_depend_only_on_master_and_index() {
    assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
    assert_eq!(seeds.len(), 1000);
    assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
}

#[test]
fn config_validation() {
    assert!(SweepConfig::new(qubits(3), Ensemble::Pure, 0, 1)
        .validate()
        .is_err());
    assert!(SweepConfig::new(qubits(1), Ensemble::Pure, 1, 1)
        .validate()
        .is_err());
    assert!(SweepConfig::new(vec![2, 0], Ensemble::Pure, 1, 1)
        .validate()
        .is_err());
    assert!(SweepConfig::new(qubits(13), Ensemble::Pure, 1, 1)
        .validate()
        .is_err());
    assert!(SweepConfig::new(qubits(3), Ensemble::Rank(1024), 1, 1)
        .validate()
        .is_err());
    let mut cfg = SweepConfig::new(qubits(3), Ensemble::FullRank, 1, 1);
    cfg.gap_threshold = -1.0;
    assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    assert!(SweepConfig::new(qubits(3), Ensemble::Rank(2), 1, 1)
        .validate()
        .is_ok());
}

#[test]
fn ghz_demo_reports_infinite_j_with_witness() {
    let rec = demo("ghz", &Settings::default()).unwrap();
    let r = &rec.report;
    assert!((r.i_n.finite().unwrap() - 3.0).abs() < 1e-9);
    assert!((r.eq3.finite().unwrap() - 3.0).abs() < 1e-7);
    assert!((r.eq4.finite().unwrap() - 3.0).abs() < 1e-7);
    assert!(r.j_n.is_infinite());
    assert!(rec.j_n_support_violation());
    let witness = &r.j_n_support.as_ref().unwrap().violating_direction;
    assert!(!witness.is_empty());
    let text = rec.render();
    assert!(text.contains("inf (support violation)"), "{text}");
    assert!(text.contains("leaked direction"), "{text}");
}

#[test]
fn product_demo_is_all_zero() {
    let rec = demo("product", &Settings::default()).unwrap();
    let r = &rec.report;
    for o in [&r.i_n, &r.t_n, &r.eq3, &r.eq4, &r.j_n, &r.jtilde_n] {
        assert!(o.finite().unwrap().abs() < 1e-8, "{o:?}");
    }
}

#[test]
fn distinct_product_marginals_give_positive_j() {
    let qubits: Vec<_> = (0..3)
        .map(|i| random_mixed(vec![2], 2, 100 + i).unwrap())
        .collect();
    let s = crate::states::product_state(&qubits).unwrap();
    let r = gap_report(&s, &Settings::default()).unwrap();
    assert!(r.i_n.finite().unwrap().abs() < 1e-9);
    assert!(r.jtilde_n.finite().unwrap().abs() < 1e-8);
    assert!(r.j_n.value().unwrap().finite().is_none_or(|j| j > 1e-3));
}

#[test]
fn bell_demo_matches_mutual_information() {
    let rec = demo("bell", &Settings::default()).unwrap();
    assert!((rec.report.i_n.finite().unwrap() - 2.0).abs() < 1e-9);
    assert!((rec.report.jtilde_n.finite().unwrap() - 2.0).abs() < 1e-8);
    assert!(rec.report.jtilde3.is_none());
}

#[test]
fn mixed_demo_has_finite_gap() {
    let rec = demo("mixed", &Settings::default()).unwrap();
    assert_eq!(rec.jtilde_differs(), Some(true));
    assert!(rec.report.gaps.jtilde_n.finite().unwrap() > 0.0);
}

#[test]
fn unknown_demo() {
    assert!(
        matches!(demo("nope", &Settings::default()), Err(Error::UnknownDemo(n)) if n == "nope")
    );
}

#[test]
fn sweep_is_deterministic_modulo_timings() {
    let cfg = SweepConfig::new(qubits(3), Ensemble::FullRank, 4, 11);
    let a = sweep(&cfg).unwrap().to_jsonl(false);
    let b = sweep(&cfg).unwrap().to_jsonl(false);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 5);
    assert!(!a.contains("timings_ms"));
    assert!(sweep(&cfg).unwrap().to_jsonl(true).contains("timings_ms"));
}

#[test]
fn sweep_record_seeds_reproduce_samples() {
    let cfg = SweepConfig::new(qubits(2), Ensemble::Rank(2), 3, 5);
    let out = sweep(&cfg).unwrap();
    for (i, rec) in out.records.iter().enumerate() {
        assert_eq!(rec.sample, Some(i));
        assert_eq!(rec.seed, Some(derive_seed(5, i as u64)));
        let state = random_mixed(vec![2, 2], 2, rec.seed.unwrap()).unwrap();
        let direct = gap_report(&state, &cfg.settings).unwrap();
        assert_eq!(direct.i_n.finite(), rec.report.i_n.finite());
    }
}

#[test]
fn two_qubit_sweep_flags_nothing() {
    for ensemble in [Ensemble::Pure, Ensemble::FullRank, Ensemble::Rank(2)] {
        let cfg = SweepConfig::new(qubits(2), ensemble, 20, 3);
        let s = sweep(&cfg).unwrap().summary;
        assert_eq!(s.jtilde_flagged, 0, "{ensemble}");
        assert_eq!(s.jtilde_flagged_fraction, 0.0);
    }
}

#[test]
fn pure_three_qubit_sweep_violates_j_support() {
    let cfg = SweepConfig::new(qubits(3), Ensemble::Pure, 10, 9);
    let s = sweep(&cfg).unwrap().summary;
    assert_eq!(s.j_support_violations, 10);
    assert_eq!(s.failed_fields, 0);
    assert!(s.max_equivalence_deviation.unwrap() < 1e-7);
}

#[test]
fn infinity_is_tagged_in_json() {
    let rec = demo("ghz", &Settings::default()).unwrap();
    let v = rec.to_json(false);
    assert_eq!(v["report"]["j_n"]["value"], "inf");
    assert_eq!(v["report"]["j_n"]["infinite"], true);
    assert_eq!(v["report"]["gaps"]["j_n"], "inf");
    assert_eq!(v["flags"]["j_n_support_violation"], true);
    assert_eq!(v["report"]["i_n"]["infinite"], false);
    assert!(v["report"]["i_n"]["value"].is_f64());
}

#[test]
fn summary_is_last_line() {
    let cfg = SweepConfig::new(qubits(2), Ensemble::Pure, 2, 1);
    let text = sweep(&cfg).unwrap().to_jsonl(false);
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["samples"], 2);
    assert_eq!(last["summary"]["ensemble"], "pure");
}

#[test]
fn quantity_parsing() {
    assert_eq!(
        "I".parse::<Quantity>().unwrap(),
        Quantity::DualTotalCorrelation
    );
    assert_eq!("Jtilde".parse::<Quantity>().unwrap(), Quantity::Jtilde);
    assert_eq!(
        "cross:3,1".parse::<Quantity>().unwrap(),
        Quantity::Cross(3, 1)
    );
    assert_eq!("report".parse::<Quantity>().unwrap(), Quantity::Report);
    for bad in ["i", "cross:1", "cross:a,b", "jtilde"] {
        assert!(bad.parse::<Quantity>().is_err(), "{bad}");
    }
}

#[test]
fn scalar_formatting() {
    assert_eq!(
        format_scalar(ExtendedReal::Finite(3.0), LogBase::Two),
        "3.000000000 bits"
    );
    assert_eq!(
        format_scalar(ExtendedReal::Finite(0.5), LogBase::E),
        "0.500000000 nats"
    );
    assert_eq!(
        format_scalar(ExtendedReal::PositiveInfinity, LogBase::Two),
        "inf (support violation)"
    );
}

#[test]
fn compute_on_states() {
    let s = crate::states::ghz(3, 2).unwrap();
    let settings = Settings::default();
    assert_eq!(
        compute_state(&s, Quantity::DualTotalCorrelation, &settings)
            .unwrap()
            .render(),
        "3.000000000 bits"
    );
    assert_eq!(
        compute_state(&s, Quantity::J, &settings).unwrap().render(),
        "inf (support violation)"
    );
    let err = compute_state(&s, Quantity::Cross(1, 4), &settings).unwrap_err();
    assert_eq!(exit_code(&err), 2);
    let err = compute_state(&s, Quantity::J, &settings.with_dim_cap(32)).unwrap_err();
    assert_eq!(exit_code(&err), 3);
}
