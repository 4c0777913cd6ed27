use algofit_core::engine::EngineConfig;
use algofit_core::validation::{
    agreement_report, compare_to_expert, kendall_tau_b, load_rankings, spearman,
};
use algofit_core::{deserialize_project, rank_families, seed_catalog};

const FINANCE: &str = include_str!("fixtures/finance.json");
const RETAIL: &str = include_str!("fixtures/retail.json");
const RANKINGS: &str = include_str!("fixtures/expert_rankings.json");

fn s(items: &[&str]) -> Vec<String> {
    items.iter().map(|x| x.to_string()).collect()
}

#[test]
fn tau_b_reference_cases() {
    let r = s(&["a", "b", "c", "d", "e"]);
    let mut rev = r.clone();
    rev.reverse();
    assert_eq!(kendall_tau_b(&r, &r).unwrap(), 1.0);
    assert_eq!(kendall_tau_b(&r, &rev).unwrap(), -1.0);
    let t = kendall_tau_b(&s(&["a", "b", "c", "d"]), &s(&["a", "c", "b", "d"])).unwrap();
    // 5 concordant, 1 discordant over 6 pairs.
    assert!((t - 2.0 / 3.0).abs() <= 1e-12);
    assert!(
        (spearman(&s(&["a", "b", "c", "d"]), &s(&["a", "c", "b", "d"])).unwrap() - 0.8).abs()
            <= 1e-12
    );
}

#[test]
fn symmetric() {
    let a = s(&["p", "q", "r", "s", "t"]);
    let b = s(&["q", "p", "t", "r", "s"]);
    assert_eq!(
        kendall_tau_b(&a, &b).unwrap(),
        kendall_tau_b(&b, &a).unwrap()
    );
}

#[test]
fn fixture_report() {
    let problems = [
        deserialize_project(FINANCE.as_bytes()).unwrap(),
        deserialize_project(RETAIL.as_bytes()).unwrap(),
    ];
    let cfg = EngineConfig::default();
    let rankings = load_rankings(RANKINGS.as_bytes()).unwrap();
    let report = agreement_report(&problems, &rankings, &seed_catalog(), &cfg).unwrap();
    // Reference values from scipy.stats.kendalltau / spearmanr on expert
    // positions against negated engine scores.
    let want = [
        (
            "finance",
            "analyst-a",
            0.9128709291752769,
            0.9486832980505139,
        ),
        (
            "finance",
            "analyst-b",
            0.9128709291752769,
            0.9486832980505139,
        ),
        ("retail", "analyst-a", 0.0, 0.1),
    ];
    assert_eq!(report.comparisons.len(), want.len());
    for (c, (problem, rater, tau, rho)) in report.comparisons.iter().zip(want) {
        assert_eq!(
            (c.problem_id.as_str(), c.rater_id.as_str()),
            (problem, rater)
        );
        assert!(
            (c.tau_b - tau).abs() <= 1e-12,
            "{problem}/{rater}: {}",
            c.tau_b
        );
        assert!(
            (c.spearman - rho).abs() <= 1e-12,
            "{problem}/{rater}: {}",
            c.spearman
        );
    }
    assert!((report.mean_tau_b["finance"] - 0.9128709291752769).abs() <= 1e-12);
    // The two finance analysts share two families, ranked in opposite order.
    assert_eq!(report.inter_rater.len(), 1);
    assert_eq!(report.inter_rater[0].common, 2);
    assert_eq!(report.inter_rater[0].tau_b, Some(-1.0));
}

#[test]
fn expert_list_equal_to_engine_top() {
    let pb = deserialize_project(RETAIL.as_bytes()).unwrap();
    let cfg = EngineConfig::default();
    let top: Vec<String> = rank_families(&pb, &seed_catalog(), &cfg)
        .unwrap()
        .top(5)
        .ranked
        .into_iter()
        .map(|b| b.family_id)
        .collect();
    let mut expert = algofit_core::validation::ExpertRanking {
        problem_id: "retail".into(),
        rater_id: "r".into(),
        ranked_family_ids: top,
    };
    let c = compare_to_expert(&pb, &expert, &seed_catalog(), &cfg).unwrap();
    assert_eq!(c.tau_b, 1.0);
    expert.ranked_family_ids.reverse();
    let c = compare_to_expert(&pb, &expert, &seed_catalog(), &cfg).unwrap();
    assert_eq!(c.tau_b, -1.0);
}
