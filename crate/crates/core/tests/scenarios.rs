//! Scenario registry behavior through the library interface.

use exact_uncertainty::cli_report::{
    emit_report, parse_report, run_scenario, verify_all, FieldData, Format, ReportDocument, ScenarioSpec, SCENARIOS,
};
use exact_uncertainty::relations::Status;
use exact_uncertainty::Error;

fn check<'a>(r: &'a exact_uncertainty::cli_report::Report, tag: &str) -> Vec<&'a exact_uncertainty::relations::RelationCheck> {
    r.checks.iter().filter(|c| c.relation == tag).collect()
}

#[test]
fn every_scenario_names_its_relations() {
    for sc in SCENARIOS {
        let r = run_scenario(&ScenarioSpec::new(sc.name)).unwrap();
        assert!(!r.checks.is_empty(), "{}", sc.name);
        assert!(r.checks.iter().all(|c| !c.relation.is_empty()), "{}", sc.name);
    }
}

#[test]
fn verify_all_has_no_failures() {
    let reports = verify_all(None, 1.0).unwrap();
    assert_eq!(reports.len(), SCENARIOS.len());
    for r in &reports {
        assert!(r.passed(), "{}: {:?}", r.summary(), r.failures().map(|c| c.to_string()).collect::<Vec<_>>());
    }
}

#[test]
fn gaussian_family_draws_all_pass() {
    let r = run_scenario(&ScenarioSpec::new("gaussian-family").with_seed(7)).unwrap();
    let exact = check(&r, "exact-position-momentum");
    assert_eq!(exact.len(), 20);
    assert!(exact.iter().all(|c| c.status == Status::Pass));
}

#[test]
fn epr_reports_minimum_uncertainty_and_collapse() {
    let r = run_scenario(
        &ScenarioSpec::new("epr")
            .with_param("sigma", 0.1)
            .with_param("tau", 10.0)
            .with_param("separation", 1.0)
            .with_param("momentum", 2.0),
    )
    .unwrap();
    let minimum = check(&r, "epr-minimum-uncertainty");
    assert_eq!(minimum.len(), 4);
    assert!(minimum.iter().all(|c| c.passed()));
    let collapse = check(&r, "epr-collapse");
    assert_eq!(collapse.len(), 3);
    let expected = [2.0 * 100.0 / 100.01, 1.0, 0.02 / 100.01];
    for (c, want) in collapse.iter().zip(expected) {
        assert!((c.rhs - want).abs() < 1e-12);
        assert!(c.passed(), "{c}");
    }
}

#[test]
fn mub_qubit_basis_state_sums_to_two() {
    let r = run_scenario(&ScenarioSpec::new("mub").with_param("d", 2.0).with_param("state", 0.0)).unwrap();
    let sums = check(&r, "collision-lengths");
    assert!(sums.iter().all(|c| c.passed()));
    assert!((sums[0].lhs - 2.0).abs() < 1e-12);
}

#[test]
fn number_eigenstate_is_indeterminate_and_not_a_failure() {
    let r = run_scenario(&ScenarioSpec::new("fock")).unwrap();
    assert_eq!(r.count(Status::Indeterminate), 1);
    assert!(r.passed());
}

#[test]
fn divergence_is_propagated() {
    let r = run_scenario(&ScenarioSpec::new("divergence")).unwrap();
    let exact = check(&r, "exact-position-momentum");
    assert_eq!(exact.len(), 4);
    assert!(exact.iter().all(|c| c.status == Status::Divergent));
    assert!(r.passed());
}

#[test]
fn reports_are_deterministic() {
    let spec = ScenarioSpec::new("wigner-equivalence").with_param("states", 2.0).with_seed(3);
    let a = run_scenario(&spec).unwrap();
    let b = run_scenario(&spec).unwrap();
    // Ratios against a zero rhs are NaN, so compare the debug form.
    assert_eq!(format!("{:?}", a.checks), format!("{:?}", b.checks));
    assert_eq!(a.fields, b.fields);
    let none = Default::default();
    assert_eq!(ReportDocument::new(&a, &none).to_json().unwrap(), ReportDocument::new(&b, &none).to_json().unwrap());
}

#[test]
fn seed_changes_random_draws() {
    let a = run_scenario(&ScenarioSpec::new("generalized-ur").with_param("draws", 3.0).with_seed(1)).unwrap();
    let b = run_scenario(&ScenarioSpec::new("generalized-ur").with_param("draws", 3.0).with_seed(2)).unwrap();
    assert_ne!(a.checks, b.checks);
}

#[test]
fn unknown_scenario_and_parameters_are_rejected() {
    assert!(matches!(run_scenario(&ScenarioSpec::new("nope")), Err(Error::UnknownScenario(_))));
    assert!(matches!(
        run_scenario(&ScenarioSpec::new("epr").with_param("width", 3.0)),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        run_scenario(&ScenarioSpec::new("mub").with_param("d", 2.5)),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(run_scenario(&ScenarioSpec::new("mub").with_param("d", 4.0)), Err(Error::Unsupported(_))));
}

#[test]
fn tolerance_scale_only_moves_pass_and_fail() {
    let tight = run_scenario(&ScenarioSpec::new("divergence").with_tol_scale(1e-30)).unwrap();
    assert_eq!(tight.count(Status::Divergent), 4);
    let strict = run_scenario(&ScenarioSpec::new("gaussian-family").with_param("draws", 2.0).with_tol_scale(1e-12)).unwrap();
    assert!(!strict.passed());
}

#[test]
fn chirped_gaussian_field_export_is_monotone() {
    let r = run_scenario(&ScenarioSpec::new("gaussian-family").with_param("draws", 1.0).with_grid_n(1024)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_report(&r, Format::Csv, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("gaussian-family.classical-momentum.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,value"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (x, v) = l.split_once(',').unwrap();
            (x.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert!(rows.len() > 100);
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0));
    let FieldData::Line { x, values, .. } = &r.fields[0] else { panic!("line field expected") };
    assert_eq!(rows.len(), x.len());
    for ((a, b), (x, v)) in rows.iter().zip(x.iter().zip(values)) {
        assert_eq!((a, b), (x, v));
    }
    // A chirped Gaussian has an affine classical momentum.
    let mut slopes: Vec<f64> = rows.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    slopes.sort_by(f64::total_cmp);
    let slope = slopes[slopes.len() / 2];
    assert!(slopes.iter().all(|s| (s / slope - 1.0).abs() < 2e-3));
}

#[test]
fn json_report_round_trips() {
    let r = run_scenario(&ScenarioSpec::new("harmonic").with_param("n_max", 2.0)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("harmonic.json");
    emit_report(&r, Format::Json, &out).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    let doc = parse_report(&text).unwrap();
    assert_eq!(doc.to_json().unwrap(), text);
    assert_eq!(doc.checks.len(), r.checks.len());
    for f in &doc.fields {
        assert!(std::path::Path::new(f.path.as_ref().unwrap()).exists());
    }
}
