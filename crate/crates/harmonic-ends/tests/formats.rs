//! Round trips of the end file format and the run configuration.

use harmonic_ends::config::{GridSpec, Overrides, RunConfig};
use harmonic_ends::EndDefinitionFile;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x6861_726d),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn form_terms() -> impl Strategy<Value = Vec<(i32, f64, f64)>> {
    prop::collection::btree_map(-6i32..6, (-2.0f64..2.0, -2.0f64..2.0), 1..5)
        .prop_map(|m| m.into_iter().map(|(e, (re, im))| (e, re, im)).collect())
}

fn end_file() -> impl Strategy<Value = EndDefinitionFile> {
    prop::collection::vec(form_terms(), 2..5).prop_map(|forms| {
        let text = serde_json::json!({
            "label": "random",
            "dimension": forms.len(),
            "forms": forms.iter().map(|f| serde_json::json!({
                "terms": f.iter().map(|&(exp, re, im)| serde_json::json!({"exp": exp, "re": re, "im": im})).collect::<Vec<_>>()
            })).collect::<Vec<_>>(),
        });
        EndDefinitionFile::parse(&text.to_string()).unwrap()
    })
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn end_file_round_trips(file in end_file()) {
        let end = file.to_end().unwrap();
        let back = EndDefinitionFile::from_end(&end);
        prop_assert_eq!(back.to_end().unwrap(), end.clone());
        let text = serde_json::to_string(&back).unwrap();
        prop_assert_eq!(EndDefinitionFile::parse(&text).unwrap().to_end().unwrap(), end);
    }

    #[test]
    fn grid_radii_span_the_range(r_min in 1e-4f64..0.5, span in 1.0f64..100.0, nr in 2usize..40, nt in 3usize..64) {
        let grid = GridSpec { r_min, r_max: r_min * span, nr, nt };
        let radii = grid.radii();
        prop_assert_eq!(radii.len(), nr);
        prop_assert_eq!(radii[0], grid.r_max);
        prop_assert_eq!(radii[nr - 1], grid.r_min);
        prop_assert!(radii.windows(2).all(|w| w[1] <= w[0]));
        let angles = grid.angles();
        prop_assert_eq!(angles.len(), nt);
        prop_assert!(angles.iter().all(|&t| (0.0..std::f64::consts::TAU).contains(&t)));
    }

    #[test]
    fn config_round_trips_and_overrides_win(
        r0 in 0.01f64..0.9, ratio in 0.1f64..0.9, count in 2usize..20, tol in 1e-12f64..1e-6, order in 2usize..40,
    ) {
        let mut cfg = RunConfig::default();
        cfg.apply(&Overrides { r0: Some(r0), ratio: Some(ratio), count: Some(count), tol: Some(tol), order: Some(order), ..Overrides::default() });
        prop_assert!(cfg.check().is_ok());
        let text = serde_json::to_string(&cfg).unwrap();
        let back = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.ladder.r0, r0);
        prop_assert_eq!(back.quadrature.abs_tol, tol);
        prop_assert_eq!(back.order, order);
    }
}

#[test]
fn partial_config_keeps_defaults() {
    let cfg = RunConfig::parse(r#"{"ladder": {"count": 5}, "quadrature": {"abs_tol": 1e-8}}"#).unwrap();
    let d = RunConfig::default();
    assert_eq!(cfg.ladder.count, 5);
    assert_eq!(cfg.ladder.r0, d.ladder.r0);
    assert_eq!(cfg.quadrature.abs_tol, 1e-8);
    assert_eq!(cfg.quadrature.base_panels, d.quadrature.base_panels);
    assert_eq!(cfg.grid, d.grid);
}

#[test]
fn invalid_configs_are_rejected() {
    for text in [
        r#"{"ladder": {"r0": 0}}"#,
        r#"{"ladder": {"ratio": 1}}"#,
        r#"{"ladder": {"count": 1}}"#,
        r#"{"quadrature": {"abs_tol": 0}}"#,
        r#"{"order": 1}"#,
        r#"{"annulus": {"r_inner": 0.5, "r_outer": 0.2}}"#,
        r#"{"grid": {"nt": 2}}"#,
        r#"{"blowup_radii": []}"#,
    ] {
        let cfg = RunConfig::parse(text).unwrap();
        assert!(cfg.check().is_err(), "{text}");
    }
    assert!(RunConfig::parse(r#"{"ladders": {}}"#).is_err());
}
