use std::collections::BTreeMap;

use covshift::audit::AuditConfig;
use covshift::dataset::{CustomerTable, FeatureDef, FeatureSchema, Value};
use covshift::rng;
use covshift::spatial::{
    audit_divisions, rasterize, skip_summary, Bounds, DivisionLevel, DivisionOutcome, DivisionScore, SkipReason,
};
use rand::Rng;

fn scored(id: &str, lon: f64, lat: f64, score: f64) -> DivisionScore {
    let (s, n) = {
        let e = |v: f64| {
            covshift::dataset::Encoded::from_matrix(
                covshift::dataset::Matrix::column_vector(&[v; 50]),
                vec!["x".into()],
            )
            .unwrap()
        };
        (e(1.0), e(0.0))
    };
    let cfg = AuditConfig {
        k: 2,
        n_models: 10,
        ..AuditConfig::default()
    };
    let mut r = covshift::audit::quantify_shift(&s, &n, &cfg).unwrap();
    r.mcc_max_mean = score;
    DivisionScore {
        division_id: id.into(),
        level: DivisionLevel::Locality,
        n_customers: 20,
        n_selected: 10,
        centroid: Some([lon, lat]),
        outcome: DivisionOutcome::Scored(Box::new(r)),
    }
}

#[test]
fn raster_matches_brute_force_nearest_neighbour() {
    let mut r = rng::stream(21, "spatial-props", 0);
    for case in 0..30 {
        let m = r.random_range(1..12);
        let mut scores: Vec<DivisionScore> = (0..m)
            .map(|i| {
                // coarse grid of centroids so equidistant ties happen
                let lon = r.random_range(0..6) as f64 * 0.5;
                let lat = r.random_range(0..6) as f64 * 0.5;
                scored(&format!("d{i:02}"), lon, lat, r.random_range(-1.0..1.0))
            })
            .collect();
        scores.push(DivisionScore {
            division_id: "a-skipped".into(),
            level: DivisionLevel::Locality,
            n_customers: 3,
            n_selected: 1,
            centroid: Some([1.25, 1.25]),
            outcome: DivisionOutcome::Skipped(SkipReason::TooFewCustomers),
        });
        let bounds = Bounds::new(-0.3, 2.8, -0.2, 2.9).unwrap();
        let (nx, ny) = (r.random_range(1..25), r.random_range(1..25));
        let raster = rasterize(&scores, bounds, nx, ny).unwrap();
        for row in 0..ny {
            for col in 0..nx {
                let (lon, lat) = raster.cell_center(col, row);
                assert!((lon - (-0.3 + (col as f64 + 0.5) * (3.1 / nx as f64))).abs() < 1e-12);
                assert!((lat - (2.9 - (row as f64 + 0.5) * (3.1 / ny as f64))).abs() < 1e-12);
                let mut best: Option<(f64, &str, f64)> = None;
                for s in scores.iter().filter(|s| s.score().is_some()) {
                    let c = s.centroid.unwrap();
                    let d = ((c[0] - lon).powi(2) + (c[1] - lat).powi(2)).sqrt();
                    let better = match best {
                        None => true,
                        Some((bd, bid, _)) => d < bd || (d == bd && s.division_id.as_str() < bid),
                    };
                    if better {
                        best = Some((d, &s.division_id, s.score().unwrap()));
                    }
                }
                let want = best.unwrap().2;
                assert_eq!(raster.get(col, row), Some(want), "case {case} cell ({col},{row})");
            }
        }
    }
}

fn tiny_table(groups: &[(&str, usize, usize)]) -> (CustomerTable, Vec<bool>) {
    let schema = FeatureSchema::new(vec![FeatureDef::location("location")]).unwrap();
    let mut t = CustomerTable::new(schema);
    let mut flags = Vec::new();
    let mut r = rng::stream(3, "tiny", 0);
    let mut id = 0;
    for (g, (name, n, n_sel)) in groups.iter().enumerate() {
        for i in 0..*n {
            let loc = [g as f64 + r.random_range(0.0..0.5), r.random_range(0.0..0.5)];
            t.push(
                format!("c{id}"),
                vec![Value::Location(Some(loc))],
                ["r".into(), "m".into(), name.to_string(), format!("{name}:n")],
            )
            .unwrap();
            flags.push(i < *n_sel);
            id += 1;
        }
    }
    (t, flags)
}

#[test]
fn skip_rules_follow_class_counts() {
    let (table, flags) = tiny_table(&[("few", 7, 3), ("all-in", 100, 100), ("thin", 40, 9), ("ok", 60, 20)]);
    let cfg = AuditConfig {
        k: 10,
        n_models: 5,
        ..AuditConfig::default()
    };
    let scores = audit_divisions(&table, &flags, DivisionLevel::Locality, &["location"], &cfg).unwrap();
    let by_id: BTreeMap<&str, &DivisionScore> = scores.iter().map(|s| (s.division_id.as_str(), s)).collect();
    assert_eq!(by_id["few"].skip_reason(), Some(SkipReason::TooFewCustomers));
    assert_eq!(by_id["all-in"].skip_reason(), Some(SkipReason::SingleClass));
    assert_eq!(by_id["thin"].skip_reason(), Some(SkipReason::SingleClass));
    assert!(by_id["ok"].score().is_some());
    let summary = skip_summary(&scores);
    assert_eq!(summary.get("too_few_customers"), Some(&1));
    assert_eq!(summary.get("single_class"), Some(&2));
}
