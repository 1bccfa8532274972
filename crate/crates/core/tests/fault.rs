use qca_core::fault::*;
use qca_core::layout::*;
use qca_core::truth::TruthSpec;

fn and3() -> TruthSpec {
    TruthSpec::from_fn(&["A", "B", "C"], &["out"], |r| vec![r[0] && r[1] && r[2]]).unwrap()
}

fn short_sweep(layout: &Layout, label: &str, max: f64) -> FaultReport {
    let cfg = FaultSweepConfig { max_nm: max, ..FaultSweepConfig::new(label, and3()) };
    sweep::<f64>(layout, &cfg).unwrap()
}

#[test]
fn displace_examples() {
    let g = and3_gate(&Maj5Template::default(), 1, 2).unwrap();
    let a = g.find_label("A").unwrap();
    match displace(&g, "A", 0.0, -3.0).unwrap() {
        Displaced::Moved(l) => {
            assert_eq!(l.cells[a].y, g.cells[a].y - 3.0);
            l.validate().unwrap();
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(displace(&g, "A", 0.0, 0.0).unwrap(), Displaced::Moved(g.clone()));
    // B sits in the corner next to the stem device cell
    let corner = and3_gate(&Maj5Template::default(), 0, 1).unwrap();
    assert!(matches!(displace(&corner, "B", 10.0, 0.0).unwrap(), Displaced::NotPossible { .. }));
    assert!(displace(&g, "Z", 1.0, 0.0).is_err());
}

#[test]
fn not_possible_is_mirror_symmetric() {
    let corner = and3_gate(&Maj5Template::default(), 0, 1).unwrap();
    let m = corner.mirrored(0.0);
    for d in 0..=20 {
        let d = d as f64;
        for (dx, dy) in [(d, 0.0), (-d, 0.0), (0.0, d), (0.0, -d)] {
            let here = matches!(displace(&corner, "B", dx, dy).unwrap(), Displaced::NotPossible { .. });
            let there = matches!(displace(&m, "B", -dx, dy).unwrap(), Displaced::NotPossible { .. });
            assert_eq!(here, there, "({dx}, {dy})");
        }
    }
}

#[test]
fn symmetric_gate_mirrors_a_onto_c() {
    let g = and3_gate(&Maj5Template::default(), 1, 2).unwrap();
    let a = short_sweep(&g, "A", 4.0);
    let c = short_sweep(&g, "C", 4.0);
    assert!(mirror_check(&a, &c).unwrap());
    assert!(mirror_check(&a, &a.clone()).unwrap() == mirror_check(&c, &c.clone()).unwrap());
    for r in [&a, &c] {
        for d in &r.directions {
            assert_eq!(d.points[0], (0.0, PointVerdict::Normal));
            assert!(d.max_normal_nm <= r.max_nm);
        }
    }
}

#[test]
fn asymmetric_gate_breaks_mirror() {
    let g = and3_gate(&Maj5Template::default(), 0, 1).unwrap();
    let a = short_sweep(&g, "A", 6.0);
    let c = short_sweep(&g, "C", 6.0);
    assert!(!mirror_check(&a, &c).unwrap());
}

#[test]
fn mirror_check_rejects_mismatched_directions() {
    let g = and3_gate(&Maj5Template::default(), 1, 2).unwrap();
    let cfg = FaultSweepConfig {
        max_nm: 2.0,
        directions: vec![Direction::N, Direction::E],
        ..FaultSweepConfig::new("A", and3())
    };
    let a = sweep::<f64>(&g, &cfg).unwrap();
    let full = short_sweep(&g, "C", 2.0);
    assert!(mirror_check(&a, &full).is_err());
}

#[test]
fn failing_baseline_aborts() {
    let g = and3_gate(&Maj5Template::default(), 1, 2).unwrap();
    let or3 = TruthSpec::from_fn(&["A", "B", "C"], &["out"], |r| vec![r.iter().any(|&x| x)]).unwrap();
    let cfg = FaultSweepConfig::new("A", or3);
    assert!(matches!(sweep::<f64>(&g, &cfg), Err(qca_core::Error::FaultSweep(_))));
}

#[test]
fn report_exports() {
    let g = and3_gate(&Maj5Template::default(), 1, 2).unwrap();
    let cfg = FaultSweepConfig { max_nm: 2.0, directions: vec![Direction::W], ..FaultSweepConfig::new("A", and3()) };
    let r = sweep::<f64>(&g, &cfg).unwrap();
    let csv = r.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("label,direction,d_nm,verdict"));
    assert_eq!(lines.next(), Some("A,W,0,normal"));
    assert_eq!(csv.lines().count(), 4);
    let v: serde_json::Value = serde_json::from_str(&r.summary_json().unwrap()).unwrap();
    assert_eq!(v["label"], "A");
    assert_eq!(v["directions"][0]["direction"], "W");
}
