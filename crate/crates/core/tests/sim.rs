use qca_core::adders::RippleKind;
use qca_core::layout::*;
use qca_core::sim::*;
use qca_core::truth::TruthSpec;

const E_CHARGE: f64 = 1.602_176_634e-19;
const EPS0: f64 = 8.854_187_812_8e-12;

/// Point-charge energy of two cells at polarizations `pi`, `pj`, each dot
/// carrying `+-e/2 * P`, summed pair by pair in SI units.
fn pair_energy(a: &Cell, b: &Cell, pi: f64, pj: f64, cfg: &SimConfig) -> f64 {
    let dots = |c: &Cell, p: f64| -> Vec<(f64, f64, f64, f64)> {
        let z = c.layer as f64 * cfg.layer_separation_nm;
        let o = cfg.dot_offset_nm;
        let q = E_CHARGE / 2.0 * p;
        let pos: [(f64, f64, f64); 4] = match c.rotation {
            Rotation::Deg0 => [(o, -o, q), (-o, o, q), (-o, -o, -q), (o, o, -q)],
            Rotation::Deg45 => {
                let r = o * 2f64.sqrt();
                [(0.0, -r, q), (0.0, r, q), (-r, 0.0, -q), (r, 0.0, -q)]
            }
        };
        pos.iter().map(|&(x, y, q)| (c.x + x, c.y + y, z, q)).collect()
    };
    let k = 1.0 / (4.0 * std::f64::consts::PI * EPS0 * cfg.relative_permittivity);
    let mut e = 0.0;
    for (xa, ya, za, qa) in dots(a, pi) {
        for (xb, yb, zb, qb) in dots(b, pj) {
            let d = ((xa - xb).powi(2) + (ya - yb).powi(2) + (za - zb).powi(2)).sqrt() * 1e-9;
            e += k * qa * qb / d;
        }
    }
    e
}

fn kink_oracle(a: &Cell, b: &Cell, cfg: &SimConfig) -> f64 {
    let center = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    if center > cfg.radius_of_effect_nm {
        return 0.0;
    }
    pair_energy(a, b, 1.0, -1.0, cfg) - pair_energy(a, b, 1.0, 1.0, cfg)
}

fn cfg() -> SimConfig {
    SimConfig::default()
}

fn identity(inputs: &[&str], outputs: &[&str]) -> TruthSpec {
    TruthSpec::from_fn(inputs, outputs, |r| vec![r[0]; outputs.len()]).unwrap()
}

fn verify(layout: &Layout, spec: &TruthSpec) -> LayoutVerdict {
    verify_layout::<f64>(layout, spec, &cfg(), ClockScheme::Landauer).unwrap()
}

#[test]
fn kink_energy_matches_point_charge_sum() {
    let cfg = cfg();
    let o = Cell::new(0.0, 0.0, 0);
    let cases = [
        Cell::new(20.0, 0.0, 0),
        Cell::new(20.0, 20.0, 0),
        Cell::new(40.0, 0.0, 0),
        Cell::new(40.0, 20.0, 0),
        Cell::new(60.0, 0.0, 0),
        Cell::new(0.0, 0.0, 0).on_layer(1),
        Cell::new(0.0, 0.0, 0).on_layer(2),
        Cell::new(20.0, 0.0, 0).on_layer(1),
        Cell::new(20.0, 0.0, 0).rotated(),
        Cell::new(0.0, 20.0, 0).rotated(),
        Cell::new(70.0, 0.0, 0),
    ];
    for c in &cases {
        let got: f64 = kink_energy(&o, c, &cfg).unwrap();
        let want = kink_oracle(&o, c, &cfg);
        assert!((got - want).abs() <= 1e-9 * want.abs() + 1e-30, "{c:?}: {got} vs {want}");
    }
    let side: f64 = kink_energy(&o, &cases[0], &cfg).unwrap();
    assert!((side - 2.377e-22).abs() < 1e-25, "{side}");
    let stacked: f64 = kink_energy(&o, &cases[5], &cfg).unwrap();
    assert!(stacked < 0.0);
}

#[test]
fn kink_energy_symmetric_and_decaying() {
    let cfg = cfg();
    let o = Cell::new(0.0, 0.0, 0);
    let mut last = f64::INFINITY;
    for d in [18.0, 20.0, 25.0, 30.0, 40.0, 50.0, 60.0, 65.0] {
        let c = Cell::new(d, 0.0, 0);
        let e: f64 = kink_energy(&o, &c, &cfg).unwrap();
        let back: f64 = kink_energy(&c, &o, &cfg).unwrap();
        assert!((e - back).abs() <= 1e-12 * e.abs());
        assert!(e > 0.0 && e < last, "{d}");
        last = e;
    }
    let far: f64 = kink_energy(&o, &Cell::new(70.0, 0.0, 0), &cfg).unwrap();
    assert_eq!(far, 0.0);
}

#[test]
fn straight_wire_propagates() {
    let w = gen_wire((0.0, 0.0), Direction::E, 5, Rotation::Deg0, &[0]).unwrap();
    let v = verify(&w, &identity(&["in"], &["out"]));
    assert!(v.passed, "{v:?}");
    let trace: SimTrace<f64> =
        simulate(&w, &Stimulus::new(vec!["in".into()], vec![vec![true]]), &cfg(), ClockScheme::Landauer).unwrap();
    let out = trace.series("out").unwrap();
    assert!(out[trace.readout_sample(0, 0)] > 0.9);
}

#[test]
fn rotated_wire_inverts_at_even_cells() {
    let n = 6;
    let mut w = gen_wire((0.0, 0.0), Direction::E, n, Rotation::Deg45, &[0]).unwrap();
    let mut names = Vec::new();
    for (k, c) in w.cells.iter_mut().enumerate().skip(1) {
        c.kind = CellKind::Output;
        c.label = Some(format!("c{}", k + 1));
        names.push(format!("c{}", k + 1));
    }
    let outs: Vec<&str> = names.iter().map(String::as_str).collect();
    // cell k (counting the input as cell 1) carries the input inverted when k is even
    let spec = TruthSpec::from_fn(&["in"], &outs, |r| (2..=n).map(|k| r[0] ^ (k % 2 == 0)).collect()).unwrap();
    let v = verify(&w, &spec);
    assert!(v.passed, "{v:?}");
}

#[test]
fn inverter_inverts() {
    let l = gen_inverter((0.0, 0.0), 0);
    let spec = TruthSpec::from_fn(&["in"], &["out"], |r| vec![!r[0]]).unwrap();
    assert!(verify(&l, &spec).passed);
}

#[test]
fn maj3_all_vectors_and_specializations() {
    let l = gen_maj3((0.0, 0.0), 0);
    let spec = TruthSpec::from_fn(&["a", "b", "c"], &["out"], |r| vec![r.iter().filter(|&&x| x).count() >= 2]).unwrap();
    assert!(verify(&l, &spec).passed);
    for (p, or) in [(1.0, true), (-1.0, false)] {
        let mut g = l.clone();
        let a = g.find_label("a").unwrap();
        let (x, y) = (g.cells[a].x, g.cells[a].y);
        g.cells[a] = Cell::fixed(x, y, p);
        let spec = TruthSpec::from_fn(&["b", "c"], &["out"], |r| vec![if or { r[0] | r[1] } else { r[0] & r[1] }]).unwrap();
        assert!(verify(&g, &spec).passed, "fixed {p}");
    }
}

#[test]
fn maj5_all_vectors_and_specializations() {
    let t = Maj5Template::default();
    let l = gen_maj5(&t, (0.0, 0.0), 0).unwrap();
    let spec = TruthSpec::from_fn(&MAJ5_INPUT_LABELS, &["out"], |r| vec![r.iter().filter(|&&x| x).count() >= 3]).unwrap();
    let v = verify(&l, &spec);
    assert!(v.passed, "{v:?}");
    for p in [1.0, -1.0] {
        let mut g = l.clone();
        for k in [0, 4] {
            let (x, y) = (g.cells[k].x, g.cells[k].y);
            g.cells[k] = Cell::fixed(x, y, p);
        }
        let spec = TruthSpec::from_fn(&["b", "c", "d"], &["out"], |r| {
            vec![if p > 0.0 { r.iter().any(|&x| x) } else { r.iter().all(|&x| x) }]
        })
        .unwrap();
        assert!(verify(&g, &spec).passed, "fixed {p}");
    }
}

#[test]
fn multilayer_crossing_keeps_signals_apart() {
    let l = gen_multilayer_crossing(0);
    let spec = TruthSpec::from_fn(&["h_in", "v_in"], &["h_out", "v_out"], |r| vec![r[0], r[1]]).unwrap();
    assert!(verify(&l, &spec).passed);
}

fn adder_spec() -> TruthSpec {
    TruthSpec::from_fn(&["a", "b", "c_in"], &["Cout", "Sum", "Gar1", "Gar2"], |r| {
        let n = r.iter().filter(|&&x| x).count();
        vec![n >= 2, n % 2 == 1, r[0], r[2]]
    })
    .unwrap()
}

#[test]
fn single_stage_layouts_compute_their_tables() {
    let add = adder_spec();
    for k in [CircuitKind::Fa, CircuitKind::Fa5] {
        let v = verify(&gen_circuit(k).unwrap(), &add);
        assert!(v.passed, "{k}: {v:?}");
    }
    let sub = TruthSpec::from_fn(&["a", "b", "c_in"], &["Cout", "Sum/Sub", "Bout", "Gar1"], |r| {
        let n = r.iter().filter(|&&x| x).count();
        vec![n >= 2, n % 2 == 1, (!r[0] as u8 + r[1] as u8 + r[2] as u8) >= 2, r[2]]
    })
    .unwrap();
    let v = verify(&gen_circuit(CircuitKind::Fas).unwrap(), &sub);
    assert!(v.passed, "{v:?}");
}

#[test]
fn adder_decodes_to_table() {
    let l = gen_circuit(CircuitKind::Fa).unwrap();
    let spec = adder_spec();
    let trace: SimTrace<f64> =
        simulate(&l, &Stimulus::exhaustive(spec.input_names()), &cfg(), ClockScheme::Landauer).unwrap();
    let decoded = decode(&trace).unwrap().to_truth_spec().unwrap();
    let want = spec.select_outputs(&[0, 1, 2, 3]).unwrap();
    for row in 0..8 {
        for (k, name) in want.output_names().iter().enumerate() {
            let col = decoded.output_names().iter().position(|n| n == name).unwrap();
            assert_eq!(decoded.output_bit(row, col), want.output_bit(row, k), "row {row} {name}");
        }
    }
    let csv = trace.waveform_csv();
    assert!(csv.starts_with("sample,clock0,clock1,clock2,clock3,"));
    assert_eq!(csv.lines().count(), trace.len() + 1);
}

#[test]
fn adder_under_bennett_clock() {
    let v = verify_layout::<f64>(&gen_circuit(CircuitKind::Fa).unwrap(), &adder_spec(), &cfg(), ClockScheme::Bennett)
        .unwrap();
    assert!(v.passed, "{v:?}");
}

#[test]
fn backward_zoned_wire_fails() {
    // zone 0 feeds zone 2, which feeds zone 1: the data runs against the clock
    let w = gen_wire((0.0, 0.0), Direction::E, 6, Rotation::Deg0, &[0, 0, 2, 2, 1]).unwrap();
    let v = verify(&w, &identity(&["in"], &["out"]));
    assert!(!v.passed);
    assert_eq!(v.unclocked, vec!["out".to_string()]);
}

#[test]
fn two_bit_ripples_compute_exhaustively() {
    for kind in [RippleKind::Adder, RippleKind::AdderSubtractor] {
        let l = gen_ripple(kind, 2).unwrap();
        let net = qca_core::adders::ripple(qca_core::adders::RippleConfig { width: 2, kind, ..Default::default() })
            .unwrap();
        let spec = net.to_truth_spec().unwrap();
        let v = verify(&l, &spec);
        assert!(v.passed, "{kind:?}: {v:?}");
    }
}

#[test]
fn traces_are_bounded_and_deterministic() {
    let l = gen_circuit(CircuitKind::Fa5).unwrap();
    let stim = Stimulus::exhaustive(&["a".into(), "b".into(), "c_in".into()]);
    let t1: SimTrace<f64> = simulate(&l, &stim, &cfg(), ClockScheme::Landauer).unwrap();
    let t2: SimTrace<f64> = simulate(&l, &stim, &cfg(), ClockScheme::Landauer).unwrap();
    assert_eq!(t1, t2);
    assert!(t1.peak_polarization < 1.0);
    for s in &t1.polarization {
        assert!(s.iter().all(|p| p.abs() <= 1.0));
    }
    assert_eq!(t1.len(), cfg().samples);
}

#[test]
fn single_precision_engine_agrees() {
    let l = gen_circuit(CircuitKind::Fa).unwrap();
    let v = verify_layout::<f32>(&l, &adder_spec(), &cfg(), ClockScheme::Landauer).unwrap();
    assert!(v.passed, "{v:?}");
}

#[test]
fn clock_level_drives_follower() {
    let w = gen_wire((0.0, 0.0), Direction::E, 2, Rotation::Deg0, &[0]).unwrap();
    let stim = Stimulus::new(vec!["in".into()], vec![vec![true]]);
    let t: SimTrace<f64> = simulate(&w, &stim, &cfg(), ClockScheme::Landauer).unwrap();
    let out = t.series("out").unwrap();
    let program = ClockProgram::new(ClockScheme::Landauer, t.plan.samples_per_cycle, cfg().clock_amplitude_factor);
    for s in 0..t.len() {
        match program.phase(0, s) {
            Phase::Hold => assert!(out[s] > 0.9, "sample {s}: {}", out[s]),
            // at the relax barrier x = E / (2 gamma_high) leaves about 0.12
            Phase::Relax => assert!(out[s].abs() < 0.15, "sample {s}: {}", out[s]),
            _ => {}
        }
    }
    // a stronger clock barrier never raises the follower's polarization
    let mut last = f64::INFINITY;
    let mut levels: Vec<(f64, f64)> = (0..t.len()).map(|s| (t.clock[s][0], out[s])).collect();
    levels.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for (_, p) in levels {
        assert!(p <= last + 1e-3);
        last = p;
    }
}

#[test]
fn mirrored_layout_computes_mirrored_assignment() {
    let g = and3_gate(&Maj5Template::default(), 1, 2).unwrap();
    let spec = TruthSpec::from_fn(&["A", "B", "C"], &["out"], |r| vec![r[0] && r[1] && r[2]]).unwrap();
    let m = g.mirrored(0.0);
    let t1: SimTrace<f64> = simulate(&g, &Stimulus::exhaustive(spec.input_names()), &cfg(), ClockScheme::Landauer).unwrap();
    let swapped = vec!["C".to_string(), "B".to_string(), "A".to_string()];
    let t2: SimTrace<f64> = simulate(&m, &Stimulus::exhaustive(&swapped), &cfg(), ClockScheme::Landauer).unwrap();
    // same geometry, so only the sweep order differs
    for (p, q) in t1.series("out").unwrap().iter().zip(t2.series("out").unwrap()) {
        assert!((p - q).abs() < 1e-2, "{p} vs {q}");
    }
    assert_eq!(decode(&t1).unwrap().rows, decode(&t2).unwrap().rows);
}

#[test]
fn layout_json_round_trip() {
    for k in CircuitKind::ALL {
        let l = gen_circuit(k).unwrap();
        assert_eq!(Layout::from_json(&l.to_json().unwrap()).unwrap(), l);
    }
}

#[test]
fn metrics_examples() {
    let mut one = Layout::new("one");
    one.push(Cell::input(0.0, 0.0, "a"));
    let m = layout_metrics(&one).unwrap();
    assert_eq!(m.cell_count, 1);
    assert!((m.area_um2 - 3.24e-4).abs() < 1e-12);
    let fa = layout_metrics(&gen_circuit(CircuitKind::Fa).unwrap()).unwrap();
    assert_eq!((fa.delay_zones, fa.layer_count), (3, 1));
    assert!(fa.area_um2 > 0.0 && fa.area_um2 < 0.2);
}

#[test]
fn clock_cycles_sizes_the_run() {
    let l = gen_circuit(CircuitKind::Fa).unwrap();
    let cycles = clock_cycles(&l, 8, ClockScheme::Landauer).unwrap();
    let config = SimConfig { samples: cycles * MIN_SAMPLES_PER_CYCLE, ..cfg() };
    let t: SimTrace<f64> =
        simulate(&l, &Stimulus::exhaustive(adder_spec().input_names()), &config, ClockScheme::Landauer).unwrap();
    assert_eq!(t.plan.samples_per_cycle, MIN_SAMPLES_PER_CYCLE);
    assert_eq!(8 * t.plan.hold_cycles + t.plan.drain_cycles, cycles);
    let short = SimConfig { samples: cycles * MIN_SAMPLES_PER_CYCLE - 1, ..cfg() };
    assert!(simulate::<f64>(&l, &Stimulus::exhaustive(adder_spec().input_names()), &short, ClockScheme::Landauer).is_err());
}
