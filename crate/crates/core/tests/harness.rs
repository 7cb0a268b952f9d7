use trilevel::harness::{
    compare_scenario, emit, parse_scenario, read_json, run_scenario, sweep, with_leaf, EmitFormat,
    Mode, RunOutput, COLUMNS,
};
use trilevel::Error;

const FIG2: &str = include_str!("../scenarios/fig2.scenario");
const FIG3: &str = include_str!("../scenarios/fig3.scenario");

fn numeric_fig2() -> trilevel::Trajectory {
    let s = parse_scenario(FIG2)
        .unwrap()
        .with_mode(Mode::Numeric)
        .unwrap();
    match run_scenario(&s).unwrap() {
        RunOutput::Numeric(t) => t,
        other => panic!("unexpected output {other:?}"),
    }
}

#[test]
fn csv_layout() {
    let mut buf = Vec::new();
    emit(
        &numeric_fig2(),
        EmitFormat::Csv,
        serde_json::Value::Null,
        &mut buf,
    )
    .unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,env_s,env_p,re_field_s,re_field_p,rho_aa,rho_bb,rho_cc,re_rho_ab,im_rho_ab,\
         re_rho_cb,im_rho_cb,re_rho_ac,im_rho_ac,re_theta_s,im_theta_s,re_theta_p,im_theta_p,theta_eff"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2000);
    assert!(rows.iter().all(|r| r.len() == COLUMNS.len()));
    assert_eq!(rows[0][0], -15.0);
    assert_eq!(rows[1999][0], 15.0);
    assert_eq!(&rows[0][5..8], &[0.0, 1.0, 0.0]);
}

#[test]
fn json_round_trip_is_exact() {
    let traj = numeric_fig2();
    let s = parse_scenario(FIG2).unwrap();
    let meta = serde_json::json!({ "scenario": s.to_document().unwrap() });
    let mut buf = Vec::new();
    emit(&traj, EmitFormat::Json, meta, &mut buf).unwrap();
    let table = read_json(&mut buf.as_slice()).unwrap();
    assert_eq!(table.rows.len(), traj.len());
    for (i, row) in table.rows.iter().enumerate() {
        assert_eq!(row.as_slice(), trilevel::harness::row(&traj, i).as_slice());
    }
    assert_eq!(table.metadata["scenario"]["pulse_s"]["peak_rabi"], 0.6);
    assert_eq!(table.metadata["n_rows"], 2000);
}

#[test]
fn runs_are_deterministic() {
    let render = || {
        let mut buf = Vec::new();
        emit(
            &numeric_fig2(),
            EmitFormat::Csv,
            serde_json::Value::Null,
            &mut buf,
        )
        .unwrap();
        buf
    };
    assert_eq!(render(), render());
}

#[test]
fn echoed_scenario_parses_back() {
    let s = parse_scenario(FIG3).unwrap();
    let text = toml::to_string(&s.to_document().unwrap()).unwrap();
    assert_eq!(parse_scenario(&text).unwrap(), s);
}

#[test]
fn validation_errors_name_the_field() {
    let bad = FIG2.replace("omega_ab = 12.0", "omega_ab = -1.0");
    match parse_scenario(&bad) {
        Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "atom.omega_ab"),
        other => panic!("{other:?}"),
    }
    let unknown = FIG2.replace("[pulse_p]", "[pulse_p]\nwidth = 3.0");
    let err = parse_scenario(&unknown).unwrap_err();
    assert!(matches!(err, Error::Parse { line: Some(_), .. }), "{err:?}");
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn deviation_grows_with_drive_strength() {
    let base = parse_scenario(FIG2).unwrap();
    let points = sweep(&base, "pulse_s.peak_rabi", &[0.15, 0.3, 0.6]).unwrap();
    assert_eq!(
        points.iter().map(|p| p.value).collect::<Vec<_>>(),
        vec![0.15, 0.3, 0.6]
    );
    let devs: Vec<f64> = points.iter().map(|p| p.report.max_deviation()).collect();
    assert!(devs.windows(2).all(|w| w[0] < w[1]), "{devs:?}");
}

#[test]
fn sweeping_steepness_reproduces_both_figures() {
    let base = parse_scenario(FIG2).unwrap();
    let points = sweep(&base, "pulse_s.q+pulse_p.q", &[0.0, 1.0]).unwrap();
    let fig2 = compare_scenario(&base).unwrap();
    let fig3 = compare_scenario(&parse_scenario(FIG3).unwrap()).unwrap();
    assert_eq!(points[0].report, fig2);
    assert_eq!(points[1].report, fig3);
}

#[test]
fn doubled_detuning_improves_agreement() {
    let base = parse_scenario(FIG2).unwrap();
    let moved = with_leaf(
        &with_leaf(&base, "atom.omega_ab", 21.0).unwrap(),
        "atom.omega_cb",
        18.0,
    )
    .unwrap();
    let r1 = compare_scenario(&base).unwrap();
    let r2 = compare_scenario(&moved).unwrap();
    assert!(r2.max_deviation() < r1.max_deviation());
    let sp = r2.small_parameters.unwrap();
    assert!((sp.s - 0.6 / 18.0).abs() < 1e-15 && (sp.p - 0.5 / 16.0).abs() < 1e-15);
}

#[test]
fn bad_sweep_value_reports_which_one() {
    let base = parse_scenario(FIG2).unwrap();
    match sweep(&base, "atom.omega_ab", &[12.0, -3.0]) {
        Err(Error::Sweep { value, .. }) => assert_eq!(value, -3.0),
        other => panic!("{other:?}"),
    }
    assert!(sweep(&base, "atom.no_such_field", &[1.0]).is_err());
}
