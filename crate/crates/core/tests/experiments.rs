use approx::assert_abs_diff_eq;

use distancing_game::experiments::export::{
    format_float, read_result_table, read_trajectory, write_prevalence_panel, write_result_table, write_trajectory,
    SWEEP_HEADER, TRAJECTORY_HEADER,
};
use distancing_game::experiments::{run_sweep, ExperimentConfig, SweepSpec};
use distancing_game::metrics::{efficiency, peak_stats, total_infections};
use distancing_game::simulator::simulate;
use distancing_game::{Policy, SimulationConfig, Trajectory};

fn short() -> SimulationConfig {
    SimulationConfig {
        horizon: 150,
        ..Default::default()
    }
}

#[test]
fn reinfections_add_to_total_infections() {
    let mut cfg = short().with_policy(Policy::new(0.4, 0.4).unwrap());
    cfg.reinfection_enabled = true;
    cfg.params.phi = 0.3;
    let traj = simulate(&cfg).unwrap();
    let last = traj.last().unwrap();
    assert!(last.cumulative_reinfections > 0.0);
    assert_abs_diff_eq!(
        total_infections(&traj),
        1.0 - last.state.s + last.cumulative_reinfections,
        epsilon = 0.0
    );
}

#[test]
fn moderate_cap_flattens_the_curve() {
    let base = simulate(&SimulationConfig::default()).unwrap();
    let capped = simulate(&SimulationConfig::default().with_policy(Policy::new(0.3, 0.5).unwrap())).unwrap();
    let (p0, _) = peak_stats(&base);
    let (p1, _) = peak_stats(&capped);
    assert!(p1 < p0, "{p1} vs {p0}");
    let s = efficiency(&capped, &base).unwrap();
    assert!(s.infection_reduction > 0.5 && s.activity_loss > 0.0);
    assert!(s.efficiency.unwrap() > 0.0);
}

#[test]
fn every_sweep_cell_reproduces_in_isolation() {
    let mut spec = SweepSpec::new(vec![0.15, 0.4], vec![0.35, 0.8], short());
    spec.phi = Some(vec![0.0, 0.2]);
    spec.segmented_c_recovered = Some(0.1);
    let table = run_sweep(&spec).unwrap();
    for row in &table.rows {
        let mut one = SweepSpec::new(vec![row.alpha_tilde], vec![row.c], spec.base);
        one.phi = Some(vec![row.phi]);
        one.segmented_c_recovered = Some(0.1);
        let again = run_sweep(&one).unwrap();
        assert_eq!(again.get(row.alpha_tilde, row.c, row.phi, row.segmented), Some(row));
    }
}

#[test]
fn sweep_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let mut spec = SweepSpec::new(vec![0.2, 1.0], vec![0.5], short());
    spec.segmented_c_recovered = Some(0.1);
    let table = run_sweep(&spec).unwrap();
    write_result_table(&path, &table).unwrap();

    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER.join(","));
    let back = read_result_table(&path).unwrap();
    assert_eq!(back.len(), table.rows.len());
    for (a, b) in table.rows.iter().zip(&back) {
        let o = a.outcome.unwrap();
        assert_eq!((a.alpha_tilde, a.c, a.segmented), (b.alpha_tilde, b.c, b.segmented));
        assert_abs_diff_eq!(
            o.total_infections,
            b.z.unwrap(),
            epsilon = 1e-11 * o.total_infections.abs()
        );
        assert_eq!(o.efficiency.is_none(), b.e.is_none());
        assert_eq!(a.case_days, [b.case1_days, b.case2_days, b.case3_days, b.case4_days]);
        assert_eq!(b.error, None);
    }
}

#[test]
fn trajectory_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("trajectory.csv");
    let traj = simulate(&short().with_policy(Policy::new(0.15, 0.8).unwrap())).unwrap();
    write_trajectory(&path, &traj).unwrap();
    let back = read_trajectory(&path).unwrap();
    assert_eq!(back.len(), traj.len());
    for (rec, row) in traj.records.iter().zip(&back) {
        assert_eq!(row.t, rec.day);
        assert_eq!(row.case, rec.equilibrium.case.number());
        for (x, y) in [(rec.state.s, row.s), (rec.state.i, row.i), (rec.theta, row.theta)] {
            assert!((x - y).abs() <= 1e-11 * x.abs(), "{x} vs {y}");
        }
        let expected_p = rec.equilibrium.compliance_probability(&traj.policy);
        assert!((row.p - expected_p).abs() <= 1e-11);
    }
}

#[test]
fn empty_trajectory_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    let empty = Trajectory {
        policy: Policy::none(),
        records: vec![],
    };
    write_trajectory(&path, &empty).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        TRAJECTORY_HEADER.join(",") + "\r\n"
    );
    assert!(read_trajectory(&path).unwrap().is_empty());
}

#[test]
fn prevalence_panel_has_one_column_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("panel.csv");
    let caps = [0.2, 0.5, 1.0];
    let trajs: Vec<Trajectory> = caps
        .iter()
        .map(|&a| simulate(&short().with_policy(Policy::new(a, 0.5).unwrap())).unwrap())
        .collect();
    let runs: Vec<(String, &Trajectory)> = caps.iter().zip(&trajs).map(|(a, t)| (format!("i_{a}"), t)).collect();
    write_prevalence_panel(&path, &runs).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,i_0.2,i_0.5,i_1");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 151);
    let day10: Vec<&str> = rows[10].split(',').collect();
    assert_eq!(day10[0], "10");
    assert_eq!(day10[2], format_float(trajs[1].records[10].state.i));
}

#[test]
fn config_drives_the_same_sweep() {
    let cfg = ExperimentConfig::from_json(
        r#"{"simulation": {"horizon": 150}, "sweep": {"alpha_tilde": [0.2, 0.5], "c": {"start": 0.4, "stop": 0.6, "step": 0.2}}}"#,
    )
    .unwrap();
    let spec = cfg.sweep_spec().unwrap();
    let direct = SweepSpec::new(vec![0.2, 0.5], vec![0.4, 0.6], short());
    assert_eq!(run_sweep(&spec).unwrap(), run_sweep(&direct).unwrap());
}
