use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use distancing_game::model::{
    advance, derivatives, reinfection_derivatives, step, transmission_force, ActivityProfile, Dynamics, EpidemicState,
    ModelParams,
};
use distancing_game::simulator::{simulate, SimulationConfig};

fn simplex() -> impl Strategy<Value = EpidemicState> {
    (0.01f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(a, b, c, d, e)| {
        let sum = a + b + c + d + e;
        EpidemicState::new(a / sum, b / sum, c / sum, d / sum, 1.0 - (a + b + c + d) / sum, 0.0).unwrap()
    })
}

fn base_state() -> impl Strategy<Value = EpidemicState> {
    simplex().prop_map(|s| EpidemicState::new(s.s, s.i, s.q, s.r + s.reinfected, 0.0, 0.0).unwrap())
}

fn activities() -> impl Strategy<Value = ActivityProfile> {
    (0.01f64..=1.0, 0.01f64..=1.0).prop_map(|(a, b)| ActivityProfile::new(a, b).unwrap())
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.05f64..1.0, 0.05f64..0.5, 0.02f64..0.3, 0.0f64..1.0)
        .prop_map(|(b, g1, g2, phi)| ModelParams::new(b, g1, g2, 1858.0, phi).unwrap())
}

/// Forward Euler at a tiny step: slow but independent of the RK4 code path.
fn euler_day(x: &EpidemicState, act: &ActivityProfile, p: &ModelParams, reinfection: bool) -> [f64; 5] {
    let (a_s, a_i, a_r) = (act.alpha_s, act.alpha_i, act.alpha_r);
    let [mut s, mut i, mut q, mut r, mut j] = [x.s, x.i, x.q, x.r, x.reinfected];
    let n = 20_000;
    let h = 1.0 / n as f64;
    for _ in 0..n {
        let (inf, pool) = if reinfection {
            (a_i * i + a_r * j, a_s * s + a_i * i + a_r * r + a_r * j)
        } else {
            (a_i * i, a_s * s + a_i * i + a_r * r)
        };
        let lam = if pool > 0.0 { p.beta * inf / pool } else { 0.0 };
        let new_s = lam * a_s * s;
        let new_r = if reinfection { lam * p.phi * a_r * r } else { 0.0 };
        let (di, dq, dj) = (
            new_s - p.gamma1 * i,
            p.gamma1 * (i + j) - p.gamma2 * q,
            new_r - p.gamma1 * j,
        );
        s -= h * new_s;
        i += h * di;
        q += h * dq;
        r += h * (p.gamma2 * q - new_r);
        j += h * dj;
    }
    [s, i, q, r, j]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivatives_conserve_mass(x in simplex(), act in activities(), p in params()) {
        prop_assert!(derivatives(&x, &act, &p).unwrap().sum().abs() < 1e-15);
        prop_assert!(reinfection_derivatives(&x, &act, &p).unwrap().sum().abs() < 1e-15);
    }

    #[test]
    fn daily_steps_conserve_mass(x in simplex(), act in activities(), p in params()) {
        for dynamics in [Dynamics::Base, Dynamics::Reinfection] {
            let out = advance(&x, &act, &p, dynamics, 1.0).unwrap();
            prop_assert!((out.state.total() - 1.0).abs() <= 1e-12);
            prop_assert!(out.new_infections >= 0.0 && out.new_reinfections >= 0.0);
        }
    }

    #[test]
    fn force_grows_with_susceptible_activity(x in base_state(), a in 0.01f64..0.99, bump in 0.001f64..0.5, ar in 0.01f64..=1.0) {
        let p = ModelParams::default();
        let lo = ActivityProfile::new(a, ar).unwrap();
        let hi = ActivityProfile::new((a + bump).min(1.0), ar).unwrap();
        prop_assert!(transmission_force(&x, &hi, &p).unwrap() >= transmission_force(&x, &lo, &p).unwrap());
    }

    #[test]
    fn zero_phi_reinfection_is_the_base_model(x in base_state(), act in activities(), p in params()) {
        let p = p.with_phi(0.0);
        let a = advance(&x, &act, &p, Dynamics::Base, 1.0).unwrap();
        let b = advance(&x, &act, &p, Dynamics::Reinfection, 1.0).unwrap();
        prop_assert_eq!(b.state.reinfected, 0.0);
        prop_assert!((a.state.s - b.state.s).abs() < 1e-15);
        prop_assert!((a.state.i - b.state.i).abs() < 1e-15);
        prop_assert!((a.state.q - b.state.q).abs() < 1e-15);
        prop_assert!((a.state.r - b.state.r).abs() < 1e-15);
    }

    #[test]
    fn finite_difference_matches_derivatives(x in base_state(), act in activities(), p in params()) {
        let h = 1e-4;
        let next = step(&x, &act, &p, h).unwrap();
        let d = derivatives(&x, &act, &p).unwrap();
        // Forward difference error is O(h |d²x/dt²|), rates are O(1).
        prop_assert!(((next.s - x.s) / h - d.ds).abs() < 1e-3);
        prop_assert!(((next.i - x.i) / h - d.di).abs() < 1e-3);
        prop_assert!(((next.q - x.q) / h - d.dq).abs() < 1e-3);
        prop_assert!(((next.r - x.r) / h - d.dr).abs() < 1e-3);
    }
}

#[test]
fn rk4_day_matches_fine_euler() {
    let p = ModelParams::default().with_phi(0.3);
    let cases = [
        (
            EpidemicState::siqr(0.9431, 0.0356, 0.0168, 0.0045).unwrap(),
            ActivityProfile::new(0.4, 1.0).unwrap(),
        ),
        (
            EpidemicState::siqr(0.5885, 0.1233, 0.1656, 0.1226).unwrap(),
            ActivityProfile::new(0.52, 0.3).unwrap(),
        ),
        (
            EpidemicState::new(0.3, 0.1, 0.1, 0.4, 0.1, 0.0).unwrap(),
            ActivityProfile::full(),
        ),
    ];
    for (x, act) in cases {
        for (dynamics, reinf) in [(Dynamics::Base, false), (Dynamics::Reinfection, true)] {
            if !reinf && x.reinfected > 0.0 {
                continue;
            }
            let rk = advance(&x, &act, &p, dynamics, 1.0).unwrap().state;
            let eu = euler_day(&x, &act, &p, reinf);
            for (a, b) in [rk.s, rk.i, rk.q, rk.r, rk.reinfected].iter().zip(eu) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-6);
            }
        }
    }
}

/// Smallest root of `x = s0 exp(-R0 (1 - x))` by bisection.
fn sir_final_size(r0: f64, s0: f64) -> f64 {
    let h = |x: f64| x - s0 * (-r0 * (1.0 - x)).exp();
    let (mut lo, mut hi) = (0.0, 1.0 / r0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn quarantine_normalisation_infects_at_least_the_sir_final_size() {
    // log s(∞)/s0 = -β ∫ i/(1-q) ≤ -β ∫ i = -R0 (1 - s(∞)), so s(∞) sits below the SIR root.
    let cfg = SimulationConfig {
        params: ModelParams::default().with_d(0.0),
        horizon: 1000,
        ..Default::default()
    };
    let traj = simulate(&cfg).unwrap();
    let s_end = traj.last().unwrap().state.s;
    let bound = sir_final_size(cfg.params.r0(), cfg.initial_state.s);
    assert!(s_end <= bound + 1e-6, "s(T) = {s_end}, SIR root {bound}");
    assert!(traj.last().unwrap().state.i < 1e-8);
}

#[test]
fn cumulative_infections_track_susceptible_depletion() {
    let traj = simulate(&SimulationConfig::default()).unwrap();
    let s0 = traj.first().unwrap().state.s;
    for r in &traj.records {
        assert_abs_diff_eq!(r.cumulative_infections, s0 - r.state.s, epsilon = 1e-12);
    }
}
