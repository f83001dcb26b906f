//! Bundled reference cases.
//!
//! The two small cases reproduce published worked examples at desk scale; the
//! synthetic 24-period case is generated data in the style of a 5-bus system
//! (it is not measured grid data) and exercises the solver at a realistic
//! problem size.

use crate::model::UcedCase;

/// Two buses, two lines, one period; binaries on both generators.
pub fn two_bus_single_period() -> UcedCase {
    UcedCase {
        n_buses: 2,
        n_lines: 2,
        n_periods: 1,
        gen_cost: vec![vec![3.0], vec![5.0]],
        commit_cost: vec![vec![18.0], vec![15.0]],
        startup_cost: vec![vec![], vec![]],
        demand: vec![vec![7.0], vec![8.0]],
        gsf: vec![vec![0.8, 0.7], vec![0.6, 0.9]],
        line_limit: vec![0.0, 1.0],
        gen_min: vec![vec![0.0], vec![0.0]],
        gen_max: vec![vec![10.0], vec![10.0]],
        startup_ramp: vec![0.0, 0.0],
        ramp_up: vec![0.0, 0.0],
        shutdown_ramp: vec![0.0, 0.0],
        ramp_down: vec![0.0, 0.0],
        min_on: vec![0, 0],
        min_off: vec![0, 0],
        init_commit: vec![0.0, 0.0],
        init_dispatch: vec![0.0, 0.0],
        theta_max: vec![10.0, 10.0],
    }
}

/// Two buses, two lines, three periods; only the first line's capacity varies.
pub fn two_bus_three_period() -> UcedCase {
    UcedCase {
        n_buses: 2,
        n_lines: 2,
        n_periods: 3,
        gen_cost: vec![vec![3.0, 7.0, 5.0], vec![4.0, 6.0, 4.0]],
        commit_cost: vec![vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]],
        startup_cost: vec![vec![18.0, 16.0], vec![14.0, 20.0]],
        demand: vec![vec![8.0, 7.0, 12.0], vec![10.0, 8.0, 8.0]],
        gsf: vec![vec![0.8, 0.7], vec![0.6, 0.9]],
        // Flow-row constants: the demand shift term plus these match the
        // written-out right-hand sides (13.2, 11, 15; 14.4, 12, 15).
        line_limit: vec![-0.2, 0.6],
        gen_min: vec![vec![0.0; 3], vec![0.0; 3]],
        gen_max: vec![vec![20.0; 3], vec![20.0; 3]],
        startup_ramp: vec![20.0, 20.0],
        ramp_up: vec![20.0, 20.0],
        shutdown_ramp: vec![20.0, 20.0],
        ramp_down: vec![20.0, 20.0],
        min_on: vec![2, 2],
        min_off: vec![2, 2],
        init_commit: vec![0.0, 0.0],
        init_dispatch: vec![0.0, 0.0],
        theta_max: vec![10.0, 0.0],
    }
}

/// Minimal consistent case: one bus, no lines, one period.
pub fn single_bus_no_lines() -> UcedCase {
    UcedCase {
        n_buses: 1,
        n_lines: 0,
        n_periods: 1,
        gen_cost: vec![vec![2.0]],
        commit_cost: vec![vec![1.0]],
        startup_cost: vec![vec![]],
        demand: vec![vec![5.0]],
        gsf: vec![],
        line_limit: vec![],
        gen_min: vec![vec![0.0]],
        gen_max: vec![vec![10.0]],
        startup_ramp: vec![0.0],
        ramp_up: vec![0.0],
        shutdown_ramp: vec![0.0],
        ramp_down: vec![0.0],
        min_on: vec![0],
        min_off: vec![0],
        init_commit: vec![0.0],
        init_dispatch: vec![0.0],
        theta_max: vec![],
    }
}

/// A case whose power balance cannot be met at any parameter value.
pub fn infeasible_two_bus() -> UcedCase {
    let mut case = two_bus_single_period();
    case.demand = vec![vec![30.0], vec![30.0]];
    case
}

/// Synthetic 5-bus, 6-line, 24-period system with one varying line (line 4).
///
/// Shift factors come from a DC model of a 6-branch network; loads follow a
/// daily profile. Generated data, not a published test system.
pub fn synthetic_five_bus() -> UcedCase {
    let n = 5;
    let t = 24;
    #[rustfmt::skip]
    let gsf = vec![
        vec![0.0344, -0.6354, -0.5085, -0.1595, 0.0],
        vec![0.0776, -0.1017, -0.1706, -0.3600, 0.0],
        vec![0.8880,  0.7371,  0.6791,  0.5195, 0.0],
        vec![0.0344,  0.3646, -0.5085, -0.1595, 0.0],
        vec![0.0344,  0.3646,  0.4915, -0.1595, 0.0],
        vec![0.1120,  0.2629,  0.3209,  0.4805, 0.0],
    ];
    // Daily demand profile: overnight trough, evening peak.
    let profile: Vec<f64> = (0..t)
        .map(|h| {
            let x = (h as f64 + 1.0 - 17.0) / 24.0 * std::f64::consts::TAU;
            0.72 + 0.28 * x.cos()
        })
        .collect();
    let base_load = [0.0, 300.0, 300.0, 400.0, 0.0];
    let demand: Vec<Vec<f64>> = (0..n)
        .map(|i| profile.iter().map(|p| base_load[i] * p).collect())
        .collect();
    let gen_max_peak = [210.0, 80.0, 520.0, 200.0, 600.0];
    let gen_cost_rate = [14.0, 15.0, 30.0, 40.0, 10.0];
    UcedCase {
        n_buses: n,
        n_lines: 6,
        n_periods: t,
        gen_cost: (0..n)
            .map(|i| vec![gen_cost_rate[i]; t])
            .collect(),
        commit_cost: (0..n).map(|i| vec![2.0 + i as f64; t]).collect(),
        startup_cost: (0..n)
            .map(|i| vec![40.0 + 10.0 * i as f64; t - 1])
            .collect(),
        demand,
        gsf,
        line_limit: vec![400.0, 400.0, 700.0, 150.0, 240.0, 340.0],
        gen_min: vec![vec![0.0; t]; n],
        gen_max: (0..n).map(|i| vec![gen_max_peak[i]; t]).collect(),
        startup_ramp: gen_max_peak.to_vec(),
        ramp_up: gen_max_peak.to_vec(),
        shutdown_ramp: gen_max_peak.to_vec(),
        ramp_down: gen_max_peak.to_vec(),
        min_on: vec![2; n],
        min_off: vec![2; n],
        init_commit: vec![0.0; n],
        init_dispatch: vec![0.0; n],
        theta_max: vec![0.0, 0.0, 0.0, 100.0, 0.0, 0.0],
    }
}
