//! Unit-commitment / economic-dispatch planning cases and their matrix form.
//!
//! A [`UcedCase`] describes buses, lines, periods, generator economics and
//! dynamics together with a per-line capacity-upgrade interval. It is lowered
//! into a [`StandardForm`]
//!
//! ```text
//!   min  Mᵀω    s.t.  A ω ≤ b + F̂max + θ,   H ω = H·D̂
//! ```
//!
//! with decision vector ω = (G, U, V): dispatch, commitment and startup
//! variables. The upgrade parameters θ enter only the right-hand side of the
//! first K·T rows (one per line and period). Each inequality row belongs to a
//! named [`Block`]; blocks are emitted in a fixed order so row indices are
//! stable across assemblies of the same case.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// A planning case. Indices are 0-based internally; `i` ranges over buses
/// (one generator per bus), `t` over periods, `k` over lines.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UcedCase {
    pub n_buses: usize,
    pub n_lines: usize,
    pub n_periods: usize,
    /// Generation cost C[i][t] in $/MWh.
    pub gen_cost: Vec<Vec<f64>>,
    /// Commitment fixed cost UC[i][t] in $.
    pub commit_cost: Vec<Vec<f64>>,
    /// Startup cost SC[i][t] in $, for t = 2..T (length T-1 per bus).
    pub startup_cost: Vec<Vec<f64>>,
    /// Demand D[i][t] in MWh.
    pub demand: Vec<Vec<f64>>,
    /// Generation shift factors, K rows by N columns.
    pub gsf: Vec<Vec<f64>>,
    /// Line capacity constant F^max[k]. The flow-row right-hand side is
    /// `Σ_i GSF[k][i]·D[i][t] + F^max[k] + θ_k`, so this constant may be
    /// negative when the demand shift term exceeds the physical limit.
    pub line_limit: Vec<f64>,
    /// Dispatch lower bound Gmin[i][t] (defaults to zero).
    #[serde(default)]
    pub gen_min: Vec<Vec<f64>>,
    /// Dispatch upper bound Gmax[i][t].
    pub gen_max: Vec<Vec<f64>>,
    /// Startup ramp limit SR[i].
    pub startup_ramp: Vec<f64>,
    /// Ramp-up limit UR[i].
    pub ramp_up: Vec<f64>,
    /// Shutdown ramp limit SD[i].
    pub shutdown_ramp: Vec<f64>,
    /// Ramp-down limit DR[i].
    pub ramp_down: Vec<f64>,
    /// Minimum up time T^on[i] in periods.
    pub min_on: Vec<usize>,
    /// Minimum down time T^off[i] in periods.
    pub min_off: Vec<usize>,
    /// Initial commitment U[i][0] (defaults to zero).
    #[serde(default)]
    pub init_commit: Vec<f64>,
    /// Initial dispatch G[i][0] (defaults to zero).
    #[serde(default)]
    pub init_dispatch: Vec<f64>,
    /// Per-line upgrade bound: θ_k ranges over [0, theta_max[k]].
    pub theta_max: Vec<f64>,
}

/// Inequality block labels, in emission order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    Flow,
    RampUp,
    Shutdown,
    RampDown,
    StateTransition,
    MinOn,
    MinOff,
    DispatchLower,
    DispatchUpper,
    CommitLower,
    CommitUpper,
    StartupLower,
    StartupUpper,
}

/// Case dimensions carried along with the assembled matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseDims {
    pub n_buses: usize,
    pub n_lines: usize,
    pub n_periods: usize,
}

impl CaseDims {
    /// Number of decision variables N(3T-1).
    pub fn n_vars(&self) -> usize {
        self.n_buses * (3 * self.n_periods - 1)
    }
}

/// The matrix form of a case: objective, inequality system, equality system,
/// binary-variable indices and the row-to-parameter map.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub dims: CaseDims,
    /// Objective coefficients M, stacked (Cᵀ, UCᵀ, SCᵀ).
    pub objective: DVector<f64>,
    /// Inequality coefficients, Num rows by N(3T-1) columns.
    pub a: DMatrix<f64>,
    /// Constant part of the inequality right-hand side.
    pub b: DVector<f64>,
    /// Per-row capacity constants; nonzero only on the first K·T rows.
    pub fmax_rows: DVector<f64>,
    /// Equality coefficients, T rows.
    pub h: DMatrix<f64>,
    /// Equality right-hand side H·D̂ (total demand per period).
    pub h_dhat: DVector<f64>,
    /// Column indices of binary variables: the U block then the V block.
    pub binary_idx: Vec<usize>,
    /// Per-row parameter line index: `Some(k)` on the parameterized rows.
    pub row_param: Vec<Option<usize>>,
    /// Per-line parameter interval [lo, hi]; lo is always 0.
    pub theta_box: Vec<(f64, f64)>,
    /// Row ranges of the emitted blocks, in order.
    pub blocks: Vec<(Block, Range<usize>)>,
}

impl StandardForm {
    pub fn num_rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_vars(&self) -> usize {
        self.a.ncols()
    }

    /// Column of dispatch variable G[i][t] (0-based i, t).
    pub fn g_col(&self, i: usize, t: usize) -> usize {
        i * self.dims.n_periods + t
    }

    /// Column of commitment variable U[i][t].
    pub fn u_col(&self, i: usize, t: usize) -> usize {
        let nt = self.dims.n_buses * self.dims.n_periods;
        nt + i * self.dims.n_periods + t
    }

    /// Column of startup variable V[i][t], t ≥ 1 (second period onward).
    pub fn v_col(&self, i: usize, t: usize) -> usize {
        debug_assert!(t >= 1);
        let nt = self.dims.n_buses * self.dims.n_periods;
        2 * nt + i * (self.dims.n_periods - 1) + (t - 1)
    }

    /// Full inequality right-hand side b + F̂max + θ at a parameter point.
    pub fn rhs_at(&self, theta: &[f64]) -> DVector<f64> {
        let mut rhs = &self.b + &self.fmax_rows;
        for (row, param) in self.row_param.iter().enumerate() {
            if let Some(k) = param {
                rhs[row] += theta[*k];
            }
        }
        rhs
    }

    /// The parameterized rows grouped by line: `(row, k)` pairs in row order.
    pub fn parameter_rows(&self) -> Vec<(usize, usize)> {
        self.row_param
            .iter()
            .enumerate()
            .filter_map(|(row, p)| p.map(|k| (row, k)))
            .collect()
    }

    /// Number of binary variables still marked binary.
    pub fn n_binaries(&self) -> usize {
        self.binary_idx.len()
    }
}

fn check_matrix(field: &str, m: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if m.len() != rows {
        return Err(Error::DimensionMismatch {
            field: field.into(),
            expected: format!("{rows} rows"),
            got: format!("{} rows", m.len()),
        });
    }
    for (r, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::DimensionMismatch {
                field: format!("{field}[{r}]"),
                expected: format!("{cols} columns"),
                got: format!("{} columns", row.len()),
            });
        }
    }
    Ok(())
}

fn check_len<T>(field: &str, v: &[T], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::DimensionMismatch {
            field: field.into(),
            expected: format!("length {len}"),
            got: format!("length {}", v.len()),
        });
    }
    Ok(())
}

fn check_nonneg(field: &str, m: &[Vec<f64>]) -> Result<()> {
    for (i, row) in m.iter().enumerate() {
        for (t, &x) in row.iter().enumerate() {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidValue {
                    field: format!("{field}[{i}][{t}]"),
                    message: format!("must be finite and nonnegative, got {x}"),
                });
            }
        }
    }
    Ok(())
}

fn check_nonneg_vec(field: &str, v: &[f64]) -> Result<()> {
    for (i, &x) in v.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidValue {
                field: format!("{field}[{i}]"),
                message: format!("must be finite and nonnegative, got {x}"),
            });
        }
    }
    Ok(())
}

/// Validate all case invariants; returns the case unchanged on success.
///
/// Errors cite the offending field and index. The line-capacity constant is
/// allowed to be negative (see [`UcedCase::line_limit`]); all other economic
/// quantities must be nonnegative.
pub fn validate_case(case: UcedCase) -> Result<UcedCase> {
    let mut case = case;
    let (n, k, t) = (case.n_buses, case.n_lines, case.n_periods);
    if n < 1 || t < 1 {
        return Err(Error::InvalidValue {
            field: "n_buses/n_periods".into(),
            message: format!("need at least one bus and one period, got N={n}, T={t}"),
        });
    }

    if case.gen_min.is_empty() {
        case.gen_min = vec![vec![0.0; t]; n];
    }
    if case.init_commit.is_empty() {
        case.init_commit = vec![0.0; n];
    }
    if case.init_dispatch.is_empty() {
        case.init_dispatch = vec![0.0; n];
    }

    check_matrix("gen_cost", &case.gen_cost, n, t)?;
    check_matrix("commit_cost", &case.commit_cost, n, t)?;
    check_matrix("startup_cost", &case.startup_cost, n, t - 1)?;
    check_matrix("demand", &case.demand, n, t)?;
    check_matrix("gsf", &case.gsf, k, n)?;
    check_matrix("gen_min", &case.gen_min, n, t)?;
    check_matrix("gen_max", &case.gen_max, n, t)?;
    check_len("line_limit", &case.line_limit, k)?;
    check_len("startup_ramp", &case.startup_ramp, n)?;
    check_len("ramp_up", &case.ramp_up, n)?;
    check_len("shutdown_ramp", &case.shutdown_ramp, n)?;
    check_len("ramp_down", &case.ramp_down, n)?;
    check_len("min_on", &case.min_on, n)?;
    check_len("min_off", &case.min_off, n)?;
    check_len("init_commit", &case.init_commit, n)?;
    check_len("init_dispatch", &case.init_dispatch, n)?;
    check_len("theta_max", &case.theta_max, k)?;

    check_nonneg("gen_cost", &case.gen_cost)?;
    check_nonneg("commit_cost", &case.commit_cost)?;
    check_nonneg("startup_cost", &case.startup_cost)?;
    check_nonneg("demand", &case.demand)?;
    check_nonneg("gen_min", &case.gen_min)?;
    check_nonneg("gen_max", &case.gen_max)?;
    check_nonneg_vec("startup_ramp", &case.startup_ramp)?;
    check_nonneg_vec("ramp_up", &case.ramp_up)?;
    check_nonneg_vec("shutdown_ramp", &case.shutdown_ramp)?;
    check_nonneg_vec("ramp_down", &case.ramp_down)?;
    check_nonneg_vec("init_dispatch", &case.init_dispatch)?;
    check_nonneg_vec("theta_max", &case.theta_max)?;

    for (i, row) in case.gen_min.iter().enumerate() {
        for (tt, (&lo, &hi)) in row.iter().zip(&case.gen_max[i]).enumerate() {
            if lo > hi {
                return Err(Error::InvalidValue {
                    field: format!("gen_min[{i}][{tt}]"),
                    message: format!("lower bound {lo} exceeds gen_max {hi}"),
                });
            }
        }
    }
    for (i, &ton) in case.min_on.iter().enumerate() {
        if ton > t {
            return Err(Error::InvalidValue {
                field: format!("min_on[{i}]"),
                message: format!("minimum up time {ton} exceeds horizon {t}"),
            });
        }
    }
    for (i, &toff) in case.min_off.iter().enumerate() {
        if toff > t {
            return Err(Error::InvalidValue {
                field: format!("min_off[{i}]"),
                message: format!("minimum down time {toff} exceeds horizon {t}"),
            });
        }
    }
    for (i, &u0) in case.init_commit.iter().enumerate() {
        if u0 != 0.0 && u0 != 1.0 {
            return Err(Error::InvalidValue {
                field: format!("init_commit[{i}]"),
                message: format!("must be 0 or 1, got {u0}"),
            });
        }
    }
    for (kk, &lim) in case.line_limit.iter().enumerate() {
        if !lim.is_finite() {
            return Err(Error::InvalidValue {
                field: format!("line_limit[{kk}]"),
                message: "must be finite".into(),
            });
        }
    }
    Ok(case)
}

struct RowBuf {
    n_vars: usize,
    coeffs: Vec<f64>,
    b: Vec<f64>,
    fmax: Vec<f64>,
    param: Vec<Option<usize>>,
    blocks: Vec<(Block, Range<usize>)>,
}

impl RowBuf {
    fn new(n_vars: usize) -> Self {
        RowBuf {
            n_vars,
            coeffs: vec![],
            b: vec![],
            fmax: vec![],
            param: vec![],
            blocks: vec![],
        }
    }

    fn n_rows(&self) -> usize {
        self.b.len()
    }

    fn push(&mut self, entries: &[(usize, f64)], b: f64, fmax: f64, param: Option<usize>) {
        let start = self.coeffs.len();
        self.coeffs.resize(start + self.n_vars, 0.0);
        for &(col, c) in entries {
            self.coeffs[start + col] += c;
        }
        self.b.push(b);
        self.fmax.push(fmax);
        self.param.push(param);
    }

    fn close_block(&mut self, block: Block, start: usize) {
        let end = self.n_rows();
        if end > start {
            self.blocks.push((block, start..end));
        }
    }
}

/// Assemble the standard matrix form of a validated case.
///
/// Rows are emitted in block order: line flows, ramp-up, shutdown, ramp-down,
/// state transition, minimum-up, minimum-down, then the dispatch and
/// commitment bound blocks. For a single-period case the ramp, transition and
/// minimum-time blocks are omitted entirely and there are no startup
/// variables. Initial conditions are folded into the constant vector on the
/// first-period rows.
pub fn assemble_standard_form(case: &UcedCase) -> StandardForm {
    let dims = CaseDims {
        n_buses: case.n_buses,
        n_lines: case.n_lines,
        n_periods: case.n_periods,
    };
    let (n, k, t) = (dims.n_buses, dims.n_lines, dims.n_periods);
    let n_vars = dims.n_vars();
    let nt = n * t;
    let g = |i: usize, tt: usize| i * t + tt;
    let u = |i: usize, tt: usize| nt + i * t + tt;
    let v = |i: usize, tt: usize| 2 * nt + i * (t - 1) + (tt - 1);

    let mut m = DVector::zeros(n_vars);
    for i in 0..n {
        for tt in 0..t {
            m[g(i, tt)] = case.gen_cost[i][tt];
            m[u(i, tt)] = case.commit_cost[i][tt];
        }
        for tt in 1..t {
            m[v(i, tt)] = case.startup_cost[i][tt - 1];
        }
    }

    let mut rows = RowBuf::new(n_vars);

    // Line flow limits, grouped by line: row (k·T + t) carries θ_k.
    let start = rows.n_rows();
    for kk in 0..k {
        for tt in 0..t {
            let entries: Vec<(usize, f64)> =
                (0..n).map(|i| (g(i, tt), case.gsf[kk][i])).collect();
            let demand_shift: f64 = (0..n).map(|i| case.gsf[kk][i] * case.demand[i][tt]).sum();
            rows.push(&entries, demand_shift, case.line_limit[kk], Some(kk));
        }
    }
    rows.close_block(Block::Flow, start);

    let multi_period = t >= 2;

    if multi_period {
        // Ramp-up and startup ramp.
        let start = rows.n_rows();
        for i in 0..n {
            for tt in 0..t {
                let mut entries = vec![
                    (g(i, tt), 1.0),
                    (u(i, tt), -(case.startup_ramp[i] - case.gen_max[i][tt])),
                ];
                let mut b = case.gen_max[i][tt];
                if tt == 0 {
                    b += case.init_dispatch[i]
                        + (case.ramp_up[i] - case.startup_ramp[i]) * case.init_commit[i];
                } else {
                    entries.push((g(i, tt - 1), -1.0));
                    entries.push((u(i, tt - 1), -(case.ramp_up[i] - case.startup_ramp[i])));
                }
                rows.push(&entries, b, 0.0, None);
            }
        }
        rows.close_block(Block::RampUp, start);

        // Shutdown ramp, periods 1..T-1.
        let start = rows.n_rows();
        for i in 0..n {
            for tt in 0..t - 1 {
                let entries = vec![
                    (g(i, tt), 1.0),
                    (u(i, tt + 1), -(case.gen_max[i][tt] - case.shutdown_ramp[i])),
                    (u(i, tt), -case.shutdown_ramp[i]),
                ];
                rows.push(&entries, 0.0, 0.0, None);
            }
        }
        rows.close_block(Block::Shutdown, start);

        // Ramp-down and shutdown ramp.
        let start = rows.n_rows();
        for i in 0..n {
            for tt in 0..t {
                let mut entries = vec![
                    (g(i, tt), -1.0),
                    (u(i, tt), -(case.ramp_down[i] - case.shutdown_ramp[i])),
                ];
                let mut b = case.gen_max[i][tt];
                if tt == 0 {
                    b += -case.init_dispatch[i]
                        + (case.shutdown_ramp[i] - case.gen_max[i][tt]) * case.init_commit[i];
                } else {
                    entries.push((g(i, tt - 1), 1.0));
                    entries.push((
                        u(i, tt - 1),
                        -(case.shutdown_ramp[i] - case.gen_max[i][tt]),
                    ));
                }
                rows.push(&entries, b, 0.0, None);
            }
        }
        rows.close_block(Block::RampDown, start);

        // Commitment-to-startup state transition, periods 2..T.
        let start = rows.n_rows();
        for i in 0..n {
            for tt in 1..t {
                let entries = vec![(u(i, tt), 1.0), (u(i, tt - 1), -1.0), (v(i, tt), -1.0)];
                rows.push(&entries, 0.0, 0.0, None);
            }
        }
        rows.close_block(Block::StateTransition, start);

        // Minimum up time: startups within the window keep the unit on.
        let start = rows.n_rows();
        for i in 0..n {
            let ton = case.min_on[i];
            if ton >= 1 {
                for tt in ton..t {
                    let mut entries = vec![(u(i, tt), -1.0)];
                    for w in (tt + 1 - ton)..=tt {
                        entries.push((v(i, w), 1.0));
                    }
                    rows.push(&entries, 0.0, 0.0, None);
                }
            }
        }
        rows.close_block(Block::MinOn, start);

        // Minimum down time.
        let start = rows.n_rows();
        for i in 0..n {
            let toff = case.min_off[i];
            if toff >= 1 {
                for tt in toff..t {
                    let mut entries = vec![(u(i, tt - toff), 1.0)];
                    for w in (tt + 1 - toff)..=tt {
                        entries.push((v(i, w), 1.0));
                    }
                    rows.push(&entries, 1.0, 0.0, None);
                }
            }
        }
        rows.close_block(Block::MinOff, start);
    }

    // Dispatch and commitment bounds, the last six blocks.
    let start = rows.n_rows();
    for i in 0..n {
        for tt in 0..t {
            rows.push(
                &[(g(i, tt), -1.0), (u(i, tt), case.gen_min[i][tt])],
                0.0,
                0.0,
                None,
            );
        }
    }
    rows.close_block(Block::DispatchLower, start);

    let start = rows.n_rows();
    for i in 0..n {
        for tt in 0..t {
            rows.push(
                &[(g(i, tt), 1.0), (u(i, tt), -case.gen_max[i][tt])],
                0.0,
                0.0,
                None,
            );
        }
    }
    rows.close_block(Block::DispatchUpper, start);

    let start = rows.n_rows();
    for i in 0..n {
        for tt in 0..t {
            rows.push(&[(u(i, tt), -1.0)], 0.0, 0.0, None);
        }
    }
    rows.close_block(Block::CommitLower, start);

    let start = rows.n_rows();
    for i in 0..n {
        for tt in 0..t {
            rows.push(&[(u(i, tt), 1.0)], 1.0, 0.0, None);
        }
    }
    rows.close_block(Block::CommitUpper, start);

    if multi_period {
        let start = rows.n_rows();
        for i in 0..n {
            for tt in 1..t {
                rows.push(&[(v(i, tt), -1.0)], 0.0, 0.0, None);
            }
        }
        rows.close_block(Block::StartupLower, start);

        let start = rows.n_rows();
        for i in 0..n {
            for tt in 1..t {
                rows.push(&[(v(i, tt), 1.0)], 1.0, 0.0, None);
            }
        }
        rows.close_block(Block::StartupUpper, start);
    }

    let num = rows.n_rows();
    let a = DMatrix::from_row_slice(num, n_vars, &rows.coeffs);
    let b = DVector::from_vec(rows.b);
    let fmax_rows = DVector::from_vec(rows.fmax);

    // Power balance per period.
    let mut h = DMatrix::zeros(t, n_vars);
    let mut h_dhat = DVector::zeros(t);
    for tt in 0..t {
        for i in 0..n {
            h[(tt, g(i, tt))] = 1.0;
            h_dhat[tt] += case.demand[i][tt];
        }
    }

    let mut binary_idx: Vec<usize> = (0..nt).map(|j| nt + j).collect();
    if multi_period {
        binary_idx.extend((0..n * (t - 1)).map(|j| 2 * nt + j));
    }

    StandardForm {
        dims,
        objective: m,
        a,
        b,
        fmax_rows,
        h,
        h_dhat,
        binary_idx,
        row_param: rows.param,
        theta_box: case.theta_max.iter().map(|&hi| (0.0, hi)).collect(),
        blocks: rows.blocks,
    }
}
