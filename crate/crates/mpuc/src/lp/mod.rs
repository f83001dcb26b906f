//! Fixed-parameter LP solves with exact vertex solutions and multipliers.
//!
//! [`solve_fixed`] evaluates the standard form at a parameter point, with an
//! optional partial assignment of the binary variables substituted out of the
//! matrix, and returns a [`PrimalDual`] whose multipliers satisfy the
//! stationarity, feasibility, sign and complementarity conditions to tight
//! tolerances. [`extract_active_set`] turns an optimal solve into the square
//! invertible basis that drives the critical-region algebra.

pub mod simplex;

use crate::error::{Error, Result};
use crate::model::StandardForm;
use nalgebra::{DMatrix, DVector};
use simplex::{DenseLp, EngineStatus, Farkas};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

/// Feasibility tolerance for reported solutions.
pub const TOL_FEAS: f64 = 1e-7;
/// Stationarity / sign tolerance.
pub const TOL_KKT: f64 = 1e-7;
/// Complementary-slackness tolerance.
pub const TOL_CS: f64 = 1e-6;
/// Multipliers below this count as zero when reading off the active set.
pub const TOL_MU_ZERO: f64 = 1e-8;

/// Partial assignment of binary variables by column index.
pub type Assignment = BTreeMap<usize, bool>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// KKT residuals of an optimal solve, measured on the reduced system (fixed
/// binary columns substituted out).
#[derive(Debug, Clone, Copy, Default)]
pub struct KktResiduals {
    pub stationarity: f64,
    pub primal: f64,
    pub dual_sign: f64,
    pub comp_slack: f64,
}

impl KktResiduals {
    pub fn within(&self, tol_kkt: f64, tol_feas: f64, tol_cs: f64) -> bool {
        self.stationarity <= tol_kkt
            && self.primal <= tol_feas
            && self.dual_sign <= tol_kkt
            && self.comp_slack <= tol_cs
    }
}

/// Infeasibility certificate over original row indices: nonnegative weights
/// on inequality rows plus free weights on equality rows combining to a zero
/// row with negative right-hand side.
#[derive(Debug, Clone)]
pub struct FarkasCertificate {
    pub row_weights: Vec<f64>,
    pub eq_weights: Vec<f64>,
}

impl FarkasCertificate {
    /// Coefficients of the certificate on θ: `grad·θ ≤ offset` is infeasible.
    pub fn theta_halfspace(&self, form: &StandardForm) -> (Vec<f64>, f64) {
        let k = form.theta_box.len();
        let mut grad = vec![0.0; k];
        let mut offset = 0.0;
        for (row, &w) in self.row_weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            if let Some(line) = form.row_param[row] {
                grad[line] += w;
            }
            offset += w * (form.b[row] + form.fmax_rows[row]);
        }
        for (j, &w) in self.eq_weights.iter().enumerate() {
            offset += w * form.h_dhat[j];
        }
        // w·rhs(θ) < 0 inside the halfspace grad·θ ≤ -offset.
        (grad, -offset)
    }
}

/// Primal-dual solution of a fixed solve. `omega` and `mu` are reported at
/// full length (fixed variables filled in, dropped rows carrying zero
/// multipliers).
#[derive(Debug, Clone)]
pub struct PrimalDual {
    pub status: SolveStatus,
    pub omega: DVector<f64>,
    pub lambda: DVector<f64>,
    pub mu: DVector<f64>,
    pub objective: f64,
    pub residuals: KktResiduals,
    pub farkas: Option<FarkasCertificate>,
    /// Inequality rows of the final basis (original indices, ascending).
    pub(crate) basis_rows: Vec<usize>,
    /// Inequality rhs at the solved parameter point (original indexing).
    pub(crate) rhs: DVector<f64>,
    /// Rows retained after substitution (original indices).
    pub(crate) kept_rows: Vec<usize>,
}

impl PrimalDual {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Active inequality rows `p1` and retained equality rows `p2`; together they
/// form the square invertible basis of the region algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSet {
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    pub degeneracy_flag: bool,
}

impl ActiveSet {
    /// Canonical key for de-duplicating discovered regions.
    pub fn key(&self) -> Vec<usize> {
        self.p1.clone()
    }
}

/// The reduced system after substituting a partial binary assignment.
pub(crate) struct Reduced {
    pub free_cols: Vec<usize>,
    pub kept_rows: Vec<usize>,
    pub a: DMatrix<f64>,
    /// Row constants b + F̂max with fixed-column contributions removed
    /// (θ terms not included).
    pub rhs_const: DVector<f64>,
    pub h: DMatrix<f64>,
    pub h_rhs: DVector<f64>,
    pub objective: DVector<f64>,
    pub obj_offset: f64,
    /// Row dropped because substitution zeroed it while its rhs went
    /// negative: constant infeasibility witness.
    pub dead_row: Option<usize>,
}

pub(crate) fn reduce(form: &StandardForm, fixed: &Assignment) -> Reduced {
    let n = form.n_vars();
    let free_cols: Vec<usize> = (0..n).filter(|c| !fixed.contains_key(c)).collect();
    let col_pos: BTreeMap<usize, usize> = free_cols
        .iter()
        .enumerate()
        .map(|(pos, &c)| (c, pos))
        .collect();

    let mut obj_offset = 0.0;
    for (&c, &val) in fixed {
        if val {
            obj_offset += form.objective[c];
        }
    }
    let objective = DVector::from_iterator(
        free_cols.len(),
        free_cols.iter().map(|&c| form.objective[c]),
    );

    let mut kept_rows = Vec::new();
    let mut rows_flat: Vec<f64> = Vec::new();
    let mut rhs_const = Vec::new();
    let mut dead_row = None;
    for row in 0..form.num_rows() {
        let mut shift = 0.0;
        for (&c, &val) in fixed {
            if val {
                shift += form.a[(row, c)];
            }
        }
        let mut any = false;
        let mut coeffs = vec![0.0; free_cols.len()];
        for (&c, &pos) in &col_pos {
            let v = form.a[(row, c)];
            if v != 0.0 {
                any = true;
            }
            coeffs[pos] = v;
        }
        let rc = form.b[row] + form.fmax_rows[row] - shift;
        if any {
            kept_rows.push(row);
            rows_flat.extend_from_slice(&coeffs);
            rhs_const.push(rc);
        } else if rc < -TOL_FEAS && form.row_param[row].is_none() && dead_row.is_none() {
            dead_row = Some(row);
        }
    }
    let a = DMatrix::from_row_slice(kept_rows.len(), free_cols.len(), &rows_flat);

    let mut h = DMatrix::zeros(form.h.nrows(), free_cols.len());
    let mut h_rhs = form.h_dhat.clone();
    for j in 0..form.h.nrows() {
        for (pos, &c) in free_cols.iter().enumerate() {
            h[(j, pos)] = form.h[(j, c)];
        }
        for (&c, &val) in fixed {
            if val {
                h_rhs[j] -= form.h[(j, c)];
            }
        }
    }

    Reduced {
        free_cols,
        kept_rows,
        a,
        rhs_const: DVector::from_vec(rhs_const),
        h,
        h_rhs,
        objective,
        obj_offset,
        dead_row,
    }
}

static MAX_STATIONARITY: AtomicU64 = AtomicU64::new(0);
static MAX_PRIMAL: AtomicU64 = AtomicU64::new(0);
static MAX_SIGN: AtomicU64 = AtomicU64::new(0);
static MAX_CS: AtomicU64 = AtomicU64::new(0);

fn track_max(cell: &AtomicU64, value: f64) {
    let mut cur = cell.load(Ordering::Relaxed);
    while f64::from_bits(cur) < value {
        match cell.compare_exchange(cur, value.to_bits(), Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => break,
            Err(c) => cur = c,
        }
    }
}

/// High-water KKT residuals across all optimal solves since the last reset.
pub fn residual_high_water() -> KktResiduals {
    KktResiduals {
        stationarity: f64::from_bits(MAX_STATIONARITY.load(Ordering::Relaxed)),
        primal: f64::from_bits(MAX_PRIMAL.load(Ordering::Relaxed)),
        dual_sign: f64::from_bits(MAX_SIGN.load(Ordering::Relaxed)),
        comp_slack: f64::from_bits(MAX_CS.load(Ordering::Relaxed)),
    }
}

pub fn reset_residual_high_water() {
    MAX_STATIONARITY.store(0, Ordering::Relaxed);
    MAX_PRIMAL.store(0, Ordering::Relaxed);
    MAX_SIGN.store(0, Ordering::Relaxed);
    MAX_CS.store(0, Ordering::Relaxed);
}

/// Solve the LP at a parameter point with a partial binary assignment
/// substituted out. Infeasibility and unboundedness are reported through the
/// returned status, never as an error.
pub fn solve_fixed(form: &StandardForm, theta: &[f64], fixed: &Assignment) -> Result<PrimalDual> {
    debug_assert_eq!(theta.len(), form.theta_box.len());
    let red = reduce(form, fixed);
    let num = form.num_rows();
    let rhs_full = form.rhs_at(theta);

    if let Some(row) = red.dead_row {
        let mut weights = vec![0.0; num];
        weights[row] = 1.0;
        return Ok(infeasible_result(
            form,
            rhs_full,
            red.kept_rows,
            FarkasCertificate {
                row_weights: weights,
                eq_weights: vec![0.0; form.h.nrows()],
            },
        ));
    }

    let mut ineq_rhs = red.rhs_const.clone();
    for (pos, &row) in red.kept_rows.iter().enumerate() {
        if let Some(k) = form.row_param[row] {
            ineq_rhs[pos] += theta[k];
        }
    }

    let lp = DenseLp {
        objective: red.objective.clone(),
        ineq: red.a.clone(),
        ineq_rhs,
        eq: red.h.clone(),
        eq_rhs: red.h_rhs.clone(),
    };
    let sol = simplex::solve(&lp)?;

    match sol.status {
        EngineStatus::Infeasible => {
            let farkas = lift_farkas(&red, num, sol.farkas.as_ref().unwrap());
            Ok(infeasible_result(form, rhs_full, red.kept_rows, farkas))
        }
        EngineStatus::Unbounded => Ok(PrimalDual {
            status: SolveStatus::Unbounded,
            omega: DVector::zeros(form.n_vars()),
            lambda: DVector::zeros(form.h.nrows()),
            mu: DVector::zeros(num),
            objective: f64::NEG_INFINITY,
            residuals: KktResiduals::default(),
            farkas: None,
            basis_rows: vec![],
            rhs: rhs_full,
            kept_rows: red.kept_rows,
        }),
        EngineStatus::Optimal => {
            let mut omega = DVector::zeros(form.n_vars());
            for (&c, &v) in fixed {
                omega[c] = if v { 1.0 } else { 0.0 };
            }
            for (pos, &c) in red.free_cols.iter().enumerate() {
                omega[c] = sol.x[pos];
            }
            let mut mu = DVector::zeros(num);
            for (pos, &row) in red.kept_rows.iter().enumerate() {
                mu[row] = sol.ineq_duals[pos];
            }
            let basis_rows: Vec<usize> =
                sol.basis_ineq.iter().map(|&pos| red.kept_rows[pos]).collect();

            // Residuals on the reduced system.
            let mut grad = red.objective.clone();
            grad += red.a.transpose() * &sol.ineq_duals;
            grad += red.h.transpose() * &sol.eq_duals;
            let ax = &red.a * &sol.x;
            let mut primal = 0.0f64;
            let mut cs = 0.0f64;
            for (pos, _) in red.kept_rows.iter().enumerate() {
                let slack = ax[pos] - lp.ineq_rhs[pos];
                primal = primal.max(slack);
                cs = cs.max((sol.ineq_duals[pos] * slack).abs());
            }
            let eq_res = (&red.h * &sol.x - &red.h_rhs).amax();
            let residuals = KktResiduals {
                stationarity: grad.amax(),
                primal: primal.max(eq_res).max(0.0),
                dual_sign: (-sol.ineq_duals.min()).max(0.0),
                comp_slack: cs,
            };
            track_max(&MAX_STATIONARITY, residuals.stationarity);
            track_max(&MAX_PRIMAL, residuals.primal);
            track_max(&MAX_SIGN, residuals.dual_sign);
            track_max(&MAX_CS, residuals.comp_slack);

            Ok(PrimalDual {
                status: SolveStatus::Optimal,
                omega,
                lambda: sol.eq_duals,
                mu,
                objective: sol.objective + red.obj_offset,
                residuals,
                farkas: None,
                basis_rows,
                rhs: rhs_full,
                kept_rows: red.kept_rows,
            })
        }
    }
}

fn lift_farkas(red: &Reduced, num: usize, f: &Farkas) -> FarkasCertificate {
    let mut row_weights = vec![0.0; num];
    for (pos, &row) in red.kept_rows.iter().enumerate() {
        row_weights[row] = f.ineq[pos].max(0.0);
    }
    FarkasCertificate {
        row_weights,
        eq_weights: f.eq.clone(),
    }
}

fn infeasible_result(
    form: &StandardForm,
    rhs: DVector<f64>,
    kept_rows: Vec<usize>,
    farkas: FarkasCertificate,
) -> PrimalDual {
    PrimalDual {
        status: SolveStatus::Infeasible,
        omega: DVector::zeros(form.n_vars()),
        lambda: DVector::zeros(form.h.nrows()),
        mu: DVector::zeros(form.num_rows()),
        objective: f64::INFINITY,
        residuals: KktResiduals::default(),
        farkas: Some(farkas),
        basis_rows: vec![],
        rhs,
        kept_rows,
    }
}

/// Read the active set off an optimal solve.
///
/// Rows with multipliers above `tol` always enter `p1`; if the count falls
/// short of a square basis the remaining slots are filled from the solver's
/// own binding basis rows (ascending), which keeps the completed basis both
/// invertible and dual-feasible. The degeneracy flag records that completion
/// happened or that extra rows were binding beyond the basis.
pub fn extract_active_set(
    sol: &PrimalDual,
    form: &StandardForm,
    tol: f64,
) -> Result<ActiveSet> {
    if sol.status != SolveStatus::Optimal {
        return Err(Error::BasisConstruction(
            "active set requested for a non-optimal solve".into(),
        ));
    }
    let mut p1: Vec<usize> = sol
        .basis_rows
        .iter()
        .cloned()
        .filter(|&r| sol.mu[r] > tol)
        .collect();
    let mut degenerate = p1.len() < sol.basis_rows.len();
    if p1.len() < sol.basis_rows.len() {
        for &r in &sol.basis_rows {
            if sol.mu[r] <= tol {
                p1.push(r);
            }
        }
        p1.sort_unstable();
    }
    // Binding rows beyond the basis also mark degeneracy.
    if !degenerate {
        let kept: std::collections::BTreeSet<usize> = sol.kept_rows.iter().cloned().collect();
        for row in 0..form.num_rows() {
            if !kept.contains(&row) || p1.contains(&row) {
                continue;
            }
            let val = form.a.row(row).transpose().dot(&sol.omega);
            if (val - sol.rhs[row]).abs() <= tol.max(1e-9) {
                degenerate = true;
                break;
            }
        }
    }
    Ok(ActiveSet {
        p1,
        p2: (0..form.h.nrows()).collect(),
        degeneracy_flag: degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases;
    use crate::model::{assemble_standard_form, validate_case};

    fn single_period_form() -> StandardForm {
        assemble_standard_form(&validate_case(cases::two_bus_single_period()).unwrap())
    }

    /// Root relaxation at θ = (0,0). The published display of this solve
    /// carries multipliers that violate stationarity and strong duality; the
    /// values asserted here are the unique KKT-consistent ones, matching the
    /// value-function slope -17 of the same worked example.
    #[test]
    fn relaxed_solve_at_origin() {
        let form = single_period_form();
        let sol = solve_fixed(&form, &[0.0, 0.0], &Assignment::new()).unwrap();
        assert!(sol.is_optimal());
        let want = [7.0, 8.0, 0.7, 0.8];
        for (g, w) in sol.omega.iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-8, "omega {:?}", sol.omega);
        }
        assert!((sol.objective - 85.6).abs() < 1e-8);
        assert!((sol.mu[0] - 17.0).abs() < 1e-8, "mu1 = {}", sol.mu[0]);
        assert!((sol.mu[4] - 1.8).abs() < 1e-8, "mu5 = {}", sol.mu[4]);
        assert!((sol.mu[5] - 1.5).abs() < 1e-8, "mu6 = {}", sol.mu[5]);
        assert!((sol.lambda[0] + 18.4).abs() < 1e-8, "lambda = {}", sol.lambda[0]);
        for r in [1, 2, 3, 6, 7, 8, 9] {
            assert!(sol.mu[r].abs() < 1e-9, "mu[{r}] = {}", sol.mu[r]);
        }
        assert!(sol.residuals.within(TOL_KKT, TOL_FEAS, TOL_CS));

        let active = extract_active_set(&sol, &form, TOL_MU_ZERO).unwrap();
        assert_eq!(active.p1, vec![0, 4, 5]);
        assert_eq!(active.p2, vec![0]);
        assert!(!active.degeneracy_flag);
    }

    /// Interior of the second critical region. The published active set for
    /// this vertex is {5,6,7} with μ₇ = 11, but the binding bound there is
    /// the commitment upper bound (row 9, 1-based) and stationarity together
    /// with strong duality forces its multiplier to 17.
    #[test]
    fn relaxed_solve_in_second_region() {
        let form = single_period_form();
        let sol = solve_fixed(&form, &[0.4, 0.0], &Assignment::new()).unwrap();
        assert!(sol.is_optimal());
        let want = [10.0, 5.0, 1.0, 0.5];
        for (g, w) in sol.omega.iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-8, "omega {:?}", sol.omega);
        }
        assert!((sol.objective - 80.5).abs() < 1e-8);
        assert!((sol.mu[4] - 3.5).abs() < 1e-8);
        assert!((sol.mu[5] - 1.5).abs() < 1e-8);
        assert!((sol.mu[8] - 17.0).abs() < 1e-8, "mu9 = {}", sol.mu[8]);
        assert!((sol.lambda[0] + 6.5).abs() < 1e-8);
        let active = extract_active_set(&sol, &form, TOL_MU_ZERO).unwrap();
        assert_eq!(active.p1, vec![4, 5, 8]);

        // The breakpoint itself: primal is unique, duals are degenerate.
        let sol = solve_fixed(&form, &[0.3, 0.0], &Assignment::new()).unwrap();
        for (g, w) in sol.omega.iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-8, "omega {:?}", sol.omega);
        }
        assert!(sol.residuals.within(TOL_KKT, TOL_FEAS, TOL_CS));
    }

    #[test]
    fn fixing_first_commitment_off_is_infeasible() {
        let form = single_period_form();
        let mut fixed = Assignment::new();
        fixed.insert(form.u_col(0, 0), false);
        let sol = solve_fixed(&form, &[0.0, 0.0], &fixed).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        let farkas = sol.farkas.as_ref().unwrap();
        // Certificate must cover the whole parameter box: no θ dependence,
        // negative constant side.
        let (grad, offset) = farkas.theta_halfspace(&form);
        assert!(grad.iter().all(|g| g.abs() < 1e-9) && offset > 1e-9,
            "grad {grad:?} offset {offset}");
    }

    #[test]
    fn fixing_both_commitments_on_matches_reference_pieces() {
        let form = single_period_form();
        let mut fixed = Assignment::new();
        fixed.insert(form.u_col(0, 0), true);
        fixed.insert(form.u_col(1, 0), true);
        let sol = solve_fixed(&form, &[0.0, 0.0], &fixed).unwrap();
        assert!(sol.is_optimal());
        assert!((sol.objective - 94.0).abs() < 1e-8);
        let sol = solve_fixed(&form, &[1.0, 0.0], &fixed).unwrap();
        assert!((sol.objective - 88.0).abs() < 1e-8);
    }

    #[test]
    fn duality_gap_is_zero_on_optimal_solves() {
        let form = single_period_form();
        for theta in [[0.0, 0.0], [0.15, 3.0], [0.3, 0.0], [5.0, 5.0], [10.0, 10.0]] {
            let sol = solve_fixed(&form, &theta, &Assignment::new()).unwrap();
            assert!(sol.is_optimal());
            let dual_obj = -sol.mu.dot(&sol.rhs) - sol.lambda.dot(&form.h_dhat);
            assert!(
                (sol.objective - dual_obj).abs() < 1e-6,
                "gap at {theta:?}: {} vs {dual_obj}",
                sol.objective
            );
        }
    }

    #[test]
    fn determinism_two_identical_solves() {
        let form = assemble_standard_form(
            &validate_case(cases::two_bus_three_period()).unwrap(),
        );
        let a = solve_fixed(&form, &[0.1, 0.0], &Assignment::new()).unwrap();
        let b = solve_fixed(&form, &[0.1, 0.0], &Assignment::new()).unwrap();
        assert_eq!(a.omega, b.omega);
        assert_eq!(a.mu, b.mu);
        assert_eq!(a.basis_rows, b.basis_rows);
    }

    #[test]
    fn three_period_root_matches_reference_values() {
        let form = assemble_standard_form(
            &validate_case(cases::two_bus_three_period()).unwrap(),
        );
        // Value checks on the open regions of the root relaxation.
        for (theta, want) in [
            (0.1, 254.1 - 10.5 * 0.1),
            (0.3, 254.0 - 10.0 * 0.3),
            (0.8, 253.8 - 9.5 * 0.8),
            (5.0, 242.4),
        ] {
            let sol = solve_fixed(&form, &[theta, 0.0], &Assignment::new()).unwrap();
            assert!(sol.is_optimal());
            assert!(
                (sol.objective - want).abs() < 1e-7,
                "z({theta}) = {}, want {want}",
                sol.objective
            );
            assert!(sol.residuals.within(TOL_KKT, TOL_FEAS, TOL_CS));
        }
    }
}
