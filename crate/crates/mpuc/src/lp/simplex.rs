//! Dense vertex solver for inequality-form linear programs.
//!
//! Solves `min cᵀx  s.t.  A x ≤ b, E x = d` by maintaining a working set of n
//! tight, linearly independent rows — the slack-form revised simplex viewed
//! through its nonbasic slacks. The optimum is always reported at a vertex
//! together with the row multipliers of the final basis, which is what the
//! downstream critical-region algebra consumes.
//!
//! Infeasible problems yield a Farkas certificate: nonnegative inequality
//! weights and free equality weights whose row combination is zero while the
//! combined right-hand side is negative.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Dual tolerance: a working-row multiplier below -TOL_DUAL triggers a pivot.
const TOL_DUAL: f64 = 1e-9;
/// Directional derivative threshold in the ratio test.
const TOL_DIR: f64 = 1e-10;
/// Rank tolerance for greedy row selection.
const TOL_RANK: f64 = 1e-9;
/// Rebuild the basis inverse after this many rank-1 updates.
const REFRESH_EVERY: usize = 64;
/// Consecutive zero-step pivots before switching to Bland's rule.
const STALL_LIMIT: usize = 64;

/// A linear program over dense rows.
#[derive(Debug, Clone)]
pub struct DenseLp {
    pub objective: DVector<f64>,
    pub ineq: DMatrix<f64>,
    pub ineq_rhs: DVector<f64>,
    pub eq: DMatrix<f64>,
    pub eq_rhs: DVector<f64>,
}

impl DenseLp {
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Infeasibility certificate: `ineqᵀ·A + eqᵀ·E = 0`, `ineq ≥ 0`,
/// `ineqᵀ·b + eqᵀ·d < 0`.
#[derive(Debug, Clone)]
pub struct Farkas {
    pub ineq: Vec<f64>,
    pub eq: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EngineSolution {
    pub status: EngineStatus,
    pub x: DVector<f64>,
    /// Multipliers per inequality row (zero off the basis).
    pub ineq_duals: DVector<f64>,
    /// Multipliers per equality row.
    pub eq_duals: DVector<f64>,
    pub objective: f64,
    /// Inequality rows in the final working set, ascending.
    pub basis_ineq: Vec<usize>,
    pub farkas: Option<Farkas>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowRef {
    Eq(usize),
    Ineq(usize),
}

struct Basis<'a> {
    lp: &'a DenseLp,
    work: Vec<RowRef>,
    binv: DMatrix<f64>,
    updates: usize,
}

impl<'a> Basis<'a> {
    fn row(&self, r: RowRef) -> DVector<f64> {
        match r {
            RowRef::Eq(j) => self.lp.eq.row(j).transpose(),
            RowRef::Ineq(i) => self.lp.ineq.row(i).transpose(),
        }
    }

    fn rhs(&self, r: RowRef) -> f64 {
        match r {
            RowRef::Eq(j) => self.lp.eq_rhs[j],
            RowRef::Ineq(i) => self.lp.ineq_rhs[i],
        }
    }

    fn matrix(&self) -> DMatrix<f64> {
        let n = self.work.len();
        let mut m = DMatrix::zeros(n, n);
        for (slot, &r) in self.work.iter().enumerate() {
            m.set_row(slot, &self.row(r).transpose());
        }
        m
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.matrix();
        self.binv = m
            .try_inverse()
            .ok_or_else(|| Error::BasisConstruction("singular working set".into()))?;
        self.updates = 0;
        Ok(())
    }

    fn new(lp: &'a DenseLp, work: Vec<RowRef>) -> Result<Self> {
        let n = lp.n_vars();
        let mut b = Basis {
            lp,
            work,
            binv: DMatrix::zeros(n, n),
            updates: 0,
        };
        b.refactor()?;
        Ok(b)
    }

    fn vertex(&self) -> DVector<f64> {
        let rhs = DVector::from_iterator(
            self.work.len(),
            self.work.iter().map(|&r| self.rhs(r)),
        );
        &self.binv * rhs
    }

    /// Slot multipliers solving Bᵀy = -c.
    fn slot_duals(&self, c: &DVector<f64>) -> DVector<f64> {
        -(self.binv.transpose() * c)
    }

    /// Direction that releases the given slot while keeping other rows tight.
    fn release_direction(&self, slot: usize) -> DVector<f64> {
        -self.binv.column(slot).into_owned()
    }

    /// Replace the row in `slot` by inequality row `enter`; `a_dot_d` is the
    /// entering row's directional derivative from the ratio test.
    fn replace(&mut self, slot: usize, enter: usize, a_dot_d: f64) -> Result<()> {
        let old = self.row(self.work[slot]);
        let new = self.lp.ineq.row(enter).transpose();
        self.work[slot] = RowRef::Ineq(enter);
        if self.updates >= REFRESH_EVERY || a_dot_d.abs() < 1e3 * TOL_DIR {
            return self.refactor();
        }
        let u = &new - &old;
        let binv_e = self.binv.column(slot).into_owned();
        let denom = 1.0 + u.dot(&binv_e);
        if denom.abs() < 1e-10 {
            return self.refactor();
        }
        let ut_binv_row = u.transpose() * &self.binv;
        let correction = (&binv_e * ut_binv_row) / denom;
        self.binv -= correction;
        self.updates += 1;
        Ok(())
    }
}

/// Greedily pick linearly independent rows from `candidates`, preferring
/// earlier entries, until `target` rows are chosen. Returns the chosen subset.
fn greedy_independent(
    rows: &[(RowRef, DVector<f64>)],
    target: usize,
    n: usize,
) -> Vec<RowRef> {
    let mut ortho: Vec<DVector<f64>> = Vec::with_capacity(target);
    let mut chosen = Vec::with_capacity(target);
    for (r, row) in rows {
        if chosen.len() == target {
            break;
        }
        let norm0 = row.norm();
        if norm0 <= TOL_RANK {
            continue;
        }
        let mut v = row.clone();
        for u in &ortho {
            let proj = u.dot(&v);
            v.axpy(-proj, u, 1.0);
        }
        let norm = v.norm();
        if norm > TOL_RANK * (1.0 + norm0) {
            ortho.push(v / norm);
            chosen.push(*r);
        }
        if ortho.len() == n {
            break;
        }
    }
    chosen
}

struct PivotEnd {
    x: DVector<f64>,
    work: Vec<RowRef>,
    unbounded: bool,
}

/// Primal active-set iteration from a feasible vertex.
fn iterate(lp: &DenseLp, work: Vec<RowRef>, x0: DVector<f64>) -> Result<PivotEnd> {
    let n = lp.n_vars();
    let m_i = lp.ineq.nrows();
    let mut basis = Basis::new(lp, work)?;
    let mut x = x0;
    let mut ax = &lp.ineq * &x;
    let mut bland = false;
    let mut stall = 0usize;
    let max_iter = 10_000 + 200 * (n + m_i);

    for _ in 0..max_iter {
        let y = basis.slot_duals(&lp.objective);

        // Leaving slot: the working inequality whose multiplier is negative.
        let mut slot_out: Option<usize> = None;
        if bland {
            let mut best_id = usize::MAX;
            for (slot, &r) in basis.work.iter().enumerate() {
                if let RowRef::Ineq(i) = r {
                    if y[slot] < -TOL_DUAL && i < best_id {
                        best_id = i;
                        slot_out = Some(slot);
                    }
                }
            }
        } else {
            let mut best = -TOL_DUAL;
            for (slot, &r) in basis.work.iter().enumerate() {
                if let RowRef::Ineq(_) = r {
                    if y[slot] < best {
                        best = y[slot];
                        slot_out = Some(slot);
                    }
                }
            }
        }
        let Some(slot) = slot_out else {
            return Ok(PivotEnd {
                x,
                work: basis.work.clone(),
                unbounded: false,
            });
        };

        let d = basis.release_direction(slot);
        let ad = &lp.ineq * &d;

        // Ratio test over rows outside the working set.
        let mut in_work = vec![false; m_i];
        for &r in &basis.work {
            if let RowRef::Ineq(i) = r {
                in_work[i] = true;
            }
        }
        let mut alpha = f64::INFINITY;
        let mut enter: Option<usize> = None;
        let mut enter_ad = 0.0;
        if bland {
            for i in 0..m_i {
                if in_work[i] || ad[i] <= TOL_DIR {
                    continue;
                }
                let slack = (lp.ineq_rhs[i] - ax[i]).max(0.0);
                let step = slack / ad[i];
                if step < alpha - 1e-12 {
                    alpha = step;
                    enter = Some(i);
                    enter_ad = ad[i];
                }
            }
        } else {
            // Two passes: find the tightest step, then the most stable pivot
            // among rows within a hair of it.
            for i in 0..m_i {
                if in_work[i] || ad[i] <= TOL_DIR {
                    continue;
                }
                let slack = (lp.ineq_rhs[i] - ax[i]).max(0.0);
                let step = slack / ad[i];
                if step < alpha {
                    alpha = step;
                }
            }
            if alpha.is_finite() {
                let window = alpha + 1e-12 * (1.0 + alpha.abs());
                let mut best_ad = 0.0;
                for i in 0..m_i {
                    if in_work[i] || ad[i] <= TOL_DIR {
                        continue;
                    }
                    let slack = (lp.ineq_rhs[i] - ax[i]).max(0.0);
                    let step = slack / ad[i];
                    if step <= window && ad[i] > best_ad {
                        best_ad = ad[i];
                        enter = Some(i);
                        enter_ad = ad[i];
                        alpha = step;
                    }
                }
            }
        }

        let Some(enter_row) = enter else {
            return Ok(PivotEnd {
                x,
                work: basis.work.clone(),
                unbounded: true,
            });
        };

        if alpha <= 1e-14 {
            stall += 1;
            if stall >= STALL_LIMIT {
                bland = true;
            }
        } else {
            stall = 0;
        }

        x.axpy(alpha, &d, 1.0);
        ax.axpy(alpha, &ad, 1.0);
        basis.replace(slot, enter_row, enter_ad)?;
        if basis.updates == 0 {
            // Fresh factorization: resync the iterate exactly.
            x = basis.vertex();
            ax = &lp.ineq * &x;
        }
    }
    Err(Error::BasisConstruction(
        "pivot iteration limit exceeded".into(),
    ))
}

fn initial_rows(lp: &DenseLp) -> Vec<(RowRef, DVector<f64>)> {
    let mut rows: Vec<(RowRef, DVector<f64>)> = Vec::new();
    for j in 0..lp.eq.nrows() {
        rows.push((RowRef::Eq(j), lp.eq.row(j).transpose()));
    }
    // Later blocks hold the simple bound rows; prefer them for the crash
    // basis so the starting vertex sits at variable bounds.
    for i in (0..lp.ineq.nrows()).rev() {
        rows.push((RowRef::Ineq(i), lp.ineq.row(i).transpose()));
    }
    rows
}

/// Solve a dense LP from scratch. The feasible set must be pointed (have at
/// least one vertex); pointedness failure surfaces as a basis-construction
/// error.
pub fn solve(lp: &DenseLp) -> Result<EngineSolution> {
    let n = lp.n_vars();
    let m_i = lp.ineq.nrows();
    let m_e = lp.eq.nrows();

    let candidates = initial_rows(lp);
    let work0 = greedy_independent(&candidates, n, n);
    if work0.len() < n {
        return Err(Error::BasisConstruction(format!(
            "row rank {} below variable count {n}; feasible set is not pointed",
            work0.len()
        )));
    }
    let n_eq_used = work0.iter().filter(|r| matches!(r, RowRef::Eq(_))).count();

    let basis = Basis::new(lp, work0.clone())?;
    let x0 = basis.vertex();

    // Equality rows skipped as dependent must still be consistent.
    if n_eq_used < m_e {
        let res = &lp.eq * &x0 - &lp.eq_rhs;
        for j in 0..m_e {
            if !work0.contains(&RowRef::Eq(j)) && res[j].abs() > 1e-7 * (1.0 + lp.eq_rhs[j].abs())
            {
                return Ok(infeasible_from_dependent_eq(lp, j));
            }
        }
    }

    let ax0 = &lp.ineq * &x0;
    let violated: Vec<usize> = (0..m_i)
        .filter(|&i| ax0[i] > lp.ineq_rhs[i] + 1e-9 * (1.0 + lp.ineq_rhs[i].abs()))
        .collect();

    let (x, work) = if violated.is_empty() {
        (x0, work0)
    } else {
        match phase_one(lp, &work0, &x0, &ax0, &violated)? {
            PhaseOneEnd::Feasible { x, work } => (x, work),
            PhaseOneEnd::Infeasible(farkas) => {
                return Ok(EngineSolution {
                    status: EngineStatus::Infeasible,
                    x: DVector::zeros(n),
                    ineq_duals: DVector::zeros(m_i),
                    eq_duals: DVector::zeros(m_e),
                    objective: f64::INFINITY,
                    basis_ineq: vec![],
                    farkas: Some(farkas),
                });
            }
        }
    };

    let end = iterate(lp, work, x)?;
    if end.unbounded {
        return Ok(EngineSolution {
            status: EngineStatus::Unbounded,
            x: end.x,
            ineq_duals: DVector::zeros(m_i),
            eq_duals: DVector::zeros(m_e),
            objective: f64::NEG_INFINITY,
            basis_ineq: vec![],
            farkas: None,
        });
    }

    // Polish: refactor the final basis and recompute the vertex and duals.
    let mut final_basis = Basis::new(lp, end.work.clone())?;
    final_basis.refactor()?;
    let x = final_basis.vertex();
    let y = final_basis.slot_duals(&lp.objective);

    let mut ineq_duals = DVector::zeros(m_i);
    let mut eq_duals = DVector::zeros(m_e);
    let mut basis_ineq = vec![];
    for (slot, &r) in final_basis.work.iter().enumerate() {
        match r {
            RowRef::Eq(j) => eq_duals[j] = y[slot],
            RowRef::Ineq(i) => {
                ineq_duals[i] = y[slot];
                basis_ineq.push(i);
            }
        }
    }
    basis_ineq.sort_unstable();
    let objective = lp.objective.dot(&x);
    Ok(EngineSolution {
        status: EngineStatus::Optimal,
        x,
        ineq_duals,
        eq_duals,
        objective,
        basis_ineq,
        farkas: None,
    })
}

enum PhaseOneEnd {
    Feasible {
        x: DVector<f64>,
        work: Vec<RowRef>,
    },
    Infeasible(Farkas),
}

/// Minimize total violation with one elastic variable per violated row.
fn phase_one(
    lp: &DenseLp,
    work0: &[RowRef],
    x0: &DVector<f64>,
    ax0: &DVector<f64>,
    violated: &[usize],
) -> Result<PhaseOneEnd> {
    let n = lp.n_vars();
    let m_i = lp.ineq.nrows();
    let m_e = lp.eq.nrows();
    let v = violated.len();
    let n_ext = n + v;

    let mut ineq = DMatrix::zeros(m_i + v, n_ext);
    let mut ineq_rhs = DVector::zeros(m_i + v);
    for i in 0..m_i {
        for j in 0..n {
            ineq[(i, j)] = lp.ineq[(i, j)];
        }
        ineq_rhs[i] = lp.ineq_rhs[i];
    }
    for (slot, &i) in violated.iter().enumerate() {
        ineq[(i, n + slot)] = -1.0;
        // t_slot >= 0
        ineq[(m_i + slot, n + slot)] = -1.0;
        ineq_rhs[m_i + slot] = 0.0;
    }
    let mut eq = DMatrix::zeros(m_e, n_ext);
    for j in 0..m_e {
        for c in 0..n {
            eq[(j, c)] = lp.eq[(j, c)];
        }
    }
    let mut objective = DVector::zeros(n_ext);
    for slot in 0..v {
        objective[n + slot] = 1.0;
    }
    let elastic = DenseLp {
        objective,
        ineq,
        ineq_rhs,
        eq: eq.clone(),
        eq_rhs: lp.eq_rhs.clone(),
    };

    let mut work: Vec<RowRef> = work0.to_vec();
    work.extend(violated.iter().map(|&i| RowRef::Ineq(i)));
    let mut x_ext = DVector::zeros(n_ext);
    for j in 0..n {
        x_ext[j] = x0[j];
    }
    for (slot, &i) in violated.iter().enumerate() {
        x_ext[n + slot] = ax0[i] - lp.ineq_rhs[i];
    }

    let end = iterate(&elastic, work, x_ext)?;
    if end.unbounded {
        return Err(Error::BasisConstruction(
            "phase one reported unbounded".into(),
        ));
    }
    let total: f64 = (0..v).map(|slot| end.x[n + slot].max(0.0)).sum();
    let scale = 1.0 + lp.ineq_rhs.amax().max(lp.eq_rhs.amax());
    if total > 1e-7 * scale {
        // Duals of the elastic optimum certify infeasibility.
        let basis = Basis::new(&elastic, end.work.clone())?;
        let y = basis.slot_duals(&elastic.objective);
        let mut f_ineq = vec![0.0; m_i];
        let mut f_eq = vec![0.0; m_e];
        for (slot, &r) in basis.work.iter().enumerate() {
            match r {
                RowRef::Eq(j) => f_eq[j] = y[slot],
                RowRef::Ineq(i) if i < m_i => f_ineq[i] = y[slot].max(0.0),
                RowRef::Ineq(_) => {}
            }
        }
        return Ok(PhaseOneEnd::Infeasible(Farkas {
            ineq: f_ineq,
            eq: f_eq,
        }));
    }

    // Project back: gather tight original rows and rebuild a working set.
    let x = DVector::from_iterator(n, (0..n).map(|j| end.x[j]));
    let ax = &lp.ineq * &x;
    let mut candidates: Vec<(RowRef, DVector<f64>)> = Vec::new();
    for j in 0..m_e {
        candidates.push((RowRef::Eq(j), lp.eq.row(j).transpose()));
    }
    // Rows from the final elastic working set first: their x-parts span R^n.
    let mut tight_first: Vec<usize> = end
        .work
        .iter()
        .filter_map(|r| match r {
            RowRef::Ineq(i) if *i < m_i => Some(*i),
            _ => None,
        })
        .collect();
    tight_first.sort_unstable();
    let mut seen = vec![false; m_i];
    for &i in &tight_first {
        seen[i] = true;
        candidates.push((RowRef::Ineq(i), lp.ineq.row(i).transpose()));
    }
    for i in 0..m_i {
        if !seen[i] && (ax[i] - lp.ineq_rhs[i]).abs() <= 1e-8 * (1.0 + lp.ineq_rhs[i].abs()) {
            candidates.push((RowRef::Ineq(i), lp.ineq.row(i).transpose()));
        }
    }
    let work = greedy_independent(&candidates, n, n);
    if work.len() < n {
        return Err(Error::BasisConstruction(
            "phase one ended off-vertex".into(),
        ));
    }
    Ok(PhaseOneEnd::Feasible { x, work })
}

fn infeasible_from_dependent_eq(lp: &DenseLp, row: usize) -> EngineSolution {
    // Least-squares combination of the other equalities reproducing this row.
    let m_e = lp.eq.nrows();
    let others: Vec<usize> = (0..m_e).filter(|&j| j != row).collect();
    let mut at = DMatrix::zeros(lp.n_vars(), others.len());
    for (c, &j) in others.iter().enumerate() {
        at.set_column(c, &lp.eq.row(j).transpose());
    }
    let target = lp.eq.row(row).transpose();
    let svd = at.svd(true, true);
    let coef = svd.solve(&target, 1e-10).unwrap_or_else(|_| DVector::zeros(others.len()));
    let mut f_eq = vec![0.0; m_e];
    for (c, &j) in others.iter().enumerate() {
        f_eq[j] = coef[c];
    }
    f_eq[row] = -1.0;
    // Flip so the combined rhs is negative.
    let combined: f64 = (0..m_e).map(|j| f_eq[j] * lp.eq_rhs[j]).sum();
    if combined > 0.0 {
        for w in f_eq.iter_mut() {
            *w = -*w;
        }
    }
    EngineSolution {
        status: EngineStatus::Infeasible,
        x: DVector::zeros(lp.n_vars()),
        ineq_duals: DVector::zeros(lp.ineq.nrows()),
        eq_duals: DVector::zeros(m_e),
        objective: f64::INFINITY,
        basis_ineq: vec![],
        farkas: Some(Farkas {
            ineq: vec![0.0; lp.ineq.nrows()],
            eq: f_eq,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(
        c: &[f64],
        a: &[&[f64]],
        b: &[f64],
        e: &[&[f64]],
        d: &[f64],
    ) -> DenseLp {
        let n = c.len();
        let flat_a: Vec<f64> = a.iter().flat_map(|r| r.iter().cloned()).collect();
        let flat_e: Vec<f64> = e.iter().flat_map(|r| r.iter().cloned()).collect();
        DenseLp {
            objective: DVector::from_row_slice(c),
            ineq: DMatrix::from_row_slice(a.len(), n, &flat_a),
            ineq_rhs: DVector::from_row_slice(b),
            eq: DMatrix::from_row_slice(e.len(), n, &flat_e),
            eq_rhs: DVector::from_row_slice(d),
        }
    }

    fn check_kkt(lp: &DenseLp, sol: &EngineSolution) {
        let mut grad = lp.objective.clone();
        grad += lp.ineq.transpose() * &sol.ineq_duals;
        grad += lp.eq.transpose() * &sol.eq_duals;
        assert!(grad.amax() < 1e-7, "stationarity violated: {grad:?}");
        let ax = &lp.ineq * &sol.x;
        for i in 0..lp.ineq.nrows() {
            assert!(ax[i] <= lp.ineq_rhs[i] + 1e-7, "primal row {i}");
            assert!(sol.ineq_duals[i] >= -1e-9, "sign row {i}");
            assert!(
                (sol.ineq_duals[i] * (ax[i] - lp.ineq_rhs[i])).abs() < 1e-6,
                "complementarity row {i}"
            );
        }
        let ex = &lp.eq * &sol.x - &lp.eq_rhs;
        assert!(ex.amax() < 1e-7, "equality violated");
    }

    #[test]
    fn solves_simple_box_lp() {
        // min -x - 2y on the unit square.
        let p = lp(
            &[-1.0, -2.0],
            &[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]],
            &[1.0, 1.0, 0.0, 0.0],
            &[],
            &[],
        );
        let sol = solve(&p).unwrap();
        assert_eq!(sol.status, EngineStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.x[1] - 1.0).abs() < 1e-9);
        assert!((sol.objective + 3.0).abs() < 1e-9);
        check_kkt(&p, &sol);
    }

    #[test]
    fn solves_with_equality_and_reports_duals() {
        // min 3x1 + 5x2 with x1 + x2 = 15, phase one needed.
        let p = lp(
            &[3.0, 5.0],
            &[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]],
            &[10.0, 10.0, 0.0, 0.0],
            &[&[1.0, 1.0]],
            &[15.0],
        );
        let sol = solve(&p).unwrap();
        assert_eq!(sol.status, EngineStatus::Optimal);
        assert!((sol.x[0] - 10.0).abs() < 1e-9);
        assert!((sol.x[1] - 5.0).abs() < 1e-9);
        assert!((sol.objective - 55.0).abs() < 1e-9);
        check_kkt(&p, &sol);
        // x2's dual: lambda = -5, mu on x1<=10 is 2.
        assert!((sol.eq_duals[0] + 5.0).abs() < 1e-9);
        assert!((sol.ineq_duals[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn detects_unbounded() {
        let p = lp(&[-1.0, 0.0], &[&[0.0, 1.0], &[0.0, -1.0], &[-1.0, 0.0]], &[1.0, 0.0, 0.0], &[], &[]);
        let sol = solve(&p).unwrap();
        assert_eq!(sol.status, EngineStatus::Unbounded);
    }

    #[test]
    fn infeasible_yields_valid_farkas() {
        // x <= 0 and x >= 1.
        let p = lp(
            &[1.0, 0.0],
            &[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0]],
            &[0.0, -1.0, 1.0, 0.0],
            &[],
            &[],
        );
        let sol = solve(&p).unwrap();
        assert_eq!(sol.status, EngineStatus::Infeasible);
        let f = sol.farkas.unwrap();
        let mut combo = DVector::zeros(2);
        let mut rhs = 0.0;
        for (i, w) in f.ineq.iter().enumerate() {
            assert!(*w >= -1e-9);
            combo += p.ineq.row(i).transpose() * *w;
            rhs += w * p.ineq_rhs[i];
        }
        assert!(combo.amax() < 1e-7, "combination not zero: {combo:?}");
        assert!(rhs < -1e-9, "combined rhs not negative: {rhs}");
    }

    #[test]
    fn matches_vertex_enumeration_on_random_lps() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..200 {
            let n = rng.gen_range(2..=4);
            let extra = rng.gen_range(1..=4);
            let mut rows: Vec<Vec<f64>> = vec![];
            let mut rhs: Vec<f64> = vec![];
            // Box plus random cuts keeps the region bounded.
            for j in 0..n {
                let mut up = vec![0.0; n];
                up[j] = 1.0;
                rows.push(up.clone());
                rhs.push(rng.gen_range(0.5..3.0));
                let mut lo = vec![0.0; n];
                lo[j] = -1.0;
                rows.push(lo);
                rhs.push(rng.gen_range(0.0..1.0));
            }
            for _ in 0..extra {
                rows.push((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
                rhs.push(rng.gen_range(-0.5..2.0));
            }
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let flat: Vec<f64> = rows.iter().flatten().cloned().collect();
            let p = DenseLp {
                objective: DVector::from_row_slice(&c),
                ineq: DMatrix::from_row_slice(rows.len(), n, &flat),
                ineq_rhs: DVector::from_row_slice(&rhs),
                eq: DMatrix::zeros(0, n),
                eq_rhs: DVector::zeros(0),
            };

            // Brute-force: every n-subset of rows is a candidate basis.
            let m = rows.len();
            let mut best: Option<f64> = None;
            let mut subset: Vec<usize> = (0..n).collect();
            loop {
                let mat = DMatrix::from_fn(n, n, |r, cidx| p.ineq[(subset[r], cidx)]);
                if let Some(inv) = mat.try_inverse() {
                    let b_sub =
                        DVector::from_iterator(n, subset.iter().map(|&i| p.ineq_rhs[i]));
                    let x = inv * b_sub;
                    let ax = &p.ineq * &x;
                    let feasible =
                        (0..m).all(|i| ax[i] <= p.ineq_rhs[i] + 1e-9);
                    if feasible {
                        let obj = p.objective.dot(&x);
                        best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                    }
                }
                // next combination
                let mut idx = n;
                while idx > 0 {
                    idx -= 1;
                    if subset[idx] != idx + m - n {
                        subset[idx] += 1;
                        for j in idx + 1..n {
                            subset[j] = subset[j - 1] + 1;
                        }
                        break;
                    }
                    if idx == 0 {
                        subset.clear();
                        break;
                    }
                }
                if subset.is_empty() {
                    break;
                }
            }

            let sol = solve(&p).unwrap();
            match best {
                Some(expect) => {
                    assert_eq!(sol.status, EngineStatus::Optimal, "trial {trial}");
                    assert!(
                        (sol.objective - expect).abs() < 1e-6,
                        "trial {trial}: got {} want {expect}",
                        sol.objective
                    );
                    check_kkt(&p, &sol);
                }
                None => {
                    assert_eq!(sol.status, EngineStatus::Infeasible, "trial {trial}");
                }
            }
        }
    }
}
