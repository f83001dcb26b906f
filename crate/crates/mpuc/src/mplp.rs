//! Critical regions and piecewise-affine value functions of the parametric LP.
//!
//! From an optimal active set the square basis A_p gives the affine primal
//! solution ω*(θ) = A_p⁻¹(b_p + F̂_p + θ_p) and value z*(θ) = Mᵀω*(θ); the
//! inactive rows evaluated at ω*(θ) cut out the critical region over which
//! that basis stays optimal. [`explore`] covers a parameter polyhedron with
//! such regions by probing facet neighbours and subtracting what has been
//! found, recording infeasible parameter space separately.

use crate::error::{Error, Result};
use crate::geometry::{ParamSpace, Polyhedron};
use crate::lp::{self, ActiveSet, Assignment, SolveStatus};
use crate::model::StandardForm;
use nalgebra::{DMatrix, DVector};
use std::collections::{BTreeSet, VecDeque};

/// Affine primal solution, affine value and critical region of one active set.
#[derive(Debug, Clone)]
pub struct RegionSolution {
    pub active: ActiveSet,
    /// ω*(θ) = omega_w·θ + omega_w0 (full variable indexing; fixed binaries
    /// appear as constants).
    pub omega_w: DMatrix<f64>,
    pub omega_w0: DVector<f64>,
    /// z*(θ) = value_grad·θ + value_off.
    pub value_grad: Vec<f64>,
    pub value_off: f64,
    pub region: Polyhedron,
}

impl RegionSolution {
    pub fn omega_at(&self, theta: &[f64]) -> DVector<f64> {
        let th = DVector::from_column_slice(theta);
        &self.omega_w * th + &self.omega_w0
    }

    pub fn value_at(&self, theta: &[f64]) -> f64 {
        self.value_off
            + self
                .value_grad
                .iter()
                .zip(theta)
                .map(|(g, t)| g * t)
                .sum::<f64>()
    }
}

/// Cost-reduction rate of upgrading line `k` inside this region: the value
/// gradient restricted to θ_k, which sums the basis sensitivities of the
/// active parameterized rows belonging to that line.
pub fn value_gradient(rs: &RegionSolution, k: usize) -> f64 {
    rs.value_grad[k]
}

/// A collection of regions covering the feasible part of a parameter set,
/// plus the polyhedra where the problem is infeasible.
#[derive(Debug, Clone)]
pub struct ParametricSolution {
    pub regions: Vec<RegionSolution>,
    pub theta_box: Vec<(f64, f64)>,
    pub uncovered: Vec<Polyhedron>,
}

impl ParametricSolution {
    pub fn space(&self) -> ParamSpace {
        ParamSpace::from_box(&self.theta_box)
    }

    /// Lowest-index region containing the point.
    pub fn region_containing(&self, theta: &[f64]) -> Option<usize> {
        self.regions
            .iter()
            .position(|r| r.region.contains(theta, 1e-9))
    }

    pub fn value_at(&self, theta: &[f64]) -> Option<f64> {
        self.region_containing(theta)
            .map(|i| self.regions[i].value_at(theta))
    }

    pub fn is_infeasible_at(&self, theta: &[f64]) -> bool {
        self.region_containing(theta).is_none()
            && self.uncovered.iter().any(|u| u.contains(theta, 1e-9))
    }
}

/// Build the affine solution and critical region of an active set.
pub fn region_from_active_set(
    form: &StandardForm,
    active: &ActiveSet,
    fixed: &Assignment,
) -> Result<RegionSolution> {
    let red = lp::reduce(form, fixed);
    let n_free = red.free_cols.len();
    let n_eq = active.p2.len();
    if active.p1.len() + n_eq != n_free {
        return Err(Error::BasisConstruction(format!(
            "active set size {} + {} does not match {} free variables",
            active.p1.len(),
            n_eq,
            n_free
        )));
    }
    let pos_of: std::collections::BTreeMap<usize, usize> = red
        .kept_rows
        .iter()
        .enumerate()
        .map(|(pos, &row)| (row, pos))
        .collect();

    let k_dim = form.theta_box.len();
    let mut a_p = DMatrix::zeros(n_free, n_free);
    let mut theta_p = DMatrix::zeros(n_free, k_dim);
    let mut rhs_p = DVector::zeros(n_free);
    for (slot, &row) in active.p1.iter().enumerate() {
        let pos = *pos_of.get(&row).ok_or_else(|| {
            Error::BasisConstruction(format!("active row {row} eliminated by substitution"))
        })?;
        a_p.set_row(slot, &red.a.row(pos));
        rhs_p[slot] = red.rhs_const[pos];
        if let Some(k) = form.row_param[row] {
            theta_p[(slot, k)] = 1.0;
        }
    }
    for (off, &eq_row) in active.p2.iter().enumerate() {
        let slot = active.p1.len() + off;
        a_p.set_row(slot, &red.h.row(eq_row));
        rhs_p[slot] = red.h_rhs[eq_row];
    }

    let lu = a_p.clone().lu();
    let w_red = lu
        .solve(&theta_p)
        .ok_or(Error::SingularBasis)?;
    let w0_red = lu.solve(&rhs_p).ok_or(Error::SingularBasis)?;

    // Lift to full variable indexing.
    let n_full = form.n_vars();
    let mut omega_w = DMatrix::zeros(n_full, k_dim);
    let mut omega_w0 = DVector::zeros(n_full);
    for (&col, &val) in fixed {
        omega_w0[col] = if val { 1.0 } else { 0.0 };
    }
    for (pos, &col) in red.free_cols.iter().enumerate() {
        omega_w.set_row(col, &w_red.row(pos));
        omega_w0[col] = w0_red[pos];
    }

    let value_grad: Vec<f64> = (0..k_dim)
        .map(|k| red.objective.dot(&w_red.column(k).into_owned()))
        .collect();
    let value_off = red.objective.dot(&w0_red) + red.obj_offset;

    // Critical region: inactive rows evaluated on the affine solution.
    let space = ParamSpace::from_box(&form.theta_box);
    let mut region = Polyhedron::from_space(&space);
    let active_rows: BTreeSet<usize> = active.p1.iter().cloned().collect();
    for (pos, &row) in red.kept_rows.iter().enumerate() {
        if active_rows.contains(&row) {
            continue;
        }
        let a_s = red.a.row(pos).transpose();
        let mut coeffs: Vec<f64> = (0..k_dim)
            .map(|k| a_s.dot(&w_red.column(k).into_owned()))
            .collect();
        if let Some(k) = form.row_param[row] {
            coeffs[k] -= 1.0;
        }
        let rhs = red.rhs_const[pos] - a_s.dot(&w0_red);
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale <= 1e-11 {
            continue;
        }
        region.push_row(coeffs, rhs);
    }
    let region = region.prune_redundant(&space);

    Ok(RegionSolution {
        active: active.clone(),
        omega_w,
        omega_w0,
        value_grad,
        value_off,
        region,
    })
}

/// Cover `target` with critical regions of the LP under `fixed`.
///
/// Seeds at the target's most interior point, walks across each region facet
/// by a small step, and finishes with a subtraction sweep so that the union
/// of regions and infeasible polyhedra covers the target up to measure zero.
/// Infeasible probes contribute the Farkas halfspace of their certificate.
pub fn explore(
    form: &StandardForm,
    fixed: &Assignment,
    target: &Polyhedron,
) -> Result<ParametricSolution> {
    let space = ParamSpace::from_box(&form.theta_box);
    let eps_step = 1e-7 * space.diameter();
    let eps_interior = 1e-9 * space.diameter();

    let mut regions: Vec<RegionSolution> = vec![];
    let mut uncovered: Vec<Polyhedron> = vec![];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut discarded: Vec<(Vec<f64>, f64)> = vec![];

    let mut queue: VecDeque<Vec<f64>> = VecDeque::new();
    if let Some((center, _)) = target.chebyshev(&space) {
        queue.push_back(center);
    } else {
        return Ok(ParametricSolution {
            regions,
            theta_box: form.theta_box.clone(),
            uncovered,
        });
    }

    let probe =
        |theta: &[f64],
         regions: &mut Vec<RegionSolution>,
         uncovered: &mut Vec<Polyhedron>,
         seen: &mut BTreeSet<Vec<usize>>,
         queue: &mut VecDeque<Vec<f64>>,
         discarded: &mut Vec<(Vec<f64>, f64)>|
         -> Result<bool> {
            let sol = lp::solve_fixed(form, theta, fixed)?;
            match sol.status {
                SolveStatus::Unbounded => Err(Error::BasisConstruction(
                    "parametric exploration hit an unbounded LP".into(),
                )),
                SolveStatus::Infeasible => {
                    let (grad, off) = sol
                        .farkas
                        .as_ref()
                        .expect("infeasible solve carries a certificate")
                        .theta_halfspace(form);
                    let mut half = target.clone();
                    half.push_row(grad, off);
                    if half.has_interior(&space, eps_interior) {
                        uncovered.push(half.prune_redundant(&space));
                        Ok(true)
                    } else {
                        Ok(false)
                    }
                }
                SolveStatus::Optimal => {
                    let active = lp::extract_active_set(&sol, form, lp::TOL_MU_ZERO)?;
                    let key = active.key();
                    if seen.contains(&key) {
                        return Ok(false);
                    }
                    seen.insert(key);
                    let rs = region_from_active_set(form, &active, fixed)?;
                    let clipped = rs.region.intersect(target).prune_redundant(&space);
                    if !clipped.has_interior(&space, eps_interior) {
                        discarded.push((theta.to_vec(), sol.objective));
                        return Ok(false);
                    }
                    let mut rs = rs;
                    rs.region = clipped;
                    for fi in 0..rs.region.n_rows() {
                        if let Some((fpoint, normal)) = rs.region.facet_interior(fi, &space) {
                            let next: Vec<f64> = fpoint
                                .iter()
                                .zip(&normal)
                                .map(|(p, n)| p + eps_step * n)
                                .collect();
                            queue.push_back(next);
                        }
                    }
                    regions.push(rs);
                    Ok(true)
                }
            }
        };

    // Facet-stepping pass.
    let mut guard = 0usize;
    while let Some(theta) = queue.pop_front() {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::BasisConstruction(
                "region enumeration failed to terminate".into(),
            ));
        }
        if !target.contains(&theta, 1e-12) {
            continue;
        }
        if regions.iter().any(|r| r.region.contains(&theta, 1e-12)) {
            continue;
        }
        if uncovered.iter().any(|u| u.contains(&theta, -1e-9)) {
            continue;
        }
        probe(
            &theta,
            &mut regions,
            &mut uncovered,
            &mut seen,
            &mut queue,
            &mut discarded,
        )?;
    }

    // Completion sweep: subtract what is known and probe any remainder.
    let mut leftover: Vec<Polyhedron> = vec![target.clone()];
    for r in &regions {
        leftover = leftover
            .iter()
            .flat_map(|p| p.subtract(&r.region, &space))
            .collect();
    }
    for u in &uncovered {
        leftover = leftover
            .iter()
            .flat_map(|p| p.subtract(u, &space))
            .collect();
    }
    let mut guard = 0usize;
    while let Some(piece) = leftover.pop() {
        guard += 1;
        if guard > 10_000 {
            return Err(Error::BasisConstruction(
                "coverage sweep failed to terminate".into(),
            ));
        }
        let Some((center, radius)) = piece.chebyshev(&space) else {
            continue;
        };
        if !space.free_axes().is_empty() && radius <= eps_interior {
            continue;
        }
        if let Some(idx) = regions
            .iter()
            .position(|r| r.region.contains(&center, 1e-12))
        {
            let region = regions[idx].region.clone();
            leftover.extend(piece.subtract(&region, &space));
            continue;
        }
        if uncovered.iter().any(|u| u.contains(&center, 0.0)) {
            let hit = uncovered
                .iter()
                .find(|u| u.contains(&center, 0.0))
                .unwrap()
                .clone();
            leftover.extend(piece.subtract(&hit, &space));
            continue;
        }
        let before_regions = regions.len();
        let before_unc = uncovered.len();
        let advanced = probe(
            &center,
            &mut regions,
            &mut uncovered,
            &mut seen,
            &mut queue,
            &mut discarded,
        )?;
        queue.clear(); // facet probes are redundant inside the sweep
        if advanced {
            if regions.len() > before_regions {
                leftover.extend(piece.subtract(&regions[before_regions].region, &space));
            } else if uncovered.len() > before_unc {
                leftover.extend(piece.subtract(&uncovered[before_unc], &space));
            }
        }
        // A skipped probe (known active set with sliver region) drops the
        // piece: it carries no interior beyond tolerance of known space.
    }

    // Collapse duplicates and merge regions that share the same affine data.
    let regions = coalesce(regions, &space);

    // Degenerate bases discarded above must agree with whatever covers them.
    for (theta, z) in &discarded {
        if let Some(r) = regions.iter().find(|r| r.region.contains(theta, 1e-7)) {
            let zv = r.value_at(theta);
            if (zv - z).abs() > 1e-6 * (1.0 + z.abs()) {
                return Err(Error::BasisConstruction(format!(
                    "value mismatch {zv} vs {z} at a degenerate region point"
                )));
            }
        }
    }

    Ok(ParametricSolution {
        regions,
        theta_box: form.theta_box.clone(),
        uncovered,
    })
}

fn same_affine(a: &RegionSolution, b: &RegionSolution) -> bool {
    let scale = 1.0 + a.value_off.abs().max(b.value_off.abs());
    if (a.value_off - b.value_off).abs() > 1e-8 * scale {
        return false;
    }
    if a.value_grad
        .iter()
        .zip(&b.value_grad)
        .any(|(x, y)| (x - y).abs() > 1e-8 * scale)
    {
        return false;
    }
    let w_close = a
        .omega_w
        .iter()
        .zip(b.omega_w.iter())
        .all(|(x, y)| (x - y).abs() <= 1e-7 * scale);
    let w0_close = a
        .omega_w0
        .iter()
        .zip(b.omega_w0.iter())
        .all(|(x, y)| (x - y).abs() <= 1e-7 * scale);
    w_close && w0_close
}

/// Drop regions contained in an identical-affine sibling and merge adjacent
/// ones whose union is convex; keeps output order deterministic.
fn coalesce(mut regions: Vec<RegionSolution>, space: &ParamSpace) -> Vec<RegionSolution> {
    regions.sort_by(|a, b| a.active.p1.cmp(&b.active.p1));
    let mut alive: Vec<bool> = vec![true; regions.len()];
    for i in 0..regions.len() {
        if !alive[i] {
            continue;
        }
        for j in (i + 1)..regions.len() {
            if !alive[j] || !same_affine(&regions[i], &regions[j]) {
                continue;
            }
            if regions[j]
                .region
                .is_subset_of(&regions[i].region, space, 1e-9)
            {
                alive[j] = false;
            } else if regions[i]
                .region
                .is_subset_of(&regions[j].region, space, 1e-9)
            {
                let r = regions[j].region.clone();
                regions[i].region = r;
                alive[j] = false;
            } else if let Some(u) = regions[i]
                .region
                .union_if_convex(&regions[j].region, space)
            {
                regions[i].region = u;
                alive[j] = false;
            }
        }
    }
    regions
        .into_iter()
        .zip(alive)
        .filter_map(|(r, keep)| keep.then_some(r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases;
    use crate::geometry::ParamSpace;
    use crate::model::{assemble_standard_form, validate_case};

    fn single_period_form() -> StandardForm {
        assemble_standard_form(&validate_case(cases::two_bus_single_period()).unwrap())
    }

    fn three_period_form() -> StandardForm {
        assemble_standard_form(&validate_case(cases::two_bus_three_period()).unwrap())
    }

    fn box_of(form: &StandardForm) -> Polyhedron {
        Polyhedron::from_space(&ParamSpace::from_box(&form.theta_box))
    }

    #[test]
    fn first_region_affine_solution_and_region() {
        let form = single_period_form();
        let active = ActiveSet {
            p1: vec![0, 4, 5],
            p2: vec![0],
            degeneracy_flag: false,
        };
        let rs = region_from_active_set(&form, &active, &Assignment::new()).unwrap();
        // ω*(θ) = (7 + 10θ1, 8 - 10θ1, 0.7 + θ1, 0.8 - θ1)
        let w0 = [7.0, 8.0, 0.7, 0.8];
        let wcol = [10.0, -10.0, 1.0, -1.0];
        for i in 0..4 {
            assert!((rs.omega_w0[i] - w0[i]).abs() < 1e-9);
            assert!((rs.omega_w[(i, 0)] - wcol[i]).abs() < 1e-9);
            assert!(rs.omega_w[(i, 1)].abs() < 1e-9);
        }
        assert!((rs.value_off - 85.6).abs() < 1e-9);
        assert!((rs.value_grad[0] + 17.0).abs() < 1e-9);
        assert!(rs.value_grad[1].abs() < 1e-9);
        assert!((value_gradient(&rs, 0) + 17.0).abs() < 1e-9);

        // Region is {0 ≤ θ1 ≤ 0.3} × {0 ≤ θ2 ≤ 10}.
        let space = ParamSpace::from_box(&form.theta_box);
        let mut want = Polyhedron::from_space(&space);
        want.push_row(vec![1.0, 0.0], 0.3);
        let want = want.prune_redundant(&space);
        assert!(rs.region.is_subset_of(&want, &space, 1e-9));
        assert!(want.is_subset_of(&rs.region, &space, 1e-9));
    }

    #[test]
    fn second_region_constant_solution() {
        let form = single_period_form();
        let active = ActiveSet {
            p1: vec![4, 5, 8],
            p2: vec![0],
            degeneracy_flag: false,
        };
        let rs = region_from_active_set(&form, &active, &Assignment::new()).unwrap();
        let w0 = [10.0, 5.0, 1.0, 0.5];
        for i in 0..4 {
            assert!((rs.omega_w0[i] - w0[i]).abs() < 1e-9);
            assert!(rs.omega_w[(i, 0)].abs() < 1e-9);
        }
        assert!((rs.value_off - 80.5).abs() < 1e-9);
        assert!(rs.value_grad.iter().all(|g| g.abs() < 1e-9));

        let space = ParamSpace::from_box(&form.theta_box);
        let mut want = Polyhedron::from_space(&space);
        want.push_row(vec![-1.0, 0.0], -0.3);
        let want = want.prune_redundant(&space);
        assert!(rs.region.is_subset_of(&want, &space, 1e-9));
        assert!(want.is_subset_of(&rs.region, &space, 1e-9));
    }

    #[test]
    fn explore_single_period_root_finds_two_regions() {
        let form = single_period_form();
        let sol = explore(&form, &Assignment::new(), &box_of(&form)).unwrap();
        assert_eq!(sol.regions.len(), 2, "regions: {}", sol.regions.len());
        assert!(sol.uncovered.is_empty());
        let mut summaries: Vec<(f64, f64)> = sol
            .regions
            .iter()
            .map(|r| (r.value_grad[0], r.value_off))
            .collect();
        summaries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert!((summaries[0].0 + 17.0).abs() < 1e-8);
        assert!((summaries[0].1 - 85.6).abs() < 1e-8);
        assert!(summaries[1].0.abs() < 1e-8);
        assert!((summaries[1].1 - 80.5).abs() < 1e-8);
        // Value function continuity at the breakpoint.
        let za = sol.value_at(&[0.3, 5.0]).unwrap();
        assert!((za - 80.5).abs() < 1e-8);
    }

    #[test]
    fn explore_three_period_root_finds_four_regions() {
        let form = three_period_form();
        let sol = explore(&form, &Assignment::new(), &box_of(&form)).unwrap();
        let mut pieces: Vec<(f64, f64)> = sol
            .regions
            .iter()
            .map(|r| (r.value_grad[0], r.value_off))
            .collect();
        pieces.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(pieces.len(), 4, "pieces: {pieces:?}");
        let want = [
            (-10.5, 254.1),
            (-10.0, 254.0),
            (-9.5, 253.8),
            (0.0, 242.4),
        ];
        for ((gs, os), (gw, ow)) in pieces.iter().zip(want.iter()) {
            assert!((gs - gw).abs() < 1e-7, "slope {gs} vs {gw}");
            assert!((os - ow).abs() < 1e-7, "offset {os} vs {ow}");
        }
        // Breakpoints along θ1.
        let space = sol.space();
        let mut bps: Vec<f64> = vec![];
        for r in &sol.regions {
            let (lo, hi) = r.region.bounding_box(&space).unwrap();
            bps.push(lo[0]);
            bps.push(hi[0]);
        }
        bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bps.dedup_by(|a, b| (*a - *b).abs() < 1e-7);
        let want_bps = [0.0, 0.2, 0.4, 1.2, 10.0];
        assert_eq!(bps.len(), want_bps.len(), "breakpoints {bps:?}");
        for (g, w) in bps.iter().zip(want_bps.iter()) {
            assert!((g - w).abs() < 1e-7, "breakpoints {bps:?}");
        }
    }

    #[test]
    fn explore_without_parameters_returns_single_region() {
        let case = validate_case(cases::single_bus_no_lines()).unwrap();
        let form = assemble_standard_form(&case);
        let sol = explore(&form, &Assignment::new(), &box_of(&form)).unwrap();
        assert_eq!(sol.regions.len(), 1);
        assert!(sol.regions[0].value_grad.is_empty());
        // Cost: 5 MWh at cost 2 plus commitment of 0.5.
        let z = sol.regions[0].value_off;
        assert!((z - 10.5).abs() < 1e-8, "z = {z}");
    }

    #[test]
    fn explore_infeasible_assignment_reports_uncovered_box() {
        let form = single_period_form();
        let mut fixed = Assignment::new();
        fixed.insert(form.u_col(0, 0), false);
        let sol = explore(&form, &fixed, &box_of(&form)).unwrap();
        assert!(sol.regions.is_empty());
        assert_eq!(sol.uncovered.len(), 1);
        let space = sol.space();
        let full = Polyhedron::from_space(&space);
        assert!(full.is_subset_of(&sol.uncovered[0], &space, 1e-7));
    }

    #[test]
    fn pointwise_agreement_with_fixed_solves() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let form = three_period_form();
        let sol = explore(&form, &Assignment::new(), &box_of(&form)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let theta = vec![rng.gen_range(0.0..10.0), 0.0];
            let direct = lp::solve_fixed(&form, &theta, &Assignment::new()).unwrap();
            let piecewise = sol.value_at(&theta).unwrap();
            assert!(
                (piecewise - direct.objective).abs() < 1e-6,
                "mismatch at {theta:?}: {piecewise} vs {}",
                direct.objective
            );
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let form = single_period_form();
        let sol = explore(&form, &Assignment::new(), &box_of(&form)).unwrap();
        let h = 1e-4 * 10.0;
        for theta in [[0.15, 5.0], [2.0, 5.0]] {
            let idx = sol.region_containing(&theta).unwrap();
            let r = &sol.regions[idx];
            for k in 0..2 {
                let mut up = theta;
                up[k] += h;
                let mut dn = theta;
                dn[k] -= h;
                let zu = lp::solve_fixed(&form, &up, &Assignment::new()).unwrap().objective;
                let zd = lp::solve_fixed(&form, &dn, &Assignment::new()).unwrap().objective;
                let fd = (zu - zd) / (2.0 * h);
                assert!(
                    (fd - value_gradient(r, k)).abs() < 1e-5,
                    "fd {fd} vs grad {}",
                    value_gradient(r, k)
                );
            }
        }
    }

    #[test]
    fn relaxed_value_is_convex_and_nonincreasing() {
        let form = three_period_form();
        let sol = explore(&form, &Assignment::new(), &box_of(&form)).unwrap();
        for r in &sol.regions {
            assert!(r.value_grad.iter().all(|&g| g <= 1e-9), "positive slope");
        }
        // Slopes must be non-decreasing left to right along θ1 (convexity).
        let space = sol.space();
        let mut by_left: Vec<(f64, f64)> = sol
            .regions
            .iter()
            .map(|r| {
                let (lo, _) = r.region.bounding_box(&space).unwrap();
                (lo[0], r.value_grad[0])
            })
            .collect();
        by_left.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in by_left.windows(2) {
            assert!(w[0].1 <= w[1].1 + 1e-9, "slopes not convex: {by_left:?}");
        }
    }
}
