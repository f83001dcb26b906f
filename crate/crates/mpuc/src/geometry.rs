//! Halfspace polyhedra over the parameter box.
//!
//! Regions live in the full K-dimensional parameter space, but lines whose
//! upgrade interval has zero width are pinned to their fixed value; all
//! geometric queries run over the free axes only. Polyhedra are closed, so
//! adjacent regions overlap on shared facets; membership queries use a small
//! tolerance and callers resolve ties by taking the lowest-index region.

use crate::error::{Error, Result};
use crate::lp::simplex::{self, DenseLp, EngineStatus};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The parameter box with its pinned and free axes.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpace {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ParamSpace {
    pub fn from_box(theta_box: &[(f64, f64)]) -> Self {
        ParamSpace {
            lo: theta_box.iter().map(|b| b.0).collect(),
            hi: theta_box.iter().map(|b| b.1).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Axes with positive width.
    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| self.hi[k] - self.lo[k] > 0.0)
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l).powi(2))
            .sum::<f64>()
            .sqrt()
            .max(1e-12)
    }

    /// Pinned axes hold their lower-bound value.
    pub fn pin_point(&self, free_vals: &[f64]) -> Vec<f64> {
        let free = self.free_axes();
        let mut point = self.lo.clone();
        for (pos, &axis) in free.iter().enumerate() {
            point[axis] = free_vals[pos];
        }
        point
    }
}

/// Closed polyhedron { θ : rows·θ ≤ rhs } in the full parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

const TOL_GEOM: f64 = 1e-9;

impl Polyhedron {
    pub fn from_space(space: &ParamSpace) -> Self {
        let d = space.dim();
        let mut rows = vec![];
        let mut rhs = vec![];
        for k in 0..d {
            let mut up = vec![0.0; d];
            up[k] = 1.0;
            rows.push(up);
            rhs.push(space.hi[k]);
            let mut lo = vec![0.0; d];
            lo[k] = -1.0;
            rows.push(lo);
            rhs.push(-space.lo[k]);
        }
        Polyhedron { rows, rhs }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, row: Vec<f64>, rhs: f64) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut out = self.clone();
        for (row, &b) in other.rows.iter().zip(&other.rhs) {
            out.push_row(row.clone(), b);
        }
        out
    }

    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, &b)| {
            let v: f64 = row.iter().zip(point).map(|(a, x)| a * x).sum();
            v <= b + tol
        })
    }

    /// Restrict a row to the free axes, folding pinned values into the rhs.
    /// Returns None for rows that become constant (vacuous or, with negative
    /// slack, marking the polyhedron empty via `ConstRow`).
    fn reduced_rows(&self, space: &ParamSpace) -> ReducedRows {
        let free = space.free_axes();
        let mut rows = vec![];
        let mut rhs = vec![];
        let mut orig = vec![];
        let mut empty = false;
        for (idx, (row, &b)) in self.rows.iter().zip(&self.rhs).enumerate() {
            let mut coeffs: Vec<f64> = free.iter().map(|&k| row[k]).collect();
            let pinned_shift: f64 = (0..space.dim())
                .filter(|k| !free.contains(k))
                .map(|k| row[k] * space.lo[k])
                .sum();
            let b_red = b - pinned_shift;
            let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm <= TOL_GEOM {
                if b_red < -1e-7 {
                    empty = true;
                }
                continue;
            }
            for c in coeffs.iter_mut() {
                *c /= norm;
            }
            rows.push(coeffs);
            rhs.push(b_red / norm);
            orig.push(idx);
        }
        ReducedRows {
            rows,
            rhs,
            orig,
            constant_empty: empty,
        }
    }

    /// Chebyshev center over the free axes: the most interior point and its
    /// radius. `None` when the polyhedron is empty (or a pinned-row
    /// contradiction makes it so).
    pub fn chebyshev(&self, space: &ParamSpace) -> Option<(Vec<f64>, f64)> {
        let red = self.reduced_rows(space);
        if red.constant_empty {
            return None;
        }
        let d = space.free_axes().len();
        if d == 0 {
            // Fully pinned box: the single point is "interior" iff all rows
            // accept it.
            let point = space.lo.clone();
            return if self.contains(&point, 1e-9) {
                Some((point, 0.0))
            } else {
                None
            };
        }
        let m = red.rows.len();
        let big = space.diameter();
        let mut ineq = DMatrix::zeros(m + 2, d + 1);
        let mut ineq_rhs = DVector::zeros(m + 2);
        for (i, (row, &b)) in red.rows.iter().zip(&red.rhs).enumerate() {
            for (j, &c) in row.iter().enumerate() {
                ineq[(i, j)] = c;
            }
            ineq[(i, d)] = 1.0; // rows are L2-normalized
            ineq_rhs[i] = b;
        }
        ineq[(m, d)] = -1.0;
        ineq_rhs[m] = 0.0;
        ineq[(m + 1, d)] = 1.0;
        ineq_rhs[m + 1] = big;
        let mut objective = DVector::zeros(d + 1);
        objective[d] = -1.0;
        let lp = DenseLp {
            objective,
            ineq,
            ineq_rhs,
            eq: DMatrix::zeros(0, d + 1),
            eq_rhs: DVector::zeros(0),
        };
        let sol = simplex::solve(&lp).ok()?;
        if sol.status != EngineStatus::Optimal {
            return None;
        }
        let radius = sol.x[d];
        if radius < -1e-9 {
            return None;
        }
        let free_vals: Vec<f64> = (0..d).map(|j| sol.x[j]).collect();
        Some((space.pin_point(&free_vals), radius.max(0.0)))
    }

    pub fn is_empty(&self, space: &ParamSpace) -> bool {
        self.chebyshev(space).is_none()
    }

    /// True when the interior radius relative to the free axes exceeds eps.
    pub fn has_interior(&self, space: &ParamSpace, eps: f64) -> bool {
        match self.chebyshev(space) {
            Some((_, r)) => {
                if space.free_axes().is_empty() {
                    true
                } else {
                    r > eps
                }
            }
            None => false,
        }
    }

    /// Maximize `dir·θ` over the polyhedron (free axes; pinned contribute a
    /// constant). Returns the optimal value.
    fn support(&self, space: &ParamSpace, dir: &[f64]) -> Option<f64> {
        let red = self.reduced_rows(space);
        if red.constant_empty {
            return None;
        }
        let free = space.free_axes();
        let d = free.len();
        let pinned_part: f64 = (0..space.dim())
            .filter(|k| !free.contains(k))
            .map(|k| dir[k] * space.lo[k])
            .sum();
        if d == 0 {
            return self.contains(&space.lo, 1e-9).then_some(pinned_part);
        }
        let m = red.rows.len();
        let mut ineq = DMatrix::zeros(m, d);
        let mut ineq_rhs = DVector::zeros(m);
        for (i, (row, &b)) in red.rows.iter().zip(&red.rhs).enumerate() {
            for (j, &c) in row.iter().enumerate() {
                ineq[(i, j)] = c;
            }
            ineq_rhs[i] = b;
        }
        let objective = DVector::from_iterator(d, free.iter().map(|&k| -dir[k]));
        let lp = DenseLp {
            objective,
            ineq,
            ineq_rhs,
            eq: DMatrix::zeros(0, d),
            eq_rhs: DVector::zeros(0),
        };
        let sol = simplex::solve(&lp).ok()?;
        match sol.status {
            EngineStatus::Optimal => Some(-sol.objective + pinned_part),
            _ => None,
        }
    }

    /// Drop duplicate and redundant rows. The result's rows are exactly the
    /// facets when the polyhedron is full-dimensional over the free axes.
    pub fn prune_redundant(&self, space: &ParamSpace) -> Polyhedron {
        let red = self.reduced_rows(space);
        if red.constant_empty || red.rows.is_empty() {
            return Polyhedron {
                rows: self.rows.clone(),
                rhs: self.rhs.clone(),
            };
        }
        // Deduplicate parallel rows, keeping the tightest.
        let m = red.rows.len();
        let mut keep = vec![true; m];
        for i in 0..m {
            if !keep[i] {
                continue;
            }
            for j in (i + 1)..m {
                if !keep[j] {
                    continue;
                }
                let same = red.rows[i]
                    .iter()
                    .zip(&red.rows[j])
                    .all(|(a, b)| (a - b).abs() <= 1e-9);
                if same {
                    if red.rhs[j] < red.rhs[i] - 1e-12 {
                        keep[i] = false;
                    } else {
                        keep[j] = false;
                    }
                }
            }
        }
        // LP redundancy test on the survivors.
        let candidates: Vec<usize> = (0..m).filter(|&i| keep[i]).collect();
        let mut final_keep = keep.clone();
        for &i in &candidates {
            // Maximize row i over the other surviving rows.
            let others: Vec<usize> = candidates
                .iter()
                .cloned()
                .filter(|&j| j != i && final_keep[j])
                .collect();
            if others.is_empty() {
                continue;
            }
            let d = red.rows[0].len();
            let mut ineq = DMatrix::zeros(others.len(), d);
            let mut ineq_rhs = DVector::zeros(others.len());
            for (pos, &j) in others.iter().enumerate() {
                for (c, &v) in red.rows[j].iter().enumerate() {
                    ineq[(pos, c)] = v;
                }
                ineq_rhs[pos] = red.rhs[j];
            }
            let objective = DVector::from_iterator(d, red.rows[i].iter().map(|&v| -v));
            let lp = DenseLp {
                objective,
                ineq,
                ineq_rhs,
                eq: DMatrix::zeros(0, d),
                eq_rhs: DVector::zeros(0),
            };
            if let Ok(sol) = simplex::solve(&lp) {
                match sol.status {
                    EngineStatus::Optimal if -sol.objective <= red.rhs[i] + 1e-9 => {
                        final_keep[i] = false;
                    }
                    _ => {}
                }
            }
        }
        let mut rows = vec![];
        let mut rhs = vec![];
        for (pos, &oi) in red.orig.iter().enumerate() {
            if final_keep[pos] {
                rows.push(self.rows[oi].clone());
                rhs.push(self.rhs[oi]);
            }
        }
        Polyhedron { rows, rhs }
    }

    /// A point in the relative interior of the facet cut out by `row`,
    /// together with the outward unit normal over the free axes (embedded in
    /// full coordinates). `None` when the facet is empty or degenerate.
    pub fn facet_interior(
        &self,
        row_idx: usize,
        space: &ParamSpace,
    ) -> Option<(Vec<f64>, Vec<f64>)> {
        let red = self.reduced_rows(space);
        let pos = red.orig.iter().position(|&o| o == row_idx)?;
        let free = space.free_axes();
        let d = free.len();
        let m = red.rows.len();
        let big = space.diameter();
        // Chebyshev within the facet hyperplane.
        let mut ineq = DMatrix::zeros(m - 1 + 2, d + 1);
        let mut ineq_rhs = DVector::zeros(m - 1 + 2);
        let mut r = 0;
        for j in 0..m {
            if j == pos {
                continue;
            }
            for (c, &v) in red.rows[j].iter().enumerate() {
                ineq[(r, c)] = v;
            }
            ineq[(r, d)] = 1.0;
            ineq_rhs[r] = red.rhs[j];
            r += 1;
        }
        ineq[(r, d)] = -1.0;
        ineq[(r + 1, d)] = 1.0;
        ineq_rhs[r + 1] = big;
        let mut eq = DMatrix::zeros(1, d + 1);
        for (c, &v) in red.rows[pos].iter().enumerate() {
            eq[(0, c)] = v;
        }
        let eq_rhs = DVector::from_element(1, red.rhs[pos]);
        let mut objective = DVector::zeros(d + 1);
        objective[d] = -1.0;
        let lp = DenseLp {
            objective,
            ineq,
            ineq_rhs,
            eq,
            eq_rhs,
        };
        let sol = simplex::solve(&lp).ok()?;
        if sol.status != EngineStatus::Optimal {
            return None;
        }
        if d > 1 && sol.x[d] <= 1e-10 * big {
            // Lower-dimensional facet relative to the region; skip it.
            return None;
        }
        let free_vals: Vec<f64> = (0..d).map(|j| sol.x[j]).collect();
        let mut normal = vec![0.0; space.dim()];
        for (c, &axis) in free.iter().enumerate() {
            normal[axis] = red.rows[pos][c];
        }
        Some((space.pin_point(&free_vals), normal))
    }

    /// Closed decomposition of `self \ other`: one piece per row of `other`,
    /// piece i keeping rows 0..i satisfied and violating row i.
    pub fn subtract(&self, other: &Polyhedron, space: &ParamSpace) -> Vec<Polyhedron> {
        let other_red = other.prune_redundant(space);
        let mut pieces = vec![];
        let mut prefix: Vec<(Vec<f64>, f64)> = vec![];
        for (row, &b) in other_red.rows.iter().zip(&other_red.rhs) {
            let mut piece = self.clone();
            for (pr, pb) in &prefix {
                piece.push_row(pr.clone(), *pb);
            }
            let flipped: Vec<f64> = row.iter().map(|&v| -v).collect();
            piece.push_row(flipped, -b);
            // Lower-dimensional slivers carry no parameter-space volume.
            if piece.has_interior(space, 1e-9 * space.diameter()) {
                pieces.push(piece.prune_redundant(space));
            }
            prefix.push((row.clone(), b));
        }
        pieces
    }

    /// Max violation of `other`'s rows over `self`; `self ⊆ other` when ≤ tol.
    pub fn is_subset_of(&self, other: &Polyhedron, space: &ParamSpace, tol: f64) -> bool {
        for (row, &b) in other.rows.iter().zip(&other.rhs) {
            match self.support(space, row) {
                Some(v) => {
                    if v > b + tol {
                        return false;
                    }
                }
                None => return true, // self empty
            }
        }
        true
    }

    /// Axis-aligned bounding box over the free axes.
    pub fn bounding_box(&self, space: &ParamSpace) -> Option<(Vec<f64>, Vec<f64>)> {
        let d = space.dim();
        let mut lo = space.lo.clone();
        let mut hi = space.hi.clone();
        for k in space.free_axes() {
            let mut dir = vec![0.0; d];
            dir[k] = 1.0;
            hi[k] = self.support(space, &dir)?;
            dir[k] = -1.0;
            lo[k] = -self.support(space, &dir)?;
        }
        Some((lo, hi))
    }

    /// Deterministic uniform sample by rejection from the bounding box.
    pub fn sample<R: Rng>(
        &self,
        rng: &mut R,
        space: &ParamSpace,
        count: usize,
    ) -> Result<Vec<Vec<f64>>> {
        let (lo, hi) = self
            .bounding_box(space)
            .ok_or_else(|| Error::EmptyRegion("sampling an empty region".into()))?;
        let free = space.free_axes();
        let mut out = Vec::with_capacity(count);
        let mut guard = 0usize;
        while out.len() < count {
            guard += 1;
            if guard > 100_000 * count.max(1) {
                // Thin region: fall back to its most interior point.
                let (c, _) = self
                    .chebyshev(space)
                    .ok_or_else(|| Error::EmptyRegion("sampling an empty region".into()))?;
                while out.len() < count {
                    out.push(c.clone());
                }
                break;
            }
            let mut point = space.lo.clone();
            for &k in &free {
                point[k] = rng.gen_range(0.0..=1.0) * (hi[k] - lo[k]) + lo[k];
            }
            if self.contains(&point, TOL_GEOM) {
                out.push(point);
            }
        }
        Ok(out)
    }

    /// Convex-union merge: returns the union polyhedron when `self ∪ other`
    /// is itself convex, testing the candidate hull row set.
    pub fn union_if_convex(&self, other: &Polyhedron, space: &ParamSpace) -> Option<Polyhedron> {
        let p = self.prune_redundant(space);
        let q = other.prune_redundant(space);
        let mut candidate = Polyhedron {
            rows: vec![],
            rhs: vec![],
        };
        let mut removed_p: Vec<(Vec<f64>, f64)> = vec![];
        for (row, &b) in p.rows.iter().zip(&p.rhs) {
            match q.support(space, row) {
                Some(v) if v <= b + 1e-9 => candidate.push_row(row.clone(), b),
                Some(_) => removed_p.push((row.clone(), b)),
                None => return None,
            }
        }
        let mut removed_q: Vec<(Vec<f64>, f64)> = vec![];
        for (row, &b) in q.rows.iter().zip(&q.rhs) {
            match p.support(space, row) {
                Some(v) if v <= b + 1e-9 => candidate.push_row(row.clone(), b),
                Some(_) => removed_q.push((row.clone(), b)),
                None => return None,
            }
        }
        if removed_p.is_empty() || removed_q.is_empty() {
            // One contains the other.
            return Some(if removed_p.is_empty() { p } else { q });
        }
        // Union is convex iff no candidate point violates one removed row
        // from each side simultaneously.
        for (rp, bp) in &removed_p {
            for (rq, bq) in &removed_q {
                let mut probe = candidate.clone();
                probe.push_row(rp.iter().map(|v| -v).collect(), -bp - 1e-9);
                probe.push_row(rq.iter().map(|v| -v).collect(), -bq - 1e-9);
                if !probe.is_empty(space) {
                    return None;
                }
            }
        }
        Some(candidate.prune_redundant(space))
    }
}

struct ReducedRows {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    orig: Vec<usize>,
    constant_empty: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space2() -> ParamSpace {
        ParamSpace {
            lo: vec![0.0, 0.0],
            hi: vec![10.0, 10.0],
        }
    }

    #[test]
    fn chebyshev_of_box() {
        let space = space2();
        let poly = Polyhedron::from_space(&space);
        let (c, r) = poly.chebyshev(&space).unwrap();
        assert!((c[0] - 5.0).abs() < 1e-7 && (c[1] - 5.0).abs() < 1e-7);
        assert!((r - 5.0).abs() < 1e-7);
    }

    #[test]
    fn pinned_axis_reduces_dimension() {
        let space = ParamSpace {
            lo: vec![0.0, 0.0],
            hi: vec![10.0, 0.0],
        };
        assert_eq!(space.free_axes(), vec![0]);
        let mut poly = Polyhedron::from_space(&space);
        poly.push_row(vec![1.0, 5.0], 4.0); // θ1 + 5θ2 ≤ 4 → θ1 ≤ 4
        let (c, r) = poly.chebyshev(&space).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-7);
        assert!((c[1]).abs() < 1e-12);
        assert!((r - 2.0).abs() < 1e-7);
    }

    #[test]
    fn prune_keeps_only_facets() {
        let space = space2();
        let mut poly = Polyhedron::from_space(&space);
        poly.push_row(vec![1.0, 0.0], 3.0); // tightens θ1 ≤ 3
        poly.push_row(vec![1.0, 1.0], 50.0); // redundant
        poly.push_row(vec![1.0, 0.0], 7.0); // duplicate direction, looser
        let pruned = poly.prune_redundant(&space);
        assert_eq!(pruned.n_rows(), 4, "{pruned:?}");
        let (_, r) = pruned.chebyshev(&space).unwrap();
        assert!((r - 1.5).abs() < 1e-7);
    }

    #[test]
    fn subtract_splits_box() {
        let space = space2();
        let poly = Polyhedron::from_space(&space);
        let mut half = Polyhedron::from_space(&space);
        half.push_row(vec![1.0, 0.0], 4.0);
        let pieces = poly.subtract(&half, &space);
        assert_eq!(pieces.len(), 1);
        let (c, _) = pieces[0].chebyshev(&space).unwrap();
        assert!(c[0] >= 4.0 - 1e-9);
        // Subtracting the whole box leaves nothing.
        assert!(poly.subtract(&poly, &space).is_empty());
    }

    #[test]
    fn facet_interior_and_normal() {
        let space = space2();
        let mut poly = Polyhedron::from_space(&space);
        poly.push_row(vec![1.0, 0.0], 3.0);
        let pruned = poly.prune_redundant(&space);
        let idx = pruned
            .rows
            .iter()
            .position(|r| (r[0] - 1.0).abs() < 1e-12 && r[1].abs() < 1e-12 )
            .unwrap();
        // Prefer the tightened row: rhs 3.
        let idx = if (pruned.rhs[idx] - 3.0).abs() < 1e-9 {
            idx
        } else {
            pruned
                .rows
                .iter()
                .enumerate()
                .position(|(i, r)| (r[0] - 1.0).abs() < 1e-12 && (pruned.rhs[i] - 3.0).abs() < 1e-9)
                .unwrap()
        };
        let (point, normal) = pruned.facet_interior(idx, &space).unwrap();
        assert!((point[0] - 3.0).abs() < 1e-7);
        assert!(point[1] > 1.0 && point[1] < 9.0);
        assert!((normal[0] - 1.0).abs() < 1e-9 && normal[1].abs() < 1e-9);
    }

    #[test]
    fn union_of_adjacent_boxes_merges() {
        let space = space2();
        let mut left = Polyhedron::from_space(&space);
        left.push_row(vec![1.0, 0.0], 4.0);
        let mut right = Polyhedron::from_space(&space);
        right.push_row(vec![-1.0, 0.0], -4.0);
        let merged = left.union_if_convex(&right, &space).unwrap();
        let full = Polyhedron::from_space(&space);
        assert!(merged.is_subset_of(&full, &space, 1e-9));
        assert!(full.is_subset_of(&merged, &space, 1e-9));

        // Boxes overlapping only in a corner do not merge.
        let mut a = Polyhedron::from_space(&space);
        a.push_row(vec![1.0, 0.0], 4.0);
        a.push_row(vec![0.0, 1.0], 4.0);
        let mut b = Polyhedron::from_space(&space);
        b.push_row(vec![-1.0, 0.0], -4.0);
        b.push_row(vec![0.0, -1.0], -4.0);
        assert!(a.union_if_convex(&b, &space).is_none());
    }

    #[test]
    fn samples_land_inside() {
        let space = space2();
        let mut poly = Polyhedron::from_space(&space);
        poly.push_row(vec![1.0, 1.0], 6.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples = poly.sample(&mut rng, &space, 64).unwrap();
        assert_eq!(samples.len(), 64);
        for s in &samples {
            assert!(poly.contains(s, 1e-9));
        }
        // Determinism.
        let mut rng2 = ChaCha8Rng::seed_from_u64(3);
        let samples2 = poly.sample(&mut rng2, &space, 64).unwrap();
        assert_eq!(samples, samples2);
    }
}
