//! Backward-induction Monte Carlo solver for the conditioned optimal
//! stopping problem, in original (t, x) coordinates.
//!
//! For each interior grid cell (t_i, x_j) the solver draws K pinning points
//! from the posterior (in bridge coordinates, mapped back through the gain),
//! advances one exact conditional bridge step per pin, and estimates the
//! continuation value by interpolating the next time slice. The cell stops
//! iff the continuation estimate does not beat the immediate gain x_j.
//!
//! Every cell owns the RNG substream (seed, i, j), so the result is
//! bit-identical for any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::CoefficientCurve;
use crate::error::{Error, Result};
use crate::gmp::GmpModel;
use crate::priors::{self, Frame, Prior};
use crate::rng::{Substream, TAG_POLICY, TAG_SOLVE};
use crate::timechange::TimeChange;

/// Row-major matrix of f64.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Time/space grid and Monte Carlo parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverGrid {
    /// n+1 strictly increasing times, t_0 = 0, t_n = T.
    pub t: Vec<f64>,
    /// m+1 strictly increasing space nodes spanning [x_lo, x_hi].
    pub x: Vec<f64>,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
}

impl SolverGrid {
    /// The reference grids: t_i = T ln(1 + i(e-1)/n) (uniform for the
    /// transformed clock when T = 1) and uniform x on [lo, hi].
    /// Defaults elsewhere: lo = -3, hi = 3, n = m = 1000, k = 10^4.
    pub fn default_grid(
        horizon: f64,
        n: usize,
        m: usize,
        k: usize,
        bounds: (f64, f64),
        seed: u64,
    ) -> Result<Self> {
        let (lo, hi) = bounds;
        if !(lo < hi) {
            return Err(Error::Precondition(format!(
                "x bounds must be increasing, got [{lo}, {hi}]"
            )));
        }
        if n < 2 || m < 2 || k < 1 {
            return Err(Error::Precondition(
                "grid needs n >= 2, m >= 2, k >= 1".into(),
            ));
        }
        let e1 = std::f64::consts::E - 1.0;
        let t = (0..=n)
            .map(|i| horizon * (1.0 + i as f64 * e1 / n as f64).ln())
            .collect();
        let x = (0..=m)
            .map(|j| lo + j as f64 * (hi - lo) / m as f64)
            .collect();
        Ok(SolverGrid {
            t,
            x,
            n,
            m,
            k,
            seed,
        })
    }

    pub fn x_lo(&self) -> f64 {
        self.x[0]
    }

    pub fn x_hi(&self) -> f64 {
        *self.x.last().unwrap()
    }
}

/// Serializable model description (the curves plus horizon and x0).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub alpha: CoefficientCurve,
    pub beta: CoefficientCurve,
    pub zeta: CoefficientCurve,
    pub horizon: f64,
    pub x0: f64,
}

impl ModelDescriptor {
    pub fn of(model: &GmpModel) -> Self {
        ModelDescriptor {
            alpha: model.alpha().clone(),
            beta: model.beta().clone(),
            zeta: model.zeta().clone(),
            horizon: model.horizon(),
            x0: model.x0(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveMeta {
    pub seed: u64,
    pub k: usize,
    pub runtime_seconds: f64,
    pub workers: usize,
    pub fallback_cells: usize,
    pub sup_posterior_variance: f64,
}

/// Output of the backward induction: value matrix V, decision matrix D,
/// per-cell continuation estimates and their standard errors.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub grid: SolverGrid,
    pub v: Mat,
    pub d: Vec<bool>,
    pub cont: Mat,
    pub se: Mat,
    pub model: ModelDescriptor,
    pub prior: Prior,
    pub meta: SolveMeta,
}

impl SolveResult {
    #[inline]
    pub fn stopped(&self, i: usize, j: usize) -> bool {
        self.d[i * (self.grid.m + 1) + j]
    }

    pub fn value_at_origin(&self) -> Result<(f64, f64)> {
        let x0 = self.model.x0;
        let dx = (self.grid.x_hi() - self.grid.x_lo()) / self.grid.m as f64;
        let j = ((x0 - self.grid.x_lo()) / dx).round() as usize;
        if (self.grid.x[j] - x0).abs() > 1e-9 * dx.max(1.0) {
            return Err(Error::Precondition(format!(
                "x0 = {x0} is not a grid node; nearest is {}",
                self.grid.x[j]
            )));
        }
        Ok((self.v.get(0, j), self.se.get(0, j)))
    }
}

/// Warn when the posterior variance exceeds this cap on the probe grid
/// (the regularity assumption behind the theory is then strained).
const VARIANCE_CAP: f64 = 10.0;

/// Runs Algorithm-style backward induction. `workers = 0` uses the global
/// rayon pool; any positive count builds a dedicated pool (results are
/// identical either way).
pub fn solve(
    model: &GmpModel,
    prior: &Prior,
    grid: &SolverGrid,
    workers: usize,
) -> Result<SolveResult> {
    if prior.frame != Frame::Original {
        return Err(Error::Precondition(
            "solve expects the prior in the original frame".into(),
        ));
    }
    if grid.x_lo() > model.x0() || grid.x_hi() < model.x0() {
        return Err(Error::Precondition(format!(
            "x0 = {} outside the grid box [{}, {}]",
            model.x0(),
            grid.x_lo(),
            grid.x_hi()
        )));
    }
    if (grid.t[grid.n] - model.horizon()).abs() > 1e-9 * model.horizon() {
        return Err(Error::Precondition(
            "time grid must end at the model horizon".into(),
        ));
    }
    if workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Precondition(format!("cannot build thread pool: {e}")))?;
        pool.install(|| solve_inner(model, prior, grid, workers))
    } else {
        solve_inner(model, prior, grid, 0)
    }
}

fn solve_inner(
    model: &GmpModel,
    prior: &Prior,
    grid: &SolverGrid,
    workers: usize,
) -> Result<SolveResult> {
    let start = std::time::Instant::now();
    let tc = TimeChange::build(model)?;
    let bridge_prior = priors::to_frame(prior, &tc, Frame::Bridge);
    let y0 = tc.y0();
    let (n, m, k) = (grid.n, grid.m, grid.k);

    // gain-map constants for pins: z_orig = a01 + a11 * z_bridge
    let a01 = tc.a0(1.0);
    let a11 = tc.a1(1.0);

    // probe the posterior variance cap (regularity diagnostic)
    let mut sup_var = 0.0f64;
    for si in 0..8 {
        let s = 0.9 * si as f64 / 7.0;
        for yi in 0..9 {
            let (_, y) = tc.to_bridge_coords(
                tc.t_of_s(s),
                grid.x_lo() + (grid.x_hi() - grid.x_lo()) * yi as f64 / 8.0,
            );
            if let Ok(post) = priors::posterior(&bridge_prior, s, y, y0) {
                sup_var = sup_var.max(post.mean_var().1);
            }
        }
    }
    if sup_var > VARIANCE_CAP {
        log::warn!(
            "posterior variance reaches {sup_var:.3} on the probe grid (cap {VARIANCE_CAP}); \
             the regularity assumption behind the boundary theory is strained"
        );
    }

    let mut v = Mat::zeros(n + 1, m + 1);
    let mut cont = Mat::zeros(n + 1, m + 1);
    let mut se = Mat::zeros(n + 1, m + 1);
    let mut d = vec![false; (n + 1) * (m + 1)];

    // terminal slice: stop everywhere, value = gain
    for j in 0..=m {
        v.set(n, j, grid.x[j]);
        cont.set(n, j, grid.x[j]);
        d[n * (m + 1) + j] = true;
    }

    // per-slice constants of the conditional bridge step
    // mean(x, z) = p1 x + q1 + w (z - pt x - qt), sd fixed
    struct Slice {
        s: f64,
        m0: f64,
        scale: f64, // phi0(t_i) * sqrt(Tbar)
        p1: f64,
        q1: f64,
        pt: f64,
        qt: f64,
        w: f64,
        sd: f64,
    }
    let horizon = model.horizon();
    let slices: Vec<Slice> = (0..n)
        .map(|i| {
            let (t, tp) = (grid.t[i], grid.t[i + 1]);
            let p1 = model.phi(t, tp).unwrap();
            let q1 = model.phi0(tp) * (model.int_alpha(tp) - model.int_alpha(t));
            let pt = model.phi(t, horizon).unwrap();
            let qt = model.phi0(horizon) * (model.int_alpha(horizon) - model.int_alpha(t));
            let vt = model.variance_unchecked(t, tp);
            let v_hor = model.variance_unchecked(t, horizon);
            let c = vt * model.phi(tp, horizon).unwrap();
            let w = c / v_hor;
            let var = (vt - c * w).max(0.0);
            Slice {
                s: tc.s_of_t(t),
                m0: model.m0(t),
                scale: model.phi0(t) * tc.tbar().sqrt(),
                p1,
                q1,
                pt,
                qt,
                w,
                sd: var.sqrt(),
            }
        })
        .collect();

    let mut fallback_cells = 0usize;
    for i in (0..n).rev() {
        let sl = &slices[i];
        let next_row: Vec<f64> = v.row(i + 1).to_vec();
        let xs = &grid.x;
        let results: Vec<(f64, f64, f64, bool, bool)> = (0..=m)
            .into_par_iter()
            .map(|j| {
                let x = xs[j];
                let mut rng = Substream::derive(grid.seed, TAG_SOLVE, i as u64, j as u64);
                let y = (x - sl.m0) / sl.scale;
                let post = match priors::posterior(&bridge_prior, sl.s, y, y0) {
                    Ok(p) => p,
                    Err(_) => {
                        // unreachable state: conservatively stop here
                        return (x, x, 0.0, true, true);
                    }
                };
                let mut sum = 0.0;
                let mut sumsq = 0.0;
                for _ in 0..k {
                    let z = post.repr.sample(&mut rng);
                    let z_orig = a01 + a11 * z;
                    let b = sl.p1 * x + sl.q1 + sl.w * (z_orig - sl.pt * x - sl.qt)
                        + sl.sd * rng.standard_normal();
                    let val = interpolate_value(xs, &next_row, b);
                    sum += val;
                    sumsq += val * val;
                }
                let mean = sum / k as f64;
                let var_est = (sumsq / k as f64 - mean * mean).max(0.0);
                let se_mean = (var_est / k as f64).sqrt();
                let value = mean.max(x);
                let stop = mean <= x;
                (value, mean, se_mean, stop, false)
            })
            .collect();
        for (j, (val, c, s_err, stop, fell_back)) in results.into_iter().enumerate() {
            v.set(i, j, val);
            cont.set(i, j, c);
            se.set(i, j, s_err);
            d[i * (m + 1) + j] = stop;
            if fell_back {
                fallback_cells += 1;
            }
        }
    }
    if fallback_cells > 0 {
        log::warn!(
            "{fallback_cells} grid cells had no numerically reachable posterior; \
             marked as stopping"
        );
    }

    Ok(SolveResult {
        grid: grid.clone(),
        v,
        d,
        cont,
        se,
        model: ModelDescriptor::of(model),
        prior: prior.clone(),
        meta: SolveMeta {
            seed: grid.seed,
            k,
            runtime_seconds: start.elapsed().as_secs_f64(),
            workers,
            fallback_cells,
            sup_posterior_variance: sup_var,
        },
    })
}

/// Piecewise-linear interpolation of a value row over the x grid. Outside
/// the box the edge segment's slope extends linearly; the result is floored
/// at the gain x so the dominance invariant survives extrapolation.
pub fn interpolate_value(x_grid: &[f64], row: &[f64], x: f64) -> f64 {
    let m = x_grid.len() - 1;
    let v = if x <= x_grid[0] {
        let slope = (row[1] - row[0]) / (x_grid[1] - x_grid[0]);
        row[0] + slope * (x - x_grid[0])
    } else if x >= x_grid[m] {
        let slope = (row[m] - row[m - 1]) / (x_grid[m] - x_grid[m - 1]);
        row[m] + slope * (x - x_grid[m])
    } else {
        let j = x_grid.partition_point(|&g| g <= x) - 1;
        let u = (x - x_grid[j]) / (x_grid[j + 1] - x_grid[j]);
        row[j] + u * (row[j + 1] - row[j])
    };
    v.max(x)
}

// ---------------------------------------------------------------------------
// Boundary extraction
// ---------------------------------------------------------------------------

/// Stopping set of one time slice as disjoint x-intervals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundarySlice {
    pub t: f64,
    pub intervals: Vec<(f64, f64)>,
}

/// Which side of the box the single boundary attaches to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySide {
    Upper,
    Lower,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Boundary {
    pub slices: Vec<BoundarySlice>,
    pub single_boundary: bool,
    pub side: Option<BoundarySide>,
}

impl Boundary {
    /// For a single upper (resp. lower) boundary, the threshold per slice is
    /// the inner edge of its stopping interval.
    pub fn single_thresholds(&self) -> Option<Vec<(f64, f64)>> {
        if !self.single_boundary {
            return None;
        }
        let side = self.side?;
        Some(
            self.slices
                .iter()
                .filter(|sl| !sl.intervals.is_empty())
                .map(|sl| {
                    let (lo, hi) = sl.intervals[0];
                    match side {
                        BoundarySide::Upper => (sl.t, lo),
                        BoundarySide::Lower => (sl.t, hi),
                    }
                })
                .collect(),
        )
    }
}

/// Scans the decision matrix for maximal stopping runs per slice. Interval
/// edges sit midway between the last continuation node and the first
/// stopping node. `single_boundary` holds iff every slice has at most one
/// run, every run touches a box edge, and all one-sided runs touch the same
/// side (full-range and empty slices are compatible with either side).
pub fn extract_boundary(result: &SolveResult) -> Boundary {
    let (n, m) = (result.grid.n, result.grid.m);
    let xs = &result.grid.x;
    let mut slices = Vec::with_capacity(n + 1);
    let mut single = true;
    let mut seen_side: Option<BoundarySide> = None;
    for i in 0..=n {
        let mut intervals = Vec::new();
        let mut j = 0;
        while j <= m {
            if result.stopped(i, j) {
                let j1 = j;
                while j + 1 <= m && result.stopped(i, j + 1) {
                    j += 1;
                }
                let j2 = j;
                let lo = if j1 == 0 {
                    xs[0]
                } else {
                    0.5 * (xs[j1 - 1] + xs[j1])
                };
                let hi = if j2 == m {
                    xs[m]
                } else {
                    0.5 * (xs[j2] + xs[j2 + 1])
                };
                intervals.push((lo, hi));
            }
            j += 1;
        }
        // classify the slice for the single-boundary flag
        match intervals.len() {
            0 => {}
            1 => {
                let (lo, hi) = intervals[0];
                let touches_lower = lo <= xs[0];
                let touches_upper = hi >= xs[m];
                match (touches_lower, touches_upper) {
                    (true, true) => {}
                    (false, false) => single = false, // interior island
                    (true, false) => match seen_side {
                        Some(BoundarySide::Upper) => single = false,
                        _ => seen_side = Some(BoundarySide::Lower),
                    },
                    (false, true) => match seen_side {
                        Some(BoundarySide::Lower) => single = false,
                        _ => seen_side = Some(BoundarySide::Upper),
                    },
                }
            }
            _ => single = false,
        }
        slices.push(BoundarySlice {
            t: result.grid.t[i],
            intervals,
        });
    }
    Boundary {
        slices,
        single_boundary: single,
        side: if single { seen_side } else { None },
    }
}

// ---------------------------------------------------------------------------
// Policy evaluation
// ---------------------------------------------------------------------------

/// Simulates the conditioned process along the solver's time grid and stops
/// at first entry into the decision region (nearest-cell lookup). Returns
/// the sample mean and standard error of the stopped payoff.
pub fn policy_value(
    result: &SolveResult,
    model: &GmpModel,
    prior: &Prior,
    n_paths: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if prior.frame != Frame::Original {
        return Err(Error::Precondition(
            "policy_value expects the prior in the original frame".into(),
        ));
    }
    let grid = &result.grid;
    let (n, m) = (grid.n, grid.m);
    let lo = grid.x_lo();
    let dx = (grid.x_hi() - lo) / m as f64;
    let sampler = prior.repr();
    let payoffs: Vec<f64> = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = Substream::derive(seed, TAG_POLICY, p as u64, 0);
            let pin = sampler.sample(&mut rng);
            let mut x = model.x0();
            for i in 0..=n {
                let j = (((x - lo) / dx).round() as i64).clamp(0, m as i64) as usize;
                if result.stopped(i, j) || i == n {
                    return x;
                }
                let law =
                    model.bridge_step_law_unchecked(grid.t[i], x, grid.t[i + 1], pin);
                x = law.mean + law.variance.sqrt() * rng.standard_normal();
            }
            x
        })
        .collect();
    // Welford: exact for constant payoffs (all-stopping policy)
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (idx, &p) in payoffs.iter().enumerate() {
        let delta = p - mean;
        mean += delta / (idx + 1) as f64;
        m2 += delta * (p - mean);
    }
    let var = m2 / n_paths as f64;
    Ok((mean, (var / n_paths as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmp::brownian_motion;
    use approx::assert_relative_eq;

    fn small_grid(n: usize, m: usize, k: usize, seed: u64) -> SolverGrid {
        SolverGrid::default_grid(1.0, n, m, k, (-3.0, 3.0), seed).unwrap()
    }

    #[test]
    fn default_grid_matches_reference_formulas() {
        let g = small_grid(10, 10, 100, 1);
        assert_relative_eq!(g.t[10], 1.0, epsilon = 1e-12);
        assert_relative_eq!(
            g.t[5],
            (1.0 + 5.0 * (std::f64::consts::E - 1.0) / 10.0).ln(),
            epsilon = 1e-12
        );
        assert_relative_eq!(g.t[5], 0.6201145069582775, epsilon = 1e-9);
        assert_eq!(g.x[0], -3.0);
        assert_eq!(g.x[10], 3.0);
        assert_relative_eq!(g.x[4], -3.0 + 4.0 * 0.6, epsilon = 1e-12);
    }

    #[test]
    fn default_grid_validation() {
        assert!(SolverGrid::default_grid(1.0, 1, 10, 10, (-3.0, 3.0), 0).is_err());
        assert!(SolverGrid::default_grid(1.0, 10, 10, 0, (-3.0, 3.0), 0).is_err());
        assert!(SolverGrid::default_grid(1.0, 10, 10, 10, (3.0, -3.0), 0).is_err());
    }

    #[test]
    fn terminal_slice_is_gain_and_stopping() {
        let model = brownian_motion(1.0, 0.0);
        let prior = Prior::dirac(0.0, Frame::Original);
        let grid = small_grid(12, 12, 50, 42);
        let res = solve(&model, &prior, &grid, 0).unwrap();
        for j in 0..=12 {
            assert_eq!(res.v.get(12, j), grid.x[j]);
            assert!(res.stopped(12, j));
        }
    }

    #[test]
    fn value_dominates_gain_everywhere() {
        let model = brownian_motion(1.0, 0.0);
        let prior = Prior::discrete(vec![-1.0, 1.0], vec![0.5, 0.5], Frame::Original).unwrap();
        let grid = small_grid(20, 20, 200, 3);
        let res = solve(&model, &prior, &grid, 0).unwrap();
        for i in 0..=20 {
            for j in 0..=20 {
                assert!(res.v.get(i, j) >= grid.x[j]);
                // decision flag consistent with exact equality
                assert_eq!(res.stopped(i, j), res.v.get(i, j) == grid.x[j]);
            }
        }
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let model = brownian_motion(1.0, 0.0);
        let prior = Prior::dirac(0.0, Frame::Original);
        let grid = small_grid(16, 16, 100, 99);
        let r1 = solve(&model, &prior, &grid, 1).unwrap();
        let r2 = solve(&model, &prior, &grid, 4).unwrap();
        let r3 = solve(&model, &prior, &grid, 0).unwrap();
        assert_eq!(r1.v, r2.v);
        assert_eq!(r1.v, r3.v);
        assert_eq!(r1.d, r2.d);
        assert_eq!(r1.d, r3.d);
    }

    #[test]
    fn interpolation_rules() {
        let xs = vec![0.0, 1.0, 2.0];
        let row = vec![5.0, 7.0, 8.0];
        // node hit
        assert_eq!(interpolate_value(&xs, &row, 1.0), 7.0);
        // midpoint
        assert_eq!(interpolate_value(&xs, &row, 0.5), 6.0);
        // extrapolation right with slope 1 (row slope is 1 here)
        assert_eq!(interpolate_value(&xs, &row, 3.0), 9.0);
        // gain floor beats a shallow extrapolation
        let flat = vec![5.0, 5.0, 5.0];
        assert_eq!(interpolate_value(&xs, &flat, 9.0), 9.0);
    }

    #[test]
    fn extrapolation_on_terminal_slice_is_gain() {
        // terminal row stores V = x_j; slope-1 extrapolation = gain floor
        let xs: Vec<f64> = (0..=10).map(|j| -3.0 + 0.6 * j as f64).collect();
        let row = xs.clone();
        assert_relative_eq!(interpolate_value(&xs, &row, 4.0), 4.0, epsilon = 1e-12);
        assert_relative_eq!(interpolate_value(&xs, &row, -5.0), -5.0, epsilon = 1e-12);
    }

    #[test]
    fn boundary_all_stopping_single_interval() {
        let model = brownian_motion(1.0, 0.0);
        let prior = Prior::dirac(0.0, Frame::Original);
        let grid = small_grid(8, 8, 20, 5);
        let mut res = solve(&model, &prior, &grid, 0).unwrap();
        // force an all-stopping decision matrix
        for c in res.d.iter_mut() {
            *c = true;
        }
        let b = extract_boundary(&res);
        assert!(b.single_boundary);
        for sl in &b.slices {
            assert_eq!(sl.intervals.len(), 1);
            assert_eq!(sl.intervals[0], (-3.0, 3.0));
        }
    }

    #[test]
    fn boundary_interior_island_breaks_single_flag() {
        let model = brownian_motion(1.0, 0.0);
        let prior = Prior::dirac(0.0, Frame::Original);
        let grid = small_grid(8, 8, 20, 5);
        let mut res = solve(&model, &prior, &grid, 0).unwrap();
        for c in res.d.iter_mut() {
            *c = false;
        }
        // terminal slice stays all-stopping; add an interior island
        for j in 0..=8 {
            res.d[8 * 9 + j] = true;
        }
        res.d[3 * 9 + 4] = true;
        let b = extract_boundary(&res);
        assert!(!b.single_boundary);
    }

    #[test]
    fn policy_all_stopping_returns_x0_exactly() {
        let model = brownian_motion(1.0, 0.4);
        let prior = Prior::dirac(0.0, Frame::Original);
        let mut grid = small_grid(8, 8, 20, 5);
        grid.seed = 7;
        let mut res = solve(&model, &prior, &grid, 0).unwrap();
        for c in res.d.iter_mut() {
            *c = true;
        }
        let (mean, se) = policy_value(&res, &model, &prior, 500, 1).unwrap();
        assert_eq!(mean, 0.4);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn rejects_bridge_frame_prior() {
        let model = brownian_motion(1.0, 0.0);
        let prior = Prior::dirac(0.0, Frame::Bridge);
        let grid = small_grid(8, 8, 20, 5);
        assert!(solve(&model, &prior, &grid, 0).is_err());
    }

    #[test]
    fn rejects_x0_outside_box() {
        let model = brownian_motion(1.0, 5.0);
        let prior = Prior::dirac(0.0, Frame::Original);
        let grid = small_grid(8, 8, 20, 5);
        assert!(solve(&model, &prior, &grid, 0).is_err());
    }
}
