//! Exact path simulation of the conditioned process, used for validation.
//!
//! Simulation is pin-first: draw the terminal value from the prior (or from
//! the posterior when restarting mid-path), then advance through exact
//! conditional Gaussian bridge steps. There is no time-discretization bias;
//! the grid only controls where the path is observed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmp::{BridgeStepper, GmpModel};
use crate::priors::{self, Frame, Prior};
use crate::rng::{Substream, TAG_BRIDGE, TAG_PATH};
use crate::timechange::TimeChange;

/// A batch of simulated paths with their pinning points.
#[derive(Clone, Debug)]
pub struct PathBatch {
    pub times: Vec<f64>,
    pub n_paths: usize,
    /// n_paths x times.len(), row-major.
    pub values: Vec<f64>,
    pub pins: Vec<f64>,
    pub seed: u64,
}

impl PathBatch {
    #[inline]
    pub fn value(&self, path: usize, idx: usize) -> f64 {
        self.values[path * self.times.len() + idx]
    }

    pub fn path(&self, path: usize) -> &[f64] {
        &self.values[path * self.times.len()..(path + 1) * self.times.len()]
    }

    pub fn terminal_values(&self) -> Vec<f64> {
        (0..self.n_paths)
            .map(|p| self.value(p, self.times.len() - 1))
            .collect()
    }

    /// One path per row as CSV (times in the header row).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("path");
        for t in &self.times {
            out.push_str(&format!(",{t}"));
        }
        out.push('\n');
        for p in 0..self.n_paths {
            out.push_str(&p.to_string());
            for i in 0..self.times.len() {
                out.push_str(&format!(",{}", self.value(p, i)));
            }
            out.push('\n');
        }
        out
    }
}

/// Simulates the conditioned process from (0, x0): pins drawn from the
/// original-frame prior, paths advanced by exact bridge steps.
pub fn simulate(
    model: &GmpModel,
    prior: &Prior,
    times: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<PathBatch> {
    let horizon = model.horizon();
    let eps = 1e-9 * horizon.max(1.0);
    if times.first().map(|&t| t.abs() > eps).unwrap_or(true)
        || times.last().map(|&t| (t - horizon).abs() > eps).unwrap_or(true)
    {
        return Err(Error::Precondition(
            "simulation times must start at 0 and end at the horizon".into(),
        ));
    }
    if prior.frame != Frame::Original {
        return Err(Error::Precondition(
            "simulate expects the prior in the original frame".into(),
        ));
    }
    let sampler = prior.repr();
    run_batch(model, times, model.x0(), n_paths, seed, move |rng| {
        sampler.sample(rng)
    })
}

/// Restarts the conditioned process from (t_start, x_start): the pin is
/// drawn from the posterior at that state (in bridge coordinates, mapped
/// back through the gain). At (0, x0) this coincides with [`simulate`].
pub fn simulate_from(
    model: &GmpModel,
    prior: &Prior,
    t_start: f64,
    x_start: f64,
    times: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<PathBatch> {
    let eps = 1e-9 * model.horizon().max(1.0);
    if times.first().map(|&t| (t - t_start).abs() > eps).unwrap_or(true) {
        return Err(Error::Precondition(
            "restart times must begin at t_start".into(),
        ));
    }
    let tc = TimeChange::build(model)?;
    let bridge_prior = priors::to_frame(prior, &tc, Frame::Bridge);
    let (s, y) = tc.to_bridge_coords(t_start, x_start);
    let post = priors::posterior(&bridge_prior, s, y, tc.y0())?;
    let (a01, a11) = (tc.a0(1.0), tc.a1(1.0));
    run_batch(model, times, x_start, n_paths, seed, move |rng| {
        a01 + a11 * post.repr.sample(rng)
    })
}

fn run_batch(
    model: &GmpModel,
    times: &[f64],
    x_start: f64,
    n_paths: usize,
    seed: u64,
    draw_pin: impl Fn(&mut Substream) -> f64 + Sync,
) -> Result<PathBatch> {
    let stepper = BridgeStepper::new(model, times)?;
    let n_times = times.len();
    let rows: Vec<(Vec<f64>, f64)> = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = Substream::derive(seed, TAG_PATH, p as u64, 0);
            let pin = draw_pin(&mut rng);
            let mut row = Vec::with_capacity(n_times);
            let mut x = x_start;
            row.push(x);
            for i in 0..n_times - 1 {
                x = stepper.advance(i, x, pin, rng.standard_normal());
                row.push(x);
            }
            (row, pin)
        })
        .collect();
    let mut values = Vec::with_capacity(n_paths * n_times);
    let mut pins = Vec::with_capacity(n_paths);
    for (row, pin) in rows {
        values.extend_from_slice(&row);
        pins.push(pin);
    }
    Ok(PathBatch {
        times: times.to_vec(),
        n_paths,
        values,
        pins,
        seed,
    })
}

// ---------------------------------------------------------------------------
// Covariance factorization check
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CovCell {
    pub s_lo: f64,
    pub s_hi: f64,
    pub empirical: f64,
    pub theoretical: f64,
    pub stderr: f64,
    pub within_4se: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CovReport {
    pub cells: Vec<CovCell>,
    pub pass_fraction: f64,
}

/// Empirical covariance of a Dirac-prior batch against the factorization
/// R1(min) R2(max) with R1(s) = a1(s) s and R2(s) = a1(s)(1 - s), on a
/// grid of `probe x probe` time pairs.
pub fn check_cov_factorization(
    batch: &PathBatch,
    tc: &TimeChange,
    probe: usize,
) -> Result<CovReport> {
    if batch
        .pins
        .windows(2)
        .any(|w| (w[0] - w[1]).abs() > 1e-12)
    {
        return Err(Error::Precondition(
            "covariance factorization check needs a Dirac-prior batch".into(),
        ));
    }
    let n_times = batch.times.len();
    let probe = probe.clamp(2, n_times.saturating_sub(2));
    // interior probe indices, evenly spread
    let idx: Vec<usize> = (1..=probe)
        .map(|k| (k * (n_times - 2)) / (probe + 1) + 1)
        .collect();
    let n = batch.n_paths as f64;
    let mut cells = Vec::new();
    let mut passed = 0usize;
    for (ai, &i) in idx.iter().enumerate() {
        for &j in idx.iter().skip(ai) {
            let (si, sj) = (tc.s_of_t(batch.times[i]), tc.s_of_t(batch.times[j]));
            let mu_i: f64 = (0..batch.n_paths).map(|p| batch.value(p, i)).sum::<f64>() / n;
            let mu_j: f64 = (0..batch.n_paths).map(|p| batch.value(p, j)).sum::<f64>() / n;
            let mut cov = 0.0;
            let mut m22 = 0.0;
            for p in 0..batch.n_paths {
                let u = batch.value(p, i) - mu_i;
                let w = batch.value(p, j) - mu_j;
                cov += u * w;
                m22 += u * u * w * w;
            }
            cov /= n;
            m22 /= n;
            let stderr = ((m22 - cov * cov).max(0.0) / n).sqrt();
            let theory = tc.a1(si) * si * tc.a1(sj) * (1.0 - sj);
            let within = (cov - theory).abs() <= 4.0 * stderr;
            if within {
                passed += 1;
            }
            cells.push(CovCell {
                s_lo: si,
                s_hi: sj,
                empirical: cov,
                theoretical: theory,
                stderr,
                within_4se: within,
            });
        }
    }
    let pass_fraction = passed as f64 / cells.len() as f64;
    Ok(CovReport {
        cells,
        pass_fraction,
    })
}

// ---------------------------------------------------------------------------
// Brownian-bridge maximal bounds
// ---------------------------------------------------------------------------

/// Monte Carlo estimate of E[sup |BB 0 -> 0|] on a grid of `n_steps`
/// intervals of [0, 1]. The grid sup is biased downward; the continuous-time
/// value is sqrt(pi/2) ln 2 ~ 0.86869.
pub fn sup_abs_bridge_mean(n_paths: usize, n_steps: usize, seed: u64) -> f64 {
    let sums: f64 = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = Substream::derive(seed, TAG_BRIDGE, p as u64, 0);
            bridge_path_sup(&mut rng, n_steps, 1.0, 0.0, 0.0, |w, _| w.abs())
        })
        .sum();
    sums / n_paths as f64
}

/// Simulates a BB from y to z over [0, span] on `n_steps` intervals and
/// reduces the path with `f(value, u)`, returning the sup of f.
fn bridge_path_sup(
    rng: &mut Substream,
    n_steps: usize,
    span: f64,
    y: f64,
    z: f64,
    f: impl Fn(f64, f64) -> f64,
) -> f64 {
    let mut sup = f(y, 0.0).max(f(z, span));
    let mut w = y;
    let mut u = 0.0;
    let du = span / n_steps as f64;
    for k in 1..n_steps {
        let next_u = k as f64 * du;
        let remain = span - u;
        let mean = w + (z - w) * du / remain;
        let var = du * (span - next_u) / remain;
        w = mean + var.max(0.0).sqrt() * rng.standard_normal();
        sup = sup.max(f(w, next_u));
        u = next_u;
    }
    sup
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundCase {
    pub name: String,
    pub estimate: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaxBoundsReport {
    pub cases: Vec<BoundCase>,
    pub all_within: bool,
}

const SQRT_PI_OVER_2_LN2: f64 = 0.8686889288385579;

/// Empirical checks of the Brownian-bridge maximal bounds. Each comparison
/// couples the two bridges through one shared driving noise, as the bounds
/// require.
pub fn check_maximal_bounds(n_paths: usize, n_steps: usize, seed: u64) -> MaxBoundsReport {
    let mut cases = Vec::new();

    // E sup |BB y->z on [0, 1-s]| <= sqrt(1-s) sqrt(pi/2) ln2 + |y| + |z|
    for (name, s, y, z) in [
        ("sup_bb_pinned_zero", 0.0f64, 0.0f64, 0.0f64),
        ("sup_bb_generic", 0.2, 0.5, -0.3),
    ] {
        let span = 1.0 - s;
        let est: f64 = (0..n_paths)
            .into_par_iter()
            .map(|p| {
                let mut rng = Substream::derive(seed, TAG_BRIDGE, p as u64, 1 + s as u64);
                bridge_path_sup(&mut rng, n_steps, span, y, z, |w, _| w.abs())
            })
            .sum::<f64>()
            / n_paths as f64;
        let bound = span.sqrt() * SQRT_PI_OVER_2_LN2 + y.abs() + z.abs();
        cases.push(BoundCase {
            name: name.into(),
            estimate: est,
            bound,
            margin: bound - est,
        });
    }

    // same start/end coupled bridges: sup |Y1 - Y2| <= |y1-y2| + |z1-z2|
    for (name, s, y1, z1, y2, z2) in [
        ("diff_space_identical", 0.1f64, 0.4f64, -0.2f64, 0.4f64, -0.2f64),
        ("diff_space_generic", 0.1, 0.0, 0.6, 0.3, -0.4),
    ] {
        let span: f64 = 1.0 - s;
        let est: f64 = (0..n_paths)
            .into_par_iter()
            .map(|p| {
                let mut rng = Substream::derive(seed, TAG_BRIDGE, p as u64, 100);
                // anticipative representation: shared standard bridge 0->0
                // plus the two deterministic lines
                let mut sup: f64 = (y1 - y2).abs().max((z1 - z2).abs());
                let mut w = 0.0;
                let du = span / n_steps as f64;
                let mut u = 0.0;
                for k in 1..n_steps {
                    let next_u = k as f64 * du;
                    let remain = span - u;
                    let mean = w - w * du / remain;
                    let var = du * (span - next_u) / remain;
                    w = mean + var.max(0.0).sqrt() * rng.standard_normal();
                    let pos1 = y1 + (z1 - y1) * next_u / span + w;
                    let pos2 = y2 + (z2 - y2) * next_u / span + w;
                    sup = sup.max((pos1 - pos2).abs());
                    u = next_u;
                }
                sup
            })
            .sum::<f64>()
            / n_paths as f64;
        let bound = (y1 - y2).abs() + (z1 - z2).abs();
        cases.push(BoundCase {
            name: name.into(),
            estimate: est,
            bound,
            margin: bound - est,
        });
    }

    // different start times, shared BM (time-inversion representation)
    for (name, s1, s2, y, z1, z2) in [
        ("diff_time_generic", 0.1f64, 0.3f64, 0.2f64, 0.5f64, -0.1f64),
        ("diff_time_same_start", 0.25, 0.25, 0.2, 0.7, -0.1),
    ] {
        let est = coupled_time_shift_sup(n_paths, n_steps, seed, s1, s2, y, z1, z2);
        let bound = (z1 - z2).abs()
            + (s2 - s1) / ((1.0 - s1) * (1.0 - s2))
                * ((z2.abs() + y.abs() + 5.0 * (std::f64::consts::PI / 2.0).sqrt()) / 4.0);
        cases.push(BoundCase {
            name: name.into(),
            estimate: est,
            bound,
            margin: bound - est,
        });
    }

    let all_within = cases.iter().all(|c| c.margin >= 0.0);
    MaxBoundsReport { cases, all_within }
}

/// E sup_u |Y^{s1,y,z1}_u - Y^{s2,y,z2}_{u ^ (1-s2)}| with both bridges
/// driven by the same BM through the representation
/// Y_u = (z r + B_r + y(1+t)) / (1 + t + r), t = s/(1-s), r = h(s+u) - h(s).
fn coupled_time_shift_sup(
    n_paths: usize,
    n_steps: usize,
    seed: u64,
    s1: f64,
    s2: f64,
    y: f64,
    z1: f64,
    z2: f64,
) -> f64 {
    let h = |v: f64| v / (1.0 - v);
    let (t1, t2) = (h(s1), h(s2));
    // u grid on [0, 1-s1], capped just short of the endpoint
    let span = (1.0 - s1) * (1.0 - 1e-9);
    let us: Vec<f64> = (0..=n_steps).map(|k| span * k as f64 / n_steps as f64).collect();
    let r1: Vec<f64> = us.iter().map(|&u| h(s1 + u) - t1).collect();
    let r2: Vec<f64> = us
        .iter()
        .map(|&u| h(s2 + u.min((1.0 - s2) * (1.0 - 1e-9))) - t2)
        .collect();
    // merged r grid for the shared BM
    let mut rs: Vec<f64> = r1.iter().chain(r2.iter()).copied().collect();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    let sum: f64 = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = Substream::derive(seed, TAG_BRIDGE, p as u64, 200);
            // BM at merged r points
            let mut bm = Vec::with_capacity(rs.len());
            let mut b = 0.0;
            let mut prev = 0.0;
            for &r in &rs {
                b += ((r - prev).max(0.0)).sqrt() * rng.standard_normal();
                bm.push(b);
                prev = r;
            }
            let bm_at = |r: f64| -> f64 {
                let i = rs.partition_point(|&v| v < r - 1e-15).min(rs.len() - 1);
                bm[i]
            };
            let mut sup: f64 = (y - y).abs();
            for k in 0..=n_steps {
                let y1 = (z1 * r1[k] + bm_at(r1[k]) + y * (1.0 + t1)) / (1.0 + t1 + r1[k]);
                let y2 = (z2 * r2[k] + bm_at(r2[k]) + y * (1.0 + t2)) / (1.0 + t2 + r2[k]);
                sup = sup.max((y1 - y2).abs());
            }
            sup
        })
        .sum();
    sum / n_paths as f64
}

/// Kolmogorov-Smirnov statistic of sorted samples against a CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// 1% critical value of the KS statistic for sample size n.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Half-normal mean E|N(0, var)|.
pub fn half_normal_mean(var: f64) -> f64 {
    (2.0 * var / std::f64::consts::PI).sqrt()
}
