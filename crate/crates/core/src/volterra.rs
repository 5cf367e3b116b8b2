//! Free-boundary Volterra integral equations for the Gaussian- and
//! Dirac-prior cases, solved by damped Picard iteration in gain coordinates.
//!
//! In both cases the gain process follows a time-dependent mean-reverting
//! linear SDE dG = rate(u) (target(u) - G) du + a1(u) dW, and the boundary
//! solves
//!   b(s) = E[G_1 | G_s = b(s)] - int_s^1 rate(u) E[(target(u) - G_u)
//!           1(G_u >= b(u)) | G_s = b(s)] du,
//! anchored at b(1) = target(1). For the Dirac prior E[G_1] is the gain-space
//! pin and rate(u) ~ 1/(1-u); the grid refines geometrically toward 1 so the
//! trapezoid quadrature sees the integrable singularity.
//!
//! Since a1 > 0 keeps y -> G monotone, the whole computation stays in gain
//! coordinates; outputs convert to y and x on demand.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmp::GmLaw;
use crate::normal;
use crate::priors::{Frame, Prior, PriorKind};
use crate::quad;
use crate::timechange::TimeChange;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainCase {
    GaussianPrior,
    DiracPrior,
}

#[derive(Clone, Debug)]
enum GainParams {
    /// Gaussian prior N(theta, gamma2) in bridge coordinates; c = 1/gamma2 - 1.
    Gaussian { theta: f64, gamma2: f64, y0: f64 },
    /// Dirac prior at zstar (bridge coordinates).
    Dirac { zstar: f64 },
}

/// Mean-reverting representation of the conditioned gain process.
#[derive(Clone, Debug)]
pub struct OuGain {
    tc: TimeChange,
    params: GainParams,
    terminal_value: f64,
}

impl OuGain {
    pub fn case(&self) -> GainCase {
        match self.params {
            GainParams::Gaussian { .. } => GainCase::GaussianPrior,
            GainParams::Dirac { .. } => GainCase::DiracPrior,
        }
    }

    pub fn time_change(&self) -> &TimeChange {
        &self.tc
    }

    /// Gain-space anchor b(1).
    pub fn terminal_value(&self) -> f64 {
        self.terminal_value
    }

    /// Affine information-drift coefficients (a(s), b(s)) of the Gaussian
    /// case: mu(s, y) = a(s) + b(s) y.
    pub fn drift_affine(&self, s: f64) -> Option<(f64, f64)> {
        match self.params {
            GainParams::Gaussian { theta, gamma2, y0 } => {
                let c = 1.0 / gamma2 - 1.0;
                let den = 1.0 + c * (1.0 - s);
                Some(((theta / gamma2 - y0) / den, -c / den))
            }
            GainParams::Dirac { .. } => None,
        }
    }

    /// Mean-reversion rate (positive; diverges at s = 1 in the Dirac case).
    pub fn rate(&self, s: f64) -> f64 {
        match self.params {
            GainParams::Gaussian { .. } => {
                let (_, b) = self.drift_affine(s).unwrap();
                -(self.tc.a1_deriv(s) / self.tc.a1(s) + b)
            }
            GainParams::Dirac { .. } => {
                1.0 / (1.0 - s) - self.tc.a1_deriv(s) / self.tc.a1(s)
            }
        }
    }

    /// Mean-reversion target.
    pub fn target(&self, s: f64) -> f64 {
        match self.params {
            GainParams::Gaussian { .. } => {
                let (a, b) = self.drift_affine(s).unwrap();
                let a0 = self.tc.a0(s);
                let a1 = self.tc.a1(s);
                let b_raw = self.tc.a1_deriv(s) / a1 + b;
                let a_raw = self.tc.a0_deriv(s) - b_raw * a0 + a1 * a;
                -a_raw / b_raw
            }
            GainParams::Dirac { zstar } => {
                let a0 = self.tc.a0(s);
                let a1 = self.tc.a1(s);
                let ratio = self.tc.a1_deriv(s) / a1;
                let num = (self.tc.a0_deriv(s) - ratio * a0) * (1.0 - s) + a1 * zstar + a0;
                num / (1.0 - (1.0 - s) * ratio)
            }
        }
    }

    /// Volatility of the gain SDE.
    pub fn vol(&self, s: f64) -> f64 {
        self.tc.a1(s)
    }

    /// rate, rate*target and vol^2 at one point (single time-map inversion).
    fn ode_rhs(&self, s: f64) -> (f64, f64, f64) {
        let r = self.rate(s);
        let t = self.target(s);
        let v = self.vol(s);
        (r, r * t, v * v)
    }
}

/// Assembles the gain SDE for a Gaussian bridge-frame prior. Requires the
/// standing assumptions gamma2 < 1 and a1 non-increasing, which make the
/// raw drift slope negative (so the reversion rate is positive).
pub fn build_gaussian_gain(tc: &TimeChange, prior: &Prior) -> Result<OuGain> {
    let (theta, gamma2) = match (&prior.kind, prior.frame) {
        (PriorKind::Gaussian { mean, variance }, Frame::Bridge) => (*mean, *variance),
        (PriorKind::Gaussian { .. }, _) => {
            return Err(Error::Precondition(
                "build_gaussian_gain needs the prior in the bridge frame".into(),
            ))
        }
        _ => {
            return Err(Error::Precondition(
                "build_gaussian_gain needs a gaussian prior".into(),
            ))
        }
    };
    if !(gamma2 < 1.0) {
        return Err(Error::Precondition(format!(
            "gamma^2 < 1 violated: gamma^2 = {gamma2}"
        )));
    }
    // a1 non-increasing <=> beta <= 0
    for i in 0..=256 {
        let s = i as f64 / 256.0;
        let d = tc.a1_deriv(s);
        if d > 1e-9 * tc.a1(s).max(1.0) {
            return Err(Error::Precondition(format!(
                "a1'(s) <= 0 violated: a1'({s}) = {d}"
            )));
        }
    }
    let gain = OuGain {
        tc: tc.clone(),
        params: GainParams::Gaussian {
            theta,
            gamma2,
            y0: tc.y0(),
        },
        terminal_value: 0.0,
    };
    // B(s) < 0 must hold with the assumptions above
    for i in 0..=256 {
        let s = i as f64 / 256.0;
        if gain.rate(s) <= 0.0 {
            return Err(Error::Precondition(format!(
                "B(s) < 0 violated at s = {s}: rate = {}",
                gain.rate(s)
            )));
        }
    }
    let terminal = gain.target(1.0);
    Ok(OuGain {
        terminal_value: terminal,
        ..gain
    })
}

/// Assembles the gain SDE for a Dirac prior at `zstar` (bridge frame); the
/// terminal anchor is the gain-space pin a0(1) + a1(1) zstar. Smoothness of
/// a0, a1 (twice continuously differentiable) is assumed, which holds for
/// continuously differentiable model coefficients.
pub fn build_dirac_gain(tc: &TimeChange, zstar: f64) -> OuGain {
    let terminal = tc.a0(1.0) + tc.a1(1.0) * zstar;
    OuGain {
        tc: tc.clone(),
        params: GainParams::Dirac { zstar },
        terminal_value: terminal,
    }
}

/// Gaussian law of G_u given G_s = g under the gain SDE, by adaptive
/// quadrature of the linear-SDE moment formulas (alpha = rate*target,
/// beta = -rate, zeta = a1).
pub fn ou_marginal(gain: &OuGain, s: f64, g: f64, u: f64) -> Result<GmLaw> {
    if !(0.0..1.0).contains(&u) || u < s {
        return Err(Error::OutOfDomain {
            name: "u",
            value: u,
            lo: s,
            hi: 1.0,
        });
    }
    if u == s {
        return Ok(GmLaw::new(g, 0.0));
    }
    let jb = |r: f64| quad::integrate(|w| gain.rate(w), s, r, 1e-11);
    let jbu = jb(u);
    let phi_su = (-jbu).exp();
    let mean_int = quad::integrate(
        |r| {
            let (rate, rt, _) = gain.ode_rhs(r);
            let _ = rate;
            rt * (jb(r) - jbu).exp()
        },
        s,
        u,
        1e-10,
    );
    let var_int = quad::integrate(
        |r| {
            let v = gain.vol(r);
            v * v * (2.0 * (jb(r) - jbu)).exp()
        },
        s,
        u,
        1e-10,
    );
    Ok(GmLaw::new(phi_su * g + mean_int, var_int.max(0.0)))
}

/// E[(c - G) 1(G >= b)] for G ~ law; closed Gaussian form
/// (c - mu) sf(d) - sigma pdf(d), d = (b - mu)/sigma.
pub fn truncated_expectation(law: &GmLaw, c: f64, b: f64) -> f64 {
    let sigma = law.variance.sqrt();
    if sigma == 0.0 {
        return if law.mean >= b { c - law.mean } else { 0.0 };
    }
    let d = (b - law.mean) / sigma;
    (c - law.mean) * normal::sf(d) - sigma * normal::pdf(d)
}

/// Converged boundary in gain coordinates, with the terminal anchor
/// appended at s = 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundarySolution {
    pub s: Vec<f64>,
    pub b_gain: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    /// (sweep, sup-norm update) per iteration.
    pub log: Vec<(usize, f64)>,
}

impl BoundarySolution {
    /// Boundary in bridge-space y coordinates.
    pub fn b_y(&self, tc: &TimeChange) -> Vec<f64> {
        self.s
            .iter()
            .zip(&self.b_gain)
            .map(|(&s, &g)| (g - tc.a0(s)) / tc.a1(s))
            .collect()
    }

    /// Boundary in original x coordinates (numerically equal to the gain
    /// value; kept as an explicit conversion through the coordinate maps).
    pub fn b_x(&self, tc: &TimeChange) -> Vec<f64> {
        self.s
            .iter()
            .zip(self.b_y(tc).iter())
            .map(|(&s, &y)| tc.from_bridge_coords(s, y).1)
            .collect()
    }

    /// Original-coordinate times for each node.
    pub fn t_of(&self, tc: &TimeChange) -> Vec<f64> {
        self.s.iter().map(|&s| tc.t_of_s(s)).collect()
    }

    /// Interpolated gain boundary at an arbitrary s.
    pub fn eval(&self, s: f64) -> f64 {
        let i = self
            .s
            .partition_point(|&v| v <= s)
            .clamp(1, self.s.len() - 1);
        let (s0, s1) = (self.s[i - 1], self.s[i]);
        let u = ((s - s0) / (s1 - s0)).clamp(0.0, 1.0);
        self.b_gain[i - 1] + u * (self.b_gain[i] - self.b_gain[i - 1])
    }
}

/// Geometric Picard grid: 1 - s log-spaced from 1 down to `one_minus_end`.
pub fn geometric_grid(one_minus_end: f64, nodes_per_decade: usize) -> Vec<f64> {
    let decades = -one_minus_end.log10();
    let count = (decades * nodes_per_decade as f64).ceil() as usize;
    let mut s = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let frac = i as f64 / count as f64;
        s.push(1.0 - (frac * one_minus_end.ln()).exp());
    }
    s[0] = 0.0;
    s
}

pub const DEFAULT_PICARD_TOL: f64 = 1e-6;
pub const DEFAULT_PICARD_MAX_ITER: usize = 500;
pub const DEFAULT_PICARD_DAMPING: f64 = 0.7;
pub const DEFAULT_NODES_PER_DECADE: usize = 384;
pub const DEFAULT_GRID_END: f64 = 1e-9;

/// Cumulative rate/mean/variance integrals at grid nodes, built once per
/// Picard call with classical RK4 inside each panel:
///   jb' = rate, ia' = rate*target*e^{jb}, iv' = vol^2 e^{2 jb}.
struct NodeCache {
    jb: Vec<f64>,
    ia: Vec<f64>,
    iv: Vec<f64>,
    rate: Vec<f64>,
    target: Vec<f64>,
}

impl NodeCache {
    fn build(gain: &OuGain, s_grid: &[f64]) -> NodeCache {
        let l = s_grid.len();
        let mut jb = vec![0.0; l];
        let mut ia = vec![0.0; l];
        let mut iv = vec![0.0; l];
        let rhs = |s: f64, jb_val: f64| -> [f64; 3] {
            let (rate, rate_target, vol2) = gain.ode_rhs(s);
            let e = jb_val.exp();
            [rate, rate_target * e, vol2 * e * e]
        };
        const SUBSTEPS: usize = 8;
        for p in 1..l {
            let (a, b) = (s_grid[p - 1], s_grid[p]);
            let h = (b - a) / SUBSTEPS as f64;
            let mut state = [jb[p - 1], ia[p - 1], iv[p - 1]];
            for step in 0..SUBSTEPS {
                let s0 = a + step as f64 * h;
                let k1 = rhs(s0, state[0]);
                let k2 = rhs(s0 + 0.5 * h, state[0] + 0.5 * h * k1[0]);
                let k3 = rhs(s0 + 0.5 * h, state[0] + 0.5 * h * k2[0]);
                let k4 = rhs(s0 + h, state[0] + h * k3[0]);
                for c in 0..3 {
                    state[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
                }
            }
            jb[p] = state[0];
            ia[p] = state[1];
            iv[p] = state[2];
        }
        let rate = s_grid.iter().map(|&s| gain.rate(s)).collect();
        let target = s_grid.iter().map(|&s| gain.target(s)).collect();
        NodeCache {
            jb,
            ia,
            iv,
            rate,
            target,
        }
    }

    /// Law of G at node j given G = g at node l <= j.
    #[inline]
    fn law(&self, l: usize, g: f64, j: usize) -> GmLaw {
        let phi = (self.jb[l] - self.jb[j]).exp();
        let decay = (-self.jb[j]).exp();
        let mean = phi * g + decay * (self.ia[j] - self.ia[l]);
        let var = (decay * decay * (self.iv[j] - self.iv[l])).max(0.0);
        GmLaw::new(mean, var)
    }
}

/// Damped Picard iteration on the free-boundary equation. The `s_grid`
/// must increase inside [0, 1), refined toward 1 (see [`geometric_grid`]).
pub fn picard_solve(
    gain: &OuGain,
    s_grid: &[f64],
    tol: f64,
    max_iter: usize,
    damping: f64,
) -> Result<BoundarySolution> {
    if s_grid.len() < 8 || s_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(
            "picard grid must be increasing with at least 8 nodes".into(),
        ));
    }
    if s_grid[0] < 0.0 || *s_grid.last().unwrap() >= 1.0 {
        return Err(Error::Precondition("picard grid must lie in [0, 1)".into()));
    }
    if !(tol > 0.0) || !(0.0 < damping && damping <= 1.0) {
        return Err(Error::Precondition(
            "tol must be positive and damping in (0, 1]".into(),
        ));
    }

    let cache = NodeCache::build(gain, s_grid);
    let is_dirac = matches!(gain.case(), GainCase::DiracPrior);
    let last = s_grid.len() - 1;

    // The equation is only well-posed on nodes whose remaining integral the
    // grid resolves and whose implicit-anchor denominator stays bounded;
    // the trailing band follows the sqrt(1-s) terminal asymptote instead.
    let cut = equation_cut(s_grid, &cache);
    let anchor_val = gain.terminal_value();
    let extend_tail = |b: &mut [f64]| {
        let delta_cut = 1.0 - s_grid[cut];
        let head = b[cut];
        for j in (cut + 1)..=last {
            let frac = ((1.0 - s_grid[j]) / delta_cut).sqrt();
            b[j] = anchor_val + (head - anchor_val) * frac;
        }
    };

    let mut b = vec![anchor_val; s_grid.len()];
    let mut log_rows = Vec::new();
    let mut residual = f64::INFINITY;
    for iter in 1..=max_iter {
        let fresh: Vec<f64> = (0..=cut)
            .into_par_iter()
            .map(|l| rhs_at(gain, &cache, s_grid, &b, l, is_dirac))
            .collect();
        residual = b
            .iter()
            .zip(&fresh)
            .map(|(old, new)| (new - old).abs())
            .fold(0.0f64, f64::max);
        for (old, new) in b.iter_mut().zip(&fresh) {
            *old += damping * (new - *old);
        }
        extend_tail(&mut b);
        log_rows.push((iter, residual));
        if residual < tol {
            let mut s_out = s_grid.to_vec();
            let mut b_out = b;
            s_out.push(1.0);
            b_out.push(anchor_val);
            return Ok(BoundarySolution {
                s: s_out,
                b_gain: b_out,
                iterations: iter,
                residual,
                log: log_rows,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// One right-hand-side evaluation at node `l` (requires l < last).
///
/// Trapezoid over the resolved nodes plus a power-law extrapolated tail past
/// the last node; the tail exponent is fitted from the last two integrand
/// values, since the Dirac-case integrand grows like (1-u)^{-1/2} near the
/// boundary but flattens to a constant deep inside the stopping region, and
/// using the wrong model there destabilizes the iteration.
///
/// In the Gaussian case the anchor E[G_1 | G_s = b(s)] = phi b(s) + m is
/// treated implicitly: the plain update contracts at rate phi -> 1 near
/// s = 1 and stalls, while solving the linear term exactly leaves the same
/// fixed point with a bounded rate.
fn rhs_at(
    gain: &OuGain,
    cache: &NodeCache,
    s_grid: &[f64],
    b: &[f64],
    l: usize,
    is_dirac: bool,
) -> f64 {
    let last = s_grid.len() - 1;
    let g = b[l];
    // integrand at node j >= l; at j = l the law degenerates at the
    // boundary itself, where the indicator carries mass 1/2
    let integrand = |j: usize| -> f64 {
        if j == l {
            return 0.5 * cache.rate[j] * (cache.target[j] - g);
        }
        let law = cache.law(l, g, j);
        cache.rate[j] * truncated_expectation(&law, cache.target[j], b[j])
    };
    let mut integral = 0.0;
    let mut prev2 = f64::NAN;
    let mut prev = integrand(l);
    for j in (l + 1)..=last {
        let cur = integrand(j);
        integral += 0.5 * (prev + cur) * (s_grid[j] - s_grid[j - 1]);
        prev2 = prev;
        prev = cur;
    }
    // tail: integrand ~ C (1-u)^{-p} => remaining mass = g_last (1-s_last)/(1-p)
    let delta_last = 1.0 - s_grid[last];
    let tail = {
        let delta_prev = 1.0 - s_grid[last - 1];
        let mut p = 0.0;
        if prev2.is_finite() && prev * prev2 > 0.0 {
            p = ((prev / prev2).ln() / (delta_prev / delta_last).ln()).clamp(0.0, 0.9);
        }
        prev * delta_last / (1.0 - p)
    };
    if is_dirac {
        gain.terminal_value() - (integral + tail)
    } else {
        let phi = (cache.jb[l] - cache.jb[last]).exp();
        let m_add = (-cache.jb[last]).exp() * (cache.ia[last] - cache.ia[l]);
        (m_add - (integral + tail)) / (1.0 - phi)
    }
}

/// Last node whose equation is well-posed on this grid: at least one decade
/// of nodes must remain ahead of it, and the implicit-anchor denominator
/// 1 - phi must stay above 5e-3.
fn equation_cut(s_grid: &[f64], cache: &NodeCache) -> usize {
    let last = s_grid.len() - 1;
    let delta_last = 1.0 - s_grid[last];
    let decade_cut = s_grid
        .iter()
        .rposition(|&s| 1.0 - s >= 10.0 * delta_last)
        .unwrap_or(last - 1);
    let phi_cut = (0..=last)
        .rev()
        .find(|&l| 1.0 - (cache.jb[l] - cache.jb[last]).exp() >= 5e-3)
        .unwrap_or(last - 1);
    decade_cut.min(phi_cut).clamp(4, last - 1)
}

/// Sup-norm defect of a converged boundary when re-inserted into the RHS,
/// measured over the equation-defined nodes (the trailing asymptote band
/// and the appended terminal node are closures, not equations).
pub fn fixed_point_defect(gain: &OuGain, sol: &BoundarySolution) -> f64 {
    let interior = sol.s.len() - 1;
    let s_grid = &sol.s[..interior];
    let b = &sol.b_gain[..interior];
    let cache = NodeCache::build(gain, s_grid);
    let is_dirac = matches!(gain.case(), GainCase::DiracPrior);
    let cut = equation_cut(s_grid, &cache);
    (0..=cut)
        .into_par_iter()
        .map(|l| (rhs_at(gain, &cache, s_grid, b, l, is_dirac) - b[l]).abs())
        .reduce(|| 0.0, f64::max)
}


#[cfg(test)]
mod probe {
    use super::*;
    use crate::gmp::brownian_motion;

    #[test]
    #[ignore]
    fn trace_picard_dirac() {
        let tc = TimeChange::build(&brownian_motion(1.0, 0.0)).unwrap();
        let gain = build_dirac_gain(&tc, 0.0);
        trace(&gain, true);
    }

    #[test]
    #[ignore]
    fn trace_picard_gaussian() {
        let tc = TimeChange::build(&brownian_motion(1.0, 0.0)).unwrap();
        let prior = Prior::gaussian(0.0, 0.5, Frame::Bridge).unwrap();
        let gain = build_gaussian_gain(&tc, &prior).unwrap();
        trace(&gain, false);
    }

    fn trace(gain: &OuGain, is_dirac: bool) {
        let s_grid = geometric_grid(1e-6, 96);
        let n = s_grid.len();
        let last = n - 1;
        let cache = NodeCache::build(gain, &s_grid);
        let cut = equation_cut(&s_grid, &cache);
        let anchor = gain.terminal_value();
        let mut b = vec![anchor; n];
        for sweep in 0..400 {
            let fresh: Vec<f64> = (0..=cut).map(|l| rhs_at(gain, &cache, &s_grid, &b, l, is_dirac)).collect();
            let res = b.iter().zip(&fresh).map(|(o, f)| (f - o).abs()).fold(0.0f64, f64::max);
            let arg = (0..=cut).max_by(|&a, &c| ((fresh[a] - b[a]).abs()).total_cmp(&(fresh[c] - b[c]).abs())).unwrap();
            println!(
                "sweep {sweep:2}: res {res:10.3e} at node {arg} (s={:.9}) | b0 {:.6} bmid {:.6} bcut {:.3e}",
                s_grid[arg], b[0], b[n / 2], b[cut]
            );
            for (o, f) in b.iter_mut().zip(&fresh) {
                *o += 0.7 * (f - *o);
            }
            let delta_cut = 1.0 - s_grid[cut];
            let head = b[cut];
            for j in (cut + 1)..=last {
                b[j] = anchor + (head - anchor) * ((1.0 - s_grid[j]) / delta_cut).sqrt();
            }
        }
    }
}

#[cfg(test)]
mod shepp_check {
    use super::*;
    use crate::gmp::brownian_motion;

    #[test]
    #[ignore]
    fn default_grid_shepp_quality() {
        let tc = TimeChange::build(&brownian_motion(1.0, 0.0)).unwrap();
        let gain = build_dirac_gain(&tc, 0.0);
        let grid = geometric_grid(DEFAULT_GRID_END, DEFAULT_NODES_PER_DECADE);
        let t0 = std::time::Instant::now();
        let sol = picard_solve(&gain, &grid, DEFAULT_PICARD_TOL, DEFAULT_PICARD_MAX_ITER, DEFAULT_PICARD_DAMPING).unwrap();
        println!("nodes {} iterations {} residual {:.3e} elapsed {:?}", grid.len(), sol.iterations, sol.residual, t0.elapsed());
        let mut worst = (0.0f64, 0.0f64);
        for (i, &s) in sol.s.iter().enumerate() {
            if s <= 0.95 {
                let dev = (sol.b_gain[i] - 0.8399 * (1.0 - s).sqrt()).abs();
                if dev > worst.0 { worst = (dev, s); }
            }
        }
        println!("b(0) = {:.6}; max |b - 0.8399 sqrt(1-s)| on s<=0.95: {:.3e} at s = {:.4}", sol.b_gain[0], worst.0, worst.1);
        let defect = fixed_point_defect(&gain, &sol);
        println!("fixed point defect: {:.3e}", defect);
        // ratio flatness
        let mut rmin = f64::INFINITY; let mut rmax = f64::NEG_INFINITY;
        for (i, &s) in sol.s.iter().enumerate() {
            if s <= 0.95 {
                let r = sol.b_gain[i] / (1.0 - s).sqrt();
                rmin = rmin.min(r); rmax = rmax.max(r);
            }
        }
        println!("ratio range on s<=0.95: [{rmin:.6}, {rmax:.6}] spread {:.3e}", rmax - rmin);
    }
}
