//! Terminal-density priors and their posterior pinning laws.
//!
//! A prior nu describes the terminal value of the conditioned process, either
//! in bridge coordinates (the pinning point of the Brownian bridge) or in
//! original coordinates (the law of X_T). Conditioning on the current state
//! (s, y) reweights the prior by the bridge kernel
//!   w(z) = phi(z; y, 1-s) / phi(z; y0, 1),
//! giving the Radon-Nikodym density psi(s, y) = int w(z) nu(z) dz and the
//! posterior nu_{s,y}(z) = w(z) nu(z) / psi(s, y). All ratio evaluations run
//! in log space with max subtraction: near s = 1 the raw kernel overflows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal;
use crate::rng::Substream;
use crate::timechange::TimeChange;

/// Coordinate frame of a prior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// nu: pinning density of the Brownian bridge Y.
    Bridge,
    /// nu-tilde: density of X_T in the original coordinates.
    Original,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorKind {
    Dirac {
        point: f64,
    },
    Discrete {
        points: Vec<f64>,
        weights: Vec<f64>,
    },
    Gaussian {
        mean: f64,
        variance: f64,
    },
    TruncatedGaussian {
        mean: f64,
        variance: f64,
        lower: f64,
        upper: f64,
    },
    Tabulated {
        grid: Vec<f64>,
        density: Vec<f64>,
    },
}

/// A terminal density in a given coordinate frame.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Prior {
    pub kind: PriorKind,
    pub frame: Frame,
}

impl Prior {
    pub fn dirac(point: f64, frame: Frame) -> Self {
        Prior {
            kind: PriorKind::Dirac { point },
            frame,
        }
    }

    pub fn discrete(points: Vec<f64>, weights: Vec<f64>, frame: Frame) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidPrior(
                "discrete prior needs matching non-empty points/weights".into(),
            ));
        }
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&a, &b| points[a].total_cmp(&points[b]));
        let points: Vec<f64> = idx.iter().map(|&i| points[i]).collect();
        let weights: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPrior("duplicate discrete atoms".into()));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidPrior("negative discrete weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPrior(format!(
                "discrete weights sum to {total}, expected 1"
            )));
        }
        Ok(Prior {
            kind: PriorKind::Discrete { points, weights },
            frame,
        })
    }

    pub fn gaussian(mean: f64, variance: f64, frame: Frame) -> Result<Self> {
        if !(variance > 0.0) || !variance.is_finite() {
            return Err(Error::InvalidPrior(format!(
                "gaussian variance must be positive, got {variance}"
            )));
        }
        Ok(Prior {
            kind: PriorKind::Gaussian { mean, variance },
            frame,
        })
    }

    pub fn truncated_gaussian(
        mean: f64,
        variance: f64,
        lower: f64,
        upper: f64,
        frame: Frame,
    ) -> Result<Self> {
        if !(variance > 0.0) || !variance.is_finite() {
            return Err(Error::InvalidPrior(format!(
                "gaussian variance must be positive, got {variance}"
            )));
        }
        if !(lower < upper) {
            return Err(Error::InvalidPrior(format!(
                "truncation bounds must satisfy lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Prior {
            kind: PriorKind::TruncatedGaussian {
                mean,
                variance,
                lower,
                upper,
            },
            frame,
        })
    }

    pub fn tabulated(grid: Vec<f64>, density: Vec<f64>, frame: Frame) -> Result<Self> {
        if grid.len() < 2 || grid.len() != density.len() {
            return Err(Error::InvalidPrior(
                "tabulated prior needs at least two (z, density) rows".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotone("tabulated prior grid".into()));
        }
        if density.iter().any(|&d| d < 0.0 || !d.is_finite()) {
            return Err(Error::InvalidPrior("negative tabulated density".into()));
        }
        let total = trapezoid(&grid, &density);
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidPrior(format!(
                "tabulated density integrates to {total}, expected 1 within 1e-6"
            )));
        }
        Ok(Prior {
            kind: PriorKind::Tabulated { grid, density },
            frame,
        })
    }

    /// Sampling/evaluation form of the raw prior.
    pub fn repr(&self) -> Repr {
        match &self.kind {
            PriorKind::Dirac { point } => Repr::Dirac(*point),
            PriorKind::Discrete { points, weights } => {
                Repr::discrete(points.clone(), weights.clone())
            }
            PriorKind::Gaussian { mean, variance } => Repr::Gaussian {
                mean: *mean,
                sd: variance.sqrt(),
            },
            PriorKind::TruncatedGaussian {
                mean,
                variance,
                lower,
                upper,
            } => Repr::TruncatedGaussian {
                mean: *mean,
                sd: variance.sqrt(),
                lo: *lower,
                hi: *upper,
            },
            PriorKind::Tabulated { grid, density } => {
                Repr::tabulated(grid.clone(), density.clone())
            }
        }
    }

    /// Effective support [lo, hi] (density negligible outside).
    pub fn support(&self) -> (f64, f64) {
        self.repr().support()
    }
}

/// Converts a prior to the other frame by the affine map
/// z_orig = a0(1) + a1(1) z_bridge (with the Jacobian on densities).
pub fn convert_frame(prior: &Prior, tc: &TimeChange) -> Prior {
    let a0 = tc.a0(1.0);
    let a1 = tc.a1(1.0);
    let (to_frame, fwd, scale): (Frame, Box<dyn Fn(f64) -> f64>, f64) = match prior.frame {
        Frame::Bridge => (Frame::Original, Box::new(move |z| a0 + a1 * z), a1),
        Frame::Original => (Frame::Bridge, Box::new(move |z| (z - a0) / a1), 1.0 / a1),
    };
    let kind = match &prior.kind {
        PriorKind::Dirac { point } => PriorKind::Dirac { point: fwd(*point) },
        PriorKind::Discrete { points, weights } => PriorKind::Discrete {
            points: points.iter().map(|&z| fwd(z)).collect(),
            weights: weights.clone(),
        },
        PriorKind::Gaussian { mean, variance } => PriorKind::Gaussian {
            mean: fwd(*mean),
            variance: variance * scale * scale,
        },
        PriorKind::TruncatedGaussian {
            mean,
            variance,
            lower,
            upper,
        } => PriorKind::TruncatedGaussian {
            mean: fwd(*mean),
            variance: variance * scale * scale,
            lower: map_bound(*lower, &fwd),
            upper: map_bound(*upper, &fwd),
        },
        PriorKind::Tabulated { grid, density } => PriorKind::Tabulated {
            grid: grid.iter().map(|&z| fwd(z)).collect(),
            density: density.iter().map(|&d| d / scale).collect(),
        },
    };
    Prior {
        kind,
        frame: to_frame,
    }
}

/// Brings a prior into the requested frame.
pub fn to_frame(prior: &Prior, tc: &TimeChange, frame: Frame) -> Prior {
    if prior.frame == frame {
        prior.clone()
    } else {
        convert_frame(prior, tc)
    }
}

fn map_bound(b: f64, fwd: &dyn Fn(f64) -> f64) -> f64 {
    if b.is_finite() {
        fwd(b)
    } else {
        b
    }
}

// ---------------------------------------------------------------------------
// Posterior pinning law
// ---------------------------------------------------------------------------

/// Concrete sampling/evaluation representation of a one-dimensional law.
#[derive(Clone, Debug)]
pub enum Repr {
    Dirac(f64),
    Discrete {
        points: Vec<f64>,
        weights: Vec<f64>,
        cum: Vec<f64>,
    },
    Gaussian {
        mean: f64,
        sd: f64,
    },
    TruncatedGaussian {
        mean: f64,
        sd: f64,
        lo: f64,
        hi: f64,
    },
    Tabulated {
        grid: Vec<f64>,
        density: Vec<f64>,
        cdf: Vec<f64>,
    },
}

impl Repr {
    fn discrete(points: Vec<f64>, weights: Vec<f64>) -> Repr {
        let mut cum = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cum.push(acc);
        }
        if let Some(last) = cum.last_mut() {
            *last = 1.0;
        }
        Repr::Discrete {
            points,
            weights,
            cum,
        }
    }

    fn tabulated(grid: Vec<f64>, density: Vec<f64>) -> Repr {
        let mut cdf = vec![0.0; grid.len()];
        for i in 1..grid.len() {
            cdf[i] = cdf[i - 1] + 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
        }
        let total = cdf[grid.len() - 1];
        if total > 0.0 {
            for c in cdf.iter_mut() {
                *c /= total;
            }
        }
        let density = density
            .iter()
            .map(|d| d / total.max(f64::MIN_POSITIVE))
            .collect();
        Repr::Tabulated { grid, density, cdf }
    }

    pub fn mean_var(&self) -> (f64, f64) {
        match self {
            Repr::Dirac(z) => (*z, 0.0),
            Repr::Discrete {
                points, weights, ..
            } => {
                let m: f64 = points.iter().zip(weights).map(|(z, w)| z * w).sum();
                let v: f64 = points
                    .iter()
                    .zip(weights)
                    .map(|(z, w)| (z - m) * (z - m) * w)
                    .sum();
                (m, v)
            }
            Repr::Gaussian { mean, sd } => (*mean, sd * sd),
            Repr::TruncatedGaussian { mean, sd, lo, hi } => {
                normal::truncated_moments(*mean, sd * sd, *lo, *hi)
                    .unwrap_or((lo.max(mean - 40.0 * sd), 0.0))
            }
            Repr::Tabulated { grid, density, .. } => {
                let m = trapezoid_with(grid, density, |z| z);
                let v = trapezoid_with(grid, density, |z| (z - m) * (z - m));
                (m, v.max(0.0))
            }
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        match self {
            Repr::Dirac(p) => {
                if z >= *p {
                    1.0
                } else {
                    0.0
                }
            }
            Repr::Discrete {
                points, weights, ..
            } => points
                .iter()
                .zip(weights)
                .take_while(|(p, _)| **p <= z)
                .map(|(_, w)| w)
                .sum(),
            Repr::Gaussian { mean, sd } => normal::cdf((z - mean) / sd),
            Repr::TruncatedGaussian { mean, sd, lo, hi } => {
                if z < *lo {
                    return 0.0;
                }
                if z >= *hi {
                    return 1.0;
                }
                let a = ((lo - mean) / sd).max(-40.0);
                let b = ((hi - mean) / sd).min(40.0);
                let x = (z - mean) / sd;
                let mass = normal::log_mass(a, b).exp();
                ((normal::cdf(x) - normal::cdf(a)) / mass).clamp(0.0, 1.0)
            }
            Repr::Tabulated { grid, cdf, .. } => {
                if z <= grid[0] {
                    return 0.0;
                }
                if z >= *grid.last().unwrap() {
                    return 1.0;
                }
                let i = grid.partition_point(|&g| g <= z) - 1;
                let h = grid[i + 1] - grid[i];
                let u = (z - grid[i]) / h;
                cdf[i] + u * (cdf[i + 1] - cdf[i])
            }
        }
    }

    /// Effective support (gaussian tails cut at 9 sigma).
    pub fn support(&self) -> (f64, f64) {
        match self {
            Repr::Dirac(z) => (*z, *z),
            Repr::Discrete { points, .. } => (points[0], *points.last().unwrap()),
            Repr::Gaussian { mean, sd } => (mean - 9.0 * sd, mean + 9.0 * sd),
            Repr::TruncatedGaussian { mean, sd, lo, hi } => {
                (lo.max(mean - 9.0 * sd), hi.min(mean + 9.0 * sd))
            }
            Repr::Tabulated { grid, density, .. } => {
                let first = density.iter().position(|&d| d > 0.0).unwrap_or(0);
                let last = density
                    .iter()
                    .rposition(|&d| d > 0.0)
                    .unwrap_or(grid.len() - 1);
                (grid[first], grid[last])
            }
        }
    }

    /// Jump/kink locations that Wasserstein integration must respect.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Repr::Dirac(z) => vec![*z],
            Repr::Discrete { points, .. } => points.clone(),
            Repr::Gaussian { .. } => Vec::new(),
            Repr::TruncatedGaussian { lo, hi, .. } => [*lo, *hi]
                .iter()
                .copied()
                .filter(|b| b.is_finite())
                .collect(),
            Repr::Tabulated { grid, .. } => vec![grid[0], *grid.last().unwrap()],
        }
    }

    /// One draw; exact inversion except for truncated-gaussian truncations
    /// beyond f64 tail range, which use a tail rejection sampler.
    pub fn sample(&self, rng: &mut Substream) -> f64 {
        match self {
            Repr::Dirac(z) => *z,
            Repr::Discrete { points, cum, .. } => {
                let u = rng.uniform_open();
                let i = cum.partition_point(|&c| c < u).min(points.len() - 1);
                points[i]
            }
            Repr::Gaussian { mean, sd } => mean + sd * rng.standard_normal(),
            Repr::TruncatedGaussian { mean, sd, lo, hi } => {
                sample_truncated_normal(*mean, *sd, *lo, *hi, rng)
            }
            Repr::Tabulated { grid, cdf, .. } => {
                let u = rng.uniform_open();
                let i = cdf.partition_point(|&c| c < u).clamp(1, grid.len() - 1);
                let (c0, c1) = (cdf[i - 1], cdf[i]);
                if c1 <= c0 {
                    return grid[i];
                }
                let w = (u - c0) / (c1 - c0);
                grid[i - 1] + w * (grid[i] - grid[i - 1])
            }
        }
    }
}

/// Inverse-CDF truncated normal draw; falls back to a shifted-exponential
/// rejection sampler (Robert-style) when the truncation sits beyond the
/// range where the normal CDF is representable in f64.
fn sample_truncated_normal(mean: f64, sd: f64, lo: f64, hi: f64, rng: &mut Substream) -> f64 {
    let mut a = if lo.is_finite() {
        (lo - mean) / sd
    } else {
        f64::NEG_INFINITY
    };
    let mut b = if hi.is_finite() {
        (hi - mean) / sd
    } else {
        f64::INFINITY
    };
    // mirror so the deep-tail side, if any, is the left bound a
    let flip = -b > a;
    if flip {
        (a, b) = (-b, -a);
    }
    let u = rng.uniform_open();
    let z = if a <= 35.0 {
        if a <= 0.0 {
            let (fa, fb) = (normal::cdf(a), normal::cdf(b));
            normal::quantile(fa + u * (fb - fa))
        } else {
            // both bounds in the right tail: invert the survival function
            let (sa, sb) = (normal::sf(a), normal::sf(b));
            -normal::quantile(sa - u * (sa - sb))
        }
    } else {
        robert_tail(a, b, rng)
    };
    let z = if flip { -z } else { z };
    mean + sd * z.clamp((lo - mean) / sd, (hi - mean) / sd)
}

fn robert_tail(a: f64, b: f64, rng: &mut Substream) -> f64 {
    let alpha = 0.5 * (a + (a * a + 4.0).sqrt());
    for _ in 0..10_000 {
        let e = -rng.uniform_open().ln() / alpha;
        let z = a + e;
        let rho = (-(z - alpha) * (z - alpha) / 2.0).exp();
        if rng.uniform_open() <= rho && z <= b {
            return z;
        }
    }
    log::warn!("truncated-normal tail sampler exhausted rejections at a = {a}");
    a
}

/// Posterior pinning law nu_{s,y} together with log psi(s, y).
#[derive(Clone, Debug)]
pub struct Posterior {
    pub repr: Repr,
    pub log_psi: f64,
    pub s: f64,
    pub y: f64,
}

impl Posterior {
    pub fn mean_var(&self) -> (f64, f64) {
        self.repr.mean_var()
    }

    pub fn sample(&self, count: usize, rng: &mut Substream) -> Vec<f64> {
        (0..count).map(|_| self.repr.sample(rng)).collect()
    }
}

/// log of the bridge reweighting kernel phi(z; y, 1-s)/phi(z; y0, 1).
#[inline]
fn log_bridge_weight(z: f64, s: f64, y: f64, y0: f64) -> f64 {
    normal::log_pdf_scaled(z, y, 1.0 - s) - normal::log_pdf_scaled(z, y0, 1.0)
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::OutOfDomain {
            name: "s",
            value: s,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

/// Gaussian product/ratio identity: f1 f2 / f3 = scale * Normal(theta, gamma2)
/// pointwise, for normal densities f_i = Normal(theta_i, gamma2_i).
pub fn gaussian_ratio_product(
    f1: (f64, f64),
    f2: (f64, f64),
    f3: (f64, f64),
) -> Result<(f64, f64, f64)> {
    let (log_scale, theta, gamma2) = log_gaussian_ratio_product(f1, f2, f3)?;
    Ok((log_scale.exp(), theta, gamma2))
}

fn log_gaussian_ratio_product(
    (t1, v1): (f64, f64),
    (t2, v2): (f64, f64),
    (t3, v3): (f64, f64),
) -> Result<(f64, f64, f64)> {
    let prec = 1.0 / v1 + 1.0 / v2 - 1.0 / v3;
    if !(prec > 0.0) {
        return Err(Error::Precondition(format!(
            "1/g1^2 + 1/g2^2 - 1/g3^2 = {prec} must be positive"
        )));
    }
    let gamma2 = 1.0 / prec;
    let theta = gamma2 * (t1 / v1 + t2 / v2 - t3 / v3);
    let c = t1 * t1 / (2.0 * v1) + t2 * t2 / (2.0 * v2)
        - t3 * t3 / (2.0 * v3)
        - theta * theta / (2.0 * gamma2);
    let log_scale = 0.5 * (v3.ln() - v1.ln() - v2.ln() + gamma2.ln()) - c;
    Ok((log_scale, theta, gamma2))
}

/// Posterior of the pinning point given Y_s = y (prior in bridge frame,
/// `y0` the bridge-frame initial value).
pub fn posterior(prior: &Prior, s: f64, y: f64, y0: f64) -> Result<Posterior> {
    check_s(s)?;
    let (repr, log_psi) = match &prior.kind {
        PriorKind::Dirac { point } => (Repr::Dirac(*point), log_bridge_weight(*point, s, y, y0)),
        PriorKind::Discrete { points, weights } => {
            let lw: Vec<f64> = points
                .iter()
                .zip(weights)
                .map(|(&z, &w)| {
                    if w > 0.0 {
                        w.ln() + log_bridge_weight(z, s, y, y0)
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect();
            let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !m.is_finite() {
                return Err(Error::ImpossibleState { s, y });
            }
            let raw: Vec<f64> = lw.iter().map(|&l| (l - m).exp()).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|&r| r / total).collect();
            (Repr::discrete(points.clone(), weights), m + total.ln())
        }
        PriorKind::Gaussian { mean, variance } => {
            let (log_scale, theta, gamma2) =
                log_gaussian_ratio_product((y, 1.0 - s), (*mean, *variance), (y0, 1.0))?;
            (
                Repr::Gaussian {
                    mean: theta,
                    sd: gamma2.sqrt(),
                },
                log_scale,
            )
        }
        PriorKind::TruncatedGaussian {
            mean,
            variance,
            lower,
            upper,
        } => {
            let (log_scale, theta, gamma2) =
                log_gaussian_ratio_product((y, 1.0 - s), (*mean, *variance), (y0, 1.0))?;
            let sd = gamma2.sqrt();
            let log_mass_post = log_std_mass((lower - theta) / sd, (upper - theta) / sd);
            let psd = variance.sqrt();
            let log_mass_prior = log_std_mass((lower - mean) / psd, (upper - mean) / psd);
            if !log_mass_post.is_finite() {
                return Err(Error::ImpossibleState { s, y });
            }
            (
                Repr::TruncatedGaussian {
                    mean: theta,
                    sd,
                    lo: *lower,
                    hi: *upper,
                },
                log_scale + log_mass_post - log_mass_prior,
            )
        }
        PriorKind::Tabulated { grid, density } => {
            let (zs, dens) = refine_grid(grid, density, s, y);
            let lw: Vec<f64> = zs
                .iter()
                .zip(&dens)
                .map(|(&z, &d)| {
                    if d > 0.0 {
                        d.ln() + log_bridge_weight(z, s, y, y0)
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect();
            let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !m.is_finite() {
                return Err(Error::ImpossibleState { s, y });
            }
            let scaled: Vec<f64> = lw.iter().map(|&l| (l - m).exp()).collect();
            let total = trapezoid(&zs, &scaled);
            if !(total > 0.0) {
                return Err(Error::ImpossibleState { s, y });
            }
            let log_psi = m + total.ln();
            let density: Vec<f64> = scaled.iter().map(|&v| v / total).collect();
            (Repr::tabulated(zs, density), log_psi)
        }
    };
    Ok(Posterior {
        repr,
        log_psi,
        s,
        y,
    })
}

fn log_std_mass(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::INFINITY {
        return 0.0;
    }
    let a = a.max(-600.0);
    let b = b.min(600.0);
    normal::log_mass(a, b)
}

/// Union of the prior table with a fine window around the bridge kernel,
/// so the posterior keeps resolution as it concentrates near y when s -> 1.
fn refine_grid(grid: &[f64], density: &[f64], s: f64, y: f64) -> (Vec<f64>, Vec<f64>) {
    let half_width = 8.0 * (1.0 - s).sqrt();
    let lo = (y - half_width).max(grid[0]);
    let hi = (y + half_width).min(*grid.last().unwrap());
    let mut zs: Vec<f64> = grid.to_vec();
    if lo < hi {
        let extra = 512;
        for i in 0..=extra {
            zs.push(lo + (hi - lo) * i as f64 / extra as f64);
        }
    }
    zs.sort_by(f64::total_cmp);
    zs.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let dens = zs
        .iter()
        .map(|&z| interp_linear(grid, density, z))
        .collect();
    (zs, dens)
}

fn interp_linear(grid: &[f64], vals: &[f64], z: f64) -> f64 {
    if z < grid[0] || z > *grid.last().unwrap() {
        return 0.0;
    }
    let i = grid.partition_point(|&g| g <= z).clamp(1, grid.len() - 1) - 1;
    let h = grid[i + 1] - grid[i];
    let u = ((z - grid[i]) / h).clamp(0.0, 1.0);
    vals[i] + u * (vals[i + 1] - vals[i])
}

fn trapezoid(zs: &[f64], vals: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..zs.len() {
        acc += 0.5 * (vals[i] + vals[i - 1]) * (zs[i] - zs[i - 1]);
    }
    acc
}

fn trapezoid_with(zs: &[f64], density: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for i in 1..zs.len() {
        let a = density[i - 1] * f(zs[i - 1]);
        let b = density[i] * f(zs[i]);
        acc += 0.5 * (a + b) * (zs[i] - zs[i - 1]);
    }
    acc
}

/// Radon-Nikodym density psi(s, y | 0, y0).
pub fn psi(prior: &Prior, s: f64, y: f64, y0: f64) -> Result<f64> {
    let post = posterior(prior, s, y, y0)?;
    let v = post.log_psi.exp();
    if v == 0.0 || !v.is_finite() {
        return Err(Error::ImpossibleState { s, y });
    }
    Ok(v)
}

/// Posterior mean and variance of the pinning point.
pub fn posterior_mean_var(post: &Posterior) -> (f64, f64) {
    post.mean_var()
}

/// Information drift mu(s, y) = (E[Z_{s,y}] - y) / (1 - s).
pub fn drift(prior: &Prior, s: f64, y: f64, y0: f64) -> Result<f64> {
    check_s(s)?;
    let post = posterior(prior, s, y, y0)?;
    let (mean, _) = post.mean_var();
    Ok((mean - y) / (1.0 - s))
}

/// Draws `count` i.i.d. posterior samples.
pub fn sample_posterior(post: &Posterior, count: usize, rng: &mut Substream) -> Vec<f64> {
    post.sample(count, rng)
}

// ---------------------------------------------------------------------------
// Likelihood-ratio order
// ---------------------------------------------------------------------------

const LR_GRID: usize = 2048;
const LR_TIE: f64 = 1e-12;

fn density_at(prior: &Prior, z: f64) -> f64 {
    match &prior.kind {
        PriorKind::Dirac { .. } | PriorKind::Discrete { .. } => {
            unreachable!("atom priors handled separately")
        }
        PriorKind::Gaussian { mean, variance } => normal::pdf_scaled(z, *mean, *variance),
        PriorKind::TruncatedGaussian {
            mean,
            variance,
            lower,
            upper,
        } => {
            if z < *lower || z > *upper {
                0.0
            } else {
                let sd = variance.sqrt();
                let mass = log_std_mass((lower - mean) / sd, (upper - mean) / sd).exp();
                normal::pdf_scaled(z, *mean, *variance) / mass
            }
        }
        PriorKind::Tabulated { grid, density } => interp_linear(grid, density, z),
    }
}

fn atoms_of(prior: &Prior) -> Option<Vec<(f64, f64)>> {
    match &prior.kind {
        PriorKind::Dirac { point } => Some(vec![(*point, 1.0)]),
        PriorKind::Discrete { points, weights } => Some(
            points
                .iter()
                .copied()
                .zip(weights.iter().copied())
                .collect(),
        ),
        _ => None,
    }
}

/// True iff nu1 <=lr nu2, i.e. nu1(z) nu2(z') >= nu1(z') nu2(z) for all
/// z <= z' (the ratio nu2/nu1 is non-decreasing where defined).
pub fn lr_order_leq(p1: &Prior, p2: &Prior) -> Result<bool> {
    if p1.frame != p2.frame {
        return Err(Error::Precondition(
            "lr_order_leq requires both priors in the same frame".into(),
        ));
    }
    match (atoms_of(p1), atoms_of(p2)) {
        (Some(a1), Some(a2)) => {
            let mut zs: Vec<f64> = a1.iter().chain(a2.iter()).map(|(z, _)| *z).collect();
            zs.sort_by(f64::total_cmp);
            zs.dedup();
            let w = |atoms: &[(f64, f64)], z: f64| {
                atoms
                    .iter()
                    .find(|(p, _)| *p == z)
                    .map(|(_, w)| *w)
                    .unwrap_or(0.0)
            };
            let v1: Vec<f64> = zs.iter().map(|&z| w(&a1, z)).collect();
            let v2: Vec<f64> = zs.iter().map(|&z| w(&a2, z)).collect();
            Ok(pairwise_lr_test(&v1, &v2))
        }
        (Some(a1), None) => {
            // discrete <=lr continuous iff the continuous law has no mass
            // strictly below the largest atom
            let max_atom = a1.iter().map(|(z, _)| *z).fold(f64::NEG_INFINITY, f64::max);
            let (lo, _) = p2.support();
            Ok(lo >= max_atom - LR_TIE)
        }
        (None, Some(a2)) => {
            // continuous <=lr discrete iff no continuous mass above min atom
            let min_atom = a2.iter().map(|(z, _)| *z).fold(f64::INFINITY, f64::min);
            let (_, hi) = p1.support();
            Ok(hi <= min_atom + LR_TIE)
        }
        (None, None) => {
            let (lo1, hi1) = p1.support();
            let (lo2, hi2) = p2.support();
            let lo = lo1.min(lo2);
            let hi = hi1.max(hi2);
            let v1: Vec<f64> = (0..=LR_GRID)
                .map(|i| density_at(p1, lo + (hi - lo) * i as f64 / LR_GRID as f64))
                .collect();
            let v2: Vec<f64> = (0..=LR_GRID)
                .map(|i| density_at(p2, lo + (hi - lo) * i as f64 / LR_GRID as f64))
                .collect();
            if !v1.iter().zip(&v2).any(|(&a, &b)| a > 0.0 && b > 0.0) {
                return Err(Error::IndeterminateOrder(
                    "densities share no support point on the evaluation grid".into(),
                ));
            }
            Ok(pairwise_lr_test(&v1, &v2))
        }
    }
}

/// nu1(z_i) nu2(z_j) >= nu1(z_j) nu2(z_i) for all i < j, ties within 1e-12
/// (relative to the weight scale) treated as equal.
fn pairwise_lr_test(v1: &[f64], v2: &[f64]) -> bool {
    let scale = v1
        .iter()
        .chain(v2.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    let tie = LR_TIE * scale * scale;
    for i in 0..v1.len() {
        for j in (i + 1)..v1.len() {
            if v1[i] * v2[j] < v1[j] * v2[i] - tie {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Single-boundary criterion
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceSign {
    AllBelow,
    AllAbove,
    Mixed,
}

/// Grid report on the sign of Var[Z_{s,y}] - (1 - s) and the Assumption-1
/// style variance cap.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingleBoundaryReport {
    pub classification: VarianceSign,
    /// Largest Var - (1-s) over the grid (positive side).
    pub worst_above: f64,
    /// Largest (1-s) - Var over the grid (negative side).
    pub worst_below: f64,
    /// sup over y of Var[Z_{s,y}] per time slice.
    pub sup_var_per_slice: Vec<(f64, f64)>,
    pub skipped_cells: usize,
}

/// Evaluates the sign of Var[Z_{s,y}] - (1-s) on a grid: the y-derivative of
/// the information drift is (Var/(1-s) - 1)/(1-s), so "all below" together
/// with non-increasing a1 forces a single upper stopping boundary.
pub fn single_boundary_condition(
    prior: &Prior,
    y0: f64,
    s_grid: &[f64],
    y_grid: &[f64],
) -> SingleBoundaryReport {
    let mut worst_above = f64::NEG_INFINITY;
    let mut worst_below = f64::NEG_INFINITY;
    let mut any_above = false;
    let mut any_below = false;
    let mut sup_var_per_slice = Vec::with_capacity(s_grid.len());
    let mut skipped = 0usize;
    for &s in s_grid {
        let mut sup_var = 0.0f64;
        for &y in y_grid {
            let post = match posterior(prior, s, y, y0) {
                Ok(p) => p,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            let (_, var) = post.mean_var();
            sup_var = sup_var.max(var);
            let gap = var - (1.0 - s);
            let tol = 1e-10 * (1.0 - s).max(var);
            if gap > tol {
                any_above = true;
            }
            if gap < -tol {
                any_below = true;
            }
            worst_above = worst_above.max(gap);
            worst_below = worst_below.max(-gap);
        }
        sup_var_per_slice.push((s, sup_var));
    }
    let classification = match (any_above, any_below) {
        (true, true) => VarianceSign::Mixed,
        (true, false) => VarianceSign::AllAbove,
        _ => VarianceSign::AllBelow,
    };
    SingleBoundaryReport {
        classification,
        worst_above: worst_above.max(0.0),
        worst_below: worst_below.max(0.0),
        sup_var_per_slice,
        skipped_cells: skipped,
    }
}

// ---------------------------------------------------------------------------
// Wasserstein-1 distance
// ---------------------------------------------------------------------------

/// W1 distance by CDF-difference integration on a merged grid; atoms and
/// support edges enter as exact breakpoints, integration uses midpoint
/// sampling inside each smooth piece (equivalent to quantile coupling).
pub fn wasserstein_1d(a: &Repr, b: &Repr) -> f64 {
    let (lo_a, hi_a) = a.support();
    let (lo_b, hi_b) = b.support();
    let mut points: Vec<f64> = vec![lo_a, hi_a, lo_b, hi_b];
    points.extend(a.breakpoints());
    points.extend(b.breakpoints());
    points.sort_by(f64::total_cmp);
    points.dedup();
    if points.len() == 1 {
        return 0.0;
    }
    let total_len: f64 = points.last().unwrap() - points[0];
    if total_len == 0.0 {
        return 0.0;
    }
    let budget = 8192usize;
    let mut acc = 0.0;
    for w in points.windows(2) {
        let (z0, z1) = (w[0], w[1]);
        let len = z1 - z0;
        if len <= 0.0 {
            continue;
        }
        let n = ((len / total_len * budget as f64).ceil() as usize).clamp(8, budget);
        let h = len / n as f64;
        for k in 0..n {
            let z = z0 + (k as f64 + 0.5) * h;
            acc += (a.cdf(z) - b.cdf(z)).abs() * h;
        }
    }
    acc
}
