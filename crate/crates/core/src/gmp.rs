//! Gaussian laws of the unconditioned Gauss-Markov process
//!   dX = (alpha(t) + beta(t) X) dt + zeta(t) dB,  X_0 = x0.
//!
//! Everything reduces to three time integrals
//!   I_beta(t)  = int_0^t beta,
//!   I_alpha(t) = int_0^t alpha(u)/phi0(u) du,
//!   I_var(t)   = int_0^t zeta^2(u)/phi0^2(u) du,
//! with phi0(t) = exp(I_beta(t)). The model tabulates them once on a fine
//! grid (cubic Hermite with exact node derivatives) so that all law queries
//! are O(1); the tabulation itself is built by adaptive quadrature.

use serde::{Deserialize, Serialize};

use crate::curves::CoefficientCurve;
use crate::error::{Error, Result};
use crate::quad;

/// Mean and variance of a one-dimensional Gaussian law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GmLaw {
    pub mean: f64,
    pub variance: f64,
}

impl GmLaw {
    pub fn new(mean: f64, variance: f64) -> Self {
        debug_assert!(variance >= 0.0);
        GmLaw { mean, variance }
    }
}

/// Hermite table on a uniform grid with exact node derivatives.
#[derive(Clone, Debug)]
struct HermiteTable {
    dt: f64,
    vals: Vec<f64>,
    ders: Vec<f64>,
}

impl HermiteTable {
    fn eval(&self, t: f64) -> f64 {
        let n = self.vals.len() - 1;
        let pos = (t / self.dt).floor();
        let i = (pos as usize).min(n - 1);
        let u = (t - i as f64 * self.dt) / self.dt;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * self.vals[i]
            + h10 * self.dt * self.ders[i]
            + h01 * self.vals[i + 1]
            + h11 * self.dt * self.ders[i + 1]
    }
}

#[derive(Clone, Debug)]
struct Cache {
    ib: HermiteTable,
    ia: HermiteTable,
    iv: HermiteTable,
}

/// The unconditioned Gauss-Markov model on [0, T].
#[derive(Clone, Debug)]
pub struct GmpModel {
    alpha: CoefficientCurve,
    beta: CoefficientCurve,
    zeta: CoefficientCurve,
    horizon: f64,
    x0: f64,
    cache: Cache,
}

/// Tabulation panels for the integral cache.
pub const DEFAULT_CACHE_PANELS: usize = 8192;

impl GmpModel {
    pub fn new(
        alpha: CoefficientCurve,
        beta: CoefficientCurve,
        zeta: CoefficientCurve,
        horizon: f64,
        x0: f64,
    ) -> Result<Self> {
        Self::with_resolution(alpha, beta, zeta, horizon, x0, DEFAULT_CACHE_PANELS)
    }

    pub fn with_resolution(
        alpha: CoefficientCurve,
        beta: CoefficientCurve,
        zeta: CoefficientCurve,
        horizon: f64,
        x0: f64,
        panels: usize,
    ) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::OutOfDomain {
                name: "horizon",
                value: horizon,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        alpha.validate(horizon, false, "alpha")?;
        beta.validate(horizon, false, "beta")?;
        zeta.validate(horizon, true, "zeta")?;
        let panels = panels.max(16);
        let cache = build_cache(&alpha, &beta, &zeta, horizon, panels);
        Ok(GmpModel {
            alpha,
            beta,
            zeta,
            horizon,
            x0,
            cache,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn alpha(&self) -> &CoefficientCurve {
        &self.alpha
    }

    pub fn beta(&self) -> &CoefficientCurve {
        &self.beta
    }

    pub fn zeta(&self) -> &CoefficientCurve {
        &self.zeta
    }

    fn check_time(&self, name: &'static str, t: f64) -> Result<f64> {
        let slack = 1e-9 * self.horizon.max(1.0);
        if !(-slack..=self.horizon + slack).contains(&t) {
            return Err(Error::OutOfDomain {
                name,
                value: t,
                lo: 0.0,
                hi: self.horizon,
            });
        }
        Ok(t.clamp(0.0, self.horizon))
    }

    #[inline]
    pub(crate) fn ln_phi0(&self, t: f64) -> f64 {
        self.cache.ib.eval(t)
    }

    /// phi(0, t) = exp(int_0^t beta).
    #[inline]
    pub(crate) fn phi0(&self, t: f64) -> f64 {
        self.ln_phi0(t).exp()
    }

    #[inline]
    pub(crate) fn int_alpha(&self, t: f64) -> f64 {
        self.cache.ia.eval(t)
    }

    #[inline]
    pub(crate) fn int_var(&self, t: f64) -> f64 {
        self.cache.iv.eval(t)
    }

    /// phi(t, t') = exp(int_t^t' beta); phi(t, t) = 1 exactly.
    pub fn phi(&self, t: f64, tp: f64) -> Result<f64> {
        let (t, tp) = self.check_pair(t, tp)?;
        if t == tp {
            return Ok(1.0);
        }
        Ok((self.ln_phi0(tp) - self.ln_phi0(t)).exp())
    }

    /// Conditional mean m_{t,x}(t') = phi(t,t') (x + int_t^t' alpha/phi(t,.)).
    pub fn mean(&self, t: f64, x: f64, tp: f64) -> Result<f64> {
        let (t, tp) = self.check_pair(t, tp)?;
        Ok(self.mean_unchecked(t, x, tp))
    }

    #[inline]
    pub(crate) fn mean_unchecked(&self, t: f64, x: f64, tp: f64) -> f64 {
        let phi = (self.ln_phi0(tp) - self.ln_phi0(t)).exp();
        phi * x + self.phi0(tp) * (self.int_alpha(tp) - self.int_alpha(t))
    }

    /// Conditional variance v_t^2(t') = phi0(t')^2 (I_var(t') - I_var(t)).
    pub fn variance(&self, t: f64, tp: f64) -> Result<f64> {
        let (t, tp) = self.check_pair(t, tp)?;
        if t == tp {
            return Ok(0.0);
        }
        let raw = self.variance_unchecked(t, tp);
        if raw < 0.0 {
            return Err(Error::NegativeVariance(raw));
        }
        Ok(raw)
    }

    #[inline]
    pub(crate) fn variance_unchecked(&self, t: f64, tp: f64) -> f64 {
        let p = self.phi0(tp);
        let raw = p * p * (self.int_var(tp) - self.int_var(t));
        // round-off near tp = t can produce tiny negatives
        if raw < 0.0 && raw > -1e-12 * p * p * self.int_var(tp).max(1.0) {
            0.0
        } else {
            raw
        }
    }

    /// Covariance factorization Cov[X_t, X_t'] = r1(min) r2(max) with
    /// r1(t) = phi0(t) I_var(t) and r2(t) = phi0(t).
    pub fn cov_factors(&self, t: f64) -> Result<(f64, f64)> {
        let t = self.check_time("t", t)?;
        let p = self.phi0(t);
        Ok((p * self.int_var(t), p))
    }

    /// m_{0,0}(t), the deterministic part of the BM representation.
    #[inline]
    pub fn m0(&self, t: f64) -> f64 {
        self.phi0(t) * self.int_alpha(t)
    }

    /// Law of X_{t'} given X_t = x and X_T = z (exact Gaussian bridge step).
    ///
    /// Conditional covariance Cov[X_{t'}, X_T | X_t] = v_t^2(t') phi(t', T),
    /// conditioned on X_T by standard Gaussian algebra; the variance vanishes
    /// as t' -> T (pinning).
    pub fn bridge_step_law(&self, t: f64, x: f64, tp: f64, z: f64) -> Result<GmLaw> {
        let (t, tp) = self.check_pair(t, tp)?;
        if t == tp {
            return Err(Error::DegenerateInterval(t));
        }
        Ok(self.bridge_step_law_unchecked(t, x, tp, z))
    }

    #[inline]
    pub(crate) fn bridge_step_law_unchecked(&self, t: f64, x: f64, tp: f64, z: f64) -> GmLaw {
        let vt = self.variance_unchecked(t, tp);
        let v_horizon = self.variance_unchecked(t, self.horizon);
        let phi_tp_t = (self.ln_phi0(self.horizon) - self.ln_phi0(tp)).exp();
        let c = vt * phi_tp_t;
        let m_tp = self.mean_unchecked(t, x, tp);
        let m_t = self.mean_unchecked(t, x, self.horizon);
        let mean = m_tp + c * (z - m_t) / v_horizon;
        let variance = (vt - c * c / v_horizon).clamp(0.0, vt);
        GmLaw { mean, variance }
    }

    fn check_pair(&self, t: f64, tp: f64) -> Result<(f64, f64)> {
        let t = self.check_time("t", t)?;
        let tp = self.check_time("t'", tp)?;
        if tp < t {
            return Err(Error::OutOfDomain {
                name: "t'",
                value: tp,
                lo: t,
                hi: self.horizon,
            });
        }
        Ok((t, tp))
    }
}

fn build_cache(
    alpha: &CoefficientCurve,
    beta: &CoefficientCurve,
    zeta: &CoefficientCurve,
    horizon: f64,
    panels: usize,
) -> Cache {
    let dt = horizon / panels as f64;
    let node = |i: usize| i as f64 * dt;

    // pass 1: I_beta
    let mut ib_vals = Vec::with_capacity(panels + 1);
    let mut ib_ders = Vec::with_capacity(panels + 1);
    ib_vals.push(0.0);
    ib_ders.push(beta.eval(0.0));
    let mut acc = 0.0;
    for i in 0..panels {
        acc += quad::integrate(|u| beta.eval(u), node(i), node(i + 1), 1e-12);
        ib_vals.push(acc);
        ib_ders.push(beta.eval(node(i + 1)));
    }
    let ib = HermiteTable {
        dt,
        vals: ib_vals,
        ders: ib_ders,
    };

    // pass 2: I_alpha and I_var, with phi0 from the pass-1 interpolant
    let ln_phi0 = |u: f64| ib.eval(u);
    let f_alpha = |u: f64| alpha.eval(u) * (-ln_phi0(u)).exp();
    let f_var = |u: f64| {
        let z = zeta.eval(u);
        z * z * (-2.0 * ln_phi0(u)).exp()
    };
    let mut ia_vals = Vec::with_capacity(panels + 1);
    let mut ia_ders = Vec::with_capacity(panels + 1);
    let mut iv_vals = Vec::with_capacity(panels + 1);
    let mut iv_ders = Vec::with_capacity(panels + 1);
    ia_vals.push(0.0);
    iv_vals.push(0.0);
    ia_ders.push(f_alpha(0.0));
    iv_ders.push(f_var(0.0));
    let (mut acc_a, mut acc_v) = (0.0, 0.0);
    for i in 0..panels {
        acc_a += quad::integrate(&f_alpha, node(i), node(i + 1), 1e-12);
        acc_v += quad::integrate(&f_var, node(i), node(i + 1), 1e-12);
        ia_vals.push(acc_a);
        iv_vals.push(acc_v);
        ia_ders.push(f_alpha(node(i + 1)));
        iv_ders.push(f_var(node(i + 1)));
    }

    Cache {
        ib,
        ia: HermiteTable {
            dt,
            vals: ia_vals,
            ders: ia_ders,
        },
        iv: HermiteTable {
            dt,
            vals: iv_vals,
            ders: iv_ders,
        },
    }
}

/// Precomputed conditional bridge-step coefficients along a time grid:
/// step i maps (x at t_i, pin z) to the exact Gaussian law of X_{t_{i+1}}
/// given X_T = z.
#[derive(Clone, Debug)]
pub struct BridgeStepper {
    steps: Vec<StepCoef>,
}

#[derive(Clone, Copy, Debug)]
struct StepCoef {
    p1: f64,
    q1: f64,
    pt: f64,
    qt: f64,
    w: f64,
    sd: f64,
}

impl BridgeStepper {
    pub fn new(model: &GmpModel, times: &[f64]) -> Result<Self> {
        if times.len() < 2 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotone("bridge time grid".into()));
        }
        let horizon = model.horizon();
        let mut steps = Vec::with_capacity(times.len() - 1);
        for i in 0..times.len() - 1 {
            let (t, tp) = (times[i], times[i + 1]);
            let p1 = model.phi(t, tp)?;
            let q1 = model.phi0(tp) * (model.int_alpha(tp) - model.int_alpha(t));
            let pt = model.phi(t, horizon)?;
            let qt = model.phi0(horizon) * (model.int_alpha(horizon) - model.int_alpha(t));
            let vt = model.variance_unchecked(t, tp);
            let v_hor = model.variance_unchecked(t, horizon);
            let c = vt * model.phi(tp, horizon)?;
            let w = c / v_hor;
            let var = (vt - c * w).max(0.0);
            steps.push(StepCoef {
                p1,
                q1,
                pt,
                qt,
                w,
                sd: var.sqrt(),
            });
        }
        Ok(BridgeStepper { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Law of X_{t_{i+1}} given X_{t_i} = x and X_T = pin.
    #[inline]
    pub fn law(&self, i: usize, x: f64, pin: f64) -> GmLaw {
        let c = &self.steps[i];
        let mean = c.p1 * x + c.q1 + c.w * (pin - c.pt * x - c.qt);
        GmLaw {
            mean,
            variance: c.sd * c.sd,
        }
    }

    /// One exact conditional step.
    #[inline]
    pub fn advance(&self, i: usize, x: f64, pin: f64, noise: f64) -> f64 {
        let c = &self.steps[i];
        c.p1 * x + c.q1 + c.w * (pin - c.pt * x - c.qt) + c.sd * noise
    }
}

/// Convenience constructors for the models used throughout the tests.
pub fn brownian_motion(horizon: f64, x0: f64) -> GmpModel {
    GmpModel::new(
        CoefficientCurve::constant(0.0),
        CoefficientCurve::constant(0.0),
        CoefficientCurve::constant(1.0),
        horizon,
        x0,
    )
    .expect("BM model is always valid")
}

pub fn ornstein_uhlenbeck(horizon: f64, x0: f64) -> GmpModel {
    GmpModel::new(
        CoefficientCurve::constant(0.0),
        CoefficientCurve::constant(-1.0),
        CoefficientCurve::constant(1.0),
        horizon,
        x0,
    )
    .expect("OU model is always valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent high-order oracle: composite 4-panel Simpson refinement.
    fn simpson_oracle<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    fn fig2b_beta() -> CoefficientCurve {
        CoefficientCurve::TanhStep {
            low: -10.0,
            high: -9.05,
            steepness: 100.0,
            center: 0.5,
        }
    }

    #[test]
    fn phi_zero_beta_is_one() {
        let m = brownian_motion(1.0, 0.0);
        assert_eq!(m.phi(0.2, 0.9).unwrap(), 1.0);
        assert_eq!(m.phi(0.4, 0.4).unwrap(), 1.0);
    }

    #[test]
    fn phi_constant_beta_closed_form() {
        let m = ornstein_uhlenbeck(1.0, 0.0);
        assert_relative_eq!(m.phi(0.0, 1.0).unwrap(), (-1.0f64).exp(), epsilon = 1e-10);
    }

    #[test]
    fn phi_tanh_step_vs_quadrature_oracle() {
        let m = GmpModel::new(
            CoefficientCurve::constant(0.0),
            fig2b_beta(),
            CoefficientCurve::constant(1.0),
            1.0,
            0.0,
        )
        .unwrap();
        let oracle = simpson_oracle(|u| fig2b_beta().eval(u), 0.0, 1.0, 200_000).exp();
        assert_relative_eq!(m.phi(0.0, 1.0).unwrap(), oracle, max_relative = 1e-8);
    }

    #[test]
    fn phi_domain_violation() {
        let m = brownian_motion(1.0, 0.0);
        assert!(m.phi(-0.5, 0.5).is_err());
        assert!(m.phi(0.0, 1.5).is_err());
        assert!(m.phi(0.7, 0.2).is_err());
    }

    #[test]
    fn mean_martingale_case() {
        let m = brownian_motion(1.0, 0.0);
        assert_relative_eq!(m.mean(0.1, 0.7, 0.9).unwrap(), 0.7, epsilon = 1e-12);
    }

    #[test]
    fn mean_ou_closed_form() {
        let m = ornstein_uhlenbeck(1.0, 0.0);
        for tp in [0.25, 0.5, 1.0] {
            assert_relative_eq!(
                m.mean(0.0, 2.0, tp).unwrap(),
                2.0 * (-tp).exp(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn mean_fig2a_vs_quadrature_oracle() {
        // alpha(t) = 2 sin(10 pi t), beta = -1
        let alpha = CoefficientCurve::Sine {
            amplitude: 2.0,
            frequency: 10.0,
        };
        let m = GmpModel::new(
            alpha.clone(),
            CoefficientCurve::constant(-1.0),
            CoefficientCurve::constant(1.0),
            1.0,
            0.0,
        )
        .unwrap();
        let (t, x, tp) = (0.15f64, 0.4f64, 0.85f64);
        // m = phi(t,tp) (x + int_t^tp alpha(u) e^{u-t} du), phi(t,tp)=e^{-(tp-t)}
        let oracle = (-(tp - t)).exp()
            * (x + simpson_oracle(|u| alpha.eval(u) * (u - t).exp(), t, tp, 200_000));
        assert_relative_eq!(m.mean(t, x, tp).unwrap(), oracle, max_relative = 1e-8);
    }

    #[test]
    fn variance_bm_is_elapsed_time() {
        let m = brownian_motion(1.0, 0.0);
        assert_relative_eq!(m.variance(0.2, 0.75).unwrap(), 0.55, epsilon = 1e-10);
        assert_eq!(m.variance(0.3, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn variance_ou_closed_form() {
        let m = ornstein_uhlenbeck(1.0, 0.0);
        for tp in [0.3f64, 0.6, 1.0] {
            let exact = (1.0 - (-2.0 * tp).exp()) / 2.0;
            assert_relative_eq!(m.variance(0.0, tp).unwrap(), exact, epsilon = 1e-10);
        }
    }

    #[test]
    fn cov_factors_bm_and_ou() {
        let bm = brownian_motion(1.0, 0.0);
        let (r1, r2) = bm.cov_factors(0.6).unwrap();
        assert_relative_eq!(r1, 0.6, epsilon = 1e-10);
        assert_relative_eq!(r2, 1.0, epsilon = 1e-12);

        let ou = ornstein_uhlenbeck(1.0, 0.0);
        let t = 0.7;
        let (r1, r2) = ou.cov_factors(t).unwrap();
        assert_relative_eq!(
            r1,
            (-t).exp() * ((2.0 * t).exp() - 1.0) / 2.0,
            epsilon = 1e-9
        );
        assert_relative_eq!(r2, (-t).exp(), epsilon = 1e-10);

        // t = 0 for any model
        let (r1, r2) = ou.cov_factors(0.0).unwrap();
        assert_eq!(r1, 0.0);
        assert_eq!(r2, 1.0);
    }

    #[test]
    fn cov_factors_consistent_with_variance() {
        let ou = ornstein_uhlenbeck(1.0, 0.0);
        for t in [0.1, 0.4, 0.9] {
            let (r1, r2) = ou.cov_factors(t).unwrap();
            assert_relative_eq!(r1 * r2, ou.variance(0.0, t).unwrap(), max_relative = 1e-9);
        }
    }

    #[test]
    fn bridge_step_classic_brownian_bridge() {
        let m = brownian_motion(1.0, 0.0);
        let z = 0.8;
        for tp in [0.25, 0.5, 0.9] {
            let law = m.bridge_step_law(0.0, 0.0, tp, z).unwrap();
            assert_relative_eq!(law.mean, z * tp, epsilon = 1e-10);
            assert_relative_eq!(law.variance, tp * (1.0 - tp), epsilon = 1e-10);
        }
    }

    #[test]
    fn bridge_step_pins_at_horizon() {
        for m in [brownian_motion(1.0, 0.0), ornstein_uhlenbeck(1.0, 0.0)] {
            let law = m.bridge_step_law(0.4, -0.3, 1.0, 1.7).unwrap();
            assert_relative_eq!(law.mean, 1.7, epsilon = 1e-9);
            assert!(law.variance.abs() < 1e-12);
        }
    }

    #[test]
    fn bridge_step_errors() {
        let m = brownian_motion(1.0, 0.0);
        assert!(matches!(
            m.bridge_step_law(0.5, 0.0, 0.5, 1.0),
            Err(Error::DegenerateInterval(_))
        ));
        assert!(m.bridge_step_law(0.0, 0.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn bridge_step_variance_below_unconditional() {
        let m = ornstein_uhlenbeck(1.0, 0.0);
        let law = m.bridge_step_law(0.0, 0.0, 0.5, 1.0).unwrap();
        assert!(law.variance >= 0.0);
        assert!(law.variance <= m.variance(0.0, 0.5).unwrap());
    }

    #[test]
    fn variance_strictly_increasing_constant_zeta() {
        // holds for constant zeta (incl. strongly negative beta)
        for beta in [0.0, -1.0, -10.0, 0.5] {
            let m = GmpModel::new(
                CoefficientCurve::constant(0.0),
                CoefficientCurve::constant(beta),
                CoefficientCurve::constant(1.0),
                1.0,
                0.0,
            )
            .unwrap();
            let mut prev = 0.0;
            for i in 1..=50 {
                let v = m.variance(0.0, i as f64 / 50.0).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_model() -> impl Strategy<Value = GmpModel> {
            (
                -2.0f64..2.0,
                -3.0f64..1.5,
                0.3f64..2.0,
                prop_oneof![Just(1.0f64), Just(2.0f64), Just(4.0f64)],
            )
                .prop_map(|(a, b, z, horizon)| {
                    GmpModel::with_resolution(
                        CoefficientCurve::constant(a),
                        CoefficientCurve::constant(b),
                        CoefficientCurve::constant(z),
                        horizon,
                        0.0,
                        1024,
                    )
                    .unwrap()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn phi_semigroup(model in arb_model(), f1 in 0.0f64..1.0, f2 in 0.0f64..1.0, f3 in 0.0f64..1.0) {
                let horizon = model.horizon();
                let mut ts = [f1 * horizon, f2 * horizon, f3 * horizon];
                ts.sort_by(f64::total_cmp);
                let whole = model.phi(ts[0], ts[2]).unwrap();
                let split = model.phi(ts[0], ts[1]).unwrap() * model.phi(ts[1], ts[2]).unwrap();
                prop_assert!((whole - split).abs() <= 1e-10 * whole.abs().max(1.0));
            }

            #[test]
            fn variance_nonneg_and_monotone(model in arb_model(), f1 in 0.0f64..1.0, f2 in 0.0f64..1.0) {
                let horizon = model.horizon();
                let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
                let t = lo * horizon;
                let tp = hi * horizon;
                let v = model.variance(t, tp).unwrap();
                prop_assert!(v >= 0.0);
                // strictly increasing in tp (constant-zeta models)
                if tp + 0.05 <= horizon {
                    let v2 = model.variance(t, tp + 0.05).unwrap();
                    prop_assert!(v2 > v);
                }
            }

            #[test]
            fn bridge_variance_within_bounds(model in arb_model(), ft in 0.0f64..0.9, fp in 0.01f64..1.0, z in -2.0f64..2.0) {
                let horizon = model.horizon();
                let t = ft * horizon;
                let tp = t + fp * (horizon - t);
                if tp > t {
                    let law = model.bridge_step_law(t, 0.3, tp, z).unwrap();
                    let vt = model.variance(t, tp).unwrap();
                    prop_assert!(law.variance >= 0.0 && law.variance <= vt + 1e-12);
                }
            }
        }
    }
}
