//! Reduction of the Gauss-Markov process to a scaled Brownian motion.
//!
//! With h(t) = r1(t)/r2(t) and Tbar = h(T), the process satisfies
//! X_t = a0(s) + a1(s) Y_s at s = h(t)/Tbar, where Y is a Brownian motion
//! started at x0/sqrt(Tbar),
//!   a0(s) = m(h^{-1}(s Tbar)),  a1(s) = phi(h^{-1}(s Tbar)) sqrt(Tbar).
//! The coordinate maps and the derivatives a0', a1' (needed by the Volterra
//! kernels) are evaluated from the model's cached integrals; the derivatives
//! use the exact chain-rule forms
//!   a0'(s) = (alpha + beta m)(t) * t'(s),  a1'(s) = beta(t) a1(s) t'(s),
//! with t'(s) = Tbar phi^2(t) / zeta^2(t).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gmp::GmpModel;

/// Immutable time-change data for one model.
#[derive(Clone, Debug)]
pub struct TimeChange {
    model: Arc<GmpModel>,
    tbar: f64,
    sqrt_tbar: f64,
}

/// Suprema of |a0|, |a0'|, a1, |a1'| on [0, 1].
#[derive(Clone, Copy, Debug)]
pub struct CoefficientBounds {
    pub a0_sup: f64,
    pub a0_deriv_sup: f64,
    pub a1_sup: f64,
    pub a1_deriv_sup: f64,
}

pub const DEFAULT_RESOLUTION: usize = 4096;

impl TimeChange {
    pub fn build(model: &GmpModel) -> Result<Self> {
        Self::build_with_resolution(model, DEFAULT_RESOLUTION)
    }

    /// `resolution` is the density of the monotonicity / round-trip check
    /// grid; the tabulation itself reuses the model's integral cache.
    pub fn build_with_resolution(model: &GmpModel, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Precondition("resolution must be >= 2".into()));
        }
        let horizon = model.horizon();
        let tbar = model.int_var(horizon);
        if !(tbar > 0.0) || !tbar.is_finite() {
            return Err(Error::NonMonotone(format!("h(T) = {tbar} not positive")));
        }
        // h must be strictly increasing on the check grid
        let mut prev = 0.0;
        for i in 1..=resolution {
            let t = horizon * i as f64 / resolution as f64;
            let h = model.int_var(t);
            if h <= prev {
                return Err(Error::NonMonotone(format!("h not increasing at t = {t}")));
            }
            prev = h;
        }
        let tc = TimeChange {
            model: Arc::new(model.clone()),
            tbar,
            sqrt_tbar: tbar.sqrt(),
        };
        // round-trip sanity on the same grid
        for i in 0..=resolution {
            let t = horizon * i as f64 / resolution as f64;
            let back = tc.t_of_s(tc.s_of_t(t));
            if (back - t).abs() > 1e-10 * horizon.max(1.0) {
                return Err(Error::NonMonotone(format!(
                    "time-change round trip drift {} at t = {t}",
                    back - t
                )));
            }
        }
        Ok(tc)
    }

    pub fn model(&self) -> &GmpModel {
        &self.model
    }

    /// Tbar = h(T).
    pub fn tbar(&self) -> f64 {
        self.tbar
    }

    /// Bridge-frame initial value y0 = x0 / sqrt(Tbar).
    pub fn y0(&self) -> f64 {
        self.model.x0() / self.sqrt_tbar
    }

    pub fn s_of_t(&self, t: f64) -> f64 {
        (self.model.int_var(t) / self.tbar).clamp(0.0, 1.0)
    }

    /// Inverse time map: bisection bracket, then Newton refinement with
    /// h'(t) = zeta^2/phi0^2.
    pub fn t_of_s(&self, s: f64) -> f64 {
        let horizon = self.model.horizon();
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return horizon;
        }
        let target = s * self.tbar;
        let (mut lo, mut hi) = (0.0, horizon);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if self.model.int_var(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..3 {
            let z = self.model.zeta().eval(t);
            let p = self.model.phi0(t);
            let hp = z * z / (p * p);
            let step = (self.model.int_var(t) - target) / hp;
            t = (t - step).clamp(0.0, horizon);
            if step.abs() < 1e-15 * horizon.max(1.0) {
                break;
            }
        }
        t
    }

    /// (t, x) -> (s, y) with y = (x - m(t)) / (phi(t) sqrt(Tbar)).
    pub fn to_bridge_coords(&self, t: f64, x: f64) -> (f64, f64) {
        let s = self.s_of_t(t);
        let y = (x - self.model.m0(t)) / (self.model.phi0(t) * self.sqrt_tbar);
        (s, y)
    }

    /// Inverse of [`Self::to_bridge_coords`].
    pub fn from_bridge_coords(&self, s: f64, y: f64) -> (f64, f64) {
        let t = self.t_of_s(s);
        let x = self.model.m0(t) + self.model.phi0(t) * self.sqrt_tbar * y;
        (t, x)
    }

    pub fn a0(&self, s: f64) -> f64 {
        self.model.m0(self.t_of_s(s))
    }

    pub fn a1(&self, s: f64) -> f64 {
        self.model.phi0(self.t_of_s(s)) * self.sqrt_tbar
    }

    /// a0'(s) by the chain rule.
    pub fn a0_deriv(&self, s: f64) -> f64 {
        let t = self.t_of_s(s);
        let m = self.model.m0(t);
        (self.model.alpha().eval(t) + self.model.beta().eval(t) * m) * self.t_deriv(t)
    }

    /// a1'(s) by the chain rule.
    pub fn a1_deriv(&self, s: f64) -> f64 {
        let t = self.t_of_s(s);
        self.model.beta().eval(t) * self.model.phi0(t) * self.sqrt_tbar * self.t_deriv(t)
    }

    /// t'(s) = Tbar phi0^2(t) / zeta^2(t).
    fn t_deriv(&self, t: f64) -> f64 {
        let z = self.model.zeta().eval(t);
        let p = self.model.phi0(t);
        self.tbar * p * p / (z * z)
    }

    /// Gain function G(s, y) = a0(s) + a1(s) y; strictly increasing in y.
    pub fn gain(&self, s: f64, y: f64) -> f64 {
        self.a0(s) + self.a1(s) * y
    }

    /// Suprema of the auxiliary functions on a dense grid (diagnostic).
    pub fn coefficient_bounds(&self) -> CoefficientBounds {
        self.coefficient_bounds_with(10_000)
    }

    pub fn coefficient_bounds_with(&self, points: usize) -> CoefficientBounds {
        let points = points.max(10_000);
        let mut b = CoefficientBounds {
            a0_sup: 0.0,
            a0_deriv_sup: 0.0,
            a1_sup: 0.0,
            a1_deriv_sup: 0.0,
        };
        for i in 0..=points {
            let s = i as f64 / points as f64;
            b.a0_sup = b.a0_sup.max(self.a0(s).abs());
            b.a0_deriv_sup = b.a0_deriv_sup.max(self.a0_deriv(s).abs());
            b.a1_sup = b.a1_sup.max(self.a1(s));
            b.a1_deriv_sup = b.a1_deriv_sup.max(self.a1_deriv(s).abs());
        }
        b
    }

    /// Dump (t, s, a0, a1, a0', a1') rows for debugging.
    pub fn tabulation_csv(&self, rows: usize) -> String {
        let mut out = String::from("t,s,a0,a1,a0_deriv,a1_deriv\n");
        for i in 0..=rows {
            let s = i as f64 / rows as f64;
            let t = self.t_of_s(s);
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                t,
                s,
                self.a0(s),
                self.a1(s),
                self.a0_deriv(s),
                self.a1_deriv(s)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CoefficientCurve;
    use crate::gmp::{brownian_motion, ornstein_uhlenbeck};
    use approx::assert_relative_eq;

    #[test]
    fn bm_unit_horizon_is_identity() {
        let tc = TimeChange::build(&brownian_motion(1.0, 0.0)).unwrap();
        assert_relative_eq!(tc.tbar(), 1.0, epsilon = 1e-12);
        let (s, y) = tc.to_bridge_coords(0.3, 0.7);
        assert_relative_eq!(s, 0.3, epsilon = 1e-12);
        assert_relative_eq!(y, 0.7, epsilon = 1e-12);
        assert_relative_eq!(tc.gain(0.4, -0.2), -0.2, epsilon = 1e-12);
        assert_relative_eq!(tc.a1(0.5), 1.0, epsilon = 1e-12);
        assert_relative_eq!(tc.a0(0.5), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bm_horizon_four_scales() {
        let tc = TimeChange::build(&brownian_motion(4.0, 0.0)).unwrap();
        assert_relative_eq!(tc.tbar(), 4.0, epsilon = 1e-11);
        assert_relative_eq!(tc.s_of_t(1.0), 0.25, epsilon = 1e-11);
        assert_relative_eq!(tc.a1(0.7), 2.0, epsilon = 1e-11);
        let b = tc.coefficient_bounds();
        assert_relative_eq!(b.a1_sup, 2.0, epsilon = 1e-10);
        assert!(b.a0_sup.abs() < 1e-12 && b.a0_deriv_sup.abs() < 1e-10);
        assert!(b.a1_deriv_sup.abs() < 1e-10);
    }

    #[test]
    fn bm_unit_horizon_bounds() {
        let tc = TimeChange::build(&brownian_motion(1.0, 0.0)).unwrap();
        let b = tc.coefficient_bounds();
        assert_relative_eq!(b.a0_sup, 0.0, epsilon = 1e-14);
        assert_relative_eq!(b.a0_deriv_sup, 0.0, epsilon = 1e-14);
        assert_relative_eq!(b.a1_sup, 1.0, epsilon = 1e-12);
        assert_relative_eq!(b.a1_deriv_sup, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ou_tbar_closed_form() {
        // h(t) = (e^{2t} - 1)/2, Tbar = (e^2 - 1)/2 ~ 3.194528
        let tc = TimeChange::build(&ornstein_uhlenbeck(1.0, 0.0)).unwrap();
        let exact = ((2.0f64).exp() - 1.0) / 2.0;
        assert_relative_eq!(tc.tbar(), exact, max_relative = 1e-10);
        assert_relative_eq!(tc.tbar(), 3.1945280494653251, max_relative = 1e-10);
        for t in [0.2f64, 0.5, 0.8] {
            let h = ((2.0 * t).exp() - 1.0) / 2.0;
            assert_relative_eq!(tc.s_of_t(t), h / exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn initial_point_maps_to_scaled_x0() {
        let model = ornstein_uhlenbeck(1.0, 0.8);
        let tc = TimeChange::build(&model).unwrap();
        let (s, y) = tc.to_bridge_coords(0.0, 0.8);
        assert_eq!(s, 0.0);
        assert_relative_eq!(y, 0.8 / tc.tbar().sqrt(), epsilon = 1e-12);
        assert_relative_eq!(tc.y0(), y, epsilon = 1e-12);
    }

    #[test]
    fn round_trip_and_gain_identity_ou() {
        let model = ornstein_uhlenbeck(1.0, 0.3);
        let tc = TimeChange::build(&model).unwrap();
        for i in 0..=40 {
            let t = i as f64 / 40.0;
            for x in [-2.0, -0.3, 0.0, 1.4] {
                let (s, y) = tc.to_bridge_coords(t, x);
                let (t2, x2) = tc.from_bridge_coords(s, y);
                assert_relative_eq!(t2, t, epsilon = 1e-10);
                assert_relative_eq!(x2, x, epsilon = 1e-10);
                assert_relative_eq!(tc.gain(s, y), x, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn gain_at_zero_is_a0() {
        let model = GmpModel::new(
            CoefficientCurve::Sine {
                amplitude: 2.0,
                frequency: 10.0,
            },
            CoefficientCurve::constant(-1.0),
            CoefficientCurve::constant(1.0),
            1.0,
            0.0,
        )
        .unwrap();
        let tc = TimeChange::build(&model).unwrap();
        for s in [0.1, 0.5, 0.9] {
            assert_relative_eq!(tc.gain(s, 0.0), tc.a0(s), epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_estimates_match_finite_differences() {
        let model = GmpModel::new(
            CoefficientCurve::Sine {
                amplitude: 2.0,
                frequency: 10.0,
            },
            CoefficientCurve::constant(-1.0),
            CoefficientCurve::constant(1.0),
            1.0,
            0.0,
        )
        .unwrap();
        let tc = TimeChange::build(&model).unwrap();
        // central differences converge (second order) to the analytic form
        for s in [0.2, 0.5, 0.8] {
            let exact0 = tc.a0_deriv(s);
            let exact1 = tc.a1_deriv(s);
            let mut errs0 = Vec::new();
            let mut errs1 = Vec::new();
            for &h in &[1e-3, 5e-4] {
                errs0.push(((tc.a0(s + h) - tc.a0(s - h)) / (2.0 * h) - exact0).abs());
                errs1.push(((tc.a1(s + h) - tc.a1(s - h)) / (2.0 * h) - exact1).abs());
            }
            // halving h shrinks the error ~4x (allow slack for round-off)
            assert!(errs0[1] <= errs0[0] / 2.5 + 1e-9, "{errs0:?}");
            assert!(errs1[1] <= errs1[0] / 2.5 + 1e-9, "{errs1:?}");
        }
    }

    #[test]
    fn ou_bounds_agree_with_finer_grid() {
        let tc = TimeChange::build(&ornstein_uhlenbeck(1.0, 0.0)).unwrap();
        let coarse = tc.coefficient_bounds_with(10_000);
        let fine = tc.coefficient_bounds_with(100_000);
        assert_relative_eq!(coarse.a1_sup, fine.a1_sup, epsilon = 1e-4);
        assert_relative_eq!(coarse.a1_deriv_sup, fine.a1_deriv_sup, epsilon = 1e-4);
        assert_relative_eq!(coarse.a0_sup, fine.a0_sup, epsilon = 1e-4);
    }

    #[test]
    fn steep_tanh_time_change_round_trip() {
        let model = GmpModel::new(
            CoefficientCurve::constant(0.0),
            CoefficientCurve::TanhStep {
                low: -10.0,
                high: -9.05,
                steepness: 100.0,
                center: 0.5,
            },
            CoefficientCurve::constant(1.0),
            1.0,
            0.0,
        )
        .unwrap();
        let tc = TimeChange::build(&model).unwrap();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert_relative_eq!(tc.t_of_s(tc.s_of_t(t)), t, epsilon = 1e-10);
        }
    }

    #[test]
    fn resolution_precondition() {
        let m = brownian_motion(1.0, 0.0);
        assert!(TimeChange::build_with_resolution(&m, 1).is_err());
    }
}
