//! Coefficient curves for the linear SDE: drift level alpha, drift slope
//! beta and volatility zeta as functions of time.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A time-dependent model coefficient.
///
/// Analytic kinds are defined on all of R; tabulated curves only on the range
/// of their table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoefficientCurve {
    Constant { value: f64 },
    /// amplitude * sin(frequency * pi * t)
    Sine { amplitude: f64, frequency: f64 },
    /// low + (high - low)/2 * (1 + tanh(steepness * (t - center)))
    TanhStep {
        low: f64,
        high: f64,
        steepness: f64,
        center: f64,
    },
    /// base + scale * (t - center)^power
    PolynomialSmile {
        base: f64,
        scale: f64,
        center: f64,
        power: u32,
    },
    Tabulated(TabulatedCurve),
}

impl CoefficientCurve {
    pub fn constant(value: f64) -> Self {
        CoefficientCurve::Constant { value }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            CoefficientCurve::Constant { value } => *value,
            CoefficientCurve::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * std::f64::consts::PI * t).sin(),
            CoefficientCurve::TanhStep {
                low,
                high,
                steepness,
                center,
            } => low + 0.5 * (high - low) * (1.0 + (steepness * (t - center)).tanh()),
            CoefficientCurve::PolynomialSmile {
                base,
                scale,
                center,
                power,
            } => base + scale * (t - center).powi(*power as i32),
            CoefficientCurve::Tabulated(tab) => tab.eval(t),
        }
    }

    /// Checks the curve is finite on [0, horizon] and, if `positive`, strictly
    /// positive there (the zeta requirement).
    pub fn validate(&self, horizon: f64, positive: bool, name: &'static str) -> Result<()> {
        if let CoefficientCurve::Tabulated(tab) = self {
            if tab.ts[0] > 0.0 || *tab.ts.last().unwrap() < horizon {
                return Err(Error::InvalidCurve(format!(
                    "{name}: table covers [{}, {}], model needs [0, {horizon}]",
                    tab.ts[0],
                    tab.ts.last().unwrap()
                )));
            }
        }
        let checks = 2048;
        for i in 0..=checks {
            let t = horizon * i as f64 / checks as f64;
            let v = self.eval(t);
            if !v.is_finite() {
                return Err(Error::InvalidCurve(format!("{name} not finite at t = {t}")));
            }
            if positive && v <= 0.0 {
                return Err(Error::InvalidCurve(format!(
                    "{name} must be strictly positive; {name}({t}) = {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Tabulated curve with monotone cubic (Fritsch-Carlson) interpolation, which
/// cannot overshoot the data and so preserves sign constraints.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TabulatedCurve {
    ts: Vec<f64>,
    vs: Vec<f64>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl TabulatedCurve {
    pub fn new(ts: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        if ts.len() < 2 || ts.len() != vs.len() {
            return Err(Error::InvalidCurve(
                "tabulated curve needs at least two (time, value) rows".into(),
            ));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotone("tabulated curve times".into()));
        }
        if ts.iter().chain(vs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite table entry".into()));
        }
        let slopes = fritsch_carlson_slopes(&ts, &vs);
        Ok(TabulatedCurve { ts, vs, slopes })
    }

    /// Two-column CSV (time, value), strictly increasing times. A header row
    /// is tolerated if its first field does not parse as a number.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let (ts, vs) = read_two_column_csv(path)?;
        TabulatedCurve::new(ts, vs)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.ts.len();
        let slopes = if self.slopes.len() == n {
            &self.slopes
        } else {
            // slopes are skipped by serde; rebuild lazily is not possible on
            // &self, so recompute here (cold path after deserialization)
            return hermite_eval(&self.ts, &self.vs, &fritsch_carlson_slopes(&self.ts, &self.vs), t);
        };
        hermite_eval(&self.ts, &self.vs, slopes, t)
    }
}

/// Reads a two-column numeric CSV; a non-numeric first row is treated as a
/// header.
pub fn read_two_column_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let (mut first, mut second) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let (a, b) = (fields.next().unwrap_or(""), fields.next().unwrap_or(""));
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(y)) => {
                first.push(x);
                second.push(y);
            }
            _ if i == 0 => continue, // header
            _ => {
                return Err(Error::InvalidCurve(format!(
                    "{}:{}: cannot parse '{line}'",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok((first, second))
}

fn hermite_eval(ts: &[f64], vs: &[f64], slopes: &[f64], t: f64) -> f64 {
    let n = ts.len();
    let t = t.clamp(ts[0], ts[n - 1]);
    let i = match ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
        Ok(i) => return vs[i.min(n - 1)],
        Err(i) => i.saturating_sub(1).min(n - 2),
    };
    let h = ts[i + 1] - ts[i];
    let u = (t - ts[i]) / h;
    let (u2, u3) = (u * u, u * u * u);
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    h00 * vs[i] + h10 * h * slopes[i] + h01 * vs[i + 1] + h11 * h * slopes[i + 1]
}

fn fritsch_carlson_slopes(ts: &[f64], vs: &[f64]) -> Vec<f64> {
    let n = ts.len();
    let mut delta = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        delta.push((vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]));
    }
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        m[i] = if delta[i - 1] * delta[i] <= 0.0 {
            0.0
        } else {
            0.5 * (delta[i - 1] + delta[i])
        };
    }
    for i in 0..n - 1 {
        if delta[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let a = m[i] / delta[i];
        let b = m[i + 1] / delta[i];
        let s = a * a + b * b;
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            m[i] = tau * a * delta[i];
            m[i + 1] = tau * b * delta[i];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn analytic_kinds_evaluate() {
        let sine = CoefficientCurve::Sine {
            amplitude: 2.0,
            frequency: 10.0,
        };
        assert_relative_eq!(sine.eval(0.05), 2.0, epsilon = 1e-12); // sin(pi/2)
        let step = CoefficientCurve::TanhStep {
            low: -10.0,
            high: -9.05,
            steepness: 100.0,
            center: 0.5,
        };
        assert_relative_eq!(step.eval(0.5), -9.525, epsilon = 1e-12);
        assert!(step.eval(0.0) < -9.99);
        assert!(step.eval(1.0) > -9.06);
        let smile = CoefficientCurve::PolynomialSmile {
            base: 0.25,
            scale: 256.0,
            center: 0.5,
            power: 4,
        };
        assert_relative_eq!(smile.eval(0.0), 16.25, epsilon = 1e-12);
        assert_relative_eq!(smile.eval(0.5), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn tabulated_interpolates_nodes_exactly_and_monotone() {
        let tab =
            TabulatedCurve::new(vec![0.0, 0.5, 1.0, 2.0], vec![1.0, 2.0, 4.0, 4.5]).unwrap();
        assert_relative_eq!(tab.eval(0.5), 2.0);
        assert_relative_eq!(tab.eval(2.0), 4.5);
        // monotone data stays monotone between nodes
        let mut prev = tab.eval(0.0);
        for i in 1..=400 {
            let v = tab.eval(2.0 * i as f64 / 400.0);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn tabulated_positive_data_stays_positive() {
        // spiky positive data; monotone cubic must not overshoot below zero
        let tab = TabulatedCurve::new(
            vec![0.0, 0.1, 0.2, 0.3, 1.0],
            vec![0.01, 5.0, 0.01, 3.0, 0.01],
        )
        .unwrap();
        for i in 0..=1000 {
            assert!(tab.eval(i as f64 / 1000.0) > 0.0);
        }
    }

    #[test]
    fn tabulated_rejects_non_monotone_times() {
        assert!(TabulatedCurve::new(vec![0.0, 0.5, 0.5], vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn zeta_positivity_check() {
        let zeta = CoefficientCurve::constant(0.0);
        assert!(zeta.validate(1.0, true, "zeta").is_err());
        let ok = CoefficientCurve::constant(1.0);
        assert!(ok.validate(1.0, true, "zeta").is_ok());
    }
}
