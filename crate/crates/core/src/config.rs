//! Experiment configuration: a flat, sectioned key = value text format.
//!
//! Sections: [model], [prior], [grid], [solver], [output]. Unknown sections
//! or keys are rejected with the offending line number. Coefficient curves
//! are written as `kind param...`, e.g. `sine 2 10` for 2 sin(10 pi t);
//! tabulated curves and priors load from two-column CSV files resolved
//! relative to the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curves::{CoefficientCurve, TabulatedCurve};
use crate::error::{Error, Result};
use crate::gmp::GmpModel;
use crate::mc::SolverGrid;
use crate::priors::{Frame, Prior};
use crate::volterra;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Mc,
    Volterra,
    Both,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverSpec {
    pub method: SolverMethod,
    pub workers: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    pub nodes_per_decade: usize,
    pub grid_end: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            method: SolverMethod::Mc,
            workers: 0,
            tol: volterra::DEFAULT_PICARD_TOL,
            max_iter: volterra::DEFAULT_PICARD_MAX_ITER,
            damping: volterra::DEFAULT_PICARD_DAMPING,
            nodes_per_decade: volterra::DEFAULT_NODES_PER_DECADE,
            grid_end: volterra::DEFAULT_GRID_END,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        // the full-resolution reference values are n = m = 1000, k = 10^4
        GridSpec {
            n: 1000,
            m: 1000,
            k: 10_000,
            x_min: -3.0,
            x_max: 3.0,
            seed: 1729,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub prior: Prior,
    pub grid: GridSpec,
    pub solver: SolverSpec,
    pub output_dir: PathBuf,
    /// Free-form annotations recorded in meta.json (e.g. preset name and
    /// derived prior parameters).
    pub notes: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSpec {
    pub alpha: CoefficientCurve,
    pub beta: CoefficientCurve,
    pub zeta: CoefficientCurve,
    pub horizon: f64,
    pub x0: f64,
}

impl ModelSpec {
    pub fn build(&self) -> Result<GmpModel> {
        GmpModel::new(
            self.alpha.clone(),
            self.beta.clone(),
            self.zeta.clone(),
            self.horizon,
            self.x0,
        )
    }
}

impl ExperimentConfig {
    pub fn build_model(&self) -> Result<GmpModel> {
        self.model.build()
    }

    pub fn build_grid(&self) -> Result<SolverGrid> {
        SolverGrid::default_grid(
            self.model.horizon,
            self.grid.n,
            self.grid.m,
            self.grid.k,
            (self.grid.x_min, self.grid.x_max),
            self.grid.seed,
        )
    }

    pub fn parse_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses the sectioned key = value format; `base_dir` resolves relative
    /// CSV paths.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut sections: BTreeMap<String, Vec<(usize, String, String)>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim().to_lowercase();
                if !["model", "prior", "grid", "solver", "output"].contains(&name.as_str()) {
                    return Err(Error::Config(format!(
                        "line {}: unknown section [{name}]",
                        lineno + 1
                    )));
                }
                current = Some(name.clone());
                sections.entry(name).or_default();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got '{line}'",
                    lineno + 1
                )));
            };
            let Some(section) = current.clone() else {
                return Err(Error::Config(format!(
                    "line {}: key outside any [section]",
                    lineno + 1
                )));
            };
            sections.entry(section).or_default().push((
                lineno + 1,
                key.trim().to_lowercase(),
                value.trim().to_string(),
            ));
        }

        let model = parse_model(sections.get("model").map(Vec::as_slice).unwrap_or(&[]), base_dir)?;
        let prior = parse_prior(sections.get("prior").map(Vec::as_slice).unwrap_or(&[]), base_dir)?;
        let grid = parse_grid(sections.get("grid").map(Vec::as_slice).unwrap_or(&[]))?;
        let solver = parse_solver(sections.get("solver").map(Vec::as_slice).unwrap_or(&[]))?;
        let output_dir = sections
            .get("output")
            .and_then(|rows| {
                for (lineno, key, value) in rows {
                    if key == "dir" {
                        return Some(Ok(PathBuf::from(value)));
                    }
                    return Some(Err(Error::Config(format!(
                        "line {lineno}: unknown key '{key}' in [output]"
                    ))));
                }
                None
            })
            .transpose()?
            .unwrap_or_else(|| PathBuf::from("out"));

        Ok(ExperimentConfig {
            model,
            prior,
            grid,
            solver,
            output_dir,
            notes: BTreeMap::new(),
        })
    }
}

fn parse_f64(lineno: usize, key: &str, value: &str) -> Result<f64> {
    match value.to_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => return Ok(f64::INFINITY),
        "-inf" | "-infinity" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    value
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("line {lineno}: {key} = '{value}' is not a number")))
}

fn parse_usize(lineno: usize, key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("line {lineno}: {key} = '{value}' is not a count")))
}

fn parse_f64_list(lineno: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split_whitespace()
        .map(|v| parse_f64(lineno, key, v))
        .collect()
}

fn parse_curve(lineno: usize, value: &str, base_dir: &Path) -> Result<CoefficientCurve> {
    let mut parts = value.split_whitespace();
    let kind = parts.next().unwrap_or("").to_lowercase();
    let rest: Vec<&str> = parts.collect();
    let nums = |want: usize| -> Result<Vec<f64>> {
        if rest.len() != want {
            return Err(Error::Config(format!(
                "line {lineno}: curve '{kind}' needs {want} parameters, got {}",
                rest.len()
            )));
        }
        rest.iter().map(|v| parse_f64(lineno, &kind, v)).collect()
    };
    match kind.as_str() {
        "constant" => {
            let p = nums(1)?;
            Ok(CoefficientCurve::Constant { value: p[0] })
        }
        "sine" => {
            let p = nums(2)?;
            Ok(CoefficientCurve::Sine {
                amplitude: p[0],
                frequency: p[1],
            })
        }
        "tanh-step" => {
            let p = nums(4)?;
            Ok(CoefficientCurve::TanhStep {
                low: p[0],
                high: p[1],
                steepness: p[2],
                center: p[3],
            })
        }
        "polynomial-smile" => {
            let p = nums(4)?;
            if p[3] < 0.0 || p[3].fract() != 0.0 {
                return Err(Error::Config(format!(
                    "line {lineno}: polynomial-smile power must be a non-negative integer"
                )));
            }
            Ok(CoefficientCurve::PolynomialSmile {
                base: p[0],
                scale: p[1],
                center: p[2],
                power: p[3] as u32,
            })
        }
        "tabulated" => {
            if rest.len() != 1 {
                return Err(Error::Config(format!(
                    "line {lineno}: tabulated curve needs a CSV path"
                )));
            }
            let path = base_dir.join(rest[0]);
            Ok(CoefficientCurve::Tabulated(TabulatedCurve::from_csv(
                &path,
            )?))
        }
        other => Err(Error::Config(format!(
            "line {lineno}: unknown curve kind '{other}'"
        ))),
    }
}

fn parse_model(rows: &[(usize, String, String)], base_dir: &Path) -> Result<ModelSpec> {
    let mut alpha = None;
    let mut beta = None;
    let mut zeta = None;
    let mut horizon = None;
    let mut x0 = None;
    for (lineno, key, value) in rows {
        match key.as_str() {
            "alpha" => alpha = Some(parse_curve(*lineno, value, base_dir)?),
            "beta" => beta = Some(parse_curve(*lineno, value, base_dir)?),
            "zeta" => zeta = Some(parse_curve(*lineno, value, base_dir)?),
            "horizon" => horizon = Some(parse_f64(*lineno, key, value)?),
            "x0" => x0 = Some(parse_f64(*lineno, key, value)?),
            other => {
                return Err(Error::Config(format!(
                    "line {lineno}: unknown key '{other}' in [model]"
                )))
            }
        }
    }
    Ok(ModelSpec {
        alpha: alpha.ok_or_else(|| Error::Config("[model] alpha missing".into()))?,
        beta: beta.ok_or_else(|| Error::Config("[model] beta missing".into()))?,
        zeta: zeta.ok_or_else(|| Error::Config("[model] zeta missing".into()))?,
        horizon: horizon.ok_or_else(|| Error::Config("[model] horizon missing".into()))?,
        x0: x0.ok_or_else(|| Error::Config("[model] x0 missing".into()))?,
    })
}

fn parse_prior(rows: &[(usize, String, String)], base_dir: &Path) -> Result<Prior> {
    let mut kind = None;
    let mut frame = Frame::Original;
    let mut fields: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (lineno, key, value) in rows {
        match key.as_str() {
            "kind" => kind = Some((*lineno, value.to_lowercase())),
            "frame" => {
                frame = match value.to_lowercase().as_str() {
                    "original" => Frame::Original,
                    "bridge" => Frame::Bridge,
                    other => {
                        return Err(Error::Config(format!(
                            "line {lineno}: frame must be original or bridge, got '{other}'"
                        )))
                    }
                }
            }
            "point" | "points" | "weights" | "mean" | "variance" | "lower" | "upper"
            | "file" => {
                fields.insert(key.clone(), (*lineno, value.clone()));
            }
            other => {
                return Err(Error::Config(format!(
                    "line {lineno}: unknown key '{other}' in [prior]"
                )))
            }
        }
    }
    let (kind_line, kind) = kind.ok_or_else(|| Error::Config("[prior] kind missing".into()))?;
    let need = |name: &str| -> Result<(usize, String)> {
        fields
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Config(format!("[prior] {name} required for kind {kind}")))
    };
    let allowed: &[&str] = match kind.as_str() {
        "dirac" => &["point"],
        "discrete" => &["points", "weights"],
        "gaussian" => &["mean", "variance"],
        "truncated_gaussian" => &["mean", "variance", "lower", "upper"],
        "tabulated" => &["file"],
        other => {
            return Err(Error::Config(format!(
                "line {kind_line}: unknown prior kind '{other}'"
            )))
        }
    };
    for (key, (lineno, _)) in &fields {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "line {lineno}: key '{key}' does not apply to prior kind {kind}"
            )));
        }
    }
    match kind.as_str() {
        "dirac" => {
            let (l, v) = need("point")?;
            Ok(Prior::dirac(parse_f64(l, "point", &v)?, frame))
        }
        "discrete" => {
            let (lp, vp) = need("points")?;
            let (lw, vw) = need("weights")?;
            Prior::discrete(
                parse_f64_list(lp, "points", &vp)?,
                parse_f64_list(lw, "weights", &vw)?,
                frame,
            )
        }
        "gaussian" => {
            let (lm, vm) = need("mean")?;
            let (lv, vv) = need("variance")?;
            Prior::gaussian(
                parse_f64(lm, "mean", &vm)?,
                parse_f64(lv, "variance", &vv)?,
                frame,
            )
        }
        "truncated_gaussian" => {
            let (lm, vm) = need("mean")?;
            let (lv, vv) = need("variance")?;
            let (ll, vl) = need("lower")?;
            let (lu, vu) = need("upper")?;
            Prior::truncated_gaussian(
                parse_f64(lm, "mean", &vm)?,
                parse_f64(lv, "variance", &vv)?,
                parse_f64(ll, "lower", &vl)?,
                parse_f64(lu, "upper", &vu)?,
                frame,
            )
        }
        "tabulated" => {
            let (_, file) = need("file")?;
            let (zs, ds) = crate::curves::read_two_column_csv(&base_dir.join(&file))?;
            Prior::tabulated(zs, ds, frame)
        }
        _ => unreachable!(),
    }
}

fn parse_grid(rows: &[(usize, String, String)]) -> Result<GridSpec> {
    let mut grid = GridSpec::default();
    for (lineno, key, value) in rows {
        match key.as_str() {
            "n" => grid.n = parse_usize(*lineno, key, value)?,
            "m" => grid.m = parse_usize(*lineno, key, value)?,
            "k" => grid.k = parse_usize(*lineno, key, value)?,
            "x_min" => grid.x_min = parse_f64(*lineno, key, value)?,
            "x_max" => grid.x_max = parse_f64(*lineno, key, value)?,
            "seed" => {
                grid.seed = value.parse::<u64>().map_err(|_| {
                    Error::Config(format!("line {lineno}: seed = '{value}' is not an integer"))
                })?
            }
            other => {
                return Err(Error::Config(format!(
                    "line {lineno}: unknown key '{other}' in [grid]"
                )))
            }
        }
    }
    Ok(grid)
}

fn parse_solver(rows: &[(usize, String, String)]) -> Result<SolverSpec> {
    let mut solver = SolverSpec::default();
    for (lineno, key, value) in rows {
        match key.as_str() {
            "method" => {
                solver.method = match value.to_lowercase().as_str() {
                    "mc" => SolverMethod::Mc,
                    "volterra" => SolverMethod::Volterra,
                    "both" => SolverMethod::Both,
                    other => {
                        return Err(Error::Config(format!(
                            "line {lineno}: method must be mc, volterra or both, got '{other}'"
                        )))
                    }
                }
            }
            "workers" => solver.workers = parse_usize(*lineno, key, value)?,
            "tol" => solver.tol = parse_f64(*lineno, key, value)?,
            "max_iter" => solver.max_iter = parse_usize(*lineno, key, value)?,
            "damping" => solver.damping = parse_f64(*lineno, key, value)?,
            "nodes_per_decade" => solver.nodes_per_decade = parse_usize(*lineno, key, value)?,
            "grid_end" => solver.grid_end = parse_f64(*lineno, key, value)?,
            other => {
                return Err(Error::Config(format!(
                    "line {lineno}: unknown key '{other}' in [solver]"
                )))
            }
        }
    }
    Ok(solver)
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

pub const PRESET_NAMES: [&str; 6] = [
    "figure1_xm1",
    "figure1_x0",
    "figure1_xp1",
    "figure2a",
    "figure2b",
    "figure2c",
];

/// Reference experiment presets at desk scale (n = m = 200, k = 2000).
///
/// figure1_*: Brownian motion forced to hit (1, 1) or (1, -1) with equal
/// probability, for three initial conditions. figure2a/b/c: one
/// time-dependent coefficient each, with a positively-truncated normal
/// terminal density of variance v0(T)/2 in original coordinates.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let desk_grid = GridSpec {
        n: 200,
        m: 200,
        k: 2000,
        x_min: -3.0,
        x_max: 3.0,
        seed: 1729,
    };
    let constant = CoefficientCurve::constant;
    let mut notes = BTreeMap::new();
    notes.insert("preset".to_string(), name.to_string());

    let (model, prior) = match name {
        "figure1_xm1" | "figure1_x0" | "figure1_xp1" => {
            let x0 = match name {
                "figure1_xm1" => -1.0,
                "figure1_x0" => 0.0,
                _ => 1.0,
            };
            let model = ModelSpec {
                alpha: constant(0.0),
                beta: constant(0.0),
                zeta: constant(1.0),
                horizon: 1.0,
                x0,
            };
            let prior =
                Prior::discrete(vec![-1.0, 1.0], vec![0.5, 0.5], Frame::Original)?;
            (model, prior)
        }
        "figure2a" | "figure2b" | "figure2c" => {
            let model = match name {
                "figure2a" => ModelSpec {
                    alpha: CoefficientCurve::Sine {
                        amplitude: 2.0,
                        frequency: 10.0,
                    },
                    beta: constant(-1.0),
                    zeta: constant(1.0),
                    horizon: 1.0,
                    x0: 0.0,
                },
                "figure2b" => ModelSpec {
                    alpha: constant(0.0),
                    beta: CoefficientCurve::TanhStep {
                        low: -10.0,
                        high: -9.05,
                        steepness: 100.0,
                        center: 0.5,
                    },
                    zeta: constant(1.0),
                    horizon: 1.0,
                    x0: 0.0,
                },
                _ => ModelSpec {
                    alpha: constant(0.0),
                    beta: constant(-1.0),
                    zeta: CoefficientCurve::PolynomialSmile {
                        base: 0.25,
                        scale: 256.0,
                        center: 0.5,
                        power: 4,
                    },
                    horizon: 1.0,
                    x0: 0.0,
                },
            };
            // prior variance v0(T)/2 from the panel's own model
            let built = model.build()?;
            let v0t = built.variance(0.0, built.horizon())?;
            notes.insert("prior_variance_v0T_half".to_string(), format!("{}", v0t / 2.0));
            let prior = Prior::truncated_gaussian(
                0.0,
                v0t / 2.0,
                0.0,
                f64::INFINITY,
                Frame::Original,
            )?;
            (model, prior)
        }
        other => {
            return Err(Error::Config(format!(
                "unknown preset '{other}'; available: {PRESET_NAMES:?}"
            )))
        }
    };
    Ok(ExperimentConfig {
        model,
        prior,
        grid: desk_grid,
        solver: SolverSpec::default(),
        output_dir: PathBuf::from(format!("out/{name}")),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::priors::PriorKind;
    use approx::assert_relative_eq;

    const SAMPLE: &str = "
# two-point bridge experiment
[model]
alpha = constant 0
beta = constant 0
zeta = constant 1
horizon = 1.0
x0 = 0.0

[prior]
kind = discrete
points = -1 1
weights = 0.5 0.5
frame = original

[grid]
n = 64
m = 64
k = 500
seed = 42

[solver]
method = both

[output]
dir = out/test
";

    #[test]
    fn parses_complete_config() {
        let cfg = ExperimentConfig::parse(SAMPLE, Path::new(".")).unwrap();
        assert_eq!(cfg.grid.n, 64);
        assert_eq!(cfg.grid.seed, 42);
        assert_eq!(cfg.solver.method, SolverMethod::Both);
        assert_eq!(cfg.output_dir, PathBuf::from("out/test"));
        assert!(matches!(cfg.prior.kind, PriorKind::Discrete { .. }));
        let model = cfg.build_model().unwrap();
        assert_eq!(model.horizon(), 1.0);
        let grid = cfg.build_grid().unwrap();
        assert_eq!(grid.t.len(), 65);
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        let bad_key = SAMPLE.replace("x0 = 0.0", "x00 = 0.0");
        let err = ExperimentConfig::parse(&bad_key, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("unknown key"));

        let bad_section = format!("{SAMPLE}\n[extras]\nfoo = 1\n");
        let err = ExperimentConfig::parse(&bad_section, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("unknown section"));

        let stray = "x = 1\n[model]\n";
        let err = ExperimentConfig::parse(stray, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("outside any"));
    }

    #[test]
    fn rejects_prior_field_mismatch() {
        let bad = SAMPLE.replace("points = -1 1", "point = 0.5\npoints = -1 1");
        let err = ExperimentConfig::parse(&bad, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("does not apply"));
    }

    #[test]
    fn parses_infinite_truncation_bounds() {
        let cfg_text = SAMPLE
            .replace(
                "kind = discrete\npoints = -1 1\nweights = 0.5 0.5",
                "kind = truncated_gaussian\nmean = 0\nvariance = 0.5\nlower = 0\nupper = inf",
            );
        let cfg = ExperimentConfig::parse(&cfg_text, Path::new(".")).unwrap();
        if let PriorKind::TruncatedGaussian { upper, .. } = cfg.prior.kind {
            assert!(upper.is_infinite());
        } else {
            panic!("expected truncated gaussian");
        }
    }

    #[test]
    fn figure_presets_carry_caption_parameters() {
        // figure1: BM, two-point original prior, x0 per panel
        for (name, x0) in [
            ("figure1_xm1", -1.0),
            ("figure1_x0", 0.0),
            ("figure1_xp1", 1.0),
        ] {
            let cfg = preset(name).unwrap();
            assert_eq!(cfg.model.x0, x0);
            assert!(matches!(
                cfg.model.beta,
                CoefficientCurve::Constant { value } if value == 0.0
            ));
            if let PriorKind::Discrete { points, weights } = &cfg.prior.kind {
                assert_eq!(points, &vec![-1.0, 1.0]);
                assert_eq!(weights, &vec![0.5, 0.5]);
            } else {
                panic!("figure1 prior must be two-point");
            }
        }

        // figure2a: alpha = 2 sin(10 pi t), beta = -1
        let a = preset("figure2a").unwrap();
        assert!(matches!(
            a.model.alpha,
            CoefficientCurve::Sine { amplitude, frequency } if amplitude == 2.0 && frequency == 10.0
        ));
        // figure2b: tanh step from -10 rising by 0.95
        let b = preset("figure2b").unwrap();
        if let CoefficientCurve::TanhStep {
            low,
            high,
            steepness,
            center,
        } = b.model.beta
        {
            assert_eq!(low, -10.0);
            assert_relative_eq!(high, -9.05);
            assert_eq!(steepness, 100.0);
            assert_eq!(center, 0.5);
            // low + (high-low)/2 (1 + tanh) == -10 + 0.475 (1 + tanh)
            assert_relative_eq!((high - low) / 2.0, 0.475, epsilon = 1e-12);
        } else {
            panic!("figure2b beta must be a tanh step");
        }
        // figure2c: zeta = 0.25 + (4(t-1/2))^4 = 0.25 + 256 (t-1/2)^4
        let c = preset("figure2c").unwrap();
        assert!(matches!(
            c.model.zeta,
            CoefficientCurve::PolynomialSmile { base, scale, center, power }
                if base == 0.25 && scale == 256.0 && center == 0.5 && power == 4
        ));

        // figure2 priors: positively truncated normal, variance v0(T)/2
        for name in ["figure2a", "figure2b", "figure2c"] {
            let cfg = preset(name).unwrap();
            let model = cfg.build_model().unwrap();
            let v0t = model.variance(0.0, 1.0).unwrap();
            if let PriorKind::TruncatedGaussian {
                mean,
                variance,
                lower,
                upper,
            } = cfg.prior.kind
            {
                assert_eq!(mean, 0.0);
                assert_eq!(lower, 0.0);
                assert!(upper.is_infinite());
                assert_relative_eq!(variance, v0t / 2.0, epsilon = 1e-12);
            } else {
                panic!("figure2 prior must be truncated gaussian");
            }
            assert!(cfg.notes.contains_key("prior_variance_v0T_half"));
        }
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(preset("figure9").is_err());
    }
}
