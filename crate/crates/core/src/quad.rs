//! Adaptive Gauss-Kronrod quadrature (7-15 pair).
//!
//! Coefficient curves include steep tanh steps, so every time integral in the
//! library goes through this adaptive driver rather than a fixed rule.

/// Abscissae of the 15-point Kronrod rule (positive half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Weights of the embedded 7-point Gauss rule.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// Weights of the 15-point Kronrod rule.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// One 15-point Kronrod panel: returns (integral, error estimate, abs integral).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    let mut res_abs = res_kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            // odd Kronrod indices carry the Gauss nodes
            res_gauss += WG[j / 2] * sum;
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let mut err = ((res_kronrod - res_gauss) * half).abs();
    res_asc *= half.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }

    (res_kronrod * half, err, res_abs * half.abs())
}

/// Default relative tolerance used by the model kernels.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Hard cap on the number of panels per integral.
const MAX_PANELS: usize = 4096;

/// Adaptive integral of `f` over [a, b] with relative tolerance `rel_tol`.
///
/// Bisects the worst panel until the summed error estimate drops below the
/// tolerance or the panel limit is hit (logged, best value returned).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (v0, e0, abs0) = qk15(&f, a, b);
    let tol = |value: f64| -> f64 { (rel_tol * value.abs()).max(1e-15 * abs0).max(1e-300) };
    if e0 <= tol(v0) {
        return v0;
    }

    // worklist of (error, a, b, value); split the largest-error panel
    let mut panels: Vec<(f64, f64, f64, f64)> = vec![(e0, a, b, v0)];
    let mut total_err = e0;
    let mut total_val = v0;
    while total_err > tol(total_val) && panels.len() < MAX_PANELS {
        // find worst panel
        let (mut worst, mut idx) = (0.0, 0);
        for (i, p) in panels.iter().enumerate() {
            if p.0 > worst {
                worst = p.0;
                idx = i;
            }
        }
        let (err, pa, pb, val) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // panel shrunk to machine width; give up on it
            panels.push((0.0, pa, pb, val));
            total_err -= err;
            continue;
        }
        let (v1, e1, _) = qk15(&f, pa, mid);
        let (v2, e2, _) = qk15(&f, mid, pb);
        total_val += v1 + v2 - val;
        total_err += e1 + e2 - err;
        panels.push((e1, pa, mid, v1));
        panels.push((e2, mid, pb, v2));
    }
    if panels.len() >= MAX_PANELS {
        log::warn!(
            "quadrature panel limit reached on [{a}, {b}] (err estimate {total_err:.3e})"
        );
    }
    total_val
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12);
        assert_relative_eq!(v, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory_sine() {
        // integral of sin(10 pi t) over [0, 1] is 0; over [0, 0.35] closed form
        let v = integrate(|t| (10.0 * std::f64::consts::PI * t).sin(), 0.0, 0.35, 1e-12);
        let exact = (1.0 - (3.5 * std::f64::consts::PI).cos()) / (10.0 * std::f64::consts::PI);
        assert_relative_eq!(v, exact, epsilon = 1e-12);
        let zero = integrate(|t| (10.0 * std::f64::consts::PI * t).sin(), 0.0, 1.0, 1e-12);
        assert!(zero.abs() < 1e-12);
    }

    #[test]
    fn steep_tanh_step() {
        // d/dt [ln cosh(100(t-1/2))/100] = tanh(100(t-1/2))
        let f = |t: f64| (100.0 * (t - 0.5)).tanh();
        let v = integrate(f, 0.0, 1.0, 1e-12);
        assert!(v.abs() < 1e-11);
        let v2 = integrate(f, 0.0, 0.75, 1e-12);
        let exact = ((100.0f64 * 0.25).cosh().ln() - (100.0f64 * 0.5).cosh().ln()) / 100.0;
        assert_relative_eq!(v2, exact, epsilon = 1e-10);
    }

    #[test]
    fn near_singular_reciprocal() {
        let v = integrate(|u| 1.0 / (1.0 - u), 0.0, 1.0 - 1e-6, 1e-12);
        assert_relative_eq!(v, (1e6f64).ln(), max_relative = 1e-10);
    }
}
