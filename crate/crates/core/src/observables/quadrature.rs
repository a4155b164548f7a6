//! Globally adaptive Gauss–Kronrod (7, 15) quadrature and an improper-integral
//! driver for integrands with algebraic tails.

// Node and weight tables keep every published digit.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

/// Kronrod estimate and `|K − G|` on `[a, b]`.
pub fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        k += WGK[j] * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    (k * half, ((k - g) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Bisects the interval with the largest error until the summed error is
/// below `tol` or `max_pieces` is reached. Non-finite samples stop the
/// refinement and report non-convergence.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, max_pieces: usize) -> QuadResult {
    let mut evals = 0usize;
    let mut bad = false;
    let mut g = |x: f64| {
        evals += 1;
        let y = f(x);
        if !y.is_finite() {
            bad = true;
            0.0
        } else {
            y
        }
    };
    let (value, error) = gk15(&mut g, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let mut err = error;
    while err > tol && heap.len() < max_pieces {
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&mut g, worst.a, mid);
        let (v2, e2) = gk15(&mut g, mid, worst.b);
        err += e1 + e2 - worst.error;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // resum to shed the drift of the running error
    let total_exact: f64 = heap.iter().map(|p| p.value).sum();
    let err_exact: f64 = heap.iter().map(|p| p.error).sum();
    QuadResult {
        value: total_exact,
        abs_error: err_exact,
        converged: !bad && err_exact <= tol,
        evaluations: evals,
    }
}

/// Description of an integrand on the whole real line whose magnitude decays
/// like `|x|^{-p}` beyond `±core`.
pub struct LineIntegrand<F: FnMut(f64) -> f64> {
    pub f: F,
    pub center: f64,
    pub core: f64,
}

/// Ratio between the far cutoff and the core half-width.
pub const FAR_RATIO: f64 = 1e30;

/// `∫_{−∞}^{∞} f`: adaptive core on `[center − core, center + core]`, each
/// tail on `[core, core·FAR_RATIO]` after `x = core·e^v`, and the remainder
/// beyond from the local power law at the far cutoff.
pub fn integrate_line<F: FnMut(f64) -> f64>(mut line: LineIntegrand<F>, tol: f64) -> QuadResult {
    let (c, x) = (line.center, line.core);
    let part_tol = tol / 3.0;
    let f = &mut line.f;
    let core = integrate(&mut *f, c - x, c + x, part_tol, 4000);
    let mut result = core;
    for side in [1.0f64, -1.0] {
        let span = FAR_RATIO.ln();
        let tail = integrate(
            |v| {
                let r = x * v.exp();
                r * f(c + side * r)
            },
            0.0,
            span,
            part_tol / 2.0,
            4000,
        );
        let far = x * FAR_RATIO;
        let (f1, f2) = (f(c + side * far), f(c + side * 2.0 * far));
        let (rest, rest_ok) = if f1 == 0.0 {
            (0.0, f2 == 0.0)
        } else {
            let p = -(f2 / f1).ln() / 2f64.ln();
            if p > 1.0 + 1e-9 && f1.is_finite() && f2.is_finite() {
                (f1 * far / (p - 1.0), true)
            } else {
                (f64::INFINITY, false)
            }
        };
        result.value += tail.value + if rest.is_finite() { rest } else { 0.0 };
        result.abs_error += tail.abs_error + if rest_ok { 0.0 } else { f64::INFINITY };
        result.converged &= tail.converged && rest_ok;
        result.evaluations += tail.evaluations + 2;
    }
    result.converged &= result.abs_error <= tol;
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_exact_on_degree_22() {
        let (v, _) = gk15(&mut |x: f64| x.powi(22) + 3.0 * x.powi(5), -1.0, 1.0);
        assert!((v - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_exact_on_degree_13() {
        let (_, e) = gk15(&mut |x: f64| x.powi(12), -1.0, 1.0);
        assert!(e < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 2000);
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!(r.converged);
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn line_integral_of_lorentzian_power() {
        // ∫ (1+x²)^{-2} = π/2
        let r = integrate_line(
            LineIntegrand { f: |x: f64| (1.0 + x * x).powi(-2), center: 0.0, core: 10.0 },
            1e-11,
        );
        assert!(r.converged);
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn slow_tail_uses_remainder() {
        // ∫ (1+x²)^{-0.55}: tail exponent 1.1, the remainder past the far cutoff matters
        let r = integrate_line(
            LineIntegrand { f: |x: f64| (1.0 + x * x).powf(-0.55), center: 0.0, core: 100.0 },
            1e-8,
        );
        let exact = std::f64::consts::PI.sqrt() * statrs::function::gamma::gamma(0.05)
            / statrs::function::gamma::gamma(0.55);
        assert!(r.converged, "{r:?}");
        assert!((r.value - exact).abs() / exact < 1e-6, "{} vs {exact}", r.value);
    }

    #[test]
    fn divergent_tail_is_flagged() {
        let r = integrate_line(
            LineIntegrand { f: |x: f64| (1.0 + x * x).powf(-0.4), center: 0.0, core: 10.0 },
            1e-8,
        );
        assert!(!r.converged);
    }

    #[test]
    fn non_integrable_singularity_is_flagged() {
        let r = integrate(|x: f64| 1.0 / (x - 0.3).abs(), -1.0, 1.0, 1e-8, 2000);
        assert!(!r.converged);
    }
}
