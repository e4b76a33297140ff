//! Adaptive Gauss–Kronrod (7, 15) quadrature, nested for 2-D integrals.
//!
//! Used as an oracle for closed-form results, so it depends on nothing in
//! the library under test.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Rule {
    value: f64,
    error: f64,
    l1: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Rule {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut l1 = fc.abs() * WGK[7];
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        kronrod += WGK[j] * (f1 + f2);
        l1 += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Rule {
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
        l1: l1 * h.abs(),
    }
}

fn refine<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, rule: Rule, tol: f64, depth: u32) -> f64 {
    // Below this the error estimate is dominated by rounding.
    let noise = 1e-13 * rule.l1;
    if rule.error <= tol.max(noise) || depth == 0 {
        return rule.value;
    }
    let m = 0.5 * (a + b);
    let left = gk15(f, a, m);
    let right = gk15(f, m, b);
    refine(f, a, m, left, 0.5 * tol, depth - 1) + refine(f, m, b, right, 0.5 * tol, depth - 1)
}

/// `∫ₐᵇ f` to a requested relative tolerance.
///
/// The interval is first cut into `pieces` equal parts so that oscillatory
/// integrands are resolved before the error estimate is trusted. The error
/// budget is `rel_tol·max(|∫f|, floor·∫|f|)`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, pieces: usize, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let pieces = pieces.max(1);
    let h = (b - a) / pieces as f64;
    let rules: Vec<(f64, f64, Rule)> = (0..pieces)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + h };
            (lo, hi, gk15(&mut f, lo, hi))
        })
        .collect();
    let value: f64 = rules.iter().map(|r| r.2.value).sum();
    let l1: f64 = rules.iter().map(|r| r.2.l1).sum();
    let budget = rel_tol * value.abs().max(1e-4 * l1).max(f64::MIN_POSITIVE);
    let per_piece = budget / pieces as f64;
    rules
        .into_iter()
        .map(|(lo, hi, rule)| refine(&mut f, lo, hi, rule, per_piece, 12))
        .sum()
}

/// Pieces needed so that each covers at most half a period of `cos(ωx)`.
pub fn pieces_for(omega: f64, length: f64) -> usize {
    (omega.abs() * length / std::f64::consts::PI).ceil() as usize + 1
}

/// `∫₀ᵀ ∫ g(t, s) ds dt` with the inner integral over `[0, t]` when
/// `lower_triangle`, else over `[0, T]`. The inner range is always split at
/// `s = t` where the integrands of interest have a kink.
pub fn integrate_2d<G: Fn(f64, f64) -> f64>(
    g: G,
    t_max: f64,
    omega: f64,
    lower_triangle: bool,
    rel_tol: f64,
) -> f64 {
    let inner_tol = 1e-2 * rel_tol;
    let outer = |t: f64| {
        let below = integrate(|s| g(t, s), 0.0, t, pieces_for(omega, t), inner_tol);
        if lower_triangle {
            below
        } else {
            below + integrate(|s| g(t, s), t, t_max, pieces_for(omega, t_max - t), inner_tol)
        }
    };
    integrate(outer, 0.0, t_max, pieces_for(omega, t_max), rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_oscillatory_1d() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1, 1e-12);
        assert!((v - 4.0).abs() < 1e-13);
        let v = integrate(|x| (50.0 * x).cos(), 0.0, 3.0, pieces_for(50.0, 3.0), 1e-10);
        assert!((v - (150.0f64).sin() / 50.0).abs() < 1e-12);
    }

    #[test]
    fn kink_in_2d() {
        // ∬_{[0,1]²} |t − s| = 1/3
        let v = integrate_2d(|t, s| (t - s).abs(), 1.0, 0.0, false, 1e-10);
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        // ∫₀¹∫₀ᵗ s ds dt = 1/6
        let v = integrate_2d(|_, s| s, 1.0, 0.0, true, 1e-10);
        assert!((v - 1.0 / 6.0).abs() < 1e-12);
    }
}
