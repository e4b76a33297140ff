//! Small deterministic reductions shared by the estimators.

/// Sum whose value is invariant under reversal of `values`, bit for bit.
///
/// Elements are paired from both ends inwards and the pair sums are
/// accumulated with Neumaier compensation in a fixed order. IEEE addition is
/// commutative, so reversing the input produces identical pair sums.
pub fn symmetric_sum(values: &[f64]) -> f64 {
    let n = values.len();
    let half = n / 2;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut add = |x: f64| {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    };
    for i in 0..half {
        let (a, b) = (values[i], values[n - 1 - i]);
        let s = a + b;
        // Exact rounding error of the pair sum, symmetric in (a, b).
        let bb = s - a;
        add((a - (s - bb)) + (b - bb));
        add(s);
    }
    if n % 2 == 1 {
        add(values[half]);
    }
    sum + comp
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    symmetric_sum(values) / values.len() as f64
}

/// Population (divide-by-n) variance.
pub fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    symmetric_sum(&sq) / values.len() as f64
}

/// Ordinary least squares fit `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
