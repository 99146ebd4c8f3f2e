//! Composite Simpson quadrature on uniform grids.

/// Integrates `f` over `[a, b]` with composite Simpson on `intervals` panels
/// (rounded up to the next even number).
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..n {
        let v = f(a + k as f64 * h);
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

/// Simpson rule over equally spaced samples. An even number of samples is
/// handled by closing the last interval with the trapezoid rule.
pub fn simpson_samples(ys: &[f64], h: f64) -> f64 {
    match ys.len() {
        0 | 1 => 0.0,
        2 => 0.5 * h * (ys[0] + ys[1]),
        len => {
            let m = if len % 2 == 1 { len } else { len - 1 };
            let mut acc = ys[0] + ys[m - 1];
            for (k, y) in ys[1..m - 1].iter().enumerate() {
                acc += if k % 2 == 0 { 4.0 * y } else { 2.0 * y };
            }
            let mut total = acc * h / 3.0;
            if m < len {
                total += 0.5 * h * (ys[len - 2] + ys[len - 1]);
            }
            total
        }
    }
}

/// Trapezoid rule on a possibly non-uniform grid.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// `count` evenly spaced points spanning `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (count - 1) as f64;
            (0..count).map(|k| lo + k as f64 * h).collect()
        }
    }
}
