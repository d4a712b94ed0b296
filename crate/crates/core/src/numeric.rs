//! Shared numeric helpers: log-space combinatorics, scalar optimization,
//! root bracketing, and running statistics.

use std::sync::OnceLock;

const TABLE_SIZE: usize = 8192;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_SIZE);
        t.push(0.0);
        // compensated summation keeps the table accurate to ~1 ulp
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for k in 1..TABLE_SIZE {
            let term = (k as f64).ln();
            let y = term - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            t.push(sum);
        }
        t
    })
}

/// log(n!) — table lookup for small n, Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    let table = ln_factorial_table();
    if n < table.len() {
        return table[n];
    }
    let x = n as f64 + 1.0;
    // ln Gamma(x) for large x; truncation error < 1/(1260 x^5)
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

/// log C(n, k)
pub fn ln_choose(n: usize, k: usize) -> f64 {
    assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// log((2m-1)!!), the number of perfect matchings of 2m points; (−1)!! = 1.
pub fn ln_double_factorial_odd(m: usize) -> f64 {
    // (2m-1)!! = (2m)! / (2^m m!)
    ln_factorial(2 * m) - m as f64 * std::f64::consts::LN_2 - ln_factorial(m)
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Golden-section maximization of a unimodal function on [a, b].
/// Returns the abscissa of the maximum to within `tol`.
pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// Bisection for a root of f on [a, b]; requires a sign change.
/// Stops when the bracket is below `xtol`.
pub fn bisect(f: impl Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let fb = f(b);
    assert!(
        fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0),
        "bisect requires a bracketing sign change"
    );
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    while b - a > xtol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break; // bracket at floating-point resolution
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Symmetric-difference derivative.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Second derivative by central differences.
pub fn central_diff2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Running mean/variance (Welford).
#[derive(Clone, Debug, Default)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance (n−1 denominator); None below two observations.
    pub fn variance(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.m2 / (self.n - 1) as f64)
    }

    pub fn std_dev(&self) -> Option<f64> {
        self.variance().map(f64::sqrt)
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> Option<f64> {
        self.variance().map(|v| (v / self.n as f64).sqrt())
    }
}

/// Batch-means standard error for a correlated series: the series is cut
/// into `batches` contiguous blocks and the block means are treated as
/// independent.
pub fn batch_means_stderr(series: &[f64], batches: usize) -> f64 {
    let b = batches.max(2).min(series.len().max(1));
    let len = series.len() / b;
    if len == 0 {
        return f64::NAN;
    }
    let mut stats = RunningStats::new();
    for i in 0..b {
        let chunk = &series[i * len..(i + 1) * len];
        stats.push(chunk.iter().sum::<f64>() / chunk.len() as f64);
    }
    stats.stderr().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_exact_for_small_n() {
        let mut fact = 1.0f64;
        for n in 1..=20usize {
            fact *= n as f64;
            assert!((ln_factorial(n) - fact.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn stirling_branch_continuous() {
        // the table/Stirling crossover should agree to high accuracy
        let direct: f64 = (1..TABLE_SIZE + 1).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(TABLE_SIZE) - direct).abs() / direct < 1e-13);
    }

    #[test]
    fn double_factorial_small_values() {
        // 5!! = 15, 7!! = 105, (−1)!! = 1
        assert!((ln_double_factorial_odd(0) - 0.0).abs() < 1e-14);
        assert!((ln_double_factorial_odd(3) - 15.0f64.ln()).abs() < 1e-12);
        assert!((ln_double_factorial_odd(4) - 105.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_quadratic_max() {
        let x = golden_max(|x| -(x - 0.3).powi(2), -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
    }

    #[test]
    fn bisect_finds_root() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((x - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn running_stats_match_closed_form() {
        let mut s = RunningStats::new();
        for x in [1.0, 2.0, 3.0, 4.0] {
            s.push(x);
        }
        assert_eq!(s.count(), 4);
        assert!((s.mean() - 2.5).abs() < 1e-15);
        assert!((s.variance().unwrap() - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn log_sum_exp_stable() {
        let v = [1000.0, 1000.0];
        assert!((log_sum_exp(&v) - (1000.0 + 2.0f64.ln())).abs() < 1e-12);
    }
}
