//! Estimators and hypothesis tests used by the verification experiments.
//!
//! Everything here is deterministic given its inputs. Kolmogorov-Smirnov
//! p-values use the asymptotic Kolmogorov distribution (series below,
//! accurate to better than 1e-6); all experiments feed these tests at
//! least several hundred observations, where the asymptotic is valid.

use crate::error::{Error, Result};

/// Moment summary of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased variance; 0 for a single observation.
    pub variance: f64,
    pub std_error_of_mean: f64,
    pub min: f64,
    pub max: f64,
}

impl SampleSummary {
    pub fn from_slice(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let n = sample.len() as f64;
        let mean = sample.iter().sum::<f64>() / n;
        let mut ss = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &x in sample {
            ss += (x - mean) * (x - mean);
            min = min.min(x);
            max = max.max(x);
        }
        let variance = if sample.len() > 1 { ss / (n - 1.0) } else { 0.0 };
        Ok(SampleSummary {
            count: sample.len(),
            mean,
            variance,
            std_error_of_mean: (variance / n).sqrt(),
            min,
            max,
        })
    }
}

/// Outcome of a hypothesis test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub test_name: &'static str,
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    /// Second sample size for two-sample tests, otherwise 0.
    pub n2: usize,
}

/// Right-continuous empirical CDF.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut sample: Vec<f64>) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        if sample.iter().any(|x| x.is_nan()) {
            return Err(Error::Degenerate("NaN in sample".into()));
        }
        sample.sort_by(f64::total_cmp);
        Ok(Ecdf { sorted: sample })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Survival function of the Kolmogorov distribution,
/// `Q(t) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 t^2)` for large t and the
/// theta-dual form for small t; terms are summed to below 1e-10.
pub fn kolmogorov_survival(t: f64) -> f64 {
    if !(t > 0.0) {
        return 1.0;
    }
    if t < 1.0 {
        // K(t) = sqrt(2 pi)/t * sum_{k odd} exp(-k^2 pi^2 / (8 t^2))
        let mut sum = 0.0;
        let a = std::f64::consts::PI * std::f64::consts::PI / (8.0 * t * t);
        let mut k = 1.0;
        loop {
            let term = (-k * k * a).exp();
            sum += term;
            if term < 1e-12 {
                break;
            }
            k += 2.0;
        }
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / t * sum;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        let mut k = 1.0;
        loop {
            let term = (-2.0 * k * k * t * t).exp();
            sum += sign * term;
            if term < 1e-12 {
                break;
            }
            sign = -sign;
            k += 1.0;
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

/// One-sample Kolmogorov-Smirnov test against a reference CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<TestResult> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / m).max((i + 1) as f64 / m - f);
    }
    Ok(TestResult {
        test_name: "ks_one_sample",
        statistic: d,
        p_value: kolmogorov_survival(m.sqrt() * d),
        n1: xs.len(),
        n2: 0,
    })
}

/// Two-sample Kolmogorov-Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let n_eff = na * nb / (na + nb);
    Ok(TestResult {
        test_name: "ks_two_sample",
        statistic: d,
        p_value: kolmogorov_survival(n_eff.sqrt() * d),
        n1: xs.len(),
        n2: ys.len(),
    })
}

/// Standard normal CDF by the double-precision rational approximation of
/// the cumulative normal (polynomial section for |z| < 7.07, continued
/// fraction in the tail); absolute error well below 1e-7.
fn std_normal_cdf(z: f64) -> f64 {
    let xabs = z.abs();
    if xabs > 37.0 {
        return if z > 0.0 { 1.0 } else { 0.0 };
    }
    let e = (-xabs * xabs / 2.0).exp();
    let cum = if xabs < 7.071_067_811_865_47 {
        let mut num = 3.52624965998911e-2 * xabs + 0.700383064443688;
        num = num * xabs + 6.37396220353165;
        num = num * xabs + 33.912866078383;
        num = num * xabs + 112.079291497871;
        num = num * xabs + 221.213596169931;
        num = num * xabs + 220.206867912376;
        let mut den = 8.83883476483184e-2 * xabs + 1.75566716318264;
        den = den * xabs + 16.064177579207;
        den = den * xabs + 86.7807322029461;
        den = den * xabs + 296.564248779674;
        den = den * xabs + 637.333633378831;
        den = den * xabs + 793.826512519948;
        den = den * xabs + 440.413735824752;
        e * num / den
    } else {
        let mut build = xabs + 0.65;
        build = xabs + 4.0 / build;
        build = xabs + 3.0 / build;
        build = xabs + 2.0 / build;
        build = xabs + 1.0 / build;
        e / build / 2.506628274631
    };
    if z > 0.0 {
        1.0 - cum
    } else {
        cum
    }
}

/// Normal CDF with location and scale.
pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> Result<f64> {
    if !(sd > 0.0) {
        return Err(Error::Param(format!("sd {sd} must be > 0")));
    }
    Ok(std_normal_cdf((x - mean) / sd))
}

/// Least-squares fit of `log p` against `log r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub slope: f64,
    pub intercept: f64,
    /// Points dropped because their probability was zero.
    pub dropped: usize,
}

pub fn tail_exponent_fit(r_values: &[f64], probabilities: &[f64]) -> Result<TailFit> {
    if r_values.len() != probabilities.len() {
        return Err(Error::Param("r/probability length mismatch".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut dropped = 0usize;
    for (&r, &p) in r_values.iter().zip(probabilities) {
        if !(r > 0.0) {
            return Err(Error::Param(format!("r value {r} must be > 0")));
        }
        if p > 0.0 {
            xs.push(r.ln());
            ys.push(p.ln());
        } else {
            dropped += 1;
        }
    }
    if xs.len() < 3 {
        return Err(Error::Degenerate(format!(
            "only {} surviving points; need at least 3 for the log-log fit",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate("all r values equal".into()));
    }
    let slope = sxy / sxx;
    Ok(TailFit { slope, intercept: my - slope * mx, dropped })
}

/// Pearson correlation between path increments over `[0, u_break]` and
/// `[u_break, u_max]` across samples, with a Fisher-z p-value. All paths
/// must share `grid`, which must contain 0, `u_break` and its last point.
pub fn increment_independence(
    grid: &[f64],
    paths: &[Vec<f64>],
    u_break: f64,
) -> Result<TestResult> {
    if paths.is_empty() {
        return Err(Error::EmptySample);
    }
    let idx0 = crate::rescale::find_grid_index(grid, 0.0)
        .ok_or(Error::OffGrid { requested: 0.0 })?;
    let idxb = crate::rescale::find_grid_index(grid, u_break)
        .ok_or(Error::OffGrid { requested: u_break })?;
    let idxe = grid.len() - 1;
    if idxb >= idxe || idx0 >= idxb {
        return Err(Error::Param("need 0 < u_break < u_max on the grid".into()));
    }
    let mut inc1 = Vec::with_capacity(paths.len());
    let mut inc2 = Vec::with_capacity(paths.len());
    for p in paths {
        if p.len() != grid.len() {
            return Err(Error::Param("path/grid length mismatch".into()));
        }
        inc1.push(p[idxb] - p[idx0]);
        inc2.push(p[idxe] - p[idxb]);
    }
    let n = paths.len() as f64;
    let m1 = inc1.iter().sum::<f64>() / n;
    let m2 = inc2.iter().sum::<f64>() / n;
    let mut s11 = 0.0;
    let mut s22 = 0.0;
    let mut s12 = 0.0;
    for (a, b) in inc1.iter().zip(&inc2) {
        s11 += (a - m1) * (a - m1);
        s22 += (b - m2) * (b - m2);
        s12 += (a - m1) * (b - m2);
    }
    if s11 == 0.0 || s22 == 0.0 {
        return Err(Error::Degenerate("increment variance is zero".into()));
    }
    let corr = s12 / (s11 * s22).sqrt();
    let p_value = if paths.len() > 3 {
        let z = corr.clamp(-0.999_999_999, 0.999_999_999).atanh() * (n - 3.0).sqrt();
        2.0 * std_normal_cdf(-z.abs())
    } else {
        1.0
    };
    Ok(TestResult {
        test_name: "increment_independence",
        statistic: corr,
        p_value,
        n1: paths.len(),
        n2: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{SeedSpec, Substream};

    #[test]
    fn summary_of_constant_data() {
        let s = SampleSummary::from_slice(&[2.5, 2.5, 2.5]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.variance, 0.0);
        assert_eq!(s.min, 2.5);
        assert_eq!(s.max, 2.5);
        assert!(SampleSummary::from_slice(&[]).is_err());
    }

    #[test]
    fn ecdf_examples() {
        let e = Ecdf::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!((e.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.eval(-1e308), 0.0);
        assert_eq!(e.eval(1e308), 1.0);
        assert_eq!(e.eval(3.0), 1.0);
        assert!(Ecdf::new(vec![]).is_err());
    }

    #[test]
    fn ks_statistic_extremes() {
        // all mass at 0 against U(0,1): the empirical jump of height 1 at 0
        // sits where the reference is 0
        let r = ks_one_sample(&[0.0; 10], |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((r.statistic - 1.0).abs() < 1e-12);

        let a = vec![-3.0, -2.0, -1.0];
        let b = vec![1.0, 2.0, 3.0];
        let r = ks_two_sample(&a, &b).unwrap();
        assert!((r.statistic - 1.0).abs() < 1e-12);

        let r = ks_two_sample(&a, &a.clone()).unwrap();
        assert_eq!(r.statistic, 0.0);
    }

    #[test]
    fn ks_invariant_under_monotone_transform() {
        let mut stream = SeedSpec::new(10, 0, Substream::Bulk).stream();
        let sample: Vec<f64> = (0..500).map(|_| stream.next_normal()).collect();
        let d1 = ks_one_sample(&sample, |x| std_normal_cdf(x)).unwrap().statistic;
        let transformed: Vec<f64> = sample.iter().map(|x| x.exp()).collect();
        let d2 = ks_one_sample(&transformed, |y: f64| std_normal_cdf(y.ln())).unwrap().statistic;
        assert!((d1 - d2).abs() < 1e-12);
    }

    #[test]
    fn ks_null_p_values_are_uniformish() {
        // samples from their own cdf: mean p over 200 reps near 1/2
        let mut stream = SeedSpec::new(11, 0, Substream::Bulk).stream();
        let reps = 200;
        let mut total_p = 0.0;
        for _ in 0..reps {
            let sample: Vec<f64> = (0..10_000).map(|_| stream.next_f64()).collect();
            let r = ks_one_sample(&sample, |x| x.clamp(0.0, 1.0)).unwrap();
            total_p += r.p_value;
        }
        let mean_p = total_p / reps as f64;
        assert!((mean_p - 0.5).abs() < 0.06, "mean p {mean_p}");
    }

    #[test]
    fn ks_two_sample_null_behavior() {
        let mut stream = SeedSpec::new(12, 0, Substream::Bulk).stream();
        let mut ok = 0;
        let reps = 100;
        for _ in 0..reps {
            let a: Vec<f64> = (0..10_000).map(|_| stream.next_normal()).collect();
            let b: Vec<f64> = (0..10_000).map(|_| stream.next_normal()).collect();
            if ks_two_sample(&a, &b).unwrap().p_value > 0.001 {
                ok += 1;
            }
        }
        assert!(ok >= 99, "null p above 0.001 in only {ok}/{reps} reps");
    }

    /// Simpson integration of the standard normal density, the independent
    /// oracle for the CDF approximation.
    fn normal_cdf_quadrature(z: f64) -> f64 {
        let lo = -12.0f64;
        let steps = 20_000usize;
        let h = (z - lo) / steps as f64;
        let density = |x: f64| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = density(lo) + density(z);
        for i in 1..steps {
            let x = lo + i as f64 * h;
            acc += density(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn normal_cdf_examples() {
        assert_eq!(normal_cdf(3.0, 3.0, 2.0).unwrap(), 0.5);
        let p = normal_cdf(1.959964, 0.0, 1.0).unwrap();
        assert!((p - 0.975).abs() < 1e-6, "got {p}");
        assert!((p - normal_cdf_quadrature(1.959964)).abs() < 1e-7);
        for &z in &[-3.0, -1.2, -0.3, 0.4, 1.7, 2.9, 4.5] {
            let approx = std_normal_cdf(z);
            let exact = normal_cdf_quadrature(z);
            assert!((approx - exact).abs() < 1e-7, "z={z}: {approx} vs {exact}");
            let sym = std_normal_cdf(-z) + std_normal_cdf(z);
            assert!((sym - 1.0).abs() < 1e-12);
        }
        assert!(normal_cdf(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn tail_fit_examples() {
        let r = [1.0f64, 1.5, 2.0, 3.0];
        let p: Vec<f64> = r.iter().map(|x| x.powi(-3)).collect();
        let fit = tail_exponent_fit(&r, &p).unwrap();
        assert!((fit.slope + 3.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);

        let c = 0.37;
        let p: Vec<f64> = r.iter().map(|x| c * x.powi(-3)).collect();
        let fit = tail_exponent_fit(&r, &p).unwrap();
        assert!((fit.slope + 3.0).abs() < 1e-12);
        assert!((fit.intercept - c.ln()).abs() < 1e-12);

        // multiplicative noise keeps the slope within 0.3 of truth
        let mut stream = SeedSpec::new(13, 0, Substream::Bulk).stream();
        let noisy: Vec<f64> = r
            .iter()
            .map(|x| x.powi(-3) * (1.0 + 0.1 * (2.0 * stream.next_f64() - 1.0)))
            .collect();
        let fit = tail_exponent_fit(&r, &noisy).unwrap();
        assert!((fit.slope + 3.0).abs() < 0.3, "slope {}", fit.slope);

        // zero probabilities get dropped; too few survivors is an error
        let fit = tail_exponent_fit(&[1.0, 2.0, 3.0, 4.0], &[0.5, 0.1, 0.01, 0.0]).unwrap();
        assert_eq!(fit.dropped, 1);
        assert!(tail_exponent_fit(&[1.0, 2.0, 3.0], &[0.5, 0.0, 0.0]).is_err());
    }

    #[test]
    fn increment_independence_examples() {
        let grid = vec![0.0, 0.5, 1.0];
        // identical increments: correlation exactly 1
        let paths: Vec<Vec<f64>> = (0..50)
            .map(|i| {
                let v = i as f64;
                vec![0.0, v, 2.0 * v]
            })
            .collect();
        let r = increment_independence(&grid, &paths, 0.5).unwrap();
        assert!(r.statistic > 0.999_999);

        // antisymmetric: second increment is minus the first
        let paths: Vec<Vec<f64>> = (0..50)
            .map(|i| {
                let v = i as f64;
                vec![0.0, v, 0.0]
            })
            .collect();
        let r = increment_independence(&grid, &paths, 0.5).unwrap();
        assert!(r.statistic < -0.999_999);

        // synthetic independent Gaussian increments stay within 3/sqrt(m)
        let mut stream = SeedSpec::new(14, 0, Substream::Bulk).stream();
        let mut ok = 0;
        let reps = 60;
        let m = 800;
        for _ in 0..reps {
            let paths: Vec<Vec<f64>> = (0..m)
                .map(|_| {
                    let a = stream.next_normal();
                    let b = stream.next_normal();
                    vec![0.0, a, a + b]
                })
                .collect();
            let r = increment_independence(&grid, &paths, 0.5).unwrap();
            if r.statistic.abs() <= 3.0 / (m as f64).sqrt() {
                ok += 1;
            }
        }
        assert!(ok as f64 >= 0.9 * reps as f64, "{ok}/{reps}");

        // degenerate variance
        let paths: Vec<Vec<f64>> = (0..10).map(|_| vec![0.0, 1.0, 2.0]).collect();
        assert!(increment_independence(&grid, &paths, 0.5).is_err());
    }

    #[test]
    fn kolmogorov_survival_sanity() {
        assert_eq!(kolmogorov_survival(0.0), 1.0);
        assert!(kolmogorov_survival(0.2) > 0.999_999);
        // classical table value: Q(1.36) ~ 0.0505
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 5e-4);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 2e-4);
        assert!(kolmogorov_survival(3.0) < 1e-6);
    }
}
