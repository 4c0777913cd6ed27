//! Column statistics. Inputs are sorted before summation so results do not
//! depend on row order.

use crate::catalog::AttributeType;
use crate::problem::Distribution;

/// Chi-square(2) critical value at α = 0.05, which is `-2 ln 0.05`.
pub const JB_CRITICAL_05: f64 = 5.991_464_547_107_982;

/// Smallest sample the normality test is run on.
pub const NORMALITY_MIN_N: usize = 20;

pub fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

/// `None` when every value is null.
pub fn infer_type(values: &[Option<&str>]) -> Option<AttributeType> {
    let present: Vec<&str> = values.iter().flatten().copied().collect();
    if present.is_empty() {
        return None;
    }
    if present.iter().all(|v| parse_number(v).is_some()) {
        return Some(AttributeType::Numerical);
    }
    let distinct = distinct_count(&present);
    let threshold = (0.05 * values.len() as f64).max(20.0);
    Some(if distinct as f64 <= threshold {
        AttributeType::Categorical
    } else {
        AttributeType::Textual
    })
}

pub fn distinct_count(values: &[&str]) -> usize {
    values
        .iter()
        .collect::<std::collections::BTreeSet<_>>()
        .len()
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn mean(xs: &[f64]) -> f64 {
    sorted(xs).iter().sum::<f64>() / xs.len() as f64
}

/// Central moment of order `k`, divided by `n`.
fn central_moment(xs: &[f64], m: f64, k: i32) -> f64 {
    let mut d: Vec<f64> = xs.iter().map(|x| (x - m).powi(k)).collect();
    d.sort_by(f64::total_cmp);
    d.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let n = xs.len() as f64;
    (central_moment(xs, m, 2) * n / (n - 1.0)).sqrt()
}

/// Jarque–Bera statistic from biased sample moments, or `None` for a
/// constant sample.
pub fn jarque_bera(xs: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let m = mean(xs);
    let m2 = central_moment(xs, m, 2);
    if m2 <= 0.0 {
        return None;
    }
    let skew = central_moment(xs, m, 3) / m2.powf(1.5);
    let kurt = central_moment(xs, m, 4) / (m2 * m2);
    Some(n / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0))
}

pub fn normality(xs: &[f64]) -> Distribution {
    if xs.len() < NORMALITY_MIN_N {
        return Distribution::Unknown;
    }
    match jarque_bera(xs) {
        Some(jb) if jb < JB_CRITICAL_05 => Distribution::Normal,
        _ => Distribution::Unknown,
    }
}

/// True when the largest positive standard deviation is at most ten times
/// the smallest.
pub fn scale_homogeneity(std_devs: &[f64]) -> bool {
    let positive: Vec<f64> = std_devs.iter().copied().filter(|s| *s > 0.0).collect();
    if positive.len() < 2 {
        return true;
    }
    let max = positive.iter().copied().fold(f64::MIN, f64::max);
    let min = positive.iter().copied().fold(f64::MAX, f64::min);
    max / min <= 10.0
}

/// Pearson correlation over paired values, `None` when either side is constant.
pub fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    if pairs.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (mx, my) = (mean(&xs), mean(&ys));
    let mut cov: Vec<f64> = pairs.iter().map(|(x, y)| (x - mx) * (y - my)).collect();
    cov.sort_by(f64::total_cmp);
    let sxy: f64 = cov.iter().sum();
    let sxx = central_moment(&xs, mx, 2) * xs.len() as f64;
    let syy = central_moment(&ys, my, 2) * ys.len() as f64;
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Majority over minority class frequency is at most 3.
pub fn class_balance_ok(counts: &[usize]) -> bool {
    let nonzero: Vec<usize> = counts.iter().copied().filter(|c| *c > 0).collect();
    match (nonzero.iter().max(), nonzero.iter().min()) {
        (Some(max), Some(min)) => *max <= 3 * *min,
        _ => true,
    }
}
