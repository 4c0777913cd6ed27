//! Rank correlation between two orderings or two score vectors.

use std::collections::BTreeMap;

use super::ValidationError;

/// Kendall's tau-b over paired observations, with the usual correction for
/// ties on either side. `None` when one side is entirely tied.
pub fn tau_b_scores(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "paired observations");
    let n = x.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut ties_x, mut ties_y) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i].partial_cmp(&x[j])?;
            let dy = y[i].partial_cmp(&y[j])?;
            use std::cmp::Ordering::Equal;
            match (dx, dy) {
                (Equal, Equal) => {
                    ties_x += 1;
                    ties_y += 1;
                }
                (Equal, _) => ties_x += 1,
                (_, Equal) => ties_y += 1,
                _ if dx == dy => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let pairs = (n * n.saturating_sub(1) / 2) as i64;
    let denom = (((pairs - ties_x) * (pairs - ties_y)) as f64).sqrt();
    if denom == 0.0 {
        return None;
    }
    Some(((concordant - discordant) as f64 / denom).clamp(-1.0, 1.0))
}

/// Positions of the items of `order`, starting at 1.
fn positions(order: &[String]) -> BTreeMap<&str, f64> {
    order
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), (i + 1) as f64))
        .collect()
}

fn paired(r1: &[String], r2: &[String]) -> Result<(Vec<f64>, Vec<f64>), ValidationError> {
    let p1 = positions(r1);
    let p2 = positions(r2);
    if p1.len() != r1.len() || p2.len() != r2.len() {
        return Err(ValidationError::DuplicateItem);
    }
    if p1.keys().ne(p2.keys()) {
        return Err(ValidationError::DifferentItems);
    }
    Ok(p1.iter().map(|(k, v)| (*v, p2[k])).unzip())
}

/// Tau-b between two orderings of the same items.
pub fn kendall_tau_b(r1: &[String], r2: &[String]) -> Result<f64, ValidationError> {
    let (x, y) = paired(r1, r2)?;
    tau_b_scores(&x, &y).ok_or(ValidationError::Degenerate)
}

/// Ranks with ties sharing the mean of the positions they span.
fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|a, b| x[*a].total_cmp(&x[*b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for k in &idx[i..=j] {
            ranks[*k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rho as the Pearson correlation of average ranks.
pub fn spearman_scores(x: &[f64], y: &[f64]) -> Option<f64> {
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

pub fn spearman(r1: &[String], r2: &[String]) -> Result<f64, ValidationError> {
    let (x, y) = paired(r1, r2)?;
    spearman_scores(&x, &y).ok_or(ValidationError::Degenerate)
}
