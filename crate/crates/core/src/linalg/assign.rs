use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest multiset size for which the exact bottleneck assignment is used;
/// above it pairing falls back to greedy nearest neighbours.
pub const OPTIMAL_MATCHING_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingMethod {
    Optimal,
    Greedy,
}

/// A pairing of two equally sized multisets.
#[derive(Debug, Clone, Serialize)]
pub struct Matching {
    /// `(index into left, index into right, distance)`, ordered by left index.
    pub pairs: Vec<(usize, usize, f64)>,
    pub max_distance: f64,
    pub method: MatchingMethod,
}

/// Pairs `left` with `right` minimizing the largest pair distance (exact for
/// sizes up to [`OPTIMAL_MATCHING_LIMIT`], greedy above).
pub fn match_eigenvalues(left: &[Complex64], right: &[Complex64]) -> Result<Matching> {
    if left.len() != right.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} values", left.len()),
            found: format!("{} values", right.len()),
        });
    }
    let n = left.len();
    let dist: Vec<Vec<f64>> = left
        .iter()
        .map(|a| right.iter().map(|b| (a - b).norm()).collect())
        .collect();
    let (assignment, method) = if n <= OPTIMAL_MATCHING_LIMIT {
        (bottleneck(&dist), MatchingMethod::Optimal)
    } else {
        (greedy(&dist), MatchingMethod::Greedy)
    };
    let pairs: Vec<(usize, usize, f64)> = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| (i, j, dist[i][j]))
        .collect();
    let max_distance = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    Ok(Matching {
        pairs,
        max_distance,
        method,
    })
}

fn greedy(dist: &[Vec<f64>]) -> Vec<usize> {
    let n = dist.len();
    let mut cand: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, row) in dist.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            cand.push((d, i, j));
        }
    }
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut of_left = vec![usize::MAX; n];
    let mut right_used = vec![false; n];
    for (_, i, j) in cand {
        if of_left[i] == usize::MAX && !right_used[j] {
            of_left[i] = j;
            right_used[j] = true;
        }
    }
    of_left
}

/// Smallest threshold admitting a perfect matching, found by bisection over
/// the sorted distinct distances with augmenting-path matching.
fn bottleneck(dist: &[Vec<f64>]) -> Vec<usize> {
    let n = dist.len();
    if n == 0 {
        return Vec::new();
    }
    let mut levels: Vec<f64> = dist.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let (mut lo, mut hi) = (0, levels.len() - 1);
    let mut best = perfect_matching(dist, levels[hi]).expect("complete graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(dist, levels[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    best
}

fn perfect_matching(dist: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = dist.len();
    let mut of_right = vec![usize::MAX; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, dist, threshold, &mut seen, &mut of_right) {
            return None;
        }
    }
    let mut of_left = vec![0; n];
    for (j, &i) in of_right.iter().enumerate() {
        of_left[i] = j;
    }
    Some(of_left)
}

fn augment(i: usize, dist: &[Vec<f64>], threshold: f64, seen: &mut [bool], of_right: &mut [usize]) -> bool {
    for j in 0..dist.len() {
        if dist[i][j] <= threshold && !seen[j] {
            seen[j] = true;
            if of_right[j] == usize::MAX || augment(of_right[j], dist, threshold, seen, of_right) {
                of_right[j] = i;
                return true;
            }
        }
    }
    false
}
