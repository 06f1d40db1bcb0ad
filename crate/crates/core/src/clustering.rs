//! k-means grading of efficiency scores.
//!
//! Lloyd's algorithm from a seeded k-means++ start minimizes the
//! within-cluster dispersion `D = Σ_c Σ_{a∈π_c} ‖a − m_c‖²`. The number of
//! clusters is picked by mean silhouette unless overridden, and clusters are
//! labelled by descending centre efficiency.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed;

/// Restarts per k used by [`select_k`].
pub const SELECT_RESTARTS: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("k = {k} exceeds the {distinct} distinct points")]
    KTooLarge { k: usize, distinct: usize },
    #[error("k must be at least 1")]
    KZero,
    #[error("max_iter must be at least 1")]
    NoIterations,
    #[error("points have inconsistent dimensions")]
    Ragged,
    #[error("silhouette needs at least two non-empty clusters")]
    SingleCluster,
    #[error("assignment count {assignments} does not match point count {points}")]
    LengthMismatch { points: usize, assignments: usize },
    #[error("invalid k range {k_min}..={k_max}")]
    BadRange { k_min: usize, k_max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub k: usize,
    pub centers: Vec<Vec<f64>>,
    /// Cluster index of each point.
    pub assignments: Vec<usize>,
    /// Within-cluster sum of squared distances.
    pub dispersion: f64,
    /// Dispersion after every Lloyd iteration.
    pub dispersion_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Mean silhouette; `None` when k = 1.
    pub silhouette: Option<f64>,
}

impl ClusterModel {
    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == cluster)
            .map(|(i, _)| i)
            .collect()
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

fn distinct_count(points: &[Vec<f64>]) -> usize {
    let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
    sorted.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    sorted.dedup();
    sorted.len()
}

fn nearest(point: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, m) in centers.iter().enumerate() {
        let d = sq_dist(point, m);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn kmeans_pp(points: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut centers = vec![points[rng.gen_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let mut target = rng.gen::<f64>() * total;
        let mut pick = d2.iter().rposition(|&d| d > 0.0).unwrap_or(0);
        for (i, &d) in d2.iter().enumerate() {
            if d <= 0.0 {
                continue;
            }
            if target < d {
                pick = i;
                break;
            }
            target -= d;
        }
        let c = points[pick].clone();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centers.push(c);
    }
    centers
}

fn dispersion(points: &[Vec<f64>], centers: &[Vec<f64>], assignments: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(p, &c)| sq_dist(p, &centers[c]))
        .sum()
}

fn means(
    points: &[Vec<f64>],
    assignments: &[usize],
    k: usize,
    dim: usize,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in points.iter().zip(assignments) {
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(p) {
            *s += v;
        }
    }
    for (s, &n) in sums.iter_mut().zip(&counts) {
        if n > 0 {
            s.iter_mut().for_each(|v| *v /= n as f64);
        }
    }
    (sums, counts)
}

/// Lloyd's k-means from a k-means++ start drawn with `seed`. Stops when the
/// assignment stops changing or after `max_iter` iterations. Empty clusters
/// are re-seeded with the point farthest from its centre.
pub fn kmeans(
    points: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<ClusterModel, ClusterError> {
    if k == 0 {
        return Err(ClusterError::KZero);
    }
    if max_iter == 0 {
        return Err(ClusterError::NoIterations);
    }
    let dim = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != dim) {
        return Err(ClusterError::Ragged);
    }
    let distinct = distinct_count(points);
    if k > distinct {
        return Err(ClusterError::KTooLarge { k, distinct });
    }
    let mut rng = seed::rng(seed);
    let mut centers = kmeans_pp(points, k, &mut rng);
    let mut assignments: Vec<usize> = points.iter().map(|p| nearest(p, &centers).0).collect();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let (mut m, mut counts) = means(points, &assignments, k, dim);
        // Re-seed empty clusters from the worst-fitting points; moving a
        // point onto its own centre never raises D.
        while let Some(empty) = counts.iter().position(|&n| n == 0) {
            let (far, _) = points
                .iter()
                .enumerate()
                .filter(|(i, _)| counts[assignments[*i]] > 1)
                .map(|(i, p)| (i, sq_dist(p, &m[assignments[i]])))
                .fold(
                    (usize::MAX, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            counts[assignments[far]] -= 1;
            assignments[far] = empty;
            counts[empty] = 1;
            let (m2, c2) = means(points, &assignments, k, dim);
            m = m2;
            counts = c2;
        }
        for (c, center) in m.into_iter().enumerate() {
            centers[c] = center;
        }
        history.push(dispersion(points, &centers, &assignments));

        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centers).0).collect();
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;
    }
    if !converged {
        let (m, counts) = means(points, &assignments, k, dim);
        for (c, center) in m.into_iter().enumerate() {
            if counts[c] > 0 {
                centers[c] = center;
            }
        }
        history.push(dispersion(points, &centers, &assignments));
    }
    let dispersion = *history.last().expect("at least one iteration");
    let silhouette = if k >= 2 {
        silhouette(points, &assignments).ok()
    } else {
        None
    };
    Ok(ClusterModel {
        k,
        centers,
        assignments,
        dispersion,
        dispersion_history: history,
        iterations,
        converged,
        silhouette,
    })
}

/// Best of `restarts` k-means runs (lowest D, earliest on ties), each with a
/// seed derived from `seed`.
pub fn kmeans_restarts(
    points: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iter: usize,
    restarts: usize,
) -> Result<ClusterModel, ClusterError> {
    let mut best: Option<ClusterModel> = None;
    for r in 0..restarts.max(1) {
        let run_seed = seed::derive(seed, format!("k{k}r{r}").as_bytes());
        let model = kmeans(points, k, run_seed, max_iter)?;
        if best
            .as_ref()
            .is_none_or(|b| model.dispersion < b.dispersion)
        {
            best = Some(model);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Mean silhouette `(b − a) / max(a, b)` over all points. Points in
/// singleton clusters contribute 0, as do points with `a = b = 0`.
pub fn silhouette(points: &[Vec<f64>], assignments: &[usize]) -> Result<f64, ClusterError> {
    if points.len() != assignments.len() {
        return Err(ClusterError::LengthMismatch {
            points: points.len(),
            assignments: assignments.len(),
        });
    }
    let k = assignments.iter().max().map_or(0, |&m| m + 1);
    let mut sizes = vec![0usize; k];
    for &c in assignments {
        sizes[c] += 1;
    }
    if sizes.iter().filter(|&&n| n > 0).count() < 2 {
        return Err(ClusterError::SingleCluster);
    }
    let mut total = 0.0;
    let mut sums = vec![0.0; k];
    for (i, p) in points.iter().enumerate() {
        let own = assignments[i];
        if sizes[own] == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (j, q) in points.iter().enumerate() {
            if i != j {
                sums[assignments[j]] += dist(p, q);
            }
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / points.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSelection {
    pub chosen: usize,
    /// k with the highest silhouette (lowest k on ties).
    pub best_by_silhouette: usize,
    /// `(k, silhouette)` for every k in range.
    pub table: Vec<(usize, f64)>,
    pub model: ClusterModel,
}

/// Clusters for every k in `k_min..=k_max` and picks the k with the highest
/// silhouette, unless `override_k` is given. The table is always complete.
pub fn select_k(
    points: &[Vec<f64>],
    k_min: usize,
    k_max: usize,
    seed: u64,
    override_k: Option<usize>,
) -> Result<KSelection, ClusterError> {
    if k_min < 2 || k_min > k_max {
        return Err(ClusterError::BadRange { k_min, k_max });
    }
    let max_iter = 300;
    let mut table = Vec::new();
    let mut models = Vec::new();
    for k in k_min..=k_max {
        let model = kmeans_restarts(points, k, seed, max_iter, SELECT_RESTARTS)?;
        let s = silhouette(points, &model.assignments)?;
        table.push((k, s));
        models.push(model);
    }
    let (best_idx, _) =
        table
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &(_, s))| {
                if s > best.1 {
                    (i, s)
                } else {
                    best
                }
            });
    let best_by_silhouette = table[best_idx].0;
    let (chosen, model) = match override_k {
        Some(k) if (k_min..=k_max).contains(&k) => (k, models.swap_remove(k - k_min)),
        Some(k) => (
            k,
            kmeans_restarts(points, k, seed, max_iter, SELECT_RESTARTS)?,
        ),
        None => (best_by_silhouette, models.swap_remove(best_idx)),
    };
    Ok(KSelection {
        chosen,
        best_by_silhouette,
        table,
        model,
    })
}

/// Grade assignment derived from a clustering of efficiency scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grading {
    /// Cluster indices from best to worst centre efficiency.
    pub order: Vec<usize>,
    /// Label per cluster index.
    pub labels: Vec<String>,
    /// Mean score of each cluster's members, per cluster index.
    pub center_efficiency: Vec<f64>,
}

impl Grading {
    /// 1-based grade position of `cluster` (1 = best).
    pub fn grade_of(&self, cluster: usize) -> usize {
        self.order
            .iter()
            .position(|&c| c == cluster)
            .expect("cluster graded")
            + 1
    }
}

pub fn grade_names(k: usize) -> Vec<String> {
    if k == 7 {
        [
            "Special",
            "Privileged",
            "Rank-1",
            "Rank-2",
            "Rank-3",
            "Rank-4",
            "Rank-5",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    } else {
        (1..=k).map(|g| format!("Grade-{g}")).collect()
    }
}

/// Orders clusters by descending mean member score and labels them.
/// Equal centres keep cluster-index order.
pub fn grade_clusters(model: &ClusterModel, rho: &[f64]) -> Grading {
    let k = model.k;
    let mut sum = vec![0.0; k];
    let mut count = vec![0usize; k];
    for (&c, &r) in model.assignments.iter().zip(rho) {
        sum[c] += r;
        count[c] += 1;
    }
    let center_efficiency: Vec<f64> = (0..k)
        .map(|c| {
            if count[c] > 0 {
                sum[c] / count[c] as f64
            } else {
                model.centers[c].first().copied().unwrap_or(f64::NAN)
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        center_efficiency[b]
            .total_cmp(&center_efficiency[a])
            .then(a.cmp(&b))
    });
    let names = grade_names(k);
    let mut labels = vec![String::new(); k];
    for (g, &c) in order.iter().enumerate() {
        labels[c] = names[g].clone();
    }
    Grading {
        order,
        labels,
        center_efficiency,
    }
}
