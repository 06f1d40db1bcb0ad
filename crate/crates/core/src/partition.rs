//! Partition heuristic for large DMU sets.
//!
//! The peers of an evaluated DMU are shuffled and dealt round-robin into `p`
//! classes. The DMU is scored against each class separately and the class
//! scores are averaged. Smaller reference sets keep each LP small, and class
//! solves that fail are skipped rather than failing the DMU.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::LpStatus;
use crate::panel_data::PanelDataset;
use crate::sbm::{self, EfficiencyResult, SbmConfig, SbmError, Variant};
use crate::seed;

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("p = {p} exceeds the {peers} peers available")]
    PTooLarge { p: usize, peers: usize },
    #[error("p must be at least 1")]
    PZero,
    #[error("evaluated DMU {0} is not in the DMU set")]
    UnknownEvaluated(usize),
    #[error("every class solve was infeasible")]
    AllClassesInfeasible,
    #[error(transparent)]
    Sbm(#[from] SbmError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub p: usize,
    pub seed: u64,
    pub evaluated: usize,
    /// `classes[c]` lists the DMUs of class `c + 1`.
    pub classes: Vec<Vec<usize>>,
}

impl PartitionPlan {
    /// 1-based class of `dmu`, `None` for the evaluated DMU or strangers.
    pub fn class_of(&self, dmu: usize) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.contains(&dmu))
            .map(|c| c + 1)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// Shuffles the DMUs other than `evaluated` (Fisher–Yates under a seeded
/// ChaCha stream) and deals them round-robin into `p` classes.
pub fn partition(
    dmus: &[usize],
    evaluated: usize,
    p: usize,
    seed: u64,
) -> Result<PartitionPlan, PartitionError> {
    if p == 0 {
        return Err(PartitionError::PZero);
    }
    if !dmus.contains(&evaluated) {
        return Err(PartitionError::UnknownEvaluated(evaluated));
    }
    let mut peers: Vec<usize> = dmus.iter().copied().filter(|&d| d != evaluated).collect();
    peers.sort_unstable();
    peers.dedup();
    if p > peers.len() {
        return Err(PartitionError::PTooLarge {
            p,
            peers: peers.len(),
        });
    }
    let mut rng = seed::rng(seed);
    peers.shuffle(&mut rng);
    let mut classes = vec![Vec::with_capacity(peers.len() / p + 1); p];
    for (i, d) in peers.into_iter().enumerate() {
        classes[i % p].push(d);
    }
    Ok(PartitionPlan {
        p,
        seed,
        evaluated,
        classes,
    })
}

/// Seed of the partition stream for one DMU within a run.
pub fn dmu_seed(run_seed: u64, dmu_id: &str) -> u64 {
    seed::derive(run_seed, dmu_id.as_bytes())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassOutcome {
    pub members: Vec<usize>,
    pub result: EfficiencyResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicResult {
    pub evaluated: usize,
    pub plan: PartitionPlan,
    pub classes: Vec<ClassOutcome>,
    /// Mean over the classes that solved to optimality.
    pub mean_rho: f64,
    pub feasible_class_count: usize,
}

impl HeuristicResult {
    fn optimal_rhos(&self) -> impl Iterator<Item = f64> + '_ {
        self.classes
            .iter()
            .filter(|c| c.result.is_optimal())
            .map(|c| c.result.rho)
    }

    pub fn min_rho(&self) -> f64 {
        self.optimal_rhos().fold(f64::INFINITY, f64::min)
    }

    pub fn max_rho(&self) -> f64 {
        self.optimal_rhos().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn dropped_ratio_terms(&self) -> usize {
        self.classes
            .first()
            .map_or(0, |c| c.result.dropped_ratio_terms)
    }
}

/// Scores `evaluated` against each class of its partition and averages the
/// optimal class scores. `seed` is the run seed; the partition stream is
/// derived from it and the DMU id.
pub fn evaluate_heuristic(
    data: &PanelDataset,
    evaluated: usize,
    p: usize,
    seed: u64,
    config: &SbmConfig,
) -> Result<HeuristicResult, PartitionError> {
    if evaluated >= data.n_dmus() {
        return Err(PartitionError::UnknownEvaluated(evaluated));
    }
    let all: Vec<usize> = (0..data.n_dmus()).collect();
    let plan = partition(
        &all,
        evaluated,
        p,
        dmu_seed(seed, &data.dmu_ids()[evaluated]),
    )?;
    let mut classes = Vec::with_capacity(p);
    for members in &plan.classes {
        let mut reference = members.clone();
        if config.variant == Variant::Standard {
            reference.push(evaluated);
        }
        let result = sbm::evaluate_dmu(data, evaluated, &reference, config)?;
        classes.push(ClassOutcome {
            members: members.clone(),
            result,
        });
    }
    let rhos: Vec<f64> = classes
        .iter()
        .filter(|c| c.result.status == LpStatus::Optimal)
        .map(|c| c.result.rho)
        .collect();
    if rhos.is_empty() {
        return Err(PartitionError::AllClassesInfeasible);
    }
    let mean_rho = rhos.iter().sum::<f64>() / rhos.len() as f64;
    Ok(HeuristicResult {
        evaluated,
        plan,
        feasible_class_count: rhos.len(),
        mean_rho,
        classes,
    })
}

/// Runs the heuristic for every DMU; results are in dataset order.
pub fn evaluate_heuristic_all(
    data: &PanelDataset,
    p: usize,
    seed: u64,
    config: &SbmConfig,
) -> Result<Vec<HeuristicResult>, PartitionError> {
    sbm::for_each_dmu(data.n_dmus(), |j| {
        evaluate_heuristic(data, j, p, seed, config)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisible_sizes() {
        let dmus: Vec<usize> = (0..10).collect();
        let plan = partition(&dmus, 0, 3, 42).unwrap();
        assert_eq!(plan.class_sizes(), vec![3, 3, 3]);
        assert_eq!(plan.class_of(0), None);
    }

    #[test]
    fn uneven_sizes_differ_by_one() {
        let dmus: Vec<usize> = (0..10).collect();
        let plan = partition(&dmus, 0, 4, 42).unwrap();
        let mut sizes = plan.class_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 2, 3]);
    }

    #[test]
    fn deterministic_and_covering() {
        let dmus: Vec<usize> = (0..25).collect();
        let a = partition(&dmus, 7, 4, 9).unwrap();
        let b = partition(&dmus, 7, 4, 9).unwrap();
        assert_eq!(a, b);
        let mut all: Vec<usize> = a.classes.concat();
        all.sort_unstable();
        let expect: Vec<usize> = (0..25).filter(|&d| d != 7).collect();
        assert_eq!(all, expect);
        let c = partition(&dmus, 7, 4, 10).unwrap();
        assert_ne!(a.classes, c.classes);
    }

    #[test]
    fn p_bounds() {
        let dmus: Vec<usize> = (0..3).collect();
        assert_eq!(
            partition(&dmus, 0, 3, 1),
            Err(PartitionError::PTooLarge { p: 3, peers: 2 })
        );
        assert_eq!(partition(&dmus, 0, 0, 1), Err(PartitionError::PZero));
        assert!(partition(&dmus, 0, 2, 1).is_ok());
    }
}
