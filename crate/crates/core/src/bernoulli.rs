//! Multivariate Bernoulli model of a label pair.
//!
//! The pair density is the exponential family
//! `P(y1, y2) = exp(y1 f_i + y2 f_j + y1 y2 f_ij) / Z`, with each natural
//! parameter linear in the covariate. `f_ij` is the log odds ratio of the
//! pair, so `bij0` carries the constant covariance and `bij1` its change with `x`.

use serde::{Deserialize, Serialize};

use crate::datagen::{CellCounts, PairDataset};
use crate::error::Result;
use crate::joint_dist::{log_odds_ratio, JointDist22};
use crate::mle::FitResult;
use crate::model::{ModelFit, ModelKind};

pub const COEFF_NAMES: [&str; 6] = ["bi0", "bi1", "bj0", "bj1", "bij0", "bij1"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernoulliParams {
    pub bi0: f64,
    pub bi1: f64,
    pub bj0: f64,
    pub bj1: f64,
    pub bij0: f64,
    pub bij1: f64,
}

/// Natural parameters `(f_i, f_j, f_ij)` at one covariate value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalParams {
    pub f_i: f64,
    pub f_j: f64,
    pub f_ij: f64,
}

impl NaturalParams {
    /// Log-linear predictors of the cells `00, 01, 10, 11`.
    fn predictors(&self) -> [f64; 4] {
        [0.0, self.f_j, self.f_i, self.f_i + self.f_j + self.f_ij]
    }

    pub fn log_partition(&self) -> f64 {
        let eta = self.predictors();
        let max = eta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        max + eta.iter().map(|e| (e - max).exp()).sum::<f64>().ln()
    }

    pub fn log_cells(&self) -> [f64; 4] {
        let log_z = self.log_partition();
        self.predictors().map(|e| e - log_z)
    }

    /// Inverse of the cell map: log ratios of a strictly positive table.
    pub fn from_table(d: &JointDist22) -> Result<Self> {
        let f_ij = log_odds_ratio(d)?;
        Ok(Self {
            f_i: (d.p10 / d.p00).ln(),
            f_j: (d.p01 / d.p00).ln(),
            f_ij,
        })
    }
}

impl BernoulliParams {
    pub fn from_slice(v: &[f64]) -> Self {
        Self {
            bi0: v[0],
            bi1: v[1],
            bj0: v[2],
            bj1: v[3],
            bij0: v[4],
            bij1: v[5],
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.bi0, self.bi1, self.bj0, self.bj1, self.bij0, self.bij1]
    }

    pub fn natural(&self, x: f64) -> NaturalParams {
        NaturalParams {
            f_i: self.bi0 + self.bi1 * x,
            f_j: self.bj0 + self.bj1 * x,
            f_ij: self.bij0 + self.bij1 * x,
        }
    }

    /// The saturated parameters reproducing two per-state tables exactly.
    pub fn from_state_tables(state0: &JointDist22, state1: &JointDist22) -> Result<Self> {
        let a = NaturalParams::from_table(state0)?;
        let b = NaturalParams::from_table(state1)?;
        Ok(Self {
            bi0: a.f_i,
            bi1: b.f_i - a.f_i,
            bj0: a.f_j,
            bj1: b.f_j - a.f_j,
            bij0: a.f_ij,
            bij1: b.f_ij - a.f_ij,
        })
    }
}

/// Joint table of the labels at covariate value `x`.
pub fn bernoulli_cell_probs(p: &BernoulliParams, x: u8) -> JointDist22 {
    let [p00, p01, p10, p11] = p.natural(f64::from(x)).log_cells().map(f64::exp);
    JointDist22 { p00, p01, p10, p11 }
}

fn nll_counts(p: &BernoulliParams, counts: &CellCounts) -> f64 {
    let mut total = 0.0;
    for x in 0..2 {
        let n = counts.state(x);
        if n.iter().all(|&c| c == 0) {
            continue;
        }
        let nat = p.natural(x as f64);
        let log_z = nat.log_partition();
        // -sum [y1 f_i + y2 f_j + y1 y2 f_ij - log Z]
        let n_total: u64 = n.iter().sum();
        let y1 = (n[2] + n[3]) as f64;
        let y2 = (n[1] + n[3]) as f64;
        let y12 = n[3] as f64;
        total += n_total as f64 * log_z - (y1 * nat.f_i + y2 * nat.f_j + y12 * nat.f_ij);
    }
    total
}

pub fn bernoulli_nll(p: &BernoulliParams, data: &PairDataset) -> f64 {
    nll_counts(p, &data.counts())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

pub fn fit_bernoulli(data: &PairDataset) -> Result<ModelFit> {
    data.check_label_variation()?;
    let counts = data.counts();
    let total = counts.total() as f64;
    let (mut ones1, mut ones2) = (0u64, 0u64);
    for x in 0..2 {
        let s = counts.state(x);
        ones1 += s[2] + s[3];
        ones2 += s[1] + s[3];
    }
    let start = [
        logit(ones1 as f64 / total),
        0.0,
        logit(ones2 as f64 / total),
        0.0,
        0.0,
        0.0,
    ];
    let nll = |v: &[f64]| nll_counts(&BernoulliParams::from_slice(v), &counts);
    let result = FitResult::fit(nll, &start)?;
    Ok(ModelFit::from_result(
        ModelKind::Bernoulli,
        COEFF_NAMES,
        &result,
    ))
}
