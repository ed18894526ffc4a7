//! Staged logit model of a label pair.
//!
//! Stage 1 fits a logistic regression to each label. Stage 2 fits a logistic
//! regression to the joint indicator `y1 * y2` with the independence baseline
//! `logit(p_i(x) p_j(x))` from stage 1 as a fixed per-row offset, so its
//! coefficients measure departures of `p_ij` from independence. Stage-2
//! standard errors come from the sandwich covariance of the stacked
//! estimating equations of both stages, so they carry the sampling error of
//! the stage-1 offsets.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::datagen::PairDataset;
use crate::error::{Error, Result};
use crate::mle::{minimize, observed_information_se, FitResult};
use crate::model::{ModelFit, ModelKind};

pub const COEFF_NAMES: [&str; 6] = ["gamma0", "gamma1", "delta0", "delta1", "beta0", "beta1"];

/// Coefficients beyond this magnitude indicate a diverging (separated) fit.
pub const SEPARATION_LIMIT: f64 = 30.0;

/// Bounds applied to `p_i * p_j` before it becomes an offset.
pub const OFFSET_CLAMP: f64 = 1e-12;

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

pub fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^eta)` without overflow.
fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

/// Rows sharing a covariate value and offset, pooled into binomial counts.
#[derive(Debug, Clone, Copy)]
struct Group {
    x: f64,
    offset: f64,
    trials: f64,
    successes: f64,
}

fn group_rows(y: &[f64], x: &[f64], offset: &[f64]) -> Vec<Group> {
    let mut groups: BTreeMap<(u64, u64), Group> = BTreeMap::new();
    for ((yi, xi), oi) in y.iter().zip(x).zip(offset) {
        let g = groups.entry((xi.to_bits(), oi.to_bits())).or_insert(Group {
            x: *xi,
            offset: *oi,
            trials: 0.0,
            successes: 0.0,
        });
        g.trials += 1.0;
        g.successes += yi;
    }
    groups.into_values().collect()
}

/// Maximum-likelihood logistic regression of `y` on an intercept and `x`,
/// with a fixed additive `offset` on the logit scale.
///
/// When `x` is constant the slope is not estimable: it is reported as zero
/// with NaN standard error, z and p-value.
pub fn fit_logistic(y: &[f64], x: &[f64], offset: &[f64]) -> Result<FitResult> {
    if y.len() != x.len() || y.len() != offset.len() {
        return Err(Error::OutOfRange(format!(
            "length mismatch: y {}, x {}, offset {}",
            y.len(),
            x.len(),
            offset.len()
        )));
    }
    if y.iter().any(|v| *v != 0.0 && *v != 1.0) {
        return Err(Error::OutOfRange("logistic response must be 0 or 1".into()));
    }
    if offset.iter().any(|o| !o.is_finite()) {
        return Err(Error::DegenerateOffset(f64::NAN));
    }
    let ones: f64 = y.iter().sum();
    if ones == 0.0 || ones == y.len() as f64 {
        return Err(Error::ClassDegeneracy(format!(
            "logistic response is {} in every row",
            if ones == 0.0 { 0 } else { 1 }
        )));
    }
    let groups = group_rows(y, x, offset);
    let varying_x = x.iter().any(|v| *v != x[0]);

    let nll = |b: &[f64]| -> f64 {
        let slope = if varying_x { b[1] } else { 0.0 };
        groups
            .iter()
            .map(|g| {
                let eta = b[0] + slope * g.x + g.offset;
                g.trials * softplus(eta) - g.successes * eta
            })
            .sum()
    };

    let mean_offset = offset.iter().sum::<f64>() / offset.len() as f64;
    let intercept = logit(ones / y.len() as f64) - mean_offset;
    let start: Vec<f64> = if varying_x {
        vec![intercept, 0.0]
    } else {
        vec![intercept]
    };

    let min = minimize(nll, &start)?;
    if let Some((index, value)) = min
        .argmin
        .iter()
        .enumerate()
        .find(|(_, v)| v.abs() > SEPARATION_LIMIT)
    {
        return Err(Error::SeparationDetected {
            index,
            value: *value,
        });
    }
    if !min.converged {
        return Err(Error::NonConverged {
            iterations: min.iterations,
            grad_norm: min.grad_norm,
        });
    }
    let se = observed_information_se(&nll, &min.argmin)?;
    let (coeffs, std_errors) = if varying_x {
        (min.argmin, se)
    } else {
        (vec![min.argmin[0], 0.0], vec![se[0], f64::NAN])
    };
    Ok(FitResult::new(
        coeffs,
        std_errors,
        -min.value,
        true,
        min.iterations,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagedParams {
    pub stage1_i: [f64; 2],
    pub stage1_j: [f64; 2],
    pub stage2: [f64; 2],
    /// Per-row `logit(p_i(x) p_j(x))`, frozen after stage 1.
    pub offsets: Vec<f64>,
}

/// Independence-baseline offset `logit(p_i(x) p_j(x))` for each covariate value.
pub fn staged_offsets(stage1_i: [f64; 2], stage1_j: [f64; 2], x: &[f64]) -> Result<Vec<f64>> {
    x.iter()
        .map(|&xi| {
            let prod =
                sigmoid(stage1_i[0] + stage1_i[1] * xi) * sigmoid(stage1_j[0] + stage1_j[1] * xi);
            if !(prod > 0.0 && prod < 1.0) {
                return Err(Error::DegenerateOffset(prod));
            }
            Ok(logit(prod.clamp(OFFSET_CLAMP, 1.0 - OFFSET_CLAMP)))
        })
        .collect()
}

/// Covariance of the stacked estimate `(gamma, delta, beta)` of both stages:
/// `A^-1 B A^-T`, with `A` the derivative of the summed logistic score
/// equations and `B` the sum of their per-row outer products. Coefficients
/// are ordered as in [`COEFF_NAMES`]; with a constant covariate only the
/// three intercepts are present.
pub fn two_step_covariance(params: &StagedParams, data: &PairDataset) -> Result<DMatrix<f64>> {
    let x = data.x();
    let varying_x = x.iter().any(|v| *v != x[0]);
    let d = if varying_x { 2 } else { 1 };
    let mut a = DMatrix::<f64>::zeros(3 * d, 3 * d);
    let mut b = DMatrix::<f64>::zeros(3 * d, 3 * d);
    let mut psi = DVector::<f64>::zeros(3 * d);
    for (row, xi) in data.rows().iter().zip(&x) {
        let z = if varying_x { vec![1.0, *xi] } else { vec![1.0] };
        let pi = sigmoid(params.stage1_i[0] + params.stage1_i[1] * xi);
        let pj = sigmoid(params.stage1_j[0] + params.stage1_j[1] * xi);
        let q = pi * pj;
        let pij = sigmoid(
            params.stage2[0]
                + params.stage2[1] * xi
                + logit(q.clamp(OFFSET_CLAMP, 1.0 - OFFSET_CLAMP)),
        );
        let residuals = [
            f64::from(row.y1) - pi,
            f64::from(row.y2) - pj,
            f64::from(row.y1 * row.y2) - pij,
        ];
        let wij = pij * (1.0 - pij);
        // (block row, block column, weight) of the negated score derivative
        let blocks = [
            (0, 0, pi * (1.0 - pi)),
            (1, 1, pj * (1.0 - pj)),
            (2, 2, wij),
            (2, 0, wij * (1.0 - pi) / (1.0 - q)),
            (2, 1, wij * (1.0 - pj) / (1.0 - q)),
        ];
        for (bi, bj, w) in blocks {
            for r in 0..d {
                for c in 0..d {
                    a[(bi * d + r, bj * d + c)] += w * z[r] * z[c];
                }
            }
        }
        for (k, res) in residuals.iter().enumerate() {
            for r in 0..d {
                psi[k * d + r] = res * z[r];
            }
        }
        b += &psi * psi.transpose();
    }
    let a_inv = a.try_inverse().ok_or(Error::SingularInformation)?;
    let cov = &a_inv * b * a_inv.transpose();
    if cov.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularInformation);
    }
    Ok(cov)
}

/// Runs both stages and returns every stage's fit together with the offsets.
pub fn fit_stages(data: &PairDataset) -> Result<(StagedParams, [FitResult; 3])> {
    data.check_label_variation()?;
    let x = data.x();
    let y1 = data.y1();
    let y2 = data.y2();
    let joint: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| a * b).collect();
    if joint.iter().all(|v| *v == 0.0) || joint.iter().all(|v| *v == 1.0) {
        return Err(Error::ClassDegeneracy(
            "joint indicator y1*y2 takes a single value".into(),
        ));
    }
    let zeros = vec![0.0; x.len()];
    let fit_i = fit_logistic(&y1, &x, &zeros)?;
    let fit_j = fit_logistic(&y2, &x, &zeros)?;
    let stage1_i = [fit_i.coeffs[0], fit_i.coeffs[1]];
    let stage1_j = [fit_j.coeffs[0], fit_j.coeffs[1]];
    let offsets = staged_offsets(stage1_i, stage1_j, &x)?;
    let fit_ij = fit_logistic(&joint, &x, &offsets)?;
    let params = StagedParams {
        stage1_i,
        stage1_j,
        stage2: [fit_ij.coeffs[0], fit_ij.coeffs[1]],
        offsets,
    };
    Ok((params, [fit_i, fit_j, fit_ij]))
}

/// Fits the staged model. The reported log-likelihood is that of stage 2.
pub fn fit_staged(data: &PairDataset) -> Result<ModelFit> {
    let (params, [fit_i, fit_j, fit_ij]) = fit_stages(data)?;
    let cov = two_step_covariance(&params, data)?;
    let d = cov.nrows() / 3;
    let mut stage2_se = [f64::NAN; 2];
    for (k, se) in stage2_se.iter_mut().enumerate().take(d) {
        let var = cov[(2 * d + k, 2 * d + k)];
        if var.is_nan() || var <= 0.0 {
            return Err(Error::SingularInformation);
        }
        *se = var.sqrt();
    }
    let combined = FitResult::new(
        [&fit_i, &fit_j, &fit_ij]
            .iter()
            .flat_map(|f| f.coeffs.clone())
            .collect(),
        [&fit_i.std_errors[..], &fit_j.std_errors[..], &stage2_se[..]].concat(),
        fit_ij.log_likelihood,
        true,
        fit_i.iterations + fit_j.iterations + fit_ij.iterations,
    );
    Ok(ModelFit::from_result(
        ModelKind::Staged,
        COEFF_NAMES,
        &combined,
    ))
}
