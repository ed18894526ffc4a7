//! Multivariate Probit model of a label pair.
//!
//! Each label is the positive-side indicator of a latent unit-variance Normal
//! with mean `mu1 = gamma0 + gamma1 x` and `mu2 = delta0 + delta1 x`; the latent
//! correlation is linked through `log((1 + tau) / (1 - tau)) = beta0 + beta1 x`.
//! All six coefficients are estimated jointly by maximum likelihood over the
//! four cell probabilities.

use serde::{Deserialize, Serialize};

use crate::datagen::{CellCounts, PairDataset};
use crate::error::{Error, Result};
use crate::gaussian::{quadrant_probs, std_normal_quantile};
use crate::joint_dist::JointDist22;
use crate::mle::FitResult;
use crate::model::{ModelFit, ModelKind};

/// Floor applied to cell probabilities before taking logs inside the optimiser.
pub const CELL_FLOOR: f64 = 1e-300;

pub const COEFF_NAMES: [&str; 6] = ["gamma0", "gamma1", "delta0", "delta1", "beta0", "beta1"];

/// `log((1 + tau) / (1 - tau))`.
pub fn fisher_z(tau: f64) -> f64 {
    ((1.0 + tau) / (1.0 - tau)).ln()
}

/// Inverse of [`fisher_z`].
pub fn fisher_z_inv(eta: f64) -> f64 {
    (0.5 * eta).tanh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbitParams {
    pub gamma0: f64,
    pub gamma1: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub beta0: f64,
    pub beta1: f64,
}

impl ProbitParams {
    pub fn from_slice(v: &[f64]) -> Self {
        Self {
            gamma0: v[0],
            gamma1: v[1],
            delta0: v[2],
            delta1: v[3],
            beta0: v[4],
            beta1: v[5],
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.gamma0,
            self.gamma1,
            self.delta0,
            self.delta1,
            self.beta0,
            self.beta1,
        ]
    }

    pub fn mu1(&self, x: f64) -> f64 {
        self.gamma0 + self.gamma1 * x
    }

    pub fn mu2(&self, x: f64) -> f64 {
        self.delta0 + self.delta1 * x
    }

    pub fn tau(&self, x: f64) -> f64 {
        fisher_z_inv(self.beta0 + self.beta1 * x)
    }
}

fn cells(p: &ProbitParams, x: f64) -> [f64; 4] {
    quadrant_probs(-p.mu1(x), -p.mu2(x), p.tau(x))
}

/// Joint table of the labels at covariate value `x`.
pub fn probit_cell_probs(p: &ProbitParams, x: u8) -> JointDist22 {
    let [p00, p01, p10, p11] = cells(p, f64::from(x));
    JointDist22 { p00, p01, p10, p11 }
}

fn nll_counts(p: &ProbitParams, counts: &CellCounts, floor: f64) -> f64 {
    let mut total = 0.0;
    for x in 0..2 {
        let n = counts.state(x);
        if n.iter().all(|&c| c == 0) {
            continue;
        }
        let probs = cells(p, x as f64);
        for (c, prob) in n.iter().zip(probs) {
            if *c > 0 {
                total -= *c as f64 * prob.max(floor).ln();
            }
        }
    }
    total
}

/// Negative log-likelihood of the data; an error if an observed cell has
/// zero probability under `p`.
pub fn probit_nll(p: &ProbitParams, data: &PairDataset) -> Result<f64> {
    let v = nll_counts(p, &data.counts(), 0.0);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteObjective)
    }
}

/// Starting point: probit-transformed pooled marginals, everything else zero.
fn start(counts: &CellCounts) -> Result<Vec<f64>> {
    let total = counts.total() as f64;
    let (mut ones1, mut ones2) = (0u64, 0u64);
    for x in 0..2 {
        let s = counts.state(x);
        ones1 += s[2] + s[3];
        ones2 += s[1] + s[3];
    }
    Ok(vec![
        std_normal_quantile(ones1 as f64 / total)?,
        0.0,
        std_normal_quantile(ones2 as f64 / total)?,
        0.0,
        0.0,
        0.0,
    ])
}

pub fn fit_probit(data: &PairDataset) -> Result<ModelFit> {
    data.check_label_variation()?;
    let counts = data.counts();
    let nll = |v: &[f64]| nll_counts(&ProbitParams::from_slice(v), &counts, CELL_FLOOR);
    let result = FitResult::fit(nll, &start(&counts)?)?;
    Ok(ModelFit::from_result(
        ModelKind::Probit,
        COEFF_NAMES,
        &result,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{sample, ConfigName, GenParams, NamedConfig, Observation};
    use crate::gaussian::{std_normal_cdf, tau_from_rho};
    use crate::joint_dist::MarginalsCov;
    use crate::model::CovCoeff;

    fn params(mu1: f64, mu2: f64, tau: f64) -> ProbitParams {
        ProbitParams {
            gamma0: mu1,
            gamma1: 0.0,
            delta0: mu2,
            delta1: 0.0,
            beta0: fisher_z(tau),
            beta1: 0.0,
        }
    }

    /// Per-row sum of log cell probabilities.
    fn naive_nll(p: &ProbitParams, data: &PairDataset) -> f64 {
        data.rows()
            .iter()
            .map(|r| -probit_cell_probs(p, r.x).cells()[r.cell()].ln())
            .sum()
    }

    #[test]
    fn fisher_link_inverts() {
        for &t in &[-0.9, -0.3, 0.0, 0.5358, 0.6164] {
            assert!((fisher_z_inv(fisher_z(t)) - t).abs() < 1e-14);
        }
    }

    #[test]
    fn worked_cells() {
        let q = std_normal_quantile(0.3).unwrap();
        let d = probit_cell_probs(&params(0.0, q, 0.6164), 0);
        assert!((d.p11 - 0.24).abs() < 1e-3, "{d:?}");
        let d = probit_cell_probs(&params(0.0, 0.0, 0.5358), 0);
        assert!((d.p11 - 0.34).abs() < 1e-3, "{d:?}");
    }

    #[test]
    fn independence_factorises() {
        let d = probit_cell_probs(&params(0.4, -1.1, 0.0), 0);
        assert!((d.p11 - std_normal_cdf(0.4) * std_normal_cdf(-1.1)).abs() < 1e-15);
    }

    #[test]
    fn cells_sum_to_one() {
        for &(m1, m2, t) in &[
            (0.0, 0.0, 0.0),
            (2.5, -3.0, 0.95),
            (-1.0, 0.3, -0.8),
            (5.0, 5.0, 0.99),
        ] {
            let p = ProbitParams {
                gamma1: 0.7,
                delta1: -0.2,
                beta1: 0.4,
                ..params(m1, m2, t)
            };
            for x in 0..2 {
                let s: f64 = probit_cell_probs(&p, x).cells().iter().sum();
                assert!((s - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn single_row_likelihood() {
        let q = std_normal_quantile(0.3).unwrap();
        let p = params(0.0, q, tau_from_rho(0.5, 0.3, 0.09).unwrap());
        let data = PairDataset::new(vec![Observation { y1: 1, y2: 1, x: 0 }], None).unwrap();
        let nll = probit_nll(&p, &data).unwrap();
        assert!((nll - (-(0.24f64).ln())).abs() < 1e-9, "{nll}");
        assert!((nll - 1.4271).abs() < 1e-4);
    }

    #[test]
    fn likelihood_matches_per_row_oracle() {
        let g = NamedConfig::with_p2(ConfigName::Dep49, 0.6, 0.4)
            .gen_params(50)
            .unwrap();
        let data = sample(&g, 3).unwrap();
        for i in 0..5 {
            let t = i as f64 / 4.0;
            let p = ProbitParams {
                gamma0: -0.5 + t,
                gamma1: 0.3 * t,
                delta0: 0.2,
                delta1: -t,
                beta0: 1.0 - t,
                beta1: t,
            };
            let got = probit_nll(&p, &data).unwrap();
            let want = naive_nll(&p, &data);
            assert!(
                (got - want).abs() < 1e-12 * want.abs().max(1.0),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn entropy_at_matching_cells() {
        // independence model whose cells equal the empirical cells exactly
        let q = std_normal_quantile(0.25).unwrap();
        let p = params(q, q, 0.0);
        let rows: Vec<Observation> = [(0, 0, 9), (0, 1, 3), (1, 0, 3), (1, 1, 1)]
            .iter()
            .flat_map(|&(y1, y2, n)| std::iter::repeat_n(Observation { y1, y2, x: 0 }, n))
            .collect();
        let data = PairDataset::new(rows, None).unwrap();
        let cells = probit_cell_probs(&p, 0).cells();
        let entropy: f64 = -cells.iter().map(|c| c * c.ln()).sum::<f64>();
        assert!((probit_nll(&p, &data).unwrap() - 16.0 * entropy).abs() < 1e-9);
    }

    #[test]
    fn zero_probability_cell_is_non_finite() {
        let p = ProbitParams {
            beta0: 80.0,
            ..params(0.0, 0.0, 0.0)
        };
        let data = PairDataset::new(vec![Observation { y1: 1, y2: 0, x: 0 }], None).unwrap();
        assert!(matches!(
            probit_nll(&p, &data),
            Err(Error::NonFiniteObjective)
        ));
    }

    #[test]
    fn fit_requires_both_label_values() {
        let rows = vec![
            Observation { y1: 1, y2: 0, x: 0 },
            Observation { y1: 1, y2: 1, x: 1 },
        ];
        let data = PairDataset::new(rows, None).unwrap();
        assert!(matches!(fit_probit(&data), Err(Error::ClassDegeneracy(_))));
    }

    /// Closed-form MLE of the saturated two-state design.
    fn saturated_oracle(counts: &CellCounts) -> Vec<f64> {
        let state = |x| {
            let d = counts.joint(x).unwrap();
            let m = d.to_marginals_cov();
            (
                std_normal_quantile(m.p1).unwrap(),
                std_normal_quantile(m.p2).unwrap(),
                fisher_z(tau_from_rho(m.p1, m.p2, m.rho).unwrap()),
            )
        };
        let (a0, b0, z0) = state(0);
        let (a1, b1, z1) = state(1);
        vec![a0, a1 - a0, b0, b1 - b0, z0, z1 - z0]
    }

    #[test]
    fn fit_recovers_saturated_oracle() {
        let g = NamedConfig::with_p2(ConfigName::Dep41, 0.7, 0.4)
            .gen_params(2000)
            .unwrap();
        let data = sample(&g, 21).unwrap();
        let fit = fit_probit(&data).unwrap();
        let want = saturated_oracle(&data.counts());
        for (got, want) in fit.estimates().iter().zip(&want) {
            assert!(
                (got - want).abs() < 1e-4,
                "{:?} vs {want:?}",
                fit.estimates()
            );
        }
        for x in 0..2u8 {
            let fitted = probit_cell_probs(&ProbitParams::from_slice(&fit.estimates()), x);
            let empirical = data.counts().joint(usize::from(x)).unwrap();
            for (a, b) in fitted.cells().iter().zip(empirical.cells()) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn constant_covariance_shows_up_as_moving_tau() {
        let s0 = MarginalsCov {
            p1: 0.5,
            p2: 0.3,
            rho: 0.09,
        };
        let s1 = MarginalsCov {
            p1: 0.5,
            p2: 0.5,
            rho: 0.09,
        };
        let g = GenParams::from_states(s0, s1, 100_000).unwrap();
        let fit = fit_probit(&sample(&g, 1).unwrap()).unwrap();
        let b0 = fit.coefficient(CovCoeff::Beta0).estimate;
        let b1 = fit.coefficient(CovCoeff::Beta1).estimate;
        assert!((b0 - fisher_z(0.6164)).abs() < 0.05, "{b0}");
        assert!((b0 + b1 - fisher_z(0.5358)).abs() < 0.05, "{}", b0 + b1);
        assert!(b1 < 0.0);
    }

    #[test]
    fn null_recovery() {
        let g = NamedConfig::with_p2(ConfigName::Zero, 0.4, 0.6)
            .gen_params(50_000)
            .unwrap();
        let fit = fit_probit(&sample(&g, 8).unwrap()).unwrap();
        for c in CovCoeff::BOTH {
            let coef = fit.coefficient(c);
            assert!(coef.estimate.abs() < 3.0 * coef.std_error, "{coef:?}");
        }
    }

    #[test]
    fn large_sample_cells_match_generating_tables() {
        let g = NamedConfig::with_p2(ConfigName::Dep19, 0.3, 0.7)
            .gen_params(1_000_000)
            .unwrap();
        let fit = fit_probit(&sample(&g, 2).unwrap()).unwrap();
        let p = ProbitParams::from_slice(&fit.estimates());
        for x in 0..2u8 {
            let truth = crate::datagen::state_joint(&g, x).unwrap();
            for (a, b) in probit_cell_probs(&p, x).cells().iter().zip(truth.cells()) {
                assert!((a - b).abs() < 0.005);
            }
        }
    }

    #[test]
    fn marginal_means_track_empirical_marginals() {
        let g = NamedConfig::with_p2(ConfigName::Const9, 0.3, 0.6)
            .gen_params(5000)
            .unwrap();
        let data = sample(&g, 4).unwrap();
        let fit = fit_probit(&data).unwrap();
        let p = ProbitParams::from_slice(&fit.estimates());
        let counts = data.counts();
        for x in 0..2 {
            let emp = counts.joint(x).unwrap().p1();
            let se = (emp * (1.0 - emp) / counts.n(x) as f64).sqrt();
            assert!((std_normal_cdf(p.mu1(x as f64)) - emp).abs() < 3.0 * se);
        }
    }
}
