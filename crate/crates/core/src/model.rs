//! Model identifiers and the fit record shared by all three models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::datagen::PairDataset;
use crate::error::{Error, Result};
use crate::mle::{wald_test, FitResult, WaldDecision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Probit,
    Bernoulli,
    Staged,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Probit, ModelKind::Bernoulli, ModelKind::Staged];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Probit => "probit",
            ModelKind::Bernoulli => "bernoulli",
            ModelKind::Staged => "staged",
        }
    }

    pub fn title(&self) -> &'static str {
        match self {
            ModelKind::Probit => "Multivariate Probit",
            ModelKind::Bernoulli => "Multivariate Bernoulli",
            ModelKind::Staged => "Staged Logit",
        }
    }

    pub fn fit(&self, data: &PairDataset) -> Result<ModelFit> {
        match self {
            ModelKind::Probit => crate::probit::fit_probit(data),
            ModelKind::Bernoulli => crate::bernoulli::fit_bernoulli(data),
            ModelKind::Staged => crate::staged::fit_staged(data),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "probit" => Ok(ModelKind::Probit),
            "bernoulli" => Ok(ModelKind::Bernoulli),
            "staged" | "staged-logit" => Ok(ModelKind::Staged),
            other => Err(Error::OutOfRange(format!("unknown model `{other}`"))),
        }
    }
}

/// Covariance coefficient of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CovCoeff {
    /// Constant covariance term.
    Beta0,
    /// Covariate-dependent covariance term.
    Beta1,
}

impl CovCoeff {
    pub const BOTH: [CovCoeff; 2] = [CovCoeff::Beta0, CovCoeff::Beta1];

    pub fn as_str(&self) -> &'static str {
        match self {
            CovCoeff::Beta0 => "beta0",
            CovCoeff::Beta1 => "beta1",
        }
    }
}

impl fmt::Display for CovCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub z: f64,
    pub p_value: f64,
}

/// A fitted model: two marginal coefficient pairs and one covariance pair,
/// always in the order `(m1_0, m1_1, m2_0, m2_1, beta0, beta1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub model: ModelKind,
    pub coefficients: Vec<Coefficient>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl ModelFit {
    pub(crate) fn from_result(model: ModelKind, names: [&str; 6], result: &FitResult) -> Self {
        let coefficients = names
            .iter()
            .enumerate()
            .map(|(i, name)| Coefficient {
                name: (*name).to_string(),
                estimate: result.coeffs[i],
                std_error: result.std_errors[i],
                z: result.z_scores[i],
                p_value: result.p_values[i],
            })
            .collect();
        Self {
            model,
            coefficients,
            log_likelihood: result.log_likelihood,
            converged: result.converged,
            iterations: result.iterations,
        }
    }

    fn cov_index(c: CovCoeff) -> usize {
        match c {
            CovCoeff::Beta0 => 4,
            CovCoeff::Beta1 => 5,
        }
    }

    pub fn coefficient(&self, c: CovCoeff) -> &Coefficient {
        &self.coefficients[Self::cov_index(c)]
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.estimate).collect()
    }

    pub fn as_fit_result(&self) -> FitResult {
        FitResult {
            coeffs: self.estimates(),
            std_errors: self.coefficients.iter().map(|c| c.std_error).collect(),
            z_scores: self.coefficients.iter().map(|c| c.z).collect(),
            p_values: self.coefficients.iter().map(|c| c.p_value).collect(),
            log_likelihood: self.log_likelihood,
            converged: self.converged,
            iterations: self.iterations,
        }
    }

    pub fn wald(&self, c: CovCoeff, alpha: f64) -> WaldDecision {
        wald_test(&self.as_fit_result(), Self::cov_index(c), alpha)
    }
}
