//! Exact algebra of a pair of Bernoulli labels.
//!
//! A label pair is summarised either by its 2x2 cell table or, equivalently,
//! by its two marginals and the Bernoulli covariance `rho = p11 - p1 * p2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cells within this distance outside `[0, 1]` are clamped rather than rejected.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// The 2x2 joint table of a label pair, `p<y1><y2>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointDist22 {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

/// Marginals `P(Y1 = 1)`, `P(Y2 = 1)` and the Bernoulli covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalsCov {
    pub p1: f64,
    pub p2: f64,
    pub rho: f64,
}

fn check_cell(cell: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || !(-FEASIBILITY_TOL..=1.0 + FEASIBILITY_TOL).contains(&value) {
        return Err(Error::InfeasibleParameters { cell, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidProbability { name, value });
    }
    Ok(value)
}

impl JointDist22 {
    /// Builds a table from cells in `(p00, p01, p10, p11)` order, validating
    /// range and normalisation.
    pub fn new(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        let d = Self {
            p00: check_cell("p00", p00)?,
            p01: check_cell("p01", p01)?,
            p10: check_cell("p10", p10)?,
            p11: check_cell("p11", p11)?,
        };
        let total = d.p00 + d.p01 + d.p10 + d.p11;
        if (total - 1.0).abs() > FEASIBILITY_TOL {
            return Err(Error::OutOfRange(format!(
                "cells sum to {total}, expected 1"
            )));
        }
        Ok(d)
    }

    pub fn uniform() -> Self {
        Self {
            p00: 0.25,
            p01: 0.25,
            p10: 0.25,
            p11: 0.25,
        }
    }

    /// Cells in the fixed order `00, 01, 10, 11`.
    pub fn cells(&self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }

    pub fn from_cells(cells: [f64; 4]) -> Result<Self> {
        Self::new(cells[0], cells[1], cells[2], cells[3])
    }

    pub fn p1(&self) -> f64 {
        self.p10 + self.p11
    }

    pub fn p2(&self) -> f64 {
        self.p01 + self.p11
    }

    pub fn rho(&self) -> f64 {
        self.p11 - self.p1() * self.p2()
    }

    pub fn to_marginals_cov(&self) -> MarginalsCov {
        to_marginals_cov(self)
    }

    pub fn log_odds_ratio(&self) -> Result<f64> {
        log_odds_ratio(self)
    }
}

impl MarginalsCov {
    /// Validates the triple by building its induced table.
    pub fn new(p1: f64, p2: f64, rho: f64) -> Result<Self> {
        let m = Self { p1, p2, rho };
        from_marginals_cov(m)?;
        Ok(m)
    }

    /// Feasible covariance range `[lo, hi]` for the given marginals.
    pub fn rho_bounds(p1: f64, p2: f64) -> (f64, f64) {
        let lo = (-p1 * p2).max(-(1.0 - p1) * (1.0 - p2));
        let hi = (p1 * (1.0 - p2)).min(p2 * (1.0 - p1));
        (lo, hi)
    }
}

pub fn from_marginals_cov(m: MarginalsCov) -> Result<JointDist22> {
    let p1 = check_probability("p1", m.p1)?;
    let p2 = check_probability("p2", m.p2)?;
    if !m.rho.is_finite() {
        return Err(Error::InfeasibleParameters {
            cell: "p11",
            value: m.rho,
        });
    }
    let p11 = check_cell("p11", m.rho + p1 * p2)?;
    let p10 = check_cell("p10", p1 - p11)?;
    let p01 = check_cell("p01", p2 - p11)?;
    let p00 = check_cell("p00", 1.0 - p11 - p01 - p10)?;
    Ok(JointDist22 { p00, p01, p10, p11 })
}

pub fn to_marginals_cov(d: &JointDist22) -> MarginalsCov {
    MarginalsCov {
        p1: d.p1(),
        p2: d.p2(),
        rho: d.rho(),
    }
}

/// `log(p11 * p00 / (p01 * p10))`, the natural interaction parameter of the pair.
pub fn log_odds_ratio(d: &JointDist22) -> Result<f64> {
    for (cell, value) in [
        ("p00", d.p00),
        ("p01", d.p01),
        ("p10", d.p10),
        ("p11", d.p11),
    ] {
        if value <= 0.0 {
            return Err(Error::DegenerateCell { cell });
        }
    }
    Ok((d.p11.ln() + d.p00.ln()) - (d.p01.ln() + d.p10.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dep19_state0_table() {
        let d = from_marginals_cov(MarginalsCov {
            p1: 0.5,
            p2: 0.3,
            rho: 0.01,
        })
        .unwrap();
        assert!(close(d.p11, 0.16, 1e-12));
        assert!(close(d.p10, 0.34, 1e-12));
        assert!(close(d.p01, 0.14, 1e-12));
        assert!(close(d.p00, 0.36, 1e-12));
    }

    #[test]
    fn constant_covariance_state0_table() {
        let d = from_marginals_cov(MarginalsCov {
            p1: 0.5,
            p2: 0.3,
            rho: 0.09,
        })
        .unwrap();
        assert!(close(d.p11, 0.24, 1e-12));
        assert!(close(d.p10, 0.26, 1e-12));
        assert!(close(d.p01, 0.06, 1e-12));
        assert!(close(d.p00, 0.44, 1e-12));
    }

    #[test]
    fn independent_symmetric_table_is_uniform() {
        let d = from_marginals_cov(MarginalsCov {
            p1: 0.5,
            p2: 0.5,
            rho: 0.0,
        })
        .unwrap();
        assert_eq!(d, JointDist22::uniform());
    }

    #[test]
    fn inverse_conversions() {
        let m = to_marginals_cov(&JointDist22::new(0.36, 0.14, 0.34, 0.16).unwrap());
        assert!(close(m.p1, 0.5, 1e-12) && close(m.p2, 0.3, 1e-12) && close(m.rho, 0.01, 1e-12));

        let m = to_marginals_cov(&JointDist22::uniform());
        assert!(close(m.p1, 0.5, 1e-15) && close(m.p2, 0.5, 1e-15) && close(m.rho, 0.0, 1e-15));

        let m = to_marginals_cov(&JointDist22::new(0.44, 0.06, 0.26, 0.24).unwrap());
        assert!(close(m.p1, 0.5, 1e-12) && close(m.p2, 0.3, 1e-12) && close(m.rho, 0.09, 1e-12));
    }

    #[test]
    fn worked_log_odds_ratios() {
        let f0 = log_odds_ratio(&JointDist22::new(0.44, 0.06, 0.26, 0.24).unwrap()).unwrap();
        let f1 = log_odds_ratio(&JointDist22::new(0.34, 0.16, 0.16, 0.34).unwrap()).unwrap();
        assert!(close(f0, 1.912, 1e-3), "{f0}");
        assert!(close(f1, 1.507, 1e-3), "{f1}");
        let indep = log_odds_ratio(&JointDist22::new(0.35, 0.15, 0.35, 0.15).unwrap()).unwrap();
        assert!(indep.abs() < 1e-12);
    }

    #[test]
    fn zero_cell_is_degenerate() {
        let d = JointDist22::new(0.5, 0.0, 0.0, 0.5).unwrap();
        assert!(matches!(
            log_odds_ratio(&d),
            Err(Error::DegenerateCell { cell: "p01" })
        ));
    }

    #[test]
    fn infeasible_triple_names_the_cell() {
        // max rho for p1 = p2 = 0.5 is 0.25
        let err = from_marginals_cov(MarginalsCov {
            p1: 0.5,
            p2: 0.5,
            rho: 0.9,
        })
        .unwrap_err();
        assert!(
            matches!(err, Error::InfeasibleParameters { cell: "p11", .. }),
            "{err}"
        );
        let err = from_marginals_cov(MarginalsCov {
            p1: 0.5,
            p2: 0.3,
            rho: 0.2,
        })
        .unwrap_err();
        assert!(
            matches!(err, Error::InfeasibleParameters { cell: "p01", .. }),
            "{err}"
        );
        assert!(from_marginals_cov(MarginalsCov {
            p1: 1.2,
            p2: 0.3,
            rho: 0.0
        })
        .is_err());
    }

    #[test]
    fn unnormalised_table_rejected() {
        assert!(JointDist22::new(0.3, 0.3, 0.3, 0.3).is_err());
    }

    #[test]
    fn feasibility_boundary() {
        for &(p1, p2) in &[(0.5, 0.3), (0.2, 0.9), (0.7, 0.7), (0.1, 0.1)] {
            let (lo, hi) = MarginalsCov::rho_bounds(p1, p2);
            assert!(from_marginals_cov(MarginalsCov { p1, p2, rho: lo }).is_ok());
            assert!(from_marginals_cov(MarginalsCov { p1, p2, rho: hi }).is_ok());
            assert!(from_marginals_cov(MarginalsCov {
                p1,
                p2,
                rho: lo - 1e-9
            })
            .is_err());
            assert!(from_marginals_cov(MarginalsCov {
                p1,
                p2,
                rho: hi + 1e-9
            })
            .is_err());
        }
    }

    fn feasible_triple() -> impl Strategy<Value = MarginalsCov> {
        (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(p1, p2, t)| {
            let (lo, hi) = MarginalsCov::rho_bounds(p1, p2);
            MarginalsCov {
                p1,
                p2,
                rho: lo + t * (hi - lo),
            }
        })
    }

    proptest! {
        #[test]
        fn round_trip(m in feasible_triple()) {
            let back = to_marginals_cov(&from_marginals_cov(m).unwrap());
            prop_assert!(close(back.p1, m.p1, 1e-12));
            prop_assert!(close(back.p2, m.p2, 1e-12));
            prop_assert!(close(back.rho, m.rho, 1e-12));
        }

        #[test]
        fn zero_covariance_iff_zero_log_odds(p1 in 0.01..0.99f64, p2 in 0.01..0.99f64, t in 0.05..0.95f64) {
            let d = from_marginals_cov(MarginalsCov { p1, p2, rho: 0.0 }).unwrap();
            prop_assert!(log_odds_ratio(&d).unwrap().abs() < 1e-12);

            let (lo, hi) = MarginalsCov::rho_bounds(p1, p2);
            let rho = lo + t * (hi - lo);
            prop_assume!(rho.abs() > 1e-6);
            let d = from_marginals_cov(MarginalsCov { p1, p2, rho }).unwrap();
            let f = log_odds_ratio(&d).unwrap();
            prop_assert!(f.abs() > 1e-12);
            prop_assert_eq!(f > 0.0, rho > 0.0);
        }
    }
}
