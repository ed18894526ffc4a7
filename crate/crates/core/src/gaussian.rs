//! Standard normal numerics and the Normal-copula bridge between the
//! Bernoulli covariance `rho` of a label pair and the latent correlation `tau`.
//!
//! The bivariate upper orthant probability is evaluated from the reduction
//! `dP(Z1 > h, Z2 > k; r)/dr = phi2(h, k; r)`, integrated over the correlation
//! after the substitution `r = sin(theta)`, which removes the
//! `1/sqrt(1 - r^2)` singularity of the density:
//!
//! ```text
//! P(Z1 > h, Z2 > k; tau) = Q(h) Q(k)
//!     + 1/(2 pi) * int_0^asin(tau) exp(-(h^2 - 2 h k sin t + k^2) / (2 cos^2 t)) dt
//! ```
//!
//! The integral is computed with composite Gauss-Legendre quadrature whose
//! panel count doubles until two successive estimates agree to 1e-12.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::joint_dist::{from_marginals_cov, MarginalsCov};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Means and correlation of the latent bivariate Normal behind a label pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopulaParams {
    pub mu1: f64,
    pub mu2: f64,
    pub tau: f64,
}

impl CopulaParams {
    pub fn new(mu1: f64, mu2: f64, tau: f64) -> Result<Self> {
        if tau.is_nan() || tau.abs() >= 1.0 {
            return Err(Error::OutOfRange(format!(
                "latent correlation {tau} not in (-1, 1)"
            )));
        }
        Ok(Self { mu1, mu2, tau })
    }

    /// The copula matching marginals `p1`, `p2` at latent correlation `tau`.
    pub fn from_marginals(p1: f64, p2: f64, tau: f64) -> Result<Self> {
        Self::new(std_normal_quantile(p1)?, std_normal_quantile(p2)?, tau)
    }

    /// `P(N1 > 0, N2 > 0)` for `N ~ Normal(mu, [[1, tau], [tau, 1]])`.
    pub fn p11(&self) -> f64 {
        bivariate_normal_upper(-self.mu1, -self.mu2, self.tau)
    }
}

pub fn std_normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Upper tail `Q(z) = 1 - Phi(z)` for `z >= 3` by Lentz evaluation of the
/// Laplace continued fraction for the Mills ratio.
fn upper_tail_cf(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    // Q(z) = phi(z) / (z + 1/(z + 2/(z + 3/(z + ...))))
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for n in 1..1000 {
        let a = n as f64;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    std_normal_pdf(z) / f
}

/// `sum_n z^(2n+1) / (1*3*...*(2n+1))`, so that `Phi(z) = 1/2 + phi(z) * series`.
fn cdf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut k = 1.0;
    loop {
        k += 2.0;
        term *= z2 / k;
        let next = sum + term;
        if next == sum {
            return sum;
        }
        sum = next;
    }
}

/// Standard normal CDF with absolute error below 1e-15 and relative accuracy
/// in both tails.
pub fn std_normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z >= 3.0 {
        if z > 40.0 {
            return 1.0;
        }
        1.0 - upper_tail_cf(z)
    } else if z <= -3.0 {
        if z < -40.0 {
            return 0.0;
        }
        upper_tail_cf(-z)
    } else {
        0.5 + std_normal_pdf(z) * cdf_series(z)
    }
}

/// `1 - Phi(z)` without cancellation in the upper tail.
pub fn std_normal_sf(z: f64) -> f64 {
    std_normal_cdf(-z)
}

// Acklam's rational approximation, used as the starting point for Newton refinement.
const QA: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383_577_518_672_69e2,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const QB: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const QC: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const QD: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];

fn quantile_initial(p: f64) -> f64 {
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((QC[0] * q + QC[1]) * q + QC[2]) * q + QC[3]) * q + QC[4]) * q + QC[5])
            / ((((QD[0] * q + QD[1]) * q + QD[2]) * q + QD[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((QA[0] * r + QA[1]) * r + QA[2]) * r + QA[3]) * r + QA[4]) * r + QA[5]) * q
            / (((((QB[0] * r + QB[1]) * r + QB[2]) * r + QB[3]) * r + QB[4]) * r + 1.0)
    }
}

/// Probit: the standard normal quantile.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange(format!(
            "quantile probability {p} not in (0, 1)"
        )));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    // Work in the lower tail, where p is represented exactly.
    let (lower, sign) = if p > 0.5 { (1.0 - p, -1.0) } else { (p, 1.0) };
    let mut x = quantile_initial(lower);
    for _ in 0..2 {
        let err = std_normal_cdf(x) - lower;
        x -= err / std_normal_pdf(x);
    }
    Ok(sign * x)
}

const GL_NODES: usize = 32;

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
fn gauss_legendre() -> &'static ([f64; GL_NODES], [f64; GL_NODES]) {
    static RULE: OnceLock<([f64; GL_NODES], [f64; GL_NODES])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_NODES;
        let mut nodes = [0.0; GL_NODES];
        let mut weights = [0.0; GL_NODES];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

fn composite_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            s += w * f(mid + half * x);
        }
        total += s * half;
    }
    total
}

/// `P(Z1 > h, Z2 > k; tau) - Q(h) Q(k)`: the covariance between the two
/// quadrant indicators induced by latent correlation `tau`.
pub fn bivariate_normal_excess(h: f64, k: f64, tau: f64) -> f64 {
    if tau == 0.0 {
        return 0.0;
    }
    let upper = tau.clamp(-1.0, 1.0).asin();
    let hk = h * k;
    let ss = 0.5 * (h * h + k * k);
    let integrand = |t: f64| {
        let (s, c) = t.sin_cos();
        ((hk * s - ss) / (c * c)).exp()
    };
    let mut panels = 1;
    let mut estimate = composite_gl(integrand, 0.0, upper, panels);
    while panels < 256 {
        panels *= 2;
        let refined = composite_gl(integrand, 0.0, upper, panels);
        let converged = (refined - estimate).abs() < 1e-12;
        estimate = refined;
        if converged {
            break;
        }
    }
    estimate / (2.0 * PI)
}

/// `P(Z1 > h, Z2 > k)` for a standard bivariate Normal with correlation `tau`.
pub fn bivariate_normal_upper(h: f64, k: f64, tau: f64) -> f64 {
    let qh = std_normal_sf(h);
    let qk = std_normal_sf(k);
    let p = qh * qk + bivariate_normal_excess(h, k, tau);
    // Frechet bounds
    p.clamp((qh + qk - 1.0).max(0.0), qh.min(qk))
}

/// Bernoulli covariance of the label pair induced by a Normal copula with
/// marginals `p1`, `p2` and latent correlation `tau`.
pub fn rho_from_tau(p1: f64, p2: f64, tau: f64) -> Result<f64> {
    if tau.is_nan() || tau.abs() >= 1.0 {
        return Err(Error::OutOfRange(format!(
            "latent correlation {tau} not in (-1, 1)"
        )));
    }
    let h = -std_normal_quantile(p1)?;
    let k = -std_normal_quantile(p2)?;
    Ok(bivariate_normal_excess(h, k, tau))
}

const TAU_BRACKET: f64 = 1.0 - 1e-9;

/// Latent correlation reproducing Bernoulli covariance `rho`, by bisection.
pub fn tau_from_rho(p1: f64, p2: f64, rho: f64) -> Result<f64> {
    let infeasible = || Error::InfeasibleRho { p1, p2, rho };
    if !(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0) {
        return Err(infeasible());
    }
    from_marginals_cov(MarginalsCov { p1, p2, rho }).map_err(|_| infeasible())?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    let h = -std_normal_quantile(p1)?;
    let k = -std_normal_quantile(p2)?;
    let residual = |tau: f64| bivariate_normal_excess(h, k, tau) - rho;

    let (mut lo, mut hi) = if rho > 0.0 {
        (0.0, TAU_BRACKET)
    } else {
        (-TAU_BRACKET, 0.0)
    };
    let (r_lo, r_hi) = (residual(lo), residual(hi));
    if r_lo > 0.0 || r_hi < 0.0 {
        return Err(infeasible());
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let r = residual(mid);
        if r == 0.0 || hi - lo < 1e-15 {
            break;
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// One point of a `tau` versus `p2` curve at fixed `p1` and `rho`.
#[derive(Debug)]
pub struct TauPoint {
    pub p2: f64,
    pub tau: Result<f64>,
}

/// Latent correlation required to hold `rho` fixed as `p2` moves over a grid.
pub fn tau_curve(p1: f64, rho: f64, p2_grid: &[f64]) -> Vec<TauPoint> {
    p2_grid
        .iter()
        .map(|&p2| TauPoint {
            p2,
            tau: tau_from_rho(p1, p2, rho),
        })
        .collect()
}

/// Evenly spaced grid `start, start + step, ...` up to and including `stop`
/// (within a small tolerance).
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(Error::OutOfRange(format!(
            "invalid grid {start}:{stop}:{step}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// All four quadrant probabilities in `00, 01, 10, 11` order, where `1` marks
/// the upper side (`Z1 > h`, `Z2 > k`).
pub fn quadrant_probs(h: f64, k: f64, tau: f64) -> [f64; 4] {
    let qh = std_normal_sf(h);
    let qk = std_normal_sf(k);
    let p11 = bivariate_normal_upper(h, k, tau);
    let p10 = (qh - p11).max(0.0);
    let p01 = (qk - p11).max(0.0);
    let p00 = (1.0 - qh - qk + p11).max(0.0);
    [p00, p01, p10, p11]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Phi by composite Simpson quadrature of the density from 0 to z.
    fn cdf_by_quadrature(z: f64) -> f64 {
        let n = 20_000;
        let h = z / n as f64;
        let mut s = std_normal_pdf(0.0) + std_normal_pdf(z);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * std_normal_pdf(i as f64 * h);
        }
        0.5 + s * h / 3.0
    }

    /// `P(Z1 > h, Z2 > k)` by conditioning on Z1 and integrating over it.
    fn upper_by_conditioning(h: f64, k: f64, tau: f64) -> f64 {
        let sd = (1.0 - tau * tau).sqrt();
        let upper = h.max(-12.0) + 24.0;
        let a = h.max(-12.0);
        let n = 40_000;
        let step = (upper - a) / n as f64;
        let f = |z: f64| std_normal_pdf(z) * std_normal_sf((k - tau * z) / sd);
        let mut s = f(a) + f(upper);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * step);
        }
        s * step / 3.0
    }

    #[test]
    fn cdf_reference_values() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        // frozen from a 40-digit evaluation
        assert!((std_normal_cdf(1.959964) - 0.975_000_000_903_557_6).abs() < 1e-13);
        assert!((std_normal_cdf(-3.0) - 0.001_349_898_031_630_094_5).abs() < 1e-15);
        assert!((std_normal_cdf(2.5) - 0.993_790_334_674_224).abs() < 1e-14);
        assert!((std_normal_cdf(-5.5) / 1.898_956_246_588_771_9e-8 - 1.0).abs() < 1e-12);
        let far = std_normal_cdf(-8.0);
        assert!(far < 1e-14);
        assert!((far / 6.220_960_574_271_784e-16 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cdf_matches_density_quadrature() {
        for i in -60..=60 {
            let z = i as f64 * 0.1;
            assert!(
                (std_normal_cdf(z) - cdf_by_quadrature(z)).abs() < 1e-12,
                "z = {z}"
            );
        }
    }

    #[test]
    fn quantile_reference_values() {
        assert_eq!(std_normal_quantile(0.5).unwrap(), 0.0);
        let q = std_normal_quantile(0.3).unwrap();
        assert!((q - (-0.524_400_512_708_040_8)).abs() < 1e-12);
        assert!((q - (-0.5244)).abs() < 1e-3);
        let q = std_normal_quantile(0.975).unwrap();
        assert!((q - 1.959_963_984_540_054).abs() < 1e-12);
    }

    #[test]
    fn quantile_by_bisection_oracle() {
        let bisect = |p: f64| {
            let (mut lo, mut hi) = (-40.0, 40.0);
            for _ in 0..200 {
                let mid: f64 = 0.5 * (lo + hi);
                if std_normal_cdf(mid) < p {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        for &p in &[0.975, 0.3, 0.01, 1e-6, 0.999] {
            assert!(
                (std_normal_quantile(p).unwrap() - bisect(p)).abs() < 1e-9,
                "p = {p}"
            );
        }
    }

    #[test]
    fn quantile_rejects_boundary() {
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn bivariate_reference_values() {
        assert!((bivariate_normal_upper(0.0, 0.0, 0.0) - 0.25).abs() < 1e-15);
        let closed = 0.25 + 0.5f64.asin() / (2.0 * PI);
        assert!((bivariate_normal_upper(0.0, 0.0, 0.5) - closed).abs() < 1e-9);
        assert!((bivariate_normal_upper(0.0, 0.0, 0.5) - 1.0 / 3.0).abs() < 1e-9);
        let p = bivariate_normal_upper(0.0, 0.5244, 0.6164);
        assert!((p - 0.24).abs() < 1e-3);
        assert!((p - 0.239_916_090_606_541_4).abs() < 1e-12);
        // frozen from 40-digit quadrature
        for &(h, k, t, want) in &[
            (1.3, -0.7, -0.45, 0.044_384_179_520_381_025),
            (-2.1, -1.4, 0.85, 0.917_114_186_388_397_2),
            (2.5, 2.5, 0.95, 0.004_046_561_003_768_838),
        ] {
            assert!(
                (bivariate_normal_upper(h, k, t) - want).abs() < 1e-12,
                "({h}, {k}, {t})"
            );
        }
    }

    #[test]
    fn independence_factorises() {
        for &(h, k) in &[(0.3, -1.2), (2.0, 0.1), (-0.5, -0.5)] {
            let want = std_normal_sf(h) * std_normal_sf(k);
            assert!((bivariate_normal_upper(h, k, 0.0) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn copula_worked_values() {
        assert!((rho_from_tau(0.5, 0.3, 0.6164).unwrap() - 0.09).abs() < 1e-3);
        assert!((rho_from_tau(0.5, 0.5, 0.5358).unwrap() - 0.09).abs() < 1e-3);
        for &(p1, p2) in &[(0.5, 0.3), (0.2, 0.8), (0.9, 0.1)] {
            assert_eq!(rho_from_tau(p1, p2, 0.0).unwrap(), 0.0);
        }

        let t0 = tau_from_rho(0.5, 0.3, 0.09).unwrap();
        let t1 = tau_from_rho(0.5, 0.5, 0.09).unwrap();
        assert!((t0 - 0.6164).abs() < 1e-3, "{t0}");
        assert!((t1 - 0.5358).abs() < 1e-3, "{t1}");
        // frozen from a 40-digit root solve
        assert!((t0 - 0.616_918_866_487_705_8).abs() < 1e-9);
        assert!((t1 - 0.535_826_794_978_996_6).abs() < 1e-9);
        assert_eq!(tau_from_rho(0.5, 0.7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn tau_from_rho_rejects_infeasible() {
        assert!(matches!(
            tau_from_rho(0.5, 0.5, 0.3),
            Err(Error::InfeasibleRho { .. })
        ));
        assert!(matches!(
            tau_from_rho(0.5, 0.3, -0.2),
            Err(Error::InfeasibleRho { .. })
        ));
        // feasible per the table but only reachable at |tau| = 1
        assert!(tau_from_rho(0.5, 0.5, 0.25).is_err());
    }

    #[test]
    fn tau_curves() {
        let c = tau_curve(0.5, 0.04, &[0.5]);
        assert_eq!(
            c[0].tau.as_ref().unwrap(),
            &tau_from_rho(0.5, 0.5, 0.04).unwrap()
        );

        let c = tau_curve(0.5, 0.09, &[0.3, 0.5]);
        assert!((c[0].tau.as_ref().unwrap() - 0.6164).abs() < 1e-3);
        assert!((c[1].tau.as_ref().unwrap() - 0.5358).abs() < 1e-3);

        let g = grid(0.3, 0.7, 0.1).unwrap();
        assert_eq!(g.len(), 5);
        for pt in tau_curve(0.5, 0.0, &g) {
            assert_eq!(pt.tau.unwrap(), 0.0);
        }

        // constant rho, moving p2: tau moves
        let c = tau_curve(0.5, 0.04, &[0.3, 0.5]);
        let (a, b) = (c[0].tau.as_ref().unwrap(), c[1].tau.as_ref().unwrap());
        assert!((a - b).abs() > 1e-3, "{a} vs {b}");
    }

    #[test]
    fn tau_curve_propagates_infeasible_points() {
        let c = tau_curve(0.5, 0.2, &[0.3, 0.5]);
        assert!(c[0].tau.is_err());
        assert!(c[1].tau.is_ok());
    }

    #[test]
    fn quadrant_identity() {
        for &(h, k, t) in &[
            (0.4, -0.9, 0.3),
            (-1.1, 0.2, -0.7),
            (1.5, 1.5, 0.9),
            (0.0, 0.0, -0.2),
        ] {
            let total = bivariate_normal_upper(h, k, t)
                + bivariate_normal_upper(h, -k, -t)
                + bivariate_normal_upper(-h, k, -t)
                + bivariate_normal_upper(-h, -k, t);
            assert!((total - 1.0).abs() < 1e-9, "({h}, {k}, {t}) -> {total}");
            let q = quadrant_probs(h, k, t);
            assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((q[2] - bivariate_normal_upper(h, -k, -t)).abs() < 1e-10);
        }
    }

    #[test]
    fn copula_round_trip_grid() {
        for i in 1..=9 {
            for j in 1..=9 {
                let (p1, p2) = (i as f64 / 10.0, j as f64 / 10.0);
                for t in -9..=9 {
                    let tau = t as f64 / 10.0;
                    let rho = rho_from_tau(p1, p2, tau).unwrap();
                    let back = tau_from_rho(p1, p2, rho).unwrap();
                    assert!((back - tau).abs() <= 1e-6, "({p1}, {p2}, {tau}) -> {back}");
                }
            }
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let exact = 2.0 / 31.0; // int_{-1}^{1} x^30
        assert!((composite_gl(|x| x.powi(30), -1.0, 1.0, 1) - exact).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn quantile_round_trip(p in 1e-8..(1.0 - 1e-8)) {
            let x = std_normal_quantile(p).unwrap();
            prop_assert!((std_normal_cdf(x) - p).abs() <= 1e-10);
        }

        #[test]
        fn cdf_symmetry(z in -10.0..10.0f64) {
            prop_assert!((std_normal_cdf(-z) - (1.0 - std_normal_cdf(z))).abs() < 1e-15);
        }

        #[test]
        fn bivariate_matches_conditioning_oracle(h in -3.0..3.0f64, k in -3.0..3.0f64, t in -0.95..0.95f64) {
            let got = bivariate_normal_upper(h, k, t);
            let want = upper_by_conditioning(h, k, t);
            prop_assert!((got - want).abs() < 1e-10, "{} vs {}", got, want);
        }

        #[test]
        fn rho_increasing_in_tau(p1 in 0.05..0.95f64, p2 in 0.05..0.95f64, a in -0.95..0.95f64, b in -0.95..0.95f64) {
            prop_assume!((a - b).abs() > 1e-6);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(rho_from_tau(p1, p2, lo).unwrap() < rho_from_tau(p1, p2, hi).unwrap());
        }
    }
}
