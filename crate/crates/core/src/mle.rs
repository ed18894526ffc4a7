//! Maximum-likelihood machinery shared by the three models: a BFGS minimiser
//! driven by central-difference gradients, a central-difference Hessian for
//! observed-information standard errors, and Wald z-tests.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::std_normal_sf;

/// Significance level of every Wald test in the experiments.
pub const DEFAULT_ALPHA: f64 = 0.05;

const PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    pub max_iterations: usize,
    /// Absolute gradient-norm tolerance.
    pub grad_tol: f64,
    /// Once a line search can no longer lower the objective beyond rounding,
    /// a gradient norm below `stall_tol * (1 + |f|)` is accepted as converged:
    /// smaller gradients promise decreases below the objective's resolution.
    pub stall_tol: f64,
    /// Longest step tried by the line search.
    pub max_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            grad_tol: 1e-6,
            stall_tol: 1e-7,
            max_step: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub grad_norm: f64,
}

fn gradient_step(v: f64) -> f64 {
    1e-6 * (1.0 + v.abs())
}

fn hessian_step(v: f64) -> f64 {
    1e-4 * (1.0 + v.abs())
}

/// Central-difference gradient.
pub fn gradient<F: Fn(&[f64]) -> f64>(f: &F, at: &[f64]) -> Vec<f64> {
    let mut x = at.to_vec();
    (0..at.len())
        .map(|k| {
            let h = gradient_step(at[k]);
            x[k] = at[k] + h;
            let up = f(&x);
            x[k] = at[k] - h;
            let down = f(&x);
            x[k] = at[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// One central-difference second partial derivative.
pub fn hessian_entry<F: Fn(&[f64]) -> f64>(f: &F, at: &[f64], i: usize, j: usize) -> f64 {
    let mut x = at.to_vec();
    let hi = hessian_step(at[i]);
    if i == j {
        let f0 = f(at);
        x[i] = at[i] + hi;
        let up = f(&x);
        x[i] = at[i] - hi;
        let down = f(&x);
        return (up - 2.0 * f0 + down) / (hi * hi);
    }
    let hj = hessian_step(at[j]);
    let mut eval = |si: f64, sj: f64| {
        x[i] = at[i] + si * hi;
        x[j] = at[j] + sj * hj;
        f(&x)
    };
    let (pp, pm, mp, mm) = (
        eval(1.0, 1.0),
        eval(1.0, -1.0),
        eval(-1.0, 1.0),
        eval(-1.0, -1.0),
    );
    (pp - pm - mp + mm) / (4.0 * hi * hj)
}

/// Central-difference Hessian; the upper triangle is mirrored.
pub fn hessian<F: Fn(&[f64]) -> f64>(f: &F, at: &[f64]) -> DMatrix<f64> {
    let n = at.len();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = hessian_entry(f, at, i, j);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn minimize<F: Fn(&[f64]) -> f64>(nll: F, start: &[f64]) -> Result<Minimum> {
    minimize_with(nll, start, &MinimizeOptions::default())
}

/// BFGS with an Armijo backtracking line search.
pub fn minimize_with<F: Fn(&[f64]) -> f64>(
    nll: F,
    start: &[f64],
    opts: &MinimizeOptions,
) -> Result<Minimum> {
    let n = start.len();
    let mut x = start.to_vec();
    let mut f = nll(&x);
    if !f.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let mut g = gradient(&nll, &x);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteObjective);
    }
    let identity = DMatrix::<f64>::identity(n, n);
    let mut inv_h = identity.clone();
    let mut fresh = true;
    let mut iterations = 0;

    loop {
        let gn = norm(&g);
        if gn <= opts.grad_tol {
            return Ok(Minimum {
                argmin: x,
                value: f,
                converged: true,
                iterations,
                grad_norm: gn,
            });
        }
        if iterations >= opts.max_iterations {
            return Ok(Minimum {
                argmin: x,
                value: f,
                converged: false,
                iterations,
                grad_norm: gn,
            });
        }
        iterations += 1;

        let gv = DVector::from_column_slice(&g);
        let mut d: Vec<f64> = (-(&inv_h * &gv)).iter().copied().collect();
        let mut slope = dot(&g, &d);
        if slope.is_nan() || slope >= 0.0 {
            inv_h = identity.clone();
            fresh = true;
            d = g.iter().map(|v| -v).collect();
            slope = -gn * gn;
        }
        let dn = norm(&d);
        if dn > opts.max_step {
            let scale = opts.max_step / dn;
            d.iter_mut().for_each(|v| *v *= scale);
            slope *= scale;
        }

        let mut step = 1.0;
        let mut accepted = None;
        let mut saw_finite = false;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let ft = nll(&trial);
            if ft.is_finite() {
                saw_finite = true;
                if ft <= f + 1e-4 * step * slope {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            step *= 0.5;
        }

        let Some((x_new, f_new)) = accepted else {
            if !fresh {
                inv_h = identity.clone();
                fresh = true;
                continue;
            }
            if !saw_finite {
                return Err(Error::NonFiniteObjective);
            }
            let converged = gn <= opts.stall_tol * (1.0 + f.abs());
            return Ok(Minimum {
                argmin: x,
                value: f,
                converged,
                iterations,
                grad_norm: gn,
            });
        };

        let g_new = gradient(&nll, &x_new);
        if g_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteObjective);
        }
        let noise_floor = 4.0 * f64::EPSILON * (1.0 + f.abs());
        let gn_new = norm(&g_new);
        if f - f_new <= noise_floor && gn_new <= opts.stall_tol * (1.0 + f_new.abs()) {
            return Ok(Minimum {
                argmin: x_new,
                value: f_new,
                converged: true,
                iterations,
                grad_norm: gn_new,
            });
        }
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if fresh {
                inv_h = &identity * (sy / dot(&y, &y));
            }
            let sv = DVector::from_vec(s);
            let yv = DVector::from_vec(y);
            let rho = 1.0 / sy;
            let left = &identity - (&sv * yv.transpose()) * rho;
            let right = &identity - (&yv * sv.transpose()) * rho;
            inv_h = &left * &inv_h * &right + (&sv * sv.transpose()) * rho;
            fresh = false;
        }
        x = x_new;
        f = f_new;
        g = g_new;
    }
}

/// Inverse of a positive definite observed-information matrix.
pub fn invert_information(h: DMatrix<f64>) -> Result<DMatrix<f64>> {
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularInformation);
    }
    let scale = h.diagonal().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let chol = h.cholesky().ok_or(Error::SingularInformation)?;
    // A pivot at rounding level means a numerically flat direction.
    if chol
        .l_dirty()
        .diagonal()
        .iter()
        .any(|d| d * d <= PIVOT_TOL * scale)
    {
        return Err(Error::SingularInformation);
    }
    Ok(chol.inverse())
}

/// `sqrt(diag(H^-1))` for the central-difference Hessian of `nll` at `at`.
pub fn observed_information_se<F: Fn(&[f64]) -> f64>(nll: &F, at: &[f64]) -> Result<Vec<f64>> {
    let cov = invert_information(hessian(nll, at))?;
    let se: Vec<f64> = cov.diagonal().iter().map(|v| v.sqrt()).collect();
    if se.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::SingularInformation);
    }
    Ok(se)
}

/// Two-sided Wald p-value `2 (1 - Phi(|coeff / se|))`.
pub fn wald_p_value(coeff: f64, se: f64) -> f64 {
    if se.is_nan() || se <= 0.0 {
        return f64::NAN;
    }
    (2.0 * std_normal_sf((coeff / se).abs())).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub coeffs: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub p_values: Vec<f64>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl FitResult {
    /// Assembles Wald statistics from coefficients and their standard errors.
    pub fn new(
        coeffs: Vec<f64>,
        std_errors: Vec<f64>,
        log_likelihood: f64,
        converged: bool,
        iterations: usize,
    ) -> Self {
        let z_scores: Vec<f64> = coeffs
            .iter()
            .zip(&std_errors)
            .map(|(c, s)| if *s > 0.0 { c / s } else { f64::NAN })
            .collect();
        let p_values = coeffs
            .iter()
            .zip(&std_errors)
            .map(|(c, s)| wald_p_value(*c, *s))
            .collect();
        Self {
            coeffs,
            std_errors,
            z_scores,
            p_values,
            log_likelihood,
            converged,
            iterations,
        }
    }

    /// Minimises `nll` from `start` and attaches observed-information SEs.
    /// A run that stops without converging is an error.
    pub fn fit<F: Fn(&[f64]) -> f64>(nll: F, start: &[f64]) -> Result<Self> {
        let min = minimize(&nll, start)?;
        if !min.converged {
            return Err(Error::NonConverged {
                iterations: min.iterations,
                grad_norm: min.grad_norm,
            });
        }
        let se = observed_information_se(&nll, &min.argmin)?;
        Ok(Self::new(min.argmin, se, -min.value, true, min.iterations))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaldDecision {
    pub coeff_index: usize,
    pub p_value: f64,
    pub significant: bool,
}

/// Rejects `coeff = 0` when the two-sided p-value is strictly below `alpha`.
pub fn wald_test(fit: &FitResult, index: usize, alpha: f64) -> WaldDecision {
    let p_value = wald_p_value(fit.coeffs[index], fit.std_errors[index]);
    WaldDecision {
        coeff_index: index,
        p_value,
        significant: p_value < alpha,
    }
}
