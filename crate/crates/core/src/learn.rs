//! Regularized least squares in an RKHS.
//!
//! For samples `(xᵢ, wᵢ, ψᵢ)` the minimizer of
//! `Q(F) = Σᵢ wᵢ|ψᵢ - F(xᵢ)|² + β‖F‖²` is `F = (βI + T*T)⁻¹T*ψ`. It lies
//! in `span{K(·, xᵢ)}`, where it reads `(βI + WG)c = Wψ`.

use nalgebra::{Cholesky, DVector};

use crate::error::{Error, Result};
use crate::kernel::{gram, Domain, Kernel, Point};
use crate::linalg;
use crate::random;
use crate::rkhs::{evaluate, rkhs_norm, RkhsElement};
use crate::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    points: Vec<Point>,
    weights: Vec<f64>,
    targets: Vec<C64>,
}

impl TrainingSet {
    pub fn new(points: Vec<Point>, weights: Vec<f64>, targets: Vec<C64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("training set is empty".into()));
        }
        for (what, n) in [("sample weights", weights.len()), ("sample targets", targets.len())] {
            if n != points.len() {
                return Err(Error::LengthMismatch {
                    what,
                    expected: points.len(),
                    found: n,
                });
            }
        }
        if let Some(j) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "weights must be positive (weight {j} is {})",
                weights[j]
            )));
        }
        Ok(TrainingSet {
            points,
            weights,
            targets,
        })
    }

    /// Unit weights.
    pub fn unweighted(points: Vec<Point>, targets: Vec<C64>) -> Result<Self> {
        let w = vec![1.0; points.len()];
        Self::new(points, w, targets)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn targets(&self) -> &[C64] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub element: RkhsElement,
    pub objective: f64,
    /// `ψ - TF`.
    pub residual: Vec<C64>,
    /// `‖βF + T*(TF - ψ)‖`, the norm of half the gradient of `Q` at `F`.
    pub stationarity_bound: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

fn finish(kernel: &Kernel, data: &TrainingSet, beta: f64, g: &CMatrix, c: Vec<C64>) -> Result<FitResult> {
    let gc = g * DVector::from_column_slice(&c);
    let residual: Vec<C64> = data.targets.iter().zip(gc.iter()).map(|(p, f)| p - f).collect();
    let fit_term: f64 = data
        .weights
        .iter()
        .zip(&residual)
        .map(|(w, r)| w * r.norm_sqr())
        .sum();
    let norm_sq = linalg::quadratic_form(g, &c, &c).re.max(0.0);
    let d: Vec<C64> = (0..c.len())
        .map(|i| c[i] * beta - residual[i] * data.weights[i])
        .collect();
    let stationarity_bound = linalg::quadratic_form(g, &d, &d).re.max(0.0).sqrt();
    let element = RkhsElement::new(kernel, data.points.clone(), c)?;
    Ok(FitResult {
        element,
        objective: fit_term + beta * norm_sq,
        residual,
        stationarity_bound,
    })
}

/// Solves `(βI + WG)c = Wψ` by LU.
pub fn fit(kernel: &Kernel, data: &TrainingSet, beta: f64) -> Result<FitResult> {
    check_beta(beta)?;
    let g = gram(kernel, &data.points)?.into_matrix();
    let n = data.len();
    let w = &data.weights;
    let a = CMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { beta } else { 0.0 };
        g[(i, j)] * w[i] + diag
    });
    let rhs = DVector::from_iterator(n, data.targets.iter().zip(w).map(|(p, w)| p * *w));
    let c = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvariantViolation("regularized system is singular".into()))?;
    finish(kernel, data, beta, &g, c.iter().copied().collect())
}

/// Same minimizer through the positive definite system
/// `(βI + W^½GW^½)a = W^½ψ`, `c = W^½a`, solved by Cholesky.
pub fn fit_symmetrized(kernel: &Kernel, data: &TrainingSet, beta: f64) -> Result<FitResult> {
    check_beta(beta)?;
    let g = gram(kernel, &data.points)?.into_matrix();
    let n = data.len();
    let s: Vec<f64> = data.weights.iter().map(|w| w.sqrt()).collect();
    let a = linalg::hermitian_from_fn(n, |i, j| {
        let diag = if i == j { beta } else { 0.0 };
        Ok(g[(i, j)] * (s[i] * s[j]) + diag)
    })?;
    let rhs = DVector::from_iterator(n, data.targets.iter().zip(&s).map(|(p, s)| p * *s));
    let chol = Cholesky::new(a).ok_or_else(|| {
        Error::InvariantViolation("symmetrized system is not positive definite".into())
    })?;
    let sol = chol.solve(&rhs);
    let c = sol.iter().zip(&s).map(|(a, s)| a * *s).collect();
    finish(kernel, data, beta, &g, c)
}

/// `Q(f) = Σᵢ wᵢ|ψᵢ - f(xᵢ)|² + β‖f‖²`.
pub fn objective(data: &TrainingSet, beta: f64, f: &RkhsElement) -> Result<f64> {
    check_beta(beta)?;
    let mut total = 0.0;
    for ((x, w), p) in data.points.iter().zip(&data.weights).zip(&data.targets) {
        total += w * (p - evaluate(f, x)?).norm_sqr();
    }
    let n = rkhs_norm(f)?;
    Ok(total + beta * n * n)
}

/// `(Q(f + εh) - Q(f - εh)) / 2ε`.
pub fn directional_derivative(data: &TrainingSet, beta: f64, f: &RkhsElement, h: &RkhsElement, eps: f64) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {eps}")));
    }
    let plus = objective(data, beta, &f.axpy(C64::new(eps, 0.0), h)?)?;
    let minus = objective(data, beta, &f.axpy(C64::new(-eps, 0.0), h)?)?;
    Ok((plus - minus) / (2.0 * eps))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationarityReport {
    pub max_derivative: f64,
    /// `Q(F) + 1`.
    pub scale: f64,
    /// `10·ε²`.
    pub tol: f64,
    pub passed: bool,
}

/// Random unit vector of `span{K(·, xᵢ)}` in the RKHS norm.
pub fn random_direction(kernel: &Kernel, points: &[Point], seed: u64) -> Result<RkhsElement> {
    let mut rng = random::rng(seed);
    for _ in 0..16 {
        let c = random::gaussian_vector(&mut rng, points.len());
        let h = RkhsElement::new(kernel, points.to_vec(), c)?;
        let n = rkhs_norm(&h)?;
        if n > 1e-12 {
            return Ok(h.scale(C64::new(1.0 / n, 0.0)));
        }
    }
    Err(Error::InvalidInput("span of the kernel sections is trivial".into()))
}

/// Central-difference derivatives of `Q` at `f` along `n_directions` random
/// unit directions in the span of the sample sections.
pub fn stationarity_check(
    kernel: &Kernel,
    data: &TrainingSet,
    beta: f64,
    f: &RkhsElement,
    n_directions: usize,
    eps: f64,
    seed: u64,
) -> Result<StationarityReport> {
    let scale = objective(data, beta, f)? + 1.0;
    let tol = 10.0 * eps * eps;
    let mut max_derivative = 0.0f64;
    for d in 0..n_directions {
        let h = random_direction(kernel, &data.points, random::derive_seed(seed, d as u64))?;
        max_derivative = max_derivative.max(directional_derivative(data, beta, f, &h, eps)?.abs());
    }
    Ok(StationarityReport {
        max_derivative,
        scale,
        tol,
        passed: max_derivative <= tol * scale,
    })
}

/// `K(x, y) = ⟨π(x), π(y)⟩ = Σ conj(π(x)ₖ) π(y)ₖ`.
pub fn feature_map_kernel<F>(domain: Domain, pi: F) -> Kernel
where
    F: Fn(&Point) -> Result<Vec<C64>> + Send + Sync + 'static,
{
    Kernel::new("feature-map", domain, move |x, y| {
        let (a, b) = (pi(x)?, pi(y)?);
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                what: "feature vector",
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(linalg::dotc(&a, &b))
    })
}
