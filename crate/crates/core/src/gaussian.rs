//! Gaussian processes with a prescribed covariance kernel, Karhunen–Loève
//! sampling, discretized Wiener processes, and the RKHS of the set kernel
//! `μ(A ∩ B)`.
//!
//! Covariances are `E[conj(V_x) V_y]`. Real Grams are sampled with real
//! Gaussians, complex Grams with circular complex Gaussians.

use nalgebra::Cholesky;

use crate::boundary::{BoundarySetup, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::kernel::{gram, Domain, Kernel, Point};
use crate::linalg;
use crate::random;
use crate::{CMatrix, C64};

/// Diagonal shifts tried in turn, as multiples of `trace/N`.
pub const JITTER_LADDER: [f64; 5] = [0.0, 1e-14, 1e-12, 1e-10, 1e-8];

/// Width of the entrywise covariance check, in standard deviations.
pub const SIGMA_BOUND: f64 = 5.0;

/// Cholesky-based sampler of `(V_{x₁}, …, V_{x_N})`.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    points: Vec<Point>,
    gram: CMatrix,
    factor: CMatrix,
    jitter: f64,
    complex: bool,
}

impl GaussianSampler {
    pub fn new(kernel: &Kernel, points: &[Point]) -> Result<Self> {
        let g = gram(kernel, points)?;
        let mut s = Self::from_gram(g.matrix())?;
        s.points = points.to_vec();
        Ok(s)
    }

    /// Sampler for an explicit Hermitian covariance matrix.
    pub fn from_gram(g: &CMatrix) -> Result<Self> {
        linalg::require_hermitian(g)?;
        let n = g.nrows();
        if n == 0 {
            return Err(Error::InvalidInput("covariance needs at least one point".into()));
        }
        let complex = g.iter().any(|z| z.im != 0.0);
        let scale = linalg::trace_re(g) / n as f64;
        let (factor, jitter) = if g.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            (CMatrix::zeros(n, n), 0.0)
        } else {
            let mut found = None;
            for step in JITTER_LADDER {
                let shift = step * scale;
                let shifted = g + CMatrix::identity(n, n) * C64::new(shift, 0.0);
                // nalgebra takes complex square roots of negative pivots, so
                // an indefinite matrix only shows up as a non-real diagonal.
                if let Some(l) = Cholesky::new(shifted).map(|ch| ch.l()) {
                    if l.diagonal().iter().all(|d| d.re > 0.0 && d.im.abs() <= 1e-12 * d.re) {
                        found = Some((l, shift));
                        break;
                    }
                }
            }
            found.ok_or_else(|| Error::CholeskyFailure {
                min_eigenvalue: linalg::min_eigenvalue(g),
            })?
        };
        if jitter > 0.0 {
            log::debug!("covariance factored with jitter {jitter:e}");
        }
        Ok(GaussianSampler {
            points: (0..n).map(Point::Vertex).collect(),
            gram: g.clone(),
            factor,
            jitter,
            complex,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// Lower-triangular `L` with `LL* = Gram + jitter·I`.
    pub fn factor(&self) -> &CMatrix {
        &self.factor
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    /// `n_samples × N` matrix of i.i.d. draws `V = conj(L) Z`.
    pub fn sample(&self, n_samples: usize, seed: u64) -> CMatrix {
        let n = self.gram.nrows();
        let lc = self.factor.map(|z| z.conj());
        let mut rng = random::rng(seed);
        let mut out = CMatrix::zeros(n_samples, n);
        let mut z = vec![C64::new(0.0, 0.0); n];
        for r in 0..n_samples {
            for zk in z.iter_mut() {
                *zk = if self.complex {
                    random::complex_normal(&mut rng)
                } else {
                    C64::new(random::normal(&mut rng), 0.0)
                };
            }
            for i in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, zk) in z.iter().enumerate().take(i + 1) {
                    acc += lc[(i, k)] * zk;
                }
                out[(r, i)] = acc;
            }
        }
        out
    }
}

/// Draws of the Gaussian process with covariance `kernel` on `points`.
pub fn sample_gp(kernel: &Kernel, points: &[Point], n_samples: usize, seed: u64) -> Result<CMatrix> {
    Ok(GaussianSampler::new(kernel, points)?.sample(n_samples, seed))
}

/// Karhunen–Loève draws `V_x = Σₙ φₙ(x) Zₙ` with i.i.d. real `N(0, 1)`
/// coefficients. `E[V_x conj(V_y)] = Σₙ φₙ(x) conj(φₙ(y))`.
pub fn kl_sample(frame: &[Vec<C64>], n_samples: usize, seed: u64) -> Result<CMatrix> {
    let Some(first) = frame.first() else {
        return Err(Error::InvalidInput("Karhunen-Loeve sampling needs a nonempty frame".into()));
    };
    let n = first.len();
    if let Some(bad) = frame.iter().find(|phi| phi.len() != n) {
        return Err(Error::LengthMismatch {
            what: "frame function",
            expected: n,
            found: bad.len(),
        });
    }
    let mut rng = random::rng(seed);
    let mut out = CMatrix::zeros(n_samples, n);
    for r in 0..n_samples {
        for phi in frame {
            let z = random::normal(&mut rng);
            for (i, p) in phi.iter().enumerate() {
                out[(r, i)] += p * z;
            }
        }
    }
    Ok(out)
}

/// `C_ij = (1/n) Σ_r conj(V_ri) V_rj` (the mean is known to be zero).
pub fn empirical_covariance(samples: &CMatrix) -> CMatrix {
    let n = samples.nrows().max(1) as f64;
    samples.adjoint() * samples / C64::new(n, 0.0)
}

/// `5·sqrt((K_ii K_jj + |K_ij|²)/n)`.
pub fn statistical_bound(kii: f64, kjj: f64, kij: C64, n: usize) -> f64 {
    SIGMA_BOUND * ((kii * kjj + kij.norm_sqr()) / n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceCheck {
    pub max_error: f64,
    /// Largest `error / bound` over entries; `≤ 1` means every entry passed.
    pub max_ratio: f64,
    pub failures: usize,
}

impl CovarianceCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Entrywise comparison of an empirical covariance from `n` draws with `target`.
pub fn check_covariance(empirical: &CMatrix, target: &CMatrix, n: usize) -> Result<CovarianceCheck> {
    if empirical.shape() != target.shape() || !target.is_square() {
        return Err(Error::InvalidInput(format!(
            "covariance shapes {:?} and {:?} differ",
            empirical.shape(),
            target.shape()
        )));
    }
    let mut check = CovarianceCheck {
        max_error: 0.0,
        max_ratio: 0.0,
        failures: 0,
    };
    for i in 0..target.nrows() {
        for j in 0..target.ncols() {
            let err = (empirical[(i, j)] - target[(i, j)]).norm();
            let bound = statistical_bound(target[(i, i)].re, target[(j, j)].re, target[(i, j)], n);
            let ratio = if bound > 0.0 {
                err / bound
            } else if err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            check.max_error = check.max_error.max(err);
            check.max_ratio = check.max_ratio.max(ratio);
            if ratio > 1.0 {
                check.failures += 1;
            }
        }
    }
    Ok(check)
}

/// One draw of a discretized generalized Wiener process: increments
/// `sqrt(wⱼ) Zⱼ` on the nodes of a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerDiscretization {
    normals: Vec<f64>,
    increments: Vec<f64>,
}

impl WienerDiscretization {
    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn normals(&self) -> &[f64] {
        &self.normals
    }

    /// `W_A = Σ_{j∈A} sqrt(wⱼ) Zⱼ`.
    pub fn over(&self, set: &[usize]) -> Result<f64> {
        set.iter()
            .map(|&j| {
                self.increments.get(j).copied().ok_or_else(|| {
                    Error::InvalidInput(format!("node {j} outside 0..{}", self.increments.len()))
                })
            })
            .sum()
    }
}

pub fn wiener_increments(measure: &DiscreteMeasure, seed: u64) -> WienerDiscretization {
    let mut rng = random::rng(seed);
    let normals: Vec<f64> = (0..measure.len()).map(|_| random::normal(&mut rng)).collect();
    let increments = normals
        .iter()
        .zip(measure.weights())
        .map(|(z, w)| w.sqrt() * z)
        .collect();
    WienerDiscretization { normals, increments }
}

/// `∫ k dW = Σⱼ k(bⱼ) ΔWⱼ`.
pub fn ito_integral(k_values: &[C64], w: &WienerDiscretization) -> Result<C64> {
    if k_values.len() != w.increments.len() {
        return Err(Error::LengthMismatch {
            what: "integrand",
            expected: w.increments.len(),
            found: k_values.len(),
        });
    }
    Ok(k_values.iter().zip(&w.increments).map(|(k, d)| k * *d).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisintegrationReport {
    /// `E[conj(V_x) V_y]` estimated from the draws.
    pub empirical: CMatrix,
    /// `K^(μ)` on the points.
    pub induced: CMatrix,
    /// Comparison with `K^(μ)`.
    pub check: CovarianceCheck,
    /// `max |empirical - K|`, meaningful when the measure is a boundary.
    pub kernel_error: f64,
    pub samples: usize,
}

/// Builds `V_x = ∫ k_x dW` from `n_samples` independent Wiener draws and
/// compares the empirical covariance with `K^(μ)`.
pub fn disintegration_check(
    setup: &BoundarySetup,
    points: &[Point],
    n_samples: usize,
    seed: u64,
) -> Result<DisintegrationReport> {
    if n_samples == 0 {
        return Err(Error::InvalidInput("disintegration check needs at least one sample".into()));
    }
    let fs = &setup.features;
    let feats = fs.feature_vectors(points)?;
    let induced = fs.induced_gram(points)?;
    let k = gram(&setup.kernel, points)?;
    let n = points.len();
    let sqrt_w: Vec<f64> = fs.measure().weights().iter().map(|w| w.sqrt()).collect();
    let mut rng = random::rng(seed);
    let mut samples = CMatrix::zeros(n_samples, n);
    let mut inc = vec![0.0; sqrt_w.len()];
    for r in 0..n_samples {
        for (d, s) in inc.iter_mut().zip(&sqrt_w) {
            *d = s * random::normal(&mut rng);
        }
        for (i, f) in feats.iter().enumerate() {
            samples[(r, i)] = f.iter().zip(&inc).map(|(k, d)| k * *d).sum();
        }
    }
    let empirical = empirical_covariance(&samples);
    let check = check_covariance(&empirical, &induced, n_samples)?;
    let kernel_error = (&empirical - k.matrix()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    Ok(DisintegrationReport {
        empirical,
        induced,
        check,
        kernel_error,
        samples: n_samples,
    })
}

/// `K(A, B) = μ(A ∩ B)` on subsets of the node indices.
pub fn set_kernel(measure: &DiscreteMeasure) -> Kernel {
    let w = measure.weights().to_vec();
    Kernel::new("set", Domain::IndexSet { universe: w.len() }, move |x, y| {
        let (a, b) = (x.as_set().unwrap_or(&[]), y.as_set().unwrap_or(&[]));
        // Both lists are sorted and deduplicated.
        let (mut i, mut j, mut s) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    s += w[a[i]];
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(C64::new(s, 0.0))
    })
}

/// The signed measure `F(A) = Σ_{j∈A} wⱼ fⱼ` with density `f = dF/dμ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetRkhsElement {
    weights: Vec<f64>,
    density: Vec<C64>,
}

impl SetRkhsElement {
    pub fn new(measure: &DiscreteMeasure, density: Vec<C64>) -> Result<Self> {
        if density.len() != measure.len() {
            return Err(Error::LengthMismatch {
                what: "density",
                expected: measure.len(),
                found: density.len(),
            });
        }
        Ok(SetRkhsElement {
            weights: measure.weights().to_vec(),
            density,
        })
    }

    /// `F_A = μ(A ∩ ·)`, the kernel section at `A`.
    pub fn section(measure: &DiscreteMeasure, set: &[usize]) -> Result<Self> {
        let mut density = vec![C64::new(0.0, 0.0); measure.len()];
        for &j in set {
            *density.get_mut(j).ok_or_else(|| {
                Error::InvalidInput(format!("node {j} outside 0..{}", measure.len()))
            })? = C64::new(1.0, 0.0);
        }
        Self::new(measure, density)
    }

    pub fn density(&self) -> &[C64] {
        &self.density
    }

    /// `F(A)`.
    pub fn evaluate(&self, set: &[usize]) -> Result<C64> {
        let mut in_set = vec![false; self.weights.len()];
        for &j in set {
            *in_set.get_mut(j).ok_or_else(|| {
                Error::InvalidInput(format!("node {j} outside 0..{}", self.weights.len()))
            })? = true;
        }
        // Same order and terms as `inner` with an indicator density.
        Ok((0..self.weights.len())
            .filter(|&j| in_set[j])
            .map(|j| self.density[j] * self.weights[j])
            .sum())
    }

    /// `⟨F, G⟩ = Σⱼ wⱼ conj(fⱼ) gⱼ`.
    pub fn inner(&self, other: &SetRkhsElement) -> Result<C64> {
        if self.weights != other.weights {
            return Err(Error::InvalidInput("elements live on different measures".into()));
        }
        Ok((0..self.weights.len())
            .filter(|&j| self.density[j] != C64::new(0.0, 0.0))
            .map(|j| self.density[j].conj() * other.density[j] * self.weights[j])
            .sum())
    }

    /// `Σⱼ wⱼ |fⱼ|²`.
    pub fn norm_sq(&self) -> f64 {
        self.weights.iter().zip(&self.density).map(|(w, f)| w * f.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `|⟨F_A, self⟩ - self(A)|`.
    pub fn reproducing_residual(&self, set: &[usize]) -> Result<f64> {
        let measure_weights = self.weights.clone();
        let section = SetRkhsElement {
            density: (0..measure_weights.len())
                .map(|j| C64::new(if set.contains(&j) { 1.0 } else { 0.0 }, 0.0))
                .collect(),
            weights: measure_weights,
        };
        Ok((section.inner(self)? - self.evaluate(set)?).norm())
    }
}

/// Norm of `element` and the largest reproducing residual over `sets`.
pub fn set_rkhs(measure: &DiscreteMeasure, element: &SetRkhsElement, sets: &[Vec<usize>]) -> Result<(f64, f64)> {
    if element.weights != measure.weights() {
        return Err(Error::InvalidInput("element lives on a different measure".into()));
    }
    let mut worst = 0.0f64;
    for s in sets {
        worst = worst.max(element.reproducing_residual(s)?);
    }
    Ok((element.norm(), worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{mercer_frame, trivial_boundary, DiscreteMeasure, FeatureSystem};
    use crate::drury_arveson::{self, SphereMode};
    use crate::kernel::{constant_kernel, min_kernel};
    use crate::network;

    fn v(i: usize) -> Point {
        Point::Vertex(i)
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn verts(r: std::ops::RangeInclusive<usize>) -> Vec<Point> {
        r.map(v).collect()
    }

    #[test]
    fn zero_kernel_gives_zero_samples() {
        let k = constant_kernel(Domain::Opaque, 0.0);
        let s = sample_gp(&k, &verts(1..=3), 10, 1).unwrap();
        assert!(s.iter().all(|z| *z == re(0.0)));
    }

    #[test]
    fn unit_variance() {
        let k = constant_kernel(Domain::Opaque, 1.0);
        let n = 100_000;
        let s = sample_gp(&k, &[v(0)], n, 2).unwrap();
        let var = empirical_covariance(&s)[(0, 0)].re;
        assert!((var - 1.0).abs() < statistical_bound(1.0, 1.0, re(1.0), n));
        assert!(s.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn min_kernel_covariance() {
        let pts = verts(1..=5);
        let sampler = GaussianSampler::new(&min_kernel(), &pts).unwrap();
        assert_eq!(sampler.jitter(), 0.0);
        let n = 200_000;
        let emp = empirical_covariance(&sampler.sample(n, 7));
        let check = check_covariance(&emp, sampler.gram(), n).unwrap();
        assert!(check.passed(), "{check:?}");
    }

    #[test]
    fn complex_gram_is_circular() {
        let da = drury_arveson::kernel(1);
        let pts = vec![Point::scalar(C64::new(0.3, 0.4)), Point::scalar(C64::new(-0.5, 0.2))];
        let sampler = GaussianSampler::new(&da, &pts).unwrap();
        assert!(sampler.is_complex());
        let n = 100_000;
        let s = sampler.sample(n, 3);
        let emp = empirical_covariance(&s);
        assert!(check_covariance(&emp, sampler.gram(), n).unwrap().passed());
        // Pseudo-covariance E[V_i V_j] vanishes for circular draws.
        let pseudo: C64 = (0..n).map(|r| s[(r, 0)] * s[(r, 1)]).sum::<C64>() / n as f64;
        assert!(pseudo.norm() < 5.0 * (2.0 / n as f64).sqrt() * sampler.gram()[(0, 0)].re);
    }

    #[test]
    fn samples_are_reproducible() {
        let pts = verts(1..=4);
        let a = sample_gp(&min_kernel(), &pts, 50, 11).unwrap();
        let b = sample_gp(&min_kernel(), &pts, 50, 11).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_gp(&min_kernel(), &pts, 50, 12).unwrap());
    }

    #[test]
    fn jitter_rescues_semidefinite_grams() {
        // Rank-one PSD matrix: exact Cholesky may fail, the ladder recovers.
        let u = [re(1.0), re(2.0), re(3.0)];
        let g = CMatrix::from_fn(3, 3, |i, j| u[i] * u[j]);
        let s = GaussianSampler::from_gram(&g).unwrap();
        assert!(s.jitter() <= 1e-8 * linalg::trace_re(&g) / 3.0);
        let rebuilt = s.factor() * s.factor().adjoint();
        let err = (&rebuilt - &g).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(err <= 1e-10 * linalg::trace_re(&g) + s.jitter());
    }

    #[test]
    fn indefinite_gram_fails_with_eigenvalue() {
        let g = CMatrix::from_row_slice(2, 2, &[re(1.0), re(3.0), re(3.0), re(1.0)]);
        match GaussianSampler::from_gram(&g) {
            Err(Error::CholeskyFailure { min_eigenvalue }) => assert!((min_eigenvalue + 2.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kl_examples() {
        let phi = vec![vec![re(1.0), re(-2.0), re(0.5)]];
        let s = kl_sample(&phi, 20, 4).unwrap();
        for r in 0..20 {
            let z = s[(r, 0)];
            assert_eq!(s[(r, 1)], z * -2.0);
            assert_eq!(s[(r, 2)], z * 0.5);
        }
        let onb: Vec<Vec<C64>> = (0..3)
            .map(|i| (0..3).map(|j| re(if i == j { 1.0 } else { 0.0 })).collect())
            .collect();
        let n = 100_000;
        let emp = empirical_covariance(&kl_sample(&onb, n, 5).unwrap());
        assert!(check_covariance(&emp, &CMatrix::identity(3, 3), n).unwrap().passed());
    }

    #[test]
    fn kl_matches_min_gram() {
        let g = gram(&min_kernel(), &verts(1..=5)).unwrap();
        let frame = mercer_frame(&g).unwrap();
        let n = 200_000;
        let emp = empirical_covariance(&kl_sample(&frame, n, 8).unwrap());
        assert!(check_covariance(&emp, g.matrix(), n).unwrap().passed());
    }

    #[test]
    fn wiener_examples() {
        let m = DiscreteMeasure::indexed(vec![4.0]).unwrap();
        let n = 100_000;
        let second: f64 = (0..n)
            .map(|s| wiener_increments(&m, s as u64).increments()[0].powi(2))
            .sum::<f64>()
            / n as f64;
        assert!((second - 4.0).abs() < 5.0 * 4.0 * (2.0 / n as f64).sqrt());

        let m = DiscreteMeasure::indexed(vec![1.0, 2.0]).unwrap();
        let cross: f64 = (0..n)
            .map(|s| {
                let w = wiener_increments(&m, random::derive_seed(3, s as u64));
                w.over(&[0]).unwrap() * w.over(&[1]).unwrap()
            })
            .sum::<f64>()
            / n as f64;
        assert!(cross.abs() < statistical_bound(1.0, 2.0, re(0.0), n));

        let tiny = DiscreteMeasure::indexed(vec![1e-300]).unwrap();
        assert!(wiener_increments(&tiny, 1).increments()[0].abs() < 1e-140);
    }

    #[test]
    fn ito_examples() {
        let m = DiscreteMeasure::indexed(vec![0.5, 1.0, 2.0]).unwrap();
        let w = wiener_increments(&m, 6);
        assert_eq!(ito_integral(&[re(0.0); 3], &w).unwrap(), re(0.0));
        let ind = [re(1.0), re(0.0), re(1.0)];
        assert_eq!(ito_integral(&ind, &w).unwrap().re, w.over(&[0, 2]).unwrap());
        assert!(ito_integral(&[re(1.0)], &w).is_err());
    }

    #[test]
    fn ito_isometry_on_chain() {
        let setup = network::chain_setup(6, 0.5).unwrap();
        let fs = &setup.features;
        let n = 50_000;
        let k4 = fs.features(&v(4)).unwrap();
        let second: f64 = (0..n)
            .map(|s| ito_integral(&k4, &wiener_increments(fs.measure(), s as u64)).unwrap().norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((second - 4.0).abs() < statistical_bound(4.0, 4.0, re(4.0), n));
    }

    #[test]
    fn disintegration_on_circle() {
        let s = drury_arveson::sphere_sample(1, 64, SphereMode::CircleGrid, 0).unwrap();
        let setup = drury_arveson::sphere_setup(&s);
        let pts = vec![
            Point::scalar(C64::new(0.2, 0.1)),
            Point::scalar(C64::new(-0.4, 0.3)),
            Point::scalar(C64::new(0.0, -0.55)),
        ];
        let r = disintegration_check(&setup, &pts, 100_000, 12).unwrap();
        assert!(r.check.passed(), "{:?}", r.check);
    }

    #[test]
    fn disintegration_with_zero_features_is_exact() {
        let m = DiscreteMeasure::indexed(vec![1.0, 1.0]).unwrap();
        let fs = FeatureSystem::new(m, Domain::Opaque, |_| Ok(vec![re(0.0); 2]));
        let setup = BoundarySetup {
            kernel: constant_kernel(Domain::Opaque, 0.0),
            features: fs,
        };
        let r = disintegration_check(&setup, &[v(0), v(1)], 100, 1).unwrap();
        assert_eq!(r.check.max_error, 0.0);
    }

    #[test]
    fn disintegration_error_shrinks_like_root_n() {
        let setup = BoundarySetup {
            kernel: constant_kernel(Domain::Opaque, 1.0),
            features: trivial_boundary(Domain::Opaque),
        };
        // Average over seeds so the ratio is not at the mercy of one draw.
        let mean_err = |n: usize| {
            (0..20)
                .map(|s| disintegration_check(&setup, &[v(0)], n, s).unwrap().check.max_error)
                .sum::<f64>()
                / 20.0
        };
        let ratio = mean_err(1_000) / mean_err(100_000);
        assert!(ratio > 10.0 / 3.0 && ratio < 30.0, "{ratio}");
    }

    #[test]
    fn set_kernel_examples() {
        let m = DiscreteMeasure::indexed(vec![1.0; 11]).unwrap();
        let k = set_kernel(&m);
        assert_eq!(k.eval(&Point::set([1, 2]), &Point::set([3, 4])).unwrap(), re(0.0));
        assert_eq!(k.eval(&Point::set([1, 2, 5]), &Point::set([1, 2, 5])).unwrap(), re(3.0));
        assert_eq!(k.eval(&Point::set(1..=4), &Point::set(3..=7)).unwrap(), re(2.0));
    }

    #[test]
    fn set_rkhs_examples() {
        let w = vec![0.5, 1.5, 2.0, 0.25];
        let m = DiscreteMeasure::indexed(w.clone()).unwrap();
        let ones = SetRkhsElement::new(&m, vec![re(1.0); 4]).unwrap();
        assert_eq!(ones.norm_sq(), m.total_mass());
        assert_eq!(ones.evaluate(&[0, 2]).unwrap(), re(2.5));
        let single = SetRkhsElement::section(&m, &[2]).unwrap();
        assert_eq!(single.norm_sq(), 2.0);

        let m8 = DiscreteMeasure::indexed(vec![0.3, 1.1, 0.7, 2.0, 0.9, 1.3, 0.2, 0.6]).unwrap();
        let mut rng = random::rng(3);
        let g = SetRkhsElement::new(&m8, random::gaussian_vector(&mut rng, 8)).unwrap();
        let (_, worst) = set_rkhs(&m8, &g, &[vec![2, 5, 7]]).unwrap();
        assert_eq!(worst, 0.0);
    }
}
