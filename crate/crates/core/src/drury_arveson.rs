//! The Drury–Arveson kernel `K(z, w) = 1/(1 - ⟨z, w⟩)` on the open unit ball
//! of `ℂᵏ` and its sphere sub-boundary.
//!
//! Boundary features are `k_z(b) = 1/(1 - ⟨b, z⟩)`, so that
//! `conj(k_z(b)) k_w(b) = Σₙ ⟨z, b⟩ⁿ ⟨b, w⟩ⁿ` and the sphere moments give
//! `K^(μ)(z, w) = Σₙ cₙ(k) ⟨z, w⟩ⁿ` with `cₙ(k) = n!(k-1)!/(n+k-1)!`.
//! For `k = 1` this is `K` itself (Szegő); for `k ≥ 2` it is strictly smaller.

use std::f64::consts::PI;

use crate::boundary::{BoundarySetup, DiscreteMeasure, FeatureSystem};
use crate::error::{Error, Result};
use crate::kernel::{Domain, Kernel, Point};
use crate::linalg;
use crate::random;
use crate::{CMatrix, C64};

const SINGULAR_FLOOR: f64 = 1e-14;

/// `⟨z, w⟩ = Σ conj(zⱼ) wⱼ`.
fn inner(z: &[C64], w: &[C64]) -> C64 {
    linalg::dotc(z, w)
}

/// A point of the open unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    z: Vec<C64>,
    norm_sq: f64,
}

impl BallPoint {
    pub fn new(z: Vec<C64>) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidInput("ball point needs at least one coordinate".into()));
        }
        let norm_sq: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq.is_nan() || norm_sq >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "point with squared norm {norm_sq} is not inside the unit ball"
            )));
        }
        Ok(BallPoint { z, norm_sq })
    }

    pub fn from_point(p: &Point) -> Result<Self> {
        match p.as_vector() {
            Some(v) => Self::new(v.to_vec()),
            None => Err(Error::InvalidInput(format!("{p:?} is not a complex vector"))),
        }
    }

    pub fn coords(&self) -> &[C64] {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn to_point(&self) -> Point {
        Point::Vector(self.z.clone())
    }
}

fn check_dims(z: &BallPoint, w: &BallPoint) -> Result<()> {
    if z.dim() != w.dim() {
        return Err(Error::LengthMismatch {
            what: "ball point",
            expected: z.dim(),
            found: w.dim(),
        });
    }
    Ok(())
}

pub fn da_kernel(z: &BallPoint, w: &BallPoint) -> Result<C64> {
    check_dims(z, w)?;
    let d = C64::new(1.0, 0.0) - inner(&z.z, &w.z);
    if d.norm() < SINGULAR_FLOOR {
        return Err(Error::NearSingular { modulus: d.norm() });
    }
    Ok(d.inv())
}

/// The Drury–Arveson kernel on `B_k` as a [`Kernel`].
pub fn kernel(k: usize) -> Kernel {
    Kernel::new(format!("drury-arveson(k={k})"), Domain::ComplexVector { dim: k }, |x, y| {
        let z = ball_arg(x, 0)?;
        let w = ball_arg(y, 1)?;
        da_kernel(&z, &w)
    })
}

fn ball_arg(p: &Point, index: usize) -> Result<BallPoint> {
    BallPoint::from_point(p).map_err(|e| Error::DomainMismatch {
        index,
        reason: e.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereMode {
    /// Normalized i.i.d. complex Gaussians.
    MonteCarlo,
    /// `e^{2πij/M}`, `k = 1` only.
    CircleGrid,
}

/// Uniform-weight quadrature of the normalized surface measure on `∂B_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMeasure {
    k: usize,
    nodes: Vec<Vec<C64>>,
    mode: SphereMode,
    seed: u64,
}

impl SphereMeasure {
    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[Vec<C64>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.nodes.len() as f64
    }

    pub fn mode(&self) -> SphereMode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn to_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::new(
            self.nodes.iter().map(|b| Point::Vector(b.clone())).collect(),
            vec![self.weight(); self.len()],
        )
        .expect("sphere measure has positive weights")
    }
}

pub fn sphere_sample(k: usize, m: usize, mode: SphereMode, seed: u64) -> Result<SphereMeasure> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidInput(format!("sphere sample needs k ≥ 1 and M ≥ 1 (k={k}, M={m})")));
    }
    let nodes = match mode {
        SphereMode::CircleGrid => {
            if k != 1 {
                return Err(Error::Unsupported(format!("circle grid needs k = 1, got k = {k}")));
            }
            (0..m)
                .map(|j| vec![C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)])
                .collect()
        }
        SphereMode::MonteCarlo => {
            let mut rng = random::rng(seed);
            (0..m)
                .map(|_| loop {
                    let g: Vec<C64> = (0..k).map(|_| random::complex_normal(&mut rng)).collect();
                    let n = linalg::norm2(&g);
                    if n > 1e-300 {
                        break g.into_iter().map(|c| c / n).collect();
                    }
                })
                .collect()
        }
    };
    Ok(SphereMeasure { k, nodes, mode, seed })
}

/// `(1/(1 - ⟨bⱼ, z⟩))ⱼ`.
pub fn boundary_features(z: &BallPoint, sphere: &SphereMeasure) -> Result<Vec<C64>> {
    if z.dim() != sphere.k {
        return Err(Error::LengthMismatch {
            what: "ball point",
            expected: sphere.k,
            found: z.dim(),
        });
    }
    Ok(sphere
        .nodes
        .iter()
        .map(|b| (C64::new(1.0, 0.0) - inner(b, &z.z)).inv())
        .collect())
}

/// Sphere features as a [`FeatureSystem`] on `B_k`.
pub fn sphere_features(sphere: &SphereMeasure) -> FeatureSystem {
    let s = sphere.clone();
    FeatureSystem::new(sphere.to_measure(), Domain::ComplexVector { dim: sphere.k }, move |x| {
        boundary_features(&BallPoint::from_point(x)?, &s)
    })
}

/// The Drury–Arveson kernel with its sphere sub-boundary.
pub fn sphere_setup(sphere: &SphereMeasure) -> BoundarySetup {
    BoundarySetup {
        kernel: kernel(sphere.k),
        features: sphere_features(sphere),
    }
}

/// `K^(μ)(z, w)` by quadrature on the sphere nodes.
pub fn da_induced(z: &BallPoint, w: &BallPoint, sphere: &SphereMeasure) -> Result<C64> {
    check_dims(z, w)?;
    let (a, b) = (boundary_features(z, sphere)?, boundary_features(w, sphere)?);
    Ok(inner(&a, &b) * sphere.weight())
}

/// `cₙ(k) = ∫ |b₁|^{2n}`-type sphere moment `n!(k-1)!/(n+k-1)!`.
pub fn sphere_moment(n: usize, k: usize) -> f64 {
    (1..=n).fold(1.0, |c, j| c * j as f64 / (j + k - 1) as f64)
}

/// `Σₙ cₙ(k) uⁿ` summed to convergence (`|u| < 1`).
pub fn induced_series(k: usize, u: C64) -> Result<C64> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if u.norm() >= 1.0 {
        return Err(Error::InvalidInput(format!("series diverges at |u| = {}", u.norm())));
    }
    let mut sum = C64::new(1.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    for n in 0..1_000_000usize {
        // c_{n+1} uⁿ⁺¹ = cₙ uⁿ · u (n+1)/(n+k)
        term *= u * ((n + 1) as f64 / (n + k) as f64);
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            return Ok(sum);
        }
    }
    Ok(sum)
}

/// Closed form of `K^(μ)(z, w)` in terms of `u = ⟨z, w⟩`: `1/(1 - u)` for
/// `k = 1`, `-log(1 - u)/u` for `k = 2`.
pub fn induced_closed_form(k: usize, u: C64) -> Result<C64> {
    match k {
        1 => {
            let d = C64::new(1.0, 0.0) - u;
            if d.norm() < SINGULAR_FLOOR {
                return Err(Error::NearSingular { modulus: d.norm() });
            }
            Ok(d.inv())
        }
        // The quotient loses digits as u → 0, where the series is fast.
        2 if u.norm() < 0.05 => induced_series(2, u),
        2 => Ok(-(C64::new(1.0, 0.0) - u).ln() / u),
        _ => Err(Error::Unsupported(format!("no closed form for k = {k}; use the series"))),
    }
}

/// `K^(μ)` in exact (series) form as a [`Kernel`] on `B_k`.
pub fn induced_kernel_exact(k: usize) -> Kernel {
    Kernel::new(format!("da-induced(k={k})"), Domain::ComplexVector { dim: k }, move |x, y| {
        let (z, w) = (ball_arg(x, 0)?, ball_arg(y, 1)?);
        let u = inner(&z.z, &w.z);
        if k <= 2 {
            induced_closed_form(k, u)
        } else {
            induced_series(k, u)
        }
    })
}

/// `n` points in the ball of radius `radius`, uniform in volume.
pub fn random_ball_points(k: usize, n: usize, radius: f64, seed: u64) -> Result<Vec<BallPoint>> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidInput(format!("radius must lie in (0, 1), got {radius}")));
    }
    let mut rng = random::rng(seed);
    (0..n)
        .map(|_| {
            let g: Vec<C64> = (0..k).map(|_| random::complex_normal(&mut rng)).collect();
            let u: f64 = rand::Rng::random(&mut rng);
            let r = radius * u.powf(1.0 / (2 * k) as f64);
            let n = linalg::norm2(&g).max(1e-300);
            BallPoint::new(g.into_iter().map(|c| c * (r / n)).collect())
        })
        .collect()
}

/// How `K^(μ)` is evaluated in [`da_order_certificate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InducedMethod {
    /// Closed form for `k ≤ 2`, series otherwise.
    Exact,
    /// Monte Carlo sphere quadrature with `nodes` nodes.
    Quadrature { nodes: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DaOrderCertificate {
    /// Smallest eigenvalue of `Gram(K) - Gram(K^(μ))`.
    pub margin: f64,
    pub holds: bool,
    pub points: Vec<BallPoint>,
}

/// Certificate for `K^(μ) ≪ K` on `n_points` random ball points (radius 0.9).
pub fn da_order_certificate(
    k: usize,
    n_points: usize,
    method: InducedMethod,
    seed: u64,
    tol: f64,
) -> Result<DaOrderCertificate> {
    let points = random_ball_points(k, n_points, 0.9, seed)?;
    let margin = order_margin(k, &points, method)?;
    Ok(DaOrderCertificate {
        margin,
        holds: margin >= -tol,
        points,
    })
}

/// Smallest eigenvalue of `Gram(K) - Gram(K^(μ))` on the given points.
pub fn order_margin(k: usize, points: &[BallPoint], method: InducedMethod) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidInput("order certificate needs at least one point".into()));
    }
    let sphere = match method {
        InducedMethod::Quadrature { nodes, seed } => Some(sphere_sample(k, nodes, SphereMode::MonteCarlo, seed)?),
        InducedMethod::Exact => None,
    };
    let feats = match &sphere {
        Some(s) => Some(points.iter().map(|p| boundary_features(p, s)).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let diff = linalg::hermitian_from_fn(points.len(), |i, j| {
        let kij = da_kernel(&points[i], &points[j])?;
        let mij = match (&feats, &sphere) {
            (Some(f), Some(s)) => inner(&f[i], &f[j]) * s.weight(),
            _ => {
                let u = inner(&points[i].z, &points[j].z);
                if k <= 2 {
                    induced_closed_form(k, u)?
                } else {
                    induced_series(k, u)?
                }
            }
        };
        Ok(kij - mij)
    })?;
    Ok(linalg::min_eigenvalue(&diff))
}

/// Polynomial `F(z) = Σ_α a_α z^α` on `ℂᵏ`, grouped by total degree.
/// In the Drury–Arveson space `‖z^α‖² = α!/|α|!`, which is the symmetric
/// Fock norm of the tensor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FockCoefficients {
    k: usize,
    terms: Vec<(Vec<usize>, C64)>,
}

impl FockCoefficients {
    pub fn new(k: usize, terms: Vec<(Vec<usize>, C64)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if let Some((alpha, _)) = terms.iter().find(|(a, _)| a.len() != k) {
            return Err(Error::InvalidInput(format!("multi-index {alpha:?} has length ≠ {k}")));
        }
        Ok(FockCoefficients { k, terms })
    }

    /// `Σₙ aₙ zⁿ` in one variable.
    pub fn univariate(coeffs: &[C64]) -> Self {
        FockCoefficients {
            k: 1,
            terms: coeffs.iter().enumerate().map(|(n, &a)| (vec![n], a)).collect(),
        }
    }

    pub fn monomial(alpha: Vec<usize>) -> Self {
        FockCoefficients {
            k: alpha.len(),
            terms: vec![(alpha, C64::new(1.0, 0.0))],
        }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(a, _)| a.iter().sum::<usize>()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, z: &[C64]) -> C64 {
        self.terms.iter().map(|(a, c)| c * monomial_value(z, a)).sum()
    }

    /// `‖F‖²` in the Drury–Arveson space, `Σ |a_α|² α!/|α|!`, with repeated
    /// multi-indices merged first.
    pub fn norm_sq(&self) -> f64 {
        let mut merged: Vec<(Vec<usize>, C64)> = Vec::new();
        for (a, c) in &self.terms {
            match merged.iter_mut().find(|(b, _)| b == a) {
                Some((_, d)) => *d += c,
                None => merged.push((a.clone(), *c)),
            }
        }
        merged
            .iter()
            .map(|(a, c)| c.norm_sqr() * multinomial_weight(a))
            .sum()
    }

    /// `F_r(z) = F(rz)`.
    pub fn dilate(&self, r: f64) -> Self {
        FockCoefficients {
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c * r.powi(a.iter().sum::<usize>() as i32)))
                .collect(),
        }
    }
}

/// `α!/|α|!`.
fn multinomial_weight(alpha: &[usize]) -> f64 {
    let mut w = 1.0;
    let mut total = 0usize;
    for &a in alpha {
        for j in 1..=a {
            total += 1;
            w *= j as f64 / total as f64;
        }
    }
    w
}

fn monomial_value(z: &[C64], alpha: &[usize]) -> C64 {
    z.iter()
        .zip(alpha)
        .fold(C64::new(1.0, 0.0), |acc, (zi, &a)| acc * zi.powu(a as u32))
}

/// `(‖F‖_{ℋ(K)}, ‖F_r‖_{ℋ(K^(μ))})`. Exact only for `k = 1`, where the
/// monomials are orthonormal in both spaces.
pub fn dilation_norms(f: &FockCoefficients, r: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidInput(format!("dilation parameter must lie in [0, 1], got {r}")));
    }
    if f.k != 1 {
        return Err(Error::Unsupported(format!(
            "exact dilation norms need k = 1, got k = {}; use dilation_norm_quadrature",
            f.k
        )));
    }
    Ok((f.norm_sq().sqrt(), f.dilate(r).norm_sq().sqrt()))
}

/// `(Σⱼ wⱼ |F(r bⱼ)|²)^½`, the `L²(μ)` norm of the boundary values of `F_r`.
pub fn dilation_norm_quadrature(f: &FockCoefficients, r: f64, sphere: &SphereMeasure) -> Result<f64> {
    if f.k != sphere.k {
        return Err(Error::LengthMismatch {
            what: "polynomial dimension",
            expected: sphere.k,
            found: f.k,
        });
    }
    let s: f64 = sphere
        .nodes
        .iter()
        .map(|b| {
            let rb: Vec<C64> = b.iter().map(|c| c * r).collect();
            f.evaluate(&rb).norm_sqr()
        })
        .sum();
    Ok((s * sphere.weight()).sqrt())
}

/// All multi-indices of total degree `n` in `k` variables, lexicographically descending.
pub fn multi_indices(k: usize, n: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in multi_indices(k - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub min_singular_value: f64,
    pub size: usize,
    pub injective: bool,
}

/// Smallest singular value of the moment matrix `⟨b^α, b^β⟩_{L²(μ)}` over
/// all monomials whose total degree is listed in `degrees`.
pub fn moment_injectivity(sphere: &SphereMeasure, degrees: &[usize], tol: f64) -> Result<MomentReport> {
    let mut alphas = Vec::new();
    for &d in degrees {
        alphas.extend(multi_indices(sphere.k, d));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidInput("no degrees given".into()));
    }
    let vals: Vec<Vec<C64>> = sphere
        .nodes
        .iter()
        .map(|b| alphas.iter().map(|a| monomial_value(b, a)).collect())
        .collect();
    let n = alphas.len();
    let w = sphere.weight();
    let m = CMatrix::from_fn(n, n, |a, b| vals.iter().map(|v| v[a].conj() * v[b]).sum::<C64>() * w);
    let sv = m.singular_values();
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(MomentReport {
        min_singular_value: min,
        size: n,
        injective: min > tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::verify_adjoint;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bp(z: &[C64]) -> BallPoint {
        BallPoint::new(z.to_vec()).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let zero = bp(&[c(0.0, 0.0), c(0.0, 0.0)]);
        let w = bp(&[c(0.3, -0.2), c(0.1, 0.5)]);
        assert_eq!(da_kernel(&zero, &w).unwrap(), c(1.0, 0.0));
        let h = bp(&[c(0.5, 0.0)]);
        assert!((da_kernel(&h, &h).unwrap() - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        let d = da_kernel(&w, &w).unwrap();
        assert!((d - c(1.0 / (1.0 - w.norm_sq()), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn kernel_is_hermitian_exactly() {
        let pts = random_ball_points(3, 6, 0.95, 4).unwrap();
        for a in &pts {
            for b in &pts {
                assert_eq!(da_kernel(a, b).unwrap(), da_kernel(b, a).unwrap().conj());
            }
        }
    }

    #[test]
    fn ball_rejects_boundary_points() {
        assert!(BallPoint::new(vec![c(1.0, 0.0)]).is_err());
        let k = kernel(1);
        assert!(matches!(
            k.eval(&Point::real(0.2), &Point::real(1.5)),
            Err(Error::DomainMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn circle_grid_nodes() {
        let s = sphere_sample(1, 4, SphereMode::CircleGrid, 0).unwrap();
        let want = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (b, w) in s.nodes().iter().zip(want) {
            assert!((b[0] - w).norm() < 1e-15);
        }
        assert_eq!(s.weight(), 0.25);
        assert!(matches!(
            sphere_sample(2, 4, SphereMode::CircleGrid, 0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn monte_carlo_sphere_moments() {
        let m = 100_000;
        let s = sphere_sample(2, m, SphereMode::MonteCarlo, 17).unwrap();
        let bound = 5.0 / (m as f64).sqrt();
        for b in s.nodes() {
            assert!((linalg::norm2(b) - 1.0).abs() < 1e-12);
        }
        for i in 0..2 {
            let mean: C64 = s.nodes().iter().map(|b| b[i]).sum::<C64>() * s.weight();
            assert!(mean.re.abs() < bound && mean.im.abs() < bound);
        }
        let second: f64 = s.nodes().iter().map(|b| b[0].norm_sqr()).sum::<f64>() * s.weight();
        assert!((second - 0.5).abs() < bound);
    }

    #[test]
    fn feature_examples() {
        let s = sphere_sample(2, 50, SphereMode::MonteCarlo, 1).unwrap();
        let zero = bp(&[c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(boundary_features(&zero, &s).unwrap().iter().all(|v| *v == c(1.0, 0.0)));

        let g = sphere_sample(1, 8, SphereMode::CircleGrid, 0).unwrap();
        let f = boundary_features(&bp(&[c(0.3, 0.0)]), &g).unwrap();
        assert!((f[0] - c(1.0 / 0.7, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn feature_norm_respects_diagonal_bound() {
        let m = 100_000;
        let s = sphere_sample(2, m, SphereMode::MonteCarlo, 23).unwrap();
        let z = bp(&[c(0.6, 0.0), c(0.0, 0.0)]);
        let f = boundary_features(&z, &s).unwrap();
        let sq: Vec<f64> = f.iter().map(|v| v.norm_sqr()).collect();
        let mean = sq.iter().sum::<f64>() / m as f64;
        let var = sq.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        let sigma = (var / m as f64).sqrt();
        assert!(mean <= 1.0 / (1.0 - 0.36) + 5.0 * sigma);
    }

    #[test]
    fn szego_identity_on_circle_grid() {
        let s = sphere_sample(1, 2048, SphereMode::CircleGrid, 0).unwrap();
        let pts = random_ball_points(1, 20, 0.9, 2).unwrap();
        for z in &pts {
            for w in &pts {
                // Geometric series as the oracle.
                let u = z.coords()[0].conj() * w.coords()[0];
                let mut want = c(0.0, 0.0);
                let mut t = c(1.0, 0.0);
                for _ in 0..400 {
                    want += t;
                    t *= u;
                }
                assert!((da_induced(z, w, &s).unwrap() - want).norm() < 1e-8);
            }
        }
        let o = bp(&[c(0.0, 0.0)]);
        assert_eq!(da_induced(&o, &o, &s).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn k2_closed_form_matches_series() {
        for u in [c(0.3, 0.4), c(-0.7, 0.1), c(0.01, -0.02), c(0.0, 0.0), c(0.8, 0.0)] {
            let mut want = c(0.0, 0.0);
            let mut p = c(1.0, 0.0);
            for n in 0..2000 {
                want += p / (n + 1) as f64;
                p *= u;
            }
            assert!((induced_closed_form(2, u).unwrap() - want).norm() < 1e-13);
            assert!((induced_series(2, u).unwrap() - want).norm() < 1e-13);
        }
        assert!(matches!(induced_closed_form(3, c(0.1, 0.0)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sphere_moments() {
        assert_eq!(sphere_moment(0, 3), 1.0);
        assert!((sphere_moment(2, 2) - 1.0 / 3.0).abs() < 1e-16);
        assert!((sphere_moment(3, 3) - 6.0 * 2.0 / 120.0).abs() < 1e-16);
        assert_eq!(sphere_moment(7, 1), 1.0);
    }

    #[test]
    fn order_certificates() {
        let one = da_order_certificate(1, 10, InducedMethod::Exact, 3, 1e-8).unwrap();
        assert!(one.holds && one.margin.abs() < 1e-10);
        let two = da_order_certificate(2, 10, InducedMethod::Exact, 7, 1e-8).unwrap();
        assert!(two.holds);
        let three = da_order_certificate(3, 10, InducedMethod::Exact, 7, 1e-8).unwrap();
        assert!(three.holds);
        // Monte Carlo quadrature: the induced Gram is a sample average, so
        // allow statistical slack.
        let mc = da_order_certificate(3, 6, InducedMethod::Quadrature { nodes: 20_000, seed: 9 }, 7, 5e-2).unwrap();
        assert!(mc.holds);
    }

    #[test]
    fn single_point_gap() {
        let t: f64 = 0.64;
        let z = bp(&[c(0.8, 0.0), c(0.0, 0.0)]);
        let gap = da_kernel(&z, &z).unwrap().re - induced_closed_form(2, c(t, 0.0)).unwrap().re;
        assert!(gap > 0.0);
        let o = bp(&[c(0.0, 0.0), c(0.0, 0.0)]);
        let gap0 = da_kernel(&o, &o).unwrap().re - induced_closed_form(2, c(0.0, 0.0)).unwrap().re;
        assert_eq!(gap0, 0.0);
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = random::rng(31);
        for k in 1..=3 {
            let g = CMatrix::from_fn(k, k, |_, _| random::complex_normal(&mut rng));
            let q = g.qr().q();
            let pts = random_ball_points(k, 4, 0.9, k as u64).unwrap();
            let rot = |p: &BallPoint| {
                let v = &q * crate::CVector::from_column_slice(p.coords());
                bp(v.as_slice())
            };
            for a in &pts {
                for b in &pts {
                    let d = da_kernel(&rot(a), &rot(b)).unwrap() - da_kernel(a, b).unwrap();
                    assert!(d.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dilation_examples() {
        let constant = FockCoefficients::univariate(&[c(0.6, -0.8)]);
        for r in [0.1, 0.5, 0.99] {
            let (a, b) = dilation_norms(&constant, r).unwrap();
            assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
        }
        for n in 0..=10 {
            let f = FockCoefficients::monomial(vec![n]);
            let (full, dil) = dilation_norms(&f, 0.7).unwrap();
            assert_eq!(full, 1.0);
            assert!((dil - 0.7f64.powi(n as i32)).abs() < 1e-12);
        }
        let f = FockCoefficients::univariate(&[c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)]);
        let (full, small) = dilation_norms(&f, 1e-9).unwrap();
        assert!((small - 1.0).abs() < 1e-8);
        let mut last = 0.0;
        for i in 0..90 {
            let r = 0.1 + 0.01 * i as f64;
            let (_, d) = dilation_norms(&f, r).unwrap();
            assert!(d >= last && d <= full);
            last = d;
        }
        assert!(matches!(
            dilation_norms(&FockCoefficients::monomial(vec![1, 1]), 0.5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn dilation_quadrature_agrees_on_circle() {
        let s = sphere_sample(1, 64, SphereMode::CircleGrid, 0).unwrap();
        let f = FockCoefficients::univariate(&[c(1.0, 0.0), c(0.5, 0.5), c(0.0, -2.0)]);
        for r in [0.2, 0.6, 0.9] {
            let (_, exact) = dilation_norms(&f, r).unwrap();
            assert!((dilation_norm_quadrature(&f, r, &s).unwrap() - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn fock_norm_weights() {
        // ‖z₁z₂‖² = 1!1!/2! = ½ and ‖z₁²‖² = 1.
        assert!((FockCoefficients::monomial(vec![1, 1]).norm_sq() - 0.5).abs() < 1e-16);
        assert_eq!(FockCoefficients::monomial(vec![2, 0]).norm_sq(), 1.0);
        assert_eq!(multi_indices(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn moment_examples() {
        let s = sphere_sample(1, 2048, SphereMode::CircleGrid, 0).unwrap();
        let r = moment_injectivity(&s, &[0, 1, 2, 3], 1e-8).unwrap();
        assert_eq!(r.size, 4);
        assert!((r.min_singular_value - 1.0).abs() < 1e-12);
        let r = moment_injectivity(&s, &[0], 1e-8).unwrap();
        assert!((r.min_singular_value - 1.0).abs() < 1e-15);
        let mc = sphere_sample(2, 100_000, SphereMode::MonteCarlo, 5).unwrap();
        let r = moment_injectivity(&mc, &[0, 1, 2], 1e-8).unwrap();
        assert_eq!(r.size, 6);
        assert!(r.min_singular_value > 0.05);
    }

    #[test]
    fn adjoint_on_sphere() {
        for k in [1, 2] {
            let mode = if k == 1 { SphereMode::CircleGrid } else { SphereMode::MonteCarlo };
            let s = sphere_sample(k, 256, mode, 3).unwrap();
            let setup = sphere_setup(&s);
            let pts: Vec<Point> = random_ball_points(k, 5, 0.8, 1).unwrap().iter().map(|p| p.to_point()).collect();
            let r = verify_adjoint(&setup, &pts, 20, 2, 1e-10).unwrap();
            assert!(r.max_scaled_residual < 1e-10);
        }
    }
}
