//! Discrete measures as boundaries and sub-boundaries of a kernel.
//!
//! A [`FeatureSystem`] assigns to every point `x` a vector of node values
//! `k_x(b_j)` on a [`DiscreteMeasure`]; it induces
//! `K^(μ)(x, y) = Σⱼ wⱼ conj(k_x(bⱼ)) k_y(bⱼ)`. The measure is a boundary
//! for `K` when `K^(μ) = K` and a sub-boundary when `K^(μ) ≪ K`.
//! The analysis operator `T_B: K(·, x) ↦ k_x` and the synthesis operator
//! `S_B φ(x) = Σⱼ wⱼ conj(k_x(bⱼ)) φⱼ` are adjoint to each other.

mod frame;

pub use frame::{
    mercer_frame, mercer_frame_of, parseval_frame, reconstruction_residual, ParsevalFrame, FRAME_RANK_CUTOFF,
};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{gram, is_psd, Domain, Kernel, Point};
use crate::linalg;
use crate::random;
use crate::rkhs::RkhsElement;
use crate::{CMatrix, C64};

/// Finite quadrature `{(b_j, w_j)}` with strictly positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    nodes: Vec<Point>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(nodes: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::LengthMismatch {
                what: "measure weights",
                expected: nodes.len(),
                found: weights.len(),
            });
        }
        if nodes.is_empty() {
            return Err(Error::InvalidInput("measure needs at least one node".into()));
        }
        if let Some(j) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "weights must be positive (weight {j} is {})",
                weights[j]
            )));
        }
        Ok(DiscreteMeasure { nodes, weights })
    }

    /// Nodes `0..M` as vertex labels with the given weights.
    pub fn indexed(weights: Vec<f64>) -> Result<Self> {
        let nodes = (0..weights.len()).map(Point::Vertex).collect();
        Self::new(nodes, weights)
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `⟨a, b⟩_{L²(μ)} = Σⱼ wⱼ conj(aⱼ) bⱼ`.
    pub fn inner(&self, a: &[C64], b: &[C64]) -> C64 {
        weighted_inner(&self.weights, a, b)
    }

    pub fn norm(&self, a: &[C64]) -> f64 {
        self.inner(a, a).re.max(0.0).sqrt()
    }
}

pub(crate) fn weighted_inner(w: &[f64], a: &[C64], b: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for ((w, a), b) in w.iter().zip(a).zip(b) {
        acc += a.conj() * b * *w;
    }
    acc
}

type FeatureFn = dyn Fn(&Point) -> Result<Vec<C64>> + Send + Sync;

/// The map `x ↦ (k_x(b_j))_j` bound to a measure.
#[derive(Clone)]
pub struct FeatureSystem {
    measure: Arc<DiscreteMeasure>,
    domain: Domain,
    eval: Arc<FeatureFn>,
}

impl fmt::Debug for FeatureSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FeatureSystem")
            .field("nodes", &self.measure.len())
            .field("domain", &self.domain)
            .finish()
    }
}

impl FeatureSystem {
    pub fn new<F>(measure: DiscreteMeasure, domain: Domain, eval: F) -> Self
    where
        F: Fn(&Point) -> Result<Vec<C64>> + Send + Sync + 'static,
    {
        FeatureSystem {
            measure: Arc::new(measure),
            domain,
            eval: Arc::new(eval),
        }
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Node values of `k_x`; checks the domain, the length, and finiteness.
    pub fn features(&self, x: &Point) -> Result<Vec<C64>> {
        self.domain
            .check(x)
            .map_err(|reason| Error::DomainMismatch { index: 0, reason })?;
        let v = (self.eval)(x)?;
        if v.len() != self.measure.len() {
            return Err(Error::LengthMismatch {
                what: "feature vector",
                expected: self.measure.len(),
                found: v.len(),
            });
        }
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvariantViolation(format!("non-finite feature value at {x:?}")));
        }
        Ok(v)
    }

    /// Feature vectors of all points, one per point.
    pub fn feature_vectors(&self, points: &[Point]) -> Result<Vec<Vec<C64>>> {
        points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                self.features(p).map_err(|e| match e {
                    Error::DomainMismatch { reason, .. } => Error::DomainMismatch { index: i, reason },
                    e => e,
                })
            })
            .collect()
    }

    /// `Σⱼ wⱼ |k_x(bⱼ)|²`.
    pub fn weighted_norm_sq(&self, x: &Point) -> Result<f64> {
        let f = self.features(x)?;
        Ok(self.measure.inner(&f, &f).re)
    }

    /// Gram matrix of the induced kernel on `points`.
    pub fn induced_gram(&self, points: &[Point]) -> Result<CMatrix> {
        let feats = self.feature_vectors(points)?;
        let w = self.measure.weights();
        linalg::hermitian_from_fn(points.len(), |i, j| Ok(weighted_inner(w, &feats[i], &feats[j])))
    }
}

/// A kernel together with a candidate (sub-)boundary.
#[derive(Debug, Clone)]
pub struct BoundarySetup {
    pub kernel: Kernel,
    pub features: FeatureSystem,
}

/// `K^(μ)(x, y) = Σⱼ wⱼ conj(k_x(bⱼ)) k_y(bⱼ)`.
pub fn induced_kernel(features: &FeatureSystem) -> Kernel {
    let fs = features.clone();
    Kernel::new("induced", features.domain().clone(), move |x, y| {
        let (a, b) = (fs.features(x)?, fs.features(y)?);
        Ok(weighted_inner(fs.measure.weights(), &a, &b))
    })
}

/// `T_B(Σ cᵢ K(·, xᵢ)) = Σ cᵢ k_{xᵢ}` as node values.
pub fn analysis_op(element: &RkhsElement, features: &FeatureSystem) -> Result<Vec<C64>> {
    let mut out = vec![C64::new(0.0, 0.0); features.measure().len()];
    for (c, x) in element.coeffs().iter().zip(element.points()) {
        let k = features.features(x)?;
        for (o, v) in out.iter_mut().zip(&k) {
            *o += c * v;
        }
    }
    Ok(out)
}

/// `(S_B φ)(x) = Σⱼ wⱼ conj(k_x(bⱼ)) φⱼ` on each probe point.
pub fn synthesis_op(phi: &[C64], features: &FeatureSystem, probe_points: &[Point]) -> Result<Vec<C64>> {
    let m = features.measure();
    if phi.len() != m.len() {
        return Err(Error::LengthMismatch {
            what: "synthesis input",
            expected: m.len(),
            found: phi.len(),
        });
    }
    probe_points
        .iter()
        .map(|x| Ok(m.inner(&features.features(x)?, phi)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointReport {
    /// Largest `|⟨T_B F, φ⟩ - ⟨F, S_B φ⟩|` over the trials.
    pub max_residual: f64,
    /// Largest residual divided by `max(1, ‖F‖·‖φ‖)`.
    pub max_scaled_residual: f64,
    pub trials: usize,
}

/// Random-pair check of `⟨T_B F, φ⟩_{L²(μ)} = ⟨F, S_B φ⟩_{ℋ(K)}` with
/// `F ∈ span{K(·, xᵢ)}`; the right side uses the reproducing property,
/// `Σᵢ conj(cᵢ) (S_B φ)(xᵢ)`. Fails when a scaled residual exceeds `tol`.
pub fn verify_adjoint(
    setup: &BoundarySetup,
    points: &[Point],
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<AdjointReport> {
    let fs = &setup.features;
    let m = fs.measure();
    let g = gram(&setup.kernel, points)?;
    let s_phi_basis = fs.feature_vectors(points)?;
    let mut report = AdjointReport {
        max_residual: 0.0,
        max_scaled_residual: 0.0,
        trials,
    };
    for trial in 0..trials {
        let mut rng = random::rng(random::derive_seed(seed, trial as u64));
        let c = random::gaussian_vector(&mut rng, points.len());
        let phi = random::gaussian_vector(&mut rng, m.len());

        let element = RkhsElement::new(&setup.kernel, points.to_vec(), c.clone())?;
        let tf = analysis_op(&element, fs)?;
        let lhs = m.inner(&tf, &phi);

        let s_phi: Vec<C64> = s_phi_basis.iter().map(|k| m.inner(k, &phi)).collect();
        let rhs = linalg::dotc(&c, &s_phi);

        let f_norm = linalg::quadratic_form(g.matrix(), &c, &c).re.max(0.0).sqrt();
        let scale = (f_norm * m.norm(&phi)).max(1.0);
        let residual = (lhs - rhs).norm();
        report.max_residual = report.max_residual.max(residual);
        report.max_scaled_residual = report.max_scaled_residual.max(residual / scale);
        if residual / scale > tol {
            return Err(Error::AdjointViolation {
                trial,
                residual: residual / scale,
                tol,
            });
        }
    }
    Ok(report)
}

/// `(K^(μ)(x, y), (T_B* T_B K_y)(x))`, the second computed as synthesis of
/// the analysis of `K(·, y)`.
pub fn factor_check(setup: &BoundarySetup, x: &Point, y: &Point) -> Result<(C64, C64)> {
    let induced = induced_kernel(&setup.features).eval(x, y)?;
    let ky = RkhsElement::section(&setup.kernel, y.clone())?;
    let t_ky = analysis_op(&ky, &setup.features)?;
    let composed = synthesis_op(&t_ky, &setup.features, std::slice::from_ref(x))?[0];
    Ok((induced, composed))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCertificate {
    /// `max |K - K^(μ)| ≤ tol` over all point pairs.
    pub is_boundary: bool,
    /// `K^(μ) ≪ K` on the points; implied by `is_boundary`.
    pub is_sub_boundary: bool,
    pub max_equality_residual: f64,
    /// Smallest eigenvalue of `Gram(K) - Gram(K^(μ))`.
    pub ordering_margin: f64,
    pub points: Vec<Point>,
}

pub fn certify(setup: &BoundarySetup, points: &[Point], tol: f64) -> Result<BoundaryCertificate> {
    let gk = gram(&setup.kernel, points)?;
    let gm = setup.features.induced_gram(points)?;
    let diff = gk.matrix() - &gm;
    let max_equality_residual = diff.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let order = is_psd(&diff, tol)?;
    let is_boundary = max_equality_residual <= tol;
    Ok(BoundaryCertificate {
        is_boundary,
        // Equality within tol is itself an ordering certificate.
        is_sub_boundary: order.is_psd || is_boundary,
        max_equality_residual,
        ordering_margin: order.min_eigenvalue,
        points: points.to_vec(),
    })
}

/// Product boundary: nodes `(b₁, b₂)` with weights `w₁w₂` and features
/// `k_x(b₁, b₂) = k¹_x(b₁) k²_x(b₂)`. Nodes are ordered with `b₁` major.
pub fn product_boundary(f1: &FeatureSystem, f2: &FeatureSystem) -> Result<FeatureSystem> {
    if !f1.domain().compatible(f2.domain()) {
        return Err(Error::InvalidInput(format!(
            "product boundary of features on {:?} and {:?}",
            f1.domain(),
            f2.domain()
        )));
    }
    let (m1, m2) = (f1.measure(), f2.measure());
    let mut nodes = Vec::with_capacity(m1.len() * m2.len());
    let mut weights = Vec::with_capacity(m1.len() * m2.len());
    for (b1, w1) in m1.nodes().iter().zip(m1.weights()) {
        for (b2, w2) in m2.nodes().iter().zip(m2.weights()) {
            nodes.push(Point::pair(b1.clone(), b2.clone()));
            weights.push(w1 * w2);
        }
    }
    let measure = DiscreteMeasure::new(nodes, weights)?;
    let domain = match f1.domain() {
        Domain::Opaque => f2.domain().clone(),
        d => d.clone(),
    };
    let (a, b) = (f1.clone(), f2.clone());
    Ok(FeatureSystem::new(measure, domain, move |x| {
        let (u, v) = (a.features(x)?, b.features(x)?);
        Ok(u.iter().flat_map(|p| v.iter().map(move |q| p * q)).collect())
    }))
}

/// The trivial boundary: one node of mass 1 with `k_x ≡ 1`.
pub fn trivial_boundary(domain: Domain) -> FeatureSystem {
    let measure = DiscreteMeasure::new(vec![Point::Vertex(0)], vec![1.0]).expect("one positive weight");
    FeatureSystem::new(measure, domain, |_| Ok(vec![C64::new(1.0, 0.0)]))
}
