//! The quarter-Cantor measure `μ` of the maps `x/4` and `(x+2)/4`, its
//! spectrum `Λ₄ = {Σ bᵢ4ⁱ : bᵢ ∈ {0, 1}}`, and the kernel
//! `K_Λ₄(z, w) = Σ_{λ∈Λ₄} (w̄z)^λ = Π_k (1 + (w̄z)^{4ᵏ})`.
//!
//! `μ` is replaced by the level-`m` digit quadrature with `2^m` equally
//! weighted nodes `Σ_{i≤m} dᵢ4^{-i}`, `dᵢ ∈ {0, 2}`. Exponentials are
//! `e_λ(θ) = e^{i2πλθ}`.

use std::f64::consts::PI;

use crate::boundary::{BoundarySetup, DiscreteMeasure, FeatureSystem};
use crate::error::{Error, Result};
use crate::kernel::{Domain, Kernel, Point};
use crate::linalg;
use crate::{CMatrix, C64};

/// Largest supported quadrature level (`2^24` nodes).
pub const MAX_LEVEL: usize = 24;

/// Largest supported `Λ₄` depth; `4^depth` must fit comfortably in `u64`.
pub const MAX_DEPTH: usize = 30;

/// Sorted subset of `Λ₄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSet {
    elements: Vec<u64>,
    depth: usize,
}

impl SpectralSet {
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements not exceeding `bound`.
    pub fn truncated(&self, bound: u64) -> SpectralSet {
        SpectralSet {
            elements: self.elements.iter().copied().filter(|&l| l <= bound).collect(),
            depth: self.depth,
        }
    }
}

/// All `Σ_{i<depth} bᵢ4ⁱ` with `bᵢ ∈ {0, 1}`, ascending.
pub fn lambda4(depth: usize) -> Result<SpectralSet> {
    if depth > MAX_DEPTH {
        return Err(Error::InvalidInput(format!("depth {depth} exceeds {MAX_DEPTH}")));
    }
    // Binary digits of the index become base-4 digits, which keeps the order.
    let elements = (0..1u64 << depth)
        .map(|i| (0..depth).filter(|&b| i >> b & 1 == 1).map(|b| 4u64.pow(b as u32)).sum())
        .collect();
    Ok(SpectralSet { elements, depth })
}

/// Level-`m` digit quadrature of the quarter-Cantor measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CantorQuadrature {
    level: usize,
    nodes: Vec<f64>,
}

impl CantorQuadrature {
    pub fn level(&self) -> usize {
        self.level
    }

    /// Nodes in ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weight(&self) -> f64 {
        (0.5f64).powi(self.level as i32)
    }

    pub fn integrate<F: Fn(f64) -> C64>(&self, f: F) -> C64 {
        self.nodes.iter().map(|&x| f(x)).sum::<C64>() * self.weight()
    }

    pub fn to_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::new(
            self.nodes.iter().map(|&x| Point::real(x)).collect(),
            vec![self.weight(); self.nodes.len()],
        )
        .expect("positive weights")
    }
}

/// Nodes `Σ_{i=1..m} dᵢ4^{-i}`, `dᵢ ∈ {0, 2}`, each of weight `2^{-m}`. All
/// nodes are multiples of `4^{-m}`, so they are exact in binary.
pub fn cantor_nodes(m: usize) -> Result<CantorQuadrature> {
    if m > MAX_LEVEL {
        return Err(Error::InvalidInput(format!("level {m} exceeds {MAX_LEVEL}")));
    }
    let mut nodes = vec![0.0];
    for i in 1..=m {
        let step = 2.0 * 0.25f64.powi(i as i32);
        nodes = nodes.iter().flat_map(|&x| [x, x + step]).collect();
    }
    Ok(CantorQuadrature { level: m, nodes })
}

/// `μ̂(ξ) = e^{i2πξ/3} Π_{n<n_factors} cos(πξ/(2·4ⁿ))`.
pub fn mu_hat(xi: f64, n_factors: usize) -> C64 {
    let prod: f64 = (0..n_factors)
        .map(|n| (PI * xi / (2.0 * 4f64.powi(n as i32))).cos())
        .product();
    C64::from_polar(1.0, 2.0 * PI * xi / 3.0) * prod
}

/// `Σⱼ wⱼ e^{i2πξxⱼ}` on the level-`m` nodes.
pub fn mu_hat_quadrature(xi: f64, q: &CantorQuadrature) -> C64 {
    q.integrate(|x| C64::from_polar(1.0, 2.0 * PI * xi * x))
}

/// Bound on `|mu_hat_quadrature(ξ, m) - μ̂(ξ)|`: the level-`m` nodes miss
/// the tail `Σ_{i>m}` of every digit expansion, which costs a phase of
/// `2π|ξ|4^{-m}/3` and the factors `cos(2πξ4^{-i})`, `i > m`.
pub fn mu_hat_truncation_bound(xi: f64, m: usize) -> f64 {
    let phase = 2.0 * PI * xi.abs() * 0.25f64.powi(m as i32) / 3.0;
    let tail: f64 = (m + 1..m + 40)
        .map(|i| 0.5 * (2.0 * PI * xi * 0.25f64.powi(i as i32)).powi(2))
        .sum();
    phase + tail
}

/// `G_{λλ'} = ⟨e_λ, e_λ'⟩_{L²(μ_m)} = Σⱼ wⱼ e^{i2π(λ'-λ)xⱼ}`.
pub fn spectral_gram(q: &CantorQuadrature, lambda: &SpectralSet) -> Result<CMatrix> {
    let l = lambda.elements();
    if l.is_empty() {
        return Err(Error::InvalidInput("spectral set is empty".into()));
    }
    linalg::hermitian_from_fn(l.len(), |a, b| {
        if a == b {
            return Ok(C64::new(1.0, 0.0));
        }
        let d = l[b] as f64 - l[a] as f64;
        Ok(q.integrate(|x| C64::from_polar(1.0, 2.0 * PI * d * x)))
    })
}

fn check_disc(z: C64, index: usize) -> Result<()> {
    if z.norm().is_nan() || z.norm() >= 1.0 {
        return Err(Error::DomainMismatch {
            index,
            reason: format!("|z| = {} is not inside the unit disc", z.norm()),
        });
    }
    Ok(())
}

/// `Σ_{λ∈Λ₄(depth)} (w̄z)^λ`.
pub fn k_lambda4_series(z: C64, w: C64, depth: usize) -> Result<C64> {
    check_disc(z, 0)?;
    check_disc(w, 1)?;
    let u = w.conj() * z;
    Ok(lambda4(depth)?.elements().iter().map(|&l| pow(u, l)).sum())
}

/// `Π_{k<depth} (1 + (w̄z)^{4ᵏ})`.
pub fn k_lambda4_product(z: C64, w: C64, depth: usize) -> Result<C64> {
    check_disc(z, 0)?;
    check_disc(w, 1)?;
    if depth > MAX_DEPTH {
        return Err(Error::InvalidInput(format!("depth {depth} exceeds {MAX_DEPTH}")));
    }
    let mut u = w.conj() * z;
    let mut prod = C64::new(1.0, 0.0);
    for _ in 0..depth {
        prod *= C64::new(1.0, 0.0) + u;
        u = u * u * u * u;
    }
    Ok(prod)
}

fn pow(u: C64, n: u64) -> C64 {
    let (mut base, mut n, mut acc) = (u, n, C64::new(1.0, 0.0));
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

/// `K_Λ₄` at the given depth as a [`Kernel`] on the unit disc (product path).
pub fn k_lambda4_kernel(depth: usize) -> Kernel {
    Kernel::new(format!("k-lambda4(depth={depth})"), Domain::ComplexVector { dim: 1 }, move |x, y| {
        let (z, w) = (scalar(x, 0)?, scalar(y, 1)?);
        k_lambda4_product(z, w, depth)
    })
}

fn scalar(p: &Point, index: usize) -> Result<C64> {
    match p.as_vector() {
        Some([z]) => Ok(*z),
        _ => Err(Error::DomainMismatch {
            index,
            reason: format!("{p:?} is not a complex scalar"),
        }),
    }
}

/// Boundary features `k_z(θ) = Σ_λ z̄^λ e^{i2πλθ}` on the quadrature nodes,
/// so that `conj(k_z(θ))` is the boundary value `Σ_λ z^λ e^{-i2πλθ}`.
pub fn cantor_features(depth: usize, q: &CantorQuadrature) -> Result<FeatureSystem> {
    let lambda = lambda4(depth)?;
    let nodes = q.nodes().to_vec();
    // Table of e^{i2πλθⱼ}, one row per node.
    let table: Vec<Vec<C64>> = nodes
        .iter()
        .map(|&t| {
            lambda
                .elements()
                .iter()
                .map(|&l| C64::from_polar(1.0, 2.0 * PI * (l as f64) * t))
                .collect()
        })
        .collect();
    let exps: Vec<u64> = lambda.elements().to_vec();
    Ok(FeatureSystem::new(q.to_measure(), Domain::ComplexVector { dim: 1 }, move |x| {
        let z = scalar(x, 0)?;
        check_disc(z, 0)?;
        let powers: Vec<C64> = exps.iter().map(|&l| pow(z.conj(), l)).collect();
        Ok(table
            .iter()
            .map(|row| row.iter().zip(&powers).map(|(e, p)| e * p).sum())
            .collect())
    }))
}

/// `K_Λ₄` with its Cantor-measure boundary at the given depth and level.
pub fn cantor_setup(depth: usize, m: usize) -> Result<BoundarySetup> {
    let q = cantor_nodes(m)?;
    Ok(BoundarySetup {
        kernel: k_lambda4_kernel(depth),
        features: cantor_features(depth, &q)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryIdentity {
    pub induced: C64,
    pub kernel: C64,
    pub residual: f64,
}

/// `∫ K*(z₁, θ) conj(K*(z₂, θ)) dμ_m(θ)` against `K_Λ₄(z₁, z₂)`.
pub fn boundary_identity(z1: C64, z2: C64, depth: usize, m: usize) -> Result<BoundaryIdentity> {
    let setup = cantor_setup(depth, m)?;
    let (a, b) = (Point::scalar(z1), Point::scalar(z2));
    let fa = setup.features.features(&a)?;
    let fb = setup.features.features(&b)?;
    let induced = setup.features.measure().inner(&fa, &fb);
    let kernel = k_lambda4_product(z1, z2, depth)?;
    Ok(BoundaryIdentity {
        induced,
        kernel,
        residual: (induced - kernel).norm(),
    })
}
