//! Parseval frames from the polar decomposition of `T_B`, and Mercer frames
//! from the eigen-decomposition of a Gram matrix.

use nalgebra::DMatrix;

use super::FeatureSystem;
use crate::error::{Error, Result};
use crate::kernel::{gram, GramMatrix, Kernel, Point};
use crate::linalg;
use crate::rkhs::{rkhs_inner, RkhsElement};
use crate::{CMatrix, C64};

/// Singular values of the analysis matrix below this fraction of the
/// largest span `ker T_B`.
pub const FRAME_RANK_CUTOFF: f64 = 1e-10;

const GRAM_RANK_CUTOFF: f64 = 1e-10;
const MERCER_PSD_TOL: f64 = 1e-10;
const MERCER_DROP: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ParsevalFrame {
    /// `V* e_n` for the node basis `e_n` of `L²(μ)`, one per node.
    pub vectors: Vec<RkhsElement>,
    /// Orthonormal basis of `span{K(·, xᵢ)} ⊖ ker T_B`.
    pub complement: Vec<RkhsElement>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

impl ParsevalFrame {
    /// `Σₙ |⟨φₙ, F⟩|²`.
    pub fn frame_energy(&self, f: &RkhsElement) -> Result<f64> {
        let mut total = 0.0;
        for phi in &self.vectors {
            total += rkhs_inner(phi, f)?.norm_sqr();
        }
        Ok(total)
    }

    /// `Σ aₖ eₖ` over the complement basis.
    pub fn complement_element(&self, coords: &[C64]) -> Result<RkhsElement> {
        if coords.len() != self.complement.len() {
            return Err(Error::LengthMismatch {
                what: "complement coordinates",
                expected: self.complement.len(),
                found: coords.len(),
            });
        }
        let Some(first) = self.complement.first() else {
            return Err(Error::InvalidInput("complement of ker T_B is trivial".into()));
        };
        let mut coeffs = vec![C64::new(0.0, 0.0); first.points().len()];
        for (a, e) in coords.iter().zip(&self.complement) {
            for (c, ec) in coeffs.iter_mut().zip(e.coeffs()) {
                *c += a * ec;
            }
        }
        RkhsElement::new(first.kernel(), first.points().to_vec(), coeffs)
    }
}

/// Parseval frame for `ℋ(K)|points ⊖ ker T_B`.
///
/// Works in orthonormal coordinates of `span{K(·, xᵢ)}` (via `G = UΛU*`),
/// where `T_B` becomes the `M × r` matrix `A = W^½ Φ U Λ^{-½}`. With
/// `A = PΣQ*`, the partial isometry is `V = P_r Q_r*` and the frame is
/// `{V* e_n}`.
pub fn parseval_frame(kernel: &Kernel, points: &[Point], features: &FeatureSystem) -> Result<ParsevalFrame> {
    let g = gram(kernel, points)?;
    let (vals, vecs) = linalg::hermitian_eigen(g.matrix());
    let lambda_max = vals.iter().copied().fold(0.0f64, f64::max);
    let kept: Vec<usize> = (0..vals.len())
        .filter(|&k| vals[k] > GRAM_RANK_CUTOFF * lambda_max && vals[k] > 0.0)
        .collect();
    let n = points.len();
    // Columns: orthonormal basis of the span, as coefficient vectors.
    let basis = CMatrix::from_fn(n, kept.len(), |i, k| vecs[(i, kept[k])] / vals[kept[k]].sqrt());

    let feats = features.feature_vectors(points)?;
    let w = features.measure().weights();
    let m = w.len();
    let phi = CMatrix::from_fn(m, n, |j, i| feats[i][j] * w[j].sqrt());
    let a = &phi * &basis;

    let svd = a.svd(true, true);
    let (p, q_adj) = (
        svd.u.ok_or_else(|| Error::InvariantViolation("svd without U".into()))?,
        svd.v_t.ok_or_else(|| Error::InvariantViolation("svd without V".into()))?,
    );
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let sigma_max = sv.iter().copied().fold(0.0f64, f64::max);
    let rank_idx: Vec<usize> = (0..sv.len())
        .filter(|&k| sigma_max > 0.0 && sv[k] > FRAME_RANK_CUTOFF * sigma_max)
        .collect();
    let rank = rank_idx.len();

    let element = |coords: nalgebra::DVector<C64>| -> Result<RkhsElement> {
        let c = &basis * coords;
        RkhsElement::new(kernel, points.to_vec(), c.iter().copied().collect())
    };

    if rank == 0 {
        log::warn!("analysis operator has rank 0; the Parseval frame is empty");
        return Ok(ParsevalFrame {
            vectors: Vec::new(),
            complement: Vec::new(),
            singular_values: sv,
            rank,
        });
    }

    // Q_r: right singular vectors spanning the complement of the kernel.
    let q_r = DMatrix::from_fn(kept.len(), rank, |i, k| q_adj[(rank_idx[k], i)].conj());
    let p_r = DMatrix::from_fn(m, rank, |j, k| p[(j, rank_idx[k])]);

    let complement = (0..rank)
        .map(|k| element(q_r.column(k).into_owned()))
        .collect::<Result<Vec<_>>>()?;
    let v_star = &q_r * p_r.adjoint();
    let vectors = (0..m)
        .map(|j| element(v_star.column(j).into_owned()))
        .collect::<Result<Vec<_>>>()?;

    Ok(ParsevalFrame {
        vectors,
        complement,
        singular_values: sv,
        rank,
    })
}

/// Mercer frame `φₙ = sqrt(λₙ) uₙ` of `G = Σ λₙ uₙ uₙ*`, largest first, as
/// value vectors on the Gram's points. `Σₙ φₙ(xᵢ) conj(φₙ(xⱼ)) = G_ij`.
pub fn mercer_frame(gram: &GramMatrix) -> Result<Vec<Vec<C64>>> {
    mercer_frame_of(gram.matrix())
}

pub fn mercer_frame_of(g: &CMatrix) -> Result<Vec<Vec<C64>>> {
    linalg::require_hermitian(g)?;
    let (vals, vecs) = linalg::hermitian_eigen(g);
    let min = vals.first().copied().unwrap_or(0.0);
    if min < -linalg::psd_threshold(g, MERCER_PSD_TOL) {
        return Err(Error::PsdViolation { min_eigenvalue: min });
    }
    let lambda_max = vals.last().copied().unwrap_or(0.0);
    let n = g.nrows();
    Ok((0..n)
        .rev()
        .filter(|&k| vals[k] > MERCER_DROP * lambda_max && vals[k] > 0.0)
        .map(|k| {
            let s = vals[k].sqrt();
            (0..n).map(|i| vecs[(i, k)] * s).collect()
        })
        .collect())
}

/// `max |Σₙ φₙ(xᵢ) conj(φₙ(xⱼ)) - G_ij|`.
pub fn reconstruction_residual(g: &CMatrix, frame: &[Vec<C64>]) -> f64 {
    let n = g.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let s: C64 = frame.iter().map(|phi| phi[i] * phi[j].conj()).sum();
            worst = worst.max((s - g[(i, j)]).norm());
        }
    }
    worst
}
