//! Finite spans `Σ cᵢ K(·, xᵢ)` in the RKHS of a kernel.
//!
//! Evaluation is `f(x) = Σ cᵢ K(x, xᵢ)` and the inner product is
//! `⟨a, b⟩ = Σᵢ Σⱼ conj(aᵢ) bⱼ K(xᵢ, yⱼ)`, linear in `b`.

use crate::error::{Error, Result};
use crate::kernel::{gram, Kernel, Point};
use crate::linalg;
use crate::C64;

/// Relative floor below which a computed squared norm is a PSD violation.
pub const NORM_TOL: f64 = 1e-10;

/// Singular values below this fraction of the largest are treated as zero.
pub const PINV_CUTOFF: f64 = 1e-10;

/// Out-of-range part of `f` (relative to `‖f‖`) beyond which `f` is not in
/// the range of the Gram matrix.
pub const RANGE_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct RkhsElement {
    kernel: Kernel,
    points: Vec<Point>,
    coeffs: Vec<C64>,
}

impl RkhsElement {
    pub fn new(kernel: &Kernel, points: Vec<Point>, coeffs: Vec<C64>) -> Result<Self> {
        if points.len() != coeffs.len() {
            return Err(Error::LengthMismatch {
                what: "rkhs coefficients",
                expected: points.len(),
                found: coeffs.len(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            kernel.check_point(i, p)?;
        }
        Ok(RkhsElement {
            kernel: kernel.clone(),
            points,
            coeffs,
        })
    }

    /// The kernel section `K(·, x)`.
    pub fn section(kernel: &Kernel, x: Point) -> Result<Self> {
        Self::new(kernel, vec![x], vec![C64::new(1.0, 0.0)])
    }

    pub fn zero(kernel: &Kernel) -> Self {
        RkhsElement {
            kernel: kernel.clone(),
            points: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn scale(&self, s: C64) -> Self {
        RkhsElement {
            kernel: self.kernel.clone(),
            points: self.points.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self + s·other`. Coefficients are added in place when both elements
    /// live on the same point list; otherwise the spans are concatenated.
    pub fn axpy(&self, s: C64, other: &RkhsElement) -> Result<Self> {
        if !self.kernel.same_as(&other.kernel) {
            return Err(Error::KernelMismatch);
        }
        if self.points == other.points {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + s * b)
                .collect();
            return Ok(RkhsElement {
                kernel: self.kernel.clone(),
                points: self.points.clone(),
                coeffs,
            });
        }
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().map(|b| s * b));
        Ok(RkhsElement {
            kernel: self.kernel.clone(),
            points,
            coeffs,
        })
    }

    pub fn evaluate(&self, x: &Point) -> Result<C64> {
        evaluate(self, x)
    }

    pub fn norm(&self) -> Result<f64> {
        rkhs_norm(self)
    }
}

/// `f(x) = Σ cᵢ K(x, xᵢ)`.
pub fn evaluate(a: &RkhsElement, x: &Point) -> Result<C64> {
    a.kernel.check_point(0, x)?;
    let mut acc = C64::new(0.0, 0.0);
    for (c, p) in a.coeffs.iter().zip(&a.points) {
        acc += c * a.kernel.eval_unchecked(x, p)?;
    }
    Ok(acc)
}

/// `⟨a, b⟩ = Σᵢ conj(aᵢ) b(xᵢ)`; for `a = K(·, x)` this is `b(x)` exactly.
pub fn rkhs_inner(a: &RkhsElement, b: &RkhsElement) -> Result<C64> {
    if !a.kernel.same_as(&b.kernel) {
        return Err(Error::KernelMismatch);
    }
    let mut acc = C64::new(0.0, 0.0);
    for (c, p) in a.coeffs.iter().zip(&a.points) {
        acc += c.conj() * evaluate(b, p)?;
    }
    Ok(acc)
}

/// `‖a‖ = sqrt⟨a, a⟩`, clamping round-off negatives to zero.
pub fn rkhs_norm(a: &RkhsElement) -> Result<f64> {
    let sq = rkhs_inner(a, a)?.re;
    let mut scale = 0.0;
    for (c, p) in a.coeffs.iter().zip(&a.points) {
        scale += c.norm_sqr() * a.kernel.eval_unchecked(p, p)?.norm();
    }
    if sq < -NORM_TOL * scale.max(1.0) {
        return Err(Error::PsdViolation { min_eigenvalue: sq });
    }
    Ok(sq.max(0.0).sqrt())
}

/// `T: ℋ(L) → ℋ(K)`, `L(·, x) ↦ K(·, x)`: same coefficients and points,
/// now read against `k`. It is a contraction when `K ≪ L` on the points;
/// that is the caller's certificate to hold.
pub fn contraction_map(a: &RkhsElement, k: &Kernel) -> Result<RkhsElement> {
    RkhsElement::new(k, a.points.clone(), a.coeffs.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipBound {
    /// Least `C` with `|Σ cᵢ f(xᵢ)|² ≤ C·c*Gc` on these points;
    /// `f64::INFINITY` when `f` leaves the range of `G`.
    pub value: f64,
    /// Norm of the part of `f` outside the numerical range of `G`, over `‖f‖`.
    pub outside_range: f64,
    pub rank: usize,
    pub diagnostic: Option<String>,
}

/// Finite-set membership constant `f* G⁺ f`.
pub fn membership_bound(kernel: &Kernel, f_values: &[C64], points: &[Point]) -> Result<MembershipBound> {
    if f_values.len() != points.len() {
        return Err(Error::LengthMismatch {
            what: "membership samples",
            expected: points.len(),
            found: f_values.len(),
        });
    }
    let g = gram(kernel, points)?;
    let (vals, vecs) = linalg::hermitian_eigen(g.matrix());
    let sigma_max = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = PINV_CUTOFF * sigma_max;
    let f_norm = linalg::norm2(f_values);

    let mut value = 0.0;
    let mut in_range_sq = 0.0;
    let mut rank = 0;
    for (k, &lambda) in vals.iter().enumerate() {
        if lambda.abs() < cutoff || lambda <= 0.0 {
            continue;
        }
        rank += 1;
        let proj: C64 = (0..points.len()).map(|i| vecs[(i, k)].conj() * f_values[i]).sum();
        in_range_sq += proj.norm_sqr();
        value += proj.norm_sqr() / lambda;
    }
    let outside = (f_norm * f_norm - in_range_sq).max(0.0).sqrt();
    let outside_range = if f_norm > 0.0 { outside / f_norm } else { 0.0 };
    if outside_range > RANGE_TOL {
        return Ok(MembershipBound {
            value: f64::INFINITY,
            outside_range,
            rank,
            diagnostic: Some(format!(
                "samples leave the range of the Gram matrix (relative residual {outside_range:e}, rank {rank} of {})",
                points.len()
            )),
        });
    }
    Ok(MembershipBound {
        value,
        outside_range,
        rank,
        diagnostic: None,
    })
}
