//! Kernels, Gram matrices, PSD certificates, and the order relation `K ≪ L`.
//!
//! A [`Kernel`] is an evaluable Hermitian map on a point domain. Gram
//! matrices are assembled from the upper triangle and mirrored with
//! conjugates, so they are Hermitian exactly as stored.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg;
use crate::{CMatrix, C64};

/// A point of some kernel domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    /// A vector in `ℂᵏ`; scalars (real or complex) are 1-vectors.
    Vector(Vec<C64>),
    /// A vertex of a graph, or a nonnegative integer index.
    Vertex(usize),
    /// A finite set of node indices, sorted and deduplicated.
    Set(Vec<usize>),
    /// A node of a product measure.
    Pair(Box<Point>, Box<Point>),
}

impl Point {
    pub fn scalar(z: C64) -> Self {
        Point::Vector(vec![z])
    }

    pub fn real(x: f64) -> Self {
        Point::Vector(vec![C64::new(x, 0.0)])
    }

    pub fn set<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Point::Set(v)
    }

    pub fn pair(a: Point, b: Point) -> Self {
        Point::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_vector(&self) -> Option<&[C64]> {
        match self {
            Point::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_vertex(&self) -> Option<usize> {
        match self {
            Point::Vertex(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&[usize]> {
        match self {
            Point::Set(s) => Some(s),
            _ => None,
        }
    }
}

/// The kind of points a kernel accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    ComplexVector { dim: usize },
    /// Vertices `0..count`, or all nonnegative integers when `count` is `None`.
    Vertex { count: Option<usize> },
    /// Subsets of `0..universe`.
    IndexSet { universe: usize },
    Opaque,
}

impl Domain {
    pub fn check(&self, p: &Point) -> std::result::Result<(), String> {
        match (self, p) {
            (Domain::Opaque, _) => Ok(()),
            (Domain::ComplexVector { dim }, Point::Vector(v)) => {
                if v.len() != *dim {
                    return Err(format!("vector of length {} in a {dim}-dim domain", v.len()));
                }
                if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err("vector has non-finite entries".into());
                }
                Ok(())
            }
            (Domain::Vertex { count }, Point::Vertex(v)) => match count {
                Some(n) if v >= n => Err(format!("vertex {v} outside 0..{n}")),
                _ => Ok(()),
            },
            (Domain::IndexSet { universe }, Point::Set(s)) => match s.iter().find(|&&j| j >= *universe) {
                Some(j) => Err(format!("index {j} outside 0..{universe}")),
                None => Ok(()),
            },
            (d, p) => Err(format!("{p:?} is not a point of {d:?}")),
        }
    }

    /// Whether two kernels on these domains can be compared pointwise.
    pub fn compatible(&self, other: &Domain) -> bool {
        matches!(self, Domain::Opaque) || matches!(other, Domain::Opaque) || self == other
    }
}

type EvalFn = dyn Fn(&Point, &Point) -> Result<C64> + Send + Sync;

struct KernelInner {
    name: String,
    domain: Domain,
    eval: Box<EvalFn>,
}

/// Shared handle to a kernel. Cloning is cheap; identity (for "same kernel"
/// checks) is the identity of the underlying allocation.
#[derive(Clone)]
pub struct Kernel(Arc<KernelInner>);

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("name", &self.0.name)
            .field("domain", &self.0.domain)
            .finish()
    }
}

impl Kernel {
    pub fn new<F>(name: impl Into<String>, domain: Domain, eval: F) -> Self
    where
        F: Fn(&Point, &Point) -> Result<C64> + Send + Sync + 'static,
    {
        Kernel(Arc::new(KernelInner {
            name: name.into(),
            domain,
            eval: Box::new(eval),
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn domain(&self) -> &Domain {
        &self.0.domain
    }

    pub fn check_point(&self, index: usize, p: &Point) -> Result<()> {
        self.0
            .domain
            .check(p)
            .map_err(|reason| Error::DomainMismatch { index, reason })
    }

    /// `K(x, y)`, with both arguments checked against the domain
    /// (`x` reported as index 0, `y` as index 1).
    pub fn eval(&self, x: &Point, y: &Point) -> Result<C64> {
        self.check_point(0, x)?;
        self.check_point(1, y)?;
        (self.0.eval)(x, y)
    }

    pub(crate) fn eval_unchecked(&self, x: &Point, y: &Point) -> Result<C64> {
        (self.0.eval)(x, y)
    }

    pub fn same_as(&self, other: &Kernel) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// `s·K` for `s ≥ 0`.
    pub fn scaled(&self, s: f64) -> Kernel {
        let inner = self.clone();
        Kernel::new(
            format!("{}*{}", s, self.name()),
            self.domain().clone(),
            move |x, y| Ok(inner.eval_unchecked(x, y)? * s),
        )
    }
}

/// `K(i, j) = min(i, j)` on nonnegative integers.
pub fn min_kernel() -> Kernel {
    Kernel::new("min", Domain::Vertex { count: None }, |x, y| {
        let (i, j) = (x.as_vertex().unwrap_or(0), y.as_vertex().unwrap_or(0));
        Ok(C64::new(i.min(j) as f64, 0.0))
    })
}

/// The constant kernel `K ≡ c` (`c ≥ 0`).
pub fn constant_kernel(domain: Domain, c: f64) -> Kernel {
    Kernel::new(format!("const({c})"), domain, move |_, _| Ok(C64::new(c, 0.0)))
}

/// Pointwise product `K₁·K₂`; its Grams are Schur products of the factors'.
pub fn product_kernel(k1: &Kernel, k2: &Kernel) -> Result<Kernel> {
    if !k1.domain().compatible(k2.domain()) {
        return Err(Error::InvalidInput(format!(
            "product of kernels on {:?} and {:?}",
            k1.domain(),
            k2.domain()
        )));
    }
    let domain = match k1.domain() {
        Domain::Opaque => k2.domain().clone(),
        d => d.clone(),
    };
    let (a, b) = (k1.clone(), k2.clone());
    Ok(Kernel::new(
        format!("({})*({})", k1.name(), k2.name()),
        domain,
        move |x, y| Ok(a.eval_unchecked(x, y)? * b.eval_unchecked(x, y)?),
    ))
}

/// Gram matrix of a kernel on an ordered point list.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    points: Vec<Point>,
    matrix: CMatrix,
}

impl GramMatrix {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace_re(&self.matrix)
    }
}

pub fn gram(kernel: &Kernel, points: &[Point]) -> Result<GramMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidInput("gram needs at least one point".into()));
    }
    for (i, p) in points.iter().enumerate() {
        kernel.check_point(i, p)?;
    }
    let matrix = linalg::hermitian_from_fn(points.len(), |i, j| {
        kernel.eval_unchecked(&points[i], &points[j])
    })?;
    Ok(GramMatrix {
        points: points.to_vec(),
        matrix,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    /// The eigenvalue floor that was applied, `-tol·max(1, trace/N)`.
    pub threshold: f64,
}

/// PSD test with the relative floor `-tol·max(1, trace/N)`.
pub fn is_psd(matrix: &CMatrix, tol: f64) -> Result<PsdReport> {
    linalg::require_hermitian(matrix)?;
    let min_eigenvalue = linalg::min_eigenvalue(matrix);
    let threshold = -linalg::psd_threshold(matrix, tol);
    Ok(PsdReport {
        is_psd: min_eigenvalue >= threshold,
        min_eigenvalue,
        threshold,
    })
}

/// Finite-set certificate for `K ≪ L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderCertificate {
    pub holds: bool,
    /// Smallest eigenvalue of `Gram(L) - Gram(K)`.
    pub margin: f64,
    pub threshold: f64,
}

/// Checks `K ≪ L` on `points`: `Gram(L) - Gram(K)` must be PSD within `tol`.
/// This certifies the order on the given points only.
pub fn kernel_leq(k: &Kernel, l: &Kernel, points: &[Point], tol: f64) -> Result<OrderCertificate> {
    if !k.domain().compatible(l.domain()) {
        return Err(Error::InvalidInput(format!(
            "cannot compare kernels on {:?} and {:?}",
            k.domain(),
            l.domain()
        )));
    }
    let gk = gram(k, points)?;
    let gl = gram(l, points)?;
    let diff = gl.matrix() - gk.matrix();
    let report = is_psd(&diff, tol)?;
    Ok(OrderCertificate {
        holds: report.is_psd,
        margin: report.min_eigenvalue,
        threshold: report.threshold,
    })
}
