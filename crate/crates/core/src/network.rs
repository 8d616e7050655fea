//! Resistance networks, the energy space, and Green's functions.
//!
//! Vertices are `0..n`; functions on them are value vectors indexed by vertex.
//! The energy inner product is `⟨f, g⟩_E = ½ Σ_x Σ_{y∼x} c_xy conj(f(x) - f(y)) (g(x) - g(y))`,
//! and `v_x` is the Riesz representer of `f ↦ f(x) - f(o)`, grounded at `v_x(o) = 0`.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::boundary::{BoundarySetup, DiscreteMeasure, FeatureSystem};
use crate::error::{Error, Result};
use crate::kernel::{Domain, Kernel, Point};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceNetwork {
    /// Undirected edges `(x, y, c_xy)` with `x < y`.
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
    base: usize,
}

impl ResistanceNetwork {
    /// Network on vertices `0..n` with base point `base`. Each undirected
    /// edge is listed once; conductances must be positive and finite.
    pub fn new(n: usize, edges: &[(usize, usize, f64)], base: usize) -> Result<Self> {
        if base >= n {
            return Err(Error::InvalidInput(format!("base point {base} outside 0..{n}")));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        for &(x, y, c) in edges {
            if x >= n || y >= n {
                return Err(Error::InvalidInput(format!("edge ({x}, {y}) outside 0..{n}")));
            }
            if x == y {
                return Err(Error::InvalidInput(format!("self-loop at {x}")));
            }
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidInput(format!("conductance of ({x}, {y}) is {c}")));
            }
            if adjacency[x].iter().any(|&(z, _)| z == y) {
                return Err(Error::InvalidInput(format!("edge ({x}, {y}) listed twice")));
            }
            adjacency[x].push((y, c));
            adjacency[y].push((x, c));
            stored.push((x.min(y), x.max(y), c));
        }
        Ok(ResistanceNetwork {
            edges: stored,
            adjacency,
            base,
        })
    }

    /// The chain `0 - 1 - … - n` with unit conductances, grounded at 0.
    pub fn chain(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, i + 1, 1.0)).collect();
        Self::new(n + 1, &edges, 0).expect("chain is well formed")
    }

    /// Center 0 joined to `spokes` leaves with unit conductances, grounded at the center.
    pub fn star(spokes: usize) -> Self {
        let edges: Vec<_> = (1..=spokes).map(|i| (0, i, 1.0)).collect();
        Self::new(spokes + 1, &edges, 0).expect("star is well formed")
    }

    /// Two vertices joined by one edge of conductance `c`, grounded at 0.
    pub fn pair(c: f64) -> Result<Self> {
        Self::new(2, &[(0, 1, c)], 0)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adjacency[x]
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x >= self.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "vertex {x} outside 0..{}",
                self.vertex_count()
            )));
        }
        Ok(())
    }

    fn check_function(&self, f: &[C64]) -> Result<()> {
        if f.len() != self.vertex_count() {
            return Err(Error::LengthMismatch {
                what: "function on vertices",
                expected: self.vertex_count(),
                found: f.len(),
            });
        }
        Ok(())
    }

    /// First vertex that cannot reach the base point, if any.
    pub fn unreachable_vertex(&self) -> Option<usize> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([self.base]);
        seen[self.base] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    /// Dense graph Laplacian `Δ = D - C`.
    pub fn laplacian_matrix(&self) -> DMatrix<f64> {
        let n = self.vertex_count();
        let mut l = DMatrix::zeros(n, n);
        for &(x, y, c) in &self.edges {
            l[(x, x)] += c;
            l[(y, y)] += c;
            l[(x, y)] -= c;
            l[(y, x)] -= c;
        }
        l
    }
}

/// `⟨f, g⟩_E`, conjugate-linear in `f`.
pub fn energy_inner(net: &ResistanceNetwork, f: &[C64], g: &[C64]) -> Result<C64> {
    net.check_function(f)?;
    net.check_function(g)?;
    Ok(net
        .edges
        .iter()
        .map(|&(x, y, c)| (f[x] - f[y]).conj() * (g[x] - g[y]) * c)
        .sum())
}

pub fn energy_norm(net: &ResistanceNetwork, f: &[C64]) -> Result<f64> {
    Ok(energy_inner(net, f, f)?.re.max(0.0).sqrt())
}

/// `(Δf)(x) = Σ_{y∼x} c_xy (f(x) - f(y))`.
pub fn laplacian_apply(net: &ResistanceNetwork, f: &[C64], x: usize) -> Result<C64> {
    net.check_function(f)?;
    net.check_vertex(x)?;
    Ok(net.adjacency[x].iter().map(|&(y, c)| (f[x] - f[y]) * c).sum())
}

/// `c(x) = Σ_{y∼x} c_xy`.
pub fn conductance_degree(net: &ResistanceNetwork, x: usize) -> Result<f64> {
    net.check_vertex(x)?;
    Ok(net.adjacency[x].iter().map(|&(_, c)| c).sum())
}

/// `‖δ_x‖_E`; its square is `c(x)`.
pub fn delta_embedding_norm(net: &ResistanceNetwork, x: usize) -> Result<f64> {
    net.check_vertex(x)?;
    let mut delta = vec![C64::new(0.0, 0.0); net.vertex_count()];
    delta[x] = C64::new(1.0, 0.0);
    energy_norm(net, &delta)
}

/// LU factorization of the Laplacian with the base row and column removed.
#[derive(Debug, Clone)]
pub struct GreenSolver {
    net: ResistanceNetwork,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl GreenSolver {
    pub fn new(net: &ResistanceNetwork) -> Result<Self> {
        if let Some(vertex) = net.unreachable_vertex() {
            return Err(Error::Disconnected { vertex });
        }
        let reduced = net.laplacian_matrix().remove_row(net.base).remove_column(net.base);
        Ok(GreenSolver {
            net: net.clone(),
            lu: reduced.lu(),
        })
    }

    /// `v_x`: `Δv_x = δ_x - δ_o` with `v_x(o) = 0`.
    pub fn element(&self, x: usize) -> Result<Vec<f64>> {
        self.net.check_vertex(x)?;
        let n = self.net.vertex_count();
        let o = self.net.base;
        let mut out = vec![0.0; n];
        if x == o || n == 1 {
            return Ok(out);
        }
        let mut rhs = nalgebra::DVector::zeros(n - 1);
        rhs[if x < o { x } else { x - 1 }] = 1.0;
        let sol = self
            .lu
            .solve(&rhs)
            .ok_or_else(|| Error::InvariantViolation("reduced Laplacian is singular".into()))?;
        for (v, s) in (0..n).filter(|&v| v != o).zip(sol.iter()) {
            out[v] = *s;
        }
        Ok(out)
    }

    /// `G` with `G(x, y) = v_y(x)`, symmetrized.
    pub fn matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.net.vertex_count();
        let mut g = DMatrix::zeros(n, n);
        for y in 0..n {
            let v = self.element(y)?;
            for x in 0..n {
                g[(x, y)] = v[x];
            }
        }
        Ok((&g + g.transpose()) * 0.5)
    }
}

/// `v_x` as a value vector.
pub fn green_element(net: &ResistanceNetwork, x: usize) -> Result<Vec<f64>> {
    GreenSolver::new(net)?.element(x)
}

/// `G(x, y) = v_y(x) = ⟨v_x, v_y⟩_E`.
pub fn green_kernel(net: &ResistanceNetwork, x: usize, y: usize) -> Result<f64> {
    net.check_vertex(x)?;
    Ok(green_element(net, y)?[x])
}

/// `G` as a [`Kernel`] on the network's vertices (one solve per vertex, up front).
pub fn green_kernel_fn(net: &ResistanceNetwork) -> Result<Kernel> {
    let g = GreenSolver::new(net)?.matrix()?;
    Ok(Kernel::new(
        "green",
        Domain::Vertex {
            count: Some(net.vertex_count()),
        },
        move |x, y| {
            let (i, j) = (x.as_vertex().unwrap_or(0), y.as_vertex().unwrap_or(0));
            Ok(C64::new(g[(i, j)], 0.0))
        },
    ))
}

/// Indicator boundary of the chain `{0..n}`: midpoints `(j + ½)h` of a grid
/// of step `h` on `[0, n]` with weights `h`, and `k_i(t) = 1` for `t < i`.
/// The induced kernel is exactly `i ∧ j` when `h` divides 1.
pub fn chain_boundary(n: usize, step: f64) -> Result<FeatureSystem> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
    }
    let cells = n as f64 / step;
    let m = cells.round();
    if m < 1.0 || (cells - m).abs() > 1e-9 * cells.max(1.0) {
        return Err(Error::InvalidInput(format!("grid step {step} does not divide [0, {n}]")));
    }
    let m = m as usize;
    let mids: Vec<f64> = (0..m).map(|j| (j as f64 + 0.5) * step).collect();
    let measure = DiscreteMeasure::new(mids.iter().map(|&t| Point::real(t)).collect(), vec![step; m])?;
    let domain = Domain::Vertex { count: Some(n + 1) };
    Ok(FeatureSystem::new(measure, domain, move |x| {
        let i = x.as_vertex().unwrap_or(0) as f64;
        Ok(mids
            .iter()
            .map(|&t| C64::new(if t < i { 1.0 } else { 0.0 }, 0.0))
            .collect())
    }))
}

/// The chain's Green kernel `i ∧ j` on `{0..n}` with its indicator boundary.
pub fn chain_setup(n: usize, step: f64) -> Result<BoundarySetup> {
    let kernel = Kernel::new("chain-green", Domain::Vertex { count: Some(n + 1) }, |x, y| {
        let (i, j) = (x.as_vertex().unwrap_or(0), y.as_vertex().unwrap_or(0));
        Ok(C64::new(i.min(j) as f64, 0.0))
    });
    Ok(BoundarySetup {
        kernel,
        features: chain_boundary(n, step)?,
    })
}
