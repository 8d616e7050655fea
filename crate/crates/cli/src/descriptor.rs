//! JSON problem descriptors. Every struct rejects unknown fields; the schema
//! is documented in `docs/descriptor.md`.

use std::sync::Arc;

use pdboundary::boundary::{BoundarySetup, DiscreteMeasure, FeatureSystem};
use pdboundary::cantor;
use pdboundary::drury_arveson::{self, SphereMeasure, SphereMode};
use pdboundary::gaussian;
use pdboundary::kernel::{min_kernel, Domain, Kernel, Point};
use pdboundary::network::{self, ResistanceNetwork};
use pdboundary::C64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

/// A complex number as `[re, im]`.
pub type Complex = [f64; 2];

pub fn complex(c: Complex) -> C64 {
    C64::new(c[0], c[1])
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Input(format!("descriptor field `{path}`: {}", e.into_inner()))
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum KernelSpec {
    /// `min(i, j)` on nonnegative integers.
    #[serde(rename = "min")]
    Min,
    /// Green's function of the unit chain `{0..n}`, computed by grounded solves.
    #[serde(rename = "chain-green")]
    ChainGreen { n: usize },
    #[serde(rename = "network-green")]
    NetworkGreen { network: NetworkSpec },
    #[serde(rename = "drury-arveson")]
    DruryArveson { k: usize },
    /// The sphere-induced kernel `Σ cₙ(k)⟨z, w⟩ⁿ`.
    #[serde(rename = "da-induced")]
    DaInduced { k: usize },
    #[serde(rename = "k-lambda4")]
    KLambda4 { depth: usize },
    #[serde(rename = "set")]
    Set { weights: Vec<f64> },
    #[serde(rename = "scaled")]
    Scaled { factor: f64, kernel: Box<KernelSpec> },
}

impl KernelSpec {
    pub fn build(&self) -> Result<Kernel, CliError> {
        Ok(match self {
            KernelSpec::Min => min_kernel(),
            KernelSpec::ChainGreen { n } => network::green_kernel_fn(&ResistanceNetwork::chain(*n))?,
            KernelSpec::NetworkGreen { network } => network::green_kernel_fn(&network.build()?)?,
            KernelSpec::DruryArveson { k } => {
                check_dim(*k)?;
                drury_arveson::kernel(*k)
            }
            KernelSpec::DaInduced { k } => {
                check_dim(*k)?;
                drury_arveson::induced_kernel_exact(*k)
            }
            KernelSpec::KLambda4 { depth } => {
                cantor::lambda4(*depth)?;
                cantor::k_lambda4_kernel(*depth)
            }
            KernelSpec::Set { weights } => gaussian::set_kernel(&DiscreteMeasure::indexed(weights.clone())?),
            KernelSpec::Scaled { factor, kernel } => {
                if !(factor.is_finite() && *factor >= 0.0) {
                    return Err(CliError::Input(format!("kernel scale factor must be nonnegative, got {factor}")));
                }
                kernel.build()?.scaled(*factor)
            }
        })
    }
}

fn check_dim(k: usize) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Input("dimension k must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum NetworkSpec {
    /// `0 - 1 - … - n` with unit conductances, grounded at 0.
    #[serde(rename = "chain")]
    Chain { n: usize },
    #[serde(rename = "star")]
    Star { spokes: usize },
    #[serde(rename = "general")]
    General {
        vertices: usize,
        edges: Vec<(usize, usize, f64)>,
        base: usize,
    },
}

impl NetworkSpec {
    pub fn build(&self) -> Result<ResistanceNetwork, CliError> {
        Ok(match self {
            NetworkSpec::Chain { n } => ResistanceNetwork::chain(*n),
            NetworkSpec::Star { spokes } => ResistanceNetwork::star(*spokes),
            NetworkSpec::General { vertices, edges, base } => ResistanceNetwork::new(*vertices, edges, *base)?,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Vertex(usize),
    Vector(Vec<Complex>),
    Set(SetPoint),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetPoint {
    pub set: Vec<usize>,
}

impl PointSpec {
    pub fn build(&self) -> Point {
        match self {
            PointSpec::Vertex(i) => Point::Vertex(*i),
            PointSpec::Vector(v) => Point::Vector(v.iter().map(|c| complex(*c)).collect()),
            PointSpec::Set(s) => Point::set(s.set.iter().copied()),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointsSpec {
    List(Vec<PointSpec>),
    Range(RangePoints),
    Ball(BallPoints),
}

/// Vertices `a..=b`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangePoints {
    pub range: [usize; 2],
}

/// Random points of the ball of radius `radius` in `ℂᵏ`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallPoints {
    pub ball: BallSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub k: usize,
    pub count: usize,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_radius() -> f64 {
    0.9
}

impl PointsSpec {
    pub fn build(&self, seed_override: Option<u64>) -> Result<Vec<Point>, CliError> {
        let pts = match self {
            PointsSpec::List(l) => l.iter().map(PointSpec::build).collect(),
            PointsSpec::Range(RangePoints { range: [a, b] }) => {
                if a > b {
                    return Err(CliError::Input(format!("empty point range {a}..={b}")));
                }
                (*a..=*b).map(Point::Vertex).collect()
            }
            PointsSpec::Ball(BallPoints { ball }) => {
                check_dim(ball.k)?;
                let seed = seed_override.unwrap_or(ball.seed);
                drury_arveson::random_ball_points(ball.k, ball.count, ball.radius, seed)?
                    .iter()
                    .map(|p| p.to_point())
                    .collect()
            }
        };
        let pts: Vec<Point> = pts;
        if pts.is_empty() {
            return Err(CliError::Input("descriptor field `points`: no points given".into()));
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
pub enum SphereModeSpec {
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
    #[serde(rename = "circle-grid")]
    CircleGrid,
}

impl From<SphereModeSpec> for SphereMode {
    fn from(m: SphereModeSpec) -> Self {
        match m {
            SphereModeSpec::MonteCarlo => SphereMode::MonteCarlo,
            SphereModeSpec::CircleGrid => SphereMode::CircleGrid,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSpec {
    pub k: usize,
    pub mode: SphereModeSpec,
    pub nodes: usize,
    #[serde(default)]
    pub seed: u64,
}

impl SphereSpec {
    pub fn build(&self, seed_override: Option<u64>) -> Result<SphereMeasure, CliError> {
        let seed = seed_override.unwrap_or(self.seed);
        Ok(drury_arveson::sphere_sample(self.k, self.nodes, self.mode.into(), seed)?)
    }
}

/// A kernel together with a candidate boundary.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum SetupSpec {
    /// Chain Green kernel `i ∧ j` on `{0..n}` with indicator features on a
    /// midpoint grid of step `step`.
    #[serde(rename = "chain")]
    Chain { n: usize, step: f64 },
    /// Drury–Arveson kernel with its sphere quadrature.
    #[serde(rename = "drury-arveson")]
    DruryArveson {
        k: usize,
        mode: SphereModeSpec,
        nodes: usize,
        #[serde(default)]
        seed: u64,
    },
    /// `K_Λ₄` with the level-`level` Cantor quadrature.
    #[serde(rename = "cantor")]
    Cantor { depth: usize, level: usize },
    /// Explicit weights and one feature row per descriptor point.
    #[serde(rename = "custom")]
    Custom {
        kernel: KernelSpec,
        weights: Vec<f64>,
        features: Vec<Vec<Complex>>,
    },
}

impl SetupSpec {
    pub fn build(&self, points: &[Point], seed_override: Option<u64>) -> Result<BoundarySetup, CliError> {
        Ok(match self {
            SetupSpec::Chain { n, step } => network::chain_setup(*n, *step)?,
            SetupSpec::DruryArveson { k, mode, nodes, seed } => {
                let sphere = SphereSpec {
                    k: *k,
                    mode: *mode,
                    nodes: *nodes,
                    seed: *seed,
                }
                .build(seed_override)?;
                drury_arveson::sphere_setup(&sphere)
            }
            SetupSpec::Cantor { depth, level } => cantor::cantor_setup(*depth, *level)?,
            SetupSpec::Custom { kernel, weights, features } => {
                let measure = DiscreteMeasure::indexed(weights.clone())?;
                if features.len() != points.len() {
                    return Err(CliError::Input(format!(
                        "descriptor field `setup.features`: {} rows for {} points",
                        features.len(),
                        points.len()
                    )));
                }
                let table: Vec<(Point, Vec<C64>)> = points
                    .iter()
                    .cloned()
                    .zip(features.iter().map(|row| row.iter().map(|c| complex(*c)).collect()))
                    .collect();
                let table = Arc::new(table);
                let fs = FeatureSystem::new(measure, Domain::Opaque, move |x| {
                    table
                        .iter()
                        .find(|(p, _)| p == x)
                        .map(|(_, row)| row.clone())
                        .ok_or_else(|| {
                            pdboundary::Error::InvalidInput(format!("no feature row for {x:?}"))
                        })
                });
                BoundarySetup {
                    kernel: kernel.build()?,
                    features: fs,
                }
            }
        })
    }
}
