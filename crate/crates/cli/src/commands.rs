//! One function per subcommand. Each parses its own descriptor type, runs the
//! library operation and returns the artifact plus an optional failure.

use pdboundary::boundary::{self, mercer_frame_of, parseval_frame, reconstruction_residual};
use pdboundary::drury_arveson::{self, BallPoint, FockCoefficients, InducedMethod};
use pdboundary::gaussian::{self, GaussianSampler};
use pdboundary::kernel::{gram, kernel_leq};
use pdboundary::learn::{self, TrainingSet};
use pdboundary::linalg::trace_re;
use pdboundary::{cantor, network, random, Point, C64};
use serde::Deserialize;
use serde_json::json;

use crate::descriptor::{complex, parse, Complex, KernelSpec, NetworkSpec, PointsSpec, SetupSpec, SphereSpec};
use crate::output::{cjson, cjson_list, fjson, int, Artifact, Cell, Csv};
use crate::{CliError, Context, Outcome, Subcommand};

pub fn dispatch(sub: Subcommand, text: &str, ctx: Context) -> Result<Outcome, CliError> {
    match sub {
        Subcommand::Gram => gram_cmd(parse(text)?, ctx),
        Subcommand::OrderCheck => order_check(parse(text)?, ctx),
        Subcommand::BoundaryCertify => boundary_certify(parse(text)?, ctx),
        Subcommand::AdjointCheck => adjoint_check(parse(text)?, ctx),
        Subcommand::Frame => frame(parse(text)?, ctx),
        Subcommand::GpSample => gp_sample(parse(text)?, ctx),
        Subcommand::ItoCheck => ito_check(parse(text)?, ctx),
        Subcommand::DaInduced => da_induced(parse(text)?, ctx),
        Subcommand::DaDilation => da_dilation(parse(text)?, ctx),
        Subcommand::NetworkGreen => network_green(parse(text)?, ctx),
        Subcommand::CantorSpectral => cantor_spectral(parse(text)?, ctx),
        Subcommand::CantorIdentity => cantor_identity(parse(text)?, ctx),
        Subcommand::Fit => fit(parse(text)?, ctx),
        Subcommand::Stationarity => stationarity(parse(text)?, ctx),
    }
}

fn matrix_csv(m: &pdboundary::CMatrix) -> Csv {
    let mut csv = Csv::new(&["i", "j", "re", "im"]);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            csv.row(vec![int(i), int(j), Cell::Complex(m[(i, j)])]);
        }
    }
    csv
}

fn positive_count(what: &str, n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(CliError::Input(format!("descriptor field `{what}`: must be at least 1")));
    }
    Ok(n)
}

// ---------------------------------------------------------------- gram

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramDescriptor {
    pub kernel: KernelSpec,
    pub points: PointsSpec,
    pub seed: Option<u64>,
}

fn gram_cmd(d: GramDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let k = d.kernel.build()?;
    let pts = d.points.build(ctx.seed.or(d.seed))?;
    let g = gram(&k, &pts)?;
    Ok(Outcome::ok(Artifact::Csv(matrix_csv(g.matrix()))))
}

// ---------------------------------------------------------------- order-check

/// Either a generic `kernel ≪ dominant` check on explicit points, or the
/// sphere-induced Drury–Arveson certificate.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderDescriptor {
    pub kernel: Option<KernelSpec>,
    pub dominant: Option<KernelSpec>,
    pub points: Option<PointsSpec>,
    pub drury_arveson: Option<DaOrderSpec>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DaOrderSpec {
    pub k: usize,
    /// Number of random ball points.
    pub points: usize,
    /// Monte Carlo sphere nodes; the closed form is used when absent.
    pub nodes: Option<usize>,
}

fn order_check(d: OrderDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let tol = ctx.tol(d.tol, 1e-8);
    let seed = ctx.seed(d.seed);
    match (&d.drury_arveson, &d.kernel, &d.dominant) {
        (Some(da), None, None) => {
            if d.points.is_some() {
                return Err(CliError::Input(
                    "descriptor field `points`: not used with `drury_arveson`; set `drury_arveson.points`".into(),
                ));
            }
            positive_count("drury_arveson.k", da.k)?;
            positive_count("drury_arveson.points", da.points)?;
            let method = match da.nodes {
                Some(nodes) => InducedMethod::Quadrature {
                    nodes: positive_count("drury_arveson.nodes", nodes)?,
                    seed: random::derive_seed(seed, 1),
                },
                None => InducedMethod::Exact,
            };
            let cert = drury_arveson::da_order_certificate(da.k, da.points, method, seed, tol)?;
            let report = json!({
                "kind": "drury-arveson",
                "k": da.k,
                "method": if da.nodes.is_some() { "monte-carlo" } else { "closed-form" },
                "holds": cert.holds,
                "margin": fjson(cert.margin),
                "tol": tol,
                "points": cert.points.iter().map(|p| cjson_list(p.coords())).collect::<Vec<_>>(),
            });
            let margin = cert.margin;
            Ok(Outcome::check(Artifact::Json(report), cert.holds, || {
                format!("order certificate failed: margin {margin:e} below -{tol:e}")
            }))
        }
        (None, Some(k), Some(l)) => {
            let pts = d
                .points
                .as_ref()
                .ok_or_else(|| CliError::Input("descriptor field `points`: required with `kernel`".into()))?
                .build(ctx.seed.or(d.seed))?;
            let cert = kernel_leq(&k.build()?, &l.build()?, &pts, tol)?;
            let report = json!({
                "kind": "generic",
                "holds": cert.holds,
                "margin": fjson(cert.margin),
                "threshold": fjson(cert.threshold),
                "tol": tol,
            });
            let margin = cert.margin;
            let threshold = cert.threshold;
            Ok(Outcome::check(Artifact::Json(report), cert.holds, || {
                format!("order certificate failed: margin {margin:e} below -{threshold:e}")
            }))
        }
        _ => Err(CliError::Input(
            "descriptor needs either `drury_arveson` or both `kernel` and `dominant`".into(),
        )),
    }
}

// ---------------------------------------------------------------- boundary-certify

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyDescriptor {
    pub setup: SetupSpec,
    pub points: PointsSpec,
    /// `"boundary"` (default) or `"sub-boundary"`.
    #[serde(default)]
    pub require: Requirement,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

#[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    #[default]
    #[serde(rename = "boundary")]
    Boundary,
    #[serde(rename = "sub-boundary")]
    SubBoundary,
}

fn boundary_certify(d: CertifyDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let tol = ctx.tol(d.tol, 1e-10);
    let pts = d.points.build(ctx.seed.or(d.seed))?;
    let setup = d.setup.build(&pts, ctx.seed.or(d.seed))?;
    let cert = boundary::certify(&setup, &pts, tol)?;
    let passed = match d.require {
        Requirement::Boundary => cert.is_boundary,
        Requirement::SubBoundary => cert.is_sub_boundary,
    };
    let report = json!({
        "is_boundary": cert.is_boundary,
        "is_sub_boundary": cert.is_sub_boundary,
        "max_equality_residual": fjson(cert.max_equality_residual),
        "ordering_margin": fjson(cert.ordering_margin),
        "tol": tol,
    });
    let (res, margin) = (cert.max_equality_residual, cert.ordering_margin);
    Ok(Outcome::check(Artifact::Json(report), passed, || {
        format!("boundary certificate failed: residual {res:e}, ordering margin {margin:e}, tol {tol:e}")
    }))
}

// ---------------------------------------------------------------- adjoint-check

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjointDescriptor {
    pub setup: SetupSpec,
    pub points: PointsSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

fn default_trials() -> usize {
    20
}

fn adjoint_check(d: AdjointDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let tol = ctx.tol(d.tol, 1e-10);
    let seed = ctx.seed(d.seed);
    let pts = d.points.build(ctx.seed.or(d.seed))?;
    let setup = d.setup.build(&pts, ctx.seed.or(d.seed))?;
    // Run without the internal cutoff so the report is written even on failure.
    let rep = boundary::verify_adjoint(&setup, &pts, positive_count("trials", d.trials)?, seed, f64::INFINITY)?;

    let factor = factorization_residual(&setup, &pts)?;
    let passed = rep.max_scaled_residual <= tol && factor <= tol;
    let report = json!({
        "trials": rep.trials,
        "max_residual": fjson(rep.max_residual),
        "max_scaled_residual": fjson(rep.max_scaled_residual),
        "factorization_residual": fjson(factor),
        "tol": tol,
        "passed": passed,
    });
    let scaled = rep.max_scaled_residual;
    Ok(Outcome::check(Artifact::Json(report), passed, || {
        format!("adjoint check failed: scaled residual {scaled:e}, factorization residual {factor:e}, tol {tol:e}")
    }))
}

/// Largest `|K^(μ)(x, y) - (T_B* T_B K_y)(x)| / max(1, |K^(μ)(x, y)|)`.
pub fn factorization_residual(setup: &boundary::BoundarySetup, pts: &[Point]) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for x in pts {
        for y in pts {
            let (induced, composed) = boundary::factor_check(setup, x, y)?;
            worst = worst.max((induced - composed).norm() / induced.norm().max(1.0));
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------- frame

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDescriptor {
    /// `"mercer"` (eigenvector frame of the Gram) or `"parseval"`
    /// (frame from a boundary setup).
    pub kind: FrameKind,
    pub kernel: Option<KernelSpec>,
    pub setup: Option<SetupSpec>,
    pub points: PointsSpec,
    #[serde(default = "default_frame_trials")]
    pub trials: usize,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

fn default_frame_trials() -> usize {
    50
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    #[serde(rename = "mercer")]
    Mercer,
    #[serde(rename = "parseval")]
    Parseval,
}

fn frame(d: FrameDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let pts = d.points.build(ctx.seed.or(d.seed))?;
    match d.kind {
        FrameKind::Mercer => {
            let kernel = match (&d.kernel, &d.setup) {
                (Some(k), None) => k.build()?,
                (None, Some(s)) => s.build(&pts, ctx.seed.or(d.seed))?.kernel,
                _ => return Err(CliError::Input("mercer frame needs exactly one of `kernel`, `setup`".into())),
            };
            let g = gram(&kernel, &pts)?;
            let frame = mercer_frame_of(g.matrix())?;
            let residual = reconstruction_residual(g.matrix(), &frame);
            let tol = ctx.tol(d.tol, 1e-12);
            let bound = tol * trace_re(g.matrix()).max(f64::MIN_POSITIVE);
            let mut csv = Csv::new(&["n", "i", "re", "im"]);
            for (n, phi) in frame.iter().enumerate() {
                for (i, v) in phi.iter().enumerate() {
                    csv.row(vec![int(n), int(i), Cell::Complex(*v)]);
                }
            }
            Ok(Outcome::check(Artifact::Csv(csv), residual <= bound, || {
                format!("Mercer reconstruction residual {residual:e} exceeds {bound:e}")
            }))
        }
        FrameKind::Parseval => {
            let Some(spec) = &d.setup else {
                return Err(CliError::Input("descriptor field `setup`: required for a parseval frame".into()));
            };
            if d.kernel.is_some() {
                return Err(CliError::Input(
                    "descriptor field `kernel`: not used for a parseval frame; the setup carries its kernel".into(),
                ));
            }
            let setup = spec.build(&pts, ctx.seed.or(d.seed))?;
            let tol = ctx.tol(d.tol, 1e-8);
            let pf = parseval_frame(&setup.kernel, &pts, &setup.features)?;
            let seed = ctx.seed(d.seed);
            let mut worst = 0.0f64;
            if pf.rank > 0 {
                for t in 0..positive_count("trials", d.trials)? {
                    let mut rng = random::rng(random::derive_seed(seed, t as u64));
                    let a = random::gaussian_vector(&mut rng, pf.rank);
                    let f = pf.complement_element(&a)?;
                    let norm_sq = f.norm()?.powi(2);
                    let energy = pf.frame_energy(&f)?;
                    worst = worst.max((energy - norm_sq).abs() / norm_sq.max(f64::MIN_POSITIVE));
                }
            }
            let mut csv = Csv::new(&["n", "i", "re", "im"]);
            for (n, phi) in pf.vectors.iter().enumerate() {
                for (i, x) in pts.iter().enumerate() {
                    csv.row(vec![int(n), int(i), Cell::Complex(phi.evaluate(x)?)]);
                }
            }
            Ok(Outcome::check(Artifact::Csv(csv), worst <= tol, || {
                format!("frame identity relative error {worst:e} exceeds {tol:e}")
            }))
        }
    }
}

// ---------------------------------------------------------------- gp-sample

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GpDescriptor {
    pub kernel: KernelSpec,
    pub points: PointsSpec,
    pub samples: usize,
    #[serde(default)]
    pub method: GpMethod,
    /// `"samples"` writes the draws; `"covariance"` writes the empirical
    /// covariance and checks it against the Gram.
    #[serde(default)]
    pub report: GpReport,
    pub seed: Option<u64>,
}

#[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
pub enum GpMethod {
    #[default]
    #[serde(rename = "cholesky")]
    Cholesky,
    #[serde(rename = "karhunen-loeve")]
    KarhunenLoeve,
}

#[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
pub enum GpReport {
    #[default]
    #[serde(rename = "samples")]
    Samples,
    #[serde(rename = "covariance")]
    Covariance,
}

fn gp_sample(d: GpDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let seed = ctx.seed(d.seed);
    let n = positive_count("samples", d.samples)?;
    let kernel = d.kernel.build()?;
    let pts = d.points.build(ctx.seed.or(d.seed))?;
    let g = gram(&kernel, &pts)?.into_matrix();
    let (samples, target) = match d.method {
        GpMethod::Cholesky => (GaussianSampler::from_gram(&g)?.sample(n, seed), g.clone()),
        // Real KL coefficients give E[V_x conj(V_y)] = K(y, x).
        GpMethod::KarhunenLoeve => (gaussian::kl_sample(&mercer_frame_of(&g)?, n, seed)?, g.transpose()),
    };
    match d.report {
        GpReport::Samples => {
            let mut csv = Csv::new(&["sample", "point", "re", "im"]);
            for r in 0..samples.nrows() {
                for i in 0..samples.ncols() {
                    csv.row(vec![int(r), int(i), Cell::Complex(samples[(r, i)])]);
                }
            }
            Ok(Outcome::ok(Artifact::Csv(csv)))
        }
        GpReport::Covariance => {
            let emp = gaussian::empirical_covariance(&samples);
            let check = gaussian::check_covariance(&emp, &target, n)?;
            let scale = ctx.tol_scale;
            let passed = check.max_ratio <= scale;
            let mut csv = Csv::new(&["i", "j", "empirical_re", "empirical_im", "target_re", "target_im", "bound"]);
            for i in 0..emp.nrows() {
                for j in 0..emp.ncols() {
                    let b = gaussian::statistical_bound(target[(i, i)].re, target[(j, j)].re, target[(i, j)], n);
                    csv.row(vec![
                        int(i),
                        int(j),
                        Cell::Complex(emp[(i, j)]),
                        Cell::Complex(target[(i, j)]),
                        Cell::Real(b * scale),
                    ]);
                }
            }
            let ratio = check.max_ratio;
            Ok(Outcome::check(Artifact::Csv(csv), passed, || {
                format!("covariance outside the 5-sigma bound: worst error/bound ratio {ratio:.3}")
            }))
        }
    }
}

// ---------------------------------------------------------------- ito-check

/// Wiener-integral disintegration: draws `∫ k_x dW` and compares the
/// empirical covariance with the induced kernel.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItoDescriptor {
    pub setup: SetupSpec,
    pub points: PointsSpec,
    pub samples: usize,
    pub seed: Option<u64>,
}

fn ito_check(d: ItoDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let seed = ctx.seed(d.seed);
    let pts = d.points.build(ctx.seed.or(d.seed))?;
    let setup = d.setup.build(&pts, ctx.seed.or(d.seed))?;
    let rep = gaussian::disintegration_check(&setup, &pts, positive_count("samples", d.samples)?, seed)?;
    let passed = rep.check.max_ratio <= ctx.tol_scale;
    let n = rep.empirical.nrows();
    let rows = |m: &pdboundary::CMatrix| -> Vec<serde_json::Value> {
        (0..n)
            .map(|i| json!((0..n).map(|j| cjson(m[(i, j)])).collect::<Vec<_>>()))
            .collect()
    };
    let report = json!({
        "samples": rep.samples,
        "passed": passed,
        "max_error": fjson(rep.check.max_error),
        "max_ratio": fjson(rep.check.max_ratio),
        "failures": rep.check.failures,
        "kernel_error": fjson(rep.kernel_error),
        "empirical": rows(&rep.empirical),
        "induced": rows(&rep.induced),
    });
    let ratio = rep.check.max_ratio;
    Ok(Outcome::check(Artifact::Json(report), passed, || {
        format!("Wiener covariance outside the 5-sigma bound: worst error/bound ratio {ratio:.3}")
    }))
}

// ---------------------------------------------------------------- da-induced

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DaInducedDescriptor {
    pub sphere: SphereSpec,
    /// Pairs `[z, w]` of ball points.
    pub pairs: Vec<[Vec<Complex>; 2]>,
    /// When present, every `|quadrature - exact|` must stay below it.
    pub tol: Option<f64>,
}

fn da_induced(d: DaInducedDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    if d.pairs.is_empty() {
        return Err(CliError::Input("descriptor field `pairs`: no pairs given".into()));
    }
    let sphere = d.sphere.build(ctx.seed)?;
    let mut csv = Csv::new(&["pair", "induced_re", "induced_im", "exact_re", "exact_im", "abs_diff"]);
    let mut worst = 0.0f64;
    for (p, [z, w]) in d.pairs.iter().enumerate() {
        let z = BallPoint::new(z.iter().map(|c| complex(*c)).collect())?;
        let w = BallPoint::new(w.iter().map(|c| complex(*c)).collect())?;
        let induced = drury_arveson::da_induced(&z, &w, &sphere)?;
        let u: C64 = z.coords().iter().zip(w.coords()).map(|(a, b)| a.conj() * b).sum();
        let exact = drury_arveson::induced_series(d.sphere.k, u)?;
        let diff = (induced - exact).norm();
        worst = worst.max(diff);
        csv.row(vec![int(p), Cell::Complex(induced), Cell::Complex(exact), Cell::Real(diff)]);
    }
    let tol = d.tol.map(|t| t * ctx.tol_scale);
    let passed = tol.is_none_or(|t| worst <= t);
    Ok(Outcome::check(Artifact::Csv(csv), passed, || {
        format!("induced kernel deviates by {worst:e}, above {:e}", tol.unwrap_or(0.0))
    }))
}

// ---------------------------------------------------------------- da-dilation

/// Dilations `f_r(z) = f(rz)` of a one-variable polynomial.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationDescriptor {
    /// Taylor coefficients `a₀, a₁, …`.
    pub coefficients: Vec<Complex>,
    /// Dilation radii in `[0, 1]`, in increasing order.
    pub radii: Vec<f64>,
}

fn da_dilation(d: DilationDescriptor, _ctx: Context) -> Result<Outcome, CliError> {
    if d.coefficients.is_empty() || d.radii.is_empty() {
        return Err(CliError::Input("descriptor needs nonempty `coefficients` and `radii`".into()));
    }
    if d.radii.windows(2).any(|w| w[1] < w[0]) {
        return Err(CliError::Input("descriptor field `radii`: must be nondecreasing".into()));
    }
    let f = FockCoefficients::univariate(&d.coefficients.iter().map(|c| complex(*c)).collect::<Vec<_>>());
    let mut csv = Csv::new(&["r", "norm", "dilated_norm"]);
    let mut previous = 0.0f64;
    let mut monotone = true;
    let mut bounded = true;
    for &r in &d.radii {
        let (norm, dilated) = drury_arveson::dilation_norms(&f, r)?;
        monotone &= dilated >= previous;
        bounded &= dilated <= norm;
        previous = dilated;
        csv.row(vec![Cell::Real(r), Cell::Real(norm), Cell::Real(dilated)]);
    }
    Ok(Outcome::check(Artifact::Csv(csv), monotone && bounded, || {
        "dilated norms are not nondecreasing in r or exceed the undilated norm".to_string()
    }))
}

// ---------------------------------------------------------------- network-green

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenDescriptor {
    pub network: NetworkSpec,
    /// `"all"` or a list of vertex pairs.
    pub pairs: Pairs,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum Pairs {
    Keyword(AllPairs),
    List(Vec<[usize; 2]>),
}

#[derive(Deserialize)]
pub enum AllPairs {
    #[serde(rename = "all")]
    All,
}

fn network_green(d: GreenDescriptor, _ctx: Context) -> Result<Outcome, CliError> {
    let net = d.network.build()?;
    let g = network::GreenSolver::new(&net)?.matrix()?;
    let n = net.vertex_count();
    let pairs: Vec<(usize, usize)> = match &d.pairs {
        Pairs::Keyword(AllPairs::All) => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        Pairs::List(l) => l.iter().map(|[i, j]| (*i, *j)).collect(),
    };
    let mut csv = Csv::new(&["i", "j", "green"]);
    for (i, j) in pairs {
        if i >= n || j >= n {
            return Err(CliError::Input(format!(
                "descriptor field `pairs`: vertex pair ({i}, {j}) outside 0..{n}"
            )));
        }
        csv.row(vec![int(i), int(j), Cell::Real(g[(i, j)])]);
    }
    Ok(Outcome::ok(Artifact::Csv(csv)))
}

// ---------------------------------------------------------------- cantor-spectral

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralDescriptor {
    /// Quadrature level `m` (`4^m` nodes).
    pub level: usize,
    /// Digit depth of `Λ₄`.
    pub depth: usize,
    /// Keep only frequencies `≤ bound`.
    pub bound: Option<u64>,
    pub tol: Option<f64>,
}

fn cantor_spectral(d: SpectralDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let tol = ctx.tol(d.tol, 1e-8);
    let q = cantor::cantor_nodes(d.level)?;
    let mut lambda = cantor::lambda4(d.depth)?;
    if let Some(b) = d.bound {
        lambda = lambda.truncated(b);
    }
    let g = cantor::spectral_gram(&q, &lambda)?;
    let el = lambda.elements();
    let mut csv = Csv::new(&["i", "j", "lambda_i", "lambda_j", "re", "im"]);
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            if i != j {
                worst = worst.max(g[(i, j)].norm());
            }
            csv.row(vec![int(i), int(j), Cell::Int(el[i] as i64), Cell::Int(el[j] as i64), Cell::Complex(g[(i, j)])]);
        }
    }
    Ok(Outcome::check(Artifact::Csv(csv), worst <= tol, || {
        format!("largest off-diagonal {worst:e} exceeds {tol:e}")
    }))
}

// ---------------------------------------------------------------- cantor-identity

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityDescriptor {
    pub depth: usize,
    pub level: usize,
    /// Pairs `[z, w]` in the unit disk.
    pub pairs: Vec<[Complex; 2]>,
    pub tol: Option<f64>,
}

fn cantor_identity(d: IdentityDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    if d.pairs.is_empty() {
        return Err(CliError::Input("descriptor field `pairs`: no pairs given".into()));
    }
    let tol = ctx.tol(d.tol, 1e-8);
    let mut csv = Csv::new(&["pair", "induced_re", "induced_im", "kernel_re", "kernel_im", "residual"]);
    let mut worst = 0.0f64;
    for (p, [z, w]) in d.pairs.iter().enumerate() {
        let id = cantor::boundary_identity(complex(*z), complex(*w), d.depth, d.level)?;
        worst = worst.max(id.residual);
        csv.row(vec![int(p), Cell::Complex(id.induced), Cell::Complex(id.kernel), Cell::Real(id.residual)]);
    }
    Ok(Outcome::check(Artifact::Csv(csv), worst <= tol, || {
        format!("boundary identity residual {worst:e} exceeds {tol:e}")
    }))
}

// ---------------------------------------------------------------- fit / stationarity

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitDescriptor {
    pub kernel: KernelSpec,
    pub points: PointsSpec,
    pub targets: Vec<Complex>,
    /// Per-sample weights; all ones when absent.
    pub weights: Option<Vec<f64>>,
    pub beta: f64,
    /// `"lu"` (default) or `"cholesky"` for the symmetrized system.
    #[serde(default)]
    pub solver: Solver,
    pub seed: Option<u64>,
}

#[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    #[default]
    #[serde(rename = "lu")]
    Lu,
    #[serde(rename = "cholesky")]
    Cholesky,
}

fn training_set(d: &FitDescriptor, ctx: Context) -> Result<(pdboundary::Kernel, TrainingSet), CliError> {
    let kernel = d.kernel.build()?;
    let pts = d.points.build(ctx.seed.or(d.seed))?;
    let targets: Vec<C64> = d.targets.iter().map(|c| complex(*c)).collect();
    let data = match &d.weights {
        Some(w) => TrainingSet::new(pts, w.clone(), targets)?,
        None => TrainingSet::unweighted(pts, targets)?,
    };
    Ok((kernel, data))
}

fn solve(d: &FitDescriptor, kernel: &pdboundary::Kernel, data: &TrainingSet) -> Result<learn::FitResult, CliError> {
    Ok(match d.solver {
        Solver::Lu => learn::fit(kernel, data, d.beta)?,
        Solver::Cholesky => learn::fit_symmetrized(kernel, data, d.beta)?,
    })
}

fn fit(d: FitDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let (kernel, data) = training_set(&d, ctx)?;
    let r = solve(&d, &kernel, &data)?;
    let report = json!({
        "coefficients": cjson_list(r.element.coeffs()),
        "objective": fjson(r.objective),
        "residual": cjson_list(&r.residual),
        "stationarity_bound": fjson(r.stationarity_bound),
    });
    Ok(Outcome::ok(Artifact::Json(report)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarityDescriptor {
    pub kernel: KernelSpec,
    pub points: PointsSpec,
    pub targets: Vec<Complex>,
    pub weights: Option<Vec<f64>>,
    pub beta: f64,
    #[serde(default)]
    pub solver: Solver,
    pub seed: Option<u64>,
    #[serde(default = "default_trials")]
    pub directions: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
}

fn default_eps() -> f64 {
    1e-4
}

fn stationarity(d: StationarityDescriptor, ctx: Context) -> Result<Outcome, CliError> {
    let problem = FitDescriptor {
        kernel: d.kernel,
        points: d.points,
        targets: d.targets,
        weights: d.weights,
        beta: d.beta,
        solver: d.solver,
        seed: d.seed,
    };
    if !(d.eps.is_finite() && d.eps > 0.0) {
        return Err(CliError::Input(format!("descriptor field `eps`: must be positive, got {}", d.eps)));
    }
    let (kernel, data) = training_set(&problem, ctx)?;
    let r = solve(&problem, &kernel, &data)?;
    let seed = ctx.seed(problem.seed);
    let rep = learn::stationarity_check(
        &kernel,
        &data,
        problem.beta,
        &r.element,
        positive_count("directions", d.directions)?,
        d.eps,
        seed,
    )?;
    let bound = rep.tol * ctx.tol_scale * rep.scale;
    let passed = rep.max_derivative <= bound;
    let report = json!({
        "max_derivative": fjson(rep.max_derivative),
        "scale": fjson(rep.scale),
        "tol": fjson(rep.tol * ctx.tol_scale),
        "bound": fjson(bound),
        "passed": passed,
        "objective": fjson(r.objective),
    });
    let m = rep.max_derivative;
    Ok(Outcome::check(Artifact::Json(report), passed, || {
        format!("directional derivative {m:e} exceeds {bound:e}")
    }))
}
