//! Sampling checks of the analytic claims over the positive orthant.
//!
//! Every routine is deterministic given its seed: draws come from a ChaCha
//! stream keyed by the seed, and parallel batches take distinct stream ids.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{kernel_basis, rank, snf, subconfig_kernel, PointConfiguration};
use crate::parser::{Field, Generator, ProblemSpec, Sign};
use crate::stratifier::Stratification;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("generator {index} is a sum of monomials, which has no zeros on the positive orthant")]
    SignUnsupported { index: usize },
    #[error("the torus has dimension zero; nothing to sample")]
    EmptyTorus,
    #[error("rank mismatch for {what} at t = {t:?}: expected {expected}, got {got}")]
    RankMismatch {
        what: &'static str,
        t: Vec<f64>,
        expected: usize,
        got: usize,
    },
    #[error("{which} = {point:?} is not in the image of the dense torus (residual {residual:e})")]
    NotInImage {
        which: &'static str,
        point: Vec<f64>,
        residual: f64,
    },
    #[error("the rescaling system is inconsistent (residual {residual:e})")]
    Inconsistent { residual: f64 },
    #[error("the parameter columns of A have rank {rank} < {nu}; fibres are positive-dimensional")]
    RankDeficient { rank: usize, nu: usize },
    #[error("expected {expected} parameter values, got {got}")]
    Arity { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound on normalized generator residuals.
    pub residual: f64,
    /// Relative singular-value cutoff for numeric rank.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-9,
            rank: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusSample {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl TorusSample {
    pub fn worst_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `x < tol`, false for NaN.
fn within(x: f64, tol: f64) -> bool {
    x < tol
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `ν` torus coordinates, log-uniform in `[0.5, 2]`.
fn draw_log_t(rng: &mut impl Rng, nu: usize) -> Vec<f64> {
    let r = 2f64.ln();
    (0..nu).map(|_| rng.random_range(-r..=r)).collect()
}

/// `y_j = t^{a_j}` for `j` in `support`, zero elsewhere, from `log t`.
fn embed(config: &PointConfiguration, log_t: &[f64], support: Option<&[usize]>) -> Vec<f64> {
    let a = config.a.to_f64_rows();
    let mut y = vec![0.0; config.num_points()];
    let all: Vec<usize>;
    let support = match support {
        Some(s) => s,
        None => {
            all = (0..config.num_points()).collect();
            &all
        }
    };
    for &j in support {
        let s: f64 = (0..config.nu()).map(|k| a[k][j] * log_t[k]).sum();
        y[j] = s.exp();
    }
    y
}

fn monomial(y: &[f64], exps: &[u32]) -> f64 {
    y.iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| v.powi(e as i32))
        .product()
}

/// `|y^l -+ y^k|` divided by the larger monomial; zero when both vanish.
pub fn generator_residual(g: &Generator, y: &[f64]) -> f64 {
    let l = monomial(y, &g.lead);
    let k = monomial(y, &g.trail);
    let scale = l.abs().max(k.abs());
    if scale == 0.0 {
        return 0.0;
    }
    match g.sign {
        Sign::Minus => (l - k).abs() / scale,
        Sign::Plus => (l + k).abs() / scale,
    }
}

fn require_minus(spec: &ProblemSpec) -> Result<(), VerifyError> {
    match spec.gens.iter().position(|g| g.sign == Sign::Plus) {
        Some(index) => Err(VerifyError::SignUnsupported { index }),
        None => Ok(()),
    }
}

/// The torus point `Φ_A(t)` with its generator residuals.
pub fn sample_torus_at(
    spec: &ProblemSpec,
    config: &PointConfiguration,
    t: &[f64],
) -> Result<TorusSample, VerifyError> {
    require_minus(spec)?;
    let log_t: Vec<f64> = t.iter().map(|x| x.ln()).collect();
    let y = embed(config, &log_t, None);
    let residuals = spec.gens.iter().map(|g| generator_residual(g, &y)).collect();
    Ok(TorusSample {
        t: t.to_vec(),
        y,
        residuals,
    })
}

pub fn sample_torus(
    spec: &ProblemSpec,
    config: &PointConfiguration,
    count: usize,
    seed: u64,
) -> Result<Vec<TorusSample>, VerifyError> {
    require_minus(spec)?;
    if config.nu() == 0 {
        return Err(VerifyError::EmptyTorus);
    }
    let mut rng = rng_for(seed, 0);
    (0..count)
        .map(|_| {
            let t: Vec<f64> = draw_log_t(&mut rng, config.nu()).into_iter().map(f64::exp).collect();
            sample_torus_at(spec, config, &t)
        })
        .collect()
}

/// Number of singular values above `rel * σ_max`, after scaling each row to
/// unit max-norm.
pub fn numeric_rank(rows: &[Vec<f64>], cols: usize, rel: f64) -> usize {
    let scaled: Vec<f64> = rows
        .iter()
        .flat_map(|r| {
            let s = r.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            r.iter().map(move |x| if s > 0.0 { x / s } else { 0.0 })
        })
        .collect();
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    let m = DMatrix::from_row_slice(rows.len(), cols, &scaled);
    let sv = m.svd(false, false).singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * top).count()
}

/// Gradients of the generators with respect to `y`.
fn jacobian(spec: &ProblemSpec, y: &[f64]) -> Vec<Vec<f64>> {
    spec.gens
        .iter()
        .map(|g| {
            let l = monomial(y, &g.lead);
            let k = monomial(y, &g.trail);
            let sign = if g.sign == Sign::Minus { -1.0 } else { 1.0 };
            (0..y.len())
                .map(|j| (g.lead[j] as f64 * l + sign * g.trail[j] as f64 * k) / y[j])
                .collect()
        })
        .collect()
}

/// `∂ y_j / ∂ log t_k = a_{kj} y_j` over a set of columns, as rows of the
/// transposed matrix (one per column).
fn param_differential(config: &PointConfiguration, y: &[f64], columns: &[usize]) -> Vec<Vec<f64>> {
    let a = config.a.to_f64_rows();
    columns
        .iter()
        .map(|&j| (0..config.nu()).map(|k| a[k][j] * y[j]).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub samples: usize,
    pub rank_jx: usize,
    pub rank_projection: usize,
}

/// At every sample: numeric rank of `J_X` equals `rank(V)`, and the rank of
/// the differential of `π ∘ Φ_A` equals `e(P)`.
pub fn jacobian_rank_check(
    spec: &ProblemSpec,
    strat: &Stratification,
    samples: &[TorusSample],
    tol: &Tolerances,
) -> Result<RankReport, VerifyError> {
    let width = spec.num_coords();
    let e_top = strat.faces.last().map_or(0, |r| r.e);
    let params = strat.config.param_indices();
    for s in samples {
        let got = numeric_rank(&jacobian(spec, &s.y), width, tol.rank);
        if got != strat.rank_v {
            return Err(VerifyError::RankMismatch {
                what: "J_X",
                t: s.t.clone(),
                expected: strat.rank_v,
                got,
            });
        }
        let got = numeric_rank(&param_differential(&strat.config, &s.y, &params), strat.nu(), tol.rank);
        if got != e_top {
            return Err(VerifyError::RankMismatch {
                what: "d(pi o Phi_A)",
                t: s.t.clone(),
                expected: e_top,
                got,
            });
        }
    }
    Ok(RankReport {
        samples: samples.len(),
        rank_jx: strat.rank_v,
        rank_projection: e_top,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransportResult {
    pub source: Vec<f64>,
    pub target: Vec<f64>,
    pub scaling: Vec<f64>,
    pub max_residual: f64,
    pub samples: usize,
}

#[derive(Clone, Debug)]
pub struct TransportOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            samples: 20,
            seed: 0,
            tol: Tolerances::default(),
        }
    }
}

fn to_dmatrix(rows: &[Vec<f64>], cols: usize) -> DMatrix<f64> {
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    DMatrix::from_row_slice(rows.len(), cols, &flat)
}

/// Least-norm least-squares solution of `m x = b` and its relative residual.
fn least_norm(m: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (DVector::zeros(m.ncols()), b.norm() / b.norm().max(1.0));
    }
    let svd = m.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd
        .solve(b, (top * 1e-12).max(f64::MIN_POSITIVE))
        .expect("both factors were computed");
    let residual = (m * &x - b).norm() / b.norm().max(1.0);
    (x, residual)
}

/// Solves `log t` from `log c = A_P^T log t`, or reports that `c` is off the
/// dense image.
fn torus_preimage(
    config: &PointConfiguration,
    c: &[f64],
    which: &'static str,
    tol: &Tolerances,
) -> Result<Vec<f64>, VerifyError> {
    if c.iter().any(|&x| x.is_nan() || x <= 0.0 || x.is_infinite()) {
        return Err(VerifyError::NotInImage {
            which,
            point: c.to_vec(),
            residual: f64::INFINITY,
        });
    }
    let ap_t: Vec<Vec<f64>> = config
        .param_indices()
        .iter()
        .map(|&j| (0..config.nu()).map(|k| config.a[(k, j)].to_f64().unwrap_or(f64::NAN)).collect())
        .collect();
    let b = DVector::from_iterator(c.len(), c.iter().map(|x| x.ln()));
    let (x, residual) = least_norm(&to_dmatrix(&ap_t, config.nu()), &b);
    if residual > tol.residual {
        return Err(VerifyError::NotInImage {
            which,
            point: c.to_vec(),
            residual,
        });
    }
    Ok(x.iter().copied().collect())
}

/// Finds `s > 0` with `s^u = (c/c')^v` for every relation `(u, v)` of the
/// configuration, then checks on sampled points of the fibre over `c` that
/// `s·x` lies in the fibre over `c'`.
pub fn fiber_transport(
    spec: &ProblemSpec,
    config: &PointConfiguration,
    c: &[f64],
    c_target: &[f64],
    opts: &TransportOptions,
) -> Result<TransportResult, VerifyError> {
    require_minus(spec)?;
    let (n, m) = (config.n_vars, config.num_params());
    for v in [c, c_target] {
        if v.len() != m {
            return Err(VerifyError::Arity {
                expected: m,
                got: v.len(),
            });
        }
    }
    let log_t0 = torus_preimage(config, c, "c", &opts.tol)?;
    torus_preimage(config, c_target, "c'", &opts.tol)?;

    let all: Vec<usize> = (0..n + m).collect();
    let relations = subconfig_kernel(&config.a, &all).to_f64_rows();
    let u: Vec<Vec<f64>> = relations.iter().map(|z| z[..n].to_vec()).collect();
    let rhs = DVector::from_iterator(
        relations.len(),
        relations.iter().map(|z| {
            (0..m)
                .map(|j| z[n + j] * (c[j].ln() - c_target[j].ln()))
                .sum::<f64>()
        }),
    );
    let (sigma, residual) = least_norm(&to_dmatrix(&u, n), &rhs);
    if residual > opts.tol.residual {
        return Err(VerifyError::Inconsistent { residual });
    }
    let scaling: Vec<f64> = sigma.iter().map(|x| x.exp()).collect();

    // Fibre points over c: t0 moved along the integer kernel of A_P^T.
    let ap = config.a.select_columns(&config.param_indices());
    let null = kernel_basis(&ap.transpose()).to_f64_rows();
    let mut rng = rng_for(opts.seed, 1);
    let mut max_residual = 0.0f64;
    for _ in 0..opts.samples {
        let w: Vec<f64> = draw_log_t(&mut rng, null.len());
        let log_t: Vec<f64> = (0..config.nu())
            .map(|k| log_t0[k] + null.iter().zip(&w).map(|(row, wi)| row[k] * wi).sum::<f64>())
            .collect();
        let mut y = embed(config, &log_t, None);
        for (yi, si) in y.iter_mut().zip(&scaling) {
            *yi *= si;
        }
        y[n..].copy_from_slice(c_target);
        for g in &spec.gens {
            max_residual = max_residual.max(generator_residual(g, &y));
        }
    }
    Ok(TransportResult {
        source: c.to_vec(),
        target: c_target.to_vec(),
        scaling,
        max_residual,
        samples: opts.samples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberCount {
    Finite(BigInt),
    NotApplicable,
}

/// Number of points in a generic fibre, which does not depend on the
/// parameter value. Over the complex numbers this is the product of the
/// invariant factors of the parameter columns; a positive fibre has one point.
pub fn fiber_count(spec: &ProblemSpec, config: &PointConfiguration) -> Result<FiberCount, VerifyError> {
    let nu = config.nu();
    if nu > config.num_params() {
        return Ok(FiberCount::NotApplicable);
    }
    let ap = config.a.select_columns(&config.param_indices());
    let r = rank(&ap);
    if r < nu {
        return Err(VerifyError::RankDeficient { rank: r, nu });
    }
    Ok(FiberCount::Finite(match spec.field {
        Field::NonnegativeReals => BigInt::one(),
        Field::ComplexNumbers => snf(&ap).invariant_factors().iter().product(),
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub worst_residual: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: &str, samples: usize, worst_residual: f64, failures: Vec<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            status: if failures.is_empty() { Status::Pass } else { Status::Fail },
            worst_residual,
            samples,
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// At most this many failure records are kept per check.
const MAX_FAILURES: usize = 8;

struct ComponentOutcome {
    worst: f64,
    membership: Option<String>,
    pattern: Option<String>,
    rank: Option<String>,
}

/// Samples every orbit closure through its own sub-parametrization and checks
/// (a) the generators vanish, (b) the parameter zero pattern is that of the
/// image component, (c) the numeric rank of the parametrization is `dim`.
pub fn verify_stratification(
    spec: &ProblemSpec,
    strat: &Stratification,
    seed: u64,
    per_component: usize,
    tol: &Tolerances,
) -> VerificationReport {
    if let Err(e) = require_minus(spec) {
        return VerificationReport {
            checks: vec![CheckResult {
                name: "components".into(),
                status: Status::Unsupported,
                worst_residual: f64::NAN,
                samples: 0,
                failures: vec![e.to_string()],
            }],
        };
    }
    let config = &strat.config;
    let n = config.n_vars;
    let labels = strat.labels();
    let outcomes: Vec<ComponentOutcome> = strat
        .x_components
        .par_iter()
        .enumerate()
        .map(|(k, comp)| {
            let mut rng = rng_for(seed, 1000 + k as u64);
            let name = comp.stratum_ideal(labels).join(", ");
            let image = comp.image.map(|i| &strat.y_components[i]);
            let mut out = ComponentOutcome {
                worst: 0.0,
                membership: None,
                pattern: None,
                rank: None,
            };
            for _ in 0..per_component {
                let log_t = draw_log_t(&mut rng, config.nu());
                let y = embed(config, &log_t, Some(&comp.nonzero));
                let worst = spec
                    .gens
                    .iter()
                    .map(|g| generator_residual(g, &y))
                    .fold(0.0, f64::max);
                out.worst = out.worst.max(worst);
                if !within(worst, tol.residual) && out.membership.is_none() {
                    out.membership = Some(format!("V({name}) at y = {y:?}: residual {worst:e}"));
                }
                let zeros: Vec<usize> = (0..config.num_params()).filter(|&j| y[n + j] == 0.0).collect();
                if image.is_none_or(|im| im.zeros != zeros) && out.pattern.is_none() {
                    out.pattern = Some(format!("V({name}) at y = {y:?}: parameter zeros {zeros:?}"));
                }
                let got = numeric_rank(&param_differential(config, &y, &comp.nonzero), config.nu(), tol.rank);
                if got != comp.dim && out.rank.is_none() {
                    out.rank = Some(format!("V({name}) at y = {y:?}: rank {got}, dim {}", comp.dim));
                }
            }
            out
        })
        .collect();

    let collect = |f: fn(&ComponentOutcome) -> &Option<String>| -> Vec<String> {
        outcomes.iter().filter_map(|o| f(o).clone()).take(MAX_FAILURES).collect()
    };
    let total = per_component * strat.x_components.len();
    let worst = outcomes.iter().map(|o| o.worst).fold(0.0, f64::max);

    let param_labels = strat.param_labels();
    let params = config.param_indices();
    let mut rng = rng_for(seed, 2);
    let mut y_failures = Vec::new();
    for comp in &strat.y_components {
        for _ in 0..per_component {
            let log_t = draw_log_t(&mut rng, config.nu());
            let cols: Vec<usize> = comp.nonzero.iter().map(|&j| params[j]).collect();
            let y = embed(config, &log_t, Some(&cols));
            let got = numeric_rank(&param_differential(config, &y, &cols), config.nu(), tol.rank);
            if got != comp.dim && y_failures.len() < MAX_FAILURES {
                let name = comp.stratum_ideal(param_labels).join(", ");
                y_failures.push(format!("V({name}): rank {got}, dim {}", comp.dim));
                break;
            }
        }
    }

    VerificationReport {
        checks: vec![
            CheckResult::new("components.membership", total, worst, collect(|o| &o.membership)),
            CheckResult::new("components.image_pattern", total, 0.0, collect(|o| &o.pattern)),
            CheckResult::new("components.rank", total, 0.0, collect(|o| &o.rank)),
            CheckResult::new(
                "image_components.rank",
                per_component * strat.y_components.len(),
                0.0,
                y_failures,
            ),
        ],
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub torus_samples: usize,
    pub component_samples: usize,
    pub transport_pairs: usize,
    pub tol: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            torus_samples: 100,
            component_samples: 50,
            transport_pairs: 10,
            tol: Tolerances::default(),
        }
    }
}

/// Positive parameter values `π(Φ_A(t))` for a random `t`.
pub fn random_image_point(config: &PointConfiguration, rng: &mut impl Rng) -> Vec<f64> {
    let log_t = draw_log_t(rng, config.nu());
    embed(config, &log_t, None)[config.n_vars..].to_vec()
}

/// The full suite: torus residuals, both rank checks, transport between
/// random image points, and the per-component checks.
pub fn verify_all(spec: &ProblemSpec, strat: &Stratification, opts: &VerifyOptions) -> VerificationReport {
    let mut checks = Vec::new();
    let samples = match sample_torus(spec, &strat.config, opts.torus_samples, opts.seed) {
        Ok(s) => s,
        Err(VerifyError::EmptyTorus) => Vec::new(),
        Err(e) => {
            return VerificationReport {
                checks: vec![CheckResult {
                    name: "torus.residual".into(),
                    status: Status::Unsupported,
                    worst_residual: f64::NAN,
                    samples: 0,
                    failures: vec![e.to_string()],
                }],
            }
        }
    };
    let worst = samples.iter().map(TorusSample::worst_residual).fold(0.0, f64::max);
    let bad: Vec<String> = samples
        .iter()
        .filter(|s| !within(s.worst_residual(), opts.tol.residual))
        .take(MAX_FAILURES)
        .map(|s| format!("t = {:?}: residual {:e}", s.t, s.worst_residual()))
        .collect();
    checks.push(CheckResult::new("torus.residual", samples.len(), worst, bad));
    let rank_failures = match jacobian_rank_check(spec, strat, &samples, &opts.tol) {
        Ok(_) => Vec::new(),
        Err(e) => vec![e.to_string()],
    };
    checks.push(CheckResult::new("torus.jacobian_rank", samples.len(), 0.0, rank_failures));

    if strat.config.num_params() > 0 && strat.nu() > 0 {
        let mut rng = rng_for(opts.seed, 3);
        let mut worst = 0.0f64;
        let mut failures = Vec::new();
        for pair in 0..opts.transport_pairs {
            let c = random_image_point(&strat.config, &mut rng);
            let c2 = random_image_point(&strat.config, &mut rng);
            let t_opts = TransportOptions {
                samples: 10,
                seed: opts.seed.wrapping_add(pair as u64),
                tol: opts.tol,
            };
            match fiber_transport(spec, &strat.config, &c, &c2, &t_opts) {
                Ok(r) => {
                    worst = worst.max(r.max_residual);
                    if !within(r.max_residual, opts.tol.residual) && failures.len() < MAX_FAILURES {
                        failures.push(format!("c = {c:?}, c' = {c2:?}: residual {:e}", r.max_residual));
                    }
                }
                Err(e) if failures.len() < MAX_FAILURES => failures.push(e.to_string()),
                Err(_) => {}
            }
        }
        checks.push(CheckResult::new("transport", opts.transport_pairs, worst, failures));
    }

    checks.extend(verify_stratification(spec, strat, opts.seed, opts.component_samples, &opts.tol).checks);
    VerificationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_input;
    use crate::stratifier::stratify;

    fn umbrella() -> (ProblemSpec, Stratification) {
        let spec = parse_input("vars: x1 x2; params: c; gens: c*x2^2 - x1^2").unwrap();
        let s = stratify(&spec).unwrap();
        (spec, s)
    }

    #[test]
    fn all_ones_point() {
        let (spec, s) = umbrella();
        let sample = sample_torus_at(&spec, &s.config, &[1.0, 1.0]).unwrap();
        assert_eq!(sample.y, vec![1.0, 1.0, 1.0]);
        assert_eq!(sample.residuals, vec![0.0]);
    }

    #[test]
    fn explicit_parametrization() {
        let (spec, _) = umbrella();
        let config = PointConfiguration {
            a: crate::IntMatrix::from_rows(&[[1, 0, 2], [1, 1, 0]]),
            labels: spec.labels(),
            n_vars: 2,
        };
        let s = sample_torus_at(&spec, &config, &[2.0, 3.0]).unwrap();
        for (got, want) in s.y.iter().zip([6.0, 3.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(s.worst_residual() < 1e-12);
    }

    #[test]
    fn plus_sign_is_refused() {
        let spec = parse_input("vars: x; params: c; gens: x + c").unwrap();
        let config = PointConfiguration::from_exponent_matrix(&spec.exponent_matrix(), spec.labels(), 1);
        assert!(matches!(
            sample_torus(&spec, &config, 3, 0),
            Err(VerifyError::SignUnsupported { index: 0 })
        ));
    }

    #[test]
    fn umbrella_ranks() {
        let (spec, s) = umbrella();
        let samples = sample_torus(&spec, &s.config, 20, 7).unwrap();
        let r = jacobian_rank_check(&spec, &s, &samples, &Tolerances::default()).unwrap();
        assert_eq!((r.rank_jx, r.rank_projection), (1, 1));
    }

    #[test]
    fn empty_ideal_rank_zero() {
        let spec = parse_input("vars: x1 x2").unwrap();
        let s = stratify(&spec).unwrap();
        let samples = sample_torus(&spec, &s.config, 5, 0).unwrap();
        assert_eq!(jacobian_rank_check(&spec, &s, &samples, &Tolerances::default()).unwrap().rank_jx, 0);
    }

    #[test]
    fn umbrella_transport() {
        let (spec, s) = umbrella();
        let r = fiber_transport(&spec, &s.config, &[1.0], &[4.0], &TransportOptions::default()).unwrap();
        let [s1, s2] = [r.scaling[0], r.scaling[1]];
        assert!((s2 * s2 / (s1 * s1) - 0.25).abs() < 1e-12);
        assert!(r.max_residual < 1e-9);
        let id = fiber_transport(&spec, &s.config, &[3.0], &[3.0], &TransportOptions::default()).unwrap();
        assert!(id.scaling.iter().all(|&x| x == 1.0));
        assert!(matches!(
            fiber_transport(&spec, &s.config, &[1.0], &[0.0], &TransportOptions::default()),
            Err(VerifyError::NotInImage { which: "c'", .. })
        ));
    }

    #[test]
    fn square_root_fiber() {
        let spec = parse_input("vars: x; params: c; gens: x^2 - c").unwrap();
        let s = stratify(&spec).unwrap();
        assert_eq!(fiber_count(&spec, &s.config).unwrap(), FiberCount::Finite(BigInt::from(2)));
        let real = parse_input("vars: x; params: c; field: nonnegative-reals; gens: x^2 - c").unwrap();
        assert_eq!(fiber_count(&real, &s.config).unwrap(), FiberCount::Finite(BigInt::one()));
        let (spec, s) = umbrella();
        assert_eq!(fiber_count(&spec, &s.config).unwrap(), FiberCount::NotApplicable);
    }

    #[test]
    fn rank_deficient_parameters() {
        // nu = 2 = m but both parameter points are multiples of one vector.
        let spec = parse_input("vars: x; params: c1 c2; gens: c1^2 - c2").unwrap();
        let s = stratify(&spec).unwrap();
        assert!(matches!(fiber_count(&spec, &s.config), Err(VerifyError::RankDeficient { rank: 1, nu: 2 })));
    }

    #[test]
    fn umbrella_full_report_passes() {
        let (spec, s) = umbrella();
        let opts = VerifyOptions {
            seed: 7,
            ..VerifyOptions::default()
        };
        let report = verify_all(&spec, &s, &opts);
        assert!(report.passed(), "{report:#?}");
        assert_eq!(report.check("components.membership").unwrap().samples, 4 * 50);
    }

    #[test]
    fn report_is_seed_deterministic() {
        let (spec, s) = umbrella();
        let opts = VerifyOptions::default();
        assert_eq!(verify_all(&spec, &s, &opts), verify_all(&spec, &s, &opts));
    }
}
