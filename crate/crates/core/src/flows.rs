//! Primal-dual flows and their trajectories.
//!
//! Three flows share one shape, `ẋ = −∇f(x) − Aᵀλ`, `τλ̇ = Ax − b`:
//! the standard primal-dual flow, the distributed flow with Laplacian
//! constraints `A = L⊗I_n`, and the distributed flow with incidence
//! constraints `A = Bᵀ⊗I_n`. Their Jacobian at any state is the saddle matrix
//! with `Q = ∇²f(x)`.

use std::io::Write;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::saddle::{
    certificate_from_alpha, quarter_rate_alpha, CertificateVariant, ContractionCertificate,
    SaddleProblem,
};
use crate::spectra::{spectral_norm, sym_eigen, WeightedSeminorm};

/// Multiplicative slack of the contraction envelope.
pub const TOL_TRAJ: f64 = 1e-6;
/// Absolute floor of the envelope, relative to `‖R‖·max‖state‖`; covers
/// round-off once the distance has decayed to machine precision.
pub const ENVELOPE_FLOOR: f64 = 1e-12;

/// Twice-differentiable cost with `μI ⪯ ∇²f ⪯ ℓI`.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64>;
    /// `(μ, ℓ)`.
    fn curvature(&self) -> (f64, f64);
}

/// Separable cost `Σ_i q_i‖x_i − v_i‖²` over `N` agents with `n`-dimensional
/// states, stacked agent by agent.
#[derive(Debug, Clone)]
pub struct QuadraticCost {
    weights: Vec<f64>,
    /// `N × n`, row `i` is `v_i`.
    targets: DMatrix<f64>,
}

impl QuadraticCost {
    pub fn new(weights: Vec<f64>, targets: DMatrix<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != targets.nrows() || targets.ncols() == 0 {
            return Err(Error::InvalidInput(format!(
                "{} weights for a {}x{} target matrix",
                weights.len(),
                targets.nrows(),
                targets.ncols()
            )));
        }
        if weights.iter().any(|&q| !(q > 0.0 && q.is_finite())) {
            return Err(Error::InvalidInput("cost weights must be positive and finite".into()));
        }
        if targets.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("targets must be finite".into()));
        }
        Ok(Self { weights, targets })
    }

    /// Scalar agents (`n = 1`).
    pub fn scalar(weights: Vec<f64>, targets: Vec<f64>) -> Result<Self> {
        let n = targets.len();
        Self::new(weights, DMatrix::from_vec(n, 1, targets))
    }

    pub fn agents(&self) -> usize {
        self.weights.len()
    }

    pub fn agent_dim(&self) -> usize {
        self.targets.ncols()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn targets(&self) -> &DMatrix<f64> {
        &self.targets
    }

    /// Minimizer under consensus: `Σ q_i v_i / Σ q_i`.
    pub fn consensus_minimizer(&self) -> DVector<f64> {
        let total: f64 = self.weights.iter().sum();
        let mut out = DVector::zeros(self.agent_dim());
        for (i, &q) in self.weights.iter().enumerate() {
            out += self.targets.row(i).transpose() * q;
        }
        out / total
    }
}

impl Objective for QuadraticCost {
    fn dim(&self) -> usize {
        self.agents() * self.agent_dim()
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let n = self.agent_dim();
        DVector::from_fn(self.dim(), |k, _| {
            let (i, j) = (k / n, k % n);
            2.0 * self.weights[i] * (x[k] - self.targets[(i, j)])
        })
    }

    fn hessian(&self, _x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.agent_dim();
        DMatrix::from_diagonal(&DVector::from_fn(self.dim(), |k, _| 2.0 * self.weights[k / n]))
    }

    fn curvature(&self) -> (f64, f64) {
        let lo = self.weights.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.weights.iter().cloned().fold(0.0, f64::max);
        (2.0 * lo, 2.0 * hi)
    }
}

/// `f(x) = ½xᵀHx + gᵀx` with symmetric positive-definite `H`.
#[derive(Debug, Clone)]
pub struct DenseQuadratic {
    h: DMatrix<f64>,
    g: DVector<f64>,
    mu: f64,
    ell: f64,
}

impl DenseQuadratic {
    pub fn new(h: DMatrix<f64>, g: DVector<f64>) -> Result<Self> {
        if !h.is_square() || h.nrows() != g.len() || g.is_empty() {
            return Err(Error::InvalidInput("Hessian and linear term sizes disagree".into()));
        }
        if (&h - h.transpose()).amax() > 1e-12 * h.amax().max(1.0) {
            return Err(Error::InvalidInput("Hessian must be symmetric".into()));
        }
        let eig = sym_eigen(&h)?;
        let mu = eig.values[0];
        let ell = eig.values[eig.values.len() - 1];
        if !(mu > 0.0) {
            return Err(Error::InvalidInput("Hessian must be positive definite".into()));
        }
        Ok(Self { h, g, mu, ell })
    }
}

impl Objective for DenseQuadratic {
    fn dim(&self) -> usize {
        self.g.len()
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.h * x + &self.g
    }

    fn hessian(&self, _x: &DVector<f64>) -> DMatrix<f64> {
        self.h.clone()
    }

    fn curvature(&self) -> (f64, f64) {
        (self.mu, self.ell)
    }
}

/// Cost given by user-supplied gradient and Hessian callables together with
/// curvature constants.
pub struct FnObjective<G, H> {
    dim: usize,
    gradient: G,
    hessian: H,
    curvature: (f64, f64),
}

impl<G, H> FnObjective<G, H>
where
    G: Fn(&DVector<f64>) -> DVector<f64> + Send + Sync,
    H: Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync,
{
    pub fn new(dim: usize, gradient: G, hessian: H, mu: f64, ell: f64) -> Result<Self> {
        if !(mu > 0.0 && ell >= mu) {
            return Err(Error::InvalidInput(format!("need 0 < μ ≤ ℓ, got μ = {mu}, ℓ = {ell}")));
        }
        Ok(Self {
            dim,
            gradient,
            hessian,
            curvature: (mu, ell),
        })
    }
}

impl<G, H> Objective for FnObjective<G, H>
where
    G: Fn(&DVector<f64>) -> DVector<f64> + Send + Sync,
    H: Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.gradient)(x)
    }

    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        (self.hessian)(x)
    }

    fn curvature(&self) -> (f64, f64) {
        self.curvature
    }
}

/// Autonomous vector field `ẋ = F(x)`.
pub trait VectorField {
    fn dim(&self) -> usize;
    fn eval(&self, x: &DVector<f64>) -> DVector<f64>;
}

/// `ẋ = M·x + offset`.
#[derive(Debug, Clone)]
pub struct LinearField {
    pub matrix: DMatrix<f64>,
    pub offset: DVector<f64>,
}

impl LinearField {
    pub fn homogeneous(matrix: DMatrix<f64>) -> Self {
        let n = matrix.nrows();
        Self {
            matrix,
            offset: DVector::zeros(n),
        }
    }
}

impl VectorField for LinearField {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x + &self.offset
    }
}

/// Closure-backed field.
pub struct FnField<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&DVector<f64>) -> DVector<f64>> VectorField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowKind {
    PrimalDual,
    Laplacian,
    Incidence,
}

/// Primal-dual flow `ẋ = −∇f(x) − Aᵀλ`, `τλ̇ = Ax − b` on the stacked state
/// `(x, λ)`.
#[derive(Clone)]
pub struct FlowSystem {
    objective: Arc<dyn Objective>,
    constraint: DMatrix<f64>,
    offset: DVector<f64>,
    tau: f64,
    kind: FlowKind,
    certificate_hint: Option<ContractionCertificate>,
}

impl FlowSystem {
    pub fn primal_dim(&self) -> usize {
        self.constraint.ncols()
    }

    pub fn dual_dim(&self) -> usize {
        self.constraint.nrows()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn kind(&self) -> FlowKind {
        self.kind
    }

    pub fn constraint(&self) -> &DMatrix<f64> {
        &self.constraint
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.offset
    }

    pub fn objective(&self) -> &dyn Objective {
        self.objective.as_ref()
    }

    pub fn certificate_hint(&self) -> Option<&ContractionCertificate> {
        self.certificate_hint.as_ref()
    }

    pub fn with_certificate_hint(mut self, cert: ContractionCertificate) -> Self {
        self.certificate_hint = Some(cert);
        self
    }

    /// Splits a stacked state into `(x, λ)`.
    pub fn split(&self, state: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let n = self.primal_dim();
        (
            state.rows(0, n).into_owned(),
            state.rows(n, self.dual_dim()).into_owned(),
        )
    }

    pub fn stack(&self, x: &DVector<f64>, lambda: &DVector<f64>) -> DVector<f64> {
        let mut s = DVector::zeros(self.primal_dim() + self.dual_dim());
        s.rows_mut(0, x.len()).copy_from(x);
        s.rows_mut(x.len(), lambda.len()).copy_from(lambda);
        s
    }

    /// Saddle matrix `[−∇²f(x), −Aᵀ; τ⁻¹A, 0]` at the given state.
    pub fn jacobian(&self, state: &DVector<f64>) -> DMatrix<f64> {
        let (x, _) = self.split(state);
        let (n, m) = (self.primal_dim(), self.dual_dim());
        let mut j = DMatrix::zeros(n + m, n + m);
        j.view_mut((0, 0), (n, n)).copy_from(&(-self.objective.hessian(&x)));
        j.view_mut((0, n), (n, m)).copy_from(&(-self.constraint.transpose()));
        j.view_mut((n, 0), (m, n)).copy_from(&(&self.constraint / self.tau));
        j
    }

    /// The saddle problem of the linearization at `state`.
    pub fn saddle_problem_at(&self, state: &DVector<f64>) -> Result<SaddleProblem> {
        let (x, _) = self.split(state);
        SaddleProblem::new(self.objective.hessian(&x), self.constraint.clone(), self.tau)
    }

    /// `min(1e−2, 0.1/‖J‖)` with `J` the Jacobian at `state`.
    pub fn default_dt(&self, state: &DVector<f64>) -> f64 {
        default_dt(&self.jacobian(state))
    }
}

impl VectorField for FlowSystem {
    fn dim(&self) -> usize {
        self.primal_dim() + self.dual_dim()
    }

    fn eval(&self, state: &DVector<f64>) -> DVector<f64> {
        let (x, lambda) = self.split(state);
        let dx = -self.objective.gradient(&x) - self.constraint.transpose() * &lambda;
        let dl = (&self.constraint * &x - &self.offset) / self.tau;
        self.stack(&dx, &dl)
    }
}

/// `min(1e−2, 0.1/‖M‖)`.
pub fn default_dt(m: &DMatrix<f64>) -> f64 {
    let norm = spectral_norm(m);
    if norm > 0.0 {
        (0.1 / norm).min(1e-2)
    } else {
        1e-2
    }
}

pub fn primal_dual_flow(
    objective: Arc<dyn Objective>,
    a: DMatrix<f64>,
    b: DVector<f64>,
    tau: f64,
) -> Result<FlowSystem> {
    if a.ncols() != objective.dim() || a.nrows() != b.len() || a.nrows() == 0 {
        return Err(Error::InvalidInput(format!(
            "constraint is {}x{}, offset has length {}, objective has dimension {}",
            a.nrows(),
            a.ncols(),
            b.len(),
            objective.dim()
        )));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidInput(format!("tau must be positive, got {tau}")));
    }
    Ok(FlowSystem {
        objective,
        constraint: a,
        offset: b,
        tau,
        kind: FlowKind::PrimalDual,
        certificate_hint: None,
    })
}

/// `M ⊗ I_n`.
pub fn kron_identity(m: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    m.kronecker(&DMatrix::<f64>::identity(n, n))
}

fn agent_dim(objective: &dyn Objective, g: &Graph) -> Result<usize> {
    let nodes = g.node_count();
    if objective.dim() == 0 || objective.dim() % nodes != 0 {
        return Err(Error::InvalidInput(format!(
            "objective dimension {} is not a multiple of the {} agents",
            objective.dim(),
            nodes
        )));
    }
    Ok(objective.dim() / nodes)
}

fn distributed_flow(
    objective: Arc<dyn Objective>,
    g: &Graph,
    tau: f64,
    kind: FlowKind,
) -> Result<FlowSystem> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = agent_dim(objective.as_ref(), g)?;
    let a = match kind {
        FlowKind::Laplacian => kron_identity(&g.laplacian(), n),
        FlowKind::Incidence => kron_identity(&g.incidence().transpose(), n),
        FlowKind::PrimalDual => unreachable!("distributed flows use graph constraints"),
    };
    let m = a.nrows();
    let mut sys = primal_dual_flow(objective, a, DVector::zeros(m), tau)?;
    sys.kind = kind;
    let cert = distributed_certificate(&sys)?;
    Ok(sys.with_certificate_hint(cert))
}

/// `ẋ = −∇f(x) − (L⊗I_n)ᵀλ`, `τλ̇ = (L⊗I_n)x`. Carries the quarter-rate
/// certificate as its hint.
pub fn distributed_flow_laplacian(objective: Arc<dyn Objective>, g: &Graph, tau: f64) -> Result<FlowSystem> {
    distributed_flow(objective, g, tau, FlowKind::Laplacian)
}

/// `ẋ = −∇f(x) − (Bᵀ⊗I_n)ᵀλ`, `τλ̇ = (Bᵀ⊗I_n)x`, with one dual block per
/// edge. Carries the quarter-rate certificate as its hint.
pub fn distributed_flow_incidence(objective: Arc<dyn Objective>, g: &Graph, tau: f64) -> Result<FlowSystem> {
    distributed_flow(objective, g, tau, FlowKind::Incidence)
}

/// Quarter-rate certificate of a distributed flow using the cost curvature
/// `(μ, ℓ)` in place of the Hessian bounds, so the same weight certifies the
/// Jacobian at every state. Checked against the Jacobian at the origin.
fn distributed_certificate(sys: &FlowSystem) -> Result<ContractionCertificate> {
    let origin = DVector::zeros(sys.primal_dim() + sys.dual_dim());
    let prob = sys.saddle_problem_at(&origin)?;
    let (mu, ell) = sys.objective.curvature();
    let bounds = prob.spectral_bounds()?.with_curvature(mu, ell);
    let alpha = quarter_rate_alpha(&bounds, sys.tau);
    certificate_from_alpha(&prob, &bounds, alpha, CertificateVariant::QuarterRate)
}

/// `¼ min{λ₂²/(τℓ), (λ₂/λ_N)²·μ}` for the Laplacian-constrained flow.
pub fn rate_laplacian(objective: &dyn Objective, g: &Graph, tau: f64) -> Result<f64> {
    let (l2, ln) = g.spectral_gap()?;
    let (mu, ell) = objective.curvature();
    Ok(0.25 * f64::min(l2 * l2 / (tau * ell), (l2 * l2) / (ln * ln) * mu))
}

/// `¼ min{λ₂/(τℓ), (λ₂/λ_N)·μ}` for the incidence-constrained flow.
pub fn rate_incidence(objective: &dyn Objective, g: &Graph, tau: f64) -> Result<f64> {
    let (l2, ln) = g.spectral_gap()?;
    let (mu, ell) = objective.curvature();
    Ok(0.25 * f64::min(l2 / (tau * ell), l2 / ln * mu))
}

/// Samples `t_k` and states `x(t_k)` of an integrated trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    /// One row per sample.
    states: DMatrix<f64>,
}

impl Trajectory {
    fn from_samples(times: Vec<f64>, samples: &[DVector<f64>]) -> Self {
        let d = samples.first().map_or(0, |s| s.len());
        let states = DMatrix::from_fn(samples.len(), d, |i, j| samples[i][j]);
        Self { times, states }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &DMatrix<f64> {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.ncols()
    }

    pub fn state(&self, k: usize) -> DVector<f64> {
        self.states.row(k).transpose()
    }

    pub fn final_state(&self) -> DVector<f64> {
        self.state(self.len() - 1)
    }

    /// CSV with header `t,state_0,…,state_{d−1}`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((0..self.dim()).map(|j| format!("state_{j}")))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for (k, t) in self.times.iter().enumerate() {
            write!(out, "{t}")?;
            for v in self.states.row(k).iter() {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn rk4_step<F: VectorField + ?Sized>(field: &F, x: &DVector<f64>, h: f64) -> DVector<f64> {
    let k1 = field.eval(x);
    let k2 = field.eval(&(x + &k1 * (0.5 * h)));
    let k3 = field.eval(&(x + &k2 * (0.5 * h)));
    let k4 = field.eval(&(x + &k3 * h));
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn sample_times(t_end: f64, dt: f64) -> Vec<f64> {
    let ratio = t_end / dt;
    let rounded = ratio.round();
    let steps = if (rounded - ratio).abs() <= 1e-9 * ratio.max(1.0) {
        rounded as usize
    } else {
        ratio.ceil() as usize
    };
    let mut times: Vec<f64> = (0..steps).map(|k| k as f64 * dt).collect();
    times.push(t_end);
    times
}

/// Integrates until `t_end` or the first non-finite state; returns what was
/// computed and the time of divergence, if any.
pub(crate) fn integrate_partial<F: VectorField + ?Sized>(
    field: &F,
    x0: &DVector<f64>,
    t_end: f64,
    dt: f64,
) -> Result<(Trajectory, Option<f64>)> {
    if x0.len() != field.dim() {
        return Err(Error::InvalidInput(format!(
            "initial state has length {}, field has dimension {}",
            x0.len(),
            field.dim()
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= dt && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("t_end must be at least dt, got {t_end}")));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("initial state is not finite".into()));
    }
    let times = sample_times(t_end, dt);
    let mut samples = Vec::with_capacity(times.len());
    samples.push(x0.clone());
    for w in times.windows(2) {
        let next = rk4_step(field, samples.last().unwrap(), w[1] - w[0]);
        if next.iter().any(|v| !v.is_finite()) {
            let kept = times[..samples.len()].to_vec();
            return Ok((Trajectory::from_samples(kept, &samples), Some(w[1])));
        }
        samples.push(next);
    }
    Ok((Trajectory::from_samples(times, &samples), None))
}

/// Classical fixed-step RK4 sampled at `0, dt, 2dt, …, t_end` (the final
/// step is shortened when `t_end` is not a multiple of `dt`).
pub fn integrate<F: VectorField + ?Sized>(
    field: &F,
    x0: &DVector<f64>,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    match integrate_partial(field, x0, t_end, dt)? {
        (traj, None) => Ok(traj),
        (_, Some(time)) => Err(Error::Divergence { time }),
    }
}

/// Seminorm distance between two trajectories against the certified
/// envelope `d(0)·e^{−ct}`.
#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub times: Vec<f64>,
    pub distances: Vec<f64>,
    pub envelope: Vec<f64>,
    pub certified_rate: f64,
    /// Least-squares decay exponent of `ln d(t)`, when enough samples sit
    /// above the round-off floor.
    pub fitted_rate: Option<f64>,
    /// Absolute slack added to the envelope.
    pub floor: f64,
}

impl DecayReport {
    /// First sample where `d(t) > envelope·(1 + tol) + floor`.
    pub fn first_violation(&self, tol: f64) -> Option<(f64, f64, f64)> {
        self.times
            .iter()
            .zip(&self.distances)
            .zip(&self.envelope)
            .find(|((_, &d), &e)| d > e * (1.0 + tol) + self.floor)
            .map(|((&t, &d), &e)| (t, d, e))
    }
}

fn fit_rate(times: &[f64], distances: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(distances)
        .filter(|(_, &d)| d > 100.0 * floor && d > 0.0)
        .map(|(&t, &d)| (t, d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let (st, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(t, y)| (a + t, b + y));
    let (mt, my) = (st / k, sy / k);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(n, d), &(t, y)| (n + (t - mt) * (y - my), d + (t - mt) * (t - mt)));
    (den > 0.0).then(|| -num / den)
}

/// Integrates two trajectories and measures `‖R(x(t) − y(t))‖` against
/// `d(0)·e^{−rate·t}`; does not judge the outcome.
pub fn observe_decay<F: VectorField + ?Sized>(
    field: &F,
    seminorm: &WeightedSeminorm,
    rate: f64,
    x0: &DVector<f64>,
    y0: &DVector<f64>,
    t_end: f64,
    dt: f64,
) -> Result<DecayReport> {
    if seminorm.dim() != field.dim() {
        return Err(Error::InvalidInput(format!(
            "seminorm dimension {} does not match system dimension {}",
            seminorm.dim(),
            field.dim()
        )));
    }
    let tx = integrate(field, x0, t_end, dt)?;
    let ty = integrate(field, y0, t_end, dt)?;
    let distances: Vec<f64> = (0..tx.len())
        .map(|k| seminorm.distance(&tx.state(k), &ty.state(k)))
        .collect();
    let d0 = distances[0];
    let envelope: Vec<f64> = tx.times().iter().map(|t| d0 * (-rate * t).exp()).collect();
    let state_scale = tx.states().amax().max(ty.states().amax()).max(1.0) * (field.dim() as f64).sqrt();
    let floor = ENVELOPE_FLOOR * spectral_norm(seminorm.root()).max(1.0) * state_scale;
    let fitted_rate = fit_rate(tx.times(), &distances, floor);
    Ok(DecayReport {
        times: tx.times().to_vec(),
        distances,
        envelope,
        certified_rate: rate,
        fitted_rate,
        floor,
    })
}

/// [`observe_decay`] in the certificate's seminorm, failing with the first
/// violating sample when the distance leaves the envelope by more than
/// [`TOL_TRAJ`].
pub fn contraction_observed<F: VectorField + ?Sized>(
    field: &F,
    cert: &ContractionCertificate,
    x0: &DVector<f64>,
    y0: &DVector<f64>,
    t_end: f64,
    dt: f64,
) -> Result<DecayReport> {
    let report = observe_decay(field, &cert.weight, cert.rate, x0, y0, t_end, dt)?;
    if let Some((time, observed, bound)) = report.first_violation(TOL_TRAJ) {
        return Err(Error::EnvelopeViolation { time, observed, bound });
    }
    Ok(report)
}
