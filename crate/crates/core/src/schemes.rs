//! Backend-agnostic time steppers for convex-concave split minimization:
//! gradient descent, CINEMA, FISTA and the fully explicit Nesterov scheme.
//!
//! All schemes minimize an objective `E(u) = F(u) + G(u)` whose convex part
//! `F` has the quadratic form `1/2 <u, A u>` (with `A = -lap + 2/eps^2` on a
//! backend-specific domain) and whose concave part `G` is evaluated
//! explicitly. A backend supplies the implicit solve `(I + h A)^{-1}`, the
//! concave gradient, and the inner product; the steppers never look inside
//! the field type.
//!
//! Velocity updates follow `v_{n+1} = rho (v_n - tau g_n)` with
//! `g_n = (u_n + tau v_n - u_{n+1}) / eta`, which is exactly the convex
//! sub-gradient at the new point plus the concave gradient at the evaluation
//! point, so the discrete energy `E(u_n) + ||v_n||^2 / (2 rho^2)` obeys the
//! CINEMA decay law whenever `eta >= tau^2 / 2`.

use crate::potentials::SplitPotential;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    Gd,
    Cinema,
    Fista,
    Nesterov,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Gd => "gd",
            Scheme::Cinema => "cinema",
            Scheme::Fista => "fista",
            Scheme::Nesterov => "nesterov",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gd" => Ok(Scheme::Gd),
            "cinema" => Ok(Scheme::Cinema),
            "fista" => Ok(Scheme::Fista),
            "nesterov" => Ok(Scheme::Nesterov),
            other => Err(format!("unknown scheme '{other}'")),
        }
    }
}

/// Velocity decay factor; constant `rho = 1/(1 + alpha tau)` everywhere in
/// the experiments, with the convex-case schedule `n/(n+3)` available as an
/// option.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum RhoSchedule {
    Constant(f64),
    NesterovConvex,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeParams {
    pub scheme: Scheme,
    /// Momentum step.
    pub tau: f64,
    /// Gradient step (the descent step `h` for plain GD).
    pub eta: f64,
    pub rho: RhoSchedule,
    /// Friction; informational once `rho` is fixed.
    pub alpha: f64,
    /// Interface width of the energy being minimized.
    pub eps: f64,
}

impl SchemeParams {
    /// Momentum scheme with the default coupling `eta = tau^2`,
    /// `rho = 1/(1 + alpha tau)`.
    pub fn momentum(scheme: Scheme, tau: f64, alpha: f64, eps: f64) -> Self {
        assert!(tau > 0.0 && eps > 0.0 && alpha >= 0.0);
        Self {
            scheme,
            tau,
            eta: tau * tau,
            rho: RhoSchedule::Constant(1.0 / (1.0 + alpha * tau)),
            alpha,
            eps,
        }
    }

    /// Plain convex-concave split gradient descent with step `h`.
    pub fn gd(h: f64, eps: f64) -> Self {
        assert!(h > 0.0 && eps > 0.0);
        Self {
            scheme: Scheme::Gd,
            tau: 0.0,
            eta: h,
            rho: RhoSchedule::Constant(1.0),
            alpha: 0.0,
            eps,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        assert!(eta > 0.0);
        self.eta = eta;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        assert!(rho > 0.0 && rho <= 1.0);
        self.rho = RhoSchedule::Constant(rho);
        self
    }

    pub fn rho_at(&self, step: u64) -> f64 {
        match self.rho {
            RhoSchedule::Constant(r) => r,
            RhoSchedule::NesterovConvex => step as f64 / (step as f64 + 3.0),
        }
    }

    /// Physical time advanced by one step.
    pub fn dt(&self) -> f64 {
        match self.scheme {
            Scheme::Gd => self.eta,
            _ => self.tau,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchemeState<F> {
    pub u: F,
    pub v: F,
    pub step: u64,
    pub time: f64,
}

/// Minimization backend: implicit convex solve, explicit concave gradient
/// and the Hilbert-space operations of its field type.
pub trait Backend {
    type Field: Clone;

    /// Solve `(I + h A) z = rhs` where `A` is the convex-part gradient
    /// operator (`-lap + 2/eps^2` plus any backend constraint handling).
    fn implicit_solve(&self, rhs: &Self::Field, h: f64) -> Self::Field;

    /// `W_conc'(u)/eps^2` plus the boundary forcing `f_bd` where present —
    /// everything the descent step subtracts besides the implicit part.
    fn descent_source(&self, u: &Self::Field) -> Self::Field;

    /// `A u`, for the fully explicit scheme.
    fn convex_apply(&self, u: &Self::Field) -> Self::Field;

    /// The split objective `E(u) = 1/2 <u, A u> + G(u)` including any
    /// boundary constants that keep it non-negative.
    fn objective(&self, u: &Self::Field) -> f64;

    fn eps(&self) -> f64;

    /// `a x + b y`.
    fn lincomb(&self, a: f64, x: &Self::Field, b: f64, y: &Self::Field) -> Self::Field;

    /// Squared Hilbert norm (volume-weighted on grids).
    fn norm_sq(&self, x: &Self::Field) -> f64;

    fn mean_value(&self, x: &Self::Field) -> f64;

    fn zeros_like(&self, x: &Self::Field) -> Self::Field;

    /// Ginzburg-Landau energy; the objective rescaled to the `eps`-weighted
    /// convention.
    fn gl_energy(&self, u: &Self::Field) -> f64 {
        self.eps() * self.objective(u)
    }
}

impl<F> SchemeState<F> {
    /// Standard optimization initial condition: `v = 0` at `t = 0`.
    pub fn from_rest<B: Backend<Field = F>>(backend: &B, u: F) -> Self {
        let v = backend.zeros_like(&u);
        Self { u, v, step: 0, time: 0.0 }
    }
}

/// One convex-concave split gradient descent step; the velocity is carried
/// along unchanged.
pub fn gd_step<B: Backend>(
    b: &B,
    params: &SchemeParams,
    s: &SchemeState<B::Field>,
) -> SchemeState<B::Field> {
    let h = params.eta;
    let src = b.descent_source(&s.u);
    let rhs = b.lincomb(1.0, &s.u, -h, &src);
    let u = b.implicit_solve(&rhs, h);
    SchemeState { u, v: s.v.clone(), step: s.step + 1, time: s.time + h }
}

/// CINEMA: concave gradient at `u_n`, implicit convex gradient at `u_{n+1}`,
/// momentum folded into the solve.
pub fn cinema_step<B: Backend>(
    b: &B,
    params: &SchemeParams,
    s: &SchemeState<B::Field>,
) -> SchemeState<B::Field> {
    let (tau, eta) = (params.tau, params.eta);
    let src = b.descent_source(&s.u);
    let drift = b.lincomb(1.0, &s.u, tau, &s.v);
    let rhs = b.lincomb(1.0, &drift, -eta, &src);
    let u = b.implicit_solve(&rhs, eta);
    let g = b.lincomb(1.0 / eta, &drift, -1.0 / eta, &u);
    let rho = params.rho_at(s.step);
    let v = b.lincomb(rho, &s.v, -rho * tau, &g);
    SchemeState { u, v, step: s.step + 1, time: s.time + tau }
}

/// FISTA: both gradients at the velocity-advanced point `u_n + tau v_n`
/// (the concave one explicitly, the convex one implicitly).
pub fn fista_step<B: Backend>(
    b: &B,
    params: &SchemeParams,
    s: &SchemeState<B::Field>,
) -> SchemeState<B::Field> {
    let (tau, eta) = (params.tau, params.eta);
    let drift = b.lincomb(1.0, &s.u, tau, &s.v);
    let src = b.descent_source(&drift);
    let rhs = b.lincomb(1.0, &drift, -eta, &src);
    let u = b.implicit_solve(&rhs, eta);
    let g = b.lincomb(1.0 / eta, &drift, -1.0 / eta, &u);
    let rho = params.rho_at(s.step);
    let v = b.lincomb(rho, &s.v, -rho * tau, &g);
    SchemeState { u, v, step: s.step + 1, time: s.time + tau }
}

/// Fully explicit Nesterov step, `g_n = (grad F + grad G)(u_n + tau v_n)`.
/// Expected to diverge for large steps; the run driver flags that.
pub fn nesterov_step<B: Backend>(
    b: &B,
    params: &SchemeParams,
    s: &SchemeState<B::Field>,
) -> SchemeState<B::Field> {
    let (tau, eta) = (params.tau, params.eta);
    let drift = b.lincomb(1.0, &s.u, tau, &s.v);
    let g = b.lincomb(1.0, &b.convex_apply(&drift), 1.0, &b.descent_source(&drift));
    let u = b.lincomb(1.0, &drift, -eta, &g);
    let rho = params.rho_at(s.step);
    let v = b.lincomb(rho, &s.v, -rho * tau, &g);
    SchemeState { u, v, step: s.step + 1, time: s.time + tau }
}

pub fn step<B: Backend>(
    b: &B,
    params: &SchemeParams,
    s: &SchemeState<B::Field>,
) -> SchemeState<B::Field> {
    match params.scheme {
        Scheme::Gd => gd_step(b, params, s),
        Scheme::Cinema => cinema_step(b, params, s),
        Scheme::Fista => fista_step(b, params, s),
        Scheme::Nesterov => nesterov_step(b, params, s),
    }
}

/// Per-record energy bookkeeping. `kinetic_energy`/`total_energy` use the
/// PDE convention (`eps/2` weight on `||v||^2`); `scheme_energy` is the
/// discrete convention `E(u) + ||v||^2/(2 rho^2)` that the CINEMA decay law
/// controls. Both conventions are recorded on every row.
#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub step: u64,
    pub time: f64,
    pub gl_energy: f64,
    pub kinetic_energy: f64,
    pub total_energy: f64,
    pub scheme_energy: f64,
    pub mean_u: f64,
    pub v_norm_sq: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aux: Option<GridAux>,
}

/// Grid-run diagnostics attached to trace rows by the experiment drivers.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridAux {
    pub area: f64,
    pub perimeter: f64,
    pub area_clamped: bool,
    /// ODE predictions sampled at this row's time, where available.
    pub plain_perimeter_pred: Option<f64>,
    pub adjusted_perimeter_pred: Option<f64>,
}

pub fn trace_row<B: Backend>(
    b: &B,
    params: &SchemeParams,
    s: &SchemeState<B::Field>,
) -> TraceRow {
    let objective = b.objective(&s.u);
    let gl = b.eps() * objective;
    let v_norm_sq = b.norm_sq(&s.v);
    let kinetic = 0.5 * b.eps() * v_norm_sq;
    let rho = params.rho_at(s.step).max(f64::MIN_POSITIVE);
    TraceRow {
        step: s.step,
        time: s.time,
        gl_energy: gl,
        kinetic_energy: kinetic,
        total_energy: gl + kinetic,
        scheme_energy: objective + v_norm_sq / (2.0 * rho * rho),
        mean_u: b.mean_value(&s.u),
        v_norm_sq,
        aux: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RunStatus {
    Completed,
    /// Non-finite values or scheme energy above the divergence threshold.
    Diverged { at_step: u64 },
    /// A caller-provided stopping rule fired.
    Stopped { at_step: u64 },
}

#[derive(Debug, Clone)]
pub struct RunResult<F> {
    pub state: SchemeState<F>,
    pub trace: Vec<TraceRow>,
    pub status: RunStatus,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub max_steps: u64,
    /// Energy rows are recorded every this many steps (and at the end).
    pub record_every: u64,
    /// Scheme energy beyond this aborts with a divergence status.
    pub divergence_energy: f64,
}

impl RunOptions {
    pub fn new(max_steps: u64, record_every: u64) -> Self {
        Self { max_steps, record_every: record_every.max(1), divergence_energy: 1e12 }
    }
}

/// Drive a scheme for up to `max_steps`, recording energies at the given
/// cadence. `stop` is evaluated at record points and may end the run early;
/// `decorate` can attach diagnostics to each recorded row. Cheap finiteness
/// checks run every step; full energy divergence checks at record points.
pub fn run<B: Backend>(
    b: &B,
    params: &SchemeParams,
    state0: SchemeState<B::Field>,
    opts: RunOptions,
    mut stop: impl FnMut(&B, &SchemeState<B::Field>) -> bool,
    mut decorate: impl FnMut(&B, &SchemeState<B::Field>, &mut TraceRow),
) -> RunResult<B::Field> {
    let mut trace = Vec::new();
    let mut record = |b: &B, s: &SchemeState<B::Field>, trace: &mut Vec<TraceRow>| -> f64 {
        let mut row = trace_row(b, params, s);
        decorate(b, s, &mut row);
        let e = row.scheme_energy;
        trace.push(row);
        e
    };

    let mut state = state0;
    let e0 = record(b, &state, &mut trace);
    if !e0.is_finite() || e0 > opts.divergence_energy {
        let status = RunStatus::Diverged { at_step: state.step };
        return RunResult { state, trace, status };
    }
    if stop(b, &state) {
        let status = RunStatus::Stopped { at_step: state.step };
        return RunResult { state, trace, status };
    }

    let mut status = RunStatus::Completed;
    for k in 1..=opts.max_steps {
        state = step(b, params, &state);
        let at_record = k % opts.record_every == 0 || k == opts.max_steps;
        if !at_record {
            // cheap guard between records
            if !b.norm_sq(&state.u).is_finite() {
                status = RunStatus::Diverged { at_step: state.step };
                break;
            }
            continue;
        }
        let e = record(b, &state, &mut trace);
        if !e.is_finite() || e > opts.divergence_energy {
            status = RunStatus::Diverged { at_step: state.step };
            break;
        }
        if stop(b, &state) {
            status = RunStatus::Stopped { at_step: state.step };
            break;
        }
    }
    RunResult { state, trace, status }
}

/// Zero-dimensional backend: one scalar degree of freedom, no Laplacian.
/// With `eps = 1` the objective is the bare double-well value.
pub struct ScalarBackend<P: SplitPotential> {
    pub well: P,
    pub eps: f64,
}

impl<P: SplitPotential> ScalarBackend<P> {
    pub fn new(well: P, eps: f64) -> Self {
        Self { well, eps }
    }
}

impl<P: SplitPotential> Backend for ScalarBackend<P> {
    type Field = f64;

    fn implicit_solve(&self, rhs: &f64, h: f64) -> f64 {
        rhs / (1.0 + 2.0 * h / (self.eps * self.eps))
    }

    fn descent_source(&self, u: &f64) -> f64 {
        self.well.concave_prime(*u) / (self.eps * self.eps)
    }

    fn convex_apply(&self, u: &f64) -> f64 {
        2.0 * u / (self.eps * self.eps)
    }

    fn objective(&self, u: &f64) -> f64 {
        self.well.eval(*u) / (self.eps * self.eps)
    }

    fn eps(&self) -> f64 {
        self.eps
    }

    fn lincomb(&self, a: f64, x: &f64, b: f64, y: &f64) -> f64 {
        a * x + b * y
    }

    fn norm_sq(&self, x: &f64) -> f64 {
        x * x
    }

    fn mean_value(&self, x: &f64) -> f64 {
        *x
    }

    fn zeros_like(&self, _x: &f64) -> f64 {
        0.0
    }
}

/// One sweep entry of the zero-dimensional scheme comparison.
#[derive(Debug, Clone)]
pub struct ScalarCompareRun {
    pub scheme: Scheme,
    pub tau: f64,
    pub trace: Vec<TraceRow>,
    pub status: RunStatus,
}

/// Compare Nesterov, FISTA and CINEMA on the bare double-well `W_R` for a
/// list of momentum step sizes, from `(u0, v0)`. `eta = tau^2`,
/// `rho = 1/(1 + alpha tau)`, `eps = 1`.
pub fn scalar_scheme_compare(
    r: f64,
    alpha: f64,
    tau_list: &[f64],
    n_steps: u64,
    u0: f64,
    v0: f64,
) -> Vec<ScalarCompareRun> {
    let well = crate::potentials::DoubleWell::scalar(r).expect("valid R");
    let backend = ScalarBackend::new(well, 1.0);
    let mut out = Vec::new();
    for &tau in tau_list {
        for scheme in [Scheme::Nesterov, Scheme::Fista, Scheme::Cinema] {
            let params = SchemeParams::momentum(scheme, tau, alpha, 1.0);
            let state = SchemeState { u: u0, v: v0, step: 0, time: 0.0 };
            let result = run(
                &backend,
                &params,
                state,
                RunOptions::new(n_steps, 1),
                |_, _| false,
                |_, _, _| {},
            );
            out.push(ScalarCompareRun { scheme, tau, trace: result.trace, status: result.status });
        }
    }
    out
}
