//! Disc dynamics lifted to the product chart `D × F`.
//!
//! `D` is the unit disc with area form `dx₁∧dx₂` and `F` the flat torus chart
//! `[0, 1)²` with `dy₁∧dy₂`. A planar field `X` on `D` lifts to
//! `X̄ = X¹∂x₁ + X²∂x₂` with no fiber part, so every lifted flow carries the
//! fiber coordinates along untouched.
//!
//! The same product structure runs the discrete chain: a machine's initial
//! configuration becomes an exact point of `D × {s₀}`, the disc map drives
//! the horizontal factor, and the orbit meets the lifted halting region iff
//! the machine halts.

use std::sync::Arc;

use nalgebra::Matrix4;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cantor::{
    disc_map, embed_square_in_disc, encode_config, gs_to_block_map, halting_region, rat, BlockMap, DiscPoint,
    HaltingRegion, OpenRect, Rational, TwistMap,
};
use crate::error::{DynamicsError, FlowError, PipelineError};
use crate::poisson::{Diff, Point4, VolumeForm4};
use crate::shift::{tm_to_gs, CompiledShift};
use crate::tm::{run_bounded, RunVerdict, TapeConfig, TuringMachine};

/// Point of `D × F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductChartState {
    pub horizontal: [f64; 2],
    pub fiber: [f64; 2],
}

impl ProductChartState {
    /// Reduces the fiber modulo 1; `None` if the horizontal part leaves the
    /// closed unit disc.
    pub fn new(horizontal: [f64; 2], fiber: [f64; 2]) -> Option<Self> {
        (horizontal[0].hypot(horizontal[1]) <= 1.0)
            .then(|| Self { horizontal, fiber: fiber.map(|y| y.rem_euclid(1.0)) })
    }

    pub fn coords(&self) -> Point4 {
        [self.horizontal[0], self.horizontal[1], self.fiber[0], self.fiber[1]]
    }
}

/// `ω_{D×F} = dx₁∧dx₂ + dy₁∧dy₂` in coordinates `(x₁, x₂, y₁, y₂)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProductSymplectic;

impl ProductSymplectic {
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        [[0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0]]
    }

    pub fn determinant(&self) -> f64 {
        let m = self.matrix();
        Matrix4::from_fn(|i, j| m[i][j]).determinant()
    }

    /// Covector `(ι_V ω)_j = Σ_i Vⁱ ω_{ij}`.
    pub fn contract(&self, v: &[f64; 4]) -> [f64; 4] {
        let m = self.matrix();
        std::array::from_fn(|j| (0..4).map(|i| v[i] * m[i][j]).sum())
    }
}

/// Vector field on the disc.
#[derive(Clone)]
pub struct PlanarField {
    eval: Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>,
    pub label: String,
}

impl PlanarField {
    pub fn new(label: impl Into<String>, f: impl Fn([f64; 2]) -> [f64; 2] + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f), label: label.into() }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_| [0.0, 0.0])
    }

    /// Unit-speed rotation `(−x₂, x₁)`.
    pub fn rotation() -> Self {
        Self::new("rotation", |p| [-p[1], p[0]])
    }

    /// The twist field whose time-1 flow is the given twist map.
    pub fn twist(label: impl Into<String>, t: TwistMap) -> Self {
        Self::new(label, move |p| t.field(p))
    }

    pub fn at(&self, p: [f64; 2]) -> [f64; 2] {
        (self.eval)(p)
    }

    /// Central-difference divergence.
    pub fn divergence(&self, p: [f64; 2], h: f64) -> f64 {
        let dx = (self.at([p[0] + h, p[1]])[0] - self.at([p[0] - h, p[1]])[0]) / (2.0 * h);
        let dy = (self.at([p[0], p[1] + h])[1] - self.at([p[0], p[1] - h])[1]) / (2.0 * h);
        dx + dy
    }
}

impl std::fmt::Debug for PlanarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PlanarField({})", self.label)
    }
}

/// Fields used by the recovery and integration checks.
pub fn field_corpus() -> Vec<PlanarField> {
    vec![
        PlanarField::zero(),
        PlanarField::rotation(),
        PlanarField::twist("rho", TwistMap::rho()),
        PlanarField::twist("sigma", TwistMap::sigma()),
        PlanarField::twist("offset", TwistMap::new([0.2, 0.1], 0.1, 0.4, 2.5).expect("valid radii")),
    ]
}

/// Horizontal lift of a planar field.
#[derive(Clone, Debug)]
pub struct LiftedField {
    horizontal: PlanarField,
}

impl LiftedField {
    pub fn horizontal(&self) -> &PlanarField {
        &self.horizontal
    }

    /// `(X¹, X², 0, 0)`; the fiber coordinates are never read.
    pub fn at(&self, s: &ProductChartState) -> [f64; 4] {
        let [a, b] = self.horizontal.at(s.horizontal);
        [a, b, 0.0, 0.0]
    }

    /// The same field on raw chart coordinates.
    pub fn at_coords(&self, q: &Point4) -> [f64; 4] {
        let [a, b] = self.horizontal.at([q[0], q[1]]);
        [a, b, 0.0, 0.0]
    }
}

pub fn lift_vf(x: &PlanarField) -> LiftedField {
    LiftedField { horizontal: x.clone() }
}

/// `max_j |(ι_{X̄} ω_{D×F})_j − (p_D*(ι_X ω_D))_j|` at `s`.
pub fn lift_identity_residual(x: &PlanarField, lifted: &LiftedField, s: &ProductChartState) -> f64 {
    let lhs = ProductSymplectic.contract(&lifted.at(s));
    // ι_X(dx₁∧dx₂) = X¹ dx₂ − X² dx₁, pulled back with zero fiber part
    let v = x.at(s.horizontal);
    let rhs = [-v[1], v[0], 0.0, 0.0];
    (0..4).map(|j| (lhs[j] - rhs[j]).abs()).fold(0.0, f64::max)
}

/// Invariant volume of `D × F`: `ω_F ∧ ω_D`, the constant density 1 on
/// `dx₁∧dx₂∧dy₁∧dy₂`.
pub fn invariant_volume() -> VolumeForm4 {
    VolumeForm4::euclidean()
}

/// `L_{X̄} vol = div(X̄)·vol`; returns the divergence factor.
pub fn volume_lie_derivative(lifted: &LiftedField, s: &ProductChartState, d: Diff) -> f64 {
    invariant_volume().divergence(|q| lifted.at_coords(q), &s.coords(), d)
}

/// Function on the disc.
#[derive(Clone)]
pub struct DiscFunction(Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>);

impl DiscFunction {
    pub fn at(&self, p: [f64; 2]) -> f64 {
        (self.0)(p)
    }

    pub fn gradient(&self, p: [f64; 2], h: f64) -> [f64; 2] {
        [
            (self.at([p[0] + h, p[1]]) - self.at([p[0] - h, p[1]])) / (2.0 * h),
            (self.at([p[0], p[1] + h]) - self.at([p[0], p[1] - h])) / (2.0 * h),
        ]
    }
}

/// Largest |div X| tolerated before recovery refuses the field.
pub const DIVERGENCE_TOL: f64 = 1e-6;

const GAUSS_NODES: [f64; 5] =
    [0.0, -0.538_469_310_105_683, 0.538_469_310_105_683, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GAUSS_WEIGHTS: [f64; 5] =
    [0.568_888_888_888_889, 0.478_628_670_499_366, 0.478_628_670_499_366, 0.236_926_885_056_189, 0.236_926_885_056_189];
const PANELS: usize = 64;

/// Grid of points in the closed unit disc used for the divergence check.
fn divergence_grid() -> Vec<[f64; 2]> {
    let n = 41;
    let mut pts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = [-1.0 + 2.0 * i as f64 / (n - 1) as f64, -1.0 + 2.0 * j as f64 / (n - 1) as f64];
            if p[0].hypot(p[1]) <= 1.0 {
                pts.push(p);
            }
        }
    }
    pts
}

/// Max |div X| over the check grid.
pub fn max_divergence(x: &PlanarField) -> f64 {
    divergence_grid().into_iter().map(|p| x.divergence(p, 1e-5).abs()).fold(0.0, crate::exec::nan_max)
}

/// Primitive `h` with `ι_X ω = −dh`, from the radial line integral
/// `h(p) = −∫₀¹ (ι_X ω)_{s·p}(p) ds`, so `h(0) = 0`.
pub fn hamiltonian_from_field(x: &PlanarField) -> Result<DiscFunction, FlowError> {
    let div = max_divergence(x);
    if div.is_nan() || div > DIVERGENCE_TOL {
        return Err(FlowError::NotDivergenceFree(div));
    }
    let x = x.clone();
    Ok(DiscFunction(Arc::new(move |p| {
        let integrand = |s: f64| {
            let v = x.at([s * p[0], s * p[1]]);
            v[0] * p[1] - v[1] * p[0]
        };
        let w = 1.0 / PANELS as f64;
        let mut total = 0.0;
        for k in 0..PANELS {
            let mid = (k as f64 + 0.5) * w;
            for (node, weight) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
                total += weight * integrand(mid + 0.5 * w * node);
            }
        }
        -0.5 * w * total
    })))
}

/// `max |dh + ι_X ω|` at `p`, with `dh` by central differences.
pub fn hamiltonian_residual(x: &PlanarField, h: &DiscFunction, p: [f64; 2]) -> f64 {
    let dh = h.gradient(p, 1e-5);
    let v = x.at(p);
    // ι_X ω = (−X², X¹)
    (dh[0] - v[1]).abs().max((dh[1] + v[0]).abs())
}

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
pub const DEFAULT_DT: f64 = 1e-3;
/// Step for [`flow_jacobian_det`].
pub const FLOW_JACOBIAN_STEP: f64 = 1e-4;

/// States at `t = 0, dt, 2dt, ...`, ending exactly at the requested time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ProductChartState>,
}

impl Trajectory {
    pub fn last(&self) -> &ProductChartState {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// One implicit-midpoint step `z = x + dt·X((x + z)/2)`, solved by Newton
/// iteration with a difference-quotient Jacobian.
fn midpoint_step(x: &PlanarField, p: [f64; 2], dt: f64) -> Option<[f64; 2]> {
    let h = 1e-7;
    let v0 = x.at(p);
    let mut z = [p[0] + dt * v0[0], p[1] + dt * v0[1]];
    for _ in 0..NEWTON_MAX_ITER {
        let m = [(p[0] + z[0]) / 2.0, (p[1] + z[1]) / 2.0];
        let v = x.at(m);
        let r = [z[0] - p[0] - dt * v[0], z[1] - p[1] - dt * v[1]];
        let col = |j: usize| {
            let (mut a, mut b) = (m, m);
            a[j] += h;
            b[j] -= h;
            let (fa, fb) = (x.at(a), x.at(b));
            [(fa[0] - fb[0]) / (2.0 * h), (fa[1] - fb[1]) / (2.0 * h)]
        };
        let (c0, c1) = (col(0), col(1));
        // ∂r/∂z = I − (dt/2)·DX(m)
        let j = [[1.0 - 0.5 * dt * c0[0], -0.5 * dt * c1[0]], [-0.5 * dt * c0[1], 1.0 - 0.5 * dt * c1[1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dz = [(j[1][1] * r[0] - j[0][1] * r[1]) / det, (j[0][0] * r[1] - j[1][0] * r[0]) / det];
        z = [z[0] - dz[0], z[1] - dz[1]];
        if dz[0].abs().max(dz[1].abs()) <= NEWTON_TOL {
            return Some(z);
        }
    }
    None
}

/// Integrates the horizontal ODE by the implicit midpoint rule. The fiber
/// is copied from the initial state into every entry.
pub fn flow_integrate(lifted: &LiftedField, s: &ProductChartState, t: f64, dt: f64) -> Result<Trajectory, FlowError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(FlowError::BadStep(dt));
    }
    let x = lifted.horizontal();
    let full = (t / dt).floor() as usize;
    let rest = t - full as f64 * dt;
    let mut times = vec![0.0];
    let mut states = vec![*s];
    let mut p = s.horizontal;
    let steps = (0..full).map(|_| dt).chain((rest > 1e-15 * t.abs().max(1.0)).then_some(rest));
    for (n, h) in steps.enumerate() {
        p = midpoint_step(x, p, h)
            .ok_or(FlowError::NonConvergence { step: n + 1, state: [p[0], p[1], s.fiber[0], s.fiber[1]] })?;
        times.push(if n < full { (n + 1) as f64 * dt } else { t });
        states.push(ProductChartState { horizontal: p, fiber: s.fiber });
    }
    Ok(Trajectory { times, states })
}

/// Determinant of the 4×4 fourth-order central-difference Jacobian of the
/// time-`t` flow map at `s`.
pub fn flow_jacobian_det(
    lifted: &LiftedField,
    s: &ProductChartState,
    t: f64,
    dt: f64,
    h: f64,
) -> Result<f64, FlowError> {
    let end = |q: Point4| -> Result<Point4, FlowError> {
        let st = ProductChartState { horizontal: [q[0], q[1]], fiber: [q[2], q[3]] };
        Ok(flow_integrate(lifted, &st, t, dt)?.last().coords())
    };
    let q = s.coords();
    let mut jac = Matrix4::zeros();
    for j in 0..4 {
        let at = |k: f64| {
            let mut a = q;
            a[j] += k * h;
            end(a)
        };
        let (p1, m1, p2, m2) = (at(1.0)?, at(-1.0)?, at(2.0)?, at(-2.0)?);
        for i in 0..4 {
            jac[(i, j)] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
        }
    }
    Ok(jac.determinant())
}

/// Whether a machine's orbit reached the halting region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The orbit point after this many steps lies in the region.
    EntersAt(usize),
    /// No orbit point up to this budget lies in the region.
    NotWithin(usize),
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::EntersAt(n) => write!(f, "EntersAt({n})"),
            Verdict::NotWithin(n) => write!(f, "NotWithin({n})"),
        }
    }
}

impl Verdict {
    pub fn agrees_with(&self, run: &RunVerdict) -> bool {
        match (self, run) {
            (Verdict::EntersAt(a), RunVerdict::HaltedAt(b)) => a == b,
            (Verdict::NotWithin(a), RunVerdict::StillRunning(b)) => a == b,
            _ => false,
        }
    }

    pub fn step(&self) -> usize {
        match self {
            Verdict::EntersAt(n) | Verdict::NotWithin(n) => *n,
        }
    }
}

/// Exact point of `D × F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactState {
    pub horizontal: DiscPoint,
    pub fiber: [Rational; 2],
}

/// A machine compiled all the way to the disc, with its halting region
/// carried into disc coordinates.
#[derive(Debug, Clone)]
pub struct DiscPipeline {
    pub compiled: CompiledShift,
    pub map: BlockMap,
    pub region: HaltingRegion,
    /// Region rectangles translated into disc coordinates.
    pub disc_region: Vec<OpenRect>,
}

impl DiscPipeline {
    pub fn new(tm: &TuringMachine) -> Self {
        let compiled = tm_to_gs(tm);
        let map = gs_to_block_map(&compiled.gs);
        let region = halting_region(&compiled, &map);
        let h = rat(-1, 2);
        let disc_region = region.rects.iter().map(|r| r.translate(&h, &h)).collect();
        Self { compiled, map, region, disc_region }
    }

    /// Starting point `(embedded encoding of c, s₀)` with `s₀ = (0, 0)`.
    pub fn start(&self, c: &TapeConfig) -> ExactState {
        let seq = self.compiled.encode(c);
        let p = encode_config(&seq, self.compiled.alphabet.len());
        ExactState { horizontal: embed_square_in_disc(&p), fiber: [BigRational::zero(), BigRational::zero()] }
    }

    /// Membership in the lifted halting region `f⁻¹(ν)`: only the horizontal
    /// factor is consulted.
    pub fn in_region(&self, s: &ExactState) -> bool {
        self.in_region_disc(&s.horizontal)
    }

    pub fn in_region_disc(&self, q: &DiscPoint) -> bool {
        self.disc_region.iter().any(|r| r.contains(&q.u, &q.v))
    }

    /// One step of the product dynamics: the disc map on `D`, the identity
    /// on `F`.
    pub fn step(&self, s: &ExactState) -> Result<ExactState, DynamicsError> {
        Ok(ExactState { horizontal: disc_map(&self.map, &s.horizontal)?, fiber: s.fiber.clone() })
    }

    /// Orbit of the start state up to `n` steps, stopping early at the first
    /// point in the region when `stop_in_region` is set.
    pub fn orbit(&self, c: &TapeConfig, n: usize, stop_in_region: bool) -> Result<Vec<ExactState>, DynamicsError> {
        let mut out = vec![self.start(c)];
        for _ in 0..n {
            let last = out.last().expect("orbit is non-empty");
            if stop_in_region && self.in_region(last) {
                break;
            }
            let next = self.step(last)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn reach(&self, c: &TapeConfig, n_max: usize) -> Result<Verdict, DynamicsError> {
        let orbit = self.orbit(c, n_max, true)?;
        let last = orbit.len() - 1;
        Ok(if self.in_region(&orbit[last]) { Verdict::EntersAt(last) } else { Verdict::NotWithin(n_max) })
    }
}

/// Runs the product orbit of the machine's initial configuration against
/// the lifted halting region and checks it against a direct run.
pub fn reachability_harness(tm: &TuringMachine, n_max: usize) -> Result<Verdict, PipelineError> {
    let pipeline = DiscPipeline::new(tm);
    let c = tm.initial_config();
    let verdict = pipeline.reach(&c, n_max)?;
    let run = run_bounded(tm, &c, n_max).verdict;
    if verdict.agrees_with(&run) {
        Ok(verdict)
    } else {
        Err(PipelineError::Disagreement { verdict: verdict.to_string(), run: format!("{run:?}") })
    }
}

/// `machine,verdict,step,agrees` summary line.
pub fn verdict_line(name: &str, verdict: &Verdict, agrees: bool) -> String {
    let kind = match verdict {
        Verdict::EntersAt(_) => "EntersAt",
        Verdict::NotWithin(_) => "NotWithin",
    };
    format!("{name},{kind},{},{}", verdict.step(), agrees)
}

/// Checks that projecting the product orbit to `D` gives the disc orbit of
/// the projected start, exactly, for `n` steps. Returns the first step where
/// they differ.
pub fn projection_mismatch(pipeline: &DiscPipeline, c: &TapeConfig, n: usize) -> Result<Option<usize>, DynamicsError> {
    let product = pipeline.orbit(c, n, false)?;
    let mut q = product[0].horizontal.clone();
    for (k, s) in product.iter().enumerate() {
        if s.horizontal != q || !s.fiber.iter().all(Zero::is_zero) {
            return Ok(Some(k));
        }
        q = disc_map(&pipeline.map, &q)?;
    }
    Ok(None)
}

/// `step,t,x1,x2,y1,y2,in_nu` rows for a trajectory.
pub fn trajectory_csv(tr: &Trajectory, in_nu: impl Fn(&ProductChartState) -> bool) -> String {
    use std::fmt::Write as _;
    let mut s = String::from("step,t,x1,x2,y1,y2,in_nu\n");
    for (k, (t, st)) in tr.times.iter().zip(&tr.states).enumerate() {
        let [x1, x2, y1, y2] = st.coords();
        let _ = writeln!(s, "{k},{t},{x1},{x2},{y1},{y2},{}", u8::from(in_nu(st)));
    }
    s
}

impl DiscPipeline {
    /// Region membership of a floating-point horizontal point, converted
    /// exactly to a rational first.
    pub fn in_region_f64(&self, p: [f64; 2]) -> bool {
        match (BigRational::from_float(p[0]), BigRational::from_float(p[1])) {
            (Some(u), Some(v)) => self.disc_region.iter().any(|r| r.contains(&u, &v)),
            _ => false,
        }
    }
}
