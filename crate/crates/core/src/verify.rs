//! Named verification suites and their report.
//!
//! Each suite returns one [`Check`] per identity: the worst residual over
//! its samples, the bound it is held to, and whether it passed. Sample
//! points derive from the configured seed, and independent samples fan out
//! through [`Execution`], so reports are reproducible in either mode.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cantor::twist::{det2, numeric_jacobian, JACOBIAN_STEP};
use crate::cantor::{encode_config, gs_to_block_map, CantorPoint, TwistMap};
use crate::corpus;
use crate::exec::{nan_max, Execution};
use crate::lift::{
    field_corpus, flow_integrate, flow_jacobian_det, hamiltonian_from_field, hamiltonian_residual,
    lift_identity_residual, lift_vf, projection_mismatch, volume_lie_derivative, DiscPipeline, PlanarField,
    ProductChartState, DEFAULT_DT, FLOW_JACOBIAN_STEP,
};
use crate::poisson::{
    broken_bivector, fibration_local_model, hamiltonian_vf, involution_check, k_fixtures, leaf_form, lie_bracket,
    lie_derivative_bivector, modular_vf, normal_form_unchecked, one_form_bracket, poisson_bracket, schouten_square,
    sharp, sharp_at, Bivector4, Diff, OneForm4, ScalarField4, VolumeForm4,
};
use crate::sampling::{Sampler, DEFAULT_SEED};
use crate::shift::{check_conjugacy_tm_gs, gs_step, tm_to_gs};
use crate::tm::{run_bounded, TuringMachine};

/// Which side of the bound a residual must fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    /// Sensitivity checks: a deliberately broken input must be detected.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub samples: usize,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.max_residual <= self.tolerance,
            Bound::AtLeast => self.max_residual > self.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,max_residual,bound,tolerance,samples,pass\n");
        for c in &self.checks {
            let op = if c.bound == Bound::AtMost { "<=" } else { ">" };
            let _ = writeln!(s, "{},{:e},{op},{:e},{},{}", c.name, c.max_residual, c.tolerance, c.samples, c.passed());
        }
        s
    }

    pub fn to_human(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut s = String::new();
        for c in &self.checks {
            let op = if c.bound == Bound::AtMost { "<=" } else { "> " };
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{tag}  {:width$}  max {:>10.3e}  {op} {:<8.1e}  n={}",
                c.name, c.max_residual, c.tolerance, c.samples
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }
}

/// Default bounds, keyed by the name used with `--tol NAME=X`.
pub const DEFAULT_TOLERANCES: [(&str, f64); 17] = [
    ("conjugacy", 0.0),
    ("fiber", 0.0),
    ("halting", 0.0),
    ("unimodular_pieces", 0.0),
    ("twist_det", 1e-8),
    ("jacobi", 1e-6),
    ("jacobi_sensitivity", 1e-2),
    ("modular", 1e-8),
    ("modular_shift", 1e-6),
    ("calculus", 1e-5),
    ("lift", 1e-12),
    ("volume", 1e-5),
    ("hamiltonian", 1e-5),
    ("flow", 1e-6),
    ("leaf", 1e-5),
    ("involution", 1e-10),
    ("rank", 0.0),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(DEFAULT_TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
    #[error("tolerance `{0}` must be a positive number")]
    BadTolerance(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        if !self.0.contains_key(name) {
            return Err(ConfigError::UnknownTolerance(name.to_string()));
        }
        if !(value > 0.0 && value.is_finite()) {
            return Err(ConfigError::BadTolerance(name.to_string()));
        }
        self.0.insert(name.to_string(), value);
        Ok(())
    }

    /// Parses `NAME=X`.
    pub fn set_assignment(&mut self, s: &str) -> Result<(), ConfigError> {
        let (name, value) = s.split_once('=').ok_or_else(|| ConfigError::BadTolerance(s.to_string()))?;
        let value: f64 = value.trim().parse().map_err(|_| ConfigError::BadTolerance(name.to_string()))?;
        self.set(name.trim(), value)
    }
}

/// Deliberate faults for checking that the suites catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Flip the sign of the `x₃` coefficient of the normal form.
    SignFlip,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub exec: Execution,
    pub tol: Tolerances,
    pub fault: Fault,
    pub machines: Vec<(String, TuringMachine)>,
    /// Number of exact steps for the conjugacy suite.
    pub conjugacy_steps: usize,
    pub budgets: Vec<usize>,
    pub dt: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            exec: Execution::default(),
            tol: Tolerances::default(),
            fault: Fault::None,
            machines: corpus::machines().into_iter().map(|(n, m)| (n.to_string(), m)).collect(),
            conjugacy_steps: 200,
            budgets: vec![10, 100, 1000],
            dt: DEFAULT_DT,
        }
    }
}

impl VerifyConfig {
    fn sampler(&self, salt: u64) -> Sampler {
        Sampler::new(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt))
    }

    fn at_most(&self, name: impl Into<String>, tol_key: &str, max_residual: f64, samples: usize) -> Check {
        Check { name: name.into(), max_residual, tolerance: self.tol.get(tol_key), bound: Bound::AtMost, samples }
    }

    fn at_least(&self, name: impl Into<String>, tol_key: &str, max_residual: f64, samples: usize) -> Check {
        Check { name: name.into(), max_residual, tolerance: self.tol.get(tol_key), bound: Bound::AtLeast, samples }
    }

    /// The normal form as the suites see it, with any injected fault.
    fn normal_form(&self, k: &ScalarField4) -> Bivector4 {
        match self.fault {
            Fault::None => normal_form_unchecked(k, [1.0, 1.0, 1.0]),
            Fault::SignFlip => normal_form_unchecked(k, [1.0, 1.0, -1.0]),
        }
    }
}

type SuiteFn = fn(&VerifyConfig) -> Vec<Check>;

/// Suite names, one-line descriptions and runners.
pub const SUITES: [(&str, &str, SuiteFn); 10] = [
    ("conjugacy", "machine, shift and block map agree step by step (exact)", suite_conjugacy),
    ("halting", "orbit enters the halting region exactly when the machine halts", suite_halting),
    ("area", "block pieces, embedding and twist maps preserve area", suite_area),
    ("jacobi", "normal form satisfies the Jacobi identity; broken fixture is caught", suite_jacobi),
    ("unimodular", "modular field vanishes and shifts by the Hamiltonian of log a", suite_unimodular),
    ("calculus", "sharp, Hamiltonian fields, form bracket and Poisson fields", suite_calculus),
    ("lift", "lift identity, invariant volume, recovery and flow integration", suite_lift),
    ("leaf", "leaf form reproduces the bracket on Hamiltonian fields", suite_leaf),
    ("local-model", "fibration model drops rank exactly on the singular circle", suite_local_model),
    ("involution", "involution preserves the normal form for invariant k", suite_involution),
];

/// Suites that only exercise the Poisson calculus.
pub const POISSON_SUITES: [&str; 6] = ["jacobi", "unimodular", "calculus", "leaf", "local-model", "involution"];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Runs the selected suites in the given order; `all` selects every suite.
pub fn run(selector: &[String], cfg: &VerifyConfig) -> Result<Report, ConfigError> {
    let mut names: Vec<&str> = Vec::new();
    for s in selector {
        if s == "all" {
            names.extend(suite_names());
        } else if let Some(found) = SUITES.iter().find(|x| x.0 == s) {
            names.push(found.0);
        } else {
            return Err(ConfigError::UnknownSuite(s.clone()));
        }
    }
    let mut report = Report::default();
    for name in names {
        let run = SUITES.iter().find(|x| x.0 == name).expect("known suite").2;
        report.checks.extend(run(cfg));
    }
    Ok(report)
}

/// First `k ≤ n` at which the block map and the shift disagree on the
/// encoded orbit of the machine's initial configuration.
pub fn shift_block_divergence(tm: &TuringMachine, n: usize) -> Option<usize> {
    let compiled = tm_to_gs(tm);
    let map = gs_to_block_map(&compiled.gs);
    let len = compiled.alphabet.len();
    let mut seq = compiled.encode(&tm.initial_config());
    let mut p: CantorPoint = encode_config(&seq, len);
    for k in 0..=n {
        if p != encode_config(&seq, len) {
            return Some(k);
        }
        if k == n {
            break;
        }
        seq = gs_step(&compiled.gs, &seq);
        p = match map.apply(&p) {
            Ok(q) => q,
            Err(_) => return Some(k + 1),
        };
    }
    None
}

fn suite_conjugacy(cfg: &VerifyConfig) -> Vec<Check> {
    let n = cfg.conjugacy_steps;
    cfg.exec
        .map(&cfg.machines, |(name, tm)| {
            let tg = check_conjugacy_tm_gs(tm, &tm.initial_config(), n);
            let gb = shift_block_divergence(tm, n);
            vec![
                cfg.at_most(
                    format!("conjugacy.tm_gs.{name}"),
                    "conjugacy",
                    f64::from(u8::from(!tg.passed())),
                    tg.steps_checked,
                ),
                cfg.at_most(
                    format!("conjugacy.gs_block.{name}"),
                    "conjugacy",
                    f64::from(u8::from(gb.is_some())),
                    n + 1,
                ),
            ]
        })
        .into_iter()
        .flatten()
        .collect()
}

fn suite_halting(cfg: &VerifyConfig) -> Vec<Check> {
    let jobs: Vec<(String, TuringMachine, usize)> =
        cfg.machines.iter().flat_map(|(n, m)| cfg.budgets.iter().map(move |&b| (n.clone(), m.clone(), b))).collect();
    let mut checks: Vec<Check> = cfg.exec.map(&jobs, |(name, tm, budget)| {
        let pipeline = DiscPipeline::new(tm);
        let c = tm.initial_config();
        let ok = match pipeline.reach(&c, *budget) {
            Ok(v) => v.agrees_with(&run_bounded(tm, &c, *budget).verdict),
            Err(_) => false,
        };
        cfg.at_most(format!("halting.agree.{name}.{budget}"), "halting", f64::from(u8::from(!ok)), budget + 1)
    });
    let n = 100;
    checks.extend(cfg.exec.map(&cfg.machines, |(name, tm)| {
        let bad = !matches!(projection_mismatch(&DiscPipeline::new(tm), &tm.initial_config(), n), Ok(None));
        cfg.at_most(format!("halting.projection.{name}"), "halting", f64::from(u8::from(bad)), n + 1)
    }));
    checks
}

/// `max |det − 1|` of the numeric Jacobian of `f` over the points.
pub fn max_det_error(f: impl Fn([f64; 2]) -> [f64; 2] + Sync + Send, pts: &[[f64; 2]], exec: Execution) -> f64 {
    exec.max_by(pts, |&p| (det2(numeric_jacobian(&f, p, JACOBIAN_STEP)) - 1.0).abs())
}

fn suite_area(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = cfg
        .machines
        .iter()
        .map(|(name, tm)| {
            let map = gs_to_block_map(&tm_to_gs(tm).gs);
            let bad = map.pieces.iter().filter(|p| p.determinant() != num_traits::One::one()).count();
            cfg.at_most(format!("area.pieces.{name}"), "unimodular_pieces", bad as f64, map.pieces.len())
        })
        .collect();
    let pts = cfg.sampler(3).disc_points(100, 1.0);
    let (rho, sigma) = (TwistMap::rho(), TwistMap::sigma());
    for (label, err) in [
        ("rho", max_det_error(|p| rho.apply(p), &pts, cfg.exec)),
        ("sigma", max_det_error(|p| sigma.apply(p), &pts, cfg.exec)),
        ("sigma_rho", max_det_error(|p| sigma.apply(rho.apply(p)), &pts, cfg.exec)),
    ] {
        checks.push(cfg.at_most(format!("area.twist.{label}"), "twist_det", err, pts.len()));
    }
    checks
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, nan_max)
}

fn suite_jacobi(cfg: &VerifyConfig) -> Vec<Check> {
    let pts = cfg.sampler(4).chart_points(100, 0.0);
    let d = Diff::default();
    let mut checks: Vec<Check> = k_fixtures()
        .iter()
        .map(|k| {
            let pi = cfg.normal_form(k);
            let worst = cfg.exec.max_by(&pts, |q| max_abs(&schouten_square(&pi, q, d)));
            cfg.at_most(format!("jacobi.k={}", k.label), "jacobi", worst, pts.len())
        })
        .collect();
    let broken = broken_bivector();
    let worst = cfg.exec.max_by(&pts, |q| max_abs(&schouten_square(&broken, q, d)));
    checks.push(cfg.at_least("jacobi.broken_fixture", "jacobi_sensitivity", worst, pts.len()));
    checks
}

fn suite_unimodular(cfg: &VerifyConfig) -> Vec<Check> {
    let pts = cfg.sampler(5).chart_points(100, 0.0);
    let d = Diff::default();
    let pi = cfg.normal_form(&ScalarField4::constant(1.0));
    let omega = VolumeForm4::euclidean();
    let y = modular_vf(&pi, &omega, d);
    let a = ScalarField4::new("exp(x3)", |q| q[3].exp());
    let ya = modular_vf(&pi, &omega.scaled(&a), d);
    let xlog = hamiltonian_vf(&pi, &ScalarField4::new("log a", |q| q[3].exp().ln()), d);
    vec![
        cfg.at_most("unimodular.modular_field", "modular", cfg.exec.max_by(&pts, |q| max_abs(&y.at(q))), pts.len()),
        cfg.at_most(
            "unimodular.class_shift",
            "modular_shift",
            cfg.exec.max_by(&pts, |q| {
                let (y0, y1, x) = (y.at(q), ya.at(q), xlog.at(q));
                max_abs(&[y1[0] - y0[0] + x[0], y1[1] - y0[1] + x[1], y1[2] - y0[2] + x[2], y1[3] - y0[3] + x[3]])
            }),
            pts.len(),
        ),
    ]
}

fn suite_calculus(cfg: &VerifyConfig) -> Vec<Check> {
    let mut smp = cfg.sampler(6);
    let pts = smp.chart_points(50, 0.0);
    let covectors: Vec<([f64; 4], [f64; 4])> = (0..pts.len()).map(|_| (smp.covector(), smp.covector())).collect();
    let d = Diff::default();
    let nested = Diff::nested();
    let k = ScalarField4::new("2+sin(θ)", |q| 2.0 + q[0].sin());
    let pi = cfg.normal_form(&k);
    let idx: Vec<usize> = (0..pts.len()).collect();

    let sharp_err = cfg.exec.max_by(&idx, |&i| {
        let (q, (a, b)) = (&pts[i], &covectors[i]);
        let v = sharp_at(&pi, q, a);
        (b.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() - pi.pair(q, a, b)).abs()
    });

    let f = ScalarField4::new("f", |q| q[1] * q[2] + q[0].sin() * q[3]);
    let g = ScalarField4::new("g", |q| q[1].cos() + q[3] * q[3] * q[2]);
    let xf = hamiltonian_vf(&pi, &f, d);
    let ham_err = cfg.exec.max_by(&pts, |q| (poisson_bracket(&pi, &f, &g, q, d) - xf.derivative_of(&g, q, d)).abs());

    let alpha = OneForm4::new(|q| [q[1], q[2] * q[3], 1.0, q[1] * q[2]]);
    let beta = OneForm4::new(|q| [0.0, q[3], q[1] * q[1], q[0].cos()]);
    let (xa, xb) = (sharp(&pi, &alpha), sharp(&pi, &beta));
    let hom_err = cfg.exec.max_by(&pts, |q| {
        let lhs = sharp_at(&pi, q, &one_form_bracket(&pi, &alpha, &beta, q, d));
        let rhs = lie_bracket(&xa, &xb, q, d);
        max_abs(&[lhs[0] - rhs[0], lhs[1] - rhs[1], lhs[2] - rhs[2], lhs[3] - rhs[3]])
    });

    let h = ScalarField4::new("x1²+x2²", |q| q[1] * q[1] + q[2] * q[2]);
    let xh = hamiltonian_vf(&pi, &h, d);
    let a = ScalarField4::new("exp(x3)", |q| q[3].exp());
    let y = modular_vf(&pi, &VolumeForm4::euclidean().scaled(&a), d);
    let ham_poisson = cfg.exec.max_by(&pts, |q| max_abs(&lie_derivative_bivector(&pi, &xh, q, nested)));
    let mod_poisson = cfg.exec.max_by(&pts, |q| max_abs(&lie_derivative_bivector(&pi, &y, q, nested)));
    let n = pts.len();
    vec![
        cfg.at_most("calculus.sharp_pairing", "calculus", sharp_err, n),
        cfg.at_most("calculus.hamiltonian_derivation", "calculus", ham_err, n),
        cfg.at_most("calculus.sharp_homomorphism", "calculus", hom_err, n),
        cfg.at_most("calculus.hamiltonian_is_poisson", "calculus", ham_poisson, n),
        cfg.at_most("calculus.modular_is_poisson", "calculus", mod_poisson, n),
    ]
}

fn suite_lift(cfg: &VerifyConfig) -> Vec<Check> {
    let mut smp = cfg.sampler(7);
    let states: Vec<ProductChartState> = smp
        .disc_points(100, 1.0)
        .into_iter()
        .map(|p| ProductChartState::new(p, [smp.uniform(0.0, 1.0), smp.uniform(0.0, 1.0)]).expect("inside the disc"))
        .collect();
    let fields = field_corpus();
    let mut checks = Vec::new();

    let lift_err = fields
        .iter()
        .map(|x| {
            let lifted = lift_vf(x);
            cfg.exec.max_by(&states, |s| lift_identity_residual(x, &lifted, s))
        })
        .fold(0.0, nan_max);
    checks.push(cfg.at_most("lift.identity", "lift", lift_err, states.len() * fields.len()));

    let div_err = fields
        .iter()
        .map(|x| {
            let lifted = lift_vf(x);
            cfg.exec.max_by(&states, |s| volume_lie_derivative(&lifted, s, Diff::default()).abs())
        })
        .fold(0.0, nan_max);
    checks.push(cfg.at_most("lift.volume_invariance", "volume", div_err, states.len() * fields.len()));

    let disc = smp.disc_points(100, 0.99);
    let ham_err = cfg
        .exec
        .map(&fields, |x| match hamiltonian_from_field(x) {
            Ok(h) => disc.iter().map(|&p| hamiltonian_residual(x, &h, p)).fold(0.0, nan_max),
            Err(_) => f64::INFINITY,
        })
        .into_iter()
        .fold(0.0, nan_max);
    checks.push(cfg.at_most("lift.hamiltonian_recovery", "hamiltonian", ham_err, disc.len() * fields.len()));

    // long flows: rotation and the twists, from one state each
    let flows: Vec<(PlanarField, ProductChartState)> = fields
        .iter()
        .skip(1)
        .map(|x| (x.clone(), ProductChartState::new([0.35, 0.2], [0.3, 0.7]).expect("inside the disc")))
        .collect();
    let results = cfg.exec.map(&flows, |(x, s)| {
        let lifted = lift_vf(x);
        let fiber_ok = match flow_integrate(&lifted, s, 10.0, cfg.dt) {
            Ok(tr) => tr.states.iter().all(|st| st.fiber.map(f64::to_bits) == s.fiber.map(f64::to_bits)),
            Err(_) => false,
        };
        let det =
            flow_jacobian_det(&lifted, s, 10.0, cfg.dt, FLOW_JACOBIAN_STEP).map_or(f64::INFINITY, |d| (d - 1.0).abs());
        (fiber_ok, det)
    });
    let fiber_bad = results.iter().filter(|r| !r.0).count();
    checks.push(cfg.at_most("lift.fiber_bit_identical", "fiber", fiber_bad as f64, flows.len()));
    let det = results.iter().map(|r| r.1).fold(0.0, nan_max);
    checks.push(cfg.at_most("lift.flow_volume_t10", "volume", det, flows.len()));

    let s = ProductChartState::new([0.5, 0.0], [0.3, 0.7]).expect("inside the disc");
    let rot = flow_integrate(&lift_vf(&PlanarField::rotation()), &s, std::f64::consts::PI, cfg.dt).map_or(
        f64::INFINITY,
        |tr| {
            let e = tr.last().horizontal;
            (e[0] + 0.5).abs().max(e[1].abs())
        },
    );
    checks.push(cfg.at_most("lift.rotation_half_turn", "flow", rot, 1));
    checks
}

fn suite_leaf(cfg: &VerifyConfig) -> Vec<Check> {
    let pts = cfg.sampler(8).chart_points(50, 0.1);
    let d = Diff::default();
    let f = ScalarField4::new("f", |q| q[1] + q[2] * q[3]);
    let g = ScalarField4::new("g", |q| q[2] * q[2] - q[0].sin() * q[1]);
    k_fixtures()
        .iter()
        .map(|k| {
            let pi = cfg.normal_form(k);
            let (xf, xg) = (hamiltonian_vf(&pi, &f, d), hamiltonian_vf(&pi, &g, d));
            let worst = cfg.exec.max_by(&pts, |q| match leaf_form(k, q, &xf.at(q), &xg.at(q)) {
                Ok(w) => (w - poisson_bracket(&pi, &f, &g, q, d)).abs(),
                Err(_) => f64::INFINITY,
            });
            cfg.at_most(format!("leaf.compatibility.k={}", k.label), "leaf", worst, pts.len())
        })
        .collect()
}

fn suite_local_model(cfg: &VerifyConfig) -> Vec<Check> {
    let mut smp = cfg.sampler(9);
    let on: Vec<[f64; 4]> = (0..100).map(|_| [0.0, 0.0, 0.0, smp.uniform(-2.0, 2.0)]).collect();
    let off: Vec<[f64; 4]> = smp
        .box_points(400)
        .into_iter()
        .filter(|y| y[..3].iter().map(|v| v * v).sum::<f64>().sqrt() > 1e-3)
        .take(100)
        .collect();
    let bad_on = cfg.exec.map(&on, |y| fibration_local_model(y).rank != 1).into_iter().filter(|&b| b).count();
    let bad_off = cfg.exec.map(&off, |y| fibration_local_model(y).rank != 2).into_iter().filter(|&b| b).count();
    vec![
        cfg.at_most("local_model.rank_on_singular_circle", "rank", bad_on as f64, on.len()),
        cfg.at_most("local_model.rank_off_singular_circle", "rank", bad_off as f64, off.len()),
    ]
}

fn suite_involution(cfg: &VerifyConfig) -> Vec<Check> {
    let pts = cfg.sampler(10).chart_points(100, 0.0);
    let tol = cfg.tol.get("involution");
    let mut checks: Vec<Check> =
        [ScalarField4::constant(1.0), ScalarField4::new("2+sin(2θ)·x₃", |q| 2.0 + (2.0 * q[0]).sin() * q[3])]
            .iter()
            .map(|k| {
                let r = involution_check(k, &pts, tol);
                cfg.at_most(format!("involution.invariant.k={}", k.label), "involution", r.max_residual, r.samples)
            })
            .collect();
    let asym = ScalarField4::new("2+x₁", |q| 2.0 + q[1]);
    let r = involution_check(&asym, &pts, tol);
    checks.push(cfg.at_least("involution.detects.k=2+x₁", "involution", r.max_residual, r.samples));
    checks
}
