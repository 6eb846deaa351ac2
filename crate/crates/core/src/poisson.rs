//! Numerical Poisson calculus on a 4-dimensional coordinate chart.
//!
//! Fields are closures of the chart point `q = (q₀, q₁, q₂, q₃)`; on the
//! normal-form chart these are `(θ, x₁, x₂, x₃)`. Every derivative is a
//! central difference with the step carried by [`Diff`].
//!
//! Conventions: the sharp map satisfies `β(#α) = π(α, β)`, so
//! `(#α)^i = Σ_j α_j π^{ji}`; Hamiltonian fields are `X_h = #(dh)`, hence
//! `X_f(g) = π(df, dg) = {f, g}`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::SMatrix;

use crate::error::PoissonError;
use crate::sampling::Sampler;

pub type Point4 = [f64; 4];

/// Index pairs `(i, j)`, `i < j`, in the order bivector coefficients are stored.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index triples `(i, j, k)`, `i < j < k`, for trivector components.
pub const TRIPLES: [(usize, usize, usize); 4] = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];

/// Central-difference step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diff {
    pub step: f64,
}

impl Diff {
    pub const DEFAULT_STEP: f64 = 1e-5;
    /// Used when differentiating a field that is itself a difference quotient.
    pub const NESTED_STEP: f64 = 1e-4;

    pub fn new(step: f64) -> Self {
        Self { step }
    }

    pub fn nested() -> Self {
        Self { step: Self::NESTED_STEP }
    }

    /// `∂f/∂q_l` at `q`.
    pub fn partial(&self, f: impl Fn(&Point4) -> f64, q: &Point4, l: usize) -> f64 {
        let (mut p, mut m) = (*q, *q);
        p[l] += self.step;
        m[l] -= self.step;
        (f(&p) - f(&m)) / (2.0 * self.step)
    }

    pub fn gradient(&self, f: impl Fn(&Point4) -> f64, q: &Point4) -> [f64; 4] {
        std::array::from_fn(|l| self.partial(&f, q, l))
    }

    /// `∂v/∂q_l` for vector-valued `v`.
    pub fn partial_vec<const N: usize>(&self, f: impl Fn(&Point4) -> [f64; N], q: &Point4, l: usize) -> [f64; N] {
        let (mut p, mut m) = (*q, *q);
        p[l] += self.step;
        m[l] -= self.step;
        let (fp, fm) = (f(&p), f(&m));
        std::array::from_fn(|i| (fp[i] - fm[i]) / (2.0 * self.step))
    }

    /// `jac[l][i] = ∂v_i/∂q_l`.
    pub fn jacobian<const N: usize>(&self, f: impl Fn(&Point4) -> [f64; N], q: &Point4) -> [[f64; N]; 4] {
        std::array::from_fn(|l| self.partial_vec(&f, q, l))
    }
}

impl Default for Diff {
    fn default() -> Self {
        Self { step: Self::DEFAULT_STEP }
    }
}

type Eval<T> = Arc<dyn Fn(&Point4) -> T + Send + Sync>;

#[derive(Clone)]
pub struct ScalarField4 {
    eval: Eval<f64>,
    pub label: String,
}

impl ScalarField4 {
    pub fn new(label: impl Into<String>, f: impl Fn(&Point4) -> f64 + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f), label: label.into() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| c)
    }

    /// The coordinate function `q_i`.
    pub fn coordinate(i: usize) -> Self {
        Self::new(format!("q{i}"), move |q| q[i])
    }

    pub fn at(&self, q: &Point4) -> f64 {
        (self.eval)(q)
    }

    /// `df` by central differences.
    pub fn differential(&self, d: Diff) -> OneForm4 {
        let f = self.clone();
        OneForm4::new(move |q| d.gradient(|p| f.at(p), q))
    }
}

impl std::fmt::Debug for ScalarField4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ScalarField4({})", self.label)
    }
}

/// 1-form given by its four coefficients `α_i`.
#[derive(Clone)]
pub struct OneForm4(Eval<[f64; 4]>);

impl OneForm4 {
    pub fn new(f: impl Fn(&Point4) -> [f64; 4] + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: [f64; 4]) -> Self {
        Self::new(move |_| c)
    }

    pub fn at(&self, q: &Point4) -> [f64; 4] {
        (self.0)(q)
    }

    /// `α(X)` at `q`.
    pub fn pair(&self, x: &VectorField4, q: &Point4) -> f64 {
        dot(&self.at(q), &x.at(q))
    }
}

/// Vector field given by its four components `X^i`.
#[derive(Clone)]
pub struct VectorField4(Eval<[f64; 4]>);

impl VectorField4 {
    pub fn new(f: impl Fn(&Point4) -> [f64; 4] + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn zero() -> Self {
        Self::new(|_| [0.0; 4])
    }

    pub fn at(&self, q: &Point4) -> [f64; 4] {
        (self.0)(q)
    }

    /// Directional derivative `X(f)` at `q`.
    pub fn derivative_of(&self, f: &ScalarField4, q: &Point4, d: Diff) -> f64 {
        dot(&self.at(q), &d.gradient(|p| f.at(p), q))
    }
}

/// Bivector `Σ_{i<j} π^{ij} ∂_i ∧ ∂_j`, coefficients in [`PAIRS`] order.
#[derive(Clone)]
pub struct Bivector4(Eval<[f64; 6]>);

impl Bivector4 {
    pub fn new(f: impl Fn(&Point4) -> [f64; 6] + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: [f64; 6]) -> Self {
        Self::new(move |_| c)
    }

    pub fn coefficients(&self, q: &Point4) -> [f64; 6] {
        (self.0)(q)
    }

    /// Full antisymmetric matrix `π^{ij}`.
    pub fn matrix(&self, q: &Point4) -> [[f64; 4]; 4] {
        to_matrix(&self.coefficients(q))
    }

    /// `π(α, β) = Σ π^{ij} α_i β_j`.
    pub fn pair(&self, q: &Point4, alpha: &[f64; 4], beta: &[f64; 4]) -> f64 {
        let m = self.matrix(q);
        (0..4).map(|i| (0..4).map(|j| m[i][j] * alpha[i] * beta[j]).sum::<f64>()).sum()
    }

    /// Coefficient `π^{ij}` for any ordered pair.
    pub fn entry(&self, q: &Point4, i: usize, j: usize) -> f64 {
        self.matrix(q)[i][j]
    }
}

pub fn to_matrix(c: &[f64; 6]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        m[i][j] = c[k];
        m[j][i] = -c[k];
    }
    m
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Volume form `ρ dq₀∧dq₁∧dq₂∧dq₃`.
#[derive(Clone, Debug)]
pub struct VolumeForm4 {
    pub density: ScalarField4,
}

impl VolumeForm4 {
    pub fn euclidean() -> Self {
        Self { density: ScalarField4::constant(1.0) }
    }

    pub fn with_density(density: ScalarField4) -> Self {
        Self { density }
    }

    /// `a·Ω` for a positive function `a`.
    pub fn scaled(&self, a: &ScalarField4) -> Self {
        let (rho, a) = (self.density.clone(), a.clone());
        let label = format!("{}·{}", a.label, rho.label);
        Self { density: ScalarField4::new(label, move |q| a.at(q) * rho.at(q)) }
    }

    /// `div_Ω V = (1/ρ) Σ_i ∂_i(ρ Vⁱ)`.
    pub fn divergence(&self, v: impl Fn(&Point4) -> [f64; 4], q: &Point4, d: Diff) -> f64 {
        let rho = &self.density;
        let flux = |p: &Point4| {
            let r = rho.at(p);
            v(p).map(|c| r * c)
        };
        let s: f64 = (0..4).map(|i| d.partial_vec(flux, q, i)[i]).sum();
        s / rho.at(q)
    }
}

/// `(#α)^i = Σ_j α_j π^{ji}`, so that `β(#α) = π(α, β)`.
pub fn sharp_at(pi: &Bivector4, q: &Point4, alpha: &[f64; 4]) -> [f64; 4] {
    let m = pi.matrix(q);
    std::array::from_fn(|i| (0..4).map(|j| alpha[j] * m[j][i]).sum())
}

pub fn sharp(pi: &Bivector4, alpha: &OneForm4) -> VectorField4 {
    let (pi, alpha) = (pi.clone(), alpha.clone());
    VectorField4::new(move |q| sharp_at(&pi, q, &alpha.at(q)))
}

/// `X_h = #(dh)`.
pub fn hamiltonian_vf(pi: &Bivector4, h: &ScalarField4, d: Diff) -> VectorField4 {
    sharp(pi, &h.differential(d))
}

/// `{f, g} = π(df, dg)` at `q`.
pub fn poisson_bracket(pi: &Bivector4, f: &ScalarField4, g: &ScalarField4, q: &Point4, d: Diff) -> f64 {
    let df = d.gradient(|p| f.at(p), q);
    let dg = d.gradient(|p| g.at(p), q);
    pi.pair(q, &df, &dg)
}

/// `{f, g}` as a scalar field.
pub fn bracket_field(pi: &Bivector4, f: &ScalarField4, g: &ScalarField4, d: Diff) -> ScalarField4 {
    let (pi, f, g) = (pi.clone(), f.clone(), g.clone());
    let label = format!("{{{},{}}}", f.label, g.label);
    ScalarField4::new(label, move |q| poisson_bracket(&pi, &f, &g, q, d))
}

/// Components `[π,π]^{ijk}` in [`TRIPLES`] order:
/// `2 Σ_l (π^{li} ∂_l π^{jk} + π^{lj} ∂_l π^{ki} + π^{lk} ∂_l π^{ij})`.
/// Zero exactly when the bracket satisfies the Jacobi identity.
pub fn schouten_square(pi: &Bivector4, q: &Point4, d: Diff) -> [f64; 4] {
    let m = pi.matrix(q);
    // dm[l] = ∂_l π
    let dm: [[[f64; 4]; 4]; 4] = std::array::from_fn(|l| {
        let c = d.partial_vec(|p| pi.coefficients(p), q, l);
        to_matrix(&c)
    });
    TRIPLES.map(|(i, j, k)| {
        2.0 * (0..4).map(|l| m[l][i] * dm[l][j][k] + m[l][j] * dm[l][k][i] + m[l][k] * dm[l][i][j]).sum::<f64>()
    })
}

/// `{qᵢ,{qⱼ,q_k}} + cyclic` built from nested brackets of coordinate
/// functions; equals `-[π,π]^{ijk}/2`.
pub fn jacobiator(pi: &Bivector4, (i, j, k): (usize, usize, usize), q: &Point4, d: Diff) -> f64 {
    let c = ScalarField4::coordinate;
    let inner = |a: usize, b: usize| bracket_field(pi, &c(a), &c(b), d);
    let outer = Diff::nested();
    poisson_bracket(pi, &c(i), &inner(j, k), q, outer)
        + poisson_bracket(pi, &c(j), &inner(k, i), q, outer)
        + poisson_bracket(pi, &c(k), &inner(i, j), q, outer)
}

/// Linear normal form on `(θ, x₁, x₂, x₃)`:
/// `k·(x₁ ∂₂∧∂₃ + x₂ ∂₁∧∂₃ − x₃ ∂₁∧∂₂)`. Checks that `k` does not vanish
/// at seeded sample points.
pub fn normal_form_bivector(k: &ScalarField4) -> Result<Bivector4, PoissonError> {
    let mut sampler = Sampler::new(crate::sampling::DEFAULT_SEED);
    for q in sampler.chart_points(200, 0.0) {
        if k.at(&q) == 0.0 || !k.at(&q).is_finite() {
            return Err(PoissonError::VanishingK(q));
        }
    }
    Ok(normal_form_unchecked(k, [1.0, 1.0, 1.0]))
}

/// Normal form with each coefficient's sign given by `signs` for
/// `(π^{23}, π^{13}, π^{12})`. The true normal form is `[1, 1, 1]`; any other
/// choice is a fault fixture.
pub fn normal_form_unchecked(k: &ScalarField4, signs: [f64; 3]) -> Bivector4 {
    let k = k.clone();
    Bivector4::new(move |q| {
        let kv = k.at(q);
        let [s23, s13, s12] = signs;
        // (01, 02, 03, 12, 13, 23)
        [0.0, 0.0, 0.0, -s12 * kv * q[3], s13 * kv * q[2], s23 * kv * q[1]]
    })
}

/// Modular vector field `Yⁱ = div_Ω(#(dqⁱ))`.
pub fn modular_vf(pi: &Bivector4, omega: &VolumeForm4, d: Diff) -> VectorField4 {
    let (pi, omega) = (pi.clone(), omega.clone());
    VectorField4::new(move |q| {
        std::array::from_fn(|i| {
            let mut e = [0.0; 4];
            e[i] = 1.0;
            omega.divergence(|p| sharp_at(&pi, p, &e), q, d)
        })
    })
}

/// Lie derivative of a 1-form: `(L_V β)_j = Σ_i (Vⁱ ∂_i β_j + β_i ∂_j Vⁱ)`.
pub fn lie_derivative_form(v: &VectorField4, beta: &OneForm4, q: &Point4, d: Diff) -> [f64; 4] {
    let vq = v.at(q);
    let bq = beta.at(q);
    let dbeta = d.jacobian(|p| beta.at(p), q);
    let dv = d.jacobian(|p| v.at(p), q);
    std::array::from_fn(|j| (0..4).map(|i| vq[i] * dbeta[i][j] + bq[i] * dv[j][i]).sum())
}

/// `[α, β]_π = L_{#α} β − L_{#β} α − d(π(α, β))` at `q`.
pub fn one_form_bracket(pi: &Bivector4, alpha: &OneForm4, beta: &OneForm4, q: &Point4, d: Diff) -> [f64; 4] {
    let xa = sharp(pi, alpha);
    let xb = sharp(pi, beta);
    let la = lie_derivative_form(&xa, beta, q, d);
    let lb = lie_derivative_form(&xb, alpha, q, d);
    let pairing = d.gradient(|p| pi.pair(p, &alpha.at(p), &beta.at(p)), q);
    std::array::from_fn(|j| la[j] - lb[j] - pairing[j])
}

/// Vector-field bracket `[X, Y]ⁱ = Σ_j (Xʲ ∂_j Yⁱ − Yʲ ∂_j Xⁱ)` at `q`.
pub fn lie_bracket(x: &VectorField4, y: &VectorField4, q: &Point4, d: Diff) -> [f64; 4] {
    let (xq, yq) = (x.at(q), y.at(q));
    let dx = d.jacobian(|p| x.at(p), q);
    let dy = d.jacobian(|p| y.at(p), q);
    std::array::from_fn(|i| (0..4).map(|j| xq[j] * dy[j][i] - yq[j] * dx[j][i]).sum())
}

/// `(L_X π)^{ij} = Σ_l (X^l ∂_l π^{ij} − π^{lj} ∂_l Xⁱ − π^{il} ∂_l Xʲ)` in
/// [`PAIRS`] order.
pub fn lie_derivative_bivector(pi: &Bivector4, x: &VectorField4, q: &Point4, d: Diff) -> [f64; 6] {
    let xq = x.at(q);
    let m = pi.matrix(q);
    let dpi: [[[f64; 4]; 4]; 4] = std::array::from_fn(|l| to_matrix(&d.partial_vec(|p| pi.coefficients(p), q, l)));
    let dx = d.jacobian(|p| x.at(p), q);
    PAIRS.map(|(i, j)| (0..4).map(|l| xq[l] * dpi[l][i][j] - m[l][j] * dx[l][i] - m[i][l] * dx[l][j]).sum())
}

/// Casimir gradient of the normal form in `x`-space: `(x₁, −x₂, −x₃)`, the
/// gradient of `(x₁² − x₂² − x₃²)/2`. Its level sets (at fixed θ) are the
/// symplectic leaves.
fn leaf_normal(q: &Point4) -> [f64; 3] {
    [q[1], -q[2], -q[3]]
}

/// Prefactor `1/(k(q)·|x|)` of the leaf symplectic form.
pub fn leaf_prefactor(k: &ScalarField4, q: &Point4) -> Result<f64, PoissonError> {
    let r = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    if r == 0.0 {
        return Err(PoissonError::OnSingularSet(*q));
    }
    Ok(1.0 / (k.at(q) * r))
}

/// Leaf symplectic form `ω(u, v) = ω_Area(u, v) / (k(q)·|x|)`. `ω_Area` is
/// the Euclidean area form of the leaf, oriented by the unit normal along
/// the Casimir gradient; components of `u`, `v` off the leaf drop out.
pub fn leaf_form(k: &ScalarField4, q: &Point4, u: &[f64; 4], v: &[f64; 4]) -> Result<f64, PoissonError> {
    let pref = leaf_prefactor(k, q)?;
    let n = leaf_normal(q);
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let (a, b) = ([u[1], u[2], u[3]], [v[1], v[2], v[3]]);
    let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let area = (n[0] * cross[0] + n[1] * cross[1] + n[2] * cross[2]) / len;
    Ok(pref * area)
}

/// `i(θ, x₁, x₂, x₃) = (θ + π, −x₁, −x₂, x₃)`.
pub fn involution(q: &Point4) -> Point4 {
    [q[0] + PI, -q[1], -q[2], q[3]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvolutionReport {
    /// Max over samples and components of `|(di)·π_q·(di)ᵀ − π_{i(q)}|`.
    pub max_residual: f64,
    /// Max of `|k(i(q)) − k(q)|`.
    pub k_asymmetry: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Checks that the involution pushes the normal form at `q` to the normal
/// form at `i(q)` on the given points.
pub fn involution_check(k: &ScalarField4, points: &[Point4], tol: f64) -> InvolutionReport {
    let pi = normal_form_unchecked(k, [1.0, 1.0, 1.0]);
    // di = diag(1, -1, -1, 1)
    let di = [1.0, -1.0, -1.0, 1.0];
    let mut max_residual: f64 = 0.0;
    let mut k_asymmetry: f64 = 0.0;
    for q in points {
        let iq = involution(q);
        let (m, mi) = (pi.matrix(q), pi.matrix(&iq));
        for i in 0..4 {
            for j in 0..4 {
                max_residual = max_residual.max((di[i] * m[i][j] * di[j] - mi[i][j]).abs());
            }
        }
        k_asymmetry = k_asymmetry.max((k.at(&iq) - k.at(q)).abs());
    }
    InvolutionReport { max_residual, k_asymmetry, samples: points.len(), passed: max_residual <= tol }
}

/// Value and differential rank of the fibration's local model at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalModel {
    pub re: f64,
    pub im: f64,
    pub singular_values: [f64; 2],
    pub rank: usize,
}

/// Singular-value cutoff for the local model's differential rank.
pub const RANK_CUTOFF: f64 = 1e-8;

/// `(y₁, y₂, y₃, t) ↦ y₁² − (y₂² + y₃²)/2 + i·t`, with the rank of its 2×4
/// Jacobian taken from central differences and an SVD.
pub fn fibration_local_model(y: &Point4) -> LocalModel {
    let f = |p: &Point4| [p[0] * p[0] - (p[1] * p[1] + p[2] * p[2]) / 2.0, p[3]];
    let [re, im] = f(y);
    let jac = Diff::default().jacobian(f, y);
    let m = SMatrix::<f64, 2, 4>::from_fn(|r, c| jac[c][r]);
    let sv = m.svd(false, false).singular_values;
    let mut s = [sv[0], sv[1]];
    s.sort_by(|a, b| b.total_cmp(a));
    let rank = s.iter().filter(|&&x| x > RANK_CUTOFF).count();
    LocalModel { re, im, singular_values: s, rank }
}

/// Named `k` fixtures for the normal form.
pub fn k_fixtures() -> Vec<ScalarField4> {
    vec![
        ScalarField4::constant(1.0),
        ScalarField4::new("2+sin(θ)", |q| 2.0 + q[0].sin()),
        ScalarField4::new("exp(x₃)", |q| q[3].exp()),
        ScalarField4::new("2+sin(2θ)·x₃", |q| 2.0 + (2.0 * q[0]).sin() * q[3]),
    ]
}

/// `∂₀∧∂₁ + q₀ ∂₂∧∂₃`, which violates the Jacobi identity.
pub fn broken_bivector() -> Bivector4 {
    Bivector4::new(|q| [1.0, 0.0, 0.0, 0.0, 0.0, q[0]])
}
