//! Kähler Fisher geometry of AR(p; ℂ): closed-form metric, Jeffreys and
//! κ-priors, Laplace–Beltrami operator, eigenfunction verification, the
//! parallel/orthogonal decomposition of the predictive-density correction,
//! and the leading-order risk-gap formulas.
//!
//! On the root parameterization the metric is Hermitian with
//! g_{ij̄} = 1/(1 − ξⁱ ξ̄ʲ), the Jeffreys prior is the determinant of the
//! p×p Hermitian block, φ(ξ) = ∏_{i,j}(1 − ξⁱ ξ̄ʲ) is a Laplacian
//! eigenfunction with eigenvalue −p(p+1), and the κ-prior family is
//! π⁽ᵏ⁾ = φ^{1−κ} π_J. None of these facts is trusted: each has a
//! quadrature or finite-difference check in the test and verify suites.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::gaussian::ComplexMeanSe;
use crate::linalg::CMat;
use crate::rng::{standard_complex_normal, RngSeed};
use crate::spectral::{
    psd_from_roots, uniform_omegas, ArRoots, Psd, SpectralGrid, WirtIndex, DEFAULT_GRID_SIZE,
};
use crate::wirtinger::{fd_wirtinger, fd_wirtinger2, FD_STEP_FIRST, FD_STEP_SECOND};

/// Geometry operations reject roots beyond this modulus; quadrature and
/// differencing degrade as the boundary is approached.
pub const BOUNDARY_GUARD: f64 = 0.995;

/// Condition-estimate threshold for `NearSingular`.
const NEAR_SINGULAR_COND: f64 = 1e12;

/// Closed-form Fisher component g_{ij̄} = 1/(1 − ξⁱ ξ̄ʲ).
pub fn metric_entry(xi_i: Complex64, xi_j: Complex64) -> Complex64 {
    (Complex64::ONE - xi_i * xi_j.conj()).finv()
}

fn guard(roots: &[Complex64]) -> Result<()> {
    for r in roots {
        if r.norm() > BOUNDARY_GUARD {
            return Err(CoreError::OutsideGuard {
                modulus: r.norm(),
                guard: BOUNDARY_GUARD,
            });
        }
    }
    Ok(())
}

/// The p×p Hermitian Fisher block g_{ij̄} and its inverse.
#[derive(Debug, Clone)]
pub struct HermitianMetric {
    g: CMat,
    g_inv: CMat,
    cond: f64,
}

impl HermitianMetric {
    pub fn dim(&self) -> usize {
        self.g.n
    }

    /// g_{ij̄}.
    pub fn g(&self, i: usize, j: usize) -> Complex64 {
        self.g[(i, j)]
    }

    /// Entry (i, j) of the matrix inverse of [g_{ij̄}]; the contraction
    /// convention is Σ_j g(i, j)·g_inv(j, k) = δ_{ik}, so the inverse-metric
    /// components are g^{j̄k} = g_inv(j, k) and g^{ij̄} = g_inv(j, i).
    pub fn g_inv(&self, i: usize, j: usize) -> Complex64 {
        self.g_inv[(i, j)]
    }

    /// One-norm condition estimate.
    pub fn condition(&self) -> f64 {
        self.cond
    }

    /// det [g_{ij̄}].
    pub fn det(&self) -> f64 {
        self.g.det().map(|d| d.re).unwrap_or(f64::NAN)
    }
}

/// Closed-form Fisher metric of AR(p; ℂ) at the given roots.
pub fn fisher_metric_ar(roots: &ArRoots) -> Result<HermitianMetric> {
    guard(roots.roots())?;
    metric_from_slice(roots.roots())
}

pub(crate) fn metric_from_slice(roots: &[Complex64]) -> Result<HermitianMetric> {
    let p = roots.len();
    let g = CMat::from_fn(p, |i, j| metric_entry(roots[i], roots[j]));
    let g_inv = g.inverse()?;
    let cond = g.one_norm() * g_inv.one_norm();
    if !cond.is_finite() || cond > NEAR_SINGULAR_COND {
        return Err(CoreError::NearSingular { cond });
    }
    Ok(HermitianMetric { g, g_inv, cond })
}

/// Jeffreys prior π_J(ξ) = ∏_{i<j} |ξⁱ−ξʲ|² / ∏_{i,j} (1 − ξⁱ ξ̄ʲ), the
/// determinant of the Hermitian Fisher block.
pub fn jeffreys_prior(roots: &ArRoots) -> f64 {
    jeffreys_from_slice(roots.roots())
}

fn jeffreys_from_slice(roots: &[Complex64]) -> f64 {
    let p = roots.len();
    let mut num = 1.0;
    for i in 0..p {
        for j in i + 1..p {
            num *= (roots[i] - roots[j]).norm_sqr();
        }
    }
    // The denominator pairs into real factors: the diagonal gives
    // (1 − |ξⁱ|²) and each i < j pair gives |1 − ξⁱ ξ̄ʲ|².
    let mut den = 1.0;
    for i in 0..p {
        den *= 1.0 - roots[i].norm_sqr();
        for j in i + 1..p {
            den *= (Complex64::ONE - roots[i] * roots[j].conj()).norm_sqr();
        }
    }
    num / den
}

/// The Laplacian eigenfunction φ(ξ) = ∏_{i,j} (1 − ξⁱ ξ̄ʲ), defined on all
/// of Θ̃₁ (distinctness not required); equals 1/|Σ⁽ᴺ⁾| for N ≥ p.
pub fn phi(roots: &[Complex64]) -> f64 {
    let p = roots.len();
    let mut prod = Complex64::ONE;
    for i in 0..p {
        for j in 0..p {
            prod *= Complex64::ONE - roots[i] * roots[j].conj();
        }
    }
    prod.re
}

/// Analytic gradient ∂_i log φ = −Σ_j g_{ij̄} ξ̄ʲ.
pub fn log_phi_gradient(roots: &[Complex64]) -> Vec<Complex64> {
    let p = roots.len();
    (0..p)
        .map(|i| {
            -(0..p)
                .map(|j| metric_entry(roots[i], roots[j]) * roots[j].conj())
                .sum::<Complex64>()
        })
        .collect()
}

/// Analytic gradient ∂_k log π_J = Σ_{j≠k} (ξᵏ−ξʲ)⁻¹ + Σ_j ξ̄ʲ g_{kj̄}.
pub fn log_jeffreys_gradient(roots: &[Complex64]) -> Vec<Complex64> {
    let p = roots.len();
    (0..p)
        .map(|k| {
            let mut acc = Complex64::ZERO;
            for j in 0..p {
                if j != k {
                    acc += (roots[k] - roots[j]).finv();
                }
                acc += roots[j].conj() * metric_entry(roots[k], roots[j]);
            }
            acc
        })
        .collect()
}

/// Prior selection: the Jeffreys prior or a κ-prior π⁽ᵏ⁾ = φ^{1−κ} π_J.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorSpec {
    Jeffreys,
    Kappa(f64),
}

impl PriorSpec {
    /// The κ exponent; Jeffreys is κ = 1.
    pub fn kappa(&self) -> f64 {
        match self {
            PriorSpec::Jeffreys => 1.0,
            PriorSpec::Kappa(k) => *k,
        }
    }

    /// Proper on Θ̃₁ iff κ < 1.
    pub fn is_proper(&self) -> bool {
        self.kappa() < 1.0
    }

    /// The Bayesian predictive density exists iff κ < 2 (and N ≥ p).
    pub fn predictive_exists(&self) -> bool {
        self.kappa() < 2.0
    }
}

/// κ-prior density φ^{1−κ} π_J at the given roots; equals the Jeffreys
/// prior exactly at κ = 1.
pub fn kappa_prior(roots: &ArRoots, kappa: f64) -> f64 {
    phi(roots.roots()).powf(1.0 - kappa) * jeffreys_prior(roots)
}

/// Density of the selected prior; zero outside the open polydisk.
pub fn prior_density(roots: &[Complex64], prior: &PriorSpec) -> f64 {
    log_prior_density(roots, prior).exp()
}

/// Log prior density; −∞ outside the support (any |ξⁱ| ≥ 1, or a root
/// collision within the Θ₁ tolerance).
pub fn log_prior_density(roots: &[Complex64], prior: &PriorSpec) -> f64 {
    if roots.iter().any(|r| r.norm() >= 1.0) {
        return f64::NEG_INFINITY;
    }
    let p = roots.len();
    for i in 0..p {
        for j in i + 1..p {
            if (roots[i] - roots[j]).norm() <= crate::spectral::ROOT_SEPARATION {
                return f64::NEG_INFINITY;
            }
        }
    }
    let mut log_pj = 0.0;
    for i in 0..p {
        log_pj -= (1.0 - roots[i].norm_sqr()).ln();
        for j in i + 1..p {
            log_pj += (roots[i] - roots[j]).norm_sqr().ln();
            log_pj -= (Complex64::ONE - roots[i] * roots[j].conj()).norm_sqr().ln();
        }
    }
    match prior {
        PriorSpec::Jeffreys => log_pj,
        PriorSpec::Kappa(k) => (1.0 - k) * phi(roots).ln() + log_pj,
    }
}

/// Result of integrating a prior over its parameter space.
#[derive(Debug, Clone)]
pub enum Normalizer {
    /// The integral converged; `std_err` is present for Monte Carlo (p = 2).
    Finite { value: f64, std_err: Option<f64> },
    /// The integral diverges; `truncated` holds (δ, ∫ over |ξⁱ| ≤ 1−δ)
    /// pairs documenting the growth as δ → 0.
    Divergent { truncated: Vec<(f64, f64)> },
}

/// Integral of the κ-prior over Θ̃₁ for p = 1 (radial quadrature; equals
/// π/(1−κ) for κ < 1) or p = 2 (Monte Carlo). For κ ≥ 1 the integral
/// diverges and the truncated-disk ladder is returned instead.
pub fn prior_normalizer(prior: &PriorSpec, p: usize, seed: RngSeed) -> Result<Normalizer> {
    let kappa = prior.kappa();
    match p {
        1 => {
            // pi^(kappa)(xi) = (1 - |xi|^2)^(-kappa) when p = 1.
            let radial = |kappa: f64, upper: f64| {
                tanh_sinh(
                    |r: f64| {
                        2.0 * std::f64::consts::PI * r * (1.0 - r * r).powf(-kappa)
                    },
                    0.0,
                    upper,
                )
            };
            if kappa < 1.0 {
                Ok(Normalizer::Finite {
                    value: radial(kappa, 1.0),
                    std_err: None,
                })
            } else {
                let truncated = [1e-2, 1e-3, 1e-4]
                    .iter()
                    .map(|&d| (d, radial(kappa, 1.0 - d)))
                    .collect();
                Ok(Normalizer::Divergent { truncated })
            }
        }
        2 => {
            let draws = 400_000usize;
            let mut rng = seed.rng();
            let mut sample_disk = |radius: f64| {
                let u: f64 = rand::Rng::random(&mut rng);
                let th: f64 = rand::Rng::random::<f64>(&mut rng) * 2.0 * std::f64::consts::PI;
                Complex64::from_polar(radius * u.sqrt(), th)
            };
            let mut run = |radius: f64| {
                let area = (std::f64::consts::PI * radius * radius).powi(2);
                let (mut sum, mut sum_sq) = (0.0, 0.0);
                for _ in 0..draws {
                    let roots = [sample_disk(radius), sample_disk(radius)];
                    let v = prior_density(&roots, prior);
                    sum += v;
                    sum_sq += v * v;
                }
                let mean = sum / draws as f64;
                let var = (sum_sq / draws as f64 - mean * mean).max(0.0);
                (area * mean, area * (var / draws as f64).sqrt())
            };
            if kappa < 1.0 {
                let (value, std_err) = run(1.0);
                Ok(Normalizer::Finite {
                    value,
                    std_err: Some(std_err),
                })
            } else {
                let truncated = [1e-2, 1e-3, 1e-4]
                    .iter()
                    .map(|&d| (d, run(1.0 - d).0))
                    .collect();
                Ok(Normalizer::Divergent { truncated })
            }
        }
        _ => Err(CoreError::InvalidParameter(
            "prior_normalizer supports p = 1 and p = 2".into(),
        )),
    }
}

/// Tanh-sinh (double exponential) quadrature on [a, b]; handles integrable
/// endpoint singularities.
fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let t_max = 4.0;
    let node = |t: f64| {
        let s = (std::f64::consts::FRAC_PI_2 * t.sinh()).tanh();
        let x = center + half * s;
        let w = half * std::f64::consts::FRAC_PI_2 * t.cosh()
            / (std::f64::consts::FRAC_PI_2 * t.sinh()).cosh().powi(2);
        (x, w)
    };
    let eval = |t: f64| -> f64 {
        let (x, w) = node(t);
        if x > a && x < b && w.is_finite() {
            let v = f(x);
            if v.is_finite() {
                return v * w;
            }
        }
        0.0
    };
    // Level 0: every integer node on the truncated line.
    let mut h = 1.0;
    let mut total = eval(0.0);
    let mut k = 1;
    while k as f64 <= t_max {
        total += eval(k as f64) + eval(-(k as f64));
        k += 1;
    }
    total *= h;
    let mut prev = f64::INFINITY;
    for _level in 0..12 {
        h *= 0.5;
        // Add the new odd-multiples-of-h nodes.
        let mut add = 0.0;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            add += eval(t) + eval(-t);
            k += 2;
        }
        total = total * 0.5 + add * h;
        if (total - prev).abs() <= 1e-13 * (1.0 + total.abs()) {
            break;
        }
        prev = total;
    }
    total
}

/// A real-valued scalar field on Θ₁, optionally with an analytic
/// holomorphic Wirtinger gradient (∂_i values; ∂_ī follows by conjugation
/// for real fields).
pub struct ScalarField {
    eval: Box<dyn Fn(&[Complex64]) -> f64 + Send + Sync>,
    grad: Option<Box<dyn Fn(&[Complex64]) -> Vec<Complex64> + Send + Sync>>,
}

impl ScalarField {
    pub fn new(eval: impl Fn(&[Complex64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Box::new(eval),
            grad: None,
        }
    }

    pub fn with_gradient(
        eval: impl Fn(&[Complex64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[Complex64]) -> Vec<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Box::new(eval),
            grad: Some(Box::new(grad)),
        }
    }

    /// φ as a field, with its analytic gradient.
    pub fn phi_field() -> Self {
        Self::phi_power_field(1.0)
    }

    /// φ^a as a field, with analytic gradient a φ^a ∂ log φ.
    pub fn phi_power_field(a: f64) -> Self {
        Self::with_gradient(
            move |roots| phi(roots).powf(a),
            move |roots| {
                let v = phi(roots).powf(a);
                log_phi_gradient(roots)
                    .into_iter()
                    .map(|d| d * a * v)
                    .collect()
            },
        )
    }

    /// The Jeffreys prior as a field, with its analytic gradient.
    pub fn jeffreys_field() -> Self {
        Self::with_gradient(
            |roots| jeffreys_from_slice(roots),
            |roots| {
                let v = jeffreys_from_slice(roots);
                log_jeffreys_gradient(roots)
                    .into_iter()
                    .map(|d| d * v)
                    .collect()
            },
        )
    }

    pub fn value(&self, roots: &[Complex64]) -> f64 {
        (self.eval)(roots)
    }

    pub fn has_gradient(&self) -> bool {
        self.grad.is_some()
    }
}

/// The covector (∂_i f, ∂_ī f) of a real scalar field at a point.
#[derive(Debug, Clone)]
pub struct WirtingerGradient {
    pub xi: Vec<Complex64>,
    pub xi_bar: Vec<Complex64>,
}

/// Wirtinger gradient of a field: analytic when available, otherwise
/// central finite differences in the 2p real coordinates.
pub fn wirtinger_gradient(field: &ScalarField, roots: &ArRoots) -> WirtingerGradient {
    let point = roots.roots();
    let xi: Vec<Complex64> = match &field.grad {
        Some(g) => g(point),
        None => {
            let f = |z: &[Complex64]| Complex64::new((field.eval)(z), 0.0);
            (0..point.len())
                .map(|i| fd_wirtinger(&f, point, WirtIndex::Xi(i), FD_STEP_FIRST))
                .collect()
        }
    };
    let xi_bar = xi.iter().map(|d| d.conj()).collect();
    WirtingerGradient { xi, xi_bar }
}

/// Mixed Hessian H_{ij} = ∂_i ∂_j̄ f. Differentiates the analytic gradient
/// once when available; otherwise uses nested central stencils.
fn mixed_hessian(field: &ScalarField, point: &[Complex64]) -> Vec<Vec<Complex64>> {
    let p = point.len();
    match &field.grad {
        Some(g) => {
            let h = FD_STEP_FIRST;
            let mut out = vec![vec![Complex64::ZERO; p]; p];
            for j in 0..p {
                let shift = |dre: f64, dim: f64| {
                    let mut q = point.to_vec();
                    q[j] += Complex64::new(dre, dim);
                    g(&q)
                };
                let gx_p = shift(h, 0.0);
                let gx_m = shift(-h, 0.0);
                let gy_p = shift(0.0, h);
                let gy_m = shift(0.0, -h);
                for i in 0..p {
                    let dx = (gx_p[i] - gx_m[i]) / (2.0 * h);
                    let dy = (gy_p[i] - gy_m[i]) / (2.0 * h);
                    // ∂_j̄ = ½(∂x + i ∂y) applied to ∂_i f.
                    out[i][j] = 0.5 * (dx + Complex64::I * dy);
                }
            }
            out
        }
        None => {
            let f = |z: &[Complex64]| Complex64::new((field.eval)(z), 0.0);
            (0..p)
                .map(|i| {
                    (0..p)
                        .map(|j| {
                            fd_wirtinger2(
                                &f,
                                point,
                                WirtIndex::Xi(i),
                                WirtIndex::XiBar(j),
                                FD_STEP_SECOND,
                            )
                        })
                        .collect()
                })
                .collect()
        }
    }
}

/// Laplace–Beltrami operator Δf = 2 g^{ij̄} ∂_i ∂_j̄ f at the given roots,
/// contracted against the closed-form inverse metric.
pub fn laplacian_apply(field: &ScalarField, roots: &ArRoots) -> Result<f64> {
    guard(roots.roots())?;
    let metric = metric_from_slice(roots.roots())?;
    let hess = mixed_hessian(field, roots.roots());
    let p = roots.order();
    let mut acc = Complex64::ZERO;
    for i in 0..p {
        for j in 0..p {
            // g^{ij̄} = g_inv(j, i).
            acc += metric.g_inv(j, i) * hess[i][j];
        }
    }
    Ok(2.0 * acc.re)
}

/// Draws `count` random Θ₁ points with |ξⁱ| ≤ max_modulus and pairwise
/// separation at least `min_sep`.
pub fn random_theta1_points(
    p: usize,
    count: usize,
    max_modulus: f64,
    min_sep: f64,
    seed: RngSeed,
) -> Vec<ArRoots> {
    let mut rng = seed.rng();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let candidate: Vec<Complex64> = (0..p)
            .map(|_| {
                let u: f64 = rand::Rng::random(&mut rng);
                let th: f64 = rand::Rng::random::<f64>(&mut rng) * 2.0 * std::f64::consts::PI;
                Complex64::from_polar(max_modulus * u.sqrt(), th)
            })
            .collect();
        let mut ok = true;
        for i in 0..p {
            for j in i + 1..p {
                ok &= (candidate[i] - candidate[j]).norm() > min_sep;
            }
        }
        if ok {
            out.push(ArRoots::new(candidate).expect("sampled roots are valid"));
        }
    }
    out
}

/// Max over random interior points of |Δφᵉ + p(p+1)φᵉ| / φᵉ with e = 1;
/// the tamperable exponent exists so verification has a negative control.
pub fn eigenfunction_residual(
    p: usize,
    points: usize,
    seed: RngSeed,
    exponent: f64,
) -> Result<f64> {
    if p == 0 || p > 3 {
        return Err(CoreError::InvalidParameter(
            "eigenfunction check supports 1 <= p <= 3".into(),
        ));
    }
    let field = ScalarField::phi_power_field(exponent);
    let k = (p * (p + 1)) as f64;
    let mut worst = 0.0f64;
    for roots in random_theta1_points(p, points, 0.9, 0.05, seed) {
        let value = field.value(roots.roots());
        let lap = laplacian_apply(&field, &roots)?;
        worst = worst.max((lap + k * value).abs() / value);
    }
    Ok(worst)
}

/// Max relative residual of Δφ = −p(p+1)φ over random interior points.
pub fn verify_eigenfunction(p: usize, points: usize, seed: RngSeed) -> Result<f64> {
    eigenfunction_residual(p, points, seed, 1.0)
}

/// Flat-indexed 2p×2p inverse metric with the vanishing holomorphic blocks
/// made explicit; used for Einstein sums over all Wirtinger indices.
pub(crate) struct FullInverseMetric {
    p: usize,
    g_inv: CMat,
}

impl FullInverseMetric {
    pub fn new(metric: &HermitianMetric) -> Self {
        Self {
            p: metric.dim(),
            g_inv: metric.g_inv.clone(),
        }
    }

    /// g^{αβ} on Wirtinger indices.
    pub fn entry(&self, a: WirtIndex, b: WirtIndex) -> Complex64 {
        debug_assert!(self.p > 0);
        match (a, b) {
            (WirtIndex::Xi(i), WirtIndex::XiBar(j)) => self.g_inv[(j, i)],
            (WirtIndex::XiBar(i), WirtIndex::Xi(j)) => self.g_inv[(i, j)],
            _ => Complex64::ZERO,
        }
    }
}

/// ∂_α log(π/π_J) for a κ-prior: (1−κ) ∂_α log φ; zero for Jeffreys.
fn prior_ratio_gradient(roots: &[Complex64], prior: &PriorSpec, alpha: WirtIndex) -> Complex64 {
    let factor = 1.0 - prior.kappa();
    if factor == 0.0 {
        return Complex64::ZERO;
    }
    let grad = log_phi_gradient(roots);
    factor
        * match alpha {
            WirtIndex::Xi(i) => grad[i],
            WirtIndex::XiBar(i) => grad[i].conj(),
        }
}

/// Contracted skewness T_α = T_{αβγ} g^{βγ} for all 2p indices, by a single
/// quadrature pass.
fn t_contracted(psd: &Psd, guu: &FullInverseMetric, m: usize) -> Result<Vec<Complex64>> {
    let p = psd.order()?;
    let indices: Vec<WirtIndex> = WirtIndex::all(p).collect();
    let omegas = uniform_omegas(m);
    let mut acc = vec![Complex64::ZERO; 2 * p];
    for &w in &omegas {
        let d: Vec<Complex64> = indices
            .iter()
            .map(|&a| psd.log_deriv(a, w).unwrap())
            .collect();
        // Inner contraction Σ_{βγ} g^{βγ} (∂_β log S)(∂_γ log S); only the
        // mixed blocks of g^{βγ} contribute.
        let mut inner = Complex64::ZERO;
        for i in 0..p {
            for j in 0..p {
                let gij = guu.entry(WirtIndex::Xi(i), WirtIndex::XiBar(j));
                inner += gij * d[i] * d[p + j];
                let gji = guu.entry(WirtIndex::XiBar(i), WirtIndex::Xi(j));
                inner += gji * d[p + i] * d[j];
            }
        }
        for (k, &dk) in d.iter().enumerate() {
            acc[k] += dk * inner;
        }
    }
    // T_{αβγ} = 2 M_{α,β,γ}, hence the factor 2 on the grid mean.
    Ok(acc.into_iter().map(|v| 2.0 * v / m as f64).collect())
}

/// Parallel part G⁽ᴺ⁾_π(ω|θ) = g^{αβ}(∂_α log(π/π_J) + ½ T_α) ∂_β S on the
/// uniform m-point grid. For the κ = −1 prior this vanishes identically.
pub fn parallel_part_g(roots: &ArRoots, prior: &PriorSpec, m: usize) -> Result<SpectralGrid> {
    guard(roots.roots())?;
    let psd = psd_from_roots(roots);
    let metric = metric_from_slice(roots.roots())?;
    let guu = FullInverseMetric::new(&metric);
    let p = roots.order();
    let indices: Vec<WirtIndex> = WirtIndex::all(p).collect();
    let t_alpha = t_contracted(&psd, &guu, m)?;
    let coeff: Vec<Complex64> = indices
        .iter()
        .enumerate()
        .map(|(k, &a)| prior_ratio_gradient(roots.roots(), prior, a) + 0.5 * t_alpha[k])
        .collect();
    // Pre-contract c_β = Σ_α c_α g^{αβ}.
    let contracted: Vec<Complex64> = indices
        .iter()
        .map(|&b| {
            indices
                .iter()
                .enumerate()
                .map(|(k, &a)| coeff[k] * guu.entry(a, b))
                .sum()
        })
        .collect();
    let omegas = uniform_omegas(m);
    let values = omegas
        .iter()
        .map(|&w| {
            let s = psd.value(w);
            let mut acc = Complex64::ZERO;
            for (k, &b) in indices.iter().enumerate() {
                acc += contracted[k] * psd.log_deriv(b, w).unwrap() * s;
            }
            debug_assert!(acc.im.abs() < 1e-8 * (1.0 + acc.re.abs()));
            acc.re
        })
        .collect();
    SpectralGrid::from_parts(omegas, values)
}

/// Orthogonal part H⁽ᴺ⁾(ω|θ) = ½ g^{αβ}(∂_α ∂_β S − Γ⁽ᵐ⁾_{αβ}^γ ∂_γ S) on
/// the uniform m-point grid; prior-independent by construction.
pub fn orthogonal_part_h(roots: &ArRoots, m: usize) -> Result<SpectralGrid> {
    guard(roots.roots())?;
    let psd = psd_from_roots(roots);
    let metric = metric_from_slice(roots.roots())?;
    let guu = FullInverseMetric::new(&metric);
    let p = roots.order();
    let indices: Vec<WirtIndex> = WirtIndex::all(p).collect();
    let dim = 2 * p;
    let omegas = uniform_omegas(m);

    // Mixture-connection coefficients Γ^(m)_{αβ,δ} = M_{αβ,δ} for the mixed
    // (α, β) blocks that survive the g^{αβ} contraction, all δ.
    let mixed_pairs: Vec<(WirtIndex, WirtIndex)> = {
        let mut v = Vec::new();
        for i in 0..p {
            for j in 0..p {
                v.push((WirtIndex::Xi(i), WirtIndex::XiBar(j)));
                v.push((WirtIndex::XiBar(i), WirtIndex::Xi(j)));
            }
        }
        v
    };
    let mut gamma = vec![vec![Complex64::ZERO; dim]; mixed_pairs.len()];
    for &w in &omegas {
        let d1: Vec<Complex64> = indices
            .iter()
            .map(|&a| psd.log_deriv(a, w).unwrap())
            .collect();
        for (pi, &(a, b)) in mixed_pairs.iter().enumerate() {
            let r2 = psd.ratio_deriv2(a, b, w).unwrap();
            for (k, &dk) in d1.iter().enumerate() {
                gamma[pi][k] += r2 * dk;
            }
        }
    }
    for row in &mut gamma {
        for v in row.iter_mut() {
            *v /= m as f64;
        }
    }
    // Raise the last index: Γ_{αβ}^γ = Γ_{αβ,δ} g^{δγ}.
    let gamma_up: Vec<Vec<Complex64>> = gamma
        .iter()
        .map(|row| {
            indices
                .iter()
                .map(|&c| {
                    indices
                        .iter()
                        .enumerate()
                        .map(|(di, &d)| row[di] * guu.entry(d, c))
                        .sum()
                })
                .collect()
        })
        .collect();

    let values = omegas
        .iter()
        .map(|&w| {
            let s = psd.value(w);
            let d1: Vec<Complex64> = indices
                .iter()
                .map(|&a| psd.log_deriv(a, w).unwrap())
                .collect();
            let mut acc = Complex64::ZERO;
            for (pi, &(a, b)) in mixed_pairs.iter().enumerate() {
                let gab = guu.entry(a, b);
                if gab == Complex64::ZERO {
                    continue;
                }
                let second = psd.ratio_deriv2(a, b, w).unwrap() * s;
                let mut transport = Complex64::ZERO;
                for (k, &dk) in d1.iter().enumerate() {
                    transport += gamma_up[pi][k] * dk * s;
                }
                acc += gab * (second - transport);
            }
            debug_assert!(acc.im.abs() < 1e-8 * (1.0 + acc.re.abs()));
            0.5 * acc.re
        })
        .collect();
    SpectralGrid::from_parts(omegas, values)
}

/// Inner product ⟨N₁, N₂⟩_θ = (2π)⁻¹ ∫ (N₁/S)(N₂/S) dω of two grid
/// functions at θ.
pub fn inner_product(roots: &ArRoots, n1: &SpectralGrid, n2: &SpectralGrid) -> Result<f64> {
    if n1.len() != n2.len() {
        return Err(CoreError::InvalidParameter("grids must share a layout".into()));
    }
    let psd = psd_from_roots(roots);
    let mut acc = 0.0;
    for ((&w, &a), &b) in n1.omegas().iter().zip(n1.values()).zip(n2.values()) {
        let s = psd.value(w);
        acc += (a / s) * (b / s);
    }
    Ok(acc / n1.len() as f64)
}

/// N²-scaled leading risk gap versus the Jeffreys prior, evaluated in the
/// super-harmonic form −2 (π/π_J)^{−1/2} Δ (π/π_J)^{1/2}. For κ-priors the
/// ratio is φ^{1−κ}, so the field is φ^{(1−κ)/2}.
pub fn leading_risk_gap(prior: &PriorSpec, roots: &ArRoots) -> Result<f64> {
    let a = 0.5 * (1.0 - prior.kappa());
    if a == 0.0 {
        return Ok(0.0);
    }
    let field = ScalarField::phi_power_field(a);
    let value = field.value(roots.roots());
    let lap = laplacian_apply(&field, roots)?;
    Ok(-2.0 * lap / value)
}

/// The same gap in the closed form (1−κ)K + (1−κ²) g^{ij̄}(∂_i log φ)(∂_j̄ log φ)
/// with K = p(p+1).
pub fn leading_risk_gap_closed(prior: &PriorSpec, roots: &ArRoots) -> Result<f64> {
    guard(roots.roots())?;
    let kappa = prior.kappa();
    let p = roots.order();
    let k = (p * (p + 1)) as f64;
    let metric = metric_from_slice(roots.roots())?;
    let grad = log_phi_gradient(roots.roots());
    let mut quad = Complex64::ZERO;
    for i in 0..p {
        for j in 0..p {
            // g^{ij̄} = g_inv(j, i).
            quad += metric.g_inv(j, i) * grad[i] * grad[j].conj();
        }
    }
    Ok((1.0 - kappa) * k + (1.0 - kappa * kappa) * quad.re)
}

/// Pointwise limit of the normalized AR(1) risk difference:
/// Q⁽ᵏ⁾(ξ) = 2(1−κ) + (1−κ²) |ξ|²/(1−|ξ|²).
pub fn q_limit(xi: Complex64, kappa: f64) -> Result<f64> {
    let r2 = xi.norm_sqr();
    if r2 >= 1.0 {
        return Err(CoreError::InvalidParameter("|xi| must be below 1".into()));
    }
    Ok(2.0 * (1.0 - kappa) + (1.0 - kappa * kappa) * r2 / (1.0 - r2))
}

/// One verified moment identity of the Gaussian weight.
#[derive(Debug, Clone)]
pub struct HermiteRow {
    pub label: String,
    pub stat: ComplexMeanSe,
    pub target: Complex64,
}

impl HermiteRow {
    pub fn z_score(&self) -> f64 {
        self.stat.z_score(self.target)
    }
}

/// Monte Carlo verification of the tensorial Hermite moment identities.
#[derive(Debug, Clone)]
pub struct HermiteMomentReport {
    pub rows: Vec<HermiteRow>,
    pub trials: usize,
}

impl HermiteMomentReport {
    pub fn max_z_score(&self) -> f64 {
        self.rows.iter().map(HermiteRow::z_score).fold(0.0, f64::max)
    }
}

/// Samples the Gaussian weight e^{−½ g_{αβ} λ^α λ^β} (the complex normal
/// with E[λⁱ λ̄ʲ] = g^{ij̄}) and checks first through fourth moments against
/// 0, g^{αβ}, 0, and the three-pairing Wick sums.
pub fn hermite_moment_check(
    metric: &HermitianMetric,
    trials: usize,
    seed: RngSeed,
) -> Result<HermiteMomentReport> {
    let p = metric.dim();
    if p > 2 {
        return Err(CoreError::InvalidParameter(
            "hermite_moment_check supports p <= 2".into(),
        ));
    }
    if trials < 100 {
        return Err(CoreError::InvalidParameter("need at least 100 trials".into()));
    }
    // Sampling covariance C with C_{ij} = E[λ^i conj(λ^j)] = g^{ij̄} = g_inv(j, i).
    let c = CMat::from_fn(p, |i, j| metric.g_inv(j, i));
    let l = c.cholesky()?;
    let guu = FullInverseMetric::new(metric);
    let indices: Vec<WirtIndex> = WirtIndex::all(p).collect();
    let dim = 2 * p;

    let component = |lam: &[Complex64], a: WirtIndex| match a {
        WirtIndex::Xi(i) => lam[i],
        WirtIndex::XiBar(i) => lam[i].conj(),
    };

    use crate::gaussian::MomentAccumulator;
    let mut acc1: Vec<MomentAccumulator> = vec![Default::default(); dim];
    let mut acc2: Vec<Vec<MomentAccumulator>> = vec![vec![Default::default(); dim]; dim];
    let mut acc3: Vec<MomentAccumulator> = vec![Default::default(); dim * dim * dim];
    let mut acc4: Vec<MomentAccumulator> = vec![Default::default(); dim * dim * dim * dim];

    let mut rng = seed.rng();
    for _ in 0..trials {
        let w: Vec<Complex64> = (0..p).map(|_| standard_complex_normal(&mut rng)).collect();
        let mut lam = vec![Complex64::ZERO; p];
        for i in 0..p {
            for j in 0..=i {
                lam[i] += l[(i, j)] * w[j];
            }
        }
        let comp: Vec<Complex64> = indices.iter().map(|&a| component(&lam, a)).collect();
        for a in 0..dim {
            acc1[a].push(comp[a]);
            for b in 0..dim {
                acc2[a][b].push(comp[a] * comp[b]);
                for c3 in 0..dim {
                    acc3[(a * dim + b) * dim + c3].push(comp[a] * comp[b] * comp[c3]);
                    for d in 0..dim {
                        acc4[((a * dim + b) * dim + c3) * dim + d]
                            .push(comp[a] * comp[b] * comp[c3] * comp[d]);
                    }
                }
            }
        }
    }

    let name = |a: WirtIndex| match a {
        WirtIndex::Xi(i) => format!("{}", i + 1),
        WirtIndex::XiBar(i) => format!("{}b", i + 1),
    };
    let mut rows = Vec::new();
    for (a, &ia) in indices.iter().enumerate() {
        rows.push(HermiteRow {
            label: format!("E[l^{}]", name(ia)),
            stat: acc1[a].finish(trials),
            target: Complex64::ZERO,
        });
        for (b, &ib) in indices.iter().enumerate() {
            rows.push(HermiteRow {
                label: format!("E[l^{} l^{}]", name(ia), name(ib)),
                stat: acc2[a][b].finish(trials),
                target: guu.entry(ia, ib),
            });
            for (c3, &ic) in indices.iter().enumerate() {
                rows.push(HermiteRow {
                    label: format!("E[l^{} l^{} l^{}]", name(ia), name(ib), name(ic)),
                    stat: acc3[(a * dim + b) * dim + c3].finish(trials),
                    target: Complex64::ZERO,
                });
                for (d, &id) in indices.iter().enumerate() {
                    let wick = guu.entry(ia, ib) * guu.entry(ic, id)
                        + guu.entry(ia, ic) * guu.entry(ib, id)
                        + guu.entry(ia, id) * guu.entry(ib, ic);
                    rows.push(HermiteRow {
                        label: format!(
                            "E[l^{} l^{} l^{} l^{}]",
                            name(ia),
                            name(ib),
                            name(ic),
                            name(id)
                        ),
                        stat: acc4[((a * dim + b) * dim + c3) * dim + d].finish(trials),
                        target: wick,
                    });
                }
            }
        }
    }
    Ok(HermiteMomentReport { rows, trials })
}

/// Max over k of |g^{ij̄} ∂_k g_{ij̄} − ∂_k log π_J| at the given roots:
/// the Jacobi formula, with the metric derivative taken by central
/// differences and the right side from the analytic gradient.
pub fn jacobi_residual(roots: &ArRoots) -> Result<f64> {
    guard(roots.roots())?;
    let point = roots.roots().to_vec();
    let p = roots.order();
    let metric = metric_from_slice(&point)?;
    let expect = log_jeffreys_gradient(&point);
    let mut worst = 0.0f64;
    for k in 0..p {
        let mut lhs = Complex64::ZERO;
        for i in 0..p {
            for j in 0..p {
                let d = fd_wirtinger(
                    &|z: &[Complex64]| metric_entry(z[i], z[j]),
                    &point,
                    WirtIndex::Xi(k),
                    FD_STEP_FIRST,
                );
                // g^{ij̄} = g_inv(j, i).
                lhs += metric.g_inv(j, i) * d;
            }
        }
        worst = worst.max((lhs - expect[k]).norm());
    }
    Ok(worst)
}

/// Max over i of |T_i + 4 ∂_i log φ| with T_i contracted from quadrature
/// skewness tensors; zero residual is the α-parallel property of the
/// κ-prior family.
pub fn alpha_parallel_check(roots: &ArRoots) -> Result<f64> {
    guard(roots.roots())?;
    let p = roots.order();
    if p > 2 {
        return Err(CoreError::InvalidParameter(
            "alpha_parallel_check supports p <= 2".into(),
        ));
    }
    let psd = psd_from_roots(roots);
    let metric = metric_from_slice(roots.roots())?;
    let guu = FullInverseMetric::new(&metric);
    let t_alpha = t_contracted(&psd, &guu, DEFAULT_GRID_SIZE)?;
    let grad = log_phi_gradient(roots.roots());
    let mut worst = 0.0f64;
    for i in 0..p {
        worst = worst.max((t_alpha[i] + 4.0 * grad[i]).norm());
    }
    Ok(worst)
}
