//! Sampling, covariance construction, and likelihood evaluation for complex
//! circular-symmetric Gaussian processes.
//!
//! The exact log-likelihood of an AR(p; ℂ) path is computed in O(N·p) by the
//! prediction-error decomposition: the first p observations carry the exact
//! stationary complex normal density (Cholesky of Σ⁽ᵖ⁾), and the remaining
//! ones are one-step AR conditionals with unit innovation variance. The
//! determinant identity |Σ⁽ᴺ⁾| = |Σ⁽ᵖ⁾| = 1/φ(ξ) for N ≥ p ties this to the
//! geometry module's eigenfunction.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{CoreError, Result};
use crate::linalg::CMat;
use crate::rng::{standard_complex_normal, RngSeed};
use crate::spectral::{
    coeffs_from_root_slice, fisher_g, psd_from_roots, ArRoots, Psd, SpectralGrid,
    WirtIndex,
};
use crate::wirtinger::{fd_wirtinger, fd_wirtinger2, FD_STEP_FIRST, FD_STEP_SECOND};

/// Additive constant of the Whittle approximation, fixed so that the
/// white-noise Whittle value matches the exact likelihood identically.
pub const WHITTLE_CONSTANT: f64 = -2.982_606_952_258_745_5; // -ln(pi) - ln(2 pi)

/// A finite observed path of a complex-valued process.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSample {
    values: Vec<Complex64>,
}

impl ComplexSample {
    /// Validates length ≥ 1 and finiteness of every entry.
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(CoreError::InvalidParameter("sample must be non-empty".into()));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::InvalidParameter("sample entries must be finite".into()));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// A Hermitian Toeplitz covariance determined by autocovariances γ₀..γ_{N−1}.
#[derive(Debug, Clone)]
pub struct ToeplitzCovariance {
    autocovs: Vec<Complex64>,
    order: usize,
}

impl ToeplitzCovariance {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn autocovs(&self) -> &[Complex64] {
        &self.autocovs
    }

    /// Entry (s, t) = γ_{s−t}, with γ_{−h} = conj(γ_h). Indices are 0-based.
    pub fn entry(&self, s: usize, t: usize) -> Complex64 {
        if s >= t {
            self.autocovs[s - t]
        } else {
            self.autocovs[t - s].conj()
        }
    }

    pub(crate) fn dense(&self) -> CMat {
        CMat::from_fn(self.order, |s, t| self.entry(s, t))
    }

    /// log det Σ via dense Cholesky.
    pub fn log_det(&self) -> Result<f64> {
        Ok(self.dense().cholesky()?.logdet_from_cholesky())
    }
}

/// Builds an order-n Toeplitz covariance, verifying positive definiteness
/// by a successful Cholesky factorization.
pub fn build_toeplitz(autocovs: &[Complex64], n: usize) -> Result<ToeplitzCovariance> {
    if autocovs.len() < n || n == 0 {
        return Err(CoreError::InvalidParameter(format!(
            "need at least {n} autocovariances, got {}",
            autocovs.len()
        )));
    }
    let gamma0 = autocovs[0];
    if !(gamma0.re > 0.0) || gamma0.im.abs() > 1e-12 * gamma0.re.abs() {
        return Err(CoreError::InvalidParameter(
            "gamma_0 must be real and positive".into(),
        ));
    }
    let cov = ToeplitzCovariance {
        autocovs: autocovs[..n].to_vec(),
        order: n,
    };
    cov.dense().cholesky()?;
    Ok(cov)
}

/// Draws n i.i.d. scalars from the standard complex normal, so each entry
/// has independent N(0, 1/2) real and imaginary parts and E[z z̄] = 1.
pub fn sample_standard_complex_normal(n: usize, seed: RngSeed) -> Result<ComplexSample> {
    if n == 0 {
        return Err(CoreError::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = seed.rng();
    ComplexSample::new((0..n).map(|_| standard_complex_normal(&mut rng)).collect())
}

/// Stationary covariance Σ⁽ᵖ⁾ of the AR(p; ℂ) model with the given roots,
/// obtained from the discrete Lyapunov equation of the companion form.
/// Stays well-defined at root collisions, unlike residue formulas.
pub(crate) fn stationary_cov(roots: &[Complex64]) -> Result<CMat> {
    let p = roots.len();
    let coeffs = coeffs_from_root_slice(roots);
    let mut f = CMat::zeros(p);
    for j in 0..p {
        f[(0, j)] = -coeffs[j];
    }
    for i in 1..p {
        f[(i, i - 1)] = Complex64::ONE;
    }
    // (I - conj(F) ⊗ F) vec(P) = vec(e1 e1^T), column-stacked.
    let m = p * p;
    let mut a = CMat::identity(m);
    for pj in 0..p {
        for pi in 0..p {
            for qj in 0..p {
                for qi in 0..p {
                    // vec index of P entry (r, c) is c*p + r.
                    let row = pj * p + pi;
                    let col = qj * p + qi;
                    a[(row, col)] -= f[(pj, qj)].conj() * f[(pi, qi)];
                }
            }
        }
    }
    let mut b = vec![Complex64::ZERO; m];
    b[0] = Complex64::ONE;
    let vec_p = a.lu_solve(&b)?;
    let state_cov = CMat::from_fn(p, |i, j| vec_p[j * p + i]);
    // The state is (z_t, ..., z_{t-p+1}); Σ⁽ᵖ⁾ with entries γ_{s−t} is its
    // transpose.
    Ok(CMat::from_fn(p, |i, j| state_cov[(j, i)]))
}

/// Simulates an AR(p; ℂ) path of length n: the first p entries come from
/// the exact stationary complex normal (no burn-in), the rest follow the
/// recursion z_t = −Σ aᵢ z_{t−i} + ε_t with standard complex normal ε.
pub fn sample_ar_path(roots: &ArRoots, n: usize, seed: RngSeed) -> Result<ComplexSample> {
    let p = roots.order();
    if n < p {
        return Err(CoreError::SampleTooShort { n, p });
    }
    let chol = stationary_cov(roots.roots())?.cholesky()?;
    let coeffs = coeffs_from_root_slice(roots.roots());
    let mut rng = seed.rng();
    let mut z = Vec::with_capacity(n);
    let w: Vec<Complex64> = (0..p).map(|_| standard_complex_normal(&mut rng)).collect();
    // Stationary start z_{1..p} = L w. The Cholesky factor of the transpose
    // ordering is applied to the reversed state and reversed back.
    let mut head = vec![Complex64::ZERO; p];
    for i in 0..p {
        for j in 0..=i {
            head[i] += chol[(i, j)] * w[j];
        }
    }
    z.extend(head);
    for t in p..n {
        let mut next = standard_complex_normal(&mut rng);
        for (i, &a) in coeffs.iter().enumerate() {
            next -= a * z[t - 1 - i];
        }
        z.push(next);
    }
    ComplexSample::new(z)
}

/// Exact Gaussian log-likelihood −N log π − log|Σ⁽ᴺ⁾| − z*Σ⁻¹z of an AR
/// path, evaluated in O(N·p) by the prediction-error decomposition.
pub fn exact_log_likelihood(roots: &ArRoots, sample: &ComplexSample) -> Result<f64> {
    ar_log_likelihood(roots.roots(), sample)
}

/// Slice-based likelihood used by optimizers and samplers; requires
/// |ξⁱ| < 1 but tolerates root collisions.
pub(crate) fn ar_log_likelihood(roots: &[Complex64], sample: &ComplexSample) -> Result<f64> {
    let p = roots.len();
    let n = sample.len();
    if n < p {
        return Err(CoreError::SampleTooShort { n, p });
    }
    if roots.iter().any(|r| r.norm() >= 1.0) {
        return Err(CoreError::InvalidRoots("root outside the open unit disk".into()));
    }
    let z = sample.values();
    let chol = stationary_cov(roots)?.cholesky()?;
    let head = chol.solve_lower(&z[..p]);
    let quad: f64 = head.iter().map(|y| y.norm_sqr()).sum();
    let logdet = chol.logdet_from_cholesky();
    let coeffs = coeffs_from_root_slice(roots);
    let mut tail = 0.0;
    for t in p..n {
        let mut e = z[t];
        for (i, &a) in coeffs.iter().enumerate() {
            e += a * z[t - 1 - i];
        }
        tail += e.norm_sqr();
    }
    Ok(-(n as f64) * std::f64::consts::PI.ln() - logdet - quad - tail)
}

/// Whittle frequency-domain approximation of the Gaussian log-likelihood:
/// N·C₀ − Σₙ log S(2πn/N) − Σₙ I(2πn/N)/S(2πn/N) with the constant C₀
/// fixed by the white-noise matching convention ([`WHITTLE_CONSTANT`]).
pub fn whittle_log_likelihood(psd: &Psd, sample: &ComplexSample) -> Result<f64> {
    let (omegas, intensities) = periodogram_raw(sample);
    let mut acc = sample.len() as f64 * WHITTLE_CONSTANT;
    for (&w, &i_w) in omegas.iter().zip(&intensities) {
        let s = psd.value(w);
        if !(s > 0.0) {
            return Err(CoreError::NonpositiveSpectrum { omega: w });
        }
        acc -= s.ln() + i_w / s;
    }
    Ok(acc)
}

/// Periodogram I(2πn/N) = |z̃ₙ|²/(2π) with z̃ₙ = N^{−1/2} Σ_s e^{−2πisn/N} z_s,
/// returned on the Fourier grid sorted into [−π, π).
pub fn periodogram(sample: &ComplexSample) -> SpectralGrid {
    let (omegas, values) = periodogram_raw(sample);
    let mut idx: Vec<usize> = (0..omegas.len()).collect();
    idx.sort_by(|&a, &b| omegas[a].partial_cmp(&omegas[b]).unwrap());
    let omegas_sorted: Vec<f64> = idx.iter().map(|&i| omegas[i]).collect();
    let values_sorted: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
    SpectralGrid::from_parts(omegas_sorted, values_sorted).expect("periodogram grid")
}

/// Periodogram in DFT order, frequencies mapped into [−π, π).
fn periodogram_raw(sample: &ComplexSample) -> (Vec<f64>, Vec<f64>) {
    let n = sample.len();
    let mut buf = sample.values().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / (2.0 * std::f64::consts::PI * n as f64);
    let values: Vec<f64> = buf.iter().map(|x| x.norm_sqr() * scale).collect();
    let omegas: Vec<f64> = (0..n)
        .map(|k| {
            let w = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            if w >= std::f64::consts::PI {
                w - 2.0 * std::f64::consts::PI
            } else {
                w
            }
        })
        .collect();
    (omegas, values)
}

/// Monte Carlo mean and standard error of a complex quantity.
#[derive(Debug, Clone, Copy)]
pub struct ComplexMeanSe {
    pub mean: Complex64,
    pub se_re: f64,
    pub se_im: f64,
}

impl ComplexMeanSe {
    /// Deviation from `target` measured in standard errors, taken
    /// componentwise and maximized. Deviations below 1e-12 count as exact
    /// agreement so that identically-zero components do not divide by a
    /// zero standard error.
    pub fn z_score(&self, target: Complex64) -> f64 {
        let component = |dev: f64, se: f64| {
            if dev.abs() <= 1e-12 {
                0.0
            } else if se > 0.0 {
                dev.abs() / se
            } else {
                f64::INFINITY
            }
        };
        component(self.mean.re - target.re, self.se_re)
            .max(component(self.mean.im - target.im, self.se_im))
    }
}

/// Monte Carlo estimates of the per-sample score moments of the exact
/// likelihood, with their quadrature targets.
#[derive(Debug, Clone)]
pub struct ScoreMomentReport {
    pub order: usize,
    pub n: usize,
    pub trials: usize,
    /// (1/N) E[∂_α l], indexed by the flat Wirtinger order; target 0.
    pub score: Vec<ComplexMeanSe>,
    /// (1/N) E[∂_α ∂_β l]; target −g_{αβ}.
    pub second_derivative: Vec<Vec<ComplexMeanSe>>,
    /// (1/N) E[(∂_α l)(∂_β l)]; target +g_{αβ}.
    pub score_product: Vec<Vec<ComplexMeanSe>>,
    /// Quadrature Fisher components g_{αβ} on the flat index order.
    pub metric: Vec<Vec<Complex64>>,
}

/// Running mean/variance accumulator for a complex Monte Carlo quantity.
#[derive(Debug, Clone, Default)]
pub(crate) struct MomentAccumulator {
    sum: Complex64,
    sum_sq_re: f64,
    sum_sq_im: f64,
}

impl MomentAccumulator {
    fn new() -> Self {
        Self::default()
    }

    pub(crate) fn push(&mut self, v: Complex64) {
        self.sum += v;
        self.sum_sq_re += v.re * v.re;
        self.sum_sq_im += v.im * v.im;
    }

    pub(crate) fn finish(&self, trials: usize) -> ComplexMeanSe {
        let t = trials as f64;
        let mean = self.sum / t;
        let var_re = (self.sum_sq_re / t - mean.re * mean.re).max(0.0);
        let var_im = (self.sum_sq_im / t - mean.im * mean.im).max(0.0);
        ComplexMeanSe {
            mean,
            se_re: (var_re / t).sqrt(),
            se_im: (var_im / t).sqrt(),
        }
    }
}

/// Simulates `trials` AR paths of length n and estimates the expectations
/// of the likelihood score, second derivatives, and score products, using
/// central finite differences in the 2p real coordinates combined into
/// Wirtinger derivatives. Targets come from quadrature.
pub fn score_moment_estimates(
    roots: &ArRoots,
    n: usize,
    trials: usize,
    seed: RngSeed,
) -> Result<ScoreMomentReport> {
    let p = roots.order();
    if n < p {
        return Err(CoreError::SampleTooShort { n, p });
    }
    if trials < 100 {
        return Err(CoreError::InvalidParameter("need at least 100 trials".into()));
    }
    let dim = 2 * p;
    let indices: Vec<WirtIndex> = WirtIndex::all(p).collect();

    let mut score_acc: Vec<MomentAccumulator> = (0..dim).map(|_| MomentAccumulator::new()).collect();
    let mut second_acc: Vec<Vec<MomentAccumulator>> = (0..dim)
        .map(|_| (0..dim).map(|_| MomentAccumulator::new()).collect())
        .collect();
    let mut product_acc: Vec<Vec<MomentAccumulator>> = (0..dim)
        .map(|_| (0..dim).map(|_| MomentAccumulator::new()).collect())
        .collect();

    let point = roots.roots().to_vec();
    let inv_n = 1.0 / n as f64;
    for trial in 0..trials {
        let sample = sample_ar_path(roots, n, seed.substream(trial as u64))?;
        let loglik = move_loglik(&sample);
        let grad: Vec<Complex64> = indices
            .iter()
            .map(|&a| fd_wirtinger(&loglik, &point, a, FD_STEP_FIRST))
            .collect();
        for (ai, &a) in indices.iter().enumerate() {
            score_acc[ai].push(grad[ai] * inv_n);
            for (bi, &b) in indices.iter().enumerate() {
                product_acc[ai][bi].push(grad[ai] * grad[bi] * inv_n);
                if bi >= ai {
                    let d2 = fd_wirtinger2(&loglik, &point, a, b, FD_STEP_SECOND);
                    second_acc[ai][bi].push(d2 * inv_n);
                }
            }
        }
    }
    // Mirror the symmetric second-derivative entries.
    for ai in 0..dim {
        for bi in 0..ai {
            let upper = second_acc[bi][ai].clone();
            second_acc[ai][bi] = upper;
        }
    }

    let psd = psd_from_roots(roots);
    let metric = indices
        .iter()
        .map(|&a| {
            indices
                .iter()
                .map(|&b| fisher_g(&psd, a, b, crate::spectral::DEFAULT_GRID_SIZE).unwrap())
                .collect()
        })
        .collect();

    Ok(ScoreMomentReport {
        order: p,
        n,
        trials,
        score: score_acc.iter().map(|a| a.finish(trials)).collect(),
        second_derivative: second_acc
            .iter()
            .map(|row| row.iter().map(|a| a.finish(trials)).collect())
            .collect(),
        score_product: product_acc
            .iter()
            .map(|row| row.iter().map(|a| a.finish(trials)).collect())
            .collect(),
        metric,
    })
}

/// Likelihood of a fixed sample as a closure over root coordinates.
fn move_loglik(sample: &ComplexSample) -> impl Fn(&[Complex64]) -> Complex64 + '_ {
    move |roots: &[Complex64]| {
        Complex64::new(
            ar_log_likelihood(roots, sample).unwrap_or(f64::NEG_INFINITY),
            0.0,
        )
    }
}
