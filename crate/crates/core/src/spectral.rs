//! Spectral densities of complex AR/ARMA models, autocovariances, KL
//! divergence between spectra, and the periodic quadrature behind the
//! geometric quantities g, T, Γ⁽ᵐ⁾.
//!
//! All integrals here are means of smooth 2π-periodic functions over a
//! uniform grid on [−π, π), which is spectrally accurate, so the default
//! grid of 4096 points resolves every quantity to near machine precision
//! for root moduli below the 0.995 boundary guard.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Default quadrature grid size (power of two).
pub const DEFAULT_GRID_SIZE: usize = 4096;

/// Distinct-roots tolerance that operationally defines membership in Θ₁.
pub const ROOT_SEPARATION: f64 = 1e-9;

/// Index into the Wirtinger coordinate set (ξ¹, …, ξᵖ, ξ̄¹, …, ξ̄ᵖ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WirtIndex {
    /// Derivative with respect to ξⁱ (0-based).
    Xi(usize),
    /// Derivative with respect to ξ̄ⁱ (0-based).
    XiBar(usize),
}

impl WirtIndex {
    /// The conjugate index (ξⁱ ↔ ξ̄ⁱ).
    pub fn conj(self) -> Self {
        match self {
            WirtIndex::Xi(i) => WirtIndex::XiBar(i),
            WirtIndex::XiBar(i) => WirtIndex::Xi(i),
        }
    }

    /// All 2p indices in the fixed order ξ¹..ξᵖ, ξ̄¹..ξ̄ᵖ.
    pub fn all(p: usize) -> impl Iterator<Item = WirtIndex> {
        (0..p)
            .map(WirtIndex::Xi)
            .chain((0..p).map(WirtIndex::XiBar))
    }

    /// Position of this index in the `all(p)` ordering.
    pub fn flat(self, p: usize) -> usize {
        match self {
            WirtIndex::Xi(i) => i,
            WirtIndex::XiBar(i) => p + i,
        }
    }
}

/// The point ξ ∈ Θ₁: distinct AR roots inside the open unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ArRoots {
    roots: Vec<Complex64>,
}

impl ArRoots {
    /// Validates stationarity (|ξⁱ| < 1), finiteness, and pairwise
    /// separation of at least [`ROOT_SEPARATION`].
    pub fn new(roots: Vec<Complex64>) -> Result<Self> {
        if roots.is_empty() {
            return Err(CoreError::InvalidRoots("need at least one root".into()));
        }
        for (i, r) in roots.iter().enumerate() {
            if !r.re.is_finite() || !r.im.is_finite() {
                return Err(CoreError::InvalidRoots(format!("root {i} is not finite")));
            }
            if r.norm() >= 1.0 {
                return Err(CoreError::InvalidRoots(format!(
                    "root {i} has modulus {} >= 1",
                    r.norm()
                )));
            }
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if (roots[i] - roots[j]).norm() <= ROOT_SEPARATION {
                    return Err(CoreError::InvalidRoots(format!(
                        "roots {i} and {j} coincide within {ROOT_SEPARATION:e}"
                    )));
                }
            }
        }
        Ok(Self { roots })
    }

    /// Single-root constructor for AR(1).
    pub fn single(root: Complex64) -> Result<Self> {
        Self::new(vec![root])
    }

    pub fn order(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Largest root modulus.
    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

/// Expands ∏ᵢ (1 − ξⁱ z⁻¹) into 1 + Σᵢ aᵢ z⁻ⁱ and returns (a₁, …, a_p).
pub fn roots_to_coeffs(roots: &ArRoots) -> Vec<Complex64> {
    coeffs_from_root_slice(roots.roots())
}

pub(crate) fn coeffs_from_root_slice(roots: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::ONE];
    for &xi in roots {
        let mut next = vec![Complex64::ZERO; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c * xi;
        }
        poly = next;
    }
    poly.remove(0);
    poly
}

/// Roots of the monic polynomial z^p + a₁ z^{p−1} + … + a_p by
/// Durand–Kerner iteration; inverse of [`roots_to_coeffs`].
pub fn coeffs_to_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let p = coeffs.len();
    if p == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| {
        let mut v = Complex64::ONE;
        for &c in coeffs {
            v = v * z + c;
        }
        v
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut w: Vec<Complex64> = (0..p).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..p {
            let mut denom = Complex64::ONE;
            for j in 0..p {
                if j != i {
                    denom *= w[i] - w[j];
                }
            }
            let step = eval(w[i]) / denom;
            w[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 {
            break;
        }
    }
    w
}

/// A complex ARMA(p, q) specification: coefficients a, b and innovation
/// variance σ², as in Z_t = −Σ aᵢ Z_{t−i} + ε_t + Σ bᵢ ε_{t−i}.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmaSpec {
    ar: Vec<Complex64>,
    ma: Vec<Complex64>,
    sigma2: f64,
}

impl ArmaSpec {
    /// Validates that σ² > 0, the AR roots are inside the unit disk, and the
    /// AR and MA polynomials share no root within tolerance.
    pub fn new(ar: Vec<Complex64>, ma: Vec<Complex64>, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "sigma2 must be positive and finite, got {sigma2}"
            )));
        }
        let ar_roots = coeffs_to_roots(&ar);
        for r in &ar_roots {
            if r.norm() >= 1.0 {
                return Err(CoreError::InvalidRoots(format!(
                    "AR root {r} lies outside the open unit disk"
                )));
            }
        }
        let ma_roots = coeffs_to_roots(&ma);
        for a in &ar_roots {
            for b in &ma_roots {
                if (a - b).norm() <= ROOT_SEPARATION {
                    return Err(CoreError::CommonRoot);
                }
            }
        }
        Ok(Self { ar, ma, sigma2 })
    }

    pub fn ar(&self) -> &[Complex64] {
        &self.ar
    }

    pub fn ma(&self) -> &[Complex64] {
        &self.ma
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

/// A power spectral density on [−π, π], either in AR root form (which
/// carries analytic Wirtinger derivatives of log S with respect to the
/// roots) or as an evaluation-only ARMA form.
#[derive(Debug, Clone)]
pub enum Psd {
    /// AR(p; ℂ) root form: S(ω) = 1 / (2π ∏ᵢ |1 − ξⁱ e^{−iω}|²).
    Ar(ArRoots),
    /// ARMA form: S(ω) = σ²/(2π) · |1 + Σ bᵢ e^{−iiω}|² / |1 + Σ aᵢ e^{−iiω}|².
    Arma(ArmaSpec),
}

/// Spectral density of the root-parameterized AR(p; ℂ) model with σ² = 1.
pub fn psd_from_roots(roots: &ArRoots) -> Psd {
    Psd::Ar(roots.clone())
}

/// Spectral density of a complex ARMA model; evaluation only.
pub fn psd_from_arma(spec: &ArmaSpec) -> Psd {
    Psd::Arma(spec.clone())
}

impl Psd {
    /// S(ω).
    pub fn value(&self, omega: f64) -> f64 {
        let e = Complex64::from_polar(1.0, -omega);
        match self {
            Psd::Ar(roots) => {
                let mut denom = 1.0;
                for &xi in roots.roots() {
                    denom *= (Complex64::ONE - xi * e).norm_sqr();
                }
                1.0 / (2.0 * std::f64::consts::PI * denom)
            }
            Psd::Arma(spec) => {
                let poly = |coeffs: &[Complex64]| {
                    let mut acc = Complex64::ONE;
                    let mut ek = Complex64::ONE;
                    for &c in coeffs {
                        ek *= e;
                        acc += c * ek;
                    }
                    acc
                };
                let num = poly(spec.ma()).norm_sqr();
                let den = poly(spec.ar()).norm_sqr();
                spec.sigma2() / (2.0 * std::f64::consts::PI) * num / den
            }
        }
    }

    /// Whether analytic root derivatives of log S are available.
    pub fn has_root_derivatives(&self) -> bool {
        matches!(self, Psd::Ar(_))
    }

    /// Number of complex parameters (AR form only).
    pub fn order(&self) -> Result<usize> {
        match self {
            Psd::Ar(roots) => Ok(roots.order()),
            Psd::Arma(_) => Err(CoreError::MissingDerivatives),
        }
    }

    /// ∂_α log S(ω) in closed form: ∂_i log S = e^{−iω} / (1 − ξⁱ e^{−iω}),
    /// and ∂_ī log S is its complex conjugate.
    pub fn log_deriv(&self, alpha: WirtIndex, omega: f64) -> Result<Complex64> {
        let Psd::Ar(roots) = self else {
            return Err(CoreError::MissingDerivatives);
        };
        let e = Complex64::from_polar(1.0, -omega);
        Ok(match alpha {
            WirtIndex::Xi(i) => e / (Complex64::ONE - roots.roots()[i] * e),
            WirtIndex::XiBar(i) => (e / (Complex64::ONE - roots.roots()[i] * e)).conj(),
        })
    }

    /// ∂_α ∂_β log S(ω). Within each holomorphic block the second
    /// derivative is diagonal and equals (∂_i log S)²; mixed blocks vanish.
    pub fn log_deriv2(&self, alpha: WirtIndex, beta: WirtIndex, omega: f64) -> Result<Complex64> {
        if !self.has_root_derivatives() {
            return Err(CoreError::MissingDerivatives);
        }
        Ok(match (alpha, beta) {
            (WirtIndex::Xi(i), WirtIndex::Xi(j)) if i == j => {
                let d = self.log_deriv(alpha, omega)?;
                d * d
            }
            (WirtIndex::XiBar(i), WirtIndex::XiBar(j)) if i == j => {
                let d = self.log_deriv(alpha, omega)?;
                d * d
            }
            _ => Complex64::ZERO,
        })
    }

    /// S⁻¹ ∂_α S = ∂_α log S.
    pub fn ratio_deriv1(&self, alpha: WirtIndex, omega: f64) -> Result<Complex64> {
        self.log_deriv(alpha, omega)
    }

    /// S⁻¹ ∂_α ∂_β S = ∂_α ∂_β log S + (∂_α log S)(∂_β log S).
    pub fn ratio_deriv2(&self, alpha: WirtIndex, beta: WirtIndex, omega: f64) -> Result<Complex64> {
        Ok(self.log_deriv2(alpha, beta, omega)?
            + self.log_deriv(alpha, omega)? * self.log_deriv(beta, omega)?)
    }
}

/// A spectral density held as values on a grid over [−π, π).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    omegas: Vec<f64>,
    values: Vec<f64>,
}

impl SpectralGrid {
    /// Pairs frequencies with values; lengths must match.
    pub fn from_parts(omegas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if omegas.len() != values.len() || omegas.is_empty() {
            return Err(CoreError::InvalidParameter(
                "grid omegas and values must be non-empty and of equal length".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::InvalidParameter("grid values must be finite".into()));
        }
        Ok(Self { omegas, values })
    }

    /// Samples a spectral density on the uniform m-point grid.
    pub fn sample(psd: &Psd, m: usize) -> Self {
        let omegas = uniform_omegas(m);
        let values = omegas.iter().map(|&w| psd.value(w)).collect();
        Self { omegas, values }
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid mean of the values, i.e. (2π)⁻¹ ∫ f dω under the periodic
    /// trapezoid rule.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// The uniform grid ω_k = −π + 2πk/m, k = 0..m−1.
pub fn uniform_omegas(m: usize) -> Vec<f64> {
    let step = 2.0 * std::f64::consts::PI / m as f64;
    (0..m).map(|k| -std::f64::consts::PI + k as f64 * step).collect()
}

/// (2π)⁻¹ ∫ f(ω) dω by the periodic trapezoid rule on m uniform points.
pub fn periodic_mean(m: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let mut acc = 0.0;
    for k in 0..m {
        acc += f(-std::f64::consts::PI + k as f64 * step);
    }
    acc / m as f64
}

/// Complex-valued version of [`periodic_mean`].
pub fn periodic_mean_c(m: usize, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let mut acc = Complex64::ZERO;
    for k in 0..m {
        acc += f(-std::f64::consts::PI + k as f64 * step);
    }
    acc / m as f64
}

/// Autocovariances γ₀..γ_max_lag of a spectral density by Herglotz
/// inversion, γ_h = ∫ e^{ihω} S(ω) dω, on the default quadrature grid.
pub fn autocovariances(psd: &Psd, max_lag: usize) -> Vec<Complex64> {
    autocovariances_with_grid(psd, max_lag, DEFAULT_GRID_SIZE)
}

/// [`autocovariances`] with an explicit grid size.
pub fn autocovariances_with_grid(psd: &Psd, max_lag: usize, m: usize) -> Vec<Complex64> {
    let omegas = uniform_omegas(m);
    let values: Vec<f64> = omegas.iter().map(|&w| psd.value(w)).collect();
    (0..=max_lag)
        .map(|h| {
            let mut acc = Complex64::ZERO;
            for (&w, &s) in omegas.iter().zip(&values) {
                acc += Complex64::from_polar(s, h as f64 * w);
            }
            acc * (2.0 * std::f64::consts::PI / m as f64)
        })
        .collect()
}

/// KL divergence (2π)⁻¹ ∫ (−log(S₁/S₂) − 1 + S₁/S₂) dω between spectra.
pub fn kl_divergence(psd1: &Psd, psd2: &Psd, m: usize) -> Result<f64> {
    let omegas = uniform_omegas(m);
    let mut acc = 0.0;
    for &w in &omegas {
        let s1 = psd1.value(w);
        let s2 = psd2.value(w);
        if !(s1 > 0.0) {
            return Err(CoreError::NonpositiveSpectrum { omega: w });
        }
        if !(s2 > 0.0) {
            return Err(CoreError::NonpositiveSpectrum { omega: w });
        }
        let r = s1 / s2;
        acc += -r.ln() - 1.0 + r;
    }
    finish_kl(acc / m as f64)
}

/// KL divergence between two spectra given as values on the same grid.
pub fn kl_divergence_grids(s1: &[f64], s2: &[f64]) -> Result<f64> {
    debug_assert_eq!(s1.len(), s2.len());
    let mut acc = 0.0;
    for (&a, &b) in s1.iter().zip(s2) {
        if !(a > 0.0) || !(b > 0.0) {
            return Err(CoreError::NonpositiveSpectrum { omega: f64::NAN });
        }
        let r = a / b;
        acc += -r.ln() - 1.0 + r;
    }
    finish_kl(acc / s1.len() as f64)
}

fn finish_kl(value: f64) -> Result<f64> {
    if value < -1e-12 {
        return Err(CoreError::NegativeKl { value });
    }
    Ok(value.max(0.0))
}

/// General spectral moment M: the (2π)⁻¹ ∫ dω of a product of factors
/// S⁻¹ (D_group S), one factor per index group. Groups of size one and two
/// are supported, which covers g, T, and Γ⁽ᵐ⁾.
pub fn m_quantity(psd: &Psd, groups: &[&[WirtIndex]], m: usize) -> Result<Complex64> {
    if !psd.has_root_derivatives() {
        return Err(CoreError::MissingDerivatives);
    }
    for g in groups {
        if g.is_empty() || g.len() > 2 {
            return Err(CoreError::InvalidParameter(
                "index groups of size 1 or 2 only".into(),
            ));
        }
    }
    Ok(periodic_mean_c(m, |w| {
        let mut prod = Complex64::ONE;
        for g in groups {
            prod *= match g.len() {
                1 => psd.ratio_deriv1(g[0], w).unwrap(),
                _ => psd.ratio_deriv2(g[0], g[1], w).unwrap(),
            };
        }
        prod
    }))
}

/// Fisher metric component g_{αβ} = M_{α,β} by quadrature.
pub fn fisher_g(psd: &Psd, a: WirtIndex, b: WirtIndex, m: usize) -> Result<Complex64> {
    m_quantity(psd, &[&[a], &[b]], m)
}

/// Skewness tensor T_{αβγ} = 2 M_{α,β,γ} by quadrature.
pub fn skewness_t(psd: &Psd, a: WirtIndex, b: WirtIndex, c: WirtIndex, m: usize) -> Result<Complex64> {
    Ok(2.0 * m_quantity(psd, &[&[a], &[b], &[c]], m)?)
}

/// Mixture-connection coefficient Γ⁽ᵐ⁾_{αβ,γ} = M_{αβ,γ} by quadrature.
pub fn mixture_gamma(
    psd: &Psd,
    a: WirtIndex,
    b: WirtIndex,
    c: WirtIndex,
    m: usize,
) -> Result<Complex64> {
    m_quantity(psd, &[&[a, b], &[c]], m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ar1(re: f64, im: f64) -> ArRoots {
        ArRoots::single(c(re, im)).unwrap()
    }

    #[test]
    fn root_validation() {
        assert!(ArRoots::single(c(0.5, 0.0)).is_ok());
        assert!(ArRoots::single(c(1.0, 0.0)).is_err());
        assert!(ArRoots::new(vec![c(0.5, 0.0), c(0.5, 0.0)]).is_err());
        assert!(ArRoots::new(vec![]).is_err());
        assert!(ArRoots::new(vec![c(0.3, 0.0), c(0.4, 0.1)]).is_ok());
    }

    #[test]
    fn white_noise_psd_is_flat() {
        let psd = psd_from_roots(&ar1(0.0, 0.0));
        for w in [-PI, -1.0, 0.0, 2.5] {
            assert!((psd.value(w) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn ar1_psd_at_zero_frequency() {
        // |1 - 0.5|^2 = 0.25, so S(0) = 1/(2π·0.25) = 2/π.
        let psd = psd_from_roots(&ar1(0.5, 0.0));
        assert!((psd.value(0.0) - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn complex_root_gives_uneven_spectrum() {
        let psd = psd_from_roots(&ar1(0.0, 0.5));
        let w0 = PI / 2.0;
        assert!((psd.value(w0) - psd.value(-w0)).abs() > 1e-3);
    }

    #[test]
    fn arma_matches_root_form() {
        // a = (-0.5) is the coefficient form of the single root 0.5.
        let arma = ArmaSpec::new(vec![c(-0.5, 0.0)], vec![], 1.0).unwrap();
        let pa = psd_from_arma(&arma);
        let pr = psd_from_roots(&ar1(0.5, 0.0));
        for &w in &uniform_omegas(64) {
            assert!((pa.value(w) - pr.value(w)).abs() < 1e-12);
        }
    }

    #[test]
    fn ma1_peak_trough_ratio() {
        let arma = ArmaSpec::new(vec![], vec![c(0.5, 0.0)], 1.0).unwrap();
        let psd = psd_from_arma(&arma);
        assert!((psd.value(0.0) / psd.value(PI) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn arma_rejects_common_roots() {
        // Both polynomials have the root 0.5.
        let err = ArmaSpec::new(vec![c(-0.5, 0.0)], vec![c(-0.5, 0.0)], 1.0);
        assert!(matches!(err, Err(CoreError::CommonRoot)));
    }

    #[test]
    fn white_arma_is_flat() {
        let arma = ArmaSpec::new(vec![], vec![], 1.0).unwrap();
        let psd = psd_from_arma(&arma);
        assert!((psd.value(1.3) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn vieta_expansion_cases() {
        let a = roots_to_coeffs(&ar1(0.5, 0.0));
        assert!((a[0] - c(-0.5, 0.0)).norm() < 1e-15);

        let a = roots_to_coeffs(&ArRoots::new(vec![c(0.5, 0.0), c(-0.5, 0.0)]).unwrap());
        assert!(a[0].norm() < 1e-15);
        assert!((a[1] - c(-0.25, 0.0)).norm() < 1e-15);

        let a = roots_to_coeffs(&ArRoots::new(vec![c(0.3, 0.0), c(0.0, 0.4)]).unwrap());
        assert!((a[0] - c(-0.3, -0.4)).norm() < 1e-14);
        assert!((a[1] - c(0.0, 0.12)).norm() < 1e-14);
    }

    #[test]
    fn autocovariance_closed_forms() {
        // White noise: gamma_0 = 1, rest 0.
        let g = autocovariances(&psd_from_roots(&ar1(0.0, 0.0)), 3);
        assert!((g[0] - Complex64::ONE).norm() < 1e-10);
        for h in 1..=3 {
            assert!(g[h].norm() < 1e-10);
        }

        // AR(1) xi = 0.5: gamma_h = xi^h / (1 - |xi|^2).
        let g = autocovariances(&psd_from_roots(&ar1(0.5, 0.0)), 2);
        assert!((g[0] - c(4.0 / 3.0, 0.0)).norm() < 1e-10);
        assert!((g[1] - c(2.0 / 3.0, 0.0)).norm() < 1e-10);

        // Complex root: gamma_1 / gamma_0 = xi.
        let xi = Complex64::from_polar(0.5, PI / 3.0);
        let g = autocovariances(&psd_from_roots(&ArRoots::single(xi).unwrap()), 1);
        assert!((g[1] / g[0] - xi).norm() < 1e-10);
    }

    #[test]
    fn kl_identity_and_closed_form() {
        let p05 = psd_from_roots(&ar1(0.5, 0.0));
        let p0 = psd_from_roots(&ar1(0.0, 0.0));
        assert!(kl_divergence(&p05, &p05, 2048).unwrap() < 1e-12);
        // KL(S_xi1, S_xi2) = |xi1-xi2|^2/(1-|xi1|^2) for AR(1).
        let kl = kl_divergence(&p05, &p0, DEFAULT_GRID_SIZE).unwrap();
        assert!((kl - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn kl_is_asymmetric() {
        let p8 = psd_from_roots(&ar1(0.8, 0.0));
        let p0 = psd_from_roots(&ar1(0.0, 0.0));
        let a = kl_divergence(&p8, &p0, DEFAULT_GRID_SIZE).unwrap();
        let b = kl_divergence(&p0, &p8, DEFAULT_GRID_SIZE).unwrap();
        assert!((a - b).abs() > 1e-2);
        assert!(a >= 0.0 && b >= 0.0);
    }

    #[test]
    fn szego_mean_of_log_is_zero() {
        // (2π)^{-1} ∫ log(2π S) dω = 0 for the AR root form with σ² = 1.
        for roots in [
            ArRoots::single(c(0.5, 0.2)).unwrap(),
            ArRoots::new(vec![c(0.7, 0.0), c(-0.3, 0.55)]).unwrap(),
        ] {
            let psd = psd_from_roots(&roots);
            let mean = periodic_mean(DEFAULT_GRID_SIZE, |w| {
                (2.0 * PI * psd.value(w)).ln()
            });
            assert!(mean.abs() < 1e-12, "szego mean {mean}");
        }
    }

    #[test]
    fn fisher_metric_quadrature_matches_closed_form() {
        let psd = psd_from_roots(&ar1(0.5, 0.0));
        let g = fisher_g(&psd, WirtIndex::Xi(0), WirtIndex::XiBar(0), DEFAULT_GRID_SIZE).unwrap();
        assert!((g - c(4.0 / 3.0, 0.0)).norm() < 1e-10);
        let g_hol = fisher_g(&psd, WirtIndex::Xi(0), WirtIndex::Xi(0), DEFAULT_GRID_SIZE).unwrap();
        assert!(g_hol.norm() < 1e-10);

        let psd0 = psd_from_roots(&ar1(0.0, 0.0));
        let g0 = fisher_g(&psd0, WirtIndex::Xi(0), WirtIndex::XiBar(0), DEFAULT_GRID_SIZE).unwrap();
        assert!((g0 - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn hermitian_conditions_hold_for_p_up_to_3() {
        let sets = [
            vec![c(0.6, 0.1)],
            vec![c(0.5, 0.3), c(-0.2, -0.6)],
            vec![c(0.5, 0.3), c(-0.2, -0.6), c(0.1, 0.7)],
        ];
        for roots in sets {
            let p = roots.len();
            let psd = psd_from_roots(&ArRoots::new(roots).unwrap());
            for i in 0..p {
                for j in 0..p {
                    let hh =
                        fisher_g(&psd, WirtIndex::Xi(i), WirtIndex::Xi(j), DEFAULT_GRID_SIZE)
                            .unwrap();
                    let aa = fisher_g(
                        &psd,
                        WirtIndex::XiBar(i),
                        WirtIndex::XiBar(j),
                        DEFAULT_GRID_SIZE,
                    )
                    .unwrap();
                    assert!(hh.norm() < 1e-10, "g_ij should vanish, got {hh}");
                    assert!(aa.norm() < 1e-10, "g_i̅j̅ should vanish, got {aa}");
                    let ha =
                        fisher_g(&psd, WirtIndex::Xi(i), WirtIndex::XiBar(j), DEFAULT_GRID_SIZE)
                            .unwrap();
                    let ah =
                        fisher_g(&psd, WirtIndex::Xi(j), WirtIndex::XiBar(i), DEFAULT_GRID_SIZE)
                            .unwrap();
                    assert!((ha - ah.conj()).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn quadrature_converges_for_moduli_up_to_09() {
        let psd = psd_from_roots(&ar1(0.9, 0.0));
        let p0 = psd_from_roots(&ar1(0.0, 0.0));
        let kl_a = kl_divergence(&psd, &p0, 1 << 11).unwrap();
        let kl_b = kl_divergence(&psd, &p0, 1 << 12).unwrap();
        assert!((kl_a - kl_b).abs() / kl_b.abs() < 1e-10);

        let ga = fisher_g(&psd, WirtIndex::Xi(0), WirtIndex::XiBar(0), 1 << 11).unwrap();
        let gb = fisher_g(&psd, WirtIndex::Xi(0), WirtIndex::XiBar(0), 1 << 12).unwrap();
        assert!((ga - gb).norm() / gb.norm() < 1e-10);
    }

    #[test]
    fn kl_second_order_expansion_matches_metric() {
        // KL(S_xi, S_(xi+d)) = ½ g_{αβ} dξ^α dξ^β + O(|d|³); perturbing one
        // root by d makes the quadratic form g_{11̄} |d|² (the Einstein sum
        // doubles the mixed block).
        //
        // For p = 1 the AR(1) KL is |d|²/(1−|ξ|²) exactly, so the ratio is
        // 1 to machine precision at any step size.
        let xi = c(0.4, 0.2);
        let g = 1.0 / (1.0 - xi.norm_sqr());
        let base = psd_from_roots(&ArRoots::single(xi).unwrap());
        let dir = Complex64::from_polar(1.0, 0.83);
        for &eps in &[1e-2, 5e-3] {
            let moved = psd_from_roots(&ArRoots::single(xi + dir * eps).unwrap());
            let kl = kl_divergence(&base, &moved, DEFAULT_GRID_SIZE).unwrap();
            assert!((kl / (g * eps * eps) - 1.0).abs() < 1e-10);
        }

        // Moving both roots at once wakes the cubic term (single-root moves
        // cancel the other factors in the spectral ratio exactly), so the
        // ratio approaches 1 over a 3-step ladder.
        let roots = vec![c(0.4, 0.2), c(-0.3, 0.1)];
        let base = psd_from_roots(&ArRoots::new(roots.clone()).unwrap());
        let dirs = [dir, Complex64::from_polar(1.0, -0.4)];
        // ½ g_{αβ} dξ^α dξ^β = Σ_{ij} Re[g_{ij̄} d_i conj(d_j)].
        let mut quad = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let g = (Complex64::ONE - roots[i] * roots[j].conj()).finv();
                quad += (g * dirs[i] * dirs[j].conj()).re;
            }
        }
        let mut prev_err = f64::INFINITY;
        for &eps in &[2e-2, 1e-2, 5e-3] {
            let moved: Vec<Complex64> = roots
                .iter()
                .zip(&dirs)
                .map(|(&r, &d)| r + d * eps)
                .collect();
            let kl = kl_divergence(
                &base,
                &psd_from_roots(&ArRoots::new(moved).unwrap()),
                DEFAULT_GRID_SIZE,
            )
            .unwrap();
            let err = (kl / (quad * eps * eps) - 1.0).abs();
            assert!(err < prev_err, "ratio error should shrink: {err} vs {prev_err}");
            prev_err = err;
        }
        assert!(prev_err < 2e-2);
    }

    #[test]
    fn grid_mean_equals_quadrature() {
        let psd = psd_from_roots(&ar1(0.3, 0.4));
        let grid = SpectralGrid::sample(&psd, 512);
        let direct = periodic_mean(512, |w| psd.value(w));
        assert!((grid.mean() - direct).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn root_strategy() -> impl Strategy<Value = Complex64> {
            (0.0..0.9f64, 0.0..(2.0 * PI)).prop_map(|(r, th)| Complex64::from_polar(r, th))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn roots_round_trip_through_coefficients(
                roots in proptest::collection::vec(root_strategy(), 1..=3)
            ) {
                // Skip near-collisions; the polynomial solve is ill-conditioned there.
                for i in 0..roots.len() {
                    for j in i + 1..roots.len() {
                        prop_assume!((roots[i] - roots[j]).norm() > 0.05);
                    }
                }
                let ar = ArRoots::new(roots.clone()).unwrap();
                let coeffs = roots_to_coeffs(&ar);
                let mut recovered = coeffs_to_roots(&coeffs);
                let mut expect = roots;
                let key = |z: &Complex64| (z.re, z.im);
                recovered.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
                expect.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
                for (r, e) in recovered.iter().zip(&expect) {
                    prop_assert!((r - e).norm() < 1e-8);
                }
            }

            #[test]
            fn kl_is_nonnegative(
                a in root_strategy(),
                b in root_strategy(),
            ) {
                let pa = psd_from_roots(&ArRoots::single(a).unwrap());
                let pb = psd_from_roots(&ArRoots::single(b).unwrap());
                let kl = kl_divergence(&pa, &pb, 1024).unwrap();
                prop_assert!(kl >= 0.0);
                if (a - b).norm() > 1e-3 {
                    prop_assert!(kl > 0.0);
                }
            }
        }
    }
}
