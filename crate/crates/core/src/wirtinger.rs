//! Finite-difference Wirtinger calculus on functions of p complex
//! coordinates, used as the fallback (and cross-check) for analytic
//! derivatives. The Wirtinger operators are
//! ∂_i = ½(∂/∂xⁱ − i ∂/∂yⁱ) and ∂_ī = ½(∂/∂xⁱ + i ∂/∂yⁱ).

use num_complex::Complex64;

use crate::spectral::WirtIndex;

/// Central-difference step for first derivatives.
pub(crate) const FD_STEP_FIRST: f64 = 1e-5;

/// Step for second-derivative stencils (nested differencing).
pub(crate) const FD_STEP_SECOND: f64 = 1e-4;

/// The two real-coordinate components (slot, weight) of a Wirtinger index:
/// slot 2i is xⁱ, slot 2i+1 is yⁱ.
fn components(alpha: WirtIndex) -> [(usize, Complex64); 2] {
    match alpha {
        WirtIndex::Xi(i) => [
            (2 * i, Complex64::new(0.5, 0.0)),
            (2 * i + 1, Complex64::new(0.0, -0.5)),
        ],
        WirtIndex::XiBar(i) => [
            (2 * i, Complex64::new(0.5, 0.0)),
            (2 * i + 1, Complex64::new(0.0, 0.5)),
        ],
    }
}

fn shifted(point: &[Complex64], slot: usize, delta: f64) -> Vec<Complex64> {
    let mut out = point.to_vec();
    if slot % 2 == 0 {
        out[slot / 2].re += delta;
    } else {
        out[slot / 2].im += delta;
    }
    out
}

/// ∂_α f at `point` by central differences on a complex-valued f.
pub(crate) fn fd_wirtinger<F>(f: &F, point: &[Complex64], alpha: WirtIndex, h: f64) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    let mut acc = Complex64::ZERO;
    for (slot, w) in components(alpha) {
        let plus = f(&shifted(point, slot, h));
        let minus = f(&shifted(point, slot, -h));
        acc += w * (plus - minus) / (2.0 * h);
    }
    acc
}

/// ∂_α ∂_β f at `point` by central second-difference stencils on the real
/// coordinates, combined with the Wirtinger weights.
pub(crate) fn fd_wirtinger2<F>(
    f: &F,
    point: &[Complex64],
    alpha: WirtIndex,
    beta: WirtIndex,
    h: f64,
) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + ?Sized,
{
    let center = f(point);
    let mut acc = Complex64::ZERO;
    for (sa, wa) in components(alpha) {
        for (sb, wb) in components(beta) {
            let second = if sa == sb {
                let plus = f(&shifted(point, sa, h));
                let minus = f(&shifted(point, sa, -h));
                (plus - 2.0 * center + minus) / (h * h)
            } else {
                let pp = f(&shifted(&shifted(point, sa, h), sb, h));
                let pm = f(&shifted(&shifted(point, sa, h), sb, -h));
                let mp = f(&shifted(&shifted(point, sa, -h), sb, h));
                let mm = f(&shifted(&shifted(point, sa, -h), sb, -h));
                (pp - pm - mp + mm) / (4.0 * h * h)
            };
            acc += wa * wb * second;
        }
    }
    acc
}
