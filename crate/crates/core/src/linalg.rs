//! Minimal dense complex linear algebra for the small systems this crate
//! needs (stationary covariances of order p ≤ 3, Fisher metrics, and the
//! Lyapunov solve behind them). Row-major storage, no blocking.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CMat {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn mul(&self, other: &CMat) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Lower-triangular Cholesky factor of a Hermitian positive definite
    /// matrix. Fails with `NotPositiveDefinite` when a pivot is not strictly
    /// positive.
    pub fn cholesky(&self) -> Result<CMat> {
        let n = self.n;
        let mut l = CMat::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self[(i, j)];
                for k in 0..j {
                    sum -= l[(i, k)] * l[(j, k)].conj();
                }
                if i == j {
                    let d = sum.re;
                    if !(d > 0.0) || sum.im.abs() > 1e-8 * (1.0 + d.abs()) {
                        return Err(CoreError::NotPositiveDefinite);
                    }
                    l[(i, j)] = Complex64::new(d.sqrt(), 0.0);
                } else {
                    l[(i, j)] = sum / l[(j, j)];
                }
            }
        }
        Ok(l)
    }

    /// Solves `L y = b` for lower-triangular `L`.
    pub fn solve_lower(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let yk = y[k];
                y[i] -= self[(i, k)] * yk;
            }
            y[i] /= self[(i, i)];
        }
        y
    }

    /// Solves `L^H x = y` for lower-triangular `L`.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn solve_lower_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            for k in i + 1..n {
                let xk = x[k];
                x[i] -= self[(k, i)].conj() * xk;
            }
            x[i] /= self[(i, i)].conj();
        }
        x
    }

    /// log det of the Hermitian matrix with Cholesky factor `self`.
    pub fn logdet_from_cholesky(&self) -> f64 {
        2.0 * (0..self.n).map(|i| self[(i, i)].re.ln()).sum::<f64>()
    }

    /// LU factorization with partial pivoting. Returns (LU, perm, sign-swaps).
    fn lu(&self) -> Result<(CMat, Vec<usize>, usize)> {
        let n = self.n;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (mut pivot_row, mut pivot_val) = (k, lu[(k, k)].norm());
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > pivot_val {
                    pivot_row = i;
                    pivot_val = v;
                }
            }
            if pivot_val == 0.0 {
                return Err(CoreError::NearSingular { cond: f64::INFINITY });
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= factor * v;
                }
            }
        }
        Ok((lu, perm, swaps))
    }

    /// Solves `A x = b` by LU with partial pivoting.
    pub fn lu_solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let (lu, perm, _) = self.lu()?;
        let n = self.n;
        let mut x: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let xk = x[k];
                x[i] -= lu[(i, k)] * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let xk = x[k];
                x[i] -= lu[(i, k)] * xk;
            }
            x[i] /= lu[(i, i)];
        }
        Ok(x)
    }

    /// Determinant via LU.
    pub fn det(&self) -> Result<Complex64> {
        let (lu, _, swaps) = self.lu()?;
        let mut d = if swaps % 2 == 0 {
            Complex64::ONE
        } else {
            -Complex64::ONE
        };
        for i in 0..self.n {
            d *= lu[(i, i)];
        }
        Ok(d)
    }

    /// Inverse via LU column solves.
    pub fn inverse(&self) -> Result<CMat> {
        let n = self.n;
        let mut inv = CMat::zeros(n);
        for j in 0..n {
            let mut e = vec![Complex64::ZERO; n];
            e[j] = Complex64::ONE;
            let col = self.lu_solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cholesky_solves_hermitian_system() {
        // A = [[2, i], [-i, 3]] is Hermitian positive definite.
        let a = CMat::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c(2.0, 0.0),
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => c(3.0, 0.0),
        });
        let l = a.cholesky().unwrap();
        let b = [c(1.0, 1.0), c(2.0, -1.0)];
        let y = l.solve_lower(&b);
        let x = l.solve_lower_adjoint(&y);
        // Check A x = b.
        for i in 0..2 {
            let mut r = -b[i];
            for j in 0..2 {
                r += a[(i, j)] * x[j];
            }
            assert!(r.norm() < 1e-12);
        }
        // det A = 2*3 - |i|^2 = 5.
        assert!((l.logdet_from_cholesky() - 5.0f64.ln()).abs() < 1e-12);
        assert!((a.det().unwrap() - c(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = CMat::from_fn(2, |i, j| if i == j { c(1.0, 0.0) } else { c(2.0, 0.0) });
        assert!(matches!(a.cholesky(), Err(CoreError::NotPositiveDefinite)));
    }

    #[test]
    fn lu_inverse_round_trips() {
        let a = CMat::from_fn(3, |i, j| c((i * 3 + j) as f64 + 1.0, (i as f64) - (j as f64)))
            .mul(&CMat::identity(3));
        // Make it well-conditioned by adding a diagonal shift.
        let mut a = a;
        for i in 0..3 {
            a[(i, i)] += c(10.0, 0.0);
        }
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                assert!((prod[(i, j)] - expect).norm() < 1e-10);
            }
        }
    }
}
