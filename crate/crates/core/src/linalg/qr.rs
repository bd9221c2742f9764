//! Householder QR of a tall matrix with full column rank.

use super::matrix::{dot, norm, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Compact Householder factorization `A = Q R`.
///
/// Reflector `k` acts on rows `k..m` and is stored as `v` with `v[0] = 1`
/// implied by the scaling; `beta = 2 / (v'v)`.
#[derive(Debug, Clone)]
pub struct Qr<T> {
    rows: usize,
    cols: usize,
    reflectors: Vec<(Vec<T>, T)>,
    r: Matrix<T>,
}

impl<T: Real> Qr<T> {
    /// Factors `a` (m x k, k <= m). Rank is not checked here; see
    /// [`super::check_full_column_rank`].
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        let (m, k) = (a.nrows(), a.ncols());
        if k > m {
            return Err(Error::Dimension(format!(
                "QR needs at least as many rows as columns, got {m}x{k}"
            )));
        }
        let mut work = a.clone();
        let mut reflectors = Vec::with_capacity(k);
        for j in 0..k {
            let x = &work.column(j)[j..];
            let alpha = norm(x);
            let mut v = x.to_vec();
            let beta = if alpha == T::zero() {
                T::zero()
            } else {
                let sign = if v[0] >= T::zero() { T::one() } else { -T::one() };
                v[0] += sign * alpha;
                let vtv = dot(&v, &v);
                T::lit(2.0) / vtv
            };
            if beta != T::zero() {
                for c in j..k {
                    let col = &mut work.column_mut(c)[j..];
                    let s = beta * dot(&v, col);
                    for (ci, &vi) in col.iter_mut().zip(&v) {
                        *ci -= s * vi;
                    }
                }
            }
            reflectors.push((v, beta));
        }
        let r = Matrix::from_fn(k, k, |i, j| if i <= j { work[(i, j)] } else { T::zero() });
        Ok(Self {
            rows: m,
            cols: k,
            reflectors,
            r,
        })
    }

    pub fn r(&self) -> &Matrix<T> {
        &self.r
    }

    /// `Q' v`
    pub fn apply_qt(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (j, (h, beta)) in self.reflectors.iter().enumerate() {
            reflect(&mut out[j..], h, *beta);
        }
        out
    }

    /// `Q v`
    pub fn apply_q(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (j, (h, beta)) in self.reflectors.iter().enumerate().rev() {
            reflect(&mut out[j..], h, *beta);
        }
        out
    }

    /// Component of `v` orthogonal to the column space.
    pub fn project_complement(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_len(v)?;
        let mut c = self.apply_qt(v);
        for ci in c.iter_mut().take(self.cols) {
            *ci = T::zero();
        }
        Ok(self.apply_q(&c))
    }

    /// Least-squares coefficients `argmin_u ||A u - y||` via `R u = (Q'y)[..k]`.
    pub fn solve_least_squares(&self, y: &[T]) -> Result<Vec<T>> {
        self.check_len(y)?;
        let qty = self.apply_qt(y);
        let k = self.cols;
        let mut u = qty[..k].to_vec();
        for i in (0..k).rev() {
            let mut s = u[i];
            for (j, uj) in u.iter().enumerate().skip(i + 1) {
                s -= self.r[(i, j)] * *uj;
            }
            let d = self.r[(i, i)];
            if d == T::zero() {
                return Err(Error::RankDeficient {
                    columns: (1..=k).collect(),
                    dependent: i + 1,
                });
            }
            u[i] = s / d;
        }
        Ok(u)
    }

    fn check_len(&self, v: &[T]) -> Result<()> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector length {} does not match {} rows",
                v.len(),
                self.rows
            )));
        }
        Ok(())
    }
}

#[inline]
fn reflect<T: Real>(x: &mut [T], v: &[T], beta: T) {
    if beta == T::zero() {
        return;
    }
    let s = beta * dot(v, x);
    for (xi, &vi) in x.iter_mut().zip(v) {
        *xi -= s * vi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::sub;

    #[test]
    fn reconstructs_and_projects() {
        let a = Matrix::<f64>::from_rows(&[[1.0, 2.0], [0.0, 1.0], [1.0, 0.0], [2.0, -1.0]]).unwrap();
        let qr = Qr::new(&a).unwrap();
        // Q R == A column by column.
        for j in 0..2 {
            let mut rj = vec![0.0; 4];
            rj[..2].copy_from_slice(&qr.r().column(j)[..2]);
            let col = qr.apply_q(&rj);
            for (x, y) in col.iter().zip(a.column(j)) {
                assert!((x - y).abs() < 1e-14);
            }
        }
        let v = [1.0, -2.0, 3.0, 0.5];
        let p = qr.project_complement(&v).unwrap();
        for j in 0..2 {
            assert!(dot(&p, a.column(j)).abs() < 1e-13);
        }
        let u = qr.solve_least_squares(&v).unwrap();
        let fit = a.mul_vec(&u).unwrap();
        let resid = sub(&v, &fit);
        for (x, y) in resid.iter().zip(&p) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_wide() {
        let a = Matrix::<f64>::zeros(1, 2);
        assert!(Qr::new(&a).is_err());
    }
}
