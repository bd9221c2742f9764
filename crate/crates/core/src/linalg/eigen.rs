//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use super::matrix::Matrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: Matrix<T>,
}

impl<T: Real> SymmetricEigen<T> {
    /// Only the upper triangle of `a` is read.
    pub fn new(a: &Matrix<T>) -> Self {
        let n = a.nrows();
        debug_assert_eq!(n, a.ncols());
        let mut m = Matrix::from_fn(n, n, |i, j| if i <= j { a[(i, j)] } else { a[(j, i)] });
        let mut v = Matrix::identity(n);
        let eps = T::epsilon();
        for _ in 0..MAX_SWEEPS {
            let mut off = T::zero();
            let mut diag = T::zero();
            for j in 0..n {
                diag += m[(j, j)] * m[(j, j)];
                for i in 0..j {
                    off += m[(i, j)] * m[(i, j)];
                }
            }
            if off <= eps * eps * diag || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = m[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let app = m[(p, p)];
                    let aqq = m[(q, q)];
                    let theta = (aqq - app) / (T::lit(2.0) * apq);
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    let t = sign / (theta.abs() + (T::one() + theta * theta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let mkp = m[(k, p)];
                        let mkq = m[(k, q)];
                        m[(k, p)] = c * mkp - s * mkq;
                        m[(k, q)] = s * mkp + c * mkq;
                    }
                    for k in 0..n {
                        let mpk = m[(p, k)];
                        let mqk = m[(q, k)];
                        m[(p, k)] = c * mpk - s * mqk;
                        m[(q, k)] = s * mpk + c * mqk;
                    }
                    m[(p, q)] = T::zero();
                    m[(q, p)] = T::zero();
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            m[(i, i)]
                .partial_cmp(&m[(j, j)])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&i| m[(i, i)]).collect();
        let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
        Self { values, vectors }
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
}
