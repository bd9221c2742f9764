//! Singular values by one-sided (Hestenes) Jacobi rotations.

use super::matrix::{dot, norm, Matrix};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 60;

/// Singular values of `a`, sorted descending. Only `min(m, k)` of them can be
/// nonzero; when `k > m` the trailing ones come out as (numerical) zeros.
pub fn singular_values<T: Real>(a: &Matrix<T>) -> Vec<T> {
    let k = a.ncols();
    let mut cols: Vec<Vec<T>> = (0..k).map(|j| a.column(j).to_vec()).collect();
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..k {
            for j in i + 1..k {
                let alpha = dot(&cols[i], &cols[i]);
                let beta = dot(&cols[j], &cols[j]);
                let gamma = dot(&cols[i], &cols[j]);
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (xi, yi) = (*x, *y);
                    *x = c * xi - s * yi;
                    *y = s * xi + c * yi;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = cols.iter().map(|c| norm(c)).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}
