//! Small dense linear algebra: everything the solvers need and nothing more.

mod eigen;
mod matrix;
mod qr;
mod svd;

pub use eigen::SymmetricEigen;
pub use matrix::{axpy, dot, norm, norm_sq, sub, Matrix};
pub use qr::Qr;
pub use svd::singular_values;

use crate::scalar::Real;

/// Checks that `a` has full column rank: every singular value exceeds the
/// rank tolerance times the largest. On failure returns the zero-based
/// position of the column judged dependent (the one with the smallest
/// `|R_jj|` in a QR of `a`, or the first surplus column when `a` is wide).
pub fn check_full_column_rank<T: Real>(a: &Matrix<T>) -> Result<(), usize> {
    let (m, k) = (a.nrows(), a.ncols());
    if k == 0 {
        return Ok(());
    }
    if k > m {
        return Err(m);
    }
    let sv = singular_values(a);
    let largest = sv[0];
    let smallest = sv[k - 1];
    if largest > T::zero() && smallest > T::tolerances().rank * largest {
        return Ok(());
    }
    let dependent = match Qr::new(a) {
        Ok(qr) => (0..k)
            .min_by(|&i, &j| {
                qr.r()[(i, i)]
                    .abs()
                    .partial_cmp(&qr.r()[(j, j)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0),
        Err(_) => 0,
    };
    Err(dependent)
}
