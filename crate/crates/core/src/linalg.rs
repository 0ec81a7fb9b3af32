//! Small dense real solver for the branch-sizing systems.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("matrix is singular to working precision")]
pub struct SingularMatrix;

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
/// `a` is row-major, `n × n`.
pub fn solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>, SingularMatrix> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n), "system must be square");
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()));
    if !(scale > T::zero()) {
        return Err(SingularMatrix);
    }
    let floor = scale * T::epsilon() * T::from_usize(n).unwrap_or_else(T::one) * T::lit(16.0);

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        if !(a[pivot][col].abs() > floor) {
            return Err(SingularMatrix);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(row);
            for (x, &v) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }

    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let tail = (row + 1..n).fold(T::zero(), |s, k| s + a[row][k] * x[k]);
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}
