//! Exact integer linear algebra.

use num_integer::Integer;
use num_traits::Signed;

/// Determinant of a square integer matrix by fraction-free Gaussian
/// elimination (Bareiss). Every division is exact, so the result is exact for
/// any integer type that does not overflow on the intermediate minors.
///
/// Rows must all have length `m.len()`.
pub fn bareiss_determinant<I>(mut m: Vec<Vec<I>>) -> I
where
    I: Integer + Signed + Clone,
{
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return I::one();
    }
    let mut negate = false;
    let mut prev = I::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return I::zero(),
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * pivot.clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num / prev.clone();
            }
            m[i][k] = I::zero();
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}
