use alloc::format;
use alloc::vec::Vec;

use super::{CertResult, Violation};
use crate::linalg::Matrix;

/// Leading minors smaller than this in magnitude cannot be signed.
pub const INDETERMINATE_BELOW: f64 = 1e-12;

/// `(k, D_k)` for `k = 2..=size`, where `D_k` is the determinant of the top-left `k x k` block.
pub fn leading_minors(b: &Matrix) -> Vec<(usize, f64)> {
    (2..=b.size())
        .map(|k| (k, b.leading_minor(k).det()))
        .collect()
}

/// Checks `(-1)^k D_k < 0` for every leading minor of a bordered Hessian, the
/// sufficient condition for quasi-concavity. A failed pattern is not a proof that the
/// function is not quasi-concave.
pub fn minor_sign_test(b: &Matrix) -> CertResult {
    minor_sign_test_at(b, &[])
}

pub(crate) fn minor_sign_test_at(b: &Matrix, point: &[f64]) -> CertResult {
    let minors = leading_minors(b);
    let mut out = CertResult::empty();
    out.trials = 1;
    for &(k, d) in &minors {
        let sign = if k % 2 == 0 { d } else { -d };
        if d.abs() < INDETERMINATE_BELOW || !d.is_finite() {
            out.record(Violation {
                points: alloc::vec![point.to_vec()],
                quantity: format!("D_{k} too small to sign"),
                value: d,
                indeterminate: true,
            });
        } else if !(sign < 0.0) {
            out.record(Violation {
                points: alloc::vec![point.to_vec()],
                quantity: format!("D_{k} has the wrong sign"),
                value: d,
                indeterminate: false,
            });
        }
    }
    out.minor_signs = Some(minors);
    out.finish()
}

#[cfg(test)]
mod tests {
    use super::super::Verdict;
    use super::*;

    #[test]
    fn product_pattern_holds() {
        // f = ab at (a, b): D_2 = -b^2, D_3 = 2ab.
        let (a, b) = (0.7, 3.0);
        let m = Matrix::from_rows(&[&[0.0, b, a], &[b, 0.0, 1.0], &[a, 1.0, 0.0]]);
        let r = minor_sign_test(&m);
        assert_eq!(r.verdict, Verdict::Pass);
        let signs = r.minor_signs.unwrap();
        assert!((signs[0].1 + b * b).abs() < 1e-12);
        assert!((signs[1].1 - 2.0 * a * b).abs() < 1e-12);
    }

    #[test]
    fn linear_function_is_indeterminate() {
        // f = a + b: gradient (1, 1), zero Hessian, so D_3 = 0.
        let m = Matrix::from_rows(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]);
        let r = minor_sign_test(&m);
        assert_eq!(r.verdict, Verdict::Indeterminate);
        assert!(!r.passed());
    }

    #[test]
    fn wrong_sign_fails() {
        // f = a^2 + b^2 at (1, 1): D_3 = -16.
        let m = Matrix::from_rows(&[&[0.0, 2.0, 2.0], &[2.0, 2.0, 0.0], &[2.0, 0.0, 2.0]]);
        assert_eq!(minor_sign_test(&m).verdict, Verdict::Fail);
    }
}
