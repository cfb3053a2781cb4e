use alloc::vec::Vec;

use super::DomainBox;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Base finite-difference step; coordinate `i` uses `step * max(1, |x_i|)`.
pub const DEFAULT_STEP: f64 = 1e-4;

fn steps(x: &[f64], domain: &DomainBox, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameter {
            name: "step",
            reason: "finite-difference step must be positive",
        });
    }
    if x.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: x.len(),
        });
    }
    let h: Vec<f64> = x.iter().map(|v| step * v.abs().max(1.0)).collect();
    let pad: Vec<f64> = h.iter().map(|v| 2.0 * v).collect();
    if !domain.contains_with_padding(x, &pad) {
        return Err(Error::OutsideDomain);
    }
    Ok(h)
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, d) in moves {
        y[i] += d;
    }
    y
}

/// Central-difference gradient.
pub fn gradient_fd<F: Fn(&[f64]) -> f64>(
    f: &F,
    domain: &DomainBox,
    x: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    let h = steps(x, domain, step)?;
    Ok((0..x.len())
        .map(|i| (f(&shifted(x, &[(i, h[i])])) - f(&shifted(x, &[(i, -h[i])]))) / (2.0 * h[i]))
        .collect())
}

/// Central second differences, symmetrized.
pub fn hessian_fd<F: Fn(&[f64]) -> f64>(
    f: &F,
    domain: &DomainBox,
    x: &[f64],
    step: f64,
) -> Result<Matrix> {
    let h = steps(x, domain, step)?;
    let n = x.len();
    let f0 = f(x);
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = (f(&shifted(x, &[(i, h[i])])) - 2.0 * f0 + f(&shifted(x, &[(i, -h[i])])))
            / (h[i] * h[i]);
        for j in (i + 1)..n {
            let pp = f(&shifted(x, &[(i, h[i]), (j, h[j])]));
            let pm = f(&shifted(x, &[(i, h[i]), (j, -h[j])]));
            let mp = f(&shifted(x, &[(i, -h[i]), (j, h[j])]));
            let mm = f(&shifted(x, &[(i, -h[i]), (j, -h[j])]));
            let v = (pp - pm - mp + mm) / (4.0 * h[i] * h[j]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m.symmetrized())
}

/// `[[0, grad^T], [grad, H]]`, all by finite differences.
pub fn bordered_hessian<F: Fn(&[f64]) -> f64>(
    f: &F,
    domain: &DomainBox,
    x: &[f64],
    step: f64,
) -> Result<Matrix> {
    let g = gradient_fd(f, domain, x, step)?;
    let h = hessian_fd(f, domain, x, step)?;
    let n = x.len();
    let mut b = Matrix::zeros(n + 1);
    for i in 0..n {
        b[(0, i + 1)] = g[i];
        b[(i + 1, 0)] = g[i];
        for j in 0..n {
            b[(i + 1, j + 1)] = h[(i, j)];
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open(dim: usize) -> DomainBox {
        DomainBox::cube(dim, f64::NEG_INFINITY, f64::INFINITY).unwrap()
    }

    #[test]
    fn square_has_second_derivative_two() {
        let h = hessian_fd(&|x: &[f64]| x[0] * x[0], &open(1), &[1.0], DEFAULT_STEP).unwrap();
        assert!((h[(0, 0)] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn product_hessian_and_border() {
        let f = |x: &[f64]| x[0] * x[1];
        let h = hessian_fd(&f, &open(2), &[1.0, 2.0], DEFAULT_STEP).unwrap();
        assert!(h[(0, 0)].abs() < 1e-6 && h[(1, 1)].abs() < 1e-6);
        assert!((h[(0, 1)] - 1.0).abs() < 1e-6);
        let b = bordered_hessian(&f, &open(2), &[1.0, 2.0], DEFAULT_STEP).unwrap();
        assert!((b[(0, 1)] - 2.0).abs() < 1e-8 && (b[(0, 2)] - 1.0).abs() < 1e-8);
        assert!((b.leading_minor(2).det() + 4.0).abs() < 1e-6);
        assert!((b.det() - 4.0).abs() < 1e-6);
    }

    #[test]
    fn constant_gives_zero_matrix() {
        let b =
            bordered_hessian(&|_: &[f64]| 3.5, &open(3), &[0.1, 0.2, 0.3], DEFAULT_STEP).unwrap();
        assert!(b.as_slice().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_bad_step_and_boundary_points() {
        let positive = DomainBox::cube(1, 0.0, f64::INFINITY).unwrap();
        let f = |x: &[f64]| x[0];
        assert!(matches!(
            hessian_fd(&f, &positive, &[1.0], 0.0),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            hessian_fd(&f, &positive, &[1.0], -1e-4),
            Err(Error::InvalidParameter { .. })
        ));
        assert_eq!(
            hessian_fd(&f, &positive, &[1.5e-4], DEFAULT_STEP),
            Err(Error::OutsideDomain)
        );
        assert!(hessian_fd(&f, &positive, &[3e-4], DEFAULT_STEP).is_ok());
    }
}
