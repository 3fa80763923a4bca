//! Small dense solves for Hankel/Toeplitz systems and polynomial roots.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// `a·b + c` error-free split: returns (p, e) with `p + e = a·b` exactly.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `c − Σ aᵢbᵢ` in doubled working precision.
fn compensated_residual(c: f64, a: &[f64], b: &[f64]) -> f64 {
    let mut s = c;
    let mut err = 0.0;
    for (&x, &y) in a.iter().zip(b.iter()) {
        let (p, pe) = two_prod(x, y);
        let (t, te) = two_sum(s, -p);
        s = t;
        err += te - pe;
    }
    s + err
}

/// Solves `M x = rhs` by full-pivot LU with a few steps of iterative
/// refinement whose residuals are accumulated in compensated arithmetic.
pub fn solve_refined(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(DVector::zeros(0));
    }
    let lu = m.clone().full_piv_lu();
    let mut x = lu
        .solve(rhs)
        .ok_or_else(|| Error::Singular(format!("{n}x{n} system")))?;
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::Singular(format!("{n}x{n} system")));
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).iter().copied().collect()).collect();
    for _ in 0..4 {
        let xs: Vec<f64> = x.iter().copied().collect();
        let r = DVector::from_iterator(n, (0..n).map(|i| compensated_residual(rhs[i], &rows[i], &xs)));
        let Some(dx) = lu.solve(&r) else { break };
        let step = dx.norm();
        x += dx;
        if step <= 1e-17 * x.norm() {
            break;
        }
    }
    Ok(x)
}

pub fn determinant(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    m.clone().full_piv_lu().determinant()
}

/// `σ_min/σ_max`; zero for a numerically singular matrix.
pub fn reciprocal_condition(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0.0;
    }
    sv.min() / max
}

/// Roots of `Σ cᵢ xⁱ` (coefficients in ascending order) from the
/// eigenvalues of the companion matrix.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

pub fn poly_eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refinement_shrinks_residual_on_hilbert_matrix() {
        let n = 9;
        let h = DMatrix::from_fn(n, n, |i, j| 1.0 / (i + j + 1) as f64);
        let rhs = DVector::from_fn(n, |i, _| (i as f64 + 1.0).recip());
        let rows: Vec<Vec<f64>> = (0..n).map(|i| h.row(i).iter().copied().collect()).collect();
        let resid = |x: &DVector<f64>| -> f64 {
            let xs: Vec<f64> = x.iter().copied().collect();
            (0..n)
                .map(|i| compensated_residual(rhs[i], &rows[i], &xs).abs())
                .fold(0.0, f64::max)
        };
        let plain = h.clone().full_piv_lu().solve(&rhs).unwrap();
        let refined = solve_refined(&h, &rhs).unwrap();
        assert!(resid(&refined) <= resid(&plain));
        assert!(resid(&refined) < 1e-14);
    }

    #[test]
    fn condition_of_singular_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(reciprocal_condition(&m) < 1e-15);
        assert!((reciprocal_condition(&DMatrix::identity(3, 3)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_detected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(solve_refined(&m, &DVector::from_vec(vec![1.0, 1.0])).is_err());
    }

    #[test]
    fn roots_of_quadratic() {
        // (x − 1)(x − 3)
        let mut r: Vec<f64> = poly_roots(&[3.0, -4.0, 1.0]).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 3.0).abs() < 1e-12);
    }
}
