//! Power-series evaluation of `₍q+1₎F_q(σ, A; B; z)` for `|z| < 1`, the
//! contiguous relation in `b_q`, and a real Gauss `₂F₁` on `(−∞, 1)`.

use crate::error::{Error, Result};
use crate::params::ParameterSet;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_TERM_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Modulus of the first term not included.
    pub truncation_bound: f64,
}

/// Sums the series with running term ratios; stops once two consecutive
/// terms fall below `tol·|partial sum|`.
pub fn eval_series(p: &ParameterSet, z: Complex64, tol: f64) -> Result<SeriesResult> {
    eval_series_capped(p, z, tol, DEFAULT_TERM_CAP)
}

pub fn eval_series_capped(p: &ParameterSet, z: Complex64, tol: f64, cap: usize) -> Result<SeriesResult> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("|z| = {} ≥ 1", z.norm())));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tol = {tol}")));
    }
    let p = p.cancelled();
    let ratio = |n: usize| -> Complex64 {
        let nf = n as f64;
        let mut r = (p.sigma + nf) * z / (nf + 1.0);
        for (a, b) in p.a.iter().zip(p.b.iter()) {
            r *= (a + nf) / (b + nf);
        }
        r
    };
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_run = 0;
    for n in 0..cap {
        term *= ratio(n);
        sum += term;
        if term.norm() <= tol * sum.norm() {
            small_run += 1;
            if small_run == 2 {
                let next = term * ratio(n + 1);
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: n + 2,
                    truncation_bound: next.norm(),
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NoConvergence {
        terms: cap,
        last_term: term.norm(),
    })
}

/// Parameters of the term-by-term derivative: `F′ = σ∏a/∏b · F(σ+1, A+1; B+1)`.
pub fn derivative_params(p: &ParameterSet) -> (Complex64, ParameterSet) {
    let factor = p.sigma * p.a.iter().product::<Complex64>() / p.b.iter().product::<Complex64>();
    let shifted = ParameterSet {
        sigma: p.sigma + 1.0,
        a: p.a.iter().map(|a| a + 1.0).collect(),
        b: p.b.iter().map(|b| b + 1.0).collect(),
    };
    (factor, shifted)
}

/// Both sides of the contiguous relation in the last lower parameter,
/// evaluated at `−z` with `c = b_q + 1/m`:
///
/// `F(σ,A;B′,c;−z) = F(σ,A;B′,c+1;−z) − zσ∏a/(∏b′·c(c+1))·F(σ+1,A+1;B′+1,c+2;−z)`.
///
/// Returns `(lhs, rhs)`.
pub fn contiguous_shift(p: &ParameterSet, m: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    contiguous_sides(p, m, z, 1.0)
}

/// Same relation with the upper exponent left at `σ` in the last term. This
/// form is not an identity; kept to show the residual it leaves.
pub fn contiguous_shift_unshifted_sigma(p: &ParameterSet, m: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    contiguous_sides(p, m, z, 0.0)
}

fn contiguous_sides(p: &ParameterSet, m: f64, z: Complex64, sigma_step: f64) -> Result<(Complex64, Complex64)> {
    if p.q() == 0 || m == 0.0 {
        return Err(Error::Domain("need q ≥ 1 and m ≠ 0".into()));
    }
    const TOL: f64 = 1e-15;
    let q = p.q();
    let c = p.b[q - 1] + 1.0 / m;
    let b_rest = &p.b[..q - 1];
    let w = -z;
    let with_last = |sigma: Complex64, a: Vec<Complex64>, rest: Vec<Complex64>, last: Complex64| {
        let mut b = rest;
        b.push(last);
        ParameterSet::new(sigma, a, b)
    };
    let lhs = eval_series(&with_last(p.sigma, p.a.clone(), b_rest.to_vec(), c)?, w, TOL)?.value;
    let f1 = eval_series(&with_last(p.sigma, p.a.clone(), b_rest.to_vec(), c + 1.0)?, w, TOL)?.value;
    let f2 = eval_series(
        &with_last(
            p.sigma + sigma_step,
            p.a.iter().map(|a| a + 1.0).collect(),
            b_rest.iter().map(|b| b + 1.0).collect(),
            c + 2.0,
        )?,
        w,
        TOL,
    )?
    .value;
    let coef = z * p.sigma * p.a.iter().product::<Complex64>()
        / (b_rest.iter().product::<Complex64>() * c * (c + 1.0));
    Ok((lhs, f1 - coef * f2))
}

/// `(1 + z)^{−σ}` on the principal branch.
pub fn binomial_case(sigma: Complex64, z: Complex64) -> Result<Complex64> {
    let w = z + 1.0;
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::Domain(format!("z = {z} lies on the cut (−∞, −1]")));
    }
    Ok((-sigma * w.ln()).exp())
}

// Real Gauss function -------------------------------------------------------

fn hyp2f1_series(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    let p = ParameterSet::real(a, &[b], &[c])?;
    Ok(eval_series(&p, Complex64::new(w, 0.0), 1e-17)?.value.re)
}

/// Value and derivative of the Taylor expansion of the `₂F₁` ODE solution
/// around `w0 = 1 − d0` with data `(f, f′)`, evaluated at `w0 + h`.
/// Works with scaled coefficients `cₙhⁿ` so nothing overflows near `w = 1`.
fn ode_step(a: f64, b: f64, c: f64, d0: f64, f: f64, df: f64, h: f64) -> (f64, f64) {
    let w0 = 1.0 - d0;
    let p0 = w0 * d0;
    let p1 = 2.0 * d0 - 1.0;
    let p2 = -1.0;
    let q0 = c - (a + b + 1.0) * w0;
    let q1 = -(a + b + 1.0);
    let r = -a * b;
    let (mut dn, mut dn1) = (f, df * h);
    let mut val = dn + dn1;
    let mut der = dn1;
    for n in 0..4000usize {
        let nf = n as f64;
        let dn2 = -((p1 * nf + q0) * (nf + 1.0) * dn1 * h + (p2 * nf * (nf - 1.0) + q1 * nf + r) * dn * h * h)
            / (p0 * (nf + 2.0) * (nf + 1.0));
        val += dn2;
        der += (nf + 2.0) * dn2;
        dn = dn1;
        dn1 = dn2;
        if n > 4 && dn2.abs() * (nf + 2.0) <= 1e-17 * val.abs().min(der.abs()).max(1e-300) && dn.abs() <= 1e-16 * val.abs() {
            break;
        }
    }
    (val, der / h)
}

/// `₂F₁(a, b; c; w)` for real arguments and `w < 1`.
///
/// The series is used for `|w| ≤ 1/2`; beyond that on `(1/2, 1)` the ODE is
/// integrated by Taylor re-expansion, each step moving halfway to the
/// singular point. Negative `w` goes through the Pfaff transformation.
pub fn hyp2f1(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    if !(w < 1.0) {
        return Err(Error::Domain(format!("₂F₁ argument {w} ≥ 1")));
    }
    if w.abs() <= 0.5 {
        return hyp2f1_series(a, b, c, w);
    }
    if w < 0.0 {
        // F(a,b;c;w) = (1−w)^{−a} F(a, c−b; c; w/(w−1))
        let u = w / (w - 1.0);
        return Ok((1.0 - w).powf(-a) * hyp2f1(a, c - b, c, u)?);
    }
    hyp2f1_near_one(a, b, c, 1.0 - w)
}

/// `₂F₁(a, b; c; 1 − t)` for `0 < t`, with `t` known to full precision.
pub fn hyp2f1_near_one(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("₂F₁ complement argument {t} ≤ 0")));
    }
    if t >= 0.5 {
        return hyp2f1(a, b, c, 1.0 - t);
    }
    let mut d0 = 0.5;
    let mut f = hyp2f1_series(a, b, c, 0.5)?;
    let mut df = if a * b == 0.0 {
        0.0
    } else {
        a * b / c * hyp2f1_series(a + 1.0, b + 1.0, c + 1.0, 0.5)?
    };
    while d0 > t {
        let h = (d0 - t).min(0.5 * d0);
        let (nf, ndf) = ode_step(a, b, c, d0, f, df, h);
        f = nf;
        df = ndf;
        d0 -= h;
        if (d0 - t) <= 1e-15 * t {
            break;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn series_log_case() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        let r = eval_series(&p, c(-0.5), 1e-15).unwrap();
        assert!((r.value.re - 1.5_f64.ln() / 0.5).abs() < 1e-14);
        assert!(r.truncation_bound <= 1e-15 * r.value.norm());
    }

    #[test]
    fn series_at_origin_is_one() {
        let p = ParameterSet::real(0.3, &[1.2, 2.0], &[2.5, 0.7]).unwrap();
        assert_eq!(eval_series(&p, c(0.0), 1e-12).unwrap().value, c(1.0));
    }

    #[test]
    fn series_binomial_case() {
        let p = ParameterSet::real(0.7, &[1.3], &[1.3]).unwrap();
        let v = eval_series(&p, c(-0.5), 1e-15).unwrap().value.re;
        // 1.5^{-0.7}
        assert!((v - 0.752_897_956_971_237).abs() < 1e-14, "{v}");
        assert!((v - binomial_case(c(0.7), c(0.5)).unwrap().re).abs() < 1e-14);
    }

    #[test]
    fn series_rejects_outside_disk() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        assert!(matches!(eval_series(&p, c(1.0), 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn series_reports_non_convergence() {
        let p = ParameterSet::real(5.0, &[5.0], &[1.0]).unwrap();
        let r = eval_series_capped(&p, c(0.999), 1e-15, 50);
        assert!(matches!(r, Err(Error::NoConvergence { terms: 50, .. })));
    }

    #[test]
    fn contiguous_examples() {
        let p = ParameterSet::real(0.5, &[1.0, 1.0], &[1.5, 2.0]).unwrap();
        let (l, r) = contiguous_shift(&p, 1.0, c(0.3)).unwrap();
        assert!((l - r).norm() <= 1e-10);
        let p = ParameterSet::real(1.0, &[2.0], &[3.0]).unwrap();
        let (l, r) = contiguous_shift(&p, 2.0, c(-0.4)).unwrap();
        assert!((l - r).norm() <= 1e-10);
        let (l, r) = contiguous_shift(&p, 2.0, c(0.0)).unwrap();
        assert_eq!((l, r), (c(1.0), c(1.0)));
    }

    #[test]
    fn contiguous_needs_shifted_sigma() {
        let p = ParameterSet::real(0.5, &[1.0, 1.0], &[1.5, 2.0]).unwrap();
        let (l, r) = contiguous_shift_unshifted_sigma(&p, 1.0, c(0.3)).unwrap();
        assert!((l - r).norm() > 1e-4);
    }

    #[test]
    fn binomial_examples() {
        assert!((binomial_case(c(1.0), c(1.0)).unwrap().re - 0.5).abs() < 1e-15);
        assert_eq!(binomial_case(c(2.0), c(0.0)).unwrap(), c(1.0));
        assert!((binomial_case(c(0.5), c(3.0)).unwrap().re - 0.5).abs() < 1e-15);
        assert!(binomial_case(c(0.5), c(-2.0)).is_err());
    }

    #[test]
    fn gauss_log_closed_form() {
        // ₂F₁(1,1;2;w) = −ln(1−w)/w
        for &w in &[-30.0, -0.9, -0.3, 0.2, 0.5, 0.7, 0.9, 0.999, 1.0 - 1e-12] {
            let v = hyp2f1(1.0, 1.0, 2.0, w).unwrap();
            let e = -(-w as f64).ln_1p() / w;
            assert!((v - e).abs() < 1e-12 * e.abs(), "w={w}: {v} vs {e}");
        }
    }

    #[test]
    fn gauss_power_closed_form() {
        // ₂F₁(a,b;b;w) = (1−w)^{−a}
        for &w in &[-5.0, 0.75, 0.99] {
            let v = hyp2f1(0.3, 2.2, 2.2, w).unwrap();
            let e = (1.0 - w).powf(-0.3);
            assert!((v - e).abs() < 1e-12 * e, "w={w}");
        }
    }
}
