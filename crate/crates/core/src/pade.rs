//! Padé approximants of `F(σ, A; B; −z)` built from the moments of the
//! order-one density `ρ₁`.

use crate::error::{Error, Result};
use crate::gdensity::QuadratureConfig;
use crate::linalg::{determinant, poly_eval, poly_roots, reciprocal_condition, solve_refined};
use crate::params::{majorization_verdict, ParameterSet};
use crate::stieltjes::Representation;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest denominator degree accepted; Hankel conditioning grows
/// exponentially with it.
pub const MAX_DEGREE: usize = 10;
pub const NORMALITY_THRESHOLD: f64 = 1e-10;
pub const DISTINCT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    /// `m_k = (σ)_k ∏(aᵢ)_k / (∏(bᵢ)_k k!)`
    pub values: Vec<f64>,
    pub params: ParameterSet,
}

impl MomentSequence {
    /// Taylor coefficients of `F(σ, A; B; −z)` in powers of `z`.
    pub fn taylor(&self) -> Vec<f64> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, m)| if k % 2 == 0 { *m } else { -m })
            .collect()
    }

    fn get(&self, k: i64) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.values[k as usize]
        }
    }
}

/// `m_0..=m_K` by the term-ratio recurrence (no overflow: the ratio stays
/// bounded).
pub fn moments(p: &ParameterSet, k_max: usize) -> Result<MomentSequence> {
    if !p.is_real() {
        return Err(Error::Precondition("moments need real parameters".into()));
    }
    let s = p.sigma.re;
    let a = p.a_re();
    let b = p.b_re();
    let mut values = Vec::with_capacity(k_max + 1);
    let mut m = 1.0;
    for k in 0..=k_max {
        values.push(m);
        let kf = k as f64;
        let num: f64 = a.iter().map(|x| x + kf).product::<f64>() * (s + kf);
        let den: f64 = b.iter().map(|x| x + kf).product::<f64>() * (kf + 1.0);
        m *= num / den;
    }
    Ok(MomentSequence {
        values,
        params: p.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadeApproximant {
    pub m: usize,
    pub j: i64,
    /// Ascending coefficients of `P`.
    pub numerator_coeffs: Vec<f64>,
    /// Ascending coefficients of `Q`, `Q(0) = 1`.
    pub denominator_coeffs: Vec<f64>,
    pub hankel_det: f64,
    /// Max relative size of the coefficients of `F·Q − P` at orders
    /// `m+j+1 ..= 2m+j`.
    pub order_residual: f64,
}

impl PadeApproximant {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly_eval(&self.numerator_coeffs, z) / poly_eval(&self.denominator_coeffs, z)
    }

    /// Numerator degree `m + j`.
    pub fn numerator_degree(&self) -> usize {
        (self.m as i64 + self.j) as usize
    }
}

fn hankel(mom: &MomentSequence, shift: i64, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, k| mom.get(shift + (i + k) as i64))
}

/// Monic `π_m^j` (ascending coefficients), orthogonal with respect to
/// `s^{j+1} ρ₁(s) ds`, i.e. the moment functional `μ_n = m_{n+j+1}`.
pub fn orthogonal_polynomial(mom: &MomentSequence, m: usize, j: i64) -> Result<Vec<f64>> {
    if j < -1 {
        return Err(Error::Precondition("j must be ≥ −1".into()));
    }
    if m > MAX_DEGREE {
        return Err(Error::Precondition(format!("m = {m} exceeds {MAX_DEGREE}")));
    }
    if mom.values.len() < 2 * m + (j + 1) as usize {
        return Err(Error::Precondition("not enough moments".into()));
    }
    if m == 0 {
        return Ok(vec![1.0]);
    }
    let shift = j + 1;
    let h = hankel(mom, shift, m);
    let rhs = DVector::from_fn(m, |i, _| -mom.get(shift + (i + m) as i64));
    let p = solve_refined(&h, &rhs)?;
    let mut coeffs: Vec<f64> = p.iter().copied().collect();
    coeffs.push(1.0);
    Ok(coeffs)
}

/// `Q(z) = (−z)^m π_m^j(−1/z)`, normalised to `Q(0) = 1`.
pub fn orthogonal_denominator(mom: &MomentSequence, m: usize, j: i64) -> Result<Vec<f64>> {
    let pi = orthogonal_polynomial(mom, m, j)?;
    Ok((0..=m)
        .map(|d| if d % 2 == 0 { pi[m - d] } else { -pi[m - d] })
        .collect())
}

fn numerator_and_residual(taylor: &[f64], q: &[f64], num_deg: i64, order: usize) -> (Vec<f64>, f64) {
    let coef = |i: usize| -> (f64, f64) {
        let mut s = 0.0;
        let mut mag = 0.0;
        for (k, qk) in q.iter().enumerate().take(i + 1) {
            s += qk * taylor[i - k];
            mag += (qk * taylor[i - k]).abs();
        }
        (s, mag)
    };
    let p: Vec<f64> = if num_deg < 0 {
        vec![0.0]
    } else {
        (0..=num_deg as usize).map(|i| coef(i).0).collect()
    };
    let start = (num_deg + 1).max(0) as usize;
    let resid = (start..=order)
        .map(|i| {
            let (s, mag) = coef(i);
            if mag == 0.0 {
                0.0
            } else {
                s.abs() / mag
            }
        })
        .fold(0.0, f64::max);
    (p, resid)
}

fn check_table_hypotheses(p: &ParameterSet) -> Result<()> {
    if !p.is_real() {
        return Err(Error::Precondition("Padé construction needs real parameters".into()));
    }
    let s = p.sigma.re;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Precondition("Padé construction needs 0 < σ ≤ 1".into()));
    }
    if !majorization_verdict(&p.a_re(), &p.b_re())?.weak_supermajorized {
        return Err(Error::Precondition("Padé construction needs B ≺^W A".into()));
    }
    Ok(())
}

/// The `[m+j/m]` approximant, denominator from orthogonal polynomials and
/// numerator from series matching.
pub fn pade(p: &ParameterSet, m: usize, j: i64) -> Result<PadeApproximant> {
    check_table_hypotheses(p)?;
    if j < -1 || (j == -1 && m == 0) {
        return Err(Error::Precondition("need j ≥ −1 and m + j ≥ 0".into()));
    }
    let order = (2 * m as i64 + j) as usize;
    let mom = moments(p, order + 1)?;
    pade_from_moments(&mom, m, j)
}

pub fn pade_from_moments(mom: &MomentSequence, m: usize, j: i64) -> Result<PadeApproximant> {
    let order = (2 * m as i64 + j) as usize;
    let q = orthogonal_denominator(mom, m, j)?;
    let (num, order_residual) = numerator_and_residual(&mom.taylor(), &q, m as i64 + j, order);
    Ok(PadeApproximant {
        m,
        j,
        numerator_coeffs: num,
        denominator_coeffs: q,
        hankel_det: determinant(&hankel(mom, j + 1, m)),
        order_residual,
    })
}

/// `[l/n]` by the direct linear system for `Q` (any `l, n ≥ 0`).
pub fn pade_direct(taylor: &[f64], l: usize, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if taylor.len() < l + n + 1 {
        return Err(Error::Precondition("not enough coefficients".into()));
    }
    let c = |i: i64| if i < 0 { 0.0 } else { taylor[i as usize] };
    let mut q = vec![1.0];
    if n > 0 {
        // Σ_{k=1..n} q_k c_{l+i−k} = −c_{l+i},  i = 1..n
        let mat = DMatrix::from_fn(n, n, |i, k| c(l as i64 + i as i64 + 1 - (k as i64 + 1)));
        let rhs = DVector::from_fn(n, |i, _| -c(l as i64 + i as i64 + 1));
        q.extend(solve_refined(&mat, &rhs)?.iter());
    }
    let (num, _) = numerator_and_residual(taylor, &q, l as i64, l + n);
    Ok((num, q))
}

/// `C(l/n) = det[c_{l−n+1+i+k}]_{i,k<n}` (moments in place of the signed
/// Taylor coefficients; only the modulus matters) and the reciprocal
/// condition number of the matrix.
pub fn table_determinant(mom: &MomentSequence, l: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (1.0, 1.0);
    }
    let h = hankel(mom, l as i64 - n as i64 + 1, n);
    (determinant(&h), reciprocal_condition(&h))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityTable {
    /// `normal[l][n]` for the `[l/n]` entry.
    pub normal: Vec<Vec<bool>>,
    /// Smallest reciprocal condition number among the four matrices each
    /// entry needs.
    pub det_ratio: Vec<Vec<f64>>,
    /// Entries equal to another entry as rational functions.
    pub duplicates: Vec<((usize, usize), (usize, usize))>,
}

impl NormalityTable {
    pub fn all_normal(&self) -> bool {
        self.normal.iter().flatten().all(|&b| b)
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

fn same_rational(p1: &[f64], q1: &[f64], p2: &[f64], q2: &[f64]) -> bool {
    let l = poly_mul(p1, q2);
    let r = poly_mul(p2, q1);
    let n = l.len().max(r.len());
    let mut diff = 0.0f64;
    let mut mag = 0.0f64;
    for i in 0..n {
        let a = l.get(i).copied().unwrap_or(0.0);
        let b = r.get(i).copied().unwrap_or(0.0);
        diff = diff.max((a - b).abs());
        mag = mag.max(a.abs()).max(b.abs());
    }
    diff <= DISTINCT_TOL * mag
}

/// Normality of every `[l/n]`, `l ≤ l_max`, `n ≤ n_max`: the four
/// determinants `C(l/n), C(l+1/n), C(l/n+1), C(l+1/n+1)` are nonzero
/// (reciprocal condition above `1e−10`) and no two entries coincide.
pub fn normality_check(p: &ParameterSet, l_max: usize, n_max: usize) -> Result<NormalityTable> {
    check_table_hypotheses(p)?;
    let mom = moments(p, l_max + n_max + 3)?;
    let taylor = mom.taylor();
    let mut normal = vec![vec![true; n_max + 1]; l_max + 1];
    let mut det_ratio = vec![vec![f64::INFINITY; n_max + 1]; l_max + 1];
    let mut entries: Vec<((usize, usize), Option<(Vec<f64>, Vec<f64>)>)> = Vec::new();
    for l in 0..=l_max {
        for n in 0..=n_max {
            let mut worst = f64::INFINITY;
            for (dl, dn) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let (d, rcond) = table_determinant(&mom, l + dl, n + dn);
                worst = worst.min(if d == 0.0 { 0.0 } else { rcond });
            }
            det_ratio[l][n] = worst;
            if !(worst > NORMALITY_THRESHOLD) {
                normal[l][n] = false;
            }
            entries.push(((l, n), pade_direct(&taylor, l, n).ok()));
        }
    }
    let mut duplicates = Vec::new();
    for i in 0..entries.len() {
        for k in i + 1..entries.len() {
            if let (Some((p1, q1)), Some((p2, q2))) = (&entries[i].1, &entries[k].1) {
                if same_rational(p1, q1, p2, q2) {
                    duplicates.push((entries[i].0, entries[k].0));
                    let (a, b) = (entries[i].0, entries[k].0);
                    normal[a.0][a.1] = false;
                    normal[b.0][b.1] = false;
                }
            }
        }
    }
    for (idx, e) in entries.iter() {
        if e.is_none() {
            normal[idx.0][idx.1] = false;
        }
    }
    Ok(NormalityTable {
        normal,
        det_ratio,
        duplicates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub m: usize,
    pub value: Complex64,
    pub error: f64,
}

/// `|[m+j/m](z) − F(−z)|` for `m = 1..=m_max`, reference from the integral
/// representation.
pub fn convergence_check(p: &ParameterSet, z: Complex64, m_max: usize, j: i64, cfg: &QuadratureConfig) -> Result<Vec<ConvergencePoint>> {
    check_table_hypotheses(p)?;
    let reference = if z.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let tight = QuadratureConfig {
            abs_tol: cfg.abs_tol.min(1e-14),
            rel_tol: cfg.rel_tol.min(1e-14),
            ..cfg.clone()
        };
        Representation::new(p, &tight)?.eval(z)?
    };
    let mom = moments(p, 2 * m_max + (j + 2).max(0) as usize)?;
    (1..=m_max)
        .map(|m| {
            let a = pade_from_moments(&mom, m, j)?;
            let v = a.eval(z);
            Ok(ConvergencePoint {
                m,
                value: v,
                error: (v - reference).norm(),
            })
        })
        .collect()
}

/// Normalised `|⟨π_m, π_n⟩| / (‖π_m‖‖π_n‖)` for `m ≠ n ≤ n_max` with
/// weight `s^{j+1} ρ₁(s)`, by quadrature on the sampled density.
pub fn orthogonality_residuals(p: &ParameterSet, n_max: usize, j: i64, cfg: &QuadratureConfig) -> Result<Vec<(usize, usize, f64)>> {
    let mom = moments(p, 2 * n_max + (j + 2) as usize)?;
    let rep = Representation::order_one(p, cfg)?;
    let polys: Vec<Vec<f64>> = (0..=n_max).map(|m| orthogonal_polynomial(&mom, m, j)).collect::<Result<_>>()?;
    let ip = |a: &[f64], b: &[f64]| -> f64 {
        rep.integrate(|s, _| {
            let w = s.powi((j + 1) as i32);
            poly_eval(a, Complex64::new(s, 0.0)) * poly_eval(b, Complex64::new(s, 0.0)) * w
        })
        .value
        .re
    };
    let norms: Vec<f64> = polys.iter().map(|p| ip(p, p).abs().sqrt()).collect();
    let mut out = Vec::new();
    for m in 0..=n_max {
        for n in m + 1..=n_max {
            out.push((m, n, ip(&polys[m], &polys[n]).abs() / (norms[m] * norms[n])));
        }
    }
    Ok(out)
}

/// Roots of `π_m^j`.
pub fn orthogonal_roots(mom: &MomentSequence, m: usize, j: i64) -> Result<Vec<Complex64>> {
    Ok(poly_roots(&orthogonal_polynomial(mom, m, j)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_params() -> ParameterSet {
        ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap()
    }

    #[test]
    fn moments_of_log_case() {
        let m = moments(&log_params(), 6).unwrap();
        for (k, v) in m.values.iter().enumerate() {
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn binomial_moments() {
        let p = ParameterSet::real(0.5, &[1.0], &[1.0]).unwrap();
        let m = moments(&p, 3).unwrap();
        assert!((m.values[2] - 0.375).abs() < 1e-15);
    }

    #[test]
    fn first_orthogonal_polynomials() {
        let mom = moments(&log_params(), 6).unwrap();
        let p = orthogonal_polynomial(&mom, 1, -1).unwrap();
        assert!((p[0] + 0.5).abs() < 1e-14);
        let p = orthogonal_polynomial(&mom, 1, 0).unwrap();
        assert!((p[0] + 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(orthogonal_polynomial(&mom, 0, 0).unwrap(), vec![1.0]);
    }

    #[test]
    fn zero_one_entry() {
        let a = pade(&log_params(), 1, -1).unwrap();
        assert_eq!(a.numerator_coeffs.len(), 1);
        assert!((a.denominator_coeffs[1] - 0.5).abs() < 1e-14);
        assert!((a.numerator_coeffs[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn m_zero_is_taylor_polynomial() {
        let a = pade(&log_params(), 0, 3).unwrap();
        assert_eq!(a.denominator_coeffs, vec![1.0]);
        let expect = [1.0, -0.5, 1.0 / 3.0, -0.25];
        for (x, y) in a.numerator_coeffs.iter().zip(expect) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn direct_and_orthogonal_agree() {
        let mom = moments(&log_params(), 12).unwrap();
        let a = pade_from_moments(&mom, 3, 1).unwrap();
        let (p, q) = pade_direct(&mom.taylor(), 4, 3).unwrap();
        for (x, y) in a.denominator_coeffs.iter().zip(&q) {
            assert!((x - y).abs() < 1e-10);
        }
        for (x, y) in a.numerator_coeffs.iter().zip(&p) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn binomial_table_is_degenerate() {
        let p = ParameterSet::real(1.0, &[1.0], &[1.0]).unwrap();
        let t = normality_check(&p, 2, 2).unwrap();
        assert!(!t.all_normal());
    }

    #[test]
    fn convergence_at_origin_is_exact() {
        let c = convergence_check(&log_params(), Complex64::new(0.0, 0.0), 3, 0, &QuadratureConfig::default()).unwrap();
        assert!(c.iter().all(|p| p.error < 1e-12));
    }

    #[test]
    fn log_table_is_normal() {
        assert!(normality_check(&log_params(), 4, 4).unwrap().all_normal());
    }

    #[test]
    fn orthogonal_roots_in_unit_interval() {
        let p = ParameterSet::real(0.5, &[1.0, 3.0], &[2.0, 2.0]).unwrap();
        let mom = moments(&p, 30).unwrap();
        for r in orthogonal_roots(&mom, 5, 1).unwrap() {
            assert!(r.im.abs() < 1e-10 && r.re > 0.0 && r.re < 1.0);
        }
    }
}
