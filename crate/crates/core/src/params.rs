//! Parameter vectors, Pochhammer symbols, ψ, majorization and the
//! elementary-symmetric chain condition.

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `(σ, A, B)` for `₍q+1₎F_q(σ, A; B; z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub sigma: Complex64,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl ParameterSet {
    pub fn new(sigma: Complex64, a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                upper: a.len(),
                lower: b.len(),
            });
        }
        for &bi in &b {
            if bi.im == 0.0 && bi.re <= 0.0 && bi.re == bi.re.round() {
                return Err(Error::PoleInDenominator(bi.re));
            }
        }
        Ok(ParameterSet { sigma, a, b })
    }

    /// Real parameters; the common case.
    pub fn real(sigma: f64, a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(
            Complex64::new(sigma, 0.0),
            a.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            b.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn q(&self) -> usize {
        self.a.len()
    }

    pub fn is_real(&self) -> bool {
        self.sigma.im == 0.0 && self.a.iter().chain(self.b.iter()).all(|z| z.im == 0.0)
    }

    pub fn sigma_re(&self) -> f64 {
        self.sigma.re
    }

    pub fn a_re(&self) -> Vec<f64> {
        self.a.iter().map(|z| z.re).collect()
    }

    pub fn b_re(&self) -> Vec<f64> {
        self.b.iter().map(|z| z.re).collect()
    }

    pub fn psi(&self) -> Complex64 {
        self.b.iter().zip(self.a.iter()).map(|(b, a)| b - a).sum()
    }

    /// Removes every pair `aᵢ == bⱼ` (exact equality).
    pub fn cancelled(&self) -> ParameterSet {
        let mut a = self.a.clone();
        let mut b = Vec::with_capacity(self.b.len());
        for &bj in &self.b {
            if let Some(pos) = a.iter().position(|&ai| ai == bj) {
                a.remove(pos);
            } else {
                b.push(bj);
            }
        }
        ParameterSet {
            sigma: self.sigma,
            a,
            b,
        }
    }

    /// Every parameter shifted by `delta` (σ untouched).
    pub fn shifted(&self, delta: f64) -> ParameterSet {
        ParameterSet {
            sigma: self.sigma,
            a: self.a.iter().map(|z| z + delta).collect(),
            b: self.b.iter().map(|z| z + delta).collect(),
        }
    }

    pub fn with_sigma(&self, sigma: f64) -> ParameterSet {
        ParameterSet {
            sigma: Complex64::new(sigma, 0.0),
            ..self.clone()
        }
    }

    /// `∏ Γ(bᵢ)/Γ(aᵢ)`, the normalising prefactor of the densities.
    pub fn gamma_prefactor(&self) -> Complex64 {
        let ln: Complex64 = self
            .b
            .iter()
            .zip(self.a.iter())
            .map(|(&b, &a)| ln_gamma(b) - ln_gamma(a))
            .sum();
        ln.exp()
    }
}

/// Rising factorial with overflow flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pochhammer {
    pub value: Complex64,
    pub overflow: bool,
}

const DIRECT_PRODUCT_LIMIT: u64 = 64;

/// `(a)ₙ = a(a+1)⋯(a+n−1)`; log-gamma route for long products.
pub fn pochhammer(a: Complex64, n: u64) -> Pochhammer {
    if n == 0 {
        return Pochhammer {
            value: Complex64::new(1.0, 0.0),
            overflow: false,
        };
    }
    // A factor a+k == 0 makes the product vanish exactly.
    let hits_zero = a.im == 0.0 && a.re <= 0.0 && a.re == a.re.round() && (-a.re) < n as f64;
    if hits_zero {
        return Pochhammer {
            value: Complex64::new(0.0, 0.0),
            overflow: false,
        };
    }
    let value = if n <= DIRECT_PRODUCT_LIMIT {
        (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
    } else {
        (ln_gamma(a + n as f64) - ln_gamma(a)).exp()
    };
    let overflow = !(value.re.is_finite() && value.im.is_finite());
    Pochhammer {
        value: if overflow {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            value
        },
        overflow,
    }
}

pub fn pochhammer_real(a: f64, n: u64) -> f64 {
    pochhammer(Complex64::new(a, 0.0), n).value.re
}

/// `ψ = Σ (bₖ − aₖ)`.
pub fn psi(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            upper: a.len(),
            lower: b.len(),
        });
    }
    Ok(b.iter().zip(a.iter()).map(|(b, a)| b - a).sum())
}

/// Outcome of comparing `B` against `A` for (weak super)majorization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    /// `B ≺^W A`
    pub weak_supermajorized: bool,
    /// `B ≺ A`
    pub majorized: bool,
    pub psi: f64,
    pub chain_holds: bool,
    pub reason: Option<String>,
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|p, q| p.partial_cmp(q).expect("NaN parameter"));
    v
}

/// Sorts both vectors ascending and compares prefix sums exactly (`≤`).
pub fn majorization_verdict(a: &[f64], b: &[f64]) -> Result<MajorizationVerdict> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            upper: a.len(),
            lower: b.len(),
        });
    }
    let sa = sorted(a);
    let sb = sorted(b);
    let psi: f64 = sb.iter().sum::<f64>() - sa.iter().sum::<f64>();
    let positive = sa.iter().chain(sb.iter()).all(|&x| x > 0.0);
    let chain_holds = positive && chain_condition(a, b);
    if !positive {
        return Ok(MajorizationVerdict {
            weak_supermajorized: false,
            majorized: false,
            psi,
            chain_holds,
            reason: Some("nonpositive entry".into()),
        });
    }
    let mut pa = 0.0;
    let mut pb = 0.0;
    for (k, (x, y)) in sa.iter().zip(sb.iter()).enumerate() {
        pa += x;
        pb += y;
        if pa > pb {
            return Ok(MajorizationVerdict {
                weak_supermajorized: false,
                majorized: false,
                psi,
                chain_holds,
                reason: Some(format!("prefix sum {} fails: {pa} > {pb}", k + 1)),
            });
        }
    }
    Ok(MajorizationVerdict {
        weak_supermajorized: true,
        majorized: psi == 0.0,
        psi,
        chain_holds,
        reason: None,
    })
}

/// `B ≺^W A` shortcut.
pub fn weakly_supermajorized(a: &[f64], b: &[f64]) -> bool {
    majorization_verdict(a, b)
        .map(|v| v.weak_supermajorized)
        .unwrap_or(false)
}

/// All elementary symmetric polynomials `e₀..e_q` by the prefix recurrence.
pub fn elementary_symmetric_all(x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; x.len() + 1];
    e[0] = 1.0;
    for (i, &xi) in x.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += xi * e[k - 1];
        }
    }
    e
}

pub fn elementary_symmetric(x: &[f64], k: usize) -> Result<f64> {
    if k > x.len() {
        return Err(Error::Domain(format!("k = {k} exceeds q = {}", x.len())));
    }
    Ok(elementary_symmetric_all(x)[k])
}

/// `e_q(B)/e_q(A) ≥ … ≥ e₁(B)/e₁(A) ≥ 1`, tested by cross-multiplication.
pub fn chain_condition(a: &[f64], b: &[f64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ea = elementary_symmetric_all(a);
    let eb = elementary_symmetric_all(b);
    // e_k(B)/e_k(A) ≥ e_{k-1}(B)/e_{k-1}(A)  ⇔  e_k(B)e_{k-1}(A) ≥ e_{k-1}(B)e_k(A)
    // (all e_k positive for positive entries); k = 1 gives e₁(B) ≥ e₁(A).
    (1..=a.len()).all(|k| eb[k] * ea[k - 1] >= eb[k - 1] * ea[k])
}

/// Random `(A, B)` with `B ≺^W A`: `B` is a doubly-stochastic mix of `A`
/// plus nonnegative increments summing to `psi`.
pub fn random_supermajorized<R: rand::Rng>(rng: &mut R, q: usize, psi: f64) -> (Vec<f64>, Vec<f64>) {
    let a: Vec<f64> = (0..q).map(|_| rng.gen_range(0.5..3.0)).collect();
    let mut b = vec![0.0; q];
    // convex combination of three random permutations
    let mut weights: Vec<f64> = (0..3).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    for w in weights {
        let mut perm: Vec<usize> = (0..q).collect();
        for i in (1..q).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        for (i, &p) in perm.iter().enumerate() {
            b[i] += w * a[p];
        }
    }
    let mut inc: Vec<f64> = (0..q).map(|_| rng.gen_range(0.0..1.0)).collect();
    let s: f64 = inc.iter().sum();
    inc.iter_mut().for_each(|d| *d *= psi / s);
    for (bi, d) in b.iter_mut().zip(inc) {
        *bi += d;
    }
    (a, b)
}

/// Random positive pair that satisfies the chain condition but is not
/// weakly supermajorized; `None` if the rejection sampler gives up.
pub fn random_chain_not_supermajorized<R: rand::Rng>(rng: &mut R, q: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    for _ in 0..10_000 {
        let a: Vec<f64> = (0..q).map(|_| rng.gen_range(0.2..4.0)).collect();
        let b: Vec<f64> = (0..q).map(|_| rng.gen_range(0.2..4.0)).collect();
        if chain_condition(&a, &b) && !weakly_supermajorized(&a, &b) {
            return Some((a, b));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(c(2.5), 0).value, c(1.0));
        assert_eq!(pochhammer(c(1.0), 5).value, c(120.0));
        assert!((pochhammer(c(0.5), 2).value.re - 0.75).abs() < 1e-15);
        assert_eq!(pochhammer(c(-2.0), 5).value, c(0.0));
        let big = pochhammer(c(1.0), 200);
        assert!(big.overflow);
        assert!(big.value.re.is_infinite());
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&[c(1.0), c(2.0)], &[c(1.0), c(2.0)]).unwrap(), c(0.0));
        assert_eq!(psi(&[c(1.0), c(1.0)], &[c(2.0), c(3.0)]).unwrap(), c(3.0));
        assert_eq!(psi(&[c(0.5)], &[c(1.5)]).unwrap(), c(1.0));
        assert!(psi(&[c(0.5)], &[]).is_err());
    }

    #[test]
    fn majorization_examples() {
        let v = majorization_verdict(&[1.0, 3.0], &[2.0, 2.0]).unwrap();
        assert!(v.weak_supermajorized && v.majorized);
        let v = majorization_verdict(&[2.0, 2.0], &[1.0, 3.0]).unwrap();
        assert!(!v.weak_supermajorized);
        let v = majorization_verdict(&[1.0, 2.0], &[1.5, 2.5]).unwrap();
        assert!(v.weak_supermajorized && !v.majorized);
        assert_eq!(v.psi, 1.0);
        let v = majorization_verdict(&[-1.0, 2.0], &[1.5, 2.5]).unwrap();
        assert!(!v.weak_supermajorized);
        assert!(v.reason.is_some());
    }

    #[test]
    fn unsorted_input_is_normalized() {
        let v = majorization_verdict(&[3.0, 1.0], &[2.0, 2.0]).unwrap();
        assert!(v.majorized);
    }

    #[test]
    fn elementary_symmetric_examples() {
        let x = [1.0, 2.0, 3.0];
        assert_eq!(elementary_symmetric(&x, 0).unwrap(), 1.0);
        assert_eq!(elementary_symmetric(&x, 2).unwrap(), 11.0);
        assert_eq!(elementary_symmetric(&x, 3).unwrap(), 6.0);
        assert!(elementary_symmetric(&x, 4).is_err());
    }

    #[test]
    fn chain_examples() {
        assert!(chain_condition(&[1.0, 3.0], &[2.0, 2.0]));
        assert!(chain_condition(&[1.0, 1.0], &[1.0, 1.0]));
        assert!(!chain_condition(&[2.0, 2.0], &[1.0, 3.0]));
    }

    #[test]
    fn cancellation_removes_equal_pairs() {
        let p = ParameterSet::real(0.7, &[1.3, 2.0], &[1.3, 3.0]).unwrap().cancelled();
        assert_eq!(p.a, vec![c(2.0)]);
        assert_eq!(p.b, vec![c(3.0)]);
    }

    #[test]
    fn rejects_nonpositive_integer_lower_parameter() {
        assert!(ParameterSet::real(1.0, &[1.0], &[-2.0]).is_err());
        assert!(ParameterSet::real(1.0, &[1.0], &[-2.5]).is_ok());
    }
}
