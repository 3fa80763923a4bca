//! Stieltjes-type integral representations of `₍q+1₎F_q(σ, A; B; −z)`.
//!
//! The main form is `F(−z) = ∫₀¹ ρ(s) (1 + sz)^{−σ} ds` with
//! `ρ(s) = ∏Γ(bᵢ)/Γ(aᵢ) · G(s | B; A)/s`. It continues `F` to the whole
//! plane cut along `(−∞, −1]`.

use crate::error::{Error, Result};
use crate::gamma::{gamma_real, ln_gamma, ln_gamma_real};
use crate::gdensity::{GKernelSpec, Kernel, QuadratureConfig, ZeroExponent};
use crate::hypeval::{eval_series, hyp2f1_near_one};
use crate::params::{majorization_verdict, pochhammer_real, ParameterSet};
use crate::quad::{Estimate, SampledRule, TanhSinh};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    /// `(0, 1)`, the `ρ` form.
    UnitInterval,
    /// `(1, ∞)`, the `μ` form (`u = 1/s`).
    FromOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// How the continuous part of the measure is computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ContinuousPart {
    /// `prefactor · G(s)/s` with `G` from `kernel`.
    Kernel,
    /// `prefactor · K · t^{a₂−1} ₂F₁(b₁−a₁+1, b₂−a₁+1; 2; 1−t)` (`q = 2`,
    /// `ψ = 0`).
    LimitQ2 {
        coefficient: f64,
        a1: f64,
        a2: f64,
        b1: f64,
        b2: f64,
    },
    None,
}

/// A representing measure: continuous density plus an optional atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub support: Support,
    pub kernel: GKernelSpec,
    pub prefactor: Complex64,
    pub atom: Option<Atom>,
    pub continuous: ContinuousPart,
    pub zero_exponent: ZeroExponent,
    pub one_exponent: f64,
}

impl DensitySpec {
    /// Density of `F(σ, A; B; −z)` in the `ρ` form (`Re ψ > 0`).
    pub fn rho(p: &ParameterSet) -> Result<Self> {
        check_representable(p)?;
        let red = p.cancelled();
        let kernel = GKernelSpec::from_params(&red);
        Ok(DensitySpec {
            support: Support::UnitInterval,
            prefactor: red.gamma_prefactor(),
            atom: None,
            continuous: ContinuousPart::Kernel,
            zero_exponent: kernel.zero_exponent(),
            one_exponent: kernel.one_exponent(),
            kernel,
        })
    }

    /// The order-one density `ρ₁` with kernel `top = (1, B)`,
    /// `bottom = (σ, A)` and prefactor `∏Γ(bᵢ)/Γ(aᵢ) / Γ(σ)`.
    pub fn rho1(p: &ParameterSet) -> Result<Self> {
        if p.sigma.re <= 0.0 {
            return Err(Error::Precondition("Re σ must be positive".into()));
        }
        if p.a.iter().any(|a| a.re <= 0.0) {
            return Err(Error::Precondition("Re aᵢ must be positive".into()));
        }
        if p.psi().re + 1.0 <= p.sigma.re {
            return Err(Error::Precondition("need Re ψ + 1 > Re σ".into()));
        }
        let kernel = GKernelSpec::rho1(p).cancelled();
        let prefactor = (p.gamma_prefactor().ln() - ln_gamma(p.sigma)).exp();
        Ok(DensitySpec {
            support: Support::UnitInterval,
            prefactor,
            atom: None,
            continuous: ContinuousPart::Kernel,
            zero_exponent: kernel.zero_exponent(),
            one_exponent: kernel.one_exponent(),
            kernel,
        })
    }

    /// Density value at `s ∈ (0, 1)` (continuous part only).
    pub fn density(&self, s: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain(format!("s = {s} outside (0, 1)")));
        }
        match &self.continuous {
            ContinuousPart::Kernel => {
                let k = Kernel::new(&self.kernel, cfg)?;
                Ok(self.prefactor * k.eval_pair(s, 1.0 - s).value / s)
            }
            ContinuousPart::LimitQ2 { coefficient, a1, a2, b1, b2 } => Ok(self.prefactor
                * limit_q2_density(s, 1.0 - s, *coefficient, *a1, *a2, *b1, *b2)),
            ContinuousPart::None => Ok(Complex64::new(0.0, 0.0)),
        }
    }
}

fn limit_q2_density(t: f64, tc: f64, coef: f64, a1: f64, a2: f64, b1: f64, b2: f64) -> Complex64 {
    if coef == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let f = hyp2f1_near_one(b1 - a1 + 1.0, b2 - a1 + 1.0, 2.0, t).unwrap_or(f64::NAN);
    let _ = tc;
    Complex64::new(coef * t.powf(a2 - 1.0) * f, 0.0)
}

fn check_representable(p: &ParameterSet) -> Result<()> {
    if p.a.iter().any(|a| a.re <= 0.0) {
        return Err(Error::Precondition("representation needs Re aᵢ > 0".into()));
    }
    let psi = p.cancelled().psi();
    if p.cancelled().q() > 0 && psi.re <= 0.0 {
        return Err(Error::Precondition(format!(
            "representation needs Re ψ > 0 (ψ = {psi})"
        )));
    }
    Ok(())
}

/// `ψ = 0` up to rounding in the parameter sums.
pub fn psi_vanishes(p: &ParameterSet) -> bool {
    let scale: f64 = p.a.iter().chain(p.b.iter()).map(|x| x.norm()).sum();
    p.psi().norm() <= 1e-12 * scale.max(1.0)
}

fn check_off_cut(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= -1.0 {
        return Err(Error::Domain(format!("z = {z} lies on the cut (−∞, −1]")));
    }
    Ok(())
}

/// A density sampled once on tanh-sinh nodes, reused for many `z`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub spec: DensitySpec,
    samples: Option<SampledRule>,
    /// Exponent in `(1 + sz)^{−exponent}`.
    pub exponent: Complex64,
    abs_tol: f64,
    rel_tol: f64,
}

impl Representation {
    fn from_spec(spec: DensitySpec, exponent: Complex64, cfg: &QuadratureConfig) -> Result<Self> {
        let rule = cfg.tanh_sinh();
        let samples = match &spec.continuous {
            ContinuousPart::Kernel => {
                let k = Kernel::new(&spec.kernel, cfg)?;
                let pref = spec.prefactor;
                Some(SampledRule::sample(&rule, |x, xc| pref * k.eval_pair(x, xc).value / x))
            }
            ContinuousPart::LimitQ2 { coefficient, a1, a2, b1, b2 } => {
                let (c, a1, a2, b1, b2) = (*coefficient, *a1, *a2, *b1, *b2);
                let pref = spec.prefactor;
                Some(SampledRule::sample(&rule, |x, xc| pref * limit_q2_density(x, xc, c, a1, a2, b1, b2)))
            }
            ContinuousPart::None => None,
        };
        Ok(Representation {
            spec,
            samples,
            exponent,
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
        })
    }

    /// Representation of `F(σ, A; B; −z)`. Handles `ψ > 0`, full
    /// cancellation (binomial case) and `ψ = 0` with `q = 2` (limit measure).
    pub fn new(p: &ParameterSet, cfg: &QuadratureConfig) -> Result<Self> {
        let red = p.cancelled();
        if p.a.iter().any(|a| a.re <= 0.0) {
            return Err(Error::Precondition("representation needs Re aᵢ > 0".into()));
        }
        if red.q() == 0 {
            let spec = DensitySpec {
                support: Support::UnitInterval,
                kernel: GKernelSpec {
                    top: vec![],
                    bottom: vec![],
                },
                prefactor: Complex64::new(1.0, 0.0),
                atom: Some(Atom {
                    location: 1.0,
                    weight: 1.0,
                }),
                continuous: ContinuousPart::None,
                zero_exponent: ZeroExponent {
                    a: f64::INFINITY,
                    multiplicity: 0,
                },
                one_exponent: -1.0,
            };
            return Self::from_spec(spec, p.sigma, cfg);
        }
        if psi_vanishes(&red) {
            if red.q() == 2 && red.is_real() {
                let a = red.a_re();
                let b = red.b_re();
                let (spec, _) = limit_measure_q2(red.sigma.re, a[0], a[1], b[0], b[1], cfg)?;
                return Self::from_spec(spec, p.sigma, cfg);
            }
            return Err(Error::Precondition(
                "ψ = 0 with q ≥ 3: representing measure not available".into(),
            ));
        }
        Self::from_spec(DensitySpec::rho(p)?, p.sigma, cfg)
    }

    /// Order-one representation `F(−z) = ∫ ρ₁(s)/(1 + sz) ds`.
    pub fn order_one(p: &ParameterSet, cfg: &QuadratureConfig) -> Result<Self> {
        Self::from_spec(DensitySpec::rho1(p)?, Complex64::new(1.0, 0.0), cfg)
    }

    /// `∫ g(s, 1−s) dμ(s)` over the sampled density plus the atom.
    pub fn integrate<G: Fn(f64, f64) -> Complex64>(&self, g: G) -> Estimate {
        let mut est = match &self.samples {
            Some(s) => s.integrate_with(&g, self.abs_tol, self.rel_tol),
            None => Estimate {
                value: Complex64::new(0.0, 0.0),
                error: 0.0,
                evals: 0,
                converged: true,
            },
        };
        if let Some(atom) = self.spec.atom {
            let w = self.spec.prefactor * atom.weight;
            est.value += w * g(atom.location, 1.0 - atom.location);
        }
        est
    }

    /// `F(σ, A; B; −z)` for `z ∉ (−∞, −1]`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_estimate(z)?.value)
    }

    pub fn eval_estimate(&self, z: Complex64) -> Result<Estimate> {
        self.eval_with_exponent(z, self.exponent)
    }

    /// `∫ (1 + sz)^{−e} dμ(s)`. A measure from [`Representation::new`] does
    /// not depend on `σ`, so this is `F(e, A; B; −z)` for any `e`.
    pub fn eval_with_exponent(&self, z: Complex64, e: Complex64) -> Result<Estimate> {
        check_off_cut(z)?;
        if z.norm() == 0.0 || e.norm() == 0.0 {
            return Ok(Estimate {
                value: Complex64::new(1.0, 0.0),
                error: 0.0,
                evals: 0,
                converged: true,
            });
        }
        Ok(self.integrate(|s, _| (-e * (Complex64::new(1.0, 0.0) + s * z).ln()).exp()))
    }

    /// `d/dz F(σ, A; B; −z) = −σ ∫ s ρ(s) (1 + sz)^{−σ−1} ds`.
    pub fn eval_derivative(&self, z: Complex64) -> Result<Complex64> {
        check_off_cut(z)?;
        let e = self.exponent;
        let v = self.integrate(|s, _| s * (-(e + 1.0) * (Complex64::new(1.0, 0.0) + s * z).ln()).exp());
        Ok(-e * v.value)
    }

    /// `∫ s^k dμ(s)`.
    pub fn moment(&self, k: f64) -> Estimate {
        self.integrate(|s, _| Complex64::new(s.powf(k), 0.0))
    }
}

/// `F(σ, A; B; −z)` through the integral representation.
pub fn eval_stieltjes(p: &ParameterSet, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_off_cut(z)?;
    Representation::new(p, cfg)?.eval(z)
}

/// `ρ₁(s)`, the density of `F(−z)` as an order-one Stieltjes function.
pub fn density_rho1(s: f64, p: &ParameterSet, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(DensitySpec::rho1(p)?.density(s, cfg)?.re)
}

// Exact order -----------------------------------------------------------------

fn check_order_hypotheses(p: &ParameterSet, epsilon: f64) -> Result<()> {
    if !p.is_real() {
        return Err(Error::Precondition("order test needs real parameters".into()));
    }
    let v = majorization_verdict(&p.a_re(), &p.b_re())?;
    if !v.weak_supermajorized {
        return Err(Error::Precondition("order test needs B ≺^W A".into()));
    }
    let a_min = p.a_re().into_iter().fold(f64::INFINITY, f64::min);
    if !(p.sigma.re > 0.0 && p.sigma.re <= a_min) {
        return Err(Error::Precondition("order test needs 0 < σ ≤ min A".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("ε = {epsilon} outside (0, 1)")));
    }
    Ok(())
}

fn phi_kernel(p: &ParameterSet, epsilon: f64) -> GKernelSpec {
    let s = p.sigma.re;
    let mut top = vec![Complex64::new(1.0 - epsilon + s, 0.0)];
    top.extend_from_slice(&p.b);
    let mut bottom = vec![Complex64::new(s, 0.0)];
    bottom.extend_from_slice(&p.a);
    GKernelSpec { top, bottom }
}

/// `Φ_ε(y) = Γ(1−ε) y^{σ−ε} G^{q+1,0}_{q+1,q+1}(1/y | 1−ε+σ, B; σ, A)`.
pub fn phi_epsilon(y: f64, epsilon: f64, p: &ParameterSet, cfg: &QuadratureConfig) -> Result<f64> {
    check_order_hypotheses(p, epsilon)?;
    if !(y > 1.0) {
        return Err(Error::Domain(format!("y = {y} must exceed 1")));
    }
    let k = Kernel::new(&phi_kernel(p, epsilon), cfg)?;
    let g = k.eval_real(1.0 / y, 1.0 - 1.0 / y)?;
    Ok(gamma_real(1.0 - epsilon) * y.powf(p.sigma.re - epsilon) * g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderTestResult {
    pub epsilon: f64,
    /// Heights `y`; entry `i` of `ratios` is `Φ_ε(2y)/Φ_ε(y)` at `y_grid[i]`.
    pub y_grid: Vec<f64>,
    pub ratios: Vec<f64>,
    pub limit_estimate: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passes: bool,
    /// Set when the outcome has no representing-measure backing
    /// (`ψ = 0` with `q ≥ 3`).
    pub advisory: bool,
}

pub const ORDER_TOLERANCE: f64 = 0.05;

/// Doubling ratios of `Φ_ε` at `y = y_max/2^k`; the limit estimate is the
/// ratio at `y_max` (extrapolated in `1/ln y` when the kernel has a
/// logarithmic endpoint), compared with `2^{−ε}` within 5%.
pub fn exact_order_test(p: &ParameterSet, epsilon: f64, y_max: f64, cfg: &QuadratureConfig) -> Result<OrderTestResult> {
    check_order_hypotheses(p, epsilon)?;
    let k = Kernel::new(&phi_kernel(p, epsilon), cfg)?;
    let phi = |y: f64| -> Result<f64> {
        let g = k.eval_real(1.0 / y, 1.0 - 1.0 / y)?;
        Ok(gamma_real(1.0 - epsilon) * y.powf(p.sigma.re - epsilon) * g)
    };
    let mut y_grid = Vec::new();
    let mut y = y_max;
    while y > 2.0 && y_grid.len() < 12 {
        y_grid.push(y);
        y /= 2.0;
    }
    y_grid.reverse();
    let mut ratios = Vec::with_capacity(y_grid.len());
    for &y in &y_grid {
        ratios.push(phi(2.0 * y)? / phi(y)?);
    }
    if ratios.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Numerical("nonpositive Φ_ε ratio".into()));
    }
    if ratios.len() < 3 {
        return Err(Error::Domain("y_max too small for the doubling grid".into()));
    }
    // A repeated lowest pole gives G ~ x^a ln^{m−1}(1/x), so the ratios
    // approach the limit like 1/ln y; fit r = r∞ + c₁/L + c₂/L² there.
    let multiplicity = phi_kernel(p, epsilon).cancelled().zero_exponent().multiplicity;
    let n = ratios.len();
    let limit_estimate = if multiplicity >= 2 {
        let u: Vec<f64> = y_grid[n - 3..].iter().map(|y| 1.0 / y.ln()).collect();
        let r = &ratios[n - 3..];
        // Lagrange extrapolation to u = 0
        (0..3)
            .map(|i| {
                let l: f64 = (0..3).filter(|&j| j != i).map(|j| u[j] / (u[j] - u[i])).product();
                l * r[i]
            })
            .sum()
    } else {
        ratios[n - 1]
    };
    let target = 2f64.powf(-epsilon);
    Ok(OrderTestResult {
        epsilon,
        y_grid,
        ratios,
        limit_estimate,
        target,
        tolerance: ORDER_TOLERANCE,
        passes: (limit_estimate - target).abs() <= ORDER_TOLERANCE * target,
        advisory: psi_vanishes(&p.cancelled()) && p.cancelled().q() >= 3,
    })
}

// ψ = 0, q = 2 --------------------------------------------------------------

/// The two readings of the continuous-part coefficient and how well each
/// reproduces the series coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientResolution {
    /// `(b₂−a₁)(b₁−a₁)`
    pub candidate_final: f64,
    /// `(b₂−a₂)(b₁−a₁)`
    pub candidate_intermediate: f64,
    pub residual_final: f64,
    pub residual_intermediate: f64,
    pub chosen: f64,
    pub moments_checked: usize,
}

/// Representing measure of `₃F₂(σ, a₁, a₂; b₁, b₂; −z)` when
/// `b₁ + b₂ = a₁ + a₂`: an atom at 1 of weight `Γ(b₁)Γ(b₂)/(Γ(a₁)Γ(a₂))`
/// plus a continuous part. The coefficient of the continuous part is picked
/// by matching moments `0..6` against the series coefficients.
pub fn limit_measure_q2(
    sigma: f64,
    a1: f64,
    a2: f64,
    b1: f64,
    b2: f64,
    cfg: &QuadratureConfig,
) -> Result<(DensitySpec, CoefficientResolution)> {
    let psi = b1 + b2 - a1 - a2;
    if psi.abs() > 1e-12 * (a1 + a2).abs() {
        return Err(Error::Precondition(format!("ψ = {psi} ≠ 0")));
    }
    if !majorization_verdict(&[a1, a2], &[b1, b2])?.weak_supermajorized {
        return Err(Error::Precondition("limit measure needs B ≺ A".into()));
    }
    // label so that a₁ = max A; the ₂F₁ then stays finite at t → 1
    let (a1, a2) = if a1 >= a2 { (a1, a2) } else { (a2, a1) };
    let pref = (ln_gamma_real(b1) + ln_gamma_real(b2) - ln_gamma_real(a1) - ln_gamma_real(a2)).exp();
    let cand_final = (b2 - a1) * (b1 - a1);
    let cand_mid = (b2 - a2) * (b1 - a1);
    const MOMENTS: usize = 7;
    let rule: TanhSinh = cfg.tanh_sinh();
    let base = SampledRule::sample(&rule, |t, tc| limit_q2_density(t, tc, 1.0, a1, a2, b1, b2));
    let residual = |k_coef: f64| -> f64 {
        (0..MOMENTS)
            .map(|k| {
                let i_k = base
                    .integrate_with(|t, _| Complex64::new(t.powi(k as i32), 0.0), cfg.abs_tol, cfg.rel_tol)
                    .value
                    .re;
                let model = pref * (1.0 + k_coef * i_k);
                let exact = pochhammer_real(a1, k as u64) * pochhammer_real(a2, k as u64)
                    / (pochhammer_real(b1, k as u64) * pochhammer_real(b2, k as u64));
                ((model - exact) / exact).abs()
            })
            .fold(0.0, f64::max)
    };
    let residual_final = residual(cand_final);
    let residual_intermediate = residual(cand_mid);
    let chosen = if residual_final <= residual_intermediate {
        cand_final
    } else {
        cand_mid
    };
    let kernel = GKernelSpec::real(&[b1, b2], &[a1, a2])?;
    let spec = DensitySpec {
        support: Support::UnitInterval,
        zero_exponent: kernel.zero_exponent(),
        one_exponent: -1.0,
        kernel,
        prefactor: Complex64::new(pref, 0.0),
        atom: Some(Atom {
            location: 1.0,
            weight: 1.0,
        }),
        continuous: ContinuousPart::LimitQ2 {
            coefficient: chosen,
            a1,
            a2,
            b1,
            b2,
        },
    };
    let _ = sigma;
    Ok((
        spec,
        CoefficientResolution {
            candidate_final: cand_final,
            candidate_intermediate: cand_mid,
            residual_final,
            residual_intermediate,
            chosen,
            moments_checked: MOMENTS,
        },
    ))
}

// Power denominators (σ ≥ 2) ----------------------------------------------------

/// Which formula the density `φ(y)` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerDenominatorPath {
    General,
    /// `σ = 2`: `φ(y) = (4/π) pref ∫ y² G(t)/(1 + t²y²)² dt`.
    SigmaTwo,
    /// `₂F₁(2, b; c; −z)` with the inner integral as a `₃F₂` at `−y²`.
    Gauss,
}

/// `F(σ, A; B; −z) = ∫₀^∞ φ(y)/(y^σ + z^σ) dy` for `σ ≥ 2`,
/// `|arg z| < π/σ`. The outer integral is split at `y = 1` and the tail
/// mapped by `y = 1/v`; `φ` is cached on both pieces.
#[derive(Debug, Clone)]
pub struct PowerDenominatorRep {
    pub sigma: f64,
    pub path: PowerDenominatorPath,
    /// `φ(v)` on `(0, 1)`.
    inner: SampledRule,
    /// `φ(1/v)/v²` on `(0, 1)`.
    outer: SampledRule,
    abs_tol: f64,
    rel_tol: f64,
}

fn check_power_denominator(p: &ParameterSet) -> Result<()> {
    if !p.is_real() {
        return Err(Error::Precondition("power-denominator form needs real parameters".into()));
    }
    if p.sigma.re < 2.0 {
        return Err(Error::Precondition("power-denominator form needs σ ≥ 2".into()));
    }
    let red = p.cancelled();
    let v = majorization_verdict(&red.a_re(), &red.b_re())?;
    if !v.weak_supermajorized || !(v.psi > 0.0) {
        return Err(Error::Precondition("power-denominator form needs B ≺^W A, ψ > 0".into()));
    }
    Ok(())
}

impl PowerDenominatorRep {
    pub fn new(p: &ParameterSet, cfg: &QuadratureConfig) -> Result<Self> {
        check_power_denominator(p)?;
        let sigma = p.sigma.re;
        let path = if sigma == 2.0 {
            PowerDenominatorPath::SigmaTwo
        } else {
            PowerDenominatorPath::General
        };
        let red = p.cancelled();
        let kernel = Kernel::new(&GKernelSpec::from_params(&red), cfg)?;
        let pref = red.gamma_prefactor().re;
        let rule = cfg.tanh_sinh();
        let g = kernel.sample(&rule);
        let (abs_tol, rel_tol) = (cfg.abs_tol, cfg.rel_tol);
        let phi = move |y: f64| -> Complex64 {
            let inner = match path {
                PowerDenominatorPath::SigmaTwo => g.integrate_with(
                    |t, _| {
                        let d = 1.0 + t * t * y * y;
                        Complex64::new(y * y / (d * d), 0.0)
                    },
                    abs_tol,
                    rel_tol,
                ),
                _ => {
                    let e = Complex64::from_polar(1.0, PI / sigma);
                    g.integrate_with(
                        |t, _| {
                            // sin(σ arg w)/|w|^σ = −Im w^{−σ},  w = 1 + t y e^{iπ/σ}
                            let w = Complex64::new(1.0, 0.0) + t * y * e;
                            let v = -(w.ln() * -sigma).exp().im / t;
                            Complex64::new(v, 0.0)
                        },
                        abs_tol,
                        rel_tol,
                    )
                }
            };
            let lead = match path {
                PowerDenominatorPath::SigmaTwo => 4.0 / PI,
                _ => sigma * y.powf(sigma - 1.0) / PI,
            };
            inner.value * lead * pref
        };
        Ok(Self::from_phi(sigma, path, &rule, phi, cfg))
    }

    /// Gauss path for `₂F₁(2, b; c; −z)`, `c > b > 0`.
    pub fn gauss(b: f64, c: f64, cfg: &QuadratureConfig) -> Result<Self> {
        if !(c > b && b > 0.0) {
            return Err(Error::Precondition("Gauss path needs c > b > 0".into()));
        }
        let inner = ParameterSet::real(2.0, &[(b + 1.0) / 2.0, (b + 2.0) / 2.0], &[(c + 1.0) / 2.0, (c + 2.0) / 2.0])?;
        let rep = Representation::new(&inner, cfg)?;
        let lead = 4.0 * b / (PI * c);
        let phi = move |y: f64| -> Complex64 {
            let f = rep.eval(Complex64::new(y * y, 0.0)).unwrap_or(Complex64::new(f64::NAN, 0.0));
            lead * y * y * f
        };
        Ok(Self::from_phi(2.0, PowerDenominatorPath::Gauss, &cfg.tanh_sinh(), phi, cfg))
    }

    fn from_phi<P: Fn(f64) -> Complex64 + Sync>(sigma: f64, path: PowerDenominatorPath, rule: &TanhSinh, phi: P, cfg: &QuadratureConfig) -> Self {
        let inner = SampledRule::sample(rule, |v, _| phi(v));
        let outer = SampledRule::sample(rule, |v, _| phi(1.0 / v) / (v * v));
        PowerDenominatorRep {
            sigma,
            path,
            inner,
            outer,
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
        }
    }

    /// `F(σ, A; B; −z)` for `|arg z| < π/σ`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() == 0.0 {
            return Err(Error::Domain("z = 0 is excluded; use the limit 1".into()));
        }
        if z.arg().abs() >= PI / self.sigma {
            return Err(Error::Domain(format!("|arg z| must be below π/σ (z = {z})")));
        }
        let zs = (z.ln() * self.sigma).exp();
        let s = self.sigma;
        let a = self.inner.integrate_with(|y, _| (zs + y.powf(s)).inv(), self.abs_tol, self.rel_tol);
        let b = self.outer.integrate_with(|v, _| (zs + v.powf(-s)).inv(), self.abs_tol, self.rel_tol);
        Ok(a.value + b.value)
    }

    /// Raw `φ` sample access for tables: returns `(y, φ(y))` for `y ≤ 1`.
    pub fn phi_table(&self) -> Vec<(f64, f64)> {
        self.inner
            .nodes_up_to(self.inner.max_level())
            .map(|(n, v)| (n.x, v.re))
            .collect()
    }
}

/// `F(σ, A; B; −z)` through the power-denominator form.
pub fn power_denominator_rep(p: &ParameterSet, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    PowerDenominatorRep::new(p, cfg)?.eval(z)
}

/// Series reference for `F(σ, A; B; −z)`, `|z| < 1`.
pub fn series_reference(p: &ParameterSet, z: Complex64) -> Result<Complex64> {
    Ok(eval_series(p, -z, 1e-16)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn log_examples() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        let rep = Representation::new(&p, &cfg()).unwrap();
        assert!((rep.eval(c(1.0)).unwrap().re - 2f64.ln()).abs() < 1e-10);
        assert!((rep.eval(c(9.0)).unwrap().re - 10f64.ln() / 9.0).abs() < 1e-10);
        assert!((rep.eval(c(0.0)).unwrap().re - 1.0).abs() < 1e-10);
        assert!(rep.eval(c(-1.5)).is_err());
    }

    #[test]
    fn rho1_collapses_for_unit_sigma() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        for &s in &[0.1, 0.5, 0.9] {
            assert!((density_rho1(s, &p, &cfg()).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn binomial_case_is_a_point_mass() {
        let p = ParameterSet::real(0.7, &[1.3], &[1.3]).unwrap();
        let rep = Representation::new(&p, &cfg()).unwrap();
        assert!((rep.eval(c(0.5)).unwrap().re - 1.5f64.powf(-0.7)).abs() < 1e-14);
    }

    #[test]
    fn rejects_representation_without_positive_psi() {
        let p = ParameterSet::real(1.0, &[2.0], &[1.0]).unwrap();
        assert!(matches!(eval_stieltjes(&p, c(0.5), &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn psi_zero_q3_rejected() {
        let p = ParameterSet::real(0.5, &[1.0, 2.0, 3.0], &[1.2, 2.3, 2.5]).unwrap();
        assert!(Representation::new(&p, &cfg()).is_err());
    }

    #[test]
    fn limit_measure_coefficient_matches_series() {
        let (_, res) = limit_measure_q2(0.5, 1.0, 3.0, 2.0, 2.0, &cfg()).unwrap();
        assert_eq!(res.chosen, res.candidate_final);
        assert!(res.residual_final < 1e-10);
        assert!(res.residual_intermediate > 1e-2);
        let p = ParameterSet::real(0.5, &[1.0, 3.0], &[2.0, 2.0]).unwrap();
        let rep = Representation::new(&p, &cfg()).unwrap();
        for &z in &[0.3, 0.7] {
            let r = series_reference(&p, c(z)).unwrap();
            assert!(((rep.eval(c(z)).unwrap() - r) / r).norm() < 1e-10);
        }
    }

    #[test]
    fn power_denominator_sigma_two_binomial() {
        // ₂F₁(2, 1; 2; −z) = 1/(1 + z)
        let p = ParameterSet::real(2.0, &[1.0], &[2.0]).unwrap();
        let v = power_denominator_rep(&p, c(0.5), &cfg()).unwrap();
        assert!((v.re - 1.0 / 1.5).abs() < 1e-10 && v.im.abs() < 1e-12);
    }

    #[test]
    fn power_denominator_agrees_with_unit_interval_form() {
        let p = ParameterSet::real(3.0, &[3.0], &[4.5]).unwrap();
        let pd = PowerDenominatorRep::new(&p, &cfg()).unwrap();
        let st = Representation::new(&p, &cfg()).unwrap();
        for z in [Complex64::new(0.5, 0.1), c(3.0)] {
            let r = st.eval(z).unwrap();
            assert!(((pd.eval(z).unwrap() - r) / r).norm() < 1e-9);
        }
        assert!(pd.eval(Complex64::from_polar(1.0, 1.1)).is_err());
    }

    #[test]
    fn gauss_path_agrees() {
        let g = PowerDenominatorRep::gauss(1.5, 2.5, &cfg()).unwrap();
        let p = ParameterSet::real(2.0, &[1.5], &[2.5]).unwrap();
        let st = Representation::new(&p, &cfg()).unwrap();
        let z = Complex64::new(1.0, 0.7);
        let r = st.eval(z).unwrap();
        assert!(((g.eval(z).unwrap() - r) / r).norm() < 1e-6);
    }

    #[test]
    fn exact_order_with_logarithmic_endpoint() {
        let p = ParameterSet::real(1.0, &[1.0, 2.0], &[2.0, 3.0]).unwrap();
        let r = exact_order_test(&p, 0.1, 1e5, &cfg()).unwrap();
        assert!(r.passes, "{r:?}");
        assert!(!r.advisory);
    }

    #[test]
    fn phi_epsilon_positive() {
        let p = ParameterSet::real(0.5, &[1.0], &[2.0]).unwrap();
        assert!(phi_epsilon(10.0, 0.3, &p, &cfg()).unwrap() > 0.0);
        assert!(phi_epsilon(0.5, 0.3, &p, &cfg()).is_err());
    }
}
