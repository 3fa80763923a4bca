//! The kernel `G^{q,0}_{q,q}(x | top; bottom)` on `(0, 1)`.
//!
//! `G` is the inverse Mellin transform of
//! `R(s) = ∏Γ(bottomⱼ + s) / ∏Γ(topⱼ + s)`. With `x = e^{−L}` this is the
//! inverse Laplace transform of `R` at time `L`, which is evaluated on a
//! hyperbolic Bromwich contour (trapezoid rule, geometric convergence in the
//! node count). A second route integrates along a vertical line after
//! subtracting an inverse-factorial expansion of `R` whose inverse transform
//! is known in closed form; it also works for `x > 1`.

use crate::error::{Error, Result};
use crate::gamma::{gamma_real, ln_gamma, ln_gamma_real, GammaRatio};
use crate::hypeval::hyp2f1_near_one;
use crate::quad::{composite_gl, Estimate, SampledRule, TanhSinh};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_SEED: u64 = 0x5EED_0F_C0DE;

/// Parameter lists of the kernel: `top` enters the gamma denominators,
/// `bottom` the numerators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GKernelSpec {
    pub top: Vec<Complex64>,
    pub bottom: Vec<Complex64>,
}

/// Endpoint behaviour at 0: `G ~ x^a ln^{m−1}(1/x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroExponent {
    pub a: f64,
    pub multiplicity: usize,
}

fn is_nonneg_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re >= 0.0 && z.re == z.re.round()
}

impl GKernelSpec {
    pub fn new(top: Vec<Complex64>, bottom: Vec<Complex64>) -> Result<Self> {
        if top.len() != bottom.len() {
            return Err(Error::LengthMismatch {
                upper: top.len(),
                lower: bottom.len(),
            });
        }
        if top.is_empty() {
            return Err(Error::Domain("empty kernel".into()));
        }
        Ok(GKernelSpec { top, bottom })
    }

    pub fn real(top: &[f64], bottom: &[f64]) -> Result<Self> {
        Self::new(
            top.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            bottom.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Kernel of the order-`σ` density: `top = B`, `bottom = A`.
    pub fn from_params(p: &crate::ParameterSet) -> Self {
        GKernelSpec {
            top: p.b.clone(),
            bottom: p.a.clone(),
        }
    }

    /// Kernel of the order-one density: `top = (1, B)`, `bottom = (σ, A)`.
    pub fn rho1(p: &crate::ParameterSet) -> Self {
        let mut top = vec![Complex64::new(1.0, 0.0)];
        top.extend_from_slice(&p.b);
        let mut bottom = vec![p.sigma];
        bottom.extend_from_slice(&p.a);
        GKernelSpec { top, bottom }
    }

    pub fn q(&self) -> usize {
        self.top.len()
    }

    pub fn is_real(&self) -> bool {
        self.top.iter().chain(self.bottom.iter()).all(|z| z.im == 0.0)
    }

    pub fn psi(&self) -> Complex64 {
        self.top.iter().sum::<Complex64>() - self.bottom.iter().sum::<Complex64>()
    }

    /// Drops exactly equal top/bottom pairs (they cancel in `R`).
    pub fn cancelled(&self) -> GKernelSpec {
        let mut top = self.top.clone();
        let mut bottom = Vec::with_capacity(self.bottom.len());
        for &b in &self.bottom {
            if let Some(pos) = top.iter().position(|&t| t == b) {
                top.remove(pos);
            } else {
                bottom.push(b);
            }
        }
        GKernelSpec { top, bottom }
    }

    /// Bottom parameters whose poles survive: a bottom `a` is removed when
    /// an unused top `b` has `a − b ∈ {0, 1, 2, …}`, because then
    /// `Γ(a+s)/Γ(b+s)` is a polynomial.
    pub fn pole_bottoms(&self) -> Vec<Complex64> {
        let mut used = vec![false; self.top.len()];
        let mut order: Vec<Complex64> = self.bottom.clone();
        order.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        let mut out = Vec::new();
        for a in order {
            let hit = self
                .top
                .iter()
                .enumerate()
                .find(|(j, &b)| !used[*j] && is_nonneg_integer(a - b));
            match hit {
                Some((j, _)) => used[j] = true,
                None => out.push(a),
            }
        }
        out
    }

    pub fn zero_exponent(&self) -> ZeroExponent {
        let poles = self.pole_bottoms();
        if poles.is_empty() {
            return ZeroExponent {
                a: f64::INFINITY,
                multiplicity: 0,
            };
        }
        let a = poles.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let multiplicity = poles.iter().filter(|z| (z.re - a).abs() < 1e-12).count();
        ZeroExponent { a, multiplicity }
    }

    /// `Re ψ − 1`, the exponent of `(1 − x)` at the right endpoint.
    pub fn one_exponent(&self) -> f64 {
        self.psi().re - 1.0
    }

    /// Mellin transform `∏Γ(k + bottom)/Γ(k + top)`.
    pub fn mellin_exact(&self, k: Complex64) -> Complex64 {
        let ln: Complex64 = self.bottom.iter().map(|&a| ln_gamma(a + k)).sum::<Complex64>()
            - self.top.iter().map(|&b| ln_gamma(b + k)).sum::<Complex64>();
        ln.exp()
    }
}

/// Knobs for the kernel integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Vertical-line abscissa `c`; default `max(1, 1 − min Re bottom) + 1/2`.
    pub contour_offset: Option<f64>,
    /// Vertical-line truncation `T`; default adaptive (doubling).
    pub truncation_height: Option<f64>,
    /// Half the number of hyperbolic-contour nodes (`2N + 1` in total).
    pub node_count: usize,
    /// Deepest tanh-sinh level for integrals over `(0, 1)`.
    pub max_level: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            contour_offset: None,
            truncation_height: None,
            node_count: 24,
            max_level: 7,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(Error::Domain("node_count must be positive".into()));
        }
        if let Some(t) = self.truncation_height {
            if !(t > 0.0) {
                return Err(Error::Domain(format!("truncation height {t}")));
            }
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn tanh_sinh(&self) -> TanhSinh {
        TanhSinh::new(self.max_level)
    }
}

// Hyperbolic Bromwich contour ------------------------------------------------

const WT_ALPHA: f64 = 1.1721;
const WT_H: f64 = 1.0818;
const WT_MU: f64 = 4.4921;

/// After shifting, the rightmost pole sits at `−SHIFT_MARGIN`. Small
/// margins keep `G_γ(x) ~ x^{margin}` of order one on the whole interval,
/// which limits the relative effect of rounding in the contour sum.
const SHIFT_MARGIN: f64 = 0.05;

/// Nodes actually used: steep kernels (`ψ` large) get a few extra.
fn effective_nodes(base: usize, psi: f64) -> usize {
    if psi > 4.0 {
        base + ((psi - 4.0) / 2.0).ceil() as usize
    } else {
        base
    }
}

/// Contour point and derivative for node `k` of `−n..=n`.
fn hyperbola_node(k: i64, n: usize, l: f64) -> (Complex64, Complex64) {
    let h = WT_H / n as f64;
    let mu = WT_MU * n as f64 / l;
    let w = Complex64::new(-WT_ALPHA, k as f64 * h);
    (mu * (1.0 + w.sin()), Complex64::i() * mu * w.cos())
}

/// `(1/2πi) ∫ e^{sL} F(s) ds` where `g(s, L)` returns `e^{sL}F(s)`.
fn bromwich<G: Fn(Complex64, f64) -> Complex64>(g: G, l: f64, n: usize) -> Complex64 {
    let h = WT_H / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(n as i64)..=(n as i64) {
        let (z, dz) = hyperbola_node(k, n, l);
        acc += g(z, l) * dz;
    }
    acc * h / Complex64::new(0.0, 2.0 * PI)
}

/// Precomputed evaluator of one kernel.
#[derive(Debug, Clone)]
pub struct Kernel {
    spec: GKernelSpec,
    /// `R` of the shifted parameters (`bottom − γ`, `top − γ`).
    ratio: GammaRatio,
    gamma_shift: f64,
    node_count: usize,
    abs_tol: f64,
    rel_tol: f64,
}

/// A kernel value with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GValue {
    pub value: Complex64,
    /// `|Im|` of the contour sum for real parameters (zero in exact
    /// arithmetic).
    pub imag_residual: f64,
}

impl Kernel {
    pub fn new(spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let psi = spec.psi();
        if psi.re <= 0.0 {
            return Err(Error::Precondition(format!("Re ψ = {} must be positive", psi.re)));
        }
        Self::build(spec, cfg)
    }

    /// Kernel for `R − 1` (the part of `G` without the point mass at 1 when
    /// `ψ = 0`).
    pub fn new_regular(spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        if spec.psi().norm() > 1e-12 {
            return Err(Error::Precondition("regular part needs ψ = 0".into()));
        }
        Self::build(spec, cfg)
    }

    fn build(spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<Self> {
        let red = spec.cancelled();
        if red.top.is_empty() {
            return Err(Error::Domain("kernel cancels completely".into()));
        }
        let poles = red.pole_bottoms();
        let a_min = if poles.is_empty() {
            red.bottom.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
        } else {
            poles.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
        };
        let gamma_shift = a_min - SHIFT_MARGIN;
        let num: Vec<Complex64> = red.bottom.iter().map(|z| z - gamma_shift).collect();
        let den: Vec<Complex64> = red.top.iter().map(|z| z - gamma_shift).collect();
        let kernel = Kernel {
            spec: spec.clone(),
            ratio: GammaRatio::new(&num, &den),
            gamma_shift,
            node_count: effective_nodes(cfg.node_count, red.psi().re),
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
        };
        if !spec.is_real() {
            kernel.check_enclosure(&num)?;
        }
        Ok(kernel)
    }

    /// For complex parameters every pole `−a − k` must lie to the left of
    /// the hyperbola for all evaluation times; the contour shape is fixed
    /// up to scale, so it suffices that poles sit inside its asymptotic
    /// wedge around the negative axis.
    fn check_enclosure(&self, shifted_bottom: &[Complex64]) -> Result<()> {
        let half_angle = std::f64::consts::FRAC_PI_2 - WT_ALPHA;
        for &a in shifted_bottom {
            for k in 0..200 {
                let p = -(a + k as f64);
                if p.re >= 0.0 || (p.im.abs() / -p.re) >= half_angle.tan() {
                    return Err(Error::ContourPlacement(format!(
                        "pole {p} outside the hyperbolic contour's wedge"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &GKernelSpec {
        &self.spec
    }

    /// `G(x)` from `x` and its complement `xc = 1 − x` (both in (0, 1)).
    pub fn eval_pair(&self, x: f64, xc: f64) -> GValue {
        self.eval_with(x, xc, false)
    }

    /// `G(x)` for the `R − 1` transform (point mass removed).
    pub fn eval_regular_pair(&self, x: f64, xc: f64) -> GValue {
        self.eval_with(x, xc, true)
    }

    fn eval_with(&self, x: f64, xc: f64, regular: bool) -> GValue {
        let l = if xc < 0.5 { -(-xc).ln_1p() } else { -x.ln() };
        if !(l > 0.0) || !l.is_finite() {
            return GValue {
                value: Complex64::new(0.0, 0.0),
                imag_residual: 0.0,
            };
        }
        let ratio = &self.ratio;
        let sum = if regular {
            // e^{sL}(R(s) − 1), with R − 1 = expm1(ln R)
            bromwich(
                |s, l| (s * l).exp() * crate::gamma::complex_exp_m1(ratio.ln_eval(s)),
                l,
                self.node_count,
            )
        } else {
            bromwich(|s, l| (s * l + ratio.ln_eval(s)).exp(), l, self.node_count)
        };
        // undo the shift: G(x) = x^γ · G_γ(x)
        let scale = (-self.gamma_shift * l).exp();
        let value = sum * scale;
        if self.spec.is_real() {
            GValue {
                value: Complex64::new(value.re, 0.0),
                imag_residual: value.im.abs(),
            }
        } else {
            GValue {
                value,
                imag_residual: 0.0,
            }
        }
    }

    pub fn eval(&self, x: f64) -> GValue {
        self.eval_pair(x, 1.0 - x)
    }

    /// Real value with the imaginary-residual check.
    pub fn eval_real(&self, x: f64, xc: f64) -> Result<f64> {
        let g = self.eval_pair(x, xc);
        let allowed = self.abs_tol + self.rel_tol * g.value.norm();
        if g.imag_residual > allowed.max(1e-12 * g.value.norm()) {
            return Err(Error::Numerical(format!(
                "imaginary residual {:e} at x = {x}",
                g.imag_residual
            )));
        }
        Ok(g.value.re)
    }

    /// Kernel values cached on the tanh-sinh nodes of `(0, 1)`.
    pub fn sample(&self, rule: &TanhSinh) -> SampledRule {
        SampledRule::sample(rule, |x, xc| self.eval_pair(x, xc).value)
    }

    pub fn sample_regular(&self, rule: &TanhSinh) -> SampledRule {
        SampledRule::sample(rule, |x, xc| self.eval_regular_pair(x, xc).value)
    }
}

/// `G(x | top; bottom)` for `x ∈ (0, 1)`.
pub fn meijer_g(x: f64, spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} outside (0, 1)")));
    }
    Kernel::new(spec, cfg)?.eval_real(x, 1.0 - x)
}

/// `G` with the point mass at `x = 1` removed; defined when `ψ = 0`.
pub fn meijer_g_regular(x: f64, spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} outside (0, 1)")));
    }
    Ok(Kernel::new_regular(spec, cfg)?.eval_regular_pair(x, 1.0 - x).value.re)
}

// Vertical line with inverse-factorial subtraction ----------------------------

const SUBTRACTED_TERMS: usize = 8;

/// Evaluator on the line `Re s = c`.
///
/// `R(s) = R₁(s)·Φ(s)` with `R₁(s) = Γ(s+α)/Γ(s+α+ψ)`; the expansion
/// `Φ(s) ≈ Σ κₖ/(s+α+ψ)ₖ` is subtracted, whose inverse transform is
/// `x^α Σ κₖ (1−x)^{ψ+k−1}/Γ(ψ+k)` on `(0, 1)` and zero beyond.
/// `α` is chosen so that `κ₁ = 0`.
#[derive(Debug, Clone)]
pub struct VerticalRoute {
    ratio: GammaRatio,
    r1: GammaRatio,
    alpha: Complex64,
    psi: Complex64,
    kappa: Vec<Complex64>,
    pub c: f64,
    abs_tol: f64,
    fixed_height: Option<f64>,
}

/// Result of a vertical-line evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerticalValue {
    pub value: Complex64,
    pub tail_estimate: f64,
    pub truncation_height: f64,
}

fn series_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, &x) in a.iter().enumerate().take(n) {
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_exp(g: &[Complex64]) -> Vec<Complex64> {
    let n = g.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    e[0] = Complex64::new(1.0, 0.0);
    for m in 1..n {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 1..=m {
            s += g[k] * (k as f64) * e[m - k];
        }
        e[m] = s / m as f64;
    }
    e
}

impl VerticalRoute {
    pub fn new(spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let red = spec.cancelled();
        let psi = red.psi();
        if psi.re <= 0.0 {
            return Err(Error::Precondition(format!("Re ψ = {} must be positive", psi.re)));
        }
        let sum_sq: Complex64 = red.top.iter().map(|b| b * b).sum::<Complex64>()
            - red.bottom.iter().map(|a| a * a).sum::<Complex64>();
        let alpha = (sum_sq - psi * psi) / (2.0 * psi);
        let a_min = red.bottom.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let default_c = (1.0_f64).max(1.0 - a_min) + 0.5;
        let c = match cfg.contour_offset {
            Some(c) => {
                if c <= -a_min || c <= -alpha.re {
                    return Err(Error::ContourPlacement(format!(
                        "c = {c} must exceed {} and {}",
                        -a_min, -alpha.re
                    )));
                }
                c
            }
            None => default_c.max(0.5 - alpha.re),
        };
        // ln Φ in powers of w = 1/u, u = s + α + ψ
        let shift = alpha + psi;
        let mut num: Vec<Complex64> = red.bottom.iter().map(|a| a - shift).collect();
        num.push(Complex64::new(0.0, 0.0));
        let mut den: Vec<Complex64> = red.top.iter().map(|b| b - shift).collect();
        den.push(-psi);
        let phi = GammaRatio::new(&num, &den);
        let n = SUBTRACTED_TERMS + 1;
        let mut lnphi = vec![Complex64::new(0.0, 0.0); n];
        for m in 1..n {
            lnphi[m] = phi.coefs()[m - 1];
        }
        let phi_series = series_exp(&lnphi);
        // 1/(u)_k = w^k ∏_{j<k} 1/(1 + j w)
        let mut kappa = vec![Complex64::new(0.0, 0.0); n];
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut poch = vec![Complex64::new(0.0, 0.0); n];
        poch[0] = Complex64::new(1.0, 0.0);
        for k in 0..n {
            // shift by w^k
            let mut p = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n - k {
                p[i + k] = poch[i];
            }
            basis.push(p);
            // multiply poch by 1/(1 + k w)
            let geo: Vec<Complex64> = (0..n).map(|i| Complex64::new((-(k as f64)).powi(i as i32), 0.0)).collect();
            poch = series_mul(&poch, &geo, n);
        }
        for m in 0..n {
            let mut v = phi_series[m];
            for k in 0..m {
                v -= kappa[k] * basis[k][m];
            }
            kappa[m] = v;
        }
        Ok(VerticalRoute {
            ratio: GammaRatio::new(&red.bottom, &red.top),
            r1: GammaRatio::new(&[alpha], &[alpha + psi]),
            alpha,
            psi,
            kappa,
            c,
            abs_tol: cfg.abs_tol,
            fixed_height: cfg.truncation_height,
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn kappa(&self) -> &[Complex64] {
        &self.kappa
    }

    fn remainder(&self, s: Complex64) -> Complex64 {
        let u = s + self.alpha + self.psi;
        let mut poch = Complex64::new(1.0, 0.0);
        let mut approx = Complex64::new(0.0, 0.0);
        for (k, &kap) in self.kappa.iter().enumerate() {
            approx += kap / poch;
            poch *= u + k as f64;
        }
        self.ratio.eval(s) - self.r1.eval(s) * approx
    }

    /// Inverse transform of the subtracted expansion.
    pub fn subtracted_part(&self, x: f64) -> Complex64 {
        if x >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let xa = (self.alpha * x.ln()).exp();
        let lc = (-x).ln_1p();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &kap) in self.kappa.iter().enumerate() {
            let e = self.psi + k as f64 - 1.0;
            acc += kap * (e * lc).exp() / ln_gamma(self.psi + k as f64).exp();
        }
        xa * acc
    }

    fn tail(&self, x: f64, t: f64) -> f64 {
        let s = Complex64::new(self.c, t);
        let r = self.remainder(s).norm().max(self.remainder(s.conj()).norm());
        let decay = self.psi.re + SUBTRACTED_TERMS as f64;
        r * x.powf(-self.c) * t / (decay * PI)
    }

    /// Truncation height used at `x` under the adaptive rule.
    pub fn height_for(&self, x: f64) -> f64 {
        if let Some(t) = self.fixed_height {
            return t;
        }
        let mut t = 16.0;
        while self.tail(x, t) > self.abs_tol / 10.0 && t < 1e5 {
            t *= 2.0;
        }
        t
    }

    /// `G(x)` for any `x > 0` (zero beyond 1 in exact arithmetic).
    pub fn eval(&self, x: f64) -> VerticalValue {
        let t = self.height_for(x);
        self.eval_at_height(x, t)
    }

    pub fn eval_at_height(&self, x: f64, t: f64) -> VerticalValue {
        let lx = x.ln();
        let width = if lx == 0.0 { 1.0 } else { (1.0 / lx.abs()).min(1.0) };
        let panels = ((2.0 * t / width).ceil() as usize).max(1);
        let integral = composite_gl(
            |tt| {
                let s = Complex64::new(self.c, tt);
                self.remainder(s) * (-s * lx).exp()
            },
            -t,
            t,
            panels,
        ) / (2.0 * PI);
        VerticalValue {
            value: self.subtracted_part(x) + integral,
            tail_estimate: self.tail(x, t),
            truncation_height: t,
        }
    }
}

/// `G(x)` along the vertical line (works for `x > 1` too).
pub fn meijer_g_vertical(x: f64, spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<VerticalValue> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let v = VerticalRoute::new(spec, cfg)?.eval(x);
    if cfg.truncation_height.is_none() && v.tail_estimate > cfg.abs_tol {
        return Err(Error::TailTooLarge {
            estimate: v.tail_estimate,
            tol: cfg.abs_tol,
        });
    }
    Ok(v)
}

/// Outcome of evaluating the contour integral beyond `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishResult {
    pub x: f64,
    /// `|G(x)|` as computed (exact value 0).
    pub residual: f64,
    pub tail_estimate: f64,
    pub truncation_height: f64,
}

/// `|G(x)|` for `x > 1` on the vertical line.
pub fn vanish_check(x: f64, spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<VanishResult> {
    if !(x > 1.0) {
        return Err(Error::Domain(format!("x = {x} must exceed 1")));
    }
    let v = VerticalRoute::new(spec, cfg)?.eval(x);
    Ok(VanishResult {
        x,
        residual: v.value.norm(),
        tail_estimate: v.tail_estimate,
        truncation_height: v.truncation_height,
    })
}

/// Same check at several `x` with one shared truncation height, chosen
/// for the smallest `x`.
pub fn vanish_profile(xs: &[f64], spec: &GKernelSpec, cfg: &QuadratureConfig) -> Result<Vec<VanishResult>> {
    if xs.iter().any(|&x| !(x > 1.0)) {
        return Err(Error::Domain("all x must exceed 1".into()));
    }
    let route = VerticalRoute::new(spec, cfg)?;
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let t = route.height_for(x_min);
    Ok(xs
        .iter()
        .map(|&x| {
            let v = route.eval_at_height(x, t);
            VanishResult {
                x,
                residual: v.value.norm(),
                tail_estimate: v.tail_estimate,
                truncation_height: t,
            }
        })
        .collect())
}

// Closed forms and the Monte Carlo oracle ------------------------------------

/// `s^a (1−s)^{b−a−1} / Γ(b−a)`, the kernel for `q = 1`.
pub fn closed_form_q1(s: f64, a: f64, b: f64) -> Result<f64> {
    if !(b > a && a > 0.0) || !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("closed_form_q1(s={s}, a={a}, b={b})")));
    }
    Ok((a * s.ln() + (b - a - 1.0) * (-s).ln_1p() - ln_gamma_real(b - a)).exp())
}

/// Kernel for `q = 2`:
/// `t^{a₂}(1−t)^{ψ−1}/Γ(ψ) · ₂F₁(b₁−a₁, b₂−a₁; ψ; 1−t)`.
pub fn closed_form_q2(t: f64, a1: f64, a2: f64, b1: f64, b2: f64) -> Result<f64> {
    let psi = b1 + b2 - a1 - a2;
    if !(a1 > 0.0 && a2 > 0.0 && psi > 0.0) || !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!(
            "closed_form_q2(t={t}, a=({a1},{a2}), b=({b1},{b2}))"
        )));
    }
    let f = hyp2f1_near_one(b1 - a1, b2 - a1, psi, t)?;
    Ok((a2 * t.ln() + (psi - 1.0) * (-t).ln_1p()).exp() / gamma_real(psi) * f)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `G(x)` from its `(q−1)`-dimensional integral over
/// `{t ∈ [0,1]^{q−1} : t₂⋯t_q > x}`, sampled with Beta proposals.
///
/// Pairs `(aₖ, bₖ)` are taken in the given order except that the pair with
/// the largest `bₖ − aₖ` plays the role of index 1 (any pairing gives the
/// same kernel; this one keeps the boundary factor mildest).
pub fn multidim_oracle(x: f64, a: &[f64], b: &[f64], samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            upper: a.len(),
            lower: b.len(),
        });
    }
    let q = a.len();
    if q < 2 || !(x > 0.0 && x < 1.0) || samples < 2 {
        return Err(Error::Domain(format!("need q ≥ 2, 0 < x < 1, samples ≥ 2 (q={q}, x={x})")));
    }
    if a.iter().zip(b.iter()).any(|(&ai, &bi)| !(bi > ai && ai > 0.0)) {
        return Err(Error::Precondition("need b_k > a_k > 0".into()));
    }
    let lead = (0..q)
        .max_by(|&i, &j| (b[i] - a[i]).partial_cmp(&(b[j] - a[j])).unwrap())
        .unwrap();
    let (a1, b1) = (a[lead], b[lead]);
    let rest: Vec<usize> = (0..q).filter(|&i| i != lead).collect();
    let mut proposals = Vec::new();
    let mut log_norm = 0.0;
    let mut tilt = Vec::new();
    for &k in &rest {
        let alpha = (a[k] - a1).max(1.0);
        let beta = b[k] - a[k];
        proposals.push(Beta::new(alpha, beta).map_err(|e| Error::Numerical(e.to_string()))?);
        log_norm += ln_gamma_real(alpha) + ln_gamma_real(beta) - ln_gamma_real(alpha + beta);
        tilt.push(a[k] - a1 - alpha);
    }
    let prefactor = (a1 * x.ln() + log_norm - (0..q).map(|i| ln_gamma_real(b[i] - a[i])).sum::<f64>()).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let mut prod = 1.0;
        let mut w = 1.0;
        for (d, &e) in proposals.iter().zip(tilt.iter()) {
            let t: f64 = d.sample(&mut rng);
            prod *= t;
            w *= t.powf(e);
        }
        let v = if prod > x {
            w * (1.0 - x / prod).powf(b1 - a1 - 1.0)
        } else {
            0.0
        };
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MonteCarloEstimate {
        mean: prefactor * mean,
        std_error: prefactor * (var / n).sqrt(),
        samples,
        seed,
    })
}

// Mellin transforms and the Laplace identity ---------------------------------

/// A quadrature value next to its exact counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub quadrature: f64,
    pub exact: f64,
    pub rel_error: f64,
    pub quad_error: f64,
}

impl MomentCheck {
    fn new(est: Estimate, exact: f64) -> Self {
        MomentCheck {
            quadrature: est.value.re,
            exact,
            rel_error: (est.value.re - exact).abs() / exact.abs(),
            quad_error: est.error,
        }
    }
}

/// `∫₀¹ s^{k−1} G(s) ds` from cached kernel samples, against
/// `∏Γ(k + bottom)/Γ(k + top)`.
pub fn mellin_transform_sampled(samples: &SampledRule, spec: &GKernelSpec, k: f64, cfg: &QuadratureConfig) -> Result<MomentCheck> {
    let a = spec.zero_exponent().a;
    if !(a + k > 0.0) {
        return Err(Error::Precondition(format!("min Re bottom + k = {} must be positive", a + k)));
    }
    let est = samples.integrate_with(|x, _| Complex64::new(x.powf(k - 1.0), 0.0), cfg.abs_tol, cfg.rel_tol);
    Ok(MomentCheck::new(est, spec.mellin_exact(Complex64::new(k, 0.0)).re))
}

/// Moment `∫₀¹ s^{k−1} G(s) ds` with its exact gamma-ratio value.
pub fn mellin_moment(spec: &GKernelSpec, k: u32, cfg: &QuadratureConfig) -> Result<MomentCheck> {
    let kernel = Kernel::new(spec, cfg)?;
    let samples = kernel.sample(&cfg.tanh_sinh());
    mellin_transform_sampled(&samples, spec, k as f64, cfg)
}

/// Relative gap in `∏Γ(x+aᵢ)/Γ(x+bᵢ) = ∫₀^∞ e^{−tx} G(e^{−t}) dt`
/// (computed as `∫₀¹ u^{x−1} G(u) du`).
pub fn laplace_identity_check(x: f64, a: &[f64], b: &[f64], cfg: &QuadratureConfig) -> Result<MomentCheck> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let spec = GKernelSpec::real(b, a)?;
    let kernel = Kernel::new(&spec, cfg)?;
    let samples = kernel.sample(&cfg.tanh_sinh());
    mellin_transform_sampled(&samples, &spec, x, cfg)
}

/// Local slopes `Δ ln G / Δ ln x` between consecutive grid points.
pub fn log_slopes(kernel: &Kernel, xs: &[f64]) -> Vec<f64> {
    let vals: Vec<f64> = xs.iter().map(|&x| kernel.eval(x).value.re).collect();
    xs.windows(2)
        .zip(vals.windows(2))
        .map(|(x, g)| (g[1].ln() - g[0].ln()) / (x[1].ln() - x[0].ln()))
        .collect()
}

// CSV export -----------------------------------------------------------------

/// One row of a density table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub x: f64,
    pub value: f64,
    pub error: f64,
}

/// `G` on a grid; the error column is the change when the contour gets six
/// more nodes, plus the imaginary residual.
pub fn density_table(spec: &GKernelSpec, xs: &[f64], cfg: &QuadratureConfig) -> Result<Vec<DensityRow>> {
    use rayon::prelude::*;
    let k1 = Kernel::new(spec, cfg)?;
    let finer = QuadratureConfig {
        node_count: cfg.node_count + 6,
        ..cfg.clone()
    };
    let k2 = Kernel::new(spec, &finer)?;
    xs.par_iter()
        .map(|&x| {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::Domain(format!("x = {x} outside (0, 1)")));
            }
            let g1 = k1.eval(x);
            let g2 = k2.eval(x);
            Ok(DensityRow {
                x,
                value: g1.value.re,
                error: (g1.value - g2.value).norm() + g1.imag_residual,
            })
        })
        .collect()
}

pub fn write_density_csv<W: std::io::Write>(rows: &[DensityRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,value,error")?;
    for r in rows {
        writeln!(out, "{:.17e},{:.17e},{:.3e}", r.x, r.value, r.error)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn q1_examples() {
        let s = GKernelSpec::real(&[2.0], &[1.0]).unwrap();
        assert!((meijer_g(0.5, &s, &cfg()).unwrap() - 0.5).abs() < 1e-10);
        let s = GKernelSpec::real(&[3.0], &[1.0]).unwrap();
        assert!((meijer_g(0.25, &s, &cfg()).unwrap() - 0.1875).abs() < 1e-10);
    }

    #[test]
    fn q2_log_kernel() {
        // R(s) = 1/(1+s)² ⇒ G(x) = −x ln x
        let s = GKernelSpec::real(&[2.0, 2.0], &[1.0, 1.0]).unwrap();
        let g = meijer_g(0.5, &s, &cfg()).unwrap();
        assert!((g - 0.5 * 2f64.ln()).abs() < 1e-10, "{g}");
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_q1(0.5, 1.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((closed_form_q1(0.25, 2.0, 3.0).unwrap() - 0.0625).abs() < 1e-15);
        let v = closed_form_q2(0.5, 1.0, 1.0, 2.0, 2.0).unwrap();
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-13, "{v}");
        assert!(closed_form_q2(1.0 - 1e-9, 1.0, 1.0, 2.0, 3.0).unwrap() < 1e-8);
    }

    #[test]
    fn zero_exponent_skips_polynomial_pairs() {
        // Γ(2+s)/Γ(1+s) = 1+s has no poles; the remaining bottom 0.7 leads
        let s = GKernelSpec::real(&[1.0, 2.5], &[2.0, 0.7]).unwrap();
        let z = s.zero_exponent();
        assert_eq!(z.a, 0.7);
        assert_eq!(z.multiplicity, 1);
        let s = GKernelSpec::real(&[2.0, 2.0], &[1.0, 1.0]).unwrap();
        assert_eq!(s.zero_exponent().multiplicity, 2);
        assert!((s.one_exponent() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vertical_route_matches_contour() {
        let s = GKernelSpec::real(&[2.3, 1.9], &[1.1, 0.6]).unwrap();
        let k = Kernel::new(&s, &cfg()).unwrap();
        for &x in &[0.2, 0.5, 0.9] {
            let v = meijer_g_vertical(x, &s, &cfg()).unwrap();
            let h = k.eval(x).value.re;
            assert!((v.value.re - h).abs() < 1e-8, "x={x}: {} vs {h}", v.value.re);
        }
    }

    #[test]
    fn rejects_nonpositive_psi() {
        let s = GKernelSpec::real(&[1.0, 2.0], &[1.5, 1.5]).unwrap();
        assert!(matches!(meijer_g(0.5, &s, &cfg()), Err(Error::Precondition(_))));
    }
}
