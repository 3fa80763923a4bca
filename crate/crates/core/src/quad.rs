//! Quadrature rules: tanh-sinh on (0, 1) and composite Gauss–Legendre.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

/// One tanh-sinh node on (0, 1).
///
/// `x` and `xc = 1 − x` are both computed directly so that nodes packed
/// against either endpoint keep full relative precision.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub xc: f64,
    pub w: f64,
}

/// Level-structured tanh-sinh rule. Level 0 has step 1; level `k` adds the
/// odd multiples of `2⁻ᵏ`.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    pub max_level: u32,
    pub t_max: f64,
}

impl Default for TanhSinh {
    fn default() -> Self {
        TanhSinh {
            max_level: 7,
            t_max: 6.0,
        }
    }
}

pub fn step(level: u32) -> f64 {
    0.5_f64.powi(level as i32)
}

impl TanhSinh {
    pub fn new(max_level: u32) -> Self {
        TanhSinh {
            max_level,
            ..Default::default()
        }
    }

    /// Nodes introduced at `level` (weights exclude the step `h`).
    pub fn level_nodes(&self, level: u32) -> Vec<Node> {
        let h = step(level);
        let kmax = (self.t_max / h).floor() as i64;
        let mut out = Vec::new();
        for k in -kmax..=kmax {
            if level > 0 && k % 2 == 0 {
                continue;
            }
            let t = k as f64 * h;
            let v = FRAC_PI_2 * t.sinh();
            // x = 1/(1+e^{-2v}), 1-x = 1/(1+e^{2v})
            let x = 1.0 / (1.0 + (-2.0 * v).exp());
            let xc = 1.0 / (1.0 + (2.0 * v).exp());
            let ch = v.cosh();
            let w = FRAC_PI_2 * t.cosh() / (2.0 * ch * ch);
            if x > 0.0 && xc > 0.0 && w > 0.0 && w.is_finite() {
                out.push(Node { x, xc, w });
            }
        }
        out
    }

    /// Adaptive integration of `f(x, 1−x)` over (0, 1). Levels are added until
    /// two successive estimates agree to `rel_tol` (relative) or `abs_tol`.
    pub fn integrate<F>(&self, f: F, abs_tol: f64, rel_tol: f64) -> Estimate
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let mut raw = Complex64::new(0.0, 0.0);
        let mut prev: Option<Complex64> = None;
        let mut evals = 0;
        let mut last_diff = f64::INFINITY;
        for level in 0..=self.max_level {
            for n in self.level_nodes(level) {
                let v = f(n.x, n.xc);
                evals += 1;
                if v.re.is_finite() && v.im.is_finite() {
                    raw += v * n.w;
                }
            }
            let est = raw * step(level);
            if let Some(p) = prev {
                last_diff = (est - p).norm();
                if level >= 3 && (last_diff <= abs_tol || last_diff <= rel_tol * est.norm()) {
                    return Estimate {
                        value: est,
                        error: last_diff,
                        evals,
                        converged: true,
                    };
                }
            }
            prev = Some(est);
        }
        Estimate {
            value: prev.unwrap_or_default(),
            error: last_diff,
            evals,
            converged: false,
        }
    }
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Cached tanh-sinh samples of a fixed function on (0, 1), so that many
/// integrals `∫ g(x) f(x) dx` can reuse the expensive `f` values.
#[derive(Debug, Clone)]
pub struct SampledRule {
    levels: Vec<Vec<(Node, Complex64)>>,
}

impl SampledRule {
    /// Samples `f` on all levels `0..=max_level` (in parallel per level).
    pub fn sample<F>(rule: &TanhSinh, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        use rayon::prelude::*;
        let levels = (0..=rule.max_level)
            .map(|level| {
                rule.level_nodes(level)
                    .into_par_iter()
                    .map(|n| {
                        let v = f(n.x, n.xc);
                        let v = if v.re.is_finite() && v.im.is_finite() {
                            v
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        (n, v)
                    })
                    .collect()
            })
            .collect();
        SampledRule { levels }
    }

    pub fn max_level(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// All (node, sampled value) pairs up to and including `level`.
    pub fn nodes_up_to(&self, level: u32) -> impl Iterator<Item = &(Node, Complex64)> {
        self.levels[..=(level as usize)].iter().flatten()
    }

    /// Adaptive `∫ g(x, 1−x) f(x) dx` over the cached levels.
    pub fn integrate_with<G>(&self, g: G, abs_tol: f64, rel_tol: f64) -> Estimate
    where
        G: Fn(f64, f64) -> Complex64,
    {
        let mut raw = Complex64::new(0.0, 0.0);
        let mut prev: Option<Complex64> = None;
        let mut evals = 0;
        let mut last_diff = f64::INFINITY;
        for (level, nodes) in self.levels.iter().enumerate() {
            for (n, fv) in nodes {
                let gv = g(n.x, n.xc);
                evals += 1;
                let v = gv * fv;
                if v.re.is_finite() && v.im.is_finite() {
                    raw += v * n.w;
                }
            }
            let est = raw * step(level as u32);
            if let Some(p) = prev {
                last_diff = (est - p).norm();
                if level >= 3 && (last_diff <= abs_tol || last_diff <= rel_tol * est.norm()) {
                    return Estimate {
                        value: est,
                        error: last_diff,
                        evals,
                        converged: true,
                    };
                }
            }
            prev = Some(est);
        }
        Estimate {
            value: prev.unwrap_or_default(),
            error: last_diff,
            evals,
            converged: false,
        }
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1] (Newton iteration on Pₙ).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = -z;
        xs[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

pub(crate) fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Composite 16-point Gauss–Legendre on `[a, b]` with `panels` equal panels.
pub fn composite_gl<F>(f: F, a: f64, b: f64, panels: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let (xs, ws) = gl16();
    let width = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let mut panel = Complex64::new(0.0, 0.0);
        for (x, w) in xs.iter().zip(ws.iter()) {
            panel += f(mid + 0.5 * width * x) * *w;
        }
        acc += panel * (0.5 * width);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m30: f64 = x.iter().zip(w.iter()).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m30 - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        let rule = TanhSinh::default();
        // ∫ x^{-0.7} (1-x)^{-0.4} dx = B(0.3, 0.6)
        let est = rule.integrate(|x, xc| re(x.powf(-0.7) * xc.powf(-0.4)), 1e-14, 1e-13);
        let exact = (crate::gamma::ln_gamma_real(0.3) + crate::gamma::ln_gamma_real(0.6)
            - crate::gamma::ln_gamma_real(0.9))
        .exp();
        assert!(est.converged);
        assert!((est.value.re - exact).abs() < 1e-10 * exact, "{} vs {exact}", est.value.re);
    }

    #[test]
    fn sampled_rule_reuses_values() {
        let rule = TanhSinh::default();
        let cached = SampledRule::sample(&rule, |x, _| re(x.sqrt()));
        let est = cached.integrate_with(|x, _| re(x), 1e-14, 1e-13);
        assert!((est.value.re - 0.4).abs() < 1e-12);
    }

    #[test]
    fn composite_gl_oscillatory() {
        let v = composite_gl(|t| re((10.0 * t).cos()), 0.0, 3.0, 20);
        assert!((v.re - (30.0_f64).sin() / 10.0).abs() < 1e-13);
    }
}
