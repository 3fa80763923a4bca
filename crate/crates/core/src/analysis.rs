//! Numerical checks of inequalities and mapping properties of
//! `F(σ, A; B; ·)` on seeded grids.

use crate::error::{Error, Result};
use crate::gdensity::QuadratureConfig;
use crate::hypeval::{derivative_params, eval_series};
use crate::params::{chain_condition, majorization_verdict, random_chain_not_supermajorized, random_supermajorized, ParameterSet};
use crate::stieltjes::Representation;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `√(13√13 − 46)`
pub fn r_star() -> f64 {
    (13.0 * 13f64.sqrt() - 46.0).sqrt()
}

/// `√(√32 − 5)`
pub fn r_s() -> f64 {
    (32f64.sqrt() - 5.0).sqrt()
}

pub const MONOTONE_SLACK: f64 = 1e-9;
pub const BOUND_SLACK: f64 = 1e-10;
pub const SECTOR_SLACK: f64 = 1e-12;
pub const COLLISION_DIST: f64 = 1e-12;
pub const SEPARATION: f64 = 1e-6;

/// Outcome of a grid check. Margins are signed and relative; positive means
/// the inequality holds, a violation is a margin below `−slack`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    pub worst_margin: f64,
    pub worst_at: Vec<f64>,
    pub points: usize,
    pub violations: usize,
    pub slack: f64,
}

impl Verdict {
    fn from_margins(margins: Vec<(f64, Vec<f64>)>, slack: f64) -> Self {
        let points = margins.len();
        let violations = margins.iter().filter(|(m, _)| !(*m >= -slack)).count();
        let (worst_margin, worst_at) = margins
            .into_iter()
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Less))
            .unwrap_or((f64::INFINITY, vec![]));
        Verdict {
            passed: violations == 0,
            worst_margin,
            worst_at,
            points,
            violations,
            slack,
        }
    }

    /// Combines verdicts over several families.
    pub fn merge(vs: &[Verdict]) -> Verdict {
        let mut out = Verdict {
            passed: true,
            worst_margin: f64::INFINITY,
            worst_at: vec![],
            points: 0,
            violations: 0,
            slack: vs.first().map_or(0.0, |v| v.slack),
        };
        for v in vs {
            out.passed &= v.passed;
            out.points += v.points;
            out.violations += v.violations;
            if v.worst_margin < out.worst_margin {
                out.worst_margin = v.worst_margin;
                out.worst_at = v.worst_at.clone();
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityGrid {
    pub x_values: Vec<f64>,
    pub sigma_values: Vec<f64>,
    pub delta: f64,
    pub samples: usize,
}

fn require_supermajorized(p: &ParameterSet) -> Result<()> {
    if !p.is_real() {
        return Err(Error::Precondition("real parameters required".into()));
    }
    if !majorization_verdict(&p.a_re(), &p.b_re())?.weak_supermajorized {
        return Err(Error::Precondition("B ≺^W A required".into()));
    }
    Ok(())
}

fn real_eval(rep: &Representation, x: f64) -> Result<f64> {
    Ok(rep.eval(Complex64::new(x, 0.0))?.re)
}

/// `x ↦ F(σ, A+δ; B+δ; −x)/F(σ, A; B; −x)` on an increasing grid in
/// `(−1, ∞)`: decreasing for `σ > 0`, increasing for `σ < 0`.
pub fn ratio_monotonicity(p: &ParameterSet, delta: f64, xs: &[f64], cfg: &QuadratureConfig) -> Result<Verdict> {
    require_supermajorized(p)?;
    if !(delta > 0.0) {
        return Err(Error::Precondition("δ must be positive".into()));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) || xs.first().is_some_and(|x| *x <= -1.0) {
        return Err(Error::Domain("grid must increase inside (−1, ∞)".into()));
    }
    let num = Representation::new(&p.shifted(delta), cfg)?;
    let den = Representation::new(p, cfg)?;
    let ratios: Vec<f64> = xs
        .par_iter()
        .map(|&x| Ok(real_eval(&num, x)? / real_eval(&den, x)?))
        .collect::<Result<_>>()?;
    let sign = if p.sigma.re > 0.0 { 1.0 } else { -1.0 };
    let margins = ratios
        .windows(2)
        .zip(xs.windows(2))
        .map(|(r, x)| (sign * (r[0] - r[1]) / r[0].abs(), vec![x[0], x[1]]))
        .collect();
    Ok(Verdict::from_margins(margins, MONOTONE_SLACK))
}

/// `(1 + x∏aᵢ/bᵢ)^{−σ} ≤ F(σ, A; B; −x)` for `x > −1`.
pub fn lower_bound_check(p: &ParameterSet, xs: &[f64], cfg: &QuadratureConfig) -> Result<Verdict> {
    require_supermajorized(p)?;
    if !(p.sigma.re > 0.0) {
        return Err(Error::Precondition("σ > 0 required".into()));
    }
    if xs.iter().any(|&x| !(x > -1.0)) {
        return Err(Error::Domain("x must exceed −1".into()));
    }
    let ratio: f64 = p.a_re().iter().zip(p.b_re()).map(|(a, b)| a / b).product();
    let rep = Representation::new(p, cfg)?;
    let s = p.sigma.re;
    let margins = xs
        .par_iter()
        .map(|&x| {
            let f = real_eval(&rep, x)?;
            let bound = (1.0 + x * ratio).powf(-s);
            Ok(((f - bound) / f, vec![x]))
        })
        .collect::<Result<_>>()?;
    Ok(Verdict::from_margins(margins, BOUND_SLACK))
}

/// `F(σ, A; B; −x) < (1 + x∏(aᵢ−1)/(bᵢ−1))^{−σ}` for `x > 0`,
/// `0 < σ ≤ 1`, all entries of `A` and `B` above 1.
pub fn upper_bound_check(p: &ParameterSet, xs: &[f64], cfg: &QuadratureConfig) -> Result<Verdict> {
    require_supermajorized(p)?;
    let s = p.sigma.re;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Precondition("0 < σ ≤ 1 required".into()));
    }
    if p.a_re().iter().chain(p.b_re().iter()).any(|&v| !(v > 1.0)) {
        return Err(Error::Precondition("all aᵢ, bᵢ must exceed 1".into()));
    }
    if xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Domain("x must be positive".into()));
    }
    let ratio: f64 = p.a_re().iter().zip(p.b_re()).map(|(a, b)| (a - 1.0) / (b - 1.0)).product();
    let rep = Representation::new(p, cfg)?;
    let margins = xs
        .par_iter()
        .map(|&x| {
            let f = real_eval(&rep, x)?;
            let bound = (1.0 + x * ratio).powf(-s);
            Ok(((bound - f) / f, vec![x]))
        })
        .collect::<Result<_>>()?;
    Ok(Verdict::from_margins(margins, BOUND_SLACK))
}

/// One point of the four-point inequality
/// `f(σ₁+δ) f(σ₂) ≤ f(σ₁) f(σ₂+δ)` with `f(σ) = F(σ, A; B; x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogConvexPoint {
    pub x: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub delta: f64,
}

fn four_point_margin(f: impl Fn(f64) -> Result<f64>, pt: &LogConvexPoint) -> Result<f64> {
    let lhs = f(pt.sigma1 + pt.delta)? * f(pt.sigma2)?;
    let rhs = f(pt.sigma1)? * f(pt.sigma2 + pt.delta)?;
    Ok((rhs - lhs) / rhs.abs())
}

/// Four-point log-convexity in `σ` for `x < 1`, `0 ≤ σ₁ < σ₂`, `δ > 0`.
/// The `σ` of `p` is ignored.
pub fn logconvexity_check(p: &ParameterSet, points: &[LogConvexPoint], cfg: &QuadratureConfig) -> Result<Verdict> {
    require_supermajorized(p)?;
    for pt in points {
        if !(pt.x < 1.0 && pt.sigma1 >= 0.0 && pt.sigma1 < pt.sigma2 && pt.delta > 0.0) {
            return Err(Error::Domain(format!("bad four-point sample {pt:?}")));
        }
    }
    let rep = Representation::new(p, cfg)?;
    let margins = points
        .par_iter()
        .map(|pt| {
            let f = |s: f64| Ok(rep.eval_with_exponent(Complex64::new(-pt.x, 0.0), Complex64::new(s, 0.0))?.value.re);
            Ok((four_point_margin(f, pt)?, vec![pt.x, pt.sigma1, pt.sigma2, pt.delta]))
        })
        .collect::<Result<_>>()?;
    Ok(Verdict::from_margins(margins, BOUND_SLACK))
}

/// A four-point violation found by [`negative_control_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlFinding {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub point: LogConvexPoint,
    pub margin: f64,
}

/// Searches families that satisfy the elementary-symmetric chain but not
/// `B ≺^W A` for four-point violations at `x ∈ (−0.95, 0)` (series
/// evaluation). Findings are reported, not asserted.
pub fn negative_control_search(seed: u64, q: usize, families: usize, points: usize) -> Result<Vec<ControlFinding>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    let mut tried = 0;
    while tried < families {
        tried += 1;
        let Some((a, b)) = random_chain_not_supermajorized(&mut rng, q) else {
            continue;
        };
        debug_assert!(chain_condition(&a, &b));
        for _ in 0..points {
            let pt = LogConvexPoint {
                x: rng.gen_range(-0.95..0.0),
                sigma1: rng.gen_range(0.0..2.0),
                sigma2: 0.0,
                delta: rng.gen_range(0.05..2.0),
            };
            let pt = LogConvexPoint {
                sigma2: pt.sigma1 + rng.gen_range(0.05..2.0),
                ..pt
            };
            let f = |s: f64| -> Result<f64> {
                let ps = ParameterSet::real(s, &a, &b)?;
                Ok(eval_series(&ps, Complex64::new(pt.x, 0.0), 1e-15)?.value.re)
            };
            let m = four_point_margin(f, &pt)?;
            if m < -BOUND_SLACK {
                found.push(ControlFinding {
                    a: a.clone(),
                    b: b.clone(),
                    point: pt,
                    margin: m,
                });
            }
        }
    }
    Ok(found)
}

// Mapping ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    /// `0 < arg z < π/σ`, radii `10^{−2}..10²`.
    Sector { sigma: f64 },
    /// `Re z < 1`.
    HalfPlane,
    /// `|z| < r`.
    Disk { r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MappingProbe {
    pub region: Region,
    pub sample_count: usize,
    pub seed: u64,
}

impl MappingProbe {
    /// Seeded sample points strictly inside the region.
    pub fn points(&self) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.sample_count)
            .map(|_| match self.region {
                Region::Sector { sigma } => {
                    let r = 10f64.powf(rng.gen_range(-2.0..2.0));
                    let t = rng.gen_range(0.001..0.999) * PI / sigma;
                    Complex64::from_polar(r, t)
                }
                Region::HalfPlane => {
                    let r = 10f64.powf(rng.gen_range(-2.0..2.0));
                    let t = rng.gen_range(-0.999..0.999) * PI / 2.0;
                    Complex64::new(1.0, 0.0) - Complex64::from_polar(r, t)
                }
                Region::Disk { r } => {
                    let rad = r * rng.gen::<f64>().sqrt();
                    Complex64::from_polar(rad, rng.gen_range(-PI..PI))
                }
            })
            .collect()
    }
}

/// `Im F(σ, A; B; −z) < 0` for `z` in the sector `0 < arg z < π/σ`,
/// `σ ≥ 1`. The margin is `−Im F`.
pub fn sector_map_check(p: &ParameterSet, probe: &MappingProbe, cfg: &QuadratureConfig) -> Result<Verdict> {
    require_supermajorized(p)?;
    if !(p.sigma.re >= 1.0) {
        return Err(Error::Precondition("σ ≥ 1 required".into()));
    }
    let rep = Representation::new(p, cfg)?;
    let margins = probe
        .points()
        .par_iter()
        .map(|&z| Ok((-rep.eval(z)?.im - SECTOR_SLACK, vec![z.re, z.im])))
        .collect::<Result<_>>()?;
    Ok(Verdict::from_margins(margins, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MappedFunction {
    /// `z ↦ F(σ, A; B; z)`
    F,
    /// `z ↦ z F(σ, A; B; z)`
    ZF,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceVerdict {
    pub passed: bool,
    pub function: MappedFunction,
    pub samples: usize,
    pub collisions: usize,
    /// Smallest `|f(z₁) − f(z₂)|` over pairs with `|z₁ − z₂| > 1e−6`.
    pub closest_images: f64,
    pub closest_pair: Vec<f64>,
    /// Smallest `|f′|` on the derivative subgrid.
    pub min_derivative: f64,
}

/// Sampled injectivity plus a nonvanishing-derivative check: a battery of
/// necessary conditions for univalence, not a proof.
pub fn univalence_check(p: &ParameterSet, which: MappedFunction, probe: &MappingProbe, cfg: &QuadratureConfig) -> Result<UnivalenceVerdict> {
    require_supermajorized(p)?;
    let rep = Representation::new(p, cfg)?;
    let zs = probe.points();
    // F(z) = rep(−z), F′(z) = −rep′(−z)
    let vals: Vec<(Complex64, Complex64)> = zs
        .par_iter()
        .map(|&z| {
            let f = rep.eval(-z)?;
            let df = -rep.eval_derivative(-z)?;
            Ok(match which {
                MappedFunction::F => (f, df),
                MappedFunction::ZF => (z * f, f + z * df),
            })
        })
        .collect::<Result<_>>()?;
    let n = zs.len();
    let (closest, pair, collisions) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = f64::INFINITY;
            let mut pair = (i, i);
            let mut coll = 0usize;
            for k in i + 1..n {
                if (zs[i] - zs[k]).norm() <= SEPARATION {
                    continue;
                }
                let d = (vals[i].0 - vals[k].0).norm();
                if d <= COLLISION_DIST {
                    coll += 1;
                }
                if d < best {
                    best = d;
                    pair = (i, k);
                }
            }
            (best, pair, coll)
        })
        .reduce(
            || (f64::INFINITY, (0, 0), 0),
            |a, b| {
                let c = a.2 + b.2;
                if b.0 < a.0 {
                    (b.0, b.1, c)
                } else {
                    (a.0, a.1, c)
                }
            },
        );
    let min_derivative = vals.iter().step_by(10).map(|v| v.1.norm()).fold(f64::INFINITY, f64::min);
    Ok(UnivalenceVerdict {
        passed: collisions == 0 && min_derivative > 0.0 && min_derivative.is_finite(),
        function: which,
        samples: n,
        collisions,
        closest_images: closest,
        closest_pair: vec![zs[pair.0].re, zs[pair.0].im, zs[pair.1].re, zs[pair.1].im],
        min_derivative,
    })
}

/// `min Re(z g′(z)/g(z))` for `g(z) = z F(σ, A; B; z)` on the circle
/// `|z| = r < 1`, series evaluation at `n` equally spaced points.
pub fn starlikeness_check(p: &ParameterSet, r: f64, n: usize) -> Result<Verdict> {
    require_supermajorized(p)?;
    let s = p.sigma.re;
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Precondition("0 < σ ≤ 1 required".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain("radius must lie in (0, 1)".into()));
    }
    let (factor, dp) = derivative_params(p);
    let margins = (0..n)
        .into_par_iter()
        .map(|k| {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64);
            let f = eval_series(p, z, 1e-15)?.value;
            let df = factor * eval_series(&dp, z, 1e-15)?.value;
            // z g′/g = 1 + z F′/F
            let v = Complex64::new(1.0, 0.0) + z * df / f;
            Ok((v.re, vec![z.re, z.im]))
        })
        .collect::<Result<_>>()?;
    Ok(Verdict::from_margins(margins, 0.0))
}

// Random families ------------------------------------------------------------------

/// Seeded `B ≺^W A` families with `ψ ∈ [0.2, 2)`, `q` cycling through
/// `qs`, `σ` uniform in `sigma_range`, entries shifted by `shift`.
pub fn random_families(seed: u64, count: usize, qs: &[usize], sigma_range: (f64, f64), shift: f64) -> Vec<ParameterSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let q = qs[i % qs.len()];
            let psi = rng.gen_range(0.2..2.0);
            let (a, b) = random_supermajorized(&mut rng, q, psi);
            let a: Vec<f64> = a.iter().map(|v| v + shift).collect();
            let b: Vec<f64> = b.iter().map(|v| v + shift).collect();
            let sigma = if sigma_range.0 == sigma_range.1 {
                sigma_range.0
            } else {
                rng.gen_range(sigma_range.0..sigma_range.1)
            };
            ParameterSet::real(sigma, &a, &b).expect("positive parameters")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn constants() {
        assert!((r_star() - 0.933_898_592_477_714).abs() < 1e-14);
        assert!((r_s() - 0.810_465_452_374_363).abs() < 1e-14);
    }

    #[test]
    fn ratio_decreases_for_positive_sigma() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        let v = ratio_monotonicity(&p, 1.0, &[0.0, 1.0, 5.0], &cfg()).unwrap();
        assert!(v.passed && v.worst_margin > 0.0);
        let p = ParameterSet::real(-0.5, &[1.0], &[2.0]).unwrap();
        let v = ratio_monotonicity(&p, 1.0, &[0.0, 1.0, 5.0], &cfg()).unwrap();
        assert!(v.passed && v.worst_margin > 0.0);
    }

    #[test]
    fn lower_bound_examples() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        let v = lower_bound_check(&p, &[1.0], &cfg()).unwrap();
        // ln 2 − 2/3
        assert!((v.worst_margin - (2f64.ln() - 2.0 / 3.0) / 2f64.ln()).abs() < 1e-9);
        let v = lower_bound_check(&p, &[0.0], &cfg()).unwrap();
        assert!(v.worst_margin.abs() < 1e-12);
    }

    #[test]
    fn upper_bound_example() {
        let p = ParameterSet::real(1.0, &[2.0], &[3.0]).unwrap();
        let v = upper_bound_check(&p, &[1.0], &cfg()).unwrap();
        let f = 2.0 * (1.0 - 2f64.ln());
        assert!((v.worst_margin - (2.0 / 3.0 - f) / f).abs() < 1e-9);
        let bad = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        assert!(upper_bound_check(&bad, &[1.0], &cfg()).is_err());
    }

    #[test]
    fn four_point_examples() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        let pts = [
            LogConvexPoint { x: -1.0, sigma1: 0.5, sigma2: 1.0, delta: 0.5 },
            LogConvexPoint { x: 0.0, sigma1: 0.5, sigma2: 1.0, delta: 0.5 },
        ];
        let v = logconvexity_check(&p, &pts, &cfg()).unwrap();
        assert!(v.passed);
    }

    #[test]
    fn sector_sign_at_i() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        let rep = Representation::new(&p, &cfg()).unwrap();
        let v = rep.eval(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v.im + 0.5 * 2f64.ln()).abs() < 1e-10);
        assert!((v.re - PI / 4.0).abs() < 1e-10);
        let w = rep.eval(Complex64::new(0.0, -1.0)).unwrap();
        assert!((w.im + v.im).abs() < 1e-14);
    }

    #[test]
    fn starlike_near_origin() {
        let p = ParameterSet::real(1.0, &[1.0], &[2.0]).unwrap();
        let v = starlikeness_check(&p, 1e-4, 16).unwrap();
        assert!((v.worst_margin - 1.0).abs() < 1e-3);
    }

    #[test]
    fn mobius_case_is_injective() {
        let p = ParameterSet::real(1.0, &[1.5], &[1.5]).unwrap();
        let probe = MappingProbe {
            region: Region::HalfPlane,
            sample_count: 300,
            seed: 3,
        };
        let v = univalence_check(&p, MappedFunction::ZF, &probe, &cfg()).unwrap();
        assert!(v.passed);
    }
}
