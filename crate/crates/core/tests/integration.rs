use num_complex::Complex64;
use stieltjes_hyp::analysis::{sector_map_check, MappingProbe, Region};
use stieltjes_hyp::gdensity::{meijer_g, GKernelSpec, QuadratureConfig};
use stieltjes_hyp::hypeval::eval_series;
use stieltjes_hyp::pade::{moments, orthogonal_roots, pade, pade_direct, table_determinant};
use stieltjes_hyp::stieltjes::{density_rho1, exact_order_test, PowerDenominatorRep, Representation};
use stieltjes_hyp::ParameterSet;

fn fam(sigma: f64, a: &[f64], b: &[f64]) -> ParameterSet {
    ParameterSet::real(sigma, a, b).unwrap()
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn endpoint_exponent_at_zero() {
    // simple pole ordering: G(x) ~ x^{min bottom} as x → 0
    let spec = GKernelSpec::real(&[2.0, 3.5], &[1.0, 1.7]).unwrap();
    let za = spec.zero_exponent();
    assert_eq!(za.multiplicity, 1);
    // two-point log slopes on a geometric grid cancel the constant factor
    let g: Vec<f64> = (2..=6).map(|k| meijer_g(10f64.powi(-k), &spec, &cfg()).unwrap()).collect();
    let dev: Vec<f64> = g.windows(2).map(|w| ((w[0] / w[1]).ln() / 10f64.ln() - za.a).abs()).collect();
    assert!(dev.windows(2).all(|d| d[1] < d[0]), "{dev:?}");
    assert!(dev[dev.len() - 1] <= 0.02 * za.a, "{dev:?}");
}

#[test]
fn rho1_nonnegative_for_small_sigma() {
    for p in [fam(0.5, &[1.0, 2.0], &[1.5, 3.0]), fam(0.8, &[1.0, 2.5], &[1.5, 3.2]), fam(1.0, &[1.2, 2.0, 3.0], &[1.5, 2.5, 3.5])] {
        for i in 1..200 {
            let s = i as f64 / 200.0;
            let v = density_rho1(s, &p, &cfg()).unwrap();
            assert!(v >= -1e-8, "{p:?} s={s} v={v}");
        }
    }
}

#[test]
fn order_ratios_approach_target_from_above() {
    let r = exact_order_test(&fam(0.5, &[1.0], &[2.0]), 0.1, 1e5, &cfg()).unwrap();
    // monotone up to quadrature noise
    for w in r.ratios.windows(2) {
        assert!(w[1] <= w[0] + 1e-6, "{:?}", r.ratios);
    }
    assert!(r.passes);
}

#[test]
fn power_denominator_real_on_positive_axis() {
    let rep = PowerDenominatorRep::new(&fam(2.0, &[1.5, 2.0], &[2.5, 3.0]), &cfg()).unwrap();
    for x in [0.1, 0.7, 3.0, 40.0] {
        let v = rep.eval(Complex64::new(x, 0.0)).unwrap();
        assert!(v.im.abs() <= cfg().abs_tol, "x={x} {v}");
    }
}

#[test]
fn integrand_branch_continuity() {
    // one turn of z near the cut: values vary continuously
    let rep = Representation::new(&fam(1.5, &[1.0, 2.0], &[2.0, 3.5]), &cfg()).unwrap();
    let mut prev = rep.eval(Complex64::from_polar(3.0, -3.0)).unwrap();
    for i in 1..=120 {
        let t = -3.0 + 6.0 * i as f64 / 120.0;
        let v = rep.eval(Complex64::from_polar(3.0, t)).unwrap();
        assert!((v - prev).norm() < 0.2, "jump at t={t}");
        prev = v;
    }
}

#[test]
fn stieltjes_lower_pade_bound() {
    // [0/1] is below F(−x) for σ = 1
    for p in [fam(1.0, &[1.0], &[2.0]), fam(1.0, &[1.0, 2.0], &[2.0, 3.5])] {
        let t = moments(&p, 4).unwrap().taylor();
        let (num, den) = pade_direct(&t, 0, 1).unwrap();
        for i in 0..200 {
            let x = -0.99 + 20.0 * i as f64 / 199.0;
            let approx = num[0] / (den[0] + den[1] * x);
            let exact = Representation::new(&p, &cfg()).unwrap().eval(Complex64::new(x, 0.0)).unwrap().re;
            assert!(approx <= exact + 1e-10, "x={x} {approx} {exact}");
        }
    }
}

#[test]
fn pade_residual_at_series_level() {
    let p = fam(1.0, &[1.0, 2.0], &[2.0, 3.5]);
    for m in 1..=6 {
        for j in [-1, 0, 2] {
            let a = pade(&p, m, j).unwrap();
            assert!(a.order_residual <= 1e-9, "m={m} j={j} {}", a.order_residual);
        }
    }
}

#[test]
fn orthogonal_roots_in_unit_interval() {
    let p = fam(0.7, &[1.0, 2.5], &[1.5, 3.2]);
    let mom = moments(&p, 30).unwrap();
    for m in 1..=6 {
        for j in [-1, 0, 1] {
            for r in orthogonal_roots(&mom, m, j).unwrap() {
                assert!(r.im.abs() < 1e-8 && r.re > 0.0 && r.re < 1.0, "m={m} j={j} root {r}");
            }
        }
    }
}

#[test]
fn hankel_determinants_positive() {
    let p = fam(1.0, &[1.0], &[2.0]);
    let mom = moments(&p, 30).unwrap();
    for n in 1..=5 {
        let (det, _) = table_determinant(&mom, n - 1, n);
        assert!(det > 0.0, "n={n} det={det}");
    }
}

#[test]
fn sector_image_conjugate_symmetric() {
    let p = fam(1.5, &[1.5, 2.0], &[2.0, 3.0]);
    let rep = Representation::new(&p, &cfg()).unwrap();
    let probe = MappingProbe {
        region: Region::Sector { sigma: 1.5 },
        sample_count: 200,
        seed: 3,
    };
    for z in probe.points().into_iter().take(50) {
        let f = rep.eval(-z).unwrap();
        let g = rep.eval(-z.conj()).unwrap();
        assert!((f.im + g.im).abs() <= 1e-10 * f.norm().max(1.0));
    }
    assert!(sector_map_check(&p, &probe, &cfg()).unwrap().passed);
}

#[test]
fn representation_handles_series_boundary() {
    // just inside the unit disk the series is slow; the integral is not
    let p = fam(0.6, &[1.0, 2.0], &[1.5, 3.0]);
    let z = Complex64::new(0.79, 0.0);
    let v = Representation::new(&p, &cfg()).unwrap().eval(z).unwrap();
    let s = eval_series(&p, -z, 1e-16).unwrap().value;
    assert!((v - s).norm() <= 1e-9);
}
