use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stieltjes_hyp::gdensity::{GKernelSpec, Kernel, QuadratureConfig};
use stieltjes_hyp::hypeval::{contiguous_shift, eval_series};
use stieltjes_hyp::params::{
    chain_condition, elementary_symmetric_all, majorization_verdict, pochhammer, random_supermajorized, weakly_supermajorized,
};
use stieltjes_hyp::stieltjes::Representation;
use stieltjes_hyp::ParameterSet;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A family with `B ≺^W A`, `ψ > 0`, built from a seed.
fn family(seed: u64, q: usize, psi: f64, sigma: f64) -> ParameterSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = random_supermajorized(&mut rng, q, psi);
    ParameterSet::real(sigma, &a, &b).unwrap()
}

fn disk_point(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

proptest! {
    #[test]
    fn supermajorized_pairs_satisfy_chain(seed in any::<u64>(), q in 2usize..=4, psi in 0.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = random_supermajorized(&mut rng, q, psi);
        prop_assert!(weakly_supermajorized(&a, &b));
        prop_assert!(chain_condition(&a, &b));
    }

    #[test]
    fn newton_inequality(x in prop::collection::vec(0.001f64..100.0, 2..8)) {
        let e = elementary_symmetric_all(&x);
        for k in 2..=x.len() {
            let lhs = e[k - 1] * e[k - 1];
            prop_assert!(lhs - e[k] * e[k - 2] >= -1e-12 * lhs);
        }
    }

    #[test]
    fn majorization_ignores_order(
        a in prop::collection::vec(0.1f64..5.0, 1..6),
        shift in prop::collection::vec(-1.0f64..2.0, 6),
        rot in 0usize..6,
    ) {
        let b: Vec<f64> = a.iter().zip(&shift).map(|(x, s)| x + s).collect();
        let v = majorization_verdict(&a, &b).unwrap();
        let mut ar = a.clone();
        ar.rotate_left(rot % a.len());
        let mut br = b.clone();
        br.reverse();
        let w = majorization_verdict(&ar, &br).unwrap();
        prop_assert_eq!(v.weak_supermajorized, w.weak_supermajorized);
        prop_assert_eq!(v.majorized, w.majorized);
        prop_assert_eq!(v.chain_holds, w.chain_holds);
    }

    #[test]
    fn pochhammer_splits(re in -5.0f64..5.0, im in -3.0f64..3.0, m in 0u64..20, n in 0u64..20) {
        let a = Complex64::new(re, im);
        let whole = pochhammer(a, m + n).value;
        let split = pochhammer(a, m).value * pochhammer(a + m as f64, n).value;
        let scale = whole.norm().max(split.norm());
        prop_assume!(scale > 1e-200 && scale.is_finite());
        prop_assert!((whole - split).norm() <= 1e-12 * scale);
    }

    #[test]
    fn series_real_symmetry(seed in any::<u64>(), q in 1usize..=3, r in 0.0f64..0.8, t in -3.1f64..3.1, sigma in 0.1f64..3.0) {
        let p = family(seed, q, 1.0, sigma);
        let z = disk_point(r, t);
        let v = eval_series(&p, z, 1e-15).unwrap().value;
        let w = eval_series(&p, z.conj(), 1e-15).unwrap().value;
        prop_assert!((v.conj() - w).norm() <= 1e-13 * v.norm().max(1.0));
    }

    #[test]
    fn series_tolerance_refinement(seed in any::<u64>(), q in 1usize..=3, r in 0.0f64..0.8, t in -3.1f64..3.1) {
        let p = family(seed, q, 0.8, 1.3);
        let z = disk_point(r, t);
        let tol = 1e-8;
        let coarse = eval_series(&p, z, tol).unwrap().value;
        let fine = eval_series(&p, z, tol / 1e6).unwrap().value;
        prop_assert!((coarse - fine).norm() <= 10.0 * tol * fine.norm().max(1.0));
    }

    #[test]
    fn contiguous_relation(seed in any::<u64>(), q in 1usize..=3, m in prop::sample::select(vec![-3.0, -2.0, 0.5, 1.0, 2.0, 4.0]), r in 0.0f64..0.5, t in -3.1f64..3.1) {
        let p = family(seed, q, 1.0, 0.9);
        let (lhs, rhs) = contiguous_shift(&p, m, disk_point(r, t)).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn representation_matches_series(seed in any::<u64>(), q in 1usize..=3, psi in 0.2f64..2.0, sigma in 0.2f64..3.0, r in 0.0f64..0.8, t in -3.1f64..3.1) {
        let p = family(seed, q, psi, sigma);
        let z = disk_point(r, t);
        let rep = Representation::new(&p, &QuadratureConfig::default()).unwrap();
        let v = rep.eval(z).unwrap();
        let s = eval_series(&p, -z, 1e-16).unwrap().value;
        prop_assert!((v - s).norm() <= 1e-7 * s.norm());
    }

    #[test]
    fn kernel_nonnegative_and_real(seed in any::<u64>(), q in 2usize..=3, psi in 0.2f64..2.0, x in 0.001f64..0.999) {
        let p = family(seed, q, psi, 1.0);
        let cfg = QuadratureConfig::default();
        let k = Kernel::new(&GKernelSpec::from_params(&p), &cfg).unwrap();
        let g = k.eval_pair(x, 1.0 - x);
        prop_assert!(g.value.re >= -1e-8);
        prop_assert!(g.imag_residual <= cfg.abs_tol);
    }
}

#[test]
fn moment_sequence_does_not_vanish_without_positive_psi() {
    // ψ = 0 and ψ < 0: (a)_k/(b)_k stays away from zero
    for (a, b) in [(vec![1.0, 3.0], vec![2.0, 2.0]), (vec![2.0], vec![1.5])] {
        let mut r = 1.0;
        for k in 0..100 {
            r *= a.iter().zip(&b).map(|(x, y)| (x + k as f64) / (y + k as f64)).product::<f64>();
        }
        assert!(r > 0.1, "{a:?} {b:?} → {r}");
    }
    let mut r = 1.0;
    for k in 0..100 {
        r *= (1.0 + k as f64) / (2.0 + k as f64);
    }
    assert!(r < 0.011);
}

#[test]
fn pochhammer_zero_length_is_one() {
    assert_eq!(pochhammer(c(-2.5), 0).value, c(1.0));
}
