use proptest::prelude::*;

use qha_core::bochner_wiener::{bochner_reconstruct, twisted_pd_check};
use qha_core::convolution::{conv_ab, conv_fa, conv_ff, PhaseFunction};
use qha_core::coorbit::{co_norm, wavelet_transform, Window};
use qha_core::correspondence::{apply_rule, CorrespondenceRule};
use qha_core::fourier::{fourier_sigma, fourier_sigma_inv, fourier_weyl, fourier_weyl_inv, wigner};
use qha_core::random;
use qha_core::{Exponent, FiniteAbelianGroup, MixedElement, MultiplierKind, PhaseSpace, Representation};

const TOL: f64 = 1e-9;

fn rep(case: usize) -> Representation {
    let (orders, kind): (&[usize], _) = match case {
        0 => (&[2], MultiplierKind::Canonical),
        1 => (&[3], MultiplierKind::Canonical),
        2 => (&[2, 2], MultiplierKind::Canonical),
        3 => (&[3], MultiplierKind::Weyl),
        _ => (&[5], MultiplierKind::Weyl),
    };
    let g = FiniteAbelianGroup::new(orders).unwrap();
    let ps = match kind {
        MultiplierKind::Weyl => PhaseSpace::weyl(&g).unwrap(),
        _ => PhaseSpace::canonical(&g).unwrap(),
    };
    Representation::new(ps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_transform_round_trips(case in 0usize..5, seed in any::<u64>()) {
        let r = rep(case);
        let a = random::operator(&mut random::rng(seed), r.dim());
        let back = fourier_weyl_inv(&r, &fourier_weyl(&r, &a).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&a) <= TOL);
    }

    #[test]
    fn symplectic_transform_is_an_involution(case in 0usize..5, seed in any::<u64>()) {
        let r = rep(case);
        let ps = r.phase_space();
        let f = PhaseFunction::new(r.dim(), random::function(&mut random::rng(seed), r.points())).unwrap();
        let back = fourier_sigma_inv(ps, &fourier_sigma(ps, &f).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&f) <= TOL);
        let twice = fourier_sigma(ps, &fourier_sigma(ps, &f).unwrap()).unwrap();
        prop_assert!(twice.max_abs_diff(&f) <= TOL);
    }

    #[test]
    fn wigner_integrates_to_trace(case in 0usize..5, seed in any::<u64>()) {
        let r = rep(case);
        let a = random::operator(&mut random::rng(seed), r.dim());
        let w = wigner(&r, &a).unwrap();
        prop_assert!((w.integral() - a.trace()).norm() <= TOL * (1.0 + a.trace_norm()));
    }

    #[test]
    fn convolutions_are_compatible(case in 0usize..5, seed in any::<u64>()) {
        let r = rep(case);
        let mut rng = random::rng(seed);
        let f = PhaseFunction::new(r.dim(), random::function(&mut rng, r.points())).unwrap();
        let g = PhaseFunction::new(r.dim(), random::function(&mut rng, r.points())).unwrap();
        let a = random::operator(&mut rng, r.dim());
        let b = random::operator(&mut rng, r.dim());
        let ps = r.phase_space();
        // f∗(g∗A) = (f∗g)∗A and f∗(A∗B) = (f∗A)∗B
        let lhs = conv_fa(&r, &f, &conv_fa(&r, &g, &a).unwrap()).unwrap();
        let rhs = conv_fa(&r, &conv_ff(ps, &f, &g).unwrap(), &a).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= TOL * (1.0 + rhs.max_abs()));
        let lhs = conv_ff(ps, &f, &conv_ab(&r, &a, &b).unwrap()).unwrap();
        let rhs = conv_ab(&r, &conv_fa(&r, &f, &a).unwrap(), &b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= TOL * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn operator_convolution_integrates_to_trace_product(case in 0usize..5, seed in any::<u64>()) {
        let r = rep(case);
        let mut rng = random::rng(seed);
        let a = random::operator(&mut rng, r.dim());
        let b = random::operator(&mut rng, r.dim());
        let c = conv_ab(&r, &a, &b).unwrap();
        let expected = a.trace() * b.trace();
        prop_assert!((c.integral() - expected).norm() <= TOL * (1.0 + expected.norm()));
    }

    #[test]
    fn densities_reconstruct_from_their_transform(case in 3usize..5, seed in any::<u64>()) {
        let r = rep(case);
        let rho = random::density(&mut random::rng(seed), r.dim());
        let f = fourier_weyl(&r, &rho).unwrap();
        prop_assert!(twisted_pd_check(r.phase_space(), &f, TOL).unwrap().is_pd);
        let rec = bochner_reconstruct(&r, &f, TOL).unwrap();
        prop_assert!(rec.certified);
        prop_assert!(rec.operator.max_abs_diff(&rho) <= TOL);
    }

    #[test]
    fn correspondence_preserves_positivity(case in 0usize..5, seed in any::<u64>()) {
        let r = rep(case);
        let mut rng = random::rng(seed);
        let rule = CorrespondenceRule::new(random::density(&mut rng, r.dim()), random::density(&mut rng, r.dim()), TOL).unwrap();
        let f = PhaseFunction::new(r.dim(), random::nonnegative_function(&mut rng, r.points())).unwrap();
        let u = MixedElement::new(f, random::psd(&mut rng, r.dim())).unwrap();
        let out = apply_rule(&r, &rule, &u).unwrap();
        prop_assert!(out.fun.min_real() >= -TOL && out.fun.max_imag() <= TOL);
        prop_assert!(out.op.hermitian_part().min_eigenvalue() >= -TOL);
    }

    #[test]
    fn wavelet_transform_is_isometric(case in 0usize..5, seed in any::<u64>()) {
        let r = rep(case);
        let mut rng = random::rng(seed);
        let win = Window::random(&r, &mut rng);
        let f = random::vector(&mut rng, r.dim());
        let wf = wavelet_transform(&r, &f, &win).unwrap();
        prop_assert!((wf.lp_norm(Exponent::Finite(2.0)) - f.norm()).abs() <= TOL * (1.0 + f.norm()));
        let basis = Window::basis(&r);
        let lp = f.iter().map(|v| v.norm().powi(3)).sum::<f64>().cbrt();
        prop_assert!((co_norm(&r, &f, Exponent::Finite(3.0), &basis).unwrap() - lp).abs() <= TOL * (1.0 + lp));
    }
}
