//! Symplectic Fourier transform on functions, Fourier–Weyl transform on
//! operators, their inverses, twisted convolution and Wigner functions.
//!
//! All transforms are direct `O(|Ξ|²)` sums. The dual weight equals the
//! primal weight `1/|G|`, which makes `F_σ` an involution.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::convolution::{conv_ab, conv_fa, conv_ff, DualFunction, PhaseFunction};
use crate::error::{QhaError, Result};
use crate::linalg::{rank, Exponent, Operator};
use crate::phase_space::{MultiplierKind, PhaseSpace};
use crate::random::{self, Rng};
use crate::representation::Representation;

fn check_fun(ps: &PhaseSpace, f: &PhaseFunction) -> Result<()> {
    if f.dim() != ps.dim() {
        return Err(QhaError::PhaseSpaceMismatch(format!(
            "function over |G| = {}, phase space has |G| = {}",
            f.dim(),
            ps.dim()
        )));
    }
    Ok(())
}

/// `F_σ(f)(ξ) = w·Σ_x σ(x,ξ) f(x)`.
pub fn fourier_sigma(ps: &PhaseSpace, f: &PhaseFunction) -> Result<DualFunction> {
    check_fun(ps, f)?;
    let p = ps.points();
    let w = ps.weight();
    let values = (0..p)
        .map(|xi| (0..p).map(|x| ps.sigma(x, xi) * f.get(x)).sum::<Complex64>() * w)
        .collect();
    PhaseFunction::new(ps.dim(), values)
}

/// `F_σ'(F)(y) = w·Σ_ξ σ(ξ,y) F(ξ)`.
pub fn fourier_sigma_inv(ps: &PhaseSpace, f: &DualFunction) -> Result<PhaseFunction> {
    check_fun(ps, f)?;
    let p = ps.points();
    let w = ps.weight();
    let values = (0..p)
        .map(|y| (0..p).map(|xi| ps.sigma(xi, y) * f.get(xi)).sum::<Complex64>() * w)
        .collect();
    PhaseFunction::new(ps.dim(), values)
}

/// `F_U(A)(ξ) = tr(A U_ξ*)`.
pub fn fourier_weyl(rep: &Representation, a: &Operator) -> Result<DualFunction> {
    if a.dim() != rep.dim() {
        return Err(QhaError::DimensionMismatch {
            expected: rep.dim(),
            got: a.dim(),
        });
    }
    let values = (0..rep.points()).map(|xi| rep.trace_against(a, xi)).collect();
    PhaseFunction::new(rep.dim(), values)
}

/// `F_U⁻¹(f) = w·Σ_ξ f(ξ) U_ξ`.
pub fn fourier_weyl_inv(rep: &Representation, f: &DualFunction) -> Result<Operator> {
    check_fun(rep.phase_space(), f)?;
    let n = rep.dim();
    let mut acc = DMatrix::zeros(n, n);
    let w = rep.weight();
    for xi in 0..rep.points() {
        rep.add_scaled_unitary(&mut acc, xi, f.get(xi) * w);
    }
    Ok(Operator::from_matrix_unchecked(acc))
}

/// `(f ∗_m g)(ξ) = w·Σ_η f(ξ−η) g(η) m(ξ−η, η)`.
pub fn twisted_conv(ps: &PhaseSpace, f: &DualFunction, g: &DualFunction) -> Result<DualFunction> {
    check_fun(ps, f)?;
    check_fun(ps, g)?;
    let p = ps.points();
    let w = ps.weight();
    let values = (0..p)
        .map(|xi| {
            (0..p)
                .map(|eta| {
                    let d = ps.sub(xi, eta);
                    f.get(d) * g.get(eta) * ps.m(d, eta)
                })
                .sum::<Complex64>()
                * w
        })
        .collect();
    PhaseFunction::new(ps.dim(), values)
}

/// `f^{*m}(x) = conj(f(−x)·m(−x, x))`, so that `F_U⁻¹(f)* = F_U⁻¹(f^{*m})`.
pub fn twisted_involution(ps: &PhaseSpace, f: &DualFunction) -> Result<DualFunction> {
    check_fun(ps, f)?;
    let values = (0..ps.points())
        .map(|x| {
            let nx = ps.neg(x);
            (f.get(nx) * ps.m(nx, x)).conj()
        })
        .collect();
    PhaseFunction::new(ps.dim(), values)
}

/// `F_σ'(F_U(A))`.
pub fn wigner(rep: &Representation, a: &Operator) -> Result<PhaseFunction> {
    fourier_sigma_inv(rep.phase_space(), &fourier_weyl(rep, a)?)
}

/// Rank of `vec(A) ↦ F_U(A)`; full rank `|G|²` means `F_U` is injective.
pub fn weyl_transform_rank(rep: &Representation) -> usize {
    let n = rep.dim();
    let p = rep.points();
    let mut m = DMatrix::zeros(p, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e = Operator::zeros(n).into_matrix();
            e[(i, j)] = Complex64::new(1.0, 0.0);
            let e = Operator::from_matrix_unchecked(e);
            for xi in 0..p {
                m[(xi, i * n + j)] = rep.trace_against(&e, xi);
            }
        }
    }
    rank(&m, 1e-10)
}

/// `z/2` on a 2-regular phase space.
pub fn halve_point(ps: &PhaseSpace, z: usize) -> Result<usize> {
    let g = ps.group();
    if !g.is_two_regular() {
        return Err(QhaError::NotTwoRegular);
    }
    let n = ps.dim();
    Ok(g.halve_idx(z / n) * n + g.halve_idx(z % n))
}

/// Largest `|F_U(U_{x/2} A U_{x/2})(ξ) − F_U(A)(ξ − x)|` over random `A` and
/// all `x`, `ξ`. Requires the Weyl kind.
pub fn verify_modulation(rep: &Representation, trials: usize, rng: &mut Rng) -> Result<f64> {
    let ps = rep.phase_space();
    if ps.multiplier().kind() != MultiplierKind::Weyl {
        return Err(QhaError::UnsupportedMultiplier(format!(
            "modulation identity needs the weyl kind, got {}",
            ps.multiplier().kind()
        )));
    }
    let n = rep.dim();
    let mut ops = vec![Operator::identity(n)];
    ops.extend((0..trials).map(|_| random::operator(rng, n)));
    let mut dev = 0.0f64;
    for a in &ops {
        let fa = fourier_weyl(rep, a)?;
        for x in 0..rep.points() {
            let h = halve_point(ps, x)?;
            let mo = rep.mul_right(&rep.mul_left(h, a), h);
            let lhs = fourier_weyl(rep, &mo)?;
            dev = dev.max(lhs.max_abs_diff(&fa.translate(ps, x)));
        }
    }
    Ok(dev)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HausdorffYoungReport {
    pub trials: usize,
    pub checks: usize,
    pub violations: usize,
    pub max_ratio: f64,
    /// `max | ‖A‖_{T²} − ‖F_U(A)‖_{L²} |`.
    pub plancherel_max_dev: f64,
    pub passed: bool,
}

/// Both Hausdorff–Young families for `p ∈ {1, 4/3, 2}` plus operator
/// Plancherel.
pub fn verify_hausdorff_young(
    rep: &Representation,
    trials: usize,
    rng: &mut Rng,
    slack: f64,
) -> Result<HausdorffYoungReport> {
    let n = rep.dim();
    let exps = [Exponent::Finite(1.0), Exponent::Finite(4.0 / 3.0), Exponent::Finite(2.0)];
    let mut checks = 0;
    let mut violations = 0;
    let mut max_ratio = 0.0f64;
    let mut plancherel = 0.0f64;
    for _ in 0..trials {
        let a = random::operator(rng, n);
        let f = PhaseFunction::new(n, random::function(rng, n * n))?;
        let fa = fourier_weyl(rep, &a)?;
        let inv = fourier_weyl_inv(rep, &f)?;
        for &p in &exps {
            let q = p.conjugate();
            for (lhs, rhs) in [
                (fa.lp_norm(q), a.schatten_norm(p)),
                (inv.schatten_norm(q), f.lp_norm(p)),
            ] {
                checks += 1;
                if lhs > rhs + slack * (1.0 + rhs) {
                    violations += 1;
                }
                max_ratio = max_ratio.max(lhs / rhs);
            }
        }
        let d = (a.schatten_norm(Exponent::Finite(2.0)) - fa.lp_norm(Exponent::Finite(2.0))).abs();
        plancherel = plancherel.max(d);
    }
    Ok(HausdorffYoungReport {
        trials,
        checks,
        violations,
        max_ratio,
        plancherel_max_dev: plancherel,
        passed: violations == 0,
    })
}

/// Maximum deviations of the transform identities on random inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierReport {
    pub trials: usize,
    pub sigma_inversion_dev: f64,
    pub sigma_plancherel_dev: f64,
    pub sigma_convolution_dev: f64,
    pub sigma_shift_dev: f64,
    pub weyl_inversion_dev: f64,
    pub riemann_lebesgue_excess: f64,
    pub convolution_fa_dev: f64,
    pub convolution_ab_dev: f64,
    pub shift_dev: f64,
    pub dual_shift_dev: f64,
    pub product_dev: f64,
    pub adjoint_dev: f64,
    pub inverse_adjoint_dev: f64,
    pub wigner_integral_dev: f64,
    /// Only meaningful for the Weyl kind; canonical-kind Wigner functions of
    /// Hermitian operators are generally complex.
    pub wigner_max_imag: f64,
    pub injectivity_rank: usize,
    pub expected_rank: usize,
    pub modulation_dev: Option<f64>,
    pub hausdorff_young: HausdorffYoungReport,
    pub passed: bool,
}

/// Runs the full transform identity suite.
pub fn verify_fourier(rep: &Representation, trials: usize, rng: &mut Rng, tol: f64) -> Result<FourierReport> {
    let ps = rep.phase_space();
    let n = rep.dim();
    let p = rep.points();
    let mut r = FourierReport {
        trials,
        sigma_inversion_dev: 0.0,
        sigma_plancherel_dev: 0.0,
        sigma_convolution_dev: 0.0,
        sigma_shift_dev: 0.0,
        weyl_inversion_dev: 0.0,
        riemann_lebesgue_excess: f64::NEG_INFINITY,
        convolution_fa_dev: 0.0,
        convolution_ab_dev: 0.0,
        shift_dev: 0.0,
        dual_shift_dev: 0.0,
        product_dev: 0.0,
        adjoint_dev: 0.0,
        inverse_adjoint_dev: 0.0,
        wigner_integral_dev: 0.0,
        wigner_max_imag: 0.0,
        injectivity_rank: weyl_transform_rank(rep),
        expected_rank: n * n,
        modulation_dev: None,
        hausdorff_young: verify_hausdorff_young(rep, trials, rng, tol)?,
        passed: false,
    };
    let l2 = Exponent::Finite(2.0);
    for _ in 0..trials {
        let f = PhaseFunction::new(n, random::function(rng, p))?;
        let g = PhaseFunction::new(n, random::function(rng, p))?;
        let a = random::operator(rng, n);
        let b = random::operator(rng, n);
        let sf = fourier_sigma(ps, &f)?;
        let sg = fourier_sigma(ps, &g)?;
        r.sigma_inversion_dev = r
            .sigma_inversion_dev
            .max(fourier_sigma_inv(ps, &sf)?.max_abs_diff(&f))
            .max(fourier_sigma(ps, &sf)?.max_abs_diff(&f));
        r.sigma_plancherel_dev = r.sigma_plancherel_dev.max((sf.lp_norm(l2) - f.lp_norm(l2)).abs());
        let sfg = fourier_sigma(ps, &conv_ff(ps, &f, &g)?)?;
        r.sigma_convolution_dev = r.sigma_convolution_dev.max(sfg.max_abs_diff(&sf.mul(&sg)));

        let fa = fourier_weyl(rep, &a)?;
        let fb = fourier_weyl(rep, &b)?;
        r.weyl_inversion_dev = r.weyl_inversion_dev.max(fourier_weyl_inv(rep, &fa)?.max_abs_diff(&a));
        r.riemann_lebesgue_excess = r.riemann_lebesgue_excess.max(fa.max_abs() - a.trace_norm());

        let lhs = fourier_weyl(rep, &conv_fa(rep, &f, &a)?)?;
        r.convolution_fa_dev = r.convolution_fa_dev.max(lhs.max_abs_diff(&sf.mul(&fa)));

        let sab = fourier_sigma(ps, &conv_ab(rep, &a, &b)?)?;
        let expect = PhaseFunction::new(n, (0..p).map(|xi| ps.m(xi, ps.neg(xi)) * fa.get(xi) * fb.get(xi)).collect())?;
        r.convolution_ab_dev = r.convolution_ab_dev.max(sab.max_abs_diff(&expect));

        let prod = fourier_weyl(rep, &(&a * &b))?;
        r.product_dev = r.product_dev.max(prod.max_abs_diff(&twisted_conv(ps, &fa, &fb)?));

        let adj = fourier_weyl(rep, &a.adjoint())?;
        for xi in 0..p {
            let nxi = ps.neg(xi);
            let e = (ps.m(nxi, xi) * fa.get(nxi)).conj();
            r.adjoint_dev = r.adjoint_dev.max((adj.get(xi) - e).norm());
        }
        let inv_adj = fourier_weyl_inv(rep, &twisted_involution(ps, &f)?)?;
        r.inverse_adjoint_dev = r
            .inverse_adjoint_dev
            .max(inv_adj.max_abs_diff(&fourier_weyl_inv(rep, &f)?.adjoint()));

        for eta in 0..p {
            let sh = fourier_weyl(rep, &rep.shift_unchecked(eta, &a))?;
            for xi in 0..p {
                let d = (sh.get(xi) - ps.sigma(eta, xi) * fa.get(xi)).norm();
                r.shift_dev = r.shift_dev.max(d);
            }
            let ff = f.translate(ps, eta);
            let sff = fourier_sigma(ps, &ff)?;
            for xi in 0..p {
                let d = (sff.get(xi) - ps.sigma(eta, xi) * sf.get(xi)).norm();
                r.sigma_shift_dev = r.sigma_shift_dev.max(d);
            }
            // α_η(F_U(A))(ξ) = m(−η,ξ) F_U(U_{−η}* A)(ξ) = m(ξ,−η) F_U(A U_{−η}*)(ξ)
            let neta = ps.neg(eta);
            let u = rep.unitary(neta).adjoint();
            let left = fourier_weyl(rep, &(&u * &a))?;
            let right = fourier_weyl(rep, &(&a * &u))?;
            let shifted = fa.translate(ps, eta);
            for xi in 0..p {
                let d1 = (shifted.get(xi) - ps.m(neta, xi) * left.get(xi)).norm();
                let d2 = (shifted.get(xi) - ps.m(xi, neta) * right.get(xi)).norm();
                r.dual_shift_dev = r.dual_shift_dev.max(d1).max(d2);
            }
        }

        let h = a.hermitian_part();
        let wg = wigner(rep, &h)?;
        r.wigner_integral_dev = r.wigner_integral_dev.max((wg.integral() - h.trace()).norm());
        r.wigner_max_imag = r.wigner_max_imag.max(wg.max_imag());
    }
    if ps.multiplier().kind() == MultiplierKind::Weyl {
        r.modulation_dev = Some(verify_modulation(rep, trials.min(5), rng)?);
    }
    let devs = [
        r.sigma_inversion_dev,
        r.sigma_plancherel_dev,
        r.sigma_convolution_dev,
        r.sigma_shift_dev,
        r.weyl_inversion_dev,
        r.convolution_fa_dev,
        r.convolution_ab_dev,
        r.shift_dev,
        r.dual_shift_dev,
        r.product_dev,
        r.adjoint_dev,
        r.inverse_adjoint_dev,
        r.wigner_integral_dev,
        r.hausdorff_young.plancherel_max_dev,
    ];
    let scale = 1.0 + n as f64;
    r.passed = devs.iter().all(|&d| d <= tol * scale * scale)
        && r.riemann_lebesgue_excess <= tol * scale
        && r.injectivity_rank == r.expected_rank
        && r.hausdorff_young.passed
        && r.modulation_dev.is_none_or(|d| d <= tol * scale)
        && (ps.multiplier().kind() != MultiplierKind::Weyl || r.wigner_max_imag <= tol * scale);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::linalg::inner;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rep(orders: &[usize], weyl: bool) -> Representation {
        let g = FiniteAbelianGroup::new(orders).unwrap();
        let ps = if weyl {
            PhaseSpace::weyl(&g).unwrap()
        } else {
            PhaseSpace::canonical(&g).unwrap()
        };
        Representation::new(ps).unwrap()
    }

    /// Direct double sum, independent of the closed-form σ.
    fn sigma_oracle(ps: &PhaseSpace, f: &PhaseFunction) -> Vec<Complex64> {
        let p = ps.points();
        let s = ps.multiplier().symplectic_form();
        (0..p)
            .map(|xi| (0..p).map(|x| s.eval_idx(x, xi) * f.get(x)).sum::<Complex64>() / ps.dim() as f64)
            .collect()
    }

    #[test]
    fn sigma_transform_is_an_involution() {
        let mut r = random::rng(1);
        for orders in [&[2][..], &[3], &[2, 2]] {
            let rp = rep(orders, false);
            let ps = rp.phase_space();
            let n = ps.dim();
            let f = PhaseFunction::new(n, random::function(&mut r, n * n)).unwrap();
            let sf = fourier_sigma(ps, &f).unwrap();
            for (u, v) in sf.values().iter().zip(sigma_oracle(ps, &f)) {
                assert!((u - v).norm() < 1e-12);
            }
            assert!(fourier_sigma(ps, &sf).unwrap().max_abs_diff(&f) < 1e-10);
            assert!(fourier_sigma_inv(ps, &sf).unwrap().max_abs_diff(&f) < 1e-10);
        }
    }

    #[test]
    fn sigma_transform_of_units() {
        let rp = rep(&[3], false);
        let ps = rp.phase_space();
        let d = fourier_sigma(ps, &PhaseFunction::delta(3)).unwrap();
        assert!(d.max_abs_diff(&PhaseFunction::constant(3, c(1., 0.))) < 1e-12);
        let one = fourier_sigma(ps, &PhaseFunction::constant(3, c(1., 0.))).unwrap();
        assert!(one.max_abs_diff(&PhaseFunction::delta(3)) < 1e-12);
    }

    #[test]
    fn weyl_transform_examples() {
        let rp = rep(&[2, 3], false);
        let ps = rp.phase_space();
        let n = 6;
        let fi = fourier_weyl(&rp, &Operator::identity(n)).unwrap();
        assert!(fi.max_abs_diff(&PhaseFunction::delta(n)) < 1e-12);
        for z in 0..ps.points() {
            let fz = fourier_weyl(&rp, &rp.unitary(z)).unwrap();
            assert!((fz.get(z) - c(n as f64, 0.0)).norm() < 1e-12);
            let back = fourier_weyl_inv(&rp, &fz).unwrap();
            assert!(back.max_abs_diff(&rp.unitary(z)) < 1e-12);
        }
        let mut r = random::rng(2);
        let phi = random::vector(&mut r, n);
        let psi = random::vector(&mut r, n);
        let f = fourier_weyl(&rp, &Operator::outer(&phi, &psi)).unwrap();
        for xi in 0..ps.points() {
            let e = inner(&phi, &rp.apply(xi, &psi).unwrap());
            assert!((f.get(xi) - e).norm() < 1e-12);
        }
        assert!(fourier_weyl_inv(&rp, &fi).unwrap().max_abs_diff(&Operator::identity(n)) < 1e-12);
        assert_eq!(weyl_transform_rank(&rp), n * n);
    }

    #[test]
    fn twisted_convolution_is_noncommutative() {
        let rp = rep(&[2], false);
        let ps = rp.phase_space();
        let x = fourier_weyl(&rp, &rp.unitary(2)).unwrap();
        let z = fourier_weyl(&rp, &rp.unitary(1)).unwrap();
        let xz = twisted_conv(ps, &x, &z).unwrap();
        let zx = twisted_conv(ps, &z, &x).unwrap();
        assert!(xz.max_abs_diff(&zx) > 1.0);
        assert!(xz.max_abs_diff(&zx.scale(c(-1., 0.))) < 1e-12);
        let d = PhaseFunction::delta(2);
        assert!(twisted_conv(ps, &d, &x).unwrap().max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn full_suite_passes_for_both_kinds() {
        let mut r = random::rng(3);
        for (orders, weyl) in [(&[2][..], false), (&[3][..], false), (&[3][..], true), (&[2, 2][..], false), (&[5][..], true)] {
            let rp = rep(orders, weyl);
            let report = verify_fourier(&rp, 4, &mut r, 1e-10).unwrap();
            assert!(report.passed, "{orders:?} weyl={weyl}: {report:?}");
        }
    }

    #[test]
    fn wigner_normalization() {
        let rp = rep(&[3], true);
        let wi = wigner(&rp, &Operator::identity(3)).unwrap();
        assert!(wi.max_abs_diff(&PhaseFunction::constant(3, c(1., 0.))) < 1e-12);
        let mut p0 = Operator::zeros(3).into_matrix();
        p0[(0, 0)] = c(1., 0.);
        let w0 = wigner(&rp, &Operator::from_matrix(p0).unwrap()).unwrap();
        assert!(w0.max_imag() < 1e-12);
        assert!((w0.integral() - c(1., 0.)).norm() < 1e-12);
    }

    #[test]
    fn canonical_wigner_of_hermitian_can_be_complex() {
        let rp = rep(&[3], false);
        let mut r = random::rng(4);
        let h = random::hermitian(&mut r, 3);
        assert!(wigner(&rp, &h).unwrap().max_imag() > 1e-6);
    }

    #[test]
    fn modulation_needs_weyl() {
        let mut r = random::rng(5);
        assert!(verify_modulation(&rep(&[3], true), 3, &mut r).unwrap() < 1e-10);
        assert!(verify_modulation(&rep(&[3], false), 3, &mut r).is_err());
    }
}
