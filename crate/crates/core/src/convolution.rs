//! Convolutions of functions and operators over `Ξ`, the mixed product on
//! `L¹(Ξ) ⊕ T¹`, Young-type bounds and positivity audits.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};
use crate::linalg::{weighted_lp, Exponent, Operator};
use crate::phase_space::PhaseSpace;
use crate::random::{self, Rng};
use crate::representation::Representation;

/// A complex function on `Ξ` in canonical point order.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    dim: usize,
    values: Vec<Complex64>,
}

/// Same layout as [`PhaseFunction`], read as a function on the dual `Ξ̂`.
/// The dual weight equals the primal one.
pub type DualFunction = PhaseFunction;

impl PhaseFunction {
    /// `dim = |G|`; `values` must have length `|G|²`.
    pub fn new(dim: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(QhaError::DimensionMismatch {
                expected: dim * dim,
                got: values.len(),
            });
        }
        Ok(Self { dim, values })
    }

    /// Infers `|G|` from a length that must be a perfect square.
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        let dim = (values.len() as f64).sqrt().round() as usize;
        Self::new(dim, values)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(0.0, 0.0))
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self {
            dim,
            values: vec![c; dim * dim],
        }
    }

    /// `δ̃ = (1/w)·1_{0}`, the unit for convolution.
    pub fn delta(dim: usize) -> Self {
        Self::point_mass(dim, 0)
    }

    /// `(1/w)·1_{z}`.
    pub fn point_mass(dim: usize, z: usize) -> Self {
        let mut f = Self::zeros(dim);
        f.values[z] = Complex64::new(dim as f64, 0.0);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.dim as f64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, z: usize) -> Complex64 {
        self.values[z]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `w·Σ f`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.weight()
    }

    pub fn lp_norm(&self, p: Exponent) -> f64 {
        weighted_lp(self.values.iter().map(|v| v.norm()), self.weight(), p)
    }

    pub fn max_abs(&self) -> f64 {
        self.lp_norm(Exponent::Infinity)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    pub fn min_real(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(v.re))
    }

    /// `(α_x f)(y) = f(y − x)`.
    pub fn translate(&self, ps: &PhaseSpace, x: usize) -> Self {
        Self {
            dim: self.dim,
            values: (0..self.len()).map(|y| self.values[ps.sub(y, x)]).collect(),
        }
    }

    /// `f(−y)`.
    pub fn reflect(&self, ps: &PhaseSpace) -> Self {
        Self {
            dim: self.dim,
            values: (0..self.len()).map(|y| self.values[ps.neg(y)]).collect(),
        }
    }
}

/// An element `(f, A)` of `L¹(Ξ) ⊕ T¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedElement {
    pub fun: PhaseFunction,
    pub op: Operator,
}

impl MixedElement {
    pub fn new(fun: PhaseFunction, op: Operator) -> Result<Self> {
        if fun.dim() != op.dim() {
            return Err(QhaError::PhaseSpaceMismatch(format!(
                "function over |G| = {} paired with a {}-dimensional operator",
                fun.dim(),
                op.dim()
            )));
        }
        Ok(Self { fun, op })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            fun: self.fun.add(&other.fun),
            op: &self.op + &other.op,
        }
    }

    /// `‖f‖_{L¹} + ‖A‖_{T¹}`.
    pub fn norm(&self) -> f64 {
        self.fun.lp_norm(Exponent::Finite(1.0)) + self.op.trace_norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.fun
            .max_abs_diff(&other.fun)
            .max(self.op.max_abs_diff(&other.op))
    }
}

fn check_fun(rep: &Representation, f: &PhaseFunction) -> Result<()> {
    if f.dim() != rep.dim() {
        return Err(QhaError::PhaseSpaceMismatch(format!(
            "function over |G| = {}, phase space has |G| = {}",
            f.dim(),
            rep.dim()
        )));
    }
    Ok(())
}

fn check_op(rep: &Representation, a: &Operator) -> Result<()> {
    if a.dim() != rep.dim() {
        return Err(QhaError::DimensionMismatch {
            expected: rep.dim(),
            got: a.dim(),
        });
    }
    Ok(())
}

/// `(f∗g)(y) = w·Σ_x f(x) g(y − x)`.
pub fn conv_ff(ps: &PhaseSpace, f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction> {
    for h in [f, g] {
        if h.dim() != ps.dim() {
            return Err(QhaError::PhaseSpaceMismatch(format!(
                "function over |G| = {}, phase space has |G| = {}",
                h.dim(),
                ps.dim()
            )));
        }
    }
    let p = ps.points();
    let w = ps.weight();
    let values = (0..p)
        .map(|y| (0..p).map(|x| f.get(x) * g.get(ps.sub(y, x))).sum::<Complex64>() * w)
        .collect();
    PhaseFunction::new(ps.dim(), values)
}

/// `f∗A = w·Σ_x f(x) α_x(A)`.
pub fn conv_fa(rep: &Representation, f: &PhaseFunction, a: &Operator) -> Result<Operator> {
    check_fun(rep, f)?;
    check_op(rep, a)?;
    let n = rep.dim();
    let mut acc = DMatrix::zeros(n, n);
    for x in 0..rep.points() {
        let c = f.get(x);
        if c != Complex64::new(0.0, 0.0) {
            acc += rep.shift_unchecked(x, a).into_matrix() * c;
        }
    }
    Ok(Operator::from_matrix_unchecked(acc * Complex64::new(rep.weight(), 0.0)))
}

/// `(A∗B)(x) = tr(A α_x(β₋(B)))`.
pub fn conv_ab(rep: &Representation, a: &Operator, b: &Operator) -> Result<PhaseFunction> {
    check_op(rep, a)?;
    check_op(rep, b)?;
    let rb = rep.reflect_unchecked(b);
    let values = (0..rep.points())
        .map(|x| {
            let s = rep.shift_unchecked(x, &rb);
            // tr(A S) = Σ_{ij} A_{ji} S_{ij}
            a.mat().transpose().iter().zip(s.mat().iter()).map(|(u, v)| u * v).sum()
        })
        .collect();
    PhaseFunction::new(rep.dim(), values)
}

/// `(f,A)∗(g,B) = (f∗g + A∗B, f∗B + g∗A)`.
pub fn banach_product(rep: &Representation, u: &MixedElement, v: &MixedElement) -> Result<MixedElement> {
    let fun = conv_ff(rep.phase_space(), &u.fun, &v.fun)?.add(&conv_ab(rep, &u.op, &v.op)?);
    let op = &conv_fa(rep, &u.fun, &v.op)? + &conv_fa(rep, &v.fun, &u.op)?;
    MixedElement::new(fun, op)
}

/// The exponent grid `{1, 4/3, 2, 4, ∞}` used by the Young audit.
pub fn exponent_grid() -> Vec<Exponent> {
    vec![
        Exponent::Finite(1.0),
        Exponent::Finite(4.0 / 3.0),
        Exponent::Finite(2.0),
        Exponent::Finite(4.0),
        Exponent::Infinity,
    ]
}

/// All `(p, q, r)` from the grid with `1 + 1/r = 1/p + 1/q`.
pub fn young_triples() -> Vec<(Exponent, Exponent, Exponent)> {
    let grid = exponent_grid();
    let mut out = Vec::new();
    for &p in &grid {
        for &q in &grid {
            let rr = p.reciprocal() + q.reciprocal() - 1.0;
            if rr < -1e-12 {
                continue;
            }
            if let Some(&r) = grid.iter().find(|r| (r.reciprocal() - rr).abs() < 1e-12) {
                out.push((p, q, r));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub trials: usize,
    /// `max ‖uv − vu‖` for the mixed product.
    pub commutativity_dev: f64,
    /// `max ‖(uv)w − u(vw)‖`, relative to `1 + ‖(uv)w‖`.
    pub associativity_dev: f64,
    /// Integral identities `∫f∗g = ∫f∫g`, `tr(f∗A) = ∫f·trA`, `∫A∗B = trA·trB`.
    pub integral_dev: f64,
    /// `‖1∗A − tr(A)I‖`.
    pub unit_dev: f64,
    /// `‖‖uv‖ − ‖u‖‖v‖‖₊`, the excess over submultiplicativity.
    pub norm_excess: f64,
    pub passed: bool,
}

/// Audits the commutative Banach algebra `L¹(Ξ) ⊕ T¹` on random triples.
pub fn verify_algebra(rep: &Representation, trials: usize, rng: &mut Rng, tol: f64) -> Result<AlgebraReport> {
    let ps = rep.phase_space();
    let n = rep.dim();
    let p = rep.points();
    let one = PhaseFunction::constant(n, Complex64::new(1.0, 0.0));
    let mut report = AlgebraReport {
        trials,
        commutativity_dev: 0.0,
        associativity_dev: 0.0,
        integral_dev: 0.0,
        unit_dev: 0.0,
        norm_excess: 0.0,
        passed: false,
    };
    for _ in 0..trials {
        let mut el = || MixedElement::new(PhaseFunction::new(n, random::function(rng, p))?, random::operator(rng, n));
        let (u, v, w) = (el()?, el()?, el()?);
        let uv = banach_product(rep, &u, &v)?;
        report.commutativity_dev = report.commutativity_dev.max(uv.max_abs_diff(&banach_product(rep, &v, &u)?));
        let left = banach_product(rep, &uv, &w)?;
        let right = banach_product(rep, &u, &banach_product(rep, &v, &w)?)?;
        report.associativity_dev = report.associativity_dev.max(left.max_abs_diff(&right) / (1.0 + left.norm()));
        report.norm_excess = report.norm_excess.max(uv.norm() - u.norm() * v.norm());

        let (f, g, a, b) = (&u.fun, &v.fun, &u.op, &v.op);
        let ff = (conv_ff(ps, f, g)?.integral() - f.integral() * g.integral()).norm();
        let fa = (conv_fa(rep, f, a)?.trace() - f.integral() * a.trace()).norm();
        let ab = (conv_ab(rep, a, b)?.integral() - a.trace() * b.trace()).norm();
        report.integral_dev = report.integral_dev.max(ff).max(fa).max(ab);
        let unit = conv_fa(rep, &one, a)?.max_abs_diff(&Operator::identity(n).scale(a.trace()));
        report.unit_dev = report.unit_dev.max(unit);
    }
    report.passed = report.commutativity_dev <= tol
        && report.associativity_dev <= tol
        && report.integral_dev <= tol * 1e2
        && report.unit_dev <= tol
        && report.norm_excess <= tol;
    Ok(report)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct YoungReport {
    pub trials: usize,
    pub exponent_triples: usize,
    pub checks: usize,
    pub violations: usize,
    /// Largest `lhs / rhs` seen across all four inequality families.
    pub max_ratio: f64,
    pub passed: bool,
}

/// Audits the four Young inequalities on random inputs.
pub fn verify_young(rep: &Representation, trials: usize, rng: &mut Rng, slack: f64) -> Result<YoungReport> {
    let ps = rep.phase_space();
    let n = rep.dim();
    let p_len = rep.points();
    let triples = young_triples();
    let mut checks = 0;
    let mut violations = 0;
    let mut max_ratio = 0.0f64;
    let mut record = |lhs: f64, rhs: f64| {
        checks += 1;
        if lhs > rhs + slack * (1.0 + rhs) {
            violations += 1;
        }
        if rhs > 0.0 {
            max_ratio = max_ratio.max(lhs / rhs);
        }
    };
    for _ in 0..trials {
        let f = PhaseFunction::new(n, random::function(rng, p_len))?;
        let g = PhaseFunction::new(n, random::function(rng, p_len))?;
        let a = random::operator(rng, n);
        let b = random::operator(rng, n);
        let fg = conv_ff(ps, &f, &g)?;
        let fb = conv_fa(rep, &f, &b)?;
        let ag = conv_fa(rep, &g, &a)?;
        let ab = conv_ab(rep, &a, &b)?;
        for &(p, q, r) in &triples {
            record(fg.lp_norm(r), f.lp_norm(p) * g.lp_norm(q));
            record(fb.schatten_norm(r), f.lp_norm(p) * b.schatten_norm(q));
            record(ag.schatten_norm(r), a.schatten_norm(p) * g.lp_norm(q));
            record(ab.lp_norm(r), a.schatten_norm(p) * b.schatten_norm(q));
        }
    }
    Ok(YoungReport {
        trials,
        exponent_triples: triples.len(),
        checks,
        violations,
        max_ratio,
        passed: violations == 0,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositivityReport {
    pub trials: usize,
    /// Smallest eigenvalue of `f∗A` over PSD `A`, `f ≥ 0`.
    pub min_eig_fa: f64,
    /// Smallest real part of `A∗B` over PSD pairs.
    pub min_ab: f64,
    pub max_imag_ab: f64,
    /// Indefinite operators for which a negative `A∗P` was exhibited.
    pub detected_indefinite: usize,
    pub passed: bool,
}

/// Unit vectors `e_i` and `(e_i + c·e_j)/√2` for `c ∈ {±1, ±i}`.
pub fn projector_grid(n: usize) -> Vec<DVector<Complex64>> {
    let mut out = Vec::new();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        out.push(DVector::from_fn(n, |k, _| Complex64::new((k == i) as u8 as f64, 0.0)));
        for j in i + 1..n {
            for c in [
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
            ] {
                let mut v = DVector::zeros(n);
                v[i] = Complex64::new(s, 0.0);
                v[j] = c * s;
                out.push(v);
            }
        }
    }
    out
}

/// Smallest value of `(A∗P)(x)` over rank-one projectors `P` from
/// [`projector_grid`], the eigenvectors of `A`, and all `x`.
pub fn negativity_witness(rep: &Representation, a: &Operator) -> Result<f64> {
    check_op(rep, a)?;
    let n = rep.dim();
    let eig = a.hermitian_part().into_matrix().symmetric_eigen();
    let mut candidates = projector_grid(n);
    for k in 0..n {
        candidates.push(eig.eigenvectors.column(k).into_owned());
    }
    let mut best = f64::INFINITY;
    for v in candidates {
        let p = Operator::outer(&v, &v);
        best = best.min(conv_ab(rep, a, &p)?.min_real());
    }
    Ok(best)
}

/// Positivity preservation of the convolutions and detection of indefinite
/// operators by convolving against rank-one projectors.
pub fn verify_positivity(rep: &Representation, trials: usize, rng: &mut Rng, tol: f64) -> Result<PositivityReport> {
    let n = rep.dim();
    let p_len = rep.points();
    let mut min_eig_fa = f64::INFINITY;
    let mut min_ab = f64::INFINITY;
    let mut max_imag_ab = 0.0f64;
    let mut detected = 0;
    for _ in 0..trials {
        let a = random::psd(rng, n);
        let b = random::psd(rng, n);
        let f = PhaseFunction::new(n, random::nonnegative_function(rng, p_len))?;
        min_eig_fa = min_eig_fa.min(conv_fa(rep, &f, &a)?.min_eigenvalue());
        let ab = conv_ab(rep, &a, &b)?;
        min_ab = min_ab.min(ab.min_real());
        max_imag_ab = max_imag_ab.max(ab.max_imag());
        let indefinite = random::indefinite(rng, n, 1e-3);
        if negativity_witness(rep, &indefinite)? < -tol {
            detected += 1;
        }
    }
    let passed = min_eig_fa >= -tol && min_ab >= -tol && max_imag_ab <= tol && detected == trials;
    Ok(PositivityReport {
        trials,
        min_eig_fa,
        min_ab,
        max_imag_ab,
        detected_indefinite: detected,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::random::Rng;
    use proptest::prelude::*;

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

    fn rand_fn(r: &mut Rng, n: usize) -> PhaseFunction {
        PhaseFunction::new(n, random::function(r, n * n)).unwrap()
    }

    #[test]
    fn function_convolution_units_and_constants() {
        let rp = rep(&[2], false);
        let ps = rp.phase_space();
        let mut r = random::rng(1);
        let f = rand_fn(&mut r, 2);
        let d = PhaseFunction::delta(2);
        assert!(conv_ff(ps, &f, &d).unwrap().max_abs_diff(&f) < 1e-14);
        let one = PhaseFunction::constant(2, c(1., 0.));
        let oo = conv_ff(ps, &one, &one).unwrap();
        assert!(oo.max_abs_diff(&PhaseFunction::constant(2, c(2., 0.))) < 1e-14);
        assert!((one.lp_norm(Exponent::Finite(1.0)) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn average_of_shifts_is_trace() {
        let mut r = random::rng(2);
        for rp in [rep(&[2], false), rep(&[3], true), rep(&[2, 3], false)] {
            let n = rp.dim();
            let a = random::operator(&mut r, n);
            let one = PhaseFunction::constant(n, c(1., 0.));
            let lhs = conv_fa(&rp, &one, &a).unwrap();
            assert!(lhs.max_abs_diff(&Operator::identity(n).scale(a.trace())) < 1e-10);
            assert!(conv_fa(&rp, &PhaseFunction::delta(n), &a).unwrap().max_abs_diff(&a) < 1e-12);
        }
    }

    #[test]
    fn multiplication_operator_from_position_symbol() {
        // f0(x, ξ) = f(x) convolved with δ0⊗δ0 is M_f with scalar exactly 1
        let rp = rep(&[2, 3], false);
        let n = rp.dim();
        let mut r = random::rng(3);
        let f = random::function(&mut r, n);
        let f0 = PhaseFunction::new(n, (0..n * n).map(|z| f[z / n]).collect()).unwrap();
        let mut e0 = DVector::zeros(n);
        e0[0] = c(1., 0.);
        let out = conv_fa(&rp, &f0, &Operator::outer(&e0, &e0)).unwrap();
        assert!(out.max_abs_diff(&Operator::diagonal(&f)) < 1e-12);
    }

    #[test]
    fn operator_convolution_identities() {
        let rp = rep(&[3], false);
        let i = Operator::identity(3);
        let ii = conv_ab(&rp, &i, &i).unwrap();
        assert!(ii.max_abs_diff(&PhaseFunction::constant(3, c(3., 0.))) < 1e-12);

        let mut r = random::rng(4);
        for _ in 0..10 {
            let a = random::operator(&mut r, 3);
            let b = random::operator(&mut r, 3);
            let ab = conv_ab(&rp, &a, &b).unwrap();
            assert!(ab.max_abs_diff(&conv_ab(&rp, &b, &a).unwrap()) < 1e-12);
            assert!((ab.integral() - a.trace() * b.trace()).norm() < 1e-10);
            assert!(ab.max_abs() <= a.trace_norm() * b.op_norm() + 1e-10);
        }
    }

    #[test]
    fn rank_one_convolution_formula() {
        use crate::linalg::inner;
        let rp = rep(&[2, 2], false);
        let n = rp.dim();
        let mut r = random::rng(5);
        let v: Vec<_> = (0..4).map(|_| random::vector(&mut r, n)).collect();
        let a = Operator::outer(&v[0], &v[1]);
        let b = Operator::outer(&v[2], &v[3]);
        let ab = conv_ab(&rp, &a, &b).unwrap();
        let rr = rp.parity();
        for x in 0..rp.points() {
            let u = rp.unitary(x);
            let e = inner(&u.apply(&rr.apply(&v[2])), &v[1])
                * inner(&u.apply(&rr.apply(&v[3])), &v[0]).conj();
            assert!((ab.get(x) - e).norm() < 1e-12);
        }
    }

    #[test]
    fn shift_equivariance() {
        let rp = rep(&[3], true);
        let ps = rp.phase_space().clone();
        let mut r = random::rng(6);
        let f = rand_fn(&mut r, 3);
        let a = random::operator(&mut r, 3);
        let fa = conv_fa(&rp, &f, &a).unwrap();
        for x in 0..9 {
            let s = rp.shift(x, &fa).unwrap();
            assert!(s.max_abs_diff(&conv_fa(&rp, &f.translate(&ps, x), &a).unwrap()) < 1e-12);
            assert!(s.max_abs_diff(&conv_fa(&rp, &f, &rp.shift(x, &a).unwrap()).unwrap()) < 1e-12);
        }
        let t = fa.trace();
        assert!((t - f.integral() * a.trace()).norm() < 1e-10);
        assert!(fa.trace_norm() <= f.lp_norm(Exponent::Finite(1.0)) * a.trace_norm() + 1e-10);
    }

    #[test]
    fn mixed_product_laws() {
        let rp = rep(&[2], false);
        let mut r = random::rng(7);
        let el = |r: &mut Rng| MixedElement::new(rand_fn(r, 2), random::operator(r, 2)).unwrap();
        let (u, v, w) = (el(&mut r), el(&mut r), el(&mut r));
        let uv = banach_product(&rp, &u, &v).unwrap();
        assert!(uv.max_abs_diff(&banach_product(&rp, &v, &u).unwrap()) < 1e-12);
        let l = banach_product(&rp, &uv, &w).unwrap();
        let rr = banach_product(&rp, &u, &banach_product(&rp, &v, &w).unwrap()).unwrap();
        assert!(l.max_abs_diff(&rr) < 1e-10);
        assert!(uv.norm() <= u.norm() * v.norm() + 1e-10);
        let unit = MixedElement::new(PhaseFunction::delta(2), Operator::zeros(2)).unwrap();
        assert!(banach_product(&rp, &unit, &u).unwrap().max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn young_grid_and_audit() {
        let t = young_triples();
        assert!(t.contains(&(Exponent::Finite(1.0), Exponent::Finite(1.0), Exponent::Finite(1.0))));
        assert!(t.contains(&(Exponent::Finite(2.0), Exponent::Finite(2.0), Exponent::Infinity)));
        assert!(!t.iter().any(|&(p, q, _)| p == Exponent::Finite(4.0) && q == Exponent::Finite(4.0)));
        let rp = rep(&[3], false);
        let report = verify_young(&rp, 20, &mut random::rng(8), 1e-9).unwrap();
        assert!(report.passed, "{report:?}");
        // saturation: ‖I∗I‖_∞ = |G| = ‖I‖_{T²}²
        let i = Operator::identity(3);
        let ii = conv_ab(&rp, &i, &i).unwrap();
        assert!((ii.max_abs() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn positivity() {
        let rp = rep(&[2], false);
        let report = verify_positivity(&rp, 20, &mut random::rng(9), 1e-10).unwrap();
        assert!(report.passed, "{report:?}");
        let z = Operator::diagonal(&[c(1., 0.), c(-1., 0.)]);
        assert!(negativity_witness(&rp, &z).unwrap() < -0.5);
        assert!(negativity_witness(&rp, &Operator::identity(2)).unwrap() >= -1e-12);
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let rp = rep(&[2], false);
        let f = PhaseFunction::zeros(3);
        assert!(matches!(
            conv_fa(&rp, &f, &Operator::identity(2)),
            Err(QhaError::PhaseSpaceMismatch(_))
        ));
        assert!(conv_ab(&rp, &Operator::identity(3), &Operator::identity(2)).is_err());
        assert!(PhaseFunction::new(2, vec![c(0., 0.); 3]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn function_convolution_commutes_and_associates(seed in any::<u64>()) {
            let rp = rep(&[2, 2], false);
            let ps = rp.phase_space();
            let mut r = random::rng(seed);
            let (f, g, h) = (rand_fn(&mut r, 4), rand_fn(&mut r, 4), rand_fn(&mut r, 4));
            let fg = conv_ff(ps, &f, &g).unwrap();
            prop_assert!(fg.max_abs_diff(&conv_ff(ps, &g, &f).unwrap()) < 1e-10);
            let l = conv_ff(ps, &fg, &h).unwrap();
            let rr = conv_ff(ps, &f, &conv_ff(ps, &g, &h).unwrap()).unwrap();
            prop_assert!(l.max_abs_diff(&rr) < 1e-10);
        }
    }
}
