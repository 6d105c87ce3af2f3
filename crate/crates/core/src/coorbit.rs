//! Wavelet transform, reproducing projection and `Co_p` norms.
//!
//! Every `Co_p(U)` equals `C^{|G|}` as a set, so this module only measures
//! norms and checks that the Wiener verdict does not depend on `p`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bochner_wiener::{wiener_report, RANK_TOL};
use crate::convolution::{conv_ab, PhaseFunction};
use crate::error::{QhaError, Result};
use crate::linalg::{inner, null_space, weighted_lp, Exponent, Operator};
use crate::random::{self, Rng};
use crate::representation::Representation;

/// A unit vector `φ₀` with `Rφ₀ = φ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    vec: DVector<Complex64>,
}

impl Window {
    pub fn new(rep: &Representation, vec: DVector<Complex64>, tol: f64) -> Result<Self> {
        if vec.len() != rep.dim() {
            return Err(QhaError::DimensionMismatch {
                expected: rep.dim(),
                got: vec.len(),
            });
        }
        let norm = vec.norm();
        if (norm - 1.0).abs() > tol {
            return Err(QhaError::InvalidWindow(format!("norm {norm} != 1")));
        }
        let dev = (rep.parity().apply(&vec) - &vec).camax();
        if dev > tol {
            return Err(QhaError::InvalidWindow(format!("not parity-symmetric (deviation {dev:e})")));
        }
        Ok(Self { vec })
    }

    /// `e_0`, the basis vector at the identity.
    pub fn basis(rep: &Representation) -> Self {
        let mut vec = DVector::zeros(rep.dim());
        vec[0] = Complex64::new(1.0, 0.0);
        Self { vec }
    }

    /// `|G|^{-1/2}·(1, …, 1)`.
    pub fn uniform(rep: &Representation) -> Self {
        let n = rep.dim();
        Self {
            vec: DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0)),
        }
    }

    /// Symmetrizes a random vector and normalizes it.
    pub fn random(rep: &Representation, rng: &mut Rng) -> Self {
        loop {
            let v = random::vector(rng, rep.dim());
            let sym = (&v + rep.parity().apply(&v)) * Complex64::new(0.5, 0.0);
            let norm = sym.norm();
            if norm > 1e-6 {
                return Self { vec: sym / Complex64::new(norm, 0.0) };
            }
        }
    }

    pub fn vec(&self) -> &DVector<Complex64> {
        &self.vec
    }
}

fn check_vec(rep: &Representation, f: &DVector<Complex64>) -> Result<()> {
    if f.len() != rep.dim() {
        return Err(QhaError::DimensionMismatch {
            expected: rep.dim(),
            got: f.len(),
        });
    }
    Ok(())
}

/// `W(f)(x) = ⟨f, U_x φ₀⟩`.
pub fn wavelet_transform(rep: &Representation, f: &DVector<Complex64>, win: &Window) -> Result<PhaseFunction> {
    check_vec(rep, f)?;
    check_vec(rep, &win.vec)?;
    let values = (0..rep.points())
        .map(|x| inner(f, &rep.apply_unchecked(x, &win.vec)))
        .collect();
    PhaseFunction::new(rep.dim(), values)
}

/// `W*g = w·Σ_x g(x) U_x φ₀`.
pub fn wavelet_adjoint(rep: &Representation, g: &PhaseFunction, win: &Window) -> Result<DVector<Complex64>> {
    check_vec(rep, &win.vec)?;
    if g.dim() != rep.dim() {
        return Err(QhaError::DimensionMismatch {
            expected: rep.dim(),
            got: g.dim(),
        });
    }
    let w = Complex64::new(rep.weight(), 0.0);
    let mut acc = DVector::zeros(rep.dim());
    for x in 0..rep.points() {
        acc += rep.apply_unchecked(x, &win.vec) * (g.get(x) * w);
    }
    Ok(acc)
}

/// `P g(x) = w·Σ_y g(y) W(φ₀)(x − y)·m(y, −y)/m(−y, x)`.
pub fn reproducing_projection(rep: &Representation, g: &PhaseFunction, win: &Window) -> Result<PhaseFunction> {
    let ps = rep.phase_space();
    let kernel = wavelet_transform(rep, &win.vec, win)?;
    if g.dim() != rep.dim() {
        return Err(QhaError::DimensionMismatch {
            expected: rep.dim(),
            got: g.dim(),
        });
    }
    let p = rep.points();
    let w = rep.weight();
    let values = (0..p)
        .map(|x| {
            let s: Complex64 = (0..p)
                .map(|y| {
                    let ny = ps.neg(y);
                    g.get(y) * kernel.get(ps.sub(x, y)) * ps.m(y, ny) / ps.m(ny, x)
                })
                .sum();
            s * w
        })
        .collect();
    PhaseFunction::new(rep.dim(), values)
}

/// `‖f‖_{p,φ₀} = ‖W f‖_{L^p(Ξ)}` with the weighted measure.
pub fn co_norm(rep: &Representation, f: &DVector<Complex64>, p: Exponent, win: &Window) -> Result<f64> {
    Ok(wavelet_transform(rep, f, win)?.lp_norm(p))
}

/// `‖f‖_{ℓ^p(G)}` with counting measure.
pub fn lp_group_norm(f: &DVector<Complex64>, p: Exponent) -> f64 {
    weighted_lp(f.iter().map(|v| v.norm()), 1.0, p)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowEquivalence {
    pub p: f64,
    pub samples: usize,
    /// Smallest observed `‖f‖_{p,φ₁}/‖f‖_{p,φ₀}`.
    pub lower: f64,
    /// Largest observed ratio.
    pub upper: f64,
}

/// Empirical constants `c₁‖f‖_{p,φ₀} ≤ ‖f‖_{p,φ₁} ≤ c₂‖f‖_{p,φ₀}` over random unit vectors.
pub fn window_equivalence(
    rep: &Representation,
    p: Exponent,
    w0: &Window,
    w1: &Window,
    samples: usize,
    rng: &mut Rng,
) -> Result<WindowEquivalence> {
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    for _ in 0..samples {
        let f = random::unit_vector(rng, rep.dim());
        let r = co_norm(rep, &f, p, w1)? / co_norm(rep, &f, p, w0)?;
        lower = lower.min(r);
        upper = upper.max(r);
    }
    Ok(WindowEquivalence {
        p: p.value(),
        samples,
        lower,
        upper,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PIndependenceReport {
    pub p_values: Vec<f64>,
    /// Joint annihilator dimension of `B ↦ (A∗B)` in `Co_p`-weighted coordinates.
    pub annihilator_dims: Vec<usize>,
    pub verdicts: Vec<bool>,
    pub reference_regular: bool,
    pub identical: bool,
}

/// Recomputes the operator-side annihilator with rows weighted for `L^p(Ξ)`
/// and columns normalized by `‖e_i‖_{Co_p}‖e_j‖_{Co_{p'}}`; both scalings are
/// invertible, so the verdict must agree with the unweighted one.
pub fn wiener_p_independence(
    rep: &Representation,
    family: &[Operator],
    p_list: &[Exponent],
    win: &Window,
) -> Result<PIndependenceReport> {
    let reference = wiener_report(rep, family)?;
    let n = rep.dim();
    let pts = rep.points();
    let mut base = DMatrix::zeros(family.len() * pts, n * n);
    for k in 0..n * n {
        let mut e = DMatrix::zeros(n, n);
        e[(k % n, k / n)] = Complex64::new(1.0, 0.0);
        let e = Operator::from_matrix_unchecked(e);
        for (l, a) in family.iter().enumerate() {
            let v = conv_ab(rep, a, &e)?;
            for x in 0..pts {
                base[(l * pts + x, k)] = v.get(x);
            }
        }
    }
    let unit = |i: usize| {
        let mut v = DVector::zeros(n);
        v[i] = Complex64::new(1.0, 0.0);
        v
    };
    let mut annihilator_dims = Vec::with_capacity(p_list.len());
    let mut verdicts = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let row_w = match p {
            Exponent::Finite(p) => rep.weight().powf(1.0 / p),
            Exponent::Infinity => 1.0,
        };
        let norms_p: Vec<f64> = (0..n).map(|i| co_norm(rep, &unit(i), p, win)).collect::<Result<_>>()?;
        let norms_q: Vec<f64> = (0..n)
            .map(|i| co_norm(rep, &unit(i), p.conjugate(), win))
            .collect::<Result<_>>()?;
        let mut m = base.clone();
        for k in 0..n * n {
            let s = row_w / (norms_p[k % n] * norms_q[k / n]);
            m.column_mut(k).scale_mut(s);
        }
        let dim = null_space(&m, RANK_TOL).len();
        annihilator_dims.push(dim);
        verdicts.push(dim == 0);
    }
    Ok(PIndependenceReport {
        p_values: p_list.iter().map(|p| p.value()).collect(),
        identical: verdicts.iter().all(|&v| v == reference.regular),
        annihilator_dims,
        verdicts,
        reference_regular: reference.regular,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoorbitReport {
    pub trials: usize,
    /// `max |‖Wf‖_{L²} − ‖f‖|`.
    pub isometry_dev: f64,
    /// `max ‖W*Wf − f‖`.
    pub inversion_dev: f64,
    /// `max ‖P g − W W* g‖` for the kernel form of `P`.
    pub kernel_dev: f64,
    /// `max ‖P²g − Pg‖`.
    pub idempotence_dev: f64,
    /// `max |‖f‖_{2,φ₀} − ‖f‖|`.
    pub co2_dev: f64,
    /// `max |‖f‖_{p,e₀} − ‖f‖_{ℓ^p(G)}|` over `p ∈ {1, 1.5, 3, ∞}`.
    pub lp_anchor_dev: f64,
    pub window_equivalence: WindowEquivalence,
    pub p_independent: bool,
    pub passed: bool,
}

pub fn verify_coorbit(rep: &Representation, trials: usize, rng: &mut Rng, tol: f64) -> Result<CoorbitReport> {
    let n = rep.dim();
    let win = Window::random(rep, rng);
    let e0 = Window::basis(rep);
    let two = Exponent::Finite(2.0);
    let anchors = [Exponent::Finite(1.0), Exponent::Finite(1.5), Exponent::Finite(3.0), Exponent::Infinity];
    let mut isometry_dev = 0.0f64;
    let mut inversion_dev = 0.0f64;
    let mut kernel_dev = 0.0f64;
    let mut idempotence_dev = 0.0f64;
    let mut co2_dev = 0.0f64;
    let mut lp_anchor_dev = 0.0f64;
    for _ in 0..trials {
        let f = random::vector(rng, n);
        let wf = wavelet_transform(rep, &f, &win)?;
        isometry_dev = isometry_dev.max((wf.lp_norm(two) - f.norm()).abs());
        inversion_dev = inversion_dev.max((wavelet_adjoint(rep, &wf, &win)? - &f).camax());
        co2_dev = co2_dev.max((co_norm(rep, &f, two, &win)? - f.norm()).abs());
        for &p in &anchors {
            lp_anchor_dev = lp_anchor_dev.max((co_norm(rep, &f, p, &e0)? - lp_group_norm(&f, p)).abs());
        }

        let g = PhaseFunction::new(n, random::function(rng, rep.points()))?;
        let pg = reproducing_projection(rep, &g, &win)?;
        let direct = wavelet_transform(rep, &wavelet_adjoint(rep, &g, &win)?, &win)?;
        kernel_dev = kernel_dev.max(pg.max_abs_diff(&direct));
        idempotence_dev = idempotence_dev.max(reproducing_projection(rep, &pg, &win)?.max_abs_diff(&pg));
    }
    let window_equivalence = window_equivalence(rep, Exponent::Finite(1.5), &e0, &win, 100, rng)?;
    let ps = [Exponent::Finite(1.5), two, Exponent::Finite(3.0)];
    let regular = wiener_p_independence(rep, &[random::operator(rng, n)], &ps, &win)?;
    let identity = wiener_p_independence(rep, &[Operator::identity(n)], &ps, &win)?;
    let p_independent = regular.identical && identity.identical;
    Ok(CoorbitReport {
        trials,
        passed: isometry_dev <= tol
            && inversion_dev <= tol
            && kernel_dev <= tol
            && idempotence_dev <= tol
            && co2_dev <= tol
            && lp_anchor_dev <= tol
            && p_independent,
        isometry_dev,
        inversion_dev,
        kernel_dev,
        idempotence_dev,
        co2_dev,
        lp_anchor_dev,
        window_equivalence,
        p_independent,
    })
}
