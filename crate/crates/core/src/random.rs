//! Seeded samplers for randomized audits. All draws come from [`Rng`], a
//! ChaCha8 stream, so a seed fixes every report value.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::Operator;

pub type Rng = ChaCha8Rng;

/// Name recorded in reports next to the seed.
pub const GENERATOR_NAME: &str = "ChaCha8Rng";

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `k` under the same seed, so suite items do not
/// perturb each other's draws.
pub fn stream(seed: u64, k: u64) -> Rng {
    let mut r = rng(seed);
    r.set_stream(k);
    r
}

/// Standard complex Gaussian (`E|z|² = 1`).
pub fn gaussian(rng: &mut Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn vector(rng: &mut Rng, n: usize) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| gaussian(rng))
}

pub fn unit_vector(rng: &mut Rng, n: usize) -> DVector<Complex64> {
    let v = vector(rng, n);
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

pub fn operator(rng: &mut Rng, n: usize) -> Operator {
    Operator::from_matrix_unchecked(DMatrix::from_fn(n, n, |_, _| gaussian(rng)))
}

pub fn hermitian(rng: &mut Rng, n: usize) -> Operator {
    operator(rng, n).hermitian_part()
}

/// `M*M` for complex Gaussian `M`.
pub fn psd(rng: &mut Rng, n: usize) -> Operator {
    let m = operator(rng, n);
    &m.adjoint() * &m
}

/// A PSD operator scaled to unit trace.
pub fn density(rng: &mut Rng, n: usize) -> Operator {
    let a = psd(rng, n);
    let t = a.trace().re;
    a.scale(Complex64::new(1.0 / t, 0.0))
}

/// A Hermitian operator with eigenvalues of both signs, the most negative
/// being at most `-gap`.
pub fn indefinite(rng: &mut Rng, n: usize, gap: f64) -> Operator {
    let h = hermitian(rng, n);
    let ev = h.hermitian_eigenvalues();
    let (lo, hi) = (ev[0], ev[n - 1]);
    let mid = 0.5 * (lo + hi);
    let span = (hi - lo).max(1e-300);
    // recentre so the spectrum straddles zero, then rescale to width 2
    let shifted = &h - &Operator::identity(n).scale(Complex64::new(mid, 0.0));
    let scaled = shifted.scale(Complex64::new(2.0 / span, 0.0));
    let lo = scaled.min_eigenvalue();
    if lo > -gap {
        &scaled - &Operator::identity(n).scale(Complex64::new(gap + lo, 0.0))
    } else {
        scaled
    }
}

pub fn function(rng: &mut Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| gaussian(rng)).collect()
}

pub fn nonnegative_function(rng: &mut Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.random::<f64>(), 0.0))
        .collect()
}

pub fn real_function(rng: &mut Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0))
        .collect()
}
