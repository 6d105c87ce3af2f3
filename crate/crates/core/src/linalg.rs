//! Dense complex operators with Schatten norms, plus rank and null-space
//! helpers built on the SVD.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};

/// An exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(QhaError::InvalidExponent(p));
        }
        Ok(if p.is_infinite() {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        })
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// The exponent with `1/p = r`; `r` must lie in `[0, 1]`.
    pub fn from_reciprocal(r: f64) -> Result<Self> {
        if !(-1e-12..=1.0 + 1e-12).contains(&r) {
            return Err(QhaError::InvalidExponent(1.0 / r));
        }
        if r <= 1e-12 {
            Ok(Exponent::Infinity)
        } else {
            Exponent::new((1.0 / r).max(1.0))
        }
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        Self::from_reciprocal(1.0 - self.reciprocal()).expect("reciprocal in [0,1]")
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = QhaError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(Exponent::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| QhaError::Parse(format!("invalid exponent {s:?}")))?;
        Exponent::new(p)
    }
}

/// `(Σ |v_i|^p)^{1/p}` with optional weight per entry; sup for `p = ∞`.
pub fn weighted_lp(values: impl Iterator<Item = f64>, weight: f64, p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => values.fold(0.0, |m, v| m.max(v.abs())),
        Exponent::Finite(p) => {
            let s: f64 = values.map(|v| v.abs().powf(p)).sum();
            (weight * s).powf(1.0 / p)
        }
    }
}

/// A dense `n × n` complex matrix acting on `ℂ^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(DMatrix<Complex64>);

impl Operator {
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(QhaError::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        if mat.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(QhaError::Parse("operator has non-finite entries".into()));
        }
        Ok(Self(mat))
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<Complex64>) -> Self {
        Self(mat)
    }

    /// Builds from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(QhaError::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// `φ ⊗ ψ = φψ*`, acting as `v ↦ ⟨v, ψ⟩φ`.
    pub fn outer(phi: &DVector<Complex64>, psi: &DVector<Complex64>) -> Self {
        Self(phi * psi.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn mat(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        self.0.transpose().iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    /// `tr(A B*)`.
    pub fn hs_inner(&self, other: &Operator) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.0 * v
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, a| m.max(a.norm()))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.0.clone().svd(false, false).singular_values.iter().copied().collect()
    }

    pub fn schatten_norm(&self, p: Exponent) -> f64 {
        weighted_lp(self.singular_values().into_iter(), 1.0, p)
    }

    pub fn trace_norm(&self) -> f64 {
        self.schatten_norm(Exponent::Finite(1.0))
    }

    pub fn op_norm(&self) -> f64 {
        self.schatten_norm(Exponent::Infinity)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .hermitian_part()
            .0
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }

    /// `φ(A)` for the Hermitian part of `A` via its eigendecomposition.
    pub fn hermitian_function(&self, phi: impl Fn(f64) -> f64) -> Self {
        let eig = self.hermitian_part().0.symmetric_eigen();
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(phi(l), 0.0)));
        Self(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
    }

    /// Column-major flattening.
    pub fn vec(&self) -> Vec<Complex64> {
        self.0.iter().copied().collect()
    }

    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        Operator(self.0.adjoint() * &self.0).max_abs_diff(&Operator::identity(n))
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator(-&self.0)
    }
}

/// `⟨u, v⟩ = Σ u_i conj(v_i)`, linear in the first slot.
pub fn inner(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
    v.dotc(u)
}

/// Numerical rank: singular values above `rel_tol · σ_max`.
pub fn rank(mat: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    if mat.is_empty() {
        return 0;
    }
    let sv = mat.clone().svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Orthonormal basis of `{v : M v = 0}`, treating singular values at or
/// below `rel_tol · σ_max` as zero.
pub fn null_space(mat: &DMatrix<Complex64>, rel_tol: f64) -> Vec<DVector<Complex64>> {
    let n = mat.ncols();
    if n == 0 {
        return Vec::new();
    }
    // pad to at least square so the SVD returns a full right basis
    let padded = if mat.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (mat.nrows(), n)).copy_from(mat);
        p
    } else {
        mat.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= rel_tol * smax)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponents() {
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::Infinity);
        assert_eq!(Exponent::Finite(1.0).conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Finite(2.0).conjugate(), Exponent::Finite(2.0));
        match Exponent::Finite(4.0 / 3.0).conjugate() {
            Exponent::Finite(q) => assert!((q - 4.0).abs() < 1e-12),
            Exponent::Infinity => panic!(),
        }
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("1.5".parse::<Exponent>().unwrap(), Exponent::Finite(1.5));
    }

    #[test]
    fn identity_norms() {
        let i = Operator::identity(5);
        assert!((i.trace_norm() - 5.0).abs() < 1e-12);
        assert!((i.op_norm() - 1.0).abs() < 1e-12);
        assert!((i.schatten_norm(Exponent::Finite(2.0)) - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hilbert_schmidt_is_frobenius() {
        let a = Operator::from_row_major(2, &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5), c(-2.0, 0.0)])
            .unwrap();
        let t2 = a.schatten_norm(Exponent::Finite(2.0));
        let tr = (&a.adjoint() * &a).trace().re;
        assert!((t2 * t2 - tr).abs() < 1e-12);
        assert!((a.hs_inner(&a).re - tr).abs() < 1e-12);
    }

    #[test]
    fn hermitian_spectrum_and_functions() {
        let a = Operator::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(a.hermitian_eigenvalues(), vec![-1.0, 1.0]);
        let sq = a.hermitian_function(|t| t * t);
        assert!(sq.max_abs_diff(&Operator::identity(2)) < 1e-12);
    }

    #[test]
    fn row_major_round_trip() {
        let e = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        let a = Operator::from_row_major(2, &e).unwrap();
        assert_eq!(a.get(0, 1), c(2.0, 0.0));
        assert_eq!(a.row_major(), e.to_vec());
        assert!(Operator::from_row_major(2, &e[..3]).is_err());
    }

    #[test]
    fn rank_and_null_space() {
        let m = DMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(rank(&m, 1e-10), 1);
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m * v).norm() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(rank(&DMatrix::<Complex64>::zeros(2, 2), 1e-10), 0);
    }
}
