//! The projective representation `z ↦ U_z` on `ℂ^{|G|}` and the parity `R`.
//!
//! Every `U_{(x,ξ)}` is monomial: `(U f)(y) = u(y)·f(y − x)`. Only the phases
//! `u` are stored; dense matrices are produced on request.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QhaError, Result};
use crate::linalg::{inner, rank, Operator};
use crate::phase_space::{Multiplier, MultiplierKind, PhaseSpace};

#[derive(Debug, Clone)]
pub struct Representation {
    ps: Arc<PhaseSpace>,
    // phases[z * n + y] = u_z(y)
    phases: Vec<Complex64>,
}

fn canonical_phases(ps: &PhaseSpace) -> Vec<Complex64> {
    let n = ps.dim();
    let mut out = Vec::with_capacity(n * n * n);
    for z in 0..n * n {
        for y in 0..n {
            out.push(ps.chi(y, z % n));
        }
    }
    out
}

/// Phases of the representation belonging to `m`, given those of the
/// canonical one; `U^a_z = a(z)·U_z` for modified kinds.
fn phases_for(ps: &PhaseSpace, m: &Multiplier, canonical: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = ps.dim();
    match m.kind() {
        MultiplierKind::Canonical => Ok(canonical.to_vec()),
        MultiplierKind::Weyl => {
            let a = Multiplier::weyl_phase(ps.group())?;
            Ok(scale_rows(canonical, &a, n))
        }
        MultiplierKind::Modified => {
            let base = phases_for(ps, m.base().expect("modified has a base"), canonical)?;
            Ok(scale_rows(&base, m.cochain().expect("modified has a cochain"), n))
        }
        MultiplierKind::Table => Err(QhaError::UnsupportedMultiplier(
            "no representation is constructed for tabulated multipliers".into(),
        )),
    }
}

fn scale_rows(phases: &[Complex64], a: &[Complex64], n: usize) -> Vec<Complex64> {
    phases
        .iter()
        .enumerate()
        .map(|(k, u)| u * a[k / n])
        .collect()
}

/// Result of [`Representation::phase_covariant_decompose`]: `A = b·U_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariantDecomposition {
    pub b: Complex64,
    pub z: usize,
}

impl Representation {
    pub fn new(ps: PhaseSpace) -> Result<Self> {
        Self::from_arc(Arc::new(ps))
    }

    pub fn from_arc(ps: Arc<PhaseSpace>) -> Result<Self> {
        let canonical = canonical_phases(&ps);
        let phases = phases_for(&ps, ps.multiplier(), &canonical)?;
        Ok(Self { ps, phases })
    }

    pub fn phase_space(&self) -> &PhaseSpace {
        &self.ps
    }

    pub fn phase_space_arc(&self) -> &Arc<PhaseSpace> {
        &self.ps
    }

    pub fn dim(&self) -> usize {
        self.ps.dim()
    }

    pub fn points(&self) -> usize {
        self.ps.points()
    }

    pub fn weight(&self) -> f64 {
        self.ps.weight()
    }

    /// `u_z(y)`, the nonzero entry of row `y` of `U_z`.
    pub(crate) fn phase(&self, z: usize, y: usize) -> Complex64 {
        self.phases[z * self.dim() + y]
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(QhaError::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    /// Dense `U_z` with `(U_z)_{y, y−x} = u_z(y)`.
    pub fn unitary(&self, z: usize) -> Operator {
        let n = self.dim();
        let x = z / n;
        let mut m = DMatrix::zeros(n, n);
        for y in 0..n {
            m[(y, self.ps.g_sub(y, x))] = self.phase(z, y);
        }
        Operator::from_matrix_unchecked(m)
    }

    /// `(R f)(y) = f(−y)`.
    pub fn parity(&self) -> Operator {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for y in 0..n {
            m[(y, self.ps.g_neg(y))] = Complex64::new(1.0, 0.0);
        }
        Operator::from_matrix_unchecked(m)
    }

    pub fn apply(&self, z: usize, f: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        self.check_dim(f.len())?;
        Ok(self.apply_unchecked(z, f))
    }

    pub(crate) fn apply_unchecked(&self, z: usize, f: &DVector<Complex64>) -> DVector<Complex64> {
        let n = self.dim();
        let x = z / n;
        DVector::from_fn(n, |y, _| self.phase(z, y) * f[self.ps.g_sub(y, x)])
    }

    /// `α_z(A) = U_z A U_z*`.
    pub fn shift(&self, z: usize, a: &Operator) -> Result<Operator> {
        self.check_dim(a.dim())?;
        Ok(self.shift_unchecked(z, a))
    }

    pub(crate) fn shift_unchecked(&self, z: usize, a: &Operator) -> Operator {
        let n = self.dim();
        let x = z / n;
        let am = a.mat();
        let src: Vec<usize> = (0..n).map(|i| self.ps.g_sub(i, x)).collect();
        let u: Vec<Complex64> = (0..n).map(|i| self.phase(z, i)).collect();
        Operator::from_matrix_unchecked(DMatrix::from_fn(n, n, |i, j| {
            u[i] * am[(src[i], src[j])] * u[j].conj()
        }))
    }

    /// `β₋(A) = R A R`.
    pub fn reflect(&self, a: &Operator) -> Result<Operator> {
        self.check_dim(a.dim())?;
        Ok(self.reflect_unchecked(a))
    }

    pub(crate) fn reflect_unchecked(&self, a: &Operator) -> Operator {
        let n = self.dim();
        let am = a.mat();
        Operator::from_matrix_unchecked(DMatrix::from_fn(n, n, |i, j| {
            am[(self.ps.g_neg(i), self.ps.g_neg(j))]
        }))
    }

    /// `tr(A U_z*)`.
    pub(crate) fn trace_against(&self, a: &Operator, z: usize) -> Complex64 {
        let n = self.dim();
        let x = z / n;
        let am = a.mat();
        (0..n)
            .map(|i| am[(i, self.ps.g_sub(i, x))] * self.phase(z, i).conj())
            .sum()
    }

    /// Accumulates `c·U_z` into `acc`.
    pub(crate) fn add_scaled_unitary(&self, acc: &mut DMatrix<Complex64>, z: usize, c: Complex64) {
        let n = self.dim();
        let x = z / n;
        for y in 0..n {
            acc[(y, self.ps.g_sub(y, x))] += c * self.phase(z, y);
        }
    }

    /// `U_z A`.
    pub(crate) fn mul_left(&self, z: usize, a: &Operator) -> Operator {
        let n = self.dim();
        let x = z / n;
        let am = a.mat();
        Operator::from_matrix_unchecked(DMatrix::from_fn(n, n, |i, j| {
            self.phase(z, i) * am[(self.ps.g_sub(i, x), j)]
        }))
    }

    /// `A U_z`.
    pub(crate) fn mul_right(&self, a: &Operator, z: usize) -> Operator {
        let n = self.dim();
        let x = z / n;
        let am = a.mat();
        Operator::from_matrix_unchecked(DMatrix::from_fn(n, n, |i, j| {
            let k = self.ps.g_add(j, x);
            am[(i, k)] * self.phase(z, k)
        }))
    }

    /// Returns `(b, z)` with `A = b·U_z` when every shift of `A` is a scalar
    /// multiple of `A`, and `None` otherwise.
    pub fn phase_covariant_decompose(
        &self,
        a: &Operator,
        tol: f64,
    ) -> Result<Option<CovariantDecomposition>> {
        self.check_dim(a.dim())?;
        let norm2 = a.hs_inner(a).re;
        if norm2 <= tol * tol {
            return Err(QhaError::ZeroOperator);
        }
        let p = self.points();
        let scale = norm2.sqrt();
        let mut c = Vec::with_capacity(p);
        for x in 0..p {
            let ax = self.shift_unchecked(x, a);
            let cx = ax.hs_inner(a) / norm2;
            if (&ax - &a.scale(cx)).frobenius_norm() > tol * scale {
                return Ok(None);
            }
            c.push(cx);
        }
        // α_x(U_z) = σ(x,z)·U_z
        let z = (0..p).find(|&z| (0..p).all(|x| (c[x] - self.ps.sigma(x, z)).norm() <= tol.sqrt()));
        Ok(z.map(|z| CovariantDecomposition {
            b: self.trace_against(a, z) / self.dim() as f64,
            z,
        }))
    }

    /// `max_{z,w} |U_z U_w − m(z,w) U_{z+w}|`, entrywise.
    pub fn ccr_max_dev(&self) -> f64 {
        let n = self.dim();
        let p = self.points();
        let mut dev = 0.0f64;
        for z in 0..p {
            let x = z / n;
            for w in 0..p {
                let m = self.ps.m(z, w);
                let zw = self.ps.add(z, w);
                for y in 0..n {
                    let lhs = self.phase(z, y) * self.phase(w, self.ps.g_sub(y, x));
                    dev = dev.max((lhs - m * self.phase(zw, y)).norm());
                }
            }
        }
        dev
    }

    /// `max_z |U_z R − R U_{−z}|`.
    pub fn parity_max_dev(&self) -> f64 {
        let r = self.parity();
        (0..self.points())
            .map(|z| {
                (&self.unitary(z) * &r).max_abs_diff(&(&r * &self.unitary(self.ps.neg(z))))
            })
            .fold(0.0, f64::max)
    }

    pub fn unitarity_max_dev(&self) -> f64 {
        (0..self.points())
            .map(|z| self.unitary(z).unitarity_defect())
            .fold(0.0, f64::max)
    }

    /// Deviation of `w·Σ_z ⟨U_zφ₁,ψ₁⟩·conj⟨U_zφ₂,ψ₂⟩` from
    /// `⟨φ₁,φ₂⟩·conj⟨ψ₁,ψ₂⟩`.
    pub fn moyal_defect(
        &self,
        phi1: &DVector<Complex64>,
        psi1: &DVector<Complex64>,
        phi2: &DVector<Complex64>,
        psi2: &DVector<Complex64>,
    ) -> Result<f64> {
        for v in [phi1, psi1, phi2, psi2] {
            self.check_dim(v.len())?;
        }
        let lhs: Complex64 = (0..self.points())
            .map(|z| {
                inner(&self.apply_unchecked(z, phi1), psi1)
                    * inner(&self.apply_unchecked(z, phi2), psi2).conj()
            })
            .sum::<Complex64>()
            * self.weight();
        let rhs = inner(phi1, phi2) * inner(psi1, psi2).conj();
        Ok((lhs - rhs).norm())
    }

    /// Rank of the `|Ξ|` vectorized unitaries; `|G|²` means irreducible.
    pub fn span_rank(&self) -> usize {
        let n = self.dim();
        let p = self.points();
        let mut m = DMatrix::zeros(n * n, p);
        for z in 0..p {
            m.set_column(z, &DVector::from_vec(self.unitary(z).vec()));
        }
        rank(&m, 1e-10)
    }
}
