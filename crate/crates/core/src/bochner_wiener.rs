//! Twisted positive-definiteness (the operator Bochner theorem) and
//! regularity of operator families (the operator Wiener theorem), reduced
//! to eigenvalue and rank computations.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::convolution::{conv_ab, conv_ff, PhaseFunction};
use crate::error::{QhaError, Result};
use crate::fourier::{fourier_sigma, fourier_weyl, fourier_weyl_inv};
use crate::linalg::{null_space, rank, Operator};
use crate::phase_space::PhaseSpace;
use crate::random::{self, Rng};
use crate::representation::Representation;

/// Largest `|Ξ|` accepted by the rank computations.
pub const WIENER_LIMIT: usize = 1024;

/// Relative singular-value cutoff for ranks and null spaces.
pub const RANK_TOL: f64 = 1e-9;

/// `|F_U(A)(ξ)| ≤ ZERO_TOL·‖A‖_{T¹}` counts as a zero.
pub const ZERO_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct TwistedPdReport {
    /// `G_{jk} = m(−x_k, x_k)·conj m(x_j, −x_k)·f(x_j − x_k)` over all of `Ξ`.
    pub gram: DMatrix<Complex64>,
    pub hermitian_dev: f64,
    pub min_eigenvalue: f64,
    pub is_pd: bool,
}

/// Builds the twisted Gram matrix of `f` and tests it for positive
/// semidefiniteness.
pub fn twisted_pd_check(ps: &PhaseSpace, f: &PhaseFunction, tol: f64) -> Result<TwistedPdReport> {
    if f.dim() != ps.dim() {
        return Err(QhaError::PhaseSpaceMismatch(format!(
            "function over |G| = {}, phase space has |G| = {}",
            f.dim(),
            ps.dim()
        )));
    }
    let p = ps.points();
    let gram = DMatrix::from_fn(p, p, |j, k| {
        let nk = ps.neg(k);
        ps.m(nk, k) * ps.m(j, nk).conj() * f.get(ps.sub(j, k))
    });
    let hermitian_dev = (&gram - gram.adjoint()).iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let min_eigenvalue = Operator::from_matrix_unchecked(gram.clone()).min_eigenvalue();
    let scale = 1.0 + f.max_abs();
    Ok(TwistedPdReport {
        gram,
        hermitian_dev,
        min_eigenvalue,
        is_pd: hermitian_dev <= tol * scale && min_eigenvalue >= -tol * scale,
    })
}

#[derive(Debug, Clone)]
pub struct BochnerReconstruction {
    pub operator: Operator,
    pub min_eigenvalue: f64,
    pub hermitian_dev: f64,
    /// `‖F_U(A) − f‖_∞`.
    pub roundtrip_dev: f64,
    pub certified: bool,
}

/// `A = F_U⁻¹(f)` with a positivity certificate. Indefinite input yields a
/// failed certificate, not an error.
pub fn bochner_reconstruct(rep: &Representation, f: &PhaseFunction, tol: f64) -> Result<BochnerReconstruction> {
    let a = fourier_weyl_inv(rep, f)?;
    let hermitian_dev = a.max_abs_diff(&a.adjoint());
    let min_eigenvalue = a.min_eigenvalue();
    let roundtrip_dev = fourier_weyl(rep, &a)?.max_abs_diff(f);
    let scale = 1.0 + f.max_abs();
    Ok(BochnerReconstruction {
        certified: min_eigenvalue >= -tol * scale && hermitian_dev <= tol * scale && roundtrip_dev <= tol * scale,
        operator: a,
        min_eigenvalue,
        hermitian_dev,
        roundtrip_dev,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnihilatorSide {
    /// `{B : A∗B = 0 for all A}`.
    Operator,
    /// `{f : f∗A = 0 for all A}`.
    Function,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Annihilator {
    Operators(Vec<Operator>),
    Functions(Vec<PhaseFunction>),
}

impl Annihilator {
    pub fn len(&self) -> usize {
        match self {
            Annihilator::Operators(v) => v.len(),
            Annihilator::Functions(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_family(rep: &Representation, family: &[Operator]) -> Result<()> {
    if family.is_empty() {
        return Err(QhaError::EmptyFamily);
    }
    if rep.points() > WIENER_LIMIT {
        return Err(QhaError::SizeGuard {
            what: "wiener |Xi|",
            size: rep.points(),
            limit: WIENER_LIMIT,
        });
    }
    for a in family {
        if a.dim() != rep.dim() {
            return Err(QhaError::DimensionMismatch {
                expected: rep.dim(),
                got: a.dim(),
            });
        }
    }
    Ok(())
}

fn unit(n: usize, k: usize) -> Operator {
    let mut m = DMatrix::zeros(n, n);
    m[(k % n, k / n)] = Complex64::new(1.0, 0.0);
    Operator::from_matrix_unchecked(m)
}

/// Matrix of `B ↦ (A_λ∗B)_λ`, columns indexed like [`Operator::vec`].
fn operator_annihilator_matrix(rep: &Representation, family: &[Operator]) -> Result<DMatrix<Complex64>> {
    let n = rep.dim();
    let p = rep.points();
    let mut m = DMatrix::zeros(family.len() * p, n * n);
    for k in 0..n * n {
        let e = unit(n, k);
        for (l, a) in family.iter().enumerate() {
            let v = conv_ab(rep, a, &e)?;
            for x in 0..p {
                m[(l * p + x, k)] = v.get(x);
            }
        }
    }
    Ok(m)
}

/// Matrix of `f ↦ (f∗A_λ)_λ`, columns indexed by points of `Ξ`.
fn function_annihilator_matrix(rep: &Representation, family: &[Operator]) -> DMatrix<Complex64> {
    let n = rep.dim();
    let p = rep.points();
    let w = Complex64::new(rep.weight(), 0.0);
    let mut m = DMatrix::zeros(family.len() * n * n, p);
    for x in 0..p {
        for (l, a) in family.iter().enumerate() {
            for (k, v) in rep.shift_unchecked(x, a).vec().into_iter().enumerate() {
                m[(l * n * n + k, x)] = v * w;
            }
        }
    }
    m
}

/// Basis of the joint annihilator of the family on the chosen side.
pub fn annihilator_solve(rep: &Representation, family: &[Operator], side: AnnihilatorSide) -> Result<Annihilator> {
    check_family(rep, family)?;
    let n = rep.dim();
    Ok(match side {
        AnnihilatorSide::Operator => {
            let m = operator_annihilator_matrix(rep, family)?;
            Annihilator::Operators(
                null_space(&m, RANK_TOL)
                    .into_iter()
                    .map(|v| Operator::from_matrix_unchecked(DMatrix::from_column_slice(n, n, v.as_slice())))
                    .collect(),
            )
        }
        AnnihilatorSide::Function => {
            let m = function_annihilator_matrix(rep, family);
            Annihilator::Functions(
                null_space(&m, RANK_TOL)
                    .into_iter()
                    .map(|v| PhaseFunction::new(n, v.as_slice().to_vec()).expect("length |Xi|"))
                    .collect(),
            )
        }
    })
}

/// Points where every `F_U(A)` of the family vanishes.
pub fn common_zero_set(rep: &Representation, family: &[Operator]) -> Result<Vec<usize>> {
    let mut alive = vec![false; rep.points()];
    for a in family {
        let fa = fourier_weyl(rep, a)?;
        let thr = ZERO_TOL * a.trace_norm();
        for (xi, v) in fa.values().iter().enumerate() {
            if v.norm() > thr {
                alive[xi] = true;
            }
        }
    }
    Ok((0..rep.points()).filter(|&xi| !alive[xi]).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegularityReport {
    pub family_size: usize,
    pub full_rank: usize,
    /// (v): common zeros of the Fourier–Weyl transforms.
    pub zero_set: Vec<usize>,
    /// (i): rank of all shifts of all members.
    pub span_rank: usize,
    /// (ii): rank of `(f_λ) ↦ Σ f_λ∗A_λ`.
    pub function_convolution_rank: usize,
    /// (iii): rank of `(B_λ) ↦ Σ B_λ∗A_λ`.
    pub operator_convolution_rank: usize,
    /// (iv): common zeros of `F_σ(A∗A)`.
    pub self_convolution_zero_set: Vec<usize>,
    /// (vi): dimension of `{B : A∗B = 0 ∀A}`.
    pub operator_annihilator_dim: usize,
    /// (vii): dimension of `{f : f∗A = 0 ∀A}`.
    pub function_annihilator_dim: usize,
    /// Verdict "regular" per item.
    pub equivalences: BTreeMap<String, bool>,
    pub regular: bool,
    pub consistent: bool,
}

/// Evaluates the seven equivalent regularity conditions for a family.
pub fn wiener_report(rep: &Representation, family: &[Operator]) -> Result<RegularityReport> {
    check_family(rep, family)?;
    let n = rep.dim();
    let p = rep.points();
    let full = n * n;

    let mut span = DMatrix::zeros(full, family.len() * p);
    for (l, a) in family.iter().enumerate() {
        for x in 0..p {
            span.set_column(l * p + x, &DVector::from_vec(rep.shift_unchecked(x, a).vec()));
        }
    }
    let span_rank = rank(&span, RANK_TOL);

    let fmat = function_annihilator_matrix(rep, family);
    // (ii) and (vii) use the same linear map: stacked for (vii), summed for (ii)
    let mut summed = DMatrix::zeros(full, family.len() * p);
    for l in 0..family.len() {
        summed
            .columns_mut(l * p, p)
            .copy_from(&fmat.rows(l * full, full));
    }
    let function_convolution_rank = rank(&summed, RANK_TOL);
    let function_annihilator_dim = null_space(&fmat, RANK_TOL).len();

    let omat = operator_annihilator_matrix(rep, family)?;
    let mut osum = DMatrix::zeros(p, family.len() * full);
    for l in 0..family.len() {
        osum.columns_mut(l * full, full).copy_from(&omat.rows(l * p, p));
    }
    let operator_convolution_rank = rank(&osum, RANK_TOL);
    let operator_annihilator_dim = null_space(&omat, RANK_TOL).len();

    let zero_set = common_zero_set(rep, family)?;

    let ps = rep.phase_space();
    let mut alive = vec![false; p];
    for a in family {
        let s = fourier_sigma(ps, &conv_ab(rep, a, a)?)?;
        let thr = ZERO_TOL * a.trace_norm().powi(2);
        for (xi, v) in s.values().iter().enumerate() {
            if v.norm() > thr {
                alive[xi] = true;
            }
        }
    }
    let self_convolution_zero_set: Vec<usize> = (0..p).filter(|&xi| !alive[xi]).collect();

    let mut equivalences = BTreeMap::new();
    equivalences.insert("i".to_string(), span_rank == full);
    equivalences.insert("ii".to_string(), function_convolution_rank == full);
    equivalences.insert("iii".to_string(), operator_convolution_rank == p);
    equivalences.insert("iv".to_string(), self_convolution_zero_set.is_empty());
    equivalences.insert("v".to_string(), zero_set.is_empty());
    equivalences.insert("vi".to_string(), operator_annihilator_dim == 0);
    equivalences.insert("vii".to_string(), function_annihilator_dim == 0);
    let regular = zero_set.is_empty();
    let consistent = equivalences.values().all(|&v| v == regular);
    Ok(RegularityReport {
        family_size: family.len(),
        full_rank: full,
        zero_set,
        span_rank,
        function_convolution_rank,
        operator_convolution_rank,
        self_convolution_zero_set,
        operator_annihilator_dim,
        function_annihilator_dim,
        equivalences,
        regular,
        consistent,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionRegularityReport {
    pub translate_rank: usize,
    pub zero_set: Vec<usize>,
    pub regular: bool,
    pub consistent: bool,
}

/// Function-side Wiener check: translates of the family span `L¹(Ξ)` iff
/// their symplectic Fourier transforms have no common zero.
pub fn function_wiener_report(ps: &PhaseSpace, family: &[PhaseFunction]) -> Result<FunctionRegularityReport> {
    if family.is_empty() {
        return Err(QhaError::EmptyFamily);
    }
    let p = ps.points();
    let mut m = DMatrix::zeros(p, family.len() * p);
    let mut alive = vec![false; p];
    for (l, f) in family.iter().enumerate() {
        for x in 0..p {
            let t = conv_ff(ps, &PhaseFunction::point_mass(ps.dim(), x), f)?;
            m.set_column(l * p + x, &DVector::from_column_slice(t.values()));
        }
        let s = fourier_sigma(ps, f)?;
        let thr = ZERO_TOL * f.lp_norm(crate::linalg::Exponent::Finite(1.0));
        for (xi, v) in s.values().iter().enumerate() {
            if v.norm() > thr {
                alive[xi] = true;
            }
        }
    }
    let translate_rank = rank(&m, RANK_TOL);
    let zero_set: Vec<usize> = (0..p).filter(|&xi| !alive[xi]).collect();
    let regular = zero_set.is_empty();
    Ok(FunctionRegularityReport {
        consistent: regular == (translate_rank == p),
        translate_rank,
        zero_set,
        regular,
    })
}

/// `max |m(z+z',w) − m(z,w)m(z',w)|` and the same in the second slot.
pub fn bicharacter_dev(ps: &PhaseSpace) -> f64 {
    let p = ps.points();
    let mut dev = 0.0f64;
    for z in 0..p {
        for z2 in 0..p {
            let zz = ps.add(z, z2);
            for w in 0..p {
                dev = dev
                    .max((ps.m(zz, w) - ps.m(z, w) * ps.m(z2, w)).norm())
                    .max((ps.m(w, zz) - ps.m(w, z) * ps.m(w, z2)).norm());
            }
        }
    }
    dev
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BochnerAudit {
    pub trials: usize,
    pub bicharacter_dev: f64,
    /// Reconstruction is asserted only for bicharacter multipliers.
    pub asserted: bool,
    pub pd_failures: usize,
    pub uncertified: usize,
    pub max_roundtrip_dev: f64,
    pub min_reconstructed_eigenvalue: f64,
    pub indefinite_trials: usize,
    pub indefinite_rejected: usize,
    /// Largest Gram minimum eigenvalue among the indefinite inputs.
    pub indefinite_max_min_eigenvalue: f64,
    pub passed: bool,
}

/// Densities must pass the twisted test and reconstruct; operators with a
/// negative eigenvalue of size `gap` must fail it.
pub fn verify_bochner(rep: &Representation, trials: usize, rng: &mut Rng, tol: f64) -> Result<BochnerAudit> {
    let ps = rep.phase_space();
    let n = rep.dim();
    let bdev = bicharacter_dev(ps);
    let mut audit = BochnerAudit {
        trials,
        bicharacter_dev: bdev,
        asserted: bdev <= crate::TOL,
        pd_failures: 0,
        uncertified: 0,
        max_roundtrip_dev: 0.0,
        min_reconstructed_eigenvalue: f64::INFINITY,
        indefinite_trials: trials,
        indefinite_rejected: 0,
        indefinite_max_min_eigenvalue: f64::NEG_INFINITY,
        passed: false,
    };
    for _ in 0..trials {
        let rho = random::density(rng, n);
        let f = fourier_weyl(rep, &rho)?;
        audit.pd_failures += usize::from(!twisted_pd_check(ps, &f, tol)?.is_pd);
        let rec = bochner_reconstruct(rep, &f, tol)?;
        audit.uncertified += usize::from(!rec.certified);
        audit.max_roundtrip_dev = audit
            .max_roundtrip_dev
            .max(rec.roundtrip_dev)
            .max(rec.operator.max_abs_diff(&rho));
        audit.min_reconstructed_eigenvalue = audit.min_reconstructed_eigenvalue.min(rec.min_eigenvalue);

        let bad = random::indefinite(rng, n, INDEFINITE_GAP);
        let check = twisted_pd_check(ps, &fourier_weyl(rep, &bad)?, tol)?;
        if !check.is_pd && check.min_eigenvalue < -1e-6 {
            audit.indefinite_rejected += 1;
        }
        audit.indefinite_max_min_eigenvalue = audit.indefinite_max_min_eigenvalue.max(check.min_eigenvalue);
    }
    if trials == 0 {
        audit.min_reconstructed_eigenvalue = 0.0;
        audit.indefinite_max_min_eigenvalue = 0.0;
    }
    let densities_ok = audit.pd_failures == 0;
    let reconstruction_ok = audit.uncertified == 0 && audit.max_roundtrip_dev <= tol * 10.0;
    audit.passed = densities_ok
        && audit.indefinite_rejected == audit.indefinite_trials
        && (reconstruction_ok || !audit.asserted);
    Ok(audit)
}

/// Smallest negative eigenvalue magnitude of the constructed indefinite operators.
pub const INDEFINITE_GAP: f64 = 0.05;

/// A random operator whose Fourier–Weyl transform is forced to vanish at `xi`.
pub fn carve_zero(rep: &Representation, a: &Operator, xi: usize) -> Result<Operator> {
    let v = fourier_weyl(rep, a)?.get(xi) / rep.dim() as f64;
    Ok(a - &rep.unitary(xi).scale(v))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WienerAudit {
    pub families: usize,
    pub regular: usize,
    pub non_regular: usize,
    pub inconsistent: usize,
    pub identity_span_rank: usize,
    pub identity_regular: bool,
    pub passed: bool,
}

/// Random single-operator families, every other one with a carved zero.
pub fn verify_wiener(rep: &Representation, families: usize, rng: &mut Rng) -> Result<WienerAudit> {
    let n = rep.dim();
    let mut audit = WienerAudit {
        families,
        regular: 0,
        non_regular: 0,
        inconsistent: 0,
        identity_span_rank: 0,
        identity_regular: true,
        passed: false,
    };
    for t in 0..families {
        let mut a = random::operator(rng, n);
        if t % 2 == 1 {
            a = carve_zero(rep, &a, t % rep.points())?;
        }
        let r = wiener_report(rep, &[a])?;
        if r.regular {
            audit.regular += 1;
        } else {
            audit.non_regular += 1;
        }
        audit.inconsistent += usize::from(!r.consistent);
    }
    let id = wiener_report(rep, &[Operator::identity(n)])?;
    audit.identity_span_rank = id.span_rank;
    audit.identity_regular = id.regular;
    audit.passed = audit.inconsistent == 0 && !id.regular && id.consistent && id.span_rank == 1;
    Ok(audit)
}

/// `ψ(n) = c^n` on `Z_d`, the truncation of a geometric state on `ℓ²(Z)`.
pub fn geometric_state(d: usize, c: f64) -> DVector<Complex64> {
    DVector::from_fn(d, |k, _| Complex64::new(c.powi(k as i32), 0.0))
}

/// `⟨ψ, U_{(0,θ)} ψ⟩` for the untruncated state on `ℓ²(Z)`:
/// `Σ_{n≥0} |c|^{2n} e^{−iθn} = 1/(1 − |c|² e^{−iθ})`.
pub fn geometric_limit(c: f64, theta: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - Complex64::from_polar(c * c, -theta))
}
