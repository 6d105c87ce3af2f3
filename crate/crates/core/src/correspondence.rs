//! Covariant positive correspondence rules `Γ(f, A) = (A∗B₁, f∗B₂)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::convolution::{conv_ab, conv_fa, MixedElement, PhaseFunction};
use crate::error::{QhaError, Result};
use crate::linalg::{Exponent, Operator};
use crate::random::{self, Rng};
use crate::representation::Representation;

/// A rule given by two density operators.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceRule {
    b1: Operator,
    b2: Operator,
}

fn check_density(b: &Operator, tol: f64, which: &str) -> Result<()> {
    let herm = b.max_abs_diff(&b.adjoint());
    if herm > tol {
        return Err(QhaError::NotDensity(format!("{which} is not Hermitian (deviation {herm:e})")));
    }
    let tr = b.trace();
    if (tr - 1.0).norm() > tol {
        return Err(QhaError::NotDensity(format!("{which} has trace {tr}")));
    }
    let min = b.min_eigenvalue();
    if min < -tol {
        return Err(QhaError::NotDensity(format!("{which} has eigenvalue {min:e}")));
    }
    Ok(())
}

impl CorrespondenceRule {
    pub fn new(b1: Operator, b2: Operator, tol: f64) -> Result<Self> {
        if b1.dim() != b2.dim() {
            return Err(QhaError::DimensionMismatch {
                expected: b1.dim(),
                got: b2.dim(),
            });
        }
        check_density(&b1, tol, "B1")?;
        check_density(&b2, tol, "B2")?;
        Ok(Self { b1, b2 })
    }

    /// Both slots `I/|G|`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let b = Operator::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Self { b1: b.clone(), b2: b }
    }

    pub fn b1(&self) -> &Operator {
        &self.b1
    }

    pub fn b2(&self) -> &Operator {
        &self.b2
    }

    pub fn dim(&self) -> usize {
        self.b1.dim()
    }

    pub fn apply(&self, rep: &Representation, u: &MixedElement) -> Result<MixedElement> {
        apply_rule(rep, self, u)
    }
}

pub fn make_rule(b1: Operator, b2: Operator, tol: f64) -> Result<CorrespondenceRule> {
    CorrespondenceRule::new(b1, b2, tol)
}

/// `Γ(f, A) = (A∗B₁, f∗B₂)`: the slots swap.
pub fn apply_rule(rep: &Representation, rule: &CorrespondenceRule, u: &MixedElement) -> Result<MixedElement> {
    if rule.dim() != rep.dim() {
        return Err(QhaError::DimensionMismatch {
            expected: rep.dim(),
            got: rule.dim(),
        });
    }
    MixedElement::new(conv_ab(rep, &u.op, &rule.b1)?, conv_fa(rep, &u.fun, &rule.b2)?)
}

fn shift_mixed(rep: &Representation, x: usize, u: &MixedElement) -> MixedElement {
    MixedElement {
        fun: u.fun.translate(rep.phase_space(), x),
        op: rep.shift_unchecked(x, &u.op),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleReport {
    pub trials: usize,
    /// `max ‖α_x Γ(u) − Γ(α_x u)‖`.
    pub covariance_dev: f64,
    /// Smallest output of a positive input: min of `A∗B₁` and of `λ_min(f∗B₂)`.
    pub positivity_min: f64,
    /// `‖Γ(1,0) − (0,I)‖`.
    pub unit_function_dev: f64,
    /// `‖Γ(0,I) − (1,0)‖`.
    pub unit_operator_dev: f64,
    /// Smallest value of `Γ(u*u) − Γ(u)*Γ(u)`, pointwise and spectrally.
    pub kadison_schwarz_min: f64,
    pub kadison_schwarz_violations: usize,
    /// `‖Γ(1,I)*Γ(1,I) − Γ((1,I)*(1,I))‖`.
    pub unital_equality_dev: f64,
    pub passed: bool,
}

/// Audits covariance, positivity, the unit exchanges and the Kadison–Schwarz
/// inequality in the direct-sum C*-algebra `L^∞(Ξ) ⊕ L(H)`.
pub fn verify_rule(
    rep: &Representation,
    rule: &CorrespondenceRule,
    trials: usize,
    rng: &mut Rng,
    tol: f64,
) -> Result<RuleReport> {
    let n = rep.dim();
    let p = rep.points();
    let one = PhaseFunction::constant(n, Complex64::new(1.0, 0.0));
    let zero_f = PhaseFunction::zeros(n);
    let zero_a = Operator::zeros(n);
    let id = Operator::identity(n);

    let g = apply_rule(rep, rule, &MixedElement::new(one.clone(), zero_a.clone())?)?;
    let unit_function_dev = g.max_abs_diff(&MixedElement::new(zero_f.clone(), id.clone())?);
    let g = apply_rule(rep, rule, &MixedElement::new(zero_f, id.clone())?)?;
    let unit_operator_dev = g.max_abs_diff(&MixedElement::new(one.clone(), zero_a)?);

    let unit = apply_rule(rep, rule, &MixedElement::new(one.clone(), id.clone())?)?;
    let unital_equality_dev = unit
        .fun
        .mul(&unit.fun.conj())
        .max_abs_diff(&one)
        .max((&unit.op.adjoint() * &unit.op).max_abs_diff(&id));

    let mut covariance_dev = 0.0f64;
    let mut positivity_min = f64::INFINITY;
    let mut kadison_schwarz_min = f64::INFINITY;
    let mut kadison_schwarz_violations = 0;
    for t in 0..trials {
        let u = MixedElement::new(
            PhaseFunction::new(n, random::function(rng, p))?,
            random::operator(rng, n),
        )?;
        let x = (t * 7 + 1) % p;
        let lhs = shift_mixed(rep, x, &apply_rule(rep, rule, &u)?);
        let rhs = apply_rule(rep, rule, &shift_mixed(rep, x, &u))?;
        covariance_dev = covariance_dev.max(lhs.max_abs_diff(&rhs));

        let pos = MixedElement::new(
            PhaseFunction::new(n, random::nonnegative_function(rng, p))?,
            random::psd(rng, n),
        )?;
        let out = apply_rule(rep, rule, &pos)?;
        positivity_min = positivity_min
            .min(out.fun.min_real())
            .min(-out.fun.max_imag())
            .min(out.op.min_eigenvalue());

        // Γ(u)*Γ(u) ≤ Γ(u*u)
        let gu = apply_rule(rep, rule, &u)?;
        let uu = MixedElement::new(u.fun.mul(&u.fun.conj()), &u.op.adjoint() * &u.op)?;
        let guu = apply_rule(rep, rule, &uu)?;
        let fun_gap = guu
            .fun
            .values()
            .iter()
            .zip(gu.fun.values())
            .fold(f64::INFINITY, |m, (big, small)| m.min(big.re - small.norm_sqr()));
        let op_gap = (&guu.op - &(&gu.op.adjoint() * &gu.op)).hermitian_part().min_eigenvalue();
        let gap = fun_gap.min(op_gap);
        let scale = 1.0 + uu.norm();
        if gap < -tol * scale {
            kadison_schwarz_violations += 1;
        }
        kadison_schwarz_min = kadison_schwarz_min.min(gap);
    }
    if trials == 0 {
        positivity_min = 0.0;
        kadison_schwarz_min = 0.0;
    }
    Ok(RuleReport {
        trials,
        covariance_dev,
        positivity_min,
        unit_function_dev,
        unit_operator_dev,
        kadison_schwarz_min,
        kadison_schwarz_violations,
        unital_equality_dev,
        passed: covariance_dev <= tol * 1e3
            && positivity_min >= -tol * 1e2
            && unit_function_dev <= tol
            && unit_operator_dev <= tol
            && unital_equality_dev <= tol
            && kadison_schwarz_violations == 0,
    })
}

/// Convex functions accepted by the Berezin–Lieb check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexFn {
    Square,
    Abs,
    Exp,
}

impl ConvexFn {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            ConvexFn::Square => t * t,
            ConvexFn::Abs => t.abs(),
            ConvexFn::Exp => t.exp(),
        }
    }

    pub const ALL: [ConvexFn; 3] = [ConvexFn::Square, ConvexFn::Abs, ConvexFn::Exp];
}

impl fmt::Display for ConvexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvexFn::Square => "square",
            ConvexFn::Abs => "abs",
            ConvexFn::Exp => "exp",
        })
    }
}

impl FromStr for ConvexFn {
    type Err = QhaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "square" | "t2" | "t^2" => Ok(ConvexFn::Square),
            "abs" | "|t|" => Ok(ConvexFn::Abs),
            "exp" => Ok(ConvexFn::Exp),
            other => Err(QhaError::Parse(format!("unsupported convex function '{other}' (use square, abs, exp)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BerezinLiebReport {
    pub phi: ConvexFn,
    /// `w·Σ_x φ((A∗B₁)(x))`.
    pub operator_lhs: f64,
    /// `tr φ(A)`.
    pub operator_rhs: f64,
    pub operator_holds: bool,
    /// `tr φ(f∗B₂)`.
    pub function_lhs: f64,
    /// `w·Σ_x φ(f(x))`.
    pub function_rhs: f64,
    pub function_holds: bool,
    /// `φ(tr(f∗B₂))`, compared against `function_rhs`; reported only.
    pub scalar_trace_lhs: f64,
    pub scalar_trace_holds: bool,
}

/// Both Berezin–Lieb directions for Hermitian `A` and real `f`.
pub fn berezin_lieb_check(
    rep: &Representation,
    rule: &CorrespondenceRule,
    a: &Operator,
    f: &PhaseFunction,
    phi: ConvexFn,
    tol: f64,
) -> Result<BerezinLiebReport> {
    let herm = a.max_abs_diff(&a.adjoint());
    if herm > tol * (1.0 + a.max_abs()) {
        return Err(QhaError::NotHermitian(herm));
    }
    let ab = conv_ab(rep, a, &rule.b1)?;
    let w = rep.weight();
    let operator_lhs = w * ab.values().iter().map(|v| phi.eval(v.re)).sum::<f64>();
    let operator_rhs = a.hermitian_function(|t| phi.eval(t)).trace().re;

    let fb = conv_fa(rep, &f.map(|v| Complex64::new(v.re, 0.0)), &rule.b2)?;
    let function_lhs = fb.hermitian_function(|t| phi.eval(t)).trace().re;
    let function_rhs = w * f.values().iter().map(|v| phi.eval(v.re)).sum::<f64>();
    let scalar_trace_lhs = phi.eval(fb.trace().re);

    let slack = |rhs: f64| tol * (1.0 + rhs.abs());
    Ok(BerezinLiebReport {
        phi,
        operator_holds: operator_lhs <= operator_rhs + slack(operator_rhs),
        function_holds: function_lhs <= function_rhs + slack(function_rhs),
        scalar_trace_holds: scalar_trace_lhs <= function_rhs + slack(function_rhs),
        operator_lhs,
        operator_rhs,
        function_lhs,
        function_rhs,
        scalar_trace_lhs,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BerezinLiebAudit {
    pub phi: ConvexFn,
    pub trials: usize,
    pub operator_violations: usize,
    pub function_violations: usize,
    /// Failures of the scalar-trace form; not part of `passed`.
    pub scalar_trace_violations: usize,
    pub min_operator_slack: f64,
    pub min_function_slack: f64,
    pub passed: bool,
}

/// Random Hermitian `A` and real `f`, counting violations of each direction.
pub fn verify_berezin_lieb(
    rep: &Representation,
    rule: &CorrespondenceRule,
    phi: ConvexFn,
    trials: usize,
    rng: &mut Rng,
    tol: f64,
) -> Result<BerezinLiebAudit> {
    let n = rep.dim();
    let mut audit = BerezinLiebAudit {
        phi,
        trials,
        operator_violations: 0,
        function_violations: 0,
        scalar_trace_violations: 0,
        min_operator_slack: f64::INFINITY,
        min_function_slack: f64::INFINITY,
        passed: true,
    };
    for _ in 0..trials {
        let a = random::hermitian(rng, n);
        let f = PhaseFunction::new(n, random::real_function(rng, rep.points()))?;
        let r = berezin_lieb_check(rep, rule, &a, &f, phi, tol)?;
        audit.operator_violations += usize::from(!r.operator_holds);
        audit.function_violations += usize::from(!r.function_holds);
        audit.scalar_trace_violations += usize::from(!r.scalar_trace_holds);
        audit.min_operator_slack = audit.min_operator_slack.min(r.operator_rhs - r.operator_lhs);
        audit.min_function_slack = audit.min_function_slack.min(r.function_rhs - r.function_lhs);
    }
    if trials == 0 {
        audit.min_operator_slack = 0.0;
        audit.min_function_slack = 0.0;
    }
    audit.passed = audit.operator_violations == 0 && audit.function_violations == 0;
    Ok(audit)
}

#[derive(Debug, Clone)]
pub struct RecoveredRule {
    pub b1: Operator,
    pub b2: Operator,
}

/// Reads the densities back off the channel: `Γ(δ̃, 0)` has operator slot
/// `B₂`, and `(E_ij∗B₁)(0) = (R B₁ R)_{ji}`.
pub fn recover_rule(rep: &Representation, rule: &CorrespondenceRule) -> Result<RecoveredRule> {
    let n = rep.dim();
    let probe = apply_rule(rep, rule, &MixedElement::new(PhaseFunction::delta(n), Operator::zeros(n))?)?;
    let mut m = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut e = nalgebra::DMatrix::zeros(n, n);
            e[(i, j)] = Complex64::new(1.0, 0.0);
            let u = MixedElement::new(PhaseFunction::zeros(n), Operator::from_matrix_unchecked(e))?;
            m[(j, i)] = apply_rule(rep, rule, &u)?.fun.get(0);
        }
    }
    let reflected = Operator::from_matrix_unchecked(m);
    Ok(RecoveredRule {
        b1: rep.reflect_unchecked(&reflected),
        b2: probe.op,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub b1_dev: f64,
    pub b2_dev: f64,
    /// `max ‖(A∗B)∗C − (B∗C)∗A‖` over random triples.
    pub associativity_dev: f64,
    /// Finite avatar of `‖A∗B‖_{L¹} ≤ C‖A‖_{T¹}‖B‖_{T¹}`; observed max ratio.
    pub l1_ratio: f64,
    pub passed: bool,
}

pub fn verify_uniqueness(
    rep: &Representation,
    rule: &CorrespondenceRule,
    trials: usize,
    rng: &mut Rng,
    tol: f64,
) -> Result<UniquenessReport> {
    let rec = recover_rule(rep, rule)?;
    let b1_dev = rec.b1.max_abs_diff(&rule.b1);
    let b2_dev = rec.b2.max_abs_diff(&rule.b2);
    let n = rep.dim();
    let mut associativity_dev = 0.0f64;
    let mut l1_ratio = 0.0f64;
    for _ in 0..trials {
        let a = random::operator(rng, n);
        let b = random::operator(rng, n);
        let c = random::operator(rng, n);
        let ab = conv_ab(rep, &a, &b)?;
        let left = conv_fa(rep, &ab, &c)?;
        let right = conv_fa(rep, &conv_ab(rep, &b, &c)?, &a)?;
        associativity_dev = associativity_dev.max(left.max_abs_diff(&right) / (1.0 + left.max_abs()));
        l1_ratio = l1_ratio.max(ab.lp_norm(Exponent::Finite(1.0)) / (a.trace_norm() * b.trace_norm()));
    }
    Ok(UniquenessReport {
        passed: b1_dev <= tol && b2_dev <= tol && associativity_dev <= tol,
        b1_dev,
        b2_dev,
        associativity_dev,
        l1_ratio,
    })
}
