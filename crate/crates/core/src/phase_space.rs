//! Heisenberg multipliers on `Ξ = G × Ĝ` and the phase space they define.
//!
//! A point `(x, ξ)` is indexed by `pos_index * |G| + mom_index`, so `Ξ` is
//! enumerated with the momentum coordinate varying fastest.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::TOL;

/// Default cap on `|Ξ|` for the cubic cocycle sweep.
pub const DEFAULT_CUBIC_LIMIT: usize = 4096;

/// Largest `|G|` a [`PhaseSpace`] will tabulate.
pub const MAX_GROUP_SIZE: usize = 1024;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point `(x, ξ)` of the phase space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePoint {
    pub pos: GroupElement,
    pub mom: GroupElement,
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.pos, self.mom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MultiplierKind {
    Canonical,
    Weyl,
    Modified,
    /// An explicit `|Ξ| × |Ξ|` table, used to feed arbitrary candidates to
    /// the verifiers. No representation is built from it.
    Table,
}

impl fmt::Display for MultiplierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MultiplierKind::Canonical => "canonical",
            MultiplierKind::Weyl => "weyl",
            MultiplierKind::Modified => "modified",
            MultiplierKind::Table => "table",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Canonical,
    Weyl,
    Modified {
        base: Box<Multiplier>,
        a: Vec<Complex64>,
    },
    Table(Vec<Complex64>),
}

/// A normalized 2-cocycle `m: Ξ × Ξ → S¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    group: Arc<FiniteAbelianGroup>,
    repr: Repr,
}

/// Maximum deviations of a multiplier from the cocycle laws.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub kind: MultiplierKind,
    pub points: usize,
    pub cocycle_max_dev: f64,
    pub symmetry_max_dev: f64,
    pub normalization_max_dev: f64,
    pub unit_modulus_max_dev: f64,
    pub normalized: bool,
    pub passed: bool,
}

fn xi_add(g: &FiniteAbelianGroup, z: usize, w: usize) -> usize {
    let n = g.size();
    g.add_idx(z / n, w / n) * n + g.add_idx(z % n, w % n)
}

fn xi_neg(g: &FiniteAbelianGroup, z: usize) -> usize {
    let n = g.size();
    g.neg_idx(z / n) * n + g.neg_idx(z % n)
}

impl Multiplier {
    /// `m((x,ξ),(y,η)) = conj⟨x, η⟩`.
    pub fn canonical(group: &FiniteAbelianGroup) -> Self {
        Self {
            group: Arc::new(group.clone()),
            repr: Repr::Canonical,
        }
    }

    /// The symmetrized multiplier `m((x,ξ),(y,η)) = ⟨y/2, ξ⟩·conj⟨x/2, η⟩`,
    /// i.e. the canonical one modified by [`Multiplier::weyl_phase`].
    pub fn weyl(group: &FiniteAbelianGroup) -> Result<Self> {
        if !group.is_two_regular() {
            return Err(QhaError::NotTwoRegular);
        }
        Ok(Self {
            group: Arc::new(group.clone()),
            repr: Repr::Weyl,
        })
    }

    /// The phase `a(x, ξ) = conj⟨x/2, ξ⟩` turning the canonical multiplier
    /// into the Weyl one.
    pub fn weyl_phase(group: &FiniteAbelianGroup) -> Result<Vec<Complex64>> {
        if !group.is_two_regular() {
            return Err(QhaError::NotTwoRegular);
        }
        let n = group.size();
        Ok((0..n * n)
            .map(|z| group.character_idx(group.halve_idx(z / n), z % n).conj())
            .collect())
    }

    /// `m_a(z,w) = a(z)a(w)/a(z+w)·m(z,w)`; `a` must be unimodular, even and
    /// satisfy `a(0) = 1`.
    pub fn modified(base: &Multiplier, a: Vec<Complex64>) -> Result<Self> {
        let g = base.group.clone();
        let points = g.size() * g.size();
        if a.len() != points {
            return Err(QhaError::DimensionMismatch {
                expected: points,
                got: a.len(),
            });
        }
        if let Some(z) = a.iter().position(|v| (v.norm() - 1.0).abs() > TOL) {
            return Err(QhaError::InvalidCochain(format!(
                "|a| = {} at point {z}, expected 1",
                a[z].norm()
            )));
        }
        if (a[0] - ONE).norm() > TOL {
            return Err(QhaError::InvalidCochain(format!("a(0) = {} != 1", a[0])));
        }
        if let Some(z) = (0..points).find(|&z| (a[z] - a[xi_neg(&g, z)]).norm() > TOL) {
            return Err(QhaError::InvalidCochain(format!(
                "a is not even at point {z}"
            )));
        }
        Ok(Self {
            group: g,
            repr: Repr::Modified {
                base: Box::new(base.clone()),
                a,
            },
        })
    }

    /// Wraps an explicit table `m[z * |Ξ| + w]` without validating it.
    pub fn from_table(group: &FiniteAbelianGroup, table: Vec<Complex64>) -> Result<Self> {
        let points = group.size() * group.size();
        if table.len() != points * points {
            return Err(QhaError::DimensionMismatch {
                expected: points * points,
                got: table.len(),
            });
        }
        Ok(Self {
            group: Arc::new(group.clone()),
            repr: Repr::Table(table),
        })
    }

    /// Tabulates the multiplier over `Ξ × Ξ`.
    pub fn to_table(&self) -> Vec<Complex64> {
        let p = self.points();
        let mut out = Vec::with_capacity(p * p);
        for z in 0..p {
            for w in 0..p {
                out.push(self.eval_idx(z, w));
            }
        }
        out
    }

    pub fn kind(&self) -> MultiplierKind {
        match self.repr {
            Repr::Canonical => MultiplierKind::Canonical,
            Repr::Weyl => MultiplierKind::Weyl,
            Repr::Modified { .. } => MultiplierKind::Modified,
            Repr::Table(_) => MultiplierKind::Table,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub(crate) fn group_arc(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    /// The cochain `a` of a modified multiplier.
    pub fn cochain(&self) -> Option<&[Complex64]> {
        match &self.repr {
            Repr::Modified { a, .. } => Some(a),
            _ => None,
        }
    }

    /// The multiplier a modified one was built from.
    pub fn base(&self) -> Option<&Multiplier> {
        match &self.repr {
            Repr::Modified { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn points(&self) -> usize {
        self.group.size() * self.group.size()
    }

    pub fn eval(&self, z: &PhasePoint, w: &PhasePoint) -> Result<Complex64> {
        let zi = self.point_index(z)?;
        let wi = self.point_index(w)?;
        Ok(self.eval_idx(zi, wi))
    }

    fn point_index(&self, z: &PhasePoint) -> Result<usize> {
        Ok(self.group.index_of(&z.pos)? * self.group.size() + self.group.index_of(&z.mom)?)
    }

    pub(crate) fn eval_idx(&self, z: usize, w: usize) -> Complex64 {
        let g = &*self.group;
        let n = g.size();
        match &self.repr {
            Repr::Canonical => g.character_idx(z / n, w % n).conj(),
            Repr::Weyl => {
                g.character_idx(g.halve_idx(w / n), z % n)
                    * g.character_idx(g.halve_idx(z / n), w % n).conj()
            }
            Repr::Modified { base, a } => {
                a[z] * a[w] / a[xi_add(g, z, w)] * base.eval_idx(z, w)
            }
            Repr::Table(t) => t[z * n * n + w],
        }
    }

    /// Exhaustive check of normalization, cocycle identity, the symmetry
    /// `m(x,y) = m(−x,−y)` and unit modulus, capped at `|Ξ| ≤ limit`.
    pub fn verify(&self, tol: f64, limit: usize) -> Result<MultiplierReport> {
        let p = self.points();
        if p > limit {
            return Err(QhaError::SizeGuard {
                what: "cocycle sweep |Xi|",
                size: p,
                limit,
            });
        }
        let g = &*self.group;
        let table = self.to_table();
        let m = |z: usize, w: usize| table[z * p + w];
        let mut norm_dev = 0.0f64;
        let mut sym_dev = 0.0f64;
        let mut unit_dev = 0.0f64;
        for z in 0..p {
            norm_dev = norm_dev.max((m(z, 0) - ONE).norm()).max((m(0, z) - ONE).norm());
            for w in 0..p {
                let v = m(z, w);
                unit_dev = unit_dev.max((v.norm() - 1.0).abs());
                sym_dev = sym_dev.max((v - m(xi_neg(g, z), xi_neg(g, w))).norm());
            }
        }
        let mut cocycle_dev = 0.0f64;
        for x in 0..p {
            for y in 0..p {
                let xy = xi_add(g, x, y);
                let mxy = m(x, y);
                for z in 0..p {
                    let lhs = m(xy, z) * mxy;
                    let rhs = m(x, xi_add(g, y, z)) * m(y, z);
                    cocycle_dev = cocycle_dev.max((lhs - rhs).norm());
                }
            }
        }
        let normalized = norm_dev <= tol;
        Ok(MultiplierReport {
            kind: self.kind(),
            points: p,
            cocycle_max_dev: cocycle_dev,
            symmetry_max_dev: sym_dev,
            normalization_max_dev: norm_dev,
            unit_modulus_max_dev: unit_dev,
            normalized,
            passed: normalized && cocycle_dev <= tol && sym_dev <= tol && unit_dev <= tol,
        })
    }

    pub fn symplectic_form(&self) -> SymplecticForm {
        let p = self.points();
        let mut values = Vec::with_capacity(p * p);
        for z in 0..p {
            for w in 0..p {
                values.push(self.eval_idx(z, w) / self.eval_idx(w, z));
            }
        }
        SymplecticForm {
            group: self.group.clone(),
            values,
        }
    }
}

/// A tabulated form `σ: Ξ × Ξ → ℂ`, normally `σ(z,w) = m(z,w)/m(w,z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    group: Arc<FiniteAbelianGroup>,
    values: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymplecticReport {
    pub bicharacter_max_dev: f64,
    pub antisymmetry_max_dev: f64,
    pub alternating_max_dev: f64,
    pub heisenberg: bool,
}

impl SymplecticForm {
    /// Wraps an explicit table `σ[z * |Ξ| + w]`, e.g. a degenerate test input.
    pub fn from_table(group: &FiniteAbelianGroup, values: Vec<Complex64>) -> Result<Self> {
        let p = group.size() * group.size();
        if values.len() != p * p {
            return Err(QhaError::DimensionMismatch {
                expected: p * p,
                got: values.len(),
            });
        }
        Ok(Self {
            group: Arc::new(group.clone()),
            values,
        })
    }

    pub fn points(&self) -> usize {
        self.group.size() * self.group.size()
    }

    pub fn eval_idx(&self, z: usize, w: usize) -> Complex64 {
        self.values[z * self.points() + w]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// True iff `σ(z, ·) ≡ 1` forces `z = 0`.
    pub fn is_heisenberg(&self, tol: f64) -> bool {
        let p = self.points();
        (1..p).all(|z| (0..p).any(|w| (self.eval_idx(z, w) - ONE).norm() > tol))
    }

    pub fn verify(&self, tol: f64) -> SymplecticReport {
        let p = self.points();
        let g = &*self.group;
        let mut bichar = 0.0f64;
        let mut anti = 0.0f64;
        let mut alt = 0.0f64;
        for x in 0..p {
            alt = alt.max((self.eval_idx(x, x) - ONE).norm());
            for y in 0..p {
                anti = anti.max((self.eval_idx(x, y) * self.eval_idx(y, x) - ONE).norm());
                for z in 0..p {
                    let lhs = self.eval_idx(x, xi_add(g, y, z));
                    bichar = bichar.max((lhs - self.eval_idx(x, y) * self.eval_idx(x, z)).norm());
                }
            }
        }
        SymplecticReport {
            bicharacter_max_dev: bichar,
            antisymmetry_max_dev: anti,
            alternating_max_dev: alt,
            heisenberg: self.is_heisenberg(tol),
        }
    }
}

/// `Ξ = G × Ĝ` with a multiplier, tabulated group arithmetic and Haar weight
/// `1/|G|` per point.
#[derive(Debug, Clone)]
pub struct PhaseSpace {
    group: Arc<FiniteAbelianGroup>,
    multiplier: Multiplier,
    n: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    chi: Vec<Complex64>,
}

impl PartialEq for PhaseSpace {
    fn eq(&self, other: &Self) -> bool {
        self.multiplier == other.multiplier
    }
}

impl PhaseSpace {
    /// Builds the phase space. Table multipliers are checked exhaustively and
    /// must pass; the other kinds are valid by construction.
    pub fn new(multiplier: Multiplier) -> Result<Self> {
        let group = multiplier.group_arc().clone();
        let n = group.size();
        if n > MAX_GROUP_SIZE {
            return Err(QhaError::SizeGuard {
                what: "|G|",
                size: n,
                limit: MAX_GROUP_SIZE,
            });
        }
        if multiplier.kind() == MultiplierKind::Table {
            let report = multiplier.verify(TOL, DEFAULT_CUBIC_LIMIT)?;
            if !report.passed {
                return Err(QhaError::InvalidMultiplier(format!(
                    "cocycle deviation {:.3e}, symmetry deviation {:.3e}, normalization deviation {:.3e}",
                    report.cocycle_max_dev, report.symmetry_max_dev, report.normalization_max_dev
                )));
            }
            if !multiplier.symplectic_form().is_heisenberg(TOL) {
                return Err(QhaError::InvalidMultiplier(
                    "symplectic form is degenerate".into(),
                ));
            }
        }
        let mut add = vec![0; n * n];
        let mut chi = vec![ONE; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = group.add_idx(a, b);
                chi[a * n + b] = group.character_idx(a, b);
            }
        }
        let neg = (0..n).map(|a| group.neg_idx(a)).collect();
        Ok(Self {
            group,
            multiplier,
            n,
            add,
            neg,
            chi,
        })
    }

    pub fn canonical(group: &FiniteAbelianGroup) -> Result<Self> {
        Self::new(Multiplier::canonical(group))
    }

    pub fn weyl(group: &FiniteAbelianGroup) -> Result<Self> {
        Self::new(Multiplier::weyl(group)?)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn multiplier(&self) -> &Multiplier {
        &self.multiplier
    }

    /// `|G|`, the Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `|Ξ| = |G|²`.
    pub fn points(&self) -> usize {
        self.n * self.n
    }

    /// Haar weight of a single point of `Ξ`.
    pub fn weight(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn point(&self, z: usize) -> PhasePoint {
        PhasePoint {
            pos: self.group.element_at(z / self.n).expect("index in range"),
            mom: self.group.element_at(z % self.n).expect("index in range"),
        }
    }

    pub fn index_of(&self, z: &PhasePoint) -> Result<usize> {
        Ok(self.group.index_of(&z.pos)? * self.n + self.group.index_of(&z.mom)?)
    }

    pub(crate) fn g_add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b]
    }

    pub(crate) fn g_neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub(crate) fn g_sub(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + self.neg[b]]
    }

    pub(crate) fn chi(&self, x: usize, xi: usize) -> Complex64 {
        self.chi[x * self.n + xi]
    }

    pub fn add(&self, z: usize, w: usize) -> usize {
        let n = self.n;
        self.g_add(z / n, w / n) * n + self.g_add(z % n, w % n)
    }

    pub fn neg(&self, z: usize) -> usize {
        let n = self.n;
        self.g_neg(z / n) * n + self.g_neg(z % n)
    }

    pub fn sub(&self, z: usize, w: usize) -> usize {
        self.add(z, self.neg(w))
    }

    /// `m(z, w)` by point index.
    pub fn m(&self, z: usize, w: usize) -> Complex64 {
        let n = self.n;
        match self.multiplier.repr {
            Repr::Canonical => self.chi(z / n, w % n).conj(),
            _ => self.multiplier.eval_idx(z, w),
        }
    }

    /// `σ(z,w) = m(z,w)/m(w,z)`; for every kind except tables this is
    /// `⟨y,ξ⟩·conj⟨x,η⟩` at `z = (x,ξ)`, `w = (y,η)`.
    pub fn sigma(&self, z: usize, w: usize) -> Complex64 {
        let n = self.n;
        match self.multiplier.repr {
            Repr::Table(_) => self.m(z, w) / self.m(w, z),
            _ => self.chi(w / n, z % n) * self.chi(z / n, w % n).conj(),
        }
    }

    pub fn same_as(&self, other: &PhaseSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(QhaError::PhaseSpaceMismatch(format!(
                "{} ({}) vs {} ({})",
                self.group,
                self.multiplier.kind(),
                other.group,
                other.multiplier.kind()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn group(orders: &[usize]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(orders).unwrap()
    }

    fn pp(g: &FiniteAbelianGroup, x: &[usize], xi: &[usize]) -> PhasePoint {
        PhasePoint {
            pos: g.element(x).unwrap(),
            mom: g.element(xi).unwrap(),
        }
    }

    #[test]
    fn canonical_values() {
        let z2 = group(&[2]);
        let m = Multiplier::canonical(&z2);
        let v = m.eval(&pp(&z2, &[1], &[0]), &pp(&z2, &[0], &[1])).unwrap();
        assert!((v + ONE).norm() < 1e-15);

        let z3 = group(&[3]);
        let m = Multiplier::canonical(&z3);
        let v = m.eval(&pp(&z3, &[1], &[0]), &pp(&z3, &[0], &[1])).unwrap();
        assert!((v - Complex64::from_polar(1.0, -2.0 * PI / 3.0)).norm() < 1e-15);
        for z in 0..9 {
            assert_eq!(m.eval_idx(z, 0), ONE);
        }
    }

    #[test]
    fn supported_kinds_pass_verification() {
        for orders in [&[2][..], &[3], &[2, 2], &[4]] {
            let r = Multiplier::canonical(&group(orders)).verify(1e-12, 4096).unwrap();
            assert!(r.passed, "{orders:?}: {r:?}");
        }
        for orders in [&[3][..], &[5], &[3, 3]] {
            let r = Multiplier::weyl(&group(orders)).unwrap().verify(1e-12, 4096).unwrap();
            assert!(r.passed, "{orders:?}: {r:?}");
        }
    }

    #[test]
    fn weyl_is_canonical_modified_by_weyl_phase() {
        let z3 = group(&[3]);
        let weyl = Multiplier::weyl(&z3).unwrap();
        let a = Multiplier::weyl_phase(&z3).unwrap();
        let modified = Multiplier::modified(&Multiplier::canonical(&z3), a).unwrap();
        for (u, v) in weyl.to_table().iter().zip(modified.to_table()) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn weyl_is_a_symmetric_bicharacter() {
        let z3 = group(&[3]);
        let ps = PhaseSpace::weyl(&z3).unwrap();
        let p = ps.points();
        for z in 0..p {
            assert!((ps.m(z, ps.neg(z)) - ONE).norm() < 1e-12);
            for w in 0..p {
                assert!((ps.m(z, w) - ps.m(w, z).conj()).norm() < 1e-12);
                assert!((ps.m(z, w) * ps.m(w, z).conj() - ps.sigma(z, w)).norm() < 1e-12);
                for v in 0..p {
                    let lhs = ps.m(ps.add(z, w), v);
                    assert!((lhs - ps.m(z, v) * ps.m(w, v)).norm() < 1e-12);
                }
            }
        }
        assert_eq!(Multiplier::weyl(&group(&[2])), Err(QhaError::NotTwoRegular));
    }

    #[test]
    fn trivial_cochain_is_identity() {
        let g = group(&[2, 3]);
        let m = Multiplier::canonical(&g);
        let ma = Multiplier::modified(&m, vec![ONE; 36]).unwrap();
        assert_eq!(m.to_table(), ma.to_table());
    }

    #[test]
    fn modified_rejects_bad_cochains() {
        let z3 = group(&[3]);
        let m = Multiplier::canonical(&z3);
        let mut a = vec![ONE; 9];
        a[0] = -ONE;
        assert!(matches!(Multiplier::modified(&m, a), Err(QhaError::InvalidCochain(_))));
        let mut a = vec![ONE; 9];
        a[1] = Complex64::i();
        assert!(matches!(Multiplier::modified(&m, a), Err(QhaError::InvalidCochain(_))));
        let mut a = vec![ONE; 9];
        a[4] = Complex64::new(2.0, 0.0);
        a[8] = Complex64::new(2.0, 0.0);
        assert!(matches!(Multiplier::modified(&m, a), Err(QhaError::InvalidCochain(_))));
    }

    #[test]
    fn symplectic_form_is_shared_by_modifications() {
        let g = group(&[2, 2]);
        let ps = PhaseSpace::canonical(&g).unwrap();
        let p = ps.points();
        // even cochain built from an arbitrary phase symmetrized over ±z
        let a: Vec<Complex64> = (0..p)
            .map(|z| {
                if z == 0 {
                    ONE
                } else {
                    let t = (z as f64 + ps.neg(z) as f64) * 0.37;
                    Complex64::from_polar(1.0, t)
                }
            })
            .collect();
        let ma = Multiplier::modified(ps.multiplier(), a).unwrap();
        let s0 = ps.multiplier().symplectic_form();
        let s1 = ma.symplectic_form();
        for z in 0..p {
            for w in 0..p {
                assert!((s0.eval_idx(z, w) - s1.eval_idx(z, w)).norm() < 1e-12);
                assert!((s0.eval_idx(z, w) - ps.sigma(z, w)).norm() < 1e-12);
            }
        }
        let r = s1.verify(1e-12);
        assert!(r.heisenberg && r.bicharacter_max_dev < 1e-12 && r.alternating_max_dev < 1e-12);
    }

    #[test]
    fn heisenberg_detection() {
        let z2 = group(&[2]);
        assert!(Multiplier::canonical(&z2).symplectic_form().is_heisenberg(TOL));
        assert!(Multiplier::weyl(&group(&[5])).unwrap().symplectic_form().is_heisenberg(TOL));
        let flat = SymplecticForm::from_table(&z2, vec![ONE; 16]).unwrap();
        assert!(!flat.is_heisenberg(TOL));
    }

    #[test]
    fn corrupted_table_is_caught() {
        let z2 = group(&[2]);
        let mut t = Multiplier::canonical(&z2).to_table();
        t[1 * 4 + 3] = -t[1 * 4 + 3];
        let m = Multiplier::from_table(&z2, t).unwrap();
        let r = m.verify(TOL, 4096).unwrap();
        assert!(r.cocycle_max_dev >= 1.0);
        assert!(!r.passed);
        assert!(matches!(PhaseSpace::new(m), Err(QhaError::InvalidMultiplier(_))));
    }

    #[test]
    fn size_guard() {
        let m = Multiplier::canonical(&group(&[3]));
        assert!(matches!(m.verify(TOL, 8), Err(QhaError::SizeGuard { .. })));
    }

    #[test]
    fn point_indexing_round_trip() {
        let ps = PhaseSpace::canonical(&group(&[2, 3])).unwrap();
        for z in 0..ps.points() {
            assert_eq!(ps.index_of(&ps.point(z)).unwrap(), z);
            assert_eq!(ps.add(z, ps.neg(z)), 0);
        }
        assert_eq!(ps.weight(), 1.0 / 6.0);
    }
}
