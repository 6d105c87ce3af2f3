//! JSON file formats and Wigner CSV export.
//!
//! Complex scalars are written as `[re, im]`; a bare number is read as a
//! real scalar.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::convolution::PhaseFunction;
use crate::correspondence::CorrespondenceRule;
use crate::error::{QhaError, Result};
use crate::group::FiniteAbelianGroup;
use crate::linalg::Operator;
use crate::phase_space::{Multiplier, MultiplierKind, PhaseSpace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Scalar> for Complex64 {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Real(re) => Complex64::new(re, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for Scalar {
    fn from(c: Complex64) -> Self {
        Scalar::Complex([c.re, c.im])
    }
}

fn to_complex(v: &[Scalar]) -> Vec<Complex64> {
    v.iter().map(|&s| s.into()).collect()
}

fn to_scalars(v: &[Complex64]) -> Vec<Scalar> {
    v.iter().map(|&c| c.into()).collect()
}

/// `{"kind": …, "group": {"orders": […]}, "base": …, "a": […], "table": […]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplierSpec {
    pub kind: MultiplierKind,
    pub group: FiniteAbelianGroup,
    /// Base of a modified multiplier; canonical when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<MultiplierSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Scalar>>,
    /// Row-major `|Ξ|×|Ξ|` table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Scalar>>,
}

impl MultiplierSpec {
    pub fn build(&self) -> Result<Multiplier> {
        let g = &self.group;
        match self.kind {
            MultiplierKind::Canonical => Ok(Multiplier::canonical(g)),
            MultiplierKind::Weyl => Multiplier::weyl(g),
            MultiplierKind::Modified => {
                let base = match &self.base {
                    Some(b) => b.build()?,
                    None => Multiplier::canonical(g),
                };
                if base.group() != g {
                    return Err(QhaError::Parse("base multiplier is over a different group".into()));
                }
                let a = self
                    .a
                    .as_ref()
                    .ok_or_else(|| QhaError::Parse("modified multiplier needs \"a\"".into()))?;
                Multiplier::modified(&base, to_complex(a))
            }
            MultiplierKind::Table => {
                let t = self
                    .table
                    .as_ref()
                    .ok_or_else(|| QhaError::Parse("table multiplier needs \"table\"".into()))?;
                Multiplier::from_table(g, to_complex(t))
            }
        }
    }

    pub fn from_multiplier(m: &Multiplier) -> Self {
        let mut spec = Self {
            kind: m.kind(),
            group: m.group().clone(),
            base: None,
            a: None,
            table: None,
        };
        match m.kind() {
            MultiplierKind::Modified => {
                spec.base = m.base().map(|b| Box::new(Self::from_multiplier(b)));
                spec.a = m.cochain().map(to_scalars);
            }
            MultiplierKind::Table => spec.table = Some(to_scalars(&m.to_table())),
            _ => {}
        }
        spec
    }
}

/// `{"dim": n, "entries": [...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub dim: usize,
    pub entries: Vec<Scalar>,
}

impl OperatorSpec {
    pub fn build(&self) -> Result<Operator> {
        if self.dim == 0 {
            return Err(QhaError::Parse("operator dimension must be positive".into()));
        }
        Operator::from_row_major(self.dim, &to_complex(&self.entries))
    }

    pub fn from_operator(a: &Operator) -> Self {
        Self {
            dim: a.dim(),
            entries: to_scalars(&a.row_major()),
        }
    }
}

/// `{"values": [...]}` over `Ξ` in canonical order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub values: Vec<Scalar>,
}

impl FunctionSpec {
    pub fn build(&self) -> Result<PhaseFunction> {
        if self.values.is_empty() {
            return Err(QhaError::Parse("function has no values".into()));
        }
        PhaseFunction::from_values(to_complex(&self.values))
    }

    pub fn from_function(f: &PhaseFunction) -> Self {
        Self {
            values: to_scalars(f.values()),
        }
    }
}

/// `{"values": [...]}` over `G`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorSpec {
    pub values: Vec<Scalar>,
}

impl VectorSpec {
    pub fn build(&self) -> Result<DVector<Complex64>> {
        if self.values.is_empty() {
            return Err(QhaError::Parse("vector has no entries".into()));
        }
        Ok(DVector::from_vec(to_complex(&self.values)))
    }
}

/// `{"operators": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub operators: Vec<OperatorSpec>,
}

impl FamilySpec {
    pub fn build(&self) -> Result<Vec<Operator>> {
        self.operators.iter().map(OperatorSpec::build).collect()
    }
}

/// `{"b1": operator, "b2": operator}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub b1: OperatorSpec,
    pub b2: OperatorSpec,
}

impl RuleSpec {
    pub fn build(&self, tol: f64) -> Result<CorrespondenceRule> {
        CorrespondenceRule::new(self.b1.build()?, self.b2.build()?, tol)
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    if text.trim().is_empty() {
        return Err(QhaError::Parse("empty input".into()));
    }
    serde_json::from_str(text).map_err(|e| QhaError::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QhaError::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| match e {
        QhaError::Parse(msg) => QhaError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Pretty JSON with a trailing newline; field order follows declaration order.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// One row per point of `Ξ`: position coordinates, momentum coordinates, re, im.
/// `warning` is emitted as a comment line after the header.
pub fn wigner_csv(ps: &PhaseSpace, values: &PhaseFunction, warning: Option<&str>) -> String {
    let g = ps.group();
    let k = g.rank();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# group={g} multiplier={} weight={} (sum_z weight*W(z) = tr A)",
        ps.multiplier().kind(),
        ps.weight()
    );
    if let Some(w) = warning {
        let _ = writeln!(out, "# warning: {w}");
    }
    let cols: Vec<String> = (0..k)
        .map(|i| format!("x{i}"))
        .chain((0..k).map(|i| format!("xi{i}")))
        .chain(["re".to_string(), "im".to_string()])
        .collect();
    let _ = writeln!(out, "{}", cols.join(","));
    for (z, v) in values.values().iter().enumerate() {
        let pt = ps.point(z);
        let coords: Vec<String> = pt
            .pos
            .coords()
            .iter()
            .chain(pt.mom.coords())
            .map(|c| c.to_string())
            .collect();
        let _ = writeln!(out, "{},{:e},{:e}", coords.join(","), v.re, v.im);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_spec_round_trip() {
        let g = FiniteAbelianGroup::new(&[3]).unwrap();
        for m in [
            Multiplier::canonical(&g),
            Multiplier::weyl(&g).unwrap(),
            Multiplier::modified(&Multiplier::canonical(&g), Multiplier::weyl_phase(&g).unwrap()).unwrap(),
            Multiplier::from_table(&g, Multiplier::weyl(&g).unwrap().to_table()).unwrap(),
        ] {
            let text = to_json(&MultiplierSpec::from_multiplier(&m));
            let back: MultiplierSpec = parse_json(&text).unwrap();
            assert_eq!(back.build().unwrap(), m);
        }
        let spec: MultiplierSpec = parse_json(r#"{"kind":"weyl","group":{"orders":[3]}}"#).unwrap();
        assert_eq!(spec.build().unwrap().kind(), MultiplierKind::Weyl);
        let spec: MultiplierSpec = parse_json(r#"{"kind":"weyl","group":{"orders":[2]}}"#).unwrap();
        assert_eq!(spec.build().unwrap_err(), QhaError::NotTwoRegular);
        assert!(parse_json::<MultiplierSpec>(r#"{"kind":"modified","group":{"orders":[2]}}"#)
            .unwrap()
            .build()
            .is_err());
        assert!(parse_json::<MultiplierSpec>(r#"{"kind":"bogus","group":{"orders":[2]}}"#).is_err());
    }

    #[test]
    fn operator_and_function_specs() {
        let op: OperatorSpec = parse_json(r#"{"dim":2,"entries":[1,[0,1],[0,-1],2]}"#).unwrap();
        let a = op.build().unwrap();
        assert_eq!(a.get(0, 1), Complex64::new(0.0, 1.0));
        assert!(a.is_hermitian(0.0));
        let back: OperatorSpec = parse_json(&to_json(&OperatorSpec::from_operator(&a))).unwrap();
        assert_eq!(back.build().unwrap(), a);
        assert!(parse_json::<OperatorSpec>(r#"{"dim":2,"entries":[1,2,3]}"#).unwrap().build().is_err());
        assert!(parse_json::<OperatorSpec>(r#"{"dim":0,"entries":[]}"#).unwrap().build().is_err());
        assert!(matches!(parse_json::<OperatorSpec>("  \n"), Err(QhaError::Parse(_))));

        let f: FunctionSpec = parse_json(r#"{"values":[1,0,0,0]}"#).unwrap();
        assert_eq!(f.build().unwrap().dim(), 2);
        assert!(parse_json::<FunctionSpec>(r#"{"values":[1,0,0]}"#).unwrap().build().is_err());
    }

    #[test]
    fn wigner_csv_layout() {
        let g = FiniteAbelianGroup::new(&[2]).unwrap();
        let ps = PhaseSpace::canonical(&g).unwrap();
        let f = PhaseFunction::constant(2, Complex64::new(0.5, 0.0));
        let csv = wigner_csv(&ps, &f, None);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# group=Z2 multiplier=canonical weight=0.5"));
        assert_eq!(lines[1], "x0,xi0,re,im");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[3], "0,1,5e-1,0e0");
    }
}
