//! Finite abelian groups `Z_{n1} × … × Z_{nk}` and their character pairing.
//!
//! Elements are enumerated in mixed-radix order with the last coordinate
//! varying fastest. The dual group is identified with the group itself through
//! `⟨x, ξ⟩ = exp(2πi Σ_j x_j ξ_j / n_j)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QhaError, Result};

/// An element of a [`FiniteAbelianGroup`], stored as reduced residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    coords: Vec<usize>,
}

impl GroupElement {
    pub fn coords(&self) -> &[usize] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, c) in self.coords.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupJson {
    orders: Vec<usize>,
}

/// Product of cyclic groups with a fixed canonical enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FiniteAbelianGroup {
    orders: Vec<usize>,
    size: usize,
    // exponent scale L / n_j for each factor, L = lcm of the orders
    scale: Vec<usize>,
    lcm: usize,
}

impl TryFrom<GroupJson> for FiniteAbelianGroup {
    type Error = QhaError;

    fn try_from(value: GroupJson) -> Result<Self> {
        FiniteAbelianGroup::new(&value.orders)
    }
}

impl From<FiniteAbelianGroup> for GroupJson {
    fn from(value: FiniteAbelianGroup) -> Self {
        GroupJson {
            orders: value.orders,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FiniteAbelianGroup {
    /// Builds `Z_{orders[0]} × … × Z_{orders[k-1]}`.
    pub fn new(orders: &[usize]) -> Result<Self> {
        if orders.is_empty() {
            return Err(QhaError::InvalidGroup("no cyclic factors given".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&n| n < 2) {
            return Err(QhaError::InvalidGroup(format!(
                "cyclic order {bad} is smaller than 2"
            )));
        }
        let size = orders
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| QhaError::InvalidGroup("group order overflows".into()))?;
        let lcm = orders.iter().fold(1usize, |acc, &n| acc / gcd(acc, n) * n);
        let scale = orders.iter().map(|&n| lcm / n).collect();
        Ok(Self {
            orders: orders.to_vec(),
            size,
            scale,
            lcm,
        })
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Checks arity and ranges, returning the element.
    pub fn element(&self, coords: &[usize]) -> Result<GroupElement> {
        self.check_arity(coords.len())?;
        for (&c, &n) in coords.iter().zip(&self.orders) {
            if c >= n {
                return Err(QhaError::CoordinateOutOfRange { value: c, order: n });
            }
        }
        Ok(GroupElement {
            coords: coords.to_vec(),
        })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.rank() {
            return Err(QhaError::ArityMismatch {
                expected: self.rank(),
                got,
            });
        }
        Ok(())
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        self.check_arity(a.coords.len())?;
        for (&c, &n) in a.coords.iter().zip(&self.orders) {
            if c >= n {
                return Err(QhaError::CoordinateOutOfRange { value: c, order: n });
            }
        }
        Ok(())
    }

    /// Position of `e` in the canonical enumeration.
    pub fn index_of(&self, e: &GroupElement) -> Result<usize> {
        self.check(e)?;
        Ok(self.encode(&e.coords))
    }

    /// Element at position `index` of the canonical enumeration.
    pub fn element_at(&self, index: usize) -> Result<GroupElement> {
        if index >= self.size {
            return Err(QhaError::CoordinateOutOfRange {
                value: index,
                order: self.size,
            });
        }
        Ok(GroupElement {
            coords: self.decode(index),
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size).map(|i| GroupElement {
            coords: self.decode(i),
        })
    }

    fn encode(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&c, &n)| acc * n + c)
    }

    fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut coords = vec![0; self.rank()];
        for j in (0..self.rank()).rev() {
            coords[j] = index % self.orders[j];
            index /= self.orders[j];
        }
        coords
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.orders)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        })
    }

    /// The pairing `⟨x, ξ⟩ = exp(2πi Σ_j x_j ξ_j / n_j)`.
    pub fn character(&self, x: &GroupElement, xi: &GroupElement) -> Result<Complex64> {
        self.check(x)?;
        self.check(xi)?;
        Ok(self.root(self.pairing_exponent(&x.coords, &xi.coords)))
    }

    pub fn is_two_regular(&self) -> bool {
        self.orders.iter().all(|n| n % 2 == 1)
    }

    /// The unique `h` with `h + h = x`; only defined on 2-regular groups.
    pub fn halve(&self, x: &GroupElement) -> Result<GroupElement> {
        if !self.is_two_regular() {
            return Err(QhaError::NotTwoRegular);
        }
        self.check(x)?;
        Ok(GroupElement {
            coords: x
                .coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| ((n + 1) / 2 * c) % n)
                .collect(),
        })
    }

    // Index-level arithmetic used by the hot loops elsewhere in the crate.
    // Callers guarantee indices are in range.

    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for &n in self.orders.iter().rev() {
            out += ((a % n + b % n) % n) * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub(crate) fn neg_idx(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for &n in self.orders.iter().rev() {
            out += ((n - a % n) % n) * place;
            place *= n;
            a /= n;
        }
        out
    }

    pub(crate) fn halve_idx(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for &n in self.orders.iter().rev() {
            out += (((n + 1) / 2 * (a % n)) % n) * place;
            place *= n;
            a /= n;
        }
        out
    }

    pub(crate) fn character_idx(&self, x: usize, xi: usize) -> Complex64 {
        let (mut x, mut xi) = (x, xi);
        let mut k = 0usize;
        for (j, &n) in self.orders.iter().enumerate().rev() {
            k = (k + (x % n) * (xi % n) % n * self.scale[j]) % self.lcm;
            x /= n;
            xi /= n;
        }
        self.root(k)
    }

    fn pairing_exponent(&self, x: &[usize], xi: &[usize]) -> usize {
        x.iter()
            .zip(xi)
            .enumerate()
            .fold(0, |k, (j, (&a, &b))| {
                (k + (a * b % self.orders[j]) * self.scale[j]) % self.lcm
            })
    }

    fn root(&self, k: usize) -> Complex64 {
        if k == 0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / self.lcm as f64)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = QhaError;

    /// Parses `"Z2xZ3"` style specs (case-insensitive, `x` separated).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if lower.is_empty() {
            return Err(QhaError::Parse("empty group spec".into()));
        }
        let mut orders = Vec::new();
        for part in lower.split('x') {
            let digits = part
                .strip_prefix('z')
                .ok_or_else(|| QhaError::Parse(format!("malformed factor {part:?} in {s:?}")))?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(QhaError::Parse(format!(
                    "malformed factor {part:?} in {s:?}"
                )));
            }
            let n: usize = digits
                .parse()
                .map_err(|_| QhaError::Parse(format!("order out of range in {s:?}")))?;
            orders.push(n);
        }
        FiniteAbelianGroup::new(&orders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn make_group_sizes() {
        assert_eq!(FiniteAbelianGroup::new(&[2]).unwrap().size(), 2);
        assert_eq!(FiniteAbelianGroup::new(&[2, 3]).unwrap().size(), 6);
        assert_eq!(FiniteAbelianGroup::new(&[4, 4]).unwrap().size(), 16);
    }

    #[test]
    fn make_group_rejects_bad_orders() {
        assert!(FiniteAbelianGroup::new(&[]).is_err());
        assert!(FiniteAbelianGroup::new(&[3, 1]).is_err());
        assert!(FiniteAbelianGroup::new(&[0]).is_err());
    }

    #[test]
    fn add_and_neg() {
        let z2 = FiniteAbelianGroup::new(&[2]).unwrap();
        let one = z2.element(&[1]).unwrap();
        assert_eq!(z2.add(&one, &one).unwrap(), z2.zero());

        let z3 = FiniteAbelianGroup::new(&[3]).unwrap();
        assert_eq!(z3.neg(&z3.element(&[1]).unwrap()).unwrap().coords(), &[2]);

        let z23 = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let a = z23.element(&[1, 2]).unwrap();
        assert_eq!(z23.add(&a, &a).unwrap().coords(), &[0, 1]);
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let z23 = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let z2 = FiniteAbelianGroup::new(&[2]).unwrap();
        let a = z2.element(&[1]).unwrap();
        assert!(matches!(
            z23.add(&a, &a),
            Err(QhaError::ArityMismatch { expected: 2, got: 1 })
        ));
        assert!(z23.element(&[1, 3]).is_err());
    }

    #[test]
    fn character_values() {
        let z2 = FiniteAbelianGroup::new(&[2]).unwrap();
        let one = z2.element(&[1]).unwrap();
        assert!((z2.character(&one, &one).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);

        let z4 = FiniteAbelianGroup::new(&[4]).unwrap();
        let one = z4.element(&[1]).unwrap();
        assert!((z4.character(&one, &one).unwrap() - c(0.0, 1.0)).norm() < 1e-15);

        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        for xi in g.elements() {
            assert_eq!(g.character(&g.zero(), &xi).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn halving() {
        let z3 = FiniteAbelianGroup::new(&[3]).unwrap();
        assert_eq!(z3.halve(&z3.element(&[1]).unwrap()).unwrap().coords(), &[2]);
        let z5 = FiniteAbelianGroup::new(&[5]).unwrap();
        assert_eq!(z5.halve(&z5.element(&[4]).unwrap()).unwrap().coords(), &[2]);
        let z2 = FiniteAbelianGroup::new(&[2]).unwrap();
        assert!(!z2.is_two_regular());
        assert_eq!(
            z2.halve(&z2.element(&[1]).unwrap()),
            Err(QhaError::NotTwoRegular)
        );
    }

    #[test]
    fn character_orthogonality_exhaustive() {
        for orders in [&[2][..], &[3], &[4], &[2, 3], &[2, 2], &[6, 6], &[3, 3, 2]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            for x in g.elements() {
                let total: Complex64 = g.elements().map(|xi| g.character(&x, &xi).unwrap()).sum();
                let expected = if x == g.zero() { g.size() as f64 } else { 0.0 };
                assert!((total - c(expected, 0.0)).norm() < 1e-10, "{g} at {x}");
            }
        }
    }

    #[test]
    fn parse_group_specs() {
        assert_eq!("Z2xZ3".parse::<FiniteAbelianGroup>().unwrap().orders(), &[2, 3]);
        assert_eq!("z4XZ4".parse::<FiniteAbelianGroup>().unwrap().size(), 16);
        assert!("Z2x".parse::<FiniteAbelianGroup>().is_err());
        assert!("Z2x Z3".parse::<FiniteAbelianGroup>().is_err());
        assert!("Z1".parse::<FiniteAbelianGroup>().is_err());
        assert!("".parse::<FiniteAbelianGroup>().is_err());
    }

    #[test]
    fn json_form() {
        let g: FiniteAbelianGroup = serde_json::from_str(r#"{"orders":[2,3]}"#).unwrap();
        assert_eq!(g.size(), 6);
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"orders":[2,3]}"#);
        assert!(serde_json::from_str::<FiniteAbelianGroup>(r#"{"orders":[1]}"#).is_err());
    }

    fn small_group() -> impl Strategy<Value = FiniteAbelianGroup> {
        prop::collection::vec(2usize..7, 1..4)
            .prop_map(|orders| FiniteAbelianGroup::new(&orders).unwrap())
    }

    proptest! {
        #[test]
        fn enumeration_round_trip(g in small_group(), seed in 0usize..1000) {
            let i = seed % g.size();
            let e = g.element_at(i).unwrap();
            prop_assert_eq!(g.index_of(&e).unwrap(), i);
        }

        #[test]
        fn index_arithmetic_matches_elements(g in small_group(), a in 0usize..1000, b in 0usize..1000) {
            let (a, b) = (a % g.size(), b % g.size());
            let (ea, eb) = (g.element_at(a).unwrap(), g.element_at(b).unwrap());
            prop_assert_eq!(g.add_idx(a, b), g.index_of(&g.add(&ea, &eb).unwrap()).unwrap());
            prop_assert_eq!(g.neg_idx(a), g.index_of(&g.neg(&ea).unwrap()).unwrap());
            prop_assert_eq!(g.add_idx(a, g.neg_idx(a)), 0);
            let chi = g.character(&ea, &eb).unwrap();
            prop_assert!((g.character_idx(a, b) - chi).norm() < 1e-12);
            prop_assert!((chi.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn character_is_bicharacter(g in small_group(), a in 0usize..1000, b in 0usize..1000, k in 0usize..1000) {
            let (a, b, k) = (a % g.size(), b % g.size(), k % g.size());
            let lhs = g.character_idx(g.add_idx(a, b), k);
            let rhs = g.character_idx(a, k) * g.character_idx(b, k);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
