//! The torus algebra: eight basis elements over F2, idempotent bookkeeping,
//! multiplication and Reidemeister words.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two idempotents of the torus algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Idem {
    #[serde(rename = "i0")]
    I0,
    #[serde(rename = "i1")]
    I1,
}

impl Idem {
    /// The basis element acting as the unit on this idempotent.
    pub fn unit(self) -> Basis {
        match self {
            Idem::I0 => Basis::I0,
            Idem::I1 => Basis::I1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Idem::I0 => "i0",
            Idem::I1 => "i1",
        }
    }

    pub fn parse(s: &str) -> Option<Idem> {
        match s {
            "i0" => Some(Idem::I0),
            "i1" => Some(Idem::I1),
            _ => None,
        }
    }
}

impl fmt::Display for Idem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A basis element of the torus algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    I0,
    I1,
    R1,
    R2,
    R3,
    R12,
    R23,
    R123,
}

impl Basis {
    pub const ALL: [Basis; 8] = [
        Basis::I0,
        Basis::I1,
        Basis::R1,
        Basis::R2,
        Basis::R3,
        Basis::R12,
        Basis::R23,
        Basis::R123,
    ];

    /// The six Reidemeister (non-idempotent) elements.
    pub const RHOS: [Basis; 6] = [
        Basis::R1,
        Basis::R2,
        Basis::R3,
        Basis::R12,
        Basis::R23,
        Basis::R123,
    ];

    fn index(self) -> u8 {
        self as u8
    }

    fn from_index(i: u8) -> Basis {
        Basis::ALL[i as usize]
    }

    /// (left idempotent, right idempotent).
    pub fn profile(self) -> (Idem, Idem) {
        use Idem::*;
        match self {
            Basis::I0 => (I0, I0),
            Basis::I1 => (I1, I1),
            Basis::R1 => (I0, I1),
            Basis::R2 => (I1, I0),
            Basis::R3 => (I0, I1),
            Basis::R12 => (I0, I0),
            Basis::R23 => (I1, I1),
            Basis::R123 => (I0, I1),
        }
    }

    pub fn left(self) -> Idem {
        self.profile().0
    }

    pub fn right(self) -> Idem {
        self.profile().1
    }

    pub fn is_idempotent(self) -> bool {
        matches!(self, Basis::I0 | Basis::I1)
    }

    /// Product of two basis elements; `None` is zero.
    pub fn mul(self, other: Basis) -> Option<Basis> {
        use Basis::*;
        if self.is_idempotent() {
            return (self.right() == other.left()).then_some(other);
        }
        if other.is_idempotent() {
            return (self.right() == other.left()).then_some(self);
        }
        match (self, other) {
            (R1, R2) => Some(R12),
            (R2, R3) => Some(R23),
            (R1, R23) => Some(R123),
            (R12, R3) => Some(R123),
            _ => None,
        }
    }

    /// Textual label used in every file format.
    pub fn label(self) -> &'static str {
        match self {
            Basis::I0 => "i0",
            Basis::I1 => "i1",
            Basis::R1 => "1",
            Basis::R2 => "2",
            Basis::R3 => "3",
            Basis::R12 => "12",
            Basis::R23 => "23",
            Basis::R123 => "123",
        }
    }

    /// Parses a label. `"1"` is always ρ₁ here; callers that accept the unit
    /// spelled as `"1"` resolve it themselves.
    pub fn parse(s: &str) -> Option<Basis> {
        Some(match s {
            "i0" => Basis::I0,
            "i1" => Basis::I1,
            "1" => Basis::R1,
            "2" => Basis::R2,
            "3" => Basis::R3,
            "12" => Basis::R12,
            "23" => Basis::R23,
            "123" => Basis::R123,
            _ => return None,
        })
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_idempotent() {
            f.write_str(self.label())
        } else {
            write!(f, "ρ{}", self.label())
        }
    }
}

/// An F2-linear combination of basis elements, one bit per basis element.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement(u8);

impl AlgebraElement {
    pub const ZERO: AlgebraElement = AlgebraElement(0);

    pub fn from_bits(bits: u8) -> Self {
        AlgebraElement(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The two-sided unit ι₀ + ι₁.
    pub fn one() -> Self {
        AlgebraElement::from(Basis::I0) + AlgebraElement::from(Basis::I1)
    }

    pub fn contains(self, b: Basis) -> bool {
        self.0 & (1 << b.index()) != 0
    }

    pub fn terms(self) -> impl Iterator<Item = Basis> {
        (0..8u8)
            .filter(move |i| self.0 & (1 << i) != 0)
            .map(Basis::from_index)
    }

    /// The basis element if this is a single basis element.
    pub fn as_basis(self) -> Option<Basis> {
        (self.0.count_ones() == 1).then(|| Basis::from_index(self.0.trailing_zeros() as u8))
    }

    pub fn multiply(self, other: AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::ZERO;
        for a in self.terms() {
            for b in other.terms() {
                if let Some(c) = a.mul(b) {
                    out += c.into();
                }
            }
        }
        out
    }
}

impl From<Basis> for AlgebraElement {
    fn from(b: Basis) -> Self {
        AlgebraElement(1 << b.index())
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> Self {
        AlgebraElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for AlgebraElement {
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> Self {
        self.multiply(rhs)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|b| b.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement {
    a.multiply(b)
}

/// Idempotent profile of a single basis element.
pub fn idempotent_profile(a: AlgebraElement) -> Result<(Idem, Idem)> {
    a.as_basis()
        .map(Basis::profile)
        .ok_or_else(|| Error::Invalid(format!("{a} is not a single basis element")))
}

/// The ordered algebra inputs of one A∞ operation (not a product).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RhoWord(pub Vec<Basis>);

impl RhoWord {
    pub fn new(letters: Vec<Basis>) -> Self {
        RhoWord(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Right idempotent of each entry matches the left idempotent of the next.
    pub fn is_composable(&self) -> bool {
        self.0.windows(2).all(|w| w[0].right() == w[1].left())
    }

    /// (left idempotent of the first entry, right idempotent of the last).
    pub fn endpoints(&self) -> Option<(Idem, Idem)> {
        Some((self.0.first()?.left(), self.0.last()?.right()))
    }

    pub fn parse(labels: &[String]) -> Result<Self> {
        labels
            .iter()
            .map(|s| match Basis::parse(s) {
                Some(b) if !b.is_idempotent() => Ok(b),
                Some(_) => Err(Error::Schema(format!(
                    "idempotent '{s}' cannot appear in an operation word"
                ))),
                None => Err(Error::Schema(format!("unknown algebra label '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(RhoWord)
    }

    pub fn labels(&self) -> Vec<String> {
        self.0.iter().map(|b| b.label().to_string()).collect()
    }
}

impl fmt::Display for RhoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|b| b.label()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(b: Basis) -> AlgebraElement {
        b.into()
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(el(Basis::R1) * el(Basis::R2), el(Basis::R12));
        assert_eq!(el(Basis::I0) * el(Basis::R3), el(Basis::R3));
        assert!((el(Basis::R2) * el(Basis::R1)).is_zero());
        assert_eq!(el(Basis::R12) * el(Basis::R3), el(Basis::R123));
        assert_eq!(el(Basis::R1) * el(Basis::R23), el(Basis::R123));
        assert!((el(Basis::R3) * el(Basis::R2)).is_zero());
        assert!((el(Basis::I1) * el(Basis::R3)).is_zero());
    }

    #[test]
    fn profiles() {
        assert_eq!(idempotent_profile(el(Basis::R1)).unwrap(), (Idem::I0, Idem::I1));
        assert_eq!(idempotent_profile(el(Basis::I0)).unwrap(), (Idem::I0, Idem::I0));
        assert_eq!(idempotent_profile(el(Basis::R2)).unwrap(), (Idem::I1, Idem::I0));
        assert!(idempotent_profile(el(Basis::R1) + el(Basis::R2)).is_err());
        assert!(idempotent_profile(AlgebraElement::ZERO).is_err());
    }

    #[test]
    fn associative_on_all_basis_triples() {
        for a in Basis::ALL {
            for b in Basis::ALL {
                for c in Basis::ALL {
                    let (a, b, c) = (el(a), el(b), el(c));
                    assert_eq!((a * b) * c, a * (b * c), "{a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn unit_and_idempotent_coherence() {
        let one = AlgebraElement::one();
        for a in Basis::ALL {
            assert_eq!(one * el(a), el(a));
            assert_eq!(el(a) * one, el(a));
            for b in Basis::ALL {
                if !(el(a) * el(b)).is_zero() {
                    assert_eq!(a.right(), b.left());
                }
            }
        }
    }

    #[test]
    fn word_composability() {
        let w = RhoWord(vec![Basis::R3, Basis::R2, Basis::R1]);
        assert!(w.is_composable());
        assert!((el(Basis::R3) * el(Basis::R2)).is_zero());
        assert_eq!(w.endpoints(), Some((Idem::I0, Idem::I1)));
        assert!(!RhoWord(vec![Basis::R1, Basis::R1]).is_composable());
        // composability agrees with chaining the profiles
        for a in Basis::RHOS {
            for b in Basis::RHOS {
                let w = RhoWord(vec![a, b]);
                assert_eq!(w.is_composable(), a.right() == b.left());
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        for b in Basis::ALL {
            assert_eq!(Basis::parse(b.label()), Some(b));
        }
        assert!(RhoWord::parse(&["i0".to_string()]).is_err());
    }
}
