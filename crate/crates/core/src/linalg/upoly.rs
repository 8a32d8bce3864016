//! Polynomials in one variable U over F2.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A polynomial over F2 in U, stored as packed coefficient bits (bit k of the
/// word sequence is the coefficient of U^k). The word vector never has a
/// trailing zero word, so the zero polynomial is the empty vector.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct UPoly {
    bits: Vec<u64>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { bits: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: u32) -> Self {
        let k = k as usize;
        let mut bits = vec![0; k / 64 + 1];
        bits[k / 64] = 1 << (k % 64);
        UPoly { bits }
    }

    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        let mut p = UPoly::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            if c & 1 == 1 {
                p.flip(k);
            }
        }
        p
    }

    /// Coefficient list, lowest degree first.
    pub fn coeffs(&self) -> Vec<u8> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d as usize).map(|k| self.coeff(k) as u8).collect(),
        }
    }

    fn trim(&mut self) {
        while self.bits.last() == Some(&0) {
            self.bits.pop();
        }
    }

    fn flip(&mut self, k: usize) {
        if self.bits.len() <= k / 64 {
            self.bits.resize(k / 64 + 1, 0);
        }
        self.bits[k / 64] ^= 1 << (k % 64);
        self.trim();
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.bits
            .get(k / 64)
            .is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.bits.len() == 1 && self.bits[0] == 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        let last = *self.bits.last()?;
        Some(((self.bits.len() - 1) * 64 + 63 - last.leading_zeros() as usize) as u32)
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| (i * 64 + w.trailing_zeros() as usize) as u32)
    }

    /// `Some(k)` when this is exactly U^k.
    pub fn as_monomial(&self) -> Option<u32> {
        let d = self.degree()?;
        (self.valuation() == Some(d)).then_some(d)
    }

    pub fn shl(&self, k: u32) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let (wshift, bshift) = ((k / 64) as usize, k % 64);
        let mut bits = vec![0u64; self.bits.len() + wshift + 1];
        for (i, &w) in self.bits.iter().enumerate() {
            bits[i + wshift] ^= w << bshift;
            if bshift > 0 {
                bits[i + wshift + 1] ^= w >> (64 - bshift);
            }
        }
        let mut p = UPoly { bits };
        p.trim();
        p
    }

    /// Keeps only the terms of degree below `cap`.
    pub fn truncate(&self, cap: u32) -> UPoly {
        let mut p = self.clone();
        let cap = cap as usize;
        let words = cap.div_ceil(64);
        p.bits.truncate(words);
        if cap % 64 != 0 {
            if let Some(last) = p.bits.get_mut(cap / 64) {
                *last &= (1u64 << (cap % 64)) - 1;
            }
        }
        p.trim();
        p
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut q = UPoly::zero();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let s = rd - dd;
            q.flip(s as usize);
            r += &d.shl(s);
        }
        (q, r)
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(mut self, rhs: UPoly) -> UPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&UPoly> for UPoly {
    fn add_assign(&mut self, rhs: &UPoly) {
        if self.bits.len() < rhs.bits.len() {
            self.bits.resize(rhs.bits.len(), 0);
        }
        for (a, b) in self.bits.iter_mut().zip(&rhs.bits) {
            *a ^= b;
        }
        self.trim();
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        let mut out = UPoly::zero();
        let Some(d) = self.degree() else {
            return out;
        };
        for k in 0..=d {
            if self.coeff(k as usize) {
                out += &rhs.shl(k);
            }
        }
        out
    }
}

impl Mul for UPoly {
    type Output = UPoly;
    fn mul(self, rhs: UPoly) -> UPoly {
        &self * &rhs
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return f.write_str("0");
        };
        let mut parts = Vec::new();
        for k in 0..=d {
            if self.coeff(k as usize) {
                parts.push(match k {
                    0 => "1".to_string(),
                    1 => "U".to_string(),
                    _ => format!("U^{k}"),
                });
            }
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}

impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coeffs = Vec::<u8>::deserialize(d)?;
        if coeffs.iter().any(|&c| c > 1) {
            return Err(serde::de::Error::custom("coefficients must be 0 or 1"));
        }
        Ok(UPoly::from_coeffs(&coeffs))
    }
}
