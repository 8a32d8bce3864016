//! Reference implementations used to cross-check the engine. Nothing here
//! calls into the library's linear algebra.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, Zero};
use satfloer::linalg::{UMatrix, UPoly};

/// F2[U] polynomial as a bit mask, bit k = coefficient of U^k.
pub type P = BigUint;

pub fn zero() -> P {
    P::zero()
}

pub fn mono(k: u32) -> P {
    P::one() << k
}

pub fn is_one_at(p: &P, k: u64) -> bool {
    p.bit(k)
}

pub fn ones(p: &P) -> impl Iterator<Item = u64> + '_ {
    (0..p.bits()).filter(move |&k| p.bit(k))
}

pub fn pmul(a: &P, b: &P) -> P {
    let mut r = zero();
    for k in ones(b) {
        r ^= a << k;
    }
    r
}

pub fn pdeg(a: &P) -> Option<u32> {
    (!a.is_zero()).then(|| a.bits() as u32 - 1)
}

/// Lowest exponent with a nonzero coefficient.
pub fn pval(a: &P) -> Option<u32> {
    a.trailing_zeros().map(|v| v as u32)
}

/// Quotient and remainder.
pub fn pdivrem(a: &P, b: &P) -> (P, P) {
    let db = pdeg(b).expect("division by zero");
    let (mut q, mut r) = (zero(), a.clone());
    while let Some(dr) = pdeg(&r) {
        if dr < db {
            break;
        }
        q ^= mono(dr - db);
        r ^= b << (dr - db);
    }
    (q, r)
}

pub fn from_upoly(p: &UPoly) -> P {
    p.coeffs()
        .iter()
        .enumerate()
        .fold(zero(), |acc, (k, &c)| if c != 0 { acc | mono(k as u32) } else { acc })
}

pub fn to_upoly(p: &P) -> UPoly {
    let c: Vec<u8> = (0..p.bits()).map(|k| p.bit(k) as u8).collect();
    UPoly::from_coeffs(&c)
}

pub type PMat = Vec<Vec<P>>;

pub fn from_umatrix(m: &UMatrix) -> PMat {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| from_upoly(m.get(i, j))).collect())
        .collect()
}

pub fn to_umatrix(m: &PMat) -> UMatrix {
    UMatrix::from_rows(m.iter().map(|r| r.iter().map(to_upoly).collect()).collect())
}

pub fn matmul(a: &PMat, b: &PMat) -> PMat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut c = vec![vec![zero(); m]; n];
    for i in 0..n {
        assert_eq!(a[i].len(), k);
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                c[i][j] ^= pmul(&a[i][t], &b[t][j]);
            }
        }
    }
    c
}

pub fn matvec(a: &PMat, v: &[P]) -> Vec<P> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(zero(), |acc, (x, y)| acc ^ pmul(x, y)))
        .collect()
}

pub fn identity(n: usize) -> PMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { P::one() } else { zero() }).collect()).collect()
}

pub fn is_zero(m: &PMat) -> bool {
    m.iter().all(|r| r.iter().all(Zero::is_zero))
}

/// Dense F2 row echelon over bit-set vectors.
pub struct F2Span {
    len: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl F2Span {
    pub fn new(len: usize) -> Self {
        F2Span { len, rows: Vec::new() }
    }

    pub fn words(&self) -> usize {
        self.len.div_ceil(64)
    }

    fn lead(v: &[u64]) -> Option<usize> {
        v.iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn reduce(&self, v: &mut [u64]) {
        for (p, r) in &self.rows {
            if v[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(r) {
                    *a ^= b;
                }
            }
        }
    }

    /// Inserts `v`; returns whether the span grew. Rows stay fully reduced
    /// against each other's leads.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        let Some(p) = Self::lead(&v) else { return false };
        for (_, r) in self.rows.iter_mut() {
            if r[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in r.iter_mut().zip(&v) {
                    *a ^= b;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

pub fn bits(len: usize, ones: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut v = vec![0u64; len.div_ceil(64)];
    for i in ones {
        v[i / 64] ^= 1 << (i % 64);
    }
    v
}

/// F2 rank of a 0/1 matrix given as rows.
pub fn f2_rank(rows: &[Vec<bool>]) -> usize {
    let len = rows.first().map_or(0, Vec::len);
    let mut s = F2Span::new(len);
    for r in rows {
        s.insert(bits(len, r.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)));
    }
    s.dim()
}

/// Columns of an F2 matrix (entries evaluated at U = 0).
pub fn f2_columns(d: &PMat) -> Vec<Vec<bool>> {
    let n = d.len();
    let m = d.first().map_or(0, Vec::len);
    (0..m).map(|j| (0..n).map(|i| d[i][j].bit(0)).collect()).collect()
}

/// dim H of a square F2 differential.
pub fn f2_homology_rank(d: &PMat) -> usize {
    let n = d.len();
    n - 2 * f2_rank(&f2_columns(d))
}

pub fn f2_in_image(d: &PMat, z: &[bool]) -> bool {
    let cols = f2_columns(d);
    let n = z.len();
    let mut s = F2Span::new(n);
    for c in &cols {
        s.insert(bits(n, c.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)));
    }
    s.contains(&bits(n, z.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)))
}

/// Least k ≤ kmax with U^k z in the image of d modulo U^trunc, computed
/// over F2 on the basis {U^s e_j : s < trunc}.
pub fn truncated_torsion_order(d: &PMat, z: &[P], kmax: u32, trunc: u32) -> Option<u32> {
    let n = d.len();
    let nn = trunc as usize;
    let idx = |i: usize, s: usize| i * nn + s;
    let len = n * nn;
    let mut span = F2Span::new(len);
    for j in 0..n {
        for s in 0..nn {
            let mut ones = Vec::new();
            for i in 0..n {
                for t in self::ones(&d[i][j]).map(|t| t as usize) {
                    if s + t < nn {
                        ones.push(idx(i, s + t));
                    }
                }
            }
            span.insert(bits(len, ones));
        }
    }
    (0..=kmax).find(|&k| {
        let mut ones = Vec::new();
        for (i, p) in z.iter().enumerate() {
            for t in self::ones(p).map(|t| t as usize) {
                if t + (k as usize) < nn {
                    ones.push(idx(i, t + k as usize));
                }
            }
        }
        span.contains(&bits(len, ones))
    })
}

/// Torus algebra, written out independently. Labels: 0 = ι₀, 1 = ι₁, then
/// "1", "2", "3", "12", "23", "123".
pub fn alg_mul(a: &str, b: &str) -> Option<&'static str> {
    match (a, b) {
        ("1", "2") => Some("12"),
        ("2", "3") => Some("23"),
        ("1", "23") => Some("123"),
        ("12", "3") => Some("123"),
        _ => None,
    }
}

pub fn alg_profile(a: &str) -> (u8, u8) {
    match a {
        "i0" | "12" => (0, 0),
        "i1" | "23" => (1, 1),
        "1" | "3" | "123" => (0, 1),
        "2" => (1, 0),
        _ => panic!("unknown label {a}"),
    }
}
