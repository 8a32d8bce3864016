//! Alexander polynomials of satellites and permutation representations of
//! finitely presented groups.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer Laurent polynomial Σ coeffs[k]·t^(min_exp + k), trimmed so both
/// end coefficients are nonzero. Zero has no coefficients and min_exp 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLaurent")]
pub struct LaurentPoly {
    pub min_exp: i64,
    pub coeffs: Vec<i64>,
}

#[derive(Deserialize)]
struct RawLaurent {
    min_exp: i64,
    coeffs: Vec<i64>,
}

impl TryFrom<RawLaurent> for LaurentPoly {
    type Error = String;
    fn try_from(r: RawLaurent) -> std::result::Result<Self, String> {
        Ok(LaurentPoly::new(r.min_exp, r.coeffs))
    }
}

impl LaurentPoly {
    pub fn new(min_exp: i64, coeffs: Vec<i64>) -> Self {
        let mut p = LaurentPoly { min_exp, coeffs };
        p.trim();
        p
    }

    pub fn constant(c: i64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead);
        self.min_exp += lead as i64;
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::new(0, vec![]);
        }
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.min_exp + other.min_exp, c)
    }

    /// p(t^w); w = 0 gives the constant p(1).
    pub fn substitute(&self, w: i64) -> LaurentPoly {
        if w == 0 {
            return LaurentPoly::constant(self.eval_one());
        }
        let mut terms: BTreeMap<i64, i64> = BTreeMap::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            *terms.entry((self.min_exp + k as i64) * w).or_default() += c;
        }
        from_terms(&terms)
    }

    /// Whether p(t) = p(t⁻¹).
    pub fn is_symmetric(&self) -> bool {
        self.min_exp == -self.max_exp() && self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Multiplies by ±t^k so the exponents are centred and p(1) > 0.
    pub fn normalized(&self) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        let span = self.coeffs.len() as i64 - 1;
        let sign = if self.eval_one() < 0 { -1 } else { 1 };
        LaurentPoly::new(-(span / 2), self.coeffs.iter().map(|c| c * sign).collect())
    }
}

fn from_terms(terms: &BTreeMap<i64, i64>) -> LaurentPoly {
    let Some((&lo, _)) = terms.iter().next() else {
        return LaurentPoly::new(0, vec![]);
    };
    let hi = *terms.keys().next_back().unwrap();
    let mut c = vec![0; (hi - lo + 1) as usize];
    for (e, v) in terms {
        c[(e - lo) as usize] += v;
    }
    LaurentPoly::new(lo, c)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let e = self.min_exp + k as i64;
            let mag = c.abs();
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            let mono = match e {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}{mono}"));
            }
        }
        f.write_str(&out)
    }
}

/// Δ_P(t)·Δ_K(t^w), normalized.
pub fn alexander_satellite(dp: &LaurentPoly, dk: &LaurentPoly, w: i64) -> Result<LaurentPoly> {
    let v = dk.eval_one();
    if v != 1 && v != -1 {
        return Err(Error::Invalid(format!(
            "companion polynomial evaluates to {v} at t = 1, expected ±1"
        )));
    }
    Ok(dp.mul(&dk.substitute(w)).normalized())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePresentation {
    pub generators: Vec<String>,
    /// Words; a capitalized generator name denotes the inverse.
    pub relators: Vec<Vec<String>>,
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

impl FinitePresentation {
    /// Letters as (generator index, inverse flag).
    pub fn parse_relators(&self) -> Result<Vec<Vec<(usize, bool)>>> {
        self.relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|l| {
                        if let Some(i) = self.generators.iter().position(|g| g == l) {
                            return Ok((i, false));
                        }
                        self.generators
                            .iter()
                            .position(|g| capitalize(g) == *l && capitalize(g) != *g)
                            .map(|i| (i, true))
                            .ok_or_else(|| Error::Schema(format!("relator letter '{l}' is not a generator")))
                    })
                    .collect()
            })
            .collect()
    }
}

/// ⟨m, a : a m a⁻² m⁻¹⟩.
pub fn positron() -> FinitePresentation {
    FinitePresentation {
        generators: vec!["m".into(), "a".into()],
        relators: vec![["a", "m", "A", "A", "M"].iter().map(|s| s.to_string()).collect()],
    }
}

/// A permutation of {0, …, n−1}; `images[i]` is the image of i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    /// Applies `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u8 == j)
    }

    /// Parses 1-based cycle notation such as "(1 2 3)(4 5)" or "()".
    pub fn from_cycles(n: usize, s: &str) -> Result<Self> {
        let mut p = Self::identity(n);
        for cyc in s.split(')').map(|c| c.trim().trim_start_matches('(')).filter(|c| !c.is_empty()) {
            let pts: Vec<usize> = cyc
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Schema(format!("bad cycle '{s}'"))))
                .collect::<Result<_>>()?;
            if pts.iter().any(|&x| x == 0 || x > n) {
                return Err(Error::Schema(format!("cycle point out of range in '{s}'")));
            }
            for k in 0..pts.len() {
                p.0[pts[k] - 1] = (pts[(k + 1) % pts.len()] - 1) as u8;
            }
        }
        Ok(p)
    }

    fn all(n: usize) -> Vec<Permutation> {
        fn rec(cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            if cur.len() == used.len() {
                out.push(Permutation(cur.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    cur.push(i as u8);
                    rec(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = self.0[i] as usize;
            }
            write!(f, "({})", cyc.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermutationHom {
    pub degree: usize,
    /// Image of each generator, in presentation order.
    pub images: Vec<(String, Permutation)>,
}

impl PermutationHom {
    pub fn image_of(&self, gen: &str) -> Option<&Permutation> {
        self.images.iter().find(|(g, _)| g == gen).map(|(_, p)| p)
    }
}

fn eval_word(word: &[(usize, bool)], images: &[Permutation], n: usize) -> Permutation {
    word.iter().fold(Permutation::identity(n), |acc, &(g, inv)| {
        if inv {
            acc.then(&images[g].inverse())
        } else {
            acc.then(&images[g])
        }
    })
}

/// Whether each relator maps to the identity.
pub fn verify_hom(pres: &FinitePresentation, hom: &PermutationHom) -> Result<bool> {
    let rels = pres.parse_relators()?;
    let imgs: Vec<Permutation> = pres
        .generators
        .iter()
        .map(|g| {
            hom.image_of(g)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("no image for generator {g}")))
        })
        .collect::<Result<_>>()?;
    Ok(rels.iter().all(|r| eval_word(r, &imgs, hom.degree).is_identity()))
}

fn generated_order(gens: &[Permutation], n: usize) -> usize {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

const ENUMERATION_LIMIT: u128 = 200_000_000;

/// All homomorphisms to S_n killing every relator (optionally surjective only),
/// sorted by generator images.
pub fn find_homs(pres: &FinitePresentation, n: usize, surjective_only: bool) -> Result<Vec<PermutationHom>> {
    if n == 0 || n > 6 {
        return Err(Error::Invalid("degree must be between 1 and 6".into()));
    }
    let rels = pres.parse_relators()?;
    let perms = Permutation::all(n);
    let k = pres.generators.len();
    let total = (perms.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > ENUMERATION_LIMIT {
        return Err(Error::Unsupported(format!(
            "{total} assignments exceed the enumeration limit"
        )));
    }
    let full: usize = (1..=n).product();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let imgs: Vec<Permutation> = idx.iter().map(|&i| perms[i].clone()).collect();
        if rels.iter().all(|r| eval_word(r, &imgs, n).is_identity())
            && (!surjective_only || generated_order(&imgs, n) == full)
        {
            out.push(PermutationHom {
                degree: n,
                images: pres.generators.iter().cloned().zip(imgs).collect(),
            });
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == k {
                out.sort();
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Groups homomorphisms into orbits under conjugation in S_n. Each orbit is
/// sorted and orbits are ordered by their first member.
pub fn conjugacy_orbits(homs: &[PermutationHom]) -> Vec<Vec<PermutationHom>> {
    let mut orbits: Vec<Vec<PermutationHom>> = Vec::new();
    let mut placed: HashSet<&PermutationHom> = HashSet::new();
    for h in homs {
        if placed.contains(h) {
            continue;
        }
        let mut orbit: Vec<PermutationHom> = Vec::new();
        for s in Permutation::all(h.degree) {
            let si = s.inverse();
            let c = PermutationHom {
                degree: h.degree,
                images: h.images.iter().map(|(g, p)| (g.clone(), si.then(p).then(&s))).collect(),
            };
            if !orbit.contains(&c) {
                orbit.push(c);
            }
        }
        orbit.sort();
        for c in &orbit {
            if let Some(orig) = homs.iter().find(|x| *x == c) {
                placed.insert(orig);
            }
        }
        orbits.push(orbit);
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig8_alex() -> LaurentPoly {
        LaurentPoly::new(-1, vec![1, -3, 1])
    }

    #[test]
    fn satellite_examples() {
        let one = LaurentPoly::one();
        assert_eq!(alexander_satellite(&one, &fig8_alex(), 0).unwrap(), one);
        // t - 3 + t^-1 takes the value -1 at t = 1, so the normalized
        // answers are the negatives of the textbook forms.
        let neg = LaurentPoly::constant(-1);
        assert_eq!(alexander_satellite(&one, &fig8_alex(), 1).unwrap(), fig8_alex().mul(&neg));
        assert_eq!(
            alexander_satellite(&one, &fig8_alex(), 2).unwrap(),
            LaurentPoly::new(-2, vec![1, 0, -3, 0, 1]).mul(&neg)
        );
        assert!(alexander_satellite(&one, &LaurentPoly::constant(3), 1).is_err());
        let p = alexander_satellite(&fig8_alex(), &fig8_alex(), -3).unwrap();
        assert!(p.is_symmetric());
        assert_eq!(p.eval_one(), 1);
    }

    #[test]
    fn display() {
        assert_eq!(fig8_alex().to_string(), "t - 3 + t^-1");
    }

    #[test]
    fn positron_surjection() {
        let homs = find_homs(&positron(), 3, true).unwrap();
        let mu = Permutation::from_cycles(3, "(2 3)").unwrap();
        let al = Permutation::from_cycles(3, "(1 2 3)").unwrap();
        assert!(homs
            .iter()
            .any(|h| h.image_of("m") == Some(&mu) && h.image_of("a") == Some(&al)));
        for h in &homs {
            assert!(verify_hom(&positron(), h).unwrap());
        }
        let orbits = conjugacy_orbits(&homs);
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0], homs);
    }

    #[test]
    fn trivial_and_abelian() {
        let p = FinitePresentation {
            generators: vec!["a".into()],
            relators: vec![vec!["a".into()]],
        };
        assert!(find_homs(&p, 3, true).unwrap().is_empty());
        let c = FinitePresentation {
            generators: vec!["a".into(), "b".into()],
            relators: vec![vec!["a".into(), "b".into(), "A".into(), "B".into()]],
        };
        assert_eq!(find_homs(&c, 2, false).unwrap().len(), 4);
    }

    #[test]
    fn cycle_round_trip() {
        let p = Permutation::from_cycles(4, "(1 3)(2 4)").unwrap();
        assert_eq!(p.to_string(), "(1 3)(2 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }
}
