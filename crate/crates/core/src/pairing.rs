//! Box tensor products of type A and type D structures, and the chain maps
//! induced by type D morphisms.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::Basis;
use crate::error::{Error, Result};
use crate::linalg::{f2_self_homology, u_homology, BitVec, HomologySummary, UMatrix, UPoly};
use crate::typea::{FiniteOp, Ring, TypeAStructure};
use crate::typed::{TypeDMorphism, TypeDStructure};

/// A labelled directed graph walked by operation words. Frontiers are F2
/// vectors, so path counts are taken mod 2.
struct PathGraph {
    n: usize,
    by_label: HashMap<Basis, Vec<Vec<usize>>>,
}

impl PathGraph {
    fn new(n: usize, edges: impl Iterator<Item = (usize, Basis, usize)>) -> Self {
        let mut by_label: HashMap<Basis, Vec<Vec<usize>>> = HashMap::new();
        for (from, label, to) in edges {
            by_label.entry(label).or_insert_with(|| vec![Vec::new(); n])[from].push(to);
        }
        PathGraph { n, by_label }
    }

    fn step(&self, f: &BitVec, letter: Basis) -> BitVec {
        let mut out = BitVec::zeros(self.n);
        if let Some(adj) = self.by_label.get(&letter) {
            for i in f.ones() {
                for &j in &adj[i] {
                    out.flip(j);
                }
            }
        }
        out
    }

    fn walk(&self, f: &BitVec, word: &[Basis]) -> BitVec {
        let mut cur = f.clone();
        for &l in word {
            if cur.is_zero() {
                break;
            }
            cur = self.step(&cur, l);
        }
        cur
    }

    /// Every (U-power, target generator of M, endpoint node) reached from
    /// `start` by some operation of `m` sourced at `x`.
    fn terms(
        &self,
        m: &TypeAStructure,
        x: usize,
        start: usize,
        ops: &[&FiniteOp],
        out: &mut Vec<(u32, usize, usize)>,
    ) -> Result<()> {
        let s = BitVec::unit(self.n, start);
        for op in ops {
            let end = self.walk(&s, &op.word.0);
            for z in end.ones() {
                out.push((op.upow, op.to, z));
            }
        }
        for f in m.families.iter().filter(|f| f.from == x) {
            let mut cur = self.walk(&s, &f.prefix.0);
            let mut seen: HashMap<BitVec, usize> = HashMap::new();
            let mut history: Vec<BitVec> = Vec::new();
            let mut i = 0usize;
            loop {
                if cur.is_zero() {
                    break;
                }
                if let Some(&i0) = seen.get(&cur) {
                    // the frontier sequence is periodic from i0 on
                    let live = history[i0..]
                        .iter()
                        .any(|fr| !self.walk(fr, &f.suffix.0).is_zero());
                    if live {
                        return Err(Error::Nontermination(format!(
                            "family {}·({})ⁱ·{} from {} matches for infinitely many i",
                            f.prefix,
                            f.repeat,
                            f.suffix,
                            m.gen_name(x)
                        )));
                    }
                    break;
                }
                seen.insert(cur.clone(), i);
                history.push(cur.clone());
                let end = self.walk(&cur, &f.suffix.0);
                for z in end.ones() {
                    out.push((f.alpha * i as u32 + f.beta, f.to, z));
                }
                cur = self.walk(&cur, &f.repeat.0);
                i += 1;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxComplex {
    pub name: String,
    pub ring: Ring,
    /// (generator of the type A side, generator of the type D side).
    pub pairs: Vec<(usize, usize)>,
    pub names: Vec<String>,
    /// Column j is ∂ of generator j.
    pub d: UMatrix,
}

impl BoxComplex {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Sum of the named generators, as a coefficient vector.
    pub fn element(&self, names: &[&str]) -> Result<Vec<UPoly>> {
        let mut v = vec![UPoly::zero(); self.len()];
        for n in names {
            let i = self
                .index_of(n)
                .ok_or_else(|| Error::Invalid(format!("{n} is not a generator of {}", self.name)))?;
            v[i] += &UPoly::one();
        }
        Ok(v)
    }

    pub fn boundary(&self, v: &[UPoly]) -> Vec<UPoly> {
        self.d.mul_vec(v)
    }

    pub fn square_is_zero(&self) -> bool {
        self.d.mul(&self.d).is_zero()
    }

    /// Homology over the complex's ring. Over F2 the torsion lists are empty.
    pub fn homology(&self) -> Result<HomologySummary> {
        match self.ring {
            Ring::F2 => {
                let (rank, reps) = f2_self_homology(&self.d.at_u_zero())?;
                Ok(HomologySummary {
                    free_rank: rank,
                    torsion_orders: Vec::new(),
                    other_torsion: Vec::new(),
                    representatives: reps.iter().map(|r| bits_to_upoly(r)).collect(),
                })
            }
            Ring::F2U => u_homology(&self.d),
        }
    }

    /// Renders a vector as a sum of generator names.
    pub fn describe(&self, v: &[UPoly]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| {
                if p.is_one() {
                    self.names[i].clone()
                } else {
                    format!("({p})·{}", self.names[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

pub fn bits_to_upoly(v: &BitVec) -> Vec<UPoly> {
    (0..v.len())
        .map(|i| if v.get(i) { UPoly::one() } else { UPoly::zero() })
        .collect()
}

pub fn upoly_to_bits(v: &[UPoly]) -> BitVec {
    BitVec::from_indices(v.len(), v.iter().enumerate().filter(|(_, p)| p.coeff(0)).map(|(i, _)| i))
}

fn pair_index(m: &TypeAStructure, n: &TypeDStructure) -> (Vec<(usize, usize)>, HashMap<(usize, usize), usize>) {
    let mut pairs = Vec::new();
    for x in 0..m.len() {
        for y in 0..n.len() {
            if m.idem(x) == n.idem(y) {
                pairs.push((x, y));
            }
        }
    }
    let idx = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    (pairs, idx)
}

fn ops_by_source(m: &TypeAStructure) -> Vec<Vec<&FiniteOp>> {
    let mut v = vec![Vec::new(); m.len()];
    for op in &m.ops {
        v[op.from].push(op);
    }
    v
}

/// M ⊠ N.
pub fn box_tensor(m: &TypeAStructure, n: &TypeDStructure) -> Result<BoxComplex> {
    let (pairs, idx) = pair_index(m, n);
    let graph = PathGraph::new(
        n.len(),
        n.edges
            .iter()
            .filter(|e| !e.label.is_idempotent())
            .map(|e| (e.from, e.label, e.to)),
    );
    let ops = ops_by_source(m);
    let mut d = UMatrix::zeros(pairs.len(), pairs.len());
    for (col, &(x, y)) in pairs.iter().enumerate() {
        let mut terms = Vec::new();
        graph.terms(m, x, y, &ops[x], &mut terms)?;
        for e in n.edges.iter().filter(|e| e.from == y && e.label.is_idempotent()) {
            terms.push((0, x, e.to));
        }
        for (p, x2, z) in terms {
            let row = *idx.get(&(x2, z)).ok_or_else(|| {
                Error::Internal(format!(
                    "term {}⊗{} violates idempotent matching",
                    m.gen_name(x2),
                    n.gen_name(z)
                ))
            })?;
            d.add_to(row, col, &UPoly::monomial(p));
        }
    }
    let names = pairs
        .iter()
        .map(|&(x, y)| format!("{}⊗{}", m.gen_name(x), n.gen_name(y)))
        .collect();
    let bc = BoxComplex {
        name: format!("{} ⊠ {}", m.name, n.name),
        ring: m.ring,
        pairs,
        names,
        d,
    };
    if !bc.square_is_zero() {
        return Err(Error::Internal(format!("∂² ≠ 0 on {}", bc.name)));
    }
    Ok(bc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub domain: BoxComplex,
    pub codomain: BoxComplex,
    /// Column j is the image of domain generator j.
    pub matrix: UMatrix,
}

impl ChainMap {
    pub fn apply(&self, v: &[UPoly]) -> Vec<UPoly> {
        self.matrix.mul_vec(v)
    }

    pub fn commutes(&self) -> bool {
        self.codomain.d.mul(&self.matrix) == self.matrix.mul(&self.domain.d)
    }
}

/// I_M ⊠ f : M ⊠ N₁ → M ⊠ N₂.
pub fn induced_map(
    m: &TypeAStructure,
    f: &TypeDMorphism,
    n1: &TypeDStructure,
    n2: &TypeDStructure,
) -> Result<ChainMap> {
    let dom = box_tensor(m, n1)?;
    let cod = box_tensor(m, n2)?;
    let off = n1.len();
    let edges = n1
        .edges
        .iter()
        .filter(|e| !e.label.is_idempotent())
        .map(|e| (e.from, e.label, e.to))
        .chain(
            n2.edges
                .iter()
                .filter(|e| !e.label.is_idempotent())
                .map(|e| (e.from + off, e.label, e.to + off)),
        )
        .chain(
            f.entries
                .iter()
                .filter(|e| !e.label.is_idempotent())
                .map(|e| (e.from, e.label, e.to + off)),
        );
    let graph = PathGraph::new(off + n2.len(), edges);
    let (_, cod_idx) = pair_index(m, n2);
    let ops = ops_by_source(m);
    let mut mat = UMatrix::zeros(cod.len(), dom.len());
    for (col, &(x, y)) in dom.pairs.iter().enumerate() {
        let mut terms = Vec::new();
        graph.terms(m, x, y, &ops[x], &mut terms)?;
        let mut push = |p: u32, x2: usize, z: usize| -> Result<()> {
            let row = *cod_idx.get(&(x2, z)).ok_or_else(|| {
                Error::Internal("induced term violates idempotent matching".into())
            })?;
            mat.add_to(row, col, &UPoly::monomial(p));
            Ok(())
        };
        for (p, x2, z) in terms {
            if z >= off {
                push(p, x2, z - off)?;
            }
        }
        for e in f.entries.iter().filter(|e| e.from == y && e.label.is_idempotent()) {
            push(0, x, e.to)?;
        }
    }
    let cm = ChainMap {
        domain: dom,
        codomain: cod,
        matrix: mat,
    };
    if !cm.commutes() {
        return Err(Error::Internal(format!(
            "induced map on {} does not commute with the differentials",
            m.name
        )));
    }
    Ok(cm)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxEntryExport {
    pub from: String,
    pub to: String,
    pub upoly: UPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxComplexExport {
    pub name: String,
    pub ring: Ring,
    pub generators: Vec<String>,
    pub differential: Vec<BoxEntryExport>,
}

impl From<&BoxComplex> for BoxComplexExport {
    fn from(b: &BoxComplex) -> Self {
        let mut differential: Vec<BoxEntryExport> = b
            .d
            .entries()
            .map(|(i, j, p)| BoxEntryExport {
                from: b.names[j].clone(),
                to: b.names[i].clone(),
                upoly: p.clone(),
            })
            .collect();
        differential.sort_by(|a, c| (&a.from, &a.to).cmp(&(&c.from, &c.to)));
        BoxComplexExport {
            name: b.name.clone(),
            ring: b.ring,
            generators: b.names.clone(),
            differential,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Idem;
    use crate::builtins::*;
    use crate::cfk::{build_cfd_default, m946};
    use crate::typea::TypeABuilder;

    #[test]
    fn whitehead_unknot() {
        let b = box_tensor(&cfa_whitehead(), &cfd_unknot()).unwrap();
        let names: Vec<&str> = b.names.iter().map(String::as_str).collect();
        assert_eq!(names, vec!["b⊗v", "b'⊗v", "d⊗v"]);
        let db = b.boundary(&b.element(&["b'⊗v"]).unwrap());
        assert_eq!(db, b.element(&["b⊗v", "d⊗v"]).unwrap());
        let h = b.homology().unwrap();
        assert_eq!(h.free_rank, 1);
        assert_eq!(h.representatives[0], b.element(&["b⊗v"]).unwrap());
    }

    #[test]
    fn longitude_m946() {
        let k = build_cfd_default(&m946()).unwrap();
        let b = box_tensor(&cfa_longitude(), &k).unwrap();
        assert_eq!(b.len(), 9);
        assert!(b.d.is_zero());
        assert_eq!(b.homology().unwrap().free_rank, 9);
    }

    #[test]
    fn cable_unknot() {
        let b = box_tensor(&cfa_cable_p1(2).unwrap(), &cfd_unknot()).unwrap();
        assert_eq!(b.names, vec!["a⊗v".to_string()]);
        assert!(b.d.is_zero());
        let h = b.homology().unwrap();
        assert_eq!((h.free_rank, h.torsion_orders.len()), (1, 0));
    }

    #[test]
    fn nontermination_detected() {
        let m = TypeABuilder::new("loop", Ring::F2U)
            .gen("a", Idem::I1, None)
            .gen("b", Idem::I0, None)
            .family("a", &[], &[Basis::R23], &[Basis::R2], 1, 0, "b")
            .unwrap()
            .build();
        let n = TypeDStructure::from_names(
            "cyc",
            &[("p", Idem::I1), ("q", Idem::I0)],
            &[("p", Basis::R23, "p"), ("p", Basis::R2, "q")],
        )
        .unwrap();
        assert!(matches!(box_tensor(&m, &n), Err(Error::Nontermination(_))));
    }

    #[test]
    fn induced_examples() {
        let (u, k, f) = (cfd_unknot(), cfd_m946(), morphism_m946_diff());
        let cm = induced_map(&cfa_cable_2_neg1(), &f, &u, &k).unwrap();
        let x = cm.domain.element(&["X⊗v"]).unwrap();
        let img = cm.apply(&x);
        let want = cm
            .codomain
            .element(&["X⊗e1", "X⊗e2", "B2⊗y2_1", "B2⊗y2_2"])
            .unwrap();
        assert_eq!(img, want);

        let cm = induced_map(&cfa_longitude(), &f, &u, &k).unwrap();
        let img = cm.apply(&cm.domain.element(&["alpha⊗v"]).unwrap());
        assert_eq!(img, cm.codomain.element(&["alpha⊗e1", "alpha⊗e2"]).unwrap());

        let cm = induced_map(&cfa_whitehead(), &f, &u, &k).unwrap();
        let img = cm.apply(&cm.domain.element(&["b⊗v"]).unwrap());
        let want = cm
            .codomain
            .element(&["b⊗e1", "b⊗e2", "a⊗y3_1", "a⊗y3_2"])
            .unwrap();
        assert_eq!(img, want);
    }

    #[test]
    fn cable_neg_boundaries() {
        let b = box_tensor(&cfa_cable_2_neg1(), &cfd_m946()).unwrap();
        for i in 1..=2 {
            let d2 = b.boundary(&b.element(&[&format!("A2⊗y3_{i}")]).unwrap());
            assert_eq!(d2, b.element(&[&format!("X⊗e{i}")]).unwrap());
            let d1 = b.boundary(&b.element(&[&format!("A1⊗y3_{i}")]).unwrap());
            assert_eq!(d1, b.element(&[&format!("B2⊗y2_{i}")]).unwrap());
        }
    }
}
