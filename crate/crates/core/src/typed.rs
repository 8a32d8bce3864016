//! Type D structures over the torus algebra, their morphisms, and the
//! morphism complex.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{AlgebraElement, Basis, Idem};
use crate::error::{Error, Result};
use crate::linalg::{f2_self_homology, BitVec, F2Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGen {
    pub name: String,
    pub idem: Idem,
}

/// δ¹(from) contains label ⊗ to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DEdge {
    pub from: usize,
    pub label: Basis,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDStructure {
    pub name: String,
    pub generators: Vec<DGen>,
    pub edges: Vec<DEdge>,
}

impl TypeDStructure {
    /// Builds a structure, cancelling repeated edges in pairs (F2 sums).
    pub fn new(name: impl Into<String>, generators: Vec<DGen>, edges: Vec<DEdge>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if seen.insert(g.name.clone(), i).is_some() {
                return Err(Error::Schema(format!("duplicate generator '{}'", g.name)));
            }
        }
        for e in &edges {
            if e.from >= generators.len() || e.to >= generators.len() {
                return Err(Error::Schema("edge endpoint out of range".into()));
            }
        }
        Ok(TypeDStructure {
            name: name.into(),
            generators,
            edges: cancel_pairs(edges),
        })
    }

    /// Convenience constructor from names.
    pub fn from_names(
        name: &str,
        generators: &[(&str, Idem)],
        edges: &[(&str, Basis, &str)],
    ) -> Result<Self> {
        let gens: Vec<DGen> = generators
            .iter()
            .map(|(n, i)| DGen {
                name: n.to_string(),
                idem: *i,
            })
            .collect();
        let idx: HashMap<&str, usize> = generators.iter().enumerate().map(|(i, (n, _))| (*n, i)).collect();
        let look = |n: &str| {
            idx.get(n)
                .copied()
                .ok_or_else(|| Error::Schema(format!("unknown generator '{n}' in {name}")))
        };
        let edges = edges
            .iter()
            .map(|(f, l, t)| {
                Ok(DEdge {
                    from: look(f)?,
                    label: *l,
                    to: look(t)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, gens, edges)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn idem(&self, i: usize) -> Idem {
        self.generators[i].idem
    }

    pub fn gen_name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    /// Outgoing edges per generator, in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(Basis, usize)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for e in &self.edges {
            adj[e.from].push((e.label, e.to));
        }
        adj
    }

    pub fn count_idem(&self, idem: Idem) -> usize {
        self.generators.iter().filter(|g| g.idem == idem).count()
    }
}

pub(crate) fn cancel_pairs<T: Clone + Eq + std::hash::Hash>(items: Vec<T>) -> Vec<T> {
    let mut count: HashMap<T, usize> = HashMap::new();
    for it in &items {
        *count.entry(it.clone()).or_default() += 1;
    }
    let mut out = Vec::new();
    for it in items {
        if let Some(c) = count.get_mut(&it) {
            if *c % 2 == 1 {
                out.push(it.clone());
            }
            count.remove(&it);
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub source: String,
    pub target: String,
    pub residual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DReport {
    pub object: String,
    pub idempotent_errors: Vec<String>,
    pub violations: Vec<Violation>,
}

impl DReport {
    pub fn passed(&self) -> bool {
        self.idempotent_errors.is_empty() && self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let mut parts = self.idempotent_errors.clone();
        parts.extend(
            self.violations
                .iter()
                .map(|v| format!("{} -> {}: {}", v.source, v.target, v.residual)),
        );
        Err(Error::validation(self.object, parts.join("; ")))
    }
}

fn check_label(
    errs: &mut Vec<String>,
    label: Basis,
    from: (&str, Idem),
    to: (&str, Idem),
    what: &str,
) {
    let (l, r) = label.profile();
    if l != from.1 || r != to.1 {
        errs.push(format!(
            "{what} {} --{}--> {}: label profile ({l},{r}) does not match ({},{})",
            from.0,
            label.label(),
            to.0,
            from.1,
            to.1
        ));
    }
}

pub fn validate_type_d(d: &TypeDStructure) -> DReport {
    let mut report = DReport {
        object: d.name.clone(),
        ..Default::default()
    };
    for e in &d.edges {
        check_label(
            &mut report.idempotent_errors,
            e.label,
            (d.gen_name(e.from), d.idem(e.from)),
            (d.gen_name(e.to), d.idem(e.to)),
            "edge",
        );
    }
    let adj = d.adjacency();
    for x in 0..d.len() {
        let mut acc: Vec<AlgebraElement> = vec![AlgebraElement::ZERO; d.len()];
        for &(a, y) in &adj[x] {
            for &(b, z) in &adj[y] {
                if let Some(p) = a.mul(b) {
                    acc[z] += p.into();
                }
            }
        }
        for (z, r) in acc.into_iter().enumerate() {
            if !r.is_zero() {
                report.violations.push(Violation {
                    source: d.gen_name(x).to_string(),
                    target: d.gen_name(z).to_string(),
                    residual: r.to_string(),
                });
            }
        }
    }
    report
}

/// A morphism f¹: N₁ → A ⊗ N₂; each entry is coefficient ⊗ target at a source.
/// An idempotent coefficient is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeDMorphism {
    pub entries: Vec<DEdge>,
}

impl TypeDMorphism {
    pub fn new(entries: Vec<DEdge>) -> Self {
        TypeDMorphism {
            entries: cancel_pairs(entries),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_names(
        n1: &TypeDStructure,
        n2: &TypeDStructure,
        entries: &[(&str, Basis, &str)],
    ) -> Result<Self> {
        let entries = entries
            .iter()
            .map(|(f, c, t)| {
                Ok(DEdge {
                    from: n1
                        .index_of(f)
                        .ok_or_else(|| Error::Schema(format!("unknown source '{f}'")))?,
                    label: *c,
                    to: n2
                        .index_of(t)
                        .ok_or_else(|| Error::Schema(format!("unknown target '{t}'")))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(entries))
    }

    pub fn add(&self, other: &TypeDMorphism) -> TypeDMorphism {
        let mut e = self.entries.clone();
        e.extend(other.entries.iter().copied());
        TypeDMorphism::new(e)
    }

    pub fn adjacency(&self, n1_len: usize) -> Vec<Vec<(Basis, usize)>> {
        let mut adj = vec![Vec::new(); n1_len];
        for e in &self.entries {
            adj[e.from].push((e.label, e.to));
        }
        adj
    }
}

/// Compatible (source, coefficient, target) triples, the unknowns of the
/// morphism equation.
fn morphism_unknowns(n1: &TypeDStructure, n2: &TypeDStructure) -> Vec<DEdge> {
    let mut out = Vec::new();
    for x in 0..n1.len() {
        for c in crate::algebra::Basis::ALL {
            for y in 0..n2.len() {
                if c.left() == n1.idem(x) && c.right() == n2.idem(y) {
                    out.push(DEdge {
                        from: x,
                        label: c,
                        to: y,
                    });
                }
            }
        }
    }
    out
}

/// The differential of the morphism complex applied to one entry.
fn d_entry(
    e: DEdge,
    adj1_in: &[Vec<(Basis, usize)>],
    adj2: &[Vec<(Basis, usize)>],
    out: &mut Vec<DEdge>,
) {
    for &(a, w) in &adj1_in[e.from] {
        if let Some(p) = a.mul(e.label) {
            out.push(DEdge {
                from: w,
                label: p,
                to: e.to,
            });
        }
    }
    for &(a, z) in &adj2[e.to] {
        if let Some(p) = e.label.mul(a) {
            out.push(DEdge {
                from: e.from,
                label: p,
                to: z,
            });
        }
    }
}

fn incoming(d: &TypeDStructure) -> Vec<Vec<(Basis, usize)>> {
    let mut adj = vec![Vec::new(); d.len()];
    for e in &d.edges {
        adj[e.to].push((e.label, e.from));
    }
    adj
}

fn morphism_differential(f: &TypeDMorphism, n1: &TypeDStructure, n2: &TypeDStructure) -> Vec<DEdge> {
    let inc = incoming(n1);
    let adj2 = n2.adjacency();
    let mut out = Vec::new();
    for &e in &f.entries {
        d_entry(e, &inc, &adj2, &mut out);
    }
    cancel_pairs(out)
}

pub fn validate_morphism(f: &TypeDMorphism, n1: &TypeDStructure, n2: &TypeDStructure) -> DReport {
    let mut report = DReport {
        object: format!("morphism {} -> {}", n1.name, n2.name),
        ..Default::default()
    };
    for e in &f.entries {
        if e.from >= n1.len() || e.to >= n2.len() {
            report.idempotent_errors.push("entry endpoint out of range".into());
            return report;
        }
        check_label(
            &mut report.idempotent_errors,
            e.label,
            (n1.gen_name(e.from), n1.idem(e.from)),
            (n2.gen_name(e.to), n2.idem(e.to)),
            "entry",
        );
    }
    let residual = morphism_differential(f, n1, n2);
    let mut grouped: Vec<((usize, usize), AlgebraElement)> = Vec::new();
    for e in residual {
        match grouped.iter_mut().find(|(k, _)| *k == (e.from, e.to)) {
            Some((_, a)) => *a += e.label.into(),
            None => grouped.push(((e.from, e.to), e.label.into())),
        }
    }
    grouped.sort_by_key(|(k, _)| *k);
    for ((x, z), a) in grouped {
        report.violations.push(Violation {
            source: n1.gen_name(x).to_string(),
            target: n2.gen_name(z).to_string(),
            residual: a.to_string(),
        });
    }
    report
}

#[derive(Clone, Debug)]
pub struct MorphismSpace {
    pub dimension: usize,
    pub representatives: Vec<TypeDMorphism>,
    /// Dimension of the space of cycles (solutions of the morphism equation).
    pub cycles: usize,
    unknowns: Vec<DEdge>,
    differential: F2Matrix,
}

impl MorphismSpace {
    fn coords(&self, f: &TypeDMorphism) -> Result<BitVec> {
        let mut v = BitVec::zeros(self.unknowns.len());
        for e in &f.entries {
            let i = self
                .unknowns
                .iter()
                .position(|u| u == e)
                .ok_or_else(|| Error::Invalid("morphism entry is not idempotent-compatible".into()))?;
            v.flip(i);
        }
        Ok(v)
    }

    /// Whether `f` is a cycle that is not null-homotopic.
    pub fn is_nonzero_class(&self, f: &TypeDMorphism) -> Result<bool> {
        let v = self.coords(f)?;
        if !self.differential.mul_vec(&v).is_zero() {
            return Ok(false);
        }
        Ok(self.differential.solve(&v).is_none())
    }

    /// Whether `f` is a cycle.
    pub fn is_cycle(&self, f: &TypeDMorphism) -> Result<bool> {
        Ok(self.differential.mul_vec(&self.coords(f)?).is_zero())
    }

    /// All cycles in the span of the given kernel, as morphisms.
    pub fn cycle_basis(&self) -> Vec<TypeDMorphism> {
        self.differential
            .kernel_basis()
            .iter()
            .map(|v| self.to_morphism(v))
            .collect()
    }

    fn to_morphism(&self, v: &BitVec) -> TypeDMorphism {
        TypeDMorphism::new(v.ones().map(|i| self.unknowns[i]).collect())
    }
}

/// Homology of the morphism complex Mor(N₁, N₂).
pub fn morphism_space(n1: &TypeDStructure, n2: &TypeDStructure) -> Result<MorphismSpace> {
    let unknowns = morphism_unknowns(n1, n2);
    let index: HashMap<DEdge, usize> = unknowns.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let inc = incoming(n1);
    let adj2 = n2.adjacency();
    let n = unknowns.len();
    let mut d = F2Matrix::zeros(n, n);
    for (j, &e) in unknowns.iter().enumerate() {
        let mut out = Vec::new();
        d_entry(e, &inc, &adj2, &mut out);
        for t in out {
            let i = index[&t];
            d.flip(i, j);
        }
    }
    let (dimension, reps) = f2_self_homology(&d)?;
    let cycles = n - d.rank();
    let mut space = MorphismSpace {
        dimension,
        representatives: Vec::new(),
        cycles,
        unknowns,
        differential: d,
    };
    space.representatives = reps.iter().map(|v| space.to_morphism(v)).collect();
    Ok(space)
}
