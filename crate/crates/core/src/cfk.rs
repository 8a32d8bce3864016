//! Knot Floer complexes over F2[𝒰,𝒱] and the type D structure of a
//! zero-framed slice knot complement.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Basis, Idem};
use crate::error::{Error, Result};
use crate::linalg::{f2_self_homology, BitVec, F2Matrix, UMatrix, UPoly};
use crate::typed::{validate_type_d, DEdge, DGen, TypeDStructure};

/// ∂(from) contains 𝒰^u 𝒱^v · to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CfkEntry {
    pub from: usize,
    pub to: usize,
    pub u: u32,
    pub v: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfkComplex {
    pub name: String,
    pub generators: Vec<String>,
    pub entries: Vec<CfkEntry>,
    /// Bases derived from box shorthand, or supplied alongside the complex.
    pub bases: Option<SimplifiedBases>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Vertical,
    Horizontal,
}

/// One arrow of a simplified basis. Vertical arrows index the ξ basis (the
/// complex's own generators); horizontal arrows index the η basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowPair {
    pub kind: ChainKind,
    pub from: usize,
    pub to: usize,
    pub length: u32,
    /// Base name for the ι₁ chain generators.
    pub chain_name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifiedBases {
    /// Vertical and horizontal arrows; chain generators are emitted in this order.
    pub arrows: Vec<ArrowPair>,
    pub xi0: usize,
    pub eta0: usize,
    pub eta_names: Vec<String>,
    /// Row i expresses η_i in ξ coordinates.
    pub change_of_basis: F2Matrix,
}

impl SimplifiedBases {
    pub fn vertical(&self) -> impl Iterator<Item = &ArrowPair> {
        self.arrows.iter().filter(|a| a.kind == ChainKind::Vertical)
    }

    pub fn horizontal(&self) -> impl Iterator<Item = &ArrowPair> {
        self.arrows.iter().filter(|a| a.kind == ChainKind::Horizontal)
    }
}

/// Box lengths: ∂a = 𝒰^h b + 𝒱^v c, ∂b = 𝒱^v e, ∂c = 𝒰^h e.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxSpec {
    pub h: u32,
    pub v: u32,
}

impl BoxSpec {
    pub const UNIT: BoxSpec = BoxSpec { h: 1, v: 1 };
}

impl CfkComplex {
    pub fn new(name: impl Into<String>, generators: Vec<String>, entries: Vec<CfkEntry>) -> Self {
        CfkComplex {
            name: name.into(),
            generators,
            entries: crate::typed::cancel_pairs(entries),
            bases: None,
        }
    }

    /// Boxes a_i, b_i, c_i, e_i followed by singletons. With exactly one
    /// singleton the simplified bases are derived automatically.
    pub fn from_boxes(name: impl Into<String>, boxes: &[BoxSpec], singletons: usize) -> Self {
        let mut generators = Vec::new();
        let mut entries = Vec::new();
        let mut arrows = Vec::new();
        for (i, bx) in boxes.iter().enumerate() {
            let k = i + 1;
            let base = generators.len();
            for g in ["a", "b", "c", "e"] {
                generators.push(format!("{g}{k}"));
            }
            let (a, b, c, e) = (base, base + 1, base + 2, base + 3);
            let ent = |from, to, u, v| CfkEntry { from, to, u, v };
            entries.push(ent(a, b, bx.h, 0));
            entries.push(ent(a, c, 0, bx.v));
            entries.push(ent(b, e, 0, bx.v));
            entries.push(ent(c, e, bx.h, 0));
            let pair = |kind, from, to, length, nm: &str| ArrowPair {
                kind,
                from,
                to,
                length,
                chain_name: format!("{nm}_{k}"),
            };
            arrows.push(pair(ChainKind::Horizontal, a, b, bx.h, "y1"));
            arrows.push(pair(ChainKind::Vertical, b, e, bx.v, "y2"));
            arrows.push(pair(ChainKind::Horizontal, c, e, bx.h, "y3"));
            arrows.push(pair(ChainKind::Vertical, a, c, bx.v, "y4"));
        }
        let first_single = generators.len();
        match singletons {
            1 => generators.push("x".to_string()),
            n => generators.extend((1..=n).map(|j| format!("x{j}"))),
        }
        let n = generators.len();
        let bases = (singletons == 1).then(|| SimplifiedBases {
            arrows,
            xi0: first_single,
            eta0: first_single,
            eta_names: generators.clone(),
            change_of_basis: F2Matrix::identity(n),
        });
        CfkComplex {
            name: name.into(),
            generators,
            entries,
            bases,
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    fn entry_matrix(&self, keep: impl Fn(&CfkEntry) -> bool) -> F2Matrix {
        let mut m = F2Matrix::zeros(self.len(), self.len());
        for e in self.entries.iter().filter(|e| keep(e)) {
            m.flip(e.to, e.from);
        }
        m
    }
}

pub fn unknot() -> CfkComplex {
    CfkComplex::from_boxes("unknot", &[], 1)
}

pub fn fig8() -> CfkComplex {
    CfkComplex::from_boxes("fig8", &[BoxSpec::UNIT], 1)
}

pub fn m946() -> CfkComplex {
    CfkComplex::from_boxes("m946", &[BoxSpec::UNIT, BoxSpec::UNIT], 1)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CfkReport {
    pub object: String,
    pub generators: usize,
    pub entries: usize,
    /// (source, target) pairs with nonzero ∂².
    pub square_failures: Vec<(String, String)>,
    /// Entries with u + v = 0.
    pub unreduced: Vec<(String, String)>,
    pub bad_indices: Vec<String>,
}

impl CfkReport {
    pub fn passed(&self) -> bool {
        self.square_failures.is_empty() && self.unreduced.is_empty() && self.bad_indices.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let mut parts: Vec<String> = self.bad_indices.clone();
        parts.extend(self.unreduced.iter().map(|(a, b)| format!("unreduced entry {a}->{b}")));
        parts.extend(
            self.square_failures
                .iter()
                .map(|(a, b)| format!("d^2 nonzero on ({a}->{b})")),
        );
        Err(Error::validation(self.object, parts.join("; ")))
    }
}

pub fn validate_cfk(c: &CfkComplex) -> CfkReport {
    let mut report = CfkReport {
        object: c.name.clone(),
        generators: c.len(),
        entries: c.entries.len(),
        ..Default::default()
    };
    let n = c.len();
    for e in &c.entries {
        if e.from >= n || e.to >= n {
            report.bad_indices.push(format!("entry index out of range ({}, {})", e.from, e.to));
        }
    }
    if !report.bad_indices.is_empty() {
        return report;
    }
    for e in &c.entries {
        if e.u + e.v == 0 {
            report
                .unreduced
                .push((c.generators[e.from].clone(), c.generators[e.to].clone()));
        }
    }
    let mut out: Vec<Vec<&CfkEntry>> = vec![Vec::new(); n];
    for e in &c.entries {
        out[e.from].push(e);
    }
    let mut parity: HashMap<(usize, usize, u32, u32), bool> = HashMap::new();
    for e1 in &c.entries {
        for e2 in &out[e1.to] {
            *parity
                .entry((e1.from, e2.to, e1.u + e2.u, e1.v + e2.v))
                .or_default() ^= true;
        }
    }
    let mut bad: Vec<(usize, usize)> = parity
        .into_iter()
        .filter(|(_, odd)| *odd)
        .map(|((x, z, _, _), _)| (x, z))
        .collect();
    bad.sort();
    bad.dedup();
    report.square_failures = bad
        .into_iter()
        .map(|(x, z)| (c.generators[x].clone(), c.generators[z].clone()))
        .collect();
    report
}

/// ĤFK: homology at 𝒰 = 𝒱 = 0. Representatives are F2 vectors over the
/// generators.
pub fn hfk_hat(c: &CfkComplex) -> Result<(usize, Vec<BitVec>)> {
    validate_cfk(c).into_result()?;
    let d = c.entry_matrix(|e| e.u == 0 && e.v == 0);
    f2_self_homology(&d)
}

/// Basepoint actions on ĤFK.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoPair {
    pub phi: F2Matrix,
    pub psi: F2Matrix,
}

pub fn phi_psi(c: &CfkComplex) -> Result<EndoPair> {
    validate_cfk(c).into_result()?;
    if c.entries.iter().any(|e| e.u + e.v == 0) {
        return Err(Error::Unsupported(
            "ĤFK differs from the generator span; basepoint maps need a reduced complex".into(),
        ));
    }
    Ok(EndoPair {
        phi: c.entry_matrix(|e| e.u == 1 && e.v == 0),
        psi: c.entry_matrix(|e| e.u == 0 && e.v == 1),
    })
}

/// Tensor product over F2[𝒰,𝒱] with the Leibniz differential.
pub fn connected_sum(c1: &CfkComplex, c2: &CfkComplex) -> Result<CfkComplex> {
    validate_cfk(c1).into_result()?;
    validate_cfk(c2).into_result()?;
    let (n1, n2) = (c1.len(), c2.len());
    let idx = |i: usize, j: usize| i * n2 + j;
    let mut generators = Vec::with_capacity(n1 * n2);
    for x in &c1.generators {
        for y in &c2.generators {
            generators.push(format!("{x}#{y}"));
        }
    }
    let mut entries = Vec::new();
    for e in &c1.entries {
        for j in 0..n2 {
            entries.push(CfkEntry {
                from: idx(e.from, j),
                to: idx(e.to, j),
                u: e.u,
                v: e.v,
            });
        }
    }
    for i in 0..n1 {
        for e in &c2.entries {
            entries.push(CfkEntry {
                from: idx(i, e.from),
                to: idx(i, e.to),
                u: e.u,
                v: e.v,
            });
        }
    }
    Ok(CfkComplex::new(
        format!("{}#{}", c1.name, c2.name),
        generators,
        entries,
    ))
}

fn upoly_matrix(n: usize, entries: impl Iterator<Item = (usize, usize, u32)>) -> UMatrix {
    let mut m = UMatrix::zeros(n, n);
    for (from, to, k) in entries {
        m.add_to(to, from, &UPoly::monomial(k));
    }
    m
}

/// Checks that the bases describe `c`: the 𝒰 = 0 part of ∂ is the vertical
/// arrows in the ξ basis, and the 𝒱 = 0 part is the horizontal arrows in the
/// η basis.
pub fn check_bases(c: &CfkComplex, b: &SimplifiedBases) -> Result<()> {
    let n = c.len();
    let bad = |msg: String| Err(Error::validation(format!("bases of {}", c.name), msg));
    if b.change_of_basis.rows() != n || b.change_of_basis.cols() != n || b.eta_names.len() != n {
        return bad("change of basis has the wrong size".into());
    }
    if b.change_of_basis.rank() != n {
        return bad("change of basis is not invertible over F2".into());
    }
    if b.xi0 >= n || b.eta0 >= n {
        return bad("distinguished generator out of range".into());
    }
    for kind in [ChainKind::Vertical, ChainKind::Horizontal] {
        let distinguished = if kind == ChainKind::Vertical { b.xi0 } else { b.eta0 };
        let mut seen = vec![0u8; n];
        for a in b.arrows.iter().filter(|a| a.kind == kind) {
            if a.length == 0 || a.from >= n || a.to >= n || a.from == a.to {
                return bad(format!("malformed arrow {}", a.chain_name));
            }
            seen[a.from] += 1;
            seen[a.to] += 1;
        }
        for (i, &s) in seen.iter().enumerate() {
            let want = u8::from(i != distinguished);
            if s != want {
                return bad(format!("{kind:?} arrows do not pair off generator {i} exactly once"));
            }
        }
    }
    let vertical = upoly_matrix(
        n,
        c.entries.iter().filter(|e| e.u == 0).map(|e| (e.from, e.to, e.v)),
    );
    let expect_v = upoly_matrix(n, b.vertical().map(|a| (a.from, a.to, a.length)));
    if vertical != expect_v {
        return bad("vertical differential is not the listed arrows in the ξ basis".into());
    }
    let horizontal = upoly_matrix(
        n,
        c.entries.iter().filter(|e| e.v == 0).map(|e| (e.from, e.to, e.u)),
    );
    let expect_h = upoly_matrix(n, b.horizontal().map(|a| (a.from, a.to, a.length)));
    // columns of Xᵀ are the η vectors in ξ coordinates
    let xt = UMatrix::from_f2(&b.change_of_basis.transpose());
    if horizontal.mul(&xt) != xt.mul(&expect_h) {
        return bad("horizontal differential is not the listed arrows in the η basis".into());
    }
    Ok(())
}

/// The type D structure of the zero-framed complement of a slice knot.
pub fn build_cfd(c: &CfkComplex, bases: &SimplifiedBases, slice: bool) -> Result<TypeDStructure> {
    if !slice {
        return Err(Error::Unsupported(
            "only zero-framed slice knots are supported; assert sliceness to build".into(),
        ));
    }
    validate_cfk(c).into_result()?;
    check_bases(c, bases)?;
    let n = c.len();
    let x = &bases.change_of_basis;
    let x_inv_t = invert(x)?.transpose();
    let mut gens: Vec<DGen> = c
        .generators
        .iter()
        .map(|g| DGen {
            name: g.clone(),
            idem: Idem::I0,
        })
        .collect();
    let mut edges = Vec::new();
    // ξ_j = Σ_k (X⁻¹)_{jk} η_k, so an edge leaving η_k leaves each ξ_j with
    // (X⁻¹)_{jk} = 1; an edge into η_k lands on Σ_j X_{kj} ξ_j.
    let from_eta = |k: usize| x_inv_t.row(k).ones().collect::<Vec<_>>();
    let into_eta = |k: usize| x.row(k).ones().collect::<Vec<_>>();
    for arrow in &bases.arrows {
        let base = gens.len();
        let len = arrow.length as usize;
        for r in 1..=len {
            let name = if len == 1 {
                arrow.chain_name.clone()
            } else {
                format!("{}.{r}", arrow.chain_name)
            };
            gens.push(DGen {
                name,
                idem: Idem::I1,
            });
        }
        for r in 0..len - 1 {
            edges.push(DEdge {
                from: base + r,
                label: Basis::R23,
                to: base + r + 1,
            });
        }
        match arrow.kind {
            ChainKind::Vertical => {
                edges.push(DEdge {
                    from: arrow.to,
                    label: Basis::R123,
                    to: base,
                });
                edges.push(DEdge {
                    from: arrow.from,
                    label: Basis::R1,
                    to: base + len - 1,
                });
            }
            ChainKind::Horizontal => {
                for j in from_eta(arrow.from) {
                    edges.push(DEdge {
                        from: j,
                        label: Basis::R3,
                        to: base,
                    });
                }
                for j in into_eta(arrow.to) {
                    edges.push(DEdge {
                        from: base + len - 1,
                        label: Basis::R2,
                        to: j,
                    });
                }
            }
        }
    }
    for j in into_eta(bases.eta0) {
        edges.push(DEdge {
            from: bases.xi0,
            label: Basis::R12,
            to: j,
        });
    }
    debug_assert_eq!(n, c.len());
    let d = TypeDStructure::new(format!("cfd({})", c.name), gens, edges)?;
    validate_type_d(&d).into_result().map_err(|e| {
        Error::Internal(format!("built type D structure fails its structure equation: {e}"))
    })?;
    Ok(d)
}

/// Builds using the complex's own bases.
pub fn build_cfd_default(c: &CfkComplex) -> Result<TypeDStructure> {
    let b = c.bases.as_ref().ok_or_else(|| {
        Error::Invalid(format!("{} carries no simplified bases", c.name))
    })?;
    build_cfd(c, b, true)
}

fn invert(m: &F2Matrix) -> Result<F2Matrix> {
    let n = m.rows();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let col = m
            .solve(&BitVec::unit(n, i))
            .ok_or_else(|| Error::Invalid("singular change of basis".into()))?;
        cols.push(col);
    }
    Ok(F2Matrix::from_columns(n, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_validate() {
        assert!(validate_cfk(&fig8()).passed());
        assert!(validate_cfk(&m946()).passed());
        let bad = CfkComplex::new(
            "bad",
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                CfkEntry { from: 0, to: 1, u: 1, v: 0 },
                CfkEntry { from: 1, to: 2, u: 1, v: 0 },
            ],
        );
        let r = validate_cfk(&bad);
        assert_eq!(r.square_failures, vec![("a".to_string(), "c".to_string())]);
    }

    #[test]
    fn hat_ranks() {
        assert_eq!(hfk_hat(&unknot()).unwrap().0, 1);
        assert_eq!(hfk_hat(&fig8()).unwrap().0, 5);
        assert_eq!(hfk_hat(&m946()).unwrap().0, 9);
        let s = connected_sum(&fig8(), &fig8()).unwrap();
        assert_eq!(hfk_hat(&s).unwrap().0, 25);
    }

    #[test]
    fn phi_psi_fig8() {
        let c = fig8();
        let ep = phi_psi(&c).unwrap();
        let i = |s: &str| c.index_of(s).unwrap();
        // column = source, row = target
        assert!(ep.phi.get(i("b1"), i("a1")));
        assert!(ep.phi.get(i("e1"), i("c1")));
        assert_eq!(ep.phi.rank(), 2);
        assert!(ep.psi.get(i("c1"), i("a1")));
        assert!(ep.psi.get(i("e1"), i("b1")));
        assert_eq!(ep.psi.rank(), 2);
    }

    #[test]
    fn box_tensor_box() {
        let b = CfkComplex::from_boxes("box", &[BoxSpec::UNIT], 0);
        let s = connected_sum(&b, &b).unwrap();
        assert_eq!(s.len(), 16);
        assert!(validate_cfk(&s).passed());
    }

    #[test]
    fn cfd_counts() {
        let d = build_cfd_default(&unknot()).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.edges, vec![DEdge { from: 0, label: Basis::R12, to: 0 }]);
        let d = build_cfd_default(&fig8()).unwrap();
        assert_eq!((d.len(), d.edges.len()), (9, 9));
        let d = build_cfd_default(&m946()).unwrap();
        assert_eq!((d.len(), d.edges.len()), (17, 17));
        assert_eq!(d.count_idem(Idem::I0), 9);
    }

    #[test]
    fn refuses_without_slice_assertion() {
        let c = unknot();
        assert!(build_cfd(&c, c.bases.as_ref().unwrap(), false).is_err());
    }

    #[test]
    fn longer_arrows() {
        let c = CfkComplex::from_boxes("long", &[BoxSpec { h: 2, v: 3 }], 1);
        let d = build_cfd_default(&c).unwrap();
        // 5 ι₀ + (2+3+2+3) ι₁
        assert_eq!(d.len(), 15);
        assert!(d.index_of("y4_1.3").is_some());
    }

    #[test]
    fn nontrivial_change_of_basis() {
        // η_{a1} = a1 + a2 and η_{b1} = b1 + b2 keep the horizontal arrows
        // a1→b1, a2→b2 in the η basis.
        let c = m946();
        let mut b = c.bases.clone().unwrap();
        let i = |s: &str| c.index_of(s).unwrap();
        let mut x = F2Matrix::identity(c.len());
        x.set(i("a1"), i("a2"), true);
        x.set(i("b1"), i("b2"), true);
        b.change_of_basis = x;
        check_bases(&c, &b).unwrap();
        let d = build_cfd(&c, &b, true).unwrap();
        assert_eq!(d.edges.len(), 19);

        // η_{a1} = a1 + c1 has ∂ʰ = 𝒰(b1 + e1), not a single arrow.
        let mut x = F2Matrix::identity(c.len());
        x.set(i("a1"), i("c1"), true);
        b.change_of_basis = x;
        assert!(check_bases(&c, &b).is_err());
    }
}
