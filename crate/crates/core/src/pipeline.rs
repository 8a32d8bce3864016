//! Decision procedures built on the pairing engine: candidate generators,
//! the no-cancellation criterion, the disk-distinguishing verdict, torsion
//! bounds for cables and the swap action on ĤFK ⊗ ĤFK.

use serde::Serialize;

use crate::algebra::Idem;
use crate::builtins::{cfa_cable_p1, cfa_longitude, cfd_unknot};
use crate::cfk::{build_cfd, hfk_hat, phi_psi, CfkComplex};
use crate::error::{Error, Result};
use crate::linalg::{in_image, solve_in_image, u_torsion_order, BitVec, F2Matrix, TorsionOrder, UPoly};
use crate::pairing::{box_tensor, induced_map, BoxComplex};
use crate::typea::TypeAStructure;
use crate::typed::{validate_morphism, TypeDMorphism, TypeDStructure};

#[derive(Clone, Debug, Serialize)]
pub struct Candidates {
    pub pattern: String,
    pub homology_rank: usize,
    pub generators: Vec<String>,
    #[serde(skip)]
    pub indices: Vec<usize>,
}

fn is_zero_vec(v: &[UPoly]) -> bool {
    v.iter().all(UPoly::is_zero)
}

/// Single ι₀ generators g of `p` for which g⊗v generates H(p ⊠ ĈFD(unknot)).
pub fn find_distinguished_generator(p: &TypeAStructure) -> Result<Candidates> {
    let unknot = cfd_unknot();
    let b = box_tensor(p, &unknot)?;
    let h = b.homology()?;
    let torsion = !h.torsion_orders.is_empty() || !h.other_torsion.is_empty();
    if h.free_rank != 1 || torsion {
        return Err(Error::validation(
            &p.name,
            format!(
                "not unknotted at the Floer level: pairing with the unknot has free rank {}{}",
                h.free_rank,
                if torsion { " and torsion" } else { "" }
            ),
        ));
    }
    let rep = &h.representatives[0];
    let mut indices = Vec::new();
    for (x, g) in p.generators.iter().enumerate() {
        if g.idem != Idem::I0 {
            continue;
        }
        let Some(i) = b.pairs.iter().position(|&(a, _)| a == x) else {
            continue;
        };
        let mut z = vec![UPoly::zero(); b.len()];
        z[i] = UPoly::one();
        if !is_zero_vec(&b.boundary(&z)) {
            continue;
        }
        // the only unit of F2[U] is 1, so z generates iff z + rep is a boundary
        let diff: Vec<UPoly> = z.iter().zip(rep).map(|(a, r)| a.clone() + r.clone()).collect();
        if in_image(&diff, &b.d)? {
            indices.push(x);
        }
    }
    Ok(Candidates {
        pattern: p.name.clone(),
        homology_rank: h.free_rank,
        generators: indices.iter().map(|&i| p.gen_name(i).to_string()).collect(),
        indices,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoCancelReport {
    pub pattern: String,
    pub generator: String,
    pub passed: bool,
    /// Operations into the generator that are (or are assumed to be)
    /// filtration-preserving.
    pub violators: Vec<String>,
    /// True when some violator was flagged only because a level is missing.
    pub conservative: bool,
}

fn op_label(p: &TypeAStructure, from: usize, word: &str, k: usize, upow: u32, to: usize) -> String {
    let args = if word.is_empty() {
        p.gen_name(from).to_string()
    } else {
        format!("{}, {}", p.gen_name(from), word)
    };
    let coeff = match upow {
        0 => String::new(),
        1 => "U·".into(),
        n => format!("U^{n}·"),
    };
    format!("m{}({args}) = {coeff}{}", k + 1, p.gen_name(to))
}

pub fn no_cancellation_check(p: &TypeAStructure, a: &str) -> Result<NoCancelReport> {
    let ai = p
        .index_of(a)
        .ok_or_else(|| Error::Invalid(format!("{a} is not a generator of {}", p.name)))?;
    let missing = |x: usize| p.generators[x].filtration.is_none() || p.generators[ai].filtration.is_none();
    let mut violators = Vec::new();
    let mut conservative = false;
    for op in p.ops.iter().filter(|o| o.to == ai && p.preserves_filtration(o.from, ai)) {
        let word = op
            .word
            .0
            .iter()
            .map(|b| format!("ρ{}", b.label()))
            .collect::<Vec<_>>()
            .join(", ");
        violators.push(op_label(p, op.from, &word, op.word.len(), op.upow, ai));
        conservative |= missing(op.from);
    }
    for f in p.families.iter().filter(|f| f.to == ai && p.preserves_filtration(f.from, ai)) {
        violators.push(format!(
            "family from {}: {}·({})ⁱ·{} ↦ U^({}i+{})·{}",
            p.gen_name(f.from),
            f.prefix,
            f.repeat,
            f.suffix,
            f.alpha,
            f.beta,
            a
        ));
        conservative |= missing(f.from);
    }
    Ok(NoCancelReport {
        pattern: p.name.clone(),
        generator: a.to_string(),
        passed: violators.is_empty(),
        violators,
        conservative,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Distinct,
    NotDistinguished,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateResult {
    pub generator: String,
    /// (I ⊠ f)(g⊗v) at chain level.
    pub image: String,
    pub nonzero_class: bool,
    /// Some w with ∂w equal to the image, when the class vanishes.
    pub bounding_element: Option<String>,
    pub no_cancellation: NoCancelReport,
    #[serde(skip)]
    pub image_vec: Vec<UPoly>,
    #[serde(skip)]
    pub bounding_vec: Option<Vec<UPoly>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub pattern: String,
    pub knot: String,
    pub theta: String,
    pub theta_nonzero: bool,
    pub chosen_generator: Option<String>,
    pub witness: Option<String>,
    pub criterion_predicts_distinct: bool,
    pub candidates: Vec<CandidateResult>,
}

/// The type D structure of the companion complement, with `f` checked as a
/// morphism out of ĈFD(unknot).
fn companion(k: &CfkComplex, f: &TypeDMorphism) -> Result<(TypeDStructure, TypeDStructure)> {
    let bases = k
        .bases
        .as_ref()
        .ok_or_else(|| Error::validation(&k.name, "no simplified bases available"))?;
    let n1 = cfd_unknot();
    let n2 = build_cfd(k, bases, true)?;
    validate_morphism(f, &n1, &n2).into_result()?;
    Ok((n1, n2))
}

fn class_nonzero(b: &BoxComplex, z: &[UPoly]) -> Result<bool> {
    Ok(!in_image(z, &b.d)?)
}

pub fn distinguish(p: &TypeAStructure, k: &CfkComplex, f: &TypeDMorphism) -> Result<Verdict> {
    let (n1, n2) = companion(k, f)?;
    let lon = cfa_longitude();
    let lcm = induced_map(&lon, f, &n1, &n2)?;
    let a0 = lcm.domain.element(&[&format!("{}⊗{}", lon.gen_name(0), n1.gen_name(0))])?;
    let theta = lcm.apply(&a0);
    if !class_nonzero(&lcm.codomain, &theta)? {
        return Err(Error::validation(
            "θ",
            "the morphism induces zero on the longitude pairing; not distinguishable by this method at the companion level",
        ));
    }
    if p.fragment {
        return Err(Error::Unsupported(format!(
            "{} is a partial operation table; pairing it with a companion is refused",
            p.name
        )));
    }
    let cands = find_distinguished_generator(p)?;
    let cm = induced_map(p, f, &n1, &n2)?;
    let mut results = Vec::new();
    for &x in &cands.indices {
        let g = p.gen_name(x);
        let src = cm.domain.element(&[&format!("{g}⊗{}", n1.gen_name(0))])?;
        let img = cm.apply(&src);
        let nonzero = class_nonzero(&cm.codomain, &img)?;
        let bounding = if nonzero { None } else { solve_in_image(&img, &cm.codomain.d)? };
        results.push(CandidateResult {
            generator: g.to_string(),
            image: cm.codomain.describe(&img),
            nonzero_class: nonzero,
            bounding_element: bounding.as_ref().map(|w| cm.codomain.describe(w)),
            no_cancellation: no_cancellation_check(p, g)?,
            image_vec: img,
            bounding_vec: bounding,
        });
    }
    let chosen = results.iter().find(|r| r.nonzero_class);
    Ok(Verdict {
        outcome: if chosen.is_some() {
            Outcome::Distinct
        } else {
            Outcome::NotDistinguished
        },
        pattern: p.name.clone(),
        knot: k.name.clone(),
        theta: lcm.codomain.describe(&theta),
        theta_nonzero: true,
        chosen_generator: chosen.map(|r| r.generator.clone()),
        witness: chosen.map(|r| r.image.clone()),
        criterion_predicts_distinct: results.iter().any(|r| r.no_cancellation.passed),
        candidates: results,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StabBound {
    pub p: usize,
    pub knot: String,
    pub class: String,
    pub torsion_order: TorsionOrder,
    /// Lower bound on the stabilization distance of the cabled disks.
    /// Absent when the class is not U-torsion.
    pub bound: Option<u32>,
}

pub fn stab_bound(p: usize, k: &CfkComplex, f: &TypeDMorphism) -> Result<StabBound> {
    let (n1, n2) = companion(k, f)?;
    let pat = cfa_cable_p1(p)?;
    let cm = induced_map(&pat, f, &n1, &n2)?;
    let src = cm.domain.element(&[&format!("a⊗{}", n1.gen_name(0))])?;
    let z = cm.apply(&src);
    let order = u_torsion_order(&z, &cm.codomain.d)?;
    Ok(StabBound {
        p,
        knot: k.name.clone(),
        class: cm.codomain.describe(&z),
        bound: match order {
            TorsionOrder::Finite(m) => Some(m),
            TorsionOrder::Infinite => None,
        },
        torsion_order: order,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapReport {
    pub knot: String,
    pub hfk_rank: usize,
    pub nontrivial: bool,
    /// (b⊗a, R(b⊗a)) with R(b⊗a) = a⊗b.
    pub witness: Option<(String, String)>,
    pub involution: bool,
}

/// Sw ∘ (1⊗(1+ΨΦ) + Ψ⊗Φ) on V⊗V, V = ĤFK spanned by the generators.
pub fn swap_matrix(phi: &F2Matrix, psi: &F2Matrix) -> F2Matrix {
    let n = phi.rows();
    let id = F2Matrix::identity(n);
    let inner = id.kron(&id.add(&psi.mul(phi))).add(&psi.kron(phi));
    let mut sw = F2Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            sw.set(j * n + i, i * n + j, true);
        }
    }
    sw.mul(&inner)
}

pub fn swap_action_nontrivial(c: &CfkComplex) -> Result<SwapReport> {
    let ep = phi_psi(c)?;
    let (rank, _) = hfk_hat(c)?;
    let n = c.len();
    let r = swap_matrix(&ep.phi, &ep.psi);
    let id = F2Matrix::identity(n * n);
    let nontrivial = r != id;
    let name = |v: &BitVec| -> String {
        let t: Vec<&str> = v.ones().map(|i| c.generators[i].as_str()).collect();
        if t.is_empty() {
            "0".into()
        } else {
            t.join(" + ")
        }
    };
    let witness = if n >= 2 {
        let a0 = BitVec::unit(n, 0);
        let pa = ep.phi.mul_vec(&a0);
        let a = if pa.is_zero() { a0 } else { pa };
        let bi = (0..n).find(|&i| BitVec::unit(n, i) != a).expect("n ≥ 2");
        let b = BitVec::unit(n, bi);
        let ba = kron_vec(&b, &a);
        let image = r.mul_vec(&ba);
        if image != kron_vec(&a, &b) {
            return Err(Error::Internal("swap witness recipe failed".into()));
        }
        Some((format!("({})⊗({})", name(&b), name(&a)), format!("({})⊗({})", name(&a), name(&b))))
    } else {
        None
    };
    Ok(SwapReport {
        knot: c.name.clone(),
        hfk_rank: rank,
        nontrivial,
        witness,
        involution: r.mul(&r) == id,
    })
}

fn kron_vec(x: &BitVec, y: &BitVec) -> BitVec {
    let n = y.len();
    BitVec::from_indices(x.len() * n, x.ones().flat_map(|i| y.ones().map(move |j| i * n + j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::*;
    use crate::cfk::{connected_sum, fig8, m946, unknot};

    #[test]
    fn candidates() {
        assert_eq!(find_distinguished_generator(&cfa_whitehead()).unwrap().generators, vec!["b", "d"]);
        assert!(find_distinguished_generator(&cfa_mazur_hat())
            .unwrap()
            .generators
            .contains(&"y4".to_string()));
        for p in 1..=3 {
            let c = find_distinguished_generator(&cfa_cable_p1(p).unwrap()).unwrap();
            assert_eq!(c.generators, vec!["a"]);
        }
        assert_eq!(find_distinguished_generator(&cfa_cable_2_neg1()).unwrap().generators, vec!["X"]);
    }

    #[test]
    fn no_cancel() {
        assert!(no_cancellation_check(&cfa_whitehead(), "b").unwrap().passed);
        assert!(no_cancellation_check(&cfa_mazur_hat(), "y4").unwrap().passed);
        let r = no_cancellation_check(&cfa_cable_2_neg1(), "X").unwrap();
        assert!(!r.passed && r.conservative);
        assert_eq!(r.violators, vec!["m2(A2, ρ2) = X", "m3(A1, ρ2, ρ12) = X"]);
    }

    #[test]
    fn verdicts() {
        let (k, f) = (m946(), morphism_m946_diff());
        // the displayed Whitehead table makes b⊗e + a⊗y³ a boundary even
        // though the no-cancellation criterion passes for b
        let v = distinguish(&cfa_whitehead(), &k, &f).unwrap();
        assert_eq!(v.outcome, Outcome::NotDistinguished);
        assert!(v.criterion_predicts_distinct);
        assert_eq!(v.candidates[0].image, "b⊗e1 + b⊗e2 + a⊗y3_1 + a⊗y3_2");
        let c = &v.candidates[0];
        let b = crate::pairing::box_tensor(&cfa_whitehead(), &cfd_m946()).unwrap();
        assert_eq!(b.boundary(c.bounding_vec.as_ref().unwrap()), c.image_vec);

        let v = distinguish(&cfa_cable_2_neg1(), &k, &f).unwrap();
        assert_eq!(v.outcome, Outcome::NotDistinguished);
        assert!(!v.criterion_predicts_distinct);
        assert!(v.candidates[0].bounding_vec.is_some());

        let v = distinguish(&cfa_longitude(), &k, &f).unwrap();
        assert_eq!(v.outcome, Outcome::Distinct);
        assert_eq!(v.witness.as_deref(), Some("alpha⊗e1 + alpha⊗e2"));

        assert!(matches!(
            distinguish(&cfa_mazur_hat(), &k, &f),
            Err(Error::Unsupported(_))
        ));
        assert!(distinguish(&cfa_whitehead(), &k, &TypeDMorphism::zero()).is_err());
    }

    #[test]
    fn stab() {
        let (k, f) = (m946(), morphism_m946_diff());
        for p in 1..=2 {
            let s = stab_bound(p, &k, &f).unwrap();
            assert!(s.bound.unwrap() >= p as u32, "{s:?}");
        }
        let s = stab_bound(2, &unknot(), &TypeDMorphism::zero()).unwrap();
        assert_eq!((s.torsion_order, s.bound), (TorsionOrder::Finite(0), Some(0)));
    }

    #[test]
    fn swap() {
        let s = swap_action_nontrivial(&fig8()).unwrap();
        assert!(s.nontrivial && s.witness.is_some());
        let s = swap_action_nontrivial(&unknot()).unwrap();
        assert!(!s.nontrivial && s.witness.is_none());
        let ff = connected_sum(&fig8(), &fig8()).unwrap();
        assert!(swap_action_nontrivial(&ff).unwrap().nontrivial);
        assert!(swap_action_nontrivial(&m946()).unwrap().nontrivial);
    }
}
