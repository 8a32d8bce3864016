//! Structures transcribed from worked examples: knot complexes, type D
//! structures of knot complements, pattern modules and the m(9₄₆) morphism.

use crate::algebra::Basis::{self, R1, R12, R123, R2, R23, R3};
use crate::algebra::Idem::{I0, I1};
use crate::certificates::FinitePresentation;
use crate::cfk::{self, CfkComplex};
use crate::error::{Error, Result};
use crate::typea::{Ring, TypeABuilder, TypeAStructure};
use crate::typed::{TypeDMorphism, TypeDStructure};

#[derive(Clone, Debug)]
pub enum Builtin {
    Cfk(CfkComplex),
    TypeD(TypeDStructure),
    TypeA(TypeAStructure),
    Morphism {
        morphism: TypeDMorphism,
        source: TypeDStructure,
        target: TypeDStructure,
    },
    Presentation(FinitePresentation),
}

pub const NAMES: &[&str] = &[
    "unknot",
    "fig8",
    "m946",
    "cfd_unknot",
    "cfd_m946",
    "cfa_longitude",
    "cfa_whitehead",
    "cfa_mazur_hat",
    "cfa_cable_p1(p)",
    "cfa_cable_2_neg1",
    "morphism_m946_diff",
    "positron",
];

/// Looks up a builtin by name; `builtin:` prefixes are stripped.
pub fn builtin(name: &str) -> Result<Builtin> {
    let name = name.strip_prefix("builtin:").unwrap_or(name);
    if let Some(p) = parse_cable_param(name) {
        return Ok(Builtin::TypeA(cfa_cable_p1(p?)?));
    }
    Ok(match name {
        "unknot" => Builtin::Cfk(cfk::unknot()),
        "fig8" => Builtin::Cfk(cfk::fig8()),
        "m946" => Builtin::Cfk(cfk::m946()),
        "cfd_unknot" => Builtin::TypeD(cfd_unknot()),
        "cfd_m946" => Builtin::TypeD(cfd_m946()),
        "cfa_longitude" => Builtin::TypeA(cfa_longitude()),
        "cfa_whitehead" => Builtin::TypeA(cfa_whitehead()),
        "cfa_mazur_hat" => Builtin::TypeA(cfa_mazur_hat()),
        "cfa_cable_2_neg1" => Builtin::TypeA(cfa_cable_2_neg1()),
        "morphism_m946_diff" => Builtin::Morphism {
            morphism: morphism_m946_diff(),
            source: cfd_unknot(),
            target: cfd_m946(),
        },
        "positron" => Builtin::Presentation(crate::certificates::positron()),
        _ => return Err(Error::UnknownBuiltin(name.to_string())),
    })
}

/// Accepts `cfa_cable_p1(3)` and `cfa_cable_p1_3`.
fn parse_cable_param(name: &str) -> Option<Result<usize>> {
    let rest = name.strip_prefix("cfa_cable_p1")?;
    let digits = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| rest.strip_prefix('_'))?;
    Some(
        digits
            .parse::<usize>()
            .map_err(|_| Error::UnknownBuiltin(name.to_string())),
    )
}

pub fn cfd_unknot() -> TypeDStructure {
    TypeDStructure::from_names("cfd_unknot", &[("v", I0)], &[("v", R12, "v")])
        .expect("static table")
}

/// Entered from the displayed diagram, not from the builder.
pub fn cfd_m946() -> TypeDStructure {
    let mut gens: Vec<(String, crate::algebra::Idem)> = Vec::new();
    for i in 1..=2 {
        for g in ["a", "b", "c", "e"] {
            gens.push((format!("{g}{i}"), I0));
        }
    }
    gens.push(("x".into(), I0));
    for i in 1..=2 {
        for y in ["y1", "y2", "y3", "y4"] {
            gens.push((format!("{y}_{i}"), I1));
        }
    }
    let mut edges: Vec<(String, Basis, String)> = Vec::new();
    for i in 1..=2 {
        let g = |s: &str| format!("{s}{i}");
        let y = |s: &str| format!("{s}_{i}");
        edges.push((g("a"), R3, y("y1")));
        edges.push((y("y1"), R2, g("b")));
        edges.push((g("b"), R1, y("y2")));
        edges.push((g("e"), R123, y("y2")));
        edges.push((g("c"), R3, y("y3")));
        edges.push((y("y3"), R2, g("e")));
        edges.push((g("a"), R1, y("y4")));
        edges.push((g("c"), R123, y("y4")));
    }
    edges.push(("x".into(), R12, "x".into()));
    let gens_ref: Vec<(&str, _)> = gens.iter().map(|(n, i)| (n.as_str(), *i)).collect();
    let edges_ref: Vec<(&str, Basis, &str)> = edges
        .iter()
        .map(|(f, l, t)| (f.as_str(), *l, t.as_str()))
        .collect();
    TypeDStructure::from_names("cfd_m946", &gens_ref, &edges_ref).expect("static table")
}

/// v ↦ 1·(e₁+e₂) + ρ₃·(y²₁+y²₂) + ρ₁·(y³₁+y³₂).
pub fn morphism_m946_diff() -> TypeDMorphism {
    let (u, k) = (cfd_unknot(), cfd_m946());
    TypeDMorphism::from_names(
        &u,
        &k,
        &[
            ("v", Basis::I0, "e1"),
            ("v", Basis::I0, "e2"),
            ("v", R3, "y2_1"),
            ("v", R3, "y2_2"),
            ("v", R1, "y3_1"),
            ("v", R1, "y3_2"),
        ],
    )
    .expect("static table")
}

/// One generator and no operations beyond the unit.
pub fn cfa_longitude() -> TypeAStructure {
    TypeABuilder::new("cfa_longitude", Ring::F2)
        .gen("alpha", I0, None)
        .build()
}

pub fn cfa_whitehead() -> TypeAStructure {
    let t = || -> Result<TypeAStructure> {
        Ok(TypeABuilder::new("cfa_whitehead", Ring::F2)
            .gen("c", I1, Some(1))
            .gen("c'", I1, Some(2))
            .gen("b", I0, Some(2))
            .gen("b'", I0, Some(3))
            .gen("a", I1, Some(2))
            .gen("a'", I1, Some(3))
            .gen("d", I0, Some(3))
            .op("c'", &[], 0, "c")?
            .op("b", &[R3, R2, R1], 0, "c")?
            .op("b", &[R1], 0, "a")?
            .op("b'", &[R3, R2, R1], 0, "c'")?
            .op("b'", &[], 0, "b")?
            .op("b'", &[R123], 0, "a")?
            .op("b'", &[R1], 0, "a'")?
            .op("b'", &[R12], 0, "d")?
            .op("a'", &[], 0, "a")?
            .op("a'", &[R23], 0, "a")?
            .op("a'", &[R2], 0, "d")?
            .op("d", &[R3], 0, "a")?
            .build())
    };
    t().expect("static table")
}

/// The U = 0 fragment shown for the Mazur pattern; incomplete by design.
pub fn cfa_mazur_hat() -> TypeAStructure {
    let t = || -> Result<TypeAStructure> {
        Ok(TypeABuilder::new("cfa_mazur_hat", Ring::F2)
            .fragment()
            .gen("x0", I0, None)
            .gen("x1", I1, None)
            .gen("x2", I0, None)
            .gen("x3", I1, None)
            .gen("x4", I0, None)
            .gen("x5", I1, None)
            .gen("x6", I1, None)
            .gen("y1", I1, None)
            .gen("y2", I0, None)
            .gen("y3", I1, None)
            .gen("y4", I0, None)
            .gen("y5", I1, None)
            .gen("y6", I1, None)
            .op("x1", &[R2], 0, "x0")?
            .op("x2", &[R1], 0, "x1")?
            .op("x2", &[R12], 0, "x0")?
            .op("x3", &[R2], 0, "y2")?
            .op("x4", &[R1], 0, "x3")?
            .op("x4", &[R12], 0, "y2")?
            .op("y3", &[R2, R1], 0, "y1")?
            .op("y4", &[R1], 0, "y3")?
            .op("y4", &[R12, R1], 0, "y1")?
            .build())
    };
    t().expect("static table")
}

pub fn cfa_cable_2_neg1() -> TypeAStructure {
    let t = || -> Result<TypeAStructure> {
        Ok(TypeABuilder::new("cfa_cable_2_neg1", Ring::F2)
            .gen("X", I0, None)
            .gen("A1", I1, None)
            .gen("A2", I1, None)
            .gen("B1", I1, None)
            .gen("B2", I1, None)
            .op("A2", &[R2], 0, "X")?
            .op("A2", &[R23], 0, "B2")?
            .op("A1", &[R2, R1], 0, "A2")?
            .op("A1", &[R2, R12], 0, "X")?
            .op("A1", &[R2, R123], 0, "B2")?
            .op("X", &[R3], 0, "B2")?
            .build())
    };
    t().expect("static table")
}

fn rep(letter: Basis, n: usize) -> Vec<Basis> {
    vec![letter; n]
}

/// CFA⁻ of the (p,1)-cable: generators a, b₁, …, b_{2p−2} over F2[U].
pub fn cfa_cable_p1(p: usize) -> Result<TypeAStructure> {
    if p == 0 {
        return Err(Error::Invalid("cable parameter p must be at least 1".into()));
    }
    let b = |j: usize| format!("b{j}");
    let pu = p as u32;
    let mut t = TypeABuilder::new(&format!("cfa_cable_p1({p})"), Ring::F2U).gen("a", I0, None);
    for j in 1..=2 * p - 2 {
        t = t.gen(&b(j), I1, None);
    }
    t = t.family("a", &[R3], &[R23], &[R2], pu, pu, "a")?;
    for j in 0..p.saturating_sub(1) {
        let mut suffix = vec![R2];
        suffix.extend(rep(R12, j));
        suffix.push(R1);
        t = t.family("a", &[R3], &[R23], &suffix, pu, j as u32 + 1, &b(j + 1))?;
    }
    for j in 0..p.saturating_sub(1) {
        let mut w = rep(R12, j);
        w.push(R1);
        t = t.op("a", &w, 0, &b(2 * p - j - 2))?;
    }
    for j in 1..p {
        t = t.op(&b(j), &[], (p - j) as u32, &b(2 * p - j - 1))?;
    }
    for j in 1..p.saturating_sub(1) {
        for i in 0..=(p - j - 2) {
            let mut w = vec![R2];
            w.extend(rep(R12, i));
            w.push(R1);
            t = t.op(&b(j), &w, i as u32 + 1, &b(j + i + 1))?;
        }
    }
    for j in p + 1..=2 * p - 2 {
        for i in 0..=(j - p - 1) {
            let mut w = vec![R2];
            w.extend(rep(R12, i));
            w.push(R1);
            t = t.op(&b(j), &w, 0, &b(j - i - 1))?;
        }
    }
    Ok(t.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::build_cfd_default;
    use crate::typea::validate_type_a;
    use crate::typed::{validate_morphism, validate_type_d};

    #[test]
    fn builtin_type_d_validate() {
        assert!(validate_type_d(&cfd_unknot()).passed());
        assert!(validate_type_d(&cfd_m946()).passed());
        let built = build_cfd_default(&cfk::m946()).unwrap();
        let hand = cfd_m946();
        assert_eq!(built.generators, hand.generators);
        let mut a = built.edges.clone();
        let mut b = hand.edges.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn builtin_type_a_validate() {
        for a in [cfa_longitude(), cfa_whitehead(), cfa_mazur_hat(), cfa_cable_2_neg1()] {
            let r = validate_type_a(&a, 8);
            assert!(r.passed(), "{}: {:?}", a.name, r);
        }
        for p in 1..=4 {
            let a = cfa_cable_p1(p).unwrap();
            let r = validate_type_a(&a, 8);
            assert!(r.passed(), "{}: {:?}", a.name, r);
        }
    }

    #[test]
    fn whitehead_table_shape() {
        let w = cfa_whitehead();
        assert_eq!(w.len(), 7);
        assert_eq!(w.ops.len(), 12);
    }

    #[test]
    fn cable_two_contents() {
        let c = cfa_cable_p1(2).unwrap();
        let (b1, b2) = (c.index_of("b1").unwrap(), c.index_of("b2").unwrap());
        assert!(c.ops.iter().any(|o| o.from == b1 && o.word.is_empty() && o.upow == 1 && o.to == b2));
        let a = c.index_of("a").unwrap();
        assert!(c.ops.iter().any(|o| o.from == a && o.word.0 == vec![R1] && o.to == b2));
    }

    #[test]
    fn morphism_examples() {
        let (u, k) = (cfd_unknot(), cfd_m946());
        assert!(validate_morphism(&morphism_m946_diff(), &u, &k).passed());
        let only_e = TypeDMorphism::from_names(&u, &k, &[("v", Basis::I0, "e1")]).unwrap();
        let r = validate_morphism(&only_e, &u, &k);
        assert!(r.violations.iter().any(|v| v.target == "y2_1" && v.residual == "ρ123"));
    }

    #[test]
    fn names_resolve() {
        assert!(matches!(builtin("builtin:cfa_cable_p1(3)"), Ok(Builtin::TypeA(_))));
        assert!(matches!(builtin("cfa_cable_p1_3"), Ok(Builtin::TypeA(_))));
        assert!(matches!(builtin("nope"), Err(Error::UnknownBuiltin(_))));
    }
}
