//! JSON file formats, builtin lookup and Graphviz output.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Basis, Idem, RhoWord};
use crate::builtins::{builtin, Builtin};
use crate::certificates::{FinitePresentation, LaurentPoly};
use crate::cfk::{ArrowPair, BoxSpec, CfkComplex, CfkEntry, ChainKind, SimplifiedBases};
use crate::error::{Error, Result};
use crate::linalg::{BitVec, F2Matrix};
use crate::pairing::{BoxComplex, BoxComplexExport};
use crate::typea::{mark_passive, AGen, Family, FiniteOp, Ring, TypeAStructure};
use crate::typed::{DEdge, DGen, TypeDMorphism, TypeDStructure};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CfkEntryFile {
    pub from: String,
    pub to: String,
    pub u: u32,
    pub v: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EtaFile {
    pub name: String,
    /// ξ generators summing to this η.
    pub xi: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowFile {
    pub kind: ChainKind,
    /// Generator names: ξ names for vertical arrows, η names for horizontal.
    pub from: String,
    pub to: String,
    pub length: u32,
    pub chain: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasesFile {
    pub xi0: String,
    pub eta0: String,
    pub eta: Vec<EtaFile>,
    pub arrows: Vec<ArrowFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoxesField {
    Count(usize),
    Lengths(Vec<BoxLengths>),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BoxLengths {
    pub h: u32,
    pub v: u32,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CfkFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<Vec<CfkEntryFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boxes: Option<BoxesField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singletons: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<BasesFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedGen {
    pub name: String,
    pub idem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DEdgeFile {
    pub from: String,
    pub rho: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeDFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: Vec<NamedGen>,
    pub edges: Vec<DEdgeFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpFile {
    pub from: String,
    pub word: Vec<String>,
    #[serde(default)]
    pub upow: u32,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub from: String,
    pub prefix: Vec<String>,
    pub repeat: Vec<String>,
    pub suffix: Vec<String>,
    pub alpha: u32,
    pub beta: u32,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeAFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ring: Ring,
    pub generators: Vec<NamedGen>,
    #[serde(default)]
    pub ops: Vec<OpFile>,
    #[serde(default)]
    pub families: Vec<FamilyFile>,
    /// Marks a partial operation table.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fragment: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismEntryFile {
    pub from: String,
    pub alg: String,
    pub to: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MorphismFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub entries: Vec<MorphismEntryFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub presentation: FinitePresentation,
}

/// Anything a command can take as input.
#[derive(Clone, Debug)]
pub enum Object {
    Cfk(CfkComplex),
    TypeD(TypeDStructure),
    TypeA(TypeAStructure),
    /// Names are resolved against a source and target later.
    Morphism(MorphismFile),
    Presentation(FinitePresentation),
    Polynomial(LaurentPoly),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Cfk(_) => "cfk",
            Object::TypeD(_) => "type-d",
            Object::TypeA(_) => "type-a",
            Object::Morphism(_) => "morphism",
            Object::Presentation(_) => "presentation",
            Object::Polynomial(_) => "polynomial",
        }
    }
}

fn parse_idem(s: &str, object: &str) -> Result<Idem> {
    match s {
        "0" => Some(Idem::I0),
        "1" => Some(Idem::I1),
        _ => Idem::parse(s),
    }
    .ok_or_else(|| Error::Schema(format!("{object}: unknown idempotent '{s}'")))
}

fn name_index(names: &[String], object: &str) -> Result<HashMap<String, usize>> {
    let mut idx = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if idx.insert(n.clone(), i).is_some() {
            return Err(Error::Schema(format!("{object}: duplicate generator '{n}'")));
        }
    }
    Ok(idx)
}

fn lookup(idx: &HashMap<String, usize>, name: &str, object: &str) -> Result<usize> {
    idx.get(name)
        .copied()
        .ok_or_else(|| Error::Schema(format!("{object}: unknown generator '{name}'")))
}

fn word(labels: &[String], object: &str) -> Result<RhoWord> {
    RhoWord::parse(labels).map_err(|e| Error::Schema(format!("{object}: {e}")))
}

// ---- CFK ----

pub fn cfk_from_file(f: &CfkFile, default_name: &str) -> Result<CfkComplex> {
    let name = f.name.clone().unwrap_or_else(|| default_name.to_string());
    let mut c = match (&f.generators, &f.diff, &f.boxes) {
        (Some(gens), diff, None) => {
            let idx = name_index(gens, &name)?;
            let entries = diff
                .iter()
                .flatten()
                .map(|e| {
                    Ok(CfkEntry {
                        from: lookup(&idx, &e.from, &name)?,
                        to: lookup(&idx, &e.to, &name)?,
                        u: e.u,
                        v: e.v,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            CfkComplex::new(name.clone(), gens.clone(), entries)
        }
        (None, None, Some(boxes)) => {
            let specs: Vec<BoxSpec> = match boxes {
                BoxesField::Count(n) => vec![BoxSpec::UNIT; *n],
                BoxesField::Lengths(v) => v.iter().map(|b| BoxSpec { h: b.h, v: b.v }).collect(),
            };
            CfkComplex::from_boxes(name.clone(), &specs, f.singletons.unwrap_or(1))
        }
        _ => {
            return Err(Error::Schema(format!(
                "{name}: a CFK file has either generators/diff or boxes/singletons"
            )))
        }
    };
    if let Some(b) = &f.bases {
        c.bases = Some(bases_from_file(b, &c)?);
    }
    Ok(c)
}

fn bases_from_file(b: &BasesFile, c: &CfkComplex) -> Result<SimplifiedBases> {
    let obj = format!("{} bases", c.name);
    let xi = name_index(&c.generators, &obj)?;
    let eta_names: Vec<String> = b.eta.iter().map(|e| e.name.clone()).collect();
    let eta = name_index(&eta_names, &obj)?;
    if eta_names.len() != c.len() {
        return Err(Error::Schema(format!("{obj}: expected {} η vectors", c.len())));
    }
    let rows = b
        .eta
        .iter()
        .map(|e| {
            let mut v = BitVec::zeros(c.len());
            for n in &e.xi {
                v.flip(lookup(&xi, n, &obj)?);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let arrows = b
        .arrows
        .iter()
        .map(|a| {
            let table = match a.kind {
                ChainKind::Vertical => &xi,
                ChainKind::Horizontal => &eta,
            };
            Ok(ArrowPair {
                kind: a.kind,
                from: lookup(table, &a.from, &obj)?,
                to: lookup(table, &a.to, &obj)?,
                length: a.length,
                chain_name: a.chain.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplifiedBases {
        arrows,
        xi0: lookup(&xi, &b.xi0, &obj)?,
        eta0: lookup(&eta, &b.eta0, &obj)?,
        eta_names,
        change_of_basis: F2Matrix::from_rows(c.len(), rows),
    })
}

pub fn cfk_to_file(c: &CfkComplex) -> CfkFile {
    let g = |i: usize| c.generators[i].clone();
    let bases = c.bases.as_ref().map(|b| BasesFile {
        xi0: g(b.xi0),
        eta0: b.eta_names[b.eta0].clone(),
        eta: b
            .eta_names
            .iter()
            .enumerate()
            .map(|(i, n)| EtaFile {
                name: n.clone(),
                xi: b.change_of_basis.row(i).ones().map(g).collect(),
            })
            .collect(),
        arrows: b
            .arrows
            .iter()
            .map(|a| {
                let nm = |i: usize| match a.kind {
                    ChainKind::Vertical => g(i),
                    ChainKind::Horizontal => b.eta_names[i].clone(),
                };
                ArrowFile {
                    kind: a.kind,
                    from: nm(a.from),
                    to: nm(a.to),
                    length: a.length,
                    chain: a.chain_name.clone(),
                }
            })
            .collect(),
    });
    CfkFile {
        name: Some(c.name.clone()),
        generators: Some(c.generators.clone()),
        diff: Some(
            c.entries
                .iter()
                .map(|e| CfkEntryFile {
                    from: g(e.from),
                    to: g(e.to),
                    u: e.u,
                    v: e.v,
                })
                .collect(),
        ),
        boxes: None,
        singletons: None,
        bases,
    }
}

// ---- type D ----

pub fn typed_from_file(f: &TypeDFile, default_name: &str) -> Result<TypeDStructure> {
    let name = f.name.clone().unwrap_or_else(|| default_name.to_string());
    let gens = f
        .generators
        .iter()
        .map(|g| {
            Ok(DGen {
                name: g.name.clone(),
                idem: parse_idem(&g.idem, &name)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    let idx = name_index(&names, &name)?;
    let edges = f
        .edges
        .iter()
        .map(|e| {
            Ok(DEdge {
                from: lookup(&idx, &e.from, &name)?,
                label: Basis::parse(&e.rho)
                    .ok_or_else(|| Error::Schema(format!("{name}: unknown algebra label '{}'", e.rho)))?,
                to: lookup(&idx, &e.to, &name)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TypeDStructure::new(name, gens, edges)
}

pub fn typed_to_file(d: &TypeDStructure) -> TypeDFile {
    TypeDFile {
        name: Some(d.name.clone()),
        generators: d
            .generators
            .iter()
            .map(|g| NamedGen {
                name: g.name.clone(),
                idem: g.idem.label().into(),
                filtration: None,
            })
            .collect(),
        edges: d
            .edges
            .iter()
            .map(|e| DEdgeFile {
                from: d.gen_name(e.from).into(),
                rho: e.label.label().into(),
                to: d.gen_name(e.to).into(),
            })
            .collect(),
    }
}

// ---- type A ----

pub fn typea_from_file(f: &TypeAFile, default_name: &str) -> Result<TypeAStructure> {
    let name = f.name.clone().unwrap_or_else(|| default_name.to_string());
    let generators = f
        .generators
        .iter()
        .map(|g| {
            Ok(AGen {
                name: g.name.clone(),
                idem: parse_idem(&g.idem, &name)?,
                filtration: g.filtration,
                passive: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
    let idx = name_index(&names, &name)?;
    let ops = f
        .ops
        .iter()
        .map(|o| {
            Ok(FiniteOp {
                from: lookup(&idx, &o.from, &name)?,
                word: word(&o.word, &name)?,
                upow: o.upow,
                to: lookup(&idx, &o.to, &name)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let families = f
        .families
        .iter()
        .map(|fm| {
            let repeat = word(&fm.repeat, &name)?;
            if repeat.is_empty() {
                return Err(Error::Schema(format!("{name}: a family needs a nonempty repeat block")));
            }
            Ok(Family {
                from: lookup(&idx, &fm.from, &name)?,
                prefix: word(&fm.prefix, &name)?,
                repeat,
                suffix: word(&fm.suffix, &name)?,
                alpha: fm.alpha,
                beta: fm.beta,
                to: lookup(&idx, &fm.to, &name)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut a = TypeAStructure {
        name,
        ring: f.ring,
        generators,
        ops,
        families,
        fragment: f.fragment,
    };
    mark_passive(&mut a);
    Ok(a)
}

pub fn typea_to_file(a: &TypeAStructure) -> TypeAFile {
    let n = |i: usize| a.gen_name(i).to_string();
    TypeAFile {
        name: Some(a.name.clone()),
        ring: a.ring,
        generators: a
            .generators
            .iter()
            .map(|g| NamedGen {
                name: g.name.clone(),
                idem: g.idem.label().into(),
                filtration: g.filtration,
            })
            .collect(),
        ops: a
            .ops
            .iter()
            .map(|o| OpFile {
                from: n(o.from),
                word: o.word.labels(),
                upow: o.upow,
                to: n(o.to),
            })
            .collect(),
        families: a
            .families
            .iter()
            .map(|f| FamilyFile {
                from: n(f.from),
                prefix: f.prefix.labels(),
                repeat: f.repeat.labels(),
                suffix: f.suffix.labels(),
                alpha: f.alpha,
                beta: f.beta,
                to: n(f.to),
            })
            .collect(),
        fragment: a.fragment,
    }
}

// ---- morphisms ----

/// Resolves names against `n1` and `n2`. The label "1" is the unit when the
/// endpoint idempotents agree and ρ₁ otherwise.
pub fn resolve_morphism(f: &MorphismFile, n1: &TypeDStructure, n2: &TypeDStructure) -> Result<TypeDMorphism> {
    let obj = f.name.clone().unwrap_or_else(|| "morphism".into());
    let mut entries = Vec::new();
    for e in &f.entries {
        let from = n1
            .index_of(&e.from)
            .ok_or_else(|| Error::Schema(format!("{obj}: '{}' is not a generator of {}", e.from, n1.name)))?;
        let to = n2
            .index_of(&e.to)
            .ok_or_else(|| Error::Schema(format!("{obj}: '{}' is not a generator of {}", e.to, n2.name)))?;
        let same = n1.idem(from) == n2.idem(to);
        let label = match e.alg.as_str() {
            "1" if same => n1.idem(from).unit(),
            "unit" => n1.idem(from).unit(),
            s => Basis::parse(s).ok_or_else(|| Error::Schema(format!("{obj}: unknown algebra label '{s}'")))?,
        };
        entries.push(DEdge { from, label, to });
    }
    Ok(TypeDMorphism::new(entries))
}

pub fn morphism_to_file(f: &TypeDMorphism, n1: &TypeDStructure, n2: &TypeDStructure) -> MorphismFile {
    MorphismFile {
        name: None,
        entries: f
            .entries
            .iter()
            .map(|e| MorphismEntryFile {
                from: n1.gen_name(e.from).into(),
                alg: e.label.label().into(),
                to: n2.gen_name(e.to).into(),
            })
            .collect(),
    }
}

// ---- loading ----

pub fn parse_object(v: Value, default_name: &str) -> Result<Object> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema(format!("{default_name}: top level must be a JSON object")))?;
    let has = |k: &str| obj.contains_key(k);
    if has("diff") || has("boxes") {
        let f: CfkFile = from_value(v, default_name)?;
        return Ok(Object::Cfk(cfk_from_file(&f, default_name)?));
    }
    if has("edges") {
        let f: TypeDFile = from_value(v, default_name)?;
        return Ok(Object::TypeD(typed_from_file(&f, default_name)?));
    }
    if has("ring") || has("ops") || has("families") {
        let f: TypeAFile = from_value(v, default_name)?;
        return Ok(Object::TypeA(typea_from_file(&f, default_name)?));
    }
    if has("entries") {
        let mut f: MorphismFile = from_value(v, default_name)?;
        f.name.get_or_insert_with(|| default_name.to_string());
        return Ok(Object::Morphism(f));
    }
    if has("relators") {
        let f: PresentationFile = from_value(v, default_name)?;
        f.presentation.parse_relators()?;
        return Ok(Object::Presentation(f.presentation));
    }
    if has("min_exp") {
        return Ok(Object::Polynomial(from_value(v, default_name)?));
    }
    if has("generators") {
        // a CFK with no differential
        let f: CfkFile = from_value(v, default_name)?;
        return Ok(Object::Cfk(cfk_from_file(&f, default_name)?));
    }
    Err(Error::Schema(format!("{default_name}: cannot tell what kind of object this is")))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, object: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Schema(format!("{object}: {e}")))
}

pub fn builtin_object(name: &str) -> Result<Object> {
    Ok(match builtin(name)? {
        Builtin::Cfk(c) => Object::Cfk(c),
        Builtin::TypeD(d) => Object::TypeD(d),
        Builtin::TypeA(a) => Object::TypeA(a),
        Builtin::Morphism { morphism, source, target } => {
            let mut f = morphism_to_file(&morphism, &source, &target);
            f.name = Some(name.strip_prefix("builtin:").unwrap_or(name).to_string());
            Object::Morphism(f)
        }
        Builtin::Presentation(p) => Object::Presentation(p),
    })
}

/// Loads `builtin:<name>` or a JSON file.
pub fn load(spec: &str) -> Result<Object> {
    if spec.starts_with("builtin:") {
        return builtin_object(spec);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {spec}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{spec}: {e}")))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    parse_object(v, stem)
}

/// The file form of an object, reloadable by `parse_object`.
pub fn to_json(o: &Object) -> Value {
    let r = match o {
        Object::Cfk(c) => serde_json::to_value(cfk_to_file(c)),
        Object::TypeD(d) => serde_json::to_value(typed_to_file(d)),
        Object::TypeA(a) => serde_json::to_value(typea_to_file(a)),
        Object::Morphism(f) => serde_json::to_value(f),
        Object::Presentation(p) => serde_json::to_value(p),
        Object::Polynomial(p) => serde_json::to_value(p),
    };
    r.expect("file structs serialize")
}

pub fn box_to_json(b: &BoxComplex) -> Value {
    serde_json::to_value(BoxComplexExport::from(b)).expect("export serializes")
}

// ---- Graphviz ----

fn q(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn dot_type_d(d: &TypeDStructure) -> String {
    let mut s = format!("digraph {} {{\n", q(&d.name));
    for g in &d.generators {
        let shape = if g.idem == Idem::I0 { "ellipse" } else { "box" };
        let _ = writeln!(s, "  {} [shape={shape}];", q(&g.name));
    }
    for e in &d.edges {
        let _ = writeln!(
            s,
            "  {} -> {} [label={}];",
            q(d.gen_name(e.from)),
            q(d.gen_name(e.to)),
            q(&e.label.to_string())
        );
    }
    s.push_str("}\n");
    s
}

pub fn dot_type_a(a: &TypeAStructure) -> String {
    let mut s = format!("digraph {} {{\n", q(&a.name));
    for g in &a.generators {
        let shape = if g.idem == Idem::I0 { "ellipse" } else { "box" };
        let label = match g.filtration {
            Some(l) => format!("{} [{l}]", g.name),
            None => g.name.clone(),
        };
        let _ = writeln!(s, "  {} [shape={shape}, label={}];", q(&g.name), q(&label));
    }
    let upow = |p: u32| if p == 0 { String::new() } else { format!(" U^{p}") };
    for o in &a.ops {
        let w: Vec<String> = o.word.0.iter().map(|b| b.to_string()).collect();
        let _ = writeln!(
            s,
            "  {} -> {} [label={}];",
            q(a.gen_name(o.from)),
            q(a.gen_name(o.to)),
            q(&format!("{}{}", w.join(" "), upow(o.upow)))
        );
    }
    for f in &a.families {
        let _ = writeln!(
            s,
            "  {} -> {} [style=dashed, label={}];",
            q(a.gen_name(f.from)),
            q(a.gen_name(f.to)),
            q(&format!("{} {}^i {} U^({}i+{})", f.prefix, f.repeat, f.suffix, f.alpha, f.beta))
        );
    }
    s.push_str("}\n");
    s
}

pub fn dot_box(b: &BoxComplex) -> String {
    let mut s = format!("digraph {} {{\n", q(&b.name));
    for n in &b.names {
        let _ = writeln!(s, "  {};", q(n));
    }
    let mut entries: Vec<_> = b.d.entries().collect();
    entries.sort_by_key(|&(i, j, _)| (j, i));
    for (i, j, p) in entries {
        let attr = if p.is_one() {
            String::new()
        } else {
            format!(" [label={}]", q(&p.to_string()))
        };
        let _ = writeln!(s, "  {} -> {}{attr};", q(&b.names[j]), q(&b.names[i]));
    }
    s.push_str("}\n");
    s
}

pub fn dot_cfk(c: &CfkComplex) -> String {
    let mut s = format!("digraph {} {{\n", q(&c.name));
    for g in &c.generators {
        let _ = writeln!(s, "  {};", q(g));
    }
    for e in &c.entries {
        let _ = writeln!(
            s,
            "  {} -> {} [label={}];",
            q(&c.generators[e.from]),
            q(&c.generators[e.to]),
            q(&format!("U^{}V^{}", e.u, e.v))
        );
    }
    s.push_str("}\n");
    s
}
