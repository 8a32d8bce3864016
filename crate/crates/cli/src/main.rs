use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use satfloer::builtins::cfd_unknot;
use satfloer::certificates::{alexander_satellite, conjugacy_orbits, find_homs, LaurentPoly, PermutationHom};
use satfloer::cfk::{build_cfd_default, check_bases, hfk_hat, validate_cfk, CfkComplex};
use satfloer::io::{self, Object};
use satfloer::linalg::{BitVec, TorsionOrder};
use satfloer::pairing::{box_tensor, induced_map};
use satfloer::pipeline::{distinguish, find_distinguished_generator, no_cancellation_check, stab_bound, swap_action_nontrivial};
use satfloer::typea::{validate_type_a, TypeAStructure};
use satfloer::typed::{morphism_space, validate_morphism, validate_type_d, TypeDMorphism, TypeDStructure};
use satfloer::Error;

#[derive(Parser)]
#[command(name = "satfloer", version, about = "Bordered knot Floer computations for satellite slice disks")]
struct Cli {
    /// Largest family instance checked by validators.
    #[arg(long, global = true, default_value_t = 8)]
    cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the validator matching the object's kind.
    Validate {
        object: String,
        /// Source type D structure, for morphisms.
        #[arg(long, default_value = "builtin:cfd_unknot")]
        source: String,
        /// Target type D structure or knot complex, for morphisms.
        #[arg(long)]
        target: Option<String>,
    },
    /// Type D structure of a knot complement.
    Cfd { knot: String },
    /// ĤFK rank and generators.
    Hfk { knot: String },
    /// Box tensor product and its homology.
    Pair {
        pattern: String,
        /// Type D structure or knot complex.
        dside: String,
    },
    /// Chain map induced by a type D morphism.
    Induce {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value = "builtin:cfd_unknot")]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Homotopy classes of type D morphisms.
    Morphisms { source: String, target: String },
    /// No-cancellation criterion for a pattern.
    NoCancel {
        #[arg(long)]
        pattern: String,
        /// Defaults to every distinguished candidate.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Whether a pattern separates the two disks a morphism represents.
    Distinguish {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        knot: String,
        #[arg(long)]
        morphism: String,
    },
    /// U-torsion order of the (p,1)-cabled class.
    StabBound {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        knot: String,
        #[arg(long)]
        morphism: String,
    },
    /// Swap action on ĤFK ⊗ ĤFK.
    Swap { knot: String },
    /// Alexander polynomial of a satellite.
    Alex {
        /// Polynomial file or inline JSON.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        companion: String,
        #[arg(long, allow_hyphen_values = true)]
        winding: i64,
    },
    /// Homomorphisms from a presentation into S_n.
    Pi1Hom {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        surjective: bool,
    },
    /// Write an object in its file format, or as Graphviz.
    Dump {
        object: String,
        #[arg(long)]
        dot: bool,
        /// Dump the box tensor product with this type D side instead.
        #[arg(long)]
        pair: Option<String>,
    },
}

enum Output {
    Json(Value),
    Raw(String),
}

type CmdResult = Result<(Output, bool), Error>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation { .. } | Error::Internal(_) => 1,
        Error::Nontermination(_) => 3,
        _ => 2,
    }
}

fn as_cfk(spec: &str) -> Result<CfkComplex, Error> {
    match io::load(spec)? {
        Object::Cfk(c) => Ok(c),
        o => Err(Error::Invalid(format!("{spec} is a {}, expected a knot complex", o.kind()))),
    }
}

fn as_type_a(spec: &str) -> Result<TypeAStructure, Error> {
    match io::load(spec)? {
        Object::TypeA(a) => Ok(a),
        o => Err(Error::Invalid(format!("{spec} is a {}, expected a type A structure", o.kind()))),
    }
}

/// A type D structure, or the complement of a knot complex.
fn as_type_d(spec: &str) -> Result<TypeDStructure, Error> {
    match io::load(spec)? {
        Object::TypeD(d) => Ok(d),
        Object::Cfk(c) => build_cfd_default(&c),
        o => Err(Error::Invalid(format!("{spec} is a {}, expected a type D structure", o.kind()))),
    }
}

fn as_morphism(spec: &str, n1: &TypeDStructure, n2: &TypeDStructure) -> Result<TypeDMorphism, Error> {
    match io::load(spec)? {
        Object::Morphism(f) => io::resolve_morphism(&f, n1, n2),
        o => Err(Error::Invalid(format!("{spec} is a {}, expected a morphism", o.kind()))),
    }
}

fn as_poly(spec: &str) -> Result<LaurentPoly, Error> {
    let o = if spec.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(spec).map_err(|e| Error::Schema(format!("inline polynomial: {e}")))?;
        io::parse_object(v, "inline")?
    } else {
        io::load(spec)?
    };
    match o {
        Object::Polynomial(p) => Ok(p),
        o => Err(Error::Invalid(format!("{spec} is a {}, expected a polynomial", o.kind()))),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn ok(v: Value) -> CmdResult {
    Ok((Output::Json(v), true))
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Validate { object, source, target } => validate(object, source, target.as_deref(), cli.cap),
        Command::Cfd { knot } => {
            let d = build_cfd_default(&as_cfk(knot)?)?;
            ok(json!({
                "generators": d.len(),
                "iota0": d.count_idem(satfloer::algebra::Idem::I0),
                "iota1": d.count_idem(satfloer::algebra::Idem::I1),
                "edges": d.edges.len(),
                "structure": to_value(&io::typed_to_file(&d)),
            }))
        }
        Command::Hfk { knot } => {
            let c = as_cfk(knot)?;
            let (rank, reps) = hfk_hat(&c)?;
            let names: Vec<String> = reps.iter().map(|r| bits_name(r, &c.generators)).collect();
            ok(json!({"knot": c.name, "rank": rank, "generators": names}))
        }
        Command::Pair { pattern, dside } => {
            let a = as_type_a(pattern)?;
            let d = as_type_d(dside)?;
            let b = box_tensor(&a, &d)?;
            let h = b.homology()?;
            ok(json!({
                "complex": io::box_to_json(&b),
                "homology": {
                    "free_rank": h.free_rank,
                    "torsion_orders": h.torsion_orders,
                    "other_torsion": h.other_torsion.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "representatives": h.representatives.iter().map(|r| b.describe(r)).collect::<Vec<_>>(),
                }
            }))
        }
        Command::Induce { pattern, morphism, source, target } => {
            let a = as_type_a(pattern)?;
            let (n1, n2) = (as_type_d(source)?, as_type_d(target)?);
            let f = as_morphism(morphism, &n1, &n2)?;
            validate_morphism(&f, &n1, &n2).into_result()?;
            let cm = induced_map(&a, &f, &n1, &n2)?;
            let images: serde_json::Map<String, Value> = (0..cm.domain.len())
                .map(|j| {
                    let img = cm.matrix.column(j);
                    (cm.domain.names[j].clone(), Value::String(cm.codomain.describe(&img)))
                })
                .collect();
            ok(json!({
                "domain": cm.domain.name,
                "codomain": cm.codomain.name,
                "commutes": cm.commutes(),
                "images": images,
            }))
        }
        Command::Morphisms { source, target } => {
            let (n1, n2) = (as_type_d(source)?, as_type_d(target)?);
            let sp = morphism_space(&n1, &n2)?;
            let reps: Vec<Value> = sp
                .representatives
                .iter()
                .map(|f| to_value(&io::morphism_to_file(f, &n1, &n2)))
                .collect();
            ok(json!({"dimension": sp.dimension, "cycles": sp.cycles, "representatives": reps}))
        }
        Command::NoCancel { pattern, generator } => {
            let a = as_type_a(pattern)?;
            let gens = match generator {
                Some(g) => vec![g.clone()],
                None => find_distinguished_generator(&a)?.generators,
            };
            let reports = gens
                .iter()
                .map(|g| no_cancellation_check(&a, g))
                .collect::<Result<Vec<_>, _>>()?;
            let passing = reports.iter().find(|r| r.passed).map(|r| r.generator.clone());
            ok(json!({
                "pattern": a.name,
                "passed": passing.is_some(),
                "generator": passing,
                "reports": to_value(&reports),
            }))
        }
        Command::Distinguish { pattern, knot, morphism } => {
            let a = as_type_a(pattern)?;
            let k = as_cfk(knot)?;
            let n2 = build_cfd_default(&k)?;
            let f = as_morphism(morphism, &cfd_unknot(), &n2)?;
            ok(to_value(&distinguish(&a, &k, &f)?))
        }
        Command::StabBound { p, knot, morphism } => {
            let k = as_cfk(knot)?;
            let n2 = build_cfd_default(&k)?;
            let f = as_morphism(morphism, &cfd_unknot(), &n2)?;
            let s = stab_bound(*p, &k, &f)?;
            let order = match s.torsion_order {
                TorsionOrder::Finite(m) => json!(m),
                TorsionOrder::Infinite => json!("infinite"),
            };
            ok(json!({"p": s.p, "knot": s.knot, "class": s.class, "torsion_order": order, "bound": s.bound}))
        }
        Command::Swap { knot } => ok(to_value(&swap_action_nontrivial(&as_cfk(knot)?)?)),
        Command::Alex { pattern, companion, winding } => {
            let (p, k) = (as_poly(pattern)?, as_poly(companion)?);
            let r = alexander_satellite(&p, &k, *winding)?;
            ok(json!({"polynomial": to_value(&r), "text": r.to_string()}))
        }
        Command::Pi1Hom { presentation, degree, surjective } => {
            let pres = match io::load(presentation)? {
                Object::Presentation(p) => p,
                o => return Err(Error::Invalid(format!("{presentation} is a {}, expected a presentation", o.kind()))),
            };
            let homs = find_homs(&pres, *degree, *surjective)?;
            let show = |h: &PermutationHom| -> Value {
                let m: serde_json::Map<String, Value> = h
                    .images
                    .iter()
                    .map(|(g, p)| (g.clone(), Value::String(p.to_string())))
                    .collect();
                Value::Object(m)
            };
            let orbits: Vec<Vec<Value>> = conjugacy_orbits(&homs)
                .iter()
                .map(|o| o.iter().map(show).collect())
                .collect();
            ok(json!({
                "degree": degree,
                "surjective_only": surjective,
                "count": homs.len(),
                "orbit_count": orbits.len(),
                "orbits": orbits,
            }))
        }
        Command::Dump { object, dot, pair } => dump(object, *dot, pair.as_deref()),
    }
}

fn bits_name(v: &BitVec, names: &[String]) -> String {
    let t: Vec<&str> = v.ones().map(|i| names[i].as_str()).collect();
    t.join(" + ")
}

fn validate(object: &str, source: &str, target: Option<&str>, cap: usize) -> CmdResult {
    let (report, passed) = match io::load(object)? {
        Object::Cfk(c) => {
            let r = validate_cfk(&c);
            let mut passed = r.passed();
            let mut v = to_value(&r);
            if let (true, Some(b)) = (passed, &c.bases) {
                let check = check_bases(&c, b);
                passed = check.is_ok();
                v["bases"] = json!(check.err().map(|e| e.to_string()).unwrap_or_else(|| "ok".into()));
            }
            (v, passed)
        }
        Object::TypeD(d) => {
            let r = validate_type_d(&d);
            (to_value(&r), r.passed())
        }
        Object::TypeA(a) => {
            let r = validate_type_a(&a, cap);
            (to_value(&r), r.passed())
        }
        Object::Morphism(f) => {
            let target = target.ok_or_else(|| Error::Invalid("validating a morphism needs --target".into()))?;
            let (n1, n2) = (as_type_d(source)?, as_type_d(target)?);
            let m = io::resolve_morphism(&f, &n1, &n2)?;
            let r = validate_morphism(&m, &n1, &n2);
            (to_value(&r), r.passed())
        }
        Object::Presentation(p) => (json!({"generators": p.generators.len(), "relators": p.relators.len()}), true),
        Object::Polynomial(p) => (json!({"polynomial": p.to_string()}), true),
    };
    let mut v = report;
    v["passed"] = json!(passed);
    Ok((Output::Json(v), passed))
}

fn dump(object: &str, dot: bool, pair: Option<&str>) -> CmdResult {
    let o = io::load(object)?;
    if let Some(d) = pair {
        let Object::TypeA(a) = &o else {
            return Err(Error::Invalid("--pair needs a type A structure".into()));
        };
        let b = box_tensor(a, &as_type_d(d)?)?;
        return Ok(if dot {
            (Output::Raw(io::dot_box(&b)), true)
        } else {
            (Output::Json(io::box_to_json(&b)), true)
        });
    }
    if !dot {
        return ok(io::to_json(&o));
    }
    let s = match &o {
        Object::Cfk(c) => io::dot_cfk(c),
        Object::TypeD(d) => io::dot_type_d(d),
        Object::TypeA(a) => io::dot_type_a(a),
        _ => return Err(Error::Invalid(format!("no Graphviz form for a {}", o.kind()))),
    };
    Ok((Output::Raw(s), true))
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text(x, indent + 1, out);
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        x => x.to_string(),
    }
}

fn emit(cli: &Cli, body: String) -> Result<(), Error> {
    match &cli.out {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, passed) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = match (output, cli.format) {
        (Output::Raw(s), _) => s,
        (Output::Json(v), Format::Json) => serde_json::to_string_pretty(&v).expect("json") + "\n",
        (Output::Json(v), Format::Text) => {
            let mut s = String::new();
            text(&v, 0, &mut s);
            s
        }
    };
    if let Err(e) = emit(&cli, body) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(if passed { 0 } else { 1 })
}
