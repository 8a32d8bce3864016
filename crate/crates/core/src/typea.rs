//! Type A structures: finite and parametric operation tables over F2 or
//! F2[U], and a bounded check of the A∞ relations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{Basis, Idem, RhoWord};
use crate::error::{Error, Result};
use crate::linalg::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ring {
    F2,
    F2U,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AGen {
    pub name: String,
    pub idem: Idem,
    pub filtration: Option<i64>,
    /// Declared idempotent that no operation can confirm.
    pub passive: bool,
}

/// m_{k+1}(from, word) contains U^upow · to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteOp {
    pub from: usize,
    pub word: RhoWord,
    pub upow: u32,
    pub to: usize,
}

/// One operation per i ≥ 0 with word prefix·repeatⁱ·suffix and U-power α·i + β.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub from: usize,
    pub prefix: RhoWord,
    pub repeat: RhoWord,
    pub suffix: RhoWord,
    pub alpha: u32,
    pub beta: u32,
    pub to: usize,
}

impl Family {
    pub fn instance(&self, i: usize) -> FiniteOp {
        let mut w = self.prefix.0.clone();
        for _ in 0..i {
            w.extend_from_slice(&self.repeat.0);
        }
        w.extend_from_slice(&self.suffix.0);
        FiniteOp {
            from: self.from,
            word: RhoWord(w),
            upow: self.alpha * i as u32 + self.beta,
            to: self.to,
        }
    }

    /// The i for which `word` is an instance, if any.
    pub fn match_word(&self, word: &[Basis]) -> Option<usize> {
        let fixed = self.prefix.len() + self.suffix.len();
        let r = self.repeat.len();
        if word.len() < fixed || r == 0 || (word.len() - fixed) % r != 0 {
            return None;
        }
        let i = (word.len() - fixed) / r;
        let p = self.prefix.len();
        if word[..p] != self.prefix.0[..] || word[word.len() - self.suffix.len()..] != self.suffix.0[..] {
            return None;
        }
        word[p..word.len() - self.suffix.len()]
            .chunks(r)
            .all(|c| c == &self.repeat.0[..])
            .then_some(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAStructure {
    pub name: String,
    pub ring: Ring,
    pub generators: Vec<AGen>,
    pub ops: Vec<FiniteOp>,
    pub families: Vec<Family>,
    /// Partial table: usable for the no-cancellation scan only.
    pub fragment: bool,
}

/// Sum of U^k · generator terms over F2, keyed by generator.
pub type UVec = BTreeMap<usize, UPoly>;

fn add_term(v: &mut UVec, to: usize, upow: u32) {
    let e = v.entry(to).or_insert_with(UPoly::zero);
    *e += &UPoly::monomial(upow);
    if e.is_zero() {
        v.remove(&to);
    }
}

impl TypeAStructure {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn gen_name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn idem(&self, i: usize) -> Idem {
        self.generators[i].idem
    }

    /// m(x, word) as a U-weighted sum of generators, using every finite
    /// operation and every family instance (any i).
    pub fn apply(&self, x: usize, word: &[Basis]) -> UVec {
        let mut out = UVec::new();
        for op in self.ops.iter().filter(|o| o.from == x && o.word.0 == word) {
            add_term(&mut out, op.to, op.upow);
        }
        for f in self.families.iter().filter(|f| f.from == x) {
            if let Some(i) = f.match_word(word) {
                add_term(&mut out, f.to, f.alpha * i as u32 + f.beta);
            }
        }
        out
    }

    /// Finite operations plus family instances for i ≤ cap.
    pub fn instantiate(&self, cap: usize) -> Vec<FiniteOp> {
        let mut all = self.ops.clone();
        for f in &self.families {
            for i in 0..=cap {
                all.push(f.instance(i));
            }
        }
        all
    }

    /// The U = 0 truncation over F2.
    pub fn hat(&self) -> TypeAStructure {
        let mut ops: Vec<FiniteOp> = self.ops.iter().filter(|o| o.upow == 0).cloned().collect();
        let mut families = Vec::new();
        for f in &self.families {
            match (f.alpha, f.beta) {
                (0, 0) => families.push(f.clone()),
                (_, 0) => ops.push(f.instance(0)),
                _ => {}
            }
        }
        TypeAStructure {
            name: format!("{}^", self.name),
            ring: Ring::F2,
            generators: self.generators.clone(),
            ops,
            families,
            fragment: self.fragment,
        }
    }

    /// Level-preserving in the conservative sense: equal levels, or a level
    /// missing on either end.
    pub fn preserves_filtration(&self, from: usize, to: usize) -> bool {
        match (self.generators[from].filtration, self.generators[to].filtration) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AViolation {
    pub generator: String,
    pub word: Vec<String>,
    pub residual: Vec<(String, UPoly)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AReport {
    pub object: String,
    pub cap: usize,
    pub relations_checked: usize,
    pub schema_errors: Vec<String>,
    pub violations: Vec<AViolation>,
}

impl AReport {
    pub fn passed(&self) -> bool {
        self.schema_errors.is_empty() && self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let mut parts = self.schema_errors.clone();
        for v in &self.violations {
            let res: Vec<String> = v.residual.iter().map(|(g, p)| format!("({p})·{g}")).collect();
            parts.push(format!(
                "A∞ relation at ({}, [{}]) leaves {}",
                v.generator,
                v.word.join(","),
                res.join(" + ")
            ));
        }
        Err(Error::validation(self.object, parts.join("; ")))
    }
}

fn check_op(a: &TypeAStructure, from: usize, word: &RhoWord, to: usize, what: &str, errs: &mut Vec<String>) {
    let (src, tgt) = (a.idem(from), a.idem(to));
    let label = format!("{what} {} {} -> {}", a.gen_name(from), word, a.gen_name(to));
    if !word.is_composable() {
        errs.push(format!("{label}: word is not composable"));
        return;
    }
    match word.endpoints() {
        None => {
            if src != tgt {
                errs.push(format!("{label}: m1 must preserve the idempotent"));
            }
        }
        Some((l, r)) => {
            if l != src || r != tgt {
                errs.push(format!(
                    "{label}: word runs {l}->{r} but generators are {src}->{tgt}"
                ));
            }
        }
    }
}

fn schema_errors(a: &TypeAStructure) -> Vec<String> {
    let mut errs = Vec::new();
    let n = a.len();
    let in_range = |i: usize| i < n;
    for op in &a.ops {
        if !in_range(op.from) || !in_range(op.to) {
            errs.push("operation endpoint out of range".into());
            continue;
        }
        if a.ring == Ring::F2 && op.upow != 0 {
            errs.push(format!("F2 module {} has a U-power", a.name));
        }
        check_op(a, op.from, &op.word, op.to, "operation", &mut errs);
    }
    for f in &a.families {
        if !in_range(f.from) || !in_range(f.to) {
            errs.push("family endpoint out of range".into());
            continue;
        }
        if f.repeat.is_empty() {
            errs.push("family with an empty repeat block".into());
            continue;
        }
        if a.ring == Ring::F2 && (f.alpha != 0 || f.beta != 0) {
            errs.push(format!("F2 module {} has a U-power", a.name));
        }
        for i in 0..3 {
            let inst = f.instance(i);
            if inst.word.is_empty() {
                errs.push("family instance with an empty word".into());
                continue;
            }
            check_op(a, f.from, &inst.word, f.to, "family instance", &mut errs);
        }
    }
    errs
}

/// The letter splittings a·b = c used by the relation's product terms.
fn splittings(c: Basis) -> &'static [(Basis, Basis)] {
    use Basis::*;
    match c {
        R12 => &[(R1, R2)],
        R23 => &[(R2, R3)],
        R123 => &[(R1, R23), (R12, R3)],
        _ => &[],
    }
}

/// Evaluates the A∞ relation at (x, word).
pub fn relation_residual(a: &TypeAStructure, x: usize, word: &[Basis]) -> UVec {
    let mut out = UVec::new();
    for i in 0..=word.len() {
        let inner = a.apply(x, &word[..i]);
        for (y, p) in &inner {
            let outer = a.apply(*y, &word[i..]);
            for (z, q) in outer {
                let pq = p * &q;
                let e = out.entry(z).or_insert_with(UPoly::zero);
                *e += &pq;
            }
        }
    }
    for j in 0..word.len().saturating_sub(1) {
        if let Some(prod) = word[j].mul(word[j + 1]) {
            let mut w = word[..j].to_vec();
            w.push(prod);
            w.extend_from_slice(&word[j + 2..]);
            for (z, p) in a.apply(x, &w) {
                let e = out.entry(z).or_insert_with(UPoly::zero);
                *e += &p;
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Checks the A∞ relations that can be nonzero, for words no longer than the
/// longest instantiated operation plus two, with families instantiated up to
/// `cap`.
pub fn validate_type_a(a: &TypeAStructure, cap: usize) -> AReport {
    let mut report = AReport {
        object: a.name.clone(),
        cap,
        schema_errors: schema_errors(a),
        ..Default::default()
    };
    if cap < 2 {
        report.schema_errors.push("verification cap must be at least 2".into());
    }
    if !report.schema_errors.is_empty() {
        return report;
    }
    let ops = a.instantiate(cap);
    let longest = ops.iter().map(|o| o.word.len()).max().unwrap_or(0);
    let limit = longest + 2;
    let mut by_source: Vec<Vec<&FiniteOp>> = vec![Vec::new(); a.len()];
    for op in &ops {
        by_source[op.from].push(op);
    }
    let mut candidates: BTreeSet<(usize, Vec<Basis>)> = BTreeSet::new();
    for op in &ops {
        for next in &by_source[op.to] {
            let mut w = op.word.0.clone();
            w.extend_from_slice(&next.word.0);
            if w.len() <= limit {
                candidates.insert((op.from, w));
            }
        }
        for (k, &c) in op.word.0.iter().enumerate() {
            for &(l, r) in splittings(c) {
                let mut w = op.word.0[..k].to_vec();
                w.push(l);
                w.push(r);
                w.extend_from_slice(&op.word.0[k + 1..]);
                if w.len() <= limit {
                    candidates.insert((op.from, w));
                }
            }
        }
    }
    report.relations_checked = candidates.len();
    for (x, w) in candidates {
        let res = relation_residual(a, x, &w);
        if !res.is_empty() {
            report.violations.push(AViolation {
                generator: a.gen_name(x).to_string(),
                word: w.iter().map(|b| b.label().to_string()).collect(),
                residual: res
                    .into_iter()
                    .map(|(z, p)| (a.gen_name(z).to_string(), p))
                    .collect(),
            });
        }
    }
    report
}

/// Builder used by the builtin tables and the file loader.
pub struct TypeABuilder {
    a: TypeAStructure,
}

impl TypeABuilder {
    pub fn new(name: &str, ring: Ring) -> Self {
        TypeABuilder {
            a: TypeAStructure {
                name: name.to_string(),
                ring,
                generators: Vec::new(),
                ops: Vec::new(),
                families: Vec::new(),
                fragment: false,
            },
        }
    }

    pub fn gen(mut self, name: &str, idem: Idem, filtration: Option<i64>) -> Self {
        self.a.generators.push(AGen {
            name: name.to_string(),
            idem,
            filtration,
            passive: false,
        });
        self
    }

    pub fn fragment(mut self) -> Self {
        self.a.fragment = true;
        self
    }

    fn idx(&self, name: &str) -> Result<usize> {
        self.a
            .index_of(name)
            .ok_or_else(|| Error::Schema(format!("unknown generator '{name}' in {}", self.a.name)))
    }

    pub fn op(mut self, from: &str, word: &[Basis], upow: u32, to: &str) -> Result<Self> {
        let op = FiniteOp {
            from: self.idx(from)?,
            word: RhoWord(word.to_vec()),
            upow,
            to: self.idx(to)?,
        };
        self.a.ops.push(op);
        Ok(self)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn family(
        mut self,
        from: &str,
        prefix: &[Basis],
        repeat: &[Basis],
        suffix: &[Basis],
        alpha: u32,
        beta: u32,
        to: &str,
    ) -> Result<Self> {
        let f = Family {
            from: self.idx(from)?,
            prefix: RhoWord(prefix.to_vec()),
            repeat: RhoWord(repeat.to_vec()),
            suffix: RhoWord(suffix.to_vec()),
            alpha,
            beta,
            to: self.idx(to)?,
        };
        self.a.families.push(f);
        Ok(self)
    }

    /// Marks generators that no operation touches as passive.
    pub fn build(mut self) -> TypeAStructure {
        mark_passive(&mut self.a);
        self.a
    }
}

pub fn mark_passive(a: &mut TypeAStructure) {
    let mut touched = vec![false; a.len()];
    for op in &a.ops {
        touched[op.from] = true;
        touched[op.to] = true;
    }
    for f in &a.families {
        touched[f.from] = true;
        touched[f.to] = true;
    }
    for (g, t) in a.generators.iter_mut().zip(touched) {
        g.passive = !t;
    }
}
