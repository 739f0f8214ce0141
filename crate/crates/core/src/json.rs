//! The JSON interchange schemas shared by every operation and the CLI.
//!
//! Diagrams: `{"m":int,"n":int,"quotient":"Dbar"|"D","free":int,
//! "edges":[{"t":int,"h":int},...]}` -- for odd `n`, `t`/`h` are
//! tail/head; for even `n`, `t < h` is required and array position is the
//! edge label.  Combos: `{"terms":[{"coeff":"p/q","diagram":{...}},...]}`.
//! Word combos carry a top-level `"side":"bar"|"cobar"` tag and terms
//! `{"coeff":"p/q","word":[diagram,...]}`.  Trees serialize in the
//! diagram schema with every leaf attached to its segment vertex and
//! `"free"` counting internal vertices.

use crate::bar::{BarCombo, CobarCombo, WordCombo};
use crate::context::{Context, Quotient};
use crate::diagram::{Combo, Diagram, DiagramCombo, DualCombo};
use crate::error::{Error, Result};
use crate::lie::BracketExpr;
use crate::rat::{format_q, parse_q};
use crate::tree::{LabeledTree, TreeCanon};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct EdgeJson {
    pub t: usize,
    pub h: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DiagramJson {
    pub m: usize,
    pub n: usize,
    pub quotient: Quotient,
    pub free: usize,
    pub edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ComboTermJson {
    pub coeff: String,
    pub diagram: DiagramJson,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ComboJson {
    pub terms: Vec<ComboTermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct WordTermJson {
    pub coeff: String,
    pub word: Vec<DiagramJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct WordComboJson {
    pub side: String,
    pub terms: Vec<WordTermJson>,
}

pub fn diagram_to_json(d: &Diagram) -> DiagramJson {
    let ctx = d.ctx();
    DiagramJson {
        m: ctx.m,
        n: ctx.n,
        quotient: ctx.quotient,
        free: d.free_count(),
        edges: d.edges().iter().map(|&(t, h)| EdgeJson { t, h }).collect(),
    }
}

pub fn diagram_from_json(j: &DiagramJson) -> Result<Option<Diagram>> {
    let ctx = Context::new(j.m, j.n, j.quotient)?;
    Diagram::new(ctx, j.free, j.edges.iter().map(|e| (e.t, e.h)).collect())
}

fn combo_to_json<S>(x: &Combo<S>) -> ComboJson {
    ComboJson {
        terms: x
            .iter()
            .map(|(d, c)| ComboTermJson { coeff: format_q(c), diagram: diagram_to_json(d) })
            .collect(),
    }
}

pub fn diagram_combo_to_json(x: &DiagramCombo) -> ComboJson {
    combo_to_json(x)
}

pub fn dual_combo_to_json(x: &DualCombo) -> ComboJson {
    combo_to_json(x)
}

fn combo_from_json<S>(j: &ComboJson, default_ctx: Option<Context>) -> Result<Combo<S>> {
    let ctx = match j.terms.first() {
        Some(t) => Context::new(t.diagram.m, t.diagram.n, t.diagram.quotient)?,
        None => default_ctx
            .ok_or_else(|| Error::Parse("empty combo needs an ambient context".into()))?,
    };
    let mut out = Combo::<S>::zero(ctx);
    for t in &j.terms {
        let c = parse_q(&t.coeff)
            .ok_or_else(|| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
        let Some(d) = diagram_from_json(&t.diagram)? else {
            continue; // zero diagram contributes nothing
        };
        if d.ctx() != ctx {
            return Err(Error::ContextMismatch("mixed contexts inside one combo".into()));
        }
        out.add_diagram(&d, &c)?;
    }
    Ok(out)
}

pub fn diagram_combo_from_json(j: &ComboJson, ctx: Option<Context>) -> Result<DiagramCombo> {
    combo_from_json(j, ctx)
}

pub fn dual_combo_from_json(j: &ComboJson, ctx: Option<Context>) -> Result<DualCombo> {
    combo_from_json(j, ctx)
}

fn word_combo_to_json<S>(x: &WordCombo<S>, side: &str) -> WordComboJson {
    WordComboJson {
        side: side.into(),
        terms: x
            .iter()
            .map(|(w, c)| WordTermJson {
                coeff: format_q(c),
                word: w.factors().iter().map(diagram_to_json).collect(),
            })
            .collect(),
    }
}

pub fn bar_combo_to_json(x: &BarCombo) -> WordComboJson {
    word_combo_to_json(x, "bar")
}

pub fn cobar_combo_to_json(x: &CobarCombo) -> WordComboJson {
    word_combo_to_json(x, "cobar")
}

fn word_combo_from_json<S>(
    j: &WordComboJson,
    expect_side: &str,
    default_ctx: Option<Context>,
) -> Result<WordCombo<S>> {
    if j.side != expect_side {
        return Err(Error::Parse(format!(
            "expected side {expect_side:?}, found {:?}",
            j.side
        )));
    }
    let ctx = match j.terms.iter().flat_map(|t| t.word.first()).next() {
        Some(d) => Context::new(d.m, d.n, d.quotient)?,
        None => default_ctx
            .ok_or_else(|| Error::Parse("empty word combo needs an ambient context".into()))?,
    };
    let mut out = WordCombo::<S>::zero(ctx);
    for t in &j.terms {
        let c = parse_q(&t.coeff)
            .ok_or_else(|| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
        let mut raw = Vec::with_capacity(t.word.len());
        let mut zero = false;
        for dj in &t.word {
            match diagram_from_json(dj)? {
                None => {
                    zero = true;
                    break;
                }
                Some(d) => {
                    if d.ctx() != ctx {
                        return Err(Error::ContextMismatch(
                            "mixed contexts inside one word".into(),
                        ));
                    }
                    raw.push(d);
                }
            }
        }
        if !zero {
            out.add_raw(raw, &c)?;
        }
    }
    Ok(out)
}

pub fn bar_combo_from_json(j: &WordComboJson, ctx: Option<Context>) -> Result<BarCombo> {
    word_combo_from_json(j, "bar", ctx)
}

pub fn cobar_combo_from_json(j: &WordComboJson, ctx: Option<Context>) -> Result<CobarCombo> {
    word_combo_from_json(j, "cobar", ctx)
}

/// A tree as a diagram on the ambient strands: each leaf merges into its
/// labeled segment vertex, internal vertices become free vertices, and
/// the orientation data carries over.
pub fn tree_to_json(t: &LabeledTree) -> DiagramJson {
    let ctx = t.ctx();
    let slots = t.leaf_count();
    let map = |v: usize| {
        if v <= slots {
            t.labels()[v - 1]
        } else {
            ctx.m + (v - slots)
        }
    };
    let edges: Vec<EdgeJson> = t
        .graph()
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (mut x, mut y) = (map(a), map(b));
            if !ctx.odd() && x > y {
                std::mem::swap(&mut x, &mut y);
            }
            EdgeJson { t: x, h: y }
        })
        .collect();
    DiagramJson {
        m: ctx.m,
        n: ctx.n,
        quotient: ctx.quotient,
        free: t.internal_count(),
        edges,
    }
}

pub fn tree_from_json(j: &DiagramJson) -> Result<TreeCanon> {
    let Some(d) = diagram_from_json(j)? else {
        return Ok(TreeCanon::Zero);
    };
    crate::tree::tree_from_diagram(&d)
}

/// Parses the nested-array bracket syntax, e.g. `[[3,1],[3,2]]` for the
/// bracket of the generators `B_{3,1}` and `B_{3,2}`.
pub fn bracket_from_value(v: &serde_json::Value) -> Result<BracketExpr> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("bracket expression must be an array".into()))?;
    if arr.len() != 2 {
        return Err(Error::Parse("bracket arrays have exactly two entries".into()));
    }
    match (arr[0].as_u64(), arr[1].as_u64()) {
        (Some(j), Some(i)) => BracketExpr::gen(j as usize, i as usize),
        _ => {
            let a = bracket_from_value(&arr[0])?;
            let b = bracket_from_value(&arr[1])?;
            Ok(BracketExpr::br(a, b))
        }
    }
}

pub fn bracket_from_str(s: &str) -> Result<BracketExpr> {
    let v: serde_json::Value =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bracket syntax: {e}")))?;
    bracket_from_value(&v)
}

pub fn bracket_to_value(b: &BracketExpr) -> serde_json::Value {
    match b {
        BracketExpr::Gen { j, i } => serde_json::json!([j, i]),
        BracketExpr::Br(a, c) => {
            serde_json::json!([bracket_to_value(a), bracket_to_value(c)])
        }
    }
}

// Fuzzing entry points: every parser must reject arbitrary input without
// panicking, and accepted values must round-trip bit-exactly.

pub fn fuzz_diagram_json(data: &[u8]) {
    let Ok(j) = serde_json::from_slice::<DiagramJson>(data) else { return };
    if let Ok(Some(d)) = diagram_from_json(&j) {
        let _ = d.canonicalize();
        let back = diagram_to_json(&d);
        let reparsed = diagram_from_json(&back).expect("printed diagram reparses");
        assert_eq!(reparsed, Some(d));
    }
}

pub fn fuzz_combo_json(data: &[u8]) {
    let Ok(j) = serde_json::from_slice::<ComboJson>(data) else { return };
    if let Ok(x) = diagram_combo_from_json(&j, None) {
        let back = diagram_combo_to_json(&x);
        let y = diagram_combo_from_json(&back, Some(x.ctx())).expect("printed combo reparses");
        assert_eq!(x, y);
    }
}

pub fn fuzz_word_combo_json(data: &[u8]) {
    let Ok(j) = serde_json::from_slice::<WordComboJson>(data) else { return };
    if let Ok(x) = bar_combo_from_json(&j, None) {
        let back = bar_combo_to_json(&x);
        let y = bar_combo_from_json(&back, Some(x.ctx())).expect("printed word combo reparses");
        assert_eq!(x, y);
    }
}

pub fn fuzz_bracket(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(b) = bracket_from_str(s) {
        let back = bracket_to_value(&b).to_string();
        let again = bracket_from_str(&back).expect("printed bracket reparses");
        assert_eq!(b, again);
    }
}

pub fn fuzz_tree_json(data: &[u8]) {
    let Ok(j) = serde_json::from_slice::<DiagramJson>(data) else { return };
    let Ok(TreeCanon::NonZero { key, .. }) = tree_from_json(&j) else { return };
    let back = tree_to_json(&key);
    match tree_from_json(&back).expect("printed tree reparses") {
        TreeCanon::NonZero { key: again, .. } => assert_eq!(key, again),
        TreeCanon::Zero => panic!("canonical tree reparsed as zero"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    fn ctx(m: usize, n: usize) -> Context {
        Context::new(m, n, Quotient::Dbar).unwrap()
    }

    #[test]
    fn diagram_roundtrip() {
        let c = ctx(3, 3);
        let d = Diagram::new_nonzero(c, 1, vec![(1, 4), (2, 4), (3, 4)]).unwrap();
        let j = diagram_to_json(&d);
        assert_eq!(diagram_from_json(&j).unwrap(), Some(d));
    }

    #[test]
    fn combo_roundtrip_bit_exact() {
        let c = ctx(2, 3);
        let d = Diagram::new_nonzero(c, 0, vec![(1, 2)]).unwrap();
        let mut x = DiagramCombo::zero(c);
        x.add_diagram(&d, &crate::rat::qr(-3, 2)).unwrap();
        let s = serde_json::to_string(&diagram_combo_to_json(&x)).unwrap();
        let j: ComboJson = serde_json::from_str(&s).unwrap();
        assert_eq!(diagram_combo_from_json(&j, None).unwrap(), x);
        // printing again gives the identical string
        let s2 =
            serde_json::to_string(&diagram_combo_to_json(&diagram_combo_from_json(&j, None).unwrap()))
                .unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn bracket_syntax() {
        let b = bracket_from_str("[[[3,1],[3,2]],[3,2]]").unwrap();
        assert_eq!(b.length(), 3);
        assert_eq!(b.common_j(), Some(3));
        assert!(bracket_from_str("[3]").is_err());
        assert!(bracket_from_str("3").is_err());
        assert!(bracket_from_str("[[1,3],[2,1]]").is_err()); // i >= j
    }

    #[test]
    fn tree_json_roundtrip() {
        let c = ctx(2, 3);
        let d = Diagram::new_nonzero(c, 1, vec![(1, 3), (1, 3), (2, 3)]).unwrap();
        let TreeCanon::NonZero { key, .. } = crate::tree::tree_from_diagram(&d).unwrap() else {
            panic!()
        };
        let j = tree_to_json(&key);
        let TreeCanon::NonZero { key: again, .. } = tree_from_json(&j).unwrap() else {
            panic!()
        };
        assert_eq!(key, again);
    }

    #[test]
    fn fuzz_entries_are_total_on_garbage() {
        for data in [&b"{}"[..], b"[1,2,3]", b"\xff\xfe", b"{\"m\":0}", b""] {
            fuzz_diagram_json(data);
            fuzz_combo_json(data);
            fuzz_word_combo_json(data);
            fuzz_bracket(data);
            fuzz_tree_json(data);
        }
    }

    #[test]
    fn zero_coefficient_combos() {
        let c = ctx(2, 3);
        let x = DiagramCombo::zero(c);
        let j = diagram_combo_to_json(&x);
        assert!(diagram_combo_from_json(&j, None).is_err());
        assert_eq!(diagram_combo_from_json(&j, Some(c)).unwrap(), x);
        let _ = qi(0);
    }
}
