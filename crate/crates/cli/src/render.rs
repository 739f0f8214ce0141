//! Stable line-oriented text rendering for combos, words, and trees.

use braidcx::json::tree_to_json;
use braidcx::rat::format_q;
use braidcx::{BarCombo, CobarCombo, Diagram, DiagramCombo, DualCombo, LabeledTree, TreeCombo};

pub fn render_diagram(d: &Diagram) -> String {
    let ctx = d.ctx();
    let edges: Vec<String> = d.edges().iter().map(|(a, b)| format!("({a},{b})")).collect();
    format!(
        "m={} n={} {:?} free={} edges={}",
        ctx.m,
        ctx.n,
        ctx.quotient,
        d.free_count(),
        if edges.is_empty() { "-".to_string() } else { edges.join("") }
    )
}

pub fn render_diagram_combo(x: &DiagramCombo) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for (d, c) in x.iter() {
        out.push_str(&format!("{} * {}\n", format_q(c), render_diagram(d)));
    }
    out
}

pub fn render_dual_combo(x: &DualCombo) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for (d, c) in x.iter() {
        out.push_str(&format!("{} * {}*\n", format_q(c), render_diagram(d)));
    }
    out
}

fn render_word(factors: &[Diagram]) -> String {
    if factors.is_empty() {
        return "[]".into();
    }
    let parts: Vec<String> = factors.iter().map(render_diagram).collect();
    format!("[{}]", parts.join(" | "))
}

pub fn render_bar_combo(x: &BarCombo) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for (w, c) in x.iter() {
        out.push_str(&format!("{} * {}\n", format_q(c), render_word(w.factors())));
    }
    out
}

pub fn render_cobar_combo(x: &CobarCombo) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for (w, c) in x.iter() {
        out.push_str(&format!("{} * {}*\n", format_q(c), render_word(w.factors())));
    }
    out
}

pub fn render_tree(t: &LabeledTree) -> String {
    let j = tree_to_json(t);
    let labels: Vec<String> = t.labels().iter().map(|l| l.to_string()).collect();
    let edges: Vec<String> = j.edges.iter().map(|e| format!("({},{})", e.t, e.h)).collect();
    format!(
        "leaves=[{}] internal={} edges={}",
        labels.join(","),
        t.internal_count(),
        edges.join("")
    )
}

pub fn render_tree_combo(x: &TreeCombo) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for (t, c) in x.iter() {
        out.push_str(&format!("{} * {}\n", format_q(c), render_tree(t)));
    }
    out
}

/// The iterated-integral transcript of a bar combo: each word prints as
/// an integral of the formality images of its factors, with multi-edge
/// factors flagged as vanishing.
pub fn render_transcript(x: &BarCombo) -> String {
    let mut out = String::new();
    for (w, c) in x.iter() {
        let mut vanishing = Vec::new();
        let factors: Vec<String> = w
            .factors()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if d.classify().has_multi_edge {
                    vanishing.push(i + 1);
                }
                format!("I({})", render_diagram(d))
            })
            .collect();
        out.push_str(&format!("{} \u{222b} {}", format_q(c), factors.join(" ")));
        if !vanishing.is_empty() {
            out.push_str(&format!(
                "   [I vanishes on multi-edge factor{} {}]",
                if vanishing.len() > 1 { "s" } else { "" },
                vanishing.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            ));
        }
        out.push('\n');
    }
    out
}
