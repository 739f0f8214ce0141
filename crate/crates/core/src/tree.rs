//! Oriented uni-trivalent trees with leaves labeled in `{1..m}`, modulo
//! the graded AS and IHX relations.  AS is absorbed by canonicalization;
//! IHX is imposed by an explicit relation-matrix quotient per leaf
//! multiset, with normal forms preferring caterpillar trees.
//!
//! A tree is stored as a diagram over a derived context whose segment
//! vertices are the leaf *slots* (one vertex per leaf), plus a label
//! vector assigning a strand in `{1..m}` to each slot.  Slots are pinned:
//! orientation relations act on internal labels, edge directions, and
//! edge orderings only, never on slots.  Slots with equal labels are
//! interchangeable bookkeeping, normalized to the presentation with the
//! least encoding.

use crate::cdga::{contract_edge, edge_sign};
use crate::cobar::blow_ups;
use crate::context::{Context, Quotient};
use crate::diagram::{Canon, Diagram};
use crate::error::{Error, Result};
use crate::lie::BracketExpr;
use crate::lincomb::LinComb;
use crate::linalg::{rref_rank, QMat, Rref};
use crate::rat::{qsign, Q};
use num_traits::Zero;
use itertools::Itertools;

/// A canonical labeled uni-trivalent tree.  `labels[s]` is the strand
/// label of slot `s+1`; the graph's segment vertices are the slots and
/// its free vertices are the internal (trivalent) vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LabeledTree {
    ctx: Context,
    labels: Vec<usize>,
    graph: Diagram,
}

impl LabeledTree {
    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    pub fn internal_count(&self) -> usize {
        self.graph.free_count()
    }

    pub fn graph(&self) -> &Diagram {
        &self.graph
    }

    /// Leaf labels as a sorted multiset.
    pub fn leaf_multiset(&self) -> Vec<usize> {
        let mut v = self.labels.clone();
        v.sort_unstable();
        v
    }

    pub fn is_caterpillar(&self) -> bool {
        let slots = self.labels.len();
        let internal: Vec<usize> =
            (slots + 1..=slots + self.internal_count()).collect();
        internal.iter().all(|&v| {
            self.graph
                .edges()
                .iter()
                .filter(|&&(a, b)| {
                    (a == v && b > slots) || (b == v && a > slots)
                })
                .count()
                <= 2
        })
    }
}

/// Outcome of tree canonicalization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TreeCanon {
    Zero,
    NonZero { key: LabeledTree, sign: i8 },
}

/// Builds and canonicalizes a labeled tree.
///
/// `labels` assigns strands to slots `1..=labels.len()`; `internal` is the
/// number of trivalent internal vertices, numbered after the slots; edges
/// follow the diagram conventions for the parity of `ctx.n`.
pub fn tree_canonicalize(
    ctx: Context,
    labels: &[usize],
    internal: usize,
    edges: Vec<(usize, usize)>,
) -> Result<TreeCanon> {
    let slots = labels.len();
    if slots == 0 {
        return Err(Error::InvalidDiagram("a tree needs at least one leaf".into()));
    }
    for &l in labels {
        if l < 1 || l > ctx.m {
            return Err(Error::InvalidDiagram(format!("leaf label {l} out of range")));
        }
    }
    if edges.len() + 1 != slots + internal {
        return Err(Error::InvalidDiagram("edge count of a tree must be vertices - 1".into()));
    }
    let tree_ctx = Context::new(slots, ctx.n, Quotient::Dbar)?;
    let graph = Diagram::new_nonzero(tree_ctx, internal, edges)?;
    for s in 1..=slots {
        if graph.valence(s) != 1 {
            return Err(Error::InvalidDiagram(format!("leaf slot {s} must have valence 1")));
        }
    }
    for v in slots + 1..=slots + internal {
        if graph.valence(v) != 3 {
            return Err(Error::InvalidDiagram(format!(
                "internal vertex {v} must be trivalent"
            )));
        }
    }
    // connectivity: |E| = |V| - 1 plus every free vertex reaching a slot
    // (checked by Diagram::new) still allows a disconnected chord part;
    // check directly.
    if !is_connected(slots + internal, graph.edges()) {
        return Err(Error::InvalidDiagram("tree must be connected".into()));
    }
    canonicalize_sorted(ctx, labels, &graph)
}

fn is_connected(nv: usize, edges: &[(usize, usize)]) -> bool {
    if nv == 0 {
        return false;
    }
    let mut seen = vec![false; nv + 1];
    let mut stack = vec![1usize];
    seen[1] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            let o = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[o] {
                seen[o] = true;
                stack.push(o);
            }
        }
    }
    (1..=nv).all(|v| seen[v])
}

/// Core canonicalization: sorts slots by label (a signless renaming),
/// minimizes over permutations of equal-label slots (also signless), and
/// within each choice runs the diagram canonicalization over the internal
/// orientation data.
fn canonicalize_sorted(ctx: Context, labels: &[usize], graph: &Diagram) -> Result<TreeCanon> {
    let slots = labels.len();
    // stable sort of slots by label
    let mut order: Vec<usize> = (0..slots).collect();
    order.sort_by_key(|&s| (labels[s], s));
    let sorted_labels: Vec<usize> = order.iter().map(|&s| labels[s]).collect();

    // groups of equal labels, as ranges in the sorted order
    let mut groups: Vec<(usize, usize)> = Vec::new();
    {
        let mut i = 0;
        while i < slots {
            let mut j = i;
            while j < slots && sorted_labels[j] == sorted_labels[i] {
                j += 1;
            }
            groups.push((i, j));
            i = j;
        }
    }

    let base_pos: Vec<usize> = {
        // position of original slot s in the sorted order
        let mut pos = vec![0; slots];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        pos
    };

    let mut best: Option<(Diagram, i8)> = None;
    for assignment in group_permutations(&groups, slots) {
        // slot s (0-based) maps to assignment[base_pos[s]] + 1 (1-based)
        let remap = |v: usize| {
            if v <= slots {
                assignment[base_pos[v - 1]] + 1
            } else {
                v
            }
        };
        let edges: Vec<(usize, usize)> = graph
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (remap(a), remap(b));
                if !ctx.odd() && x > y {
                    (y, x)
                } else {
                    (x, y)
                }
            })
            .collect();
        let g = Diagram::new_nonzero(graph.ctx(), graph.free_count(), edges)?;
        match g.canonicalize()? {
            Canon::Zero => return Ok(TreeCanon::Zero),
            Canon::NonZero { key, sign } => match &best {
                None => best = Some((key, sign)),
                Some((bk, _)) => {
                    if key < *bk {
                        best = Some((key, sign));
                    }
                }
            },
        }
    }
    let (graph, sign) = best.expect("non-empty permutation set");
    Ok(TreeCanon::NonZero {
        key: LabeledTree { ctx, labels: sorted_labels, graph },
        sign,
    })
}

/// All ways of permuting slots within equal-label groups; yields the
/// image position of each sorted-slot index.  Identity first.
fn group_permutations(groups: &[(usize, usize)], slots: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![(0..slots).collect()];
    for &(lo, hi) in groups {
        if hi - lo <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for base in &out {
            for perm in (lo..hi).permutations(hi - lo) {
                let mut a = base.clone();
                for (k, &p) in perm.iter().enumerate() {
                    a[lo + k] = base[p];
                }
                next.push(a);
            }
        }
        out = next;
    }
    out
}

/// A rational combination of canonical trees.
pub type TreeCombo = LinComb<LabeledTree>;

/// The tree of a bracket expression: leaves are the generators' inner
/// indices, the root leaf carries the common outer index, internal
/// vertices are the bracket nodes in innermost-first order, and the
/// orientation is the reference one (edges directed small-to-large for
/// odd `n`, edges ordered lexicographically for even `n`).
pub fn tree_of_bracket(b: &BracketExpr, ctx: Context) -> Result<TreeCombo> {
    b.validate(ctx.m)?;
    let j = b
        .common_j()
        .ok_or_else(|| Error::Domain("bracket mixes outer indices; no single tree".into()))?;
    let gens = b.generators();
    let k = gens.len();
    if k == 1 {
        // a bare generator: a single edge with two leaves
        let key = tree_canonicalize(ctx, &[gens[0].1, j], 0, vec![(1, 2)])?;
        return Ok(match key {
            TreeCanon::Zero => TreeCombo::zero(),
            TreeCanon::NonZero { key, sign } => TreeCombo::singleton(key, qsign(sign)),
        });
    }
    let slots = k + 1; // k generator leaves plus the root leaf
    let mut labels = vec![0usize; slots];
    for (t, (_, i)) in gens.iter().enumerate() {
        labels[t] = *i;
    }
    labels[k] = j;

    // internal vertices numbered in postorder of the bracket tree
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut next_internal = slots;
    let mut next_leaf = 0usize;
    fn walk(
        b: &BracketExpr,
        edges: &mut Vec<(usize, usize)>,
        next_internal: &mut usize,
        next_leaf: &mut usize,
    ) -> usize {
        match b {
            BracketExpr::Gen { .. } => {
                *next_leaf += 1;
                *next_leaf
            }
            BracketExpr::Br(x, y) => {
                let vx = walk(x, edges, next_internal, next_leaf);
                let vy = walk(y, edges, next_internal, next_leaf);
                *next_internal += 1;
                let me = *next_internal;
                edges.push((vx.min(me), vx.max(me)));
                edges.push((vy.min(me), vy.max(me)));
                me
            }
        }
    }
    let top = walk(b, &mut edges, &mut next_internal, &mut next_leaf);
    let root_slot = slots;
    edges.push((root_slot.min(top), root_slot.max(top)));
    edges.sort_unstable();

    match tree_canonicalize(ctx, &labels, k - 1, edges)? {
        TreeCanon::Zero => Ok(TreeCombo::zero()),
        TreeCanon::NonZero { key, sign } => Ok(TreeCombo::singleton(key, qsign(sign))),
    }
}

/// Splits every segment vertex of a uni-trivalent internal-forest diagram
/// into one leaf per incident edge-end, producing a tree.  The orientation
/// data carries over unchanged.
pub fn tree_from_diagram(d: &Diagram) -> Result<TreeCanon> {
    let ctx = d.ctx();
    let m = ctx.m;
    // slot per segment edge-end, in (edge index, end) order
    let mut slot_of_end: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    let mut labels = Vec::new();
    for (idx, &(a, b)) in d.edges().iter().enumerate() {
        if a <= m {
            slot_of_end.insert((idx, 0), labels.len() + 1);
            labels.push(a);
        }
        if b <= m {
            slot_of_end.insert((idx, 1), labels.len() + 1);
            labels.push(b);
        }
    }
    let slots = labels.len();
    let edges: Vec<(usize, usize)> = d
        .edges()
        .iter()
        .enumerate()
        .map(|(idx, &(a, b))| {
            let na = if a <= m { slot_of_end[&(idx, 0)] } else { a - m + slots };
            let nb = if b <= m { slot_of_end[&(idx, 1)] } else { b - m + slots };
            if !ctx.odd() && na > nb {
                (nb, na)
            } else {
                (na, nb)
            }
        })
        .collect();
    tree_canonicalize(ctx, &labels, d.free_count(), edges)
}

/// The IHX relation matrix for one leaf multiset: all canonical trees on
/// the multiset in elimination order, together with one relation row per
/// (tree, internal edge), each row being the blow-up triple of the edge's
/// contraction.
pub struct IhxSystem {
    /// Trees in column order (non-caterpillars first, then caterpillars,
    /// each group by descending encoding, so preferred trees survive as
    /// free columns).
    pub columns: Vec<LabeledTree>,
    pub relations: QMat,
    rref: Rref,
}

impl IhxSystem {
    pub fn quotient_dim(&self) -> usize {
        self.columns.len() - self.rref.rank
    }

    /// The surviving (non-pivot) columns: the preferred quotient basis.
    pub fn basis(&self) -> Vec<&LabeledTree> {
        let pivots: std::collections::BTreeSet<usize> =
            self.rref.pivots.iter().copied().collect();
        (0..self.columns.len())
            .filter(|i| !pivots.contains(i))
            .map(|i| &self.columns[i])
            .collect()
    }

    /// Reduces a combo supported on this multiset to its normal form in
    /// the quotient basis.
    pub fn reduce(&self, x: &TreeCombo) -> TreeCombo {
        let mut vec: Vec<Q> = self
            .columns
            .iter()
            .map(|t| x.coeff(t))
            .collect();
        for (row, &p) in self.rref.pivots.iter().enumerate() {
            let c = vec[p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, v) in self.rref.mat.row(row) {
                let newv = vec[*j].clone() - c.clone() * v.clone();
                vec[*j] = newv;
            }
        }
        let mut out = TreeCombo::zero();
        for (i, t) in self.columns.iter().enumerate() {
            out.add_term(t.clone(), vec[i].clone());
        }
        out
    }
}

/// Enumerates all canonical trees on a leaf multiset and assembles the
/// IHX relation matrix.
pub fn ihx_system(ctx: Context, leaf_multiset: &[usize], cap: u64) -> Result<IhxSystem> {
    ihx_system_preferring(ctx, leaf_multiset, None, cap)
}

/// As [`ihx_system`], but guarantees that `preferred` (when enumerated)
/// is the most-preferred survivor, i.e. lands in any basis it can span.
pub fn ihx_system_preferring(
    ctx: Context,
    leaf_multiset: &[usize],
    preferred: Option<&LabeledTree>,
    cap: u64,
) -> Result<IhxSystem> {
    let l = leaf_multiset.len();
    if l < 1 {
        return Err(Error::Domain("empty leaf multiset".into()));
    }
    if l > 10 {
        return Err(Error::Capacity(format!("{l} leaves exceed the tree enumeration cap")));
    }
    let mut sorted = leaf_multiset.to_vec();
    sorted.sort_unstable();

    // enumerate topologies on l distinct slots by leaf insertion
    let topologies = tree_topologies(l, cap)?;
    let mut keys: std::collections::BTreeSet<LabeledTree> = Default::default();
    for edges in topologies {
        let internal = if l <= 2 { 0 } else { l - 2 };
        match tree_canonicalize(ctx, &sorted, internal, edges)? {
            TreeCanon::Zero => {}
            TreeCanon::NonZero { key, .. } => {
                keys.insert(key);
            }
        }
    }

    // elimination order: non-caterpillars first, then caterpillars, each
    // by descending key, so that lexicographically early caterpillars are
    // the last candidates for pivots
    let mut columns: Vec<LabeledTree> = keys.into_iter().collect();
    columns.sort_by(|a, b| {
        let ca = a.is_caterpillar();
        let cb = b.is_caterpillar();
        ca.cmp(&cb).then(b.cmp(a))
    });
    if let Some(p) = preferred {
        if let Some(pos) = columns.iter().position(|t| t == p) {
            let t = columns.remove(pos);
            columns.push(t);
        }
    }
    let index: std::collections::BTreeMap<&LabeledTree, usize> =
        columns.iter().enumerate().map(|(i, t)| (t, i)).collect();

    let mut rows: Vec<Vec<(usize, Q)>> = Vec::new();
    for t in &columns {
        let slots = t.leaf_count();
        for idx in 0..t.graph().edges().len() {
            let (a, b) = t.graph().edges()[idx];
            if a <= slots || b <= slots {
                continue; // only internal edges give IHX triples
            }
            let row = ihx_row(t, idx)?;
            let mut entries = Vec::new();
            for (tree, c) in row.iter() {
                let col = *index
                    .get(tree)
                    .ok_or_else(|| Error::Domain("IHX row leaves the enumerated span".into()))?;
                entries.push((col, c.clone()));
            }
            if !entries.is_empty() {
                rows.push(entries);
            }
        }
    }
    let relations = QMat::from_rows(columns.len(), rows);
    let rref = rref_rank(&relations);
    Ok(IhxSystem { columns, relations, rref })
}

/// The IHX triple of one internal edge: contract it, then blow the
/// resulting 4-valent vertex up in all three ways, with blow-up signs.
fn ihx_row(t: &LabeledTree, edge_idx: usize) -> Result<TreeCombo> {
    let (eps, contracted) = contract_edge(t.graph(), edge_idx)?;
    let u = contracted.ok_or_else(|| Error::Domain("tree contraction vanished".into()))?;
    // locate the 4-valent vertex
    let slots = t.leaf_count();
    let four = (slots + 1..=slots + u.free_count())
        .find(|&v| u.valence(v) == 4)
        .ok_or_else(|| Error::Domain("no 4-valent vertex after contraction".into()))?;
    let mut row = TreeCombo::zero();
    for bu in blow_ups(&u, Some(four))? {
        let e = edge_sign(&bu.raw, bu.new_edge);
        match canonicalize_sorted(t.ctx(), t.labels(), &bu.raw)? {
            TreeCanon::Zero => {}
            TreeCanon::NonZero { key, sign } => {
                row.add_term(key, qsign(e) * qsign(sign) * qsign(eps));
            }
        }
    }
    Ok(row)
}

/// All tree topologies on `l` labeled leaf slots: slots `1..=l`, internal
/// vertices `l+1..=2l-2`, edges as undirected pairs in a deterministic
/// order.  Built by repeatedly attaching the next leaf to an edge.
fn tree_topologies(l: usize, cap: u64) -> Result<Vec<Vec<(usize, usize)>>> {
    if l == 1 {
        return Err(Error::Domain("a uni-trivalent tree needs at least 2 leaves".into()));
    }
    let count: u64 = (0..l.saturating_sub(2)).map(|k| 2 * k as u64 + 1).product();
    if count > cap {
        return Err(Error::Capacity(format!(
            "{count} tree topologies on {l} leaves exceed cap {cap}"
        )));
    }
    // start with the edge (1,2); attach leaf t by subdividing an edge with
    // a new internal vertex and hanging leaf t from it
    let mut trees: Vec<Vec<(usize, usize)>> = vec![vec![(1, 2)]];
    for t in 3..=l {
        let new_internal = l + (t - 2); // internal vertices come after all slots
        let mut next = Vec::new();
        for tree in &trees {
            for (i, &(a, b)) in tree.iter().enumerate() {
                let mut e2 = tree.clone();
                e2.remove(i);
                e2.push((a.min(new_internal), a.max(new_internal)));
                e2.push((b.min(new_internal), b.max(new_internal)));
                e2.push((t, new_internal));
                e2.sort_unstable();
                next.push(e2);
            }
        }
        trees = next;
    }
    Ok(trees)
}

/// Normal form of a combo modulo IHX, blockwise over leaf multisets.
pub fn tree_normal_form(ctx: Context, x: &TreeCombo, cap: u64) -> Result<TreeCombo> {
    let mut out = TreeCombo::zero();
    let multisets: std::collections::BTreeSet<Vec<usize>> =
        x.iter().map(|(t, _)| t.leaf_multiset()).collect();
    for ms in multisets {
        let sys = ihx_system(ctx, &ms, cap)?;
        let mut block = TreeCombo::zero();
        for (t, c) in x.iter() {
            if t.leaf_multiset() == ms {
                block.add_term(t.clone(), c.clone());
            }
        }
        out.add(&sys.reduce(&block));
    }
    Ok(out)
}

/// The coordinate of `x` on a surviving basis tree.
pub fn tree_pair(ctx: Context, x: &TreeCombo, basis_tree: &LabeledTree, cap: u64) -> Result<Q> {
    let sys = ihx_system(ctx, &basis_tree.leaf_multiset(), cap)?;
    if !sys.basis().iter().any(|t| *t == basis_tree) {
        return Err(Error::Domain("tree is not a pivot-basis element".into()));
    }
    let mut block = TreeCombo::zero();
    for (t, c) in x.iter() {
        if t.leaf_multiset() == basis_tree.leaf_multiset() {
            block.add_term(t.clone(), c.clone());
        }
    }
    Ok(sys.reduce(&block).coeff(basis_tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;
    use num_traits::Signed;

    fn ctx(m: usize, n: usize) -> Context {
        Context::new(m, n, Quotient::Dbar).unwrap()
    }

    #[test]
    fn tripod_tree_canonical() {
        let c = ctx(3, 3);
        let t = tree_canonicalize(c, &[1, 2, 3], 1, vec![(1, 4), (2, 4), (3, 4)]).unwrap();
        assert!(matches!(t, TreeCanon::NonZero { .. }));
    }

    #[test]
    fn repeated_leaf_tripod_not_zero_even_n() {
        let c = ctx(2, 4);
        let t = tree_canonicalize(c, &[1, 1, 2], 1, vec![(1, 4), (2, 4), (3, 4)]).unwrap();
        assert!(
            matches!(t, TreeCanon::NonZero { .. }),
            "slot swap is not an automorphism of the slot-pinned tree"
        );
    }

    #[test]
    fn quotient_dims_are_factorials() {
        // distinct leaves 1..l on m = l strands: dim = (l-2)!
        for l in 3..=5usize {
            for n in [3, 4] {
                let c = ctx(l, n);
                let leaves: Vec<usize> = (1..=l).collect();
                let sys = ihx_system(c, &leaves, 1_000_000).unwrap();
                let expect: usize = (1..=l.saturating_sub(2)).product();
                assert_eq!(sys.quotient_dim(), expect, "l={l} n={n}");
            }
        }
    }

    #[test]
    fn ihx_rows_reduce_to_zero() {
        let c = ctx(4, 3);
        let sys = ihx_system(c, &[1, 2, 3, 4], 1_000_000).unwrap();
        for t in &sys.columns {
            let slots = t.leaf_count();
            for idx in 0..t.graph().edges().len() {
                let (a, b) = t.graph().edges()[idx];
                if a <= slots || b <= slots {
                    continue;
                }
                let row = ihx_row(t, idx).unwrap();
                assert!(sys.reduce(&row).is_zero());
            }
        }
    }

    #[test]
    fn caterpillar_basis_for_four_distinct_leaves() {
        let c = ctx(4, 3);
        let sys = ihx_system(c, &[1, 2, 3, 4], 1_000_000).unwrap();
        assert_eq!(sys.quotient_dim(), 2);
        // T(B_{4;1,2,3}) and T(B_{4;1,3,2}) survive as the basis
        let b123 = BracketExpr::left_normed(4, &[1, 2, 3]).unwrap();
        let b132 = BracketExpr::left_normed(4, &[1, 3, 2]).unwrap();
        for b in [b123, b132] {
            let t = tree_of_bracket(&b, c).unwrap();
            let (tree, coeff) = t.iter().next().unwrap();
            assert!(sys.basis().iter().any(|x| x == &tree), "{b} not a basis tree");
            assert_eq!(coeff.clone().abs(), qi(1));
            assert_eq!(tree_pair(c, &t, tree, 1_000_000).unwrap(), coeff.clone());
        }
    }

    #[test]
    fn bare_generator_tree() {
        let c = ctx(2, 3);
        let b = BracketExpr::gen(2, 1).unwrap();
        let t = tree_of_bracket(&b, c).unwrap();
        assert_eq!(t.len(), 1);
        let (tree, _) = t.iter().next().unwrap();
        assert_eq!(tree.leaf_count(), 2);
        assert_eq!(tree.labels(), &[1, 2]);
        assert_eq!(tree.internal_count(), 0);
    }

    #[test]
    fn split_diagram_to_tree() {
        let c = ctx(2, 3);
        // tripod with doubled leg to strand 1
        let d = Diagram::new_nonzero(c, 1, vec![(1, 3), (1, 3), (2, 3)]).unwrap();
        let TreeCanon::NonZero { key, .. } = tree_from_diagram(&d).unwrap() else {
            panic!()
        };
        assert_eq!(key.labels(), &[1, 1, 2]);
        assert_eq!(key.internal_count(), 1);
    }
}
