//! Diagrams on `m` labeled segment vertices plus free (internal) vertices,
//! with parity-dependent orientation data, canonical forms, automorphism
//! counts, degrees, and exhaustive enumeration.
//!
//! Representation.  Vertices are `1..=m` (segment) and `m+1..=m+free`
//! (free).  For odd `n` an edge `(t, h)` is directed tail-to-head and the
//! edge list is a multiset; the orientation data is the assignment of free
//! labels plus the edge directions.  For even `n` an edge is an unordered
//! pair stored as `(lo, hi)` and the *position* in the edge list is the
//! edge label; free vertices carry no labels of their own.
//!
//! Orientation relations (transposing two free labels, reversing an edge,
//! transposing two edge labels -- each a sign flip) are quotiented out by
//! `canonicalize`, which returns the lexicographically minimal labeled
//! representative together with the relating sign, or `Zero` when the
//! diagram admits an orientation-reversing automorphism.

use crate::context::{Context, Quotient};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::rat::{qsign, Q};
use itertools::Itertools;
use std::marker::PhantomData;

pub type Edge = (usize, usize);

/// Free-vertex count beyond which the exhaustive canonical-form search is
/// refused.  Desk-scale inputs stay far below this.
pub const FREE_VERTEX_CAP: usize = 10;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Diagram {
    ctx: Context,
    free: usize,
    edges: Vec<Edge>,
}

impl Diagram {
    /// Builds a diagram after checking the structural invariants.
    ///
    /// Returns `Ok(None)` for representations of the zero element: a
    /// self-loop, or a repeated vertex pair in quotient `D`.
    pub fn new(ctx: Context, free: usize, edges: Vec<Edge>) -> Result<Option<Diagram>> {
        let nv = ctx.m + free;
        for &(a, b) in &edges {
            if a < 1 || a > nv || b < 1 || b > nv {
                return Err(Error::InvalidDiagram(format!(
                    "edge ({a},{b}) out of range 1..={nv}"
                )));
            }
            if a == b {
                return Ok(None); // self-loop: zero
            }
            if !ctx.odd() && a > b {
                return Err(Error::InvalidDiagram(format!(
                    "even n requires t < h, got ({a},{b})"
                )));
            }
        }
        if ctx.quotient == Quotient::D {
            let mut pairs: Vec<(usize, usize)> =
                edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            pairs.sort_unstable();
            if pairs.windows(2).any(|w| w[0] == w[1]) {
                return Ok(None); // multi-edge in the quotient: zero
            }
        }
        let d = Diagram { ctx, free, edges };
        d.check_valences()?;
        Ok(Some(d))
    }

    /// As `new`, but treats the zero outcomes as errors.  Used where a
    /// genuine diagram is required (parsers funnel through `new`).
    pub fn new_nonzero(ctx: Context, free: usize, edges: Vec<Edge>) -> Result<Diagram> {
        Diagram::new(ctx, free, edges)?
            .ok_or_else(|| Error::InvalidDiagram("diagram is the zero element".into()))
    }

    fn check_valences(&self) -> Result<()> {
        let m = self.ctx.m;
        for f in m + 1..=m + self.free {
            let val = self.valence(f);
            if val < 3 {
                return Err(Error::InvalidDiagram(format!(
                    "free vertex {f} has valence {val} < 3"
                )));
            }
        }
        // every free vertex must reach a segment vertex by an edge path
        if self.free > 0 {
            let nv = m + self.free;
            let mut reach = vec![false; nv + 1];
            let mut stack: Vec<usize> = (1..=m).collect();
            for &s in &stack {
                reach[s] = true;
            }
            while let Some(v) = stack.pop() {
                for &(a, b) in &self.edges {
                    let o = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if !reach[o] {
                        reach[o] = true;
                        stack.push(o);
                    }
                }
            }
            for f in m + 1..=nv {
                if !reach[f] {
                    return Err(Error::InvalidDiagram(format!(
                        "free vertex {f} is not joined to any segment vertex"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn free_count(&self) -> usize {
        self.free
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The empty diagram (the algebra unit).
    pub fn unit(ctx: Context) -> Diagram {
        Diagram { ctx, free: 0, edges: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// Degree `(n-1)|E| - n|V_free|`.
    pub fn degree(&self) -> isize {
        let n = self.ctx.n as isize;
        (n - 1) * self.edges.len() as isize - n * self.free as isize
    }

    pub fn is_chord(&self, edge_idx: usize) -> bool {
        let (a, b) = self.edges[edge_idx];
        a <= self.ctx.m && b <= self.ctx.m
    }

    /// `|Aut|` of the underlying undirected unlabeled multigraph, fixing
    /// every segment vertex.
    pub fn automorphism_count(&self) -> u64 {
        let m = self.ctx.m;
        let base: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).sorted().collect();
        let mut parallel: u64 = 1;
        {
            let mut i = 0;
            while i < base.len() {
                let mut j = i;
                while j < base.len() && base[j] == base[i] {
                    j += 1;
                }
                let mult = (j - i) as u64;
                parallel *= (1..=mult).product::<u64>();
                i = j;
            }
        }
        let free_labels: Vec<usize> = (m + 1..=m + self.free).collect();
        let mut vertex_autos = 0u64;
        for perm in free_labels.iter().copied().permutations(self.free) {
            let relab = |v: usize| if v <= m { v } else { perm[v - m - 1] };
            let imaged: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (relab(a), relab(b));
                    (x.min(y), x.max(y))
                })
                .sorted()
                .collect();
            if imaged == base {
                vertex_autos += 1;
            }
        }
        vertex_autos * parallel
    }

    /// Structural flags used by the primitivity and tree projections.
    pub fn classify(&self) -> Flags {
        let m = self.ctx.m;
        let e = self.edges.len();

        // components of the edge set under "shares a free vertex"
        let mut uf = UnionFind::new(e + self.free);
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a > m {
                uf.union(i, e + (a - m - 1));
            }
            if b > m {
                uf.union(i, e + (b - m - 1));
            }
        }
        let mut comps = std::collections::BTreeSet::new();
        for i in 0..e {
            comps.insert(uf.find(i));
        }
        let internally_connected = e >= 1 && comps.len() == 1;

        // split every segment vertex into one leaf per incident edge-end;
        // the diagram is an internal forest iff no cycle remains
        let mut uf2 = UnionFind::new(self.free + 2 * e);
        let mut acyclic = true;
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let na = if a > m { a - m - 1 } else { self.free + 2 * i };
            let nb = if b > m { b - m - 1 } else { self.free + 2 * i + 1 };
            if !uf2.union(na, nb) {
                acyclic = false;
            }
        }
        let internal_forest = acyclic;

        let unitrivalent_free = (m + 1..=m + self.free).all(|f| self.valence(f) == 3);

        let mut pairs: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let has_multi_edge = pairs.windows(2).any(|w| w[0] == w[1]);

        Flags { internally_connected, internal_forest, unitrivalent_free, has_multi_edge }
    }

    /// Canonical form with sign.
    ///
    /// Minimizes the labeled representative over free-vertex relabelings
    /// together with edge reversals (odd `n`) or edge reorderings (even
    /// `n`), tracking the orientation-relation parity.  Returns `Zero`
    /// exactly when the minimum is attained with both signs, i.e. when the
    /// diagram is isomorphic to its own negative.
    pub fn canonicalize(&self) -> Result<Canon> {
        self.canonicalize_fixing(0)
    }

    /// Canonical form that never relabels the first `fixed_free` free
    /// vertices.  The tree quotient uses this to pin leaf slots; ordinary
    /// diagram code calls `canonicalize`.
    pub(crate) fn canonicalize_fixing(&self, fixed_free: usize) -> Result<Canon> {
        if self.free > FREE_VERTEX_CAP {
            return Err(Error::Capacity(format!(
                "canonical-form search over {} free vertices exceeds the cap {}",
                self.free, FREE_VERTEX_CAP
            )));
        }
        let m = self.ctx.m;
        let movable: Vec<usize> = (m + 1 + fixed_free..=m + self.free).collect();
        let mut best: Option<(Vec<Edge>, i8)> = None;
        let mut zero = false;

        for perm in movable.iter().copied().permutations(movable.len()) {
            let perm_sign = permutation_parity(&movable, &perm);
            let relab = |v: usize| {
                if v <= m + fixed_free {
                    v
                } else {
                    perm[v - m - 1 - fixed_free]
                }
            };
            let (enc, sign) = if self.ctx.odd() {
                let mut flips = 0usize;
                let mut enc: Vec<Edge> = Vec::with_capacity(self.edges.len());
                for &(t, h) in &self.edges {
                    let (t, h) = (relab(t), relab(h));
                    if t > h {
                        flips += 1;
                        enc.push((h, t));
                    } else {
                        enc.push((t, h));
                    }
                }
                enc.sort_unstable();
                (enc, perm_sign * if flips % 2 == 0 { 1 } else { -1 })
            } else {
                let mut enc: Vec<Edge> = self
                    .edges
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (relab(a), relab(b));
                        (x.min(y), x.max(y))
                    })
                    .collect();
                let par = sort_parity(&mut enc);
                match par {
                    // parallel edges: transposing their labels reverses
                    // orientation, so the diagram is zero
                    None => {
                        zero = true;
                        (enc, 1)
                    }
                    Some(s) => (enc, s),
                }
            };
            match &mut best {
                None => best = Some((enc, sign)),
                Some((benc, bsign)) => {
                    if enc < *benc {
                        *benc = enc;
                        *bsign = sign;
                    } else if enc == *benc && sign != *bsign {
                        zero = true;
                    }
                }
            }
        }

        if zero {
            return Ok(Canon::Zero);
        }
        let (enc, sign) = best.expect("at least the identity relabeling");
        let key = Diagram { ctx: self.ctx, free: self.free, edges: enc };
        Ok(Canon::NonZero { key, sign })
    }
}

/// Outcome of `canonicalize`: the input equals `sign * key`, or is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Canon {
    Zero,
    NonZero { key: Diagram, sign: i8 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Flags {
    pub internally_connected: bool,
    pub internal_forest: bool,
    pub unitrivalent_free: bool,
    pub has_multi_edge: bool,
}

/// Parity of the permutation taking `from` to `to` (both sequences of the
/// same distinct elements).
fn permutation_parity(from: &[usize], to: &[usize]) -> i8 {
    let mut idx: Vec<usize> =
        to.iter().map(|x| from.iter().position(|y| y == x).unwrap()).collect();
    let mut sign = 1i8;
    for i in 0..idx.len() {
        while idx[i] != i {
            let j = idx[i];
            idx.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// Sorts in place and returns the parity of the sorting permutation, or
/// `None` when the slice contains duplicates (parity ill-defined).
fn sort_parity<T: Ord + Clone>(v: &mut [T]) -> Option<i8> {
    // insertion sort with inversion count; inputs are tiny
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    /// Returns false when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Enumerates one canonical representative per isomorphism class of
/// diagrams with the given edge and free-vertex counts, excluding classes
/// that are zero by symmetry.  Deterministic order.
pub fn enumerate_diagrams(
    ctx: Context,
    edge_count: usize,
    free_count: usize,
    cap: u64,
) -> Result<Vec<Diagram>> {
    let nv = ctx.m + free_count;
    let pairs: Vec<(usize, usize)> =
        (1..=nv).tuple_combinations().map(|(a, b)| (a, b)).collect();
    let p = pairs.len() as u128;
    let e = edge_count as u128;
    let count = match ctx.quotient {
        Quotient::Dbar => binomial(p + e.saturating_sub(1), e),
        Quotient::D => binomial(p, e),
    };
    if count > cap as u128 {
        return Err(Error::Capacity(format!(
            "enumeration of {count} candidate edge multisets exceeds cap {cap}"
        )));
    }

    let mut keys = std::collections::BTreeSet::new();
    let candidates: Box<dyn Iterator<Item = Vec<(usize, usize)>>> = match ctx.quotient {
        Quotient::Dbar => {
            Box::new(pairs.iter().copied().combinations_with_replacement(edge_count))
        }
        Quotient::D => Box::new(pairs.iter().copied().combinations(edge_count)),
    };
    for edges in candidates {
        let Ok(Some(d)) = Diagram::new(ctx, free_count, edges) else {
            continue;
        };
        if let Canon::NonZero { key, .. } = d.canonicalize()? {
            keys.insert(key);
        }
    }
    Ok(keys.into_iter().collect())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Marker for combos of plain diagrams (elements of the algebra).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Primal {}
/// Marker for combos of dual diagrams (functionals `Γ*`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dual {}

/// A finite rational combination of canonical diagrams.  The `Side`
/// marker separates elements of the algebra from elements of its dual
/// under the Aut-weighted pairing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Combo<Side> {
    ctx: Context,
    terms: LinComb<Diagram>,
    _side: PhantomData<Side>,
}

pub type DiagramCombo = Combo<Primal>;
pub type DualCombo = Combo<Dual>;

impl<Side> Combo<Side> {
    pub fn zero(ctx: Context) -> Self {
        Combo { ctx, terms: LinComb::zero(), _side: PhantomData }
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * d`, canonicalizing `d` and folding the sign into the
    /// coefficient.  Zero diagrams contribute nothing.
    pub fn add_diagram(&mut self, d: &Diagram, c: &Q) -> Result<()> {
        if d.ctx() != self.ctx {
            return Err(Error::ContextMismatch("combo and diagram contexts differ".into()));
        }
        match d.canonicalize()? {
            Canon::Zero => {}
            Canon::NonZero { key, sign } => {
                self.terms.add_term(key, c.clone() * qsign(sign));
            }
        }
        Ok(())
    }

    /// Adds `c * key` for an already-canonical key.
    pub fn add_canonical(&mut self, key: Diagram, c: Q) {
        debug_assert_eq!(key.ctx, self.ctx);
        self.terms.add_term(key, c);
    }

    pub fn from_diagram(d: &Diagram, c: &Q) -> Result<Self> {
        let mut combo = Self::zero(d.ctx());
        combo.add_diagram(d, c)?;
        Ok(combo)
    }

    pub fn coeff(&self, key: &Diagram) -> Q {
        self.terms.coeff(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Diagram, &Q)> {
        self.terms.iter()
    }

    pub fn add(&mut self, other: &Self) {
        debug_assert_eq!(self.ctx, other.ctx);
        self.terms.add(&other.terms);
    }

    pub fn sub(&mut self, other: &Self) {
        debug_assert_eq!(self.ctx, other.ctx);
        self.terms.sub(&other.terms);
    }

    pub fn scale(&mut self, c: &Q) {
        self.terms.scale(c);
    }

    pub fn scaled(mut self, c: &Q) -> Self {
        self.scale(c);
        self
    }

    /// All terms share one degree?  Returns it if so.
    pub fn homogeneous_degree(&self) -> Option<isize> {
        let mut it = self.terms.keys();
        let first = it.next()?.degree();
        if it.all(|k| k.degree() == first) {
            Some(first)
        } else {
            None
        }
    }

    /// The terms of one fixed degree.
    pub fn degree_slice(&self, degree: isize) -> Self {
        let mut out = Self::zero(self.ctx);
        for (k, v) in self.iter() {
            if k.degree() == degree {
                out.add_canonical(k.clone(), v.clone());
            }
        }
        out
    }

    /// Transport along the basis isomorphism between the algebra and its
    /// dual (same canonical keys, same coefficients).
    pub fn transport<Other>(&self) -> Combo<Other> {
        Combo { ctx: self.ctx, terms: self.terms.clone(), _side: PhantomData }
    }
}

impl DualCombo {
    pub fn into_primal(&self) -> DiagramCombo {
        self.transport()
    }
}

impl DiagramCombo {
    pub fn into_dual(&self) -> DualCombo {
        self.transport()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    pub(crate) fn ctx(m: usize, n: usize, q: Quotient) -> Context {
        Context::new(m, n, q).unwrap()
    }

    fn diag(c: Context, free: usize, edges: &[Edge]) -> Diagram {
        Diagram::new_nonzero(c, free, edges.to_vec()).unwrap()
    }

    #[test]
    fn chord_reversal_gives_sign() {
        let c = ctx(2, 3, Quotient::Dbar);
        let d = diag(c, 0, &[(2, 1)]);
        match d.canonicalize().unwrap() {
            Canon::NonZero { key, sign } => {
                assert_eq!(key.edges(), &[(1, 2)]);
                assert_eq!(sign, -1);
            }
            Canon::Zero => panic!("chord is not zero"),
        }
    }

    #[test]
    fn free_label_swap_gives_sign() {
        let c = ctx(2, 3, Quotient::Dbar);
        let canonical = diag(c, 2, &[(1, 3), (1, 3), (2, 4), (2, 4), (3, 4)]);
        match canonical.canonicalize().unwrap() {
            Canon::NonZero { key, sign } => {
                assert_eq!(key, canonical);
                assert_eq!(sign, 1);
            }
            _ => panic!(),
        }
        // same diagram with free labels 3,4 swapped (and the spine edge
        // written 4 -> 3)
        let swapped = diag(c, 2, &[(1, 4), (1, 4), (2, 3), (2, 3), (4, 3)]);
        match swapped.canonicalize().unwrap() {
            Canon::NonZero { key, sign } => {
                assert_eq!(key, canonical);
                assert_eq!(sign, -1);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn double_chord_even_n_is_zero() {
        let c = ctx(2, 4, Quotient::Dbar);
        let d = diag(c, 0, &[(1, 2), (1, 2)]);
        assert_eq!(d.canonicalize().unwrap(), Canon::Zero);
    }

    #[test]
    fn double_chord_odd_n_is_not_zero() {
        let c = ctx(2, 3, Quotient::Dbar);
        let d = diag(c, 0, &[(1, 2), (1, 2)]);
        assert!(matches!(d.canonicalize().unwrap(), Canon::NonZero { sign: 1, .. }));
    }

    #[test]
    fn canonicalize_idempotent() {
        let c = ctx(3, 3, Quotient::Dbar);
        let d = diag(c, 1, &[(3, 4), (1, 4), (2, 4)]);
        let Canon::NonZero { key, .. } = d.canonicalize().unwrap() else { panic!() };
        let Canon::NonZero { key: key2, sign } = key.canonicalize().unwrap() else { panic!() };
        assert_eq!(key, key2);
        assert_eq!(sign, 1);
    }

    #[test]
    fn automorphism_counts() {
        let c = ctx(2, 3, Quotient::Dbar);
        assert_eq!(diag(c, 0, &[(1, 2)]).automorphism_count(), 1);
        // tripod with a doubled leg to strand 1
        assert_eq!(diag(c, 1, &[(1, 3), (1, 3), (2, 3)]).automorphism_count(), 2);
        // double chord
        assert_eq!(diag(c, 0, &[(1, 2), (1, 2)]).automorphism_count(), 2);
    }

    #[test]
    fn degrees() {
        let c2 = ctx(2, 3, Quotient::Dbar);
        let c3 = ctx(3, 3, Quotient::Dbar);
        assert_eq!(diag(c2, 0, &[(1, 2)]).degree(), 2);
        assert_eq!(diag(c3, 1, &[(1, 4), (2, 4), (3, 4)]).degree(), 3);
        // H-diagram: 5 edges, 2 free vertices
        let h = diag(c3, 2, &[(1, 4), (2, 4), (4, 5), (2, 5), (3, 5)]);
        assert_eq!(h.degree(), 4);
    }

    #[test]
    fn self_loop_is_zero() {
        let c = ctx(2, 3, Quotient::Dbar);
        assert!(Diagram::new(c, 1, vec![(3, 3), (1, 3), (2, 3)]).unwrap().is_none());
    }

    #[test]
    fn multi_edge_in_quotient_d_is_zero() {
        let c = ctx(2, 3, Quotient::D);
        assert!(Diagram::new(c, 0, vec![(1, 2), (1, 2)]).unwrap().is_none());
    }

    #[test]
    fn invalid_valence_rejected() {
        let c = ctx(2, 3, Quotient::Dbar);
        assert!(Diagram::new(c, 1, vec![(1, 3), (2, 3)]).is_err());
    }

    #[test]
    fn disconnected_free_vertex_rejected() {
        let c = ctx(2, 5, Quotient::Dbar);
        // two free vertices joined only to each other (valences 3,3)
        let r = Diagram::new(c, 2, vec![(3, 4), (3, 4), (3, 4)]);
        assert!(r.is_err());
    }

    #[test]
    fn classify_flags() {
        let c3 = ctx(3, 3, Quotient::Dbar);
        let tripod = diag(c3, 1, &[(1, 4), (2, 4), (3, 4)]);
        let f = tripod.classify();
        assert!(f.internally_connected && f.internal_forest && f.unitrivalent_free);
        assert!(!f.has_multi_edge);

        let two_chords = diag(c3, 0, &[(1, 2), (1, 3)]);
        assert!(!two_chords.classify().internally_connected);

        let c2 = ctx(2, 3, Quotient::Dbar);
        // two free vertices joined by a double edge, one leg to each strand
        let looped = diag(c2, 2, &[(3, 4), (3, 4), (1, 3), (2, 4)]);
        let f = looped.classify();
        assert!(f.internally_connected);
        assert!(!f.internal_forest);
        assert!(f.has_multi_edge);
    }

    #[test]
    fn enumerate_small() {
        let c = ctx(2, 3, Quotient::Dbar);
        let ds = enumerate_diagrams(c, 1, 0, 10_000).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].edges(), &[(1, 2)]);

        let cd = ctx(2, 3, Quotient::D);
        assert!(enumerate_diagrams(cd, 2, 0, 10_000).unwrap().is_empty());

        let c3 = ctx(3, 3, Quotient::Dbar);
        let ds = enumerate_diagrams(c3, 3, 1, 100_000).unwrap();
        let tripod = diag(c3, 1, &[(1, 4), (2, 4), (3, 4)]);
        assert!(ds.contains(&tripod));
    }

    #[test]
    fn enumerate_capacity_error() {
        let c = ctx(3, 3, Quotient::Dbar);
        assert!(matches!(enumerate_diagrams(c, 6, 3, 10), Err(Error::Capacity(_))));
    }

    #[test]
    fn combo_add_folds_signs() {
        let c = ctx(2, 3, Quotient::Dbar);
        let mut combo = DiagramCombo::zero(c);
        combo.add_diagram(&diag(c, 0, &[(2, 1)]), &qi(1)).unwrap();
        combo.add_diagram(&diag(c, 0, &[(1, 2)]), &qi(1)).unwrap();
        assert!(combo.is_zero());
    }
}
