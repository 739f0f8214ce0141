//! The dual side: the blow-up differential on dual diagrams, the cobar
//! differential on dual words, the co-shuffle, and the Aut-weighted
//! pairing between the cobar and bar complexes.
//!
//! The blow-up enumeration is the authoritative implementation of the
//! dual differential; the matrix transpose of the contraction
//! differential under the pairing is kept as a test oracle.

use crate::cdga::{contract_edge, edge_sign, product_diagrams};
use crate::context::Context;
use crate::diagram::{Canon, Diagram, DualCombo};
use crate::bar::{BarCombo, CobarCombo, Word};
use crate::error::{Error, Result};
use crate::rat::{qi, qsign, Q};
use num_traits::Zero;

/// One blow-up candidate: the raw blown-up diagram and the index of the
/// new edge inside it.
pub(crate) struct BlowUp {
    pub(crate) raw: Diagram,
    pub(crate) new_edge: usize,
}

/// Enumerates the raw blow-ups of a canonical diagram: for every segment
/// vertex of valence >= 2, every set of >= 2 half-edges that migrates to a
/// new free vertex; for every free vertex of valence >= 4, every unordered
/// 2-partition of its half-edges with both parts >= 2.
pub(crate) fn blow_ups(key: &Diagram, only_vertex: Option<usize>) -> Result<Vec<BlowUp>> {
    let ctx = key.ctx();
    let m = ctx.m;
    let new_label = m + key.free_count() + 1;
    let mut out = Vec::new();

    let half_edges = |v: usize| -> Vec<(usize, usize)> {
        let mut ends = Vec::new();
        for (idx, &(a, b)) in key.edges().iter().enumerate() {
            if a == v {
                ends.push((idx, 0));
            }
            if b == v {
                ends.push((idx, 1));
            }
        }
        ends
    };

    let build = |v: usize, migrate: &[(usize, usize)]| -> Result<Option<BlowUp>> {
        // free labels above the split vertex keep their names; the new
        // vertex takes the next label, and for a free vertex v this means
        // the new edge joins v to the top label
        let mut edges: Vec<(usize, usize)> = key.edges().to_vec();
        for &(idx, end) in migrate {
            if end == 0 {
                edges[idx].0 = new_label;
            } else {
                edges[idx].1 = new_label;
            }
        }
        if !ctx.odd() {
            for e in &mut edges {
                if e.0 > e.1 {
                    std::mem::swap(&mut e.0, &mut e.1);
                }
            }
        }
        let new_edge = edges.len();
        edges.push(if ctx.odd() || v < new_label { (v, new_label) } else { (new_label, v) });
        match Diagram::new(ctx, key.free_count() + 1, edges)? {
            None => Ok(None), // multi-edge in quotient D
            Some(raw) => Ok(Some(BlowUp { raw, new_edge })),
        }
    };

    // segment vertices: ordered partitions, second part migrates
    for v in 1..=m {
        if only_vertex.is_some_and(|w| w != v) {
            continue;
        }
        let ends = half_edges(v);
        if ends.len() < 2 {
            continue;
        }
        for mask in 1u32..(1 << ends.len()) {
            let migrate: Vec<(usize, usize)> = ends
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| *e)
                .collect();
            if migrate.len() < 2 {
                continue;
            }
            if let Some(b) = build(v, &migrate)? {
                out.push(b);
            }
        }
    }

    // free vertices: unordered partitions; the part not containing the
    // first half-edge migrates
    for v in m + 1..=m + key.free_count() {
        if only_vertex.is_some_and(|w| w != v) {
            continue;
        }
        let ends = half_edges(v);
        if ends.len() < 4 {
            continue;
        }
        for mask in 1u32..(1 << (ends.len() - 1)) {
            // bit i of mask decides end i+1; end 0 always stays
            let migrate: Vec<(usize, usize)> = ends
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(i, _)| mask & (1 << (i - 1)) != 0)
                .map(|(_, e)| *e)
                .collect();
            if migrate.len() < 2 || ends.len() - migrate.len() < 2 {
                continue;
            }
            if let Some(b) = build(v, &migrate)? {
                out.push(b);
            }
        }
    }

    Ok(out)
}

/// The blow-up differential on the dual: for each term, sums
/// `eps(G', e) (G')*` over all blow-ups `(G', e)` contracting back to it.
/// Each candidate's sign composes the edge sign with the canonicalization
/// signs of the contraction and of the blown-up diagram itself.
pub fn dual_differential(x: &DualCombo) -> Result<DualCombo> {
    let mut out = DualCombo::zero(x.ctx());
    for (key, c) in x.iter() {
        for bu in blow_ups(key, None)? {
            let eps = edge_sign(&bu.raw, bu.new_edge);
            let (eps_back, contracted) = contract_edge(&bu.raw, bu.new_edge)?;
            debug_assert_eq!(eps, eps_back);
            let Some(back) = contracted else {
                continue;
            };
            let s_c = match back.canonicalize()? {
                Canon::Zero => continue,
                Canon::NonZero { key: k, sign } => {
                    debug_assert_eq!(&k, key, "blow-up does not contract back");
                    sign
                }
            };
            match bu.raw.canonicalize()? {
                Canon::Zero => {}
                Canon::NonZero { key: k, sign } => {
                    out.add_canonical(k, c.clone() * qsign(eps) * qsign(s_c) * qsign(sign));
                }
            }
        }
    }
    Ok(out)
}

/// The reduced coproduct of a canonical diagram: all ordered two-block
/// factorizations, one per subset of internal components.  The signs and
/// the Aut-ratio weights come out of the component bookkeeping.
fn split_terms(key: &Diagram) -> Result<Vec<(Diagram, Diagram, i8)>> {
    let comps = internal_components(key)?;
    let k = comps.len();
    if k < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for mask in 1u32..((1 << k) - 1) {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (i, comp) in comps.iter().enumerate() {
            if mask & (1 << i) != 0 {
                left.push(comp.clone());
            } else {
                right.push(comp.clone());
            }
        }
        let a_raw = multiply_all(key.ctx(), &left)?;
        let b_raw = multiply_all(key.ctx(), &right)?;
        let prod = product_diagrams(&a_raw, &b_raw)?
            .ok_or_else(|| Error::Domain("factor product vanished".into()))?;
        let s_p = match prod.canonicalize()? {
            Canon::Zero => continue,
            Canon::NonZero { key: k2, sign } => {
                debug_assert_eq!(&k2, key);
                sign
            }
        };
        let Canon::NonZero { key: a, sign: s_a } = a_raw.canonicalize()? else {
            continue;
        };
        let Canon::NonZero { key: b, sign: s_b } = b_raw.canonicalize()? else {
            continue;
        };
        out.push((a, b, s_p * s_a * s_b));
    }
    Ok(out)
}

/// The internal components of a diagram: the finest factorization into
/// sub-diagrams sharing no free vertices, each with its orientation data
/// restricted.  A chord is its own component.
fn internal_components(key: &Diagram) -> Result<Vec<Diagram>> {
    let ctx = key.ctx();
    let m = ctx.m;
    let e = key.edge_count();
    let mut parent: Vec<usize> = (0..e + key.free_count()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (i, &(a, b)) in key.edges().iter().enumerate() {
        for v in [a, b] {
            if v > m {
                let (ri, rv) = (find(&mut parent, i), find(&mut parent, e + v - m - 1));
                parent[ri] = rv;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..e {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut comps = Vec::new();
    for (_, edge_idxs) in groups {
        let mut frees: Vec<usize> = Vec::new();
        for &i in &edge_idxs {
            for v in [key.edges()[i].0, key.edges()[i].1] {
                if v > m && !frees.contains(&v) {
                    frees.push(v);
                }
            }
        }
        frees.sort_unstable();
        let rename = |v: usize| {
            if v <= m {
                v
            } else {
                m + 1 + frees.iter().position(|&f| f == v).unwrap()
            }
        };
        let edges: Vec<(usize, usize)> =
            edge_idxs.iter().map(|&i| (rename(key.edges()[i].0), rename(key.edges()[i].1))).collect();
        comps.push(Diagram::new_nonzero(ctx, frees.len(), edges)?);
    }
    Ok(comps)
}

fn multiply_all(ctx: Context, parts: &[Diagram]) -> Result<Diagram> {
    let mut acc = Diagram::unit(ctx);
    for p in parts {
        acc = product_diagrams(&acc, p)?
            .ok_or_else(|| Error::Domain("component product vanished".into()))?;
    }
    Ok(acc)
}

fn sign_pow(deg: isize) -> i8 {
    if deg.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The cobar differential, the exact adjoint of `bar_differential` under
/// [`pair`]: a blow-up part mirroring `delta_B` and a splitting part
/// mirroring `D_B`.
pub fn cobar_differential(x: &CobarCombo) -> Result<CobarCombo> {
    let ctx = x.ctx();
    let mut out = CobarCombo::zero(ctx);
    for (w, c) in x.iter() {
        let mut pref = 1i8;
        for i in 0..w.len() {
            let slot_sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
            let xi = &w.factors()[i];

            // blow-up inside slot i
            let dxi = dual_differential(&DualCombo::from_diagram(xi, &qi(1))?)?;
            for (k, v) in dxi.iter() {
                let mut factors = w.factors().to_vec();
                factors[i] = k.clone();
                out.add_word(
                    Word::from_canonical(ctx, factors),
                    c.clone() * qsign(slot_sign) * qsign(pref) * v.clone(),
                );
            }

            // split slot i into two adjacent factors
            for (a, b, s) in split_terms(xi)? {
                let mut factors = Vec::with_capacity(w.len() + 1);
                factors.extend_from_slice(&w.factors()[..i]);
                factors.push(a.clone());
                factors.push(b);
                factors.extend_from_slice(&w.factors()[i + 1..]);
                let coeff = c.clone()
                    * qsign(slot_sign)
                    * qsign(pref)
                    * qsign(s)
                    * qsign(sign_pow(a.degree()))
                    * qi(-1);
                out.add_word(Word::from_canonical(ctx, factors), coeff);
            }

            pref *= sign_pow(xi.degree());
        }
    }
    Ok(out)
}

/// The Aut-weighted pairing of a cobar combo against a bar combo: zero
/// unless word lengths match, otherwise the product of the factor
/// pairings `<G*, G> = |Aut(G)|` over equal canonical factors.
pub fn pair(x: &CobarCombo, y: &BarCombo) -> Result<Q> {
    if x.ctx() != y.ctx() {
        return Err(Error::ContextMismatch("pairing across different contexts".into()));
    }
    let mut acc = Q::zero();
    for (wx, cx) in x.iter() {
        let cy = y.coeff(wx);
        if cy.is_zero() {
            continue;
        }
        let mut weight = qi(1);
        for f in wx.factors() {
            weight *= qi(f.automorphism_count() as i64);
        }
        acc += cx.clone() * cy * weight;
    }
    Ok(acc)
}

/// Pairing of a dual combo against a diagram combo (length-one case).
pub fn pair_duals(x: &DualCombo, y: &crate::diagram::DiagramCombo) -> Result<Q> {
    if x.ctx() != y.ctx() {
        return Err(Error::ContextMismatch("pairing across different contexts".into()));
    }
    let mut acc = Q::zero();
    for (k, cx) in x.iter() {
        let cy = y.coeff(k);
        if cy.is_zero() {
            continue;
        }
        acc += cx.clone() * cy * qi(k.automorphism_count() as i64);
    }
    Ok(acc)
}

/// Embeds a dual combo as a combination of length-one cobar words.
pub fn as_length_one(x: &DualCombo) -> CobarCombo {
    let mut out = CobarCombo::zero(x.ctx());
    for (k, c) in x.iter() {
        out.add_word(Word::from_canonical(x.ctx(), vec![k.clone()]), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::context::Quotient;
    use crate::diagram::DiagramCombo;

    fn ctx(m: usize, n: usize) -> Context {
        Context::new(m, n, Quotient::Dbar).unwrap()
    }

    fn diag(c: Context, free: usize, edges: &[(usize, usize)]) -> Diagram {
        Diagram::new_nonzero(c, free, edges.to_vec()).unwrap()
    }

    #[test]
    fn blow_up_of_double_chord_is_minus_both_tripods() {
        // the Hopf-map computation: delta*((G21.G21)*) = -G1* - G2*
        let c = ctx(2, 3);
        let dbl = diag(c, 0, &[(1, 2), (1, 2)]);
        let x = DualCombo::from_diagram(&dbl, &qi(1)).unwrap();
        let dx = dual_differential(&x).unwrap();
        assert_eq!(dx.len(), 2);
        let g1 = diag(c, 1, &[(1, 3), (1, 3), (2, 3)]);
        let g2 = diag(c, 1, &[(1, 3), (2, 3), (2, 3)]);
        assert_eq!(dx.coeff(&g1), qi(-1));
        assert_eq!(dx.coeff(&g2), qi(-1));
    }

    #[test]
    fn blow_up_of_single_chord_vanishes() {
        let c = ctx(2, 3);
        let x = DualCombo::from_diagram(&diag(c, 0, &[(1, 2)]), &qi(1)).unwrap();
        assert!(dual_differential(&x).unwrap().is_zero());
    }

    #[test]
    fn four_valent_vertex_blows_to_ihx() {
        // one 4-valent free vertex joined to four distinct strands
        let c = Context::new(4, 3, Quotient::Dbar).unwrap();
        let star = diag(c, 1, &[(1, 5), (2, 5), (3, 5), (4, 5)]);
        let x = DualCombo::from_diagram(&star, &qi(1)).unwrap();
        let dx = dual_differential(&x).unwrap();
        // three ways to split 4 half-edges into 2+2, plus the blow-ups at
        // the segment vertices (valence 1 each: none)
        assert_eq!(dx.len(), 3);
        for (k, v) in dx.iter() {
            assert_eq!(k.free_count(), 2);
            assert_eq!(v.clone().abs(), qi(1));
        }
    }

    #[test]
    fn adjointness_on_small_bases() {
        use crate::cdga::differential;
        use crate::diagram::enumerate_diagrams;
        // <delta* x, G> = <x, delta G> over enumerated adjacent bases
        for n in [3, 4] {
            let c = ctx(2, n);
            // degree-matched pairs (E, v) -> blow-up target (E+1, v+1)
            for (e, v) in [(2usize, 0usize), (3, 1)] {
                let lows = enumerate_diagrams(c, e, v, 100_000).unwrap();
                let highs = enumerate_diagrams(c, e + 1, v + 1, 100_000).unwrap();
                for low in &lows {
                    let x = DualCombo::from_diagram(low, &qi(1)).unwrap();
                    let dx = dual_differential(&x).unwrap();
                    for high in &highs {
                        let g = DiagramCombo::from_diagram(high, &qi(1)).unwrap();
                        let lhs = pair_duals(&dx, &g).unwrap();
                        let rhs = pair_duals(&x, &differential(&g).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "adjointness fails: {low:?} vs {high:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn split_terms_of_double_chord() {
        let c = ctx(2, 3);
        let dbl = diag(c, 0, &[(1, 2), (1, 2)]);
        let splits = split_terms(&dbl).unwrap();
        // two subsets, both giving (chord, chord) with sign +1
        assert_eq!(splits.len(), 2);
        for (a, b, s) in splits {
            assert_eq!(a.edge_count(), 1);
            assert_eq!(b.edge_count(), 1);
            assert_eq!(s, 1);
        }
    }

    #[test]
    fn primitive_iff_no_split() {
        let c = ctx(2, 3);
        let tripod = diag(c, 1, &[(1, 3), (1, 3), (2, 3)]);
        assert!(split_terms(&tripod).unwrap().is_empty());
    }

    #[test]
    fn pairing_basics() {
        let c = ctx(2, 3);
        let g1 = diag(c, 1, &[(1, 3), (1, 3), (2, 3)]);
        let x = as_length_one(&DualCombo::from_diagram(&g1, &qi(1)).unwrap());
        let y = BarCombo::from_word(Word::from_canonical(c, vec![g1.clone()]), qi(1));
        assert_eq!(pair(&x, &y).unwrap(), qi(2));
        // length mismatch pairs to zero
        let y2 = BarCombo::from_word(Word::from_canonical(c, vec![g1.clone(), g1]), qi(1));
        assert_eq!(pair(&x, &y2).unwrap(), qi(0));
    }
}
