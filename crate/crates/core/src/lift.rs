//! Lifting primitive cocycles to full bar cocycles by solving the zig-zag
//! system `delta_B z^(i) = D_B z^(i+1)`, plus the bases, the cocycle
//! verifier, the homotopy pairing, and primitive-homology dimensions.

use crate::bar::{
    bar_differential, bar_homological_differential, bar_internal_differential, BarCombo, Word,
};
use crate::cdga::reduced_differential;
use crate::cobar::{as_length_one, dual_differential, pair};
use crate::context::Context;
use crate::diagram::{enumerate_diagrams, Diagram, DiagramCombo, DualCombo};
use crate::error::{Error, Result};
use crate::lie::{BracketExpr, Convention};
use crate::linalg::{rref_rank, solve, QMat, Solution};
use crate::rat::{qi, Q};
use crate::theta::{theta, Caps};
use num_traits::Zero;

/// All canonical diagrams of one degree, scanned over the finite blocks
/// `E - v = c` with at most `caps.max_free` free vertices.
pub fn diagrams_by_degree(ctx: Context, degree: isize, caps: Caps) -> Result<Vec<Diagram>> {
    let n = ctx.n as isize;
    let mut out = Vec::new();
    for c in 0.. {
        let v = (n - 1) * c - degree;
        if v > caps.max_free as isize {
            break;
        }
        if v < 0 {
            continue;
        }
        let e = c + v;
        if e < 1 {
            continue;
        }
        out.extend(enumerate_diagrams(ctx, e as usize, v as usize, caps.candidates)?);
    }
    Ok(out)
}

/// All canonical bar words of length `p` and internal degree `q`, in a
/// deterministic order.
pub fn bar_basis(ctx: Context, p: usize, q: isize, caps: Caps) -> Result<Vec<Word>> {
    if p == 0 {
        return Ok(if q == 0 { vec![Word::empty(ctx)] } else { vec![] });
    }
    // the minimal diagram degree bounds the compositions
    let mut min_deg = isize::MAX;
    for d in 1..=q {
        if !diagrams_by_degree(ctx, d, caps)?.is_empty() {
            min_deg = d;
            break;
        }
    }
    if min_deg == isize::MAX || q < min_deg * p as isize {
        return Ok(vec![]);
    }
    let mut per_degree: std::collections::BTreeMap<isize, Vec<Diagram>> = Default::default();
    let mut words: Vec<Word> = Vec::new();
    let mut stack: Vec<(Vec<Diagram>, isize)> = vec![(Vec::new(), q)];
    while let Some((prefix, rest)) = stack.pop() {
        if prefix.len() == p {
            if rest == 0 {
                words.push(Word::from_canonical(ctx, prefix));
            }
            continue;
        }
        let slots_left = (p - prefix.len()) as isize;
        for d in min_deg..=rest - min_deg * (slots_left - 1) {
            let ds = match per_degree.entry(d) {
                std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(diagrams_by_degree(ctx, d, caps)?)
                }
            };
            for diag in ds.clone() {
                let mut pre = prefix.clone();
                pre.push(diag);
                stack.push((pre, rest - d));
            }
        }
    }
    words.sort();
    Ok(words)
}

/// Lifts a primitive cocycle `z0` (with vanishing reduced differential)
/// to a bar cocycle `z` with `z^(1) = z0`, solving each zig-zag stage by
/// exact linear algebra.  Among solutions, free variables are zeroed in
/// the deterministic basis order.
pub fn lift_cocycle(z0: &DiagramCombo, caps: Caps) -> Result<BarCombo> {
    let ctx = z0.ctx();
    if z0.is_zero() {
        return Ok(BarCombo::zero(ctx));
    }
    let Some(q0) = z0.homogeneous_degree() else {
        return Err(Error::Domain("lift seed must be degree-homogeneous".into()));
    };
    for (k, _) in z0.iter() {
        if !k.classify().internally_connected {
            return Err(Error::Domain("lift seed must be internally connected".into()));
        }
    }
    if !reduced_differential(z0)?.is_zero() {
        return Err(Error::Domain(
            "lift seed is not a cocycle for the reduced differential".into(),
        ));
    }

    let mut z = BarCombo::zero(ctx);
    let mut current = BarCombo::zero(ctx);
    for (k, c) in z0.iter() {
        current.add_word(Word::from_canonical(ctx, vec![k.clone()]), c.clone());
    }
    z.add(&current);
    let mut p = 1usize;
    let mut q = q0;
    loop {
        let residue = bar_internal_differential(&current)?;
        if residue.is_zero() {
            return Ok(z);
        }
        if p > 64 {
            return Err(Error::Capacity("zig-zag did not terminate within 64 stages".into()));
        }
        // solve D_B next = residue over words of bidegree (-(p+1), q+1)
        let basis = bar_basis(ctx, p + 1, q + 1, caps)?;
        let mut row_index: std::collections::BTreeMap<Word, usize> = Default::default();
        let mut cols: Vec<Vec<(usize, Q)>> = Vec::new();
        for w in &basis {
            let dw = bar_homological_differential(&BarCombo::from_word(w.clone(), qi(1)))?;
            let mut col = Vec::new();
            for (rw, c) in dw.iter() {
                let next = row_index.len();
                let idx = *row_index.entry(rw.clone()).or_insert(next);
                col.push((idx, c.clone()));
            }
            cols.push(col);
        }
        for (rw, _) in residue.iter() {
            let next = row_index.len();
            row_index.entry(rw.clone()).or_insert(next);
        }
        let mut mat = QMat::zero(row_index.len(), basis.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col {
                mat.set(*i, j, c.clone());
            }
        }
        let mut rhs = vec![Q::zero(); row_index.len()];
        for (rw, c) in residue.iter() {
            rhs[row_index[rw]] = c.clone();
        }
        let sol = match solve(&mat, &rhs) {
            Solution::One(x) => x,
            Solution::Inconsistent => {
                return Err(Error::Inconsistent {
                    p: -((p + 1) as isize),
                    q: q + 1,
                    detail: "zig-zag stage has no solution; the seed is not liftable \
                             within the basis caps"
                        .into(),
                })
            }
        };
        let mut next = BarCombo::zero(ctx);
        for (j, w) in basis.iter().enumerate() {
            if !sol[j].is_zero() {
                next.add_word(w.clone(), sol[j].clone());
            }
        }
        z.add(&next);
        current = next;
        p += 1;
        q += 1;
    }
}

/// True iff the bar differential of `z` vanishes.
pub fn verify_bar_cocycle(z: &BarCombo) -> Result<bool> {
    Ok(bar_differential(z)?.is_zero())
}

/// Pairs a bracket expression against a closed bar combo through the
/// theta map: only the length-one part of `z` contributes.
pub fn pair_homotopy(
    b: &BracketExpr,
    z: &BarCombo,
    convention: Convention,
) -> Result<Q> {
    if !verify_bar_cocycle(z)? {
        return Err(Error::Domain("pair_homotopy needs a closed bar combo".into()));
    }
    let th = theta(b, z.ctx(), convention)?;
    pair(&as_length_one(&th), z)
}

/// Dimension of the delta*-homology of the primitives in one degree,
/// summed over the scanned `E - v` blocks (each block is finite and
/// computed exactly; blocks needing more than `caps.max_free` free
/// vertices are outside the scan).
pub fn primitive_homology_dims(ctx: Context, degree: isize, caps: Caps) -> Result<usize> {
    let n = ctx.n as isize;
    let mut total = 0usize;
    for c in 0.. {
        let v = (n - 1) * c - degree;
        if v > caps.max_free as isize {
            break;
        }
        if v < 0 {
            continue;
        }
        let e = c + v;
        if e < 1 {
            continue;
        }
        let basis: Vec<Diagram> = enumerate_diagrams(ctx, e as usize, v as usize, caps.candidates)?
            .into_iter()
            .filter(|d| d.classify().internally_connected)
            .collect();
        if basis.is_empty() {
            continue;
        }
        let rank_out = rank_of_dual_differential(ctx, &basis)?;
        let rank_in = if e >= 1 && v >= 1 {
            let above: Vec<Diagram> =
                enumerate_diagrams(ctx, e as usize - 1, v as usize - 1, caps.candidates)?
                    .into_iter()
                    .filter(|d| d.classify().internally_connected)
                    .collect();
            rank_of_dual_differential(ctx, &above)?
        } else {
            0
        };
        total += basis.len() - rank_out - rank_in;
    }
    Ok(total)
}

fn rank_of_dual_differential(_ctx: Context, basis: &[Diagram]) -> Result<usize> {
    if basis.is_empty() {
        return Ok(0);
    }
    let mut row_index: std::collections::BTreeMap<Diagram, usize> = Default::default();
    let mut cols: Vec<Vec<(usize, Q)>> = Vec::new();
    for d in basis {
        let dd = dual_differential(&DualCombo::from_diagram(d, &qi(1))?)?;
        let mut col = Vec::new();
        for (k, c) in dd.iter() {
            let next = row_index.len();
            let idx = *row_index.entry(k.clone()).or_insert(next);
            col.push((idx, c.clone()));
        }
        cols.push(col);
    }
    let mut mat = QMat::zero(row_index.len().max(1), basis.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            mat.set(*i, j, c.clone());
        }
    }
    Ok(rref_rank(&mat).rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::context::Quotient;
    use crate::lie::Convention::Samelson;

    fn ctx(m: usize, n: usize, q: Quotient) -> Context {
        Context::new(m, n, q).unwrap()
    }

    fn diag(c: Context, free: usize, edges: &[(usize, usize)]) -> Diagram {
        Diagram::new_nonzero(c, free, edges.to_vec()).unwrap()
    }

    #[test]
    fn bar_basis_contains_chord_square() {
        let c = ctx(2, 3, Quotient::Dbar);
        let words = bar_basis(c, 2, 4, Caps::default()).unwrap();
        let ch = diag(c, 0, &[(1, 2)]);
        let target = Word::from_canonical(c, vec![ch.clone(), ch]);
        assert!(words.contains(&target));
    }

    #[test]
    fn bar_basis_quotient_d_excludes_double_chord() {
        let c = ctx(2, 3, Quotient::D);
        let words = bar_basis(c, 1, 4, Caps::default()).unwrap();
        assert!(words.iter().all(|w| !w.factors()[0].classify().has_multi_edge));
    }

    #[test]
    fn lift_of_single_chord_is_closed_immediately() {
        let c = ctx(2, 3, Quotient::Dbar);
        let z0 = DiagramCombo::from_diagram(&diag(c, 0, &[(1, 2)]), &qi(1)).unwrap();
        let z = lift_cocycle(&z0, Caps::default()).unwrap();
        assert_eq!(z.len(), 1);
        assert!(verify_bar_cocycle(&z).unwrap());
    }

    #[test]
    fn lift_b1_example_termwise() {
        // seed: minus the doubled-leg tripod; lift adds [G21|G21]
        let c = ctx(2, 3, Quotient::Dbar);
        let tripod = diag(c, 1, &[(1, 3), (1, 3), (2, 3)]);
        let z0 = DiagramCombo::from_diagram(&tripod, &qi(-1)).unwrap();
        let z = lift_cocycle(&z0, Caps::default()).unwrap();
        assert!(verify_bar_cocycle(&z).unwrap());
        assert_eq!(z.len(), 2);
        let ch = diag(c, 0, &[(1, 2)]);
        let sq = Word::from_canonical(c, vec![ch.clone(), ch]);
        assert_eq!(z.coeff(&sq).abs(), qi(1));
        // pairing with the bracket it detects
        let b = BracketExpr::br(BracketExpr::gen(2, 1).unwrap(), BracketExpr::gen(2, 1).unwrap());
        assert_eq!(pair_homotopy(&b, &z, Samelson).unwrap(), qi(2));
    }

    #[test]
    fn homology_dims_m2_n3() {
        // free graded Lie algebra on one degree-1 generator: dims 1,1,0
        // at Samelson degrees 1,2,3 (= diagram degrees 2,3,4)
        let c = ctx(2, 3, Quotient::Dbar);
        assert_eq!(primitive_homology_dims(c, 2, Caps::default()).unwrap(), 1);
        assert_eq!(primitive_homology_dims(c, 3, Caps::default()).unwrap(), 1);
        assert_eq!(primitive_homology_dims(c, 4, Caps::default()).unwrap(), 0);
    }
}
