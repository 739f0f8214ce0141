//! The algebraic map from bracket expressions to dual diagram cycles:
//! a single chord for a generator, and for a bracket the blow-up of the
//! superposed factors, with the convention-dependent sign.  Also the
//! projection of its values onto trees, the closed-form sign table for
//! full caterpillars, and delta*-exactness testing.

use crate::cdga::product;
use crate::cobar::dual_differential;
use crate::context::{Context, Quotient};
use crate::diagram::{enumerate_diagrams, Diagram, DualCombo};
use crate::error::{Error, Result};
use crate::lie::{BracketExpr, Convention};
use crate::linalg::{solve, QMat, Solution};
use crate::rat::{qi, Q};
use crate::tree::{tree_from_diagram, TreeCanon, TreeCombo};

/// Resource limits for basis enumerations.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Upper bound on candidate edge multisets per enumeration.
    pub candidates: u64,
    /// Largest free-vertex count scanned per degree block.
    pub max_free: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { candidates: 2_000_000, max_free: 3 }
    }
}

impl Caps {
    pub fn with_candidates(candidates: u64) -> Self {
        Caps { candidates, ..Caps::default() }
    }
}

/// The map on bracket expressions: a generator `B_{j,i}` goes to the dual
/// of the chord from `i` to `j`; a bracket `[A,B]` goes to
/// `(-1)^a delta*((G_A . G_B)*)` with `a` the degree of the first factor
/// (the sign is omitted under the Whitehead convention).
pub fn theta(b: &BracketExpr, ctx: Context, convention: Convention) -> Result<DualCombo> {
    b.validate(ctx.m)?;
    if ctx.quotient == Quotient::D {
        let gens = b.generators();
        if gens.len() >= 2 && gens[0] == gens[1] {
            return Err(Error::Domain(
                "quotient D needs the first two bracket entries to differ".into(),
            ));
        }
    }
    Ok(theta_rec(b, ctx, convention)?.0)
}

fn theta_rec(
    b: &BracketExpr,
    ctx: Context,
    convention: Convention,
) -> Result<(DualCombo, isize)> {
    match b {
        BracketExpr::Gen { j, i } => {
            let chord = Diagram::new_nonzero(ctx, 0, vec![(*i, *j)])?;
            Ok((DualCombo::from_diagram(&chord, &qi(1))?, (ctx.n - 1) as isize))
        }
        BracketExpr::Br(a, c) => {
            let (xa, da) = theta_rec(a, ctx, convention)?;
            let (xc, dc) = theta_rec(c, ctx, convention)?;
            let deg = da + dc - 1;
            let prod = product(&xa.into_primal(), &xc.into_primal())?;
            let mut out = dual_differential(&prod.into_dual())?;
            if convention == Convention::Samelson && da.rem_euclid(2) == 1 {
                out.scale(&qi(-1));
            }
            debug_assert!(out.homogeneous_degree().map_or(true, |d| d == deg));
            Ok((out, deg))
        }
    }
}

/// Linear extension of `theta` over a sum of bracket expressions.
pub fn theta_sum(
    terms: &[(Q, BracketExpr)],
    ctx: Context,
    convention: Convention,
) -> Result<DualCombo> {
    let mut out = DualCombo::zero(ctx);
    for (c, b) in terms {
        let mut t = theta(b, ctx, convention)?;
        t.scale(c);
        out.add(&t);
    }
    Ok(out)
}

/// Projects a primitive dual combo onto trees: terms with internal loops
/// or a non-trivalent free vertex die; the rest split their segment
/// vertices into leaves.
pub fn theta_tilde(x: &DualCombo) -> Result<TreeCombo> {
    let mut out = TreeCombo::zero();
    for (k, c) in x.iter() {
        let flags = k.classify();
        if !flags.internally_connected {
            return Err(Error::Domain(
                "theta_tilde expects internally connected terms".into(),
            ));
        }
        if !flags.internal_forest || !flags.unitrivalent_free {
            continue;
        }
        match tree_from_diagram(k)? {
            TreeCanon::Zero => {}
            TreeCanon::NonZero { key, sign } => {
                out.add_term(key, c.clone() * crate::rat::qsign(sign));
            }
        }
    }
    Ok(out)
}

/// The closed-form sign for the image of a full-length non-repeating
/// caterpillar bracket on `m` strands.
pub fn theta_sign(n: usize, m: usize, convention: Convention) -> i8 {
    let even = n % 2 == 0;
    match convention {
        Convention::Samelson => {
            if even {
                if m % 4 == 0 || m % 4 == 1 {
                    1
                } else {
                    -1
                }
            } else if m % 2 == 1 {
                1
            } else {
                -1
            }
        }
        Convention::Whitehead => {
            if even {
                if m % 4 == 0 || m % 4 == 1 {
                    1
                } else {
                    -1
                }
            } else if m % 4 == 0 || m % 4 == 3 {
                -1
            } else {
                1
            }
        }
    }
}

/// Decides delta*-exactness of a closed primitive combo by solving
/// `delta* Y = x` over the enumerated internally connected diagrams one
/// degree up, blockwise in the invariant `E - v`.
pub fn is_exact(x: &DualCombo, caps: Caps) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    if !dual_differential(x)?.is_zero() {
        return Err(Error::Domain("is_exact expects a delta*-closed input".into()));
    }
    let ctx = x.ctx();
    // split by (degree, E - v) blocks; delta* preserves both
    let mut blocks: std::collections::BTreeMap<(isize, isize), DualCombo> = Default::default();
    for (k, c) in x.iter() {
        let key = (k.degree(), k.edge_count() as isize - k.free_count() as isize);
        blocks
            .entry(key)
            .or_insert_with(|| DualCombo::zero(ctx))
            .add_canonical(k.clone(), c.clone());
    }
    for ((deg, cblk), part) in blocks {
        if !is_exact_block(&part, deg, cblk, caps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_exact_block(x: &DualCombo, deg: isize, cblk: isize, caps: Caps) -> Result<bool> {
    let ctx = x.ctx();
    // sources one degree up have one fewer edge and free vertex
    let some_term = x.iter().next().expect("nonzero block").0;
    let (e, v) = (some_term.edge_count(), some_term.free_count());
    debug_assert_eq!(e as isize - v as isize, cblk);
    if e == 0 || v == 0 {
        // no diagrams one degree up in this block
        return Ok(false);
    }
    let sources: Vec<Diagram> = enumerate_diagrams(ctx, e - 1, v - 1, caps.candidates)?
        .into_iter()
        .filter(|d| d.classify().internally_connected && d.degree() == deg + 1)
        .collect();
    let mut row_index: std::collections::BTreeMap<Diagram, usize> = Default::default();
    let mut cols: Vec<Vec<(usize, Q)>> = Vec::new();
    for s in &sources {
        let ds = dual_differential(&DualCombo::from_diagram(s, &qi(1))?)?;
        let mut col = Vec::new();
        for (k, cc) in ds.iter() {
            let next = row_index.len();
            let idx = *row_index.entry(k.clone()).or_insert(next);
            col.push((idx, cc.clone()));
        }
        cols.push(col);
    }
    for (k, _) in x.iter() {
        let next = row_index.len();
        row_index.entry(k.clone()).or_insert(next);
    }
    let nrows = row_index.len();
    let mut mat = QMat::zero(nrows, sources.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, cc) in col {
            mat.set(*i, j, cc.clone());
        }
    }
    let mut rhs = vec![Q::from_integer(0.into()); nrows];
    for (k, c) in x.iter() {
        rhs[row_index[k]] = c.clone();
    }
    Ok(matches!(solve(&mat, &rhs), Solution::One(_)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Convention::Samelson;

    fn ctx(m: usize, n: usize) -> Context {
        Context::new(m, n, Quotient::Dbar).unwrap()
    }

    #[test]
    fn theta_of_generator_is_chord() {
        let c = ctx(3, 3);
        let b = BracketExpr::gen(3, 1).unwrap();
        let t = theta(&b, c, Samelson).unwrap();
        assert_eq!(t.len(), 1);
        let (k, v) = t.iter().next().unwrap();
        assert_eq!(k.edges(), &[(1, 3)]);
        assert_eq!(*v, qi(1));
    }

    #[test]
    fn theta_hopf_example() {
        // [B21, B21] at n = 3: minus both doubled-leg tripods
        let c = ctx(2, 3);
        let b = BracketExpr::br(BracketExpr::gen(2, 1).unwrap(), BracketExpr::gen(2, 1).unwrap());
        let t = theta(&b, c, Samelson).unwrap();
        assert_eq!(t.len(), 2);
        for (k, v) in t.iter() {
            assert_eq!(*v, qi(-1));
            assert_eq!(k.automorphism_count(), 2);
        }
    }

    #[test]
    fn theta_tripod_example() {
        let c = ctx(3, 3);
        let b = BracketExpr::br(BracketExpr::gen(3, 1).unwrap(), BracketExpr::gen(3, 2).unwrap());
        let t = theta(&b, c, Samelson).unwrap();
        assert_eq!(t.len(), 1);
        let (k, v) = t.iter().next().unwrap();
        assert_eq!(k.free_count(), 1);
        assert_eq!(k.edge_count(), 3);
        assert_eq!(v.clone() * v.clone(), qi(1));
    }

    #[test]
    fn theta_values_are_cycles_and_primitive() {
        let c = ctx(3, 3);
        for idx in [vec![1, 2], vec![1, 2, 1], vec![1, 2, 2]] {
            let b = BracketExpr::left_normed(3, &idx).unwrap();
            let t = theta(&b, c, Samelson).unwrap();
            assert!(dual_differential(&t).unwrap().is_zero(), "not a cycle: {idx:?}");
            for (k, _) in t.iter() {
                assert!(k.classify().internally_connected);
            }
        }
    }

    #[test]
    fn theta_quotient_d_guard() {
        let cd = Context::new(2, 3, Quotient::D).unwrap();
        let b = BracketExpr::br(BracketExpr::gen(2, 1).unwrap(), BracketExpr::gen(2, 1).unwrap());
        assert!(theta(&b, cd, Samelson).is_err());
    }

    #[test]
    fn theta_tilde_hopf() {
        let c = ctx(2, 3);
        let b = BracketExpr::br(BracketExpr::gen(2, 1).unwrap(), BracketExpr::gen(2, 1).unwrap());
        let t = theta(&b, c, Samelson).unwrap();
        let trees = theta_tilde(&t).unwrap();
        let multisets: Vec<Vec<usize>> =
            trees.iter().map(|(t, _)| t.leaf_multiset()).collect();
        assert!(multisets.contains(&vec![1, 1, 2]));
        assert!(multisets.contains(&vec![1, 2, 2]));
    }

    #[test]
    fn sign_table_values() {
        use crate::lie::Convention::*;
        assert_eq!(theta_sign(4, 4, Samelson), 1);
        assert_eq!(theta_sign(3, 4, Samelson), -1);
        assert_eq!(theta_sign(3, 5, Samelson), 1);
        assert_eq!(theta_sign(3, 4, Whitehead), -1);
        assert_eq!(theta_sign(3, 3, Whitehead), -1);
        assert_eq!(theta_sign(4, 6, Whitehead), -1);
    }

    #[test]
    fn exactness_basics() {
        let c = ctx(2, 3);
        assert!(is_exact(&DualCombo::zero(c), Caps::default()).unwrap());
        // a nonzero class: the tripod image of [B31,B32]
        let c3 = ctx(3, 3);
        let b = BracketExpr::br(BracketExpr::gen(3, 1).unwrap(), BracketExpr::gen(3, 2).unwrap());
        let t = theta(&b, c3, Samelson).unwrap();
        assert!(!is_exact(&t, Caps::default()).unwrap());
    }
}
