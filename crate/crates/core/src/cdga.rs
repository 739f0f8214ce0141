//! The differential graded algebra structure on diagram space: the
//! edge-contraction differential, the superposition product, the quotient
//! projection, and the projection onto indecomposables.

use crate::context::Quotient;
use crate::diagram::{Canon, Diagram, DiagramCombo};
use crate::error::{Error, Result};
use crate::rat::{qsign, Q};

/// The contraction sign of edge `idx`.
///
/// Odd `n`: an edge with endpoints `i < j` carries `(-1)^{j-m}` when
/// directed `i -> j` and `(-1)^{j-m+1}` when directed `j -> i`.  Even `n`:
/// the edge label (its 1-based position) `l` carries `(-1)^l`.
pub fn edge_sign(d: &Diagram, idx: usize) -> i8 {
    let ctx = d.ctx();
    if ctx.odd() {
        let (t, h) = d.edges()[idx];
        let j = t.max(h);
        let mut e = j - ctx.m;
        if t > h {
            e += 1;
        }
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else if (idx + 1) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Contracts the (non-chord) edge `idx`: merges the endpoint with the
/// larger label into the smaller, shifts the labels above the removed
/// vertex down, and drops the edge.  Returns the contraction sign together
/// with the raw contracted diagram, or `None` when the result is zero
/// (a self-loop appears, or a multi-edge in quotient `D`).
pub fn contract_edge(d: &Diagram, idx: usize) -> Result<(i8, Option<Diagram>)> {
    if d.is_chord(idx) {
        return Err(Error::Domain("cannot contract a chord".into()));
    }
    let ctx = d.ctx();
    let (a, b) = d.edges()[idx];
    let (i, j) = (a.min(b), a.max(b));
    debug_assert!(j > ctx.m);
    let eps = edge_sign(d, idx);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(d.edge_count() - 1);
    for (k, &(t, h)) in d.edges().iter().enumerate() {
        if k == idx {
            continue;
        }
        let map = |v: usize| {
            if v == j {
                i
            } else if v > j {
                v - 1
            } else {
                v
            }
        };
        let (mut t, mut h) = (map(t), map(h));
        if !ctx.odd() && t > h {
            std::mem::swap(&mut t, &mut h);
        }
        edges.push((t, h));
    }
    let contracted = Diagram::new(ctx, d.free_count() - 1, edges)?;
    Ok((eps, contracted))
}

/// The differential: the signed sum of contractions over all non-chord
/// edges, linearly extended.
pub fn differential(x: &DiagramCombo) -> Result<DiagramCombo> {
    let mut out = DiagramCombo::zero(x.ctx());
    for (key, c) in x.iter() {
        for idx in 0..key.edge_count() {
            if key.is_chord(idx) {
                continue;
            }
            let (eps, contracted) = contract_edge(key, idx)?;
            let Some(raw) = contracted else { continue };
            match raw.canonicalize()? {
                Canon::Zero => {}
                Canon::NonZero { key: k, sign } => {
                    out.add_canonical(k, c.clone() * qsign(eps) * qsign(sign));
                }
            }
        }
    }
    Ok(out)
}

/// Superposition of two diagrams along the segment vertices, with the
/// second factor's free labels (odd `n`) or edge labels (even `n`) raised.
pub fn product_diagrams(x: &Diagram, y: &Diagram) -> Result<Option<Diagram>> {
    if x.ctx() != y.ctx() {
        return Err(Error::ContextMismatch("product factors live in different contexts".into()));
    }
    let ctx = x.ctx();
    let shift = x.free_count();
    let mut edges = x.edges().to_vec();
    let bump = |v: usize| if v > ctx.m { v + shift } else { v };
    edges.extend(y.edges().iter().map(|&(t, h)| (bump(t), bump(h))));
    Diagram::new(ctx, x.free_count() + y.free_count(), edges)
}

/// The bilinear product of combos.  In quotient `D`, multi-edge products
/// drop out.
pub fn product(x: &DiagramCombo, y: &DiagramCombo) -> Result<DiagramCombo> {
    if x.ctx() != y.ctx() {
        return Err(Error::ContextMismatch("product factors live in different contexts".into()));
    }
    let mut out = DiagramCombo::zero(x.ctx());
    for (dx, cx) in x.iter() {
        for (dy, cy) in y.iter() {
            let Some(raw) = product_diagrams(dx, dy)? else { continue };
            out.add_diagram(&raw, &(cx.clone() * cy.clone()))?;
        }
    }
    Ok(out)
}

/// The quotient projection to `D(m)`: kills every multi-edge term.  This
/// is also the symbolic content of the formality integration map, which
/// vanishes on diagrams with multiple edges.
pub fn project_to_d(x: &DiagramCombo) -> Result<DiagramCombo> {
    if x.ctx().quotient != Quotient::Dbar {
        return Err(Error::Domain("project_to_D expects a combo over Dbar".into()));
    }
    let ctx_d = x.ctx().with_quotient(Quotient::D);
    let mut out = DiagramCombo::zero(ctx_d);
    for (k, c) in x.iter() {
        if k.classify().has_multi_edge {
            continue;
        }
        let moved = Diagram::new_nonzero(ctx_d, k.free_count(), k.edges().to_vec())?;
        out.add_canonical(moved, c.clone());
    }
    Ok(out)
}

/// Projection onto the indecomposables: keeps the internally connected
/// terms.  Composed after `differential` this is the reduced differential.
pub fn indecomposable_projection(x: &DiagramCombo) -> DiagramCombo {
    let mut out = DiagramCombo::zero(x.ctx());
    for (k, c) in x.iter() {
        if k.classify().internally_connected {
            out.add_canonical(k.clone(), c.clone());
        }
    }
    out
}

/// The reduced differential: differential followed by the projection onto
/// indecomposables.
pub fn reduced_differential(x: &DiagramCombo) -> Result<DiagramCombo> {
    Ok(indecomposable_projection(&differential(x)?))
}

/// Leibniz sign helper: `(-1)^{deg}` as a rational.
pub fn koszul(deg: isize) -> Q {
    qsign(if deg % 2 == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::context::{Context, Quotient};
    use crate::diagram::enumerate_diagrams;
    use crate::rat::qi;

    fn ctx(m: usize, n: usize, q: Quotient) -> Context {
        Context::new(m, n, q).unwrap()
    }

    fn diag(c: Context, free: usize, edges: &[(usize, usize)]) -> Diagram {
        Diagram::new_nonzero(c, free, edges.to_vec()).unwrap()
    }

    fn combo(d: &Diagram) -> DiagramCombo {
        DiagramCombo::from_diagram(d, &qi(1)).unwrap()
    }

    #[test]
    fn chord_is_closed() {
        let c = ctx(2, 3, Quotient::Dbar);
        let x = combo(&diag(c, 0, &[(1, 2)]));
        assert!(differential(&x).unwrap().is_zero());
    }

    #[test]
    fn tripod_differential_three_terms() {
        let c = ctx(3, 3, Quotient::Dbar);
        let x = combo(&diag(c, 1, &[(1, 4), (2, 4), (3, 4)]));
        let dx = differential(&x).unwrap();
        // contracting each leg gives a distinct two-chord diagram
        assert_eq!(dx.len(), 3);
        for (k, v) in dx.iter() {
            assert_eq!(k.edge_count(), 2);
            assert_eq!(k.free_count(), 0);
            assert_eq!(v.clone().abs(), qi(1).abs());
        }
        // and the differential squares to zero
        assert!(differential(&dx).unwrap().is_zero());
    }

    #[test]
    fn contract_chord_rejected() {
        let c = ctx(2, 3, Quotient::Dbar);
        let d = diag(c, 0, &[(1, 2)]);
        assert!(contract_edge(&d, 0).is_err());
    }

    #[test]
    fn contraction_self_loop_is_dropped() {
        let c = ctx(2, 3, Quotient::Dbar);
        // tripod with doubled leg: contracting a doubled leg makes a
        // self-loop, contracting the single leg makes the double chord
        let d = diag(c, 1, &[(1, 3), (1, 3), (2, 3)]);
        let dx = differential(&combo(&d)).unwrap();
        assert_eq!(dx.len(), 1);
        let (k, _) = dx.iter().next().unwrap();
        assert_eq!(k.edges(), &[(1, 2), (1, 2)]);
    }

    #[test]
    fn delta_squared_zero_on_enumerated_bases() {
        for &(m, n, q) in &[
            (2, 3, Quotient::Dbar),
            (2, 4, Quotient::Dbar),
            (3, 3, Quotient::D),
            (3, 4, Quotient::D),
        ] {
            let c = ctx(m, n, q);
            for edges in 1..=4 {
                for free in 0..=2 {
                    let Ok(ds) = enumerate_diagrams(c, edges, free, 200_000) else {
                        continue;
                    };
                    for d in ds {
                        let x = DiagramCombo::from_diagram(&d, &qi(1)).unwrap();
                        let ddx = differential(&differential(&x).unwrap()).unwrap();
                        assert!(ddx.is_zero(), "delta^2 != 0 on {d:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn product_examples() {
        let c = ctx(3, 3, Quotient::Dbar);
        let g21 = combo(&diag(c, 0, &[(1, 2)]));
        let g31 = combo(&diag(c, 0, &[(1, 3)]));
        let p = product(&g21, &g31).unwrap();
        assert_eq!(p.len(), 1);
        let (k, v) = p.iter().next().unwrap();
        assert_eq!(k.edges(), &[(1, 2), (1, 3)]);
        assert_eq!(*v, qi(1));

        let c2 = ctx(2, 3, Quotient::Dbar);
        let ch = combo(&diag(c2, 0, &[(1, 2)]));
        let sq = product(&ch, &ch).unwrap();
        assert_eq!(sq.len(), 1); // double chord survives in Dbar

        let c2d = ctx(2, 3, Quotient::D);
        let chd = combo(&diag(c2d, 0, &[(1, 2)]));
        assert!(product(&chd, &chd).unwrap().is_zero());
    }

    #[test]
    fn graded_commutativity_small() {
        let c = ctx(3, 4, Quotient::Dbar);
        let x = combo(&diag(c, 0, &[(1, 2)])); // degree 3, odd
        let y = combo(&diag(c, 0, &[(2, 3)]));
        let xy = product(&x, &y).unwrap();
        let mut yx = product(&y, &x).unwrap();
        yx.scale(&koszul(3 * 3));
        assert_eq!(xy, yx);
    }

    #[test]
    fn project_to_d_examples() {
        let c = ctx(2, 3, Quotient::Dbar);
        let dbl = combo(&diag(c, 0, &[(1, 2), (1, 2)]));
        assert!(project_to_d(&dbl).unwrap().is_zero());

        let c3 = ctx(3, 3, Quotient::Dbar);
        let tri = combo(&diag(c3, 1, &[(1, 4), (2, 4), (3, 4)]));
        let p = project_to_d(&tri).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.ctx().quotient, Quotient::D);
    }

    #[test]
    fn indecomposable_projection_examples() {
        let c = ctx(2, 3, Quotient::Dbar);
        let dbl = combo(&diag(c, 0, &[(1, 2), (1, 2)]));
        assert!(indecomposable_projection(&dbl).is_zero());

        let tri = combo(&diag(c, 1, &[(1, 3), (1, 3), (2, 3)]));
        assert_eq!(indecomposable_projection(&tri), tri);
        // delta-tilde of the doubled-leg tripod vanishes: its differential
        // is the decomposable double chord
        assert!(reduced_differential(&tri).unwrap().is_zero());
    }
}
