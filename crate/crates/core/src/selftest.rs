//! Randomized property suites over enumerated diagram pools.  Every check
//! is exact; a single counterexample fails the property.  The CLI
//! `selftest` subcommand and the acceptance tests both run these.

use crate::bar::{bar_differential, coshuffle, shuffle_product, BarCombo, CobarCombo, Word};
use crate::cdga::{differential, product, project_to_d};
use crate::cobar::{as_length_one, cobar_differential, dual_differential, pair, pair_duals};
use crate::context::{Context, Quotient};
use crate::diagram::{enumerate_diagrams, Canon, Diagram, DiagramCombo, DualCombo};
use crate::error::Result;
use crate::lie::{left_normalize, pbw_expand, pbw_of_bracket, BracketExpr, Convention};
use crate::lift::{lift_cocycle, pair_homotopy};
use crate::rat::{qi, Q};
use crate::theta::Caps;
use rand::prelude::*;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

pub struct Report {
    pub name: &'static str,
    pub cases: usize,
    pub result: std::result::Result<(), String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

struct Pools {
    ctxs: Vec<Context>,
    /// per context: diagrams grouped as (edges, free) -> list
    by_shape: Vec<std::collections::BTreeMap<(usize, usize), Vec<Diagram>>>,
}

fn build_pools() -> Result<Pools> {
    let mut ctxs = Vec::new();
    for (m, n) in [(2, 3), (2, 4), (3, 3), (3, 4)] {
        for q in [Quotient::Dbar, Quotient::D] {
            ctxs.push(Context::new(m, n, q)?);
        }
    }
    let shapes = [(1, 0), (2, 0), (3, 0), (3, 1), (4, 1), (4, 2)];
    let mut by_shape = Vec::new();
    for &ctx in &ctxs {
        let mut map = std::collections::BTreeMap::new();
        for &(e, v) in &shapes {
            let ds = enumerate_diagrams(ctx, e, v, 500_000)?;
            if !ds.is_empty() {
                map.insert((e, v), ds);
            }
        }
        by_shape.push(map);
    }
    Ok(Pools { ctxs, by_shape })
}

impl Pools {
    fn random_ctx(&self, rng: &mut ChaCha8Rng) -> (usize, Context) {
        let i = rng.gen_range(0..self.ctxs.len());
        (i, self.ctxs[i])
    }

    fn random_diagram(&self, ci: usize, rng: &mut ChaCha8Rng) -> Option<&Diagram> {
        let shapes: Vec<_> = self.by_shape[ci].keys().copied().collect();
        let &(e, v) = shapes.choose(rng)?;
        self.by_shape[ci][&(e, v)].choose(rng)
    }

    fn random_combo(&self, ci: usize, rng: &mut ChaCha8Rng, terms: usize) -> DiagramCombo {
        let mut x = DiagramCombo::zero(self.ctxs[ci]);
        for _ in 0..terms {
            if let Some(d) = self.random_diagram(ci, rng) {
                x.add_canonical(d.clone(), qi(rng.gen_range(-3i64..=3)));
            }
        }
        x
    }

    fn random_word_combo(&self, ci: usize, rng: &mut ChaCha8Rng) -> BarCombo {
        let ctx = self.ctxs[ci];
        let mut x = BarCombo::zero(ctx);
        for _ in 0..rng.gen_range(1..=2) {
            let len = rng.gen_range(1..=3);
            let mut factors = Vec::new();
            for _ in 0..len {
                if let Some(d) = self.random_diagram(ci, rng) {
                    factors.push(d.clone());
                }
            }
            if !factors.is_empty() {
                x.add_word(Word::from_canonical(ctx, factors), qi(rng.gen_range(-2i64..=2)));
            }
        }
        x
    }
}

fn random_bracket(rng: &mut ChaCha8Rng, j: usize, depth: usize) -> BracketExpr {
    if depth == 0 || rng.gen_bool(0.4) {
        BracketExpr::gen(j, rng.gen_range(1..j)).unwrap()
    } else {
        BracketExpr::br(
            random_bracket(rng, j, depth - 1),
            random_bracket(rng, j, depth - 1),
        )
    }
}

macro_rules! prop {
    ($name:literal, $cases:expr, $body:expr) => {{
        let run = || -> std::result::Result<(), String> { $body };
        Report { name: $name, cases: $cases, result: run() }
    }};
}

/// Runs every property suite with the given seed; each suite draws at
/// least `cases` random instances.
pub fn run_all(seed: u64, cases: usize) -> Result<Vec<Report>> {
    let cases = cases.max(200);
    let pools = build_pools()?;
    let mut out = Vec::new();

    out.push(prop!("delta_squared_zero", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..cases {
            let (ci, _) = pools.random_ctx(&mut rng);
            let x = pools.random_combo(ci, &mut rng, 3);
            let ddx = differential(&differential(&x).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if !ddx.is_zero() {
                return Err(format!("case {k}: delta^2 != 0 on {x:?}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("dual_delta_squared_zero", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for k in 0..cases {
            let (ci, _) = pools.random_ctx(&mut rng);
            let x = pools.random_combo(ci, &mut rng, 2).into_dual();
            let ddx = dual_differential(&dual_differential(&x).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if !ddx.is_zero() {
                return Err(format!("case {k}: (delta*)^2 != 0 on {x:?}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("bar_differential_squared_zero", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        for k in 0..cases {
            let (ci, _) = pools.random_ctx(&mut rng);
            let x = pools.random_word_combo(ci, &mut rng);
            let ddx = bar_differential(&bar_differential(&x).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if !ddx.is_zero() {
                return Err(format!("case {k}: d_B^2 != 0 on {x:?}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("cobar_differential_squared_zero", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        for k in 0..cases {
            let (ci, _) = pools.random_ctx(&mut rng);
            let x: CobarCombo = pools.random_word_combo(ci, &mut rng).transport_side();
            let ddx = cobar_differential(&cobar_differential(&x).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if !ddx.is_zero() {
                return Err(format!("case {k}: d_B*^2 != 0 on {x:?}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("blowup_contraction_adjointness", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        for k in 0..cases {
            let (ci, ctx) = pools.random_ctx(&mut rng);
            let shapes: Vec<_> = pools.by_shape[ci].keys().copied().collect();
            let Some(&(e, v)) = shapes.as_slice().choose(&mut rng) else { continue };
            let lows = &pools.by_shape[ci][&(e, v)];
            let highs = match pools.by_shape[ci].get(&(e + 1, v + 1)) {
                Some(h) => h,
                None => continue,
            };
            let mut x = DualCombo::zero(ctx);
            for _ in 0..2 {
                x.add_canonical(lows.choose(&mut rng).unwrap().clone(), qi(rng.gen_range(-2i64..=2)));
            }
            let mut y = DiagramCombo::zero(ctx);
            for _ in 0..2 {
                y.add_canonical(highs.choose(&mut rng).unwrap().clone(), qi(rng.gen_range(-2i64..=2)));
            }
            let lhs = pair_duals(&dual_differential(&x).map_err(|e| e.to_string())?, &y)
                .map_err(|e| e.to_string())?;
            let rhs = pair_duals(&x, &differential(&y).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("case {k}: <d*x,y> = {lhs} but <x,dy> = {rhs}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("bar_cobar_adjointness_calibration", cases, {
        // the frozen Koszul rule: plain product pairing, sign +1
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        for k in 0..cases {
            let (ci, _) = pools.random_ctx(&mut rng);
            let x: CobarCombo = pools.random_word_combo(ci, &mut rng).transport_side();
            let y = pools.random_word_combo(ci, &mut rng);
            let lhs = pair(&cobar_differential(&x).map_err(|e| e.to_string())?, &y)
                .map_err(|e| e.to_string())?;
            let rhs = pair(&x, &bar_differential(&y).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("case {k}: <d_B* x, y> = {lhs} but <x, d_B y> = {rhs}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("graded_commutativity", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
        for k in 0..cases {
            let (ci, ctx) = pools.random_ctx(&mut rng);
            let (Some(dx), Some(dy)) =
                (pools.random_diagram(ci, &mut rng), pools.random_diagram(ci, &mut rng))
            else {
                continue;
            };
            let x = DiagramCombo::from_diagram(dx, &qi(1)).map_err(|e| e.to_string())?;
            let y = DiagramCombo::from_diagram(dy, &qi(1)).map_err(|e| e.to_string())?;
            let xy = product(&x, &y).map_err(|e| e.to_string())?;
            let mut yx = product(&y, &x).map_err(|e| e.to_string())?;
            if (dx.degree() * dy.degree()).rem_euclid(2) == 1 {
                yx.scale(&qi(-1));
            }
            if xy != yx {
                return Err(format!("case {k}: commutativity fails on {dx:?}, {dy:?} in {ctx:?}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("leibniz", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
        for k in 0..cases {
            let (ci, _) = pools.random_ctx(&mut rng);
            let (Some(dx), Some(dy)) =
                (pools.random_diagram(ci, &mut rng), pools.random_diagram(ci, &mut rng))
            else {
                continue;
            };
            let x = DiagramCombo::from_diagram(dx, &qi(1)).map_err(|e| e.to_string())?;
            let y = DiagramCombo::from_diagram(dy, &qi(1)).map_err(|e| e.to_string())?;
            let lhs = differential(&product(&x, &y).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let mut rhs = product(&differential(&x).map_err(|e| e.to_string())?, &y)
                .map_err(|e| e.to_string())?;
            let mut t2 = product(&x, &differential(&y).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if dx.degree().rem_euclid(2) == 1 {
                t2.scale(&qi(-1));
            }
            rhs.add(&t2);
            if lhs != rhs {
                return Err(format!("case {k}: Leibniz fails on {dx:?}, {dy:?}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("quotient_projection_chain_map", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 8);
        for k in 0..cases {
            let (ci, ctx) = pools.random_ctx(&mut rng);
            if ctx.quotient != Quotient::Dbar {
                continue;
            }
            let x = pools.random_combo(ci, &mut rng, 3);
            let lhs = project_to_d(&differential(&x).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let rhs = differential(&project_to_d(&x).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("case {k}: projection is not a chain map on {x:?}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("left_normalize_preserves_pbw", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 9);
        for k in 0..cases {
            let j = rng.gen_range(2..=4usize);
            let b = random_bracket(&mut rng, j, 3);
            if b.length() > 5 {
                continue;
            }
            for d in [1usize, 2] {
                let direct = pbw_of_bracket(&b, d);
                let normed = pbw_expand(&left_normalize(&b, d).map_err(|e| e.to_string())?, d);
                if direct != normed {
                    return Err(format!("case {k}: PBW mismatch for {b} at degree {d}"));
                }
            }
        }
        Ok(())
    }));

    out.push(prop!("pair_homotopy_ignores_exact_terms", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 10);
        let ctx = Context::new(2, 3, Quotient::Dbar).map_err(|e| e.to_string())?;
        let tripod = Diagram::new_nonzero(ctx, 1, vec![(1, 3), (1, 3), (2, 3)])
            .map_err(|e| e.to_string())?;
        let z0 = DiagramCombo::from_diagram(&tripod, &qi(-1)).map_err(|e| e.to_string())?;
        let z = lift_cocycle(&z0, Caps::default()).map_err(|e| e.to_string())?;
        let b = BracketExpr::br(
            BracketExpr::gen(2, 1).map_err(|e| e.to_string())?,
            BracketExpr::gen(2, 1).map_err(|e| e.to_string())?,
        );
        let base = pair_homotopy(&b, &z, Convention::Samelson).map_err(|e| e.to_string())?;
        if base != qi(2) {
            return Err(format!("baseline pairing is {base}, expected 2"));
        }
        let ci = pools.ctxs.iter().position(|c| *c == ctx).unwrap();
        for k in 0..cases {
            // z + d_B(u) pairs identically for any u one total degree down
            let u = pools.random_word_combo(ci, &mut rng);
            let mut zd = z.clone();
            zd.add(&bar_differential(&u).map_err(|e| e.to_string())?);
            if !bar_differential(&zd).map_err(|e| e.to_string())?.is_zero() {
                return Err(format!("case {k}: z + d_B u is not closed"));
            }
            let p = pair_homotopy(&b, &zd, Convention::Samelson).map_err(|e| e.to_string())?;
            if p != base {
                return Err(format!("case {k}: pairing moved from {base} to {p}"));
            }
        }
        Ok(())
    }));

    out.push(prop!("shuffle_associative_and_hopf_dual", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 11);
        for k in 0..cases {
            let (ci, ctx) = pools.random_ctx(&mut rng);
            let mut words = Vec::new();
            for _ in 0..3 {
                let len = rng.gen_range(0..=2);
                let mut f = Vec::new();
                for _ in 0..len {
                    if let Some(d) = pools.random_diagram(ci, &mut rng) {
                        f.push(d.clone());
                    }
                }
                words.push(BarCombo::from_word(Word::from_canonical(ctx, f), qi(1)));
            }
            let (x, y, z) = (&words[0], &words[1], &words[2]);
            let a = shuffle_product(&shuffle_product(x, y).map_err(|e| e.to_string())?, z)
                .map_err(|e| e.to_string())?;
            let b = shuffle_product(x, &shuffle_product(y, z).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("case {k}: shuffle not associative"));
            }
            // Hopf duality: <Delta w, y (x) z> = <w, y ^ z>
            let w: CobarCombo = pools.random_word_combo(ci, &mut rng).transport_side();
            let yz = shuffle_product(y, z).map_err(|e| e.to_string())?;
            let lhs = pair(&w, &yz).map_err(|e| e.to_string())?;
            let mut rhs = Q::from_integer(0.into());
            for (word, c) in w.iter() {
                for (l, r, s) in coshuffle(word) {
                    let pl = pair(&CobarCombo::from_word(l, qi(1)), y).map_err(|e| e.to_string())?;
                    let pr = pair(&CobarCombo::from_word(r, qi(1)), z).map_err(|e| e.to_string())?;
                    rhs += c.clone() * crate::rat::qsign(s) * pl * pr;
                }
            }
            if lhs != rhs {
                return Err(format!("case {k}: coshuffle is not dual to shuffle"));
            }
        }
        Ok(())
    }));

    out.push(prop!("canonicalize_sign_composition", cases, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 12);
        for k in 0..cases {
            let (ci, ctx) = pools.random_ctx(&mut rng);
            let Some(d) = pools.random_diagram(ci, &mut rng) else { continue };
            let m = ctx.m;
            let v = d.free_count();
            // random relabeling of free vertices and, for odd n, random
            // edge reversals; for even n, a random transposition of edges
            let mut perm: Vec<usize> = (m + 1..=m + v).collect();
            perm.shuffle(&mut rng);
            let mut sign = permutation_sign(&perm, m);
            let relab = |x: usize| if x > m { perm[x - m - 1] } else { x };
            let mut edges: Vec<(usize, usize)> = d
                .edges()
                .iter()
                .map(|&(a, b)| (relab(a), relab(b)))
                .collect();
            if ctx.odd() {
                for e in edges.iter_mut() {
                    if rng.gen_bool(0.5) {
                        *e = (e.1, e.0);
                        sign = -sign;
                    }
                }
            } else {
                for e in edges.iter_mut() {
                    if e.0 > e.1 {
                        *e = (e.1, e.0);
                    }
                }
                if edges.len() >= 2 {
                    let i = rng.gen_range(0..edges.len());
                    let j = rng.gen_range(0..edges.len());
                    if i != j {
                        edges.swap(i, j);
                        sign = -sign;
                    }
                }
            }
            let d2 = Diagram::new_nonzero(ctx, v, edges).map_err(|e| e.to_string())?;
            match d2.canonicalize().map_err(|e| e.to_string())? {
                Canon::Zero => return Err(format!("case {k}: relabeled diagram became zero")),
                Canon::NonZero { key, sign: s } => {
                    if &key != d || s != sign {
                        return Err(format!(
                            "case {k}: expected ({d:?}, {sign}), got ({key:?}, {s})"
                        ));
                    }
                }
            }
        }
        Ok(())
    }));

    out.push(prop!("theta_as_cobar_cycle", cases / 10, {
        // a slower structural property: theta values are length-one
        // cobar cycles
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 13);
        for k in 0..cases / 10 {
            let j = rng.gen_range(2..=3usize);
            let b = random_bracket(&mut rng, j, 2);
            if b.length() > 3 {
                continue;
            }
            let ctx = Context::new(3, if k % 2 == 0 { 3 } else { 4 }, Quotient::Dbar)
                .map_err(|e| e.to_string())?;
            let th = crate::theta::theta(&b, ctx, Convention::Samelson)
                .map_err(|e| e.to_string())?;
            let c = cobar_differential(&as_length_one(&th)).map_err(|e| e.to_string())?;
            if !c.is_zero() {
                return Err(format!("case {k}: theta({b}) is not a cobar cycle"));
            }
        }
        Ok(())
    }));

    Ok(out)
}

fn permutation_sign(perm: &[usize], m: usize) -> i8 {
    let mut idx: Vec<usize> = perm.iter().map(|&p| p - m - 1).collect();
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
