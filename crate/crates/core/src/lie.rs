//! Free graded Lie algebra machinery: bracket expressions in the
//! generators `B_{j,i}`, left-normed rewriting, the PBW-expansion equality
//! oracle, dimension formulas, and the Yang-Baxter relation elements.

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::linalg::{rref_rank, QMat};
use crate::rat::{qi, qsign, Q};
use std::collections::BTreeMap;
use std::fmt;

/// Samelson vs. Whitehead bracket convention.  The Lie algebra itself
/// never changes; the flag only alters the signs emitted by the theta
/// recursion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Convention {
    Samelson,
    Whitehead,
}

/// A binary bracket expression over the generators `B_{j,i}`, `i < j`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BracketExpr {
    Gen { j: usize, i: usize },
    Br(Box<BracketExpr>, Box<BracketExpr>),
}

impl BracketExpr {
    pub fn gen(j: usize, i: usize) -> Result<Self> {
        if i < 1 || i >= j {
            return Err(Error::Domain(format!("generator B_({j},{i}) needs 1 <= i < j")));
        }
        Ok(BracketExpr::Gen { j, i })
    }

    pub fn br(a: BracketExpr, b: BracketExpr) -> Self {
        BracketExpr::Br(Box::new(a), Box::new(b))
    }

    /// Left-normed `[B_{j,i1},...,B_{j,ik}]`.
    pub fn left_normed(j: usize, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain("empty multi-index".into()));
        }
        let mut acc = BracketExpr::gen(j, indices[0])?;
        for &i in &indices[1..] {
            acc = BracketExpr::br(acc, BracketExpr::gen(j, i)?);
        }
        Ok(acc)
    }

    /// Number of generators, counted with multiplicity.
    pub fn length(&self) -> usize {
        match self {
            BracketExpr::Gen { .. } => 1,
            BracketExpr::Br(a, b) => a.length() + b.length(),
        }
    }

    /// Samelson degree in ambient dimension `n`.
    pub fn degree(&self, n: usize) -> isize {
        (self.length() * (n - 2)) as isize
    }

    pub fn generators(&self) -> Vec<(usize, usize)> {
        match self {
            BracketExpr::Gen { j, i } => vec![(*j, *i)],
            BracketExpr::Br(a, b) => {
                let mut v = a.generators();
                v.extend(b.generators());
                v
            }
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        for (j, i) in self.generators() {
            if !(1 <= i && i < j && j <= m) {
                return Err(Error::Domain(format!(
                    "generator B_({j},{i}) out of range for m = {m}"
                )));
            }
        }
        Ok(())
    }

    /// The common outer index, when there is one.
    pub fn common_j(&self) -> Option<usize> {
        let gens = self.generators();
        let j = gens[0].0;
        gens.iter().all(|g| g.0 == j).then_some(j)
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketExpr::Gen { j, i } => write!(f, "B({j},{i})"),
            BracketExpr::Br(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// A left-normed monomial key: `(j, (i1,...,ik))`.
pub type LnKey = (usize, Vec<usize>);

/// A rational combination of left-normed monomials.  This is a spanning
/// representation, not a basis: equality in the Lie algebra is decided by
/// `pbw_expand`.
pub type LieCombo = LinComb<LnKey>;

fn sign_pow(e: usize) -> i8 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Rewrites a bracket expression as a combination of left-normed
/// monomials, equal to it in the free graded Lie algebra on generators of
/// degree `gen_degree`.
pub fn left_normalize(b: &BracketExpr, gen_degree: usize) -> Result<LieCombo> {
    let d = gen_degree % 2;
    match b {
        BracketExpr::Gen { j, i } => Ok(LieCombo::singleton((*j, vec![*i]), qi(1))),
        BracketExpr::Br(a, c) => {
            let la = left_normalize(a, gen_degree)?;
            let lc = left_normalize(c, gen_degree)?;
            let mut out = LieCombo::zero();
            for (ka, va) in la.iter() {
                for (kc, vc) in lc.iter() {
                    let part = ln_pair(ka, kc, d)?;
                    out.add(&part.scaled(&(va.clone() * vc.clone())));
                }
            }
            Ok(out)
        }
    }
}

/// `[U, V]` for left-normed monomials, rewritten left-normed.  Uses the
/// graded Jacobi identity, peeling the last generator off the left factor
/// until the right factor is a single generator.
fn ln_pair(u: &LnKey, v: &LnKey, d: usize) -> Result<LieCombo> {
    if u.0 != v.0 {
        return Err(Error::Domain(format!(
            "left-normed rewriting needs a common outer index, got {} and {}",
            u.0, v.0
        )));
    }
    let j = u.0;
    let (lu, lv) = (u.1.len(), v.1.len());
    if lv == 1 {
        let mut w = u.1.clone();
        w.push(v.1[0]);
        return Ok(LieCombo::singleton((j, w), qi(1)));
    }
    if lu == 1 {
        // [u, V] = -(-1)^{|u||V|} [V, u], and [V, u] appends
        let mut w = v.1.clone();
        w.push(u.1[0]);
        let sign = -sign_pow(d * d * lv) as i64;
        return Ok(LieCombo::singleton((j, w), qi(sign)));
    }
    // U = [U1, x]
    let x = *u.1.last().unwrap();
    let u1: LnKey = (j, u.1[..lu - 1].to_vec());
    // [[U1,x],V] = -(-1)^{|U1||V|+|U1||x|} [[x,V],U1]
    //             -(-1)^{|U1||V|+|x||V|} [[V,U1],x]
    // and the first term is flipped to [U1,[x,V]] so that the left factor
    // strictly shrinks (the total length is constant there).
    let e1 = d * (lu - 1) * lv + d * (lu - 1);
    let e2 = d * (lu - 1) * lv + d * lv;
    let e3 = d * (lv + 1) * (lu - 1);

    // [x,V] = -(-1)^{|x||V|} (V ++ x)
    let mut vx = v.1.clone();
    vx.push(x);
    let c_xv = -sign_pow(d * d * lv) as i64;
    let t1 = ln_pair(&u1, &(j, vx), d)?
        .scaled(&(qi(c_xv) * qsign(sign_pow(e1 + e3))));

    let mut t2 = ln_pair(&(j, v.1.clone()), &u1, d)?;
    t2 = t2.map_keys(|(jj, w)| {
        let mut w2 = w.clone();
        w2.push(x);
        (*jj, w2)
    });
    let t2 = t2.scaled(&qsign(-sign_pow(e2)));

    let mut out = t1;
    out.add(&t2);
    Ok(out)
}

/// A word in the free graded associative algebra: a sequence of generator
/// ids.
pub type PbwWord = Vec<(usize, usize)>;
pub type PbwPoly = LinComb<PbwWord>;

/// Expands a bracket expression into the free graded associative algebra
/// via `[x,y] -> xy - (-1)^{|x||y|} yx`.  Zero iff the expression is zero
/// in the free graded Lie algebra.
pub fn pbw_of_bracket(b: &BracketExpr, gen_degree: usize) -> PbwPoly {
    match b {
        BracketExpr::Gen { j, i } => PbwPoly::singleton(vec![(*j, *i)], qi(1)),
        BracketExpr::Br(x, y) => {
            let px = pbw_of_bracket(x, gen_degree);
            let py = pbw_of_bracket(y, gen_degree);
            let sign = sign_pow(x.length() * y.length() * gen_degree * gen_degree);
            let mut out = poly_mul(&px, &py);
            out.add(&poly_mul(&py, &px).scaled(&-qsign(sign)));
            out
        }
    }
}

/// Expands a combination of left-normed monomials.
pub fn pbw_expand(x: &LieCombo, gen_degree: usize) -> PbwPoly {
    let mut out = PbwPoly::zero();
    for ((j, word), c) in x.iter() {
        let b = BracketExpr::left_normed(*j, word).expect("stored key is valid");
        out.add(&pbw_of_bracket(&b, gen_degree).scaled(c));
    }
    out
}

fn poly_mul(a: &PbwPoly, b: &PbwPoly) -> PbwPoly {
    let mut out = PbwPoly::zero();
    for (wa, ca) in a.iter() {
        for (wb, cb) in b.iter() {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            out.add_term(w, ca.clone() * cb.clone());
        }
    }
    out
}

/// Dimension of the length-`length` component of the free graded Lie
/// algebra on `generators` generators of degree `gen_degree`, by ranking
/// the PBW expansions of all left-normed monomials.
pub fn free_lie_dimension(generators: usize, length: usize, gen_degree: usize) -> Result<usize> {
    if generators == 0 || length == 0 {
        return Err(Error::Domain("need at least one generator and positive length".into()));
    }
    let count = (generators as u64).checked_pow(length as u32).unwrap_or(u64::MAX);
    if count > 100_000 {
        return Err(Error::Capacity(format!(
            "{count} left-normed monomials exceed the PBW oracle cap"
        )));
    }
    // generators are modeled as B_{g+1, i}, i = 1..generators
    let j = generators + 1;
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..length {
        words = words
            .into_iter()
            .flat_map(|w| {
                (1..=generators).map(move |i| {
                    let mut w2 = w.clone();
                    w2.push(i);
                    w2
                })
            })
            .collect();
    }
    let mut col_index: BTreeMap<PbwWord, usize> = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, Q)>> = Vec::new();
    for w in &words {
        let poly = pbw_expand(&LieCombo::singleton((j, w.clone()), qi(1)), gen_degree);
        let mut row = Vec::new();
        for (word, c) in poly.iter() {
            let next = col_index.len();
            let idx = *col_index.entry(word.clone()).or_insert(next);
            row.push((idx, c.clone()));
        }
        rows.push(row);
    }
    let mat = QMat::from_rows(col_index.len(), rows);
    Ok(rref_rank(&mat).rank)
}

fn moebius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// The Witt-style count `N_r(m) = (1/r) sum_{d|r} mu(r/d) m^d`.
pub fn necklace_count(m: u64, r: u64) -> Result<i64> {
    let mut acc: i128 = 0;
    for d in divisors(r) {
        acc += moebius(r / d) as i128 * (m as i128).pow(d as u32);
    }
    if acc % r as i128 != 0 {
        return Err(Error::Domain(format!("necklace count {acc}/{r} is not integral")));
    }
    Ok((acc / r as i128) as i64)
}

/// Dimensions of the braid-invariant space `P_r(m)` and the string-link
/// invariant space `M_r(m)`: `dim P_r = (1/r) sum_{d|r} mu(r/d)
/// sum_{i<m} i^d` and `dim M_r = m N_r(m) - N_{r+1}(m)`.
pub fn milnor_dims(m: u64, r: u64) -> Result<(i64, i64)> {
    if m < 2 || r < 1 {
        return Err(Error::Domain("milnor_dims needs m >= 2, r >= 1".into()));
    }
    let mut acc: i128 = 0;
    for d in divisors(r) {
        let inner: i128 = (1..m).map(|i| (i as i128).pow(d as u32)).sum();
        acc += moebius(r / d) as i128 * inner;
    }
    if acc % r as i128 != 0 {
        return Err(Error::Domain("P_r(m) is not integral".into()));
    }
    let p = (acc / r as i128) as i64;
    let m_dim = m as i64 * necklace_count(m, r)? - necklace_count(m, r + 1)?;
    Ok((p, m_dim))
}

/// A Yang-Baxter relation element: a rational combination of bracket
/// expressions that vanishes in the configuration-space Lie algebra.
#[derive(Clone, Debug)]
pub struct YbElement {
    pub label: String,
    pub terms: Vec<(Q, BracketExpr)>,
    /// The fourth family follows from the others and is kept only for
    /// convenience.
    pub implied: bool,
}

/// The Yang-Baxter relation elements for `m` strands in dimension `n`:
/// `[B_{j,i}, B_{k,l}] = 0` for distinct indices, and the two local
/// three-index families.
pub fn yang_baxter_elements(m: usize, n: usize) -> Result<Vec<YbElement>> {
    if m < 3 {
        return Err(Error::Domain("Yang-Baxter relations need m >= 3".into()));
    }
    let sign_n = if n % 2 == 0 { qi(1) } else { qi(-1) };
    let mut out = Vec::new();

    // [B_{j,i}, B_{k,l}] for i<j, l<k, all four distinct
    for j in 2..=m {
        for i in 1..j {
            for k in 2..=m {
                for l in 1..k {
                    if (j, i) < (k, l) && i != k && i != l && j != k && j != l {
                        out.push(YbElement {
                            label: format!("[B({j},{i}),B({k},{l})]"),
                            terms: vec![(
                                qi(1),
                                BracketExpr::br(BracketExpr::gen(j, i)?, BracketExpr::gen(k, l)?),
                            )],
                            implied: false,
                        });
                    }
                }
            }
        }
    }

    // [B_{i,j}, B_{i,t} + (-1)^n B_{t,j}] for j < t < i
    for j in 1..=m {
        for t in j + 1..=m {
            for i in t + 1..=m {
                out.push(YbElement {
                    label: format!("[B({i},{j}),B({i},{t})+(-1)^n B({t},{j})]"),
                    terms: vec![
                        (
                            qi(1),
                            BracketExpr::br(BracketExpr::gen(i, j)?, BracketExpr::gen(i, t)?),
                        ),
                        (
                            sign_n.clone(),
                            BracketExpr::br(BracketExpr::gen(i, j)?, BracketExpr::gen(t, j)?),
                        ),
                    ],
                    implied: false,
                });
                // [B_{t,j}, B_{i,j} + B_{i,t}], implied by the others
                out.push(YbElement {
                    label: format!("[B({t},{j}),B({i},{j})+B({i},{t})]"),
                    terms: vec![
                        (
                            qi(1),
                            BracketExpr::br(BracketExpr::gen(t, j)?, BracketExpr::gen(i, j)?),
                        ),
                        (
                            qi(1),
                            BracketExpr::br(BracketExpr::gen(t, j)?, BracketExpr::gen(i, t)?),
                        ),
                    ],
                    implied: true,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln(j: usize, idx: &[usize]) -> BracketExpr {
        BracketExpr::left_normed(j, idx).unwrap()
    }

    #[test]
    fn already_left_normed_is_fixed() {
        let b = ln(3, &[1, 2]);
        let c = left_normalize(&b, 1).unwrap();
        assert_eq!(c, LieCombo::singleton((3, vec![1, 2]), qi(1)));
    }

    #[test]
    fn left_normalize_preserves_pbw() {
        // [[X1,X2],[X1,X2]] and friends, both parities
        for d in [1usize, 2] {
            let inner = ln(5, &[1, 2]);
            let b = BracketExpr::br(inner.clone(), BracketExpr::br(ln(5, &[3]), ln(5, &[4])));
            let direct = pbw_of_bracket(&b, d);
            let normed = pbw_expand(&left_normalize(&b, d).unwrap(), d);
            assert_eq!(direct, normed);
        }
    }

    #[test]
    fn squares_vanish_iff_even_degree() {
        let sq = BracketExpr::br(ln(2, &[1]), ln(2, &[1]));
        assert!(pbw_of_bracket(&sq, 2).is_zero());
        let p = pbw_of_bracket(&sq, 1);
        assert_eq!(p, PbwPoly::singleton(vec![(2, 1), (2, 1)], qi(2)));
    }

    #[test]
    fn cubes_vanish() {
        let b = ln(2, &[1, 1, 1]);
        for d in [1usize, 2] {
            assert!(pbw_of_bracket(&b, d).is_zero());
        }
    }

    #[test]
    fn jacobi_expands_to_zero() {
        // (-1)^{|a||c|}[[a,b],c] + cyclic = 0, with degree-1 generators
        let (a, b, c) = (ln(4, &[1]), ln(4, &[2]), ln(4, &[3]));
        let mut acc = PbwPoly::zero();
        for (x, y, z) in [(&a, &b, &c), (&b, &c, &a), (&c, &a, &b)] {
            let term = pbw_of_bracket(
                &BracketExpr::br(BracketExpr::br((*x).clone(), (*y).clone()), (*z).clone()),
                1,
            );
            acc.add(&term.scaled(&qi(-1))); // (-1)^{1*1}
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn odd_square_identity() {
        // [[X,X],h] = -2 [[X,h],X] in odd degree
        let lhs = BracketExpr::br(BracketExpr::br(ln(3, &[1]), ln(3, &[1])), ln(3, &[2]));
        let rhs = BracketExpr::br(BracketExpr::br(ln(3, &[1]), ln(3, &[2])), ln(3, &[1]));
        let mut p = pbw_of_bracket(&lhs, 1);
        p.add(&pbw_of_bracket(&rhs, 1).scaled(&qi(2)));
        assert!(p.is_zero());
    }

    #[test]
    fn free_lie_dims_one_odd_generator() {
        assert_eq!(free_lie_dimension(1, 1, 1).unwrap(), 1);
        assert_eq!(free_lie_dimension(1, 2, 1).unwrap(), 1);
        assert_eq!(free_lie_dimension(1, 3, 1).unwrap(), 0);
    }

    #[test]
    fn free_lie_dims_match_witt_numbers() {
        // even (classical) case vs necklace counts
        for g in 1..=3u64 {
            for l in 1..=4u64 {
                let dim = free_lie_dimension(g as usize, l as usize, 2).unwrap();
                assert_eq!(dim as i64, necklace_count(g, l).unwrap(), "g={g} l={l}");
            }
        }
    }

    #[test]
    fn milnor_dim_examples() {
        let (p1, _) = milnor_dims(4, 1).unwrap();
        assert_eq!(p1, 6); // m(m-1)/2 generators
        let (p2, m2) = milnor_dims(3, 2).unwrap();
        assert_eq!((p2, m2), (1, 1));
        for m in 2..=6 {
            for r in 1..=6 {
                let (p, mm) = milnor_dims(m, r).unwrap();
                assert!(p <= mm, "P_{r}({m}) = {p} > M = {mm}");
            }
        }
    }

    #[test]
    fn yang_baxter_inventory() {
        let els = yang_baxter_elements(4, 3).unwrap();
        assert!(els.iter().any(|e| e.label == "[B(2,1),B(4,3)]"));
        assert!(els.iter().any(|e| e.implied));
        assert!(yang_baxter_elements(2, 3).is_err());
    }
}
