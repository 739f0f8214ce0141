//! Bar words and the bar complex: tensor words on the augmentation ideal
//! of the diagram algebra with bidegree `(-p, q)`, the differential
//! `d_B = delta_B - D_B`, the shuffle product, and deconcatenation.

use crate::cdga::{differential, product};
use crate::context::Context;
use crate::diagram::{Canon, Diagram, DiagramCombo};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::rat::{qi, qsign, Q};
use std::marker::PhantomData;

/// An ordered word of nonempty canonical diagrams.  The empty word is the
/// unit of the shuffle algebra and is a valid word, never a factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word {
    ctx: Context,
    factors: Vec<Diagram>,
}

impl Word {
    pub fn empty(ctx: Context) -> Word {
        Word { ctx, factors: Vec::new() }
    }

    /// Builds a word from raw diagrams, canonicalizing factor-wise.
    /// Returns the word together with the accumulated orientation sign,
    /// or `None` when some factor is zero.
    pub fn new(ctx: Context, raw: Vec<Diagram>) -> Result<Option<(Word, i8)>> {
        let mut sign = 1i8;
        let mut factors = Vec::with_capacity(raw.len());
        for d in raw {
            if d.ctx() != ctx {
                return Err(Error::ContextMismatch("word factor in a different context".into()));
            }
            if d.is_empty() {
                return Err(Error::InvalidDiagram("empty diagram cannot be a word factor".into()));
            }
            match d.canonicalize()? {
                Canon::Zero => return Ok(None),
                Canon::NonZero { key, sign: s } => {
                    sign *= s;
                    factors.push(key);
                }
            }
        }
        Ok(Some((Word { ctx, factors }, sign)))
    }

    /// Builds a word from already-canonical factors.
    pub fn from_canonical(ctx: Context, factors: Vec<Diagram>) -> Word {
        debug_assert!(factors.iter().all(|f| !f.is_empty() && f.ctx() == ctx));
        Word { ctx, factors }
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn factors(&self) -> &[Diagram] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of the factor degrees (the internal degree `q`).
    pub fn internal_degree(&self) -> isize {
        self.factors.iter().map(|f| f.degree()).sum()
    }

    /// Total degree `q - p`.
    pub fn total_degree(&self) -> isize {
        self.internal_degree() - self.len() as isize
    }

    pub fn split_at(&self, i: usize) -> (Word, Word) {
        (
            Word { ctx: self.ctx, factors: self.factors[..i].to_vec() },
            Word { ctx: self.ctx, factors: self.factors[i..].to_vec() },
        )
    }
}

/// Marker for the bar complex (words of diagrams).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BarSide {}
/// Marker for the cobar complex (words of dual diagrams).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CobarSide {}

/// A rational combination of words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordCombo<Side> {
    ctx: Context,
    terms: LinComb<Word>,
    _side: PhantomData<Side>,
}

pub type BarCombo = WordCombo<BarSide>;
pub type CobarCombo = WordCombo<CobarSide>;

impl<Side> WordCombo<Side> {
    pub fn zero(ctx: Context) -> Self {
        WordCombo { ctx, terms: LinComb::zero(), _side: PhantomData }
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

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.coeff(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn add_word(&mut self, w: Word, c: Q) {
        debug_assert_eq!(w.ctx(), self.ctx);
        self.terms.add_term(w, c);
    }

    /// Adds `c` times the word with the given raw factors.
    pub fn add_raw(&mut self, raw: Vec<Diagram>, c: &Q) -> Result<()> {
        if let Some((w, s)) = Word::new(self.ctx, raw)? {
            self.add_word(w, c.clone() * qsign(s));
        }
        Ok(())
    }

    pub fn from_word(w: Word, c: Q) -> Self {
        let ctx = w.ctx();
        let mut combo = Self::zero(ctx);
        combo.add_word(w, c);
        combo
    }

    pub fn add(&mut self, other: &Self) {
        debug_assert_eq!(self.ctx, other.ctx);
        self.terms.add(&other.terms);
    }

    pub fn sub(&mut self, other: &Self) {
        self.terms.sub(&other.terms);
    }

    pub fn scale(&mut self, c: &Q) {
        self.terms.scale(c);
    }

    pub fn scaled(mut self, c: &Q) -> Self {
        self.scale(c);
        self
    }

    /// The sub-combo of words of length `p`.
    pub fn length_slice(&self, p: usize) -> Self {
        let mut out = Self::zero(self.ctx);
        for (w, c) in self.iter() {
            if w.len() == p {
                out.add_word(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn max_length(&self) -> usize {
        self.iter().map(|(w, _)| w.len()).max().unwrap_or(0)
    }

    /// Transport along the word-wise basis identification between the
    /// bar and cobar sides.
    pub fn transport_side<Other>(&self) -> WordCombo<Other> {
        WordCombo { ctx: self.ctx, terms: self.terms.clone(), _side: PhantomData }
    }

    /// Replaces slot `i` of `base` by every diagram term of `piece`.
    fn splice_one(&mut self, base: &Word, i: usize, piece: &DiagramCombo, scale: &Q) {
        for (k, v) in piece.iter() {
            let mut factors = base.factors().to_vec();
            factors[i] = k.clone();
            self.add_word(Word::from_canonical(self.ctx, factors), scale.clone() * v.clone());
        }
    }

    /// Replaces slots `i, i+1` of `base` by every diagram term of `piece`
    /// (used by the homological part of the bar differential).
    fn merge_two(&mut self, base: &Word, i: usize, piece: &DiagramCombo, scale: &Q) {
        for (k, v) in piece.iter() {
            let mut factors = Vec::with_capacity(base.len() - 1);
            factors.extend_from_slice(&base.factors()[..i]);
            factors.push(k.clone());
            factors.extend_from_slice(&base.factors()[i + 2..]);
            self.add_word(Word::from_canonical(self.ctx, factors), scale.clone() * v.clone());
        }
    }
}

fn sign_pow(deg: isize) -> i8 {
    if deg.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The internal part `delta_B`: contracts inside one factor at a time.
pub fn bar_internal_differential(x: &BarCombo) -> Result<BarCombo> {
    let mut out = BarCombo::zero(x.ctx());
    for (w, c) in x.iter() {
        let mut pref = 1i8;
        for i in 0..w.len() {
            let slot_sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
            let da = differential(&DiagramCombo::from_diagram(&w.factors()[i], &qi(1))?)?;
            let scale = c.clone() * qsign(slot_sign) * qsign(pref);
            out.splice_one(w, i, &da, &scale);
            pref *= sign_pow(w.factors()[i].degree());
        }
    }
    Ok(out)
}

/// The homological part `D_B`: multiplies adjacent factors.  Zero on
/// length-one words (the complex is normalized).
pub fn bar_homological_differential(x: &BarCombo) -> Result<BarCombo> {
    let mut out = BarCombo::zero(x.ctx());
    for (w, c) in x.iter() {
        let mut pref = 1i8;
        for i in 0..w.len().saturating_sub(1) {
            let slot_sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
            let eps_i = sign_pow(w.factors()[i].degree());
            let merged = product(
                &DiagramCombo::from_diagram(&w.factors()[i], &qi(1))?,
                &DiagramCombo::from_diagram(&w.factors()[i + 1], &qi(1))?,
            )?;
            let scale = c.clone() * qsign(slot_sign) * qsign(pref) * qsign(eps_i);
            out.merge_two(w, i, &merged, &scale);
            pref *= eps_i;
        }
    }
    Ok(out)
}

/// The bar differential `d_B = delta_B - D_B`.
pub fn bar_differential(x: &BarCombo) -> Result<BarCombo> {
    let mut out = bar_internal_differential(x)?;
    out.sub(&bar_homological_differential(x)?);
    Ok(out)
}

/// Koszul sign of interleaving two desuspended words: one factor of
/// `(-1)^{(|a|-1)(|b|-1)}` per crossing pair.
fn crossing_sign(a: &Diagram, b: &Diagram) -> i8 {
    sign_pow((a.degree() - 1) * (b.degree() - 1))
}

/// The shuffle product on bar words, linearly extended.
pub fn shuffle_product(x: &BarCombo, y: &BarCombo) -> Result<BarCombo> {
    if x.ctx() != y.ctx() {
        return Err(Error::ContextMismatch("shuffle factors in different contexts".into()));
    }
    let mut out = BarCombo::zero(x.ctx());
    for (u, cu) in x.iter() {
        for (w, cw) in y.iter() {
            for (word, sign) in shuffles(u, w) {
                out.add_word(word, cu.clone() * cw.clone() * qsign(sign));
            }
        }
    }
    Ok(out)
}

/// All `(r, s)`-shuffles of two words with their Koszul signs.
fn shuffles(u: &Word, w: &Word) -> Vec<(Word, i8)> {
    let (r, s) = (u.len(), w.len());
    let ctx = u.ctx();
    let mut out = Vec::new();
    // choose the positions of u's factors among r+s slots
    for mask in combinations(r + s, r) {
        let mut factors = Vec::with_capacity(r + s);
        let (mut iu, mut iw) = (0, 0);
        let mut sign = 1i8;
        for pos in 0..r + s {
            if mask[pos] {
                factors.push(u.factors()[iu].clone());
                iu += 1;
            } else {
                // w-factor crosses every u-factor not yet placed
                for k in iu..r {
                    sign *= crossing_sign(&u.factors()[k], &w.factors()[iw]);
                }
                factors.push(w.factors()[iw].clone());
                iw += 1;
            }
        }
        out.push((Word::from_canonical(ctx, factors), sign));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    let mut cur = vec![false; n];
    fn rec(out: &mut Vec<Vec<bool>>, cur: &mut Vec<bool>, from: usize, left: usize) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        let n = cur.len();
        if from + left > n {
            return;
        }
        for i in from..=n - left {
            cur[i] = true;
            rec(out, cur, i + 1, left - 1);
            cur[i] = false;
        }
    }
    rec(&mut out, &mut cur, 0, k);
    out
}

/// All splittings of a word into prefix and suffix, including the empty
/// ends (the deconcatenation coproduct carries no signs).
pub fn deconcatenation(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|i| w.split_at(i)).collect()
}

/// The co-shuffle coproduct on a (dual) word: all ways of distributing the
/// factors to two sides keeping relative order, with Koszul signs.
pub fn coshuffle(w: &Word) -> Vec<(Word, Word, i8)> {
    let r = w.len();
    let ctx = w.ctx();
    let mut out = Vec::new();
    for i in 0..=r {
        for mask in combinations(r, i) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut sign = 1i8;
            for pos in 0..r {
                if mask[pos] {
                    left.push(w.factors()[pos].clone());
                } else {
                    // this right-factor crosses every later left-factor
                    for later in pos + 1..r {
                        if mask[later] {
                            sign *= crossing_sign(&w.factors()[pos], &w.factors()[later]);
                        }
                    }
                    right.push(w.factors()[pos].clone());
                }
            }
            out.push((
                Word::from_canonical(ctx, left),
                Word::from_canonical(ctx, right),
                sign,
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Quotient;
    use crate::rat::qi;

    fn ctx(m: usize, n: usize) -> Context {
        Context::new(m, n, Quotient::Dbar).unwrap()
    }

    fn chord(c: Context, i: usize, j: usize) -> Diagram {
        Diagram::new_nonzero(c, 0, vec![(i, j)]).unwrap()
    }

    #[test]
    fn word_degrees() {
        let c = ctx(2, 3);
        let w = Word::from_canonical(c, vec![chord(c, 1, 2), chord(c, 1, 2)]);
        assert_eq!(w.internal_degree(), 4);
        assert_eq!(w.total_degree(), 2);
    }

    #[test]
    fn bar_differential_on_single_chord_vanishes() {
        let c = ctx(2, 3);
        let x = BarCombo::from_word(Word::from_canonical(c, vec![chord(c, 1, 2)]), qi(1));
        assert!(bar_differential(&x).unwrap().is_zero());
    }

    #[test]
    fn homological_part_merges() {
        let c = ctx(2, 3);
        let w = Word::from_canonical(c, vec![chord(c, 1, 2), chord(c, 1, 2)]);
        let x = BarCombo::from_word(w, qi(1));
        let d = bar_homological_differential(&x).unwrap();
        // -[(-1)^{|a|} a.b] = -[double chord] since |a| = 2
        assert_eq!(d.len(), 1);
        let (word, coeff) = d.iter().next().unwrap();
        assert_eq!(word.len(), 1);
        assert_eq!(word.factors()[0].edge_count(), 2);
        assert_eq!(*coeff, qi(-1));
    }

    #[test]
    fn two_shuffle() {
        let c = ctx(3, 3);
        let a = chord(c, 1, 2);
        let b = chord(c, 1, 3);
        let x = BarCombo::from_word(Word::from_canonical(c, vec![a.clone()]), qi(1));
        let y = BarCombo::from_word(Word::from_canonical(c, vec![b.clone()]), qi(1));
        let s = shuffle_product(&x, &y).unwrap();
        // [a]^[b] = [a|b] + (-1)^{(|a|-1)(|b|-1)}[b|a], degrees 2 and 2
        let ab = Word::from_canonical(c, vec![a.clone(), b.clone()]);
        let ba = Word::from_canonical(c, vec![b, a]);
        assert_eq!(s.coeff(&ab), qi(1));
        assert_eq!(s.coeff(&ba), qi(-1));
    }

    #[test]
    fn empty_word_is_shuffle_unit() {
        let c = ctx(2, 3);
        let one = BarCombo::from_word(Word::empty(c), qi(1));
        let w = Word::from_canonical(c, vec![chord(c, 1, 2), chord(c, 1, 2)]);
        let x = BarCombo::from_word(w, qi(3));
        assert_eq!(shuffle_product(&one, &x).unwrap(), x);
        assert_eq!(shuffle_product(&x, &one).unwrap(), x);
    }

    #[test]
    fn deconcatenation_splits() {
        let c = ctx(2, 3);
        let a = chord(c, 1, 2);
        let w = Word::from_canonical(c, vec![a.clone(), a.clone()]);
        let splits = deconcatenation(&w);
        assert_eq!(splits.len(), 3);
        assert!(splits[0].0.is_empty() && splits[2].1.is_empty());
    }

    #[test]
    fn coshuffle_singleton_is_primitive() {
        let c = ctx(2, 3);
        let w = Word::from_canonical(c, vec![chord(c, 1, 2)]);
        let parts = coshuffle(&w);
        assert_eq!(parts.len(), 2);
        for (l, r, s) in parts {
            assert_eq!(s, 1);
            assert_eq!(l.len() + r.len(), 1);
        }
    }
}
