//! Finite formal sums with exact rational coefficients, keyed by any
//! ordered key type.  Zero coefficients are pruned eagerly so that
//! equality of combos is equality of maps.

use crate::rat::Q;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb<K: Ord + Clone> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord + Clone> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn singleton(key: K, coeff: Q) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coeff);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, key: K, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (k, v) in other.iter() {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub(&mut self, other: &Self) {
        for (k, v) in other.iter() {
            self.add_term(k.clone(), -v.clone());
        }
    }

    pub fn scale(&mut self, c: &Q) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c.clone();
        }
    }

    pub fn scaled(mut self, c: &Q) -> Self {
        self.scale(c);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn into_iter_terms(self) -> impl Iterator<Item = (K, Q)> {
        self.terms.into_iter()
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, v) in self.iter() {
            out.add_term(f(k), v.clone());
        }
        out
    }

    /// Applies a combo-valued map to every key and sums, i.e. the linear
    /// extension of `f`.
    pub fn flat_map<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> LinComb<L>) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, v) in self.iter() {
            let mut part = f(k);
            part.scale(v);
            out.add(&part);
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for LinComb<K> {
    fn from_iter<T: IntoIterator<Item = (K, Q)>>(iter: T) -> Self {
        let mut c = Self::zero();
        for (k, v) in iter {
            c.add_term(k, v);
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    #[test]
    fn cancellation_prunes() {
        let mut c = LinComb::singleton("a", qi(2));
        c.add_term("a", qi(-2));
        assert!(c.is_zero());
        c.add_term("b", qi(1));
        c.add_term("b", qi(1));
        assert_eq!(c.coeff(&"b"), qi(2));
        assert_eq!(c.len(), 1);
    }
}
