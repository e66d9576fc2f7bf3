//! Sparse elements of the tensor algebra on two letters. The free Lie
//! algebra embeds here; brackets, derivation actions and the Dynkin map are
//! all computed at this level.

use std::collections::BTreeMap;

use crate::freelie::word::{MultiDegree, Word};
use crate::scalar::Rat;

/// Sparse noncommutative polynomial: a finite `word -> coefficient` map with
/// no explicit zeros.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct NcPoly {
    terms: BTreeMap<Word, Rat>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn word(w: Word) -> NcPoly {
        let mut terms = BTreeMap::new();
        terms.insert(w, Rat::one());
        NcPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Rat)>>(iter: I) -> NcPoly {
        let mut p = NcPoly::zero();
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    /// Smallest word present (length first, then lex).
    pub fn min_word(&self) -> Option<(&Word, &Rat)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, w: Word, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &NcPoly) {
        for (w, c) in &other.terms {
            self.add_term(*w, c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &NcPoly) {
        for (w, c) in &other.terms {
            self.add_term(*w, -c);
        }
    }

    pub fn add_scaled(&mut self, other: &NcPoly, s: &Rat) {
        if s.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(*w, c * s);
        }
    }

    #[must_use]
    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    #[must_use]
    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    #[must_use]
    pub fn neg(&self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect(),
        }
    }

    #[must_use]
    pub fn scale(&self, s: &Rat) -> NcPoly {
        if s.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (*w, c * s)).collect(),
        }
    }

    /// Concatenation product.
    #[must_use]
    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// `[self, other] = self*other - other*self`.
    #[must_use]
    pub fn commutator(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.mul(other);
        out.sub_assign(&other.mul(self));
        out
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Split into homogeneous parts by multidegree.
    pub fn multidegree_components(&self) -> BTreeMap<MultiDegree, NcPoly> {
        let mut out: BTreeMap<MultiDegree, NcPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.multidegree())
                .or_default()
                .add_term(*w, c.clone());
        }
        out
    }

    /// `Some(mu)` when all words share the multidegree `mu`.
    pub fn homogeneous_multidegree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys();
        let mu = it.next()?.multidegree();
        it.all(|w| w.multidegree() == mu).then_some(mu)
    }

    /// Action of the derivation sending letter `l` to `images[l]`, extended
    /// to the tensor algebra by the Leibniz rule. On Lie elements this is
    /// exactly the Lie-algebra derivation determined by the generator images.
    #[must_use]
    pub fn apply_derivation(&self, images: [&NcPoly; 2]) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            for i in 0..w.len() {
                let img = images[w.get(i) as usize];
                if img.is_zero() {
                    continue;
                }
                let prefix = w.prefix(i);
                let suffix = w.suffix_from(i + 1);
                for (u, d) in &img.terms {
                    out.add_term(prefix.concat(u).concat(&suffix), c * d);
                }
            }
        }
        out
    }

    /// Linear extension of the left-normed bracketing
    /// `x1 x2 ... xn -> [...[[x1,x2],x3]...,xn]`; letters map to themselves
    /// and the empty word is dropped.
    #[must_use]
    pub fn dynkin(&self) -> NcPoly {
        let mut out = NcPoly::zero();
        let mut by_last = [NcPoly::zero(), NcPoly::zero()];
        for (w, c) in &self.terms {
            match w.len() {
                0 => {}
                1 => out.add_term(*w, c.clone()),
                _ => {
                    let (head, last) = w.split_last();
                    by_last[last as usize].add_term(head, c.clone());
                }
            }
        }
        for (l, part) in by_last.into_iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            let d = part.dynkin();
            let x = NcPoly::word(Word::letter(l as u8));
            out.add_assign(&d.commutator(&x));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::word::Alphabet;

    fn w(s: &str) -> Word {
        Word::parse(s, Alphabet::AT).unwrap()
    }

    fn poly(pairs: &[(&str, i64)]) -> NcPoly {
        NcPoly::from_terms(pairs.iter().map(|(s, c)| (w(s), Rat::from_int(*c))))
    }

    #[test]
    fn product_and_commutator() {
        let t = NcPoly::word(w("T"));
        let a = NcPoly::word(w("A"));
        let theta = t.commutator(&a);
        assert_eq!(theta, poly(&[("TA", 1), ("AT", -1)]));
        assert!(theta.commutator(&theta).is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut p = poly(&[("AT", 1)]);
        p.add_term(w("AT"), Rat::from_int(-1));
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn derivation_action_is_leibniz() {
        // d(A) = 0, d(T) = -A: the lowering operator.
        let zero = NcPoly::zero();
        let img_t = poly(&[("A", -1)]);
        let theta = poly(&[("TA", 1), ("AT", -1)]);
        let got = theta.apply_derivation([&zero, &img_t]);
        // d(TA - AT) = -AA + AA = 0.
        assert!(got.is_zero());
        let tt = poly(&[("TT", 1)]);
        assert_eq!(
            tt.apply_derivation([&zero, &img_t]),
            poly(&[("AT", -1), ("TA", -1)])
        );
    }

    #[test]
    fn dynkin_on_small_elements() {
        // D(TA) = [T,A] = TA - AT; D(theta) = 2*theta.
        let ta = poly(&[("TA", 1)]);
        assert_eq!(ta.dynkin(), poly(&[("TA", 1), ("AT", -1)]));
        let theta = poly(&[("TA", 1), ("AT", -1)]);
        assert_eq!(theta.dynkin(), theta.scale(&Rat::from_int(2)));
        // Letters are fixed, constants die.
        assert_eq!(poly(&[("A", 5)]).dynkin(), poly(&[("A", 5)]));
        assert!(NcPoly::word(Word::empty()).dynkin().is_zero());
    }
}
