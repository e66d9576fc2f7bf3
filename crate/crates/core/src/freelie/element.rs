//! Lie elements: formal sums of homogeneous components, each kept as a
//! noncommutative polynomial known to lie in the free Lie algebra.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::freelie::lyndon::{lie_coords, lyndon_words, nc_from_coords, FreeLieError};
use crate::freelie::ncpoly::NcPoly;
use crate::freelie::word::{Alphabet, MultiDegree, Word};
use crate::linalg::QMat;
use crate::scalar::Rat;

/// An element of the free Lie algebra on two letters, stored per
/// multidegree. Inhomogeneous values are formal lists of homogeneous
/// components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieElement {
    alphabet: Alphabet,
    comps: BTreeMap<MultiDegree, NcPoly>,
}

impl LieElement {
    pub fn zero(alphabet: Alphabet) -> Self {
        LieElement {
            alphabet,
            comps: BTreeMap::new(),
        }
    }

    pub fn generator(alphabet: Alphabet, letter: u8) -> Self {
        let w = Word::letter(letter);
        let mut comps = BTreeMap::new();
        comps.insert(w.multidegree(), NcPoly::word(w));
        LieElement { alphabet, comps }
    }

    /// `theta = [T, A]`, the bracket of the two letters (larger first).
    pub fn theta(alphabet: Alphabet) -> Self {
        let t = LieElement::generator(alphabet, 1);
        let a = LieElement::generator(alphabet, 0);
        t.bracket(&a).expect("same alphabet")
    }

    /// Wrap a noncommutative polynomial, verifying per component that it is
    /// a Lie element.
    pub fn from_ncpoly(alphabet: Alphabet, p: &NcPoly) -> Result<Self, FreeLieError> {
        let mut comps = BTreeMap::new();
        for (mu, part) in p.multidegree_components() {
            lie_coords(mu, &part)?;
            comps.insert(mu, part);
        }
        Ok(LieElement { alphabet, comps })
    }

    /// Internal constructor for values that are Lie by construction.
    pub(crate) fn from_ncpoly_unchecked(alphabet: Alphabet, p: NcPoly) -> Self {
        LieElement {
            alphabet,
            comps: p.multidegree_components(),
        }
    }

    pub fn from_lyndon_coords(
        alphabet: Alphabet,
        mu: MultiDegree,
        coords: &[Rat],
    ) -> Result<Self, FreeLieError> {
        if lyndon_words(mu).len() != coords.len() {
            return Err(FreeLieError::NotHomogeneous(mu.0, mu.1));
        }
        let nc = nc_from_coords(mu, coords);
        let mut comps = BTreeMap::new();
        if !nc.is_zero() {
            comps.insert(mu, nc);
        }
        Ok(LieElement { alphabet, comps })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Multidegrees of the nonzero components, ascending.
    pub fn multidegrees(&self) -> Vec<MultiDegree> {
        self.comps.keys().copied().collect()
    }

    pub fn component(&self, mu: MultiDegree) -> NcPoly {
        self.comps.get(&mu).cloned().unwrap_or_else(NcPoly::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&MultiDegree, &NcPoly)> {
        self.comps.iter()
    }

    /// `Some(mu)` when the element is zero or concentrated in one
    /// multidegree (zero reports `None`).
    pub fn homogeneous_multidegree(&self) -> Option<MultiDegree> {
        if self.comps.len() == 1 {
            self.comps.keys().next().copied()
        } else {
            None
        }
    }

    pub fn max_total_degree(&self) -> usize {
        self.comps.keys().map(MultiDegree::total).max().unwrap_or(0)
    }

    /// Drop components of total degree above `k`.
    #[must_use]
    pub fn truncate(&self, k: usize) -> Self {
        LieElement {
            alphabet: self.alphabet,
            comps: self
                .comps
                .iter()
                .filter(|(mu, _)| mu.total() <= k)
                .map(|(mu, p)| (*mu, p.clone()))
                .collect(),
        }
    }

    /// Flatten to a single noncommutative polynomial.
    pub fn nc(&self) -> NcPoly {
        let mut out = NcPoly::zero();
        for p in self.comps.values() {
            out.add_assign(p);
        }
        out
    }

    fn edit<F: FnOnce(&mut BTreeMap<MultiDegree, NcPoly>)>(&self, f: F) -> Self {
        let mut comps = self.comps.clone();
        f(&mut comps);
        comps.retain(|_, p| !p.is_zero());
        LieElement {
            alphabet: self.alphabet,
            comps,
        }
    }

    pub fn add(&self, other: &LieElement) -> Result<Self, FreeLieError> {
        if self.alphabet != other.alphabet {
            return Err(FreeLieError::AlphabetMismatch);
        }
        Ok(self.edit(|comps| {
            for (mu, p) in &other.comps {
                comps.entry(*mu).or_default().add_assign(p);
            }
        }))
    }

    pub fn sub(&self, other: &LieElement) -> Result<Self, FreeLieError> {
        self.add(&other.neg())
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    #[must_use]
    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return LieElement::zero(self.alphabet);
        }
        LieElement {
            alphabet: self.alphabet,
            comps: self.comps.iter().map(|(mu, p)| (*mu, p.scale(s))).collect(),
        }
    }

    pub fn add_scaled(&self, other: &LieElement, s: &Rat) -> Result<Self, FreeLieError> {
        self.add(&other.scale(s))
    }

    /// Lie bracket, computed in the tensor algebra.
    pub fn bracket(&self, other: &LieElement) -> Result<Self, FreeLieError> {
        if self.alphabet != other.alphabet {
            return Err(FreeLieError::AlphabetMismatch);
        }
        let mut comps: BTreeMap<MultiDegree, NcPoly> = BTreeMap::new();
        for (mu1, p) in &self.comps {
            for (mu2, q) in &other.comps {
                let c = p.commutator(q);
                if !c.is_zero() {
                    comps.entry(mu1.add(mu2)).or_default().add_assign(&c);
                }
            }
        }
        comps.retain(|_, p| !p.is_zero());
        Ok(LieElement {
            alphabet: self.alphabet,
            comps,
        })
    }

    /// `ad_x^k(y)`.
    pub fn ad_pow(x: &LieElement, k: usize, y: &LieElement) -> Result<Self, FreeLieError> {
        let mut acc = y.clone();
        for _ in 0..k {
            acc = x.bracket(&acc)?;
        }
        Ok(acc)
    }

    /// Lyndon coordinates of the `mu` component (zeros when absent).
    pub fn lyndon_coordinates(&self, mu: MultiDegree) -> Vec<Rat> {
        match self.comps.get(&mu) {
            Some(p) => lie_coords(mu, p).expect("stored components are Lie elements"),
            None => vec![Rat::zero(); lyndon_words(mu).len()],
        }
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for p in self.comps.values() {
            for (w, c) in p.terms() {
                if first {
                    first = false;
                    write!(f, "{}*{}", c, w.to_display(self.alphabet))?;
                } else {
                    write!(f, " + {}*{}", c, w.to_display(self.alphabet))?;
                }
            }
        }
        Ok(())
    }
}

/// Left-normed bracketing map on each homogeneous component. `D(p) = n*p`
/// exactly on Lie components; this is the membership test independent of
/// the Lyndon machinery.
pub fn is_lie(p: &NcPoly) -> bool {
    for (mu, part) in p.multidegree_components() {
        let n = Rat::from_int(mu.total() as i64);
        if part.dynkin() != part.scale(&n) {
            return false;
        }
    }
    true
}

/// Project a homogeneous polynomial onto the free Lie algebra: `D(p)/n`.
/// This is the identity on Lie elements.
pub fn dynkin_project(p: &NcPoly) -> Result<NcPoly, FreeLieError> {
    let Some(mu) = p.homogeneous_multidegree() else {
        if p.is_zero() {
            return Ok(NcPoly::zero());
        }
        return Err(FreeLieError::NotHomogeneous(0, 0));
    };
    let n = mu.total();
    if n == 0 {
        return Err(FreeLieError::NotHomogeneous(0, 0));
    }
    Ok(p.dynkin().scale(&Rat::frac(1, n as i64)))
}

/// Coordinates of `x` in the span of `span` (all homogeneous of one common
/// multidegree). `Ok(None)` when `x` is outside the span.
pub fn coordinates(x: &LieElement, span: &[LieElement]) -> Result<Option<Vec<Rat>>, FreeLieError> {
    if span.is_empty() {
        return if x.is_zero() {
            Ok(Some(Vec::new()))
        } else {
            Ok(None)
        };
    }
    let mut mu = None;
    for v in span {
        if v.alphabet() != x.alphabet() {
            return Err(FreeLieError::AlphabetMismatch);
        }
        match (mu, v.homogeneous_multidegree()) {
            (_, None) => return Err(FreeLieError::MixedSpan),
            (None, m) => mu = m,
            (Some(m1), Some(m2)) if m1 != m2 => return Err(FreeLieError::MixedSpan),
            _ => {}
        }
    }
    let mu = mu.expect("nonempty span");
    if !(x.is_zero() || x.homogeneous_multidegree() == Some(mu)) {
        return Ok(None); // homogeneous elsewhere or inhomogeneous: not in the span
    }
    // Columns are span vectors in Lyndon coordinates.
    let dim = lyndon_words(mu).len();
    let mut m = QMat::zero(dim, span.len());
    for (j, v) in span.iter().enumerate() {
        for (i, c) in v.lyndon_coordinates(mu).into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok(m.solve(&x.lyndon_coordinates(mu)))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct LieElementJson {
    alphabet: String,
    terms: Vec<TermJson>,
}

impl Serialize for LieElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .comps
            .values()
            .flat_map(|p| {
                p.terms()
                    .map(|(w, c)| TermJson {
                        word: w.to_display(self.alphabet),
                        coeff: c.to_string(),
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        LieElementJson {
            alphabet: self.alphabet.name().to_owned(),
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LieElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = LieElementJson::deserialize(deserializer)?;
        let alphabet = Alphabet::parse_name(&raw.alphabet)
            .ok_or_else(|| D::Error::custom(format!("unknown alphabet {:?}", raw.alphabet)))?;
        let mut nc = NcPoly::zero();
        for t in &raw.terms {
            let w = Word::parse(&t.word, alphabet).map_err(D::Error::custom)?;
            let c: Rat = t.coeff.parse().map_err(D::Error::custom)?;
            nc.add_term(w, c);
        }
        LieElement::from_ncpoly(alphabet, &nc).map_err(D::Error::custom)
    }
}

/// Parse a bracket expression such as `[T,A]`, `3/2*[X0,[X0,X1]] - X1`, or
/// `A`. Letters are `A`,`T` or `X0`,`X1` depending on the alphabet.
pub fn parse_lie_expr(alphabet: Alphabet, input: &str) -> Result<LieElement, FreeLieError> {
    let mut p = Parser {
        alphabet,
        chars: input.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(FreeLieError::Parse(
            p.pos,
            "unexpected trailing input".to_string(),
        ));
    }
    Ok(e)
}

struct Parser {
    alphabet: Alphabet,
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, what: &str) -> FreeLieError {
        FreeLieError::Parse(self.pos, what.to_string())
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> Result<(), FreeLieError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn expr(&mut self) -> Result<LieElement, FreeLieError> {
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            neg = true;
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LieElement, FreeLieError> {
        self.skip_ws();
        let mut coeff = Rat::one();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = self.rational()?;
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            } else if self.peek().is_none()
                || matches!(
                    self.peek(),
                    Some('+') | Some('-') | Some(',') | Some(']') | Some(')')
                )
            {
                // bare scalar is not an element
                return Err(self.err("scalar must multiply an element"));
            }
        }
        let f = self.factor()?;
        Ok(f.scale(&coeff))
    }

    fn rational(&mut self) -> Result<Rat, FreeLieError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let mut text: String = self.chars[start..self.pos].iter().collect();
        if self.peek() == Some('/') {
            // lookahead: denominator digits
            let save = self.pos;
            self.pos += 1;
            let dstart = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if dstart == self.pos {
                self.pos = save;
            } else {
                text.push('/');
                text.extend(self.chars[dstart..self.pos].iter());
            }
        }
        text.parse().map_err(|_| self.err("bad rational"))
    }

    fn factor(&mut self) -> Result<LieElement, FreeLieError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let x = self.expr()?;
                self.eat(',')?;
                let y = self.expr()?;
                self.eat(']')?;
                x.bracket(&y)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.eat(')')?;
                Ok(e)
            }
            Some(c) => {
                let letter = match (self.alphabet, c) {
                    (Alphabet::AT, 'A') => {
                        self.pos += 1;
                        0
                    }
                    (Alphabet::AT, 'T') => {
                        self.pos += 1;
                        1
                    }
                    (Alphabet::X01, 'X') => {
                        self.pos += 1;
                        match self.peek() {
                            Some('0') => {
                                self.pos += 1;
                                0
                            }
                            Some('1') => {
                                self.pos += 1;
                                1
                            }
                            _ => return Err(self.err("expected X0 or X1")),
                        }
                    }
                    _ => return Err(self.err("expected a letter, bracket or parenthesis")),
                };
                Ok(LieElement::generator(self.alphabet, letter))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::lyndon::witt_dim;

    fn gen(l: u8) -> LieElement {
        LieElement::generator(Alphabet::AT, l)
    }

    #[test]
    fn bracket_antisymmetry_and_theta() {
        let a = gen(0);
        let t = gen(1);
        let theta = LieElement::theta(Alphabet::AT);
        assert_eq!(t.bracket(&a).unwrap(), theta);
        assert_eq!(a.bracket(&t).unwrap(), theta.neg());
        assert!(theta.bracket(&theta).unwrap().is_zero());
    }

    #[test]
    fn roundtrip_from_ncpoly() {
        let theta = LieElement::theta(Alphabet::AT);
        let e = theta.bracket(&gen(1)).unwrap();
        let back = LieElement::from_ncpoly(Alphabet::AT, &e.nc()).unwrap();
        assert_eq!(back, e);
        // not-Lie input refused
        let p = NcPoly::word(Word::parse("TA", Alphabet::AT).unwrap());
        assert!(LieElement::from_ncpoly(Alphabet::AT, &p).is_err());
    }

    #[test]
    fn lyndon_coordinate_extraction() {
        let mu = MultiDegree(2, 1);
        assert_eq!(witt_dim(mu), 1);
        // [[T,A],A] = [theta, A] has multidegree (2,1).
        let x = LieElement::theta(Alphabet::AT).bracket(&gen(0)).unwrap();
        let coords = x.lyndon_coordinates(mu);
        assert_eq!(coords.len(), 1);
        assert!(!coords[0].is_zero());
        let rebuilt = LieElement::from_lyndon_coords(Alphabet::AT, mu, &coords).unwrap();
        assert_eq!(rebuilt, x);
    }

    #[test]
    fn coordinates_in_span() {
        let theta = LieElement::theta(Alphabet::AT);
        let x1 = theta.bracket(&gen(0)).unwrap(); // (2,1)
        let zero_answer = coordinates(&x1.scale(&Rat::frac(5, 3)), &[x1.clone()]).unwrap();
        assert_eq!(zero_answer, Some(vec![Rat::frac(5, 3)]));
        // Element of a different multidegree is not in the span.
        let y = theta.bracket(&gen(1)).unwrap();
        assert_eq!(coordinates(&y, &[x1.clone()]).unwrap(), None);
        // Mixed-degree span is rejected.
        assert!(matches!(
            coordinates(&x1, &[x1.clone(), y.clone()]),
            Err(FreeLieError::MixedSpan)
        ));
    }

    #[test]
    fn dynkin_projection_behaviour() {
        let x = LieElement::theta(Alphabet::AT).bracket(&gen(0)).unwrap();
        let p = x.nc();
        assert!(is_lie(&p));
        assert_eq!(dynkin_project(&p).unwrap(), p);
        let not_lie = NcPoly::word(Word::parse("TA", Alphabet::AT).unwrap());
        assert!(!is_lie(&not_lie));
        // Projection of TA is theta/2.
        let proj = dynkin_project(&not_lie).unwrap();
        let theta = LieElement::theta(Alphabet::AT).nc();
        assert_eq!(proj, theta.scale(&Rat::frac(1, 2)));
    }

    #[test]
    fn json_roundtrip_matches_interface() {
        let x = LieElement::theta(Alphabet::AT);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(
            json,
            r#"{"alphabet":"AT","terms":[{"word":"AT","coeff":"-1"},{"word":"TA","coeff":"1"}]}"#
        );
        let back: LieElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        // Deserialization validates Lie-ness.
        let bad = r#"{"alphabet":"AT","terms":[{"word":"TA","coeff":"1"}]}"#;
        assert!(serde_json::from_str::<LieElement>(bad).is_err());
    }

    #[test]
    fn expression_parser() {
        let theta = LieElement::theta(Alphabet::AT);
        assert_eq!(parse_lie_expr(Alphabet::AT, "[T,A]").unwrap(), theta);
        assert_eq!(
            parse_lie_expr(Alphabet::AT, "[T, A] - [T,A]").unwrap(),
            LieElement::zero(Alphabet::AT)
        );
        let x = parse_lie_expr(Alphabet::AT, "1/2*[[T,A],A] + 3*T").unwrap();
        let manual = theta
            .bracket(&gen(0))
            .unwrap()
            .scale(&Rat::frac(1, 2))
            .add(&gen(1).scale(&Rat::from_int(3)))
            .unwrap();
        assert_eq!(x, manual);
        let y = parse_lie_expr(Alphabet::X01, "[X0,[X0,X1]]").unwrap();
        assert_eq!(y.multidegrees(), vec![MultiDegree(2, 1)]);
        assert!(parse_lie_expr(Alphabet::AT, "[T,A").is_err());
        assert!(parse_lie_expr(Alphabet::AT, "Q").is_err());
        assert!(parse_lie_expr(Alphabet::AT, "2").is_err());
    }
}
