//! Derivations of the free Lie algebra on two letters, the canonical
//! family of theta-annihilating derivations indexed by even weights, the
//! sl2 triple acting on them, the truncated monodromy logarithm, and the
//! quadratic highest-weight brackets built from the family.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freelie::{Alphabet, FreeLieError, LieElement, MultiDegree, NcPoly, Word};
use crate::scalar::{bernoulli, binomial, factorial, Rat};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error("weight must be an even nonnegative integer, got {0}")]
    OddWeight(usize),
    #[error("argument must be a nonzero scalar multiple of a single letter")]
    NotLetterMultiple,
    #[error("the two arguments must be multiples of distinct letters")]
    SameLetter,
    #[error("derivation images must be homogeneous with a common bidegree")]
    InhomogeneousImages,
}

/// A derivation determined by its images on the two letters, homogeneous
/// for the (M, W) bigrading. Inhomogeneous operators are kept as explicit
/// lists of these.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    alphabet: Alphabet,
    /// images[l] is the image of letter l.
    images: [LieElement; 2],
    /// Flattened copies of the images, used on every application.
    nc_images: [NcPoly; 2],
    /// (dM, dW) shift; `None` exactly for the zero derivation.
    bidegree: Option<(i64, i64)>,
}

impl Derivation {
    pub fn zero(alphabet: Alphabet) -> Self {
        Derivation {
            alphabet,
            images: [LieElement::zero(alphabet), LieElement::zero(alphabet)],
            nc_images: [NcPoly::zero(), NcPoly::zero()],
            bidegree: None,
        }
    }

    /// Build from letter images, inferring and validating the bidegree.
    pub fn from_images(a_image: LieElement, t_image: LieElement) -> Result<Self, DerivationError> {
        if a_image.alphabet() != t_image.alphabet() {
            return Err(FreeLieError::AlphabetMismatch.into());
        }
        let alphabet = a_image.alphabet();
        let mut bidegree = None;
        for (letter, img) in [(0u8, &a_image), (1u8, &t_image)] {
            if img.is_zero() {
                continue;
            }
            let mu = img
                .homogeneous_multidegree()
                .ok_or(DerivationError::InhomogeneousImages)?;
            let base = Word::letter(letter).multidegree();
            let d = (
                mu.m_weight(alphabet) - base.m_weight(alphabet),
                mu.w_weight(alphabet) - base.w_weight(alphabet),
            );
            match bidegree {
                None => bidegree = Some(d),
                Some(prev) if prev != d => return Err(DerivationError::InhomogeneousImages),
                _ => {}
            }
        }
        let nc_images = [a_image.nc(), t_image.nc()];
        Ok(Derivation {
            alphabet,
            images: [a_image, t_image],
            nc_images,
            bidegree,
        })
    }

    /// The inner derivation `x -> [u, x]`.
    pub fn inner(u: &LieElement) -> Result<Self, DerivationError> {
        let alphabet = u.alphabet();
        let a = LieElement::generator(alphabet, 0);
        let t = LieElement::generator(alphabet, 1);
        Derivation::from_images(u.bracket(&a)?, u.bracket(&t)?)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn image(&self, letter: u8) -> &LieElement {
        &self.images[usize::from(letter)]
    }

    pub fn image_of_a(&self) -> &LieElement {
        &self.images[0]
    }

    pub fn image_of_t(&self) -> &LieElement {
        &self.images[1]
    }

    pub fn is_zero(&self) -> bool {
        self.images[0].is_zero() && self.images[1].is_zero()
    }

    /// `(dM, dW)`; `None` for the zero derivation.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        self.bidegree
    }

    /// Leibniz extension to arbitrary elements.
    pub fn apply(&self, x: &LieElement) -> LieElement {
        assert_eq!(
            self.alphabet,
            x.alphabet(),
            "derivation applied across alphabets"
        );
        let mut out = NcPoly::zero();
        for (_, p) in x.components() {
            out.add_assign(&p.apply_derivation([&self.nc_images[0], &self.nc_images[1]]));
        }
        LieElement::from_ncpoly_unchecked(self.alphabet, out)
    }

    /// Leibniz extension on raw tensor words.
    pub fn apply_nc(&self, p: &NcPoly) -> NcPoly {
        p.apply_derivation([&self.nc_images[0], &self.nc_images[1]])
    }

    #[must_use]
    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Derivation::zero(self.alphabet);
        }
        Derivation {
            alphabet: self.alphabet,
            images: [self.images[0].scale(s), self.images[1].scale(s)],
            nc_images: [self.nc_images[0].scale(s), self.nc_images[1].scale(s)],
            bidegree: self.bidegree,
        }
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    /// Sum of derivations of one common bidegree. Panics when the terms
    /// are homogeneous of different bidegrees; inhomogeneous operators
    /// must be kept as explicit lists instead.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.alphabet, other.alphabet,
            "derivation sum across alphabets"
        );
        match (self.bidegree, other.bidegree) {
            (Some(x), Some(y)) if x != y => {
                panic!("derivation sum would be inhomogeneous: {x:?} vs {y:?}")
            }
            _ => {}
        }
        let a = self.images[0].add(&other.images[0]).expect("same alphabet");
        let t = self.images[1].add(&other.images[1]).expect("same alphabet");
        Derivation::from_images(a, t).expect("sum of equal bidegrees is homogeneous")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `[self, other] = self o other - other o self` on letter images.
    pub fn commutator(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet, "commutator across alphabets");
        let img = |letter: u8| {
            self.apply(other.image(letter))
                .sub(&other.apply(self.image(letter)))
                .expect("same alphabet")
        };
        Derivation::from_images(img(0), img(1))
            .expect("commutator of homogeneous derivations is homogeneous")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}, {} -> {}",
            self.alphabet.letter_name(0),
            self.images[0],
            self.alphabet.letter_name(1),
            self.images[1]
        )
    }
}

#[derive(Serialize, Deserialize)]
struct DerivationJson {
    #[serde(rename = "dA")]
    d_a: LieElement,
    #[serde(rename = "dT")]
    d_t: LieElement,
    #[serde(rename = "dM")]
    d_m: i64,
    #[serde(rename = "dW")]
    d_w: i64,
}

impl Serialize for Derivation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (d_m, d_w) = self.bidegree.unwrap_or((0, 0));
        DerivationJson {
            d_a: self.images[0].clone(),
            d_t: self.images[1].clone(),
            d_m,
            d_w,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Derivation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = DerivationJson::deserialize(deserializer)?;
        let der = Derivation::from_images(raw.d_a, raw.d_t).map_err(D::Error::custom)?;
        if let Some(b) = der.bidegree {
            if b != (raw.d_m, raw.d_w) {
                return Err(D::Error::custom(format!(
                    "declared bidegree ({}, {}) does not match images, which have {:?}",
                    raw.d_m, raw.d_w, b
                )));
            }
        }
        Ok(der)
    }
}

fn letter_multiple(v: &LieElement) -> Option<(u8, Rat)> {
    let mu = v.homogeneous_multidegree()?;
    let letter = match (mu.0, mu.1) {
        (1, 0) => 0u8,
        (0, 1) => 1u8,
        _ => return None,
    };
    Some((letter, v.component(mu).coeff(&Word::letter(letter))))
}

/// The canonical theta-annihilating derivation of even weight `two_n`
/// attached to an ordered basis of letter multiples `(v1, v2)`.
///
/// For weight zero this is the derivation `v1 -> -v2, v2 -> 0`. For
/// positive weight it is the inner derivation by `ad_{v1}^{2n-1}(v2)`
/// corrected on `v2` so that `[v2, v1]` is annihilated:
///
/// `v2 -> [ad^{2n-1} v2, v2] - sum_{j+k=2n-1, j>k>0} (-1)^j [ad^j v2, ad^k v2]`
///
/// where `ad = ad_{v1}`. Annihilation of the bracket of the letters is
/// asserted unconditionally; a failure means the two published
/// characterizations of the family disagree and must abort the build.
pub fn epsilon(
    two_n: usize,
    v1: &LieElement,
    v2: &LieElement,
) -> Result<Derivation, DerivationError> {
    if two_n % 2 != 0 {
        return Err(DerivationError::OddWeight(two_n));
    }
    if v1.alphabet() != v2.alphabet() {
        return Err(FreeLieError::AlphabetMismatch.into());
    }
    let alphabet = v1.alphabet();
    let (l1, c1) = letter_multiple(v1).ok_or(DerivationError::NotLetterMultiple)?;
    let (l2, c2) = letter_multiple(v2).ok_or(DerivationError::NotLetterMultiple)?;
    if l1 == l2 {
        return Err(DerivationError::SameLetter);
    }
    let g1 = LieElement::generator(alphabet, l1);
    let g2 = LieElement::generator(alphabet, l2);

    let der = if two_n == 0 {
        // -v2 d/dv1, with d/dv1 rescaled by 1/c1.
        let mut images = [LieElement::zero(alphabet), LieElement::zero(alphabet)];
        images[usize::from(l1)] = g2.scale(&-(c2.clone() / c1.clone()));
        let [a, t] = images;
        Derivation::from_images(a, t)?
    } else {
        let order = two_n - 1;
        let mut pows = Vec::with_capacity(order + 1);
        pows.push(g2.clone());
        for _ in 0..order {
            let next = g1.bracket(pows.last().unwrap())?;
            pows.push(next);
        }
        let main = Derivation::inner(&pows[order])?;
        let mut corr = LieElement::zero(alphabet);
        for j in 1..order {
            let k = order - j;
            if j > k {
                let term = pows[j].bracket(&pows[k])?;
                let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
                corr = corr.add(&term.scale(&sign))?;
            }
        }
        let mut images = [LieElement::zero(alphabet), LieElement::zero(alphabet)];
        images[usize::from(l2)] = corr;
        let [a, t] = images;
        let correction = Derivation::from_images(a, t)?;
        let pure = main.sub(&correction);
        pure.scale(&(c1.pow(order as u32) * c2.clone()))
    };

    let theta = LieElement::theta(alphabet);
    assert!(
        der.apply(&theta).is_zero(),
        "epsilon({two_n}) fails to annihilate the bracket of the letters; \
         the closed formula disagrees with the defining characterization"
    );

    #[cfg(debug_assertions)]
    if two_n >= 2 && alphabet == Alphabet::AT && (l1, l2) == (1, 0) && c1.is_one() && c2.is_one() {
        let solved = solve_epsilon_a_image(two_n);
        assert_eq!(
            Some(der.image(0).clone()),
            solved,
            "epsilon({two_n}): closed formula disagrees with the unique \
             solution of the annihilation constraint"
        );
    }

    Ok(der)
}

/// Independent characterization of the standard weight-`two_n` derivation:
/// its image on the second letter is pinned to `-ad_T^{2n}(A)`, and the
/// image on the first letter is then the unique solution x of
/// `[T, x] = [A, image_of_T]` in the (2, 2n-1) component. Returns `None`
/// if the solution fails to exist or be unique.
fn solve_epsilon_a_image(two_n: usize) -> Option<LieElement> {
    use crate::freelie::{expand_bracketing, lie_coords, lyndon_words};
    use crate::linalg::QMat;

    let alphabet = Alphabet::AT;
    let a = LieElement::generator(alphabet, 0);
    let t = LieElement::generator(alphabet, 1);
    let d_t = LieElement::ad_pow(&t, two_n, &a).ok()?.neg();

    let mu_dom = MultiDegree(2, two_n - 1);
    let mu_cod = MultiDegree(2, two_n);
    let basis = lyndon_words(mu_dom);
    let cod_basis = lyndon_words(mu_cod);
    let mut m = QMat::zero(cod_basis.len(), basis.len());
    for (j, w) in basis.iter().enumerate() {
        let bw = LieElement::from_ncpoly_unchecked(alphabet, (*expand_bracketing(w)).clone());
        let col = t.bracket(&bw).ok()?;
        for (i, c) in col.lyndon_coordinates(mu_cod).into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    if !m.kernel().is_empty() {
        return None;
    }
    let rhs_elt = a.bracket(&d_t).ok()?;
    let rhs = lie_coords(mu_cod, &rhs_elt.component(mu_cod)).ok()?;
    let coords = m.solve(&rhs)?;
    LieElement::from_lyndon_coords(alphabet, mu_dom, &coords).ok()
}

/// The standard specialization: first slot the larger letter, second the
/// smaller. Weight zero gives the operator `T -> -A, A -> 0`.
pub fn epsilon_std(two_n: usize) -> Result<Derivation, DerivationError> {
    let a = LieElement::generator(Alphabet::AT, 0);
    let t = LieElement::generator(Alphabet::AT, 1);
    epsilon(two_n, &t, &a)
}

/// The swapped specialization (lowest-weight partners of the standard
/// family).
pub fn epsilon_check(two_n: usize) -> Result<Derivation, DerivationError> {
    let a = LieElement::generator(Alphabet::AT, 0);
    let t = LieElement::generator(Alphabet::AT, 1);
    epsilon(two_n, &a, &t)
}

/// `true` iff the derivation annihilates the bracket of the letters.
pub fn is_der0(d: &Derivation) -> bool {
    d.apply(&LieElement::theta(d.alphabet())).is_zero()
}

/// `ad_x^k(y)` in the derivation algebra.
pub fn ad_pow(x: &Derivation, k: usize, y: &Derivation) -> Derivation {
    let mut acc = y.clone();
    for _ in 0..k {
        acc = x.commutator(&acc);
    }
    acc
}

/// The sl2 triple acting on the derivation algebra by commutator.
pub struct Sl2 {
    /// The weight-zero member of the standard family; shifts M by -2.
    pub lowering: Derivation,
    /// `T -> T, A -> -A`.
    pub cartan: Derivation,
    /// `A -> -T, T -> 0`; normalized so [raising, lowering] = cartan.
    pub raising: Derivation,
}

pub fn sl2_triple() -> Sl2 {
    let alphabet = Alphabet::AT;
    let a = LieElement::generator(alphabet, 0);
    let t = LieElement::generator(alphabet, 1);
    Sl2 {
        lowering: epsilon_std(0).expect("even weight"),
        cartan: Derivation::from_images(a.neg(), t.clone()).expect("homogeneous"),
        raising: Derivation::from_images(t.neg(), LieElement::zero(alphabet)).expect("homogeneous"),
    }
}

/// Truncation of the logarithm of monodromy around the nodal degeneration:
/// the terms `(2m-1) B_{2m}/(2m)! epsilon_{2m}` for `0 <= 2m <= w_max`,
/// one homogeneous derivation per W-weight.
pub fn monodromy_log(w_max: usize) -> Result<Vec<Derivation>, DerivationError> {
    if w_max % 2 != 0 {
        return Err(DerivationError::OddWeight(w_max));
    }
    let mut terms = Vec::with_capacity(w_max / 2 + 1);
    for m in 0..=w_max / 2 {
        let coeff = Rat::from_int(2 * m as i64 - 1) * bernoulli(2 * m as u64)
            / Rat::from_int(factorial(2 * m as u64));
        terms.push(epsilon_std(2 * m)?.scale(&coeff));
    }
    Ok(terms)
}

/// The canonical highest-weight bracket of two members of the standard
/// family:
///
/// `sum_{i+j=d-2} (-1)^i C(d-2,i) (2a-i)!(2b-j)!/((2a)!(2b)!)
///      [ad_lowering^i(eps_{2a+2}), ad_lowering^j(eps_{2b+2})]`
///
/// Zero when `a` or `b` is zero. Requires `2 <= d` and `d-2 <= 2 min(a,b)`.
pub fn w_pollack(d: usize, a: usize, b: usize) -> Result<Derivation, DerivationError> {
    if a == 0 || b == 0 {
        return Ok(Derivation::zero(Alphabet::AT));
    }
    assert!(
        d >= 2 && d - 2 <= 2 * a.min(b),
        "w_pollack requires 2 <= d and d-2 <= 2 min(a,b); got d={d}, a={a}, b={b}"
    );
    let e0 = epsilon_std(0)?;
    let order = d - 2;
    let mut left = Vec::with_capacity(order + 1);
    left.push(epsilon_std(2 * a + 2)?);
    let mut right = Vec::with_capacity(order + 1);
    right.push(epsilon_std(2 * b + 2)?);
    for _ in 0..order {
        left.push(e0.commutator(left.last().unwrap()));
        right.push(e0.commutator(right.last().unwrap()));
    }
    let denom = factorial(2 * a as u64) * factorial(2 * b as u64);
    let mut acc = Derivation::zero(Alphabet::AT);
    for i in 0..=order {
        let j = order - i;
        let mut num = binomial(order as u64, i as u64)
            * factorial((2 * a - i) as u64)
            * factorial((2 * b - j) as u64);
        if i % 2 == 1 {
            num = -num;
        }
        let coeff = Rat::new(num, denom.clone()).expect("nonzero denominator");
        acc = acc.add(&left[i].commutator(&right[j]).scale(&coeff));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::parse_lie_expr;

    fn gen(l: u8) -> LieElement {
        LieElement::generator(Alphabet::AT, l)
    }

    fn parse(s: &str) -> LieElement {
        parse_lie_expr(Alphabet::AT, s).unwrap()
    }

    #[test]
    fn weight_zero_images() {
        let e0 = epsilon_std(0).unwrap();
        assert_eq!(e0.image_of_t(), &gen(0).neg());
        assert!(e0.image_of_a().is_zero());
        assert_eq!(e0.bidegree(), Some((-2, 0)));
        assert!(is_der0(&e0));
    }

    #[test]
    fn weight_two_is_inner_by_theta() {
        let e2 = epsilon_std(2).unwrap();
        let theta = LieElement::theta(Alphabet::AT);
        assert_eq!(e2, Derivation::inner(&theta).unwrap());
        assert_eq!(e2.image_of_t(), &parse("-[T,[T,A]]"));
        assert_eq!(e2.image_of_a(), &parse("[[T,A],A]"));
        // Swapped slots give the negative.
        let e2c = epsilon_check(2).unwrap();
        assert_eq!(e2c, Derivation::inner(&theta).unwrap().neg());
    }

    #[test]
    fn weight_four_images_match_defining_sum() {
        let e4 = epsilon_std(4).unwrap();
        assert_eq!(e4.image_of_t(), &parse("-[T,[T,[T,[T,A]]]]"));
        assert_eq!(
            e4.image_of_a(),
            &parse("[[T,[T,[T,A]]],A] - [[T,[T,A]],[T,A]]")
        );
        assert_eq!(e4.bidegree(), Some((-2, -4)));
    }

    #[test]
    fn annihilation_constraint_has_unique_solution_matching_formula() {
        // Independent oracle: the A-image is pinned by the T-image, the
        // annihilation constraint, and injectivity of bracketing with T.
        for n in 1..=4usize {
            let solved = solve_epsilon_a_image(2 * n).expect("unique solution");
            let closed = epsilon_std(2 * n).unwrap();
            assert_eq!(&solved, closed.image_of_a(), "weight {}", 2 * n);
        }
    }

    #[test]
    fn theta_annihilation_through_weight_twelve() {
        for n in 0..=6usize {
            assert!(is_der0(&epsilon_std(2 * n).unwrap()), "weight {}", 2 * n);
            assert!(is_der0(&epsilon_check(2 * n).unwrap()), "weight {}", 2 * n);
        }
        let ad_a = Derivation::inner(&gen(0)).unwrap();
        assert!(!is_der0(&ad_a));
    }

    #[test]
    fn scaling_law() {
        let a = gen(0);
        let t = gen(1);
        for two_n in [0usize, 2, 6] {
            for (c1, c2) in [
                (Rat::from_int(2), Rat::from_int(3)),
                (Rat::frac(-1, 2), Rat::frac(5, 3)),
            ] {
                let scaled = epsilon(two_n, &t.scale(&c1), &a.scale(&c2)).unwrap();
                let base = epsilon(two_n, &t, &a).unwrap();
                let factor = if two_n == 0 {
                    c2.clone() / c1.clone()
                } else {
                    c1.pow(two_n as u32 - 1) * c2.clone()
                };
                assert_eq!(scaled, base.scale(&factor), "weight {two_n}");
            }
        }
    }

    #[test]
    fn epsilon_argument_validation() {
        let a = gen(0);
        let t = gen(1);
        assert_eq!(epsilon(3, &t, &a), Err(DerivationError::OddWeight(3)));
        assert_eq!(
            epsilon(2, &t, &t.scale(&Rat::from_int(2))),
            Err(DerivationError::SameLetter)
        );
        let theta = LieElement::theta(Alphabet::AT);
        assert_eq!(
            epsilon(2, &theta, &a),
            Err(DerivationError::NotLetterMultiple)
        );
        assert_eq!(
            epsilon(2, &LieElement::zero(Alphabet::AT), &a),
            Err(DerivationError::NotLetterMultiple)
        );
    }

    #[test]
    fn sl2_relations() {
        let s = sl2_triple();
        assert_eq!(s.raising.commutator(&s.lowering), s.cartan);
        assert_eq!(
            s.cartan.commutator(&s.lowering),
            s.lowering.scale(&Rat::from_int(-2))
        );
        assert_eq!(
            s.cartan.commutator(&s.raising),
            s.raising.scale(&Rat::from_int(2))
        );
        assert!(s.cartan.apply(&LieElement::theta(Alphabet::AT)).is_zero());
        assert_eq!(s.raising.bidegree(), Some((2, 0)));
        assert_eq!(s.cartan.bidegree(), Some((0, 0)));
    }

    #[test]
    fn standard_family_are_highest_weight_vectors() {
        let s = sl2_triple();
        for n in 1..=3usize {
            let e = epsilon_std(2 * n).unwrap();
            assert!(s.raising.commutator(&e).is_zero(), "weight {}", 2 * n);
            // Cartan eigenvalue is 2n-2.
            assert_eq!(
                s.cartan.commutator(&e),
                e.scale(&Rat::from_int(2 * n as i64 - 2))
            );
        }
    }

    // The published display for the lowest-weight partners reads
    // "(1/(2n-2)!) ad_lowering^{2n-2} (eps_{2n})", but with the
    // conventions fixed here (lowering T -> -A, partners via swapped
    // slots) the transport carries a uniform extra sign: already at
    // weight two the swap gives the negative of the inner derivation by
    // theta while ad^0 is the identity. The exact identity, frozen here
    // and machine-checked through weight sixteen by the acceptance suite,
    // is ad_lowering^{2n-2}(eps_{2n}) = -(2n-2)! eps_check_{2n}.
    #[test]
    fn lowering_transports_standard_family_to_partners() {
        let e0 = epsilon_std(0).unwrap();
        for n in 1..=3usize {
            let e = epsilon_std(2 * n).unwrap();
            let dropped = ad_pow(&e0, 2 * n - 1, &e);
            assert!(dropped.is_zero(), "weight {}", 2 * n);
            let lowest = ad_pow(&e0, 2 * n - 2, &e);
            let expected = epsilon_check(2 * n)
                .unwrap()
                .scale(&-Rat::from_int(factorial(2 * n as u64 - 2)));
            assert_eq!(lowest, expected, "weight {}", 2 * n);
        }
    }

    #[test]
    fn weight_two_is_central() {
        let e2 = epsilon_std(2).unwrap();
        for d in [
            epsilon_std(4).unwrap(),
            epsilon_std(6).unwrap(),
            epsilon_check(4).unwrap(),
            w_pollack(2, 1, 2).unwrap(),
        ] {
            assert!(is_der0(&d));
            assert!(e2.commutator(&d).is_zero());
        }
    }

    #[test]
    fn commutator_bidegrees_add() {
        let e0 = epsilon_std(0).unwrap();
        let e4 = epsilon_std(4).unwrap();
        let c = e0.commutator(&e4);
        assert!(!c.is_zero());
        assert_eq!(c.bidegree(), Some((-4, -4)));
    }

    #[test]
    fn bidegree_bookkeeping_under_application() {
        let e6 = epsilon_std(6).unwrap();
        let x = parse("[T,[T,A]]"); // multidegree (1,2), (M,W) = (-2,-3)
        let y = e6.apply(&x);
        assert_eq!(y.multidegrees(), vec![MultiDegree(2, 7)]); // (-4, -9)
    }

    #[test]
    fn monodromy_log_truncations() {
        let n0 = monodromy_log(0).unwrap();
        assert_eq!(n0, vec![epsilon_std(0).unwrap().neg()]);
        let n2 = monodromy_log(2).unwrap();
        let theta = LieElement::theta(Alphabet::AT);
        assert_eq!(
            n2,
            vec![
                epsilon_std(0).unwrap().neg(),
                Derivation::inner(&theta).unwrap().scale(&Rat::frac(1, 12)),
            ]
        );
        for term in monodromy_log(6).unwrap() {
            assert!(is_der0(&term));
        }
        assert!(monodromy_log(3).is_err());
    }

    #[test]
    fn quadratic_bracket_conventions() {
        assert!(w_pollack(2, 0, 3).unwrap().is_zero());
        assert!(w_pollack(4, 2, 0).unwrap().is_zero());
        // Depth-two bracket of distinct weights is the plain commutator.
        let w = w_pollack(2, 1, 2).unwrap();
        let direct = epsilon_std(4).unwrap().commutator(&epsilon_std(6).unwrap());
        assert_eq!(w, direct);
        assert!(!w.is_zero());
        assert_eq!(w.bidegree(), Some((-4, -10)));
        assert!(w_pollack(2, 1, 1).unwrap().is_zero());
    }

    #[test]
    fn quadratic_bracket_symmetry_and_highest_weight() {
        for (a, b) in [(1usize, 2usize), (1, 3)] {
            let w_ab = w_pollack(3, a, b).unwrap();
            let w_ba = w_pollack(3, b, a).unwrap();
            assert_eq!(w_ab, w_ba, "a={a} b={b}");
        }
        let s = sl2_triple();
        let w = w_pollack(3, 1, 2).unwrap();
        assert!(s.raising.commutator(&w).is_zero());
        assert_eq!(w.bidegree(), Some((-6, -10)));
        // Cartan eigenvalue 2a+2b-2d+4.
        assert_eq!(s.cartan.commutator(&w), w.scale(&Rat::from_int(4)));
    }

    #[test]
    #[should_panic(expected = "w_pollack requires")]
    fn quadratic_bracket_rejects_excessive_depth() {
        let _ = w_pollack(5, 1, 3);
    }

    #[test]
    fn json_roundtrip() {
        let e4 = epsilon_std(4).unwrap();
        let json = serde_json::to_string(&e4).unwrap();
        let back: Derivation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e4);
        assert!(json.contains("\"dM\":-2"));
        assert!(json.contains("\"dW\":-4"));
        // Tampered bidegree is rejected.
        let bad = json.replace("\"dW\":-4", "\"dW\":-6");
        assert!(serde_json::from_str::<Derivation>(&bad).is_err());
    }

    #[test]
    fn inhomogeneous_images_are_rejected() {
        let mixed = gen(0).add(&LieElement::theta(Alphabet::AT)).unwrap();
        assert_eq!(
            Derivation::from_images(mixed, LieElement::zero(Alphabet::AT)),
            Err(DerivationError::InhomogeneousImages)
        );
        // Images whose implied shifts disagree are also rejected.
        let r = Derivation::from_images(gen(0), gen(0));
        assert_eq!(r, Err(DerivationError::InhomogeneousImages));
    }
}
