//! The genus-zero bridge: the embedding of L(X0,X1) into the completed
//! L(A,T) through the sections R0, R1, Rinf, strictness of the depth
//! filtrations under it, and the Ihara-Takao verification pipeline.
//!
//! X0 maps to R0 = (T/(e^T - 1)) A, X1 to R1 = [T,A], and the third section
//! Rinf = (T/(e^{-T} - 1)) A is eliminated through R0 + R1 + Rinf = 0.
//! Everything is truncated at a total degree K; truncation loses no
//! information below K because brackets never lower degree.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::depth::{depth_basis_x, depth_membership_with_bound, DepthError, DEFAULT_DEGREE_BOUND};
use crate::derivation::{epsilon_check, Derivation, DerivationError};
use crate::freelie::{
    cache_cap, expand_bracketing, lyndon_words, standard_factorization, Alphabet, FreeLieError,
    LieElement, MultiDegree, Word, MAX_WORD_LEN,
};
use crate::periodpoly::CoeffFamily;
use crate::scalar::{bernoulli, factorial, Rat};

/// Default truncation degree for the bridge.
pub const DEFAULT_TRUNCATION: usize = 16;

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("truncation {given} is too small; the computation needs at least {needed}")]
    TruncationTooSmall { needed: usize, given: usize },
    #[error(
        "negative strictness certificate not found for depth {d} at ({},{}) within \
         truncation {k}: consistent up to K, not asserted",
        mu.0, mu.1
    )]
    InconclusiveNegative { d: usize, mu: MultiDegree, k: usize },
    #[error(
        "depth-three memberships disagree between the evaluation on A ({on_a}) and \
         on R0 ({on_r0}); this signals a bug"
    )]
    CrossCheckDisagreement { on_a: bool, on_r0: bool },
    #[error("bad coefficient family: {0}")]
    BadCoefficients(String),
    #[error(transparent)]
    Depth(#[from] DepthError),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

/// A series in the completed free Lie algebra, held as one homogeneous
/// component per total degree up to the truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    alphabet: Alphabet,
    truncation: usize,
    components: BTreeMap<usize, LieElement>,
}

impl TruncatedSeries {
    pub fn zero(alphabet: Alphabet, truncation: usize) -> Self {
        TruncatedSeries {
            alphabet,
            truncation,
            components: BTreeMap::new(),
        }
    }

    /// A single exact element viewed as a series.
    pub fn from_element(x: &LieElement, truncation: usize) -> Result<Self, BridgeError> {
        if x.max_total_degree() > truncation {
            return Err(BridgeError::TruncationTooSmall {
                needed: x.max_total_degree(),
                given: truncation,
            });
        }
        let mut out = TruncatedSeries::zero(x.alphabet(), truncation);
        for (&mu, _) in x.components() {
            let piece = LieElement::from_ncpoly_unchecked(x.alphabet(), x.component(mu));
            out.accumulate(mu.total(), &piece);
        }
        Ok(out)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn component(&self, degree: usize) -> LieElement {
        self.components
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| LieElement::zero(self.alphabet))
    }

    pub fn components(&self) -> impl Iterator<Item = (&usize, &LieElement)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn accumulate(&mut self, degree: usize, x: &LieElement) {
        if degree > self.truncation || x.is_zero() {
            return;
        }
        debug_assert!(x.multidegrees().iter().all(|mu| mu.total() == degree));
        let entry = self
            .components
            .remove(&degree)
            .unwrap_or_else(|| LieElement::zero(self.alphabet));
        let sum = entry.add(x).expect("same alphabet");
        if !sum.is_zero() {
            self.components.insert(degree, sum);
        }
    }

    pub fn truncate(&self, k: usize) -> Self {
        let mut out = TruncatedSeries::zero(self.alphabet, k);
        for (&d, x) in &self.components {
            out.accumulate(d, x);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let mut out = self.truncate(self.truncation.min(other.truncation));
        for (&d, x) in &other.components {
            out.accumulate(d, x);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = TruncatedSeries::zero(self.alphabet, self.truncation);
        if s.is_zero() {
            return out;
        }
        for (&d, x) in &self.components {
            out.components.insert(d, x.scale(s));
        }
        out
    }

    /// Componentwise bracket, truncated. Exact below the truncation since
    /// both factors start in degree >= 1.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let k = self.truncation.min(other.truncation);
        let mut out = TruncatedSeries::zero(self.alphabet, k);
        for (&d1, x1) in &self.components {
            for (&d2, x2) in &other.components {
                if d1 + d2 > k {
                    continue;
                }
                let b = x1.bracket(x2).expect("same alphabet");
                out.accumulate(d1 + d2, &b);
            }
        }
        out
    }

    /// The sum of all components as one Lie element (only sensible when the
    /// series is known to be a polynomial).
    pub fn to_element(&self) -> LieElement {
        let mut out = LieElement::zero(self.alphabet);
        for x in self.components.values() {
            out = out.add(x).expect("same alphabet");
        }
        out
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct ComponentJson<'a> {
            degree: usize,
            element: &'a LieElement,
        }
        struct Components<'a>(&'a TruncatedSeries);
        impl Serialize for Components<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.components.len()))?;
                for (&degree, element) in &self.0.components {
                    seq.serialize_element(&ComponentJson { degree, element })?;
                }
                seq.end()
            }
        }
        let mut st = s.serialize_struct("TruncatedSeries", 3)?;
        st.serialize_field("alphabet", self.alphabet.name())?;
        st.serialize_field("truncation", &self.truncation)?;
        st.serialize_field("components", &Components(self))?;
        st.end()
    }
}

/// R0 = (T/(e^T - 1)) A truncated at K: the degree-(n+1) component is
/// (B_n/n!) ad_T^n(A).
pub fn r0(k: usize) -> Result<TruncatedSeries, BridgeError> {
    bernoulli_section(k, false)
}

/// R1 = [T,A], exact at every truncation.
pub fn r1() -> TruncatedSeries {
    let theta = LieElement::theta(Alphabet::AT);
    TruncatedSeries::from_element(&theta, MAX_WORD_LEN).expect("theta fits any truncation")
}

/// Rinf = (T/(e^{-T} - 1)) A truncated at K; the degree-(n+1) component is
/// -(-1)^n (B_n/n!) ad_T^n(A), so that R0 + R1 + Rinf = 0 exactly.
pub fn rinf(k: usize) -> Result<TruncatedSeries, BridgeError> {
    bernoulli_section(k, true)
}

fn bernoulli_section(k: usize, infinity: bool) -> Result<TruncatedSeries, BridgeError> {
    if k < 1 {
        return Err(BridgeError::TruncationTooSmall {
            needed: 1,
            given: k,
        });
    }
    let a = LieElement::generator(Alphabet::AT, 0);
    let t = LieElement::generator(Alphabet::AT, 1);
    let mut out = TruncatedSeries::zero(Alphabet::AT, k);
    for n in 0..k {
        let mut coeff = bernoulli(n as u64) / Rat::from_int(factorial(n as u64));
        if infinity {
            coeff = -coeff;
            if n % 2 == 1 {
                coeff = -coeff;
            }
        }
        if coeff.is_zero() {
            continue;
        }
        let term = LieElement::ad_pow(&t, n, &a)?.scale(&coeff);
        out.accumulate(n + 1, &term);
    }
    Ok(out)
}

type EmbedKey = (Word, usize);

fn embed_cache() -> &'static Mutex<HashMap<EmbedKey, Arc<TruncatedSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<EmbedKey, Arc<TruncatedSeries>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn embed_word(w: &Word, k: usize) -> Result<Arc<TruncatedSeries>, BridgeError> {
    let key = (*w, k);
    if let Some(hit) = embed_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(hit));
    }
    let series = if w.len() == 1 {
        match w.get(0) {
            0 => r0(k)?,
            _ => r1().truncate(k),
        }
    } else {
        let (u, v) = standard_factorization(w);
        let left = embed_word(&u, k)?;
        let right = embed_word(&v, k)?;
        left.bracket(&right)
    };
    let arc = Arc::new(series);
    let mut cache = embed_cache().lock().unwrap();
    if cache.len() >= cache_cap() {
        cache.clear();
    }
    cache.insert(key, Arc::clone(&arc));
    Ok(arc)
}

/// Substitute X0 -> R0 and X1 -> R1 in `x` and expand, truncating at K.
pub fn embed(x: &LieElement, k: usize) -> Result<TruncatedSeries, BridgeError> {
    assert_eq!(x.alphabet(), Alphabet::X01, "embed expects L(X0,X1) input");
    if x.max_total_degree() > k {
        return Err(BridgeError::TruncationTooSmall {
            needed: x.max_total_degree(),
            given: k,
        });
    }
    let mut out = TruncatedSeries::zero(Alphabet::AT, k);
    for (&mu, _) in x.components() {
        let coords = x.lyndon_coordinates(mu);
        let words = lyndon_words(mu);
        for (c, w) in coords.iter().zip(words.iter()) {
            if c.is_zero() {
                continue;
            }
            let series = embed_word(w, k)?;
            out = out.add(&series.scale(c));
        }
    }
    Ok(out)
}

/// Strictness of the depth filtration at one multidegree piece of
/// L(X0,X1): basis vectors of D^d embed into D^d componentwise, and for
/// every complement basis vector some component leaves D^d (a certified
/// negative). A complement vector staying inside through K is reported as
/// inconclusive rather than asserted either way.
pub fn strictness_check(d: usize, mu: MultiDegree, k: usize) -> Result<bool, BridgeError> {
    if k < mu.total() {
        return Err(BridgeError::TruncationTooSmall {
            needed: mu.total(),
            given: k,
        });
    }
    let bound = k.max(DEFAULT_DEGREE_BOUND);
    let basis = depth_basis_x(d, mu)?;
    for v in basis.vectors() {
        let series = embed(&v, k)?;
        for (_, comp) in series.components() {
            if !depth_membership_with_bound(comp, d, bound)? {
                return Ok(false);
            }
        }
    }
    // Complement vectors: the Lyndon directions missing from the basis.
    let words = lyndon_words(mu);
    let piece_dim = words.len();
    let mut pivots = basis.row_space().pivot_columns().iter().copied().peekable();
    for c in 0..piece_dim {
        if pivots.peek() == Some(&c) {
            pivots.next();
            continue;
        }
        let vec = LieElement::from_ncpoly_unchecked(
            Alphabet::X01,
            (*expand_bracketing(&words[c])).clone(),
        );
        let series = embed(&vec, k)?;
        let mut found_failure = false;
        for (_, comp) in series.components() {
            if !depth_membership_with_bound(comp, d, bound)? {
                found_failure = true;
                break;
            }
        }
        if !found_failure {
            return Err(BridgeError::InconclusiveNegative { d, mu, k });
        }
    }
    Ok(true)
}

/// The Ihara-Takao congruence at a cusp-form weight 2n+2: whether
/// sum_a c_a [eps-check_{2a+2}, eps-check_{2b+2}] (a+b = n) lands in D^3,
/// evaluated on the generator A and, as an independent route, on R0(K).
/// The two routes must agree; disagreement is an error, not a result.
pub fn ihara_takao(weight: usize, c: &CoeffFamily, k: usize) -> Result<bool, BridgeError> {
    if weight % 2 != 0 || weight < 4 {
        return Err(BridgeError::BadCoefficients(format!(
            "weight {} is not an even cusp-form weight",
            weight
        )));
    }
    let n = (weight - 2) / 2;
    if c.sum != n {
        return Err(BridgeError::BadCoefficients(format!(
            "family indexed by a+b = {}, expected {}",
            c.sum, n
        )));
    }
    for a in 0..=n {
        if &c.c[a] + &c.c[n - a] != Rat::zero() {
            return Err(BridgeError::BadCoefficients(
                "family is not antisymmetric (c_a + c_b != 0)".into(),
            ));
        }
    }
    let mut delta = Derivation::zero(Alphabet::AT);
    for a in 0..=n {
        if c.c[a].is_zero() {
            continue;
        }
        let b = n - a;
        let term = epsilon_check(2 * a + 2)?.commutator(&epsilon_check(2 * b + 2)?);
        delta = delta.add(&term.scale(&c.c[a]));
    }

    let on_a = depth_membership_with_bound(
        &delta.apply(&LieElement::generator(Alphabet::AT, 0)),
        3,
        k.max(DEFAULT_DEGREE_BOUND).max(weight + 1),
    )?;

    let mut on_r0 = true;
    let bound = k.max(DEFAULT_DEGREE_BOUND);
    for (&deg, comp) in r0(k)?.components() {
        if deg + weight > k {
            continue;
        }
        let image = delta.apply(comp);
        if !depth_membership_with_bound(&image, 3, bound)? {
            on_r0 = false;
            break;
        }
    }

    if on_a != on_r0 {
        return Err(BridgeError::CrossCheckDisagreement { on_a, on_r0 });
    }
    Ok(on_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::parse_lie_expr;
    use crate::periodpoly::{even_cuspidal_families, relation_coeffs};

    fn at(expr: &str) -> LieElement {
        parse_lie_expr(Alphabet::AT, expr).unwrap()
    }

    fn x(expr: &str) -> LieElement {
        parse_lie_expr(Alphabet::X01, expr).unwrap()
    }

    #[test]
    fn genus_zero_sections_small_terms() {
        let s = r0(3).unwrap();
        assert_eq!(s.component(1), at("A"));
        assert_eq!(s.component(2), at("-1/2*[T,A]"));
        assert_eq!(s.component(3), at("1/12*[T,[T,A]]"));
        assert_eq!(s.component(4), LieElement::zero(Alphabet::AT));

        assert_eq!(r1().component(2), at("[T,A]"));
        assert!(r1().component(3).is_zero());

        let inf = rinf(3).unwrap();
        assert_eq!(inf.component(1), at("-A"));
        assert_eq!(inf.component(2), at("-1/2*[T,A]"));
        assert_eq!(inf.component(3), at("-1/12*[T,[T,A]]"));
    }

    #[test]
    fn sections_sum_to_zero_at_every_truncation() {
        for k in 1..=16usize {
            let sum = r0(k).unwrap().add(&r1()).add(&rinf(k).unwrap());
            assert!(sum.is_zero(), "K = {}", k);
        }
    }

    #[test]
    fn embedding_of_the_generators() {
        let k = 8;
        assert_eq!(embed(&x("X1"), k).unwrap(), r1().truncate(k));
        assert_eq!(embed(&x("X0"), k).unwrap(), r0(k).unwrap());

        // Lowest term of [X0, X1]: the bracket of the leading terms.
        let s = embed(&x("[X0,X1]"), 6).unwrap();
        assert!(s.component(1).is_zero());
        assert!(s.component(2).is_zero());
        assert_eq!(s.component(3), at("[A,[T,A]]"));
    }

    #[test]
    fn embedding_is_a_lie_homomorphism_on_small_elements() {
        let mut basis = Vec::new();
        for total in 1..=4usize {
            for n0 in 0..=total {
                let mu = MultiDegree(n0, total - n0);
                for w in lyndon_words(mu).iter() {
                    basis.push(LieElement::from_ncpoly_unchecked(
                        Alphabet::X01,
                        (*expand_bracketing(w)).clone(),
                    ));
                }
            }
        }
        let k = 8;
        for p in &basis {
            for q in &basis {
                if p.max_total_degree() + q.max_total_degree() > k {
                    continue;
                }
                let lhs = embed(&p.bracket(q).unwrap(), k).unwrap();
                let rhs = embed(p, k).unwrap().bracket(&embed(q, k).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn strictness_examples() {
        assert!(strictness_check(1, MultiDegree(2, 1), 8).unwrap());
        assert!(strictness_check(2, MultiDegree(1, 2), 10).unwrap());
        // X0 alone: its image contains A, which already fails depth one.
        assert!(strictness_check(1, MultiDegree(1, 0), 6).unwrap());
    }

    #[test]
    fn truncation_preconditions() {
        assert!(matches!(
            embed(&x("[X0,[X0,X1]]"), 2),
            Err(BridgeError::TruncationTooSmall {
                needed: 3,
                given: 2
            })
        ));
        assert!(matches!(
            strictness_check(1, MultiDegree(3, 2), 4),
            Err(BridgeError::TruncationTooSmall {
                needed: 5,
                given: 4
            })
        ));
    }

    #[test]
    fn ihara_takao_at_weight_twelve() {
        let line = &even_cuspidal_families(10).unwrap()[0];
        let family = relation_coeffs(10, 2, line).unwrap();
        assert!(ihara_takao(12, &family, 16).unwrap());

        // A generic antisymmetric family off the cocycle line fails.
        let generic = CoeffFamily {
            d: 2,
            sum: 5,
            c: [0i64, 1, 0, 0, -1, 0]
                .iter()
                .map(|&v| Rat::from(v))
                .collect(),
        };
        assert!(!ihara_takao(12, &generic, 16).unwrap());
    }

    #[test]
    fn ihara_takao_at_weight_fourteen_always_fails() {
        // No cusp forms in weight 14, so no nonzero family works.
        for c in [
            [0i64, 1, 0, 0, 0, -1, 0],
            [0, 0, 1, 0, -1, 0, 0],
            [0, 2, -5, 0, 5, -2, 0],
        ] {
            let family = CoeffFamily {
                d: 2,
                sum: 6,
                c: c.iter().map(|&v| Rat::from(v)).collect(),
            };
            assert!(!ihara_takao(14, &family, 16).unwrap(), "{:?}", c);
        }
    }

    #[test]
    fn bad_families_are_rejected() {
        let family = CoeffFamily {
            d: 2,
            sum: 5,
            c: [0i64, 1, 0, 0, 1, 0]
                .iter()
                .map(|&v| Rat::from(v))
                .collect(),
        };
        assert!(matches!(
            ihara_takao(12, &family, 16),
            Err(BridgeError::BadCoefficients(_))
        ));
        assert!(matches!(
            ihara_takao(13, &family, 16),
            Err(BridgeError::BadCoefficients(_))
        ));
    }

    #[test]
    fn series_serialization_shape() {
        let s = embed(&x("X1"), 4).unwrap();
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            "{\"alphabet\":\"AT\",\"truncation\":4,\"components\":[{\"degree\":2,\
             \"element\":{\"alphabet\":\"AT\",\"terms\":[{\"word\":\"AT\",\"coeff\":\"-1\"},\
             {\"word\":\"TA\",\"coeff\":\"1\"}]}}]}"
        );
    }
}
